"""Domain types for cache-way allocation on a shared vRAN platform.

All types are frozen dataclasses validated eagerly in ``__post_init__``;
an invalid value never exists.
"""

import math
import numbers
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..errors import ConstraintViolationError, InfeasibleError, ValidationError

SNR_MAX_DB = 30.0
MCS_MAX = 27


def _require(condition: bool, message: str, error=ValidationError) -> None:
    if not condition:
        raise error(message)


def _is_int(value: Any) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


@dataclass(frozen=True)
class VbsContext:
    """Operating point of one virtual base station."""

    d_ul: float
    d_dl: float
    snr: float
    mcs_ul: int
    mcs_dl: int

    def __post_init__(self):
        for name in ("d_ul", "d_dl"):
            value = getattr(self, name)
            _require(
                math.isfinite(value) and 0.0 <= value <= 1.0,
                f"{name} must be in [0, 1], got {value}",
            )
        _require(
            math.isfinite(self.snr) and 0.0 <= self.snr <= SNR_MAX_DB,
            f"snr must be in [0, {SNR_MAX_DB:g}] dB, got {self.snr}",
        )
        for name in ("mcs_ul", "mcs_dl"):
            value = getattr(self, name)
            _require(
                _is_int(value) and 0 <= value <= MCS_MAX,
                f"{name} must be an integer in [0, {MCS_MAX}], got {value!r}",
            )
            object.__setattr__(self, name, int(value))

    @property
    def total_demand(self) -> float:
        return self.d_ul + self.d_dl

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d_ul": self.d_ul,
            "d_dl": self.d_dl,
            "snr": self.snr,
            "mcs_ul": self.mcs_ul,
            "mcs_dl": self.mcs_dl,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VbsContext":
        return cls(
            d_ul=float(data["d_ul"]),
            d_dl=float(data["d_dl"]),
            snr=float(data["snr"]),
            mcs_ul=int(data["mcs_ul"]),
            mcs_dl=int(data["mcs_dl"]),
        )


@dataclass(frozen=True)
class PlatformSpec:
    """Compute platform shared by the deployed vBS instances."""

    m_cores: int
    n_llc: int
    n_vbs: int
    core_sets: Tuple[int, ...]
    idle_power_w: float = 120.0
    watts_per_core: float = 9.0

    def __post_init__(self):
        object.__setattr__(self, "core_sets", tuple(self.core_sets))
        _require(self.n_vbs >= 1, f"n_vbs must be >= 1, got {self.n_vbs}")
        _require(
            self.n_llc >= self.n_vbs,
            f"n_llc ({self.n_llc}) must be >= n_vbs ({self.n_vbs})",
            InfeasibleError,
        )
        _require(
            len(self.core_sets) == self.n_vbs,
            f"core_sets has {len(self.core_sets)} entries, expected {self.n_vbs}",
        )
        _require(
            all(_is_int(c) and c >= 1 for c in self.core_sets),
            f"every core set needs >= 1 core, got {list(self.core_sets)}",
        )
        object.__setattr__(self, "core_sets", tuple(int(c) for c in self.core_sets))
        _require(
            sum(self.core_sets) <= self.m_cores,
            f"core sets use {sum(self.core_sets)} cores, platform has {self.m_cores}",
        )
        _require(self.idle_power_w > 0, "idle_power_w must be > 0")
        _require(self.watts_per_core > 0, "watts_per_core must be > 0")

    @classmethod
    def equal_split(
        cls,
        m_cores: int = 12,
        n_llc: int = 12,
        n_vbs: int = 5,
        idle_power_w: float = 120.0,
        watts_per_core: float = 9.0,
    ) -> "PlatformSpec":
        """Give every vBS floor(m_cores / n_vbs) cores; the rest stay free."""
        per_vbs = m_cores // n_vbs
        _require(per_vbs >= 1, f"{m_cores} cores cannot host {n_vbs} vBS", InfeasibleError)
        return cls(
            m_cores=m_cores,
            n_llc=n_llc,
            n_vbs=n_vbs,
            core_sets=(per_vbs,) * n_vbs,
            idle_power_w=idle_power_w,
            watts_per_core=watts_per_core,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m_cores": self.m_cores,
            "n_llc": self.n_llc,
            "n_vbs": self.n_vbs,
            "core_sets": list(self.core_sets),
            "idle_power_w": self.idle_power_w,
            "watts_per_core": self.watts_per_core,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PlatformSpec":
        return cls(
            m_cores=int(data["m_cores"]),
            n_llc=int(data["n_llc"]),
            n_vbs=int(data["n_vbs"]),
            core_sets=tuple(int(c) for c in data["core_sets"]),
            idle_power_w=float(data.get("idle_power_w", 120.0)),
            watts_per_core=float(data.get("watts_per_core", 9.0)),
        )


@dataclass(frozen=True)
class LlcAllocation:
    """Cache ways granted to each vBS, in vBS index order.

    A full allocation hands out exactly ``n_llc`` ways. ``partial=True``
    admits allocations that leave ways unassigned (equal partitioning).
    """

    ways: Tuple[int, ...]
    n_llc: int
    partial: bool = False
    fallback: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ways", tuple(self.ways))
        _require(len(self.ways) >= 1, "allocation needs at least one vBS", ConstraintViolationError)
        _require(
            all(_is_int(n) and n >= 1 for n in self.ways),
            f"every vBS needs >= 1 way, got {list(self.ways)}",
            ConstraintViolationError,
        )
        object.__setattr__(self, "ways", tuple(int(n) for n in self.ways))
        total = sum(self.ways)
        if self.partial:
            _require(
                total <= self.n_llc,
                f"allocation uses {total} ways, only {self.n_llc} exist",
                ConstraintViolationError,
            )
        else:
            _require(
                total == self.n_llc,
                f"allocation must use exactly {self.n_llc} ways, got {total}",
                ConstraintViolationError,
            )

    @property
    def unallocated(self) -> int:
        return self.n_llc - sum(self.ways)

    def to_text(self) -> str:
        """Compact text form, e.g. ``3-3-2-2-2``."""
        return "-".join(str(n) for n in self.ways)

    @classmethod
    def from_text(cls, text: str, n_llc: int, partial: bool = False) -> "LlcAllocation":
        return cls(tuple(int(part) for part in text.split("-")), n_llc, partial)


@dataclass(frozen=True)
class GlobalContext:
    """Contexts of all vBS instances, in vBS index order."""

    contexts: Tuple[VbsContext, ...]

    def __post_init__(self):
        object.__setattr__(self, "contexts", tuple(self.contexts))

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self):
        return iter(self.contexts)

    def __getitem__(self, index: int) -> VbsContext:
        return self.contexts[index]

    def validate_for(self, spec: PlatformSpec) -> "GlobalContext":
        _require(
            len(self.contexts) == spec.n_vbs,
            f"global context has {len(self.contexts)} vBS, platform expects {spec.n_vbs}",
        )
        return self


@dataclass(frozen=True)
class TwinSample:
    """One digital-twin training record: context, cores, ways and cpu usage."""

    context: VbsContext
    cores: int
    ways: int
    cpu_usage: float

    def __post_init__(self):
        _require(_is_int(self.cores) and self.cores >= 1, f"cores must be >= 1, got {self.cores}")
        _require(_is_int(self.ways) and self.ways >= 1, f"ways must be >= 1, got {self.ways}")
        object.__setattr__(self, "cores", int(self.cores))
        object.__setattr__(self, "ways", int(self.ways))
        _require(
            0.0 < self.cpu_usage <= self.cores,
            f"cpu_usage must be in (0, {self.cores}], got {self.cpu_usage}",
        )

    def validate_for(self, spec: PlatformSpec) -> "TwinSample":
        _require(
            self.ways <= spec.n_llc,
            f"ways must be in [1, {spec.n_llc}], got {self.ways}",
            ConstraintViolationError,
        )
        _require(
            self.cores <= spec.m_cores,
            f"cores must be <= {spec.m_cores}, got {self.cores}",
        )
        return self

