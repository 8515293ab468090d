"""Linear platform power model."""

from dataclasses import dataclass

from ..core.types import PlatformSpec
from ..errors import ValidationError

DECISION_INTERVAL_S = 900.0


@dataclass(frozen=True)
class EnergyReport:
    cpu_total: float
    power_w: float
    interval_s: float
    energy_j: float

    def to_dict(self):
        return {
            "cpu_total": self.cpu_total,
            "power_w": self.power_w,
            "interval_s": self.interval_s,
            "energy_j": self.energy_j,
        }


def energy(cpu_total: float, spec: PlatformSpec, interval_s: float = DECISION_INTERVAL_S) -> EnergyReport:
    """Power and energy of the platform running ``cpu_total`` busy cores."""
    if cpu_total < 0:
        raise ValidationError(f"cpu_total must be >= 0, got {cpu_total}")
    if interval_s <= 0:
        raise ValidationError(f"interval_s must be > 0, got {interval_s}")
    power_w = spec.idle_power_w + spec.watts_per_core * cpu_total
    return EnergyReport(
        cpu_total=cpu_total,
        power_w=power_w,
        interval_s=interval_s,
        energy_j=power_w * interval_s,
    )

