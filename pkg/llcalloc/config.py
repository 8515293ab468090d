"""
Run configuration for the llcalloc pipeline.

A run is described by one JSON document holding the platform, the oracle
coefficients, both training setups, dataset sizes and the master seed.
Every random stream of a run is derived from that seed.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from .core.types import PlatformSpec
from .errors import ArtifactIOError, ConfigError, ValidationError
from .nn.training import TrainConfig
from .oracle.compute import OracleParams
from .oracle.energy import DECISION_INTERVAL_S
from .oracle.sampling import PROFILES
from .utils.seeds import derive_seed
from .utils.splits import MIN_SPLIT_CONTEXTS

DEFAULT_OUTPUT_DIR = "runs/default"


def default_twin_train() -> TrainConfig:
    return TrainConfig(learning_rate=1e-3, batch_size=64, max_iterations=200, patience=10, loss="mse")


def default_clf_train() -> TrainConfig:
    return TrainConfig(
        learning_rate=1e-3, batch_size=64, max_iterations=1000, patience=50, loss="cross_entropy"
    )


def _train_parser(default: Callable[[], TrainConfig]) -> Callable[[Dict[str, Any]], TrainConfig]:
    """Parse a training section, taking missing keys from the stage default."""
    def parse(data: Dict[str, Any]) -> TrainConfig:
        return TrainConfig.from_dict({**default().to_dict(), **data})
    return parse


@dataclass(frozen=True)
class SizesConfig:
    """Number of contexts drawn for each stage."""
    twin_contexts: int = 2000
    classifier_contexts: int = 5000
    eval_contexts: int = 500

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SizesConfig":
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ValidationError(f"unknown sizes: {sorted(unknown)}")
        return cls(**{key: int(value) for key, value in data.items()})


@dataclass
class RunConfig:
    """Configuration of one reproducible pipeline run."""
    platform: PlatformSpec = field(default_factory=PlatformSpec.equal_split)
    oracle: OracleParams = field(default_factory=OracleParams)
    twin_train: TrainConfig = field(default_factory=default_twin_train)
    clf_train: TrainConfig = field(default_factory=default_clf_train)
    sizes: SizesConfig = field(default_factory=SizesConfig)
    interval_s: float = DECISION_INTERVAL_S
    seed: int = 0
    output_dir: str = DEFAULT_OUTPUT_DIR
    workers: int = 1
    twin_profile: str = "uniform"
    clf_profile: str = "uniform"
    eval_profile: str = "uniform"

    @classmethod
    def default(cls) -> "RunConfig":
        return cls()

    @classmethod
    def eight_way(cls) -> "RunConfig":
        """The scarce-cache variant: 8 ways shared by 5 vBS."""
        return cls(platform=PlatformSpec.equal_split(n_llc=8), output_dir="runs/eight_ways")

    def stage_seed(self, stage: str) -> int:
        return derive_seed(self.seed, stage)

    def twin_train_config(self) -> TrainConfig:
        if self.twin_train.seed is not None:
            return self.twin_train
        return self.twin_train.with_seed(self.stage_seed("train-twin"))

    def clf_train_config(self) -> TrainConfig:
        if self.clf_train.seed is not None:
            return self.clf_train
        return self.clf_train.with_seed(self.stage_seed("train-clf"))

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None) -> "RunConfig":
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if output_dir is not None:
            changes["output_dir"] = str(output_dir)
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "platform": self.platform.to_dict(),
            "oracle": self.oracle.to_dict(),
            "twin_train": self.twin_train.to_dict(),
            "clf_train": self.clf_train.to_dict(),
            "sizes": self.sizes.to_dict(),
            "interval_s": self.interval_s,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "workers": self.workers,
            "twin_profile": self.twin_profile,
            "clf_profile": self.clf_profile,
            "eval_profile": self.eval_profile,
        }

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "RunConfig":
        """
        Build a RunConfig, collecting every section error before failing.

        Missing sections take their defaults.

        Raises:
            ConfigError: listing each offending field
        """
        errors: List[str] = []
        known = {f.name for f in fields(cls)}
        for key in sorted(set(config_dict) - known):
            errors.append(f"unknown field '{key}'")

        def section(name: str, parse: Callable[[Dict[str, Any]], Any], default: Callable[[], Any]):
            if name not in config_dict:
                return default()
            value = config_dict[name]
            if not isinstance(value, dict):
                errors.append(f"{name} must be an object")
                return None
            try:
                return parse(value)
            except (ValidationError, KeyError, TypeError, ValueError) as e:
                errors.append(f"{name}: {e}")
                return None

        defaults = cls()
        sections = {
            "platform": section("platform", PlatformSpec.from_dict, PlatformSpec.equal_split),
            "oracle": section("oracle", OracleParams.from_dict, OracleParams),
            "twin_train": section("twin_train", _train_parser(default_twin_train), default_twin_train),
            "clf_train": section("clf_train", _train_parser(default_clf_train), default_clf_train),
            "sizes": section("sizes", SizesConfig.from_dict, SizesConfig),
        }
        scalars: Dict[str, Any] = {}
        for name, kind in (("interval_s", float), ("seed", int), ("output_dir", str), ("workers", int),
                           ("twin_profile", str), ("clf_profile", str), ("eval_profile", str)):
            value = config_dict.get(name, getattr(defaults, name))
            if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
                errors.append(f"{name} must be an integer, got {value!r}")
            elif kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
                errors.append(f"{name} must be a number, got {value!r}")
            elif kind is str and not isinstance(value, str):
                errors.append(f"{name} must be a string, got {value!r}")
            else:
                scalars[name] = kind(value)

        if errors:
            raise ConfigError(errors)
        config = cls(**sections, **scalars)
        is_valid, problems = ConfigValidator.validate_config(config)
        if not is_valid:
            raise ConfigError(problems)
        return config

    def canonical_json(self, include_output_dir: bool = True) -> str:
        data = self.to_dict()
        if not include_output_dir:
            del data["output_dir"]
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        """sha256 of the canonical config; the output directory does not count."""
        return hashlib.sha256(self.canonical_json(include_output_dir=False).encode()).hexdigest()

    def save(self, filepath: Path) -> None:
        """Write the configuration as indented JSON with sorted keys."""
        try:
            Path(filepath).parent.mkdir(parents=True, exist_ok=True)
            Path(filepath).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write config {filepath}: {e}") from e

    @classmethod
    def load(cls, filepath: Path) -> "RunConfig":
        """
        Load a configuration file.

        Raises:
            ConfigError: If the file is not valid JSON or fails validation
            ArtifactIOError: If the file cannot be read
        """
        try:
            text = Path(filepath).read_text()
        except OSError as e:
            raise ArtifactIOError(f"Cannot read config {filepath}: {e}") from e
        try:
            config_dict = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError([f"{filepath}: invalid JSON: {e}"]) from e
        if not isinstance(config_dict, dict):
            raise ConfigError([f"{filepath}: top level must be an object"])
        return cls.from_dict(config_dict)


class ConfigValidator:
    """Validate run configurations."""

    @staticmethod
    def validate_config(config: RunConfig) -> Tuple[bool, List[str]]:
        """
        Check the invariants spanning several sections.

        Returns:
            Tuple of (is_valid, error_messages)
        """
        errors = []

        if not config.interval_s > 0:
            errors.append(f"interval_s must be > 0, got {config.interval_s}")
        for name in ("twin_contexts", "classifier_contexts"):
            if getattr(config.sizes, name) < MIN_SPLIT_CONTEXTS:
                errors.append(f"sizes.{name} must be >= {MIN_SPLIT_CONTEXTS} to fill every split")
        if config.sizes.eval_contexts < 1:
            errors.append("sizes.eval_contexts must be >= 1")
        if config.seed < 0:
            errors.append(f"seed must be >= 0, got {config.seed}")
        if config.workers < 1:
            errors.append(f"workers must be >= 1, got {config.workers}")
        if not config.output_dir:
            errors.append("output_dir must not be empty")

        for name in ("twin_profile", "clf_profile", "eval_profile"):
            profile = getattr(config, name)
            if profile not in PROFILES:
                errors.append(f"{name} must be one of {sorted(PROFILES)}, got '{profile}'")

        if config.twin_train.loss != "mse":
            errors.append(f"twin_train.loss must be 'mse', got '{config.twin_train.loss}'")
        if config.clf_train.loss != "cross_entropy":
            errors.append(f"clf_train.loss must be 'cross_entropy', got '{config.clf_train.loss}'")

        return len(errors) == 0, errors
