"""
Experiment configuration: a strict JSON document mapped onto a frozen dataclass.
"""

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from qeclab.exceptions import ConfigError

EXPERIMENTS = (
    "rmt-sweep",
    "depth-sweep",
    "regular-erasure",
    "probes",
    "expurgate-dstar",
    "haar",
    "self-averaging",
    "predict",
    "block-model",
)
GEOMETRIES = ("chain1d", "grid2d", "all2all", "blocks")
ENSEMBLES = ("clifford2q", "iswap_singles")
ERROR_MODELS = ("fixed", "iid", "regular")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    geometry: str = "chain1d"
    ensemble: Optional[str] = None
    sizes: Tuple[int, ...] = (16,)
    depths: Tuple[int, ...] = ()
    depth_factor: float = 2.0
    rate: float = 0.5
    error_model: str = "fixed"
    erasure_fractions: Tuple[float, ...] = ()
    deltas: Tuple[int, ...] = ()
    spacing: int = 4
    block_size: int = 0
    trials: int = 100
    codes: int = 1
    master_seed: int = 0
    target: float = 0.5
    probe_distances: Tuple[int, ...] = ()
    expurgation_mode: str = "gauge"
    expurgation_fraction: float = 0.125
    expurgation_rounds: int = 50
    expurgation_budget_offset: float = 0.0
    expurgation_stop_rate: Optional[float] = None
    expurgation_stop_failure: Optional[float] = None
    measurement_order: str = "weight"
    haar_mode: str = "dense"
    haar_depth: Optional[int] = None
    threads: int = 1
    raw: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        _validate(self)

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Build a config from parsed JSON.

        Raises:
            ConfigError: naming the first unknown, mistyped or out-of-range key
        """
        if not isinstance(data, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown key")
        if "experiment" not in data:
            raise ConfigError("experiment", "missing required key")
        values = {key: _coerce(key, value, _KINDS[key]) for key, value in data.items()}
        return ExperimentConfig(**values)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copy with non-None overrides applied (command-line flags)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(self).items()}

    @property
    def gate_ensemble(self) -> str:
        """Configured ensemble, or the iSWAP ensemble for 2D depth sweeps and uniform Cliffords otherwise."""
        if self.ensemble is not None:
            return self.ensemble
        if self.experiment == "depth-sweep" and self.geometry == "grid2d":
            return "iswap_singles"
        return "clifford2q"

    def depths_for(self, n_qubits: int) -> List[int]:
        if self.depths:
            return list(self.depths)
        return [int(round(self.depth_factor * n_qubits))]

    def logical_count(self, n_qubits: int) -> int:
        return int(round(self.rate * n_qubits))


# expected kind per key: int, float, bool, str, [int], [float], or optional variants
_KINDS = {
    "experiment": "str", "geometry": "str", "ensemble": "str?",
    "sizes": "[int]", "depths": "[int]", "depth_factor": "float", "rate": "float",
    "error_model": "str", "erasure_fractions": "[float]", "deltas": "[int]",
    "spacing": "int", "block_size": "int", "trials": "int", "codes": "int",
    "master_seed": "int", "target": "float", "probe_distances": "[int]",
    "expurgation_mode": "str", "expurgation_fraction": "float", "expurgation_rounds": "int",
    "expurgation_budget_offset": "float", "expurgation_stop_rate": "float?",
    "expurgation_stop_failure": "float?", "measurement_order": "str",
    "haar_mode": "str", "haar_depth": "int?", "threads": "int", "raw": "bool", "output": "str?",
}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_float(v) -> bool:
    return (_is_int(v) or isinstance(v, float)) and math.isfinite(v)


def _coerce(key: str, value: Any, kind: str) -> Any:
    if kind.endswith("?"):
        if value is None:
            return None
        kind = kind[:-1]
    if kind.startswith("["):
        inner = kind[1:-1]
        if not isinstance(value, list):
            raise ConfigError(key, f"expected a list of {inner}, got {type(value).__name__}")
        return tuple(_coerce(key, v, inner) for v in value)
    checks = {"int": _is_int, "float": _is_float, "bool": lambda v: isinstance(v, bool),
              "str": lambda v: isinstance(v, str)}
    if not checks[kind](value):
        raise ConfigError(key, f"expected {kind}, got {value!r}")
    return float(value) if kind == "float" else value


def _require(cond: bool, key: str, message: str):
    if not cond:
        raise ConfigError(key, message)


def _validate(c: ExperimentConfig):
    _require(c.experiment in EXPERIMENTS, "experiment", f"must be one of {EXPERIMENTS}")
    _require(c.geometry in GEOMETRIES, "geometry", f"must be one of {GEOMETRIES}")
    _require(c.ensemble is None or c.ensemble in ENSEMBLES, "ensemble", f"must be one of {ENSEMBLES}")
    _require(c.error_model in ERROR_MODELS, "error_model", f"must be one of {ERROR_MODELS}")
    _require(len(c.sizes) > 0, "sizes", "at least one size is required")
    _require(all(n >= 2 and n % 2 == 0 for n in c.sizes), "sizes", "all N must be even and >= 2")
    _require(all(d >= 0 for d in c.depths), "depths", "depths must be >= 0")
    _require(list(c.depths) == sorted(c.depths), "depths", "depths must be sorted ascending")
    _require(c.depth_factor >= 0, "depth_factor", "must be >= 0")
    _require(0.0 <= c.rate <= 1.0, "rate", "must lie in [0, 1]")
    _require(all(0.0 <= e <= 1.0 for e in c.erasure_fractions), "erasure_fractions", "must lie in [0, 1]")
    _require(c.spacing >= 1, "spacing", "must be >= 1")
    _require(c.block_size >= 0, "block_size", "must be >= 0")
    _require(c.geometry != "blocks" or c.block_size >= 2, "block_size", "blocks geometry needs block_size >= 2")
    _require(c.trials >= 1, "trials", "must be >= 1")
    _require(c.codes >= 1, "codes", "must be >= 1")
    _require(c.master_seed >= 0, "master_seed", "must be >= 0")
    _require(0.0 < c.target < 1.0, "target", "must lie in (0, 1)")
    _require(all(p >= 0 for p in c.probe_distances), "probe_distances", "must be >= 0")
    _require(c.expurgation_mode in ("stabilizer", "gauge"), "expurgation_mode", "must be 'stabilizer' or 'gauge'")
    _require(0.0 <= c.expurgation_fraction <= 1.0, "expurgation_fraction", "must lie in [0, 1]")
    _require(c.expurgation_rounds >= 1, "expurgation_rounds", "must be >= 1")
    _require(0.0 <= c.expurgation_budget_offset <= 1.0, "expurgation_budget_offset", "must lie in [0, 1]")
    _require(c.expurgation_stop_rate is None or 0.0 <= c.expurgation_stop_rate <= 1.0,
             "expurgation_stop_rate", "must lie in [0, 1]")
    _require(c.expurgation_stop_failure is None or 0.0 < c.expurgation_stop_failure < 1.0,
             "expurgation_stop_failure", "must lie in (0, 1)")
    _require(c.measurement_order in ("weight", "index"), "measurement_order", "must be 'weight' or 'index'")
    _require(c.haar_mode in ("dense", "local"), "haar_mode", "must be 'dense' or 'local'")
    _require(c.haar_depth is None or c.haar_depth >= 0, "haar_depth", "must be >= 0")
    _require(c.threads >= 1 or c.threads == -1, "threads", "must be >= 1 or -1 (all cores)")


def load_config(path: str) -> ExperimentConfig:
    """
    Read a JSON experiment file.

    Raises:
        ConfigError: for unreadable files, malformed JSON or invalid keys
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as err:
        raise ConfigError("<file>", f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError("<file>", f"{path} is not valid JSON: {err}") from None
    return ExperimentConfig.from_dict(data)
