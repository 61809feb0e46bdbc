"""Scenario configuration: flat key=value files, validation, defaults."""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .association import ACCESS_MODES, STRATEGY_KINDS, Strategy
from .radio import ChannelModel, dbm_to_watts

OCCUPANCY_ALLOCATED = "allocated-only"
OCCUPANCY_WHOLE = "whole-fragment"
OCCUPANCY_MODES = (OCCUPANCY_ALLOCATED, OCCUPANCY_WHOLE)


class ConfigError(ValueError):
    """A scenario config failed to parse or validate."""


def default_delta_grid():
    """50 log-spaced thresholds from 10 kbit/s to 20 Mbit/s."""
    return np.geomspace(1e4, 2e7, 50)


@dataclass
class ScenarioConfig:
    """One fully resolved simulation scenario.

    Populations are homogeneous PPP intensities; ``N_f``/``N_u`` style
    inputs are converted to intensities over the configured area, so the
    per-drop station and user counts are Poisson draws around those means.
    """

    area_width_m: float = 25_000.0
    area_height_m: float = 25_000.0
    inter_site_distance_m: float = 5_000.0
    total_prbs: int = 75
    prb_bandwidth_hz: float = 180e3
    macro_power_dbm: float = 43.0
    femto_power_dbm: float = 20.0
    K: int = 3
    n_f: int = 25
    lambda_f: float = 500.0 / 625e6
    lambda_u: float = 10_000.0 / 625e6
    path_loss_exponent: float = 2.3
    noise_power_w: float = 1e-12
    fading: bool = True
    strategy: str = "nearest_bs"
    bias_macro: float = 1.0
    bias_femto: float = None  # None -> macro/femto power ratio
    access_mode: str = "open"
    subscriber_radius_m: float = 18.0
    subscribers_per_femto: int = 3
    occupancy: str = OCCUPANCY_ALLOCATED
    n_drops: int = 25
    base_seed: int = 1
    deltas: np.ndarray = field(default_factory=default_delta_grid)
    grid_anchor: tuple = None  # offset from area center; None -> staggered

    @property
    def area_m2(self):
        return self.area_width_m * self.area_height_m

    @property
    def mean_femtos(self):
        return self.lambda_f * self.area_m2

    @property
    def mean_users(self):
        return self.lambda_u * self.area_m2

    @property
    def macro_power_w(self):
        return dbm_to_watts(self.macro_power_dbm)

    @property
    def femto_power_w(self):
        return dbm_to_watts(self.femto_power_dbm)

    def resolved_bias_femto(self):
        if self.bias_femto is None:
            return self.macro_power_w / self.femto_power_w
        return self.bias_femto

    def make_strategy(self):
        return Strategy(kind=self.strategy, bias_macro=self.bias_macro,
                        bias_femto=self.resolved_bias_femto(),
                        path_loss_exponent=self.path_loss_exponent)

    def make_channel(self):
        return ChannelModel(path_loss_exponent=self.path_loss_exponent,
                            noise_power_w=self.noise_power_w,
                            fading=self.fading)

    def validate(self):
        if self.area_width_m <= 0 or self.area_height_m <= 0:
            raise ConfigError("area dimensions must be positive")
        if self.inter_site_distance_m <= 0:
            raise ConfigError("inter_site_distance must be positive")
        if self.total_prbs <= 0:
            raise ConfigError("total_prbs must be positive")
        if self.prb_bandwidth_hz <= 0:
            raise ConfigError("prb_bandwidth must be positive")
        if self.K <= 0 or self.total_prbs % self.K != 0:
            raise ConfigError("K must divide total_prbs")
        if self.n_f <= 0 or self.total_prbs % self.n_f != 0:
            raise ConfigError("n_f must divide total_prbs")
        if self.lambda_f < 0:
            raise ConfigError("femto intensity must be nonnegative")
        if self.lambda_u < 0:
            raise ConfigError("user intensity must be nonnegative")
        if self.path_loss_exponent <= 0:
            raise ConfigError("path_loss_exponent must be positive")
        if self.noise_power_w <= 0:
            raise ConfigError("noise_power must be positive")
        if self.strategy not in STRATEGY_KINDS:
            raise ConfigError(f"unknown strategy: {self.strategy!r}")
        if self.bias_macro <= 0:
            raise ConfigError("bias_macro must be positive")
        if self.bias_femto is not None and self.bias_femto <= 0:
            raise ConfigError("bias_femto must be positive")
        if self.access_mode not in ACCESS_MODES:
            raise ConfigError(f"unknown access_mode: {self.access_mode!r}")
        if self.subscriber_radius_m <= 0:
            raise ConfigError("subscriber_radius must be positive")
        if self.subscribers_per_femto < 0:
            raise ConfigError("subscribers_per_femto must be nonnegative")
        if self.occupancy not in OCCUPANCY_MODES:
            raise ConfigError(f"unknown occupancy: {self.occupancy!r}")
        if self.n_drops < 1:
            raise ConfigError("n_drops must be at least 1")
        deltas = np.asarray(self.deltas, dtype=float)
        if deltas.ndim != 1 or deltas.size == 0 or np.any(deltas <= 0) \
                or np.any(np.diff(deltas) <= 0):
            raise ConfigError("delta_grid must be ascending positive values")
        return self

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)

    def echo(self):
        """JSON-friendly dump of every resolved field for run manifests."""
        return {
            "area_m": [self.area_width_m, self.area_height_m],
            "inter_site_distance_m": self.inter_site_distance_m,
            "total_prbs": self.total_prbs,
            "prb_bandwidth_hz": self.prb_bandwidth_hz,
            "macro_power_dbm": self.macro_power_dbm,
            "femto_power_dbm": self.femto_power_dbm,
            "K": self.K,
            "n_f": self.n_f,
            "lambda_f": self.lambda_f,
            "lambda_u": self.lambda_u,
            "mean_femtos": self.mean_femtos,
            "mean_users": self.mean_users,
            "path_loss_exponent": self.path_loss_exponent,
            "noise_power_w": self.noise_power_w,
            "fading": self.fading,
            "strategy": self.strategy,
            "bias_macro": self.bias_macro,
            "bias_femto": self.resolved_bias_femto(),
            "access_mode": self.access_mode,
            "subscriber_radius_m": self.subscriber_radius_m,
            "subscribers_per_femto": self.subscribers_per_femto,
            "occupancy": self.occupancy,
            "n_drops": self.n_drops,
            "base_seed": self.base_seed,
            "delta_grid": [float(d) for d in np.asarray(self.deltas)],
            "grid_anchor": (list(self.grid_anchor)
                            if self.grid_anchor is not None else None),
        }


def _parse_bool(value, key):
    v = value.strip().lower()
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"invalid value for {key!r}: expected on/off")


def _parse_area(value):
    parts = value.lower().replace(" ", "").split("x")
    if len(parts) != 2:
        raise ConfigError("area must look like '25000x25000' (meters)")
    return float(parts[0]), float(parts[1])


def _parse_deltas(value):
    v = value.strip()
    if v.startswith("log:"):
        try:
            _, lo, hi, n = v.split(":")
            return np.geomspace(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise ConfigError(f"invalid delta_grid spec: {value!r}") from exc
    return np.asarray([float(x) for x in v.split(",")], dtype=float)


def _parse_pair(value, key):
    parts = value.replace(" ", "").split(",")
    if len(parts) != 2:
        raise ConfigError(f"invalid value for {key!r}: expected 'dx,dy'")
    return (float(parts[0]), float(parts[1]))


def parse_config_text(text):
    """Parse flat 'key = value' lines into a raw string mapping.

    '#' starts a comment; blank lines are skipped; duplicate keys are
    rejected so sweep typos cannot silently shadow earlier settings.
    """
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def from_mapping(mapping):
    """Build a validated ScenarioConfig from raw string settings.

    Unknown keys are errors. Femto and user populations accept either an
    intensity (lambda_f, lambda_u in m^-2) or a mean count over the area
    (N_f, N_u), but not both forms of the same population.
    """
    mapping = dict(mapping)
    kw = {}

    def take(key):
        return mapping.pop(key, None)

    def take_float(key, target=None):
        v = take(key)
        if v is not None:
            try:
                kw[target or key] = float(v)
            except ValueError:
                raise ConfigError(f"invalid value for {key!r}: {v!r}")

    def take_int(key, target=None):
        v = take(key)
        if v is not None:
            try:
                kw[target or key] = int(v)
            except ValueError:
                raise ConfigError(f"invalid value for {key!r}: {v!r}")

    area = take("area")
    if area is not None:
        kw["area_width_m"], kw["area_height_m"] = _parse_area(area)
    take_float("inter_site_distance", "inter_site_distance_m")
    v = take("total_prbs")
    if v is not None:
        try:
            kw["total_prbs"] = int(v)
        except ValueError:
            raise ConfigError(f"invalid value for 'total_prbs': {v!r}")
    take_float("prb_bandwidth", "prb_bandwidth_hz")
    take_float("macro_power_dbm")
    take_float("femto_power_dbm")
    take_int("K")
    take_int("n_f")
    take_float("path_loss_exponent")
    take_float("noise_power", "noise_power_w")
    take_float("bias_macro")
    take_float("bias_femto")
    take_float("subscriber_radius", "subscriber_radius_m")
    take_int("subscribers_per_femto")
    take_int("n_drops")
    take_int("base_seed")

    for key, target in (("strategy", "strategy"), ("access_mode", "access_mode"),
                        ("occupancy", "occupancy")):
        v = take(key)
        if v is not None:
            kw[target] = v.strip()

    v = take("fading")
    if v is not None:
        kw["fading"] = _parse_bool(v, "fading")
    v = take("delta_grid")
    if v is not None:
        kw["deltas"] = _parse_deltas(v)
    v = take("grid_anchor")
    if v is not None:
        kw["grid_anchor"] = _parse_pair(v, "grid_anchor")

    area_m2 = (kw.get("area_width_m", 25_000.0)
               * kw.get("area_height_m", 25_000.0))
    for lam_key, count_key, target in (("lambda_f", "N_f", "lambda_f"),
                                       ("lambda_u", "N_u", "lambda_u")):
        lam = take(lam_key)
        count = take(count_key)
        if lam is not None and count is not None:
            raise ConfigError(f"set only one of {lam_key!r} or {count_key!r}")
        if lam is not None:
            kw[target] = float(lam)
        elif count is not None:
            kw[target] = float(count) / area_m2

    if mapping:
        unknown = ", ".join(sorted(mapping))
        raise ConfigError(f"unknown config key(s): {unknown}")

    try:
        cfg = ScenarioConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def load_config(path):
    """Read and validate a config file; returns (raw mapping, config)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    mapping = parse_config_text(text)
    return mapping, from_mapping(mapping)
