"""System parameters for the movable-antenna wireless-powered network simulator.

All radio-frequency quantities are converted to linear SI units (watts, meters,
seconds) once, at construction time; everything downstream is unit-free math.
"""

import json
import math
from dataclasses import dataclass, replace

SPEED_OF_LIGHT = 3.0e8  # m/s

# Config-file defaults (JSON keys).  These mirror the standard simulation setup:
# 5 GHz carrier, 40 dBm HAP transmit power, -90 dBm noise, 3 s frame,
# 5-wavelength square moving regions, quarter-wavelength candidate pitch,
# 0.125 m/s antenna drive speed, 5 devices, 10 propagation paths each.
CONFIG_DEFAULTS = {
    "freq_ghz": 5.0,
    "p_hap_dbm": 40.0,
    "noise_dbm": -90.0,
    "zeta": 0.5,
    "T_s": 3.0,
    "A_over_lambda": 5.0,
    "d_over_lambda": 0.25,
    "v_mps": 0.125,
    "K": 5,
    "L": 10,
    "alpha": 2.8,
    "n_trials": 500,
    "master_seed": 0,
}


def dbm_to_watts(dbm):
    """Convert a power level in dBm to watts (30 dBm -> 1 W)."""
    return 10.0 ** (dbm / 10.0) / 1000.0


def watts_to_dbm(watts):
    if watts <= 0:
        raise ValueError("watts must be positive, got %r" % (watts,))
    return 10.0 * math.log10(watts * 1000.0)


@dataclass(frozen=True)
class SystemParams:
    """Immutable bundle of every physical constant one simulation needs."""

    wavelength_m: float        # carrier wavelength
    hap_power_w: float         # HAP transmit power (linear)
    noise_power_w: float       # receiver noise power (linear)
    energy_efficiency: float   # RF-to-DC conversion efficiency, in (0, 1]
    total_time_s: float        # frame length T
    region_size_m: float       # side A of the square antenna moving region
    step_size_m: float         # pitch d of the discrete candidate lattice
    ma_speed_mps: float        # antenna drive speed v
    step_time_s: float         # time to traverse one lattice step
    num_wds: int               # number of wireless devices K
    num_paths: int             # propagation paths per device L
    pathloss_exponent: float   # large-scale path-loss exponent
    ref_gain: float            # channel power gain at 1 m, (wavelength/4pi)^2

    def __post_init__(self):
        positive = (
            ("wavelength_m", self.wavelength_m),
            ("hap_power_w", self.hap_power_w),
            ("noise_power_w", self.noise_power_w),
            ("total_time_s", self.total_time_s),
            ("region_size_m", self.region_size_m),
            ("step_size_m", self.step_size_m),
            ("ma_speed_mps", self.ma_speed_mps),
            ("step_time_s", self.step_time_s),
            ("pathloss_exponent", self.pathloss_exponent),
            ("ref_gain", self.ref_gain),
        )
        for name, value in positive:
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not (0.0 < self.energy_efficiency <= 1.0):
            raise ValueError(
                f"energy_efficiency must lie in (0, 1], got {self.energy_efficiency!r}"
            )
        if self.num_wds < 1:
            raise ValueError(f"num_wds must be >= 1, got {self.num_wds!r}")
        if self.num_paths < 1:
            raise ValueError(f"num_paths must be >= 1, got {self.num_paths!r}")
        # Far-field guard: moving regions much smaller than the link distances.
        if self.region_size_m > 8.0 * self.wavelength_m + 1e-12:
            raise ValueError(
                "region_size_m must not exceed 8 wavelengths "
                f"(got {self.region_size_m!r} with wavelength {self.wavelength_m!r})"
            )
        expected_ref = (self.wavelength_m / (4.0 * math.pi)) ** 2
        if abs(self.ref_gain - expected_ref) > 1e-12 * expected_ref:
            raise ValueError(
                f"ref_gain {self.ref_gain!r} inconsistent with wavelength "
                f"(expected {expected_ref!r})"
            )

    @property
    def half_region_m(self):
        return 0.5 * self.region_size_m

    def with_updates(self, **changes):
        """Return a copy with fields replaced (re-runs validation)."""
        return replace(self, **changes)


def path_loss(distance_m, params):
    """Average channel power gain at the given link distance (>= 1 m)."""
    if distance_m < 1.0:
        raise ValueError(f"distance_m must be >= 1 m, got {distance_m!r}")
    return params.ref_gain * distance_m ** (-params.pathloss_exponent)


_INT_KEYS = ("K", "L", "n_trials", "master_seed")
# Optional experiment-level keys the harness consumes (see harness.py).
_HARNESS_KEYS = ("sweep_variable", "sweep_values", "schemes", "workers")


def validate_config(cfg):
    """Check config keys/types/ranges; raise ValueError naming the offending field."""
    unknown = set(cfg) - set(CONFIG_DEFAULTS) - set(_HARNESS_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(CONFIG_DEFAULTS)
    merged.update({k: cfg[k] for k in cfg if k in CONFIG_DEFAULTS})
    # Harness keys ride along unvalidated; the experiment spec checks them.
    merged.update({k: cfg[k] for k in cfg if k in _HARNESS_KEYS})
    for key in _INT_KEYS:
        value = merged[key]
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"config field {key} must be an integer, got {value!r}")
    for key in ("freq_ghz", "T_s", "A_over_lambda", "d_over_lambda", "v_mps", "alpha"):
        value = merged[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ValueError(f"config field {key} must be a positive number, got {value!r}")
    for key in ("p_hap_dbm", "noise_dbm"):
        if not isinstance(merged[key], (int, float)) or isinstance(merged[key], bool):
            raise ValueError(f"config field {key} must be a number, got {merged[key]!r}")
    if not (0.0 < merged["zeta"] <= 1.0):
        raise ValueError(f"config field zeta must lie in (0, 1], got {merged['zeta']!r}")
    if merged["K"] < 1:
        raise ValueError(f"config field K must be >= 1, got {merged['K']!r}")
    if merged["L"] < 1:
        raise ValueError(f"config field L must be >= 1, got {merged['L']!r}")
    if merged["n_trials"] < 1:
        raise ValueError(f"config field n_trials must be >= 1, got {merged['n_trials']!r}")
    if merged["d_over_lambda"] > merged["A_over_lambda"]:
        raise ValueError(
            "config field d_over_lambda must not exceed A_over_lambda "
            f"(got {merged['d_over_lambda']!r} > {merged['A_over_lambda']!r})"
        )
    return merged


def params_from_config(cfg):
    """Build SystemParams from a (partial) config mapping; fills defaults."""
    merged = validate_config(cfg)
    wavelength = SPEED_OF_LIGHT / (merged["freq_ghz"] * 1e9)
    step = merged["d_over_lambda"] * wavelength
    speed = merged["v_mps"]
    return SystemParams(
        wavelength_m=wavelength,
        hap_power_w=dbm_to_watts(merged["p_hap_dbm"]),
        noise_power_w=dbm_to_watts(merged["noise_dbm"]),
        energy_efficiency=merged["zeta"],
        total_time_s=merged["T_s"],
        region_size_m=merged["A_over_lambda"] * wavelength,
        step_size_m=step,
        ma_speed_mps=speed,
        step_time_s=step / speed,  # one lattice step at cruise speed
        num_wds=merged["K"],
        num_paths=merged["L"],
        pathloss_exponent=merged["alpha"],
        ref_gain=(wavelength / (4.0 * math.pi)) ** 2,
    )


def load_config(path):
    """Read a JSON config file and return the validated, default-filled mapping."""
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must contain a JSON object")
    return validate_config(cfg)


def default_params():
    return params_from_config({})
