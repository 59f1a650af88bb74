"""Benchmark schemes: fixed antennas (with/without movement-time compensation),
random one-hot placement, and a partially-movable variant."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import Position
from .continuous import (
    SolverOptions,
    device_gain4,
    horizon_throughput,
    optimal_tau1,
    solve_continuous,
    throughput_constant,
)
from .discrete import build_grid, channel_tables, refine_continuously

SCHEME_CONTINUOUS = "cont"
SCHEME_DISCRETE = "disc"
SCHEME_PARTIAL = "partial"
SCHEME_RANDOM = "random"
SCHEME_FPA = "fpa"
SCHEME_FPA_COMP = "fpa_comp"
ALL_SCHEMES = (
    SCHEME_CONTINUOUS,
    SCHEME_DISCRETE,
    SCHEME_PARTIAL,
    SCHEME_RANDOM,
    SCHEME_FPA,
    SCHEME_FPA_COMP,
)


@dataclass
class BaselineResult:
    scheme: str
    sum_throughput_bits_per_hz: float
    tau1_s: float
    total_time_used_s: float   # T, or T + tau0 for the compensated scheme
    tau0_s: float              # movement compensation time (0 when unused)
    hap_energy_j: float
    iterations: int = 0
    converged: bool = True


def _reference_constant(realization, params):
    # All antennas parked at the reference point.
    origin = Position(0.0, 0.0)
    gains4 = device_gain4(
        realization, params, origin, [origin] * realization.num_wds
    )
    return throughput_constant(params, gains4.sum())


def fpa_no_compensation(realization, params):
    """Every antenna fixed at its reference point; only the time split optimized."""
    c0 = _reference_constant(realization, params)
    tau1 = optimal_tau1(c0, params.total_time_s)
    return BaselineResult(
        scheme=SCHEME_FPA,
        sum_throughput_bits_per_hz=horizon_throughput(c0, tau1, params.total_time_s),
        tau1_s=tau1,
        total_time_used_s=params.total_time_s,
        tau0_s=0.0,
        hap_energy_j=params.hap_power_w * tau1,
    )


def movement_time(continuous_result, params):
    """Time to drive every antenna from its reference point to its optimized
    position (L1 path at the drive speed); the slowest antenna dominates."""
    state = continuous_result.state
    hap = abs(state.hap_pos.x_m) + abs(state.hap_pos.y_m)
    dev = max((abs(p.x_m) + abs(p.y_m)) for p in state.wd_pos)
    return max(hap, dev) / params.ma_speed_mps


def fpa_with_compensation(realization, params, continuous_result):
    """Fixed antennas, but the frame is extended by the movement time the
    movable design would have spent, so the comparison is time-fair."""
    if continuous_result is None:
        raise ValueError("fpa_with_compensation needs the continuous solve result")
    tau0 = movement_time(continuous_result, params)
    horizon = params.total_time_s + tau0
    c0 = _reference_constant(realization, params)
    tau1 = optimal_tau1(c0, horizon)
    return BaselineResult(
        scheme=SCHEME_FPA_COMP,
        sum_throughput_bits_per_hz=horizon_throughput(c0, tau1, horizon),
        tau1_s=tau1,
        total_time_used_s=horizon,
        tau0_s=tau0,
        hap_energy_j=params.hap_power_w * tau1,
    )


def random_ma(realization, params, n_samples=500, seed=0):
    """Best of n_samples uniformly random one-hot candidate tuples."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples!r}")
    grid = build_grid(params)
    tables = channel_tables(realization, grid, params.wavelength_m)
    rng = np.random.default_rng(seed)
    k_total = realization.num_wds
    hap_draw = rng.integers(0, grid.count, size=n_samples)
    wd_draw = rng.integers(0, grid.count, size=(n_samples, k_total))
    gain4_sum = np.zeros(n_samples)
    for k in range(k_total):
        coeff = tables[k][wd_draw[:, k], hap_draw]
        gain4_sum += (coeff.real**2 + coeff.imag**2) ** 2
    c = throughput_constant(params, gain4_sum)
    tau1 = optimal_tau1(c, params.total_time_s)
    values = np.array(
        [horizon_throughput(ci, ti, params.total_time_s) for ci, ti in zip(c, tau1)]
    )
    best = int(np.argmax(values))
    return BaselineResult(
        scheme=SCHEME_RANDOM,
        sum_throughput_bits_per_hz=float(values[best]),
        tau1_s=float(tau1[best]),
        total_time_used_s=params.total_time_s,
        tau0_s=0.0,
        hap_energy_j=params.hap_power_w * float(tau1[best]),
        iterations=n_samples,
    )


def movable_subset(num_wds, seed):
    """Uniform choice of ceil((K+1)/2) movable antennas out of HAP + K devices.

    Index 0 stands for the HAP, 1..K for the devices.
    """
    pool = num_wds + 1
    rng = np.random.default_rng(seed)
    chosen = rng.choice(pool, size=math.ceil(pool / 2), replace=False)
    return np.sort(chosen)


def partially_ma(realization, params, seed=0, options=None):
    """Continuous solve with position updates masked to a random antenna subset.

    When the options carry a lattice pitch (d_over_lambda), the masked ascent
    restarts from a masked lattice scan, mirroring the fully-movable scheme;
    otherwise it starts at the reference points.
    """
    chosen = movable_subset(realization.num_wds, seed)
    wd_movable = np.zeros(realization.num_wds, dtype=bool)
    wd_movable[chosen[chosen > 0] - 1] = True
    base = options or SolverOptions()
    opts = replace(
        base,
        hap_movable=bool(0 in chosen),
        wd_movable=wd_movable,
    )
    if opts.d_over_lambda is not None:
        result = refine_continuously(realization, params, options=opts)
    else:
        result = solve_continuous(realization, params, opts)
    return BaselineResult(
        scheme=SCHEME_PARTIAL,
        sum_throughput_bits_per_hz=result.sum_throughput_bits_per_hz,
        tau1_s=result.state.tau1_s,
        total_time_used_s=params.total_time_s,
        tau0_s=0.0,
        hap_energy_j=result.hap_energy_j,
        iterations=result.state.iterations,
        converged=result.converged,
    )
