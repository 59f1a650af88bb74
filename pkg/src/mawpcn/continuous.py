"""Alternating optimization of antenna positions and time split, continuous case.

One outer iteration moves the HAP antenna (maximizing the summed concave
quadratic minorants of the per-device fourth-power gains exactly over the box
region), then each device antenna the same way, then re-splits the frame via
the closed-form harvest-time rule.  Every block step is exact for its
subproblem, so the objective trace never decreases.

Objective (per frame, bandwidth-normalized): with per-device downlink gain
h_k and harvest time t1 out of a horizon T,

    (T - t1) * log2(1 + sum_k zeta * P * |h_k|^4 * t1 / (sigma^2 * (T - t1)))

which is the sum throughput after substituting the energy-tight uplink powers
p_k = zeta * P * |h_k|^2 * t1 / (T - t1).
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import fourth_power
from .channel import Position

_BRANCH_POINT = -math.exp(-1.0)  # -1/e, edge of the principal branch domain


def lambert_w0(x):
    """Principal branch of w*e^w = x for real x >= -1/e.

    Accepts scalars or arrays.  Arguments within 1e-15 below -1/e are clamped
    to the branch point; anything lower raises.  Residual |w*e^w - x| stays
    within 1e-12 * max(1, |x|) across the domain.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    v = np.atleast_1d(arr).astype(float).copy()
    if np.any(v < _BRANCH_POINT - 1e-15):
        raise ValueError(f"lambert_w0 argument below -1/e: {np.min(v)!r}")
    np.clip(v, _BRANCH_POINT, None, out=v)
    w = np.empty_like(v)

    delta = v - _BRANCH_POINT
    tiny = delta < 1e-6  # series about the branch point; iteration degenerates here
    if np.any(tiny):
        p = np.sqrt(2.0 * math.e * delta[tiny])
        w[tiny] = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * (43.0 / 540.0))))

    near = ~tiny & (v < -0.25)  # series start, then polish
    if np.any(near):
        p = np.sqrt(2.0 * math.e * delta[near])
        w[near] = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    mid = ~tiny & (v >= -0.25) & (v < 2.0)
    if np.any(mid):
        w[mid] = np.log1p(v[mid])
    low = near | mid
    if np.any(low):
        wl, xl = w[low], v[low]
        for _ in range(40):
            ew = np.exp(wl)
            f = wl * ew - xl
            wp1 = wl + 1.0
            denom = ew * wp1 - (wp1 + 1.0) * f / (2.0 * wp1)
            step = f / denom
            wl -= step
            np.clip(wl, -1.0 + 1e-12, None, out=wl)  # stay on the principal branch
            if np.all(np.abs(step) <= 1e-16 * (1.0 + np.abs(wl))):
                break
        w[low] = wl

    big = v >= 2.0
    if np.any(big):
        xb = v[big]
        lx = np.log(xb)
        llx = np.log(lx)
        wb = lx - llx + llx / lx
        for _ in range(40):  # Newton on w + log(w) = log(x); no overflow for huge x
            step = (wb + np.log(wb) - lx) * wb / (wb + 1.0)
            wb -= step
            if np.all(np.abs(step) <= 1e-16 * (1.0 + np.abs(wb))):
                break
        w[big] = wb

    return float(w[0]) if scalar else w.reshape(arr.shape)


def optimal_tau1(c, horizon_s):
    """Optimal harvest time over [0, horizon] for objective constant c >= 0.

    c aggregates zeta * P * sum_k |h_k|^4 / sigma^2.  The maximizer of
    (T - t) * log2(1 + c*t/(T - t)) is T*(E - 1)/(c + E - 1) with
    E = exp(W((c-1)/e) + 1); c = 0 returns 0 by convention (flat objective).
    """
    arr = np.asarray(c, dtype=float)
    scalar = arr.ndim == 0
    cv = np.atleast_1d(arr)
    if np.any(cv < 0):
        raise ValueError(f"c must be nonnegative, got {np.min(cv)!r}")
    if not horizon_s > 0:
        raise ValueError(f"horizon_s must be positive, got {horizon_s!r}")
    e_term = np.exp(lambert_w0((cv - 1.0) / math.e) + 1.0)
    denom = cv + e_term - 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        tau = np.where(denom > 0.0, horizon_s * (e_term - 1.0) / denom, 0.0)
    tau = np.where(cv == 0.0, 0.0, tau)
    return float(tau[0]) if scalar else tau.reshape(arr.shape)


def horizon_throughput(c, tau1_s, horizon_s):
    """(horizon - tau1) * log2(1 + c * tau1 / (horizon - tau1)); 0 at the edges."""
    remaining = horizon_s - tau1_s
    if tau1_s <= 0.0 or remaining <= 0.0:
        return 0.0
    return remaining * math.log2(1.0 + c * tau1_s / remaining)


@dataclass
class SolverOptions:
    epsilon: float = 1e-4        # stop when the relative objective gain drops below this
    max_iters: int = 200
    trace_path: str = None       # optional CSV dump: iter, objective, tau1, hap_x, hap_y
    hap_movable: bool = True
    wd_movable: np.ndarray = None   # (K,) bools; None means all devices movable
    init_hap_pos: Position = None
    init_wd_pos: tuple = None
    init_tau1_s: float = None
    decoding_order: np.ndarray = None  # order used for the reported per-user rates
    d_over_lambda: float = None  # lattice-pitch override, discrete solver only


@dataclass
class ContinuousSolveState:
    hap_pos: Position
    wd_pos: list
    tau1_s: float
    objective_trace: list = field(default_factory=list)
    iterations: int = 0


@dataclass
class SolveResult:
    state: object
    sum_throughput_bits_per_hz: float
    tau3_s: float
    per_user_power_w: np.ndarray
    per_user_gain_sq: np.ndarray   # |h_k|^2 at the solution
    per_user_rate: np.ndarray
    hap_energy_j: float
    noise_power_w: float
    converged: bool


def device_gain4(realization, params, hap_pos, wd_positions):
    """Per-device |h_k|^4 at the given antenna placement."""
    lam = params.wavelength_m
    out = np.empty(realization.num_wds)
    for k in range(realization.num_wds):
        cache = fourth_power.hap_gain_cache(realization, k, wd_positions[k], lam)
        out[k] = fourth_power.gain4(cache, hap_pos)
    return out


def throughput_constant(params, gain4_sum):
    """c = zeta * P * sum |h|^4 / sigma^2 for the time-split objective."""
    return params.energy_efficiency * params.hap_power_w * gain4_sum / params.noise_power_w


def _harvest_weight(params, tau1_s):
    # Common per-device weight zeta*P*tau1/(sigma^2*(T - tau1)) in the
    # position subproblems; tau1 < T is maintained by the time-split rule.
    remaining = params.total_time_s - tau1_s
    if remaining <= 0.0:
        raise ValueError("tau1 must stay below the frame length")
    return params.energy_efficiency * params.hap_power_w * tau1_s / (
        params.noise_power_w * remaining
    )


def _clamp_to_region(xy, params):
    half = params.half_region_m
    return Position(min(max(xy[0], -half), half), min(max(xy[1], -half), half))


def sca_step_hap(state, realization, params):
    """Exact box-constrained maximizer of the summed HAP-position minorants."""
    mu = _harvest_weight(params, state.tau1_s)
    lam = params.wavelength_m
    num = np.zeros(2)
    den = 0.0
    for k in range(realization.num_wds):
        cache = fourth_power.hap_gain_cache(realization, k, state.wd_pos[k], lam)
        _, grad = fourth_power.gain4_value_gradient(cache, state.hap_pos)
        num += mu * grad
        den += mu * fourth_power.curvature_bound(cache)
    if den <= 0.0:
        return state.hap_pos
    target = state.hap_pos.as_array() + num / den
    # Isotropic concave quadratic: clamping each coordinate is the exact
    # box-constrained maximizer.
    return _clamp_to_region(target, params)


def sca_step_wd(state, k, realization, params):
    """Exact box-constrained maximizer of device k's position minorant."""
    cache = fourth_power.wd_gain_cache(realization, k, state.hap_pos, params.wavelength_m)
    _, grad = fourth_power.gain4_value_gradient(cache, state.wd_pos[k])
    den = fourth_power.curvature_bound(cache)
    if den <= 0.0:
        return state.wd_pos[k]
    target = state.wd_pos[k].as_array() + grad / den
    return _clamp_to_region(target, params)


def _objective(realization, params, state):
    gains4 = device_gain4(realization, params, state.hap_pos, state.wd_pos)
    c = throughput_constant(params, gains4.sum())
    return horizon_throughput(c, state.tau1_s, params.total_time_s), gains4


def _relative_gain(prev, new):
    if prev > 0.0:
        return (new - prev) / prev
    return math.inf if new > 0.0 else 0.0


def solve_continuous(realization, params, options=None):
    """Run the alternating optimization from the reference placement."""
    opts = options or SolverOptions()
    k_total = realization.num_wds
    origin = Position(0.0, 0.0)
    hap_pos = opts.init_hap_pos if opts.init_hap_pos is not None else origin
    wd_pos = list(opts.init_wd_pos) if opts.init_wd_pos is not None else [origin] * k_total
    tau1 = opts.init_tau1_s if opts.init_tau1_s is not None else 0.5 * params.total_time_s
    movable = (
        np.ones(k_total, dtype=bool)
        if opts.wd_movable is None
        else np.asarray(opts.wd_movable, dtype=bool)
    )
    state = ContinuousSolveState(hap_pos=hap_pos, wd_pos=wd_pos, tau1_s=tau1)
    obj, _ = _objective(realization, params, state)
    state.objective_trace.append(obj)
    trace_rows = [(0, obj, state.tau1_s, state.hap_pos.x_m, state.hap_pos.y_m)]

    converged = False
    for _ in range(opts.max_iters):
        if opts.hap_movable:
            state.hap_pos = sca_step_hap(state, realization, params)
        for k in np.flatnonzero(movable):
            state.wd_pos[k] = sca_step_wd(state, k, realization, params)
        gains4 = device_gain4(realization, params, state.hap_pos, state.wd_pos)
        c = throughput_constant(params, gains4.sum())
        state.tau1_s = optimal_tau1(c, params.total_time_s)
        obj = horizon_throughput(c, state.tau1_s, params.total_time_s)
        state.iterations += 1
        prev = state.objective_trace[-1]
        state.objective_trace.append(obj)
        trace_rows.append(
            (state.iterations, obj, state.tau1_s, state.hap_pos.x_m, state.hap_pos.y_m)
        )
        if _relative_gain(prev, obj) < opts.epsilon:
            converged = True
            break

    if opts.trace_path:
        with open(opts.trace_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "objective", "tau1", "hap_x", "hap_y"])
            for it, value, t1, hx, hy in trace_rows:
                # float() strips numpy scalar types so repr() stays plain
                writer.writerow(
                    [it] + [repr(float(v)) for v in (value, t1, hx, hy)]
                )

    return finalize_result(realization, params, state, converged,
                           decoding_order=opts.decoding_order)


def finalize_result(realization, params, state, converged, decoding_order=None):
    """Assemble throughput, tight uplink powers, energy, and per-user rates."""
    gains4 = device_gain4(realization, params, state.hap_pos, state.wd_pos)
    gains_sq = np.sqrt(gains4)
    c = throughput_constant(params, gains4.sum())
    throughput = horizon_throughput(c, state.tau1_s, params.total_time_s)
    tau3 = params.total_time_s - state.tau1_s
    if tau3 > 0.0 and state.tau1_s > 0.0:
        # Energy-causality-tight uplink powers.
        powers = (
            params.energy_efficiency * params.hap_power_w * gains_sq * state.tau1_s / tau3
        )
    else:
        powers = np.zeros_like(gains_sq)
    result = SolveResult(
        state=state,
        sum_throughput_bits_per_hz=throughput,
        tau3_s=tau3,
        per_user_power_w=powers,
        per_user_gain_sq=gains_sq,
        per_user_rate=np.zeros_like(gains_sq),
        hap_energy_j=params.hap_power_w * state.tau1_s,
        noise_power_w=params.noise_power_w,
        converged=converged,
    )
    result.per_user_rate = per_user_rates(result, decoding_order)
    return result


def per_user_rates(result, decoding_order=None):
    """Per-device uplink rates under successive decoding.

    decoding_order[i] names the device decoded i-th; a device sees interference
    from every device decoded after it.  The sum over devices is independent of
    the order (and equals the reported sum throughput).
    """
    k_total = len(result.per_user_power_w)
    order = (
        np.arange(k_total)
        if decoding_order is None
        else np.asarray(decoding_order, dtype=int)
    )
    if sorted(order.tolist()) != list(range(k_total)):
        raise ValueError(f"decoding_order must be a permutation of 0..{k_total - 1}")
    if result.tau3_s <= 0.0:
        return np.zeros(k_total)
    received = result.per_user_power_w * result.per_user_gain_sq
    rates = np.zeros(k_total)
    interference = result.noise_power_w + received[order].sum()
    for device in order:
        interference -= received[device]
        rates[device] = result.tau3_s * math.log2(1.0 + received[device] / interference)
    return rates
