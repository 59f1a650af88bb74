"""Randomized verification oracles for the optimization claims.

Each check draws random instances, evaluates a claim by brute force or an
independent numerical method, and returns an OracleReport.  The CLI `verify`
subcommand runs the whole suite and emits a JSON report.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fourth_power
from .channel import generate_realization
from .continuous import SolverOptions, solve_continuous
from .discrete import build_grid, channel_tables, solve_discrete
from .params import params_from_config


@dataclass
class OracleReport:
    check_name: str
    instances: int
    failures: int
    worst_violation: float

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


# ---------------------------------------------------------------------------
# Averaging inequality behind the identical-placement argument.


def check_lemma1(seed=0, n_instances=100000, max_users=10):
    """log2(1 + sum a*b) <= 0.5*log2(1 + sum a^2) + 0.5*log2(1 + sum b^2)
    for nonnegative vectors, with equality at a == b."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(1, max_users + 1, size=n_instances)
    worst = -math.inf
    failures = 0
    for k in range(1, max_users + 1):
        count = int((sizes == k).sum())
        if count == 0:
            continue
        a = rng.lognormal(mean=0.0, sigma=2.0, size=(count, k))
        b = rng.lognormal(mean=0.0, sigma=2.0, size=(count, k))
        # Re-use a for one tenth of the draws to exercise the equality case.
        dup = np.arange(count) % 10 == 0
        b[dup] = a[dup]
        lhs = np.log2(1.0 + (a * b).sum(axis=1))
        rhs = 0.5 * np.log2(1.0 + (a * a).sum(axis=1)) + 0.5 * np.log2(
            1.0 + (b * b).sum(axis=1)
        )
        viol = lhs - rhs
        failures += int((viol > 1e-12).sum())
        failures += int((np.abs(viol[dup]) > 1e-12).sum())
        worst = max(worst, float(viol.max()))
    return OracleReport("lemma1_averaging_bound", int(n_instances), failures, worst)


# ---------------------------------------------------------------------------
# Exhaustive two-phase enumeration: identical placements and no repositioning
# time are globally optimal.


def _tiny_config(k_users, per_axis, n_paths):
    # per_axis lattice points per dimension: A/d = per_axis - 1.
    return {
        "K": k_users,
        "L": n_paths,
        "A_over_lambda": 1.0,
        "d_over_lambda": 1.0 / (per_axis - 1),
        "n_trials": 1,
    }


def _grid_best_throughput(c, horizon, step):
    """Best (horizon - t)*log2(1 + c*t/(horizon - t)) over t on a step grid."""
    if horizon <= 0.0 or c <= 0.0:
        return 0.0
    taus = np.arange(0.0, horizon, step)
    tau3 = horizon - taus
    vals = tau3 * np.log2(1.0 + c * taus / tau3)
    return float(vals.max())


def check_proposition2(seed=0, n_instances=10, tiny_params=None, tau1_step_fraction=1e-4):
    """Brute-force the unsimplified two-phase design on tiny instances.

    Enumerates every pair of one-hot placements (harvest-phase and
    transmit-phase positions for the HAP and each device), charges the lattice
    repositioning time between phases against the frame, optimizes the harvest
    time on a fine grid for each, and verifies the global optimum keeps both
    phases at identical positions with zero repositioning time.

    tiny_params optionally pins the instance sizes as a mapping with keys
    K (devices), per_axis (lattice points per dimension), L (paths); by
    default each instance draws them from the supported tiny range.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = -math.inf
    for _ in range(n_instances):
        if tiny_params is not None:
            k_users = int(tiny_params["K"])
            per_axis = int(tiny_params["per_axis"])
            n_paths = int(tiny_params["L"])
        else:
            k_users, per_axis = [(1, 3), (2, 2)][rng.integers(0, 2)]
            n_paths = int(rng.integers(1, 5))
        params = params_from_config(_tiny_config(k_users, per_axis, n_paths))
        realization = generate_realization(int(rng.integers(0, 2**63)), params)
        grid = build_grid(params)
        n = grid.count
        tables = channel_tables(realization, grid, params.wavelength_m)
        sq = [np.abs(t) ** 2 for t in tables]  # |h|^2 per (device cand, HAP cand)

        # Index-coordinate step counts between candidates (exact integers).
        ix = np.arange(n) % per_axis
        iy = np.arange(n) // per_axis
        steps = np.abs(ix[:, None] - ix[None, :]) + np.abs(iy[:, None] - iy[None, :])

        # Combo axes: (m1, m2, n1_1, n2_1[, n1_2, n2_2]).
        shape = (n,) * (2 + 2 * k_users)
        scale = params.energy_efficiency * params.hap_power_w / params.noise_power_w
        c_total = np.zeros(shape)
        move = _axis_view(steps, shape, (0, 1))
        for k in range(k_users):
            ax1, ax2 = 2 + 2 * k, 3 + 2 * k
            h1 = _axis_view(sq[k].T, shape, (0, ax1))   # [m1, n1_k]
            h2 = _axis_view(sq[k].T, shape, (1, ax2))   # [m2, n2_k]
            c_total += scale * h1 * h2
            move = np.maximum(move, _axis_view(steps, shape, (ax1, ax2)))

        c_flat = c_total.reshape(-1)
        move_flat = move.reshape(-1)
        hap_flat = _axis_view(~np.eye(n, dtype=bool), shape, (0, 1)).reshape(-1)

        horizon = params.total_time_s
        step = tau1_step_fraction * horizon
        step_time = params.step_time_s

        def group_best(mask):
            best = 0.0
            for s in np.unique(move_flat[mask]):
                sel = mask & (move_flat == s)
                c_max = float(c_flat[sel].max())
                best = max(
                    best, _grid_best_throughput(c_max, horizon - s * step_time, step)
                )
            return best

        best_identical = group_best(move_flat == 0)
        best_moved = group_best(move_flat > 0)
        best_hap_mixed = group_best(hap_flat)

        # Identical placements must win outright; any combo that repositions
        # between phases (in particular a HAP move) must do strictly worse.
        gap = max(best_moved, best_hap_mixed) / best_identical - 1.0
        worst = max(worst, gap)
        if best_moved >= best_identical * (1.0 - 1e-6):
            failures += 1
        elif best_hap_mixed >= best_identical * (1.0 - 1e-6):
            failures += 1
    return OracleReport("proposition2_identical_placements", n_instances, failures, worst)


def _axis_view(mat, shape, axes):
    """Broadcast a 2-D array onto the combo lattice along the two given axes."""
    idx = [None] * len(shape)
    idx[axes[0]] = slice(None)
    idx[axes[1]] = slice(None)
    view = mat[tuple(idx)]
    return np.broadcast_to(view, shape)


# ---------------------------------------------------------------------------
# Energy causality of the reported uplink powers.


def energy_causality_violation(result, params):
    """Max relative violation of p_k * tau3 <= zeta * P * |h_k|^2 * tau1."""
    harvested = (
        params.energy_efficiency
        * params.hap_power_w
        * result.per_user_gain_sq
        * result.state.tau1_s
    )
    spent = result.per_user_power_w * result.tau3_s
    denom = np.maximum(harvested, params.noise_power_w)
    return float(((spent - harvested) / denom).max())


def check_energy_causality(result=None, params=None, seed=0, n_instances=10, config=None):
    """Tight-power check: report on one given solve result, or on freshly
    solved random instances when no result is supplied."""
    if result is not None:
        if params is None:
            raise ValueError("a params object must accompany an explicit result")
        viol = energy_causality_violation(result, params)
        return OracleReport(
            "energy_causality_tight_powers", 1, int(viol > 1e-9), viol
        )
    rng = np.random.default_rng(seed)
    failures = 0
    worst = -math.inf
    for i in range(n_instances):
        cfg = dict(config or {})
        cfg.setdefault("K", int(rng.integers(1, 4)))
        cfg.setdefault("L", int(rng.integers(1, 7)))
        params = params_from_config(cfg)
        realization = generate_realization(int(rng.integers(0, 2**63)), params)
        solver = solve_discrete if i % 2 else solve_continuous
        result = solver(realization, params, SolverOptions(max_iters=50))
        viol = energy_causality_violation(result, params)
        worst = max(worst, viol)
        if viol > 1e-9:
            failures += 1
    return OracleReport("energy_causality_tight_powers", n_instances, failures, worst)


# ---------------------------------------------------------------------------
# Gradients, quadruple-sum equivalence, minorant, curvature dominance.


def quad_sum_gain4(cache, pts, chunk=100):
    """Independent evaluation of the gain surface via the entry-wise
    quadruple-sum expansion (magnitude/phase of the rank-one quadratic form)."""
    pts = np.asarray(pts, dtype=float)
    mags = cache.pair_magnitudes()
    args = cache.pair_phases()
    dx, dy = cache.pair_dir_diffs()
    mag4 = mags[:, :, None, None] * mags[None, None, :, :]
    k = 2.0 * math.pi / cache.wavelength_m
    out = np.empty(len(pts))
    for lo in range(0, len(pts), chunk):
        sub = pts[lo:lo + chunk]
        pair_phase = (
            k * (sub[:, 0, None, None] * dx + sub[:, 1, None, None] * dy) + args
        )
        phase4 = pair_phase[:, :, :, None, None] + pair_phase[:, None, None, :, :]
        out[lo:lo + chunk] = (mag4 * np.cos(phase4)).sum(axis=(1, 2, 3, 4))
    return out


def quad_sum_gradient(cache, pos):
    """Independent gradient via the quadruple sum with the angle-difference
    coefficient tensors."""
    x, y = fourth_power.as_xy(pos)
    mags = cache.pair_magnitudes()
    args = cache.pair_phases()
    dx, dy = cache.pair_dir_diffs()
    alpha, beta = cache.angle_diff_coeffs()
    mag4 = mags[:, :, None, None] * mags[None, None, :, :]
    k = 2.0 * math.pi / cache.wavelength_m
    pair_phase = k * (x * dx + y * dy) + args
    phase4 = pair_phase[:, :, None, None] + pair_phase[None, None, :, :]
    s = np.sin(phase4) * mag4
    return np.array([-(k) * (s * alpha).sum(), -(k) * (s * beta).sum()])


def _random_cache(rng, n_paths, wavelength, gain_scale=1.0):
    elev = rng.uniform(0.0, math.pi, n_paths)
    azim = rng.uniform(0.0, math.pi, n_paths)
    weights = gain_scale * (
        rng.standard_normal(n_paths) + 1j * rng.standard_normal(n_paths)
    )
    return fourth_power.QuadraticFormCache(
        weights, np.sin(elev) * np.cos(azim), np.cos(elev), wavelength
    )


def check_surrogate_and_gradients(seed=0, n_instances=10, n_points=1000):
    """Per random instance: finite-difference gradient agreement, quadruple-sum
    value agreement, global minorant property, and curvature dominance of the
    Hessian norm, all at sampled positions in the moving region."""
    rng = np.random.default_rng(seed)
    wavelength = 0.06
    half = 2.5 * wavelength
    failures = 0
    worst = 0.0
    for _ in range(n_instances):
        cache = _random_cache(rng, int(rng.integers(2, 7)), wavelength)
        ref = rng.uniform(-half, half, 2)
        pts = rng.uniform(-half, half, (n_points, 2))

        value, grad = fourth_power.gain4_value_gradient(cache, ref)
        scale = max(abs(value), 1e-30)

        fd = _central_difference(cache, ref, 1e-6 * wavelength)
        gerr = np.abs(grad - fd).max() / max(np.abs(fd).max(), 1e-30)
        worst = max(worst, gerr)
        if gerr > 1e-5:
            failures += 1

        qgrad = quad_sum_gradient(cache, ref)
        qerr = np.abs(grad - qgrad).max() / max(np.abs(qgrad).max(), 1e-30)
        worst = max(worst, qerr)
        if qerr > 1e-9:
            failures += 1

        values = fourth_power.gain4_batch(cache, pts)
        qvals = quad_sum_gain4(cache, pts)
        verr = float(np.abs(values - qvals).max()) / max(float(qvals.max()), 1e-30)
        worst = max(worst, verr)
        if verr > 1e-9:
            failures += 1

        psi = fourth_power.curvature_bound(cache)
        diff = pts - ref
        minorant = (
            value + diff @ grad - 0.5 * psi * (diff * diff).sum(axis=1)
        )
        under = float((minorant - values).max()) / scale
        worst = max(worst, under)
        if under > 1e-9:
            failures += 1

        norms = fourth_power.hessian_fro_batch(cache, pts)
        dom = float((norms - psi).max()) / max(psi, 1e-30)
        worst = max(worst, dom)
        if dom > 1e-12:
            failures += 1
    return OracleReport("surrogate_and_gradients", n_instances, failures, worst)


def _central_difference(cache, pos, h):
    out = np.empty(2)
    for axis in range(2):
        lo = np.array(pos, dtype=float)
        hi = np.array(pos, dtype=float)
        lo[axis] -= h
        hi[axis] += h
        out[axis] = (fourth_power.gain4(cache, hi) - fourth_power.gain4(cache, lo)) / (
            2.0 * h
        )
    return out


# ---------------------------------------------------------------------------


def run_all_checks(seed=0, instances=5):
    return [
        check_lemma1(seed=seed, n_instances=10000 * instances),
        check_proposition2(seed=seed + 1, n_instances=instances),
        check_energy_causality(seed=seed + 2, n_instances=2 * instances),
        check_surrogate_and_gradients(seed=seed + 3, n_instances=instances),
    ]


def suite_report(reports):
    return {
        "passed": all(r.passed for r in reports),
        "checks": [r.to_dict() for r in reports],
    }
