"""Alternating one-hot candidate selection over a lattice of antenna positions.

Candidates live on a square lattice of pitch d anchored at -A/2, ordered with
x varying fastest.  Each sweep picks the best HAP candidate given the device
selections, then the best candidate per device, then re-splits the frame; each
selection being an exact argmax of its subproblem keeps the trace monotone.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import Position
from .fourth_power import as_xy
from .continuous import (
    SolverOptions,
    finalize_result,
    horizon_throughput,
    optimal_tau1,
    solve_continuous,
    throughput_constant,
    _harvest_weight,
    _relative_gain,
)


@dataclass(frozen=True)
class CandidateGrid:
    """Discrete candidate positions shared by every moving region."""

    positions: np.ndarray   # (N, 2), x fastest, anchored at -A/2
    pitch_m: float
    region_size_m: float

    def __post_init__(self):
        self.positions.flags.writeable = False

    @property
    def count(self):
        return self.positions.shape[0]

    def index_nearest(self, xy):
        """Lowest index among candidates closest to the given point."""
        d = np.abs(self.positions - np.asarray(xy, dtype=float)).sum(axis=1)
        return int(np.argmin(d))


def build_grid(params):
    size = params.region_size_m
    pitch = params.step_size_m
    if pitch > size:
        raise ValueError(
            f"step_size_m {pitch!r} exceeds region_size_m {size!r}: empty lattice"
        )
    # The 1e-9 slack keeps exact multiples (e.g. A/d = 20) from losing a row
    # to floating-point rounding.
    per_axis = int(math.floor(size / pitch + 1e-9)) + 1
    axis = -0.5 * size + pitch * np.arange(per_axis)
    xs = np.tile(axis, per_axis)
    ys = np.repeat(axis, per_axis)
    return CandidateGrid(
        positions=np.column_stack([xs, ys]), pitch_m=pitch, region_size_m=size
    )


def grid_responses(realization, grid, wavelength):
    """Per-device phase-response tables at every candidate.

    Returns (hap_tables, wd_tables): lists over devices of (N, L) complex
    arrays, rows being the departure (HAP side) / arrival (device side)
    responses at each candidate position.
    """
    scale = 2.0 * math.pi / wavelength
    pos = grid.positions
    hap_tables, wd_tables = [], []
    for k in range(realization.num_wds):
        phase = scale * (
            np.outer(pos[:, 0], realization.aod_dir_x[k])
            + np.outer(pos[:, 1], realization.aod_dir_y[k])
        )
        hap_tables.append(np.exp(1j * phase))
        phase = scale * (
            np.outer(pos[:, 0], realization.aoa_dir_x[k])
            + np.outer(pos[:, 1], realization.aoa_dir_y[k])
        )
        wd_tables.append(np.exp(1j * phase))
    return hap_tables, wd_tables


def channel_tables(realization, grid, wavelength):
    """Per-device (N_device, N_hap) downlink coefficients for all candidate pairs."""
    hap_tables, wd_tables = grid_responses(realization, grid, wavelength)
    out = []
    for k in range(realization.num_wds):
        weighted = np.conj(wd_tables[k]) * realization.path_response[k]
        out.append(weighted @ hap_tables[k].T)
    return out


def channel_table(realization, grid, wavelength, k):
    """(N_device, N_hap) downlink coefficients for every candidate pair."""
    return channel_tables(realization, grid, wavelength)[k]


@dataclass
class DiscreteSolveState:
    hap_index: int
    wd_indices: np.ndarray
    tau1_s: float
    objective_trace: list = field(default_factory=list)
    iterations: int = 0


def _hap_weights(realization, k, wd_tables, wd_index):
    # Weight vector against the HAP-side responses given device k's selection.
    return np.conj(realization.path_response[k]) * wd_tables[k][wd_index]


def _device_coefficients(realization, state, hap_tables, wd_tables):
    """Current per-device downlink coefficients at the selected candidates."""
    out = np.empty(realization.num_wds, dtype=complex)
    for k in range(realization.num_wds):
        y = _hap_weights(realization, k, wd_tables, state.wd_indices[k])
        out[k] = hap_tables[k][state.hap_index] @ np.conj(y)
    return out


def argmax_lowest(scores, rel_tol=1e-12):
    """Lowest index whose score is within rel_tol of the maximum.

    Mathematically tied candidates (a single-path channel makes every
    position score equal) come out of floating point differing in the last
    ulp, so a plain argmax would pick an arbitrary member of the tie group;
    snapping to the lowest near-maximal index keeps selection deterministic
    across algebraically equivalent evaluation orders.
    """
    scores = np.asarray(scores)
    top = float(scores.max())
    if top <= 0.0:
        return 0
    return int(np.argmax(scores >= top - rel_tol * top))


def select_hap_index(state, grid, realization, params, tables=None):
    """Argmax candidate of the weighted fourth-power sum; ties -> lowest index.

    `tables` lets the solver loop pass the response tables it already built;
    standalone callers hand over the grid and the tables are derived here.
    """
    if tables is None:
        tables = grid_responses(realization, grid, params.wavelength_m)
    hap_tables, wd_tables = tables
    mu = _harvest_weight(params, state.tau1_s)
    score = np.zeros(hap_tables[0].shape[0])
    for k in range(realization.num_wds):
        y = _hap_weights(realization, k, wd_tables, state.wd_indices[k])
        amp = hap_tables[k] @ np.conj(y)
        score += mu * (amp.real**2 + amp.imag**2) ** 2
    return argmax_lowest(score)


def select_wd_index(state, k, grid, realization, params, tables=None):
    """Argmax candidate for device k's own antenna; ties -> lowest index."""
    if tables is None:
        tables = grid_responses(realization, grid, params.wavelength_m)
    hap_tables, wd_tables = tables
    weighted = realization.path_response[k] * hap_tables[k][state.hap_index]
    amp = np.conj(wd_tables[k]) @ weighted
    score = (amp.real**2 + amp.imag**2) ** 2
    return argmax_lowest(score)


def solve_discrete(realization, params, options=None):
    """Alternating selection from the candidates nearest the reference point."""
    opts = options or SolverOptions()
    if opts.d_over_lambda is not None:
        params = params.with_updates(
            step_size_m=opts.d_over_lambda * params.wavelength_m
        )
    grid = build_grid(params)
    hap_tables, wd_tables = grid_responses(realization, grid, params.wavelength_m)
    k_total = realization.num_wds
    start = grid.index_nearest((0.0, 0.0))
    wd_movable = (
        np.ones(k_total, dtype=bool)
        if opts.wd_movable is None
        else np.asarray(opts.wd_movable, dtype=bool)
    )
    wd_start = np.full(k_total, start, dtype=int)
    if opts.init_wd_pos is not None:
        wd_start = np.array(
            [grid.index_nearest(as_xy(p)) for p in opts.init_wd_pos], dtype=int
        )
    state = DiscreteSolveState(
        hap_index=(
            start
            if opts.init_hap_pos is None
            else grid.index_nearest(as_xy(opts.init_hap_pos))
        ),
        wd_indices=wd_start,
        tau1_s=opts.init_tau1_s if opts.init_tau1_s is not None else 0.5 * params.total_time_s,
    )

    def current_objective():
        coeffs = _device_coefficients(realization, state, hap_tables, wd_tables)
        gains4 = (coeffs.real**2 + coeffs.imag**2) ** 2
        return throughput_constant(params, gains4.sum())

    c = current_objective()
    state.objective_trace.append(
        horizon_throughput(c, state.tau1_s, params.total_time_s)
    )

    converged = False
    for _ in range(opts.max_iters):
        prev_indices = (state.hap_index, state.wd_indices.copy())
        if opts.hap_movable:
            state.hap_index = select_hap_index(
                state, grid, realization, params, tables=(hap_tables, wd_tables)
            )
        for k in np.flatnonzero(wd_movable):
            state.wd_indices[k] = select_wd_index(
                state, k, grid, realization, params, tables=(hap_tables, wd_tables)
            )
        c = current_objective()
        state.tau1_s = optimal_tau1(c, params.total_time_s)
        obj = horizon_throughput(c, state.tau1_s, params.total_time_s)
        state.iterations += 1
        prev = state.objective_trace[-1]
        state.objective_trace.append(obj)
        stable = (
            state.hap_index == prev_indices[0]
            and np.array_equal(state.wd_indices, prev_indices[1])
        )
        if stable and _relative_gain(prev, obj) < opts.epsilon:
            converged = True
            break

    # Reuse the continuous result assembly: positions become the selected
    # lattice points.
    state_view = _DiscreteResultView(state, grid)
    return finalize_result(realization, params, state_view, converged,
                           decoding_order=opts.decoding_order)


class _DiscreteResultView:
    """Adapter giving a DiscreteSolveState the position attributes finalize_result reads."""

    def __init__(self, state, grid):
        self.discrete = state
        self.grid = grid
        self.hap_pos = Position.from_array(grid.positions[state.hap_index])
        self.wd_pos = [Position.from_array(grid.positions[i]) for i in state.wd_indices]
        self.tau1_s = state.tau1_s
        self.objective_trace = state.objective_trace
        self.iterations = state.iterations


def refine_continuously(realization, params, discrete_result=None, options=None):
    """Lattice search for a starting point, then local continuous ascent.

    The alternating one-hot selection scans every candidate per block, so it
    lands near the best lattice basin; handing its solution to the continuous
    solver as the starting point then only improves it (monotone trace).
    Antennas masked out by the options stay at their configured fixed spots
    rather than snapping to a lattice point.
    """
    opts = options or SolverOptions()
    if discrete_result is None:
        discrete_result = solve_discrete(realization, params, opts)
    view = discrete_result.state
    origin = Position(0.0, 0.0)
    if opts.hap_movable:
        hap0 = view.hap_pos
    else:
        hap0 = opts.init_hap_pos if opts.init_hap_pos is not None else origin
    movable = (
        np.ones(realization.num_wds, dtype=bool)
        if opts.wd_movable is None
        else np.asarray(opts.wd_movable, dtype=bool)
    )
    wd0 = []
    for k in range(realization.num_wds):
        if movable[k]:
            wd0.append(view.wd_pos[k])
        elif opts.init_wd_pos is not None:
            wd0.append(opts.init_wd_pos[k])
        else:
            wd0.append(origin)
    cont_opts = replace(
        opts,
        init_hap_pos=hap0,
        init_wd_pos=tuple(wd0),
        init_tau1_s=view.tau1_s,
        d_over_lambda=None,
    )
    return solve_continuous(realization, params, cont_opts)
