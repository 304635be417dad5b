"""Measurement-protocol simulation: Hadamard tests, bin search, estimation.

The quantities being estimated are windowed transition-amplitude sums
    d_[a,b] = sum_{excitation in [a,b)} d_out[0,j] d_in[j,0].
A hypothetical device prepares the ground state, applies the encoded chain
D' p((H - E0 - w_c I)/s) D, and reads the ancilla of a Hadamard test:
P(0) = (1 + Re v)/2 with
v = <0|chain|0>/zeta.  Classically we have the eigensystem, so v is computed
through it (sum of d' p(y_j) d over eigenstates) and only the *statistics*
are simulated.  The ground state contributes p(y_0) d'_00 d_00 to the raw
sandwich; that term is classically known and is subtracted from estimates
and from the bin-search test statistics (the physical protocol would apply
the same correction to its empirical frequencies).

Filter polynomials are cached module-wide on their shape (half-width,
smoothing, eps in rescaled units), and their eigenvalue evaluations on
(shape, centre, scale, spectrum); repeated searches over the same model
rebuild nothing.  Caches never affect values, only speed, so determinism
is preserved.
"""

from __future__ import annotations

import dataclasses
import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .chebfilter import build_indicator
from .errors import InputError
from .models import ModelSpec
from .operators import build_dipole, build_hamiltonian, jordan_wigner, lcu_one_norm
from .spectra import SpectralData, diagonalize

_FILTER_CACHE = {}
_EVAL_CACHE = {}
_NORM_CACHE = {}

P0_SLACK = 0.05          # tolerated overshoot of |v| beyond 1 (filter bump)


def clear_caches():
    _FILTER_CACHE.clear()
    _EVAL_CACHE.clear()
    _NORM_CACHE.clear()


# ---------------------------------------------------------------------------
# model preparation (subnormalizations + eigensystem bundle)
# ---------------------------------------------------------------------------

def _hamiltonian_one_norm(model: ModelSpec) -> float:
    key = ("H", model.T.tobytes(), model.V.tobytes())
    if key not in _NORM_CACHE:
        pauli = jordan_wigner(build_hamiltonian(model.T, model.V),
                              model.n_orbitals)
        _NORM_CACHE[key] = lcu_one_norm(pauli)
    return _NORM_CACHE[key]


def _dipole_one_norm(model: ModelSpec, axis: int) -> float:
    key = ("D", axis, model.dipole[axis].tobytes())
    if key not in _NORM_CACHE:
        mat = model.dipole[axis]
        if np.count_nonzero(mat) == 0:
            beta = 0.0
        else:
            pauli = jordan_wigner(build_dipole(mat), model.n_orbitals)
            beta = lcu_one_norm(pauli)
        _NORM_CACHE[key] = beta
    return _NORM_CACHE[key]


@dataclass
class _Prep:
    """Per-(model, chain-axes) bundle used by channels and searches."""

    sd: SpectralData
    chain_axes: tuple        # (ax0, ..., axK) of the dipole chain
    alpha_shift: float       # alpha_H + |E0|: bound on excitation energies
    betas: tuple             # encoding subnorm per chain axis (0 -> 1.0)
    zeta: float


def _prepare(model: ModelSpec, sd: SpectralData, chain_axes) -> _Prep:
    chain_axes = tuple(int(a) for a in chain_axes)
    alpha_h = _hamiltonian_one_norm(model)
    e0 = sd.ground_energy - model.nuclear_shift
    betas = []
    for ax in chain_axes:
        beta = _dipole_one_norm(model, ax)
        betas.append(beta if beta > 0 else 1.0)   # zero dipole: unit encoding
    zeta = 1.0
    for b in betas:
        zeta *= b
    return _Prep(sd, chain_axes, alpha_h + abs(e0), tuple(betas), zeta)


def _cached_filter(half_y: float, delta_y: float, eps: float):
    key = (round(half_y, 12), round(delta_y, 12), float(eps))
    filt = _FILTER_CACHE.get(key)
    if filt is None:
        filt = build_indicator(-half_y, half_y, delta_y, eps)
        _FILTER_CACHE[key] = filt
    return key, filt


def _rescale(prep: _Prep, wc: float) -> float:
    """Encoding rescale for the shifted operator H - E0 - wc.

    Excitation energies are certified to lie in [0, alpha_shift], so the
    shifted spectrum fits in [-s, s] with s = max(wc, alpha_shift - wc).
    Windows start at wc >= half-width > 0, hence s >= half-width always.
    The tight bound matters: the filter degree scales with s, and the
    generic alpha + |wc| would roughly double it.
    """
    return max(wc, prep.alpha_shift - wc)


def _filter_eigvals(sd: SpectralData, key, filt, center: float, scale: float
                    ) -> np.ndarray:
    ekey = key + (round(center, 12), round(scale, 12),
                  sd.eigenvalues.tobytes())
    vals = _EVAL_CACHE.get(ekey)
    if vals is None:
        y = (sd.eigenvalues - center) / scale
        vals = np.asarray(filt.eval(y), dtype=float)
        _EVAL_CACHE[ekey] = vals
    return vals


# ---------------------------------------------------------------------------
# Hadamard channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HadamardChannel:
    """One Hadamard-test Bernoulli source.

    `value` is the ground-corrected amplitude (the estimation target);
    `ground_term` the classically known ground-state contribution.  The
    physical 0-outcome probability uses their sum.
    """

    value: complex
    ground_term: complex
    zeta: float
    variant: str = "re"        # "re" or "im"
    seed: int = 0
    degree: int = 0            # filter degree charged per query
    window: tuple = ()
    label: str = ""
    chain: object = None
    state: object = None

    def __post_init__(self):
        if self.variant not in ("re", "im"):
            raise InputError(f"unknown variant {self.variant!r}")
        if self.zeta <= 0:
            raise InputError("zeta must be positive")

    @property
    def p0(self) -> float:
        v = self.value + self.ground_term
        x = v.real if self.variant == "re" else v.imag
        if abs(x) > 1.0 + P0_SLACK:
            raise InputError(
                f"|amplitude| {abs(x):.4f} exceeds 1: wrong zeta?")
        return 0.5 * (1.0 + min(1.0, max(-1.0, x)))


def channel_from_chain(chain, state, variant: str = "re", seed: int = 0,
                       degree: int = 0, label: str = "") -> HadamardChannel:
    """Wrap an explicit encoding chain + state as a sampling channel."""
    v = np.asarray(state, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise InputError(f"state norm {nrm:.6g} is not 1")
    val = complex(v.conj() @ (chain.effective.matrix @ v)) / chain.zeta
    return HadamardChannel(value=val, ground_term=0j, zeta=chain.zeta,
                           variant=variant, seed=seed, degree=degree,
                           label=label, chain=chain, state=state)


def imaginary_part_channel(ch: HadamardChannel) -> HadamardChannel:
    """Phase-shifted variant reading Im instead of Re."""
    return dataclasses.replace(ch, variant="im")


def sample_hadamard(ch: HadamardChannel, shots: int, rng=None) -> float:
    """Empirical P(0) from `shots` Bernoulli draws (seeded, deterministic)."""
    if shots < 1:
        raise InputError("need at least one shot")
    if rng is None:
        rng = np.random.default_rng(ch.seed)
    return float(rng.binomial(shots, ch.p0)) / shots


def _window_channel(prep: _Prep, window, delta: float, eps: float,
                    label: str = "") -> HadamardChannel:
    """Channel for a depth-1 window on the excitation axis (chain D' p D)."""
    lo, hi = window
    sd = prep.sd
    wc = (lo + hi) / 2.0
    h = (hi - lo) / 2.0
    s = _rescale(prep, wc)
    key, filt = _cached_filter(h / s, delta / s, eps)
    pvals = _filter_eigvals(sd, key, filt, wc, s)
    ax0, ax1 = prep.chain_axes
    d_out0 = sd.transition_dipoles[ax0][0, :]
    d_in0 = sd.transition_dipoles[ax1][:, 0]
    prods = d_out0 * pvals * d_in0
    g = complex(prods[0]) / prep.zeta
    v = complex(np.sum(prods[1:])) / prep.zeta
    return HadamardChannel(value=v, ground_term=g, zeta=prep.zeta,
                           degree=filt.degree, window=(lo, hi), label=label)


def _box_channel(prep: _Prep, windows, deltas, eps: float,
                 label: str = "") -> HadamardChannel:
    """Channel for a depth-n box: nested filters, ground zeroed at every
    depth (the classical subtraction applied once per nesting level)."""
    sd = prep.sd
    axes = prep.chain_axes
    if len(axes) != len(windows) + 1:
        raise InputError("chain axes must be one longer than the box depth")
    degree = 0
    u = sd.transition_dipoles[axes[-1]][:, 0].astype(complex)
    u_raw = u.copy()
    for ax, (lo, hi), delta in zip(axes[-2::-1], list(windows)[::-1],
                                   list(deltas)[::-1]):
        wc = (lo + hi) / 2.0
        h = (hi - lo) / 2.0
        s = _rescale(prep, wc)
        key, filt = _cached_filter(h / s, delta / s, eps)
        pvals = _filter_eigvals(sd, key, filt, wc, s)
        degree += filt.degree
        u_raw = sd.transition_dipoles[ax] @ (u_raw * pvals)
        masked = pvals.copy()
        masked[0] = 0.0
        u = sd.transition_dipoles[ax] @ (u * masked)
    v = complex(u[0]) / prep.zeta
    g = complex(u_raw[0]) / prep.zeta - v
    return HadamardChannel(value=v, ground_term=g, zeta=prep.zeta,
                           degree=degree, window=tuple(windows), label=label)


# ---------------------------------------------------------------------------
# LCU-of-Hadamard-tests distribution and the inequality test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LcuDistribution:
    """Categorical over bins 0..B-1 plus a terminal discard outcome."""

    probabilities: np.ndarray       # length B+1; last entry is the discard

    @property
    def n_bins(self) -> int:
        return len(self.probabilities) - 1

    def sample_counts(self, rng, n: int) -> np.ndarray:
        """Counts per bin over n draws (discard outcome dropped)."""
        draws = rng.choice(len(self.probabilities), size=n,
                           p=self.probabilities)
        return np.bincount(draws, minlength=len(self.probabilities))[:-1]


def lcu_hadamard_distribution(channels) -> LcuDistribution:
    """P(i) = (1 + x_i)/(2B) over B channels, remainder discarded.

    x_i is the quadrature each channel is configured for (Re or Im of its
    amplitude).  Channels must share a subnormalization; probabilities
    outside [0,1] mean the caller divided by the wrong zeta and are
    rejected.
    """
    if not channels:
        raise InputError("need at least one channel")
    B = len(channels)
    zeta0 = channels[0].zeta
    for ch in channels:
        if abs(ch.zeta - zeta0) > 1e-9 * max(1.0, zeta0):
            raise InputError("channels must share one subnormalization")
    xs = np.array([ch.value.real if ch.variant == "re" else ch.value.imag
                   for ch in channels])
    if np.any(np.abs(xs) > 1.0 + P0_SLACK):
        raise InputError("bin amplitude outside [-1, 1]: wrong zeta?")
    xs = np.clip(xs, -1.0, 1.0)
    probs = (1.0 + xs) / (2.0 * B)
    residual = 1.0 - probs.sum()
    if residual < -1e-9:
        raise InputError("bin probabilities exceed 1")
    full = np.append(probs, max(residual, 0.0))
    full = full / full.sum()
    return LcuDistribution(full)


def inequality_test(counts_i: int, counts_j: int, N_s: int, tau: float) -> str:
    """'greater' / 'less' when the empirical gap clears tau, else
    'indistinguishable'."""
    if N_s < 1:
        raise InputError("N_s must be positive")
    diff = (counts_i - counts_j) / N_s
    if diff > tau:
        return "greater"
    if diff < -tau:
        return "less"
    return "indistinguishable"


def _relation_matrix(counts, N_s: int, tau: float) -> np.ndarray:
    nb = len(counts)
    R = np.zeros((nb, nb), dtype=int)
    for i in range(nb):
        for j in range(i + 1, nb):
            rel = inequality_test(int(counts[i]), int(counts[j]), N_s, tau)
            if rel == "greater":
                R[i, j], R[j, i] = 1, -1
            elif rel == "less":
                R[i, j], R[j, i] = -1, 1
    return R


# ---------------------------------------------------------------------------
# bin-search configuration and trace
# ---------------------------------------------------------------------------

@dataclass
class BinSearchConfig:
    """Knobs of the hierarchical bin search.

    N_s defaults to the sample-size bound ceil(log(4/eps_conf)/tau^2);
    passing a smaller value is rejected.  tau defaults to 1/(2*branching).
    """

    gamma: float
    branching: int = 2
    tau: float = None
    eps_conf: float = 1.0 / 3.0
    N_s: int = None
    max_depth: int = 40
    overlap: float = 0.1
    span: tuple = None
    filter_eps: float = 1e-2
    max_boxes: int = 2000

    def __post_init__(self):
        if self.gamma <= 0:
            raise InputError("gamma must be positive")
        if self.branching < 2:
            raise InputError("branching factor must be at least 2")
        if not 0 < self.overlap < 0.5:
            raise InputError("overlap fraction must lie in (0, 0.5)")
        if not 0 < self.eps_conf < 1:
            raise InputError("eps_conf must lie in (0, 1)")
        if not 0 < self.filter_eps < 0.5:
            raise InputError("filter_eps must lie in (0, 0.5)")
        if self.tau is None:
            self.tau = 1.0 / (2.0 * self.branching)
        if self.tau <= 0:
            raise InputError("tau must be positive")
        n_min = math.ceil(math.log(4.0 / self.eps_conf) / self.tau ** 2)
        if self.N_s is None:
            self.N_s = n_min
        elif self.N_s < n_min:
            raise InputError(
                f"N_s={self.N_s} below the sample-size bound {n_min}")
        if self.span is not None:
            lo, hi = self.span
            if not 0 <= lo < hi:
                raise InputError(
                    "span must be an increasing pair of non-negative "
                    "excitation energies")
            self.span = (float(lo), float(hi))

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma, "branching": self.branching,
            "tau": self.tau, "eps_conf": self.eps_conf, "N_s": self.N_s,
            "max_depth": self.max_depth, "overlap": self.overlap,
            "span": list(self.span) if self.span else None,
            "filter_eps": self.filter_eps, "max_boxes": self.max_boxes,
        }


@dataclass
class SearchTrace:
    """Everything one search run did, in visiting order."""

    config: dict
    seed: int
    dims: int
    levels: list = field(default_factory=list)
    peaks: list = field(default_factory=list)
    marked: list = field(default_factory=list)
    queries_total: int = 0
    per_level_queries: dict = field(default_factory=dict)
    truncated: bool = False

    @property
    def found(self) -> bool:
        return len(self.peaks) > 0

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "seed": self.seed,
            "dims": self.dims,
            "levels": self.levels,
            "peaks": self.peaks,
            "marked": self.marked,
            "queries_total": self.queries_total,
            "per_level_queries": self.per_level_queries,
            "truncated": self.truncated,
            "found": self.found,
        }
        return json.dumps(payload, sort_keys=True)


def sort_bins(channels, config: BinSearchConfig, rng=None,
              counts=None) -> np.ndarray:
    """Relation matrix over bins: sample the joint distribution once, then
    run every pairwise inequality test on the shared counts."""
    if rng is None:
        rng = np.random.default_rng(0)
    if counts is None:
        dist = lcu_hadamard_distribution(channels)
        counts = dist.sample_counts(rng, config.N_s)
    return _relation_matrix(counts, config.N_s, config.tau)


# ---------------------------------------------------------------------------
# the search itself (shared 1-D / n-D engine)
# ---------------------------------------------------------------------------

def _split_box(box, nbins):
    """Cartesian bins of a box; returns (cells, per-axis widths).

    box: tuple of (lo, hi) per axis; nbins: per-axis subdivision counts.
    Cells are ordered lexicographically by axis indices.
    """
    axes_bins = []
    widths = []
    for (lo, hi), nb in zip(box, nbins):
        w = (hi - lo) / nb
        widths.append(w)
        axes_bins.append([(lo + i * w, lo + (i + 1) * w) for i in range(nb)])
    cells = [()]
    for bins_d in axes_bins:
        cells = [c + (b,) for c in cells for b in bins_d]
    return cells, widths


def _cell_index_tuple(flat_index, nbins):
    idx = []
    for nb in reversed(nbins):
        idx.append(flat_index % nb)
        flat_index //= nb
    return tuple(reversed(idx))


def _adjacent_pair(i, j, nbins):
    """Axis along which flat cells i and j are face-adjacent, else None."""
    ti = _cell_index_tuple(i, nbins)
    tj = _cell_index_tuple(j, nbins)
    axis = None
    for d, (a, b) in enumerate(zip(ti, tj)):
        if a != b:
            if abs(a - b) == 1 and axis is None:
                axis = d
            else:
                return None
    return axis


def _search(model: ModelSpec, chain_axes, ndim: int,
            config: BinSearchConfig, seed: int = 0,
            sd: SpectralData = None) -> SearchTrace:
    if sd is None:
        sd = diagonalize(model)
    prep = _prepare(model, sd, chain_axes)
    if config.span is None:
        span = (0.0, prep.alpha_shift)
    else:
        span = config.span
    rng = np.random.default_rng(seed)
    trace = SearchTrace(config=config.as_dict(), seed=seed, dims=ndim)
    root = tuple((span[0], span[1]) for _ in range(ndim))
    queue = deque([(root, 0, (config.branching,) * ndim)])
    seen_peaks = set()

    while queue:
        if len(trace.levels) >= config.max_boxes:
            trace.truncated = True
            break
        box, depth, nbins = queue.popleft()
        if depth > config.max_depth:
            trace.truncated = True
            continue
        cells, widths = _split_box(box, nbins)
        ncells = len(cells)
        deltas = [config.overlap * w for w in widths]
        if ndim == 1:
            channels = [_window_channel(prep, c[0], deltas[0],
                                        config.filter_eps) for c in cells]
        else:
            channels = [_box_channel(prep, c, deltas, config.filter_eps)
                        for c in cells]
        base = 1.0 / (2.0 * ncells)
        if ndim == 1:
            # 1-D amplitudes are sums of |d|^2 weights, hence real and
            # nonnegative: a one-sided elevation test on one quadrature
            # suffices and the relation matrix compares raw counts.
            dist = lcu_hadamard_distribution(channels)
            counts = dist.sample_counts(rng, config.N_s)
            charge = config.N_s * sum(ch.degree for ch in channels)
            scores = counts / config.N_s - base
            R = _relation_matrix(counts, config.N_s, config.tau)
            level_counts = {"counts": [int(c) for c in counts]}
        else:
            # Nested box amplitudes are products of signed dipole matrix
            # elements and may sit anywhere in the complex plane, so a
            # bright box can just as well depress its bin probability.
            # Sample both quadratures and score each bin by its largest
            # absolute deviation from the flat background.
            dist_re = lcu_hadamard_distribution(channels)
            dist_im = lcu_hadamard_distribution(
                [imaginary_part_channel(ch) for ch in channels])
            counts_re = dist_re.sample_counts(rng, config.N_s)
            counts_im = dist_im.sample_counts(rng, config.N_s)
            charge = 2 * config.N_s * sum(ch.degree for ch in channels)
            dev_re = counts_re / config.N_s - base
            dev_im = counts_im / config.N_s - base
            scores = np.maximum(np.abs(dev_re), np.abs(dev_im))
            R = np.zeros((ncells, ncells), dtype=int)
            for i in range(ncells):
                for j in range(i + 1, ncells):
                    if scores[i] - scores[j] > config.tau:
                        R[i, j], R[j, i] = 1, -1
                    elif scores[j] - scores[i] > config.tau:
                        R[i, j], R[j, i] = -1, 1
            level_counts = {"counts": [int(c) for c in counts_re],
                            "counts_im": [int(c) for c in counts_im]}
        trace.queries_total += charge
        lvl_key = str(depth)
        trace.per_level_queries[lvl_key] = \
            trace.per_level_queries.get(lvl_key, 0) + charge
        prominent = [i for i in range(ncells) if scores[i] > config.tau]
        terminal = max(widths) <= config.gamma * (1.0 + 1e-9)

        def record(decision):
            trace.levels.append({
                "box": [list(iv) for iv in box],
                "depth": depth,
                "nbins": list(nbins),
                **level_counts,
                "R": R.tolist(),
                "prominent": prominent,
                "decision": decision,
                "charge": charge,
            })

        if not prominent:
            record("empty")
            continue
        if terminal:
            record("peaks")
            for i in prominent:
                key = tuple((round(a, 12), round(b, 12)) for a, b in cells[i])
                if key not in seen_peaks:
                    seen_peaks.add(key)
                    peak = [list(iv) for iv in cells[i]]
                    trace.peaks.append(peak if ndim > 1 else peak[0])
            continue
        dominant = [i for i in prominent
                    if all(R[i, j] == 1 for j in range(ncells) if j != i)]
        if dominant:
            i_star = dominant[0]
            rest = [i for i in prominent if i != i_star]
            record("descend")
            queue.appendleft((cells[i_star], depth + 1,
                              (config.branching,) * ndim))
            for r in rest:
                trace.marked.append([list(iv) for iv in cells[r]])
                queue.append((cells[r], depth + 1,
                              (config.branching,) * ndim))
            continue
        # ties among prominent bins
        tied = prominent
        merge = None
        for a_i in range(len(tied)):
            for b_i in range(a_i + 1, len(tied)):
                i, j = tied[a_i], tied[b_i]
                axis = _adjacent_pair(i, j, nbins)
                if axis is not None and R[i, j] == 0:
                    merge = (i, j, axis)
                    break
            if merge:
                break
        if merge is not None:
            i, j, axis = merge
            lo = min(cells[i][axis][0], cells[j][axis][0])
            hi = max(cells[i][axis][1], cells[j][axis][1])
            union = tuple(
                (lo, hi) if d == axis else cells[i][d]
                for d in range(ndim))
            nb_union = tuple(
                2 * config.branching if d == axis else config.branching
                for d in range(ndim))
            record("merge")
            queue.appendleft((union, depth + 1, nb_union))
            for r in tied:
                if r not in (i, j):
                    trace.marked.append([list(iv) for iv in cells[r]])
                    queue.append((cells[r], depth + 1,
                                  (config.branching,) * ndim))
            continue
        pick = int(rng.choice(np.array(tied)))
        rest = [i for i in tied if i != pick]
        record("random-pick")
        queue.appendleft((cells[pick], depth + 1,
                          (config.branching,) * ndim))
        for r in rest:
            trace.marked.append([list(iv) for iv in cells[r]])
            queue.append((cells[r], depth + 1, (config.branching,) * ndim))

    return trace


def binary_search_1d(model: ModelSpec, axes, config: BinSearchConfig,
                     seed: int = 0, sd: SpectralData = None) -> SearchTrace:
    """Hierarchical peak search on the excitation axis.

    axes = (axis_in, axis_out) of the dipole sandwich; peaks come back as
    (lo, hi) windows of width <= gamma.
    """
    ax_in, ax_out = axes
    return _search(model, (ax_out, ax_in), 1, config, seed=seed, sd=sd)


def binary_search_nd(model: ModelSpec, axes, depth_n: int,
                     config: BinSearchConfig, seed: int = 0,
                     sd: SpectralData = None) -> SearchTrace:
    """Search over depth_n-dimensional boxes with nested window filters.

    axes is the dipole chain (one entry more than depth_n), ordered as in
    nested window amplitudes: axes[0] couples the ground state to the first
    (innermost) windowed index.
    """
    if depth_n < 1:
        raise InputError("depth must be at least 1")
    if len(tuple(axes)) != depth_n + 1:
        raise InputError("need depth_n + 1 chain axes")
    return _search(model, tuple(axes), depth_n, config, seed=seed, sd=sd)


# ---------------------------------------------------------------------------
# window estimation
# ---------------------------------------------------------------------------

@dataclass
class WindowEstimate:
    window: tuple
    axes: tuple
    value: complex
    method: str
    shots: int
    queries: int
    eps_filter: float
    eps_stat: float
    degree: int
    rounds: int
    delta: float
    zeta: float

    def as_dict(self) -> dict:
        return {
            "window": list(self.window), "axes": list(self.axes),
            "re": self.value.real, "im": self.value.imag,
            "method": self.method, "shots": self.shots,
            "queries": self.queries, "eps_filter": self.eps_filter,
            "eps_stat": self.eps_stat, "degree": self.degree,
            "rounds": self.rounds, "delta": self.delta, "zeta": self.zeta,
        }


def estimate_window(model: ModelSpec, axes, window, eps: float,
                    method: str = "direct", delta: float = None,
                    gamma: float = None, seed: int = 0,
                    sd: SpectralData = None) -> WindowEstimate:
    """Estimate the window amplitude to additive accuracy eps (plus the
    unavoidable delta-margin mass).

    methods: "direct" Bernoulli Hadamard sampling (shots ~ 1/eps^2);
    "ae" idealized amplitude estimation (exact value + seeded perturbation
    bounded by the statistical budget, shots ~ 1/eps); "exact" the ae
    query accounting with the perturbation switched off.
    """
    if method not in ("direct", "ae", "exact"):
        raise InputError(f"unknown method {method!r}")
    if eps <= 0:
        raise InputError("eps must be positive")
    a, b = window
    if not 0 <= a < b:
        raise InputError(f"window [{a}, {b}) is empty, reversed or negative")
    if gamma is not None and (b - a) > gamma * (1.0 + 1e-9):
        raise InputError(f"window width {b - a:.4g} exceeds target {gamma}")
    if sd is None:
        sd = diagonalize(model)
    ax_in, ax_out = axes
    prep = _prepare(model, sd, (ax_out, ax_in))
    zeta = prep.zeta
    if delta is None:
        delta = (b - a) / 4.0
    if not 0 < delta < (b - a) / 2.0:
        raise InputError("delta must lie in (0, half-width)")
    eps_f = min(eps / (2.0 * zeta), 0.4)
    ch = _window_channel(prep, (a, b), delta, eps_f)
    # amplification accounting uses the physical (uncorrected) image norm
    wc, h = (a + b) / 2.0, (b - a) / 2.0
    s = _rescale(prep, wc)
    key, filt = _cached_filter(h / s, delta / s, eps_f)
    pvals = _filter_eigvals(sd, key, filt, wc, s)
    u = sd.transition_dipoles[prep.chain_axes[1]][:, 0] * pvals
    xi = float(np.linalg.norm(
        sd.transition_dipoles[prep.chain_axes[0]] @ u))
    rng = np.random.default_rng(seed)
    if method == "direct":
        eps_v = eps / (2.0 * math.sqrt(2.0) * zeta)
        shots_per = math.ceil(2.0 * math.log(12.0) / eps_v ** 2)
        ch_im = imaginary_part_channel(ch)
        f_re = sample_hadamard(ch, shots_per, rng)
        f_im = sample_hadamard(ch_im, shots_per, rng)
        v_hat = complex(2.0 * f_re - 1.0, 2.0 * f_im - 1.0) - ch.ground_term
    else:
        eps_v = eps / (2.0 * zeta)
        shots_per = math.ceil(2.0 / eps_v)
        if method == "ae":
            mag = eps_v * rng.uniform(0.0, 1.0)
            phase = 2.0 * math.pi * rng.uniform(0.0, 1.0)
            v_hat = ch.value + mag * complex(math.cos(phase),
                                             math.sin(phase))
        else:
            v_hat = ch.value
    d_hat = zeta * v_hat
    if abs(d_hat) > zeta:
        d_hat *= zeta / abs(d_hat)
    xi_eff = max(xi, eps_v * zeta)
    rounds = max(1, math.ceil(zeta / xi_eff))
    shots = 2 * shots_per
    queries = ch.degree * shots * rounds
    return WindowEstimate(
        window=(float(a), float(b)), axes=(int(ax_in), int(ax_out)),
        value=d_hat, method=method, shots=shots, queries=queries,
        eps_filter=eps / 2.0, eps_stat=eps / 2.0, degree=ch.degree,
        rounds=rounds, delta=delta, zeta=zeta)


def estimate_box(model: ModelSpec, chain_axes, windows, eps: float,
                 method: str = "ae", delta: float = None, seed: int = 0,
                 sd: SpectralData = None) -> WindowEstimate:
    """Nested-window analogue of estimate_window for depth >= 2 boxes."""
    if method not in ("direct", "ae", "exact"):
        raise InputError(f"unknown method {method!r}")
    if eps <= 0:
        raise InputError("eps must be positive")
    windows = [tuple(map(float, w)) for w in windows]
    for lo, hi in windows:
        if not 0 <= lo < hi:
            raise InputError(
                f"window [{lo}, {hi}) is empty, reversed or negative")
    if sd is None:
        sd = diagonalize(model)
    prep = _prepare(model, sd, tuple(chain_axes))
    zeta = prep.zeta
    if delta is None:
        deltas = [(hi - lo) / 4.0 for lo, hi in windows]
    else:
        deltas = [delta] * len(windows)
    eps_f = min(eps / (2.0 * zeta), 0.4)
    ch = _box_channel(prep, windows, deltas, eps_f)
    rng = np.random.default_rng(seed)
    if method == "direct":
        eps_v = eps / (2.0 * math.sqrt(2.0) * zeta)
        shots_per = math.ceil(2.0 * math.log(12.0) / eps_v ** 2)
        f_re = sample_hadamard(ch, shots_per, rng)
        f_im = sample_hadamard(imaginary_part_channel(ch), shots_per, rng)
        v_hat = complex(2.0 * f_re - 1.0, 2.0 * f_im - 1.0) - ch.ground_term
    else:
        eps_v = eps / (2.0 * zeta)
        shots_per = math.ceil(2.0 / eps_v)
        if method == "ae":
            mag = eps_v * rng.uniform(0.0, 1.0)
            phase = 2.0 * math.pi * rng.uniform(0.0, 1.0)
            v_hat = ch.value + mag * complex(math.cos(phase),
                                             math.sin(phase))
        else:
            v_hat = ch.value
    d_hat = zeta * v_hat
    if abs(d_hat) > zeta:
        d_hat *= zeta / abs(d_hat)
    shots = 2 * shots_per
    rounds = 1
    queries = ch.degree * shots * rounds
    return WindowEstimate(
        window=tuple(windows), axes=tuple(int(a) for a in chain_axes),
        value=d_hat, method=method, shots=shots, queries=queries,
        eps_filter=eps / 2.0, eps_stat=eps / 2.0, degree=ch.degree,
        rounds=rounds, delta=deltas[0], zeta=zeta)
