"""Chebyshev spectral-filter machinery.

Two polynomial families live here:

* ErfPolynomial — an odd Chebyshev series approximating erf(k x) on [-1, 1],
  built from the closed-form coefficients with exponentially scaled modified
  Bessel factors (ive folds the e^{-k^2/2} prefactor in, so nothing
  overflows at large k).

* ChebyshevFilter — a smoothed window indicator.  A window [a, b] inside
  [-1, 1] is recentred through y = (x - w)/R with w the window centre and
  R = 1 + |w|; in the y variable the target
      F(y) = (erf(k (y + kappa)) + erf(k (kappa - y))) / 2,
  kappa = half-width + delta/2, is even, so the filter polynomial is a pure
  even Chebyshev series.  Coefficients come from interpolation at first-kind
  Chebyshev nodes (a DCT), which stays cheap at degrees ~1e5 where naive
  O(n^2) constructions are hopeless.

Every constructed object is grid-certified before it is returned: values on
a dense Chebyshev grid (synthesized with an inverse DCT, not per-point
Clenshaw) must satisfy the three-region contract
    >= 1 - eps  inside [a + delta, b - delta],
    <= eps      outside [a - delta, b + delta],
    in [0, 1 + eps] everywhere on the domain.
A small constant is added to c0 when roundoff drags the minimum below zero;
the margin budget (erf tail eps/4, interpolation eps/4) leaves room for it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dct, idct
from scipy.integrate import quad
from scipy.special import erf, ive

from .errors import InputError, ResourceError
from .operators import DenseOperator

DEGREE_CAP = 10 ** 5
CERT_GRID_MIN = 10 ** 4
EPS_VALIDITY = math.sqrt(2.0 / (math.e * math.pi))   # choose_k upper bound


def chebyshev_grid(n: int) -> np.ndarray:
    """First-kind Chebyshev nodes cos(pi (m + 1/2) / n), descending in x."""
    return np.cos((np.arange(n) + 0.5) * np.pi / n)


def _values_on_grid(coeffs: np.ndarray, n_grid: int) -> np.ndarray:
    """Evaluate a Chebyshev series on chebyshev_grid(n_grid) via inverse DCT."""
    m = len(coeffs)
    if m > n_grid:
        raise InputError("grid smaller than coefficient count")
    spec = np.zeros(n_grid)
    spec[0] = 2.0 * n_grid * coeffs[0]
    spec[1:m] = n_grid * coeffs[1:]
    return idct(spec, type=2)


def _interpolate(fn, n_nodes: int) -> np.ndarray:
    """Chebyshev coefficients of the degree n_nodes-1 interpolant of fn."""
    samples = fn(chebyshev_grid(n_nodes))
    spec = dct(samples, type=2)
    coeffs = spec / n_nodes
    coeffs[0] = spec[0] / (2.0 * n_nodes)
    return coeffs


def choose_k(delta: float, eps: float) -> float:
    """Steepness k with |erf(k x) - sgn(x)| <= eps whenever |x| >= delta/2."""
    if delta <= 0:
        raise InputError("delta must be positive")
    if not 0 < eps < EPS_VALIDITY:
        raise InputError(
            f"eps must lie in (0, {EPS_VALIDITY:.4f}) for the tail bound")
    return math.sqrt(2.0) / delta * math.sqrt(math.log(2.0 / (math.pi * eps * eps)))


def erf_chebyshev_coefficients(k: float, n_terms: int) -> np.ndarray:
    """Chebyshev coefficients of the canonical erf(k x) series.

    Term j contributes to order 2j+1; the telescoped coefficient is
    (2k/sqrt(pi)) (-1)^j (I_j + I_{j+1})(k^2/2) e^{-k^2/2} / (2j+1).
    Returns a dense array of length 2*n_terms (even slots zero).
    """
    if n_terms < 1:
        raise InputError("need at least one term")
    z = k * k / 2.0
    j = np.arange(n_terms)
    vals = (2.0 * k / math.sqrt(math.pi)) * (-1.0) ** j \
        * (ive(j, z) + ive(j + 1, z)) / (2 * j + 1)
    coeffs = np.zeros(2 * n_terms)
    coeffs[1::2] = vals
    return coeffs


@dataclass
class ErfPolynomial:
    """Odd Chebyshev approximation of erf(k x), rescaled so |p| <= 1."""

    k: float
    coefficients: np.ndarray
    eps_cert: float              # certified max |p(x) - erf(k x)| on the grid

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def eval(self, x):
        return np.polynomial.chebyshev.chebval(x, self.coefficients)


def build_erf_poly(k: float, eps: float) -> ErfPolynomial:
    """Grow the canonical series until the grid error is within eps."""
    if k <= 0:
        raise InputError("k must be positive")
    if not 0 < eps <= 1:
        raise InputError("eps must lie in (0, 1]")
    target_eps = eps / 2.0   # reserve half the budget for the sup rescale
    L = math.log(2.0 / target_eps)
    n_terms = max(4, int(0.55 * math.sqrt(2.0 * (k * k + L) * L)) + 2)
    while True:
        degree = 2 * n_terms - 1
        if degree > DEGREE_CAP:
            raise ResourceError(
                f"erf series degree {degree} exceeds cap {DEGREE_CAP}")
        coeffs = erf_chebyshev_coefficients(k, n_terms)
        n_grid = max(CERT_GRID_MIN, 4 * degree)
        grid = chebyshev_grid(n_grid)
        vals = _values_on_grid(coeffs, n_grid)
        dev = float(np.max(np.abs(vals - erf(k * grid))))
        if dev <= target_eps:
            sup = float(np.max(np.abs(vals)))
            if sup > 1.0:
                coeffs = coeffs / sup
                vals = vals / sup
            dev = float(np.max(np.abs(vals - erf(k * grid))))
            if dev <= eps:
                return ErfPolynomial(k, coeffs, dev)
        n_terms = max(n_terms + 2, int(1.5 * n_terms))


@dataclass
class ChebyshevFilter:
    """Even-parity smoothed indicator for a window [a, b] in [-1, 1].

    The series acts on y = (x - center)/scale; coefficients with odd index
    are identically zero.
    """

    center: float
    half_width: float
    delta: float
    eps: float
    k: float
    kappa: float                 # erf shift, in y units
    scale: float                 # R = 1 + |center|
    coefficients: np.ndarray
    certificate: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def window(self) -> tuple:
        return (self.center - self.half_width, self.center + self.half_width)

    def eval(self, x):
        """Pointwise evaluation; T_{2m}(y) = T_m(2y^2 - 1) keeps it O(d/2)."""
        y = (np.asarray(x, dtype=float) - self.center) / self.scale
        return np.polynomial.chebyshev.chebval(
            2.0 * y * y - 1.0, self.coefficients[::2])

    def to_json(self) -> str:
        payload = {
            "center": self.center,
            "half_width": self.half_width,
            "delta": self.delta,
            "eps": self.eps,
            "k": self.k,
            "kappa": self.kappa,
            "scale": self.scale,
            "coefficients": [float(c) for c in self.coefficients],
            "certificate": self.certificate,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ChebyshevFilter":
        raw = json.loads(text)
        return cls(
            center=raw["center"], half_width=raw["half_width"],
            delta=raw["delta"], eps=raw["eps"], k=raw["k"],
            kappa=raw["kappa"], scale=raw["scale"],
            coefficients=np.asarray(raw["coefficients"], dtype=float),
            certificate=dict(raw["certificate"]),
        )


def _certify_indicator(coeffs, center, scale, half_width, delta, eps):
    """Three-region check on a dense Chebyshev grid in the y variable.

    Returns (ok, cert_record) with the region extrema recorded.
    """
    degree = len(coeffs) - 1
    n_grid = max(CERT_GRID_MIN, 2 * degree + 1)
    y = chebyshev_grid(n_grid)
    vals = _values_on_grid(coeffs, n_grid)
    lo_in = (half_width - delta) / scale
    lo_out = (half_width + delta) / scale
    inner = np.abs(y) <= lo_in
    outer = np.abs(y) >= lo_out
    inner_min = float(np.min(vals[inner])) if inner.any() else 1.0
    outer_max = float(np.max(vals[outer])) if outer.any() else 0.0
    global_min = float(np.min(vals))
    global_max = float(np.max(vals))
    ok = (inner_min >= 1.0 - eps and outer_max <= eps
          and global_min >= 0.0 and global_max <= 1.0 + eps)
    cert = {
        "grid_size": n_grid,
        "inner_min": inner_min,
        "outer_max": outer_max,
        "global_min": global_min,
        "global_max": global_max,
        "eps": eps,
    }
    return ok, cert


def build_indicator(a: float, b: float, delta: float, eps: float
                    ) -> ChebyshevFilter:
    """Certified smoothed indicator of [a, b] with transition width delta."""
    if not -1.0 <= a < b <= 1.0:
        raise InputError(f"window [{a}, {b}] must sit inside [-1, 1]")
    half = (b - a) / 2.0
    if not 0 < delta < half:
        raise InputError(
            f"delta={delta} must be positive and below the half-width {half}")
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    center = (a + b) / 2.0
    scale = 1.0 + abs(center)
    half_y = half / scale
    delta_y = delta / scale
    eps_erf = min(eps / 4.0, 0.4)
    k = choose_k(delta_y, eps_erf)
    kappa = half_y + delta_y / 2.0

    def target(y):
        return 0.5 * (erf(k * (y + kappa)) + erf(k * (kappa - y)))

    L = math.log(8.0 / eps)
    degree = max(32, int(1.1 * math.sqrt(2.0 * (k * k + L) * L)) + 2)
    while True:
        if degree > DEGREE_CAP:
            raise ResourceError(
                f"indicator degree {degree} exceeds cap {DEGREE_CAP} "
                f"(window [{a}, {b}], delta={delta}, eps={eps})")
        coeffs = _interpolate(target, degree + 1)
        coeffs[1::2] = 0.0
        last = np.max(np.nonzero(np.abs(coeffs) > 0.0)[0], initial=0)
        coeffs = coeffs[:last + 1].copy()
        # lift a residual-negative floor back above zero with headroom: the
        # erf-pair target is strictly positive, but the interpolant
        # undershoots it by its residual, and the dips can land between the
        # nodes of any one grid.  Measure the worst undershoot on a dense
        # two-family grid (Chebyshev + uniform) and lift with a 3x margin;
        # the shift is residual-sized, far below the eps head-room of the
        # other region bounds.
        n_grid = max(CERT_GRID_MIN, 4 * (len(coeffs) - 1) + 5)
        vmin = float(np.min(_values_on_grid(coeffs, n_grid)))
        uniform = np.linspace(-1.0, 1.0, 30001)
        vmin = min(vmin, float(np.min(
            np.polynomial.chebyshev.chebval(uniform, coeffs))))
        if vmin < 1e-13:
            coeffs[0] += 3.0 * (1e-13 - vmin)
        ok, cert = _certify_indicator(coeffs, center, scale, half, delta, eps)
        if ok:
            return ChebyshevFilter(
                center=center, half_width=half, delta=delta, eps=eps,
                k=k, kappa=kappa, scale=scale, coefficients=coeffs,
                certificate=cert)
        # interpolation is cheap (one DCT), so grow gently and land close
        # to the smallest certifying degree
        degree = int(1.2 * degree) + 2


def apply_filter_eigvals(f: ChebyshevFilter, eigvals) -> np.ndarray:
    """f evaluated at a set of (rescaled) eigenvalues."""
    return np.asarray(f.eval(np.asarray(eigvals, dtype=float)))


def apply_filter_matrix(f: ChebyshevFilter, H_rescaled) -> DenseOperator:
    """p(H) by the three-term recurrence T_{j+1} = 2 Y T_j - T_{j-1}.

    H_rescaled may be a DenseOperator or a plain ndarray; its spectrum must
    already sit in [-1, 1] (2-norm checked).  The result is re-symmetrized
    before wrapping — p(H) is exactly hermitian in exact arithmetic, and the
    long recurrence otherwise leaves ~1e-13 of asymmetry behind.
    """
    H = getattr(H_rescaled, "matrix", H_rescaled)
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InputError("H must be a square matrix")
    norm = float(np.linalg.norm(H, 2))
    if norm > 1.0 + 1e-9:
        raise InputError(f"spectral norm {norm:.6g} exceeds 1; rescale first")
    dim = H.shape[0]
    eye = np.eye(dim)
    Y = ((H - f.center * eye) / f.scale).astype(complex)
    c = f.coefficients
    out = c[0] * eye.astype(complex)
    if len(c) > 1:
        Tprev, Tcur = eye.astype(complex), Y
        out = out + c[1] * Tcur
        for j in range(2, len(c)):
            Tprev, Tcur = Tcur, 2.0 * (Y @ Tcur) - Tprev
            if c[j] != 0.0:
                out = out + c[j] * Tcur
    hermitian = bool(np.max(np.abs(H - H.conj().T)) <= 1e-12)
    if hermitian:
        out = (out + out.conj().T) / 2.0
    return DenseOperator(out, hermitian=hermitian)


def jump_error_integral(delta: float, eps_cut: float = 0.0) -> float:
    """Accumulated indicator error across the smoothing ramp.

    Integrates |erf(x/delta) - 1| for x in [eps_cut, delta]; with
    eps_cut = 0 this is delta times the unit constant
    integral_0^1 |erf(y) - 1| dy = 0.51394, so the result grows linearly
    in the ramp width.
    """
    if delta <= 0:
        raise InputError("delta must be positive")
    if eps_cut < 0 or eps_cut >= delta:
        raise InputError("eps_cut must lie in [0, delta)")
    val, _ = quad(lambda x: abs(erf(x / delta) - 1.0), eps_cut, delta)
    return float(val)


def degree_estimate(delta: float, eps: float) -> int:
    """Coarse predicted filter degree ~ log(1/eps)/delta (constant 2.5)."""
    if delta <= 0 or eps <= 0:
        raise InputError("delta and eps must be positive")
    return int(math.ceil(2.5 * math.log(1.0 / eps) / delta))
