"""Block-encoding bookkeeping on dense matrices.

A block encoding is tracked as (operator, subnormalization, ancilla count):
the operator is the exact matrix being encoded, the subnormalization is the
factor the hypothetical circuit divides out, and ancillas are counted but
never simulated.  Products of encodings multiply subnormalizations and add
ancillas; a spectral filter slots into a chain as a factor with
subnormalization 1 (its polynomial is bounded by 1 up to its certification
slack, which is carried in eps_encode).

Two subnormalization conventions exist for a filtered dipole sandwich: the
tight product beta * beta' * 1 of the factors actually built, and an
inflated (alpha + 1 + |omega|) * beta * beta' that folds the spectral shift
in.  The chain carries the tight value as `zeta` (it is what the simulated
success probabilities obey) and the inflated one as `zeta_inflated` for
cost formulas that want it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .chebfilter import ChebyshevFilter, apply_filter_matrix
from .errors import InputError, StatisticalFailure
from .operators import DenseOperator, PauliOperator, lcu_one_norm


@dataclass(frozen=True)
class BlockEncoding:
    """(alpha, q, eps) encoding of a dense operator."""

    op: DenseOperator
    subnorm: float
    ancillas: int
    eps_encode: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.subnorm < 0:
            raise InputError("subnormalization must be non-negative")
        if self.ancillas < 0:
            raise InputError("ancilla count must be non-negative")
        norm = self.op.norm2()
        if norm > self.subnorm + self.eps_encode + 1e-9:
            raise InputError(
                f"operator norm {norm:.6g} exceeds subnormalization "
                f"{self.subnorm:.6g} (+eps {self.eps_encode:.2g})")


@dataclass(frozen=True)
class EncodingChain:
    """Ordered product of block encodings (leftmost applied last)."""

    factors: tuple
    effective: DenseOperator
    zeta: float
    ancillas: int
    zeta_inflated: float = 0.0
    label: str = ""

    def __post_init__(self):
        prod = 1.0
        for f in self.factors:
            prod *= f.subnorm
        if not math.isclose(prod, self.zeta, rel_tol=1e-12, abs_tol=1e-300):
            raise InputError("zeta must equal the product of factor subnorms")

    def describe(self) -> dict:
        return {
            "label": self.label,
            "zeta": self.zeta,
            "zeta_inflated": self.zeta_inflated,
            "ancillas": self.ancillas,
            "factors": [
                {"label": f.label, "subnorm": f.subnorm,
                 "ancillas": f.ancillas, "eps_encode": f.eps_encode}
                for f in self.factors
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)


def encode_lcu(p: PauliOperator, label: str = "") -> BlockEncoding:
    """Encoding of a Pauli-sum operator: subnorm is its coefficient 1-norm,
    ancillas index the terms."""
    n_terms = len(p.terms)
    if n_terms == 0:
        raise InputError("cannot encode an empty operator")
    subnorm = lcu_one_norm(p)
    ancillas = math.ceil(math.log2(n_terms)) if n_terms > 1 else 0
    return BlockEncoding(p.dense(), subnorm, ancillas, label=label)


def shift_encoding(be: BlockEncoding, omega: float,
                   label: str = "") -> BlockEncoding:
    """Encoding of op - omega*I; costs one ancilla and |omega| subnorm."""
    dim = be.op.dim
    shifted = DenseOperator(be.op.matrix - omega * np.eye(dim),
                            hermitian=be.op.hermitian)
    return BlockEncoding(shifted, be.subnorm + abs(omega), be.ancillas + 1,
                         be.eps_encode, label=label or be.label)


def filtered_chain(U_D: BlockEncoding, filt: ChebyshevFilter,
                   H_enc: BlockEncoding, U_Dp: BlockEncoding,
                   omega: float = 0.0, label: str = "") -> EncodingChain:
    """Chain D' . p((H - omega I)/(alpha + |omega|)) . D.

    The filter window must refer to the rescaled spectrum of the shifted
    operator; its polynomial enters as a subnorm-1 factor whose
    certification slack rides along as encoding error.  Two extra ancillas
    account for the filter implementation itself.
    """
    lo, hi = filt.window
    if lo < -1.0 or hi > 1.0:
        raise InputError(
            f"filter window [{lo}, {hi}] falls outside the rescaled domain")
    shifted = shift_encoding(H_enc, omega, label="H-shift")
    rescaled = DenseOperator(shifted.op.matrix / shifted.subnorm,
                             hermitian=shifted.op.hermitian)
    P = apply_filter_matrix(filt, rescaled)
    filt_factor = BlockEncoding(P, 1.0, shifted.ancillas + 2,
                                eps_encode=filt.eps, label="filter")
    effective = DenseOperator(
        U_Dp.op.matrix @ P.matrix @ U_D.op.matrix)
    zeta = U_D.subnorm * U_Dp.subnorm * 1.0
    zeta_inflated = (H_enc.subnorm + 1.0 + abs(omega)) \
        * U_D.subnorm * U_Dp.subnorm
    ancillas = U_D.ancillas + U_Dp.ancillas + filt_factor.ancillas
    return EncodingChain(
        factors=(U_Dp, filt_factor, U_D),
        effective=effective,
        zeta=zeta,
        ancillas=ancillas,
        zeta_inflated=zeta_inflated,
        label=label,
    )


def chain_product(factors, label: str = "") -> EncodingChain:
    """General ordered product of encodings (leftmost factor applied last)."""
    factors = tuple(factors)
    if not factors:
        raise InputError("need at least one factor")
    mat = factors[0].op.matrix
    zeta = factors[0].subnorm
    anc = factors[0].ancillas
    for f in factors[1:]:
        mat = mat @ f.op.matrix
        zeta *= f.subnorm
        anc += f.ancillas
    return EncodingChain(factors=factors, effective=DenseOperator(mat),
                         zeta=zeta, ancillas=anc, zeta_inflated=zeta,
                         label=label)


def success_probability(chain: EncodingChain, state) -> tuple:
    """(success probability, xi) for post-selecting the chain on `state`.

    xi is the norm of the un-normalized image ||effective |state>||; the
    probability is (xi/zeta)^2.
    """
    v = np.asarray(state, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise InputError(f"state norm {nrm:.6g} is not 1")
    xi = float(np.linalg.norm(chain.effective.matrix @ v))
    return (xi / chain.zeta) ** 2, xi


def amplification_rounds(chain: EncodingChain, state) -> int:
    """Amplitude-amplification rounds ceil(zeta/xi) needed on this state."""
    _, xi = success_probability(chain, state)
    if xi == 0.0:
        raise StatisticalFailure(
            "no signal in window: amplification cannot succeed")
    return math.ceil(chain.zeta / xi)
