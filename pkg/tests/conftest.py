"""Shared fixtures and an independent brute-force oracle.

The naive builders below construct Fock-space matrices with explicit bit
loops and no shared code with the package, so they can arbitrate when a
package routine and a test disagree.  Mode p occupies bit (n - 1 - p),
i.e. mode 0 is the most significant bit.
"""

import math

import numpy as np
import pytest

from respsim import ModelSpec, diagonalize, make_hubbard_dimer
from respsim.assemble import ResponseTable
from respsim.spectra import nested_window_amplitude


# ---------------------------------------------------------------------------
# naive Fock-space construction
# ---------------------------------------------------------------------------

def naive_occ(state, p, n):
    return (state >> (n - 1 - p)) & 1


def naive_apply(state, p, dagger, n):
    """(sign, new_state) after one ladder operator, or None if annihilated."""
    filled = naive_occ(state, p, n)
    if dagger and filled:
        return None
    if not dagger and not filled:
        return None
    sign = 1
    for j in range(p):
        if naive_occ(state, j, n):
            sign = -sign
    return sign, state ^ (1 << (n - 1 - p))


def naive_term_matrix(n, actions):
    """Dense matrix of one ladder-operator product (leftmost applied last)."""
    dim = 2 ** n
    M = np.zeros((dim, dim))
    for col in range(dim):
        st, sgn, dead = col, 1, False
        for p, d in reversed(actions):
            r = naive_apply(st, p, d, n)
            if r is None:
                dead = True
                break
            s, st = r
            sgn *= s
        if not dead:
            M[st, col] += sgn
    return M


def naive_dense(n, terms):
    """Dense matrix of a {actions: coeff} fermionic operator."""
    dim = 2 ** n
    M = np.zeros((dim, dim), dtype=complex)
    for actions, coeff in terms.items():
        M += coeff * naive_term_matrix(n, actions)
    return M


def naive_model_matrices(model):
    """(H, D) dense Fock matrices built naively from a ModelSpec."""
    n = model.n_orbitals
    dim = 2 ** n
    H = np.zeros((dim, dim))
    for p in range(n):
        for q in range(n):
            if model.T[p, q] != 0.0:
                H += model.T[p, q] * naive_term_matrix(n, [(p, 1), (q, 0)])
    nz = np.nonzero(np.abs(model.V) > 0)
    for p, q, r, s in zip(*nz):
        H += model.V[p, q, r, s] * naive_term_matrix(
            n, [(int(p), 1), (int(q), 1), (int(r), 0), (int(s), 0)])
    D = np.zeros((3, dim, dim))
    for ax in range(3):
        for p in range(n):
            for q in range(n):
                if model.dipole[ax, p, q] != 0.0:
                    D[ax] += model.dipole[ax, p, q] * naive_term_matrix(
                        n, [(p, 1), (q, 0)])
    return H, D


def naive_sector_spectrum(model):
    """(excitations, transition_dipoles) in the half-filled sector,
    ground level shifted to zero - all via the naive builders."""
    n = model.n_orbitals
    H, D = naive_model_matrices(model)
    sector = [b for b in range(2 ** n)
              if bin(b).count("1") == model.n_electrons]
    Hs = H[np.ix_(sector, sector)]
    vals, vecs = np.linalg.eigh(Hs)
    w = vals - vals[0]
    td = np.stack([vecs.T @ D[ax][np.ix_(sector, sector)] @ vecs
                   for ax in range(3)])
    return w, td


# ---------------------------------------------------------------------------
# oracle-filled response tables (exact nested amplitudes on a tiling)
# ---------------------------------------------------------------------------

def distinct_lines(sd, tol=1e-9):
    out = []
    for w in sd.eigenvalues[1:]:
        if not any(abs(w - d) < tol for d in out):
            out.append(float(w))
    return out


def _tile(x, width):
    k = math.floor(x / width)
    return (round(k * width, 12), round((k + 1) * width, 12))


def oracle_tables(sd, axes, width, cut=1e-12):
    """Exact depth-1/2/3 amplitude tables on a width-`width` tiling.

    axes = (i_tr, i3, i2, i1) as in the third-order pathway conventions;
    only tiling bins that contain a spectral line enter the loops, and only
    nonzero amplitudes are stored.  Returns ({1: t1, 2: t2, 3: t3}, gd).
    """
    i_tr, i3, i2, i1 = axes
    chain3 = (i1, i_tr, i3, i2)
    bins = sorted({_tile(w, width) for w in distinct_lines(sd)})
    t1 = ResponseTable(order=1)
    for chain in dict.fromkeys([(i_tr, i1), (i2, i3), (i3, i_tr)]):
        for b in bins:
            val = nested_window_amplitude(sd, chain, (b,))
            if abs(val) > cut:
                t1.add({"axes": chain, "window": b, "value": val})
    t2 = ResponseTable(order=2)
    for chain in dict.fromkeys([(i2, i3, i_tr), (i1, i_tr, i3)]):
        for b1 in bins:
            for b2 in bins:
                val = nested_window_amplitude(sd, chain, (b1, b2))
                if abs(val) > cut:
                    t2.add({"axes": chain, "window": (b1, b2), "value": val})
    t3 = ResponseTable(order=3)
    for b1 in bins:
        for b2 in bins:
            for b3 in bins:
                val = nested_window_amplitude(sd, chain3, (b1, b2, b3))
                if abs(val) > cut:
                    t3.add({"axes": chain3, "window": (b1, b2, b3),
                            "value": val})
    gd = {ax: float(sd.transition_dipoles[ax][0, 0]) for ax in set(axes)}
    return {1: t1, 2: t2, 3: t3}, gd


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def dimer():
    return make_hubbard_dimer(t=1.0, U=2.0, d01=0.5)


@pytest.fixture(scope="session")
def dimer_sd(dimer):
    return diagonalize(dimer)


@pytest.fixture(scope="session")
def random_model():
    from respsim import make_random_model
    return make_random_model(n_orbitals=2, n_electrons=2, seed=5)


@pytest.fixture(scope="session")
def random_sd(random_model):
    return diagonalize(random_model)
