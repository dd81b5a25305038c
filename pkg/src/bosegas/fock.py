"""Truncated Fock space over a finite mode set, and the operators living on it.

The basis enumerates every occupation vector with total excitation number
at most the cap, ordered by (total, lexicographic occupation), which makes
all downstream results deterministic.  Operators are real sparse matrices
in that basis; every creation amplitude is sqrt(n+1) truncated at the cap,
and the weighted variants carry the extra factor sqrt(1 - total/N)
evaluated on the state to the right of the square root, so that creation
and annihilation are exact float adjoints of each other.

All matrices here are real symmetric (anti-symmetric for the quadratic
generators); hermiticity therefore means symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import BasisSizeError, GuardError
from .lattice import Mode

__all__ = [
    "OccupationState",
    "FockBasis",
    "HermitianOperator",
    "build_basis",
    "ladder",
    "number_operator",
    "total_number",
    "momentum_operator",
    "build_D",
    "build_K",
    "build_LN",
    "build_quadratic_generator",
    "GibbsState",
    "gibbs",
    "expect",
]

DEFAULT_STATE_LIMIT = 200_000
DEFAULT_DENSE_LIMIT = 6_000


@dataclass(frozen=True)
class OccupationState:
    """One basis state: per-mode occupations with their derived bookkeeping."""

    occ: tuple[int, ...]
    total: int
    momentum: tuple[int, int, int]


class FockBasis:
    """Occupation-number basis with a total-excitation cap.

    Without momentum filtering the state count is the stars-and-bars value
    C(cap + n_modes, n_modes); the optional ``total_momentum_zero`` flag
    restricts to states whose integer momenta sum to zero.
    """

    def __init__(
        self,
        modes: Sequence[Mode],
        cap: int,
        state_limit: int = DEFAULT_STATE_LIMIT,
        total_momentum_zero: bool = False,
    ):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        modes = tuple(modes)
        triples = {m.n for m in modes}
        if len(triples) != len(modes):
            raise ValueError("duplicate modes in basis")
        full_count = comb(cap + len(modes), len(modes))
        if full_count > state_limit:
            raise BasisSizeError(full_count, state_limit)

        self.modes = modes
        self.cap = cap
        self.mode_index = {m.n: i for i, m in enumerate(modes)}
        self._n_vectors = np.array([m.n for m in modes], dtype=np.int64)

        states: list[tuple[int, ...]] = []
        for total in range(cap + 1):
            states.extend(_compositions(total, len(modes)))
        if total_momentum_zero:
            states = [
                s for s in states
                if not np.any(np.asarray(s, dtype=np.int64) @ self._n_vectors)
            ]
        self.states = tuple(states)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.totals = np.array([sum(s) for s in self.states], dtype=np.int64)
        self._occ_array: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.states)

    @property
    def negation_closed(self) -> bool:
        triples = {m.n for m in self.modes}
        return all(m.negated() in triples for m in self.modes)

    def state(self, i: int) -> OccupationState:
        occ = self.states[i]
        momentum = np.asarray(occ, dtype=np.int64) @ self._n_vectors
        return OccupationState(occ=occ, total=int(self.totals[i]), momentum=tuple(int(c) for c in momentum))

    def occupations(self) -> np.ndarray:
        """All occupation vectors as an (n_states, n_modes) integer array."""
        if self._occ_array is None:
            self._occ_array = np.array(self.states, dtype=np.int64)
        return self._occ_array


def _compositions(total: int, parts: int):
    """Occupation vectors summing to ``total``, in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def build_basis(
    modes: Sequence[Mode],
    cap: int,
    state_limit: int = DEFAULT_STATE_LIMIT,
    total_momentum_zero: bool = False,
) -> FockBasis:
    return FockBasis(modes, cap, state_limit, total_momentum_zero)


@dataclass(frozen=True)
class HermitianOperator:
    """A real matrix over a FockBasis (sparse CSR or dense ndarray)."""

    basis: FockBasis
    matrix: object

    def toarray(self) -> np.ndarray:
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)

    def hermiticity_defect(self) -> float:
        m = self.matrix
        if sp.issparse(m):
            d = m - m.T
            return float(abs(d).max()) if d.nnz else 0.0
        return float(np.max(np.abs(m - m.T)))

    def is_diagonal(self) -> bool:
        m = self.matrix
        if sp.issparse(m):
            coo = m.tocoo()
            return bool(np.all(coo.row == coo.col))
        return bool(np.count_nonzero(m - np.diag(np.diag(m))) == 0)

    def diagonal(self) -> np.ndarray:
        m = self.matrix
        return np.asarray(m.diagonal()) if sp.issparse(m) else np.diag(m).copy()


def _check_same_basis(x: HermitianOperator, y: HermitianOperator):
    if x.basis is not y.basis:
        raise ValueError("operators live on different bases")


# ---------------------------------------------------------------------------
# ladder operators
# ---------------------------------------------------------------------------

def ladder(
    basis: FockBasis,
    mode: Mode,
    kind: str,
    N: int | None = None,
) -> sp.csr_matrix:
    """Sparse matrix of a (possibly weighted) creation or annihilation operator.

    kind is one of 'create', 'annihilate', 'b_create', 'b_annihilate'.  The
    weighted kinds need the particle number N >= cap and carry the factor
    sqrt(1 - total/N) with the total excitation number of the state the
    factor acts on, which keeps them inside the capped space.
    """
    if mode.n not in basis.mode_index:
        raise ValueError(f"mode {mode.n} not in basis")
    if kind.startswith("b_"):
        if N is None:
            raise ValueError("weighted ladder operators need N")
        if N < basis.cap:
            raise ValueError("weighted ladder operators need N >= cap")
    j = basis.mode_index[mode.n]

    rows, cols, data = [], [], []
    creating = kind in ("create", "b_create")
    for col, occ in enumerate(basis.states):
        n_j = occ[j]
        total = basis.totals[col]
        if creating:
            if total + 1 > basis.cap:
                continue
            target = occ[:j] + (n_j + 1,) + occ[j + 1:]
            amp = math.sqrt(n_j + 1)
            if kind == "b_create":
                amp *= math.sqrt(1.0 - total / N)
        else:
            if n_j == 0:
                continue
            target = occ[:j] + (n_j - 1,) + occ[j + 1:]
            amp = math.sqrt(n_j)
            if kind == "b_annihilate":
                amp *= math.sqrt(1.0 - (total - 1) / N)
        rows.append(basis.index[target])
        cols.append(col)
        data.append(amp)
    dim = len(basis)
    return sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))


def number_operator(basis: FockBasis, mode: Mode) -> sp.csr_matrix:
    j = basis.mode_index[mode.n]
    diag = np.array([occ[j] for occ in basis.states], dtype=float)
    return sp.diags(diag).tocsr()


def total_number(basis: FockBasis) -> sp.csr_matrix:
    return sp.diags(basis.totals.astype(float)).tocsr()


def momentum_operator(basis: FockBasis, component: int) -> sp.csr_matrix:
    """Diagonal total-momentum component (integer lattice units)."""
    n_comp = np.array([m.n[component] for m in basis.modes], dtype=np.int64)
    diag = basis.occupations() @ n_comp
    return sp.diags(diag.astype(float)).tocsr()


# ---------------------------------------------------------------------------
# diagonal Hamiltonians
# ---------------------------------------------------------------------------

def _check_shell_consistent(basis: FockBasis, values: np.ndarray, name: str):
    by_shell: dict[int, float] = {}
    for m, v in zip(basis.modes, values):
        key = m.norm_sq
        if key in by_shell and by_shell[key] != v:
            raise ValueError(f"{name} is not constant on shell |n|^2 = {key}")
        by_shell[key] = v


def build_D(basis: FockBasis, eps: Sequence[float]) -> HermitianOperator:
    """Diagonal quasi-particle Hamiltonian sum_p eps_p n_p."""
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (len(basis.modes),):
        raise ValueError("eps must give one energy per mode")
    _check_shell_consistent(basis, eps, "eps")
    diag = basis.occupations() @ eps
    return HermitianOperator(basis, sp.diags(diag).tocsr())


def build_K(basis: FockBasis) -> HermitianOperator:
    """Kinetic energy sum_p |p|^2 n_p."""
    p_sq = np.array([m.p_sq for m in basis.modes])
    return build_D(basis, p_sq)


# ---------------------------------------------------------------------------
# excitation Hamiltonian
# ---------------------------------------------------------------------------

class _SparseBuilder:
    def __init__(self, dim: int):
        self.rows: list[int] = []
        self.cols: list[int] = []
        self.data: list[float] = []
        self.dim = dim

    def add(self, row: int, col: int, value: float):
        if value != 0.0:
            self.rows.append(row)
            self.cols.append(col)
            self.data.append(value)

    def tocsr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.data, (self.rows, self.cols)), shape=(self.dim, self.dim)
        )


def build_LN(
    basis: FockBasis,
    N: int,
    v_hat: Callable[[float], float],
    momentum_scale: float | None = None,
) -> HermitianOperator:
    """Excitation Hamiltonian on the capped basis, all interaction legs inside the mode set.

    ``v_hat`` is the radial Fourier transform of the interaction; it is
    sampled at |p|/N on the physical momenta of the basis modes.  Assembles
    the kinetic part plus the scalar/number block, the quadratic block with
    its anomalous pairs, the cubic block and the quartic block, keeping
    exactly the momentum-conserving terms whose every leg lies in the mode
    set.  The result commutes with total momentum and is exactly symmetric.
    """
    if N < basis.cap:
        raise ValueError("build_LN needs N >= cap")
    if not basis.negation_closed:
        raise ValueError("build_LN needs a negation-closed mode set")
    modes = basis.modes
    scale = momentum_scale if momentum_scale is not None else math.sqrt(modes[0].p_sq / modes[0].norm_sq)
    index = basis.mode_index
    dim = len(basis)
    n_modes = len(modes)

    def khat(n_triple) -> float:
        norm = math.sqrt(sum(c * c for c in n_triple))
        return v_hat(scale * norm / N)

    v0 = v_hat(0.0)
    vp = np.array([khat(m.n) for m in modes])

    builder = _SparseBuilder(dim)

    # diagonal blocks: kinetic + scalar/number + direct quadratic
    p_sq = np.array([m.p_sq for m in modes])
    occs = basis.occupations()
    totals = basis.totals
    kinetic = occs @ p_sq
    direct = (occs @ vp) * (N - totals) / N
    scalar = 0.5 * N * v0 - 0.5 * v0 * (1.0 - totals / N) - 0.5 * v0 * totals**2 / N
    for i in range(dim):
        builder.add(i, i, kinetic[i] + scalar[i] + direct[i])

    # anomalous quadratic block: (1/2) sum_p vp [b*_p b*_-p + b_p b_-p]
    neg_index = [index[modes[i].negated()] for i in range(n_modes)]
    active = [i for i in range(n_modes) if vp[i] != 0.0]
    for col, occ in enumerate(basis.states):
        total = int(totals[col])
        for i in active:
            j = neg_index[i]
            # b*_p b*_-p: create at -p then at p, weights on intermediate totals
            if total + 2 <= basis.cap:
                amp = math.sqrt(occ[j] + 1) * math.sqrt(1.0 - total / N)
                mid = occ[:j] + (occ[j] + 1,) + occ[j + 1:]
                amp *= math.sqrt(mid[i] + 1) * math.sqrt(1.0 - (total + 1) / N)
                target = mid[:i] + (mid[i] + 1,) + mid[i + 1:]
                builder.add(basis.index[target], col, 0.5 * vp[i] * amp)
            # b_p b_-p: annihilate at -p then at p
            if occ[j] >= 1:
                mid = occ[:j] + (occ[j] - 1,) + occ[j + 1:]
                if mid[i] >= 1:
                    amp = math.sqrt(occ[j]) * math.sqrt(1.0 - (total - 1) / N)
                    amp *= math.sqrt(mid[i]) * math.sqrt(1.0 - (total - 2) / N)
                    target = mid[:i] + (mid[i] - 1,) + mid[i + 1:]
                    builder.add(basis.index[target], col, 0.5 * vp[i] * amp)

    # cubic block: N^{-1/2} sum vp [b*_{p+q} a*_{-p} a_q + h.c.], all legs in the set
    cubic_terms = []
    for ip, mp_ in enumerate(modes):
        for iq, mq in enumerate(modes):
            s = tuple(a + b for a, b in zip(mp_.n, mq.n))
            if s == (0, 0, 0) or s not in index or vp[ip] == 0.0:
                continue
            cubic_terms.append((index[s], neg_index[ip], iq, vp[ip]))
    inv_sqrt_n = 1.0 / math.sqrt(N)
    for col, occ in enumerate(basis.states):
        total = int(totals[col])
        for i_s, i_mp, i_q, v in cubic_terms:
            # b*_{p+q} a*_{-p} a_q
            if occ[i_q] >= 1:
                amp = math.sqrt(occ[i_q])
                st1 = occ[:i_q] + (occ[i_q] - 1,) + occ[i_q + 1:]
                amp *= math.sqrt(st1[i_mp] + 1)
                st2 = st1[:i_mp] + (st1[i_mp] + 1,) + st1[i_mp + 1:]
                if total + 1 <= basis.cap:
                    amp3 = amp * math.sqrt(st2[i_s] + 1) * math.sqrt(1.0 - total / N)
                    target = st2[:i_s] + (st2[i_s] + 1,) + st2[i_s + 1:]
                    row = basis.index[target]
                    value = inv_sqrt_n * v * amp3
                    builder.add(row, col, value)
                    builder.add(col, row, value)  # + h.c.

    # quartic block: (2N)^{-1} sum vhat(r/N) a*_{p+r} a*_q a_p a_{q+r}
    quartic_terms = []
    for ip, mp_ in enumerate(modes):
        for iq, mq in enumerate(modes):
            for is_, ms in enumerate(modes):
                r = tuple(a - b for a, b in zip(ms.n, mp_.n))
                t = tuple(a + b for a, b in zip(mq.n, r))
                if t not in index:
                    continue
                v_r = khat(r)
                if v_r == 0.0:
                    continue
                quartic_terms.append((is_, iq, ip, index[t], v_r))
    half_inv_n = 0.5 / N
    for col, occ in enumerate(basis.states):
        for i_s, i_q, i_p, i_t, v in quartic_terms:
            if occ[i_t] == 0:
                continue
            amp = math.sqrt(occ[i_t])
            st1 = occ[:i_t] + (occ[i_t] - 1,) + occ[i_t + 1:]
            if st1[i_p] == 0:
                continue
            amp *= math.sqrt(st1[i_p])
            st2 = st1[:i_p] + (st1[i_p] - 1,) + st1[i_p + 1:]
            amp *= math.sqrt(st2[i_q] + 1)
            st3 = st2[:i_q] + (st2[i_q] + 1,) + st2[i_q + 1:]
            amp *= math.sqrt(st3[i_s] + 1)
            target = st3[:i_s] + (st3[i_s] + 1,) + st3[i_s + 1:]
            builder.add(basis.index[target], col, half_inv_n * v * amp)

    return HermitianOperator(basis, builder.tocsr())


# ---------------------------------------------------------------------------
# quadratic generators
# ---------------------------------------------------------------------------

def pair_partners(basis: FockBasis) -> list[tuple[int, int]]:
    """Mode-index pairs (i, j) with modes[j] = -modes[i], each pair once."""
    if not basis.negation_closed:
        raise ValueError("mode set is not closed under negation")
    pairs = []
    seen = set()
    for i, m in enumerate(basis.modes):
        if i in seen:
            continue
        j = basis.mode_index[m.negated()]
        seen.update((i, j))
        pairs.append((i, j))
    return pairs


def build_quadratic_generator(
    basis: FockBasis,
    c: Sequence[float],
    kind: str = "a_type",
    N: int | None = None,
) -> sp.csr_matrix:
    """Anti-symmetric generator (1/2) sum_p c_p (X*_p X*_-p - X_p X_-p).

    With X the plain ladder operators ('a_type') this is the standard
    pair-rotation generator; 'b_type' uses the weighted operators and needs
    N.  The coefficient must be constant on each +-p pair; the p-sum counts
    every pair twice, so each unordered pair enters with full weight c_p.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (len(basis.modes),):
        raise ValueError("need one coefficient per mode")
    if kind not in ("a_type", "b_type"):
        raise ValueError("kind must be 'a_type' or 'b_type'")
    if kind == "b_type":
        if N is None:
            raise ValueError("b_type generator needs N")
        if N < basis.cap:
            raise ValueError("b_type generator needs N >= cap")
    _check_shell_consistent(basis, c, "generator coefficient")

    builder = _SparseBuilder(len(basis))
    pairs = pair_partners(basis)
    for i, j in pairs:
        if c[i] != c[j]:
            raise ValueError("generator coefficient must match on +-p pairs")
    for col, occ in enumerate(basis.states):
        total = sum(occ)
        for i, j in pairs:
            coeff = c[i]
            if coeff == 0.0:
                continue
            # raising part X*_p X*_-p
            if total + 2 <= basis.cap:
                amp = math.sqrt(occ[j] + 1)
                mid = occ[:j] + (occ[j] + 1,) + occ[j + 1:]
                amp *= math.sqrt(mid[i] + 1)
                if kind == "b_type":
                    amp *= math.sqrt(1.0 - total / N) * math.sqrt(1.0 - (total + 1) / N)
                target = mid[:i] + (mid[i] + 1,) + mid[i + 1:]
                builder.add(basis.index[target], col, coeff * amp)
            # lowering part -X_p X_-p
            if occ[j] >= 1:
                mid = occ[:j] + (occ[j] - 1,) + occ[j + 1:]
                if mid[i] >= 1:
                    amp = math.sqrt(occ[j]) * math.sqrt(mid[i])
                    if kind == "b_type":
                        amp *= math.sqrt(1.0 - (total - 1) / N) * math.sqrt(1.0 - (total - 2) / N)
                    target = mid[:i] + (mid[i] - 1,) + mid[i + 1:]
                    builder.add(basis.index[target], col, -coeff * amp)
    return builder.tocsr()


# ---------------------------------------------------------------------------
# Gibbs states and expectations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GibbsState:
    """Normalized thermal state e^{-beta(H - E0)} / Z with the shifted partition sum."""

    rho: HermitianOperator
    Z: float
    beta: float
    ground_energy: float


def gibbs(
    H: HermitianOperator, beta: float, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> GibbsState:
    """Thermal state of H.  Energies are shifted by the ground energy before
    exponentiation, which leaves all weight ratios invariant and cannot
    overflow; Z refers to the shifted convention.

    Diagonal operators avoid the eigensolver entirely; anything else is
    densely diagonalized, guarded by ``dense_limit``.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    basis = H.basis
    if H.is_diagonal():
        energies = H.diagonal()
        e0 = float(np.min(energies))
        weights = np.exp(-beta * (energies - e0))
        Z = float(math.fsum(weights.tolist()))
        rho = HermitianOperator(basis, sp.diags(weights / Z).tocsr())
        return GibbsState(rho=rho, Z=Z, beta=beta, ground_energy=e0)
    dim = len(basis)
    if dim > dense_limit:
        raise GuardError(
            f"dense eigendecomposition of a {dim}-state operator exceeds the limit {dense_limit}"
        )
    matrix = H.toarray()
    energies, vectors = np.linalg.eigh(matrix)
    e0 = float(energies[0])
    weights = np.exp(-beta * (energies - e0))
    Z = float(math.fsum(weights.tolist()))
    rho_dense = (vectors * (weights / Z)) @ vectors.T
    return GibbsState(
        rho=HermitianOperator(basis, rho_dense), Z=Z, beta=beta, ground_energy=e0
    )


def expect(state, O) -> float:
    """tr(rho O) for a GibbsState (or bare HermitianOperator rho) and operator O."""
    rho_op = state.rho if isinstance(state, GibbsState) else state
    o_mat = O.matrix if isinstance(O, HermitianOperator) else O
    if isinstance(O, HermitianOperator):
        _check_same_basis(rho_op, O)
    r = rho_op.matrix
    if sp.issparse(r) and sp.issparse(o_mat):
        return float(r.multiply(o_mat.T).sum())
    r_arr = r.toarray() if sp.issparse(r) else np.asarray(r)
    o_arr = o_mat.toarray() if sp.issparse(o_mat) else np.asarray(o_mat)
    return float(np.tensordot(r_arr, o_arr.T, axes=2))
