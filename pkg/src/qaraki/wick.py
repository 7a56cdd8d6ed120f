"""Creation/annihilation operators, Wick generators and the vacuum state.

Operators on the truncated Fock space are stored as graded blocks
``{(out_level, in_level): matrix}``.  Creation out of the top level is the
zero map; every identity checked in the package is restricted to inputs for
which that cut is never reached.
"""
from __future__ import annotations

import numpy as np

from . import arith
from .fock import FockSpace, FockVector
from .partitions import pair_crossings, pair_partitions


class OperatorMatrix:
    """Linear map on the truncated Fock space, stored blockwise by level."""

    __array_priority__ = 100

    def __init__(self, fock: FockSpace, blocks: dict | None = None):
        self.fock = fock
        self.blocks = dict(blocks or {})

    @classmethod
    def identity(cls, F: FockSpace) -> "OperatorMatrix":
        return cls(F, {(n, n): arith.eye(F.dims[n], F.arithmetic) for n in range(F.N + 1)})

    @classmethod
    def vacuum_projection(cls, F: FockSpace) -> "OperatorMatrix":
        return cls(F, {(0, 0): arith.eye(1, F.arithmetic)})

    @classmethod
    def from_columns(cls, F: FockSpace, columns: dict) -> "OperatorMatrix":
        """Assemble from ``{word: FockVector}`` images of basis vectors."""
        blocks: dict = {}
        for word, vec in columns.items():
            n = len(word)
            col = F.index(word)
            for m in vec.support():
                key = (m, n)
                if key not in blocks:
                    blocks[key] = arith.zeros((F.dims[m], F.dims[n]), F.arithmetic)
                blocks[key][:, col] = vec.parts[m]
        return cls(F, blocks)

    def degree_profile(self) -> list:
        """Sorted level shifts ``out - in`` of the nonzero blocks."""
        return sorted({o - i for (o, i), blk in self.blocks.items() if not arith.is_zero(blk)})

    def restrict(self, in_levels=None, out_levels=None) -> "OperatorMatrix":
        keep_in = set(range(self.fock.N + 1) if in_levels is None else in_levels)
        keep_out = set(range(self.fock.N + 1) if out_levels is None else out_levels)
        return OperatorMatrix(
            self.fock,
            {k: v for k, v in self.blocks.items() if k[1] in keep_in and k[0] in keep_out},
        )

    def apply(self, vec: FockVector) -> FockVector:
        out = self.fock.zero()
        for (o, i), blk in self.blocks.items():
            out.parts[o] = out.parts[o] + blk.dot(vec.parts[i])
        return out

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        by_out: dict = {}
        for (k, i), blk in other.blocks.items():
            by_out.setdefault(k, []).append((i, blk))
        blocks: dict = {}
        for (o, k), left in self.blocks.items():
            for i, right in by_out.get(k, ()):
                prod = left.dot(right)
                blocks[(o, i)] = blocks[(o, i)] + prod if (o, i) in blocks else prod
        return OperatorMatrix(self.fock, blocks)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return self.compose(other)
        if isinstance(other, FockVector):
            return self.apply(other)
        return NotImplemented

    def _combine(self, other, sign):
        blocks = dict(self.blocks)
        for k, v in other.blocks.items():
            v = v if sign > 0 else -v
            blocks[k] = blocks[k] + v if k in blocks else v
        return OperatorMatrix(self.fock, blocks)

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return OperatorMatrix(self.fock, {k: -v for k, v in self.blocks.items()})

    def __mul__(self, c):
        c = c if isinstance(c, arith.GaussianRational) else self.fock.scalar(c)
        return OperatorMatrix(self.fock, {k: v * c for k, v in self.blocks.items()})

    __rmul__ = __mul__

    def to_dense(self, in_levels=None, out_levels=None) -> np.ndarray:
        F = self.fock
        ins = list(range(F.N + 1) if in_levels is None else in_levels)
        outs = list(range(F.N + 1) if out_levels is None else out_levels)
        rows = []
        for o in outs:
            row = []
            for i in ins:
                blk = self.blocks.get((o, i))
                row.append(blk if blk is not None else arith.zeros((F.dims[o], F.dims[i]), F.arithmetic))
            rows.append(np.hstack(row))
        return np.vstack(rows)

    def max_abs(self) -> float:
        return max((arith.max_abs(b) for b in self.blocks.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def distance(self, other: "OperatorMatrix") -> float:
        return (self - other).max_abs()

    def __repr__(self):
        return f"OperatorMatrix(blocks={sorted(self.blocks)})"


def _as_vector(F: FockSpace, xi) -> np.ndarray:
    xi = np.asarray(xi)
    if xi.shape != (F.d,):
        raise ValueError(f"one-particle vector must have length {F.d}")
    if F.exact:
        return np.array([F.scalar(x) for x in xi], dtype=object)
    return xi.astype(complex)


def creation(F: FockSpace, xi) -> OperatorMatrix:
    """Left creation ``e_w -> sum_i xi_i e_{i w}``; the top level maps to 0."""
    xi = _as_vector(F, xi)
    blocks = {}
    for n in range(F.N):
        size = F.dims[n]
        blk = arith.zeros((F.dims[n + 1], size), F.arithmetic)
        cols = np.arange(size)
        for i in range(F.d):
            if xi[i]:
                blk[i * size + cols, cols] = xi[i]
        blocks[(n + 1, n)] = blk
    return OperatorMatrix(F, blocks)


def _removal_maps(F: FockSpace, n: int):
    """For each tuple index ``t``: (letter at t, index of word with t removed)."""
    d = F.d
    idx = np.arange(F.dims[n])
    out = []
    for t in range(n):
        letter = (idx // d ** (n - 1 - t)) % d
        removed = (idx // d ** (n - t)) * d ** (n - 1 - t) + idx % d ** (n - 1 - t)
        out.append((letter, removed))
    return out


def annihilation(F: FockSpace, xi) -> OperatorMatrix:
    """q-annihilation ``e_{j_n..j_1} -> sum_k q^{n-k} <xi, e_{j_k}>_U e_{..^j_k..}``."""
    xi = _as_vector(F, xi)
    coeff = np.conjugate(xi).dot(F.deformation.T)  # <xi, e_j>_U for each j
    blocks = {}
    for n in range(1, F.N + 1):
        blk = arith.zeros((F.dims[n - 1], F.dims[n]), F.arithmetic)
        cols = np.arange(F.dims[n])
        for t, (letter, removed) in enumerate(_removal_maps(F, n)):
            vals = coeff[letter]
            if t:
                vals = vals * (F.q ** t)
            # each column appears once for a fixed t, so plain fancy-index add is safe
            blk[removed, cols] = blk[removed, cols] + vals
        blocks[(n - 1, n)] = blk
    return OperatorMatrix(F, blocks)


def free_annihilation(F: FockSpace, eta) -> OperatorMatrix:
    """``e_{a w} -> <eta, e_a>_U e_w`` (strips the first tensor factor, no q)."""
    eta = _as_vector(F, eta)
    return _strip_first(F, np.conjugate(eta).dot(F.deformation.T))


def undeformed_annihilation(F: FockSpace, xi) -> OperatorMatrix:
    """``e_{a w} -> <xi, e_a> e_w`` using the undeformed one-particle product."""
    xi = _as_vector(F, xi)
    return _strip_first(F, np.conjugate(xi))


def _strip_first(F: FockSpace, coeff) -> OperatorMatrix:
    blocks = {}
    for n in range(1, F.N + 1):
        size = F.dims[n - 1]
        blk = arith.zeros((size, F.dims[n]), F.arithmetic)
        rows = np.arange(size)
        for a in range(F.d):
            if coeff[a]:
                blk[rows, a * size + rows] = coeff[a]
        blocks[(n - 1, n)] = blk
    return OperatorMatrix(F, blocks)


def generator(F: FockSpace, i: int) -> OperatorMatrix:
    """``A_i = W(e_i) = creation(e_i) + annihilation(e_i)`` (``e_i`` is real)."""
    if not 0 <= i < F.d:
        raise IndexError(f"generator index {i} out of range for d={F.d}")
    key = ("generator", i)
    if key not in F._cache:
        e = F.deformation.basis_vector(i)
        F._cache[key] = creation(F, e) + annihilation(F, e)
    return F._cache[key]


def wick_operator(F: FockSpace, f) -> OperatorMatrix:
    """``W(f) = creation(f) + annihilation(conj(f))`` for a one-particle ``f``."""
    f = _as_vector(F, f)
    return creation(F, f) + annihilation(F, np.conjugate(f))


def gram_adjoint(F: FockSpace, M: OperatorMatrix) -> OperatorMatrix:
    """Adjoint for the q-inner product: block ``(i, o) = G_i^{-1} M_{oi}^H G_o``."""
    blocks = {}
    for (o, i), blk in M.blocks.items():
        blocks[(i, o)] = F.gram_inverse(i).dot(arith.conj_transpose(blk).dot(F.gram[o]))
    return OperatorMatrix(F, blocks)


def q_operator_norm(F: FockSpace, M: OperatorMatrix, in_levels=None) -> float:
    """Operator norm of ``M`` w.r.t. the q-inner product (float computation).

    With ``G = L L^H`` per level the norm is the largest singular value of
    ``L_out^H M L_in^{-H}``.
    """
    ins = list(range(F.N + 1) if in_levels is None else in_levels)
    outs = sorted({o for (o, i) in M.blocks if i in ins})
    if not outs:
        return 0.0
    dense = arith.to_complex(M.to_dense(ins, outs))
    L_in = _block_diag([F.gram_sqrt_factor(n) for n in ins])
    L_out = _block_diag([F.gram_sqrt_factor(n) for n in outs])
    core = L_out.conj().T @ dense
    core = np.linalg.solve(L_in.conj(), core.T).T  # core @ L_in^{-H}
    return float(np.linalg.norm(core, 2))


def _block_diag(mats) -> np.ndarray:
    from scipy.linalg import block_diag

    return block_diag(*mats)


def state(F: FockSpace, M: OperatorMatrix):
    """Vacuum state ``phi(M) = <Omega, M Omega>``."""
    return (M @ F.vacuum()).parts[0][0]


def monomial_vector(F: FockSpace, word) -> FockVector:
    """``A_{j_1} ... A_{j_n} Omega`` (applied right to left)."""
    if len(word) > F.N:
        raise ValueError(f"word of length {len(word)} exceeds truncation N={F.N}")
    vec = F.vacuum()
    for j in reversed(word):
        vec = generator(F, j) @ vec
    return vec


def moment(F: FockSpace, word):
    """``phi(A_{j_1} ... A_{j_n})`` by matrix products on the vacuum."""
    return monomial_vector(F, tuple(word)).parts[0][0]


def moment_pairings(F: FockSpace, word):
    """``phi(A_{j_1} ... A_{j_n})`` from the q-Wick pairing formula.

    Sum over pair partitions of ``q^{crossings}`` times the ordered
    covariances ``phi(A_{j_a} A_{j_b}) = B_{j_a j_b}``, ``a < b``.  Uses only
    the covariance matrix, never the Fock space operators.
    """
    D = F.deformation
    word = tuple(word)
    total = D.scalar(0)
    for pairs in pair_partitions(len(word)):
        term = D.scalar(1)
        for a, b in pairs:
            term = term * D.B[word[a - 1], word[b - 1]]
        total = total + term * (D.q ** pair_crossings(pairs))
    return total
