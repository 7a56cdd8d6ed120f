"""Truncated q-Fock space over the deformed one-particle space.

Basis convention: level ``n`` holds the words of length ``n`` over the
alphabet ``0..d-1`` in lexicographic order, levels ordered 0..N.  A word
``(a_1, ..., a_n)`` stands for ``e_{a_1} (x) ... (x) e_{a_n}``, so its
leftmost letter is the first tensor factor; in the ``e_{j_n ... j_1}``
labelling the tuple index ``t`` carries position ``n - t``.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import arith
from .arith import EXACT
from .deformation import Deformation


class FockError(ValueError):
    pass


class GramNotPositiveError(FockError):
    """A Gram matrix failed positive-definiteness certification."""


DEFAULT_BUDGET = 1 << 14


def words(d: int, n: int) -> list:
    return list(itertools.product(range(d), repeat=n))


def inversions(perm) -> int:
    n = len(perm)
    return sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])


def gram_by_permutations(D: Deformation, n: int) -> np.ndarray:
    """Level-``n`` Gram matrix straight from the permutation sum.

    ``G_{v,w} = sum_sigma q^{inv(sigma)} prod_k <e_{v_sigma(k)}, e_{w_k}>_U``.
    Factorial cost; kept as an independent reference for small ``n``.
    """
    basis = words(D.d, n)
    G = arith.zeros((len(basis), len(basis)), D.arithmetic)
    perms = [(p, D.q ** inversions(p)) for p in itertools.permutations(range(n))]
    one = D.scalar(1)
    for a, v in enumerate(basis):
        for b, w in enumerate(basis):
            total = D.scalar(0)
            for p, weight in perms:
                term = one
                for k in range(n):
                    term = term * D.T[v[p[k]], w[k]]
                total = total + term * weight
            G[a, b] = total
    return G


class FockSpace:
    """Graded word basis and q-Gram matrices for levels ``0..N``."""

    def __init__(self, deformation: Deformation, N: int, gram: list, pivots: list):
        self.deformation = deformation
        self.N = N
        self.gram = gram
        self.certificate = pivots
        self._cache: dict = {}

    @property
    def d(self) -> int:
        return self.deformation.d

    @property
    def q(self):
        return self.deformation.q

    @property
    def arithmetic(self) -> str:
        return self.deformation.arithmetic

    @property
    def exact(self) -> bool:
        return self.arithmetic == EXACT

    @cached_property
    def basis(self) -> list:
        return [words(self.d, n) for n in range(self.N + 1)]

    @cached_property
    def dims(self) -> list:
        return [self.d ** n for n in range(self.N + 1)]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> list:
        return list(itertools.accumulate([0] + self.dims))[:-1]

    def index(self, word) -> int:
        """Position of ``word`` inside its level."""
        idx = 0
        for a in word:
            idx = idx * self.d + a
        return idx

    def flat_index(self, word) -> int:
        return self.offsets[len(word)] + self.index(word)

    def all_words(self, max_len: int | None = None) -> list:
        top = self.N if max_len is None else max_len
        return [w for n in range(top + 1) for w in self.basis[n]]

    def scalar(self, x):
        return self.deformation.scalar(x)

    def gram_inverse(self, n: int) -> np.ndarray:
        key = ("gram_inv", n)
        if key not in self._cache:
            self._cache[key] = arith.inverse(self.gram[n])
        return self._cache[key]

    def gram_sqrt_factor(self, n: int) -> np.ndarray:
        """Cholesky factor ``L`` of ``G^{(n)} = L L^H`` in complex128."""
        key = ("chol", n)
        if key not in self._cache:
            self._cache[key] = np.linalg.cholesky(arith.to_complex(self.gram[n]))
        return self._cache[key]

    # vectors

    def zero(self) -> "FockVector":
        return FockVector(self, [arith.zeros(k, self.arithmetic) for k in self.dims])

    def vacuum(self) -> "FockVector":
        return self.basis_vector(())

    def basis_vector(self, word) -> "FockVector":
        word = tuple(word)
        if len(word) > self.N:
            raise FockError(f"word {word} longer than truncation N={self.N}")
        v = self.zero()
        v.parts[len(word)][self.index(word)] = self.scalar(1)
        return v

    def vector(self, coeffs: dict) -> "FockVector":
        """Vector from a ``{word: coefficient}`` mapping."""
        v = self.zero()
        for w, c in coeffs.items():
            v.parts[len(w)][self.index(w)] = self.scalar(c)
        return v

    def tensor_vector(self, factors) -> "FockVector":
        """Elementary tensor ``f_1 (x) ... (x) f_n`` of one-particle vectors."""
        n = len(factors)
        v = self.zero()
        if n == 0:
            v.parts[0][0] = self.scalar(1)
            return v
        acc = np.asarray(factors[0])
        for f in factors[1:]:
            acc = np.kron(acc, np.asarray(f))
        v.parts[n] = acc.copy() if self.exact else np.asarray(acc, dtype=complex)
        return v

    def __repr__(self):
        return f"FockSpace(d={self.d}, N={self.N}, q={self.q}, arithmetic={self.arithmetic!r})"


class FockVector:
    """Element of the truncated Fock space stored as per-level arrays."""

    __array_priority__ = 100

    def __init__(self, fock: FockSpace, parts: list):
        self.fock = fock
        self.parts = parts

    def level(self, n: int) -> np.ndarray:
        return self.parts[n]

    def support(self) -> list:
        """Levels carrying a nonzero component."""
        return [n for n, p in enumerate(self.parts) if not arith.is_zero(p)]

    def to_flat(self) -> np.ndarray:
        return np.concatenate(self.parts)

    def coefficients(self) -> dict:
        """Nonzero coefficients keyed by word, in basis order."""
        out = {}
        for n, p in enumerate(self.parts):
            for w, c in zip(self.fock.basis[n], p):
                if c:
                    out[w] = c
        return out

    def _combine(self, other, op):
        if not isinstance(other, FockVector):
            return NotImplemented
        return FockVector(self.fock, [op(a, b) for a, b in zip(self.parts, other.parts)])

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return FockVector(self.fock, [-p for p in self.parts])

    def __mul__(self, c):
        c = self.fock.scalar(c) if not isinstance(c, arith.GaussianRational) else c
        return FockVector(self.fock, [p * c for p in self.parts])

    __rmul__ = __mul__

    def equals(self, other: "FockVector", tol: float = 0.0) -> bool:
        return self.distance(other) <= tol

    def distance(self, other: "FockVector") -> float:
        """Largest coordinate difference (0.0 means exactly equal in exact mode)."""
        return max(arith.max_abs(a - b) for a, b in zip(self.parts, other.parts))

    def __repr__(self):
        return f"FockVector({self.coefficients()})"


def q_inner(F: FockSpace, xi: FockVector, eta: FockVector):
    """``sum_n xi_n^H G^{(n)} eta_n``."""
    if xi.fock is not F or eta.fock is not F:
        raise FockError("vectors belong to a different Fock space")
    total = F.scalar(0)
    for n in range(F.N + 1):
        total = total + np.conjugate(xi.parts[n]).dot(F.gram[n].dot(eta.parts[n]))
    return total


def q_norm(F: FockSpace, xi: FockVector) -> float:
    return float(abs(complex(q_inner(F, xi, xi)))) ** 0.5


def _assemble_level(D: Deformation, prev: np.ndarray, n: int) -> np.ndarray:
    """``G^{(n)}`` from ``G^{(n-1)}`` by expanding along the first letter.

    ``<e_{a v'}, e_w>_q = sum_t q^t T[a, w_t] <e_{v'}, e_{w without w_t}>_q``.
    """
    d = D.d
    size = d ** n
    idx = np.arange(size)
    digits = [(idx // d ** (n - 1 - t)) % d for t in range(n)]
    first = digits[0]
    rest0 = idx % d ** (n - 1)
    G = arith.zeros((size, size), D.arithmetic)
    for t in range(n):
        high = idx // d ** (n - t)
        low = idx % d ** (n - 1 - t)
        removed = high * d ** (n - 1 - t) + low
        Tq = D.T * (D.q ** t) if t else D.T
        coef = Tq[np.ix_(first, digits[t])]
        sub = prev[np.ix_(rest0, removed)]
        if D.exact:
            # skip the (often many) structural zeros of T; exact products are costly
            nonzero = np.array([[bool(x) for x in row] for row in Tq])
            mask = nonzero[np.ix_(first, digits[t])] & sub.astype(bool)
            G[mask] = G[mask] + coef[mask] * sub[mask]
        else:
            G = G + coef * sub
    return G


def _content_blocks(d: int, n: int) -> dict:
    groups: dict = {}
    for k, w in enumerate(words(d, n)):
        groups.setdefault(tuple(sorted(w)), []).append(k)
    return groups


def _certify_exact(D: Deformation, gram: list, direct_max: int) -> list:
    pivots = []
    T_piv = arith.ldl_pivots(D.T)
    if any(p.imag != 0 or p.real <= 0 for p in T_piv):
        raise GramNotPositiveError("T is not positive definite")
    sym = None
    for n, G in enumerate(gram):
        if G.shape[0] <= direct_max:
            piv = arith.ldl_pivots(G)
            if len(piv) < G.shape[0] or any(p.imag != 0 or p.real <= 0 for p in piv):
                raise GramNotPositiveError(f"Gram level {n} failed exact LDL certification")
            pivots.append(min(p.real for p in piv))
            continue
        # G = T^{(x)n} P_q with P_q the q-symmetrizer; the two commute, so G is
        # congruent to P_q, which is block diagonal over letter contents.
        if sym is None or sym.N < n:
            sym = build_fock(_identity_like(D), n, certify=False)
        P = sym.gram[n]
        worst = None
        for members in _content_blocks(D.d, n).values():
            sub = P[np.ix_(members, members)]
            piv = arith.ldl_pivots(sub)
            if len(piv) < len(members) or any(p.imag != 0 or p.real <= 0 for p in piv):
                raise GramNotPositiveError(f"q-symmetrizer level {n} failed exact certification")
            m = min(p.real for p in piv)
            worst = m if worst is None else min(worst, m)
        pivots.append(worst)
    return pivots


def _identity_like(D: Deformation) -> Deformation:
    from .deformation import Block, build_deformation

    return build_deformation(D.q, [Block.fixed(D.d)], D.arithmetic)


def _certify_float(gram: list, tol: float) -> list:
    out = []
    for n, G in enumerate(gram):
        H = arith.to_complex(G)
        herm = float(np.max(np.abs(H - H.conj().T)))
        ev = np.linalg.eigvalsh((H + H.conj().T) / 2)
        scale = max(1.0, float(np.max(np.abs(ev))))
        if herm > tol * scale or ev[0] <= tol * scale:
            raise GramNotPositiveError(
                f"Gram level {n} not positive definite (min eigenvalue {ev[0]:.3e})"
            )
        out.append(float(ev[0]))
    return out


def build_fock(
    D: Deformation,
    N: int,
    *,
    budget: int = DEFAULT_BUDGET,
    certify: bool = True,
    direct_ldl_max: int = 128,
    tol: float = 1e-12,
) -> FockSpace:
    """Truncated q-Fock space with all Gram matrices up to level ``N``.

    Positive definiteness is certified at build time: exact LDL pivots in
    exact mode (large levels go through the q-symmetrizer's content blocks),
    smallest eigenvalue above ``tol`` in float mode.  ``certificate`` on the
    result holds the smallest pivot / eigenvalue per level.
    """
    if not isinstance(N, int) or N < 1:
        raise FockError(f"truncation N must be a positive integer, got {N!r}")
    total = sum(D.d ** n for n in range(N + 1))
    if total > budget:
        raise FockError(f"basis size {total} exceeds budget {budget}")
    gram = [arith.asarray([[1]], D.arithmetic)]
    for n in range(1, N + 1):
        gram.append(_assemble_level(D, gram[-1], n))
    for G in gram:
        G.setflags(write=False)
    pivots = []
    if certify:
        if D.exact:
            pivots = _certify_exact(D, gram, direct_ldl_max)
        else:
            pivots = _certify_float(gram, tol)
    return FockSpace(D, N, gram, pivots)
