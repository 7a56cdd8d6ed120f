"""Dual systems ``D_i`` and conjugate variables ``xi_i = D_i^* Omega``.

Each object is computed along two independent routes:

* ``D_i`` from its defining commutation recursion, and from the signed sum
  over the partition family ``B(n+1)``;
* ``xi_i`` as the q-adjoint of ``D_i`` applied to the vacuum, and from the
  alternating series in undeformed annihilation operators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arith
from .fock import FockSpace, FockVector, q_inner
from .partitions import enumerate_B
from .wick import (
    OperatorMatrix,
    generator,
    gram_adjoint,
    moment_pairings,
    monomial_vector,
    q_operator_norm,
    undeformed_annihilation,
)

RECURSIVE = "recursive"
PARTITION = "partition"
SERIES = "series"
ADJOINT = "adjoint"


def _check_word(F: FockSpace, i: int, word) -> tuple:
    word = tuple(word)
    if not 0 <= i < F.d:
        raise IndexError(f"dual index {i} out of range for d={F.d}")
    if len(word) > F.N:
        raise ValueError(f"word of length {len(word)} exceeds truncation N={F.N}")
    return word


def dual_apply_recursive(F: FockSpace, i: int, word) -> FockVector:
    """``D_i e_word`` from ``D_i Omega = 0`` and ``[D_i, A_j] = B_ji P_Omega``.

    Writing ``word = j w`` (``j`` the leftmost letter)::

        D_i e_{jw} = A_j D_i e_w + B_ji [w empty] Omega
                     - sum_k q^{|w|-k} B_{j w_k} D_i e_{w minus w_k}
    """
    word = _check_word(F, i, word)
    memo = F._cache.setdefault(("dual_recursive", i), {})
    return _dual_rec(F, i, word, memo)


def _dual_rec(F, i, word, memo):
    if word in memo:
        return memo[word]
    if not word:
        out = F.zero()
    else:
        B, q = F.deformation.B, F.q
        j, w = word[0], word[1:]
        out = generator(F, j) @ _dual_rec(F, i, w, memo)
        if not w:
            out.parts[0] = out.parts[0] + B[j, i]
        for t in range(len(w)):
            coeff = B[j, w[t]] * (q ** t)
            if coeff:
                out = out - _dual_rec(F, i, w[:t] + w[t + 1:], memo) * coeff
    memo[word] = out
    return out


def dual_apply_partition(F: FockSpace, i: int, word) -> FockVector:
    """``D_i e_word`` as a signed, q-weighted sum over ``B(n+1)``.

    Point ``k`` of ``{0..n}`` carries letter ``j_k`` (``word[n-k]``), with
    ``j_0 = i``; each pair ``{l > m}`` contributes ``B[j_l, j_m]`` and the
    singletons, read from the highest point down, give the output word.
    """
    word = _check_word(F, i, word)
    out = F.zero()
    n = len(word)
    if n == 0:
        return out
    B, q = F.deformation.B, F.q
    letter = [i] + [word[n - k] for k in range(1, n + 1)]
    for p in enumerate_B(n + 1):
        coeff = B[letter[p.partner0], letter[0]]
        for a, b in p.pairs:
            coeff = coeff * B[letter[a], letter[b]]
        if not coeff:
            continue
        coeff = coeff * (q ** p.crossings) * p.sign
        rest = tuple(letter[s] for s in reversed(p.singletons))
        level = out.parts[len(rest)]
        idx = F.index(rest)
        level[idx] = level[idx] + coeff
    return out


@dataclass
class DualSystem:
    fock: FockSpace
    D: tuple
    construction: str


def build_dual_system(F: FockSpace, construction: str = RECURSIVE) -> DualSystem:
    apply = {RECURSIVE: dual_apply_recursive, PARTITION: dual_apply_partition}[construction]
    ops = []
    for i in range(F.d):
        cols = {w: apply(F, i, w) for w in F.all_words()}
        ops.append(OperatorMatrix.from_columns(F, cols))
    return DualSystem(F, tuple(ops), construction)


def _residual(F: FockSpace, R: OperatorMatrix, in_levels) -> float:
    R = R.restrict(in_levels=in_levels)
    if F.exact and R.is_zero():
        return 0.0
    return q_operator_norm(F, R, in_levels)


def commutator_residual(F: FockSpace, dual: DualSystem, i: int, j: int) -> float:
    """q-operator norm of ``[D_i, A_j] - B_ji P_Omega`` on levels ``<= N-1``."""
    return _commutator_defect(F, dual.D[i], generator(F, j), F.deformation.B[j, i])


def _commutator_defect(F, E: OperatorMatrix, C: OperatorMatrix, target) -> float:
    levels = range(F.N)
    E_low = E.restrict(in_levels=levels)
    C_low = C.restrict(in_levels=levels)
    R = E @ C_low - C @ E_low - OperatorMatrix.vacuum_projection(F) * target
    return _residual(F, R, levels)


def commutator_residuals(F: FockSpace, dual: DualSystem) -> dict:
    return {(i, j): commutator_residual(F, dual, i, j) for i in range(F.d) for j in range(F.d)}


@dataclass
class ConjugateFamily:
    fock: FockSpace
    xi: tuple
    construction: str


def _adjoint_strippers(F: FockSpace) -> list:
    key = ("strip_adjoints",)
    if key not in F._cache:
        F._cache[key] = [
            gram_adjoint(F, undeformed_annihilation(F, F.deformation.basis_vector(k)))
            for k in range(F.d)
        ]
    return F._cache[key]


def conjugate_series(F: FockSpace, i: int) -> FockVector:
    """``xi_i`` from the alternating series, truncated at ``2m - 1 <= N``::

        xi_i = sum_j sum_m sum_{|v| = m-1} (-1)^{m-1} q^{m(m-1)/2}
               conj(B_ji) Lt_{vj}^* (conj(e_v))

    ``Lt_u`` strips the letters of ``u`` from the left with the undeformed
    scalar product; its adjoint is taken for the q-inner product.
    """
    B, q = F.deformation.B, F.q
    strip_adj = _adjoint_strippers(F)
    out = F.zero()
    m = 1
    while 2 * m - 1 <= F.N:
        weight = q ** (m * (m - 1) // 2) * (-1) ** (m - 1)
        for v in F.basis[m - 1]:
            # the standard basis is real: conj(e_v) = e_v
            base = F.basis_vector(v)
            for j in range(F.d):
                coeff = np.conjugate(B[j, i])
                if not coeff:
                    continue
                vec = strip_adj[j] @ base
                for letter in reversed(v):
                    vec = strip_adj[letter] @ vec
                out = out + vec * (coeff * weight)
        m += 1
    return out


def conjugate_adjoint(F: FockSpace, dual: DualSystem, i: int) -> FockVector:
    """``xi_i = D_i^dagger Omega`` with the q-adjoint of the matrix of ``D_i``."""
    to_vacuum = dual.D[i].restrict(out_levels=[0])
    return gram_adjoint(F, to_vacuum) @ F.vacuum()


def build_conjugate_family(F: FockSpace, construction: str = SERIES, dual: DualSystem | None = None):
    if construction == SERIES:
        xi = tuple(conjugate_series(F, i) for i in range(F.d))
    else:
        dual = dual or build_dual_system(F)
        xi = tuple(conjugate_adjoint(F, dual, i) for i in range(F.d))
    return ConjugateFamily(F, xi, construction)


def conjugate_pairing_check(F: FockSpace, i: int, word, xi: FockVector | None = None):
    """Both sides of ``<xi_i, A_{j_1}..A_{j_n} Omega> = phi x phi (d_i(A_{j_1}..A_{j_n}))``.

    The right side expands the quasi-free difference quotient against the
    vacuum: ``sum_k phi(A_{j_k} A_i) phi(A_{j_1}..A_{j_{k-1}}) phi(A_{j_{k+1}}..A_{j_n})``.
    """
    word = tuple(word)
    if xi is None:
        xi = conjugate_series(F, i)
    lhs = q_inner(F, xi, monomial_vector(F, word))
    B = F.deformation.B
    rhs = F.scalar(0)
    for k, jk in enumerate(word):
        rhs = rhs + B[jk, i] * moment_pairings(F, word[:k]) * moment_pairings(F, word[k + 1:])
    return lhs, rhs


def base_change(F: FockSpace, X, dual: DualSystem | None = None) -> float:
    """Residual of ``[E_i, C_j] = <conj(f_j), f_i>_U P_Omega`` for the new basis.

    ``f_j = sum_k X[j, k] e_k``, ``C_j = sum_k X[j, k] A_k`` and
    ``E_i = sum_k X[i, k] D_k``.
    """
    X = np.asarray(X)
    if F.exact:
        X = np.array([[F.scalar(x) for x in row] for row in X], dtype=object)
    else:
        X = X.astype(complex)
    if X.shape != (F.d, F.d):
        raise ValueError(f"base change matrix must be {F.d}x{F.d}")
    det = arith.determinant(X)
    if (F.exact and not det) or (not F.exact and abs(det) < 1e-12):
        raise np.linalg.LinAlgError("base change matrix is singular")
    dual = dual or build_dual_system(F)
    A = [generator(F, k) for k in range(F.d)]
    E = [_combination(F, X[i], dual.D) for i in range(F.d)]
    C = [_combination(F, X[j], A) for j in range(F.d)]
    target = X.dot(F.deformation.B).dot(X.T)  # target[j, i] = <conj(f_j), f_i>_U
    worst = 0.0
    for i in range(F.d):
        for j in range(F.d):
            worst = max(worst, _commutator_defect(F, E[i], C[j], target[j, i]))
    return worst


def _combination(F: FockSpace, coeffs, ops) -> OperatorMatrix:
    out = OperatorMatrix(F)
    for c, op in zip(coeffs, ops):
        if c:
            out = out + op * c
    return out
