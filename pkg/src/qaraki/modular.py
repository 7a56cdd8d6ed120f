"""Numerical Tomita data for the vacuum state on the truncated Fock space.

An antilinear map is stored as a matrix ``K`` acting as ``v -> K conj(v)`` on
Fock coordinates.  ``S`` is fitted from ``S(x Omega) = x* Omega`` on the
monomials; ``Delta = S^dagger S`` and ``J = S Delta^{-1/2}`` follow, and the
sign relating ``Delta`` to ``A`` is measured rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import arith
from .deformation import eigenpairs
from .fock import FockSpace
from .wick import generator, wick_operator

LSQ_TOL = 1e-8


class ModularError(RuntimeError):
    pass


@dataclass
class ModularData:
    fock: FockSpace
    S: np.ndarray
    Delta: np.ndarray
    J: np.ndarray
    sign: int
    sign_determined: bool
    lsq_residual: float
    eigenops: list  # (lambda_k, f_k, matrix of W(f_k))
    _eig_sign: tuple | None = field(default=None, repr=False)

    def delta_power(self, p: float) -> np.ndarray:
        return _hermitian_power(self.fock, self.Delta, p)

    def level(self, mat: np.ndarray, n: int) -> np.ndarray:
        a = self.fock.offsets[n]
        b = a + self.fock.dims[n]
        return mat[a:b, a:b]


def _gram(F: FockSpace) -> np.ndarray:
    from scipy.linalg import block_diag

    return block_diag(*[arith.to_complex(g) for g in F.gram])


def _chol(F: FockSpace) -> np.ndarray:
    from scipy.linalg import block_diag

    return block_diag(*[F.gram_sqrt_factor(n) for n in range(F.N + 1)])


def _hermitian_power(F: FockSpace, X: np.ndarray, p: float) -> np.ndarray:
    """``X^p`` for ``X`` positive w.r.t. the q-inner product."""
    L = _chol(F)
    H = L.conj().T @ X @ np.linalg.inv(L.conj().T)
    H = (H + H.conj().T) / 2
    w, V = np.linalg.eigh(H)
    if w[0] <= 0:
        raise ModularError(f"Delta not positive definite (min eigenvalue {w[0]:.3e})")
    Hp = (V * w ** p) @ V.conj().T
    return np.linalg.solve(L.conj().T, Hp @ L.conj().T)


def _monomial_matrix(F: FockSpace, words) -> np.ndarray:
    gens = [arith.to_complex(generator(F, j).to_dense()) for j in range(F.d)]
    cols = []
    for w in words:
        v = np.zeros(F.dim, dtype=complex)
        v[0] = 1
        for j in reversed(w):
            v = gens[j] @ v
        cols.append(v)
    return np.array(cols).T


def build_modular(F: FockSpace) -> ModularData:
    if F.exact:
        raise ModularError("modular data needs float64 arithmetic")
    if F.N < 2:
        raise ModularError("modular data needs truncation N >= 2")
    words = F.all_words()
    X = _monomial_matrix(F, words)
    Xs = _monomial_matrix(F, [tuple(reversed(w)) for w in words])
    if np.linalg.matrix_rank(X) < F.dim:
        raise ModularError("monomial vectors do not span the truncated Fock space")
    # S conj(X) = Xs, i.e. conj(X)^T S^T = Xs^T
    sol, *_ = np.linalg.lstsq(np.conj(X).T, Xs.T, rcond=None)
    S = sol.T
    resid = float(np.max(np.abs(S @ np.conj(X) - Xs)))
    if resid >= LSQ_TOL:
        raise ModularError(f"least-squares residual for S too large: {resid:.3e}")

    G = _gram(F)
    Delta = np.linalg.solve(G, np.conj(S.conj().T @ G @ S))
    data = ModularData(F, S, Delta, None, 0, False, resid, [])
    data.J = S @ np.conj(data.delta_power(-0.5))

    A = arith.to_complex(F.deformation.A)
    d1 = data.level(Delta, 1)
    hits = [s for s, target in ((-1, np.linalg.inv(A)), (1, A)) if np.max(np.abs(d1 - target)) <= LSQ_TOL]
    if not hits:
        raise ModularError("level-1 Delta matches neither A nor A^{-1}")
    data.sign = hits[-1] if len(hits) == 2 else hits[0]
    data.sign_determined = len(hits) == 1

    for lam, f in eigenpairs(F.deformation):
        f = arith.to_complex(np.asarray(f))
        data.eigenops.append((float(lam), f, arith.to_complex(wick_operator(F, f).to_dense())))
    return data


def invariant_residuals(M: ModularData) -> dict:
    F = M.fock
    I = np.eye(F.dim)
    K = M.J
    vac = np.zeros(F.dim, dtype=complex)
    vac[0] = 1
    Dinv = np.linalg.inv(M.Delta)
    d1 = M.level(M.Delta, 1)
    out = {
        "J_squared": float(np.max(np.abs(K @ np.conj(K) - I))),
        "J_Delta_J": float(np.max(np.abs(K @ np.conj(M.Delta) @ np.conj(K) - Dinv))),
        "Delta_vacuum": float(np.max(np.abs(M.Delta @ vac - vac))),
        "J_vacuum": float(np.max(np.abs(K @ vac - vac))),
    }
    tp = 0.0
    for n in range(2, F.N + 1):
        power = d1
        for _ in range(n - 1):
            power = np.kron(power, d1)
        tp = max(tp, float(np.max(np.abs(M.level(M.Delta, n) - power))))
    out["tensor_power"] = tp
    return out


def polar_check(M: ModularData, word) -> float:
    """``|| J Delta^{1/2} (A_w Omega) - A_{reversed w} Omega ||_max``."""
    F = M.fock
    x = _monomial_matrix(F, [tuple(word)])[:, 0]
    y = _monomial_matrix(F, [tuple(reversed(word))])[:, 0]
    half = M.delta_power(0.5)
    return float(np.max(np.abs(M.J @ np.conj(half @ x) - y)))


def _eigen_residuals(M: ModularData, k: int) -> dict:
    lam, _, C = M.eigenops[k]
    Dinv = np.linalg.inv(M.Delta)
    conj_C = M.Delta @ C @ Dinv
    return {s: float(np.max(np.abs(conj_C - lam ** s * C))) for s in (1, -1)}


def eigenoperator_sign(M: ModularData) -> tuple:
    """``(s', determined)`` with ``Delta C_k Delta^{-1} = lambda_k^{s'} C_k``."""
    if M._eig_sign is None:
        votes = set()
        for k, (lam, _, _) in enumerate(M.eigenops):
            if abs(lam - 1) > LSQ_TOL:
                r = _eigen_residuals(M, k)
                votes.add(min(r, key=r.get))
        if len(votes) > 1:
            raise ModularError("eigenoperator sign differs across eigenpairs")
        M._eig_sign = (votes.pop(), True) if votes else (1, False)
    return M._eig_sign


def eigenoperator_check(M: ModularData, k: int | None = None) -> float:
    """Max residual of ``Delta C_k Delta^{-1} - lambda_k^{s'} C_k`` (all ``k`` if None)."""
    s, _ = eigenoperator_sign(M)
    ks = range(len(M.eigenops)) if k is None else [k]
    return max(_eigen_residuals(M, j)[s] for j in ks)


def adjoint_eigenoperator_check(M: ModularData) -> float:
    """``C_k^dagger`` scales by the inverse eigenvalue."""
    s, _ = eigenoperator_sign(M)
    F = M.fock
    G = _gram(F)
    Dinv = np.linalg.inv(M.Delta)
    worst = 0.0
    for lam, _, C in M.eigenops:
        Cd = np.linalg.solve(G, C.conj().T @ G)
        worst = max(worst, float(np.max(np.abs(M.Delta @ Cd @ Dinv - lam ** (-s) * Cd))))
    return worst


def generating_set_check(M: ModularData) -> dict:
    """``{C_k}`` is closed under the q-adjoint and spans the same generators as ``{A_i}``."""
    F = M.fock
    G = _gram(F)
    mats = [C for _, _, C in M.eigenops]
    worst = 0.0
    for C in mats:
        Cd = np.linalg.solve(G, C.conj().T @ G)
        worst = max(worst, min(float(np.max(np.abs(Cd - E))) for E in mats))
    fs = np.array([f for _, f, _ in M.eigenops]).T
    return {"adjoint_closure": worst, "rank": int(np.linalg.matrix_rank(fs)), "d": F.d}


def modular_weight(M: ModularData, x) -> float:
    s, _ = eigenoperator_sign(M)
    mu = 1.0
    for k in x:
        mu *= M.eigenops[k][0] ** s
    return mu


def _product(M: ModularData, x, y) -> np.ndarray:
    F = M.fock
    vec = np.zeros(F.dim, dtype=complex)
    vec[0] = 1
    gens = [arith.to_complex(generator(F, j).to_dense()) for j in range(F.d)]
    for op in reversed(list(x) + list(y)):
        vec = op @ vec if isinstance(op, np.ndarray) else gens[op] @ vec
    return vec


def kms_check(M: ModularData, x, y) -> tuple:
    """``(phi(x y), mu_x phi(y x))`` for eigen-monomial ``x`` (indices into
    ``eigenops``) and an ``A``-word ``y``."""
    if len(x) + len(y) > M.fock.N:
        raise ValueError("combined length exceeds truncation")
    ops = [M.eigenops[k][2] for k in x]
    lhs = _product(M, ops, y)[0]
    rhs = modular_weight(M, x) * _product(M, list(y), ops)[0]
    return complex(lhs), complex(rhs)


def vanishing_check(M: ModularData, x) -> float:
    """``|phi(x)|`` for an eigen-monomial ``x``."""
    return float(abs(_product(M, [M.eigenops[k][2] for k in x], [])[0]))


def trace_check(M: ModularData) -> float:
    """Max ``|phi(A_i A_j) - phi(A_j A_i)|``; zero exactly when the state is tracial."""
    F = M.fock
    worst = 0.0
    for i in range(F.d):
        for j in range(F.d):
            a = _product(M, [i, j], [])[0]
            b = _product(M, [j, i], [])[0]
            worst = max(worst, abs(a - b))
    return float(worst)


__all__ = [
    "ModularData",
    "ModularError",
    "build_modular",
    "invariant_residuals",
    "polar_check",
    "eigenoperator_sign",
    "eigenoperator_check",
    "adjoint_eigenoperator_check",
    "generating_set_check",
    "modular_weight",
    "kms_check",
    "vanishing_check",
    "trace_check",
]
