"""Falsification checks for the norm estimates behind the conjugate series.

Norms are always evaluated in float64, also for an exact Fock space (the
Gram matrices are converted first).  Each check yields an entry with
``lhs``, ``rhs`` and ``slack = rhs - lhs``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import arith
from .fock import FockSpace
from .partitions import q_factorial
from .wick import OperatorMatrix, free_annihilation, q_operator_norm, undeformed_annihilation

SLACK_TOL = 1e-12
RATIO_HORIZON = 10_000


def annihilation_constant(q) -> float:
    """``prod_k ((1 + |q|^k) / (1 - |q|^k))^{1/2}``.

    Bounds the free (q-less) left annihilation on the q-Fock space:
    ``||L_xi|| <= C ||xi||``.  Equals 1 at ``q = 0``.
    """
    a = abs(float(q))
    log_c = 0.0
    k = 1
    while True:
        x = a ** k
        if x < 1e-18:
            break
        log_c += math.log1p(x) - math.log1p(-x)
        k += 1
    return math.exp(log_c / 2)


def reference_constant(q) -> float:
    """``(1 - |q|)^{-1/2}``, the norm bound of the q-annihilation ``l(xi)``."""
    return (1 - abs(float(q))) ** -0.5


@dataclass
class BoundEntry:
    family: str
    label: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.slack >= -SLACK_TOL * max(1.0, abs(self.rhs))


@dataclass
class RatioTest:
    m0: int | None
    horizon: int
    ratios: list  # exact ratios t_{m+1}/t_m for m = 1..len
    log10_partial_sum: float
    log10_tail_bound: float | None

    @property
    def certified(self) -> bool:
        return self.m0 is not None


@dataclass
class BoundReport:
    C: float
    C_reference: float
    D: float
    E: float
    B: float
    m_max: int
    entries: list = field(default_factory=list)
    ratio_test: RatioTest | None = None

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries) and bool(self.ratio_test and self.ratio_test.certified)

    def family(self, name: str) -> list:
        return [e for e in self.entries if e.family == name]

    def min_slack(self, name: str | None = None) -> float:
        es = self.entries if name is None else self.family(name)
        return min((e.slack for e in es), default=math.inf)

    def measured_ratio(self) -> float:
        """Largest ``lhs / rhs`` among the annihilation checks."""
        return max((e.lhs / e.rhs for e in self.family("annihilation") if e.rhs), default=0.0)


def constants(F: FockSpace) -> dict:
    D = F.deformation
    B = arith.to_complex(D.B)
    T_inv = arith.to_complex(D.T_inverse())
    # the standard basis is real, so <conj(e_i), conj(e_j)>_U = T_ij = B_ij
    E = arith.to_complex(D.T)
    return {
        "C": annihilation_constant(D.q),
        "C_reference": reference_constant(D.q),
        "D": float(np.linalg.norm(T_inv, 2)) ** 0.5,
        "E": float(np.max(np.abs(E))),
        "B": float(np.max(np.abs(B))),
    }


def _u_norm(D, xi) -> float:
    xi = np.asarray(arith.to_complex(np.asarray(xi)), dtype=complex)
    T = arith.to_complex(D.T)
    return float(np.real(np.conjugate(xi) @ T @ xi)) ** 0.5


def _strip_word(F: FockSpace, strips: list, word) -> OperatorMatrix:
    """``Lt_word``: strips ``word[0]`` first, the last letter last."""
    op = strips[word[0]]
    for a in word[1:]:
        op = strips[a] @ op
    return op


def majorant_log_term(m: int, q, d: int, k: dict) -> float:
    """``log t_m`` of the majorant series (``-inf`` when ``q = 0`` and ``m > 1``)."""
    a = abs(float(q))
    qpart = 0.0 if m == 1 else (-math.inf if a == 0 else m * (m - 1) / 2 * math.log(a))
    fact = math.log(float(q_factorial(m - 1, a)))
    return (
        qpart
        + (m - 1) * math.log(d)
        + (m - 1) / 2 * math.log(k["E"])
        + fact / 2
        + math.log(d * k["B"])
        + m * math.log(k["C"] * k["D"])
    )


def ratio_test(q, d: int, k: dict, horizon: int = RATIO_HORIZON) -> RatioTest:
    """Locate ``m0`` with ``t_{m+1}/t_m < 1`` for every ``m >= m0``.

    ``t_{m+1}/t_m = |q|^m d sqrt(E [m]_{|q|}) C D`` and ``[m]_{|q|} < 1/(1-|q|)``,
    so ``r_m = |q|^m d sqrt(E/(1-|q|)) C D`` is a decreasing majorant of the
    ratio; the first ``m`` with ``r_m < 1`` certifies all later ones.
    """
    a = abs(float(q))
    cd = k["C"] * k["D"]
    if a == 0:
        return RatioTest(1, 1, [0.0], majorant_log_term(1, q, d, k) / math.log(10), None)
    log_r0 = math.log(d) + 0.5 * (math.log(k["E"]) - math.log1p(-a)) + math.log(cd)
    m0 = None
    for m in range(1, horizon + 1):
        if m * math.log(a) + log_r0 < 0:
            m0 = m
            break
    top = m0 if m0 is not None else horizon
    logs = [majorant_log_term(m, q, d, k) for m in range(1, top + 2)]
    ratios = [math.exp(min(700.0, logs[m] - logs[m - 1])) for m in range(1, len(logs))]
    peak = max(logs[:top])
    partial = peak + math.log(math.fsum(math.exp(x - peak) for x in logs[:top]))
    tail = None
    if m0 is not None:
        r = math.exp(m0 * math.log(a) + log_r0)
        tail = (logs[top] - math.log1p(-r)) / math.log(10)
    return RatioTest(m0, horizon, ratios, partial / math.log(10), tail)


def check_bounds(F: FockSpace, m_max: int) -> BoundReport:
    if not isinstance(m_max, int) or m_max < 1:
        raise ValueError(f"m_max must be a positive integer, got {m_max!r}")
    if 2 * m_max - 1 > F.N:
        raise ValueError(f"m_max={m_max} needs truncation N >= {2 * m_max - 1}, got {F.N}")
    D = F.deformation
    k = constants(F)
    rep = BoundReport(m_max=m_max, **k)
    T_inv = D.T_inverse()

    for j in range(F.d):
        xi_t = T_inv.dot(D.basis_vector(j))
        lhs = q_operator_norm(F, free_annihilation(F, xi_t))
        rep.entries.append(BoundEntry("annihilation", f"e{j}", lhs, k["C"] * _u_norm(D, xi_t)))

    # <conj(e_v), conj(e_v)>_q is the diagonal of the Gram matrix
    for n in range(1, F.N + 1):
        rhs = k["E"] ** n * float(q_factorial(n, abs(float(D.q))))
        diag = np.real(np.diag(arith.to_complex(F.gram[n])))
        worst = int(np.argmax(diag))
        rep.entries.append(BoundEntry("word_norm", f"level{n}:{F.basis[n][worst]}", float(diag[worst]), rhs))

    strips = [undeformed_annihilation(F, D.basis_vector(a)) for a in range(F.d)]
    B = D.B
    for m in range(1, m_max + 1):
        rhs = F.d * k["B"] * (k["C"] * k["D"]) ** m
        for v in F.basis[m - 1]:
            ops = [_strip_word(F, strips, v + (j,)) for j in range(F.d)]
            for i in range(F.d):
                for order, coeffs in (("ij", B[i, :]), ("ji", B[:, i])):
                    T_iv = OperatorMatrix(F)
                    for j, c in enumerate(coeffs):
                        if c:
                            T_iv = T_iv + ops[j] * c
                    lhs = q_operator_norm(F, T_iv)
                    rep.entries.append(BoundEntry("T_iv", f"{order}:i={i}:v={v}", lhs, rhs))

    rep.ratio_test = ratio_test(D.q, F.d, k)
    return rep
