"""Type of the generated factor from the spectrum of ``A``.

The closed multiplicative subgroup ``G`` generated by the eigenvalues decides
the type: ``G = {1}`` gives II1, ``G = rho^Z`` gives III_lambda with
``lambda = min(rho, 1/rho)``, and a dense ``G`` gives III1.

For rational spectra this is a lattice question: each value is an integer
vector of prime exponents, and ``G`` is discrete iff those vectors span a
rank-1 lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from sympy import factorint

from . import arith

II1 = "II1"
IIIlambda = "IIIlambda"
III1 = "III1"
EXACT = "exact"
TOLERANCE = "tolerance-based"

DEFAULT_Q = 1000
DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class TypeLabel:
    kind: str
    provenance: str
    lam: object = None  # mpq in exact mode, float otherwise

    def __post_init__(self):
        if self.kind == IIIlambda and not 0 < self.lam < 1:
            raise ValueError(f"III_lambda needs lambda in (0,1), got {self.lam}")

    @property
    def generator(self):
        """Generator ``1/lambda > 1`` of ``G`` when ``G`` is discrete and nontrivial."""
        return None if self.lam is None else 1 / self.lam

    def __str__(self):
        if self.kind != IIIlambda:
            return self.kind
        lam = arith.format_rational(self.lam) if self.provenance == EXACT else repr(self.lam)
        return f"III_{lam}"


def _exponents(x) -> dict:
    out = {p: e for p, e in factorint(int(x.numerator)).items()}
    for p, e in factorint(int(x.denominator)).items():
        out[p] = out.get(p, 0) - e
    return out


def _exact(values) -> TypeLabel:
    vals = []
    for v in values:
        try:
            r = arith.to_rational(v)
        except arith.ExactInputError:
            raise ValueError(f"exact classification needs rational values, got {v!r}") from None
        if r <= 0:
            raise ValueError(f"eigenvalues must be positive, got {v!r}")
        if r != 1:
            vals.append(r)
    if not vals:
        return TypeLabel(II1, EXACT)
    vecs = [_exponents(v) for v in vals]
    primes = sorted(set().union(*vecs))
    rows = [[vec.get(p, 0) for p in primes] for vec in vecs]
    # rank 1 iff every row is proportional to the first
    base = rows[0]
    for r in rows[1:]:
        if any(base[a] * r[b] != base[b] * r[a] for a in range(len(primes)) for b in range(a + 1, len(primes))):
            return TypeLabel(III1, EXACT)
    g0 = abs(reduce(math.gcd, base))
    u = [x // g0 for x in base]
    pivot = next(k for k, x in enumerate(u) if x)
    value_u = arith.mpq(1)
    for p, e in zip(primes, u):
        value_u *= arith.mpq(p) ** e
    if value_u < 1:
        u = [-x for x in u]
        value_u = 1 / value_u
    coords = [r[pivot] // u[pivot] for r in rows]
    g = abs(reduce(math.gcd, coords))
    rho = value_u ** g
    return TypeLabel(IIIlambda, EXACT, 1 / rho)


def _float(values, Q: int, eps: float) -> TypeLabel:
    logs = []
    for v in values:
        v = float(v)
        if not v > 0:
            raise ValueError(f"eigenvalues must be positive, got {v!r}")
        if abs(math.log(v)) > eps:
            logs.append(abs(math.log(v)))
    if not logs:
        return TypeLabel(II1, TOLERANCE)
    ref = logs[0]
    # every log must be a rational multiple a/b of ref with b <= Q;
    # G is then generated by exp(ref / lcm(b)) times gcd of the numerators
    nums, dens = [], []
    for x in logs:
        fr = Fraction(x / ref).limit_denominator(Q)
        if abs(float(fr) * ref - x) > eps * max(1.0, x):
            return TypeLabel(III1, TOLERANCE)
        nums.append(fr.numerator)
        dens.append(fr.denominator)
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), dens)
    ints = [n * (lcm // d) for n, d in zip(nums, dens)]
    step = ref * abs(reduce(math.gcd, ints)) / lcm
    return TypeLabel(IIIlambda, TOLERANCE, math.exp(-step))


def classify_type(lambdas, *, exact: bool = True, Q: int = DEFAULT_Q, eps: float = DEFAULT_EPS) -> TypeLabel:
    """Classify from eigenvalues; exact mode takes rationals (ints, ``"p/q"``)."""
    lambdas = list(lambdas)
    return _exact(lambdas) if exact else _float(lambdas, Q, eps)


def spectrum(D) -> list:
    out = []
    for b in D.blocks:
        if b.kind == "fixed":
            out.extend([1] * b.dim)
        else:
            out.extend([b.lam, 1 / b.lam] * b.count)
    return out


def classify_deformation(D, *, Q: int = DEFAULT_Q, eps: float = DEFAULT_EPS) -> TypeLabel:
    return classify_type(spectrum(D), exact=D.exact, Q=Q, eps=eps)
