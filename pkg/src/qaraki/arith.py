"""Scalar fields and small dense linear algebra.

Two arithmetic modes are supported throughout the package:

``"exact"``
    Gaussian rationals, i.e. ``a + b i`` with ``a, b`` rational.  Arrays have
    ``dtype=object`` and hold :class:`GaussianRational` entries.
``"float64"``
    Ordinary ``complex128`` numpy arrays.

Every routine that needs to distinguish the two looks at the array dtype, so
callers rarely have to pass the mode around explicitly.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2
import numpy as np

EXACT = "exact"
FLOAT = "float64"
MODES = (EXACT, FLOAT)

mpq = gmpy2.mpq
_MPQ = type(mpq(0))
_MPZ = type(gmpy2.mpz(0))


class ExactInputError(ValueError):
    """Raised for inputs that cannot be represented in the requested mode."""


def to_rational(x) -> "mpq":
    """Convert ``x`` to an exact rational.

    Accepts ints, :class:`fractions.Fraction`, gmpy2 rationals and strings of
    the form ``"p/q"`` or ``"p"``.  Floats are rejected: exact mode must never
    silently absorb a binary approximation.
    """
    if isinstance(x, bool):
        raise ExactInputError(f"boolean is not a rational number: {x!r}")
    if isinstance(x, (int, _MPQ, _MPZ, Fraction)):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        text = x.strip()
        parts = text.split("/")
        try:
            if len(parts) == 1:
                return mpq(int(parts[0]))
            if len(parts) == 2:
                den = int(parts[1])
                if den == 0:
                    raise ZeroDivisionError
                return mpq(int(parts[0]), den)
        except (ValueError, ZeroDivisionError):
            pass
        raise ExactInputError(f"not a rational literal 'p/q': {x!r}")
    raise ExactInputError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _new(re, im):
    g = object.__new__(GaussianRational)
    g.real = re
    g.imag = im
    return g


class GaussianRational:
    """An element ``real + imag*i`` of the field Q(i)."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = to_rational(real)
        self.imag = to_rational(imag)

    @staticmethod
    def _parts(other):
        if type(other) is GaussianRational:
            return other.real, other.imag
        if isinstance(other, (int, _MPQ, _MPZ)) and not isinstance(other, bool):
            return other, 0
        if isinstance(other, Fraction):
            return mpq(other), 0
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return _new(self.real + p[0], self.imag + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return _new(self.real - p[0], self.imag - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return _new(p[0] - self.real, p[1] - self.imag)

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.real, self.imag, other.real, other.imag
            return _new(a * c - b * d, a * d + b * c)
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return _new(self.real * p[0], self.imag * p[0])

    __rmul__ = __mul__

    def __neg__(self):
        return _new(-self.real, -self.imag)

    def __pos__(self):
        return self

    def norm2(self):
        """Squared modulus, an exact rational."""
        return self.real * self.real + self.imag * self.imag

    def inverse(self):
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return _new(self.real / n, -self.imag / n)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if p[1] == 0:
            if p[0] == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return _new(self.real / p[0], self.imag / p[0])
        return self * _new(mpq(p[0]), mpq(p[1])).inverse()

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return _new(mpq(p[0]), mpq(p[1])) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return _new(self.real, -self.imag)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.real == p[0] and self.imag == p[1]

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __float__(self):
        if self.imag != 0:
            raise TypeError("cannot convert non-real Gaussian rational to float")
        return float(self.real)

    def __repr__(self):
        return f"GaussianRational({format_rational(self.real)!r}, {format_rational(self.imag)!r})"

    def __str__(self):
        re, im = format_rational(self.real), format_rational(self.imag)
        if self.imag == 0:
            return re
        if self.real == 0:
            return f"{im}i"
        sign = "+" if self.imag > 0 else "-"
        return f"{re}{sign}{format_rational(abs(self.imag))}i"


ZERO = _new(mpq(0), mpq(0))
ONE = _new(mpq(1), mpq(0))
I = _new(mpq(0), mpq(1))


def scalar(x, mode: str):
    """Coerce ``x`` to a scalar of the given arithmetic mode."""
    if mode == EXACT:
        if type(x) is GaussianRational:
            return x
        if isinstance(x, complex):
            raise ExactInputError(f"complex float in exact mode: {x!r}")
        return _new(to_rational(x), mpq(0))
    if mode == FLOAT:
        return complex(x)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def real_scalar(x, mode: str):
    """Real parameters such as ``q``: mpq in exact mode, float otherwise."""
    if mode == EXACT:
        return to_rational(x)
    if isinstance(x, str) and "/" in x:
        return float(to_rational(x))
    if isinstance(x, bool):
        raise ExactInputError(f"boolean is not a number: {x!r}")
    return float(x)


def mode_of(arr: np.ndarray) -> str:
    return EXACT if arr.dtype == object else FLOAT


def zeros(shape, mode: str) -> np.ndarray:
    if mode == EXACT:
        return np.full(shape, ZERO, dtype=object)
    return np.zeros(shape, dtype=complex)


def eye(n: int, mode: str) -> np.ndarray:
    out = zeros((n, n), mode)
    for k in range(n):
        out[k, k] = ONE if mode == EXACT else 1.0
    return out


def asarray(values, mode: str) -> np.ndarray:
    """Build an array of the given mode from nested Python scalars."""
    if mode == FLOAT:
        return np.asarray(values, dtype=complex)
    src = np.asarray(values, dtype=object)
    out = np.empty(src.shape, dtype=object)
    for idx, v in np.ndenumerate(src):
        out[idx] = scalar(v, EXACT)
    return out


def to_complex(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.vectorize(complex, otypes=[complex])(arr) if arr.size else np.zeros(arr.shape, complex)
    return np.asarray(arr, dtype=complex)


def conj_transpose(arr: np.ndarray) -> np.ndarray:
    return np.conjugate(arr).T


def is_zero(arr: np.ndarray, tol: float = 0.0) -> bool:
    if arr.dtype == object:
        return all(not v for v in arr.flat)
    return arr.size == 0 or float(np.max(np.abs(arr))) <= tol


def max_abs(arr: np.ndarray) -> float:
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        return max(abs(v) for v in arr.flat)
    return float(np.max(np.abs(arr)))


def _exact_eliminate(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gauss-Jordan elimination solving ``a x = b`` over Q(i)."""
    n = a.shape[0]
    a = a.copy()
    b = b.copy()
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col]), None)
        if pivot is None:
            raise np.linalg.LinAlgError("singular matrix")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        inv = a[col, col].inverse()
        a[col] = a[col] * inv
        b[col] = b[col] * inv
        for r in range(n):
            if r != col and a[r, col]:
                f = a[r, col]
                a[r] = a[r] - a[col] * f
                b[r] = b[r] - b[col] * f
    return b


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` in the arithmetic of ``a``."""
    if a.dtype == object:
        vec = b.ndim == 1
        x = _exact_eliminate(a, b.reshape(len(b), -1))
        return x.reshape(-1) if vec else x
    return np.linalg.solve(a, b)


def inverse(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return _exact_eliminate(a, eye(a.shape[0], EXACT))
    return np.linalg.inv(a)


def ldl_pivots(a: np.ndarray) -> list:
    """Pivots of an LDL^H factorization without pivoting (exact mode).

    For a Hermitian matrix, all pivots real and positive is equivalent to
    positive definiteness (Sylvester's criterion).  Elimination stops at the
    first non-positive pivot, which is returned as the last entry.
    """
    n = a.shape[0]
    a = a.copy()
    pivots = []
    for k in range(n):
        p = a[k, k]
        pivots.append(p)
        if p.imag != 0 or p.real <= 0:
            break
        inv = p.inverse()
        row = a[k, k + 1:]
        col = a[k + 1:, k]
        if k + 1 < n:
            a[k + 1:, k + 1:] = a[k + 1:, k + 1:] - np.outer(col * inv, row)
    return pivots


def determinant(a: np.ndarray):
    """Exact determinant over Q(i) by elimination; float falls back to numpy."""
    if a.dtype != object:
        return complex(np.linalg.det(a))
    n = a.shape[0]
    a = a.copy()
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det = det * a[col, col]
        inv = a[col, col].inverse()
        for r in range(col + 1, n):
            if a[r, col]:
                a[r] = a[r] - a[col] * (a[r, col] * inv)
    return det
