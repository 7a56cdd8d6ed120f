"""Deformed one-particle space built from an almost periodic orthogonal group.

The group ``U_t = A^{it}`` on ``R^d`` is given in block normal form: fixed
directions (``A = 1``) and 2-dimensional rotation blocks with modulus
``lambda > 1``.  From ``A`` we derive the deformation matrix
``T = 2A/(1+A)`` and the covariance ``B_ij = <conj(e_i), e_j>_U``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import arith
from .arith import EXACT


class DeformationError(ValueError):
    """Invalid deformation input (dimension, rationality, range of q)."""


@dataclass(frozen=True)
class Block:
    """One summand of the block normal form of ``A``.

    ``kind="fixed"`` contributes ``dim`` directions fixed by ``U_t``;
    ``kind="rotation"`` contributes ``count`` planes on which ``A`` has
    eigenvalues ``lam`` and ``1/lam``.
    """

    kind: str
    dim: int = 1
    lam: object = None
    count: int = 1

    @classmethod
    def fixed(cls, dim: int = 1) -> "Block":
        return cls("fixed", dim=dim)

    @classmethod
    def rotation(cls, lam, count: int = 1) -> "Block":
        return cls("rotation", lam=lam, count=count)

    @property
    def size(self) -> int:
        return self.dim if self.kind == "fixed" else 2 * self.count

    def validate(self) -> None:
        if self.kind == "fixed":
            if not isinstance(self.dim, int) or self.dim < 1:
                raise DeformationError(f"fixed block needs a positive integer dim, got {self.dim!r}")
        elif self.kind == "rotation":
            if not isinstance(self.count, int) or self.count < 1:
                raise DeformationError(f"rotation block needs a positive integer count, got {self.count!r}")
        else:
            raise DeformationError(f"unknown block kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class Deformation:
    q: object
    d: int
    blocks: tuple
    A: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    arithmetic: str = EXACT

    @property
    def exact(self) -> bool:
        return self.arithmetic == EXACT

    @property
    def lambdas(self) -> list:
        """Rotation moduli, one entry per rotation plane."""
        out = []
        for b in self.blocks:
            if b.kind == "rotation":
                out.extend([b.lam] * b.count)
        return out

    def scalar(self, x):
        return arith.scalar(x, self.arithmetic)

    def basis_vector(self, k: int) -> np.ndarray:
        v = arith.zeros(self.d, self.arithmetic)
        v[k] = self.scalar(1)
        return v

    def T_inverse(self) -> np.ndarray:
        """``(2A/(1+A))^{-1} = (1+A)/(2A)`` by blockwise functional calculus."""
        return functional_calculus(self, lambda x: (1 + x) / (2 * x))

    def invariant_residuals(self) -> dict:
        """Residuals of the structural identities of ``A`` and ``T``."""
        eye = arith.eye(self.d, self.arithmetic)
        return {
            "A_hermitian": arith.max_abs(self.A - arith.conj_transpose(self.A)),
            "A_conj_A": arith.max_abs(self.A.dot(np.conjugate(self.A)) - eye),
            "T_hermitian": arith.max_abs(self.T - arith.conj_transpose(self.T)),
            "T_plus_conj_T": arith.max_abs(self.T + np.conjugate(self.T) - 2 * eye),
        }


def _rotation_eigvecs(mode):
    one, i = arith.scalar(1, mode), (arith.I if mode == EXACT else 1j)
    f = np.array([one, -i], dtype=object if mode == EXACT else complex)
    return f, np.conjugate(f)


def eigenpairs(D: Deformation) -> list:
    """Eigenpairs ``(lambda, f)`` of ``A`` in block order.

    Fixed directions give ``(1, e_k)``; each rotation plane spanned by
    ``e_a, e_b`` gives ``(lam, e_a - i e_b)`` followed by
    ``(1/lam, e_a + i e_b)``.  Vectors are left unnormalized so they stay
    rational in exact mode.
    """
    mode = D.arithmetic
    one = arith.real_scalar(1, mode)
    out = []
    offset = 0
    for b in D.blocks:
        if b.kind == "fixed":
            for k in range(b.dim):
                out.append((one, D.basis_vector(offset + k)))
            offset += b.dim
            continue
        f, fbar = _rotation_eigvecs(mode)
        for _ in range(b.count):
            v = arith.zeros(D.d, mode)
            v[offset:offset + 2] = f
            w = arith.zeros(D.d, mode)
            w[offset:offset + 2] = fbar
            out.append((b.lam, v))
            out.append((one / b.lam, w))
            offset += 2
    return out


def functional_calculus(D: Deformation, fn) -> np.ndarray:
    """``fn(A)`` assembled from the eigenpairs (each block is normal)."""
    mode = D.arithmetic
    out = arith.zeros((D.d, D.d), mode)
    for lam, f in eigenpairs(D):
        norm2 = sum((v.conjugate() * v for v in f), arith.scalar(0, mode))
        coeff = arith.scalar(fn(lam), mode) / norm2
        out = out + np.outer(f, np.conjugate(f)) * coeff
    return out


def build_deformation(q, blocks: Sequence[Block], arithmetic: str = EXACT) -> Deformation:
    """Assemble ``A``, ``T`` and ``B`` for the given block normal form."""
    if arithmetic not in arith.MODES:
        raise DeformationError(f"unknown arithmetic {arithmetic!r}")
    blocks = tuple(blocks)
    if not blocks:
        raise DeformationError("at least one block is required")
    try:
        qv = arith.real_scalar(q, arithmetic)
    except (arith.ExactInputError, TypeError, ValueError) as exc:
        raise DeformationError(f"q: {exc}") from None
    if not -1 < qv < 1:
        raise DeformationError(f"q must lie in (-1, 1), got {q!r}")

    normalized = []
    for b in blocks:
        b.validate()
        if b.kind == "rotation":
            try:
                lam = arith.real_scalar(b.lam, arithmetic)
            except (arith.ExactInputError, TypeError, ValueError) as exc:
                raise DeformationError(f"lambda: {exc}") from None
            if not lam > 1:
                raise DeformationError(f"rotation lambda must be > 1, got {b.lam!r}")
            b = Block.rotation(lam, b.count)
        normalized.append(b)
    d = sum(b.size for b in normalized)

    mode = arithmetic
    A = arith.zeros((d, d), mode)
    i_unit = arith.I if mode == EXACT else 1j
    offset = 0
    for b in normalized:
        if b.kind == "fixed":
            for k in range(b.dim):
                A[offset + k, offset + k] = arith.scalar(1, mode)
            offset += b.dim
            continue
        c = (b.lam + 1 / b.lam) / 2
        s = (b.lam - 1 / b.lam) / 2
        for _ in range(b.count):
            a0 = offset
            A[a0, a0] = A[a0 + 1, a0 + 1] = arith.scalar(c, mode)
            A[a0, a0 + 1] = i_unit * s
            A[a0 + 1, a0] = -i_unit * s
            offset += 2

    proto = Deformation(qv, d, tuple(normalized), A, A, A, mode)
    T = functional_calculus(proto, lambda x: 2 * x / (1 + x))
    for arr in (A, T):
        arr.setflags(write=False)
    # the standard basis is real, so B_ij = <e_i, e_j>_U = T_ij
    return Deformation(qv, d, tuple(normalized), A, T, T, mode)


def deformed_inner(D: Deformation, xi, eta):
    """``<xi, eta>_U = <xi, T eta>``, conjugate-linear in ``xi``."""
    xi = np.asarray(xi)
    eta = np.asarray(eta)
    if xi.shape != (D.d,) or eta.shape != (D.d,):
        raise DeformationError(f"vectors must have length {D.d}")
    return np.conjugate(xi).dot(D.T.dot(eta))


def blocks_from_config(items: Sequence[dict]) -> list:
    blocks = []
    for k, item in enumerate(items):
        kind = item.get("kind")
        if kind == "fixed":
            blocks.append(Block.fixed(item.get("dim", 1)))
        elif kind == "rotation":
            if "lambda" not in item:
                raise DeformationError(f"blocks[{k}]: rotation block needs 'lambda'")
            blocks.append(Block.rotation(item["lambda"], item.get("count", 1)))
        else:
            raise DeformationError(f"blocks[{k}]: unknown kind {kind!r}")
    return blocks


def deformation_from_config(cfg: dict) -> Deformation:
    """Build from the JSON fragment ``{"q", "blocks", "arithmetic"}``."""
    arithmetic = cfg.get("arithmetic", EXACT)
    return build_deformation(cfg.get("q"), blocks_from_config(cfg.get("blocks", [])), arithmetic)
