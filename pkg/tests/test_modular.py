import itertools

import numpy as np
import pytest

from qaraki.deformation import Block, build_deformation
from qaraki.fock import build_fock
from qaraki.modular import (
    ModularError,
    adjoint_eigenoperator_check,
    build_modular,
    eigenoperator_check,
    eigenoperator_sign,
    generating_set_check,
    invariant_residuals,
    kms_check,
    modular_weight,
    polar_check,
    trace_check,
    vanishing_check,
)


@pytest.fixture(scope="module")
def M():
    return build_modular(build_fock(build_deformation(0.3, [Block.rotation(2.0)], "float64"), 4))


def test_tracial_case():
    M = build_modular(build_fock(build_deformation(0.4, [Block.fixed(2)], "float64"), 3))
    assert np.max(np.abs(M.Delta - np.eye(M.fock.dim))) < 1e-10
    assert trace_check(M) < 1e-12
    assert not M.sign_determined
    assert eigenoperator_sign(M) == (1, False)


def test_level_one_delta(M):
    assert M.sign == -1 and M.sign_determined
    A = np.array(M.fock.deformation.A, dtype=complex)
    assert np.max(np.abs(M.level(M.Delta, 1) - np.linalg.inv(A))) < 1e-10
    assert trace_check(M) > 0.1


def test_invariants(M):
    assert M.lsq_residual < 1e-8
    for key, v in invariant_residuals(M).items():
        assert v < 1e-8, key


def test_polar(M):
    for w in itertools.chain(M.fock.basis[1], M.fock.basis[2], [(0, 1, 1)]):
        assert polar_check(M, w) < 1e-8


def test_eigenoperators(M):
    s, determined = eigenoperator_sign(M)
    assert (s, determined) == (-1, True)
    assert eigenoperator_check(M) < 1e-8
    assert adjoint_eigenoperator_check(M) < 1e-8
    gen = generating_set_check(M)
    assert gen["rank"] == gen["d"] == 2 and gen["adjoint_closure"] < 1e-8


def test_kms_and_vanishing(M):
    lhs, rhs = kms_check(M, (0,), (1,))
    assert abs(lhs - rhs) < 1e-10
    for x in itertools.product(range(2), repeat=2):
        if abs(modular_weight(M, x) - 1) > 1e-8:
            assert vanishing_check(M, x) < 1e-10
    with pytest.raises(ValueError):
        kms_check(M, (0, 1, 0), (0, 1))


def test_exact_rejected():
    F = build_fock(build_deformation("1/2", [Block.rotation(2)]), 3)
    with pytest.raises(ModularError):
        build_modular(F)
    F = build_fock(build_deformation(0.5, [Block.rotation(2.0)], "float64"), 1)
    with pytest.raises(ModularError):
        build_modular(F)
