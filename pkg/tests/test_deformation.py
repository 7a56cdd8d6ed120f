import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaraki import arith
from qaraki.config import Lcg
from qaraki.deformation import (
    Block,
    DeformationError,
    build_deformation,
    deformation_from_config,
    deformed_inner,
    eigenpairs,
)

I = arith.I


def test_fixed_blocks_are_trivial():
    D = build_deformation("1/3", [Block.fixed(2)])
    eye = arith.eye(2, "exact")
    assert (D.A == eye).all() and (D.T == eye).all() and (D.B == eye).all()


def test_rotation_block_matrices():
    D = build_deformation("1/2", [Block.rotation(2)])
    third = arith.mpq(1, 3)
    assert D.T[0, 0] == 1 and D.T[1, 1] == 1
    assert D.T[0, 1] == I * third and D.T[1, 0] == -I * third
    assert D.A[0, 0] == arith.mpq(5, 4) and D.A[0, 1] == I * arith.mpq(3, 4)
    assert D.A[1, 0] == -I * arith.mpq(3, 4)
    assert all(v == 0 for v in D.invariant_residuals().values())


def test_deformed_inner():
    D = build_deformation("1/2", [Block.rotation(2)])
    e1, e2 = D.basis_vector(0), D.basis_vector(1)
    assert deformed_inner(D, e1, e2) == I * arith.mpq(1, 3)
    Dt = build_deformation(0, [Block.fixed(1)])
    assert deformed_inner(Dt, Dt.basis_vector(0), Dt.basis_vector(0)) == 1
    with pytest.raises(DeformationError):
        deformed_inner(D, e1, np.array([1]))


def test_deformed_inner_positive_seeded():
    D = build_deformation(0.5, [Block.fixed(1), Block.rotation(3.0)], "float64")
    rng = Lcg(42)
    for _ in range(20):
        xi = np.array([(rng.below(11) - 5) + 1j * (rng.below(11) - 5) for _ in range(3)])
        if np.any(xi):
            assert deformed_inner(D, xi, xi).real > 0


def test_eigenpairs_exact():
    D = build_deformation("1/2", [Block.fixed(1), Block.rotation(2)])
    pairs = eigenpairs(D)
    assert [lam for lam, _ in pairs] == [1, 2, arith.mpq(1, 2)]
    for lam, f in pairs:
        assert (D.A.dot(f) - f * arith.scalar(lam, "exact") == 0).all()
    assert (pairs[1][1] == np.array([0, 1, -I], dtype=object)).all()
    assert (np.conjugate(pairs[1][1]) == pairs[2][1]).all()
    assert arith.determinant(np.array([f for _, f in pairs])) != 0


@settings(max_examples=25, deadline=None)
@given(
    st.fractions(min_value="-19/20", max_value="19/20", max_denominator=20),
    st.lists(st.fractions(min_value="13/12", max_value=10, max_denominator=12), min_size=1, max_size=2),
)
def test_structural_identities(q, lams):
    D = build_deformation(q, [Block.fixed(1)] + [Block.rotation(l) for l in lams])
    res = D.invariant_residuals()
    assert all(v == 0 for v in res.values())
    ev = np.linalg.eigvalsh(arith.to_complex(D.T))
    assert ev.min() > 0 and ev.max() < 2


@pytest.mark.parametrize(
    "q, blocks",
    [("1", [Block.fixed(1)]), ("-1", [Block.fixed(1)]), (0.5, [Block.fixed(1)]),
     ("1/2", [Block.rotation(1)]), ("1/2", [Block.rotation(0.5)]), ("1/2", []),
     ("1/2", [Block.fixed(0)]), ("1/2", [Block("spin")])],
)
def test_invalid_inputs(q, blocks):
    with pytest.raises(DeformationError):
        build_deformation(q, blocks, "exact")


def test_float_mode_accepts_floats():
    D = build_deformation(0.3, [Block.rotation(2.5)], "float64")
    assert D.T.dtype == complex
    assert np.allclose(D.T + D.T.conj(), 2 * np.eye(2))


def test_from_config_fragment():
    D = deformation_from_config(
        {"q": "1/2", "blocks": [{"kind": "fixed", "dim": 1}, {"kind": "rotation", "lambda": "2"}]}
    )
    assert D.d == 3 and D.lambdas == [2]
    with pytest.raises(DeformationError):
        deformation_from_config({"q": "1/2", "blocks": [{"kind": "rotation"}]})
