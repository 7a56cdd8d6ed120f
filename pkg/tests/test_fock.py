import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaraki import arith
from qaraki.deformation import Block, build_deformation
from qaraki.fock import (
    FockError,
    build_fock,
    gram_by_permutations,
    inversions,
    q_inner,
    q_norm,
)
from qaraki.partitions import q_factorial


@pytest.fixture(scope="module")
def F():
    return build_fock(build_deformation("1/2", [Block.rotation(2)]), 4)


def test_single_letter_gram_is_q_factorial():
    for q in ("1/2", "-2/3", "0"):
        F = build_fock(build_deformation(q, [Block.fixed(1)]), 5)
        for n in range(6):
            assert F.gram[n][0, 0] == q_factorial(n, arith.mpq(q))


def test_free_case_gram_is_tensor_power():
    D = build_deformation(0, [Block.rotation(2)])
    F = build_fock(D, 2)
    assert (F.gram[2] == np.kron(D.T, D.T)).all()


def test_transposition_entry():
    F = build_fock(build_deformation("1/2", [Block.fixed(2)]), 2)
    assert F.gram[2][F.index((0, 1)), F.index((1, 0))] == arith.mpq(1, 2)


@pytest.mark.parametrize("blocks", [[Block.rotation(2)], [Block.fixed(1), Block.rotation("3/2")]])
@pytest.mark.parametrize("q", ["1/2", "-7/10"])
def test_recursion_matches_permutation_oracle(blocks, q):
    D = build_deformation(q, blocks)
    F = build_fock(D, 3 if D.d == 3 else 4)
    for n in range(F.N + 1):
        assert (F.gram[n] == gram_by_permutations(D, n)).all()


def test_float_recursion_matches_oracle():
    D = build_deformation(-0.35, [Block.fixed(1), Block.rotation(1.7)], "float64")
    F = build_fock(D, 3)
    for n in range(4):
        assert np.allclose(F.gram[n], gram_by_permutations(D, n), atol=1e-13)


def test_content_block_certificate_route():
    # level 4 has 81 > 64 entries and goes through the symmetrizer blocks
    D = build_deformation("1/2", [Block.fixed(1), Block.rotation("3/2")])
    direct = build_fock(D, 4)
    blocks = build_fock(D, 4, direct_ldl_max=64)
    assert direct.certificate[:4] == blocks.certificate[:4]
    assert blocks.certificate[4] > 0


def test_hermitian_levels(F):
    for G in F.gram:
        assert (G == np.conjugate(G).T).all()


def test_inner_products(F):
    vac = F.vacuum()
    assert q_inner(F, vac, vac) == 1
    for w in F.all_words():
        if w:
            assert q_inner(F, vac, F.basis_vector(w)) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=31, max_size=31),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=31, max_size=31))
def test_inner_conjugate_symmetric_and_positive(F, a, b):
    def vec(coeffs):
        v = F.zero()
        k = 0
        for n in range(F.N + 1):
            for j in range(F.dims[n]):
                re, im = coeffs[k]
                v.parts[n][j] = arith.GaussianRational(re, im)
                k += 1
        return v

    x, y = vec(a), vec(b)
    assert q_inner(F, x, y) == q_inner(F, y, x).conjugate()
    if any(re or im for re, im in a):
        s = q_inner(F, x, x)
        assert s.imag == 0 and s.real > 0


def test_word_norm_estimate(F):
    T = arith.to_complex(F.deformation.T)
    E = float(np.max(np.abs(T)))
    for w in F.all_words():
        k = len(w)
        assert q_norm(F, F.basis_vector(w)) ** 2 <= E ** k * float(q_factorial(k, 0.5)) + 1e-12


def test_inversions():
    assert inversions((0, 1, 2)) == 0
    assert inversions((2, 1, 0)) == 3


def test_budget_and_truncation_errors():
    D = build_deformation("1/2", [Block.fixed(3)])
    with pytest.raises(FockError):
        build_fock(D, 10)
    with pytest.raises(FockError):
        build_fock(D, 0)
    F = build_fock(D, 2)
    with pytest.raises(FockError):
        F.basis_vector((0, 0, 0))


def test_vectors_and_indexing(F):
    assert F.dims == [1, 2, 4, 8, 16] and F.dim == 31
    assert F.flat_index((1, 0)) == 3 + 2
    v = F.vector({(): 1, (0, 1): "1/2"})
    assert v.coefficients() == {(): 1, (0, 1): arith.mpq(1, 2)}
    assert v.support() == [0, 2]
    t = F.tensor_vector([F.deformation.basis_vector(0), F.deformation.basis_vector(1)])
    assert t.equals(F.basis_vector((0, 1)))
    assert (v - v).support() == []
