"""End-to-end acceptance checks, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import itertools
import subprocess
import sys

import numpy as np
import pytest

from qaraki import arith
from qaraki.bounds import check_bounds
from qaraki.classify import III1, II1, IIIlambda, classify_type
from qaraki.config import Lcg, random_invertible_matrix, random_spectrum
from qaraki.deformation import Block, build_deformation, eigenpairs
from qaraki.dualvars import (
    base_change,
    build_dual_system,
    commutator_residual,
    conjugate_adjoint,
    conjugate_pairing_check,
    conjugate_series,
    dual_apply_partition,
    dual_apply_recursive,
)
from qaraki.fock import build_fock
from qaraki.modular import (
    build_modular,
    eigenoperator_check,
    eigenoperator_sign,
    invariant_residuals,
    kms_check,
    modular_weight,
    vanishing_check,
)
from qaraki.wick import annihilation, creation, generator, gram_adjoint, moment, moment_pairings

TOL = 1e-8


@pytest.fixture(scope="module")
def F6():
    D = build_deformation("1/2", [Block.rotation(2)], "exact")
    return build_fock(D, 6)


@pytest.fixture(scope="module")
def dual6(F6):
    return build_dual_system(F6)


def test_criterion_01_dual_equivalence(F6):
    """Dual variables: partition formula equals the recursion on all 126 words (exact)."""
    words = [w for w in F6.all_words() if w]
    assert len(words) == 126
    for i in range(F6.d):
        for w in words:
            assert dual_apply_partition(F6, i, w).distance(dual_apply_recursive(F6, i, w)) == 0


def test_criterion_02_commutation(F6, dual6):
    """Commutation relation: residual 0 exact (d=2), <= 1e-9 float (d=3, q=-0.7)."""
    for i, j in itertools.product(range(2), repeat=2):
        assert commutator_residual(F6, dual6, i, j) == 0.0
    D = build_deformation(-0.7, [Block.fixed(1), Block.rotation(1.5)], "float64")
    F = build_fock(D, 5)
    dual = build_dual_system(F)
    for i, j in itertools.product(range(3), repeat=2):
        assert commutator_residual(F, dual, i, j) <= 1e-9


def test_criterion_03_conjugate_identity(F6, dual6):
    """Conjugate variables: pairing identity on all words <= 6 and series == adjoint (exact)."""
    for i in range(F6.d):
        xi = conjugate_series(F6, i)
        assert xi.distance(conjugate_adjoint(F6, dual6, i)) == 0
        for w in F6.all_words():
            lhs, rhs = conjugate_pairing_check(F6, i, w, xi=xi)
            assert lhs == rhs, w


def test_criterion_04_adjoint_wick(F6):
    """Adjoint/Wick: annihilation == adjoint(creation), A_i self-adjoint; Gram PD for N<=6, d<=3."""
    D3 = build_deformation("1/2", [Block.fixed(1), Block.rotation("3/2")], "exact")
    for F in (F6, build_fock(D3, 4)):
        for i in range(F.d):
            e = F.deformation.basis_vector(i)
            assert annihilation(F, e).distance(gram_adjoint(F, creation(F, e))) == 0
            assert gram_adjoint(F, generator(F, i)).distance(generator(F, i)) == 0
    configs = [
        ("-7/10", [Block.fixed(1)]),
        ("1/2", [Block.fixed(2)]),
        ("1/2", [Block.fixed(1), Block.rotation("3/2")]),
        ("-7/10", [Block.fixed(1), Block.rotation("3/2")]),
    ]
    assert all(p > 0 for p in F6.certificate)
    for q, blocks in configs:
        F = build_fock(build_deformation(q, blocks, "exact"), 6)
        assert len(F.certificate) == 7 and all(p > 0 for p in F.certificate)


def test_criterion_05_moments(F6):
    """Moments: matrix route == pair-partition route on all words <= 6; Catalan numbers at q=0."""
    for w in F6.all_words():
        assert moment(F6, w) == moment_pairings(F6, w)
    F = build_fock(build_deformation(0, [Block.fixed(1)], "exact"), 10)
    got = [moment(F, (0,) * (2 * m)) for m in range(1, 6)]
    assert got == [1, 2, 5, 14, 42]


def test_criterion_06_base_change(F6, dual6):
    """Base change: residual 0 for identity, eigenvector matrix and 5 seeded random matrices."""
    mats = [arith.eye(2, "exact"), np.array([f for _, f in eigenpairs(F6.deformation)])]
    rng = Lcg(7)
    mats += [random_invertible_matrix(rng, 2) for _ in range(5)]
    for X in mats:
        assert base_change(F6, X, dual6) == 0.0


def test_criterion_07_bounds():
    """Bounds: all slacks >= 0 for q in {0, +-1/2, 9/10}, lambda in {1, 2}; ratio test at |q|=9/10."""
    for q in ("0", "1/2", "-1/2", "9/10"):
        for blocks in ([Block.fixed(2)], [Block.rotation(2)]):
            F = build_fock(build_deformation(q, blocks, "exact"), 6)
            rep = check_bounds(F, 3)
            bad = [(e.family, e.label, e.slack) for e in rep.entries if not e.ok]
            assert not bad, (q, bad)
            assert rep.passed
            if q == "9/10":
                rt = rep.ratio_test
                assert rt.certified and rt.m0 is not None
                assert all(r < 1 for r in rt.ratios[rt.m0 - 1:])


def test_criterion_08_modular():
    """Modular (float, d=2, lambda=2, q=3/10, N=4): S, J, Delta invariants, eigenoperators, KMS."""
    F = build_fock(build_deformation(0.3, [Block.rotation(2)], "float64"), 4)
    M = build_modular(F)
    assert M.lsq_residual < TOL
    inv = invariant_residuals(M)
    for key in ("J_squared", "J_Delta_J", "Delta_vacuum", "tensor_power"):
        assert inv[key] <= TOL, key
    s, determined = eigenoperator_sign(M)
    assert determined and s in (1, -1)
    assert eigenoperator_check(M) <= TOL
    nk = len(M.eigenops)
    for x in itertools.product(range(nk), repeat=2):
        for ly in range(3):
            for y in itertools.product(range(2), repeat=ly):
                lhs, rhs = kms_check(M, x, y)
                assert abs(lhs - rhs) <= TOL
    for n in (1, 2, 3):
        for x in itertools.product(range(nk), repeat=n):
            if abs(modular_weight(M, x) - 1) > TOL:
                assert vanishing_check(M, x) <= TOL


def test_criterion_09_classifier():
    """Classifier: II1, III_1/2, III1, III_2/3 exactly; symmetry on 100 seeded random spectra."""
    assert classify_type([]).kind == II1
    r = classify_type([2, 4])
    assert (r.kind, r.lam) == (IIIlambda, arith.mpq(1, 2))
    assert classify_type([2, 3]).kind == III1
    r = classify_type(["9/4", "3/2"])
    assert (r.kind, r.lam) == (IIIlambda, arith.mpq(2, 3))
    rng = Lcg(2024)
    for _ in range(100):
        vals = random_spectrum(rng)
        base = classify_type(vals)
        assert classify_type([1 / v for v in vals]) == base
        assert classify_type(vals + [1]) == base


def test_criterion_10_determinism(tmp_path):
    """Determinism: two runs of the full exact suite give byte-identical reports."""
    outs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "qaraki", "verify", "--output", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b'"status": "pass"' in outs[0]
