import math

import pytest

from qaraki.bounds import (
    annihilation_constant,
    check_bounds,
    constants,
    majorant_log_term,
    ratio_test,
    reference_constant,
)
from qaraki.deformation import Block, build_deformation
from qaraki.fock import build_fock


def test_constants_free_case():
    assert annihilation_constant(0) == 1.0
    assert reference_constant(0) == 1.0
    F = build_fock(build_deformation(0, [Block.fixed(2)]), 3)
    rep = check_bounds(F, 2)
    assert rep.C == 1.0 and rep.D == 1.0
    for e in rep.family("annihilation"):
        assert e.slack == pytest.approx(0.0, abs=1e-12)
    assert rep.passed


def test_constant_grows_with_q():
    vals = [annihilation_constant(q) for q in (0.1, 0.3, 0.5, 0.9)]
    assert vals == sorted(vals)
    assert annihilation_constant(-0.5) == annihilation_constant(0.5)
    assert annihilation_constant(0.5) > reference_constant(0.5)


def test_rotation_constants():
    F = build_fock(build_deformation("1/2", [Block.rotation(2)]), 3)
    k = constants(F)
    # T^{-1} = (1 + A^{-1}) / 2 has norm (1 + 2) / 2
    assert k["D"] == pytest.approx(math.sqrt(1.5))
    assert k["E"] == pytest.approx(1.0)


def test_ratio_test_strong_q():
    F = build_fock(build_deformation("9/10", [Block.rotation(2)]), 3)
    k = constants(F)
    rt = ratio_test(F.q, F.d, k)
    assert rt.certified and 100 < rt.m0 < 140
    assert all(r < 1 for r in rt.ratios[rt.m0 - 1:])
    assert math.isfinite(rt.log10_partial_sum) and math.isfinite(rt.log10_tail_bound)


def test_ratio_test_horizon():
    F = build_fock(build_deformation("9/10", [Block.rotation(2)]), 3)
    rt = ratio_test(F.q, F.d, constants(F), horizon=5)
    assert not rt.certified and rt.log10_tail_bound is None


def test_ratio_matches_log_terms():
    F = build_fock(build_deformation("1/2", [Block.fixed(2)]), 3)
    k = constants(F)
    rt = ratio_test(F.q, F.d, k)
    assert rt.m0 == 4
    for m, r in enumerate(rt.ratios, start=1):
        want = math.exp(majorant_log_term(m + 1, F.q, F.d, k) - majorant_log_term(m, F.q, F.d, k))
        assert r == pytest.approx(want)


def test_entries_cover_both_orderings():
    F = build_fock(build_deformation("-1/2", [Block.rotation(2)]), 5)
    rep = check_bounds(F, 3)
    labels = [e.label for e in rep.family("T_iv")]
    assert sum(l.startswith("ij") for l in labels) == sum(l.startswith("ji") for l in labels)
    assert len(rep.family("word_norm")) == 5
    assert rep.passed and 0 < rep.measured_ratio() < 1


def test_m_max_validation():
    F = build_fock(build_deformation("1/2", [Block.fixed(1)]), 4)
    with pytest.raises(ValueError):
        check_bounds(F, 3)
    with pytest.raises(ValueError):
        check_bounds(F, 0)
