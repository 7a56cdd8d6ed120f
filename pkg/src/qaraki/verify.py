"""Suite orchestration for ``verify``.

The deformation and the Fock space are built once; suites run in the fixed
order of :data:`config.SUITES` and each contributes one report entry.
"""
from __future__ import annotations

import itertools
import time

import numpy as np

from . import arith
from .bounds import check_bounds
from .classify import classify_deformation, classify_type, spectrum
from .config import SUITES, Lcg, RunConfig, random_invertible_matrix
from .deformation import Block, build_deformation, eigenpairs
from .dualvars import (
    PARTITION,
    RECURSIVE,
    base_change,
    build_dual_system,
    commutator_residuals,
    conjugate_adjoint,
    conjugate_pairing_check,
    conjugate_series,
)
from .fock import build_fock, gram_by_permutations
from .modular import (
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
from .wick import annihilation, creation, generator, gram_adjoint, moment, moment_pairings

ORACLE_MAX_LEVEL = 4
MODULAR_TOL = 1e-8
RANDOM_BASE_CHANGES = 5

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def deformation_for(cfg: RunConfig):
    blocks = [
        Block.fixed(b["dim"]) if b["kind"] == "fixed" else Block.rotation(b["lambda"], b["count"])
        for b in cfg.blocks
    ]
    return build_deformation(cfg.q, blocks, cfg.arithmetic)


class Context:
    """Objects shared between suites, built lazily."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.D = deformation_for(cfg)
        self.F = build_fock(self.D, cfg.N)
        self._dual = None

    @property
    def exact(self) -> bool:
        return self.F.exact

    @property
    def dual(self):
        if self._dual is None:
            self._dual = build_dual_system(self.F, RECURSIVE)
        return self._dual

    def status(self, residual: float) -> str:
        limit = 0.0 if self.exact else self.cfg.tolerance
        return "pass" if residual <= limit else "fail"


def _dist(a, b) -> float:
    return float(abs(complex(a - b)))


def suite_fock(ctx: Context) -> dict:
    D, F = ctx.D, ctx.F
    oracle = 0.0
    top = min(F.N, ORACLE_MAX_LEVEL)
    for n in range(1, top + 1):
        oracle = max(oracle, arith.max_abs(F.gram[n] - gram_by_permutations(D, n)))
    inv = {k: float(v) for k, v in D.invariant_residuals().items()}
    worst = max([oracle, *inv.values()])
    return {
        "status": ctx.status(worst),
        "max_residual": worst,
        "counts": {"levels": F.N + 1, "dim": F.dim, "oracle_levels": top},
        "gram_oracle": oracle,
        "invariants": inv,
        "min_pivot": [float(p) for p in F.certificate],
    }


def suite_wick(ctx: Context) -> dict:
    D, F = ctx.D, ctx.F
    adj = sa = 0.0
    for i in range(F.d):
        e = D.basis_vector(i)
        adj = max(adj, annihilation(F, e).distance(gram_adjoint(F, creation(F, e))))
        A = generator(F, i)
        sa = max(sa, gram_adjoint(F, A).distance(A))
    mom = 0.0
    words = F.all_words()
    for w in words:
        mom = max(mom, _dist(moment(F, w), moment_pairings(F, w)))
    worst = max(adj, sa, mom)
    return {
        "status": ctx.status(worst),
        "max_residual": worst,
        "counts": {"generators": F.d, "words": len(words)},
        "annihilation_adjoint": adj,
        "self_adjoint": sa,
        "moments": mom,
    }


def suite_dual(ctx: Context) -> dict:
    F = ctx.F
    part = build_dual_system(F, PARTITION)
    eq = max(a.distance(b) for a, b in zip(part.D, ctx.dual.D))
    comm = commutator_residuals(F, ctx.dual)
    worst = max(eq, *comm.values())
    return {
        "status": ctx.status(worst),
        "max_residual": worst,
        "counts": {"words": len(F.all_words()) - 1, "pairs": len(comm)},
        "partition_vs_recursive": eq,
        "commutators": {f"{i},{j}": v for (i, j), v in sorted(comm.items())},
    }


def suite_conjugate(ctx: Context) -> dict:
    F = ctx.F
    series = [conjugate_series(F, i) for i in range(F.d)]
    eq = max(s.distance(conjugate_adjoint(F, ctx.dual, i)) for i, s in enumerate(series))
    pairing = 0.0
    count = 0
    for i in range(F.d):
        for w in F.all_words():
            lhs, rhs = conjugate_pairing_check(F, i, w, xi=series[i])
            pairing = max(pairing, _dist(lhs, rhs))
            count += 1
    worst = max(eq, pairing)
    return {
        "status": ctx.status(worst),
        "max_residual": worst,
        "counts": {"pairings": count},
        "series_vs_adjoint": eq,
        "pairing": pairing,
    }


def suite_bounds(ctx: Context) -> dict:
    rep = check_bounds(ctx.F, ctx.cfg.m_max)
    rt = rep.ratio_test
    worst = max(0.0, -rep.min_slack())
    return {
        "status": "pass" if rep.passed else "fail",
        "max_residual": worst,
        "counts": {"checks": len(rep.entries), "m_max": rep.m_max},
        "constants": {"C": rep.C, "C_reference": rep.C_reference, "D": rep.D, "E": rep.E, "B": rep.B},
        "min_slack": {f: rep.min_slack(f) for f in ("annihilation", "word_norm", "T_iv")},
        "measured_over_bound": rep.measured_ratio(),
        "ratio_test": {
            "certified": rt.certified,
            "m0": rt.m0,
            "horizon": rt.horizon,
            "log10_partial_sum": rt.log10_partial_sum,
            "log10_tail_bound": rt.log10_tail_bound,
        },
        "norm_arithmetic": "float64",
    }


def suite_modular(ctx: Context) -> dict:
    if ctx.exact:
        return {"status": "skipped", "reason": "modular data needs float64 arithmetic", "max_residual": 0.0}
    F = ctx.F
    M = build_modular(F)
    inv = invariant_residuals(M)
    s_eig, s_eig_det = eigenoperator_sign(M)
    polar = max(polar_check(M, w) for w in F.basis[2])
    eig = eigenoperator_check(M)
    eig_adj = adjoint_eigenoperator_check(M)
    gen = generating_set_check(M)
    nk = len(M.eigenops)
    kms = vanish = 0.0
    n_kms = n_vanish = 0
    for lx in (1, 2):
        for x in itertools.product(range(nk), repeat=lx):
            for ly in range(0, min(2, F.N - lx) + 1):
                for y in itertools.product(range(F.d), repeat=ly):
                    lhs, rhs = kms_check(M, x, y)
                    kms = max(kms, abs(lhs - rhs))
                    n_kms += 1
    for lx in range(1, min(3, F.N) + 1):
        for x in itertools.product(range(nk), repeat=lx):
            if abs(modular_weight(M, x) - 1) > MODULAR_TOL:
                vanish = max(vanish, vanishing_check(M, x))
                n_vanish += 1
    closure = gen["adjoint_closure"] if gen["rank"] == gen["d"] else float("inf")
    worst = max(M.lsq_residual, *inv.values(), polar, eig, eig_adj, closure, kms, vanish)
    return {
        "status": "pass" if worst <= MODULAR_TOL else "fail",
        "max_residual": worst,
        "counts": {"kms": n_kms, "vanishing": n_vanish, "eigenoperators": nk},
        "conventions": {
            "delta_sign": M.sign,
            "delta_sign_determined": M.sign_determined,
            "eigen_sign": s_eig,
            "eigen_sign_determined": s_eig_det,
        },
        "lsq_residual": M.lsq_residual,
        "invariants": inv,
        "polar": polar,
        "eigenoperator": eig,
        "adjoint_eigenoperator": eig_adj,
        "generating_set": gen,
        "kms": kms,
        "vanishing": vanish,
        "trace_defect": trace_check(M),
    }


def suite_classify(ctx: Context) -> dict:
    cfg = ctx.cfg
    label = classify_deformation(ctx.D, Q=cfg.Q, eps=cfg.eps)
    values = spectrum(ctx.D)
    kw = {"exact": ctx.exact, "Q": cfg.Q, "eps": cfg.eps}
    inverse = classify_type([1 / x for x in values], **kw)
    padded = classify_type(list(values) + [1], **kw)
    ok = label == inverse == padded
    return {
        "status": "pass" if ok else "fail",
        "max_residual": 0.0,
        "type": str(label),
        "kind": label.kind,
        "lambda": label.lam,
        "generator": label.generator,
        "provenance": label.provenance,
        "symmetry": ok,
    }


def suite_basechange(ctx: Context) -> dict:
    F, D = ctx.F, ctx.D
    mode = F.arithmetic
    mats = {"identity": arith.eye(F.d, mode)}
    eig = np.array([f for _, f in eigenpairs(D)])
    mats["eigenvectors"] = eig
    rng = Lcg(ctx.cfg.seed)
    for k in range(RANDOM_BASE_CHANGES):
        mats[f"random{k}"] = random_invertible_matrix(rng, F.d, mode)
    res = {name: base_change(F, X, ctx.dual) for name, X in mats.items()}
    worst = max(res.values())
    return {
        "status": ctx.status(worst),
        "max_residual": worst,
        "counts": {"matrices": len(mats)},
        "residuals": res,
    }


RUNNERS = {
    "fock": suite_fock,
    "wick": suite_wick,
    "dual": suite_dual,
    "conjugate": suite_conjugate,
    "bounds": suite_bounds,
    "modular": suite_modular,
    "classify": suite_classify,
    "basechange": suite_basechange,
}


def run_verify(cfg: RunConfig, ctx: Context | None = None) -> tuple:
    """Run the selected suites; returns ``(report, exit_code)``."""
    ctx = ctx or Context(cfg)
    entries = []
    for name in SUITES:
        if name not in cfg.suites:
            continue
        start = time.perf_counter()
        try:
            entry = RUNNERS[name](ctx)
        except (ModularError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            entry = {"status": "fail", "error": f"{type(exc).__name__}: {exc}", "max_residual": float("inf")}
        entry["name"] = name
        if cfg.timings:
            entry["seconds"] = time.perf_counter() - start
        entries.append(entry)
    failed = any(e["status"] == "fail" for e in entries)
    report = {
        "schema": 1,
        "config": cfg.echo(),
        "basis_order": "level-major, lexicographic words; leftmost letter is the first tensor factor",
        "suites": entries,
        "status": "fail" if failed else "pass",
    }
    return report, EXIT_FAIL if failed else EXIT_OK
