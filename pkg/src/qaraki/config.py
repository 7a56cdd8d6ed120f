"""Run configuration, validation and the seeded generator."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import arith
from .arith import EXACT, MODES

SUITES = ("fock", "wick", "dual", "conjugate", "bounds", "modular", "classify", "basechange")
NEEDS_N2 = {"dual", "conjugate", "modular"}

DEFAULTS = {
    "q": "1/2",
    "blocks": [{"kind": "rotation", "lambda": "2", "count": 1}],
    "arithmetic": EXACT,
    "N": 5,
    "suites": list(SUITES),
    "tolerance": 1e-9,
    "seed": 0,
    "m_max": None,
    "Q": 1000,
    "eps": 1e-9,
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class RunConfig:
    q: object
    blocks: list
    arithmetic: str
    N: int
    suites: list
    tolerance: float
    seed: int
    m_max: int
    Q: int
    eps: float
    timings: bool = field(default=False, compare=False)

    def echo(self) -> dict:
        """Canonical echo for the report (no timing flag)."""
        return {
            "q": _echo_number(self.q),
            "blocks": [
                {k: (_echo_number(v) if k == "lambda" else v) for k, v in b.items()} for b in self.blocks
            ],
            "arithmetic": self.arithmetic,
            "N": self.N,
            "suites": list(self.suites),
            "tolerance": self.tolerance,
            "seed": self.seed,
            "m_max": self.m_max,
            "Q": self.Q,
            "eps": self.eps,
        }


def _echo_number(x):
    if isinstance(x, float):
        return x
    return arith.format_rational(x)


def _number(name: str, value, mode: str):
    try:
        return arith.real_scalar(value, mode)
    except (arith.ExactInputError, TypeError, ValueError) as exc:
        raise ConfigError(name, str(exc)) from None


def _int(name: str, value, low: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < low:
        raise ConfigError(name, f"expected an integer >= {low}, got {value!r}")
    return value


def _positive(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ConfigError(name, f"expected a positive number, got {value!r}")
    return float(value)


def validate(raw: dict) -> RunConfig:
    unknown = set(raw) - set(DEFAULTS) - {"timings"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration key")
    cfg = {**DEFAULTS, **raw}
    mode = cfg["arithmetic"]
    if mode not in MODES:
        raise ConfigError("arithmetic", f"expected one of {list(MODES)}, got {mode!r}")
    q = _number("q", cfg["q"], mode)
    if not -1 < q < 1:
        raise ConfigError("q", f"must lie in the open interval (-1, 1), got {cfg['q']!r}")

    blocks = cfg["blocks"]
    if not isinstance(blocks, list) or not blocks:
        raise ConfigError("blocks", "expected a non-empty list")
    clean = []
    for k, b in enumerate(blocks):
        where = f"blocks[{k}]"
        if not isinstance(b, dict):
            raise ConfigError(where, "expected an object")
        kind = b.get("kind")
        if kind == "fixed":
            clean.append({"kind": "fixed", "dim": _int(f"{where}.dim", b.get("dim", 1), 1)})
        elif kind == "rotation":
            if "lambda" not in b:
                raise ConfigError(f"{where}.lambda", "rotation block needs 'lambda'")
            lam = _number(f"{where}.lambda", b["lambda"], mode)
            if not lam > 1:
                raise ConfigError(f"{where}.lambda", f"must be > 1, got {b['lambda']!r}")
            count = _int(f"{where}.count", b.get("count", 1), 1)
            clean.append({"kind": "rotation", "lambda": lam, "count": count})
        else:
            raise ConfigError(f"{where}.kind", f"expected 'fixed' or 'rotation', got {kind!r}")

    N = _int("N", cfg["N"], 1)
    suites = cfg["suites"]
    if not isinstance(suites, list) or not suites:
        raise ConfigError("suites", "expected a non-empty list")
    for s in suites:
        if s not in SUITES:
            raise ConfigError("suites", f"unknown suite {s!r}")
    suites = [s for s in SUITES if s in suites]
    if N < 2 and NEEDS_N2 & set(suites):
        raise ConfigError("N", "dual, conjugate and modular suites need N >= 2")

    m_max = cfg["m_max"]
    top = (N + 1) // 2
    if m_max is None:
        m_max = min(3, top)
    m_max = _int("m_max", m_max, 1)
    if m_max > top:
        raise ConfigError("m_max", f"needs 2*m_max - 1 <= N (at most {top} for N={N})")

    return RunConfig(
        q=q,
        blocks=clean,
        arithmetic=mode,
        N=N,
        suites=suites,
        tolerance=_positive("tolerance", cfg["tolerance"]),
        seed=_int("seed", cfg["seed"], 0),
        m_max=m_max,
        Q=_int("Q", cfg["Q"], 1),
        eps=_positive("eps", cfg["eps"]),
        timings=bool(cfg.get("timings", False)),
    )


def load(path: str | None, overrides: dict | None = None) -> RunConfig:
    raw: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config", "top level must be an object")
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return validate(raw)


class Lcg:
    """64-bit linear congruential generator (Knuth's MMIX constants).

    ``x <- 6364136223846793005 x + 1442695040888963407 mod 2^64``; each draw
    returns the top 31 bits.  Kept explicit so other implementations can
    reproduce seeded runs bit for bit.
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        return self.next() % n


def random_gaussian_rational(rng: Lcg):
    """``(a + b i) / c`` with ``a, b`` in ``-3..3`` and ``c`` in ``1..4``."""
    a = rng.below(7) - 3
    b = rng.below(7) - 3
    c = 1 + rng.below(4)
    return arith.GaussianRational(arith.mpq(a, c), arith.mpq(b, c))


def random_invertible_matrix(rng: Lcg, d: int, mode: str = EXACT):
    """Seeded invertible Gaussian-rational ``d x d`` matrix (redrawn while singular)."""
    import numpy as np

    while True:
        X = np.array([[random_gaussian_rational(rng) for _ in range(d)] for _ in range(d)], dtype=object)
        if arith.determinant(X):
            return X if mode == EXACT else arith.to_complex(X)


def random_spectrum(rng: Lcg, max_len: int = 3, max_int: int = 12) -> list:
    """Seeded list of positive rationals ``p/q`` with ``p, q <= max_int``."""
    n = 1 + rng.below(max_len)
    return [arith.mpq(1 + rng.below(max_int), 1 + rng.below(max_int)) for _ in range(n)]
