"""Recursive towers of composed oracles and their parameter presets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import InvalidRho
from .exact import ExactOracle
from .reduction import ComposedOracle, ReductionParams, scaled_a_factory

DEFAULT_ELL = 8


def ell_schedule(m: int, depth: int) -> Tuple[int, ...]:
    """``ell_j = ceil(m ** ((3(j-1)+1) / (3(j-1)+4)))`` for ``j = 1..depth``, in exact arithmetic."""
    out = []
    for j in range(1, depth + 1):
        jp = j - 1
        out.append(max(1, _ceil_root_power(m, 3 * jp + 1, 3 * jp + 4)))
    return tuple(out)


def _ceil_root_power(m: int, p: int, q: int) -> int:
    # smallest x with x^q >= m^p
    target = m ** p
    x = max(1, int(round(m ** (p / q))))
    while x ** q < target:
        x += 1
    while x > 1 and (x - 1) ** q >= target:
        x -= 1
    return x


@dataclass(frozen=True)
class TowerConfig:
    depth: int
    k: int = 2
    epsilon: float = 0.25
    ells: Tuple[int, ...] = ()
    seed: int = 0
    m_hint: Optional[int] = None
    hop_budget: Optional[int] = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.depth and self.k < 2:
            raise ValueError("k must be > 1")
        if not 0 < self.epsilon < 0.5:
            raise ValueError("epsilon must lie in (0, 1/2)")
        if self.ells and len(self.ells) != self.depth:
            raise ValueError(f"need {self.depth} phase lengths, got {len(self.ells)}")
        if any(x < 1 for x in self.ells):
            raise ValueError("phase lengths must be >= 1")

    @property
    def phase_lengths(self) -> Tuple[int, ...]:
        if self.ells:
            return tuple(self.ells)
        if self.m_hint is not None:
            return ell_schedule(self.m_hint, self.depth)
        return (DEFAULT_ELL,) * self.depth

    @property
    def alpha(self) -> float:
        return (2 * self.k - 1) * (1 + self.epsilon)

    @property
    def declared_stretch(self) -> int:
        return (4 * self.k) ** self.depth

    @property
    def measured_bound(self) -> float:
        return self.alpha ** self.depth

    def serialize(self) -> str:
        lines = [f"depth={self.depth}", f"k={self.k}", f"epsilon={self.epsilon!r}", f"seed={self.seed}"]
        lines += [f"ell_{j}={x}" for j, x in enumerate(self.phase_lengths, 1)]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "TowerConfig":
        kv = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"expected key=value, got {line!r}")
            kv[key.strip()] = val.strip()
        depth = int(kv.pop("depth"))
        ells = tuple(int(kv.pop(f"ell_{j}")) for j in range(1, depth + 1) if f"ell_{j}" in kv)
        cfg = cls(depth=depth, k=int(kv.pop("k", 2)), epsilon=float(kv.pop("epsilon", 0.25)),
                  seed=int(kv.pop("seed", 0)), ells=ells)
        if kv:
            raise ValueError(f"unknown keys: {sorted(kv)}")
        return cfg


def _level_factory(cfg: TowerConfig, level: int, check: bool):
    """Factory ``(n, max_weight, seed) -> oracle`` for the oracle at ``level``."""
    if level == 0:
        return lambda n, w, seed: ExactOracle(n, w, seed)
    inner = _level_factory(cfg, level - 1, check)
    a = scaled_a_factory(cfg.k, cfg.epsilon, cfg.hop_budget)
    params = ReductionParams(cfg.phase_lengths[level - 1], alpha=cfg.alpha, beta=cfg.alpha ** (level - 1))

    def make(n, w, seed):
        c = ComposedOracle(n, w, params, a, inner, seed=seed, check=check)
        c.declared_stretch = (4 * cfg.k) ** level
        return c
    return make


def build_tower(cfg: TowerConfig, n: int, max_weight: int, check: bool = False):
    """Depth 0 is the exact oracle; depth ``j`` composes a scaled labeling with depth ``j-1``."""
    return _level_factory(cfg, cfg.depth, check)(n, max_weight, cfg.seed)


def preset_constant_stretch(rho, seed: int = 0, **kw) -> TowerConfig:
    """``i = ceil(4/rho)`` levels with ``k = ceil(64/rho^2)``; ``rho`` in ``(0, 1]``."""
    try:
        r = Fraction(rho).limit_denominator(10 ** 9) if not isinstance(rho, Fraction) else rho
    except (TypeError, ValueError):
        raise InvalidRho(f"rho must be a number, got {rho!r}") from None
    if not 0 < r <= 1:
        raise InvalidRho(f"rho must lie in (0, 1], got {rho}")
    depth = math.ceil(4 / r)
    k = math.ceil(64 / r ** 2)
    return TowerConfig(depth=depth, k=k, seed=seed, **kw)


def preset_loglog(n: int, depth: int = 2, c: int = 1, seed: int = 0, **kw) -> TowerConfig:
    """Constant depth with ``k = ceil((log2 log2 n) ** (1/depth)) * c``, at least 2."""
    if n < 4:
        raise ValueError("need n >= 4")
    ll = math.log2(math.log2(n))
    k = math.ceil(ll ** (1.0 / depth) - 1e-12) * c
    return TowerConfig(depth=depth, k=max(2, k), seed=seed, **kw)
