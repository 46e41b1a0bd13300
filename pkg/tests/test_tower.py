from fractions import Fraction

import pytest
import sympy

from dynhub.errors import InvalidRho
from dynhub.exact import ExactOracle
from dynhub.graph import Delete, Insert
from dynhub.tower import (TowerConfig, build_tower, ell_schedule, preset_constant_stretch,
                          preset_loglog)

from oracles import mixed_trace, sandwich_ok


def replay(oracle, events):
    x = ExactOracle(oracle.n, oracle.graph.max_weight)
    out = []
    for e in events:
        if isinstance(e, Insert):
            oracle.insert(e.u, e.v, e.w)
            x.insert(e.u, e.v, e.w)
        elif isinstance(e, Delete):
            oracle.delete(e.u, e.v)
            x.delete(e.u, e.v)
        else:
            out.append((oracle.query(e.s, e.t_vertex), x.query(e.s, e.t_vertex)))
    return out, x.sentinel


def test_depth_zero_is_exact():
    o = build_tower(TowerConfig(0), 20, 9)
    assert isinstance(o, ExactOracle)
    pairs, _ = replay(o, mixed_trace(20, 100, 40, 9, 1))
    assert all(a == b for a, b in pairs)


@pytest.mark.parametrize("depth", [1, 2])
def test_sandwich(depth):
    cfg = TowerConfig(depth, k=2, seed=depth)
    assert cfg.declared_stretch == 8 ** depth
    o = build_tower(cfg, 32, 20, check=True)
    pairs, inf = replay(o, mixed_trace(32, 200, 60, 20, depth))
    for a, d in pairs:
        assert sandwich_ok(a, d, cfg.measured_bound, inf, o.sentinel)
    assert o.declared_stretch == cfg.declared_stretch
    assert o.stretch == pytest.approx(cfg.measured_bound)


def test_ell_schedule_exact():
    for m in [1, 2, 17, 100, 1000, 12345]:
        for j, got in enumerate(ell_schedule(m, 4), 1):
            jp = j - 1
            e = sympy.Rational(3 * jp + 1, 3 * jp + 4)
            assert got == max(1, int(sympy.ceiling(sympy.Integer(m) ** e)))
    assert TowerConfig(2, m_hint=100).phase_lengths == ell_schedule(100, 2)
    assert TowerConfig(3).phase_lengths == (8, 8, 8)


def test_config_round_trip():
    cfg = TowerConfig(3, k=3, epsilon=0.3, ells=(4, 9, 16), seed=7)
    assert TowerConfig.parse(cfg.serialize()) == cfg
    text = cfg.serialize()
    assert "ell_2=9" in text.splitlines()
    with pytest.raises(ValueError):
        TowerConfig.parse("depth=1\nbogus=3\n")
    with pytest.raises(ValueError):
        TowerConfig(2, ells=(3,))
    with pytest.raises(ValueError):
        TowerConfig(1, epsilon=0.5)


def test_preset_rho_one():
    cfg = preset_constant_stretch(1)
    assert (cfg.depth, cfg.k) == (4, 64)
    assert cfg.declared_stretch == 256 ** 4 == 4294967296


def test_preset_half():
    cfg = preset_constant_stretch(Fraction(1, 2))
    assert (cfg.depth, cfg.k) == (8, 256)
    assert cfg.declared_stretch == 1024 ** 8


@pytest.mark.parametrize("rho", [sympy.Integer(1), sympy.Rational(1, 2), sympy.Rational(1, 4)])
def test_substitution_identity(rho):
    i, k = 4 / rho, 64 / rho ** 2
    assert sympy.simplify((4 * k) ** i - (256 / rho ** 2) ** (4 / rho)) == 0
    cfg = preset_constant_stretch(Fraction(int(rho.p), int(rho.q)))
    assert cfg.declared_stretch == (256 / rho ** 2) ** (4 / rho)


def test_substitution_identity_symbolic():
    r = sympy.symbols("rho", positive=True)
    assert sympy.simplify((4 * (64 / r ** 2)) ** (4 / r) - (256 / r ** 2) ** (4 / r)) == 0


@pytest.mark.parametrize("bad", [0, -0.5, 1.5, "x"])
def test_invalid_rho(bad):
    with pytest.raises(InvalidRho):
        preset_constant_stretch(bad)


def test_loglog():
    cfg = preset_loglog(2 ** 16, depth=2, c=1)
    assert cfg.k == 2 and cfg.declared_stretch == 64
    assert preset_loglog(4).k >= 2
    ks = [preset_loglog(2 ** e, depth=2).k for e in range(2, 200, 7)]
    assert ks == sorted(ks)
    assert preset_loglog(2 ** 256, depth=2, c=3).k == 9
