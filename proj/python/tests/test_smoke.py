import math

import pytest

import novikov_lab as nl


def grid(n):
    return [j / n for j in range(n)]


def test_presets_and_version():
    assert nl.__version__
    assert "reference" in nl.preset_names()
    u = nl.preset_field("constant", 32)
    assert u == [1.5] * 32


def test_helmholtz_roundtrip():
    u = [math.sin(2 * math.pi * x) + 0.3 * math.cos(6 * math.pi * x) for x in grid(64)]
    back = nl.helmholtz_inverse(nl.helmholtz(u))
    assert max(abs(a - b) for a, b in zip(u, back)) < 1e-13
    # Lambda^2 sin(2 pi x) = (1 + 4 pi^2) sin(2 pi x)
    s = [math.sin(2 * math.pi * x) for x in grid(32)]
    m = nl.helmholtz(s)
    assert m[8] == pytest.approx(1 + 4 * math.pi**2, rel=1e-12)


def test_operator_consistency():
    u = [0.4 * math.cos(2 * math.pi * x) + 0.1 * math.sin(4 * math.pi * x) for x in grid(128)]
    lhs = nl.helmholtz(nl.rhs_nonlocal(u))
    rhs = nl.rhs_momentum(u)
    scale = max(abs(v) for v in rhs)
    assert max(abs(a - b) for a, b in zip(lhs, rhs)) < 1e-9 * scale


def test_bad_input_raises():
    with pytest.raises(ValueError):
        nl.derivative([0.0] * 7, 1)
    with pytest.raises(nl.NovikovError):
        nl.derivative([0.0] * 8, 9)
    with pytest.raises(nl.ConfigError):
        nl.solve("[grid]\nn = 64\n")


def test_solve_constant_preset():
    text = nl.preset_config("constant")
    assert nl.normalize_config(text) == text
    r = nl.solve(text)
    assert r["outcome"] == "completed"
    assert r["final_time"] == pytest.approx(1.0)
    assert max(abs(v - 1.5) for v in r["u"][-1]) < 1e-12


def test_run_writes_files(tmp_path):
    text = nl.preset_config("positive").replace("t_end = 1\n", "t_end = 0.05\n")
    s = nl.run(text, tmp_path / "out")
    assert s["outcome"] == "completed"
    for f in s["files"]:
        assert (tmp_path / "out" / f).exists()


def test_bihamiltonian_and_radius():
    m = [1 + 0.5 * math.cos(2 * math.pi * x) for x in grid(256)]
    r = nl.bihamiltonian_check(nl.from_momentum(m))
    assert r["gateaux_error_h2"] < 1e-7
    assert r["translation_residual_b2"] < 1e-3
    planted = [sum(2 * math.exp(-k) * math.cos(2 * math.pi * k * x) for k in range(1, 32)) for x in grid(64)]
    est = nl.fit_radius(planted)
    assert est["defined"]
    assert est["sigma"] == pytest.approx(1 / (2 * math.pi), rel=1e-5)
    assert nl.es_norm([1.0] * 32, 0.2, 30) == 0.0
