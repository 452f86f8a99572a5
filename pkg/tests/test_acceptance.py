"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `[acceptance NN] PASS/FAIL` line (run with `pytest -s`
to see them on a green suite). The expected values come from closed forms
or from the independent oracles built inline below, never from the code
paths under test.
"""

import functools
import glob
import json
import os

import numpy as np
import pytest

from orlicz import (
    Constant,
    FnFamily,
    PointTable,
    Power,
    PowerLog,
    ScaledPower,
    SumYoung,
    WeightedPower,
    ando_profile,
    bounded_in_psi,
    biconjugate_check,
    cesaro_profile,
    check_properties,
    conjugate_table,
    construct_dominating_psi,
    counting_space,
    grid_space,
    lemma_bound_check,
    luxemburg_norm,
    rho,
    umr_holds,
    uniformly_more_rapid,
    weak_convergence_report,
    young_equality_at_derivative,
    young_gap,
)
from orlicz.cli import run_scenario
from orlicz.config import parse_family, parse_phi, parse_space
from orlicz.generators import escaping_bumps, growing_peaks, scaled_ball, unit_vectors

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "scenarios")
SCENARIOS = sorted(glob.glob(os.path.join(SCENARIO_DIR, "*.json")))


def criterion(number, label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance {number:02d}] FAIL - {label}")
                raise
            print(f"[acceptance {number:02d}] PASS - {label}")

        return wrapper

    return decorate


PARAMETRIC = [
    ("power_1.5", Constant(Power(1.5))),
    ("power_2", Constant(Power(2.0))),
    ("power_3", Constant(Power(3.0))),
    ("scaled_power", Constant(ScaledPower(0.5, 2.0))),
    ("power_log", Constant(PowerLog(2.0))),
    ("sum", Constant(SumYoung((Power(2.0), PowerLog(1.5))))),
]


@criterion(1, "Young inequality and equality at the right derivative")
def test_young_inequality_randomized():
    rng = np.random.default_rng(2024)
    grid = np.linspace(0.0, 12.0, 4001)
    spacing = grid[1] - grid[0]
    for name, gp in PARAMETRIC:
        ts = rng.uniform(0.0, 10.0, size=10_000)
        us = rng.uniform(0.0, 30.0, size=10_000)
        worst = 0.0
        for t, u in zip(ts, us):
            worst = min(worst, young_gap(gp, 1.0, float(t), float(u), t_grid=grid))
        assert worst >= -1e-9, f"{name}: young gap {worst}"
        for t in ts[:2000]:
            eq = young_equality_at_derivative(gp, 1.0, float(t), t_grid=grid)
            assert abs(eq.gap) <= max(1e-6, 2.0 * spacing * eq.u), f"{name} at t={t}"


@criterion(2, "biconjugate matches the original within 5 grid spacings")
def test_biconjugacy():
    for p in (1.5, 2.0, 3.0):
        gp = Constant(Power(p))
        t_grid = np.linspace(0.0, 4.0, 1601)
        u_max = float(np.asarray(gp.young.right_derivative(4.0))) + 1.0
        u_grid = np.linspace(0.0, u_max, 2401)
        spacing = max(t_grid[1] - t_grid[0], u_grid[1] - u_grid[0])
        assert biconjugate_check(gp, 1.0, t_grid, u_grid) <= 5.0 * spacing

    from orlicz import Tabulated

    rng = np.random.default_rng(7)
    for _ in range(8):
        nodes = np.concatenate([[0.0], np.sort(rng.uniform(0.2, 8.0, size=11))])
        slopes = np.cumsum(rng.uniform(0.1, 1.0, size=11))
        values = np.concatenate([[0.0], np.cumsum(slopes * np.diff(nodes))])
        gp = Constant(Tabulated(nodes, values))
        t_grid = np.union1d(nodes, np.linspace(0.0, nodes[-1], 801))
        u_grid = np.union1d(np.linspace(0.0, slopes[-1] + 1.0, 1201), slopes)
        spacing = max(np.diff(t_grid).max(), np.diff(u_grid).max())
        assert biconjugate_check(gp, 1.0, t_grid, u_grid) <= 5.0 * spacing


@criterion(3, "Luxemburg norm against sequence-norm and scalar root oracles")
def test_norm_oracles():
    rng = np.random.default_rng(42)
    for p in (1.5, 2.0, 4.0):
        for n in (3, 17, 64):
            sp = counting_space(n)
            gp = Constant(Power(p))
            f = rng.normal(size=n) * 2.5
            oracle = float(np.sum(np.abs(f) ** p) ** (1.0 / p))
            assert luxemburg_norm(gp, sp, f).value == pytest.approx(oracle, rel=1e-8)

    # variable exponents (2, 3) with f = (1, 1): bisect s^2 + s^3 = 1 directly
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid**2 + mid**3 <= 1.0:
            lo = mid
        else:
            hi = mid
    oracle = 1.0 / (0.5 * (lo + hi))
    assert oracle == pytest.approx(1.324718, abs=1e-6)
    sp = counting_space(2)
    gp = PointTable(sp.labels, (Power(2), Power(3)))
    assert luxemburg_norm(gp, sp, [1.0, 1.0]).value == pytest.approx(oracle, abs=1e-6)


@criterion(4, "unit-ball characterization on 1000 random functions")
def test_unit_ball_characterization():
    rng = np.random.default_rng(99)
    cases = [
        (counting_space(8), Constant(Power(2.0))),
        (counting_space(16), Constant(Power(4.0))),
        (grid_space(0.0, 2.0, 32), Constant(Power(1.5))),
        (counting_space(8), WeightedPower("identity", 2)),
    ]
    for sp, gp in cases:
        for _ in range(250):
            f = rng.normal(size=sp.n_atoms) * float(rng.uniform(0.05, 20.0))
            if not np.any(f):
                f[0] = 1.0
            norm = luxemburg_norm(gp, sp, f).value
            assert rho(gp, sp, f / norm) <= 1.0 + 1e-9
            assert rho(gp, sp, f / (norm * (1.0 - 1e-3))) > 1.0


@criterion(5, "modular-rate profiles monotone on the corpus, linear for squares")
def test_ando_profiles():
    for path in SCENARIOS:
        with open(path) as handle:
            cfg = json.load(handle)
        sp = parse_space(cfg["space"])
        gp = parse_phi(cfg["phi"], sp)
        family = parse_family(cfg["family"], sp, gp, base_dir=SCENARIO_DIR)
        profile = ando_profile(gp, sp, family, tol=np.inf)
        drops = profile.values[:-1] - profile.values[1:]  # lambda decreasing
        assert np.all(drops >= -1e-12), os.path.basename(path)

    sp = counting_space(3)
    gp = Constant(Power(2.0))
    family = FnFamily((np.array([3.0, 4.0, 0.0]),))
    bound = rho(gp, sp, family[0])
    lambdas = np.array([0.5, 0.1, 0.01])
    profile = ando_profile(gp, sp, family, lambdas, tol=np.inf)
    assert np.all(np.abs(profile.values - lambdas * bound) <= 1e-12)


@criterion(6, "dominating-function construction with dyadic certificates")
def test_dominating_psi_construction():
    sp = counting_space(16)
    gp = Constant(Power(2.0))
    family = scaled_ball(sp, gp, 16, seed=7)
    assert max(rho(gp, sp, member) for member in family) <= 1.0

    spec = construct_dominating_psi(gp, sp, family, depth=10)
    assert spec.lambdas == tuple(2.0 ** (-2 * n) for n in range(1, 11))

    t = np.linspace(0.0, 2.0, 100)
    psi_vals = np.asarray(spec.psi.value(1.0, t))
    assert np.max(np.abs(psi_vals - (1.0 - 2.0**-10) * t**2)) <= 1e-12

    assert bounded_in_psi(spec.psi, sp, family).in_unit_ball

    for n in range(1, 6):
        assert umr_holds(spec.psi, gp, sp, eps=2.0**-n, delta=spec.lambdas[n - 1])


@criterion(7, "negative control: t^4 does not uniformly dominate t^2 near zero")
def test_umr_negative_control():
    sp = counting_space(4)
    out = uniformly_more_rapid(Constant(Power(4.0)), Constant(Power(2.0)), sp, [1.0])
    assert out[1.0] is None


@criterion(8, "exceedance bound for squares; the non-uniform weight escapes it")
def test_lemma_bound():
    sp = counting_space(40)
    gp = Constant(Power(2.0))
    family = scaled_ball(sp, gp, 32, seed=13)
    for row in lemma_bound_check(gp, sp, family, 32):
        assert row.mu_exceedance <= 1.0 / row.n**2 + 1e-9

    grid = grid_space(0.0, 200.0, 20000)
    weighted = WeightedPower("inverse_square", 2)
    bumps = escaping_bumps(grid, weighted, 100)
    rows = lemma_bound_check(weighted, grid, bumps, 100)
    for row in rows:
        assert abs(row.mu_exceedance - 1.0) <= 0.02
    assert not check_properties(weighted, grid).constrained_ok


@criterion(9, "Cesàro means of disjoint unit vectors decay like 1/n")
def test_cesaro_decay():
    sp = counting_space(64)
    gp = Constant(Power(2.0))
    seq = unit_vectors(sp, gp, 64)
    table = cesaro_profile(gp, sp, seq)
    assert table.disjoint
    for n, value in table.rows:
        assert abs(value - 1.0 / n) <= 1e-12
    # explicit disjoint additivity cross-check at the deepest mean
    n = 64
    split = sum(rho(gp, sp, member / n) for member in seq)
    assert abs(table.rows[-1][1] - split) <= 1e-12 * max(1.0, split)


@criterion(10, "weak-convergence reports: escaping units pass, growing peaks fail")
def test_weak_convergence_reports():
    sp = counting_space(64)
    gp = Constant(Power(2.0))

    report = weak_convergence_report(gp, sp, unit_vectors(sp, gp, 64), np.zeros(64))
    assert report.passed
    profile = report.criterion_profile
    assert np.all(np.abs(profile.values - profile.parameters) <= 1e-12)

    report = weak_convergence_report(gp, sp, growing_peaks(sp, gp, 64), np.zeros(64))
    assert not report.passed
    assert not report.verdicts["modular_rate"]
    assert report.verdicts["set_integrals"]


@criterion(11, "CLI determinism and exit-status contract on the corpus")
def test_cli_contract(tmp_path):
    import contextlib
    import io

    quiet = contextlib.ExitStack()
    quiet.enter_context(contextlib.redirect_stdout(io.StringIO()))
    quiet.enter_context(contextlib.redirect_stderr(io.StringIO()))
    with quiet:
        _run_cli_contract(tmp_path)


def _run_cli_contract(tmp_path):
    for path in SCENARIOS:
        stem = os.path.splitext(os.path.basename(path))[0]
        out1 = tmp_path / f"{stem}_1"
        out2 = tmp_path / f"{stem}_2"
        assert run_scenario(path, out_dir=str(out1)) == 0, stem
        assert run_scenario(path, out_dir=str(out2)) == 0, stem
        for name in sorted(os.listdir(out1)):
            if not name.endswith(".csv"):
                continue
            with open(out1 / name, "rb") as h1, open(out2 / name, "rb") as h2:
                assert h1.read() == h2.read(), f"{stem}/{name}"

    for name in ("empty_family.json", "bad_schema.json", "unparseable.json"):
        path = os.path.join(SCENARIO_DIR, "invalid", name)
        assert run_scenario(path, out_dir=str(tmp_path / "invalid")) == 1, name

    failing = {
        "schema": 1,
        "name": "expect_miss",
        "space": {"space": "counting", "n": 3},
        "phi": {"family": "power", "p": 2},
        "family": {"values": [[3, 4, 0]]},
        "diagnostics": [{"kind": "norm", "expect": {"values": [1.0], "rtol": 1e-9}}],
    }
    miss = tmp_path / "expect_miss.json"
    miss.write_text(json.dumps(failing))
    assert run_scenario(str(miss), out_dir=str(tmp_path / "miss_out")) == 2
