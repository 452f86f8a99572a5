import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orlicz import (
    Constant,
    Power,
    PowerLog,
    ScaledPower,
    SumYoung,
    Tabulated,
    biconjugate_check,
    conjugate_table,
    young_equality_at_derivative,
    young_gap,
)


def brute_force_conjugate(young, u, t_max=50.0, points=200001):
    """Dense linear scan oracle for sup_{t >= 0} (t u - phi(t))."""
    t = np.linspace(0.0, t_max, points)
    return float(np.max(t * u - np.asarray(young(t))))


GP_CASES = [
    Constant(Power(1.5)),
    Constant(Power(2.0)),
    Constant(Power(3.0)),
    Constant(ScaledPower(0.5, 2.0)),
    Constant(PowerLog(2.0)),
    Constant(SumYoung((Power(2.0), PowerLog(1.5)))),
]


class TestConjugateTable:
    def test_quadratic_self_duality(self):
        gp = Constant(ScaledPower(0.5, 2.0))
        oracle = brute_force_conjugate(gp.young, 1.0)
        assert oracle == pytest.approx(0.5, abs=1e-6)
        table = conjugate_table(gp, 1.0, [0.0, 1.0])
        assert table.values[1] == pytest.approx(0.5, rel=1e-12)

    def test_square_closed_form(self):
        gp = Constant(Power(2.0))
        table = conjugate_table(gp, 1.0, [0.0, 6.0])
        assert table.values[1] == pytest.approx(9.0, rel=1e-12)
        assert table.argmax_t[1] == pytest.approx(3.0, rel=1e-12)
        assert table.method == "closed_form"

    def test_value_at_zero(self):
        for gp in GP_CASES:
            table = conjugate_table(gp, 1.0, [0.0, 0.5], method="grid")
            assert table.values[0] == 0.0

    @pytest.mark.parametrize("gp", GP_CASES)
    def test_grid_matches_brute_force(self, gp):
        # t range must cover the maximiser: for p = 1.5 and u = 12 the
        # argmax sits at (u/1.5)^2 = 64
        u_grid = np.linspace(0.0, 12.0, 25)
        table = conjugate_table(
            gp, 1.0, u_grid, t_grid=np.linspace(0.0, 80.0, 8001), method="grid"
        )
        oracle = np.array([brute_force_conjugate(gp.young_at(1.0), u, t_max=80.0) for u in u_grid])
        assert np.allclose(table.values, oracle, rtol=1e-3, atol=1e-2)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_closed_form_cross_checked_against_grid(self, p):
        gp = Constant(Power(p))
        u_grid = np.linspace(0.0, 10.0, 21)
        auto = conjugate_table(gp, 1.0, u_grid)
        grid = conjugate_table(
            gp, 1.0, u_grid, t_grid=np.linspace(0.0, 80.0, 32001), method="grid"
        )
        assert auto.method == "closed_form" and grid.method == "grid"
        assert np.allclose(auto.values, grid.values, rtol=1e-4, atol=1e-4)
        # the grid sup can only undershoot the true supremum
        assert np.all(grid.values <= auto.values + 1e-9)

    def test_values_convex_nondecreasing(self):
        for gp in GP_CASES:
            table = conjugate_table(gp, 1.0, np.linspace(0.0, 8.0, 33), method="grid")
            assert np.all(np.diff(table.values) >= -1e-12)
            slopes = np.diff(table.values) / np.diff(table.u)
            assert np.all(np.diff(slopes) >= -1e-9)

    def test_truncation_flagged(self):
        gp = Constant(PowerLog(2.0))
        # u beyond the slope at the end of a short grid saturates the sweep
        table = conjugate_table(gp, 1.0, [0.0, 1e9], t_grid=np.linspace(0.0, 2.0, 101))
        assert table.truncated[1]
        assert not table.truncated[0]

    def test_argmax_nondecreasing(self):
        gp = Constant(SumYoung((Power(2.0), PowerLog(1.5))))
        table = conjugate_table(gp, 1.0, np.linspace(0.0, 20.0, 101), method="grid")
        live = table.argmax_t[table.values > 0]
        assert np.all(np.diff(live) >= 0)


class TestYoungGap:
    def test_equality_pair(self):
        gp = Constant(Power(2.0))
        assert young_gap(gp, 1.0, 3.0, 6.0) == pytest.approx(0.0, abs=1e-9)

    def test_u_zero(self):
        gp = Constant(Power(2.0))
        assert young_gap(gp, 1.0, 1.0, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_origin(self):
        gp = Constant(Power(2.0))
        assert young_gap(gp, 1.0, 0.0, 0.0) == 0.0

    @settings(max_examples=200, deadline=None)
    @given(
        idx=st.integers(0, len(GP_CASES) - 1),
        t=st.floats(0.0, 50.0),
        u=st.floats(0.0, 50.0),
    )
    def test_nonnegative(self, idx, t, u):
        assert young_gap(GP_CASES[idx], 1.0, t, u) >= -1e-9


class TestYoungEquality:
    def test_square(self):
        result = young_equality_at_derivative(Constant(Power(2.0)), 1.0, 3.0)
        assert result.u == 6.0
        assert result.gap == pytest.approx(0.0, abs=1e-9)

    def test_cube(self):
        # phi(1) = 1, phi'(1) = 3, conjugate at 3 is 2, so 1*3 = 1 + 2
        result = young_equality_at_derivative(Constant(Power(3.0)), 1.0, 1.0)
        assert result.u == 3.0
        assert result.gap == pytest.approx(0.0, abs=1e-9)

    def test_at_zero(self):
        result = young_equality_at_derivative(Constant(Power(2.0)), 1.0, 0.0)
        assert result.u == 0.0 and result.gap == 0.0

    @pytest.mark.parametrize("gp", GP_CASES)
    def test_gap_small_on_random_points(self, gp):
        rng = np.random.default_rng(5)
        grid = np.linspace(0.0, 12.0, 4001)
        spacing = grid[1] - grid[0]
        for t in rng.uniform(0.0, 10.0, size=50):
            result = young_equality_at_derivative(gp, 1.0, float(t), t_grid=grid)
            assert abs(result.gap) <= max(1e-6, 2.0 * spacing * result.u)

    @pytest.mark.parametrize("gp", GP_CASES)
    def test_derivative_bound_chain(self, gp):
        # phi*(phi'(t)) <= t phi'(t) <= phi(2t)
        young = gp.young_at(1.0)
        grid = np.linspace(0.0, 12.0, 4001)
        for t in np.geomspace(1e-4, 10.0, 40):
            u = float(np.asarray(young.right_derivative(t)))
            star = young_gap(gp, 1.0, float(t), u, t_grid=grid) - float(np.asarray(young(t))) + t * u
            assert star <= t * u + 1e-9
            assert t * u <= float(np.asarray(young(2.0 * t))) + 1e-9


def random_convex_table(rng, nodes=12, t_max=8.0):
    grid = np.concatenate([[0.0], np.sort(rng.uniform(0.2, t_max, size=nodes - 1))])
    slopes = np.cumsum(rng.uniform(0.1, 1.0, size=nodes - 1))
    values = np.concatenate([[0.0], np.cumsum(slopes * np.diff(grid))])
    return Tabulated(grid, values)


class TestBiconjugate:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_powers(self, p):
        gp = Constant(Power(p))
        t_grid = np.linspace(0.0, 4.0, 1601)
        u_max = float(np.asarray(gp.young.right_derivative(4.0))) + 1.0
        u_grid = np.linspace(0.0, u_max, 2401)
        spacing = max(t_grid[1] - t_grid[0], u_grid[1] - u_grid[0])
        assert biconjugate_check(gp, 1.0, t_grid, u_grid) <= 5.0 * spacing

    def test_random_convex_tables(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            young = random_convex_table(rng)
            gp = Constant(young)
            t_grid = np.union1d(young.grid, np.linspace(0.0, young.grid[-1], 801))
            slopes = np.diff(young.values) / np.diff(young.grid)
            u_grid = np.union1d(np.linspace(0.0, slopes[-1] + 1.0, 1201), slopes)
            spacing = max(np.diff(t_grid).max(), np.diff(u_grid).max())
            assert biconjugate_check(gp, 1.0, t_grid, u_grid) <= 5.0 * spacing
