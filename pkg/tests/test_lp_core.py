import numpy as np
import pytest

from invarcert.lp_core import LinearProgram, LpStatus, solve

from lp_oracle import enumerate_optimum


def test_bound_is_optimum():
    # minimize z subject to 0 <= z <= 1
    lp = LinearProgram(c=[1.0], A_in=np.zeros((0, 1)), b_in=[], bounds=[(0.0, 1.0)])
    out = solve(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.z[0] == pytest.approx(0.0, abs=1e-12)


def test_empty_feasible_set():
    lp = LinearProgram(c=[0.0], A_in=[[1.0]], b_in=[-1.0], bounds=[(0.0, None)])
    assert solve(lp).status is LpStatus.INFEASIBLE


def test_simplex_vertex_optimum():
    # minimize -z1 - z2 over the simplex z1 + z2 <= 1, z >= 0; the three
    # basic feasible points are (0,0), (1,0), (0,1) so the optimum is -1
    lp = LinearProgram(
        c=[-1.0, -1.0], A_in=[[1.0, 1.0]], b_in=[1.0], bounds=[(0.0, None)] * 2
    )
    out = solve(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.objective == pytest.approx(-1.0, abs=1e-9)


def test_unbounded():
    lp = LinearProgram(c=[-1.0], A_in=[[-1.0]], b_in=[0.0])
    assert solve(lp).status is LpStatus.UNBOUNDED


def test_equalities_and_free_variables():
    # z1 + z2 = 1 with free z; minimize z1 -> pushed to its inequality cap
    lp = LinearProgram(
        c=[1.0, 0.0],
        A_in=[[-1.0, 0.0]],
        b_in=[2.0],
        A_eq=[[1.0, 1.0]],
        b_eq=[1.0],
    )
    out = solve(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.z[0] == pytest.approx(-2.0, abs=1e-9)
    assert out.z[1] == pytest.approx(3.0, abs=1e-9)


def test_determinism_bit_identical():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(6, 3))
    b = rng.normal(size=6) + 1.0
    c = rng.normal(size=3)
    lp = LinearProgram(c=c, A_in=A, b_in=b, bounds=[(-4.0, 4.0)] * 3)
    first = solve(lp)
    second = solve(lp)
    assert first.z.tobytes() == second.z.tobytes()
    assert first.objective == second.objective
    assert first.iterations == second.iterations


def test_feasibility_certificate_on_random_optima():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        rows = int(rng.integers(1, 9))
        A = rng.normal(size=(rows, n))
        b = rng.normal(size=rows)
        c = rng.normal(size=n)
        lp = LinearProgram(c=c, A_in=A, b_in=b, bounds=[(-5.0, 5.0)] * n)
        out = solve(lp)
        if out.status is LpStatus.OPTIMAL:
            assert (A @ out.z - b).max() <= 1e-9
            assert np.all(np.abs(out.z) <= 5.0 + 1e-9)


def test_oracle_agreement_random_lps():
    # exhaustive basic-solution enumeration as the independent oracle
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(120):
        n = int(rng.integers(1, 5))
        rows = int(rng.integers(1, 9))
        A = rng.normal(size=(rows, n))
        b = rng.normal(size=rows)
        c = rng.normal(size=n)
        lower, upper = -3.0 * np.ones(n), 3.0 * np.ones(n)
        status, best = enumerate_optimum(c, A, b, lower, upper)
        lp = LinearProgram(c=c, A_in=A, b_in=b, bounds=list(zip(lower, upper)))
        out = solve(lp)
        if status == "infeasible":
            assert out.status is LpStatus.INFEASIBLE
        else:
            assert out.status is LpStatus.OPTIMAL
            assert out.objective == pytest.approx(best, abs=1e-7)
        checked += 1
    assert checked == 120


def test_rejects_nonfinite_data():
    with pytest.raises(ValueError):
        LinearProgram(c=[np.nan], A_in=[[1.0]], b_in=[1.0])


def test_dimension_mismatch():
    from invarcert.errors import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        LinearProgram(c=[1.0, 2.0], A_in=[[1.0, 0.0]], b_in=[1.0, 2.0])


def test_pure_bland_rule_agrees():
    rng = np.random.default_rng(29)
    for _ in range(25):
        n = int(rng.integers(1, 4))
        rows = int(rng.integers(1, 7))
        lp = LinearProgram(
            c=rng.normal(size=n),
            A_in=rng.normal(size=(rows, n)),
            b_in=rng.normal(size=rows),
            bounds=[(-3.0, 3.0)] * n,
        )
        default = solve(lp)
        bland = solve(lp, pivot_rule="bland")
        assert default.status is bland.status
        if default.status is LpStatus.OPTIMAL:
            assert bland.objective == pytest.approx(default.objective, abs=1e-7)
    with pytest.raises(ValueError):
        solve(lp, pivot_rule="steepest-edge")


def test_oracle_agreement_with_equalities():
    # double-inequality equality handling fuzzed against an external solver
    from scipy.optimize import linprog

    rng = np.random.default_rng(41)
    for _ in range(60):
        n = int(rng.integers(2, 5))
        A = rng.normal(size=(int(rng.integers(1, 6)), n))
        b = rng.normal(size=A.shape[0])
        A_eq = rng.normal(size=(1, n))
        b_eq = rng.normal(size=1)
        c = rng.normal(size=n)
        bounds = [(-4.0, 4.0)] * n
        lp = LinearProgram(c=c, A_in=A, b_in=b, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
        mine = solve(lp)
        ref = linprog(
            c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs"
        )
        if ref.status == 0:
            assert mine.status is LpStatus.OPTIMAL
            assert mine.objective == pytest.approx(ref.fun, abs=1e-6)
            assert np.abs(A_eq @ mine.z - b_eq).max() <= 1e-8
        elif ref.status == 2:
            assert mine.status is LpStatus.INFEASIBLE


def test_iteration_cap_raises():
    from invarcert.errors import MaxIterationsExceeded

    rng = np.random.default_rng(6)
    lp = LinearProgram(
        c=rng.normal(size=4),
        A_in=rng.normal(size=(8, 4)),
        b_in=rng.normal(size=8) + 1.0,
        bounds=[(-2.0, 2.0)] * 4,
    )
    with pytest.raises(MaxIterationsExceeded):
        solve(lp, max_iterations=1)
