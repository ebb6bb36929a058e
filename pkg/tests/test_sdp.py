import numpy as np
import pytest

from cbnorm import sdp


def scalar_problem(rhs):
    p = sdp.SdpProblem()
    w = p.add_nonneg_block(1)
    p.set_objective([("var", w, 0, 0, 1.0)])
    p.add_constraint([("var", w, 0, 0, 1.0)], rhs)
    return p


def psd_t_problem(scale=1.0):
    # minimize t s.t. [[t, s], [s, t]] >= 0 with s the off-diagonal datum
    p = sdp.SdpProblem()
    z = p.add_psd_block(2)
    w = p.add_nonneg_block(1)
    p.set_objective([("var", w, 0, 0, scale)])
    p.add_constraint([("re", z, 0, 0, 1.0), ("var", w, 0, 0, -1.0)], 0.0)
    p.add_constraint([("re", z, 1, 1, 1.0), ("var", w, 0, 0, -1.0)], 0.0)
    p.add_constraint([("re", z, 0, 1, 1.0)], 1.0)
    return p


class TestSolve:
    def test_scalar_equality(self):
        sol = sdp.solve(scalar_problem(3.0))
        assert sol.status == "optimal"
        assert abs(sol.primal_objective - 3.0) <= 1e-6

    def test_psd_determinant_boundary(self):
        # [[t,1],[1,t]] >= 0 iff t >= 1 by the 2x2 determinant
        sol = sdp.solve(psd_t_problem())
        assert sol.status == "optimal"
        assert abs(sol.primal_objective - 1.0) <= 1e-6

    def test_diagonal_forcing(self):
        p = sdp.SdpProblem()
        z = p.add_psd_block(2)
        p.set_objective([("re", z, 0, 0, 1.0), ("re", z, 1, 1, 1.0)])
        p.add_constraint([("re", z, 0, 0, 1.0)], 1.0)
        p.add_constraint([("re", z, 1, 1, 1.0)], 1.0)
        sol = sdp.solve(p)
        assert abs(sol.primal_objective - 2.0) <= 1e-6

    def test_optimal_contract(self):
        tols = sdp.Tolerances()
        sol = sdp.solve(psd_t_problem(), tols)
        assert abs(sol.gap) <= tols.gap_tol * (1.0 + abs(sol.primal_objective))
        check = sdp.verify_solution(psd_t_problem(), sol, tols)
        assert check.within(tols)

    def test_deterministic_bit_for_bit(self):
        a = sdp.solve(psd_t_problem())
        b = sdp.solve(psd_t_problem())
        assert a.primal_objective == b.primal_objective
        assert a.iterations == b.iterations
        assert np.array_equal(a.Z[0], b.Z[0])
        assert np.array_equal(a.y, b.y)

    def test_primal_infeasible_detected(self):
        sol = sdp.solve(scalar_problem(-1.0), sdp.Tolerances(max_iterations=100))
        assert sol.status == "infeasible"
        assert sol.infeasibility == "primal"

    def test_max_iterations_status(self):
        sol = sdp.solve(psd_t_problem(), sdp.Tolerances(max_iterations=3))
        assert sol.status == "max_iterations"
        assert sol.iterations == 3

    def test_weak_duality_on_optimal(self):
        tols = sdp.Tolerances()
        for rhs in (0.5, 2.0, 7.0):
            sol = sdp.solve(scalar_problem(rhs), tols)
            assert sol.dual_objective <= sol.primal_objective + tols.gap_tol * (
                1.0 + abs(sol.primal_objective)
            )

    def test_scaling_covariance(self):
        base = sdp.solve(psd_t_problem(1.0))
        scaled = sdp.solve(psd_t_problem(3.0))
        assert abs(scaled.primal_objective - 3.0 * base.primal_objective) <= 1e-9 * 3.0
        assert abs(scaled.dual_objective - 3.0 * base.dual_objective) <= 1e-8 * 3.0
        assert np.max(np.abs(scaled.Z[0] - base.Z[0])) <= 1e-6

    def test_complex_block_recovers_hermitian(self):
        p = sdp.SdpProblem()
        z = p.add_psd_block(2)
        w = p.add_nonneg_block(1)
        p.set_objective([("var", w, 0, 0, 1.0)])
        p.add_constraint([("re", z, 0, 0, 1.0), ("var", w, 0, 0, -1.0)], 0.0)
        p.add_constraint([("re", z, 1, 1, 1.0), ("var", w, 0, 0, -1.0)], 0.0)
        p.add_constraint([("re", z, 0, 1, 1.0)], 0.6)
        p.add_constraint([("im", z, 0, 1, 1.0)], 0.8)
        sol = sdp.solve(p)
        assert sol.status == "optimal"
        # |z_01| = 1, so t = 1 at the optimum
        assert abs(sol.primal_objective - 1.0) <= 1e-6
        assert np.max(np.abs(sol.Z[0] - sol.Z[0].conj().T)) <= 1e-8


class TestVerify:
    def test_verified_optimal(self):
        p = psd_t_problem()
        tols = sdp.Tolerances()
        chk = sdp.verify_solution(p, sdp.solve(p, tols), tols)
        assert chk.within(tols)

    def test_perturbed_solution_flagged(self):
        p = psd_t_problem()
        tols = sdp.Tolerances()
        sol = sdp.solve(p, tols)
        sol.Z[0] = sol.Z[0] + 1e-3 * np.eye(2)
        chk = sdp.verify_solution(p, sol, tols)
        assert chk.constraint_residual_rel > tols.feas_tol
        assert not chk.within(tols)

    def test_feasible_suboptimal_has_positive_gap(self):
        # hand-built feasible point t = 2 for the [[t,1],[1,t]] example
        p = psd_t_problem()
        sol = sdp.solve(p)
        hand = sdp.SdpSolution(
            status="optimal",
            Z=[np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex), np.array([2.0])],
            y=sol.y.copy(),
            S=[mat.copy() for mat in sol.S],
            primal_objective=2.0,
            dual_objective=sol.dual_objective,
            gap=2.0 - sol.dual_objective,
            iterations=0,
        )
        chk = sdp.verify_solution(p, hand, sdp.Tolerances())
        assert chk.constraint_residual <= 1e-12
        assert chk.gap >= 0.5

    def test_validation_rejects_overdetermined(self):
        p = sdp.SdpProblem()
        w = p.add_nonneg_block(1)
        p.set_objective([("var", w, 0, 0, 1.0)])
        p.add_constraint([("var", w, 0, 0, 1.0)], 1.0)
        p.add_constraint([("var", w, 0, 0, 2.0)], 2.0)
        with pytest.raises(ValueError, match="exceed"):
            p.validate()

    def test_term_validation(self):
        p = sdp.SdpProblem()
        z = p.add_psd_block(2)
        with pytest.raises(ValueError, match="diagonal"):
            p.add_constraint([("im", z, 0, 0, 1.0)], 0.0)
        with pytest.raises(ValueError, match="out of range"):
            p.add_constraint([("re", z, 0, 5, 1.0)], 0.0)
        with pytest.raises(ValueError, match="unknown block"):
            p.add_constraint([("re", 3, 0, 0, 1.0)], 0.0)
