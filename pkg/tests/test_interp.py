
import pytest

import hysim
from hysim import COMPLETED, FAILED, HALTED, SimConfig, parse, run
from hysim.lang import parse_expression
from hysim.interp import eval_expr

from oracle_kinematics import min_gap, simulate_acc, state_at


def run_src(source, **config):
    return run(parse(source), SimConfig(**config))


class TestEvalExpr:
    def test_gap_coefficient_by_hand(self):
        e = parse_expression("(0 - 3)/2 * 4 + (0 - 0) * 2 + (50 - 0)")
        assert eval_expr(e, {}) == 44.0

    def test_boolean_connective(self):
        assert eval_expr(parse_expression("true && false"), {}) is False

    def test_short_circuit_guards_sqrt(self):
        e = parse_expression("0 >= 1 && sqrt(0 - 1) > 0")
        assert eval_expr(e, {}) is False

    def test_short_circuit_or(self):
        e = parse_expression("1 >= 0 || 1 / 0 > 0")
        assert eval_expr(e, {}) is True

    def test_sqrt_of_negative_raises(self):
        with pytest.raises(hysim.EvalError):
            eval_expr(parse_expression("sqrt(0 - 1)"), {})

    def test_undefined_variable(self):
        with pytest.raises(hysim.UndefinedVariable):
            eval_expr(parse_expression("missing + 1"), {})


class TestRun:
    def test_linear_motion_halts_at_block_end(self):
        result = run_src("x := 0; v := 2; x' = v, v' = 0 for 3;", max_time=10)
        assert result.status == HALTED
        assert result.end_time == 3.0
        assert result.trajectory.samples[-1].state["x"] == pytest.approx(
            6.0, abs=1e-9)

    def test_empty_program(self):
        result = run_src("")
        assert result.status == HALTED
        assert result.end_time == 0.0
        assert result.trajectory.samples == (hysim.Sample(0.0, {}),)

    def test_assignments_take_no_time(self):
        result = run_src("x := 1; y := x + 1; z := y * 2;")
        assert result.status == HALTED
        assert result.end_time == 0.0
        assert result.trajectory.samples == (
            hysim.Sample(0.0, {"x": 1.0, "y": 2.0, "z": 4.0}),)

    def test_completed_run_covers_the_whole_grid(self):
        result = run_src("x := 0; x' = 1 for 100;", max_time=5,
                         sample_every=0.5)
        assert result.status == COMPLETED
        times = result.trajectory.times
        assert len(times) == 11
        for k, t in enumerate(times):
            assert abs(t - k * 0.5) <= 1e-9
        assert times == sorted(times)

    def test_grid_states_equal_integrator_states(self):
        result = run_src("x := 0; x' = 1 for 2;", max_time=10,
                         sample_every=0.25, ode_step=0.05)
        for t, state in result.trajectory.samples:
            assert state["x"] == pytest.approx(t, abs=1e-12)

    def test_right_continuous_at_assignment(self):
        result = run_src("x := 0; x' = 1 for 1; x := 99;",
                         max_time=10, sample_every=0.5)
        by_time = {round(t, 9): s for t, s in result.trajectory.samples}
        assert by_time[1.0]["x"] == 99.0
        assert by_time[0.5]["x"] == pytest.approx(0.5, abs=1e-12)

    def test_until_block_localizes_the_stop(self):
        result = run_src("v := 2; v' = 2 until v > 10;", max_time=20)
        assert result.status == HALTED
        assert result.end_time == pytest.approx(4.0, abs=1e-6)

    def test_until_already_true_takes_no_time(self):
        result = run_src("v := 50; v' = 2 until v > 10; v := 1;",
                         max_time=20)
        assert result.status == HALTED
        assert result.end_time == 0.0
        assert result.trajectory.samples[-1].state["v"] == 1.0

    def test_until_runs_to_horizon(self):
        result = run_src("v := 2; v' = 0 until v > 10;", max_time=5)
        assert result.status == COMPLETED
        assert result.end_time == 5.0

    def test_if_branches_on_current_state(self):
        result = run_src(
            "x := 0; if x < 1 then y := 10; else y := 20;")
        assert result.trajectory.samples[-1].state["y"] == 10.0

    def test_while_loop_with_time_progress(self):
        result = run_src(
            "x := 0; t := 0; while t < 3 do { x' = 1, t' = 1 for 1; }",
            max_time=10)
        assert result.status == HALTED
        assert result.end_time == pytest.approx(3.0, abs=1e-12)

    def test_zero_time_loop_fails(self):
        result = run(parse("x := 0; while x < 1 do { x := 0; }"),
                     SimConfig(zero_time_limit=500))
        assert result.status == FAILED
        assert "without advancing" in result.error

    def test_negative_duration_fails(self):
        result = run_src("x := 0; x' = 1 for -1;")
        assert result.status == FAILED
        assert "duration" in result.error

    def test_unset_initial_condition_fails(self):
        result = run_src("x' = 1 for 1;")
        assert result.status == FAILED
        assert "'x'" in result.error

    def test_undefined_derivative_variable_fails(self):
        result = run_src("x := 0; x' = y for 1;")
        assert result.status == FAILED
        assert "'y'" in result.error

    def test_failure_reports_position_and_time(self):
        result = run_src("x := 1; x' = 0 - 1 for 2; y := sqrt(x);",
                         max_time=10, sample_every=0.5)
        assert result.status == FAILED
        assert "sqrt" in result.error
        assert "line 1" in result.error
        assert "at simulated time 2" in result.error

    def test_nonfinite_assignment_fails(self):
        result = run_src("x := 1e308; y := x * 10;")
        assert result.status == FAILED
        assert "non-finite" in result.error

    def test_horizon_cuts_mid_block_silently(self):
        result = run_src("x := 0; x' = 1 for 100;", max_time=30)
        assert result.status == COMPLETED
        assert result.end_time == 30.0
        assert result.trajectory.samples[-1].state["x"] == pytest.approx(
            30.0, abs=1e-9)

    def test_no_sample_beyond_the_horizon(self):
        result = run_src("x := 0; x' = 1 for 100;", max_time=7)
        assert all(t <= 7.0 + 1e-9 for t in result.trajectory.times)

    def test_determinism(self):
        program = parse("x := 0; v := 3; x' = v, v' = 0 - 1 for 20;")
        config = SimConfig(max_time=10)
        assert run(program, config) == run(program, config)


class TestAccReference:
    def test_loop_boundary_positions(self, acc_results):
        follower = acc_results[3]  # al = 0
        assert follower.variant == {"al": 0.0}
        by_time = {round(t, 9): s for t, s in follower.trajectory.samples}
        oracle = [p.pf for p in simulate_acc(0.0)]
        expected_prefix = [0.0, 6.0, 24.0, 42.0, 48.0, 42.0, 36.0, 42.0, 48.0]
        assert oracle[:9] == expected_prefix
        for k, pf in enumerate(oracle):
            assert by_time[float(2 * k)]["pf"] == pytest.approx(pf, abs=1e-6)

    def test_follower_stays_behind_the_cap(self, acc_results):
        follower = acc_results[3]
        peak = max(s.state["pf"] for s in follower.trajectory.samples)
        assert peak <= 48.0 + 1e-6

    def test_braking_first_selected_at_third_iteration(self, acc_results):
        by_time = {round(t, 9): s
                   for t, s in acc_results[3].trajectory.samples}
        assert [by_time[float(2 * k)]["af"] for k in range(4)] == [
            3.0, 3.0, -3.0, -3.0]

    @pytest.mark.parametrize("al", [-3, -2, -1, 0])
    def test_never_passes_a_non_accelerating_leader(self, acc_results, al):
        result = acc_results[al + 3]
        gap = min(s.state["pl"] - s.state["pf"]
                  for s in result.trajectory.samples)
        assert gap > 0.0
        assert min_gap(float(al)) > 0.0  # the oracle agrees

    @pytest.mark.parametrize("al", [1, 2, 3])
    def test_accelerating_leader_matches_oracle_verdict(self, acc_results,
                                                        al):
        result = acc_results[al + 3]
        gap = min(s.state["pl"] - s.state["pf"]
                  for s in result.trajectory.samples)
        assert (gap > 0.0) == (min_gap(float(al)) > 0.0)

    def test_all_variants_complete_the_horizon(self, acc_results):
        assert [r.status for r in acc_results] == [COMPLETED] * 7
        for r in acc_results:
            assert r.end_time == 30.0
            assert len(r.trajectory.samples) == 301

    def test_every_sample_binds_the_same_variables(self, acc_results):
        for r in acc_results:
            key_sets = {frozenset(s.state) for s in r.trajectory.samples}
            assert len(key_sets) == 1

    def test_ct_against_closed_form_oracle(self, acc_results):
        for offset, result in enumerate(acc_results):
            al = float(offset - 3)
            by_time = {round(t, 9): s for t, s in result.trajectory.samples}
            for point in simulate_acc(al):
                got = by_time[point.t]["ct"]
                assert got == pytest.approx(point.ct, abs=1e-9), (al, point.t)

    def test_decision_sequence_against_oracle(self, acc_results):
        for offset, result in enumerate(acc_results):
            al = float(offset - 3)
            by_time = {round(t, 9): s for t, s in result.trajectory.samples}
            for point in simulate_acc(al):
                assert by_time[point.t]["af"] == point.af, (al, point.t)

    def test_mid_interval_states_against_oracle(self, acc_results):
        probes = [0.3, 1.7, 5.1, 9.9, 13.4, 21.8, 28.6]
        for offset, result in enumerate(acc_results):
            al = float(offset - 3)
            points = simulate_acc(al)
            by_time = {round(t, 9): s for t, s in result.trajectory.samples}
            for t in probes:
                pf, vf, pl, vl = state_at(points, al, t)
                got = by_time[t]
                assert got["pf"] == pytest.approx(pf, abs=1e-9), (al, t)
                assert got["vf"] == pytest.approx(vf, abs=1e-9), (al, t)
                assert got["pl"] == pytest.approx(pl, abs=1e-9), (al, t)
                assert got["vl"] == pytest.approx(vl, abs=1e-9), (al, t)


class TestUntilVariantDifferential:
    @pytest.mark.parametrize("accel", [2.0, 4.0, 6.0, 8.0, 10.0])
    def test_crossing_matches_uniform_acceleration_closed_form(self, accel):
        result = run_src(
            f"x := 0; v := 2; a := {accel:g};"
            f" x' = v, v' = a until v > 10;",
            max_time=20)
        assert result.status == HALTED
        t_star = (10.0 - 2.0) / accel
        assert result.end_time == pytest.approx(t_star, abs=1e-6)
        # the final sample's state matches the closed form at its own time
        t_last, final = result.trajectory.samples[-1]
        x_expected = 2.0 * t_last + 0.5 * accel * t_last * t_last
        assert final["x"] == pytest.approx(x_expected, abs=1e-9)
        assert final["v"] == pytest.approx(2.0 + accel * t_last, abs=1e-9)
