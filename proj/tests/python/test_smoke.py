"""Smoke tests for the python bindings."""

from fractions import Fraction

import distfl


def test_generate_validate_roundtrip(tmp_path):
    inst = distfl.generate_instance(3, 5, 64, 0, 32, seed=11)
    assert inst.num_facilities == 3
    assert inst.num_clients == 5
    assert distfl.validate_instance(inst) == []

    again = distfl.generate_instance(3, 5, 64, 0, 32, seed=11)
    assert inst == again

    path = tmp_path / "inst.fl"
    distfl.write_instance(inst, str(path))
    assert distfl.read_instance(str(path)) == inst


def test_costs_are_exact_fractions():
    inst = distfl.generate_instance(2, 3, 48, 1, 9, seed=4)
    for f in inst.opening_costs:
        assert isinstance(f, Fraction)
    opt = distfl.brute_force_opt(inst)
    assert isinstance(distfl.solution_cost(opt, inst), Fraction)


def test_solve_verify_and_ratio():
    eps = Fraction(1, 2)
    for seed in range(6):
        inst = distfl.generate_instance(1 + seed % 4, 1 + seed % 6, 64, 0, 64, seed=seed)
        result = distfl.solve_distributed(inst, eps, seed=seed)
        assert set(result.solution.assignment) <= set(result.solution.open)

        cost = distfl.solution_cost(result.solution, inst)
        opt = distfl.solution_cost(distfl.brute_force_opt(inst), inst)
        assert cost <= opt * distfl.dual_scaling_factor(eps)

        assert distfl.verify_fact1(result.trace, inst) == []
        assert distfl.verify_lemma1(result.trace, inst, eps) == []
        assert distfl.verify_lemma2(result.trace, inst, eps) == []
        assert distfl.verify_dual_fitting(result.trace, inst, eps) == []
        assert distfl.verify_cost_bracket(result.trace, inst, eps)["pass"]
        assert distfl.verify_selection_structure(result.trace, inst) == []


def test_determinism_of_distributed_runs():
    inst = distfl.generate_instance(4, 6, 64, 0, 64, seed=21)
    a = distfl.solve_distributed(inst, "1/10", seed=5)
    b = distfl.solve_distributed(inst, "1/10", seed=5)
    assert a.solution == b.solution
    assert a.round_count == b.round_count
    assert a.trace.final_alphas == b.trace.final_alphas


def test_greedy_matches_oracle_example():
    # two unit-cost clients paying one unit-cost facility: event at alpha 3/2
    inst = distfl.make_instance(["1"], [["1", "1"]])
    assert distfl.validate_instance(inst) == []
    sol, alphas = distfl.greedy_sequential(inst)
    assert alphas == [Fraction(3, 2), Fraction(3, 2)]
    assert distfl.solution_cost(sol, inst) == Fraction(3)


def test_trace_file_roundtrip(tmp_path):
    inst = distfl.generate_instance(3, 4, 64, 0, 16, seed=8)
    result = distfl.solve_distributed(inst, "1/2", seed=8)
    path = tmp_path / "trace.txt"
    distfl.write_trace(result.trace, str(path))
    loaded = distfl.read_trace(str(path))
    assert loaded.final_alphas == result.trace.final_alphas
    assert loaded.connections == result.trace.connections


def test_selection_process():
    g = distfl.ContributionGraph(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
    assert distfl.facility_graph(g) == [[1], [0]]
    clients_exp, edges_exp = distfl.exact_expected_removals(g)
    assert clients_exp == Fraction(2)
    assert edges_exp == Fraction(3)
    stats = distfl.facility_select(g, seed=1)
    assert stats[0]["removed_edges"] == 3

    big = distfl.random_contribution_graph(20, 40, 120, seed=7)
    rows = distfl.facility_select(big, seed=3)
    assert rows[-1]["F_t"] == rows[-1]["removed_facilities"]
    clients_lb, edges_lb, sqrt_lb = distfl.expected_removal_bounds(big)
    c_exp, e_exp = distfl.exact_expected_removals(big)
    assert c_exp >= clients_lb
    assert e_exp >= Fraction(big.num_facilities)
