"""Python bindings for the distributed facility location simulator."""

from distfl._core import (
    Instance,
    Solution,
    DistResult,
    Trace,
    ContributionGraph,
    generate_instance,
    make_instance,
    validate_instance,
    normalize,
    read_instance,
    write_instance,
    solution_cost,
    solve_distributed,
    greedy_sequential,
    brute_force_opt,
    dual_scaling_factor,
    verify_fact1,
    verify_lemma1,
    verify_lemma2,
    verify_dual_fitting,
    verify_cost_bracket,
    verify_selection_structure,
    write_trace,
    read_trace,
    facility_graph,
    facility_select,
    exact_expected_removals,
    expected_removal_bounds,
    random_contribution_graph,
)

__all__ = [
    "Instance",
    "Solution",
    "DistResult",
    "Trace",
    "ContributionGraph",
    "generate_instance",
    "make_instance",
    "validate_instance",
    "normalize",
    "read_instance",
    "write_instance",
    "solution_cost",
    "solve_distributed",
    "greedy_sequential",
    "brute_force_opt",
    "dual_scaling_factor",
    "verify_fact1",
    "verify_lemma1",
    "verify_lemma2",
    "verify_dual_fitting",
    "verify_cost_bracket",
    "verify_selection_structure",
    "write_trace",
    "read_trace",
    "facility_graph",
    "facility_select",
    "exact_expected_removals",
    "expected_removal_bounds",
    "random_contribution_graph",
]
