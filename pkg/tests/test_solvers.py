import pytest
from hypothesis import given, settings

from controlforge import (
    ControlInstance,
    ControlTypeId,
    Partition,
    System,
    make_election,
    verify_solution,
)
from controlforge.control import PartitionKind
from controlforge.solvers import (
    BruteForceOracle,
    OracleInconsistencyError,
    Universe,
    UniverseTooLargeError,
    UnsupportedAlgorithmError,
    bipartitions,
    brute_force_search,
    cc_rpc_te_nuw_search_approval,
    collapse_pairs,
    collapse_scan,
    collapses_with,
    enumerate_partitions,
    estimated_scan_evaluations,
    immunity_search_approval,
    instance_count,
    iter_instances,
    lex_min_search_with_oracle,
    partition_bits,
    partition_from_bits,
)

from election_strategies import control_instances, control_types

T = ControlTypeId.parse


def approval_instance(candidates, approvals, focus):
    election = make_election("approval", candidates, [(a, m) for a, m in approvals])
    return ControlInstance(election, focus)


class TestEnumeration:
    def test_two_candidate_order(self):
        instance = approval_instance("ab", [], "a")
        stream = [
            (p.first, p.second)
            for p in enumerate_partitions(instance, PartitionKind.CANDIDATE)
        ]
        assert stream == [
            (frozenset(), frozenset("ab")),
            (frozenset("b"), frozenset("a")),
            (frozenset("a"), frozenset("b")),
            (frozenset("ab"), frozenset()),
        ]

    def test_empty_item_set_has_single_partition(self):
        assert list(bipartitions(())) == [(frozenset(), frozenset())]

    def test_three_voters_give_eight_partitions(self):
        election = make_election("plurality", "ab", [("ab", 3)])
        instance = ControlInstance(election, "a")
        stream = list(enumerate_partitions(instance, PartitionKind.VOTER))
        assert len(stream) == 8
        assert len(set(stream)) == 8

    def test_bits_round_trip(self):
        instance = approval_instance("abc", [], "a")
        for partition in enumerate_partitions(instance, PartitionKind.CANDIDATE):
            bits = partition_bits(partition, instance)
            assert partition_from_bits(instance, PartitionKind.CANDIDATE, bits) == partition


class TestBruteForce:
    def test_immune_cc_instance_has_no_solution(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        assert brute_force_search(T("CC-PC-TP-NUW"), instance).solution is None

    def test_least_encoding_wins(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        outcome = brute_force_search(T("DC-PC-TP-NUW"), instance)
        assert outcome.solution == Partition.of_candidates(set(), {"p", "a"})

    def test_lone_candidate_cannot_be_dethroned(self):
        instance = approval_instance("p", [], "p")
        assert brute_force_search(T("DC-PC-TE-UW"), instance).solution is None

    @given(control_instances(max_candidates=3, max_votes=3), control_types)
    def test_solutions_always_verify(self, instance, control_type):
        outcome = brute_force_search(control_type, instance)
        if outcome.found:
            assert verify_solution(control_type, instance, outcome.solution)

    def test_cache_is_shared(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        cache = {}
        first = brute_force_search(T("DC-PC-TP-NUW"), instance, cache)
        assert (T("DC-PC-TP-NUW"), instance) in cache
        second = brute_force_search(T("DC-PC-TP-NUW"), instance, cache)
        assert first == second


class TestImmunitySearch:
    def test_dethroning_a_non_unique_winner(self):
        instance = approval_instance("pa", [(("p", "a"), 1), (("a",), 1)], "p")
        outcome = immunity_search_approval(T("DC-PC-TE-UW"), instance)
        assert outcome.solution == Partition.of_candidates(set(), {"p", "a"})

    def test_nonwinner_stays_a_nonwinner(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        assert immunity_search_approval(T("CC-PC-TP-NUW"), instance).solution is None

    def test_sole_candidate_is_already_unique_winner(self):
        instance = approval_instance("p", [], "p")
        outcome = immunity_search_approval(T("CC-PC-TP-UW"), instance)
        assert outcome.solution == Partition.of_candidates(set(), {"p"})

    def test_rejects_wrong_system(self):
        election = make_election("plurality", "pa", [("pa", 1)])
        with pytest.raises(UnsupportedAlgorithmError):
            immunity_search_approval(T("DC-PC-TE-UW"), ControlInstance(election, "p"))

    def test_rejects_uncovered_type(self):
        instance = approval_instance("pa", [], "p")
        with pytest.raises(UnsupportedAlgorithmError):
            immunity_search_approval(T("DC-PC-TE-NUW"), instance)


class TestIsolationSearch:
    def test_two_way_tie_at_the_top(self):
        instance = approval_instance("pab", [(("a", "b"), 2)], "p")
        outcome = cc_rpc_te_nuw_search_approval(instance)
        assert outcome.solution == Partition.of_candidates({"p"}, {"a", "b"})
        assert verify_solution(T("CC-RPC-TE-NUW"), instance, outcome.solution)

    def test_unique_leader_blocks_the_focus(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        assert cc_rpc_te_nuw_search_approval(instance).solution is None

    def test_focus_at_the_top(self):
        instance = approval_instance("pa", [(("p",), 1)], "p")
        outcome = cc_rpc_te_nuw_search_approval(instance)
        assert outcome.solution == Partition.of_candidates({"p"}, {"a"})
        assert verify_solution(T("CC-RPC-TE-NUW"), instance, outcome.solution)

    def test_rejects_wrong_system(self):
        election = make_election("veto", "pa", [("pa", 1)])
        with pytest.raises(UnsupportedAlgorithmError):
            cc_rpc_te_nuw_search_approval(ControlInstance(election, "p"))


class TestOracleSearch:
    def test_matches_brute_force_on_feasible_instance(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        oracle = BruteForceOracle()
        outcome = lex_min_search_with_oracle(T("DC-PC-TP-NUW"), instance, oracle)
        assert outcome.solution == Partition.of_candidates(set(), {"p", "a"})

    def test_infeasible_costs_one_call(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        oracle = BruteForceOracle()
        outcome = lex_min_search_with_oracle(T("CC-PC-TP-NUW"), instance, oracle)
        assert outcome.solution is None
        assert oracle.calls == 1

    def test_call_budget_three_candidates(self):
        instance = approval_instance("pab", [(("a", "b"), 2)], "p")
        oracle = BruteForceOracle()
        outcome = lex_min_search_with_oracle(T("CC-RPC-TE-NUW"), instance, oracle)
        assert outcome.found
        assert oracle.calls <= 2 * 3 + 1

    def test_inconsistent_oracle_detected(self):
        instance = approval_instance("pa", [(("a",), 1)], "p")
        liar = lambda control_type, inst, prefix: True
        with pytest.raises(OracleInconsistencyError):
            lex_min_search_with_oracle(T("CC-PC-TP-NUW"), instance, liar)

    @settings(max_examples=40)
    @given(control_instances(max_candidates=3, max_votes=3), control_types)
    def test_agrees_with_brute_force(self, instance, control_type):
        oracle = BruteForceOracle()
        via_oracle = lex_min_search_with_oracle(control_type, instance, oracle)
        direct = brute_force_search(control_type, instance)
        assert via_oracle == direct


class TestCollapseScan:
    def test_general_tp_pair_agrees_on_small_universe(self):
        universe = Universe(System.PLURALITY, 2, 2)
        report = collapse_scan(T("DC-RPC-TP-NUW"), T("DC-PC-TP-NUW"), universe)
        assert report.agree
        assert report.instances_checked == instance_count(universe)

    def test_cc_vs_dc_disagree(self):
        universe = Universe(System.APPROVAL, 2, 2)
        report = collapse_scan(T("CC-PC-TE-UW"), T("DC-PC-TE-UW"), universe)
        assert not report.agree
        sample = report.counterexamples[0]
        assert verify_solution(sample.containing_type, sample.instance, sample.witness)

    def test_zero_candidates_is_an_empty_universe(self):
        universe = Universe(System.PLURALITY, 0, 2)
        report = collapse_scan(T("DC-RPC-TP-NUW"), T("DC-PC-TP-NUW"), universe)
        assert report.instances_checked == 0
        assert report.agree

    def test_oversized_universe_is_refused(self):
        universe = Universe(System.APPROVAL, 3, 3)
        with pytest.raises(UniverseTooLargeError) as err:
            collapse_scan(T("DC-PC-TE-UW"), T("DC-RPC-TE-UW"), universe, max_evaluations=10)
        assert err.value.estimate > 10

    def test_sequence_mode_enumerates_orderings(self):
        multisets = Universe(System.PLURALITY, 2, 2)
        sequences = Universe(System.PLURALITY, 2, 2, as_multisets=False)
        assert instance_count(sequences) > instance_count(multisets)
        assert sum(1 for _ in iter_instances(sequences)) == instance_count(sequences)

    def test_estimate_counts_both_types(self):
        universe = Universe(System.PLURALITY, 2, 2)
        single = estimated_scan_evaluations((T("DC-PC-TE-UW"),), universe)
        double = estimated_scan_evaluations((T("DC-PC-TE-UW"), T("DC-RPC-TE-UW")), universe)
        assert double == 2 * single


class TestCollapseRegistry:
    def test_pair_counts_per_system(self):
        assert len(collapse_pairs(System.PLURALITY)) == 7
        assert len(collapse_pairs(System.VETO)) == 8
        assert len(collapse_pairs(System.APPROVAL)) == 21

    def test_membership_queries(self):
        assert collapses_with(System.PLURALITY, T("DC-RPC-TP-NUW"), T("DC-PC-TP-NUW"))
        assert collapses_with(System.APPROVAL, T("DC-PC-TP-UW"), T("DC-RPC-TE-NUW"))
        assert not collapses_with(System.PLURALITY, T("DC-PC-TP-UW"), T("DC-PC-TE-UW"))
        assert not collapses_with(System.VETO, T("CC-PC-TE-UW"), T("CC-RPC-TE-UW"))

    def test_universe_iteration_matches_count(self):
        for system in System:
            universe = Universe(system, 2, 2)
            assert sum(1 for _ in iter_instances(universe)) == instance_count(universe)
