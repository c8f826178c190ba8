import json

import pytest

from controlforge import Vote, make_election
from controlforge.cli import (
    DocumentParseError,
    ElectionDocument,
    exit_code_for,
    parse_election,
    parse_hitting_set,
    parse_partition,
    run_command,
    serialize_election,
    serialize_hitting_set,
    serialize_partition,
)
from controlforge.control import Partition, PartitionKind
from controlforge.hardness import HittingSetInstance, encode_hitting_set

PLURALITY_DOC = """\
# a small plurality race
system: plurality
candidates: a b
2 x a>b
b>a
"""

APPROVAL_DOC = """\
system: approval
candidates: p a
distinguished: p
{a}
"""


def write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return str(path)


class TestElectionDocuments:
    def test_parse_plurality_with_multiplicities(self):
        doc = parse_election(PLURALITY_DOC)
        assert doc.election == make_election(
            "plurality", "ab", [("ab", 2), ("ba", 1)]
        )
        assert doc.distinguished is None

    def test_parse_approval_subset_notation(self):
        doc = parse_election(APPROVAL_DOC)
        assert doc.election.votes.groups == ((Vote.approval("a"), 1),)
        assert doc.distinguished == "p"

    def test_empty_approval_ballot(self):
        doc = parse_election("system: approval\ncandidates: a\n{}\n")
        assert doc.election.votes.groups == ((Vote.approval(()), 1),)

    @pytest.mark.parametrize(
        "body,fragment",
        [
            ("a>a", "repeats"),
            ("a>z", "unknown candidate"),
            ("a", "incomplete"),
            ("{a}", "approval ballot in a linear-order election"),
        ],
    )
    def test_ballot_errors_carry_line_numbers(self, body, fragment):
        text = f"system: plurality\ncandidates: a b\n{body}\n"
        with pytest.raises(DocumentParseError) as err:
            parse_election(text)
        assert fragment in str(err.value)
        assert "line 3" in str(err.value)

    def test_votes_before_headers_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_election("a>b\nsystem: plurality\ncandidates: a b\n")

    def test_unknown_distinguished_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_election("system: plurality\ncandidates: a b\ndistinguished: z\n")

    def test_round_trip(self):
        for text in (PLURALITY_DOC, APPROVAL_DOC):
            doc = parse_election(text)
            again = parse_election(serialize_election(doc))
            assert again.election == doc.election
            assert again.distinguished == doc.distinguished


class TestPartitionDocuments:
    ELECTION = make_election("approval", "pa", [(("a",), 1)])

    def test_empty_first_block(self):
        partition = parse_partition(
            "block1: | block2: p a", PartitionKind.CANDIDATE, self.ELECTION
        )
        assert partition == Partition.of_candidates(set(), {"p", "a"})

    def test_overlap_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_partition("block1: p | block2: p a", PartitionKind.CANDIDATE, self.ELECTION)

    def test_omission_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_partition("block1: p | block2:", PartitionKind.CANDIDATE, self.ELECTION)

    def test_unknown_name_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_partition("block1: z | block2: p a", PartitionKind.CANDIDATE, self.ELECTION)

    def test_voter_indices(self):
        election = make_election("plurality", "ab", [("ab", 2), ("ba", 1)])
        partition = parse_partition("block1: 0 2 | block2: 1", PartitionKind.VOTER, election)
        assert partition == Partition.of_voters({0, 2}, {1})
        with pytest.raises(DocumentParseError):
            parse_partition("block1: 0 | block2: 1 3", PartitionKind.VOTER, election)

    def test_round_trip(self):
        partition = Partition.of_candidates({"a"}, {"p"})
        text = serialize_partition(partition, self.ELECTION)
        assert parse_partition(text, PartitionKind.CANDIDATE, self.ELECTION) == partition


class TestHittingSetDocuments:
    def test_parse_and_round_trip(self):
        text = "elements: b1 b2\nk: 1\nset: b1 b2\nset: b1\n"
        hs = parse_hitting_set(text)
        assert hs == HittingSetInstance(
            ("b1", "b2"), (frozenset({"b1", "b2"}), frozenset({"b1"})), 1
        )
        assert parse_hitting_set(serialize_hitting_set(hs)) == hs

    @pytest.mark.parametrize(
        "text",
        [
            "k: 1\nset: b1\n",
            "elements: b1\nset: b1\n",
            "elements: b1\nk: 0\n",
            "elements: b1\nk: 1\nset:\n",
            "elements: b1\nk: one\n",
        ],
    )
    def test_malformed_documents(self, text):
        with pytest.raises(DocumentParseError):
            parse_hitting_set(text)


def last_json(report):
    return json.loads(report.render().splitlines()[-1])


class TestRunCommand:
    def test_winners(self, tmp_path):
        path = write(tmp_path, "e.txt", PLURALITY_DOC)
        code, report = run_command(["winners", path])
        assert code == 0
        payload = last_json(report)
        assert payload["winners"] == ["a"]
        assert payload["scores"] == {"a": 2, "b": 1}

    def test_verify_true_and_false(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        partition = write(tmp_path, "p.txt", "block1: | block2: p a\n")
        code, report = run_command(
            ["verify", "--type", "DC-PC-TE-UW", "--partition", partition, election]
        )
        assert code == 0
        assert last_json(report)["outcome"] == "verified-true"
        code, report = run_command(
            ["verify", "--type", "CC-PC-TP-NUW", "--partition", partition, election]
        )
        assert code == 1
        assert last_json(report)["outcome"] == "verified-false"

    def test_evaluate_prints_trace_and_agrees_with_verify(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        partition = write(tmp_path, "p.txt", "block1: p | block2: a\n")
        code, report = run_command(
            ["evaluate", "--type", "DC-PC-TE-UW", "--partition", partition, election]
        )
        assert code == 0
        payload = last_json(report)
        assert payload["trace"]["final_winners"] == ["a"]
        code2, report2 = run_command(
            ["verify", "--type", "DC-PC-TE-UW", "--partition", partition, election]
        )
        assert payload["verdict"] == last_json(report2)["verdict"]
        assert (code == 0) == (code2 == 0)

    def test_candidate_flag_overrides_file(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        partition = write(tmp_path, "p.txt", "block1: | block2: p a\n")
        code, report = run_command(
            [
                "verify",
                "--type",
                "DC-PC-TE-UW",
                "--partition",
                partition,
                "--candidate",
                "a",
                election,
            ]
        )
        # a is the unique winner, so dethroning it by doing nothing fails.
        assert code == 1
        assert last_json(report)["focus"] == "a"

    def test_solve_auto_uses_immunity_algorithm(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        code, report = run_command(["solve", "--type", "DC-PC-TP-NUW", election])
        assert code == 0
        payload = last_json(report)
        assert payload["algorithm"] == "approval-immunity"
        assert payload["solution"] == "block1: | block2: p a\n"
        code, report = run_command(["solve", "--type", "CC-PC-TP-NUW", election])
        assert code == 1
        assert last_json(report)["algorithm"] == "approval-immunity"

    def test_solve_oracle_reports_call_count(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        code, report = run_command(
            ["solve", "--type", "DC-PC-TP-NUW", "--algorithm", "oracle", election]
        )
        assert code == 0
        payload = last_json(report)
        assert payload["algorithm"] == "oracle-binary-search"
        assert payload["oracle_calls"] <= 2 * 2 + 1

    def test_solve_poly_refused_off_scope(self, tmp_path):
        election = write(tmp_path, "e.txt", PLURALITY_DOC + "distinguished: a\n")
        code, report = run_command(
            ["solve", "--type", "DC-PC-TP-NUW", "--algorithm", "poly", election]
        )
        assert code == 2
        assert report.outcome == "error"

    def test_solve_requires_focus(self, tmp_path):
        election = write(tmp_path, "e.txt", PLURALITY_DOC)
        code, report = run_command(["solve", "--type", "DC-PC-TP-NUW", election])
        assert code == 2
        assert "distinguished" in report.payload["message"]

    def test_reduce_constructive_route(self, tmp_path):
        election = write(
            tmp_path,
            "e.txt",
            "system: plurality\ncandidates: p a b\ndistinguished: p\na>p>b\na>b>p\np>a>b\n",
        )
        solution = write(tmp_path, "s.txt", "block1: p | block2: a b\n")
        code, report = run_command(
            [
                "reduce",
                "--from",
                "DC-RPC-TP-NUW",
                "--to",
                "DC-PC-TP-NUW",
                "--solution",
                solution,
                election,
            ]
        )
        assert code == 0
        payload = last_json(report)
        assert payload["solution"] == "block1: p a | block2: b\n"
        assert payload["via_fallback"] is False

    def test_reduce_rejects_non_solution(self, tmp_path):
        election = write(
            tmp_path,
            "e.txt",
            "system: plurality\ncandidates: p a\ndistinguished: p\np>a\n",
        )
        solution = write(tmp_path, "s.txt", "block1: | block2: p a\n")
        code, report = run_command(
            [
                "reduce",
                "--from",
                "DC-RPC-TP-NUW",
                "--to",
                "DC-PC-TP-NUW",
                "--solution",
                solution,
                election,
            ]
        )
        assert code == 1
        assert report.outcome == "transfer-rejected"

    def test_reduce_without_route_is_usage_error(self, tmp_path):
        election = write(
            tmp_path,
            "e.txt",
            "system: plurality\ncandidates: p a\ndistinguished: p\np>a\n",
        )
        solution = write(tmp_path, "s.txt", "block1: | block2: p a\n")
        code, report = run_command(
            [
                "reduce",
                "--from",
                "CC-RPC-TE-UW",
                "--to",
                "CC-PC-TE-UW",
                "--solution",
                solution,
                election,
            ]
        )
        assert code == 2

    def test_collapse_scan_exit_codes(self):
        code, report = run_command(
            [
                "collapse-scan",
                "--pair",
                "DC-RPC-TP-NUW,DC-PC-TP-NUW",
                "--system",
                "plurality",
                "--max-candidates",
                "2",
                "--max-votes",
                "2",
            ]
        )
        assert code == 0
        assert last_json(report)["counterexample_count"] == 0
        code, report = run_command(
            [
                "collapse-scan",
                "--pair",
                "CC-PC-TE-UW,DC-PC-TE-UW",
                "--system",
                "approval",
                "--max-candidates",
                "2",
                "--max-votes",
                "2",
            ]
        )
        assert code == 1
        assert last_json(report)["counterexample_count"] > 0

    def test_collapse_scan_cap_env(self, monkeypatch):
        monkeypatch.setenv("CONTROL_FORGE_MAX_EVALS", "5")
        code, report = run_command(
            [
                "collapse-scan",
                "--pair",
                "DC-RPC-TP-NUW,DC-PC-TP-NUW",
                "--system",
                "plurality",
                "--max-candidates",
                "2",
                "--max-votes",
                "2",
            ]
        )
        assert code == 2
        assert "cap" in report.payload["message"]

    def test_encode_then_decode_hitting_set(self, tmp_path):
        hs_file = write(tmp_path, "hs.txt", "elements: b1\nk: 1\nset: b1\n")
        code, report = run_command(["encode-hs", hs_file])
        assert code == 0
        payload = last_json(report)
        doc = parse_election(payload["election"])
        hs = parse_hitting_set("elements: b1\nk: 1\nset: b1\n")
        assert doc.election == encode_hitting_set(hs).election
        assert doc.distinguished == "c"

        solution = write(tmp_path, "s.txt", "block1: b1 c w | block2:\n")
        code, report = run_command(["decode-hs", "--solution", solution, hs_file])
        assert code == 0
        assert last_json(report)["extracted"] == ["b1"]

    def test_decode_rejects_non_solution(self, tmp_path):
        hs_file = write(tmp_path, "hs.txt", "elements: b1\nk: 1\nset: b1\n")
        solution = write(tmp_path, "s.txt", "block1: b1 w | block2: c\n")
        code, report = run_command(["decode-hs", "--solution", solution, hs_file])
        assert code == 1
        assert report.outcome == "extraction-rejected"

    def test_parse_errors_exit_2(self, tmp_path):
        election = write(tmp_path, "e.txt", "system: plurality\ncandidates: a b\na>a\n")
        code, report = run_command(["winners", election])
        assert code == 2
        assert report.outcome == "error"
        code, _ = run_command(["winners", str(tmp_path / "missing.txt")])
        assert code == 2
        code, _ = run_command(["solve", "--type", "NOT-A-TYPE", election])
        assert code == 2

    def test_exit_code_is_a_function_of_the_outcome(self, tmp_path):
        election = write(tmp_path, "e.txt", APPROVAL_DOC)
        for args in (
            ["winners", election],
            ["solve", "--type", "DC-PC-TP-NUW", election],
            ["solve", "--type", "CC-PC-TP-NUW", election],
        ):
            code, report = run_command(args)
            assert code == exit_code_for(last_json(report)["outcome"])


class TestSerializationDefaults:
    def test_serialize_election_document(self):
        election = make_election("approval", "pa", [(("p", "a"), 2), ((), 1)])
        text = serialize_election(ElectionDocument(election, "p"))
        assert text == "system: approval\ncandidates: p a\ndistinguished: p\n2 x {p,a}\n{}\n"
