"""Command-line surface: text formats and subcommands wiring every module.

Formats (UTF-8, ``#`` starts a comment anywhere on a line):

* election documents::

      system: plurality          # or veto / approval
      candidates: a b c
      distinguished: a           # optional
      2 x a>b>c                  # optional "<mult> x " prefix
      {a,c}                      # approval ballots use subset notation

* partition documents: ``block1: a c | block2: b`` (candidates) or
  ``block1: 0 2 | block2: 1`` (canonical voter indices).
* hitting-set documents: ``elements: b1 b2``, ``k: 1``, one ``set: b1``
  line per set.

Every command prints a human-readable report followed by one JSON line that
alone suffices to re-verify the outcome; the exit code is a function of the
JSON ``outcome`` field (0 success / solution found / verified / no
counterexamples, 1 negative answer, 2 usage or parse error).
"""

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from .control import (
    ControlInstance,
    ControlTypeId,
    Partition,
    PartitionKind,
    check_solution,
)
from .elections import (
    Election,
    ElectionError,
    System,
    Vote,
    VoteCollection,
    scores,
    vote_kind_for,
    winners,
)
from .hardness import (
    HittingSetInstance,
    InvalidInstanceError,
    encode_hitting_set,
    extract_hitting_set,
)
from .reductions import TransferError, find_transfer_chain
from .solvers import (
    BruteForceOracle,
    CC_RPC_TE_NUW,
    DEFAULT_MAX_EVALS,
    IMMUNE_APPROVAL_TYPES,
    Universe,
    UniverseTooLargeError,
    brute_force_search,
    cc_rpc_te_nuw_search_approval,
    collapse_scan,
    encoding_length,
    immunity_search_approval,
    lex_min_search_with_oracle,
)

MAX_EVALS_ENV = "CONTROL_FORGE_MAX_EVALS"


class DocumentParseError(ValueError):
    def __init__(self, message: str, line: "int | None" = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Election documents


@dataclass(frozen=True)
class ElectionDocument:
    """A parsed election plus the optional distinguished candidate."""

    election: Election
    distinguished: "str | None" = None
    vote_lines: tuple[int, ...] = field(default=(), compare=False)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


_MULT_RE = re.compile(r"^(\d+)\s*x\s+(.*)$")


def _parse_ballot(
    text: str, kind, candidates: tuple[str, ...], lineno: int
) -> Vote:
    known = set(candidates)
    if text.startswith("{"):
        if not text.endswith("}"):
            raise DocumentParseError(f"unterminated approval ballot {text!r}", lineno)
        body = text[1:-1].strip()
        names = [t.strip() for t in body.split(",")] if body else []
        if kind is not vote_kind_for(System.APPROVAL):
            raise DocumentParseError(
                "approval ballot in a linear-order election", lineno
            )
    else:
        names = [t.strip() for t in text.split(">")]
        if kind is vote_kind_for(System.APPROVAL):
            raise DocumentParseError(
                "linear-order ballot in an approval election", lineno
            )
    for name in names:
        if not name:
            raise DocumentParseError(f"empty candidate name in ballot {text!r}", lineno)
        if name not in known:
            raise DocumentParseError(f"unknown candidate {name!r}", lineno)
    if len(set(names)) != len(names):
        raise DocumentParseError(f"ballot {text!r} repeats a candidate", lineno)
    if not text.startswith("{") and len(names) != len(candidates):
        raise DocumentParseError(
            f"incomplete ballot {text!r}: rank all {len(candidates)} candidates", lineno
        )
    return Vote(kind, tuple(names))


def parse_election(text: str) -> ElectionDocument:
    system = None
    candidates = None
    distinguished = None
    groups: list[tuple[Vote, int]] = []
    vote_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        header = re.match(r"^(system|candidates|distinguished)\s*:\s*(.*)$", line)
        if header:
            key, value = header.group(1), header.group(2).strip()
            if key == "system":
                try:
                    system = System(value.lower())
                except ValueError:
                    raise DocumentParseError(f"unknown system {value!r}", lineno) from None
            elif key == "candidates":
                names = tuple(value.split())
                if not names:
                    raise DocumentParseError("empty candidate list", lineno)
                if len(set(names)) != len(names):
                    raise DocumentParseError("duplicate candidate name", lineno)
                candidates = names
            else:
                distinguished = value
            continue
        if system is None or candidates is None:
            raise DocumentParseError(
                "system and candidates must be declared before ballots", lineno
            )
        mult = 1
        body = line
        matched = _MULT_RE.match(line)
        if matched:
            mult = int(matched.group(1))
            body = matched.group(2).strip()
            if mult < 1:
                raise DocumentParseError("ballot multiplicity must be positive", lineno)
        groups.append((_parse_ballot(body, vote_kind_for(system), candidates, lineno), mult))
        vote_lines.append(lineno)
    if system is None or candidates is None:
        raise DocumentParseError("document declares no system or candidates")
    if distinguished is not None and distinguished not in candidates:
        raise DocumentParseError(f"distinguished candidate {distinguished!r} is not running")
    try:
        election = Election(system, VoteCollection(candidates, tuple(groups)))
    except ElectionError as err:
        raise DocumentParseError(str(err)) from err
    return ElectionDocument(election, distinguished, tuple(vote_lines))


def serialize_election(doc: ElectionDocument) -> str:
    election = doc.election
    lines = [
        f"system: {election.system.value}",
        f"candidates: {' '.join(election.candidates)}",
    ]
    if doc.distinguished is not None:
        lines.append(f"distinguished: {doc.distinguished}")
    for vote, count in election.votes.groups:
        lines.append(str(vote) if count == 1 else f"{count} x {vote}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Partition documents


def parse_partition(text: str, kind: PartitionKind, election: Election) -> Partition:
    content = " ".join(filter(None, (_strip(line) for line in text.splitlines())))
    matched = re.match(r"^block1\s*:(.*)\|\s*block2\s*:(.*)$", content)
    if not matched:
        raise DocumentParseError(
            "expected 'block1: ... | block2: ...'"
        )
    raw_blocks = (matched.group(1).split(), matched.group(2).split())
    if kind is PartitionKind.CANDIDATE:
        universe = list(election.candidates)
        blocks = raw_blocks
    else:
        universe = list(range(election.votes.total))
        blocks = []
        for tokens in raw_blocks:
            indices = []
            for token in tokens:
                if not token.isdigit():
                    raise DocumentParseError(f"voter index {token!r} is not a number")
                indices.append(int(token))
            blocks.append(indices)
    first, second = (frozenset(b) for b in blocks)
    known = set(universe)
    for item in sorted(first | second, key=str):
        if item not in known:
            raise DocumentParseError(f"unknown {kind.value} {item!r}")
    overlap = first & second
    if overlap:
        raise DocumentParseError(
            f"{kind.value} {sorted(overlap, key=str)[0]!r} appears in both blocks"
        )
    missing = known - (first | second)
    if missing:
        raise DocumentParseError(
            f"{kind.value} {sorted(missing, key=str)[0]!r} is in neither block"
        )
    return Partition(kind, first, second)


def serialize_partition(partition: Partition, election: Election) -> str:
    if partition.kind is PartitionKind.CANDIDATE:
        order = {c: i for i, c in enumerate(election.candidates)}
        fmt = lambda block: " ".join(sorted(block, key=order.__getitem__))
    else:
        fmt = lambda block: " ".join(str(i) for i in sorted(block))
    first, second = fmt(partition.first), fmt(partition.second)
    return f"block1:{' ' if first else ''}{first} | block2:{' ' if second else ''}{second}\n"


# ---------------------------------------------------------------------------
# Hitting-set documents


def parse_hitting_set(text: str) -> HittingSetInstance:
    elements = None
    bound = None
    sets: list[frozenset[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        matched = re.match(r"^(elements|k|set)\s*:\s*(.*)$", line)
        if not matched:
            raise DocumentParseError(f"unrecognized line {line!r}", lineno)
        key, value = matched.group(1), matched.group(2).strip()
        if key == "elements":
            elements = tuple(value.split())
        elif key == "k":
            if not value.lstrip("-").isdigit():
                raise DocumentParseError(f"k must be an integer, got {value!r}", lineno)
            bound = int(value)
        else:
            sets.append(frozenset(value.split()))
    if elements is None:
        raise DocumentParseError("missing 'elements:' line")
    if bound is None:
        raise DocumentParseError("missing 'k:' line")
    try:
        return HittingSetInstance(elements, tuple(sets), bound)
    except InvalidInstanceError as err:
        raise DocumentParseError(str(err)) from err


def serialize_hitting_set(hs: HittingSetInstance) -> str:
    order = {name: i for i, name in enumerate(hs.elements)}
    lines = [f"elements: {' '.join(hs.elements)}", f"k: {hs.bound}"]
    for subset in hs.sets:
        lines.append(f"set: {' '.join(sorted(subset, key=order.__getitem__))}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class RunReport:
    command: tuple[str, ...]
    outcome: str
    payload: dict
    lines: tuple[str, ...]

    def machine_section(self) -> dict:
        return {"command": list(self.command), "outcome": self.outcome, **self.payload}

    def render(self) -> str:
        text = "\n".join(self.lines)
        machine = json.dumps(self.machine_section(), sort_keys=True)
        return f"{text}\n{machine}" if text else machine


_EXIT_BY_OUTCOME = {
    "winners": 0,
    "goal-satisfied": 0,
    "goal-not-satisfied": 1,
    "verified-true": 0,
    "verified-false": 1,
    "solution-found": 0,
    "no-solution": 1,
    "transfer-solution": 0,
    "transfer-rejected": 1,
    "collapse-agree": 0,
    "collapse-counterexamples": 1,
    "encoded": 0,
    "extracted": 0,
    "extraction-rejected": 1,
    "error": 2,
}


def exit_code_for(outcome: str) -> int:
    return _EXIT_BY_OUTCOME[outcome]


def _fmt_set(items, election: "Election | None" = None) -> str:
    if election is not None:
        order = {c: i for i, c in enumerate(election.candidates)}
        ordered = sorted(items, key=order.__getitem__)
    else:
        ordered = sorted(items, key=str)
    return "{" + ",".join(str(i) for i in ordered) + "}"


def _trace_lines(trace, election: Election) -> list[str]:
    lines = []
    for stage in trace.first_rounds:
        lines.append(
            f"  {stage.label}: candidates {_fmt_set(stage.candidates, election)}, "
            f"winners {_fmt_set(stage.winners, election)}, "
            f"survivors {_fmt_set(stage.survivors, election)}"
        )
    lines.append(
        f"  final: candidates {_fmt_set(trace.final_candidates, election)}, "
        f"winners {_fmt_set(trace.final_winners, election)}"
    )
    return lines


def _trace_payload(trace, election: Election) -> dict:
    order = {c: i for i, c in enumerate(election.candidates)}
    by_order = lambda items: sorted(items, key=lambda x: order.get(x, x))
    return {
        "first_rounds": [
            {
                "label": stage.label,
                "candidates": by_order(stage.candidates),
                "winners": by_order(stage.winners),
                "survivors": by_order(stage.survivors),
            }
            for stage in trace.first_rounds
        ],
        "final_candidates": by_order(trace.final_candidates),
        "final_winners": by_order(trace.final_winners),
    }


# ---------------------------------------------------------------------------
# Command implementations


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="controlforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("winners", help="winner set of an election file")
    p.add_argument("election")

    for name in ("evaluate", "verify"):
        p = sub.add_parser(
            name,
            help="run a partition through the two-stage election"
            + ("" if name == "evaluate" else " and report the verdict"),
        )
        p.add_argument("--type", required=True, help="control type tag, e.g. DC-RPC-TE-UW")
        p.add_argument("--partition", required=True, help="partition file")
        p.add_argument("--candidate", help="distinguished candidate (overrides the file)")
        if name == "verify":
            p.add_argument("--trace", action="store_true", help="print the full trace")
        p.add_argument("election")

    p = sub.add_parser("solve", help="search for a verifying partition")
    p.add_argument("--type", required=True)
    p.add_argument(
        "--algorithm",
        choices=("auto", "brute", "poly", "oracle"),
        default="auto",
    )
    p.add_argument("--candidate")
    p.add_argument("election")

    p = sub.add_parser("reduce", help="transfer a solution between collapsing types")
    p.add_argument("--from", dest="from_type", required=True, metavar="TYPE")
    p.add_argument("--to", dest="to_type", required=True, metavar="TYPE")
    p.add_argument("--solution", required=True, help="partition file verifying --from")
    p.add_argument("--candidate")
    p.add_argument("--trace", action="store_true")
    p.add_argument("election")

    p = sub.add_parser("collapse-scan", help="compare two types as sets over a universe")
    p.add_argument("--pair", required=True, metavar="T1,T2")
    p.add_argument("--system", required=True, choices=[s.value for s in System])
    p.add_argument("--max-candidates", type=int, required=True)
    p.add_argument("--max-votes", type=int, required=True)
    p.add_argument(
        "--sequences",
        action="store_true",
        help="enumerate ballot sequences instead of multisets",
    )
    p.add_argument("--max-evals", type=int, default=None)

    p = sub.add_parser("encode-hs", help="encode a hitting-set file as an election")
    p.add_argument("hitting_set")

    p = sub.add_parser("decode-hs", help="extract a hitting set from a partition")
    p.add_argument("--solution", required=True)
    p.add_argument("hitting_set")

    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from err


def _control_type(tag: str) -> ControlTypeId:
    try:
        return ControlTypeId.parse(tag)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _instance_from(args) -> tuple[ElectionDocument, ControlInstance]:
    doc = parse_election(_read(args.election))
    focus = getattr(args, "candidate", None) or doc.distinguished
    if focus is None:
        raise UsageError(
            "control commands need a distinguished candidate: add a "
            "'distinguished:' line or pass --candidate"
        )
    if focus not in doc.election.candidates:
        raise UsageError(f"distinguished candidate {focus!r} is not running")
    return doc, ControlInstance(doc.election, focus)


def _max_evals(args=None) -> int:
    override = getattr(args, "max_evals", None)
    if override is not None:
        return override
    env = os.environ.get(MAX_EVALS_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{MAX_EVALS_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_EVALS


def _cmd_winners(args, argv) -> RunReport:
    doc = parse_election(_read(args.election))
    election = doc.election
    tally = scores(election.system, election.candidates, election.votes)
    won = winners(election.system, election.candidates, election.votes)
    lines = [
        f"winners: {_fmt_set(won, election)}",
        "scores: " + ", ".join(f"{c}={tally[c]}" for c in election.candidates),
    ]
    payload = {
        "election": serialize_election(doc),
        "scores": tally,
        "winners": sorted(won, key=list(election.candidates).index),
    }
    return RunReport(tuple(argv), "winners", payload, tuple(lines))


def _checked_partition(args, control_type, doc, instance) -> Partition:
    return parse_partition(
        _read(args.partition), control_type.partition_kind, doc.election
    )


def _cmd_evaluate(args, argv, verdict_only: bool) -> RunReport:
    control_type = _control_type(args.type)
    doc, instance = _instance_from(args)
    partition = _checked_partition(args, control_type, doc, instance)
    checked = check_solution(control_type, instance, partition)
    trace = checked.trace
    satisfied = checked.ok
    if verdict_only:
        outcome = "verified-true" if satisfied else "verified-false"
        lines = [f"verdict: {str(satisfied).lower()}"]
        if args.trace:
            lines += _trace_lines(trace, doc.election)
    else:
        outcome = "goal-satisfied" if satisfied else "goal-not-satisfied"
        lines = [f"two-stage run of {control_type} for focus {instance.focus!r}:"]
        lines += _trace_lines(trace, doc.election)
        lines.append(f"goal satisfied: {str(satisfied).lower()}")
    payload = {
        "type": str(control_type),
        "election": serialize_election(doc),
        "focus": instance.focus,
        "partition": serialize_partition(partition, doc.election),
        "verdict": satisfied,
        "trace": _trace_payload(trace, doc.election),
    }
    return RunReport(tuple(argv), outcome, payload, tuple(lines))


def _pick_algorithm(control_type: ControlTypeId, instance: ControlInstance, requested: str):
    approval = instance.election.system is System.APPROVAL
    has_poly = approval and (
        control_type in IMMUNE_APPROVAL_TYPES or control_type == CC_RPC_TE_NUW
    )
    if requested == "poly" and not has_poly:
        raise UsageError(
            f"no polynomial algorithm is in scope for {instance.election.system.value} "
            f"{control_type}"
        )
    if requested in ("poly", "auto") and has_poly:
        if control_type in IMMUNE_APPROVAL_TYPES:
            return "approval-immunity", lambda: immunity_search_approval(control_type, instance)
        return "approval-isolate", lambda: cc_rpc_te_nuw_search_approval(instance)
    if requested == "oracle":
        oracle = BruteForceOracle()
        outcome = lambda: lex_min_search_with_oracle(control_type, instance, oracle)
        return "oracle-binary-search", outcome, oracle
    return "brute-force", lambda: brute_force_search(control_type, instance)


def _cmd_solve(args, argv) -> RunReport:
    control_type = _control_type(args.type)
    doc, instance = _instance_from(args)
    cap = _max_evals(args)
    space = 1 << encoding_length(instance, control_type.partition_kind)
    picked = _pick_algorithm(control_type, instance, args.algorithm)
    algorithm, runner = picked[0], picked[1]
    if algorithm in ("brute-force", "oracle-binary-search") and space > cap:
        raise UsageError(
            f"search space of {space} partitions exceeds the cap of {cap} "
            f"(set {MAX_EVALS_ENV} to raise it)"
        )
    outcome = runner()
    payload = {
        "type": str(control_type),
        "algorithm": algorithm,
        "election": serialize_election(doc),
        "focus": instance.focus,
        "solution": None
        if outcome.solution is None
        else serialize_partition(outcome.solution, doc.election),
    }
    if len(picked) == 3:
        payload["oracle_calls"] = picked[2].calls
    if outcome.solution is None:
        lines = [f"no solution ({algorithm})"]
        return RunReport(tuple(argv), "no-solution", payload, tuple(lines))
    lines = [
        f"solution found ({algorithm}): "
        + serialize_partition(outcome.solution, doc.election).strip()
    ]
    return RunReport(tuple(argv), "solution-found", payload, tuple(lines))


def _cmd_reduce(args, argv) -> RunReport:
    from_type = _control_type(args.from_type)
    to_type = _control_type(args.to_type)
    doc, instance = _instance_from(args)
    system = doc.election.system
    chain = find_transfer_chain(system, to_type, from_type)
    if chain is None:
        raise UsageError(
            f"no transfer route from {from_type} to {to_type} is registered "
            f"for {system.value}"
        )
    partition = parse_partition(
        _read(args.solution), from_type.partition_kind, doc.election
    )
    steps = []
    current = partition
    fallback = False
    rejected = False
    if not chain:
        rejected = not check_solution(from_type, instance, partition).ok
    for rule in chain:
        result = rule.apply(instance, current)
        steps.append(
            {
                "rule": rule.describe(),
                "rejected": result.rejected,
                "via_fallback": result.via_fallback,
            }
        )
        if result.rejected:
            rejected = True
            break
        fallback = fallback or result.via_fallback
        current = result.solution
    lines = [f"route: {from_type} -> {to_type} in {len(chain)} step(s)"]
    lines += [f"  step {i + 1}: {s['rule']}" for i, s in enumerate(steps)]
    payload = {
        "from": str(from_type),
        "to": str(to_type),
        "election": serialize_election(doc),
        "focus": instance.focus,
        "input": serialize_partition(partition, doc.election),
        "steps": steps,
        "via_fallback": fallback,
    }
    if rejected:
        lines.append("rejected: the input does not verify for the source type")
        payload["solution"] = None
        return RunReport(tuple(argv), "transfer-rejected", payload, tuple(lines))
    payload["solution"] = serialize_partition(current, doc.election)
    lines.append(
        ("fallback " if fallback else "")
        + "solution: "
        + serialize_partition(current, doc.election).strip()
    )
    if args.trace:
        checked = check_solution(to_type, instance, current)
        lines += _trace_lines(checked.trace, doc.election)
    return RunReport(tuple(argv), "transfer-solution", payload, tuple(lines))


def _cmd_collapse_scan(args, argv) -> RunReport:
    tags = args.pair.split(",")
    if len(tags) != 2:
        raise UsageError("--pair takes two comma-separated type tags")
    type_one, type_two = (_control_type(t) for t in tags)
    universe = Universe(
        System(args.system),
        args.max_candidates,
        args.max_votes,
        as_multisets=not args.sequences,
    )
    try:
        report = collapse_scan(type_one, type_two, universe, max_evaluations=_max_evals(args))
    except UniverseTooLargeError as err:
        raise UsageError(str(err)) from err
    lines = [report.summary()]
    shown = []
    for ce in report.counterexamples[:20]:
        doc = ElectionDocument(ce.instance.election, ce.instance.focus)
        lines.append(
            f"  in {ce.containing_type} only: focus {ce.instance.focus!r} of "
            + serialize_election(doc).replace("\n", "; ").rstrip("; ")
        )
        shown.append(
            {
                "election": serialize_election(doc),
                "focus": ce.instance.focus,
                "containing_type": str(ce.containing_type),
                "missing_type": str(ce.missing_type),
                "witness": serialize_partition(ce.witness, ce.instance.election),
            }
        )
    if len(report.counterexamples) > 20:
        lines.append(f"  ... and {len(report.counterexamples) - 20} more")
    payload = {
        "pair": [str(type_one), str(type_two)],
        "universe": report.universe.describe(),
        "instances_checked": report.instances_checked,
        "counterexample_count": len(report.counterexamples),
        "counterexamples": shown,
    }
    outcome = "collapse-agree" if report.agree else "collapse-counterexamples"
    return RunReport(tuple(argv), outcome, payload, tuple(lines))


def _cmd_encode_hs(args, argv) -> RunReport:
    hs = parse_hitting_set(_read(args.hitting_set))
    encoded = encode_hitting_set(hs)
    doc = ElectionDocument(encoded.election, encoded.instance.focus)
    lines = ["vote blocks:"]
    lines += [
        f"  {block.label}: {block.count} x {block.ballot}" for block in encoded.blocks
    ]
    lines.append("")
    lines.append(serialize_election(doc).rstrip("\n"))
    payload = {
        "hitting_set": serialize_hitting_set(hs),
        "election": serialize_election(doc),
        "focus": encoded.instance.focus,
        "blocks": [
            {"label": b.label, "count": b.count, "ballot": str(b.ballot)}
            for b in encoded.blocks
        ],
    }
    return RunReport(tuple(argv), "encoded", payload, tuple(lines))


def _cmd_decode_hs(args, argv) -> RunReport:
    hs = parse_hitting_set(_read(args.hitting_set))
    encoded = encode_hitting_set(hs)
    partition = parse_partition(
        _read(args.solution), PartitionKind.CANDIDATE, encoded.election
    )
    extracted = extract_hitting_set(encoded, partition)
    payload = {
        "hitting_set": serialize_hitting_set(hs),
        "solution": serialize_partition(partition, encoded.election),
        "extracted": None if extracted is None else sorted(extracted, key=hs.elements.index),
    }
    if extracted is None:
        lines = ("rejected: the partition does not verify on the encoded instance",)
        return RunReport(tuple(argv), "extraction-rejected", payload, lines)
    ordered = sorted(extracted, key=hs.elements.index)
    lines = (f"hitting set: {{{','.join(ordered)}}} (size {len(ordered)}, bound {hs.bound})",)
    return RunReport(tuple(argv), "extracted", payload, lines)


_HANDLERS = {
    "winners": _cmd_winners,
    "solve": _cmd_solve,
    "reduce": _cmd_reduce,
    "collapse-scan": _cmd_collapse_scan,
    "encode-hs": _cmd_encode_hs,
    "decode-hs": _cmd_decode_hs,
}


def run_command(argv) -> tuple[int, RunReport]:
    """Execute one CLI invocation, returning (exit code, report)."""
    argv = list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "evaluate":
            report = _cmd_evaluate(args, argv, verdict_only=False)
        elif args.subcommand == "verify":
            report = _cmd_evaluate(args, argv, verdict_only=True)
        else:
            report = _HANDLERS[args.subcommand](args, argv)
    except (UsageError, DocumentParseError, ElectionError, TransferError, ValueError) as err:
        report = RunReport(
            tuple(argv), "error", {"message": str(err)}, (f"error: {err}",)
        )
    return exit_code_for(report.outcome), report


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        code, report = run_command(argv)
    except SystemExit as exit_request:  # argparse --help
        return 0 if exit_request.code in (0, None) else 2
    stream = sys.stderr if code == 2 else sys.stdout
    print(report.render(), file=stream)
    return code


def console_main() -> None:
    raise SystemExit(main())
