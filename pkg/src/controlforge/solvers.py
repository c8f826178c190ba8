"""Search algorithms for partition control problems.

Provides the exhaustive brute-force solver (the ground-truth oracle at desk
scale), the polynomial-time approval algorithms, lexicographically-least
search against a pluggable decision oracle, and the collapse scanner that
compares two control types as sets of instances over a bounded universe.

Partitions are encoded as the characteristic bit string of the first block
in canonical candidate/voter order (bit i set means item i is in the first
block); "lexicographically least" always refers to this encoding.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, MutableMapping

from .control import (
    Action,
    ControlInstance,
    ControlTypeId,
    Direction,
    Partition,
    PartitionKind,
    WinnerModel,
    verify_solution,
)
from .elections import (
    Election,
    System,
    Vote,
    VoteCollection,
    scores,
    winners,
)


class UnsupportedAlgorithmError(ValueError):
    """A specialized solver was asked about a (system, type) it does not cover."""


class OracleInconsistencyError(RuntimeError):
    """The decision oracle's answers led to a non-verifying partition."""


class UniverseTooLargeError(ValueError):
    """A scan would exceed the configured evaluation cap."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(
            f"scan needs an estimated {estimate} two-stage evaluations, "
            f"above the cap of {cap}"
        )
        self.estimate = estimate
        self.cap = cap


DEFAULT_MAX_EVALS = 10_000_000

SearchCache = MutableMapping[tuple[ControlTypeId, ControlInstance], "Partition | None"]


@dataclass(frozen=True)
class SolveOutcome:
    """A verifying partition, or None when no partition verifies."""

    solution: "Partition | None"

    @property
    def found(self) -> bool:
        return self.solution is not None


def partition_items(instance: ControlInstance, kind: PartitionKind) -> tuple:
    """The ordered items a partition of this kind splits."""
    if kind is PartitionKind.CANDIDATE:
        return instance.election.candidates
    return tuple(range(instance.voter_count))


def encoding_length(instance: ControlInstance, kind: PartitionKind) -> int:
    return len(partition_items(instance, kind))


def bipartitions(items: tuple) -> Iterator[tuple[frozenset, frozenset]]:
    """All 2^len ordered bipartitions, by first-block bit string, item 0 first."""
    length = len(items)
    for code in range(1 << length):
        first = frozenset(
            item for i, item in enumerate(items) if code >> (length - 1 - i) & 1
        )
        yield first, frozenset(items) - first


def enumerate_partitions(
    instance: ControlInstance, kind: PartitionKind
) -> Iterator[Partition]:
    """All partitions of the given kind, lexicographically by encoding."""
    items = partition_items(instance, kind)
    for first, second in bipartitions(items):
        yield Partition(kind, first, second)


def partition_bits(partition: Partition, instance: ControlInstance) -> str:
    """The encoding of a partition: first-block membership, item by item."""
    items = partition_items(instance, partition.kind)
    return "".join("1" if item in partition.first else "0" for item in items)


def partition_from_bits(
    instance: ControlInstance, kind: PartitionKind, bits: str
) -> Partition:
    items = partition_items(instance, kind)
    if len(bits) != len(items):
        raise ValueError(f"encoding {bits!r} has wrong length for {len(items)} items")
    first = frozenset(item for item, bit in zip(items, bits) if bit == "1")
    return Partition(kind, first, frozenset(items) - first)


def brute_force_search(
    control_type: ControlTypeId,
    instance: ControlInstance,
    cache: "SearchCache | None" = None,
) -> SolveOutcome:
    """The lexicographically least verifying partition, or None if none verifies.

    An optional cache maps (type, instance) to the result, letting repeated
    scans share work.
    """
    if cache is not None:
        key = (control_type, instance)
        if key in cache:
            return SolveOutcome(cache[key])
    solution = None
    for partition in enumerate_partitions(instance, control_type.partition_kind):
        if verify_solution(control_type, instance, partition):
            solution = partition
            break
    if cache is not None:
        cache[key] = solution
    return SolveOutcome(solution)


# ---------------------------------------------------------------------------
# Polynomial-time approval algorithms


def _full_partition(instance: ControlInstance) -> Partition:
    return Partition.of_candidates(frozenset(), frozenset(instance.election.candidates))


IMMUNE_APPROVAL_TYPES: tuple[ControlTypeId, ...] = (
    ControlTypeId.parse("DC-PC-TE-UW"),
    ControlTypeId.parse("DC-PC-TP-NUW"),
    ControlTypeId.parse("CC-PC-TP-UW"),
    ControlTypeId.parse("CC-PC-TP-NUW"),
)


def immunity_search_approval(
    control_type: ControlTypeId, instance: ControlInstance
) -> SolveOutcome:
    """Constant-output search for the four approval types immune to control.

    For these types no partition can flip the goal once it already fails
    (DC) or already holds against the attacker (CC), so the instance either
    has no solution at all or is solved by the do-nothing partition
    (empty first block, everything in the second), which makes the final
    round the original election.
    """
    if instance.election.system is not System.APPROVAL:
        raise UnsupportedAlgorithmError("immunity search applies to approval elections only")
    if control_type not in IMMUNE_APPROVAL_TYPES:
        raise UnsupportedAlgorithmError(
            f"{control_type} is not one of the immune approval types"
        )
    election = instance.election
    won = winners(election.system, election.candidates, election.votes)
    is_unique = won == frozenset((instance.focus,))
    is_winner = instance.focus in won
    if control_type.direction is Direction.DC:
        blocked = is_unique if control_type.winner_model is WinnerModel.UW else is_winner
    else:
        blocked = not (
            is_unique if control_type.winner_model is WinnerModel.UW else is_winner
        )
    if blocked:
        return SolveOutcome(None)
    return SolveOutcome(_full_partition(instance))


CC_RPC_TE_NUW = ControlTypeId.parse("CC-RPC-TE-NUW")


def cc_rpc_te_nuw_search_approval(instance: ControlInstance) -> SolveOutcome:
    """Solve approval CC-RPC-TE-NUW by isolating the focus candidate.

    Let Y be the top approval count. If the focus candidate misses Y and a
    single candidate attains it, that candidate survives any split and beats
    the focus in the final round, so there is no solution. Otherwise
    ({focus}, rest) works: the focus uniquely wins its own block, and the
    other block either produces no rival with more approvals (focus at Y) or
    eliminates all rivals through their tie at Y.
    """
    if instance.election.system is not System.APPROVAL:
        raise UnsupportedAlgorithmError("this search applies to approval elections only")
    election = instance.election
    tally = scores(election.system, election.candidates, election.votes)
    top = max(tally.values())
    top_holders = [c for c, count in tally.items() if count == top]
    if tally[instance.focus] != top and len(top_holders) == 1:
        return SolveOutcome(None)
    rest = frozenset(election.candidates) - {instance.focus}
    return SolveOutcome(Partition.of_candidates(frozenset((instance.focus,)), rest))


# ---------------------------------------------------------------------------
# Oracle-backed lexicographic search

# A decision oracle answers: does some verifying partition's encoding extend
# this bit prefix?
DecisionOracle = Callable[[ControlTypeId, ControlInstance, str], bool]


class BruteForceOracle:
    """Prefix-feasibility oracle backed by exhaustive enumeration."""

    def __init__(self):
        self.calls = 0

    def __call__(
        self, control_type: ControlTypeId, instance: ControlInstance, prefix: str
    ) -> bool:
        self.calls += 1
        kind = control_type.partition_kind
        free = encoding_length(instance, kind) - len(prefix)
        for code in range(1 << free):
            bits = prefix + format(code, f"0{free}b") if free else prefix
            partition = partition_from_bits(instance, kind, bits)
            if verify_solution(control_type, instance, partition):
                return True
        return False


def lex_min_search_with_oracle(
    control_type: ControlTypeId,
    instance: ControlInstance,
    oracle: DecisionOracle,
) -> SolveOutcome:
    """Find the lexicographically least verifying partition via oracle queries.

    One initial feasibility probe on the empty prefix, then the encoding is
    fixed bit by bit, preferring 0; at most 2L+1 oracle calls for encoding
    length L. With a truthful oracle the result equals brute_force_search.
    """
    if not oracle(control_type, instance, ""):
        return SolveOutcome(None)
    kind = control_type.partition_kind
    prefix = ""
    for _ in range(encoding_length(instance, kind)):
        if oracle(control_type, instance, prefix + "0"):
            prefix += "0"
        else:
            prefix += "1"
    partition = partition_from_bits(instance, kind, prefix)
    if not verify_solution(control_type, instance, partition):
        raise OracleInconsistencyError(
            f"oracle answers led to non-verifying partition {partition}"
        )
    return SolveOutcome(partition)


# ---------------------------------------------------------------------------
# Bounded universes of elections


@dataclass(frozen=True)
class Universe:
    """All elections of one system up to a candidate and ballot budget.

    Vote collections are enumerated as multisets of ballots by default;
    ``as_multisets=False`` enumerates every ordered ballot sequence instead,
    for paranoia runs that refuse the order-insensitivity shortcut.
    """

    system: System
    max_candidates: int
    max_votes: int
    as_multisets: bool = True

    def describe(self) -> str:
        mode = "ballot multisets" if self.as_multisets else "ballot sequences"
        return (
            f"{self.system.value} elections, <={self.max_candidates} candidates, "
            f"<={self.max_votes} votes ({mode})"
        )


_NAMES = "abcdefghijklmnopqrstuvwxyz"


def candidate_names(count: int) -> tuple[str, ...]:
    if count > len(_NAMES):
        raise ValueError(f"scan universes support at most {len(_NAMES)} candidates")
    return tuple(_NAMES[:count])


def all_ballots(system: System, candidates: tuple[str, ...]) -> tuple[Vote, ...]:
    """Every distinct ballot over the candidate set, in a fixed order."""
    if system is System.APPROVAL:
        m = len(candidates)
        return tuple(
            Vote.approval(
                c for i, c in enumerate(candidates) if code >> (m - 1 - i) & 1
            )
            for code in range(1 << m)
        )
    return tuple(Vote.order(perm) for perm in itertools.permutations(candidates))


def ballot_space_size(system: System, candidate_count: int) -> int:
    if system is System.APPROVAL:
        return 1 << candidate_count
    return math.factorial(candidate_count)


def iter_elections(universe: Universe) -> Iterator[Election]:
    """All elections in the universe, deterministically ordered."""
    for m in range(1, universe.max_candidates + 1):
        candidates = candidate_names(m)
        ballots = all_ballots(universe.system, candidates)
        for size in range(universe.max_votes + 1):
            if universe.as_multisets:
                pools = itertools.combinations_with_replacement(ballots, size)
            else:
                pools = itertools.product(ballots, repeat=size)
            for pool in pools:
                groups = tuple(
                    (vote, len(list(copies)))
                    for vote, copies in itertools.groupby(pool)
                )
                yield Election(universe.system, VoteCollection(candidates, groups))


def iter_instances(universe: Universe) -> Iterator[ControlInstance]:
    """All (election, focus candidate) pairs in the universe."""
    for election in iter_elections(universe):
        for focus in election.candidates:
            yield ControlInstance(election, focus)


def instance_count(universe: Universe) -> int:
    total = 0
    for m in range(1, universe.max_candidates + 1):
        ballots = ballot_space_size(universe.system, m)
        for size in range(universe.max_votes + 1):
            if universe.as_multisets:
                collections = math.comb(ballots + size - 1, size)
            else:
                collections = ballots**size
            total += collections * m
    return total


def estimated_scan_evaluations(
    types: tuple[ControlTypeId, ...], universe: Universe
) -> int:
    """Upper estimate of two-stage evaluations to decide the types everywhere."""
    total = 0
    for m in range(1, universe.max_candidates + 1):
        ballots = ballot_space_size(universe.system, m)
        for size in range(universe.max_votes + 1):
            if universe.as_multisets:
                collections = math.comb(ballots + size - 1, size)
            else:
                collections = ballots**size
            per_instance = sum(
                1 << (size if t.action is Action.PV else m) for t in types
            )
            total += collections * m * per_instance
    return total


# ---------------------------------------------------------------------------
# Collapse scanning


@dataclass(frozen=True)
class CollapseCounterexample:
    """An instance on which exactly one of the two scanned types succeeds."""

    instance: ControlInstance
    containing_type: ControlTypeId
    witness: Partition
    missing_type: ControlTypeId


@dataclass(frozen=True)
class ScanReport:
    """Result of comparing two control types as sets over a universe."""

    type_one: ControlTypeId
    type_two: ControlTypeId
    universe: Universe
    instances_checked: int
    counterexamples: tuple[CollapseCounterexample, ...]

    @property
    def agree(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        verdict = (
            "agree everywhere"
            if self.agree
            else f"{len(self.counterexamples)} counterexamples"
        )
        return (
            f"{self.type_one} vs {self.type_two} on {self.universe.describe()}: "
            f"{self.instances_checked} instances, {verdict}"
        )


def collapse_scan(
    type_one: ControlTypeId,
    type_two: ControlTypeId,
    universe: Universe,
    max_evaluations: int = DEFAULT_MAX_EVALS,
    cache: "SearchCache | None" = None,
) -> ScanReport:
    """Compare two control types as sets of instances by brute force.

    Membership is decided independently for each type, so the types'
    partition kinds need not match. Refuses universes whose estimated cost
    exceeds ``max_evaluations``.
    """
    estimate = estimated_scan_evaluations((type_one, type_two), universe)
    if estimate > max_evaluations:
        raise UniverseTooLargeError(estimate, max_evaluations)
    if cache is None:
        cache = {}
    counterexamples = []
    checked = 0
    for instance in iter_instances(universe):
        checked += 1
        first = brute_force_search(type_one, instance, cache).solution
        second = brute_force_search(type_two, instance, cache).solution
        if (first is None) == (second is None):
            continue
        if first is not None:
            counterexamples.append(
                CollapseCounterexample(instance, type_one, first, type_two)
            )
        else:
            counterexamples.append(
                CollapseCounterexample(instance, type_two, second, type_one)
            )
    return ScanReport(type_one, type_two, universe, checked, tuple(counterexamples))


# ---------------------------------------------------------------------------
# The known collapse groups for the three concrete systems


def _types(*tags: str) -> tuple[ControlTypeId, ...]:
    return tuple(ControlTypeId.parse(tag) for tag in tags)


_GENERAL_TP_GROUP = _types("DC-RPC-TP-NUW", "DC-PC-TP-NUW")
_GENERAL_TE_GROUP = _types("DC-RPC-TE-NUW", "DC-PC-TE-NUW", "DC-RPC-TE-UW", "DC-PC-TE-UW")
_VOTER_TE_GROUP = _types("DC-PV-TE-NUW", "DC-PV-TE-UW")

COLLAPSE_GROUPS: dict[System, tuple[tuple[ControlTypeId, ...], ...]] = {
    System.PLURALITY: (_GENERAL_TP_GROUP, _GENERAL_TE_GROUP),
    System.VETO: (_GENERAL_TP_GROUP, _GENERAL_TE_GROUP, _VOTER_TE_GROUP),
    System.APPROVAL: (
        _GENERAL_TP_GROUP,
        # The destructive TE types merge with the destructive TP unique-winner
        # types into a single six-way group.
        _GENERAL_TE_GROUP + _types("DC-RPC-TP-UW", "DC-PC-TP-UW"),
        _VOTER_TE_GROUP,
        _types("CC-RPC-TP-UW", "CC-PC-TP-UW"),
        _types("CC-RPC-TP-NUW", "CC-PC-TP-NUW"),
        _types("CC-RPC-TE-UW", "CC-PC-TE-UW"),
        _types("CC-RPC-TE-NUW", "CC-PC-TE-NUW"),
    ),
}


def collapse_groups(system: System) -> tuple[tuple[ControlTypeId, ...], ...]:
    return COLLAPSE_GROUPS[system]


def collapse_pairs(system: System) -> list[tuple[ControlTypeId, ControlTypeId]]:
    """Every unordered pair of types known to coincide for the system."""
    pairs = []
    for group in COLLAPSE_GROUPS[system]:
        pairs.extend(itertools.combinations(group, 2))
    return pairs


def collapses_with(system: System, one: ControlTypeId, two: ControlTypeId) -> bool:
    return any(
        one in group and two in group and one != two
        for group in COLLAPSE_GROUPS[system]
    )
