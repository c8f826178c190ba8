"""The 24 partition control types as executable two-stage election semantics.

A control type is a 4-axis tag: direction (make the focus candidate win, CC,
or prevent it, DC), action (candidate partition PC, runoff candidate
partition RPC, or voter partition PV), tie-handling rule (TE: only a unique
subelection winner advances; TP: all subelection winners advance), and winner
model (UW: unique winner; NUW: cowinner).

The two-stage semantics:

* PV: the voter blocks vote separately over the full candidate set; the
  survivors of both subelections then face each other, judged by the full
  vote collection.
* RPC: each candidate block runs a subelection over the full votes; the
  survivors of both face each other.
* PC: only the first block runs a subelection; its survivors face the entire
  second block.

Every round is evaluated under the instance's election system with votes
masked down to the round's candidate set, and the final round always uses
the full original vote collection.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product

from .elections import (
    Election,
    System,
    VoteCollection,
    unique_winner_if_any,
    winners,
)


class InvalidPartitionError(ValueError):
    """A partition is structurally invalid for the instance at hand."""


class Direction(str, Enum):
    CC = "CC"
    DC = "DC"


class Action(str, Enum):
    PC = "PC"
    RPC = "RPC"
    PV = "PV"


class TieRule(str, Enum):
    TE = "TE"
    TP = "TP"


class WinnerModel(str, Enum):
    UW = "UW"
    NUW = "NUW"


class PartitionKind(str, Enum):
    CANDIDATE = "candidate"
    VOTER = "voter"


@dataclass(frozen=True)
class ControlTypeId:
    """One of the 24 partition control problems, e.g. ``DC-RPC-TE-UW``."""

    direction: Direction
    action: Action
    tie_rule: TieRule
    winner_model: WinnerModel

    def __str__(self) -> str:
        return "-".join(
            (self.direction.value, self.action.value, self.tie_rule.value, self.winner_model.value)
        )

    @classmethod
    def parse(cls, text: str) -> "ControlTypeId":
        parts = text.strip().upper().split("-")
        if len(parts) != 4:
            raise ValueError(f"control type tag {text!r} is not of the form CC-PC-TE-UW")
        try:
            return cls(Direction(parts[0]), Action(parts[1]), TieRule(parts[2]), WinnerModel(parts[3]))
        except ValueError:
            raise ValueError(f"unknown control type tag {text!r}") from None

    @property
    def partition_kind(self) -> PartitionKind:
        return PartitionKind.VOTER if self.action is Action.PV else PartitionKind.CANDIDATE


ALL_CONTROL_TYPES: tuple[ControlTypeId, ...] = tuple(
    ControlTypeId(d, a, t, w)
    for d, a, t, w in product(Direction, Action, TieRule, WinnerModel)
)


@dataclass(frozen=True)
class ControlInstance:
    """An election together with the attack's focus candidate."""

    election: Election
    focus: str

    def __post_init__(self):
        if self.focus not in self.election.candidates:
            raise ValueError(f"focus candidate {self.focus!r} is not running")

    @property
    def voter_count(self) -> int:
        return self.election.votes.total


@dataclass(frozen=True)
class Partition:
    """An ordered bipartition of candidates or of canonical voter indices.

    Candidate blocks hold names; voter blocks hold indices 0..n-1, so two
    identical ballots can land in different blocks (a true multiset split).
    A partition doubles as a solution to a control problem.
    """

    kind: PartitionKind
    first: frozenset
    second: frozenset

    @classmethod
    def of_candidates(cls, first, second) -> "Partition":
        return cls(PartitionKind.CANDIDATE, frozenset(first), frozenset(second))

    @classmethod
    def of_voters(cls, first, second) -> "Partition":
        return cls(PartitionKind.VOTER, frozenset(first), frozenset(second))


def partition_problems(
    partition: Partition, control_type: ControlTypeId, instance: ControlInstance
) -> list[str]:
    """Structural defects of a partition for this instance, empty if valid."""
    problems = []
    expected = control_type.partition_kind
    if partition.kind is not expected:
        problems.append(
            f"{control_type.action.value} control partitions {expected.value}s, "
            f"got a {partition.kind.value} partition"
        )
        return problems
    if expected is PartitionKind.CANDIDATE:
        universe = frozenset(instance.election.candidates)
        label = "candidate"
    else:
        universe = frozenset(range(instance.voter_count))
        label = "voter index"
    overlap = partition.first & partition.second
    if overlap:
        problems.append(f"blocks overlap on {label} {sorted(overlap)[0]!r}")
    stray = (partition.first | partition.second) - universe
    if stray:
        problems.append(f"unknown {label} {sorted(stray)[0]!r}")
    missing = universe - (partition.first | partition.second)
    if missing:
        problems.append(f"{label} {sorted(missing)[0]!r} is in neither block")
    return problems


def survivors(
    system: System,
    candidates: "frozenset[str] | tuple[str, ...]",
    votes: VoteCollection,
    tie_rule: TieRule,
) -> frozenset[str]:
    """Subelection winners that advance under the tie-handling rule."""
    if tie_rule is TieRule.TP:
        return winners(system, candidates, votes)
    return unique_winner_if_any(system, candidates, votes)


@dataclass(frozen=True)
class SubElectionRound:
    """One first-round subelection with its outcome."""

    label: str
    election: Election
    winners: frozenset[str]
    survivors: frozenset[str]

    @property
    def candidates(self) -> frozenset[str]:
        return frozenset(self.election.candidates)


@dataclass(frozen=True)
class TwoStageTrace:
    """Everything that happened while running one partition attack."""

    control_type: ControlTypeId
    first_rounds: tuple[SubElectionRound, ...]
    final_election: Election
    final_winners: frozenset[str]

    @property
    def final_candidates(self) -> frozenset[str]:
        return frozenset(self.final_election.candidates)


def _play_round(
    label: str, system: System, election: Election, tie_rule: TieRule
) -> SubElectionRound:
    won = winners(system, election.candidates, election.votes)
    alive = won if tie_rule is TieRule.TP else (won if len(won) == 1 else frozenset())
    return SubElectionRound(label, election, won, alive)


def run_two_stage(
    control_type: ControlTypeId, instance: ControlInstance, partition: Partition
) -> TwoStageTrace:
    """Run the two-stage election the control type prescribes.

    Raises InvalidPartitionError when the partition's kind does not match
    the action or its blocks are not a bipartition of the right universe.
    """
    problems = partition_problems(partition, control_type, instance)
    if problems:
        raise InvalidPartitionError("; ".join(problems))
    return _run_validated(control_type, instance, partition)


def _run_validated(
    control_type: ControlTypeId, instance: ControlInstance, partition: Partition
) -> TwoStageTrace:
    system = instance.election.system
    votes = instance.election.votes
    tie_rule = control_type.tie_rule

    if control_type.action is Action.PV:
        rounds = (
            _play_round(
                "voter block 1",
                system,
                Election(system, votes.select_voters(partition.first)),
                tie_rule,
            ),
            _play_round(
                "voter block 2",
                system,
                Election(system, votes.select_voters(partition.second)),
                tie_rule,
            ),
        )
        final_candidates = rounds[0].survivors | rounds[1].survivors
    elif control_type.action is Action.RPC:
        rounds = (
            _play_round(
                "candidate block 1",
                system,
                Election(system, votes.masked(partition.first)),
                tie_rule,
            ),
            _play_round(
                "candidate block 2",
                system,
                Election(system, votes.masked(partition.second)),
                tie_rule,
            ),
        )
        final_candidates = rounds[0].survivors | rounds[1].survivors
    else:
        rounds = (
            _play_round(
                "candidate block 1",
                system,
                Election(system, votes.masked(partition.first)),
                tie_rule,
            ),
        )
        # In PC the second block skips the first round entirely.
        final_candidates = rounds[0].survivors | partition.second

    final_election = Election(system, votes.masked(final_candidates))
    final_winners = winners(system, final_candidates, votes)
    return TwoStageTrace(control_type, rounds, final_election, final_winners)


def goal_satisfied(
    direction: Direction,
    winner_model: WinnerModel,
    focus: str,
    final_winners: frozenset[str],
) -> bool:
    """Whether the attack's goal holds for the final winner set.

    A focus candidate absent from the final round is simply not a winner.
    """
    if direction is Direction.CC:
        if winner_model is WinnerModel.UW:
            return final_winners == frozenset((focus,))
        return focus in final_winners
    if winner_model is WinnerModel.UW:
        return final_winners != frozenset((focus,))
    return focus not in final_winners


@dataclass(frozen=True)
class SolutionCheck:
    """Outcome of checking one partition against one control problem."""

    ok: bool
    diagnostic: str | None = None
    trace: TwoStageTrace | None = None


def check_solution(
    control_type: ControlTypeId, instance: ControlInstance, partition: Partition
) -> SolutionCheck:
    """Check a partition, reporting structural defects instead of raising."""
    problems = partition_problems(partition, control_type, instance)
    if problems:
        return SolutionCheck(False, "; ".join(problems), None)
    trace = _run_validated(control_type, instance, partition)
    ok = goal_satisfied(
        control_type.direction, control_type.winner_model, instance.focus, trace.final_winners
    )
    return SolutionCheck(ok, None, trace)


def verify_solution(
    control_type: ControlTypeId, instance: ControlInstance, partition: Partition
) -> bool:
    """True iff the partition is structurally valid and achieves the goal.

    Malformed partitions yield False rather than an error, so solvers can
    enumerate blindly.
    """
    return check_solution(control_type, instance, partition).ok
