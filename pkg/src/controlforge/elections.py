"""Candidate/vote data model, vote masking, and winner determination.

Three election systems are supported: plurality and veto (linear-order
ballots) and approval (approval ballots). Winner sets may be empty only
for an empty candidate set; all values are immutable and all operations
are pure functions.
"""

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class ElectionError(ValueError):
    """Base class for malformed election data."""


class InvalidCandidateError(ElectionError):
    """A candidate name is malformed, duplicated, or unknown."""


class InvalidVoteError(ElectionError):
    """A ballot does not fit its collection's kind or universe."""


class System(str, Enum):
    PLURALITY = "plurality"
    VETO = "veto"
    APPROVAL = "approval"

    def __str__(self) -> str:
        return self.value


class VoteKind(str, Enum):
    ORDER = "order"
    APPROVAL = "approval"

    def __str__(self) -> str:
        return self.value


def vote_kind_for(system: System) -> VoteKind:
    """The ballot kind a system accepts: linear orders or approval ballots."""
    return VoteKind.APPROVAL if system is System.APPROVAL else VoteKind.ORDER


_FORBIDDEN_NAME_CHARS = frozenset(">,{}")


def check_candidate_name(name: str) -> str:
    """Validate a candidate name token and return it unchanged."""
    if not name:
        raise InvalidCandidateError("candidate name must be nonempty")
    if any(ch.isspace() for ch in name):
        raise InvalidCandidateError(f"candidate name {name!r} contains whitespace")
    bad = _FORBIDDEN_NAME_CHARS.intersection(name)
    if bad:
        raise InvalidCandidateError(
            f"candidate name {name!r} contains reserved character {sorted(bad)[0]!r}"
        )
    return name


@dataclass(frozen=True)
class Vote:
    """One ballot: a linear order over, or the approved subset of, a universe.

    ``entries`` lists candidate names. For an order vote it is the full
    ranking, best first. For an approval vote it lists exactly the approved
    candidates, kept in canonical (universe) order.
    """

    kind: VoteKind
    entries: tuple[str, ...]

    @classmethod
    def order(cls, ranking: Iterable[str]) -> "Vote":
        return cls(VoteKind.ORDER, tuple(ranking))

    @classmethod
    def approval(cls, approved: Iterable[str]) -> "Vote":
        return cls(VoteKind.APPROVAL, tuple(approved))

    def masked(self, keep: frozenset[str]) -> "Vote":
        """Restrict the ballot to ``keep``, preserving relative order."""
        return Vote(self.kind, tuple(c for c in self.entries if c in keep))

    def __str__(self) -> str:
        if self.kind is VoteKind.ORDER:
            return ">".join(self.entries)
        return "{" + ",".join(self.entries) + "}"


@dataclass(frozen=True)
class VoteCollection:
    """An ordered list of (ballot, multiplicity) groups over a fixed universe.

    Canonical voter indices 0..n-1 are assigned by expansion order: group 0
    occupies the first ``multiplicity`` indices, and so on. Two identical
    ballots therefore remain distinguishable when voters are partitioned.
    """

    universe: tuple[str, ...]
    groups: tuple[tuple[Vote, int], ...]

    def __post_init__(self):
        universe_set = frozenset(self.universe)
        position = {name: i for i, name in enumerate(self.universe)}
        normalized = []
        changed = False
        kind = None
        for vote, count in self.groups:
            if count <= 0:
                raise InvalidVoteError("vote multiplicity must be positive")
            if kind is None:
                kind = vote.kind
            elif vote.kind is not kind:
                raise InvalidVoteError("mixed ballot kinds in one collection")
            unknown = [c for c in vote.entries if c not in universe_set]
            if unknown:
                raise InvalidCandidateError(f"ballot names unknown candidate {unknown[0]!r}")
            if len(set(vote.entries)) != len(vote.entries):
                raise InvalidVoteError(f"ballot {vote} repeats a candidate")
            if vote.kind is VoteKind.ORDER:
                if len(vote.entries) != len(self.universe):
                    raise InvalidVoteError(
                        f"ballot {vote} is not a permutation of the candidate set"
                    )
                normalized.append((vote, count))
            else:
                canonical = tuple(sorted(vote.entries, key=position.__getitem__))
                if canonical != vote.entries:
                    vote = Vote(VoteKind.APPROVAL, canonical)
                    changed = True
                normalized.append((vote, count))
        if changed:
            object.__setattr__(self, "groups", tuple(normalized))

    @classmethod
    def of(
        cls, universe: Iterable[str], ballots: Iterable[tuple[Vote, int]]
    ) -> "VoteCollection":
        return cls(tuple(universe), tuple(ballots))

    @classmethod
    def empty(cls, universe: Iterable[str]) -> "VoteCollection":
        return cls(tuple(universe), ())

    @property
    def kind(self) -> VoteKind | None:
        return self.groups[0][0].kind if self.groups else None

    @property
    def total(self) -> int:
        return sum(count for _, count in self.groups)

    def expand(self) -> Iterator[Vote]:
        """Yield one ballot per canonical voter index, in index order."""
        for vote, count in self.groups:
            for _ in range(count):
                yield vote

    def masked(self, keep: frozenset[str]) -> "VoteCollection":
        kept_universe = tuple(c for c in self.universe if c in keep)
        return VoteCollection(
            kept_universe,
            tuple((vote.masked(keep), count) for vote, count in self.groups),
        )

    def select_voters(self, indices: frozenset[int]) -> "VoteCollection":
        """Sub-collection holding exactly the ballots at the given indices."""
        picked = []
        offset = 0
        for vote, count in self.groups:
            taken = sum(1 for i in range(offset, offset + count) if i in indices)
            if taken:
                picked.append((vote, taken))
            offset += count
        return VoteCollection(self.universe, tuple(picked))


@dataclass(frozen=True)
class Election:
    """A candidate set with votes of the matching kind under one system."""

    system: System
    votes: VoteCollection

    def __post_init__(self):
        seen = set()
        for name in self.votes.universe:
            check_candidate_name(name)
            if name in seen:
                raise InvalidCandidateError(f"duplicate candidate name {name!r}")
            seen.add(name)
        kind = self.votes.kind
        if kind is not None and kind is not vote_kind_for(self.system):
            raise InvalidVoteError(
                f"{self.system} elections take {vote_kind_for(self.system)} ballots, got {kind}"
            )

    @property
    def candidates(self) -> tuple[str, ...]:
        return self.votes.universe


def make_election(
    system: System | str,
    candidates: Iterable[str],
    ballots: Iterable[tuple[Iterable[str], int]] = (),
) -> Election:
    """Convenience constructor from plain sequences.

    Each ballot is given as (candidate names, multiplicity); names are read
    as a ranking for plurality/veto and as the approved set for approval.
    """
    system = System(system)
    kind = vote_kind_for(system)
    groups = tuple((Vote(kind, tuple(entries)), count) for entries, count in ballots)
    return Election(system, VoteCollection(tuple(candidates), groups))


def mask_votes(votes: VoteCollection, subset: Iterable[str]) -> VoteCollection:
    """Restrict every ballot to ``subset``, preserving order and multiplicities."""
    keep = frozenset(subset)
    unknown = keep.difference(votes.universe)
    if unknown:
        raise InvalidCandidateError(
            f"cannot mask to unknown candidate {sorted(unknown)[0]!r}"
        )
    return votes.masked(keep)


def scores(
    system: System, candidates: Iterable[str], votes: VoteCollection
) -> dict[str, int]:
    """Per-candidate tally over the votes masked down to ``candidates``.

    Plurality counts first places, veto counts last places, approval counts
    approvals. Keys follow canonical candidate order.
    """
    keep = frozenset(candidates)
    unknown = keep.difference(votes.universe)
    if unknown:
        raise InvalidCandidateError(
            f"cannot score unknown candidate {sorted(unknown)[0]!r}"
        )
    tally = {c: 0 for c in votes.universe if c in keep}
    if system is System.APPROVAL:
        for vote, count in votes.groups:
            for name in vote.entries:
                if name in keep:
                    tally[name] += count
    elif system is System.PLURALITY:
        for vote, count in votes.groups:
            first = next((c for c in vote.entries if c in keep), None)
            if first is not None:
                tally[first] += count
    else:
        for vote, count in votes.groups:
            last = next((c for c in reversed(vote.entries) if c in keep), None)
            if last is not None:
                tally[last] += count
    return tally


@functools.lru_cache(maxsize=1 << 18)
def _winners_cached(
    system: System, keep: frozenset[str], votes: VoteCollection
) -> frozenset[str]:
    if not keep:
        return frozenset()
    tally = scores(system, keep, votes)
    best = min(tally.values()) if system is System.VETO else max(tally.values())
    return frozenset(c for c, s in tally.items() if s == best)


def winners(
    system: System, candidates: Iterable[str], votes: VoteCollection
) -> frozenset[str]:
    """Winner set: argmax of scores (plurality/approval) or argmin of vetoes."""
    return _winners_cached(system, frozenset(candidates), votes)


def unique_winner_if_any(
    system: System, candidates: Iterable[str], votes: VoteCollection
) -> frozenset[str]:
    """The winner set when it is a singleton, the empty set otherwise."""
    won = winners(system, candidates, votes)
    return won if len(won) == 1 else frozenset()
