"""Partition-based electoral control: systems, attacks, solvers, transfers.

Implements plurality, veto, and approval winner determination, the 24
partition control problems with solution verification, brute-force and
polynomial search algorithms, constructive solution transfers between
collapsing control types, and the Hitting-Set hardness reduction, together
with a text-format CLI (``controlforge``).
"""

from .control import (
    ALL_CONTROL_TYPES,
    Action,
    ControlInstance,
    ControlTypeId,
    Direction,
    Partition,
    PartitionKind,
    TieRule,
    TwoStageTrace,
    WinnerModel,
    check_solution,
    goal_satisfied,
    run_two_stage,
    survivors,
    verify_solution,
)
from .elections import (
    Election,
    System,
    Vote,
    VoteCollection,
    make_election,
    mask_votes,
    scores,
    unique_winner_if_any,
    winners,
)
from .hardness import (
    EncodedInstance,
    HittingSetInstance,
    brute_force_hitting_set,
    encode_hitting_set,
    extract_hitting_set,
    forward_partition,
)
from .reductions import (
    ALL_TRANSFER_RULES,
    TransferOutcome,
    TransferRule,
    compose,
    find_transfer_chain,
    rules_for,
    transfer_empty_block,
    transfer_fallback,
    transfer_identity,
    transfer_te_cycle,
    transfer_tp_nuw,
)
from .solvers import (
    BruteForceOracle,
    ScanReport,
    SolveOutcome,
    Universe,
    brute_force_search,
    cc_rpc_te_nuw_search_approval,
    collapse_groups,
    collapse_pairs,
    collapse_scan,
    enumerate_partitions,
    immunity_search_approval,
    iter_elections,
    iter_instances,
    lex_min_search_with_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
