"""Shared desk-scale enumeration helpers for the unit and acceptance suites."""

import itertools

from controlforge import verify_solution
from controlforge.hardness import HittingSetInstance
from controlforge.solvers import enumerate_partitions


def iter_hitting_set_instances(max_elements=3, max_sets=3):
    """Every instance with <= max_elements elements, all distinct-subset
    families of <= max_sets nonempty sets, and every bound 1 <= k <= m."""
    for m in range(1, max_elements + 1):
        elements = tuple(f"b{i}" for i in range(1, m + 1))
        subsets = [
            frozenset(combo)
            for size in range(1, m + 1)
            for combo in itertools.combinations(elements, size)
        ]
        for n in range(max_sets + 1):
            for family in itertools.combinations(subsets, n):
                for k in range(1, m + 1):
                    yield HittingSetInstance(elements, family, k)


def verifying_partitions(control_type, instance):
    """All partitions of the type's kind that verify on the instance."""
    return [
        partition
        for partition in enumerate_partitions(instance, control_type.partition_kind)
        if verify_solution(control_type, instance, partition)
    ]
