#!/usr/bin/env python3
"""Sweep the Hitting-Set encoding over every small instance.

Checks, for all ground sets of up to --max-elements elements, all families of
distinct nonempty subsets up to --max-sets, and every bound k: that Hitting-
Set feasibility coincides with brute-force membership of the encoded election
in plurality DC-PC-TP-NUW, and that witnesses round-trip through the forward
builder and the extractor. Exits nonzero on any mismatch.
"""

import argparse
import itertools
import sys
import time

from controlforge.hardness import (
    ENCODED_CONTROL_TYPE,
    HittingSetInstance,
    brute_force_hitting_set,
    encode_hitting_set,
    extract_hitting_set,
    forward_partition,
)
from controlforge.solvers import brute_force_search


def iter_instances(max_elements, max_sets):
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


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-elements", type=int, default=3)
    parser.add_argument("--max-sets", type=int, default=3)
    args = parser.parse_args()

    started = time.perf_counter()
    total = feasible = mismatches = round_trips = 0
    for hs in iter_instances(args.max_elements, args.max_sets):
        total += 1
        encoded = encode_hitting_set(hs)
        witness = brute_force_hitting_set(hs)
        member = brute_force_search(ENCODED_CONTROL_TYPE, encoded.instance).found
        if (witness is not None) != member:
            mismatches += 1
            print(f"MISMATCH: {hs}")
            continue
        if witness is None:
            continue
        feasible += 1
        extracted = extract_hitting_set(encoded, forward_partition(hs, witness))
        round_trips += 1
        if extracted is None or not hs.hits_all(extracted) or len(extracted) > hs.bound:
            mismatches += 1
            print(f"BROKEN ROUND TRIP: {hs}")
    print(
        f"{total} instances ({feasible} feasible), {round_trips} round trips, "
        f"{mismatches} mismatches, {time.perf_counter() - started:.1f}s"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
