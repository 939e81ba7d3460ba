"""Brute-force recounts of the construct match/total case spaces.

These enumerators materialize the variant sets behind each construct factor
as explicit collections and count them after structural deduplication. No
closed form appears here on purpose: if a factor formula in `logic` were
mistranscribed, the equality tests between the two modules would catch it.

Activities are modeled as distinguishable labels 0..n-1. For a sequence,
the variant universe is every ordering (n! label tuples) together with
every order-preserving omission (the 2^n - 1 non-empty subsequences); the
unchanged tuple is a member of both, so the union has n! + 2^n - 2 elements,
of which the omissions are the matches. A flow without links accepts every
omission variant (ratio 1); with links only the original ordering matches.
A switch over n conditions has the 2^n change/keep assignments as its
universe with a single all-keep match. A pick pairs each non-empty kept
event subset with either unchanged or changed conditions; the unchanged
half matches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

# Factorial spaces get expensive quickly; power-set spaces less so.
MAX_FACTORIAL_N = 8
MAX_POWERSET_N = 16


@dataclass(frozen=True)
class EnumerationResult:
    construct_kind: str
    n: int
    match_count: int
    total_count: int

    def __post_init__(self):
        if not 0 < self.match_count <= self.total_count:
            raise ValueError("match count must be positive and at most the total")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.match_count, self.total_count)


def _check_range(n: int, cap: int, kind: str) -> None:
    if n < 1:
        raise ValueError(f"{kind}: n must be at least 1, got {n}")
    if n > cap:
        raise ValueError(f"{kind}: n capped at {cap} to bound the enumeration, got {n}")


def _omission_variants(n: int) -> set[tuple[int, ...]]:
    """All order-preserving non-empty subsequences of (0, .., n-1)."""
    labels = tuple(range(n))
    variants: set[tuple[int, ...]] = set()
    for size in range(1, n + 1):
        for kept in itertools.combinations(labels, size):
            variants.add(kept)  # combinations preserve original order
    return variants


def enumerate_sequence(n: int) -> EnumerationResult:
    """Count sequence variants by generating orderings and omissions."""
    _check_range(n, MAX_FACTORIAL_N, "sequence")
    orderings = set(itertools.permutations(range(n)))
    omissions = _omission_variants(n)
    universe = orderings | omissions
    return EnumerationResult("sequence", n, match_count=len(omissions), total_count=len(universe))


def enumerate_switch(n: int) -> EnumerationResult:
    """Count condition-change assignments; only the all-unchanged one matches."""
    _check_range(n, MAX_POWERSET_N, "switch")
    assignments = set(itertools.product((False, True), repeat=n))
    matches = {a for a in assignments if not any(a)}
    return EnumerationResult("switch", n, match_count=len(matches), total_count=len(assignments))


def enumerate_pick(n: int) -> EnumerationResult:
    """Count kept-event subsets, each in an unchanged and a changed variant."""
    _check_range(n, MAX_POWERSET_N, "pick")
    kept_subsets: set[tuple[int, ...]] = set()
    for size in range(1, n + 1):
        kept_subsets.update(itertools.combinations(range(n), size))
    universe = {(kept, changed) for kept in kept_subsets for changed in (False, True)}
    matches = {(kept, changed) for kept, changed in universe if not changed}
    return EnumerationResult("pick", n, match_count=len(matches), total_count=len(universe))


def enumerate_flow(n: int, has_links: bool) -> EnumerationResult:
    """Count flow variants: omission universe without links, orderings with."""
    _check_range(n, MAX_FACTORIAL_N, "flow")
    if has_links:
        orderings = set(itertools.permutations(range(n)))
        identity = tuple(range(n))
        matches = {p for p in orderings if p == identity}
        return EnumerationResult("flow", n, match_count=len(matches), total_count=len(orderings))
    omissions = _omission_variants(n)
    return EnumerationResult("flow", n, match_count=len(omissions), total_count=len(omissions))
