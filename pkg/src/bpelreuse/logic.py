"""Closed-form match probability factors for structured BPEL constructs.

Each construct kind has its own counting argument:

    sequence : matches are the 2^n - 1 omission variants (order preserved,
               at least one activity kept) out of a sample space of all n!
               orderings plus those omission variants, with the unchanged
               arrangement counted once -> (2^n - 1) / (n! + 2^n - 2)
    switch   : one unchanged assignment out of the 2^n ways the n conditions
               can individually change -> 1 / 2^n
    pick     : every event-deletion variant matches and the total space is
               twice the matches -> (2^n - 1) / (2^(n+1) - 2), always 1/2
    flow     : without links every omission variant matches (factor 1);
               with links only the original of the n! orderings -> 1 / n!
    while    : the loop condition either still holds or does not -> 1/2

The process-level logic match probability is the product of the factors of
all scored (non-excluded) constructs; a process without any scored construct
has factor 1. The brute-force counterparts of these formulas live in
`oracle` and are held equal by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .bpel import BpelProcess, ConstructInfo, structured_constructs


def sequence_factor(n: int) -> Fraction:
    """Match probability of an n-activity sequence."""
    if n < 1:
        raise ValueError("sequence needs at least one activity")
    return Fraction(2**n - 1, factorial(n) + 2**n - 2)


def switch_factor(case_count: int) -> Fraction:
    """Match probability of a conditional with `case_count` conditions."""
    if case_count < 1:
        raise ValueError("switch needs at least one case")
    return Fraction(1, 2**case_count)


def pick_factor(event_count: int) -> Fraction:
    """Match probability of an event choice; collapses to 1/2 for every n."""
    if event_count < 1:
        raise ValueError("pick needs at least one event")
    return Fraction(2**event_count - 1, 2 ** (event_count + 1) - 2)


def flow_factor(n: int, has_links: bool) -> Fraction:
    """Match probability of a parallel block: 1 unless links order it."""
    if n < 1:
        raise ValueError("flow needs at least one activity")
    if not has_links:
        return Fraction(1)
    return Fraction(1, factorial(n))


def while_factor() -> Fraction:
    """Match probability of a loop; its condition either survives or not."""
    return Fraction(1, 2)


@dataclass(frozen=True)
class ConstructFactor:
    """One construct's contribution to the logic product, for reports."""

    kind: str
    n: int
    factor: Fraction
    formula: str
    path: str
    excluded: bool = False
    reason: str = ""


def _factor_for(info: ConstructInfo) -> tuple[Fraction, str]:
    if info.kind == "sequence":
        return sequence_factor(info.n), "sequence"
    if info.kind == "switch":
        return switch_factor(info.n), "switch"
    if info.kind == "pick":
        return pick_factor(info.n), "pick"
    if info.kind == "flow":
        tag = "flow-dependent" if info.has_links else "flow-concurrent"
        return flow_factor(info.n, info.has_links), tag
    if info.kind == "while":
        return while_factor(), "while"
    raise ValueError(f"no factor formula for construct kind {info.kind!r}")


def construct_factors(process: BpelProcess) -> tuple[ConstructFactor, ...]:
    """Per-construct factors in enumeration order, exclusions flagged.

    Excluded constructs carry factor 1 and are never multiplied into the
    product; they stay in the list so the product is auditable end to end.
    """
    factors = []
    for info in structured_constructs(process):
        if info.excluded:
            factors.append(
                ConstructFactor(
                    kind=info.kind,
                    n=info.n,
                    factor=Fraction(1),
                    formula="excluded",
                    path=info.path,
                    excluded=True,
                    reason=info.reason,
                )
            )
            continue
        factor, formula = _factor_for(info)
        factors.append(
            ConstructFactor(kind=info.kind, n=info.n, factor=factor, formula=formula, path=info.path)
        )
    return tuple(factors)


def logic_match_probability(process: BpelProcess) -> Fraction:
    """Product of all scored construct factors; 1 for a construct-free process."""
    product = Fraction(1)
    for cf in construct_factors(process):
        if not cf.excluded:
            product *= cf.factor
    return product


def logic_mismatch_probability(process: BpelProcess) -> Fraction:
    """Complement of the logic match probability."""
    return 1 - logic_match_probability(process)
