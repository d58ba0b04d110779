"""Repair-graph cut bound for the storage-bandwidth plane.

The classical converse says k summands of min(alpha, (d-i)*beta),
i = 0..k-1, must cover the whole file.  Linearized over breakpoints j
(how many summands take alpha) this is the facet list
j*alpha + w_j*beta >= 1 with w_j the tail sum of the (d-i) weights.
Exact repair satisfies every one of these, so they bound the region
from outside; the point of the rest of this package is that they are
not the whole story.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class CutsetBound:
    n: int
    k: int
    d: int
    facets: tuple  # ((j, w_j) as (Fraction, Fraction) coefficient pairs)


def facets(n: int, k: int, d: int | None = None) -> CutsetBound:
    """The k+1 linear facets j*alpha + w_j*beta >= 1, j = 0..k,
    with w_j = sum of (d-i) for i = j..k-1."""
    if d is None:
        d = n - 1
    if not (1 <= k < n and k <= d < n):
        raise ValueError(f"invalid parameters (n={n}, k={k}, d={d})")
    out = []
    for j in range(k + 1):
        wj = sum(d - i for i in range(j, k))
        out.append((Fraction(j), Fraction(wj)))
    return CutsetBound(n, k, d, tuple(out))


def min_sum(bound: CutsetBound, alpha, beta) -> Fraction:
    a, b = Fraction(alpha), Fraction(beta)
    return sum((min(a, (bound.d - i) * b) for i in range(bound.k)), Fraction(0))


def feasible(bound: CutsetBound, alpha, beta) -> bool:
    """Point test, computed two ways that must agree: every facet holds,
    and the min-sum covers the file."""
    a, b = Fraction(alpha), Fraction(beta)
    by_facets = all(j * a + w * b >= 1 for j, w in bound.facets)
    by_sum = min_sum(bound, a, b) >= 1
    if by_facets != by_sum:
        raise AssertionError(
            f"facet and min-sum evaluations disagree at ({a}, {b})"
        )
    return by_facets
