"""Shannon-cone constraint rows over canonical entropy classes.

A row is a sparse rational expression over the columns ALPHA, BETA, BIGB
and EntropyClass objects, read as  sum(coeff * column) >= 0.  Spanning
arguments collapse to the single BIGB column (every spanning set carries
the whole stored data), empty arguments contribute nothing, and
functional dependencies disappear inside canonicalization, so a row
never mentions two names for one entropy value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .universe import EntropyClass, Universe

ALPHA = "alpha"
BETA = "beta"
BIGB = "B"

KIND_ORDER = {
    "storage-cap": 0,
    "bandwidth-cap": 1,
    "spanning-value": 2,
    "monotonicity": 3,
    "submodularity": 4,
}


def column_key(col) -> tuple:
    """Total order on row columns: alpha, beta, B, then classes by size
    and index tuple.  Keeps every serialization byte-stable."""
    if col == ALPHA:
        return (0,)
    if col == BETA:
        return (1,)
    if col == BIGB:
        return (2,)
    return (3, col.size, col.indices())


@dataclass
class LinExpr:
    coeffs: dict
    kind: str = ""

    def signature(self) -> tuple:
        return tuple(
            (column_key(c), self.coeffs[c])
            for c in sorted(self.coeffs, key=column_key)
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, values) -> Fraction:
        return sum(
            (c * values.get(col, Fraction(0)) for col, c in self.coeffs.items()),
            Fraction(0),
        )

    def scaled(self, factor) -> "LinExpr":
        f = Fraction(factor)
        return LinExpr({c: v * f for c, v in self.coeffs.items() if v * f != 0}, self.kind)

    def __repr__(self) -> str:
        parts = []
        for col in sorted(self.coeffs, key=column_key):
            parts.append(f"{self.coeffs[col]}*{col}")
        return f"LinExpr({' + '.join(parts) or '0'} >= 0)"


@dataclass
class ConstraintSet:
    rows: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def _col_of(u: Universe, closed_mask: int, cache: dict):
    """Column for the entropy of a closed mask: None for the empty set,
    BIGB when it spans, otherwise its canonical class."""
    if closed_mask == 0:
        return None
    if closed_mask == u.full_mask:
        return BIGB
    cm = u.canon_mask(closed_mask)
    cls = cache.get(cm)
    if cls is None:
        cls = EntropyClass(u.n, u.k, cm)
        cache[cls.mask] = cls
    return cls


def _make_row(u: Universe, pairs, kind: str, cache: dict) -> LinExpr:
    coeffs: dict = {}
    for mask, c in pairs:
        col = _col_of(u, mask, cache)
        if col is None:
            continue
        coeffs[col] = coeffs.get(col, 0) + c
    return LinExpr({c: Fraction(v) for c, v in coeffs.items() if v}, kind)


def storage_and_bandwidth_caps(u: Universe) -> ConstraintSet:
    """The two symmetry-reduced capacity rows: ALPHA bounds a node's
    content, BETA bounds one repair message."""
    cache: dict = {}
    w1 = _col_of(u, u.closure_mask(u.mask_of_tokens(["W1"])), cache)
    s12 = _col_of(u, u.closure_mask(u.mask_of_tokens(["S1->2"])), cache)
    return ConstraintSet(
        [
            LinExpr({ALPHA: Fraction(1), w1: Fraction(-1)}, "storage-cap"),
            LinExpr({BETA: Fraction(1), s12: Fraction(-1)}, "bandwidth-cap"),
        ]
    )


def _require_closed(u: Universe, mask: int):
    if u.closure_mask(mask) != mask:
        raise ValueError("argument set is not dependency-closed")


def submodularity(u: Universe, a, b) -> LinExpr:
    """H(a) + H(b) - H(a|b union) - H(a&b) >= 0 for closed a, b."""
    ma, mb = u.mask_of(a), u.mask_of(b)
    _require_closed(u, ma)
    _require_closed(u, mb)
    cache: dict = {}
    return _make_row(
        u,
        [(ma, 1), (mb, 1), (u.closure_mask(ma | mb), -1), (ma & mb, -1)],
        "submodularity",
        cache,
    )


def monotonicity(u: Universe, a, b) -> LinExpr:
    """H(b) - H(a) >= 0 for closed a subseteq b."""
    ma, mb = u.mask_of(a), u.mask_of(b)
    _require_closed(u, ma)
    _require_closed(u, mb)
    if ma & ~mb:
        raise ValueError("monotonicity needs a subseteq b")
    cache: dict = {}
    kind = "spanning-value" if mb == u.full_mask else "monotonicity"
    return _make_row(u, [(mb, 1), (ma, -1)], kind, cache)


def enumerate_rows(
    u: Universe,
    classes,
    include_elementals: bool = False,
    include_caps: bool = True,
    anchor_masks=None,
    elemental_bases=None,
) -> list[LinExpr]:
    """Deterministic, deduplicated constraint pool over a class family.

    Emits the two caps, H(A) >= 0 and BIGB - H(A) >= 0 per class, aligned
    monotonicity between nested orbit members, and submodularity over
    every (representative, orbit member) pair.  With include_elementals,
    also the single-variable-growth instances H(C+x) + H(C+y) >= H(C+x+y)
    + H(C) for each base C and variables x, y outside it (bases default
    to the whole family plus the empty set; elemental_bases narrows
    them).  Rows whose canonical arguments fall outside the family
    (other than empty or spanning) are dropped, so the pool never
    references a class it was not given.

    anchor_masks, when given, restricts submodularity to pairs touching
    that mask set: a cheap middle rung for verification ladders where
    the family grew by a closure round but witnesses still involve at
    least one original class.
    """
    cache: dict = {}
    fam_masks = sorted({cls.mask for cls in classes}, reverse=True)
    for m in fam_masks:
        if m == 0 or m == u.full_mask:
            raise ValueError("family must hold proper nonempty classes")
        if u.canon_mask(m) != m:
            raise ValueError("family members must be canonical classes")
    allowed = set(fam_masks) | {0, u.full_mask}
    anchors = None if anchor_masks is None else set(anchor_masks)

    rows: list[LinExpr] = []
    if include_caps:
        rows.extend(storage_and_bandwidth_caps(u))
    for m in fam_masks:
        rows.append(_make_row(u, [(m, 1)], "monotonicity", cache))
        rows.append(_make_row(u, [(u.full_mask, 1), (m, -1)], "spanning-value", cache))

    full = u.full_mask
    for ai, ra in enumerate(fam_masks):
        for rb in fam_masks[ai:]:
            if anchors is not None and ra not in anchors and rb not in anchors:
                continue
            for m in u.orbit_masks(rb):
                if m == ra:
                    continue
                inter = ra & m
                if u.canon_mask(inter) not in allowed:
                    continue
                union = u.closure_mask(ra | m)
                if union != full and u.canon_mask(union) not in allowed:
                    continue
                rows.append(
                    _make_row(
                        u, [(ra, 1), (m, 1), (union, -1), (inter, -1)],
                        "submodularity", cache,
                    )
                )
                if inter == m:
                    rows.append(_make_row(u, [(ra, 1), (m, -1)], "monotonicity", cache))
                elif inter == ra:
                    rows.append(_make_row(u, [(m, 1), (ra, -1)], "monotonicity", cache))

    if include_elementals:
        nv = u.num_vars
        if elemental_bases is None:
            bases = [0] + fam_masks
        else:
            bases = sorted(set(elemental_bases), reverse=True)
            for c in bases:
                if c and c not in allowed:
                    raise ValueError("elemental bases must come from the family")
        for c_mask in bases:
            outside = [v for v in range(nv) if not c_mask >> (nv - 1 - v) & 1]
            for xi, x in enumerate(outside):
                bx = u.var_bit(x)
                cx = u.closure_mask(c_mask | bx)
                if cx != full and u.canon_mask(cx) not in allowed:
                    continue
                for y in outside[xi + 1:]:
                    by = u.var_bit(y)
                    cy = u.closure_mask(c_mask | by)
                    if cy != full and u.canon_mask(cy) not in allowed:
                        continue
                    cxy = u.closure_mask(c_mask | bx | by)
                    if cxy != full and u.canon_mask(cxy) not in allowed:
                        continue
                    rows.append(
                        _make_row(
                            u, [(cx, 1), (cy, 1), (cxy, -1), (c_mask, -1)],
                            "submodularity", cache,
                        )
                    )

    seen: dict = {}
    for row in rows:
        if row.is_zero():
            continue
        sig = row.signature()
        if sig not in seen:
            seen[sig] = row
    out = list(seen.values())
    out.sort(key=lambda r: (KIND_ORDER.get(r.kind, 9), r.signature()))
    return out
