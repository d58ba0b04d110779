"""Integer proof certificates: strict JSON codec, exact column-sum
check, per-row semantic verification, and LaTeX export.

A certificate asserts one linear storage-bandwidth bound as a short
table: a list of entropy terms, integer coefficient rows, and a target
row.  Soundness rests on two independent checks.  First, the rows must
sum column by column to the target, exactly.  Second, every row must
itself be a valid information inequality; the verifier rebuilds a
constraint pool from the row's own term sets and searches for a
nonnegative rational combination with an exact LP, never trusting the
prover's working.

Row verification escalates through a ladder: pairwise submodularity
over the row's classes, then single-variable-growth instances, then
families grown by union/intersection closure rounds (each round tried
first with pairs anchored on the previous family, then unrestricted).
A row that exhausts the ladder is reported unverified, never invalid;
only a failed sum check or a malformed target makes a certificate
invalid.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .instance import ALPHA, BETA, BIGB, LinExpr, column_key, enumerate_rows
from .ratlp import IncrementalDualSolver, LPProblem, LPRow, solve
from .universe import EntropyClass, Universe, index_for_token

RESERVED_COLUMNS = (ALPHA, BETA, BIGB)

_TERM_ID = re.compile(r"^T[1-9][0-9]*$")

# verification ladder defaults: depth counts family generations, the
# family size cap aborts a closure round that explodes
DEFAULT_MAX_DEPTH = 2
FAMILY_CAP = 5000


class CertificateError(ValueError):
    """Raised for malformed certificate files or inconsistent content."""


@dataclass
class Certificate:
    """Parsed certificate: problem size, terms, coefficient rows, target.

    Insertion order of terms, rows, and coefficient keys is preserved
    so that serialize(parse(data)) == data for any valid input.
    """

    n: int
    k: int
    d: int
    terms: dict  # term id -> tuple of variable tokens
    rows: list  # list of {column key: int}
    target: dict  # {column key: int}
    meta: dict = field(default_factory=dict)

    @property
    def problem(self) -> tuple:
        return (self.n, self.k, self.d)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise CertificateError(msg)


def _as_int(value, where: str) -> int:
    _require(
        isinstance(value, int) and not isinstance(value, bool),
        f"{where}: expected an integer, got {value!r}",
    )
    return value


def _parse_coeffs(obj, where: str, term_ids) -> dict:
    _require(isinstance(obj, dict), f"{where}: expected an object")
    _require(set(obj) == {"coeffs"}, f"{where}: expected exactly one key 'coeffs'")
    coeffs = obj["coeffs"]
    _require(isinstance(coeffs, dict), f"{where}.coeffs: expected an object")
    out = {}
    for key, value in coeffs.items():
        if key not in RESERVED_COLUMNS and key not in term_ids:
            raise CertificateError(f"{where}.coeffs: undeclared column {key!r}")
        v = _as_int(value, f"{where}.coeffs[{key!r}]")
        _require(v != 0, f"{where}.coeffs[{key!r}]: zero coefficients must be omitted")
        out[key] = v
    return out


def parse(data) -> Certificate:
    """Strict parse of certificate JSON (bytes or str).

    Rejects unknown fields, undeclared columns, non-integer or zero
    coefficients, duplicate or malformed term ids, and invalid variable
    tokens.  Syntax errors report line and column.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CertificateError(f"not valid UTF-8: {e}") from e
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise CertificateError(
            f"JSON syntax error at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e

    _require(isinstance(obj, dict), "top level: expected an object")
    extra = set(obj) - {"problem", "terms", "rows", "target", "meta"}
    _require(not extra, f"top level: unknown fields {sorted(extra)}")
    for key in ("problem", "terms", "rows", "target"):
        _require(key in obj, f"top level: missing field {key!r}")

    prob = obj["problem"]
    _require(isinstance(prob, dict), "problem: expected an object")
    _require(set(prob) == {"n", "k", "d"}, "problem: expected exactly keys n, k, d")
    n = _as_int(prob["n"], "problem.n")
    k = _as_int(prob["k"], "problem.k")
    d = _as_int(prob["d"], "problem.d")
    _require(n >= 1 and k >= 1 and d >= 1, "problem: n, k, d must be positive")

    _require(isinstance(obj["terms"], list), "terms: expected an array")
    terms: dict = {}
    for pos, entry in enumerate(obj["terms"]):
        where = f"terms[{pos}]"
        _require(isinstance(entry, dict), f"{where}: expected an object")
        _require(set(entry) == {"id", "vars"}, f"{where}: expected exactly keys id, vars")
        tid = entry["id"]
        _require(isinstance(tid, str) and _TERM_ID.match(tid), f"{where}: bad term id {tid!r}")
        _require(tid not in terms, f"{where}: duplicate term id {tid!r}")
        toks = entry["vars"]
        _require(isinstance(toks, list) and toks, f"{where}.vars: expected a nonempty array")
        seen = set()
        for tok in toks:
            _require(isinstance(tok, str), f"{where}.vars: expected strings")
            try:
                index_for_token(n, tok)
            except ValueError as e:
                raise CertificateError(f"{where}.vars: {e}") from e
            _require(tok not in seen, f"{where}.vars: duplicate token {tok!r}")
            seen.add(tok)
        terms[tid] = tuple(toks)

    _require(isinstance(obj["rows"], list), "rows: expected an array")
    rows = [_parse_coeffs(r, f"rows[{i}]", terms) for i, r in enumerate(obj["rows"])]
    target = _parse_coeffs(obj["target"], "target", terms)

    meta = obj.get("meta", {})
    _require(isinstance(meta, dict), "meta: expected an object")
    return Certificate(n, k, d, terms, rows, target, meta)


def serialize(cert: Certificate) -> bytes:
    obj = {
        "problem": {"n": cert.n, "k": cert.k, "d": cert.d},
        "terms": [{"id": tid, "vars": list(toks)} for tid, toks in cert.terms.items()],
        "rows": [{"coeffs": dict(row)} for row in cert.rows],
        "target": {"coeffs": dict(cert.target)},
        "meta": cert.meta,
    }
    return (json.dumps(obj, indent=1) + "\n").encode("utf-8")


def load(path) -> Certificate:
    with open(path, "rb") as f:
        return parse(f.read())


def load_bundled(name: str) -> Certificate:
    """Load one of the certificates shipped inside the package."""
    blob = resources.files("repairbound").joinpath("data", f"{name}.cert.json")
    return parse(blob.read_bytes())


# -- exact sum check ---------------------------------------------------


def check_sum(cert: Certificate):
    """Column sums of the rows against the target, exactly.

    Returns (sum_ok, meaning) where meaning is the gcd-reduced (a, b, c)
    of a target of the shape a*alpha + b*beta - c*B with a, b, c >= 0
    and not all zero, or None when the target has any other shape.
    """
    sums: dict = {}
    for row in cert.rows:
        for key, v in row.items():
            sums[key] = sums.get(key, 0) + v
    sums = {key: v for key, v in sums.items() if v}
    sum_ok = sums == cert.target

    meaning = None
    if set(cert.target) <= set(RESERVED_COLUMNS):
        a = cert.target.get(ALPHA, 0)
        b = cert.target.get(BETA, 0)
        c = -cert.target.get(BIGB, 0)
        if a >= 0 and b >= 0 and c >= 0 and (a or b or c):
            g = math.gcd(a, math.gcd(b, c))
            meaning = (a // g, b // g, c // g)
    return sum_ok, meaning


def format_meaning(meaning) -> str:
    a, b, c = meaning
    left = "+".join(s for s in (a and f"{a}α", b and f"{b}β") if s) or "0"
    return f"{left} ≥ {c}B"


# -- per-row semantic verification -------------------------------------


@dataclass
class RowCheck:
    index: int
    status: str  # "valid" | "unverified"
    depth: int
    witness: tuple = ()  # ((multiplier, pool row LinExpr), ...) when valid
    detail: str = ""


def term_columns(u: Universe, cert: Certificate) -> dict:
    """Map each term id to its canonical closed class, or to the total
    information column when the term's closure spans the universe."""
    cols = {}
    for tid, toks in cert.terms.items():
        m = u.closure_mask(u.mask_of_tokens(toks))
        cols[tid] = BIGB if m == u.full_mask else u.canon_class(m)
    return cols


def _row_expr(row: dict, term_cols: dict) -> LinExpr:
    coeffs: dict = {}
    for key, v in row.items():
        if key == ALPHA or key == BETA or key == BIGB:
            col = key
        else:
            col = term_cols[key]
        coeffs[col] = coeffs.get(col, 0) + v
    return LinExpr({c: Fraction(v) for c, v in coeffs.items() if v}, "certificate-row")


def _close_once(u: Universe, masks, cap: int):
    """One union/intersection closure round over (representative, orbit
    member) pairs.  Returns (new mask set, completed flag)."""
    fam = sorted(masks, reverse=True)
    out = set(masks)
    full = u.full_mask
    for i, ra in enumerate(fam):
        for rb in fam[i:]:
            for m in u.orbit_masks(rb):
                un = u.closure_mask(ra | m)
                if un != full:
                    out.add(u.canon_mask(un))
                inter = ra & m
                if inter:
                    out.add(u.canon_mask(inter))
                if len(out) > cap:
                    return out, False
    return out, True


def _pool(u: Universe, fam_masks, elem: bool, anchors, bases, cache):
    key = (
        frozenset(fam_masks),
        elem,
        None if anchors is None else frozenset(anchors),
        frozenset(bases),
    )
    hit = cache.get(key)
    if hit is not None:
        return hit
    classes = [EntropyClass(u.n, u.k, m) for m in sorted(fam_masks, reverse=True)]
    rows = enumerate_rows(
        u,
        classes,
        include_elementals=elem,
        include_caps=False,
        anchor_masks=anchors,
        elemental_bases=bases if elem else None,
    )
    cache[key] = rows
    return rows


def _anchor_rows(w_cls, s_cls):
    # caps pinned to equality: sound for tabulated bounds, whose targets
    # carry nonnegative alpha and beta weight, so slack in either cap
    # only loosens the bound; rows are free to spend cap slack against
    # entropy terms (some shipped rows carry negative cap coefficients)
    return [
        LinExpr({ALPHA: Fraction(1), w_cls: Fraction(-1)}, "storage-anchor"),
        LinExpr({BETA: Fraction(1), s_cls: Fraction(-1)}, "bandwidth-anchor"),
    ]


def _cone_solve(u: Universe, fam_masks, rows, expr: LinExpr, boxed: bool):
    """Minimize the row over the cone cut out by `rows` (anchors as
    equalities, everything else >= 0), optionally intersected with the
    unit box to make a negative minimum attainable at a point."""
    columns = [ALPHA, BETA, BIGB] + sorted(
        (EntropyClass(u.n, u.k, m) for m in fam_masks), key=column_key
    )
    lp_rows = [
        LPRow(dict(r.coeffs), Fraction(0), "=" if r.kind.endswith("anchor") else ">=")
        for r in rows
    ]
    if boxed:
        lp_rows += [LPRow({c: Fraction(-1)}, Fraction(1), ">=") for c in columns]
    lp = LPProblem(
        columns=columns,
        objective=dict(expr.coeffs),
        rows=lp_rows,
        nonneg=set(columns),
    )
    return solve(lp, orientation="dual", known_feasible=True)


def _try_pool(u: Universe, pool, fam_masks, expr: LinExpr, w_cls, s_cls):
    """Minimize the row over the pool's cone.  Returns a witness list
    when the minimum is zero, else None."""
    all_rows = list(pool) + _anchor_rows(w_cls, s_cls)
    sol = _cone_solve(u, fam_masks, all_rows, expr, boxed=False)
    if sol.status == "unbounded":
        return None
    if sol.status != "optimal" or sol.value != 0:
        raise CertificateError(f"row LP reported {sol.status}: solver invariant broken")
    return tuple(
        (lam, all_rows[i]) for i, lam in enumerate(sol.duals) if lam != 0
    )


def _candidates(u: Universe, fam_masks, anchors, bases):
    """Compact descriptor list for every inequality the pool over this
    family would contain, minus what the active set carries upfront.

    Each descriptor is (ka, kb, ku, ki): the instance asserts
    H(ka) + H(kb) - H(ku) - H(ki) >= 0, keys being canonical class
    masks, "B" for a spanning argument, or 0 for an empty one.
    Monotonicity is encoded with kb = ki = 0.
    """
    full = u.full_mask
    allowed = set(fam_masks) | {0, full}
    fam = sorted(fam_masks, reverse=True)
    anc = None if anchors is None else set(anchors)
    seen = set()
    out = []

    def key_of(mask):
        return "B" if mask == full else mask

    def emit(ka, kb, ku, ki):
        desc = (ka, kb, ku, ki)
        if desc not in seen:
            seen.add(desc)
            out.append(desc)

    for ai, ra in enumerate(fam):
        for rb in fam[ai:]:
            if anc is not None and ra not in anc and rb not in anc:
                continue
            for m in u.orbit_masks(rb):
                if m == ra:
                    continue
                inter = ra & m
                ci = u.canon_mask(inter)
                if ci not in allowed:
                    continue
                union = u.closure_mask(ra | m)
                if union != full and u.canon_mask(union) not in allowed:
                    continue
                emit(ra, rb, key_of(u.canon_mask(union)), ci if ci else 0)
                if inter == m:
                    emit(ra, 0, rb, 0)
                elif inter == ra:
                    emit(rb, 0, ra, 0)

    nv = u.num_vars
    for c_mask in bases:
        outside = [v for v in range(nv) if not c_mask >> (nv - 1 - v) & 1]
        for xi, x in enumerate(outside):
            bx = u.var_bit(x)
            cx = u.closure_mask(c_mask | bx)
            kx = key_of(u.canon_mask(cx)) if cx != full else "B"
            if kx != "B" and kx not in allowed:
                continue
            for y in outside[xi + 1:]:
                by = u.var_bit(y)
                cy = u.closure_mask(c_mask | by)
                ky = key_of(u.canon_mask(cy)) if cy != full else "B"
                if ky != "B" and ky not in allowed:
                    continue
                cxy = u.closure_mask(c_mask | bx | by)
                kxy = key_of(u.canon_mask(cxy)) if cxy != full else "B"
                if kxy != "B" and kxy not in allowed:
                    continue
                emit(kx, ky, kxy, c_mask if c_mask else 0)
    return out


def _expr_of_descriptor(u: Universe, desc) -> LinExpr:
    coeffs: dict = {}
    for key, sign in zip(desc, (1, 1, -1, -1)):
        if key == 0:
            continue
        col = BIGB if key == "B" else u.canon_class(key)
        coeffs[col] = coeffs.get(col, 0) + sign
    kind = "monotonicity" if desc[1] == 0 and desc[3] == 0 else "submodularity"
    return LinExpr({c: Fraction(v) for c, v in coeffs.items() if v}, kind)


def _try_pool_active(
    u: Universe, fam_masks, anchors, bases, expr: LinExpr, w_cls, s_cls, ctx
):
    """Active-set variant of _try_pool for large families: solve a boxed
    relaxation over a small working row set, separate violated instances
    at the optimum, repeat with a warm basis.  Exactly the same answer
    as enumerating the whole pool, since separation scans the identical
    instance space.

    At a boxed optimum of zero the box multipliers vanish (their sum is
    the optimum itself), so the boxed duals restricted to pool rows and
    anchors already form the cone witness.
    """
    cand_key = (
        frozenset(fam_masks),
        None if anchors is None else frozenset(anchors),
        tuple(bases),
    )
    cands = ctx.setdefault("cands", {})
    if cand_key not in cands:
        cands[cand_key] = _candidates(u, fam_masks, anchors, bases)
    descriptors = cands[cand_key]

    base = frozenset(b for b in bases if b)
    active = list(_pool(u, base, True, None, bases, ctx.setdefault("pool", {})))
    for m in sorted(fam_masks, reverse=True):
        active.append(
            LinExpr(
                {BIGB: Fraction(1), u.canon_class(m): Fraction(-1)}, "spanning-value"
            )
        )
    active += _anchor_rows(w_cls, s_cls)
    sigs = {r.signature() for r in active}

    # Monotonicity instances are cheap (two nonzeros) and prune most of the
    # degenerate corners the boxed relaxation would otherwise wander through,
    # so start with all of them in the working set.
    submod_descriptors = []
    for desc in descriptors:
        if desc[1] == 0 and desc[3] == 0:
            row = _expr_of_descriptor(u, desc)
            sig = row.signature()
            if sig not in sigs:
                sigs.add(sig)
                active.append(row)
        else:
            submod_descriptors.append(desc)
    descriptors = submod_descriptors

    columns = [ALPHA, BETA, BIGB] + sorted(
        (EntropyClass(u.n, u.k, m) for m in fam_masks), key=column_key
    )
    box = [LPRow({c: Fraction(-1)}, Fraction(1), ">=") for c in columns]
    n_box = len(box)
    solver = IncrementalDualSolver(
        columns,
        dict(expr.coeffs),
        box
        + [
            LPRow(dict(r.coeffs), Fraction(0), "=" if r.kind.endswith("anchor") else ">=")
            for r in active
        ],
        set(columns),
    )

    batch = 200
    for _ in range(200):
        sol = solver.solve()
        if sol.value == 0:
            return tuple(
                (lam, active[i - n_box])
                for i, lam in enumerate(sol.duals)
                if lam != 0 and i >= n_box
            )

        den = 1
        for v in sol.primal.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        val = {0: 0, "B": int(sol.primal[BIGB] * den)}
        for col, v in sol.primal.items():
            if isinstance(col, EntropyClass):
                val[col.mask] = int(v * den)

        violated = []
        for idx, (ka, kb, ku, ki) in enumerate(descriptors):
            v = val[ka] + val[kb] - val[ku] - val[ki]
            if v < 0:
                violated.append((v, idx))
        if not violated:
            return None
        violated.sort()
        picks = violated[:batch]
        rest = violated[batch:]
        if rest:
            stride = max(1, len(rest) // batch)
            picks += rest[::stride][:batch]
        fresh = []
        for _, idx in picks:
            row = _expr_of_descriptor(u, descriptors[idx])
            sig = row.signature()
            if sig not in sigs:
                sigs.add(sig)
                active.append(row)
                fresh.append(LPRow(dict(row.coeffs), Fraction(0), ">="))
        if not fresh:
            raise CertificateError("separation produced only duplicate rows")
        solver.add_rows(fresh)
    raise CertificateError("active-set row search failed to converge")


def check_row(
    u: Universe,
    cert: Certificate,
    index: int,
    max_depth: int = DEFAULT_MAX_DEPTH,
    family_cap: int = FAMILY_CAP,
    _ctx: dict | None = None,
) -> RowCheck:
    """Verify one coefficient row as an information inequality.

    The search family starts from the row's own term classes plus the
    canonical single-node and single-message classes, then grows by
    closure rounds up to max_depth generations.  Valid rows report the
    generation that certified them and a rational witness; rows that
    exhaust the ladder come back unverified (never invalid).
    """
    if not 0 <= index < len(cert.rows):
        raise CertificateError(f"row index {index} out of range")
    if max_depth < 1:
        raise CertificateError("max_depth must be at least 1")
    ctx = _ctx if _ctx is not None else {}
    if "term_cols" not in ctx:
        ctx["term_cols"] = term_columns(u, cert)
        ctx["pool"] = {}
    term_cols = ctx["term_cols"]

    row = cert.rows[index]
    expr = _row_expr(row, term_cols)
    w_cls = u.canon_class(u.closure_mask(u.var_bit(0)))
    s_cls = u.canon_class(u.closure_mask(u.var_bit(index_for_token(u.n, "S1->2"))))

    base = {w_cls.mask, s_cls.mask}
    for key in row:
        col = term_cols.get(key)
        if isinstance(col, EntropyClass):
            base.add(col.mask)
    bases = [0] + sorted(base, reverse=True)

    # ladder rungs: (family, elementals, pair anchors, reported depth)
    rungs = [(frozenset(base), False, None, 1), (frozenset(base), True, None, 1)]
    fam = set(base)
    capped = False
    for gen in range(1, max_depth):
        prev = frozenset(fam)
        fam, done = _close_once(u, fam, family_cap)
        if not done:
            capped = True
            break
        rungs.append((frozenset(fam), True, prev, gen + 1))
        rungs.append((frozenset(fam), True, None, gen + 1))

    depth_seen = 1
    for fam_masks, elem, anchors, depth in rungs:
        depth_seen = depth
        if len(fam_masks) <= 24:
            pool = _pool(u, fam_masks, elem, anchors, bases, ctx["pool"])
            witness = _try_pool(u, pool, fam_masks, expr, w_cls, s_cls)
        else:
            witness = _try_pool_active(
                u, fam_masks, anchors, bases, expr, w_cls, s_cls, ctx
            )
        if witness is not None:
            return RowCheck(index, "valid", depth, witness)
    detail = "family size cap exceeded" if capped else "pool exhausted"
    return RowCheck(index, "unverified", depth_seen, detail=detail)


# -- whole-certificate verification ------------------------------------


@dataclass
class VerifyReport:
    overall: str  # "VALID" | "INVALID" | "UNVERIFIED"
    sum_ok: bool
    meaning: tuple | None
    row_status: list
    diagnostics: list

    @property
    def bound(self) -> str | None:
        return format_meaning(self.meaning) if self.meaning else None


def verify(
    u: Universe,
    cert: Certificate,
    max_depth: int = DEFAULT_MAX_DEPTH,
    family_cap: int = FAMILY_CAP,
) -> VerifyReport:
    """Full certificate check: problem match, exact column sums, then
    semantic verification of every row.

    VALID requires everything to pass.  A sum or target-shape failure is
    INVALID and skips row checks.  Rows that cannot be certified within
    the depth budget leave the certificate UNVERIFIED.
    """
    diagnostics: list = []
    if (u.n, u.k, u.d) != cert.problem:
        diagnostics.append(
            f"problem mismatch: certificate is for {cert.problem}, universe is "
            f"({u.n}, {u.k}, {u.d})"
        )
        return VerifyReport("INVALID", False, None, [], diagnostics)

    sum_ok, meaning = check_sum(cert)
    if meaning is None:
        diagnostics.append(
            "target is not of the form a*alpha + b*beta - c*B with a, b, c >= 0"
        )
    if not sum_ok:
        sums: dict = {}
        for row in cert.rows:
            for key, v in row.items():
                sums[key] = sums.get(key, 0) + v
        bad = sorted(
            key
            for key in set(sums) | set(cert.target)
            if sums.get(key, 0) != cert.target.get(key, 0)
        )
        diagnostics.append(f"column sums do not match the target in {bad}")
    if not sum_ok or meaning is None:
        return VerifyReport("INVALID", sum_ok, meaning, [], diagnostics)

    ctx: dict = {}
    row_status = [
        check_row(u, cert, i, max_depth=max_depth, family_cap=family_cap, _ctx=ctx)
        for i in range(len(cert.rows))
    ]
    bad_rows = [rc.index for rc in row_status if rc.status != "valid"]
    if bad_rows:
        diagnostics.append(f"rows not certified within depth {max_depth}: {bad_rows}")
        return VerifyReport("UNVERIFIED", sum_ok, meaning, row_status, diagnostics)
    return VerifyReport("VALID", sum_ok, meaning, row_status, diagnostics)


# -- LaTeX export ------------------------------------------------------


def _token_tex(tok: str) -> str:
    if tok.startswith("W"):
        return f"W_{{{tok[1:]}}}"
    src, dst = tok[1:].split("->")
    return f"S_{{{src}\\rightarrow {dst}}}"


def _column_tex(key: str) -> str:
    if key == ALPHA:
        return "\\alpha"
    if key == BETA:
        return "\\beta"
    if key == BIGB:
        return "B"
    return f"T_{{{key[1:]}}}"


def _display_columns(cert: Certificate) -> list:
    used = set(cert.target)
    for row in cert.rows:
        used.update(row)
    cols = [c for c in (BETA, ALPHA) if c in used]
    cols += sorted(cert.terms, key=lambda t: int(t[1:]))
    if BIGB in used:
        cols.append(BIGB)
    return cols


def to_latex(cert: Certificate) -> str:
    """Deterministic LaTeX rendering: a term table mapping every column
    label to its entropy expression, and the coefficient matrix with the
    target as the final row."""
    cols = _display_columns(cert)

    lines = ["\\begin{tabular}{|c|c|}", "\\hline", "label & meaning \\\\", "\\hline"]
    for key in cols:
        label = f"${_column_tex(key)}$"
        if key in RESERVED_COLUMNS:
            meaning = label
        else:
            inner = ",".join(_token_tex(t) for t in sorted(cert.terms[key]))
            meaning = f"$H({inner})$"
        lines.append(f"{label} & {meaning} \\\\")
    lines += ["\\hline", "\\end{tabular}", ""]

    lines += [f"\\begin{{tabular}}{{|*{{{len(cols)}}}{{c}}|}}", "\\hline"]
    lines.append(" & ".join(f"${_column_tex(c)}$" for c in cols) + " \\\\")
    lines.append("\\hline")
    for row in cert.rows:
        cells = [str(row[c]) if c in row else "" for c in cols]
        lines.append(" & ".join(cells) + " \\\\")
    lines.append("\\hline\\hline")
    cells = [str(cert.target[c]) if c in cert.target else "" for c in cols]
    lines.append(" & ".join(cells) + " \\\\")
    lines += ["\\hline", "\\end{tabular}", ""]
    return "\n".join(lines)
