"""Exact feasibility of homogeneous linear sign systems whose coefficients
live in one residue field Q[t]/(m) read off at one isolated real root.

The decision procedure is Fourier-Motzkin elimination where every pivot
choice and every final comparison is a `sign_at` computation: coefficients
stay inside Q[t]/(m) throughout, combination multipliers are field
elements, and no floating point ever appears.  The "at least one of these
rows is nonzero" requirement is handled by a case split (one solve per
designated row), never by epsilon perturbation.  Every positive answer is
re-verified: the rational witness is substituted back into every row and
sign-checked exactly before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PoringLabError
from .exact import Poly, Q, RealAlgebraic, interval_eval, poly_invmod, refine, sign_at

GE, LE, EQ = ">=", "<=", "=="

# used for systems whose coefficients are all rational constants
RATIONAL_POINT = RealAlgebraic(Poly([0, 1]), Q(0), Q(0))


@dataclass(frozen=True)
class Row:
    """One homogeneous constraint: sign(sum coeffs[k] * x_k) relation 0,
    the sum read off at `embedding`."""

    coeffs: tuple[Poly, ...]
    embedding: RealAlgebraic
    relation: str

    def __post_init__(self):
        if self.relation not in (GE, LE, EQ):
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def is_rational(self) -> bool:
        return all(c.degree <= 0 for c in self.coeffs)


@dataclass(frozen=True)
class SignSystem:
    dimension: int
    rows: tuple[Row, ...]
    strict_disjunction: tuple[int, ...] = ()

    def __post_init__(self):
        for r in self.rows:
            if len(r.coeffs) != self.dimension:
                raise ValueError("row width does not match system dimension")
        for i in self.strict_disjunction:
            if not 0 <= i < len(self.rows):
                raise ValueError("strict disjunction index out of range")


class WitnessReconstructionError(PoringLabError):
    """A feasible path pinned a variable to an irrational value; no
    rational witness can be reconstructed along it."""


def _system_field(s: SignSystem) -> tuple[Poly, RealAlgebraic]:
    """The single (defining polynomial, root) all non-rational rows share."""
    emb = None
    for r in s.rows:
        if r.is_rational:
            continue
        if emb is None:
            emb = r.embedding
        elif emb != r.embedding:
            raise PoringLabError(
                "sign system mixes rows over distinct embeddings; "
                "split it into per-embedding systems first"
            )
    if emb is None:
        emb = RATIONAL_POINT
    return emb.defining, emb


def row_value(row: Row, x: Sequence[Fraction]) -> Poly:
    acc = Poly()
    for c, xi in zip(row.coeffs, x):
        if xi:
            acc = acc + c.scale(xi)
    return acc


def verify_witness(s: SignSystem, x: Sequence[Fraction]) -> bool:
    """Exact re-check of a candidate witness against every row and the
    strict disjunction."""
    if len(x) != s.dimension:
        return False
    strict_ok = not s.strict_disjunction
    for i, row in enumerate(s.rows):
        sign = sign_at(row_value(row, x), row.embedding)
        if row.relation == GE and sign < 0:
            return False
        if row.relation == LE and sign > 0:
            return False
        if row.relation == EQ and sign != 0:
            return False
        if i in s.strict_disjunction and sign != 0:
            strict_ok = True
    return strict_ok


def feasible(s: SignSystem) -> tuple[bool, Optional[list[Fraction]]]:
    """Does a rational vector satisfy all rows with at least one designated
    row strictly nonzero?  Returns (answer, witness-or-None); witnesses are
    always re-verified before being returned."""
    if not s.strict_disjunction:
        witness = [Q(0)] * s.dimension
        return True, witness  # homogeneous and non-strict: zero works
    if s.dimension == 0:
        return False, None
    m, rho = _system_field(s)
    for target in s.strict_disjunction:
        x = _solve_case(s, target, m, rho)
        if x is not None:
            if not verify_witness(s, x):
                raise PoringLabError("internal error: witness failed re-verification")
            return True, x
    return False, None


def _reduce(p: Poly, m: Poly) -> Poly:
    return p % m if m.degree >= 1 else p


def _solve_case(
    s: SignSystem, target: int, m: Poly, rho: RealAlgebraic
) -> Optional[list[Fraction]]:
    """Feasibility with row `target` strict; None if this case is empty."""
    if s.rows[target].relation == EQ:
        return None  # an == row can never be strictly nonzero
    # normalize everything to "sum >= 0 (strict?)" plus equalities
    ineqs: list[tuple[list[Poly], bool]] = []
    eqs: list[list[Poly]] = []
    for i, row in enumerate(s.rows):
        coeffs = [_reduce(c, m) for c in row.coeffs]
        strict = i == target
        if row.relation == EQ:
            eqs.append(coeffs)
        elif row.relation == GE:
            ineqs.append((coeffs, strict))
        else:
            ineqs.append(([-c for c in coeffs], strict))
    n = s.dimension
    # substitutions from equalities: var -> linear form in remaining vars
    subs: list[tuple[int, list[Poly]]] = []
    pending = list(eqs)
    while True:
        idx = next(
            (i for i, eq in enumerate(pending) if any(not c.is_zero for c in eq)), None
        )
        if idx is None:
            break  # leftover equality rows are identically zero (homogeneous)
        eq = pending.pop(idx)
        piv = next(k for k, c in enumerate(eq) if not c.is_zero)
        inv = _field_inverse(eq[piv], m)
        expr = [Poly() if k == piv else _reduce(-(inv * eq[k]), m) for k in range(n)]
        subs.append((piv, expr))
        pending = [_substitute(e, piv, expr, m) for e in pending]
        ineqs = [(_substitute(c, piv, expr, m), st) for c, st in ineqs]
    live = [k for k in range(n) if not _assigned(k, subs)]
    frames: list[tuple[int, list[tuple[list[Poly], bool]], list[tuple[list[Poly], bool]]]] = []
    rows = ineqs
    for var in reversed(live):
        pos, neg, zero = [], [], []
        for coeffs, strict in rows:
            sg = 0 if coeffs[var].is_zero else sign_at(coeffs[var], rho)
            if sg > 0:
                pos.append((coeffs, strict))
            elif sg < 0:
                neg.append((coeffs, strict))
            else:
                zero.append((coeffs, strict))
        frames.append((var, pos, neg))
        new_rows = list(zero)
        for ci, si in pos:
            for cj, sj in neg:
                a, b = ci[var], cj[var]
                comb = [
                    _reduce((-b) * ci[k] + a * cj[k], m) for k in range(n)
                ]
                new_rows.append((comb, si or sj))
        rows = new_rows
    for coeffs, strict in rows:
        if strict and all(c.is_zero for c in coeffs):
            return None  # derived 0 > 0
        if any(not c.is_zero for c in coeffs):
            raise PoringLabError("elimination left a live variable")
    # back-substitute a rational witness
    x: list[Optional[Fraction]] = [None] * n
    for var, pos, neg in reversed(frames):
        lowers: list[tuple[Poly, bool]] = []
        uppers: list[tuple[Poly, bool]] = []
        for coeffs, strict in pos:
            bound = _bound_value(coeffs, var, x, m)
            lowers.append((bound, strict))
        for coeffs, strict in neg:
            bound = _bound_value(coeffs, var, x, m)
            uppers.append((bound, strict))
        x[var] = _pick_rational(lowers, uppers, m, rho)
    for var, expr in reversed(subs):
        val = Poly()
        for k, c in enumerate(expr):
            if x[k] is not None and x[k] != 0 and not c.is_zero:
                val = val + c.scale(x[k])
        val = _reduce(val, m)
        if val.is_zero:
            x[var] = Q(0)
        elif val.degree == 0:
            x[var] = val.coeffs[0]
        else:
            raise WitnessReconstructionError(
                "equality substitution produced an irrational coordinate"
            )
    return [xi if xi is not None else Q(0) for xi in x]


def _assigned(k: int, subs: list[tuple[int, list[Poly]]]) -> bool:
    return any(v == k for v, _ in subs)


def _substitute(coeffs: list[Poly], var: int, expr: list[Poly], m: Poly) -> list[Poly]:
    c = coeffs[var]
    if c.is_zero:
        return list(coeffs)
    out = []
    for k, (old, e) in enumerate(zip(coeffs, expr)):
        if k == var:
            out.append(Poly())
        else:
            out.append(_reduce(old + c * e, m))
    return out


def _bound_value(
    coeffs: list[Poly], var: int, x: list[Optional[Fraction]], m: Poly
) -> Poly:
    """The bound (-R)/c_var with later variables substituted in."""
    rest = Poly()
    for k, c in enumerate(coeffs):
        if k == var or c.is_zero:
            continue
        if x[k] is None:
            raise PoringLabError("bound depends on an unassigned variable")
        if x[k]:
            rest = rest + c.scale(x[k])
    c = coeffs[var]
    inv = poly_invmod(c, m) if m.degree >= 1 else Poly([1 / c.coeffs[0]])
    return _reduce(-(inv * rest), m)


def _field_inverse(c: Poly, m: Poly) -> Poly:
    if m.degree >= 1:
        return poly_invmod(c, m)
    return Poly([1 / c.coeffs[0]])


def _const(p: Poly) -> Fraction:
    return p.coeffs[0] if p.coeffs else Q(0)


def _extreme(
    bounds: list[tuple[Poly, bool]], m: Poly, rho: RealAlgebraic, want_max: bool
) -> Optional[tuple[Poly, bool]]:
    """The binding bound (max of lower / min of upper); equal values merge
    their strictness flags."""
    best: Optional[tuple[Poly, bool]] = None
    for val, strict in bounds:
        if best is None:
            best = (val, strict)
            continue
        cmp = sign_at(_reduce(val - best[0], m), rho)
        if cmp == 0:
            best = (best[0], best[1] or strict)
        elif (cmp > 0) == want_max:
            best = (val, strict)
    return best


def _pick_rational(
    lowers: list[tuple[Poly, bool]],
    uppers: list[tuple[Poly, bool]],
    m: Poly,
    rho: RealAlgebraic,
) -> Fraction:
    """A rational value satisfying all (algebraic) lower and upper bounds."""
    lo = _extreme(lowers, m, rho, want_max=True)
    hi = _extreme(uppers, m, rho, want_max=False)
    if lo is None and hi is None:
        return Q(0)
    if hi is None:
        val, strict = lo
        if val.degree <= 0 and not strict:
            return _const(val)
        _, upper = interval_eval(val, *_box(rho))
        return upper + 1
    if lo is None:
        val, strict = hi
        if val.degree <= 0 and not strict:
            return _const(val)
        lower, _ = interval_eval(val, *_box(rho))
        return lower - 1
    (lv, ls), (uv, us) = lo, hi
    gap = sign_at(_reduce(uv - lv, m), rho)
    if gap < 0:
        raise PoringLabError("internal error: empty interval on a feasible path")
    if gap == 0:
        if ls or us:
            raise PoringLabError("internal error: strict empty interval on a feasible path")
        if lv.degree <= 0:
            return _const(lv)
        raise WitnessReconstructionError("variable pinned to an irrational value")
    if not ls and lv.degree <= 0:
        return _const(lv)
    if not us and uv.degree <= 0:
        return _const(uv)
    cur = rho
    while True:
        _, a_hi = interval_eval(lv, cur.lo, cur.hi)
        b_lo, _ = interval_eval(uv, cur.lo, cur.hi)
        if a_hi < b_lo:
            return (a_hi + b_lo) / 2
        if cur.is_rational:
            return (lv(cur.lo) + uv(cur.lo)) / 2
        cur = refine(cur, cur.width / 2)


def _box(rho: RealAlgebraic) -> tuple[Fraction, Fraction]:
    return rho.lo, rho.hi
