"""Exact scalar kernel: rational polynomials, Sturm sequences, real root
isolation and sign determination at isolated algebraic points.

All arithmetic is exact. Interval endpoints are rationals (dyadic in
practice, since they come from bisection), and a real algebraic number is
always "a squarefree rational polynomial plus an isolating interval".
There is deliberately no general real-algebraic arithmetic here: field
arithmetic happens in quotient rings Q[t]/(f) elsewhere, and this module
only ever answers "what is the sign of this rational polynomial at that
isolated root".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    """Dense univariate polynomial over Q, lowest degree first.

    The zero polynomial is the empty coefficient tuple; otherwise the last
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly([c])

    @staticmethod
    def x(power: int = 1) -> "Poly":
        return Poly([0] * power + [1])

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Q(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*t" if c != 1 else "t")
            else:
                terms.append(f"{c}*t^{k}" if c != 1 else f"t^{k}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly()
        a, b = self.coeffs, other.coeffs
        out = [Q(0)] * (len(a) + len(b) - 1)
        for i, ci in enumerate(a):
            if ci == 0:
                continue
            for j, cj in enumerate(b):
                out[i + j] += ci * cj
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = _q(c)
        return Poly([c * a for a in self.coeffs])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Q(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            quo[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return Poly(quo), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus / evaluation --------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x) -> Fraction:
        x = _q(x)
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def poly_mulmod(a: Poly, b: Poly, m: Poly) -> Poly:
    return (a * b) % m


def poly_invmod(a: Poly, m: Poly) -> Poly:
    """Inverse of a modulo m; requires gcd(a, m) = 1."""
    r0, r1 = m, a % m
    s0, s1 = Poly(), Poly([1])
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element is not invertible modulo the given polynomial")
    return s0.scale(1 / r0.coeffs[0]) % m


def squarefree_part(f: Poly) -> Poly:
    """f divided by gcd(f, f'), made monic."""
    if f.is_zero:
        raise ValueError("zero polynomial has no squarefree part")
    g = poly_gcd(f, f.derivative())
    if g.degree <= 0:
        return f.monic()
    return (f // g).monic()


# -- Sturm machinery -------------------------------------------------------


def sturm_chain(f: Poly) -> list[Poly]:
    chain = [f, f.derivative()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero:
        chain.pop()
    return chain


def sign_variations(chain: Sequence[Poly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_between(chain: Sequence[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b); requires f(a), f(b) != 0."""
    return sign_variations(chain, a) - sign_variations(chain, b)


def cauchy_bound(f: Poly) -> Fraction:
    """All real roots of f lie strictly inside (-B, B)."""
    lead = abs(f.leading)
    m = max((abs(c) for c in f.coeffs[:-1]), default=Q(0))
    return 1 + m / lead


# -- real algebraic numbers ------------------------------------------------


@dataclass(frozen=True)
class RealAlgebraic:
    """A real root of `defining` isolated in [lo, hi].

    `defining` is squarefree with exactly one real root in the interval.
    Either lo == hi (the root is the rational lo) or the signs of
    `defining` at lo and hi are strictly opposite.
    """

    defining: Poly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if self.lo == self.hi:
            if self.defining(self.lo) != 0:
                raise ValueError("degenerate interval endpoint is not a root")
        else:
            va, vb = self.defining(self.lo), self.defining(self.hi)
            if va == 0 or vb == 0 or (va > 0) == (vb > 0):
                raise ValueError("defining polynomial does not change sign on the interval")

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __repr__(self) -> str:
        if self.is_rational:
            return f"RealAlgebraic({self.lo})"
        return f"RealAlgebraic({self.defining!r} on [{self.lo}, {self.hi}])"


def refine(r: RealAlgebraic, width: Fraction) -> RealAlgebraic:
    """Shrink the isolating interval to at most `width`; same root."""
    width = _q(width)
    if width <= 0:
        raise ValueError("refinement width must be positive")
    if r.is_rational or r.width <= width:
        return r
    f = r.defining
    lo, hi, vlo = r.lo, r.hi, f(r.lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        vm = f(mid)
        if vm == 0:
            return RealAlgebraic(f, mid, mid)
        if (vlo > 0) != (vm > 0):
            hi = mid
        else:
            lo, vlo = mid, vm
    return RealAlgebraic(f, lo, hi)


def interval_eval(g: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact interval Horner evaluation of g over [lo, hi]."""
    alo = ahi = Q(0)
    for c in reversed(g.coeffs):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def sign_at(g: Poly, r: RealAlgebraic) -> int:
    """Exact sign of g at the real number r, in {-1, 0, +1}."""
    if g.is_zero:
        return 0
    if r.is_rational:
        v = g(r.lo)
        return 0 if v == 0 else (1 if v > 0 else -1)
    vlo, vhi = interval_eval(g, r.lo, r.hi)
    if vlo > 0:
        return 1
    if vhi < 0:
        return -1
    # Zero test: r is a root of g iff the common factor of g and the
    # defining polynomial has the (unique) root in r's interval.
    h = poly_gcd(g, r.defining)
    if h.degree > 0 and (h(r.lo) > 0) != (h(r.hi) > 0):
        return 0
    cur = r
    while True:
        cur = refine(cur, cur.width / 2)
        if cur.is_rational:
            v = g(cur.lo)
            return 0 if v == 0 else (1 if v > 0 else -1)
        vlo, vhi = interval_eval(g, cur.lo, cur.hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1


# -- root isolation --------------------------------------------------------

_RATIONAL_ROOT_FACTOR_CAP = 10**12


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of f (each once), by the rational root theorem."""
    roots = []
    cs = list(f.coeffs)
    k = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        k += 1
    if k:
        roots.append(Q(0))
    if len(cs) <= 1:
        return roots
    den = 1
    for c in cs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ics = [int(c * den) for c in cs]
    a0, an = ics[0], ics[-1]
    if abs(a0) > _RATIONAL_ROOT_FACTOR_CAP or abs(an) > _RATIONAL_ROOT_FACTOR_CAP:
        return roots  # isolation handles these roots without the shortcut
    g = Poly(ics)
    seen = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Q(p, q), Q(-p, q)):
                if cand not in seen and g(cand) == 0:
                    seen.add(cand)
                    roots.append(cand)
    return roots


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


def real_roots(f: Poly) -> list[RealAlgebraic]:
    """All distinct real roots of f in increasing order, with pairwise
    disjoint isolating intervals.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has no root set")
    if f.degree == 0:
        return []
    sf = squarefree_part(f)
    roots: list[RealAlgebraic] = []
    for r in _rational_roots(sf):
        roots.append(RealAlgebraic(sf, r, r))
        sf = sf // Poly([-r, 1])
    if sf.degree >= 1:
        roots.extend(_isolate_irrational(sf))
    roots.sort(key=lambda r: (r.lo, r.hi))
    _separate(roots)
    return roots


def _isolate_irrational(f: Poly) -> list[RealAlgebraic]:
    """Isolate the roots of a squarefree f.  A bisection midpoint that is
    itself a root gets split off as a linear factor and the remaining
    polynomial is isolated from scratch.
    """
    out: list[RealAlgebraic] = []
    while f.degree >= 1:
        chain = sturm_chain(f)
        b = cauchy_bound(f)
        hit = None
        found: list[RealAlgebraic] = []
        stack = [(-b, b)]  # cauchy_bound is strict, so f(+-b) != 0
        while stack:
            a, c = stack.pop()
            n = count_roots_between(chain, a, c)
            if n == 0:
                continue
            if n == 1:
                found.append(RealAlgebraic(f, a, c))
                continue
            mid = (a + c) / 2
            if f(mid) == 0:
                hit = mid
                break
            stack.append((a, mid))
            stack.append((mid, c))
        if hit is None:
            out.extend(found)
            break
        out.append(RealAlgebraic(f, hit, hit))
        f = f // Poly([-hit, 1])
    return out


def _separate(roots: list[RealAlgebraic]) -> None:
    """Refine in place (by replacement) until intervals are pairwise disjoint."""
    changed = True
    while changed:
        changed = False
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if a.hi >= b.lo and not (a.is_rational and b.is_rational):
                roots[i] = refine(a, a.width / 2 if a.width else Q(1))
                roots[i + 1] = refine(b, b.width / 2 if b.width else Q(1))
                changed = True
        roots.sort(key=lambda r: (r.lo, r.hi))
