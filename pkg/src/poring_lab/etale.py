"""Ring core: products of real number fields, glued subring presentations,
module/algebra closures, minimal primes with realized residue fields, total
quotient rings, idempotents, Baer hulls, extension predicates and the
f-ring lattice operations.

The supported class is: unital subrings of K_1 x ... x K_n (each K_i a
number field with at least one real embedding) that are either finitely
generated Z-modules of integral elements ("order" mode) or finite
dimensional Q-algebras ("algebra" mode).  Everything downstream leans on
two facts about this class: there are finitely many minimal primes (one
per group of ambient coordinates with a common kernel), and the
rationalized ring A (x) Q is the product of the residue fields, which is
simultaneously the total quotient ring and the complete ring of quotients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

from . import linalg
from .errors import NotModuleFinite, PoringLabError, TheoremViolation
from .exact import (
    Poly,
    Q,
    RealAlgebraic,
    poly_invmod,
    poly_mulmod,
    real_roots,
    refine,
    sign_at,
)

Mode = Literal["order", "algebra"]

PRIMITIVE_COMBO_BOUND = 25
CLOSURE_ITERATION_BOUND = 50
CLOSURE_DENOMINATOR_BOUND = 10**24


class NumberField:
    """A number field Q[t]/(minpoly) together with its real embeddings,
    each materialized as an isolated real root of the minimal polynomial.

    Irreducibility of the minimal polynomial is the caller's assertion;
    residue fields constructed internally validate it by dimension count.
    """

    def __init__(self, name: str, minpoly: Poly):
        if minpoly.degree < 1:
            raise ValueError(f"field {name}: minimal polynomial must have degree >= 1")
        if not minpoly.is_monic:
            raise ValueError(f"field {name}: minimal polynomial must be monic")
        self.name = name
        self.minpoly = minpoly
        roots = real_roots(minpoly)
        # pre-refine once so later sign tests usually resolve in one pass
        self.real_roots: tuple[RealAlgebraic, ...] = tuple(
            refine(r, Q(1, 2**16)) for r in roots
        )

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __repr__(self) -> str:
        return f"NumberField({self.name}, {self.minpoly!r})"


class ProductAlgebra:
    """A finite product of number fields; the ambient ring everything
    else lives in."""

    def __init__(self, factors: Sequence[NumberField]):
        if not factors:
            raise ValueError("a product algebra needs at least one factor")
        self.factors = tuple(factors)
        self.offsets = []
        off = 0
        for f in self.factors:
            self.offsets.append(off)
            off += f.degree
        self.dim = off

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductAlgebra) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"ProductAlgebra({', '.join(f.name for f in self.factors)})"

    # -- element constructors ------------------------------------------------

    def element(self, coords: Sequence[Poly | int | Fraction]) -> "Element":
        if len(coords) != len(self.factors):
            raise ValueError("coordinate count does not match factor count")
        polys = []
        for c, f in zip(coords, self.factors):
            p = c if isinstance(c, Poly) else Poly([c])
            polys.append(p % f.minpoly)
        return Element(self, tuple(polys))

    def zero(self) -> "Element":
        return self.element([Poly()] * len(self.factors))

    def one(self) -> "Element":
        return self.element([Poly([1])] * len(self.factors))

    def indicator(self, coords: Iterable[int]) -> "Element":
        chosen = set(coords)
        return self.element([Poly([1]) if i in chosen else Poly() for i in range(len(self.factors))])

    def generator(self, i: int) -> "Element":
        """The image of t in the i-th factor, zero elsewhere."""
        return self.element([Poly.x() if j == i else Poly() for j in range(len(self.factors))])

    def from_vector(self, vec: Sequence[Fraction]) -> "Element":
        polys = []
        for f, off in zip(self.factors, self.offsets):
            polys.append(Poly(vec[off : off + f.degree]))
        return Element(self, tuple(polys))

    def to_vector(self, x: "Element") -> list[Fraction]:
        vec = [Q(0)] * self.dim
        for k, (f, off) in enumerate(zip(self.factors, self.offsets)):
            for j, c in enumerate(x.coords[k].coeffs):
                vec[off + j] = c
        return vec


class Element:
    """An element of a product algebra: one polynomial per factor, reduced
    modulo that factor's minimal polynomial."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: ProductAlgebra, coords: tuple[Poly, ...]):
        self.algebra = algebra
        self.coords = coords

    def _check(self, other: "Element") -> None:
        if self.algebra != other.algebra:
            raise ValueError("elements live in different ambient algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        coords = tuple(
            poly_mulmod(a, b, f.minpoly)
            for a, b, f in zip(self.coords, other.coords, self.algebra.factors)
        )
        return Element(self.algebra, coords)

    def scale(self, c) -> "Element":
        return Element(self.algebra, tuple(p.scale(c) for p in self.coords))

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.coords)

    def is_idempotent(self) -> bool:
        return (self * self) == self

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.coords) if not p.is_zero)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.algebra == other.algebra
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "Element(" + ", ".join(repr(p) for p in self.coords) + ")"


def quasi_inverse(x: Element) -> Element:
    """The coordinatewise quasi-inverse in the ambient product of fields:
    inverse where the coordinate is nonzero, zero elsewhere.  Satisfies
    x * q * x = x."""
    coords = []
    for p, f in zip(x.coords, x.algebra.factors):
        coords.append(Poly() if p.is_zero else poly_invmod(p, f.minpoly))
    return Element(x.algebra, tuple(coords))


@dataclass(frozen=True)
class SubringPresentation:
    ambient: ProductAlgebra
    generators: tuple[Element, ...]
    mode: Mode

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a subring presentation needs at least one generator")
        for g in self.generators:
            if g.algebra != self.ambient:
                raise ValueError("generator does not live in the ambient algebra")
        if self.mode not in ("order", "algebra"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class MinimalPrime:
    """A minimal prime of a computed subring: the common kernel of the
    coordinate projections listed in `coordinate_set`, with its residue
    field realized inside the first of those coordinates."""

    id: int
    coordinate_set: tuple[int, ...]
    kernel_basis: tuple[Element, ...]
    residue: NumberField
    theta_preimage: Element  # an element of A whose projection generates the residue field


class ComputedSubring:
    """A subring presented by generators, closed into an explicit basis
    (Hermite-form Z-module basis in order mode, reduced-echelon Q-basis in
    algebra mode) with structure constants, minimal primes and idempotents
    computed eagerly.  Immutable after construction."""

    def __init__(
        self,
        presentation: SubringPresentation,
        basis: tuple[Element, ...],
        denom: int,
        lattice: Optional[linalg.IntegerLattice],
    ):
        self.presentation = presentation
        self.ambient = presentation.ambient
        self.mode = presentation.mode
        self.basis = basis
        self.vectors = [self.ambient.to_vector(b) for b in basis]
        self._denom = denom
        self._lattice = lattice
        self.mult_table = self._build_mult_table()
        self.primes: tuple[MinimalPrime, ...] = tuple(self._compute_primes())
        self._validate_class()
        self._residue_solvers: dict[tuple[int, int], list[list[Fraction]]] = {}
        self.idempotent_set: tuple[Element, ...] = tuple(self._compute_idempotents())

    # -- structure ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _build_mult_table(self) -> dict[tuple[int, int], tuple[Fraction, ...]]:
        table = {}
        for i in range(len(self.basis)):
            for j in range(i, len(self.basis)):
                prod = self.basis[i] * self.basis[j]
                coeffs = linalg.solve(self.vectors, self.ambient.to_vector(prod))
                if coeffs is None:
                    raise PoringLabError("basis is not multiplicatively closed")
                if self.mode == "order" and any(c.denominator != 1 for c in coeffs):
                    raise PoringLabError("order-mode structure constants are not integral")
                table[(i, j)] = tuple(coeffs)
        return table

    def contains(self, x: Element) -> bool:
        if x.algebra != self.ambient:
            raise ValueError("element does not live in this subring's ambient algebra")
        vec = self.ambient.to_vector(x)
        if self.mode == "algebra":
            return linalg.in_span(self.vectors, vec)
        scaled = [c * self._denom for c in vec]
        if any(c.denominator != 1 for c in scaled):
            return False
        return self._lattice.contains([int(c) for c in scaled])

    def contains_subring(self, other: "ComputedSubring") -> bool:
        return all(self.contains(b) for b in other.basis)

    def rational_span_contains(self, x: Element) -> bool:
        return linalg.in_span(self.vectors, self.ambient.to_vector(x))

    def span_equals(self, other: "ComputedSubring") -> bool:
        return linalg.span_equal(self.vectors, other.vectors)

    # -- minimal primes and residue fields ----------------------------------

    def _coordinate_kernel(self, i: int) -> list[list[Fraction]]:
        f = self.ambient.factors[i]
        off = self.ambient.offsets[i]
        slices = [v[off : off + f.degree] for v in self.vectors]
        ker = linalg.kernel(slices)
        red, _ = linalg.rref(ker)
        return red

    def _compute_primes(self) -> list[MinimalPrime]:
        nfac = len(self.ambient.factors)
        kernels = [self._coordinate_kernel(i) for i in range(nfac)]
        groups: list[list[int]] = []
        for i in range(nfac):
            for g in groups:
                if kernels[g[0]] == kernels[i]:
                    g.append(i)
                    break
            else:
                groups.append([i])
        primes = []
        for pid, group in enumerate(groups):
            kernel_basis = tuple(
                self._combine(coeffs) for coeffs in kernels[group[0]]
            )
            residue, theta_pre = self._residue_field(pid, group)
            primes.append(
                MinimalPrime(
                    id=pid,
                    coordinate_set=tuple(group),
                    kernel_basis=kernel_basis,
                    residue=residue,
                    theta_preimage=theta_pre,
                )
            )
        return primes

    def _combine(self, coeffs: Sequence[Fraction]) -> Element:
        acc = self.ambient.zero()
        for c, b in zip(coeffs, self.basis):
            if c:
                acc = acc + b.scale(c)
        return acc

    def _slice(self, x: Element, i: int) -> list[Fraction]:
        f = self.ambient.factors[i]
        p = x.coords[i]
        return [p.coeff(k) for k in range(f.degree)]

    def _residue_field(self, pid: int, group: list[int]) -> tuple[NumberField, Element]:
        i0 = group[0]
        image_rows = [self._slice(b, i0) for b in self.basis]
        dim = linalg.rank(image_rows)
        gens = list(self.presentation.generators)
        candidates = list(gens)
        for ga, gb in itertools.permutations(gens, 2):
            for k in range(1, PRIMITIVE_COMBO_BOUND + 1):
                candidates.append(ga + gb.scale(k))
        for cand in candidates:
            minpoly = self._minpoly_of_image(cand, i0, dim)
            if minpoly is not None:
                return NumberField(f"res{pid}", minpoly), cand
        raise PoringLabError(
            f"primitive element search exhausted for prime {pid} "
            f"(combo bound {PRIMITIVE_COMBO_BOUND})"
        )

    def _minpoly_of_image(self, cand: Element, coord: int, dim: int) -> Optional[Poly]:
        """Minimal polynomial of the projection of cand to `coord`, if its
        degree equals the image dimension (i.e. cand is primitive)."""
        f = self.ambient.factors[coord]
        theta = cand.coords[coord]
        powers: list[list[Fraction]] = []
        p = Poly([1])
        for m in range(dim + 1):
            vec = [p.coeff(k) for k in range(f.degree)]
            sol = linalg.solve(powers, vec) if powers else (None if any(vec) else [])
            if sol is not None:
                if m < dim:
                    return None  # dependence too early: not primitive
                return Poly([-c for c in sol] + [1])
            powers.append(vec)
            p = poly_mulmod(p, theta, f.minpoly)
        return None

    def _residue_solver(self, prime: MinimalPrime, coord: int) -> list[list[Fraction]]:
        key = (prime.id, coord)
        rows = self._residue_solvers.get(key)
        if rows is None:
            f = self.ambient.factors[coord]
            theta = prime.theta_preimage.coords[coord]
            rows = []
            p = Poly([1])
            for _ in range(prime.residue.degree):
                rows.append([p.coeff(k) for k in range(f.degree)])
                p = poly_mulmod(p, theta, f.minpoly)
            self._residue_solvers[key] = rows
        return rows

    def express_in_residue(
        self, prime: MinimalPrime, value: Poly, coord: Optional[int] = None
    ) -> Optional[Poly]:
        """Write a raw coordinate value (a polynomial in the ambient factor
        generator) in powers of the residue field's primitive element."""
        coord = prime.coordinate_set[0] if coord is None else coord
        f = self.ambient.factors[coord]
        vec = [value.coeff(k) for k in range(f.degree)]
        sol = linalg.solve(self._residue_solver(prime, coord), vec)
        return None if sol is None else Poly(sol)

    def residue_poly(self, x: Element, prime: MinimalPrime, coord: Optional[int] = None) -> Poly:
        """The image of x modulo `prime`, in powers of the residue generator."""
        coord = prime.coordinate_set[0] if coord is None else coord
        out = self.express_in_residue(prime, x.coords[coord], coord)
        if out is None:
            raise PoringLabError(
                "element has no residue expression at this prime "
                "(it is outside the rational span of the subring)"
            )
        return out

    def cone_sign(self, x: Element, prime: MinimalPrime, embedding: int) -> int:
        """Sign of x at the prime cone (prime, embedding)."""
        q = self.residue_poly(x, prime)
        return sign_at(q, prime.residue.real_roots[embedding])

    def realize_residues(self, per_prime: dict[int, Poly]) -> Element:
        """Build the ambient element whose residue at prime p is the given
        polynomial in the residue generator (zero at omitted primes)."""
        coords = [Poly() for _ in self.ambient.factors]
        for prime in self.primes:
            q = per_prime.get(prime.id)
            if q is None or q.is_zero:
                continue
            for i in prime.coordinate_set:
                f = self.ambient.factors[i]
                theta = prime.theta_preimage.coords[i]
                acc = Poly()
                power = Poly([1])
                for c in q.coeffs:
                    if c:
                        acc = acc + power.scale(c)
                    power = poly_mulmod(power, theta, f.minpoly)
                coords[i] = acc
        return Element(self.ambient, tuple(coords))

    def block_ideal_vectors(self, prime: MinimalPrime) -> list[list[Fraction]]:
        """Q-basis of the elements of the rational span supported only on
        this prime's coordinate block."""
        other = [i for p in self.primes if p.id != prime.id for i in p.coordinate_set]
        rows = []
        for v in self.vectors:
            row = []
            for i in other:
                f = self.ambient.factors[i]
                off = self.ambient.offsets[i]
                row.extend(v[off : off + f.degree])
            rows.append(row if row else [Q(0)])
        ker = linalg.kernel(rows)
        out = []
        for coeffs in ker:
            vec = [Q(0)] * self.ambient.dim
            for c, v in zip(coeffs, self.vectors):
                for j, x in enumerate(v):
                    vec[j] += c * x
            out.append(vec)
        red, _ = linalg.rref(out)
        return red

    # -- idempotents ---------------------------------------------------------

    def _compute_idempotents(self) -> list[Element]:
        found = []
        for r in range(len(self.primes) + 1):
            for subset in itertools.combinations(self.primes, r):
                coords = [i for p in subset for i in p.coordinate_set]
                e = self.ambient.indicator(coords)
                if self.contains(e):
                    found.append(e)
        n = len(found)
        if n & (n - 1):
            raise TheoremViolation("idempotent count is not a power of two")
        return found

    def _validate_class(self) -> None:
        if not self.contains(self.ambient.one()):
            raise PoringLabError("subring closure lost the unit")
        total = sum(p.residue.degree for p in self.primes)
        if linalg.rank(self.vectors) != total:
            raise PoringLabError(
                "rationalized subring does not surject onto the product of its "
                "residue fields; presentation is outside the supported class"
            )

    def __repr__(self) -> str:
        return (
            f"ComputedSubring(mode={self.mode}, dim={self.dim}, "
            f"primes={len(self.primes)}, ambient={self.ambient!r})"
        )


# -- closure ----------------------------------------------------------------


def close_subring(
    pres: SubringPresentation, max_iterations: int = CLOSURE_ITERATION_BOUND
) -> ComputedSubring:
    """Smallest unital subring containing the generators, with a
    deterministic echelonized basis.  Order mode closes a Z-lattice and
    fails loudly if it does not stabilize (non-integral generator);
    algebra mode closes a Q-vector space (always terminates)."""
    ambient = pres.ambient
    seed = [ambient.one()] + list(pres.generators)
    if pres.mode == "order":
        basis, denom, lattice = _close_order(ambient, seed, max_iterations)
        return ComputedSubring(pres, basis, denom, lattice)
    basis = _close_algebra(ambient, seed)
    return ComputedSubring(pres, basis, 1, None)


def _close_order(
    ambient: ProductAlgebra, seed: list[Element], max_iterations: int
) -> tuple[tuple[Element, ...], int, linalg.IntegerLattice]:
    vectors = [ambient.to_vector(x) for x in seed]
    denom = linalg.common_denominator(vectors)
    lattice = linalg.IntegerLattice(ambient.dim)
    for v in vectors:
        lattice.add([int(c * denom) for c in v])

    def rescale(new_denom: int) -> None:
        nonlocal denom, lattice
        if new_denom == denom:
            return
        if new_denom > CLOSURE_DENOMINATOR_BOUND:
            raise NotModuleFinite("not module-finite; generator likely non-integral")
        f = new_denom // denom
        scaled = linalg.IntegerLattice(ambient.dim)
        for row in lattice.rows:
            scaled.add([x * f for x in row])
        lattice = scaled
        denom = new_denom

    for _ in range(max_iterations):
        elems = [ambient.from_vector([Q(x, denom) for x in row]) for row in lattice.rows]
        grew = False
        for i in range(len(elems)):
            for j in range(i, len(elems)):
                vec = ambient.to_vector(elems[i] * elems[j])
                d = linalg.common_denominator([vec])
                rescale(linalg.lcm_int(denom, d))
                if lattice.add([int(c * denom) for c in vec]):
                    grew = True
        if not grew:
            basis = tuple(
                ambient.from_vector([Q(x, denom) for x in row]) for row in lattice.rows
            )
            return basis, denom, lattice
    raise NotModuleFinite("not module-finite; generator likely non-integral")


def _close_algebra(ambient: ProductAlgebra, seed: list[Element]) -> tuple[Element, ...]:
    span: list[list[Fraction]] = []
    for x in seed:
        vec = ambient.to_vector(x)
        if not linalg.in_span(span, vec):
            span.append(vec)
    while True:
        span, _ = linalg.rref(span)
        elems = [ambient.from_vector(v) for v in span]
        grew = False
        for i in range(len(elems)):
            for j in range(i, len(elems)):
                vec = ambient.to_vector(elems[i] * elems[j])
                if not linalg.in_span(span, vec):
                    span.append(vec)
                    grew = True
        if not grew:
            red, _ = linalg.rref(span)
            return tuple(ambient.from_vector(v) for v in red)


# -- spec operations ---------------------------------------------------------


def membership(A: ComputedSubring, x: Element) -> bool:
    """Is x an integer (order mode) resp. rational (algebra mode)
    combination of A's basis?"""
    return A.contains(x)


def minimal_primes(A: ComputedSubring) -> tuple[MinimalPrime, ...]:
    return A.primes


def idempotents(A: ComputedSubring) -> tuple[Element, ...]:
    return A.idempotent_set


@dataclass(frozen=True)
class TotalQuotient:
    """T(A) as an abstract product of the residue fields, together with the
    canonical embedding a -> (a mod p)_p."""

    source: ComputedSubring
    product: ProductAlgebra

    def embed(self, x: Element) -> Element:
        coords = [self.source.residue_poly(x, p) for p in self.source.primes]
        return self.product.element(coords)


def total_quotient(A: ComputedSubring) -> TotalQuotient:
    product = ProductAlgebra([p.residue for p in A.primes])
    return TotalQuotient(A, product)


def total_quotient_subring(A: ComputedSubring) -> ComputedSubring:
    """T(A) realized inside A's own ambient algebra: the rational span of
    A, closed as a Q-algebra.  In this class A (x) Q already is the product
    of the residue fields, so this is T(A) = Q(A)."""
    pres = SubringPresentation(A.ambient, tuple(A.basis), "algebra")
    return close_subring(pres)


def block_idempotent(A: ComputedSubring, prime: MinimalPrime) -> Element:
    """The idempotent of T(A) that is 1 on this prime's block."""
    return A.ambient.indicator(prime.coordinate_set)


def baer_hull(A: ComputedSubring) -> ComputedSubring:
    """A with the idempotents of T(A) adjoined, i.e. the smallest Baer ring
    between A and its complete ring of quotients."""
    extra = [block_idempotent(A, p) for p in A.primes]
    pres = SubringPresentation(A.ambient, tuple(A.basis) + tuple(extra), A.mode)
    B = close_subring(pres)
    if not is_baer(B):
        raise TheoremViolation("Baer hull failed the Baer predicate")
    expected = {A.ambient.indicator([i for p in sub for i in p.coordinate_set])
                for r in range(len(A.primes) + 1)
                for sub in itertools.combinations(A.primes, r)}
    if set(B.idempotent_set) != expected:
        raise TheoremViolation("Baer hull does not carry exactly the idempotents of T(A)")
    if not is_essential(A, B):
        raise TheoremViolation("Baer hull is not an essential extension")
    for e in extra:
        if not e.is_idempotent():
            raise TheoremViolation("adjoined generator is not idempotent")
    return B


def annihilator_vectors(A: ComputedSubring, x: Element) -> list[list[Fraction]]:
    """Q-basis of {y in A (x) Q : x*y = 0}."""
    rows = [A.ambient.to_vector(x * b) for b in A.basis]
    ker = linalg.kernel(rows)
    out = []
    for coeffs in ker:
        vec = [Q(0)] * A.ambient.dim
        for c, v in zip(coeffs, A.vectors):
            for j, val in enumerate(v):
                vec[j] += c * val
        out.append(vec)
    red, _ = linalg.rref(out)
    return red


def is_baer(A: ComputedSubring) -> bool:
    """Annihilator of every basis element is generated by an idempotent
    of A."""
    for x in A.basis:
        ann = annihilator_vectors(A, x)
        ann_elems = [A.ambient.from_vector(v) for v in ann]
        ok = False
        for e in A.idempotent_set:
            if not (x * e).is_zero:
                continue
            if all((e * y) == y for y in ann_elems):
                ok = True
                break
        if not ok:
            return False
    return True


def is_von_neumann_regular(A: ComputedSubring) -> bool:
    """In this class: A is regular iff it is its own total quotient ring,
    which happens exactly for algebra-mode subrings (finite products of
    fields)."""
    if A.mode != "algebra":
        return False
    return all(A.contains(quasi_inverse(b)) for b in A.basis)


def essential_failure(A: ComputedSubring, B: ComputedSubring) -> Optional[MinimalPrime]:
    """None if B is an essential extension of A; otherwise a minimal prime
    of B whose block ideal misses A."""
    if A.ambient != B.ambient:
        raise ValueError("subrings live in different ambient algebras")
    if not B.contains_subring(A):
        raise ValueError("first ring is not contained in the second")
    for q in B.primes:
        ideal = B.block_ideal_vectors(q)
        if not ideal:
            raise TheoremViolation("a minimal prime has a zero block ideal")
        meet = linalg.span_intersect(A.vectors, ideal)
        if not meet:
            return q
    return None


def is_essential(A: ComputedSubring, B: ComputedSubring) -> bool:
    """Does every nonzero ideal of B meet A nontrivially?  Decided
    blockwise: the ideal of elements supported on a single minimal-prime
    block must contain a nonzero element of A, for every block."""
    return essential_failure(A, B) is None


# -- integral closedness in T(A) ---------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d).  Sign goes into d."""
    if n == 0:
        raise ValueError("zero discriminant")
    sign = 1 if n > 0 else -1
    n = abs(n)
    s, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= n
    return s, d * sign


def _block_lattice(A: ComputedSubring, prime: MinimalPrime) -> tuple[linalg.IntegerLattice, int]:
    """The image of A in the residue field at `prime`, as a lattice in
    coordinates over the residue power basis."""
    d = prime.residue.degree
    rows = [A.residue_poly(b, prime) for b in A.basis]
    vecs = [[r.coeff(k) for k in range(d)] for r in rows]
    denom = linalg.common_denominator(vecs)
    lat = linalg.IntegerLattice(d)
    for v in vecs:
        lat.add([int(c * denom) for c in v])
    return lat, denom


def _quadratic_block_closed_direct(A: ComputedSubring, prime: MinimalPrime) -> bool:
    """Left-hand test: does the block order contain the maximal order,
    i.e. is omega = (1+sqrt(d))/2 (or sqrt(d)) in the image lattice?"""
    m = prime.residue.minpoly
    b, c = m.coeff(1), m.coeff(0)
    if b.denominator != 1 or c.denominator != 1:
        raise PoringLabError("residue generator of an order is not integral")
    disc = int(b * b - 4 * c)
    s, d = _squarefree_split(disc)
    lat, denom = _block_lattice(A, prime)
    if d % 4 == 1:
        omega = [Q(s + int(b), 2 * s), Q(1, s)]  # (1 + sqrt(d)) / 2 in powers of theta
    else:
        omega = [Q(int(b), s), Q(2, s)]  # sqrt(d) in powers of theta
    scaled = [x * denom for x in omega]
    if any(x.denominator != 1 for x in scaled):
        return False
    return lat.contains([int(x) for x in scaled])


def _quadratic_block_closed_disc(A: ComputedSubring, prime: MinimalPrime) -> bool:
    """Right-hand test, independent of the first: the block order is
    maximal iff the discriminant of its lattice equals the field
    discriminant (conductor 1)."""
    m = prime.residue.minpoly
    b, c = m.coeff(1), m.coeff(0)
    disc = int(b * b - 4 * c)
    _, d = _squarefree_split(disc)
    field_disc = d if d % 4 == 1 else 4 * d
    lat, denom = _block_lattice(A, prime)
    basis = [[Q(x, denom) for x in row] for row in lat.rows]

    def trace(p0: Fraction, p1: Fraction) -> Fraction:
        # trace of p0 + p1*theta given theta^2 + b theta + c = 0
        return 2 * p0 - p1 * b

    gram = []
    for u in basis:
        row = []
        pu = Poly(u)
        for v in basis:
            prod = poly_mulmod(pu, Poly(v), m)
            row.append(trace(prod.coeff(0), prod.coeff(1)))
        gram.append(row)
    det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]
    return det == field_disc


def is_integrally_closed_in_T(A: ComputedSubring) -> Optional[bool]:
    """True / False / None ("unknown").  Decides both sides of the
    Baer-ring equivalence independently and cross-checks them: the direct
    side asks for all idempotents of T(A) plus maximal block orders; the
    per-block side decides closedness per residue via the lattice
    discriminant.  Blocks of residue degree >= 3 are left undecided."""
    if A.mode == "algebra":
        return True  # a finite product of fields is its own total quotient ring
    have_all_idem = all(A.contains(block_idempotent(A, p)) for p in A.primes)

    def block_direct(p: MinimalPrime) -> Optional[bool]:
        if p.residue.degree == 1:
            return True  # a finitely generated subring of Q is Z
        if p.residue.degree == 2:
            return _quadratic_block_closed_direct(A, p)
        return None

    def block_disc(p: MinimalPrime) -> Optional[bool]:
        if p.residue.degree == 1:
            return True
        if p.residue.degree == 2:
            return _quadratic_block_closed_disc(A, p)
        return None

    direct = [block_direct(p) for p in A.primes]
    per_block = [block_disc(p) for p in A.primes]
    for a, b in zip(direct, per_block):
        if a is not None and b is not None and a != b:
            raise TheoremViolation("block maximality tests disagree")

    def combine(flags: list[Optional[bool]], extra: bool = True) -> Optional[bool]:
        if not extra or any(f is False for f in flags):
            return False
        if any(f is None for f in flags):
            return None
        return True

    left = combine(direct, extra=have_all_idem)
    right = combine(per_block)
    if is_baer(A) and left is not None and right is not None and left != right:
        raise TheoremViolation("integral closedness: the two sides of the Baer equivalence disagree")
    return left


# -- f-ring lattice operations ------------------------------------------------


def positive_part(T: ProductAlgebra, embeddings: Sequence[int], x: Element) -> Element:
    """Coordinatewise positive part of x under the chosen real embedding of
    each factor: the coordinate is kept where its sign is >= 0, else zeroed."""
    coords = []
    for p, f, e in zip(x.coords, T.factors, embeddings):
        coords.append(p if sign_at(p, f.real_roots[e]) >= 0 else Poly())
    return Element(T, tuple(coords))


def lattice_ops(
    T: ProductAlgebra, embeddings: Sequence[int], x: Element, y: Element
) -> tuple[Element, Element, Element, Element]:
    """(sup, inf, (x-y)^+, (x-y)^-) under the total order the embeddings
    induce on each factor.  Both defining identities for sup and inf are
    evaluated independently and asserted equal."""
    if len(embeddings) != len(T.factors):
        raise ValueError("need one embedding per factor")
    pos_xy = positive_part(T, embeddings, x - y)
    pos_yx = positive_part(T, embeddings, y - x)
    sup1 = y + pos_xy
    sup2 = x + pos_yx
    if sup1 != sup2:
        raise TheoremViolation("sup identities disagree")
    neg_xy = pos_xy - (x - y)
    neg_yx = pos_yx - (y - x)
    inf1 = y - neg_xy
    inf2 = x - neg_yx
    if inf1 != inf2:
        raise TheoremViolation("inf identities disagree")
    return sup1, inf1, pos_xy, neg_xy
