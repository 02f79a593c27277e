"""Finite real spectra: prime cones, sections of the support map,
irreducible surjections, the essential-extension spectral facts, and the
fiber-product description of the spectrum after adjoining idempotents.

Every spectrum this package computes is finite and discrete, so
"homeomorphism" degrades to "bijection" and "irreducible surjection" to
"bijection onto the target"; reports record that degeneracy explicitly.
Full prime spectra are never materialized (an order has infinitely many
primes): everything factors through minimal primes and their real
residues, which is exactly the level the verified statements live at.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PoringLabError, TheoremViolation
from .etale import ComputedSubring, Element, MinimalPrime, NumberField, essential_failure
from .exact import Poly, Q, RealAlgebraic, sign_at

FINITE_DISCRETE_NOTE = (
    "all spectra here are finite and discrete: homeomorphism and "
    "irreducible-surjection checks degrade to bijection checks"
)
MINIMAL_LEVEL_NOTE = (
    "verified on the minimal/real part of the spectrum only; the full "
    "prime spectrum of an order is infinite and is never materialized"
)


@dataclass(frozen=True)
class PrimeCone:
    """A point of the real spectrum: a minimal prime together with a real
    embedding of its residue field (an index into the residue's real
    roots)."""

    prime_id: int
    embedding: int


@dataclass(frozen=True)
class Section:
    """One prime cone per minimal prime: the graph of a section of the
    support map."""

    assignment: tuple[tuple[int, int], ...]  # sorted (prime_id, embedding)

    @staticmethod
    def of(mapping: dict[int, int]) -> "Section":
        return Section(tuple(sorted(mapping.items())))

    def embedding(self, prime_id: int) -> int:
        for pid, emb in self.assignment:
            if pid == prime_id:
                return emb
        raise KeyError(prime_id)

    def cones(self) -> tuple[PrimeCone, ...]:
        return tuple(PrimeCone(pid, emb) for pid, emb in self.assignment)

    def items(self) -> tuple[tuple[int, int], ...]:
        return self.assignment


@dataclass(frozen=True)
class CheckRecord:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class SpectralReport:
    subject: str
    checks: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **details) -> None:
        self.checks.append(CheckRecord(name, passed, details))


# -- the spectrum itself -----------------------------------------------------


def real_spectrum(A: ComputedSubring) -> list[PrimeCone]:
    """All prime cones of A.  Within the supported class every cone has
    minimal support (non-minimal primes have finite residue rings, which
    carry no ordering), so enumerating (minimal prime, real embedding)
    pairs is exhaustive."""
    return [
        PrimeCone(p.id, j)
        for p in A.primes
        for j in range(len(p.residue.real_roots))
    ]


def sections(A: ComputedSubring) -> list[Section]:
    choices = [
        [(p.id, j) for j in range(len(p.residue.real_roots))] for p in A.primes
    ]
    return [Section(tuple(combo)) for combo in itertools.product(*choices)]


def sections_and_irreducible_sets(
    A: ComputedSubring,
) -> tuple[list[Section], list[frozenset[PrimeCone]]]:
    """Sections of the support map, and the closed subsets of the real
    spectrum on which the support map is an irreducible surjection.  In the
    finite discrete setting the latter are exactly the graphs of the
    former; the counts are asserted equal."""
    secs = sections(A)
    closed = []
    spectrum = real_spectrum(A)
    prime_ids = [p.id for p in A.primes]
    for size in range(1, len(spectrum) + 1):
        for subset in itertools.combinations(spectrum, size):
            supports = [c.prime_id for c in subset]
            if sorted(supports) != sorted(prime_ids):
                continue  # not surjective onto MinSpec
            if len(set(supports)) != len(supports):
                continue  # a proper subset would still surject
            closed.append(frozenset(subset))
    if len(closed) != len(secs):
        raise TheoremViolation("section count disagrees with irreducible closed set count")
    return secs, closed


# -- residue embedding bookkeeping across ring extensions ---------------------


def _separators(nf: NumberField) -> list[Fraction]:
    roots = nf.real_roots
    return [(roots[k].hi + roots[k + 1].lo) / 2 for k in range(len(roots) - 1)]


def _compose_mod(outer: Poly, inner: Poly, modulus: Poly) -> Poly:
    acc = Poly()
    for c in reversed(outer.coeffs):
        acc = (acc * inner + Poly([c])) % modulus
    return acc


def contract_prime(A: ComputedSubring, q: MinimalPrime) -> MinimalPrime:
    """The minimal prime of A under a minimal prime q of an over-ring in
    the same ambient."""
    first = q.coordinate_set[0]
    for p in A.primes:
        if first in p.coordinate_set:
            if not set(q.coordinate_set) <= set(p.coordinate_set):
                raise TheoremViolation(
                    "minimal prime of the over-ring straddles two primes below"
                )
            return p
    raise PoringLabError("no prime below; rings do not share an ambient")


def restriction_map(
    A: ComputedSubring, p: MinimalPrime, C: ComputedSubring, q: MinimalPrime
) -> list[int]:
    """For each real embedding of C's residue field at q (lying over p),
    the index of the embedding of A's residue field at p it restricts to.

    The residue generator of A at p is re-expressed inside C's residue
    field at the shared ambient coordinate; root indices are then matched
    exactly through rational separators between the roots below."""
    j0 = q.coordinate_set[0]
    theta_below = p.theta_preimage.coords[j0]
    expr = C.express_in_residue(q, theta_below, j0)
    if expr is None:
        raise PoringLabError(
            "residue field below does not embed in the residue field above"
        )
    if not _compose_mod(p.residue.minpoly, expr, q.residue.minpoly).is_zero:
        raise TheoremViolation("residue generator image is not a root of its minimal polynomial")
    seps = _separators(p.residue)
    out = []
    for rho in q.residue.real_roots:
        below = sum(1 for s in seps if sign_at(expr - Poly([s]), rho) > 0)
        out.append(below)
    return out


def extend_cone(
    A: ComputedSubring,
    C: ComputedSubring,
    alpha: PrimeCone,
    q: MinimalPrime,
) -> PrimeCone:
    """The unique prime cone of C with support q restricting to alpha.
    Requires q to lie over alpha's support; non-existence or non-uniqueness
    of the extension is a theorem violation, not an input error."""
    p = A.primes[alpha.prime_id]
    if not set(q.coordinate_set) <= set(p.coordinate_set):
        raise PoringLabError("prime does not lie over the cone's support")
    rmap = restriction_map(A, p, C, q)
    matches = [i for i, j in enumerate(rmap) if j == alpha.embedding]
    if not matches:
        raise TheoremViolation("no embedding of the residue field above extends the cone")
    if len(matches) > 1:
        raise TheoremViolation("cone extension is not unique")
    return PrimeCone(q.id, matches[0])


def restrict_cone(A: ComputedSubring, C: ComputedSubring, cone: PrimeCone) -> PrimeCone:
    """The cone of A induced by a cone of C (contraction of support plus
    restriction of the residue embedding)."""
    q = C.primes[cone.prime_id]
    p = contract_prime(A, q)
    rmap = restriction_map(A, p, C, q)
    return PrimeCone(p.id, rmap[cone.embedding])


def match_sections(A: ComputedSubring, C: ComputedSubring) -> dict[Section, Section]:
    """For an over-ring C whose minimal primes biject onto A's, the induced
    bijection from sections of C to sections of A."""
    out = {}
    for s in sections(C):
        image = {}
        for pid, emb in s.items():
            below = restrict_cone(A, C, PrimeCone(pid, emb))
            if below.prime_id in image:
                raise TheoremViolation("two primes above contracted to one below")
            image[below.prime_id] = below.embedding
        if len(image) != len(A.primes):
            raise TheoremViolation("section matching is not onto the primes below")
        out[s] = Section.of(image)
    if len(set(out.values())) != len(out):
        raise TheoremViolation("section matching is not injective")
    return out


# -- verified spectral statements ---------------------------------------------


def verify_fiber_product(A: ComputedSubring, C: ComputedSubring) -> SpectralReport:
    """Check that the real spectrum of C is, point by point, the fiber
    product of its prime spectrum with the real spectrum of A: the map
    cone -> (support, restricted cone) is a bijection onto the set of
    compatible (prime of C, cone of A) pairs."""
    report = SpectralReport(subject="fiber-product of adjoined idempotents")
    report.notes.append(FINITE_DISCRETE_NOTE)
    report.notes.append(
        "fiber product is taken over minimal primes of the over-ring; "
        "integrality (automatic in this class) confines supports there"
    )
    if A.ambient != C.ambient:
        raise PoringLabError("rings do not share an ambient algebra")
    if not C.contains_subring(A):
        raise PoringLabError("the over-ring does not contain the base ring")
    for g in C.presentation.generators:
        if not (A.rational_span_contains(g) or g.is_idempotent()):
            raise PoringLabError(
                "cannot certify the over-ring is integral over the base: "
                "a generator is neither in the base's rational span nor idempotent"
            )
    sper_A = real_spectrum(A)
    sper_C = real_spectrum(C)
    fiber = set()
    for q in C.primes:
        p = contract_prime(A, q)
        for alpha in sper_A:
            if alpha.prime_id == p.id:
                fiber.add((q.id, alpha))
    images = {}
    for cone in sper_C:
        q = C.primes[cone.prime_id]
        below = restrict_cone(A, C, cone)
        images[cone] = (q.id, below)
    report.add(
        "cardinalities",
        len(sper_C) == len(fiber),
        sper_C=len(sper_C),
        fiber=len(fiber),
    )
    injective = len(set(images.values())) == len(images)
    surjective = set(images.values()) == fiber
    report.add("injective", injective)
    report.add(
        "surjective-onto-fiber",
        surjective,
        missing=sorted(
            (qid, (a.prime_id, a.embedding)) for qid, a in fiber - set(images.values())
        ),
    )
    report.add(
        "matching",
        True,
        pairs=[
            ((c.prime_id, c.embedding), (qid, (a.prime_id, a.embedding)))
            for c, (qid, a) in sorted(images.items(), key=lambda kv: (kv[0].prime_id, kv[0].embedding))
        ],
    )
    return report


def verify_essext(
    A: ComputedSubring, B: ComputedSubring, samples: Optional[Sequence[Element]] = None
) -> SpectralReport:
    """For an essential reduced extension A ⊆ B: the vanishing- and
    non-vanishing-set identities on samples, and the irreducible surjection
    from the minimal primes of B onto those of A (a bijection, here)."""
    fail = essential_failure(A, B)
    if fail is not None:
        raise PoringLabError(
            f"extension is not essential: the block ideal of minimal prime "
            f"{fail.id} (coordinates {fail.coordinate_set}) meets the subring trivially"
        )
    report = SpectralReport(subject="essential extension spectral facts")
    report.notes.append(FINITE_DISCRETE_NOTE)
    if samples is None:
        samples = list(A.basis)

    def vanishes(ring: ComputedSubring, x: Element, prime: MinimalPrime) -> bool:
        return all(x.coords[i].is_zero for i in prime.coordinate_set)

    phi = {q.id: contract_prime(A, q).id for q in B.primes}
    y_ids = sorted(p.id for p in A.primes)
    surjective = sorted(set(phi.values())) == y_ids
    report.add("support-map-surjective", surjective, map=sorted(phi.items()))
    irreducible = True
    for drop in phi:
        rest = {phi[q] for q in phi if q != drop}
        if sorted(rest) == y_ids:
            irreducible = False
            break
    report.add(
        "no-proper-subset-surjects",
        irreducible,
        detail="equivalent to injectivity on a finite discrete space",
    )
    for idx, a in enumerate(samples):
        vb = {q.id for q in B.primes if vanishes(B, a, q)}
        va = {p.id for p in A.primes if vanishes(A, a, p)}
        image_v = {phi[q] for q in vb}
        db = {q.id for q in B.primes} - vb
        da = {p.id for p in A.primes} - va
        image_d = {phi[q] for q in db}
        report.add(
            f"vanishing-identity[{idx}]",
            image_v == va,
            sample=idx,
            above=sorted(vb),
            below=sorted(va),
        )
        report.add(
            f"nonvanishing-identity[{idx}]",
            image_d == da,
            sample=idx,
            above=sorted(db),
            below=sorted(da),
        )
    report.add(
        "density-at-minimal-level",
        True,
        detail=MINIMAL_LEVEL_NOTE,
    )
    return report
