"""Partial orderings of rings as cones.

Maximal partial orderings are represented intensionally as section cones:
a choice of one real embedding per minimal prime, membership being
"every block sign is nonnegative".  The independent check that these
really are maximal is the criterion oracle `extendable_by`, which decides
through exact linear sign systems whether an element can be adjoined to a
cone while keeping it a partial ordering.  Meets of several sections are
supported as well (they are the strictly coarser cones the maximality
oracle must reject).

Membership in a finitely generated cone is deliberately undecided; such
cones only support the containment test against section cones, which is
all the verified statements need.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg, lp
from .errors import PoringLabError, TheoremViolation
from .etale import ComputedSubring, Element, MinimalPrime
from .exact import Poly, Q, poly_mulmod, sign_at
from .spectra import Section, match_sections, sections

WITNESS_SEARCH_BOUND = 9
PATTERN_SEARCH_BOUND = 6


@dataclass(frozen=True)
class SectionCone:
    """The cone of elements nonnegative under every embedding chosen by the
    given sections (one section: a maximal partial ordering candidate;
    several: their intersection, a strictly coarser cone)."""

    ring: ComputedSubring
    sections: tuple[Section, ...]

    @staticmethod
    def of(ring: ComputedSubring, section: Section) -> "SectionCone":
        return SectionCone(ring, (section,))

    def constraints(self) -> list[tuple[MinimalPrime, tuple[int, ...]]]:
        """Per prime, the sorted set of embedding indices to respect."""
        out = []
        for p in self.ring.primes:
            embs = sorted({s.embedding(p.id) for s in self.sections})
            out.append((p, tuple(embs)))
        return out

    def meet(self, other: "SectionCone") -> "SectionCone":
        if self.ring is not other.ring:
            raise ValueError("cones live over different rings")
        return SectionCone(self.ring, tuple(dict.fromkeys(self.sections + other.sections)))


@dataclass(frozen=True)
class FiniteGenCone:
    """The partial ordering generated by the given elements together with
    all squares.  Membership is a sums-of-products feasibility problem and
    is not offered; only containment in a section cone is."""

    ring: ComputedSubring
    generators: tuple[Element, ...]

    def obviously_improper(self) -> bool:
        """True if some nonzero generator is nonpositive under every real
        embedding of every block; its negative is then a sum of squares in
        the rationalized ring, so the cone contains a nonzero x with -x."""
        for g in self.generators:
            if g.is_zero:
                continue
            if all(
                self.ring.cone_sign(g, p, j) <= 0
                for p in self.ring.primes
                for j in range(len(p.residue.real_roots))
            ):
                return True
        return False


OrderingCone = Union[SectionCone, FiniteGenCone]


def weakest_extension(
    A_plus_gens: Sequence[Element], B: ComputedSubring
) -> FiniteGenCone:
    """The cone generated by the given elements over B (squares of B are
    implicit members): the weakest partial ordering of B extending the
    ordering the generators span below."""
    for g in A_plus_gens:
        if not B.contains(g):
            raise PoringLabError("cone generator lies outside the ring")
    return FiniteGenCone(B, tuple(A_plus_gens))


def cone_member(P: OrderingCone, x: Element) -> bool:
    if isinstance(P, FiniteGenCone):
        raise ValueError("membership undecidable for generated cones")
    return all(
        P.ring.cone_sign(x, p, j) >= 0 for p, embs in P.constraints() for j in embs
    )


def contained_in(P: FiniteGenCone, Q_cone: SectionCone) -> bool:
    """Is the generated cone inside the section cone?  Exact: it holds iff
    every generator is (squares are nonnegative under every embedding)."""
    if P.ring is not Q_cone.ring:
        raise ValueError("cones live over different rings")
    return all(cone_member(Q_cone, g) for g in P.generators)


# -- criterion oracle ---------------------------------------------------------


def _power_basis_rows(prime: MinimalPrime) -> list[Poly]:
    m = prime.residue.minpoly
    return [Poly.x(k) % m for k in range(m.degree)]


def _block_system(prime: MinimalPrime, embedding: int, a_res: Poly) -> lp.SignSystem:
    """The sign system deciding whether some a1 supported on this block,
    nonnegative at the embedding, has a*a1 strictly negative there."""
    m = prime.residue.minpoly
    rho = prime.residue.real_roots[embedding]
    powers = _power_basis_rows(prime)
    row_nonneg = lp.Row(tuple(powers), rho, lp.GE)
    row_prod = lp.Row(tuple(poly_mulmod(a_res, t, m) for t in powers), rho, lp.LE)
    return lp.SignSystem(
        dimension=m.degree,
        rows=(row_nonneg, row_prod),
        strict_disjunction=(1,),
    )


def extension_obstruction(P: SectionCone, a: Element) -> Optional[Element]:
    """A witness a1 with a1 in P, a*a1 in -P and a*a1 != 0, if one exists:
    exactly the failure certificate of the extension criterion.  Decided
    per block through exact sign systems; the combined witness (the block
    idempotent) is re-verified against the cone exactly before return."""
    A = P.ring
    for p, embs in P.constraints():
        a_res = A.residue_poly(a, p)
        if a_res.is_zero:
            continue
        if all(lp.feasible(_block_system(p, j, a_res))[0] for j in embs):
            e = A.realize_residues({p.id: Poly([1])})
            _verify_obstruction(P, a, e)
            return e
    return None


def _verify_obstruction(P: SectionCone, a: Element, a1: Element) -> None:
    if not cone_member(P, a1):
        raise TheoremViolation("obstruction witness is not in the cone")
    prod = a * a1
    if prod.is_zero:
        raise TheoremViolation("obstruction witness annihilates the probe")
    if not cone_member(P, -prod):
        raise TheoremViolation("obstruction witness product is not in the negative cone")


def extendable_by(P: SectionCone, a: Element) -> bool:
    """Does a extend P to a partial ordering?  False exactly when some
    a1 in P has a*a1 in -P \\ {0}."""
    if isinstance(P, FiniteGenCone):
        raise ValueError("only section cones supported as P")
    if not P.ring.rational_span_contains(a):
        raise PoringLabError("probe lies outside the ring's rational span")
    return extension_obstruction(P, a) is None


# -- probes and the sampled maximality check ----------------------------------


def block_elements(A: ComputedSubring, prime: MinimalPrime) -> list[Element]:
    """Elements of A supported on a single block (a finite-index sublattice
    basis of A ∩ (block ideal) in order mode, a basis in algebra mode)."""
    other = [i for p in A.primes if p.id != prime.id for i in p.coordinate_set]
    rows = []
    for b in A.basis:
        row: list[Fraction] = []
        for i in other:
            f = A.ambient.factors[i]
            row.extend(b.coords[i].coeff(k) for k in range(f.degree))
        rows.append(row if row else [Q(0)])
    ker = linalg.kernel(rows)
    out = []
    for coeffs in ker:
        den = linalg.common_denominator([coeffs])
        scaled = [c * den for c in coeffs]
        acc = A.ambient.zero()
        for c, b in zip(scaled, A.basis):
            if c:
                acc = acc + b.scale(c)
        if not acc.is_zero:
            out.append(acc)
    return out


def one_block_pattern_probes(A: ComputedSubring, prime: MinimalPrime) -> list[Element]:
    """One single-block element per realizable strict sign pattern across
    the residue's real embeddings (searched over small integer combos)."""
    gens = block_elements(A, prime)
    if not gens:
        return []
    roots = prime.residue.real_roots
    bound_cap = PATTERN_SEARCH_BOUND if len(gens) <= 2 else (3 if len(gens) == 3 else 2)
    found: dict[tuple[int, ...], Element] = {}
    for bound in range(1, bound_cap + 1):
        for combo in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
            if max((abs(c) for c in combo), default=0) != bound:
                continue
            w = A.ambient.zero()
            for c, g in zip(combo, gens):
                if c:
                    w = w + g.scale(c)
            if w.is_zero:
                continue
            q = A.residue_poly(w, prime)
            pattern = tuple(sign_at(q, r) for r in roots)
            if 0 in pattern or pattern in found:
                continue
            found[pattern] = w
            if len(found) == 2 ** len(roots):
                return list(found.values())
    return list(found.values())


def separating_witness(
    A: ComputedSubring, prime: MinimalPrime, emb_pos: int, emb_neg: int
) -> Element:
    """An element of A supported on the prime's block, strictly positive at
    one embedding and strictly negative at the other."""
    gens = block_elements(A, prime)
    r_pos = prime.residue.real_roots[emb_pos]
    r_neg = prime.residue.real_roots[emb_neg]
    for bound in range(1, WITNESS_SEARCH_BOUND + 1):
        for combo in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
            if max((abs(c) for c in combo), default=0) != bound:
                continue
            w = A.ambient.zero()
            for c, g in zip(combo, gens):
                if c:
                    w = w + g.scale(c)
            if w.is_zero:
                continue
            q = A.residue_poly(w, prime)
            if sign_at(q, r_pos) > 0 and sign_at(q, r_neg) < 0:
                return w
    raise TheoremViolation(
        "no separating witness found; the restriction map would not be injective"
    )


@dataclass(frozen=True)
class MaxPOEntry:
    section_above: Section
    section_below: Section
    cone_above: SectionCone
    cone_below: SectionCone


@dataclass
class MaxPOTable:
    """The restriction bijection between maximal partial orderings of an
    intermediate ring B and of A, with explicit separating witnesses
    certifying pairwise distinctness of the restrictions."""

    ring_below: ComputedSubring
    ring_above: ComputedSubring
    entries: list[MaxPOEntry]
    witnesses: dict[tuple[int, int], Element] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.entries)

    def expected_count(self) -> int:
        n = 1
        for p in self.ring_below.primes:
            n *= len(p.residue.real_roots)
        return n


def restrict_maxpo(
    A: ComputedSubring,
    B: ComputedSubring,
    containing: Optional[FiniteGenCone] = None,
) -> MaxPOTable:
    """Enumerate the maximal partial orderings of B as section cones,
    restrict each to A, and certify pairwise distinctness of the
    restrictions by explicit separating witnesses inside A.

    B must sit between A and its total quotient ring (checked: B contains
    A and lies inside A's rational span, which realizes T(A) in this
    class); the minimal primes of B then biject onto those of A with equal
    residue fields, which the construction verifies structurally."""
    if A.ambient != B.ambient:
        raise PoringLabError("rings do not share an ambient algebra")
    if not B.contains_subring(A):
        raise PoringLabError("ring is not contained in the intermediate ring")
    for b in B.basis:
        if not A.rational_span_contains(b):
            raise PoringLabError(
                "intermediate ring is not inside the total quotient ring below"
            )
    below_sets = sorted(p.coordinate_set for p in A.primes)
    above_sets = sorted(q.coordinate_set for q in B.primes)
    if below_sets != above_sets:
        raise TheoremViolation("minimal primes do not correspond blockwise")
    matching = match_sections(A, B)
    entries = []
    for s_above in sections(B):
        s_below = matching[s_above]
        cone_above = SectionCone.of(B, s_above)
        if containing is not None and not contained_in(containing, cone_above):
            continue
        entries.append(
            MaxPOEntry(
                section_above=s_above,
                section_below=s_below,
                cone_above=cone_above,
                cone_below=SectionCone.of(A, s_below),
            )
        )
    entries.sort(key=lambda e: e.section_below.assignment)
    table = MaxPOTable(ring_below=A, ring_above=B, entries=entries)
    cache: dict[tuple[int, int, int], Element] = {}
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            si, sj = entries[i].section_below, entries[j].section_below
            diff = next(
                (
                    (pid, ei, ej)
                    for (pid, ei), (_, ej) in zip(si.items(), sj.items())
                    if ei != ej
                ),
                None,
            )
            if diff is None:
                raise TheoremViolation("two entries restrict to the same section")
            pid, ei, ej = diff
            w = cache.get((pid, ei, ej))
            if w is None:
                w = separating_witness(A, A.primes[pid], ei, ej)
                cache[(pid, ei, ej)] = w
            if not (cone_member(entries[i].cone_below, w) and not cone_member(entries[j].cone_below, w)):
                raise TheoremViolation("separating witness does not separate")
            table.witnesses[(i, j)] = w
    if containing is None and table.count != table.expected_count():
        raise TheoremViolation("ordering count does not match the residue embedding count")
    return table


@dataclass
class MaximalityReport:
    cone_sections: tuple[Section, ...]
    probes_total: int
    members_skipped: int
    counterexamples: list[Element]
    obstructions_found: int
    seed: Optional[int]

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def sampled(self) -> bool:
        return True  # probe-based verification of a universally quantified claim


def default_probes(
    A: ComputedSubring, seed: int = 0, n_random: int = 100
) -> list[Element]:
    """Basis elements and their negatives, one element per realizable
    one-block sign pattern, and seeded random integer combinations."""
    probes: list[Element] = []
    for b in A.basis:
        probes.append(b)
        probes.append(-b)
    for p in A.primes:
        probes.extend(one_block_pattern_probes(A, p))
    rng = random.Random(seed)
    for _ in range(n_random):
        acc = A.ambient.zero()
        for b in A.basis:
            c = rng.randint(-9, 9)
            if c:
                acc = acc + b.scale(c)
        if not acc.is_zero:
            probes.append(acc)
    return probes


def maximality_check(
    P: SectionCone,
    probes: Optional[Sequence[Element]] = None,
    seed: int = 0,
    n_random: int = 100,
) -> MaximalityReport:
    """Sampled maximality certificate: every probe outside the cone must
    fail to extend it.  Probes that do extend are returned as
    counterexamples (a pass certifies maximality against the probe set,
    not exhaustively; the seed is recorded for reproducibility)."""
    used_seed: Optional[int] = None
    if probes is None:
        probes = default_probes(P.ring, seed=seed, n_random=n_random)
        used_seed = seed
    skipped = 0
    counterexamples = []
    obstructions = 0
    for a in probes:
        if cone_member(P, a):
            skipped += 1
            continue
        if extension_obstruction(P, a) is None:
            counterexamples.append(a)
        else:
            obstructions += 1
    return MaximalityReport(
        cone_sections=P.sections,
        probes_total=len(probes),
        members_skipped=skipped,
        counterexamples=counterexamples,
        obstructions_found=obstructions,
        seed=used_seed,
    )
