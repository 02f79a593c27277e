"""Verification driver and command line entry point.

    poring-lab <file> [--seed N] [--parallel] [--format text|structured]
               [--out PATH] [--timings]

Exit codes: 0 all checks pass, 1 any check fails, 2 usage or parse error.
The seed falls back to the PORING_LAB_SEED environment variable, then 0.
Check precondition failures surface as failed records, never as crashes.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from .closures import a_automorphisms, closures_census, descriptors, odd_root
from .cones import FiniteGenCone, restrict_maxpo, weakest_extension
from .dsl import Directive, DslError, RingFile, parse_ring_file
from .errors import PoringLabError
from .etale import (
    ComputedSubring,
    NumberField,
    ProductAlgebra,
    SubringPresentation,
    baer_hull,
    close_subring,
    idempotents,
    is_baer,
    is_integrally_closed_in_T,
    total_quotient,
    total_quotient_subring,
)
from .report import Report, RunCheck
from .spectra import verify_essext, verify_fiber_product


class Workspace:
    """Declared rings materialized on demand, with caches."""

    def __init__(self, model: RingFile):
        self.model = model
        self._fields: dict[str, NumberField] = {}
        self._ambients: dict[str, ProductAlgebra] = {}
        self._subrings: dict[str, ComputedSubring] = {}
        self._hulls: dict[str, ComputedSubring] = {}
        self._tqrs: dict[str, ComputedSubring] = {}

    def field(self, name: str) -> NumberField:
        if name not in self._fields:
            decl = self.model.fields[name]
            self._fields[name] = NumberField(decl.name, decl.minpoly)
        return self._fields[name]

    def ambient(self, name: str) -> ProductAlgebra:
        if name not in self._ambients:
            decl = self.model.ambients[name]
            self._ambients[name] = ProductAlgebra([self.field(f) for f in decl.factor_names])
        return self._ambients[name]

    def subring(self, name: str) -> ComputedSubring:
        if name not in self._subrings:
            decl = self.model.subrings[name]
            amb = self.ambient(decl.ambient)
            gens = tuple(amb.element(list(g)) for g in decl.generators)
            pres = SubringPresentation(amb, gens, decl.mode)
            self._subrings[name] = close_subring(pres)
        return self._subrings[name]

    def hull(self, name: str) -> ComputedSubring:
        if name not in self._hulls:
            self._hulls[name] = baer_hull(self.subring(name))
        return self._hulls[name]

    def tqr(self, name: str) -> ComputedSubring:
        if name not in self._tqrs:
            self._tqrs[name] = total_quotient_subring(self.subring(name))
        return self._tqrs[name]

    def over_ring(self, base: str, token: str) -> ComputedSubring:
        if token == "tqr":
            return self.tqr(base)
        if token == "baerhull":
            return self.hull(base)
        return self.subring(token)

    def pordering(self, name: str, ring: ComputedSubring) -> Optional[FiniteGenCone]:
        decl = self.model.porderings[name]
        if decl.squares:
            return None  # the squares cone is contained in every section cone
        amb = self.ambient(decl.ambient)
        gens = [amb.element(list(g)) for g in decl.generators]
        return weakest_extension(gens, ring)


def _fail(check_id: str, claim: str, exc: Exception) -> RunCheck:
    return RunCheck(check_id, claim, "fail", {"message": str(exc), "kind": type(exc).__name__})


def _spectral_checks(check_id: str, claim: str, report) -> list[RunCheck]:
    out = []
    for rec in report.checks:
        out.append(
            RunCheck(
                f"{check_id}/{rec.name}",
                claim,
                "pass" if rec.passed else "fail",
                dict(rec.details),
            )
        )
    if report.notes:
        out.append(RunCheck(f"{check_id}/notes", claim, "pass", {"notes": list(report.notes)}))
    return out


def run_directive(ws: Workspace, d: Directive, seed: int) -> list[RunCheck]:
    target = d.args[0]
    options = dict(d.options)
    try:
        if d.kind == "analyze":
            A = ws.subring(target)
            tq = total_quotient(A)
            B = baer_hull(A)
            details = {
                "summary": (
                    f"{len(A.primes)} minimal primes, dim {A.dim}, "
                    f"{len(idempotents(A))} idempotents, Baer hull dim {B.dim}"
                ),
                "mode": A.mode,
                "dim": A.dim,
                "minimal_primes": [
                    {
                        "id": p.id,
                        "coordinates": list(p.coordinate_set),
                        "residue_minpoly": p.residue.minpoly,
                        "real_embeddings": len(p.residue.real_roots),
                    }
                    for p in A.primes
                ],
                "total_quotient_factors": [f.minpoly for f in tq.product.factors],
                "idempotents": len(idempotents(A)),
                "baer": is_baer(A),
                "baer_hull_dim": B.dim,
                "integrally_closed_in_tqr": {
                    True: "true",
                    False: "false",
                    None: "unknown",
                }[is_integrally_closed_in_T(A)],
            }
            return [RunCheck(f"analyze:{target}", "structure analysis", "pass", details)]

        if d.kind == "maxpo":
            over_token = d.args[1] if len(d.args) > 1 else "tqr"
            A = ws.subring(target)
            B = ws.over_ring(target, over_token)
            containing = None
            if "using" in options:
                containing = ws.pordering(options["using"], B)
            table = restrict_maxpo(A, B, containing=containing)
            check_id = f"maxpo:{target}->{over_token}"
            claim = "restriction is a bijection on maximal partial orderings"
            ok = table.count == table.expected_count() if containing is None else True
            details = {
                "summary": f"{table.count} orderings, {len(table.witnesses)} separating witnesses",
                "count": table.count,
                "expected": table.expected_count(),
                "entries": [
                    {
                        "above": e.section_above,
                        "below": e.section_below,
                    }
                    for e in table.entries
                ],
                "witnesses": {
                    f"{i},{j}": w for (i, j), w in sorted(table.witnesses.items())
                },
            }
            return [RunCheck(check_id, claim, "pass" if ok else "fail", details)]

        if d.kind == "adjoin-idemp":
            A = ws.subring(target)
            C = ws.hull(target)
            rep = verify_fiber_product(A, C)
            return _spectral_checks(
                f"adjoin-idemp:{target}",
                "real spectrum of the idempotent extension is the fiber product",
                rep,
            )

        if d.kind == "essext":
            A = ws.subring(target)
            over_token = d.args[1] if len(d.args) > 1 else "baerhull"
            B = ws.over_ring(target, over_token)
            check_id = f"essext:{target}->{over_token}"
            claim = "essential extension spectral identities"
            try:
                rep = verify_essext(A, B)
            except PoringLabError as exc:
                return [
                    RunCheck(
                        check_id,
                        claim,
                        "fail",
                        {"summary": "not essential", "message": str(exc)},
                    )
                ]
            return _spectral_checks(check_id, claim, rep)

        if d.kind == "census":
            A = ws.subring(target)
            rep = closures_census(A)
            counts = "/".join(str(v) for v in rep.counts.values())
            out = [
                RunCheck(
                    f"census:{target}",
                    "closures and maximal orderings correspond",
                    "pass" if rep.passed else "fail",
                    {
                        "summary": f"counts {counts}",
                        "counts": dict(rep.counts),
                        "pairings": rep.pairings,
                    },
                )
            ]
            for rec in rep.checks:
                out.append(
                    RunCheck(
                        f"census:{target}/{rec.name}",
                        "closures and maximal orderings correspond",
                        "pass" if rec.passed else "fail",
                        dict(rec.details),
                    )
                )
            return out

        if d.kind == "odd-root":
            A = ws.subring(target)
            count = int(options.get("count", "100"))
            max_degree = int(options.get("degree", "7"))
            if max_degree % 2 == 0:
                max_degree -= 1
            rng = random.Random(f"{seed}|odd-root|{target}")
            descriptor = descriptors(A)[0]
            solved = 0
            for _ in range(count):
                degree = rng.choice(range(1, max_degree + 1, 2))
                coeffs = []
                for _ in range(degree):
                    acc = A.ambient.zero()
                    for b in A.basis:
                        c = rng.randint(-5, 5)
                        if c:
                            acc = acc + b.scale(c)
                    coeffs.append(acc)
                coeffs.append(A.ambient.one())
                odd_root(descriptor, coeffs)
                solved += 1
            return [
                RunCheck(
                    f"odd-root:{target}",
                    "monic odd-degree polynomials have exact roots",
                    "pass",
                    {
                        "summary": f"{solved} random polynomials solved exactly",
                        "count": solved,
                        "max_degree": max_degree,
                        "descriptor": descriptor.section,
                    },
                )
            ]

        if d.kind == "rigidity":
            A = ws.subring(target)
            C = ws.hull(target)
            search = a_automorphisms(A, C)
            only_identity = (
                len(search.automorphisms) == 1
                and search.automorphisms[0].is_identity()
                and not search.undecided
            )
            return [
                RunCheck(
                    f"rigidity:{target}",
                    "the Baer hull has no automorphism over its base but the identity",
                    "pass" if only_identity else "fail",
                    {
                        "summary": f"{len(search.automorphisms)} automorphism(s), "
                        f"undecided={search.undecided}",
                        "automorphisms": len(search.automorphisms),
                        "undecided": search.undecided,
                    },
                )
            ]

        raise PoringLabError(f"unknown directive {d.kind!r}")
    except Exception as exc:  # precondition failures become failed records
        return [_fail(f"{d.kind}:{target}", d.kind, exc)]


def run(model: RingFile, *, path: str, digest: str, seed: int, parallel: bool = False,
        timings: bool = False) -> Report:
    ws = Workspace(model)
    report = Report(input_path=path, input_sha256=digest, seed=seed)
    clocks: dict[str, int] = {}

    def execute(d: Directive) -> list[RunCheck]:
        t0 = time.monotonic()
        checks = run_directive(ws, d, seed)
        dt = int((time.monotonic() - t0) * 1000)
        for c in checks:
            clocks[c.id] = dt
        return checks

    if parallel:
        # the core is pure and caches are only keyed by declared names,
        # so concurrent directives are safe; results keep directive order
        with ThreadPoolExecutor() as pool:
            for checks in pool.map(execute, model.directives):
                report.checks.extend(checks)
    else:
        for d in model.directives:
            report.checks.extend(execute(d))
    if timings:
        report.timings_ms = clocks
    return report


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="poring-lab",
        description="verify ordering/spectra/closure facts for glued orders in products of real number fields",
    )
    parser.add_argument("file", help="ring definition file")
    parser.add_argument("--seed", type=int, default=None, help="random seed (default: PORING_LAB_SEED or 0)")
    parser.add_argument("--parallel", action="store_true", help="run directives concurrently")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--out", default=None, help="write the report to this path")
    parser.add_argument("--timings", action="store_true", help="attach wall-clock timings (breaks byte-identity)")
    args = parser.parse_args(argv)

    seed = args.seed
    if seed is None:
        env = os.environ.get("PORING_LAB_SEED")
        seed = int(env) if env else 0

    try:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        print(f"poring-lab: cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    try:
        model = parse_ring_file(raw.decode("utf-8"))
    except DslError as exc:
        print(f"poring-lab: {args.file}: {exc}", file=sys.stderr)
        return 2

    digest = hashlib.sha256(raw).hexdigest()
    report = run(
        model,
        path=args.file,
        digest=digest,
        seed=seed,
        parallel=args.parallel,
        timings=args.timings,
    )
    rendered = report.structured() if args.format == "structured" else report.text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
