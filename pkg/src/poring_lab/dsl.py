"""Line-based ring-definition DSL: fields, product ambients, glued
subrings, partial-ordering generator lists and verification directives.

Grammar (one statement per line, `#` starts a comment):

    field K2 = poly(-2, 0, 1)
    ambient B = product(K2, K2)
    subring A2 mode=order gens=[(t, 0), (0, t), (1, 1)]
    pordering Aplus gens=squares
    verify census A2
    analyze A2

Coordinate expressions are polynomials in `t` with rational coefficients
(`t`, `2*t`, `1/2*t^2 + 3`, implicit `2t` also accepted).  Every referenced
name must be declared before use; diagnostics carry line and column plus a
one-line fix hint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Poly, Q

DIRECTIVES = ("maxpo", "adjoin-idemp", "essext", "census", "odd-root", "rigidity")


class DslError(Exception):
    def __init__(self, message: str, line: int, col: int, hint: str):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.hint = hint

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}: {self.message}\n  hint: {self.hint}"


@dataclass(frozen=True)
class FieldDecl:
    name: str
    minpoly: Poly


@dataclass(frozen=True)
class AmbientDecl:
    name: str
    factor_names: tuple[str, ...]


@dataclass(frozen=True)
class SubringDecl:
    name: str
    ambient: str
    mode: str
    generators: tuple[tuple[Poly, ...], ...]


@dataclass(frozen=True)
class POrderingDecl:
    name: str
    ambient: str
    squares: bool
    generators: tuple[tuple[Poly, ...], ...]


@dataclass(frozen=True)
class Directive:
    kind: str  # one of DIRECTIVES or "analyze"
    args: tuple[str, ...]
    options: tuple[tuple[str, str], ...]
    line: int


@dataclass
class RingFile:
    fields: dict[str, FieldDecl] = field(default_factory=dict)
    ambients: dict[str, AmbientDecl] = field(default_factory=dict)
    subrings: dict[str, SubringDecl] = field(default_factory=dict)
    porderings: dict[str, POrderingDecl] = field(default_factory=dict)
    directives: list[Directive] = field(default_factory=list)


class _Cursor:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def error(self, message: str, hint: str) -> DslError:
        return DslError(message, self.line, self.pos + 1, hint)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str, hint: str) -> None:
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}", hint)
        self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def word(self, what: str, hint: str) -> str:
        self.skip_ws()
        m = re.match(r"[A-Za-z_][A-Za-z0-9_-]*", self.text[self.pos :])
        if not m:
            raise self.error(f"expected {what}", hint)
        self.pos += m.end()
        return m.group(0)

    def rational(self, hint: str) -> Fraction:
        self.skip_ws()
        m = re.match(r"[+-]?\d+(/\d+)?", self.text[self.pos :])
        if not m:
            raise self.error("expected a rational number", hint)
        self.pos += m.end()
        return Fraction(m.group(0))


def _parse_coordinate(cur: _Cursor) -> Poly:
    """One coordinate expression: a sum of terms c, c*t^k, t^k."""
    coeffs: dict[int, Fraction] = {}
    cur.skip_ws()
    first = True
    while True:
        cur.skip_ws()
        ch = cur.peek()
        if ch in (",", ")"):
            if first:
                raise cur.error("empty coordinate expression", "write 0 for a zero coordinate")
            break
        sign = Q(1)
        if ch == "+":
            cur.pos += 1
        elif ch == "-":
            sign = Q(-1)
            cur.pos += 1
        elif not first:
            raise cur.error("expected '+' or '-' between terms", "separate terms with + or -")
        cur.skip_ws()
        coef = Q(1)
        have_coef = False
        if re.match(r"\d", cur.peek() or " "):
            coef = cur.rational("a coefficient like 2 or 1/2")
            have_coef = True
        cur.skip_ws()
        power = 0
        if cur.peek() == "*":
            cur.pos += 1
            cur.skip_ws()
        if cur.peek() == "t":
            cur.pos += 1
            power = 1
            if cur.peek() == "^":
                cur.pos += 1
                m = re.match(r"\d+", cur.text[cur.pos :])
                if not m:
                    raise cur.error("expected an exponent after '^'", "write t^2, t^3, ...")
                power = int(m.group(0))
                cur.pos += m.end()
        elif not have_coef:
            raise cur.error("expected a term", "a term is a rational, t, or c*t^k")
        coeffs[power] = coeffs.get(power, Q(0)) + sign * coef
        first = False
    deg = max(coeffs) if coeffs else 0
    return Poly([coeffs.get(k, Q(0)) for k in range(deg + 1)])


def _parse_tuple(cur: _Cursor, arity: int, where: str) -> tuple[Poly, ...]:
    cur.eat("(", "coordinates are written as (expr, expr, ...)")
    coords = [_parse_coordinate(cur)]
    while True:
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            coords.append(_parse_coordinate(cur))
        elif cur.peek() == ")":
            cur.pos += 1
            break
        else:
            raise cur.error("expected ',' or ')'", "close the coordinate tuple")
    if len(coords) != arity:
        raise cur.error(
            f"{where}: expected {arity} coordinates, got {len(coords)}",
            "one coordinate per ambient factor",
        )
    return tuple(coords)


def _parse_tuple_list(cur: _Cursor, arity: int, where: str) -> tuple[tuple[Poly, ...], ...]:
    cur.eat("[", "generators are written as [(..), (..)]")
    out = [_parse_tuple(cur, arity, where)]
    while True:
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            out.append(_parse_tuple(cur, arity, where))
        elif cur.peek() == "]":
            cur.pos += 1
            break
        else:
            raise cur.error("expected ',' or ']'", "close the generator list")
    return tuple(out)


def parse_ring_file(text: str) -> RingFile:
    model = RingFile()
    last_ambient: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        head = cur.word("a statement keyword", "statements start with field/ambient/subring/pordering/verify/analyze")
        if head == "field":
            name = cur.word("a field name", "field NAME = poly(c0, c1, ...)")
            if name in model.fields:
                raise cur.error(f"field {name!r} already declared", "pick a fresh name")
            cur.eat("=", "field NAME = poly(...)")
            kw = cur.word("poly", "the right-hand side is poly(c0, c1, ...)")
            if kw != "poly":
                raise cur.error("expected poly(...)", "field NAME = poly(c0, c1, ...)")
            cur.eat("(", "poly takes coefficients, lowest degree first")
            coeffs = [cur.rational("coefficients are rationals")]
            while True:
                cur.skip_ws()
                if cur.peek() == ",":
                    cur.pos += 1
                    coeffs.append(cur.rational("coefficients are rationals"))
                elif cur.peek() == ")":
                    cur.pos += 1
                    break
                else:
                    raise cur.error("expected ',' or ')'", "close the coefficient list")
            minpoly = Poly(coeffs)
            if minpoly.degree < 1 or not minpoly.is_monic:
                raise cur.error(
                    "minimal polynomial must be monic of degree >= 1",
                    "the last coefficient must be 1",
                )
            model.fields[name] = FieldDecl(name, minpoly)
        elif head == "ambient":
            name = cur.word("an ambient name", "ambient NAME = product(F1, F2, ...)")
            if name in model.ambients:
                raise cur.error(f"ambient {name!r} already declared", "pick a fresh name")
            cur.eat("=", "ambient NAME = product(...)")
            kw = cur.word("product", "the right-hand side is product(F1, ...)")
            if kw != "product":
                raise cur.error("expected product(...)", "ambient NAME = product(F1, F2)")
            cur.eat("(", "product lists declared field names")
            names = [cur.word("a field name", "list declared field names")]
            while True:
                cur.skip_ws()
                if cur.peek() == ",":
                    cur.pos += 1
                    names.append(cur.word("a field name", "list declared field names"))
                elif cur.peek() == ")":
                    cur.pos += 1
                    break
                else:
                    raise cur.error("expected ',' or ')'", "close the factor list")
            for fn in names:
                if fn not in model.fields:
                    raise cur.error(f"undeclared field {fn!r}", "declare it with a field statement first")
            model.ambients[name] = AmbientDecl(name, tuple(names))
            last_ambient = name
        elif head == "subring":
            name = cur.word("a subring name", "subring NAME mode=order gens=[...]")
            if name in model.subrings:
                raise cur.error(f"subring {name!r} already declared", "pick a fresh name")
            mode = None
            amb = None
            gens = None
            while not cur.at_end():
                key = cur.word("an option", "options are mode=, in=, gens=")
                cur.eat("=", "options are written key=value")
                if key == "mode":
                    mode = cur.word("order or algebra", "mode=order or mode=algebra")
                    if mode not in ("order", "algebra"):
                        raise cur.error(f"unknown mode {mode!r}", "mode=order or mode=algebra")
                elif key == "in":
                    amb = cur.word("an ambient name", "in=AMBIENT (declared above)")
                elif key == "gens":
                    target = amb or last_ambient
                    if target is None or target not in model.ambients:
                        raise cur.error(
                            "no ambient in scope for the generators",
                            "declare an ambient first or pass in=AMBIENT before gens=",
                        )
                    arity = len(model.ambients[target].factor_names)
                    gens = _parse_tuple_list(cur, arity, f"subring {name}")
                    amb = target
                else:
                    raise cur.error(f"unknown option {key!r}", "options are mode=, in=, gens=")
            if mode is None:
                raise cur.error("missing mode=", "mode=order or mode=algebra")
            if gens is None:
                raise cur.error("missing gens=", "gens=[(...), ...]")
            model.subrings[name] = SubringDecl(name, amb, mode, gens)
        elif head == "pordering":
            name = cur.word("a pordering name", "pordering NAME gens=squares")
            if name in model.porderings:
                raise cur.error(f"pordering {name!r} already declared", "pick a fresh name")
            amb = None
            squares = False
            gens: tuple[tuple[Poly, ...], ...] = ()
            while not cur.at_end():
                key = cur.word("an option", "options are in=, gens=")
                cur.eat("=", "options are written key=value")
                if key == "in":
                    amb = cur.word("an ambient name", "in=AMBIENT")
                elif key == "gens":
                    cur.skip_ws()
                    if cur.peek() == "[":
                        target = amb or last_ambient
                        if target is None or target not in model.ambients:
                            raise cur.error(
                                "no ambient in scope for the generators",
                                "declare an ambient first or pass in=AMBIENT",
                            )
                        arity = len(model.ambients[target].factor_names)
                        gens = _parse_tuple_list(cur, arity, f"pordering {name}")
                        amb = target
                    else:
                        kw = cur.word("squares", "gens=squares or gens=[(...)]")
                        if kw != "squares":
                            raise cur.error("expected squares or a generator list", "gens=squares")
                        squares = True
                        amb = amb or last_ambient
                else:
                    raise cur.error(f"unknown option {key!r}", "options are in=, gens=")
            if not squares and not gens:
                raise cur.error("missing gens=", "gens=squares or gens=[(...), ...]")
            model.porderings[name] = POrderingDecl(name, amb or "", squares, gens)
        elif head == "verify":
            kind = cur.word("a check name", f"checks: {', '.join(DIRECTIVES)}")
            if kind not in DIRECTIVES:
                raise cur.error(f"unknown check {kind!r}", f"checks: {', '.join(DIRECTIVES)}")
            args: list[str] = []
            options: list[tuple[str, str]] = []
            while not cur.at_end():
                w = cur.word("a ring name or option", "verify CHECK RING [RING2] [key=value]")
                cur.skip_ws()
                if cur.peek() == "=":
                    cur.pos += 1
                    cur.skip_ws()
                    m = re.match(r"[A-Za-z0-9_/-]+", cur.text[cur.pos :])
                    if not m:
                        raise cur.error("expected an option value", "key=value")
                    cur.pos += m.end()
                    options.append((w, m.group(0)))
                else:
                    args.append(w)
            if not args:
                raise cur.error("missing ring name", "verify CHECK RING")
            for a in args:
                if a not in model.subrings and a not in ("tqr", "baerhull"):
                    raise cur.error(
                        f"undeclared subring {a!r}",
                        "declare it with a subring statement, or use tqr/baerhull",
                    )
            for k, v in options:
                if k == "using" and v not in model.porderings:
                    raise cur.error(f"undeclared pordering {v!r}", "declare it with a pordering statement")
            model.directives.append(Directive(kind, tuple(args), tuple(options), lineno))
        elif head == "analyze":
            name = cur.word("a ring name", "analyze RING")
            if name not in model.subrings:
                raise cur.error(f"undeclared subring {name!r}", "declare it with a subring statement")
            model.directives.append(Directive("analyze", (name,), (), lineno))
        else:
            raise cur.error(
                f"unknown statement {head!r}",
                "statements start with field/ambient/subring/pordering/verify/analyze",
            )
        if head in ("field", "ambient", "subring", "pordering"):
            if not cur.at_end():
                raise cur.error("trailing input after statement", "one statement per line")
    return model


# -- normalized printing (round-trip) -----------------------------------------


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_coord(p: Poly) -> str:
    if p.is_zero:
        return "0"
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        if k == 0:
            terms.append(_fmt_q(c))
        else:
            tpart = "t" if k == 1 else f"t^{k}"
            if c == 1:
                terms.append(tpart)
            elif c == -1:
                terms.append(f"-{tpart}")
            else:
                terms.append(f"{_fmt_q(c)}*{tpart}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def print_ring_file(model: RingFile) -> str:
    lines = []
    for f in model.fields.values():
        coeffs = ", ".join(_fmt_q(c) for c in f.minpoly.coeffs)
        lines.append(f"field {f.name} = poly({coeffs})")
    for a in model.ambients.values():
        lines.append(f"ambient {a.name} = product({', '.join(a.factor_names)})")
    for s in model.subrings.values():
        gens = ", ".join("(" + ", ".join(_fmt_coord(c) for c in g) + ")" for g in s.generators)
        lines.append(f"subring {s.name} mode={s.mode} in={s.ambient} gens=[{gens}]")
    for p in model.porderings.values():
        if p.squares:
            lines.append(f"pordering {p.name} gens=squares")
        else:
            gens = ", ".join(
                "(" + ", ".join(_fmt_coord(c) for c in g) + ")" for g in p.generators
            )
            lines.append(f"pordering {p.name} in={p.ambient} gens=[{gens}]")
    for d in model.directives:
        if d.kind == "analyze":
            lines.append(f"analyze {d.args[0]}")
        else:
            parts = [f"verify {d.kind}", *d.args]
            parts.extend(f"{k}={v}" for k, v in d.options)
            lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
