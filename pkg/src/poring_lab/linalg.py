"""Exact linear algebra over Q and over Z.

Small and dense on purpose: dimensions in this package are bounded by the
rank of the ambient product algebra (a handful), so everything is plain
fraction-free-ish row reduction, plus an incremental Hermite-style integer
lattice for order-mode module closures.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Q = Fraction

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (copy) and pivot column indices."""
    m = [list(map(Q, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m if any(row)], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[0])


def solve(rows: Matrix, target: Vector) -> Vector | None:
    """Coefficients c with sum c_i * rows[i] = target, or None.

    Returns the solution with free coefficients set to zero.
    """
    if not rows:
        return None if any(target) else []
    n = len(rows)
    width = len(target)
    aug = [[Q(rows[i][j]) for i in range(n)] + [Q(target[j])] for j in range(width)]
    red, pivots = rref(aug)
    for row in red:
        if any(row[:n]) is False and row[n] != 0:
            return None
    sol = [Q(0)] * n
    for row, p in zip(red, pivots):
        if p == n:
            return None
        sol[p] = row[n] - sum(row[j] * sol[j] for j in range(p + 1, n))
    # verify (cheap, dimensions are tiny)
    for j in range(width):
        if sum(sol[i] * rows[i][j] for i in range(n)) != target[j]:
            return None
    return sol


def in_span(rows: Matrix, target: Vector) -> bool:
    return solve(rows, target) is not None


def kernel(rows: Matrix) -> Matrix:
    """Basis of {c : sum c_i * rows[i] = 0} (the left kernel of `rows`)."""
    if not rows:
        return []
    n = len(rows)
    width = len(rows[0])
    cols = [[Q(rows[i][j]) for i in range(n)] for j in range(width)]
    red, pivots = rref(cols)
    free = [j for j in range(n) if j not in pivots]
    basis: Matrix = []
    for f in free:
        v = [Q(0)] * n
        v[f] = Q(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def span_equal(a: Matrix, b: Matrix) -> bool:
    ra, _ = rref(a)
    rb, _ = rref(b)
    return ra == rb


def span_intersect(a: Matrix, b: Matrix) -> Matrix:
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    # x in both spans iff x = sum c_i a_i and x = sum d_j b_j; solve
    # sum c_i a_i - sum d_j b_j = 0 and read off sum c_i a_i.
    rows = [list(r) for r in a] + [[-x for x in r] for r in b]
    ker = kernel(rows)
    vecs = []
    for coeffs in ker:
        v = [Q(0)] * len(a[0])
        for ci, row in zip(coeffs[: len(a)], a):
            for j, x in enumerate(row):
                v[j] += ci * x
        if any(v):
            vecs.append(v)
    red, _ = rref(vecs)
    return red


def lcm_int(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else abs(a or b)


def common_denominator(vecs: Matrix) -> int:
    d = 1
    for v in vecs:
        for x in v:
            d = lcm_int(d, Q(x).denominator)
    return d


class IntegerLattice:
    """Sublattice of Z^n in row Hermite form, built incrementally.

    Rows are kept with positive pivots, entries above a pivot reduced into
    [0, pivot), and sorted by pivot column, which makes the basis canonical
    for the lattice.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[int]] = []

    def copy(self) -> "IntegerLattice":
        other = IntegerLattice(self.n)
        other.rows = [r[:] for r in self.rows]
        return other

    def _pivot_col(self, row: list[int]) -> int:
        return next((j for j, x in enumerate(row) if x), self.n)

    def add(self, vec: list[int]) -> bool:
        """Insert a vector; True if the lattice grew."""
        v = [int(x) for x in vec]
        if len(v) != self.n:
            raise ValueError("vector length does not match lattice dimension")
        grew = False
        i = 0
        while True:
            j = self._pivot_col(v)
            if j == self.n:
                break
            while i < len(self.rows) and self._pivot_col(self.rows[i]) < j:
                i += 1
            if i == len(self.rows) or self._pivot_col(self.rows[i]) > j:
                if v[j] < 0:
                    v = [-x for x in v]
                self.rows.insert(i, v)
                grew = True
                break
            row = self.rows[i]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
            else:
                g, s, t = _xgcd(a, b)
                new_row = [s * x + t * y for x, y in zip(row, v)]
                v = [(-(b // g)) * x + (a // g) * y for x, y in zip(row, v)]
                self.rows[i] = new_row
                grew = True
        if grew:
            self._normalize()
        return grew

    def _normalize(self) -> None:
        self.rows.sort(key=self._pivot_col)
        for i in reversed(range(len(self.rows))):
            j = self._pivot_col(self.rows[i])
            if j == self.n:
                continue
            p = self.rows[i][j]
            for k in range(i):
                q = self.rows[k][j] // p
                if q:
                    self.rows[k] = [x - q * y for x, y in zip(self.rows[k], self.rows[i])]
        self.rows = [r for r in self.rows if any(r)]

    def contains(self, vec: list[int]) -> bool:
        v = [int(x) for x in vec]
        for row in self.rows:
            j = self._pivot_col(row)
            if v[j] % row[j] == 0:
                q = v[j] // row[j]
                if q:
                    v = [x - q * y for x, y in zip(v, row)]
            elif v[j]:
                return False
        return not any(v)

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerLattice) and self.n == other.n and self.rows == other.rows


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
