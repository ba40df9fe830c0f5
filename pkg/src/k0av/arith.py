"""Exact integer arithmetic: factorization, factored rationals, Smith and
Hermite normal forms, and finite subgroups of (Z/n)^2 as lattices.

Conventions:
  * all arithmetic is arbitrary-precision; exactness is preferred over speed
  * matrices act on row vectors; lattices are row spans
  * the Hermite form of a full-rank rank-2 row lattice is [[a, b], [0, d]]
    with a, d > 0 and 0 <= b < d, which is a unique representative
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import K0Error, KernelInputError, LevelMismatchError, SingularMatrixError

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _factor_int(n: int) -> tuple[tuple[int, int], ...]:
    # Trial division with a primality shortcut after each hit; fine at desk scale.
    if n <= 0:
        raise ValueError("can only factor positive integers")
    exps: list[tuple[int, int]] = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps.append((p, e))
    if n > 1 and not is_prime(n):
        q = 5
        while q * q <= n:
            hit = False
            for p in (q, q + 2):
                if n % p == 0:
                    e = 0
                    while n % p == 0:
                        n //= p
                        e += 1
                    exps.append((p, e))
                    hit = True
            if hit and (n == 1 or is_prime(n)):
                break
            q += 6
    if n > 1:
        exps.append((n, 1))
    exps.sort()
    return tuple(exps)


@dataclass(frozen=True)
class FactoredRational:
    """A positive rational stored as a sparse map prime -> nonzero exponent."""

    exps: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if list(self.exps) != sorted(self.exps) or any(e == 0 for _, e in self.exps):
            raise ValueError("exponent table must be sorted with nonzero exponents")

    @staticmethod
    def one() -> FactoredRational:
        return FactoredRational(())

    @staticmethod
    def from_int(n: int) -> FactoredRational:
        if n <= 0:
            raise ValueError("positive integer required")
        return FactoredRational(_factor_int(n))

    @staticmethod
    def from_fraction(q: Fraction | int | FactoredRational) -> FactoredRational:
        if isinstance(q, FactoredRational):
            return q
        if isinstance(q, int):
            return FactoredRational.from_int(q)
        return FactoredRational.from_int(q.numerator) * FactoredRational.from_int(q.denominator).inverse()

    @staticmethod
    def _from_map(m: Mapping[int, int]) -> FactoredRational:
        return FactoredRational(tuple(sorted((p, e) for p, e in m.items() if e != 0)))

    def exponent(self, p: int) -> int:
        for q, e in self.exps:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exps)

    def __mul__(self, other: FactoredRational) -> FactoredRational:
        m = dict(self.exps)
        for p, e in other.exps:
            m[p] = m.get(p, 0) + e
        return FactoredRational._from_map(m)

    def __pow__(self, k: int) -> FactoredRational:
        if k == 0:
            return FactoredRational.one()
        return FactoredRational(tuple((p, e * k) for p, e in self.exps))

    def inverse(self) -> FactoredRational:
        return self ** -1

    def __truediv__(self, other: FactoredRational) -> FactoredRational:
        return self * other.inverse()

    @property
    def is_one(self) -> bool:
        return not self.exps

    @property
    def is_integer(self) -> bool:
        return all(e > 0 for _, e in self.exps)

    def as_fraction(self) -> Fraction:
        out = Fraction(1)
        for p, e in self.exps:
            out *= Fraction(p) ** e
        return out

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(f"{p}" if e == 1 else f"{p}^{e}" for p, e in self.exps)


def factor(n: int) -> FactoredRational:
    """Factor a positive integer."""
    return FactoredRational.from_int(n)


def squarefree_part(q: FactoredRational) -> FactoredRational:
    return FactoredRational(tuple((p, 1) for p, e in q.exps if e % 2))


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix (tuple of row tuples)."""

    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> IntMatrix:
        if not rows:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if width == 0 or any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        return IntMatrix(tuple(tuple(int(x) for x in r) for r in rows))

    @staticmethod
    def identity(n: int) -> IntMatrix:
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        a = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))


def _swap_rows(a: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _add_row(a: list[list[int]], src: int, dst: int, q: int) -> None:
    # row[dst] += q * row[src]
    arow, srow = a[dst], a[src]
    for k in range(len(arow)):
        arow[k] += q * srow[k]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form of a nonsingular square integer matrix.

    Returns (d, u, v) with u @ m @ v == d, u and v unimodular, d diagonal
    with positive entries and d[i] | d[i+1].
    """
    if not m.is_square:
        raise SingularMatrixError("singular matrix")
    n = m.nrows
    if m.det() == 0:
        raise SingularMatrixError("singular matrix")

    a = [list(r) for r in m.rows]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(src: int, dst: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(n):
        while True:
            # Move the smallest nonzero entry of the trailing block to (t, t).
            pivot = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            assert pivot is not None  # nonsingular input
            if pivot[0] != t:
                _swap_rows(a, t, pivot[0])
                _swap_rows(u, t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])

            dirty = False
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    _add_row(a, t, i, -q)
                    _add_row(u, t, i, -q)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            # Row and column are clear; force the pivot to divide the rest.
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, offender, t, 1)
            _add_row(u, offender, t, 1)

    # Positive diagonal, then enforce the divisibility chain.
    for i in range(n):
        if a[i][i] < 0:
            for k in range(n):
                a[i][k] = -a[i][k]
                u[i][k] = -u[i][k]
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                di, dj = a[i][i], a[j][j]
                if dj % di == 0:
                    continue
                changed = True
                g, x, y = xgcd(di, dj)
                l = di // g * dj
                # 2x2 unimodular pair sending diag(di, dj) to diag(g, lcm).
                for k in range(n):
                    u[i][k], u[j][k] = x * u[i][k] + y * u[j][k], -dj // g * u[i][k] + di // g * u[j][k]
                for row in v:
                    row[i], row[j] = row[i] + row[j], -y * dj // g * row[i] + x * di // g * row[j]
                a[i][i], a[j][j] = g, l

    return IntMatrix.from_rows(a), IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def matrix_isogeny_degree(m: IntMatrix, g: int) -> FactoredRational:
    """Degree of the isogeny an integer matrix induces on a dimension-g
    product: |det m|^(2g), as a factored integer."""
    if g < 1:
        raise ValueError("dimension must be positive")
    d = m.det()
    if d == 0:
        raise SingularMatrixError("singular matrix")
    return factor(abs(d)) ** (2 * g)


def row_hnf(rows: Sequence[Sequence[int]], transform: bool = False):
    """Row Hermite form: pivots positive with increasing column index, entries
    above each pivot reduced into [0, pivot), zero rows last.

    With transform=True also returns unimodular u with u @ rows == hnf.
    """
    a = [list(map(int, r)) for r in rows]
    k = len(a)
    m = len(a[0]) if k else 0
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)] if transform else None
    r = 0
    for col in range(m):
        while True:
            nz = [i for i in range(r, k) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][col]))
            if i0 != r:
                _swap_rows(a, r, i0)
                if u is not None:
                    _swap_rows(u, r, i0)
            done = True
            for i in range(r + 1, k):
                if a[i][col] != 0:
                    q = a[i][col] // a[r][col]
                    _add_row(a, r, i, -q)
                    if u is not None:
                        _add_row(u, r, i, -q)
                    done = done and a[i][col] == 0
            if done:
                break
        if r < k and a[r][col] != 0:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
                if u is not None:
                    u[r] = [-x for x in u[r]]
            for i in range(r):
                q = a[i][col] // a[r][col]
                if q:
                    _add_row(a, r, i, -q)
                    if u is not None:
                        _add_row(u, r, i, -q)
            r += 1
        if r == k:
            break
    if u is not None:
        return a, u
    return a


def left_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of { x : x @ rows == 0 }, in row Hermite form."""
    h, u = row_hnf(rows, transform=True)
    rank = sum(1 for row in h if any(row))
    kernel = u[rank:]
    if not kernel:
        return []
    return [row for row in row_hnf(kernel) if any(row)]


def _hnf2(rows: Iterable[Sequence[int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Hermite basis of a full-rank rank-2 row lattice in Z^2."""
    h = row_hnf(list(rows))
    top = [row for row in h if any(row)]
    if len(top) != 2 or top[0][0] == 0 or top[1][1] == 0:
        raise SingularMatrixError("lattice is not full rank")
    return (top[0][0], top[0][1]), (top[1][0], top[1][1])


def _lattice_intersect_2x2(
    b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]]
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Intersection of two full-rank row lattices in Z^2."""
    det2 = b2[0][0] * b2[1][1] - b2[0][1] * b2[1][0]
    if det2 == 0:
        raise SingularMatrixError("lattice is not full rank")
    # adj(b2): b2 @ adj(b2) == det2 * I
    adj = ((b2[1][1], -b2[0][1]), (-b2[1][0], b2[0][0]))
    t = [
        [
            b1[i][0] * adj[0][j] + b1[i][1] * adj[1][j]
            for j in range(2)
        ]
        for i in range(2)
    ]
    m = abs(det2)
    stacked = [t[0], t[1], [m, 0], [0, m]]
    kern = left_kernel(stacked)
    combos = [row[:2] for row in kern]
    points = [
        [c[0] * b1[0][0] + c[1] * b1[1][0], c[0] * b1[0][1] + c[1] * b1[1][1]]
        for c in combos
    ]
    return _hnf2(points)


@dataclass(frozen=True)
class TorsionSubgroup:
    """A finite subgroup C of (Q/Z)^2 killed by `level`.

    C corresponds to a lattice L with Z^2 <= L <= (1/level) Z^2 via
    C = L / Z^2.  Since L itself is not integral, `basis` stores the Hermite
    basis of level*L, so level*Z^2 <= span(basis) <= Z^2 and
    |C| = level^2 / det(basis).
    """

    level: int
    basis: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self) -> None:
        n = self.level
        if n < 1:
            raise KernelInputError("level must be a positive integer")
        (a, b), (z, d) = self.basis
        if z != 0 or a <= 0 or d <= 0 or not 0 <= b < d:
            raise KernelInputError("basis is not in Hermite form")
        # level*Z^2 <= span(basis): (n,0) and (0,n) must be integer combinations.
        if n % a != 0 or n % d != 0 or (n // a) * b % d != 0:
            raise KernelInputError("basis does not contain level * Z^2")

    @staticmethod
    def from_rows(level: int, rows: Sequence[Sequence[int]]) -> TorsionSubgroup:
        return TorsionSubgroup(level, _hnf2(rows))

    @staticmethod
    def from_generators(level: int, gens: Iterable[Sequence[int]]) -> TorsionSubgroup:
        """Subgroup generated by points (x/level, y/level) given as (x, y)."""
        rows = [list(g) for g in gens]
        rows += [[level, 0], [0, level]]
        return TorsionSubgroup.from_rows(level, rows)

    @staticmethod
    def trivial(level: int) -> TorsionSubgroup:
        return TorsionSubgroup(level, ((level, 0), (0, level)))

    @staticmethod
    def full(level: int) -> TorsionSubgroup:
        return TorsionSubgroup(level, ((1, 0), (0, 1)))

    @property
    def order(self) -> int:
        (a, _), (_, d) = self.basis
        q, r = divmod(self.level * self.level, a * d)
        assert r == 0
        return q

    def _check_level(self, other: TorsionSubgroup) -> None:
        if self.level != other.level:
            raise LevelMismatchError(
                f"subgroup levels differ: {self.level} != {other.level}"
            )

    def __add__(self, other: TorsionSubgroup) -> TorsionSubgroup:
        self._check_level(other)
        return TorsionSubgroup.from_rows(self.level, list(self.basis) + list(other.basis))

    def __and__(self, other: TorsionSubgroup) -> TorsionSubgroup:
        self._check_level(other)
        return TorsionSubgroup(self.level, _lattice_intersect_2x2(self.basis, other.basis))

    def contains(self, other: TorsionSubgroup) -> bool:
        self._check_level(other)
        return (self + other) == self

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def to_json(self) -> dict:
        return {"level": self.level, "basis": [list(r) for r in self.basis]}

    @staticmethod
    def from_json(data: Mapping) -> TorsionSubgroup:
        return TorsionSubgroup.from_rows(int(data["level"]), data["basis"])


def count_subgroups(n: int) -> int:
    """Number of subgroups of (Z/n)^2: sum over divisor pairs of gcd terms."""
    total = 0
    for a in divisors(n):
        for d in divisors(n):
            total += gcd(d, n // a)
    return total


def divisors(n: int) -> list[int]:
    out = []
    for i in range(1, isqrt(n) + 1):
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
    out.sort()
    return out


def perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n
