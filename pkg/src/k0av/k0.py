"""Formal K0 classes and constructive certificates that equal-degree
quotients agree.

A class is a pair (multiplicity, degree class).  Addition is componentwise,
duality inverts the degree class and fixes the multiplicity.

Derivations prove [E/C1] = [E/C2] for equal-order subgroups C1, C2 using only
quotient relations: for subgroups D1, D2 of some quotient B with trivial
intersection,

    [B] + [B/(D1+D2)] = [B/D1] + [B/D2].

Everything is modelled on a rank-2 lattice: the base object is Z^2, a
quotient is a lattice L with Z^2 <= L and [L : Z^2] finite, and a subgroup of
the quotient at L is a finite-index overlattice.  A derivation is a signed
list of quotient relations whose formal sum telescopes to [L1] - [L2].

Certificate format (JSON, stable, tag "k0-derivation/1"):

    {"format": "k0-derivation/1", "level": n, "degree": m,
     "c1": LAT, "c2": LAT,
     "steps": [{"sign": +1|-1, "base": LAT, "sub1": LAT, "sub2": LAT,
                "sum": LAT, "orders": [o1, o2]}, ...]}

where LAT = {"den": d, "basis": [[a, b], [0, c]]} encodes the lattice spanned
by the basis rows divided by d.  Validation recomputes every containment,
intersection, join, order, and the telescoping sum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Mapping, Sequence

from .arith import (
    FactoredRational,
    TorsionSubgroup,
    _hnf2,
    _lattice_intersect_2x2,
    divisors,
    is_prime,
)
from .contexts import CharPEndZ, DegreeClass, IsogenyContext, Supersingular
from .errors import ContextMismatchError, DerivationError, LevelMismatchError
from .kernels import KernelMultiset, kernel_class


@dataclass(frozen=True)
class K0Element:
    """Class in the Grothendieck group: multiplicity plus degree class."""

    n: int
    deg: DegreeClass

    def __add__(self, other: K0Element) -> K0Element:
        return K0Element(self.n + other.n, self.deg * other.deg)

    def __neg__(self) -> K0Element:
        return K0Element(-self.n, self.deg.inverse())

    def __sub__(self, other: K0Element) -> K0Element:
        return self + (-other)

    def scale(self, k: int) -> K0Element:
        return K0Element(self.n * k, self.deg**k)

    def dual(self) -> K0Element:
        """Class of the dual object: same multiplicity, inverted degree."""
        return K0Element(self.n, self.deg.inverse())

    @property
    def is_zero(self) -> bool:
        return self.n == 0 and self.deg.is_identity

    def describe(self) -> str:
        return f"({self.n}, {self.deg.describe()})"

    def to_json(self) -> dict:
        return {"n": self.n, "degree_class": self.deg.to_json()}


def k0_class(
    ctx: IsogenyContext, n: int, degree: FactoredRational | Fraction | int | KernelMultiset
) -> K0Element:
    """Class of n copies of an object at isogeny distance `degree` from the
    base object.  Kernel multisets are accepted in characteristic p."""
    if isinstance(degree, KernelMultiset):
        if isinstance(ctx, Supersingular):
            return K0Element(n, ctx.identity())
        if isinstance(ctx, CharPEndZ):
            return K0Element(n, kernel_class(ctx, degree))
        raise ContextMismatchError("kernel input requires a characteristic-p context")
    return K0Element(n, ctx.degree_class(degree))


@dataclass(frozen=True)
class FracLattice:
    """Lattice span(basis)/den with Z^2 <= L; canonical (gcd-reduced Hermite)."""

    den: int
    basis: tuple[tuple[int, int], tuple[int, int]]

    @staticmethod
    def make(den: int, rows: Sequence[Sequence[int]]) -> FracLattice:
        if den < 1:
            raise DerivationError("lattice denominator must be positive")
        h = _hnf2(rows)
        g = gcd(den, gcd(gcd(h[0][0], h[0][1]), h[1][1]))
        return FracLattice(den // g, ((h[0][0] // g, h[0][1] // g), (0, h[1][1] // g)))

    @staticmethod
    def unit() -> FracLattice:
        return FracLattice(1, ((1, 0), (0, 1)))

    @staticmethod
    def from_subgroup(c: TorsionSubgroup) -> FracLattice:
        return FracLattice.make(c.level, c.basis)

    @property
    def vol(self) -> Fraction:
        return Fraction(self.basis[0][0] * self.basis[1][1], self.den * self.den)

    def _scaled_rows(self, new_den: int) -> list[list[int]]:
        k, r = divmod(new_den, self.den)
        assert r == 0
        return [[x * k for x in row] for row in self.basis]

    def contains(self, other: FracLattice) -> bool:
        d = lcm(self.den, other.den)
        mine = self._scaled_rows(d)
        det = mine[0][0] * mine[1][1]
        for vec in other._scaled_rows(d):
            # vec = u @ mine requires adj-divisibility
            u0 = vec[0] * mine[1][1]
            u1 = -vec[0] * mine[0][1] + vec[1] * mine[0][0]
            if u0 % det or u1 % det:
                return False
        return True

    def index_over(self, base: FracLattice) -> int:
        """[self : base] for base <= self."""
        q = base.vol / self.vol
        if q.denominator != 1 or not self.contains(base):
            raise DerivationError("index requested over a non-sublattice")
        return int(q)

    def __add__(self, other: FracLattice) -> FracLattice:
        d = lcm(self.den, other.den)
        return FracLattice.make(d, self._scaled_rows(d) + other._scaled_rows(d))

    def __and__(self, other: FracLattice) -> FracLattice:
        d = lcm(self.den, other.den)
        rows = _lattice_intersect_2x2(self._scaled_rows(d), other._scaled_rows(d))
        return FracLattice.make(d, rows)

    def extended_by(self, vec: Sequence[int], vec_den: int) -> FracLattice:
        """Lattice generated by self and vec/vec_den."""
        d = lcm(self.den, vec_den)
        k = d // vec_den
        return FracLattice.make(d, self._scaled_rows(d) + [[vec[0] * k, vec[1] * k]])

    def member(self, vec: Sequence[int], vec_den: int) -> bool:
        d = lcm(self.den, vec_den)
        mine = self._scaled_rows(d)
        det = mine[0][0] * mine[1][1]
        k = d // vec_den
        v0, v1 = vec[0] * k, vec[1] * k
        u0 = v0 * mine[1][1]
        u1 = -v0 * mine[0][1] + v1 * mine[0][0]
        return u0 % det == 0 and u1 % det == 0

    def to_json(self) -> dict:
        return {"den": self.den, "basis": [list(r) for r in self.basis]}

    @staticmethod
    def from_json(data: Mapping) -> FracLattice:
        try:
            den = int(data["den"])
            rows = [[int(x) for x in row] for row in data["basis"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DerivationError(f"malformed lattice: {exc}") from exc
        return FracLattice.make(den, rows)


@dataclass(frozen=True)
class QuotientRelation:
    """[base] + [sum] = [sub1] + [sub2] for subgroups with trivial intersection."""

    base: FracLattice
    sub1: FracLattice
    sub2: FracLattice
    joint: FracLattice

    @staticmethod
    def build(base: FracLattice, sub1: FracLattice, sub2: FracLattice) -> QuotientRelation:
        if not (sub1.contains(base) and sub2.contains(base)):
            raise DerivationError("relation subgroups must contain the base lattice")
        if (sub1 & sub2) != base:
            raise DerivationError("subgroups intersect nontrivially")
        return QuotientRelation(base, sub1, sub2, sub1 + sub2)

    def vector(self) -> Counter:
        v: Counter = Counter()
        v[self.base] += 1
        v[self.joint] += 1
        v[self.sub1] -= 1
        v[self.sub2] -= 1
        return Counter({lat: mult for lat, mult in v.items() if mult})

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "sub1": self.sub1.to_json(),
            "sub2": self.sub2.to_json(),
            "sum": self.joint.to_json(),
            "orders": [self.sub1.index_over(self.base), self.sub2.index_over(self.base)],
        }


def quotient_relation(level: int, c1: TorsionSubgroup, c2: TorsionSubgroup) -> QuotientRelation:
    """Relation for two level-`level` subgroups of the base object itself."""
    if c1.level != level or c2.level != level:
        raise LevelMismatchError("subgroup levels differ from the requested level")
    return QuotientRelation.build(
        FracLattice.unit(), FracLattice.from_subgroup(c1), FracLattice.from_subgroup(c2)
    )


@dataclass(frozen=True)
class Derivation:
    """Signed quotient relations telescoping to [L1] - [L2] = 0."""

    level: int
    c1: FracLattice
    c2: FracLattice
    steps: tuple[tuple[int, QuotientRelation], ...]

    @property
    def degree(self) -> int:
        return self.c1.index_over(FracLattice.unit())

    def to_json(self) -> dict:
        return {
            "format": "k0-derivation/1",
            "level": self.level,
            "degree": self.degree,
            "c1": self.c1.to_json(),
            "c2": self.c2.to_json(),
            "steps": [dict(sign=s, **rel.to_json()) for s, rel in self.steps],
        }

    @staticmethod
    def from_json(data: Mapping) -> Derivation:
        if not isinstance(data, Mapping) or data.get("format") != "k0-derivation/1":
            raise DerivationError("not a k0-derivation/1 certificate")
        try:
            level = int(data["level"])
            c1 = FracLattice.from_json(data["c1"])
            c2 = FracLattice.from_json(data["c2"])
            raw_steps = data["steps"]
            steps = []
            for entry in raw_steps:
                sign = int(entry["sign"])
                rel = QuotientRelation(
                    FracLattice.from_json(entry["base"]),
                    FracLattice.from_json(entry["sub1"]),
                    FracLattice.from_json(entry["sub2"]),
                    FracLattice.from_json(entry["sum"]),
                )
                steps.append((sign, rel))
        except (KeyError, TypeError, ValueError) as exc:
            raise DerivationError(f"malformed certificate: {exc}") from exc
        return Derivation(level, c1, c2, tuple(steps))


@dataclass(frozen=True)
class DerivationCheck:
    ok: bool
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_derivation(d: Derivation) -> DerivationCheck:
    """Recompute every step and the telescoping sum; collect all failures."""
    failures: list[str] = []
    for i, (sign, rel) in enumerate(d.steps):
        if sign not in (1, -1):
            failures.append(f"step {i}: sign {sign} is not +1/-1")
        for name, sub in (("sub1", rel.sub1), ("sub2", rel.sub2)):
            if not sub.contains(rel.base):
                failures.append(f"step {i}: {name} does not contain the base lattice")
        try:
            if (rel.sub1 & rel.sub2) != rel.base:
                failures.append(f"step {i}: subgroups intersect nontrivially")
            if rel.sub1 + rel.sub2 != rel.joint:
                failures.append(f"step {i}: stored sum lattice is wrong")
        except DerivationError as exc:
            failures.append(f"step {i}: {exc}")
    goal: Counter = Counter()
    if d.c1 != d.c2:
        goal[d.c1] += 1
        goal[d.c2] -= 1
    total: Counter = Counter()
    for sign, rel in d.steps:
        for lat, mult in rel.vector().items():
            total[lat] += sign * mult
    total = Counter({k: v for k, v in total.items() if v})
    if total != goal:
        failures.append("steps do not telescope to [c1] - [c2]")
    try:
        if d.c1.vol != d.c2.vol:
            failures.append("goal subgroups have different orders")
    except DerivationError as exc:
        failures.append(str(exc))
    return DerivationCheck(not failures, tuple(failures))


def _index_subgroups(base: FracLattice, m: int) -> Iterator[FracLattice]:
    """All index-m overlattices of base, lexicographic in the HNF triple."""
    r1, r2 = base.basis
    for x in divisors(m):
        z = m // x
        for b in range(z):
            rows = [
                [x * r1[0] + b * r2[0], x * r1[1] + b * r2[1]],
                [z * r2[0], z * r2[1]],
            ]
            yield FracLattice.make(base.den * m, rows)


def _point_lattice(base: FracLattice, sub: FracLattice, ell: int) -> FracLattice:
    """base extended by a point of order ell of the subgroup sub/base
    (first suitable Hermite basis vector; deterministic)."""
    ell_torsion = FracLattice.make(base.den * ell, base.basis)  # (1/ell) * base
    tor = sub & ell_torsion
    for row in tor.basis:
        if not base.member(row, tor.den):
            return base.extended_by(row, tor.den)
    raise DerivationError(f"subgroup has no point of order {ell}")


def _smallest_prime_factor(m: int) -> int:
    if m % 2 == 0:
        return 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return f
        f += 2
    return m


def _derive(base: FracLattice, l1: FracLattice, l2: FracLattice, m: int):
    if l1 == l2:
        return []
    if is_prime(m):
        third = None
        for cand in _index_subgroups(base, m):
            if cand != l1 and cand != l2:
                third = cand
                break
        assert third is not None  # m + 1 >= 3 candidates
        return [
            (-1, QuotientRelation.build(base, l1, third)),
            (1, QuotientRelation.build(base, l2, third)),
        ]
    ell1 = _smallest_prime_factor(m)
    rest = m
    while rest % ell1 == 0:
        rest //= ell1
    ell2 = ell1 if rest == 1 else _smallest_prime_factor(rest)
    p1 = _point_lattice(base, l1, ell1)
    p2 = _point_lattice(base, l2, ell2)
    span = p1 + p2
    middle = None
    for cand in _index_subgroups(base, m):
        if cand.contains(span):
            middle = cand
            break
    if middle is None:
        raise DerivationError(
            f"no index-{m} subgroup over the base contains the selected points"
        )
    return _derive(p1, l1, middle, m // ell1) + _derive(p2, middle, l2, m // ell2)


def derive_same_degree(n: int, c1: TorsionSubgroup, c2: TorsionSubgroup) -> Derivation:
    """Certificate that the quotients by two order-n subgroups agree in K0.

    The subgroups must have equal level and order n.  The construction walks
    shared prime-order points through intermediate quotients, so the result
    validates by recomputation alone.
    """
    if c1.level != c2.level:
        raise LevelMismatchError("subgroup levels differ")
    if c1.order != c2.order:
        raise DerivationError(f"subgroup orders differ: {c1.order} != {c2.order}")
    if c1.order != n:
        raise DerivationError(f"claimed degree {n} != subgroup order {c1.order}")
    lat1 = FracLattice.from_subgroup(c1)
    lat2 = FracLattice.from_subgroup(c2)
    steps = tuple(_derive(FracLattice.unit(), lat1, lat2, n))
    derivation = Derivation(c1.level, lat1, lat2, steps)
    check = validate_derivation(derivation)
    if not check:
        raise DerivationError("internal: derivation failed validation: " + "; ".join(check.failures))
    return derivation
