"""Binary quadratic forms, class groups, square-class cosets, and prime
splitting for imaginary quadratic fields of fundamental discriminant.

A form (a, b, c) is positive definite (a > 0, b^2 - 4ac < 0) and represents
the ideal class of a*Z + ((-b + sqrt(d))/2)*Z.  Reduced means |b| <= a <= c
with b >= 0 whenever |b| = a or a = c.  Only maximal orders are supported:
non-fundamental discriminants are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _backend
from .arith import _factor_int, is_prime
from .errors import DiscriminantError

kronecker = _backend.kronecker


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a <= 0 or self.disc >= 0:
            raise DiscriminantError("form is not positive definite")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not -a < b <= a <= c:
            return False
        return b >= 0 or (a != b and a != c)

    def inverse(self) -> QuadForm:
        return reduce_form(QuadForm(self.a, -self.b, self.c))

    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def reduce_form(f: QuadForm) -> QuadForm:
    return QuadForm(*_backend.reduce_triple(f.a, f.b, f.c))


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    if f.disc != g.disc:
        raise DiscriminantError("cannot compose forms of different discriminants")
    if not f.is_reduced:
        f = reduce_form(f)
    if not g.is_reduced:
        g = reduce_form(g)
    return QuadForm(*_backend.compose_triples(f.a, f.b, f.c, g.a, g.b, g.c))


def form_power(f: QuadForm, k: int) -> QuadForm:
    if k < 0:
        return form_power(f.inverse(), -k)
    out = principal_form(f.disc)
    base = reduce_form(f)
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def principal_form(d: int) -> QuadForm:
    _check_discriminant(d)
    if d % 4 == 0:
        return QuadForm(1, 0, -d // 4)
    return QuadForm(1, 1, (1 - d) // 4)


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in _factor_int(n))


def is_fundamental_discriminant(d: int) -> bool:
    if d >= 0 or d % 4 not in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    m = d // 4
    return m % 4 in (2, 3) and _squarefree(-m)


def _check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise DiscriminantError(f"{d} is not a negative quadratic discriminant")
    if not is_fundamental_discriminant(d):
        raise DiscriminantError(f"discriminant {d}: non-maximal order unsupported")


@dataclass(frozen=True)
class ClassGroup:
    """Form class group of a fundamental discriminant, elements sorted by (a, b)."""

    disc: int
    elements: tuple[QuadForm, ...]

    @property
    def h(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> QuadForm:
        return principal_form(self.disc)

    def compose(self, f: QuadForm, g: QuadForm) -> QuadForm:
        return compose(f, g)


@lru_cache(maxsize=None)
def class_group(d: int) -> ClassGroup:
    _check_discriminant(d)
    forms = tuple(QuadForm(*t) for t in _backend.reduced_forms_disc(d))
    return ClassGroup(d, forms)


@dataclass(frozen=True)
class SquareClasses:
    """The subgroup of squares and canonical coset representatives of C/C^2.

    Each coset representative is the (a, b)-least reduced form in its coset;
    the identity coset is always represented by the principal form.
    """

    disc: int
    squares: tuple[QuadForm, ...]
    coset_reps: tuple[QuadForm, ...]

    @property
    def index(self) -> int:
        return len(self.coset_reps)

    def rep(self, f: QuadForm) -> QuadForm:
        """Canonical representative of f * C^2."""
        if not f.is_reduced:
            f = reduce_form(f)
        return min(compose(f, s) for s in self.squares)


@lru_cache(maxsize=None)
def square_classes(d: int) -> SquareClasses:
    group = class_group(d)
    squares = sorted({compose(f, f) for f in group.elements})
    seen: set[QuadForm] = set()
    reps = []
    for f in group.elements:  # (a, b)-ascending, so the first hit is the least
        if f in seen:
            continue
        coset = {compose(f, s) for s in squares}
        seen |= coset
        reps.append(min(coset))
    return SquareClasses(d, tuple(squares), tuple(sorted(reps)))


@dataclass(frozen=True)
class PrimeClass:
    """Splitting of a rational prime: inert, ramified, or split, with the
    reduced form of a prime ideal above it in the non-inert cases."""

    kind: str
    form: QuadForm | None

    @property
    def is_inert(self) -> bool:
        return self.kind == "inert"


def _mod_sqrt(a: int, p: int) -> int:
    """Square root mod an odd prime; a must be a residue."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def prime_class(ell: int, d: int) -> PrimeClass:
    """Class of a prime ideal above ell in the maximal order of disc d."""
    _check_discriminant(d)
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    symbol = kronecker(d, ell)
    if symbol == -1:
        return PrimeClass("inert", None)
    kind = "ramified" if symbol == 0 else "split"
    if ell == 2:
        if d % 8 == 1:
            b = 1
        elif d % 16 == 8:
            b = 0
        else:  # d == 12 (mod 16)
            b = 2
    else:
        b = _mod_sqrt(d, ell)
        if (b - d) % 2 != 0:
            b += ell
    c, rem = divmod(b * b - d, 4 * ell)
    assert rem == 0
    return PrimeClass(kind, reduce_form(QuadForm(ell, b, c)))
