"""Isogeny contexts and canonical degree classes.

A context fixes an isotypic isogeny category by its endomorphism data and
exposes the abelian group where isogeny degrees live once global squares
(more generally, degrees of self-isogenies) are quotiented out:

  * EndZ(g):        integer endomorphisms in dimension g; a degree q maps to
                    its prime exponents mod 2g, so the group is Z/2g per prime.
  * CM(disc):       elliptic with CM by the maximal order of a fundamental
                    discriminant; degrees map to (class-group coset mod
                    squares, parity of inert-prime exponents).
  * Supersingular(p): characteristic p, quaternionic endomorphisms; every
                    degree class is trivial.
  * OrdinaryCM(disc, p): ordinary reduction at a split prime p; same value
                    group as CM(disc), p allowed in degrees.
  * CharPEndZ(p):   characteristic p with integer endomorphisms; classes are
                    (etale-minus-multiplicative p-degree, odd prime square
                    classes away from p).  Degrees divisible by p carry kernel
                    data, so rational input must be prime to p.

Contexts are immutable; class-group data is computed once per context and
cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Mapping

from .arith import FactoredRational, is_prime
from .errors import ContextError, ContextMismatchError, KernelInputError
from .quadforms import (
    ClassGroup,
    QuadForm,
    SquareClasses,
    class_group,
    compose,
    form_power,
    kronecker,
    prime_class,
    principal_form,
    square_classes,
)

DegreeLike = FactoredRational | Fraction | int


@dataclass(frozen=True)
class StructureFactor:
    modulus: int
    count: int | None  # None: one factor per prime in an infinite family
    label: str

    def describe(self) -> str:
        if self.count is None:
            return f"Z/{self.modulus} {self.label}"
        if self.count == 1:
            return f"Z/{self.modulus} ({self.label})"
        return f"(Z/{self.modulus})^{self.count} ({self.label})"


@dataclass(frozen=True)
class GroupStructure:
    free_rank: int
    factors: tuple[StructureFactor, ...]
    note: str | None = None

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f.describe() for f in self.factors]
        text = " (+) ".join(parts) if parts else "trivial"
        if self.note:
            text += f" [{self.note}]"
        return text

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "factors": [
                {"modulus": f.modulus, "count": f.count, "label": f.label}
                for f in self.factors
            ],
            "note": self.note,
            "description": self.describe(),
        }


@dataclass(frozen=True)
class DegreeClass:
    """Canonical representative of an isogeny degree in a context's group."""

    ctx: IsogenyContext
    data: tuple

    def __mul__(self, other: DegreeClass) -> DegreeClass:
        if self.ctx != other.ctx:
            raise ContextMismatchError("degree classes from different contexts")
        return DegreeClass(self.ctx, self.ctx._mul(self.data, other.data))

    def inverse(self) -> DegreeClass:
        return DegreeClass(self.ctx, self.ctx._inv(self.data))

    def __pow__(self, k: int) -> DegreeClass:
        out = self.ctx.identity()
        base = self.inverse() if k < 0 else self
        e = abs(k)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    @property
    def is_identity(self) -> bool:
        return self.data == self.ctx._identity_data()

    def order(self) -> int | None:
        """Order in the class group; None when infinite."""
        return self.ctx._class_order(self.data)

    def describe(self) -> str:
        return self.ctx._describe_class(self.data)

    def to_json(self) -> dict:
        return self.ctx._class_json(self.data)


class IsogenyContext:
    """Shared surface of the five context kinds."""

    case: str

    def identity(self) -> DegreeClass:
        return DegreeClass(self, self._identity_data())

    def degree_class(self, q: DegreeLike) -> DegreeClass:
        """Canonical class of a positive rational isogeny degree."""
        return DegreeClass(self, self._degree_data(FactoredRational.from_fraction(q)))

    def structure(self) -> GroupStructure:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # Kind-specific canonical-form plumbing.
    def _identity_data(self) -> tuple:
        raise NotImplementedError

    def _degree_data(self, q: FactoredRational) -> tuple:
        raise NotImplementedError

    def _mul(self, x: tuple, y: tuple) -> tuple:
        raise NotImplementedError

    def _inv(self, x: tuple) -> tuple:
        raise NotImplementedError

    def _class_order(self, x: tuple) -> int | None:
        raise NotImplementedError

    def _describe_class(self, x: tuple) -> str:
        raise NotImplementedError

    def _class_json(self, x: tuple) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class EndZ(IsogenyContext):
    """Dimension-g isotypic category with endomorphism ring Z."""

    g: int

    case = "end_z"

    def __post_init__(self) -> None:
        if self.g < 1:
            raise ContextError("dimension must be a positive integer")

    @property
    def modulus(self) -> int:
        return 2 * self.g

    def _identity_data(self) -> tuple:
        return ()

    def _degree_data(self, q: FactoredRational) -> tuple:
        m = self.modulus
        return tuple((p, e % m) for p, e in q.exps if e % m)

    def _mul(self, x: tuple, y: tuple) -> tuple:
        m = self.modulus
        acc = dict(x)
        for p, e in y:
            acc[p] = (acc.get(p, 0) + e) % m
        return tuple(sorted((p, e) for p, e in acc.items() if e))

    def _inv(self, x: tuple) -> tuple:
        m = self.modulus
        return tuple((p, (-e) % m) for p, e in x)

    def _class_order(self, x: tuple) -> int:
        m = self.modulus
        order = 1
        for _, e in x:
            k = m // gcd(e, m)
            order = order * k // gcd(order, k)
        return order

    def _describe_class(self, x: tuple) -> str:
        if not x:
            return "identity"
        body = " * ".join(f"{p}^{e}" for p, e in x)
        return f"exponents mod {self.modulus}: {body}"

    def _class_json(self, x: tuple) -> dict:
        return {"case": self.case, "modulus": self.modulus, "exponents": [list(t) for t in x]}

    def structure(self) -> GroupStructure:
        return GroupStructure(0, (StructureFactor(self.modulus, None, "per prime"),))

    def describe(self) -> str:
        return f"dimension {self.g}, integer endomorphisms, characteristic 0"

    def to_json(self) -> dict:
        return {"case": self.case, "g": self.g}


class _WithClassGroup(IsogenyContext):
    """Mixin for contexts whose value group involves a class group."""

    disc: int

    @cached_property
    def class_group(self) -> ClassGroup:
        return class_group(self.disc)

    @cached_property
    def square_classes(self) -> SquareClasses:
        return square_classes(self.disc)

    def is_norm(self, q: DegreeLike) -> bool:
        """Whether q is a norm from the CM field (i.e. a trivial degree class)."""
        return self.degree_class(q).is_identity

    def _identity_data(self) -> tuple:
        return (principal_form(self.disc), ())

    def _degree_data(self, q: FactoredRational) -> tuple:
        rep = principal_form(self.disc)
        inert: set[int] = set()
        for p, e in q.exps:
            pc = prime_class(p, self.disc)
            if pc.is_inert:
                if e % 2:
                    inert ^= {p}
            else:
                rep = compose(rep, form_power(pc.form, e))
        return (self.square_classes.rep(rep), tuple(sorted(inert)))

    def _mul(self, x: tuple, y: tuple) -> tuple:
        rep = self.square_classes.rep(compose(x[0], y[0]))
        inert = tuple(sorted(set(x[1]) ^ set(y[1])))
        return (rep, inert)

    def _inv(self, x: tuple) -> tuple:
        return (self.square_classes.rep(x[0].inverse()), x[1])

    def _class_order(self, x: tuple) -> int:
        return 1 if x == self._identity_data() else 2

    def _describe_class(self, x: tuple) -> str:
        rep, inert = x
        if x == self._identity_data():
            return "identity"
        parts = [f"coset {rep}"]
        if inert:
            parts.append("odd inert exponents at " + ", ".join(map(str, inert)))
        return "; ".join(parts)

    def _class_json(self, x: tuple) -> dict:
        rep, inert = x
        return {
            "case": self.case,
            "coset_rep": list(rep.triple()),
            "inert_odd": list(inert),
        }

    def structure(self) -> GroupStructure:
        t = self.square_classes.index.bit_length() - 1
        factors = []
        if t > 0:
            factors.append(StructureFactor(2, t, "class group mod squares"))
        factors.append(StructureFactor(2, None, "per inert prime"))
        return GroupStructure(0, tuple(factors))


@dataclass(frozen=True)
class CM(_WithClassGroup):
    """Elliptic curve with CM by the maximal order of disc < 0, char 0."""

    disc: int

    case = "cm"

    def __post_init__(self) -> None:
        class_group(self.disc)  # validates fundamental disc, warms the cache

    def describe(self) -> str:
        return f"elliptic, CM by the maximal order of discriminant {self.disc}, characteristic 0"

    def to_json(self) -> dict:
        return {"case": self.case, "disc": self.disc}


@dataclass(frozen=True)
class OrdinaryCM(_WithClassGroup):
    """Ordinary elliptic curve over F_p-bar with CM lift of disc; p splits."""

    disc: int
    p: int

    case = "ordinary_cm"

    def __post_init__(self) -> None:
        class_group(self.disc)
        if not is_prime(self.p):
            raise ContextError(f"{self.p} is not prime")
        if kronecker(self.disc, self.p) != 1:
            raise ContextError(
                f"prime {self.p} does not split in discriminant {self.disc}; "
                "not an ordinary reduction"
            )

    def describe(self) -> str:
        return (
            f"elliptic, ordinary, characteristic {self.p}, "
            f"CM by the maximal order of discriminant {self.disc}"
        )

    def to_json(self) -> dict:
        return {"case": self.case, "disc": self.disc, "p": self.p}


@dataclass(frozen=True)
class Supersingular(IsogenyContext):
    """Supersingular elliptic curve over F_p-bar; the class group vanishes."""

    p: int

    case = "supersingular"

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ContextError(f"{self.p} is not prime")

    def _identity_data(self) -> tuple:
        return ()

    def _degree_data(self, q: FactoredRational) -> tuple:
        return ()

    def _mul(self, x: tuple, y: tuple) -> tuple:
        return ()

    def _inv(self, x: tuple) -> tuple:
        return ()

    def _class_order(self, x: tuple) -> int:
        return 1

    def _describe_class(self, x: tuple) -> str:
        return "identity (trivial group)"

    def _class_json(self, x: tuple) -> dict:
        return {"case": self.case}

    def structure(self) -> GroupStructure:
        return GroupStructure(0, ())

    def describe(self) -> str:
        return f"elliptic, supersingular, characteristic {self.p}"

    def to_json(self) -> dict:
        return {"case": self.case, "p": self.p}


@dataclass(frozen=True)
class CharPEndZ(IsogenyContext):
    """Ordinary elliptic curve over F_p-bar taken with only integer
    endomorphisms; classes track the etale-minus-multiplicative p-degree and
    odd square classes away from p."""

    p: int

    case = "char_p_end_z"

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ContextError(f"{self.p} is not prime")

    def _identity_data(self) -> tuple:
        return (0, ())

    def _degree_data(self, q: FactoredRational) -> tuple:
        if q.exponent(self.p) != 0:
            raise KernelInputError("use kernel input for p-part")
        return (0, tuple(p for p, e in q.exps if e % 2))

    def kernel_data(self, p_degree: int, coprime: FactoredRational) -> tuple:
        """Canonical data for a kernel with the given p-degree and prime-to-p
        order; used by the kernel-class constructor."""
        if coprime.exponent(self.p) != 0:
            raise KernelInputError("coprime part of a kernel cannot involve p")
        return (p_degree, tuple(p for p, e in coprime.exps if e % 2))

    def _mul(self, x: tuple, y: tuple) -> tuple:
        return (x[0] + y[0], tuple(sorted(set(x[1]) ^ set(y[1]))))

    def _inv(self, x: tuple) -> tuple:
        return (-x[0], x[1])

    def _class_order(self, x: tuple) -> int | None:
        if x[0] != 0:
            return None
        return 2 if x[1] else 1

    def _describe_class(self, x: tuple) -> str:
        a, primes = x
        if x == self._identity_data():
            return "identity"
        parts = [f"p-degree {a}"]
        if primes:
            parts.append("odd exponents at " + ", ".join(map(str, primes)))
        return "; ".join(parts)

    def _class_json(self, x: tuple) -> dict:
        return {
            "case": self.case,
            "p": self.p,
            "p_degree": x[0],
            "odd_primes": list(x[1]),
        }

    def structure(self) -> GroupStructure:
        return GroupStructure(
            1,
            (StructureFactor(2, None, f"per prime != {self.p}"),),
            note="index 2 in Z (+) positive rationals mod squares",
        )

    def describe(self) -> str:
        return f"elliptic, ordinary, characteristic {self.p}, integer endomorphisms"

    def to_json(self) -> dict:
        return {"case": self.case, "p": self.p}


_CASE_FIELDS = {
    "end_z": ("g",),
    "cm": ("disc",),
    "supersingular": ("p",),
    "ordinary_cm": ("disc", "p"),
    "char_p_end_z": ("p",),
}


def make_context(spec: Mapping) -> IsogenyContext:
    """Build a context from a flat mapping with a `case` field.

    Unknown cases and unknown or missing fields are rejected; only the five
    supported endomorphism types exist (general number-field centers are out
    of scope).
    """
    if "case" not in spec:
        raise ContextError("missing field: case")
    case = spec["case"]
    if case not in _CASE_FIELDS:
        raise ContextError(
            f"unknown case {case!r}: supported cases are {sorted(_CASE_FIELDS)} "
            "(other endomorphism centers are unsupported)"
        )
    fields = _CASE_FIELDS[case]
    extra = set(spec) - {"case", *fields}
    if extra:
        raise ContextError(f"unknown fields for case {case!r}: {sorted(extra)}")
    values = {}
    for name in fields:
        if name not in spec:
            raise ContextError(f"missing field for case {case!r}: {name}")
        value = spec[name]
        if not isinstance(value, int) or isinstance(value, bool):
            raise ContextError(f"field {name} must be an integer")
        values[name] = value
    cls = {
        "end_z": EndZ,
        "cm": CM,
        "supersingular": Supersingular,
        "ordinary_cm": OrdinaryCM,
        "char_p_end_z": CharPEndZ,
    }[case]
    return cls(**values)
