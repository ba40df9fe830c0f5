"""Grothendieck-group classes, quotient relations, and derivation certificates."""

import json
import random
from fractions import Fraction

import pytest

from k0av.arith import TorsionSubgroup
from k0av.contexts import CM, CharPEndZ, EndZ, Supersingular
from k0av.errors import ContextMismatchError, DerivationError, LevelMismatchError
from k0av.k0 import (
    Derivation,
    FracLattice,
    K0Element,
    QuotientRelation,
    derive_same_degree,
    k0_class,
    quotient_relation,
    validate_derivation,
)
from k0av.kernels import KernelMultiset


def sub(level, *gens):
    return TorsionSubgroup.from_generators(level, gens)


# ---------------------------------------------------------------- K0 classes


def test_element_algebra_frozen():
    ctx = EndZ(2)
    x = k0_class(ctx, 1, 3)
    assert x.n == 1 and x.deg == ctx.degree_class(3)
    assert x.dual() != x
    assert x + x.dual() == K0Element(2, ctx.identity())
    assert (x - x).is_zero
    assert x.scale(4) == K0Element(4, ctx.identity())
    assert x.describe() == "(1, exponents mod 4: 3^1)"
    assert x.to_json() == {
        "n": 1,
        "degree_class": {"case": "end_z", "modulus": 4, "exponents": [[3, 1]]},
    }


def test_element_self_dual_in_two_torsion_contexts():
    x = k0_class(CM(-20), 1, 3)
    assert x.dual() == x
    assert x + x.dual() == K0Element(2, CM(-20).identity())


def test_k0_class_kernel_dispatch():
    k = KernelMultiset(5, mu_p=1)
    assert k0_class(Supersingular(5), 1, k).deg.is_identity
    cls = k0_class(CharPEndZ(5), 1, k)
    assert cls.deg.data == (-1, ())
    with pytest.raises(ContextMismatchError, match="characteristic-p"):
        k0_class(EndZ(2), 1, k)


def test_decomposition_identity():
    # [A_(nm)] + [A] = [A_n] + [A_m]: distances multiply
    rng = random.Random(3)
    contexts = [EndZ(1), EndZ(2), CM(-20), CM(-23), Supersingular(7), CharPEndZ(5)]
    for ctx in contexts:
        for _ in range(100):
            n = rng.randint(1, 200)
            m = rng.randint(1, 200)
            if isinstance(ctx, CharPEndZ):
                while n % ctx.p == 0:
                    n = rng.randint(1, 200)
                while m % ctx.p == 0:
                    m = rng.randint(1, 200)
            lhs = k0_class(ctx, 1, n * m) + k0_class(ctx, 1, 1)
            rhs = k0_class(ctx, 1, n) + k0_class(ctx, 1, m)
            assert lhs == rhs


# ------------------------------------------------------------- FracLattice


def test_lattice_canonical_form():
    assert FracLattice.make(2, [[2, 0], [0, 2]]) == FracLattice.unit()
    assert FracLattice.make(4, [[2, 0], [0, 2]]) == FracLattice.make(2, [[1, 0], [0, 1]])
    lat = FracLattice.make(6, [[1, 0], [0, 1]])
    assert lat.den == 6 and lat.basis == ((1, 0), (0, 1))
    # rows get Hermite-reduced
    assert FracLattice.make(4, [[2, 3], [0, 2]]) == FracLattice.make(4, [[2, 1], [0, 2]])


def test_lattice_volume_and_index():
    unit = FracLattice.unit()
    assert unit.vol == 1
    half = FracLattice.make(2, [[1, 0], [0, 1]])
    assert half.vol == Fraction(1, 4)
    assert half.index_over(unit) == 4
    cyc = FracLattice.make(6, [[1, 0], [0, 6]])
    assert cyc.index_over(unit) == 6
    with pytest.raises(DerivationError, match="non-sublattice"):
        unit.index_over(half)


def test_lattice_contains_and_member():
    unit = FracLattice.unit()
    cyc = FracLattice.make(6, [[1, 0], [0, 6]])
    assert cyc.contains(unit)
    assert not unit.contains(cyc)
    assert cyc.member([1, 0], 6)
    assert not cyc.member([0, 1], 6)
    assert cyc.member([5, 3], 1)


def test_lattice_sum_intersect_extend():
    a = FracLattice.make(6, [[1, 0], [0, 6]])
    b = FracLattice.make(6, [[6, 0], [0, 1]])
    assert a + b == FracLattice.make(6, [[1, 0], [0, 1]])
    assert (a & b) == FracLattice.unit()
    assert FracLattice.unit().extended_by([1, 0], 6) == a
    # extending by a member changes nothing
    assert a.extended_by([1, 0], 6) == a


def test_lattice_matches_torsion_subgroup_ops():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.choice((2, 3, 4, 6, 12))
        c1 = sub(n, (rng.randrange(n), rng.randrange(n)), (rng.randrange(n), rng.randrange(n)))
        c2 = sub(n, (rng.randrange(n), rng.randrange(n)))
        l1, l2 = FracLattice.from_subgroup(c1), FracLattice.from_subgroup(c2)
        assert l1.index_over(FracLattice.unit()) == c1.order
        assert l1 + l2 == FracLattice.from_subgroup(c1 + c2)
        assert (l1 & l2) == FracLattice.from_subgroup(c1 & c2)
        assert l1.contains(l2) == ((c1 + c2) == c1)
        assert (l1 + l2).vol * (l1 & l2).vol == l1.vol * l2.vol


def test_lattice_json_round_trip():
    lat = FracLattice.make(12, [[2, 1], [0, 3]])
    assert FracLattice.from_json(lat.to_json()) == lat
    assert FracLattice.from_json(json.loads(json.dumps(lat.to_json()))) == lat
    with pytest.raises(DerivationError, match="malformed lattice"):
        FracLattice.from_json({"den": 2})
    with pytest.raises(DerivationError, match="denominator"):
        FracLattice.make(0, [[1, 0], [0, 1]])


# ------------------------------------------------------ quotient relations


def test_quotient_relation_basic():
    c1 = sub(6, (1, 0))
    c2 = sub(6, (0, 1))
    rel = quotient_relation(6, c1, c2)
    assert rel.base == FracLattice.unit()
    assert rel.to_json()["orders"] == [6, 6]
    assert rel.joint.index_over(rel.base) == 36
    vec = rel.vector()
    assert vec[rel.base] == 1 and vec[rel.joint] == 1
    assert vec[rel.sub1] == -1 and vec[rel.sub2] == -1


def test_quotient_relation_rejects():
    with pytest.raises(LevelMismatchError):
        quotient_relation(6, sub(6, (1, 0)), sub(4, (0, 1)))
    with pytest.raises(DerivationError, match="intersect nontrivially"):
        quotient_relation(4, sub(4, (1, 0)), sub(4, (1, 0), (0, 2)))
    # trivial subgroups are allowed and give a degenerate relation
    rel = quotient_relation(3, TorsionSubgroup.trivial(3), TorsionSubgroup.trivial(3))
    assert rel.vector() == {}


def test_quotient_relation_degree_balance():
    # indexes multiply: |joint/base| = |sub1/base| * |sub2/base|, so the
    # formal relation is degree-consistent in every context
    rng = random.Random(13)
    ctx = EndZ(2)
    for _ in range(100):
        n = rng.choice((2, 3, 4, 5, 6, 8, 9, 10, 12))
        groups = [
            TorsionSubgroup.from_rows(n, ((x, b), (0, n // x)))
            for x in (d for d in range(1, n + 1) if n % d == 0)
            for b in range(n // x)
        ]
        c1, c2 = rng.choice(groups), rng.choice(groups)
        l1, l2 = FracLattice.from_subgroup(c1), FracLattice.from_subgroup(c2)
        if (l1 & l2) != FracLattice.unit():
            continue
        rel = quotient_relation(n, c1, c2)
        o1, o2 = rel.to_json()["orders"]
        assert rel.joint.index_over(rel.base) == o1 * o2
        lhs = ctx.degree_class(1) * ctx.degree_class(o1 * o2)
        rhs = ctx.degree_class(o1) * ctx.degree_class(o2)
        assert lhs == rhs


# ------------------------------------------------------------- derivations


def test_derive_equal_subgroups_is_empty():
    c = sub(4, (1, 0))
    d = derive_same_degree(4, c, c)
    assert d.steps == ()
    assert validate_derivation(d)


def test_derive_prime_order():
    d = derive_same_degree(2, sub(2, (1, 0)), sub(2, (0, 1)))
    assert len(d.steps) == 2
    assert {s for s, _ in d.steps} == {-1, 1}
    assert validate_derivation(d)
    assert d.degree == 2


def test_derive_order_six_cyclics():
    c1 = sub(6, (1, 0))
    c2 = sub(6, (0, 1))
    d = derive_same_degree(6, c1, c2)
    check = validate_derivation(d)
    assert check.ok and check.failures == ()
    assert d.degree == 6
    assert d.level == 6
    # every step stays inside the order-36 window: volumes between 1/36 and 1
    for _, rel in d.steps:
        for lat in (rel.base, rel.sub1, rel.sub2, rel.joint):
            assert Fraction(1, 36) <= lat.vol <= 1


def all_subgroups_of_order(n):
    out = []
    for x in (d for d in range(1, n + 1) if n % d == 0):
        for b in range(n // x):
            out.append(TorsionSubgroup.from_rows(n, ((x, b), (0, n // x))))
    return out


def test_derive_exhaustive_small_orders():
    for n in range(2, 11):
        groups = all_subgroups_of_order(n)
        assert len(groups) == sum(n // x for x in range(1, n + 1) if n % x == 0)
        for c1 in groups:
            for c2 in groups:
                d = derive_same_degree(n, c1, c2)
                assert validate_derivation(d), (n, c1, c2)


def test_derive_rejects_mismatches():
    with pytest.raises(LevelMismatchError):
        derive_same_degree(2, sub(2, (1, 0)), sub(4, (0, 2)))
    with pytest.raises(DerivationError, match="orders differ"):
        derive_same_degree(2, sub(4, (1, 0)), sub(4, (2, 0)))
    with pytest.raises(DerivationError, match="claimed degree"):
        derive_same_degree(3, sub(4, (1, 0)), sub(4, (0, 1)))


def test_validate_rejects_corruption():
    d = derive_same_degree(6, sub(6, (1, 0)), sub(6, (0, 1)))
    payload = d.to_json()

    def reload(mutate):
        data = json.loads(json.dumps(payload))
        mutate(data)
        return validate_derivation(Derivation.from_json(data))

    assert reload(lambda data: None).ok

    def corrupt_basis(data):
        data["steps"][0]["sub1"]["basis"][0][0] *= 2

    def flip_sign(data):
        data["steps"][0]["sign"] *= -1

    def drop_step(data):
        del data["steps"][0]

    def move_goal(data):
        data["c1"] = {"den": 3, "basis": [[1, 0], [0, 3]]}

    def wrong_sum(data):
        data["steps"][0]["sum"] = data["steps"][0]["sub1"]

    for mutate in (corrupt_basis, flip_sign, drop_step, move_goal, wrong_sum):
        check = reload(mutate)
        assert not check.ok
        assert check.failures


def test_validate_empty_with_distinct_goals():
    d = Derivation(
        2,
        FracLattice.make(2, [[1, 0], [0, 2]]),
        FracLattice.make(2, [[2, 0], [0, 1]]),
        (),
    )
    check = validate_derivation(d)
    assert not check.ok
    assert any("telescope" in f for f in check.failures)


def test_validate_unequal_orders():
    d = Derivation(4, FracLattice.make(2, [[1, 0], [0, 2]]), FracLattice.unit(), ())
    check = validate_derivation(d)
    assert any("different orders" in f for f in check.failures)


def test_derivation_json_round_trip():
    d = derive_same_degree(12, sub(12, (1, 0)), sub(12, (0, 1)))
    data = json.loads(json.dumps(d.to_json()))
    assert data["format"] == "k0-derivation/1"
    assert data["degree"] == 12
    restored = Derivation.from_json(data)
    assert restored == d
    assert validate_derivation(restored)


def test_derivation_json_rejects_malformed():
    with pytest.raises(DerivationError, match="not a k0-derivation/1"):
        Derivation.from_json({"format": "k0-derivation/2", "level": 2})
    with pytest.raises(DerivationError, match="not a k0-derivation/1"):
        Derivation.from_json([1, 2, 3])
    good = derive_same_degree(2, sub(2, (1, 0)), sub(2, (0, 1))).to_json()
    for key in ("level", "c1", "c2", "steps"):
        broken = json.loads(json.dumps(good))
        del broken[key]
        with pytest.raises(DerivationError, match="malformed certificate"):
            Derivation.from_json(broken)
    broken = json.loads(json.dumps(good))
    del broken["steps"][0]["sub2"]
    with pytest.raises(DerivationError, match="malformed certificate"):
        Derivation.from_json(broken)
