import numpy as np
import pytest

from qgeom.errors import (
    DivisionByZero,
    FieldTooLarge,
    NoConjugation,
    NotPrime,
    ReducibleModulus,
)
from qgeom.gf import Field, build_field

ALL_FIELDS = [
    Field(2),
    Field(3),
    Field(5),
    Field(7),
    Field(11),
    Field(13),
    Field(2, 2),
    Field(2, 3),
    Field(3, 2),
    Field(2, 4),
]


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def test_prime_field_elements():
    gf2 = Field(2)
    assert gf2.elements() == [0, 1]
    assert gf2.q == 2


def test_gf4_has_four_elements():
    gf4 = Field(2, 2, (1, 1, 1))
    assert gf4.q == 4
    assert len(gf4.elements()) == 4


def test_reducible_modulus_rejected():
    # x^2 + 1 = (x + 1)^2 over GF(2): the brute-force divisor search finds x + 1
    with pytest.raises(ReducibleModulus):
        Field(2, 2, (1, 0, 1))


def test_nonprime_rejected():
    with pytest.raises(NotPrime):
        Field(4)
    with pytest.raises(NotPrime):
        Field(1)


def test_field_cap():
    with pytest.raises(FieldTooLarge):
        Field(17)
    Field(17, cap=32)  # override allows it


def test_build_field_from_config():
    f = build_field({"p": 2, "e": 2, "modulus": [1, 1, 1]})
    assert f.q == 4


def test_field_equality_and_hash():
    assert Field(2, 2) == Field(2, 2, (1, 1, 1))
    assert hash(Field(3)) == hash(Field(3))
    assert Field(2) != Field(3)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_gf2_one_plus_one():
    gf2 = Field(2)
    assert gf2.add(1, 1) == 0


def test_gf4_generator_square():
    # a = class of x; a*a reduces to a + 1 modulo x^2 + x + 1
    gf4 = Field(2, 2)
    a = gf4.element([0, 1])
    assert gf4.coeffs(gf4.mul(a, a)) == (1, 1)


def test_multiplicative_identity_everywhere():
    for f in ALL_FIELDS:
        for a in f.elements():
            assert f.mul(a, 1) == a
            assert f.add(a, 0) == a
            assert f.mul(a, 0) == 0


def test_field_axioms_exhaustive_small():
    for f in [Field(2), Field(3), Field(2, 2), Field(3, 2), Field(2, 3)]:
        els = f.elements()
        for a in els:
            for b in els:
                assert f.add(a, b) == f.add(b, a)
                assert f.mul(a, b) == f.mul(b, a)
                for c in els:
                    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


def test_inverses():
    gf3 = Field(3)
    assert gf3.inv(2) == 2  # 2*2 = 4 = 1 mod 3
    gf2 = Field(2)
    assert gf2.inv(1) == 1
    gf4 = Field(2, 2)
    a = gf4.element([0, 1])
    assert gf4.inv(a) == gf4.element([1, 1])  # a*(a+1) = a^2+a = 1
    for f in ALL_FIELDS:
        for a in f.elements():
            if a == 0:
                with pytest.raises(DivisionByZero):
                    f.inv(a)
            else:
                assert f.mul(a, f.inv(a)) == 1
                assert f.inv(f.inv(a)) == a


def test_pow():
    gf3 = Field(3)
    assert gf3.pow(2, 2) == 1
    assert gf3.pow(2, -1) == 2
    gf4 = Field(2, 2)
    a = gf4.element([0, 1])
    assert gf4.pow(a, 3) == 1


# ---------------------------------------------------------------------------
# conjugation (the involutory automorphism for even degree)
# ---------------------------------------------------------------------------

def test_conj_gf4():
    gf4 = Field(2, 2)
    a = gf4.element([0, 1])
    assert gf4.conj(a) == gf4.mul(a, a)  # a^sqrt(4) = a^2
    assert gf4.coeffs(gf4.conj(a)) == (1, 1)
    assert gf4.conj(1) == 1
    assert gf4.conj(0) == 0


def test_conj_odd_degree_rejected():
    with pytest.raises(NoConjugation):
        Field(2).conj(1)
    with pytest.raises(NoConjugation):
        Field(2, 3).conj(1)


def test_conj_is_involutory_automorphism():
    for f in [Field(2, 2), Field(3, 2), Field(2, 4)]:
        fixed = 0
        for a in f.elements():
            assert f.conj(f.conj(a)) == a
            if f.conj(a) == a:
                fixed += 1
            for b in f.elements():
                assert f.conj(f.mul(a, b)) == f.mul(f.conj(a), f.conj(b))
                assert f.conj(f.add(a, b)) == f.add(f.conj(a), f.conj(b))
        # the fixed subfield is GF(sqrt(q))
        assert fixed == f.p ** (f.e // 2)


def test_frobenius_powers_cycle():
    f = Field(2, 4)
    for a in f.elements():
        assert f.frobenius(a, 4) == a
        assert f.frobenius(f.frobenius(a, 1), 3) == a


# ---------------------------------------------------------------------------
# group structure
# ---------------------------------------------------------------------------

def test_additive_group_elementary_abelian():
    for f in ALL_FIELDS:
        for a in f.elements():
            acc = 0
            for _ in range(f.p):
                acc = f.add(acc, a)
            assert acc == 0


def test_multiplicative_group_cyclic():
    # exhaustive generator hunt: some element has order exactly q - 1
    for f in ALL_FIELDS:
        target = f.q - 1
        found = False
        for g in range(1, f.q):
            seen = set()
            x = 1
            for _ in range(target):
                x = f.mul(x, g)
                seen.add(x)
            if len(seen) == target:
                found = True
                break
        assert found, f"no generator in {f}"


def test_tables_deterministic_and_readonly():
    f1, f2 = Field(2, 3), Field(2, 3)
    assert np.array_equal(f1.mul_table, f2.mul_table)
    assert np.array_equal(f1.add_table, f2.add_table)
    with pytest.raises(ValueError):
        f1.mul_table[0, 0] = 1
