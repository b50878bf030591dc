"""Exact ring numbers: constants, arithmetic, conjugation, division."""

import cmath
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trichrome.cyclo import CycloNum, exact_div

W = cmath.exp(1j * math.pi / 4)

nums = st.builds(
    CycloNum,
    st.integers(-50, 50),
    st.integers(-50, 50),
    st.integers(-50, 50),
    st.integers(-50, 50),
    st.integers(0, 6),
)


def approx(n: CycloNum) -> complex:
    return (n.a + n.b * W + n.c * W**2 + n.d * W**3) / math.sqrt(2) ** n.k


def random_num(rng: random.Random) -> CycloNum:
    return CycloNum(
        rng.randint(-9, 9),
        rng.randint(-9, 9),
        rng.randint(-9, 9),
        rng.randint(-9, 9),
        rng.randint(0, 4),
    )


def test_constants():
    assert CycloNum.zero().is_zero()
    assert not CycloNum.one().is_zero()
    assert CycloNum.one() == CycloNum.from_int(1)
    assert CycloNum.i() == CycloNum.omega(2)
    assert CycloNum.omega(8) == CycloNum.one()
    assert CycloNum.omega(4) == -CycloNum.one()
    assert CycloNum.sqrt2() * CycloNum.inv_sqrt2() == CycloNum.one()
    assert CycloNum.inv_sqrt2(2) * 2 == CycloNum.one()


def test_omega_powers_match_eighth_roots():
    for p in range(8):
        assert cmath.isclose(CycloNum.omega(p).to_approx(), W**p, abs_tol=1e-12)


def test_normalisation_collapses_sqrt2_factors():
    # 2 / sqrt2^2 is the unit, whatever representation it arrives in
    assert CycloNum(2, 0, 0, 0, 2) == CycloNum.one()
    assert CycloNum(0, 2, 0, 0, 1) == CycloNum.omega() * CycloNum.sqrt2()


def test_arithmetic_matches_complex_arithmetic():
    rng = random.Random(7)
    for _ in range(300):
        x, y = random_num(rng), random_num(rng)
        assert cmath.isclose(
            (x + y).to_approx(), approx(x) + approx(y), abs_tol=1e-9
        )
        assert cmath.isclose(
            (x - y).to_approx(), approx(x) - approx(y), abs_tol=1e-9
        )
        assert cmath.isclose(
            (x * y).to_approx(), approx(x) * approx(y), abs_tol=1e-9
        )
        assert cmath.isclose((-x).to_approx(), -approx(x), abs_tol=1e-12)


def test_integer_operands():
    x = CycloNum.omega()
    assert x + 1 == x + CycloNum.one()
    assert 1 - x == CycloNum.one() - x
    assert x * 3 == x + x + x


def test_conjugation():
    rng = random.Random(11)
    for _ in range(100):
        x = random_num(rng)
        assert cmath.isclose(
            x.conj().to_approx(), approx(x).conjugate(), abs_tol=1e-9
        )
        assert x.conj().conj() == x


def test_exact_division_inverts_multiplication():
    rng = random.Random(13)
    done = 0
    while done < 100:
        x, y = random_num(rng), random_num(rng)
        if y.is_zero():
            continue
        assert exact_div(x * y, y) == x
        done += 1


@given(nums, nums, nums)
def test_ring_laws(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x and x * y == y * x
    assert x + CycloNum.zero() == x
    assert x * CycloNum.one() == x
    assert x - x == CycloNum.zero()


@given(nums, nums)
def test_conjugation_is_a_ring_map(x, y):
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_div(CycloNum.one(), CycloNum.zero())


def test_division_outside_ring_fails():
    # 1/3 is not in the ring
    with pytest.raises(ValueError):
        exact_div(CycloNum.one(), CycloNum.from_int(3))


def test_half_is_in_the_ring():
    half = exact_div(CycloNum.one(), CycloNum.from_int(2))
    assert half * 2 == CycloNum.one()
    assert half == CycloNum.inv_sqrt2(2)


def test_text_roundtrip():
    rng = random.Random(17)
    for _ in range(50):
        x = random_num(rng)
        assert CycloNum.from_text(x.to_text()) == x


def test_complex_protocol():
    assert cmath.isclose(complex(CycloNum.omega()), W, abs_tol=1e-12)
