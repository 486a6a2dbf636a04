import random
from fractions import Fraction

import pytest

from rigidcohom.scalars import (INF, NotInvertibleError, Scalar, ScalarContext,
                                invert, mul, padic_valuation, valuation)


def test_valuation_of_one_is_zero():
    assert valuation(Scalar.rational(1, 5)) == 0
    assert valuation(Scalar.padic(1, 5, 12)) == 0


def test_valuation_of_uniformizer():
    # |p| = eps^1, i.e. nu(p) = 1
    assert valuation(Scalar.rational(5, 5)) == 1
    assert valuation(Scalar.padic(5, 5, 12)) == 1


def test_valuation_50_at_p5():
    assert valuation(Scalar.rational(50, 5)) == 2  # 50 = 2 * 5^2


def test_valuation_of_zero_is_plus_infinity():
    assert valuation(Scalar.rational(0, 5)) == INF
    assert valuation(Scalar.padic_zero(5)) == INF


def test_mul_identity():
    x = Scalar.rational(Fraction(7, 3), 5)
    assert Scalar.rational(1, 5) * x == x


def test_mul_padic_units():
    p, N = 5, 3
    prod = Scalar.padic(2, p, N) * Scalar.padic(3, p, N)
    assert prod.unit == 6 and prod.val == 0 and prod.rel == 3


def test_valuation_additivity():
    x = Scalar.padic(5, 5, 8)
    y = Scalar.padic(25, 5, 8)
    assert valuation(mul(x, y)) == 3


def test_invert_one():
    assert invert(Scalar.rational(1, 5)) == Scalar.rational(1, 5)


def test_invert_geometric_series_oracle():
    # Oracle: truncated geometric series sum_{j<4} 5^j = 156 is the inverse
    # of 1 - 5 = -4 modulo 5^4 = 625.
    series = sum(5 ** j for j in range(4))
    assert series == 156
    assert (-4 * series) % 625 == 1

    x = Scalar.padic(-4, 5, 4)
    inv = invert(x)
    assert inv.val == 0
    assert inv.unit == 156
    assert (x * inv) == Scalar.padic(1, 5, 4)


def test_invert_zero_raises():
    with pytest.raises(NotInvertibleError):
        invert(Scalar.rational(0, 5))
    with pytest.raises(NotInvertibleError):
        invert(Scalar.padic_zero(5))


def _random_scalars(rng, ctx, count):
    out = []
    for _ in range(count):
        num = rng.randint(-200, 200)
        den = rng.choice([1, 1, 2, 3, 5, 25])
        out.append(ctx.make(Fraction(num, den)))
    return out


@pytest.mark.parametrize("backend", ["rational", "padic"])
def test_ultrametric_properties(backend):
    rng = random.Random(20260808)
    ctx = ScalarContext(5, backend, 12)
    xs = _random_scalars(rng, ctx, 40)
    ys = _random_scalars(rng, ctx, 40)
    for x, y in zip(xs, ys):
        # |xy| = |x||y| exactly, on valuations
        assert (x * y).valuation() == x.valuation() + y.valuation()
        # |x+y| <= max(|x|,|y|): valuation of the sum >= min of valuations
        s = x + y
        assert s.valuation_lower_bound() >= min(x.valuation(), y.valuation())


def test_backend_cross_check_expressions():
    rng = random.Random(99)
    p, N = 5, 12
    ctxq = ScalarContext(p, "rational", N)
    ctxp = ScalarContext(p, "padic", N)
    for _ in range(60):
        vals = [Fraction(rng.randint(-50, 50)) for _ in range(4)]
        q = (ctxq.make(vals[0]) * ctxq.make(vals[1]) + ctxq.make(vals[2])) * ctxq.make(vals[3])
        pa = (ctxp.make(vals[0]) * ctxp.make(vals[1]) + ctxp.make(vals[2])) * ctxp.make(vals[3])
        assert q.to_padic(N) == pa


def test_rational_padic_roundtrip_preserves_valuation():
    for value in [Fraction(7, 3), Fraction(50), Fraction(1, 25), Fraction(-12, 5)]:
        x = Scalar.rational(value, 5)
        back = x.to_padic(10).to_rational()
        assert back.valuation() == x.valuation()


def test_padic_cancellation_tracks_bound():
    p, N = 5, 6
    a = Scalar.padic(2, p, N)
    b = Scalar.padic(-2, p, N)
    z = a + b
    assert z.is_zero()
    assert z.valuation_lower_bound() == N  # known zero mod p^6 only


def test_padic_valuation_helper():
    assert padic_valuation(Fraction(50), 5) == 2
    assert padic_valuation(Fraction(1, 5), 5) == -1
    assert padic_valuation(0, 5) == INF
