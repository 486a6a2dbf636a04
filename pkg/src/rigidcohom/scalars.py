"""Scalar arithmetic over a complete discrete valuation setting.

The coefficient domain is the fraction field K of the p-adic integers,
with uniformizer p and residue field F_p.  Two interchangeable backends:

* ``rational`` -- exact ``fractions.Fraction`` values, with the p-adic
  valuation computed on demand.  This backend is exact and is the one
  all Groebner-basis work runs on.
* ``padic`` -- a value is stored as ``unit * p**val`` with the unit kept
  modulo ``p**rel`` (``rel`` = relative precision).  Every operation
  propagates the worst-case precision of its result.  Cancellation in
  addition can produce an *approximate zero*: a value known to be
  divisible by ``p**bound`` but not known exactly; the bound feeds the
  pivot certificates of the linear algebra layer.

All norm comparisons happen on valuations (integers); the base 0<eps<1
of the absolute value is symbolic and never materialised as a float.
Values are immutable and safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction

INF = float("inf")


class NotInvertibleError(ZeroDivisionError):
    """Inversion of zero (or of an approximate zero) was requested."""


class PrecisionError(ArithmeticError):
    """A p-adic computation lost all significant digits."""


class BackendMismatchError(TypeError):
    """Two scalars with incompatible primes/backends were combined."""


def padic_valuation(q, p):
    """p-adic valuation of an int or Fraction; +inf for 0."""
    if q == 0:
        return INF
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class Scalar:
    """Element of K = Frac(Z_p) under one of the two backends.

    Fields (per backend):
      rational: ``frac``  -- exact Fraction
      padic:    ``val``   -- valuation (int); for zeros: None (exact zero)
                             or an int lower bound on the valuation
                ``unit``  -- unit part modulo p**rel (0 for zeros)
                ``rel``   -- relative precision of the unit (0 for zeros)
    """

    __slots__ = ("p", "kind", "frac", "val", "unit", "rel")

    def __init__(self, p, kind, frac=None, val=None, unit=0, rel=0):
        self.p = p
        self.kind = kind
        self.frac = frac
        self.val = val
        self.unit = unit
        self.rel = rel

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, value, p):
        return cls(p, "q", frac=Fraction(value))

    @classmethod
    def padic(cls, value, p, prec):
        """Exact int/Fraction -> p-adic at relative precision ``prec``."""
        value = Fraction(value)
        if value == 0:
            return cls.padic_zero(p)
        v = padic_valuation(value, p)
        unit_frac = value / Fraction(p) ** v
        mod = p ** prec
        num = unit_frac.numerator % mod
        deninv = pow(unit_frac.denominator, -1, mod)
        return cls(p, "p", val=v, unit=(num * deninv) % mod, rel=prec)

    @classmethod
    def padic_zero(cls, p, bound=None):
        """Zero; ``bound=None`` is an exact zero, else nu >= bound."""
        return cls(p, "p", val=bound, unit=0, rel=0)

    @property
    def backend(self):
        return "rational" if self.kind == "q" else "padic"

    # -- predicates and views ------------------------------------------

    def is_zero(self):
        if self.kind == "q":
            return self.frac == 0
        return self.unit == 0

    def is_exact_zero(self):
        if self.kind == "q":
            return self.frac == 0
        return self.unit == 0 and self.val is None

    def valuation(self):
        """nu(x); nu(0) = +inf by convention."""
        if self.kind == "q":
            return padic_valuation(self.frac, self.p)
        if self.unit == 0:
            return INF
        return self.val

    def valuation_lower_bound(self):
        """Certified lower bound on nu of the represented true value.

        Equals the valuation for nonzero values and +inf for exact
        zeros; for approximate zeros it is the cancellation bound.
        """
        if self.kind == "q":
            return padic_valuation(self.frac, self.p)
        if self.unit == 0:
            return INF if self.val is None else self.val
        return self.val

    def to_rational(self):
        if self.kind == "q":
            return self
        if self.unit == 0:
            return Scalar.rational(0, self.p)
        return Scalar.rational(Fraction(self.unit) * Fraction(self.p) ** self.val, self.p)

    def to_padic(self, prec):
        if self.kind == "p":
            return self
        return Scalar.padic(self.frac, self.p, prec)

    # -- arithmetic -----------------------------------------------------

    DEFAULT_PREC = 12

    def _coerce(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.rational(other, self.p)
        if other.p != self.p:
            raise BackendMismatchError("scalars with different primes")
        if self.kind == other.kind:
            return self, other
        if self.kind == "q":
            return self.to_padic(_coercion_prec(other)), other
        return self, other.to_padic(_coercion_prec(self))

    def __add__(self, other):
        a, b = self._coerce(other)
        if a.kind == "q":
            return Scalar.rational(a.frac + b.frac, a.p)
        return _padic_add(a, b)

    __radd__ = __add__

    def __neg__(self):
        if self.kind == "q":
            return Scalar.rational(-self.frac, self.p)
        if self.unit == 0:
            return self
        mod = self.p ** self.rel
        return Scalar(self.p, "p", val=self.val, unit=(-self.unit) % mod, rel=self.rel)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a.kind == "q":
            return Scalar.rational(a.frac * b.frac, a.p)
        return _padic_mul(a, b)

    __rmul__ = __mul__

    def invert(self):
        """Multiplicative inverse; x * invert(x) == 1 to working precision."""
        if self.is_zero():
            raise NotInvertibleError("not invertible")
        if self.kind == "q":
            return Scalar.rational(1 / self.frac, self.p)
        mod = self.p ** self.rel
        return Scalar(self.p, "p", val=-self.val, unit=pow(self.unit, -1, mod), rel=self.rel)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.invert()

    def __rtruediv__(self, other):
        return self.invert() * other

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        out = Scalar.rational(1, self.p) if self.kind == "q" else Scalar.padic(1, self.p, self.rel or 1)
        base = self
        for _ in range(n):
            out = out * base
        return out

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.rational(other, self.p)
            except (TypeError, ValueError):
                return NotImplemented
        if self.p != other.p:
            return False
        a, b = self._coerce(other)
        if a.kind == "q":
            return a.frac == b.frac
        if a.is_zero() or b.is_zero():
            return a.is_zero() and b.is_zero()
        if a.val != b.val:
            return False
        rel = min(a.rel, b.rel)
        mod = a.p ** rel
        return a.unit % mod == b.unit % mod

    def __hash__(self):
        if self.kind == "q":
            return hash(("q", self.p, self.frac))
        return hash(("p", self.p, self.val, self.unit, self.rel))

    def __repr__(self):
        if self.kind == "q":
            return f"Scalar({self.frac})"
        if self.unit == 0:
            bound = "exact" if self.val is None else f">={self.val}"
            return f"Scalar(0_p[{bound}])"
        return f"Scalar({self.unit}*{self.p}^{self.val} + O({self.p}^{self.val + self.rel}))"

    def scalar_key(self):
        """Canonical hashable key, used for polynomial canonical forms."""
        if self.kind == "q":
            return ("q", self.frac.numerator, self.frac.denominator)
        return ("p", self.val, self.unit, self.rel)


def _coercion_prec(padic_side):
    """Precision for rational -> p-adic coercion in mixed arithmetic.

    A nonzero p-adic partner fixes the useful precision; against an
    (approximate) zero the default keeps the rational side sharp enough
    that exact zeros never degrade it.
    """
    if padic_side.unit:
        return max(padic_side.rel, 1)
    if padic_side.val is not None:
        return max(padic_side.val, Scalar.DEFAULT_PREC)
    return Scalar.DEFAULT_PREC


def _padic_mul(a, b):
    p = a.p
    if a.unit == 0 or b.unit == 0:
        if a.is_exact_zero() or b.is_exact_zero():
            return Scalar.padic_zero(p)
        # bound(x*y) >= bound(x) + val_lower(y)
        ba = a.valuation_lower_bound()
        bb = b.valuation_lower_bound()
        return Scalar.padic_zero(p, bound=None if ba is INF and bb is INF else _finite(ba + bb))
    rel = min(a.rel, b.rel)
    mod = p ** rel
    return Scalar(p, "p", val=a.val + b.val, unit=(a.unit * b.unit) % mod, rel=rel)


def _finite(x):
    return None if x == INF else int(x)


def _padic_add(a, b):
    p = a.p
    if a.unit == 0 and b.unit == 0:
        if a.is_exact_zero():
            return b
        if b.is_exact_zero():
            return a
        return Scalar.padic_zero(p, bound=min(a.val, b.val))
    if a.unit == 0 or b.unit == 0:
        z, x = (a, b) if a.unit == 0 else (b, a)
        if z.is_exact_zero():
            return x
        bound = z.val
        if bound >= x.val + x.rel:
            return x
        if bound <= x.val:
            return Scalar.padic_zero(p, bound=bound)
        rel = bound - x.val
        return Scalar(p, "p", val=x.val, unit=x.unit % p ** rel, rel=rel)
    if a.val > b.val:
        a, b = b, a
    shift = b.val - a.val
    rel = min(a.rel, b.rel + shift)
    mod = p ** rel
    s = (a.unit + b.unit * p ** shift) % mod
    if s == 0:
        return Scalar.padic_zero(p, bound=a.val + rel)
    k = 0
    while s % p == 0:
        s //= p
        k += 1
    return Scalar(p, "p", val=a.val + k, unit=s % p ** (rel - k), rel=rel - k)


class ScalarContext:
    """Factory tying a prime, a backend and a default precision together."""

    __slots__ = ("p", "backend", "prec")

    def __init__(self, p, backend="rational", prec=12):
        if backend not in ("rational", "padic"):
            raise ValueError(f"unknown backend {backend!r}")
        self.p = p
        self.backend = backend
        self.prec = prec

    def make(self, value):
        if isinstance(value, Scalar):
            return value if self.backend == "rational" else value.to_padic(self.prec)
        if self.backend == "rational":
            return Scalar.rational(value, self.p)
        return Scalar.padic(value, self.p, self.prec)

    def zero(self):
        if self.backend == "rational":
            return Scalar.rational(0, self.p)
        return Scalar.padic_zero(self.p)

    def one(self):
        return self.make(1)

    def rationalized(self):
        return ScalarContext(self.p, "rational", self.prec)

    def padicized(self):
        return ScalarContext(self.p, "padic", self.prec)

    def __eq__(self, other):
        return (isinstance(other, ScalarContext)
                and (self.p, self.backend, self.prec) == (other.p, other.backend, other.prec))

    def __repr__(self):
        return f"ScalarContext(p={self.p}, backend={self.backend!r}, prec={self.prec})"


def valuation(x):
    """nu(x) for a Scalar; nu(0) = +inf."""
    return x.valuation()


def mul(x, y):
    return x * y


def invert(x):
    return x.invert()
