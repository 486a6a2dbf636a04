"""Truncated computational models of weak (overconvergent) completions.

Everything here is finite and exact: completions are represented by
truncation parameters (degree cap, precision, power depth), membership
in the linear-growth filtration is decided monomial by monomial, and
the spectral radius of a finitely generated submodule is estimated from
norms of generator products up to a stated depth.  Norms are handled as
integer exponents of the symbolic base 0 < eps < 1, never as floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import INF


class UnsupportedInputError(ValueError):
    """Input outside the decidable fragment (e.g. non-monomial span)."""


@dataclass(frozen=True)
class TruncationParams:
    """Caps shared by every truncated computation.

    p: prime; prec: digits carried by the p-adic backend; degree_cap:
    total-degree cap D; depth: power depth for spectral estimates;
    level_cap: largest tube level; stab_window: how many consecutive
    caps must agree before a dimension is reported as stabilized.
    """

    p: int = 5
    prec: int = 12
    degree_cap: int = 16
    depth: int = 24
    level_cap: int = 3
    stab_window: int = 3
    max_pairs: int = 10_000
    max_degree: int = 24

    def __post_init__(self):
        if min(self.p, self.prec, self.degree_cap, self.depth, self.level_cap,
               self.max_pairs, self.max_degree) <= 0:
            raise ValueError("all truncation parameters must be positive")
        if self.stab_window < 2:
            raise ValueError("stabilization window must be at least 2")


def canonical_norm(f):
    """Exponent of the canonical norm: min coefficient valuation.

    ||f|| = eps^canonical_norm(f); the zero polynomial returns +inf
    (the distinguished zero norm).
    """
    if f.is_zero():
        return INF
    return min(c.valuation() for c in f.terms.values())


class SubmoduleSpan:
    """Finitely generated V-submodule given by generator polynomials."""

    def __init__(self, generators, ambient=None):
        gens = []
        for g in generators:
            if ambient is not None:
                g = ambient.normal_form(g)
            if not g.is_zero():
                gens.append(g)
        self.generators = gens
        self.monomial_spanned = all(len(g.terms) == 1 for g in gens)

    def scaled_powers(self, j, c):
        """Generators of p^j * M^c (as polynomials)."""
        from .polyalg import ideal_power_generators
        if not self.generators:
            return []
        powers = ideal_power_generators(self.generators, c) if c >= 1 else []
        p = self.generators[0].ring.ctx.p
        return [g.scale(Fraction(p) ** j) for g in powers]

    def __len__(self):
        return len(self.generators)


def linear_growth_membership(f, span, params):
    """Does f lie in sum_i p^i S^(i+1), deciding i <= depth only?

    Requires a monomial-spanned S.  Each monomial p^v x^alpha of f must
    fit in p^i S^(i+1) for some i <= min(v, depth): alpha must split
    into i+1 generator exponents whose coefficient valuations sum to at
    most v - i.  Returns "member", "not-member" or "inconclusive" (the
    latter only when a decision would need i beyond the depth).
    """
    if not span.monomial_spanned:
        raise UnsupportedInputError("linear growth membership needs a monomial span")
    if f.is_zero():
        return "member"
    gens = []
    for g in span.generators:
        (mono, coeff), = g.terms.items()
        gens.append((mono, coeff.valuation()))
    nvars = len(f.ring.vars)

    verdict = "member"
    for mono, coeff in sorted(f.terms.items()):
        v = coeff.valuation()
        cap = min(v, params.depth)
        # best[k] maps achievable exponent tuples to minimal valuation cost
        # using exactly k generators (componentwise bounded by mono)
        best = {(0,) * nvars: 0}
        fits = False
        for k in range(1, cap + 2):
            nxt = {}
            for part, cost in best.items():
                for gm, gval in gens:
                    cand = tuple(a + b for a, b in zip(part, gm))
                    if any(a > b for a, b in zip(cand, mono)):
                        continue
                    cv = cost + gval
                    if cv < nxt.get(cand, INF):
                        nxt[cand] = cv
            best = nxt
            i = k - 1
            cost = best.get(mono)
            if cost is not None and cost <= v - i:
                fits = True
                break
            if not best:
                break
        if not fits:
            if v > params.depth:
                verdict = "inconclusive"
            else:
                return "not-member"
    return verdict


@dataclass(frozen=True)
class SpectralEstimate:
    """Estimator exponent for the spectral radius, with its depth.

    ``exponent`` is log_eps of the estimate (a Fraction, or +inf when
    the module collapses to zero in the ambient quotient); the true
    log_eps of the spectral radius is approached from below as the
    depth grows.
    """

    exponent: object
    depth: int

    def radius_is_one(self):
        return self.exponent == 0


def spectral_radius_estimate(span, ambient, params):
    """min over n <= depth of ||M^n|| exponents divided by n.

    ||M^n|| is the set norm: eps^(min coefficient valuation over
    n-fold generator products), products reduced in the ambient algebra.
    """
    gens = [ambient.normal_form(g) for g in span.generators]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return SpectralEstimate(INF, params.depth)
    best = None
    current = {g.key(): g for g in gens}
    for n in range(1, params.depth + 1):
        c_n = min(canonical_norm(g) for g in current.values())
        if c_n is not INF:
            val = Fraction(c_n, n)
            if best is None or val < best:
                best = val
        if n == params.depth:
            break
        nxt = {}
        for g in current.values():
            for h in gens:
                prod = ambient.normal_form(g * h)
                if not prod.is_zero():
                    nxt[prod.key()] = prod
        if not nxt:
            return SpectralEstimate(INF, params.depth)
        current = nxt
    return SpectralEstimate(best if best is not None else INF, params.depth)


class DaggerElement:
    """Truncated model of an overconvergent series.

    A polynomial of total degree <= degree cap whose coefficient
    valuations grow at least linearly in the degree with slope 1/c:
    nu(b_alpha) + 1 >= |alpha|/c.  Sums keep max(c1, c2); products
    carry c1 + c2 (max is not enough: x^c * x^c breaks the estimate at
    parameter c, while integral coefficients make c1 + c2 sound).
    """

    def __init__(self, poly, growth, params):
        self.poly = poly
        self.growth = Fraction(growth)
        self.params = params
        if self.growth <= 0:
            raise ValueError("growth parameter must be positive")
        if poly.total_degree() > params.degree_cap:
            raise UnsupportedInputError("polynomial exceeds the degree cap")
        if not self.satisfies_estimate():
            raise ValueError("coefficients violate the linear-growth estimate")

    def satisfies_estimate(self, growth=None):
        c = Fraction(growth) if growth is not None else self.growth
        for mono, coeff in self.poly.terms.items():
            if Fraction(coeff.valuation() + 1) < Fraction(sum(mono), 1) / c:
                return False
        return True

    def __mul__(self, other):
        prod = self.poly * other.poly
        return DaggerElement(prod, self.growth + other.growth, self.params)

    def __add__(self, other):
        return DaggerElement(self.poly + other.poly,
                             max(self.growth, other.growth), self.params)

    def __repr__(self):
        return f"DaggerElement({self.poly.to_text()}, c={self.growth})"


@dataclass
class WitnessRecord:
    m: int
    n: int
    decomposition_exact: bool
    remainder_integral: bool

    @property
    def ok(self):
        return self.decomposition_exact and self.remainder_integral


def completion_noninjectivity_witness(p, m_max, n_max=12):
    """Exact witness that a partial geometric sum dives into every p^m X_1.

    X_0 = V[t]; X_1 adds f_m = p^-m (1 + pt + ... + (pt)^(m-1)).  For
    every m <= m_max and m <= n <= n_max the identity

        sum_{i=0}^n (pt)^i  =  p^m f_m + sum_{i=m}^n (pt)^i

    is expanded over exact rationals, and the right side is exhibited
    inside p^m X_1: the first summand is p^m times a generator of X_1,
    the second is p^m times a V-integral polynomial.
    """
    from .polyalg import PolyRing
    from .scalars import ScalarContext

    if m_max > 8:
        raise UnsupportedInputError("witness capped at m_max <= 8")
    ring = PolyRing(["t"], ScalarContext(p, "rational", 12))
    t = ring.var("t")
    pt = t.scale(p)

    def geometric(lo, hi):
        acc = ring.zero()
        term = ring.one()
        for i in range(hi + 1):
            if i >= lo:
                acc = acc + term
            term = term * pt
        return acc

    records = []
    for m in range(0, m_max + 1):
        f_m = geometric(0, m - 1).scale(Fraction(1, p ** m)) if m >= 1 else ring.zero()
        for n in range(max(m, 1), n_max + 1):
            total = geometric(0, n)
            if m == 0:
                # p^0 X_1 contains X_0 outright
                records.append(WitnessRecord(m, n, True, True))
                continue
            tail = geometric(m, n)
            recombined = f_m.scale(p ** m) + tail
            exact = recombined == total
            cofactor = tail.scale(Fraction(1, p ** m))
            integral = all(c.frac.denominator == 1 and c.valuation() >= 0
                           for c in cofactor.terms.values())
            records.append(WitnessRecord(m, n, exact, integral))
    return records
