"""Tube algebras around an ideal and their finite-level pro-system.

For an ideal J (containing the prime p) in a polynomial base ring, the
level-m presentation adjoins one variable y_i per generator g_i of J^m
with relations g_i - p*y_i; over K this presents the degree-1/m tube.
Levels form a tower: each J^(m+1) generator is a product of one J
generator with a J^m generator, so peeling a factor off gives the
transition homomorphism level m+1 -> level m (x-variables fixed,
y-variables to cofactor * y).  The peeled factor is the one with the
largest leading monomial under a configurable order, which makes the
lift deterministic and lets tests compare two different orders.
"""

from __future__ import annotations

from fractions import Fraction

from .completions import UnsupportedInputError
from .polyalg import (BudgetError, PolyRing, PresentedAlgebra, lex_key,
                      lift_in_ideal, order_key, power_products)

MAX_LEVEL_VARIABLES = 64


class AlgebraHom:
    """Unital algebra homomorphism between presented algebras."""

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = dict(images)
        for v in source.ring.vars:
            if v not in self.images:
                raise ValueError(f"no image for variable {v!r}")
        if check and not self.check_relations():
            raise ValueError("homomorphism does not send relations to zero")

    def apply(self, f):
        img = f.substitute(self.target.ring, self.images)
        return self.target.normal_form(img)

    def check_relations(self):
        return all(self.apply(r).is_zero() for r in self.source.relations)

    def compose(self, inner):
        """self o inner."""
        images = {v: self.apply(poly) for v, poly in inner.images.items()}
        return AlgebraHom(inner.source, self.target, images, check=False)

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra,
                   {v: algebra.ring.var(v) for v in algebra.ring.vars}, check=False)


def tube_generators(j_gens, alpha, x_vars=None):
    """Algebra generators of the alpha-tube, as (polynomial, p-exponent).

    alpha = i/m in lowest terms, 0 <= alpha <= 1; the generator list is
    the x-variables at exponent 0 together with generators of
    J^(ceil(l*m/i)) at exponent -l for l = 1..i.  Requires p among the
    ideal generators.
    """
    alpha = Fraction(alpha)
    if alpha < 0 or alpha > 1:
        raise UnsupportedInputError("alpha must lie in [0, 1]")
    ring = j_gens[0].ring
    x_vars = list(x_vars) if x_vars is not None else list(ring.vars)
    p_const = ring.const(ring.ctx.p)
    if not any(g == p_const for g in j_gens):
        raise UnsupportedInputError("the prime must be among the ideal generators")
    out = [(ring.var(v), 0) for v in x_vars]
    i, m = alpha.numerator, alpha.denominator
    for l in range(1, i + 1):
        power = -(-l * m // i)  # ceil(l*m/i)
        for g in _power_gens(j_gens, power):
            out.append((g, -l))
    return out


def _power_gens(j_gens, m):
    prods, _ = power_products(j_gens, m)
    return prods


def _aux_names(base_vars, count):
    prefix = "y"
    while any(v.startswith(prefix) and v[len(prefix):].isdigit() for v in base_vars):
        prefix += "y"
    return [f"{prefix}{i + 1}" for i in range(count)]


class TubeLevel:
    """Level-m presentation S_m = K[x, y]/(g_i - p y_i), g_i generating J^m."""

    __slots__ = ("m", "algebra", "x_vars", "y_names", "gen_polys", "combo_index")

    def __init__(self, m, algebra, x_vars, y_names, gen_polys, combo_index):
        self.m = m
        self.algebra = algebra
        self.x_vars = x_vars
        self.y_names = y_names
        self.gen_polys = gen_polys
        self.combo_index = combo_index


def tube_level_presentation(j_gens, m, max_pairs=10_000, max_degree=24):
    """Build the level-m tube presentation over K; no auto-simplification.

    The auxiliary variable for generator g carries presentation weight
    deg(g), which keeps normal forms, differentials and transitions
    compatible with weight-based truncation caps.
    """
    base = j_gens[0].ring
    gens, index = power_products(j_gens, m)
    if len(gens) + len(base.vars) > MAX_LEVEL_VARIABLES:
        raise BudgetError(f"level {m} needs {len(gens)} auxiliary variables",
                          stage="tube-level")
    y_names = _aux_names(base.vars, len(gens))
    variables = list(base.vars) + y_names
    weights = [1] * len(base.vars) + [max(g.total_degree(), 0) for g in gens]
    ring = PolyRing(variables, base.ctx)
    p = base.ctx.p
    relations = []
    for g, y in zip(gens, y_names):
        lifted = g.copy_to(ring) if ring.vars == g.ring.vars else _extend(g, ring)
        relations.append(lifted - ring.var(y).scale(p))
    algebra = PresentedAlgebra(ring, relations, weights=weights,
                               max_pairs=max_pairs, max_degree=max_degree)
    return TubeLevel(m, algebra, list(base.vars), y_names, gens, index)


def _extend(poly, ring):
    """Reinterpret a base-ring polynomial inside the enlarged ring."""
    pad = len(ring.vars) - len(poly.ring.vars)
    terms = {mono + (0,) * pad: c for mono, c in poly.terms.items()}
    return ring.poly({m: c.frac if c.kind == "q" else c for m, c in terms.items()})


class TubeSystem:
    """Tower of tube levels 1..m_max with deterministic transitions."""

    def __init__(self, j_gens, m_max, lift_order="grevlex",
                 max_pairs=10_000, max_degree=24):
        base = j_gens[0].ring
        p_const = base.const(base.ctx.p)
        if not any(g == p_const for g in j_gens):
            raise UnsupportedInputError("the prime must be among the ideal generators")
        self.j_gens = list(j_gens)
        self.base_ring = base
        self.m_max = m_max
        self.lift_order = lift_order
        self.max_pairs = max_pairs
        self.max_degree = max_degree
        self._levels = {}
        self._transitions = {}
        if lift_order == "grevlex":
            self._lm_key = lambda g: order_key(g.leading()[0])
        elif lift_order == "lex":
            self._lm_key = lambda g: lex_key(g.leading()[0])
        else:
            raise ValueError(f"unknown lift order {lift_order!r}")

    def level(self, m):
        if m not in self._levels:
            if not 1 <= m <= self.m_max:
                raise ValueError(f"level {m} outside 1..{self.m_max}")
            self._levels[m] = tube_level_presentation(
                self.j_gens, m, max_pairs=self.max_pairs, max_degree=self.max_degree)
        return self._levels[m]

    def _rep_combo(self, level, idx):
        for combo, pos in level.combo_index.items():
            if pos == idx:
                return combo  # first (lexicographically smallest) wins
        raise KeyError(idx)

    def _peel(self, combo):
        """Split a factor multiset into (peeled index, remaining sorted combo)."""
        best = max(range(len(combo)),
                   key=lambda k: (self._lm_key(self.j_gens[combo[k]]), -combo[k]))
        rest = combo[:best] + combo[best + 1:]
        return combo[best], tuple(sorted(rest))

    def transition(self, m):
        """Homomorphism level m+1 -> level m (or the identity for m+1 = m)."""
        if m not in self._transitions:
            self._transitions[m] = self.transition_to(m + 1, m)
        return self._transitions[m]

    def transition_to(self, m_hi, m_lo):
        """Direct structural transition level m_hi -> level m_lo."""
        if m_hi == m_lo:
            return AlgebraHom.identity(self.level(m_hi).algebra)
        if m_hi < m_lo:
            raise ValueError("transitions go from higher to lower level")
        src = self.level(m_hi)
        dst = self.level(m_lo)
        ring = dst.algebra.ring
        images = {v: ring.var(v) for v in src.x_vars}
        for idx, y in enumerate(src.y_names):
            combo = self._rep_combo(src, idx)
            cofactor = ring.one()
            for _ in range(m_hi - m_lo):
                peeled, combo = self._peel(combo)
                cofactor = cofactor * _extend(self.j_gens[peeled], ring)
            target_y = dst.y_names[dst.combo_index[combo]]
            images[y] = cofactor * ring.var(target_y)
        hom = AlgebraHom(src.algebra, dst.algebra, images, check=False)
        if not hom.check_relations():
            raise AssertionError("tube transition does not preserve relations")
        return hom


def tube_identity_check(j_gens, m, params, l_checked=1):
    """Two-sided generator membership between the 1/m tube and the J^m tube.

    For each generator (g, -l) of one side, exhibits g inside the ideal
    generated by l-fold products of the other side's level polynomials
    with V-integral cofactors (lifting on the pi-cleared forms).  Both
    sides use raw product generators, so success certifies the ring
    identity at the generator level; any failure is reported, not
    raised.
    """
    ring = j_gens[0].ring
    side_a = tube_generators(j_gens, Fraction(1, m))
    jm_gens = _power_gens(j_gens, m)
    side_b = [(ring.var(v), 0) for v in ring.vars] + [(g, -1) for g in jm_gens]

    def pieces(side):
        return [(g, -l) for g, l in side if l < 0] or []

    def level_polys(side):
        return [g for g, l in side if l == -1]

    entries = []
    ok = True
    for name, src, dst in (("tube(J,1/m) in tube(J^m,1)", side_a, side_b),
                           ("tube(J^m,1) in tube(J,1/m)", side_b, side_a)):
        dst_polys = level_polys(dst)
        for g, l in pieces(src):
            prods = dst_polys if l == 1 else _power_gens(dst_polys, l)
            status = _integral_membership(g, prods)
            entries.append({"side": name, "generator": g.to_text(),
                            "p_exponent": -l, "status": status})
            ok = ok and status == "member"
    return {"m": m, "degree_cap": params.degree_cap, "ok": ok, "entries": entries}


def _integral_membership(g, gens):
    """Exhibit g = sum c_i gens_i with V-integral cofactors.

    Plain division by the list (largest leading monomials first, so the
    constant p cannot swallow terms through its K-inverse) finds the
    structural lift; the Groebner lift is only a fallback witness for
    membership without integrality.
    """
    from .polyalg import divide
    ordered = sorted(gens, key=lambda h: order_key(h.leading()[0]), reverse=True)
    quots, rem = divide(g, ordered)
    if rem.is_zero():
        if all(all(c.valuation() >= 0 for c in q.terms.values()) for q in quots):
            return "member"
    cof = lift_in_ideal(g, gens)
    if cof is None:
        return "no-lift"
    if all(all(c.valuation() >= 0 for c in q.terms.values()) for q in cof):
        return "member"
    return "lift-not-integral"
