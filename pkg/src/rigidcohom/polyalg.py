"""Sparse multivariate polynomials and a small Buchberger engine.

Polynomials are dictionaries exponent-tuple -> Scalar over a fixed
variable list.  The monomial order is weight-graded reverse
lexicographic: monomials compare first by weighted total degree (all
weights 1 unless an algebra installs presentation weights), then by
plain total degree, then reverse-lexicographically.  With unit weights
this is exactly grevlex.

The Groebner engine tracks cofactors: every basis element knows an
exact expression as a combination of the input generators, which is
what ideal-membership lifts and tube transition maps consume.  All
Groebner work runs on the exact rational backend.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .scalars import Scalar, ScalarContext


class BudgetError(RuntimeError):
    """A resource cap was exceeded; carries the partial result."""

    def __init__(self, message, stage="groebner", partial=None):
        super().__init__(message)
        self.stage = stage
        self.partial = partial


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


DEFAULT_MAX_PAIRS = 10_000
DEFAULT_MAX_DEGREE = 24


def order_key(mono, weights=None):
    """Sort key realizing weight-graded grevlex (ascending)."""
    deg = sum(mono)
    if weights is None:
        return (deg, deg, tuple(-e for e in reversed(mono)))
    w = sum(e * wt for e, wt in zip(mono, weights))
    return (w, deg, tuple(-e for e in reversed(mono)))


def lex_key(mono, weights=None):
    return mono


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """Polynomial ring: variable names, scalar context, monomial order."""

    __slots__ = ("vars", "ctx", "weights", "keyfun", "_keymemo")

    def __init__(self, variables, ctx, weights=None, order="grevlex"):
        self.vars = tuple(variables)
        self.ctx = ctx
        self.weights = tuple(weights) if weights is not None else None
        memo = {}
        self._keymemo = memo
        if order == "grevlex":
            weights_ = self.weights

            def keyfun(m):
                k = memo.get(m)
                if k is None:
                    k = order_key(m, weights_)
                    memo[m] = k
                return k

            self.keyfun = keyfun
        elif order == "lex":
            self.keyfun = lex_key
        else:
            raise ValueError(f"unknown order {order!r}")

    def nvars(self):
        return len(self.vars)

    def zero(self):
        return SparsePoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        s = self.ctx.make(c)
        if s.is_zero():
            return self.zero()
        return SparsePoly(self, {(0,) * len(self.vars): s})

    def var(self, name):
        i = self.vars.index(name)
        e = [0] * len(self.vars)
        e[i] = 1
        return SparsePoly(self, {tuple(e): self.ctx.one()})

    def monomial(self, mono, coeff=1):
        s = self.ctx.make(coeff)
        if s.is_zero():
            return self.zero()
        return SparsePoly(self, {tuple(mono): s})

    def poly(self, terms):
        out = {}
        for mono, c in terms.items():
            s = self.ctx.make(c)
            if not s.is_zero():
                out[tuple(mono)] = s
        return SparsePoly(self, out)

    def with_weights(self, weights):
        return PolyRing(self.vars, self.ctx, weights=weights)

    def parse(self, text):
        return parse_poly(text, self)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.vars == other.vars
                and self.ctx == other.ctx and self.weights == other.weights)

    def __repr__(self):
        return f"PolyRing({', '.join(self.vars) or '-'}; p={self.ctx.p})"


class SparsePoly:
    """Sparse polynomial; ``terms`` maps exponent tuples to nonzero Scalars.

    Treated as immutable: every operation builds a new instance, so the
    leading term may be cached.
    """

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._lead = None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def copy_to(self, ring):
        """Re-interpret in another ring with the same variable names."""
        if ring.vars != self.ring.vars:
            raise ValueError("variable mismatch")
        return SparsePoly(ring, {m: ring.ctx.make(c) for m, c in self.terms.items()})

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def weighted_degree(self, weights=None):
        if not self.terms:
            return -1
        weights = weights if weights is not None else self.ring.weights
        if weights is None:
            return self.total_degree()
        return max(sum(e * w for e, w in zip(m, weights)) for m in self.terms)

    def leading(self):
        """(monomial, coefficient) largest under the ring order."""
        if not self.terms:
            raise ValueError("leading term of zero")
        if self._lead is None:
            m = max(self.terms, key=self.ring.keyfun)
            self._lead = (m, self.terms[m])
        return self._lead

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.keyfun(t[0]), reverse=True)

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = self.ring.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return SparsePoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                if m in out:
                    s = out[m] + c
                    if s.is_zero():
                        del out[m]
                    else:
                        out[m] = s
                elif not c.is_zero():
                    out[m] = c
        return SparsePoly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = self.ring.ctx.make(c)
        if c.is_zero():
            return self.ring.zero()
        return SparsePoly(self.ring, {m: co * c for m, co in self.terms.items()})

    def term_mul(self, mono, coeff):
        return SparsePoly(self.ring,
                          {mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def derivative(self, i):
        out = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            e = list(m)
            k = e[i]
            e[i] = k - 1
            s = c * k
            if not s.is_zero():
                out[tuple(e)] = s
        return SparsePoly(self.ring, out)

    def substitute(self, ring, images):
        """Ring homomorphism given by ``images``: var name -> poly in ``ring``."""
        out = ring.zero()
        for m, c in self.sorted_terms():
            term = ring.const(c.to_rational().frac if c.kind == "q" else c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                img = images[self.ring.vars[i]]
                for _ in range(e):
                    term = term * img
            out = out + term
        return out

    def constant_value(self):
        if not self.terms:
            return self.ring.ctx.zero()
        zero = (0,) * len(self.ring.vars)
        if set(self.terms) != {zero}:
            raise ValueError("not a constant")
        return self.terms[zero]

    def key(self):
        """Canonical hashable form."""
        return tuple(sorted((m, c.scalar_key()) for m, c in self.terms.items()))

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            if isinstance(other, (int, Fraction)):
                return self == self.ring.const(other)
            return NotImplemented
        return self.ring.vars == other.ring.vars and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_text(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in self.sorted_terms():
            frac = c.to_rational().frac if c.kind == "p" else c.frac
            factors = []
            for name, e in zip(self.ring.vars, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            coeff_txt = str(frac)
            if factors and abs(frac) == 1:
                body = "*".join(factors)
                bits.append(("-" if frac < 0 else "") + body)
            elif factors:
                bits.append(f"{coeff_txt}*" + "*".join(factors))
            else:
                bits.append(coeff_txt)
        out = bits[0]
        for b in bits[1:]:
            out += " - " + b[1:] if b.startswith("-") else " + " + b
        return out

    __repr__ = to_text


# -- parsing ------------------------------------------------------------


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg):
        raise ParseError(msg, self.line, self.col)

    def _advance(self, n):
        for ch in self.text[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n":
            self._advance(1)
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_char(self):
        ch = self.peek()
        self._advance(1)
        return ch

    def take_int(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self._advance(1)
        if self.pos == start:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def take_name(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self._advance(1)
        return self.text[start:self.pos]


def parse_poly(text, ring):
    """Parse the text polynomial grammar: `x^2*y - 1`, rational coefficients."""
    toks = _Tokens(text)
    poly = _parse_expr(toks, ring)
    if toks.peek() is not None:
        toks.error(f"unexpected character {toks.peek()!r}")
    return poly


def _parse_expr(toks, ring):
    sign = 1
    ch = toks.peek()
    if ch in ("+", "-"):
        toks.take_char()
        sign = -1 if ch == "-" else 1
    out = _parse_term(toks, ring).scale(sign)
    while True:
        ch = toks.peek()
        if ch not in ("+", "-"):
            return out
        toks.take_char()
        nxt = _parse_term(toks, ring)
        out = out + (nxt if ch == "+" else -nxt)


def _parse_term(toks, ring):
    out = _parse_factor(toks, ring)
    while toks.peek() == "*":
        toks.take_char()
        out = out * _parse_factor(toks, ring)
    return out


def _parse_factor(toks, ring):
    base = _parse_atom(toks, ring)
    if toks.peek() == "^":
        toks.take_char()
        if toks.peek() == "^":
            toks.error("malformed exponent '^^'")
        e = toks.take_int()
        out = ring.one()
        for _ in range(e):
            out = out * base
        return out
    return base


def _parse_atom(toks, ring):
    ch = toks.peek()
    if ch is None:
        toks.error("unexpected end of input")
    if ch == "(":
        toks.take_char()
        inner = _parse_expr(toks, ring)
        if toks.peek() != ")":
            toks.error("expected ')'")
        toks.take_char()
        return inner
    if ch.isdigit():
        num = toks.take_int()
        if toks.peek() == "/":
            toks.take_char()
            den = toks.take_int()
            if den == 0:
                toks.error("zero denominator")
            return ring.const(Fraction(num, den))
        return ring.const(num)
    if ch.isalpha() or ch == "_":
        name = toks.take_name()
        if name not in ring.vars:
            toks.error(f"unknown variable {name!r}")
        return ring.var(name)
    toks.error(f"unexpected character {ch!r}")


# -- division and Buchberger ---------------------------------------------


def divide(f, divisors):
    """Deterministic multivariate division: f = sum q_i d_i + r.

    Divisors are tried in list order; the remainder contains no term
    divisible by any divisor's leading monomial.
    """
    ring = f.ring
    quots = [ring.zero() for _ in divisors]
    rem = ring.zero()
    lead = [(d.leading()) for d in divisors]
    work = f
    while work.terms:
        m, c = work.leading()
        hit = None
        for i, (lm, lc) in enumerate(lead):
            if mono_divides(lm, m):
                hit = i
                break
        if hit is None:
            t = SparsePoly(ring, {m: c})
            rem = rem + t
            work = work - t
        else:
            lm, lc = lead[hit]
            qm = mono_div(m, lm)
            qc = c / lc
            quots[hit] = quots[hit] + SparsePoly(ring, {qm: qc})
            work = work - divisors[hit].term_mul(qm, qc)
    return quots, rem


class GroebnerResult:
    """Reduced Groebner basis plus cofactor expressions over the inputs."""

    __slots__ = ("basis", "cofactors", "gens", "pairs_used")

    def __init__(self, basis, cofactors, gens, pairs_used):
        self.basis = basis
        self.cofactors = cofactors
        self.gens = gens
        self.pairs_used = pairs_used

    def leading_monomials(self):
        return [g.leading()[0] for g in self.basis]


def groebner(gens, max_pairs=DEFAULT_MAX_PAIRS, max_degree=DEFAULT_MAX_DEGREE):
    """Buchberger with cofactor tracking over the rational backend."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerResult([], [], [], 0)
    ring = gens[0].ring
    if ring.ctx.backend != "rational":
        raise ValueError("Groebner bases require the exact rational backend")
    ncof = len(gens)

    basis = []
    cofs = []
    for i, g in enumerate(gens):
        cof = [ring.zero() for _ in range(ncof)]
        cof[i] = ring.one()
        _add_reduced(basis, cofs, g, cof, ring, max_degree)

    import heapq

    def pair_key(i, j):
        return (ring.keyfun(mono_lcm(basis[i].leading()[0],
                                     basis[j].leading()[0])), (i, j))

    heap = [pair_key(i, j) for i in range(len(basis))
            for j in range(i + 1, len(basis))]
    heapq.heapify(heap)
    used = 0
    while heap:
        used += 1
        if used > max_pairs:
            raise BudgetError(f"S-pair budget {max_pairs} exceeded", stage="groebner",
                              partial=GroebnerResult(basis, cofs, gens, used))
        _, (i, j) = heapq.heappop(heap)
        fi, fj = basis[i], basis[j]
        lmi, lci = fi.leading()
        lmj, lcj = fj.leading()
        lcm = mono_lcm(lmi, lmj)
        if sum(lcm) > max_degree:
            raise BudgetError(f"S-pair degree {sum(lcm)} exceeds cap {max_degree}",
                              stage="groebner",
                              partial=GroebnerResult(basis, cofs, gens, used))
        if mono_mul(lmi, lmj) == lcm:
            continue  # coprime leading monomials reduce to zero
        mi, ci = mono_div(lcm, lmi), lci.invert()
        mj, cj = mono_div(lcm, lmj), lcj.invert()
        s = fi.term_mul(mi, ci) - fj.term_mul(mj, cj)
        scof = [cofs[i][k].term_mul(mi, ci) - cofs[j][k].term_mul(mj, cj)
                for k in range(ncof)]
        quots, rem = divide(s, basis)
        if rem.is_zero():
            continue
        for k in range(ncof):
            acc = scof[k]
            for q, c in zip(quots, cofs):
                if not q.is_zero():
                    acc = acc - q * c[k]
            scof[k] = acc
        newidx = len(basis)
        lm, lc = rem.leading()
        inv = lc.invert()
        basis.append(rem.scale(inv))
        cofs.append([c.scale(inv) for c in scof])
        for k in range(newidx):
            heapq.heappush(heap, pair_key(k, newidx))

    return _interreduce(basis, cofs, gens, used, ring)


def _add_reduced(basis, cofs, g, cof, ring, max_degree):
    quots, rem = divide(g, basis) if basis else ([], g)
    if rem.is_zero():
        return
    for k in range(len(cof)):
        acc = cof[k]
        for q, c in zip(quots, cofs):
            if not q.is_zero():
                acc = acc - q * c[k]
        cof[k] = acc
    lm, lc = rem.leading()
    inv = lc.invert()
    basis.append(rem.scale(inv))
    cofs.append([c.scale(inv) for c in cof])


def _interreduce(basis, cofs, gens, used, ring):
    # drop elements whose LM is divisible by another's, then tail-reduce
    order = sorted(range(len(basis)), key=lambda i: ring.keyfun(basis[i].leading()[0]))
    keep = []
    for i in order:
        lm = basis[i].leading()[0]
        if any(mono_divides(basis[j].leading()[0], lm) for j in keep):
            continue
        keep.append(i)
    new_basis = [basis[i] for i in keep]
    new_cofs = [list(cofs[i]) for i in keep]
    changed = True
    while changed:
        changed = False
        for i in range(len(new_basis)):
            others = [new_basis[j] for j in range(len(new_basis)) if j != i]
            idxs = [j for j in range(len(new_basis)) if j != i]
            quots, rem = divide(new_basis[i], others) if others else ([], new_basis[i])
            if rem.key() != new_basis[i].key():
                changed = True
                cof = new_cofs[i]
                for q, j in zip(quots, idxs):
                    if not q.is_zero():
                        for k in range(len(cof)):
                            cof[k] = cof[k] - q * new_cofs[j][k]
                if rem.is_zero():
                    del new_basis[i], new_cofs[i]
                    break
                lm, lc = rem.leading()
                inv = lc.invert()
                new_basis[i] = rem.scale(inv)
                new_cofs[i] = [c.scale(inv) for c in cof]
    pairs = sorted(zip(new_basis, new_cofs), key=lambda bc: bc[0].ring.keyfun(bc[0].leading()[0]))
    new_basis = [b for b, _ in pairs]
    new_cofs = [c for _, c in pairs]
    return GroebnerResult(new_basis, new_cofs, gens, used)


def lift_in_ideal(f, gens, max_pairs=DEFAULT_MAX_PAIRS, max_degree=DEFAULT_MAX_DEGREE):
    """Cofactors c_i with f = sum c_i g_i, or None if f is not a member."""
    gb = gens if isinstance(gens, GroebnerResult) else groebner(
        gens, max_pairs=max_pairs, max_degree=max_degree)
    if not gb.basis:
        return None if f else [f.ring.zero() for _ in gb.gens]
    quots, rem = divide(f, gb.basis)
    if not rem.is_zero():
        return None
    ring = f.ring
    out = [ring.zero() for _ in gb.gens]
    for q, cof in zip(quots, gb.cofactors):
        if q.is_zero():
            continue
        for k in range(len(out)):
            out[k] = out[k] + q * cof[k]
    return out


def ideal_power_generators(gens, m):
    """All degree-m products of the generators, deduplicated."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return list(gens)
    out = []
    seen = set()
    for combo in itertools.combinations_with_replacement(range(len(gens)), m):
        prod = gens[combo[0]]
        for i in combo[1:]:
            prod = prod * gens[i]
        k = prod.key()
        if prod.is_zero() or k in seen:
            continue
        seen.add(k)
        out.append(prod)
    return out


def power_products(gens, m):
    """Like ideal_power_generators but keeps the factor multisets.

    Returns (products, index) where ``index`` maps each factor multiset
    (sorted tuple of generator indices) to the position of its
    deduplicated product in ``products``.
    """
    products = []
    index = {}
    seen = {}
    for combo in itertools.combinations_with_replacement(range(len(gens)), m):
        prod = gens[combo[0]]
        for i in combo[1:]:
            prod = prod * gens[i]
        if prod.is_zero():
            continue
        k = prod.key()
        if k not in seen:
            seen[k] = len(products)
            products.append(prod)
        index[combo] = seen[k]
    return products, index


class PresentedAlgebra:
    """Finitely presented commutative algebra with a cached Groebner basis.

    Immutable after construction; the reduced basis is computed once.
    ``weights`` install the presentation weight of each variable (used
    for truncation caps and, through the ring order, normal forms).
    """

    def __init__(self, ring, relations, weights=None,
                 max_pairs=DEFAULT_MAX_PAIRS, max_degree=DEFAULT_MAX_DEGREE):
        if weights is not None:
            ring = PolyRing(ring.vars, ring.ctx, weights=tuple(weights))
        self.ring = ring
        self.weights = ring.weights if ring.weights is not None else (1,) * len(ring.vars)
        self.relations = [r if r.ring == ring else r.copy_to(ring) for r in relations]
        self.gb = groebner(self.relations, max_pairs=max_pairs, max_degree=max_degree)
        self.lead_monos = self.gb.leading_monomials()
        self._nf_cache = {}
        for r in self.relations:
            if not self.normal_form(r).is_zero():
                raise AssertionError("relation does not normalize to zero")

    def normal_form(self, f):
        if f.ring != self.ring:
            f = f.copy_to(self.ring)
        if not self.gb.basis:
            return f
        key = f.key()
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        _, rem = divide(f, self.gb.basis)
        if len(self._nf_cache) < 200_000:
            self._nf_cache[key] = rem
        return rem

    def is_zero_in_quotient(self, f):
        return self.normal_form(f).is_zero()

    def std_monomials(self, max_weight):
        """Monomials below every GB leading monomial, weight <= max_weight.

        A weight-0 variable must be bounded by a pure-power leading
        monomial (eliminated by the basis), otherwise the enumeration
        would be infinite.
        """
        n = len(self.ring.vars)
        w = self.weights
        zero_caps = {}
        for i in range(n):
            if w[i] == 0:
                caps = [lm[i] for lm in self.lead_monos
                        if lm[i] > 0 and all(lm[j] == 0 for j in range(n) if j != i)]
                if not caps:
                    raise ValueError(
                        f"weight-0 variable {self.ring.vars[i]!r} is not eliminated")
                zero_caps[i] = min(caps) - 1
        out = []
        mono = [0] * n

        def rec(i, budget):
            if i == n:
                m = tuple(mono)
                if not any(mono_divides(lm, m) for lm in self.lead_monos):
                    out.append(m)
                return
            emax = zero_caps[i] if w[i] == 0 else budget // w[i]
            for e in range(emax + 1):
                mono[i] = e
                rec(i + 1, budget - e * w[i])
            mono[i] = 0

        rec(0, max_weight)
        out.sort(key=self.ring.keyfun)
        return out

    def is_graded(self):
        """True when every relation is homogeneous for the weights."""
        for r in self.relations:
            degs = {sum(e * w for e, w in zip(m, self.weights)) for m in r.terms}
            if len(degs) > 1:
                return False
        return True

    def __repr__(self):
        rels = ", ".join(r.to_text() for r in self.relations) or "0"
        return f"PresentedAlgebra(K[{', '.join(self.ring.vars)}]/({rels}))"


def algebra_over(p, variables, relation_texts=(), weights=None, prec=12):
    """Convenience constructor over the exact rational backend."""
    ring = PolyRing(variables, ScalarContext(p, "rational", prec))
    rels = [ring.parse(t) for t in relation_texts]
    return PresentedAlgebra(ring, rels, weights=weights)
