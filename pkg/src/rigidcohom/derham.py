"""De Rham complexes of presented algebras and rigid Betti numbers.

A truncated de Rham complex is built from a presented algebra: degree-l
forms are spanned by (standard monomial) * dz_I over all variables
(including tube auxiliaries), modulo rows generated by the relation
differentials.  Truncation is weight-aware: a basis form m*dz_I is kept
when wdeg(m) + wsum(I) <= cap + l, where variables carry their
presentation weights.  Exterior derivative, normal forms and tube
transitions all preserve that weight, so capped complexes compose
exactly and transition maps are honest chain maps.

Homology is read on an inner window (weight cap reduced by a slack
derived from the relation degrees) with boundaries taken from the full
truncation; without the window, the truncated Poincare lemma fails at
the very top degree and every complex would grow a spurious class.
Dimensions are reported per truncation cell and flagged as stabilized
only when a full window of cells agrees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .homalg import (BettiReport, ChainMap, FiniteComplex, ProComplex,
                     RowReducer, SMatrix, holim, in_column_span)
from .polyalg import PolyRing, PresentedAlgebra, ideal_power_generators
from .scalars import ScalarContext
from .tubes import AlgebraHom, TubeSystem


def _lift_to(ring, text):
    """Parse a base-variable polynomial inside the enlarged level ring."""
    return ring.parse(text)


def _wedge_left(i, tup):
    """dz_i wedge dz_tup; returns (sorted tuple, sign) or (None, 0)."""
    if i in tup:
        return None, 0
    smaller = sum(1 for t in tup if t < i)
    out = tuple(sorted(tup + (i,)))
    return out, -1 if smaller % 2 else 1


def _wedge_right(tup, k):
    """dz_tup wedge dz_k; returns (sorted tuple, sign) or (None, 0)."""
    if k in tup:
        return None, 0
    larger = sum(1 for t in tup if t > k)
    out = tuple(sorted(tup + (k,)))
    return out, -1 if larger % 2 else 1


class DeRhamComplex:
    """Truncated de Rham complex of a presented algebra over K."""

    def __init__(self, algebra, cap, max_form_degree=None):
        self.algebra = algebra
        self.cap = cap
        ring = algebra.ring
        self.nvars = len(ring.vars)
        self.weights = algebra.weights
        self.max_form = self.nvars if max_form_degree is None else min(
            max_form_degree, self.nvars)
        self.window_slack = max(
            [2] + [r.weighted_degree() for r in algebra.gb.basis])
        extra = sum(1 for w in self.weights if w == 0)
        self._std = algebra.std_monomials(cap + extra)
        self._wdeg = {m: sum(e * w for e, w in zip(m, self.weights))
                      for m in self._std}
        self._one = algebra.ring.ctx.one()
        self._partials = [[algebra.normal_form(f.derivative(i))
                           for i in range(self.nvars)]
                          for f in algebra.gb.basis]
        self._piece_cache = {}
        self.columns = {}
        self.col_index = {}
        self.qbasis = {}
        self.qindex = {}
        self.reducers = {}
        self._build_columns()
        self._build_quotients()
        self._complex = self._build_complex()

    # -- construction ---------------------------------------------------

    def _wsum(self, tup):
        return sum(self.weights[i] for i in tup)

    def _subsets(self, size):
        return itertools.combinations(range(self.nvars), size)

    def _build_columns(self):
        for l in range(self.max_form + 1):
            cols = []
            for tup in self._subsets(l):
                allow = self.cap + l - self._wsum(tup)
                for m in self._std:
                    if self._wdeg[m] <= allow:
                        cols.append((m, tup))
            cols.sort(key=lambda c: (self._wdeg[c[0]] + self._wsum(c[1]),
                                     c[1], self.algebra.ring.keyfun(c[0])))
            self.columns[l] = cols
            self.col_index[l] = {c: i for i, c in enumerate(cols)}

    def _expand(self, coeff_poly, tup, l, sign=1):
        """Sparse vector of a form (coefficient already normal)."""
        out = {}
        idx = self.col_index[l]
        for mono, c in coeff_poly.terms.items():
            col = idx.get((mono, tup))
            if col is None:
                raise ValueError("form escapes the truncation cap")
            v = c if sign == 1 else -c
            cur = out.get(col)
            nv = v if cur is None else cur + v
            if nv.is_zero():
                out.pop(col, None)
            else:
                out[col] = nv
        return out

    def _piece(self, fi, i, m):
        """NF(m * df_fi/dz_i), cached across form degrees and subsets."""
        key = (fi, i, m)
        hit = self._piece_cache.get(key)
        if hit is None:
            part = self._partials[fi][i]
            hit = part if part.is_zero() else self.algebra.normal_form(
                part.term_mul(m, self._one))
            self._piece_cache[key] = hit
        return hit

    def _relation_rows(self, l):
        """Rows m' * d(f) wedge dz_I with every term inside the cap."""
        rows = []
        if l == 0:
            return rows
        nonzero_dirs = [
            [i for i in range(self.nvars) if not self._partials[fi][i].is_zero()]
            for fi in range(len(self._partials))]
        for tup in self._subsets(l - 1):
            base_allow = self.cap + l - self._wsum(tup)
            tupset = set(tup)
            for fi in range(len(self._partials)):
                dirs = [i for i in nonzero_dirs[fi] if i not in tupset]
                if not dirs:
                    continue
                for m in self._std:
                    if self._wdeg[m] > base_allow:
                        continue
                    row = {}
                    ok = True
                    for i in dirs:
                        coeff = self._piece(fi, i, m)
                        if coeff.is_zero():
                            continue
                        new_tup, sign = _wedge_left(i, tup)
                        for mo, c in coeff.terms.items():
                            col = self.col_index[l].get((mo, new_tup))
                            if col is None:
                                ok = False
                                break
                            v = c if sign == 1 else -c
                            cur = row.get(col)
                            nv = v if cur is None else cur + v
                            if nv.is_zero():
                                row.pop(col, None)
                            else:
                                row[col] = nv
                        if not ok:
                            break
                    if ok and row:
                        rows.append(row)
        return rows

    def _build_quotients(self):
        for l in range(self.max_form + 1):
            red = RowReducer()
            for row in self._relation_rows(l):
                red.add(row)
            self.reducers[l] = red
            qb = [i for i in range(len(self.columns[l])) if i not in red.pivots]
            self.qbasis[l] = qb
            self.qindex[l] = {c: k for k, c in enumerate(qb)}

    def _reduce_to_coords(self, vec, l):
        red = self.reducers[l].reduce(vec)
        out = {}
        qi = self.qindex[l]
        for col, v in red.items():
            if v.is_zero():
                continue
            out[qi[col]] = v
        return out

    def _build_complex(self):
        ctx = self.algebra.ring.ctx
        dims = {}
        for l in range(self.max_form + 1):
            if self.qbasis[l]:
                dims[-l] = len(self.qbasis[l])
        bnds = {}
        for l in range(self.max_form):
            if not dims.get(-l) or not dims.get(-l - 1):
                continue
            M = SMatrix(dims[-l - 1], dims[-l], ctx)
            for k, col in enumerate(self.qbasis[l]):
                mono, tup = self.columns[l][col]
                vec = self._d_of_column(mono, tup, l)
                for i, v in self._reduce_to_coords(vec, l + 1).items():
                    M.add_to(i, k, v)
            bnds[-l] = M
        return FiniteComplex(dims, bnds, ctx)

    def _d_of_column(self, mono, tup, l):
        A = self.algebra
        vec = {}
        mono_poly = A.ring.monomial(mono)
        for i in range(self.nvars):
            if i in tup:
                continue
            part = A.normal_form(mono_poly.derivative(i))
            if part.is_zero():
                continue
            new_tup, sign = _wedge_left(i, tup)
            for mo, c in part.terms.items():
                col = self.col_index[l + 1].get((mo, new_tup))
                if col is None:
                    raise AssertionError("exterior derivative escaped the cap")
                v = c if sign == 1 else -c
                cur = vec.get(col)
                nv = v if cur is None else cur + v
                if nv.is_zero():
                    vec.pop(col, None)
                else:
                    vec[col] = nv
        return vec

    # -- public API -------------------------------------------------------

    @property
    def complex(self):
        return self._complex

    def form_degree_dim(self, l):
        return len(self.qbasis.get(l, []))

    def form_coords(self, pieces, l):
        """Quotient coordinates of sum of (coefficient poly, var-name tuple).

        The name tuple is read as an ordered wedge; sorting it into the
        canonical basis contributes the antisymmetry sign.
        """
        vec = {}
        for poly, names in pieces:
            raw = [self.algebra.ring.vars.index(n) for n in names]
            if len(set(raw)) != len(raw):
                continue
            if len(raw) != l:
                raise ValueError("wrong form degree")
            sign = 1
            tup = ()
            for i in raw:
                tup, s = _wedge_right(tup, i)
                sign *= s
            nf = self.algebra.normal_form(poly)
            for col, v in self._expand(nf, tup, l, sign).items():
                cur = vec.get(col)
                nv = v if cur is None else cur + v
                if nv.is_zero():
                    vec.pop(col, None)
                else:
                    vec[col] = nv
        return self._reduce_to_coords(vec, l)

    def window_positions(self, l, inner_cap):
        out = []
        for k, col in enumerate(self.qbasis.get(l, [])):
            mono, tup = self.columns[l][col]
            if self._wdeg[mono] + self._wsum(tup) <= inner_cap + l:
                out.append(k)
        return out

    def windows(self, inner_cap):
        return {-l: self.window_positions(l, inner_cap)
                for l in range(self.max_form + 1)}

    def betti_window(self, inner_cap=None, slack=4):
        if inner_cap is None:
            inner_cap = max(0, self.cap - self.window_slack)
        dims = self.complex.homology_dims_window(self.windows(inner_cap),
                                                 slack=slack)
        return {-n: d for n, d in dims.items()}


def de_rham_complex(algebra, params, max_form_degree=None):
    """Truncated de Rham complex at the params degree cap."""
    return DeRhamComplex(algebra, params.degree_cap,
                         max_form_degree=max_form_degree)


def chain_map_from_hom(hom, src, dst):
    """Chain map between de Rham complexes induced by an algebra map."""
    ring = dst.algebra.ring
    images_d = []
    for i, v in enumerate(hom.source.ring.vars):
        img = hom.images[v]
        img = img if img.ring == ring else img.copy_to(ring)
        one_form = []
        for k in range(dst.nvars):
            c = dst.algebra.normal_form(img.derivative(k))
            if not c.is_zero():
                one_form.append((c, k))
        images_d.append(one_form)
    mats = {}
    ctx = ring.ctx
    for l in range(src.max_form + 1):
        if not src.qbasis.get(l):
            continue
        M = SMatrix(dst.form_degree_dim(l), len(src.qbasis[l]), ctx)
        for kcol, col in enumerate(src.qbasis[l]):
            mono, tup = src.columns[l][col]
            base = dst.algebra.normal_form(
                src.algebra.ring.monomial(mono).substitute(ring, hom.images))
            terms = [(base, (), 1)]
            for i in tup:
                nxt = []
                for coeff, out_tup, sign in terms:
                    for c, k in images_d[i]:
                        new_tup, s2 = _wedge_right(out_tup, k)
                        if new_tup is None:
                            continue
                        prod = dst.algebra.normal_form(coeff * c)
                        if prod.is_zero():
                            continue
                        nxt.append((prod, new_tup, sign * s2))
                terms = nxt
            vec = {}
            for coeff, out_tup, sign in terms:
                for colid, v in dst._expand(coeff, out_tup, l, sign).items():
                    cur = vec.get(colid)
                    nv = v if cur is None else cur + v
                    if nv.is_zero():
                        vec.pop(colid, None)
                    else:
                        vec[colid] = nv
            for i, v in dst._reduce_to_coords(vec, l).items():
                M.add_to(i, kcol, v)
        mats[-l] = M
    return ChainMap(src.complex, dst.complex, mats)


@dataclass
class ResiduePresentation:
    """Finitely presented commutative algebra over the residue field.

    Lifted to V[variables] with the relation polynomials read as
    integer polynomials; the presentation ideal is (relations, p).
    """

    p: int
    variables: list
    relations: list = field(default_factory=list)
    prec: int = 12

    def lift_ring(self):
        return PolyRing(tuple(self.variables),
                        ScalarContext(self.p, "rational", self.prec))

    def j_generators(self):
        ring = self.lift_ring()
        gens = [ring.parse(t) for t in self.relations]
        for g in gens:
            if any(c.valuation() < 0 for c in g.terms.values()):
                raise ValueError(
                    f"relation {g.to_text()!r} has a p in a denominator; "
                    "residue-field relations must lift integrally")
        return gens + [ring.const(self.p)]


class RigidComplexBuilder:
    """Levels, transitions and homotopy limits for one presentation.

    Level algebras are the tube presentations with the lifted relation
    polynomials imposed: the de Rham complex of S_m/(relations), the
    finite model in which the classical classes (dt/t and friends) are
    closed at every cap.  On the free tube presentation those classes
    only exist after weak completion and no finite truncation sees
    them.
    """

    def __init__(self, presentation, params, lift_order="grevlex"):
        self.presentation = presentation
        self.params = params
        self.system = TubeSystem(presentation.j_generators(), params.level_cap,
                                 lift_order=lift_order,
                                 max_pairs=params.max_pairs,
                                 max_degree=params.max_degree)
        self._levels = {}
        self._drc = {}
        self._maps = {}

    def level_algebra(self, m):
        if m not in self._levels:
            level = self.system.level(m)
            ring = level.algebra.ring
            extra = [_lift_to(ring, t) for t in self.presentation.relations]
            self._levels[m] = PresentedAlgebra(
                ring, level.algebra.relations + extra,
                weights=level.algebra.weights,
                max_pairs=self.params.max_pairs,
                max_degree=self.params.max_degree)
        return self._levels[m]

    def level_complex(self, m, cap):
        key = (m, cap)
        if key not in self._drc:
            # H^l is reported for l <= max(2, #variables); the holim
            # boundary at the top reported degree reaches one form
            # degree higher, nothing beyond ever enters a rank.
            top = max(2, len(self.presentation.variables)) + 1
            self._drc[key] = DeRhamComplex(self.level_algebra(m), cap,
                                           max_form_degree=top)
        return self._drc[key]

    def transition_map(self, m, cap):
        """Chain map: level m+1 complex -> level m complex at this cap."""
        key = (m, cap)
        if key not in self._maps:
            hom = self.system.transition(m)
            src = self.level_complex(m + 1, cap)
            dst = self.level_complex(m, cap)
            descended = AlgebraHom(src.algebra, dst.algebra, hom.images,
                                   check=True)
            cm = chain_map_from_hom(descended, src, dst)
            if not cm.is_chain_map():
                raise AssertionError("tube transition is not a chain map")
            self._maps[key] = cm
        return self._maps[key]

    def pro_complex(self, m_max, cap):
        levels = [self.level_complex(m, cap).complex for m in range(1, m_max + 1)]
        trans = [self.transition_map(m, cap) for m in range(1, m_max)]
        return ProComplex(levels, trans)

    def holim_with_windows(self, m_max, cap):
        pro = self.pro_complex(m_max, cap)
        total, blocks = holim(pro)
        inner = {m: max(0, cap - self.level_complex(m, cap).window_slack)
                 for m in range(1, m_max + 1)}
        windows = {}
        for n in total.degrees():
            coords = []
            for m in range(1, m_max + 1):
                drc = self.level_complex(m, cap)
                off = blocks.offsets_x.get((n, m - 1))
                if off is not None and drc.complex.dim(n):
                    coords.extend(off + k
                                  for k in drc.window_positions(-n, inner[m]))
            for m in range(1, m_max):
                drc = self.level_complex(m, cap)
                off = blocks.offsets_y.get((n, m - 1))
                if off is not None and drc.complex.dim(n + 1):
                    coords.extend(off + k
                                  for k in drc.window_positions(-(n + 1), inner[m]))
            windows[n] = coords
        return total, windows

    def report_degrees(self):
        return list(range(0, max(2, len(self.presentation.variables)) + 1))


def rigid_de_rham(presentation, params, d_list=None, lift_order="grevlex",
                  slack=4):
    """Homotopy limit of the tube de Rham tower with stabilized Betti dims."""
    d_list = list(d_list) if d_list is not None else [params.degree_cap]
    builder = RigidComplexBuilder(presentation, params, lift_order=lift_order)
    degrees = builder.report_degrees()
    table = {}
    for cap in d_list:
        for m in range(1, params.level_cap + 1):
            total, windows = builder.holim_with_windows(m, cap)
            dims = total.homology_dims_window(windows, slack=slack)
            table[(cap, m)] = {l: dims.get(-l, 0) for l in degrees}
    top = max(d_list)
    window_info = {
        "policy": "inner cap = degree cap minus max relation weight (>= 2)",
        "slack_per_level": {str(m): builder.level_complex(m, top).window_slack
                            for m in range(1, params.level_cap + 1)},
    }
    report = BettiReport(table, window=window_info, degrees=degrees,
                         stab_window=params.stab_window)
    return report, builder


def tube_de_rham_level(presentation, m, params, lift_order="grevlex"):
    """Level-m tube de Rham complex of a residue-field presentation."""
    builder = RigidComplexBuilder(presentation, params, lift_order=lift_order)
    return builder.level_complex(m, params.degree_cap)


def infinitesimal_complex(p, variables, j_relations, order, params,
                          max_form_degree=None):
    """De Rham complex of P/J^order over the exact rationals.

    P is the polynomial ring on ``variables`` over characteristic-zero
    scalars, J is generated by ``j_relations``; the J-adic truncation is
    modelled by the relation ideal J^order.  Homology should be read on
    the window below the truncation horizon (weight <= order - 2).
    """
    ring = PolyRing(tuple(variables), ScalarContext(p, "rational", params.prec))
    j_gens = [ring.parse(t) for t in j_relations]
    relations = ideal_power_generators(j_gens, order)
    algebra = PresentedAlgebra(ring, relations)
    cap = max(params.degree_cap, order)
    drc = DeRhamComplex(algebra, cap, max_form_degree=max_form_degree)
    return drc


def infinitesimal_betti(p, variables, j_relations, order, params):
    """Window homology of the J-adic truncation model."""
    drc = infinitesimal_complex(p, variables, j_relations, order, params)
    inner = max(0, order - 2)
    dims = drc.complex.homology_dims_window(drc.windows(inner))
    return {-n: d for n, d in dims.items()}


def not_exact_at_every_cap(presentation, params, d_list, piece, form_degree=1):
    """Check a 1-form class survives: never in im(d) at any cap/level.

    ``piece`` is (coefficient text, variable names tuple); membership in
    the image of the exterior derivative is decided by an exact rank
    comparison in each level complex at each cap.
    """
    results = []
    builder = RigidComplexBuilder(presentation, params)
    for cap in d_list:
        for m in range(1, params.level_cap + 1):
            drc = builder.level_complex(m, cap)
            coeff = drc.algebra.ring.parse(piece[0])
            coords = drc.form_coords([(coeff, piece[1])], form_degree)
            d_prev = drc.complex.boundary(-(form_degree - 1))
            hit = in_column_span(d_prev, coords)
            results.append({"cap": cap, "level": m, "in_image": hit})
    return results
