"""Valuation-aware exact linear algebra, chain complexes, homotopy limits.

Matrices are sparse (dict-of-rows) over either scalar backend.  The
rational backend is exact; the p-adic backend pivots by minimal
valuation and certifies every rank: a rank is *certified* when all
accepted pivots sit well below the working precision and every column
that was declared dependent cancelled to at least ``prec - slack``
digits.  Uncertifiable eliminations raise :class:`PrecisionError`
("precision exhausted") rather than returning a guess.

Chain complexes use homological indexing (the boundary lowers degree);
cochain complexes such as de Rham complexes live in non-positive
degrees via ``n = -form_degree``.  The homotopy limit of a finite tower
is the mapping cone, shifted by one, of

    F : prod_{m<=M} C(m)  -->  prod_{m<=M-1} C(m),
    F(x)_m = x_m - transition_m(x_{m+1}),

whose homology long exact sequence yields the lim / lim^1 bookkeeping
identity dim H_n(holim) = dim lim H_n + dim lim^1 H_{n+1}, tested
exactly at every truncation.
"""

from __future__ import annotations

from .scalars import INF, PrecisionError


class StructuralError(ValueError):
    """Shape mismatch between complexes / chain maps."""


class SMatrix:
    """Sparse matrix; ``rows[i][j]`` holds nonzero scalars only."""

    __slots__ = ("nrows", "ncols", "rows", "ctx")

    def __init__(self, nrows, ncols, ctx, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.ctx = ctx
        self.rows = rows if rows is not None else {}

    @classmethod
    def from_entries(cls, nrows, ncols, ctx, entries):
        """entries: iterable of (i, j, scalar-or-number)."""
        m = cls(nrows, ncols, ctx)
        for i, j, v in entries:
            m.add_to(i, j, ctx.make(v))
        return m

    @classmethod
    def identity(cls, n, ctx):
        return cls.from_entries(n, n, ctx, ((i, i, 1) for i in range(n)))

    def add_to(self, i, j, v):
        if v.is_zero():
            return
        row = self.rows.setdefault(i, {})
        cur = row.get(j)
        s = v if cur is None else cur + v
        if s.is_zero():
            row.pop(j, None)
            if not row:
                del self.rows[i]
        else:
            row[j] = s

    def entry(self, i, j):
        return self.rows.get(i, {}).get(j, self.ctx.zero())

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def is_zero(self):
        return all(not r for r in self.rows.values())

    def columns(self):
        cols = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                cols.setdefault(j, {})[i] = v
        return cols

    def apply(self, vec):
        """Matrix times sparse vector (dict col -> Scalar)."""
        out = {}
        for i, row in self.rows.items():
            acc = None
            for j, v in row.items():
                c = vec.get(j)
                if c is None or c.is_zero():
                    continue
                t = v * c
                acc = t if acc is None else acc + t
            if acc is not None and not acc.is_zero():
                out[i] = acc
        return out

    def compose(self, other):
        """self @ other."""
        if self.ncols != other.nrows:
            raise StructuralError("matrix shapes do not compose")
        out = SMatrix(self.nrows, other.ncols, self.ctx)
        ocols = other.columns()
        for j, col in ocols.items():
            res = self.apply(col)
            for i, v in res.items():
                out.add_to(i, j, v)
        return out

    def __sub__(self, other):
        out = SMatrix(self.nrows, self.ncols, self.ctx)
        for i, row in self.rows.items():
            for j, v in row.items():
                out.add_to(i, j, v)
        for i, row in other.rows.items():
            for j, v in row.items():
                out.add_to(i, j, -v)
        return out

    def scale(self, c):
        c = self.ctx.make(c)
        out = SMatrix(self.nrows, self.ncols, self.ctx)
        for i, row in self.rows.items():
            for j, v in row.items():
                out.add_to(i, j, v * c)
        return out

    def map_scalars(self, ctx, normalize_rows=False):
        """Convert entries into another backend.

        ``normalize_rows`` scales each row to minimal valuation 0 first
        (rank/kernel are unchanged); this keeps p-adic certificates
        comparable with the working precision.
        """
        out = SMatrix(self.nrows, self.ncols, ctx)
        for i, row in self.rows.items():
            shift = 0
            if normalize_rows and row:
                vals = [v.valuation() for v in row.values()]
                shift = -min(vals)
            for j, v in row.items():
                q = v.to_rational().frac
                if shift:
                    q = q * ctx.p ** shift
                out.add_to(i, j, ctx.make(q))
        return out

    def to_json_dict(self):
        entries = []
        for i in sorted(self.rows):
            for j in sorted(self.rows[i]):
                v = self.rows[i][j].to_rational().frac
                entries.append([i, j, f"{v.numerator}/{v.denominator}"])
        return {"nrows": self.nrows, "ncols": self.ncols, "entries": entries}

    def __repr__(self):
        return f"SMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


class RankResult:
    """Rank with kernel/image bases and a pivot-valuation certificate."""

    __slots__ = ("rank", "kernel", "image", "pivot_vals", "zero_bound_min",
                 "backend", "certified")

    def __init__(self, rank, kernel, image, pivot_vals, zero_bound_min,
                 backend, certified):
        self.rank = rank
        self.kernel = kernel
        self.image = image
        self.pivot_vals = pivot_vals
        self.zero_bound_min = zero_bound_min
        self.backend = backend
        self.certified = certified

    def certificate(self):
        worst = max(self.pivot_vals) if self.pivot_vals else None
        bound = None if self.zero_bound_min is INF else self.zero_bound_min
        return {"backend": self.backend, "pivots": len(self.pivot_vals),
                "max_pivot_valuation": worst, "min_rejection_bound": bound,
                "certified": self.certified}


def rank_kernel_image(M, slack=4, want_kernel=True):
    """Column-echelon elimination with kernel combinations.

    Rational backend: exact.  P-adic backend: pivots by minimal
    valuation; raises :class:`PrecisionError` when a pivot or a
    rejected column sits within ``slack`` digits of the precision.
    """
    ctx = M.ctx
    padic = ctx.backend == "padic"
    prec = ctx.prec
    cols = M.columns()
    echelon = []  # (pivrow, vec, comb)
    kernel = []
    pivot_vals = []
    zero_bound_min = INF
    one = ctx.one()
    for c in range(M.ncols):
        w = dict(cols.get(c, {}))
        comb = {c: one} if want_kernel else None
        for pr, vec, cb in echelon:
            coeff = w.get(pr)
            if coeff is None or coeff.is_zero():
                continue
            del w[pr]
            for r2, v2 in vec.items():
                if r2 == pr:
                    continue
                cur = w.get(r2)
                nv = -(coeff * v2) if cur is None else cur - coeff * v2
                if nv.is_zero():
                    if cur is not None:
                        del w[r2]
                    if padic and not nv.is_exact_zero():
                        w[r2] = nv  # keep the uncertainty for later updates
                else:
                    w[r2] = nv
            if want_kernel:
                for c2, v2 in cb.items():
                    cur = comb.get(c2)
                    nv = -(coeff * v2) if cur is None else cur - coeff * v2
                    if nv.is_zero() and cur is not None:
                        del comb[c2]
                    elif not nv.is_zero():
                        comb[c2] = nv
        live = {r: v for r, v in w.items() if not v.is_zero()}
        bounds = [v.valuation_lower_bound() for v in w.values()
                  if v.is_zero() and not v.is_exact_zero()]
        if not live:
            if bounds:
                zero_bound_min = min(zero_bound_min, min(bounds))
            if want_kernel:
                kernel.append(comb)
            continue
        if padic:
            pr = min(live, key=lambda r: (live[r].valuation(), r))
        else:
            pr = min(live)
        pv = live[pr].valuation()
        if padic and pv > prec - slack:
            raise PrecisionError(
                f"precision exhausted: pivot valuation {pv} within {slack} of {prec}")
        pivot_vals.append(pv)
        inv = live[pr].invert()
        vec = {r: v * inv for r, v in live.items()}
        cb = {c2: v * inv for c2, v in comb.items()} if want_kernel else None
        echelon.append((pr, vec, cb))
    certified = (not padic) or zero_bound_min >= prec - slack
    if padic and not certified:
        raise PrecisionError(
            f"precision exhausted: rejected column bound {zero_bound_min} "
            f"within {slack} of {prec}")
    image = [vec for _, vec, _ in echelon]
    return RankResult(len(echelon), kernel if want_kernel else None, image,
                      pivot_vals, zero_bound_min, ctx.backend, certified)


def rank(M, slack=4):
    return rank_kernel_image(M, slack=slack, want_kernel=False).rank


def in_column_span(M, vec, slack=4):
    """Exact membership of a sparse vector in the column space of M."""
    aug = SMatrix(M.nrows, M.ncols + 1, M.ctx)
    for i, row in M.rows.items():
        for j, v in row.items():
            aug.add_to(i, j, v)
    for i, v in vec.items():
        aug.add_to(i, M.ncols, v)
    return rank(aug, slack=slack) == rank(M, slack=slack)


class RowReducer:
    """Incremental row-space echelon with a fixed column priority.

    Every stored row is normalized so its pivot (the maximal column of
    its support under ``colkey``) has coefficient one; reducing a vector
    eliminates pivot columns in descending key order, which terminates
    because substitution only introduces strictly smaller columns.
    Rational backend only.
    """

    def __init__(self, colkey=None):
        self.colkey = colkey if colkey is not None else (lambda c: c)
        self.pivots = {}  # pivcol -> row dict

    def reduce(self, vec):
        out = dict(vec)
        while True:
            hits = [c for c in out if c in self.pivots]
            if not hits:
                return out
            c = max(hits, key=self.colkey)
            coeff = out.pop(c)
            if coeff.is_zero():
                continue
            for c2, v2 in self.pivots[c].items():
                if c2 == c:
                    continue
                cur = out.get(c2)
                nv = -(coeff * v2) if cur is None else cur - coeff * v2
                if nv.is_zero():
                    if cur is not None:
                        del out[c2]
                else:
                    out[c2] = nv

    def add(self, vec):
        """Insert a row; returns True if it enlarged the span."""
        r = self.reduce(vec)
        r = {c: v for c, v in r.items() if not v.is_zero()}
        if not r:
            return False
        piv = max(r, key=self.colkey)
        inv = r[piv].invert()
        self.pivots[piv] = {c: v * inv for c, v in r.items()}
        return True

    def rank(self):
        return len(self.pivots)


class FiniteComplex:
    """Bounded chain complex; ``boundaries[n]``: C_n -> C_{n-1}."""

    def __init__(self, dims, boundaries, ctx):
        self.dims = {n: d for n, d in dims.items() if d > 0}
        self.boundaries = {}
        for n, M in boundaries.items():
            if M.nrows != dims.get(n - 1, 0) or M.ncols != dims.get(n, 0):
                raise StructuralError(f"boundary at degree {n} has wrong shape")
            self.boundaries[n] = M
        self.ctx = ctx

    def dim(self, n):
        return self.dims.get(n, 0)

    def boundary(self, n):
        M = self.boundaries.get(n)
        if M is None:
            M = SMatrix(self.dim(n - 1), self.dim(n), self.ctx)
        return M

    def degrees(self):
        return sorted(self.dims)

    def check_dd_zero(self):
        for n in self.degrees():
            if self.dim(n + 1) and self.dim(n) and self.dim(n - 1):
                if not self.boundary(n).compose(self.boundary(n + 1)).is_zero():
                    return False
        return True

    def homology_dims(self, slack=4):
        """dim H_n = dim ker d_n - rank d_{n+1}, per populated degree."""
        out = {}
        rk = {}
        for n in self.degrees():
            for k in (n, n + 1):
                if k not in rk:
                    rk[k] = rank(self.boundary(k), slack=slack) if self.dim(k) else 0
            out[n] = (self.dim(n) - rk[n]) - rk[n + 1]
        return out

    def homology_dims_window(self, windows, slack=4):
        """Homology measured on a sub-window of coordinates.

        ``windows[n]`` is a list of coordinate indices of C_n.  Returns
        dim(ker d_n ∩ W_n) - dim(im d_{n+1} ∩ W_n); boundaries are taken
        from the full complex, so window classes hit from anywhere in
        the ambient truncation are discarded.
        """
        out = {}
        for n in self.degrees():
            W = windows.get(n, [])
            if not W:
                out[n] = 0
                continue
            wset = set(W)
            dn = self.boundary(n)
            sub = SMatrix(dn.nrows, len(W), self.ctx)
            for k, j in enumerate(W):
                for i, row in dn.rows.items():
                    v = row.get(j)
                    if v is not None:
                        sub.add_to(i, k, v)
            ker_w = len(W) - (rank(sub, slack=slack) if self.dim(n - 1) else 0)
            dn1 = self.boundary(n + 1)
            if self.dim(n + 1) == 0 or dn1.is_zero():
                im_w = 0
            else:
                outside = SMatrix(dn1.nrows, dn1.ncols, self.ctx)
                for i, row in dn1.rows.items():
                    if i in wset:
                        continue
                    for j, v in row.items():
                        outside.add_to(i, j, v)
                im_w = rank(dn1, slack=slack) - rank(outside, slack=slack)
            out[n] = ker_w - im_w
        return out

    def map_scalars(self, ctx, normalize_rows=True):
        dims = dict(self.dims)
        bnds = {n: M.map_scalars(ctx, normalize_rows=normalize_rows)
                for n, M in self.boundaries.items()}
        return FiniteComplex(dims, bnds, ctx)

    def shift(self, k):
        """Degree shift: (C[k])_n = C_{n+k}; boundaries reindexed."""
        dims = {n - k: d for n, d in self.dims.items()}
        bnds = {n - k: M for n, M in self.boundaries.items()}
        return FiniteComplex(dims, bnds, self.ctx)


class ChainMap:
    """Degreewise matrices commuting with the boundaries."""

    def __init__(self, source, target, mats):
        self.source = source
        self.target = target
        self.mats = {}
        for n, M in mats.items():
            if M.ncols != source.dim(n) or M.nrows != target.dim(n):
                raise StructuralError(f"chain map block at degree {n} has wrong shape")
            self.mats[n] = M

    def mat(self, n):
        M = self.mats.get(n)
        if M is None:
            M = SMatrix(self.target.dim(n), self.source.dim(n), self.target.ctx)
        return M

    def is_chain_map(self):
        for n in self.source.degrees():
            lhs = self.target.boundary(n).compose(self.mat(n))
            rhs = self.mat(n - 1).compose(self.source.boundary(n))
            if not (lhs - rhs).is_zero():
                return False
        return True

    def compose(self, other):
        """self o other (other feeds into self)."""
        mats = {}
        for n in other.source.degrees():
            mats[n] = self.mat(n).compose(other.mat(n))
        return ChainMap(other.source, self.target, mats)


class ProComplex:
    """Finite tower of complexes; ``transitions[i]`` maps level i+2 -> level i+1."""

    def __init__(self, levels, transitions):
        if len(transitions) != max(len(levels) - 1, 0):
            raise StructuralError("need one transition per consecutive pair")
        for i, t in enumerate(transitions):
            if t.source is not levels[i + 1] or t.target is not levels[i]:
                raise StructuralError(f"transition {i} connects wrong levels")
        self.levels = levels
        self.transitions = transitions

    def truncate(self, m):
        return ProComplex(self.levels[:m], self.transitions[:m - 1])


class HolimBlocks:
    """Coordinate bookkeeping for the holim total complex."""

    def __init__(self, offsets_x, offsets_y):
        self.offsets_x = offsets_x  # (n, level_index) -> offset
        self.offsets_y = offsets_y


def holim(pro):
    """Homotopy limit of a finite tower: shifted mapping cone of 1 - shift.

    Degree n of the result is (prod_m C(m)_n) + (prod_{m<M} C(m)_{n+1})
    with boundary (x, y) -> (-dx, F(x) + dy), F(x)_m = x_m - t_m(x_{m+1}).
    """
    levels = pro.levels
    M = len(levels)
    if M == 0:
        raise StructuralError("empty tower")
    ctx = levels[0].ctx
    degrees = sorted({n for L in levels for n in L.degrees()})
    if not degrees:
        return FiniteComplex({}, {}, ctx), HolimBlocks({}, {})
    span = range(min(degrees) - 1, max(degrees) + 1)
    dims = {}
    offx = {}
    offy = {}
    for n in span:
        off = 0
        for m in range(M):
            offx[(n, m)] = off
            off += levels[m].dim(n)
        for m in range(M - 1):
            offy[(n, m)] = off
            off += levels[m].dim(n + 1)
        if off:
            dims[n] = off
    bnds = {}
    for n in span:
        if not dims.get(n) or not dims.get(n - 1):
            continue
        B = SMatrix(dims[n - 1], dims[n], ctx)
        for m in range(M):
            d = levels[m].boundary(n)
            for i, row in d.rows.items():
                for j, v in row.items():
                    B.add_to(offx[(n - 1, m)] + i, offx[(n, m)] + j, -v)
        for m in range(M - 1):
            # F identity block: x_m contributes to Y_m at degree n-1... see below
            for j in range(levels[m].dim(n)):
                B.add_to(offy[(n - 1, m)] + j, offx[(n, m)] + j, ctx.one())
            t = pro.transitions[m].mat(n)
            for i, row in t.rows.items():
                for j, v in row.items():
                    B.add_to(offy[(n - 1, m)] + i, offx[(n, m + 1)] + j, -v)
            d = levels[m].boundary(n + 1)
            for i, row in d.rows.items():
                for j, v in row.items():
                    B.add_to(offy[(n - 1, m)] + i, offy[(n, m)] + j, v)
        bnds[n] = B
    return FiniteComplex(dims, bnds, ctx), HolimBlocks(offx, offy)


class LimResult:
    """Kernel/cokernel dims of F plus the bottom-realized limit."""

    __slots__ = ("lim", "lim1", "lim_realized")

    def __init__(self, lim, lim1, lim_realized):
        self.lim = lim
        self.lim1 = lim1
        self.lim_realized = lim_realized


def lim_lim1(dims, transitions, ctx):
    """lim/lim^1 of a finite tower of vector spaces.

    ``dims``: dimensions of V_1..V_M; ``transitions[i]``: V_{i+2} -> V_{i+1}.
    Returns kernel and cokernel dimensions of F(x)_m = x_m - t_m(x_{m+1})
    (the quantities in the holim exact sequence) plus ``lim_realized``,
    the dimension of the image of ker F in the bottom level V_1 -- the
    Mittag-Leffler stabilized value.
    """
    M = len(dims)
    if M == 0:
        return LimResult(0, 0, 0)
    if M == 1:
        return LimResult(dims[0], 0, dims[0])
    colof = [0]
    for d in dims:
        colof.append(colof[-1] + d)
    rowof = [0]
    for d in dims[:-1]:
        rowof.append(rowof[-1] + d)
    F = SMatrix(rowof[-1], colof[-1], ctx)
    for m in range(M - 1):
        for j in range(dims[m]):
            F.add_to(rowof[m] + j, colof[m] + j, ctx.one())
        t = transitions[m]
        for i, row in t.rows.items():
            for j, v in row.items():
                F.add_to(rowof[m] + i, colof[m + 1] + j, -v)
    res = rank_kernel_image(F)
    lim = colof[-1] - res.rank
    lim1 = rowof[-1] - res.rank
    bottom = RowReducer()
    realized = 0
    for kvec in res.kernel:
        restricted = {c: v for c, v in kvec.items() if c < dims[0]}
        if restricted and bottom.add(restricted):
            realized += 1
    return LimResult(lim, lim1, realized)


class HomologySpace:
    """Basis of H_n with coordinates for arbitrary cycles (rational backend)."""

    def __init__(self, complex_, n, slack=4):
        self.complex = complex_
        self.ctx = complex_.ctx
        self.n = n
        cycles = (rank_kernel_image(complex_.boundary(n)).kernel
                  if complex_.dim(n) else [])
        img = (rank_kernel_image(complex_.boundary(n + 1)).image
               if complex_.dim(n + 1) else [])
        self.img_reducer = RowReducer()
        for v in img:
            self.img_reducer.add(v)
        self.reps = []
        self._piv = {}  # pivcol -> (echelon vec, combination over rep indices)
        for z in cycles:
            r, combo = self._reduce_against(self.img_reducer.reduce(z))
            if not r:
                continue
            piv = max(r)
            inv = r[piv].invert()
            vec = {c: v * inv for c, v in r.items()}
            # vec represents inv*(rep_new - sum combo_k rep_k) modulo image
            ecombo = {len(self.reps): inv}
            for k, v in combo.items():
                nv = -(inv * v)
                if not nv.is_zero():
                    ecombo[k] = nv
            self._piv[piv] = (vec, ecombo)
            self.reps.append(z)

    def _reduce_against(self, vec):
        out = {c: v for c, v in vec.items() if not v.is_zero()}
        combo = {}
        while True:
            hits = [c for c in out if c in self._piv]
            if not hits:
                return out, combo
            c = max(hits)
            coeff = out.pop(c)
            evec, ecombo = self._piv[c]
            for c2, v2 in evec.items():
                if c2 == c:
                    continue
                cur = out.get(c2)
                nv = -(coeff * v2) if cur is None else cur - coeff * v2
                if nv.is_zero():
                    if cur is not None:
                        del out[c2]
                else:
                    out[c2] = nv
            for k, v2 in ecombo.items():
                cur = combo.get(k)
                nv = coeff * v2 if cur is None else cur + coeff * v2
                if nv.is_zero():
                    if cur is not None:
                        del combo[k]
                else:
                    combo[k] = nv

    def dim(self):
        return len(self.reps)

    def coords(self, cycle):
        """Coordinates of a cycle's class in the stored basis."""
        rest, combo = self._reduce_against(self.img_reducer.reduce(cycle))
        if rest:
            raise StructuralError("vector is not a cycle modulo boundaries")
        return combo


def induced_homology_map(chain_map, n, src_h=None, dst_h=None):
    """Matrix of H_n(chain_map) in the chosen homology bases."""
    src_h = src_h if src_h is not None else HomologySpace(chain_map.source, n)
    dst_h = dst_h if dst_h is not None else HomologySpace(chain_map.target, n)
    M = SMatrix(dst_h.dim(), src_h.dim(), chain_map.target.ctx)
    for k, rep in enumerate(src_h.reps):
        img = chain_map.mat(n).apply(rep)
        for i, v in dst_h.coords(img).items():
            M.add_to(i, k, v)
    return M


def holim_bookkeeping(pro, degrees, slack=4):
    """Exact check of dim H_n(holim) = dim lim H_n + dim lim^1 H_{n+1}.

    Both sides are computed through independent code paths: the left on
    the assembled cone complex, the right from induced maps on the
    levelwise homology spaces.  Returns a per-degree report.
    """
    total, _ = holim(pro)
    hol_dims = total.homology_dims(slack=slack)
    spaces = {}
    for m, level in enumerate(pro.levels):
        for n in set(degrees) | {n + 1 for n in degrees}:
            spaces[(m, n)] = HomologySpace(level, n, slack=slack)
    report = {}
    for n in degrees:
        entry = {}
        for k in (n, n + 1):
            dims = [spaces[(m, k)].dim() for m in range(len(pro.levels))]
            trans = [induced_homology_map(pro.transitions[m], k,
                                          src_h=spaces[(m + 1, k)],
                                          dst_h=spaces[(m, k)])
                     for m in range(len(pro.levels) - 1)]
            entry[k] = lim_lim1(dims, trans, pro.levels[0].ctx)
        lhs = hol_dims.get(n, 0)
        rhs = entry[n].lim + entry[n + 1].lim1
        report[n] = {"holim": lhs, "lim": entry[n].lim,
                     "lim1_next": entry[n + 1].lim1, "ok": lhs == rhs}
    return report


class BettiReport:
    """Dimension tables over truncation cells with stabilization flags."""

    def __init__(self, table, window, degrees, stab_window):
        self.table = table  # (D, m) -> {degree: dim}
        self.window = window
        self.degrees = degrees
        self.stab_window = stab_window
        self.stabilized = {}
        self.certificates = {}
        d_list = sorted({d for d, _ in table})
        m_list = sorted({m for _, m in table})
        w = stab_window
        d_tail = d_list[-w:] if len(d_list) >= w else None
        m_tail = m_list[-w:] if len(m_list) >= w else None
        for deg in degrees:
            if d_tail is None or m_tail is None:
                self.stabilized[deg] = None
                continue
            vals = {table[(d, m)].get(deg, 0) for d in d_tail for m in m_tail}
            self.stabilized[deg] = vals.pop() if len(vals) == 1 else None

    def stabilized_vector(self):
        return [self.stabilized.get(d) for d in self.degrees]

    def unresolved_degrees(self):
        return [d for d in self.degrees if self.stabilized.get(d) is None]

    def to_json_dict(self):
        return {
            "table": {f"D={d},m={m}": {str(k): v for k, v in sorted(cell.items())}
                      for (d, m), cell in sorted(self.table.items())},
            "stabilized": {str(d): self.stabilized.get(d) for d in self.degrees},
            "unresolved": [str(d) for d in self.unresolved_degrees()],
            "window_slack": self.window,
            "stabilization_window": self.stab_window,
            "certificates": self.certificates,
        }
