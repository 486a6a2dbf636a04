"""Named invariant checks shared by the CLI `verify` command and tests.

Each check returns {"name", "ok", "detail"}; the registry keeps them
individually addressable from task files (kind = "invariants").
"""

from __future__ import annotations

import random
from fractions import Fraction

from .completions import (SubmoduleSpan, TruncationParams,
                          completion_noninjectivity_witness,
                          linear_growth_membership, spectral_radius_estimate)
from .cyclic import (ChainElement, bar_b, connes_B, degeneracy_s, hochschild_b)
from .homalg import SMatrix, rank
from .polyalg import algebra_over
from .scalars import ScalarContext


def _sample_algebras(p):
    return [
        algebra_over(p, ["x"]),
        algebra_over(p, ["x"], ["x^2"]),
        algebra_over(p, ["x", "y"], ["x*y - 1"]),
        algebra_over(p, ["x", "y"], ["y - x^2"]),
        algebra_over(p, ["x", "y"], ["x^2", "x*y"]),
    ]


def _random_chain(A, degree, rng, nterms=2, max_exp=2):
    tensors = []
    nv = len(A.ring.vars)
    for _ in range(nterms):
        entries = []
        for _ in range(degree + 1):
            mono = tuple(rng.randint(0, max_exp) for _ in range(nv))
            entries.append(A.ring.monomial(mono, rng.randint(-3, 3) or 1))
        tensors.append((1, entries))
    return ChainElement.from_tensors(A, tensors)


def check_mixed_complex_identities(p=5, chains=100, seed=20260808, max_degree=4):
    """b^2 = B^2 = bB + Bb = 0 and b's + sb' = id, exact, random chains."""
    rng = random.Random(seed)
    algebras = _sample_algebras(p)
    checked = 0
    while checked < chains:
        A = algebras[checked % len(algebras)]
        deg = rng.randint(0, max_degree - 1)
        x = _random_chain(A, deg, rng)
        if x.is_zero():
            continue
        checked += 1
        if not hochschild_b(hochschild_b(x)).is_zero():
            return _fail("mixed-complex-identities", f"b^2 != 0 at degree {deg}")
        if not connes_B(connes_B(x)).is_zero():
            return _fail("mixed-complex-identities", f"B^2 != 0 at degree {deg}")
        anti = hochschild_b(connes_B(x)) + connes_B(hochschild_b(x))
        if not anti.is_zero():
            return _fail("mixed-complex-identities", f"bB + Bb != 0 at degree {deg}")
        contraction = bar_b(degeneracy_s(x)) + degeneracy_s(bar_b(x))
        if not contraction == x:
            return _fail("mixed-complex-identities", f"b's + sb' != id at degree {deg}")
    return _ok("mixed-complex-identities", f"{checked} chains over {len(algebras)} algebras")


def check_spectral_radius_law(p=5, depth=24):
    """exp rho(p^j M^c) = j + c * exp rho(M) on monomial spans, exactly."""
    params = TruncationParams(p=p, depth=depth)
    A = algebra_over(p, ["x"])
    r = A.ring
    spans = {
        "{x}": SubmoduleSpan([r.var("x")]),
        "{1,x}": SubmoduleSpan([r.one(), r.var("x")]),
        "{p*x}": SubmoduleSpan([r.var("x").scale(p)]),
    }
    for name, span in spans.items():
        base = spectral_radius_estimate(span, A, params).exponent
        for j in (0, 1, 2):
            for c in (1, 2, 3):
                scaled = SubmoduleSpan(span.scaled_powers(j, c))
                got = spectral_radius_estimate(scaled, A, params).exponent
                want = j + c * base
                if got != want:
                    return _fail("spectral-radius-law",
                                 f"M={name}, j={j}, c={c}: {got} != {want}")
    return _ok("spectral-radius-law", "j in 0..2, c in 1..3, three spans")


def check_noninjective_completion(p=5, m_max=6, n_max=12):
    records = completion_noninjectivity_witness(p, m_max, n_max=n_max)
    bad = [r for r in records if not r.ok]
    table = [{"m": r.m, "n": r.n, "ok": r.ok} for r in records]
    if bad:
        out = _fail("noninjective-completion",
                    f"{len(bad)} decompositions failed, first m={bad[0].m} n={bad[0].n}")
    else:
        out = _ok("noninjective-completion", f"{len(records)} exact decompositions")
    out["witnesses"] = table
    return out


def check_linear_growth(p=5):
    params = TruncationParams(p=p)
    A = algebra_over(p, ["x"])
    r = A.ring
    span = SubmoduleSpan([r.one(), r.var("x"), r.parse("x^2")])
    f = r.zero()
    for j in range(5):
        f = f + r.monomial((2 * j,), Fraction(p) ** j)
    if linear_growth_membership(f, span, params) != "member":
        return _fail("linear-growth", "member case misclassified")
    bad = linear_growth_membership(r.parse("x^2"), SubmoduleSpan([r.one(), r.var("x")]), params)
    if bad != "not-member":
        return _fail("linear-growth", "not-member case misclassified")
    return _ok("linear-growth", "member and not-member cases")


def check_backend_agreement(p=5, prec=12, trials=12, seed=7):
    rng = random.Random(seed)
    ctxq = ScalarContext(p, "rational", prec)
    ctxp = ScalarContext(p, "padic", prec)
    for t in range(trials):
        n = rng.randint(2, 6)
        entries = [(i, j, rng.randint(-6, 6)) for i in range(n) for j in range(n)]
        mq = SMatrix.from_entries(n, n, ctxq, entries)
        mp = SMatrix.from_entries(n, n, ctxp, entries)
        if rank(mq) != rank(mp):
            return _fail("backend-agreement", f"rank mismatch on trial {t}")
    return _ok("backend-agreement", f"{trials} random matrices")


def _ok(name, detail):
    return {"name": name, "ok": True, "detail": detail}


def _fail(name, detail):
    return {"name": name, "ok": False, "detail": detail}


CHECKS = {
    "mixed-complex-identities": check_mixed_complex_identities,
    "spectral-radius-law": check_spectral_radius_law,
    "noninjective-completion": check_noninjective_completion,
    "linear-growth": check_linear_growth,
    "backend-agreement": check_backend_agreement,
}


def run_checks(names=None, p=5, **overrides):
    names = list(names) if names else sorted(CHECKS)
    out = []
    for name in names:
        if name not in CHECKS:
            out.append(_fail(name, "unknown check"))
            continue
        kwargs = dict(overrides.get(name, {})) if name in overrides else {}
        kwargs.setdefault("p", p)
        out.append(CHECKS[name](**kwargs))
    return out
