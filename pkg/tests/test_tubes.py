from fractions import Fraction

import pytest

from rigidcohom.completions import TruncationParams, UnsupportedInputError
from rigidcohom.polyalg import PolyRing
from rigidcohom.scalars import ScalarContext
from rigidcohom.tubes import (AlgebraHom, TubeSystem, tube_generators,
                              tube_identity_check, tube_level_presentation)


P = 5


def base_ring(*variables):
    return PolyRing(variables, ScalarContext(P, "rational", 12))


def j_gens_x_p():
    r = base_ring("x")
    return [r.var("x"), r.const(P)]


def test_tube_generators_alpha_zero():
    gens = tube_generators(j_gens_x_p(), 0)
    assert [(g.to_text(), l) for g, l in gens] == [("x", 0)]


def test_tube_generators_alpha_one():
    gens = tube_generators(j_gens_x_p(), 1)
    texts = [(g.to_text(), l) for g, l in gens]
    assert texts == [("x", 0), ("x", -1), ("5", -1)]


def test_tube_generators_alpha_half():
    gens = tube_generators(j_gens_x_p(), Fraction(1, 2))
    texts = {(g.to_text(), l) for g, l in gens}
    # J^2 generators at exponent -1
    assert texts == {("x", 0), ("x^2", -1), ("5*x", -1), ("25", -1)}


def test_tube_generators_requires_p():
    r = base_ring("x")
    with pytest.raises(UnsupportedInputError):
        tube_generators([r.var("x")], 1)
    with pytest.raises(UnsupportedInputError):
        tube_generators(j_gens_x_p(), Fraction(3, 2))


def test_level_presentation_x_p():
    level = tube_level_presentation(j_gens_x_p(), 1)
    A = level.algebra
    assert A.ring.vars == ("x", "y1", "y2")
    rels = {r.key() for r in A.relations}
    assert rels == {A.ring.parse("x - 5*y1").key(), A.ring.parse("5 - 5*y2").key()}
    # Groebner simplifies y2 to 1
    assert A.normal_form(A.ring.var("y2")).to_text() == "1"


def test_level_presentation_principal_p():
    r = base_ring("x")
    j = [r.const(P)]
    # J = (p): single aux variable with y = p^(m-1)
    level = tube_level_presentation(j + [], 3)
    A = level.algebra
    y = A.ring.var(level.y_names[0])
    assert A.normal_form(y) == A.ring.const(P ** 2)


def test_level_presentation_gm():
    r = base_ring("x", "y")
    j = [r.parse("x*y - 1"), r.const(P)]
    level = tube_level_presentation(j, 1)
    A = level.algebra
    assert A.ring.vars == ("x", "y", "y1", "y2")
    rels = {t.key() for t in A.relations}
    assert rels == {A.ring.parse("x*y - 1 - 5*y1").key(), A.ring.parse("5 - 5*y2").key()}


def test_transition_principal_ideal():
    r = base_ring("x")
    system = TubeSystem([r.const(P), r.var("x")], m_max=3)
    # wait: p must be among gens; x among gens too
    hom = system.transition(1)
    src = system.level(2)
    dst = system.level(1)
    # the J^2 generator p^2 maps through peeling p: y -> p * y_p
    idx = [i for i, g in enumerate(src.gen_polys) if g.to_text() == "25"][0]
    img = hom.images[src.y_names[idx]]
    y_p = [dst.y_names[i] for i, g in enumerate(dst.gen_polys) if g.to_text() == "5"][0]
    assert img == dst.algebra.ring.parse(f"5*{y_p}")


def test_transition_x_squared_peels_x():
    system = TubeSystem(j_gens_x_p(), m_max=2)
    hom = system.transition(1)
    src = system.level(2)
    dst = system.level(1)
    idx = [i for i, g in enumerate(src.gen_polys) if g.to_text() == "x^2"][0]
    y_x = [dst.y_names[i] for i, g in enumerate(dst.gen_polys) if g.to_text() == "x"][0]
    assert hom.images[src.y_names[idx]] == dst.algebra.ring.parse(f"x*{y_x}")


def test_transition_identity_level():
    system = TubeSystem(j_gens_x_p(), m_max=2)
    ident = system.transition_to(2, 2)
    src = system.level(2).algebra
    for v in src.ring.vars:
        assert ident.images[v] == src.ring.var(v)


def test_transitions_send_relations_to_zero():
    r = base_ring("x", "y")
    system = TubeSystem([r.parse("x*y - 1"), r.const(P)], m_max=3)
    for m in (1, 2):
        hom = system.transition(m)
        assert hom.check_relations()


def test_transition_composition_compatibility():
    r = base_ring("x", "y")
    system = TubeSystem([r.parse("x*y - 1"), r.const(P)], m_max=3)
    direct = system.transition_to(3, 1)
    composite = system.transition(1).compose(system.transition(2))
    src = system.level(3).algebra
    for v in src.ring.vars:
        assert direct.apply(src.ring.var(v)) == composite.apply(src.ring.var(v))


def test_lift_orders_may_differ_but_stay_homomorphisms():
    r = base_ring("x", "y")
    gens = [r.parse("x*y - 1"), r.const(P)]
    for order in ("grevlex", "lex"):
        system = TubeSystem(gens, m_max=2, lift_order=order)
        assert system.transition(1).check_relations()


def test_tube_identity_check_m1_trivial():
    params = TruncationParams(p=P, degree_cap=10)
    report = tube_identity_check(j_gens_x_p(), 1, params)
    assert report["ok"]


@pytest.mark.parametrize("m", [2, 3])
def test_tube_identity_check_x_p(m):
    params = TruncationParams(p=P, degree_cap=10)
    report = tube_identity_check(j_gens_x_p(), m, params)
    assert report["ok"]
    assert all(e["status"] == "member" for e in report["entries"])


def test_tube_identity_check_gm():
    r = base_ring("x", "y")
    params = TruncationParams(p=P, degree_cap=10)
    report = tube_identity_check([r.parse("x*y - 1"), r.const(P)], 2, params)
    assert report["ok"]


def test_algebra_hom_identity():
    from rigidcohom.polyalg import algebra_over
    A = algebra_over(P, ["x", "y"], ["x*y - 1"])
    ident = AlgebraHom.identity(A)
    f = A.ring.parse("x^2*y + y")
    assert ident.apply(f) == A.normal_form(f)


def test_level_variable_budget():
    from rigidcohom.polyalg import BudgetError
    r = base_ring("x", "y")
    gens = [r.var("x"), r.var("y"), r.const(P)]
    with pytest.raises(BudgetError) as err:
        tube_level_presentation(gens, 10)
    assert err.value.stage == "tube-level"


def test_lift_orders_pick_different_factors():
    # grevlex peels y^3 (higher degree); lex peels x (larger variable)
    r = base_ring("x", "y")
    gens = [r.parse("y^3"), r.var("x"), r.const(P)]
    images = {}
    for order in ("grevlex", "lex"):
        system = TubeSystem(gens, m_max=2, lift_order=order)
        hom = system.transition(1)
        src = system.level(2)
        idx = [i for i, g in enumerate(src.gen_polys)
               if g.to_text() == "x*y^3"][0]
        images[order] = hom.images[src.y_names[idx]]
        assert hom.check_relations()
    assert images["grevlex"] != images["lex"]
