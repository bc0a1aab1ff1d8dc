"""Module Groebner bases, syzygies, and jet-level spans."""

from math import comb

from liftfields.modules import (
    IdealPowerTower,
    ModElement,
    ScalarClassMap,
    groebner_basis,
    jet_span,
    module_jet_span,
    module_membership,
    normal_form,
    scalar_multiples_span,
    span_contains,
    syzygy_basis,
)
from liftfields.poly import Polynomial, count_monomials_below

from conftest import poly

XY = ("x", "y")


def _p(t):
    return poly(t, XY)


def test_membership_ideal():
    basis = groebner_basis([ModElement([_p("x^2")]), ModElement([_p("y^3")])])
    assert module_membership(ModElement([_p("x^2*y + y^4")]), basis)
    assert not module_membership(ModElement([_p("x*y")]), basis)


def test_membership_module_rank2():
    g1 = ModElement([_p("x"), _p("y")])
    g2 = ModElement([_p("0"), _p("x - y")])
    basis = groebner_basis([g1, g2])
    assert module_membership(ModElement([_p("x^2"), _p("x*y")]), basis)
    assert module_membership(g1 + g2.scale(3), basis)
    assert not module_membership(ModElement([_p("y"), _p("0")]), basis)


def test_normal_form_is_canonical():
    basis = groebner_basis([ModElement([_p("x^2 - y")])])
    a = normal_form(ModElement([_p("x^4")]), basis)
    b = normal_form(ModElement([_p("y^2")]), basis)
    assert a == b


def test_syzygies_are_exact():
    gens = [_p("x^2"), _p("x*y"), _p("y^3")]
    for s in syzygy_basis(gens):
        acc = Polynomial.zero(2)
        for a, g in zip(s, gens):
            acc = acc + a * g
        assert acc.is_zero()


def test_syzygy_koszul_generated():
    # the Koszul relation y*(x) - x*(y) = 0 must lie in the syzygy module
    gens = [_p("x"), _p("y")]
    syz = syzygy_basis(gens)
    basis = groebner_basis([ModElement(s) for s in syz])
    assert module_membership(ModElement([_p("y"), _p("-x")]), basis)


def test_syzygy_of_coprime_pair():
    # (x, y, L): every syzygy combination with the L-slot recovers L-divisibility
    gens = [_p("x + y"), _p("y")]
    for s in syzygy_basis(gens):
        assert (s[0] * gens[0] + s[1] * gens[1]).is_zero()


def test_jet_span_dimension():
    order = 4
    vecs = [(_p("x"), _p("0")), (_p("0"), _p("x"))]
    span = jet_span(vecs, 2, order)
    assert span.dim == 2
    assert span_contains(span, (_p("2*x"), _p("-3*x")), 2, order)
    assert not span_contains(span, (_p("y"), _p("0")), 2, order)


def test_module_jet_span_counts_multiples():
    order = 3
    span = module_jet_span([(_p("1"), _p("0"))], 2, 2, order)
    # all multiples of e1 by monomials of degree < 3
    assert span.dim == count_monomials_below(2, order)
    pos = module_jet_span([(_p("1"), _p("0"))], 2, 2, order, min_mult_degree=1)
    assert span.dim - pos.dim == 1


def test_scalar_multiples_span():
    order = 4
    span = scalar_multiples_span([_p("x^2")], order)
    assert span.contains({})
    row_dim = span.dim
    assert row_dim == count_monomials_below(2, order - 2)


def test_ideal_power_tower_fold():
    # ideal (x, y^2) in two variables: codimension of the k-th power grows
    order = 8
    tower = IdealPowerTower([_p("x"), _p("y^2")], order)
    cmap0 = ScalarClassMap(tower.span(1), 2, order)
    assert cmap0.dim == 2  # classes of 1 and y
    cmap1 = ScalarClassMap(tower.span(2), 2, order)
    assert cmap1.dim == 6  # classes of 1, y, x, x*y, y^2, y^3


def test_ideal_power_tower_quotient_dims():
    # dim C[[x,y]]/(x,y)^k = 1 + 2 + .. + k = C(k+1, 2)
    order = 8
    tower = IdealPowerTower([_p("x"), _p("y")], order)
    for k in range(1, 4):
        cmap = ScalarClassMap(tower.span(k), 2, order)
        assert cmap.dim == comb(k + 1, 2)


def test_scalar_class_map_reduce_linear():
    order = 6
    tower = IdealPowerTower([_p("x"), _p("y")], order)
    cmap = ScalarClassMap(tower.span(2), 2, order)
    a = cmap.reduce(_p("1 + x + x^2"))
    b = cmap.reduce(_p("1 + x"))
    # x^2 lies in the span, so both reduce to the same class
    assert a == b
