"""Induced module on Borel cosets: labels, action, eta, Steinberg coordinates."""

import itertools
import random

import pytest

from steinberg.coset_module import ModuleContext, MVector, StVector
from steinberg.errors import NotInSteinbergError
from steinberg.fields import make_tower
from steinberg.group import (
    WeylElement,
    diag,
    enumerate_B,
    enumerate_SL,
    enumerate_T,
    enumerate_U,
    enumerate_X,
    eps,
    simple_rep,
    unipotent_key,
    weyl_rep,
)


def unit(ctx, g):
    return MVector(ctx.ell, {ctx.coset_label(g): 1})


# -- labels ----------------------------------------------------------------


def test_borel_elements_label_as_identity_cell(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    e_label = ctx.coset_label(weyl_rep(ctx.tower, 2, WeylElement.identity(2)))
    for b in enumerate_B(ctx.tower, 2, 1):
        assert ctx.coset_label(b) == e_label


@pytest.mark.parametrize("n,p,expected", [(2, 3, 4), (3, 2, 21)])
def test_distinct_label_counts(n, p, expected):
    tw = make_tower(p, 1)
    ctx = ModuleContext(tw, n, 2 if p != 2 else 3)
    labels = {ctx.coset_label(g) for g in enumerate_SL(tw, n, 1)}
    assert len(labels) == expected


def test_weyl_rep_lands_in_its_own_cell(ctx_sl3_f2_ell3):
    ctx = ctx_sl3_f2_ell3
    for perm in itertools.permutations(range(3)):
        w = WeylElement(perm)
        label = ctx.coset_label(weyl_rep(ctx.tower, 3, w))
        assert label.cell == w
        assert all(c.is_zero() for c in label.coords)


# -- action ----------------------------------------------------------------


def test_act_identity(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    v = ctx.eta()
    e = weyl_rep(ctx.tower, 2, WeylElement.identity(2))
    assert ctx.act(e, v) == v


def test_act_is_a_group_action(ctx_sl3_f2_ell3):
    """act(g, act(h, v)) == act(gh, v) on 100 seeded random triples."""
    ctx = ctx_sl3_f2_ell3
    rng = random.Random(42)
    elements = enumerate_SL(ctx.tower, 3, 1)
    v = ctx.eta()
    for _ in range(100):
        g = elements[rng.randrange(len(elements))]
        h = elements[rng.randrange(len(elements))]
        assert ctx.act(g, ctx.act(h, v)) == ctx.act(g * h, v)


def test_borel_stabilizes_base_point(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    e_vec = unit(ctx, weyl_rep(ctx.tower, 2, WeylElement.identity(2)))
    for b in enumerate_B(ctx.tower, 2, 1):
        assert ctx.act(b, e_vec) == e_vec


def test_act_linear(ctx_sl2_f3_ell5):
    ctx = ctx_sl2_f3_ell5
    g = eps(ctx.tower, 2, (1, 0), ctx.tower.one())
    v, w = ctx.eta(), unit(ctx, g)
    assert ctx.act(g, v.add(w.scale(3))) == ctx.act(g, v).add(ctx.act(g, w).scale(3))


# -- eta ----------------------------------------------------------------------


def test_eta_sl2_two_terms(ctx_sl2_f3_ell2):
    eta = ctx_sl2_f3_ell2.eta()
    assert len(eta.terms) == 2


def test_eta_sl3_signs_by_length_parity(ctx_sl3_f2_ell3):
    ctx = ctx_sl3_f2_ell3
    eta = ctx.eta()
    assert len(eta.terms) == 6
    for label, c in eta.terms.items():
        assert c == (1 if label.cell.length % 2 == 0 else ctx.ell - 1)


@pytest.mark.parametrize("n,p,ells", [(2, 3, (2, 5)), (3, 2, (3, 5))])
def test_eta_alternation_and_torus_invariance(n, p, ells):
    tw = make_tower(p, 1)
    for ell in ells:
        ctx = ModuleContext(tw, n, ell)
        eta = ctx.eta()
        for i in range(n - 1):
            assert ctx.act(simple_rep(tw, n, i), eta) == eta.scale(ell - 1)
        for t in enumerate_T(tw, n, 1):
            assert ctx.act(t, eta) == eta


def test_eta_independent_of_representative_choice(ctx_sl2_f3_ell5, ctx_sl3_f2_ell3):
    """Replacing n_w by n_w h (torus twist) or n_w^{-1} leaves eta unchanged."""
    for ctx in (ctx_sl2_f3_ell5, ctx_sl3_f2_ell3):
        tw, n = ctx.tower, ctx.n
        units = [e for e in tw.enumerate_level(1) if not e.is_zero()]
        twist = diag(tw, [units[-1]] + [tw.one()] * (n - 2) + [units[-1].inverse()])
        rebuilt = MVector(ctx.ell)
        for perm in itertools.permutations(range(n)):
            w = WeylElement(perm)
            alt_rep = weyl_rep(tw, n, w) * twist if w.length % 2 else weyl_rep(tw, n, w).inverse()
            rebuilt = rebuilt.add(unit(ctx, alt_rep).scale(ctx.sign(w.length)))
        assert rebuilt == ctx.eta()


# -- steinberg coordinates ------------------------------------------------------


def test_eta_steinberg_coords_is_identity_key(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    st = ctx.to_steinberg_coords(ctx.eta())
    assert st.terms == {ctx.identity_key(): 1}


@pytest.mark.parametrize("fixture", ["ctx_sl2_f3_ell2", "ctx_sl2_f3_ell5", "ctx_sl3_f2_ell3"])
def test_translates_have_singleton_coords(fixture, request):
    ctx = request.getfixturevalue(fixture)
    eta = ctx.eta()
    for z in enumerate_U(ctx.tower, ctx.n, 1):
        st = ctx.to_steinberg_coords(ctx.act(z, eta))
        assert st.terms == {unipotent_key(z): 1}


def test_single_coset_is_not_in_steinberg_span(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    v = unit(ctx, weyl_rep(ctx.tower, 2, WeylElement.identity(2)))
    with pytest.raises(NotInSteinbergError):
        ctx.to_steinberg_coords(v)


def test_steinberg_roundtrip_on_random_vectors(ctx_sl3_f2_ell3):
    ctx = ctx_sl3_f2_ell3
    rng = random.Random(3)
    keys = [unipotent_key(z) for z in enumerate_U(ctx.tower, 3, 1)]
    for _ in range(25):
        st = StVector(ctx.ell, {k: rng.randrange(ctx.ell) for k in keys})
        assert ctx.to_steinberg_coords(ctx.from_steinberg(st)) == st


@pytest.mark.parametrize(
    "n,p,a,ell", [(2, 3, 1, 2), (2, 3, 2, 2), (3, 2, 1, 3), (3, 2, 2, 3)]
)
def test_translate_basis_has_full_rank(n, p, a, ell):
    """Rank of {z eta} equals q^{a r}: sparse elimination over GF(ell)."""
    tw = make_tower(p, 1)
    ctx = ModuleContext(tw, n, ell)
    eta = ctx.eta()
    rows = [ctx.act(z, eta) for z in enumerate_U(tw, n, a)]
    pivots: dict = {}
    rank = 0
    for row in rows:
        vec = row
        while not vec.is_zero():
            lead = min(vec.terms, key=lambda lb: lb.sort_key())
            if lead in pivots:
                vec = vec.sub(pivots[lead].scale(vec.terms[lead]))
            else:
                pivots[lead] = vec.scale(pow(vec.terms[lead], -1, ell))
                rank += 1
                break
    assert rank == len(rows) == p ** (a * n * (n - 1) // 2)


# -- coefficient sums ----------------------------------------------------------


def test_coeff_sum_of_eta_is_one(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    assert ctx.coeff_sum(ctx.to_steinberg_coords(ctx.eta())) == 1


@pytest.mark.parametrize("fixture", ["ctx_sl2_f3_ell5", "ctx_sl3_f2_ell3"])
def test_coeff_sum_vanishing_for_nontrivial_translates(fixture, request):
    ctx = request.getfixturevalue(fixture)
    n_rep = ctx.nw_rep(ctx.w0)
    eta = ctx.eta()
    for u in enumerate_U(ctx.tower, ctx.n, 1):
        s = ctx.coeff_sum(ctx.to_steinberg_coords(ctx.act(n_rep * u, eta)))
        if u.is_identity():
            assert s == ctx.sign(ctx.r)
        else:
            assert s == 0


# -- group sums -----------------------------------------------------------------


def test_group_sum_singleton(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    e = weyl_rep(ctx.tower, 2, WeylElement.identity(2))
    assert ctx.group_sum_apply([e], ctx.eta()) == ctx.eta()


def test_unipotent_orbit_sum_is_all_ones(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    total = ctx.group_sum_apply(enumerate_U(ctx.tower, 2, 1), ctx.eta())
    st = ctx.to_steinberg_coords(total)
    assert st.terms == {unipotent_key(z): 1 for z in enumerate_U(ctx.tower, 2, 1)}


def test_supergroup_translation_scales_subgroup_sum(ctx_sl3_f2_ell3):
    """Left translation by the doubled subgroup multiplies by its index count."""
    ctx = ctx_sl3_f2_ell3
    i, b = 2, 1
    small = ctx.group_sum_apply(enumerate_X(ctx.tower, 3, i, b), ctx.eta())
    big = ctx.group_sum_apply(enumerate_X(ctx.tower, 3, i, 2 * b), ctx.eta())
    lhs = ctx.group_sum_apply(enumerate_X(ctx.tower, 3, i, 2 * b), small)
    scalar = pow(ctx.q, b * (ctx.r - i + 1), ctx.ell)
    assert lhs == big.scale(scalar)


# -- serialization ----------------------------------------------------------------


def test_mvector_text_roundtrip(ctx_sl3_f2_ell3):
    ctx = ctx_sl3_f2_ell3
    v = ctx.act(ctx.nw_rep(ctx.w0), ctx.eta())
    assert ctx.parse_mvector(ctx.mvector_text(v)) == v


def test_stvector_text_roundtrip(ctx_sl3_f2_ell3):
    ctx = ctx_sl3_f2_ell3
    keys = [unipotent_key(z) for z in enumerate_U(ctx.tower, 3, 1)]
    st = StVector(ctx.ell, {keys[0]: 1, keys[3]: 2, keys[7]: 1})
    assert ctx.parse_stvector(ctx.stvector_text(st)) == st


def test_serialization_is_sorted_and_stable(ctx_sl2_f3_ell2):
    ctx = ctx_sl2_f3_ell2
    v = ctx.group_sum_apply(enumerate_U(ctx.tower, 2, 1), ctx.eta())
    assert ctx.mvector_text(v) == ctx.mvector_text(ctx.parse_mvector(ctx.mvector_text(v)))
