"""Chevalley data: root subgroups, Weyl representatives, Bruhat, enumerations."""

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinberg.fields import make_tower
from steinberg.group import (
    GroupElement,
    WeylElement,
    bruhat_decompose,
    canonical_coset,
    cell_of,
    diag,
    enumerate_B,
    enumerate_SL,
    enumerate_T,
    enumerate_U,
    enumerate_X,
    eps,
    root_datum,
    root_value,
    simple_rep,
    sl_order,
    torus_for_root_value,
    unipotent_from_key,
    unipotent_key,
    weyl_rep,
)


# -- root datum ---------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_beta_sequence_is_all_positive_roots(n):
    rd = root_datum(n)
    assert rd.r == n * (n - 1) // 2
    assert set(rd.beta_seq) == set(rd.positive_roots)
    assert len(rd.w0_word) == rd.r
    assert rd.w0.length == rd.r
    assert rd.w0_perm == tuple(range(n - 1, -1, -1))


def test_weyl_element_word_and_length():
    w = WeylElement((2, 0, 1))
    assert w.length == len(w.word) == 2
    assert WeylElement.from_word(3, w.word) == w
    with pytest.raises(ValueError):
        WeylElement((1, 0), word=(0, 0))  # not reduced


# -- eps ------------------------------------------------------------------------


def test_eps_of_zero_is_identity(tower3):
    assert eps(tower3, 2, (0, 1), tower3.zero()) == GroupElement.identity(tower3, 2)


def test_eps_rejects_equal_indices(tower3):
    with pytest.raises(ValueError):
        eps(tower3, 2, (1, 1), tower3.one())


def test_eps_one_parameter_law_f4(tower2):
    """eps(a,c) eps(a,c') = eps(a,c+c') for all pairs over F_4, n=2."""
    for c1, c2 in itertools.product(tower2.enumerate_level(2), repeat=2):
        lhs = eps(tower2, 2, (0, 1), c1) * eps(tower2, 2, (0, 1), c2)
        assert lhs == eps(tower2, 2, (0, 1), c1 + c2)


def test_torus_conjugation_law(tower2):
    """t eps(a,c) t^{-1} = eps(a, a(t) c), exhaustively for SL_3(F_4) tori."""
    n = 3
    rd = root_datum(n)
    for t in enumerate_T(tower2, n, 2):
        for root in rd.positive_roots:
            alpha_t = root_value(t, root)
            for c in tower2.enumerate_level(2):
                lhs = t * eps(tower2, n, root, c) * t.inverse()
                assert lhs == eps(tower2, n, root, alpha_t * c)


# -- weyl representatives --------------------------------------------------------


def test_weyl_rep_identity_and_sl2(tower3):
    assert weyl_rep(tower3, 2, WeylElement.identity(2)) == GroupElement.identity(tower3, 2)
    ns = weyl_rep(tower3, 2, root_datum(2).w0)
    assert [e.norm_pair() for e in (ns.entry(0, 0), ns.entry(0, 1), ns.entry(1, 0), ns.entry(1, 1))] == [
        (1, 0),
        (1, 1),
        (1, 2),  # -1 mod 3
        (1, 0),
    ]
    assert ns.det() == tower3.one()


def test_weyl_conjugation_sends_root_subgroup_to_root_subgroup(tower3):
    n = 3
    rd = root_datum(n)
    c = tower3.element(2, 1)
    for perm in itertools.permutations(range(n)):
        w = WeylElement(perm)
        nw = weyl_rep(tower3, n, w)
        for root in rd.positive_roots:
            img = w.apply_root(root)
            conj = nw * eps(tower3, n, root, c) * nw.inverse()
            assert conj in (eps(tower3, n, img, c), eps(tower3, n, img, -c))
            if img[0] < img[1]:
                assert conj.is_upper_unitriangular()


# -- torus_for_root_value ----------------------------------------------------------


def test_torus_for_root_value_trivial(tower3):
    t = torus_for_root_value(tower3, 3, (0, 1), tower3.one())
    assert root_value(t, (0, 1)) == tower3.one()
    assert t == GroupElement.identity(tower3, 3)


def test_torus_for_root_value_n3_structure(tower2):
    for c in tower2.enumerate_level(2):
        if c.is_zero():
            continue
        t = torus_for_root_value(tower2, 3, (0, 1), c)
        assert t.is_diagonal()
        assert t.entry(0, 0) == c and t.entry(1, 1) == tower2.one() and t.entry(2, 2) == c.inverse()
        assert root_value(t, (0, 1)) == c
        assert t.det() == tower2.one()


def test_torus_for_root_value_n2_nonsquare_needs_level4(tower3):
    g9 = tower3.gen(2)  # a non-square of F_9
    t = torus_for_root_value(tower3, 2, (0, 1), g9)
    assert t.level == 4
    assert root_value(t, (0, 1)) == g9
    assert t.det() == tower3.one()


def test_torus_for_root_value_rejects_zero(tower3):
    with pytest.raises(ValueError):
        torus_for_root_value(tower3, 2, (0, 1), tower3.zero())


# -- unipotent coordinates ------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unipotent_product_equals_entry_matrix(n):
    """The ordered product over beta_r ... beta_1 has no cross terms."""
    tw = make_tower(2, 1)
    rd = root_datum(n)
    rng = random.Random(11)
    field = tw.enumerate_level(2)
    for _ in range(25):
        key = tuple(field[rng.randrange(len(field))] for _ in range(rd.r))
        prod = GroupElement.identity(tw, n)
        for t, c in enumerate(key):
            prod = prod * eps(tw, n, rd.beta_seq[rd.r - 1 - t], c)
        assert prod == unipotent_from_key(tw, n, key)
        assert unipotent_key(prod) == key


# -- bruhat -------------------------------------------------------------------


def test_bruhat_trivial_cells(tower3):
    u = eps(tower3, 2, (0, 1), tower3.one())
    bd = bruhat_decompose(u)
    assert bd.w == WeylElement.identity(2)
    assert bd.u_prime == GroupElement.identity(tower3, 2)
    assert bd.t == GroupElement.identity(tower3, 2)
    assert bd.u == u

    ns = weyl_rep(tower3, 2, root_datum(2).w0)
    bd = bruhat_decompose(ns)
    assert bd.w == root_datum(2).w0
    assert bd.u_prime == GroupElement.identity(tower3, 2)
    assert bd.t == GroupElement.identity(tower3, 2)
    assert bd.u == GroupElement.identity(tower3, 2)


def test_bruhat_lower_unipotent_classical_cell(tower3):
    g = GroupElement.from_entries(
        tower3, [[tower3.one(), tower3.zero()], [tower3.one(), tower3.one()]]
    )
    bd = bruhat_decompose(g)
    assert bd.w == root_datum(2).w0
    recomposed = bd.u_prime * weyl_rep(tower3, 2, bd.w) * bd.t * bd.u
    assert recomposed == g


@pytest.mark.parametrize("n,p,expected_order,expected_labels", [(2, 3, 24, 4), (3, 2, 168, 21)])
def test_bruhat_roundtrip_exhaustive(n, p, expected_order, expected_labels):
    tw = make_tower(p, 1)
    elements = enumerate_SL(tw, n, 1)
    assert len(elements) == expected_order == sl_order(n, p)
    labels = set()
    for g in elements:
        bd = bruhat_decompose(g)
        assert bd.u_prime * weyl_rep(tw, n, bd.w) * bd.t * bd.u == g
        assert bd.t.is_diagonal() and bd.u.is_upper_unitriangular()
        w, coords, y = canonical_coset(g)
        assert len(coords) == w.length
        labels.add((w.perm, tuple(c.norm_pair() for c in coords)))
    # independent oracle: sum of q^{l(w)} over the Weyl group
    assert len(labels) == sum(p ** WeylElement(s).length for s in itertools.permutations(range(n)))
    assert len(labels) == expected_labels


def test_bruhat_rejects_non_unimodular(tower3):
    g = diag(tower3, [tower3.element(2, 1), tower3.one()])
    with pytest.raises(ValueError):
        bruhat_decompose(g)


def test_cell_invariant_under_borel_multiplication(tower3):
    rng = random.Random(5)
    elements = enumerate_SL(tower3, 2, 1)
    borel = enumerate_B(tower3, 2, 1)
    for _ in range(50):
        g = elements[rng.randrange(len(elements))]
        b1 = borel[rng.randrange(len(borel))]
        b2 = borel[rng.randrange(len(borel))]
        assert cell_of(b1 * g * b2) == cell_of(g)


def test_canonical_coset_constant_on_right_borel_orbit(tower3):
    elements = enumerate_SL(tower3, 2, 1)
    for g in elements:
        w, coords, _ = canonical_coset(g)
        for b in enumerate_B(tower3, 2, 1):
            w2, coords2, _ = canonical_coset(g * b)
            assert (w, coords) == (w2, coords2)


# -- enumerations ---------------------------------------------------------------


def test_enumerate_U_counts(tower3, tower2):
    assert len(enumerate_U(tower3, 2, 1)) == 3
    us = enumerate_U(tower2, 3, 1)
    assert len(us) == 8
    assert len(set(us)) == 8


def test_enumerate_U_level_one_embeds_into_level_two(tower2):
    small = set(enumerate_U(tower2, 3, 1))
    big = set(enumerate_U(tower2, 3, 2))
    assert len(big) == 64
    assert small <= big  # GroupElement equality is level-normalized


def test_enumerate_X_definition_and_closure(tower2):
    assert enumerate_X(tower2, 3, 1, 1) == enumerate_U(tower2, 3, 1)
    x2 = enumerate_X(tower2, 3, 2, 1)
    assert len(x2) == 4
    pool = set(x2)
    for g, h in itertools.product(x2, repeat=2):
        assert g * h in pool
    assert set(enumerate_X(tower2, 3, 2, 1)) <= set(enumerate_X(tower2, 3, 2, 2))


def test_enumerate_X_rejects_bad_index(tower2):
    with pytest.raises(ValueError):
        enumerate_X(tower2, 3, 4, 1)
    with pytest.raises(ValueError):
        enumerate_X(tower2, 3, 0, 1)


@given(st.integers(2, 4), st.sampled_from([2, 3]))
def test_sl_order_formula_vs_defs(n, p):
    order = sl_order(n, p)
    assert order % (p ** (n * (n - 1) // 2)) == 0
