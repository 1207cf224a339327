
import pytest
from hypothesis import given, settings, strategies as st

from ghor.surface import (DeckGroup, DehnRewriter, PolygonError, class_of, free_reduce, inverse,
                          make_polygon, reduce_word)

from oracles import reduce_word_agrees


@pytest.mark.parametrize("n,smooth,genus", [(2, True, 1), (3, False, 1), (4, True, 2), (5, False, 2)])
def test_polygon_kind(n, smooth, genus):
    p = make_polygon(n)
    assert p.n_sides == 2 * n
    assert p.smooth is smooth
    assert p.genus == genus


def test_bad_polygon():
    with pytest.raises(PolygonError):
        make_polygon(1)


def test_corners_identify():
    assert make_polygon(4).single_vertex
    assert make_polygon(2).single_vertex
    # odd N: the corners fall into two classes that meet at the pinch point
    assert len(make_polygon(3).corner_cycles()) == 2


def test_trivial_reductions():
    p = make_polygon(3)
    assert reduce_word((1, -1), p) == ()
    assert reduce_word((), p) == ()


def test_class_of_examples():
    p = make_polygon(4)
    assert class_of([], p) == (0, 0, 0, 0)
    assert class_of([1], p) == (1, 0, 0, 0)
    assert class_of([1, 5], p) == (0, 0, 0, 0)
    with pytest.raises(PolygonError):
        class_of([9], p)


def test_reduce_word_matches_z2_oracle():
    assert reduce_word_agrees(1000)


letters = st.integers(1, 8).flatmap(lambda k: st.sampled_from([k, -k]))


@settings(max_examples=200, deadline=None)
@given(st.lists(letters, max_size=16), st.lists(letters, max_size=16))
def test_class_of_is_additive(u, v):
    p = make_polygon(4)
    a, b, c = class_of(u, p), class_of(v, p), class_of(u + v, p)
    assert c == tuple(x + y for x, y in zip(a, b))


@settings(max_examples=200, deadline=None)
@given(st.lists(letters, max_size=14))
def test_reduce_idempotent_genus2(w):
    p = make_polygon(4)
    r = reduce_word(w, p)
    assert reduce_word(r, p) == r


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 3).flatmap(lambda k: st.sampled_from([k, -k])), max_size=12))
def test_free_reduce_inverse(w):
    assert free_reduce(tuple(w) + inverse(w)) == ()


def test_dehn_rewriter_kills_relator():
    r = (1, 2, 3, 4, -1, -2, -3, -4)
    rw = DehnRewriter([r])
    assert rw.reduce(r) == ()
    assert rw.reduce(r[3:] + r[:3]) == ()


def test_deck_group_genus2():
    d = make_polygon(4).deck
    rel = (1, 2, 3, 4, -1, -2, -3, -4)
    assert d.is_identity(rel)
    assert not d.is_identity((1, 2, -1))
    # the relator says a1 a2 a3 a4 = a4 a3 a2 a1
    assert d.equal((1, 2, 3, 4), (4, 3, 2, 1))
    assert not d.equal((1, 2), (2, 1))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([4, 5, 6]), st.lists(st.integers(1, 6), max_size=30),
       st.lists(st.integers(-6, 6).filter(bool), max_size=8), st.booleans())
def test_incremental_dehn_matches_full(n, raw, tail, flip):
    deck = DeckGroup(n)
    w = tuple((x - 1) % n + 1 for x in raw)
    if flip:
        w = inverse(w) + w[:3]
    t = tuple((abs(x) - 1) % n + 1 if x > 0 else -((abs(x) - 1) % n + 1) for x in tail)
    a = deck.normal(w)
    assert deck.normal(a + t, len(a)) == deck.normal(a + t)
