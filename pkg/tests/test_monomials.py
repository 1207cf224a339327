import pytest
from hypothesis import given, strategies as st

from ghor import ExponentVector, PathError, eta_bar, equal_in_ghor, sigma, tau_bar
from ghor.monomials import RingMismatch, format_monomial, restrict_to_simple, sigma_valuation

from conftest import loaded

vecs = st.lists(st.integers(0, 6), min_size=4, max_size=4)


@given(vecs, vecs)
def test_product_and_quotient(a, b):
    x, y = ExponentVector(tuple(a)), ExponentVector(tuple(b))
    assert (x + y) - y == x
    assert x.divides(x + y)
    assert (x + y).degree == x.degree + y.degree


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        ExponentVector((1, 0), "P") + ExponentVector((1, 0), "S")
    with pytest.raises(RingMismatch):
        ExponentVector((1, 0)) + ExponentVector((1, 0, 0))


def test_format():
    assert format_monomial(ExponentVector((1, 0, 2)), ["x", "y", "z"]) == "x*z^2"
    assert format_monomial(ExponentVector((0, 0)), ["x", "y"]) == "1"


def test_sigma_valuation():
    s = ExponentVector((1, 1, 1))
    assert sigma_valuation(ExponentVector((2, 3, 2)), s) == 2
    assert sigma_valuation(ExponentVector((0, 3, 2)), s) == 0


def test_poly3_tau_of_arrows():
    q, cat = loaded("poly_3.dq")
    assert tau_bar(q, cat, "x1").degree == 1
    # every face is sigma
    for f in q.faces:
        assert tau_bar(q, cat, f.arrows) == sigma(q, cat)


def test_unit_cycles_are_sigma(corpus_item):
    q, cat = corpus_item
    s = sigma(q, cat)
    for f in q.faces:
        for i in range(len(f.arrows)):
            assert tau_bar(q, cat, f.arrows[i:] + f.arrows[:i]) == s


def test_dimer_ideal_containment(corpus_item):
    """For each arrow a with faces pa and qa, the complementary paths agree under eta_bar."""
    q, cat = corpus_item
    for a in q.arrows:
        comps = []
        for f in q.faces:
            arr = f.arrows
            for i, b in enumerate(arr):
                if b == a.id:
                    rest = arr[i + 1:] + arr[:i]
                    comps.append(rest)
        assert len(comps) == 2
        p, r = comps
        assert eta_bar(q, cat, p) == eta_bar(q, cat, r)


def test_restrict_eta_to_tau():
    q, cat = loaded("poly_4.dq")
    p = q.parse_path("x1 x2")
    assert restrict_to_simple(cat, eta_bar(q, cat, p)) == tau_bar(q, cat, p)


def test_equal_in_ghor_parallel_only():
    q, cat = loaded("poly_2.dq")
    r = equal_in_ghor(q, cat, "x1 x2", "x2 x1", certified=True)
    assert r.equal and r.tau_equal and not r.counterexample
    r = equal_in_ghor(q, cat, "x1 x2", "x1 x1")
    assert not r.equal


TWO_VERTEX = """
polygon 2
vertex c corner
vertex v
arrow a c v tail_corner=0
arrow b v c head_corner=1
arrow x c c tail_corner=1 head_corner=2
arrow y c c tail_corner=2 head_corner=0
face f1 a b x y
face f2 a b y x
"""


def test_non_parallel_paths_rejected():
    from ghor import parse_quiver, perfect_matchings
    q = parse_quiver(TWO_VERTEX)
    cat = perfect_matchings(q)
    with pytest.raises(PathError):
        equal_in_ghor(q, cat, "a", "x")


def _parallel_images(q, cat, v, max_len):
    """(eta, tau) of every path of length 1..max_len from v, grouped by endpoint."""
    by_end: dict = {}
    frontier = [(v, ())]
    out_of = {u: [a for a in q.arrows if a.tail == u] for u in q.vertices}
    for _ in range(max_len):
        frontier = [(a.head, p + (a.id,)) for u, p in frontier for a in out_of[u]]
        for w, p in frontier:
            by_end.setdefault(w, set()).add((eta_bar(q, cat, p).exps, tau_bar(q, cat, p).exps))
    return by_end


def test_eta_equal_iff_tau_equal(corpus_item):
    q, cat = corpus_item
    L = 5 if q.n_arrows > 20 else 6
    for v in q.vertices:
        for pairs in _parallel_images(q, cat, v, L).values():
            eta_to_tau: dict = {}
            tau_to_eta: dict = {}
            for e, t in pairs:
                eta_to_tau.setdefault(e, set()).add(t)
                tau_to_eta.setdefault(t, set()).add(e)
            assert all(len(s) == 1 for s in eta_to_tau.values())
            assert all(len(s) == 1 for s in tau_to_eta.values())
