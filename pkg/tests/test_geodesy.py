import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ghor import (PathError, cycle_class, enumerate_cycles, geodesic_certificate,
                  has_cyclic_subpath, is_geodesic_certified, lift, same_class_monomial,
                  sigma_valuation, tau_bar, transversely_intersect)
from ghor.cycle_algebra import default_max_len
from ghor.geodesy import GeodesicCertificate, Verdict, rotations, target_class
from ghor.matchings import sigma

from conftest import CORPUS, POLY, loaded


def test_lift_of_side_loop_is_open():
    q, _ = loaded("poly_2.dq")
    tr = lift(q, ["x1"])
    assert not tr.closed
    assert tr.steps[0] == ("c", ())
    assert tr.steps[-1] == ("c", (1,))


def test_faces_lift_closed(corpus_item):
    q, _ = corpus_item
    for f in q.faces:
        assert lift(q, f.arrows).closed
        assert set(cycle_class(q, f.arrows)) == {0}


def test_lift_rejects_empty_path():
    q, _ = loaded("poly_2.dq")
    with pytest.raises(PathError):
        lift(q, [])


def test_class_of_face_times_cycle():
    q, cat = loaded("poly_4.dq")
    f = q.faces[0].arrows
    assert cycle_class(q, ("x1",)) == (0, 1, -1, 1)
    # going once around a face does not change the class
    assert cycle_class(q, ("x1",) + f) == cycle_class(q, ("x1",))


def test_cycle_class_needs_a_cycle():
    q, _ = loaded("octagon_g2.dq")
    with pytest.raises(PathError):
        cycle_class(q, ["a1"])


@pytest.mark.parametrize("name", POLY)
def test_poly_certificate(name):
    q, cat = loaded(name)
    cert = geodesic_certificate(q, cat, 3 * q.polygon.n_half)
    assert isinstance(cert, GeodesicCertificate)
    assert sorted(cert.gamma) == list(range(1, 2 * q.polygon.n_half + 1))
    sig = sigma(q, cat)
    for k, g in cert.gamma.items():
        assert cycle_class(q, g) == target_class(q, k)
        assert sigma_valuation(tau_bar(q, cat, g), sig) == 0
        assert is_geodesic_certified(q, cat, g) is Verdict.CERTIFIED
    for k, fam in cert.families.items():
        cycles = list(fam.values())
        for c, d in itertools.combinations(cycles, 2):
            assert not transversely_intersect(q, c, d)
    assert all(cert.checks.values())


def test_certificate_fails_with_tiny_bound():
    q, cat = loaded("poly_4.dq")
    res = geodesic_certificate(q, cat, 1)
    assert not isinstance(res, GeodesicCertificate)
    assert res.missing


def test_transverse_examples():
    q, _ = loaded("poly_2.dq")
    assert transversely_intersect(q, ["x1"], ["x2"])
    assert not transversely_intersect(q, ["x1"], ["x1"])
    q4, _ = loaded("poly_4.dq")
    assert transversely_intersect(q4, ["x1"], ["x2"])


def test_transverse_needs_cycles():
    q, _ = loaded("octagon_g2.dq")
    with pytest.raises(PathError):
        transversely_intersect(q, ["a1"], q.faces[0].arrows)


def _cycles(name, L=6, limit=400):
    q, cat = loaded(name)
    return q, cat, enumerate_cycles(q, L, limit=limit).all_cycles()


@pytest.mark.parametrize("name", CORPUS)
def test_transversality_symmetric_and_rotation_invariant(name):
    q, _, cyc = _cycles(name, 5, 60)
    for c, d in itertools.combinations(cyc[:25], 2):
        t = transversely_intersect(q, c, d)
        assert t == transversely_intersect(q, d, c)
        assert t == transversely_intersect(q, rotations(c)[-1], d)


@pytest.mark.parametrize("name", CORPUS)
def test_verdicts_are_consistent(name):
    # sigma-free cycles never lift with a closed subpath
    q, cat, cyc = _cycles(name)
    sig = sigma(q, cat)
    for c in cyc:
        v = is_geodesic_certified(q, cat, c)
        if v is Verdict.CERTIFIED:
            assert sigma_valuation(tau_bar(q, cat, c), sig) == 0
            assert not any(has_cyclic_subpath(lift(q, r)) for r in rotations(c))
        elif v is Verdict.REFUTED:
            assert sigma_valuation(tau_bar(q, cat, c), sig) >= 1


@pytest.mark.parametrize("name", POLY + ["flower_pinched.dq"])
def test_certificate_found(name):
    q, cat = loaded(name)
    assert isinstance(geodesic_certificate(q, cat, default_max_len(q)), GeodesicCertificate)


def test_octagon_has_no_certificate_at_default_bound():
    q, cat = loaded("octagon_g2.dq")
    res = geodesic_certificate(q, cat, default_max_len(q))
    assert not isinstance(res, GeodesicCertificate)
    assert res.missing


@pytest.mark.parametrize("name", CORPUS)
def test_same_class_iff_equal_class(name):
    q, cat, cyc = _cycles(name, 6, 200)
    for c, d in itertools.combinations(cyc, 2):
        assert same_class_monomial(q, cat, c, d) == (cycle_class(q, c) == cycle_class(q, d))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_same_class_iff_equal_class_sampled(name, data):
    q, cat, cyc = _cycles(name, 8, 2000)
    c = data.draw(st.sampled_from(cyc))
    d = data.draw(st.sampled_from(cyc))
    assert same_class_monomial(q, cat, c, d) == (cycle_class(q, c) == cycle_class(q, d))
