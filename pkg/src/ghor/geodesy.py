"""Lifting paths to the covering quiver, classes, geodesic certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .matchings import MatchingCatalog
from .monomials import ExponentVector, sigma_valuation, tau_bar
from .quiver import DimerQuiver, PathError, corner_order
from .surface import Word, crossing_class_from_abelian, free_reduce


@dataclass(frozen=True)
class LiftTrace:
    """Lift of a path starting in the base polygon copy.

    ``steps[0]`` is the starting point; ``steps[l]`` is where arrow ``l``
    ends.  A point is (vertex, deck word); for corner vertices the deck word
    names the corner point itself rather than a polygon copy.
    """

    polygon: object
    steps: tuple[tuple[str, Word], ...]

    @property
    def closed(self) -> bool:
        v0, w0 = self.steps[0]
        v1, w1 = self.steps[-1]
        return v0 == v1 and self.polygon.deck.equal(w0, w1)

    @property
    def displacement(self) -> Word:
        return free_reduce(tuple(-x for x in reversed(self.steps[0][1])) + self.steps[-1][1])


def lift(q: DimerQuiver, p: Sequence[str]) -> LiftTrace:
    poly = q.polygon
    deck = poly.deck
    p = tuple(p)
    if not p:
        raise PathError("empty path")
    first = q.arrow[p[0]]
    g: Word = ()
    if first.tail_corner is not None:
        g = poly.prefix(first.tail_corner)
    g = deck.normal(g)
    steps = [(first.tail, g)]
    for aid in p:
        a = q.arrow[aid]
        clean = len(g)
        if a.tail_corner is not None:
            # g is a corner point; step into the copy that has it as corner m
            g = g + tuple(-x for x in reversed(poly.prefix(a.tail_corner)))
        if a.cross is not None:
            g = g + poly.crossing_deck(a.cross)
        if a.head_corner is not None:
            g = g + poly.prefix(a.head_corner)
        g = deck.normal(g, clean)
        steps.append((a.head, g))
    return LiftTrace(poly, tuple(steps))


def has_cyclic_subpath(trace: LiftTrace) -> bool:
    """Does the lift revisit a point, i.e. contain a closed nontrivial subpath?"""
    deck = trace.polygon.deck
    if deck.exact_normal_form:
        seen: set = set()
        for s in trace.steps:
            if s in seen:
                return True
            seen.add(s)
        return False
    # equal points have equal abelian images, so only compare within buckets
    buckets: dict = {}
    for v, w in trace.steps:
        key = (v, deck.abelian(w))
        if any(deck.equal(w, u) for u in buckets.get(key, ())):
            return True
        buckets.setdefault(key, []).append(w)
    return False


def arrow_displacements(q: DimerQuiver) -> np.ndarray:
    """Abelianised deck displacement of every arrow, shape (|Q_1|, N)."""
    d = q.__dict__.get("_displacements")
    if d is None:
        poly = q.polygon
        ab = poly.deck.abelian
        d = np.zeros((q.n_arrows, poly.n_half), dtype=np.int64)
        for i, a in enumerate(q.arrows):
            v = np.zeros(poly.n_half, dtype=np.int64)
            if a.tail_corner is not None:
                v -= ab(poly.prefix(a.tail_corner))
            if a.cross is not None:
                v += ab(poly.crossing_deck(a.cross))
            if a.head_corner is not None:
                v += ab(poly.prefix(a.head_corner))
            d[i] = v
        q.__dict__["_displacements"] = d
    return d


def class_from_displacement(q: DimerQuiver, d) -> tuple[int, ...]:
    if q.polygon.smooth:
        return crossing_class_from_abelian(tuple(int(x) for x in d), q.polygon)
    return tuple(int(x) for x in d)


def cycle_class(q: DimerQuiver, p: Sequence[str]) -> tuple[int, ...]:
    """Class vector of a cycle.

    On smooth surfaces this is the signed count of side crossings, entry k
    being n_k - n_{k+N}.  On pinched surfaces the crossing counts of paths
    through the pinch point are not well defined, so the abelianised deck
    displacement (one entry per side pair) is returned instead.
    """
    p = tuple(p)
    if not q.is_cycle(p):
        raise PathError("not a cycle")
    disp = arrow_displacements(q)
    d = sum((disp[q.aindex[a]] for a in p), np.zeros(q.polygon.n_half, dtype=np.int64))
    return class_from_displacement(q, d)


def rotations(p: Sequence[str]) -> list[tuple[str, ...]]:
    p = tuple(p)
    return [p[i:] + p[:i] for i in range(len(p))]


class Verdict(str, Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


def is_geodesic_certified(q: DimerQuiver, cat: MatchingCatalog, p: Sequence[str],
                          sig: ExponentVector | None = None) -> Verdict:
    p = tuple(p)
    if not q.is_cycle(p):
        raise PathError("not a cycle")
    if sig is None:
        sig = ExponentVector.ones(cat.n_simple, "S")
    if sigma_valuation(tau_bar(q, cat, p), sig) == 0:
        return Verdict.CERTIFIED
    for r in rotations(p):
        if has_cyclic_subpath(lift(q, r)):
            return Verdict.REFUTED
    return Verdict.UNKNOWN


# transversality ---------------------------------------------------------------

class _Rotation:
    """Cyclic order of arrow ends at every vertex, split into link components."""

    def __init__(self, q: DimerQuiver):
        self.pos: dict[str, dict[tuple[str, str], tuple[int, int, int]]] = {}
        for v in q.vertices:
            d = {}
            for ci, cyc in enumerate(corner_order(q, v)):
                for i, e in enumerate(cyc):
                    d[e] = (ci, i, len(cyc))
            self.pos[v] = d

    def first_from(self, v: str, base, e1, e2) -> bool | None:
        """Walking around v from ``base``, is e1 met before e2?  None across cones."""
        d = self.pos[v]
        c0, i0, n = d[base]
        c1, i1, _ = d[e1]
        c2, i2, _ = d[e2]
        if not c0 == c1 == c2:
            return None
        return (i1 - i0) % n < (i2 - i0) % n

    def interleave(self, v: str, a, b, c, e) -> bool:
        """Do the pairs {a, b} and {c, e} separate each other around v?"""
        d = self.pos[v]
        cs = {d[x][0] for x in (a, b, c, e)}
        if len(cs) > 1:
            return False
        ci, ia, n = d[a]
        ib = (d[b][1] - ia) % n
        ic = (d[c][1] - ia) % n
        ie = (d[e][1] - ia) % n
        return (0 < ic < ib) != (0 < ie < ib)


def _rotation(q: DimerQuiver) -> _Rotation:
    r = q.__dict__.get("_rotation_cache")
    if r is None:
        r = _Rotation(q)
        q.__dict__["_rotation_cache"] = r
    return r


def transversely_intersect(q: DimerQuiver, c1: Sequence[str], c2: Sequence[str]) -> bool:
    c1 = tuple(c1)
    c2 = tuple(c2)
    for c in (c1, c2):
        if not q.is_cycle(c):
            raise PathError("transversality is defined for cycles")
    verts1 = {q.arrow[a].tail for a in c1}
    verts2 = {q.arrow[a].tail for a in c2}
    if not verts1 & verts2:
        return False
    rot = _rotation(q)
    n1, n2 = len(c1), len(c2)
    for i in range(n1):
        v = q.arrow[c1[i]].tail
        for j in range(n2):
            if q.arrow[c2[j]].tail != v:
                continue
            in1, out1 = c1[i - 1], c1[i]
            in2, out2 = c2[j - 1], c2[j]
            if in1 == in2:
                continue  # inside a shared run, handled where the run starts
            if out1 != out2:
                if rot.interleave(v, (in1, "in"), (out1, "out"), (in2, "in"), (out2, "out")):
                    return True
                continue
            # shared run starting at v: compare sides at both ends
            s = rot.first_from(v, (out1, "out"), (in1, "in"), (in2, "in"))
            k = 0
            limit = n1 * n2
            while k < limit and c1[(i + k) % n1] == c2[(j + k) % n2]:
                k += 1
            if k >= limit:
                continue
            shared = c1[(i + k - 1) % n1]
            w = q.arrow[shared].head
            e = rot.first_from(w, (shared, "in"), (c1[(i + k) % n1], "out"),
                               (c2[(j + k) % n2], "out"))
            if s is not None and e is not None and s == e:
                return True
    return False


# certificates ------------------------------------------------------------------

@dataclass
class GeodesicCertificate:
    """gamma_k for every direction k, and for each k a parallel family through it."""

    gamma: dict[int, tuple[str, ...]]
    families: dict[int, dict[str, tuple[str, ...]]]
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"gamma": {str(k): list(v) for k, v in sorted(self.gamma.items())},
                "families": {str(k): {v: list(c) for v, c in sorted(f.items())}
                             for k, f in sorted(self.families.items())},
                "checks": dict(self.checks)}


@dataclass
class CertificateFailure:
    reason: str
    missing: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"reason": self.reason, "missing": [str(m) for m in self.missing]}


def target_class(q: DimerQuiver, k: int) -> tuple[int, ...]:
    """Class required of gamma_k, k in 1..2N."""
    N = q.polygon.n_half
    v = [0] * N
    if k <= N:
        v[k - 1] = 1
    else:
        v[k - N - 1] = -1
    if q.polygon.smooth:
        return tuple(v)
    # pinched: express the crossing class as a deck displacement
    M = q.polygon.crossing_matrix()
    return tuple(sum(M[i][j] * v[j] for j in range(N)) for i in range(N))


def certified_cycles(q: DimerQuiver, cat: MatchingCatalog, start: str,
                     targets: Sequence[tuple[int, ...]], max_len: int,
                     per_target: int = 2) -> dict[tuple, list[tuple[str, ...]]]:
    """Shortest sigma-free cycles at ``start`` in each target class.

    Breadth first over (vertex, displacement, image) states.  Once every
    simple matching shows up in the image it stays there, so those branches
    are cut.
    """
    imgs = [tuple(int(x) for x in col) for col in cat.simple_membership.T]
    disp = [tuple(int(x) for x in row) for row in arrow_displacements(q)]
    outs: dict[int, list[int]] = {}
    for i, t in enumerate(q.tails):
        outs.setdefault(int(t), []).append(i)
    want = {tuple(t): [] for t in targets}
    # compare displacements directly; converting every return to a class is slow
    M = q.polygon.crossing_matrix()
    N = q.polygon.n_half
    as_disp = {tuple(sum(M[i][j] * t[j] for j in range(N)) for i in range(N))
               if q.polygon.smooth else tuple(t): tuple(t) for t in targets}
    s0 = q.vindex[start]
    root = (s0, (0,) * q.polygon.n_half, (0,) * cat.n_simple)
    parent: dict = {root: None}
    frontier = [root]
    for _ in range(max_len):
        nxt = []
        for st in frontier:
            u, d, m = st
            for a in outs.get(u, ()):
                m2 = tuple(x + y for x, y in zip(m, imgs[a]))
                if all(m2):
                    continue
                d2 = tuple(x + y for x, y in zip(d, disp[a]))
                w = int(q.heads[a])
                st2 = (w, d2, m2)
                if st2 in parent:
                    continue
                parent[st2] = (st, a)
                nxt.append(st2)
                if w == s0 and d2 in as_disp:
                    cls = as_disp[d2]
                    if len(want[cls]) < per_target:
                        want[cls].append(_unwind(q, parent, st2))
        frontier = nxt
        if all(len(v) >= per_target for v in want.values()):
            break
    return want


def _unwind(q: DimerQuiver, parent: dict, st) -> tuple[str, ...]:
    path = []
    while parent[st] is not None:
        st, a = parent[st]
        path.append(q.arrows[a].id)
    return tuple(reversed(path))


def geodesic_certificate(q: DimerQuiver, cat: MatchingCatalog, search_bound: int,
                         per_target: int = 2):
    """Search for gamma_k and pairwise parallel geodesic families.

    For each direction k the family is built around gamma_k: vertices on
    gamma_k use the rotation of gamma_k starting there, the remaining
    vertices get the shortest certified cycle of the same class that is
    parallel to everything chosen so far.
    """
    if cat.n_simple == 0:
        return CertificateFailure("no simple matchings")
    ks = list(range(1, 2 * q.polygon.n_half + 1))
    targets = [target_class(q, k) for k in ks]
    pools: dict[tuple, list[tuple[str, ...]]] = {t: [] for t in targets}
    for v in q.vertices:
        found = certified_cycles(q, cat, v, targets, search_bound, per_target)
        for t, cs in found.items():
            pools[t].extend(cs)
    for t in pools:
        pools[t].sort(key=lambda c: (len(c), c))

    gamma: dict[int, tuple[str, ...]] = {}
    families: dict[int, dict[str, tuple[str, ...]]] = {}
    missing = []
    for k, cls in zip(ks, targets):
        found = None
        for g in pools[cls]:
            fam = _family_around(q, g, pools[cls])
            if fam is not None:
                found = (g, fam)
                break
        if found is None:
            missing.append(k)
            continue
        gamma[k], families[k] = found
    if missing:
        return CertificateFailure(f"no geodesic family for directions {missing} "
                                  f"within length {search_bound}", missing)
    anchored = all(families[k][q.arrow[g[0]].tail] == g for k, g in gamma.items())
    return GeodesicCertificate(gamma, families,
                               {"classes": True, "sigma_free": True,
                                "pairwise_parallel": True, "anchored": anchored})


def _family_around(q: DimerQuiver, g: tuple[str, ...], pool: list[tuple[str, ...]]):
    fam: dict[str, tuple[str, ...]] = {}
    chosen: list[tuple[str, ...]] = [g]
    fam[q.arrow[g[0]].tail] = g
    for i, a in enumerate(g):
        v = q.arrow[a].tail
        fam.setdefault(v, g[i:] + g[:i])
    for v in q.vertices:
        if v in fam:
            continue
        for c in pool:
            if v not in {q.arrow[a].tail for a in c}:
                continue
            if all(not transversely_intersect(q, c, d) for d in chosen):
                i = next(i for i, a in enumerate(c) if q.arrow[a].tail == v)
                fam[v] = c[i:] + c[:i]
                chosen.append(c)
                break
        else:
            return None
    return fam
