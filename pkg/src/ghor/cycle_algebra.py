"""Cycle algebra S, center R, Krull dimension and nonnoetherian witnesses.

Everything is monomial, so S and R are handled as sets of exponent
vectors.  Cycles at a vertex are explored as (vertex, monomial) states,
which collapses the exponential number of paths to the much smaller number
of distinct path images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .matchings import MatchingCatalog
from .monomials import ExponentVector, format_monomial, tau_bar
from .quiver import DimerQuiver

Mono = tuple[int, ...]


# cycles ------------------------------------------------------------------------

def _min_rotation(c: tuple[str, ...]) -> tuple[str, ...]:
    return min(c[i:] + c[:i] for i in range(len(c)))


@dataclass
class CycleCatalog:
    max_len: int
    cycles: list[tuple[str, ...]]
    by_vertex: dict[str, list[tuple[str, ...]]]
    truncated: bool = False

    def all_cycles(self) -> list[tuple[str, ...]]:
        return list(self.cycles)

    def at(self, v: str) -> list[tuple[str, ...]]:
        return self.by_vertex.get(v, [])


def enumerate_cycles(q: DimerQuiver, max_len: int, limit: int = 0) -> CycleCatalog:
    """Cycles of length <= max_len, one per rotation class.

    ``by_vertex[v]`` lists, for each cycle through v, its rotations starting
    at v (one per distinct visit).
    """
    by_vertex: dict[str, list[tuple[str, ...]]] = {v: [] for v in q.vertices}
    if max_len <= 0 or q.n_arrows == 0:
        return CycleCatalog(max_len, [], by_vertex)
    flat, offs = _kernels.canonical_cycles(q.tails, q.heads, q.n_vertices, max_len, limit)
    ids = [a.id for a in q.arrows]
    cycles = []
    for k in range(len(offs) - 1):
        c = tuple(ids[i] for i in flat[offs[k]:offs[k + 1]])
        cycles.append(_min_rotation(c))
    cycles.sort(key=lambda c: (len(c), c))
    for c in cycles:
        seen = set()
        for i, a in enumerate(c):
            r = c[i:] + c[:i]
            if r in seen:
                continue
            seen.add(r)
            by_vertex[q.arrow[a].tail].append(r)
    return CycleCatalog(max_len, cycles, by_vertex, truncated=limit > 0 and len(cycles) >= limit)


# path images by state exploration ------------------------------------------------

def _arrow_images(q: DimerQuiver, cat: MatchingCatalog) -> list[Mono]:
    sm = cat.simple_membership
    return [tuple(int(x) for x in sm[:, i]) for i in range(q.n_arrows)]


def cycle_images(q: DimerQuiver, cat: MatchingCatalog, v: str, max_len: int | None = None,
                 max_degree: int | None = None, bound: Mono | None = None) -> set[Mono]:
    """tau_bar images of all nontrivial cycles at v within the given limits.

    ``bound`` keeps only paths whose image divides it, which is exact for
    deciding whether a given monomial is realised at v.
    """
    imgs = _arrow_images(q, cat)
    out_arrows: dict[int, list[int]] = {}
    for i, t in enumerate(q.tails):
        out_arrows.setdefault(int(t), []).append(i)
    iv = q.vindex[v]
    zero = (0,) * cat.n_simple
    seen = {(iv, zero)}
    frontier = [(iv, zero)]
    found: set[Mono] = set()
    length = 0
    while frontier and (max_len is None or length < max_len):
        length += 1
        nxt = []
        for u, m in frontier:
            for a in out_arrows.get(u, ()):
                m2 = tuple(x + y for x, y in zip(m, imgs[a]))
                if max_degree is not None and sum(m2) > max_degree:
                    continue
                if bound is not None and any(x > b for x, b in zip(m2, bound)):
                    continue
                w = int(q.heads[a])
                if w == iv:
                    found.add(m2)
                st = (w, m2)
                if st not in seen:
                    seen.add(st)
                    nxt.append(st)
        frontier = nxt
    return found


def realized_everywhere(q: DimerQuiver, cat: MatchingCatalog, m: Mono) -> bool:
    """Is m the image of a cycle at every vertex?  Exact; no truncation."""
    m = tuple(m)
    if not any(m):
        return True
    for v in q.vertices:
        if m not in cycle_images(q, cat, v, bound=m):
            return False
    return True


# semigroups -----------------------------------------------------------------------

@dataclass
class SemigroupPresentation:
    generators: list[ExponentVector]
    ring: str = "S"
    truncation: dict = field(default_factory=dict)
    names: list[str] = field(default_factory=list)
    stable: bool | None = None

    @property
    def matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, 0), dtype=np.int64)
        return np.array([g.exps for g in self.generators], dtype=np.int64)

    def to_json(self, var_names: Sequence[str]) -> dict:
        return {"ring": self.ring,
                "generators": [format_monomial(g, var_names) for g in self.generators],
                "exponents": [list(g.exps) for g in self.generators],
                "names": list(self.names),
                "truncation": dict(self.truncation),
                "stable": self.stable}


def member(m, p: SemigroupPresentation | Sequence) -> bool:
    """Is m a nonnegative integer combination of the generators?"""
    gens = p.generators if isinstance(p, SemigroupPresentation) else list(p)
    target = np.array(tuple(m), dtype=np.int64)
    if not gens:
        return not target.any()
    G = np.array([tuple(g) for g in gens], dtype=np.int64)
    # big generators first tends to settle the search quickly
    order = np.argsort(-G.sum(axis=1), kind="stable")
    return bool(_kernels.member_one(target, np.ascontiguousarray(G[order])))


def member_many(ms: Sequence, gens: Sequence) -> np.ndarray:
    if not len(ms):
        return np.zeros(0, dtype=bool)
    G = np.array([tuple(g) for g in gens], dtype=np.int64)
    order = np.argsort(-G.sum(axis=1), kind="stable")
    T = np.array([tuple(m) for m in ms], dtype=np.int64)
    return _kernels.member_batch(T, np.ascontiguousarray(G[order])).astype(bool)


def minimal_generators(vectors: Iterable[Mono]) -> list[Mono]:
    """Minimal generating set of the semigroup spanned by the vectors.

    Ordered by total degree then lex.  Everything of smaller degree is
    already generated by the vectors kept so far, so a vector is redundant
    exactly when those kept vectors produce it.
    """
    vs = sorted({tuple(v) for v in vectors if any(v)}, key=lambda v: (sum(v), v))
    kept: list[Mono] = []
    i = 0
    while i < len(vs):
        d = sum(vs[i])
        j = i
        while j < len(vs) and sum(vs[j]) == d:
            j += 1
        layer = vs[i:j]
        if kept:
            hit = member_many(layer, kept)
            kept.extend(v for v, h in zip(layer, hit) if not h)
        else:
            kept.extend(layer)
        i = j
    return kept


def lattice_rank(p: SemigroupPresentation | Sequence) -> int:
    """Rank of the lattice spanned by the generators (exact)."""
    import sympy

    gens = p.generators if isinstance(p, SemigroupPresentation) else list(p)
    if not gens:
        return 0
    return int(sympy.Matrix([list(tuple(g)) for g in gens]).rank())


def semigroup_truncation(gens: Sequence[Mono], max_degree: int) -> set[Mono]:
    """All elements (0 included) of the semigroup of degree <= max_degree."""
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        return set()
    G = np.array(gens, dtype=np.int64)
    frontier = np.zeros((1, G.shape[1]), dtype=np.int64)
    seen = {tuple(frontier[0])}
    while len(frontier):
        cand = (frontier[:, None, :] + G[None, :, :]).reshape(-1, G.shape[1])
        cand = cand[cand.sum(axis=1) <= max_degree]
        if not len(cand):
            break
        cand = np.unique(cand, axis=0)
        fresh = [i for i, row in enumerate(map(tuple, cand.tolist())) if row not in seen]
        frontier = cand[fresh]
        seen.update(map(tuple, frontier.tolist()))
    return seen


# S and R ------------------------------------------------------------------------

def default_max_len(q: DimerQuiver) -> int:
    return 3 * max((len(f.arrows) for f in q.faces), default=1)


def default_max_degree(cat: MatchingCatalog) -> int:
    return 3 * cat.n_simple


def first_return_images(q: DimerQuiver, cat: MatchingCatalog, v: str,
                        max_len: int | None = None,
                        max_degree: int | None = None) -> dict[Mono, int]:
    """Images of cycles at v that meet v only at their ends.

    Every cycle at v is a product of such cycles, so these generate the
    image monoid at v.  Maps each image to the shortest length realising it.
    """
    imgs = _arrow_images(q, cat)
    out_arrows: dict[int, list[int]] = {}
    for i, t in enumerate(q.tails):
        out_arrows.setdefault(int(t), []).append(i)
    iv = q.vindex[v]
    zero = (0,) * cat.n_simple
    seen = {(iv, zero)}
    frontier = [(iv, zero)]
    found: dict[Mono, int] = {}
    length = 0
    while frontier and (max_len is None or length < max_len):
        length += 1
        nxt = []
        for u, m in frontier:
            for a in out_arrows.get(u, ()):
                m2 = tuple(x + y for x, y in zip(m, imgs[a]))
                if max_degree is not None and sum(m2) > max_degree:
                    continue
                w = int(q.heads[a])
                if w == iv:
                    found.setdefault(m2, length)
                    continue
                st = (w, m2)
                if st not in seen:
                    seen.add(st)
                    nxt.append(st)
        frontier = nxt
        if max_len is None and max_degree is None and length > 64 * max(1, q.n_arrows):
            raise ValueError("unbounded search: give max_len or max_degree")
    return found


def cycle_algebra_gens(q: DimerQuiver, cat: MatchingCatalog, max_len: int | None = None,
                       step: int = 1) -> SemigroupPresentation:
    """Minimal generators of S from cycles of length <= max_len.

    ``stable`` records whether the generators were already the same with
    cycles of length <= max_len - step.
    """
    L = default_max_len(q) if max_len is None else max_len
    found: dict[Mono, int] = {}
    for v in q.vertices:
        for m, l in first_return_images(q, cat, v, max_len=L).items():
            if m not in found or l < found[m]:
                found[m] = l
    gens = minimal_generators(found)
    stable = None
    if L - step >= 1:
        before = minimal_generators(m for m, l in found.items() if l <= L - step)
        stable = before == gens
    return SemigroupPresentation([ExponentVector(g, "S") for g in gens], "S",
                                 {"max_cycle_len": L}, [], stable)


@dataclass
class CenterPresentation:
    sigma: ExponentVector
    monomials: list[ExponentVector]
    ideal_part: list[ExponentVector]
    truncation: dict

    def to_json(self, var_names: Sequence[str]) -> dict:
        return {"sigma": format_monomial(self.sigma, var_names),
                "n_monomials": len(self.monomials),
                "ideal_generators": [format_monomial(m, var_names) for m in self.ideal_part],
                "truncation": dict(self.truncation)}


def center_monomials(q: DimerQuiver, cat: MatchingCatalog, max_degree: int | None = None,
                     max_len: int | None = None) -> CenterPresentation:
    """Monomials of degree <= D that are cycle images at every vertex.

    The ideal part lists the minimal such monomials (under division) that are
    not powers of sigma.
    """
    D = default_max_degree(cat) if max_degree is None else max_degree
    common: set[Mono] | None = None
    for v in q.vertices:
        prim = first_return_images(q, cat, v, max_len=max_len, max_degree=D)
        imgs = semigroup_truncation(minimal_generators(prim), D)
        imgs.discard((0,) * cat.n_simple)
        common = imgs if common is None else common & imgs
        if not common:
            break
    common = common or set()
    sig = (1,) * cat.n_simple
    mons = sorted(common, key=lambda m: (sum(m), m))
    non_sigma = [m for m in mons if len(set(m)) > 1]
    minimal: list[Mono] = []
    for m in non_sigma:
        if minimal and (np.array(minimal) <= np.array(m)).all(axis=1).any():
            continue
        minimal.append(m)
    trunc = {"max_degree": D}
    if max_len is not None:
        trunc["max_cycle_len"] = max_len
    return CenterPresentation(ExponentVector(sig, "S"), [ExponentVector(m, "S") for m in mons],
                              [ExponentVector(m, "S") for m in minimal], trunc)


def ideal_truncation(ideal_gens: Sequence[Mono], s_gens: Sequence[Mono], sigma: Mono,
                     max_degree: int) -> set[Mono]:
    """Degree <= D part of k[sigma] + (ideal_gens) S, as a set of monomials (1 excluded)."""
    s_part = semigroup_truncation(s_gens, max_degree)
    out = set()
    d = sum(sigma)
    n = 1
    while d * n <= max_degree:
        out.add(tuple(n * x for x in sigma))
        n += 1
    for g in ideal_gens:
        dg = sum(g)
        for s in s_part:
            if dg + sum(s) <= max_degree:
                out.add(tuple(a + b for a, b in zip(g, s)))
    return out


# witnesses --------------------------------------------------------------------------

@dataclass
class Witness:
    monomial: ExponentVector
    cycle: tuple[str, ...] | None
    n_max: int
    sigma_shift: int | None

    def chain(self, name: str = "p", sigma_name: str = "sigma") -> str:
        if self.sigma_shift is None:
            return ""
        s = "" if self.sigma_shift == 0 else (
            sigma_name if self.sigma_shift == 1 else f"{sigma_name}^{self.sigma_shift}")
        terms = []
        for n in range(1, 4):
            gens = ", ".join(name if k == 1 else f"{name}^{k}" for k in range(1, n + 1))
            terms.append(f"({gens}){s}R" if n > 1 else f"{name}{s}R")
        return " < ".join(terms) + " < ..."

    def to_json(self, var_names: Sequence[str]) -> dict:
        return {"monomial": format_monomial(self.monomial, var_names),
                "cycle": list(self.cycle) if self.cycle else None,
                "n_max": self.n_max, "sigma_shift": self.sigma_shift,
                "chain": self.chain()}


def nonnoetherian_witness(q: DimerQuiver, cat: MatchingCatalog, s_gens: SemigroupPresentation,
                          n_max: int = 5, cycles: CycleCatalog | None = None,
                          max_shift: int = 4) -> Witness | None:
    """A cycle image p with p^n outside R for n = 1..n_max.

    Candidates are the S generators other than sigma, in presentation order.
    The reported sigma shift is the least e with p^n sigma^e in R for the
    same range of n, which gives the ascending chain p sigma^e R < ...
    """
    sig = (1,) * cat.n_simple
    for g in s_gens.generators:
        m = g.exps
        if m == sig:
            continue
        if all(not realized_everywhere(q, cat, tuple(n * x for x in m)) for n in range(1, n_max + 1)):
            shift = None
            for e in range(1, max_shift + 1):
                if all(realized_everywhere(q, cat, tuple(n * x + e for x in m))
                       for n in range(1, n_max + 1)):
                    shift = e
                    break
            return Witness(g, _cycle_with_image(q, cat, m, cycles), n_max, shift)
    return None


def _cycle_with_image(q: DimerQuiver, cat: MatchingCatalog, m: Mono,
                      cycles: CycleCatalog | None) -> tuple[str, ...] | None:
    if cycles is None:
        return None
    for c in cycles.all_cycles():
        if tau_bar(q, cat, c).exps == tuple(m):
            return c
    return None


def same_class_monomial(q: DimerQuiver, cat: MatchingCatalog, p1, p2) -> bool:
    """Do the images differ by an integer power of sigma?"""
    d = tau_bar(q, cat, p1) - tau_bar(q, cat, p2)
    return len(set(d.exps)) <= 1
