"""Perfect matchings as exact covers of the face set, and simple matchings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .quiver import DimerQuiver, QuiverError


@dataclass(frozen=True)
class Matching:
    arrows: frozenset[str]
    indices: tuple[int, ...]
    perfect: bool = True
    simple: bool | None = None

    def __contains__(self, arrow_id: str) -> bool:
        return arrow_id in self.arrows

    def sorted_ids(self) -> list[str]:
        return sorted(self.arrows)


@dataclass
class MatchingCatalog:
    quiver: DimerQuiver
    all_perfect: list[Matching]
    simple_indices: list[int]
    diagnostics: list[str] = field(default_factory=list)
    names: list[str] = field(default_factory=list)

    @property
    def simple(self) -> list[Matching]:
        return [self.all_perfect[i] for i in self.simple_indices]

    @property
    def n_perfect(self) -> int:
        return len(self.all_perfect)

    @property
    def n_simple(self) -> int:
        return len(self.simple_indices)

    @property
    def membership(self) -> np.ndarray:
        """(|P|, |Q_1|) 0/1 matrix; row x, column a is 1 iff a is in x."""
        m = getattr(self, "_membership", None)
        if m is None:
            m = np.zeros((self.n_perfect, self.quiver.n_arrows), dtype=np.int64)
            for i, x in enumerate(self.all_perfect):
                m[i, list(x.indices)] = 1
            self._membership = m
        return m

    @property
    def simple_membership(self) -> np.ndarray:
        return self.membership[self.simple_indices]

    def simple_names(self) -> list[str]:
        if self.names:
            return [self.names[i] for i in self.simple_indices]
        return [f"s{j + 1}" for j in range(self.n_simple)]

    def perfect_names(self) -> list[str]:
        if self.names:
            return list(self.names)
        return [f"p{i + 1}" for i in range(self.n_perfect)]

    def to_json(self) -> dict:
        return {"perfect": [x.sorted_ids() for x in self.all_perfect],
                "simple": [i in set(self.simple_indices) for i in range(self.n_perfect)],
                "names": self.perfect_names()}


def _cover_rows(q: DimerQuiver, limit: int = 0) -> np.ndarray:
    if q.n_faces == 0 or q.n_arrows == 0:
        return np.zeros((0, q.n_arrows), dtype=np.uint8)
    # arrows not in exactly two faces can never be used; a self-pair makes
    # the kernel skip them
    pairs = q.arrow_face_pairs.copy()
    usable = np.array([len(fs) == 2 for fs in q.arrow_faces])
    pairs[~usable] = 0
    return _kernels.exact_cover(q.face_ptr, q.face_arrows, pairs, q.n_faces, q.n_arrows, limit)


def perfect_matchings(q: DimerQuiver, limit: int = 0) -> MatchingCatalog:
    rows = _cover_rows(q, limit)
    ids = [a.id for a in q.arrows]
    # canonical order: lexicographic on the sorted arrow-id lists
    sets = []
    for r in rows:
        idx = tuple(int(i) for i in np.flatnonzero(r))
        sets.append((sorted(ids[i] for i in idx), idx))
    sets.sort(key=lambda s: s[0])
    diag = []
    if not sets:
        diag.append("no perfect matching: some face cannot be covered")
    simple_flags = _simple_flags(q, [s[1] for s in sets])
    ms = [Matching(frozenset(s[0]), s[1], True, bool(f)) for s, f in zip(sets, simple_flags)]
    cat = MatchingCatalog(q, ms, [i for i, m in enumerate(ms) if m.simple], diag)
    cat.names = default_names(cat)
    return cat


def _simple_flags(q: DimerQuiver, index_sets: Sequence[Sequence[int]]) -> np.ndarray:
    if not index_sets:
        return np.zeros(0, dtype=np.uint8)
    removed = np.zeros((len(index_sets), q.n_arrows), dtype=np.uint8)
    for i, idx in enumerate(index_sets):
        removed[i, list(idx)] = 1
    return _kernels.strongly_connected_batch(q.tails, q.heads, q.n_vertices, removed)


def is_perfect(q: DimerQuiver, arrows: Sequence[str]) -> bool:
    s = set(arrows)
    return all(sum(1 for a in f.arrows if a in s) == 1 for f in q.faces)


def is_simple(q: DimerQuiver, m: Matching | Sequence[str]) -> bool:
    arrows = m.arrows if isinstance(m, Matching) else frozenset(m)
    if not is_perfect(q, arrows):
        raise QuiverError("is_simple needs a perfect matching")
    idx = [q.aindex[a] for a in arrows]
    return bool(_simple_flags(q, [idx])[0])


def default_names(cat: MatchingCatalog) -> list[str]:
    """Names for perfect matchings: the quiver can suggest them via arrow ids.

    A simple matching whose arrows all carry a common prefix ``x1_`` style tag
    is not required; by default simple ones are s1.., the rest p1..
    """
    names = []
    si = 0
    pi = 0
    simple = set(cat.simple_indices)
    for i in range(cat.n_perfect):
        if i in simple:
            si += 1
            names.append(f"s{si}")
        else:
            pi += 1
            names.append(f"p{pi}")
    return names


def rename(cat: MatchingCatalog, names: dict[frozenset[str], str]) -> None:
    """Attach human names to matchings given by their arrow sets."""
    for i, m in enumerate(cat.all_perfect):
        if m.arrows in names:
            cat.names[i] = names[m.arrows]


class SigmaError(ValueError):
    pass


def sigma(q: DimerQuiver, cat: MatchingCatalog):
    """The product of all simple matchings, checked against every face."""
    from .monomials import ExponentVector, tau_bar

    if cat.n_simple == 0:
        raise SigmaError("quiver has no simple matching")
    s = ExponentVector.ones(cat.n_simple, "S")
    for f in q.faces:
        if tau_bar(q, cat, f.arrows) != s:
            raise SigmaError(f"face {f.id} does not map to sigma")
    return s
