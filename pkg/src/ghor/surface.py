"""Fundamental 2N-gons, their deck groups and class vectors.

Two alphabets show up here.

* Crossing letters ``+k`` / ``-k`` (``1 <= k <= N``): a path leaves the
  current polygon copy through side ``k`` (resp. side ``k + N``).
* Side letters ``+i`` / ``-i``: the generators ``a_i`` of the primal deck
  group ``G = <a_1..a_N | a_1...a_N a_1^-1...a_N^-1>``, one per side pair.
  A polygon copy is a group element ``g`` and its corner ``m`` sits at the
  lifted point ``g * w_m`` where ``w_m`` is the length ``m`` prefix of the
  boundary word.  This is what lets paths run through polygon corners,
  including the pinch point when ``N`` is odd.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Word = tuple[int, ...]


class PolygonError(ValueError):
    pass


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _letter_key(x: int) -> tuple[int, int]:
    # shortlex letter order: +1 < -1 < +2 < -2 < ...
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


class DehnRewriter:
    """Dehn's algorithm for a set of cyclic relators.

    Any subword longer than half of a cyclic conjugate of a relator (or its
    inverse) is replaced by the inverse of the complement.  Subwords of
    exactly half length are swapped when the complement is shortlex smaller,
    which makes the output closer to canonical without risking loops.
    """

    def __init__(self, relators: Sequence[Sequence[int]]):
        pieces = set()
        for r in relators:
            r = tuple(r)
            for rr in (r, inverse(r)):
                for i in range(len(rr)):
                    pieces.add(rr[i:] + rr[:i])
        self._span = max((len(p) for p in pieces), default=0)
        self._by_first: dict[int, list[Word]] = {}
        for p in sorted(pieces, key=shortlex_key):
            self._by_first.setdefault(p[0], []).append(p)

    def _find(self, w: list[int], lo: int):
        n = len(w)
        for i in range(lo, n):
            for rel in self._by_first.get(w[i], ()):
                L = len(rel)
                k = 0
                while k < L and i + k < n and w[i + k] == rel[k]:
                    k += 1
                if 2 * k > L:
                    return i, k, inverse(rel[k:])
                if 2 * k == L:
                    repl = inverse(rel[k:])
                    if shortlex_key(repl) < shortlex_key(w[i:i + k]):
                        return i, k, repl
        return None

    def reduce(self, w: Sequence[int], clean: int = 0) -> Word:
        """Dehn-reduce w.  The first ``clean`` letters must already be reduced.

        A match that starts more than one relator length before the first
        changed letter would lie inside reduced text, so rescans begin there;
        the result is the same as a full rescan after every rewrite.
        """
        cur = list(w[:clean])
        lo = _push(cur, w[clean:])
        while True:
            hit = self._find(cur, max(0, lo - self._span))
            if hit is None:
                return tuple(cur)
            i, k, repl = hit
            rest = cur[i + k:]
            del cur[i:]
            lo = _push(cur, repl + tuple(rest))


def _push(stack: list[int], letters: Iterable[int]) -> int:
    """Append with free cancellation; returns the lowest index touched."""
    low = len(stack)
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
            low = min(low, len(stack))
        else:
            stack.append(x)
    return low


@dataclass(frozen=True)
class FundamentalPolygon:
    """Regular 2N-gon with side k glued to side k+N."""

    n_half: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_sides(self) -> int:
        return 2 * self.n_half

    @property
    def smooth(self) -> bool:
        return self.n_half % 2 == 0

    @property
    def genus(self) -> int:
        return self.n_half // 2

    @property
    def flat(self) -> bool:
        return self.n_half == 2

    @property
    def sides(self) -> tuple[int, ...]:
        return tuple(range(1, self.n_sides + 1))

    def mate(self, k: int) -> int:
        """The side glued to side k."""
        if not 1 <= k <= self.n_sides:
            raise PolygonError(f"side {k} out of range 1..{self.n_sides}")
        return (k - 1 + self.n_half) % self.n_sides + 1

    # primal deck group ------------------------------------------------

    @property
    def relator(self) -> Word:
        r = self._cache.get("relator")
        if r is None:
            N = self.n_half
            r = self._cache["relator"] = tuple(range(1, N + 1)) + tuple(-i for i in range(1, N + 1))
        return r

    def prefix(self, m: int) -> Word:
        """Boundary word up to corner m (corner m ends side m)."""
        return self.relator[:m % self.n_sides]

    def crossing_letter(self, label: int) -> int:
        """Normalise a signed side label to a crossing letter in +-[N]."""
        N = self.n_half
        k = abs(label)
        if label == 0 or k > 2 * N:
            raise PolygonError(f"crossing label {label} out of range")
        sign = 1 if label > 0 else -1
        if k > N:
            k -= N
            sign = -sign
        return sign * k

    def crossing_deck(self, label: int) -> Word:
        """Deck element of leaving the copy through the labelled side.

        Leaving through side s at copy g lands in copy g * w_{s-1} * w_{s+N}^-1.
        """
        x = self.crossing_letter(label)
        s = x if x > 0 else -x + self.n_half
        return free_reduce(self.prefix(s - 1) + inverse(self.prefix(s + self.n_half)))

    def corner_deck(self, m_from: int, m_to: int) -> Word:
        """Copy change when a path arrives at corner m_from and leaves at m_to."""
        return free_reduce(self.prefix(m_from) + inverse(self.prefix(m_to)))

    def corner_cycles(self) -> list[tuple[int, ...]]:
        """Corners grouped by the point they become on the surface.

        Walking around a corner crosses sides m+1, m+N+2, ... so corner m is
        followed by corner m+N+1.  For odd N this splits into two cones.
        """
        n = self.n_sides
        seen: set[int] = set()
        cyc = []
        for m in range(n):
            if m in seen:
                continue
            c = []
            x = m
            while x not in seen:
                seen.add(x)
                c.append(x)
                x = (x + self.n_half + 1) % n
            cyc.append(tuple(c))
        return cyc

    @property
    def single_vertex(self) -> bool:
        return len(self.corner_cycles()) == 1

    def corner_walk(self, m_from: int, m_to: int) -> Word:
        """Crossing letters met while turning around a corner point.

        Returns the shorter of the two directions (forward on ties).  Corners
        in different cones of a pinch point give the empty walk.
        """
        n, N = self.n_sides, self.n_half
        m_from %= n
        m_to %= n
        fwd: list[int] = []
        x = m_from
        for _ in range(n + 1):
            if x == m_to:
                break
            fwd.append(self.crossing_letter(x + 1))
            x = (x + N + 1) % n
        else:
            return ()
        bwd: list[int] = []
        x = m_from
        while x != m_to:
            side = x if x else n
            bwd.append(self.crossing_letter(side))
            x = (x - N - 1) % n
        return tuple(fwd) if len(fwd) <= len(bwd) else tuple(bwd)

    # word problem -------------------------------------------------------

    @property
    def deck(self) -> "DeckGroup":
        g = self._cache.get("deck")
        if g is None:
            g = self._cache["deck"] = DeckGroup(self.n_half)
        return g

    def dual_relators(self) -> list[Word]:
        """Crossing-letter words read around each corner point."""
        out = []
        for cyc in self.corner_cycles():
            out.append(tuple(self.crossing_letter(m + 1) for m in cyc))
        return out

    # class bookkeeping ------------------------------------------------------

    def crossing_matrix(self) -> list[list[int]]:
        """Column k is the abelianised deck element of crossing side k."""
        N = self.n_half
        return [[(1 if i < k else -1 if i > k else 0) for k in range(N)] for i in range(N)]


def make_polygon(n_half: int) -> FundamentalPolygon:
    if not isinstance(n_half, int) or n_half < 2:
        raise PolygonError(f"need N >= 2, got {n_half!r}")
    return _polygon(n_half)


@lru_cache(maxsize=None)
def _polygon(n_half: int) -> FundamentalPolygon:
    return FundamentalPolygon(n_half)


class DeckGroup:
    """Exact arithmetic in G = <a_1..a_N | a_1...a_N a_1^-1...a_N^-1>.

    N = 2 is Z^2.  N = 3 is Z^2 * Z via a1 = z, a2 = z^-1 x, a3 = y^-1 z.
    N >= 4 is a C'(1/6) one-relator group, so Dehn's algorithm decides
    triviality; the normal form there is best effort only, so comparisons go
    through :meth:`equal`.
    """

    def __init__(self, n_half: int):
        self.N = n_half
        r = tuple(range(1, n_half + 1)) + tuple(-i for i in range(1, n_half + 1))
        self._dehn = DehnRewriter([r])
        self.exact_normal_form = n_half <= 3

    def abelian(self, w: Sequence[int]) -> tuple[int, ...]:
        v = [0] * self.N
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def _z2z(self, w: Sequence[int]) -> Word:
        # syllables: ('p', [x, y]) in Z^2 or ('z', r)
        img = {1: (("z", 1),), -1: (("z", -1),),
               2: (("z", -1), ("x", 1)), -2: (("x", -1), ("z", 1)),
               3: (("y", -1), ("z", 1)), -3: (("z", -1), ("y", 1))}
        syl: list[list] = []
        for a in w:
            for g, e in img[a]:
                kind = "z" if g == "z" else "p"
                if syl and syl[-1][0] == kind:
                    if kind == "z":
                        syl[-1][1] += e
                        if syl[-1][1] == 0:
                            syl.pop()
                    else:
                        syl[-1][1][0 if g == "x" else 1] += e
                        if syl[-1][1] == [0, 0]:
                            syl.pop()
                    # merge neighbours that became adjacent
                    while len(syl) >= 2 and syl[-1][0] == syl[-2][0]:
                        k, v = syl.pop()
                        if k == "z":
                            syl[-1][1] += v
                            if syl[-1][1] == 0:
                                syl.pop()
                        else:
                            syl[-1][1][0] += v[0]
                            syl[-1][1][1] += v[1]
                            if syl[-1][1] == [0, 0]:
                                syl.pop()
                else:
                    if kind == "z":
                        syl.append(["z", e])
                    else:
                        syl.append(["p", [e, 0] if g == "x" else [0, e]])
        out: list[int] = []
        for k, v in syl:
            if k == "z":
                out += [1 if v > 0 else -1] * abs(v)
            else:
                p, q = v
                out += list((1, 2) if p > 0 else (-2, -1)) * abs(p)
                out += list((1, -3) if q > 0 else (3, -1)) * abs(q)
        return free_reduce(out)

    def normal(self, w: Sequence[int], clean: int = 0) -> Word:
        """Normal form; ``clean`` is a prefix length already in normal form."""
        if self.N == 2:
            x, y = self.abelian(w)
            return (1,) * x + (-1,) * (-x) + (2,) * y + (-2,) * (-y)
        if self.N == 3:
            return self._z2z(w)
        return self._dehn.reduce(w, clean)

    def is_identity(self, w: Sequence[int]) -> bool:
        if self.N == 2:
            return self.abelian(w) == (0, 0)
        if self.N == 3:
            return not self._z2z(w)
        return not self._dehn.reduce(w)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        if self.exact_normal_form:
            return self.normal(u) == self.normal(v)
        return self.is_identity(inverse(u) + tuple(v))


def reduce_word(w: Sequence[int], poly: FundamentalPolygon) -> Word:
    """Canonical reduced form of a crossing word.

    Free cancellation, then Dehn rewriting with the corner relators read in
    crossing letters.  For N = 2 and N = 3 the polygon copies reachable by
    crossings form Z^2 and the result is the exact normal form t1^a t2^b.
    """
    letters = [poly.crossing_letter(x) for x in w]
    N = poly.n_half
    if N == 2:
        a = sum(1 if x > 0 else -1 for x in letters if abs(x) == 1)
        b = sum(1 if x > 0 else -1 for x in letters if abs(x) == 2)
        return _power(1, a) + _power(2, b)
    if N == 3:
        # corner relators give t3 = t2 t1^-1 and [t1, t2] = 1
        a = b = 0
        for x in letters:
            s = 1 if x > 0 else -1
            if abs(x) == 1:
                a += s
            elif abs(x) == 2:
                b += s
            else:
                a -= s
                b += s
        return _power(1, a) + _power(2, b)
    rw = poly._cache.get("dual_dehn")
    if rw is None:
        rw = poly._cache["dual_dehn"] = DehnRewriter(poly.dual_relators())
    return rw.reduce(letters)


def _power(g: int, e: int) -> Word:
    return (g,) * e if e >= 0 else (-g,) * (-e)


def class_of(crossings: Iterable[int], poly: FundamentalPolygon) -> tuple[int, ...]:
    """Signed crossing counts: entry k is n_k - n_{k+N}."""
    v = [0] * poly.n_half
    for label in crossings:
        x = poly.crossing_letter(label)
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def crossing_class_from_abelian(d: Sequence[int], poly: FundamentalPolygon) -> tuple[int, ...]:
    """Convert an abelianised deck displacement to crossing counts.

    Only possible on smooth surfaces, where the crossing matrix is unimodular.
    """
    inv = poly._cache.get("minv")
    if inv is None:
        inv = poly._cache["minv"] = _inverse_matrix(poly.crossing_matrix())
    out = []
    for row in inv:
        s = sum(Fraction(a) * b for a, b in zip(row, d))
        if s.denominator != 1:
            raise PolygonError("displacement is not an integral crossing class")
        out.append(int(s))
    return tuple(out)


def _inverse_matrix(m: list[list[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise PolygonError("crossing matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]
