"""Matching monomials of paths: eta_bar over all perfect matchings, tau_bar over simple ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matchings import MatchingCatalog
from .quiver import DimerQuiver, PathError


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ExponentVector:
    exps: tuple[int, ...]
    ring: str = "S"  # "P" for k[P], "S" for k[S]

    @classmethod
    def zeros(cls, n: int, ring: str = "S") -> "ExponentVector":
        return cls((0,) * n, ring)

    @classmethod
    def ones(cls, n: int, ring: str = "S") -> "ExponentVector":
        return cls((1,) * n, ring)

    @classmethod
    def of(cls, arr, ring: str = "S") -> "ExponentVector":
        return cls(tuple(int(x) for x in arr), ring)

    def _check(self, other: "ExponentVector") -> None:
        if self.ring != other.ring or len(self.exps) != len(other.exps):
            raise RingMismatch(f"k[{self.ring}] vs k[{other.ring}]")

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        self._check(other)
        return ExponentVector(tuple(a + b for a, b in zip(self.exps, other.exps)), self.ring)

    def __sub__(self, other: "ExponentVector") -> "ExponentVector":
        """Quotient of monomials; may leave negative exponents (a Laurent monomial)."""
        self._check(other)
        return ExponentVector(tuple(a - b for a, b in zip(self.exps, other.exps)), self.ring)

    def __mul__(self, k: int) -> "ExponentVector":
        return ExponentVector(tuple(k * a for a in self.exps), self.ring)

    __rmul__ = __mul__

    def divides(self, other: "ExponentVector") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.exps, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.exps)

    def __iter__(self):
        return iter(self.exps)

    def format(self, names: Sequence[str] | None = None) -> str:
        return format_monomial(self, names)


def format_monomial(m: ExponentVector, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"v{i + 1}" for i in range(len(m))]
    parts = []
    for n, e in zip(names, m.exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


def _path(q: DimerQuiver, p) -> tuple[str, ...]:
    if isinstance(p, str):
        p = q.parse_path(p)
    p = tuple(p)
    q.check_path(p)
    return p


def _count_arrows(q: DimerQuiver, p: Sequence[str]) -> np.ndarray:
    c = np.zeros(q.n_arrows, dtype=np.int64)
    for a in p:
        c[q.aindex[a]] += 1
    return c


def eta_bar(q: DimerQuiver, cat: MatchingCatalog, p) -> ExponentVector:
    p = _path(q, p)
    return ExponentVector.of(cat.membership @ _count_arrows(q, p), "P")


def tau_bar(q: DimerQuiver, cat: MatchingCatalog, p) -> ExponentVector:
    p = _path(q, p)
    return ExponentVector.of(cat.simple_membership @ _count_arrows(q, p), "S")


def restrict_to_simple(cat: MatchingCatalog, m: ExponentVector) -> ExponentVector:
    if m.ring != "P":
        raise RingMismatch("restriction needs a k[P] monomial")
    return ExponentVector(tuple(m.exps[i] for i in cat.simple_indices), "S")


def sigma_valuation(m: ExponentVector, sig: ExponentVector) -> int:
    """Largest l with sigma^l dividing m."""
    m._check(sig)
    ls = [a // s for a, s in zip(m.exps, sig.exps) if s > 0]
    return max(0, min(ls)) if ls else 0


@dataclass(frozen=True)
class GhorComparison:
    equal: bool
    tau_equal: bool
    counterexample: bool


def equal_in_ghor(q: DimerQuiver, cat: MatchingCatalog, p1, p2,
                  certified: bool = False) -> GhorComparison:
    """Compare two parallel paths in the ghor algebra.

    eta_bar decides.  With ``certified`` the quiver is known to be geodesic,
    so tau_bar must agree; a disagreement is flagged as a counterexample.
    """
    p1 = _path(q, p1)
    p2 = _path(q, p2)
    if q.check_path(p1) != q.check_path(p2):
        raise PathError("paths are not parallel")
    e = eta_bar(q, cat, p1) == eta_bar(q, cat, p2)
    t = tau_bar(q, cat, p1) == tau_bar(q, cat, p2)
    return GhorComparison(e, t, certified and e != t)
