"""Dimer quivers: the `.dq` format, structural checks and exports.

A file looks like::

    polygon 3
    vertex c corner
    vertex v1
    arrow a1 c v1 tail_corner=0
    arrow b1 v1 v1 cross=+2
    face f1 a1 b1 ...

``cross=`` names the side an arrow leaves the polygon through (``+k`` for
side k, ``-k`` for side k+N).  Vertices sitting at the polygon corners are
marked ``corner`` and every arrow end there says which corner it uses.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .surface import FundamentalPolygon, PolygonError, make_polygon


class QuiverError(ValueError):
    pass


class QuiverSyntaxError(QuiverError):
    def __init__(self, msg: str, line: int, col: int = 1, source: str | None = None):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {msg}")
        self.line = line
        self.col = col


class PathError(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str
    cross: int | None = None
    tail_corner: int | None = None
    head_corner: int | None = None


@dataclass(frozen=True)
class Face:
    id: str
    arrows: tuple[str, ...]


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def add(self, severity: str, code: str, message: str) -> None:
        self.findings.append(Finding(severity, code, message))

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "findings": [f.__dict__ for f in self.findings]}


class DimerQuiver:
    """Immutable quiver with faces; indices follow declaration order."""

    def __init__(self, polygon: FundamentalPolygon, vertices: Sequence[str],
                 arrows: Sequence[Arrow], faces: Sequence[Face],
                 corners: Iterable[str] = (), name: str = ""):
        self.polygon = polygon
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.arrows: tuple[Arrow, ...] = tuple(arrows)
        self.faces: tuple[Face, ...] = tuple(faces)
        self.corners = frozenset(corners)
        self.name = name
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.aindex = {a.id: i for i, a in enumerate(self.arrows)}
        self.findex = {f.id: i for i, f in enumerate(self.faces)}
        self.arrow = {a.id: a for a in self.arrows}

    # array views used by the kernels ----------------------------------------

    @cached_property
    def tails(self) -> np.ndarray:
        return np.array([self.vindex[a.tail] for a in self.arrows], dtype=np.int64)

    @cached_property
    def heads(self) -> np.ndarray:
        return np.array([self.vindex[a.head] for a in self.arrows], dtype=np.int64)

    @cached_property
    def face_ptr(self) -> np.ndarray:
        return np.cumsum([0] + [len(f.arrows) for f in self.faces]).astype(np.int64)

    @cached_property
    def face_arrows(self) -> np.ndarray:
        return np.array([self.aindex[a] for f in self.faces for a in f.arrows], dtype=np.int64)

    @cached_property
    def arrow_faces(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.arrows]
        for fi, f in enumerate(self.faces):
            for a in f.arrows:
                out[self.aindex[a]].append(fi)
        return out

    @cached_property
    def arrow_face_pairs(self) -> np.ndarray:
        """(|Q_1|, 2) array of incident faces; only meaningful when valid."""
        arr = np.full((len(self.arrows), 2), -1, dtype=np.int64)
        for i, fs in enumerate(self.arrow_faces):
            for j, f in enumerate(fs[:2]):
                arr[i, j] = f
        return arr

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def out_arrows(self, v: str) -> list[str]:
        return [a.id for a in self.arrows if a.tail == v]

    # paths ----------------------------------------------------------------

    def check_path(self, path: Sequence[str]) -> tuple[str, str]:
        """Return (tail, head) of a composable arrow word."""
        if not path:
            raise PathError("empty path")
        for a in path:
            if a not in self.arrow:
                raise PathError(f"unknown arrow {a!r}")
        for a, b in zip(path, path[1:]):
            if self.arrow[a].head != self.arrow[b].tail:
                raise PathError(f"{a} does not compose with {b}")
        return self.arrow[path[0]].tail, self.arrow[path[-1]].head

    def is_cycle(self, path: Sequence[str]) -> bool:
        t, h = self.check_path(path)
        return t == h

    def parse_path(self, text: str) -> tuple[str, ...]:
        toks = text.replace("*", " ").replace(",", " ").split()
        p = tuple(toks)
        self.check_path(p)
        return p

    # serialisation --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"polygon {self.polygon.n_half}"]
        for v in self.vertices:
            lines.append(f"vertex {v}" + (" corner" if v in self.corners else ""))
        for a in self.arrows:
            s = f"arrow {a.id} {a.tail} {a.head}"
            if a.cross is not None:
                s += f" cross={a.cross:+d}"
            if a.tail_corner is not None:
                s += f" tail_corner={a.tail_corner}"
            if a.head_corner is not None:
                s += f" head_corner={a.head_corner}"
            lines.append(s)
        for f in self.faces:
            lines.append(f"face {f.id} " + " ".join(f.arrows))
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"DimerQuiver({self.name or '?'}: N={self.polygon.n_half}, "
                f"|Q0|={self.n_vertices}, |Q1|={self.n_arrows}, faces={self.n_faces})")


# parsing --------------------------------------------------------------------

def _int_attr(val: str, line: int, col: int, src: str | None) -> int:
    try:
        return int(val)
    except ValueError:
        raise QuiverSyntaxError(f"expected integer, got {val!r}", line, col, src) from None


def parse_quiver(text: str, source: str | None = None) -> DimerQuiver:
    polygon = None
    vertices: list[str] = []
    corners: set[str] = set()
    arrows: list[Arrow] = []
    faces: list[Face] = []
    seen_ids: set[str] = set()
    face_lines: list[tuple[int, Face]] = []
    arrow_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        col0 = len(body) - len(body.lstrip()) + 1
        try:
            toks = shlex.split(body)
        except ValueError as e:
            raise QuiverSyntaxError(str(e), lineno, col0, source) from None
        kw = toks[0]
        if polygon is None and kw != "polygon":
            raise QuiverSyntaxError("first statement must be 'polygon N'", lineno, col0, source)
        if kw == "polygon":
            if polygon is not None:
                raise QuiverSyntaxError("duplicate polygon statement", lineno, col0, source)
            if len(toks) != 2:
                raise QuiverSyntaxError("usage: polygon N", lineno, col0, source)
            try:
                polygon = make_polygon(_int_attr(toks[1], lineno, col0, source))
            except PolygonError as e:
                raise QuiverSyntaxError(str(e), lineno, col0, source) from None
        elif kw == "vertex":
            if len(toks) not in (2, 3) or (len(toks) == 3 and toks[2] != "corner"):
                raise QuiverSyntaxError("usage: vertex NAME [corner]", lineno, col0, source)
            if toks[1] in vertices:
                raise QuiverSyntaxError(f"duplicate vertex {toks[1]!r}", lineno, col0, source)
            vertices.append(toks[1])
            if len(toks) == 3:
                corners.add(toks[1])
        elif kw == "arrow":
            if len(toks) < 4:
                raise QuiverSyntaxError("usage: arrow ID TAIL HEAD [cross=K]", lineno, col0, source)
            aid, t, h = toks[1:4]
            if aid in seen_ids:
                raise QuiverSyntaxError(f"duplicate id {aid!r}", lineno, col0, source)
            attrs: dict[str, int] = {}
            for tok in toks[4:]:
                col = body.find(tok) + 1
                if "=" not in tok:
                    raise QuiverSyntaxError(f"bad attribute {tok!r}", lineno, col, source)
                k, v = tok.split("=", 1)
                if k not in ("cross", "tail_corner", "head_corner") or k in attrs:
                    raise QuiverSyntaxError(f"bad attribute {tok!r}", lineno, col, source)
                attrs[k] = _int_attr(v, lineno, col, source)
            for v in (t, h):
                if v not in vertices:
                    raise QuiverSyntaxError(f"dangling vertex reference {v!r}", lineno,
                                            body.find(v) + 1, source)
            if "cross" in attrs:
                try:
                    polygon.crossing_letter(attrs["cross"])
                except PolygonError as e:
                    raise QuiverSyntaxError(str(e), lineno, col0, source) from None
            for end, v in (("tail_corner", t), ("head_corner", h)):
                if (v in corners) != (end in attrs):
                    msg = (f"arrow {aid}: {end} required at corner vertex {v!r}" if v in corners
                           else f"arrow {aid}: {end} given but {v!r} is not a corner vertex")
                    raise QuiverSyntaxError(msg, lineno, col0, source)
                if end in attrs and not 0 <= attrs[end] < polygon.n_sides:
                    raise QuiverSyntaxError(f"corner index out of range in {aid}", lineno, col0, source)
            arrows.append(Arrow(aid, t, h, attrs.get("cross"), attrs.get("tail_corner"),
                                attrs.get("head_corner")))
            seen_ids.add(aid)
            arrow_lines[aid] = lineno
        elif kw == "face":
            if len(toks) < 3:
                raise QuiverSyntaxError("usage: face ID ARROW...", lineno, col0, source)
            fid = toks[1]
            if fid in seen_ids:
                raise QuiverSyntaxError(f"duplicate id {fid!r}", lineno, col0, source)
            seen_ids.add(fid)
            f = Face(fid, tuple(toks[2:]))
            faces.append(f)
            face_lines.append((lineno, f))
        else:
            raise QuiverSyntaxError(f"unknown statement {kw!r}", lineno, col0, source)

    if polygon is None:
        raise QuiverSyntaxError("empty quiver description", 1, 1, source)
    amap = {a.id: a for a in arrows}
    for lineno, f in face_lines:
        for a in f.arrows:
            if a not in amap:
                raise QuiverSyntaxError(f"face {f.id}: dangling arrow reference {a!r}", lineno, 1, source)
        n = len(f.arrows)
        for i, a in enumerate(f.arrows):
            b = f.arrows[(i + 1) % n]
            if amap[a].head != amap[b].tail:
                raise QuiverSyntaxError(f"face {f.id}: {a} does not compose with {b}", lineno, 1, source)
    return DimerQuiver(polygon, vertices, arrows, faces, corners,
                       name=Path(source).stem if source else "")


def load_quiver(path: str | Path) -> DimerQuiver:
    p = Path(path)
    return parse_quiver(p.read_text(), source=str(p))


# rotation system -----------------------------------------------------------

def _face_coloring(q: DimerQuiver) -> list[int] | None:
    """Two-colour faces so the two faces at every arrow differ."""
    col: list[int | None] = [None] * q.n_faces
    for start in range(q.n_faces):
        if col[start] is not None:
            continue
        col[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for a in q.faces[f].arrows:
                for g in q.arrow_faces[q.aindex[a]]:
                    if g == f:
                        continue
                    if col[g] is None:
                        col[g] = 1 - col[f]
                        stack.append(g)
                    elif col[g] == col[f]:
                        return None
    return [int(c) for c in col]


def corner_order(q: DimerQuiver, v: str) -> list[tuple[tuple[str, str], ...]]:
    """Cyclic orders of arrow ends around v, one per link component.

    Ends are ``(arrow_id, "in")`` or ``(arrow_id, "out")``.  Consecutive
    ends share a face.  A regular point gives one cycle; a pinch point gives
    one cycle per cone.
    """
    if v not in q.vindex:
        raise QuiverError(f"unknown vertex {v!r}")
    col = _face_coloring(q)
    if col is None:
        raise QuiverError("faces do not glue into an oriented surface")
    # corner (in-end of a, out-end of b) for each face passage a -> b at v
    nxt: dict[tuple[str, str], tuple[str, str]] = {}
    prv: dict[tuple[str, str], tuple[str, str]] = {}
    for fi, f in enumerate(q.faces):
        n = len(f.arrows)
        for i, a in enumerate(f.arrows):
            b = f.arrows[(i + 1) % n]
            if q.arrow[a].head != v:
                continue
            ein, eout = (a, "in"), (b, "out")
            if col[fi] == 0:
                pair = (ein, eout)
            else:
                pair = (eout, ein)
            if pair[0] in nxt or pair[1] in prv:
                raise QuiverError(f"inconsistent rotation at {v!r}")
            nxt[pair[0]] = pair[1]
            prv[pair[1]] = pair[0]
    ends = sorted({(a.id, "in") for a in q.arrows if a.head == v}
                  | {(a.id, "out") for a in q.arrows if a.tail == v},
                  key=lambda e: (q.aindex[e[0]], e[1]))
    if set(nxt) != set(ends):
        raise QuiverError(f"inconsistent rotation at {v!r}")
    cycles = []
    seen: set = set()
    for e in ends:
        if e in seen:
            continue
        cyc = []
        x = e
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = nxt[x]
        cycles.append(tuple(cyc))
    return cycles


def euler_characteristic(q: DimerQuiver) -> int:
    """Euler characteristic of the surface with every pinch point opened up."""
    links = sum(len(corner_order(q, v)) for v in q.vertices)
    return links - q.n_arrows + q.n_faces


def expected_euler(poly: FundamentalPolygon) -> int:
    """Euler characteristic of the surface glued from the polygon, pinch opened."""
    return len(poly.corner_cycles()) - poly.n_half + 1


# validation ----------------------------------------------------------------

def _check_corner_classes(q: DimerQuiver, v: str, links, rep: ValidationReport) -> None:
    # each sheet through the corner vertex must sit at one class of polygon corners
    cls = {m: i for i, cyc in enumerate(q.polygon.corner_cycles()) for m in cyc}
    used = []
    for link in links:
        ks = set()
        for aid, end in link:
            a = q.arrow[aid]
            ks.add(cls[a.head_corner if end == "in" else a.tail_corner])
        if len(ks) > 1:
            rep.add("error", "corner-class",
                    f"vertex {v}: one sheet uses corners from {len(ks)} corner classes")
        used.extend(ks)
    if len(used) != len(set(used)):
        rep.add("error", "corner-class", f"vertex {v}: two sheets share a corner class")


def validate(q: DimerQuiver, catalog=None) -> ValidationReport:
    from .geodesy import lift  # local import: geodesy depends on this module
    from .matchings import perfect_matchings

    rep = ValidationReport()
    bad = False
    for i, a in enumerate(q.arrows):
        k = len(q.arrow_faces[i])
        if k != 2:
            bad = True
            rep.add("error", "face-count",
                    f"arrow {a.id} lies in {k} face(s); an arrow must lie in exactly two faces")
    if q.n_faces == 0:
        rep.add("error", "no-faces", "quiver has no faces")
        bad = True

    # connectivity of the underlying graph
    if q.vertices:
        adj: dict[str, set[str]] = {v: set() for v in q.vertices}
        for a in q.arrows:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        seen = {q.vertices[0]}
        stack = [q.vertices[0]]
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        if len(seen) != q.n_vertices:
            rep.add("error", "disconnected", f"{q.n_vertices - len(seen)} vertices unreachable")

    if not q.polygon.single_vertex and not q.corners:
        rep.add("error", "pinch", "the pinch point of an odd polygon must be a quiver vertex")

    # faces must close up in the covering
    for f in q.faces:
        tr = lift(q, f.arrows)
        if not tr.closed:
            rep.add("error", "face-class", f"face {f.id} does not close in the covering")

    if not bad:
        try:
            orders = {v: corner_order(q, v) for v in q.vertices}
        except QuiverError as e:
            rep.add("error", "rotation", str(e))
            orders = None
        if orders is not None:
            chi = sum(len(c) for c in orders.values()) - q.n_arrows + q.n_faces
            want = expected_euler(q.polygon)
            if chi != want:
                rep.add("error", "euler", f"Euler characteristic {chi}, polygon needs {want}")
            for v, cyc in orders.items():
                if len(cyc) > 1 and not (v in q.corners and len(q.polygon.corner_cycles()) == len(cyc)):
                    rep.add("error", "link", f"vertex {v} has a disconnected link")
            for v in q.corners:
                _check_corner_classes(q, v, orders[v], rep)
        if catalog is None:
            catalog = perfect_matchings(q)
        covered = np.zeros(q.n_arrows, dtype=bool)
        for m in catalog.all_perfect:
            covered[list(m.indices)] = True
        if not catalog.all_perfect:
            rep.add("error", "no-matching", "quiver has no perfect matching")
        for i in np.flatnonzero(~covered):
            rep.add("error", "uncovered-arrow",
                    f"arrow {q.arrows[i].id} is in no perfect matching")
        rep.add("info", "matchings",
                f"{len(catalog.all_perfect)} perfect, {len(catalog.simple_indices)} simple")
    return rep


# export ------------------------------------------------------------------

def export_dot(q: DimerQuiver) -> str:
    out = [f'digraph "{q.name or "quiver"}" {{']
    for v in q.vertices:
        shape = "doublecircle" if v in q.corners else "circle"
        out.append(f'  "{v}" [shape={shape}];')
    for a in q.arrows:
        lab = a.id if a.cross is None else f"{a.id} ({a.cross:+d})"
        out.append(f'  "{a.tail}" -> "{a.head}" [label="{lab}"];')
    for f in q.faces:
        out.append(f"  // face {f.id}: " + " ".join(f.arrows))
    out.append("}")
    return "\n".join(out) + "\n"
