"""``ghor`` command line: validate, matchings, tau, geodesic, algebra, report."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__, _kernels
from .cycle_algebra import (center_monomials, cycle_algebra_gens, default_max_degree,
                            default_max_len, enumerate_cycles, lattice_rank,
                            nonnoetherian_witness)
from .geodesy import GeodesicCertificate, geodesic_certificate, is_geodesic_certified
from .matchings import MatchingCatalog, SigmaError, perfect_matchings, sigma
from .monomials import eta_bar, format_monomial, sigma_valuation, tau_bar
from .quiver import DimerQuiver, QuiverError, load_quiver, validate

COMMANDS = ("validate", "matchings", "tau", "geodesic", "algebra", "report")
EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: Path
    max_cycle_len: int | None = None
    max_degree: int | None = None
    witness_power: int = 5
    search_bound: int | None = None
    cycle: str | None = None
    json: bool = False
    out: Path | None = None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ghor",
        description="Perfect matchings, cycle monomials and cycle algebras of dimer quivers.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", type=Path, help="quiver in .dq format")
    p.add_argument("--max-cycle-len", type=_positive, metavar="L",
                   help="longest cycle used for generators (default 3 x longest face)")
    p.add_argument("--max-degree", type=_positive, metavar="D",
                   help="degree bound for the center (default 3|sigma|)")
    p.add_argument("--witness-power", type=_positive, default=5, metavar="N",
                   help="powers checked for the nonnoetherian witness (default 5)")
    p.add_argument("--search-bound", type=_positive, metavar="B",
                   help="longest cycle tried in the geodesic search (default L)")
    p.add_argument("--cycle", metavar="WORD",
                   help="path for the tau command, arrow ids separated by spaces or '*'")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--out", type=Path, metavar="PATH", help="write to PATH instead of stdout")
    p.add_argument("--version", action="version", version=f"ghor {__version__}")
    return p


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(ns.command, ns.file, ns.max_cycle_len, ns.max_degree, ns.witness_power,
                     ns.search_bound, ns.cycle, ns.json, ns.out)


# sections ---------------------------------------------------------------------

def _validation(q: DimerQuiver, cat: MatchingCatalog) -> dict:
    rep = validate(q, cat)
    return rep.to_dict()


def _matchings(cat: MatchingCatalog) -> dict:
    names = cat.perfect_names()
    return {"perfect_count": cat.n_perfect,
            "simple_count": cat.n_simple,
            "matchings": [{"name": names[i], "simple": m.simple, "arrows": m.sorted_ids()}
                          for i, m in enumerate(cat.all_perfect)]}


def _tau(q: DimerQuiver, cat: MatchingCatalog, word: str) -> dict:
    p = q.parse_path(word)
    t = tau_bar(q, cat, p)
    e = eta_bar(q, cat, p)
    out = {"path": list(p),
           "tau": format_monomial(t, cat.simple_names()),
           "tau_exponents": list(t.exps),
           "eta": format_monomial(e, cat.perfect_names()),
           "eta_exponents": list(e.exps),
           "is_cycle": q.is_cycle(p)}
    if q.is_cycle(p) and cat.n_simple:
        s = sigma(q, cat)
        out["sigma_valuation"] = sigma_valuation(t, s)
        out["geodesic"] = is_geodesic_certified(q, cat, p).value
    return out


def _geodesic(q: DimerQuiver, cat: MatchingCatalog, bound: int) -> dict:
    res = geodesic_certificate(q, cat, bound)
    d = {"found": isinstance(res, GeodesicCertificate), "search_bound": bound}
    d.update(res.to_json())
    return d


def _algebra(q: DimerQuiver, cat: MatchingCatalog, cfg: RunConfig) -> dict:
    names = cat.simple_names()
    L = cfg.max_cycle_len or default_max_len(q)
    D = cfg.max_degree or default_max_degree(cat)
    s = sigma(q, cat)
    S = cycle_algebra_gens(q, cat, L)
    R = center_monomials(q, cat, D)
    w = nonnoetherian_witness(q, cat, S, cfg.witness_power,
                              cycles=_short_cycles(q, L))
    return {"variables": names,
            "sigma": format_monomial(s, names),
            "S": S.to_json(names),
            "rank": lattice_rank(S),
            "center": R.to_json(names),
            "generators_nonvanishing": all(g.degree > 0 for g in S.generators),
            "witness": None if w is None else w.to_json(names)}


def _short_cycles(q: DimerQuiver, L: int):
    # only used to attach a representative cycle to a witness; keep it cheap
    return enumerate_cycles(q, min(L, 12), limit=20000)


# output -----------------------------------------------------------------------

def _text(doc: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(f"{pad}  - " + ", ".join(f"{a}={_scalar(b)}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {_scalar(v)}")
    return lines


def _scalar(v) -> str:
    if isinstance(v, list):
        return " ".join(str(x) for x in v) if v else "-"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return "\n".join(_text(doc)) + "\n"


def run(cfg: RunConfig) -> tuple[int, dict]:
    q = load_quiver(cfg.path)
    cat = perfect_matchings(q)
    doc: dict = {"command": cfg.command, "file": cfg.path.name,
                 "polygon_sides": q.polygon.n_sides,
                 "vertices": q.n_vertices, "arrows": q.n_arrows, "faces": q.n_faces}
    rep = _validation(q, cat)
    doc["validation"] = rep
    if cfg.command == "validate":
        doc.update({"perfect_count": cat.n_perfect, "simple_count": cat.n_simple})
        return (EXIT_OK if rep["passed"] else EXIT_INVALID), doc
    if not rep["passed"]:
        return EXIT_INVALID, doc
    if cfg.command == "matchings":
        doc.update(_matchings(cat))
        return EXIT_OK, doc
    if cfg.command == "tau":
        doc["tau"] = _tau(q, cat, cfg.cycle or "")
        return EXIT_OK, doc
    L = cfg.max_cycle_len or default_max_len(q)
    bound = cfg.search_bound or L
    if cfg.command == "geodesic":
        doc["geodesic"] = _geodesic(q, cat, bound)
        return EXIT_OK, doc
    if cfg.command == "algebra":
        doc["algebra"] = _algebra(q, cat, cfg)
        return EXIT_OK, doc
    m = _matchings(cat)
    doc["perfect_count"] = m["perfect_count"]
    doc["simple_count"] = m["simple_count"]
    doc["matchings"] = m["matchings"]
    doc["geodesic"] = _geodesic(q, cat, bound)
    alg = _algebra(q, cat, cfg)
    doc["algebra"] = alg
    doc["rank"] = alg["rank"]
    doc["witness"] = alg["witness"]
    return EXIT_OK, doc


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:  # argparse: 0 for --help, 2 for bad usage
        return int(e.code or 0)
    if cfg.command == "tau" and not cfg.cycle:
        print("ghor: error: tau needs --cycle WORD", file=sys.stderr)
        return EXIT_USAGE
    if not cfg.path.is_file():
        print(f"ghor: error: cannot read {cfg.path}", file=sys.stderr)
        return EXIT_USAGE
    _kernels.set_threads(_kernels.threads_from_env())
    try:
        code, doc = run(cfg)
    except QuiverError as e:
        print(f"ghor: {e}", file=sys.stderr)
        return EXIT_INVALID
    except SigmaError as e:
        print(f"ghor: {cfg.path}: {e}", file=sys.stderr)
        return EXIT_INVALID
    text = render(doc, cfg.json)
    if cfg.out:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
