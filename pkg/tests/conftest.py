from importlib import resources
from pathlib import Path

import pytest

from ghor import load_quiver, perfect_matchings

DATA = Path(str(resources.files("ghor") / "data"))
POLY = [f"poly_{n}.dq" for n in (2, 3, 4, 5)]
CORPUS = POLY + ["octagon_g2.dq", "flower_pinched.dq"]

_cache: dict = {}


def corpus_path(name: str) -> Path:
    return DATA / name


def loaded(name: str):
    """Quiver and matching catalog, parsed once per session."""
    if name not in _cache:
        q = load_quiver(corpus_path(name))
        _cache[name] = (q, perfect_matchings(q))
    return _cache[name]


@pytest.fixture(params=CORPUS)
def corpus_item(request):
    return loaded(request.param)


@pytest.fixture(params=POLY)
def poly_item(request):
    return loaded(request.param)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
