from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from fibra import corpus
from fibra.numfield import QQ, field_make


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def gaussian():
    """Q(i) as Q[t]/(t^2 + 1)."""
    return field_make([1, 0, 1])


@pytest.fixture
def eisenstein():
    """Q(sqrt(-3)) as Q[t]/(t^2 + 3)."""
    return field_make([3, 0, 1])


@pytest.fixture
def corpus_copy(tmp_path: Path) -> Path:
    """A writable copy of the bundled corpus."""
    target = tmp_path / "corpus"
    target.mkdir()
    for cid in corpus.CORPUS_IDS:
        shutil.copy(corpus.corpus_path(cid), target / f"{cid}.json")
    return target


def load_corpus_json(cid: str) -> dict:
    return json.loads(corpus.corpus_path(cid).read_text(encoding="utf-8"))


@pytest.fixture
def write_construction(tmp_path: Path):
    def _write(data: dict, name: str = "construction.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def lines_construction() -> dict:
    """Double plane branched along four lines, three of them through the origin."""
    return {
        "schema": "fibra.construction/1",
        "id": "lines",
        "kind": "surface",
        "field": "t",
        "base": "P2",
        "curves": [
            {"name": "L1", "expr": "x", "degree": [1]},
            {"name": "L2", "expr": "y", "degree": [1]},
            {"name": "L3", "expr": "x-y", "degree": [1]},
            {"name": "L4", "expr": "x+y-1", "degree": [1]},
        ],
        "branch": ["L1", "L2", "L3", "L4"],
        "delta": [2],
        "points": [
            {"label": "O", "coords": ["0", "0", "1"], "mult": 3, "type": "OrdinaryTriple",
             "incidence": {"L1": 1, "L2": 1, "L3": 1, "L4": 0}},
            {"label": "A", "coords": ["0", "1", "1"], "mult": 2, "type": "OrdinaryDouble",
             "incidence": {"L1": 1, "L4": 1}},
            {"label": "B", "coords": ["1", "0", "1"], "mult": 2, "type": "OrdinaryDouble",
             "incidence": {"L2": 1, "L4": 1}},
            {"label": "C", "coords": ["1/2", "1/2", "1"], "mult": 2, "type": "OrdinaryDouble",
             "incidence": {"L3": 1, "L4": 1}},
        ],
        "expected": {},
    }
