"""Bundled construction files, one per verified 3-fold."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

ENV_VAR = "FIBRA_CORPUS_DIR"

# surface fibrations (s) and curve fibrations (c), in canonical report order
CORPUS_IDS = (
    "x_s_19",
    "x_c_13",
    "y_s_19",
    "y_c_13",
    "z_s_19",
    "z_c_13",
    "x_s_16",
    "x_c_11",
    "x_s_13",
    "x_c_9",
)


def corpus_dir(directory: Optional[Union[str, Path]] = None) -> Path:
    """Explicit directory, else $FIBRA_CORPUS_DIR, else the bundled package data."""
    if directory is not None:
        return Path(directory)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files(__name__)))


def corpus_path(cid: str, directory: Optional[Union[str, Path]] = None) -> Path:
    return corpus_dir(directory) / f"{cid}.json"


def ordered_ids(directory: Optional[Union[str, Path]] = None) -> List[str]:
    """Ids present in the directory: the canonical ones first, then any others sorted."""
    d = corpus_dir(directory)
    present = {p.stem for p in d.glob("*.json")}
    known = [c for c in CORPUS_IDS if c in present]
    return known + sorted(present - set(CORPUS_IDS))


def missing_ids(directory: Optional[Union[str, Path]] = None) -> List[str]:
    d = corpus_dir(directory)
    return [c for c in CORPUS_IDS if not (d / f"{c}.json").exists()]
