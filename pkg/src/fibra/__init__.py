"""Exact verification of double-cover surfaces and the canonically fibred 3-folds built on them."""

from .construction_file import ConstructionFile, load_construction, parse_construction
from .engine import VerificationEngine, run_corpus, verify_file
from .errors import FibraError, InputError, VerificationError
from .report import ConstructionReport

__all__ = [
    "ConstructionFile",
    "ConstructionReport",
    "FibraError",
    "InputError",
    "VerificationEngine",
    "VerificationError",
    "load_construction",
    "parse_construction",
    "run_corpus",
    "verify_file",
]

__version__ = "0.1.0"
