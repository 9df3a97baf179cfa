from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from .errors import (
    IncompleteReport,
    MissingPencil,
    NotGenusTwoFiber,
    NuTooSmall,
    PencilDimensionMismatch,
)

log = logging.getLogger(__name__)

STANDARD = "Standard"
VARIANT = "Variant"

# K_{C0} + torsion divisor on the genus-2 curve C0: degree 2, one section
_TORSION_DIVISOR_DEGREE = 2
_TORSION_DIVISOR_SECTIONS = 1
# h0(K_S + H) for a genus-2 fiber H
_PENCIL_SECTIONS = 2
# chi(O_{C0}) = chi(O_{C0}(-torsion divisor)) = 1 - g(C0)
_CHI_C0 = -1


@dataclass(frozen=True)
class SurfacePair:
    """A surface S with p_g = 0, a genus-2 fiber class H and the pencil |K_S + H|."""

    K2_S: int
    chi_S: int
    pg_S: int
    q_S: int
    H2: int
    KH: int
    g_C_hat: Optional[int] = None
    d: Optional[int] = None
    provenance: str = ""

    @property
    def g_H(self) -> int:
        return (self.H2 + self.KH) // 2 + 1

    @property
    def K_plus_H_sq(self) -> int:
        return self.K2_S + 2 * self.KH + self.H2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K2_S": self.K2_S,
            "chi_S": self.chi_S,
            "pg_S": self.pg_S,
            "q_S": self.q_S,
            "H2": self.H2,
            "KH": self.KH,
            "g_H": self.g_H,
            "g_C_hat": self.g_C_hat,
            "d": self.d,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class ThreefoldReport:
    kind: str
    pg_X: int
    pg_F: Optional[int] = None
    g_F: Optional[int] = None
    K3_X: Optional[int] = None
    chi_omega_X: Optional[int] = None
    nu: Optional[int] = None

    @property
    def fiber_invariant(self) -> int:
        key = "pg_F" if self.kind == STANDARD else "g_F"
        value = getattr(self, key)
        if value is None:
            raise IncompleteReport(
                f"{self.kind} threefold report has no {key}", details={"missing": key}
            )
        return value

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind, "pg_X": self.pg_X}
        for key in ("pg_F", "g_F", "K3_X", "chi_omega_X", "nu"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@dataclass(frozen=True)
class PencilCheck:
    h0_K_plus_H: int
    d: int
    g_H: int
    is_fibration: bool
    expect_large_genus: bool
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h0_K_plus_H": self.h0_K_plus_H,
            "d": self.d,
            "g_H": self.g_H,
            "is_fibration": self.is_fibration,
            "expect_g_C_hat_at_least_3": self.expect_large_genus,
            "notes": list(self.notes),
        }


def check_genus_two_pencil(pair: SurfacePair) -> PencilCheck:
    """Riemann-Roch count h0(K_S + H) = (K_S + H).H / 2 + chi(O_S) for a genus-2 fiber H.

    The count must be 2, so |K_S + H| is a pencil whose member meets H in 2 points.
    """
    if pair.g_H != 2:
        raise NotGenusTwoFiber(
            f"H has genus {pair.g_H} (H^2 = {pair.H2}, K.H = {pair.KH})",
            details={"g_H": pair.g_H},
        )
    twice = pair.KH + pair.H2
    h0 = Fraction(twice, 2) + pair.chi_S
    if h0 != 2:
        raise PencilDimensionMismatch(
            f"h0(K_S + H) = {h0}, expected 2", details={"h0": str(h0)}
        )
    notes = []
    fibration = pair.H2 == 0
    if not fibration:
        notes.append(f"H^2 = {pair.H2}: H moves in a pencil with base points, not a fibration")
    if pair.d is not None and pair.d != 2:
        notes.append(f"C^.H = {pair.d}, expected 2")
    large = pair.K2_S >= 2
    if large and pair.g_C_hat is not None and pair.g_C_hat < 3:
        notes.append(f"K_S^2 >= 2 but g(C^) = {pair.g_C_hat} < 3")
    return PencilCheck(int(h0), 2, pair.g_H, fibration, large, tuple(notes))


def _require_pencil(pair: SurfacePair) -> None:
    if pair.g_C_hat is None or pair.d is None:
        raise MissingPencil(f"surface pair {pair.provenance or '?'} has no pencil data")


def standard_construction(pair: SurfacePair) -> ThreefoldReport:
    """S x C0 divided out by the diagonal involution; invariants of fiber F and of X."""
    _require_pencil(pair)
    if pair.pg_S != 0:
        raise ValueError(f"standard construction needs p_g(S) = 0, got {pair.pg_S}")
    g, d = pair.g_C_hat, pair.d
    assert g is not None and d is not None
    pg_F = 3 * g + d - 1 if d > 0 else 3 * g
    pg_X = _PENCIL_SECTIONS * _TORSION_DIVISOR_SECTIONS
    k3 = 2 * 3 * pair.K_plus_H_sq * _TORSION_DIVISOR_DEGREE
    chi_minus_H = Fraction(pair.H2 + pair.KH, 2) + pair.chi_S
    chi_O_X = pair.chi_S * _CHI_C0 + chi_minus_H * _CHI_C0
    chi_omega = -chi_O_X
    log.debug("standard construction over %s: p_g(F) = %d, K^3 = %d", pair.provenance, pg_F, k3)
    return ThreefoldReport(STANDARD, pg_X, pg_F=pg_F, K3_X=k3, chi_omega_X=int(chi_omega))


def variant_construction(pair: SurfacePair, nu: int) -> ThreefoldReport:
    _require_pencil(pair)
    if nu < 3:
        raise NuTooSmall(f"the variant needs a curve of genus nu >= 3, got {nu}")
    g, d = pair.g_C_hat, pair.d
    assert g is not None and d is not None
    return ThreefoldReport(VARIANT, 2 * (nu - 1), g_F=2 * g + d - 1, nu=nu)


_PAIR_KEYS = ("K2_minimal", "chi", "pg", "q", "H2", "KH", "g_C_hat", "d")


def assemble_surface_pair(values: Mapping[str, Any], *, provenance: str = "") -> SurfacePair:
    """Build a SurfacePair from the computed values of a verified surface."""
    missing = [k for k in _PAIR_KEYS if values.get(k) is None]
    if missing:
        raise IncompleteReport(
            f"report {provenance or '?'} lacks {', '.join(missing)}", details={"missing": missing}
        )
    return SurfacePair(
        K2_S=int(values["K2_minimal"]),
        chi_S=int(values["chi"]),
        pg_S=int(values["pg"]),
        q_S=int(values["q"]),
        H2=int(values["H2"]),
        KH=int(values["KH"]),
        g_C_hat=int(values["g_C_hat"]),
        d=int(values["d"]),
        provenance=provenance,
    )
