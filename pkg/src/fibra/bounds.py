from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Union

from .errors import MissingInput, RegimeTooSmall, UnknownTheorem

log = logging.getLogger(__name__)

Number = Union[int, Fraction]

K2_CAP = 200
# regime where the refined volume bound (g - 1)(p_g - 2) applies
REFINED_REGIME = 84
# b = 0 needs K.N^2 = 0, which holds from this p_g on
SURFACE_REGIME = 56
# chi(omega_X) <= 5/4 p_g(X) times the Miyaoka-Yau constant 72
_CASE_ONE_SLOPE = Fraction(72 * 5, 4)
# genus caps from the Albanese cases with q(V_y) = 0, p_g(V_y) = 2 or 3
_ALBANESE_CAPS = (28, 37, 36)
_MY = 72


def volume_inequality_rhs(p: Number, beta: Number, xi: Number) -> Fraction:
    """p * beta * xi, the lower bound for K_X^3."""
    return Fraction(p) * Fraction(beta) * Fraction(xi)


def xi_lower_bound(g_C: int, p: Number, beta: Number) -> Fraction:
    if g_C < 2 or p < 1 or beta <= 0:
        raise ValueError(f"need g >= 2, p >= 1, beta > 0; got {g_C}, {p}, {beta}")
    return Fraction(2 * g_C - 2) / (1 + 1 / Fraction(p) + 1 / Fraction(beta))


def xi_at_boundary(g_C: int, p: Number, beta: Number) -> bool:
    """True when the lower bound for xi equals g - 2 exactly, so it is not strictly larger."""
    return xi_lower_bound(g_C, p, beta) == g_C - 2


def curve_volume_bound(g_C: int, pg_X: int) -> Dict[str, Any]:
    """Lower bound for K_X^3 when X is canonically fibred by curves of genus g_C."""
    if pg_X < 3 or g_C < 2:
        raise ValueError(f"need p_g >= 3 and g >= 2, got {pg_X}, {g_C}")
    xi = Fraction(2 * g_C - 2) / (2 + Fraction(1, pg_X - 2))
    ceiling = math.ceil(xi) * (pg_X - 2)
    out: Dict[str, Any] = {"xi": xi, "ceiling_bound": ceiling, "bound": ceiling}
    if pg_X >= REFINED_REGIME:
        refined = (g_C - 1) * (pg_X - 2)
        out["refined_bound"] = refined
        out["bound"] = max(ceiling, refined)
    return out


def _genus_from_slope(slope_num: Fraction, pg_X: int) -> int:
    # largest g with (g - 1)(p_g - 2) <= slope_num
    return math.floor(slope_num / (pg_X - 2)) + 1


def max_curve_genus(pg_X: int) -> int:
    """Largest genus of the canonical curve fibration compatible with p_g(X) >= 84."""
    if pg_X < REFINED_REGIME:
        raise RegimeTooSmall(f"the genus bound needs p_g(X) >= {REFINED_REGIME}, got {pg_X}")
    g = _genus_from_slope(_CASE_ONE_SLOPE * pg_X, pg_X)
    return max(g, *_ALBANESE_CAPS)


def max_curve_genus_small_q(pg_X: int) -> int:
    """Same bound when q(X) <= 2, where chi(omega_X) <= p_g(X) + 1."""
    if pg_X < REFINED_REGIME:
        raise RegimeTooSmall(f"the genus bound needs p_g(X) >= {REFINED_REGIME}, got {pg_X}")
    return _genus_from_slope(Fraction(_MY * (pg_X + 1)), pg_X)


def first_pg_at_most(
    solver: Callable[[int], int],
    target: int,
    *,
    lo: int,
    hi: int = 10**9,
) -> Optional[int]:
    """Smallest p_g in [lo, hi] with solver(p_g) <= target, for a non-increasing solver."""
    if solver(hi) > target:
        return None
    if solver(lo) <= target:
        return lo
    a, b = lo, hi
    while b - a > 1:
        m = (a + b) // 2
        if solver(m) <= target:
            b = m
        else:
            a = m
    return b


def _epsilon(k2: int) -> Fraction:
    return Fraction(1, 4 * (20 * k2 + 1))


def surface_volume_bound(K_F0_sq: int, pg_X: int, b: int) -> Fraction:
    """Lower bound for K_X^3 when X is canonically fibred by surfaces over a curve of genus b."""
    if K_F0_sq < 1:
        raise ValueError(f"K_F0^2 must be positive, got {K_F0_sq}")
    if b == 1:
        return (K_F0_sq + _epsilon(K_F0_sq)) * pg_X
    if b != 0:
        raise ValueError(f"b must be 0 or 1, got {b}")
    if pg_X < SURFACE_REGIME:
        raise RegimeTooSmall(f"the b = 0 bound needs p_g(X) >= {SURFACE_REGIME}, got {pg_X}")
    k = K_F0_sq
    return (k + _epsilon(k)) * (pg_X - 1) - Fraction(4 * k, 2 * (20 * k + 1))


def parity_threshold_pg() -> int:
    """Largest p_g with 2(p_g - 1)^2 <= 108 p_g; from the next value on K.N^2 = 0."""
    slope = Fraction(3, 2) * _MY
    pg = 1
    while 2 * pg**2 <= slope * (pg + 1):
        pg += 1
    return pg


def noether_min_K2(pg_F: int) -> int:
    return 2 * pg_F - 4


def surface_inequalities(pg_F: int, q_F: int) -> Dict[str, int]:
    out = {"noether_min_K2": noether_min_K2(pg_F)}
    if q_F > 0:
        out["debarre_min_K2"] = 2 * pg_F
    return out


def _k2_rhs(k2: int, pg_X: int, q_positive: bool) -> Fraction:
    extra = Fraction(2 * k2, 20 * k2 + 1)
    if q_positive:
        extra += 36 * k2
    return _MY - _epsilon(k2) + extra / (pg_X - 1)


def max_fiber_K2(pg_X: int, b: int, q_F: str = "zero", *, cap: int = K2_CAP) -> int:
    """Largest K_F0^2 satisfying the volume bound against Miyaoka-Yau, searched up to ``cap``."""
    if q_F not in ("zero", "positive"):
        raise ValueError(f"q_F must be 'zero' or 'positive', got {q_F!r}")
    if b == 1:
        feasible = [k for k in range(1, cap + 1) if k + _epsilon(k) <= _MY]
    elif b == 0:
        if pg_X < SURFACE_REGIME:
            raise RegimeTooSmall(f"b = 0 needs p_g(X) >= {SURFACE_REGIME}, got {pg_X}")
        feasible = [
            k for k in range(1, cap + 1) if k <= _k2_rhs(k, pg_X, q_F == "positive")
        ]
    else:
        raise ValueError(f"b must be 0 or 1, got {b}")
    if not feasible:
        raise RuntimeError(f"no feasible K_F0^2 in [1, {cap}]")
    return max(feasible)


def max_fiber_pg(max_K2: int, *, debarre: bool) -> int:
    """p_g(F) bound from K^2 >= 2 p_g (irregular fibers) or K^2 >= 2 p_g - 4."""
    return max_K2 // 2 if debarre else (max_K2 + 4) // 2


def fiber_surface_bound(pg_X: int, b: int, q_F: str = "zero") -> Dict[str, Any]:
    k2 = max_fiber_K2(pg_X, b, q_F)
    debarre = b == 0 and q_F == "positive"
    return {"max_K2": k2, "max_pg_F": max_fiber_pg(k2, debarre=debarre)}


def miyaoka_yau_check(K3: Number, chi_omega: Number) -> bool:
    return Fraction(K3) <= _MY * Fraction(chi_omega)


# ---------------------------------------------------------------------------
# theorem table


@dataclass(frozen=True)
class BoundInput:
    pg: Optional[int] = None
    b: Optional[int] = None
    qF: Optional[str] = None
    g: Optional[int] = None
    p: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    xi: Optional[Fraction] = None
    k2: Optional[int] = None
    k3: Optional[Fraction] = None
    chi: Optional[Fraction] = None


THEOREMS = ("2.1", "2.2", "3.1", "3.2", "4.1", "4.2", "MY", "parity")


def _need(inp: BoundInput, theorem: str, *names: str) -> None:
    missing = [n for n in names if getattr(inp, n) is None]
    if missing:
        flags = ", ".join(f"--{n}" for n in missing)
        raise MissingInput(f"theorem {theorem} needs {flags}", details={"missing": missing})


def evaluate_theorem(theorem: str, inp: BoundInput) -> Dict[str, Any]:
    """Evaluate one inequality or threshold; every value is exact."""
    if theorem == "2.1":
        _need(inp, theorem, "p", "beta", "xi")
        rhs = volume_inequality_rhs(inp.p, inp.beta, inp.xi)  # type: ignore[arg-type]
        out: Dict[str, Any] = {"lower_bound_K3": rhs}
        if inp.k3 is not None:
            out["holds"] = inp.k3 >= rhs
        return out
    if theorem == "2.2":
        _need(inp, theorem, "g", "p", "beta")
        value = xi_lower_bound(inp.g, inp.p, inp.beta)  # type: ignore[arg-type]
        out = {"xi_lower_bound": value, "g_minus_2": inp.g - 2}  # type: ignore[operator]
        if value == inp.g - 2:  # type: ignore[operator]
            out["boundary"] = "bound equals g - 2 exactly; xi > g - 2 does not follow"
        if inp.xi is not None:
            out["holds"] = inp.xi >= value
        return out
    if theorem == "3.1":
        _need(inp, theorem, "g", "pg")
        return curve_volume_bound(inp.g, inp.pg)  # type: ignore[arg-type]
    if theorem == "3.2":
        _need(inp, theorem, "pg")
        pg = inp.pg
        assert pg is not None
        return {
            "max_g_C": max_curve_genus(pg),
            "max_g_C_q_at_most_2": max_curve_genus_small_q(pg),
            "threshold_pg_for_91": first_pg_at_most(max_curve_genus, 91, lo=REFINED_REGIME),
        }
    if theorem == "4.1":
        _need(inp, theorem, "k2", "pg", "b")
        return {"lower_bound_K3": surface_volume_bound(inp.k2, inp.pg, inp.b)}  # type: ignore[arg-type]
    if theorem == "4.2":
        _need(inp, theorem, "pg", "b")
        b = inp.b
        q_F = inp.qF or "zero"
        assert b is not None and inp.pg is not None
        out = fiber_surface_bound(inp.pg, b, q_F)
        if b == 1:
            out["strict"] = "K_F0^2 < 72"
            return out

        def solver(pg: int) -> int:
            return max_fiber_K2(pg, 0, q_F)

        if q_F == "positive":
            out["threshold_pg_K2_at_most_72"] = first_pg_at_most(solver, 72, lo=SURFACE_REGIME)
            out["threshold_pg_K2_at_most_71"] = first_pg_at_most(solver, 71, lo=SURFACE_REGIME)
            out["stated_thresholds"] = {"72": 3890, "71": 33616518}
        else:
            out["threshold_pg_K2_at_most_71"] = first_pg_at_most(solver, 71, lo=SURFACE_REGIME)
            out["stated_thresholds"] = {"71": 865}
        return out
    if theorem == "MY":
        _need(inp, theorem, "k3", "chi")
        return {
            "K3": inp.k3,
            "bound": _MY * inp.chi,  # type: ignore[operator]
            "holds": miyaoka_yau_check(inp.k3, inp.chi),  # type: ignore[arg-type]
        }
    if theorem == "parity":
        pg = parity_threshold_pg()
        return {
            "max_pg_with_KN2_positive": pg,
            "KN2_zero_from_pg": pg + 1,
            "at_max": {"lhs": 2 * (pg - 1) ** 2, "rhs": 108 * pg},
            "at_next": {"lhs": 2 * pg**2, "rhs": 108 * (pg + 1)},
        }
    raise UnknownTheorem(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
