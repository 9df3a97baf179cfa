from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import (
    MAX_LEVEL,
    Arrangement,
    Direction,
    SurfPoint,
    direction_poly,
    infinitely_near,
    is_proximate,
    mult_at,
    strict_transform,
    tangent_roots,
)
from .errors import (
    BranchNotSmooth,
    OddBranchClass,
    OddBranchCount,
    OddSelfIntersection,
    PencilDimensionMismatch,
    UnresolvableAtDepth,
)
from .forms import Form
from .piclattice import (
    DivClass,
    SurfaceLattice,
    adjunction_genus,
    base_lattice,
    blow_up,
    h0_interpolation,
    intersect,
)
from .poly import Poly, upoly_gcd

log = logging.getLogger(__name__)

MULT_CACHE_SIZE = 4096


@dataclass(frozen=True)
class ResolutionStep:
    label: str
    point: SurfPoint
    multiplicity: int
    subtracted: int
    exceptional_in_branch: bool

    @property
    def weight(self) -> int:
        return self.point.weight

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "point": self.point.text(),
            "multiplicity": self.multiplicity,
            "subtracted": self.subtracted,
            "weight": self.weight,
            "exceptional_in_branch": self.exceptional_in_branch,
        }


@dataclass(frozen=True)
class CoverData:
    """Branch data (delta, R) with 2 delta = R, on the base or on a blow-up of it."""

    ambient: SurfaceLattice
    delta: DivClass
    branch_class: DivClass
    branch: Optional[Arrangement] = None
    resolution_log: Tuple[ResolutionStep, ...] = ()
    resolved: bool = False

    @property
    def exceptional_branch(self) -> List[str]:
        return [s.label for s in self.resolution_log if s.exceptional_in_branch]

    def check_even(self) -> None:
        if self.branch_class != self.delta * 2:
            raise OddBranchClass(
                f"2*delta = {(self.delta * 2).to_text()} but branch = {self.branch_class.to_text()}",
                details={"delta": self.delta.to_text(), "branch": self.branch_class.to_text()},
            )


@dataclass(frozen=True)
class CoverInvariants:
    chi: int
    K2: int
    pg: int
    q: int
    minus_one_contractions: int = 0

    @property
    def K2_minimal(self) -> int:
        return self.K2 + self.minus_one_contractions

    def to_dict(self) -> Dict[str, int]:
        return {
            "chi": self.chi,
            "K2": self.K2,
            "pg": self.pg,
            "q": self.q,
            "minus_one_contractions": self.minus_one_contractions,
            "K2_minimal": self.K2_minimal,
        }


def make_cover(arr: Arrangement, delta_degree: Sequence[int]) -> CoverData:
    lattice = base_lattice(arr.base)
    cover = CoverData(
        lattice,
        lattice.base_class(*delta_degree),
        lattice.base_class(*arr.total_degree()),
        branch=arr,
    )
    cover.check_even()
    return cover


@lru_cache(maxsize=MULT_CACHE_SIZE)
def _mult(curve: Form, point: SurfPoint) -> int:
    return mult_at(curve, point)


def strict_class(lattice: SurfaceLattice, curve: Form) -> DivClass:
    """Class of the strict transform of a base curve on the blown-up surface."""
    exc = tuple(-_mult(curve, s.point) for s in lattice.slots)
    return DivClass(lattice, tuple(curve.degree), exc)


def exceptional_strict_class(lattice: SurfaceLattice, label: str) -> DivClass:
    """Strict transform of the exceptional curve of ``label``: e minus the slots proximate to it."""
    point = lattice.slot(label).point
    acc = lattice.exceptional(label)
    for s in lattice.slots:
        if is_proximate(s.point, point):
            acc = acc - lattice.exceptional(s.label)
    return acc


def _raw_invariants(chi_ambient: int, K: DivClass, delta: DivClass) -> Tuple[int, int]:
    chi = 2 * chi_ambient + intersect(delta, delta + K) // 2
    k2 = 2 * intersect(K + delta, K + delta)
    return chi, k2


# ---------------------------------------------------------------------------
# canonical resolution


def _singular_directions(g: Poly, exceptional_in_branch: bool) -> List[Direction]:
    """Directions on the new exceptional curve where the branch can still be singular."""
    cone = g.lowest_part()
    m = cone.total_degree()
    u = direction_poly(cone)
    if exceptional_in_branch:
        return tangent_roots(u, m)
    k = g.field
    out: List[Direction] = []
    if u.degree >= 2:
        repeated = upoly_gcd(u, u.derivative())
        if repeated.degree >= 1:
            out.extend(tangent_roots(repeated, repeated.degree))
    if m - u.degree >= 2:
        out.append((k.zero, k.one))
    return out


def _resolve_at(g: Poly, point: SurfPoint, label: str) -> List[ResolutionStep]:
    m = g.order()
    if m < 2:
        return []
    k = m // 2
    odd = m % 2 == 1
    steps = [ResolutionStep(label, point, m, k, odd)]
    log.debug("blow up %s (%s): multiplicity %d, subtract %d", label, point.text(), m, k)
    children = []
    for d in _singular_directions(g, odd):
        h = strict_transform(g, d)
        if odd:
            h = h * Poly.var(g.field, 1 if d[0].is_zero() else 0)
        if h.order() >= 2:
            children.append((d, h))
    if children and point.level + 1 > MAX_LEVEL:
        raise UnresolvableAtDepth(
            f"branch is still singular over {label} after {MAX_LEVEL} infinitely near levels",
            details={"point": point.text()},
        )
    for i, (d, h) in enumerate(children):
        child_label = f"{label}'" if len(children) == 1 else f"{label}'{i + 1}"
        child = infinitely_near(point, d, label=child_label)
        steps.extend(_resolve_at(h, child, child_label))
    return steps


def branch_class_on(lattice: SurfaceLattice, arr: Arrangement, exceptional: Sequence[str]) -> DivClass:
    acc = lattice.zero()
    for c in arr.components:
        acc = acc + strict_class(lattice, c.form) * c.coeff
    for label in exceptional:
        acc = acc + exceptional_strict_class(lattice, label)
    return acc


def even_resolution(cover: CoverData, points: Sequence[SurfPoint]) -> CoverData:
    """Blow up the branch singularities over ``points`` until the branch is smooth.

    Each blow-up at multiplicity m replaces delta by delta - (m//2) e; the new
    exceptional curve joins the branch exactly when m is odd. The order of
    ``points`` is kept, with parents before their infinitely near points.
    """
    arr = cover.branch
    if arr is None:
        raise ValueError("even_resolution needs the branch arrangement")
    if any(c.coeff != 1 for c in arr.components):
        raise BranchNotSmooth("branch divisor is not reduced")
    cover.check_even()
    steps: List[ResolutionStep] = []
    for p in points:
        steps.extend(_resolve_at(arr.local_total(p), p, p.name()))
    steps.sort(key=lambda s: s.point.level)

    lattice = cover.ambient
    delta = cover.delta
    chi_amb = lattice.chi_structure_sheaf
    chi, k2 = _raw_invariants(chi_amb, lattice.canonical(), delta)
    done: List[ResolutionStep] = []
    for step in steps:
        lattice = blow_up(lattice, step.point, label=step.label)
        delta = lattice.embed(delta) - lattice.exceptional(step.label) * step.subtracted
        done.append(step)
        k, w = step.subtracted, step.weight
        chi -= k * (k - 1) * w // 2
        k2 -= 2 * (k - 1) ** 2 * w
        branch = branch_class_on(
            lattice, arr, [s.label for s in done if s.exceptional_in_branch]
        )
        stage = CoverData(lattice, delta, branch, arr, tuple(done))
        stage.check_even()
        scratch = _raw_invariants(chi_amb, lattice.canonical(), delta)
        if scratch != (chi, k2):
            raise RuntimeError(
                f"incremental invariants {(chi, k2)} disagree with {scratch} after {step.label}"
            )
    final_branch = branch_class_on(lattice, arr, [s.label for s in done if s.exceptional_in_branch])
    log.info("resolution: %d blow-ups, delta~ = %s", len(done), delta.to_text())
    return CoverData(lattice, delta, final_branch, arr, tuple(done), resolved=True)


# ---------------------------------------------------------------------------
# invariants


def smooth_cover_invariants(
    chi_ambient: int,
    K: DivClass,
    delta: DivClass,
    pg_ambient: int,
    h0_K_plus_delta: int,
) -> CoverInvariants:
    chi, k2 = _raw_invariants(chi_ambient, K, delta)
    pg = pg_ambient + h0_K_plus_delta
    return CoverInvariants(chi=chi, K2=k2, pg=pg, q=1 - chi + pg)


def cover_invariants(cover: CoverData) -> CoverInvariants:
    if not cover.resolved:
        raise BranchNotSmooth("cover invariants need a resolved branch divisor")
    K = cover.ambient.canonical()
    h0 = h0_interpolation(K + cover.delta)
    return smooth_cover_invariants(cover.ambient.chi_structure_sheaf, K, cover.delta, 0, h0)


@dataclass(frozen=True)
class Halving:
    """Reduced preimage of a branch component, split into its disjoint rational pieces."""

    name: str
    pieces: int
    piece_square: int
    preimage_square: int
    genus: int

    @property
    def minus_one_curves(self) -> int:
        return self.pieces if self.preimage_square == -1 and self.genus <= 0 else 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "pieces": self.pieces,
            "piece_square": self.piece_square,
            "preimage_square": self.preimage_square,
            "arithmetic_genus": self.genus,
            "minus_one_curves": self.minus_one_curves,
        }


def branch_component_halving(component: DivClass, *, name: str = "") -> Halving:
    sq = intersect(component, component)
    pa = adjunction_genus(component)
    pieces = 1 - pa if pa <= 0 else 1
    if sq % pieces or (sq // pieces) % 2:
        raise OddSelfIntersection(
            f"branch component {name or component.to_text()} has square {sq} over {pieces} piece(s)",
            details={"square": sq, "pieces": pieces},
        )
    piece = sq // pieces
    return Halving(name, pieces, piece, piece // 2, pa)


def contract_minus_one(inv: CoverInvariants, n: int) -> CoverInvariants:
    if n < 0:
        raise ValueError(f"cannot contract {n} curves")
    return replace(inv, minus_one_contractions=inv.minus_one_contractions + n)


def hurwitz_double_cover_genus(g_base: int, branch_points: int) -> int:
    if branch_points < 0 or branch_points % 2:
        raise OddBranchCount(f"a double cover needs an even number of branch points, got {branch_points}")
    return 2 * g_base - 1 + branch_points // 2


def branch_pieces(cover: CoverData) -> List[Tuple[str, DivClass]]:
    """Named classes of the components of the smooth branch divisor."""
    arr = cover.branch
    out: List[Tuple[str, DivClass]] = []
    if arr is not None:
        out.extend((c.name, strict_class(cover.ambient, c.form)) for c in arr.components)
    for label in cover.exceptional_branch:
        out.append((f"E({label})", exceptional_strict_class(cover.ambient, label)))
    return out


# ---------------------------------------------------------------------------
# pencil


@dataclass(frozen=True)
class PencilAnalysis:
    h0: int
    self_intersection: int
    arithmetic_genus: int
    branch_degree: int
    g_C_hat: int
    base_points: int
    d: int
    H2: int
    KH: int
    identity_holds: bool
    contracted: Tuple[str, ...] = ()

    @property
    def g_H(self) -> int:
        return (self.H2 + self.KH) // 2 + 1

    def to_dict(self) -> Dict[str, object]:
        return {
            "h0": self.h0,
            "self_intersection": self.self_intersection,
            "arithmetic_genus": self.arithmetic_genus,
            "branch_degree": self.branch_degree,
            "g_C_hat": self.g_C_hat,
            "base_points": self.base_points,
            "d": self.d,
            "H2": self.H2,
            "KH": self.KH,
            "g_H": self.g_H,
            "identity_holds": self.identity_holds,
            "contracted": list(self.contracted),
        }


def pencil_analysis(
    cover: CoverData,
    pencil: DivClass,
    fibration: DivClass,
    contracted: Sequence[Tuple[str, DivClass]],
) -> PencilAnalysis:
    """Genus, base points and degree of the pencil |K_S + H| read off on the blown-up base.

    ``pencil`` is the moving part G with K + delta~ + L = G + (contracted
    branch components), ``fibration`` is L with H = pullback of L.
    """
    h0 = h0_interpolation(pencil)
    if h0 != 2:
        raise PencilDimensionMismatch(
            f"pencil {pencil.to_text()} has h0 = {h0}, expected 2", details={"h0": h0}
        )
    g2 = intersect(pencil, pencil)
    if g2 != 0:
        raise PencilDimensionMismatch(
            f"pencil {pencil.to_text()} has self-intersection {g2}", details={"square": g2}
        )
    K = cover.ambient.canonical()
    pa = adjunction_genus(pencil)
    r = intersect(pencil, cover.branch_class)
    g_hat = hurwitz_double_cover_genus(pa, r)
    total_contracted = cover.ambient.zero()
    for _, c in contracted:
        total_contracted = total_contracted + c
    base_points = intersect(pencil, total_contracted)
    c_dot_l = intersect(total_contracted, fibration)
    d = 2 * intersect(pencil, fibration) + c_dot_l
    h2 = 2 * intersect(fibration, fibration)
    kh = 2 * intersect(K + cover.delta, fibration) - c_dot_l
    holds = K + cover.delta + fibration == pencil + total_contracted
    log.debug("pencil %s: g(C^) = %d, d = %d, base points %d", pencil.to_text(), g_hat, d, base_points)
    return PencilAnalysis(
        h0, g2, pa, r, g_hat, base_points, d, h2, kh, holds, tuple(n for n, _ in contracted)
    )
