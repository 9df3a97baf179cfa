from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from dataclasses import field as dc_field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .arrangement import Arrangement, Component, SurfPoint, affine_point
from .errors import ParseError, SchemaError
from .expr import parse_constant, parse_rational_poly
from .forms import BASES, P1xP1, Form, parse_and_homogenize
from .numfield import FieldElement, NumberField, field_make

log = logging.getLogger(__name__)

SCHEMA = "fibra.construction/1"

SURFACE = "surface"
VARIANT = "variant"
LITERATURE = "literature"
KINDS = (SURFACE, VARIANT, LITERATURE)

EXPECTED_KEYS = (
    "chi",
    "K2",
    "pg",
    "q",
    "minus_one_contractions",
    "K2_minimal",
    "singular_points",
    "one_blowup_points",
    "blowups",
    "h0_pencil",
    "g_C_hat",
    "base_points",
    "d",
    "H2",
    "KH",
    "g_H",
    "pg_F",
    "g_F",
    "pg_X",
    "K3_X",
    "chi_omega_X",
)

SURFACE_KEYS = ("K2_minimal", "chi", "pg", "q", "H2", "KH", "g_C_hat", "d")


@dataclass(frozen=True)
class PointSpec:
    point: SurfPoint
    mult: Optional[int] = None
    type: Optional[str] = None
    incidence: Mapping[str, int] = dc_field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.point.name()


@dataclass(frozen=True)
class ClassIdentity:
    lhs: str
    rhs: str
    tag: str = ""


@dataclass(frozen=True)
class Expectation:
    key: str
    value: Any
    tag: str
    note: str = ""


@dataclass(frozen=True)
class ConstructionFile:
    """A parsed construction: either a double-cover surface, a variant stub or a literature stub."""

    id: str
    label: str
    kind: str
    source: str = ""
    field: Optional[NumberField] = None
    base: Optional[str] = None
    params: Mapping[str, FieldElement] = dc_field(default_factory=dict)
    curves: Tuple[Tuple[str, Form], ...] = ()
    branch: Optional[Arrangement] = None
    delta: Tuple[int, ...] = ()
    points: Tuple[PointSpec, ...] = ()
    pencil: Optional[str] = None
    fibration: Optional[str] = None
    class_identities: Tuple[ClassIdentity, ...] = ()
    assertions: Tuple[str, ...] = ()
    expected: Tuple[Expectation, ...] = ()
    sibling: Optional[str] = None
    nu: Optional[int] = None
    surface: Optional[Mapping[str, int]] = None
    provenance: str = ""

    def curve(self, name: str) -> Form:
        for n, f in self.curves:
            if n == name:
                return f
        raise KeyError(name)

    def expectation(self, key: str) -> Optional[Expectation]:
        return next((e for e in self.expected if e.key == key), None)


# ---------------------------------------------------------------------------
# schema helpers


def _get(data: Mapping[str, Any], key: str, types: Union[type, Tuple[type, ...]], where: str) -> Any:
    if key not in data:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = data[key]
    if not isinstance(value, types) or isinstance(value, bool) and bool not in _as_tuple(types):
        raise SchemaError(f"{where}: {key!r} has type {type(value).__name__}")
    return value


def _opt(
    data: Mapping[str, Any], key: str, types: Union[type, Tuple[type, ...]], where: str
) -> Any:
    if data.get(key) is None:
        return None
    return _get(data, key, types, where)


def _as_tuple(types: Union[type, Tuple[type, ...]]) -> Tuple[type, ...]:
    return types if isinstance(types, tuple) else (types,)


def _int_list(value: Any, where: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in value
    ):
        raise SchemaError(f"{where}: expected a list of integers, got {value!r}")
    return tuple(value)


# ---------------------------------------------------------------------------
# sections


def _parse_params(
    raw: Mapping[str, Any], k: NumberField, where: str
) -> Dict[str, FieldElement]:
    out: Dict[str, FieldElement] = {}
    for name, text in raw.items():
        if len(name) != 1 or not name.isalpha() or name in ("x", "y", "t"):
            raise SchemaError(f"{where}: parameter names are single letters other than x, y, t: {name!r}")
        out[name] = parse_constant(str(text), k, out)
    return out


def _parse_curves(
    raw: Sequence[Any], base: str, k: NumberField, params: Mapping[str, FieldElement]
) -> Tuple[Tuple[str, Form], ...]:
    forms: Dict[str, Form] = {}
    for i, entry in enumerate(raw):
        where = f"curves[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where}: expected an object")
        name = _get(entry, "name", str, where)
        if name in forms:
            raise SchemaError(f"{where}: duplicate curve name {name!r}")
        if "expr" in entry:
            degree = _int_list(_get(entry, "degree", list, where), f"{where}.degree")
            form = parse_and_homogenize(
                _get(entry, "expr", str, where), base, degree, field=k, constants=params
            )
        elif "product" in entry:
            factors = _get(entry, "product", list, where)
            if not factors:
                raise SchemaError(f"{where}: empty product")
            form = _lookup(forms, factors[0], where)
            for f in factors[1:]:
                form = form * _lookup(forms, f, where)
        elif "combination" in entry:
            terms = _get(entry, "combination", dict, where)
            if not terms:
                raise SchemaError(f"{where}: empty combination")
            acc: Optional[Form] = None
            for f, c in terms.items():
                part = _lookup(forms, f, where).scale(parse_constant(str(c), k, params))
                try:
                    acc = part if acc is None else acc + part
                except ValueError as e:
                    raise SchemaError(f"{where}: {e}") from None
            form = acc  # type: ignore[assignment]
        else:
            raise SchemaError(f"{where}: a curve needs 'expr', 'product' or 'combination'")
        if form.is_zero():
            raise SchemaError(f"{where}: curve {name!r} is the zero form")
        forms[name] = form
        log.debug("curve %s of degree %s", name, form.degree)
    return tuple(forms.items())


def _lookup(forms: Mapping[str, Form], name: Any, where: str) -> Form:
    if not isinstance(name, str) or name not in forms:
        raise SchemaError(f"{where}: unknown curve {name!r} (curves must be defined before use)")
    return forms[name]


def _parse_branch(raw: Sequence[Any], base: str, forms: Mapping[str, Form]) -> Arrangement:
    coeffs: Dict[str, int] = {}
    for name in raw:
        _lookup(forms, name, "branch")
        coeffs[name] = coeffs.get(name, 0) + 1
    if not coeffs:
        raise SchemaError("branch: empty branch divisor")
    return Arrangement(base, tuple(Component(n, forms[n], c) for n, c in coeffs.items()))


def _parse_coord(
    text: Any, k: NumberField, params: Mapping[str, FieldElement], where: str
) -> Optional[FieldElement]:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise SchemaError(f"{where}: coordinates are strings or integers, got {text!r}")
    if str(text).strip() == "inf":
        return None
    return parse_constant(str(text), k, params)


def _parse_points(
    raw: Sequence[Any],
    base: str,
    k: NumberField,
    params: Mapping[str, FieldElement],
    forms: Mapping[str, Form],
) -> Tuple[PointSpec, ...]:
    out: List[PointSpec] = []
    need = 2 if base == P1xP1 else 3
    for i, entry in enumerate(raw):
        where = f"points[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where}: expected an object")
        label = _get(entry, "label", str, where)
        coords = _get(entry, "coords", list, where)
        if len(coords) != need:
            raise SchemaError(f"{where}: {base} points need {need} coordinates, got {len(coords)}")
        values = [_parse_coord(c, k, params, where) for c in coords]
        if base != P1xP1 and any(v is None for v in values):
            raise SchemaError(f"{where}: 'inf' is only allowed on P1xP1")
        conjugates = bool(entry.get("conjugates", False))
        try:
            point = affine_point(base, k, values, label=label, conjugates=conjugates)
        except ValueError as e:
            raise SchemaError(f"{where}: {e}") from None
        incidence = entry.get("incidence") or {}
        if not isinstance(incidence, dict):
            raise SchemaError(f"{where}: incidence must map curve names to multiplicities")
        for name, m in incidence.items():
            _lookup(forms, name, f"{where}.incidence")
            if not isinstance(m, int) or m < 0:
                raise SchemaError(f"{where}: multiplicity of {name} must be a natural number")
        out.append(
            PointSpec(
                point,
                mult=_opt(entry, "mult", int, where),
                type=_opt(entry, "type", str, where),
                incidence=dict(incidence),
            )
        )
    return tuple(out)


def _parse_expected(raw: Mapping[str, Any]) -> Tuple[Expectation, ...]:
    out: List[Expectation] = []
    for key, entry in raw.items():
        where = f"expected.{key}"
        if key not in EXPECTED_KEYS:
            raise SchemaError(f"{where}: unknown expected key; choose from {', '.join(EXPECTED_KEYS)}")
        if not isinstance(entry, dict) or "value" not in entry:
            raise SchemaError(f"{where}: expected {{'value': ..., 'tag': ...}}")
        out.append(
            Expectation(key, entry["value"], _get(entry, "tag", str, where), str(entry.get("note", "")))
        )
    return tuple(out)


def _parse_identities(raw: Sequence[Any]) -> Tuple[ClassIdentity, ...]:
    out = []
    for i, entry in enumerate(raw):
        where = f"class_identities[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where}: expected an object")
        out.append(
            ClassIdentity(
                _get(entry, "lhs", str, where),
                _get(entry, "rhs", str, where),
                str(entry.get("tag", "")),
            )
        )
    return tuple(out)


def _parse_surface(raw: Mapping[str, Any]) -> Dict[str, int]:
    out = {}
    for key in SURFACE_KEYS:
        out[key] = _get(raw, key, int, "surface")
    return out


# ---------------------------------------------------------------------------
# entry points


def parse_construction(data: Mapping[str, Any], *, source: str = "") -> ConstructionFile:
    """Validate and parse one construction document."""
    if not isinstance(data, dict):
        raise SchemaError(f"{source or 'document'}: top level must be an object")
    schema = data.get("schema")
    if schema != SCHEMA:
        raise SchemaError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    cid = _get(data, "id", str, "document")
    kind = _get(data, "kind", str, cid)
    if kind not in KINDS:
        raise SchemaError(f"{cid}: kind must be one of {', '.join(KINDS)}, got {kind!r}")
    common: Dict[str, Any] = dict(
        id=cid,
        label=str(data.get("label", "")),
        kind=kind,
        source=source,
        assertions=tuple(str(a) for a in data.get("assertions", ())),
        expected=_parse_expected(_get(data, "expected", dict, cid)),
        provenance=str(data.get("provenance", "")),
    )
    if kind == VARIANT:
        nu = _get(data, "nu", int, cid)
        return ConstructionFile(sibling=_get(data, "sibling", str, cid), nu=nu, **common)
    if kind == LITERATURE:
        return ConstructionFile(surface=_parse_surface(_get(data, "surface", dict, cid)), **common)

    k = field_make(parse_rational_poly(_get(data, "field", str, cid)))
    base = _get(data, "base", str, cid)
    if base not in BASES:
        raise SchemaError(f"{cid}: base must be one of {', '.join(BASES)}, got {base!r}")
    params = _parse_params(data.get("params") or {}, k, f"{cid}.params")
    curves = _parse_curves(_get(data, "curves", list, cid), base, k, params)
    forms = dict(curves)
    branch = _parse_branch(_get(data, "branch", list, cid), base, forms)
    delta = _int_list(_get(data, "delta", list, cid), f"{cid}.delta")
    if len(delta) != (2 if base == P1xP1 else 1):
        raise SchemaError(f"{cid}: delta has the wrong number of coefficients for {base}")
    points = _parse_points(_get(data, "points", list, cid), base, k, params, forms)
    cf = ConstructionFile(
        field=k,
        base=base,
        params=params,
        curves=curves,
        branch=branch,
        delta=delta,
        points=points,
        pencil=_opt(data, "pencil", str, cid),
        fibration=_opt(data, "fibration", str, cid),
        class_identities=_parse_identities(data.get("class_identities") or ()),
        **common,
    )
    log.info(
        "parsed %s: %d curves, %d points over Q[t]/(%s)", cid, len(curves), len(points), k.min_poly_text()
    )
    return cf


def load_construction(path: Union[str, Path]) -> ConstructionFile:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path.name}: invalid JSON at line {e.lineno}: {e.msg}") from None
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return parse_construction(data, source=str(path))
