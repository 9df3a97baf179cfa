from __future__ import annotations

import copy

import pytest

from conftest import load_corpus_json
from fibra.construction_file import (
    LITERATURE,
    SURFACE,
    VARIANT,
    load_construction,
    parse_construction,
)
from fibra.errors import ParseError, SchemaError
from fibra.poly import squarefree_and_gcd


def test_surface_document(lines_construction):
    cf = parse_construction(lines_construction, source="lines.json")
    assert cf.kind == SURFACE
    assert cf.base == "P2"
    assert cf.field.degree == 1
    assert [n for n, _ in cf.curves] == ["L1", "L2", "L3", "L4"]
    assert cf.branch.names == ["L1", "L2", "L3", "L4"]
    assert cf.branch.total_degree() == (4,)
    assert cf.delta == (2,)
    assert [p.label for p in cf.points] == ["O", "A", "B", "C"]
    assert cf.points[0].mult == 3
    assert cf.points[0].incidence["L4"] == 0
    assert cf.pencil is None
    assert cf.expected == ()


def test_params_products_and_combinations(lines_construction):
    doc = copy.deepcopy(lines_construction)
    doc["field"] = "t^2 + 1"
    doc["params"] = {"a": "t", "b": "a + 1"}
    doc["curves"] += [
        {"name": "P", "product": ["L1", "L2"]},
        {"name": "Q", "expr": "x^2 + y^2 - b", "degree": [2]},
        {"name": "R", "combination": {"P": "a", "Q": "1"}},
    ]
    cf = parse_construction(doc)
    assert cf.params["b"] == cf.field.gen + 1
    assert cf.curve("P").degree == (2,)
    assert cf.curve("R").degree == (2,)
    assert not cf.curve("R").is_zero()


def test_combination_must_not_vanish(lines_construction):
    doc = copy.deepcopy(lines_construction)
    doc["curves"].append({"name": "M", "expr": "x", "degree": [1]})
    doc["curves"].append({"name": "Z", "combination": {"L1": "1", "M": "-1"}})
    with pytest.raises(SchemaError, match="zero form"):
        parse_construction(doc)


def test_combination_degrees_must_agree(lines_construction):
    doc = copy.deepcopy(lines_construction)
    doc["curves"].append({"name": "P", "product": ["L1", "L2"]})
    doc["curves"].append({"name": "Z", "combination": {"L1": "1", "P": "1"}})
    with pytest.raises(SchemaError):
        parse_construction(doc)


def _broken(doc, edit):
    doc = copy.deepcopy(doc)
    edit(doc)
    return doc


@pytest.mark.parametrize(
    "edit",
    [
        lambda d: d.update(schema="fibra.construction/0"),
        lambda d: d.pop("expected"),
        lambda d: d.update(kind="threefold"),
        lambda d: d.update(base="P3"),
        lambda d: d.update(params={"x": "1"}),
        lambda d: d.update(branch=["L1", "L9"]),
        lambda d: d.update(branch=[]),
        lambda d: d.update(delta=[1, 1]),
        lambda d: d["curves"].append({"name": "L1", "expr": "y", "degree": [1]}),
        lambda d: d["curves"].append({"name": "W"}),
        lambda d: d["points"][0].update(coords=["0", "0"]),
        lambda d: d["points"][0].update(coords=["inf", "0", "1"]),
        lambda d: d["points"][0].update(incidence={"L1": -1}),
        lambda d: d["points"][0].update(incidence={"L7": 1}),
        lambda d: d["points"][0].update(mult="3"),
        lambda d: d.update(expected={"K4": {"value": 1, "tag": "stated"}}),
        lambda d: d.update(expected={"K2": 2}),
    ],
)
def test_schema_errors(lines_construction, edit):
    with pytest.raises(SchemaError):
        parse_construction(_broken(lines_construction, edit))


def test_top_level_must_be_object():
    with pytest.raises(SchemaError):
        parse_construction([])


def test_variant_document():
    cf = parse_construction(load_corpus_json("x_c_13"))
    assert cf.kind == VARIANT
    assert cf.sibling == "x_s_19"
    assert cf.nu == 3
    assert cf.expectation("g_F").value == 13
    assert cf.expectation("g_F").tag == "stated"
    assert cf.expectation("K3_X") is None


def test_literature_document():
    cf = parse_construction(load_corpus_json("x_s_13"))
    assert cf.kind == LITERATURE
    assert cf.surface["H2"] == 1
    assert cf.surface["g_C_hat"] == 4
    assert cf.branch is None


def test_load_construction(write_construction, lines_construction, tmp_path):
    cf = load_construction(write_construction(lines_construction))
    assert cf.source.endswith("construction.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError, match="invalid JSON"):
        load_construction(bad)
    with pytest.raises(ParseError):
        load_construction(tmp_path / "missing.json")


@pytest.mark.slow
def test_quadruple_point_surface_branch_is_reduced():
    cf = parse_construction(load_corpus_json("x_s_19"))
    assert cf.branch.total_degree() == (14, 6)
    parts = [c.form.dehomogenize((0, 0)) for c in cf.branch.components]
    total = parts[0]
    for p in parts[1:]:
        total = total * p
    assert squarefree_and_gcd(total).is_squarefree
    doubled = total * parts[0]
    res = squarefree_and_gcd(doubled)
    assert not res.is_squarefree
    assert res.gcd.total_degree() == parts[0].total_degree()
