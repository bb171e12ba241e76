# tests/test_scenario.py
"""
Scenario document codec: primitive parsers, canonical JSON hashing, and
whole-document parsing with schema diagnostics.
"""

from __future__ import annotations

import json

import pytest

from spectral_forge import (
    BasePoint,
    PellMap,
    QI,
    SchemaError,
    TwoSections,
    canonical_json,
    load_scenario,
    parse_scenario,
    scenario_hash,
)
from spectral_forge.scenario import (
    encode_base_point,
    encode_complex,
    parse_base_point,
    parse_complex,
    parse_poly,
    parse_qi,
)


def split_doc() -> dict:
    return {
        "surface": {"tau": [2.0, 0.0], "theta_degree": 1},
        "family": {"presentation": {
            "type": "split",
            "factors": [[0.7, 0.1], [1.3, -0.2]],
        }},
        "run": {"samples": 16, "tol": 1e-9, "seed": 0},
    }


def pushforward_doc() -> dict:
    f = [[1, 1, 0, 1], [0, 1, 0, 1], [0, 1, 0, 1], [1, 1, 0, 1]]
    return {
        "surface": {"tau": [2.0, 0.0], "theta_degree": 1},
        "family": {"presentation": {
            "type": "pushforward",
            "cover": {"f": f},
            "map": {"p": [[3, 1, 0, 1]], "q": [[1, 1, 0, 1]],
                    "s": [1, 1, 0, 1]},
        }},
        "run": {"samples": 16},
    }


# ============================================================
# Primitive codecs
# ============================================================

def test_primitive_roundtrips():
    assert parse_complex([1.5, -2.0], "t") == 1.5 - 2.0j
    assert encode_complex(1.5 - 2.0j) == [1.5, -2.0]
    assert parse_qi([3, 2, -1, 4], "t") == QI.from_pair(3, 2, -1, 4)
    p = parse_poly([[1, 1, 0, 1], [2, 1, 0, 1]], "t")
    assert p.degree == 1
    assert parse_base_point("inf", "t").is_infinity
    pt = parse_base_point([3, 1, 0, 1], "t")
    assert pt == BasePoint.of(3)
    assert encode_base_point(pt) == [3, 1, 0, 1]
    assert encode_base_point(BasePoint.infinity()) == "inf"


@pytest.mark.parametrize("bad", [
    [1.0], [1.0, 2.0, 3.0], "x", {"re": 1}, [1.0, "y"],
])
def test_complex_schema_errors(bad):
    with pytest.raises(SchemaError):
        parse_complex(bad, "t")


@pytest.mark.parametrize("bad", [
    [1, 0, 0, 1], [1, 1, 0], [1.5, 1, 0, 1], "x",
])
def test_qi_schema_errors(bad):
    with pytest.raises(SchemaError):
        parse_qi(bad, "t")


# ============================================================
# Canonical hashing
# ============================================================

def test_canonical_json_is_sorted_and_compact():
    assert canonical_json({"b": 1, "a": [1.5, 2]}) == '{"a":[1.5,2],"b":1}'


def test_hash_ignores_key_order_but_not_content():
    doc = split_doc()
    shuffled = json.loads(canonical_json(doc))
    reordered = {k: shuffled[k] for k in reversed(list(shuffled))}
    assert scenario_hash(doc) == scenario_hash(reordered)
    assert len(scenario_hash(doc)) == 64
    changed = split_doc()
    changed["run"]["samples"] = 17
    assert scenario_hash(changed) != scenario_hash(doc)


def test_loaded_scenario_hash_matches_raw(tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(split_doc()))
    scn = load_scenario(str(path))
    assert scn.hash() == scenario_hash(split_doc())


# ============================================================
# Document parsing
# ============================================================

def test_split_document_parses():
    scn = parse_scenario(split_doc())
    assert scn.surface.curve.tau == 2.0 + 0j
    assert scn.surface.theta_degree == 1
    assert scn.family is not None
    assert scn.family.spectral_values_at(0.0) == (
        1.0 / (0.7 + 0.1j), 1.0 / (1.3 - 0.2j))
    assert (scn.samples, scn.tol, scn.seed) == (16, 1e-9, 0)
    assert scn.points is None and scn.cover is None


def test_run_defaults_and_points():
    doc = split_doc()
    del doc["run"]
    scn = parse_scenario(doc)
    assert (scn.samples, scn.tol, scn.seed) == (32, 1e-9, 0)
    doc = split_doc()
    doc["run"]["points"] = [[2.0, 0.0], [0.0, 2.0]]
    scn = parse_scenario(doc)
    assert scn.points == (2.0 + 0j, 2.0j)


def test_pushforward_document_parses():
    scn = parse_scenario(pushforward_doc())
    fam = scn.family
    assert fam is not None
    assert isinstance(fam.data.factor_map, PellMap)
    assert fam.data.cover.genus == 1
    # (10 + b^3 + 6w) / (8 - b^3) at the branch point b = -1
    v = fam.data.factor_map.sheet_values(-1.0)
    assert abs(v[0] - 1.0) < 1e-12 and abs(v[1] - 1.0) < 1e-12


def test_pushforward_twist_and_torsion_parse():
    doc = pushforward_doc()
    doc["surface"]["multiple_fibres"] = [
        {"at": [5, 1, 0, 1], "m": 2}, {"at": [-7, 1, 0, 1], "m": 3}]
    doc["family"]["presentation"]["torsion_pairs"] = [[1, 0], [0, 2]]
    doc["family"]["presentation"]["twist"] = {
        "u": [[0, 1, 0, 1], [1, 1, 0, 1]], "v": [[1, 1, 0, 1]], "inf": 1}
    scn = parse_scenario(doc)
    assert scn.family.data.torsion_pairs == ((1, 0), (0, 2))
    assert scn.family.data.twist is not None
    assert scn.family.data.twist.degree() == 0


def test_modification_steps_apply_in_order():
    doc = split_doc()
    doc["family"]["modifications"] = [
        {"op": "push", "at": [3, 1, 0, 1], "degree": 2,
         "line_point": [1.7, 0.0]},
        {"op": "push", "at": [3, 1, 0, 1], "degree": 2,
         "line_point": [1.7, 0.0]},
        {"op": "pop", "at": [3, 1, 0, 1]},
    ]
    fam = parse_scenario(doc).family
    assert fam.chern.c2 == 2
    assert fam.determinant.base_class == -3
    assert [s.degree for s in fam.jump_stack(BasePoint.of(3))] == [2]


def test_cover_and_determinant_sections_parse():
    doc = {
        "surface": {"tau": [2.0, 0.0]},
        "cover": {
            "verticals": [{"at": [3, 1, 0, 1], "multiplicity": 2}],
            "bisection": {"type": "two_sections",
                          "a1": [2.0, 0.0], "a2": [4.0, 0.0]},
        },
        "determinant": {"base_class": 0, "factor": [0.125, 0.0]},
        "descent": {"b0": [0, 1, 0, 1]},
    }
    scn = parse_scenario(doc)
    assert isinstance(scn.cover.bisection, TwoSections)
    assert scn.cover.verticals == ((BasePoint.of(3), 2),)
    assert scn.determinant.constant_factor == 0.125
    assert scn.descent_point == BasePoint.of(0)


def test_pell_cover_section_parses():
    doc = {
        "surface": {"tau": [2.0, 0.0]},
        "cover": {"bisection": {
            "type": "pell",
            "cover": {"f": [[1, 1, 0, 1], [0, 1, 0, 1], [0, 1, 0, 1],
                            [1, 1, 0, 1]]},
            "map": {"p": [[3, 1, 0, 1]], "q": [[1, 1, 0, 1]]},
        }},
    }
    scn = parse_scenario(doc)
    assert isinstance(scn.cover.bisection, PellMap)


@pytest.mark.parametrize("mangle, where", [
    (lambda d: d.pop("surface"), "surface"),
    (lambda d: d["surface"].update(tau=[2.0]), "tau"),
    (lambda d: d["surface"].update(theta_degree=0), "theta"),
    (lambda d: d["run"].update(samples=0), "samples"),
    (lambda d: d["run"].update(tol=-1.0), "tol"),
    (lambda d: d["run"].update(seed="x"), "seed"),
    (lambda d: d["run"].update(points=[]), "points"),
    (lambda d: d["family"]["presentation"].update(type="weird"), "type"),
    (lambda d: d["family"]["presentation"].update(factors=[[1.0, 0.0]]),
     "factors"),
    (lambda d: d["family"].update(modifications=[{"op": "spin",
                                                  "at": [3, 1, 0, 1]}]),
     "op"),
])
def test_schema_error_catalogue(mangle, where):
    doc = split_doc()
    mangle(doc)
    with pytest.raises(SchemaError):
        parse_scenario(doc)


def test_schema_error_on_bad_surface_lattice():
    doc = split_doc()
    doc["surface"]["tau"] = [0.5, 0.0]  # inside the unit circle
    with pytest.raises(SchemaError):
        parse_scenario(doc)


def test_load_errors(tmp_path):
    with pytest.raises(SchemaError):
        load_scenario(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load_scenario(str(bad))
    notdict = tmp_path / "arr.json"
    notdict.write_text("[1, 2]")
    with pytest.raises(SchemaError):
        load_scenario(str(notdict))
