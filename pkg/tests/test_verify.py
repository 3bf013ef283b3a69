"""The per-instance check bundle and sweep plumbing."""

import json
import math

import pytest

from conftest import path_tree, star_tree
from stirling_complexes import (
    SubtreeFamily,
    check_instance,
    parse_family_spec,
    payload_json,
    run_sweep,
    standard_instances,
)

PAYLOAD_KEYS = [
    "m",
    "tree",
    "family",
    "n",
    "skipped",
    "cells",
    "f_vector",
    "f_vector_formula_ok",
    "euler",
    "euler_ok",
    "betti",
    "expected_reduced",
    "betti_ok",
    "field_agreement_ok",
    "components",
    "components_ok",
    "chain_axiom_ok",
    "snf",
    "decompose_ok",
    "passed",
]


def test_check_instance_full_family():
    tree = path_tree(3)
    report = check_instance(tree, SubtreeFamily.full(tree), 4)
    assert report.passed and not report.skipped
    payload = report.payload
    assert list(payload.keys()) == PAYLOAD_KEYS
    assert payload["cells"] == 84
    assert payload["f_vector"] == [36, 48]
    assert payload["f_vector_formula_ok"] is True
    assert payload["euler"] == {"enumerated": -12, "theorem": -12, "formula": -12}
    assert payload["betti"] == {"2": [1, 13], "32749": [1, 13]}
    assert payload["expected_reduced"] == [0, 13]
    assert payload["components"] == 1
    assert payload["snf"] == {"dims": [1], "all_ones": True}
    assert payload["decompose_ok"] is True
    assert "enumerate" in report.timings and "betti" in report.timings


def test_check_instance_at_n_equals_m():
    tree = path_tree(3)
    report = check_instance(tree, SubtreeFamily.full(tree), 3)
    payload = report.payload
    assert payload["betti"]["2"] == [6]  # m! isolated vertices
    assert payload["components"] == 6
    assert payload["decompose_ok"] is None  # needs n >= k + 1
    assert payload["snf"] is None  # no boundary operator to examine
    assert report.passed


def test_check_instance_skip_path():
    tree = path_tree(4)
    report = check_instance(tree, SubtreeFamily.full(tree), 6, max_cells=100)
    payload = report.payload
    assert report.skipped and payload["skipped"]
    assert "skip_reason" in payload
    assert payload["euler"] == {"formula": 480, "theorem": 480}
    assert payload["passed"] and report.passed
    assert "cells" not in payload


def test_check_instance_partial_family():
    tree = path_tree(4)
    family = SubtreeFamily.singletons(tree, [1, 3])
    report = check_instance(tree, family, 4)
    payload = report.payload
    assert payload["family"] == "1,3"
    assert payload["f_vector_formula_ok"] is True
    assert payload["expected_reduced"] == [0, 0, 1]  # f(2,4) = 1 sphere in degree 2
    assert report.passed


def test_check_instance_subtree_parts():
    tree = path_tree(4)
    family = parse_family_spec(tree, "{1,2},{3,4}")
    report = check_instance(tree, family, 3)
    payload = report.payload
    assert payload["family"] == "{1,2},{3,4}"
    assert payload["f_vector_formula_ok"] is None  # no closed form applies
    assert payload["decompose_ok"] is None
    assert payload["betti_ok"]
    assert report.passed


def test_check_instance_single_vertex_tree():
    tree = path_tree(1)
    report = check_instance(tree, SubtreeFamily.full(tree), 3)
    payload = report.payload
    assert payload["f_vector"] == [1]
    assert payload["expected_reduced"] == [0]  # contractible
    assert report.passed


def test_check_instance_empty_complex():
    tree = path_tree(3)
    report = check_instance(tree, SubtreeFamily.full(tree), 2)  # n < k
    payload = report.payload
    assert payload["f_vector"] == []
    assert payload["betti"] == {"2": [], "32749": []}
    assert payload["euler"]["enumerated"] == 0
    assert report.passed


def test_payload_json_is_canonical():
    tree = path_tree(2)
    report = check_instance(tree, SubtreeFamily.full(tree), 3)
    text = payload_json(report)
    assert " " not in text
    assert json.loads(text) == report.payload
    again = check_instance(tree, SubtreeFamily.full(tree), 3)
    assert payload_json(again) == text


def test_standard_instances_inventory():
    instances = list(standard_instances([2, 3, 4, 5], lambda m: range(m, 8)))
    assert len(instances) == sum(
        m ** (m - 2) * (8 - m) for m in (2, 3, 4, 5)
    )  # 460
    # sampling is deterministic and trims the tree count per m
    sampled = list(standard_instances([4], lambda m: [4], sample=5, seed=3))
    assert len(sampled) == 5
    assert sampled == list(standard_instances([4], lambda m: [4], sample=5, seed=3))


def test_run_sweep_order_and_pass():
    tree = star_tree(4, center=2)
    instances = [(tree, SubtreeFamily.full(tree), n) for n in (4, 5)]
    reports = list(run_sweep(instances))
    assert [r.payload["n"] for r in reports] == [4, 5]
    assert all(r.passed for r in reports)
    assert reports[1].payload["betti"]["2"] == [1, 121]
    assert reports[1].payload["betti"]["2"] == [
        1,
        math.factorial(4) * 5 + 1,
    ]  # 121 = f(4,5)
