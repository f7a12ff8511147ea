from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import KLEIN4, golden
from gyrokit.core import Exhaustive, check_identities
from gyrokit.finite import (
    CayleyGyrogroup,
    InvalidTable,
    canonical_form,
    cyclic,
    dump_table,
    from_table,
    gyr_perm,
    is_associative,
    is_group,
    is_isomorphic,
    load_table,
    relabel,
    table_from_json,
)
from oracles import associative, is_gyrogroup, naive_canonical, relabel_tuple


def test_z4_valid_group():
    g = from_table([[(i + j) % 4 for j in range(4)] for i in range(4)])
    assert is_group(g) and g.n == 4
    assert all(r.passed for r in g.reports)


def test_z2():
    g = from_table([[0, 1], [1, 0]])
    assert g.is_group() and g.inverse == (0, 1)


def test_order_one():
    g = from_table([[0]])
    assert g.is_group()
    assert canonical_form(g) == ((0,),)


def test_identity_moved_to_zero():
    # Z3 with identity labelled 2
    t = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    g = from_table(t, labels=["a", "b", "e"])
    assert g.table[0] == (0, 1, 2)
    assert g.labels[0] == "e"
    assert is_isomorphic(g, cyclic(3))


def test_missing_identity_rejected():
    with pytest.raises(InvalidTable) as e:
        from_table([[1, 1], [0, 0]])
    assert e.value.axiom == "G1"


def test_missing_inverse_rejected():
    # 0 is an identity but 1 + y never gives 0
    with pytest.raises(InvalidTable) as e:
        from_table([[0, 1, 2], [1, 1, 1], [2, 1, 0]])
    assert e.value.axiom == "G2"
    assert e.value.counterexample == (1,)


def test_non_latin_order3_rejected_with_counterexample():
    # Row 1 is not a permutation; 1 still has the inverse 2.
    t = [[0, 1, 2], [1, 1, 0], [2, 0, 1]]
    with pytest.raises(InvalidTable) as e:
        from_table(t)
    assert e.value.axiom in {"G3", "G4", "gyr-automorphism", "gyr-bijective"}
    assert e.value.counterexample is not None
    assert not is_gyrogroup(t)


def test_malformed_shapes():
    for bad in ([[0, 1], [1]], [[0, 5], [1, 0]], [[0, 1]], [], [["a"]]):
        with pytest.raises(InvalidTable):
            CayleyGyrogroup(bad)
    with pytest.raises(ValueError):
        table_from_json({"order": 3, "table": [[0, 1], [1, 0]]})


def test_fixture_is_valid_non_group(fixture8):
    g = fixture8
    assert g.n == 8 and not g.is_group()
    assert not is_associative(g.table) and not associative(g.table)
    assert is_gyrogroup(g.table)
    pairs = g.nontrivial_gyrations()
    assert pairs
    x, y = pairs[0]
    assert gyr_perm(g, x, y) != tuple(range(8))


def test_fixture_transcript_matches(fixture8):
    tr = golden("fixture8_transcript.json")
    assert [r.to_dict() for r in fixture8.reports] == tr["axioms"]
    ids = [r.to_dict() for r in check_identities(fixture8, Exhaustive())]
    assert ids == tr["identities"]
    assert [list(p) for p in fixture8.nontrivial_gyrations()] == tr["nontrivial_gyrations"]
    assert tr["is_group"] is False


def test_fixture_is_search_canonical(fixture8):
    assert canonical_form(fixture8) == fixture8.table


def test_is_group_examples(z6, fixture8):
    assert is_group(z6)
    assert not is_group(fixture8)
    assert is_group(cyclic(1))


def test_is_group_matches_associativity_oracle(z6, klein4, fixture8):
    for g in (z6, klein4, fixture8):
        assert g.is_group() == associative(g.table)


def test_z4_not_klein(klein4):
    assert not is_isomorphic(cyclic(4), klein4)
    assert not is_isomorphic(cyclic(4), cyclic(5))


def test_canonical_matches_naive_oracle(klein4, z6):
    for g in (cyclic(4), klein4, cyclic(5), z6):
        assert canonical_form(g) == naive_canonical(g.table)


def test_canonical_matches_naive_on_fixture(fixture8):
    assert canonical_form(fixture8) == naive_canonical(fixture8.table)


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(1, 8)))
def test_relabeled_fixture_isomorphic(fixture8, tail):
    perm = (0,) + tuple(tail)
    t = relabel(fixture8.table, perm)
    assert tuple(map(tuple, t.tolist())) == relabel_tuple(fixture8.table, perm)
    g = from_table(t)
    assert is_isomorphic(g, fixture8)
    assert canonical_form(g) == canonical_form(fixture8)


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(8)))
def test_relabel_moving_identity(fixture8, perm):
    g = from_table(relabel(fixture8.table, perm))
    assert is_isomorphic(g, fixture8)


def test_json_round_trip(tmp_path, fixture8):
    p = tmp_path / "t.json"
    p.write_text(dump_table(fixture8))
    assert load_table(p) == fixture8
    assert json.loads(dump_table(fixture8))["order"] == 8


def test_klein_table_constant():
    assert is_gyrogroup(KLEIN4)
    assert np.array_equal(np.asarray(from_table(KLEIN4).table), np.asarray(KLEIN4))
