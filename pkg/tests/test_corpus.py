"""The bundled small-group corpus against its frozen class tables."""

import json
from importlib import resources

import pytest

from co3geo.corpus import CORPUS, class_table, poset_summary, small_group


def golden(name):
    path = resources.files("co3geo.data").joinpath(f"smallgroups/{name}.json")
    return json.loads(path.read_text())


@pytest.mark.parametrize("name", CORPUS)
def test_class_table_matches_golden(name):
    assert class_table(name) == golden(name)


@pytest.mark.parametrize("name,order", [("s4", 24), ("s5", 120), ("gl32", 168)])
def test_group_orders(name, order):
    assert small_group(name).order == order


def test_s4_bouc_complex_is_contractible():
    s = poset_summary("s4")
    assert s["bouc_collapses_to_point"]
    assert s["bouc_betti"] == [0, 0]
    assert s["quillen_matches_bouc"]


def test_s5_poset_summary():
    s = poset_summary("s5")
    assert s["bouc_euler"] == -16
    assert s["bouc_betti"] == [0, 16]
    assert s["quillen_matches_bouc"]


def test_gl32_poset_summary():
    s = poset_summary("gl32")
    assert s["bouc_euler"] == -8
    assert s["bouc_betti"] == [0, 8]
    assert s["quillen_matches_bouc"]
    assert s["distinguished_matches_bouc"]
