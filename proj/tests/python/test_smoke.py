import os
from pathlib import Path

import pytest

import hyltl

MODELS = Path(os.environ.get("HYLTL_SOURCE_DIR", Path(__file__).resolve().parents[2])) / "models"
REACT = "!F(x >= 21 & X on)"


@pytest.fixture(scope="module")
def thermostat():
    return hyltl.load_model(str(MODELS / "thermostat.hyha"))


def test_model_shape(thermostat):
    assert thermostat.name == "thermostat"
    assert thermostat.variables == ["x"]
    assert thermostat.locations == ["idle", "heat"]
    assert thermostat.edge_count == 2
    assert hyltl.isomorphic(thermostat, hyltl.parse_model(str(thermostat)))


def test_reaction_property_is_verified(thermostat):
    v = hyltl.check(thermostat, REACT)
    assert v["verdict"] == "Verified"
    assert v["hits"] == []


def test_relaxed_guard_is_inconclusive():
    relaxed = hyltl.load_model(str(MODELS / "thermostat_relaxed.hyha"))
    v = hyltl.check(relaxed, REACT)
    assert v["verdict"] == "Inconclusive"
    location, box = v["hits"][0]
    assert location.startswith("idle.")
    assert set(box) == {"x", "f", "y"}


def test_formulas():
    f = hyltl.parse_formula("!F(x >= 21 & X on)", variables=["x"], actions=["on", "off"])
    assert str(hyltl.to_nnf(f)) == "(false R ((x < 21) | X !on))"
    assert f == hyltl.parse_formula(str(f), variables=["x"], actions=["on", "off"])
    with pytest.raises(hyltl.Error, match="parse_error"):
        hyltl.parse_formula("F(x >= 21", variables=["x"])


def test_translate_and_compose(thermostat):
    top = hyltl.parse_formula("true", actions=["on", "off"])
    fa = hyltl.translate(top, [], ["on", "off"])
    assert len(fa.locations) == 3
    assert len(hyltl.compose(thermostat, fa).locations) == 6


def test_phaver_round_trip(thermostat):
    text = hyltl.export_phaver(thermostat)
    assert "x' == 30 - 0.2 * x" in text
    assert hyltl.isomorphic(hyltl.import_phaver(text), thermostat)


def test_simulate_and_monitor(thermostat):
    csv, events = hyltl.simulate(thermostat, seed=4, initial={"x": (19.0, 21.0)})
    assert csv.startswith("segment,time,x")
    assert hyltl.monitor(csv, events, "G(on -> F off)", thermostat)
    assert not hyltl.monitor(csv, events, "F G on", thermostat)
    assert hyltl.simulate(thermostat, seed=4, initial={"x": (19.0, 21.0)}) == (csv, events)
