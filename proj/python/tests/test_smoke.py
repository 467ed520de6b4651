import json
import os
from pathlib import Path

import jsonschema
import pytest

import chorgate

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = Path(os.environ.get("CHORGATE_FIXTURE_DIR", ROOT / "fixtures"))
SCHEMA = Path(os.environ.get("CHORGATE_SCHEMA_DIR", ROOT / "schema")) / "requirements.schema.json"


@pytest.fixture(scope="module")
def model():
    return chorgate.load_choreography(FIXTURES / "purchasing.bpmn")


@pytest.fixture(scope="module")
def doc():
    return chorgate.load_requirements(FIXTURES / "purchasing.req.json")


def test_parse_fixture(model, doc):
    assert model.name == "Purchasing"
    assert model.participants == ["agency", "buyer", "factory"]
    assert len(doc.goals) == 9
    assert doc.requirements == ["Order Delivery", "Payment", "Price Negotiation", "Providing Order", "Registration"]
    assert chorgate.validate_choreography(model) == []
    assert chorgate.bind_participants(doc, model) == []


def test_requirements_fixture_matches_schema():
    schema = json.loads(SCHEMA.read_text())
    jsonschema.validate(json.loads((FIXTURES / "purchasing.req.json").read_text()), schema)


def test_automaton(model):
    automaton = chorgate.compile(model)
    traces, truncated = automaton.enumerate(loop_bound=2)
    assert not truncated
    assert len(traces) == 12
    assert all(automaton.accepts(t) for t in traces)
    ordinary = [
        chorgate.MessageEvent("ordinaryRegistrationRequest", "buyer", "agency"),
        chorgate.MessageEvent("startRegistration", "buyer", "agency"),
    ]
    assert automaton.accepts(ordinary)
    assert not automaton.accepts(list(reversed(ordinary)))


def test_validate(model, doc):
    report = chorgate.validate(model, doc)
    assert report.valid
    assert report.matrix == (9, 0, 0, 1)
    assert report.uncovered == []
    payload = json.loads(report.render("json"))
    assert payload["overall"] == "valid"
    assert report.render("csv") == "Purchasing,5,9,1,9,0,0,1,100%,100%,100%\n"


def test_metrics():
    m = chorgate.compute_metrics(9, 3, 0, 1)
    assert m["accuracy"] == (10, 13)
    assert m["percent"] == ("77%", "100%", "75%")
    assert chorgate.compute_metrics(0, 0, 0, 0)["percent"] == ("N/A", "N/A", "N/A")


def test_errors_carry_diagnostics():
    with pytest.raises(chorgate.ChorgateError) as info:
        chorgate.parse_choreography("<definitions")
    assert info.value.diagnostics[0].code == "MalformedXml"
    with pytest.raises(ValueError):
        chorgate.validate(
            chorgate.load_choreography(FIXTURES / "purchasing.bpmn"),
            chorgate.load_requirements(FIXTURES / "purchasing.req.json"),
        ).render("xml")


def test_run_exit_codes():
    code, out, _ = chorgate.run(["validate", str(FIXTURES / "purchasing.bpmn"), str(FIXTURES / "purchasing.req.json")])
    assert code == 0 and "VALID" in out
    code, _, _ = chorgate.run(
        ["validate", str(FIXTURES / "purchasing_no_payment.bpmn"), str(FIXTURES / "purchasing.req.json")]
    )
    assert code == 1
    code, _, err = chorgate.run(["validate", "missing.bpmn", str(FIXTURES / "purchasing.req.json")])
    assert code == 2 and "missing.bpmn" in err
