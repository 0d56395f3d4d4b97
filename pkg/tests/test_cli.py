import io
import json
from pathlib import Path

import pytest

from lingroth.cli import run, validate_object
from lingroth.fixtures import EXPECTED

MALFORMED = Path(__file__).parent / "data" / "malformed"


def _run(*argv):
    out = io.StringIO()
    status = run(["--format", "json", *argv], out=out)
    return status, json.loads(out.getvalue())


def test_sum_id_fix1_passes():
    out = io.StringIO()
    assert run(["sum-id", "FIX1"], out=out) == 0
    assert out.getvalue().startswith("sum-id: pass, 3 families checked")


def test_sum_id_fix3_reports_witness():
    status, doc = _run("sum-id", "FIX3")
    assert status == 1
    assert doc["report"]["per_pair"]["x->y"]["witness"]["components"] == [{"f": "f", "r1": "1", "r2": "0"}]


def test_include_zero_flag():
    assert _run("sum-id", "FIX2", "--include-zero")[0] == 0
    status, doc = _run("sum-id", "FIX3", "--include-zero")
    assert status == 1 and doc["report"]["witness"]["components"] == []


def test_roundtrip_fix4():
    status, doc = _run("roundtrip", "FIX4", "--over", "FIX2")
    assert status == 0
    assert doc["report"]["phi_psi_exact"] and doc["report"]["psi_phi_exact"]


def test_roundtrip_without_sum_id_is_marked_vacuous():
    status, doc = _run("roundtrip", "MOD3", "--over", "FIX3")
    assert status == 0 and doc["report"]["vacuous"]


def test_well_defined():
    assert _run("well-defined", "FIX3")[0] == 0
    status, doc = _run("well-defined", "FIX3_THETA")
    assert status == 1 and doc["report"]["violations"]


def test_psi_and_phi():
    assert _run("psi", "FIX4", "--over", "FIX2")[0] == 0
    status, doc = _run("psi", "MOD3", "--over", "FIX3")
    assert status == 1 and {v["law"] for v in doc["report"]["validation"]["violations"]} == {"coherence"}
    status, doc = _run("phi", "GR_TRIVIAL")
    assert status == 1 and doc["report"]["structure_failure"]


def test_gr_description():
    status, doc = _run("gr", "FIX1")
    assert status == 0
    assert doc["report"]["homs"]["*->*"]["pure_families"] == 5


def test_audit_truncated():
    status, doc = _run("audit", "--universe", "U_TRUNC", "--workers", "2")
    assert status == 1 and doc["report"]["findings"]


def test_audit_terminal():
    status, doc = _run("audit", "--universe", "U_TERMINAL")
    assert status == 0 and doc["report"]["exhaustive"]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_validate_labels(name):
    status, doc = _run("validate", name)
    assert status == 1
    assert {v["law"] for v in doc["report"]["violations"]} == EXPECTED[name]


def test_validate_valid():
    for name in ("FIX1", "FIX4", "terminal", "Z4", "AB_C2", "ID_C2", "U_ARROW", "GR_TRIVIAL"):
        assert _run("validate", name)[0] == 0, name


def test_invalid_input_is_refused():
    # commands other than validate and well-defined need valid input
    status, doc = _run("sum-id", "FIX3_THETA")
    assert status == 2 and doc["report"]["validation"]["violations"]
    assert _run("roundtrip", "FIX4", "--over", "FIX3")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "NOPE"],
        ["sum-id", "Z2"],
        ["frobnicate"],
        ["psi", "FIX4"],
        ["--budget", "0", "sum-id", "FIX1"],
        ["--spec", "/nonexistent/file.json", "validate", "FIX1"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    out = io.StringIO()
    assert run(argv, out=out) == 2


def test_budget_exhaustion_exits_2():
    status, doc = _run("--budget", "2", "sum-id", "FIX3")
    assert status == 2 and doc["report"]["needed"] > 2


@pytest.mark.parametrize("name", sorted(p.name for p in MALFORMED.glob("*.json") if p.name != "expected.json"))
def test_malformed_files_run_nothing(name):
    status, doc = _run("--spec", str(MALFORMED / name), "validate", "Z2")
    assert status == 2
    assert set(doc["report"]) == {"error", "errors"}
    assert all(e["line"] >= 1 and e["column"] >= 1 for e in doc["report"]["errors"])


def test_no_partial_execution(tmp_path):
    # a valid FIX1 next to one broken entry: nothing runs, not even on FIX1
    from lingroth.fixtures import fix1_data

    data = fix1_data()
    data["rings"]["BAD"] = {"product": ["Z8"]}
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(data, indent=2))
    status, doc = _run("--spec", str(path), "sum-id", "FIX1")
    assert status == 2
    assert "per_pair" not in doc["report"]


def test_structured_output_is_deterministic():
    a = io.StringIO()
    b = io.StringIO()
    run(["--format", "json", "sum-id", "FIX3"], out=a)
    run(["sum-id", "FIX3", "--format", "json"], out=b)
    assert a.getvalue() == b.getvalue()


def test_validate_object_rejects_unknown_types():
    from lingroth.cli import InputError

    with pytest.raises(InputError):
        validate_object(42)
