from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bkforms.cli import main
from bkforms.errors import SpecValidationError
from bkforms.generators import random_form
from bkforms.serialize import dumps, dumps_form, format_float, loads, loads_form

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(argv, capsys, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def fixture(name):
    return str(FIXTURES / name)


# -- volume / decompose -------------------------------------------------------


def test_volume_fixture_text(capsys):
    code, out, _ = run(["volume", fixture("k2_constant.json"), "--format", "text"], capsys)
    assert code == 0
    assert out.splitlines()[:2] == ["P(t) = -2 + 2t", "Liouville volume: -2"]


def test_volume_fixture_json(capsys):
    code, out, _ = run(["volume", fixture("k2_constant.json")], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["volume_polynomial"] == [-2.0, 2.0]
    assert report["liouville_volume"] == -2.0
    assert [g for _, g in report["asymptotic_gaps"]] == [0.0, 0.0, 0.0, 0.0]


def test_volume_k3_and_custom_grid(capsys):
    code, out, _ = run(["volume", fixture("k3_constant.json"), "--eps-grid", "0.5,0.25"], capsys)
    report = json.loads(out)
    assert report["volume_polynomial"] == [0.0, 0.0, 0.0]
    assert [e for e, _ in report["asymptotic_gaps"]] == [0.5, 0.25]


def test_volume_k1_torus(capsys):
    code, out, _ = run(["volume", fixture("torus_k1.json")], capsys)
    assert json.loads(out)["volume_polynomial"] == [1.5]


def test_decompose_fixture(capsys):
    code, out, _ = run(["decompose", fixture("k2_constant.json")], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["residues"] == [[0.0, 1.0]]
    assert report["normal_form"][0]["alpha"][1]["constant"] == 1.0


def test_pure_bulk_spec(capsys, monkeypatch):
    spec = '{"k": 2, "bulk_integral": 3.5, "circles": []}'
    code, out, _ = run(["volume"], capsys, stdin=spec, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["liouville_volume"] == 3.5
    code, out, _ = run(["decompose", "-"], capsys, stdin=spec, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["residues"] == []


# -- classify -------------------------------------------------------------------


@pytest.mark.parametrize(
    "a, b, mode, expected",
    [
        ("k2_constant.json", "k2_constant.json", "symplecto", 0),
        ("k2_constant.json", "k2_constant_scaled.json", "symplecto", 1),
        ("k2_constant.json", "k2_constant_scaled.json", "poisson", 0),
        ("k2_constant.json", "k2_negative.json", "symplecto", 2),
        ("k2_constant.json", "k2_negative.json", "poisson", 3),
        ("k2_constant.json", "k3_constant.json", "symplecto", 3),
    ],
)
def test_classify_exit_codes(capsys, a, b, mode, expected):
    code, out, err = run(["classify", fixture(a), fixture(b), "--mode", mode], capsys)
    assert code == expected
    if expected == 3:
        assert err.startswith("error: ")
    else:
        assert json.loads(out)["verdict"]


def test_poisson_unknown_exit_code(capsys, tmp_path):
    other = json.loads((FIXTURES / "k2_constant.json").read_text())
    other["circles"][0]["R"] = 0.5
    other["circles"][0]["A"]["coeffs"][1]["constant"] = 1.0
    path = tmp_path / "shifted.json"
    path.write_text(json.dumps(other))
    code, out, _ = run(["classify", fixture("k2_constant.json"), str(path), "--mode", "poisson"], capsys)
    assert code == 2 and json.loads(out)["verdict"] == "Unknown"


# -- normalize ----------------------------------------------------------------


@pytest.mark.parametrize(
    "residues, P",
    [("0,1,1", [0.0, 1.0, 1.0]), ("3,1", [0.0, 1.0]), ("5", [0.0, 1.0])],
)
def test_normalize(capsys, residues, P):
    code, out, _ = run(["normalize", "--residues", residues], capsys)
    report = json.loads(out)
    assert code == 0
    assert np.allclose(report["P"], P, atol=1e-14)


def test_normalize_rejects_bad_vector(capsys):
    code, _, err = run(["normalize", "--residues", "1,-1"], capsys)
    assert code == 3 and "positive" in err


# -- errors and usage ------------------------------------------------------------


def test_missing_file(capsys):
    code, _, err = run(["volume", "/nonexistent/spec.json"], capsys)
    assert code == 3 and "error" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["volume", "--format", "yaml"])
    assert exc.value.code == 4


def test_malformed_json_reports_line():
    with pytest.raises(SpecValidationError, match="line 3"):
        loads_form('{\n  "k": 2,\n  "circles": [,]\n}')


def test_low_order_names_circle_and_line():
    spec = (FIXTURES / "k2_constant.json").read_text().replace('"order": 2', '"order": 1')
    with pytest.raises(SpecValidationError, match=r"line 7: circle 'Z1'.*order 1 < k = 2"):
        loads_form(spec)


def test_frequency_cap_rejected():
    data = json.loads((FIXTURES / "k2_constant.json").read_text())
    data["circles"][0]["A"]["coeffs"][0]["cos"] = [[65, 1.0]]
    with pytest.raises(SpecValidationError, match="Z1"):
        loads_form(json.dumps(data))


def test_unknown_fields_rejected():
    with pytest.raises(SpecValidationError):
        loads_form('{"k": 1, "circles": [], "extra": 1}')


# -- serialization -------------------------------------------------------------


@pytest.mark.parametrize("x", [0.1, -2.0, 1e-300, 123456789.123456789, 2.0 / 3.0, 5e-324])
def test_float_format_round_trips(x):
    s = format_float(x)
    assert float(s) == x and format_float(float(s)) == s


def test_report_is_byte_stable(capsys):
    for argv in (["volume", fixture("torus_k2.json")], ["decompose", fixture("torus_k1.json")]):
        _, out, _ = run(argv, capsys)
        assert dumps(loads(out)) == out


@pytest.mark.parametrize("seed", range(5))
def test_form_round_trip(seed):
    f = random_form(np.random.default_rng(seed))
    text = dumps_form(f)
    g = loads_form(text)
    assert g == f
    assert dumps_form(g) == text


def test_generate_torus(capsys):
    code, out, _ = run(["generate", "torus", "--k", "2", "--density", "1", "--density", "-3"], capsys)
    f = loads_form(out)
    assert code == 0 and f.circle_ids == ("Z1", "Z2")
    assert [c.orientation for c in f.collars] == [1, -1]


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "bkforms.cli", "volume", fixture("k2_constant.json"), "--format", "text"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and out.stdout.startswith("P(t) = -2 + 2t")
