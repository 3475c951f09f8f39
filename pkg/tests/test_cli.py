"""End-to-end command-line flows through main(argv)."""
import argparse
import json

import pytest

from qpke import analysis, qmat
from qpke.cli import _emit_reports, _parse_range, main


def run_keygen(tmp_path, name, *extra):
    outdir = tmp_path / name
    rc = main(["keygen", "--scheme", "a", "--n", "3", "--seed", "7",
               "--out", str(outdir), *extra])
    assert rc == 0
    return outdir


def test_parse_range():
    assert _parse_range("4") == [4]
    assert _parse_range("1..4") == [1, 2, 3, 4]
    with pytest.raises(argparse.ArgumentTypeError):
        _parse_range("8..3")


def test_keygen_writes_expected_files(tmp_path, capsys):
    outdir = run_keygen(tmp_path, "keys", "--count", "3")
    files = sorted(p.name for p in outdir.iterdir())
    assert files == ["private.json", "pub_0000.json", "pub_0001.json", "pub_0002.json"]
    line = capsys.readouterr().out
    assert "scheme=a n=3 m=6 count=3 seed=7" in line
    assert "private_fingerprint=" in line
    priv = json.loads((outdir / "private.json").read_text())
    assert priv["scheme"] == "a" and priv["n"] == 3


def test_keygen_is_deterministic(tmp_path):
    a = run_keygen(tmp_path, "a", "--count", "2")
    b = run_keygen(tmp_path, "b", "--count", "2")
    for name in ("private.json", "pub_0000.json", "pub_0001.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_keygen_rejects_narrow_seed_width(tmp_path):
    with pytest.raises(ValueError):
        main(["keygen", "--scheme", "a", "--n", "4", "--m", "4",
              "--out", str(tmp_path / "x")])


def test_encrypt_decrypt_file_flow(tmp_path, capsys):
    outdir = run_keygen(tmp_path, "keys")
    ct_path = tmp_path / "ct.json"
    rc = main(["encrypt", "--pub", str(outdir / "pub_0000.json"),
               "--message", "1", "--seed", "11", "--out", str(ct_path)])
    assert rc == 0
    blob = json.loads(ct_path.read_text())
    assert blob["scheme"] == "a"
    capsys.readouterr()
    rc = main(["decrypt", "--priv", str(outdir / "private.json"), "--ct", str(ct_path)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "1"


def test_encrypt_decrypt_wide_message(tmp_path, capsys):
    outdir = tmp_path / "m2"
    assert main(["keygen", "--scheme", "m2", "--n", "4", "--seed", "2",
                 "--out", str(outdir)]) == 0
    ct_path = tmp_path / "ct.json"
    capsys.readouterr()
    assert main(["encrypt", "--pub", str(outdir / "pub_0000.json"),
                 "--message", "1011", "--out", str(ct_path)]) == 0
    assert main(["decrypt", "--priv", str(outdir / "private.json"),
                 "--ct", str(ct_path)]) == 0
    assert capsys.readouterr().out.strip() == "1011"


def test_encrypt_rejects_wrong_message_width(tmp_path):
    outdir = run_keygen(tmp_path, "keys")
    with pytest.raises(SystemExit):
        main(["encrypt", "--pub", str(outdir / "pub_0000.json"), "--message", "101"])


def test_roundtrip_command(capsys):
    rc = main(["roundtrip", "--scheme", "enh", "--n", "3", "--trials", "5"])
    assert rc == 0
    assert "correct=5" in capsys.readouterr().out


def test_analyze_csv_output(capsys):
    rc = main(["analyze", "--target", "sigma-bound", "--n", "1..4", "--seed", "9"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = [l for l in out.strip().split("\n") if not l.startswith("#")]
    assert lines[0] == analysis.CSV_HEADER
    assert len(lines) == 5
    assert out.startswith("#")


def test_analyze_json_output(capsys):
    rc = main(["analyze", "--target", "pubkey-leakage", "--n", "1..2",
               "--format", "json"])
    assert rc == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["seed"] == 0
    assert len(blob["reports"]) == 4  # two schemes per n
    for row in blob["reports"]:
        assert "computed" in row and "margin" in row


def test_analyze_writes_file(tmp_path, capsys):
    out = tmp_path / "r.csv"
    rc = main(["analyze", "--target", "pan10-bounds", "--n", "3..4", "--t", "1..2",
               "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert analysis.CSV_HEADER in text
    assert len([l for l in text.strip().split("\n") if l and not l.startswith("#")]) == 9


def test_analyze_multicopy_options(capsys):
    rc = main(["analyze", "--target", "multicopy", "--n", "2..3", "--t", "1",
               "--reuse", "shared_s"])
    assert rc == 0
    rows = [l for l in capsys.readouterr().out.strip().split("\n")
            if l and not l.startswith("#")][1:]
    assert len(rows) == 2
    assert all(",shared_s," in r for r in rows)


def test_emit_reports_flags_violations(capsys):
    bad = analysis.SecurityReport("made-up", None, 2, None, "uniform_k", None,
                                  computed=0.9, bound=0.5)
    args = argparse.Namespace(format="csv", out=None, seed=0)
    rc = _emit_reports([bad], args, {"target": "made-up"})
    captured = capsys.readouterr()
    assert rc == 1
    assert "BOUND VIOLATED" in captured.err
    assert "made-up" in captured.out


def test_attack_pan10_key(capsys):
    rc = main(["attack", "--target", "pan10-key", "--n", "4", "--runs", "5",
               "--seed", "3"])
    assert rc == 0
    captured = capsys.readouterr()
    assert "success_rate=1.0000" in captured.err
    blob = json.loads(captured.out)
    assert blob["success_rate"] == 1.0
    assert len(blob["runs"]) == 5


def test_attack_pan10_key_csv(tmp_path, capsys):
    out = tmp_path / "attack.csv"
    rc = main(["attack", "--target", "pan10-key", "--n", "3", "--runs", "4",
               "--format", "csv", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "target,n,copies_used,success,seed"
    assert len(lines) == 5


def test_attack_owt_baseline(capsys):
    rc = main(["attack", "--target", "owt-baseline", "--n", "2",
               "--samples", "2000", "--seed", "5"])
    assert rc == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["expected"] == 0.25
    assert abs(blob["rate"] - 0.25) < 0.05


def test_attack_distinguish(capsys):
    rc = main(["attack", "--target", "distinguish", "--scheme", "b", "--n", "2",
               "--samples", "1500", "--seed", "6"])
    assert rc == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["success"] is True
    assert abs(blob["analytic"] - 0.5) < 1e-9


def test_sweep_is_deterministic_and_clean(tmp_path):
    first = tmp_path / "sweep1.csv"
    second = tmp_path / "sweep2.csv"
    assert main(["sweep", "--out", str(first)]) == 0
    assert main(["sweep", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    rows = [l for l in first.read_text().strip().split("\n")
            if l and not l.startswith("#")]
    assert rows[0] == analysis.CSV_HEADER
    assert len(rows) > 30


def test_dimension_cap_env(monkeypatch):
    monkeypatch.setenv("QPKE_DIM_CAP", "8")
    with pytest.raises(qmat.DimensionCapError):
        main(["analyze", "--target", "sigma-bound", "--n", "5"])
