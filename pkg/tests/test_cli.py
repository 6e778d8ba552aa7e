import json

import pytest

from eiscong import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_subcommand_is_usage_error(capsys):
    code, _out, err = run(capsys)
    assert code == cli.EXIT_CONFIG
    assert "usage" in err


def test_gauss_example(capsys, tmp_path):
    code, out, _ = run(capsys, "epsilon", "gauss", "--modulus", "5",
                       "--char", "quadratic",
                       "--report-dir", str(tmp_path))
    assert code == 0
    assert "G^2 = 5" in out
    rep = json.loads((tmp_path / "epsilon-gauss.json").read_text())
    assert rep["square_rational"] == 5
    assert rep["norm_squared"] == 5


def test_selftest_empty_config_rejected(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, _out, err = run(capsys, "selftest", "all",
                          "--config", str(empty))
    assert code == cli.EXIT_CONFIG
    assert "config error" in err


def test_unknown_config_key_rejected(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"setings": {}}))
    code, _out, err = run(capsys, "euler", "identity",
                          "--config", str(bad))
    assert code == cli.EXIT_CONFIG
    assert "unknown keys" in err


def test_unknown_preset_rejected(capsys):
    code, _out, err = run(capsys, "congruence", "check",
                          "--preset", "nope", "--bound", "6")
    assert code == cli.EXIT_CONFIG
    assert "unknown tower preset" in err


def test_p_flag_must_match(capsys):
    code, _out, err = run(capsys, "congruence", "check",
                          "--preset", "zeta9", "--p", "5",
                          "--bound", "6")
    assert code == cli.EXIT_CONFIG
    assert "disagrees" in err


def test_quick_congruence_ok(capsys):
    code, out, _ = run(capsys, "congruence", "check", "--preset", "zeta9",
                       "--phi", "battery0", "--k", "1", "--bound", "12",
                       "--p", "3")
    assert code == 0
    assert "0 mismatches" in out


def test_negative_control_exit_codes(capsys):
    code, out, _ = run(capsys, "congruence", "check", "--preset", "zeta9",
                       "--phi", "negative-control", "--k", "1",
                       "--bound", "12", "--no-orbits")
    assert code == cli.EXIT_MISMATCH
    assert "refused" in out
    code, out, _ = run(capsys, "congruence", "check", "--preset", "zeta9",
                       "--phi", "negative-control", "--k", "1",
                       "--bound", "18", "--force", "--no-orbits")
    assert code == cli.EXIT_MISMATCH
    assert "mismatch" in out


def test_orbits_subcommand(capsys):
    code, out, _ = run(capsys, "congruence", "orbits", "--preset", "zeta9",
                       "--phi", "battery1", "--k", "1", "--bound", "15")
    assert code == 0
    assert "violations" in out


def test_eis_pipeline_consistency(capsys, tmp_path):
    code, _out, _ = run(capsys, "eis", "restrict", "--preset", "zeta9",
                        "--phi", "battery0", "--k", "1", "--bound", "9",
                        "--report-dir", str(tmp_path))
    assert code == 0
    lo = json.loads((tmp_path / "eis-restrict.json").read_text())
    code, _out, _ = run(capsys, "eis", "frobenius", "--preset", "zeta9",
                        "--phi", "battery0", "--k", "1", "--bound", "9",
                        "--report-dir", str(tmp_path))
    assert code == 0
    hi = json.loads((tmp_path / "eis-frobenius.json").read_text())
    # both sides of the congruence agree mod 3 coefficientwise; at this
    # bound they are even equal, so compare the parsed coefficient lines
    lo_coefs = [ln for ln in lo["expansion"] if ln.startswith("coef")]
    hi_coefs = [ln for ln in hi["expansion"] if ln.startswith("coef")]
    assert lo_coefs and lo_coefs == hi_coefs


def test_expand_reports_digest(capsys, tmp_path):
    code, out, _ = run(capsys, "eis", "expand", "--preset", "zeta9",
                       "--phi", "battery0", "--k", "2", "--bound", "6",
                       "--report-dir", str(tmp_path))
    assert code == 0
    rep = json.loads((tmp_path / "eis-expand.json").read_text())
    assert rep["digest"] in out
    assert rep["terms"] == sum(
        1 for ln in rep["expansion"] if ln.startswith("coef"))


def test_classgrp_exit_codes(capsys):
    code, out, _ = run(capsys, "classgrp", "compute", "--field", "sqrt5",
                       "--narrow")
    assert code == 0
    assert "trivial" in out
    code, out, _ = run(capsys, "classgrp", "compute", "--preset", "zeta9",
                       "--with-top-cm", "--cap", "200")
    assert code == cli.EXIT_INCONCLUSIVE
    assert "inconclusive" in out


def test_assumptions_exit_codes(capsys):
    code, out, _ = run(capsys, "assumptions", "check", "--preset", "zeta9")
    assert code == cli.EXIT_INCONCLUSIVE
    assert "h2: holds" in out and "h3: holds" in out
    code, _out, err = run(capsys, "assumptions", "check", "--preset",
                          "zeta9", "--cm-disc", "-7")
    assert code == cli.EXIT_CONFIG
    assert "preset rejected" in err


def test_reports_are_deterministic(capsys, tmp_path, monkeypatch):
    d1 = tmp_path / "a"
    d2 = tmp_path / "b"
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(d1))
    code, out1, _ = run(capsys, "euler", "identity", "--emax", "1",
                        "--trunc", "8")
    assert code == 0
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(d2))
    code, out2, _ = run(capsys, "euler", "identity", "--emax", "1",
                        "--trunc", "8")
    assert code == 0
    assert out1 == out2
    assert (d1 / "euler-identity.json").read_bytes() \
        == (d2 / "euler-identity.json").read_bytes()


def test_config_settings_and_custom_battery(capsys, tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({
        "settings": {"preset": "zeta9", "phi": "mine"},
        "batteries": {"mine": {"preset": "zeta9",
                               "seeds": [[[2, 0, 0], [1, 0, 0]]]}},
    }))
    code, out, _ = run(capsys, "congruence", "check", "--k", "1",
                       "--bound", "12", "--config", str(cfgfile),
                       "--no-orbits")
    assert code == 0
    assert "mine0k1" in out


def test_katz_single_and_sweep(capsys):
    code, out, _ = run(capsys, "epsilon", "katz-deligne", "--modulus",
                       "9", "--char", "0")
    assert code == 0
    assert "equal" in out
    code, out, _ = run(capsys, "epsilon", "katz-deligne",
                       "--sweep-bound", "8")
    assert code == 0
    assert "ok" in out


def test_gauss_sweep_cli(capsys):
    code, out, _ = run(capsys, "epsilon", "gauss", "--sweep-bound", "15")
    assert code == 0
    assert "ok" in out


def test_inductivity_cli(capsys):
    code, out, _ = run(capsys, "epsilon", "inductivity", "--preset",
                       "zeta7")
    assert code == 0
    assert "conductor-discriminant zeta7: ok" in out
    assert "MISMATCH" not in out
