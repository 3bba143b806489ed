"""End-to-end runs of the command-line entry point (exit codes, files, bytes)."""
import json

import numpy as np
import pytest

from pwlab import jsonio
from pwlab.cli import main
from pwlab.grid import SampledFunction
from pwlab.pwspace import default_grid, sinc_kernel
from pwlab.symbols import gaussian_symbol, to_dict
from pwlab.toeplitz import OperatorMatrix, matrix_to_dict, toeplitz_matrix


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    """Input files shared by the command tests, written once."""
    d = tmp_path_factory.mktemp("cli")
    grid = default_grid(1.0)

    sym = to_dict(gaussian_symbol(amp=0.8, width=2.0, shift=0.0))
    jsonio.dump_canonical(sym, d / "gauss_flat.json")
    jsonio.dump_canonical({"gaussian": {k: v for k, v in sym.items()
                                        if k != "kind"}},
                          d / "gauss_wrapped.json")

    smooth = sinc_kernel(0.5, 0.0, grid)
    jsonio.dump_canonical(jsonio.function_to_dict(smooth), d / "smooth.json")

    k = sinc_kernel(0.9, 0.0, grid)
    target = jsonio.function_to_dict(SampledFunction(grid, k.values ** 2))
    jsonio.dump_canonical(target, d / "target.json")

    T = toeplitz_matrix(gaussian_symbol(), 1.0, 2.0, 64.0, grid)
    jsonio.dump_canonical(matrix_to_dict(T), d / "matrix.json")

    n = T.size
    e = np.zeros(n)
    e[n // 2] = e[n // 2 + 16] = 1.0 / np.sqrt(2.0)
    S = OperatorMatrix(T.entries + np.outer(e, e), 1.0, 2.0, 64.0, T.nodes)
    jsonio.dump_canonical(matrix_to_dict(S), d / "matrix_spoiled.json")

    T3 = toeplitz_matrix(gaussian_symbol(), 1.0, 3.0, 64.0, grid)
    jsonio.dump_canonical(matrix_to_dict(T3), d / "matrix_p3.json")
    return d


def run(*argv):
    return main([str(a) for a in argv])


def test_project_writes_json_and_csv(files, tmp_path):
    out = tmp_path / "proj.json"
    assert run("project", "--input", files / "smooth.json", "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["residual_removed"] < 1e-5  # in-band up to window truncation
    assert len(payload["fun"]["values"]) > 0
    assert (tmp_path / "proj.csv").exists()


def test_outputs_are_byte_identical_across_runs(files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("split", "--symbol", files / "gauss_flat.json",
                   "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()


def test_wrapped_and_flat_symbol_files_agree(files, tmp_path):
    a, b = tmp_path / "flat.json", tmp_path / "wrapped.json"
    assert run("toeplitz", "--symbol", files / "gauss_flat.json",
               "--basis-window", 8, "--out", a) == 0
    assert run("toeplitz", "--symbol", files / "gauss_wrapped.json",
               "--basis-window", 8, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_split_emits_bump_table(files, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run("split", "--symbol", files / "gauss_flat.json",
               "--emit-bumps", "--out", "split.json") == 0
    lines = (tmp_path / "bumps.csv").read_text().splitlines()
    assert lines[0] == "xi,bump_L,bump_C,bump_R"
    assert len(lines) == 1 + 257  # [-4, 4] at step 1/32


def test_missing_input_file_is_exit_one(files, tmp_path, capsys):
    assert run("project", "--input", tmp_path / "nope.json") == 1
    assert capsys.readouterr().err.startswith("input error:")


def test_negative_band_names_the_field(files, capsys):
    assert run("project", "--input", files / "smooth.json", "--band", -1) == 1
    assert "band" in capsys.readouterr().err


def test_malformed_json_is_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("split", "--symbol", bad) == 1
    assert "input error" in capsys.readouterr().err


def test_unknown_symbol_kind_is_exit_one(tmp_path, capsys):
    bad = tmp_path / "kind.json"
    bad.write_text('{"kind": "sawtooth", "teeth": 3}')
    assert run("split", "--symbol", bad) == 1
    assert "sawtooth" in capsys.readouterr().err


def test_bad_tol_syntax_is_exit_one(files, capsys):
    assert run("project", "--input", files / "smooth.json",
               "--tol", "residual") == 1
    assert "tol" in capsys.readouterr().err


def test_unknown_flag_is_exit_one_not_abort(files, capsys):
    # argparse normally calls sys.exit(2); we reserve 2 for certificates
    assert run("project", "--input", files / "smooth.json", "--frobble") == 1
    assert "input error" in capsys.readouterr().err


def test_factorize_margin_must_leave_room(files, capsys):
    assert run("factorize", "--input", files / "target.json",
               "--margin", 1.5) == 1
    assert "margin" in capsys.readouterr().err


def test_factorize_rejects_target_wider_than_margin(files, tmp_path, capsys):
    assert run("factorize", "--input", files / "target.json",
               "--margin", 0.3, "--out", tmp_path / "f.json") == 1
    assert "widen --margin" in capsys.readouterr().err


def test_factorize_summary_certifies(files, tmp_path):
    out = tmp_path / "fact.json"
    assert run("factorize", "--input", files / "target.json",
               "--summary", "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["certified"] is True
    assert payload["n_pairs"] == 512
    assert "pairs" not in payload


def test_factorize_full_output_lists_atom_pairs(files, tmp_path):
    out = tmp_path / "fact_full.json"
    assert run("factorize", "--input", files / "target.json",
               "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["pairs_format"] == "atoms"
    assert len(payload["pairs"]) <= payload["n_pairs"]
    assert {"center", "weight"} <= set(payload["pairs"][0])


def test_factorize_unreachable_tolerance_is_exit_two(files, tmp_path, capsys):
    assert run("factorize", "--input", files / "target.json", "--summary",
               "--tol", "residual_sup=1e-30", "--tol", "residual_l1=1e-30",
               "--out", tmp_path / "f.json") == 2
    assert "certificate failure" in capsys.readouterr().err


def test_commutator_test_accepts_true_toeplitz(files, tmp_path):
    out = tmp_path / "ct.json"
    assert run("commutator-test", "--matrix", files / "matrix.json",
               "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["is_toeplitz"] is True
    assert payload["deviation"] <= 1e-6


def test_commutator_test_flags_spoiled_matrix(files, tmp_path):
    out = tmp_path / "ct_bad.json"
    assert run("commutator-test", "--matrix", files / "matrix_spoiled.json",
               "--out", out) == 2
    payload = json.loads(out.read_text())
    assert payload["is_toeplitz"] is False
    assert payload["deviation"] > 1e-3


def test_matrix_commands_take_band_from_the_file(files, tmp_path, capsys):
    # a --band flag may only agree with what the matrix file says
    assert run("commutator-test", "--matrix", files / "matrix.json",
               "--band", 2.0, "--out", tmp_path / "x.json") == 1
    assert "does not match matrix band" in capsys.readouterr().err


def test_recover_symbol_roundtrip(files, tmp_path):
    out = tmp_path / "rec.json"
    assert run("recover-symbol", "--matrix", files / "matrix.json",
               "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["roundtrip_residual"] < 1e-3
    assert set(payload) >= {"anti_analytic_part", "analytic_part", "total"}


def test_recover_symbol_needs_p_two(files, tmp_path, capsys):
    assert run("recover-symbol", "--matrix", files / "matrix_p3.json",
               "--out", tmp_path / "x.json") == 1
    assert "p = 2" in capsys.readouterr().err


def test_verify_runs_clean_and_reports(files, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert run("verify", "--out", "report.json") == 0
    out = capsys.readouterr().out
    assert "all pass" in out
    assert "FAIL" not in out
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "check_id,paper_ref,measured,bound,pass"
    assert all(line.endswith(",true") for line in lines[1:])
