import json

import numpy as np
import pytest

from bottlab import cli
from bottlab.pairing import ProjectionMatrix, bott_loop, loop_to_json, power_loop


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_loop(tmp_path, loop, name="loop.json"):
    path = tmp_path / name
    path.write_text(loop_to_json(loop))
    return str(path)


class TestVerifySymbols:
    def test_default(self, capsys):
        code, out, _ = run(capsys, "verify-symbols")
        assert code == 0
        assert "PASS" in out
        assert "seed=0" in out

    def test_small_grid(self, capsys):
        code, out, _ = run(capsys, "verify-symbols", "--grid", "16")
        assert code == 0

    def test_bad_triple_hook(self, capsys):
        code, out, _ = run(capsys, "verify-symbols", "--fconst", "0.5")
        assert code == 2
        assert "FAIL" in out


class TestSweep:
    def test_small_sweep_csv(self, capsys):
        code, out, err = run(capsys, "sweep", "--n-list", "8,16")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == ("N,tr_e,tr_e2,tr_e3,norm_chi_minus_e,"
                            "norm_e2_minus_e,gap,raw_index,index")
        assert lines[1].startswith("8,")
        assert lines[1].endswith(",1")
        assert "seed=0" in err

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "sweep", "--n-list", "8,16", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert [r["N"] for r in rows] == [8, 16]
        assert rows[0]["index"] == 1

    def test_gap_closed_row_warns_but_passes(self, capsys):
        code, _, err = run(capsys, "sweep", "--n-list", "4,8,16")
        assert code == 0
        assert "gap closed" in err

    def test_tiny_n_flagged_as_note(self, capsys):
        code, _, err = run(capsys, "sweep", "--n-list", "2")
        assert code == 0
        assert "note" in err

    def test_deterministic_stdout(self, capsys):
        code1, out1, _ = run(capsys, "sweep", "--n-list", "8,16")
        code2, out2, _ = run(capsys, "sweep", "--n-list", "8,16")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_thread_cap_does_not_change_output(self, capsys, monkeypatch):
        _, serial, _ = run(capsys, "sweep", "--n-list", "8,16,32")
        monkeypatch.setenv("BOTTLAB_THREADS", "3")
        _, threaded, _ = run(capsys, "sweep", "--n-list", "8,16,32")
        assert serial == threaded

    def test_output_file_and_plot(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        figdir = tmp_path / "figs"
        code, out, err = run(capsys, "sweep", "--n-list", "8,16",
                             "--output", str(target), "--plot", str(figdir))
        assert code == 0
        assert out == ""
        assert target.read_text().splitlines()[0].startswith("N,tr_e")
        written = sorted(p.name for p in figdir.iterdir())
        assert written == ["sweep_decay.png", "sweep_gap_index.png"]
        assert "wrote" in err


class TestPairing:
    def test_generator(self, capsys, tmp_path):
        path = write_loop(tmp_path, power_loop(-1))
        code, out, _ = run(capsys, "pairing", "--loop", path, "--t", "24")
        assert code == 0
        assert "index     : 1" in out

    def test_constant_loop(self, capsys, tmp_path):
        path = write_loop(tmp_path, bott_loop(ProjectionMatrix(np.zeros((2, 2)))))
        code, out, _ = run(capsys, "pairing", "--loop", path)
        assert code == 0
        assert "index     : 0" in out

    def test_z_squared(self, capsys, tmp_path):
        path = write_loop(tmp_path, power_loop(2))
        code, out, _ = run(capsys, "pairing", "--loop", path, "--t", "24")
        assert code == 0
        assert "index     : -2" in out

    def test_gap_closed_exit(self, capsys, tmp_path):
        path = write_loop(tmp_path, power_loop(-1))
        code, _, err = run(capsys, "pairing", "--loop", path, "--t", "5")
        assert code == 4
        assert "larger t" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{oops")
        code, _, err = run(capsys, "pairing", "--loop", str(path))
        assert code == 64

    def test_wrong_schema(self, capsys, tmp_path):
        path = tmp_path / "schema.json"
        path.write_text(json.dumps({"k": 1, "coeffs": [{"mode": 0, "matrix": [[[1.0]]]}]}))
        code, _, _ = run(capsys, "pairing", "--loop", str(path))
        assert code == 64

    def test_non_unitary_loop(self, capsys, tmp_path):
        path = tmp_path / "nonunitary.json"
        path.write_text(json.dumps({"k": 1, "coeffs": [{"mode": 0, "matrix": [[[0.5, 0.0]]]}]}))
        code, _, err = run(capsys, "pairing", "--loop", str(path))
        assert code == 65

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "pairing", "--loop", str(tmp_path / "absent.json"))
        assert code == 64


class TestRoundtrip:
    def test_small_run(self, capsys):
        code, out, _ = run(capsys, "roundtrip", "--k", "3", "--ranks", "0,1",
                           "--per-rank", "2", "--t", "16")
        assert code == 0
        assert "PASS" in out


class TestNearest:
    def test_clock_shift(self, capsys):
        code, out, _ = run(capsys, "nearest", "--n", "8", "--restarts", "2",
                           "--max-iters", "25")
        assert code == 0
        assert "sound              : True" in out
        assert "index              : 1" in out

    def test_commuting_probe(self, capsys):
        code, out, _ = run(capsys, "nearest", "--n", "6", "--commuting-test",
                           "--restarts", "1", "--max-iters", "60")
        assert code == 0
        assert "heuristic distance" in out


class TestUsage:
    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "sweep", "--frobnicate")
        assert code == 64

    def test_unknown_command(self, capsys):
        code, _, _ = run(capsys, "transmogrify")
        assert code == 64

    def test_missing_required(self, capsys):
        code, _, _ = run(capsys, "pairing")
        assert code == 64
