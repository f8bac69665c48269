import json

import pytest

from zetadyn.cli import FIXTURES, main

ZX3_CONFIG = {
    "group": "z_x_cyclic:3",
    "matrices": {
        "a": [[1, 2, 1, 0], [-2, 3, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
        "b": [[0, -1, 0, 0], [1, -1, 0, 0], [0, 0, 0, -1], [0, 0, 1, -1]],
    },
}

DINF_CONFIG = {
    "group": "dinf",
    "matrices": {"a": [[-2, 3], [1, -2]], "b": [[7, -12], [4, -7]]},
}


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestDelta:
    def test_planar_group(self, capsys):
        rc, out, _ = run(capsys, "delta", "--group", "pm", "--terms", "6")
        assert rc == 0
        assert "b(1..6) = 1, 3, 1, 3, 1, 3" in out

    def test_integer_lattice(self, capsys):
        rc, out, _ = run(capsys, "delta", "--group", "z", "--terms", "4")
        assert rc == 0
        assert "b(1..4) = 1, 0, 0, 0" in out

    def test_noninteger_flagged(self, capsys):
        rc, out, _ = run(capsys, "delta", "--group", "p2", "--terms", "4")
        assert rc == 0
        assert "no (first failure at n=3, b=11/3)" in out

    def test_unknown_group_lists_catalog(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "delta", "--group", "nope", "--terms", "4")
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert "available groups" in err

    def test_json_round_trip(self, capsys):
        rc, out, _ = run(capsys, "delta", "--group", "pm", "--terms", "4", "--format", "json")
        assert rc == 0
        assert json.dumps(json.loads(out), sort_keys=True) + "\n" == out

    def test_terms_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("ZETADYN_MAX_TERMS", "10")
        with pytest.raises(SystemExit) as exc:
            run(capsys, "delta", "--group", "pm", "--terms", "11")
        assert exc.value.code == 2


class TestZeta:
    def test_all_methods_report_pass(self, capsys):
        rc, out, _ = run(
            capsys, "zeta", "--action", "full-shift", "--group", "z_x_cyclic:3",
            "--alphabet", "2", "--terms", "9", "--method", "all",
        )
        assert rc == 0
        assert out.startswith("PASS: 4 methods agree")
        assert "1, 2, 4, 16, 32, 64, 192, 384, 768, 2048" in out

    def test_toral_from_config(self, capsys, tmp_path):
        cfg = tmp_path / "zx3.json"
        cfg.write_text(json.dumps(ZX3_CONFIG))
        rc, out, _ = run(
            capsys, "zeta", "--action", "toral", "--config", str(cfg),
            "--terms", "6", "--method", "def",
        )
        assert rc == 0
        assert "1, 1, 1, 10, 10, 10, 80" in out

    def test_trivial_dihedral_series(self, capsys):
        rc, out, _ = run(
            capsys, "zeta", "--action", "full-shift", "--group", "dinf",
            "--alphabet", "1", "--terms", "7",
        )
        assert rc == 0
        assert "1, 1, 2, 8/3, 25/6, 169/30, 361/45, 3364/315" in out

    def test_json_output_round_trips(self, capsys):
        rc, out, _ = run(
            capsys, "zeta", "--action", "full-shift", "--group", "z",
            "--alphabet", "2", "--terms", "4", "--format", "json",
        )
        assert rc == 0
        line = out.strip()
        assert json.dumps(json.loads(line), sort_keys=True) == line

    def test_definition_needs_enumeration(self, capsys):
        rc, out, err = run(
            capsys, "zeta", "--action", "full-shift", "--group", "heisenberg",
            "--alphabet", "2", "--terms", "4", "--method", "def",
        )
        assert rc == 2

    def test_full_shift_method_on_other_action(self, capsys):
        rc, out, err = run(
            capsys, "zeta", "--action", "pm-projected", "--alphabet", "2",
            "--terms", "4", "--method", "full-shift",
        )
        assert rc == 2
        assert "full shifts" in err


class TestOrbits:
    def test_binary_shift_counts(self, capsys):
        rc, out, _ = run(
            capsys, "orbits", "--action", "full-shift", "--group", "z",
            "--alphabet", "2", "--max-size", "4",
        )
        assert rc == 0
        for line in (
            "orbits of size 1: 2",
            "orbits of size 2: 1",
            "orbits of size 3: 2",
            "orbits of size 4: 3",
            "pi(4) = 8",
        ):
            assert line in out

    def test_csv_format(self, capsys):
        rc, out, _ = run(
            capsys, "orbits", "--action", "full-shift", "--group", "z",
            "--alphabet", "2", "--max-size", "3", "--format", "csv",
        )
        assert rc == 0
        assert out.splitlines()[0] == "size,orbits"
        assert "N,pi,main_term,ratio" in out

    def test_jobs_flag(self, capsys):
        rc, out, _ = run(
            capsys, "orbits", "--action", "pm-projected", "--alphabet", "2",
            "--max-size", "4", "--jobs", "2", "--format", "json",
        )
        assert rc == 0
        assert json.loads(out)["pi"] >= 1


class TestFixTableAndTorusOrbits:
    def test_fix_table_csv(self, capsys):
        rc, out, _ = run(
            capsys, "fix-table", "--action", "full-shift", "--group", "z",
            "--alphabet", "2", "--max-index", "3",
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "handle,index,fix"
        assert lines[1].endswith(",1,2")

    def test_torus_orbit_csv(self, capsys, tmp_path):
        cfg = tmp_path / "dinf.json"
        cfg.write_text(json.dumps(DINF_CONFIG))
        rc, out, _ = run(
            capsys, "torus-orbits", "--action", "toral", "--config", str(cfg),
            "--denominator", "6",
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "orbit,point,stabilizer,block"
        assert any('"0/6,0/6"' in line for line in lines)


class TestVerify:
    def test_single_fixture(self, capsys):
        rc, out, _ = run(capsys, "verify", "--suite", "paper-tables", "--only", "nonintegral")
        assert rc == 0
        assert out.startswith("PASS nonintegral")

    def test_unknown_fixture(self, capsys):
        rc, out, err = run(capsys, "verify", "--only", "bogus")
        assert rc == 2

    def test_corrupted_fixture_fails_with_id(self, capsys, monkeypatch):
        monkeypatch.setitem(FIXTURES, "nonintegral", lambda seed: (False, "forced"))
        rc, out, _ = run(capsys, "verify", "--only", "nonintegral")
        assert rc == 1
        assert "FAIL nonintegral" in out

    def test_known_defect_is_expected_failure(self, capsys):
        rc, out, _ = run(capsys, "verify", "--only", "dinf-fix-completeness")
        assert rc == 0
        assert "XFAIL dinf-fix-completeness" in out
        assert "60 fixed points" in out
