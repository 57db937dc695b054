import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from tmnlcs import serialization
from tmnlcs.cli import main
from tmnlcs.constructors import StateSpec, build_by_recursion
from tmnlcs.errors import SchemaError
from tmnlcs.verify import fidelity


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def load(text):
    return serialization.load_state(text)


class TestConstruct:
    def test_pair_ratio(self, capsys):
        code, out, _ = run(["construct", "--kind", "pair", "--eigenvalue", "0.5,0", "--q", "1"], capsys)
        assert code == 0
        s = load(out)
        assert s.amplitudes[1] / s.amplitudes[0] == pytest.approx(0.3535533905932738, abs=1e-15)
        assert json.loads(out)["format_version"] == 1

    def test_zero_eigenvalue(self, capsys):
        code, out, _ = run(["construct", "--kind", "pair", "--eigenvalue", "0,0", "--q", "3"], capsys)
        s = load(out)
        assert code == 0 and s.charge_q == 3
        assert s.amplitudes[0] == 1 and not np.any(s.amplitudes[1:])

    def test_perelomov(self, capsys):
        code, out, _ = run(["construct", "--kind", "perelomov", "--eigenvalue", "0.5,0", "--q", "0"], capsys)
        assert load(out).amplitudes[0].real == pytest.approx(0.8868188839700739, abs=1e-12)

    @pytest.mark.parametrize("method", ["recursion", "exponential", "closed"])
    def test_methods_agree(self, capsys, method):
        code, out, _ = run(["construct", "--kind", "parity_perelomov", "--eigenvalue", "0.6,0.3", "--q", "2",
                            "--method", method], capsys)
        ref = build_by_recursion(StateSpec("parity_perelomov", 0.6 + 0.3j, 2))
        assert fidelity(load(out), ref) == pytest.approx(1, abs=1e-12)

    def test_custom_function(self, capsys):
        code, out, _ = run(["construct", "--kind", "custom", "--function", "powneg1(nb)",
                            "--eigenvalue", "1,0"], capsys)
        ref = build_by_recursion(StateSpec("parity_pair", 1.0, 0))
        assert fidelity(load(out), ref) == pytest.approx(1, abs=1e-14)

    def test_spec_file(self, capsys, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"kind": "pair", "eigenvalue": [1.0, 0.0], "charge_q": 0,
                                    "truncation": {"mode": "fixed", "param": 20}}))
        code, out, _ = run(["construct", "--spec", str(path)], capsys)
        assert code == 0 and load(out).truncation_n == 20

    def test_function_zero_exits_2(self, capsys):
        code, _, err = run(["construct", "--kind", "custom", "--function", "nb-3", "--eigenvalue", "1,0"], capsys)
        assert code == 2
        info = json.loads(err)
        assert info["error"] == "FunctionZeroError" and "n=3" in info["message"]

    def test_unconverged(self, capsys, monkeypatch):
        monkeypatch.setenv("TMNLCS_MAX_TRUNC", "8")
        argv = ["construct", "--kind", "perelomov", "--eigenvalue", "2,0"]
        code, _, err = run(argv, capsys)
        assert code == 2 and "ConvergenceError" in err
        code, out, err = run(argv + ["--allow-unconverged"], capsys)
        assert code == 0 and "not converged" in err
        assert json.loads(out)["converged"] is False

    def test_unknown_flag(self, capsys):
        code, _, err = run(["construct", "--kind", "pair", "--eigenvalue", "1,0", "--frobnicate"], capsys)
        assert code == 3 and "UsageError" in err

    def test_bad_complex(self, capsys):
        code, _, _ = run(["construct", "--kind", "pair", "--eigenvalue", "1,2,3"], capsys)
        assert code == 3

    def test_missing_input(self, capsys, tmp_path):
        code, _, err = run(["stats", str(tmp_path / "nope.json")], capsys)
        assert code == 3 and "SchemaError" in err


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    assert main(["construct", "--kind", "pair", "--eigenvalue", "1.2,0.4", "--q", "2", "-o", str(path)]) == 0
    return path


class TestTransform:
    def test_sub_one_one(self, capsys, pair_file):
        code, out, _ = run(["transform", str(pair_file), "--sub", "1", "1"], capsys)
        assert code == 0
        result = load(out)
        assert fidelity(result, load(pair_file.read_text())) == pytest.approx(1, abs=1e-12)
        assert result.provenance[-1]["operation"] == "photon_subtract"

    def test_add_uses_inferred_function(self, capsys, pair_file):
        code, out, _ = run(["transform", str(pair_file), "--add", "1", "0"], capsys)
        record = load(out).provenance[-1]
        assert record["induced_function_label"].startswith("unity")
        assert record["output_charge"] == 3

    def test_chained_transform_needs_function(self, capsys, pair_file, tmp_path):
        added = tmp_path / "added.json"
        assert main(["transform", str(pair_file), "--add", "1", "0", "-o", str(added)]) == 0
        capsys.readouterr()
        code, _, err = run(["transform", str(added), "--sub", "1", "0"], capsys)
        assert code == 3 and "--function" in err
        code, _, _ = run(["transform", str(added), "--sub", "1", "0", "--function", "unity"], capsys)
        assert code == 0

    def test_kerr(self, capsys, pair_file):
        code, out, _ = run(["transform", str(pair_file), "--kerr", "1.5707963267948966"], capsys)
        ref = build_by_recursion(StateSpec("parity_pair", 1.2 + 0.4j, 2))
        assert fidelity(load(out), ref) == pytest.approx(1, abs=1e-12)

    def test_requires_exactly_one_operation(self, capsys, pair_file):
        code, _, _ = run(["transform", str(pair_file), "--add", "1", "0", "--kerr", "1"], capsys)
        assert code == 3


class TestEvolveStats:
    def test_evolve_pi_identity(self, capsys, pair_file):
        code, out, _ = run(["evolve", str(pair_file), "--kerr", "3.141592653589793"], capsys)
        before = load(pair_file.read_text())
        np.testing.assert_allclose(load(out).amplitudes, before.amplitudes, atol=1e-14, rtol=0)

    def test_stats_bottom_rung(self, capsys, tmp_path):
        path = tmp_path / "ket.json"
        main(["construct", "--kind", "pair", "--eigenvalue", "0,0", "--q", "2", "-o", str(path)])
        code, out, _ = run(["stats", str(path)], capsys)
        stats = json.loads(out)
        assert code == 0
        assert stats["mean_na"] == 2 and stats["mean_nb"] == 0
        assert stats["mandel_q_b"] is None


class TestVerify:
    def test_spec(self, capsys, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps([{"kind": "pair", "eigenvalue": [1.0, 0.0], "charge_q": 1},
                                    {"kind": "perelomov", "eigenvalue": [0.5, 0.5], "charge_q": 0}]))
        code, out, _ = run(["verify", "--spec", str(path)], capsys)
        report = json.loads(out)
        assert code == 0 and report["overall_passed"]
        assert set(report["checks"][0]) == {"name", "value", "tolerance", "passed"}

    def test_failing_spec(self, capsys, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"kind": "custom", "function": "nb-1", "eigenvalue": [1, 0], "charge_q": 0}))
        code, out, _ = run(["verify", "--spec", str(path)], capsys)
        assert code == 1 and not json.loads(out)["overall_passed"]


class TestSweep:
    def test_kerr_endpoints(self, capsys):
        code, out, _ = run(["sweep", "--kind", "pair", "--q", "0", "--abs-grid", "1",
                            "--kerr-grid", "3.141592653589793,0,1.5707963267948966"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 3
        assert [float(r["gamma_t"]) for r in rows] == [0, math.pi / 2, math.pi]
        overlap = fidelity(build_by_recursion(StateSpec("pair", 1.0, 0)),
                           build_by_recursion(StateSpec("parity_pair", 1.0, 0)))
        fids = [float(r["fidelity_vs_parity"]) for r in rows]
        assert fids[0] == pytest.approx(overlap, abs=1e-12)
        assert fids[1] == pytest.approx(1, abs=1e-12)
        assert fids[2] == pytest.approx(overlap, abs=1e-12)

    def test_empty_grid(self, capsys):
        code, out, _ = run(["sweep", "--kind", "pair", "--kerr-grid", ""], capsys)
        assert code == 0
        assert out.strip().split("\n") == [out.strip()]
        assert out.startswith("kind,q,abs")

    def test_single_point(self, capsys):
        code, out, _ = run(["sweep", "--kind", "perelomov", "--abs-grid", "0.5"], capsys)
        assert len(out.strip().split("\n")) == 2

    def test_lexicographic_order(self, capsys):
        code, out, _ = run(["sweep", "--kind", "parity_pair", "--abs-grid", "2,1", "--arg-grid", "0.5,0",
                            "--kerr-grid", "1,0"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        keys = [(float(r["abs"]), float(r["arg"]), float(r["gamma_t"])) for r in rows]
        assert keys == sorted(keys) and len(keys) == 8
        assert rows[0]["fidelity_vs_parity"] == ""


def test_round_trip_is_bit_exact(tmp_path, capsys):
    path = tmp_path / "s.json"
    main(["construct", "--kind", "parity_perelomov", "--eigenvalue", "0.9,-0.4", "--q", "3", "-o", str(path)])
    text = path.read_text()
    state = load(text)
    ref = build_by_recursion(StateSpec("parity_perelomov", 0.9 - 0.4j, 3))
    np.testing.assert_array_equal(state.amplitudes, ref.amplitudes)
    assert serialization.dump_state(state) == text


def test_output_is_deterministic(capsys):
    outs = [run(["construct", "--kind", "perelomov", "--eigenvalue", "1.3,0.2", "--q", "4"], capsys)[1]
            for _ in range(2)]
    assert outs[0] == outs[1]


class TestSchema:
    def test_mismatched_truncation(self):
        d = serialization.state_to_dict(build_by_recursion(StateSpec("pair", 1.0, 0)))
        d["truncation_n"] += 1
        with pytest.raises(SchemaError):
            serialization.state_from_dict(d)

    @pytest.mark.parametrize("patch", [
        {"charge_q": -1}, {"amplitudes": []}, {"amplitudes": [[1, 0, 0]]}, {"format_version": 2},
        {"converged": "yes"},
    ])
    def test_invalid(self, patch):
        d = {"format_version": 1, "charge_q": 0, "truncation_n": 0, "amplitudes": [[1.0, 0.0]],
             "converged": True, "provenance": []}
        d.update(patch)
        with pytest.raises(SchemaError):
            serialization.state_from_dict(d)

    def test_refuses_nan(self):
        with pytest.raises(ValueError):
            serialization.format_float(math.nan)

    def test_float_format(self):
        assert serialization.format_float(0.1) == "1.0000000000000001e-01"
        assert float(serialization.format_float(math.pi)) == math.pi


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tmnlcs.cli", "construct", "--kind", "pair",
                           "--eigenvalue", "0.2,0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["charge_q"] == 0
