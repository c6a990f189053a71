import json

import numpy as np
import pytest

from tourlim import GeneralizedTournament, StepKernel, step_kernel_from_tournament
from tourlim.cli import main


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def half3(tmp_path):
    return write_json(tmp_path, "half3.json", {"n": 3, "blocks": [[0.5] * 3] * 3})


@pytest.fixture
def transitive9(tmp_path):
    w = step_kernel_from_tournament(
        GeneralizedTournament(np.triu(np.ones((9, 9)), 1))
    )
    return write_json(tmp_path, "t9.json", w.to_json_dict())


class TestExitCodes:
    def test_invalid_sequence_exits_1_with_report(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [0, 0, 3], "kind": "integer"})
        code = main(["check-score-seq", "--input", path])
        out = json.loads(capsys.readouterr().out)
        assert code == 1
        assert out["valid"] is False
        assert out["witness"]["k"] == 2

    def test_valid_sequence_exits_0(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [1, 1, 1], "kind": "integer"})
        assert main(["check-score-seq", "--input", path]) == 0
        assert json.loads(capsys.readouterr().out)["valid"] is True

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["check-score-seq", "--input", str(path)]) == 2
        assert "malformed JSON" in capsys.readouterr().err

    def test_missing_field_named_in_error(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"kind": "integer"})
        assert main(["check-score-seq", "--input", path]) == 2
        assert "values" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self, half3):
        assert main(["perturb", "--input", half3, "--bogus"]) == 2

    def test_unknown_command_exits_2(self, half3):
        assert main(["frobnicate", "--input", half3]) == 2

    def test_realize_on_invalid_sequence_exits_1_and_reports(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [0, 0, 3], "kind": "integer"})
        code = main(["realize", "--input", path])
        out = json.loads(capsys.readouterr().out)
        assert code == 1
        assert out["report"]["witness"]["check"] == "landau-prefix"

    def test_strict_requires_seed(self, half3, capsys):
        assert main(["sample", "--input", half3, "--size", "5", "--strict"]) == 2
        assert main(["sample", "--input", half3, "--size", "5", "--strict",
                     "--seed", "3"]) == 0
        capsys.readouterr()


class TestCommands:
    def test_realize_round_trip(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [1, 1, 1], "kind": "integer"})
        assert main(["realize", "--input", path]) == 0
        g = GeneralizedTournament.from_json_dict(json.loads(capsys.readouterr().out))
        assert sorted(g.alpha.sum(axis=1).tolist()) == [1.0, 1.0, 1.0]

    def test_realize_selfconverse(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [1, 1, 2, 2], "kind": "integer"})
        assert main(["realize-selfconverse", "--input", path]) == 0
        g = GeneralizedTournament.from_json_dict(json.loads(capsys.readouterr().out))
        rho = np.arange(4)[::-1]
        off = ~np.eye(4, dtype=bool)
        assert np.array_equal(
            (g.alpha + g.alpha[np.ix_(rho, rho)])[off], np.ones((4, 4))[off]
        )

    def test_eplett_flag(self, tmp_path, capsys):
        path = write_json(tmp_path, "seq.json", {"values": [0, 2, 2, 2], "kind": "integer"})
        assert main(["check-score-seq", "--input", path]) == 0
        assert main(["check-score-seq", "--input", path, "--eplett"]) == 1
        capsys.readouterr()

    def test_check_score_fn_conditions(self, tmp_path, capsys):
        path = write_json(tmp_path, "fn.json", {"cells": [0.25, 0.75]})
        assert main(["check-score-fn", "--input", path]) == 0
        assert main(["check-score-fn", "--input", path, "--condition", "II"]) == 0
        bad = write_json(tmp_path, "bad.json", {"cells": [0.3, 0.9]})
        assert main(["check-score-fn", "--input", bad, "--condition", "II"]) == 1
        capsys.readouterr()

    def test_discretize_and_kernel_from_fn(self, tmp_path, capsys):
        path = write_json(tmp_path, "fn.json", {"cells": [1 / 6, 3 / 6, 5 / 6]})
        assert main(["discretize", "--input", path, "--blocks", "3"]) == 0
        seq = json.loads(capsys.readouterr().out)
        assert seq["values"] == [0.0, 1.0, 2.0]
        assert main(["kernel-from-fn", "--input", path, "--blocks", "3"]) == 0
        kernel = StepKernel.from_json_dict(json.loads(capsys.readouterr().out))
        assert kernel.n == 3

    def test_density_on_transitive_kernel(self, transitive9, capsys):
        assert main(["density", "--pattern", "C3", "--input", transitive9]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["density"] == pytest.approx(1 / (8 * 81), abs=1e-15)

    def test_density_on_finite_tournament(self, tmp_path, capsys):
        g = {"n": 3, "alpha": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]}
        path = write_json(tmp_path, "g.json", g)
        assert main(["density", "--pattern", "C3", "--input", path,
                     "--mode", "hom"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["density"] == pytest.approx(1 / 9, abs=1e-15)

    def test_perturb_certificate(self, half3, capsys):
        assert main(["perturb", "--input", half3]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"] == "certificate"
        assert out["c4_perturbed"] - out["c4_base"] == pytest.approx(2 / 729, abs=1e-12)
        assert out["score_max_diff"] == 0.0

    def test_perturb_transitive_like(self, transitive9, capsys):
        assert main(["perturb", "--input", transitive9]) == 0
        assert json.loads(capsys.readouterr().out) == {"result": "transitive-like"}

    def test_degree_dist_csv(self, transitive9, capsys):
        assert main(["degree-dist", "--input", transitive9]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "position,weight"
        assert len(lines) == 10
        assert main(["degree-dist", "--input", transitive9, "--format", "json"]) == 2

    def test_sample_deterministic_bytes(self, half3, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        args = ["sample", "--input", half3, "--size", "12", "--seed", "7"]
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        g = GeneralizedTournament.from_json_dict(json.loads(out1.read_text()))
        assert g.is_tournament

    def test_sample_selfconverse(self, half3, capsys):
        assert main(["sample-selfconverse", "--input", half3, "--size", "6",
                     "--seed", "2", "--sigma", "identity"]) == 0
        g = GeneralizedTournament.from_json_dict(json.loads(capsys.readouterr().out))
        assert g.n == 12

    def test_converge_csv(self, half3, capsys):
        assert main(["converge", "--input", half3, "--pattern", "C3",
                     "--pattern", "S0,1", "--sizes", "20,40", "--reps", "3",
                     "--seed", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "pattern,n,mean,stderr,exact"
        assert len(lines) == 1 + 2 * 2 + 2  # patterns x sizes + degree_w1 rows

    def test_fingerprint(self, half3, capsys):
        assert main(["fingerprint", "--input", half3, "--order", "3"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["K"] == 3
        assert len(out["entries"]) == 4

    def test_moments_both_directions(self, tmp_path, capsys):
        fn = write_json(tmp_path, "fn.json", {"cells": [0.5]})
        assert main(["moments", "--input", fn, "--order", "3"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["a"] == [1.0, 0.5, 0.25, 0.125]
        mom = write_json(tmp_path, "mom.json", {"a": [1, 0.5, 0.5, 0.1]})
        assert main(["moments", "--input", mom, "--order", "3"]) == 1
        rep = json.loads(capsys.readouterr().out)
        assert rep["witness"]["value"] == pytest.approx(-0.4)

    def test_emitted_json_reparses_equal(self, half3, tmp_path, capsys):
        assert main(["sample", "--input", half3, "--size", "9", "--seed", "0"]) == 0
        text = capsys.readouterr().out
        g = GeneralizedTournament.from_json_dict(json.loads(text))
        assert json.dumps(g.to_json_dict(), indent=2, sort_keys=True) + "\n" == text
