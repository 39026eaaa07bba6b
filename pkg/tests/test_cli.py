"""The command-line front end, driven through main() with shipped configs."""
import json
import os

import pytest

from wordtensor.cli import main

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg(name: str) -> str:
    return os.path.join(CONFIGS, name)


class TestDispatch:
    def test_no_command_is_an_error(self, capsys):
        assert main([]) == 1
        err = capsys.readouterr().err
        assert "usage" in err and "subcommand" in err

    def test_config_command_mismatch(self, capsys):
        rc = main(["closure", "--config", cfg("theorem21-size2.toml")])
        assert rc == 1
        assert "theorem21" in capsys.readouterr().err

    def test_config_error_reported(self, capsys, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text('[experiment]\nkind = "closure"\n[carriers]\nX = 0\n')
        assert main(["closure", "--config", str(bad)]) == 1
        assert "error:" in capsys.readouterr().err


class TestCheckOp:
    def test_minimal_config(self, capsys):
        rc = main(["check-op", "--config", cfg("check-op-minimal.toml"),
                   "--format", "json"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["schema"] == 1
        (row,) = out["report"]["operations"]
        assert row["associative"] and row["commutative"] and row["total"]

    def test_named_op_flag(self, capsys):
        rc = main(["check-op", "--config", cfg("check-op-minimal.toml"),
                   "--op", "add", "--format", "json"])
        assert rc == 0


class TestEquiv:
    def test_affine_example_proven(self, capsys):
        rc = main(["equiv", "--config", cfg("equiv-affine.toml"),
                   "--format", "json", "1 γ 0", "2"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["report"]["verdict"] == "Proven"
        assert out["report"]["chain"] == ["0γ1", "2"]

    def test_words_from_config_params(self, capsys):
        rc = main(["equiv", "--config", cfg("equiv-affine.toml"),
                   "--format", "json"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["report"]["verdict"] == "Proven"


class TestTheoremSweep:
    def test_size2_flags_and_rows(self, capsys):
        rc = main(["theorem21", "--config", cfg("theorem21-size2.toml"),
                   "--format", "json"])
        assert rc == 2  # the projection counterexamples are discrepancies
        out = json.loads(capsys.readouterr().out)
        assert out["report"]["n_ops"] == 16
        assert len(out["report"]["rows"]) == 16
        assert out["report"]["flagged"] == [3, 5]
        assert [f["op_index"] for f in out["flags"]] == [3, 5]
        assert all(f["kind"] == "injectivity-claim-mismatch"
                   for f in out["flags"])

    def test_size_flag_without_config(self, capsys):
        rc = main(["theorem21", "--size", "2", "--cap-L", "4", "--cap-k", "2",
                   "--format", "json"])
        assert rc == 2
        out = json.loads(capsys.readouterr().out)
        assert out["report"]["n_associative"] == 8


class TestOutputContract:
    def test_json_is_sorted_and_untimed(self, capsys):
        rc = main(["tensor", "--config", cfg("tensor-mod2.toml"),
                   "--format", "json"])
        assert rc == 0
        raw = capsys.readouterr().out
        out = json.loads(raw)
        assert list(out) == sorted(out)
        assert out["schema"] == 1
        flat = raw.lower()
        assert "elapsed" not in flat and "timing" not in flat

    def test_text_includes_elapsed(self, capsys):
        rc = main(["tensor", "--config", cfg("tensor-mod2.toml")])
        assert rc == 0
        text = capsys.readouterr().out
        assert "elapsed:" in text
        assert "experiment: tensor" in text

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        rc = main(["tensor", "--config", cfg("tensor-mod2.toml"),
                   "--format", "json", "--out", str(target)])
        assert rc == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["experiment"] == "tensor"

    def test_double_run_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main(["iota", "--config", cfg("iota-wide.toml"),
                         "--format", "json", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestTensorBody:
    def test_census_and_table(self, capsys):
        rc = main(["tensor", "--config", cfg("tensor-mod2.toml"),
                   "--format", "json"])
        assert rc == 0
        body = json.loads(capsys.readouterr().out)["report"]
        assert body["n_classes"] == 2
        assert body["op_table"] == [[0, 1], [1, 0]]
        assert body["census"]["n_words"] > 0


class TestEntangled:
    def test_demo_flags_exit_two(self, capsys):
        rc = main(["entangled", "--config", cfg("entangled-mod2.toml"),
                   "--format", "json"])
        assert rc == 2
        out = json.loads(capsys.readouterr().out)
        kinds = [f["kind"] for f in out["flags"]]
        assert "bell-word-collapses" in kinds
        assert "embedding-not-injective" in kinds


class TestAffine:
    def test_flags_from_coefficient_probe(self, capsys):
        rc = main(["affine", "--config", cfg("affine.toml"),
                   "--format", "json"])
        assert rc == 2
        out = json.loads(capsys.readouterr().out)
        assert {f["kind"] for f in out["flags"]} == {"fold-coefficient-mismatch"}
        assert out["report"]["n_identity_words"] == 65

    def test_degenerate_coefficients_rejected(self, capsys):
        rc = main(["affine", "--a", "1", "--b", "1"])
        assert rc == 1
        assert "error" in capsys.readouterr().err


class TestClosureAndRefine:
    def test_closure_random_suite(self, capsys):
        rc = main(["closure", "--config", cfg("closure-random.toml"),
                   "--format", "json"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["report"]["n_instances"] == 20
        assert out["report"]["all_stable"] is True

    def test_refine_reproves_everything(self, capsys):
        rc = main(["refine", "--config", cfg("refine.toml"),
                   "--format", "json"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["report"]["proven_direct"] == 200
