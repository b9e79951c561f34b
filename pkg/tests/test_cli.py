"""CLI contract: exit codes, stream discipline, determinism."""

import json
from pathlib import Path

from peerbargain.cli import main
from peerbargain.dataset import builtin_us_dataset, dataset_to_jsonable

SPEC_DIR = Path(__file__).resolve().parent.parent / "specs"


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRun:
    def test_run_json(self, capsys):
        code, out, err = invoke(
            capsys, "run", "--dataset", "us2013",
            "--spec", str(SPEC_DIR / "comcast-google-video.json"), "--format", "json",
        )
        assert code == 0
        result = json.loads(out)
        assert "payment_usd_per_month" in result["settlement"]

    def test_stdout_byte_identical(self, capsys):
        args = ("run", "--spec", str(SPEC_DIR / "comcast-google-video.json"))
        _, first, _ = invoke(capsys, *args)
        _, second, _ = invoke(capsys, *args)
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "result.json"
        code, out, _ = invoke(
            capsys, "run", "--spec", str(SPEC_DIR / "comcast-google-video.json"),
            "--out", str(out_path),
        )
        assert code == 0
        assert out == ""
        assert "payment_usd_per_month" in out_path.read_text()

    def test_missing_spec_file(self, capsys):
        code, out, err = invoke(capsys, "run", "--spec", "no-such.json")
        assert code == 2
        assert out == ""
        assert "validation" in err

    def test_invalid_spec_semantics(self, capsys, tmp_path):
        spec = json.loads((SPEC_DIR / "comcast-google-video.json").read_text())
        spec["overrides"]["beta"] = 2.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(spec))
        code, out, err = invoke(capsys, "run", "--spec", str(path))
        assert code == 2
        assert "spec.overrides.beta" in err


class TestValidateDataset:
    def test_valid_builtin(self, capsys):
        code, out, err = invoke(capsys, "validate-dataset", "--dataset", "us2013")
        assert code == 0
        assert json.loads(out)["id"] == "us2013"

    def test_broken_dataset(self, capsys, tmp_path):
        obj = dataset_to_jsonable(builtin_us_dataset())
        obj["isps"][0]["loyalty"] = 7
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(obj))
        code, out, err = invoke(capsys, "validate-dataset", "--dataset", str(path))
        assert code == 2
        assert "loyalty" in err
        assert out == ""


class TestTables:
    def test_price_table_markdown_columns(self, capsys):
        code, out, _ = invoke(
            capsys, "price-table", "--dataset", "us2013",
            "--spec", str(SPEC_DIR / "comcast-google-price-table.json"),
            "--format", "markdown",
        )
        assert code == 0
        header = out.split("\n")[0]
        assert header.index("user_centric_video") < header.index("osn") < header.index("search")

    def test_sweep_csv(self, capsys):
        code, out, _ = invoke(
            capsys, "sweep", "--spec", str(SPEC_DIR / "comcast-google-search-sweep.json"),
            "--format", "csv",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 7

    def test_timing(self, capsys):
        code, out, _ = invoke(
            capsys, "timing", "--spec", str(SPEC_DIR / "comcast-google-timing.json"),
        )
        assert code == 0
        assert len(json.loads(out)["orderings"]) == 2

    def test_compare(self, capsys):
        code, out, _ = invoke(
            capsys, "compare", "--spec", str(SPEC_DIR / "google-pair-comparison.json"),
        )
        assert code == 0
        assert json.loads(out)["isps"] == ["comcast", "cablevision"]


class TestUsage:
    def test_no_command(self, capsys):
        code, out, err = invoke(capsys)
        assert code == 1

    def test_unknown_command(self, capsys):
        code, _, _ = invoke(capsys, "frobnicate")
        assert code == 1

    def test_json_always_valid_on_success(self, capsys):
        for name in ("comcast-google-video.json", "comcast-google-search-sweep.json"):
            cmd = "sweep" if "sweep" in name else "run"
            code, out, _ = invoke(capsys, cmd, "--spec", str(SPEC_DIR / name))
            assert code == 0
            json.loads(out)
