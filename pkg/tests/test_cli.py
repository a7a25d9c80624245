import json

import numpy as np
import pytest
from click.testing import CliRunner

from maxproto.cli import main
from maxproto.metrics import FeatureSet, save_features
from maxproto.sampledata import write_sample_kb_source


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sample_dir(tmp_path, runner):
    d = tmp_path / "sample"
    result = runner.invoke(main, ["kb", "sample", "--dir", str(d)])
    assert result.exit_code == 0, result.output
    return d


@pytest.fixture
def stores(tmp_path, sample_dir, runner):
    ui = tmp_path / "ui_kb.jsonl"
    icons = tmp_path / "icon_kb.jsonl"
    r1 = runner.invoke(main, [
        "kb", "build", "--source", str(sample_dir / "records"),
        "--captions", str(sample_dir / "captions.json"),
        "--out", str(ui), "--embed",
    ])
    assert r1.exit_code == 0, r1.output
    r2 = runner.invoke(main, [
        "kb", "build-icons", "--source", str(sample_dir / "icons.json"),
        "--out", str(icons), "--embed",
    ])
    assert r2.exit_code == 0, r2.output
    return ui, icons


class TestKbBuild:
    def test_report_printed(self, tmp_path, runner):
        records, _ = write_sample_kb_source(tmp_path / "src")
        out = tmp_path / "ui.jsonl"
        result = runner.invoke(main, ["kb", "build", "--source", str(records), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "accepted=5" in result.output
        assert "skipped=0" in result.output
        assert out.exists()

    def test_corrupt_record_skipped_exit_zero(self, tmp_path, runner):
        records, _ = write_sample_kb_source(tmp_path / "src")
        (records / "broken.json").write_text("{nope")
        out = tmp_path / "ui.jsonl"
        result = runner.invoke(main, ["kb", "build", "--source", str(records), "--out", str(out)])
        assert result.exit_code == 0
        assert "skipped=1" in result.output

    def test_empty_source_exit_1(self, tmp_path, runner):
        src = tmp_path / "empty"
        src.mkdir()
        result = runner.invoke(main, ["kb", "build", "--source", str(src), "--out", str(tmp_path / "o")])
        assert result.exit_code == 1

    def test_embed_deterministic_hash(self, tmp_path, runner):
        records, _ = write_sample_kb_source(tmp_path / "src")
        hashes = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            result = runner.invoke(main, ["kb", "build", "--source", str(records), "--out", str(out), "--embed"])
            assert result.exit_code == 0, result.output
            line = next(l for l in result.output.splitlines() if l.startswith("store hash:"))
            hashes.append(line)
        assert hashes[0] == hashes[1]
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


FIVE_TYPE_WIREFRAME = {
    "canvas_w": 1000,
    "canvas_h": 1000,
    "components": [
        {"id": "t", "type": "Text", "x": 0, "y": 0, "w": 500, "h": 100, "hint": "title"},
        {"id": "b", "type": "TextButton", "x": 0, "y": 100, "w": 500, "h": 100, "hint": "login"},
        {"id": "p", "type": "Image", "x": 0, "y": 200, "w": 500, "h": 300},
        {"id": "i", "type": "Icon", "x": 500, "y": 0, "w": 100, "h": 100, "hint": "search"},
        {"id": "bar", "type": "Toolbar", "x": 0, "y": 900, "w": 1000, "h": 100},
    ],
}


class TestGenerate:
    def generate(self, runner, stores, tmp_path, out_name, wf=None, seed="11"):
        ui, icons = stores
        wf_path = tmp_path / "wf.json"
        wf_path.write_text(json.dumps(wf or FIVE_TYPE_WIREFRAME))
        out = tmp_path / out_name
        result = runner.invoke(main, [
            "generate", "--prompt", "A travel app.", "--wireframe", str(wf_path),
            "--kb", str(ui), "--icons", str(icons), "--out", str(out), "--seed", seed,
        ])
        return result, out

    def test_outputs_written(self, runner, stores, tmp_path):
        result, out = self.generate(runner, stores, tmp_path, "out1")
        assert result.exit_code == 0, result.output
        assert (out / "prototype.svg").exists()
        assert (out / "prototype.json").exists()
        assert (out / "provenance.log").exists()

    def test_five_groups_in_svg(self, runner, stores, tmp_path):
        import xml.etree.ElementTree as ET

        result, out = self.generate(runner, stores, tmp_path, "out2")
        assert result.exit_code == 0, result.output
        root = ET.fromstring((out / "prototype.svg").read_text())
        groups = root.findall("{http://www.w3.org/2000/svg}g")
        assert len(groups) == 5

    def test_byte_identical_across_runs(self, runner, stores, tmp_path):
        r1, out1 = self.generate(runner, stores, tmp_path, "outA")
        r2, out2 = self.generate(runner, stores, tmp_path, "outB")
        assert r1.exit_code == 0 and r2.exit_code == 0
        for name in ("prototype.svg", "prototype.json", "provenance.log"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_missing_wireframe_exit_1_names_path(self, runner, stores, tmp_path):
        ui, icons = stores
        result = runner.invoke(main, [
            "generate", "--prompt", "x", "--wireframe", str(tmp_path / "ghost.json"),
            "--kb", str(ui), "--icons", str(icons), "--out", str(tmp_path / "o"),
        ])
        assert result.exit_code == 1
        assert "ghost.json" in result.output


class TestEval:
    def test_identical_sets_fid_zero(self, runner, tmp_path):
        rng = np.random.default_rng(3)
        fs = FeatureSet(rng.normal(size=(12, 6)), source="pixel-stats")
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        save_features(fs, a)
        save_features(fs, b)
        report_path = tmp_path / "report.json"
        result = runner.invoke(main, ["eval", "--real", str(a), "--gen", str(b), "--out", str(report_path)])
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text())
        assert report["fid"] == pytest.approx(0.0, abs=1e-6)
        assert report["n_real"] == 12

    def test_one_dimensional_closed_form(self, runner, tmp_path):
        rng = np.random.default_rng(4)
        a_rows = rng.normal(0.0, 1.0, size=(400, 1))
        b_rows = rng.normal(3.0, 2.0, size=(400, 1))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        save_features(FeatureSet(a_rows, source="x"), a)
        save_features(FeatureSet(b_rows, source="x"), b)
        report_path = tmp_path / "r.json"
        result = runner.invoke(main, ["eval", "--real", str(a), "--gen", str(b), "--out", str(report_path)])
        assert result.exit_code == 0
        report = json.loads(report_path.read_text())
        mu_a, sd_a = a_rows.mean(), a_rows.std(ddof=1)
        mu_b, sd_b = b_rows.mean(), b_rows.std(ddof=1)
        expected = (mu_a - mu_b) ** 2 + (sd_a - sd_b) ** 2
        assert report["fid"] == pytest.approx(float(expected), abs=1e-9)

    def test_identical_rows_gd_zero(self, runner, tmp_path):
        fs = FeatureSet(np.tile([1.0, 2.0], (5, 1)), source="x")
        a = tmp_path / "a.txt"
        save_features(fs, a)
        report_path = tmp_path / "r.json"
        result = runner.invoke(main, ["eval", "--real", str(a), "--gen", str(a), "--out", str(report_path)])
        assert result.exit_code == 0
        assert json.loads(report_path.read_text())["gd"] == pytest.approx(0.0, abs=1e-12)

    def test_too_few_samples_exit_1(self, runner, tmp_path):
        fs = FeatureSet(np.array([[1.0, 2.0]]), source="x")
        a = tmp_path / "a.txt"
        save_features(fs, a)
        result = runner.invoke(main, ["eval", "--real", str(a), "--gen", str(a), "--out", str(tmp_path / "r")])
        assert result.exit_code == 1

    def test_image_directory_input(self, runner, tmp_path):
        from maxproto.raster import Raster

        for name, color in (("real", (0, 0, 0)), ("gen", (20, 20, 20))):
            d = tmp_path / name
            d.mkdir()
            for i in range(3):
                (d / f"{i}.png").write_bytes(Raster.flat(16, 16, (color[0] + i, *color[1:])).to_png_bytes())
        report_path = tmp_path / "r.json"
        result = runner.invoke(main, [
            "eval", "--real", str(tmp_path / "real"), "--gen", str(tmp_path / "gen"),
            "--out", str(report_path),
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(report_path.read_text())["extractor"] == "pixel-stats"


def test_serve_help(runner):
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    assert "--snapshot-dir" in result.output


def test_featurize(runner, tmp_path):
    from maxproto.raster import Raster

    img = tmp_path / "img.png"
    img.write_bytes(Raster.flat(32, 32, (1, 2, 3)).to_png_bytes())
    out = tmp_path / "f.txt"
    result = runner.invoke(main, ["featurize", "--features", str(out), str(img)])
    assert result.exit_code == 0, result.output
    assert "1 x 70" in result.output
