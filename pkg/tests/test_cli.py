"""Command-line workflow tests: every subcommand end to end on generated
data, including the byte-level match between offline scoring and the HTTP
endpoint."""

import io
import json

import pytest
from fastapi.testclient import TestClient

from revjudge.aesw import load_exported
from revjudge.cli import main
from revjudge.corpus import (
    BETTER,
    NOT_BETTER,
    aggregate_labels,
    parse_pairs,
    serialize_pairs,
)
from revjudge.service import create_app
from revjudge.synthdata import generate_aesw_sgml, generate_corpus

S1 = "The world has experienced various changes throughout its lifetime."
S2 = ("The world has been defined by its revolutions - the most recent one "
      "being technological.")


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Input files shared by the subcommand tests."""
    root = tmp_path_factory.mktemp("cli")
    entries = generate_corpus()
    with open(root / "annotations.jsonl", "w", encoding="utf-8") as fh:
        serialize_pairs(entries, fh)
    with open(root / "annotations_small.jsonl", "w", encoding="utf-8") as fh:
        serialize_pairs(entries[:300], fh)
    with open(root / "edits.sgml", "w", encoding="utf-8") as fh:
        fh.write(generate_aesw_sgml(n_sentences=600, seed=5))
    return root


@pytest.fixture(scope="module")
def exported_aesw(workdir):
    out = workdir / "aesw_all.jsonl"
    rc = main(["aesw-extract", "--input", str(workdir / "edits.sgml"),
               "--out", str(out), "--n", "120", "--mode", "all",
               "--flip-prob", "0.5", "--seed", "3"])
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def model_path(workdir):
    labeled = workdir / "labeled_small.jsonl"
    rc = main(["ingest", "--input", str(workdir / "annotations_small.jsonl"),
               "--out", str(labeled)])
    assert rc == 0
    out = workdir / "model.npz"
    rc = main(["train", "--pairs", str(labeled), "--out", str(out),
               "--top-k", "60", "--n-trees", "6", "--seed", "11"])
    assert rc == 0
    return out


class TestIngest:
    def test_aggregates_majority_labels(self, workdir, tmp_path, capsys):
        out = tmp_path / "labeled.jsonl"
        rc = main(["ingest", "--input", str(workdir / "annotations.jsonl"),
                   "--out", str(out)])
        assert rc == 0
        with open(out, encoding="utf-8") as fh:
            pairs = aggregate_labels(parse_pairs(fh))
        assert len(pairs) == 940
        dist = {lab: sum(1 for p in pairs if p.label == lab)
                for lab in (BETTER, NOT_BETTER)}
        assert dist == {BETTER: 784, NOT_BETTER: 156}
        stdout = capsys.readouterr().out
        assert "pairs: 940" in stdout

    def test_majority_filter(self, workdir, tmp_path, capsys):
        out = tmp_path / "confident.jsonl"
        rc = main(["ingest", "--input", str(workdir / "annotations.jsonl"),
                   "--out", str(out), "--min-majority", "5"])
        assert rc == 0
        with open(out, encoding="utf-8") as fh:
            pairs = aggregate_labels(parse_pairs(fh))
        assert len(pairs) == 748
        dist = {lab: sum(1 for p in pairs if p.label == lab)
                for lab in (BETTER, NOT_BETTER)}
        assert dist == {BETTER: 658, NOT_BETTER: 90}

    def test_filter_requires_annotations(self, workdir, tmp_path, capsys):
        labeled = tmp_path / "labeled.jsonl"
        assert main(["ingest", "--input", str(workdir / "annotations.jsonl"),
                     "--out", str(labeled)]) == 0
        rc = main(["ingest", "--input", str(labeled),
                   "--out", str(tmp_path / "out.jsonl"),
                   "--min-majority", "5"])
        assert rc == 2
        assert "annotations" in capsys.readouterr().err


class TestAgreement:
    def test_report_fields(self, workdir, capsys):
        rc = main(["agreement", "--input", str(workdir / "annotations.jsonl")])
        assert rc == 0
        out = capsys.readouterr().out
        assert "items: 940" in out
        assert "raters: 7" in out
        assert "kappa: " in out and "band: " in out

    def test_majority_filter_changes_item_count(self, workdir, capsys):
        rc = main(["agreement", "--input", str(workdir / "annotations.jsonl"),
                   "--min-majority", "5"])
        assert rc == 0
        assert "items: 748" in capsys.readouterr().out


class TestAeswExtract:
    def test_export_shape(self, workdir, exported_aesw):
        with open(exported_aesw, encoding="utf-8") as fh:
            pairs = load_exported(fh)
        assert len(pairs) == 120
        flipped = [p for p in pairs if p.meta.get("flipped") == "true"]
        assert pairs and 0 < len(flipped) < 120
        assert {p.label for p in flipped} == {NOT_BETTER}
        assert all(p.source == "AESW" for p in pairs)

    def test_plaintext_mode_and_dev_split(self, workdir, tmp_path):
        out = tmp_path / "plain.jsonl"
        dev = tmp_path / "dev.jsonl"
        rc = main(["aesw-extract", "--input", str(workdir / "edits.sgml"),
                   "--out", str(out), "--n", "60", "--mode", "plaintext",
                   "--seed", "4", "--dev-fraction", "0.1",
                   "--dev-out", str(dev)])
        assert rc == 0
        with open(out, encoding="utf-8") as fh:
            sampled = load_exported(fh)
        assert len(sampled) == 60
        with open(dev, encoding="utf-8") as fh:
            held = load_exported(fh)
        assert held, "a tenth of the archive is reserved for tuning"
        sampled_sids = {p.meta["sid"] for p in sampled}
        assert not sampled_sids & {p.meta["sid"] for p in held}

    def test_dev_fraction_requires_dev_out(self, workdir, tmp_path, capsys):
        rc = main(["aesw-extract", "--input", str(workdir / "edits.sgml"),
                   "--out", str(tmp_path / "x.jsonl"), "--n", "10",
                   "--dev-fraction", "0.1"])
        assert rc == 2
        assert "--dev-out" in capsys.readouterr().err

    def test_deterministic(self, workdir, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        args = ["aesw-extract", "--input", str(workdir / "edits.sgml"),
                "--n", "50", "--seed", "9"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestTrainAndPredict:
    def test_train_writes_model(self, model_path, capsys):
        assert model_path.exists()

    def test_predict_single_pair(self, model_path, capsysbinary):
        rc = main(["predict", "--model", str(model_path),
                   "--s1", S1, "--s2", S2])
        assert rc == 0
        out = capsysbinary.readouterr().out
        body = json.loads(out.decode("utf-8"))
        assert body["label"] in (BETTER, NOT_BETTER)
        assert 0.0 <= body["probability"] <= 1.0
        assert body["top_contributions"]
        assert len(body["model_id"]) == 16

    def test_predict_matches_endpoint_bytes(self, model_path, capsysbinary):
        rc = main(["predict", "--model", str(model_path),
                   "--s1", S1, "--s2", S2])
        assert rc == 0
        cli_bytes = capsysbinary.readouterr().out
        client = TestClient(create_app(model_path=model_path))
        resp = client.post("/api/v1/predict", json={"s1": S1, "s2": S2})
        assert cli_bytes == resp.content + b"\n"
        cli_body = json.loads(cli_bytes.decode("utf-8"))
        web_body = resp.json()
        assert cli_body["label"] == web_body["label"]
        assert cli_body["probability"] == web_body["probability"]

    def test_predict_batch_input(self, model_path, tmp_path, capsysbinary):
        batch = tmp_path / "batch.jsonl"
        with open(batch, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"s1": S1, "s2": S2}) + "\n")
            fh.write(json.dumps({"s1": "We did tests.",
                                 "s2": "We ran the tests."}) + "\n")
        rc = main(["predict", "--model", str(model_path),
                   "--input", str(batch)])
        assert rc == 0
        lines = capsysbinary.readouterr().out.splitlines()
        assert len(lines) == 2
        for line in lines:
            json.loads(line.decode("utf-8"))

    def test_predict_identical_texts_fails(self, model_path, capsys):
        rc = main(["predict", "--model", str(model_path),
                   "--s1", S1, "--s2", S1])
        assert rc == 2
        assert "no revision detected" in capsys.readouterr().err

    def test_predict_requires_texts(self, model_path, capsys):
        rc = main(["predict", "--model", str(model_path), "--s1", S1])
        assert rc == 2


@pytest.fixture(scope="module")
def run_dir(workdir, exported_aesw, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    config = workdir / "run_config.json"
    with open(config, "w", encoding="utf-8") as fh:
        json.dump({
            "pairs": "annotations_small.jsonl",
            "aesw_all": exported_aesw.name,
            "conditions": ["ArgRewriteOnly", "ArgRewritePlusAESWAll"],
            "k_folds": 3,
            "n_trees": 4,
            "top_k": 40,
            "seed": 7,
        }, fh)
    rc = main(["experiment", "--config", str(config), "--out", str(out)])
    assert rc == 0
    return out


class TestExperimentAndReport:
    def test_artifacts_written(self, run_dir):
        names = {p.name for p in run_dir.iterdir()}
        assert names >= {"manifest.json", "metrics.json", "metrics.jsonl",
                         "comparison.md", "importance.tsv", "folds.json",
                         "length_diagnostic.json"}

    def test_line_delimited_metrics(self, run_dir):
        rows = [json.loads(ln) for ln in
                (run_dir / "metrics.jsonl").read_text().splitlines()]
        # one record per fold per condition, baseline included
        assert len(rows) == 3 * 3
        conditions = {r["condition"] for r in rows}
        assert conditions == {"MajorityBaseline", "ArgRewriteOnly",
                              "ArgRewritePlusAESWAll"}
        for r in rows:
            assert set(r) >= {"condition", "fold", "macro_precision",
                              "macro_recall", "macro_f1", "accuracy"}

    def test_manifest_and_folds(self, run_dir):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 7
        assert set(manifest["top_features"]) == {"ArgRewriteOnly",
                                                 "ArgRewritePlusAESWAll"}
        folds = json.loads((run_dir / "folds.json").read_text())
        assert len(folds["fold_plan"]) == 3

    def test_report_matches_comparison(self, run_dir, capsys):
        rc = main(["report", "--run", str(run_dir)])
        assert rc == 0
        table = capsys.readouterr().out
        assert table == (run_dir / "comparison.md").read_text()
        assert "MajorityBaseline" in table


class TestServe:
    def test_bad_bind_rejected(self, model_path, capsys):
        rc = main(["serve", "--model", str(model_path), "--bind", "nonsense"])
        assert rc == 2
        assert "addr:port" in capsys.readouterr().err
