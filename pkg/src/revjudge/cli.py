"""Command-line interface.

Subcommands cover the whole workflow: ingest annotated revision pairs,
extract and sample proofreader edits, report annotator agreement, train a
model, run the cross-validated condition comparison, re-render reports from
a finished run, score pairs offline, and serve the model over HTTP.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import aesw, corpus, experiments, service
from .errors import RevJudgeError
from .learn import derive_seed, fit_pipeline, load_model, save_model

log = logging.getLogger(__name__)


def _read_entries(path):
    with open(path, encoding="utf-8") as fh:
        return corpus.parse_pairs(fh)


def _load_labeled(path):
    """Labeled pairs from either raw annotations (majority-aggregated) or an
    already-labeled pair file."""
    return corpus.aggregate_labels(_read_entries(path))


def _print_distribution(pairs) -> None:
    dist = corpus.class_distribution(pairs)
    total = sum(dist.values())
    print(f"pairs: {total}")
    for label in sorted(dist):
        print(f"  {label}: {dist[label]}")


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    entries = _read_entries(args.input)
    if args.min_majority is not None:
        unannotated = [p.id for p, ann in entries if ann is None]
        if unannotated:
            raise RevJudgeError(
                "--min-majority needs per-rater annotations, but "
                f"{len(unannotated)} records carry only a final label "
                f"(first: {unannotated[0]!r})")
        entries = corpus.filter_by_majority(entries, args.min_majority)
    labeled = corpus.aggregate_labels(entries)
    with open(args.out, "w", encoding="utf-8") as fh:
        corpus.serialize_pairs([(p, None) for p in labeled], fh)
    _print_distribution(labeled)
    return 0


def cmd_agreement(args) -> int:
    entries = _read_entries(args.input)
    if any(ann is None for _, ann in entries):
        raise RevJudgeError("agreement needs per-rater annotations on every record")
    if args.min_majority is not None:
        entries = corpus.filter_by_majority(entries, args.min_majority)
    report = corpus.agreement_report(entries)
    print(f"items: {report.n_items}")
    print(f"raters: {report.n_raters}")
    print(f"kappa: {report.kappa:.3f}")
    print(f"band: {report.band}")
    for label in sorted(report.class_counts):
        print(f"  {label}: {report.class_counts[label]}")
    return 0


def cmd_aesw_extract(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        sentences = list(aesw.parse_aesw(fh))
    raw = [p for p in (aesw.reconstruct_pair(s) for s in sentences)
           if p is not None]
    if args.dev_fraction:
        dev, raw = aesw.dev_split(raw, fraction=args.dev_fraction,
                                  seed=derive_seed(args.seed, "dev"))
        with open(args.dev_out, "w", encoding="utf-8") as fh:
            aesw.export_pairs(dev, fh)
        print(f"dev pairs reserved: {len(dev)} -> {args.dev_out}")
    mode = args.mode.capitalize()
    cfg = aesw.SampleConfig(n=args.n, mode=mode,
                            seed=derive_seed(args.seed, "sample"))
    sampled = aesw.sample_pairs(raw, cfg)
    flipped = aesw.flip_labels(sampled, args.flip_prob,
                               seed=derive_seed(args.seed, "flip"))
    with open(args.out, "w", encoding="utf-8") as fh:
        aesw.export_pairs(flipped, fh)
    n_flipped = sum(1 for p in flipped if p.meta.get("flipped") == "true")
    print(f"sentences parsed: {len(sentences)}")
    print(f"edited pairs reconstructed: {len(raw)}")
    print(f"sampled ({mode}): {len(flipped)}")
    print(f"flipped to {corpus.NOT_BETTER}: {n_flipped}")
    return 0


def cmd_train(args) -> int:
    material = _load_labeled(args.pairs)
    n_students = len(material)
    if args.aesw:
        with open(args.aesw, encoding="utf-8") as fh:
            material = material + aesw.load_exported(fh)
    bundle, report = fit_pipeline(
        material, min_df=args.min_df, top_k=args.top_k, n_trees=args.n_trees,
        max_depth=args.max_depth, min_leaf=args.min_leaf, smote_k=args.smote_k,
        imbalance_threshold=args.imbalance_threshold, seed=args.seed)
    save_model(bundle, args.out)
    print(f"model: {bundle.model_id} -> {args.out}")
    print(f"training pairs: {len(material)} ({n_students} student)")
    for label in sorted(report.class_counts):
        print(f"  {label}: {report.class_counts[label]}")
    if report.smote_fired:
        print(f"oversampled: +{report.n_synthetics} synthetic minority points")
    print(f"features: {report.selected_width} of {report.schema_width}")
    return 0


def _experiment_config(raw: dict) -> experiments.ExperimentConfig:
    known = {"conditions", "k_folds", "seed", "min_df", "top_k", "n_trees",
             "max_depth", "min_leaf", "smote_k", "imbalance_threshold"}
    opts = {k: v for k, v in raw.items() if k in known}
    if "conditions" in opts:
        opts["conditions"] = tuple(opts["conditions"])
    return experiments.ExperimentConfig(**opts)


def _experiment_pools(raw: dict, base_dir: Path, seed: int):
    """Proofreader pools from the run config: either pre-exported pair files
    or an edit archive sampled here with the run's parameters."""
    def load(key):
        if key not in raw:
            return []
        with open(base_dir / raw[key], encoding="utf-8") as fh:
            return aesw.load_exported(fh)

    pools = {"all": load("aesw_all"), "plain": load("aesw_plain")}
    if "aesw_sgml" in raw:
        with open(base_dir / raw["aesw_sgml"], encoding="utf-8") as fh:
            pairs = [p for p in (aesw.reconstruct_pair(s)
                                 for s in aesw.parse_aesw(fh)) if p is not None]
        n = int(raw.get("aesw_n", 5000))
        flip_prob = float(raw.get("aesw_flip_prob", 0.5))
        for mode, key in (("All", "all"), ("Plaintext", "plain")):
            if pools[key]:
                continue
            cfg = aesw.SampleConfig(n=n, mode=mode,
                                    seed=derive_seed(seed, "sample", mode))
            pools[key] = aesw.flip_labels(
                aesw.sample_pairs(pairs, cfg), flip_prob,
                seed=derive_seed(seed, "flip", mode))
    return pools["all"], pools["plain"]


def cmd_experiment(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        raw = json.load(fh)
    base_dir = Path(args.config).parent
    cfg = _experiment_config(raw)
    entries = _read_entries(base_dir / raw["pairs"])
    if "min_majority" in raw:
        entries = corpus.filter_by_majority(entries, int(raw["min_majority"]))
    pairs = corpus.aggregate_labels(entries)
    aesw_all, aesw_plain = _experiment_pools(raw, base_dir, cfg.seed)
    result = experiments.run_experiment(pairs, aesw_all, aesw_plain, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_run_artifacts(result, pairs, out)
    print(f"run artifacts -> {out}")
    print()
    print(experiments.compare_conditions(result), end="")
    return 0


def write_run_artifacts(result, pairs, out: Path) -> None:
    """Persist one experiment run: manifest, metrics (line-delimited and
    nested), fold plan, comparison table, importances, length diagnostic."""
    payload = experiments.metrics_payload(result)

    def dump(name, obj):
        with open(out / name, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")

    dump("manifest.json", result.manifest)
    dump("metrics.json", payload)
    dump("folds.json", {"fold_plan": [list(f) for f in result.fold_plan]})
    with open(out / "metrics.jsonl", "w", encoding="utf-8") as fh:
        blocks = [("MajorityBaseline", payload["baseline"])]
        blocks += list(payload["conditions"].items())
        for name, block in blocks:
            for row in block["per_fold"]:
                record = {"condition": name}
                record.update(row)
                fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
                fh.write("\n")
    with open(out / "comparison.md", "w", encoding="utf-8") as fh:
        fh.write(experiments.compare_conditions(result))
    with open(out / "importance.tsv", "w", encoding="utf-8") as fh:
        fh.write("condition\trank\tfeature\tmean_importance\n")
        for name in result.config.conditions:
            if name not in result.conditions:
                continue
            ranked = experiments.feature_importance_report(result, name)
            for rank, (feat, mean) in enumerate(ranked, start=1):
                fh.write(f"{name}\t{rank}\t{feat}\t{mean:.10g}\n")
    diag = {name: experiments.length_diff_diagnostic(result, name, pairs)
            for name in result.conditions}
    dump("length_diagnostic.json", diag)


def cmd_report(args) -> int:
    with open(Path(args.run) / "metrics.json", encoding="utf-8") as fh:
        payload = json.load(fh)
    print(experiments.comparison_from_payload(payload), end="")
    return 0


def _predict_requests(args):
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    obj = json.loads(line)
                    yield obj["s1"], obj["s2"]
    else:
        yield args.s1, args.s2


def cmd_predict(args) -> int:
    bundle = load_model(args.model)
    for s1, s2 in _predict_requests(args):
        message = service.validation_error(s1, s2)
        if message is not None:
            raise RevJudgeError(message)
        payload = service.predict_payload(bundle, s1, s2)
        sys.stdout.buffer.write(service.render_payload(payload))
        sys.stdout.buffer.write(b"\n")
        sys.stdout.buffer.flush()
    return 0


def cmd_serve(args) -> int:
    service.serve(args.model, bind=args.bind,
                  cors_origins=tuple(args.cors_origin))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revjudge",
        description="Judge whether a revised sentence improves on the original.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="aggregate annotated pairs into a "
                                      "labeled pair file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-majority", type=int, default=None,
                   help="keep only pairs whose winning label has at least "
                        "this many votes")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("agreement", help="annotator agreement report")
    p.add_argument("--input", required=True)
    p.add_argument("--min-majority", type=int, default=None)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("aesw-extract", help="sample proofreader edit pairs "
                                            "from an SGML archive")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("all", "plaintext"), default="all")
    p.add_argument("--flip-prob", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dev-fraction", type=float, default=0.0,
                   help="reserve this fraction for tuning before sampling")
    p.add_argument("--dev-out", default=None)
    p.set_defaults(func=cmd_aesw_extract)

    p = sub.add_parser("train", help="fit a model and write it to disk")
    p.add_argument("--pairs", required=True)
    p.add_argument("--aesw", default=None,
                   help="exported proofreader pairs to blend in")
    p.add_argument("--out", required=True)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--top-k", type=int, default=1000)
    p.add_argument("--n-trees", type=int, default=500)
    p.add_argument("--max-depth", type=int, default=0)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--smote-k", type=int, default=5)
    p.add_argument("--imbalance-threshold", type=float, default=0.55)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("experiment", help="run the cross-validated condition "
                                          "comparison")
    p.add_argument("--config", required=True, help="run configuration json")
    p.add_argument("--out", required=True, help="directory for run artifacts")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="re-render the comparison table from a "
                                      "finished run")
    p.add_argument("--run", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("predict", help="score pairs offline")
    p.add_argument("--model", required=True)
    p.add_argument("--s1")
    p.add_argument("--s2")
    p.add_argument("--input", help="jsonl file of {s1, s2} records")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="serve the model over HTTP")
    p.add_argument("--model", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--cors-origin", action="append", default=[],
                   help="origin allowed to call the API (repeatable)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "predict" and not args.input and not (args.s1 and args.s2):
        print("predict needs --s1 and --s2, or --input", file=sys.stderr)
        return 2
    if args.command == "aesw-extract" and args.dev_fraction and not args.dev_out:
        print("--dev-fraction needs --dev-out", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except RevJudgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
