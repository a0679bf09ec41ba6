"""Command-line driver for the triage pipeline.

Thin argument-parsing layer over the library: every subcommand reads file
artifacts, calls the same functions the HTTP service uses, writes file
artifacts, and prints the path of everything it wrote. Exit codes: 0 on
success, 1 with a one-line diagnostic on pipeline errors, 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import autoreply, evaluate, pipeline, synth
from .augment import AugmentConfig, DEFAULT_THESAURUS, AugmentError, TokenizedSample, load_thesaurus
from .corpus import CorpusError, RawEmail, clean, ingest, write_jsonl
from .evaluate import EvalError
from .features import FeatureError
from .labeling import DEFAULT_CATEGORIES, LabeledEmail, LabelingError, load_categories
from .models import TrainConfig, TrainingDiverged, load_model, save_model
from .models.store import ModelFormatError
from .rng import subseed
from .textprep import DEFAULT_STOPWORDS, load_stopwords

CONFIG_ENV_VAR = "MAILTRIAGE_CONFIG"

_ERRORS = (
    CorpusError,
    LabelingError,
    AugmentError,
    FeatureError,
    EvalError,
    ModelFormatError,
    TrainingDiverged,
    autoreply.TemplateError,
    synth.SynthError,
    ValueError,
    OSError,
)


@dataclass
class PipelineConfig:
    """File-level defaults, loadable from a JSON config file."""

    corpus: str | None = None
    categories: str | None = None
    thesaurus: str | None = None
    stoplist: str | None = None
    templates: str | None = None
    ratio: float = 0.8
    threshold: float = autoreply.DEFAULT_THRESHOLD
    seed: int = 7


def load_config(path: str | Path) -> PipelineConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"config {path}: expected a JSON object")
    cfg = PipelineConfig(
        corpus=data.get("corpus"),
        categories=data.get("categories"),
        thesaurus=data.get("thesaurus"),
        stoplist=data.get("stoplist"),
        templates=data.get("templates"),
        ratio=float(data.get("ratio", 0.8)),
        threshold=float(data.get("threshold", autoreply.DEFAULT_THRESHOLD)),
        seed=int(data.get("seed", 7)),
    )
    base = Path(path).parent
    for field in ("corpus", "categories", "thesaurus", "stoplist", "templates"):
        value = getattr(cfg, field)
        if value is None:
            continue
        resolved = Path(value) if Path(value).is_absolute() else base / value
        if not resolved.exists():
            raise ValueError(f"config {path}: {field} file not found: {resolved}")
        setattr(cfg, field, str(resolved))
    return cfg


def _config_for(args) -> PipelineConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    return load_config(path) if path else PipelineConfig()


def _categories_for(args, cfg: PipelineConfig):
    path = getattr(args, "categories", None) or cfg.categories
    return load_categories(path) if path else list(DEFAULT_CATEGORIES)


def _templates_for(args, cfg: PipelineConfig):
    path = getattr(args, "templates", None) or cfg.templates
    return autoreply.load_templates(path) if path else autoreply.DEFAULT_TEMPLATES


def _read_labeled(path: str | Path) -> list[LabeledEmail]:
    from .corpus import CleanEmail

    items = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            try:
                items.append(
                    LabeledEmail(
                        email=CleanEmail(id=str(record["id"]), text=str(record["text"])),
                        category=str(record["category"]),
                    )
                )
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: missing field {exc.args[0]!r}") from exc
    if not items:
        raise ValueError(f"{path}: no labeled records")
    return items


def _write_labeled(items, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for item in items:
            fh.write(
                json.dumps(
                    {"id": item.email.id, "text": item.email.text, "category": item.category},
                    ensure_ascii=False,
                )
                + "\n"
            )


def _read_tokenized(path: str | Path) -> list[TokenizedSample]:
    samples = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            samples.append(
                TokenizedSample(
                    id=str(record["id"]),
                    category=str(record["category"]),
                    tokens=tuple(str(t) for t in record["tokens"]),
                )
            )
    if not samples:
        raise ValueError(f"{path}: no tokenized records")
    return samples


def _write_tokenized(samples, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(
                json.dumps(
                    {"id": s.id, "category": s.category, "tokens": list(s.tokens)},
                    ensure_ascii=False,
                )
                + "\n"
            )


def _looks_tokenized(path: str | Path) -> bool:
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                return "tokens" in json.loads(line)
    return False


def _wrote(path) -> None:
    print(f"wrote {path}")


def _query_from_file(path: str | Path) -> tuple[str, str]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        record = json.loads(text)
        return str(record.get("subject", "")), str(record.get("body", ""))
    return "", text


# ---------------------------------------------------------------- commands


def cmd_synth(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    counts = None
    if args.counts:
        values = [int(v) for v in args.counts.split(",")]
        ordered = sorted(categories, key=lambda c: c.rank)
        if len(values) != len(ordered):
            raise ValueError(f"--counts needs {len(ordered)} comma-separated values")
        counts = {c.name: v for c, v in zip(ordered, values)}
    spec = synth.default_spec(
        categories,
        counts=counts,
        keyword_prob=args.keyword_prob,
        crosstalk_prob=args.crosstalk_prob,
        seed=args.seed if args.seed is not None else cfg.seed,
    )
    emails, truth = synth.generate_corpus(spec)
    write_jsonl(emails, args.out)
    _wrote(args.out)
    if args.truth:
        Path(args.truth).write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", "utf-8")
        _wrote(args.truth)
    print(f"generated {len(emails)} emails across {len(spec.categories)} categories")
    return 0


def cmd_label(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    corpus_path = args.corpus or cfg.corpus
    if not corpus_path:
        raise ValueError("no corpus file given (use --corpus or a config file)")
    emails = ingest(corpus_path, args.format)
    labeled, counts = pipeline.label_corpus(emails, categories)
    _write_labeled(labeled, args.out)
    _wrote(args.out)
    for name, count in counts.items():
        print(f"{name}: {count}")
    print(f"labeled {len(labeled)} of {len(emails)} emails")
    if args.counts_out:
        Path(args.counts_out).write_text(json.dumps(counts, indent=2) + "\n", "utf-8")
        _wrote(args.counts_out)
    return 0


def cmd_split(args) -> int:
    cfg = _config_for(args)
    labeled = _read_labeled(args.data)
    ratio = args.ratio if args.ratio is not None else cfg.ratio
    seed = args.seed if args.seed is not None else cfg.seed
    train, test = evaluate.stratified_split(labeled, ratio, seed)
    _write_labeled(train, args.train)
    _wrote(args.train)
    _write_labeled(test, args.test)
    _wrote(args.test)
    print(f"split {len(labeled)} -> {len(train)} train / {len(test)} test")
    return 0


def cmd_augment(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    thesaurus_path = args.thesaurus or cfg.thesaurus
    lexicon = load_thesaurus(thesaurus_path) if thesaurus_path else DEFAULT_THESAURUS
    stoplist_path = args.stoplist or cfg.stoplist
    stoplist = load_stopwords(stoplist_path) if stoplist_path else DEFAULT_STOPWORDS

    if _looks_tokenized(args.data):
        samples = _read_tokenized(args.data)
    else:
        samples = pipeline.tokenize_labeled(_read_labeled(args.data), stoplist=stoplist)
    aug_cfg = AugmentConfig(
        target_per_class=args.target_per_class,
        replace_fraction=args.replace_fraction,
        seed=args.seed if args.seed is not None else cfg.seed,
    )
    augmented = pipeline.augment_samples(samples, categories, aug_cfg, lexicon)
    _write_tokenized(augmented, args.out)
    _wrote(args.out)
    print(f"augmented {len(samples)} -> {len(augmented)} samples")
    return 0


def cmd_train(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    seed = args.seed if args.seed is not None else cfg.seed

    if args.model == "tree":
        if _looks_tokenized(args.data):
            raise ValueError("the tree trains on labeled text records, not tokenized samples")
        labeled = _read_labeled(args.data)
        model = pipeline.train_tree_from_labeled(labeled, categories, args.max_depth)
        save_model(model, args.out)
        _wrote(args.out)
        return 0

    train_cfg = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        momentum=args.momentum,
        batch_size=args.batch_size,
        seed=seed,
    )
    if _looks_tokenized(args.data):
        samples = _read_tokenized(args.data)  # already augmented upstream
    else:
        samples = pipeline.tokenize_labeled(_read_labeled(args.data))
        if not args.no_augment:
            thesaurus_path = args.thesaurus or cfg.thesaurus
            lexicon = load_thesaurus(thesaurus_path) if thesaurus_path else DEFAULT_THESAURUS
            aug_cfg = AugmentConfig(
                target_per_class=args.target_per_class,
                replace_fraction=args.replace_fraction,
                seed=subseed(seed, "augment"),
            )
            samples = pipeline.augment_samples(samples, categories, aug_cfg, lexicon)
    model = pipeline.train_nn_from_samples(
        samples, categories, train_cfg, hidden_units=args.hidden_units, dropout_rate=args.dropout
    )
    save_model(model, args.out, train_cfg)
    _wrote(args.out)
    print(
        f"trained on {len(samples)} samples; final train accuracy "
        f"{model.train_accuracy[-1]:.3f}"
    )
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    test = _read_labeled(args.data)
    y_true = [item.category for item in test]
    y_pred = [pipeline.classify_clean(model, item.email)[0] for item in test]
    cm = evaluate.confusion(y_true, y_pred, model.categories)
    rep = evaluate.report(cm)
    text = evaluate.format_report(rep)
    print(text, end="")
    if args.report:
        Path(args.report).write_text(text, "utf-8")
        _wrote(args.report)
    if args.report_csv:
        Path(args.report_csv).write_text(evaluate.report_csv(rep), "utf-8")
        _wrote(args.report_csv)
    if args.confusion_csv:
        Path(args.confusion_csv).write_text(evaluate.render_confusion(cm, "csv"), "utf-8")
        _wrote(args.confusion_csv)
    if args.confusion_ascii:
        Path(args.confusion_ascii).write_text(evaluate.render_confusion(cm, "ascii"), "utf-8")
        _wrote(args.confusion_ascii)
    return 0


def cmd_compare(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    corpus_path = args.corpus or cfg.corpus
    base_seed = args.seed if args.seed is not None else cfg.seed
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    macro_f1: dict[str, list[float]] = {"nn": [], "nn_augmented": [], "tree": []}
    accuracy: dict[str, list[float]] = {"nn": [], "nn_augmented": [], "tree": []}
    for seed in range(base_seed, base_seed + args.seeds):
        if corpus_path:
            # real corpora carry no ground truth: label by keyword rules
            labeled, _ = pipeline.label_corpus(ingest(corpus_path), categories)
        else:
            # fresh synthetic corpus per seed, supervised by its ground truth
            emails, truth = synth.generate_corpus(synth.default_spec(categories, seed=seed))
            labeled = pipeline.truth_labeled(emails, truth)
        results = evaluate.compare_runs(labeled, categories, seed=seed, train_ratio=args.ratio)
        for name, arm in results.items():
            macro_f1[name].append(arm.report.macro_f1)
            accuracy[name].append(arm.report.accuracy)
            report_path = out_dir / f"seed{seed}_{name}_report.txt"
            report_path.write_text(evaluate.format_report(arm.report), "utf-8")
            _wrote(report_path)
            cm_path = out_dir / f"seed{seed}_{name}_confusion.csv"
            cm_path.write_text(evaluate.render_confusion(arm.matrix, "csv"), "utf-8")
            _wrote(cm_path)

    summary = {
        name: {
            "median_macro_f1": evaluate.median(macro_f1[name]),
            "median_accuracy": evaluate.median(accuracy[name]),
            "macro_f1": macro_f1[name],
            "accuracy": accuracy[name],
        }
        for name in macro_f1
    }
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", "utf-8")
    _wrote(summary_path)
    for name, stats in summary.items():
        print(
            f"{name}: median macro-F1 {stats['median_macro_f1']:.3f}, "
            f"median accuracy {stats['median_accuracy']:.3f}"
        )
    return 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    subject, body = _query_from_file(args.file)
    category, confidence = pipeline.classify_text(model, subject, body)
    print(json.dumps({"category": category, "confidence": confidence}))
    return 0


def cmd_reply(args) -> int:
    cfg = _config_for(args)
    categories = _categories_for(args, cfg)
    templates = _templates_for(args, cfg)
    autoreply.validate_templates(templates, categories)
    model = load_model(args.model)
    subject, body = _query_from_file(args.file)
    email = clean(
        RawEmail(id="query", thread_id="", direction="incoming", subject=subject, body=body)
    )
    threshold = args.threshold if args.threshold is not None else cfg.threshold
    decision = autoreply.compose_reply(email, model, templates, categories, threshold)
    print(
        json.dumps(
            {
                "category": decision.category,
                "confidence": decision.confidence,
                "tailored": decision.tailored,
                "rendered": decision.rendered,
            }
        )
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = _config_for(args)
    app = create_app(
        model_path=args.model,
        templates_path=args.templates or cfg.templates,
        categories_path=args.categories or cfg.categories,
        threshold=args.threshold if args.threshold is not None else cfg.threshold,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mailtriage", description="Helpdesk email triage pipeline"
    )
    parser.add_argument("--config", help=f"JSON config file (or set ${CONFIG_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--truth", help="write ground-truth labels here (JSON)")
    p.add_argument("--categories")
    p.add_argument("--counts", help="comma-separated per-category email counts")
    p.add_argument("--keyword-prob", type=float, default=0.85)
    p.add_argument("--crosstalk-prob", type=float, default=0.12)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("label", help="assign first-match keyword categories")
    p.add_argument("--corpus")
    p.add_argument("--format", choices=("jsonl", "csv"))
    p.add_argument("--out", required=True)
    p.add_argument("--counts-out")
    p.add_argument("--categories")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("split", help="stratified train/test split")
    p.add_argument("--data", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--ratio", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("augment", help="synonym-replacement rebalancing")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--target-per-class", type=int, default=200)
    p.add_argument("--replace-fraction", type=float, default=0.3)
    p.add_argument("--seed", type=int)
    p.add_argument("--thesaurus")
    p.add_argument("--stoplist")
    p.add_argument("--categories")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("--model", choices=("nn", "tree"), required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-augment", action="store_true")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--hidden-units", type=int, default=40)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--target-per-class", type=int, default=200)
    p.add_argument("--replace-fraction", type=float, default=0.3)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--thesaurus")
    p.add_argument("--categories")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on labeled data")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--report")
    p.add_argument("--report-csv")
    p.add_argument("--confusion-csv")
    p.add_argument("--confusion-ascii")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="three-way nn / nn+augment / tree comparison")
    p.add_argument("--corpus", help="labeled corpus; omitted = fresh synthetic per seed")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int)
    p.add_argument("--categories")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("classify", help="classify one email file")
    p.add_argument("--model", required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reply", help="compose the auto-reply for one email file")
    p.add_argument("--model", required=True)
    p.add_argument("--templates")
    p.add_argument("--categories")
    p.add_argument("--threshold", type=float)
    p.add_argument("file")
    p.set_defaults(func=cmd_reply)

    p = sub.add_parser("serve", help="run the HTTP classification service")
    p.add_argument("--model", required=True)
    p.add_argument("--templates")
    p.add_argument("--categories")
    p.add_argument("--threshold", type=float)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
