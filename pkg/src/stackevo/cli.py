"""Command-line interface: ``search``, ``predict`` and ``info``.

Exit codes: 0 success, 2 usage/config error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

from stackevo.cascade import TrainedPipeline, predict_pipeline
from stackevo.config import config_schema, load_config_file, resolve
from stackevo.dataset import SplitSpec, _read_rows, load_csv, load_features, shuffle_split
from stackevo.errors import ConfigError, DataError, StackevoError, WidthMismatchError
from stackevo.evolution import run
from stackevo.primitives import catalog
from stackevo.report import write_outputs

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

log = logging.getLogger("stackevo")


def _label_col(text):
    try:
        return int(text)
    except ValueError:
        return text


def build_parser():
    parser = argparse.ArgumentParser(prog="stackevo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="evolve cascading pipelines for a CSV dataset")
    s.add_argument("--config", help="JSON config file (see `info config-schema`)")
    s.add_argument("--data", help="CSV file with a header row")
    s.add_argument("--label-col", dest="label_col", type=_label_col, help="label column name or index")
    s.add_argument("--train-frac", dest="train_frac", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--stratify", action="store_const", const=True, default=None,
                   help="stratified train/test split instead of a plain shuffle")
    s.add_argument("--max-layers", dest="max_layers", type=int)
    s.add_argument("--max-nodes", dest="max_nodes", type=int)
    s.add_argument("--primitives", type=lambda t: [p.strip() for p in t.split(",") if p.strip()],
                   help="comma-separated allow-list of primitives")
    s.add_argument("--population", type=int, help="population size N (even, >= 4)")
    s.add_argument("--iterations", type=int, help="number of generations M")
    s.add_argument("--folds", type=int, help="cross-validation folds")
    s.add_argument("--workers", type=int, help="parallel evaluation processes")
    s.add_argument("--out", help="output directory")
    s.add_argument("--no-plots", dest="plots", action="store_const", const=False, default=None)
    s.add_argument("--progress", action="store_true", help="stream per-generation JSON lines to stdout")

    p = sub.add_parser("predict", help="apply a saved pipeline to a CSV")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", dest="label_col", type=_label_col,
                   help="column to drop before predicting (default: the training label column if present)")
    p.add_argument("--out", help="write predictions here instead of stdout")

    i = sub.add_parser("info", help="print the primitive catalog or the config schema as JSON")
    i.add_argument("topic", choices=["primitives", "config-schema"])
    return parser


def cmd_search(args):
    file_values = load_config_file(args.config) if args.config else {}
    flags = {k: getattr(args, k) for k in (
        "data", "label_col", "train_frac", "seed", "stratify", "max_layers", "max_nodes",
        "primitives", "population", "iterations", "folds", "workers", "out", "plots")}
    cfg = resolve(file_values, flags)
    if cfg.data is None:
        raise ConfigError("--data is required (or set \"data\" in the --config file)")
    try:
        ea = cfg.ea_config()
        split = SplitSpec(cfg.train_frac, cfg.seed, cfg.stratify)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    dataset = load_csv(cfg.data, cfg.label_col)
    train, test = shuffle_split(dataset, split)
    log.info("train %d rows, test %d rows, %d classes", train.n_rows, test.n_rows, dataset.n_classes)

    def progress(report):
        if args.progress:
            print(json.dumps(report.to_json()), flush=True)
        log.info("generation %d best %.4f", report.generation_index, report.best_score)

    t0 = time.perf_counter()
    result = run(ea, train, on_generation=progress)
    rows = write_outputs(result, cfg.out, test=test, plots=cfg.plots)
    with open(os.path.join(cfg.out, "config.json"), "w", encoding="utf-8") as fh:
        json.dump(cfg.to_json(), fh, indent=1, sort_keys=True)
    best_pipe, best = result.ranked[0]
    print(f"best pipeline: {best_pipe.genome.describe()}")
    print(f"cv balanced accuracy:   {best.cv_score:.4f}")
    print(f"test balanced accuracy: {rows[0]['test_score']:.4f}")
    print(f"wrote {len(rows)} pipelines to {cfg.out} in {time.perf_counter() - t0:.1f}s")
    return EXIT_OK


def cmd_predict(args):
    pipe = TrainedPipeline.load(args.pipeline)
    if args.label_col is not None:
        drop = [args.label_col]
    else:
        header, _ = _read_rows(args.data)
        drop = [pipe.label_name] if pipe.label_name in header else []
    X, _ = load_features(args.data, drop)
    if X.shape[1] != pipe.raw_width:
        raise WidthMismatchError(pipe.raw_width, X.shape[1], where=args.data)
    labels = [pipe.class_names[k] for k in predict_pipeline(pipe, X)]
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["prediction"])
        w.writerows([lab] for lab in labels)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_info(args):
    if args.topic == "primitives":
        doc = [spec.to_json() for spec in catalog()]
    else:
        doc = config_schema()
    print(json.dumps(doc, indent=1))
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"search": cmd_search, "predict": cmd_predict, "info": cmd_info}[args.command]
    try:
        return handler(args)
    except DataError as exc:
        print(f"stackevo: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StackevoError as exc:
        print(f"stackevo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
