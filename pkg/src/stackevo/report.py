"""Writes search artefacts: pipeline JSONs, summary CSV, generation log and figures."""

import csv
import json
import os

from stackevo.dataset import write_csv
from stackevo.metrics import balanced_accuracy

SUMMARY_HEADER = ["rank", "cv_score", "test_score", "layers", "total_nodes", "genome_digest"]


def summary_rows(ranked, test=None):
    rows = []
    for k, (pipe, rec) in enumerate(ranked, start=1):
        test_score = None
        if test is not None:
            test_score = balanced_accuracy(test.labels, pipe.predict(test.features), test.n_classes)
        rows.append({
            "rank": k,
            "cv_score": rec.cv_score,
            "test_score": test_score,
            "layers": "-".join(str(n) for n in pipe.genome.shape),
            "total_nodes": pipe.genome.total_nodes,
            "genome_digest": pipe.genome.digest(),
        })
    return rows


def write_summary(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([
                r["rank"],
                repr(r["cv_score"]),
                "" if r["test_score"] is None else repr(r["test_score"]),
                r["layers"],
                r["total_nodes"],
                r["genome_digest"],
            ])


def write_generations(reports, path):
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(json.dumps(r.to_json()) + "\n")


def write_outputs(result, out_dir, test=None, plots=True):
    """Write everything a search produces into ``out_dir``; returns the summary rows."""
    os.makedirs(out_dir, exist_ok=True)
    for k, (pipe, _) in enumerate(result.ranked, start=1):
        pipe.save(os.path.join(out_dir, f"pipeline_{k}.json"))
    rows = summary_rows(result.ranked, test)
    write_summary(rows, os.path.join(out_dir, "summary.csv"))
    write_generations(result.reports, os.path.join(out_dir, "generations.jsonl"))
    if test is not None:
        write_csv(test, os.path.join(out_dir, "test.csv"))
    if plots:
        from stackevo import plotting

        plotting.plot_progress(result.reports, os.path.join(out_dir, "progress.png"))
        if test is not None:
            plotting.plot_top(rows, os.path.join(out_dir, "top_pipelines.png"))
    return rows
