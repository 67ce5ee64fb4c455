"""Command-line front end.

Subcommands map one-to-one onto the library's workflows: standard
retrieval evaluation, training-set combination, the live-alert threshold
sweep, aggregation/significance statistics over result tables, and
Markdown report rendering. Input validation problems exit with status 2;
anything else that raises is a genuine bug and surfaces as a traceback.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import combine as combine_mod
from . import io, live, stats
from .errors import ValidationError


@click.group()
def cli():
    """Person re-identification benchmarking toolkit."""


def _parse_ranks(text: str) -> tuple[int, ...]:
    try:
        ranks = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValidationError(f"bad rank list {text!r}, expected e.g. '1,5,10'")
    if not ranks or any(n < 1 for n in ranks):
        raise ValidationError(f"ranks must be positive integers, got {text!r}")
    return ranks


@cli.command("eval-standard")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--embeddings", "embeddings_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--metric", type=click.Choice(["cosine", "euclidean"]),
              default="cosine", show_default=True)
@click.option("--ranks", default="1,5,10", show_default=True,
              help="Comma-separated CMC ranks.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Write metrics JSON here instead of stdout only.")
def eval_standard_cmd(manifest_path, embeddings_path, metric, ranks, out_path):
    """Query-vs-gallery retrieval metrics for one dataset."""
    from .standard import evaluate_standard

    manifest = io.load_manifest(manifest_path)
    store = io.load_embeddings(embeddings_path)
    manifest.check_embeddings(store)
    result = evaluate_standard(
        manifest, store, metric=metric, ranks=_parse_ranks(ranks)
    )
    payload = {
        "dataset": manifest.dataset_name,
        "metric_space": metric,
        "metrics": result.as_dict(),
    }
    text = json.dumps(payload, indent=2)
    click.echo(text)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")


@cli.command("combine")
@click.option("--manifest", "manifest_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Source manifest CSV; repeat per dataset.")
@click.option("--mode", type=click.Choice(sorted(combine_mod.MODES)), required=True)
@click.option("--exclude", "excluded", default=None,
              help="Dataset name to leave out (modes: others, scaled).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="Combined manifest CSV; a .plan.json sidecar is written too.")
def combine_cmd(manifest_paths, mode, excluded, seed, out_path):
    """Build a combined training manifest from several source manifests."""
    manifests = [io.load_manifest(p) for p in manifest_paths]
    sources = [
        (m.dataset_name, len(m.split_records("train"))) for m in manifests
    ]
    plan = combine_mod.plan_combined(sources, mode=mode, excluded=excluded)
    merged = combine_mod.materialize_plan(plan, manifests, seed=seed)
    io.save_manifest(merged, out_path)
    plan_payload = {
        "mode": plan.mode,
        "excluded_dataset": plan.excluded_dataset,
        "quotas": plan.quotas,
        "target_total": plan.target_total,
        "seed": seed,
        "notes": list(plan.notes),
    }
    plan_path = Path(out_path).with_suffix(".plan.json")
    plan_path.write_text(json.dumps(plan_payload, indent=2) + "\n", encoding="utf-8")
    click.echo(
        f"wrote {len(merged.records)} rows to {out_path} "
        f"(quotas {plan.quotas}, plan at {plan_path})"
    )


@cli.command("eval-live")
@click.option("--detections", "det_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Detections JSONL (may hold several video_ids).")
@click.option("--gt", "gt_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Ground-truth JSONL matching the detection videos.")
@click.option("--queries", "queries_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--embeddings", "embeddings_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Feature rows referenced by the detections.")
@click.option("--tau", type=int, default=1000, show_default=True,
              help="Window length in frames.")
@click.option("--eta", type=int, default=20, show_default=True,
              help="Candidates kept per alert.")
@click.option("--beta-step", type=float, default=0.02, show_default=True,
              help="Threshold grid step over [0, 1].")
@click.option("--iou", type=float, default=0.5, show_default=True,
              help="IoU needed to count a candidate as the query.")
@click.option("--min-det-score", type=float, default=0.5, show_default=True,
              help="Detections below this confidence are dropped up front.")
@click.option("--metric", type=click.Choice(["cosine", "euclidean"]),
              default="cosine", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="Sweep CSV; a .summary.json sidecar is written too.")
def eval_live_cmd(det_path, gt_path, queries_path, embeddings_path, tau, eta,
                  beta_step, iou, min_det_score, metric, out_path):
    """Threshold sweep of windowed alerting against annotated video."""
    if not 0.0 < beta_step <= 1.0:
        raise ValidationError(f"beta-step must be in (0, 1], got {beta_step}")
    store = io.load_embeddings(embeddings_path)
    tracks = io.load_detection_tracks(det_path, expected_rows=store.rows)
    gts = {g.video_id: g for g in io.load_video_gts(gt_path)}
    missing = [t.video_id for t in tracks if t.video_id not in gts]
    if missing:
        raise ValidationError(f"no ground truth for video(s) {missing}")
    sequences = [
        (io.filter_detections(t, threshold=min_det_score), gts[t.video_id])
        for t in tracks
    ]
    queries = io.load_queries(queries_path, expected_dim=store.dim)

    n_steps = round(1.0 / beta_step)
    grid = tuple(min(k * beta_step, 1.0) for k in range(n_steps + 1))
    config = live.LiveConfig(tau=tau, eta=eta, beta_grid=grid, iou_threshold=iou)
    result = live.sweep(sequences, queries, config, store, metric=metric)

    Path(out_path).write_text(stats.export_curves(result), encoding="utf-8")
    summary_path = Path(out_path).with_suffix(".summary.json")
    summary_path.write_text(stats.summary_json(result), encoding="utf-8")
    f1 = result.f_star.get(1.0)
    tail = f" F1*={f1.value:.4f} at beta={f1.beta:.2f}," if f1 else ""
    click.echo(
        f"swept {len(result.points)} thresholds:{tail} "
        f"live mAP={result.live_map:.4f} (curves at {out_path}, "
        f"summary at {summary_path})"
    )


@cli.group("stats")
def stats_group():
    """Aggregation and significance tests over result-cell tables."""


@stats_group.command("aggregate")
@click.option("--cells", "cells_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Result cells JSON.")
@click.option("--metric", required=True)
@click.option("--selector", type=click.Choice(sorted(stats.SELECTORS)),
              required=True)
def stats_aggregate_cmd(cells_path, metric, selector):
    """Mean / sample std of one metric over a training-set selection."""
    cells = stats.load_cells(cells_path)
    agg = stats.aggregate(cells, metric, selector)
    click.echo(json.dumps({
        "metric": metric,
        "selector": selector,
        "mean": agg.mean,
        "std": agg.std,
        "n": agg.n,
    }, indent=2))


@stats_group.command("paired-t")
@click.option("--cells", "--table", "cells_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--metric", required=True)
@click.option("--a", "--select-a", "selector_a",
              type=click.Choice(sorted(stats.SELECTORS)),
              required=True, help="First selection (differences are a - b).")
@click.option("--b", "--select-b", "selector_b",
              type=click.Choice(sorted(stats.SELECTORS)),
              required=True)
@click.option("--one-sided", is_flag=True,
              help="Test mean(a - b) > 0 instead of != 0.")
def stats_paired_t_cmd(cells_path, metric, selector_a, selector_b, one_sided):
    """Paired t-test between two selections matched on (eval set, approach)."""
    cells = stats.load_cells(cells_path)
    a, b, keys = stats.paired_values(cells, metric, selector_a, selector_b)
    result = stats.paired_t_test(a, b, two_sided=not one_sided)
    click.echo(json.dumps({
        "metric": metric,
        "a": selector_a,
        "b": selector_b,
        "n_pairs": result.n,
        "mean_a": result.mean_a,
        "mean_b": result.mean_b,
        "t": result.t_statistic,
        "df": result.n - 1,
        "p": result.p_value,
        "two_sided": result.two_sided,
        "pairs": [list(k) for k in keys],
    }, indent=2))


@cli.command("report")
@click.option("--cells", "cells_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--metrics", default="rank10,map", show_default=True,
              help="Comma-separated metric columns.")
@click.option("--group-by", type=click.Choice(["eval_set", "train_set", "approach"]),
              default="eval_set", show_default=True)
@click.option("--rows", "row_field",
              type=click.Choice(["eval_set", "train_set", "approach"]),
              default="approach", show_default=True)
@click.option("--decimals", type=int, default=2, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def report_cmd(cells_path, metrics, group_by, row_field, decimals, out_path):
    """Render result cells as grouped Markdown tables, best values bold."""
    cells = stats.load_cells(cells_path)
    names = tuple(m.strip() for m in metrics.split(",") if m.strip())
    if not names:
        raise ValidationError(f"no metric columns in {metrics!r}")
    text = stats.render_table(
        cells, names, group_by=group_by, row_field=row_field, decimals=decimals
    )
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote report to {out_path}")
    else:
        click.echo(text, nl=False)


def main() -> None:
    try:
        # non-standalone mode hands Exit codes (e.g. --help) back as a value
        code = cli(standalone_mode=False)
        if isinstance(code, int):
            sys.exit(code)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
