#!/usr/bin/env python3
"""Reproduce the summary statistics from the published benchmark tables.

Runs every aggregation, paired significance test, and combination plan that
the analysis pipeline supports against the bundled reference results, and
prints a run log. Optionally writes the rendered Markdown tables and the
cell fixtures to an output directory.

Usage:
    python scripts/run_reference_analysis.py [--out-dir OUT]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from reidbench import reference
from reidbench.combine import plan_combined
from reidbench.stats import (
    aggregate,
    paired_t_test,
    paired_values,
    render_table,
    save_cells,
)

SELECTOR_LABELS = {
    "single": "in-domain (own training split)",
    "best_individual": "best single source (picked by rank-10)",
    "combined_all": "all sources combined",
    "combined_others": "all sources except the evaluation domain",
    "combined_scaled": "size-capped equal-share combination",
}


def log(line: str = "") -> None:
    print(line, flush=True)


def run_aggregations() -> None:
    log("== aggregate retrieval scores over training strategies ==")
    cross = reference.cross_domain_cells()
    everything = reference.all_retrieval_cells()
    for selector in ("best_individual", "combined_others", "combined_scaled"):
        for metric in ("rank10", "map"):
            agg = aggregate(cross, metric, selector)
            log(
                f"  {SELECTOR_LABELS[selector]:45s} {metric:6s} "
                f"{agg.mean:.4f} +/- {agg.std:.4f}  (n={agg.n})"
            )
    for selector in ("single",):
        for metric in ("rank10", "map"):
            agg = aggregate(everything, metric, selector)
            log(
                f"  {SELECTOR_LABELS[selector]:45s} {metric:6s} "
                f"{agg.mean:.4f} +/- {agg.std:.4f}  (n={agg.n})"
            )
    log()


def run_t_tests() -> None:
    log("== paired t-tests between training strategies ==")
    cross = reference.cross_domain_cells()
    everything = reference.all_retrieval_cells()
    comparisons = [
        (everything, "single", "combined_all"),
        (cross, "best_individual", "combined_others"),
        (cross, "best_individual", "combined_scaled"),
        (cross, "combined_others", "combined_scaled"),
    ]
    for cells, sel_a, sel_b in comparisons:
        for metric in ("rank10", "map"):
            a, b, keys = paired_values(cells, metric, sel_a, sel_b)
            result = paired_t_test(a, b)
            log(
                f"  {sel_a:16s} vs {sel_b:16s} {metric:6s} "
                f"n={result.n:2d}  t={result.t_statistic:+.4f}  "
                f"p={result.p_value:.6f}"
            )
    log()


def run_combination_plans() -> None:
    log("== combination quota plans from the published split sizes ==")
    sources = sorted(reference.TRAIN_SIZES.items())
    log(f"  source train sizes: {dict(sources)}")
    for mode, excluded in (
        ("all", None),
        ("scaled", None),
        ("others", "CUHK03"), ("scaled", "CUHK03"),
        ("others", "DukeMTMC"), ("scaled", "DukeMTMC"),
        ("others", "Market-1501"), ("scaled", "Market-1501"),
    ):
        plan = plan_combined(sources, mode=mode, excluded=excluded)
        suffix = f" minus {excluded}" if excluded else ""
        log(f"  {mode}{suffix}: quotas={plan.quotas} total={plan.target_total}")
        for note in plan.notes:
            log(f"    note: {note}")

    log()
    log("  discrepancy check, scaled combination without Market-1501:")
    plan = plan_combined(sources, mode="scaled", excluded="Market-1501")
    reported = reference.REPORTED_SCALED_QUOTAS_MARKET_EXCLUDED
    log(f"    computed here:  {plan.quotas} (sums to {plan.target_total})")
    log(f"    reported:       {reported} (sums to {sum(reported.values())})")
    log(
        "    the reported DukeMTMC figure 9754 cannot satisfy the stated "
        "constraint that quotas sum to the largest included split (16522): "
        "7368 + 9754 = 17122. With CUHK03 capped at its full 7368, the "
        "remainder 16522 - 7368 = 9154 goes to DukeMTMC, so 9154 is used "
        "throughout this package."
    )
    log()


def write_outputs(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    save_cells(reference.all_retrieval_cells(), out_dir / "retrieval_cells.json")
    save_cells(reference.live_cells(), out_dir / "live_cells.json")
    (out_dir / "cross_domain.md").write_text(
        render_table(reference.cross_domain_cells(), ("rank10", "map"),
                     group_by="eval_set", row_field="train_set"),
        encoding="utf-8",
    )
    (out_dir / "in_domain.md").write_text(
        render_table(reference.in_domain_cells(),
                     ("rank1", "rank5", "rank10", "map", "minp")),
        encoding="utf-8",
    )
    (out_dir / "live.md").write_text(
        render_table(reference.live_cells(), ("f1_star", "live_map"),
                     group_by="eval_set", row_field="train_set"),
        encoding="utf-8",
    )
    sources = sorted(reference.TRAIN_SIZES.items())
    plans = {}
    for mode, excluded in (
        ("all", None), ("scaled", None),
        ("others", "CUHK03"), ("scaled", "CUHK03"),
        ("others", "DukeMTMC"), ("scaled", "DukeMTMC"),
        ("others", "Market-1501"), ("scaled", "Market-1501"),
    ):
        plan = plan_combined(sources, mode=mode, excluded=excluded)
        key = mode if excluded is None else f"{mode}_minus_{excluded}"
        plans[key] = {
            "quotas": plan.quotas,
            "target_total": plan.target_total,
            "notes": list(plan.notes),
        }
    (out_dir / "combination_plans.json").write_text(
        json.dumps(plans, indent=2) + "\n", encoding="utf-8"
    )
    log(f"wrote tables, cells, and plans to {out_dir}/")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=None,
                        help="also write Markdown tables and JSON fixtures here")
    args = parser.parse_args()

    run_aggregations()
    run_t_tests()
    run_combination_plans()
    if args.out_dir is not None:
        write_outputs(args.out_dir)


if __name__ == "__main__":
    main()
