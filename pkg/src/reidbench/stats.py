"""Result aggregation, paired significance testing, and table rendering.

A ResultCell is one (approach, training set, evaluation set) record with a
metric dictionary; tables of cells drive both the mean/std aggregation and
the paired t-tests between training strategies.

The paired test uses the exact t statistic on the differences and converts
to a p-value through the regularized incomplete beta function, so no
distribution tables or simulation are involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import (
    EmptySelection,
    InconsistentKeys,
    LengthMismatch,
    ValidationError,
    ZeroVarianceDifferences,
)
from .live import SweepResult

COMBINED_PREFIX = "COMBINED"


@dataclass(frozen=True)
class ResultCell:
    """One metric record for (approach, train_set, eval_set)."""

    approach: str
    train_set: str
    eval_set: str
    metrics: dict[str, float]

    def __post_init__(self):
        for name, value in self.metrics.items():
            if not 0.0 <= value <= 1.0:
                raise ValidationError(
                    f"metric {name!r} = {value} outside [0, 1] for "
                    f"({self.approach}, {self.train_set}, {self.eval_set})"
                )

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.approach, self.train_set, self.eval_set)


def load_cells(path: str | Path) -> list[ResultCell]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(raw, dict):
        raw = [raw]
    return [
        ResultCell(
            approach=obj["approach"],
            train_set=obj["train_set"],
            eval_set=obj["eval_set"],
            metrics={k: float(v) for k, v in obj["metrics"].items()},
        )
        for obj in raw
    ]


def save_cells(cells: Sequence[ResultCell], path: str | Path) -> None:
    payload = [
        {
            "approach": c.approach,
            "train_set": c.train_set,
            "eval_set": c.eval_set,
            "metrics": c.metrics,
        }
        for c in cells
    ]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _check_unique(cells: Sequence[ResultCell]) -> None:
    seen = set()
    for c in cells:
        if c.key in seen:
            raise InconsistentKeys(f"duplicate cell key {c.key}")
        seen.add(c.key)


def is_individual(train_set: str) -> bool:
    """Single-source training sets, as opposed to COMBINED_* mixtures."""
    return not train_set.startswith(COMBINED_PREFIX)


# --------------------------------------------------------------------------
# selectors: map a full cell table to the subset entering an aggregate,
# keyed by (eval_set, approach) so two selections can be paired.
# --------------------------------------------------------------------------

Selector = Callable[[Sequence[ResultCell]], dict[tuple[str, str], ResultCell]]


def select_train_sets(*names: str) -> Selector:
    def _select(cells: Sequence[ResultCell]) -> dict[tuple[str, str], ResultCell]:
        out = {}
        for c in cells:
            if c.train_set in names:
                key = (c.eval_set, c.approach)
                if key in out:
                    raise InconsistentKeys(
                        f"multiple cells from {names} for {key}"
                    )
                out[key] = c
        return out
    return _select


def select_single_domain(cells: Sequence[ResultCell]) -> dict[tuple[str, str], ResultCell]:
    """In-domain cells: trained on the evaluation dataset's own train split."""
    out = {}
    for c in cells:
        if c.train_set == c.eval_set:
            key = (c.eval_set, c.approach)
            if key in out:
                raise InconsistentKeys(f"multiple in-domain cells for {key}")
            out[key] = c
    return out


def select_best_individual(select_by: str = "rank10") -> Selector:
    """Best single-source training set per (eval_set, approach).

    Selection is by `select_by` (ties: lexicographically smallest train-set
    name); the chosen cell contributes all of its metrics, so e.g. the mAP
    reported here is the mAP of the rank-10-best training set.
    """
    def _select(cells: Sequence[ResultCell]) -> dict[tuple[str, str], ResultCell]:
        out: dict[tuple[str, str], ResultCell] = {}
        for c in sorted(cells, key=lambda c: c.train_set):
            if not is_individual(c.train_set):
                continue
            if select_by not in c.metrics:
                raise InconsistentKeys(
                    f"cell {c.key} lacks selection metric {select_by!r}"
                )
            key = (c.eval_set, c.approach)
            if key not in out or c.metrics[select_by] > out[key].metrics[select_by]:
                out[key] = c
        return out
    return _select


SELECTORS: dict[str, Selector] = {
    "single": select_single_domain,
    "best_individual": select_best_individual(),
    # PRID-2011 has no train split of its own, so its plain COMBINED set is
    # simultaneously the all-sources and the leave-one-out mixture.
    "combined_all": select_train_sets("COMBINED_all", "COMBINED"),
    "combined_others": select_train_sets("COMBINED_others", "COMBINED"),
    "combined_scaled": select_train_sets("COMBINED_scaled"),
}


def resolve_selector(selector: str | Selector) -> Selector:
    if callable(selector):
        return selector
    try:
        return SELECTORS[selector]
    except KeyError:
        raise ValidationError(
            f"unknown selector {selector!r}, expected one of {sorted(SELECTORS)}"
        ) from None


@dataclass(frozen=True)
class AggregateResult:
    mean: float
    std: float
    n: int


def aggregate(
    cells: Sequence[ResultCell],
    metric: str,
    selector: str | Selector,
) -> AggregateResult:
    """Mean and sample (n-1) standard deviation of `metric` over a selection.

    A single selected cell reports std 0.0 with n=1.
    """
    _check_unique(cells)
    selected = resolve_selector(selector)(cells)
    if not selected:
        raise EmptySelection(f"selector matched no cells for metric {metric!r}")
    values = []
    for key in sorted(selected):
        cell = selected[key]
        if metric not in cell.metrics:
            raise InconsistentKeys(f"cell {cell.key} lacks metric {metric!r}")
        values.append(cell.metrics[metric])
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return AggregateResult(mean=float(arr.mean()), std=std, n=int(arr.size))


def paired_values(
    cells: Sequence[ResultCell],
    metric: str,
    selector_a: str | Selector,
    selector_b: str | Selector,
) -> tuple[list[float], list[float], list[tuple[str, str]]]:
    """Metric values from two selections matched on (eval_set, approach)."""
    _check_unique(cells)
    sel_a = resolve_selector(selector_a)(cells)
    sel_b = resolve_selector(selector_b)(cells)
    keys = sorted(set(sel_a) & set(sel_b))
    if not keys:
        raise EmptySelection("selections share no (eval_set, approach) keys")
    a = [sel_a[k].metrics[metric] for k in keys]
    b = [sel_b[k].metrics[metric] for k in keys]
    return a, b, keys


@dataclass(frozen=True)
class PairedTestResult:
    n: int
    mean_a: float
    mean_b: float
    std_a: float
    std_b: float
    t_statistic: float
    p_value: float
    two_sided: bool


def paired_t_test(
    a: Sequence[float], b: Sequence[float], two_sided: bool = True
) -> PairedTestResult:
    """Paired-sample t-test on differences a - b with n-1 degrees of freedom.

    One-sided mode tests the alternative mean(a - b) > 0.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"samples have shapes {x.shape} and {y.shape}")
    n = x.size
    if n < 2:
        raise LengthMismatch(f"need at least 2 pairs, got {n}")
    d = x - y
    sd = d.std(ddof=1)
    if sd == 0.0:
        raise ZeroVarianceDifferences(
            "all pairwise differences are identical; t statistic undefined"
        )
    t = float(d.mean() / (sd / math.sqrt(n)))
    df = n - 1
    # P(|T_df| >= |t|) via the regularized incomplete beta function
    p_two = float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    if two_sided:
        p = p_two
    else:
        p = p_two / 2.0 if t > 0 else 1.0 - p_two / 2.0
    return PairedTestResult(
        n=n,
        mean_a=float(x.mean()),
        mean_b=float(y.mean()),
        std_a=float(x.std(ddof=1)),
        std_b=float(y.std(ddof=1)),
        t_statistic=t,
        p_value=p,
        two_sided=two_sided,
    )


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def render_table(
    cells: Sequence[ResultCell],
    metrics: Sequence[str],
    group_by: str = "eval_set",
    row_field: str = "approach",
    decimals: int = 2,
) -> str:
    """Markdown tables, one per group, column-best values in bold.

    Ties are all bold. Output is deterministic: groups and rows sort
    lexicographically.
    """
    if group_by not in ("eval_set", "train_set", "approach"):
        raise ValidationError(f"cannot group by {group_by!r}")
    if row_field not in ("eval_set", "train_set", "approach"):
        raise ValidationError(f"cannot use rows {row_field!r}")
    _check_unique(cells)
    for c in cells:
        missing = [m for m in metrics if m not in c.metrics]
        if missing:
            raise InconsistentKeys(f"cell {c.key} lacks metric(s) {missing}")

    groups: dict[str, list[ResultCell]] = {}
    for c in cells:
        groups.setdefault(getattr(c, group_by), []).append(c)

    chunks = []
    for group in sorted(groups):
        rows = sorted(groups[group], key=lambda c: getattr(c, row_field))
        best = {
            m: max(c.metrics[m] for c in rows)
            for m in metrics
        }
        lines = [
            f"### {group}",
            "",
            "| " + row_field + " | " + " | ".join(metrics) + " |",
            "|" + "---|" * (1 + len(metrics)),
        ]
        for c in rows:
            vals = []
            for m in metrics:
                text = f"{c.metrics[m]:.{decimals}f}"
                if c.metrics[m] == best[m]:
                    text = f"**{text}**"
                vals.append(text)
            lines.append(
                "| " + getattr(c, row_field) + " | " + " | ".join(vals) + " |"
            )
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def export_curves(result: SweepResult) -> str:
    """Sweep points as CSV: beta,FR,TVR and one F column per gamma."""
    gammas = sorted(result.points[0].f_gamma) if result.points else []
    header = ["beta", "FR", "TVR"] + [f"F{g:g}" for g in gammas]
    lines = [",".join(header)]
    for p in result.points:
        row = [f"{p.beta:.2f}", f"{p.fr:.10g}", f"{p.tvr:.10g}"]
        row += [f"{p.f_gamma[g]:.10g}" for g in gammas]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def summary_json(result: SweepResult) -> str:
    payload = {
        "f_star": {
            f"{g:g}": {"value": fs.value, "beta": fs.beta}
            for g, fs in sorted(result.f_star.items())
        },
        "live_map": result.live_map,
    }
    return json.dumps(payload, indent=2) + "\n"
