"""Combined training-set construction: all sources, all-but-one, or a
size-capped equal-share mixture matching the largest source.

The scaled mode targets exactly max(N) images split equally across sources.
Sources too small for their equal share are capped at full size and the
shortfall is redistributed among the rest until stable; leftover integer
remainder goes one image at a time to the largest source(s) first. That
remainder rule is what yields e.g. the {5507, 5508, 5507} three-way split.

Sampling is identity-stratified: a training set needs several images per
identity, so whole identities are drawn in seeded random order and only the
final identity is trimmed to hit the quota image-exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ExcludedNotFound, QuotaExceedsSource, TooFewSources, ValidationError
from .types import DatasetManifest, ImageRecord

MODES = ("all", "others", "scaled")


@dataclass(frozen=True)
class CombinePlan:
    """Per-source image quotas for one combined training set."""

    mode: str
    excluded_dataset: str | None
    quotas: dict[str, int]
    target_total: int
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode {self.mode!r} not in {MODES}")
        if self.excluded_dataset is not None and self.excluded_dataset in self.quotas:
            raise ValidationError(
                f"excluded dataset {self.excluded_dataset!r} present in quotas"
            )
        if any(q < 1 for q in self.quotas.values()):
            raise ValidationError("every quota must be >= 1")
        if self.target_total != sum(self.quotas.values()):
            raise ValidationError(
                f"target_total {self.target_total} != sum of quotas "
                f"{sum(self.quotas.values())}"
            )


def _equal_shares(sizes: dict[str, int], target: int) -> tuple[dict[str, int], list[str]]:
    """Split `target` equally, capping small sources and redistributing."""
    notes: list[str] = []
    capped: dict[str, int] = {}
    active = dict(sizes)
    budget = target
    while active:
        share = budget // len(active)
        too_small = {n: s for n, s in active.items() if s <= share}
        if not too_small:
            break
        for name, size in sorted(too_small.items()):
            capped[name] = size
            budget -= size
            del active[name]
            notes.append(
                f"equal share {share} exceeds {name} train size {size}; "
                "capped at full size and shortfall redistributed"
            )
    quotas = dict(capped)
    if active:
        base = budget // len(active)
        remainder = budget - base * len(active)
        for name in active:
            quotas[name] = base
        # remainder units go to the largest source(s) first
        for name in sorted(active, key=lambda n: (-sizes[n], n))[:remainder]:
            quotas[name] += 1
    return {name: quotas[name] for name in sizes}, notes


def plan_combined(
    sources: Sequence[tuple[str, int]],
    mode: str,
    excluded: str | None = None,
) -> CombinePlan:
    """Decide how many training images to draw from each source dataset.

    `sources` are (dataset name, train-split image count) pairs. Modes:
    all = every source in full; others = drop `excluded`, rest in full;
    scaled = drop `excluded` if given, then equal shares summing to the
    largest included source's size.
    """
    if mode not in MODES:
        raise ValidationError(f"mode {mode!r} not in {MODES}")
    names = [name for name, _ in sources]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate source names in {names}")
    sizes = {name: int(count) for name, count in sources}
    if any(c < 1 for c in sizes.values()):
        raise ValidationError("every source count must be >= 1")
    if excluded is not None:
        if excluded not in sizes:
            raise ExcludedNotFound(
                f"excluded dataset {excluded!r} not among sources {names}"
            )
        if mode == "all":
            raise ValidationError("mode 'all' uses every source; drop --exclude")
        del sizes[excluded]
    elif mode == "others":
        raise ValidationError("mode 'others' requires an excluded dataset")
    if len(sizes) < 2:
        raise TooFewSources(
            f"need at least 2 included sources, have {sorted(sizes)}"
        )

    notes: list[str] = []
    if mode in ("all", "others"):
        quotas = dict(sizes)
    else:
        target = max(sizes.values())
        quotas, notes = _equal_shares(sizes, target)
    return CombinePlan(
        mode=mode,
        excluded_dataset=excluded,
        quotas=quotas,
        target_total=sum(quotas.values()),
        notes=tuple(notes),
    )


def _stratified_take(
    records: Sequence[ImageRecord], quota: int, rng: random.Random
) -> list[ImageRecord]:
    """Draw whole identities in seeded order; trim the last one to the quota."""
    by_identity: dict[int, list[ImageRecord]] = {}
    for rec in records:
        by_identity.setdefault(rec.identity_id, []).append(rec)
    identities = sorted(by_identity)
    rng.shuffle(identities)
    taken: list[ImageRecord] = []
    for identity in identities:
        remaining = quota - len(taken)
        if remaining == 0:
            break
        group = sorted(by_identity[identity], key=lambda r: r.image_id)
        if len(group) > remaining:
            rng.shuffle(group)
            group = group[:remaining]
        taken.extend(group)
    return taken


def materialize_plan(
    plan: CombinePlan,
    manifests: Sequence[DatasetManifest],
    seed: int,
) -> DatasetManifest:
    """Sample the planned quotas and merge into one train-only manifest.

    Identities are relabeled into a contiguous joint space 0..K-1 (order of
    first appearance) and embedding indices are renumbered sequentially:
    a combined manifest spans several embedding stores, so original row
    indices would collide. Source image ids survive as "<source>/<image_id>".
    """
    by_name = {m.dataset_name: m for m in manifests}
    missing = [name for name in plan.quotas if name not in by_name]
    if missing:
        raise ValidationError(f"no manifest supplied for source(s) {missing}")

    rng = random.Random(seed)
    out_records: list[ImageRecord] = []
    label_map: dict[tuple[str, int], int] = {}
    for source, quota in plan.quotas.items():
        train = by_name[source].split_records("train")
        if quota > len(train):
            raise QuotaExceedsSource(
                f"{source}: quota {quota} exceeds train split size {len(train)}"
            )
        for rec in _stratified_take(train, quota, rng):
            key = (source, rec.identity_id)
            if key not in label_map:
                label_map[key] = len(label_map)
            out_records.append(
                ImageRecord(
                    image_id=f"{source}/{rec.image_id}",
                    identity_id=label_map[key],
                    camera_id=rec.camera_id,
                    split="train",
                    embedding_idx=len(out_records),
                )
            )
    return DatasetManifest(
        dataset_name=f"COMBINED_{plan.mode}", records=tuple(out_records)
    )
