"""Coverage-complete evaluation masks for gap-filling experiments.

The sampler tiles a series into contiguous blocks of the requested gap
length, shuffles the blocks with a seeded SplitMix64 permutation, and deals
them round-robin into folds.  Every eligible (observed) index lands in
exactly one fold, so scoring all folds evaluates a method on 100% of the
data, while each individual fold hides at most ``max_missing_frac`` of the
eligible indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FairmetError
from .rng import SplitMix64
from .timeseries import TimeSeries


class SeriesTooShort(FairmetError):
    pass


class InvalidFraction(FairmetError):
    pass


class FoldOutOfRange(FairmetError):
    pass


@dataclass(frozen=True)
class MaskPlan:
    """Disjoint evaluation folds jointly covering every eligible index.

    ``folds`` holds sorted index tuples; ``fold_blocks`` the contiguous
    (start, length) block layout behind each fold, which is what the text
    manifest serializes.  A block overlapping originally-missing slots
    contributes only its observed indices to the fold.
    """

    series_len: int
    gap_len: int
    max_missing_frac: float
    seed: int
    folds: tuple[tuple[int, ...], ...]
    fold_blocks: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n_folds(self) -> int:
        return len(self.folds)

    def eligible_indices(self) -> tuple[int, ...]:
        out: list[int] = []
        for fold in self.folds:
            out.extend(fold)
        return tuple(sorted(out))


def _assign(order: list[int], n_folds: int, block_sizes: list[int],
            tail_size: int) -> list[list[int]] | None:
    """Round-robin permuted blocks into folds; tail block (id -1) joins the
    currently smallest fold.  Returns block-id lists per fold."""
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    sizes = [0] * n_folds
    for pos, block in enumerate(order):
        folds[pos % n_folds].append(block)
        sizes[pos % n_folds] += block_sizes[block]
    if tail_size > 0:
        smallest = min(range(n_folds), key=lambda i: (sizes[i], i))
        folds[smallest].append(-1)
        sizes[smallest] += tail_size
    return folds


def make_coverage_masks(series_len: int, gap_len: int,
                        max_missing_frac: float = 0.2, seed: int = 0,
                        missing_mask: np.ndarray | None = None) -> MaskPlan:
    """Build a deterministic mask plan.

    ``missing_mask`` marks slots that were never observed; those indices are
    excluded from every fold (nothing that was never observed gets "hidden").
    The fold count starts at ceil(1/max_missing_frac) and grows only when the
    block layout cannot otherwise keep every fold at or under the limit
    (block counts not divisible by the fold count, or a tail remainder).
    """
    if not (0.0 < max_missing_frac <= 1.0):
        raise InvalidFraction(f"max_missing_frac must be in (0, 1], got {max_missing_frac}")
    if gap_len < 1:
        raise ValueError(f"gap_len must be >= 1, got {gap_len}")
    min_folds = math.ceil(1.0 / max_missing_frac)
    if series_len < gap_len * min_folds:
        raise SeriesTooShort(
            f"series_len={series_len} cannot host {min_folds} folds of "
            f"gap_len={gap_len} under a {max_missing_frac:.0%} limit")

    if missing_mask is None:
        eligible = np.ones(series_len, dtype=bool)
    else:
        missing_mask = np.asarray(missing_mask, dtype=bool)
        if missing_mask.shape != (series_len,):
            raise ValueError("missing_mask length must equal series_len")
        eligible = ~missing_mask
    n_eligible = int(eligible.sum())
    if n_eligible == 0:
        raise SeriesTooShort("series has no observed slots to mask")
    limit = max_missing_frac * n_eligible

    n_blocks = series_len // gap_len
    tail_len = series_len % gap_len
    block_span = [(b * gap_len, gap_len) for b in range(n_blocks)]
    if tail_len:
        block_span.append((n_blocks * gap_len, tail_len))  # id -1 via [-1]
    block_indices = [
        [i for i in range(start, start + length) if eligible[i]]
        for start, length in block_span
    ]
    tail_size = len(block_indices[-1]) if tail_len else 0
    block_sizes = [len(ix) for ix in block_indices[:n_blocks]]

    order = list(range(n_blocks))
    SplitMix64(seed).shuffle(order)

    for n_folds in range(min_folds, n_blocks + 2):
        assignment = _assign(order, n_folds, block_sizes, tail_size)
        fold_sizes = [sum(len(block_indices[b]) for b in blocks)
                      for blocks in assignment]
        if max(fold_sizes) <= limit:
            break
    else:
        raise SeriesTooShort(
            "no block layout keeps every fold within the missing-data limit")

    folds, fold_blocks = [], []
    for blocks in assignment:
        indices: list[int] = []
        spans: list[tuple[int, int]] = []
        for b in sorted(blocks, key=lambda b: block_span[b][0]):
            indices.extend(block_indices[b])
            spans.append(block_span[b])
        if indices:
            folds.append(tuple(sorted(indices)))
            fold_blocks.append(tuple(spans))

    return MaskPlan(
        series_len=series_len,
        gap_len=gap_len,
        max_missing_frac=max_missing_frac,
        seed=seed,
        folds=tuple(folds),
        fold_blocks=tuple(fold_blocks),
    )


def plan_for_series(series: TimeSeries, gap_len: int,
                    max_missing_frac: float = 0.2, seed: int = 0) -> MaskPlan:
    """Convenience wrapper excluding the series' own missing slots."""
    return make_coverage_masks(len(series), gap_len, max_missing_frac, seed,
                               missing_mask=series.missing_mask)


def apply_mask(series: TimeSeries, plan: MaskPlan, fold: int
               ) -> tuple[TimeSeries, list[tuple[int, float]]]:
    """Hide one fold. Returns the training series (fold indices set missing)
    and the hidden (index, value) truth pairs for scoring."""
    if fold < 0 or fold >= plan.n_folds:
        raise FoldOutOfRange(f"fold {fold} out of range for {plan.n_folds}-fold plan")
    if plan.series_len != len(series):
        raise ValueError(
            f"plan built for length {plan.series_len}, series has {len(series)}")
    indices = plan.folds[fold]
    values = series.values.copy()
    truth = []
    for i in indices:
        if np.isnan(values[i]):
            raise ValueError(
                f"fold index {i} is missing in the series; build the plan "
                "with the series' missing_mask (see plan_for_series)")
        truth.append((i, float(values[i])))
        values[i] = np.nan
    return series.with_values(values), truth


# ---------------------------------------------------------------------------
# Text manifest (audit / replay)

MANIFEST_HEADER = "fold_id,start_index,length"


def plan_manifest(plan: MaskPlan) -> str:
    """One `fold_id,start_index,length` row per block."""
    lines = [MANIFEST_HEADER]
    for fold_id, spans in enumerate(plan.fold_blocks):
        for start, length in spans:
            lines.append(f"{fold_id},{start},{length}")
    return "\n".join(lines) + "\n"


def load_manifest(text: str, series_len: int, gap_len: int,
                  max_missing_frac: float = 0.2, seed: int = 0,
                  missing_mask: np.ndarray | None = None) -> MaskPlan:
    """Rebuild a plan from its manifest.  ``missing_mask`` must describe the
    same series the plan was built for, so replay reproduces the fold index
    sets exactly."""
    if missing_mask is None:
        eligible = np.ones(series_len, dtype=bool)
    else:
        eligible = ~np.asarray(missing_mask, dtype=bool)
    blocks: dict[int, list[tuple[int, int]]] = {}
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != MANIFEST_HEADER:
        raise ValueError(f"manifest must start with {MANIFEST_HEADER!r}")
    for line in lines[1:]:
        fold_id, start, length = (int(p) for p in line.split(","))
        blocks.setdefault(fold_id, []).append((start, length))
    folds, fold_blocks = [], []
    for fold_id in sorted(blocks):
        spans = sorted(blocks[fold_id])
        indices = [i for start, length in spans
                   for i in range(start, start + length) if eligible[i]]
        folds.append(tuple(indices))
        fold_blocks.append(tuple(spans))
    return MaskPlan(series_len=series_len, gap_len=gap_len,
                    max_missing_frac=max_missing_frac, seed=seed,
                    folds=tuple(folds), fold_blocks=tuple(fold_blocks))
