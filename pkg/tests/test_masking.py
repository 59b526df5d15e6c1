import math
import random

import numpy as np
import pytest

from fairmet.masking import (FoldOutOfRange, InvalidFraction, MaskPlan,
                             SeriesTooShort, apply_mask, load_manifest,
                             make_coverage_masks, plan_for_series,
                             plan_manifest)
from tests.test_timeseries import make_series


class TestMakeCoverageMasks:
    def test_exact_tiling_example(self):
        plan = make_coverage_masks(100, 4, 0.2, seed=11)
        assert plan.n_folds == 5
        for fold, blocks in zip(plan.folds, plan.fold_blocks):
            assert len(fold) == 20          # exactly 20%
            assert len(blocks) == 5
            assert all(length == 4 for _, length in blocks)
        union = sorted(i for fold in plan.folds for i in fold)
        assert union == list(range(100))

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            make_coverage_masks(10, 10, 0.2, seed=1)

    def test_two_fold_full_cover(self):
        plan = make_coverage_masks(6, 1, 0.5, seed=5)
        assert plan.n_folds == 2
        assert sorted(len(f) for f in plan.folds) == [3, 3]
        assert sorted(i for f in plan.folds for i in f) == list(range(6))

    def test_invalid_fraction(self):
        with pytest.raises(InvalidFraction):
            make_coverage_masks(100, 4, 0.0, seed=1)
        with pytest.raises(InvalidFraction):
            make_coverage_masks(100, 4, 1.5, seed=1)

    def test_random_plans_respect_all_invariants(self):
        rng = random.Random(99)
        for trial in range(50):
            gap_len = rng.choice([1, 3, 4, 6, 12, 24, 36, 48])
            series_len = rng.randint(gap_len * 5, gap_len * 5 + 2000)
            plan = make_coverage_masks(series_len, gap_len, 0.2, seed=trial)
            seen = set()
            for fold, blocks in zip(plan.folds, plan.fold_blocks):
                fold_set = set(fold)
                assert not fold_set & seen, "folds overlap"
                seen |= fold_set
                assert len(fold) <= 0.2 * series_len + 1e-9
                # folds are unions of gap_len blocks, one tail may be shorter
                short = [length for _, length in blocks if length != gap_len]
                assert len(short) <= 1
                assert all(length <= gap_len for _, length in blocks)
                rebuilt = sorted(i for start, length in blocks
                                 for i in range(start, start + length))
                assert rebuilt == sorted(fold)
            assert seen == set(range(series_len)), "coverage is not 100%"

    def test_determinism_and_seed_sensitivity(self):
        a = make_coverage_masks(500, 6, 0.2, seed=123)
        b = make_coverage_masks(500, 6, 0.2, seed=123)
        assert a == b
        plans = {make_coverage_masks(500, 6, 0.2, seed=s).folds
                 for s in range(10)}
        assert len(plans) > 1

    def test_preexisting_missing_excluded(self):
        mask = np.zeros(120, dtype=bool)
        mask[[3, 4, 50, 51, 52, 119]] = True
        plan = make_coverage_masks(120, 4, 0.2, seed=2, missing_mask=mask)
        union = sorted(i for f in plan.folds for i in f)
        assert union == [i for i in range(120) if not mask[i]]
        eligible = 120 - int(mask.sum())
        for fold in plan.folds:
            assert len(fold) <= 0.2 * eligible + 1e-9


class TestApplyMask:
    def example_plan(self):
        return MaskPlan(series_len=5, gap_len=2, max_missing_frac=0.5, seed=0,
                        folds=((0, 1), (2, 3), (4,)),
                        fold_blocks=(((0, 2),), ((2, 2),), ((4, 1),)))

    def test_direct_substitution(self):
        s = make_series([1.0, 2.0, 3.0, 4.0, 5.0])
        train, truth = apply_mask(s, self.example_plan(), fold=1)
        assert truth == [(2, 3.0), (3, 4.0)]
        np.testing.assert_array_equal(np.isnan(train.values),
                                      [False, False, True, True, False])
        assert list(train.values[[0, 1, 4]]) == [1.0, 2.0, 5.0]
        # original untouched
        assert s.n_missing == 0

    def test_fold_out_of_range(self):
        plan = make_coverage_masks(100, 4, 0.2, seed=3)
        with pytest.raises(FoldOutOfRange):
            apply_mask(make_series([1.0] * 100), plan, fold=7)

    def test_every_observation_hidden_exactly_once(self):
        rng = random.Random(4)
        values = [np.nan if rng.random() < 0.15 else rng.random()
                  for _ in range(200)]
        s = make_series(values)
        plan = plan_for_series(s, gap_len=6, seed=21)
        hidden = []
        for fold in range(plan.n_folds):
            _, truth = apply_mask(s, plan, fold)
            hidden.extend(i for i, _ in truth)
        observed = [i for i in range(200) if not math.isnan(values[i])]
        assert sorted(hidden) == observed

    def test_masking_never_hides_missing(self):
        s = make_series([1.0, np.nan, 3.0, 4.0, 5.0, 6.0])
        plan = MaskPlan(series_len=6, gap_len=2, max_missing_frac=0.5, seed=0,
                        folds=((0, 1),), fold_blocks=(((0, 2),),))
        with pytest.raises(ValueError):
            apply_mask(s, plan, 0)


class TestManifest:
    def test_round_trip(self):
        plan = make_coverage_masks(103, 4, 0.2, seed=77)
        text = plan_manifest(plan)
        assert text.splitlines()[0] == "fold_id,start_index,length"
        loaded = load_manifest(text, series_len=103, gap_len=4,
                               max_missing_frac=0.2, seed=77)
        assert loaded.folds == plan.folds
        assert loaded.fold_blocks == plan.fold_blocks

    def test_round_trip_with_missing(self):
        mask = np.zeros(96, dtype=bool)
        mask[10:20] = True
        plan = make_coverage_masks(96, 4, 0.25, seed=5, missing_mask=mask)
        loaded = load_manifest(plan_manifest(plan), series_len=96, gap_len=4,
                               max_missing_frac=0.25, seed=5,
                               missing_mask=mask)
        assert loaded.folds == plan.folds
