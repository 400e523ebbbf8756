import numpy as np
import pytest

from biotac_sim.dataio import load_fold_plan, make_fold_plan, save_fold_plan
from biotac_sim.schema import FoldSizingError


def test_full_scale_sizing():
    plan = make_fold_plan(300_000, 10, 1000, 30)
    assert plan.n_chunks == 300
    for fold in plan.folds:
        assert len(fold.test) == 30
        assert len(fold.validation) == 30
        assert len(fold.train) == 240


def test_minimal_sizing():
    plan = make_fold_plan(4000, 2, 1000, 1, seed=3)
    for fold in plan.folds:
        assert (len(fold.test), len(fold.validation), len(fold.train)) == (1, 1, 2)
        assert sorted(fold.test + fold.validation + fold.train) == [0, 1, 2, 3]


def test_trailing_partial_chunk_is_unused():
    plan = make_fold_plan(4500, 2, 1000, 1)
    assert plan.n_chunks == 4
    ticks = np.concatenate([plan.split_ticks(0, s) for s in ("train", "validation", "test")])
    assert ticks.max() < 4000


def test_too_few_chunks():
    with pytest.raises(FoldSizingError):
        make_fold_plan(2999, 2, 1000, 1)
    with pytest.raises(FoldSizingError):
        make_fold_plan(10_000, 2, 0, 1)


def test_same_seed_same_plan():
    assert make_fold_plan(50_000, 5, 1000, 5, seed=1) == make_fold_plan(50_000, 5, 1000, 5, seed=1)


def test_different_seeds_differ():
    plans = [make_fold_plan(50_000, 5, 1000, 5, seed=s).folds for s in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            assert plans[i] != plans[j]


def test_split_ticks_cover_chunks():
    plan = make_fold_plan(10_000, 3, 1000, 2, seed=4)
    test = plan.split_ticks(1, "test")
    assert len(test) == 2000
    assert set(test // 1000) == set(plan.folds[1].test)


def test_save_and_load(tmp_path):
    plan = make_fold_plan(10_000, 3, 1000, 2, seed=4)
    assert load_fold_plan(save_fold_plan(plan, tmp_path / "plan.json")) == plan
