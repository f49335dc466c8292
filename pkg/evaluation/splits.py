"""Train/test split protocols.

``kfold``           stratified k-fold cross-validation.
``mbr_subsample``   shrink malware so it makes up a given fraction of the data.
``family_holdout``  hold whole malware families out of training (novel-family test).

Public API
----------
kfold_split(labels, k, seed)                           -> SplitPlan
mbr_subsample(labels, mbr, seed)                       -> list[int]
family_holdout(families, held_out, seed, labels)       -> SplitPlan
family_groups(families, group_size, min_samples, ...)  -> list[list[str]]
family_rotation(families, group_size, ...)             -> SplitPlan
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Iterable, Literal, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from sklearn.model_selection import StratifiedKFold

from errors import SplitError
from labels import Label, is_malware

logger = logging.getLogger(__name__)

SplitKind = Literal["kfold", "mbr_subsample", "family_holdout"]


class Fold(BaseModel):
    train: list[int]
    test: list[int]

    @model_validator(mode="after")
    def _check_disjoint(self) -> Fold:
        overlap = set(self.train) & set(self.test)
        if overlap:
            raise ValueError(f"train and test share indices {sorted(overlap)[:5]}")
        return self


class SplitPlan(BaseModel):
    kind: SplitKind
    folds: list[Fold]
    seed: int = 0
    held_out: list[list[str]] | None = Field(
        None, description="Families held out per fold (family_holdout only)"
    )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# ── Stratified k-fold ───────────────────────────────────────────────────────


def kfold_split(labels: Sequence[str | Label], k: int, seed: int = 0) -> SplitPlan:
    if k < 2:
        raise SplitError(f"k must be >= 2, got {k}")
    mask = is_malware(labels)
    counts = {Label.MALWARE: int(mask.sum()), Label.BENIGN: int((~mask).sum())}
    small = {label.value: n for label, n in counts.items() if n < k}
    if small:
        raise SplitError(f"each class needs at least {k} samples for {k}-fold, got {small}")

    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed % 2**32)
    folds = [
        Fold(train=sorted(train.tolist()), test=sorted(test.tolist()))
        for train, test in splitter.split(np.zeros(mask.size), mask)
    ]
    return SplitPlan(kind="kfold", folds=folds, seed=seed)


# ── Imbalanced subsampling ──────────────────────────────────────────────────


def mbr_subsample(labels: Sequence[str | Label], mbr: float, seed: int = 0) -> list[int]:
    """Keep every benign sample and ``floor(mbr * benign / (1 - mbr))`` random malware."""
    if not 0.0 < mbr < 1.0:
        raise SplitError(f"mbr must be in (0, 1), got {mbr}")
    mask = is_malware(labels)
    malware = np.flatnonzero(mask)
    benign = np.flatnonzero(~mask)
    keep = math.floor(mbr * benign.size / (1.0 - mbr) + 1e-9)
    if keep > malware.size:
        raise SplitError(
            f"mbr={mbr} with {benign.size} benign needs {keep} malware, only {malware.size} available"
        )
    if keep < 1:
        raise SplitError(f"mbr={mbr} with {benign.size} benign keeps no malware")
    chosen = _rng(seed).choice(malware, size=keep, replace=False)
    return sorted(benign.tolist() + chosen.tolist())


# ── Family exclusion ────────────────────────────────────────────────────────


def _malware_mask(families: Sequence[str | None], labels: Sequence[str | Label] | None) -> np.ndarray:
    if labels is None:
        return np.array([f is not None and f != "" for f in families], dtype=bool)
    if len(labels) != len(families):
        raise SplitError(f"{len(families)} family entries but {len(labels)} labels")
    return is_malware(labels)


def malware_families(
    families: Sequence[str | None], labels: Sequence[str | Label] | None = None
) -> Counter[str]:
    mask = _malware_mask(families, labels)
    return Counter(f for f, m in zip(families, mask) if m and f)


def family_holdout(
    families: Sequence[str | None],
    held_out: Iterable[str],
    seed: int = 0,
    labels: Sequence[str | Label] | None = None,
) -> SplitPlan:
    """Test on every malware of ``held_out`` plus as many random benign samples.

    Without ``labels`` a sample counts as malware when it has a family.
    """
    held = set(held_out)
    mask = _malware_mask(families, labels)
    known = sorted(malware_families(families, labels))
    unknown = held - set(known)
    if unknown:
        raise SplitError(f"unknown families {sorted(unknown)}; known families: {known}")
    if not held:
        raise SplitError("no families to hold out")

    test_malware = [i for i, f in enumerate(families) if mask[i] and f in held]
    train_malware = [i for i, f in enumerate(families) if mask[i] and f not in held]
    if not train_malware:
        raise SplitError(f"holding out {sorted(held)} leaves no malware for training")

    benign = np.flatnonzero(~mask)
    n_benign = min(len(test_malware), benign.size)
    if n_benign < len(test_malware):
        logger.warning(
            "Only %d benign samples to balance %d held-out malware", benign.size, len(test_malware)
        )
    test_benign = _rng(seed).choice(benign, size=n_benign, replace=False).tolist()

    test = sorted(test_malware + test_benign)
    test_set = set(test)
    train = [i for i in range(len(families)) if i not in test_set]
    return SplitPlan(
        kind="family_holdout",
        folds=[Fold(train=train, test=test)],
        seed=seed,
        held_out=[sorted(held)],
    )


def family_groups(
    families: Sequence[str | None],
    group_size: int = 4,
    min_samples: int = 1,
    seed: int = 0,
    labels: Sequence[str | Label] | None = None,
) -> list[list[str]]:
    """Shuffle the families with at least ``min_samples`` malware into groups.

    The groups partition the eligible families; the last group may be smaller.
    """
    if group_size < 1:
        raise SplitError(f"group_size must be >= 1, got {group_size}")
    counts = malware_families(families, labels)
    eligible = sorted(f for f, n in counts.items() if n >= min_samples)
    if not eligible:
        raise SplitError(f"no family has at least {min_samples} malware samples")
    order = _rng(seed).permutation(len(eligible))
    shuffled = [eligible[i] for i in order]
    return [sorted(shuffled[i : i + group_size]) for i in range(0, len(shuffled), group_size)]


def family_rotation(
    families: Sequence[str | None],
    group_size: int = 4,
    min_samples: int = 1,
    seed: int = 0,
    labels: Sequence[str | Label] | None = None,
) -> SplitPlan:
    """One family-holdout fold per group, so every eligible family is tested once."""
    groups = family_groups(families, group_size, min_samples, seed, labels)
    folds: list[Fold] = []
    for i, group in enumerate(groups):
        folds.extend(family_holdout(families, group, seed + i, labels).folds)
    return SplitPlan(kind="family_holdout", folds=folds, seed=seed, held_out=groups)


def restrict(plan: SplitPlan, subset: Sequence[int]) -> SplitPlan:
    """Re-express a plan computed on ``subset`` positions in original indices."""
    lookup = list(subset)
    return plan.model_copy(
        update={
            "folds": [
                Fold(train=[lookup[i] for i in f.train], test=[lookup[i] for i in f.test])
                for f in plan.folds
            ]
        }
    )
