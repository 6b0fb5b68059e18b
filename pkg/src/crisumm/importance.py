"""Phase II-B: predict how many summary slots each category deserves.

A regression fitted on a similar disaster (category fraction -> gold
summary count) is applied to the target's category fractions; the raw
predictions are clamped to availability and apportioned to integers
summing exactly to the requested summary length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import DisasterDataset, Tweet

REGRESSION_KINDS = ("linear", "ridge", "bayesian", "equal")


@dataclass(frozen=True)
class RegressionModel:
    """Fitted slope/intercept plus the hyperparameters that produced them.

    `kind="equal"` is the no-model baseline: it ignores the features
    and splits the summary length uniformly across categories.
    """

    kind: str
    slope: float | None = None
    intercept: float | None = None
    ridge_alpha: float | None = None
    prior_precision: float | None = None
    noise_precision: float | None = None
    posterior_cov: tuple[tuple[float, float], tuple[float, float]] | None = None

    def __post_init__(self) -> None:
        if self.kind not in REGRESSION_KINDS:
            raise ValueError(f"unknown regression kind {self.kind!r}")
        if self.kind == "equal":
            if self.slope is not None or self.intercept is not None:
                raise ValueError("equal-importance model has no coefficients")
        else:
            if self.slope is None or self.intercept is None:
                raise ValueError(f"{self.kind} model needs coefficients")
            if not (math.isfinite(self.slope)
                    and math.isfinite(self.intercept)):
                raise ValueError("non-finite regression coefficients")

    def predict(self, x: float) -> float:
        if self.kind == "equal":
            raise ValueError("equal-importance model does not predict; "
                             "apportion the summary length directly")
        return self.slope * x + self.intercept

    def predictive_variance(self, x: float) -> float:
        """Predictive variance at x (informational; Bayesian models only)."""
        if self.kind != "bayesian" or self.posterior_cov is None:
            raise ValueError("predictive variance requires a Bayesian model")
        phi = np.array([1.0, x])
        cov = np.array(self.posterior_cov)
        return float(1.0 / self.noise_precision + phi @ cov @ phi)


@dataclass(frozen=True)
class ImportanceVector:
    """Integer summary slots per category, summing exactly to m."""

    counts: dict[str, int]
    m: int

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("importance counts must be nonnegative")
        total = sum(self.counts.values())
        if total != self.m:
            raise ValueError(
                f"importance counts sum to {total}, expected m={self.m}"
            )


def build_training_pairs(dataset: DisasterDataset,
                         partition: Mapping[str, Sequence[Tweet]],
                         category_ids: Sequence[str],
                         ) -> list[tuple[float, float]]:
    """One (category fraction, gold count) pair per ontology category.

    The feature is the category's share of the dataset's classified
    tweets; the target is how many gold-summary tweets carry that
    category label.
    """
    if dataset.gold_summary is None:
        raise ValueError(
            f"dataset {dataset.id!r} has no gold summary; cannot build "
            f"regression training pairs"
        )
    total = sum(len(partition.get(cid, ())) for cid in category_ids)
    if total == 0:
        raise ValueError(f"dataset {dataset.id!r} has no classified tweets")
    known = set(category_ids)
    gold_counts: dict[str, int] = {}
    for _, cat_id in dataset.gold_summary:
        if cat_id not in known:
            raise ValueError(
                f"gold summary of {dataset.id!r} uses unknown category "
                f"{cat_id!r}"
            )
        gold_counts[cat_id] = gold_counts.get(cat_id, 0) + 1
    pairs = []
    for cid in sorted(category_ids):
        x = len(partition.get(cid, ())) / total
        y = float(gold_counts.get(cid, 0))
        pairs.append((x, y))
    return pairs


def fit(pairs: Sequence[tuple[float, float]], kind: str = "linear", *,
        ridge_alpha: float = 1.0, prior_precision: float = 1.0,
        noise_precision: float = 1.0) -> RegressionModel:
    """Fit a one-feature regression of the requested kind.

    linear:   ordinary least squares; zero feature variance degrades to
              slope 0 and intercept mean(y) rather than erroring.
    ridge:    least squares with an L2 penalty on the slope only.
    bayesian: posterior mean under a zero-mean Gaussian prior on both
              coefficients and Gaussian observation noise.
    equal:    no fit at all.
    """
    if kind == "equal":
        return RegressionModel(kind="equal")
    if kind not in REGRESSION_KINDS:
        raise ValueError(f"unknown regression kind {kind!r}")
    if len(pairs) < 2:
        raise ValueError(f"{kind} regression needs at least 2 pairs, "
                         f"got {len(pairs)}")
    xs = [float(x) for x, _ in pairs]
    ys = [float(y) for _, y in pairs]
    n = len(pairs)
    x_mean = math.fsum(xs) / n
    y_mean = math.fsum(ys) / n
    sxx = math.fsum((x - x_mean) ** 2 for x in xs)
    sxy = math.fsum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))

    if kind == "linear":
        if sxx == 0.0:
            return RegressionModel(kind="linear", slope=0.0, intercept=y_mean)
        slope = sxy / sxx
        return RegressionModel(kind="linear", slope=slope,
                               intercept=y_mean - slope * x_mean)

    if kind == "ridge":
        if ridge_alpha < 0.0:
            raise ValueError(f"ridge_alpha must be >= 0, got {ridge_alpha}")
        slope = sxy / (sxx + ridge_alpha) if (sxx + ridge_alpha) > 0.0 else 0.0
        return RegressionModel(kind="ridge", slope=slope,
                               intercept=y_mean - slope * x_mean,
                               ridge_alpha=ridge_alpha)

    # bayesian
    if prior_precision <= 0.0 or noise_precision <= 0.0:
        raise ValueError("prior_precision and noise_precision must be > 0")
    phi = np.column_stack([np.ones(n), np.array(xs)])
    y = np.array(ys)
    precision = prior_precision * np.eye(2) + noise_precision * phi.T @ phi
    cov = np.linalg.inv(precision)
    mean = noise_precision * cov @ phi.T @ y
    return RegressionModel(
        kind="bayesian",
        slope=float(mean[1]),
        intercept=float(mean[0]),
        prior_precision=prior_precision,
        noise_precision=noise_precision,
        posterior_cov=tuple(tuple(float(v) for v in row) for row in cov),
    )


def _apportion(quotas: Mapping[str, float], fractions: Mapping[str, float],
               available: Mapping[str, int], m: int) -> dict[str, int]:
    """Largest-remainder apportionment of m slots under availability caps.

    Each round scales the active quotas to the slots still unassigned,
    hands out the integer parts, then distributes leftovers one slot
    apiece by remainder rank (remainder desc, fraction desc, id asc).
    Categories that hit their cap drop out of later rounds, which
    redistributes their overflow by the same rule.
    """
    alloc = {cid: 0 for cid in quotas}
    remaining = m
    while remaining > 0:
        active = [cid for cid in sorted(quotas) if alloc[cid] < available[cid]]
        if not active:
            break
        total_q = math.fsum(quotas[cid] for cid in active)
        if total_q > 0.0:
            share = {cid: quotas[cid] * remaining / total_q for cid in active}
        else:
            share = {cid: remaining / len(active) for cid in active}
        for cid in active:
            portion = min(int(math.floor(share[cid])),
                          available[cid] - alloc[cid])
            alloc[cid] += portion
            remaining -= portion
        if remaining > 0:
            by_remainder = sorted(
                active,
                key=lambda cid: (-(share[cid] - math.floor(share[cid])),
                                 -fractions.get(cid, 0.0), cid),
            )
            for cid in by_remainder:
                if remaining == 0:
                    break
                if alloc[cid] < available[cid]:
                    alloc[cid] += 1
                    remaining -= 1
    return alloc


def predict_importance(model: RegressionModel,
                       target_fractions: Mapping[str, float],
                       available: Mapping[str, int],
                       m: int) -> ImportanceVector:
    """Turn raw per-category predictions into integer summary slots.

    Raw predictions are clamped to [0, available] per category and
    then apportioned so the result sums to m exactly without exceeding
    any category's tweet count.
    """
    if m < 1:
        raise ValueError(f"summary length must be >= 1, got {m}")
    categories = sorted(available)
    if not categories:
        raise ValueError("no categories to apportion over")
    total_available = sum(available[cid] for cid in categories)
    if total_available < m:
        raise ValueError(
            f"only {total_available} classified tweets available for a "
            f"summary of {m} (short by {m - total_available})"
        )
    quotas = {}
    for cid in categories:
        if model.kind == "equal":
            raw = m / len(categories)
        else:
            raw = model.predict(float(target_fractions.get(cid, 0.0)))
        quotas[cid] = min(max(raw, 0.0), float(available[cid]))
    counts = _apportion(quotas, target_fractions, available, m)
    return ImportanceVector(counts=counts, m=m)
