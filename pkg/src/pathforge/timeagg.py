"""Aggregation of hourly series into weighted typical periods.

The year is cut into candidate periods of ``steps_per_period`` consecutive
hours. Candidates are clustered with k-medoids (PAM) on per-series min-max
normalised, concatenated profiles; the medoids become the typical periods
and the cluster sizes their weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

HOURS_PER_YEAR = 8760


@dataclass(frozen=True)
class TypicalPeriodSet:
    """Typical periods with weights and the hour mapping.

    Attributes
    ----------
    weights : ndarray of int, shape (n_periods,)
        Number of candidate periods each typical period represents.
    values : dict of str to ndarray, shape (n_periods, steps_per_period)
    hour_map : ndarray of int, shape (8760, 2)
        ``(period, step)`` for every original hour.
    medoids : ndarray of int
        Candidate-period index of each typical period.
    """

    n_periods: int
    steps_per_period: int
    weights: np.ndarray
    values: Mapping[str, np.ndarray]
    hour_map: np.ndarray
    medoids: np.ndarray

    @property
    def series_ids(self) -> list[str]:
        return sorted(self.values)

    def value(self, series: str, period: int, step: int) -> float:
        return float(self.values[series][period, step])

    def steps(self):
        """Iterate ``(period, step)`` pairs in canonical order."""
        for k in range(self.n_periods):
            for s in range(self.steps_per_period):
                yield k, s

    def expand(self, typical: np.ndarray) -> np.ndarray:
        """Map a (period, step) array back onto the 8760 original hours."""
        typical = np.asarray(typical)
        return typical[self.hour_map[:, 0], self.hour_map[:, 1]]

    def hours_represented(self) -> np.ndarray:
        """Original hours mapped to each (period, step), remainder hours included."""
        counts = np.zeros((self.n_periods, self.steps_per_period), dtype=np.int64)
        np.add.at(counts, (self.hour_map[:, 0], self.hour_map[:, 1]), 1)
        return counts

    def to_dict(self) -> dict:
        return {
            "n_periods": self.n_periods,
            "steps_per_period": self.steps_per_period,
            "weights": [int(w) for w in self.weights],
            "medoids": [int(m) for m in self.medoids],
            "values": {k: self.values[k].tolist() for k in self.series_ids},
            "hour_map": self.hour_map.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "TypicalPeriodSet":
        return cls(
            n_periods=int(d["n_periods"]),
            steps_per_period=int(d["steps_per_period"]),
            weights=np.asarray(d["weights"], dtype=np.int64),
            values={k: np.asarray(v, dtype=float) for k, v in d["values"].items()},
            hour_map=np.asarray(d["hour_map"], dtype=np.int64).reshape(-1, 2),
            medoids=np.asarray(d["medoids"], dtype=np.int64),
        )


def _normalise(mat: np.ndarray) -> np.ndarray:
    lo = mat.min(axis=1, keepdims=True)
    span = mat.max(axis=1, keepdims=True) - lo
    span[span == 0] = 1.0
    return (mat - lo) / span


def _pairwise(x: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(d2)


def _build(dist: np.ndarray, k: int) -> list[int]:
    """Greedy PAM BUILD; ties go to the lowest index."""
    first = int(np.argmin(dist.sum(axis=1)))
    medoids = [first]
    nearest = dist[first].copy()
    for _ in range(1, k):
        gain = np.maximum(nearest[None, :] - dist, 0.0).sum(axis=1)
        gain[medoids] = -1.0
        best = int(np.argmax(gain))
        medoids.append(best)
        np.minimum(nearest, dist[best], out=nearest)
    return medoids


def _swap(dist: np.ndarray, medoids: list[int], max_iter: int = 200) -> list[int]:
    """PAM SWAP with best-improvement moves until no swap lowers the cost."""
    n = dist.shape[0]
    med = list(medoids)
    for _ in range(max_iter):
        dm = dist[med]                       # (k, n)
        order = np.argsort(dm, axis=0, kind="stable")
        d1 = dm[order[0], np.arange(n)]
        d2 = dm[order[1], np.arange(n)] if len(med) > 1 else np.full(n, np.inf)
        cost = d1.sum()
        best_delta, best_move = -1e-12 * max(cost, 1.0), None
        for i in range(len(med)):
            # distance to nearest remaining medoid when medoid i is removed
            rest = np.where(order[0] == i, d2, d1)
            new_cost = np.minimum(rest[None, :], dist).sum(axis=1)
            new_cost[med] = np.inf
            h = int(np.argmin(new_cost))
            delta = new_cost[h] - cost
            if delta < best_delta:
                best_delta, best_move = delta, (i, h)
        if best_move is None:
            break
        med[best_move[0]] = best_move[1]
    return med


def _cost(dist: np.ndarray, med: list[int]) -> float:
    return float(dist[med].min(axis=0).sum())


def _assign(dist_to_medoids: np.ndarray, medoids: np.ndarray) -> np.ndarray:
    """Nearest medoid per candidate, lowest index on ties, medoids to themselves."""
    labels = np.argmin(dist_to_medoids, axis=0)
    labels[medoids] = np.arange(len(medoids))
    return labels


def aggregate(series: Mapping[str, np.ndarray], n_periods: int = 6, steps_per_period: int = 6,
              seed: int = 0, restarts: int = 0) -> TypicalPeriodSet:
    """Cluster the year into ``n_periods`` typical periods.

    Parameters
    ----------
    series : mapping of str to array_like
        Hourly series of length 8760.
    n_periods, steps_per_period : int
    seed : int
        Seeds the random initialisations used when ``restarts > 0``. The
        greedy BUILD start is always tried and wins ties, so the default
        result does not depend on the seed.
    restarts : int
        Extra random PAM starts; the lowest-cost clustering is kept.

    Returns
    -------
    TypicalPeriodSet
    """
    if n_periods < 1 or steps_per_period < 1:
        raise ValueError("n_periods and steps_per_period must be positive")
    ids = sorted(series)
    if not ids:
        raise ValueError("no series to aggregate")
    mat = np.empty((len(ids), HOURS_PER_YEAR))
    for i, sid in enumerate(ids):
        arr = np.asarray(series[sid], dtype=float)
        if arr.shape != (HOURS_PER_YEAR,):
            raise ValueError(f"series {sid}: expected {HOURS_PER_YEAR} values, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"series {sid}: non-finite values")
        mat[i] = arr
    k = steps_per_period
    n_cand = HOURS_PER_YEAR // k
    if n_cand < n_periods:
        raise ValueError("more typical periods than candidate periods")
    usable = n_cand * k
    norm = _normalise(mat)
    # candidate features: (n_cand, n_series * k)
    feats = norm[:, :usable].reshape(len(ids), n_cand, k).transpose(1, 0, 2).reshape(n_cand, -1)

    if n_periods == n_cand:
        medoids = np.arange(n_cand)
        labels = np.arange(n_cand)
    else:
        dist = _pairwise(feats)
        med = _swap(dist, _build(dist, n_periods))
        best = (_cost(dist, med), med)
        rng = np.random.default_rng(seed)
        for _ in range(restarts):
            start = sorted(rng.choice(n_cand, size=n_periods, replace=False).tolist())
            cand = _swap(dist, start)
            c = _cost(dist, cand)
            if c < best[0] - 1e-12 * max(best[0], 1.0):
                best = (c, cand)
        medoids = np.array(sorted(best[1]), dtype=np.int64)
        labels = _assign(dist[medoids], medoids)

    weights = np.bincount(labels, minlength=n_periods).astype(np.int64)
    hour_map = np.empty((HOURS_PER_YEAR, 2), dtype=np.int64)
    hours = np.arange(usable)
    hour_map[:usable, 0] = labels[hours // k]
    hour_map[:usable, 1] = hours % k
    rem = HOURS_PER_YEAR - usable
    if rem:
        tail = norm[:, usable:]                                  # (S, rem)
        heads = norm[:, :usable].reshape(len(ids), n_cand, k)[:, medoids, :rem]
        d = ((heads - tail[:, None, :]) ** 2).sum(axis=(0, 2))
        nearest = int(np.argmin(d))
        hour_map[usable:, 0] = nearest
        hour_map[usable:, 1] = np.arange(rem)

    values = {}
    for i, sid in enumerate(ids):
        blocks = mat[i, :usable].reshape(n_cand, k)
        values[sid] = blocks[medoids].copy()
    return TypicalPeriodSet(n_periods, k, weights, values, hour_map, medoids)


def reconstruction_error(original: Mapping[str, np.ndarray], tps: TypicalPeriodSet) -> dict[str, float]:
    """Range-normalised RMS error of each series after expansion."""
    out = {}
    for sid, arr in original.items():
        arr = np.asarray(arr, dtype=float)
        rebuilt = tps.expand(tps.values[sid])
        span = arr.max() - arr.min()
        rms = float(np.sqrt(np.mean((arr - rebuilt) ** 2)))
        out[sid] = rms / span if span > 0 else 0.0
    return out


def annual_total(tps: TypicalPeriodSet, series: str) -> float:
    """Weighted annual sum of a series over the typical periods."""
    return float((tps.values[series] * tps.weights[:, None]).sum())
