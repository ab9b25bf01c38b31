"""Deterministic synthetic hourly profiles for the bundled datasets.

The real demand and weather profiles are unpublished; these series only
need plausible shapes: seasonal and diurnal cycles, weather persistence,
and wind and sun that are not always there.
"""

from __future__ import annotations

import numpy as np

HOURS = 8760


def _ar1(rng: np.random.Generator, n: int, phi: float, sigma: float) -> np.ndarray:
    eps = rng.normal(0.0, sigma, n)
    out = np.empty(n)
    x = 0.0
    for i in range(n):
        x = phi * x + eps[i]
        out[i] = x
    return out


def synthetic_profiles(seed: int = 0) -> dict[str, np.ndarray]:
    """Hourly ``wind`` and ``pv`` availability and normalised demand shapes.

    Availabilities lie in [0, 1]; ``elec_demand`` and ``heat_demand`` are
    positive shapes to be scaled to annual totals.
    """
    rng = np.random.default_rng(seed)
    h = np.arange(HOURS)
    day = h / 24.0
    hour = h % 24
    season = np.cos(2 * np.pi * (day - 15) / 365.0)          # +1 mid-January

    weather = _ar1(rng, HOURS, 0.97, 0.25)
    wind = 0.32 + 0.12 * season + 0.22 * weather
    wind = np.clip(wind, 0.02, 0.95)

    elevation = np.sin(np.pi * (hour - 6) / 12.0)
    daylight = np.clip(elevation, 0.0, None) * (0.55 - 0.35 * season)
    clouds = np.clip(0.75 + 0.25 * _ar1(rng, HOURS, 0.9, 0.35), 0.15, 1.0)
    pv = np.clip(daylight * clouds, 0.0, 0.9)

    diurnal = 1.0 + 0.18 * np.sin(np.pi * (hour - 7) / 12.0) * (hour >= 7) * (hour <= 22)
    elec = (1.0 + 0.12 * season) * diurnal * (1.0 + 0.03 * rng.standard_normal(HOURS))
    heat = np.clip(1.0 + 1.1 * season + 0.15 * np.sin(np.pi * (hour - 5) / 12.0), 0.15, None)
    return {"wind": np.round(wind, 6), "pv": np.round(pv, 6),
            "elec_demand": np.round(elec, 6), "heat_demand": np.round(heat, 6)}
