"""Deterministic sampling of paths compatible with a forecasting system.

The generator is splitmix64, fixed here so that a given seed reproduces the
same bits on every run of the same release.  Each step picks a precise
probability inside the current interval forecast (an endpoint, the
midpoint, or a uniformly drawn point) and then draws the bit exactly by
comparing a 64-bit word against the scaled probability.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .forecast import ForecastCursor, ForecastingSystem, IntervalForecast

_MASK = (1 << 64) - 1
_SCALE = 1 << 64

SELECTORS = ("low", "high", "mid", "uniform")


def splitmix64(state: int) -> tuple[int, int]:
    """Advance the splitmix64 state; returns (new_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class BitSampler:
    """Draws bits along a path, one situation at a time."""

    def __init__(self, selector: str, seed: int):
        if selector not in SELECTORS:
            raise DomainError(f"unknown selector {selector!r}")
        self.selector = selector
        self._state = seed & _MASK

    def _word(self) -> int:
        self._state, word = splitmix64(self._state)
        return word

    def _pick_probability(self, forecast: IntervalForecast) -> Fraction:
        if self.selector == "low":
            return forecast.lo
        if self.selector == "high":
            return forecast.hi
        if self.selector == "mid":
            return (forecast.lo + forecast.hi) / 2
        spread = forecast.hi - forecast.lo
        return forecast.lo + spread * Fraction(self._word(), _SCALE)

    def draw(self, forecast: IntervalForecast) -> str:
        p = self._pick_probability(forecast)
        return "1" if Fraction(self._word(), _SCALE) < p else "0"


def sample_path(fs: ForecastingSystem, selector: str, n: int, seed: int) -> str:
    """n bits drawn under a compatible precise system chosen by ``selector``."""
    sampler = BitSampler(selector, seed)
    cursor = ForecastCursor(fs)
    bits = []
    for _ in range(n):
        bit = sampler.draw(cursor.current())
        bits.append(bit)
        cursor.push(bit)
    return "".join(bits)
