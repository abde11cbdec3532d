"""Deterministic counter-based random number generation.

Every randomized routine in this package draws from :class:`CounterRng`,
which hashes (key, counter) pairs with the SplitMix64 finalizer.  Streams
keyed by (seed, trial_index) are independent of each other and of
execution order, so parallel sweeps reproduce bit-for-bit.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 output function."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class CounterRng:
    """Counter-mode generator keyed by an arbitrary tuple of integers.

    The key parts are folded into a 64-bit base state; each draw mixes
    base + counter * GOLDEN, so the stream is a pure function of
    (key, draw index).
    """

    __slots__ = ("_base", "_counter")

    def __init__(self, *key_parts: int):
        state = 0x1234567887654321
        for part in key_parts:
            state = _mix64(state ^ _mix64(part & _MASK64))
        self._base = state
        self._counter = 0

    def next64(self) -> int:
        self._counter += 1
        return _mix64((self._base + self._counter * _GOLDEN) & _MASK64)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        threshold = ((1 << 64) // n) * n
        while True:
            x = self.next64()
            if x < threshold:
                return x % n

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) / float(1 << 53)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, universe: int, k: int) -> list[int]:
        """k distinct integers from [0, universe), unsorted draw order.

        Rejection sampling when k is small relative to the universe,
        partial Fisher-Yates otherwise.
        """
        if not 0 <= k <= universe:
            raise ValueError(f"cannot sample {k} of {universe}")
        if 2 * k <= universe:
            seen: set[int] = set()
            out: list[int] = []
            while len(out) < k:
                x = self.below(universe)
                if x not in seen:
                    seen.add(x)
                    out.append(x)
            return out
        pool = list(range(universe))
        for i in range(k):
            j = i + self.below(universe - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
