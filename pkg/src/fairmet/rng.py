"""Seedable 64-bit PRNG used for every reproducible decision in the package.

The generator is SplitMix64 (Steele, Lea & Flood's mixing function), chosen
because the whole algorithm fits in a dozen lines and can be re-implemented
bit-for-bit in any language.  Mask plans, bootstrap draws, fault injection
and per-configuration benchmark seeds all derive from it, so two runs with
the same seed produce identical artifacts.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream.

    next_u64 advances the state by the golden-gamma constant and applies the
    standard xor-shift/multiply finalizer:

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    All arithmetic is modulo 2**64.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def next_below(self, n: int) -> int:
        """Uniform-ish integer in [0, n). Plain modulo; the bias at 64 bits
        is unmeasurable for every n used here and keeps replay trivial."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def next_float(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, drawing indices high-to-low."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]


def mix_seed(master_seed: int, label: str) -> int:
    """Derive a child seed from a master seed and a text label.

    FNV-1a over the UTF-8 bytes of the label, xored into the master seed and
    passed through one SplitMix64 step.  Used for per-configuration and
    per-tree seeds so parallel work stays reproducible.
    """
    h = 0xCBF29CE484222325
    for b in label.encode("utf-8"):
        h ^= b
        h = (h * 0x100000001B3) & _MASK64
    return SplitMix64((master_seed & _MASK64) ^ h).next_u64()
