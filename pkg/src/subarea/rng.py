"""SplitMix64 generator and path-derived seeding.

The generator is tiny and fully specified so that a given seed produces the
same stream on every platform and every numpy release:

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output = z ^ (z >> 31)

Floats in [0, 1) take the top 53 bits of one output.

Tree nodes get their own seed from the root seed and the node's path
(a string of ``L``/``R`` steps, ``""`` for the root)::

    h = mix64(seed + GOLDEN)
    for step in path: h = mix64(h ^ (1 if step == "L" else 2))
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int = 0):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        return min(int(self.random() * n), n - 1)


def derive_seed(seed: int, path: str) -> int:
    h = mix64(seed + GOLDEN)
    for step in path:
        if step not in "LR":
            raise ValueError(f"bad path step {step!r}")
        h = mix64(h ^ (1 if step == "L" else 2))
    return h
