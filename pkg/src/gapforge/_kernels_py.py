"""Pure-Python/NumPy fallback for the hot covering kernels.

Must stay result-identical to the compiled versions in _kernels.pyx; the
test suite compares them element for element.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


class ResidueScorer:
    """Scores residue classes of candidate primes against survivor values."""

    def __init__(self, max_q: int):
        self.max_q = max_q

    def best_class(self, values: np.ndarray, q: int) -> tuple[int, int]:
        """(count, c): the largest class of values (mod q), smallest c on ties."""
        counts = np.bincount(values % q)
        count = int(counts.max())
        c = int(counts.argmax())  # argmax takes the first maximum: smallest c
        return count, c

    def score_all(self, values: np.ndarray, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """best_class for every prime at once: (counts, classes) arrays."""
        n = primes.shape[0]
        counts = np.empty(n, dtype=np.int64)
        classes = np.empty(n, dtype=np.int64)
        for i in range(n):
            counts[i], classes[i] = self.best_class(values, int(primes[i]))
        return counts, classes


def mark_residue_class(flags: bytearray, upper: int, p: int, residue: int) -> None:
    """Clear flags[n] for every n in [1, upper] with n ≡ residue (mod p)."""
    start = residue if residue >= 1 else p
    if start <= upper:
        flags[start::p] = b"\x00" * ((upper - start) // p + 1)
