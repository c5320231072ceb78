"""Symmetric-group machinery: permutations, cycles, conjugation, rencontres numbers.

Everything is 0-based internally; 1-based labels appear only in rendered text.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import NoConjugatorError

MAX_ENUM_N = 8

# Canonical cycle decomposition: each cycle starts at its smallest element,
# cycles sorted by smallest element, fixed points kept as length-1 cycles.
CycleDecomposition = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0..n-1} stored as its image tuple: images[i] = sigma(i)."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection of 0..{len(self.images) - 1}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> "Permutation":
        """Build a permutation from (not necessarily complete) disjoint cycles."""
        images = list(range(n))
        seen = set()
        for cycle in cycles:
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if a in seen:
                    raise ValueError(f"cycles are not disjoint at element {a}")
                seen.add(a)
                images[a] = b
        return cls(tuple(images))

    def compose(self, other: "Permutation") -> "Permutation":
        """Return self∘other, i.e. i -> self(other(i))."""
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> CycleDecomposition:
        """Canonical cycle decomposition covering all of {0..n-1}."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cycle.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cycle))
        return tuple(out)

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted (descending) multiset of cycle lengths; labels the conjugacy class."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.images) if i == j)

    def moved(self) -> int:
        return self.n - len(self.fixed_points())

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def to_json(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        # 1-based cycle notation for humans
        parts = ["(" + " ".join(str(i + 1) for i in c) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) if parts else "id"


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """Yield all n! permutations in lexicographic order of their image tuples."""
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"n must be in 1..{MAX_ENUM_N}, got {n}")
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


def cycle_partition(sigma: Permutation):
    """The set partition of {0..n-1} whose cells are the orbits of sigma."""
    from .partitions import SetPartition

    return SetPartition.of(sigma.n, sigma.cycles())


def conjugate(sigma: Permutation, nu: Permutation) -> Permutation:
    """Return nu∘sigma∘nu^{-1}."""
    if sigma.n != nu.n:
        raise ValueError(f"size mismatch: {sigma.n} vs {nu.n}")
    return nu.compose(sigma).compose(nu.inverse())


def connecting_conjugator(sigma: Permutation, tau: Permutation) -> Permutation:
    """Find nu with nu∘sigma∘nu^{-1} = tau.

    Exists iff the two cycle structures match; built by aligning the cycles
    of equal length element by element.
    """
    if sigma.n != tau.n:
        raise ValueError(f"size mismatch: {sigma.n} vs {tau.n}")
    if sigma.cycle_type() != tau.cycle_type():
        raise NoConjugatorError(
            f"cycle types differ: {sigma.cycle_type()} vs {tau.cycle_type()}"
        )
    key = lambda c: (len(c), c)
    s_cycles = sorted(sigma.cycles(), key=key)
    t_cycles = sorted(tau.cycles(), key=key)
    images = [0] * sigma.n
    for sc, tc in zip(s_cycles, t_cycles):
        for a, b in zip(sc, tc):
            images[a] = b
    nu = Permutation(tuple(images))
    assert conjugate(sigma, nu) == tau
    return nu


@lru_cache(maxsize=None)
def _derangements(k: int) -> int:
    if k == 0:
        return 1
    if k == 1:
        return 0
    return (k - 1) * (_derangements(k - 1) + _derangements(k - 2))


def rencontres(n: int, j: int) -> int:
    """Number of permutations of n elements with exactly j fixed points."""
    if not (0 <= j <= n <= 12):
        raise ValueError(f"need 0 <= j <= n <= 12, got n={n}, j={j}")
    return math.comb(n, j) * _derangements(n - j)
