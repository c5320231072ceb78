"""Generalized indistinguishability spectra and their transformations.

The spectrum of an n-photon state is the map sigma -> M_sigma over all of
S_n; it carries everything photocounting can resolve. Sign conventions are
anchored so that the triad-phase state has M_(123) = (1 + e^{iφ})/4: for a
pure product, M_sigma = prod_i <phi_i | phi_sigma(i)>, equivalently one
trace of the ordered density-matrix product per cycle, taken in traversal
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .partitions import SetPartition, refines
from .states import Mixture, ProductState, State
from .symgroup import Permutation, cycle_partition, enumerate_permutations

ORBIT_TOLERANCE = 1e-9

MAX_SPECTRUM_N = 8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Dense map sigma -> M_sigma over all n! permutations."""

    n: int
    values: Mapping[Permutation, complex]

    def __post_init__(self):
        if len(self.values) != math.factorial(self.n):
            raise ValueError(
                f"spectrum must cover all {math.factorial(self.n)} permutations, "
                f"got {len(self.values)}"
            )

    def value(self, sigma: Permutation) -> complex:
        return self.values[sigma]

    @property
    def m_id(self) -> complex:
        return self.values[Permutation.identity(self.n)]

    def permutations(self) -> list[Permutation]:
        return list(enumerate_permutations(self.n))

    def to_json(self) -> list[dict]:
        return [
            {"sigma": s.to_json(), "re": v.real, "im": v.imag}
            for s, v in sorted(self.values.items(), key=lambda kv: kv[0].images)
        ]


def ideal_spectrum(n: int) -> Spectrum:
    return Spectrum(n, {s: 1.0 + 0.0j for s in enumerate_permutations(n)})


def _cycle_value_pure(gram: np.ndarray, sigma: Permutation) -> complex:
    acc = 1.0 + 0.0j
    for i, j in enumerate(sigma.images):
        acc *= gram[i, j]
    return acc


def _spectrum_of_product(state: ProductState) -> dict[Permutation, complex]:
    n = state.n
    if state.is_pure:
        gram = state.gram()
        return {s: _cycle_value_pure(gram, s) for s in enumerate_permutations(n)}

    # Separable mixed product: one trace of the ordered matrix product per
    # cycle, multiplied over cycles. Cached per traversal-ordered cycle.
    rhos = [p.matrix for p in state.photons]
    cache: dict[tuple[int, ...], complex] = {}

    def cycle_trace(cycle: tuple[int, ...]) -> complex:
        if cycle not in cache:
            prod = rhos[cycle[0]]
            for i in cycle[1:]:
                prod = prod @ rhos[i]
            cache[cycle] = complex(np.trace(prod))
        return cache[cycle]

    out = {}
    for sigma in enumerate_permutations(n):
        acc = 1.0 + 0.0j
        for cycle in sigma.cycles():
            acc *= cycle_trace(cycle)
        out[sigma] = acc
    return out


def spectrum_of(state: State) -> Spectrum:
    """Compute M_sigma for every permutation of the input photons."""
    if state.n > MAX_SPECTRUM_N:
        raise ValueError(f"n={state.n} exceeds the dense-spectrum bound {MAX_SPECTRUM_N}")
    if isinstance(state, Mixture):
        acc: dict[Permutation, complex] = {
            s: 0.0 + 0.0j for s in enumerate_permutations(state.n)
        }
        for w, comp in state.components:
            for s, v in _spectrum_of_product(comp).items():
                acc[s] += w * v
        return Spectrum(state.n, acc)
    return Spectrum(state.n, _spectrum_of_product(state))


def orbit_classes(n: int) -> dict[SetPartition, list[Permutation]]:
    """Permutations grouped by the partition their cycles induce."""
    classes: dict[SetPartition, list[Permutation]] = {}
    for sigma in enumerate_permutations(n):
        classes.setdefault(cycle_partition(sigma), []).append(sigma)
    return classes


@dataclass(frozen=True)
class OrbitInvarianceReport:
    invariant: bool
    max_deviation: float
    worst_pair: tuple[Permutation, Permutation] | None

    def __bool__(self) -> bool:
        return self.invariant


def is_orbit_invariant(spec: Spectrum, tol: float = ORBIT_TOLERANCE) -> OrbitInvarianceReport:
    """Check M_sigma = M_tau whenever sigma and tau induce the same partition."""
    worst = 0.0
    worst_pair = None
    for members in orbit_classes(spec.n).values():
        if len(members) < 2:
            continue
        vals = np.array([spec.values[s] for s in members])
        # exact pairwise diameter, chunked to bound memory on big classes
        for lo in range(0, len(members), 256):
            hi = min(lo + 256, len(members))
            diffs = np.abs(vals[lo:hi, None] - vals[None, :])
            k = int(np.argmax(diffs))
            a, b = divmod(k, len(members))
            if diffs[a, b] > worst:
                worst = float(diffs[a, b])
                worst_pair = (members[lo + a], members[b])
    return OrbitInvarianceReport(worst <= tol, worst, worst_pair)


def class_reduce(spec: Spectrum) -> dict[SetPartition, complex]:
    """Arithmetic mean of M over each orbit class, keyed by partition."""
    out = {}
    for part, members in orbit_classes(spec.n).items():
        out[part] = sum(spec.values[s] for s in members) / len(members)
    return out


def spectrum_from_class_values(
    n: int, class_values: Mapping[SetPartition, complex]
) -> Spectrum:
    """Expand per-partition values into a dense (orbit-invariant) spectrum."""
    return Spectrum(
        n, {s: complex(class_values[cycle_partition(s)]) for s in enumerate_permutations(n)}
    )


def mask_spectrum(spec: Spectrum, partition: SetPartition) -> Spectrum:
    """The partitioning condition: keep M_sigma where Π_sigma ⪯ partition, zero elsewhere."""
    out = {}
    for sigma, v in spec.values.items():
        out[sigma] = v if refines(partition, cycle_partition(sigma)) else 0.0 + 0.0j
    return Spectrum(spec.n, out)


def twirl(spec: Spectrum) -> Spectrum:
    """Average over random mode permutations: M'_sigma = (1/n!) Σ_tau M_{tau sigma tau^-1}.

    Conjugation sweeps the full conjugacy class uniformly, so the result is
    the class mean and depends only on the cycle-length multiset.
    """
    buckets: dict[tuple[int, ...], list[Permutation]] = {}
    for sigma in enumerate_permutations(spec.n):
        buckets.setdefault(sigma.cycle_type(), []).append(sigma)
    means = {
        t: sum(spec.values[s] for s in members) / len(members)
        for t, members in buckets.items()
    }
    return Spectrum(
        spec.n, {s: means[s.cycle_type()] for s in enumerate_permutations(spec.n)}
    )


def strict_projection(spec: Spectrum) -> Spectrum:
    """Least destructive projection onto orbit invariance.

    M'_sigma = (1/prod_i (|sigma_i| - 1)!) * Σ_{Π_tau = Π_sigma} M_tau. The
    permutations sharing a cycle partition are exactly the independent
    re-orderings of each cell as one cycle, so the normalizer equals the
    class size and the projection is the plain class mean.
    """
    out: dict[Permutation, complex] = {}
    for members in orbit_classes(spec.n).values():
        lengths = members[0].cycle_type()
        normalizer = math.prod(math.factorial(l - 1) for l in lengths)
        assert normalizer == len(members)
        mean = sum(spec.values[s] for s in members) / normalizer
        for s in members:
            out[s] = mean
    return Spectrum(spec.n, out)


def gi_part(spec: Spectrum) -> complex:
    """Genuine indistinguishability, partition view: mean of M over maximal cycles."""
    full = [s for s in enumerate_permutations(spec.n) if len(s.cycles()) == 1]
    return sum(spec.values[s] for s in full) / math.factorial(spec.n - 1)


def gi_sym(spec: Spectrum) -> float:
    """Genuine indistinguishability, symmetric-subspace view: (1/n!) Σ_sigma M_sigma."""
    total = sum(spec.values.values()) / math.factorial(spec.n)
    if abs(total.imag) > 1e-10:
        raise ValueError(f"gi_sym has imaginary residue {total.imag:.3e}")
    return float(total.real)
