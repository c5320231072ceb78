"""Shared construction helpers for the test suite."""

import numpy as np

from partmix.partitions import PartitionDistribution, enumerate_partitions
from partmix.sampling import haar_unitary
from partmix.states import mixed_product, pure_product


def random_pure_state(rng, n, d):
    kets = []
    for _ in range(n):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        kets.append(v / np.linalg.norm(v))
    return pure_product(kets)


def random_mixed_state(rng, n, d):
    rhos = []
    for _ in range(n):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = a @ a.conj().T
        rhos.append(rho / np.trace(rho))
    return mixed_product(rhos)


def random_unitary(rng, m):
    return haar_unitary(m, rng)


def random_nonneg_distribution(rng, n):
    parts = enumerate_partitions(n)
    w = rng.random(len(parts))
    w /= w.sum()
    return PartitionDistribution.of(n, dict(zip(parts, w)))
