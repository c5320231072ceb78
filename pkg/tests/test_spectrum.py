import math

import numpy as np
import pytest

from helpers import random_pure_state, random_mixed_state, random_nonneg_distribution
from partmix.partitions import SetPartition, forward_map, stabilizer_size
from partmix.spectrum import (
    Spectrum,
    class_reduce,
    gi_part,
    gi_sym,
    ideal_spectrum,
    is_orbit_invariant,
    spectrum_from_class_values,
    spectrum_of,
    strict_projection,
    twirl,
)
from partmix.states import (
    Mixture,
    ideal_state,
    obb_state,
    partition_state,
    triad_phase_state,
)
from partmix.symgroup import Permutation, enumerate_permutations, rencontres


def three_cycle():
    return Permutation.from_cycles(3, [(0, 1, 2)])


def test_ideal_spectrum_all_ones():
    spec = spectrum_of(ideal_state(4))
    assert all(v == pytest.approx(1.0) for v in spec.values.values())


def test_conjugate_symmetry_random_states():
    rng = np.random.default_rng(21)
    for n in (2, 3, 4, 5):
        spec = spectrum_of(random_pure_state(rng, n, 3))
        for sigma in enumerate_permutations(n):
            assert spec.value(sigma.inverse()) == pytest.approx(
                np.conj(spec.value(sigma)), abs=1e-12
            )


def test_magnitude_bounded_by_identity():
    rng = np.random.default_rng(22)
    spec = spectrum_of(random_mixed_state(rng, 4, 3))
    for v in spec.values.values():
        assert abs(v) <= abs(spec.m_id) + 1e-10


def test_pure_gram_equals_trace_formula():
    # the same state expressed with kets and with rank-1 density matrices
    rng = np.random.default_rng(23)
    state = random_pure_state(rng, 4, 3)
    from partmix.states import mixed_product

    as_mixed = mixed_product([np.outer(k, k.conj()) for k in state.kets()])
    s_pure, s_mixed = spectrum_of(state), spectrum_of(as_mixed)
    for sigma in enumerate_permutations(4):
        assert s_pure.value(sigma) == pytest.approx(s_mixed.value(sigma), abs=1e-12)


def test_mixture_spectrum_is_weighted_sum():
    a, b = ideal_state(2), obb_state(2, 0.3)
    mix = Mixture(2, ((0.25, a), (0.75, b)))
    sm = spectrum_of(mix)
    sa, sb = spectrum_of(a), spectrum_of(b)
    for sigma in enumerate_permutations(2):
        assert sm.value(sigma) == pytest.approx(
            0.25 * sa.value(sigma) + 0.75 * sb.value(sigma), abs=1e-14
        )


def test_spectrum_requires_complete_map():
    with pytest.raises(ValueError):
        Spectrum(3, {Permutation.identity(3): 1.0})


def test_orbit_invariance_obb_true():
    report = is_orbit_invariant(spectrum_of(obb_state(3, 0.6)))
    assert report
    assert report.max_deviation < 1e-12


def test_orbit_invariance_triad_false():
    report = is_orbit_invariant(spectrum_of(triad_phase_state(np.pi / 2)))
    assert not report
    assert report.max_deviation == pytest.approx(0.5, abs=1e-12)
    a, b = report.worst_pair
    assert {a, b} == {three_cycle(), three_cycle().inverse()}


def test_orbit_invariance_partition_states():
    for cells in ([[0, 1], [2]], [[0, 1, 2]], [[0], [1], [2]]):
        spec = spectrum_of(partition_state(SetPartition.of(3, cells)))
        assert is_orbit_invariant(spec)


def test_twirl_enforces_invariance_and_class_averages():
    phi = 1.1
    spec = spectrum_of(triad_phase_state(phi))
    tw = twirl(spec)
    assert is_orbit_invariant(tw, tol=1e-12)
    expected_3cycle = (1 + math.cos(phi)) / 4
    expected_swap = (3 + math.cos(phi)) / 6
    assert tw.value(three_cycle()) == pytest.approx(expected_3cycle, abs=1e-12)
    assert tw.value(Permutation.from_cycles(3, [(0, 1)])) == pytest.approx(
        expected_swap, abs=1e-12
    )


def test_twirl_fixes_class_constant_spectra():
    spec = spectrum_of(obb_state(4, 0.4))  # depends only on the cycle type
    tw = twirl(spec)
    for sigma in enumerate_permutations(4):
        assert tw.value(sigma) == pytest.approx(spec.value(sigma), abs=1e-14)


def test_twirl_and_projection_idempotent_preserve_identity():
    rng = np.random.default_rng(24)
    for n in (2, 3, 4):
        spec = spectrum_of(random_pure_state(rng, n, 3))
        for op in (twirl, strict_projection):
            once = op(spec)
            twice = op(once)
            assert once.m_id == pytest.approx(spec.m_id, abs=1e-14)
            for sigma in enumerate_permutations(n):
                assert twice.value(sigma) == pytest.approx(once.value(sigma), abs=1e-14)


def test_strict_projection_triad():
    phi = 0.7
    spec = spectrum_of(triad_phase_state(phi))
    proj = strict_projection(spec)
    assert is_orbit_invariant(proj, tol=1e-12)
    # the two 3-cycles share a partition and average to (1 + cos phi)/4
    assert proj.value(three_cycle()) == pytest.approx((1 + math.cos(phi)) / 4, abs=1e-12)
    # transpositions sit alone in their class: untouched
    swap = Permutation.from_cycles(3, [(0, 1)])
    assert proj.value(swap) == pytest.approx(spec.value(swap), abs=1e-14)


def test_strict_projection_fixes_partition_states():
    spec = spectrum_of(partition_state(SetPartition.of(3, [[0, 1], [2]])))
    proj = strict_projection(spec)
    for sigma in enumerate_permutations(3):
        assert proj.value(sigma) == pytest.approx(spec.value(sigma), abs=1e-14)


def test_twirl_is_broader_than_strict_projection():
    # a partition state is already orbit invariant, so strict projection
    # fixes it, but twirling still averages across same-shape partitions
    spec = spectrum_of(partition_state(SetPartition.of(3, [[0, 1], [2]])))
    tw = twirl(spec)
    swap = Permutation.from_cycles(3, [(0, 1)])
    assert spec.value(swap) == pytest.approx(1.0)
    assert tw.value(swap) == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert is_orbit_invariant(tw, tol=1e-15)


def test_twirl_preserves_gi_part():
    rng = np.random.default_rng(25)
    for n in (2, 3, 4):
        spec = spectrum_of(random_pure_state(rng, n, 2))
        assert gi_part(twirl(spec)) == pytest.approx(gi_part(spec), abs=1e-12)


def test_obb_double_transposition_value():
    # (12)(34) moves four points: one factor of x per moved photon
    spec = spectrum_of(obb_state(4, 0.3))
    sigma = Permutation.from_cycles(4, [(0, 1), (2, 3)])
    assert spec.value(sigma) == pytest.approx(0.3**4, abs=1e-12)


def test_gi_part_obb_power_law():
    for n in (2, 3, 4, 5, 6):
        for x in (0.0, 0.3, 0.8, 1.0):
            assert gi_part(spectrum_of(obb_state(n, x))) == pytest.approx(x**n, abs=1e-12)


def test_gi_ideal():
    spec = ideal_spectrum(4)
    assert gi_part(spec) == pytest.approx(1.0)
    assert gi_sym(spec) == pytest.approx(1.0)


def test_gi_singly_distinguishable():
    for n in (3, 4, 5, 6):
        lam = SetPartition.of(n, [[0]] + [[*range(1, n)]])
        spec = spectrum_of(partition_state(lam))
        assert gi_part(spec) == pytest.approx(0.0, abs=1e-14)
        assert gi_sym(spec) == pytest.approx(1.0 / n, abs=1e-14)


def test_gi_sym_partition_states_stabilizer_fraction():
    for cells in ([[0, 1], [2, 3]], [[0, 1, 2], [3]], [[0], [1], [2], [3]]):
        lam = SetPartition.of(4, cells)
        spec = spectrum_of(partition_state(lam))
        assert gi_sym(spec) == pytest.approx(
            stabilizer_size(lam) / math.factorial(4), abs=1e-14
        )


def test_gi_sym_obb_two_routes():
    n, x = 6, 0.8
    spec = spectrum_of(obb_state(n, x))
    direct = gi_sym(spec)
    via_rencontres = sum(
        rencontres(n, j) * x ** (n - j) for j in range(n + 1)
    ) / math.factorial(n)
    assert direct == pytest.approx(via_rencontres, abs=1e-10)
    approx = x**n * math.exp(1 / x - 1)
    print(f"gi_sym(obb n={n}, x={x}) = {direct:.6f}; coarse closed form {approx:.6f}")


def test_gi_bound_for_nonnegative_distributions():
    rng = np.random.default_rng(26)
    for n in (2, 3, 4, 5, 6):
        for _ in range(5):
            dist = random_nonneg_distribution(rng, n)
            spec = spectrum_from_class_values(n, forward_map(dist))
            assert gi_part(spec).real <= gi_sym(spec) + 1e-12


def test_class_reduce_matches_forward_map():
    dist = random_nonneg_distribution(np.random.default_rng(27), 4)
    spec = spectrum_from_class_values(4, forward_map(dist))
    reduced = class_reduce(spec)
    for p, v in forward_map(dist).items():
        assert reduced[p] == pytest.approx(v, abs=1e-12)
