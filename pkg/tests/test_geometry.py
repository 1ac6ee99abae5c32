import numpy as np
import pytest

from statlen import (
    DimensionMismatch,
    NotCommuting,
    RankDeficient,
    StatePath,
    SupportViolation,
    bures_element,
    classical_geodesic_path,
    commuting_quantum_geodesic,
    discrete_path_length,
    even_schedule,
    fidelity_classical,
    fidelity_quantum,
    fisher_element,
    geodesic_length_bures,
    geodesic_length_fisher,
    hellinger_element,
    kubo_mori_element,
    linear_mixture_path,
    random_distribution,
    random_state,
    tangent_classical,
    tangent_quantum,
    validate_density,
    validate_distribution,
)

P_HALF = validate_distribution([0.5, 0.5])
P_SKEW = validate_distribution([0.9, 0.1])
# sqrt(0.45) + sqrt(0.05), evaluated independently
F_DOC = 0.8944271909999159


def _random_pair(dim, seed):
    return random_distribution(dim, seed), random_distribution(dim, seed + 1000)


def _haar_basis(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


class TestFidelities:
    def test_classical_identical(self):
        assert fidelity_classical(P_HALF, P_HALF) == 1.0

    def test_classical_disjoint(self):
        a = validate_distribution([1.0, 0.0])
        b = validate_distribution([0.0, 1.0])
        assert fidelity_classical(a, b) == 0.0

    def test_classical_documented_pair(self):
        assert fidelity_classical(P_HALF, P_SKEW) == pytest.approx(F_DOC, abs=1e-14)

    def test_classical_symmetric_exactly(self):
        for seed in range(5):
            p, q = _random_pair(6, seed)
            assert fidelity_classical(p, q) == fidelity_classical(q, p)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fidelity_classical(P_HALF, validate_distribution([1.0, 0.0, 0.0]))

    def test_quantum_identical(self):
        rho = random_state(4, 4, 0)
        assert fidelity_quantum(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_quantum_orthogonal_pure(self):
        a = validate_density(np.diag([1.0, 0.0]))
        b = validate_density(np.diag([0.0, 1.0]))
        assert fidelity_quantum(a, b) == pytest.approx(0.0, abs=1e-10)

    def test_quantum_matches_classical_on_diagonals(self):
        rho = validate_density(np.diag(P_HALF.weights))
        sigma = validate_density(np.diag(P_SKEW.weights))
        assert fidelity_quantum(rho, sigma) == pytest.approx(F_DOC, abs=1e-10)

    def test_quantum_symmetric(self):
        for seed in range(5):
            rho = random_state(8, 8, seed)
            sigma = random_state(8, 4, seed + 100)
            assert fidelity_quantum(rho, sigma) == pytest.approx(
                fidelity_quantum(sigma, rho), abs=1e-10
            )

    def test_range_and_separation(self):
        for seed in range(8):
            rho = random_state(4, 4, seed)
            sigma = random_state(4, 4, seed + 50)
            f = fidelity_quantum(rho, sigma)
            assert 0.0 <= f <= 1.0
            if np.max(np.abs(rho.matrix - sigma.matrix)) > 1e-4:
                assert f < 1.0 - 1e-9

    def test_unit_fidelity_means_equal(self):
        rho = random_state(3, 3, 7)
        bumped = validate_density(rho.matrix + np.diag([1e-10, -1e-10, 0.0]))
        assert fidelity_quantum(rho, bumped) > 1.0 - 1e-8
        assert np.max(np.abs(rho.matrix - bumped.matrix)) < 1e-8


class TestMetricElements:
    def test_fisher_zero_direction(self):
        dp = tangent_classical([0.0, 0.0])
        assert fisher_element(P_HALF, dp, 0.01) == 0.0

    def test_fisher_symmetric_point(self):
        dp = tangent_classical([1.0, -1.0])
        assert fisher_element(P_HALF, dp, 0.01) == pytest.approx(4e-4, rel=1e-12)

    def test_fisher_skewed_point(self):
        dp = tangent_classical([1.0, -1.0])
        assert fisher_element(P_SKEW, dp, 0.01) == pytest.approx(
            1.1111111111111112e-3, rel=1e-12
        )

    def test_fisher_support_violation(self):
        p = validate_distribution([1.0, 0.0])
        with pytest.raises(SupportViolation):
            fisher_element(p, tangent_classical([1.0, -1.0]), 0.01)

    def test_bures_zero_direction(self):
        rho = validate_density(np.eye(2) / 2)
        zero = tangent_quantum(np.zeros((2, 2)))
        assert bures_element(rho, zero, 0.01) == 0.0

    def test_bures_maximally_mixed_pauli(self):
        # at I/2 the anticommutator superoperator is the identity
        rho = validate_density(np.eye(2) / 2)
        sx_half = tangent_quantum(np.array([[0, 0.5], [0.5, 0]], dtype=complex))
        for eps in (0.1, 0.01):
            assert bures_element(rho, sx_half, eps) == pytest.approx(eps * eps, rel=1e-12)

    def test_bures_commuting_equals_fisher(self):
        rho = validate_density(np.diag([0.9, 0.1]))
        drho = tangent_quantum(np.diag([1.0, -1.0]))
        dp = tangent_classical([1.0, -1.0])
        assert bures_element(rho, drho, 0.01) == pytest.approx(
            fisher_element(P_SKEW, dp, 0.01), rel=1e-12
        )

    def test_bures_rank_deficient_raises(self):
        rho = validate_density(np.diag([1.0, 0.0]))
        drho = tangent_quantum(np.array([[0, 1], [1, 0]], dtype=complex))
        with pytest.raises(RankDeficient):
            bures_element(rho, drho, 0.001)
        # the ridge opts into a regularized value instead
        assert bures_element(rho, drho, 0.001, ridge=1e-6) > 0.0

    def test_chord_law(self):
        # 8 (1 - F(rho, rho + eps drho)) approaches the Bures element
        for seed in (3, 4, 5):
            dim = 2 + seed % 3
            rho = validate_density(
                0.5 * random_state(dim, dim, seed).matrix + 0.5 * np.eye(dim) / dim
            )
            rng = np.random.default_rng(seed + 10)
            raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            raw = raw + raw.conj().T
            raw -= np.trace(raw).real * np.eye(dim) / dim
            drho = tangent_quantum(raw / np.linalg.norm(raw, 2))
            devs = []
            for eps in (1e-3, 1e-4):
                pert = validate_density(rho.matrix + eps * drho.delta)
                chord = 8.0 * (1.0 - fidelity_quantum(rho, pert))
                devs.append(abs(chord / bures_element(rho, drho, eps) - 1.0))
            assert devs[1] <= devs[0] / 5.0

    def test_hellinger_zero_direction(self):
        rho = validate_density(np.diag([0.6, 0.4]))
        zero = tangent_quantum(np.zeros((2, 2)))
        assert hellinger_element(rho, zero, 0.01) == pytest.approx(0.0, abs=1e-14)

    def test_hellinger_commuting_matches_scalar_oracle(self):
        # diagonal case reduces to 4 sum (sqrt(p + eps d) - sqrt(p))^2
        p = np.array([0.9, 0.1])
        d = np.array([1.0, -1.0])
        rho = validate_density(np.diag(p))
        drho = tangent_quantum(np.diag(d).astype(complex))
        for eps in (1e-2, 1e-3):
            oracle = 4.0 * np.sum((np.sqrt(p + eps * d) - np.sqrt(p)) ** 2)
            assert hellinger_element(rho, drho, eps) == pytest.approx(oracle, rel=1e-10)

    def test_hellinger_commuting_approaches_bures(self):
        rho = validate_density(np.diag([0.9, 0.1]))
        drho = tangent_quantum(np.diag([1.0, -1.0]).astype(complex))
        diffs = []
        for eps in (1e-2, 1e-3):
            diffs.append(abs(hellinger_element(rho, drho, eps) - bures_element(rho, drho, eps)))
        # absolute mismatch is third order in eps
        assert diffs[0] < 1e-4
        assert diffs[1] < diffs[0] / 100.0

    def test_hellinger_noncommuting_ratio_logged_not_unity(self):
        rho = validate_density(np.diag([0.7, 0.3]))
        drho = tangent_quantum(
            np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, -0.3]], dtype=complex)
        )
        ratio = hellinger_element(rho, drho, 1e-4) / bures_element(rho, drho, 1e-4)
        assert 1.0 - 1e-9 <= ratio <= 2.0

    def test_kubo_mori_zero_direction(self):
        rho = validate_density(np.diag([0.6, 0.4]))
        assert kubo_mori_element(rho, tangent_quantum(np.zeros((2, 2))), 0.01) == 0.0

    def test_kubo_mori_commuting_equals_fisher(self):
        rho = validate_density(np.diag([0.9, 0.1]))
        drho = tangent_quantum(np.diag([1.0, -1.0]).astype(complex))
        dp = tangent_classical([1.0, -1.0])
        assert kubo_mori_element(rho, drho, 0.01) == pytest.approx(
            fisher_element(P_SKEW, dp, 0.01), rel=1e-10
        )

    def test_kubo_mori_matches_relative_entropy_expansion(self):
        from statlen import relative_entropy

        rho = validate_density(np.diag([0.7, 0.3]))
        drho = tangent_quantum(
            np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, -0.3]], dtype=complex)
        )
        eps = 1e-4
        pert = validate_density(rho.matrix + eps * drho.delta)
        ratio = 2.0 * relative_entropy(rho, pert) / kubo_mori_element(rho, drho, eps)
        assert abs(ratio - 1.0) < 1e-3

    def test_rank_deficient_guards_all_elements(self):
        rho = validate_density(np.diag([1.0, 0.0]))
        drho = tangent_quantum(np.diag([1.0, -1.0]).astype(complex))
        for element in (hellinger_element, kubo_mori_element):
            with pytest.raises(RankDeficient):
                element(rho, drho, 0.001)


class TestGeodesicLengths:
    def test_fisher_length_trivials(self):
        assert geodesic_length_fisher(1.0) == 0.0
        assert geodesic_length_fisher(0.0) == pytest.approx(np.pi, abs=1e-15)

    def test_bures_length_trivials(self):
        assert geodesic_length_bures(1.0) == 0.0
        assert geodesic_length_bures(0.0) == 2.0

    def test_documented_values(self):
        assert geodesic_length_fisher(F_DOC) == pytest.approx(0.9272952180016123, abs=1e-12)
        assert geodesic_length_bures(F_DOC) == pytest.approx(0.8944271909999157, abs=1e-12)

    def test_sine_relation_on_grid(self):
        grid = np.linspace(0.0, 1.0, 1000)
        for f in grid:
            lhs = geodesic_length_bures(f)
            rhs = 2.0 * np.sin(0.5 * geodesic_length_fisher(f))
            assert abs(lhs - rhs) <= 1e-12


class TestPaths:
    def test_classical_geodesic_endpoints(self):
        path = classical_geodesic_path(P_HALF, P_SKEW)
        assert path.sample(0.0) is P_HALF
        assert path.sample(1.0) is P_SKEW
        mid = path.sample(0.5)
        assert abs(mid.weights.sum() - 1.0) < 1e-12

    def test_classical_geodesic_constant_for_equal_endpoints(self):
        path = classical_geodesic_path(P_HALF, P_HALF)
        assert np.allclose(path.sample(0.37).weights, P_HALF.weights)

    def test_classical_geodesic_length_is_analytic(self):
        a = validate_distribution([1.0, 0.0])
        b = validate_distribution([0.0, 1.0])
        report = discrete_path_length(classical_geodesic_path(a, b), 10_000, "arc")
        assert report.total_length == pytest.approx(np.pi, abs=1e-6)

    def test_classical_geodesic_length_d3(self):
        p, q = _random_pair(3, 17)
        expected = geodesic_length_fisher(fidelity_classical(p, q))
        report = discrete_path_length(classical_geodesic_path(p, q), 2048, "arc")
        assert report.total_length == pytest.approx(expected, abs=1e-9)

    def test_commuting_geodesic_matches_classical_in_rotated_basis(self):
        basis = _haar_basis(3, 5)
        p, q = _random_pair(3, 23)
        rho = validate_density((basis * p.weights) @ basis.conj().T)
        sigma = validate_density((basis * q.weights) @ basis.conj().T)
        path = commuting_quantum_geodesic(rho, sigma)
        assert path.sample(0.0) is rho
        expected = geodesic_length_fisher(fidelity_classical(p, q))
        report = discrete_path_length(path, 256, "arc")
        assert report.total_length == pytest.approx(expected, abs=1e-8)

    def test_commuting_geodesic_rejects_noncommuting(self):
        rho = validate_density(np.diag([0.8, 0.2]))
        plus = validate_density(np.full((2, 2), 0.5))
        with pytest.raises(NotCommuting):
            commuting_quantum_geodesic(rho, plus)

    def test_mixture_endpoints_and_midpoint(self):
        a = validate_density(np.diag([1.0, 0.0]))
        b = validate_density(np.diag([0.0, 1.0]))
        path = linear_mixture_path(a, b)
        assert path.sample(0.0) is a
        assert np.allclose(path.sample(0.5).matrix, np.eye(2) / 2)

    def test_mixture_is_longer_than_geodesic_d3(self):
        # strict once the simplex has more than one dimension
        p, q = _random_pair(3, 31)
        geo = discrete_path_length(classical_geodesic_path(p, q), 512, "arc")
        mix = discrete_path_length(linear_mixture_path(p, q), 512, "arc")
        assert mix.total_length > geo.total_length + 1e-6

    def test_mixture_degenerate_d2_matches_geodesic(self):
        # the 1-simplex has a single image between its endpoints, so the
        # mixture path cannot be longer; only its parametrization differs
        a = validate_distribution([1.0, 0.0])
        b = validate_distribution([0.0, 1.0])
        mix = discrete_path_length(linear_mixture_path(a, b), 4096, "arc")
        assert mix.total_length == pytest.approx(np.pi, abs=1e-9)

    def test_sample_outside_range_rejected(self):
        path = linear_mixture_path(P_HALF, P_SKEW)
        with pytest.raises(ValueError):
            path.sample(1.5)


class TestDiscreteLength:
    def test_constant_path_zero(self):
        path = linear_mixture_path(P_HALF, P_HALF)
        for n in (1, 7, 32):
            assert discrete_path_length(path, n).total_length == pytest.approx(0.0, abs=1e-7)

    def test_report_consistency(self):
        path = classical_geodesic_path(P_HALF, P_SKEW)
        report = discrete_path_length(path, 16)
        assert report.n_steps == 16
        assert np.all(report.step_lengths >= 0)
        assert report.total_length == pytest.approx(report.step_lengths.sum(), abs=1e-12)

    def test_monotone_refinement_arc(self):
        p, q = _random_pair(4, 3)
        path = linear_mixture_path(p, q)
        for n in (4, 8, 16, 32):
            coarse = discrete_path_length(path, n, "arc").total_length
            fine = discrete_path_length(path, 2 * n, "arc").total_length
            assert fine >= coarse - 1e-9

    def test_arc_chord_gap_shrinks_quadratically(self):
        path = classical_geodesic_path(P_HALF, P_SKEW)
        gaps = []
        for n in (8, 16):
            arc = discrete_path_length(path, n, "arc").total_length
            chord = discrete_path_length(path, n, "chord").total_length
            gaps.append(abs(arc - chord))
        assert 3.0 <= gaps[0] / gaps[1] <= 5.0

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            discrete_path_length(classical_geodesic_path(P_HALF, P_SKEW), 4, "spline")


class TestEvenSchedule:
    def test_geodesic_already_even(self):
        schedule = even_schedule(classical_geodesic_path(P_HALF, P_SKEW), 16)
        steps = schedule.step_lengths
        assert np.max(np.abs(steps / steps.mean() - 1.0)) < 1e-3

    def test_skewed_parametrization_is_evened_out(self):
        geo = classical_geodesic_path(P_HALF, P_SKEW)
        skewed = StatePath("classical", P_HALF, P_SKEW, lambda t: geo.sample(t * t * t))
        schedule = even_schedule(skewed, 16)
        steps = schedule.step_lengths
        assert np.max(np.abs(steps / steps.mean() - 1.0)) < 1e-3
        # oracle: each step carries 1/N of the arc-length table total
        total = discrete_path_length(geo, 4096, "arc").total_length
        assert np.allclose(steps, total / 16, rtol=2e-3)

    def test_single_step(self):
        schedule = even_schedule(classical_geodesic_path(P_HALF, P_SKEW), 1)
        assert schedule.n_steps == 1
        assert schedule.states[0] is P_HALF
        assert schedule.states[-1] is P_SKEW

    def test_degenerate_path_gives_trivial_schedule(self):
        schedule = even_schedule(linear_mixture_path(P_HALF, P_HALF), 8)
        assert np.allclose(schedule.ts, np.linspace(0, 1, 9))
        assert schedule.step_lengths.sum() == pytest.approx(0.0, abs=1e-7)

    def test_quantum_schedule_even(self):
        rho = random_state(2, 2, 61)
        sigma = random_state(2, 2, 62)
        schedule = even_schedule(linear_mixture_path(rho, sigma), 12)
        steps = schedule.step_lengths
        assert np.max(np.abs(steps / steps.mean() - 1.0)) < 1e-3
