import numpy as np
import pytest

from cvcluster import gaussian, graphs, presets
from cvcluster.gaussian import (
    GaussianState,
    LossModel,
    SqueezePattern,
    apply_loss,
    combination_vector,
    evolve,
    excess_noise_decomposition,
    input_covariance,
    omega,
    qnl_variance,
    quadrature_variance,
    symplectic_from_unitary,
    vacuum_state,
    variance_db,
)


def chain8_state(r):
    return presets.cluster_state(presets.chain8_unitary(), presets.experiment_pattern(r))


def haar_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestInputCovariance:
    def test_x_squeezed_variances(self):
        state = input_covariance(SqueezePattern(("x",), (0.5,)))
        assert state.cov[0, 0] == pytest.approx(np.exp(-1.0) / 4, abs=1e-15)
        assert state.cov[1, 1] == pytest.approx(np.exp(+1.0) / 4, abs=1e-15)

    def test_r_zero_is_vacuum(self):
        state = input_covariance(SqueezePattern.uniform(3, 0.0))
        assert np.allclose(state.cov, np.eye(6) * 0.25, atol=1e-15)

    def test_squeezing_level_matches_quoted_db(self):
        # r = 0.50 corresponds to the quoted 4.30 +- 0.07 dB noise reduction.
        db = 10 * np.log10(np.exp(-2 * 0.50))
        assert -4.37 <= db <= -4.23

    def test_negative_r_rejected(self):
        with pytest.raises(ValueError):
            SqueezePattern(("x",), (-0.1,))

    def test_orientation_validation(self):
        with pytest.raises(ValueError):
            SqueezePattern(("q",), (0.1,))
        with pytest.raises(ValueError):
            SqueezePattern(("x", "p"), (0.1,))


class TestSymplectic:
    def test_identity(self):
        assert np.array_equal(symplectic_from_unitary(np.eye(3, dtype=complex)), np.eye(6))

    def test_single_mode_fourier_block_action(self):
        s = symplectic_from_unitary(np.diag([1j, 1.0]).astype(complex))
        # x_1 -> -p_1 and p_1 -> x_1; mode 2 untouched.
        vec = np.array([1.0, 0.0, 0.0, 0.0])
        assert np.allclose(s @ vec, [0.0, 0.0, 1.0, 0.0])
        vec = np.array([0.0, 0.0, 1.0, 0.0])
        assert np.allclose(s @ vec, [-1.0, 0.0, 0.0, 0.0])

    def test_chain8_orthogonal_and_symplectic(self):
        s = symplectic_from_unitary(presets.chain8_unitary())
        form = omega(8)
        assert np.max(np.abs(s @ s.T - np.eye(16))) < 1e-12
        assert np.max(np.abs(s @ form @ s.T - form)) < 1e-12

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            symplectic_from_unitary(np.ones((2, 2), dtype=complex))


class TestEvolve:
    def test_vacuum_through_passive_network_stays_vacuum(self):
        s = symplectic_from_unitary(presets.chain8_unitary())
        out = evolve(vacuum_state(8), s)
        assert np.max(np.abs(out.cov - np.eye(16) * 0.25)) < 1e-12

    def test_chain8_nullifier_variances_at_half(self):
        state = chain8_state(0.5)
        for vec in presets.nullifier_vectors(graphs.linear_chain(8)):
            ratio = quadrature_variance(state, vec) / qnl_variance(vec)
            assert ratio == pytest.approx(np.exp(-1.0), abs=1e-12)

    def test_determinant_preserved(self):
        state = input_covariance(presets.experiment_pattern(0.4))
        s = symplectic_from_unitary(presets.chain8_unitary())
        out = evolve(state, s)
        assert np.linalg.det(out.cov) == pytest.approx(np.linalg.det(state.cov), rel=1e-9)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            evolve(vacuum_state(3), np.eye(4))

    def test_non_symplectic_rejected(self):
        with pytest.raises(ValueError):
            evolve(vacuum_state(2), np.diag([2.0, 1.0, 1.0, 1.0]))

    def test_uncertainty_bound_preserved(self):
        state = chain8_state(1.5)
        bound = state.cov + 0.25j * omega(8)
        assert np.min(np.linalg.eigvalsh(bound)) > -1e-10


class TestLoss:
    def test_unit_efficiency_is_identity(self):
        state = chain8_state(0.5)
        out = apply_loss(state, LossModel.uniform(8, 1.0))
        assert np.max(np.abs(out.cov - state.cov)) < 1e-15

    def test_zero_efficiency_gives_vacuum(self):
        out = apply_loss(chain8_state(0.5), LossModel.uniform(8, 0.0))
        assert np.max(np.abs(out.cov - np.eye(16) * 0.25)) < 1e-15

    def test_single_mode_formula(self):
        state = input_covariance(SqueezePattern(("x",), (0.5,)))
        out = apply_loss(state, LossModel(etas=(0.783,)))
        expected = 0.783 * np.exp(-1.0) / 4 + 0.217 / 4
        assert out.cov[0, 0] == pytest.approx(expected, abs=1e-12)
        assert out.cov[0, 0] == pytest.approx(0.12626, abs=5e-6)

    def test_channel_composition(self):
        state = chain8_state(0.8)
        rng = np.random.default_rng(2)
        eta1 = rng.uniform(0.3, 1.0, 8)
        eta2 = rng.uniform(0.3, 1.0, 8)
        sequential = apply_loss(apply_loss(state, LossModel(tuple(eta1))), LossModel(tuple(eta2)))
        combined = apply_loss(state, LossModel(tuple(eta1 * eta2)))
        assert np.max(np.abs(sequential.cov - combined.cov)) < 1e-12

    def test_efficiency_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            LossModel(etas=(1.1,))
        with pytest.raises(ValueError):
            apply_loss(chain8_state(0.1), LossModel.uniform(4, 0.9))


class TestVariances:
    def test_vacuum_two_quadrature_combination(self):
        c = combination_vector(8, [(1, "p", 1.0), (2, "x", -1.0)])
        assert quadrature_variance(vacuum_state(8), c) == pytest.approx(0.5, abs=1e-15)

    def test_chain8_first_nullifier_at_half(self):
        state = chain8_state(0.5)
        c = combination_vector(8, [(1, "p", 1.0), (2, "x", -1.0)])
        assert quadrature_variance(state, c) == pytest.approx(np.exp(-1.0) / 2, abs=1e-12)
        assert quadrature_variance(state, c) == pytest.approx(0.18394, abs=5e-6)

    def test_zero_vector_gives_zero(self):
        assert quadrature_variance(vacuum_state(4), np.zeros(8)) == 0.0

    def test_qnl_values(self):
        two = combination_vector(4, [(1, "p", 1.0), (2, "x", -1.0)])
        three = combination_vector(4, [(1, "p", 1.0), (2, "x", -1.0), (3, "x", -1.0)])
        four = combination_vector(
            4, [(1, "p", 1.0), (2, "x", -1.0), (3, "x", -1.0), (4, "x", -1.0)]
        )
        assert qnl_variance(two) == pytest.approx(0.5)
        assert qnl_variance(three) == pytest.approx(0.75)
        assert qnl_variance(four) == pytest.approx(1.0)

    def test_variance_db_values(self):
        assert variance_db(0.4, 0.4) == pytest.approx(0.0, abs=1e-14)
        assert variance_db(np.exp(-1.0), 1.0) == pytest.approx(-4.3429448, abs=1e-6)
        assert variance_db(np.exp(-0.6), 1.0) == pytest.approx(-2.6057669, abs=1e-6)

    def test_variance_db_rejects_non_positive(self):
        with pytest.raises(ValueError):
            variance_db(0.0, 1.0)
        with pytest.raises(ValueError):
            variance_db(1.0, -0.5)

    def test_variance_monotone_in_r(self):
        # Nullifier variances shrink (weakly) as squeezing grows.
        for builder, graph in (
            (presets.chain8_unitary, graphs.linear_chain(8)),
            (presets.diamond8_unitary, graphs.two_diamond()),
        ):
            vectors = presets.nullifier_vectors(graph)
            grid = np.arange(0.0, 3.0 + 1e-9, 0.1)
            previous = None
            for r in grid:
                state = presets.cluster_state(builder(), presets.experiment_pattern(r))
                values = [quadrature_variance(state, v) for v in vectors]
                if previous is not None:
                    assert all(v <= p + 1e-12 for v, p in zip(values, previous))
                previous = values


class TestExcessNoise:
    def test_chain8_first_nullifier_terms(self):
        vectors = presets.nullifier_vectors(graphs.linear_chain(8))
        noise = excess_noise_decomposition(
            presets.chain8_unitary(), presets.experiment_pattern(0.5), vectors
        )[0]
        assert noise.anti == ()
        assert len(noise.squeezed) == 1
        term = noise.squeezed[0]
        assert (term.mode, term.quadrature) == (1, "x")
        assert term.coefficient == pytest.approx(np.sqrt(2.0), abs=1e-12)

    def test_chain8_fourth_nullifier_terms(self):
        vectors = presets.nullifier_vectors(graphs.linear_chain(8))
        noise = excess_noise_decomposition(
            presets.chain8_unitary(), presets.experiment_pattern(0.5), vectors
        )[3]
        got = {(t.mode, t.quadrature): t.coefficient for t in noise.squeezed}
        assert got[(2, "p")] == pytest.approx(1 / np.sqrt(3), abs=1e-12)
        assert got[(6, "p")] == pytest.approx(np.sqrt(2 / 5), abs=1e-12)
        assert got[(5, "x")] == pytest.approx(np.sqrt(34 / 15), abs=1e-12)
        assert noise.max_anti_coefficient < 1e-12

    def test_identity_network_antisqueezed_input(self):
        # p_1 on an x-squeezed input mode sits entirely on the amplified side.
        pattern = SqueezePattern.uniform(2, 0.3, orientation="x")
        c = combination_vector(2, [(1, "p", 1.0)])
        noise = excess_noise_decomposition(np.eye(2, dtype=complex), pattern, [c])[0]
        assert noise.squeezed == ()
        assert len(noise.anti) == 1
        assert noise.anti[0].coefficient == pytest.approx(1.0)

    def test_reconstruction_matches_covariance_for_random_networks(self):
        rng = np.random.default_rng(17)
        for _ in range(15):
            n = int(rng.integers(2, 7))
            u = haar_unitary(rng, n)
            orientations = tuple(rng.choice(["x", "p"], size=n))
            rs = tuple(rng.uniform(0.0, 1.2, size=n))
            pattern = SqueezePattern(orientations, rs)
            coeffs = rng.standard_normal(2 * n)
            state = evolve(input_covariance(pattern), symplectic_from_unitary(u))
            noise = excess_noise_decomposition(u, pattern, [coeffs])[0]
            assert noise.variance == pytest.approx(
                quadrature_variance(state, coeffs), abs=1e-10
            )


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState(cov=np.eye(3))  # odd dimension
    with pytest.raises(ValueError):
        GaussianState(cov=np.array([[0.25, 0.1], [0.0, 0.25]]))  # not symmetric
    with pytest.raises(ValueError):
        GaussianState(cov=np.diag([0.01, 0.01]))  # beats the uncertainty bound
