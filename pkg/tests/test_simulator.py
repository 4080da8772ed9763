import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modeqaoa.graph import (
    assign_weights, cut_values_table, random_regular, with_optimum,
)
from modeqaoa.simulator import (
    MAX_QUBITS, GateShift, NoiseSpec, QaoaParams, apply_depolarizing,
    distribution, evolve, exact_expectation, outcome_distribution, sample,
)


def kron_oracle(inst, params):
    """Dense-matrix reference: build each layer from explicit kron products."""
    n = inst.n
    dim = 2 ** n
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    I2 = np.eye(2)
    state = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    cuts = cut_values_table(inst)
    for beta, gamma in zip(params.betas, params.gammas):
        state = np.exp(-1j * gamma * cuts) * state
        for q in range(n):
            ops = [I2] * n
            ops[q] = X
            full = ops[0]
            for op in ops[1:]:
                full = np.kron(full, op)
            gate = np.cos(beta) * np.eye(dim) - 1j * np.sin(beta) * full
            state = gate @ state
    return state


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_evolve_matches_kron_oracle(seed):
    inst = assign_weights(random_regular(4, 3, seed=seed), "uniform", seed=seed)
    rng = np.random.default_rng(seed)
    params = QaoaParams(tuple(rng.uniform(0, np.pi, 2)),
                        tuple(rng.uniform(0, 2 * np.pi, 2)))
    got = evolve(inst, params)
    want = kron_oracle(inst, params)
    assert np.max(np.abs(got - want)) < 1e-12


def test_zero_params_uniform(six_reg):
    params = QaoaParams((0.0, 0.0), (0.0, 0.0))
    dist = distribution(evolve(six_reg, params))
    assert np.max(np.abs(dist - 1 / 64)) < 1e-14


def test_zero_beta_uniform_magnitudes(six_reg):
    # the phase layer alone cannot move probability
    params = QaoaParams((0.0,), (1.3,))
    dist = distribution(evolve(six_reg, params))
    assert np.max(np.abs(dist - 1 / 64)) < 1e-14


@given(st.integers(0, 2 ** 31))
@settings(max_examples=30, deadline=None)
def test_bit_flip_symmetry(seed):
    inst = assign_weights(random_regular(6, 3, seed=seed % 7), "uniform", seed=seed % 5)
    rng = np.random.default_rng(seed)
    params = QaoaParams(tuple(rng.uniform(0, np.pi, 2)),
                        tuple(rng.uniform(0, 2 * np.pi, 2)))
    dist = distribution(evolve(inst, params))
    assert np.max(np.abs(dist - dist[::-1])) < 1e-12


def test_distribution_normalized(six_reg):
    params = QaoaParams((0.7,), (2.1,))
    dist = distribution(evolve(six_reg, params))
    assert dist.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(dist >= 0)


def test_gate_shift_matches_manual_beta(square):
    # a mixer-gate shift of +pi/2 in gate angle is +pi/4 on that qubit's beta
    params = QaoaParams((0.4,), (1.1,))
    shift = GateShift("beta", layer=0, index=2, angle=np.pi / 2)
    shifted = evolve(square, params, shift)

    n = square.n
    dim = 2 ** n
    cuts = cut_values_table(square)
    state = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    state = np.exp(-1j * 1.1 * cuts) * state
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    I2 = np.eye(2)
    for q in range(n):
        beta = 0.4 + (np.pi / 4 if q == 2 else 0.0)
        ops = [I2] * n
        ops[q] = X
        full = ops[0]
        for op in ops[1:]:
            full = np.kron(full, op)
        state = (np.cos(beta) * np.eye(dim) - 1j * np.sin(beta) * full) @ state
    assert np.max(np.abs(shifted - state)) < 1e-12


def test_gate_shift_matches_manual_gamma(square):
    # an edge-gate shift multiplies in a phase on the cut indicator of that edge
    params = QaoaParams((0.4,), (1.1,))
    shift = GateShift("gamma", layer=0, index=1, angle=np.pi / 2)
    shifted = evolve(square, params, shift)

    u, v, _ = square.edges[1]
    dim = 2 ** square.n
    idx = np.arange(dim)
    ind = ((idx >> (square.n - 1 - u)) ^ (idx >> (square.n - 1 - v))) & 1
    cuts = cut_values_table(square)
    state = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    state = np.exp(-1j * 1.1 * cuts) * np.exp(-1j * (np.pi / 4) * (2 * ind - 1)) * state
    # exp(-i (delta/2) Z_u Z_v) with Z_u Z_v = 1 - 2*indicator, delta = pi/2
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    I2 = np.eye(2)
    for q in range(square.n):
        ops = [I2] * square.n
        ops[q] = X
        full = ops[0]
        for op in ops[1:]:
            full = np.kron(full, op)
        state = (np.cos(0.4) * np.eye(dim) - 1j * np.sin(0.4) * full) @ state
    overlap = abs(np.vdot(shifted, state))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_depolarizing_mixes_toward_uniform():
    dist = np.array([0.7, 0.1, 0.1, 0.1])
    noise = NoiseSpec(lambda_per_gate=0.01, gate_count=30)
    out = apply_depolarizing(dist, noise)
    lam = noise.effective_mixing
    assert 0 < lam < 1
    assert np.allclose(out, (1 - lam) * dist + lam / 4)
    assert out.sum() == pytest.approx(1.0)
    assert apply_depolarizing(dist, None) is dist


def test_noise_spec_for_circuit(six_reg):
    spec = NoiseSpec.for_circuit(0.005, six_reg, depth=2)
    assert spec.gate_count == 2 * (six_reg.num_edges + six_reg.n)
    assert spec.effective_mixing == pytest.approx(
        1 - (1 - 0.005) ** spec.gate_count)


def test_effective_mixing_monotone(six_reg):
    mixes = [NoiseSpec.for_circuit(lam, six_reg, depth=2).effective_mixing
             for lam in (0.001, 0.005, 0.01)]
    assert mixes == sorted(mixes)


def test_sample_deterministic_and_counted(six_reg):
    dist = outcome_distribution(six_reg, QaoaParams((0.3, 0.9), (0.8, 2.2)))
    a = sample(dist, 500, seed=11)
    b = sample(dist, 500, seed=11)
    assert a.histogram == b.histogram
    assert a.total == 500
    assert all(len(k) == 6 for k in a.histogram)


def test_sample_frequencies_converge(six_reg):
    dist = outcome_distribution(six_reg, QaoaParams((0.3,), (0.8,)))
    counts = sample(dist, 200_000, seed=3)
    freqs = np.zeros(64)
    for bits, c in counts.histogram.items():
        freqs[int(bits, 2)] = c / counts.total
    # 5 sigma on the largest-probability cell
    k = int(np.argmax(dist))
    sigma = np.sqrt(dist[k] * (1 - dist[k]) / 200_000)
    assert abs(freqs[k] - dist[k]) < 5 * sigma + 1e-9


def test_exact_expectation_half_weight_at_zero(six_reg):
    dist = outcome_distribution(six_reg, QaoaParams((0.0,), (0.0,)))
    assert exact_expectation(six_reg, dist) == pytest.approx(
        six_reg.total_weight / 2, abs=1e-12)


def test_qubit_cap():
    inst = random_regular(MAX_QUBITS + 1, 2, seed=0)
    with pytest.raises(ValueError):
        evolve(inst, QaoaParams((0.1,), (0.1,)))


def test_params_vector_roundtrip():
    p = QaoaParams((0.1, 0.2), (1.0, 2.0))
    v = p.to_vector()
    assert np.allclose(v, [0.1, 0.2, 1.0, 2.0])
    back = QaoaParams.from_vector(v)
    assert back == p
    assert p.depth == 2
