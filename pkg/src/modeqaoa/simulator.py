"""Exact statevector simulation of the alternating-layer MaxCut ansatz.

The cost layer is diagonal, so one layer costs an elementwise phase over the
2^n cut values plus n independent single-qubit X rotations.  Basis index bit 0
is the most significant bit and belongs to vertex 0 (see graph module).

Gate-level shifts: every gate can be written exp(-i * (phi/2) * P) with P
involutory; for an edge gate phi = gamma * w, for a mixer gate phi = 2 * beta.
A GateShift displaces one gate's half-turn angle phi, which is what the
parameter-shift estimators in baselines and stage2 need.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .estimators import Counts
from .graph import Edge, MaxCutInstance, cut_values_table, index_to_bits

MAX_QUBITS = 24


@dataclass(frozen=True)
class QaoaParams:
    """Layer angles; the search vector is the concatenation [betas, gammas]."""

    betas: tuple[float, ...]
    gammas: tuple[float, ...]

    def __post_init__(self):
        if len(self.betas) != len(self.gammas) or not self.betas:
            raise ValueError("betas and gammas must have equal positive length")
        for x in (*self.betas, *self.gammas):
            if not np.isfinite(x):
                raise ValueError("angles must be finite")

    @property
    def depth(self) -> int:
        return len(self.betas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.betas + self.gammas)

    @classmethod
    def from_vector(cls, theta) -> "QaoaParams":
        theta = np.asarray(theta, dtype=float)
        if theta.ndim != 1 or theta.size % 2 != 0 or theta.size == 0:
            raise ValueError("theta must be a flat vector of even positive length")
        p = theta.size // 2
        return cls(betas=tuple(theta[:p]), gammas=tuple(theta[p:]))


@dataclass(frozen=True)
class NoiseSpec:
    """Global depolarizing channel: per-gate rate compounded over the gate count."""

    lambda_per_gate: float
    gate_count: int

    def __post_init__(self):
        if not 0.0 <= self.lambda_per_gate <= 1.0:
            raise ValueError("lambda_per_gate must lie in [0, 1]")
        if self.gate_count < 0:
            raise ValueError("gate_count must be non-negative")

    @classmethod
    def for_circuit(cls, lambda_per_gate: float, instance: MaxCutInstance,
                    depth: int) -> "NoiseSpec":
        # one gate per edge phase and one per mixer rotation, per layer
        return cls(lambda_per_gate, depth * (instance.num_edges + instance.n))

    @property
    def effective_mixing(self) -> float:
        return 1.0 - (1.0 - self.lambda_per_gate) ** self.gate_count


@dataclass(frozen=True)
class GateShift:
    """Displace one gate's half-turn angle by `angle` (radians of phi)."""

    kind: str  # "beta" or "gamma"
    layer: int  # 0-based
    index: int  # qubit for beta, edge position for gamma
    angle: float

    def __post_init__(self):
        if self.kind not in ("beta", "gamma"):
            raise ValueError(f"unknown shift kind {self.kind!r}")


@lru_cache(maxsize=256)
def _edge_indicator(n: int, edges: tuple[Edge, ...], edge_index: int) -> np.ndarray:
    u, v, _ = edges[edge_index]
    idx = np.arange(2**n, dtype=np.int64)
    ind = (((idx >> (n - 1 - u)) ^ (idx >> (n - 1 - v))) & 1).astype(float)
    ind.flags.writeable = False
    return ind


def _apply_mixer(amps: np.ndarray, n: int, qubit: int, beta: float) -> None:
    if beta == 0.0:
        return
    c = np.cos(beta)
    s = np.sin(beta)
    view = amps.reshape(2**qubit, 2, -1)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - 1j * s * a1
    view[:, 1, :] = c * a1 - 1j * s * a0


def evolve(instance: MaxCutInstance, params: QaoaParams,
           shift: GateShift | None = None) -> np.ndarray:
    """Statevector after p alternating layers applied to the uniform superposition."""
    n = instance.n
    if n > MAX_QUBITS:
        raise ValueError(f"simulator capped at n={MAX_QUBITS}, got n={n}")
    if shift is not None and not 0 <= shift.layer < params.depth:
        raise ValueError(f"shift layer {shift.layer} out of range")
    cuts = cut_values_table(instance)
    amps = np.full(2**n, 2.0 ** (-n / 2), dtype=complex)
    for layer in range(params.depth):
        amps = amps * np.exp(-1j * params.gammas[layer] * cuts)
        if shift is not None and shift.kind == "gamma" and shift.layer == layer:
            if not 0 <= shift.index < instance.num_edges:
                raise ValueError(f"edge index {shift.index} out of range")
            # shifting phi_e = gamma * w_e adds a pure indicator phase
            amps = amps * np.exp(-1j * shift.angle
                                 * _edge_indicator(n, instance.edges, shift.index))
        for q in range(n):
            beta = params.betas[layer]
            if shift is not None and shift.kind == "beta" \
                    and shift.layer == layer and shift.index == q:
                beta = beta + shift.angle / 2.0  # phi = 2*beta
            _apply_mixer(amps, n, q, beta)
    return amps


def distribution(state: np.ndarray) -> np.ndarray:
    probs = np.abs(state) ** 2
    return probs / probs.sum()


def apply_depolarizing(dist: np.ndarray, noise: NoiseSpec | None) -> np.ndarray:
    """Mix the outcome distribution with the uniform one: p' = (1-L)p + L/2^n."""
    if noise is None or noise.lambda_per_gate == 0.0:
        return dist
    mixing = noise.effective_mixing
    out = (1.0 - mixing) * dist + mixing / dist.size
    return out / out.sum()


def outcome_distribution(instance: MaxCutInstance, params: QaoaParams,
                         noise: NoiseSpec | None = None,
                         shift: GateShift | None = None) -> np.ndarray:
    return apply_depolarizing(distribution(evolve(instance, params, shift)), noise)


def sample(dist: np.ndarray, shots: int, seed: int) -> Counts:
    """Multinomial sample of the outcome distribution as a bitstring histogram."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = int(np.log2(len(dist)))
    if 2**n != len(dist):
        raise ValueError("distribution length must be a power of two")
    rng = np.random.default_rng(seed)
    raw = rng.multinomial(shots, dist / dist.sum())
    nz = np.nonzero(raw)[0]
    return Counts({index_to_bits(int(k), n): int(raw[k]) for k in nz})


def exact_expectation(instance: MaxCutInstance, dist: np.ndarray) -> float:
    """Exact mean cut value under the outcome distribution."""
    return float(dist @ cut_values_table(instance))
