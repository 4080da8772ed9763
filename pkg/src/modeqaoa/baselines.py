"""Fixed-shot expectation baselines: TPE search and parameter-shift Adam ascent.

Both charge a constant N_fix shots per expectation evaluation and, unlike the
mode-objective pipeline, their classical post-processing is billed per raw
shot rather than per distinct key.

Gradients use the exact two-point rule per gate.  A layer angle multiplies a
sum of commuting generators, so its derivative is the sum over the layer's
gates of a_g * [f(phi_g + pi/2) - f(phi_g - pi/2)] in each gate's half-turn
angle phi, with a_g = w_e/2 for an edge gate and 1 for a mixer gate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bo import (RunResult, StagnationConfig, TpeConfig, Trial, run_search)
from .estimators import Counts, compute_stats, expectation_estimate, mode_of
from .graph import MaxCutInstance, cut_value
from .resources import ResourceLedger
from .simulator import (GateShift, NoiseSpec, QaoaParams, exact_expectation,
                        outcome_distribution, sample)

DEFAULT_N_FIX = 1000


@dataclass(frozen=True)
class GdConfig:
    iterations: int = 50
    learning_rate: float = 0.05
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    shots_per_eval: int = DEFAULT_N_FIX
    exact_gradient: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.shots_per_eval < 1:
            raise ValueError("shots_per_eval must be >= 1")


def _coordinate_gates(instance: MaxCutInstance, depth: int, k: int):
    """Gates under search coordinate k as (GateShift template, coefficient) pairs."""
    if not 0 <= k < 2 * depth:
        raise ValueError(f"coordinate {k} out of range for depth {depth}")
    if k < depth:
        return [(("beta", k, q), 1.0) for q in range(instance.n)]
    layer = k - depth
    return [(("gamma", layer, e), w / 2.0)
            for e, (_, _, w) in enumerate(instance.edges)]


def _split_shots(total: int, parts: int) -> list[int]:
    base, rem = divmod(total, parts)
    if base == 0:
        raise ValueError(f"{total} shots cannot cover {parts} generators")
    return [base + 1 if i < rem else base for i in range(parts)]


def fixed_shot_expectation_eval(instance: MaxCutInstance, params: QaoaParams,
                                shots: int, noise: NoiseSpec | None, seed: int,
                                ledger: ResourceLedger) -> float:
    """Sampled mean cut value from a fixed shot budget."""
    value, _ = _expectation_eval_counts(instance, params, shots, noise, seed, ledger)
    return value


def _expectation_eval_counts(instance, params, shots, noise, seed, ledger):
    dist = outcome_distribution(instance, params, noise)
    ledger.circuit_evaluations += 1
    counts = sample(dist, shots, seed)
    ledger.optimization_shots += shots
    ledger.classical_count_ops += shots
    ledger.classical_cut_ops += shots  # baseline evaluates the cut per raw shot
    ledger.record_point(shots, counts.distinct)
    return expectation_estimate(instance, counts), counts


def parameter_shift_gradient(instance: MaxCutInstance, params: QaoaParams,
                             shots: int | None, noise: NoiseSpec | None,
                             seed: int, ledger: ResourceLedger) -> np.ndarray:
    """Gradient of the expected cut w.r.t. theta = [betas, gammas].

    shots=None evaluates shifted expectations on the exact distribution;
    otherwise each coordinate spends 2 * shots, split evenly across its
    generators, for a total ledger charge of 2 * 2p * shots per call.
    """
    depth = params.depth
    d = 2 * depth
    grad = np.zeros(d)
    ss = np.random.SeedSequence(seed)
    for k in range(d):
        gates = _coordinate_gates(instance, depth, k)
        parts = _split_shots(shots, len(gates)) if shots is not None else [None] * len(gates)
        for ((kind, layer, index), coeff), part in zip(gates, parts):
            values = []
            for sign in (1.0, -1.0):
                gs = GateShift(kind=kind, layer=layer, index=index,
                               angle=sign * np.pi / 2.0)
                dist = outcome_distribution(instance, params, noise, shift=gs)
                ledger.circuit_evaluations += 1
                if part is None:
                    values.append(exact_expectation(instance, dist))
                else:
                    child = int(ss.spawn(1)[0].generate_state(1)[0])
                    counts = sample(dist, part, child)
                    ledger.optimization_shots += part
                    ledger.classical_count_ops += part
                    ledger.classical_cut_ops += part
                    ledger.record_point(part, counts.distinct)
                    values.append(expectation_estimate(instance, counts))
            grad[k] += coeff * (values[0] - values[1])
    return grad


def optimize_exp_bo(instance: MaxCutInstance, depth: int,
                    n_fix: int = DEFAULT_N_FIX,
                    tpe_cfg: TpeConfig | None = None,
                    stagnation_cfg: StagnationConfig | None = None,
                    noise: NoiseSpec | None = None, t_max: int = 100,
                    seed: int = 0, n_final: int = 5000,
                    ledger: ResourceLedger | None = None) -> RunResult:
    """TPE search on the fixed-shot expectation objective."""
    tpe_cfg = tpe_cfg or TpeConfig()
    stagnation_cfg = stagnation_cfg or StagnationConfig()
    ledger = ledger if ledger is not None else ResourceLedger()

    def evaluate(t: int, params: QaoaParams, eval_seed: int) -> Trial:
        value, counts = _expectation_eval_counts(instance, params, n_fix, noise,
                                                 eval_seed, ledger)
        mode = mode_of(counts)
        return Trial(index=t, params=params, objective=value, shots_used=n_fix,
                     accepted=True, mode=mode, mode_cut=cut_value(instance, mode))

    return run_search(instance, depth, evaluate, tpe_cfg, stagnation_cfg,
                      noise, t_max, seed, n_final, ledger)


def optimize_exp_gd(instance: MaxCutInstance, depth: int,
                    gd_cfg: GdConfig | None = None,
                    noise: NoiseSpec | None = None, seed: int = 0,
                    n_final: int = 5000,
                    ledger: ResourceLedger | None = None) -> RunResult:
    """Parameter-shift gradient ascent with Adam on the fixed-shot expectation.

    Each iteration: base evaluation at the current theta (tracks the
    incumbent), one gradient call, one Adam update.  Cost per iteration is
    (2 * 2p + 1) * N_fix shots.
    """
    from .bo import search_bounds  # local import keeps module deps one-way

    cfg = gd_cfg or GdConfig()
    ledger = ledger if ledger is not None else ResourceLedger()
    bounds = search_bounds(depth)
    ss = np.random.SeedSequence(seed)
    init_seed = int(ss.spawn(1)[0].generate_state(1)[0])
    theta = np.random.default_rng(init_seed).uniform(bounds[:, 0], bounds[:, 1])
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    trials: list[Trial] = []
    best: Trial | None = None
    for t in range(1, cfg.iterations + 1):
        eval_seed, grad_seed = (int(c.generate_state(1)[0]) for c in ss.spawn(2))
        params = QaoaParams.from_vector(theta)
        value, counts = _expectation_eval_counts(instance, params,
                                                 cfg.shots_per_eval, noise,
                                                 eval_seed, ledger)
        grad = parameter_shift_gradient(
            instance, params, None if cfg.exact_gradient else cfg.shots_per_eval,
            noise, grad_seed, ledger)
        mode = mode_of(counts)
        grad_shots = 0 if cfg.exact_gradient else 2 * 2 * depth * cfg.shots_per_eval
        trial = Trial(index=t, params=params, objective=value,
                      shots_used=cfg.shots_per_eval + grad_shots, accepted=True,
                      mode=mode, mode_cut=cut_value(instance, mode))
        trials.append(trial)
        if best is None or trial.objective > best.objective:
            best = trial
        m = cfg.adam_beta1 * m + (1 - cfg.adam_beta1) * grad
        v = cfg.adam_beta2 * v + (1 - cfg.adam_beta2) * grad**2
        m_hat = m / (1 - cfg.adam_beta1**t)
        v_hat = v / (1 - cfg.adam_beta2**t)
        theta = theta + cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)

    final_seed, boot_seed = (int(c.generate_state(1)[0]) for c in ss.spawn(2))
    dist = outcome_distribution(instance, best.params, noise)
    ledger.circuit_evaluations += 1
    final_counts = sample(dist, n_final, final_seed)
    ledger.final_eval_shots += n_final
    final_eval = compute_stats(instance, final_counts, seed=boot_seed)
    return RunResult(trials=tuple(trials), best_params=best.params,
                     best_bitstring=best.mode, best_objective=best.objective,
                     final_eval=final_eval, final_counts=final_counts,
                     ledger=ledger, stop_reason="budget")
