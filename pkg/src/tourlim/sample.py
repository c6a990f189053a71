"""Seeded random tournaments from a step kernel, self-converse pair sampling,
empirical degree data and convergence diagnostics.

Randomness contract: PCG64 streams derived from (seed, stream key) via
SeedSequence spawn keys, one independent stream per repetition, so identical
configuration yields bit-identical samples and repetitions may run in any
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DegreeDistribution,
    DigraphPattern,
    GeneralizedTournament,
    StepKernel,
    ValidationError,
    degree_distribution,
    scores_of_tournament,
    wasserstein1,
)
from .density import density_finite, density_kernel


@dataclass(frozen=True)
class SampleConfig:
    n: int
    seed: int = 0
    reps: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("sample size n must be at least 1")
        if self.reps < 1:
            raise ValidationError("repetition count must be at least 1")
        if self.seed < 0:
            raise ValidationError("seed must be a non-negative integer")


def _rng(seed: int, key) -> np.random.Generator:
    if not isinstance(key, tuple):
        key = (key,)
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key))
    )


def _cells_of(x: np.ndarray, blocks: int) -> np.ndarray:
    return np.minimum((x * blocks).astype(int), blocks - 1)


def random_step_kernel(n: int, seed: int = 0, rep=0) -> StepKernel:
    """A random kernel with i.i.d. uniform values above the diagonal and
    exact complements below it."""
    rng = _rng(seed, rep)
    u = rng.random((n, n))
    m = np.full((n, n), 0.5)
    iu = np.triu_indices(n, 1)
    m[iu] = u[iu]
    m[(iu[1], iu[0])] = 1.0 - u[iu]
    return StepKernel(m)


def sample_tournament(w: StepKernel, cfg: SampleConfig, rep=0) -> GeneralizedTournament:
    """One W-random tournament G(n, W).

    Draws latent positions X_1..X_n uniformly, then orients each pair i < j
    towards j with probability W(X_i, X_j); for a step kernel only the cell
    of X matters.
    """
    rng = _rng(cfg.seed, rep)
    n = w.n
    x = rng.random(cfg.n)
    cells = _cells_of(x, n)
    probs = w.blocks[np.ix_(cells, cells)]
    u = rng.random((cfg.n, cfg.n))
    alpha = np.zeros((cfg.n, cfg.n))
    iu = np.triu_indices(cfg.n, 1)
    wins = (u[iu] < probs[iu]).astype(float)
    alpha[iu] = wins
    alpha[(iu[1], iu[0])] = 1.0 - wins
    return GeneralizedTournament(alpha)


def witness_permutation(n: int) -> np.ndarray:
    """The vertex swap v_i <-> w_i on the 2n vertices of a paired sample."""
    return np.concatenate([np.arange(n, 2 * n), np.arange(n)])


def is_selfconverse_under(g: GeneralizedTournament, perm: np.ndarray) -> bool:
    """Exact check that relabelling by perm reverses every orientation."""
    perm = np.asarray(perm)
    relabelled = g.alpha[np.ix_(perm, perm)]
    return bool(np.array_equal(relabelled, g.alpha.T))


def sample_self_converse(
    w: StepKernel, sigma: np.ndarray, cfg: SampleConfig, rep=0
) -> GeneralizedTournament:
    """A self-converse random tournament on 2n vertices {v_1..v_n, w_1..w_n}.

    Requires a block involution sigma with W(x, y) = W(sigma(y), sigma(x)).
    The v-side is an ordinary W-random tournament; w-edges mirror reversed
    v-edges; cross pairs (v_i, w_j) with i <= j are drawn with probability
    W(X_i, sigma(X_j)) and the remaining cross pairs copy their mirrors,
    so that swapping v_i <-> w_i reverses the whole edge set exactly.
    The diagonal pair (v_i, w_i) is its own mirror and is simply drawn.
    """
    n = w.n
    sigma = np.asarray(sigma, dtype=int)
    if sigma.shape != (n,) or sorted(sigma.tolist()) != list(range(n)):
        raise ValidationError("sigma must be a permutation of the blocks")
    if not np.array_equal(sigma[sigma], np.arange(n)):
        raise ValidationError("sigma must be an involution")
    pulled = w.blocks[np.ix_(sigma, sigma)].T
    if np.max(np.abs(pulled - w.blocks)) > 1e-12:
        raise ValidationError(
            "kernel is not strongly self-converse under sigma"
        )

    rng = _rng(cfg.seed, rep)
    m = cfg.n
    x = rng.random(m)
    cells = _cells_of(x, n)
    sig_cells = sigma[cells]

    u_vv = rng.random((m, m))
    u_vw = rng.random((m, m))

    vv = np.zeros((m, m), dtype=bool)  # vv[i, j]: edge v_i -> v_j present
    iu = np.triu_indices(m, 1)
    vv[iu] = u_vv[iu] < w.blocks[cells[iu[0]], cells[iu[1]]]

    vw = np.zeros((m, m), dtype=bool)  # vw[i, j]: edge v_i -> w_j present
    il = np.tril_indices(m, 0)  # pairs i <= j as (j, i) indices
    j_idx, i_idx = il
    vw[i_idx, j_idx] = u_vw[i_idx, j_idx] < w.blocks[cells[i_idx], sig_cells[j_idx]]
    vw[j_idx, i_idx] = vw[i_idx, j_idx]  # forced mirrors (no-op on the diagonal)

    alpha = np.zeros((2 * m, 2 * m))
    v, ww = slice(0, m), slice(m, 2 * m)
    a_vv = np.zeros((m, m))
    a_vv[iu] = vv[iu].astype(float)
    a_vv[(iu[1], iu[0])] = 1.0 - a_vv[iu]
    alpha[v, v] = a_vv
    alpha[ww, ww] = a_vv.T  # w_i -> w_j iff v_j -> v_i
    a_vw = vw.astype(float)
    alpha[v, ww] = a_vw
    alpha[ww, v] = 1.0 - a_vw.T
    out = GeneralizedTournament(alpha)
    assert is_selfconverse_under(out, witness_permutation(m))
    return out


def empirical_degree_distribution(g: GeneralizedTournament) -> DegreeDistribution:
    """The multiset of normalised out-scores d_i / n as an atomic law."""
    scores = np.asarray(scores_of_tournament(g).values, dtype=float)
    return DegreeDistribution.from_samples(scores / g.n)


@dataclass(frozen=True)
class ConvergenceRow:
    pattern: str
    n: int
    mean: float
    stderr: float
    exact: float


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    rows: tuple
    w1_samples: dict  # size -> tuple of per-rep Wasserstein-1 distances

    def to_csv(self) -> str:
        lines = ["pattern,n,mean,stderr,exact"]
        for r in self.rows:
            lines.append(f"{r.pattern},{r.n},{r.mean!r},{r.stderr!r},{r.exact!r}")
        return "\n".join(lines) + "\n"


def _mean_stderr(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def convergence_report(
    w: StepKernel,
    patterns: dict[str, DigraphPattern],
    sizes,
    cfg: SampleConfig,
) -> ConvergenceReport:
    """Empirical injective densities and degree-distribution distances of
    W-random tournaments against their kernel values, per pattern and size.

    The per-size Wasserstein-1 samples are reported both as summary rows
    (pattern name "degree_w1", exact 0) and raw in ``w1_samples``.
    """
    target = degree_distribution(w)
    exact = {name: density_kernel(f, w) for name, f in patterns.items()}
    rows = []
    w1_samples: dict[int, tuple] = {}
    stats: dict[str, dict[int, list[float]]] = {name: {} for name in patterns}
    for si, size in enumerate(sizes):
        w1s = []
        for r in range(cfg.reps):
            g = sample_tournament(w, SampleConfig(size, cfg.seed, 1), rep=(si, r))
            for name, f in patterns.items():
                stats[name].setdefault(size, []).append(density_finite(f, g, "inj"))
            w1s.append(wasserstein1(empirical_degree_distribution(g), target))
        w1_samples[size] = tuple(w1s)
    for name in patterns:
        for size in sizes:
            mean, stderr = _mean_stderr(stats[name][size])
            rows.append(ConvergenceRow(name, size, mean, stderr, exact[name]))
    for size in sizes:
        mean, stderr = _mean_stderr(w1_samples[size])
        rows.append(ConvergenceRow("degree_w1", size, mean, stderr, 0.0))
    return ConvergenceReport(tuple(rows), w1_samples)
