"""Walk dynamics: coin, random dephasing, shift; trajectories and ensembles.

One step applies the coin to the direction register, then multiplies each
direction amplitude by exp(i * theta_a) with freshly drawn angles, then
shifts each direction component by its unit vector.  With no phase noise
this is the plain unitary walk.

Two execution paths exist on purpose: the dict-based operations on
``WalkState`` are the readable reference; trajectories and ensembles run on
the indexed-lattice engine (see ``lattice``/``kernels``) which is orders of
magnitude faster and is tested against the reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import state as st
from .kernels import kernel_name, step_kernel
from .lattice import LatticeIndex
from .state import Distribution, WalkState

RNG_NAME = "numpy-pcg64/seedsequence-spawn"


# ---------------------------------------------------------------------------
# reference operations on sparse WalkState


def shift(walk: WalkState) -> WalkState:
    """Move each direction component one unit step along its direction."""
    out: dict[st.Position, np.ndarray] = {}
    d = walk.coin_size
    for x, v in walk.amplitudes.items():
        for a in range(d):
            if v[a] == 0:
                continue
            y = st.translate(x, walk.dim, a)
            tgt = out.get(y)
            if tgt is None:
                tgt = out[y] = np.zeros(d, dtype=np.complex128)
            tgt[a] += v[a]
    return WalkState(walk.dim, out)


def apply_coin(walk: WalkState, coin: np.ndarray) -> WalkState:
    if coin.shape != (walk.coin_size, walk.coin_size):
        raise ValueError(
            f"coin shape {coin.shape} does not match coin size {walk.coin_size}"
        )
    return WalkState(walk.dim, {x: coin @ v for x, v in walk.amplitudes.items()})


def apply_phases(walk: WalkState, angles: np.ndarray) -> WalkState:
    factors = np.exp(1j * np.asarray(angles, dtype=np.float64))
    if factors.shape != (walk.coin_size,):
        raise ValueError(f"expected {walk.coin_size} phase angles, got {factors.shape}")
    return WalkState(walk.dim, {x: v * factors for x, v in walk.amplitudes.items()})


@dataclass(frozen=True)
class PhaseDistribution:
    """Per-step phase noise: 'none', 'uniform' on (-pi, pi], or 'gaussian'."""

    kind: str = "none"
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "uniform", "gaussian"):
            raise ValueError(f"unknown phase distribution kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    @property
    def randomized(self) -> bool:
        return self.kind != "none"


def sample_phases(dist: PhaseDistribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one vector of independent angles, one per direction."""
    if dist.kind == "uniform":
        return rng.uniform(-np.pi, np.pi, size)
    if dist.kind == "gaussian":
        return rng.normal(0.0, dist.sigma, size)
    raise ValueError("phase distribution 'none' defines no sampling")


@dataclass(frozen=True)
class StepConfig:
    dim: int
    coin: np.ndarray
    phase_dist: PhaseDistribution = PhaseDistribution("none")
    initial_coin_state: np.ndarray | None = None

    def __post_init__(self):
        if self.coin.shape != (2 * self.dim, 2 * self.dim):
            raise ValueError(
                f"coin shape {self.coin.shape} does not match 2*dim = {2 * self.dim}"
            )

    def initial_state(self) -> WalkState:
        if self.initial_coin_state is None:
            return st.new_initial_state(self.dim)
        return st.new_initial_state_with_coin_state(self.dim, self.initial_coin_state)


def step(walk: WalkState, config: StepConfig, angles: np.ndarray | None = None) -> WalkState:
    """One full step: coin, then phases (if any), then shift."""
    if config.phase_dist.randomized and angles is None:
        raise ValueError("randomized phase distribution requires a phase vector")
    if not config.phase_dist.randomized and angles is not None:
        raise ValueError("phase vector given but phase distribution is 'none'")
    walk = apply_coin(walk, config.coin)
    if angles is not None:
        walk = apply_phases(walk, angles)
    return shift(walk).prune()


# ---------------------------------------------------------------------------
# fast engine


class _Engine:
    """Dense-over-reachable-set propagator bound to one LatticeIndex."""

    def __init__(self, index: LatticeIndex, config: StepConfig):
        self.index = index
        self.config = config
        d = index.coin_size
        self.coin = np.ascontiguousarray(config.coin, dtype=np.complex128)
        self.bufs = [
            np.zeros((index.n_sites(0), d), dtype=np.complex128),
            np.zeros((index.n_sites(1), d), dtype=np.complex128),
        ]

    def run(self, n: int, rng: np.random.Generator | None, on_step) -> None:
        """Evolve n steps from the initial state; call on_step(k, amps, parity,
        n_active) after every step (and for k = 0)."""
        cfg = self.config
        idx = self.index
        if n > idx.n_max:
            raise ValueError(f"n = {n} exceeds the index capacity {idx.n_max}")
        d = idx.coin_size
        coin_vec = (
            np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)
            if cfg.initial_coin_state is None
            else np.asarray(cfg.initial_coin_state, dtype=np.complex128)
        )
        self.bufs[0][: idx.prefix[0][0]] = 0.0
        self.bufs[0][idx.origin_index()] = coin_vec
        on_step(0, self.bufs[0], 0, idx.prefix[0][0])
        for k in range(1, n + 1):
            src_par = (k - 1) & 1
            dst_par = k & 1
            phases = None
            if cfg.phase_dist.randomized:
                angles = sample_phases(cfg.phase_dist, d, rng)
                phases = np.exp(1j * angles)
            step_kernel(
                self.bufs[src_par],
                self.bufs[dst_par],
                self.coin,
                phases,
                idx.neighbor[dst_par],
                int(idx.prefix[src_par][k - 1]),
                int(idx.prefix[dst_par][k]),
            )
            on_step(k, self.bufs[dst_par], dst_par, int(idx.prefix[dst_par][k]))


def _site_probs(amps: np.ndarray, n_active: int) -> np.ndarray:
    a = amps[:n_active]
    return (a.real**2 + a.imag**2).sum(axis=1)


@dataclass
class TrajectoryRecord:
    step: int
    distribution: Distribution
    dispersion: float


def run_trajectory(
    config: StepConfig,
    n: int,
    seed,
    index: LatticeIndex | None = None,
    record_distributions: bool = True,
) -> list[TrajectoryRecord]:
    """One walk realization; deterministic for a fixed seed.

    Records the position distribution (optional) and its second moment after
    every step, including step 0.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if index is None:
        index = LatticeIndex(config.dim, n)
    engine = _Engine(index, config)
    rng = np.random.default_rng(seed)
    records: list[TrajectoryRecord] = []

    def on_step(k, amps, parity, n_active):
        probs = _site_probs(amps, n_active)
        disp = float(probs @ index.sqnorm[parity][:n_active])
        dist = (
            index.distribution(probs, parity, n_active)
            if record_distributions
            else Distribution(config.dim, {})
        )
        records.append(TrajectoryRecord(k, dist, disp))

    engine.run(n, rng if config.phase_dist.randomized else None, on_step)
    return records


@dataclass
class EnsembleResult:
    """Monte Carlo ensemble summary.

    ``dispersion_mean[k]`` is the average over trajectories of each
    trajectory's own second moment at step k (the estimator used for the
    dispersion plots); by linearity it coincides with the second moment of
    ``mean_distributions[k]`` where recorded.
    """

    dim: int
    steps: int
    trajectories: int
    master_seed: int
    rng_name: str
    recorded_steps: list[int]
    dispersion_mean: np.ndarray
    dispersion_stderr: np.ndarray
    mean_distributions: dict[int, Distribution] | None
    config_echo: dict = field(default_factory=dict)


def trajectory_seeds(master_seed: int, count: int) -> list[np.random.SeedSequence]:
    """Per-trajectory seeds: SeedSequence(master_seed).spawn(count).

    This derivation is part of the reproducibility contract; results depend
    only on (master_seed, trajectory index).
    """
    return np.random.SeedSequence(master_seed).spawn(count)


# trajectories are reduced in fixed-size chunks so that results are bitwise
# independent of the worker count
CHUNK = 16

_INDEX_CACHE: dict[tuple[int, int], LatticeIndex] = {}


def _cached_index(dim: int, n: int) -> LatticeIndex:
    key = (dim, n)
    if key not in _INDEX_CACHE:
        _INDEX_CACHE.clear()
        _INDEX_CACHE[key] = LatticeIndex(dim, n)
    return _INDEX_CACHE[key]


def _run_chunk(args):
    """Evolve trajectories [start, stop); returns their dispersions and the
    chunk's summed site-probability vectors at the recorded steps."""
    config, n, master_seed, start, stop, recorded = args
    index = _cached_index(config.dim, n)
    engine = _Engine(index, config)
    seeds = trajectory_seeds(master_seed, stop)[start:stop]
    disp = np.zeros((stop - start, n + 1))
    prob_acc = (
        {k: np.zeros(index.prefix[k & 1][k]) for k in recorded}
        if recorded is not None
        else None
    )
    for row, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)

        def on_step(k, amps, parity, n_active, row=row):
            probs = _site_probs(amps, n_active)
            disp[row, k] = probs @ index.sqnorm[parity][:n_active]
            if prob_acc is not None and k in prob_acc:
                prob_acc[k] += probs

        engine.run(n, rng if config.phase_dist.randomized else None, on_step)
    return disp, prob_acc


def run_ensemble(
    config: StepConfig,
    n: int,
    trajectories: int,
    master_seed: int,
    record_stride: int = 1,
    record_distributions: bool = True,
    index: LatticeIndex | None = None,
    config_echo: dict | None = None,
    threads: int = 1,
) -> EnsembleResult:
    """Average ``trajectories`` independent realizations.

    Per-trajectory seeds derive from the trajectory index alone, and chunk
    partials are combined in ascending order, so the result is a pure
    function of (config, n, trajectories, master_seed, record_stride) no
    matter how many worker processes run the chunks.
    """
    if trajectories < 1:
        raise ValueError("trajectories must be >= 1")
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if index is None:
        index = _cached_index(config.dim, n)
    else:
        _INDEX_CACHE[(config.dim, n)] = index
    recorded = sorted(set(range(0, n + 1, record_stride)) | {n})

    chunk_args = [
        (config, n, master_seed, lo, min(lo + CHUNK, trajectories),
         recorded if record_distributions else None)
        for lo in range(0, trajectories, CHUNK)
    ]
    if threads > 1 and len(chunk_args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_run_chunk, chunk_args))
    else:
        parts = [_run_chunk(a) for a in chunk_args]

    disp = np.vstack([p[0] for p in parts])
    prob_acc: dict[int, np.ndarray] | None = None
    if record_distributions:
        prob_acc = parts[0][1]
        for _, partial in parts[1:]:
            for k in prob_acc:
                prob_acc[k] += partial[k]

    mean = disp.mean(axis=0)
    if trajectories > 1:
        stderr = disp.std(axis=0, ddof=1) / np.sqrt(trajectories)
    else:
        stderr = np.zeros(n + 1)

    mean_dists = None
    if prob_acc is not None:
        mean_dists = {
            k: index.distribution(acc / trajectories, k & 1, len(acc))
            for k, acc in prob_acc.items()
        }

    return EnsembleResult(
        dim=config.dim,
        steps=n,
        trajectories=trajectories,
        master_seed=master_seed,
        rng_name=RNG_NAME,
        recorded_steps=recorded,
        dispersion_mean=mean,
        dispersion_stderr=stderr,
        mean_distributions=mean_dists,
        config_echo=dict(config_echo or {}, kernel=kernel_name()),
    )
