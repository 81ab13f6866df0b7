"""Real-coded genetic algorithm maximizing boresight LHCP realized gain.

Genes are ``lx1, lx2, ly1, ly2, wx1, wx2, wy1, wy2, X_L`` (plus the element
spacing when ``search_spacing`` is set). Operators: binary tournament,
blend crossover with ratio drawn from [-0.25, 1.25], Gaussian mutation,
single-elite carryover. Everything random comes from one seeded numpy
generator owned by :func:`run_ga`, so a run is fully reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .geometry import DEFAULT_SEGMENTS, ArrayDesign, MeshError, wavelength
from .metrics import analyze
from .mom import NumericalError

log = logging.getLogger(__name__)

PENALTY_DB = -100.0
GENE_NAMES = ("lx1", "lx2", "ly1", "ly2", "wx1", "wx2", "wy1", "wy2", "load_reactance")


@dataclass(frozen=True)
class SearchSpace:
    f0: float = 3.5e9
    length_bounds: tuple[float, float] = (0.3, 0.6)       # wavelengths
    width_bounds: tuple[float, float] = (0.005, 0.05)     # wavelengths
    reactance_bounds: tuple[float, float] = (-5000.0, 5000.0)
    spacing: float = 0.15                                  # wavelengths
    search_spacing: bool = False
    spacing_bounds: tuple[float, float] = (0.05, 0.3)      # wavelengths

    def __post_init__(self):
        for b in (self.length_bounds, self.width_bounds, self.reactance_bounds,
                  self.spacing_bounds):
            if not b[0] < b[1]:
                raise ValueError(f"bad bounds {b}")

    @property
    def lam(self):
        return wavelength(self.f0)

    @property
    def lower(self) -> np.ndarray:
        lo = [self.length_bounds[0] * self.lam] * 4 + [self.width_bounds[0] * self.lam] * 4
        lo.append(self.reactance_bounds[0])
        if self.search_spacing:
            lo.append(self.spacing_bounds[0] * self.lam)
        return np.array(lo)

    @property
    def upper(self) -> np.ndarray:
        hi = [self.length_bounds[1] * self.lam] * 4 + [self.width_bounds[1] * self.lam] * 4
        hi.append(self.reactance_bounds[1])
        if self.search_spacing:
            hi.append(self.spacing_bounds[1] * self.lam)
        return np.array(hi)

    @property
    def dim(self):
        return 10 if self.search_spacing else 9

    def contains(self, candidate) -> bool:
        x = np.asarray(candidate, dtype=float)
        return x.shape == (self.dim,) and bool(np.all((x >= self.lower) & (x <= self.upper)))

    def to_design(self, candidate) -> ArrayDesign:
        x = np.asarray(candidate, dtype=float)
        spacing = x[9] if self.search_spacing else self.spacing * self.lam
        return ArrayDesign.from_vector(x[:9], spacing, self.f0)


@dataclass(frozen=True)
class GAConfig:
    population: int = 40
    generations: int = 60
    tournament_size: int = 2
    crossover_prob: float = 0.9
    mutation_prob: float = 1.0 / 9.0
    mutation_sigma: float = 0.05
    elitism: int = 1
    rng_seed: int = 0
    segments: int = DEFAULT_SEGMENTS
    reference_impedance: float = 50.0

    def __post_init__(self):
        if self.population < 4 or self.population % 2:
            raise ValueError("population must be even and >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0 <= self.crossover_prob <= 1 or not 0 <= self.mutation_prob <= 1:
            raise ValueError("probabilities must lie in [0, 1]")
        if self.tournament_size < 1 or self.elitism < 0 or self.elitism >= self.population:
            raise ValueError("bad tournament size or elite count")


@dataclass
class GARun:
    best_per_generation: list = field(default_factory=list)   # (fitness dB, vector)
    final_best: tuple = None                                  # (design, fitness dB)
    evaluations: int = 0
    seed: int = 0

    @property
    def fitness_trace(self):
        return np.array([f for f, _ in self.best_per_generation])


def evaluate(candidate, f0=3.5e9, space: SearchSpace | None = None,
             segments=DEFAULT_SEGMENTS, z0=50.0) -> float:
    """Boresight LHCP realized gain (dB) of one candidate; -100 dB if unsolvable."""
    space = SearchSpace(f0=f0) if space is None else space
    if not space.contains(candidate):
        raise ValueError("candidate outside the search space")
    try:
        design = space.to_design(candidate)
        report, _ = analyze(design, segments, z0)
    except (MeshError, NumericalError, np.linalg.LinAlgError) as exc:
        log.debug("candidate penalized: %s", exc)
        return PENALTY_DB
    g = report.g_lhcp_db
    return float(g) if np.isfinite(g) else PENALTY_DB


def run_ga(space: SearchSpace, config: GAConfig, fitness=None, progress=None) -> GARun:
    """Evolve a population and return the best-so-far trace.

    ``fitness`` overrides the electromagnetic objective (used in tests);
    ``progress(generation, best_fitness)`` is called after each generation.
    """
    if fitness is None:
        def fitness(x):
            return evaluate(x, space.f0, space, config.segments, config.reference_impedance)

    rng = np.random.default_rng(config.rng_seed)
    lo, hi = space.lower, space.upper
    span = hi - lo
    npop = config.population
    run = GARun(seed=config.rng_seed)

    def score(pop):
        out = np.empty(len(pop))
        for i, x in enumerate(pop):
            assert np.all((x >= lo) & (x <= hi)), "candidate escaped the bounds"
            out[i] = fitness(x)
        run.evaluations += len(pop)
        return out

    def tournament(fit):
        idx = rng.integers(npop, size=config.tournament_size)
        return idx[np.argmax(fit[idx])]

    pop = lo + rng.random((npop, space.dim)) * span
    fit = score(pop)
    best = int(np.argmax(fit))
    run.best_per_generation.append((float(fit[best]), pop[best].copy()))

    for gen in range(1, config.generations + 1):
        order = np.argsort(-fit, kind="stable")
        elite = pop[order[:config.elitism]]
        elite_fit = fit[order[:config.elitism]]
        nkids = npop - config.elitism
        kids = []
        while len(kids) < nkids:
            p1, p2 = pop[tournament(fit)], pop[tournament(fit)]
            if rng.random() < config.crossover_prob:
                beta1 = rng.uniform(-0.25, 1.25, space.dim)
                beta2 = rng.uniform(-0.25, 1.25, space.dim)
                c1, c2 = p1 + beta1 * (p2 - p1), p2 + beta2 * (p1 - p2)
            else:
                c1, c2 = p1.copy(), p2.copy()
            kids.extend([c1, c2])
        kids = np.array(kids[:nkids])
        mask = rng.random(kids.shape) < config.mutation_prob
        kids = kids + mask * rng.normal(0.0, config.mutation_sigma * span, kids.shape)
        kids = np.clip(kids, lo, hi)

        pop = np.vstack([elite, kids])
        fit = np.concatenate([elite_fit, score(kids)])
        best = int(np.argmax(fit))
        prev = run.best_per_generation[-1][0]
        if fit[best] >= prev:
            run.best_per_generation.append((float(fit[best]), pop[best].copy()))
        else:  # unreachable with elitism >= 1
            run.best_per_generation.append(run.best_per_generation[-1])
        log.info("generation %d: best %.3f dB", gen, run.best_per_generation[-1][0])
        if progress is not None:
            progress(gen, run.best_per_generation[-1][0])

    f_best, x_best = run.best_per_generation[-1]
    run.final_best = (space.to_design(x_best), f_best)
    return run
