"""Population kinetics: generator assembly, evolution, steady states.

The master equation dp/dt = G p is linear with a tiny dense generator,
so time propagation uses the matrix exponential step by step; there is
no stiffness limit to manage.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm, null_space

from .errors import DomainError, NonUniqueSteadyState, StiffnessFailure
from .params import SystemParams, critical_j
from .rates_single import CHANNELS, channel_rate_matrix

# Entries below this magnitude are roundoff; anything more negative
# signals an integrator problem.
_CLIP = 1e-12


def _clean_populations(p: np.ndarray) -> np.ndarray:
    if p.min() < -_CLIP:
        raise StiffnessFailure("population %.3e below -%g" % (p.min(), _CLIP))
    out = np.where(p < 0.0, 0.0, p)
    total = out.sum()
    if abs(total - 1.0) > 1e-9:
        raise StiffnessFailure("normalization drifted to %.12f" % total)
    return out / total


@dataclass(frozen=True)
class PopulationVector:
    """Probabilities p_j over rotor levels at one instant."""

    p: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("populations must form a nonempty vector")
        arr = _clean_populations(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @classmethod
    def delta(cls, j0: int, jmax: int, time: float = 0.0) -> "PopulationVector":
        if not 0 <= j0 <= jmax:
            raise DomainError("j0 outside 0..jmax")
        p = np.zeros(jmax + 1)
        p[j0] = 1.0
        return cls(p=p, time=time)

    @property
    def jmax(self) -> int:
        return self.p.size - 1

    def mean_j(self) -> float:
        return float(np.arange(self.p.size) @ self.p)

    def entropy(self) -> float:
        mask = self.p > 0.0
        return float(-(self.p[mask] @ np.log(self.p[mask])))


@dataclass(frozen=True)
class Generator:
    """Conservative rate generator M with M[j', j] = Gamma_{j -> j'}."""

    matrix: np.ndarray
    channels: tuple
    jmax: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        n = self.jmax + 1
        if m.shape != (n, n):
            raise DomainError("generator shape does not match jmax")
        off = m - np.diag(np.diagonal(m))
        if off.min() < 0.0:
            raise DomainError("negative off-diagonal rate")
        colsum = np.abs(m.sum(axis=0))
        scale = np.maximum(1.0, np.abs(np.diagonal(m)))
        if np.any(colsum > 1e-12 * scale):
            raise DomainError("columns do not sum to zero")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def assemble_generator(p: SystemParams, jmax: int, channels: Sequence[str],
                       quadrature=None, threads: int = 1) -> Generator:
    """Sum the requested channel matrices into a conservative generator."""
    channels = tuple(channels)
    for c in channels:
        if c not in CHANNELS:
            raise DomainError("unknown channel %r" % c)
    n = jmax + 1
    gamma = np.zeros((n, n))
    for c in channels:
        gamma += channel_rate_matrix(p, jmax, c, quadrature, threads).gamma
    m = gamma.T.copy()
    np.fill_diagonal(m, 0.0)
    m -= np.diag(m.sum(axis=0))
    return Generator(matrix=m, channels=channels, jmax=jmax)


def evolve(p0: PopulationVector, g: Generator,
           t_grid: Sequence[float]) -> tuple:
    """Propagate p0 through the time grid; exact for the linear system.

    Returns one PopulationVector per grid time.  The grid must be
    nondecreasing and start at or after p0.time.
    """
    t_grid = [float(t) for t in t_grid]
    if any(b < a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("time grid must be nondecreasing")
    if t_grid and t_grid[0] < p0.time:
        raise DomainError("grid starts before the initial time")
    if g.jmax != p0.jmax:
        raise DomainError("generator and populations disagree on jmax")
    out = []
    current = np.array(p0.p)
    t_prev = p0.time
    step_cache = {}
    for t in t_grid:
        dt = t - t_prev
        if dt > 0.0:
            prop = step_cache.get(dt)
            if prop is None:
                prop = expm(g.matrix * dt)
                step_cache[dt] = prop
            current = prop @ current
        out.append(PopulationVector(p=current, time=t))
        current = out[-1].p
        t_prev = t
    leak = truncation_leak(out)
    if leak > 1e-6:
        warnings.warn("top two levels reached %.3e of the mass; "
                      "raise jmax" % leak, stacklevel=2)
    return tuple(out)


def truncation_leak(traj: Sequence[PopulationVector]) -> float:
    """Largest combined mass of the top two levels along a trajectory."""
    return max(float(pv.p[-2:].sum()) for pv in traj) if traj else 0.0


def _sector_indices(n: int, parity: int):
    return np.arange(parity, n, 2)


def steady_state(g: Generator, seed=None) -> PopulationVector:
    """Normalized p with G p = 0.

    When parity splits the chain into disconnected sectors the null
    space is degenerate; a seed (PopulationVector or parity 0/1)
    selects the sector.  Raises NonUniqueSteadyState with the computed
    dimension when the state remains ambiguous.
    """
    matrix = g.matrix
    indices = None
    if seed is not None:
        if isinstance(seed, PopulationVector):
            support = np.flatnonzero(seed.p > 0.0)
            parities = set(int(j) % 2 for j in support)
            if len(parities) != 1:
                raise DomainError("seed support spans both parity sectors")
            parity = parities.pop()
        else:
            parity = int(seed)
            if parity not in (0, 1):
                raise DomainError("parity seed must be 0 or 1")
        indices = _sector_indices(g.jmax + 1, parity)
        matrix = matrix[np.ix_(indices, indices)]
    basis = null_space(matrix, rcond=1e-10)
    dim = basis.shape[1]
    if dim == 0:
        raise NonUniqueSteadyState(0, "no null vector found at rcond=1e-10")
    if dim > 1:
        raise NonUniqueSteadyState(dim)
    v = basis[:, 0]
    if v.sum() < 0.0:
        v = -v
    if v.min() < -1e-9:
        raise NonUniqueSteadyState(dim, "null vector changes sign")
    v = np.where(v < 0.0, 0.0, v)
    v /= v.sum()
    full = v
    if indices is not None:
        full = np.zeros(g.jmax + 1)
        full[indices] = v
    residual = float(np.abs(g.matrix @ full).max())
    scale = max(1.0, float(np.abs(g.matrix).max()))
    if residual > 1e-10 * scale:
        raise NonUniqueSteadyState(dim, "residual %.3e too large" % residual)
    return PopulationVector(p=full)


@dataclass(frozen=True)
class TrajectoryDiagnostics:
    """Per-time summaries of a trajectory."""

    time: np.ndarray
    mean_j: np.ndarray
    mean_j_sq: np.ndarray
    mass_below_jc1: np.ndarray
    even_mass: np.ndarray
    odd_mass: np.ndarray
    entropy: np.ndarray
    norm: np.ndarray


def diagnostics(traj: Sequence[PopulationVector],
                p: SystemParams) -> TrajectoryDiagnostics:
    """Mean angular momentum, sector masses and entropy along traj.

    mass_below_jc1 counts population under floor(j_c1), the lowest
    level reachable by phonon emission in the macro regime.
    """
    if not traj:
        raise DomainError("empty trajectory")
    n = traj[0].p.size
    js = np.arange(n)
    jj = js * (js + 1.0)
    j_c1 = math.floor(critical_j(p)[1])
    rows = len(traj)
    out = {name: np.zeros(rows) for name in
           ("time", "mean_j", "mean_j_sq", "mass_below_jc1",
            "even_mass", "odd_mass", "entropy", "norm")}
    for i, pv in enumerate(traj):
        if pv.p.size != n:
            raise DomainError("trajectory mixes jmax values")
        out["time"][i] = pv.time
        out["mean_j"][i] = pv.mean_j()
        out["mean_j_sq"][i] = float(jj @ pv.p)
        out["mass_below_jc1"][i] = float(pv.p[:j_c1].sum())
        out["even_mass"][i] = float(pv.p[0::2].sum())
        out["odd_mass"][i] = float(pv.p[1::2].sum())
        out["entropy"][i] = pv.entropy()
        out["norm"][i] = float(pv.p.sum())
    return TrajectoryDiagnostics(**out)
