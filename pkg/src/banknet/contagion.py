"""Distress propagation on the ownership network, treated as an epidemic.

Degree-block SIR dynamics: within each degree class k the susceptible,
infected and recovered densities evolve as

    dI_k/dt = -mu * I_k + lam * k * S_k * Theta(t)
    dS_k/dt = -lam * k * S_k * Theta(t)
    dR_k/dt = +mu * I_k
    S_k = 1 - I_k - R_k

with Theta the probability that a randomly followed link points at an
infected bank.  On an uncorrelated network,

    Theta(t) = sum_k max(k-1, 0) P(k) I_k(t) / <k>,

degree-independent; classes with k = 0 own no links and are excluded
(the raw k-1 factor would contribute a spurious negative term).

An outbreak can only take hold above the threshold lam_c = <k>/<k^2>.
Networks with <k^2> = 0 have no links at all, reported as NoSpread.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .graph import (CountryGraph, DegreeView, Projection, degree_view,
                    degree_distribution as _empirical_distribution)

INFECTED_FLOOR = 1e-10
DENSITY_SLACK = 1e-6


class NoSpread:
    """Sentinel for graphs whose links cannot carry contagion (<k^2> = 0)."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "NoSpread"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NoSpread)

    def __hash__(self) -> int:
        return hash("NoSpread")


NO_SPREAD = NoSpread()


def is_no_spread(value: object) -> bool:
    return isinstance(value, NoSpread)


class StepSizeError(ValueError):
    """The integration step is too coarse for the requested rates."""


@dataclass(frozen=True)
class ThresholdResult:
    """Epidemic threshold of one degree view."""

    lambda_c: float | NoSpread
    mean_k: float
    mean_k2: float
    projection: Projection

    @property
    def no_spread(self) -> bool:
        return is_no_spread(self.lambda_c)


def epidemic_threshold(dv: DegreeView) -> ThresholdResult:
    """lam_c = <k>/<k^2> for the given degree view."""
    if dv.mean_k2 == 0:
        lam_c: float | NoSpread = NO_SPREAD
    else:
        lam_c = dv.mean_k / dv.mean_k2
    return ThresholdResult(lam_c, dv.mean_k, dv.mean_k2, dv.projection)


@dataclass(frozen=True)
class SirParams:
    """Rates and horizon for one SIR run.

    i0 is the initial infected density: a scalar applied to every degree
    class, or a map k -> I_k(0) (classes left out start at zero).
    """

    spreading_rate: float
    recovery_rate: float = 1.0
    i0: float | Mapping[int, float] = 1e-3
    t_max: float = 200.0
    dt: float = 0.01

    def __post_init__(self) -> None:
        if self.spreading_rate < 0:
            raise ValueError("spreading_rate must be >= 0")
        if self.recovery_rate <= 0:
            raise ValueError("recovery_rate must be > 0")
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.t_max < self.dt:
            raise ValueError("t_max must be at least one step")
        values = (self.i0.values() if isinstance(self.i0, Mapping)
                  else (self.i0,))
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"initial density {v} outside [0, 1]")

    def initial_density(self, k: int) -> float:
        if isinstance(self.i0, Mapping):
            return float(self.i0.get(k, 0.0))
        return float(self.i0)


@dataclass(frozen=True)
class SirTrajectory:
    """Stored mean-field run: one row per degree class per stored time.

    s, i, r have shape (times, classes); theta is the shared link-level
    infection probability series.  final_r aggregates sum_k P(k) R_k at
    the last stored time.
    """

    degree_classes: tuple[int, ...]
    probabilities: np.ndarray
    times: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    final_r: float

    @property
    def conservation_error(self) -> float:
        return float(np.max(np.abs(self.s + self.i + self.r - 1.0)))

    def aggregate_infected(self) -> np.ndarray:
        return self.i @ self.probabilities


def _check_distribution(distribution: Mapping[int, float]) -> None:
    if not distribution:
        raise ValueError("degree distribution is empty")
    total = math.fsum(distribution.values())
    if abs(total - 1.0) > 1e-12:
        raise ValueError(
            f"degree distribution sums to {total!r}, expected 1 within 1e-12")
    for k, p in distribution.items():
        if k < 0 or p < 0:
            raise ValueError(f"invalid degree class entry {k}: {p}")


def integrate_sir(dv: DegreeView,
                  degree_distribution: Mapping[int, float] | None,
                  params: SirParams) -> SirTrajectory:
    """Integrate the degree-block equations with fixed-step RK4.

    The distribution defaults to the empirical P(k) of dv.  Moments in
    the Theta closure come from the distribution actually integrated.
    Integration stops early once the aggregate infected density falls
    below 1e-10; a step that throws any density outside
    [-1e-6, 1 + 1e-6] raises StepSizeError.
    """
    dist = dict(degree_distribution) if degree_distribution is not None \
        else _empirical_distribution(dv)
    _check_distribution(dist)

    classes = tuple(sorted(dist))
    k = np.array(classes, dtype=float)
    p = np.array([dist[c] for c in classes], dtype=float)
    mean_k = float(np.sum(k * p))
    excess = np.maximum(k - 1.0, 0.0)
    lam = params.spreading_rate
    mu = params.recovery_rate

    def theta_of(i_vec: np.ndarray) -> float:
        if mean_k == 0:
            return 0.0
        return float(np.sum(excess * p * i_vec) / mean_k)

    def deriv(s_vec: np.ndarray, i_vec: np.ndarray
              ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        flow = lam * k * s_vec * theta_of(i_vec)
        return -flow, flow - mu * i_vec, mu * i_vec

    i_cur = np.array([params.initial_density(c) for c in classes])
    s_cur = 1.0 - i_cur
    r_cur = np.zeros_like(i_cur)

    dt = params.dt
    steps = int(math.ceil(params.t_max / dt - 1e-9))
    times = [0.0]
    s_rows = [s_cur.copy()]
    i_rows = [i_cur.copy()]
    r_rows = [r_cur.copy()]
    thetas = [theta_of(i_cur)]

    for step in range(1, steps + 1):
        ds1, di1, dr1 = deriv(s_cur, i_cur)
        ds2, di2, dr2 = deriv(s_cur + 0.5 * dt * ds1, i_cur + 0.5 * dt * di1)
        ds3, di3, dr3 = deriv(s_cur + 0.5 * dt * ds2, i_cur + 0.5 * dt * di2)
        ds4, di4, dr4 = deriv(s_cur + dt * ds3, i_cur + dt * di3)
        s_cur = s_cur + dt / 6.0 * (ds1 + 2 * ds2 + 2 * ds3 + ds4)
        i_cur = i_cur + dt / 6.0 * (di1 + 2 * di2 + 2 * di3 + di4)
        r_cur = r_cur + dt / 6.0 * (dr1 + 2 * dr2 + 2 * dr3 + dr4)

        stacked = np.concatenate((s_cur, i_cur, r_cur))
        if np.any(stacked < -DENSITY_SLACK) or np.any(stacked > 1.0 + DENSITY_SLACK):
            raise StepSizeError(
                f"densities left [0, 1] at t = {step * dt:.6g}; "
                f"dt = {dt} is too large for these rates, use a smaller step")

        times.append(step * dt)
        s_rows.append(s_cur.copy())
        i_rows.append(i_cur.copy())
        r_rows.append(r_cur.copy())
        thetas.append(theta_of(i_cur))

        if float(np.sum(p * i_cur)) < INFECTED_FLOOR:
            break

    r_arr = np.array(r_rows)
    final_r = float(np.sum(p * r_arr[-1]))
    return SirTrajectory(classes, p, np.array(times), np.array(s_rows),
                         np.array(i_rows), r_arr, np.array(thetas), final_r)


def simulate_sir_mc(g: CountryGraph, params: SirParams, replicas: int,
                    seed: int = 0,
                    projection: Projection = Projection.UNDIRECTED_SIMPLE
                    ) -> np.ndarray:
    """Discrete-time stochastic SIR on the projected contact graph.

    Per step each infected node independently infects each susceptible
    neighbor with probability 1 - exp(-lam*dt) and recovers with
    probability 1 - exp(-mu*dt).  Each replica draws from an RNG keyed
    by (seed, replica index), so results do not depend on execution
    order.  Returns the fraction of nodes ever infected per replica
    (equal to the recovered fraction once the epidemic has died out).
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    n = g.node_count
    if n == 0:
        raise ValueError("cannot simulate on an empty graph")

    pairs = sorted({(s, d) for s, d, _ in g.edges}
                   | {(d, s) for s, d, _ in g.edges})
    rows = np.array([a for a, _ in pairs], dtype=np.int64)
    cols = np.array([b for _, b in pairs], dtype=np.int64)
    adjacency = sparse.csr_matrix(
        (np.ones(len(pairs)), (rows, cols)), shape=(n, n))

    if isinstance(params.i0, Mapping):
        dv = degree_view(g, projection)
        density = sum(params.initial_density(int(round(dv.degrees[c])))
                      for c in g.nodes) / n
    else:
        density = float(params.i0)
    seed_count = min(n, max(1, round(density * n)))

    p_infect = 1.0 - math.exp(-params.spreading_rate * params.dt)
    p_recover = 1.0 - math.exp(-params.recovery_rate * params.dt)
    max_steps = int(math.ceil(params.t_max / params.dt - 1e-9))

    finals = np.empty(replicas)
    for rep in range(replicas):
        rng = np.random.default_rng((seed, rep))
        infected = np.zeros(n, dtype=bool)
        seeds = rng.choice(n, size=seed_count, replace=False)
        infected[seeds] = True
        recovered = np.zeros(n, dtype=bool)

        for _ in range(max_steps):
            if not infected.any():
                break
            exposures = adjacency @ infected.astype(np.float64)
            susceptible = ~(infected | recovered)
            p_node = 1.0 - np.power(1.0 - p_infect, exposures)
            catch = susceptible & (rng.random(n) < p_node)
            heal = infected & (rng.random(n) < p_recover)
            infected = (infected & ~heal) | catch
            recovered |= heal

        finals[rep] = (np.count_nonzero(infected)
                       + np.count_nonzero(recovered)) / n
    return finals
