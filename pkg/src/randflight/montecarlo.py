"""
Seeded Monte Carlo simulation of terminal positions.

Random streams
--------------
Samples are produced in chunks of ``CHUNK_SIZE``.  Chunk ``j`` of a batch
with seed ``s`` draws from ``Philox(SeedSequence(s, spawn_key=(j,)))``, a
counter-based generator, so each chunk is independent of how (or whether)
the others are computed.  The output is identical for any number of
workers; the chunking is part of the reproducibility contract.

Within a chunk, the first uniform of every sample picks the initial
direction and later uniforms give the exponential holding times by
inversion, ``tau = -log(1 - u) / lambda``, drawn round by round for the
samples still moving.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .densities import FlightParams
from .errors import DomainError

CHUNK_SIZE = 2 ** 16

TELEGRAPH = "telegraph"
PLANAR = "planar"
MARGINAL = "marginal"


@dataclass(frozen=True)
class SampleBatch:
    """
    Terminal positions of ``n`` independent paths at time ``horizon``.

    ``boundary_flags`` marks paths with no Poisson event before ``horizon``;
    those, and only those up to events of probability ~1e-6, end on the
    boundary of the support.
    ``positions`` has shape ``(n,)`` for one-dimensional kinds and
    ``(n, 2)`` for planar batches.  Arrays are made read-only.
    """

    params: FlightParams
    horizon: float
    n: int
    seed: int
    kind: str
    positions: np.ndarray = field(repr=False)
    boundary_flags: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.positions.setflags(write=False)
        self.boundary_flags.setflags(write=False)

    @property
    def boundary_fraction(self) -> float:
        return float(self.boundary_flags.mean())


def _validate(p, t, n, seed):
    if not isinstance(p, FlightParams):
        raise DomainError("params must be a FlightParams instance")
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"horizon must be positive, got {t!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"sample count must be a positive integer, got {n!r}")
    if int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Generator for chunk ``chunk`` of a batch seeded with ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def _holding_times(rng, lam, size):
    return -np.log1p(-rng.random(size)) / lam


def _telegraph_chunk(p, t, size, rng):
    # Signed time spent moving right minus left; position = c * signed.
    sign = np.where(rng.random(size) < 0.5, 1.0, -1.0)
    signed = np.zeros(size)
    elapsed = np.zeros(size)
    active = np.arange(size)
    first = True
    while active.size:
        tau = _holding_times(rng, p.lam, active.size)
        left = t - elapsed[active]
        stop = tau >= left
        dt = np.where(stop, left, tau)
        signed[active] += sign[active] * dt
        elapsed[active] += dt
        sign[active] = -sign[active]
        if first:
            straight = stop
            first = False
        active = active[~stop]
    return p.c * signed, straight


def _planar_chunk(p, t, size, rng):
    angle = 2.0 * np.pi * rng.random(size)
    pos = np.zeros((size, 2))
    elapsed = np.zeros(size)
    active = np.arange(size)
    first = True
    while active.size:
        tau = _holding_times(rng, p.lam, active.size)
        left = t - elapsed[active]
        stop = tau >= left
        dt = np.where(stop, left, tau)
        a = angle[active]
        pos[active, 0] += dt * np.cos(a)
        pos[active, 1] += dt * np.sin(a)
        elapsed[active] += dt
        if first:
            straight = stop
            first = False
        moving = active[~stop]
        angle[moving] = 2.0 * np.pi * rng.random(moving.size)
        active = moving
    return p.c * pos, straight


def _simulate(kernel, p, t, n, seed, workers):
    bounds = [(lo, min(lo + CHUNK_SIZE, n)) for lo in range(0, n, CHUNK_SIZE)]

    def run(j):
        lo, hi = bounds[j]
        return kernel(p, t, hi - lo, chunk_generator(seed, j))

    if workers and workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(bounds))))
    else:
        parts = [run(j) for j in range(len(bounds))]
    return np.concatenate([a for a, _ in parts]), np.concatenate([b for _, b in parts])


def simulate_telegraph(p: FlightParams, t: float, n: int, seed: int,
                       workers: Optional[int] = None) -> SampleBatch:
    """Terminal positions of ``n`` telegraph paths started at 0 with velocity ``+-c``."""
    _validate(p, t, n, seed)
    x, straight = _simulate(_telegraph_chunk, p, t, int(n), seed, workers)
    return SampleBatch(p, float(t), int(n), int(seed), TELEGRAPH, x, straight)


def simulate_planar(p: FlightParams, t: float, n: int, seed: int,
                    workers: Optional[int] = None) -> SampleBatch:
    """Terminal positions of ``n`` planar random-flight paths started at the origin."""
    _validate(p, t, n, seed)
    xy, straight = _simulate(_planar_chunk, p, t, int(n), seed, workers)
    ct = p.c * t
    r = np.hypot(xy[:, 0], xy[:, 1])
    # straight paths can round a few ulps past the circle; pull them back inside
    over = r > ct
    while np.any(over):
        xy[over] *= (ct / r[over] * (1.0 - 2.0 ** -52))[:, None]
        r = np.hypot(xy[:, 0], xy[:, 1])
        over = r > ct
    return SampleBatch(p, float(t), int(n), int(seed), PLANAR, xy, straight)


def project_marginal(batch: SampleBatch, axis: int) -> SampleBatch:
    """Coordinate ``axis`` (1 or 2) of a planar batch, as a scalar batch."""
    if batch.kind != PLANAR:
        raise DomainError(f"can only project planar batches, got {batch.kind!r}")
    if axis not in (1, 2):
        raise DomainError(f"axis must be 1 or 2, got {axis!r}")
    x = np.array(batch.positions[:, axis - 1])
    return SampleBatch(batch.params, batch.horizon, batch.n, batch.seed, MARGINAL,
                       x, np.zeros(batch.n, dtype=bool))


def write_samples_csv(batch: SampleBatch, fh) -> None:
    """Write raw positions with a ``x`` or ``x1,x2`` header, 17 significant digits."""
    writer = csv.writer(fh, lineterminator="\n")
    if batch.positions.ndim == 2:
        writer.writerow(["x1", "x2"])
        for a, b in batch.positions:
            writer.writerow([f"{a:.17g}", f"{b:.17g}"])
    else:
        writer.writerow(["x"])
        for a in batch.positions:
            writer.writerow([f"{a:.17g}"])
