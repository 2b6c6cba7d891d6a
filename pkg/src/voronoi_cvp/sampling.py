"""Random generation: uniform cell samples, Gamma and cell-Laplace draws.

Geometry stays exact: uniform samplers emit dyadic-rational points (a fixed
number of fractional bits) and every emitted point passes the exact cell
membership test.  Floating point is confined to the scalar distributions
(Gamma radial factors, hit-and-run directions).

Randomness comes from numpy's PCG64; independent streams are derived from
one 64-bit seed via SeedSequence spawn keys, so experiments are reproducible
and trials can fan out without sharing generator state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import ContractViolation, SizeCapError
from .linalg import Vec
from .voronoi import VoronoiCellData


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling knobs shared across the package.

    `precision_bits` is both the dyadic grid resolution of emitted points
    and the bisection depth for hit-and-run chord endpoints.  `tv_epsilon`
    is the target total-variation distance from uniform (the solver only
    needs 1/4).  With method "auto", exact rejection is used up to
    `rejection_dim_max` and hit-and-run above.
    """

    seed: int = 0
    precision_bits: int = 128
    method: str = "auto"
    hit_and_run_steps: Optional[int] = None
    tv_epsilon: float = 0.25
    rejection_attempt_cap: int = 200_000
    rejection_dim_max: int = 6

    def __post_init__(self):
        if self.precision_bits < 32:
            raise ContractViolation("precision_bits must be at least 32")
        if not (0 < self.tv_epsilon < 1):
            raise ContractViolation("tv_epsilon must lie in (0, 1)")
        if self.method not in ("auto", "rejection", "hit_and_run"):
            raise ContractViolation(f"unknown sampling method {self.method!r}")


class SampleStream:
    """A named PCG64 stream; children are addressed by integer spawn paths."""

    def __init__(self, seed_seq: np.random.SeedSequence):
        self.seed_seq = seed_seq
        self.gen = np.random.Generator(np.random.PCG64(seed_seq))

    @classmethod
    def from_config(cls, cfg: SamplerConfig, *path: int) -> "SampleStream":
        return cls(np.random.SeedSequence(cfg.seed, spawn_key=tuple(path)))

    def child(self, *path: int) -> "SampleStream":
        return SampleStream(
            np.random.SeedSequence(
                self.seed_seq.entropy, spawn_key=tuple(self.seed_seq.spawn_key) + tuple(path)
            )
        )

    def getrandbits(self, k: int) -> int:
        words = (k + 63) // 64
        val = 0
        for w in self.gen.integers(0, 2**64, size=words, dtype=np.uint64):
            val = (val << 64) | int(w)
        return val & ((1 << k) - 1)

    def unit_fraction(self, bits: int) -> Fraction:
        """Dyadic uniform draw from [0, 1)."""
        return Fraction(self.getrandbits(bits), 1 << bits)

    def exponential_sum(self, k: int) -> float:
        return float(self.gen.standard_exponential(k).sum())

    def gauss_vec(self, n: int) -> list[float]:
        return [float(g) for g in self.gen.standard_normal(n)]


def stream_for(cfg: SamplerConfig, *path: int) -> SampleStream:
    return SampleStream.from_config(cfg, *path)


def uniform_voronoi_rejection(
    cell: VoronoiCellData, cfg: SamplerConfig, stream: Optional[SampleStream] = None
) -> Vec:
    """Exactly uniform cell sample (up to the dyadic grid) by rejection.

    Proposals are uniform over the bounding box [-R, R]^n from the outer
    sandwich radius; each proposal is membership-tested exactly.  Feasible
    while the cell volume is a workable fraction of the box volume, which
    is why the default method switches away from rejection in higher
    dimension.
    """
    stream = stream or SampleStream.from_config(cfg)
    n = cell.n
    r_up = linalg.sqrt_upper(cell.outer_radius_sq)
    m = 1 << cfg.precision_bits
    dx = r_up.denominator * m
    p = r_up.numerator
    for _ in range(cfg.rejection_attempt_cap):
        x_int = tuple(
            p * (2 * stream.getrandbits(cfg.precision_bits) - m + 1) for _ in range(n)
        )
        if cell.membership_scaled(x_int, dx):
            return tuple(Fraction(xi, dx) for xi in x_int)
    raise SizeCapError(
        "rejection sampler exceeded its attempt cap; use method='hit_and_run'"
    )


def default_hit_and_run_steps(cell: VoronoiCellData, cfg: SamplerConfig) -> int:
    """Step budget polynomial in (n, log(R/r), log(1/eps))."""
    n = cell.n
    ratio_sq = cell.outer_radius_sq / cell.inner_radius_sq
    log_ratio = max(1, (ratio_sq.numerator // ratio_sq.denominator).bit_length() // 2)
    log_eps = max(1, int(np.ceil(np.log2(1.0 / cfg.tv_epsilon))))
    return 8 * n * (n + log_ratio + log_eps)


def hit_and_run_uniform(
    cell: VoronoiCellData, cfg: SamplerConfig, stream: Optional[SampleStream] = None
) -> Vec:
    """Approximately uniform cell sample by the hit-and-run walk.

    Starts at the center of symmetry.  Each step draws a random direction,
    locates the chord endpoints by bisecting the exact membership predicate
    to `precision_bits`, and moves to a uniform dyadic point strictly inside
    the bracketing interval, so every iterate is a certified member.  Budget
    controls quality, never validity.
    """
    stream = stream or SampleStream.from_config(cfg)
    n = cell.n
    steps = cfg.hit_and_run_steps or default_hit_and_run_steps(cell, cfg)
    den = cell._den
    x: Vec = linalg.zeros(n)
    x_int: Sequence[int] = (0,) * n
    dx = 1
    snap_bits = cfg.precision_bits + 16
    for _ in range(steps):
        d = [Fraction(g) for g in stream.gauss_vec(n)]
        if not any(d):
            continue
        d_int, dd = linalg.scaled_ints(d)
        dots_x = [linalg.dot_int(w, x_int) for w in cell._vr_int]
        dots_d = [linalg.dot_int(w, d_int) for w in cell._vr_int]

        def on_chord(s: Fraction) -> bool:
            sp, sq = s.numerator, s.denominator
            lhs_a = 2 * den * dd * sq
            lhs_b = 2 * den * dx * sp
            rhs = dx * dd * sq
            for av, bv, nv in zip(dots_x, dots_d, cell._norm_int):
                if lhs_a * av + lhs_b * bv > nv * rhs:
                    return False
            return True

        ends = []
        for sign in (1, -1):
            s_in, s_out = Fraction(0), Fraction(sign)
            guard = 0
            while on_chord(s_out):
                s_in, s_out = s_out, 2 * s_out
                guard += 1
                if guard > 128:
                    raise ContractViolation("unbounded chord: cell is not bounded")
            for _ in range(cfg.precision_bits):
                mid = (s_in + s_out) / 2
                if on_chord(mid):
                    s_in = mid
                else:
                    s_out = mid
            ends.append(s_in)
        hi, lo = ends
        u = stream.unit_fraction(cfg.precision_bits)
        s_pt = lo + u * (hi - lo)
        moved = tuple(xi + s_pt * di for xi, di in zip(x, d))
        # snap to the dyadic grid when that stays inside, to cap coordinate growth
        g = 1 << snap_bits
        snapped = tuple(Fraction(round(xi * g), g) for xi in moved)
        s_int, sdx = linalg.scaled_ints(snapped)
        if cell.membership_scaled(s_int, sdx):
            x, x_int, dx = snapped, s_int, sdx
        else:
            x = moved
            x_int, dx = linalg.scaled_ints(x)
    return x


def uniform_sample(
    cell: VoronoiCellData, cfg: SamplerConfig, stream: Optional[SampleStream] = None
) -> Vec:
    """Uniform cell sample via the configured method ("auto" picks by dimension)."""
    method = cfg.method
    if method == "auto":
        method = "rejection" if cell.n <= cfg.rejection_dim_max else "hit_and_run"
    if method == "rejection":
        return uniform_voronoi_rejection(cell, cfg, stream)
    return hit_and_run_uniform(cell, cfg, stream)


# ---------------------------------------------------------------------------
# scalar distributions


def gamma_sample(k: int, theta: float, stream: SampleStream) -> float:
    """Gamma(k, theta) draw for integer shape: sum of k exponential(theta)."""
    if k < 1 or int(k) != k:
        raise ContractViolation("gamma shape must be a positive integer")
    if theta <= 0:
        raise ContractViolation("gamma scale must be positive")
    return theta * stream.exponential_sum(int(k))


def theta_for_dimension(n: int) -> float:
    """Radial scale making Gamma(n+1, theta) concentrate just above 1."""
    if n < 2:
        raise ContractViolation("radial scale is defined for n >= 2")
    return 1.0 / ((n + 1) - sqrt(2.0 * (n + 1)))


def gamma_factor_for_dimension(n: int) -> float:
    """Shrink factor: with probability >= 1/2 the radial draw lies in [1, 1/factor]."""
    if n < 2:
        raise ContractViolation("shrink factor is defined for n >= 2")
    return 1.0 / (1.0 + 2.0 * sqrt(2.0) / (sqrt(n + 1.0) - sqrt(2.0)))


@dataclass(frozen=True)
class LaplaceParams:
    """Scale of the cell-norm exponential distribution (density ~ e^{-||x||_V / theta})."""

    theta: float

    def __post_init__(self):
        if self.theta <= 0:
            raise ContractViolation("theta must be positive")

    @classmethod
    def for_dimension(cls, n: int) -> "LaplaceParams":
        return cls(theta=theta_for_dimension(n))


@dataclass(frozen=True)
class LaplaceSample:
    """A draw decomposed as radial * cell_sample, certifying its support."""

    point: Vec
    radial: float
    cell_sample: Vec


def laplace_voronoi_sample(
    cell: VoronoiCellData,
    params: LaplaceParams,
    cfg: SamplerConfig,
    stream: Optional[SampleStream] = None,
) -> LaplaceSample:
    """Sample r * U with r ~ Gamma(n+1, theta) and U uniform on the cell.

    That product has density proportional to e^{-||x||_V / theta}; the mean
    cell norm of the output is n * theta.
    """
    stream = stream or SampleStream.from_config(cfg)
    r = gamma_sample(cell.n + 1, params.theta, stream)
    u = uniform_sample(cell, cfg, stream)
    rf = Fraction(r)
    return LaplaceSample(
        point=tuple(rf * ui for ui in u), radial=r, cell_sample=u
    )
