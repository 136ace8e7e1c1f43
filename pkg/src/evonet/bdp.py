"""Transient degree distributions from non-homogeneous birth-and-death chains.

Every node's degree is a discrete-time chain on {0, 1, 2, ...} whose one-step
matrix at time ``t`` is tridiagonal with

    birth  g_t(k) = (a * (k + 1) + b0) / t
    death  d_t    = delta / t            (k >= 1)
    hold   h_t(k) = 1 - g_t(k) - d_t

Row 0 is absorbing for the link-removal model (isolated nodes are deleted)
and ``(1 - g_t(0), g_t(0))`` for the Albert-Barabasi model. The transition
rates do not depend on the birth time of the node, so the sum of all node
vectors obeys the add-then-propagate recurrence implemented in
:func:`accumulate`, costing O(t^2) instead of O(t^3).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .distribution import DegreeDistribution
from .errors import InvalidParameter, InvariantViolation

CLAMP_MODES = {"renorm": 0, "death-first": 1}
VARIANTS = ("evolving", "ab", "pure-birth")

_TINY = 2.2250738585072014e-308

# Largest tail mass that the optional truncation may discard per step.
MAX_DROPPED_MASS = 1e-14


def _clamp(g, d, mode: str):
    s = g + d
    if s <= 1.0:
        return g, d
    if mode == "renorm":
        # d from 1 - g so that the hold probability is exactly zero
        g = g / s
        return g, 1.0 - g
    if mode == "death-first":
        if g >= 1.0:
            return 1.0, 0.0
        return g, 1.0 - g
    raise InvalidParameter(f"unknown clamping policy {mode!r}")


def rates_evolving(k: int, t: int, m: int, c: int, clamp: str = "renorm") -> tuple[float, float]:
    """(birth, death) for a node of degree ``k`` at time ``t`` in the link-removal model."""
    if t < 1 or k < 0:
        raise InvalidParameter("need t >= 1 and k >= 0")
    if 2 * (m - c) + 1 <= 0:
        raise InvalidParameter(f"birth rate undefined for c={c} > m={m}")
    if k == 0:
        return 0.0, 0.0
    g = m * (k + 1) / ((2 * (m - c) + 1) * t)
    d = 2 * c / t
    return _clamp(g, d, clamp)


def rates_ab(k: int, t: int, m: int, p: float, q: float, r: float | None = None, clamp: str = "renorm"):
    """(birth, death) for a node of degree ``k`` at time ``t`` in the Albert-Barabasi model."""
    if r is None:
        r = 1.0 - p - q
    if r <= 0:
        raise InvalidParameter(f"r = 1 - p - q must be positive, got {r}")
    if t < 1 or k < 0:
        raise InvalidParameter("need t >= 1 and k >= 0")
    g = m * (k + 1) / ((2 * m * (1 - q) + r) * t) + m * p / (r * t)
    d = m * q / (r * t) if k >= 1 else 0.0
    return _clamp(g, d, clamp)


@dataclass(frozen=True)
class RateModel:
    variant: str
    m: int
    c: int = 0
    p: float = 0.0
    q: float = 0.0
    clamp: str = "renorm"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParameter(f"unknown variant {self.variant!r}")
        if self.clamp not in CLAMP_MODES:
            raise InvalidParameter(f"unknown clamping policy {self.clamp!r}")
        if self.m < 1:
            raise InvalidParameter(f"m must be >= 1, got {self.m}")
        if self.variant == "ab":
            if self.p < 0 or self.q < 0 or self.p + self.q >= 1:
                raise InvalidParameter("need p, q >= 0 and p + q < 1")
        elif not 0 <= self.c <= self.m:
            raise InvalidParameter(f"need 0 <= c <= m, got c={self.c}, m={self.m}")
        if self.variant == "pure-birth" and self.c != 0:
            raise InvalidParameter("pure-birth rates have c = 0")

    @classmethod
    def evolving(cls, m: int, c: int, clamp: str = "renorm") -> RateModel:
        return cls("evolving", m, c, clamp=clamp)

    @classmethod
    def pure_birth(cls, m: int, clamp: str = "renorm") -> RateModel:
        return cls("pure-birth", m, 0, clamp=clamp)

    @classmethod
    def ab(cls, m: int, p: float, q: float, clamp: str = "renorm") -> RateModel:
        return cls("ab", m, p=p, q=q, clamp=clamp)

    @property
    def r(self) -> float:
        return 1.0 - self.p - self.q

    @property
    def absorbing_zero(self) -> bool:
        return self.variant != "ab"

    def coefficients(self) -> tuple[float, float, float]:
        """(a, b0, delta) with birth (a(k+1) + b0)/t and death delta/t."""
        m = self.m
        if self.variant == "ab":
            r = self.r
            return m / (2 * m * (1 - self.q) + r), m * self.p / r, m * self.q / r
        return m / (2 * (m - self.c) + 1), 0.0, 2.0 * self.c

    def rates(self, k: int, t: int) -> tuple[float, float]:
        if self.variant == "ab":
            return rates_ab(k, t, self.m, self.p, self.q, clamp=self.clamp)
        return rates_evolving(k, t, self.m, self.c, clamp=self.clamp)

    def matrix(self, t: int, size: int) -> np.ndarray:
        """Dense ``size x size`` one-step matrix at time ``t``; the last state holds."""
        P = np.zeros((size, size))
        for k in range(size - 1):
            g, d = self.rates(k, t)
            P[k, k + 1] = g
            if k >= 1:
                P[k, k - 1] = d
            P[k, k] = 1.0 - g - d
        P[size - 1, size - 1] = 1.0
        return P

    def describe(self) -> dict:
        out = {"variant": self.variant, "m": self.m}
        if self.variant == "ab":
            out.update(p=self.p, q=self.q, r=self.r)
        else:
            out["c"] = self.c
        out["clamp"] = self.clamp
        return out


@dataclass
class ProbabilityVector:
    """Dense vector over degrees at time index ``t``.

    ``kind`` is ``"node"`` for a single node's distribution and
    ``"accumulator"`` for the summed vector of nodes ``S..t-1``.
    """

    values: np.ndarray
    t: int
    S: int
    kind: str = "node"

    def total(self) -> float:
        return math.fsum(self.values)


@dataclass(frozen=True)
class SolverConfig:
    S: int
    t_end: int
    eps: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.S < 1:
            raise InvalidParameter(f"S must be >= 1, got {self.S}")
        if self.t_end < self.S:
            raise InvalidParameter(f"t_end={self.t_end} must be >= S={self.S}")
        if not 0.0 <= self.eps <= 1e-12:
            raise InvalidParameter(f"truncation threshold must lie in [0, 1e-12], got {self.eps}")


# -- numba kernels -------------------------------------------------------


@njit(cache=True, inline="always")
def _row(n, inv_t, a, b0, delta, absorbing, mode):
    if n == 0:
        if absorbing:
            return 0.0, 0.0
        g = (a + b0) * inv_t
        d = 0.0
    else:
        g = (a * (n + 1) + b0) * inv_t
        d = delta * inv_t
    s = g + d
    if s > 1.0:
        if mode == 0:
            g = g / s
            d = 1.0 - g
        elif g >= 1.0:
            g = 1.0
            d = 0.0
        else:
            d = 1.0 - g
    return g, d


@njit(cache=True)
def _advance(v, top, t, a, b0, delta, absorbing, mode):
    """Apply the time-``t`` matrix in place to ``v[0..top]``; returns the new top index.

    ``v`` must be zero beyond ``top`` for at least two entries.
    """
    inv_t = 1.0 / t
    g_cur, d_cur = _row(0, inv_t, a, b0, delta, absorbing, mode)
    prev_v = 0.0
    prev_g = 0.0
    for n in range(top + 2):
        g_nxt, d_nxt = _row(n + 1, inv_t, a, b0, delta, absorbing, mode)
        vn = v[n]
        x = vn * (1.0 - g_cur - d_cur) + prev_v * prev_g + v[n + 1] * d_nxt
        # flush subnormals: they carry no mass and stall the FPU
        v[n] = x if x >= _TINY else 0.0
        prev_v = vn
        prev_g = g_cur
        g_cur = g_nxt
        d_cur = d_nxt
    return top + 1


@njit(cache=True)
def _truncate(v, top, floor, eps):
    dropped = 0.0
    while top > floor and v[top] < eps and dropped + v[top] < 1e-14:
        dropped += v[top]
        v[top] = 0.0
        top -= 1
    return top


@njit(cache=True)
def _accumulate(v, m, S, t_end, a, b0, delta, absorbing, mode, eps):
    top = m
    for tau in range(S, t_end + 1):
        top = _advance(v, top, tau, a, b0, delta, absorbing, mode)
        if eps > 0.0:
            top = _truncate(v, top, m, eps)
        if tau < t_end:
            v[m] += 1.0
    return top


@njit(cache=True)
def _evolve(v, top, t0, steps, a, b0, delta, absorbing, mode):
    for tau in range(t0, t0 + steps):
        top = _advance(v, top, tau, a, b0, delta, absorbing, mode)
    return top


def _kernel_args(rates: RateModel):
    a, b0, delta = rates.coefficients()
    return a, b0, delta, rates.absorbing_zero, CLAMP_MODES[rates.clamp]


def unit_vector(m: int, t: int, length: int | None = None) -> ProbabilityVector:
    v = np.zeros(max(length or 0, m + 1))
    v[m] = 1.0
    return ProbabilityVector(v, t, t, "node")


def bdp_step(v: ProbabilityVector, rates: RateModel) -> ProbabilityVector:
    """One density-evolution step with the matrix built from time ``v.t``."""
    nz = np.flatnonzero(v.values)
    top = int(nz[-1]) if len(nz) else 0
    buf = np.zeros(max(len(v.values), top + 2) + 2)
    buf[: len(v.values)] = v.values
    _advance(buf, top, v.t, *_kernel_args(rates))
    n = max(len(v.values), top + 2)
    return replace(v, values=buf[:n], t=v.t + 1)


def evolve_node(rates: RateModel, birth: int, steps: int) -> ProbabilityVector:
    """Distribution of a node born at ``birth`` (degree m) after ``steps`` steps."""
    m = rates.m
    buf = np.zeros(m + steps + 3)
    buf[m] = 1.0
    top = _evolve(buf, m, birth, steps, *_kernel_args(rates))
    return ProbabilityVector(buf[: top + 1], birth + steps, birth, "node")


def accumulate(cfg: SolverConfig, rates: RateModel) -> ProbabilityVector:
    """Summed vector of nodes ``S..t_end`` at time ``t_end + 1``."""
    m = rates.m
    buf = np.zeros(m + (cfg.t_end - cfg.S) + 4)
    buf[m] = 1.0
    top = _accumulate(buf, m, cfg.S, cfg.t_end, *_kernel_args(rates), float(cfg.eps))
    return ProbabilityVector(buf[: top + 1], cfg.t_end + 1, cfg.S, "accumulator")


def direct_sum_reference(cfg: SolverConfig, rates: RateModel) -> ProbabilityVector:
    """Brute-force sum of every node's vector, each evolved by dense matrices.

    O(t^3); for validating :func:`accumulate` on small instances only.
    """
    m = rates.m
    size = m + (cfg.t_end - cfg.S) + 3
    rows = np.zeros((0, size))
    e_m = np.zeros(size)
    e_m[m] = 1.0
    for birth in range(cfg.S, cfg.t_end + 1):
        # node `birth` enters with f_i(i) = e_m, then all nodes take the step at time `birth`
        rows = np.vstack([rows, e_m])
        rows = rows @ rates.matrix(birth, size)
    F = np.array([math.fsum(col) for col in rows.T])
    nz = np.flatnonzero(F)
    return ProbabilityVector(F[: int(nz[-1]) + 1], cfg.t_end + 1, cfg.S, "accumulator")


def degree_distribution(F: ProbabilityVector, S: int, t: int, **meta) -> DegreeDistribution:
    if F.kind != "accumulator" or F.S != S or F.t != t + 1:
        raise InvariantViolation(
            f"accumulator metadata (kind={F.kind}, S={F.S}, t={F.t}) does not match S={S}, t={t}"
        )
    P = F.values / (t - S + 1)
    return DegreeDistribution(P, {"method": "bdp", "S": S, "t": t, **meta})


def non_isolated_estimate(P: DegreeDistribution, t: int) -> float:
    return (t + 1) * (1.0 - P[0])


@dataclass
class SolveResult:
    distribution: DegreeDistribution
    accumulator: ProbabilityVector
    wall_time: float


def solve(rates: RateModel, S: int, t_end: int, eps: float = 0.0) -> SolveResult:
    cfg = SolverConfig(S, t_end, eps)
    t0 = time.perf_counter()
    F = accumulate(cfg, rates)
    wall = time.perf_counter() - t0
    P = degree_distribution(F, S, t_end, **rates.describe(), eps=eps)
    return SolveResult(P, F, wall)
