"""Continuum (mean-field) results for both models.

All degree densities accept real ``k``; they are densities, normalized as
integrals rather than sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NotScaleFree, OutOfDomain


@dataclass(frozen=True)
class MeanFieldSolution:
    m: int
    c: int
    beta: float
    B: float
    gamma: float
    feasible: bool
    mu: float
    C: float | None

    @property
    def regime(self) -> str:
        """``"continuum"`` when B >= m, else ``"piecewise"``."""
        return "continuum" if self.B >= self.m else "piecewise"


@dataclass(frozen=True)
class AbMeanField:
    m: int
    p: float
    q: float
    r: float
    beta: float
    gamma: float
    tau: float
    q_max: float

    @property
    def shift_positive(self) -> bool:
        return self.m + self.tau > 0

    @property
    def scale_free(self) -> bool:
        return self.shift_positive and self.q < self.q_max


def default_mu(m: int, c: int) -> float:
    """Empirical shift of the piecewise form, ``0.2 m + c - 1``.

    Only checked for (m, c) in {(5, 1), (3, 1), (8, 2)}; pass ``mu`` explicitly
    elsewhere if the piecewise curve matters.
    """
    return 0.2 * m + (c - 1)


def piecewise_constant(m: float, mu: float, beta: float) -> float:
    if mu >= m:
        raise InvalidParameter(f"shift mu={mu} must be below m={m}")
    inv_b = 1.0 / beta
    return (2 * m - mu) ** inv_b / (2.0 * ((2 * m - mu) / (m - mu)) ** inv_b - 1.0)


def solve_evolving(m: int, c: int, mu: float | None = None) -> MeanFieldSolution:
    if m < 1 or c < 0:
        raise InvalidParameter(f"need m >= 1 and c >= 0, got m={m}, c={c}")
    denom = 2 * (m - c) + 1
    beta = m / denom
    B = m + (m - 2 * c * denom) / m
    gamma = 3 + (1 - 2 * c) / m
    mu = default_mu(m, c) if mu is None else float(mu)
    try:
        C = piecewise_constant(m, mu, beta) if beta > 0 else None
    except InvalidParameter:
        C = None
    return MeanFieldSolution(m, c, beta, B, gamma, m > 2 * c, mu, C)


def pk_continuum(k, sol: MeanFieldSolution):
    """``(1/beta) B^(1/beta) (k + B - m)^(-gamma)`` for ``k >= m``."""
    k = np.asarray(k, dtype=float)
    if np.any(k < sol.m):
        raise OutOfDomain(f"continuum density undefined below k = m = {sol.m}")
    inv_b = 1.0 / sol.beta
    out = inv_b * sol.B**inv_b * (k + sol.B - sol.m) ** (-sol.gamma)
    return out if out.ndim else float(out)


def pk_piecewise(k, sol: MeanFieldSolution):
    """Density mirrored about ``k = m``: ``(k - mu)`` above, ``(2m - mu - k)`` below."""
    if sol.C is None or sol.mu >= sol.m:
        raise InvalidParameter(f"shift mu={sol.mu} must be below m={sol.m}")
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise OutOfDomain("piecewise density is defined for k >= 0")
    m, mu = sol.m, sol.mu
    base = np.where(k >= m, k - mu, 2 * m - mu - k)
    out = sol.C / sol.beta * base ** (-sol.gamma)
    return out if out.ndim else float(out)


def trajectory(t_i: float, t: float, sol: MeanFieldSolution, k0: float | None = None) -> float:
    """Expected degree at ``t`` of a node that entered at ``t_i`` with ``k0`` (default m) links."""
    if not t >= t_i > 0:
        raise InvalidParameter("need t >= t_i > 0")
    k0 = sol.m if k0 is None else k0
    return sol.B * ((t / t_i) ** sol.beta - 1.0) + k0


def shifted_degree(k: float, sol: MeanFieldSolution) -> float:
    """``|k + B - m|``; along a trajectory this equals ``B (t/t_i)^beta``."""
    return abs(k + sol.B - sol.m)


def shifted_trajectory(t_i: float, t: float, sol: MeanFieldSolution) -> float:
    return sol.B * (t / t_i) ** sol.beta


def solve_ab(m: int, p: float, q: float) -> AbMeanField:
    if p < 0 or q < 0 or p + q >= 1:
        raise InvalidParameter(f"need p, q >= 0 and p + q < 1, got p={p}, q={q}")
    r = 1.0 - p - q
    beta = m / (2 * m * (1 - q) + r)
    tau = (p - q) * (2 * m * (1 - q) / r + 1) + 1
    gamma = 3 + (r - 2 * m * q) / m
    q_max = min(1 - p, (m + 1 - p) / (2 * m + 1))
    return AbMeanField(m, p, q, r, beta, gamma, tau, q_max)


def pk_ab(k, sol: AbMeanField):
    """``(1/beta) (m + tau)^(1/beta) (k + tau)^(-gamma)`` for ``k >= m``."""
    if not sol.shift_positive:
        raise NotScaleFree(f"m + tau = {sol.m + sol.tau} <= 0")
    k = np.asarray(k, dtype=float)
    if np.any(k < sol.m):
        raise OutOfDomain(f"density undefined below k = m = {sol.m}")
    inv_b = 1.0 / sol.beta
    out = inv_b * (sol.m + sol.tau) ** inv_b * (k + sol.tau) ** (-sol.gamma)
    return out if out.ndim else float(out)


def curve(kind: str, sol, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample a density at integer degrees up to ``k_max``.

    ``kind`` is ``"continuum"``, ``"piecewise"`` or ``"ab"``. Sampling starts
    at ``m`` except for the piecewise form, which starts at 0.
    """
    start = 0 if kind == "piecewise" else sol.m
    k = np.arange(start, k_max + 1, dtype=float)
    fn = {"continuum": pk_continuum, "piecewise": pk_piecewise, "ab": pk_ab}[kind]
    if len(k) == 0:
        return k.astype(int), np.zeros(0)
    return k.astype(int), np.atleast_1d(fn(k, sol))


def gamma_identity_gap(sol) -> float:
    return abs(sol.gamma - (1.0 + 1.0 / sol.beta))

