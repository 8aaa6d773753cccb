"""Sampling engines for the multi-asset mixture models.

Three ways to reach the maturity-T joint law:

* ``simulate_scmd``  — path-wise log-Euler on each asset's own univariate
  mixture dynamics, with instantaneously correlated Brownian shocks.
* ``sample_mvmd_terminal`` — single step: pick a component tuple with its
  product weight, then draw from that tuple's multivariate lognormal.  No
  time discretization is needed because the terminal law is known.
* ``sample_muvm_terminal`` — single step under the uncertain-volatility
  reading: each asset draws its own component independently, then the
  correlated constant-vol terminal value.  Its one-time law coincides with
  the mixture dynamics' law, which the tests exercise.

All samplers consume randomness through fixed-size path blocks keyed by
(seed, block), so results are byte-identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .multivariate import MultiAssetModel, integrated_covariance, psd_factor, truncate
from .pricing import PriceEstimate
from .rng import path_blocks, run_blocks, substream
from .univariate import _nu_from_logx

__all__ = [
    "SimulationConfig",
    "TerminalSample",
    "simulate_scmd",
    "sample_mvmd_terminal",
    "sample_muvm_terminal",
    "estimate",
]

SCHEMES = ("scmd-euler", "mvmd-terminal", "muvm-terminal")


@dataclass(frozen=True)
class SimulationConfig:
    """How to run a sampler: single-step schemes ignore `steps`."""

    paths: int
    steps: int
    maturity: float
    seed: int
    scheme: str = "scmd-euler"

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("need at least one path")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.scheme == "scmd-euler" and self.steps < 1:
            raise ValueError("path-wise scheme needs steps >= 1")
        if not self.maturity > 0:
            raise ValueError("maturity must be positive")


@dataclass(frozen=True, eq=False)
class TerminalSample:
    """Terminal prices, one row per path, one column per asset."""

    values: np.ndarray
    scheme: str
    seed: int

    @property
    def paths(self) -> int:
        return self.values.shape[0]


def simulate_scmd(
    model: MultiAssetModel, config: SimulationConfig, workers: int | None = None
) -> TerminalSample:
    """Path-wise Euler simulation of the simply correlated mixture dynamics.

    Log-Euler on each asset with its own state-dependent mixture vol; the
    Brownian shocks are correlated through a factorization of R, so the
    per-step covariance is nu_i nu_j rho_ij.
    """
    n = model.n
    steps = config.steps
    dt = config.maturity / steps
    sqdt = np.sqrt(dt)
    corr_factor = model.corr.factor().T  # z @ corr_factor gives correlated shocks
    log_spots = np.log(model.spots)
    drifts = model.drifts
    out = np.empty((config.paths, n))

    def run_block(b: int, start: int, stop: int) -> None:
        gen = substream(config.seed, b)
        logs = np.tile(log_spots, (stop - start, 1))
        nu = np.empty_like(logs)
        for step in range(steps):
            t = step * dt
            eps = gen.standard_normal((stop - start, n)) @ corr_factor
            for i in range(n):
                nu[:, i] = _nu_from_logx(model.assets[i], t, logs[:, i])
            logs += (drifts - 0.5 * nu**2) * dt + nu * sqdt * eps
        out[start:stop] = np.exp(logs)

    run_blocks(run_block, path_blocks(config.paths), workers)
    return TerminalSample(out, "scmd-euler", config.seed)


def _tuple_samplers(model: MultiAssetModel, maturity: float, kappa: float):
    """Per-tuple (log-mean vector, covariance factor) for terminal draws."""
    tuple_set = truncate(model, kappa)
    means = [tp.log_means(maturity) for tp, _ in tuple_set]
    factors = [psd_factor(tp.integrated_covariance(maturity)) for tp, _ in tuple_set]
    return tuple_set, means, factors


def sample_mvmd_terminal(
    model: MultiAssetModel,
    maturity: float,
    paths: int,
    seed: int,
    kappa: float = 0.0,
    workers: int | None = None,
) -> TerminalSample:
    """Exact draw from the mixture dynamics' terminal law at maturity.

    Per path: pick a component tuple with its (cutoff-renormalized) product
    weight, then draw the tuple's correlated lognormal terminal value.
    """
    tuple_set, means, factors = _tuple_samplers(model, maturity, kappa)
    cum = np.cumsum(tuple_set.weight_array)
    cum[-1] = 1.0
    n = model.n
    out = np.empty((paths, n))

    def run_block(b: int, start: int, stop: int) -> None:
        gen = substream(seed, b)
        u = gen.random(stop - start)
        z = gen.standard_normal((stop - start, n))
        sel = np.searchsorted(cum, u, side="right")
        block = np.empty((stop - start, n))
        for k in range(len(tuple_set)):
            mask = sel == k
            if not np.any(mask):
                continue
            block[mask] = np.exp(means[k] + z[mask] @ factors[k].T)
        out[start:stop] = block

    run_blocks(run_block, path_blocks(paths), workers)
    return TerminalSample(out, "mvmd-terminal", seed)


def sample_muvm_terminal(
    model: MultiAssetModel,
    maturity: float,
    paths: int,
    seed: int,
    workers: int | None = None,
) -> TerminalSample:
    """Terminal draw under the uncertain-volatility reading of the mixture.

    Each asset independently picks one of its volatility curves with its
    component probability; conditionally on the picks, the assets follow
    correlated constant-parameter lognormals to maturity.  Because pricing
    only needs the maturity law, the scenario is applied over the whole
    horizon and no early-time regularization enters.
    """
    n = model.n
    cums = []
    for asset in model.assets:
        c = np.cumsum(asset.weights)
        c[-1] = 1.0
        cums.append(c)
    factor_cache: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray]] = {}

    def tuple_draw(indices: tuple[int, ...]):
        if indices not in factor_cache:
            tp = model.tuple_at(indices)
            factor_cache[indices] = (
                tp.log_means(maturity),
                psd_factor(integrated_covariance(model, indices, maturity)),
            )
        return factor_cache[indices]

    out = np.empty((paths, n))

    def run_block(b: int, start: int, stop: int) -> None:
        gen = substream(seed, b)
        u = gen.random((stop - start, n))
        z = gen.standard_normal((stop - start, n))
        picks = np.column_stack(
            [np.searchsorted(cums[i], u[:, i], side="right") for i in range(n)]
        )
        block = np.empty((stop - start, n))
        for indices in {tuple(row) for row in picks}:
            mask = np.all(picks == indices, axis=1)
            mean, factor = tuple_draw(indices)
            block[mask] = np.exp(mean + z[mask] @ factor.T)
        out[start:stop] = block

    run_blocks(run_block, path_blocks(paths), workers)
    return TerminalSample(out, "muvm-terminal", seed)


def estimate(
    sample: TerminalSample | np.ndarray,
    payoff: Callable[[np.ndarray], np.ndarray],
    rate: float,
    maturity: float,
) -> PriceEstimate:
    """Discounted sample mean of payoff(terminal prices) with its standard error."""
    if isinstance(sample, TerminalSample):
        values, method = sample.values, sample.scheme
    else:
        values, method = np.asarray(sample, dtype=float), "samples"
    if values.size == 0:
        raise ValueError("empty sample")
    pay = np.asarray(payoff(values), dtype=float)
    m = pay.shape[0]
    disc = np.exp(-rate * maturity)
    se = 0.0 if m == 1 else float(disc * pay.std(ddof=1) / np.sqrt(m))
    return PriceEstimate(float(disc * pay.mean()), se, m, method)
