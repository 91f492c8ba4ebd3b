"""Monte-Carlo play, equilibrium strategy construction, and an independent
best-response verifier.

The simulator plays the *auxiliary* form of both games: a run ends the
moment a player takes an item, and the survivor is credited the exact
value of their one-player continuation (wait-for-the-best with recall,
the threshold stopping value without), instead of simulating it out.
This changes no expectation and removes most of the variance.

Strategies are vectorized decision rules.  ``bid_prob(t, k, a, b)`` maps
the stage index t (1-based), the number k of arrivals still to come, the
best available value a and (with recall) the second-best b, to a bid
probability; all arguments broadcast as numpy arrays.

Equilibrium profiles built by :func:`spe_strategy`:

* with recall, both players bid exactly when the stage analysis forces or
  permits it: above the rival's lone value c_k(b) for the worst profile,
  above max(c_k(b), both-pass continuation) for the best one;
* without recall, the worst profile is the symmetric stationary one (pass
  below a self-consistent threshold, mix in the middle band, bid above
  c_k), and the best profile is an asymmetric pair in which a designated
  bidder takes every value above the worst-single-payoff threshold while
  the other player waits; the bidder's expected payoff is exactly the
  worst single equilibrium payoff, the pair sum the best equilibrium sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import ValueDistribution
from .errors import SpecValidationError, UnsupportedDistributionError
from .full_recall import GridConfig, TriangleContext, grid_tables
from .no_recall import no_recall_sequence
from .prophet import prophet_values

FULL_RECALL = "full_recall"
NO_RECALL = "no_recall"


@dataclass(frozen=True)
class Strategy:
    """A (vectorized) behavioral decision rule for one player."""

    name: str
    bid_prob: Callable[[int, int, np.ndarray, np.ndarray | None], np.ndarray]


@dataclass(frozen=True)
class StrategyProfile:
    player1: Strategy
    player2: Strategy
    meta: dict = field(default_factory=dict)

    @property
    def symmetric(self) -> bool:
        return self.player1 is self.player2


@dataclass(frozen=True)
class SimulationReport:
    runs: int
    seed: int
    mean: tuple[float, float]
    stderr: tuple[float, float]
    #: standard error of the payoff *sum* (accounts for the tie-break
    #: correlation between the two payoffs)
    stderr_sum: float = 0.0
    traces: dict | None = None

    @property
    def mean_sum(self) -> float:
        return self.mean[0] + self.mean[1]


def _med(a, b, x):
    return np.maximum(b, np.minimum(a, x))


def play(
    d: ValueDistribution,
    n: int,
    variant: str,
    strat1: Strategy,
    strat2: Strategy,
    runs: int,
    seed: int = 0,
    collect_traces: bool = False,
) -> SimulationReport:
    """Empirical mean payoffs under fair-coin tie-breaking.

    With recall, the terminal rule overrides the strategies: every player
    still present at the last arrival bids for the best available item.
    Without recall, strategies act at every stage (two passes at the last
    arrival leave both players with nothing).
    """
    if runs < 1:
        raise SpecValidationError("runs must be >= 1")
    if variant not in (FULL_RECALL, NO_RECALL):
        raise SpecValidationError(f"unknown variant {variant!r}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    X = np.asarray(d.sample(rng, runs * n)).reshape(runs, n)
    U1 = rng.random((runs, n))
    U2 = rng.random((runs, n))
    coin = rng.random((runs, n)) < 0.5

    pay1 = np.zeros(runs)
    pay2 = np.zeros(runs)
    active = np.ones(runs, dtype=bool)
    a_state = np.zeros(runs)
    b_state = np.zeros(runs)
    c_by_k = prophet_values(d, n).values if variant == NO_RECALL else None
    taken_stage = np.zeros(runs, dtype=np.int32) if collect_traces else None

    for t in range(1, n + 1):
        x = X[:, t - 1]
        if variant == FULL_RECALL:
            new_b = _med(a_state, b_state, x)
            new_a = np.maximum(a_state, x)
            a_state = np.where(active, new_a, a_state)
            b_state = np.where(active, new_b, b_state)
            a, b = a_state, b_state
        else:
            a, b = x, None
        k = n - t
        if variant == FULL_RECALL and t == n:
            bid1 = active
            bid2 = active
        else:
            p1 = np.clip(np.asarray(strat1.bid_prob(t, k, a, b), dtype=float), 0.0, 1.0)
            p2 = np.clip(np.asarray(strat2.bid_prob(t, k, a, b), dtype=float), 0.0, 1.0)
            bid1 = active & (U1[:, t - 1] < np.broadcast_to(p1, a.shape))
            bid2 = active & (U2[:, t - 1] < np.broadcast_to(p2, a.shape))
        any_bid = bid1 | bid2
        if not np.any(any_bid):
            continue
        if variant == FULL_RECALL:
            lone = b if k == 0 else np.asarray(d.order_max_with_vec(k, b))
        else:
            lone = np.full(runs, 0.0 if k == 0 else c_by_k[k - 1])
        both = bid1 & bid2
        only1 = bid1 & ~bid2
        only2 = bid2 & ~bid1
        w1 = only1 | (both & coin[:, t - 1])
        w2 = only2 | (both & ~coin[:, t - 1])
        pay1 = np.where(w1, a, np.where(w2, lone, pay1))
        pay2 = np.where(w2, a, np.where(w1, lone, pay2))
        if collect_traces:
            taken_stage = np.where(any_bid & active, t, taken_stage)
        active = active & ~any_bid

    # no-recall runs where nobody ever bid end with zero payoffs (already set)
    mean = (float(pay1.mean()), float(pay2.mean()))
    se = (
        float(pay1.std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0,
        float(pay2.std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0,
    )
    se_sum = float((pay1 + pay2).std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0
    traces = None
    if collect_traces:
        traces = {"taken_stage": taken_stage, "payoff1": pay1, "payoff2": pay2}
    return SimulationReport(
        runs=runs, seed=seed, mean=mean, stderr=se, stderr_sum=se_sum, traces=traces
    )


# -- equilibrium profiles ----------------------------------------------------------


def _fr_worst_strategy(d: ValueDistribution) -> Strategy:
    def prob(t, k, a, b):
        if k == 0:
            return np.ones_like(np.asarray(a, dtype=float))
        c = np.asarray(d.order_max_with_vec(k, np.asarray(b, dtype=float)))
        return np.where(np.asarray(a) > c, 1.0, 0.0)

    return Strategy("fr-worst-threshold", prob)


def _fr_best_strategy(d: ValueDistribution, n: int, grid: GridConfig) -> Strategy:
    is_uniform = (
        not d.atoms
        and len(d.pieces) == 1
        and d.pieces[0].coeffs == (1.0,)
    )
    ctx = tables = None
    if not is_uniform or n - 1 > 2:
        ctx, tables = grid_tables(d, n - 1, grid)

    def dplus(k, a, b):
        if is_uniform and k <= 2:
            a = np.asarray(a, dtype=float)
            b = np.asarray(b, dtype=float)
            if k == 1:
                return a / 2.0 + (1.0 + b * b) / 4.0
            return (1.0 + a * a) / 2.0 + (b**3 - a**3) / 6.0
        return ctx.bilinear(tables[k].dplus, np.asarray(a), np.asarray(b))

    def prob(t, k, a, b):
        if k == 0:
            return np.ones_like(np.asarray(a, dtype=float))
        c = np.asarray(d.order_max_with_vec(k, np.asarray(b, dtype=float)))
        return np.where(np.asarray(a) > np.maximum(c, dplus(k, a, b)), 1.0, 0.0)

    return Strategy("fr-best-threshold", prob)


def _nr_worst_thresholds(d: ValueDistribution, n: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Self-consistent stationary worst profile: with k arrivals to come,
    pass below w_k, mix on [w_k, c_k), bid above; the both-pass continuation
    is the profile itself, so w_{k+1} = w_k F(w_k)
    + int_{(w_k, c_k]} gamma(a; w_k) dF + int_{(c_k, 1]} (a + c_k)/2 dF."""
    cs = prophet_values(d, n).values
    w = [d.mean() / 2.0]
    for k in range(1, n):
        wk, ck = w[-1], cs[k - 1]
        nxt = wk * d.cdf(wk)
        if ck > wk:
            nxt += d.partial_expectation(
                wk,
                ck,
                lambda a: (2.0 * a * ck - wk * (a + ck)) / (a + ck - 2.0 * wk),
                tol=1e-12,
            )
        nxt += (d.density_moment(ck, 1.0, 1) + d.atom_sum(ck, 1.0, lambda a: a)) / 2.0
        nxt += ck * (1.0 - d.cdf(ck)) / 2.0
        w.append(nxt)
    return np.array(w), np.array(cs), w[-1] if n >= 1 else 0.0


def _nr_worst_strategy(d: ValueDistribution, n: int) -> tuple[Strategy, float]:
    w, cs, value = _nr_worst_thresholds(d, n)

    def prob(t, k, a, b):
        a = np.asarray(a, dtype=float)
        if k == 0:
            return np.ones_like(a)
        wk, ck = w[k - 1], cs[k - 1]
        mixed = 2.0 * (a - wk) / np.maximum(a + ck - 2.0 * wk, 1e-300)
        return np.where(a >= ck, 1.0, np.where(a < wk, 0.0, np.clip(mixed, 0.0, 1.0)))

    return Strategy("nr-worst-stationary", prob), float(value)


def _nr_best_profile(d: ValueDistribution, n: int) -> StrategyProfile:
    if not d.is_continuous():
        raise UnsupportedDistributionError("no-recall equilibrium profiles need an atomless law")
    seq = no_recall_sequence(d, n)
    cs = prophet_values(d, n).values
    taus = np.array([s.alpha_prime for s in seq])
    for s in seq:
        ck = cs[s.n - 1]
        if 2.0 * s.beta - ck > s.alpha_prime + 1e-9:
            raise UnsupportedDistributionError(
                "best-profile construction needs a + c >= best sum above the "
                "worst-single threshold; not satisfied by this law"
            )

    def bidder_prob(t, k, a, b):
        a = np.asarray(a, dtype=float)
        if k == 0:
            return np.ones_like(a)
        return np.where(a > taus[k - 1], 1.0, 0.0)

    def passer_prob(t, k, a, b):
        a = np.asarray(a, dtype=float)
        if k == 0:
            return np.ones_like(a)
        return np.where(a > cs[k - 1], 1.0, 0.0)

    last = seq[-1]
    return StrategyProfile(
        Strategy("nr-best-designated-bidder", bidder_prob),
        Strategy("nr-best-waiting-player", passer_prob),
        meta={
            "player1_value": last.alpha_prime,
            "player2_value": 2.0 * last.beta - last.alpha_prime,
            "half_sum": last.beta,
        },
    )


def spe_strategy(
    d: ValueDistribution,
    n: int,
    variant: str,
    which: str,
    grid: GridConfig | None = None,
) -> StrategyProfile:
    """Construct the designated equilibrium profile for the n-arrival game.

    ``which`` is "best" or "worst".  The no-recall best profile is an
    asymmetric pair (only the payoff sum is pinned); everything else is
    symmetric.
    """
    if which not in ("best", "worst"):
        raise SpecValidationError("which must be 'best' or 'worst'")
    if n < 1:
        raise SpecValidationError("n must be >= 1")
    grid = grid or GridConfig()
    if variant == FULL_RECALL:
        if which == "worst":
            s = _fr_worst_strategy(d)
        else:
            s = _fr_best_strategy(d, n, grid)
        return StrategyProfile(s, s, meta={})
    if variant == NO_RECALL:
        if not d.is_continuous():
            raise UnsupportedDistributionError(
                "no-recall equilibrium profiles need an atomless law"
            )
        if which == "worst":
            s, value = _nr_worst_strategy(d, n)
            return StrategyProfile(s, s, meta={"player_value": value})
        return _nr_best_profile(d, n)
    raise SpecValidationError(f"unknown variant {variant!r}")


def never_bid() -> Strategy:
    return Strategy("never-bid", lambda t, k, a, b: np.zeros_like(np.asarray(a, dtype=float)))


def always_bid() -> Strategy:
    return Strategy("always-bid", lambda t, k, a, b: np.ones_like(np.asarray(a, dtype=float)))


def threshold_strategy(thresholds: dict[int, float], name: str = "threshold") -> Strategy:
    """Bid at stage t iff the best available value is >= thresholds[t]
    (missing stages bid always)."""

    def prob(t, k, a, b):
        thr = thresholds.get(t, 0.0)
        return np.where(np.asarray(a, dtype=float) >= thr, 1.0, 0.0)

    return Strategy(name, prob)


# -- best-response verification ------------------------------------------------------


def _grid_expectation(d: ValueDistribution, g: np.ndarray, vals: np.ndarray) -> float:
    """E[f(X)] for f given by values on the grid g (linear interpolation)."""
    total = 0.0
    for x, mass in d.atoms:
        total += mass * float(np.interp(x, g, vals))
    h = g[1] - g[0]
    for t in range(len(g) - 1):
        w0 = d.density_moment(g[t], g[t + 1], 0)
        if w0 == 0.0:
            continue
        w1 = d.density_moment(g[t], g[t + 1], 1)
        phi = (w1 - g[t] * w0) / h
        total += vals[t] * (w0 - phi) + vals[t + 1] * phi
    return float(total)


def best_response_gap(
    d: ValueDistribution,
    n: int,
    variant: str,
    opponent: Strategy,
    equilibrium_reply: Strategy,
    grid_size: int = 2001,
) -> float:
    """Value of the best response against ``opponent`` minus the value of
    ``equilibrium_reply`` against it, via backward induction on a
    discretized state space.  A result <= tolerance certifies that the
    reply admits no profitable deviation (up to grid error)."""
    if n < 1:
        raise SpecValidationError("n must be >= 1")
    if variant == NO_RECALL:
        return _br_gap_no_recall(d, n, opponent, equilibrium_reply, grid_size)
    if variant == FULL_RECALL:
        return _br_gap_full_recall(d, n, opponent, equilibrium_reply, grid_size)
    raise SpecValidationError(f"unknown variant {variant!r}")


def _br_gap_no_recall(d, n, opponent, reply, grid_size):
    g = np.linspace(0.0, 1.0, grid_size)
    cs = prophet_values(d, n).values
    r_br = 0.0
    r_eq = 0.0
    for t in range(n, 0, -1):
        k = n - t
        ck = 0.0 if k == 0 else cs[k - 1]
        q = np.clip(np.asarray(opponent.bid_prob(t, k, g, None), dtype=float), 0.0, 1.0)
        p = np.clip(np.asarray(reply.bid_prob(t, k, g, None), dtype=float), 0.0, 1.0)
        q = np.broadcast_to(q, g.shape)
        p = np.broadcast_to(p, g.shape)
        bid_val = q * (g + ck) / 2.0 + (1.0 - q) * g
        pass_br = q * ck + (1.0 - q) * r_br
        pass_eq = q * ck + (1.0 - q) * r_eq
        v_br = np.maximum(bid_val, pass_br)
        v_eq = p * bid_val + (1.0 - p) * pass_eq
        r_br = _grid_expectation(d, g, v_br)
        r_eq = _grid_expectation(d, g, v_eq)
    return float(r_br - r_eq)


def _br_gap_full_recall(d, n, opponent, reply, grid_size):
    ctx = TriangleContext(d, GridConfig(size=grid_size, check_consistency=False))
    g = ctx.g
    A = g[:, None]
    B = g[None, :]
    base = np.add.outer(g, g) / 2.0
    v_br = base.copy()
    v_eq = base.copy()
    for t in range(n - 1, 0, -1):
        k = n - t
        w_br = ctx.expect_over_arrival(v_br)
        w_eq = ctx.expect_over_arrival(v_eq)
        ck = ctx.lone_values(k)[None, :]
        q = np.clip(np.asarray(opponent.bid_prob(t, k, A, B), dtype=float), 0.0, 1.0)
        p = np.clip(np.asarray(reply.bid_prob(t, k, A, B), dtype=float), 0.0, 1.0)
        q = np.broadcast_to(q, w_br.shape)
        p = np.broadcast_to(p, w_br.shape)
        bid_val = q * (A + ck) / 2.0 + (1.0 - q) * A
        v_br = np.maximum(bid_val, q * ck + (1.0 - q) * w_br)
        v_eq = p * bid_val + (1.0 - p) * (q * ck + (1.0 - q) * w_eq)
        # states only matter on the triangle; mirror for the next expectation
        iu = np.triu_indices(grid_size, 1)
        v_br[iu] = v_br.T[iu]
        v_eq[iu] = v_eq.T[iu]
    r_br = _grid_expectation(d, g, v_br[:, 0])
    r_eq = _grid_expectation(d, g, v_eq[:, 0])
    return float(r_br - r_eq)


def spe_gap(
    d: ValueDistribution,
    n: int,
    variant: str,
    which: str,
    grid_size: int = 2001,
    grid: GridConfig | None = None,
) -> float:
    """Worst best-response gap over both seats of the constructed profile."""
    profile = spe_strategy(d, n, variant, which, grid=grid)
    g1 = best_response_gap(d, n, variant, profile.player2, profile.player1, grid_size)
    if profile.symmetric:
        return g1
    g2 = best_response_gap(d, n, variant, profile.player1, profile.player2, grid_size)
    return max(g1, g2)
