"""Trading-inspired segmentation.

A normalized series is treated as a surrogate stock traded a posteriori by
a virtual portfolio that is always fully in cash or fully in stock, with a
linear transaction cost level ``epsilon``.  The wealth-maximizing trading
trajectory is found by a forward dynamic program that keeps the best state
per position flag and backtracks recorded parents.  Rebalancing instants
of that trajectory are the changepoints; sweeping ``epsilon`` upward thins
them out until the count fits under ``s_max``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import InvariantError, Segmentation
from .preprocess import NormalizedSeries, normalize_for_trading

CASH = -1
STOCK = 1


@dataclass(frozen=True)
class TradeState:
    """Portfolio state [shares, cash, position flag, wealth] at one instant."""

    n: float
    c: float
    b: int
    w: float

    def __post_init__(self):
        if self.b not in (CASH, STOCK):
            raise ValueError(f"position flag must be -1 or +1, got {self.b}")
        if self.b == CASH and self.n != 0.0:
            raise ValueError("cash position must hold zero shares")
        if self.b == STOCK and self.c != 0.0:
            raise ValueError("stock position must hold zero cash")


@dataclass(frozen=True)
class TradeTrajectory:
    """Optimal position flags per instant plus the wealth they achieve."""

    b_star: np.ndarray
    final_wealth: float

    def __post_init__(self):
        arr = np.array(self.b_star, dtype=np.int8)
        arr.setflags(write=False)
        object.__setattr__(self, "b_star", arr)

    def changepoints(self) -> np.ndarray:
        """Instants t >= 1 where the position at t+1 differs from t."""
        b = self.b_star
        return np.nonzero(b[2:] != b[1:-1])[0] + 1


def _values(xt) -> np.ndarray:
    if isinstance(xt, NormalizedSeries):
        return np.asarray(xt.values, dtype=np.float64)
    return np.asarray(xt, dtype=np.float64)


def optimal_trade(xt, epsilon: float) -> TradeTrajectory:
    """Wealth-maximizing trading trajectory for a positive price series.

    Starts with exactly the cash needed to buy one share net of cost
    (x[0] / (1 - epsilon)).  At each step the four possible transitions
    (stay in cash, buy, sell, hold stock) are pruned to the best state per
    position flag; parents are recorded and the trajectory is recovered by
    backtracking from the richer final state.  Equal-wealth prunes prefer
    the cash parent; the final flag prefers stock unless cash is strictly
    richer.  The result matches the exhaustive maximum over all 2^(T-1)
    control sequences.
    """
    x = _values(xt)
    if x.size < 1:
        raise ValueError("price series must be nonempty")
    if not (x > 0).all():
        raise ValueError("price series must be strictly positive")
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")

    T = x.size
    keep = 1.0 - epsilon
    cash_w = x[0] / keep
    stock_n = 0.0
    stock_w = -np.inf  # stock position does not exist at t=0
    # parent flag of the best cash/stock state at each t >= 1
    parent_cash = np.zeros(T, dtype=np.int8)
    parent_stock = np.zeros(T, dtype=np.int8)

    for t in range(T - 1):
        price = x[t]
        price_next = x[t + 1]
        # next cash state: stay in cash, or sell the stock position
        sell_w = stock_n * price * keep if stock_w > -np.inf else -np.inf
        if cash_w >= sell_w:
            new_cash_w, parent_cash[t + 1] = cash_w, CASH
        else:
            new_cash_w, parent_cash[t + 1] = sell_w, STOCK
        # next stock state: buy with the cash position, or keep holding
        buy_n = cash_w * keep / price
        buy_w = buy_n * price_next
        hold_w = stock_n * price_next if stock_w > -np.inf else -np.inf
        if buy_w >= hold_w:
            new_stock_n, new_stock_w, parent_stock[t + 1] = buy_n, buy_w, CASH
        else:
            new_stock_n, new_stock_w, parent_stock[t + 1] = stock_n, hold_w, STOCK
        cash_w = new_cash_w
        stock_n, stock_w = new_stock_n, new_stock_w

    b = np.empty(T, dtype=np.int8)
    b[-1] = CASH if cash_w > stock_w else STOCK
    final_wealth = cash_w if b[-1] == CASH else stock_w
    for t in range(T - 1, 0, -1):
        b[t - 1] = parent_cash[t] if b[t] == CASH else parent_stock[t]
    return TradeTrajectory(b_star=b, final_wealth=float(final_wealth))


def replay_trade(xt, epsilon: float, controls) -> float:
    """Wealth obtained by following explicit position flags.

    ``controls[t]`` is the position held during instant t (so the trade
    that establishes it executes at price x[t-1]).  Used to cross-check
    that a trajectory's claimed wealth is reproducible.
    """
    x = _values(xt)
    keep = 1.0 - epsilon
    n, c = 0.0, x[0] / keep
    b = CASH
    for t in range(x.size - 1):
        u = controls[t + 1]
        if b == CASH:
            if u == STOCK:
                n, c = c * keep / x[t], 0.0
        else:
            if u == CASH:
                n, c = 0.0, n * x[t] * keep
        b = u
    return c if b == CASH else n * x[-1]


def apts_segment(x, s_max: int, dtau_min: int, d_epsilon: float) -> Segmentation:
    """Segment a series at the rebalancing instants of its optimal trade.

    The transaction cost level starts at 0 and rises on the additive grid
    m * d_epsilon until the changepoint scan — which stops early once
    either the final protected stretch of dtau_min samples or the segment
    budget s_max is reached — runs to completion.  The changepoint count
    is non-increasing in epsilon, so the sweep terminates for s_max > 2.
    """
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    if s_max <= 2:
        raise ValueError(f"s_max must be > 2, got {s_max}")
    if dtau_min < 1:
        raise ValueError(f"dtau_min must be >= 1, got {dtau_min}")
    if d_epsilon <= 0:
        raise ValueError(f"d_epsilon must be > 0, got {d_epsilon}")
    if T < dtau_min + 2:
        raise ValueError(f"series of length {T} too short for dtau_min={dtau_min}")

    xt = normalize_for_trading(x)
    step = 0
    while True:
        # the grid must stay inside the trade DP's domain [0, 1)
        epsilon = min(step * d_epsilon, 1.0 - 1e-12)
        b = optimal_trade(xt, epsilon).b_star
        boundaries = [0]
        p, t = 1, 1
        while t < T - dtau_min and p < s_max - 1:
            if b[t + 1] != b[t]:
                boundaries.append(t)
                p += 1
            t += 1
        if t == T - dtau_min:
            boundaries.append(T - 1)
            seg = Segmentation(tuple(boundaries))
            try:
                seg.validate(T, s_max, dtau_min)
            except InvariantError as exc:  # pragma: no cover - self check
                raise InvariantError(f"segmenter produced invalid boundaries: {exc}") from exc
            return seg
        step += 1
