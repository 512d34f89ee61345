"""L1 minimization of the folded input norm over the decision interval.

The objective int sum_i |ts_i(x) - v(x)| dx is pointwise piecewise linear
in v(x) with slope K - 2j between the (j+1)-th and j-th largest shift
values.  Sorting the shifts pointwise gives a descending family of
envelopes a_1 >= ... >= a_K; the integral constraint selects a strip
between consecutive envelopes, and any feasible function pinched inside
that strip attains the minimum (a flat optimum set).  The canonical
minimizer is a convex combination of the two bounding envelopes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DegenerateScaling, GridError
from .functions import GridFunction, simpson_weights
from .tbvp import ShiftSequence

_TIE_TOL = 1e-13


@dataclass
class OrderEnvelopes:
    """Pointwise descending rearrangement of the shift sequence.

    values[j-1] holds the j-th largest shift at each node (j = 1..K).
    integrals is non-increasing; degenerate_pairs lists the j for which
    a_j and a_{j+1} coincide on a set of positive measure (the strict
    slope-separation hypothesis fails there, flagged but not fatal).
    """

    ts: ShiftSequence
    values: np.ndarray
    integrals: np.ndarray
    degenerate_pairs: list = field(default_factory=list)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def grid(self) -> GridFunction:
        return self.ts.grid

    def envelope(self, j: int) -> GridFunction:
        """The j-th envelope (1-based) as a GridFunction."""
        if not 1 <= j <= self.K:
            raise BadParams(f"envelope index must be in 1..{self.K}, got {j}")
        return self.grid.with_values(self.values[j - 1].copy())


def _measure_weights(g: GridFunction) -> np.ndarray:
    w = np.full(g.n, g.h)
    w[0] = w[-1] = g.h / 2.0
    return w


def order_envelopes(ts: ShiftSequence) -> OrderEnvelopes:
    vals = np.sort(ts.values, axis=0)[::-1]
    w = simpson_weights(ts.n, ts.grid.h)
    integrals = vals @ w
    mw = _measure_weights(ts.grid)
    scale = max(1.0, float(np.max(np.abs(vals))))
    degenerate = []
    for j in range(vals.shape[0] - 1):
        coincide = np.abs(vals[j] - vals[j + 1]) <= _TIE_TOL * scale
        if float(mw[coincide].sum()) > ts.grid.h:
            degenerate.append(j + 1)
    return OrderEnvelopes(ts, vals, integrals, degenerate)


def select_strip(env: OrderEnvelopes, A: float) -> int:
    """Index j of the strip [a_{j+1}, a_j] whose integrals bracket A.

    Ties go to the smallest index; j = 0 means A exceeds the top envelope
    integral strictly, j = K means A falls below the bottom one.
    """
    I = env.integrals
    K = env.K
    if A > I[0]:
        return 0
    for j in range(1, K):
        if A >= I[j]:
            return j
    return K


@dataclass
class StripSolution:
    """Canonical minimizer pinched in strip j, plus its certificate data.

    lower/upper are the bounding envelopes (None plays the infinite
    sentinel for the edge strips).  boundary_case records which branch of
    the construction produced h.  degenerate means the two envelopes
    coincide on positive measure, so the convex weight was arbitrary.
    """

    j: int
    lower: GridFunction | None
    upper: GridFunction | None
    h: GridFunction
    objective: float
    boundary_case: str
    degenerate: bool = False


def l1_objective(v: GridFunction, ts: ShiftSequence) -> float:
    g = ts.grid
    if v.n != g.n or abs(v.a - g.a) > 1e-12 or abs(v.b - g.b) > 1e-12:
        raise GridError("input grid does not match the shift grid")
    w = simpson_weights(g.n, g.h)
    return float(np.dot(w, np.abs(ts.values - v.values[None, :]).sum(axis=0)))


def construct_h(env: OrderEnvelopes, j: int, A: float) -> StripSolution:
    """Explicit minimizer for strip j (callers should pass select_strip's j).

    Interior strips take the convex combination of the bounding envelopes
    with weight theta = (A - p2)/(p1 - p2); the edge strips scale the
    outermost envelope by A over its integral, which is undefined when
    that integral vanishes (DegenerateScaling unless A is zero too).
    """
    K = env.K
    if not 0 <= j <= K:
        raise BadParams(f"strip index must be in 0..{K}, got {j}")
    grid = env.grid
    scale = max(1.0, float(np.max(np.abs(env.integrals))) if K else 1.0)

    if j == 0 or j == K:
        edge = env.values[0] if j == 0 else env.values[-1]
        p_edge = env.integrals[0] if j == 0 else env.integrals[-1]
        case = "scaled_top" if j == 0 else "scaled_bottom"
        if abs(p_edge) <= 1e-14 * scale:
            if abs(A) <= 1e-14 * scale:
                h = grid.with_values(np.zeros(grid.n))
            else:
                raise DegenerateScaling(
                    f"cannot scale envelope with zero integral to reach A={A}"
                )
        else:
            h = grid.with_values((A / p_edge) * edge)
        lower = env.envelope(1) if j == 0 else None
        upper = None if j == 0 else env.envelope(K)
        return StripSolution(j, lower, upper, h, l1_objective(h, env.ts), case)

    upper_v = env.values[j - 1]
    lower_v = env.values[j]
    p1 = float(env.integrals[j - 1])
    p2 = float(env.integrals[j])
    degenerate = False
    if abs(p1 - p2) <= 1e-14 * scale:
        # both envelope integrals equal A; any convex weight is feasible
        theta = 0.5
        degenerate = True
        case = "interior"
    else:
        theta = (A - p2) / (p1 - p2)
        if theta >= 1.0:
            theta, case = 1.0, "on_upper"
        elif theta <= 0.0:
            theta, case = 0.0, "on_lower"
        else:
            case = "interior"
    h = grid.with_values(theta * upper_v + (1.0 - theta) * lower_v)
    return StripSolution(
        j,
        env.envelope(j + 1),
        env.envelope(j),
        h,
        l1_objective(h, env.ts),
        case,
        degenerate,
    )


def strip_membership(v: GridFunction, env: OrderEnvelopes, j: int):
    """Estimated measures of {x : v(x) inside strip j} and the complement.

    Node-counting with half-weight endpoints, so the two measures add up
    to the interval length; the strip test carries a 1e-10 boundary band.
    """
    g = env.grid
    if v.n != g.n or abs(v.a - g.a) > 1e-12 or abs(v.b - g.b) > 1e-12:
        raise GridError("input grid does not match the envelope grid")
    tol = 1e-10
    upper = env.values[j - 1] if j >= 1 else np.full(g.n, np.inf)
    lower = env.values[j] if j <= env.K - 1 else np.full(g.n, -np.inf)
    inside = (v.values >= lower - tol) & (v.values <= upper + tol)
    w = _measure_weights(g)
    return float(w[inside].sum()), float(w[~inside].sum())


def strip_lower_bound(env: OrderEnvelopes, j: int, A: float) -> float:
    """Certified objective floor int U(a_{j+1}) + (K - 2j)(A - p2).

    Every feasible v has objective at least this value; the canonical h
    attains it exactly because U is linear with slope K - 2j on the strip.
    """
    if not 0 <= j <= env.K - 1:
        raise BadParams(f"lower bound needs 0 <= j < K, got j={j}")
    base = l1_objective(env.envelope(j + 1), env.ts)
    p2 = float(env.integrals[j])
    return base + (env.K - 2 * j) * (A - p2)


def ms_endpoint_check(env: OrderEnvelopes, j: int, c1: float) -> str:
    """Necessary-condition test for a smooth minimizer inside strip j.

    A C1 strip member must jump by c1 between the interval endpoints, so
    c1 has to fit inside [a_{j+1}(T) - a_j(-T), a_j(T) - a_{j+1}(-T)];
    returns "obstructed" when it cannot, else "possible".
    """
    if not 1 <= j <= env.K - 1:
        raise BadParams(f"endpoint check needs an interior strip, got j={j}")
    lo = env.values[j][-1] - env.values[j - 1][0]
    hi = env.values[j - 1][-1] - env.values[j][0]
    return "possible" if lo - 1e-12 <= c1 <= hi + 1e-12 else "obstructed"
