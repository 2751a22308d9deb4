"""Threshold rate functions and the per-model concentration checkers.

A graph is "concentrated" for its model when a small set of deterministic
inequalities holds: spectral closeness of the adjacency to its expectation,
degree-margin lower bounds, and (for the general variant) cross-cluster
edge-count bounds. The inequalities are parameterized by a tuple of positive
constants; concentrated inputs keep the SDP optimum pinned to the planted
clustering and survive a logarithmic number of edge flips, which is what the
stability mechanisms exploit.

All logarithms here are natural: the n^{-g} tail calculus behind the
thresholds is base-consistent only with ln.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .errors import DomainError, InfeasibleRegime, InvalidParams, InvalidShift
from .graph import Graph
from .models import (
    BASBM,
    CBSBM,
    GSSBM,
    BasbmParams,
    CbsbmParams,
    GroundTruth,
    GssbmParams,
    SbmParams,
    expected_adjacency,
)
from .spectral import spectral_norm

# ---------------------------------------------------------------------------
# scalar rate functions


def log_mean(a: float, b: float) -> float:
    """Logarithmic mean (a - b) / (log a - log b), extended by a at a == b.

    Lies strictly between b and a whenever a > b > 0.
    """
    if a < b:
        a, b = b, a
    if b <= 0:
        raise InvalidParams(f"log_mean needs positive arguments, got ({a}, {b})")
    if a == b:
        return float(a)
    return (a - b) / (math.log(a) - math.log(b))


def margin_exponent(alpha: float, a: float, b: float, rho: float) -> float:
    """Tail exponent for per-vertex degree margins at offset ``alpha``.

    Equals a*rho + b*(1-rho) - sqrt(alpha^2 + 4*rho*(1-rho)*a*b)
    + (|alpha|/2) * log(rho*b / ((1-rho)*a)). Strictly decreasing in
    |alpha|, so larger offsets are always harder.
    """
    if not (a > b > 0):
        raise InvalidParams(f"need a > b > 0, got ({a}, {b})")
    if not (0 < rho <= 0.5):
        raise InvalidParams(f"rho must lie in (0, 0.5], got {rho}")
    gamma = math.sqrt(alpha * alpha + 4 * rho * (1 - rho) * a * b)
    return (
        a * rho
        + b * (1 - rho)
        - gamma
        + 0.5 * abs(alpha) * math.log(rho * b / ((1 - rho) * a))
    )


def degree_margin_exponent(x: float, a: float, b: float, rho: float) -> float:
    """Worst-cluster degree-margin exponent at slack ``x``; drives c4 feasibility.

    This is margin_exponent evaluated at alpha = x - tau*(1-2*rho), the
    binding offset across both clusters. At rho = 1/2 and x >= 0 it reads
    (a+b)/2 - sqrt(x^2 + a*b) - (x/2)*log(a/b), so the slack-zero value is
    (sqrt(a) - sqrt(b))^2 / 2.
    """
    tau = log_mean(a, b)
    return margin_exponent(x - tau * (1 - 2 * rho), a, b, rho)


def binom_diff_exponent(
    rho1: float, rho2: float, a: float, b: float, alpha: float
) -> float:
    """Tail exponent of a Binomial(rho1*n, p) minus Binomial(rho2*n, q) difference.

    g = a*rho1 + b*rho2 - gamma - (alpha/2)*log((gamma-alpha)*a*rho1 /
    ((gamma+alpha)*b*rho2)) with gamma = sqrt(alpha^2 + 4*rho1*rho2*a*b).
    At alpha = 0 this collapses to (sqrt(a*rho1) - sqrt(b*rho2))^2.
    """
    if min(rho1, rho2, a, b) <= 0:
        raise InvalidParams("rho1, rho2, a, b must all be positive")
    gamma = math.sqrt(alpha * alpha + 4 * rho1 * rho2 * a * b)
    if alpha == 0.0:
        return a * rho1 + b * rho2 - gamma
    num = (gamma - alpha) * a * rho1
    den = (gamma + alpha) * b * rho2
    if num <= 0 or den <= 0:
        raise DomainError(f"log argument nonpositive at alpha={alpha}")
    return a * rho1 + b * rho2 - gamma - 0.5 * alpha * math.log(num / den)


def censored_margin_exponent(xi: float, a: float) -> float:
    """a * (sqrt(1-xi) - sqrt(xi))^2; must exceed 1 for censored recovery."""
    if not (0.0 <= xi <= 0.5):
        raise InvalidParams(f"xi must lie in [0, 0.5], got {xi}")
    if a <= 0:
        raise InvalidParams(f"need a > 0, got {a}")
    return a * (math.sqrt(1 - xi) - math.sqrt(xi)) ** 2


def poisson_tail_rate(x: float, y: float) -> float:
    """Large-deviation rate x - y*log(e*x/y), extended by x at y = 0.

    Nonnegative, zero exactly at y = x; governs both tails of binomial
    counts with mean proportional to x.
    """
    if x <= 0 or y < 0:
        raise InvalidParams(f"need x > 0 and y >= 0, got ({x}, {y})")
    if y == 0.0:
        return float(x)
    return x - y * math.log(math.e * x / y)


# ---------------------------------------------------------------------------
# constants tuples


@dataclass(frozen=True)
class BasbmConstants:
    c1: float
    c2: float
    c3: float
    c4: float

    variant = BASBM

    def as_tuple(self) -> tuple[float, ...]:
        return (self.c1, self.c2, self.c3, self.c4)


@dataclass(frozen=True)
class CbsbmConstants:
    c1: float
    c2: float

    variant = CBSBM

    def as_tuple(self) -> tuple[float, ...]:
        return (self.c1, self.c2)


@dataclass(frozen=True)
class GssbmConstants:
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    variant = GSSBM

    def as_tuple(self) -> tuple[float, ...]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)

    def tau_tilde(self, b: float) -> float:
        """Rate constant b + 2*c2 entering the outlier bound and lambda."""
        return b + 2.0 * self.c2


ConcentrationConstants = Union[BasbmConstants, CbsbmConstants, GssbmConstants]


@dataclass(frozen=True)
class ConditionResult:
    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    passed: bool

    def __post_init__(self):
        # keep reports JSON-serializable regardless of numpy scalar leakage
        if self.lhs is not None:
            object.__setattr__(self, "lhs", float(self.lhs))
        if self.rhs is not None:
            object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "passed": self.passed}


@dataclass(frozen=True)
class ConcentrationReport:
    conditions: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "conditions": [c.to_dict() for c in self.conditions]}


# ---------------------------------------------------------------------------
# binary-model derived quantities


def balanced_direction(gt: GroundTruth) -> np.ndarray:
    """Unit vector orthogonal to sigma maximizing the all-ones quadratic form.

    Closed form: sqrt((n-K)/(K*n)) on the first cluster and
    sqrt(K/(n*(n-K))) on the second, where K is the first cluster's size.
    Satisfies <x, sigma> = 0, ||x|| = 1 and x^T J x = 4K(n-K)/n.
    """
    n = gt.n
    k = gt.first_cluster_size
    if k == 0 or k == n:
        raise InvalidParams("balanced direction needs two nonempty clusters")
    x = np.empty(n)
    x[gt.assignment == 1] = math.sqrt((n - k) / (k * n))
    x[gt.assignment == -1] = math.sqrt(k / (n * (n - k)))
    return x


def lambda_star(params: BasbmParams) -> float:
    """Dual multiplier log_mean(a, b) * log(n) / n for the size constraint."""
    return log_mean(params.a, params.b) * params.log_n / params.n


def degree_margins(
    a_dense: np.ndarray, gt: GroundTruth, params: SbmParams
) -> np.ndarray:
    """Per-vertex margins sum_j A_ij * sigma_i * sigma_j, recentered for basbm.

    For the asymmetric model the size-constraint multiplier contributes
    -lambda * (2K - n) * sigma_i; the censored model has no such term.
    """
    sigma = gt.sigma
    d = (a_dense * np.outer(sigma, sigma)).sum(axis=1)
    if params.variant == BASBM:
        k = gt.first_cluster_size
        d = d - lambda_star(params) * (2 * k - params.n) * sigma
    return d


def expected_degree_margins(params: BasbmParams, gt: GroundTruth) -> np.ndarray:
    """Exact expectation of the basbm degree margins, per vertex."""
    n, a, b = params.n, params.a, params.b
    tau = log_mean(a, b)
    k = gt.first_cluster_size
    scale = params.log_n / n
    d_plus = (k * (a - tau) + (n - k) * (tau - b) - a) * scale
    d_minus = ((n - k) * (a - tau) + k * (tau - b) - a) * scale
    return np.where(gt.assignment == 1, d_plus, d_minus)


def _dense(graph_or_matrix) -> np.ndarray:
    if isinstance(graph_or_matrix, Graph):
        return graph_or_matrix.to_dense()
    return np.asarray(graph_or_matrix, dtype=np.float64)


# ---------------------------------------------------------------------------
# checkers


def check_basbm(
    graph, gt: GroundTruth, params: BasbmParams, constants: BasbmConstants
) -> ConcentrationReport:
    """Evaluate the four asymmetric-model concentration conditions."""
    a_dense = _dense(graph)
    if a_dense.shape[0] != gt.n or gt.n != params.n:
        raise InvalidParams("graph, ground truth, and params sizes disagree")
    n = params.n
    logn = params.log_n
    sqlogn = math.sqrt(logn)

    ea = expected_adjacency(params, gt)
    lhs1 = spectral_norm(a_dense - ea)
    cond1 = ConditionResult("spectral_deviation", lhs1, constants.c1 * sqlogn,
                            lhs1 <= constants.c1 * sqlogn)

    x = balanced_direction(gt)
    d = degree_margins(a_dense, gt, params)
    j_term = (lambda_star(params) - (params.p + params.q) / 2.0) * x.sum() ** 2
    lhs2 = float((x * x * d).sum() + j_term)
    cond2 = ConditionResult("balanced_direction_margin", lhs2,
                            constants.c2 * logn, lhs2 > constants.c2 * logn)

    d_expected = expected_degree_margins(params, gt)
    lhs3 = float(np.linalg.norm((d - d_expected) * x))
    cond3 = ConditionResult("margin_fluctuation", lhs3, constants.c3 * sqlogn,
                            lhs3 <= constants.c3 * sqlogn)

    lhs4 = float(d.min())
    cond4 = ConditionResult("degree_margin", lhs4, constants.c4 * logn,
                            lhs4 >= constants.c4 * logn)

    return ConcentrationReport((cond1, cond2, cond3, cond4))


def check_cbsbm(
    graph, gt: GroundTruth, params: CbsbmParams, constants: CbsbmConstants
) -> ConcentrationReport:
    """Evaluate the two censored-model concentration conditions."""
    a_dense = _dense(graph)
    if a_dense.shape[0] != gt.n or gt.n != params.n:
        raise InvalidParams("graph, ground truth, and params sizes disagree")
    logn = params.log_n
    sqlogn = math.sqrt(logn)

    ea = expected_adjacency(params, gt)
    lhs1 = spectral_norm(a_dense - ea)
    cond1 = ConditionResult("spectral_deviation", lhs1, constants.c1 * sqlogn,
                            lhs1 <= constants.c1 * sqlogn)

    d = degree_margins(a_dense, gt, params)
    lhs2 = float(d.min())
    cond2 = ConditionResult("degree_margin", lhs2, constants.c2 * logn,
                            lhs2 >= constants.c2 * logn)

    return ConcentrationReport((cond1, cond2))


def cluster_edge_counts(
    a_dense: np.ndarray, gt: GroundTruth
) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex and per-cluster edge counts for the general variant.

    Returns (E, C) where E[i, k] counts edges from vertex i into cluster
    k+1 and C[k, k'] counts edges between clusters k+1 and k'+1 (twice the
    internal count on the diagonal).
    """
    m = gt.indicator_matrix()
    e = a_dense @ m
    c = m.T @ a_dense @ m
    return e, c


def check_gssbm(
    graph, gt: GroundTruth, params: GssbmParams, constants: GssbmConstants
) -> ConcentrationReport:
    """Evaluate the five general-structure concentration conditions.

    Conditions quantified over empty index sets (single cluster, no
    outliers) pass vacuously with empty lhs/rhs.
    """
    a_dense = _dense(graph)
    if a_dense.shape[0] != gt.n or gt.n != params.n:
        raise InvalidParams("graph, ground truth, and params sizes disagree")
    n, b = params.n, params.b
    logn = params.log_n
    sqlogn = math.sqrt(logn)
    sizes = np.array(gt.sizes, dtype=np.float64)
    r = sizes.size
    assign = gt.assignment
    tau_t = constants.tau_tilde(b)

    ea = expected_adjacency(params, gt)
    lhs1 = spectral_norm(a_dense - ea)
    conds = [ConditionResult("spectral_deviation", lhs1, constants.c1 * sqlogn,
                             lhs1 <= constants.c1 * sqlogn)]

    e_counts, pair_counts = cluster_edge_counts(a_dense, gt)

    # 2: every member's internal degree clears (b + 2 c2) * rho_k * log n
    members = assign > 0
    if members.any():
        s = e_counts[np.arange(n), np.maximum(assign - 1, 0)]
        rho_k = sizes[np.maximum(assign - 1, 0)] / n
        slack = s - tau_t * rho_k * logn
        i_min = int(np.where(members, slack, np.inf).argmin())
        conds.append(ConditionResult(
            "internal_degree", float(s[i_min]),
            float(tau_t * rho_k[i_min] * logn),
            bool(slack[members].min() >= 0)))
    else:
        conds.append(ConditionResult("internal_degree", None, None, True))

    # 3: edges from any vertex into a foreign cluster stay small
    worst = (-math.inf, None, None)
    for k in range(1, r + 1):
        foreign = assign != k
        if not foreign.any():
            continue
        rhs = (b + constants.c2) * sizes[k - 1] * logn / n - constants.c3 * logn
        lhs_vals = e_counts[foreign, k - 1]
        i_rel = int(lhs_vals.argmax())
        slack = float(lhs_vals[i_rel] - rhs)
        if slack > worst[0]:
            worst = (slack, float(lhs_vals[i_rel]), rhs)
    if worst[1] is None:
        conds.append(ConditionResult("foreign_degree", None, None, True))
    else:
        conds.append(ConditionResult("foreign_degree", worst[1], worst[2],
                                     worst[0] <= 0))

    # 4: pairwise cluster-to-cluster edge totals are not too sparse
    if r >= 2:
        worst4 = (math.inf, None, None)
        for k in range(r):
            for kp in range(k + 1, r):
                cnt = float(pair_counts[k, kp])
                rhs = (sizes[k] * sizes[kp] * params.q
                       - 2.0 * math.sqrt(sizes[k] * sizes[kp]) * sqlogn
                       - constants.c4 * logn)
                slack = cnt - rhs
                if slack < worst4[0]:
                    worst4 = (slack, cnt, rhs)
        conds.append(ConditionResult("pair_density", worst4[1], worst4[2],
                                     worst4[0] >= 0))
    else:
        conds.append(ConditionResult("pair_density", None, None, True))

    # 5: outliers attach to every cluster well below the dual rate
    outliers = assign == 0
    if outliers.any() and r >= 1:
        rhs = tau_t * sizes[-1] * logn / n - constants.c5 * logn
        lhs5 = float(e_counts[outliers].max())
        conds.append(ConditionResult("outlier_degree", lhs5, rhs, lhs5 <= rhs))
    else:
        conds.append(ConditionResult("outlier_degree", None, None, True))

    return ConcentrationReport(tuple(conds))


def check_concentration(
    graph, gt: GroundTruth, params: SbmParams, constants: ConcentrationConstants
) -> ConcentrationReport:
    """Dispatch to the model-specific checker."""
    if params.variant == BASBM:
        return check_basbm(graph, gt, params, constants)
    if params.variant == CBSBM:
        return check_cbsbm(graph, gt, params, constants)
    return check_gssbm(graph, gt, params, constants)


# ---------------------------------------------------------------------------
# constant-tuple maps


def shift_constants(
    constants: ConcentrationConstants,
    c_stab: float,
    eps: float,
    *,
    rho: float | None = None,
    rho_min: float | None = None,
) -> ConcentrationConstants:
    """Constants valid for every graph within c_stab*log(n)/eps flips.

    Implements the persistence maps: basbm
    (c1 + sqrt(2c/eps), c2 - c/eps, c3 + sqrt(2c(1-rho)/(eps*rho)),
    c4 - c/eps); censored (c1 + sqrt(8c/eps), c2 - c/eps); general
    (c1 + sqrt(2c/eps), c2 - c/(eps*rho_min), c3 - c/eps, c4 + c/eps,
    c5 - c/eps). Raises InvalidShift when a shifted constant drops to
    or below zero.
    """
    if c_stab < 0 or eps <= 0:
        raise InvalidParams("need c_stab >= 0 and eps > 0")
    shift = c_stab / eps
    if isinstance(constants, BasbmConstants):
        if rho is None:
            raise InvalidParams("basbm shift needs rho")
        out = BasbmConstants(
            c1=constants.c1 + math.sqrt(2 * shift),
            c2=constants.c2 - shift,
            c3=constants.c3 + math.sqrt(2 * shift * (1 - rho) / rho),
            c4=constants.c4 - shift,
        )
    elif isinstance(constants, CbsbmConstants):
        out = CbsbmConstants(
            c1=constants.c1 + math.sqrt(8 * shift),
            c2=constants.c2 - shift,
        )
    elif isinstance(constants, GssbmConstants):
        if rho_min is None:
            raise InvalidParams("gssbm shift needs rho_min")
        out = GssbmConstants(
            c1=constants.c1 + math.sqrt(2 * shift),
            c2=constants.c2 - shift / rho_min,
            c3=constants.c3 - shift,
            c4=constants.c4 + shift,
            c5=constants.c5 - shift,
        )
    else:
        raise InvalidParams(f"unknown constants type {type(constants)!r}")
    if min(out.as_tuple()) <= 0 and shift > 0:
        raise InvalidShift(
            f"shift c/eps = {shift:.4f} drives a constant nonpositive: {out}"
        )
    return out


# which direction makes each condition stricter: -1 shrinks an upper-bound
# slack constant, +1 grows a lower-bound requirement
_TIGHTEN_DIRECTIONS = {
    BasbmConstants: {"c1": -1, "c2": +1, "c3": -1, "c4": +1},
    CbsbmConstants: {"c1": -1, "c2": +1},
    GssbmConstants: {"c1": -1, "c2": +1, "c3": +1, "c4": -1, "c5": +1},
}


def tighten_constants(
    constants: ConcentrationConstants,
    alpha: float,
    params: SbmParams | None = None,
) -> ConcentrationConstants:
    """Scale each constant by (1 +- 2*alpha) toward strictness.

    A check passing under the tightened tuple with rate estimates off by a
    factor 1 +- alpha still implies the original check under the true
    rates. Raises InvalidShift when tightening breaks positivity or, when
    ``params`` is supplied, a lemma-side restriction (basbm: c2 < tau - b;
    censored: c2 < a).
    """
    if not (0.0 <= alpha <= 0.01):
        raise InvalidParams(f"alpha must lie in [0, 0.01], got {alpha}")
    directions = _TIGHTEN_DIRECTIONS[type(constants)]
    scaled = {
        name: getattr(constants, name) * (1.0 + 2.0 * alpha * direction)
        for name, direction in directions.items()
    }
    out = replace(constants, **scaled)
    if min(out.as_tuple()) <= 0:
        raise InvalidShift(f"tightening produced a nonpositive constant: {out}")
    if params is not None:
        if isinstance(out, BasbmConstants):
            bound = log_mean(params.a, params.b) - params.b
            if out.c2 >= bound:
                raise InvalidShift(
                    f"tightened c2 = {out.c2:.4f} reaches tau - b = {bound:.4f}")
        if isinstance(out, CbsbmConstants) and out.c2 >= params.a:
            raise InvalidShift(f"tightened c2 = {out.c2:.4f} reaches a = {params.a}")
    return out


# ---------------------------------------------------------------------------
# default constants


def _solve_decreasing(
    f, target: float, lo: float, hi: float | None = None, tol: float = 1e-10
) -> float:
    """Largest x >= lo with f(x) = target, for f decreasing on [lo, hi]."""
    if hi is None:
        hi = max(lo, 1.0)
        while f(hi) > target:
            hi = 2 * hi + 1
            if hi > 1e12:
                raise InfeasibleRegime("no finite root found")
    lo_b = lo
    for _ in range(200):
        mid = 0.5 * (lo_b + hi)
        if f(mid) > target:
            lo_b = mid
        else:
            hi = mid
        if hi - lo_b < tol:
            break
    return 0.5 * (lo_b + hi)


def _solve_increasing(f, target: float, lo: float, tol: float = 1e-10) -> float:
    """Smallest x >= lo with f(x) = target, for f increasing on [lo, inf)."""
    hi = max(lo, 1.0)
    while f(hi) < target:
        hi = 2 * hi + 1
        if hi > 1e12:
            raise InfeasibleRegime("no finite root found")
    lo_b = lo
    for _ in range(200):
        mid = 0.5 * (lo_b + hi)
        if f(mid) < target:
            lo_b = mid
        else:
            hi = mid
        if hi - lo_b < tol:
            break
    return 0.5 * (lo_b + hi)


# z-score used by the finite-n moment guards when sizing gssbm constants
_MOMENT_Z = 4.0


def default_constants(
    params: SbmParams, eps: float, c_stab: float, margin: float = 0.1
) -> ConcentrationConstants:
    """Construct a constants tuple meeting every lemma-side restriction.

    ``eps`` may be ``math.inf`` for non-private use, in which case all
    c_stab/eps terms vanish. Raises InfeasibleRegime, naming the violated
    inequality, when no valid tuple exists for (params, eps, c_stab).
    """
    params.validate()
    if eps <= 0 or c_stab < 0:
        raise InvalidParams("need eps > 0 and c_stab >= 0")
    shift = 0.0 if math.isinf(eps) else c_stab / eps

    if params.variant == BASBM:
        a, b, rho = params.a, params.b, params.rho
        tau = log_mean(a, b)
        if shift + 2 * margin >= tau - b:
            raise InfeasibleRegime(
                f"c/eps = {shift:.4f} >= tau - b - 2m = {tau - b - 2 * margin:.4f}; "
                "the size-balance condition cannot persist")
        c2 = min(shift + margin, tau - b - margin)
        peak = max(shift, tau * (1 - 2 * rho))
        f = lambda x: degree_margin_exponent(x, a, b, rho)
        if f(peak) <= 1.0 + margin:
            raise InfeasibleRegime(
                f"degree-margin exponent at slack {peak:.4f} is {f(peak):.4f} "
                f"<= 1 + {margin}; recovery threshold fails for eps={eps}")
        c4 = _solve_decreasing(f, 1.0 + margin, peak)
        return BasbmConstants(
            c1=2.0 * math.sqrt(a) + 1.0,
            c2=c2,
            c3=math.sqrt(a) + 1.0,
            c4=c4,
        )

    if params.variant == CBSBM:
        a, xi = params.a, params.xi
        h = censored_margin_exponent(xi, a)
        if h <= 1.0 + margin:
            raise InfeasibleRegime(
                f"censored margin exponent {h:.4f} <= 1 + {margin}")
        if shift + 2 * margin >= a:
            raise InfeasibleRegime(
                f"c/eps = {shift:.4f} >= a - 2m = {a - 2 * margin:.4f}")
        return CbsbmConstants(c1=2.0 * math.sqrt(a) + 1.0, c2=shift + margin)

    # general structure
    a, b, n = params.a, params.b, params.n
    logn = params.log_n
    sizes = np.array(params.sizes, dtype=np.float64)
    rho_min = float(sizes.min() / n)
    target = 1.0 / rho_min + margin
    p = params.p

    c3 = max(0.25, shift + margin)
    c5 = shift + 0.5

    lb = [shift / rho_min + margin if shift > 0 else 0.0]
    lb.append(_solve_increasing(
        lambda c2: poisson_tail_rate(b, b + c2 - c3 / rho_min), target,
        lo=c3 / rho_min))
    lb.append(_solve_increasing(
        lambda c2: poisson_tail_rate(b, b + 2 * c2 - c5 / rho_min), target,
        lo=0.5 * c5 / rho_min))
    c2_lo = max(lb)

    if poisson_tail_rate(a, b) <= target:
        raise InfeasibleRegime(
            f"intra/inter rate gap I(a, b) = {poisson_tail_rate(a, b):.4f} "
            f"<= 1/rho_min + m = {target:.4f}")
    c2_hi = _solve_decreasing(
        lambda c2: poisson_tail_rate(a, b + 2 * c2), target,
        lo=0.0, hi=0.5 * (a - b))
    # finite-n guard: the dual rate b + 2*c2 must stay clear of the smallest
    # internal-degree fluctuations, else the certificate diagonal goes negative
    for size in sizes:
        mean_s = (size - 1) * p
        sd_s = math.sqrt(max((size - 1) * p * (1 - p), 1e-12))
        c2_hi = min(c2_hi, 0.5 * (((mean_s - _MOMENT_Z * sd_s) * n
                                   / (size * logn)) - b))
    if c2_lo > c2_hi:
        raise InfeasibleRegime(
            f"no c2 satisfies both tails: lower bound {c2_lo:.4f} exceeds "
            f"upper bound {c2_hi:.4f}")
    c2 = 0.5 * (c2_lo + c2_hi)

    return GssbmConstants(
        c1=2.0 * math.sqrt(a) + 1.0,
        c2=c2,
        c3=c3,
        c4=1.0,
        c5=c5,
    )
