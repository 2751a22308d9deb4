"""Laplace noise, distance to instability, and the two release mechanisms.

The release rule is propose-test-release: compute how many entry flips it
takes to change the estimator's output, add Laplace(1/eps) noise, and
publish the output only when the noisy distance clears log(1/delta)/eps.
The slow mechanism measures the distance by neighborhood search; the fast
one certifies a concentration condition that implies the distance bound,
and only falls back to searching when the test fails.

Failure outcomes of the estimator (solver or rounding breakdown) count as
differing from every output, including other failures, which keeps the
distance 1-Lipschitz across neighboring graphs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .concentration import check_concentration, default_constants, tighten_constants
from .errors import (
    BudgetExceeded,
    DegenerateEstimate,
    InfeasibleRegime,
    InvalidParams,
    InvalidShift,
)
from .graph import SIMPLE, Graph, neighbors_at_distance
from .models import BASBM, GroundTruth, SbmParams, same_clustering
from .sdp import SolveOptions, recover


@dataclass(frozen=True)
class PrivacyParams:
    """(eps, delta) privacy budget; threshold = log(1/delta)/eps."""

    eps: float
    delta: float

    def __post_init__(self):
        if self.eps <= 0:
            raise InvalidParams(f"eps must be positive, got {self.eps}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParams(f"delta must lie in (0, 1), got {self.delta}")

    @classmethod
    def from_exponent(cls, eps: float, exponent: float, n: int) -> "PrivacyParams":
        """Convention delta = n^(-exponent)."""
        return cls(eps, float(n) ** (-exponent))

    @property
    def threshold(self) -> float:
        return math.log(1.0 / self.delta) / self.eps


def sample_laplace(scale: float, rng: np.random.Generator) -> float:
    """One Laplace(scale) draw by inverse CDF from a single uniform."""
    if scale <= 0:
        raise InvalidParams(f"scale must be positive, got {scale}")
    u = rng.random()
    while u == 0.0:  # open-interval guard; log(0) otherwise
        u = rng.random()
    return laplace_quantile(u, scale)


def laplace_quantile(u: float, scale: float) -> float:
    """Inverse CDF of the centered Laplace distribution."""
    if scale <= 0:
        raise InvalidParams(f"scale must be positive, got {scale}")
    if not 0.0 < u < 1.0:
        raise InvalidParams(f"quantile argument must lie in (0, 1), got {u}")
    if u >= 0.5:
        return -scale * math.log(2.0 * (1.0 - u))
    return scale * math.log(2.0 * u)


ClusteringFn = Callable[[Graph], Optional[np.ndarray]]


def outcomes_equal(o1: Optional[np.ndarray], o2: Optional[np.ndarray]) -> bool:
    """Failure outcomes (None) differ from everything, including each other."""
    if o1 is None or o2 is None:
        return False
    return same_clustering(o1, o2)


def distance_to_instability(
    g: Graph,
    f: ClusteringFn,
    cap: int,
    *,
    budget_s: float | None = None,
    max_evals: int | None = None,
) -> int:
    """Smallest k <= cap such that some graph at distance k changes f's output.

    Returns ``cap`` when no such graph exists within the cap. Enumeration
    runs in nondecreasing distance order, so the first differing neighbor
    pins the answer. Raises BudgetExceeded instead of ever returning a
    wrong value when the configured wall-clock or evaluation budget runs
    out.
    """
    if cap < 0:
        raise InvalidParams(f"cap must be nonnegative, got {cap}")
    if cap == 0:
        return 0
    base = f(g)
    start = time.monotonic()
    evals = 0
    for k in range(1, cap + 1):
        for neighbor in neighbors_at_distance(g, k):
            if not outcomes_equal(f(neighbor), base):
                return k
            evals += 1
            if max_evals is not None and evals >= max_evals:
                raise BudgetExceeded(
                    f"distance search hit the evaluation budget {max_evals}")
            if budget_s is not None and evals % 64 == 0:
                if time.monotonic() - start > budget_s:
                    raise BudgetExceeded(
                        f"distance search exceeded {budget_s:.1f}s at distance {k}")
    return cap


@dataclass(frozen=True)
class MechanismTrace:
    d_hat: float
    noise: float
    threshold: float
    released: bool
    concentration_pass: Optional[bool] = None
    solver_status: Optional[str] = None
    fast_path: Optional[bool] = None
    estimated_rates: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class MechanismOutcome:
    """Released cluster matrix, or None for the withheld symbol.

    ``result`` is None exactly when the noisy distance missed the threshold
    or the estimator itself failed (a failure can never be released as a
    clustering).
    """

    result: Optional[np.ndarray]
    trace: MechanismTrace

    @property
    def bottom(self) -> bool:
        return self.result is None


def stbl(
    g: Graph,
    f: ClusteringFn,
    priv: PrivacyParams,
    rng: np.random.Generator,
    *,
    slack: float | None = None,
    budget_s: float | None = None,
    max_evals: int | None = None,
    noise_override: float | None = None,
) -> MechanismOutcome:
    """Stability mechanism over an arbitrary clustering function.

    The distance search is capped at ceil(threshold) + ceil(slack), slack
    defaulting to 20/eps: beyond that cap the release decision changes with
    probability below exp(-20), which is folded into the approximate-DP
    accounting. ``noise_override`` is a test hook pinning the Laplace draw.
    """
    if slack is None:
        slack = 20.0 / priv.eps
    cap = math.ceil(priv.threshold) + math.ceil(slack)
    d = distance_to_instability(g, f, cap, budget_s=budget_s, max_evals=max_evals)
    noise = noise_override if noise_override is not None else sample_laplace(
        1.0 / priv.eps, rng)
    released = d + noise > priv.threshold
    value = f(g) if released else None
    return MechanismOutcome(
        result=value,
        trace=MechanismTrace(d_hat=float(d), noise=noise,
                             threshold=priv.threshold, released=bool(released)),
    )


def param_estimate(g: Graph) -> tuple[float, float, float]:
    """Estimate (a, b, rho) of an asymmetric model from the degree profile.

    Vertices split at the mean normalized degree w_i = deg_i / log(n); the
    low side estimates the smaller cluster. The within-side degree averages
    determine (a, b) through the two-cluster mean-degree system. Raises
    DegenerateEstimate when the split is one-sided or balanced enough to
    make the system singular (|1 - 2*rho| < 1e-3).
    """
    if g.alphabet != SIMPLE:
        raise InvalidParams("parameter estimation expects a simple graph")
    n = g.n
    if n < 2:
        raise InvalidParams("need at least two vertices")
    w = g.degrees() / math.log(n)
    w_bar = float(w.mean())
    low = w <= w_bar
    high = w >= w_bar
    rho_hat = float(low.mean())
    if min(rho_hat, 1.0 - rho_hat) < 1e-3 or abs(1.0 - 2.0 * rho_hat) < 1e-3:
        raise DegenerateEstimate(f"degree split gives rho = {rho_hat:.4f}")
    # conditional means of w on each side of the split
    w_minus = float(w[low].sum()) / (n * rho_hat)
    w_plus = float(w[high].sum()) / (n * float(high.mean()))
    denom = 1.0 - 2.0 * rho_hat
    a_hat = ((1.0 - rho_hat) * w_plus - rho_hat * w_minus) / denom
    b_hat = ((1.0 - rho_hat) * w_minus - rho_hat * w_plus) / denom
    return a_hat, b_hat, rho_hat


def _labels_to_ground_truth(variant: str, labels: np.ndarray) -> GroundTruth:
    return GroundTruth(variant, labels)


def stbl_fast(
    g: Graph,
    params: SbmParams,
    priv: PrivacyParams,
    c_stab: float,
    rng: np.random.Generator,
    *,
    estimate_rates: bool = False,
    margin: float = 0.1,
    alpha: float = 0.001,
    solve_opts: SolveOptions = SolveOptions(),
    f: ClusteringFn | None = None,
    budget_s: float | None = None,
    max_evals: int | None = None,
    noise_override: float | None = None,
) -> MechanismOutcome:
    """Fast stability mechanism: concentration test instead of search.

    Solves the SDP once and rounds it; when the rounded clustering makes
    the (tightened) concentration check pass, the distance is pinned to
    c_stab*log(n)/eps without any neighborhood search. On a failed check
    the exact capped distance is measured, which is exponentially slower
    and guarded by the evaluation/wall-clock budget.

    With ``estimate_rates`` the intra/inter rates (a, b) are re-estimated
    from the degree profile before checking (asymmetric variant only); a
    degenerate estimate sends the run down the measured-distance branch.
    ``c_stab`` plays the stability role and is independent of the delta
    exponent in ``priv``.
    """
    if c_stab < 0:
        raise InvalidParams(f"c_stab must be nonnegative, got {c_stab}")
    if f is None:
        f = lambda h: recover(h, params, solve_opts).matrix

    result = recover(g, params, solve_opts)
    matrix, labels = result.matrix, result.labels
    solver_status = result.solution.status

    estimated = None
    check_params = params
    conc_pass = False
    if labels is not None:
        usable = True
        if estimate_rates:
            if params.variant != BASBM:
                raise InvalidParams("rate estimation is only defined for basbm")
            try:
                a_hat, b_hat, _ = param_estimate(g)
                if a_hat > b_hat > 0:
                    estimated = (a_hat, b_hat)
                    check_params = replace(params, a=a_hat, b=b_hat)
                else:
                    usable = False
            except DegenerateEstimate:
                usable = False
        if usable:
            try:
                check_params.validate()
                constants = tighten_constants(
                    default_constants(check_params, priv.eps, c_stab, margin),
                    alpha, check_params)
                gt_hat = _labels_to_ground_truth(params.variant, labels)
                conc_pass = check_concentration(
                    g, gt_hat, check_params, constants).passed
            except (InfeasibleRegime, InvalidShift, InvalidParams):
                conc_pass = False

    cap_real = c_stab * math.log(g.n) / priv.eps
    if conc_pass:
        d_hat = cap_real
        fast_path = True
    else:
        k_max = math.ceil(cap_real)
        d = distance_to_instability(g, f, k_max, budget_s=budget_s,
                                    max_evals=max_evals)
        d_hat = min(cap_real, float(d))
        fast_path = False

    noise = noise_override if noise_override is not None else sample_laplace(
        1.0 / priv.eps, rng)
    released = d_hat + noise > priv.threshold
    value = matrix if released else None
    return MechanismOutcome(
        result=value,
        trace=MechanismTrace(
            d_hat=d_hat, noise=noise, threshold=priv.threshold,
            released=bool(released), concentration_pass=conc_pass,
            solver_status=solver_status, fast_path=fast_path,
            estimated_rates=estimated),
    )
