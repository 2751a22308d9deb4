"""SDP relaxations for the three block models and their solver.

The solver is a two-block projection splitting (ADMM): one block projects
onto the PSD cone, the other onto the affine (and, for the general variant,
box) constraints, with scaled dual updates. All constraint projections are
closed-form, so no external solver is needed.

Exactness is never claimed from residuals alone. At regular checkpoints the
current iterate is rounded to a candidate clustering and a dual certificate
is built from the data and the candidate; when the certificate verifies, the
candidate's cluster matrix is the unique optimum and the solver returns it
directly. Sub-threshold inputs never certify and fall back to plain ADMM
convergence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .concentration import log_mean
from .errors import (
    DegenerateSpectrum,
    InconsistentRelation,
    InfeasibleProblem,
    InvalidParams,
    TooLarge,
)
from .graph import CENSORED, Graph
from .models import (
    BASBM,
    CBSBM,
    GSSBM,
    SbmParams,
    assignment_to_cluster_matrix,
)
from .spectral import DEFAULT_TOLS, as_symmetric

CONVERGED = "converged"
MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-6
    max_iters: int = 3000
    step: float = 1.0
    certify_every: int = 25
    balance: bool = True


@dataclass(frozen=True)
class SdpProblem:
    """Data matrix plus the affine/cone constraints of one relaxation."""

    variant: str
    a_dense: np.ndarray = field(repr=False)
    mass: float | None = None          # basbm: <J, Y> target (2K - n)^2
    first_cluster_size: int | None = None
    sizes: tuple[int, ...] | None = None  # gssbm cluster sizes

    @property
    def n(self) -> int:
        return self.a_dense.shape[0]

    def objective(self, y: np.ndarray) -> float:
        return float((self.a_dense * y).sum())


@dataclass(frozen=True)
class SdpSolution:
    problem: SdpProblem = field(repr=False)
    matrix: np.ndarray = field(repr=False)
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: str
    certified: bool


def _validate_data(a_dense: np.ndarray, censored: bool) -> np.ndarray:
    a_dense = as_symmetric(a_dense)
    if float(np.abs(np.diag(a_dense)).max(initial=0.0)) > 0:
        raise InvalidParams("data matrix must have zero diagonal")
    if censored and not np.isin(a_dense, (-1.0, 0.0, 1.0)).all():
        raise InvalidParams("censored data entries must lie in {-1, 0, 1}")
    return a_dense


def basbm_problem(graph_or_matrix, rho: float) -> SdpProblem:
    a_dense = _graph_dense(graph_or_matrix, censored=False)
    n = a_dense.shape[0]
    k = int(math.floor(rho * n))
    if not 0 < k <= n // 2 + n % 2:
        raise InfeasibleProblem(f"first cluster size {k} invalid for n={n}")
    return SdpProblem(BASBM, a_dense, mass=float((2 * k - n) ** 2),
                      first_cluster_size=k)


def cbsbm_problem(graph_or_matrix) -> SdpProblem:
    a_dense = _graph_dense(graph_or_matrix, censored=True)
    return SdpProblem(CBSBM, a_dense)


def gssbm_problem(graph_or_matrix, sizes) -> SdpProblem:
    a_dense = _graph_dense(graph_or_matrix, censored=False)
    n = a_dense.shape[0]
    sizes = tuple(int(s) for s in sizes)
    if not sizes or min(sizes) < 1 or sum(sizes) > n:
        raise InfeasibleProblem(f"cluster sizes {sizes} infeasible for n={n}")
    return SdpProblem(GSSBM, a_dense, sizes=sizes)


def _graph_dense(graph_or_matrix, censored: bool) -> np.ndarray:
    if isinstance(graph_or_matrix, Graph):
        want = CENSORED if censored else "simple"
        if graph_or_matrix.alphabet != want:
            raise InvalidParams(
                f"expected a {want} graph, got {graph_or_matrix.alphabet}")
        return graph_or_matrix.to_dense()
    return _validate_data(np.asarray(graph_or_matrix, dtype=np.float64), censored)


def problem_from_graph(g: Graph, params: SbmParams) -> SdpProblem:
    if params.variant == BASBM:
        return basbm_problem(g, params.rho)
    if params.variant == CBSBM:
        return cbsbm_problem(g)
    return gssbm_problem(g, params.sizes)


# ---------------------------------------------------------------------------
# constraint projections


def _project_basbm(m: np.ndarray, mass: float) -> np.ndarray:
    """Exact projection onto {diag = 1, <J, Y> = mass}.

    The diagonal and the uniform off-diagonal shift are orthogonal
    directions, so the two constraints project independently.
    """
    n = m.shape[0]
    p = m.copy()
    np.fill_diagonal(p, 1.0)
    off_count = n * n - n
    if off_count:
        off_sum = p.sum() - n
        p[~np.eye(n, dtype=bool)] += (mass - n - off_sum) / off_count
    return p


def _project_diag_one(m: np.ndarray) -> np.ndarray:
    p = m.copy()
    np.fill_diagonal(p, 1.0)
    return p


def _project_box_sum(v: np.ndarray, lo: float, hi: float, s: float) -> np.ndarray:
    """Projection onto {lo <= z <= hi, sum(z) = s} by bisection on the shift."""
    if v.size == 0:
        return v

    def mass(theta: float) -> float:
        return float(np.clip(v - theta, lo, hi).sum())

    theta_hi = float(v.max()) - lo + 1.0
    if math.isfinite(hi):
        theta_lo = float(v.min()) - hi - 1.0
    else:
        theta_lo = float(v.min()) - s / v.size - 1.0
    while mass(theta_lo) < s:
        theta_lo -= max(1.0, abs(theta_lo))
    while mass(theta_hi) > s:
        theta_hi += max(1.0, abs(theta_hi))
    for _ in range(100):
        mid = 0.5 * (theta_lo + theta_hi)
        if mass(mid) > s:
            theta_lo = mid
        else:
            theta_hi = mid
    return np.clip(v - 0.5 * (theta_lo + theta_hi), lo, hi)


def _project_gssbm(m: np.ndarray, trace_target: float, total_target: float) -> np.ndarray:
    """Projection onto {0 <= Z_ii <= 1, Z_ij >= 0, tr Z = sum K, <J,Z> = sum K^2}.

    Diagonal and off-diagonal coordinates are disjoint, so the projection
    splits into two independent box-plus-sum problems.
    """
    n = m.shape[0]
    dmask = np.eye(n, dtype=bool)
    out = np.empty_like(m)
    out[dmask] = _project_box_sum(np.diag(m).copy(), 0.0, 1.0, trace_target)
    out[~dmask] = _project_box_sum(m[~dmask], 0.0, math.inf,
                                   total_target - trace_target)
    return (out + out.T) / 2.0


# ---------------------------------------------------------------------------
# data-driven optimality certificates for rounded candidates


def _certify_binary_candidate(
    a_dense: np.ndarray, sigma: np.ndarray, with_mass: bool, logn: float
) -> bool:
    """Check whether sigma*sigma^T is provably the unique SDP optimum.

    Builds the dual matrix S = diag(d) - A (+ lambda*J) whose kernel
    contains sigma by construction; validity then reduces to S being PSD
    with second-smallest eigenvalue bounded away from zero. For the
    size-constrained variant the multiplier comes from the empirical
    intra/inter densities of the candidate partition itself.
    """
    n = a_dense.shape[0]
    d = (a_dense @ sigma) * sigma
    s_mat = -a_dense.copy()
    if with_mass:
        k = int(np.count_nonzero(sigma > 0))
        same = np.equal.outer(sigma, sigma)
        intra_pairs = (k * (k - 1) + (n - k) * (n - k - 1)) / 2
        inter_pairs = k * (n - k)
        if intra_pairs == 0 or inter_pairs == 0:
            return False
        p_hat = a_dense[same].sum() / 2 / intra_pairs
        q_hat = a_dense[~same].sum() / 2 / inter_pairs
        if not (p_hat > q_hat > 0):
            return False
        lam = log_mean(p_hat, q_hat)
        d = d - lam * (2 * k - n) * sigma
        s_mat += lam
    s_mat[np.diag_indices(n)] += d
    w = np.linalg.eigvalsh(s_mat)
    scale = max(abs(w[0]), abs(w[-1]), 1.0)
    tol = DEFAULT_TOLS.certificate * scale
    return bool(w[0] >= -tol and w[1] > tol)


def _certify_general_candidate(
    a_dense: np.ndarray, assign: np.ndarray, sizes: np.ndarray
) -> bool:
    """Certify an assignment for the general variant.

    The multiplier on the all-ones matrix may be any value in the exact
    interval that keeps the diagonal corrections positive and the
    complementary-slackness matrix nonnegative; both endpoints are
    computable in closed form from the candidate's edge counts, with the
    noise level eta taken as the spectral deviation from the candidate's
    own empirical rates.
    """
    n = a_dense.shape[0]
    r = sizes.size
    member = assign > 0
    m = np.zeros((n, r))
    for k in range(1, r + 1):
        m[assign == k, k - 1] = 1.0
    e_counts = a_dense @ m
    pair_counts = m.T @ a_dense @ m
    ksz = sizes.astype(np.float64)

    intra_pairs = float((ksz * (ksz - 1)).sum() / 2)
    inter_pairs = n * (n - 1) / 2 - intra_pairs
    if intra_pairs <= 0 or inter_pairs <= 0:
        return False
    intra_edges = float(np.trace(pair_counts)) / 2
    p_hat = intra_edges / intra_pairs
    q_hat = (a_dense.sum() / 2 - intra_edges) / inter_pairs
    if not p_hat > q_hat >= 0:
        return False
    expected = np.full((n, n), q_hat)
    same = (assign[:, None] == assign[None, :]) & (assign[:, None] > 0)
    expected[same] = p_hat
    np.fill_diagonal(expected, 0.0)
    eta = float(np.abs(np.linalg.eigvalsh(a_dense - expected)).max())

    internal = e_counts[np.arange(n), np.maximum(assign - 1, 0)]
    lam_hi = math.inf
    for k in range(r):
        mask = assign == k + 1
        lam_hi = min(lam_hi, (float(internal[mask].min()) - eta) / ksz[k])
    lam_lo = 0.0
    outliers = ~member
    if outliers.any():
        lam_lo = max(lam_lo, float((e_counts[outliers] / ksz[None, :]).max()))
    for k in range(r):
        for kp in range(r):
            if k == kp:
                continue
            ebar = pair_counts[k, kp] / (ksz[k] * ksz[kp])
            term = (float((e_counts[assign == k + 1, kp]).max()) / ksz[kp]
                    + float((e_counts[assign == kp + 1, k]).max()) / ksz[k]
                    - ebar)
            lam_lo = max(lam_lo, term)
    if not lam_lo < lam_hi:
        return False
    lam = 0.5 * (lam_lo + lam_hi)

    d = np.where(member, internal - eta - lam * ksz[np.maximum(assign - 1, 0)], 0.0)
    if member.any() and float(d[member].min()) <= 0:
        return False
    b_mat = _complementary_matrix(e_counts, pair_counts, assign, ksz, lam)
    diff = (assign[:, None] != assign[None, :])
    if diff.any() and float(b_mat[diff].min()) <= 0:
        return False
    s_mat = np.diag(d) - b_mat - a_dense + eta * np.eye(n) + lam
    w = np.linalg.eigvalsh(s_mat)
    scale = max(abs(w[0]), abs(w[-1]), 1.0)
    tol = DEFAULT_TOLS.certificate * scale
    return bool(w[0] >= -tol and w[r] > tol)


def _complementary_matrix(
    e_counts: np.ndarray,
    pair_counts: np.ndarray,
    assign: np.ndarray,
    ksz: np.ndarray,
    lam: float,
) -> np.ndarray:
    """The four-case cross-cluster pricing matrix, zero within clusters."""
    n = assign.size
    r = ksz.size
    b_mat = np.zeros((n, n))
    for k in range(0, r + 1):
        mi = assign == k
        if not mi.any():
            continue
        for kp in range(0, r + 1):
            if k == kp:
                continue
            mj = assign == kp
            if not mj.any():
                continue
            if k == 0:
                blk = lam - (e_counts[mi, kp - 1] / ksz[kp - 1])[:, None]
                blk = np.broadcast_to(blk, (mi.sum(), mj.sum()))
            elif kp == 0:
                blk = lam - (e_counts[mj, k - 1] / ksz[k - 1])[None, :]
                blk = np.broadcast_to(blk, (mi.sum(), mj.sum()))
            else:
                blk = (lam
                       + pair_counts[k - 1, kp - 1] / (ksz[k - 1] * ksz[kp - 1])
                       - (e_counts[mi, kp - 1] / ksz[kp - 1])[:, None]
                       - (e_counts[mj, k - 1] / ksz[k - 1])[None, :])
            b_mat[np.ix_(mi, mj)] = blk
    return b_mat


# ---------------------------------------------------------------------------
# rounding helpers shared by the solver checkpoints and the public API


def _binary_candidates(v: np.ndarray, k: int | None) -> list[np.ndarray]:
    """Sign patterns induced by an eigenvector, size-constrained when k given.

    Entries are quantized at 1e-9 relative before ranking so exact ties in
    the eigenvector break by lowest index rather than by rounding jitter.
    """
    n = v.size
    scale = max(float(np.abs(v).max()), 1e-300)
    out = []
    for vec in (v, -v):
        quantized = np.round(vec / scale * 1e9)
        if k is None:
            sig = np.where(quantized >= 0, 1.0, -1.0)
        else:
            order = np.lexsort((np.arange(n), -quantized))
            sig = -np.ones(n)
            sig[order[:k]] = 1.0
        out.append(sig)
    return out


def _best_binary_candidate(
    a_dense: np.ndarray, v: np.ndarray, k: int | None
) -> np.ndarray:
    cands = _binary_candidates(v, k)
    objs = [float(sig @ a_dense @ sig) for sig in cands]
    sig = cands[int(np.argmax(objs))]
    if sig[0] < 0 and (k is None or 2 * k == sig.size):
        sig = -sig
    return sig


def _extract_general(x: np.ndarray, sizes: np.ndarray) -> Optional[np.ndarray]:
    """Assignment from thresholding a near-integral matrix; None if malformed."""
    n = x.shape[0]
    thr = DEFAULT_TOLS.z_threshold
    keep = np.diag(x) >= thr
    idx = np.where(keep)[0]
    if idx.size != int(sizes.sum()):
        return None
    rel = x[np.ix_(idx, idx)] > thr
    np.fill_diagonal(rel, True)
    seen = np.zeros(idx.size, dtype=bool)
    comps = []
    for start in range(idx.size):
        if seen[start]:
            continue
        stack = [start]
        comp = []
        while stack:
            u = stack.pop()
            if seen[u]:
                continue
            seen[u] = True
            comp.append(u)
            stack.extend(np.where(rel[u] & ~seen)[0].tolist())
        comps.append(sorted(comp))
    if sorted(len(c) for c in comps) != sorted(int(s) for s in sizes):
        return None
    for comp in comps:
        block = rel[np.ix_(comp, comp)]
        if not block.all():
            return None
    assign = np.zeros(n, dtype=np.int64)
    comps_sorted = sorted(comps, key=lambda c: (-len(c), c[0]))
    cluster_order = np.argsort(-sizes, kind="stable")
    for rank, comp in enumerate(comps_sorted):
        k = int(cluster_order[rank]) + 1
        if len(comp) != int(sizes[k - 1]):
            return None
        assign[idx[comp]] = k
    return assign


def _candidate_from_iterate(
    prob: SdpProblem, eigvecs: np.ndarray, eigvals: np.ndarray
) -> tuple[Optional[np.ndarray], Optional[np.ndarray]]:
    """(cluster matrix, discrete labels) rounded from the PSD iterate."""
    if eigvals[-1] <= 0:
        return None, None
    v = eigvecs[:, -1]
    if prob.variant == BASBM:
        sig = _best_binary_candidate(prob.a_dense, v, prob.first_cluster_size)
        return np.outer(sig, sig), sig
    if prob.variant == CBSBM:
        sig = _best_binary_candidate(prob.a_dense, v, None)
        return np.outer(sig, sig), sig
    pos = eigvals > 0
    x = (eigvecs[:, pos] * eigvals[pos]) @ eigvecs[:, pos].T
    assign = _extract_general(x, np.array(prob.sizes))
    if assign is None:
        return None, None
    return assignment_to_cluster_matrix(GSSBM, assign), assign


def _certify_candidate(prob: SdpProblem, labels: np.ndarray) -> bool:
    n = prob.n
    logn = math.log(n) if n > 1 else 1.0
    if prob.variant == BASBM:
        return _certify_binary_candidate(prob.a_dense, labels, True, logn)
    if prob.variant == CBSBM:
        return _certify_binary_candidate(prob.a_dense, labels, False, logn)
    return _certify_general_candidate(prob.a_dense, labels, np.array(prob.sizes))


# ---------------------------------------------------------------------------
# solver


def solve(prob: SdpProblem, opts: SolveOptions = SolveOptions()) -> SdpSolution:
    """Maximize <A, Y> over the variant's constraint set.

    Returns the certified integral optimum when a rounded checkpoint
    candidate passes its dual certificate; otherwise runs the projection
    splitting to the requested residual tolerance and returns the better of
    the final iterate and the last rounded feasible candidate.
    """
    n = prob.n
    a_dense = prob.a_dense
    if prob.variant == BASBM:
        project = lambda m: _project_basbm(m, prob.mass)
        y = np.eye(n)
    elif prob.variant == CBSBM:
        project = _project_diag_one
        y = np.eye(n)
    else:
        sizes = np.array(prob.sizes, dtype=np.float64)
        trace_target = float(sizes.sum())
        total_target = float((sizes ** 2).sum())
        project = lambda m: _project_gssbm(m, trace_target, total_target)
        y = np.eye(n) * (trace_target / n)

    t = max(float(np.linalg.norm(a_dense, 2)), 1e-3)
    t_lo, t_hi = t / 16.0, t * 16.0
    u = np.zeros((n, n))
    x = y
    primal = dual = math.inf
    best_candidate = None

    it = 0
    for it in range(1, opts.max_iters + 1):
        w_mat = y - u
        w_mat = (w_mat + w_mat.T) / 2.0
        evals, evecs = np.linalg.eigh(w_mat)
        pos = evals > 0
        x = (evecs[:, pos] * evals[pos]) @ evecs[:, pos].T
        y_old = y
        y = project(x + u + a_dense / t)
        u = u + opts.step * (x - y)

        scale = max(1.0, float(np.linalg.norm(x, "fro")),
                    float(np.linalg.norm(y, "fro")))
        primal = float(np.linalg.norm(x - y, "fro")) / scale
        dual = t * float(np.linalg.norm(y - y_old, "fro")) / scale
        if primal < opts.tol and dual < opts.tol:
            break

        if opts.certify_every and it % opts.certify_every == 0:
            cand, labels = _candidate_from_iterate(prob, evecs, evals)
            if cand is not None:
                best_candidate = cand
                if _certify_candidate(prob, labels):
                    return SdpSolution(
                        problem=prob, matrix=cand,
                        objective=prob.objective(cand),
                        primal_residual=0.0, dual_residual=0.0,
                        iterations=it, status=CONVERGED, certified=True)

        if opts.balance and it >= 200 and it % 100 == 0:
            if primal > 10 * dual and t < t_hi:
                t *= 2.0
                u /= 2.0
            elif dual > 10 * primal and t > t_lo:
                t /= 2.0
                u *= 2.0

    status = CONVERGED if (primal < opts.tol and dual < opts.tol) else MAX_ITERS
    matrix = y
    objective = prob.objective(y)
    # vertex polish: prefer an exactly-feasible rounded candidate when it
    # scores at least as well as the approximate iterate
    evecs, evals = _eig_sorted(x)
    cand, _ = _candidate_from_iterate(prob, evecs, evals)
    if cand is None:
        cand = best_candidate
    if cand is not None and prob.objective(cand) >= objective:
        matrix = cand
        objective = prob.objective(cand)
    return SdpSolution(problem=prob, matrix=matrix, objective=objective,
                       primal_residual=primal, dual_residual=dual,
                       iterations=it, status=status, certified=False)


def _eig_sorted(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    evals, evecs = np.linalg.eigh((m + m.T) / 2.0)
    return evecs, evals


# ---------------------------------------------------------------------------
# rounding


def round_binary(sol: SdpSolution, rho: float | None = None) -> np.ndarray:
    """Discrete +-1 labels from a binary-variant solution matrix.

    With ``rho`` given, exactly floor(rho*n) coordinates with the largest
    top-eigenvector entries become +1 (ties broken by lowest index);
    without it the sign pattern is used. Of the two antipodal readings of
    the eigenvector, the one with the larger data objective wins. Raises
    DegenerateSpectrum when the top eigenvalue is not simple within the
    eigen-gap tolerance.
    """
    if sol.problem.variant == GSSBM:
        raise InvalidParams("round_binary expects a binary-variant solution")
    m = as_symmetric(sol.matrix)
    n = m.shape[0]
    evals, evecs = np.linalg.eigh(m)
    scale = max(abs(float(evals[0])), abs(float(evals[-1])), 1.0)
    if n > 1 and (evals[-1] - evals[-2]) <= DEFAULT_TOLS.eigen_gap * scale:
        raise DegenerateSpectrum(
            f"top eigenvalue gap {float(evals[-1] - evals[-2]):.3e} below "
            f"tolerance; rounding is ambiguous")
    k = int(math.floor(rho * n)) if rho is not None else None
    return _best_binary_candidate(sol.problem.a_dense, evecs[:, -1], k)


def round_general(sol: SdpSolution, sizes) -> np.ndarray:
    """Assignment labels (0 = outlier) from a general-variant solution.

    Thresholds entries at 1/2: the diagonal picks non-outliers and the
    off-diagonal induces a same-cluster relation whose connected components
    must be cliques matching the requested sizes; otherwise the relation
    does not encode a valid clustering and InconsistentRelation is raised.
    """
    sizes = np.array([int(s) for s in sizes])
    assign = _extract_general(as_symmetric(sol.matrix), sizes)
    if assign is None:
        raise InconsistentRelation(
            "thresholded relation is not a clique partition with the "
            f"requested sizes {sizes.tolist()}")
    return assign


# ---------------------------------------------------------------------------
# brute-force maximum-likelihood oracle

_BRUTE_FORCE_LIMIT = 16


def mle_bruteforce(g: Graph, params: SbmParams) -> np.ndarray:
    """Exact maximizer of the combinatorial objective, n <= 16 only.

    Enumerates every admissible assignment, scores sum_ij A_ij sigma_i
    sigma_j (or twice the internal edge total for the general variant), and
    returns the cluster matrix of the first maximizer in deterministic
    enumeration order, which breaks ties by the lexicographically smallest
    assignment.
    """
    n = g.n
    if n > _BRUTE_FORCE_LIMIT:
        raise TooLarge(f"n = {n} exceeds the enumeration guard {_BRUTE_FORCE_LIMIT}")
    a_dense = g.to_dense()

    if params.variant == BASBM:
        k = params.first_cluster_size
        best, best_obj = None, -math.inf
        for plus in itertools.combinations(range(n), k):
            sig = -np.ones(n)
            sig[list(plus)] = 1.0
            obj = float(sig @ a_dense @ sig)
            if obj > best_obj:
                best, best_obj = sig, obj
        return np.outer(best, best)

    if params.variant == CBSBM:
        best, best_obj = None, -math.inf
        for bits in range(2 ** (n - 1)):
            sig = np.ones(n)
            for v in range(1, n):
                if bits & (1 << (v - 1)):
                    sig[v] = -1.0
            obj = float(sig @ a_dense @ sig)
            if obj > best_obj:
                best, best_obj = sig, obj
        return np.outer(best, best)

    sizes = params.sizes
    best_assign, best_obj = None, -math.inf
    for assign in _partitions(n, sizes):
        obj = 0.0
        for k in range(1, len(sizes) + 1):
            members = np.where(assign == k)[0]
            obj += float(a_dense[np.ix_(members, members)].sum())
        if obj > best_obj:
            best_assign, best_obj = assign, obj
    return assignment_to_cluster_matrix(GSSBM, best_assign)


def _partitions(n: int, sizes):
    """Yield all assignments of sizes[k] vertices to cluster k+1, rest outliers."""
    def rec(available: tuple[int, ...], k: int, assign: np.ndarray):
        if k == len(sizes):
            yield assign.copy()
            return
        for chosen in itertools.combinations(available, sizes[k]):
            assign[list(chosen)] = k + 1
            rest = tuple(v for v in available if v not in chosen)
            yield from rec(rest, k + 1, assign)
            assign[list(chosen)] = 0

    yield from rec(tuple(range(n)), 0, np.zeros(n, dtype=np.int64))


@dataclass(frozen=True)
class RecoveryResult:
    """Rounded SDP output; matrix and labels are None on rounding failure."""

    matrix: np.ndarray | None
    labels: np.ndarray | None
    solution: SdpSolution

    @property
    def failed(self) -> bool:
        return self.matrix is None


def recover(g: Graph, params: SbmParams,
            opts: SolveOptions = SolveOptions()) -> RecoveryResult:
    """Solve the variant's SDP and round to a discrete clustering.

    A rounding failure (degenerate spectrum or inconsistent relation) is
    reported through ``failed`` rather than an exception: callers treat it
    as a distinguished recovery-failure outcome.
    """
    prob = problem_from_graph(g, params)
    sol = solve(prob, opts)
    try:
        if params.variant == GSSBM:
            assign = round_general(sol, params.sizes)
            return RecoveryResult(
                assignment_to_cluster_matrix(GSSBM, assign), assign, sol)
        rho = params.rho if params.variant == BASBM else None
        sig = round_binary(sol, rho)
        return RecoveryResult(np.outer(sig, sig), sig.astype(np.int64), sol)
    except (DegenerateSpectrum, InconsistentRelation):
        return RecoveryResult(None, None, sol)
