"""Dual certificates witnessing SDP optimality at a planted clustering.

Each certificate is a matrix S built deterministically from the adjacency
and the clustering. S annihilates the cluster vectors by construction (an
algebraic identity, not a numerical fact); validity then amounts to S being
PSD with the eigenvalue just above the kernel bounded away from zero, plus
sign conditions on the general variant's auxiliary quantities. A valid
certificate proves the cluster matrix is the unique optimizer, so rounding
the solver output must reproduce the clustering exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .concentration import (
    GssbmConstants,
    cluster_edge_counts,
    default_constants,
    degree_margins,
    log_mean,
)
from .errors import InvalidParams, ShapeMismatch
from .graph import Graph
from .models import (
    BASBM,
    GSSBM,
    BasbmParams,
    CbsbmParams,
    GroundTruth,
    GssbmParams,
    expected_adjacency,
)
from .spectral import DEFAULT_TOLS, as_symmetric


@dataclass(frozen=True)
class BinaryCertificate:
    variant: str
    d_star: np.ndarray = field(repr=False)
    lam: float
    s_matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class GeneralCertificate:
    d_star: np.ndarray = field(repr=False)
    b_matrix: np.ndarray = field(repr=False)
    eta: float
    lam: float
    s_matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BinaryReport:
    valid: bool
    lambda_min: float
    lambda2: float
    kernel_residual: float

    def to_dict(self) -> dict:
        return {"valid": self.valid, "lambda_min": self.lambda_min,
                "lambda2": self.lambda2, "kernel_residual": self.kernel_residual}


@dataclass(frozen=True)
class GeneralReport:
    valid: bool
    lambda_min: float
    lambda_after_kernel: float
    kernel_residual: float
    b_min_off: float
    d_min_member: float
    slackness_residual: float

    def to_dict(self) -> dict:
        return {"valid": self.valid, "lambda_min": self.lambda_min,
                "lambda_after_kernel": self.lambda_after_kernel,
                "kernel_residual": self.kernel_residual,
                "b_min_off": self.b_min_off,
                "d_min_member": self.d_min_member,
                "slackness_residual": self.slackness_residual}


def _dense(graph_or_matrix) -> np.ndarray:
    if isinstance(graph_or_matrix, Graph):
        return graph_or_matrix.to_dense()
    return as_symmetric(graph_or_matrix)


def build_binary(graph, gt: GroundTruth, params) -> BinaryCertificate:
    """Certificate for the two binary variants.

    basbm: S = diag(d) - A + lambda*J with d_i = sum_j A_ij sigma_i sigma_j
    - lambda*(2K - n)*sigma_i and lambda = log_mean(a, b)*log(n)/n.
    cbsbm: S = diag(d) - A with the plain margins. Either way S*sigma = 0
    identically for any adjacency.
    """
    if not isinstance(params, (BasbmParams, CbsbmParams)):
        raise InvalidParams("binary certificate needs basbm or cbsbm params")
    a_dense = _dense(graph)
    if a_dense.shape[0] != gt.n:
        raise ShapeMismatch("adjacency and ground truth sizes disagree")
    d = degree_margins(a_dense, gt, params)
    if params.variant == BASBM:
        lam = log_mean(params.a, params.b) * params.log_n / params.n
        s = np.diag(d) - a_dense + lam
    else:
        lam = 0.0
        s = np.diag(d) - a_dense
    return BinaryCertificate(params.variant, d, lam, s)


def verify_binary(
    cert: BinaryCertificate, gt: GroundTruth, tol: float = DEFAULT_TOLS.certificate
) -> BinaryReport:
    """Numerical validity of a binary certificate, tolerances relative to ||S||."""
    s = cert.s_matrix
    sigma = gt.sigma
    w = np.linalg.eigvalsh(s)
    scale = max(abs(float(w[0])), abs(float(w[-1])), 1.0)
    residual = float(np.abs(s @ sigma).max())
    lambda_min = float(w[0])
    lambda2 = float(w[1]) if w.size > 1 else float("nan")
    valid = (
        w.size > 1
        and residual <= tol * scale
        and lambda_min >= -tol * scale
        and lambda2 > tol * scale
    )
    return BinaryReport(bool(valid), lambda_min, lambda2, residual)


def build_general(
    graph,
    gt: GroundTruth,
    params: GssbmParams,
    constants: GssbmConstants | None = None,
) -> GeneralCertificate:
    """Certificate for the general variant.

    Uses eta = ||A - E[A]||_2 (true rates), lambda = (b + 2*c2)*log(n)/n,
    diagonal corrections d_i = s_i - eta - lambda*K_k on members (zero on
    outliers), and the four-case cross-cluster pricing matrix B. When no
    constants are supplied, non-private defaults are derived from params.
    """
    if params.variant != GSSBM:
        raise InvalidParams("general certificate needs gssbm params")
    a_dense = _dense(graph)
    if a_dense.shape[0] != gt.n:
        raise ShapeMismatch("adjacency and ground truth sizes disagree")
    if constants is None:
        constants = default_constants(params, math.inf, 0.0)
    n = params.n
    lam = constants.tau_tilde(params.b) * params.log_n / n
    eta = float(np.abs(np.linalg.eigvalsh(
        a_dense - expected_adjacency(params, gt))).max())

    assign = gt.assignment
    sizes = np.array(gt.sizes, dtype=np.float64)
    e_counts, pair_counts = cluster_edge_counts(a_dense, gt)
    member = assign > 0
    if sizes.size:
        internal = e_counts[np.arange(n), np.maximum(assign - 1, 0)]
        d = np.where(member,
                     internal - eta - lam * sizes[np.maximum(assign - 1, 0)],
                     0.0)
    else:
        d = np.zeros(n)

    b_mat = np.zeros((n, n))
    r = sizes.size
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
                blk = np.broadcast_to(
                    lam - (e_counts[mi, kp - 1] / sizes[kp - 1])[:, None],
                    (mi.sum(), mj.sum()))
            elif kp == 0:
                blk = np.broadcast_to(
                    lam - (e_counts[mj, k - 1] / sizes[k - 1])[None, :],
                    (mi.sum(), mj.sum()))
            else:
                blk = (lam
                       + pair_counts[k - 1, kp - 1] / (sizes[k - 1] * sizes[kp - 1])
                       - (e_counts[mi, kp - 1] / sizes[kp - 1])[:, None]
                       - (e_counts[mj, k - 1] / sizes[k - 1])[None, :])
            b_mat[np.ix_(mi, mj)] = blk

    s = np.diag(d) - b_mat - a_dense + eta * np.eye(n) + lam
    return GeneralCertificate(d, b_mat, eta, lam, s)


def verify_general(
    cert: GeneralCertificate, gt: GroundTruth, tol: float = DEFAULT_TOLS.certificate
) -> GeneralReport:
    """Numerical validity of a general certificate.

    Five checks: the cluster indicators lie in the kernel; complementary
    slackness B_ij * Z_ij = 0; B nonnegative with strict positivity across
    distinct parts; positive diagonal corrections on members; and the
    (r+1)-st smallest eigenvalue strictly positive with no eigenvalue below
    -tol*||S||.
    """
    s = cert.s_matrix
    assign = gt.assignment
    r = len(gt.sizes)
    w = np.linalg.eigvalsh(s)
    scale = max(abs(float(w[0])), abs(float(w[-1])), 1.0)

    indicator = gt.indicator_matrix()
    kernel_residual = float(np.abs(s @ indicator).max()) if r else 0.0

    z = (assign[:, None] == assign[None, :]) & (assign[:, None] > 0)
    slackness = float(np.abs(cert.b_matrix[z]).max()) if z.any() else 0.0

    diff = assign[:, None] != assign[None, :]
    b_min_off = float(cert.b_matrix[diff].min()) if diff.any() else math.inf

    member = assign > 0
    d_min = float(cert.d_star[member].min()) if member.any() else math.inf

    lambda_min = float(w[0])
    lambda_after = float(w[r]) if w.size > r else float("nan")
    valid = (
        w.size > r
        and kernel_residual <= tol * scale
        and slackness <= tol * scale
        and b_min_off > 0
        and d_min > 0
        and lambda_min >= -tol * scale
        and lambda_after > tol * scale
    )
    return GeneralReport(bool(valid), lambda_min, lambda_after, kernel_residual,
                         b_min_off, d_min, slackness)
