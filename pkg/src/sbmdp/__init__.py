"""Differentially private exact community recovery in stochastic block models.

Library layout:

* :mod:`sbmdp.graph` -- immutable symmetric graphs, Hamming geometry,
  edge-list serialization.
* :mod:`sbmdp.models` -- the three block-model variants, seeded generation,
  ground truth, cluster matrices.
* :mod:`sbmdp.spectral` -- dense symmetric eigen-tools and PSD projection.
* :mod:`sbmdp.sdp` -- the SDP relaxations, projection-splitting solver,
  rounding, and the small-n brute-force oracle.
* :mod:`sbmdp.concentration` -- threshold rate functions and the
  per-variant concentration checkers with constant-tuple maps.
* :mod:`sbmdp.certificates` -- dual certificates proving SDP optimality at
  a planted clustering.
* :mod:`sbmdp.privacy` -- Laplace noise, distance to instability, and the
  stability / fast-stability release mechanisms.
* :mod:`sbmdp.harness` -- seeded recovery-rate sweeps with CSV output.
"""

from .graph import Graph, GraphDelta, neighbors_within, read_edge_list, write_edge_list
from .models import (
    BasbmParams,
    CbsbmParams,
    GroundTruth,
    GssbmParams,
    cluster_matrix,
    expected_adjacency,
    generate,
    same_clustering,
)
from .privacy import MechanismOutcome, PrivacyParams, stbl, stbl_fast
from .sdp import SolveOptions, mle_bruteforce, recover, solve

__all__ = [
    "Graph",
    "GraphDelta",
    "neighbors_within",
    "read_edge_list",
    "write_edge_list",
    "BasbmParams",
    "CbsbmParams",
    "GssbmParams",
    "GroundTruth",
    "cluster_matrix",
    "expected_adjacency",
    "generate",
    "same_clustering",
    "MechanismOutcome",
    "PrivacyParams",
    "stbl",
    "stbl_fast",
    "SolveOptions",
    "mle_bruteforce",
    "recover",
    "solve",
]

__version__ = "0.1.0"
