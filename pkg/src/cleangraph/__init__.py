"""Clean graph Cl2(Z_n): Wiener index, diameter and matching number.

Closed forms are computed from the factorization of n; every one of them
has a brute-force counterpart on the explicit graph.
"""

from .graph import CleanGraph, SizeLimitError, Vertex, adjacent, build_cl2, export, from_json
from .matching import (
    Matching,
    construct_perfect_matching,
    matching_number_closed,
    maximum_matching,
    verify_matching,
)
from .metrics import (
    INF,
    WienerDecomposition,
    bfs_distances,
    coefficient_table,
    diameter,
    distance_closed,
    wiener_bruteforce,
    wiener_closed,
    wiener_closed_corrected,
    wiener_decomposition_closed,
    wiener_decomposition_corrected,
    wiener_decomposition_oracle,
)
from .ring import (
    Factorization,
    RingData,
    count_self_inverse_closed,
    enumerate_idempotents,
    enumerate_self_inverse_units,
    enumerate_units,
    euler_phi,
    factorize,
    mod_inverse,
    ring_data,
)

__version__ = "0.1.0"
