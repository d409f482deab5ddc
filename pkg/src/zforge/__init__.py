"""K_{s,t}-free bipartite graphs from random polynomials over finite
fields, with Kővári–Sós–Turán bounds and exact small-case oracles."""

from .construction import (
    Construction,
    ConstructionParams,
    build,
    field_for_n,
    intersection_size_via_differences,
    neighborhood_points,
    params_derive,
    subsample,
)
from .gf import FieldElem, FieldSpec, enumerate_elements, field_make, next_prime_below
from .graph import (
    BipartiteGraph,
    DensityReport,
    density_report,
    kst_double_count,
    kst_free,
    kst_free_reference,
    kst_upper_bound,
)
from .oracle import OracleResult, z_exact, z_exact_naive
from .poly import (
    MultiPoly,
    PointSet,
    common_zeros,
    monomial_count,
    poly_eval,
    poly_random,
    poly_sub,
    vanish_probability_exact,
    vanish_probability_mc,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "Construction",
    "ConstructionParams",
    "DensityReport",
    "FieldElem",
    "FieldSpec",
    "MultiPoly",
    "OracleResult",
    "PointSet",
    "build",
    "common_zeros",
    "density_report",
    "enumerate_elements",
    "field_for_n",
    "field_make",
    "intersection_size_via_differences",
    "kst_double_count",
    "kst_free",
    "kst_free_reference",
    "kst_upper_bound",
    "monomial_count",
    "neighborhood_points",
    "next_prime_below",
    "params_derive",
    "poly_eval",
    "poly_random",
    "poly_sub",
    "subsample",
    "vanish_probability_exact",
    "vanish_probability_mc",
    "z_exact",
    "z_exact_naive",
]

