"""Finite-scale vector measures, cross norms and Hilbert-Schmidt constructions."""
from __future__ import annotations

__version__ = "0.1.0"

from .finite_algebra import FiniteAlgebra, ProductAlgebra, bell_number, partitions, rectangle
from .half_average import VectorFamily, cd_closed_form, estimate_cd, half_average_subset
from .hs_extension import (
    DivergenceWitness,
    HSConstruction,
    construct_hs_measures,
    divergence_witness,
    optimality_check,
    spectral_demo,
)
from .kernels import BACKEND
from .khintchine import (
    SignSum,
    check_lower_constant,
    check_upper_constant,
    elementary_inequality_check,
    exact_moment,
    mc_moment,
    rademacher,
    tail_bound_check,
)
from .tensor_norms import (
    TensorElement,
    hs_norm,
    injective_norm,
    khintchine_summing_check,
    l_norm_bounds,
    m_norm_bounds,
    p_summing_lower_bound,
    p_summing_profile,
    projective_norm,
    r_norm_bounds,
)
from .vector_measures import (
    ComplexMeasure,
    OptConfig,
    TruncatedMeasure,
    VectorMeasure,
    check_control_measure,
    control_measure,
    pi_ratio,
    semivariation,
    squeezing_witness,
    subset_sup,
    total_variation_product,
    variation,
)
