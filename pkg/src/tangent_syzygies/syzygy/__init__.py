"""Koszul cohomology and bottom syzygies."""

from .koszul import (
    GradedIdealSlice,
    KoszulSpot,
    MissingDegree,
    RankOracle,
    differential_rank,
    koszul_cohomology_dim,
    koszul_kernel,
)
from .products import (
    NoPreimage,
    NotACycle,
    bottom_cycles,
    bottom_cycles_by_intersection,
    box0_product,
    box_product,
    box_span,
    box_span_certificate,
    element_weight,
    det_image,
    det_image_slice,
    in_bottom_cycles,
    lower_cycle_basis,
    pushforward_syzygy,
    segre_bottom_syzygy,
    standard_hook_cycle,
    upper_cycle_basis,
    upper_preimage,
    uw_weights,
)
