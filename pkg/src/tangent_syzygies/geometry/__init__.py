from .equations import (
    DegenerateOracle,
    SampledComponent,
    canonical_basis,
    format_poly,
    ideal_bottom_component,
    quadrics_by_jets,
    sampled_component,
)
from .jets import (
    ChartError,
    JetVariety,
    OsculatingFrame,
    dim_estimate,
    from_descriptor,
    osculating_frame,
    pencil_product,
    rnc,
    sample_secant_osculating_point,
    segre,
    segre_veronese,
)
from .tensors import (
    LinearTensor,
    b_map,
    b_map_columns,
    b_map_image_rank,
    change_basis,
    check_x_multiplicative,
    generic_matrix_tensor,
    identity_tensor,
    intro_tensor,
    multiplication_tensor,
)
