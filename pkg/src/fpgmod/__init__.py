"""Exact computations with modules over F_p[G], G cyclic of order p**n."""

from .analyzer import (
    NormData,
    NormFiltrationModel,
    Ranks,
    check_p_power_lengths,
    derive_norm_data,
    minimal_level,
    structure_theorem_check,
    synthesize,
    theorem_ranks,
    verify_norm_filtration,
)
from .linalg import (
    FpMatrix,
    Subspace,
    complement,
    image_basis,
    intersect,
    kernel_basis,
    mat_pow,
    rref,
)
from .module import (
    Decomposition,
    GModule,
    GroupSpec,
    JordanType,
    cyclic_submodule,
    decompose,
    direct_sum,
    exclusion_check,
    fixed_submodule,
    from_jordan_type,
    is_isomorphic,
    jordan_type,
    length,
    new_module,
    norm_operator,
    restrict,
    restrict_cyclic_type,
)

__version__ = "0.1.0"
