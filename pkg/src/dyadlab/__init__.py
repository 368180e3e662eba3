"""dyadlab: a dyadic-mesh laboratory for quasi-Banach function-space norms,
maximal operators, and Muckenhoupt-type constants."""

from .mesh import (
    DomainError,
    DyadicCube,
    GridFunction,
    Mesh,
    MeshMismatchError,
    PreconditionError,
    SparseCollection,
    average,
    carleson_constant,
    cz_stopping_cubes,
    is_sparse,
    sparse_renormalize,
    sparse_witness,
    weak_decomposition,
)
from .phi import PowerPhi, SampledPhi, delta2_check, phi_for_exponent
from .spaces import (
    Certification,
    Concavification,
    KotheDual,
    MixedFamily,
    Morrey,
    MusielakOrlicz,
    OrliczAmemiya,
    Space,
    VariableLebesgue,
    WeakType,
    WeightedLebesgue,
    amemiya_norm,
    block_space,
    dual_norm_lower,
    dual_norm_reference,
    kothe_dual_norm,
    luxemburg_norm,
    mixed_norm,
    weak_norm,
)
from .operators import (
    Averaging,
    AveragingSum,
    DyadicMaximal,
    RAverage,
    RestrictedMaximal,
    SharpMaximal,
    apply_operator,
    linearized_maximal,
    rdf_majorant,
    square_function_ratio,
)
from .constants import (
    ConstantReport,
    a_sparse_constant,
    a_strong_constant,
    convexity_constants,
    fujii_wilson_constant,
    g_constant,
    muckenhoupt_space_constant,
    muckenhoupt_weight_constant,
    op_norm,
)

__version__ = "0.1.0"
