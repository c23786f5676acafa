"""instability-lab: exact Hilbert-Mumford/Kempf instability computations
over F_p(s) and its purely inseparable root tower."""

from .binary_forms import (
    AT_INFINITY,
    BinaryForm,
    InstabilityReport,
    ProjectivePoint,
    RootClass,
    act_on_form,
    act_on_root,
    analyze,
    hm_weight,
    multiplicity_profile,
    oracle_nu_max,
    sl2_matrices,
)
from .bounds import BoundReport, binomial, jh_t, padic_digits, sl2_symmetric_t, tensor_t, wedge_t
from .bundle_calc import SplittingType
from .elementary_polys import (
    EPSet,
    MultiPoly,
    action,
    evaluate,
    extension_degree_bound,
    general_ep,
    theta_tensor,
    theta_wedge,
    vanishing_pattern,
)
from .errors import CertificateError, InputError
from .field_tower import (
    FpPoly,
    PrimeField,
    TowerElement,
    TowerPoly,
    arith,
    is_prime,
    parse_tower,
)
from .kempf_torus import (
    Nu,
    OnePS,
    ParabolicDescriptor,
    State,
    best_over_candidates,
    nearest_point,
    nearest_point_with_certificate,
    parabolic_of,
    state_of_tensor,
    torus_destabilizer,
)

__version__ = "0.1.0"

__all__ = [
    "AT_INFINITY",
    "BinaryForm",
    "BoundReport",
    "CertificateError",
    "EPSet",
    "FpPoly",
    "InputError",
    "InstabilityReport",
    "MultiPoly",
    "Nu",
    "OnePS",
    "ParabolicDescriptor",
    "PrimeField",
    "ProjectivePoint",
    "RootClass",
    "SplittingType",
    "State",
    "TowerElement",
    "TowerPoly",
    "act_on_form",
    "act_on_root",
    "action",
    "analyze",
    "arith",
    "best_over_candidates",
    "binomial",
    "evaluate",
    "extension_degree_bound",
    "general_ep",
    "hm_weight",
    "is_prime",
    "jh_t",
    "multiplicity_profile",
    "nearest_point",
    "nearest_point_with_certificate",
    "oracle_nu_max",
    "padic_digits",
    "parabolic_of",
    "parse_tower",
    "sl2_matrices",
    "sl2_symmetric_t",
    "state_of_tensor",
    "tensor_t",
    "theta_tensor",
    "theta_wedge",
    "torus_destabilizer",
    "vanishing_pattern",
    "wedge_t",
    "__version__",
]
