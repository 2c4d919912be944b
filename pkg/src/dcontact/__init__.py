"""Exact verification of shifted symplectic and shifted contact local models."""
from .cdga import (
    Cdga,
    CdgaSpec,
    DarbouxLayout,
    Point,
    build_tower,
    check_d_squared,
    check_master_equation,
    check_minimal_at,
    differential_from_hamiltonian,
    localize,
    master_equation_residual,
    vdim,
    with_differential,
)
from .complexes import (
    ComplexMap,
    FreeComplex,
    cocone,
    cone,
    homology_ranks,
    identity_map,
    is_acyclic,
    is_quasi_iso,
    restrict_cotangent,
    restrict_tangent,
    shift,
    strict_cokernel,
    strict_kernel,
)
from .contact import (
    check_contact,
    check_scale_invariance,
    kernel_of_form,
    reeb_field,
    reeb_solutions,
)
from .darboux import (
    DarbouxScheme,
    build_contact_darboux,
    build_phi,
    build_symplectic_darboux,
    omega0,
    theta,
    theta_shift,
)
from .derham import D, Form, VectorField, contract, d_int, ddr, is_closed_sequence, is_shifted_pform, wedge
from .errors import (
    AlgebraMismatchError,
    ChainMapError,
    DContactError,
    DegreeError,
    DuplicateNameError,
    InvalidPointError,
    MasterEquationError,
    MissingImageError,
    NotAGeneratorError,
    PreconditionError,
    SchemeError,
    TowerError,
)
from .graded import Derivation, GradedVar, Poly, dR, derive, evaluate, format_poly, partial
from .parser import Manifest, ManifestError, parse_expression, parse_form, parse_manifest
from .report import Check, Report
from .symplectify import (
    check_symplectic,
    pairing_identity,
    pairing_identity_table,
    symplectify,
    three_case_table,
    vdim_extension,
    weight_grading,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatchError",
    "build_contact_darboux",
    "build_phi",
    "build_symplectic_darboux",
    "build_tower",
    "Cdga",
    "CdgaSpec",
    "ChainMapError",
    "Check",
    "check_contact",
    "check_d_squared",
    "check_master_equation",
    "check_minimal_at",
    "check_scale_invariance",
    "check_symplectic",
    "cocone",
    "ComplexMap",
    "cone",
    "contract",
    "D",
    "d_int",
    "DarbouxLayout",
    "DarbouxScheme",
    "DContactError",
    "ddr",
    "DegreeError",
    "Derivation",
    "derive",
    "differential_from_hamiltonian",
    "dR",
    "DuplicateNameError",
    "evaluate",
    "Form",
    "format_poly",
    "FreeComplex",
    "GradedVar",
    "homology_ranks",
    "identity_map",
    "InvalidPointError",
    "is_acyclic",
    "is_closed_sequence",
    "is_quasi_iso",
    "is_shifted_pform",
    "kernel_of_form",
    "localize",
    "Manifest",
    "ManifestError",
    "master_equation_residual",
    "MasterEquationError",
    "MissingImageError",
    "NotAGeneratorError",
    "omega0",
    "pairing_identity",
    "pairing_identity_table",
    "parse_expression",
    "parse_form",
    "parse_manifest",
    "partial",
    "Point",
    "Poly",
    "PreconditionError",
    "reeb_field",
    "reeb_solutions",
    "Report",
    "restrict_cotangent",
    "restrict_tangent",
    "SchemeError",
    "shift",
    "strict_cokernel",
    "strict_kernel",
    "symplectify",
    "theta",
    "theta_shift",
    "three_case_table",
    "TowerError",
    "vdim",
    "vdim_extension",
    "VectorField",
    "wedge",
    "weight_grading",
    "with_differential",
]
