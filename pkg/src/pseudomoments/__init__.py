"""Exact pseudo-moment certificates that positive forms are not sums of squares."""

from .exactnum import QuadExt, format_rational, parse_rational, rat, sign_quadext
from .forms import Form, FormSpace, evaluate_functional, monomial_basis, named_form, parse_form
from .linalg_exact import CharPoly, SymMatrix, char_poly, congruence, is_psd, kernel_basis, rank_exact
from .moments import (
    CertificateReport,
    ExtremalityWitness,
    PseudoMomentVector,
    check_extreme,
    coordinate_matrices,
    moment_matrix,
    verify_certificate,
)
from .document import CertificateDocument, DocumentError, load_document
from .generators import (
    GeneratorError,
    choilam_rank,
    decompose_check,
    gen_choilam_extreme,
    gen_choilam_general,
    gen_motzkin_extreme,
    gen_motzkin_general,
    gen_motzkin_integer_family,
    gen_reznick_extreme,
    gen_reznick_general,
    robinson_enumerate,
    robinson_extreme,
    robinson_member,
    robinson_minimal_integer,
)
from .symmetry import (
    OrbitParams,
    SignedPermutation,
    block_basis,
    block_char_polys,
    block_decompose,
    dual_action,
    orbit_embed,
    reynolds,
    symmetry_group,
)

__version__ = "0.1.0"
