"""Exact-arithmetic engine for twisted charged-fermion modules.

The package classifies, with verifiable certificates, when the module
structure twisted by a rational Laurent series is irreducible, working
entirely over the rationals: a charged free-fermion Fock space, a super
mode algebra acting through the fermions, Schur-polynomial evaluation, a
truncated span-closure engine, and a parallel free-boson realization used
as an independent cross-check.
"""

from .scalars import (
    ChiParseError,
    ChiSeries,
    ell_of,
    format_rational,
    parse_chi,
    parse_rational,
    pole_order,
)
from .fock import (
    MINUS,
    PLUS,
    VACUUM,
    FermionState,
    FermionVec,
    apply_psi,
    apply_psi_dmode,
    as_dmode,
    charge,
    check_tilde,
    enumerate_basis,
    fmt_halfodd,
    graded_dimension,
    parse_halfodd,
    parse_state,
    state_key,
    vacuum_vec,
    vec_from_json_obj,
    weight,
)
from .schur import schur_at_minus_chi, schur_det, schur_rec
from .span import ClosureConfig, Space, SpanBasis, closure, cyclic_probe, joint_kernel
from .superalg import (
    FOCK_SPACE,
    Extraction,
    OperatorWord,
    a_module_ops,
    anticommutator_check,
    apply_Gminus,
    apply_Gplus,
    apply_word,
    extract_omega,
    gminus_string_on_omega,
    lowering_ladder_word,
    omega,
    omega_vec,
    raising_ladder_word,
    same_species_anticommutator,
    scalar_S,
    scalar_T,
    singular_w,
    vacuum_filling_word,
)
from .classify import (
    DEFAULT_CFG,
    Certificate,
    Check,
    Report,
    Verdict,
    classify,
    verify_certificate,
)
from .weyl import (
    DEFAULT_PROBE_CFG,
    WEYL_SPACE,
    WEYL_VACUUM,
    Evidence,
    WeylAction,
    WeylState,
    WeylVec,
    affine_relation_check,
    apply_a,
    apply_astar,
    apply_e,
    apply_f,
    apply_h,
    enumerate_weyl_basis,
    evidence_agrees,
    wakimoto_ops,
    wakimoto_probe,
    weyl_charge,
    weyl_state_key,
    weyl_vacuum_vec,
    weyl_weight,
)

__version__ = "0.1.0"
