//! Triangular subgroups of Sp(2,R): exact/float scalar arithmetic, the
//! parabolic subgroup Q, triples, subalgebra classification and the
//! reduction to canonical forms.

pub mod canonical;
pub mod constants;
pub mod error;
pub mod family;
pub mod identities;
pub mod linalg;
pub mod matrix;
pub mod parabolic;
pub mod parse;
pub mod scalar;
pub mod spclassify;
pub mod subalgebra;
pub mod triple;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use matrix::{dagger, Mat2, Mat4, SymMat2, DEFAULT_TOL};
pub use scalar::Scalar;
pub use parabolic::{langlands_split, q_compose, q_conj, q_invert, q_member, LanglandsFactor, QElement};
pub use linalg::SymSpan;
pub use family::{param_grid, Alpha, FamilyKind, HFamily};
pub use triple::{
    build_group_element, check_cocycle, detect_coboundary, dual, extract_triple, is_class_e,
    tau_equivalent, ClosedTau, CocycleReport, Diagnostic, Extracted, TauMap, Triple,
};
pub use subalgebra::{
    bracket, classify_subalgebra, exponentiate, Ambient, Classified, LieSub, SubLabel,
};
pub use canonical::{
    iso_split, ma_catalog, ma_reduce, sylvester_reduce, symmetrizer_membership, EntryParam,
    MaEntry, MaId, MaPoint, MaReduction, ParamKind, Signature,
};
pub use spclassify::{
    bruhat_cell, compare, crazytau_check, crazytau_transcript, gamma_dual, gamma_l, non_conjugacy,
    psi, sp_classify, theorem_label, w0_conjugate, w0_outcomes, w0_route, wcanonical_reduce,
    Comparison, ConjugacyWitness, CrazytauTranscript, NonConjugacy, SpClassLabel,
    SpClassification, ThmId, W0Outcome, WCanonical, WeylElement,
};
pub use parse::{
    parse_group_spec, parse_mat2, parse_mat4, parse_matrix, parse_qelement, parse_subalgebra,
    parse_sym, GroupSpec, SubalgebraSpec,
};
pub use verify::{verify_theorem, Claim, TheoremReport, TheoremTable};
