//! Abnormal extremals of left-invariant sub-Finsler quasimetrics on
//! four-dimensional real Lie groups.
//!
//! The crate covers the whole pipeline from a bracket table to a
//! strict / non-strict verdict:
//!
//! * [`lie`]: structure constants, brackets, Killing form, automorphism checks.
//! * [`catalog`]: the classified four-dimensional algebras, their automorphism
//!   families and known generating planes, loaded from a JSON data file.
//! * [`subspace`]: bracket-generation flags, the canonical frame
//!   `(e1, e2, e3 = [e1,e2], e4 = [e1,e3])`, normalizers and Killing typing.
//! * [`seminorm`]: the control body `U`, its gauge `F` and support `F_U`.
//! * [`abnormal`]: extremal descriptors and the strictness criterion.
//! * [`adjoint`]: the adjoint ODE, its closed-form solutions and a covector
//!   witness search used as an independent oracle.

pub mod abnormal;
pub mod adjoint;
pub mod catalog;
pub mod error;
pub mod lie;
mod linalg;
pub mod seminorm;
pub mod subspace;

pub use abnormal::{
    abnormal_extremals, classify, classify_basis, classify_dim3, theorem3_dispatch, Dim3Report,
    Dim3Verdict, DirectionVerdict, ExtremalDescriptor, Reason, StrictnessReport, Theorem3Case,
    Theorem3Report, Verdict,
};
pub use adjoint::{
    closed_form_psi1, integrate, witness_search, AdjointState, ClosedFormPsi1, ControlSpec,
    Psi1Case, Trajectory, Witness, WitnessKind,
};
pub use catalog::{AlgebraId, Catalog, Family, KnownSubspace};
pub use error::{Error, Result};
pub use lie::{AutomorphismMatrix, StructureConstants, Vector4, DIM, TOL};
pub use seminorm::{BodyShape, SeminormBody, Sign};
pub use subspace::{
    canonical_basis, centralizer, check_prop2, classify_sl2, generates, normalizer, CanonicalBasis,
    FlagReport, Sl2SubspaceType, Sl2Tag, Subspace,
};
