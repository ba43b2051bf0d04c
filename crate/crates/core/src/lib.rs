//! Narrow-sense BCH codes of length `(q^m - 1)/lambda`, their duals, and
//! lower bounds on the dual minimum distance.
//!
//! - [`gf`]: finite fields, polynomials and matrices over GF(q).
//! - [`cyclotomic`]: q-cyclotomic cosets and their leaders.
//! - [`bch`]: defining sets, generator polynomials, generator matrices.
//! - [`dualtools`]: `I(delta)`, closed-form dual bounds, dually-BCH criteria.
//! - [`mindist`]: exhaustive and information-set minimum-distance oracle.
//! - [`paper_props`]: brute-force checks of the underlying coset lemmas.

pub mod arith;
pub mod bch;
pub mod cyclotomic;
pub mod dualtools;
pub mod gf;
pub mod mindist;
pub mod paper_props;

pub use bch::{
    code_params, defining_set, dual_code_params, dual_defining_set, generator_matrix, BchError, BchFamily, BchSpec,
    CodeContext, CodeParams, DefiningSet, LambdaKind,
};
pub use cyclotomic::{largest_leaders_closed_form, CosetError, CosetTable, LeaderFamily, QAdic};
pub use dualtools::{analyze, BoundReport, DualError, DuallyBch, DuallyWitness, PriorBound};
pub use gf::{FieldCtx, FieldElem, GfError, Matrix, Poly, ScalarField};
pub use mindist::{certify, CertifyConfig, DistanceCertificate, MinDistError, SearchConfig, Status};
pub use paper_props::{GridManifest, LemmaId, PropResult};
