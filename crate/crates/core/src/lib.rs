//! Finite semilattice-ordered algebras: terms and identities, finite algebras,
//! power algebras, SLO law checking, subalgebra closures and the replica
//! quotient, and finite free objects.

pub mod algebra;
pub mod catalog;
pub mod closure;
pub mod enumerate;
pub mod error;
pub mod free;
pub mod hom;
pub mod io;
pub mod limits;
pub mod parse;
pub mod power;
pub mod signature;
pub mod slo;
pub mod subset;
pub mod suite;
pub mod term;

pub use algebra::{ConstantRole, Counterexample, Elem, FiniteAlgebra};
pub use closure::{
    condition_one_check, enumerate_subalgebras, generated_subalgebra, is_reduced, quotient_by_rho, reduced_subsets,
    rho_equivalent, rho_witness, Quotient, SubalgebraRep,
};
pub use enumerate::enumerate_models;
pub use error::{Error, Result};
pub use free::{
    cardinality_report, free_cdis, free_semilattice, free_semilattice_unit, free_slo_nonempty, CardinalityReport,
    FreeModel,
};
pub use hom::{count_extensions, extend_hom, Homomorphism};
pub use limits::Limits;
pub use parse::{parse_identity, parse_signature, parse_term};
pub use power::{build_power, complex_op, PowerAlgebra, PowerVariant};
pub use signature::Signature;
pub use slo::{check_slo, DisjunctiveForm, NaturalOrder, SloAlgebra, Violation};
pub use subset::SubsetElem;
pub use suite::SuiteReport;
pub use term::{Identity, Term};
