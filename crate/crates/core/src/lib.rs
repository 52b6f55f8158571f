//! Binary-field function analysis: GF(2^m) arithmetic, trace-form
//! permutation families, c-differential uniformity tables and roots of
//! affine linearized equations.

pub mod cdiff;
pub mod element;
pub mod error;
pub mod families;
pub mod field;
pub mod linsolve;
pub mod verify;

pub use cdiff::{
    c_derivative, c_uniformity, cddt_entry, cddt_row, classify_theorem_case, scan_c,
    write_cddt_csv, CRange, CUniformityReport, Classification, TheoremCase,
};
pub use element::{parse_element, parse_element_list, ElementLiteral};
pub use error::{Error, Result};
pub use families::{
    build_family, check_h_permutation_condition, is_permutation, Family, FamilyParams,
    FunctionTable, HPrecondition,
};
pub use field::{Field, FieldElement};
pub use linsolve::{count_roots, solve_affine, AffineLinearizedEq};
pub use verify::{run_suite, Suite, Verdict, VerificationSuiteResult};
