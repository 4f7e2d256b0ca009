//! Exact linear algebra over Z and Q: Smith normal forms, kernels,
//! saturations, subgroup indices and Gram determinants.

pub mod group;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod snf;

pub use group::{ExtNat, FinAbGroup};
pub use lattice::{
    cokernel_structure, column_span_basis, intersection, kernel, kernel_subgroup,
    preimage_kernel, saturation, solve, spans, subgroup_index, Subquotient,
};
pub use matrix::IntMatrix;
pub use rational::{gram_determinant, parse_rational, rational_to_string, RatMatrix};
pub use snf::{smith, Need, Smith};

use num::BigInt;

/// `U*M*V = D` with `U`, `V` unimodular and `D` in Smith normal form.
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Full Smith normal form with both transformations, as a spec-level
/// operation. See [`smith`] for the engine with selectable outputs.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let s = smith(m, Need::U_AND_V);
    SmithNormalForm {
        u: s.u.clone().unwrap(),
        d: s.diagonal_matrix(m.rows(), m.cols()),
        v: s.v.clone().unwrap(),
    }
}

/// Invariant factors (including trailing zeros for the free part) of the
/// cokernel of `m` inside Z^rows.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let s = smith(m, Need::NONE);
    let mut d = s.d;
    d.resize(m.rows(), BigInt::from(0));
    d
}
