//! Brute-force group cohomology from the normalized inhomogeneous cochain
//! complex. Test-only oracle: independent of the Sylow assembly in the
//! parent module, and of the period-2 subquotients, so agreement between
//! the two is meaningful.

use num::{BigInt, Zero};

use crate::dihedral::{GroupElement, Subgroup};
use crate::dmodule::DModule;
use crate::error::{Error, Result};
use crate::exactalg::{preimage_kernel, FinAbGroup, IntMatrix, Subquotient};

const MAX_COCHAIN_GENS: usize = 20_000;

/// `H^degree(H, M)` for `0 <= degree <= 3`, from normalized inhomogeneous
/// cochains. Errors when the cochain complex would exceed the size bound.
pub fn bar_resolution_oracle(m: &DModule, h: Subgroup, degree: u32) -> Result<FinAbGroup> {
    if degree > 3 {
        return Err(Error::Precondition(
            "bar oracle supports degrees 0..=3".into(),
        ));
    }
    let group = m.group();
    let nontrivial: Vec<GroupElement> = group
        .subgroup_elements(h)
        .into_iter()
        .filter(|&g| g != group.identity())
        .collect();
    let n = m.gens();
    let h1 = nontrivial.len();
    let cochain_gens = |j: u32| -> usize { n * h1.pow(j) };
    if cochain_gens(degree + 1) > MAX_COCHAIN_GENS {
        return Err(Error::OracleTooLarge(cochain_gens(degree + 1)));
    }

    if degree == 0 {
        let inv = m.invariants(h);
        let st = inv.structure();
        return Ok(match m.ring().localized_prime() {
            None => st,
            Some(_) => st, // submodule torsion is already ring-pure
        });
    }

    let d_out = differential(m, &nontrivial, degree);
    let d_in = differential(m, &nontrivial, degree - 1);
    let rel_out = cochain_relations(m, h1.pow(degree + 1));
    let rel_in = cochain_relations(m, h1.pow(degree));

    // kernel of d_out as a map into the presented target group
    let kernel_gens = preimage_kernel(&d_out, &rel_out);
    let amb = kernel_gens.hstack(&rel_in);
    let img = d_in.hstack(&rel_in);
    let sq = Subquotient::new(&amb, &img)?;
    let st = sq.structure();
    if !st.is_finite() {
        return Err(Error::InfiniteTate);
    }
    Ok(match m.ring().localized_prime() {
        None => st,
        Some(l) => st.localize(l),
    })
}

/// Block-diagonal relation matrix for a direct sum of `copies` copies of M,
/// with exponent columns appended for finite modules (they are redundant
/// generators of the relation lattice but keep entries small during
/// elimination).
fn cochain_relations(m: &DModule, copies: usize) -> IntMatrix {
    let n = m.gens();
    let rel = m.relations();
    let mut block = rel.clone();
    if m.is_finite() {
        let e = BigInt::from(m.torsion_exponent());
        block = block.hstack(&IntMatrix::scalar(n, &e));
    }
    let r = block.cols();
    IntMatrix::from_fn(n * copies, r * copies, |i, j| {
        let (ci, ri) = (i / n, i % n);
        let (cj, rj) = (j / r, j % r);
        if ci == cj {
            block[(ri, rj)].clone()
        } else {
            BigInt::zero()
        }
    })
}

/// Matrix of the normalized inhomogeneous differential
/// `d: C^j -> C^{j+1}`. Cochains are indexed by tuples over the nonidentity
/// elements; any term whose merged tuple contains the identity drops out.
fn differential(m: &DModule, nontrivial: &[GroupElement], j: u32) -> IntMatrix {
    let group = m.group();
    let n = m.gens();
    let h1 = nontrivial.len();
    let rows = n * h1.pow(j + 1);
    let cols = n * h1.pow(j);
    let mut out = IntMatrix::zeros(rows, cols);

    let tuple_index = |tuple: &[GroupElement]| -> Option<usize> {
        let mut idx = 0usize;
        for g in tuple {
            let pos = nontrivial.iter().position(|x| x == g)?;
            idx = idx * h1 + pos;
        }
        Some(idx)
    };

    let mut add_block = |row_tuple: usize, col_tuple: usize, mat: &IntMatrix, sign: i64| {
        for a in 0..n {
            for b in 0..n {
                let v = &mat[(a, b)] * sign;
                if !v.is_zero() {
                    out[(row_tuple * n + a, col_tuple * n + b)] += v;
                }
            }
        }
    };

    let id = IntMatrix::identity(n);
    // iterate over all (j+1)-tuples of nonidentity elements
    let total = h1.pow(j + 1);
    for row in 0..total {
        // digits of `row` in base h1, most significant first
        let mut tuple = Vec::with_capacity((j + 1) as usize);
        let mut r = row;
        for k in (0..=j).rev() {
            let base = h1.pow(k);
            tuple.push(nontrivial[r / base]);
            r %= base;
        }

        // first face: g_1 acts on f(g_2, ..., g_{j+1})
        if let Some(col) = tuple_index(&tuple[1..]) {
            add_block(row, col, &m.action_of(tuple[0]), 1);
        }
        // middle faces: merge g_i g_{i+1}
        for i in 0..j as usize {
            let merged = group.mul(tuple[i], tuple[i + 1]);
            if merged == group.identity() {
                continue; // normalized cochains vanish here
            }
            let mut t: Vec<GroupElement> = Vec::with_capacity(j as usize);
            t.extend_from_slice(&tuple[..i]);
            t.push(merged);
            t.extend_from_slice(&tuple[i + 2..]);
            if let Some(col) = tuple_index(&t) {
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                add_block(row, col, &id, sign);
            }
        }
        // last face: drop g_{j+1}
        if let Some(col) = tuple_index(&tuple[..j as usize]) {
            let sign = if (j + 1) % 2 == 0 { 1 } else { -1 };
            add_block(row, col, &id, sign);
        }
    }
    out
}
