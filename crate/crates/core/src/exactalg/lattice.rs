//! Lattice arithmetic inside Z^n: bases, kernels, solving, saturation,
//! intersections and subquotients.
//!
//! A lattice is the column span of an `IntMatrix` with `n` rows. Most of the
//! group theory in this crate reduces to the `Subquotient` constructor at the
//! bottom of this file.

use num::{BigInt, One, Zero};

use super::group::{ExtNat, FinAbGroup};
use super::matrix::IntMatrix;
use super::snf::{smith, Need, Smith};
use crate::error::{Error, Result};

/// A basis (possibly empty) of the column span of `m`: the nonzero columns
/// of `Uinv * D`.
pub fn column_span_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith(m, Need::UINV);
    basis_from_smith(&s, m.rows())
}

fn basis_from_smith(s: &Smith, rows: usize) -> IntMatrix {
    let uinv = s.uinv.as_ref().expect("uinv requested");
    let cols: Vec<Vec<BigInt>> = (0..s.rank)
        .map(|i| {
            (0..rows)
                .map(|r| &uinv[(r, i)] * &s.d[i])
                .collect::<Vec<_>>()
        })
        .collect();
    IntMatrix::from_columns(rows, cols).expect("basis shape")
}

/// Basis of the integer kernel `{x : m x = 0}` (columns).
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    if m.cols() == 0 {
        return IntMatrix::zeros(0, 0);
    }
    if m.rows() == 0 {
        return IntMatrix::identity(m.cols());
    }
    let s = smith(m, Need::V);
    let v = s.v.as_ref().unwrap();
    let idx: Vec<usize> = (s.rank..m.cols()).collect();
    v.select_columns(&idx)
}

/// Solve `m x = b` over Z for each column of `b`; None when some column has
/// no integral solution.
pub fn solve(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(m.rows(), b.rows(), "solve: row mismatch");
    let s = smith(m, Need::U_AND_V);
    let u = s.u.as_ref().unwrap();
    let v = s.v.as_ref().unwrap();
    let ub = u.mul(b);
    let mut y = IntMatrix::zeros(m.cols(), b.cols());
    for c in 0..b.cols() {
        for r in 0..m.rows() {
            let rhs = &ub[(r, c)];
            if r < s.rank {
                let (q, rem) = num::Integer::div_rem(rhs, &s.d[r]);
                if !rem.is_zero() {
                    return None;
                }
                if r < m.cols() {
                    y[(r, c)] = q;
                }
            } else if !rhs.is_zero() {
                return None;
            }
        }
    }
    Some(v.mul(&y))
}

/// Does the column span of `lat` contain every column of `vecs`?
pub fn spans(lat: &IntMatrix, vecs: &IntMatrix) -> bool {
    solve(lat, vecs).is_some()
}

/// Preimage lattice `{x in Z^cols(f) : f x in span(rel)}` as a generating
/// matrix. `rel` may have zero columns.
pub fn preimage_kernel(f: &IntMatrix, rel: &IntMatrix) -> IntMatrix {
    assert_eq!(f.rows(), rel.rows(), "preimage: row mismatch");
    let stacked = f.hstack(rel);
    let k = kernel(&stacked);
    // project kernel basis to the x-part
    let idx: Vec<usize> = (0..f.cols()).collect();
    k.select_rows(&idx)
}

/// Saturation of the column span of `m` in Z^n: the smallest subgroup
/// containing it with torsion-free quotient.
pub fn saturation(m: &IntMatrix) -> IntMatrix {
    let s = smith(m, Need::UINV);
    let uinv = s.uinv.as_ref().unwrap();
    let idx: Vec<usize> = (0..s.rank).collect();
    uinv.select_columns(&idx)
}

/// Intersection of two column spans inside the same Z^n.
pub fn intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows(), "intersection: row mismatch");
    if a.cols() == 0 || b.cols() == 0 {
        return IntMatrix::zeros(a.rows(), 0);
    }
    let stacked = a.hstack(&b.neg());
    let k = kernel(&stacked);
    let idx: Vec<usize> = (0..a.cols()).collect();
    let xs = k.select_rows(&idx);
    column_span_basis(&a.mul(&xs))
}

/// Structure of `Z^ambient_rank / column span(m)`.
pub fn cokernel_structure(m: &IntMatrix, ambient_rank: usize) -> FinAbGroup {
    assert_eq!(m.rows(), ambient_rank, "cokernel: ambient rank mismatch");
    let s = smith(m, Need::NONE);
    let mut moduli: Vec<BigInt> = s.d.clone();
    moduli.resize(ambient_rank, BigInt::zero());
    FinAbGroup::from_moduli(&moduli)
}

/// Index of `span(sub) + span(rel)` inside `Z^n / span(rel)`; INFINITE when
/// the quotient has free rank. Errors when a generator has the wrong length.
pub fn subgroup_index(
    ambient_rank: usize,
    rel: &IntMatrix,
    sub: &IntMatrix,
) -> Result<ExtNat> {
    if sub.rows() != ambient_rank || rel.rows() != ambient_rank {
        return Err(Error::OutsideAmbient);
    }
    let joined = sub.hstack(rel);
    Ok(cokernel_structure(&joined, ambient_rank).order())
}

/// A subquotient `A / B` of Z^n, where `B <= A` are lattices. Carries the
/// data needed to push elements of `A` into canonical coordinates.
pub struct Subquotient {
    /// n x k basis of the ambient lattice A.
    pub ambient_basis: IntMatrix,
    /// Moduli of the canonical cyclic decomposition (length k; 0 = free,
    /// 1 = trivial factor).
    pub moduli: Vec<BigInt>,
    /// k x k unimodular coordinate change: canonical coords of x are
    /// `transform * (basis coords of x)`, read modulo `moduli`.
    transform: IntMatrix,
    /// n x k canonical generators (columns); generator i has order
    /// `moduli[i]` in the quotient.
    pub gens: IntMatrix,
}

impl Subquotient {
    /// `amb` and `sub` are generating matrices with `span(sub) <= span(amb)`.
    pub fn new(amb: &IntMatrix, sub: &IntMatrix) -> Result<Self> {
        assert_eq!(amb.rows(), sub.rows(), "subquotient: row mismatch");
        let n = amb.rows();
        let basis = column_span_basis(amb);
        let x = solve(&basis, sub).ok_or(Error::OutsideAmbient)?;
        let k = basis.cols();
        let s = smith(&x, Need::UINV_AND_U);
        let u = s.u.unwrap();
        let uinv = s.uinv.unwrap();
        let mut moduli = s.d.clone();
        moduli.resize(k, BigInt::zero());
        let gens = basis.mul(&uinv);
        debug_assert_eq!(gens.rows(), n);
        Ok(Subquotient {
            ambient_basis: basis,
            moduli,
            transform: u,
            gens,
        })
    }

    /// The whole lattice `Z^n / sub` (ambient = standard basis).
    pub fn of_presentation(n: usize, sub: &IntMatrix) -> Result<Self> {
        Self::new(&IntMatrix::identity(n), sub)
    }

    pub fn structure(&self) -> FinAbGroup {
        FinAbGroup::from_moduli(&self.moduli)
    }

    pub fn order(&self) -> ExtNat {
        self.structure().order()
    }

    /// Canonical coordinates of `v` (must lie in the ambient lattice),
    /// reduced into `[0, d_i)` for finite factors.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = solve(&self.ambient_basis, &IntMatrix::column(v))?;
        let raw = self.transform.mul(&x);
        let mut out = Vec::with_capacity(self.moduli.len());
        for i in 0..self.moduli.len() {
            let c = raw[(i, 0)].clone();
            if self.moduli[i].is_zero() {
                out.push(c);
            } else {
                out.push(num::Integer::mod_floor(&c, &self.moduli[i]));
            }
        }
        Some(out)
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> Option<bool> {
        Some(self.coords(v)?.iter().all(Zero::is_zero))
    }

    /// Indices of the nontrivial canonical factors (moduli != 1).
    pub fn nontrivial_indices(&self) -> Vec<usize> {
        (0..self.moduli.len())
            .filter(|&i| !self.moduli[i].is_one())
            .collect()
    }

    /// Representatives in Z^n for each nontrivial canonical factor.
    pub fn representatives(&self) -> Vec<Vec<BigInt>> {
        self.nontrivial_indices()
            .into_iter()
            .map(|i| self.gens.col_vec(i))
            .collect()
    }

    /// Matrix of the endomorphism induced on the quotient by `f: Z^n -> Z^n`
    /// restricted to the nontrivial factors. `f` must map the ambient
    /// lattice into itself and the sublattice into itself (this is checked
    /// through coordinate solvability).
    pub fn induced_endomorphism(&self, f: &IntMatrix) -> Option<IntMatrix> {
        let idx = self.nontrivial_indices();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(idx.len());
        for &i in &idx {
            let image = f.mul_vec(&self.gens.col_vec(i));
            let c = self.coords(&image)?;
            cols.push(idx.iter().map(|&j| c[j].clone()).collect());
        }
        IntMatrix::from_columns(idx.len(), cols).ok()
    }

    /// Moduli of the nontrivial factors only.
    pub fn nontrivial_moduli(&self) -> Vec<BigInt> {
        self.nontrivial_indices()
            .into_iter()
            .map(|i| self.moduli[i].clone())
            .collect()
    }
}

/// Structure of the kernel of an endomorphism on a finite presented group.
///
/// The group is `+_i Z/m_i` (moduli, possibly with 0 = free), `phi` acts by
/// a matrix in those coordinates; returns generators (in the same
/// coordinates) of `{x : phi x = 0}` together with its structure.
pub fn kernel_subgroup(moduli: &[BigInt], phi: &IntMatrix) -> (FinAbGroup, IntMatrix) {
    let t = moduli.len();
    assert_eq!(phi.rows(), t);
    assert_eq!(phi.cols(), t);
    // x is in the kernel iff phi x lies in the relation lattice diag(moduli).
    let rel = IntMatrix::diagonal(moduli);
    let pre = preimage_kernel(phi, &rel);
    // the kernel subgroup is pre / diag(moduli)
    let sq = Subquotient::new(&pre.hstack(&rel), &rel).expect("relations inside preimage");
    let gens_idx = sq.nontrivial_indices();
    let gens = sq.gens.select_columns(&gens_idx);
    (sq.structure(), gens)
}
