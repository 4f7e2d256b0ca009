//! Finitely generated modules with an action of D_2p over Z or Z localized
//! at a prime.
//!
//! A module is presented as `Z^n / span(relations)` together with the two
//! action matrices of the generators t and s. All submodule functors
//! (fixed points, coinvariants, norm kernels and images, augmentation
//! submodules) return `Submodule` values that remember their parent;
//! indices between submodules of a localized module are reported as powers
//! of the localized prime.

mod generator;

pub use generator::{random_dmodule, random_unimodular, Constraint, GeneratorParams};

use num::{BigInt, BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use crate::dihedral::{AlgebraElement, DihedralGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};
use crate::exactalg::{
    self, column_span_basis, intersection, preimage_kernel, smith, spans, ExtNat, FinAbGroup,
    IntMatrix, Need, Subquotient,
};

/// Coefficient ring: Z, or Z localized at a prime ell (in which case the
/// torsion of the module must be an ell-group and all indices are reported
/// ell-locally).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Local(u64),
}

impl Ring {
    pub fn localized_prime(&self) -> Option<u64> {
        match self {
            Ring::Z => None,
            Ring::Local(l) => Some(*l),
        }
    }

    fn localize_index(&self, e: ExtNat) -> ExtNat {
        match self {
            Ring::Z => e,
            Ring::Local(l) => e.localize(*l),
        }
    }

    fn localize_group(&self, g: FinAbGroup) -> FinAbGroup {
        match self {
            Ring::Z => g,
            Ring::Local(l) => g.localize(*l),
        }
    }
}

// JSON form: "Z" or {"localized_at": ell}.
impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ring::Z => s.serialize_str("Z"),
            Ring::Local(l) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("localized_at", l)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Obj { localized_at: u64 },
        }
        match Raw::deserialize(d)? {
            Raw::Name(s) if s == "Z" => Ok(Ring::Z),
            Raw::Name(s) => Err(serde::de::Error::custom(format!("unknown ring {s:?}"))),
            Raw::Obj { localized_at } => Ok(Ring::Local(localized_at)),
        }
    }
}

/// A finitely presented abelian group with D_2p-action.
#[derive(Clone, PartialEq, Eq)]
pub struct DModule {
    group: DihedralGroup,
    ring: Ring,
    gens: usize,
    relations: IntMatrix, // gens x r, columns are relators
    t_action: IntMatrix,  // gens x gens
    s_action: IntMatrix,  // gens x gens
}

impl std::fmt::Debug for DModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DModule(p={}, ring={:?}, gens={}, structure={})",
            self.group.p(),
            self.ring,
            self.gens,
            self.structure()
        )
    }
}

impl DModule {
    /// Validates the presentation: the relation lattice is stable under both
    /// actions and the defining congruences of D_2p hold modulo it.
    pub fn new(
        group: DihedralGroup,
        ring: Ring,
        relations: IntMatrix,
        t_action: IntMatrix,
        s_action: IntMatrix,
    ) -> Result<Self> {
        let n = t_action.rows();
        if !t_action.is_square() || !s_action.is_square() || s_action.rows() != n {
            return Err(Error::Shape(
                "action matrices must be square of equal size".into(),
            ));
        }
        if relations.rows() != n {
            return Err(Error::Shape(format!(
                "relations have {} rows for {} generators",
                relations.rows(),
                n
            )));
        }
        let m = DModule {
            group,
            ring,
            gens: n,
            relations,
            t_action,
            s_action,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.gens;
        let rel = &self.relations;
        // actions stabilize the relation lattice
        for (name, a) in [("t", &self.t_action), ("s", &self.s_action)] {
            if !spans(rel, &a.mul(rel)) {
                return Err(Error::InvalidAction(format!(
                    "{name} does not stabilize the relation lattice"
                )));
            }
        }
        let congruent = |a: &IntMatrix, b: &IntMatrix| -> bool { spans(rel, &a.sub(b)) };
        let id = IntMatrix::identity(n);
        let p = self.group.p();
        if !congruent(&self.t_action.pow(p), &id) {
            return Err(Error::InvalidAction("t^p != 1 on the module".into()));
        }
        if !congruent(&self.s_action.mul(&self.s_action), &id) {
            return Err(Error::InvalidAction("s^2 != 1 on the module".into()));
        }
        let sts = self.s_action.mul(&self.t_action).mul(&self.s_action);
        let t_inv = self.t_action.pow(p - 1);
        if !congruent(&sts, &t_inv) {
            return Err(Error::InvalidAction("s t s != t^-1 on the module".into()));
        }
        if let Ring::Local(l) = self.ring {
            let tors = self.torsion_part();
            let ell = BigUint::from(l);
            for d in &tors.torsion {
                if exactalg::group::primary_part(d, &ell) != *d {
                    return Err(Error::InvalidAction(format!(
                        "ring is localized at {l} but the torsion has a factor Z/{d}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> DihedralGroup {
        self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn t_action(&self) -> &IntMatrix {
        &self.t_action
    }

    pub fn s_action(&self) -> &IntMatrix {
        &self.s_action
    }

    /// Action matrix of `g = t^i s^e`.
    pub fn action_of(&self, g: GroupElement) -> IntMatrix {
        let t_pow = self.t_action.pow(g.rotation);
        if g.flip {
            t_pow.mul(&self.s_action)
        } else {
            t_pow
        }
    }

    /// Matrix of a formal Z-combination of group elements.
    pub fn algebra_action(&self, x: &AlgebraElement) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.gens, self.gens);
        for (c, g) in &x.terms {
            out = out.add(&self.action_of(*g).scale(c));
        }
        out
    }

    /// Apply a group-algebra element to a module element.
    pub fn apply_algebra(&self, x: &AlgebraElement, elem: &[BigInt]) -> Vec<BigInt> {
        self.algebra_action(x).mul_vec(elem)
    }

    /// Norm matrix `N_H`.
    pub fn norm_matrix(&self, h: Subgroup) -> IntMatrix {
        self.algebra_action(&self.group.norm_element(h))
    }

    /// Structure of the underlying abelian group.
    pub fn structure(&self) -> FinAbGroup {
        exactalg::cokernel_structure(&self.relations, self.gens)
    }

    pub fn order(&self) -> ExtNat {
        self.structure().order()
    }

    pub fn is_finite(&self) -> bool {
        self.structure().is_finite()
    }

    /// Exponent of the torsion part.
    pub fn torsion_exponent(&self) -> BigUint {
        self.structure().exponent()
    }

    pub fn torsion_part(&self) -> FinAbGroup {
        let s = self.structure();
        FinAbGroup {
            free_rank: 0,
            torsion: s.torsion,
        }
    }

    /// The saturation of the relation lattice: preimage of the torsion
    /// subgroup in Z^n.
    pub fn torsion_lattice(&self) -> IntMatrix {
        exactalg::saturation(&self.relations)
    }

    /// Whole module as a submodule of itself.
    pub fn full_submodule(&self) -> Submodule<'_> {
        Submodule {
            parent: self,
            gens: IntMatrix::identity(self.gens),
        }
    }

    pub fn submodule(&self, gens: IntMatrix) -> Result<Submodule<'_>> {
        if gens.rows() != self.gens {
            return Err(Error::OutsideAmbient);
        }
        Ok(Submodule { parent: self, gens })
    }

    /// Fixed points `M^H`: saturated by construction (it is the exact
    /// preimage of the fixed subgroup).
    pub fn invariants(&self, h: Subgroup) -> Submodule<'_> {
        let gens = self.group.subgroup_generators(h);
        if gens.is_empty() {
            return self.full_submodule();
        }
        let id = IntMatrix::identity(self.gens);
        let mut stacked_map = IntMatrix::zeros(0, self.gens);
        let mut stacked_rel = IntMatrix::zeros(0, 0);
        for g in gens {
            let a = self.action_of(g).sub(&id);
            stacked_map = stack_rows(&stacked_map, &a);
            stacked_rel = stack_diag_blocks(&stacked_rel, &self.relations);
        }
        let pre = preimage_kernel(&stacked_map, &stacked_rel);
        let lattice = column_span_basis(&pre.hstack(&self.relations));
        Submodule {
            parent: self,
            gens: lattice,
        }
    }

    /// Kernel of the norm map `M[N_H]`.
    pub fn norm_kernel(&self, h: Subgroup) -> Submodule<'_> {
        let n_h = self.norm_matrix(h);
        let pre = preimage_kernel(&n_h, &self.relations);
        let lattice = column_span_basis(&pre.hstack(&self.relations));
        Submodule {
            parent: self,
            gens: lattice,
        }
    }

    /// Image of the norm map `N_H M` (unsaturated).
    pub fn norm_image(&self, h: Subgroup) -> Submodule<'_> {
        Submodule {
            parent: self,
            gens: self.norm_matrix(h),
        }
    }

    /// Augmentation submodule `I_H M` generated by `(h-1)M` over a
    /// generating set of H (unsaturated).
    pub fn augmentation_submodule(&self, h: Subgroup) -> Submodule<'_> {
        let id = IntMatrix::identity(self.gens);
        let gens = self.group.subgroup_generators(h);
        let mut cols = IntMatrix::zeros(self.gens, 0);
        for g in gens {
            cols = cols.hstack(&self.action_of(g).sub(&id));
        }
        Submodule {
            parent: self,
            gens: cols,
        }
    }

    /// Multiples `c * M`.
    pub fn scaled_submodule(&self, c: &BigInt) -> Submodule<'_> {
        Submodule {
            parent: self,
            gens: IntMatrix::scalar(self.gens, c),
        }
    }

    /// `M[c] = {x : c x = 0}`.
    pub fn multiplication_kernel(&self, c: &BigInt) -> Submodule<'_> {
        let f = IntMatrix::scalar(self.gens, c);
        let pre = preimage_kernel(&f, &self.relations);
        Submodule {
            parent: self,
            gens: column_span_basis(&pre.hstack(&self.relations)),
        }
    }

    /// Coinvariants `M_H = M / I_H M` with the quotient map.
    pub fn coinvariants(&self, h: Subgroup) -> (FinAbGroup, Subquotient) {
        let aug = self.augmentation_submodule(h);
        let denom = aug.gens.hstack(&self.relations);
        let sq = Subquotient::of_presentation(self.gens, &denom).expect("presentation subquotient");
        (self.ring.localize_group(sq.structure()), sq)
    }

    /// Torsion-free quotient with the induced actions, and the projection
    /// matrix sending parent coordinates to quotient coordinates.
    pub fn free_quotient(&self) -> (DModule, IntMatrix) {
        let s = smith(&self.relations, Need::UINV_AND_U);
        let u = s.u.as_ref().unwrap();
        let uinv = s.uinv.as_ref().unwrap();
        let rank = s.rank;
        let free_idx: Vec<usize> = (rank..self.gens).collect();
        let proj = u.select_rows(&free_idx);
        let induce = |a: &IntMatrix| -> IntMatrix {
            let b = u.mul(&a.mul(uinv));
            // torsion maps into torsion, so the torsion-to-free block vanishes
            debug_assert!((0..rank).all(|j| {
                free_idx.iter().all(|&i| b[(i, j)].is_zero())
            }));
            IntMatrix::from_fn(free_idx.len(), free_idx.len(), |i, j| {
                b[(free_idx[i], free_idx[j])].clone()
            })
        };
        let t_bar = induce(&self.t_action);
        let s_bar = induce(&self.s_action);
        let quotient = DModule::new(
            self.group,
            self.ring,
            IntMatrix::zeros(free_idx.len(), 0),
            t_bar,
            s_bar,
        )
        .expect("induced actions on the free quotient are valid");
        (quotient, proj)
    }

    /// The module `M (x) Z_(ell)`: same free rank, torsion cut to its
    /// ell-primary part. Returns the localized module and the coordinate
    /// transport matrix (old coordinates -> new coordinates).
    pub fn localize_at(&self, ell: u64) -> (DModule, IntMatrix) {
        let s = smith(&self.relations, Need::UINV_AND_U);
        let u = s.u.as_ref().unwrap();
        let uinv = s.uinv.as_ref().unwrap();
        let ell_big = BigUint::from(ell);
        let mut moduli: Vec<BigInt> = Vec::with_capacity(self.gens);
        for i in 0..self.gens {
            if i < s.rank {
                let d = s.d[i].magnitude().clone();
                moduli.push(BigInt::from(exactalg::group::primary_part(&d, &ell_big)));
            } else {
                moduli.push(BigInt::zero());
            }
        }
        let rel_cols: Vec<usize> = (0..self.gens).filter(|&i| !moduli[i].is_one()).collect();
        let rel = IntMatrix::from_fn(self.gens, rel_cols.len(), |i, j| {
            if i == rel_cols[j] && !moduli[i].is_zero() {
                moduli[i].clone()
            } else {
                BigInt::zero()
            }
        });
        let transport = |a: &IntMatrix| u.mul(&a.mul(uinv));
        let localized = DModule::new(
            self.group,
            Ring::Local(ell),
            rel,
            transport(&self.t_action),
            transport(&self.s_action),
        )
        .expect("localization preserves the action congruences");
        (localized, u.clone())
    }
}

fn stack_rows(acc: &IntMatrix, block: &IntMatrix) -> IntMatrix {
    if acc.rows() == 0 {
        return block.clone();
    }
    acc.vstack(block)
}

/// Block-diagonal stacking used when several congruence conditions are
/// imposed simultaneously (one relation block per condition).
pub(crate) fn stack_diag_blocks(acc: &IntMatrix, block: &IntMatrix) -> IntMatrix {
    let (ar, ac) = (acc.rows(), acc.cols());
    let (br, bc) = (block.rows(), block.cols());
    IntMatrix::from_fn(ar + br, ac + bc, |i, j| {
        if i < ar && j < ac {
            acc[(i, j)].clone()
        } else if i >= ar && j >= ac {
            block[(i - ar, j - ac)].clone()
        } else {
            BigInt::zero()
        }
    })
}

/// A submodule of a presented module, stored as a generating matrix in the
/// parent's coordinates.
#[derive(Clone)]
pub struct Submodule<'m> {
    parent: &'m DModule,
    pub gens: IntMatrix,
}

impl<'m> Submodule<'m> {
    pub fn parent(&self) -> &'m DModule {
        self.parent
    }

    fn same_parent(&self, other: &Submodule<'m>) -> bool {
        std::ptr::eq(self.parent, other.parent) || self.parent == other.parent
    }

    /// Full preimage lattice in Z^n (generators plus relations).
    pub fn lattice(&self) -> IntMatrix {
        self.gens.hstack(self.parent.relations())
    }

    /// Structure of the submodule as an abstract group.
    pub fn structure(&self) -> FinAbGroup {
        let sq = Subquotient::new(&self.lattice(), self.parent.relations())
            .expect("relations lie inside every submodule lattice");
        sq.structure()
    }

    pub fn order(&self) -> ExtNat {
        self.structure().order()
    }

    /// Image under an endomorphism given in parent coordinates.
    pub fn image_under(&self, f: &IntMatrix) -> Submodule<'m> {
        Submodule {
            parent: self.parent,
            gens: f.mul(&self.gens),
        }
    }

    pub fn sum(parts: &[&Submodule<'m>]) -> Result<Submodule<'m>> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("empty submodule sum".into()))?;
        let mut gens = first.gens.clone();
        for part in &parts[1..] {
            if !first.same_parent(part) {
                return Err(Error::MismatchedParents);
            }
            gens = gens.hstack(&part.gens);
        }
        Ok(Submodule {
            parent: first.parent,
            gens,
        })
    }

    pub fn intersect(&self, other: &Submodule<'m>) -> Result<Submodule<'m>> {
        if !self.same_parent(other) {
            return Err(Error::MismatchedParents);
        }
        let meet = intersection(&self.lattice(), &other.lattice());
        Ok(Submodule {
            parent: self.parent,
            gens: meet,
        })
    }

    /// Does this submodule contain `other` (as subgroups of the parent)?
    pub fn contains(&self, other: &Submodule<'m>) -> Result<bool> {
        if !self.same_parent(other) {
            return Err(Error::MismatchedParents);
        }
        Ok(spans(&self.lattice(), &other.gens))
    }

    /// Index `(outer : self)`, reported ell-locally for localized rings.
    /// INFINITE if the quotient has free rank.
    pub fn index_in(&self, outer: &Submodule<'m>) -> Result<ExtNat> {
        Ok(self.parent.ring.localize_index(self.index_in_raw(outer)?))
    }

    /// Index over Z, without localization.
    pub fn index_in_raw(&self, outer: &Submodule<'m>) -> Result<ExtNat> {
        if !self.same_parent(outer) {
            return Err(Error::MismatchedParents);
        }
        if !outer.contains(self)? {
            return Err(Error::OutsideAmbient);
        }
        let sq = Subquotient::new(&outer.lattice(), &self.lattice())?;
        Ok(sq.order())
    }

    /// Ring-aware equality of submodules: over Z exact equality of
    /// subgroups; over Z_(ell) equality after localization.
    pub fn eq_submodule(&self, other: &Submodule<'m>) -> Result<bool> {
        if !self.same_parent(other) {
            return Err(Error::MismatchedParents);
        }
        match self.parent.ring {
            Ring::Z => Ok(self.contains(other)? && other.contains(self)?),
            Ring::Local(_) => {
                let join = Submodule::sum(&[self, other])?;
                Ok(self.index_in(&join)?.is_one() && other.index_in(&join)?.is_one())
            }
        }
    }

    /// Present the submodule as a module in its own right with the induced
    /// D-action. Errors unless both actions stabilize the submodule.
    /// Returns the abstract module and the basis matrix embedding it into
    /// the parent.
    pub fn as_module(&self) -> Result<(DModule, IntMatrix)> {
        let basis = column_span_basis(&self.lattice());
        let express = |a: &IntMatrix| -> Result<IntMatrix> {
            exactalg::solve(&basis, &a.mul(&basis)).ok_or(Error::InvalidAction(
                "action does not stabilize the submodule".into(),
            ))
        };
        let t_sub = express(self.parent.t_action())?;
        let s_sub = express(self.parent.s_action())?;
        let rel = exactalg::solve(&basis, self.parent.relations())
            .expect("relations lie inside the lattice");
        let module = DModule::new(self.parent.group, self.parent.ring, rel, t_sub, s_sub)?;
        Ok((module, basis))
    }
}

/// Spec-level free function: `index_in(sub, amb)`.
pub fn index_in<'m>(sub: &Submodule<'m>, amb: &Submodule<'m>) -> Result<ExtNat> {
    sub.index_in(amb)
}

/// Spec-level free function: union of generators.
pub fn submodule_sum<'m>(parts: &[&Submodule<'m>]) -> Result<Submodule<'m>> {
    Submodule::sum(parts)
}

// JSON form per the file interface: {"p": ..., "ring": ..., "n": ...,
// "relations": [[...]], "T": [[...]], "S": [[...]]}. Deserialization
// re-validates all invariants.
#[derive(Serialize, Deserialize)]
struct DModuleRaw {
    p: u64,
    ring: Ring,
    n: usize,
    relations: IntMatrix,
    #[serde(rename = "T")]
    t: IntMatrix,
    #[serde(rename = "S")]
    s: IntMatrix,
}

impl Serialize for DModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DModuleRaw {
            p: self.group.p(),
            ring: self.ring,
            n: self.gens,
            relations: self.relations.clone(),
            t: self.t_action.clone(),
            s: self.s_action.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DModuleRaw::deserialize(d)?;
        let group = DihedralGroup::new(raw.p).map_err(serde::de::Error::custom)?;
        if raw.t.rows() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "action size {} does not match n = {}",
                raw.t.rows(),
                raw.n
            )));
        }
        let mut relations = raw.relations;
        if relations.rows() == 0 && raw.n > 0 && relations.cols() == 0 {
            relations = IntMatrix::zeros(raw.n, 0);
        }
        DModule::new(group, raw.ring, relations, raw.t, raw.s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod test_modules {
    use super::*;

    /// Z with trivial action.
    pub fn trivial_lattice(group: DihedralGroup, ring: Ring) -> DModule {
        DModule::new(
            group,
            ring,
            IntMatrix::zeros(1, 0),
            IntMatrix::identity(1),
            IntMatrix::identity(1),
        )
        .unwrap()
    }

    /// Z with t = 1, s = -1.
    pub fn sign_lattice(group: DihedralGroup, ring: Ring) -> DModule {
        DModule::new(
            group,
            ring,
            IntMatrix::zeros(1, 0),
            IntMatrix::identity(1),
            IntMatrix::from_i64(1, 1, &[-1]),
        )
        .unwrap()
    }

    /// Z/q with trivial action.
    pub fn trivial_torsion(group: DihedralGroup, ring: Ring, q: i64) -> DModule {
        DModule::new(
            group,
            ring,
            IntMatrix::from_i64(1, 1, &[q]),
            IntMatrix::identity(1),
            IntMatrix::identity(1),
        )
        .unwrap()
    }

    /// The regular representation Z[D].
    pub fn regular(group: DihedralGroup, ring: Ring) -> DModule {
        let els = group.elements();
        let n = els.len();
        let idx = |g: GroupElement| els.iter().position(|&x| x == g).unwrap();
        let perm = |h: GroupElement| {
            IntMatrix::from_fn(n, n, |i, j| {
                if idx(group.mul(h, els[j])) == i {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
        };
        DModule::new(
            group,
            ring,
            IntMatrix::zeros(n, 0),
            perm(group.tau()),
            perm(group.sigma()),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_modules::*;
    use super::*;
    use crate::dihedral::Subgroup;

    fn d3() -> DihedralGroup {
        DihedralGroup::new(3).unwrap()
    }

    #[test]
    fn invalid_action_rejected() {
        // s t s = t fails for a module where t has order 3 and s = 1
        let t = IntMatrix::from_i64(2, 2, &[0, -1, 1, -1]); // order 3
        let s = IntMatrix::identity(2);
        let err = DModule::new(d3(), Ring::Z, IntMatrix::zeros(2, 0), t, s);
        assert!(err.is_err());
    }

    #[test]
    fn localized_ring_requires_local_torsion() {
        let err = DModule::new(
            d3(),
            Ring::Local(3),
            IntMatrix::from_i64(1, 1, &[10]),
            IntMatrix::identity(1),
            IntMatrix::identity(1),
        );
        assert!(err.is_err());
        assert!(trivial_torsion(d3(), Ring::Local(3), 9).is_finite());
    }

    #[test]
    fn invariants_of_regular_module_under_full_group() {
        let m = regular(d3(), Ring::Z);
        let inv = m.invariants(Subgroup::Full);
        let st = inv.structure();
        assert_eq!(st.free_rank, 1);
        assert!(st.torsion.is_empty());
        // generated by the norm element: sum of all group elements
        let norm_col = IntMatrix::from_i64(6, 1, &[1, 1, 1, 1, 1, 1]);
        assert!(spans(&inv.lattice(), &norm_col));
        assert!(spans(&norm_col, &inv.gens));
    }

    #[test]
    fn invariants_trivial_action_is_everything() {
        let m = trivial_lattice(d3(), Ring::Z);
        for h in d3().subgroups() {
            let inv = m.invariants(h);
            assert_eq!(inv.index_in(&m.full_submodule()).unwrap(), ExtNat::one());
        }
    }

    #[test]
    fn sign_lattice_has_no_sigma_invariants() {
        let m = sign_lattice(d3(), Ring::Z);
        let inv = m.invariants(Subgroup::Reflection(0));
        assert_eq!(inv.structure(), FinAbGroup::trivial());
    }

    #[test]
    fn coinvariants_examples() {
        // trivial action: M_H = M
        let m = trivial_lattice(d3(), Ring::Z);
        let (st, _) = m.coinvariants(Subgroup::Rotation);
        assert_eq!(st, FinAbGroup::free(1));
        // sign lattice, H = <s>: I_H M = 2M, so M_H = Z/2
        let m = sign_lattice(d3(), Ring::Z);
        let (st, _) = m.coinvariants(Subgroup::Reflection(0));
        assert_eq!(st, FinAbGroup::from_moduli(&[BigInt::from(2)]));
    }

    #[test]
    fn coinvariants_of_free_rank_one_over_rotation() {
        // Z[G]-free of rank 1 sits inside Z[D] as the rotation-orbit of a
        // basis vector; use the regular module over G via a 3x3 cycle
        let t = IntMatrix::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        // s swaps the nontrivial rotations: e0 -> e0, e1 <-> e2
        let s = IntMatrix::from_i64(3, 3, &[1, 0, 0, 0, 0, 1, 0, 1, 0]);
        let m = DModule::new(d3(), Ring::Z, IntMatrix::zeros(3, 0), t, s).unwrap();
        let (st, _) = m.coinvariants(Subgroup::Rotation);
        assert_eq!(st, FinAbGroup::free(1)); // augmentation quotient
    }

    #[test]
    fn norm_examples() {
        // trivial-action Z, H = <s>: image 2Z, kernel 0
        let m = trivial_lattice(d3(), Ring::Z);
        let img = m.norm_image(Subgroup::Reflection(0));
        assert_eq!(
            img.index_in(&m.full_submodule()).unwrap(),
            ExtNat::from_u64(2)
        );
        let ker = m.norm_kernel(Subgroup::Reflection(0));
        assert_eq!(ker.structure(), FinAbGroup::trivial());
        // trivial-action Z/3, H = G: norm = multiplication by 3 = 0
        let m = trivial_torsion(d3(), Ring::Z, 3);
        let ker = m.norm_kernel(Subgroup::Rotation);
        assert_eq!(ker.order(), ExtNat::from_u64(3));
        let img = m.norm_image(Subgroup::Rotation);
        assert_eq!(img.order(), ExtNat::one());
    }

    #[test]
    fn norm_kernel_of_regular_under_rotation_is_augmentation() {
        let m = regular(d3(), Ring::Z);
        let ker = m.norm_kernel(Subgroup::Rotation);
        let st = ker.structure();
        assert_eq!(st.free_rank, 4); // two copies of the rank-2 augmentation ideal
        let aug = m.augmentation_submodule(Subgroup::Rotation);
        assert!(ker.contains(&aug).unwrap());
        assert!(aug.contains(&ker).unwrap());
    }

    #[test]
    fn torsion_and_free_quotient() {
        // Z + Z/9 with trivial action
        let m = DModule::new(
            d3(),
            Ring::Z,
            IntMatrix::from_i64(2, 1, &[0, 9]),
            IntMatrix::identity(2),
            IntMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(m.torsion_part(), FinAbGroup::from_moduli(&[BigInt::from(9)]));
        let st = m.structure();
        assert_eq!(st.free_rank, 1);
        let (bar, proj) = m.free_quotient();
        assert_eq!(bar.gens(), 1);
        assert_eq!(proj.rows(), 1);
    }

    #[test]
    fn index_examples() {
        // sum with the full module has index 1
        let m = trivial_lattice(d3(), Ring::Z);
        let full = m.full_submodule();
        let sum = Submodule::sum(&[&full, &m.norm_image(Subgroup::Reflection(0))]).unwrap();
        assert_eq!(sum.index_in(&full).unwrap(), ExtNat::one());
        // Z^2, sub = 2Z + 3Z -> 6
        let m2 = DModule::new(
            d3(),
            Ring::Z,
            IntMatrix::zeros(2, 0),
            IntMatrix::identity(2),
            IntMatrix::identity(2),
        )
        .unwrap();
        let sub = m2
            .submodule(IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]))
            .unwrap();
        assert_eq!(
            sub.index_in(&m2.full_submodule()).unwrap(),
            ExtNat::from_u64(6)
        );
    }

    #[test]
    fn regular_module_invariant_sum_has_index_p() {
        // (M : M^<s> + M^<t^2 s> + M^G) = p for the regular module
        for ring in [Ring::Z, Ring::Local(3)] {
            let m = regular(d3(), ring);
            let k = m.invariants(Subgroup::Reflection(0));
            let kp = m.invariants(Subgroup::Reflection(2));
            let f = m.invariants(Subgroup::Rotation);
            let sum = Submodule::sum(&[&k, &kp, &f]).unwrap();
            assert_eq!(
                sum.index_in(&m.full_submodule()).unwrap(),
                ExtNat::from_u64(3),
                "ring {ring:?}"
            );
        }
    }

    #[test]
    fn localized_index_drops_prime_to_ell_part() {
        // trivial Z as a Z_(3)-module: (M : 2M) = 2 over Z, 1 locally at 3
        let m = trivial_lattice(d3(), Ring::Local(3));
        let half = m.scaled_submodule(&BigInt::from(2));
        assert_eq!(half.index_in(&m.full_submodule()).unwrap(), ExtNat::one());
        assert_eq!(
            half.index_in_raw(&m.full_submodule()).unwrap(),
            ExtNat::from_u64(2)
        );
        // and N_Q M = M^Q holds 3-locally
        let inv = m.invariants(Subgroup::Reflection(0));
        let img = m.norm_image(Subgroup::Reflection(0));
        assert!(inv.eq_submodule(&img).unwrap());
    }

    #[test]
    fn mismatched_parents_rejected() {
        let a = trivial_lattice(d3(), Ring::Z);
        let b = trivial_lattice(d3(), Ring::Local(3));
        let sa = a.full_submodule();
        let sb = b.full_submodule();
        assert!(matches!(
            Submodule::sum(&[&sa, &sb]),
            Err(Error::MismatchedParents)
        ));
    }

    #[test]
    fn json_round_trip_revalidates() {
        let m = regular(d3(), Ring::Z);
        let text = serde_json::to_string(&m).unwrap();
        let back: DModule = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
        // corrupt the S matrix: must be rejected with a diagnostic
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["S"][0][0] = serde_json::json!(5);
        let err = serde_json::from_value::<DModule>(v);
        assert!(err.is_err());
        let msg = format!("{}", err.unwrap_err());
        assert!(
            msg.contains('s') || msg.contains("stabilize"),
            "diagnostic names the failure: {msg}"
        );
    }

    #[test]
    fn localize_at_keeps_only_ell_torsion() {
        // Z/6 + Z with trivial action over Z
        let m = DModule::new(
            d3(),
            Ring::Z,
            IntMatrix::from_i64(2, 1, &[6, 0]),
            IntMatrix::identity(2),
            IntMatrix::identity(2),
        )
        .unwrap();
        let (at3, _) = m.localize_at(3);
        let st = at3.structure();
        assert_eq!(st.free_rank, 1);
        assert_eq!(st.torsion, vec![BigUint::from(3u32)]);
    }

    #[test]
    fn algebra_identities_as_operators() {
        // N_D = N_G (1 + s) and (1-t)(1+s) = (1-t) + s(1-t^-1)
        let g = d3();
        for m in [regular(g, Ring::Z), sign_lattice(g, Ring::Z)] {
            let n_d = m.norm_matrix(Subgroup::Full);
            let n_g = m.norm_matrix(Subgroup::Rotation);
            let one_plus_s = IntMatrix::identity(m.gens()).add(m.s_action());
            assert_eq!(n_d, n_g.mul(&one_plus_s));
            assert_eq!(n_d, one_plus_s.mul(&n_g));

            let id = IntMatrix::identity(m.gens());
            let one_minus_t = id.sub(m.t_action());
            let lhs = one_minus_t.mul(&one_plus_s);
            let t_inv = m.t_action().pow(g.p() - 1);
            let rhs = one_minus_t.add(&m.s_action().mul(&id.sub(&t_inv)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn apply_algebra_examples() {
        let g = d3();
        // N_<s> on trivial-action Z multiplies by 2
        let m = trivial_lattice(g, Ring::Z);
        let out = m.apply_algebra(&g.norm_element(Subgroup::Reflection(0)), &[BigInt::one()]);
        assert_eq!(out, vec![BigInt::from(2)]);
        // (1 - t) on a trivial-action module is 0
        let aug = &g.augmentation_generators(Subgroup::Rotation)[0];
        let out = m.apply_algebra(aug, &[BigInt::from(5)]);
        assert_eq!(out, vec![BigInt::zero()]);
        // N_D on trivial-action Z/3 is 0 (6 = 0 mod 3)
        let m = trivial_torsion(g, Ring::Z, 3);
        let out = m.apply_algebra(&g.norm_element(Subgroup::Full), &[BigInt::one()]);
        assert_eq!(out, vec![BigInt::from(6)]);
        let (_, sq) = m.coinvariants(Subgroup::Trivial);
        assert!(sq.is_zero_element(&out).unwrap());
    }
}
