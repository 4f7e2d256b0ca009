//! Tate cohomology of D-modules.
//!
//! Cyclic subgroups have period 2: even degrees are `M^H / N_H M`, odd
//! degrees are `M[N_H] / I_H M`. Cohomology of the full dihedral group is
//! assembled from its Sylow subgroups: the p-part is the fixed subgroup of
//! the conjugation involution on cohomology of the rotation subgroup
//! (transported across the period-2 shifts, which flip its sign), and the
//! 2-part restricts isomorphically to any reflection subgroup. The
//! assembly is cross-validated against the independent bar-resolution
//! oracle in [`bar`].

pub mod bar;

pub use bar::bar_resolution_oracle;

use num::{BigInt, One, Zero};

use crate::dihedral::Subgroup;
use crate::dmodule::{DModule, Ring};
use crate::error::{Error, Result};
use crate::exactalg::{kernel_subgroup, ExtNat, FinAbGroup, IntMatrix, Subquotient};

/// A computed cohomology group: abstract structure plus representatives
/// (elements of the module, one per invariant factor of the structure).
#[derive(Debug)]
pub struct CohomologyGroup {
    pub structure: FinAbGroup,
    pub representatives: Vec<Vec<BigInt>>,
    pub degree: i64,
    pub subgroup: Subgroup,
}

impl CohomologyGroup {
    pub fn order(&self) -> ExtNat {
        self.structure.order()
    }
}

/// The canonical subquotient presenting `H^parity(H, M)` for cyclic H:
/// even = `M^H / N_H M`, odd = `M[N_H] / I_H M`.
fn tate_subquotient(m: &DModule, h: Subgroup, even: bool) -> Result<Subquotient> {
    let (amb, sub) = if even {
        let inv = m.invariants(h);
        let norm_img = m.norm_image(h);
        (inv.lattice(), norm_img.lattice())
    } else {
        let ker = m.norm_kernel(h);
        let aug = m.augmentation_submodule(h);
        (ker.lattice(), aug.lattice())
    };
    Ok(Subquotient::new(&amb, &sub)?)
}

/// Localize a subquotient's factors by the module's ring and package them
/// as a cohomology group. Free factors are rejected (Tate groups of
/// finitely generated modules are finite).
fn package(
    sq: &Subquotient,
    ring: Ring,
    degree: i64,
    subgroup: Subgroup,
) -> Result<CohomologyGroup> {
    let mut moduli: Vec<BigInt> = Vec::new();
    let mut reps: Vec<Vec<BigInt>> = Vec::new();
    for i in sq.nontrivial_indices() {
        let d = &sq.moduli[i];
        if d.is_zero() {
            return Err(Error::InfiniteTate);
        }
        let (dloc, scale) = match ring {
            Ring::Z => (d.clone(), BigInt::one()),
            Ring::Local(l) => {
                let part: BigInt = crate::exactalg::group::primary_part(
                    d.magnitude(),
                    &num::BigUint::from(l),
                )
                .into();
                let scale = d / &part;
                (part, scale)
            }
        };
        if dloc.is_one() {
            continue;
        }
        let g = sq.gens.col_vec(i);
        reps.push(g.iter().map(|x| x * &scale).collect());
        moduli.push(dloc);
    }
    Ok(CohomologyGroup {
        structure: FinAbGroup::from_moduli(&moduli),
        representatives: reps,
        degree,
        subgroup,
    })
}

/// Tate cohomology of a cyclic subgroup in any degree (period 2).
pub fn tate_cyclic(m: &DModule, h: Subgroup, degree: i64) -> Result<CohomologyGroup> {
    if !h.is_cyclic() {
        return Err(Error::Precondition(format!(
            "{h:?} is not cyclic; use tate_dihedral"
        )));
    }
    let even = degree.rem_euclid(2) == 0;
    let sq = tate_subquotient(m, h, even)?;
    package(&sq, m.ring(), degree, h)
}

/// The conjugation involution on cohomology of the rotation subgroup,
/// transported to the given degree. Transport across one period-2 shift
/// flips the sign.
pub struct DeltaAction {
    /// Presentation of the canonical-degree group (degree 0 or -1).
    sq: Subquotient,
    /// Natural involution matrix on the nontrivial factors.
    natural: IntMatrix,
    /// Sign picked up by the period shifts to reach `degree`.
    pub sign: i64,
    pub degree: i64,
}

impl DeltaAction {
    /// The involution matrix at the target degree.
    pub fn matrix(&self) -> IntMatrix {
        if self.sign >= 0 {
            self.natural.clone()
        } else {
            self.natural.neg()
        }
    }

    pub fn moduli(&self) -> Vec<BigInt> {
        self.sq.nontrivial_moduli()
    }

    /// Structure and representatives (in module coordinates) of the fixed
    /// subgroup of the involution.
    pub fn fixed_points(&self) -> (FinAbGroup, Vec<Vec<BigInt>>) {
        let moduli = self.moduli();
        let t = moduli.len();
        let phi = self.matrix();
        let id = IntMatrix::identity(t);
        let (structure, gens) = kernel_subgroup(&moduli, &phi.sub(&id));
        // map fixed generators back to module coordinates
        let idx = self.sq.nontrivial_indices();
        let mut reps = Vec::with_capacity(gens.cols());
        for c in 0..gens.cols() {
            let rows = self.sq.gens.rows();
            let mut v = vec![BigInt::zero(); rows];
            for (r, &i) in idx.iter().enumerate() {
                let coeff = &gens[(r, c)];
                if !coeff.is_zero() {
                    let col = self.sq.gens.col_vec(i);
                    for (vi, ci) in v.iter_mut().zip(col.iter()) {
                        *vi += coeff * ci;
                    }
                }
            }
            reps.push(v);
        }
        (structure, reps)
    }
}

/// Conjugation action of the reflection class on `H^degree(G, M)`,
/// realized on the canonical period representative (degree 0 for even,
/// -1 for odd) and transported with the period-shift sign.
pub fn delta_action_on(m: &DModule, degree: i64) -> Result<DeltaAction> {
    let even = degree.rem_euclid(2) == 0;
    let canonical = if even { 0i64 } else { -1 };
    let shifts = (degree - canonical) / 2;
    let sign = if shifts.rem_euclid(2) == 0 { 1 } else { -1 };
    let sq = tate_subquotient(m, Subgroup::Rotation, even)?;
    let natural = sq
        .induced_endomorphism(m.s_action())
        .ok_or_else(|| Error::InvalidAction("conjugation does not preserve the subquotient".into()))?;
    // the natural action is an involution on the quotient
    debug_assert!({
        let sq2 = natural.mul(&natural);
        let moduli = sq.nontrivial_moduli();
        let id = IntMatrix::identity(moduli.len());
        let diff = sq2.sub(&id);
        (0..diff.rows()).all(|i| {
            (0..diff.cols()).all(|j| {
                if moduli[i].is_zero() {
                    diff[(i, j)].is_zero()
                } else {
                    num::Integer::mod_floor(&diff[(i, j)], &moduli[i]).is_zero()
                }
            })
        })
    });
    Ok(DeltaAction {
        sq,
        natural,
        sign,
        degree,
    })
}

/// Dihedral cohomology `H^degree(D, M)` for `degree >= 1`, assembled from
/// the Sylow pieces: fixed points of the transported involution on the
/// p-part plus the restriction-isomorphic 2-part.
pub fn cohomology_dihedral(m: &DModule, degree: i64) -> Result<CohomologyGroup> {
    if degree < 1 {
        return Err(Error::Precondition(
            "ordinary cohomology assembly needs degree >= 1".into(),
        ));
    }
    assembled_tate(m, degree)
}

fn assembled_tate(m: &DModule, degree: i64) -> Result<CohomologyGroup> {
    // p-part: fixed points of the twisted involution on cohomology of the
    // rotation subgroup (a p-group, so no further localization is needed
    // beyond the ring's own).
    let delta = delta_action_on(m, degree)?;
    let (fixed, mut reps) = delta.fixed_points();
    let fixed = match m.ring() {
        Ring::Z => fixed,
        Ring::Local(l) => fixed.localize(l),
    };
    // 2-part: restriction to a reflection subgroup is an isomorphism onto
    // its 2-primary cohomology (which is all of it).
    let two_part = tate_cyclic(m, Subgroup::Reflection(0), degree)?;
    let structure = fixed.direct_sum(&two_part.structure);
    reps.extend(two_part.representatives);
    Ok(CohomologyGroup {
        structure,
        representatives: reps,
        degree,
        subgroup: Subgroup::Full,
    })
}

/// Tate cohomology of the full dihedral group in any degree (period 4).
/// Degrees 0 and -1 mod 4 are computed directly from their definitions;
/// the other two residues come from the Sylow assembly.
pub fn tate_dihedral(m: &DModule, degree: i64) -> Result<CohomologyGroup> {
    match degree.rem_euclid(4) {
        0 => {
            // M^D / N_D M
            let inv = m.invariants(Subgroup::Full);
            let img = m.norm_image(Subgroup::Full);
            let sq = Subquotient::new(&inv.lattice(), &img.lattice())?;
            package(&sq, m.ring(), degree, Subgroup::Full)
        }
        3 => {
            // M[N_D] / I_D M
            let ker = m.norm_kernel(Subgroup::Full);
            let aug = m.augmentation_submodule(Subgroup::Full);
            let sq = Subquotient::new(&ker.lattice(), &aug.lattice())?;
            package(&sq, m.ring(), degree, Subgroup::Full)
        }
        _ => assembled_tate(m, degree),
    }
}

/// |H^0(H,M)| / |H^-1(H,M)| for cyclic H, as an exact rational.
pub fn herbrand_quotient(m: &DModule, h: Subgroup) -> Result<num::BigRational> {
    let even = tate_cyclic(m, h, 0)?;
    let odd = tate_cyclic(m, h, -1)?;
    let num = even
        .order()
        .finite()
        .cloned()
        .ok_or(Error::InfiniteTate)?;
    let den = odd.order().finite().cloned().ok_or(Error::InfiniteTate)?;
    Ok(num::BigRational::new(num.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::DihedralGroup;
    use crate::dmodule::test_modules::*;
    use crate::exactalg::IntMatrix;

    fn d3() -> DihedralGroup {
        DihedralGroup::new(3).unwrap()
    }

    fn order_of(c: &CohomologyGroup) -> u64 {
        match c.order() {
            ExtNat::Finite(v) => u64::try_from(&v).unwrap(),
            ExtNat::Infinite => panic!("infinite cohomology group"),
        }
    }

    #[test]
    fn cyclic_examples() {
        // trivial-action Z, H = <s>, j = 0 -> Z/2
        let m = trivial_lattice(d3(), crate::dmodule::Ring::Z);
        let c = tate_cyclic(&m, Subgroup::Reflection(0), 0).unwrap();
        assert_eq!(c.structure, FinAbGroup::from_moduli(&[BigInt::from(2)]));
        // trivial-action Z/3, H = G, any degree -> Z/3
        let m = trivial_torsion(d3(), crate::dmodule::Ring::Z, 3);
        for j in -2..=2 {
            let c = tate_cyclic(&m, Subgroup::Rotation, j).unwrap();
            assert_eq!(order_of(&c), 3, "degree {j}");
        }
        // free modules are cohomologically trivial over the rotation group
        let m = regular(d3(), crate::dmodule::Ring::Z);
        for j in [-1, 0] {
            let c = tate_cyclic(&m, Subgroup::Rotation, j).unwrap();
            assert!(c.structure.is_trivial(), "degree {j}");
        }
        // the trivial subgroup has trivial cohomology everywhere
        let m = sign_lattice(d3(), crate::dmodule::Ring::Z);
        for j in [-1, 0, 1] {
            let c = tate_cyclic(&m, Subgroup::Trivial, j).unwrap();
            assert!(c.structure.is_trivial());
        }
    }

    #[test]
    fn period_two_for_cyclic_subgroups() {
        let m = regular(d3(), crate::dmodule::Ring::Z);
        for h in [Subgroup::Reflection(1), Subgroup::Rotation] {
            for j in -2..=1 {
                let a = tate_cyclic(&m, h, j).unwrap();
                let b = tate_cyclic(&m, h, j + 2).unwrap();
                assert_eq!(a.structure, b.structure);
            }
        }
    }

    #[test]
    fn delta_action_signs() {
        // trivial-action Z/3: natural action is +1 in degree -1, so the
        // transported action in degree 1 is -1
        let m = trivial_torsion(d3(), crate::dmodule::Ring::Z, 3);
        let a = delta_action_on(&m, -1).unwrap();
        assert_eq!(a.sign, 1);
        assert_eq!(a.matrix(), IntMatrix::from_i64(1, 1, &[1]));
        let a = delta_action_on(&m, 1).unwrap();
        assert_eq!(a.sign, -1);
        assert_eq!(a.matrix(), IntMatrix::from_i64(1, 1, &[-1]));
    }

    #[test]
    fn delta_action_on_sign_twisted_torsion() {
        // sign-lattice tensor Z/3 (s = -1, t = +1): action -1 in degree 0,
        // +1 in degree 2
        let m = crate::dmodule::DModule::new(
            d3(),
            crate::dmodule::Ring::Z,
            IntMatrix::from_i64(1, 1, &[3]),
            IntMatrix::identity(1),
            IntMatrix::from_i64(1, 1, &[-1]),
        )
        .unwrap();
        let modulus = BigInt::from(3);
        let a0 = delta_action_on(&m, 0).unwrap();
        assert_eq!(a0.sign, 1);
        assert_eq!(a0.matrix().reduce_mod(&modulus), IntMatrix::from_i64(1, 1, &[-1]));
        let a2 = delta_action_on(&m, 2).unwrap();
        assert_eq!(a2.sign, -1);
        assert_eq!(a2.matrix().reduce_mod(&modulus), IntMatrix::from_i64(1, 1, &[1]));
    }

    #[test]
    fn dihedral_cohomology_of_trivial_mod_p() {
        // H^1(D, Z/p) = H^2(D, Z/p) = 0 for trivial coefficients
        let m = trivial_torsion(d3(), crate::dmodule::Ring::Z, 3);
        for j in [1, 2] {
            let c = cohomology_dihedral(&m, j).unwrap();
            assert!(c.structure.is_trivial(), "H^{j}(D, Z/3) = {}", c.structure);
        }
    }

    #[test]
    fn dihedral_tate_examples() {
        // trivial-action Z/p: degree -1 gives Z/p (N_D = 2p = 0, I_D M = 0)
        let m = trivial_torsion(d3(), crate::dmodule::Ring::Z, 3);
        let c = tate_dihedral(&m, -1).unwrap();
        assert_eq!(c.structure, FinAbGroup::from_moduli(&[BigInt::from(3)]));
        // degree 0: M^D / N_D M = (Z/3) / 6(Z/3) = Z/3
        let c = tate_dihedral(&m, 0).unwrap();
        assert_eq!(order_of(&c), 3);
        // free Z[D]: trivial in every degree
        let m = regular(d3(), crate::dmodule::Ring::Z);
        for j in -4..=4 {
            let c = tate_dihedral(&m, j).unwrap();
            assert!(c.structure.is_trivial(), "degree {j}");
        }
    }

    #[test]
    fn tate_dihedral_of_trivial_lattice() {
        // M = Z trivial: H^0(D) = Z/2p, H^-1 = 0
        let m = trivial_lattice(d3(), crate::dmodule::Ring::Z);
        let c = tate_dihedral(&m, 0).unwrap();
        assert_eq!(order_of(&c), 6);
        let c = tate_dihedral(&m, -1).unwrap();
        assert!(c.structure.is_trivial());
        // localized at 3 the order-2 part disappears
        let m = trivial_lattice(d3(), crate::dmodule::Ring::Local(3));
        let c = tate_dihedral(&m, 0).unwrap();
        assert_eq!(order_of(&c), 3);
    }

    #[test]
    fn representative_orders_match_structure() {
        let m = trivial_lattice(d3(), crate::dmodule::Ring::Z);
        let c = tate_dihedral(&m, 0).unwrap();
        assert_eq!(c.representatives.len(), c.structure.torsion.len());
    }
}
