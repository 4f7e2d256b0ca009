//! Arithmetic bookkeeping computed from combinatorial data: residue
//! degrees and local factors from decomposition subgroups, relation
//! triviality, archimedean signatures, ranks, sign exponents, and torsion
//! orders from cyclotomic character data.

use num::{BigInt, BigRational, BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use crate::dihedral::{DihedralGroup, RelationVector, Subgroup};
use crate::error::{Error, Result};

/// A place of the base field with its decomposition subgroup in the
/// dihedral extension. Finite places are assumed unramified (ramified data
/// is rejected at ingestion); archimedean places have decomposition of
/// order at most 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlaceData {
    Real {
        decomposition: Subgroup,
    },
    Complex,
    Finite {
        /// residue characteristic of the place
        ell: u64,
        /// residue degree: |k_v| = ell^f
        f: u64,
        decomposition: Subgroup,
    },
}

impl PlaceData {
    pub fn is_archimedean(&self) -> bool {
        !matches!(self, PlaceData::Finite { .. })
    }

    pub fn decomposition(&self) -> Subgroup {
        match self {
            PlaceData::Real { decomposition } => *decomposition,
            PlaceData::Complex => Subgroup::Trivial,
            PlaceData::Finite { decomposition, .. } => *decomposition,
        }
    }

    /// Complex places always have trivial decomposition; real places have
    /// decomposition of order at most 2; finite decomposition groups are
    /// cyclic.
    pub fn validate(&self, group: DihedralGroup) -> Result<()> {
        match self {
            PlaceData::Complex => Ok(()),
            PlaceData::Real { decomposition } => match decomposition {
                Subgroup::Trivial | Subgroup::Reflection(_) => Ok(()),
                other => Err(Error::InvalidPlace(format!(
                    "archimedean place with decomposition {other:?} of order > 2"
                ))),
            },
            PlaceData::Finite {
                ell,
                f,
                decomposition,
            } => {
                if !decomposition.is_cyclic() {
                    return Err(Error::InvalidPlace(
                        "finite unramified decomposition groups are cyclic".into(),
                    ));
                }
                if let Subgroup::Reflection(j) = decomposition {
                    if *j >= group.p() {
                        return Err(Error::InvalidPlace(format!(
                            "reflection index {j} out of range for p = {}",
                            group.p()
                        )));
                    }
                }
                if *f == 0 {
                    return Err(Error::InvalidPlace("residue degree f must be >= 1".into()));
                }
                if *ell < 2 {
                    return Err(Error::InvalidPlace(format!(
                        "residue characteristic {ell} is not a prime"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Residue degrees `f_{w|v}` of the places of the subfield fixed by `h`
/// over an unramified place with decomposition subgroup `d_v`, as a sorted
/// multiset. These are the orbit sizes of the decomposition group on the
/// cosets.
pub fn residue_degrees(group: DihedralGroup, place: &PlaceData, h: Subgroup) -> Result<Vec<u64>> {
    let PlaceData::Finite { decomposition, .. } = place else {
        return Err(Error::InvalidPlace(
            "residue degrees are defined for finite places".into(),
        ));
    };
    place.validate(group)?;
    Ok(group.orbits_on_cosets(h, *decomposition))
}

/// p-part of the local factor of the subfield fixed by `h` at an
/// unramified finite place: the product over places w above v of
/// `p^(v_p(ell^(f_w (m-1)) - 1))`.
pub fn local_factor(
    group: DihedralGroup,
    place: &PlaceData,
    h: Subgroup,
    m: u32,
    p: u64,
) -> Result<BigUint> {
    let PlaceData::Finite { ell, f, .. } = place else {
        return Err(Error::InvalidPlace(
            "local factors are defined for finite places".into(),
        ));
    };
    if *ell == p {
        return Err(Error::PlaceAboveP);
    }
    let degrees = residue_degrees(group, place, h)?;
    let p_big = BigUint::from(p);
    let mut out = BigUint::one();
    for fw_rel in degrees {
        let fw = f * fw_rel;
        let exponent = fw * (m as u64 - 1);
        let q = BigUint::from(*ell).pow(exponent as u32) - BigUint::one();
        out *= crate::exactalg::group::primary_part(&q, &p_big);
    }
    Ok(out)
}

/// The full (non-localized) factor `prod_w (ell^(f_w (m-1)) - 1)`.
pub fn full_local_factor(
    group: DihedralGroup,
    place: &PlaceData,
    h: Subgroup,
    m: u32,
) -> Result<BigUint> {
    let PlaceData::Finite { ell, f, .. } = place else {
        return Err(Error::InvalidPlace(
            "local factors are defined for finite places".into(),
        ));
    };
    let degrees = residue_degrees(group, place, h)?;
    let mut out = BigUint::one();
    for fw_rel in degrees {
        let exponent = f * fw_rel * (m as u64 - 1);
        out *= BigUint::from(*ell).pow(exponent as u32) - BigUint::one();
    }
    Ok(out)
}

/// Product over the four subgroup classes of `factor(H)^rel(H)`, with the
/// reflection coefficient applied once to the (single) reflection class.
pub fn relation_product(
    group: DihedralGroup,
    place: &PlaceData,
    m: u32,
    p: u64,
    rel: &RelationVector,
) -> Result<BigRational> {
    weighted_product(rel, |h| local_factor(group, place, h, m, p))
}

/// Same weighted product for the full (non-p-part) factors.
pub fn full_relation_product(
    group: DihedralGroup,
    place: &PlaceData,
    m: u32,
    rel: &RelationVector,
) -> Result<BigRational> {
    weighted_product(rel, |h| full_local_factor(group, place, h, m))
}

fn weighted_product(
    rel: &RelationVector,
    mut factor: impl FnMut(Subgroup) -> Result<BigUint>,
) -> Result<BigRational> {
    let classes = [
        Subgroup::Trivial,
        Subgroup::Reflection(0),
        Subgroup::Rotation,
        Subgroup::Full,
    ];
    let mut out = BigRational::one();
    for h in classes {
        let c = rel.coefficient(h);
        if c == 0 {
            continue;
        }
        let f = BigRational::from_integer(BigInt::from(factor(h)?));
        let pow = f.pow(c.unsigned_abs().min(i32::MAX as u64) as i32);
        if c > 0 {
            out *= pow;
        } else {
            out /= pow;
        }
    }
    Ok(out)
}

/// Archimedean signature data for the quintet of subfields at weight m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub m: u32,
    pub base: FieldSignature,
    pub quadratic: FieldSignature,
    pub degree_p: FieldSignature,
    pub top: FieldSignature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSignature {
    pub r1: u64,
    pub r2: u64,
    pub rank: u64,
    pub t: u64,
}

impl SignatureReport {
    pub fn field(&self, h: Subgroup) -> &FieldSignature {
        match h {
            Subgroup::Full => &self.base,
            Subgroup::Rotation => &self.quadratic,
            Subgroup::Reflection(_) => &self.degree_p,
            Subgroup::Trivial => &self.top,
        }
    }

    /// Number of real places of the base becoming complex in the quadratic
    /// subfield.
    pub fn ramified_real_places(&self) -> u64 {
        self.base.r1 - self.quadratic.r1 / 2
    }
}

/// `t_{E, m}` from (r1, r2): 1, r1 + r2, r1, r2 for m = 1, 2, 3, 0 mod 4.
pub fn t_value(m: u32, r1: u64, r2: u64) -> u64 {
    match m % 4 {
        1 => 1,
        2 => r1 + r2,
        3 => r1,
        _ => r2,
    }
}

/// Rank of the weight-m lattice: r1 + r2 for odd m >= 3, r2 for even m,
/// and the classical r1 + r2 - 1 at m = 1.
pub fn rank_value(m: u32, r1: u64, r2: u64) -> u64 {
    if m == 1 {
        (r1 + r2).saturating_sub(1)
    } else if m % 2 == 1 {
        r1 + r2
    } else {
        r2
    }
}

/// Signatures of the quintet from the archimedean places of the base.
pub fn signatures(
    group: DihedralGroup,
    arch_places: &[PlaceData],
    m: u32,
) -> Result<SignatureReport> {
    let fields = [
        Subgroup::Full,
        Subgroup::Rotation,
        Subgroup::Reflection(0),
        Subgroup::Trivial,
    ];
    let mut counts = [(0u64, 0u64); 4];
    for place in arch_places {
        if !place.is_archimedean() {
            continue;
        }
        place.validate(group)?;
        for (slot, h) in fields.iter().enumerate() {
            let entry = &mut counts[slot];
            match place {
                PlaceData::Complex => {
                    // every place above a complex place is complex
                    entry.1 += group.subgroup_index(*h);
                }
                PlaceData::Real { decomposition } => match decomposition {
                    Subgroup::Trivial => {
                        entry.0 += group.subgroup_index(*h);
                    }
                    _ => {
                        // order-2 decomposition: orbit of size 1 = real
                        // place, orbit of size 2 = complex place
                        for orbit in group.orbits_on_cosets(*h, *decomposition) {
                            match orbit {
                                1 => entry.0 += 1,
                                2 => entry.1 += 1,
                                _ => unreachable!("order-2 group has orbits of size <= 2"),
                            }
                        }
                    }
                },
                PlaceData::Finite { .. } => unreachable!(),
            }
        }
    }
    let sig = |slot: usize| {
        let (r1, r2) = counts[slot];
        FieldSignature {
            r1,
            r2,
            rank: rank_value(m, r1, r2),
            t: t_value(m, r1, r2),
        }
    };
    Ok(SignatureReport {
        m,
        base: sig(0),
        quadratic: sig(1),
        degree_p: sig(2),
        top: sig(3),
    })
}

/// `alpha_m`: rank of the quadratic-subfield lattice minus rank of the
/// base lattice.
pub fn alpha_from_signatures(sig: &SignatureReport) -> i64 {
    sig.quadratic.rank as i64 - sig.base.rank as i64
}

/// Is the relation-weighted sum of the sign exponents `t_{E, m}` even?
/// (The zeta special-value signs cancel exactly when it is.)
pub fn check_sign_cancellation(sig: &SignatureReport, rel: &RelationVector) -> bool {
    let weighted = rel.c_trivial * sig.top.t as i64
        + rel.c_reflection * sig.degree_p.t as i64
        + rel.c_rotation * sig.quadratic.t as i64
        + rel.c_full * sig.base.t as i64;
    weighted.rem_euclid(2) == 0
}

/// Multiplicities of the three rational irreducibles (trivial, sign,
/// degree p-1) in the weight-m lattice of the top field: for odd m every
/// archimedean place contributes an induced trivial module; for even m
/// the real-ramified places contribute induced sign modules and the
/// complex places contribute regular ones.
pub fn higher_dirichlet_decomposition(
    group: DihedralGroup,
    arch_places: &[PlaceData],
    m: u32,
) -> Result<(u64, u64, u64)> {
    if m < 2 {
        return Err(Error::Precondition(
            "the higher decomposition needs weight m >= 2".into(),
        ));
    }
    let mut triv = 0u64;
    let mut sign = 0u64;
    let mut omega = 0u64;
    for place in arch_places {
        if !place.is_archimedean() {
            continue;
        }
        place.validate(group)?;
        let order2 = matches!(place.decomposition(), Subgroup::Reflection(_));
        if m % 2 == 1 {
            if order2 {
                // induced trivial from an order-2 subgroup: 1 + omega
                triv += 1;
                omega += 1;
            } else {
                // regular representation: 1 + sign + 2 omega
                triv += 1;
                sign += 1;
                omega += 2;
            }
        } else {
            match place {
                PlaceData::Complex => {
                    triv += 1;
                    sign += 1;
                    omega += 2;
                }
                PlaceData::Real { .. } if order2 => {
                    // induced sign from an order-2 subgroup: sign + omega
                    sign += 1;
                    omega += 1;
                }
                _ => {} // split real places contribute nothing for even m
            }
        }
    }
    // dimension consistency with the signature-derived rank
    let sig = signatures(group, arch_places, m)?;
    let dim = triv + sign + (group.p() - 1) * omega;
    if dim != sig.top.rank {
        return Err(Error::Precondition(format!(
            "decomposition dimension {dim} does not match rank {}",
            sig.top.rank
        )));
    }
    Ok((triv, sign, omega))
}

/// `<chi, 1 - sign - omega>` for the top-field lattice, computed from the
/// decomposition; always equals `-2 alpha_m`.
pub fn character_pairing_exponent(
    group: DihedralGroup,
    arch_places: &[PlaceData],
    m: u32,
) -> Result<i64> {
    let (triv, sign, omega) = higher_dirichlet_decomposition(group, arch_places, m)?;
    Ok(triv as i64 - sign as i64 - omega as i64)
}

/// `ell^(v_ell(kappa^m - 1))` from a cyclotomic character value given
/// modulo `ell^precision`. Errors when the valuation is not resolved at
/// this precision.
pub fn w_number_part(ell: u64, kappa: &BigUint, m: u32, precision: u32) -> Result<BigUint> {
    if ell < 3 {
        return Err(Error::Precondition(
            "w-numbers from character data need an odd prime".into(),
        ));
    }
    let modulus = BigUint::from(ell).pow(precision);
    let x = kappa.modpow(&BigUint::from(m), &modulus);
    // delta = kappa^m - 1 mod ell^precision
    let delta = (x + (&modulus - BigUint::one())) % &modulus;
    if delta.is_zero() {
        return Err(Error::PrecisionExhausted);
    }
    let ell_big = BigUint::from(ell);
    let mut rest = delta;
    let mut v = 0u32;
    while (&rest % &ell_big).is_zero() {
        rest /= &ell_big;
        v += 1;
    }
    Ok(ell_big.pow(v))
}
