//! Field-invariant bundles and the end-to-end class-number-formula check.
//!
//! A bundle carries ingested invariants (orders of the degree-2 cohomology,
//! torsion orders, regulators with error bounds, signatures) for the
//! quintet of fields of a dihedral extension, plus the places describing
//! the set S. Everything except the regulators is exact; the regulator
//! identity is checked with interval arithmetic against a relative
//! tolerance and may come back inconclusive when the supplied error bounds
//! are too loose to decide.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, BigUint, One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::{
    alpha_from_signatures, check_sign_cancellation, signatures, PlaceData, SignatureReport,
};
use crate::dihedral::{DihedralGroup, RelationVector};
use crate::error::{Error, Result};
use crate::exactalg::group::factorize;
use crate::exactalg::rational::{as_prime_power, rational_to_string};

/// A positive decimal with an absolute error bound, parsed exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuredValue {
    pub value: String,
    #[serde(default = "zero_error")]
    pub error: String,
}

fn zero_error() -> String {
    "0".to_string()
}

impl MeasuredValue {
    pub fn exact(v: &str) -> Self {
        MeasuredValue {
            value: v.to_string(),
            error: "0".to_string(),
        }
    }

    /// The guaranteed enclosure `[value - error, value + error]`.
    pub fn interval(&self) -> Result<Interval> {
        let mid = parse_decimal(&self.value)?;
        let err = parse_decimal(&self.error)?;
        if err.is_negative() {
            return Err(Error::Parse(format!("negative error bound {}", self.error)));
        }
        Ok(Interval {
            lo: &mid - &err,
            hi: &mid + &err,
        })
    }
}

/// Exact decimal / scientific-notation parser ("1.25", "3e-7", "-0.5e2").
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid decimal {s:?}"));
    let (mantissa, exp10) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(bad());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        },
        frac_part
    );
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::new(numer, ten.pow(shift as u32))
    } else {
        BigRational::from_integer(numer * ten.pow((-shift) as u32))
    })
}

/// A closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(v: BigRational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        assert!(self.is_positive() && other.is_positive());
        Interval {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    pub fn div(&self, other: &Interval) -> Interval {
        assert!(self.is_positive() && other.is_positive());
        Interval {
            lo: &self.lo / &other.hi,
            hi: &self.hi / &other.lo,
        }
    }

    pub fn square(&self) -> Interval {
        self.mul(self)
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

/// Outcome of an inexact comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Does `target` sit within relative tolerance `tol` of the quantity
/// enclosed by `iv`? Pass when every point of the interval is compatible,
/// fail when none is, inconclusive otherwise.
pub fn compare_with_tolerance(target: &BigRational, iv: &Interval, tol: &BigRational) -> Verdict {
    assert!(iv.is_positive(), "enclosure must be positive");
    let one = BigRational::one();
    // |target - r| <= tol * r  <=>  target/(1+tol) <= r <= target/(1-tol)
    let lo_req = target / (&one + tol);
    let hi_req = if tol < &one {
        Some(target / (&one - tol))
    } else {
        None // tolerance >= 1: no upper constraint
    };
    let all_in = iv.lo >= lo_req && hi_req.as_ref().map_or(true, |h| &iv.hi <= h);
    if all_in {
        return Verdict::Pass;
    }
    let none_in = &iv.hi < &lo_req || hi_req.as_ref().map_or(false, |h| &iv.lo > h);
    if none_in {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

/// Ingested invariants of one field of the quintet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    /// order of the degree-2 cohomology group
    pub h: u64,
    /// optional invariant factors of that group (product must equal h)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_structure: Option<Vec<u64>>,
    /// torsion order of the degree-1 cohomology
    pub w: u64,
    /// regulator with an absolute error bound
    #[serde(rename = "R")]
    pub regulator: MeasuredValue,
    pub r1: u64,
    pub r2: u64,
    pub rank: u64,
}

/// Invariants for the five fields `k  F, K, K', L` of a dihedral quintet,
/// the weight, and the places of S.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInvariantBundle {
    pub p: u64,
    pub m: u32,
    pub base: FieldRecord,
    pub quadratic: FieldRecord,
    pub degree_p: FieldRecord,
    pub degree_p_conjugate: FieldRecord,
    pub top: FieldRecord,
    #[serde(default)]
    pub places: Vec<PlaceData>,
    #[serde(default)]
    pub provenance: String,
}

impl FieldInvariantBundle {
    pub fn group(&self) -> Result<DihedralGroup> {
        DihedralGroup::new(self.p)
    }

    /// Hard ingestion checks: torsion identities `w_L = w_F`, `w_K = w_k`,
    /// conjugate-field equality, positive values, valid places.
    pub fn validate(&self) -> Result<()> {
        let group = self.group()?;
        if self.m < 1 {
            return Err(Error::InvalidBundle("weight m must be >= 1".into()));
        }
        for (name, rec) in self.records() {
            if rec.h == 0 || rec.w == 0 {
                return Err(Error::InvalidBundle(format!(
                    "field {name}: h and w must be positive"
                )));
            }
            if let Some(st) = &rec.h_structure {
                let prod: u64 = st.iter().product();
                if prod != rec.h {
                    return Err(Error::InvalidBundle(format!(
                        "field {name}: invariant factors multiply to {prod}, expected {}",
                        rec.h
                    )));
                }
            }
            let iv = rec.regulator.interval()?;
            if !iv.is_positive() {
                return Err(Error::InvalidBundle(format!(
                    "field {name}: regulator enclosure must be positive"
                )));
            }
        }
        if self.top.w != self.quadratic.w {
            return Err(Error::InvalidBundle(format!(
                "torsion identity violated: w_L = {} but w_F = {}",
                self.top.w, self.quadratic.w
            )));
        }
        if self.degree_p.w != self.base.w {
            return Err(Error::InvalidBundle(format!(
                "torsion identity violated: w_K = {} but w_k = {}",
                self.degree_p.w, self.base.w
            )));
        }
        if self.degree_p != self.degree_p_conjugate {
            return Err(Error::InvalidBundle(
                "conjugate degree-p fields must carry identical records".into(),
            ));
        }
        for place in &self.places {
            place.validate(group)?;
        }
        Ok(())
    }

    fn records(&self) -> [(&'static str, &FieldRecord); 5] {
        [
            ("k", &self.base),
            ("F", &self.quadratic),
            ("K", &self.degree_p),
            ("K'", &self.degree_p_conjugate),
            ("L", &self.top),
        ]
    }

    pub fn signature_report(&self) -> Result<SignatureReport> {
        let arch: Vec<PlaceData> = self
            .places
            .iter()
            .filter(|p| p.is_archimedean())
            .cloned()
            .collect();
        signatures(self.group()?, &arch, self.m)
    }
}

/// One sub-check of the bundle verification.
#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// Full verification report.
#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub checks: Vec<SubCheck>,
    pub overall: Verdict,
    /// the unit index solved from the exact part, as a power of p
    pub u_exponent: Option<i64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }
}

fn exact_check(name: &str, ok: bool, detail: String) -> SubCheck {
    SubCheck {
        name: name.to_string(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
}

fn ell_part(n: u64, ell: &BigUint) -> BigUint {
    crate::exactalg::group::primary_part(&BigUint::from(n), ell)
}

/// The checks of the degree-2 order identity away from p: for every prime
/// ell dividing any of the orders, ell != p, the products
/// `|A_L| |A_k|^2` and `|A_F| |A_K|^2` have equal ell-parts; with
/// invariant factors supplied, the two direct sums agree as groups.
pub fn nonp_consistency(bundle: &FieldInvariantBundle) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let mut primes: Vec<BigUint> = Vec::new();
    for (_, rec) in bundle.records() {
        for (q, _) in factorize(&BigUint::from(rec.h)) {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
    }
    primes.sort();
    let p_big = BigUint::from(bundle.p);
    for q in primes.iter().filter(|q| **q != p_big) {
        let q64 = u64::try_from(q).unwrap();
        let lhs = ell_part(bundle.top.h, q) * ell_part(bundle.base.h, q).pow(2);
        let rhs = ell_part(bundle.quadratic.h, q) * ell_part(bundle.degree_p.h, q).pow(2);
        out.push(exact_check(
            &format!("order-identity-at-{q64}"),
            lhs == rhs,
            format!("|A_L| |A_k|^2 = {lhs} vs |A_F| |A_K|^2 = {rhs} at ell = {q64}"),
        ));
        // structural refinement when invariant factors are available
        let structures: Option<Vec<&Vec<u64>>> = [
            &bundle.top,
            &bundle.base,
            &bundle.quadratic,
            &bundle.degree_p,
        ]
        .iter()
        .map(|r| r.h_structure.as_ref())
        .collect();
        if let Some([l, k, f, kk]) = structures.as_deref() {
            let side = |a: &[u64], b: &[u64]| -> Vec<BigUint> {
                let mut factors: Vec<BigUint> = Vec::new();
                for d in a.iter().chain(b).chain(b) {
                    let part = ell_part(*d, q);
                    if !part.is_one() {
                        factors.push(part);
                    }
                }
                factors.sort();
                factors
            };
            let lhs = side(l, k);
            let rhs = side(f, kk);
            out.push(exact_check(
                &format!("structure-identity-at-{q64}"),
                lhs == rhs,
                format!("invariant factors at {q64}: {lhs:?} vs {rhs:?}"),
            ));
        }
    }
    if out.is_empty() {
        out.push(exact_check(
            "order-identity-away-from-p",
            true,
            "all degree-2 orders are powers of p".into(),
        ));
    }
    out
}

/// Solve the exact index identity for u: `u = h_L p^alpha h_k^2 / (h_F h_K^2)`
/// on p-parts, and demand it is an integral power of p.
pub fn solve_unit_index(bundle: &FieldInvariantBundle, alpha: i64) -> Result<(BigRational, i64)> {
    let p_big = BigUint::from(bundle.p);
    let hp = |n: u64| BigRational::from_integer(BigInt::from(ell_part(n, &p_big)));
    let mut u = hp(bundle.top.h) * hp(bundle.base.h).pow(2)
        / (hp(bundle.quadratic.h) * hp(bundle.degree_p.h).pow(2));
    let p_rat = BigRational::from_integer(BigInt::from(bundle.p));
    let mut a = alpha;
    while a > 0 {
        u *= &p_rat;
        a -= 1;
    }
    while a < 0 {
        u /= &p_rat;
        a += 1;
    }
    let exponent = as_prime_power(&u, bundle.p).ok_or_else(|| {
        Error::InvalidBundle(format!(
            "derived unit index {} is not a power of p = {}",
            rational_to_string(&u),
            bundle.p
        ))
    })?;
    Ok((u, exponent))
}

/// Verify a bundle end to end. Exact sub-checks never pass on tolerance;
/// the two regulator comparisons are tri-state.
pub fn bk_check(bundle: &FieldInvariantBundle, tolerance: &BigRational) -> Result<CheckReport> {
    bundle.validate()?;
    let mut checks: Vec<SubCheck> = Vec::new();

    // torsion identities were enforced at ingestion; record them
    checks.push(exact_check(
        "torsion-identities",
        true,
        format!(
            "w_L = w_F = {}, w_K = w_k = {}",
            bundle.top.w, bundle.base.w
        ),
    ));

    // signatures, ranks, alpha and sign cancellation
    let sig = bundle.signature_report()?;
    let rank_ok = [
        (&bundle.base, &sig.base, "k"),
        (&bundle.quadratic, &sig.quadratic, "F"),
        (&bundle.degree_p, &sig.degree_p, "K"),
        (&bundle.top, &sig.top, "L"),
    ]
    .iter()
    .map(|(rec, s, name)| {
        let ok = rec.r1 == s.r1 && rec.r2 == s.r2 && rec.rank == s.rank;
        (ok, format!(
            "{name}: bundle (r1,r2,rank) = ({},{},{}), places give ({},{},{})",
            rec.r1, rec.r2, rec.rank, s.r1, s.r2, s.rank
        ))
    })
    .collect::<Vec<_>>();
    for (ok, detail) in &rank_ok {
        checks.push(exact_check("signature-consistency", *ok, detail.clone()));
    }
    let alpha = alpha_from_signatures(&sig);
    checks.push(exact_check(
        "sign-cancellation",
        check_sign_cancellation(&sig, &RelationVector::CANONICAL),
        format!(
            "t = ({}, {}, {}, {}) for (k, F, K, L) at m = {}",
            sig.base.t, sig.quadratic.t, sig.degree_p.t, sig.top.t, sig.m
        ),
    ));

    // order identity away from p
    checks.extend(nonp_consistency(bundle));

    // solve the p-part identity for u and require a p-power
    let u_result = solve_unit_index(bundle, alpha);
    let (u, u_exponent) = match u_result {
        Ok((u, e)) => {
            checks.push(exact_check(
                "unit-index-p-power",
                true,
                format!("u = {} = p^{e}, alpha = {alpha}", rational_to_string(&u)),
            ));
            (Some(u), Some(e))
        }
        Err(err) => {
            checks.push(exact_check("unit-index-p-power", false, err.to_string()));
            (None, None)
        }
    };

    // regulator identity: p^-alpha u = R_K^2 R_F / (R_k^2 R_L)
    let reg_ratio = {
        let rk = bundle.degree_p.regulator.interval()?;
        let rf = bundle.quadratic.regulator.interval()?;
        let rbase = bundle.base.regulator.interval()?;
        let rl = bundle.top.regulator.interval()?;
        rk.square().mul(&rf).div(&rbase.square().mul(&rl))
    };
    if let Some(u) = &u {
        let p_rat = BigRational::from_integer(BigInt::from(bundle.p));
        let mut target = u.clone();
        let mut a = alpha;
        while a > 0 {
            target /= &p_rat;
            a -= 1;
        }
        while a < 0 {
            target *= &p_rat;
            a += 1;
        }
        let verdict = compare_with_tolerance(&target, &reg_ratio, tolerance);
        checks.push(SubCheck {
            name: "regulator-identity".into(),
            verdict,
            detail: format!(
                "p^-alpha u = {} vs regulator ratio in [{}, {}]",
                rational_to_string(&target),
                rational_to_string(&reg_ratio.lo),
                rational_to_string(&reg_ratio.hi)
            ),
        });

        // assembled class-number formula: h_L = h_F (h_K/h_k)^2 *
        // (w_k^2 w_L / (w_K^2 w_F)) * regulator ratio
        let h = |n: u64| BigRational::from_integer(BigInt::from(n));
        let w_factor = h(bundle.base.w).pow(2) * h(bundle.top.w)
            / (h(bundle.degree_p.w).pow(2) * h(bundle.quadratic.w));
        let exact_part = h(bundle.quadratic.h) * h(bundle.degree_p.h).pow(2)
            / h(bundle.base.h).pow(2)
            * w_factor;
        let rhs = reg_ratio.mul(&Interval::point(exact_part));
        let lhs = h(bundle.top.h);
        let verdict = compare_with_tolerance(&lhs, &rhs, tolerance);
        let residual = {
            let mid = rhs.midpoint();
            let diff = &lhs - &mid;
            (diff / mid).abs()
        };
        checks.push(SubCheck {
            name: "class-number-formula".into(),
            verdict,
            detail: format!(
                "h_L = {} vs assembled right-hand side in [{}, {}] (relative residual {})",
                bundle.top.h,
                rational_to_string(&rhs.lo),
                rational_to_string(&rhs.hi),
                rational_to_string(&residual)
            ),
        });
    }

    let overall = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(CheckReport {
        checks,
        overall,
        u_exponent,
    })
}

/// Exact p-part identity on ingested orders: given u (a power of p) and
/// alpha, check `|A_L| = p^-alpha |A_F| (|A_K| / |A_k|)^2 u` on p-parts.
pub fn mainp_identity_holds(
    bundle: &FieldInvariantBundle,
    u: &BigRational,
    alpha: i64,
) -> Result<bool> {
    let p_big = BigUint::from(bundle.p);
    let hp = |n: u64| BigRational::from_integer(BigInt::from(ell_part(n, &p_big)));
    let p_rat = BigRational::from_integer(BigInt::from(bundle.p));
    let mut rhs = hp(bundle.quadratic.h) * hp(bundle.degree_p.h).pow(2) / hp(bundle.base.h).pow(2)
        * u.clone();
    let mut a = alpha;
    while a > 0 {
        rhs /= &p_rat;
        a -= 1;
    }
    while a < 0 {
        rhs *= &p_rat;
        a += 1;
    }
    Ok(hp(bundle.top.h) == rhs)
}

/// Deterministic canonical JSON serialization (struct field order).
pub fn to_canonical_json(bundle: &FieldInvariantBundle) -> Result<String> {
    Ok(serde_json::to_string_pretty(bundle)?)
}

pub fn from_json(text: &str) -> Result<FieldInvariantBundle> {
    let bundle: FieldInvariantBundle = serde_json::from_str(text)?;
    bundle.validate()?;
    Ok(bundle)
}

/// Group the prime factors of the five h's by prime, for reports.
pub fn h_prime_support(bundle: &FieldInvariantBundle) -> BTreeMap<u64, [u32; 5]> {
    let mut out: BTreeMap<u64, [u32; 5]> = BTreeMap::new();
    for (slot, (_, rec)) in bundle.records().iter().enumerate() {
        for (q, e) in factorize(&BigUint::from(rec.h)) {
            let q64 = u64::try_from(&q).unwrap();
            out.entry(q64).or_default()[slot] = e;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_record() -> FieldRecord {
        FieldRecord {
            h: 1,
            h_structure: None,
            w: 1,
            regulator: MeasuredValue::exact("1.0"),
            r1: 0,
            r2: 0,
            rank: 0,
        }
    }

    fn all_trivial_bundle() -> FieldInvariantBundle {
        FieldInvariantBundle {
            p: 3,
            m: 2,
            base: trivial_record(),
            quadratic: trivial_record(),
            degree_p: trivial_record(),
            degree_p_conjugate: trivial_record(),
            top: trivial_record(),
            places: vec![],
            provenance: "synthetic".into(),
        }
    }

    fn tol() -> BigRational {
        parse_decimal("1e-6").unwrap()
    }

    #[test]
    fn decimal_parser() {
        assert_eq!(parse_decimal("1.25").unwrap(), parse_decimal("125e-2").unwrap());
        assert_eq!(
            parse_decimal("-0.5e2").unwrap(),
            BigRational::from_integer(BigInt::from(-50))
        );
        assert!(parse_decimal("abc").is_err());
        assert_eq!(parse_decimal(".5").unwrap(), parse_decimal("0.5").unwrap());
    }

    #[test]
    fn all_trivial_bundle_passes() {
        let b = all_trivial_bundle();
        let report = bk_check(&b, &tol()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.u_exponent, Some(0));
    }

    #[test]
    fn torsion_identity_violation_is_ingestion_error() {
        let mut b = all_trivial_bundle();
        b.top.w = 2;
        assert!(matches!(b.validate(), Err(Error::InvalidBundle(_))));
    }

    #[test]
    fn conjugate_field_mismatch_is_ingestion_error() {
        let mut b = all_trivial_bundle();
        b.degree_p_conjugate.h = 7;
        assert!(b.validate().is_err());
    }

    #[test]
    fn mismatched_order_away_from_p_fails() {
        let mut b = all_trivial_bundle();
        b.top.h = 7; // ell = 7 != p = 3 breaks the order identity
        let report = bk_check(&b, &tol()).unwrap();
        assert!(!report.passed());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "order-identity-at-7" && c.verdict == Verdict::Fail));
    }

    #[test]
    fn p_part_with_u_factor() {
        // orders (h_L, h_F, h_K, h_k) = (3, 3, 1, 1), alpha = 0, u = 1
        let mut b = all_trivial_bundle();
        b.top.h = 3;
        b.quadratic.h = 3;
        let (u, e) = solve_unit_index(&b, 0).unwrap();
        assert!(u.is_one());
        assert_eq!(e, 0);
        assert!(mainp_identity_holds(&b, &u, 0).unwrap());
        // u = p^alpha when only p^alpha is missing
        let b2 = {
            let mut b2 = all_trivial_bundle();
            b2.top.h = 9;
            b2
        };
        let (u2, e2) = solve_unit_index(&b2, 0).unwrap();
        assert_eq!(e2, 2);
        assert!(mainp_identity_holds(&b2, &u2, 0).unwrap());
    }

    #[test]
    fn inconclusive_when_error_bounds_dominate() {
        let mut b = all_trivial_bundle();
        b.top.regulator = MeasuredValue {
            value: "1.0".into(),
            error: "0.5".into(),
        };
        let report = bk_check(&b, &tol()).unwrap();
        assert_eq!(report.overall, Verdict::Inconclusive);
    }

    #[test]
    fn structure_identity_checked_when_supplied() {
        let mut b = all_trivial_bundle();
        // L and k carry Z/4; F and K carry Z/2 + Z/2: orders match at 2
        // but the structures differ
        b.top.h = 4;
        b.top.h_structure = Some(vec![4]);
        b.base.h = 1;
        b.base.h_structure = Some(vec![]);
        b.quadratic.h = 4;
        b.quadratic.h_structure = Some(vec![2, 2]);
        b.degree_p.h = 1;
        b.degree_p.h_structure = Some(vec![]);
        b.degree_p_conjugate = b.degree_p.clone();
        let report = bk_check(&b, &tol()).unwrap();
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "structure-identity-at-2" && c.verdict == Verdict::Fail));
    }

    #[test]
    fn interval_comparison_verdicts() {
        let target = parse_decimal("1.0").unwrap();
        let tight = Interval {
            lo: parse_decimal("0.9999999").unwrap(),
            hi: parse_decimal("1.0000001").unwrap(),
        };
        assert_eq!(
            compare_with_tolerance(&target, &tight, &parse_decimal("1e-3").unwrap()),
            Verdict::Pass
        );
        let off = Interval {
            lo: parse_decimal("1.5").unwrap(),
            hi: parse_decimal("1.6").unwrap(),
        };
        assert_eq!(
            compare_with_tolerance(&target, &off, &parse_decimal("1e-3").unwrap()),
            Verdict::Fail
        );
        let wide = Interval {
            lo: parse_decimal("0.5").unwrap(),
            hi: parse_decimal("1.5").unwrap(),
        };
        assert_eq!(
            compare_with_tolerance(&target, &wide, &parse_decimal("1e-3").unwrap()),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn bundle_json_round_trip() {
        let b = all_trivial_bundle();
        let text = to_canonical_json(&b).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(b, back);
        let again = to_canonical_json(&back).unwrap();
        assert_eq!(text, again);
    }
}
