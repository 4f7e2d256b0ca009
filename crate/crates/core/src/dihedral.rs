//! The dihedral group `D = <t, s | t^p = s^2 = 1, sts = t^-1>` of order 2p,
//! its subgroup lattice, coset combinatorics and group-algebra elements.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The group `D_2p` for an odd prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralGroup {
    p: u64,
}

impl DihedralGroup {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(DihedralGroup { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        2 * self.p
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            rotation: 0,
            flip: false,
        }
    }

    /// t
    pub fn tau(&self) -> GroupElement {
        GroupElement {
            rotation: 1,
            flip: false,
        }
    }

    /// s
    pub fn sigma(&self) -> GroupElement {
        GroupElement {
            rotation: 0,
            flip: true,
        }
    }

    pub fn element(&self, rotation: u64, flip: bool) -> GroupElement {
        GroupElement {
            rotation: rotation % self.p,
            flip,
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(2 * self.p as usize);
        for flip in [false, true] {
            for rotation in 0..self.p {
                out.push(GroupElement { rotation, flip });
            }
        }
        out
    }

    /// (i,s) * (j,t) = (i + (-1)^s j, s xor t)
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let j = if a.flip {
            (self.p - b.rotation) % self.p
        } else {
            b.rotation
        };
        GroupElement {
            rotation: (a.rotation + j) % self.p,
            flip: a.flip ^ b.flip,
        }
    }

    pub fn inverse(&self, a: GroupElement) -> GroupElement {
        if a.flip {
            a // reflections are involutions
        } else {
            GroupElement {
                rotation: (self.p - a.rotation) % self.p,
                flip: false,
            }
        }
    }

    pub fn conjugate(&self, g: GroupElement, by: GroupElement) -> GroupElement {
        self.mul(self.mul(by, g), self.inverse(by))
    }

    /// All p + 3 subgroups: trivial, the p reflection subgroups `<t^j s>`,
    /// the rotation subgroup `<t>`, and D itself.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut out = vec![Subgroup::Trivial];
        for j in 0..self.p {
            out.push(Subgroup::Reflection(j));
        }
        out.push(Subgroup::Rotation);
        out.push(Subgroup::Full);
        out
    }

    /// One representative per conjugacy class of subgroups (all reflection
    /// subgroups are conjugate).
    pub fn subgroup_classes(&self) -> Vec<Subgroup> {
        vec![
            Subgroup::Trivial,
            Subgroup::Reflection(0),
            Subgroup::Rotation,
            Subgroup::Full,
        ]
    }

    pub fn subgroup_elements(&self, h: Subgroup) -> Vec<GroupElement> {
        match h {
            Subgroup::Trivial => vec![self.identity()],
            Subgroup::Reflection(j) => vec![self.identity(), self.element(j, true)],
            Subgroup::Rotation => (0..self.p).map(|i| self.element(i, false)).collect(),
            Subgroup::Full => self.elements(),
        }
    }

    /// A minimal generating set.
    pub fn subgroup_generators(&self, h: Subgroup) -> Vec<GroupElement> {
        match h {
            Subgroup::Trivial => vec![],
            Subgroup::Reflection(j) => vec![self.element(j, true)],
            Subgroup::Rotation => vec![self.tau()],
            Subgroup::Full => vec![self.tau(), self.sigma()],
        }
    }

    pub fn subgroup_order(&self, h: Subgroup) -> u64 {
        match h {
            Subgroup::Trivial => 1,
            Subgroup::Reflection(_) => 2,
            Subgroup::Rotation => self.p,
            Subgroup::Full => 2 * self.p,
        }
    }

    pub fn subgroup_index(&self, h: Subgroup) -> u64 {
        self.order() / self.subgroup_order(h)
    }

    pub fn subgroup_contains(&self, h: Subgroup, g: GroupElement) -> bool {
        match h {
            Subgroup::Trivial => g == self.identity(),
            Subgroup::Reflection(j) => g == self.identity() || g == self.element(j, true),
            Subgroup::Rotation => !g.flip,
            Subgroup::Full => true,
        }
    }

    pub fn conjugate_subgroup(&self, h: Subgroup, by: GroupElement) -> Subgroup {
        match h {
            Subgroup::Trivial => Subgroup::Trivial,
            Subgroup::Rotation => Subgroup::Rotation,
            Subgroup::Full => Subgroup::Full,
            Subgroup::Reflection(j) => {
                let refl = self.conjugate(self.element(j, true), by);
                debug_assert!(refl.flip);
                Subgroup::Reflection(refl.rotation)
            }
        }
    }

    /// Multiset of orbit sizes of C acting by right multiplication on the
    /// right cosets H\D. Sizes are returned sorted and sum to [D:H].
    pub fn orbits_on_cosets(&self, h: Subgroup, c: Subgroup) -> Vec<u64> {
        let elements = self.elements();
        // label each group element with its coset H g
        let h_elems = self.subgroup_elements(h);
        let coset_of = |g: GroupElement| -> GroupElement {
            // canonical representative: lexicographically least element of Hg
            h_elems
                .iter()
                .map(|&x| self.mul(x, g))
                .min_by_key(|e| (e.flip, e.rotation))
                .unwrap()
        };
        let mut reps: Vec<GroupElement> = elements.iter().map(|&g| coset_of(g)).collect();
        reps.sort_by_key(|e| (e.flip, e.rotation));
        reps.dedup();
        // orbits of C on the cosets
        let c_gens = self.subgroup_generators(c);
        let mut seen = vec![false; reps.len()];
        let index_of = |r: GroupElement, reps: &[GroupElement]| -> usize {
            reps.iter().position(|&x| x == r).unwrap()
        };
        let mut sizes = Vec::new();
        for start in 0..reps.len() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut size = 0u64;
            while let Some(i) = stack.pop() {
                size += 1;
                for &g in &c_gens {
                    let next = coset_of(self.mul(reps[i], g));
                    let ni = index_of(next, &reps);
                    if !seen[ni] {
                        seen[ni] = true;
                        stack.push(ni);
                    }
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable();
        sizes
    }

    /// The norm element `N_H = sum of h in H` as a group-algebra element.
    pub fn norm_element(&self, h: Subgroup) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .subgroup_elements(h)
                .into_iter()
                .map(|g| (BigInt::from(1), g))
                .collect(),
        }
    }

    /// Generators `h - 1` of the augmentation ideal `I_H` over a generating
    /// set of H.
    pub fn augmentation_generators(&self, h: Subgroup) -> Vec<AlgebraElement> {
        self.subgroup_generators(h)
            .into_iter()
            .map(|g| AlgebraElement {
                terms: vec![(BigInt::from(1), g), (BigInt::from(-1), self.identity())],
            })
            .collect()
    }
}

/// t^rotation * s^flip
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub rotation: u64,
    pub flip: bool,
}

/// Subgroups of D_2p by type; `Reflection(j)` is `<t^j s>`.
///
/// In the field dictionary, `Reflection(0)` fixes K, `Reflection(2)` fixes
/// the conjugate field K', `Rotation` fixes F, and `Full` fixes the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subgroup {
    Trivial,
    Reflection(u64),
    Rotation,
    Full,
}

impl Subgroup {
    pub fn is_cyclic(&self) -> bool {
        !matches!(self, Subgroup::Full)
    }
}

// JSON form: {"type": "trivial" | "reflection" | "rotation" | "full", "j": n}
// with "j" present only for reflections.
impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            Subgroup::Trivial => map.serialize_entry("type", "trivial")?,
            Subgroup::Reflection(j) => {
                map.serialize_entry("type", "reflection")?;
                map.serialize_entry("j", j)?;
            }
            Subgroup::Rotation => map.serialize_entry("type", "rotation")?,
            Subgroup::Full => map.serialize_entry("type", "full")?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Subgroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "type")]
            kind: String,
            j: Option<u64>,
        }
        let raw = Raw::deserialize(d)?;
        match raw.kind.as_str() {
            "trivial" => Ok(Subgroup::Trivial),
            "reflection" => Ok(Subgroup::Reflection(raw.j.ok_or_else(|| {
                serde::de::Error::custom("reflection subgroup needs a field \"j\"")
            })?)),
            "rotation" => Ok(Subgroup::Rotation),
            "full" => Ok(Subgroup::Full),
            other => Err(serde::de::Error::custom(format!(
                "unknown subgroup type {other:?}"
            ))),
        }
    }
}

/// A formal Z-combination of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub terms: Vec<(BigInt, GroupElement)>,
}

impl AlgebraElement {
    pub fn unit(g: GroupElement) -> Self {
        AlgebraElement {
            terms: vec![(BigInt::from(1), g)],
        }
    }

    pub fn scaled(self, c: i64) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .into_iter()
                .map(|(a, g)| (a * c, g))
                .collect(),
        }
    }
}

/// Integer coefficients on the four subgroup conjugacy classes
/// (trivial, reflection class, rotation, full). The canonical nontrivial
/// relation is `(1, -2, -1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationVector {
    pub c_trivial: i64,
    pub c_reflection: i64,
    pub c_rotation: i64,
    pub c_full: i64,
}

impl RelationVector {
    pub const CANONICAL: RelationVector = RelationVector {
        c_trivial: 1,
        c_reflection: -2,
        c_rotation: -1,
        c_full: 2,
    };

    pub fn coefficient(&self, class: Subgroup) -> i64 {
        match class {
            Subgroup::Trivial => self.c_trivial,
            Subgroup::Reflection(_) => self.c_reflection,
            Subgroup::Rotation => self.c_rotation,
            Subgroup::Full => self.c_full,
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_axioms_exhaustive() {
        for p in [3u64, 5, 7] {
            let d = DihedralGroup::new(p).unwrap();
            let els = d.elements();
            assert_eq!(els.len() as u64, 2 * p);
            for &a in &els {
                assert_eq!(d.mul(a, d.identity()), a);
                assert_eq!(d.mul(d.identity(), a), a);
                assert_eq!(d.mul(a, d.inverse(a)), d.identity());
                for &b in &els {
                    for &c in &els {
                        assert_eq!(d.mul(d.mul(a, b), c), d.mul(a, d.mul(b, c)));
                    }
                }
            }
            // defining relations
            let t = d.tau();
            let s = d.sigma();
            assert_eq!(d.element(0, false), {
                let mut x = d.identity();
                for _ in 0..p {
                    x = d.mul(x, t);
                }
                x
            });
            assert_eq!(d.mul(s, s), d.identity());
            assert_eq!(d.mul(d.mul(s, t), s), d.inverse(t));
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(DihedralGroup::new(3).unwrap().subgroups().len(), 6);
        assert_eq!(DihedralGroup::new(5).unwrap().subgroups().len(), 8);
        assert_eq!(DihedralGroup::new(7).unwrap().subgroup_classes().len(), 4);
    }

    #[test]
    fn invalid_primes_rejected() {
        assert!(DihedralGroup::new(2).is_err());
        assert!(DihedralGroup::new(9).is_err());
        assert!(DihedralGroup::new(1).is_err());
    }

    #[test]
    fn reflection_subgroups_are_conjugate() {
        let d = DihedralGroup::new(5).unwrap();
        let mut seen: Vec<Subgroup> = vec![];
        for &g in &d.elements() {
            seen.push(d.conjugate_subgroup(Subgroup::Reflection(0), g));
        }
        for j in 0..5 {
            assert!(seen.contains(&Subgroup::Reflection(j)));
        }
    }

    #[test]
    fn coset_orbit_examples() {
        let d = DihedralGroup::new(3).unwrap();
        // H = C = <s>: fixed coset plus one 2-orbit
        assert_eq!(
            d.orbits_on_cosets(Subgroup::Reflection(0), Subgroup::Reflection(0)),
            vec![1, 2]
        );
        // single coset for the full subgroup
        assert_eq!(
            d.orbits_on_cosets(Subgroup::Full, Subgroup::Rotation),
            vec![1]
        );
        // right multiplication by a reflection is fixed-point-free on D
        for p in [3u64, 5] {
            let d = DihedralGroup::new(p).unwrap();
            let orbits = d.orbits_on_cosets(Subgroup::Trivial, Subgroup::Reflection(1));
            assert_eq!(orbits.len() as u64, p);
            assert!(orbits.iter().all(|&s| s == 2));
        }
    }

    #[test]
    fn orbit_sizes_sum_to_index_and_conjugation_invariance() {
        for p in [3u64, 5] {
            let d = DihedralGroup::new(p).unwrap();
            for &h in &d.subgroups() {
                for &c in &d.subgroups() {
                    let orbits = d.orbits_on_cosets(h, c);
                    assert_eq!(
                        orbits.iter().sum::<u64>(),
                        d.subgroup_index(h),
                        "H={h:?} C={c:?}"
                    );
                    for &g in &d.elements() {
                        let hc = d.conjugate_subgroup(h, g);
                        assert_eq!(orbits, d.orbits_on_cosets(hc, c), "conjugating H by {g:?}");
                    }
                }
            }
        }
    }
}
