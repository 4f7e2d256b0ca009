//! Finitely generated abelian groups in invariant-factor normal form, and
//! the extended naturals used for subgroup indices.

use std::fmt;

use num::{BigInt, BigUint, Integer, One, Zero};
use serde::{Deserialize, Serialize};

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_t`
/// with `d_1 | d_2 | ... | d_t` and every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: vec![],
        }
    }

    /// Build from a list of moduli (0 meaning a free factor, 1 meaning a
    /// trivial factor). The result is renormalized to a divisibility chain.
    pub fn from_moduli(moduli: &[BigInt]) -> Self {
        let mut free = 0usize;
        let mut tors: Vec<BigUint> = Vec::new();
        for m in moduli {
            let m = m.magnitude().clone();
            if m.is_zero() {
                free += 1;
            } else if !m.is_one() {
                tors.push(m);
            }
        }
        let mut g = FinAbGroup {
            free_rank: free,
            torsion: tors,
        };
        g.normalize();
        g
    }

    /// Renormalize `torsion` into a divisibility chain via prime-power
    /// decomposition.
    fn normalize(&mut self) {
        if self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
            return; // already a chain
        }
        // prime -> exponents, one per cyclic factor containing that prime
        let mut primes: std::collections::BTreeMap<BigUint, Vec<u32>> = Default::default();
        for d in &self.torsion {
            for (p, e) in factorize(d) {
                primes.entry(p).or_default().push(e);
            }
        }
        let max_len = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = vec![BigUint::one(); max_len];
        for (p, mut exps) in primes {
            exps.sort_unstable_by(|a, b| b.cmp(a)); // descending
            for (slot, e) in exps.iter().enumerate() {
                // largest exponents go to the tail of the chain
                let idx = max_len - 1 - slot;
                chain[idx] *= p.pow(*e);
            }
        }
        self.torsion = chain.into_iter().filter(|d| !d.is_one()).collect();
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> ExtNat {
        if self.free_rank > 0 {
            ExtNat::Infinite
        } else {
            ExtNat::Finite(self.torsion.iter().product())
        }
    }

    /// Exponent of the torsion part (1 for torsion-free groups).
    pub fn exponent(&self) -> BigUint {
        self.torsion.last().cloned().unwrap_or_else(BigUint::one)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut g = FinAbGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: self
                .torsion
                .iter()
                .chain(other.torsion.iter())
                .cloned()
                .collect(),
        };
        g.normalize();
        g
    }

    /// The `ell`-primary part of the torsion, with the free rank kept.
    pub fn localize(&self, ell: u64) -> Self {
        let ell = BigUint::from(ell);
        let torsion: Vec<BigUint> = self
            .torsion
            .iter()
            .map(|d| primary_part(d, &ell))
            .filter(|d| !d.is_one())
            .collect();
        FinAbGroup {
            free_rank: self.free_rank,
            torsion,
        }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `ell^(v_ell(d))`.
pub fn primary_part(d: &BigUint, ell: &BigUint) -> BigUint {
    let mut out = BigUint::one();
    let mut rest = d.clone();
    while rest.is_multiple_of(ell) && !rest.is_zero() {
        rest /= ell;
        out *= ell;
    }
    out
}

/// Trial-division factorization; torsion moduli in this crate are small.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut e = 0u32;
            while n.is_multiple_of(&p) {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// A natural number or infinity; subgroup indices live here.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtNat {
    Finite(BigUint),
    Infinite,
}

impl ExtNat {
    pub fn one() -> Self {
        ExtNat::Finite(BigUint::one())
    }

    pub fn from_u64(v: u64) -> Self {
        ExtNat::Finite(BigUint::from(v))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExtNat::Finite(v) if v.is_one())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinite => None,
        }
    }

    pub fn mul(&self, other: &ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            _ => ExtNat::Infinite,
        }
    }

    /// The `ell`-primary part (infinite stays infinite).
    pub fn localize(&self, ell: u64) -> ExtNat {
        match self {
            ExtNat::Finite(v) => ExtNat::Finite(primary_part(v, &BigUint::from(ell))),
            ExtNat::Infinite => ExtNat::Infinite,
        }
    }
}

impl fmt::Debug for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => write!(f, "infinite"),
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
