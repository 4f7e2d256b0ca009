//! Exact rational matrices, just enough for Gram determinants.

use num::{BigInt, BigRational, One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Dense rational matrix (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| {
            BigRational::from_integer(m[(i, j)].clone())
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut s = BigRational::zero();
            for k in 0..self.cols {
                s += self.get(i, k) * other.get(k, j);
            }
            s
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Exact determinant: clear denominators row by row, then integer
    /// Bareiss on the scaled matrix.
    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigRational::one();
        }
        let mut scale = BigInt::one();
        let mut int = IntMatrix::zeros(n, n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = num::Integer::lcm(&lcm, self.get(i, j).denom());
            }
            for j in 0..n {
                let e = self.get(i, j) * BigRational::from_integer(lcm.clone());
                debug_assert!(e.denom().is_one());
                int[(i, j)] = e.to_integer();
            }
            scale *= &lcm;
        }
        BigRational::new(int.determinant(), scale)
    }
}

/// Determinant of the Gram matrix `(b_i^T P b_j)` of integer basis vectors
/// under a symmetric rational pairing `P`. The empty basis yields 1.
pub fn gram_determinant(basis: &IntMatrix, pairing: &RatMatrix) -> Result<BigRational> {
    if !pairing.is_symmetric() {
        return Err(Error::NonSymmetricPairing);
    }
    if basis.cols() == 0 {
        return Ok(BigRational::one());
    }
    if basis.rows() != pairing.rows() {
        return Err(Error::Shape(format!(
            "basis vectors of length {} against a {}x{} pairing",
            basis.rows(),
            pairing.rows(),
            pairing.cols()
        )));
    }
    let b = RatMatrix::from_int(basis);
    let gram = b.transpose().mul(&pairing.mul(&b));
    Ok(gram.determinant())
}

/// Parse "a/b" or "a" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad())?;
            let d: BigInt = den.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Write `q` as `sign * base^k` if possible.
pub fn as_prime_power(q: &BigRational, base: u64) -> Option<i64> {
    if q.is_zero() || q.is_negative() {
        return None;
    }
    let base = BigInt::from(base);
    if q.numer().is_one() {
        // 1/base^k
        let mut d = q.denom().clone();
        let mut k: i64 = 0;
        while !d.is_one() {
            let (quo, rem) = num::Integer::div_rem(&d, &base);
            if !rem.is_zero() {
                return None;
            }
            d = quo;
            k -= 1;
        }
        Some(k)
    } else if q.denom().is_one() {
        let mut n = q.numer().clone();
        let mut k: i64 = 0;
        while !n.is_one() {
            let (quo, rem) = num::Integer::div_rem(&n, &base);
            if !rem.is_zero() {
                return None;
            }
            n = quo;
            k += 1;
        }
        Some(k)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_determinant() {
        let mut m = RatMatrix::zeros(2, 2);
        m.set(0, 0, q(1, 2));
        m.set(1, 1, q(2, 3));
        assert_eq!(m.determinant(), q(1, 3));
        assert_eq!(RatMatrix::zeros(0, 0).determinant(), q(1, 1));
    }

    #[test]
    fn gram_examples() {
        // empty basis -> 1
        let empty = IntMatrix::zeros(3, 0);
        let p = RatMatrix::identity(3);
        assert_eq!(gram_determinant(&empty, &p).unwrap(), q(1, 1));
        // standard basis, identity pairing -> 1
        let basis = IntMatrix::identity(3);
        assert_eq!(gram_determinant(&basis, &p).unwrap(), q(1, 1));
        // 2Z inside <x,y> = xy -> 4
        let basis = IntMatrix::from_i64(1, 1, &[2]);
        let p1 = RatMatrix::identity(1);
        assert_eq!(gram_determinant(&basis, &p1).unwrap(), q(4, 1));
    }

    #[test]
    fn non_symmetric_pairing_rejected() {
        let mut p = RatMatrix::identity(2);
        p.set(0, 1, q(1, 1));
        let basis = IntMatrix::identity(2);
        assert!(gram_determinant(&basis, &p).is_err());
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(as_prime_power(&q(27, 1), 3), Some(3));
        assert_eq!(as_prime_power(&q(1, 9), 3), Some(-2));
        assert_eq!(as_prime_power(&q(1, 1), 3), Some(0));
        assert_eq!(as_prime_power(&q(6, 1), 3), None);
        assert_eq!(as_prime_power(&q(2, 3), 3), None);
    }

    #[test]
    fn parse_round_trip() {
        let v = parse_rational("-3/4").unwrap();
        assert_eq!(rational_to_string(&v), "-3/4");
        let w = parse_rational("17").unwrap();
        assert_eq!(rational_to_string(&w), "17");
        assert!(parse_rational("1/0").is_err());
    }
}
