//! Smith normal form over Z with transformation matrices.
//!
//! The reduction uses a fixed pivot rule (smallest absolute value, ties by
//! row-major position) and symmetric remainders, so the output is a
//! deterministic function of the input. Entries that fit comfortably in
//! `i128` run on a checked machine-integer path; any overflow restarts the
//! whole computation on `BigInt`, with the identical pivot rule, so both
//! paths produce the same decomposition.

use num::{BigInt, Integer, One, Signed, Zero};

use super::matrix::IntMatrix;

/// Which transformation matrices to accumulate. `U*M*V = D` with
/// `uinv*U = I`, `V*vinv = I`.
#[derive(Clone, Copy, Default)]
pub struct Need {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
    pub vinv: bool,
}

impl Need {
    pub const NONE: Need = Need {
        u: false,
        uinv: false,
        v: false,
        vinv: false,
    };
    pub const ALL: Need = Need {
        u: true,
        uinv: true,
        v: true,
        vinv: true,
    };
    pub const U: Need = Need {
        u: true,
        uinv: false,
        v: false,
        vinv: false,
    };
    pub const V: Need = Need {
        u: false,
        uinv: false,
        v: true,
        vinv: false,
    };
    pub const UINV: Need = Need {
        u: false,
        uinv: true,
        v: false,
        vinv: false,
    };
    pub const U_AND_V: Need = Need {
        u: true,
        uinv: false,
        v: true,
        vinv: false,
    };
    pub const UINV_AND_U: Need = Need {
        u: true,
        uinv: true,
        v: false,
        vinv: false,
    };
}

/// Result of a Smith reduction. `d` holds the full diagonal of length
/// `min(rows, cols)` including trailing zeros; `rank` counts the nonzero
/// entries. Transformation matrices are present when requested.
pub struct Smith {
    pub d: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub uinv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub vinv: Option<IntMatrix>,
}

impl Smith {
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, di) in self.d.iter().enumerate() {
            m[(i, i)] = di.clone();
        }
        m
    }
}

pub fn smith(m: &IntMatrix, need: Need) -> Smith {
    if let Some(fast) = try_i128(m, need) {
        return fast;
    }
    let mut work: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect())
        .collect();
    run(&mut work, m.rows(), m.cols(), need)
        .expect("BigInt arithmetic cannot overflow")
}

fn try_i128(m: &IntMatrix, need: Need) -> Option<Smith> {
    // Leave ample headroom below i128::MAX for intermediate products.
    let bound = BigInt::from(i64::MAX);
    if m.max_abs() > bound {
        return None;
    }
    let mut work: Vec<Vec<i128>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| i128::try_from(&m[(i, j)]).unwrap())
                .collect()
        })
        .collect();
    run(&mut work, m.rows(), m.cols(), need)
}

/// Scalar operations used by the elimination, all fallible so the i128 path
/// can signal overflow.
pub trait SnfScalar: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero_val(&self) -> bool;
    fn checked_neg(&self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self>; // self - q*b
    fn checked_add_assign(&mut self, other: &Self) -> Option<()>;
    /// Quotient q with self - q*pivot in (-|pivot|/2, |pivot|/2].
    fn sym_quot(&self, pivot: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn is_negative_val(&self) -> bool;
    fn to_bigint_val(&self) -> BigInt;
}

impl SnfScalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero_val(&self) -> bool {
        *self == 0
    }
    fn checked_neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(i128::checked_mul(*q, *b)?)
    }
    fn checked_add_assign(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }
    fn sym_quot(&self, pivot: &Self) -> Option<Self> {
        let m = pivot.checked_abs()?;
        let mut r = self.rem_euclid(m);
        if 2 * r > m {
            r -= m;
        }
        Some((self - r) / pivot)
    }
    fn divides(&self, other: &Self) -> bool {
        *self != 0 && other % self == 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn is_negative_val(&self) -> bool {
        *self < 0
    }
    fn to_bigint_val(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero_val(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn checked_add_assign(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }
    fn sym_quot(&self, pivot: &Self) -> Option<Self> {
        let m = pivot.abs();
        let mut r = self.mod_floor(&m);
        if &r * 2 > m {
            r -= &m;
        }
        Some((self - r) / pivot)
    }
    fn divides(&self, other: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&other.mod_floor(self))
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn is_negative_val(&self) -> bool {
        self.is_negative()
    }
    fn to_bigint_val(&self) -> BigInt {
        self.clone()
    }
}

/// Reduce `x` into the symmetric range modulo `m > 0`.
pub fn sym_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let mut r = x.mod_floor(m);
    if &r * 2 > *m {
        r -= m;
    }
    r
}

struct Tracks<T> {
    u: Option<Vec<Vec<T>>>,
    uinv: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    vinv: Option<Vec<Vec<T>>>,
}

fn ident<T: SnfScalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

fn run<T: SnfScalar>(a: &mut Vec<Vec<T>>, rows: usize, cols: usize, need: Need) -> Option<Smith> {
    let mut t = Tracks {
        u: need.u.then(|| ident::<T>(rows)),
        uinv: need.uinv.then(|| ident::<T>(rows)),
        v: need.v.then(|| ident::<T>(cols)),
        vinv: need.vinv.then(|| ident::<T>(cols)),
    };
    let mn = rows.min(cols);
    for k in 0..mn {
        if find_and_place_pivot(a, rows, cols, k, &mut t).is_none() {
            break; // remaining submatrix is zero
        }
        loop {
            // clear column k by row operations
            let mut dirty = false;
            for i in k + 1..rows {
                if !a[i][k].is_zero_val() {
                    let q = a[i][k].sym_quot(&a[k][k])?;
                    if !q.is_zero_val() {
                        row_axpy_neg(a, cols, i, k, &q, &mut t)?;
                    }
                    if !a[i][k].is_zero_val() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let _ = find_and_place_pivot(a, rows, cols, k, &mut t);
                continue;
            }
            // clear row k by column operations
            for j in k + 1..cols {
                if !a[k][j].is_zero_val() {
                    let q = a[k][j].sym_quot(&a[k][k])?;
                    if !q.is_zero_val() {
                        col_axpy_neg(a, rows, j, k, &q, &mut t)?;
                    }
                    if !a[k][j].is_zero_val() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let _ = find_and_place_pivot(a, rows, cols, k, &mut t);
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            if let Some(i) = first_nondivisible_row(a, rows, cols, k) {
                row_add(a, cols, k, i, &mut t)?;
                continue;
            }
            break;
        }
        if a[k][k].is_negative_val() {
            negate_row(a, cols, k, &mut t)?;
        }
    }
    let d: Vec<BigInt> = (0..mn).map(|i| a[i][i].to_bigint_val()).collect();
    let rank = d.iter().take_while(|x| !Zero::is_zero(*x)).count();
    Some(Smith {
        d,
        rank,
        u: t.u.map(to_matrix),
        uinv: t.uinv.map(to_matrix),
        v: t.v.map(to_matrix),
        vinv: t.vinv.map(to_matrix),
    })
}

fn to_matrix<T: SnfScalar>(m: Vec<Vec<T>>) -> IntMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    IntMatrix::from_fn(rows, cols, |i, j| m[i][j].to_bigint_val())
}

/// Pick the minimum |entry| over the k.. submatrix (ties: row-major order)
/// and move it to (k, k). Returns None when the submatrix is zero.
fn find_and_place_pivot<T: SnfScalar>(
    a: &mut [Vec<T>],
    rows: usize,
    cols: usize,
    k: usize,
    t: &mut Tracks<T>,
) -> Option<()> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..rows {
        for j in k..cols {
            if a[i][j].is_zero_val() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if a[i][j].abs_lt(&a[bi][bj]) {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    let (pi, pj) = best?;
    if pi != k {
        a.swap(pi, k);
        if let Some(u) = &mut t.u {
            u.swap(pi, k);
        }
        if let Some(uinv) = &mut t.uinv {
            swap_cols(uinv, pi, k);
        }
    }
    if pj != k {
        for row in a.iter_mut() {
            row.swap(pj, k);
        }
        if let Some(v) = &mut t.v {
            swap_cols(v, pj, k);
        }
        if let Some(vinv) = &mut t.vinv {
            vinv.swap(pj, k);
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row_i -= q * row_k  (on `a` and U; inverse op on Uinv columns)
fn row_axpy_neg<T: SnfScalar>(
    a: &mut [Vec<T>],
    cols: usize,
    i: usize,
    k: usize,
    q: &T,
    t: &mut Tracks<T>,
) -> Option<()> {
    for j in 0..cols {
        let nv = a[i][j].checked_mul_sub(q, &a[k][j])?;
        a[i][j] = nv;
    }
    if let Some(u) = &mut t.u {
        for j in 0..u[0].len() {
            let nv = u[i][j].checked_mul_sub(q, &u[k][j])?;
            u[i][j] = nv;
        }
    }
    if let Some(uinv) = &mut t.uinv {
        // Uinv := Uinv * (I + q E_{ik}): col_k += q * col_i
        for r in 0..uinv.len() {
            let qt = q.checked_mul(&uinv[r][i])?;
            uinv[r][k].checked_add_assign(&qt)?;
        }
    }
    Some(())
}

/// col_j -= q * col_k  (on `a` and V; inverse op on Vinv rows)
fn col_axpy_neg<T: SnfScalar>(
    a: &mut [Vec<T>],
    rows: usize,
    j: usize,
    k: usize,
    q: &T,
    t: &mut Tracks<T>,
) -> Option<()> {
    for i in 0..rows {
        let nv = a[i][j].checked_mul_sub(q, &a[i][k])?;
        a[i][j] = nv;
    }
    if let Some(v) = &mut t.v {
        for r in 0..v.len() {
            let nv = v[r][j].checked_mul_sub(q, &v[r][k])?;
            v[r][j] = nv;
        }
    }
    if let Some(vinv) = &mut t.vinv {
        // Vinv := (I + q E_{kj}) * Vinv: row_k += q * row_j
        for c in 0..vinv[0].len() {
            let qt = q.checked_mul(&vinv[j][c])?;
            vinv[k][c].checked_add_assign(&qt)?;
        }
    }
    Some(())
}

/// row_k += row_i (divisibility fix-up)
fn row_add<T: SnfScalar>(
    a: &mut [Vec<T>],
    cols: usize,
    k: usize,
    i: usize,
    t: &mut Tracks<T>,
) -> Option<()> {
    let minus_one = T::one().checked_neg()?;
    for j in 0..cols {
        let nv = a[k][j].checked_mul_sub(&minus_one, &a[i][j])?;
        a[k][j] = nv;
    }
    if let Some(u) = &mut t.u {
        for j in 0..u[0].len() {
            let nv = u[k][j].checked_mul_sub(&minus_one, &u[i][j])?;
            u[k][j] = nv;
        }
    }
    if let Some(uinv) = &mut t.uinv {
        // inverse: col_i -= col_k
        for r in 0..uinv.len() {
            let nv = uinv[r][i].checked_mul_sub(&T::one(), &uinv[r][k])?;
            uinv[r][i] = nv;
        }
    }
    Some(())
}

fn negate_row<T: SnfScalar>(
    a: &mut [Vec<T>],
    cols: usize,
    k: usize,
    t: &mut Tracks<T>,
) -> Option<()> {
    for j in 0..cols {
        a[k][j] = a[k][j].checked_neg()?;
    }
    if let Some(u) = &mut t.u {
        for j in 0..u[0].len() {
            u[k][j] = u[k][j].checked_neg()?;
        }
    }
    if let Some(uinv) = &mut t.uinv {
        for r in 0..uinv.len() {
            uinv[r][k] = uinv[r][k].checked_neg()?;
        }
    }
    Some(())
}

fn first_nondivisible_row<T: SnfScalar>(
    a: &[Vec<T>],
    rows: usize,
    cols: usize,
    k: usize,
) -> Option<usize> {
    let pivot = a[k][k].clone();
    for i in k + 1..rows {
        for j in k + 1..cols {
            if !a[i][j].is_zero_val() && !pivot.divides(&a[i][j]) {
                return Some(i);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_full(m: &IntMatrix) {
        let s = smith(m, Need::ALL);
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        let d = s.diagonal_matrix(m.rows(), m.cols());
        assert_eq!(u.mul(m).mul(v), d, "U M V != D");
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
        assert_eq!(
            s.uinv.as_ref().unwrap().mul(u),
            IntMatrix::identity(m.rows())
        );
        assert_eq!(
            v.mul(s.vinv.as_ref().unwrap()),
            IntMatrix::identity(m.cols())
        );
        // divisibility chain
        for w in s.d.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "chain broken: {:?}", s.d);
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn empty_matrix() {
        let s = smith(&IntMatrix::zeros(0, 0), Need::ALL);
        assert!(s.d.is_empty());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn diag_4_6_becomes_2_12() {
        let m = IntMatrix::from_i64(2, 2, &[4, 0, 0, 6]);
        let s = smith(&m, Need::ALL);
        assert_eq!(s.d, vec![BigInt::from(2), BigInt::from(12)]);
        check_full(&m);
    }

    #[test]
    fn already_smith_is_fixed() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 2]);
        let s = smith(&m, Need::NONE);
        assert_eq!(s.d, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn rectangular_and_rank() {
        let m = IntMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        let s = smith(&m, Need::ALL);
        assert_eq!(s.rank, 1);
        check_full(&m);
    }

    #[test]
    fn random_like_batch() {
        // deterministic pseudo-random fill, exercises fix-up paths
        let mut x: i64 = 7;
        let mut next = move || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 33) % 10
        };
        for rows in 1..5usize {
            for cols in 1..5usize {
                let entries: Vec<i64> = (0..rows * cols).map(|_| next()).collect();
                check_full(&IntMatrix::from_i64(rows, cols, &entries));
            }
        }
    }

    #[test]
    fn bigint_fallback_matches_shape() {
        let huge = BigInt::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let mut m = IntMatrix::identity(2);
        m[(0, 1)] = huge;
        check_full(&m);
    }
}
