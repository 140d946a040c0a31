use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::int_matrix::IntMatrix;

/// Smith normal form `U * A * V = D` with all four change-of-basis matrices.
///
/// `D` is diagonal with `d1 | d2 | ... >= 0`; `U`, `V` are unimodular and
/// `u_inv`, `v_inv` are their exact inverses.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diag(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diag().iter().filter(|x| !Zero::is_zero(*x)).count()
    }
}

/// Computes the Smith normal form of an integer matrix.
///
/// Pivoting is deterministic: smallest absolute value among the nonzero
/// candidates, ties broken by lowest `(row, col)`.  Small inputs run on
/// `i128`; on overflow the computation restarts over `BigInt`.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    if let Some(small) = to_i128_entries(a) {
        if let Ok(res) = snf_generic::<i128>(small, a.rows(), a.cols()) {
            return res.into_snf_result(a.rows(), a.cols());
        }
    }
    let entries: Vec<BigInt> = (0..a.rows()).flat_map(|i| a.row(i).to_vec()).collect();
    let res = snf_generic::<BigInt>(entries, a.rows(), a.cols())
        .expect("BigInt arithmetic cannot overflow");
    res.into_snf_result(a.rows(), a.cols())
}

fn to_i128_entries(a: &IntMatrix) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        for x in a.row(i) {
            out.push(x.to_i128()?);
        }
    }
    Some(out)
}

/// Integer arithmetic used inside the elimination, with overflow reporting.
trait SnfInt: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// Compare absolute values.
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering;
    fn checked_neg(&self) -> Option<Self>;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    /// Euclidean quotient: `self = q * d + r` with `0 <= r < |d|`.
    fn checked_div_euclid(&self, d: &Self) -> Option<Self>;
    fn is_multiple_of(&self, d: &Self) -> bool;
    fn to_bigint(&self) -> BigInt;
}

impl SnfInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn checked_neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i128::checked_add(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i128::checked_sub(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn checked_div_euclid(&self, d: &Self) -> Option<Self> {
        i128::checked_div_euclid(*self, *d)
    }
    fn is_multiple_of(&self, d: &Self) -> bool {
        *d != 0 && self % d == 0
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.abs().cmp(&other.abs())
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_div_euclid(&self, d: &Self) -> Option<Self> {
        let (mut q, r) = self.div_rem(d);
        if Signed::is_negative(&r) {
            if Signed::is_negative(d) {
                q += 1;
            } else {
                q -= 1;
            }
        }
        Some(q)
    }
    fn is_multiple_of(&self, d: &Self) -> bool {
        !Zero::is_zero(d) && Zero::is_zero(&(self % d))
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug)]
struct Overflow;

struct SnfWork<T> {
    rows: usize,
    cols: usize,
    d: Vec<T>,
    u: Vec<T>,
    u_inv: Vec<T>,
    v: Vec<T>,
    v_inv: Vec<T>,
}

impl<T: SnfInt> SnfWork<T> {
    fn into_snf_result(self, rows: usize, cols: usize) -> SnfResult {
        let conv = |data: &[T], r: usize, c: usize| {
            let mut m = IntMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = data[i * c + j].to_bigint();
                }
            }
            m
        };
        SnfResult {
            d: conv(&self.d, rows, cols),
            u: conv(&self.u, rows, rows),
            u_inv: conv(&self.u_inv, rows, rows),
            v: conv(&self.v, cols, cols),
            v_inv: conv(&self.v_inv, cols, cols),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.d.swap(a * self.cols + j, b * self.cols + j);
        }
        for j in 0..self.rows {
            self.u.swap(a * self.rows + j, b * self.rows + j);
            self.u_inv.swap(j * self.rows + a, j * self.rows + b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.d.swap(i * self.cols + a, i * self.cols + b);
        }
        for i in 0..self.cols {
            self.v.swap(i * self.cols + a, i * self.cols + b);
            self.v_inv.swap(a * self.cols + i, b * self.cols + i);
        }
    }

    /// `row_i -= q * row_k` on `D`; transforms updated to keep `U A V = D`.
    fn row_sub(&mut self, i: usize, k: usize, q: &T, from_col: usize) -> Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for j in from_col..self.cols {
            let t = q.checked_mul(&self.d[k * self.cols + j]).ok_or(Overflow)?;
            self.d[i * self.cols + j] =
                self.d[i * self.cols + j].checked_sub(&t).ok_or(Overflow)?;
        }
        for j in 0..self.rows {
            let t = q.checked_mul(&self.u[k * self.rows + j]).ok_or(Overflow)?;
            self.u[i * self.rows + j] =
                self.u[i * self.rows + j].checked_sub(&t).ok_or(Overflow)?;
            let t = q
                .checked_mul(&self.u_inv[j * self.rows + i])
                .ok_or(Overflow)?;
            self.u_inv[j * self.rows + k] = self.u_inv[j * self.rows + k]
                .checked_add(&t)
                .ok_or(Overflow)?;
        }
        Ok(())
    }

    /// `col_j -= q * col_l` on `D`.
    fn col_sub(&mut self, j: usize, l: usize, q: &T, from_row: usize) -> Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for i in from_row..self.rows {
            let t = q.checked_mul(&self.d[i * self.cols + l]).ok_or(Overflow)?;
            self.d[i * self.cols + j] =
                self.d[i * self.cols + j].checked_sub(&t).ok_or(Overflow)?;
        }
        for i in 0..self.cols {
            let t = q.checked_mul(&self.v[i * self.cols + l]).ok_or(Overflow)?;
            self.v[i * self.cols + j] =
                self.v[i * self.cols + j].checked_sub(&t).ok_or(Overflow)?;
            let t = q
                .checked_mul(&self.v_inv[j * self.cols + i])
                .ok_or(Overflow)?;
            self.v_inv[l * self.cols + i] = self.v_inv[l * self.cols + i]
                .checked_add(&t)
                .ok_or(Overflow)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        for j in 0..self.cols {
            self.d[i * self.cols + j] = self.d[i * self.cols + j].checked_neg().ok_or(Overflow)?;
        }
        for j in 0..self.rows {
            self.u[i * self.rows + j] = self.u[i * self.rows + j].checked_neg().ok_or(Overflow)?;
            self.u_inv[j * self.rows + i] = self.u_inv[j * self.rows + i]
                .checked_neg()
                .ok_or(Overflow)?;
        }
        Ok(())
    }

    fn entry(&self, i: usize, j: usize) -> &T {
        &self.d[i * self.cols + j]
    }

    /// Smallest-|value| nonzero entry in the trailing submatrix, ties by (row, col).
    fn select_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.entry(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.abs_cmp(self.entry(bi, bj)) == std::cmp::Ordering::Less {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

fn snf_generic<T: SnfInt>(
    entries: Vec<T>,
    rows: usize,
    cols: usize,
) -> Result<SnfWork<T>, Overflow> {
    let ident = |n: usize| {
        let mut m = vec![T::zero(); n * n];
        for i in 0..n {
            m[i * n + i] = T::one();
        }
        m
    };
    let mut w = SnfWork {
        rows,
        cols,
        d: entries,
        u: ident(rows),
        u_inv: ident(rows),
        v: ident(cols),
        v_inv: ident(cols),
    };

    let n = rows.min(cols);
    for t in 0..n {
        'pivot: loop {
            let Some((pi, pj)) = w.select_pivot(t) else {
                return Ok(w);
            };
            if pi != t {
                w.swap_rows(t, pi);
            }
            if pj != t {
                w.swap_cols(t, pj);
            }

            let mut clean = true;
            for i in t + 1..w.rows {
                if !w.entry(i, t).is_zero() {
                    let q = w
                        .entry(i, t)
                        .checked_div_euclid(w.entry(t, t))
                        .ok_or(Overflow)?;
                    w.row_sub(i, t, &q, t)?;
                    if !w.entry(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            for j in t + 1..w.cols {
                if !w.entry(t, j).is_zero() {
                    let q = w
                        .entry(t, j)
                        .checked_div_euclid(w.entry(t, t))
                        .ok_or(Overflow)?;
                    w.col_sub(j, t, &q, t)?;
                    if !w.entry(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }

            // Row and column are clear; force the pivot to divide the rest.
            let pivot = w.entry(t, t).clone();
            for i in t + 1..w.rows {
                for j in t + 1..w.cols {
                    if !w.entry(i, j).is_multiple_of(&pivot) {
                        let one = T::one();
                        let minus_one = one.checked_neg().ok_or(Overflow)?;
                        w.col_sub(t, j, &minus_one, t)?; // col_t += col_j
                        continue 'pivot;
                    }
                }
            }
            if w.entry(t, t).is_negative() {
                w.negate_row(t)?;
            }
            break;
        }
    }
    Ok(w)
}
