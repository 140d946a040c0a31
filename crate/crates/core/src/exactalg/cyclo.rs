use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element of the `m`-th cyclotomic field, as a rational-coefficient
/// polynomial in `ζ_m` reduced modulo the `m`-th cyclotomic polynomial.
///
/// The coefficient vector always has length `φ(m)`.  Rationals embed with
/// conductor 1.  Values at different conductors compare equal exactly when
/// they agree after lifting to the least common conductor.
#[derive(Debug, Clone)]
pub struct CycloRat {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Monic integer coefficients of the m-th cyclotomic polynomial, low degree
/// first, computed as (x^m - 1) / Π_{d|m, d<m} Φ_d and memoized.
fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        let mut num = vec![BigInt::zero(); (m + 1) as usize];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut acc = num;
        for d in 1..m {
            if m.is_multiple_of(d) {
                acc = poly_exact_div(&acc, &cyclotomic_poly(d));
            }
        }
        acc
    };
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

/// Exact division of integer polynomials with monic divisor.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// Reduces a rational polynomial modulo Φ_m, returning exactly φ(m) coeffs.
fn reduce_mod_cyclotomic(mut poly: Vec<BigRational>, m: u64) -> Vec<BigRational> {
    let modulus = cyclotomic_poly(m);
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let k = poly.len() - 1;
        let c = poly[k].clone();
        if !c.is_zero() {
            for (i, d) in modulus.iter().enumerate() {
                let idx = k - deg + i;
                let t = &c * BigRational::from(d.clone());
                poly[idx] -= t;
            }
        }
        poly.pop();
    }
    poly.resize(deg, BigRational::zero());
    poly
}

impl CycloRat {
    pub fn zero() -> Self {
        CycloRat {
            conductor: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        CycloRat {
            conductor: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloRat {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        CycloRat::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `ζ_m^k` at conductor `m` (negative exponents allowed).
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        assert!(m >= 1);
        let e = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        CycloRat {
            conductor: m,
            coeffs: reduce_mod_cyclotomic(poly, m),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element at a larger conductor (`self.conductor | m`).
    pub fn lift_to(&self, m: u64) -> CycloRat {
        assert!(
            m.is_multiple_of(self.conductor),
            "conductor must divide the target"
        );
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let deg = phi(m) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        let mut coeffs = reduce_mod_cyclotomic(poly, m);
        coeffs.resize(deg, BigRational::zero());
        CycloRat {
            conductor: m,
            coeffs,
        }
    }

    fn common(&self, other: &CycloRat) -> (CycloRat, CycloRat) {
        let m = self.conductor.lcm(&other.conductor);
        (self.lift_to(m), other.lift_to(m))
    }

    pub fn add(&self, other: &CycloRat) -> CycloRat {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloRat {
            conductor: a.conductor,
            coeffs,
        }
    }

    pub fn sub(&self, other: &CycloRat) -> CycloRat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycloRat {
        CycloRat {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycloRat) -> CycloRat {
        let (a, b) = self.common(other);
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let t = x * y;
                    poly[i + j] += t;
                }
            }
        }
        CycloRat {
            conductor: a.conductor,
            coeffs: reduce_mod_cyclotomic(poly, a.conductor),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Φ_m, which is irreducible over Q.
    pub fn inverse(&self) -> Option<CycloRat> {
        if self.is_zero() {
            return None;
        }
        let m = self.conductor;
        let modulus: Vec<BigRational> = cyclotomic_poly(m)
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        // Extended gcd over Q[x]: r0 = Φ, r1 = self.
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut t0 = vec![BigRational::zero()];
        let mut t1 = vec![BigRational::one()];
        while !is_zero_poly(&r1) {
            let (q, r) = poly_div_rem(&r0, &r1);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 = gcd (a nonzero constant, since Φ_m is irreducible).
        debug_assert_eq!(trim(r0.clone()).len(), 1);
        let c = r0[0].clone();
        let inv_coeffs: Vec<BigRational> = t0.iter().map(|x| x / &c).collect();
        Some(CycloRat {
            conductor: m,
            coeffs: reduce_mod_cyclotomic(inv_coeffs, m),
        })
    }

    pub fn pow(&self, e: i64) -> CycloRat {
        if e == 0 {
            return CycloRat::one();
        }
        let base = if e < 0 {
            self.inverse().expect("zero has no negative powers")
        } else {
            self.clone()
        };
        let mut acc = CycloRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if is_zero_poly(a) || is_zero_poly(b) {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    trim(out)
}

fn poly_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut rem = trim(a.to_vec());
    if rem.len() <= db && !(rem.len() == db + 1) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(db)];
    while rem.len() > db || (rem.len() == db + 1) {
        let dr = rem.len() - 1;
        if dr < db || is_zero_poly(&rem) {
            break;
        }
        let c = rem.last().unwrap() / &lead;
        quot[dr - db] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            rem[dr - db + i] -= t;
        }
        rem = trim(rem);
        if dr == db {
            break;
        }
    }
    (trim(quot), trim(rem))
}

impl PartialEq for CycloRat {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloRat {}

impl std::fmt::Display for CycloRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*z{}^{}", c, self.conductor, i)?;
            }
        }
        Ok(())
    }
}

/// Dense matrix over `CycloRat`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloRat>,
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            data: vec![CycloRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CycloMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = CycloRat::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = CycloMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a.mul(b);
                        out[(i, j)] = out[(i, j)].add(&t);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &CycloRat) -> CycloMatrix {
        let data = self.data.iter().map(|x| x.mul(s)).collect();
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product in row-major block order.
    pub fn kron(&self, other: &CycloMatrix) -> CycloMatrix {
        let mut out = CycloMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a.mul(&other[(k, l)]);
                    }
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<CycloMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CycloMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                    let tmp = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let p = a[(col, col)].inverse()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].mul(&p);
                inv[(col, j)] = inv[(col, j)].mul(&p);
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let t = f.mul(&a[(col, j)]);
                    a[(i, j)] = a[(i, j)].sub(&t);
                    let t = f.mul(&inv[(col, j)]);
                    inv[(i, j)] = inv[(i, j)].sub(&t);
                }
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for CycloMatrix {
    type Output = CycloRat;
    fn index(&self, (i, j): (usize, usize)) -> &CycloRat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CycloMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycloRat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let to_i64 =
            |p: Vec<BigInt>| -> Vec<i64> { p.iter().map(|c| i64::try_from(c).unwrap()).collect() };
        assert_eq!(to_i64(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(2)), vec![1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(3)), vec![1, 1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_two_is_minus_one() {
        assert_eq!(CycloRat::root_of_unity(2, 1), CycloRat::from_int(-1));
    }

    #[test]
    fn zeta_three_satisfies_its_polynomial() {
        let z = CycloRat::root_of_unity(3, 1);
        let sum = z.mul(&z).add(&z).add(&CycloRat::one());
        assert!(sum.is_zero());
    }

    #[test]
    fn roots_have_exact_order() {
        for m in [2u64, 3, 4, 5, 6, 12] {
            let z = CycloRat::root_of_unity(m, 1);
            let mut acc = CycloRat::one();
            for k in 1..=m {
                acc = acc.mul(&z);
                if k < m {
                    assert_ne!(acc, CycloRat::one(), "ζ_{} has order < {}", m, m);
                }
            }
            assert_eq!(acc, CycloRat::one());
        }
    }

    #[test]
    fn cross_conductor_equality() {
        // ζ_6^3 = -1 must equal the rational -1 at conductor 1.
        let z6 = CycloRat::root_of_unity(6, 3);
        assert_eq!(z6, CycloRat::from_int(-1));
        // ζ_6^2 = ζ_3.
        assert_eq!(CycloRat::root_of_unity(6, 2), CycloRat::root_of_unity(3, 1));
    }

    #[test]
    fn field_axioms_on_samples() {
        let samples = [
            CycloRat::from_int(2),
            CycloRat::root_of_unity(3, 1),
            CycloRat::root_of_unity(4, 1),
            CycloRat::root_of_unity(6, 5).add(&CycloRat::from_int(1)),
            CycloRat::root_of_unity(12, 7),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                for c in &samples {
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                    assert_eq!(a.add(&b.add(c)), a.add(b).add(c));
                    assert_eq!(a.mul(&b.mul(c)), a.mul(b).mul(c));
                }
                if !b.is_zero() {
                    let inv = b.inverse().unwrap();
                    assert_eq!(b.mul(&inv), CycloRat::one());
                    assert_eq!(a.mul(b).mul(&inv), *a);
                }
            }
        }
    }

    #[test]
    fn negative_powers() {
        let z = CycloRat::root_of_unity(5, 1);
        assert_eq!(z.pow(-1), CycloRat::root_of_unity(5, 4));
        assert_eq!(z.pow(-2).mul(&z.pow(2)), CycloRat::one());
        let two = CycloRat::from_int(2);
        assert_eq!(
            two.pow(-3),
            CycloRat::from_rational(BigRational::new(BigInt::one(), BigInt::from(8)))
        );
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let mut m = CycloMatrix::zeros(2, 2);
        m[(0, 0)] = CycloRat::one();
        m[(0, 1)] = CycloRat::one();
        m[(1, 0)] = CycloRat::one();
        m[(1, 1)] = CycloRat::from_int(-1);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), CycloMatrix::identity(2));
        let singular = CycloMatrix::zeros(2, 2);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kron_order() {
        let mut a = CycloMatrix::zeros(1, 2);
        a[(0, 0)] = CycloRat::from_int(1);
        a[(0, 1)] = CycloRat::from_int(2);
        let mut b = CycloMatrix::zeros(1, 2);
        b[(0, 0)] = CycloRat::from_int(3);
        b[(0, 1)] = CycloRat::from_int(5);
        let k = a.kron(&b);
        let vals: Vec<i64> = (0..4)
            .map(|j| i64::try_from(k[(0, j)].as_rational().unwrap().to_integer()).unwrap())
            .collect();
        assert_eq!(vals, vec![3, 5, 6, 10]);
    }
}
