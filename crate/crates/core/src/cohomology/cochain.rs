use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{FinAbGroup, IntMatrix};
use crate::simplicial::{sort_sign, SimComplex};

/// A pair `(K, L)` with `L` a subcomplex sharing K's vertex IDs (`L` empty
/// for absolute cohomology).  Relative cochains are K-cochains vanishing
/// on L.
#[derive(Debug, Clone)]
pub struct Pair {
    pub complex: Arc<SimComplex>,
    pub sub: Option<Arc<SimComplex>>,
}

impl Pair {
    pub fn absolute(complex: Arc<SimComplex>) -> Pair {
        Pair { complex, sub: None }
    }

    pub fn relative(complex: Arc<SimComplex>, sub: Arc<SimComplex>) -> Result<Pair> {
        if !sub.is_empty() && !sub.is_subcomplex_of(&complex) {
            return Err(Error::InvalidComplex("L is not a subcomplex of K".into()));
        }
        let sub = if sub.is_empty() { None } else { Some(sub) };
        Ok(Pair { complex, sub })
    }

    pub fn cache_key(&self) -> (u64, u64) {
        (
            self.complex.cache_id(),
            self.sub.as_ref().map_or(0, |s| s.cache_id()),
        )
    }

    pub fn is_relative(&self) -> bool {
        self.sub.is_some()
    }

    /// True when the k-simplex at `idx` lies in the subcomplex.
    pub fn in_sub(&self, k: i64, idx: usize) -> bool {
        match &self.sub {
            None => false,
            Some(l) => l.contains_simplex(&self.complex.simplices(k)[idx]),
        }
    }

    /// Indices of the k-simplices outside the subcomplex.
    pub fn out_indices(&self, k: i64) -> Vec<usize> {
        (0..self.complex.num_simplices(k))
            .filter(|&i| !self.in_sub(k, i))
            .collect()
    }

    /// Coboundary matrix restricted to out-columns and out-rows:
    /// `(δc)(σ) = Σ_i (-1)^i c(σ \ v_i)`.
    pub fn coboundary(&self, k: i64) -> IntMatrix {
        let complex = &self.complex;
        let rows_idx = self.out_indices(k + 1);
        let cols_idx = self.out_indices(k);
        let col_pos: BTreeMap<usize, usize> =
            cols_idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut m = IntMatrix::zeros(rows_idx.len(), cols_idx.len());
        if k < 0 || k + 1 > complex.dim() {
            return m;
        }
        for (rp, &ri) in rows_idx.iter().enumerate() {
            let simplex = &complex.simplices(k + 1)[ri];
            for omit in 0..simplex.len() {
                let face: Vec<usize> = simplex
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, v)| *v)
                    .collect();
                let fi = complex.simplex_index(k, &face).expect("face closure");
                if let Some(&cp) = col_pos.get(&fi) {
                    let sign = if omit % 2 == 0 { 1 } else { -1 };
                    m[(rp, cp)] += BigInt::from(sign);
                }
            }
        }
        m
    }
}

/// A cochain with coefficients in a finite abelian group, stored factorwise:
/// one full-length integer vector per invariant factor of the coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainTuple {
    pub degree: i64,
    /// `slots[j][s]` = value of the j-th coefficient component on simplex s.
    pub slots: Vec<Vec<BigInt>>,
}

impl CochainTuple {
    pub fn zero(complex: &SimComplex, coeff: &FinAbGroup, degree: i64) -> CochainTuple {
        let len = complex.num_simplices(degree);
        CochainTuple {
            degree,
            slots: vec![vec![BigInt::zero(); len]; coeff.rank()],
        }
    }

    pub fn reduce(&mut self, coeff: &FinAbGroup) {
        for (slot, n) in self.slots.iter_mut().zip(coeff.factors()) {
            let m = BigInt::from(n.clone());
            for x in slot.iter_mut() {
                *x = x.mod_floor(&m);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &CochainTuple, scale: &BigInt, coeff: &FinAbGroup) {
        for ((dst, src), n) in self.slots.iter_mut().zip(&other.slots).zip(coeff.factors()) {
            let m = BigInt::from(n.clone());
            for (d, s) in dst.iter_mut().zip(src) {
                *d = (&*d + scale * s).mod_floor(&m);
            }
        }
    }

    pub fn is_zero_mod(&self, coeff: &FinAbGroup) -> bool {
        self.slots.iter().zip(coeff.factors()).all(|(slot, n)| {
            let m = BigInt::from(n.clone());
            slot.iter().all(|x| x.mod_floor(&m).is_zero())
        })
    }
}

/// Pulls a cochain on `m` back along a simplicial injection `f: n -> m`
/// given by a vertex map, with the sign of the sort permutation on each
/// image simplex.
pub fn pullback_cochain(
    c: &CochainTuple,
    m: &SimComplex,
    n: &SimComplex,
    vertex_map: &BTreeMap<usize, usize>,
) -> Result<CochainTuple> {
    let k = c.degree;
    let mut out = CochainTuple {
        degree: k,
        slots: vec![vec![BigInt::zero(); n.num_simplices(k)]; c.slots.len()],
    };
    for (si, s) in n.simplices(k).iter().enumerate() {
        let image: Vec<usize> = s
            .iter()
            .map(|v| {
                vertex_map
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("vertex {} unmapped", v)))
            })
            .collect::<Result<_>>()?;
        let sign = BigInt::from(sort_sign(&image) as i64);
        let mut sorted = image;
        sorted.sort_unstable();
        let mi = m
            .simplex_index(k, &sorted)
            .ok_or_else(|| Error::InvalidInput(format!("map is not simplicial at {:?}", s)))?;
        for (slot, target) in c.slots.iter().zip(out.slots.iter_mut()) {
            target[si] = &sign * &slot[mi];
        }
    }
    Ok(out)
}

/// Zero-extends a cochain on the subcomplex `l` (shared vertex IDs) to the
/// ambient complex.
pub fn extend_by_zero(
    c: &CochainTuple,
    l: &SimComplex,
    k_complex: &SimComplex,
) -> Result<CochainTuple> {
    let k = c.degree;
    let mut out = CochainTuple {
        degree: k,
        slots: vec![vec![BigInt::zero(); k_complex.num_simplices(k)]; c.slots.len()],
    };
    for (si, s) in l.simplices(k).iter().enumerate() {
        let mi = k_complex
            .simplex_index(k, s)
            .ok_or_else(|| Error::InvalidComplex("subcomplex simplex missing".into()))?;
        for (slot, target) in c.slots.iter().zip(out.slots.iter_mut()) {
            target[mi] = slot[si].clone();
        }
    }
    Ok(out)
}

/// Applies the full coboundary of the ambient complex to a cochain tuple.
pub fn coboundary_of(c: &CochainTuple, complex: &SimComplex) -> CochainTuple {
    let k = c.degree;
    let len = complex.num_simplices(k + 1);
    let mut out = CochainTuple {
        degree: k + 1,
        slots: vec![vec![BigInt::zero(); len]; c.slots.len()],
    };
    for (ri, simplex) in complex.simplices(k + 1).iter().enumerate() {
        for omit in 0..simplex.len() {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != omit)
                .map(|(_, v)| *v)
                .collect();
            let fi = complex.simplex_index(k, &face).expect("face closure");
            let sign = if omit % 2 == 0 { 1i64 } else { -1 };
            for (slot, target) in c.slots.iter().zip(out.slots.iter_mut()) {
                target[ri] += BigInt::from(sign) * &slot[fi];
            }
        }
    }
    out
}

/// Verifies a tuple is a relative cocycle for the pair modulo the
/// coefficients.
pub fn is_cocycle(pair: &Pair, coeff: &FinAbGroup, c: &CochainTuple) -> bool {
    // vanishing on the subcomplex
    if let Some(_l) = &pair.sub {
        for (j, slot) in c.slots.iter().enumerate() {
            let n = BigInt::from(coeff.factors()[j].clone());
            for (idx, v) in slot.iter().enumerate() {
                if pair.in_sub(c.degree, idx) && !v.mod_floor(&n).is_zero() {
                    return false;
                }
            }
        }
    }
    let delta = coboundary_of(c, &pair.complex);
    delta.slots.iter().zip(coeff.factors()).all(|(slot, n)| {
        let m = BigInt::from(n.clone());
        slot.iter().all(|x| x.mod_floor(&m).is_zero())
    })
}

/// Scatter a vector over out-columns back to a full-length vector.
pub fn scatter(values: &[BigInt], out_cols: &[usize], full_len: usize) -> Vec<BigInt> {
    let mut full = vec![BigInt::zero(); full_len];
    for (v, &c) in values.iter().zip(out_cols) {
        full[c] = v.clone();
    }
    full
}

/// Restrict a full-length vector to the out-columns.
pub fn gather(full: &[BigInt], out_cols: &[usize]) -> Vec<BigInt> {
    out_cols.iter().map(|&c| full[c].clone()).collect()
}

/// Modulus helper for BigUint factors.
pub fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::library_complex;

    #[test]
    fn coboundary_squares_to_zero() {
        for name in ["S2", "T2", "RP2", "disk", "mobius", "S3"] {
            let k = Arc::new(library_complex(name).unwrap());
            let pair = Pair::absolute(k.clone());
            for deg in 0..k.dim() {
                let d0 = pair.coboundary(deg);
                let d1 = pair.coboundary(deg + 1);
                let prod = d1.mul(&d0).unwrap();
                for i in 0..prod.rows() {
                    for j in 0..prod.cols() {
                        assert!(num_traits::Zero::is_zero(&prod[(i, j)]), "{} δδ != 0", name);
                    }
                }
            }
        }
    }

    #[test]
    fn relative_coboundary_squares_to_zero() {
        let k = Arc::new(library_complex("disk").unwrap());
        let l = Arc::new(k.boundary_complex());
        let pair = Pair::relative(k, l).unwrap();
        let d0 = pair.coboundary(0);
        let d1 = pair.coboundary(1);
        let prod = d1.mul(&d0).unwrap();
        for i in 0..prod.rows() {
            for j in 0..prod.cols() {
                assert!(num_traits::Zero::is_zero(&prod[(i, j)]));
            }
        }
    }
}
