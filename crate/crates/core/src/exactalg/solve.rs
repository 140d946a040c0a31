use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::int_matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// Solution data for a linear system over a quotient of `Z^cols`.
#[derive(Debug, Clone)]
pub struct ModSolution {
    /// One integer solution vector, reduced modulo the column moduli.
    pub particular: Vec<BigInt>,
    /// Generators of the kernel subgroup, reduced modulo the column moduli.
    pub kernel_basis: Vec<Vec<BigInt>>,
    /// Order of the kernel subgroup; `None` when a zero column modulus makes
    /// the kernel infinite.
    pub kernel_order: Option<BigUint>,
}

/// Solves `A x = b` where row `i` is read modulo `row_moduli[i]` and the
/// unknown `x` lives in `∏_j Z/col_moduli[j]` (modulus `0` means `Z`).
///
/// Returns `None` when the system has no solution.  The matrix must be
/// compatible with the moduli, i.e. it must define a homomorphism between the
/// two quotient groups.
pub fn solve_mod(
    a: &IntMatrix,
    b: &[BigInt],
    row_moduli: &[BigInt],
    col_moduli: &[BigInt],
) -> Result<Option<ModSolution>> {
    let (r, c) = (a.rows(), a.cols());
    if b.len() != r || row_moduli.len() != r || col_moduli.len() != c {
        return Err(Error::DimensionMismatch(format!(
            "solve_mod: matrix {}x{}, |b|={}, |row moduli|={}, |col moduli|={}",
            r,
            c,
            b.len(),
            row_moduli.len(),
            col_moduli.len()
        )));
    }
    if row_moduli
        .iter()
        .chain(col_moduli.iter())
        .any(|m| m.is_negative())
    {
        return Err(Error::InvalidInput("moduli must be nonnegative".into()));
    }
    // Compatibility: each column times its modulus must vanish in the target.
    for j in 0..c {
        if col_moduli[j].is_zero() {
            continue;
        }
        for i in 0..r {
            let v = &a[(i, j)] * &col_moduli[j];
            let ok = if row_moduli[i].is_zero() {
                v.is_zero()
            } else {
                (&v % &row_moduli[i]).is_zero()
            };
            if !ok {
                return Err(Error::FactorMismatch(format!(
                    "matrix column {} is not compatible with the moduli",
                    j
                )));
            }
        }
    }

    // Absorb the row moduli: solve [A | M] (x, y) = b over Z, where M holds a
    // column m_i * e_i for every positive row modulus.
    let mod_rows: Vec<usize> = (0..r).filter(|&i| !row_moduli[i].is_zero()).collect();
    let mut m = IntMatrix::zeros(r, mod_rows.len());
    for (k, &i) in mod_rows.iter().enumerate() {
        m[(i, k)] = row_moduli[i].clone();
    }
    let stacked = a.hcat(&m)?;
    let snf = smith_normal_form(&stacked);
    let diag = snf.diag();
    let rank = snf.rank();

    // Particular solution: D z = U b.
    let ub = snf.u.mul_vec(b)?;
    let mut z = vec![BigInt::zero(); stacked.cols()];
    for i in 0..r {
        if i < rank {
            let (q, rem) = num_integer::Integer::div_rem(&ub[i], &diag[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !ub[i].is_zero() {
            return Ok(None);
        }
    }
    let w = snf.v.mul_vec(&z)?;
    let particular: Vec<BigInt> = reduce_vec(&w[..c], col_moduli);

    // Kernel lattice of x -> A x (mod row moduli): x-projection of ker of the
    // stacked matrix, whose basis is the set of V columns past the rank.
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..stacked.cols() {
        let zero_diag = j >= rank;
        if zero_diag {
            let col: Vec<BigInt> = (0..c).map(|i| snf.v[(i, j)].clone()).collect();
            if col.iter().any(|x| !x.is_zero()) {
                gens.push(col);
            }
        }
    }
    // Add the column-modulus lattice so the basis describes the subgroup of
    // the quotient, then measure its order against that lattice.
    let finite = col_moduli.iter().all(|e| !e.is_zero());
    let kernel_order = if finite {
        let mut g = IntMatrix::zeros(c, gens.len() + c);
        for (k, v) in gens.iter().enumerate() {
            for i in 0..c {
                g[(i, k)] = v[i].clone();
            }
        }
        for j in 0..c {
            g[(j, gens.len() + j)] = col_moduli[j].clone();
        }
        let idx = nonzero_diag_product(&smith_normal_form(&g));
        let total: BigUint = col_moduli.iter().map(|e| e.magnitude().clone()).product();
        Some(total / idx)
    } else {
        None
    };

    let kernel_basis: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|v| reduce_vec(v, col_moduli))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();

    Ok(Some(ModSolution {
        particular,
        kernel_basis,
        kernel_order,
    }))
}

fn reduce_vec(v: &[BigInt], moduli: &[BigInt]) -> Vec<BigInt> {
    v.iter()
        .zip(moduli)
        .map(|(x, m)| {
            if m.is_zero() {
                x.clone()
            } else {
                num_integer::Integer::mod_floor(x, m)
            }
        })
        .collect()
}

fn nonzero_diag_product(snf: &super::snf::SnfResult) -> BigUint {
    snf.diag()
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.magnitude().clone())
        .product()
}

/// Order of `coker(f) = (∏ Z/m_i) / im(f)` for positive moduli `m`.
pub fn cokernel_order(f: &IntMatrix, codomain_moduli: &[BigUint]) -> Result<BigUint> {
    if codomain_moduli.len() != f.rows() {
        return Err(Error::DimensionMismatch(
            "cokernel_order: moduli/rows".into(),
        ));
    }
    let mut m = IntMatrix::zeros(f.rows(), f.rows());
    for (i, e) in codomain_moduli.iter().enumerate() {
        if e.is_zero() {
            return Err(Error::InvalidInput(
                "cokernel_order requires positive moduli".into(),
            ));
        }
        m[(i, i)] = BigInt::from(e.clone());
    }
    let stacked = f.hcat(&m)?;
    Ok(nonzero_diag_product(&smith_normal_form(&stacked)))
}

/// Order of `ker(f)` for a homomorphism `∏ Z/e_j -> ∏ Z/m_i` given by an
/// integer matrix.  Computed from Smith diagonals, never by enumeration.
pub fn kernel_order(
    f: &IntMatrix,
    domain_moduli: &[BigUint],
    codomain_moduli: &[BigUint],
) -> Result<BigUint> {
    if domain_moduli.len() != f.cols() {
        return Err(Error::DimensionMismatch("kernel_order: moduli/cols".into()));
    }
    let coker = cokernel_order(f, codomain_moduli)?;
    let dom: BigUint = domain_moduli.iter().product();
    let cod: BigUint = codomain_moduli.iter().product();
    let num = dom * coker;
    if (&num % &cod) != BigUint::zero() {
        return Err(Error::Internal(
            "kernel_order: matrix does not respect the moduli".into(),
        ));
    }
    Ok(num / cod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn unsolvable_two_x_one_mod_four() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let sol = solve_mod(&a, &[bi(1)], &[bi(4)], &[bi(4)]).unwrap();
        assert!(sol.is_none());
        // Oracle: enumerate x in Z/4.
        assert!((0..4).all(|x| (2 * x) % 4 != 1));
    }

    #[test]
    fn identity_mod_n() {
        for n in [2i64, 3, 5, 12] {
            let a = IntMatrix::from_i64(&[&[1]]);
            let sol = solve_mod(&a, &[bi(0)], &[bi(n)], &[bi(n)])
                .unwrap()
                .unwrap();
            assert_eq!(sol.particular, vec![bi(0)]);
            assert_eq!(sol.kernel_order, Some(BigUint::one()));
        }
    }

    #[test]
    fn solvable_with_kernel_of_order_two() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let sol = solve_mod(&a, &[bi(2)], &[bi(4)], &[bi(4)])
            .unwrap()
            .unwrap();
        // Check the particular solution and the kernel order against the
        // enumeration oracle over Z/4.
        let solutions: Vec<i64> = (0..4).filter(|x| (2 * x) % 4 == 2).collect();
        assert_eq!(solutions.len(), 2);
        let p = &sol.particular[0];
        assert!(solutions.contains(&i64::try_from(p).unwrap()));
        assert_eq!(sol.kernel_order, Some(BigUint::from(2u32)));
    }

    #[test]
    fn integer_rows_and_free_columns() {
        // x + 2y = 3 over Z: solvable, kernel is the lattice (2, -1)Z.
        let a = IntMatrix::from_i64(&[&[1, 2]]);
        let sol = solve_mod(&a, &[bi(3)], &[bi(0)], &[bi(0), bi(0)])
            .unwrap()
            .unwrap();
        let x = &sol.particular;
        assert_eq!(&x[0] + 2 * &x[1], bi(3));
        assert_eq!(sol.kernel_basis.len(), 1);
        assert!(sol.kernel_order.is_none());
        let k = &sol.kernel_basis[0];
        assert_eq!(&k[0] + 2 * &k[1], bi(0));
    }

    #[test]
    fn kernel_order_by_enumeration() {
        // f: Z/4 x Z/6 -> Z/2 x Z/12, (x, y) -> (x + y, 2x + 4y).
        let f = IntMatrix::from_i64(&[&[1, 1], &[2, 4]]);
        let dom = [BigUint::from(4u32), BigUint::from(6u32)];
        let cod = [BigUint::from(2u32), BigUint::from(12u32)];
        let got = kernel_order(&f, &dom, &cod).unwrap();
        let mut count = 0u32;
        for x in 0..4i64 {
            for y in 0..6i64 {
                if (x + y) % 2 == 0 && (2 * x + 4 * y) % 12 == 0 {
                    count += 1;
                }
            }
        }
        assert_eq!(got, BigUint::from(count));
    }

    #[test]
    fn cokernel_order_matches_quotient() {
        // im((2,0),(0,3)) inside Z/4 x Z/9: cokernel has order (4/2)*(9/3).
        let f = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let cod = [BigUint::from(4u32), BigUint::from(9u32)];
        assert_eq!(cokernel_order(&f, &cod).unwrap(), BigUint::from(6u32));
    }
}
