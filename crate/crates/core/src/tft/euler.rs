use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::CycloRat;
use crate::simplicial::Bordism;

/// Value of the Euler theory on a bordism: `λ^(χ(M) - χ(N))` with `N` the
/// incoming boundary (for closed `M` this is `λ^χ(M)`).
pub fn euler_tft(b: &Bordism, lambda: &CycloRat) -> Result<CycloRat> {
    if lambda.is_zero() {
        return Err(Error::InvalidInput("the Euler theory needs λ != 0".into()));
    }
    let e = b.euler_characteristic() - b.incoming_euler();
    Ok(lambda.pow(e))
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerTrivialityReport {
    pub bordism: String,
    pub chi_m: i64,
    pub chi_boundary: i64,
    pub ok: bool,
}

/// In odd dimensions the Euler theory trivializes because
/// `χ(M) = χ(∂M) / 2` for every compact bordism; this checks that integer
/// identity (the scalar form of the natural isomorphism).
pub fn verify_euler_triviality_odd(bordisms: &[Bordism]) -> Result<Vec<EulerTrivialityReport>> {
    let mut out = Vec::new();
    for b in bordisms {
        if b.d % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "{} has even dimension {}; triviality only holds in odd dimensions",
                b.name, b.d
            )));
        }
        let chi_m = b.euler_characteristic();
        let chi_boundary = b.incoming_euler() + b.outgoing_euler();
        out.push(EulerTrivialityReport {
            bordism: b.name.clone(),
            chi_m,
            chi_boundary,
            ok: 2 * chi_m == chi_boundary,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{library_bordism, library_complex};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn sphere_value_is_lambda_squared() {
        let b = library_bordism("closed(S2)").unwrap();
        let lam = CycloRat::from_int(5);
        assert_eq!(euler_tft(&b, &lam).unwrap(), CycloRat::from_int(25));
    }

    #[test]
    fn cylinder_value_is_one() {
        let b = library_bordism("cyl(S1)").unwrap();
        let lam = CycloRat::root_of_unity(3, 1);
        assert_eq!(euler_tft(&b, &lam).unwrap(), CycloRat::one());
    }

    #[test]
    fn klein_bottle_value_at_one_third() {
        let k = library_complex("klein").unwrap();
        let b = crate::simplicial::Bordism::closed("klein", k, false).unwrap();
        let third = CycloRat::from_rational(BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(euler_tft(&b, &third).unwrap(), CycloRat::one());
    }

    #[test]
    fn zero_lambda_rejected() {
        let b = library_bordism("closed(S2)").unwrap();
        assert!(euler_tft(&b, &CycloRat::zero()).is_err());
    }

    #[test]
    fn odd_dimension_triviality() {
        let suite: Vec<Bordism> = [
            "interval",
            "solidtorus_out",
            "cyl(T2grid)",
            "closed(S3)",
            "closed(L(3,1))",
        ]
        .iter()
        .map(|n| library_bordism(n).unwrap())
        .collect();
        let reports = verify_euler_triviality_odd(&suite).unwrap();
        assert!(reports.iter().all(|r| r.ok));
    }
}
