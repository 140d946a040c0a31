use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::exactalg::FinAbGroup;
use crate::simplicial::{fundamental_class, library_complex, OrientRing};
use crate::spectra::{bc_dual_theory, rational_pow, theory_size, TheorySpec};
use crate::tft::partition_function;

/// The non-orientable counterexample: on the Klein bottle the two theories
/// `Σ^1 HF_3` and `HF_3 ⊗ E_{1/3}` give different partition functions, and
/// the integer fundamental class does not exist.  The same computation on
/// the (orientable) torus satisfies the duality relation.
#[derive(Debug, Clone, Serialize)]
pub struct KleinReport {
    pub z_shifted: String,
    pub z_dual: String,
    pub euler_factor: String,
    pub duality_fails_on_klein: bool,
    pub integer_orientation_fails: bool,
    pub torus_control_holds: bool,
    pub ok: bool,
}

pub fn klein_counterexample() -> Result<KleinReport> {
    let klein = Arc::new(library_complex("klein")?);
    let x = TheorySpec::em(2, 1, FinAbGroup::cyclic(3))?;
    let dual = bc_dual_theory(&x);

    let z_shifted = partition_function(&klein, &x)?;
    let z_dual = partition_function(&klein, &dual)?;
    let euler_factor = rational_pow(&theory_size(&x), klein.euler_characteristic());

    let duality_fails = z_shifted != z_dual.clone() * euler_factor.clone();
    let orientation_fails = fundamental_class(&klein, OrientRing::Integer).is_err();
    let mod2_exists = fundamental_class(&klein, OrientRing::Mod2).is_ok();

    // control: the same three numbers on the torus do satisfy duality
    let torus = Arc::new(library_complex("T2")?);
    let tz = partition_function(&torus, &x)?;
    let tz_dual = partition_function(&torus, &dual)?;
    let tfactor = rational_pow(&theory_size(&x), torus.euler_characteristic());
    let torus_ok = tz == tz_dual * tfactor;

    Ok(KleinReport {
        z_shifted: z_shifted.to_string(),
        z_dual: z_dual.to_string(),
        euler_factor: euler_factor.to_string(),
        duality_fails_on_klein: duality_fails,
        integer_orientation_fails: orientation_fails,
        torus_control_holds: torus_ok,
        ok: duality_fails && orientation_fails && mod2_exists && torus_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_values() {
        let rep = klein_counterexample().unwrap();
        assert_eq!(rep.z_shifted, "1");
        assert_eq!(rep.z_dual, "3");
        assert_eq!(rep.euler_factor, "1");
        assert!(rep.ok);
    }
}
