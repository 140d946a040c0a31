use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::group::FinAbGroup;

/// A Z-graded finite abelian group with finite support.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedFinGroup {
    groups: BTreeMap<i64, FinAbGroup>,
}

impl GradedFinGroup {
    pub fn new() -> Self {
        GradedFinGroup {
            groups: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, degree: i64, group: FinAbGroup) {
        if group.is_trivial() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }

    pub fn get(&self, degree: i64) -> FinAbGroup {
        self.groups
            .get(&degree)
            .cloned()
            .unwrap_or_else(FinAbGroup::trivial)
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &FinAbGroup)> {
        self.groups.iter()
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &GradedFinGroup) -> GradedFinGroup {
        let mut out = self.clone();
        for (&d, g) in &other.groups {
            out.set(d, out.get(d).direct_sum(g));
        }
        out
    }

    /// Shift every degree up by `k`.
    pub fn shift(&self, k: i64) -> GradedFinGroup {
        let mut out = GradedFinGroup::new();
        for (&d, g) in &self.groups {
            out.set(d + k, g.clone());
        }
        out
    }
}

/// The alternating size `Π_i |A_i|^((-1)^i)` as an exact positive rational.
pub fn graded_size(g: &GradedFinGroup) -> BigRational {
    let mut size = BigRational::one();
    for (&d, group) in g.support() {
        let ord = BigRational::from(BigInt::from(group.order()));
        if d.rem_euclid(2) == 0 {
            size *= ord;
        } else {
            size /= ord;
        }
    }
    size
}
