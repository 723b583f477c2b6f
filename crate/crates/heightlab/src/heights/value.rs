//! Real values carrying rigorous error radii, in report-friendly form.

use crate::exact::ball::RealBall;
use serde::{Deserialize, Serialize};

/// A computed real quantity: the exact value lies in [value − radius, value + radius].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HeightValue {
    pub value: f64,
    pub radius: f64,
}

impl HeightValue {
    pub fn from_ball(b: &RealBall) -> Self {
        // widening to f64 keeps rigor: |mid - value_f64| is absorbed into radius
        let v = b.to_f64();
        let mid_err = {
            // mid stored at higher precision; conversion error ≤ 1 ulp of v
            (v.abs() * f64::EPSILON).max(f64::MIN_POSITIVE)
        };
        HeightValue { value: v, radius: b.rad_f64() + mid_err }
    }

    pub fn exact_zero() -> Self {
        HeightValue { value: 0.0, radius: 0.0 }
    }

    pub fn contains_zero(&self) -> bool {
        self.value.abs() <= self.radius
    }

    /// Deterministic fixed-precision rendering used in reports.
    pub fn render(&self) -> String {
        format!("{:.15e}±{:.3e}", self.value, self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_stable() {
        let h = HeightValue { value: 0.25, radius: 1e-12 };
        assert_eq!(h.render(), "2.500000000000000e-1±1.000e-12");
        assert!(!h.contains_zero());
        assert!(HeightValue { value: 1e-13, radius: 1e-12 }.contains_zero());
    }
}
