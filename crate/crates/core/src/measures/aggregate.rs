use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Names of the seven columns a distribution expands into, in column order.
pub const AGGREGATE_NAMES: [&str; 7] = ["mean", "min", "max", "m1", "m2", "m3", "m4"];

/// Scalar summary of a node- or edge-level distribution.
///
/// `mean`, `min` and `max` are on the raw scale. The moments are taken after
/// dividing every value by the largest absolute value, so they are
/// dimensionless: `m1 ∈ [-1, 1]`, even moments in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateSet {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl AggregateSet {
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.mean, self.min, self.max, self.m1, self.m2, self.m3, self.m4,
        ]
    }
}

/// Summarizes a distribution.
///
/// Values are sorted before summation so the result does not depend on the
/// order nodes were numbered in.
pub fn aggregate_distribution(values: &[f64]) -> Result<AggregateSet> {
    if values.is_empty() {
        return Err(Error::Empty("cannot aggregate an empty distribution".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "distribution contains non-finite values".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let min = sorted[0];
    let max = sorted[sorted.len() - 1];
    let mean = sorted.iter().sum::<f64>() / n;
    let scale = min.abs().max(max.abs());

    let mut moments = [0.0f64; 4];
    if scale > 0.0 {
        for &v in &sorted {
            let x = v / scale;
            let mut p = 1.0;
            for m in &mut moments {
                p *= x;
                *m += p;
            }
        }
        for m in &mut moments {
            *m /= n;
        }
    }
    Ok(AggregateSet {
        mean,
        min,
        max,
        m1: moments[0],
        m2: moments[1],
        m3: moments[2],
        m4: moments[3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn small_distribution() {
        // Hand evaluation: s = 2, scaled values [0.5, 1, 0.5].
        let a = aggregate_distribution(&[1.0, 2.0, 1.0]).unwrap();
        assert!(close(a.mean, 4.0 / 3.0));
        assert_eq!(a.min, 1.0);
        assert_eq!(a.max, 2.0);
        assert!(close(a.m1, 2.0 / 3.0));
        assert!(close(a.m2, 0.5));
        assert!(close(a.m3, 5.0 / 12.0));
        assert!(close(a.m4, 0.375));
    }

    #[test]
    fn constant_distribution() {
        let a = aggregate_distribution(&[3.5, 3.5, 3.5]).unwrap();
        assert_eq!(a.mean, 3.5);
        assert_eq!([a.m1, a.m2, a.m3, a.m4], [1.0; 4]);
    }

    #[test]
    fn zero_distribution() {
        let a = aggregate_distribution(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(a.to_array(), [0.0; 7]);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(aggregate_distribution(&[]).is_err());
    }

    #[test]
    fn negative_values_scale_by_magnitude() {
        let a = aggregate_distribution(&[-2.0, 1.0]).unwrap();
        assert!(close(a.m1, -0.25));
        assert!(close(a.m2, 0.625));
    }

    proptest! {
        #[test]
        fn moments_stay_in_bounds(values in prop::collection::vec(-1e6f64..1e6, 1..64)) {
            let a = aggregate_distribution(&values).unwrap();
            let eps = 1e-12;
            prop_assert!(a.m1 >= -1.0 - eps && a.m1 <= 1.0 + eps);
            prop_assert!(a.m3 >= -1.0 - eps && a.m3 <= 1.0 + eps);
            prop_assert!(a.m2 >= 0.0 && a.m2 <= 1.0 + eps);
            prop_assert!(a.m4 >= 0.0 && a.m4 <= 1.0 + eps);
            prop_assert!(a.min <= a.mean + 1e-9 && a.mean <= a.max + 1e-9);
        }

        #[test]
        fn order_does_not_matter(mut values in prop::collection::vec(-1e3f64..1e3, 1..32)) {
            let a = aggregate_distribution(&values).unwrap();
            values.reverse();
            prop_assert_eq!(a, aggregate_distribution(&values).unwrap());
        }
    }
}
