/// Folds every coordinate of `position` into `[lower, upper]` by mirroring
/// at the violated bound, as often as needed. In-bounds values are returned
/// unchanged.
pub fn reflect(position: &[f64], lower: f64, upper: f64) -> Vec<f64> {
    let mut out = position.to_vec();
    reflect_in_place(&mut out, lower, upper);
    out
}

pub fn reflect_in_place(position: &mut [f64], lower: f64, upper: f64) {
    for v in position {
        *v = reflect_scalar(*v, lower, upper);
    }
}

fn reflect_scalar(v: f64, lower: f64, upper: f64) -> f64 {
    if (lower..=upper).contains(&v) {
        return v;
    }
    if v.is_nan() {
        return lower;
    }
    if v.is_infinite() {
        return if v > 0.0 { upper } else { lower };
    }
    let width = upper - lower;
    let period = 2.0 * width;
    let y = (v - lower).rem_euclid(period);
    let folded = if y > width { period - y } else { y };
    (lower + folded).clamp(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mirror_examples() {
        assert_eq!(reflect(&[-3.0], 0.0, 10_000.0), vec![3.0]);
        assert_eq!(reflect(&[5.0], 0.0, 10.0), vec![5.0]);
        assert_eq!(reflect(&[10_001.0], 0.0, 10_000.0), vec![9_999.0]);
        // Excursions past both bounds fold repeatedly: -25 -> 25 -> -5 -> 5.
        assert_eq!(reflect(&[-25.0], 0.0, 10.0), vec![5.0]);
        assert_eq!(reflect(&[f64::INFINITY, f64::NAN], 0.0, 1.0), vec![1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn inside_and_idempotent(v in -1e7f64..1e7, lo in -100.0f64..100.0, w in 0.1f64..1000.0) {
            let hi = lo + w;
            let once = reflect(&[v], lo, hi);
            prop_assert!(once[0] >= lo && once[0] <= hi);
            prop_assert_eq!(reflect(&once, lo, hi), once);
        }
    }
}
