use crate::error::{Error, Result};

/// Sample Pearson correlation coefficient, clamped to `[-1, 1]`.
pub fn pearson_cc(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort(x.len()));
    }
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::ConstantInput);
    }

    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const RATINGS: [f64; 6] = [1.3, 1.9, 3.5, 3.2, 5.4, 5.7];
    const MAR: [f64; 6] = [0.8976, 0.9132, 0.9581, 0.9638, 0.9840, 0.9877];

    /// Two-pass textbook formula with the covariance and variances expanded
    /// as sums of products, independent of the implementation above.
    fn oracle(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    #[test]
    fn self_and_negation() {
        let x = [0.3, 1.2, -4.0, 2.5];
        assert!((pearson_cc(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_cc(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn published_ratings_against_mar() {
        let r = pearson_cc(&RATINGS, &MAR).unwrap();
        assert!((r - oracle(&RATINGS, &MAR)).abs() < 1e-12);
        assert!((r - 0.955).abs() < 0.005, "{r}");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            pearson_cc(&[1.0, 2.0], &[1.0]),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(pearson_cc(&[1.0], &[1.0]), Err(Error::TooShort(1))));
        assert!(matches!(
            pearson_cc(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::ConstantInput)
        ));
        assert!(matches!(
            pearson_cc(&[1.0, 2.0], &[0.1, 0.1]),
            Err(Error::ConstantInput)
        ));
    }

    proptest! {
        #[test]
        fn affine_invariance(
            xy in proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..20),
            a in 0.1..10.0f64, b in -5.0..5.0f64,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
            if let Ok(base) = pearson_cc(&x, &y) {
                let up: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let down: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
                prop_assert!((pearson_cc(&up, &y).unwrap() - base).abs() < 1e-9);
                prop_assert!((pearson_cc(&down, &y).unwrap() + base).abs() < 1e-9);
                prop_assert!((-1.0..=1.0).contains(&base));
            }
        }
    }
}
