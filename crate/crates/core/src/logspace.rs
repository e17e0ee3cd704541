//! Natural-log arithmetic for products of many small gains.

/// `ln(Σ exp(x_i))`, tolerating `-inf` terms.
pub fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let xs: [f64; 3] = [1e-3, 2.5, 7.0];
        let ln: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let direct: f64 = xs.iter().sum();
        assert!((ln_sum_exp(&ln).exp() - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn survives_underflowing_terms() {
        // exp(-800) underflows to 0 in f64.
        let v = ln_sum_exp(&[-800.0, -800.0]);
        assert!((v - (-800.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(ln_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
        assert_eq!(ln_sum_exp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }
}
