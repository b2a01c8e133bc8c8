use crate::error::{Error, Result};

/// Probability of `wins` or more successes in `trials` Bernoulli draws with
/// success probability `chance`: the upper binomial tail.
///
/// Terms are evaluated in log space and summed from the far tail inwards.
pub fn sign_test_pvalue(wins: u32, trials: u32, chance: f64) -> Result<f64> {
    if wins > trials {
        return Err(Error::InvalidParameter(format!(
            "{wins} wins out of {trials} trials"
        )));
    }
    if !(0.0..=1.0).contains(&chance) {
        return Err(Error::InvalidParameter(format!("chance {chance} outside [0, 1]")));
    }
    if wins == 0 || chance == 1.0 {
        return Ok(1.0);
    }
    if chance == 0.0 {
        return Ok(0.0);
    }
    let (ln_p, ln_q) = (chance.ln(), (-chance).ln_1p());
    let mut ln_choose = 0.0;
    let mut terms = Vec::with_capacity((trials - wins + 1) as usize);
    for n in 0..=trials {
        if n > 0 {
            ln_choose += ((trials - n + 1) as f64).ln() - (n as f64).ln();
        }
        if n >= wins {
            terms.push(ln_choose + n as f64 * ln_p + (trials - n) as f64 * ln_q);
        }
    }
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut scaled: Vec<f64> = terms.iter().map(|t| (t - peak).exp()).collect();
    scaled.sort_by(f64::total_cmp);
    let sum: f64 = scaled.iter().sum();
    Ok((peak.exp() * sum).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_cases() {
        assert_eq!(sign_test_pvalue(0, 10, 1.0 / 6.0).unwrap(), 1.0);
        assert!(sign_test_pvalue(11, 10, 1.0 / 6.0).is_err());
        assert!(sign_test_pvalue(1, 10, 1.5).is_err());
        assert_eq!(sign_test_pvalue(3, 10, 0.0).unwrap(), 0.0);
        let all = sign_test_pvalue(10, 10, 0.5).unwrap();
        assert!((all - 0.5f64.powi(10)).abs() < 1e-18);
    }

    #[test]
    fn decreasing_in_wins() {
        let values: Vec<f64> = (0..=10)
            .map(|n| sign_test_pvalue(n, 10, 1.0 / 6.0).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    fn exact(wins: u32) -> f64 {
        let mut num: u128 = 0;
        let mut choose: u128 = 1;
        for n in 0..=10u32 {
            if n > 0 {
                choose = choose * u128::from(11 - n) / u128::from(n);
            }
            if n >= wins {
                num += choose * 5u128.pow(10 - n);
            }
        }
        num as f64 / 6u128.pow(10) as f64
    }

    #[test]
    fn matches_exact_rationals() {
        for wins in 0..=10 {
            let p = sign_test_pvalue(wins, 10, 1.0 / 6.0).unwrap();
            let e = exact(wins);
            assert!((p - e).abs() <= 1e-12 * e, "N={wins}: {p} vs {e}");
        }
    }
}
