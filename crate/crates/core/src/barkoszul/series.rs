use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::linalg::Rational;

/// A truncated power series without constant term; `coeffs[n]` multiplies `tⁿ`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        if !coeffs[0].is_zero() {
            return domain("series must have zero constant term");
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn zero(truncation: usize) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); truncation + 1] }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn mul_raw(a: &[Rational], b: &[Rational], t: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); t + 1];
        for (i, x) in a.iter().enumerate().take(t + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(t + 1 - i) {
                out[i + j] += &(x * y);
            }
        }
        out
    }

    /// `f/(1−f) = f + f² + f³ + ⋯` through order `t`.
    pub fn geometric(&self, t: usize) -> PowerSeries {
        let mut total = vec![Rational::zero(); t + 1];
        let mut power = self.coeffs.clone();
        power.resize(t + 1, Rational::zero());
        for _ in 0..t {
            for (acc, p) in total.iter_mut().zip(&power) {
                *acc += p;
            }
            power = Self::mul_raw(&power, &self.coeffs, t);
        }
        PowerSeries { coeffs: total }
    }
}

/// `f_A(t) = Σ χ(A(n̲))/n! tⁿ` from dimensions keyed by `(arity, degree)`.
pub fn generating_series(dims: &BTreeMap<(usize, i64), usize>, truncation: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); truncation + 1];
    let mut factorial = Rational::one();
    for (n, coeff) in coeffs.iter_mut().enumerate().skip(1) {
        factorial = &factorial * &Rational::from_integer(n as i64);
        let chi: i64 = dims
            .range((n, i64::MIN)..=(n, i64::MAX))
            .map(|((_, d), &v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum();
        *coeff = &Rational::from_integer(chi) / &factorial;
    }
    PowerSeries { coeffs }
}

/// `f_A·(1 + f_{A^!}) + f_{A^!} = 0` through order `t`.
pub fn gk_functional_check(fa: &PowerSeries, fa_dual: &PowerSeries, t: usize) -> Result<bool> {
    if fa.truncation() < t || fa_dual.truncation() < t {
        return domain(format!("series must be known through order {t}"));
    }
    let product = PowerSeries::mul_raw(&fa.coeffs, &fa_dual.coeffs, t);
    Ok((1..=t).all(|n| (&(&fa.coeffs[n] + &product[n]) + &fa_dual.coeffs[n]).is_zero()))
}

/// `f_M/(1 − f_M)` for the collection with dimensions `m[n]` in degree 0.
pub fn free_permutad_series(generator_dims: &[usize], truncation: usize) -> PowerSeries {
    let dims = generator_dims.iter().enumerate().map(|(n, &v)| ((n, 0), v)).filter(|((n, _), _)| *n > 0).collect();
    generating_series(&dims, truncation).geometric(truncation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_minus_one(t: usize, sign: i64) -> PowerSeries {
        let dims: BTreeMap<(usize, i64), usize> = (1..=t).map(|n| ((n, if sign < 0 { n as i64 } else { 0 }), 1)).collect();
        generating_series(&dims, t)
    }

    #[test]
    fn exponential_pair() {
        let fa = exp_minus_one(8, 1);
        let fd = exp_minus_one(8, -1);
        assert_eq!(fa.coeff(3), Rational::new(1, 6));
        assert_eq!(fd.coeff(3), Rational::new(-1, 6));
        assert!(gk_functional_check(&fa, &fd, 8).unwrap());
        assert!(!gk_functional_check(&fa, &fa, 8).unwrap());
        assert!(gk_functional_check(&fa, &fd, 9).is_err());
    }

    #[test]
    fn zero_series() {
        let z = generating_series(&BTreeMap::new(), 4);
        assert_eq!(z, PowerSeries::zero(4));
        assert!(PowerSeries::new(vec![Rational::one()]).is_err());
    }

    #[test]
    fn geometric_of_t() {
        let t = PowerSeries::new(vec![Rational::zero(), Rational::one()]).unwrap();
        let g = t.geometric(4);
        assert!((1..=4).all(|n| g.coeff(n).is_one()));
    }
}
