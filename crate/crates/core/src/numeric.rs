//! Small floating-point helpers shared by the engines.

use std::f64::consts::PI;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        iter.into_iter().for_each(|x| acc.add(x));
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `a*b - c*d` with Kahan's FMA error-free transformation; accurate to a
/// couple of ulps even under heavy cancellation.
pub fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = c.mul_add(-d, cd);
    let dop = a.mul_add(b, -cd);
    dop + err
}

/// `sin(pi * k / d)` with exact integer range reduction; exact zeros at
/// multiples of `pi`.
pub fn sin_pi_frac(k: i64, d: i64) -> f64 {
    debug_assert!(d > 0);
    let r = k.rem_euclid(2 * d);
    if r == 0 || r == d {
        return 0.0;
    }
    let (r, sign) = if r > d { (r - d, -1.0) } else { (r, 1.0) };
    // sin(pi - x) = sin(x): fold onto [0, pi/2]
    let r = r.min(d - r);
    sign * (PI * r as f64 / d as f64).sin()
}

/// `cos(pi * k / d)` with exact integer range reduction.
pub fn cos_pi_frac(k: i64, d: i64) -> f64 {
    sin_pi_frac(2 * k + d, 2 * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn diff_of_products_cancellation() {
        let a = 1.0 + f64::EPSILON;
        // a*a - 1 = 2eps + eps^2, lost entirely by naive evaluation of a*a - (1+2eps)
        let exact = f64::EPSILON * f64::EPSILON;
        let c = 1.0 + 2.0 * f64::EPSILON;
        assert_eq!(diff_of_products(a, a, c, 1.0), exact);
        assert_eq!(a * a - c, 0.0);
    }

    #[test]
    fn trig_fractions() {
        for d in 1..12 {
            for k in -30..30 {
                let x = PI * k as f64 / d as f64;
                assert!((sin_pi_frac(k, d) - x.sin()).abs() < 1e-13, "sin {k}/{d}");
                assert!((cos_pi_frac(k, d) - x.cos()).abs() < 1e-13, "cos {k}/{d}");
            }
        }
        assert_eq!(sin_pi_frac(16, 8), 0.0);
        assert_eq!(cos_pi_frac(4, 8), 0.0);
    }
}
