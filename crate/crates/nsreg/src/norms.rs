//! Spatial L^q norms by grid quadrature and mixed L^p-in-time accumulation.

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// L^q norm by the uniform Riemann sum (h³ Σ|f|^q)^{1/q}; q = ∞ is the grid
/// maximum. Spectrally accurate for smooth periodic integrands.
pub fn lq_norm(f: &ScalarField, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "L^q norm requires q >= 1, got {q}"
        )));
    }
    if q.is_infinite() {
        return Ok(f.max_abs());
    }
    let h3 = f.grid().cell_volume();
    let sum: f64 = f.values().iter().map(|&v| v.abs().powf(q)).sum();
    Ok((h3 * sum).powf(1.0 / q))
}

/// Trapezoid accumulator for ∫‖·‖^p_q dt with the usual sup convention at
/// p = ∞. Samples must arrive with strictly increasing times.
#[derive(Debug, Clone)]
pub struct MixedNormAccumulator {
    p: f64,
    integral: f64,
    sup: f64,
    last: Option<(f64, f64)>,
}

impl MixedNormAccumulator {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "time exponent must satisfy p >= 1, got {p}"
            )));
        }
        Ok(Self {
            p,
            integral: 0.0,
            sup: 0.0,
            last: None,
        })
    }

    pub fn push(&mut self, t: f64, norm_q: f64) -> Result<()> {
        if let Some((t0, y0)) = self.last {
            if t <= t0 {
                return Err(Error::InvalidArgument(format!(
                    "time samples must be strictly increasing: {t} after {t0}"
                )));
            }
            if self.p.is_finite() {
                let a = y0.powf(self.p);
                let b = norm_q.powf(self.p);
                self.integral += 0.5 * (t - t0) * (a + b);
            }
        }
        self.sup = self.sup.max(norm_q);
        self.last = Some((t, norm_q));
        Ok(())
    }

    /// Running ∫‖·‖^p dt (the raw accumulator; running sup when p = ∞).
    pub fn integral(&self) -> f64 {
        if self.p.is_finite() {
            self.integral
        } else {
            self.sup
        }
    }

    /// The mixed norm (∫‖·‖^p dt)^{1/p}, or the sup for p = ∞.
    pub fn mixed_norm(&self) -> f64 {
        if self.p.is_finite() {
            self.integral.powf(1.0 / self.p)
        } else {
            self.sup
        }
    }
}

/// One-shot mixed norm of a sampled series (t_i, ‖·‖_q(t_i)).
pub fn mixed_norm_accumulate(samples: &[(f64, f64)], p: f64) -> Result<f64> {
    let mut acc = MixedNormAccumulator::new(p)?;
    for &(t, y) in samples {
        acc.push(t, y)?;
    }
    Ok(acc.mixed_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, BOX_LENGTH};
    use approx::assert_relative_eq;

    #[test]
    fn constant_field_norm() {
        let g = Grid::new(8).unwrap();
        let f = ScalarField::from_fn(g, |_, _, _| 2.5);
        for q in [1.0, 2.0, 3.0, 7.5] {
            let expect = 2.5 * BOX_LENGTH.powf(3.0 / q);
            assert_relative_eq!(lq_norm(&f, q).unwrap(), expect, max_relative = 1e-13);
        }
        assert_relative_eq!(lq_norm(&f, f64::INFINITY).unwrap(), 2.5);
    }

    #[test]
    fn sine_l2_norm_analytic() {
        // ∫ sin²x over the box = (2π)³/2
        let g = Grid::new(16).unwrap();
        let f = ScalarField::from_fn(g, |x, _, _| x.sin());
        let expect = BOX_LENGTH.powf(1.5) / 2.0f64.sqrt();
        assert_relative_eq!(lq_norm(&f, 2.0).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn rejects_bad_exponent() {
        let g = Grid::new(4).unwrap();
        let f = ScalarField::zeros(g);
        assert!(lq_norm(&f, 0.5).is_err());
        assert!(lq_norm(&f, f64::NAN).is_err());
    }

    #[test]
    fn constant_series_mixed_norm() {
        // constant ‖f(t)‖_q = c on [0, T] → mixed norm c·T^{1/p}
        let c = 3.0;
        let samples: Vec<(f64, f64)> = (0..=10).map(|i| (0.2 * i as f64, c)).collect();
        let p = 4.0;
        let got = mixed_norm_accumulate(&samples, p).unwrap();
        assert_relative_eq!(got, c * 2.0f64.powf(1.0 / p), max_relative = 1e-13);
        let sup = mixed_norm_accumulate(&samples, f64::INFINITY).unwrap();
        assert_relative_eq!(sup, c);
    }

    #[test]
    fn rejects_unsorted_times() {
        let mut acc = MixedNormAccumulator::new(2.0).unwrap();
        acc.push(0.0, 1.0).unwrap();
        acc.push(1.0, 1.0).unwrap();
        assert!(acc.push(1.0, 1.0).is_err());
        assert!(acc.push(0.5, 1.0).is_err());
    }

    #[test]
    fn accumulator_monotone_and_additive() {
        let samples: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let t = 0.1 * i as f64;
                (t, (1.3 * t).sin().abs() + 0.2)
            })
            .collect();
        let p = 3.0;
        let mut acc = MixedNormAccumulator::new(p).unwrap();
        let mut prev = 0.0;
        for &(t, y) in &samples {
            acc.push(t, y).unwrap();
            assert!(acc.integral() >= prev);
            prev = acc.integral();
        }
        // additivity over abutting windows split at a sample
        let mid = 10;
        let first = {
            let mut a = MixedNormAccumulator::new(p).unwrap();
            for &(t, y) in &samples[..=mid] {
                a.push(t, y).unwrap();
            }
            a.integral()
        };
        let second = {
            let mut a = MixedNormAccumulator::new(p).unwrap();
            for &(t, y) in &samples[mid..] {
                a.push(t, y).unwrap();
            }
            a.integral()
        };
        assert_relative_eq!(first + second, acc.integral(), max_relative = 1e-12);
    }
}
