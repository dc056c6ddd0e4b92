//! Time integration of the incompressible momentum equation
//! ∂t u + div(u⊗u) + ∇P − νΔu = 0 in velocity–pressure pseudo-spectral form.
//!
//! The stepper is a classical fully explicit four-stage Runge–Kutta applied
//! to the projected right-hand side −P[div(u⊗u)] + νΔu; the Leray projection
//! absorbs ∇P, and the pressure is recovered separately as a diagnostic.
//! The canonical state is the real-space velocity and every step begins with
//! fresh forward transforms, so a snapshot of the real field restarts the
//! run bitwise.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::BOX_LENGTH;
use crate::spectral::{
    dealias_in_place, derivative_spec, forward_vector, inverse_vector, leray_project_spec,
    transform_forward, transform_inverse, SpectralField,
};
use ndarray::Zip;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Kinematic viscosity ν > 0.
    pub viscosity: f64,
    /// Fixed time step.
    pub dt: f64,
    /// Final time of the run.
    pub t_end: f64,
    /// Hard guard on the advective CFL number dt·max|u|·n/(2π).
    pub cfl_limit: f64,
}

impl SolverConfig {
    pub fn new(viscosity: f64, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            viscosity,
            dt,
            t_end,
            cfl_limit: 0.5,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.viscosity > 0.0 && self.viscosity.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "viscosity must be > 0, got {}",
                self.viscosity
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if !(self.cfl_limit > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cfl_limit must be > 0, got {}",
                self.cfl_limit
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub time: f64,
    pub step_index: u64,
    pub velocity: VectorField,
}

impl SolverState {
    /// Initial state from a velocity field: dealiased and Leray-projected.
    pub fn initial(velocity: &VectorField) -> Result<Self> {
        let mut u = forward_vector(velocity)?;
        for c in u.iter_mut() {
            dealias_in_place(c);
        }
        leray_project_spec(&mut u);
        Ok(Self {
            time: 0.0,
            step_index: 0,
            velocity: inverse_vector(&u)?,
        })
    }

    /// State resumed from stored samples (used by snapshot restarts); the
    /// field is taken verbatim.
    pub fn resumed(time: f64, velocity: VectorField) -> Self {
        Self {
            time,
            step_index: 0,
            velocity,
        }
    }

    /// Advective CFL number dt·max|u|·n/(2π) for a candidate dt.
    pub fn cfl_number(&self, dt: f64) -> f64 {
        dt * self.velocity.max_abs() * self.velocity.grid().n() as f64 / BOX_LENGTH
    }
}

/// div(u⊗u), computed pseudo-spectrally: products on the grid, derivatives in
/// spectral space, 2/3-dealiased.
pub fn nonlinear_term(u: &VectorField) -> Result<VectorField> {
    let spec = nonlinear_term_spec(u)?;
    inverse_vector(&spec)
}

fn product_field(a: &ScalarField, b: &ScalarField) -> ScalarField {
    let mut out = a.values().clone();
    Zip::from(&mut out).and(b.values()).for_each(|o, &v| *o *= v);
    ScalarField::from_values_unchecked(a.grid(), out)
}

pub(crate) fn nonlinear_term_spec(u: &VectorField) -> Result<[SpectralField; 3]> {
    // T_ij = u_i u_j symmetric: six distinct products
    let mut t_hat: [[Option<SpectralField>; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in i..3 {
            let spec = transform_forward(&product_field(u.component(i), u.component(j)))?;
            t_hat[i][j] = Some(spec);
        }
    }
    let component = |i: usize| -> SpectralField {
        let mut acc: Option<SpectralField> = None;
        for j in 0..3 {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let d = derivative_spec(t_hat[a][b].as_ref().expect("filled above"), j);
            acc = Some(match acc {
                None => d,
                Some(mut s) => {
                    Zip::from(s.coeffs_mut()).and(d.coeffs()).for_each(|o, &v| *o += v);
                    s
                }
            });
        }
        let mut out = acc.expect("three terms");
        dealias_in_place(&mut out);
        out
    };
    Ok([component(0), component(1), component(2)])
}

/// Right-hand side F(û) = −P[div(u⊗u)]^ − ν|k|²û on spectral velocity.
fn rhs(u_hat: &[SpectralField; 3], nu: f64) -> Result<[SpectralField; 3]> {
    let u = inverse_vector(u_hat)?;
    let mut nl = nonlinear_term_spec(&u)?;
    leray_project_spec(&mut nl);
    let grid = u_hat[0].grid();
    let n = grid.n();
    let kd: Vec<f64> = (0..n).map(|j| grid.deriv_wavenumber(j)).collect();
    let kdz: Vec<f64> = (0..grid.spectral_len_z())
        .map(|j| grid.deriv_wavenumber(j))
        .collect();
    for (c, out) in u_hat.iter().zip(nl.iter_mut()) {
        Zip::indexed(out.coeffs_mut())
            .and(c.coeffs())
            .for_each(|(i, j, k), o, &v| {
                let k2 = kd[i] * kd[i] + kd[j] * kd[j] + kdz[k] * kdz[k];
                *o = -*o - nu * k2 * v;
            });
    }
    Ok(nl)
}

fn axpy(y: &mut [SpectralField; 3], a: f64, x: &[SpectralField; 3]) {
    let a = Complex64::new(a, 0.0);
    for (yc, xc) in y.iter_mut().zip(x.iter()) {
        Zip::from(yc.coeffs_mut()).and(xc.coeffs()).for_each(|o, &v| *o += a * v);
    }
}

/// Advance one time step of size cfg.dt with classical RK4.
///
/// Refuses to step when the advective CFL number exceeds the configured
/// limit, and aborts with the step index if the updated field is not finite.
pub fn step(state: &SolverState, cfg: &SolverConfig) -> Result<SolverState> {
    cfg.validate()?;
    let cfl = state.cfl_number(cfg.dt);
    if cfl > cfg.cfl_limit {
        return Err(Error::CflViolation {
            measured: cfl,
            limit: cfg.cfl_limit,
        });
    }
    let dt = cfg.dt;
    let nu = cfg.viscosity;
    let u0 = forward_vector(&state.velocity)?;

    let k1 = rhs(&u0, nu)?;
    let mut s = u0.clone();
    axpy(&mut s, 0.5 * dt, &k1);
    let k2 = rhs(&s, nu)?;
    let mut s = u0.clone();
    axpy(&mut s, 0.5 * dt, &k2);
    let k3 = rhs(&s, nu)?;
    let mut s = u0.clone();
    axpy(&mut s, dt, &k3);
    let k4 = rhs(&s, nu)?;

    let mut out = u0;
    axpy(&mut out, dt / 6.0, &k1);
    axpy(&mut out, dt / 3.0, &k2);
    axpy(&mut out, dt / 3.0, &k3);
    axpy(&mut out, dt / 6.0, &k4);

    let velocity = inverse_vector(&out)?;
    if velocity.check_finite().is_err() {
        return Err(Error::NumericalBlowup {
            step: state.step_index + 1,
        });
    }
    Ok(SolverState {
        time: state.time + dt,
        step_index: state.step_index + 1,
        velocity,
    })
}

/// Recover the pressure from −ΔP = Σ_ij ∂i∂j(u_i u_j), solved spectrally
/// with the zero-mean gauge.
pub fn recover_pressure(u: &VectorField) -> Result<ScalarField> {
    let grid = u.grid();
    let n = grid.n();
    let kd: Vec<f64> = (0..n).map(|j| grid.deriv_wavenumber(j)).collect();
    let kdz: Vec<f64> = (0..grid.spectral_len_z())
        .map(|j| grid.deriv_wavenumber(j))
        .collect();
    let mut p_hat = SpectralField::zeros(grid);
    for i in 0..3 {
        for j in i..3 {
            let t = transform_forward(&product_field(u.component(i), u.component(j)))?;
            let factor = if i == j { 1.0 } else { 2.0 };
            Zip::indexed(p_hat.coeffs_mut())
                .and(t.coeffs())
                .for_each(|(a, b, c), o, &v| {
                    let k = [kd[a], kd[b], kdz[c]];
                    *o -= factor * k[i] * k[j] * v;
                });
        }
    }
    // divide by |k|², zero-mean gauge at k = 0
    Zip::indexed(p_hat.coeffs_mut()).for_each(|(a, b, c), o| {
        let k2 = kd[a] * kd[a] + kd[b] * kd[b] + kdz[c] * kdz[c];
        if k2 > 0.0 {
            *o /= k2;
        } else {
            *o = Complex64::new(0.0, 0.0);
        }
    });
    Ok(transform_inverse(&p_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::initial::taylor_green;
    use crate::norms::lq_norm;
    use crate::spectral::spectral_divergence_norm;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn nonlinear_term_of_zero_and_shear_vanish() {
        let g = grid(16);
        let zero = VectorField::zeros(g);
        let nz = nonlinear_term(&zero).unwrap();
        for c in nz.components() {
            assert!(c.max_abs() == 0.0);
        }
        let shear = VectorField::from_fns(g, |_, y, _| y.sin(), |_, _, _| 0.0, |_, _, _| 0.0);
        let ns = nonlinear_term(&shear).unwrap();
        for c in ns.components() {
            assert!(c.max_abs() < 1e-14);
        }
    }

    #[test]
    fn nonlinear_term_matches_taylor_green_expansion() {
        // div(u⊗u) = ((1/2) sin 2x cos²z, (1/2) sin 2y cos²z, 0) at t = 0
        let g = grid(32);
        let u = taylor_green(g);
        let nl = nonlinear_term(&u).unwrap();
        let worst0 = ndarray::Zip::indexed(nl.component(0).values()).fold(
            0.0f64,
            |m, (i, _, k), &v| {
                let expect = 0.5 * (2.0 * g.coord(i)).sin() * g.coord(k).cos().powi(2);
                m.max((v - expect).abs())
            },
        );
        let worst1 = ndarray::Zip::indexed(nl.component(1).values()).fold(
            0.0f64,
            |m, (_, j, k), &v| {
                let expect = 0.5 * (2.0 * g.coord(j)).sin() * g.coord(k).cos().powi(2);
                m.max((v - expect).abs())
            },
        );
        assert!(worst0 < 1e-10, "worst {worst0:.3e}");
        assert!(worst1 < 1e-10, "worst {worst1:.3e}");
        assert!(nl.component(2).max_abs() < 1e-12);
    }

    #[test]
    fn zero_field_is_fixed_point() {
        let g = grid(8);
        let cfg = SolverConfig::new(1.0, 0.01, 0.1).unwrap();
        let mut state = SolverState::initial(&VectorField::zeros(g)).unwrap();
        for _ in 0..5 {
            state = step(&state, &cfg).unwrap();
            for c in state.velocity.components() {
                assert!(c.max_abs() == 0.0);
            }
        }
    }

    #[test]
    fn shear_decays_at_analytic_rate() {
        // u = (sin y, 0, 0): nonlinear term vanishes, exact decay e^{-νt}
        let g = grid(16);
        let nu = 1.0;
        let cfg = SolverConfig::new(nu, 0.01, 0.1).unwrap();
        let mut state =
            SolverState::initial(&VectorField::from_fns(g, |_, y, _| y.sin(), |_, _, _| 0.0, |_, _, _| 0.0))
                .unwrap();
        for _ in 0..10 {
            state = step(&state, &cfg).unwrap();
        }
        let expect = (-nu * 0.1f64).exp();
        let worst = ndarray::Zip::indexed(state.velocity.component(0).values()).fold(
            0.0f64,
            |m, (_, j, _), &v| m.max((v - expect * g.coord(j).sin()).abs()),
        );
        assert!(worst < 1e-9, "worst {worst:.3e} vs amplitude {expect:.6}");
    }

    #[test]
    fn step_preserves_divergence_free() {
        let g = grid(32);
        let cfg = SolverConfig::new(0.01, 2e-3, 0.01).unwrap();
        let mut state = SolverState::initial(&taylor_green(g)).unwrap();
        for _ in 0..5 {
            state = step(&state, &cfg).unwrap();
            let div = spectral_divergence_norm(&state.velocity).unwrap();
            let l2 = lq_norm(&state.velocity.magnitude(), 2.0).unwrap();
            assert!(div <= 1e-10 * l2, "div {div:.3e} vs {l2:.3e}");
        }
    }

    #[test]
    fn cfl_violation_is_refused_with_measured_number() {
        let g = grid(16);
        let cfg = SolverConfig::new(0.01, 1.0, 1.0).unwrap();
        let state = SolverState::initial(&taylor_green(g)).unwrap();
        match step(&state, &cfg) {
            Err(Error::CflViolation { measured, limit }) => {
                assert_eq!(limit, 0.5);
                let expect = state.cfl_number(1.0);
                assert_relative_eq!(measured, expect, max_relative = 1e-12);
            }
            other => panic!("expected CFL violation, got {other:?}"),
        }
    }

    #[test]
    fn pressure_of_zero_and_shear_vanish() {
        let g = grid(16);
        let p = recover_pressure(&VectorField::zeros(g)).unwrap();
        assert!(p.max_abs() == 0.0);
        let shear = VectorField::from_fns(g, |_, y, _| y.sin(), |_, _, _| 0.0, |_, _, _| 0.0);
        let p = recover_pressure(&shear).unwrap();
        assert!(p.max_abs() < 1e-13);
    }

    #[test]
    fn pressure_matches_taylor_green_closed_form() {
        // P = (cos 2x + cos 2y)(cos 2z + 2)/16, zero-mean
        let g = grid(32);
        let p = recover_pressure(&taylor_green(g)).unwrap();
        let worst = ndarray::Zip::indexed(p.values()).fold(0.0f64, |m, (i, j, k), &v| {
            let expect = ((2.0 * g.coord(i)).cos() + (2.0 * g.coord(j)).cos())
                * ((2.0 * g.coord(k)).cos() + 2.0)
                / 16.0;
            m.max((v - expect).abs())
        });
        assert!(worst < 1e-10, "worst {worst:.3e}");
    }

    #[test]
    fn momentum_mean_mode_is_conserved() {
        let g = grid(16);
        let cfg = SolverConfig::new(0.5, 5e-3, 0.05).unwrap();
        // divergence-free field plus a uniform mean drift
        let base = VectorField::from_fns(
            g,
            |_, y, _| 0.25 + 0.3 * y.sin(),
            |x, _, _| -0.125 + 0.3 * x.sin(),
            |_, _, _| 0.0625,
        );
        let mut state = SolverState::initial(&base).unwrap();
        let mean = |f: &ScalarField| f.values().sum() / f.grid().len() as f64;
        let m0: Vec<f64> = (0..3).map(|i| mean(state.velocity.component(i))).collect();
        for _ in 0..10 {
            state = step(&state, &cfg).unwrap();
        }
        for i in 0..3 {
            assert_relative_eq!(mean(state.velocity.component(i)), m0[i], epsilon = 1e-13);
        }
    }
}
