//! Spectral representation, transforms and differential operators.
//!
//! Coefficients are stored normalized, f(x) = Σ_k c_k e^{ik·x}, over the
//! real-input half-space layout (n, n, n/2+1): the z axis holds k_z ≥ 0 and
//! negative k_z is implied by conjugate symmetry. FFT plans are cached per
//! thread and grid size.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;
use ndarray::{Array3, Axis};
use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Array3<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.n();
        Self {
            grid,
            coeffs: Array3::zeros((n, n, grid.spectral_len_z())),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &Array3<Complex64> {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut Array3<Complex64> {
        &mut self.coeffs
    }

    pub(crate) fn from_coeffs(grid: Grid, coeffs: Array3<Complex64>) -> Self {
        Self { grid, coeffs }
    }

    /// Coefficient at integer wavenumbers; k_z must be ≥ 0 (half-space layout).
    pub fn coefficient(&self, kx: i64, ky: i64, kz: i64) -> Complex64 {
        let n = self.grid.n() as i64;
        assert!(kz >= 0 && kz <= n / 2, "kz out of half-space range");
        let ix = kx.rem_euclid(n) as usize;
        let iy = ky.rem_euclid(n) as usize;
        self.coeffs[[ix, iy, kz as usize]]
    }

    /// Sum of |c_k|² over the full wavenumber lattice (conjugate half counted twice).
    pub fn energy_sum(&self) -> f64 {
        let nh = self.grid.spectral_len_z();
        let mut total = 0.0;
        for (idx, c) in self.coeffs.indexed_iter() {
            let w = if idx.2 == 0 || idx.2 == nh - 1 { 1.0 } else { 2.0 };
            total += w * c.norm_sqr();
        }
        total
    }

    /// Grid L² norm evaluated in spectral space (Parseval).
    pub fn l2_norm(&self) -> f64 {
        (crate::grid::BOX_LENGTH.powi(3) * self.energy_sum()).sqrt()
    }
}

struct FftCtx {
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    rbuf: Vec<f64>,
    hbuf: Vec<Complex64>,
    cbuf: Vec<Complex64>,
    r2c_scratch: Vec<Complex64>,
    c2r_scratch: Vec<Complex64>,
    cfft_scratch: Vec<Complex64>,
}

impl FftCtx {
    fn new(n: usize) -> Self {
        let mut rplanner = RealFftPlanner::<f64>::new();
        let mut cplanner = FftPlanner::<f64>::new();
        let r2c = rplanner.plan_fft_forward(n);
        let c2r = rplanner.plan_fft_inverse(n);
        let fwd = cplanner.plan_fft_forward(n);
        let inv = cplanner.plan_fft_inverse(n);
        let r2c_scratch = r2c.make_scratch_vec();
        let c2r_scratch = c2r.make_scratch_vec();
        let cfft_scratch =
            vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
        Self {
            rbuf: vec![0.0; n],
            hbuf: vec![Complex64::default(); n / 2 + 1],
            cbuf: vec![Complex64::default(); n],
            r2c,
            c2r,
            fwd,
            inv,
            r2c_scratch,
            c2r_scratch,
            cfft_scratch,
        }
    }
}

thread_local! {
    static FFT_CACHE: RefCell<HashMap<usize, FftCtx>> = RefCell::new(HashMap::new());
}

fn with_ctx<T>(n: usize, f: impl FnOnce(&mut FftCtx) -> T) -> T {
    FFT_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let ctx = cache.entry(n).or_insert_with(|| FftCtx::new(n));
        f(ctx)
    })
}

/// Real-to-spectral transform. Rejects non-finite input naming the first
/// offending flat index.
pub fn transform_forward(f: &ScalarField) -> Result<SpectralField> {
    f.check_finite()?;
    let grid = f.grid();
    let n = grid.n();
    let nh = grid.spectral_len_z();
    let mut spec = Array3::<Complex64>::zeros((n, n, nh));
    with_ctx(n, |ctx| {
        // z axis: real-to-complex on contiguous lines
        for i in 0..n {
            for j in 0..n {
                let src = f.values().index_axis(Axis(0), i);
                let line = src.index_axis(Axis(0), j);
                ctx.rbuf.copy_from_slice(line.as_slice().expect("contiguous z line"));
                ctx.r2c
                    .process_with_scratch(&mut ctx.rbuf, &mut ctx.hbuf, &mut ctx.r2c_scratch)
                    .expect("r2c lengths are planned");
                spec.index_axis_mut(Axis(0), i)
                    .index_axis_mut(Axis(0), j)
                    .as_slice_mut()
                    .expect("contiguous z line")
                    .copy_from_slice(&ctx.hbuf);
            }
        }
        // y axis, then x axis: complex transforms along strided lanes
        for axis in [1usize, 0usize] {
            for mut lane in spec.lanes_mut(Axis(axis)) {
                for (b, v) in ctx.cbuf.iter_mut().zip(lane.iter()) {
                    *b = *v;
                }
                ctx.fwd
                    .process_with_scratch(&mut ctx.cbuf, &mut ctx.cfft_scratch);
                for (v, b) in lane.iter_mut().zip(ctx.cbuf.iter()) {
                    *v = *b;
                }
            }
        }
    });
    let scale = 1.0 / (n as f64).powi(3);
    spec.mapv_inplace(|c| c * scale);
    Ok(SpectralField::from_coeffs(grid, spec))
}

/// Spectral-to-real transform (exact inverse of `transform_forward` up to
/// round-off).
pub fn transform_inverse(field: &SpectralField) -> ScalarField {
    let grid = field.grid();
    let n = grid.n();
    let nh = grid.spectral_len_z();
    let mut work = field.coeffs.clone();
    let mut out = Array3::<f64>::zeros((n, n, n));
    with_ctx(n, |ctx| {
        for axis in [0usize, 1usize] {
            for mut lane in work.lanes_mut(Axis(axis)) {
                for (b, v) in ctx.cbuf.iter_mut().zip(lane.iter()) {
                    *b = *v;
                }
                ctx.inv
                    .process_with_scratch(&mut ctx.cbuf, &mut ctx.cfft_scratch);
                for (v, b) in lane.iter_mut().zip(ctx.cbuf.iter()) {
                    *v = *b;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let src = work.index_axis(Axis(0), i);
                let line = src.index_axis(Axis(0), j);
                ctx.hbuf.copy_from_slice(line.as_slice().expect("contiguous z line"));
                // half-spectrum of a real line: DC/Nyquist imaginary parts are
                // round-off and must be exactly zero for the inverse plan
                ctx.hbuf[0].im = 0.0;
                ctx.hbuf[nh - 1].im = 0.0;
                ctx.c2r
                    .process_with_scratch(&mut ctx.hbuf, &mut ctx.rbuf, &mut ctx.c2r_scratch)
                    .expect("c2r lengths are planned");
                out.index_axis_mut(Axis(0), i)
                    .index_axis_mut(Axis(0), j)
                    .as_slice_mut()
                    .expect("contiguous z line")
                    .copy_from_slice(&ctx.rbuf);
            }
        }
    });
    ScalarField::from_values_unchecked(grid, out)
}

/// Apply a wavenumber-dependent complex multiplier in place.
fn apply_multiplier(field: &mut SpectralField, mult: impl Fn(f64, f64, f64) -> Complex64) {
    let grid = field.grid;
    let n = grid.n();
    let kd: Vec<f64> = (0..n).map(|j| grid.deriv_wavenumber(j)).collect();
    let kdz: Vec<f64> = (0..grid.spectral_len_z())
        .map(|j| grid.deriv_wavenumber(j))
        .collect();
    for ((i, j, k), c) in field.coeffs.indexed_iter_mut() {
        *c *= mult(kd[i], kd[j], kdz[k]);
    }
}

/// Spectral derivative along one axis (multiplication by i·k, Nyquist dropped).
pub fn derivative_spec(field: &SpectralField, axis: usize) -> SpectralField {
    let mut out = field.clone();
    apply_multiplier(&mut out, |kx, ky, kz| {
        let k = [kx, ky, kz][axis];
        Complex64::new(0.0, k)
    });
    out
}

/// Gradient of a scalar field, computed spectrally.
pub fn gradient(f: &ScalarField) -> Result<VectorField> {
    let spec = transform_forward(f)?;
    VectorField::new([
        transform_inverse(&derivative_spec(&spec, 0)),
        transform_inverse(&derivative_spec(&spec, 1)),
        transform_inverse(&derivative_spec(&spec, 2)),
    ])
}

/// Divergence of a vector field, computed spectrally.
pub fn divergence(v: &VectorField) -> Result<ScalarField> {
    Ok(transform_inverse(&divergence_spec(&forward_vector(v)?)))
}

pub(crate) fn divergence_spec(u: &[SpectralField; 3]) -> SpectralField {
    let mut out = derivative_spec(&u[0], 0);
    let dy = derivative_spec(&u[1], 1);
    let dz = derivative_spec(&u[2], 2);
    ndarray::Zip::from(out.coeffs_mut())
        .and(dy.coeffs())
        .and(dz.coeffs())
        .for_each(|o, &a, &b| *o += a + b);
    out
}

/// Curl of a vector field, computed spectrally.
pub fn curl(v: &VectorField) -> Result<VectorField> {
    let u = forward_vector(v)?;
    let d = |i: usize, axis: usize| derivative_spec(&u[i], axis);
    let sub = |a: SpectralField, b: SpectralField| {
        let mut out = a;
        ndarray::Zip::from(out.coeffs_mut())
            .and(b.coeffs())
            .for_each(|o, &x| *o -= x);
        out
    };
    VectorField::new([
        transform_inverse(&sub(d(2, 1), d(1, 2))),
        transform_inverse(&sub(d(0, 2), d(2, 0))),
        transform_inverse(&sub(d(1, 0), d(0, 1))),
    ])
}

/// Laplacian, as the exact composition divergence∘gradient (multiplier −|k|²
/// with the same Nyquist convention as the first derivatives).
pub fn laplacian(f: &ScalarField) -> Result<ScalarField> {
    let mut spec = transform_forward(f)?;
    apply_multiplier(&mut spec, |kx, ky, kz| {
        Complex64::new(-(kx * kx + ky * ky + kz * kz), 0.0)
    });
    Ok(transform_inverse(&spec))
}

/// Zero all modes with any |k_i| above the dealias cutoff. Idempotent.
pub fn dealias(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(field: &mut SpectralField) {
    let grid = field.grid;
    let n = grid.n();
    let cut = grid.dealias_cutoff();
    let keep: Vec<bool> = (0..n)
        .map(|j| (grid.wavenumber(j).abs() as f64) <= cut)
        .collect();
    let keep_z: Vec<bool> = (0..grid.spectral_len_z())
        .map(|j| (j as f64) <= cut)
        .collect();
    for ((i, j, k), c) in field.coeffs.indexed_iter_mut() {
        if !(keep[i] && keep[j] && keep_z[k]) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

pub(crate) fn forward_vector(v: &VectorField) -> Result<[SpectralField; 3]> {
    Ok([
        transform_forward(v.component(0))?,
        transform_forward(v.component(1))?,
        transform_forward(v.component(2))?,
    ])
}

pub(crate) fn inverse_vector(u: &[SpectralField; 3]) -> Result<VectorField> {
    VectorField::new([
        transform_inverse(&u[0]),
        transform_inverse(&u[1]),
        transform_inverse(&u[2]),
    ])
}

/// Project spectral velocity onto divergence-free fields, preserving the k=0
/// (mean) mode.
pub(crate) fn leray_project_spec(u: &mut [SpectralField; 3]) {
    let grid = u[0].grid;
    let n = grid.n();
    let kx: Vec<f64> = (0..n).map(|j| grid.wavenumber(j) as f64).collect();
    let kz: Vec<f64> = (0..grid.spectral_len_z()).map(|j| j as f64).collect();
    let (a, rest) = u.split_at_mut(1);
    let (b, c) = rest.split_at_mut(1);
    ndarray::Zip::indexed(a[0].coeffs_mut())
        .and(b[0].coeffs_mut())
        .and(c[0].coeffs_mut())
        .for_each(|(i, j, k), ux, uy, uz| {
            let (x, y, z) = (kx[i], kx[j], kz[k]);
            let k2 = x * x + y * y + z * z;
            if k2 > 0.0 {
                let dot = (x * *ux + y * *uy + z * *uz) / k2;
                *ux -= x * dot;
                *uy -= y * dot;
                *uz -= z * dot;
            }
        });
}

/// Leray projection: the L²-orthogonal projection onto divergence-free
/// fields. Idempotent; annihilates gradients; preserves the mean mode.
pub fn leray_project(v: &VectorField) -> Result<VectorField> {
    let mut u = forward_vector(v)?;
    leray_project_spec(&mut u);
    inverse_vector(&u)
}

/// L² norm of the spectral divergence of a velocity field; the invariant
/// `divergence(leray_project(v)) ≈ 0` is checked against this quantity.
pub fn spectral_divergence_norm(v: &VectorField) -> Result<f64> {
    let u = forward_vector(v)?;
    Ok(divergence_spec(&u).l2_norm())
}
