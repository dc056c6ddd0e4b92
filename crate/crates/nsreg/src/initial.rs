//! Initial-condition library: the Taylor–Green vortex and deterministic
//! band-limited random fields.
//!
//! Random fields are drawn mode-by-mode over a fixed wavenumber box that
//! depends only on (seed, spectrum_peak), never on the grid size, so the same
//! seed realizes the same continuum field at every resolution that holds its
//! band. This is what makes resolution-doubling comparisons meaningful.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;
use crate::norms::lq_norm;
use crate::spectral::{leray_project_spec, transform_inverse, SpectralField};
use ndarray::Array3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// The Taylor–Green vortex (sin x cos y cos z, −cos x sin y cos z, 0),
/// divergence-free by construction.
pub fn taylor_green(grid: Grid) -> VectorField {
    VectorField::from_fns(
        grid,
        |x, y, z| x.sin() * y.cos() * z.cos(),
        |x, y, z| -(x.cos()) * y.sin() * z.cos(),
        |_, _, _| 0.0,
    )
}

/// Band limit of the random ensembles: modes with |k_i| ≤ 2·spectrum_peak.
pub fn random_band_limit(spectrum_peak: u32) -> i64 {
    2 * spectrum_peak as i64
}

fn check_band(grid: Grid, spectrum_peak: u32) -> Result<i64> {
    if spectrum_peak == 0 {
        return Err(Error::InvalidArgument("spectrum_peak must be >= 1".into()));
    }
    let band = random_band_limit(spectrum_peak);
    if band as f64 > grid.dealias_cutoff() {
        return Err(Error::InvalidArgument(format!(
            "spectrum_peak {spectrum_peak} puts the band |k| <= {band} beyond the dealias cutoff {:.2}",
            grid.dealias_cutoff()
        )));
    }
    Ok(band)
}

fn envelope(kx: i64, ky: i64, kz: i64, peak: f64) -> f64 {
    if kx == 0 && ky == 0 && kz == 0 {
        return 0.0;
    }
    let kk = ((kx * kx + ky * ky + kz * kz) as f64).sqrt();
    let sigma = (peak / 2.0).max(0.5);
    (-(kk - peak) * (kk - peak) / (2.0 * sigma * sigma)).exp()
}

/// Fill half-space spectra from one ChaCha stream, `comps` components with
/// independent complex Gaussians per mode, hermitian-symmetrized.
fn draw_spectra(grid: Grid, seed: u64, peak: u32, comps: usize) -> Result<Vec<SpectralField>> {
    let band = check_band(grid, peak)?;
    let n = grid.n() as i64;
    let nh = grid.spectral_len_z();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut draw = |rng: &mut ChaCha12Rng| -> Complex64 {
        let re: f64 = normal.sample(rng);
        let im: f64 = normal.sample(rng);
        Complex64::new(re, im)
    };
    // raw coefficients over the full band box, in a fixed lexicographic order
    let side = (2 * band + 1) as usize;
    let mut raw = vec![Complex64::default(); side * side * side * comps];
    let idx = |kx: i64, ky: i64, kz: i64, c: usize| -> usize {
        let ix = (kx + band) as usize;
        let iy = (ky + band) as usize;
        let iz = (kz + band) as usize;
        ((ix * side + iy) * side + iz) * comps + c
    };
    for kx in -band..=band {
        for ky in -band..=band {
            for kz in -band..=band {
                for c in 0..comps {
                    raw[idx(kx, ky, kz, c)] = draw(&mut rng);
                }
            }
        }
    }
    let peak_f = peak as f64;
    let mut out = Vec::with_capacity(comps);
    for c in 0..comps {
        let mut coeffs = Array3::<Complex64>::zeros((grid.n(), grid.n(), nh));
        for kx in -band..=band {
            for ky in -band..=band {
                for kz in 0..=band {
                    let env = envelope(kx, ky, kz, peak_f);
                    if env == 0.0 {
                        continue;
                    }
                    let plus = raw[idx(kx, ky, kz, c)];
                    let minus = raw[idx(-kx, -ky, -kz, c)];
                    let herm = 0.5 * (plus + minus.conj()) * env;
                    let ix = kx.rem_euclid(n) as usize;
                    let iy = ky.rem_euclid(n) as usize;
                    coeffs[[ix, iy, kz as usize]] = herm;
                }
            }
        }
        out.push(SpectralField::from_coeffs(grid, coeffs));
    }
    Ok(out)
}

/// Deterministic band-limited divergence-free random velocity field with
/// ‖u‖_{L²} equal to `amplitude`.
pub fn random_divfree(grid: Grid, seed: u64, spectrum_peak: u32, amplitude: f64) -> Result<VectorField> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be finite and >= 0, got {amplitude}"
        )));
    }
    let spectra = draw_spectra(grid, seed, spectrum_peak, 3)?;
    let mut u: [SpectralField; 3] = match <[SpectralField; 3]>::try_from(spectra) {
        Ok(v) => v,
        Err(_) => unreachable!("three components requested"),
    };
    leray_project_spec(&mut u);
    let v = VectorField::new([
        transform_inverse(&u[0]),
        transform_inverse(&u[1]),
        transform_inverse(&u[2]),
    ])?;
    if amplitude == 0.0 {
        return Ok(VectorField::zeros(grid));
    }
    let l2 = lq_norm(&v.magnitude(), 2.0)?;
    if l2 == 0.0 {
        return Err(Error::Degenerate("random field drawn identically zero".into()));
    }
    Ok(v.scale(amplitude / l2))
}

/// Deterministic band-limited mean-zero random scalar field with ‖f‖_{L²}
/// equal to `amplitude`.
pub fn random_scalar(grid: Grid, seed: u64, spectrum_peak: u32, amplitude: f64) -> Result<ScalarField> {
    let spectra = draw_spectra(grid, seed, spectrum_peak, 1)?;
    let f = transform_inverse(&spectra[0]);
    let l2 = lq_norm(&f, 2.0)?;
    if l2 == 0.0 {
        return Err(Error::Degenerate("random field drawn identically zero".into()));
    }
    Ok(f.scale(amplitude / l2))
}
