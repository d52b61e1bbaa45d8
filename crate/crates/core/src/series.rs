//! Truncated Fourier series on the 1-torus with interval coefficients.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::fft::{fft_forward, fft_inverse, GridSamples, SpectralCoeffs};
use crate::interval::{two_pi_enclosure, ComplexInterval, RealInterval};

/// `sum_{k in I_N} c_k e^{2 pi i k theta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    coeffs: SpectralCoeffs,
    real_analytic: bool,
}

/// Result of the exponential regression `log|c_k| ~ a - 2 pi rho* |k|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoFit {
    pub rho_star: f64,
    pub intercept: f64,
    pub fit_range: (usize, usize),
}

/// `e^{2 pi |k| rho}` as an interval, erroring instead of overflowing.
fn strip_weight(k: i64, rho: f64) -> Result<RealInterval> {
    if k == 0 || rho == 0.0 {
        return Ok(RealInterval::ONE);
    }
    (two_pi_enclosure() * RealInterval::point(k.unsigned_abs() as f64) * rho)
        .exp()
        .map_err(|_| Error::Overflow(format!("e^(2 pi |k| rho) for k = {k}, rho = {rho}")))
}

impl FourierSeries {
    pub fn new(coeffs: SpectralCoeffs, real_analytic: bool) -> Self {
        FourierSeries { coeffs, real_analytic }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Ok(FourierSeries::new(SpectralCoeffs::zeros(n)?, true))
    }

    pub fn constant(n: usize, c: ComplexInterval) -> Result<Self> {
        let mut s = FourierSeries::zeros(n)?;
        s.coeffs.set(0, c);
        s.real_analytic = c.im.contains_zero();
        Ok(s)
    }

    /// Series with the listed modes set and every other mode zero.
    pub fn from_modes(n: usize, modes: &[(i64, ComplexInterval)], real_analytic: bool) -> Result<Self> {
        let mut c = SpectralCoeffs::zeros(n)?;
        for &(k, v) in modes {
            if !c.in_range(k) {
                return Err(Error::SizeMismatch(format!("mode {k} outside I_N for N = {n}")));
            }
            c.set(k, v);
        }
        Ok(FourierSeries::new(c, real_analytic))
    }

    pub fn n(&self) -> usize {
        self.coeffs.n()
    }

    pub fn coeff(&self, k: i64) -> ComplexInterval {
        self.coeffs.get(k)
    }

    pub fn set_coeff(&mut self, k: i64, c: ComplexInterval) {
        self.coeffs.set(k, c);
    }

    pub fn coeffs(&self) -> &SpectralCoeffs {
        &self.coeffs
    }

    pub fn is_real_analytic(&self) -> bool {
        self.real_analytic
    }

    pub fn set_real_analytic(&mut self, flag: bool) {
        self.real_analytic = flag;
    }

    /// `c_{-k}` intersects `conj(c_k)` for every pair inside `I_N`, and `c_0` may be real.
    pub fn check_symmetry(&self) -> Result<()> {
        if !self.coeff(0).im.contains_zero() {
            return Err(Error::SymmetryViolation { k: 0 });
        }
        for k in 1..=self.coeffs.k_max() {
            if !self.coeff(-k).intersects(&self.coeff(k).conj()) {
                return Err(Error::SymmetryViolation { k });
            }
        }
        Ok(())
    }

    pub fn map_coeffs(
        &self,
        real_analytic: bool,
        mut f: impl FnMut(i64, &ComplexInterval) -> Result<ComplexInterval>,
    ) -> Result<FourierSeries> {
        let v = self.coeffs.iter().map(|(k, c)| f(k, c)).collect::<Result<Vec<_>>>()?;
        Ok(FourierSeries::new(SpectralCoeffs::from_symmetric(v)?, real_analytic))
    }

    /// `s(theta + omega)`: coefficient `k` times `e^{2 pi i k omega}`.
    pub fn rotate(&self, omega: RealInterval) -> Result<FourierSeries> {
        let two_pi = two_pi_enclosure();
        self.map_coeffs(self.real_analytic, |k, c| {
            if k == 0 || c.is_exact_zero() {
                return Ok(*c);
            }
            let t = two_pi * (omega * k as f64);
            Ok(*c * ComplexInterval::expi(t)?)
        })
    }

    /// `s(theta + phi)` for a complex shift: coefficient `k` times
    /// `e^{-2 pi k Im phi} e^{2 pi i k Re phi}`.
    pub fn shift_complex(&self, phi: ComplexInterval) -> Result<FourierSeries> {
        let two_pi = two_pi_enclosure();
        self.map_coeffs(false, |k, c| {
            if k == 0 || c.is_exact_zero() {
                return Ok(*c);
            }
            Ok(*c * shift_factor(two_pi, k, phi)?)
        })
    }

    /// Encloses `s(theta)` over the box `theta` by direct summation.
    pub fn eval(&self, theta: ComplexInterval) -> Result<ComplexInterval> {
        let two_pi = two_pi_enclosure();
        let mut acc = ComplexInterval::ZERO;
        for (k, c) in self.coeffs.iter() {
            if c.is_exact_zero() {
                continue;
            }
            acc += if k == 0 {
                *c
            } else {
                *c * shift_factor(two_pi, k, theta)?
            };
        }
        Ok(acc)
    }

    /// Upper bound of `sum_k |c_k| e^{2 pi |k| rho}`.
    pub fn fourier_norm(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(Error::DomainError("fourier_norm needs rho >= 0"));
        }
        let mut acc = RealInterval::ZERO;
        for (k, c) in self.coeffs.iter() {
            let a = c.abs_upper();
            if a == 0.0 {
                continue;
            }
            acc += RealInterval::point(a) * strip_weight(k, rho)?;
        }
        Ok(acc.hi())
    }

    /// Embeds into a larger `I_N`, filling new modes with exact zeros.
    pub fn pad(&self, new_n: usize) -> Result<FourierSeries> {
        if new_n < self.n() || !new_n.is_power_of_two() {
            return Err(Error::BadSize(format!("cannot pad N = {} to {new_n}", self.n())));
        }
        let mut c = SpectralCoeffs::zeros(new_n)?;
        for (k, v) in self.coeffs.iter() {
            // the old Nyquist mode -N/2 is an unpaired interior mode in the
            // larger grid; keep it so the padded series is the same function
            c.set(k, *v);
        }
        Ok(FourierSeries::new(c, self.real_analytic))
    }

    /// Drops the smaller-N modes, the inverse of `pad` on padded input.
    pub fn truncate_to(&self, new_n: usize) -> Result<FourierSeries> {
        if new_n > self.n() || !new_n.is_power_of_two() {
            return Err(Error::BadSize(format!("cannot truncate N = {} to {new_n}", self.n())));
        }
        let mut c = SpectralCoeffs::zeros(new_n)?;
        for k in c.k_min()..=c.k_max() {
            c.set(k, self.coeff(k));
        }
        Ok(FourierSeries::new(c, self.real_analytic))
    }

    /// Zeroes every mode with `|k|` beyond the last `|k|` whose coefficient
    /// (either sign) reaches `floor`.
    pub fn truncate_noise(&self, floor: f64) -> FourierSeries {
        if floor <= 0.0 {
            return self.clone();
        }
        let k_last = self
            .coeffs
            .iter()
            .filter(|(_, c)| c.abs_upper() >= floor)
            .map(|(k, _)| k.abs())
            .max()
            .unwrap_or(-1);
        let mut out = self.clone();
        for k in self.coeffs.k_min()..=self.coeffs.k_max() {
            if k.abs() > k_last {
                out.coeffs.set(k, ComplexInterval::ZERO);
            }
        }
        out
    }

    /// Largest `|k|` with a nonzero coefficient, or `None` for the zero series.
    pub fn support_radius(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(k, _)| k.abs())
            .max()
    }

    /// Values on the grid `theta_j = j/N` by inverse FFT.
    pub fn to_grid(&self) -> Result<GridSamples> {
        fft_inverse(&self.coeffs)
    }

    /// Sets the Nyquist coefficient to exact zero.
    pub fn zero_nyquist(&mut self) {
        let k = self.coeffs.k_min();
        self.coeffs.set(k, ComplexInterval::ZERO);
    }

    pub fn scale(&self, s: ComplexInterval) -> FourierSeries {
        let real = self.real_analytic && s.im.is_exact_zero();
        self.map_coeffs(real, |_, c| Ok(*c * s))
            .expect("scaling preserves size")
    }

    pub fn add_constant(&self, c: ComplexInterval) -> FourierSeries {
        let mut out = self.clone();
        out.coeffs.set(0, self.coeff(0) + c);
        out.real_analytic = self.real_analytic && c.im.contains_zero();
        out
    }

    pub fn checked_add(&self, other: &FourierSeries) -> Result<FourierSeries> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &FourierSeries) -> Result<FourierSeries> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &FourierSeries,
        f: impl Fn(ComplexInterval, ComplexInterval) -> ComplexInterval,
    ) -> Result<FourierSeries> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "series sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        let v = self
            .coeffs
            .as_symmetric()
            .iter()
            .zip(other.coeffs.as_symmetric())
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(FourierSeries::new(
            SpectralCoeffs::from_symmetric(v)?,
            self.real_analytic && other.real_analytic,
        ))
    }

    /// Non-rigorous estimate of the analyticity strip from coefficient decay.
    pub fn fit_rho(&self) -> Result<RhoFit> {
        let half = self.n() as i64 / 2;
        // midpoint magnitude per |k|, sign pair merged
        let mag: Vec<f64> = (0..=half)
            .map(|k| {
                let a = mid_abs(&self.coeff(k));
                let b = mid_abs(&self.coeff(-k));
                a.max(b)
            })
            .collect();

        let q = (3 * half as usize) / 4;
        let mut top: Vec<f64> = mag[q..].to_vec();
        top.sort_by(f64::total_cmp);
        let floor = 8.0 * top[top.len() / 2];

        // pre-noise range: k = 1 up to the last mode above the floor. Modes
        // below it inside the range (e.g. killed by a symmetry) are skipped.
        let k_end = mag.iter().rposition(|&m| m > floor).unwrap_or(0);
        let pts: Vec<(f64, f64)> = (1..=k_end)
            .filter(|&k| mag[k] > floor)
            .map(|k| (k as f64, mag[k].ln()))
            .collect();
        if pts.len() < 8 {
            return Err(Error::InsufficientDecay { usable: pts.len() });
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        Ok(RhoFit {
            rho_star: -slope / (2.0 * std::f64::consts::PI),
            intercept,
            fit_range: (1, k_end),
        })
    }
}

fn mid_abs(c: &ComplexInterval) -> f64 {
    let (re, im) = c.mid();
    re.hypot(im)
}

/// `e^{2 pi i k phi}` for a complex box `phi`.
fn shift_factor(two_pi: RealInterval, k: i64, phi: ComplexInterval) -> Result<ComplexInterval> {
    let kf = k as f64;
    let decay = if phi.im.is_exact_zero() {
        RealInterval::ONE
    } else {
        (-(two_pi * (phi.im * kf)))
            .exp()
            .map_err(|_| Error::Overflow(format!("complex shift too wide for mode k = {k}")))?
    };
    let rot = if phi.re.is_exact_zero() {
        ComplexInterval::ONE
    } else {
        ComplexInterval::expi(two_pi * (phi.re * kf))?
    };
    Ok(rot.scale(decay))
}

/// FFT of grid samples into a series, optionally zeroing the Nyquist mode
/// and checking conjugate symmetry.
pub fn build_series(samples: &GridSamples, zero_nyquist: bool, enforce_real: bool) -> Result<FourierSeries> {
    let mut s = FourierSeries::new(fft_forward(samples)?, false);
    if zero_nyquist {
        s.zero_nyquist();
    }
    if enforce_real {
        s.check_symmetry()?;
        s.real_analytic = true;
    }
    Ok(s)
}

impl Add for &FourierSeries {
    type Output = FourierSeries;
    fn add(self, rhs: &FourierSeries) -> FourierSeries {
        self.checked_add(rhs).expect("series sizes differ")
    }
}

impl Sub for &FourierSeries {
    type Output = FourierSeries;
    fn sub(self, rhs: &FourierSeries) -> FourierSeries {
        self.checked_sub(rhs).expect("series sizes differ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval::point(re, im)
    }

    fn cos_samples(n: usize) -> GridSamples {
        let pts: Vec<(f64, f64)> = (0..n).map(|j| ((2.0 * PI * j as f64 / n as f64).cos(), 0.0)).collect();
        GridSamples::from_points(&pts).unwrap()
    }

    #[test]
    fn cosine_series() {
        let s = build_series(&cos_samples(16), true, true).unwrap();
        assert!(s.coeff(1).re.contains(0.5) && s.coeff(-1).re.contains(0.5));
        assert!(s.coeff(-8).is_exact_zero());
        assert!(s.is_real_analytic());
    }

    #[test]
    fn asymmetric_samples_rejected() {
        let n = 16;
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                // cos plus 1e-3 e^{2 pi i 2 theta} without its conjugate partner
                (t.cos() + 1e-3 * (2.0 * t).cos(), 1e-3 * (2.0 * t).sin())
            })
            .collect();
        let g = GridSamples::from_points(&pts).unwrap();
        assert!(matches!(
            build_series(&g, true, true),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn quarter_turn_rotation() {
        let s = FourierSeries::from_modes(8, &[(1, pt(1.0, 0.0))], false).unwrap();
        let r = s.rotate(RealInterval::point(0.25)).unwrap();
        assert!(r.coeff(1).contains(0.0, 1.0));
        let id = s.rotate(RealInterval::ZERO).unwrap();
        assert!(id.coeff(1).contains(1.0, 0.0));
    }

    #[test]
    fn rotate_round_trip() {
        let s = FourierSeries::from_modes(8, &[(1, pt(0.3, 0.2)), (-3, pt(-0.1, 0.7))], false).unwrap();
        let w = RealInterval::point(0.618);
        let back = s.rotate(w).unwrap().rotate(-w).unwrap();
        assert!(back.coeff(1).contains(0.3, 0.2) && back.coeff(-3).contains(-0.1, 0.7));
    }

    #[test]
    fn imaginary_shift_scales_mode() {
        let s = FourierSeries::from_modes(8, &[(1, pt(1.0, 0.0))], true).unwrap();
        let r = s.shift_complex(pt(0.0, 0.1)).unwrap();
        assert!(r.coeff(1).re.contains((-2.0 * PI * 0.1).exp()));
        assert!(!r.is_real_analytic());
        let e = s.eval(pt(0.0, 0.1)).unwrap();
        assert!(e.re.contains((-2.0 * PI * 0.1).exp()));
    }

    #[test]
    fn shift_overflow() {
        let s = FourierSeries::from_modes(256, &[(127, pt(1.0, 0.0))], true).unwrap();
        assert!(matches!(s.shift_complex(pt(0.0, -1.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn norms() {
        let s = FourierSeries::from_modes(8, &[(1, pt(1.0, 0.0))], false).unwrap();
        let v = s.fourier_norm(0.1).unwrap();
        let e = (0.2 * PI).exp();
        assert!(v >= e && v <= e * (1.0 + 1e-10));
        let c = FourierSeries::constant(8, pt(-2.5, 0.0)).unwrap();
        assert!((c.fourier_norm(0.0).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn pad_and_truncate() {
        let s = FourierSeries::from_modes(
            8,
            &[
                (0, pt(1.0, 0.0)),
                (2, pt(1e-14, 0.0)),
                (-2, pt(1e-14, 0.0)),
                (3, pt(0.5, 0.0)),
            ],
            false,
        )
        .unwrap();
        let p = s.pad(32).unwrap();
        for &t in &[0.1, 0.37, 0.8] {
            let a = s.eval(pt(t, 0.0)).unwrap();
            let b = p.eval(pt(t, 0.0)).unwrap();
            assert!(a.intersects(&b));
        }
        assert_eq!(s.truncate_noise(0.0), s);
        let t = s.truncate_noise(1e-13);
        assert_eq!(t.coeff(3), s.coeff(3));
        assert!(s.pad(4).is_err());
        assert!(s.pad(12).is_err());
    }

    #[test]
    fn fit_recovers_rate() {
        let n = 64;
        let modes: Vec<(i64, ComplexInterval)> = (-31..32)
            .map(|k: i64| (k, pt((-2.0 * PI * 0.1 * k.abs() as f64).exp(), 0.0)))
            .collect();
        let s = FourierSeries::from_modes(n, &modes, true).unwrap();
        let f = s.fit_rho().unwrap();
        assert!((0.099..=0.101).contains(&f.rho_star), "{f:?}");

        let flat: Vec<(i64, ComplexInterval)> = (-31..32).map(|k| (k, pt(1.0, 0.0))).collect();
        let s = FourierSeries::from_modes(n, &flat, true).unwrap();
        assert!(matches!(s.fit_rho(), Err(Error::InsufficientDecay { .. })));
    }
}
