//! The boxes method: cover the complex strip by `N` rectangles centered at
//! grid points and enclose a series (or a composition) on each of them.

use crate::error::{Error, Result};
use crate::fft::{fft_inverse, SpectralCoeffs};
use crate::interval::{ComplexInterval, RealInterval};
use crate::series::FourierSeries;

/// Box `j` is `theta_j + [-1/(2N), 1/(2N)] + i[-rho, rho]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxGrid {
    n: usize,
    rho: f64,
    /// The common offset `[-1/(2N), 1/(2N)] + i[-rho, rho]`.
    phi: ComplexInterval,
    boxes: Vec<ComplexInterval>,
}

impl BoxGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phi(&self) -> ComplexInterval {
        self.phi
    }

    pub fn boxes(&self) -> &[ComplexInterval] {
        &self.boxes
    }
}

pub fn make_boxes(n: usize, rho: f64) -> Result<BoxGrid> {
    if n < 2 {
        return Err(Error::BadSize(format!("box grid needs N >= 2, got {n}")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::DomainError("box grid needs a finite rho >= 0"));
    }
    let nf = RealInterval::point(n as f64);
    let h = RealInterval::ONE.checked_div(&(nf * 2.0))?;
    let half = RealInterval::new(-h.hi(), h.hi())?;
    let im = RealInterval::new(-rho, rho)?;
    let boxes = (0..n)
        .map(|j| {
            let c = RealInterval::point(j as f64).checked_div(&nf)?;
            Ok(ComplexInterval::new(c + half, im))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxGrid {
        n,
        rho,
        phi: ComplexInterval::new(half, im),
        boxes,
    })
}

/// Entry `j` encloses `s(theta)` for every `theta` in box `j`.
///
/// The series is shifted by the box offset, then each shifted coefficient
/// is replaced by its midpoint plus a radius. The midpoints go through one
/// inverse FFT and the summed radius is added back to every box. Since
/// `|e^{2 pi i k theta_j}| = 1`, this is exact set arithmetic and avoids the
/// wrapping growth of rotating rectangles through every FFT stage.
pub fn enclose_series_on_boxes(s: &FourierSeries, grid: &BoxGrid) -> Result<Vec<ComplexInterval>> {
    let (centers, r) = balls_on_boxes(s, grid)?;
    Ok(centers.into_iter().map(|v| v.inflate(r)).collect())
}

/// Sup-norm bound of a series on the strip of `grid`: `max_j |center_j| + r`.
///
/// Tighter than taking rectangle corners of [`enclose_series_on_boxes`],
/// which must wrap the radius-`r` disc in a square.
pub fn sup_norm_series_on_boxes(s: &FourierSeries, grid: &BoxGrid) -> Result<f64> {
    let (centers, r) = balls_on_boxes(s, grid)?;
    let m = centers.iter().map(ComplexInterval::abs_upper).fold(0.0, f64::max);
    Ok((RealInterval::point(m) + r).hi())
}

/// Per-box disc enclosures: box `j` holds `centers[j] + disc(0, r)`.
fn balls_on_boxes(s: &FourierSeries, grid: &BoxGrid) -> Result<(Vec<ComplexInterval>, f64)> {
    if s.n() != grid.n {
        return Err(Error::DimensionMismatch(format!(
            "series N = {} on a box grid with N = {}",
            s.n(),
            grid.n
        )));
    }
    let shifted = s.shift_complex(grid.phi)?;
    let mut mids = Vec::with_capacity(s.n());
    let mut radius = RealInterval::ZERO;
    for (_, c) in shifted.coeffs().iter() {
        let (re, im) = c.mid();
        let m = ComplexInterval::point(re, im);
        radius += RealInterval::point((*c - m).abs_upper());
        mids.push(m);
    }
    let centers = fft_inverse(&SpectralCoeffs::from_symmetric(mids)?)?;
    Ok((centers.into_values(), radius.hi()))
}

/// Max over boxes of the max over components of the modulus bound.
pub fn sup_norm_on_strip(values: &[Vec<ComplexInterval>]) -> f64 {
    values
        .iter()
        .flat_map(|b| b.iter().map(ComplexInterval::abs_upper))
        .fold(0.0, f64::max)
}

/// Widens every component by `r` in both real and imaginary directions.
pub fn thicken_fiber(values: &[Vec<ComplexInterval>], r: f64) -> Vec<Vec<ComplexInterval>> {
    values
        .iter()
        .map(|b| b.iter().map(|z| z.inflate(r)).collect())
        .collect()
}

/// Transposes per-component box vectors into per-box fiber vectors.
pub fn per_box(components: &[Vec<ComplexInterval>]) -> Vec<Vec<ComplexInterval>> {
    let n = components.first().map_or(0, Vec::len);
    (0..n).map(|j| components.iter().map(|c| c[j]).collect()).collect()
}
