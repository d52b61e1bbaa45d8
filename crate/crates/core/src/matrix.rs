//! Matrices of Fourier series, interval matrices at grid points, grid
//! products and certified inverses.

use crate::dft_bounds::cn;
use crate::error::{Error, Result};
use crate::fft::GridSamples;
use crate::interval::{ComplexInterval, RealInterval};
use crate::series::{build_series, FourierSeries};

/// Dense matrix of complex intervals (one grid point or one box).
#[derive(Clone, Debug, PartialEq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<ComplexInterval>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![ComplexInterval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ComplexInterval::ONE);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<ComplexInterval>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IMat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexInterval {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ComplexInterval) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &IMat) -> Result<IMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = ComplexInterval::ZERO;
                for l in 0..self.cols {
                    acc += self.get(i, l) * rhs.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &IMat) -> Result<IMat> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        Ok(IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        })
    }

    /// Interval Gauss-Jordan inverse with partial pivoting on midpoint
    /// magnitude. `point` only labels the error.
    pub fn inverse(&self, point: usize) -> Result<IMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = IMat::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| {
                    let mx = mid_mag(&a.get(x, col));
                    let my = mid_mag(&a.get(y, col));
                    mx.total_cmp(&my)
                })
                .expect("non-empty pivot range");
            if a.get(piv, col).contains_zero() {
                return Err(Error::SingularGridPoint(point));
            }
            if piv != col {
                for j in 0..n {
                    let t = a.get(col, j);
                    a.set(col, j, a.get(piv, j));
                    a.set(piv, j, t);
                    let t = inv.get(col, j);
                    inv.set(col, j, inv.get(piv, j));
                    inv.set(piv, j, t);
                }
            }
            let p = a.get(col, col).recip().map_err(|_| Error::SingularGridPoint(point))?;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * p);
                inv.set(col, j, inv.get(col, j) * p);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a.get(i, col);
                if f.is_exact_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - f * a.get(col, j));
                    inv.set(i, j, inv.get(i, j) - f * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }
}

fn mid_mag(c: &ComplexInterval) -> f64 {
    let (re, im) = c.mid();
    re.hypot(im)
}

/// `rows x cols` matrix of series sharing one grid size.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FourierSeries>,
}

/// Certified inverse of a matrix function from grid inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseEnclosure {
    pub x_tilde: FourierMatrix,
    pub gamma_norm: f64,
    pub inv_norm: f64,
    pub diff_norm: f64,
}

/// How `mat_norm` bounds the sup norm of each entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMode {
    Fourier,
    Boxes,
}

impl FourierMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FourierSeries>) -> Result<Self> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let n = entries[0].n();
        if entries.iter().any(|e| e.n() != n) {
            return Err(Error::DimensionMismatch("entries with different N".into()));
        }
        Ok(FourierMatrix { rows, cols, entries })
    }

    /// Constant matrix function.
    pub fn constant(n: usize, m: &IMat) -> Result<Self> {
        let entries = m
            .data
            .iter()
            .map(|&c| FourierSeries::constant(n, c))
            .collect::<Result<Vec<_>>>()?;
        FourierMatrix::new(m.rows, m.cols, entries)
    }

    pub fn identity(n: usize, m: usize) -> Result<Self> {
        FourierMatrix::constant(n, &IMat::identity(m))
    }

    pub fn column(entries: Vec<FourierSeries>) -> Result<Self> {
        let r = entries.len();
        FourierMatrix::new(r, 1, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> usize {
        self.entries[0].n()
    }

    pub fn get(&self, i: usize, j: usize) -> &FourierSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[FourierSeries] {
        &self.entries
    }

    pub fn map(&self, f: impl FnMut(&FourierSeries) -> Result<FourierSeries>) -> Result<FourierMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        FourierMatrix::new(self.rows, self.cols, entries)
    }

    pub fn rotate(&self, omega: RealInterval) -> Result<FourierMatrix> {
        self.map(|s| s.rotate(omega))
    }

    pub fn pad(&self, new_n: usize) -> Result<FourierMatrix> {
        self.map(|s| s.pad(new_n))
    }

    pub fn truncate_noise(&self, floor: f64) -> FourierMatrix {
        self.map(|s| Ok(s.truncate_noise(floor)))
            .expect("truncation preserves shape")
    }

    pub fn checked_sub(&self, other: &FourierMatrix) -> Result<FourierMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        FourierMatrix::new(self.rows, self.cols, entries)
    }

    /// Subtracts a constant matrix from the zero modes.
    pub fn sub_constant(&self, c: &IMat) -> Result<FourierMatrix> {
        if self.rows != c.rows || self.cols != c.cols {
            return Err(Error::DimensionMismatch("constant difference".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&c.data)
            .map(|(s, v)| s.add_constant(-*v))
            .collect();
        FourierMatrix::new(self.rows, self.cols, entries)
    }

    /// Matrix values at `theta_j = j / N`.
    pub fn to_grid(&self) -> Result<Vec<IMat>> {
        let grids = self
            .entries
            .iter()
            .map(|s| s.to_grid().map(GridSamples::into_values))
            .collect::<Result<Vec<_>>>()?;
        let n = self.n();
        Ok((0..n)
            .map(|j| IMat {
                rows: self.rows,
                cols: self.cols,
                data: grids.iter().map(|g| g[j]).collect(),
            })
            .collect())
    }

    /// Interpolates grid matrices by FFT, keeping the Nyquist mode.
    pub fn from_grid(values: &[IMat]) -> Result<FourierMatrix> {
        let first = values.first().ok_or_else(|| Error::BadSize("empty grid".into()))?;
        let (rows, cols) = (first.rows, first.cols);
        let mut entries = Vec::with_capacity(rows * cols);
        for idx in 0..rows * cols {
            let samples = GridSamples::new(values.iter().map(|m| m.data[idx]).collect())?;
            entries.push(build_series(&samples, false, false)?);
        }
        FourierMatrix::new(rows, cols, entries)
    }

    /// `max_i sum_j |A_ij|_{F,rho}`.
    pub fn fourier_norm(&self, rho: f64) -> Result<f64> {
        let mut best = 0.0f64;
        for i in 0..self.rows {
            let mut row = RealInterval::ZERO;
            for j in 0..self.cols {
                row += RealInterval::point(self.get(i, j).fourier_norm(rho)?);
            }
            best = best.max(row.hi());
        }
        Ok(best)
    }
}

/// `max_i sum_j` of per-entry sup bounds, given per-box matrix enclosures.
pub fn norm_from_boxes(values: &[IMat]) -> f64 {
    let Some(first) = values.first() else {
        return 0.0;
    };
    let mut best = 0.0f64;
    for i in 0..first.rows {
        let mut row = RealInterval::ZERO;
        for j in 0..first.cols {
            let sup = values.iter().map(|m| m.get(i, j).abs_upper()).fold(0.0f64, f64::max);
            row += RealInterval::point(sup);
        }
        best = best.max(row.hi());
    }
    best
}

/// Operator-norm bound of `M` on the `rho` strip.
pub fn mat_norm(m: &FourierMatrix, rho: f64, mode: NormMode) -> Result<f64> {
    match mode {
        NormMode::Fourier => m.fourier_norm(rho),
        NormMode::Boxes => {
            let grid = crate::boxes::make_boxes(m.n(), rho)?;
            let mut best = 0.0f64;
            for i in 0..m.rows {
                let mut row = RealInterval::ZERO;
                for j in 0..m.cols {
                    row += RealInterval::point(crate::boxes::sup_norm_series_on_boxes(m.get(i, j), &grid)?);
                }
                best = best.max(row.hi());
            }
            Ok(best)
        }
    }
}

fn cn_upper(rho: f64, rho_hat: f64, n: usize) -> Result<f64> {
    Ok(cn(rho, rho_hat, n)?.hi())
}

/// Product of grid samples interpolated back, plus the truncation bound
/// `C_N |A|_{F,rho_hat} |B|_{F,rho_hat}`.
pub fn mat_product_grid(a: &FourierMatrix, b: &FourierMatrix, rho: f64, rho_hat: f64) -> Result<(FourierMatrix, f64)> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!("grid sizes {} and {}", a.n(), b.n())));
    }
    let ga = a.to_grid()?;
    let gb = b.to_grid()?;
    let prod = ga.iter().zip(&gb).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>()?;
    let p = FourierMatrix::from_grid(&prod)?;
    let bound =
        RealInterval::point(cn_upper(rho, rho_hat, a.n())?) * a.fourier_norm(rho_hat)? * b.fourier_norm(rho_hat)?;
    Ok((p, bound.hi()))
}

/// Inverse of a square matrix function from grid-point inverses.
pub fn mat_inverse_grid(a: &FourierMatrix, rho: f64, rho_hat: f64) -> Result<InverseEnclosure> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let inv = a
        .to_grid()?
        .iter()
        .enumerate()
        .map(|(j, m)| m.inverse(j))
        .collect::<Result<Vec<_>>>()?;
    let x_tilde = FourierMatrix::from_grid(&inv)?;
    let x_norm = RealInterval::point(x_tilde.fourier_norm(rho_hat)?);
    let gamma = RealInterval::point(cn_upper(rho, rho_hat, a.n())?) * a.fourier_norm(rho_hat)? * x_norm;
    if gamma.hi() >= 1.0 {
        return Err(Error::GammaNotContracting(gamma.hi()));
    }
    let gamma = RealInterval::point(gamma.hi());
    let denom = RealInterval::ONE - gamma;
    let inv_norm = x_norm.checked_div(&denom)?.hi();
    let diff_norm = (x_norm * gamma).checked_div(&denom)?.hi();
    Ok(InverseEnclosure {
        x_tilde,
        gamma_norm: gamma.hi(),
        inv_norm,
        diff_norm,
    })
}
