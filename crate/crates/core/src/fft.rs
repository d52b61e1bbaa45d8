//! Rigorous radix-2 FFT over complex intervals.
//!
//! Convention: `u_k = (1/N) sum_j u_j e^{-2 pi i k j / N}` for `k` in
//! `I_N = {-N/2, ..., N/2 - 1}`. Coefficients leave this module in symmetric
//! order so the rest of the crate indexes by signed `k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::interval::{two_pi_enclosure, ComplexInterval, RealInterval};

/// Samples on the regular grid `theta_j = j / N`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSamples {
    values: Vec<ComplexInterval>,
}

impl GridSamples {
    pub fn new(values: Vec<ComplexInterval>) -> Result<Self> {
        check_pow2(values.len())?;
        Ok(GridSamples { values })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        GridSamples::new(points.iter().map(|&(re, im)| ComplexInterval::point(re, im)).collect())
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[ComplexInterval] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ComplexInterval> {
        self.values
    }
}

/// DFT coefficients indexed over `I_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoeffs {
    /// `coeffs[i]` holds mode `k = i - N/2`.
    coeffs: Vec<ComplexInterval>,
}

impl SpectralCoeffs {
    /// Builds from coefficients already in symmetric order (`-N/2` first).
    pub fn from_symmetric(coeffs: Vec<ComplexInterval>) -> Result<Self> {
        check_pow2(coeffs.len())?;
        Ok(SpectralCoeffs { coeffs })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        SpectralCoeffs::from_symmetric(vec![ComplexInterval::ZERO; n])
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn k_min(&self) -> i64 {
        -(self.n() as i64 / 2)
    }

    pub fn k_max(&self) -> i64 {
        self.n() as i64 / 2 - 1
    }

    pub fn in_range(&self, k: i64) -> bool {
        self.k_min() <= k && k <= self.k_max()
    }

    /// Coefficient of mode `k`; zero outside `I_N`.
    pub fn get(&self, k: i64) -> ComplexInterval {
        if self.in_range(k) {
            self.coeffs[(k - self.k_min()) as usize]
        } else {
            ComplexInterval::ZERO
        }
    }

    /// Panics if `k` is outside `I_N`.
    pub fn set(&mut self, k: i64, c: ComplexInterval) {
        assert!(self.in_range(k), "mode {k} outside I_N");
        let i = (k - self.k_min()) as usize;
        self.coeffs[i] = c;
    }

    pub fn as_symmetric(&self) -> &[ComplexInterval] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ComplexInterval)> {
        let k0 = self.k_min();
        self.coeffs.iter().enumerate().map(move |(i, c)| (k0 + i as i64, c))
    }
}

fn check_pow2(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        Err(Error::SizeNotPowerOfTwo(n))
    } else {
        Ok(())
    }
}

/// Enclosures of `e^{-2 pi i j / N}` for `j in 0..N/2`.
fn twiddles(n: usize) -> Result<Arc<Vec<ComplexInterval>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<ComplexInterval>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(w) = cache.lock().expect("twiddle cache poisoned").get(&n) {
        return Ok(w.clone());
    }
    let half = n / 2;
    let two_pi = two_pi_enclosure();
    let mut w = Vec::with_capacity(half);
    for j in 0..half {
        let c = if j == 0 {
            ComplexInterval::ONE
        } else if 4 * j == n {
            -ComplexInterval::I
        } else {
            // j/N is exact for a power-of-two N
            let t = two_pi * RealInterval::point(j as f64 / n as f64);
            ComplexInterval::expi(-t)?
        };
        w.push(c);
    }
    let w = Arc::new(w);
    cache.lock().expect("twiddle cache poisoned").insert(n, w.clone());
    Ok(w)
}

fn bit_reverse(a: &mut [ComplexInterval]) {
    let n = a.len();
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place unnormalized DIT transform; `inverse` flips the twiddle sign.
fn transform(a: &mut [ComplexInterval], inverse: bool) -> Result<()> {
    let n = a.len();
    check_pow2(n)?;
    if n == 1 {
        return Ok(());
    }
    let w = twiddles(n)?;
    bit_reverse(a);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                let tw = if inverse { w[j * stride].conj() } else { w[j * stride] };
                let u = a[start + j];
                let v = a[start + j + half] * tw;
                a[start + j] = u + v;
                a[start + j + half] = u - v;
            }
        }
        len *= 2;
    }
    Ok(())
}

/// Forward DFT with `1/N` normalization, re-indexed to `I_N`.
pub fn fft_forward(samples: &GridSamples) -> Result<SpectralCoeffs> {
    let n = samples.n();
    let mut a = samples.values.clone();
    transform(&mut a, false)?;
    let scale = RealInterval::point(1.0 / n as f64);
    Ok(SpectralCoeffs {
        coeffs: to_symmetric(a.into_iter().map(|c| c.scale(scale)).collect()),
    })
}

/// Inverse DFT: `u_j = sum_k c_k e^{2 pi i k j / N}`.
pub fn fft_inverse(coeffs: &SpectralCoeffs) -> Result<GridSamples> {
    let mut a = from_symmetric(&coeffs.coeffs);
    transform(&mut a, true)?;
    Ok(GridSamples { values: a })
}

/// Direct O(N^2) forward DFT with the same contract as [`fft_forward`].
pub fn dft_naive(samples: &GridSamples) -> Result<SpectralCoeffs> {
    let n = samples.n();
    check_pow2(n)?;
    let w = twiddles(2 * n)?;
    // e^{-2 pi i m / N} = w_{2N}[2m] for m in 0..N/2, and its negation beyond
    let root = |m: usize| -> ComplexInterval {
        let m = m % n;
        if m < n / 2 {
            w[2 * m]
        } else {
            -w[2 * (m - n / 2)]
        }
    };
    let scale = RealInterval::point(1.0 / n as f64);
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = ComplexInterval::ZERO;
        for (j, u) in samples.values.iter().enumerate() {
            acc += *u * root(m * j);
        }
        out.push(acc.scale(scale));
    }
    Ok(SpectralCoeffs {
        coeffs: to_symmetric(out),
    })
}

/// `[0, N)` order to symmetric order.
fn to_symmetric(mut a: Vec<ComplexInterval>) -> Vec<ComplexInterval> {
    let half = a.len() / 2;
    a.rotate_left(half);
    a
}

/// Symmetric order to `[0, N)` order.
fn from_symmetric(a: &[ComplexInterval]) -> Vec<ComplexInterval> {
    let mut v = a.to_vec();
    let half = v.len() / 2;
    v.rotate_left(half);
    v
}
