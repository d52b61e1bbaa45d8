//! The DFT approximation-error constant `C_N(rho, rho_hat)`.
//!
//! For `u` analytic on the `rho_hat` strip and its grid interpolant `u~`,
//! `|u~ - u|_rho <= C_N(rho, rho_hat) |u|_rho_hat`. Both the d-dimensional
//! form and the 1D even-N form are implemented. The terms are rearranged
//! (algebraically identically) so that no factor like `e^{pi (rho_hat + rho) N}`
//! is ever formed: it overflows for large N and cancels catastrophically
//! against its tiny prefactor.

use crate::error::{Error, Result};
use crate::interval::{pi_enclosure, two_pi_enclosure, RealInterval};

const MAX_DIMS: usize = 8;

/// Inner and outer strip widths, `0 <= rho < rho_hat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPair {
    rho: f64,
    rho_hat: f64,
}

impl StripPair {
    pub fn new(rho: f64, rho_hat: f64) -> Result<Self> {
        if !(rho.is_finite() && rho_hat.is_finite() && 0.0 <= rho && rho < rho_hat) {
            return Err(Error::BadStrip { rho, rho_hat });
        }
        Ok(StripPair { rho, rho_hat })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rho_hat(&self) -> f64 {
        self.rho_hat
    }
}

/// Grid sizes `(N_1, ..., N_d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    dims: Vec<usize>,
}

impl GridSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::BadSize("grid needs at least one dimension".into()));
        }
        if dims.len() > MAX_DIMS {
            return Err(Error::TooManyDimensions(dims.len()));
        }
        if let Some(&n) = dims.iter().find(|&&n| n < 2) {
            return Err(Error::BadSize(format!("grid size {n} < 2")));
        }
        Ok(GridSpec { dims })
    }

    pub fn one(n: usize) -> Result<Self> {
        GridSpec::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

fn overflow(e: Error) -> Error {
    match e {
        Error::NonFinite(what) => Error::Overflow(format!("C_N evaluation ({what})")),
        other => other,
    }
}

/// `(e^{2 pi d} + 1) / (e^{2 pi d} - 1)` via `expm1`; negative for `d < 0`.
fn coth_factor(delta: RealInterval) -> Result<RealInterval> {
    let m = (two_pi_enclosure() * delta).exp_m1()?;
    (m + 2.0).checked_div(&m)
}

/// `mu_N(delta)`: 1 for even N, `2 e^{pi d} / (e^{2 pi d} + 1)` for odd N.
fn mu_factor(delta: RealInterval, n: usize) -> Result<RealInterval> {
    if n.is_multiple_of(2) {
        return Ok(RealInterval::ONE);
    }
    let e1 = (pi_enclosure() * delta).exp()?;
    let e2 = (two_pi_enclosure() * delta).exp()?;
    (e1 * 2.0).checked_div(&(e2 + 1.0))
}

/// `1 - mu e^{-pi d N}` for `d > 0`, computed without cancellation when `mu = 1`.
fn one_minus_mu_decay(delta: RealInterval, n: usize) -> Result<RealInterval> {
    let x = -(pi_enclosure() * delta * n as f64);
    if n.is_multiple_of(2) {
        Ok(-x.exp_m1()?)
    } else {
        Ok(RealInterval::ONE - mu_factor(delta, n)? * x.exp()?)
    }
}

/// `nu_N(delta)` for `delta > 0`.
fn nu_positive(delta: RealInterval, n: usize) -> Result<RealInterval> {
    Ok(coth_factor(delta)? * one_minus_mu_decay(delta, n)?)
}

/// `e^{-2 pi rho_hat N} nu_N(-rho_hat - rho)`, rearranged as
/// `coth(-(rho_hat+rho)) * -e^{-pi (rho_hat - rho) N} (mu - e^{-pi (rho_hat + rho) N})`.
fn minus_branch(rho: RealInterval, rho_hat: RealInterval, n: usize) -> Result<RealInterval> {
    let pi = pi_enclosure();
    let sum = rho_hat + rho;
    let gap = rho_hat - rho;
    let c = coth_factor(-sum)?;
    let decay = (-(pi * gap * n as f64)).exp()?;
    let inner_x = -(pi * sum * n as f64);
    let inner = if n.is_multiple_of(2) {
        -inner_x.exp_m1()?
    } else {
        mu_factor(-sum, n)? - inner_x.exp()?
    };
    Ok(c * -(decay * inner))
}

/// `1 - prod (1 - x_l)` by the recursion `u <- u + x - x u`.
fn one_minus_prod(xs: &[RealInterval]) -> RealInterval {
    let mut u = RealInterval::ZERO;
    for &x in xs {
        u = u + x - x * u;
    }
    u
}

fn check_positive(r: RealInterval) -> Result<RealInterval> {
    if !r.is_finite() {
        return Err(Error::Overflow("C_N evaluation".into()));
    }
    // below the normal range the relative accuracy is gone; refuse rather
    // than return a subnormal or zero lower end
    if r.hi() < f64::MIN_POSITIVE {
        return Err(Error::Overflow(format!(
            "C_N underflows the double range (upper bound {:e})",
            r.hi()
        )));
    }
    if r.lo() <= 0.0 {
        return Err(Error::NonPositive { lo: r.lo(), hi: r.hi() });
    }
    Ok(r)
}

/// `C_N(rho, rho_hat) = S1 + S2 + T` for a d-dimensional grid.
pub fn cn_general(strip: &StripPair, grid: &GridSpec) -> Result<RealInterval> {
    cn_general_inner(strip, grid).map_err(overflow).and_then(check_positive)
}

fn cn_general_inner(strip: &StripPair, grid: &GridSpec) -> Result<RealInterval> {
    let rho = RealInterval::point(strip.rho);
    let rho_hat = RealInterval::point(strip.rho_hat);
    let gap = rho_hat - rho;
    let two_pi = two_pi_enclosure();
    let dims = grid.dims();
    let d = dims.len();

    // x_l = e^{-2 pi rho_hat N_l}; 1 - x_l via expm1
    let mut xs = Vec::with_capacity(d);
    let mut prefactor = RealInterval::ONE;
    for &n in dims {
        let a = -(two_pi * rho_hat * n as f64);
        xs.push(a.exp()?);
        prefactor = prefactor.checked_div(&(-a.exp_m1()?))?;
    }

    let plus: Vec<RealInterval> = dims.iter().map(|&n| nu_positive(gap, n)).collect::<Result<_>>()?;
    let minus: Vec<RealInterval> = dims
        .iter()
        .map(|&n| minus_branch(rho, rho_hat, n))
        .collect::<Result<_>>()?;

    // sign vectors as bit masks, bit set = sigma_l = -1; mask 0 is (1,...,1)
    let mut sum = RealInterval::ZERO;
    for mask in 1u32..(1u32 << d) {
        let mut term = RealInterval::ONE;
        for l in 0..d {
            term = term * if mask & (1 << l) != 0 { minus[l] } else { plus[l] };
        }
        sum += term;
    }
    let s1 = prefactor * sum;

    let nu_prod = plus.iter().fold(RealInterval::ONE, |acc, &v| acc * v);
    let s2 = prefactor * one_minus_prod(&xs) * nu_prod;

    let c = coth_factor(gap)?;
    let mut coth_pow = RealInterval::ONE;
    let mut ys = Vec::with_capacity(d);
    for &n in dims {
        coth_pow = coth_pow * c;
        let decay = (-(pi_enclosure() * gap * n as f64)).exp()?;
        ys.push(mu_factor(gap, n)? * decay);
    }
    let t = coth_pow * one_minus_prod(&ys);

    Ok(s1 + s2 + t)
}

/// 1D even-N form of `C_N`, written as three separate terms.
pub fn cn_1d_even(strip: &StripPair, n: usize) -> Result<RealInterval> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    if n < 2 {
        return Err(Error::BadSize(format!("grid size {n} < 2")));
    }
    cn_1d_even_inner(strip, n).map_err(overflow).and_then(check_positive)
}

fn cn_1d_even_inner(strip: &StripPair, n: usize) -> Result<RealInterval> {
    let pi = pi_enclosure();
    let two_pi = two_pi_enclosure();
    let rho = RealInterval::point(strip.rho);
    let rho_hat = RealInterval::point(strip.rho_hat);
    let nf = n as f64;

    // e^{-2 pi rho_hat N} / (1 - e^{-2 pi rho_hat N})
    let a = -(two_pi * rho_hat * nf);
    let ratio = a.exp()?.checked_div(&(-a.exp_m1()?))?;
    let ratio_over_x = (-a.exp_m1()?).recip()?;

    // S1: the product e^{-2 pi rho_hat N} (1 - e^{pi (rho_hat + rho) N})
    // equals e^{-2 pi rho_hat N} - e^{-pi (rho_hat - rho) N}
    let sum = rho_hat + rho;
    let em = (-(two_pi * sum)).exp_m1()?;
    let f1 = (em + 2.0).checked_div(&em)?;
    let decay_gap = (-(pi * (rho_hat - rho) * nf)).exp()?;
    let tail = a.exp()? - decay_gap;
    let s1 = ratio_over_x * f1 * tail;

    let ep = (two_pi * (rho_hat - rho)).exp_m1()?;
    let f2 = (ep + 2.0).checked_div(&ep)?;
    let s2 = ratio * f2 * (-(-(pi * (rho_hat - rho) * nf)).exp_m1()?);

    let t = f2 * decay_gap;
    Ok(s1 + s2 + t)
}

/// `C_N` for a 1D grid of size `n`.
pub fn cn(rho: f64, rho_hat: f64, n: usize) -> Result<RealInterval> {
    cn_general(&StripPair::new(rho, rho_hat)?, &GridSpec::one(n)?)
}
