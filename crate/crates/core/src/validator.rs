//! Rigorous Newton–Kantorovich validation of a candidate torus with a
//! reducing frame.

use std::fmt;

use rayon::prelude::*;

use crate::boxes::{enclose_series_on_boxes, make_boxes, per_box, thicken_fiber, BoxGrid};
use crate::dft_bounds::{cn, StripPair};
use crate::error::{Error, Result};
use crate::fft::GridSamples;
use crate::interval::{ComplexInterval, RealInterval};
use crate::map::SkewMap;
use crate::matrix::{mat_inverse_grid, mat_norm, norm_from_boxes, FourierMatrix, IMat, NormMode};
use crate::series::build_series;

/// `K0` (n x 1), `P1`, `P2` (n x n) and the constant diagonal `Lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateData {
    pub k0: FourierMatrix,
    pub p1: FourierMatrix,
    pub p2: FourierMatrix,
    pub lambda: IMat,
}

impl CandidateData {
    pub fn new(k0: FourierMatrix, p1: FourierMatrix, p2: FourierMatrix, lambda: IMat) -> Result<Self> {
        let d = k0.rows();
        if k0.cols() != 1 {
            return Err(Error::DimensionMismatch("K0 must be a column".into()));
        }
        for (name, m) in [("P1", &p1), ("P2", &p2)] {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, fiber dimension {d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.n() != k0.n() {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has N = {}, K0 has N = {}",
                    m.n(),
                    k0.n()
                )));
            }
        }
        if lambda.rows() != d || lambda.cols() != d {
            return Err(Error::DimensionMismatch("Lambda size".into()));
        }
        for i in 0..d {
            for j in 0..d {
                if i != j && !lambda.get(i, j).is_exact_zero() {
                    return Err(Error::DomainError("Lambda must be diagonal"));
                }
            }
        }
        Ok(CandidateData { k0, p1, p2, lambda })
    }

    pub fn n(&self) -> usize {
        self.k0.n()
    }

    pub fn dim(&self) -> usize {
        self.k0.rows()
    }

    fn all_series(&self) -> impl Iterator<Item = &crate::series::FourierSeries> {
        self.k0
            .entries()
            .iter()
            .chain(self.p1.entries())
            .chain(self.p2.entries())
    }

    /// Nyquist mode zero and conjugate symmetry for every entry.
    pub fn check_invariants(&self) -> Result<()> {
        let nyq = -(self.n() as i64) / 2;
        for s in self.all_series() {
            if !s.coeff(nyq).is_exact_zero() {
                return Err(Error::SymmetryViolation { k: nyq });
            }
            s.check_symmetry()?;
        }
        Ok(())
    }

    pub fn truncate_noise(&self, floor: f64) -> CandidateData {
        CandidateData {
            k0: self.k0.truncate_noise(floor),
            p1: self.p1.truncate_noise(floor),
            p2: self.p2.truncate_noise(floor),
            lambda: self.lambda.clone(),
        }
    }

    pub fn pad(&self, n: usize) -> Result<CandidateData> {
        Ok(CandidateData {
            k0: self.k0.pad(n)?,
            p1: self.p1.pad(n)?,
            p2: self.p2.pad(n)?,
            lambda: self.lambda.clone(),
        })
    }

    /// Keeps the modes of a smaller `I_N`; the new Nyquist mode is zeroed.
    pub fn truncate_to(&self, n: usize) -> Result<CandidateData> {
        let t = |m: &FourierMatrix| {
            m.map(|s| {
                let mut t = s.truncate_to(n)?;
                t.zero_nyquist();
                Ok(t)
            })
        };
        Ok(CandidateData {
            k0: t(&self.k0)?,
            p1: t(&self.p1)?,
            p2: t(&self.p2)?,
            lambda: self.lambda.clone(),
        })
    }

    /// Every coefficient and `Lambda` entry widened by `r`.
    pub fn widen(&self, r: f64) -> Result<CandidateData> {
        let w = |m: &FourierMatrix| {
            m.map(|s| {
                s.map_coeffs(s.is_real_analytic(), |_, c| {
                    Ok(if c.is_exact_zero() { *c } else { c.inflate(r) })
                })
            })
        };
        let mut lambda = self.lambda.clone();
        for i in 0..self.dim() {
            lambda.set(i, i, lambda.get(i, i).inflate(r));
        }
        Ok(CandidateData {
            k0: w(&self.k0)?,
            p1: w(&self.p1)?,
            p2: w(&self.p2)?,
            lambda,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationParams {
    pub rho: f64,
    pub rho_hat: f64,
    pub radius: f64,
    pub pad_to: Option<usize>,
    pub noise_floor: Option<f64>,
}

impl ValidationParams {
    pub fn new(rho: f64, rho_hat: f64, radius: f64) -> Self {
        ValidationParams {
            rho,
            rho_hat,
            radius,
            pad_to: None,
            noise_floor: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        StripPair::new(self.rho, self.rho_hat)?;
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::DomainError("radius R must be positive"));
        }
        if let Some(f) = self.noise_floor {
            if !(f >= 0.0 && f.is_finite()) {
                return Err(Error::DomainError("noise floor must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

/// Norm bounds reported with a certificate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Norms {
    pub p1_rho: Option<f64>,
    pub p2_rho: Option<f64>,
    pub p1_rho_hat: Option<f64>,
    pub p2_rho_hat: Option<f64>,
    pub m0_rho_hat: Option<f64>,
    pub fk0_rho_hat: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Validated,
    /// Error tag of the first failing step and its message.
    Failed {
        reason: String,
        detail: String,
    },
}

impl Verdict {
    pub fn is_validated(&self) -> bool {
        matches!(self, Verdict::Validated)
    }

    fn from_error(e: &Error) -> Self {
        Verdict::Failed {
            reason: e.tag().to_string(),
            detail: e.to_string(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Validated => f.write_str("validated"),
            Verdict::Failed { reason, .. } => write!(f, "failed:{reason}"),
        }
    }
}

/// All bounds computed before the verdict; `None` past the failing step.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub params: ValidationParams,
    pub n: usize,
    pub cn: Option<RealInterval>,
    pub eps_inv_err: Option<f64>,
    pub eps_red: Option<f64>,
    pub eps_invert: Option<f64>,
    pub lambda_s: Option<f64>,
    pub lambda_u: Option<f64>,
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub b_of_r: Option<f64>,
    pub r_minus: Option<f64>,
    pub r_plus: Option<f64>,
    pub norms: Norms,
    pub verdict: Verdict,
}

impl Certificate {
    fn empty(params: ValidationParams, n: usize) -> Self {
        Certificate {
            params,
            n,
            cn: None,
            eps_inv_err: None,
            eps_red: None,
            eps_invert: None,
            lambda_s: None,
            lambda_u: None,
            lambda: None,
            sigma: None,
            b_of_r: None,
            r_minus: None,
            r_plus: None,
            norms: Norms::default(),
            verdict: Verdict::Validated,
        }
    }
}

fn up(x: RealInterval) -> RealInterval {
    RealInterval::point(x.hi())
}

fn ri(x: f64) -> RealInterval {
    RealInterval::point(x)
}

/// Shared per-run objects: `C_N` and `K0` enclosed on the boxes of the
/// `rho_hat` strip (for the DFT error terms) and of the `rho` strip (for
/// `b(R)`).
struct Setup {
    rho: f64,
    rho_hat: f64,
    cn: RealInterval,
    grid: BoxGrid,
    k_boxes: Vec<Vec<ComplexInterval>>,
    grid_rho: BoxGrid,
    k_boxes_rho: Vec<Vec<ComplexInterval>>,
}

impl Setup {
    fn new(data: &CandidateData, params: &ValidationParams) -> Result<Self> {
        params.check()?;
        let cn = cn(params.rho, params.rho_hat, data.n())?;
        let enclose = |g: &BoxGrid| -> Result<Vec<Vec<ComplexInterval>>> {
            let comps = data
                .k0
                .entries()
                .iter()
                .map(|s| enclose_series_on_boxes(s, g))
                .collect::<Result<Vec<_>>>()?;
            Ok(per_box(&comps))
        };
        let grid = make_boxes(data.n(), params.rho_hat)?;
        let grid_rho = make_boxes(data.n(), params.rho)?;
        Ok(Setup {
            rho: params.rho,
            rho_hat: params.rho_hat,
            cn,
            k_boxes: enclose(&grid)?,
            grid,
            k_boxes_rho: enclose(&grid_rho)?,
            grid_rho,
        })
    }

    fn cn_up(&self) -> RealInterval {
        up(self.cn)
    }

    /// `f(z_j, box_j)` over the `rho_hat` boxes, in parallel.
    fn on_boxes<T: Send>(
        &self,
        values: &[Vec<ComplexInterval>],
        f: impl Fn(&[ComplexInterval], ComplexInterval) -> Result<T> + Sync,
    ) -> Result<Vec<T>> {
        on_grid(&self.grid, values, f)
    }
}

fn on_grid<T: Send>(
    grid: &BoxGrid,
    values: &[Vec<ComplexInterval>],
    f: impl Fn(&[ComplexInterval], ComplexInterval) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    values
        .par_iter()
        .zip(grid.boxes().par_iter())
        .map(|(z, th)| f(z, *th))
        .collect()
}

/// `theta_j = j / N`, exact for power-of-two `N`.
fn grid_theta(n: usize, j: usize) -> ComplexInterval {
    ComplexInterval::point(j as f64 / n as f64, 0.0)
}

fn k0_on_grid(data: &CandidateData) -> Result<Vec<Vec<ComplexInterval>>> {
    Ok(data
        .k0
        .to_grid()?
        .iter()
        .map(|m| (0..m.rows()).map(|i| m.get(i, 0)).collect())
        .collect())
}

/// `(eps, |F o K0|_rho_hat)`.
fn invariance_parts(data: &CandidateData, s: &Setup, map: &dyn SkewMap) -> Result<(f64, f64)> {
    let img = s.on_boxes(&s.k_boxes, |z, th| map.eval(z, th))?;
    let sup = img
        .iter()
        .flat_map(|v| v.iter().map(ComplexInterval::abs_upper))
        .fold(0.0, f64::max);
    if !sup.is_finite() {
        return Err(Error::DomainEscape);
    }
    let n = data.n();
    let fg = k0_on_grid(data)?
        .par_iter()
        .enumerate()
        .map(|(j, z)| map.eval(z, grid_theta(n, j)))
        .collect::<Result<Vec<_>>>()?;
    let rot = data.k0.rotate(map.params().omega)?;
    let mut tail = 0.0f64;
    for i in 0..data.dim() {
        // the interpolant keeps its Nyquist mode: the DFT bound is for the full DFT
        let tilde = build_series(&GridSamples::new(fg.iter().map(|v| v[i]).collect())?, false, false)?;
        tail = tail.max(tilde.checked_sub(rot.get(i, 0))?.fourier_norm(s.rho)?);
    }
    Ok(((s.cn_up() * sup + tail).hi(), sup))
}

/// `(eps1, |M0|_rho_hat, |P1|_F,rho_hat, |P2|_F,rho_hat)`.
fn reducibility_parts(data: &CandidateData, s: &Setup, map: &dyn SkewMap) -> Result<(f64, f64, f64, f64)> {
    let m_boxes = s.on_boxes(&s.k_boxes, |z, th| map.jacobian(z, th))?;
    let m0 = norm_from_boxes(&m_boxes);
    if !m0.is_finite() {
        return Err(Error::DomainEscape);
    }
    let p1n = data.p1.fourier_norm(s.rho_hat)?;
    let p2n = data.p2.fourier_norm(s.rho_hat)?;
    let n = data.n();
    let p2w = data.p2.rotate(map.params().omega)?.to_grid()?;
    let p1g = data.p1.to_grid()?;
    let prod = k0_on_grid(data)?
        .par_iter()
        .enumerate()
        .map(|(j, z)| {
            let m = map.jacobian(z, grid_theta(n, j))?;
            p2w[j].mul(&m)?.mul(&p1g[j])
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = FourierMatrix::from_grid(&prod)?
        .sub_constant(&data.lambda)?
        .fourier_norm(s.rho)?;
    let eps1 = s.cn_up() * p2n * m0 * p1n + tail;
    Ok((eps1.hi(), m0, p1n, p2n))
}

fn invertibility_part(data: &CandidateData, s: &Setup) -> Result<f64> {
    let p1n = data.p1.fourier_norm(s.rho_hat)?;
    let p2n = data.p2.fourier_norm(s.rho_hat)?;
    let (a, b) = (data.p2.to_grid()?, data.p1.to_grid()?);
    let prod = a.iter().zip(&b).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>()?;
    let tail = FourierMatrix::from_grid(&prod)?
        .sub_constant(&IMat::identity(data.dim()))?
        .fourier_norm(s.rho)?;
    Ok((s.cn_up() * p2n * p1n + tail).hi())
}

/// Hessian bound on `D_{rho,R}`: the `rho` boxes of `K0` thickened by `R`,
/// which is the domain the Newton–Kantorovich condition is stated on.
fn b_part(s: &Setup, map: &dyn SkewMap, radius: f64) -> Result<f64> {
    let thick = thicken_fiber(&s.k_boxes_rho, radius);
    let b = on_grid(&s.grid_rho, &thick, |z, th| map.hessian_bound(z, th))?
        .into_iter()
        .fold(0.0, f64::max);
    if !b.is_finite() {
        return Err(Error::Overflow("Hessian bound".into()));
    }
    Ok(b)
}

/// `eps >= |E(K0)|_rho` split into the DFT error and the truncated residual.
pub fn invariance_error(data: &CandidateData, params: &ValidationParams, map: &dyn SkewMap) -> Result<f64> {
    Ok(invariance_parts(data, &Setup::new(data, params)?, map)?.0)
}

pub fn reducibility_error(data: &CandidateData, params: &ValidationParams, map: &dyn SkewMap) -> Result<f64> {
    Ok(reducibility_parts(data, &Setup::new(data, params)?, map)?.0)
}

pub fn invertibility_error(data: &CandidateData, params: &ValidationParams) -> Result<f64> {
    invertibility_part(data, &Setup::new(data, params)?)
}

/// `b(R)`: Hessian bound over `K0` on the `rho` boxes thickened by `R`.
pub fn b_bound(data: &CandidateData, params: &ValidationParams, map: &dyn SkewMap) -> Result<f64> {
    b_part(&Setup::new(data, params)?, map, params.radius)
}

/// `max(lambda_s, 2 - 1 / lambda_u)` rounded up.
pub fn lambda_from_norms(lambda_s: f64, lambda_u: f64) -> Result<f64> {
    if !(lambda_s < 1.0 && lambda_u < 1.0 && lambda_s >= 0.0 && lambda_u > 0.0) {
        return Err(Error::NotContracting { lambda_s, lambda_u });
    }
    let t = ri(2.0) - RealInterval::ONE.checked_div(&ri(lambda_u))?;
    Ok(lambda_s.max(t.hi()))
}

/// `(lambda_s, lambda_u, lambda)` for a constant diagonal `Lambda`. Entries
/// with modulus below one form the stable block.
pub fn lambda_bound(data: &CandidateData) -> Result<(f64, f64, f64)> {
    let mut ls = 0.0f64;
    let mut lu = 0.0f64;
    for i in 0..data.dim() {
        let d = data.lambda.get(i, i);
        if d.abs_upper() < 1.0 {
            ls = ls.max(d.abs_upper());
        } else {
            let lo = d.abs_lower();
            if !(lo > 0.0) {
                return Err(Error::NotContracting {
                    lambda_s: ls,
                    lambda_u: f64::INFINITY,
                });
            }
            lu = lu.max(RealInterval::ONE.checked_div(&ri(lo))?.hi());
        }
    }
    let lambda = lambda_from_norms(ls, lu)?;
    Ok((ls, lu, lambda))
}

/// `|Lambda_u^{-1}|_rho` for a non-constant `Lambda_u` from grid inverses:
/// `|X~|_F,rho + |X~|_F,rho_hat g / (1 - g)`, `g = C_N |Lambda_u| |X~|`.
pub fn lambda_u_general(lambda_u: &FourierMatrix, params: &ValidationParams) -> Result<f64> {
    params.check()?;
    let inv = mat_inverse_grid(lambda_u, params.rho, params.rho_hat)?;
    Ok((ri(inv.x_tilde.fourier_norm(params.rho)?) + inv.diff_norm).hi())
}

/// `sigma = |P1|_rho |P2|_rho / (1 - (lambda + eps1 + eps2))`.
pub fn sigma_bound(p1_norm: f64, p2_norm: f64, lambda: f64, eps1: f64, eps2: f64) -> Result<f64> {
    let sum = ri(lambda) + eps1 + eps2;
    let gap = RealInterval::ONE - sum;
    if !(gap.lo() > 0.0) {
        return Err(Error::GapClosed(sum.hi()));
    }
    let gap = RealInterval::point(gap.lo());
    Ok((ri(p1_norm) * p2_norm).checked_div(&gap)?.hi())
}

/// Both Newton–Kantorovich inequalities at `r`, in interval arithmetic:
/// `sigma b r^2 / 2 - r + sigma eps <= 0` and `sigma b r < 1`, with `r < R`.
pub fn nk_conditions_hold(sigma: f64, eps: f64, b: f64, r: f64, radius: f64) -> bool {
    if !(r >= 0.0 && r < radius) {
        return false;
    }
    let (s, r_) = (ri(sigma), ri(r));
    let sbr = s * b * r_;
    let q = sbr * r_ * 0.5 - r_ + s * eps;
    q.hi() <= 0.0 && sbr.hi() < 1.0
}

/// Smallest and largest verified radii.
pub fn radii(sigma: f64, eps: f64, b: f64, radius: f64) -> Result<(f64, f64)> {
    let bad = |m: &str| Error::NoValidRadius(m.to_string());
    if !(sigma > 0.0 && eps >= 0.0 && b >= 0.0 && radius > 0.0)
        || ![sigma, eps, b, radius].iter().all(|x| x.is_finite())
    {
        return Err(bad("inputs must be finite with sigma, R > 0"));
    }
    let disc = RealInterval::ONE - ri(sigma).sqr() * b * eps * 2.0;
    if !(disc.hi() > 0.0) {
        return Err(bad("discriminant 1 - 2 sigma^2 b eps <= 0"));
    }
    let sq = disc.mid().max(0.0).sqrt();
    let mut r_minus = 2.0 * sigma * eps / (1.0 + sq);
    let sb = sigma * b;
    let upper_root = if sb > 0.0 { (1.0 + sq) / sb } else { f64::INFINITY };
    let cap = if sb > 0.0 { 1.0 / sb } else { f64::INFINITY };
    if r_minus >= radius {
        return Err(bad("r_minus >= R"));
    }
    let ok = |r: f64| nk_conditions_hold(sigma, eps, b, r, radius);
    let mut step = r_minus.max(f64::MIN_POSITIVE) * f64::EPSILON;
    let mut tries = 0;
    while !ok(r_minus) {
        r_minus += step;
        step *= 2.0;
        tries += 1;
        if tries > 200 || r_minus >= radius {
            return Err(bad("no radius verifies near the smaller root"));
        }
    }
    let mut r_plus = (1.0 - 2f64.powi(-16)) * upper_root.min(cap).min(radius);
    let mut shrink = f64::EPSILON;
    tries = 0;
    while !ok(r_plus) {
        r_plus *= 1.0 - shrink;
        shrink *= 2.0;
        tries += 1;
        if tries > 200 || r_plus < r_minus {
            return Err(bad("no radius verifies near the upper cap"));
        }
    }
    if r_plus < r_minus {
        return Err(bad("r_plus < r_minus"));
    }
    Ok((r_minus, r_plus))
}

/// Truncates noise, then pads, as the parameters ask.
pub fn preprocess(data: &CandidateData, params: &ValidationParams) -> Result<CandidateData> {
    let mut d = match params.noise_floor {
        Some(f) => data.truncate_noise(f),
        None => data.clone(),
    };
    if let Some(n) = params.pad_to {
        if n < d.n() || !n.is_power_of_two() {
            return Err(Error::BadSize(format!("cannot pad N = {} to {n}", d.n())));
        }
        if n > d.n() {
            d = d.pad(n)?;
        }
    }
    Ok(d)
}

/// Runs every step in order. Failures end up in the verdict together with
/// the bounds computed up to that point.
pub fn validate(data: &CandidateData, params: &ValidationParams, map: &dyn SkewMap) -> Certificate {
    let mut cert = Certificate::empty(*params, data.n());
    if let Err(e) = run(data, params, map, &mut cert) {
        cert.verdict = Verdict::from_error(&e);
    }
    cert
}

fn run(data: &CandidateData, params: &ValidationParams, map: &dyn SkewMap, cert: &mut Certificate) -> Result<()> {
    params.check()?;
    if map.dim() != data.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map dimension {} vs data {}",
            map.dim(),
            data.dim()
        )));
    }
    data.check_invariants()?;
    let data = preprocess(data, params)?;
    cert.n = data.n();
    let s = Setup::new(&data, params)?;
    cert.cn = Some(s.cn);

    let (eps, fk) = invariance_parts(&data, &s, map)?;
    cert.eps_inv_err = Some(eps);
    cert.norms.fk0_rho_hat = Some(fk);

    let (eps1, m0, p1h, p2h) = reducibility_parts(&data, &s, map)?;
    cert.eps_red = Some(eps1);
    cert.norms.m0_rho_hat = Some(m0);
    cert.norms.p1_rho_hat = Some(p1h);
    cert.norms.p2_rho_hat = Some(p2h);

    let eps2 = invertibility_part(&data, &s)?;
    cert.eps_invert = Some(eps2);

    let (ls, lu, lambda) = lambda_bound(&data)?;
    cert.lambda_s = Some(ls);
    cert.lambda_u = Some(lu);
    cert.lambda = Some(lambda);

    // sup norms at rho: both bounds are rigorous, keep the smaller
    let frame_norm = |m: &FourierMatrix| -> Result<f64> {
        Ok(mat_norm(m, s.rho, NormMode::Fourier)?.min(mat_norm(m, s.rho, NormMode::Boxes)?))
    };
    let p1 = frame_norm(&data.p1)?;
    let p2 = frame_norm(&data.p2)?;
    cert.norms.p1_rho = Some(p1);
    cert.norms.p2_rho = Some(p2);
    let sigma = sigma_bound(p1, p2, lambda, eps1, eps2)?;
    cert.sigma = Some(sigma);

    let b = b_part(&s, map, params.radius)?;
    cert.b_of_r = Some(b);

    let (rm, rp) = radii(sigma, eps, b, params.radius)?;
    cert.r_minus = Some(rm);
    cert.r_plus = Some(rp);
    cert.verdict = Verdict::Validated;
    Ok(())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::map::{golden_mean, SkewMapParams, StandardForcedMap};
    use crate::series::FourierSeries;

    fn pt(x: f64) -> ComplexInterval {
        ComplexInterval::point(x, 0.0)
    }

    fn std_map(eps: f64) -> StandardForcedMap {
        StandardForcedMap::new(SkewMapParams {
            kappa: 1.3,
            eps_map: eps,
            omega: golden_mean(),
        })
        .unwrap()
    }

    fn constant_data(n: usize, p1: [[f64; 2]; 2], p2: [[f64; 2]; 2], l: [f64; 2]) -> CandidateData {
        let k0 = FourierMatrix::column(vec![
            FourierSeries::constant(n, pt(0.5)).unwrap(),
            FourierSeries::constant(n, pt(0.0)).unwrap(),
        ])
        .unwrap();
        let m = |a: [[f64; 2]; 2]| {
            let im = IMat::from_rows(2, 2, vec![pt(a[0][0]), pt(a[0][1]), pt(a[1][0]), pt(a[1][1])]).unwrap();
            FourierMatrix::constant(n, &im).unwrap()
        };
        let mut lam = IMat::zeros(2, 2);
        lam.set(0, 0, pt(l[0]));
        lam.set(1, 1, pt(l[1]));
        CandidateData::new(k0, m(p1), m(p2), lam).unwrap()
    }

    /// Eigenbasis of the unforced Jacobian at (1/2, 0).
    fn eigen_data(n: usize) -> CandidateData {
        let s = 6.89f64.sqrt();
        let (lu, ls) = ((3.3 + s) / 2.0, (3.3 - s) / 2.0);
        let (a, b) = (ls - 2.3, lu - 2.3);
        let det = b - a;
        constant_data(
            n,
            [[1.0, 1.0], [a, b]],
            [[b / det, -1.0 / det], [-a / det, 1.0 / det]],
            [ls, lu],
        )
    }

    #[test]
    fn fixed_point_invariance() {
        // a wide strip makes C_8 negligible; the DFT part is exact
        let d = eigen_data(8);
        let e = invariance_error(&d, &ValidationParams::new(0.01, 1.5, 0.015), &std_map(0.0)).unwrap();
        assert!(e <= 1e-12, "{e}");
    }

    #[test]
    fn exact_conjugacy() {
        let d = eigen_data(8);
        let p = ValidationParams::new(0.01, 1.5, 0.015);
        let e1 = reducibility_error(&d, &p, &std_map(0.0)).unwrap();
        assert!(e1 <= 1e-9, "{e1}");
    }

    #[test]
    fn identity_frame_invertibility() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let d = constant_data(64, id, id, [0.3, 3.0]);
        let p = ValidationParams::new(0.01, 0.1, 0.015);
        let c = cn(0.01, 0.1, 64).unwrap().hi();
        assert!(invertibility_error(&d, &p).unwrap() <= c + 1e-12);
        let d = constant_data(64, id, [[1.1, 0.0], [0.0, 1.1]], [0.3, 3.0]);
        assert!(invertibility_error(&d, &p).unwrap() >= 0.09);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_from_norms(0.357175, 1.0 / 2.79975).unwrap(), 0.357175);
        assert_eq!(lambda_from_norms(0.672437, 1.0 / 1.48713).unwrap(), 0.672437);
        let l = lambda_from_norms(0.9, 0.99).unwrap();
        assert!((l - (2.0 - 1.0 / 0.99)).abs() < 1e-15 && l >= 2.0 - 1.0 / 0.99);
        assert!(matches!(lambda_from_norms(1.0, 0.5), Err(Error::NotContracting { .. })));
        let (ls, lu, _) = lambda_bound(&eigen_data(8)).unwrap();
        assert!((ls - 0.337560).abs() < 1e-6 && (lu - 1.0 / 2.962440).abs() < 1e-6);
    }

    #[test]
    fn lambda_u_general_examples() {
        let p = ValidationParams::new(0.01, 0.1, 0.015);
        let c = FourierMatrix::constant(64, &IMat::from_rows(1, 1, vec![pt(2.8)]).unwrap()).unwrap();
        let l = lambda_u_general(&c, &p).unwrap();
        assert!((l * 2.8 - 1.0).abs() < 1e-6 && l >= 1.0 / 2.8);

        let s = FourierSeries::from_modes(64, &[(0, pt(2.8)), (1, pt(0.05)), (-1, pt(0.05))], true).unwrap();
        let m = FourierMatrix::new(1, 1, vec![s]).unwrap();
        let l = lambda_u_general(&m, &p).unwrap();
        // true sup of 1/|2.8 + 0.1 cos| on the strip; the Fourier norm of the
        // inverse (alternating coefficients) sits slightly above it
        let sup = 1.0 / (2.8 - 0.1 * (2.0 * std::f64::consts::PI * 0.01).cosh());
        assert!(l >= sup && l <= 0.372, "{l}");

        let z = FourierSeries::from_modes(64, &[(1, pt(0.5)), (-1, pt(0.5))], true).unwrap();
        let m = FourierMatrix::new(1, 1, vec![z]).unwrap();
        assert!(matches!(lambda_u_general(&m, &p), Err(Error::SingularGridPoint(_))));
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_bound(
            1.5338805731759423,
            1.4687982979744499,
            0.357175,
            9.9384120231971380e-7,
            2.6492816206529570e-7,
        )
        .unwrap();
        assert!((s / 3.5047863969 - 1.0).abs() < 1e-6, "{s}");
        let s = sigma_bound(10.4712744, 11.3190709, 0.672437, 2.07342e-4, 5.61189e-5).unwrap();
        assert!((s / 362.1304117 - 1.0).abs() < 1e-5, "{s}");
        assert!(matches!(
            sigma_bound(1.0, 1.0, 0.99, 0.01, 0.0),
            Err(Error::GapClosed(_))
        ));
    }

    #[test]
    fn radii_examples() {
        let (rm, rp) = radii(7.6699450818, 6.9886143394e-7, 8.8552159446, 1.5e-2).unwrap();
        assert!(
            (5.3e-6..=5.5e-6).contains(&rm) && (1.470e-2..=1.4730e-2).contains(&rp),
            "{rm} {rp}"
        );
        let (rm, rp) = radii(362.1304117, 2.9326180148e-7, 8.4382948067, 1.5e-2).unwrap();
        assert!(
            (1.330e-4..=1.340e-4).contains(&rm) && (3.270e-4..=3.275e-4).contains(&rp),
            "{rm} {rp}"
        );
        assert!(rm >= 362.1304117 * 2.9326180148e-7);
        assert!(matches!(radii(1.0, 1.0, 1.0, 1.0), Err(Error::NoValidRadius(_))));
    }

    #[test]
    fn real_domain_hessian() {
        let d = eigen_data(8);
        let p = ValidationParams::new(0.0, 0.1, 1e-12);
        let b = b_bound(&d, &p, &std_map(0.3)).unwrap();
        assert!(b <= 2.0 * std::f64::consts::PI * 1.3 * (1.0 + 1e-9));
        let b2 = b_bound(&d, &ValidationParams::new(0.0, 0.1, 2e-12), &std_map(0.3)).unwrap();
        assert!(b2 >= b);
    }

    #[test]
    fn bad_strip_verdict() {
        let c = validate(&eigen_data(8), &ValidationParams::new(0.1, 0.1, 0.015), &std_map(0.0));
        assert_eq!(c.verdict.to_string(), "failed:BadStrip");
        assert!(c.cn.is_none());
    }

    #[test]
    fn fixed_point_validates() {
        let c = validate(&eigen_data(64), &ValidationParams::new(0.01, 0.1, 0.015), &std_map(0.0));
        assert!(c.verdict.is_validated(), "{:?}", c.verdict);
        let (s, e, b) = (c.sigma.unwrap(), c.eps_inv_err.unwrap(), c.b_of_r.unwrap());
        for r in [c.r_minus.unwrap(), c.r_plus.unwrap()] {
            assert!(nk_conditions_hold(s, e, b, r, 0.015));
        }
    }
}
