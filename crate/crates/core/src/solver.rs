//! Non-rigorous floating-point generator of candidate data.
//!
//! Newton iteration for the torus `K` together with a reducing frame `P1`
//! and constant diagonal `Lambda = diag(lambda_s, lambda_u)`, solving
//! `F(K(theta), theta) = K(theta + omega)` and
//! `DF(K(theta), theta) P1(theta) = P1(theta + omega) Lambda`.
//! Grid values are kept in double precision; solves are done mode-wise.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::fft::SpectralCoeffs;
use crate::interval::ComplexInterval;
use crate::map::{SkewMap, SkewMapParams, StandardForcedMap};
use crate::matrix::{FourierMatrix, IMat};
use crate::series::FourierSeries;
use crate::validator::CandidateData;

/// Modes with `|k| >= CUT * N` are dropped after every update. Keeping a
/// margin below Nyquist stops aliasing from feeding back near collapse.
pub const CUT: f64 = 7.0 / 16.0;

/// Denominators below this abort with `SmallDivisor`.
pub const SMALL_DIVISOR: f64 = 1e-12;

/// Sup-norm residual estimates on the real grid.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residuals {
    pub invariance: f64,
    pub reducibility: f64,
    pub invertibility: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.invariance.max(self.reducibility).max(self.invertibility)
    }
}

/// Grid values of `K`, `P1`, `P2` at `theta_j = j / N` and the constant
/// diagonal of `Lambda`. Matrices are stored per entry, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub kappa: f64,
    pub eps_map: f64,
    pub omega: f64,
    n: usize,
    k: [Vec<f64>; 2],
    p1: [Vec<f64>; 4],
    p2: [Vec<f64>; 4],
    pub lambda_s: f64,
    pub lambda_u: f64,
    pub residuals: Residuals,
    /// Truncated invariance residual before each Newton step.
    pub history: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 30,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationOptions {
    pub solve: SolveOptions,
    /// First (and largest) step in `eps_map`.
    pub max_step: f64,
    pub min_step: f64,
    /// Grid sizes the run may move through, increasing.
    pub n_schedule: Vec<usize>,
    /// Coefficient tail (relative for the frame) that triggers the next size.
    pub tail_threshold: f64,
}

impl ContinuationOptions {
    pub fn new(eps_target: f64, steps: usize, n_schedule: Vec<usize>) -> Self {
        ContinuationOptions {
            solve: SolveOptions::default(),
            max_step: (eps_target / steps.max(1) as f64).min(0.05),
            min_step: 1e-6,
            n_schedule,
            tail_threshold: 1e-14,
        }
    }
}

/// FFT plans and rotation phases for one grid size.
struct Spectral {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    phase: Vec<Complex64>,
}

impl Spectral {
    fn new(n: usize, omega: f64) -> Self {
        let mut planner = FftPlanner::new();
        let phase = (0..n)
            .map(|m| {
                let t = (freq(m, n) as f64 * omega).rem_euclid(1.0);
                Complex64::from_polar(1.0, 2.0 * PI * t)
            })
            .collect();
        Spectral {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            phase,
        }
    }

    /// Normalized coefficients in FFT order.
    fn coeffs(&self, f: &[f64]) -> Vec<Complex64> {
        let mut b: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fwd.process(&mut b);
        let s = 1.0 / self.n as f64;
        b.iter_mut().for_each(|c| *c *= s);
        b
    }

    /// Real part of `sum_k c_k e^{2 pi i k j / N}`.
    fn values(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut c);
        c.into_iter().map(|z| z.re).collect()
    }

    /// `f(theta + omega)` on the grid, Nyquist mode dropped.
    fn rot(&self, f: &[f64]) -> Vec<f64> {
        let mut c = self.coeffs(f);
        for (c, p) in c.iter_mut().zip(&self.phase) {
            *c *= p;
        }
        c[self.n / 2] = Complex64::new(0.0, 0.0);
        self.values(c)
    }

    fn trunc(&self, f: &[f64]) -> Vec<f64> {
        let mut c = self.coeffs(f);
        self.cut(&mut c);
        self.values(c)
    }

    fn cut(&self, c: &mut [Complex64]) {
        let lim = CUT * self.n as f64;
        for (m, c) in c.iter_mut().enumerate() {
            if (freq(m, self.n).unsigned_abs() as f64) >= lim {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Largest coefficient modulus over `|k| >= 3N/8`.
    fn tail(&self, f: &[f64]) -> f64 {
        let c = self.coeffs(f);
        let lim = 3 * self.n / 8;
        c.iter()
            .enumerate()
            .filter(|(m, _)| freq(*m, self.n).unsigned_abs() as usize >= lim)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Frequency of FFT index `m`; index `N/2` is `-N/2`.
fn freq(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter()
        .fold(0.0, |a, &x| if x.is_nan() { f64::NAN } else { a.max(x.abs()) })
}

fn sup_all<'a>(vs: impl IntoIterator<Item = &'a Vec<f64>>) -> f64 {
    vs.into_iter()
        .map(|v| sup(v))
        .fold(0.0, |a, x| if x.is_nan() { f64::NAN } else { a.max(x) })
}

/// Pointwise `A B` for per-entry 2x2 grids.
fn mm(a: &[Vec<f64>; 4], b: &[Vec<f64>; 4]) -> [Vec<f64>; 4] {
    let n = a[0].len();
    std::array::from_fn(|e| {
        let (i, j) = (e / 2, e % 2);
        (0..n)
            .map(|t| a[2 * i][t] * b[j][t] + a[2 * i + 1][t] * b[2 + j][t])
            .collect()
    })
}

fn mv(a: &[Vec<f64>; 4], v: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
    let n = a[0].len();
    std::array::from_fn(|i| {
        (0..n)
            .map(|t| a[2 * i][t] * v[0][t] + a[2 * i + 1][t] * v[1][t])
            .collect()
    })
}

fn inv2(a: &[Vec<f64>; 4]) -> Result<[Vec<f64>; 4]> {
    let n = a[0].len();
    let mut out: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; n]);
    for t in 0..n {
        let det = a[0][t] * a[3][t] - a[1][t] * a[2][t];
        if !(det.abs() > 0.0 && det.is_finite()) {
            return Err(Error::SingularGridPoint(t));
        }
        out[0][t] = a[3][t] / det;
        out[1][t] = -a[1][t] / det;
        out[2][t] = -a[2][t] / det;
        out[3][t] = a[0][t] / det;
    }
    Ok(out)
}

fn pad_grid(f: &[f64], from: &Spectral, to: &Spectral) -> Vec<f64> {
    let c = from.coeffs(f);
    let mut c2 = vec![Complex64::new(0.0, 0.0); to.n];
    for (m, c) in c.iter().enumerate() {
        if m == from.n / 2 {
            continue;
        }
        c2[freq(m, from.n).rem_euclid(to.n as i64) as usize] = *c;
    }
    to.values(c2)
}

fn check_dim(map: &dyn SkewMap) -> Result<()> {
    if map.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the solver handles fiber dimension 2, got {}",
            map.dim()
        )));
    }
    Ok(())
}

fn grid_theta(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 / n as f64).collect()
}

/// `F(K(theta_j), theta_j)` per component.
fn map_on_grid(map: &dyn SkewMap, k: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
    let n = k[0].len();
    let mut out: [Vec<f64>; 2] = [vec![0.0; n], vec![0.0; n]];
    let mut f = [0.0; 2];
    for (t, th) in grid_theta(n).into_iter().enumerate() {
        map.eval_f64(&[k[0][t], k[1][t]], th, &mut f);
        out[0][t] = f[0];
        out[1][t] = f[1];
    }
    out
}

fn jac_on_grid(map: &dyn SkewMap, k: &[Vec<f64>; 2]) -> [Vec<f64>; 4] {
    let n = k[0].len();
    let mut out: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; n]);
    let mut j = [0.0; 4];
    for (t, th) in grid_theta(n).into_iter().enumerate() {
        map.jacobian_f64(&[k[0][t], k[1][t]], th, &mut j);
        for e in 0..4 {
            out[e][t] = j[e];
        }
    }
    out
}

impl SolverState {
    /// Constant torus at a fixed point `z0` of `F(., theta)` (the unforced
    /// map), with the eigenvector frame of `DF(z0)`.
    pub fn from_fixed_point(map: &dyn SkewMap, z0: [f64; 2], n: usize) -> Result<Self> {
        check_dim(map)?;
        if !n.is_power_of_two() || n < 4 {
            return Err(Error::SizeNotPowerOfTwo(n));
        }
        let mut j = [0.0; 4];
        map.jacobian_f64(&z0, 0.0, &mut j);
        let [a, b, c, d] = j;
        let tr = a + d;
        let disc = tr * tr - 4.0 * (a * d - b * c);
        if !(disc > 0.0) || b == 0.0 {
            return Err(Error::DomainError("fixed point is not a saddle"));
        }
        let s = disc.sqrt();
        let (lu, ls) = if tr >= 0.0 {
            ((tr + s) / 2.0, (tr - s) / 2.0)
        } else {
            ((tr - s) / 2.0, (tr + s) / 2.0)
        };
        if !(ls.abs() < 1.0 && lu.abs() > 1.0) {
            return Err(Error::NotContracting {
                lambda_s: ls.abs(),
                lambda_u: 1.0 / lu.abs(),
            });
        }
        let unit = |l: f64| {
            let (x, y) = (b, l - a);
            let r = x.hypot(y);
            (x / r, y / r)
        };
        let (vs, vu) = (unit(ls), unit(lu));
        let params = map.params();
        let p1 = [vec![vs.0; n], vec![vu.0; n], vec![vs.1; n], vec![vu.1; n]];
        let p2 = inv2(&p1)?;
        let mut st = SolverState {
            kappa: params.kappa,
            eps_map: params.eps_map,
            omega: params.omega.mid(),
            n,
            k: [vec![z0[0]; n], vec![z0[1]; n]],
            p1,
            p2,
            lambda_s: ls,
            lambda_u: lu,
            residuals: Residuals::default(),
            history: Vec::new(),
        };
        st.residuals = st.measure(map);
        Ok(st)
    }

    /// The standard-map start: `K = (1/2, 0)` at zero forcing.
    pub fn standard_initial(kappa: f64, omega: f64, n: usize) -> Result<Self> {
        let map = standard(kappa, 0.0, omega)?;
        SolverState::from_fixed_point(&map, [0.5, 0.0], n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid values of torus component `i`.
    pub fn k(&self, i: usize) -> &[f64] {
        &self.k[i]
    }

    pub fn p1(&self, i: usize, j: usize) -> &[f64] {
        &self.p1[2 * i + j]
    }

    pub fn p2(&self, i: usize, j: usize) -> &[f64] {
        &self.p2[2 * i + j]
    }

    /// Untruncated sup-norm residuals of the three target equations.
    pub fn measure(&self, map: &dyn SkewMap) -> Residuals {
        let sp = Spectral::new(self.n, self.omega);
        let fk = map_on_grid(map, &self.k);
        let inv = (0..2).map(|i| {
            let r = sp.rot(&self.k[i]);
            fk[i].iter().zip(&r).map(|(a, b)| a - b).collect::<Vec<_>>()
        });
        let invariance = sup_all(&inv.collect::<Vec<_>>());
        let m = jac_on_grid(map, &self.k);
        let mp = mm(&m, &self.p1);
        let lam = [self.lambda_s, self.lambda_u];
        let red: Vec<Vec<f64>> = (0..4)
            .map(|e| {
                let r = sp.rot(&self.p1[e]);
                mp[e].iter().zip(&r).map(|(a, b)| a - b * lam[e % 2]).collect()
            })
            .collect();
        let pp = mm(&self.p1, &self.p2);
        let id: Vec<Vec<f64>> = (0..4)
            .map(|e| {
                let d = if e == 0 || e == 3 { 1.0 } else { 0.0 };
                pp[e].iter().map(|x| x - d).collect()
            })
            .collect();
        Residuals {
            invariance,
            reducibility: sup_all(&red),
            invertibility: sup_all(&id),
        }
    }

    /// Largest high-mode coefficient, relative to `max |P1|` for the frame.
    fn tail(&self, sp: &Spectral) -> f64 {
        let tk = self.k.iter().map(|v| sp.tail(v)).fold(0.0, f64::max);
        let tp = self.p1.iter().map(|v| sp.tail(v)).fold(0.0, f64::max);
        tk.max(tp / sup_all(&self.p1))
    }

    /// Trigonometric interpolation onto a finer grid.
    pub fn pad(&self, new_n: usize) -> Result<SolverState> {
        if !new_n.is_power_of_two() || new_n < self.n {
            return Err(Error::BadSize(format!("cannot pad N = {} to {new_n}", self.n)));
        }
        let (from, to) = (Spectral::new(self.n, self.omega), Spectral::new(new_n, self.omega));
        let k = std::array::from_fn(|i| pad_grid(&self.k[i], &from, &to));
        let p1 = std::array::from_fn(|e| pad_grid(&self.p1[e], &from, &to));
        let p2 = inv2(&p1)?;
        Ok(SolverState {
            n: new_n,
            k,
            p1,
            p2,
            history: Vec::new(),
            ..self.clone()
        })
    }

    /// Rescales the frame by a constant diagonal `D` (`P1 <- P1 D`,
    /// `P2 <- D^{-1} P2`) to minimize `|P1| |P2|` in the grid sup norm.
    /// `Lambda` is diagonal, so the conjugacy is unchanged.
    pub fn balance_frame(&mut self) {
        let col = |p: &[Vec<f64>; 4], e: usize| sup(&p[e]);
        let cost = |d: f64| {
            let a = (col(&self.p1, 0) + d * col(&self.p1, 1)).max(col(&self.p1, 2) + d * col(&self.p1, 3));
            let b = (col(&self.p2, 0) + col(&self.p2, 1)).max((col(&self.p2, 2) + col(&self.p2, 3)) / d);
            a * b
        };
        // cost is unimodal in log d; golden-section search on a wide bracket
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (-12.0f64, 12.0f64);
        for _ in 0..200 {
            let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if cost(x1.exp()) <= cost(x2.exp()) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let d = ((lo + hi) / 2.0).exp();
        if cost(d) < cost(1.0) {
            for e in [1, 3] {
                self.p1[e].iter_mut().for_each(|x| *x *= d);
            }
            for e in [2, 3] {
                self.p2[e].iter_mut().for_each(|x| *x /= d);
            }
        }
    }
}

fn standard(kappa: f64, eps: f64, omega: f64) -> Result<StandardForcedMap> {
    StandardForcedMap::new(SkewMapParams {
        kappa,
        eps_map: eps,
        omega: crate::interval::RealInterval::point(omega),
    })
}

/// One Newton solve at the map's `eps_map`, seeded by `start`.
pub fn solve_from(map: &dyn SkewMap, start: &SolverState, opts: SolveOptions) -> Result<SolverState> {
    check_dim(map)?;
    let n = start.n;
    let omega = start.omega;
    let eps_map = map.params().eps_map;
    let sp = Spectral::new(n, omega);
    let mut k = start.k.clone();
    let mut p = start.p1.clone();
    let mut l = [start.lambda_s, start.lambda_u];
    let mut history = Vec::new();
    let mut res = f64::NAN;
    let zero = Complex64::new(0.0, 0.0);

    for _ in 0..opts.max_iter {
        let p2 = inv2(&p)?;
        let fk = map_on_grid(map, &k);
        let e: [Vec<f64>; 2] = std::array::from_fn(|i| {
            let r = sp.rot(&k[i]);
            sp.trunc(&fk[i].iter().zip(&r).map(|(a, b)| a - b).collect::<Vec<_>>())
        });
        res = sup_all(&e);
        history.push(res);
        if !res.is_finite() {
            break;
        }
        let m = jac_on_grid(map, &k);
        let mp = mm(&m, &p);
        let ep_raw: [Vec<f64>; 4] = std::array::from_fn(|q| {
            let r = sp.rot(&p[q]);
            mp[q].iter().zip(&r).map(|(a, b)| a - b * l[q % 2]).collect()
        });
        let p2w: [Vec<f64>; 4] = std::array::from_fn(|q| sp.rot(&p2[q]));
        let ep = mm(&p2w, &ep_raw);
        let fres = sup_all(&ep);
        if res < opts.tol && fres < 100.0 * opts.tol {
            let mut st = SolverState {
                kappa: map.params().kappa,
                eps_map,
                omega,
                n,
                k,
                p1: p,
                p2,
                lambda_s: l[0],
                lambda_u: l[1],
                residuals: Residuals::default(),
                history,
            };
            st.residuals = st.measure(map);
            return Ok(st);
        }

        // torus correction in the adapted frame
        let eta = mv(&p2w, &e);
        let xi: [Vec<f64>; 2] = std::array::from_fn(|i| {
            let c = sp.coeffs(&eta[i]);
            let mut x = vec![zero; n];
            for (m, c) in c.iter().enumerate() {
                if m != n / 2 {
                    x[m] = -c / (l[i] - sp.phase[m]);
                }
            }
            sp.values(x)
        });
        for i in 0..2 {
            for (m, ph) in sp.phase.iter().enumerate() {
                let d = (l[i] - ph).norm();
                if d < SMALL_DIVISOR {
                    return Err(Error::SmallDivisor {
                        k: freq(m, n),
                        divisor: d,
                    });
                }
            }
        }
        let dk = mv(&p, &xi);

        // frame correction: Lambda W - W(. + omega) Lambda = -R - dLambda
        let mut dl = [0.0; 2];
        let mut w: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::new());
        for (q, wq) in w.iter_mut().enumerate() {
            let (i, j) = (q / 2, q % 2);
            let r = sp.coeffs(&ep[q]);
            let mut c = vec![zero; n];
            for m in 0..n {
                if m == n / 2 || (i == j && m == 0) {
                    continue;
                }
                let den = l[i] - l[j] * sp.phase[m];
                if den.norm() < SMALL_DIVISOR {
                    return Err(Error::SmallDivisor {
                        k: freq(m, n),
                        divisor: den.norm(),
                    });
                }
                c[m] = -r[m] / den;
            }
            if i == j {
                dl[i] = r[0].re;
            }
            *wq = sp.values(c);
        }

        let pw = mm(&p, &w);
        for q in 0..4 {
            let s: Vec<f64> = p[q].iter().zip(&pw[q]).map(|(a, b)| a + b).collect();
            p[q] = sp.trunc(&s);
        }
        for i in 0..2 {
            let s: Vec<f64> = k[i].iter().zip(&dk[i]).map(|(a, b)| a + b).collect();
            k[i] = sp.trunc(&s);
        }
        l[0] += dl[0];
        l[1] += dl[1];
    }
    Err(Error::NoConvergence { eps_map, residual: res })
}

/// Solves at `eps_map` from the zero-forcing start of the standard map.
pub fn solve_at(kappa: f64, eps_map: f64, omega: f64, n: usize, tol: f64) -> Result<SolverState> {
    let start = SolverState::standard_initial(kappa, omega, n)?;
    let map = standard(kappa, eps_map, omega)?;
    solve_from(
        &map,
        &start,
        SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

/// Path-follows `eps_map` from `start` to `eps_target` for the family
/// `make(eps)`. Steps shrink on failure and grow back after fast solves;
/// when the coefficient tail exceeds the threshold the grid moves to the
/// next size of the schedule and the step is retried.
pub fn continue_family(
    make: &dyn Fn(f64) -> Result<Box<dyn SkewMap>>,
    start: SolverState,
    eps_target: f64,
    opts: &ContinuationOptions,
    observer: &mut dyn FnMut(&SolverState),
) -> Result<SolverState> {
    if !(eps_target >= start.eps_map) || !eps_target.is_finite() {
        return Err(Error::DomainError("continuation target must be >= the start value"));
    }
    let mut state = start;
    let mut de = opts.max_step;
    while state.eps_map < eps_target - 1e-12 {
        let mut e1 = state.eps_map + de;
        if e1 > eps_target - opts.min_step {
            e1 = eps_target;
        }
        let map = make(e1)?;
        match solve_growing(map.as_ref(), &state, opts) {
            Ok(next) => {
                state = next;
                observer(&state);
                if state.history.len() <= 6 {
                    de = (de * 1.5).min(opts.max_step);
                }
            }
            Err(e) => {
                de /= 2.0;
                if de < opts.min_step {
                    return Err(Error::ContinuationFailed {
                        reached: state.eps_map,
                        attempted: e1,
                        source: Box::new(e),
                    });
                }
            }
        }
    }
    Ok(state)
}

/// Solves one step, padding the seed along the schedule while the tail of
/// the solution is above threshold.
fn solve_growing(map: &dyn SkewMap, seed: &SolverState, opts: &ContinuationOptions) -> Result<SolverState> {
    let mut seed = seed.clone();
    loop {
        let st = solve_from(map, &seed, opts.solve)?;
        let sp = Spectral::new(st.n, st.omega);
        let next = opts.n_schedule.iter().copied().find(|&m| m > st.n);
        match next {
            Some(m) if st.tail(&sp) > opts.tail_threshold => seed = seed.pad(m)?,
            _ => return Ok(st),
        }
    }
}

/// Standard-map continuation from zero forcing with `steps` initial steps.
pub fn continue_to(kappa: f64, omega: f64, eps_target: f64, steps: usize, n_schedule: &[usize]) -> Result<SolverState> {
    let opts = ContinuationOptions::new(eps_target, steps, n_schedule.to_vec());
    continue_standard(kappa, omega, eps_target, &opts, &mut |_| {})
}

/// As [`continue_to`] with explicit options; `observer` sees every accepted step.
pub fn continue_standard(
    kappa: f64,
    omega: f64,
    eps_target: f64,
    opts: &ContinuationOptions,
    observer: &mut dyn FnMut(&SolverState),
) -> Result<SolverState> {
    let mut opts = opts.clone();
    opts.n_schedule.sort_unstable();
    opts.n_schedule.dedup();
    let n0 = *opts
        .n_schedule
        .first()
        .ok_or_else(|| Error::BadSize("empty N schedule".into()))?;
    let start = SolverState::standard_initial(kappa, omega, n0)?;
    let make = move |e: f64| -> Result<Box<dyn SkewMap>> { Ok(Box::new(standard(kappa, e, omega)?)) };
    continue_family(&make, start, eps_target, &opts, observer)
}

fn series_from_grid(sp: &Spectral, f: &[f64]) -> Result<FourierSeries> {
    let c = sp.coeffs(f);
    let n = sp.n;
    let h = (n / 2) as i64;
    let at = |k: i64| c[k.rem_euclid(n as i64) as usize];
    let mut sym = vec![ComplexInterval::ZERO; n];
    for k in -h + 1..h {
        let v = if k == 0 {
            Complex64::new(at(0).re, 0.0)
        } else {
            (at(k) + at(-k).conj()) * 0.5
        };
        sym[(k + h) as usize] = ComplexInterval::point(v.re, v.im);
    }
    Ok(FourierSeries::new(SpectralCoeffs::from_symmetric(sym)?, true))
}

/// Wraps a converged state as point-interval candidate data.
pub fn export_candidate(state: &SolverState) -> Result<CandidateData> {
    let r = state.residuals.max();
    if !(r <= 1e-8) {
        return Err(Error::ResidualTooLarge(r));
    }
    let sp = Spectral::new(state.n, state.omega);
    let k0 = FourierMatrix::column(
        state
            .k
            .iter()
            .map(|v| series_from_grid(&sp, v))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let mat = |p: &[Vec<f64>; 4]| -> Result<FourierMatrix> {
        FourierMatrix::new(
            2,
            2,
            p.iter().map(|v| series_from_grid(&sp, v)).collect::<Result<Vec<_>>>()?,
        )
    };
    let mut lambda = IMat::zeros(2, 2);
    lambda.set(0, 0, ComplexInterval::point(state.lambda_s, 0.0));
    lambda.set(1, 1, ComplexInterval::point(state.lambda_u, 0.0));
    CandidateData::new(k0, mat(&state.p1)?, mat(&state.p2)?, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::golden_mean_f64;

    #[test]
    fn zero_forcing_is_exact() {
        let st = solve_at(1.3, 0.0, golden_mean_f64(), 64, 1e-12).unwrap();
        let s = 6.89f64.sqrt();
        assert!((st.lambda_u - (3.3 + s) / 2.0).abs() < 1e-12);
        assert!((st.lambda_s - (3.3 - s) / 2.0).abs() < 1e-12);
        assert!(st.k(0).iter().all(|&x| x == 0.5));
        assert!(st.residuals.max() < 1e-14);
    }

    #[test]
    fn continuation_to_half() {
        let st = continue_to(1.3, golden_mean_f64(), 0.5, 10, &[64]).unwrap();
        assert_eq!(st.n(), 64);
        assert!(st.residuals.invariance < 1e-11, "{:?}", st.residuals);
        assert!((st.lambda_s - 0.357175).abs() < 0.02);
        assert!(st.lambda_s < 1.0 && st.lambda_u > 1.0);
    }

    #[test]
    fn quadratic_convergence() {
        let st = continue_to(1.3, golden_mean_f64(), 0.3, 6, &[64]).unwrap();
        let map = standard(1.3, 0.35, st.omega).unwrap();
        let next = solve_from(&map, &st, SolveOptions::default()).unwrap();
        let h = &next.history;
        for w in h.windows(2) {
            if w[0] < 1e-4 && w[1] > 1e-14 {
                assert!(w[1] < w[0] / 10.0, "{h:?}");
            }
        }
    }

    #[test]
    fn pad_preserves_values() {
        let st = continue_to(1.3, golden_mean_f64(), 0.2, 4, &[64]).unwrap();
        let p = st.pad(128).unwrap();
        for j in 0..64 {
            assert!((p.k(0)[2 * j] - st.k(0)[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn balancing_keeps_conjugacy() {
        let mut st = continue_to(1.3, golden_mean_f64(), 0.5, 10, &[64]).unwrap();
        let map = standard(1.3, 0.5, st.omega).unwrap();
        let before = st.measure(&map);
        st.balance_frame();
        let after = st.measure(&map);
        assert!(after.reducibility < 10.0 * before.reducibility.max(1e-14));
        assert!(after.invertibility < 1e-13);
    }

    #[test]
    fn export_is_symmetric() {
        let st = solve_at(1.3, 0.0, golden_mean_f64(), 16, 1e-12).unwrap();
        let c = export_candidate(&st).unwrap();
        let k = c.k0.get(0, 0);
        assert!(k.coeff(0).contains(0.5, 0.0));
        for e in c.k0.entries().iter().chain(c.p1.entries()) {
            e.check_symmetry().unwrap();
            assert!(e.coeff(-8).is_exact_zero());
        }
    }

    #[test]
    fn beyond_breakdown_fails() {
        let r = solve_at(1.3, 1.3, golden_mean_f64(), 256, 1e-12);
        assert!(matches!(
            r,
            Err(Error::NoConvergence { .. }) | Err(Error::SmallDivisor { .. })
        ));
    }
}
