//! Skew-product map models `(z, theta) -> (F(z, theta), theta + omega)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interval::{two_pi_enclosure, ComplexInterval, RealInterval};
use crate::matrix::IMat;

/// Rotation number and model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewMapParams {
    pub kappa: f64,
    pub eps_map: f64,
    pub omega: RealInterval,
}

/// A point of the fiber bundle, possibly a box.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint {
    pub z: Vec<ComplexInterval>,
    pub theta: ComplexInterval,
}

/// Enclosure of the golden mean `(sqrt 5 - 1) / 2`.
pub fn golden_mean() -> RealInterval {
    let s = RealInterval::point(5.0).sqrt().expect("sqrt of a positive point");
    (s - 1.0) * 0.5
}

pub fn golden_mean_f64() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// The fiber map of a skew product over the rotation by `omega`.
///
/// Interval methods must enclose the exact values over the input boxes; the
/// `_f64` methods are plain floating point for the non-rigorous solver.
pub trait SkewMap: Send + Sync {
    fn name(&self) -> &'static str;

    fn params(&self) -> SkewMapParams;

    /// Fiber dimension `n`.
    fn dim(&self) -> usize;

    fn eval(&self, z: &[ComplexInterval], theta: ComplexInterval) -> Result<Vec<ComplexInterval>>;

    /// `D_z F` as an `n x n` interval matrix.
    fn jacobian(&self, z: &[ComplexInterval], theta: ComplexInterval) -> Result<IMat>;

    /// Upper bound of `max_i |D_z^2 F^i|` (bilinear norm w.r.t. the max norm).
    fn hessian_bound(&self, z: &[ComplexInterval], theta: ComplexInterval) -> Result<f64>;

    fn eval_f64(&self, z: &[f64], theta: f64, out: &mut [f64]);

    /// Row-major `D_z F`.
    fn jacobian_f64(&self, z: &[f64], theta: f64, out: &mut [f64]);
}

/// `F1 = x + y - (kappa / 2 pi) sin(2 pi x) - eps sin(2 pi theta)`,
/// `F2 = y - (kappa / 2 pi) sin(2 pi x) - eps sin(2 pi theta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardForcedMap {
    params: SkewMapParams,
}

impl StandardForcedMap {
    pub const NAME: &'static str = "standard-forced";

    pub fn new(params: SkewMapParams) -> Result<Self> {
        if !params.kappa.is_finite() || !params.eps_map.is_finite() {
            return Err(Error::DomainError("map parameters must be finite"));
        }
        Ok(StandardForcedMap { params })
    }

    fn check_dim(z: &[ComplexInterval]) -> Result<()> {
        if z.len() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "standard map fiber has dimension 2, got {}",
                z.len()
            )));
        }
        Ok(())
    }

    /// `(kappa / 2 pi) sin(2 pi x) + eps sin(2 pi theta)`.
    fn kick(&self, x: ComplexInterval, theta: ComplexInterval) -> Result<ComplexInterval> {
        let two_pi = two_pi_enclosure();
        let k = RealInterval::point(self.params.kappa).checked_div(&two_pi)?;
        let sx = (x * two_pi).sin().map_err(ovf)?;
        let st = (theta * two_pi).sin().map_err(ovf)?;
        Ok(sx.scale(k) + st.scale(RealInterval::point(self.params.eps_map)))
    }
}

fn ovf(e: Error) -> Error {
    match e {
        Error::NonFinite(what) => Error::Overflow(format!("map evaluation ({what})")),
        other => other,
    }
}

impl SkewMap for StandardForcedMap {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn params(&self) -> SkewMapParams {
        self.params
    }

    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[ComplexInterval], theta: ComplexInterval) -> Result<Vec<ComplexInterval>> {
        Self::check_dim(z)?;
        let kick = self.kick(z[0], theta)?;
        let f2 = z[1] - kick;
        Ok(vec![z[0] + f2, f2])
    }

    fn jacobian(&self, z: &[ComplexInterval], _theta: ComplexInterval) -> Result<IMat> {
        Self::check_dim(z)?;
        let c = (z[0] * two_pi_enclosure()).cos().map_err(ovf)?;
        let kc = c.scale(RealInterval::point(self.params.kappa));
        IMat::from_rows(
            2,
            2,
            vec![
                ComplexInterval::ONE - kc,
                ComplexInterval::ONE,
                -kc,
                ComplexInterval::ONE,
            ],
        )
    }

    fn hessian_bound(&self, z: &[ComplexInterval], _theta: ComplexInterval) -> Result<f64> {
        Self::check_dim(z)?;
        let two_pi = two_pi_enclosure();
        let s = (z[0] * two_pi).sin().map_err(ovf)?;
        Ok(s.scale(two_pi * self.params.kappa).abs_upper())
    }

    fn eval_f64(&self, z: &[f64], theta: f64, out: &mut [f64]) {
        let kick =
            self.params.kappa / (2.0 * PI) * (2.0 * PI * z[0]).sin() + self.params.eps_map * (2.0 * PI * theta).sin();
        out[1] = z[1] - kick;
        out[0] = z[0] + out[1];
    }

    fn jacobian_f64(&self, z: &[f64], _theta: f64, out: &mut [f64]) {
        let kc = self.params.kappa * (2.0 * PI * z[0]).cos();
        out.copy_from_slice(&[1.0 - kc, 1.0, -kc, 1.0]);
    }
}

/// Looks up a registered model by its CLI name.
pub fn model_by_name(name: &str, params: SkewMapParams) -> Result<Box<dyn SkewMap>> {
    match name {
        StandardForcedMap::NAME => Ok(Box::new(StandardForcedMap::new(params)?)),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

pub fn map_eval(map: &dyn SkewMap, pt: &FiberPoint) -> Result<Vec<ComplexInterval>> {
    map.eval(&pt.z, pt.theta)
}

pub fn map_jacobian(map: &dyn SkewMap, pt: &FiberPoint) -> Result<IMat> {
    map.jacobian(&pt.z, pt.theta)
}

pub fn map_hessian_bound(map: &dyn SkewMap, pt: &FiberPoint) -> Result<f64> {
    map.hessian_bound(&pt.z, pt.theta)
}
