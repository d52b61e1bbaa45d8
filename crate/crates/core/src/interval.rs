//! Interval arithmetic over double-precision endpoints.
//!
//! Basic arithmetic and `sqrt` are correctly rounded in IEEE 754; each
//! endpoint is moved outward by one ulp, and only when an error-free
//! transform (TwoSum, FMA residual) shows the rounded value fell inside the
//! exact one. Exact results therefore stay exact. The transcendental
//! functions come from the platform libm, which is only faithful to within an
//! ulp or two, so they always get a wider fixed nudge.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Outward nudge for libm `exp`, `ln`, `exp_m1`, `sin` and `cos`.
const LIBM_ULPS: u32 = 2;
/// Outward nudge for libm `sinh` and `cosh`.
const LIBM_HYP_ULPS: u32 = 4;

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

#[inline]
fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// Endpoint product with the `0 * inf = 0` convention.
#[inline]
fn mul_ep(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Below this magnitude an FMA residual may underflow and lose its sign,
/// so the directed helpers fall back to an unconditional nudge.
const TINY: f64 = 1e-290;

// Directed rounding of one operation: the correctly rounded result is
// adjusted by one ulp only when an error-free transform shows it landed
// on the wrong side of the exact value.

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        down(s)
    } else {
        s
    }
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        up(s)
    } else {
        s
    }
}

/// Sign of `exact - rounded` for a product, or `None` when unreliable.
#[inline]
fn mul_err_sign(a: f64, b: f64, p: f64) -> Option<f64> {
    if !p.is_finite() || p.abs() < TINY {
        return None;
    }
    Some(a.mul_add(b, -p))
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let p = mul_ep(a, b);
    if p == 0.0 {
        return 0.0;
    }
    match mul_err_sign(a, b, p) {
        Some(e) if e >= 0.0 => p,
        Some(_) => down(p),
        None if p.is_finite() => down(p),
        None => p,
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let p = mul_ep(a, b);
    if p == 0.0 {
        return 0.0;
    }
    match mul_err_sign(a, b, p) {
        Some(e) if e <= 0.0 => p,
        Some(_) => up(p),
        None if p.is_finite() => up(p),
        None => p,
    }
}

/// Sign of `a/b - q`, or `None` when unreliable.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if !q.is_finite() || q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if b > 0.0 { r } else { -r })
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q == 0.0 && a == 0.0 {
        return 0.0;
    }
    match div_err_sign(a, b, q) {
        Some(e) if e >= 0.0 => q,
        Some(_) => down(q),
        None if q.is_finite() => down(q),
        None => q,
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q == 0.0 && a == 0.0 {
        return 0.0;
    }
    match div_err_sign(a, b, q) {
        Some(e) if e <= 0.0 => q,
        Some(_) => up(q),
        None if q.is_finite() => up(q),
        None => q,
    }
}

#[inline]
fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 {
        return 0.0;
    }
    if x >= TINY && s.is_finite() && (-s).mul_add(s, x) >= 0.0 {
        s
    } else {
        down(s).max(0.0)
    }
}

#[inline]
fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 {
        return 0.0;
    }
    if x >= TINY && s.is_finite() && (-s).mul_add(s, x) <= 0.0 {
        s
    } else {
        up(s)
    }
}

/// A closed interval `[lo, hi]` of reals, `lo <= hi`.
#[derive(Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl RealInterval {
    pub const ZERO: RealInterval = RealInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: RealInterval = RealInterval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(RealInterval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        RealInterval { lo: x, hi: x }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        let r = r.abs();
        RealInterval { lo: -r, hi: r }
    }

    /// Hull of two finite reals in either order.
    pub fn hull_of(a: f64, b: f64) -> Self {
        RealInterval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn rad(&self) -> f64 {
        0.5 * self.width()
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(RealInterval { lo, hi })
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Widens both endpoints by `r >= 0`, rounding outward.
    pub fn inflate(&self, r: f64) -> RealInterval {
        if r == 0.0 {
            return *self;
        }
        RealInterval {
            lo: add_down(self.lo, -r),
            hi: add_up(self.hi, r),
        }
    }

    pub fn ensure_finite(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// `x^2`, tight when the interval straddles zero.
    pub fn sqr(&self) -> RealInterval {
        if self.is_exact_zero() {
            return RealInterval::ZERO;
        }
        let a = self.mig();
        let b = self.mag();
        let lo = if a == 0.0 { 0.0 } else { mul_down(a, a).max(0.0) };
        RealInterval { lo, hi: mul_up(b, b) }
    }

    pub fn abs(&self) -> RealInterval {
        RealInterval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn recip(&self) -> Result<RealInterval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        RealInterval {
            lo: div_down(1.0, self.hi),
            hi: div_up(1.0, self.lo),
        }
        .ensure_finite("recip")
    }

    pub fn checked_div(&self, rhs: &RealInterval) -> Result<RealInterval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        if self.is_exact_zero() {
            return Ok(RealInterval::ZERO);
        }
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs.iter().map(|&(a, b)| div_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| div_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        RealInterval { lo, hi }.ensure_finite("div")
    }

    pub fn max(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn sqrt(&self) -> Result<RealInterval> {
        if self.lo < 0.0 {
            return Err(Error::DomainError("sqrt of an interval with negative part"));
        }
        let lo = if self.lo == 0.0 { 0.0 } else { sqrt_down(self.lo) };
        RealInterval {
            lo,
            hi: sqrt_up(self.hi),
        }
        .ensure_finite("sqrt")
    }

    pub fn exp(&self) -> Result<RealInterval> {
        let lo = down_n(self.lo.exp(), LIBM_ULPS).max(0.0);
        let hi = up_n(self.hi.exp(), LIBM_ULPS);
        if !hi.is_finite() {
            return Err(Error::NonFinite("exp"));
        }
        Ok(RealInterval { lo, hi })
    }

    /// `exp(x) - 1` without cancellation near zero.
    pub fn exp_m1(&self) -> Result<RealInterval> {
        let lo = down_n(self.lo.exp_m1(), LIBM_ULPS).max(-1.0);
        let hi = up_n(self.hi.exp_m1(), LIBM_ULPS);
        if !hi.is_finite() {
            return Err(Error::NonFinite("exp_m1"));
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn ln(&self) -> Result<RealInterval> {
        if self.lo <= 0.0 {
            return Err(Error::DomainError("log of an interval with non-positive part"));
        }
        RealInterval {
            lo: down_n(self.lo.ln(), LIBM_ULPS),
            hi: up_n(self.hi.ln(), LIBM_ULPS),
        }
        .ensure_finite("ln")
    }

    pub fn sinh(&self) -> Result<RealInterval> {
        RealInterval {
            lo: down_n(self.lo.sinh(), LIBM_HYP_ULPS),
            hi: up_n(self.hi.sinh(), LIBM_HYP_ULPS),
        }
        .ensure_finite("sinh")
    }

    pub fn cosh(&self) -> Result<RealInterval> {
        let lo = if self.contains_zero() {
            1.0
        } else {
            down_n(self.mig().cosh(), LIBM_HYP_ULPS).max(1.0)
        };
        RealInterval {
            lo,
            hi: up_n(self.mag().cosh(), LIBM_HYP_ULPS),
        }
        .ensure_finite("cosh")
    }

    pub fn sin(&self) -> Result<RealInterval> {
        // sin = cos(x - pi/2): maxima at pi/2 + 2 pi m, minima at -pi/2 + 2 pi m
        self.trig(f64::sin, 0.5, 1.5)
    }

    pub fn cos(&self) -> Result<RealInterval> {
        self.trig(f64::cos, 0.0, 1.0)
    }

    /// Shared sin/cos kernel. `max_at` and `min_at` are the critical points
    /// in units of pi, modulo 2.
    fn trig(&self, f: fn(f64) -> f64, max_at: f64, min_at: f64) -> Result<RealInterval> {
        if !self.is_finite() {
            return Err(Error::NonFinite("trig argument"));
        }
        let full = RealInterval { lo: -1.0, hi: 1.0 };
        if self.width() >= two_pi_enclosure().lo {
            return Ok(full);
        }
        let a = f(self.lo);
        let b = f(self.hi);
        let mut lo = down_n(a.min(b), LIBM_ULPS);
        let mut hi = up_n(a.max(b), LIBM_ULPS);
        if self.hits_pi_multiple(max_at) {
            hi = 1.0;
        }
        if self.hits_pi_multiple(min_at) {
            lo = -1.0;
        }
        Ok(RealInterval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        })
    }

    /// Conservatively decides whether some `pi * (offset + 2m)`, `m` an
    /// integer, may lie in the interval.
    fn hits_pi_multiple(&self, offset: f64) -> bool {
        let pi = pi_enclosure();
        let m_lo = ((self.lo / pi.lo - offset) / 2.0).floor() - 1.0;
        let m_hi = ((self.hi / pi.lo - offset) / 2.0).ceil() + 1.0;
        let (m_lo, m_hi) = (m_lo.min(m_hi), m_lo.max(m_hi));
        let mut m = m_lo;
        while m <= m_hi {
            let t = pi * (offset + 2.0 * m);
            if t.intersects(self) {
                return true;
            }
            m += 1.0;
        }
        false
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl From<f64> for RealInterval {
    fn from(x: f64) -> Self {
        RealInterval::point(x)
    }
}

impl Add for RealInterval {
    type Output = RealInterval;
    fn add(self, rhs: RealInterval) -> RealInterval {
        if rhs.is_exact_zero() {
            return self;
        }
        if self.is_exact_zero() {
            return rhs;
        }
        RealInterval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Add<f64> for RealInterval {
    type Output = RealInterval;
    fn add(self, rhs: f64) -> RealInterval {
        self + RealInterval::point(rhs)
    }
}

impl AddAssign for RealInterval {
    fn add_assign(&mut self, rhs: RealInterval) {
        *self = *self + rhs;
    }
}

impl Sub for RealInterval {
    type Output = RealInterval;
    fn sub(self, rhs: RealInterval) -> RealInterval {
        self + (-rhs)
    }
}

impl Sub<f64> for RealInterval {
    type Output = RealInterval;
    fn sub(self, rhs: f64) -> RealInterval {
        self + RealInterval::point(-rhs)
    }
}

impl SubAssign for RealInterval {
    fn sub_assign(&mut self, rhs: RealInterval) {
        *self = *self - rhs;
    }
}

impl Neg for RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: RealInterval) -> RealInterval {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return RealInterval::ZERO;
        }
        let pairs = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| mul_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        RealInterval { lo, hi }
    }
}

impl Mul<f64> for RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: f64) -> RealInterval {
        self * RealInterval::point(rhs)
    }
}

impl Mul<RealInterval> for f64 {
    type Output = RealInterval;
    fn mul(self, rhs: RealInterval) -> RealInterval {
        RealInterval::point(self) * rhs
    }
}

/// Enclosure of pi of width one ulp.
pub fn pi_enclosure() -> RealInterval {
    // f64 PI rounds pi downward
    RealInterval {
        lo: std::f64::consts::PI,
        hi: up(std::f64::consts::PI),
    }
}

/// Enclosure of 2 pi (exact doubling of [`pi_enclosure`]).
pub fn two_pi_enclosure() -> RealInterval {
    let pi = pi_enclosure();
    RealInterval {
        lo: 2.0 * pi.lo,
        hi: 2.0 * pi.hi,
    }
}

/// Rectangular enclosure of a set of complex numbers.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl Default for RealInterval {
    fn default() -> Self {
        RealInterval::ZERO
    }
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: RealInterval::ZERO,
        im: RealInterval::ZERO,
    };
    pub const ONE: ComplexInterval = ComplexInterval {
        re: RealInterval::ONE,
        im: RealInterval::ZERO,
    };
    pub const I: ComplexInterval = ComplexInterval {
        re: RealInterval::ZERO,
        im: RealInterval::ONE,
    };

    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        ComplexInterval {
            re: RealInterval::point(re),
            im: RealInterval::point(im),
        }
    }

    pub fn real(re: RealInterval) -> Self {
        ComplexInterval {
            re,
            im: RealInterval::ZERO,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0, 0.0)
    }

    pub fn intersects(&self, other: &ComplexInterval) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn subset_of(&self, other: &ComplexInterval) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }

    pub fn hull(&self, other: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(&self, s: RealInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * s,
            im: self.im * s,
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sqr(&self) -> RealInterval {
        self.re.sqr() + self.im.sqr()
    }

    /// Upper bound of `|z|` over the rectangle (farthest corner).
    pub fn abs_upper(&self) -> f64 {
        if self.is_exact_zero() {
            return 0.0;
        }
        let m = RealInterval::point(self.re.mag()).sqr() + RealInterval::point(self.im.mag()).sqr();
        sqrt_up(m.hi)
    }

    /// Lower bound of `|z|` over the rectangle (nearest point).
    pub fn abs_lower(&self) -> f64 {
        let a = self.re.mig();
        let b = self.im.mig();
        if a == 0.0 && b == 0.0 {
            return 0.0;
        }
        let m = RealInterval::point(a).sqr() + RealInterval::point(b).sqr();
        sqrt_down(m.lo)
    }

    pub fn checked_div(&self, rhs: &ComplexInterval) -> Result<ComplexInterval> {
        let den = rhs.norm_sqr();
        if den.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        let num = *self * rhs.conj();
        Ok(ComplexInterval {
            re: num.re.checked_div(&den)?,
            im: num.im.checked_div(&den)?,
        })
    }

    pub fn recip(&self) -> Result<ComplexInterval> {
        ComplexInterval::ONE.checked_div(self)
    }

    /// `cos t + i sin t` for a real interval `t`.
    pub fn expi(t: RealInterval) -> Result<ComplexInterval> {
        Ok(ComplexInterval {
            re: t.cos()?,
            im: t.sin()?,
        })
    }

    /// Complex exponential `e^z`.
    pub fn exp(&self) -> Result<ComplexInterval> {
        let r = self.re.exp()?;
        Ok(ComplexInterval::expi(self.im)?.scale(r))
    }

    /// `sin(a + ib) = sin a cosh b + i cos a sinh b`.
    pub fn sin(&self) -> Result<ComplexInterval> {
        if self.im.is_exact_zero() {
            return Ok(ComplexInterval::real(self.re.sin()?));
        }
        Ok(ComplexInterval {
            re: self.re.sin()? * self.im.cosh()?,
            im: self.re.cos()? * self.im.sinh()?,
        })
    }

    /// `cos(a + ib) = cos a cosh b - i sin a sinh b`.
    pub fn cos(&self) -> Result<ComplexInterval> {
        if self.im.is_exact_zero() {
            return Ok(ComplexInterval::real(self.re.cos()?));
        }
        Ok(ComplexInterval {
            re: self.re.cos()? * self.im.cosh()?,
            im: -(self.re.sin()? * self.im.sinh()?),
        })
    }

    /// Widens both parts by `r`.
    pub fn inflate(&self, r: f64) -> ComplexInterval {
        ComplexInterval {
            re: self.re.inflate(r),
            im: self.im.inflate(r),
        }
    }
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

impl From<RealInterval> for ComplexInterval {
    fn from(re: RealInterval) -> Self {
        ComplexInterval::real(re)
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl AddAssign for ComplexInterval {
    fn add_assign(&mut self, rhs: ComplexInterval) {
        *self = *self + rhs;
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl SubAssign for ComplexInterval {
    fn sub_assign(&mut self, rhs: ComplexInterval) {
        *self = *self - rhs;
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: ComplexInterval) -> ComplexInterval {
        if self.im.is_exact_zero() && rhs.im.is_exact_zero() {
            return ComplexInterval::real(self.re * rhs.re);
        }
        ComplexInterval {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Mul<RealInterval> for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: RealInterval) -> ComplexInterval {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: f64) -> ComplexInterval {
        self.scale(RealInterval::point(rhs))
    }
}

/// Binary real operations selectable at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary real functions selectable at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemFn {
    Exp,
    Sin,
    Cos,
    Sqrt,
    Log,
    Abs,
}

/// Complex operations selectable at runtime; `Neg` and `Conj` ignore `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Conj,
}

pub fn ri_arith(op: ArithOp, a: RealInterval, b: RealInterval) -> Result<RealInterval> {
    let r = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(&b)?,
    };
    r.ensure_finite("arithmetic")
}

pub fn ri_elem(f: ElemFn, a: RealInterval) -> Result<RealInterval> {
    match f {
        ElemFn::Exp => a.exp(),
        ElemFn::Sin => a.sin(),
        ElemFn::Cos => a.cos(),
        ElemFn::Sqrt => a.sqrt(),
        ElemFn::Log => a.ln(),
        ElemFn::Abs => Ok(a.abs()),
    }
}

pub fn ci_arith(op: ComplexOp, a: ComplexInterval, b: ComplexInterval) -> Result<ComplexInterval> {
    let r = match op {
        ComplexOp::Add => a + b,
        ComplexOp::Sub => a - b,
        ComplexOp::Mul => a * b,
        ComplexOp::Div => a.checked_div(&b)?,
        ComplexOp::Neg => -a,
        ComplexOp::Conj => a.conj(),
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite("complex arithmetic"))
    }
}

pub fn ci_abs_upper(a: &ComplexInterval) -> f64 {
    a.abs_upper()
}
