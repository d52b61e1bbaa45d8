//! Shared helpers for the integration targets: a double-double reference
//! for exact-value containment, a randomized soundness sweep, and candidates
//! built by continuation.
#![allow(dead_code)]

use fhit::boxes::{enclose_series_on_boxes, make_boxes};
use fhit::fft::{dft_naive, fft_forward, GridSamples};
use fhit::interval::{ComplexInterval, RealInterval};
use fhit::map::golden_mean_f64;
use fhit::series::FourierSeries;
use fhit::solver::{continue_to, export_candidate};
use fhit::validator::CandidateData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick(a: f64, b: f64) -> Dd {
    let (hi, lo) = two_sum(a, b);
    Dd { hi, lo }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn exact_sum(a: f64, b: f64) -> Dd {
        quick(a, b)
    }

    pub fn exact_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let e = e + t;
        let d = quick(s, e);
        quick(d.hi, d.lo + f)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = Dd::exact_prod(self.hi, o.hi);
        quick(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    pub fn scale(self, s: f64) -> Dd {
        self.mul(Dd::from(s))
    }

    pub fn sqrt(self) -> Dd {
        let s = self.hi.sqrt();
        let r = self.sub(Dd::exact_prod(s, s));
        quick(s, r.hi / (2.0 * s))
    }

    pub fn ge(self, x: f64) -> bool {
        self.hi > x || (self.hi == x && self.lo >= 0.0)
    }

    pub fn le(self, x: f64) -> bool {
        self.hi < x || (self.hi == x && self.lo <= 0.0)
    }

    pub fn in_interval(self, iv: &RealInterval) -> bool {
        self.ge(iv.lo()) && self.le(iv.hi())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn in_box(self, c: &ComplexInterval) -> bool {
        self.re.in_interval(&c.re) && self.im.in_interval(&c.im)
    }
}

/// `e^{-2 pi i / n}` for a power of two `n >= 4`, by repeated half angles.
fn dd_root(n: usize) -> Cdd {
    let (mut c, mut s) = (Dd::ZERO, Dd::from(1.0));
    let mut m = 4;
    while m < n {
        let c2 = Dd::from(1.0).add(c).scale(0.5).sqrt();
        let s2 = Dd {
            hi: s.hi / (2.0 * c2.hi),
            lo: 0.0,
        };
        // one Newton step on s2 * 2 c2 = s
        let r = s.sub(s2.mul(c2).scale(2.0));
        s = s2.add(Dd::from(r.hi / (2.0 * c2.hi)));
        c = c2;
        m *= 2;
    }
    Cdd { re: c, im: s.neg() }
}

/// Double-double forward DFT of point samples, `1/N` normalization, order `0..N`.
pub fn dd_dft(points: &[(f64, f64)]) -> Vec<Cdd> {
    let n = points.len();
    let w = dd_root(n);
    // first quadrant by products, the rest by exact quarter turns
    let mut pows = vec![Cdd {
        re: Dd::from(1.0),
        im: Dd::ZERO,
    }];
    for _ in 1..n / 4 {
        let p = pows.last().unwrap().mul(w);
        pows.push(p);
    }
    for m in n / 4..n {
        let p = pows[m - n / 4];
        pows.push(Cdd {
            re: p.im,
            im: p.re.neg(),
        });
    }
    (0..n)
        .map(|m| {
            let mut acc = Cdd {
                re: Dd::ZERO,
                im: Dd::ZERO,
            };
            for (j, &(a, b)) in points.iter().enumerate() {
                let t = Cdd {
                    re: Dd::from(a),
                    im: Dd::from(b),
                }
                .mul(pows[(m * j) % n]);
                acc = Cdd {
                    re: acc.re.add(t.re),
                    im: acc.im.add(t.im),
                };
            }
            // 1/N is a power of two
            let s = 1.0 / n as f64;
            Cdd {
                re: acc.re.scale(s),
                im: acc.im.scale(s),
            }
        })
        .collect()
}

/// Outcome of a soundness sweep.
#[derive(Clone, Debug, Default)]
pub struct Sweep {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl Sweep {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn rand_f(rng: &mut ChaCha8Rng) -> f64 {
    let m: f64 = rng.gen_range(-1.0..1.0);
    m * 2f64.powi(rng.gen_range(-20..20))
}

fn ulp_ball(f: f64) -> RealInterval {
    RealInterval::new(f.next_down(), f.next_up()).unwrap()
}

/// Point operations against exact references, then isotonicity on wide
/// intervals: every point result lies inside the wide result.
pub fn interval_sweep(rng: &mut ChaCha8Rng, rounds: usize, sw: &mut Sweep) {
    for _ in 0..rounds {
        let (a, b) = (rand_f(rng), rand_f(rng));
        let (ia, ib) = (RealInterval::point(a), RealInterval::point(b));
        sw.check(Dd::exact_sum(a, b).in_interval(&(ia + ib)), || format!("add {a} {b}"));
        sw.check(Dd::exact_sum(a, -b).in_interval(&(ia - ib)), || format!("sub {a} {b}"));
        sw.check(Dd::exact_prod(a, b).in_interval(&(ia * ib)), || format!("mul {a} {b}"));
        let q = a / b;
        let r = (-q).mul_add(b, a);
        let qd = quick(q, r / b);
        sw.check(qd.in_interval(&ia.checked_div(&ib).unwrap()), || format!("div {a} {b}"));
        let x = a.abs();
        let s = x.sqrt();
        let sd = quick(s, (-s).mul_add(s, x) / (2.0 * s));
        sw.check(
            x == 0.0 || sd.in_interval(&RealInterval::point(x).sqrt().unwrap()),
            || format!("sqrt {x}"),
        );

        // elementary functions: libm is within 1 ulp, so the 1-ulp ball holds the exact value
        let t = rng.gen_range(-30.0..30.0);
        let it = RealInterval::point(t);
        sw.check(ulp_ball(t.exp()).subset_of(&it.exp().unwrap()), || format!("exp {t}"));
        sw.check(ulp_ball(t.sin()).subset_of(&it.sin().unwrap()), || format!("sin {t}"));
        sw.check(ulp_ball(t.cos()).subset_of(&it.cos().unwrap()), || format!("cos {t}"));
        let l = t.abs() + 1e-3;
        sw.check(
            ulp_ball(l.ln()).subset_of(&RealInterval::point(l).ln().unwrap()),
            || format!("ln {l}"),
        );

        let wa = RealInterval::hull_of(a, a + rng.gen_range(0.0..1.0) * a.abs().max(1e-3));
        let wb = RealInterval::hull_of(b, b + rng.gen_range(0.0..1.0) * b.abs().max(1e-3));
        let pa = RealInterval::point(rng.gen_range(wa.lo()..=wa.hi()));
        let pb = RealInterval::point(rng.gen_range(wb.lo()..=wb.hi()));
        sw.check((pa * pb).subset_of(&(wa * wb)), || format!("wide mul {wa:?} {wb:?}"));
        sw.check((pa - pb).subset_of(&(wa - wb)), || format!("wide sub {wa:?} {wb:?}"));
        let wt = RealInterval::hull_of(t, t + rng.gen_range(0.0..4.0));
        let pt = RealInterval::point(rng.gen_range(wt.lo()..=wt.hi()));
        sw.check(pt.sin().unwrap().subset_of(&wt.sin().unwrap()), || {
            format!("wide sin {wt:?}")
        });
        sw.check(pt.cos().unwrap().subset_of(&wt.cos().unwrap()), || {
            format!("wide cos {wt:?}")
        });

        let (c, d) = (rand_f(rng), rand_f(rng));
        let za = ComplexInterval::point(a, b);
        let zb = ComplexInterval::point(c, d);
        let exact = Cdd {
            re: Dd::from(a),
            im: Dd::from(b),
        }
        .mul(Cdd {
            re: Dd::from(c),
            im: Dd::from(d),
        });
        sw.check(exact.in_box(&(za * zb)), || format!("complex mul {a} {b} {c} {d}"));
    }
}

/// `fft_forward` of point data contains the double-double DFT and meets `dft_naive`.
pub fn fft_sweep(rng: &mut ChaCha8Rng, transforms: usize, sw: &mut Sweep) {
    for round in 0..transforms {
        let n = 1usize << rng.gen_range(3..=8);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = GridSamples::from_points(&pts).unwrap();
        let fast = fft_forward(&s).unwrap();
        let naive = (round % 4 == 0).then(|| dft_naive(&s).unwrap());
        let exact = dd_dft(&pts);
        for k in fast.k_min()..=fast.k_max() {
            let e = exact[k.rem_euclid(n as i64) as usize];
            sw.check(e.in_box(&fast.get(k)), || format!("fft n={n} k={k}"));
            if let Some(nv) = &naive {
                sw.check(nv.get(k).intersects(&fast.get(k)), || format!("fft/naive n={n} k={k}"));
            }
        }
    }
}

/// Random real-analytic series with decaying point coefficients.
pub fn random_series(rng: &mut ChaCha8Rng, n: usize) -> FourierSeries {
    let half = n as i64 / 2;
    let mut modes = vec![(0, ComplexInterval::point(rng.gen_range(-1.0..1.0), 0.0))];
    for k in 1..half {
        let a = (-0.3 * k as f64).exp();
        let c = ComplexInterval::point(a * rng.gen_range(-1.0..1.0), a * rng.gen_range(-1.0..1.0));
        modes.push((k, c));
        modes.push((-k, c.conj()));
    }
    FourierSeries::from_modes(n, &modes, true).unwrap()
}

fn add_point(a: ComplexInterval, re: f64, im: f64) -> ComplexInterval {
    a + ComplexInterval::point(re, im)
}

/// Shift, rotation and box evaluation against tight point probes.
pub fn series_sweep(rng: &mut ChaCha8Rng, series: usize, probes: usize, sw: &mut Sweep) {
    for _ in 0..series {
        let n = 1usize << rng.gen_range(3..=6);
        let s = random_series(rng, n);
        let rho = rng.gen_range(0.0..0.1);
        let grid = make_boxes(n, rho).unwrap();
        let enc = enclose_series_on_boxes(&s, &grid).unwrap();
        for _ in 0..probes {
            let th = ComplexInterval::point(rng.gen_range(0.0..1.0), 0.0);
            let (px, py) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.05..0.05));
            let lhs = s
                .shift_complex(ComplexInterval::point(px, py))
                .unwrap()
                .eval(th)
                .unwrap();
            let rhs = s.eval(add_point(th, px, py)).unwrap();
            sw.check(lhs.intersects(&rhs), || format!("shift n={n} ({px}, {py})"));

            let w = rng.gen_range(0.0..1.0);
            let rot = s.rotate(RealInterval::point(w)).unwrap().eval(th).unwrap();
            sw.check(rot.intersects(&s.eval(add_point(th, w, 0.0)).unwrap()), || {
                format!("rotate n={n} {w}")
            });

            let (x0, y0) = (rng.gen_range(0.0..1.0), rng.gen_range(-0.05..0.05));
            let bx = ComplexInterval::new(
                RealInterval::hull_of(x0, x0 + 0.01),
                RealInterval::hull_of(y0, y0 + 0.01),
            );
            let p = ComplexInterval::point(rng.gen_range(x0..x0 + 0.01), rng.gen_range(y0..y0 + 0.01));
            sw.check(s.eval(p).unwrap().subset_of(&s.eval(bx).unwrap()), || {
                format!("eval box n={n}")
            });

            let j = rng.gen_range(0..n);
            let h = 0.5 / n as f64;
            let q = ComplexInterval::point(j as f64 / n as f64 + rng.gen_range(-h..h), rng.gen_range(-rho..=rho));
            sw.check(s.eval(q).unwrap().subset_of(&enc[j]), || {
                format!("boxes n={n} rho={rho} j={j}")
            });
        }
    }
}

/// The full sweep: at least `10^4` checks.
pub fn soundness_sweep(seed: u64) -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sw = Sweep::default();
    interval_sweep(&mut rng, 300, &mut sw);
    fft_sweep(&mut rng, 40, &mut sw);
    series_sweep(&mut rng, 50, 20, &mut sw);
    sw
}

/// Continuation candidate for the forced standard map at `kappa = 1.3`.
pub fn candidate(eps: f64, n_schedule: &[usize], truncate: Option<usize>) -> CandidateData {
    let st = continue_to(1.3, golden_mean_f64(), eps, 10, n_schedule).unwrap();
    let d = export_candidate(&st).unwrap();
    match truncate {
        Some(n) if n < d.n() => d.truncate_to(n).unwrap(),
        _ => d,
    }
}

pub fn std_map(eps: f64) -> fhit::map::StandardForcedMap {
    fhit::map::StandardForcedMap::new(fhit::map::SkewMapParams {
        kappa: 1.3,
        eps_map: eps,
        omega: fhit::map::golden_mean(),
    })
    .unwrap()
}

/// The schedule and truncation used for the `eps = 1` torus.
pub const EPS1_SCHEDULE: [usize; 4] = [64, 128, 256, 512];
