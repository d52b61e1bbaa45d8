use fhit::dft_bounds::cn;
use fhit::fft::{fft_forward, fft_inverse, GridSamples};
use fhit::interval::{ComplexInterval, RealInterval};
use fhit::io::{fcf_to_string, parse_fcf, CandidateFile, OmegaSpec};
use fhit::matrix::{FourierMatrix, IMat};
use fhit::series::FourierSeries;
use fhit::validator::{nk_conditions_hold, radii, sigma_bound, CandidateData};
use proptest::prelude::*;

fn series_from(n: usize, raw: &[(f64, f64)]) -> FourierSeries {
    let mut modes = vec![(0, ComplexInterval::point(raw[0].0, 0.0))];
    for k in 1..n as i64 / 2 {
        let (a, b) = raw[k as usize % raw.len()];
        let c = ComplexInterval::point(a / (k * k) as f64, b / (k * k) as f64);
        modes.push((k, c));
        modes.push((-k, c.conj()));
    }
    FourierSeries::from_modes(n, &modes, true).unwrap()
}

fn pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_ops_contain_sampled_points(a in -1e3..1e3f64, wa in 0.0..10.0f64, b in -1e3..1e3f64, wb in 0.0..10.0f64, s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let (x, y) = (RealInterval::new(a, a + wa).unwrap(), RealInterval::new(b, b + wb).unwrap());
        let (p, q) = (a + s * wa, b + t * wb);
        let (pp, qq) = (RealInterval::point(p), RealInterval::point(q));
        prop_assert!((pp + qq).subset_of(&(x + y)));
        prop_assert!((pp * qq).subset_of(&(x * y)));
        prop_assert!(pp.sin().unwrap().subset_of(&x.sin().unwrap()));
        if !y.contains_zero() {
            prop_assert!(pp.checked_div(&qq).unwrap().subset_of(&x.checked_div(&y).unwrap()));
        }
    }

    #[test]
    fn fft_round_trip_contains_samples(raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 32)) {
        let s = GridSamples::from_points(&raw).unwrap();
        let back = fft_inverse(&fft_forward(&s).unwrap()).unwrap();
        for (v, &(re, im)) in back.values().iter().zip(&raw) {
            prop_assert!(v.contains(re, im));
        }
    }

    #[test]
    fn pad_keeps_values_and_norm(raw in pairs(), th in 0.0..1.0f64, rho in 0.0..0.2f64) {
        let s = series_from(16, &raw);
        let p = s.pad(64).unwrap();
        let z = ComplexInterval::point(th, 0.0);
        prop_assert!(s.eval(z).unwrap().intersects(&p.eval(z).unwrap()));
        let (a, b) = (s.fourier_norm(rho).unwrap(), p.fourier_norm(rho).unwrap());
        prop_assert!((a - b).abs() <= 1e-14 * a.max(1.0));
        prop_assert!(s.check_symmetry().is_ok() && p.check_symmetry().is_ok());
    }

    #[test]
    fn fourier_norm_dominates_values(raw in pairs(), th in 0.0..1.0f64, y in -0.1..0.1f64) {
        let s = series_from(32, &raw);
        let v = s.eval(ComplexInterval::point(th, y)).unwrap();
        prop_assert!(v.abs_lower() <= s.fourier_norm(0.1).unwrap());
    }

    #[test]
    fn cn_decreases_with_n(rho in 1e-3..0.05f64, gap in 0.01..0.1f64, p in 4u32..10) {
        let n = 1usize << p;
        let a = cn(rho, rho + gap, n).unwrap();
        let b = cn(rho, rho + gap, 2 * n).unwrap();
        prop_assert!(a.lo() > 0.0 && b.lo() > 0.0);
        prop_assert!(b.hi() < a.lo());
    }

    #[test]
    fn sigma_grows_with_errors(p1 in 1.0..10.0f64, p2 in 1.0..10.0f64, lam in 0.1..0.8f64, e in 0.0..0.05f64) {
        let a = sigma_bound(p1, p2, lam, e, 0.0).unwrap();
        let b = sigma_bound(p1, p2, lam, e + 0.01, 0.0).unwrap();
        prop_assert!(a >= p1 * p2 / (1.0 - lam + 1e-12) * (1.0 - 1e-12) && b > a);
    }

    #[test]
    fn radii_verify(sigma in 1.0..500.0f64, eps in 1e-12..1e-6f64, b in 0.1..20.0f64) {
        if let Ok((rm, rp)) = radii(sigma, eps, b, 1.5e-2) {
            prop_assert!(rm <= rp && rm >= sigma * eps);
            prop_assert!(nk_conditions_hold(sigma, eps, b, rm, 1.5e-2));
            prop_assert!(nk_conditions_hold(sigma, eps, b, rp, 1.5e-2));
            prop_assert!(sigma * b * rp < 1.0);
        }
    }

    #[test]
    fn fcf_round_trip(raw in pairs(), kappa in 0.5..2.0f64, eps in 0.0..1.2f64) {
        let s = |shift: usize| series_from(16, &raw[shift % raw.len()..]);
        let k0 = FourierMatrix::column(vec![s(0), s(1)]).unwrap();
        let p1 = FourierMatrix::new(2, 2, vec![s(2), s(3), s(0), s(1)]).unwrap();
        let p2 = FourierMatrix::new(2, 2, vec![s(1), s(0), s(3), s(2)]).unwrap();
        let mut lam = IMat::zeros(2, 2);
        lam.set(0, 0, ComplexInterval::point(0.5, 0.0));
        lam.set(1, 1, ComplexInterval::point(2.0, 0.0));
        let file = CandidateFile {
            model: "standard-forced".into(),
            kappa,
            eps_map: eps,
            omega: OmegaSpec::Golden,
            data: CandidateData::new(k0, p1, p2, lam).unwrap(),
        };
        let back = parse_fcf(&fcf_to_string(&file)).unwrap();
        prop_assert_eq!(back, file);
    }
}
