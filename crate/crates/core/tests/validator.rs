mod common;

use common::{candidate, std_map, EPS1_SCHEDULE};
use fhit::interval::{ComplexInterval, RealInterval};
use fhit::matrix::FourierMatrix;
use fhit::validator::{
    invariance_error, invertibility_error, nk_conditions_hold, radii, reducibility_error, validate, CandidateData,
    Certificate, ValidationParams, Verdict,
};

fn params() -> ValidationParams {
    ValidationParams::new(1e-2, 1e-1, 1.5e-2)
}

fn run(d: &CandidateData, eps: f64) -> Certificate {
    validate(d, &params(), &std_map(eps))
}

fn scaled(m: &FourierMatrix, f: impl Fn(usize, usize) -> f64) -> FourierMatrix {
    let mut e = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            e.push(m.get(i, j).scale(ComplexInterval::point(f(i, j), 0.0)));
        }
    }
    FourierMatrix::new(m.rows(), m.cols(), e).unwrap()
}

#[test]
fn widening_never_tightens_bounds() {
    let d = candidate(0.5, &[64], None);
    let base = run(&d, 0.5);
    assert!(base.verdict.is_validated());
    let mut prev = base;
    for r in [1e-15, 1e-14, 1e-13, 1e-12, 1e-11] {
        let c = run(&d.widen(r).unwrap(), 0.5);
        assert!(c.verdict.is_validated(), "r = {r}: {}", c.verdict);
        for (a, b) in [
            (prev.eps_inv_err, c.eps_inv_err),
            (prev.eps_red, c.eps_red),
            (prev.eps_invert, c.eps_invert),
            (prev.sigma, c.sigma),
            (prev.r_minus, c.r_minus),
        ] {
            assert!(b.unwrap() >= a.unwrap(), "r = {r}: {a:?} -> {b:?}");
        }
        assert!(c.r_plus.unwrap() <= prev.r_plus.unwrap() * (1.0 + 1e-12));
        prev = c;
    }
}

#[test]
fn radii_are_self_consistent() {
    let d = candidate(0.5, &[64], None);
    let c = run(&d, 0.5);
    let (s, e, b) = (c.sigma.unwrap(), c.eps_inv_err.unwrap(), c.b_of_r.unwrap());
    let (rm, rp) = (c.r_minus.unwrap(), c.r_plus.unwrap());
    assert!(rm >= s * e);
    assert!(nk_conditions_hold(s, e, b, rm, 1.5e-2) && nk_conditions_hold(s, e, b, rp, 1.5e-2));
    assert_eq!(radii(s, e, b, 1.5e-2).unwrap(), (rm, rp));
}

#[test]
fn bounds_degrade_with_forcing() {
    let mut last: Option<Certificate> = None;
    for eps in [0.25, 0.5, 0.75, 1.0] {
        let d = if eps < 1.0 {
            candidate(eps, &[64], None)
        } else {
            candidate(eps, &EPS1_SCHEDULE, Some(64))
        };
        let c = run(&d, eps);
        assert!(c.verdict.is_validated(), "eps = {eps}: {:?}", c.verdict);
        if let Some(p) = &last {
            assert!(c.sigma.unwrap() > p.sigma.unwrap(), "sigma at {eps}");
            assert!(c.lambda.unwrap() > p.lambda.unwrap(), "lambda at {eps}");
            assert!(c.r_minus.unwrap() > p.r_minus.unwrap(), "r_minus at {eps}");
        }
        last = Some(c);
    }
}

#[test]
fn invariance_error_ignores_the_frame() {
    let d = candidate(0.5, &[64], None);
    let e0 = invariance_error(&d, &params(), &std_map(0.5)).unwrap();
    let other = CandidateData::new(
        d.k0.clone(),
        scaled(&d.p1, |_, _| 3.0),
        scaled(&d.p2, |_, _| 0.25),
        d.lambda.clone(),
    )
    .unwrap();
    assert_eq!(invariance_error(&other, &params(), &std_map(0.5)).unwrap(), e0);
}

#[test]
fn corrupted_torus_is_detected() {
    let d = candidate(0.5, &[64], None);
    let mut x = d.k0.get(0, 0).clone();
    let bump = ComplexInterval::point(1e-3, 0.0);
    x.set_coeff(1, x.coeff(1) + bump);
    x.set_coeff(-1, x.coeff(-1) + bump);
    let k0 = FourierMatrix::column(vec![x, d.k0.get(1, 0).clone()]).unwrap();
    let bad = CandidateData::new(k0, d.p1.clone(), d.p2.clone(), d.lambda.clone()).unwrap();
    assert!(invariance_error(&bad, &params(), &std_map(0.5)).unwrap() >= 1e-4);
}

#[test]
fn broken_frame_fails() {
    let d = candidate(0.5, &[64], None);
    let p1 = scaled(&d.p1, |_, j| if j == 0 { 2.0 } else { 1.0 });
    let bad = CandidateData::new(d.k0.clone(), p1, d.p2.clone(), d.lambda.clone()).unwrap();
    let c = run(&bad, 0.5);
    assert!(!c.verdict.is_validated());
    assert!(reducibility_error(&bad, &params(), &std_map(0.5)).unwrap() > 0.1);

    let p2 = scaled(&d.p2, |_, _| 1.1);
    let bad = CandidateData::new(d.k0.clone(), d.p1.clone(), p2, d.lambda.clone()).unwrap();
    assert!(invertibility_error(&bad, &params()).unwrap() >= 0.09);
}

#[test]
fn lambda_must_be_hyperbolic() {
    let d = candidate(0.5, &[64], None);
    let mut lam = d.lambda.clone();
    lam.set(0, 0, ComplexInterval::real(RealInterval::point(1.01)));
    let bad = CandidateData::new(d.k0.clone(), d.p1.clone(), d.p2.clone(), lam).unwrap();
    match run(&bad, 0.5).verdict {
        Verdict::Failed { reason, .. } => assert!(reason == "NotContracting" || reason == "GapClosed", "{reason}"),
        v => panic!("{v}"),
    }
}

#[test]
fn padding_and_noise_floor_keep_validation() {
    let d = candidate(0.5, &[64], None);
    let mut p = params();
    p.pad_to = Some(128);
    p.noise_floor = Some(1e-15);
    let c = validate(&d, &p, &std_map(0.5));
    assert!(c.verdict.is_validated(), "{:?}", c.verdict);
    assert_eq!(c.n, 128);
}
