//! End-to-end acceptance run: eight criteria, one status line each.
//! Every criterion also has a wall-clock budget.

use std::process::Command;
use std::time::{Duration, Instant};

use critline::friedrichs::{
    build_model, constrained_spectrum, method_agreement, shift_invariance, spectral_zero_correspondence,
};
use critline::functional::{
    boundary_value, derivative_identity_on, h1_membership_diagnostic, theta_pairing, verify_identity_on, H1Class,
    LineSamples,
};
use critline::hcatalog::{check_hypotheses, EtaSign, HFunctionSpec, Tolerances};
use critline::quadrature::LineQuadrature;
use critline::report::Status;
use critline::specfun::QuadraticForm;
use critline::zerofinder::{locate_zeros, online_phase_zeros, simplicity_check, Rect, ZeroRecord};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r075() -> HFunctionSpec {
    HFunctionSpec::rational(&[c(0.75, 0.0)], &[], 1.0, &[0.75]).unwrap()
}

fn linear() -> HFunctionSpec {
    HFunctionSpec::rational(&[c(0.5, 0.0)], &[], 2.0, &[]).unwrap()
}

fn epstein(a: f64, b: f64, cc: f64) -> HFunctionSpec {
    HFunctionSpec::epstein(QuadraticForm::new(a, b, cc).unwrap()).unwrap()
}

/// Specs that satisfy the hypotheses, with their admissible sign.
fn certified() -> Vec<(HFunctionSpec, EtaSign)> {
    vec![
        (HFunctionSpec::riemann_xi_2s(), EtaSign::Plus),
        (epstein(1.0, 0.0, 1.0), EtaSign::Plus),
        (HFunctionSpec::riemann_xi_2s_y(1.0).unwrap(), EtaSign::Plus),
        (HFunctionSpec::riemann_xi_2s_y(2.0).unwrap(), EtaSign::Plus),
        (r075(), EtaSign::Minus),
    ]
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `setup` is shared work done beforehand and charged to this criterion too.
fn timed(n: usize, name: &str, budget: Duration, setup: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let el = start.elapsed() + setup;
    let ok = o.pass && el <= budget;
    println!(
        "criterion {n} [{}] {name}: {} ({:.1}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        el.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

fn unit_modulus_and_involution() -> Outcome {
    let specs = vec![
        r075(),
        linear(),
        HFunctionSpec::riemann_xi_2s(),
        HFunctionSpec::riemann_xi_2s_y(1.0).unwrap(),
        HFunctionSpec::riemann_xi_2s_y(2.0).unwrap(),
        epstein(1.0, 0.0, 1.0),
        epstein(2.0, 1.0, 3.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<Complex64> = (0..100).map(|_| c(rng.gen_range(-2.0..3.0), rng.gen_range(-20.0..20.0))).collect();
    let rows: Vec<(String, f64, f64)> = specs
        .par_iter()
        .map(|h| {
            // midpoints of a 0.1 grid on [-50, 50]; s = 1/2 is 0/0 for 2s - 1
            let unit = (0..1000)
                .map(|k| (h.c_ratio(c(0.5, -49.95 + 0.1 * k as f64)).unwrap().norm() - 1.0).abs())
                .fold(0.0, f64::max);
            let inv = pts
                .iter()
                .map(|&s| (h.c_ratio(s).unwrap() * h.c_ratio(1.0 - s).unwrap() - 1.0).norm())
                .fold(0.0, f64::max);
            (h.label.clone(), unit, inv)
        })
        .collect();
    let unit = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let inv = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    outcome(
        unit <= 1e-10 && inv <= 1e-10,
        format!("{} specs, max ||c|-1| {unit:.1e}, max |c c' - 1| {inv:.1e}", rows.len()),
    )
}

/// Line samples at T = 400, N = 24 for each certified spec, built once.
fn line_samples() -> Vec<LineSamples> {
    let quad = LineQuadrature::new(400.0, 24).unwrap();
    certified().iter().map(|(h, _)| LineSamples::new(h, &quad).unwrap()).collect()
}

fn boundary_identity(samples: &[LineSamples]) -> Outcome {
    let schedule = [50.0, 100.0, 200.0, 400.0];
    let mut worst = 0f64;
    let mut not_decreasing = vec![];
    for (k, (h, eta)) in certified().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let ws: Vec<Complex64> = (0..20).map(|_| c(rng.gen_range(0.6..3.0), rng.gen_range(-20.0..=20.0))).collect();
        let samples = &samples[k];
        let residues = h.residues(eta).unwrap();
        let reps: Vec<_> =
            ws.par_iter().map(|&w| verify_identity_on(&h, eta, w, &schedule, samples, &residues).unwrap()).collect();
        for (rep, rows) in reps {
            worst = worst.max(rows[3].rel_err);
            if rep.get("errors_decreasing").unwrap().status != Status::Pass {
                not_decreasing.push(format!("{} {}", h.label, rows[0].w));
            }
        }
    }
    outcome(
        worst <= 1e-6 && not_decreasing.is_empty(),
        format!("100 points, max rel err at T=400 {worst:.1e}, non-decreasing {not_decreasing:?}"),
    )
}

fn closed_form_anchor() -> Outcome {
    let w = c(2.0, 0.0);
    let p = theta_pairing(&r075(), EtaSign::Minus, w, &LineQuadrature::new(400.0, 24).unwrap()).unwrap();
    let b = boundary_value(&r075(), EtaSign::Minus, w).unwrap();
    let e = (p.value - c(-0.8, 0.0)).norm();
    let eb = (b - c(-0.8, 0.0)).norm();
    outcome(e <= 1e-8 && eb <= 1e-14, format!("pairing {:.12}, |err| {e:.1e}", p.value.re))
}

/// Off-axis zeros of both finders in [0.1, 0.9] x [0, 30].
fn zero_lists(h: &HFunctionSpec, eta: EtaSign) -> (Vec<ZeroRecord>, Vec<ZeroRecord>) {
    let rect = Rect::new(0.1, 0.9, 0.0, 30.0).unwrap();
    let located: Vec<ZeroRecord> =
        locate_zeros(h, eta, &rect, 40).unwrap().into_iter().filter(|r| !r.is_real()).collect();
    let phase: Vec<ZeroRecord> =
        online_phase_zeros(h, eta, 0.0, 30.0, 0.05).unwrap().into_iter().filter(|r| !r.is_real()).collect();
    (located, phase)
}

fn on_line_certification() -> Outcome {
    let rows: Vec<(String, usize, f64, bool, f64, bool)> = certified()
        .par_iter()
        .map(|(h, eta)| {
            let (located, phase) = zero_lists(h, *eta);
            let defect = located.iter().map(|r| r.online_defect).fold(0.0, f64::max);
            let simple = located.iter().all(|r| simplicity_check(h, *eta, r, 1e-3).unwrap().multiplicity == 1);
            let same = located.len() == phase.len();
            let dist = located.iter().zip(&phase).map(|(a, b)| (a.w - b.w).norm()).fold(0.0, f64::max);
            (h.label.clone(), located.len(), defect, simple, dist, same)
        })
        .collect();
    let ok = rows.iter().all(|r| r.2 <= 1e-8 && r.3 && r.4 <= 1e-9 && r.5);
    let detail: Vec<String> =
        rows.iter().map(|r| format!("{} {} zeros (defect {:.0e}, dist {:.0e})", r.0, r.1, r.2, r.4)).collect();
    outcome(ok, detail.join("; "))
}

fn simplicity_formula(samples: &[LineSamples]) -> Outcome {
    let rows: Vec<(String, usize, f64, bool)> = certified()
        .par_iter()
        .zip(samples)
        .map(|((h, eta), samples)| {
            let (_, phase) = zero_lists(h, *eta);
            let mut worst = 0f64;
            let mut positive = true;
            for z in phase.iter().take(3) {
                let rep = derivative_identity_on(h, *eta, z.w, samples, 400.0).unwrap();
                worst = worst.max(rep.get("derivative_matches_norm").unwrap().witnesses["rel_mismatch"]);
                positive &= rep.get("norm_positive").unwrap().status == Status::Pass;
            }
            (h.label.clone(), phase.len().min(3), worst, positive)
        })
        .collect();
    let ok = rows.iter().all(|r| r.2 <= 1e-4 && r.3);
    let detail: Vec<String> = rows.iter().map(|r| format!("{} {} zeros max {:.1e}", r.0, r.1, r.2)).collect();
    outcome(ok, detail.join("; "))
}

fn friedrichs_correspondence() -> Outcome {
    let mut agree = 0f64;
    let mut inv = 0f64;
    let mut real = true;
    for (h, eta) in certified() {
        let m = build_model(&h, eta, 6.0, 4, None).unwrap();
        let (d, _, _) = method_agreement(&m).unwrap();
        agree = agree.max(d);
        inv = inv.max(shift_invariance(&m).unwrap());
        real &= constrained_spectrum(&m).unwrap().eigenvalues.iter().all(|l| l.is_finite());
    }
    let h = HFunctionSpec::riemann_xi_2s();
    let steps: Vec<_> = [(60.0, 16, 1e-3), (120.0, 32, 1e-4)]
        .par_iter()
        .map(|&(t, n, tol)| spectral_zero_correspondence(&h, EtaSign::Plus, t, n, (0.0, 30.0), tol).unwrap())
        .collect();
    let matched = steps.iter().all(|(rep, _)| rep.status() == Status::Pass);
    let improving = steps[1].1.max_pair_distance < steps[0].1.max_pair_distance;
    outcome(
        agree <= 1e-10 && inv <= 1e-9 && real && matched && improving,
        format!(
            "secular vs dense {agree:.1e}, shift {inv:.1e}, xi distances {:.1e} -> {:.1e} over {} zeros",
            steps[0].1.max_pair_distance, steps[1].1.max_pair_distance, steps[0].1.zero_count
        ),
    )
}

const LINEAR_CONFIG: &str = r#"
eta = "plus"
[spec]
label = "linear"
declared_sigmas = []
[spec.variant]
kind = "rational"
zeros = [[0.5, 0.0]]
poles = []
scale = 2.0
"#;

fn degenerate_rejection() -> Outcome {
    let h = linear();
    let rep = check_hypotheses(&h, EtaSign::Plus, &Rect::new(0.5, 2.0, -30.0, 30.0).unwrap(), &Tolerances::default());
    let l2 = rep.get("not_square_integrable").map(|c| c.status);
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("linear.toml");
    std::fs::write(&cfg, LINEAR_CONFIG).unwrap();
    let code = Command::new(env!("CARGO_BIN_EXE_critline"))
        .args(["check", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()])
        .status()
        .unwrap()
        .code();
    let off_line = locate_zeros(&h, EtaSign::Minus, &Rect::new(0.1, 0.9, 0.0, 30.0).unwrap(), 40)
        .unwrap()
        .into_iter()
        .filter(|r| r.online_defect > 1e-8)
        .count();
    outcome(
        l2 == Some(Status::Fail) && code == Some(2) && off_line == 0,
        format!("eta=+1 square-integrability {l2:?}, exit {code:?}; eta=-1 off-line zeros {off_line}"),
    )
}

fn converse_diagnostic() -> Outcome {
    let h = HFunctionSpec::riemann_xi_2s();
    let zeros = online_phase_zeros(&h, EtaSign::Plus, 0.1, 40.0, 0.05).unwrap();
    let on: Vec<Complex64> = zeros.iter().take(10).map(|z| z.w).collect();
    let off: Vec<Complex64> = zeros.windows(2).take(10).map(|p| c(0.5, 0.5 * (p[0].w.im + p[1].w.im))).collect();
    let classify = |ws: &[Complex64]| -> Vec<H1Class> {
        ws.par_iter().map(|&w| h1_membership_diagnostic(&h, EtaSign::Plus, w).unwrap().class).collect()
    };
    let a = classify(&on);
    let b = classify(&off);
    let miss = a.iter().filter(|c| **c != H1Class::Convergent).count()
        + b.iter().filter(|c| **c != H1Class::Divergent).count();
    outcome(
        on.len() == 10 && off.len() == 10 && miss == 0,
        format!("{} zeros, {} non-zeros, {miss} misclassified", on.len(), off.len()),
    )
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let start = Instant::now();
    let samples = line_samples();
    let shared = start.elapsed();
    let zero = Duration::ZERO;
    let results = [
        timed(1, "unit modulus and involution", s(60), zero, unit_modulus_and_involution),
        timed(2, "boundary identity", s(300), shared, || boundary_identity(&samples)),
        timed(3, "closed-form anchor", s(60), zero, closed_form_anchor),
        timed(4, "on-line certification", s(600), zero, on_line_certification),
        timed(5, "simplicity formula", s(300), shared, || simplicity_formula(&samples)),
        timed(6, "discrete spectrum correspondence", s(600), zero, friedrichs_correspondence),
        timed(7, "degenerate rejection", s(1), zero, degenerate_rejection),
        timed(8, "converse diagnostic", s(180), zero, converse_diagnostic),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
