use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{num, write_csv, write_json};
use super::svg::{render, Plot, Series};
use super::{ensure_dir, RunConfig, StageArtifact, STAGES};
use crate::error::{Error, Result};
use crate::friedrichs::{
    build_model, method_agreement, secular_spectrum, shift_invariance, spectral_zero_correspondence, ConvergenceRow,
    SpectralResult,
};
use crate::functional::{checked_residues, verify_identity_on, IdentityRow, LineSamples};
use crate::hcatalog::{check_hypotheses, Tolerances};
use crate::quadrature::LineQuadrature;
use crate::report::{Check, Status, VerificationReport};
use crate::zerofinder::{
    locate_zeros, online_phase_zeros, real_segment_zeros, simplicity_check, unwrapped_phase, ZeroRecord,
};

const PHASE_STEP: f64 = 0.05;
const LOCATE_DEPTH: usize = 40;
const SIMPLICITY_RADIUS: f64 = 1e-3;

fn finish(dir: &Path, stage: &str, cfg: &RunConfig, reports: Vec<VerificationReport>) -> Result<Status> {
    let art = StageArtifact::new(stage, cfg, reports);
    write_json(&dir.join(format!("{stage}.json")), &art)?;
    Ok(art.status)
}

fn write_svg(path: &Path, plot: &Plot) -> Result<()> {
    std::fs::write(path, render(plot))?;
    Ok(())
}

/// Hypothesis violations become failed checks instead of errors.
fn fail_on_sign(title: String, e: Error) -> Result<VerificationReport> {
    match e {
        Error::SignCondition(v) => {
            let mut rep = VerificationReport::new(title);
            rep.push(Check::new("sign_condition", Status::Fail, 0.0).witness("eta_r", v).note(e.to_string()));
            Ok(rep)
        }
        e => Err(e),
    }
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let d = Tolerances::default();
    let tol = Tolerances {
        reality: cfg.tol("reality", d.reality),
        unit_modulus: cfg.tol("unit_modulus", d.unit_modulus),
        residue: cfg.tol("residue", d.residue),
        min_epsilon: cfg.tol("min_epsilon", d.min_epsilon),
        divergence_ratio: cfg.tol("divergence_ratio", d.divergence_ratio),
        l2_nodes_per_unit: d.l2_nodes_per_unit,
    };
    let rep = check_hypotheses(&cfg.spec, cfg.eta, &cfg.check_box()?, &tol);
    finish(dir, "check", cfg, vec![rep])
}

struct ZeroScan {
    located: Vec<ZeroRecord>,
    phase: Vec<ZeroRecord>,
}

fn scan_zeros(cfg: &RunConfig) -> Result<ZeroScan> {
    let rect = cfg.rect()?;
    let [t0, t1] = cfg.window.t;
    let located = locate_zeros(&cfg.spec, cfg.eta, &rect, LOCATE_DEPTH)?
        .par_iter()
        .map(
            |r| if !on_segment(r) { Ok(r.clone()) } else { simplicity_check(&cfg.spec, cfg.eta, r, SIMPLICITY_RADIUS) },
        )
        .collect::<Result<Vec<_>>>()?;
    let phase = online_phase_zeros(&cfg.spec, cfg.eta, t0, t1, PHASE_STEP)?;
    Ok(ZeroScan { located, phase })
}

/// Complex zeros found by the rectangle search against the phase zeros, both
/// restricted to the overlap of the rectangle and the t window.
fn agreement_check(cfg: &RunConfig, scan: &ZeroScan) -> Check {
    let tol = cfg.tol("agreement", 1e-9);
    let [_, _, im0, im1] = cfg.window.rect;
    let [t0, t1] = cfg.window.t;
    let (lo, hi) = (im0.max(t0), im1.min(t1));
    let a: Vec<Complex64> =
        scan.located.iter().filter(|r| on_segment(r) && r.w.im >= lo && r.w.im <= hi).map(|r| r.w).collect();
    let b: Vec<Complex64> = scan.phase.iter().filter(|r| r.w.im >= lo && r.w.im <= hi).map(|r| r.w).collect();
    let worst = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    let ok = a.len() == b.len() && worst <= tol;
    Check::new("methods_agree", Status::from_bool(ok), tol)
        .witness("located", a.len() as f64)
        .witness("phase", b.len() as f64)
        .witness("max_distance", if a.is_empty() { 0.0 } else { worst })
}

/// Non-real zeros, and real ones at 1/2, are the ones the phase scan sees.
fn on_segment(r: &ZeroRecord) -> bool {
    !r.is_real() || (r.w.re - 0.5).abs() <= 1e-8
}

fn zero_row(method: &str, r: &ZeroRecord) -> Vec<String> {
    vec![
        method.into(),
        num(r.w.re),
        num(r.w.im),
        r.multiplicity.to_string(),
        num(r.online_defect),
        num(r.refinement_residual),
        num(r.derivative_magnitude),
        r.simultaneous_flag.to_string(),
    ]
}

pub const ZEROS_HEADER: [&str; 8] = [
    "method",
    "w_re",
    "w_im",
    "multiplicity",
    "online_defect",
    "refinement_residual",
    "derivative_magnitude",
    "simultaneous",
];
pub const REAL_ZEROS_HEADER: [&str; 3] = ["x", "in_reflected_interval", "in_symmetric_interval"];

pub fn cmd_zeros(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let scan = scan_zeros(cfg)?;
    let [re0, re1, _, _] = cfg.window.rect;
    let real = real_segment_zeros(&cfg.spec, cfg.eta, re0, re1, 0.01)?;
    let complex: Vec<&ZeroRecord> = scan.located.iter().filter(|r| on_segment(r)).collect();

    let mut rep = VerificationReport::new(format!("zeros {} eta={}", cfg.spec.label, cfg.eta.name()));
    let online_tol = cfg.tol("online", 1e-8);
    let defect = complex.iter().map(|r| r.online_defect).fold(0.0, f64::max);
    rep.push(
        Check::new("on_line", Status::from_bool(defect <= online_tol), online_tol)
            .witness("max_online_defect", defect)
            .witness("complex_zeros", complex.len() as f64),
    );
    let multiple = complex.iter().filter(|r| r.multiplicity != 1).count();
    let mut simple = Check::new("simple", Status::from_bool(multiple == 0), 0.0).witness("non_simple", multiple as f64);
    if let Some(d) = complex.iter().map(|r| r.derivative_magnitude).reduce(f64::min) {
        simple = simple.witness("min_derivative", d);
    }
    rep.push(simple);
    rep.push(agreement_check(cfg, &scan));
    let simultaneous = scan.located.iter().filter(|r| r.simultaneous_flag).count();
    let mut c = Check::new("simultaneous_zeros", Status::Pass, 0.0).witness("count", simultaneous as f64);
    if simultaneous > 0 {
        c = c.note("zeros shared by h(s) and h(1-s) are reported, not counted against the line");
    }
    rep.push(c);

    let mut rows: Vec<Vec<String>> = scan.located.iter().map(|r| zero_row("rectangle", r)).collect();
    rows.extend(scan.phase.iter().map(|r| zero_row("phase", r)));
    write_csv(&dir.join("zeros.csv"), &ZEROS_HEADER, &rows)?;
    let real_rows: Vec<Vec<String>> = real
        .iter()
        .map(|z| vec![num(z.x), z.in_reflected_interval.to_string(), z.in_symmetric_interval.to_string()])
        .collect();
    write_csv(&dir.join("real_zeros.csv"), &REAL_ZEROS_HEADER, &real_rows)?;

    let [t0, t1] = cfg.window.t;
    let phase: Vec<(f64, f64)> = unwrapped_phase(&cfg.spec, t0, t1, PHASE_STEP)?.iter().map(|p| (p.0, p.1)).collect();
    let marks: Vec<(f64, f64)> = scan
        .phase
        .iter()
        .filter_map(|z| {
            phase.iter().min_by(|a, b| (a.0 - z.w.im).abs().total_cmp(&(b.0 - z.w.im).abs())).map(|p| (z.w.im, p.1))
        })
        .collect();
    write_svg(
        &dir.join("phase.svg"),
        &Plot {
            title: &format!("unwrapped phase of c(1/2+it), {}", cfg.spec.label),
            x_label: "t",
            y_label: "phase",
            series: vec![
                Series { points: &phase, color: "black", markers: false },
                Series { points: &marks, color: "red", markers: true },
            ],
            vline: None,
        },
    )?;
    let map: Vec<(f64, f64)> = scan.located.iter().map(|r| (r.w.re, r.w.im)).collect();
    write_svg(
        &dir.join("zeromap.svg"),
        &Plot {
            title: &format!("zeros of 1 + eta c, {} eta={}", cfg.spec.label, cfg.eta.name()),
            x_label: "Re w",
            y_label: "Im w",
            series: vec![Series { points: &map, color: "blue", markers: true }],
            vline: Some(0.5),
        },
    )?;

    #[derive(Serialize)]
    struct ZerosJson<'a> {
        #[serde(flatten)]
        artifact: StageArtifact,
        located: &'a [ZeroRecord],
        phase: &'a [ZeroRecord],
        real: &'a [crate::zerofinder::RealZero],
    }
    let artifact = StageArtifact::new("zeros", cfg, vec![rep]);
    let status = artifact.status;
    write_json(
        &dir.join("zeros.json"),
        &ZerosJson { artifact, located: &scan.located, phase: &scan.phase, real: &real },
    )?;
    Ok(status)
}

/// Points from the config, or `count` draws with 0.6 < Re w < 3, |Im w| <= 20.
fn identity_points(cfg: &RunConfig) -> Vec<Complex64> {
    if !cfg.identity.w.is_empty() {
        return cfg.identity.w.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.identity.count);
    while out.len() < cfg.identity.count {
        let w = Complex64::new(rng.gen_range(0.6..3.0), rng.gen_range(-20.0..=20.0));
        if cfg.spec.declared_sigmas.iter().all(|&s| (w - s).norm() > 1e-6) {
            out.push(w);
        }
    }
    out
}

/// Identity schedule clipped to T, ending at T.
fn identity_schedule(cfg: &RunConfig) -> Vec<f64> {
    let t = cfg.quadrature.t_max;
    let mut s: Vec<f64> = cfg.identity.schedule.iter().copied().filter(|&x| x < t).collect();
    s.push(t);
    s
}

pub const IDENTITY_HEADER: [&str; 8] = ["w_re", "w_im", "T", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err"];

pub fn cmd_identity(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let title = format!("identity {} eta={}", cfg.spec.label, cfg.eta.name());
    let residues = match checked_residues(&cfg.spec, cfg.eta) {
        Ok(r) => r,
        Err(e) => {
            write_csv(&dir.join("identity.csv"), &IDENTITY_HEADER, &[])?;
            return finish(dir, "identity", cfg, vec![fail_on_sign(title, e)?]);
        }
    };
    for w in &cfg.identity.w {
        if w.re <= 0.5 {
            return Err(Error::Config(format!("identity point {w} needs Re w > 1/2")));
        }
    }
    let points = identity_points(cfg);
    let schedule = identity_schedule(cfg);
    let quad = LineQuadrature::new(cfg.quadrature.t_max, cfg.quadrature.per_panel)?;
    let samples = LineSamples::new(&cfg.spec, &quad)?;
    let results: Vec<(VerificationReport, Vec<IdentityRow>)> = points
        .par_iter()
        .map(|&w| verify_identity_on(&cfg.spec, cfg.eta, w, &schedule, &samples, &residues))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<String>> = results
        .iter()
        .flat_map(|(_, rows)| rows.iter())
        .map(|r| {
            vec![
                num(r.w.re),
                num(r.w.im),
                num(r.t_max),
                num(r.lhs.re),
                num(r.lhs.im),
                num(r.rhs.re),
                num(r.rhs.im),
                num(r.rel_err),
            ]
        })
        .collect();
    write_csv(&dir.join("identity.csv"), &IDENTITY_HEADER, &rows)?;
    finish(dir, "identity", cfg, results.into_iter().map(|r| r.0).collect())
}

pub const SPECTRUM_HEADER: [&str; 8] =
    ["T", "N", "method", "lambda", "w_re", "w_im", "residual_operator", "residual_constraint"];
pub const CONVERGENCE_HEADER: [&str; 5] = ["T", "N", "max_pair_distance", "eig_count", "zero_count"];

struct SpectrumStep {
    report: VerificationReport,
    row: ConvergenceRow,
    spectrum: SpectralResult,
}

fn spectrum_step(cfg: &RunConfig, t: f64, n: usize, tol: f64) -> Result<SpectrumStep> {
    let [t0, t1] = cfg.window.t;
    let (report, row) = spectral_zero_correspondence(&cfg.spec, cfg.eta, t, n, (t0, t1), tol)?;
    let model = build_model(&cfg.spec, cfg.eta, t, n, None)?;
    let lo = -(0.25 + (t1 + 0.5).powi(2));
    let hi = model.lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let spectrum = secular_spectrum(&model, (lo, hi))?;
    Ok(SpectrumStep { report, row, spectrum })
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    if let Err(e) = checked_residues(&cfg.spec, cfg.eta) {
        let rep = fail_on_sign(format!("friedrichs {} eta={}", cfg.spec.label, cfg.eta.name()), e)?;
        write_csv(&dir.join("spectrum.csv"), &SPECTRUM_HEADER, &[])?;
        write_csv(&dir.join("convergence.csv"), &CONVERGENCE_HEADER, &[])?;
        return finish(dir, "spectrum", cfg, vec![rep]);
    }
    let tols = &cfg.spectrum.match_tol;
    let steps: Vec<SpectrumStep> = cfg
        .spectrum
        .schedule
        .par_iter()
        .enumerate()
        .map(|(i, &(t, n))| spectrum_step(cfg, t, n, tols[i.min(tols.len() - 1)]))
        .collect::<Result<_>>()?;

    let mut rows = vec![];
    for s in &steps {
        for (k, &l) in s.spectrum.eigenvalues.iter().enumerate() {
            let w = s.spectrum.mapped_w[k];
            let (r0, r1) = s.spectrum.residuals[k];
            rows.push(vec![
                num(s.row.t_max),
                s.row.per_panel.to_string(),
                "secular".into(),
                num(l),
                num(w.re),
                num(w.im),
                num(r0),
                num(r1),
            ]);
        }
    }
    write_csv(&dir.join("spectrum.csv"), &SPECTRUM_HEADER, &rows)?;
    let conv: Vec<&ConvergenceRow> = steps.iter().map(|s| &s.row).collect();
    let conv_rows: Vec<Vec<String>> = conv
        .iter()
        .map(|r| {
            vec![
                num(r.t_max),
                r.per_panel.to_string(),
                num(r.max_pair_distance),
                r.eig_count.to_string(),
                r.zero_count.to_string(),
            ]
        })
        .collect();
    write_csv(&dir.join("convergence.csv"), &CONVERGENCE_HEADER, &conv_rows)?;

    let mut reports: Vec<VerificationReport> = steps.iter().map(|s| s.report.clone()).collect();
    let mut trend = VerificationReport::new(format!("convergence {} eta={}", cfg.spec.label, cfg.eta.name()));
    let decreasing =
        conv.windows(2).all(|p| p[1].max_pair_distance < p[0].max_pair_distance || p[1].max_pair_distance == 0.0);
    let status = if conv.len() < 2 { Status::Inconclusive } else { Status::from_bool(decreasing) };
    let mut c = Check::new("distance_decreasing", status, 0.0);
    for r in &conv {
        c = c.witness(format!("d_T{}_N{}", r.t_max, r.per_panel), r.max_pair_distance);
    }
    trend.push(c);
    reports.push(trend);

    let pts: Vec<(f64, f64)> =
        conv.iter().map(|r| (r.t_max.log10(), r.max_pair_distance.max(1e-300).log10())).collect();
    write_svg(
        &dir.join("convergence.svg"),
        &Plot {
            title: &format!("eigenvalue to zero distance, {}", cfg.spec.label),
            x_label: "log10 T",
            y_label: "log10 max distance",
            series: vec![
                Series { points: &pts, color: "black", markers: false },
                Series { points: &pts, color: "red", markers: true },
            ],
            vline: None,
        },
    )?;

    #[derive(Serialize)]
    struct SpectrumJson<'a> {
        #[serde(flatten)]
        artifact: StageArtifact,
        convergence: Vec<&'a ConvergenceRow>,
    }
    let artifact = StageArtifact::new("spectrum", cfg, reports);
    let status = artifact.status;
    write_json(&dir.join("spectrum.json"), &SpectrumJson { artifact, convergence: conv })?;
    Ok(status)
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let scan = scan_zeros(cfg)?;
    let mut zeros = VerificationReport::new(format!("zero finders {} eta={}", cfg.spec.label, cfg.eta.name()));
    zeros.push(agreement_check(cfg, &scan));
    let (t, n) = cfg.spectrum.dense_model;
    let title = format!("secular vs dense {} eta={} T={t} N={n}", cfg.spec.label, cfg.eta.name());
    let methods = match build_model(&cfg.spec, cfg.eta, t, n, None) {
        Ok(model) => {
            let mut rep = VerificationReport::new(title);
            let tol = cfg.tol("eigen_agreement", 1e-10);
            let (diff, sec, dense) = method_agreement(&model)?;
            rep.push(
                Check::new("eigenvalues_agree", Status::from_bool(diff <= tol), tol)
                    .witness("max_rel_diff", diff)
                    .witness("secular_roots", sec.eigenvalues.len() as f64)
                    .witness("dense_eigenvalues", dense.eigenvalues.len() as f64)
                    .witness("entries", model.len() as f64),
            );
            let shift_tol = cfg.tol("shift_invariance", 1e-9);
            let inv = shift_invariance(&model)?;
            rep.push(
                Check::new("shift_invariance", Status::from_bool(inv <= shift_tol), shift_tol)
                    .witness("max_rel_change", inv)
                    .witness("c_shift", model.c_shift),
            );
            rep
        }
        Err(e) => fail_on_sign(title, e)?,
    };
    finish(dir, "compare", cfg, vec![zeros, methods])
}

#[derive(Serialize)]
struct StageSummary {
    stage: String,
    present: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<Status>,
    checks: Vec<(String, Status)>,
}

#[derive(Serialize)]
struct Summary {
    label: String,
    eta: String,
    status: Status,
    stages: Vec<StageSummary>,
}

/// Collects the stage artifacts in the output directory into summary files.
pub fn cmd_report(cfg: &RunConfig) -> Result<Status> {
    let dir = &cfg.output_dir;
    let mut stages = vec![];
    for name in STAGES {
        let path = dir.join(format!("{name}.json"));
        if !path.exists() {
            stages.push(StageSummary { stage: name.into(), present: false, status: None, checks: vec![] });
            continue;
        }
        let text = std::fs::read_to_string(&path)?;
        let art: StageArtifact = serde_json::from_str(&text)
            .map_err(|e| Error::MissingArtifact(format!("{}: unreadable ({e})", path.display())))?;
        let checks = art
            .reports
            .iter()
            .flat_map(|r| r.checks.iter().map(move |c| (format!("{}: {}", r.title, c.name), c.status)))
            .collect();
        stages.push(StageSummary { stage: name.into(), present: true, status: Some(art.status), checks });
    }
    if stages.iter().all(|s| !s.present) {
        return Err(Error::MissingArtifact(format!("no stage artifacts in {}", dir.display())));
    }
    let status = stages.iter().filter_map(|s| s.status).max().unwrap_or(Status::Inconclusive);
    let summary = Summary { label: cfg.spec.label.clone(), eta: cfg.eta.name().into(), status, stages };
    write_json(&dir.join("summary.json"), &summary)?;
    let mut text = format!("{} eta={}: {}\n", summary.label, summary.eta, status_word(status));
    for s in &summary.stages {
        match s.status {
            None => text.push_str(&format!("  {:<9} missing\n", s.stage)),
            Some(st) => {
                text.push_str(&format!("  {:<9} {}\n", s.stage, status_word(st)));
                for (name, cs) in &s.checks {
                    text.push_str(&format!("    {:<12} {name}\n", status_word(*cs)));
                }
            }
        }
    }
    std::fs::write(dir.join("summary.txt"), text)?;
    Ok(status)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}
