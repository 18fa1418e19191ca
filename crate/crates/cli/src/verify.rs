//! Residual suites behind `dirac verify`.

use dirac_core::angular::HalfInt;
use dirac_core::bispinor::{inner_product, BispinorField, DiracState, GridSpec, SpecialCase, SpinParams};
use dirac_core::observables::{
    degeneracy_count, enumerate_level, hartree_shell_sum, l2_distance, observe_at, reference_state, Mode,
    ObservableField, ReferenceTag,
};
use dirac_core::odeoracle::{find_spectrum, ShootingConfig};
use dirac_core::operators::{
    anticommutator_norm, commutator_norm, eigen_residual, expected_eigenvalue, OperatorHandle, OperatorKind,
    RandomField, SampleGrid,
};
use dirac_core::radial::{energy, fine_structure, PhysicalConfig, QuantumNumbers, Sigma};
use serde::Serialize;

use crate::args::{Suite, VerifyArgs};
use crate::output::Num;
use crate::CliError;

pub const NORM_TOL: f64 = 1e-8;
pub const OPERATOR_TOL: f64 = 1e-5;
pub const CLOSED_FORM_TOL: f64 = 1e-10;
pub const HARTREE_TOL: f64 = 1e-12;
pub const MIRROR_TOL: f64 = 1e-12;
pub const DISTINCT_MIN: f64 = 1e-3;
pub const ORACLE_TOL: f64 = 1e-8;
pub const RYDBERG_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Num,
    pub threshold: Num,
    /// `"<="` or `">"`.
    pub relation: &'static str,
    pub pass: bool,
}

fn at_most(name: String, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value: Num(value),
        threshold: Num(threshold),
        relation: "<=",
        pass: value <= threshold,
    }
}

fn above(name: String, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value: Num(value),
        threshold: Num(threshold),
        relation: ">",
        pass: value > threshold,
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    #[serde(rename = "Z")]
    pub z: Num,
    pub alpha: Num,
    pub n_max: u32,
    pub beta_scale: Num,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

pub fn run(cfg: PhysicalConfig, a: &VerifyArgs) -> Result<Report, CliError> {
    let mut suites: Vec<Suite> = if a.suites.is_empty() { Suite::ALL.to_vec() } else { a.suites.clone() };
    suites.sort();
    suites.dedup();
    let mut out = Vec::new();
    for s in suites {
        let checks = match s {
            Suite::Normalization => normalization(cfg, a.n_max, a.beta_scale)?,
            Suite::Spectrum => spectrum(cfg, a.n_max)?,
            Suite::Operators => operators(cfg, a.n_max)?,
            Suite::Anticommutators => anticommutators(cfg)?,
            Suite::Observables => observables(cfg)?,
            Suite::Oracle => oracle()?,
        };
        out.push(SuiteReport {
            name: s.name(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        });
    }
    Ok(Report {
        z: Num(cfg.z),
        alpha: Num(cfg.alpha),
        n_max: a.n_max,
        beta_scale: Num(a.beta_scale),
        pass: out.iter().all(|s| s.pass),
        suites: out,
    })
}

fn label(qn: &QuantumNumbers) -> String {
    format!(
        "n={} kappa={} two_mj={} sigma={}",
        qn.principal(),
        qn.kappa,
        qn.m_j.twice(),
        qn.sigma
    )
}

/// The named families plus two fixed generic points of the family.
fn spin_params() -> Vec<(String, SpinParams)> {
    let mut v: Vec<(String, SpinParams)> = SpecialCase::ALL.iter().map(|c| (c.name().to_string(), c.params())).collect();
    v.push(("generic(0.7,0.3)".into(), SpinParams::new(0.7, 0.3)));
    v.push(("generic(1.9,-2.4)".into(), SpinParams::new(1.9, -2.4)));
    v
}

fn normalization(cfg: PhysicalConfig, n_max: u32, scale: f64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 1..=n_max {
        for qn in enumerate_level(n).into_iter().filter(|q| q.sigma == Sigma::Plus) {
            let params = if qn.n_r == 0 { vec![("darwin".to_string(), SpinParams::default())] } else { spin_params() };
            for (tag, sp) in params {
                let plus = DiracState::new(qn, sp, cfg)?.scaled(scale);
                let fp = BispinorField::build(&plus, GridSpec::default())?;
                checks.push(at_most(format!("norm {} {tag}", label(&qn)), (fp.norm() - 1.0).abs(), NORM_TOL));
                if qn.n_r == 0 {
                    continue;
                }
                let qm = QuantumNumbers { sigma: Sigma::Minus, ..qn };
                let minus = DiracState::new(qm, sp, cfg)?.scaled(scale);
                let fm = BispinorField::build(&minus, GridSpec::default())?;
                checks.push(at_most(format!("norm {} {tag}", label(&qm)), (fm.norm() - 1.0).abs(), NORM_TOL));
                let overlap = inner_product(&fp, &fm)?.norm();
                checks.push(at_most(format!("sigma overlap {} {tag}", label(&qn)), overlap, NORM_TOL));
            }
        }
    }
    Ok(checks)
}

fn spectrum(cfg: PhysicalConfig, n_max: u32) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 1..=8u32 {
        let count = degeneracy_count(n) as f64;
        checks.push(at_most(format!("degeneracy n={n}"), (count - 2.0 * (n * n) as f64).abs(), 0.0));
        let bad = enumerate_level(n).iter().filter(|q| q.n_r == 0 && q.sigma == Sigma::Minus).count();
        checks.push(at_most(format!("n_r=0 sigma=- states n={n}"), bad as f64, 0.0));
    }
    let za = cfg.zalpha();
    for n in 1..=n_max.max(3) {
        for kappa in 1..=n {
            let (_, eps) = fine_structure(n, kappa, za)?;
            let direct = energy(n - kappa, kappa, za)?.epsilon;
            checks.push(at_most(format!("fine-structure form n={n} kappa={kappa}"), (eps - direct).abs(), 1e-14));
            let small = 1e-3;
            let e = energy(n - kappa, kappa, small)?;
            let rydberg = e.binding() * 2.0 * (n * n) as f64 / (small * small);
            checks.push(at_most(
                format!("rydberg coefficient n={n} kappa={kappa}"),
                (rydberg - 1.0).abs(),
                RYDBERG_TOL,
            ));
        }
    }
    Ok(checks)
}

fn operators(cfg: PhysicalConfig, n_max: u32) -> Result<Vec<Check>, CliError> {
    let za = cfg.zalpha();
    let mut checks = Vec::new();
    for n in 1..=n_max {
        for qn in enumerate_level(n) {
            let cases: &[SpecialCase] = if qn.n_r == 0 { &[SpecialCase::Darwin] } else { &SpecialCase::ALL };
            for &case in cases {
                let st = DiracState::special(qn, case, cfg)?;
                let grid = SampleGrid::for_radial(&st.radial, 24, 10)?.guarded();
                for kind in OperatorKind::ALL {
                    let Some(want) = expected_eigenvalue(kind, &st, Some(case)) else {
                        continue;
                    };
                    let res = eigen_residual(&OperatorHandle::new(kind, za), &st, want, &grid)?;
                    checks.push(at_most(format!("{} on {} {case}", kind.name(), label(&qn)), res, OPERATOR_TOL));
                }
            }
        }
    }
    Ok(checks)
}

fn anticommutators(cfg: PhysicalConfig) -> Result<Vec<Check>, CliError> {
    let za = cfg.zalpha();
    let d = OperatorHandle::new(OperatorKind::ID, za);
    let jl = OperatorHandle::new(OperatorKind::IJL, za);
    let bel = OperatorHandle::new(OperatorKind::IBEL, za);
    let h = OperatorHandle::new(OperatorKind::H, za);
    let grid = SampleGrid::shell(1.5, 4.5, 6, 5)?;
    let mut checks = Vec::new();
    for seed in 1..=5u64 {
        let two_mj = [1, -1, 3, -3, 5][seed as usize - 1];
        let f = RandomField::new(seed, HalfInt::from_twice(two_mj)?, 3);
        for (name, a, b) in [("D,JL", &d, &jl), ("D,BEL", &d, &bel), ("JL,BEL", &jl, &bel)] {
            let v = anticommutator_norm(a, b, &f, &grid)?;
            checks.push(at_most(format!("{{{name}}} field {seed}"), v, OPERATOR_TOL));
        }
        for (name, a) in [("D", &d), ("JL", &jl), ("BEL", &bel)] {
            let v = commutator_norm(a, &h, &f, &grid)?;
            checks.push(at_most(format!("[{name},H] field {seed}"), v, OPERATOR_TOL));
        }
    }
    Ok(checks)
}

fn observables(cfg: PhysicalConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    // the printed closed forms drop O((Zα)²)
    let nr = PhysicalConfig::new(1.0, 1e-9)?;
    for tag in ReferenceTag::ALL {
        for &two_mj in tag.two_mj_values() {
            let st = DiracState::new(tag.quantum_numbers(two_mj)?, SpinParams::default(), nr)?;
            let (mut dw, mut ds, mut wmax) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..12 {
                let r = 0.25 + i as f64;
                for k in 0..12 {
                    let theta = 0.1 + 2.9 * k as f64 / 11.0;
                    let p = (r, theta, 0.4);
                    let (w, spin) = observe_at(&st, p, Mode::Exact)?;
                    let (w_ref, s_ref) = reference_state(tag, two_mj, p)?;
                    wmax = wmax.max(w_ref);
                    dw = dw.max((w - w_ref).abs());
                    if let Some(s) = spin.s {
                        if w_ref > 1e-6 * wmax {
                            ds = ds.max((0..3).map(|c| (s[c] - s_ref[c]).abs()).fold(0.0, f64::max));
                        }
                    }
                }
            }
            checks.push(at_most(format!("{} two_mj={two_mj} density", tag.name()), dw / wmax, CLOSED_FORM_TOL));
            checks.push(at_most(format!("{} two_mj={two_mj} spin", tag.name()), ds, CLOSED_FORM_TOL));
        }
    }
    for n in 1..=3 {
        for r in [0.5, 2.0, 5.0] {
            let vals: Vec<f64> = (0..9)
                .map(|k| hartree_shell_sum(n, cfg, (r, 0.15 + 0.35 * k as f64, 0.3 + 0.5 * k as f64), Mode::Exact))
                .collect::<Result<_, _>>()?;
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
            checks.push(at_most(format!("hartree n={n} r={r}"), var.sqrt() / mean, HARTREE_TOL));
        }
    }
    let qn = QuantumNumbers::from_principal(2, 1, 1, Sigma::Plus)?;
    let mut fields = Vec::new();
    for case in SpecialCase::ALL {
        let st = DiracState::special(qn, case, cfg)?;
        fields.push((case, ObservableField::from_field(&BispinorField::build(&st, GridSpec::default())?, Mode::Exact)));
    }
    for (case, f) in &fields {
        match case {
            SpecialCase::Darwin => checks.push(at_most("darwin mirror asymmetry n=2 j=1/2".into(), f.mirror_asymmetry(), MIRROR_TOL)),
            SpecialCase::JohnsonLippman => checks.push(above("jl mirror asymmetry n=2 j=1/2".into(), f.mirror_asymmetry(), DISTINCT_MIN)),
            // mirror-symmetric by construction; see the README
            SpecialCase::Bel => {}
        }
    }
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let d = l2_distance(&fields[i].1, &fields[j].1)?;
            checks.push(above(format!("L2 {} vs {} n=2 j=1/2", fields[i].0, fields[j].0), d, DISTINCT_MIN));
        }
    }
    Ok(checks)
}

fn oracle() -> Result<Vec<Check>, CliError> {
    let cfg = ShootingConfig::default();
    let mut checks = Vec::new();
    for za in [0.0073, 0.146, 0.584] {
        for kappa in 1..=2 {
            for (n_r, e) in find_spectrum(kappa, za, 3, &cfg)?.into_iter().enumerate() {
                let exact = energy(n_r as u32, kappa, za)?.epsilon;
                checks.push(at_most(
                    format!("shooting zalpha={za} kappa={kappa} n_r={n_r}"),
                    (e - exact).abs(),
                    ORACLE_TOL,
                ));
            }
        }
    }
    Ok(checks)
}
