use std::f64::consts::PI;

use dirac_core::bispinor::{special_case, BispinorField, DiracState, SpinParams};
use dirac_core::observables::{observe_sample, to_spherical, ObservableField, Mode, Spin};
use dirac_core::odeoracle::{find_spectrum, ShootingConfig};
use dirac_core::radial::{energy, fine_structure, PhysicalConfig, QuantumNumbers};
use serde::Serialize;

use crate::args::{FieldArgs, OracleArgs, Selector, SpectrumArgs, StateArgs};
use crate::output::{Cell, Num, Table};
use crate::CliError;

/// Z, α and Zα with the bound-state requirement `0 < Zα < 1` checked.
pub fn physical_config(z: f64, alpha: f64) -> Result<PhysicalConfig, CliError> {
    let cfg = PhysicalConfig::new(z, alpha)?;
    let za = cfg.zalpha();
    if !(za < 1.0) {
        return Err(CliError::Config(format!("Zα = {za} must lie below 1 for a bound 1s_1/2 level")));
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Coupling {
    #[serde(rename = "Z")]
    z: Num,
    alpha: Num,
    zalpha: Num,
}

impl Coupling {
    fn of(cfg: PhysicalConfig) -> Self {
        Coupling {
            z: Num(cfg.z),
            alpha: Num(cfg.alpha),
            zalpha: Num(cfg.zalpha()),
        }
    }
}

#[derive(Serialize)]
struct LevelTotal {
    n: u32,
    states: usize,
}

#[derive(Serialize)]
struct SpectrumMeta {
    #[serde(flatten)]
    coupling: Coupling,
    n_max: u32,
    totals: Vec<LevelTotal>,
}

pub fn spectrum(cfg: PhysicalConfig, a: &SpectrumArgs) -> Result<Table, CliError> {
    let za = cfg.zalpha();
    let columns = vec!["n", "kappa", "j", "epsilon", "binding", "delta_j", "degeneracy"];
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for n in 1..=a.n_max {
        let mut total = 0;
        for kappa in 1..=n {
            let n_r = n - kappa;
            let e = energy(n_r, kappa, za)?;
            let (delta, _) = fine_structure(n, kappa, za)?;
            let sigmas = if n_r == 0 { 1 } else { 2 };
            let degeneracy = 2 * kappa as usize * sigmas;
            total += degeneracy;
            rows.push(vec![
                n.into(),
                kappa.into(),
                (kappa as f64 - 0.5).into(),
                e.epsilon.into(),
                e.binding().into(),
                delta.into(),
                degeneracy.into(),
            ]);
        }
        totals.push(LevelTotal { n, states: total });
    }
    let meta = SpectrumMeta {
        coupling: Coupling::of(cfg),
        n_max: a.n_max,
        totals,
    };
    let mut t = Table::new(&meta, columns);
    t.rows = rows;
    Ok(t)
}

#[derive(Serialize)]
struct StateMeta {
    n: u32,
    n_r: u32,
    kappa: u32,
    j: Num,
    two_mj: i32,
    sigma: i32,
    theta: Num,
    phi: Num,
    case: Option<&'static str>,
    beta: [[Num; 2]; 2],
    #[serde(flatten)]
    coupling: Coupling,
    epsilon: Num,
    mode: &'static str,
}

struct Selected {
    state: DiracState,
    mode: Mode,
    meta: StateMeta,
}

fn select(cfg: PhysicalConfig, sel: &Selector) -> Result<Selected, CliError> {
    let qn = QuantumNumbers::from_principal(sel.n, sel.kappa, sel.two_mj, sel.sigma)?;
    let sp = sel.case.map(special_case).unwrap_or(SpinParams::new(sel.theta, sel.phi));
    let state = DiracState::new(qn, sp, cfg)?;
    let mode = if sel.pauli { Mode::Pauli } else { Mode::Exact };
    let (b1, b2) = state.beta();
    let meta = StateMeta {
        n: sel.n,
        n_r: qn.n_r,
        kappa: qn.kappa,
        j: Num(qn.j()),
        two_mj: qn.m_j.twice(),
        sigma: qn.sigma.sign() as i32,
        theta: Num(sp.theta),
        phi: Num(sp.phi),
        case: sel.case.map(|c| c.name()),
        beta: [[Num(b1.re), Num(b1.im)], [Num(b2.re), Num(b2.im)]],
        coupling: Coupling::of(cfg),
        epsilon: Num(state.epsilon()),
        mode: match mode {
            Mode::Exact => "exact",
            Mode::Pauli => "pauli",
        },
    };
    Ok(Selected { state, mode, meta })
}

fn spin_cells(spin: &Spin, theta: f64, phi: f64, spherical: bool) -> Vec<Cell> {
    let s = spin.s.unwrap_or([f64::NAN; 3]);
    let mut out: Vec<Cell> = s.iter().map(|&v| v.into()).collect();
    if spherical {
        let sph = spin.s.map(|v| to_spherical(v, theta, phi)).unwrap_or([f64::NAN; 3]);
        out.extend(sph.iter().map(|&v| Cell::from(v)));
    }
    out
}

const SPIN_COLUMNS: [&str; 3] = ["sx", "sy", "sz"];
const SPHERICAL_COLUMNS: [&str; 3] = ["sr", "stheta", "sphi"];

pub fn state(cfg: PhysicalConfig, a: &StateArgs) -> Result<Table, CliError> {
    let sel = select(cfg, &a.sel)?;
    let mut columns = vec![
        "r", "theta", "phi", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4", "w",
    ];
    columns.extend(SPIN_COLUMNS);
    let mut t = Table::new(&sel.meta, columns);
    for &(r, theta, phi) in &a.points {
        let x = sel.state.assemble_at(r, theta, phi)?;
        let (w, spin) = observe_sample(&x, sel.mode);
        let mut row: Vec<Cell> = vec![r.into(), theta.into(), phi.into()];
        for c in x.c {
            row.push(c.re.into());
            row.push(c.im.into());
        }
        row.push(w.into());
        row.extend(spin_cells(&spin, theta, phi, false));
        t.push(row);
    }
    Ok(t)
}

#[derive(Serialize)]
struct GridSummary {
    n_r: usize,
    n_theta: usize,
    n_phi: usize,
    norm: Num,
    integral_w: Num,
    mirror_asymmetry: Num,
}

#[derive(Serialize)]
struct SliceSummary {
    points: usize,
    extent: Num,
    phi: Num,
}

#[derive(Serialize)]
struct FieldMetaOut {
    #[serde(flatten)]
    state: StateMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slice: Option<SliceSummary>,
}

pub fn field(cfg: PhysicalConfig, a: &FieldArgs) -> Result<Table, CliError> {
    let sel = select(cfg, &a.sel)?;
    if a.slice {
        slice(sel, a)
    } else {
        grid(sel, a)
    }
}

fn grid(sel: Selected, a: &FieldArgs) -> Result<Table, CliError> {
    let field = BispinorField::build(&sel.state, a.grid)?;
    let obs = ObservableField::from_field(&field, sel.mode);
    let summary = GridSummary {
        n_r: a.grid.n_r,
        n_theta: a.grid.n_theta,
        n_phi: a.grid.n_phi,
        norm: Num(field.norm()),
        integral_w: Num(obs.integral()),
        mirror_asymmetry: Num(obs.mirror_asymmetry()),
    };
    let meta = FieldMetaOut {
        state: sel.meta,
        grid: Some(summary),
        slice: None,
    };
    let mut columns = vec!["r", "theta", "phi", "weight", "w"];
    columns.extend(SPIN_COLUMNS);
    if a.spherical {
        columns.extend(SPHERICAL_COLUMNS);
    }
    let mut t = Table::new(&meta, columns);
    for (k, (r, theta, phi, weight)) in field.grid.nodes().enumerate() {
        let mut row: Vec<Cell> = vec![r.into(), theta.into(), phi.into(), weight.into(), obs.w[k].into()];
        row.extend(spin_cells(&obs.spin[k], theta, phi, a.spherical));
        t.push(row);
    }
    Ok(t)
}

fn slice(sel: Selected, a: &FieldArgs) -> Result<Table, CliError> {
    let n = a.slice_n;
    if n == 0 || !(a.extent > 0.0) {
        return Err(CliError::Config("slice needs a positive size and extent".into()));
    }
    let meta = FieldMetaOut {
        state: sel.meta,
        grid: None,
        slice: Some(SliceSummary {
            points: n,
            extent: Num(a.extent),
            phi: Num(a.slice_phi),
        }),
    };
    let mut columns = vec!["z", "rho", "r", "theta", "phi", "w"];
    columns.extend(SPIN_COLUMNS);
    if a.spherical {
        columns.extend(SPHERICAL_COLUMNS);
    }
    let mut t = Table::new(&meta, columns);
    // cell centres keep every node off the axis and the origin for even n
    let at = |k: usize| -a.extent + 2.0 * a.extent * (k as f64 + 0.5) / n as f64;
    for iz in 0..n {
        let z = at(iz);
        for ir in 0..n {
            let rho = at(ir);
            let r = z.hypot(rho);
            let theta = rho.abs().atan2(z);
            let phi = if rho < 0.0 { a.slice_phi + PI } else { a.slice_phi };
            let x = sel.state.assemble_at(r, theta, phi)?;
            let (w, spin) = observe_sample(&x, sel.mode);
            let mut row: Vec<Cell> = vec![z.into(), rho.into(), r.into(), theta.into(), phi.into(), w.into()];
            row.extend(spin_cells(&spin, theta, phi, a.spherical));
            t.push(row);
        }
    }
    Ok(t)
}

#[derive(Serialize)]
struct OracleMeta {
    #[serde(flatten)]
    coupling: Coupling,
    kappa_max: u32,
    n_r_max: u32,
    max_delta: Num,
}

pub fn oracle(cfg: PhysicalConfig, a: &OracleArgs) -> Result<Table, CliError> {
    let za = cfg.zalpha();
    let shooting = ShootingConfig::default();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for kappa in 1..=a.kappa_max {
        if za >= kappa as f64 {
            continue;
        }
        let shot = find_spectrum(kappa, za, a.n_r_max, &shooting)?;
        for (n_r, &e) in shot.iter().enumerate() {
            let exact = energy(n_r as u32, kappa, za)?.epsilon;
            worst = worst.max((e - exact).abs());
            rows.push(vec![
                kappa.into(),
                (n_r as u32).into(),
                e.into(),
                exact.into(),
                (e - exact).into(),
            ]);
        }
    }
    let meta = OracleMeta {
        coupling: Coupling::of(cfg),
        kappa_max: a.kappa_max,
        n_r_max: a.n_r_max,
        max_delta: Num(worst),
    };
    let mut t = Table::new(&meta, vec!["kappa", "n_r", "eps_shoot", "eps_closed", "delta"]);
    t.rows = rows;
    Ok(t)
}
