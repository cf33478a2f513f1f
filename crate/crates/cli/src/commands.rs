use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use leapfrog_core::fullode::{augmented_rhs, pointvortex_rhs};
use leapfrog_core::portrait::{default_window, MASK_RADIUS};
use leapfrog_core::{
    classify_configuration, equilibria, hamiltonian, hamiltonian_grid, integrate, parallel_exact, pde_check,
    reduced_to_physical, AugmentedState, Classifier, Complex, EquilibriumReport, Error, ModelParams, ParallelSetup,
    ReducedState, Regime, Stencil, Termination, VerdictKind,
};

use crate::args::{
    parse_grid, Format, Inputs, IntegrationArgs, ModelArgs, ParallelArgs, PdeArgs, PortraitArgs, Resolved, StencilArg,
};
use crate::emit::{num, open, opt, write_csv_row, write_json, write_nums, CliError};

/// Parameters actually analysed, in the canonical frame.
#[derive(Serialize)]
struct ModelEcho {
    regime: &'static str,
    alpha: f64,
    ratio: f64,
    d: f64,
    theta0: Option<f64>,
    w0: Option<f64>,
}

/// How physical inputs were mapped to the canonical frame.
#[derive(Serialize)]
struct CanonicalEcho {
    gamma1: f64,
    gamma2: f64,
    swapped: bool,
    reflected: bool,
    time_scale: f64,
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::SameSign => "same",
        Regime::OppositeSign => "opposite",
    }
}

impl Resolved {
    fn model(&self) -> ModelEcho {
        let p = &self.params;
        ModelEcho {
            regime: regime_name(p.regime()),
            alpha: p.alpha(),
            ratio: p.ratio(),
            d: p.d(),
            theta0: self.state.map(|s| s.theta),
            w0: self.state.map(|s| s.w),
        }
    }

    fn canonical(&self) -> Option<CanonicalEcho> {
        self.setup.map(|s| {
            let (gamma1, gamma2) = s.original_gammas();
            CanonicalEcho {
                gamma1,
                gamma2,
                swapped: s.swapped,
                reflected: s.reflected,
                time_scale: s.time_scale,
            }
        })
    }
}

fn model_only(args: &ModelArgs, need_state: bool) -> Result<Resolved, CliError> {
    match args.resolve(need_state)? {
        Inputs::Model(r) => Ok(r),
        Inputs::Infeasible { d } => Err(Error::InfeasibleInvariant { d }.into()),
    }
}

fn reject_csv(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::usage(format!("`{command}` only writes JSON"))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct EquilibriaDoc {
    model: ModelEcho,
    canonical: Option<CanonicalEcho>,
    #[serde(flatten)]
    report: EquilibriumReport<f64>,
}

pub fn equilibria_cmd(args: &ModelArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<(), CliError> {
    reject_csv(format, "equilibria")?;
    let r = model_only(args, false)?;
    let report = equilibria(&r.params)?;
    let mut out = open(output.as_deref())?;
    write_json(
        &mut out,
        &EquilibriaDoc {
            model: r.model(),
            canonical: r.canonical(),
            report,
        },
    )?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ClassifyDoc {
    kind: VerdictKind,
    hamiltonian: f64,
    threshold: f64,
    detail: String,
    equilibria: Option<EquilibriumReport<f64>>,
    model: Option<ModelEcho>,
    canonical: Option<CanonicalEcho>,
}

pub fn classify_cmd(args: &ModelArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<(), CliError> {
    reject_csv(format, "classify")?;
    let doc = match args.resolve(true)? {
        Inputs::Infeasible { .. } => {
            let phys = leapfrog_core::PhysicalState::new(
                args.r1.unwrap_or_default(),
                args.z1.unwrap_or_default(),
                args.r2.unwrap_or_default(),
                args.z2.unwrap_or_default(),
            );
            let cv = classify_configuration(
                args.gamma1.unwrap_or_default(),
                args.gamma2.unwrap_or_default(),
                phys,
                args.alpha,
            )?;
            let v = cv.verdict;
            ClassifyDoc {
                kind: v.kind,
                hamiltonian: v.hamiltonian,
                threshold: v.threshold,
                detail: v.detail,
                equilibria: None,
                model: None,
                canonical: None,
            }
        }
        Inputs::Model(r) => {
            let classifier = Classifier::new(&r.params)?;
            let v = classifier.classify(&r.state.expect("classify requires a state"))?;
            ClassifyDoc {
                kind: v.kind,
                hamiltonian: v.hamiltonian,
                threshold: v.threshold,
                detail: v.detail,
                equilibria: classifier.equilibria(),
                model: Some(r.model()),
                canonical: r.canonical(),
            }
        }
    };
    let mut out = open(output.as_deref())?;
    write_json(&mut out, &doc)?;
    out.flush()?;
    Ok(())
}

const SIMULATE_COLUMNS: [&str; 9] = ["t", "theta", "W", "R1", "R2", "z1", "z2", "H", "drift"];

#[derive(Serialize)]
struct SimulateDoc<'a> {
    model: ModelEcho,
    canonical: Option<CanonicalEcho>,
    t_end: f64,
    rtol: f64,
    atol: f64,
    termination: &'static str,
    detail: Option<&'a str>,
    max_drift: f64,
    columns: [&'static str; 9],
    rows: Vec<[f64; 9]>,
}

fn simulate_rows(params: &ModelParams<f64>, times: &[f64], states: &[[f64; 4]], drift: &[f64]) -> Vec<[f64; 9]> {
    times
        .iter()
        .zip(states)
        .zip(drift)
        .map(|((&t, y), &dr)| {
            let red = ReducedState::new(y[0], y[1]);
            let (r1, r2) = reduced_to_physical(&red, params).map_or((f64::NAN, f64::NAN), |(a, b, _)| (a, b));
            let h = hamiltonian(&red, params).unwrap_or(f64::NAN);
            [t, y[0], y[1], r1, r2, y[2], y[3], h, dr]
        })
        .collect()
}

pub fn simulate_cmd(
    args: &ModelArgs,
    ia: &IntegrationArgs,
    format: Option<Format>,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let r = model_only(args, true)?;
    let p = r.params;
    let s0 = r.state.expect("simulate requires a state");
    let y0 = AugmentedState::new(s0.theta, s0.w, r.z0.0, r.z0.1).to_array();
    let h = move |y: &[f64; 4]| hamiltonian(&ReducedState::new(y[0], y[1]), &p).unwrap_or(f64::NAN);
    let traj = integrate(augmented_rhs(p), y0, ia.t_end, ia.rtol, ia.atol, &[&h])?;
    let rows = simulate_rows(&p, &traj.times, &traj.states, &traj.drift);

    let mut out = open(output.as_deref())?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            write_csv_row(&mut out, SIMULATE_COLUMNS)?;
            for row in &rows {
                write_nums(&mut out, row)?;
            }
        }
        Format::Json => write_json(
            &mut out,
            &SimulateDoc {
                model: r.model(),
                canonical: r.canonical(),
                t_end: ia.t_end,
                rtol: ia.rtol,
                atol: ia.atol,
                termination: traj.termination.as_str(),
                detail: traj.detail.as_deref(),
                max_drift: traj.hamiltonian_drift,
                columns: SIMULATE_COLUMNS,
                rows,
            },
        )?,
    }
    out.flush()?;
    early_stop(
        traj.termination,
        traj.detail,
        *traj.times.last().expect("nonempty trajectory"),
    )
}

fn early_stop(termination: Termination, detail: Option<String>, t: f64) -> Result<(), CliError> {
    if termination == Termination::Completed {
        return Ok(());
    }
    let mut err = CliError::runtime(
        termination.as_str(),
        detail.unwrap_or_else(|| format!("integration stopped early at t = {t}")),
    );
    err.termination = Some(termination.as_str().into());
    err.t = Some(t);
    Err(err)
}

#[derive(Serialize)]
struct Counts {
    leapfrog: usize,
    non_leapfrog: usize,
    out_of_theorem_scope: usize,
    masked: usize,
}

#[derive(Serialize)]
struct PortraitMeta {
    model: ModelEcho,
    canonical: Option<CanonicalEcho>,
    value: &'static str,
    n_theta: usize,
    n_w: usize,
    theta_range: (f64, f64),
    w_range: (f64, f64),
    threshold: f64,
    mask_radius: f64,
    row_order: &'static str,
    counts: Counts,
}

#[derive(Serialize)]
struct PortraitDoc {
    #[serde(flatten)]
    meta: PortraitMeta,
    theta: Vec<f64>,
    w: Vec<f64>,
    values: Vec<Option<f64>>,
    verdicts: Vec<Option<VerdictKind>>,
}

pub fn portrait_cmd(pa: &PortraitArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<(), CliError> {
    let r = model_only(&pa.model, false)?;
    let (n_theta, n_w) = parse_grid(&pa.grid)?;
    let (dt, dw) = default_window(&r.params);
    let theta_range = (pa.theta_min.unwrap_or(dt.0), pa.theta_max.unwrap_or(dt.1));
    let w_range = (pa.w_min.unwrap_or(dw.0), pa.w_max.unwrap_or(dw.1));
    let grid = hamiltonian_grid(&r.params, theta_range, w_range, (n_theta, n_w))?;

    let meta = PortraitMeta {
        model: r.model(),
        canonical: r.canonical(),
        value: match r.params.regime() {
            Regime::SameSign => "H",
            Regime::OppositeSign => "G",
        },
        n_theta,
        n_w,
        theta_range,
        w_range,
        threshold: grid.threshold,
        mask_radius: MASK_RADIUS,
        row_order: "W outer, theta inner",
        counts: Counts {
            leapfrog: grid.count(VerdictKind::Leapfrog),
            non_leapfrog: grid.count(VerdictKind::NonLeapfrog),
            out_of_theorem_scope: grid.count(VerdictKind::OutOfTheoremScope),
            masked: grid.values.iter().filter(|v| v.is_none()).count(),
        },
    };

    let mut out = open(output.as_deref())?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            write_csv_row(&mut out, ["theta", "W", "value", "verdict"])?;
            for (row, &w) in grid.w_axis.iter().enumerate() {
                for (col, &theta) in grid.theta_axis.iter().enumerate() {
                    let verdict = grid.verdict(row, col).map(|k| k.as_str());
                    write_csv_row(
                        &mut out,
                        [num(theta), num(w), opt(grid.value(row, col).map(num)), opt(verdict)],
                    )?;
                }
            }
            out.flush()?;
            let meta_path = pa.meta.clone().or_else(|| {
                output.as_ref().map(|o| {
                    let mut s = o.clone().into_os_string();
                    s.push(".meta.json");
                    PathBuf::from(s)
                })
            });
            if let Some(path) = meta_path {
                let mut m = open(Some(&path))?;
                write_json(&mut m, &meta)?;
                m.flush()?;
            }
        }
        Format::Json => {
            let doc = PortraitDoc {
                meta,
                theta: grid.theta_axis,
                w: grid.w_axis,
                values: grid.values,
                verdicts: grid.verdicts,
            };
            write_json(&mut out, &doc)?;
            out.flush()?;
        }
    }
    Ok(())
}

const PARALLEL_COLUMNS: [&str; 10] = [
    "t", "x1", "y1", "x2", "y2", "x1_exact", "y1_exact", "x2_exact", "y2_exact", "error",
];

#[derive(Serialize)]
struct ParallelDoc<'a> {
    gamma1: f64,
    gamma2: f64,
    alpha: f64,
    distance: f64,
    omega: f64,
    period: Option<f64>,
    center: Option<(f64, f64)>,
    velocity: Option<(f64, f64)>,
    t_end: f64,
    rtol: f64,
    atol: f64,
    termination: &'static str,
    detail: Option<&'a str>,
    max_error: f64,
    max_drift: f64,
    columns: [&'static str; 10],
    rows: Vec<[f64; 10]>,
}

pub fn parallel_cmd(pa: &ParallelArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<(), CliError> {
    let setup = ParallelSetup::new(
        pa.gamma1,
        pa.gamma2,
        pa.alpha,
        Complex::new(pa.x1, pa.y1),
        Complex::new(pa.x2, pa.y2),
    )?;
    let t_end = pa.t_end.or(setup.period()).unwrap_or(100.0);
    let dist = |y: &[f64; 4]| (y[0] - y[2]).hypot(y[1] - y[3]);
    let traj = integrate(
        pointvortex_rhs(setup),
        [pa.x1, pa.y1, pa.x2, pa.y2],
        t_end,
        pa.rtol,
        pa.atol,
        &[&dist],
    )?;

    let rows: Vec<[f64; 10]> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, y)| {
            let [e1, e2] = parallel_exact(t, &setup);
            let err = (y[0] - e1.re)
                .hypot(y[1] - e1.im)
                .max((y[2] - e2.re).hypot(y[3] - e2.im));
            [t, y[0], y[1], y[2], y[3], e1.re, e1.im, e2.re, e2.im, err]
        })
        .collect();
    let max_error = rows.iter().map(|r| r[9]).fold(0.0, f64::max);

    let mut out = open(output.as_deref())?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            write_csv_row(&mut out, PARALLEL_COLUMNS)?;
            for row in &rows {
                write_nums(&mut out, row)?;
            }
        }
        Format::Json => {
            let velocity = setup.center_c.is_none().then(|| {
                let v = setup.translation_velocity();
                (v.re, v.im)
            });
            write_json(
                &mut out,
                &ParallelDoc {
                    gamma1: pa.gamma1,
                    gamma2: pa.gamma2,
                    alpha: pa.alpha,
                    distance: setup.dist_d,
                    omega: setup.omega,
                    period: setup.period(),
                    center: setup.center_c.map(|c| (c.re, c.im)),
                    velocity,
                    t_end,
                    rtol: pa.rtol,
                    atol: pa.atol,
                    termination: traj.termination.as_str(),
                    detail: traj.detail.as_deref(),
                    max_error,
                    max_drift: traj.hamiltonian_drift,
                    columns: PARALLEL_COLUMNS,
                    rows,
                },
            )?
        }
    }
    out.flush()?;
    early_stop(
        traj.termination,
        traj.detail,
        *traj.times.last().expect("nonempty trajectory"),
    )
}

#[derive(Serialize)]
struct PdeDoc {
    model: ModelEcho,
    canonical: Option<CanonicalEcho>,
    stencil: &'static str,
    n: usize,
    max_radial_error: f64,
    max_axial_error: f64,
    max_azimuthal: f64,
    max_error: f64,
}

pub fn pdecheck_cmd(pa: &PdeArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<(), CliError> {
    reject_csv(format, "pdecheck")?;
    let r = model_only(&pa.model, true)?;
    let s = r.state.expect("pdecheck requires a state");
    let phys = AugmentedState::new(s.theta, s.w, r.z0.0, r.z0.1).to_physical(&r.params)?;
    let (stencil, name) = match pa.stencil {
        StencilArg::Fourth => (Stencil::FourthOrder, "fourth"),
        StencilArg::Spectral => (Stencil::Spectral, "spectral"),
    };
    let check = pde_check(&phys, &r.params, pa.n, stencil)?;
    let mut out = open(output.as_deref())?;
    write_json(
        &mut out,
        &PdeDoc {
            model: r.model(),
            canonical: r.canonical(),
            stencil: name,
            n: check.n,
            max_radial_error: check.max_radial_error,
            max_axial_error: check.max_axial_error,
            max_azimuthal: check.max_azimuthal,
            max_error: check.max_error(),
        },
    )?;
    out.flush()?;
    Ok(())
}
