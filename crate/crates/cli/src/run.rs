//! Dispatch from a validated config to the library pipelines.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stakit::equivalence::{
    dh_residual, mde1_diagnostics_masked, mde1_report, mde2_residual, spinorial_maxwell_residual, sw_residuals,
    weyl_gauge_check, Mde2Inputs, SwState,
};
use stakit::fields::{
    generalized_maxwell_residual, hertz_pipeline, hertz_residuals, resolve_domain, LatticeSpec, MultivectorField,
};
use stakit::inversion::{bilinear_covariants, boomerang_reconstruct, identity_residuals, invert_field, BilinearSet};
use stakit::report::{h_sweep, ConvergenceRow, ResidualReport};
use stakit::{Error, EvenMultivector, Multivector, Result};

use crate::config::{Command, FieldConfig, RunConfig};
use crate::output::{Report, ResidualEntry};

/// Runs the configured pipeline. The seed argument overrides the config.
pub fn run_command(cfg: &RunConfig, seed: Option<u64>) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let mut out = Outcome::default();
    match cfg.command {
        Command::Invert => invert(cfg, &mut out)?,
        Command::Identities => identities(cfg, seed, &mut out)?,
        cmd => swept(cmd, cfg, &mut out)?,
    }
    let mut report = Report::new(cfg.command, seed);
    report.lattice = out.trace.domain;
    for r in &out.trace.residuals {
        let s = r.summary();
        let tolerance = cfg.tolerance(&r.name, r.informational);
        report.residuals.push(ResidualEntry {
            pass: tolerance.map(|t| s.max <= t),
            name: s.name,
            max: s.max,
            l2: s.l2,
            points: s.points,
            masked: s.masked,
            informational: r.informational,
            tolerance,
        });
    }
    report.scalars = out.trace.scalars.iter().cloned().collect();
    report.values = out.values;
    report.convergence = out.convergence;
    report.pass = report.residuals.iter().all(|r| r.pass != Some(false));
    report.trace = Some(out.trace);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Default)]
struct Outcome {
    trace: ResidualReport,
    values: BTreeMap<String, Vec<f64>>,
    convergence: Vec<ConvergenceRow>,
}

fn input(cfg: &RunConfig, name: &str) -> Result<Option<MultivectorField>> {
    cfg.inputs.get(name).map(FieldConfig::build).transpose()
}

fn required(cfg: &RunConfig, name: &str) -> Result<MultivectorField> {
    input(cfg, name)?.ok_or_else(|| Error::Config(format!("inputs.{name}: missing")))
}

fn invert(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let f = required(cfg, "F")?;
    let (nu, phi) = (cfg.param_or("nu", 0.0), cfg.param_or("phi", 0.0));
    let lattice = match (f.lattice(), cfg.lattice_spec()?) {
        (Some(l), _) => Some(*l),
        (None, l) => l,
    };
    let Some(spec) = lattice else {
        // A single field value: failures are input errors.
        let value = f.eval(&[0.0; 4])?;
        let sol = invert_field(&value, nu, phi)?;
        out.trace.push("round_trip", vec![round_trip(&sol.psi, &value)]);
        out.trace.push_info("rotor_normalization", vec![rotor_defect(&sol.l)]);
        out.trace.push_scalar("rho", sol.invariants.rho);
        out.trace.push_scalar("beta", sol.invariants.beta);
        out.values.insert("psi".into(), sol.psi.to_multivector().coeffs().to_vec());
        out.values.insert("l".into(), sol.l.to_multivector().coeffs().to_vec());
        return Ok(());
    };
    let grid = f.sample(&spec)?;
    let rows: Vec<[f64; 2]> = grid
        .data
        .par_iter()
        .map(|v| match invert_field(v, nu, phi) {
            Ok(sol) => [round_trip(&sol.psi, v), rotor_defect(&sol.l)],
            Err(_) => [f64::NAN; 2],
        })
        .collect();
    out.trace = ResidualReport::on(spec);
    out.trace.push("round_trip", rows.iter().map(|r| r[0]).collect());
    out.trace.push_info("rotor_normalization", rows.iter().map(|r| r[1]).collect());
    Ok(())
}

fn round_trip(psi: &EvenMultivector, f: &Multivector) -> f64 {
    let m = psi.to_multivector();
    (m * Multivector::gamma21() * m.reverse() - *f).norm() / f.norm()
}

fn rotor_defect(l: &EvenMultivector) -> f64 {
    let m = l.to_multivector();
    (m * m.reverse() - Multivector::ONE).norm()
}

/// Random spinor with σ² + ω² bounded away from zero.
pub fn random_spinor(rng: &mut impl Rng) -> EvenMultivector {
    loop {
        let psi = EvenMultivector::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let b = bilinear_covariants(&psi);
        if b.sigma.hypot(b.omega) > 1e-3 {
            return psi;
        }
    }
}

fn boomerang_error(b: &BilinearSet) -> f64 {
    let Ok(psi) = boomerang_reconstruct(b) else {
        return f64::INFINITY;
    };
    let r = bilinear_covariants(&psi);
    let scale = b.sigma.hypot(b.omega);
    let diffs = [
        (r.sigma - b.sigma).abs(),
        (r.omega - b.omega).abs(),
        (r.j - b.j).norm(),
        (r.k - b.k).norm(),
        (r.f - b.f).norm(),
    ];
    diffs.into_iter().fold(0.0, f64::max) / scale
}

fn identities(cfg: &RunConfig, seed: u64, out: &mut Outcome) -> Result<()> {
    let n = cfg.param_or("n", 1000.0) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spinors: Vec<EvenMultivector> = (0..n).map(|_| random_spinor(&mut rng)).collect();
    let rows: Vec<(Vec<(&'static str, f64)>, f64)> = spinors
        .par_iter()
        .map(|psi| {
            let b = bilinear_covariants(psi);
            let ids = identity_residuals(&b).iter().map(|r| (r.name, r.relative())).collect();
            (ids, boomerang_error(&b))
        })
        .collect();
    if let Some((first, _)) = rows.first() {
        for (k, (name, _)) in first.iter().enumerate() {
            out.trace.push(name, rows.iter().map(|(r, _)| r[k].1).collect());
        }
    }
    out.trace.push("boomerang", rows.iter().map(|(_, b)| *b).collect());
    Ok(())
}

fn stencil_radius(cmd: Command) -> usize {
    match cmd {
        Command::Hertz | Command::Mde2 => 3,
        Command::Mde1 => 2,
        _ => 1,
    }
}

fn default_levels(cmd: Command) -> usize {
    match cmd {
        Command::Hertz | Command::Maxwell | Command::Mde1 | Command::Mde2 => 3,
        _ => 1,
    }
}

/// Lattice pipelines, run over h, h/2, ... when every input is analytic.
fn swept(cmd: Command, cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let mut fields = BTreeMap::new();
    for name in cfg.inputs.keys() {
        fields.insert(name.as_str(), required(cfg, name)?);
    }
    let all: Vec<&MultivectorField> = fields.values().collect();
    let sampled = all.iter().any(|f| f.lattice().is_some());
    let base = resolve_domain(&all, cfg.lattice_spec()?.as_ref(), stencil_radius(cmd))?;
    let levels = match cfg.param("levels") {
        Some(l) if sampled && l > 1.0 => {
            return Err(Error::Config("params.levels: sampled inputs cannot be refined".into()));
        }
        Some(l) => l as usize,
        None if sampled => 1,
        None => default_levels(cmd),
    };
    let get = |name: &str| fields.get(name).cloned();
    let zero = MultivectorField::zero;
    let (mut reports, rows) = h_sweep(&base, levels, |domain: &LatticeSpec| -> Result<ResidualReport> {
        match cmd {
            Command::Hertz => hertz_residuals(&hertz_pipeline(&fields["Pi"], domain)?),
            Command::Maxwell => generalized_maxwell_residual(
                &fields["F"],
                &get("Je").unwrap_or_else(zero),
                &get("Jm").unwrap_or_else(zero),
                domain,
            ),
            Command::Mde1 => mde1(cfg, &fields["psi"], get("Jcal").as_ref(), domain),
            Command::Mde2 => mde2_residual(
                &Mde2Inputs {
                    g: fields["G"].clone(),
                    pi: fields["Pi"].clone(),
                    p: fields["P"].clone(),
                    m: cfg.param_or("m", 1.0),
                    je: get("Je"),
                },
                domain,
            ),
            Command::Sw => {
                let state =
                    SwState { psi: fields["psi"].clone(), a: get("A"), f: get("F"), lambda: cfg.param_or("lambda", 0.0) };
                let ansatz = cfg.param("ansatz").map_or(state.a.is_none(), |v| v != 0.0);
                sw_residuals(&state, domain, ansatz)
            }
            Command::WeylGauge => weyl_gauge_check(
                &fields["psi"],
                &get("B").unwrap_or_else(zero),
                cfg.param_or("g", 0.0),
                &fields["theta"],
                domain,
            ),
            Command::Invert | Command::Identities => unreachable!("not a lattice pipeline"),
        }
    })?;
    out.trace = reports.pop().expect("at least one level");
    if levels > 1 {
        out.convergence = rows;
    }
    Ok(())
}

fn mde1(cfg: &RunConfig, psi: &MultivectorField, jcal: Option<&MultivectorField>, domain: &LatticeSpec) -> Result<ResidualReport> {
    let beta0 = cfg.param_or("beta0", 0.0);
    let mut rep = mde1_report(&mde1_diagnostics_masked(psi, domain, beta0)?);
    let lambda = cfg.param("lambda").or_else(|| rep.scalar("lambda_mean")).unwrap_or(0.0);
    let chain = spinorial_maxwell_residual(psi, jcal, domain)?;
    let dh = dh_residual(psi, lambda, domain)?;
    rep.residuals.extend(chain.residuals);
    rep.residuals.extend(dh.residuals);
    for (name, v) in dh.scalars {
        if rep.scalar(&name).is_none() {
            rep.push_scalar(&name, v);
        }
    }
    rep.push_scalar("lambda_used", lambda);
    Ok(rep)
}
