//! One function per subcommand. Each reads a resolved [`RunConfig`] and
//! writes its tables through [`Output`].

use std::f64::consts::FRAC_PI_2;

use bec_metrology::config::{HardnessSpec, TrapConfig};
use bec_metrology::counting::{
    corrected_uncertainty, simulate_counts, CountingNoise, CountingRow, NumberPrior, QuantumSignalModel,
};
use bec_metrology::gp::{eta_sweep, evolve_two_mode, ground_state, loss_budget, EvolutionOptions};
use bec_metrology::physical::{Hardness, Superposition};
use bec_metrology::scaling::{critical_numbers, fig1_table, scaling_exponent, RegimeLabel};
use bec_metrology::spin::{
    crb_linear, crb_nonlinear, product_nonlinear_protocol, scaling_sweep, ProtocolKind, SpectrumBound,
};
use bec_metrology::stats::loglog_slope;
use bec_metrology::thomas_fermi::{overlap_gaussian, phase_dynamics, tf_profile};
use rayon::prelude::*;

use crate::config::{hardness_from, RunConfig};
use crate::output::{opt, Output};
use crate::CliError;

pub const BOUNDS_COLUMNS: &str = "protocol,N,t,gamma,delta_gamma,bound_HL,bound_QNL,purity";

/// `δγ` against `N` for each protocol, with the linear bounds, the slope of
/// each curve, the nonlinear bound and a purity trace of the `J_z²` protocol.
pub fn bounds(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let kinds = cfg.protocol.kinds()?;
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &t in &cfg.sweep.t_values {
        for &kind in &kinds {
            let ns: Vec<usize> = cfg
                .sweep
                .n_values
                .iter()
                .copied()
                .filter(|&n| kind != ProtocolKind::ProductQuadratic || n >= 2)
                .collect();
            let (sweep, slope) = scaling_sweep(kind, &ns, t, cfg.protocol.short_time)?;
            for r in &sweep {
                let b = crb_linear(SpectrumBound::qubit(1), r.n_atoms, t)?;
                rows.push(format!(
                    "{},{},{},{},{},{},{},{}",
                    kind.name(),
                    r.n_atoms,
                    t,
                    r.gamma,
                    r.delta_gamma,
                    b.heisenberg,
                    b.qnl,
                    r.purity
                ));
            }
            slopes.push(format!("{},{t},{}", kind.name(), opt(slope)));
        }
    }
    out.write_csv("bounds.csv", "simulated sensitivity and linear bounds against N", BOUNDS_COLUMNS, &rows)?;
    out.write_csv("slopes.csv", "log-log slope of delta_gamma against N", "protocol,t,slope", &slopes)?;

    let mut nonlinear = Vec::new();
    for &t in &cfg.sweep.t_values {
        for &n in &cfg.sweep.n_values {
            let b = crb_nonlinear(SpectrumBound::qubit(2), n, t)?;
            nonlinear.push(format!("{n},{t},{},{}", b.delta_gamma, b.product_reference));
        }
    }
    out.write_csv(
        "nonlinear_bound.csv",
        "two-body coupling bound against N",
        "N,t,delta_gamma_bound,product_reference",
        &nonlinear,
    )?;

    let (n, gamma) = (cfg.protocol.trace_n, cfg.protocol.trace_gamma);
    let trace: Vec<String> = product_nonlinear_protocol(n, gamma, &cfg.protocol.trace_t)?
        .into_iter()
        .map(|p| format!("{n},{gamma},{},{},{}", p.t, opt(p.result.ok().map(|s| s.delta_gamma)), p.purity))
        .collect();
    out.write_csv("purity_trace.csv", "J_z^2 product protocol against time", "N,gamma,t,delta_gamma,purity", &trace)
}

fn exact(d: u32, h: Hardness) -> Result<String, CliError> {
    Ok(scaling_exponent(d, h, RegimeLabel::Intermediate)?.to_string())
}

/// Scaling exponents against hardness and the critical atom numbers of the
/// configured trap lengths in one, two and three dimensions.
pub fn scaling(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let table = fig1_table(&cfg.sweep.q_values)?;
    let mut rows = Vec::new();
    for r in &table {
        let h = hardness_from(r.q)?;
        rows.push(format!(
            "{},{},{},{},{},{},{}",
            r.q,
            r.xi_1d,
            r.xi_2d,
            r.xi_3d,
            exact(1, h)?,
            exact(2, h)?,
            exact(3, h)?
        ));
    }
    out.write_csv(
        "fig1.csv",
        "intermediate-regime scaling exponent against trap hardness",
        "q,xi_1d,xi_2d,xi_3d,xi_1d_exact,xi_2d_exact,xi_3d_exact",
        &rows,
    )?;

    let (species, _) = cfg.physical()?;
    let mut crit_rows = Vec::new();
    for d in 1..=3 {
        for &q in &cfg.sweep.q_values {
            let h = hardness_from(q)?;
            let trap = TrapConfig { d, q: HardnessSpec::from_hardness(h), ..cfg.trap.clone() };
            let geom = trap.to_geometry(species.mass).map_err(|e| CliError::Config(e.to_string()))?;
            let c = critical_numbers(&geom, species.a11)?;
            crit_rows.push(format!("{d},{q},{},{},{}", c.n_lower, opt(c.n_upper), exact(d, h)?));
        }
    }
    out.write_csv(
        "critical.csv",
        "critical atom numbers for the configured trap lengths",
        "d,q,N_L,N_T,xi_intermediate",
        &crit_rows,
    )
}

/// Ground-state `η_N` sweep against Thomas-Fermi, two-mode evolution against
/// the Gaussian overlap, and the loss budget.
pub fn condensate(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let (species, geom) = cfg.physical()?;
    let policy = cfg.grid.policy();
    let opts = cfg.grid.options();
    let n_lower = critical_numbers(&geom, species.a11)?.n_lower;
    let n_for = |ratio: f64| 1.0 + ratio * (n_lower - 1.0);
    let mut ratios = cfg.sweep.n_over_nl.clone();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    let ns: Vec<f64> = ratios.iter().map(|&r| n_for(r)).collect();
    let sweep = eta_sweep(&geom, &species, &ns, &policy, &opts)?;
    let mut rows = Vec::new();
    for (r, ratio) in sweep.iter().zip(&ratios) {
        let tf = tf_profile(&geom, &species, r.n_atoms, RegimeLabel::Intermediate)?.eta_n;
        rows.push(format!("{},{ratio},{},{tf},{},{}", r.n_atoms, r.eta_n, r.eta_n / tf - 1.0, r.local_slope));
    }
    out.write_csv(
        "eta.csv",
        "ground-state eta_N against the Thomas-Fermi prediction (m^-3)",
        "N,N_over_NL,eta_gp,eta_tf,rel_diff,local_slope",
        &rows,
    )?;
    let xs: Vec<f64> = sweep.iter().map(|r| r.n_atoms).collect();
    let ys: Vec<f64> = sweep.iter().map(|r| r.eta_n).collect();
    let slope = loglog_slope(&xs, &ys);

    let sup = Superposition::equal();
    let n = n_for(cfg.sweep.evolve_n_over_nl);
    let phase = phase_dynamics(&geom, &species, n, sup)?;
    if phase.omega_n == 0.0 {
        return Err(CliError::Config("species has Δg = 0, so no relative phase accumulates".into()));
    }
    let t_final = cfg.sweep.omega_t_max / phase.omega_n.abs();
    let grid = policy.grid_for(&geom, &species, n)?;
    let ground = ground_state(&geom, &species, n, &grid, &opts)?;
    let run = |loss| {
        let o = EvolutionOptions { loss, records: cfg.sweep.records, ..Default::default() };
        evolve_two_mode(&ground.field, sup, &species, &geom, t_final, &o)
    };
    let (clean, lossy) = rayon::join(|| run(false), || run(true));
    let (clean, lossy) = (clean?, lossy?);
    let mut overlap = Vec::new();
    for (c, l) in clean.samples.iter().zip(&lossy.samples) {
        let model = overlap_gaussian(&phase, c.t)?;
        overlap.push(format!(
            "{},{},{},{},{},{},{},{},{}",
            c.t,
            phase.omega_n.abs() * c.t,
            c.overlap.norm(),
            c.overlap.arg(),
            model.norm(),
            model.arg(),
            l.overlap.norm(),
            c.p1,
            c.p2
        ));
    }
    out.write_csv(
        "overlap.csv",
        "two-mode overlap against the Gaussian form, with the lossy magnitude",
        "t_s,omega_t,overlap_abs,overlap_arg,gaussian_abs,gaussian_arg,overlap_abs_lossy,p1,p2",
        &overlap,
    )?;

    let mut report =
        vec![format!("eta_loglog_slope,{}", opt(slope)), format!("N_L,{n_lower}"), format!("N_evolved,{n}")];
    report.push(format!("omega_n_per_s,{}", phase.omega_n.abs()));
    report.push(format!("tau_pd_s,{}", opt(phase.tau_pd)));
    match loss_budget(&geom, &species, n, sup) {
        Ok(b) => {
            report.push(format!("loss_gamma_per_s,{}", b.gamma));
            report.push(format!("loss_ratio,{}", b.ratio));
        }
        Err(e) => log::warn!("loss budget unavailable: {e}"),
    }
    report.push(format!("evolution_steps,{}", clean.steps));
    report.push(format!("evolution_dt_s,{}", clean.dt));
    out.write_csv("report.csv", "condensate summary quantities", "quantity,value", &report)
}

/// Analytic against Monte Carlo `δγ` for Ramsey readout with miscounting
/// noise, at the operating point `γt = π/2`.
pub fn counting(cfg: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let mut cells = Vec::new();
    for &t in &cfg.sweep.t_values {
        for &n in &cfg.sweep.counting_n {
            for &x in &cfg.sweep.sigma_over_sqrt_n {
                cells.push((t, n, x * (n as f64).sqrt()));
            }
        }
    }
    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(t, n, sigma))| {
            let model = QuantumSignalModel::ramsey(t)?;
            let noise = CountingNoise::new(sigma)?;
            let prior = NumberPrior::point(n);
            let gamma = FRAC_PI_2 / t;
            let analytic = corrected_uncertainty(&model, &prior, noise, gamma)?.delta_gamma;
            let seed = cfg.seed.wrapping_add(i as u64);
            let mc = simulate_counts(&model, &prior, noise, gamma, cfg.sweep.trials, seed)?;
            Ok(CountingRow {
                sigma,
                n_atoms: n,
                gamma,
                delta_gamma_analytic: analytic,
                delta_gamma_mc: mc.delta_gamma,
                mc_stderr: mc.stderr,
            }
            .csv_line())
        })
        .collect::<Result<Vec<String>, bec_metrology::Error>>()?;
    out.write_csv("counting.csv", "Ramsey sensitivity with miscounting noise", CountingRow::CSV_HEADER, &rows)
}
