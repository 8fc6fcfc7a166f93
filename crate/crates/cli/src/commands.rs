//! Subcommand bodies. Each writes its report to `out` and returns the exit
//! code; errors map to exit code 2 in the binary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use neurosyn::analysis::{certify, compute_bounds, Certificate};
use neurosyn::dynamics::{ModelSpec, SystemState};
use neurosyn::simulate::{
    check_dale, check_entrainment, check_invariance, empirical_rate, integrate_delayed, sample_invariant, sample_uniform, with_dale_signs,
    RateEstimate, Trajectory,
};
use neurosyn::Topology;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{InitialConfig, RunConfig};
use crate::error::{CliError, EXIT_CERTIFIED, EXIT_NOT_CERTIFIED};

/// Periods compared by the entrainment monitor.
pub const ENTRAINMENT_PERIODS: usize = 3;
pub const ENTRAINMENT_TOLERANCE: f64 = 1e-3;

/// Independent generator for run `index` of a seeded batch.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random initial state drawn per the config's `initial` block (random
/// draws only; explicit states are returned unchanged).
pub fn draw_initial(cfg: &RunConfig, topo: &Topology, spec: &ModelSpec, rng: &mut ChaCha8Rng) -> Result<SystemState, CliError> {
    if let Some(s) = cfg.explicit_initial() {
        return Ok(s);
    }
    random_initial(cfg, topo, spec, rng)
}

fn random_initial(cfg: &RunConfig, topo: &Topology, spec: &ModelSpec, rng: &mut ChaCha8Rng) -> Result<SystemState, CliError> {
    let (range, dale, confine) = match cfg.run.initial {
        InitialConfig::Random { range, dale, confine } => (range, dale, confine),
        InitialConfig::Explicit { .. } => (1.0, true, false),
    };
    if confine {
        let bounds = compute_bounds(topo, spec)?;
        return Ok(sample_invariant(topo, spec.kind, &bounds, range, rng));
    }
    let s = sample_uniform(topo, range, rng);
    Ok(if dale { with_dale_signs(&s, topo) } else { s })
}

fn run(cfg: &RunConfig, topo: &Topology, spec: &ModelSpec, s0: &SystemState) -> Result<Trajectory, CliError> {
    Ok(integrate_delayed(topo, spec, s0, cfg.run.t_end, cfg.run.dt, cfg.run.delay)?)
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn write_certificate(out: &mut dyn Write, cert: &Certificate) -> std::io::Result<()> {
    let j = cert.majorant;
    writeln!(out, "model: {}", cert.kind.tag())?;
    writeln!(out, "majorant:")?;
    writeln!(out, "  [{:>12.6}, {:>12.6}]", j[(0, 0)], j[(0, 1)])?;
    writeln!(out, "  [{:>12.6}, {:>12.6}]", j[(1, 0)], j[(1, 1)])?;
    let verdict = if cert.satisfied { "satisfied" } else { "not satisfied" };
    let rel = if cert.satisfied { ">" } else { "<=" };
    writeln!(
        out,
        "condition: c_n*c_s = {:.6} {rel} rhs = {:.6} ({verdict})",
        cert.condition_lhs, cert.condition_rhs
    )?;
    match cert.rate {
        Some(r) => writeln!(out, "rate: {r:.6} ({r:.2})")?,
        None => writeln!(out, "rate: none")?,
    }
    writeln!(
        out,
        "eta: ({:.6}, {:.6}) p={} delta={}",
        cert.eta[0],
        cert.eta[1],
        fmt_p(cert.p),
        cert.delta
    )
}

/// Certificate and invariant-set report; exit 0 when certified, 1 otherwise.
pub fn cmd_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let (topo, spec) = cfg.build()?;
    let cert = certify(&topo, &spec)?;
    let b = compute_bounds(&topo, &spec)?;
    write_certificate(out, &cert)?;
    writeln!(
        out,
        "bounds: d_max={} h_max={} phi_max={} w_max={:.6} x_max={:.6} nu_max={:.6}",
        b.d_max, b.h_max, b.phi_max, b.w_max, b.x_max, b.nu_max
    )?;
    Ok(if cert.satisfied { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
}

fn gnuplot_script(csv: &Path, n: usize, m: usize) -> String {
    let file = csv.display();
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead outside\n\
         set xlabel 't'\n\
         set multiplot layout 2,1\n\
         set ylabel 'neural state'\n\
         plot for [i=2:{}] '{file}' using 1:i with lines\n\
         set ylabel 'synaptic weight'\n\
         plot for [i={}:{}] '{file}' using 1:i with lines\n\
         unset multiplot\n",
        n + 1,
        n + 2,
        n + m + 1
    )
}

/// Integrates the configured run, prints monitor reports, optionally
/// writes the trajectory CSV and a gnuplot script.
pub fn cmd_simulate(cfg: &RunConfig, csv: Option<&Path>, plot: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (topo, spec) = cfg.build()?;
    let seed = cfg.seed();
    let s0 = draw_initial(cfg, &topo, &spec, &mut stream_rng(seed, 0))?;
    let traj = run(cfg, &topo, &spec, &s0)?;
    let cert = certify(&topo, &spec)?;
    let bounds = compute_bounds(&topo, &spec)?;

    writeln!(out, "steps: {} dt={} t_end={} seed={seed}", traj.len() - 1, traj.dt, traj.t_end())?;
    match traj.delay {
        Some(d) => writeln!(out, "mode: delayed activations, tau={} (effective {d})", cfg.run.delay)?,
        None => writeln!(out, "mode: undelayed")?,
    }
    for w in &traj.warnings {
        writeln!(out, "warning: {w}")?;
    }
    write!(out, "{}", check_invariance(&traj, &bounds, &spec))?;
    write!(out, "{}", check_dale(&traj, &topo, &spec))?;
    if let Some(period) = cfg.run.period {
        let transient = cfg
            .run
            .transient
            .unwrap_or_else(|| cert.rate.map_or(0.5 * cfg.run.t_end, |r| 5.0 / r));
        match check_entrainment(&traj, period, transient, ENTRAINMENT_PERIODS, ENTRAINMENT_TOLERANCE) {
            Ok(rep) => write!(out, "{rep}")?,
            Err(e) => writeln!(out, "entrainment: skipped ({e})")?,
        }
    }
    if let Some(path) = csv {
        let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        traj.write_csv(&mut w)?;
        w.flush()?;
        writeln!(out, "csv: {}", path.display())?;
        if let Some(script) = plot {
            std::fs::write(script, gnuplot_script(path, topo.n(), topo.m()))?;
            writeln!(out, "plot script: {}", script.display())?;
        }
    } else if plot.is_some() {
        return Err(CliError::Usage("--plot needs --out".into()));
    }
    Ok(EXIT_CERTIFIED)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs:?} workers: {e}")))
}

/// Empirical rate of pair `index`: two random initial states from stream
/// `index` of the seed, composite norm from the certificate.
fn pair_rate(cfg: &RunConfig, topo: &Topology, spec: &ModelSpec, cert: &Certificate, seed: u64, index: u64) -> Result<RateEstimate, CliError> {
    let mut rng = stream_rng(seed, index);
    let a0 = random_initial(cfg, topo, spec, &mut rng)?;
    let b0 = random_initial(cfg, topo, spec, &mut rng)?;
    let a = run(cfg, topo, spec, &a0)?;
    let b = run(cfg, topo, spec, &b0)?;
    Ok(empirical_rate(&a, &b, &cert.eta, cert.p, None)?)
}

/// Per-pair empirical rates, in pair order regardless of `jobs`.
pub fn rate_estimates(cfg: &RunConfig, pairs: usize, jobs: Option<usize>) -> Result<(Certificate, Vec<RateEstimate>), CliError> {
    if pairs == 0 {
        return Err(CliError::Usage("--pairs must be at least 1".into()));
    }
    let (topo, spec) = cfg.build()?;
    let cert = certify(&topo, &spec)?;
    let seed = cfg.seed();
    let rates = pool(jobs)?.install(|| {
        (0..pairs as u64)
            .into_par_iter()
            .map(|k| pair_rate(cfg, &topo, &spec, &cert, seed, k))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok((cert, rates))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let k = v.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Rate table over `pairs` random trajectory pairs with summary lines.
pub fn cmd_rate(cfg: &RunConfig, pairs: usize, jobs: Option<usize>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (cert, rates) = rate_estimates(cfg, pairs, jobs)?;
    if !cert.satisfied {
        writeln!(out, "# warning: certificate not satisfied; no rate is guaranteed")?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["pair", "rate", "window_start", "window_end", "residual", "saturated"])?;
        for (k, r) in rates.iter().enumerate() {
            w.write_record([
                (k + 1).to_string(),
                r.rate.to_string(),
                r.window.0.to_string(),
                r.window.1.to_string(),
                r.residual.to_string(),
                r.saturated.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let values: Vec<f64> = rates.iter().map(|r| r.rate).collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    writeln!(out, "# min={min:.6} median={:.6}", median(&values))?;
    match cert.rate {
        Some(l) => writeln!(
            out,
            "# certified rate={l:.6}; min {} certified",
            if min >= l { ">=" } else { "<" }
        )?,
        None => writeln!(out, "# certified rate=none")?,
    }
    Ok(EXIT_CERTIFIED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    NeuralDecay,
    SynapticDecay,
    OjaDrag,
    CouplingScale,
    StimulusScale,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NeuralDecay => "c_n",
            SweepParam::SynapticDecay => "c_s",
            SweepParam::OjaDrag => "c_o",
            SweepParam::CouplingScale => "h-scale",
            SweepParam::StimulusScale => "ubar-scale",
        }
    }

    fn apply(self, topo: &Topology, spec: &ModelSpec, v: f64) -> Result<(Topology, ModelSpec), CliError> {
        let mut spec = spec.clone();
        let mut topo = topo.clone();
        match self {
            SweepParam::NeuralDecay => spec.c_n = v,
            SweepParam::SynapticDecay => spec.c_s = v,
            SweepParam::OjaDrag => spec.c_o = v,
            SweepParam::CouplingScale => topo = topo.with_scaled_coupling(v)?,
            SweepParam::StimulusScale => spec.ubar = spec.ubar.scaled(v),
        }
        spec.validate(&topo)?;
        Ok((topo, spec))
    }
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "c_n" => Ok(SweepParam::NeuralDecay),
            "c_s" => Ok(SweepParam::SynapticDecay),
            "c_o" => Ok(SweepParam::OjaDrag),
            "h-scale" => Ok(SweepParam::CouplingScale),
            "ubar-scale" => Ok(SweepParam::StimulusScale),
            other => Err(CliError::UnknownParam(other.into())),
        }
    }
}

/// Inclusive linspace from `a:b:steps`.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::EmptyRange(text.into());
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, steps] = parts[..] else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    Ok((0..steps)
        .map(|i| if i + 1 == steps { b } else { a + (b - a) * i as f64 / (steps - 1) as f64 })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub rate: Option<f64>,
    pub empirical: Option<f64>,
}

pub fn sweep_rows(cfg: &RunConfig, param: SweepParam, values: &[f64], empirical: bool, jobs: Option<usize>) -> Result<Vec<SweepRow>, CliError> {
    let (topo, spec) = cfg.build()?;
    let seed = cfg.seed();
    pool(jobs)?.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(k, &v)| {
                let (topo, spec) = param.apply(&topo, &spec, v)?;
                let cert = certify(&topo, &spec)?;
                let empirical = if empirical {
                    Some(pair_rate(cfg, &topo, &spec, &cert, seed, k as u64)?.rate)
                } else {
                    None
                };
                Ok(SweepRow {
                    value: v,
                    satisfied: cert.satisfied,
                    lhs: cert.condition_lhs,
                    rhs: cert.condition_rhs,
                    rate: cert.rate,
                    empirical,
                })
            })
            .collect()
    })
}

/// CSV `param,value,satisfied,lhs,rhs,rate[,empirical_rate]`, one row per
/// grid point in grid order.
pub fn cmd_sweep(cfg: &RunConfig, param: &str, range: &str, empirical: bool, jobs: Option<usize>, out: &mut dyn Write) -> Result<i32, CliError> {
    let param: SweepParam = param.parse()?;
    let values = parse_range(range)?;
    let rows = sweep_rows(cfg, param, &values, empirical, jobs)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["param", "value", "satisfied", "lhs", "rhs", "rate"];
    if empirical {
        header.push("empirical_rate");
    }
    w.write_record(&header)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for r in &rows {
        let mut rec = vec![
            param.name().to_string(),
            r.value.to_string(),
            r.satisfied.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            opt(r.rate),
        ];
        if empirical {
            rec.push(opt(r.empirical));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(EXIT_CERTIFIED)
}
