//! Scenario dispatch and artifact emission.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;

use super::config::RunConfig;
use super::format::{csv_row, number_row, sig12};
use super::CliError;
use crate::dynamics::{GridSpec, LadderRates, MirrorQubitParams};
use crate::scenarios::{
    cancellation_budget, encode_flying_qubit, error_budget, run_beam_splitter, run_shaped_release, sweep_cascade,
    sweep_nonradiative, sweep_wait_time, BeamSplitterConfig, CancellationInputs, CascadeConfig, EncodeConfig,
    FlyingQubitTarget, Release, ShapedReleaseConfig, WaitSweepConfig, WavePacket,
};
use crate::statistics::{CountingOptions, MtipleMethod};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "PHOTONFORGE_THREADS";

/// Tolerance on Σ P_n in every emitted row.
pub const PROBABILITY_SUM_TOL: f64 = 1e-6;

/// Named file contents produced by one run; `result.csv` comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|f| f.0 == name).map(|f| f.1.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, content) in &self.files {
            let path = dir.join(name);
            fs::write(&path, content).map_err(|source| CliError::Io { path, source })?;
        }
        Ok(())
    }
}

struct Output {
    result: String,
    hint: String,
    diagnostics: Vec<String>,
    extra: Vec<(String, String)>,
}

fn counting(cfg: &RunConfig) -> CountingOptions {
    CountingOptions {
        cutoff: cfg.count("cutoff"),
        grid: GridSpec::with_dt(cfg.number("dt")),
        method: MtipleMethod::Exact,
    }
}

fn p_header(first: &str, cutoff: usize, up_to: usize) -> String {
    let mut cells = vec![first.to_string()];
    cells.extend((0..=cutoff.min(up_to)).map(|n| format!("P{n}")));
    csv_row(cells)
}

fn check_sum(p: &[f64]) -> Result<(), CliError> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(CliError::Invariant {
            quantity: "sum of P_n",
            value: total,
        });
    }
    Ok(())
}

fn p_row(x: f64, p: &[f64], up_to: usize) -> Result<String, CliError> {
    check_sum(p)?;
    let mut values = vec![x];
    values.extend(p.iter().take(up_to.saturating_add(1)));
    Ok(number_row(&values))
}

fn plot_hint(column: usize, title: &str) -> String {
    format!("set datafile separator ','; plot 'result.csv' using 1:{column} with linespoints title '{title}'")
}

fn beam_splitter(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = MirrorQubitParams::qubit_with_effective_coupling(cfg.number("gamma_eff")).with_delta(cfg.number("delta"));
    let options = counting(cfg);
    let mut base = BeamSplitterConfig::new(cfg.number("r"), 0.0)?;
    base.t0 = cfg.number("t0");
    base.t_end = cfg.number("T");
    base.beta_amplitude_error = cfg.number("beta_amplitude_error");
    base.beta_phase_error = cfg.number("beta_phase_error");
    let alphas = cfg.list("alpha0");
    let rows: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&a| {
            let mut c = base;
            c.alpha0 = a;
            Ok(run_beam_splitter(&params, &c, &options)?.probabilities)
        })
        .collect::<Result<_, CliError>>()?;
    let mut result = p_header("alpha0", options.cutoff, usize::MAX);
    for (a, p) in alphas.iter().zip(&rows) {
        result.push_str(&p_row(*a, p, usize::MAX)?);
    }
    Ok(Output {
        result,
        hint: plot_hint(3, "P1"),
        diagnostics: Vec::new(),
        extra: Vec::new(),
    })
}

fn shaped_release(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = MirrorQubitParams::qubit(cfg.number("gamma")).with_delta(cfg.number("delta"));
    let alpha0 = cfg.number("alpha0");
    let mut run = ShapedReleaseConfig::new(alpha0);
    run.phi_i = cfg.number("phi_i");
    run.t0 = cfg.number("t0");
    run.t_r = cfg.number("t_r");
    run.t_end = cfg.number("T");
    run.clip_budget = cfg.number("clip_budget");
    run.counting = counting(cfg);
    let dt = cfg.number("dt");
    run.release = match cfg.text("release") {
        "gaussian" => Release::Packet(WavePacket::gaussian(cfg.number("packet_center"), cfg.number("packet_sigma"), dt)?),
        "exponential" => Release::Packet(WavePacket::exponential(cfg.number("kappa"), run.t_end - run.t_r, dt)?),
        _ => Release::Constant {
            phi_r: cfg.number("phi_r"),
        },
    };
    let out = run_shaped_release(&params, &run)?;
    let mut result = p_header("alpha0", run.counting.cutoff, usize::MAX);
    result.push_str(&p_row(alpha0, &out.statistics.probabilities, usize::MAX)?);
    let mut series = csv_row(["t", "phi", "flux", "target_flux", "excited"]);
    for i in 0..out.times.len() {
        let target = out.target_flux.as_ref().map_or(0.0, |t| t[i]);
        series.push_str(&number_row(&[out.times[i], out.phase[i], out.flux[i], target, out.excited[i]]));
    }
    let mut diagnostics = vec![
        format!("pulse_width={}", sig12(out.pulse_width)),
        format!("clipped_fraction={}", sig12(out.clipped_fraction)),
        format!("window_truncation={}", sig12(out.window_truncation)),
    ];
    if let Some(e) = out.flux_l2_error {
        diagnostics.push(format!("flux_l2_error={}", sig12(e)));
    }
    Ok(Output {
        result,
        hint: "set datafile separator ','; plot 'series.csv' using 1:3 with lines title 'flux', '' using 1:4 with lines title 'target'".into(),
        diagnostics,
        extra: vec![("series.csv".into(), series)],
    })
}

fn cascade_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let rates = LadderRates {
        gamma01: cfg.number("gamma01"),
        gamma12: cfg.number("gamma12"),
        gamma02: 0.0,
    };
    let mut base = CascadeConfig::new(rates, 0.0);
    base.t0 = cfg.number("t0");
    base.t_end = cfg.number("T");
    base.delta = cfg.number("delta");
    let rows = sweep_cascade(&base, &cfg.list("alpha_d"), &cfg.list("gamma02"))?;
    let mut result = csv_row(["alpha_d", "gamma02", "V"]);
    for r in rows {
        result.push_str(&number_row(&[r.alpha_d, r.gamma02, r.result.v]));
    }
    Ok(Output {
        result,
        hint: "set datafile separator ','; splot 'result.csv' using 1:2:3 with points title 'V'".into(),
        diagnostics: Vec::new(),
        extra: Vec::new(),
    })
}

fn nr_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = MirrorQubitParams::qubit_with_effective_coupling(cfg.number("gamma_eff"));
    let mut bs = BeamSplitterConfig::new(cfg.number("r"), cfg.number("alpha0"))?;
    bs.t0 = cfg.number("t0");
    bs.t_end = cfg.number("T");
    let rows = sweep_nonradiative(&params, &bs, &counting(cfg), &cfg.list("gamma_nr"))?;
    let mut result = p_header("gamma_nr", 1, 1);
    for r in rows {
        result.push_str(&p_row(r.x, &r.probabilities, 1)?);
    }
    Ok(Output {
        result,
        hint: plot_hint(3, "P1"),
        diagnostics: Vec::new(),
        extra: Vec::new(),
    })
}

fn wait_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = MirrorQubitParams::qubit(cfg.number("gamma"));
    let sweep = WaitSweepConfig {
        alpha0: cfg.number("alpha0"),
        gamma_nr: cfg.number("gamma_nr"),
        phi_i: cfg.number("phi_i"),
        phi_r: cfg.number("phi_r"),
        t0: cfg.number("t0"),
        window: cfg.number("window"),
        counting: counting(cfg),
    };
    let rows = sweep_wait_time(&params, &sweep, &cfg.list("t_wait"))?;
    let mut result = p_header("t_wait", 1, 1);
    for r in rows {
        result.push_str(&p_row(r.x, &r.probabilities, 1)?);
    }
    Ok(Output {
        result,
        hint: plot_hint(3, "P1"),
        diagnostics: Vec::new(),
        extra: Vec::new(),
    })
}

fn encode(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = MirrorQubitParams::qubit(cfg.number("gamma"));
    let target = FlyingQubitTarget::from_bloch(cfg.number("theta"), cfg.number("azimuth"));
    let config = EncodeConfig {
        phi: cfg.number("phi"),
        rabi_max: cfg.number("rabi_max"),
        anharmonicity: cfg.number("anharmonicity"),
        ..EncodeConfig::default()
    };
    let r = encode_flying_qubit(&target, &params, &config)?;
    let mut result = csv_row(["delta", "alpha_re", "alpha_im", "t_w", "fidelity"]);
    result.push_str(&number_row(&[r.delta, r.alpha.re, r.alpha.im, r.pulse_width, r.fidelity]));
    Ok(Output {
        result,
        hint: "set datafile separator ','; print 'single-row result, nothing to plot'".into(),
        diagnostics: vec![format!("exceeds_anharmonicity={}", r.exceeds_anharmonicity)],
        extra: Vec::new(),
    })
}

fn cancel_budget(cfg: &RunConfig) -> Result<Output, CliError> {
    let inputs = CancellationInputs {
        a1: cfg.number("a1"),
        a2: cfg.number("a2"),
        phi1: cfg.number("phi1"),
        phi2: cfg.number("phi2"),
        omega1: cfg.number("omega1"),
        omega2: cfg.number("omega2"),
        phi: cfg.number("phi"),
        tau1: cfg.number("tau1"),
        tau2: cfg.number("tau2"),
        n: cfg.count("n") as i64,
    };
    let r = cancellation_budget(&inputs)?;
    let mut result = csv_row(["residual", "residual_db"]);
    result.push_str(&number_row(&[r.residual, r.residual_db]));
    let mut budget = csv_row(["residual_db", "amplitude_error", "phase_error"]);
    for db in cfg.list("budget_db") {
        let b = error_budget(db);
        budget.push_str(&number_row(&[b.residual_db, b.amplitude_error, b.phase_error]));
    }
    Ok(Output {
        result,
        hint: "set datafile separator ','; plot 'budget.csv' using 1:2 with linespoints title 'amplitude error'".into(),
        diagnostics: Vec::new(),
        extra: vec![("budget.csv".into(), budget)],
    })
}

/// Runs the configured scenario and renders every artifact in memory.
pub fn execute(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let out = match cfg.scenario() {
        "beam_splitter" => beam_splitter(cfg),
        "shaped_release" => shaped_release(cfg),
        "cascade_sweep" => cascade_sweep(cfg),
        "nr_sweep" => nr_sweep(cfg),
        "wait_sweep" => wait_sweep(cfg),
        "encode" => encode(cfg),
        "cancel_budget" => cancel_budget(cfg),
        other => Err(CliError::UnknownScenario(other.to_string())),
    }?;
    let mut meta = format!(
        "# photonforge {}\n# gnuplot: {}\n{}",
        env!("CARGO_PKG_VERSION"),
        out.hint,
        cfg.resolved()
    );
    for d in &out.diagnostics {
        meta.push_str(&format!("# {d}\n"));
    }
    let mut files = vec![("result.csv".to_string(), out.result), ("meta.txt".to_string(), meta)];
    files.extend(out.extra);
    Ok(Artifacts { files })
}

/// Worker pool honoring `PHOTONFORGE_THREADS` (unset or empty: rayon default).
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(CliError::Threads(v)),
        },
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Threads(e.to_string()))
}

/// Parses, runs and writes artifacts; returns the output directory.
pub fn run_file(path: &Path) -> Result<PathBuf, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = RunConfig::parse(&text)?;
    let pool = thread_pool()?;
    info!("running {} with {} worker(s)", cfg.scenario(), pool.current_num_threads());
    let artifacts = pool.install(|| execute(&cfg))?;
    let dir = PathBuf::from(cfg.text("output"));
    artifacts.write_to(&dir)?;
    Ok(dir)
}
