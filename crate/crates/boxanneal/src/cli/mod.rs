//! Command-line interface: argument parsing, config/preset resolution,
//! result persistence, and plot-script generation.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
//! 4 I/O failure.

pub mod config;
pub mod plot;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{self, IntegrationOptions, ReferenceSpec, Schedule};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, BasisSpec, StateVector};
use crate::oracles;
use crate::potential::{BoxPotential, RastriginPotential};
use crate::spectrum;
use crate::variational;
use config::{Config, RunManifest};

#[derive(Parser)]
#[command(
    name = "boxanneal",
    version,
    about = "Quantum annealing of a particle in a box with multi-well potentials"
)]
struct Cli {
    /// Flat key=value config file; command-line flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset from the experiments directory
    /// (see BOXANNEAL_EXPERIMENTS_DIR).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct PotentialFlags {
    /// Number of cosine periods (positive multiple of four).
    #[arg(long)]
    mu: Option<u32>,
    /// Envelope amplitude (0 flat, >0 concave, <0 convex).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Box width.
    #[arg(long = "L")]
    l: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct BasisFlags {
    /// Basis truncation N_dim.
    #[arg(long)]
    ndim: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct OutputFlags {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Also emit a gnuplot script at this path.
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the box potential V(x) on a uniform grid.
    Potential {
        #[command(flatten)]
        pot: PotentialFlags,
        /// Number of grid intervals.
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Position-space density of a low eigenstate of H(s).
    Density {
        #[command(flatten)]
        pot: PotentialFlags,
        #[command(flatten)]
        basis: BasisFlags,
        /// Annealing parameter (accepts fractional exponents, e.g. 1e4.5).
        #[arg(long)]
        s: Option<String>,
        /// Eigenstate index.
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 1024)]
        points: usize,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Lowest energy levels over an s-grid.
    Spectrum {
        #[command(flatten)]
        pot: PotentialFlags,
        #[command(flatten)]
        basis: BasisFlags,
        /// Grid spec log:min:max:count in log10 s.
        #[arg(long)]
        sgrid: Option<String>,
        /// Number of levels.
        #[arg(long)]
        levels: Option<usize>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Energy gaps Δ_n(s) over an s-grid, with closure/plateau detection.
    Gaps {
        #[command(flatten)]
        pot: PotentialFlags,
        #[command(flatten)]
        basis: BasisFlags,
        #[arg(long)]
        sgrid: Option<String>,
        #[arg(long)]
        levels: Option<usize>,
        /// Gap threshold declaring a closure.
        #[arg(long, default_value_t = 1e-6)]
        closure_tol: f64,
        /// Relative gap change per decade of s below which a stretch counts
        /// as a plateau.
        #[arg(long, default_value_t = 0.02)]
        slope_tol: f64,
        /// Write detected features (JSON) to this path.
        #[arg(long)]
        features: Option<PathBuf>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// One annealing run under the linear schedule.
    Anneal {
        #[command(flatten)]
        pot: PotentialFlags,
        #[command(flatten)]
        basis: BasisFlags,
        #[arg(long)]
        si: Option<String>,
        #[arg(long)]
        sf: Option<String>,
        /// Total annealing time.
        #[arg(long = "T")]
        t_total: Option<f64>,
        /// Reference level: auto or index:N.
        #[arg(long)]
        eref: Option<String>,
        /// Step-plan scale in (0, 1]; smaller is more accurate.
        #[arg(long)]
        accuracy: Option<f64>,
        /// Verify by halving steps; fail if <H> moves more than this.
        #[arg(long)]
        verify_tol: Option<f64>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Residual-energy curve R(T) (and R(v)) over a list of annealing times.
    Sweep {
        #[command(flatten)]
        pot: PotentialFlags,
        #[command(flatten)]
        basis: BasisFlags,
        #[arg(long)]
        si: Option<String>,
        #[arg(long)]
        sf: Option<String>,
        /// Annealing times: comma list or log:min:max:count in log10 T.
        #[arg(long = "T")]
        t_spec: Option<String>,
        #[arg(long)]
        eref: Option<String>,
        #[arg(long)]
        accuracy: Option<f64>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Evaluate a closed-form prediction.
    Oracle {
        /// Formula name: zero-point | wall | adjacent | first-order |
        /// flat-gap | adiabatic-residual | landau-zener | solution-width.
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        pot: PotentialFlags,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        si: Option<String>,
        #[arg(long)]
        sf: Option<String>,
        #[arg(long = "T")]
        t_total: Option<f64>,
        /// Plateau index for flat-gap.
        #[arg(long)]
        m_index: Option<u32>,
        /// Half-gap for landau-zener.
        #[arg(long)]
        gamma: Option<f64>,
        /// Sweep speed for landau-zener.
        #[arg(long)]
        v: Option<f64>,
        /// Curvature for solution-width.
        #[arg(long)]
        curvature: Option<f64>,
        /// Mass for solution-width.
        #[arg(long)]
        mass: Option<f64>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Variational branches of the Rastrigin system over masses.
    Variational {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        h0: Option<f64>,
        #[arg(long)]
        w0: Option<f64>,
        /// Mass grid: log:min:max:count in log10 m, or a single value.
        #[arg(long)]
        logm: Option<String>,
        /// Write transition mass / gap / gap gradient (JSON) to this path.
        #[arg(long)]
        features: Option<PathBuf>,
        #[command(flatten)]
        out: OutputFlags,
    },
}

/// Parses floats accepting fractional powers of ten, e.g. `1e4.5`.
fn parse_f64_ext(raw: &str) -> Result<f64> {
    if let Ok(v) = raw.parse::<f64>() {
        return Ok(v);
    }
    if let Some((mant, exp)) = raw.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (mant.parse::<f64>(), exp.parse::<f64>()) {
            return Ok(m * 10f64.powf(e));
        }
    }
    Err(Error::Config(format!("cannot parse number `{raw}`")))
}

/// Parses `log:min:max:count` (log10 endpoints) into a grid.
fn parse_log_grid(raw: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() == 4 && parts[0] == "log" {
        let lo: f64 = parse_f64_ext(parts[1])?;
        let hi: f64 = parse_f64_ext(parts[2])?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| Error::Config(format!("bad grid count `{}`", parts[3])))?;
        if count == 0 || hi <= lo {
            return Err(Error::Config(format!("bad grid spec `{raw}`")));
        }
        return Ok(spectrum::log_grid(lo, hi, count));
    }
    Err(Error::Config(format!("expected log:min:max:count, got `{raw}`")))
}

/// Parses a T list: comma-separated values or a log grid.
fn parse_t_list(raw: &str) -> Result<Vec<f64>> {
    if raw.starts_with("log:") {
        return parse_log_grid(raw);
    }
    raw.split(',').map(|p| parse_f64_ext(p.trim())).collect()
}

fn parse_eref(raw: &str) -> Result<ReferenceSpec> {
    if raw == "auto" {
        return Ok(ReferenceSpec::Auto);
    }
    if let Some(n) = raw.strip_prefix("index:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Config(format!("bad reference level `{raw}`")))?;
        return Ok(ReferenceSpec::Index(n));
    }
    Err(Error::Config(format!("expected auto or index:N, got `{raw}`")))
}

/// Flag value, falling back to a config key, then to a default.
fn resolve<T: Clone>(flag: &Option<T>, cfg: Option<T>, default: Option<T>, name: &str) -> Result<T> {
    flag.clone()
        .or(cfg)
        .or(default)
        .ok_or_else(|| Error::Config(format!("missing required parameter `{name}`")))
}

struct Ctx {
    cfg: Config,
}

impl Ctx {
    fn potential(&self, flags: &PotentialFlags) -> Result<BoxPotential> {
        let mu = resolve(&flags.mu, self.cfg.get_parsed("potential.mu")?, None, "mu")?;
        let a = resolve(&flags.a, self.cfg.get_parsed("potential.a")?, Some(0.0), "a")?;
        let l = resolve(&flags.l, self.cfg.get_parsed("potential.L")?, Some(1.0), "L")?;
        BoxPotential::new(mu, a, l)
    }

    fn basis(&self, flags: &BasisFlags, l: f64) -> Result<BasisSpec> {
        let ndim = resolve(&flags.ndim, self.cfg.get_parsed("basis.ndim")?, None, "ndim")?;
        BasisSpec::new(ndim, l, 1.0, 1.0)
    }

    fn scalar(&self, flag: &Option<String>, key: &str, default: Option<f64>) -> Result<f64> {
        match flag.as_deref().or_else(|| self.cfg.get(key)) {
            Some(raw) => parse_f64_ext(raw),
            None => default.ok_or_else(|| Error::Config(format!("missing parameter `{key}`"))),
        }
    }
}

/// Tabular payload: either CSV lines or a versioned JSON document.
fn write_table(
    out: &OutputFlags,
    header: &[&str],
    rows: &[Vec<f64>],
    manifest: &mut RunManifest,
) -> Result<()> {
    let format = out.format.as_deref().unwrap_or("csv");
    let text = match format {
        "csv" => {
            let mut s = String::new();
            s.push_str(&header.join(","));
            s.push('\n');
            for row in rows {
                let mut first = true;
                for v in row {
                    if !first {
                        s.push(',');
                    }
                    write!(s, "{v:.17e}").unwrap();
                    first = false;
                }
                s.push('\n');
            }
            s
        }
        "json" => serde_json::to_string_pretty(&serde_json::json!({
            "schema": "boxanneal.table/1",
            "columns": header,
            "rows": rows,
        }))
        .expect("table serialization cannot fail")
            + "\n",
        other => return Err(Error::Config(format!("unknown format `{other}`"))),
    };
    match &out.out {
        Some(path) => {
            std::fs::write(path, text)?;
            manifest.output(path);
            manifest.write_next_to(path)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn write_json(path: Option<&Path>, value: &serde_json::Value, manifest: &mut RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serialization cannot fail") + "\n";
    match path {
        Some(path) => {
            std::fs::write(path, text)?;
            manifest.output(path);
            manifest.write_next_to(path)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn maybe_plot(out: &OutputFlags, style: plot::PlotStyle, columns: usize) -> Result<()> {
    if let (Some(script), Some(data)) = (&out.plot_script, &out.out) {
        plot::emit_plot_script(script, data, style, columns)?;
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Config(_) => 2,
                Error::Io(_) => 4,
                _ => 3,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let cfg = match (&cli.preset, &cli.config) {
        (Some(name), _) => config::load_preset(name)?,
        (None, Some(path)) => Config::load(path)?,
        (None, None) => Config::default(),
    };
    let ctx = Ctx { cfg };

    match cli.cmd {
        Cmd::Potential { pot, points, out } => {
            let p = ctx.potential(&pot)?;
            let mut manifest = RunManifest::new("potential", ctx.cfg.content_hash);
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("L", p.l);
            let rows: Vec<Vec<f64>> = (0..=points)
                .map(|i| {
                    let x = i as f64 * p.l / points as f64;
                    vec![x, p.eval_unchecked(x)]
                })
                .collect();
            write_table(&out, &["x", "V"], &rows, &mut manifest)
        }
        Cmd::Density { pot, basis, s, level, points, out } => {
            let p = ctx.potential(&pot)?;
            let b = ctx.basis(&basis, p.l)?;
            let s = ctx.scalar(&s, "spectrum.s", None)?;
            let h = build_hamiltonian(&p, s, &b)?;
            let pairs = spectrum::eigensolve(&h, level + 1)?;
            let st = StateVector::from_real(&pairs.vectors[level], b);
            let grid: Vec<f64> = (0..=points).map(|i| i as f64 * p.l / points as f64).collect();
            let psi = st.to_position(&grid)?;
            let rows: Vec<Vec<f64>> = grid
                .iter()
                .zip(&psi)
                .map(|(&x, z)| vec![x, z.re, z.im, z.norm_sqr()])
                .collect();
            let mut manifest = RunManifest::new("density", ctx.cfg.content_hash);
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("s", s);
            manifest.param("ndim", b.n_dim);
            manifest.param("level", level);
            write_table(&out, &["x", "re_psi", "im_psi", "density"], &rows, &mut manifest)
        }
        Cmd::Spectrum { pot, basis, sgrid, levels, out } => {
            let p = ctx.potential(&pot)?;
            let b = ctx.basis(&basis, p.l)?;
            let grid_raw = sgrid
                .as_deref()
                .or_else(|| ctx.cfg.get("spectrum.sgrid"))
                .ok_or_else(|| Error::Config("missing parameter `sgrid`".to_string()))?;
            let grid = parse_log_grid(grid_raw)?;
            let k = resolve(&levels, ctx.cfg.get_parsed("spectrum.levels")?, Some(4), "levels")?;
            let sw = spectrum::sweep(&p, &grid, k, &b, false)?;
            let rows: Vec<Vec<f64>> = sw
                .s_grid
                .iter()
                .zip(&sw.levels)
                .map(|(&s, e)| {
                    let mut row = vec![s];
                    row.extend_from_slice(e);
                    row
                })
                .collect();
            let header: Vec<String> =
                std::iter::once("s".to_string()).chain((0..k).map(|n| format!("E_{n}"))).collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut manifest = RunManifest::new("spectrum", ctx.cfg.content_hash);
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("ndim", b.n_dim);
            manifest.param("levels", k);
            manifest.param("sgrid", grid_raw);
            write_table(&out, &header_refs, &rows, &mut manifest)?;
            maybe_plot(&out, plot::PlotStyle::SpectrumLogX, k)
        }
        Cmd::Gaps { pot, basis, sgrid, levels, closure_tol, slope_tol, features, out } => {
            let p = ctx.potential(&pot)?;
            let b = ctx.basis(&basis, p.l)?;
            let grid_raw = sgrid
                .as_deref()
                .or_else(|| ctx.cfg.get("spectrum.sgrid"))
                .ok_or_else(|| Error::Config("missing parameter `sgrid`".to_string()))?;
            let grid = parse_log_grid(grid_raw)?;
            let k = resolve(&levels, ctx.cfg.get_parsed("spectrum.levels")?, Some(4), "levels")?;
            let sw = spectrum::sweep(&p, &grid, k, &b, false)?;
            let gap_series: Vec<Vec<f64>> =
                (1..k).map(|n| spectrum::gaps(&sw, n)).collect::<Result<_>>()?;
            let rows: Vec<Vec<f64>> = sw
                .s_grid
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let mut row = vec![s];
                    row.extend(gap_series.iter().map(|g| g[i]));
                    row
                })
                .collect();
            let header: Vec<String> =
                std::iter::once("s".to_string()).chain((1..k).map(|n| format!("D_{n}"))).collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut manifest = RunManifest::new("gaps", ctx.cfg.content_hash);
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("ndim", b.n_dim);
            manifest.param("sgrid", grid_raw);
            write_table(&out, &header_refs, &rows, &mut manifest)?;
            if let Some(fpath) = features {
                let mut feats: Vec<serde_json::Value> = Vec::new();
                for n in 1..k {
                    if let Some(s_star) =
                        spectrum::detect_gap_closure(&sw, &p, &b, n, closure_tol)?
                    {
                        feats.push(serde_json::json!({
                            "kind": "closure", "level": n,
                            "s_lo": s_star, "s_hi": s_star, "value": 0.0,
                        }));
                    }
                    for f in spectrum::detect_flat_gaps(&sw, n, slope_tol, 10.0 * closure_tol)? {
                        feats.push(serde_json::to_value(&f).expect("feature serialization"));
                    }
                }
                write_json(Some(&fpath), &serde_json::Value::Array(feats), &mut manifest)?;
            }
            maybe_plot(&out, plot::PlotStyle::GapLogLog, k - 1)
        }
        Cmd::Anneal { pot, basis, si, sf, t_total, eref, accuracy, verify_tol, out } => {
            let p = ctx.potential(&pot)?;
            let b = ctx.basis(&basis, p.l)?;
            let s_i = ctx.scalar(&si, "schedule.si", Some(1.0))?;
            let s_f = ctx.scalar(&sf, "schedule.sf", None)?;
            let t_total = resolve(&t_total, ctx.cfg.get_parsed("schedule.T")?, None, "T")?;
            let sch = Schedule::new(s_i, s_f, t_total)?;
            let eref_raw = eref.as_deref().or_else(|| ctx.cfg.get("schedule.eref")).unwrap_or("auto");
            let eref = parse_eref(eref_raw)?;
            let mut opts = IntegrationOptions::default();
            if let Some(acc) = accuracy.or(ctx.cfg.get_parsed("dynamics.accuracy")?) {
                opts.accuracy = acc;
            }
            opts.verify_tol = verify_tol;
            let res = dynamics::integrate(&p, &sch, &b, &opts)?;
            let (level, e_ref_energy) =
                dynamics::resolve_reference(&p, &b, s_f, eref, 64.min(b.n_dim))?;
            let mut manifest = RunManifest::new("anneal", ctx.cfg.content_hash);
            for (k, v) in ctx.cfg.iter() {
                manifest.param(k, v);
            }
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("ndim", b.n_dim);
            manifest.param("si", s_i);
            manifest.param("sf", s_f);
            manifest.param("T", t_total);
            manifest.param("eref", eref_raw);
            let doc = serde_json::json!({
                "schema": "boxanneal.anneal/1",
                "s_i": s_i, "s_f": s_f, "T": t_total, "v": sch.speed(),
                "final_energy": res.final_energy,
                "e_ref_level": level,
                "e_ref_energy": e_ref_energy,
                "residual": dynamics::residual_energy(&res, e_ref_energy),
                "norm_drift": res.norm_drift,
                "steps": res.steps,
                "verification_delta": res.verification_delta,
            });
            write_json(out.out.as_deref(), &doc, &mut manifest)
        }
        Cmd::Sweep { pot, basis, si, sf, t_spec, eref, accuracy, out } => {
            let p = ctx.potential(&pot)?;
            let b = ctx.basis(&basis, p.l)?;
            let s_i = ctx.scalar(&si, "schedule.si", Some(1.0))?;
            let s_f = ctx.scalar(&sf, "schedule.sf", None)?;
            let t_raw = t_spec
                .as_deref()
                .or_else(|| ctx.cfg.get("schedule.T"))
                .ok_or_else(|| Error::Config("missing parameter `T`".to_string()))?;
            let t_list = parse_t_list(t_raw)?;
            let eref_raw = eref.as_deref().or_else(|| ctx.cfg.get("schedule.eref")).unwrap_or("auto");
            let eref = parse_eref(eref_raw)?;
            let mut opts = IntegrationOptions::default();
            if let Some(acc) = accuracy.or(ctx.cfg.get_parsed("dynamics.accuracy")?) {
                opts.accuracy = acc;
            }
            let curve = dynamics::sweep_t(&p, s_i, s_f, &t_list, &b, eref, &opts)?;
            let rows: Vec<Vec<f64>> = (0..curve.t_values.len())
                .map(|i| {
                    vec![
                        curve.t_values[i],
                        curve.v_values[i],
                        curve.residuals[i],
                        curve.norm_drifts[i],
                        curve.e_ref_level as f64,
                        curve.e_ref_energy,
                    ]
                })
                .collect();
            let mut manifest = RunManifest::new("sweep", ctx.cfg.content_hash);
            for (k, v) in ctx.cfg.iter() {
                manifest.param(k, v);
            }
            manifest.param("mu", p.mu);
            manifest.param("a", p.a);
            manifest.param("ndim", b.n_dim);
            manifest.param("si", s_i);
            manifest.param("sf", s_f);
            manifest.param("T", t_raw);
            manifest.param("eref", eref_raw);
            write_table(
                &out,
                &["T", "v", "residual", "norm_drift", "e_ref_level", "e_ref_energy"],
                &rows,
                &mut manifest,
            )?;
            maybe_plot(&out, plot::PlotStyle::ResidualLogLog, 1)
        }
        Cmd::Oracle {
            formula,
            pot,
            s,
            si,
            sf,
            t_total,
            m_index,
            gamma,
            v,
            curvature,
            mass,
            out,
        } => {
            let mut inputs = serde_json::Map::new();
            let value = match formula.as_str() {
                "zero-point" => {
                    let p = ctx.potential(&pot)?;
                    let s = ctx.scalar(&s, "oracle.s", None)?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("s".into(), s.into());
                    oracles::zero_point_energy(p.mu, s, p.l, 1.0, 1.0)
                }
                "wall" => {
                    let p = ctx.potential(&pot)?;
                    let s = ctx.scalar(&s, "oracle.s", None)?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("a".into(), p.a.into());
                    inputs.insert("s".into(), s.into());
                    oracles::wall_energy(p.mu, p.a, s, p.l, 1.0, 1.0)?
                }
                "adjacent" => {
                    let p = ctx.potential(&pot)?;
                    let s = ctx.scalar(&s, "oracle.s", None)?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("a".into(), p.a.into());
                    inputs.insert("s".into(), s.into());
                    oracles::adjacent_energy(p.mu, p.a, s, p.l, 1.0, 1.0)
                }
                "first-order" => {
                    let p = ctx.potential(&pot)?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("a".into(), p.a.into());
                    oracles::first_order_point(p.mu, p.a, p.l, 1.0)?
                }
                "flat-gap" => {
                    let p = ctx.potential(&pot)?;
                    let m = m_index
                        .ok_or_else(|| Error::Config("flat-gap needs --m-index".to_string()))?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("a".into(), p.a.into());
                    inputs.insert("m".into(), m.into());
                    oracles::flat_gap_value(m, p.mu, p.a)
                }
                "adiabatic-residual" => {
                    let p = ctx.potential(&pot)?;
                    let s_i = ctx.scalar(&si, "schedule.si", Some(1.0))?;
                    let s_f = ctx.scalar(&sf, "schedule.sf", None)?;
                    let t_total = t_total
                        .ok_or_else(|| Error::Config("adiabatic-residual needs --T".to_string()))?;
                    inputs.insert("mu".into(), p.mu.into());
                    inputs.insert("si".into(), s_i.into());
                    inputs.insert("sf".into(), s_f.into());
                    inputs.insert("T".into(), t_total.into());
                    oracles::adiabatic_residual(&oracles::AdiabaticParams {
                        mu: p.mu,
                        l: p.l,
                        mass: 1.0,
                        hbar: 1.0,
                        s_i,
                        s_f,
                        t_total,
                    })
                }
                "landau-zener" => {
                    let gamma =
                        gamma.ok_or_else(|| Error::Config("landau-zener needs --gamma".to_string()))?;
                    let v = v.ok_or_else(|| Error::Config("landau-zener needs --v".to_string()))?;
                    inputs.insert("gamma".into(), gamma.into());
                    inputs.insert("v".into(), v.into());
                    oracles::landau_zener(gamma, v, 1.0)?
                }
                "solution-width" => {
                    let k = curvature
                        .ok_or_else(|| Error::Config("solution-width needs --curvature".to_string()))?;
                    let m =
                        mass.ok_or_else(|| Error::Config("solution-width needs --mass".to_string()))?;
                    inputs.insert("curvature".into(), k.into());
                    inputs.insert("mass".into(), m.into());
                    oracles::solution_width(k, m, 1.0)?
                }
                other => return Err(Error::Config(format!("unknown formula `{other}`"))),
            };
            let mut manifest = RunManifest::new("oracle", ctx.cfg.content_hash);
            manifest.param("formula", &formula);
            let doc = serde_json::json!({
                "schema": "boxanneal.oracle/1",
                "formula": formula,
                "inputs": inputs,
                "value": value,
            });
            write_json(out.out.as_deref(), &doc, &mut manifest)
        }
        Cmd::Variational { k, h0, w0, logm, features, out } => {
            let p = RastriginPotential::new(
                k.or(ctx.cfg.get_parsed("rastrigin.k")?).unwrap_or(1.0),
                h0.or(ctx.cfg.get_parsed("rastrigin.h0")?).unwrap_or(0.2),
                w0.or(ctx.cfg.get_parsed("rastrigin.w0")?).unwrap_or(0.2),
            )?;
            let logm_raw = logm
                .as_deref()
                .or_else(|| ctx.cfg.get("variational.logm"))
                .unwrap_or("log:2.9:4.0:23");
            let masses: Vec<f64> = if logm_raw.starts_with("log:") {
                parse_log_grid(logm_raw)?
            } else {
                vec![10f64.powf(parse_f64_ext(logm_raw)?)]
            };
            let mut rows = Vec::new();
            for &m in &masses {
                for pt in variational::find_stationary_points(m, &p, 1.0)? {
                    let branch_id = match pt.kind {
                        variational::BranchKind::DelocalizedCenter => 0.0,
                        variational::BranchKind::LocalizedCenter => 1.0,
                        variational::BranchKind::LocalMinimum => 2.0,
                    };
                    rows.push(vec![m, branch_id, pt.alpha, pt.x0, pt.energy]);
                }
            }
            let mut manifest = RunManifest::new("variational", ctx.cfg.content_hash);
            manifest.param("k", p.k);
            manifest.param("h0", p.h0);
            manifest.param("w0", p.w0);
            manifest.param("logm", logm_raw);
            write_table(&out, &["m", "branch", "alpha", "x0", "energy"], &rows, &mut manifest)?;
            if let Some(fpath) = features {
                let m_star = variational::ground_state_transition_mass(&p, 1.0)?;
                let m_probe = masses.last().copied().unwrap_or(10f64.powf(3.5));
                let gap = variational::variational_gap(m_probe, &p, 1.0).ok();
                let grad = variational::gap_gradient_dm(m_probe, &p, 1.0).ok();
                let doc = serde_json::json!({
                    "schema": "boxanneal.variational/1",
                    "transition_mass": m_star,
                    "transition_log10_mass": m_star.log10(),
                    "gap_at_mass": m_probe,
                    "gap": gap,
                    "gap_gradient_dm": grad,
                });
                write_json(Some(&fpath), &doc, &mut manifest)?;
            }
            Ok(())
        }
    }
}
