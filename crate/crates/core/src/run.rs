//! Command-line configuration and dispatch. Every command writes its
//! artifacts plus a `meta.txt` into the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

use crate::autocorr::{empirical_autocorrelation, eta, eta_support};
use crate::cutproject::{density_estimate, generate_patch, patch_difference, WindowPlacement};
use crate::diffraction::peak_list;
use crate::error::{Error, Result};
use crate::homometry::{
    reconstruct_octagonal_pair, search_1d_pairs, search_polyomino_pairs, HomometricPairReport,
};
use crate::io;
use crate::window::{covariogram_equal, covariogram_grid, difference_body, Polyomino};

pub const THREADS_ENV: &str = "APERIMET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "aperimet", version, about = "Octagonal model sets, covariograms and homometric windows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; APERIMET_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Covariogram grid and heat map of a window.
    Covariogram {
        #[arg(long)]
        window: PathBuf,
        /// Grid step as a decimal or `p/q`.
        #[arg(long, default_value = "1/4")]
        step: String,
    },
    /// Model-set patch `{x ∈ L : x* ∈ W, |x| < r}`.
    Patch {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        radius: f64,
    },
    /// Analytic and empirical autocorrelation coefficients.
    Autocorr {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Only differences with `|d|` up to this length are tabulated.
        #[arg(long, default_value_t = 4.0)]
        max_shift: f64,
    },
    /// Bragg peaks with `|k| ≤ kmax` and intensity at least `imin`.
    Diffract {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        kmax: f64,
        #[arg(long)]
        imin: f64,
    },
    /// Compare two windows; with `--radius`, also plot the patch difference.
    Homometry {
        #[arg(long, num_args = 2, required = true)]
        window: Vec<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Exhaustive search for homometric polyominoes or integer sets.
    Search(SearchArgs),
    /// Rebuild and verify the homometric 15-cell pair from the closed-form
    /// intensity.
    Reconstruct {
        /// Also write patches and their difference plot at this radius.
        #[arg(long)]
        radius: Option<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Number of cells (polyominoes) or points (with `--line`).
    #[arg(long)]
    pub cells: usize,
    /// Box width for polyominoes, largest coordinate with `--line`.
    #[arg(long)]
    pub width: i64,
    /// Box height for polyominoes (defaults to the width).
    #[arg(long)]
    pub height: Option<i64>,
    /// Search subsets of `{0, …, width}` instead of polyominoes.
    #[arg(long)]
    pub line: bool,
}

/// A validated command plus where to put its outputs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
    pub threads: usize,
}

impl RunConfig {
    /// Resolve the thread count (environment first) from parsed arguments.
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| Error::InvalidParameter(format!("{THREADS_ENV}={v:?} is not a positive integer")))?,
            Err(_) => cli.threads.unwrap_or(0),
        };
        Ok(RunConfig {
            command: cli.command,
            out: cli.out,
            threads,
        })
    }
}

/// Parse arguments, run, and report errors on stderr. Returns the process
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Execute the command; returns the files written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    pool.install(|| dispatch(config))
}

struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
    meta: String,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path, config: &RunConfig, command: &str) -> Self {
        let mut meta = String::new();
        let _ = writeln!(meta, "version {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(meta, "command {command}");
        match config.threads {
            0 => meta.push_str("threads auto\n"),
            t => {
                let _ = writeln!(meta, "threads {t}");
            }
        }
        Outputs {
            dir,
            written: Vec::new(),
            meta,
        }
    }

    fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.meta, "{key} {value}");
    }

    fn file(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        io::save(&path, contents)?;
        self.written.push(path);
        Ok(())
    }

    fn pair(&mut self, sub: &str, report: &HomometricPairReport) -> Result<()> {
        let dir = self.dir.join(sub);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        io::write_pair_report(&dir, report)?;
        for name in ["left.win", "right.win", "certificate.txt"] {
            self.written.push(dir.join(name));
        }
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<PathBuf>> {
        let meta = std::mem::take(&mut self.meta);
        self.file("meta.txt", &meta)?;
        Ok(self.written)
    }
}

fn window_meta(o: &mut Outputs, key: &str, path: &Path, p: &Polyomino) {
    let [ax, ay] = p.anchor();
    o.meta(key, path.display());
    o.meta(&format!("{key}_cells"), p.area());
    o.meta(&format!("{key}_anchor"), format!("{ax} {ay}"));
}

fn dispatch(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = config.out.as_path();
    match &config.command {
        Command::Covariogram { window, step } => {
            let mut o = Outputs::new(dir, config, "covariogram");
            let p = io::read_polyomino(window)?;
            let step_r: Ratio<i64> = io::parse_step(step)?;
            window_meta(&mut o, "window", window, &p);
            o.meta("step", step_r);
            let grid = covariogram_grid(&p, step_r)?;
            let body = difference_body(&p);
            o.meta("grid_shape", format!("{} {}", grid.shape[0], grid.shape[1]));
            o.meta("difference_body_offsets", body.offsets().len());
            o.file("grid.csv", &io::grid_csv(&grid))?;
            o.file("covariogram.svg", &io::covariogram_svg(&grid, &body))?;
            o.finish()
        }
        Command::Patch { window, radius } => {
            let mut o = Outputs::new(dir, config, "patch");
            let w = io::parse_window(window)?;
            window_meta(&mut o, "window", window, w.polyomino());
            o.meta("radius", radius);
            let patch = generate_patch(&w, *radius)?;
            o.meta("points", patch.len());
            o.meta("density", io::fmt17(density_estimate(&patch)));
            o.meta("expected_density", io::fmt17(w.area() as f64 / 4.0));
            if let Some(d) = patch.min_distance() {
                o.meta("min_distance", io::fmt17(d));
            }
            o.file("patch.csv", &io::patch_csv(&patch))?;
            o.file("patch.svg", &io::patch_svg(&patch))?;
            o.finish()
        }
        Command::Autocorr {
            window,
            radius,
            max_shift,
        } => {
            let mut o = Outputs::new(dir, config, "autocorr");
            let w = io::parse_window(window)?;
            window_meta(&mut o, "window", window, w.polyomino());
            o.meta("radius", radius);
            o.meta("max_shift", max_shift);
            let patch = generate_patch(&w, *radius)?;
            let emp = empirical_autocorrelation(&patch, *max_shift)?;
            let mut rows: Vec<_> = eta_support(&w, *max_shift)?
                .into_iter()
                .map(|c| (c, emp.weight(c.location)))
                .collect();
            // Differences seen in the patch but outside the analytic support
            // would contradict the theory; list them so they show up.
            let listed: std::collections::BTreeSet<_> = rows.iter().map(|r| r.0.location).collect();
            let stray: Vec<_> = emp
                .weights()
                .filter(|(d, _)| !listed.contains(d))
                .map(|(d, x)| (eta(&w, d), x))
                .collect();
            o.meta("points", patch.len());
            o.meta("support_size", rows.len());
            o.meta("stray_differences", stray.len());
            rows.extend(stray);
            o.file("autocorr.csv", &io::autocorr_csv(&rows))?;
            o.finish()
        }
        Command::Diffract { window, kmax, imin } => {
            let mut o = Outputs::new(dir, config, "diffract");
            let w = io::parse_window(window)?;
            window_meta(&mut o, "window", window, w.polyomino());
            o.meta("kmax", kmax);
            o.meta("imin", imin);
            let peaks = peak_list(&w, *kmax, *imin)?;
            o.meta("axis_cutoff", io::fmt17(peaks.axis_cutoff));
            o.meta("R_star", io::fmt17(peaks.internal_radius));
            o.meta("peaks", peaks.peaks.len());
            o.file("peaks.csv", &io::peaks_csv(&peaks))?;
            o.file("peaks.svg", &io::peaks_svg(&peaks))?;
            o.finish()
        }
        Command::Homometry { window, radius } => {
            let mut o = Outputs::new(dir, config, "homometry");
            let a = io::read_polyomino(&window[0])?;
            let b = io::read_polyomino(&window[1])?;
            window_meta(&mut o, "left", &window[0], &a);
            window_meta(&mut o, "right", &window[1], &b);
            let homometric = covariogram_equal(&a, &b);
            o.meta("homometric", homometric);
            o.meta("congruent", a.congruent(&b));
            if homometric {
                o.pair(
                    "pair",
                    &HomometricPairReport {
                        congruent: a.congruent(&b),
                        certificate: a.autocorrelation(),
                        left: a.clone(),
                        right: b.clone(),
                    },
                )?;
            }
            if let Some(r) = radius {
                patch_comparison(&mut o, &a, &b, *r)?;
            }
            o.finish()
        }
        Command::Search(args) => {
            let mut o = Outputs::new(dir, config, "search");
            o.meta("cells", args.cells);
            o.meta("width", args.width);
            if args.line {
                o.meta("mode", "line");
                let pairs = search_1d_pairs(args.cells, args.width)?;
                o.meta("pairs", pairs.len());
                let mut s = String::new();
                for (a, b) in &pairs {
                    let _ = writeln!(s, "{a:?} {b:?}");
                }
                o.file("pairs.txt", &s)?;
            } else {
                let h = args.height.unwrap_or(args.width);
                o.meta("mode", "polyomino");
                o.meta("height", h);
                let reports = search_polyomino_pairs(args.cells, args.width, h)?;
                o.meta("pairs", reports.len());
                for (i, r) in reports.iter().enumerate() {
                    o.pair(&format!("pair-{:04}", i + 1), r)?;
                }
            }
            o.finish()
        }
        Command::Reconstruct { radius } => {
            let mut o = Outputs::new(dir, config, "reconstruct");
            let pair = reconstruct_octagonal_pair()?;
            let r = &pair.report;
            o.meta("u", format!("{:?}", pair.u.points()));
            o.meta("v", format!("{:?}", pair.v.points()));
            o.meta("shared_cells", pair.shared_cells);
            o.meta("congruent", r.congruent);
            for (side, check) in ["left", "right"].iter().zip(&pair.closed_form) {
                o.meta(&format!("{side}_placement"), format!("{:?}", check.placement));
                o.meta(&format!("{side}_max_rel_error"), format!("{:e}", check.max_rel_error));
            }
            io::write_pair_report(dir, r)?;
            for name in ["left.win", "right.win", "certificate.txt"] {
                o.written.push(dir.join(name));
            }
            o.file("left.svg", &io::window_svg(&r.left))?;
            o.file("right.svg", &io::window_svg(&r.right))?;
            if let Some(rad) = radius {
                patch_comparison(&mut o, &r.left, &r.right, *rad)?;
            }
            o.finish()
        }
    }
}

fn patch_comparison(o: &mut Outputs, a: &Polyomino, b: &Polyomino, radius: f64) -> Result<()> {
    let pa = generate_patch(&WindowPlacement::new(a.clone()), radius)?;
    let pb = generate_patch(&WindowPlacement::new(b.clone()), radius)?;
    o.meta("radius", radius);
    o.meta("left_points", pa.len());
    o.meta("right_points", pb.len());
    o.meta("left_only", patch_difference(&pa, &pb)?.len());
    o.meta("right_only", patch_difference(&pb, &pa)?.len());
    o.file("difference.svg", &io::difference_svg(&pa, &pb)?)
}
