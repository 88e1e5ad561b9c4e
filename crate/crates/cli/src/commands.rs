use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use pearle_core::appendix::{
    assess_positivity, candidate_density, normalized_reference, sup_distance, Grid, MuSpec,
    Positivity,
};
use pearle_core::density::{
    pearle_combined_density, r_density, riemann_bounds, simpson, uniform_ball_density,
    DensityCurve, RiemannBounds,
};
use pearle_core::estimators::{run_sweep, Convention, SweepConfig, SweepResult};

use crate::caricature::{self, Class};
use crate::format::{num, opt};

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write --out {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush()
        .with_context(|| format!("failed writing {}", path.display()))?;
    w.into_inner()
        .map_err(|e| e.into_error())
        .and_then(|f| f.sync_all())
        .with_context(|| format!("failed writing {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Outcomes,
    Alignment,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Outcomes => Convention::Outcomes,
            ConventionArg::Alignment => Convention::Alignment,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Number of emitted pairs M.
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: usize,
    #[arg(long)]
    pub seed: u64,
    /// Direction of the fixed setting b, degrees in the equatorial plane.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_deg: f64,
    /// Grid step for setting a; must divide 360.
    #[arg(long, default_value_t = 1.0)]
    pub step_deg: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Outcomes)]
    pub convention: ConventionArg,
    /// Draw an independent sample for every angle.
    #[arg(long)]
    pub fresh_per_angle: bool,
    #[arg(long)]
    pub out: PathBuf,
}

impl SweepArgs {
    pub fn config(&self) -> Result<SweepConfig> {
        if self.pairs == 0 {
            bail!("--pairs must be at least 1");
        }
        if !self.beta_deg.is_finite() {
            bail!("--beta-deg must be finite");
        }
        let config = SweepConfig {
            pairs: self.pairs,
            seed: self.seed,
            beta_deg: self.beta_deg,
            step_deg: self.step_deg,
            convention: self.convention.into(),
            fresh_per_angle: self.fresh_per_angle,
        };
        if config.angle_count().is_err() {
            bail!(
                "--step-deg {} must lie in (0, 360] and divide 360",
                self.step_deg
            );
        }
        Ok(config)
    }
}

pub const SWEEP_HEADER: &str =
    "angle_deg,n_detected,n_pairs,correlation,target,detection_rate,stderr_bound";

pub fn write_sweep<W: Write>(result: &SweepResult, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in &result.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            num(r.angle_deg),
            r.n_detected,
            r.n_pairs,
            opt(r.correlation),
            num(r.target),
            num(r.detection_rate),
            opt(r.stderr_bound),
        )?;
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<SweepResult> {
    let config = args.config()?;
    let result = run_sweep(&config)?;
    let mut w = create(&args.out)?;
    write_sweep(&result, &mut w)
        .with_context(|| format!("failed writing {}", args.out.display()))?;
    finish(w, &args.out)?;
    Ok(result)
}

pub fn sweep_summary(result: &SweepResult) -> String {
    let rates = result.records.iter().map(|r| r.detection_rate);
    let lo = rates.clone().fold(f64::INFINITY, f64::min);
    let hi = rates.fold(f64::NEG_INFINITY, f64::max);
    format!(
        "max |correlation - target|: {}\ndetection rate range: {} .. {}\n",
        num(result.max_abs_deviation()),
        num(lo),
        num(hi)
    )
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    /// Number of cells in the regular grid over [0, 1].
    #[arg(long, default_value_t = 1000)]
    pub grid_intervals: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySummary {
    pub bounds: RiemannBounds,
    pub pearle_integral: f64,
}

pub const DENSITY_HEADER: &str = "r,f_R,f_uniform_ball,f_pearle_combined";

pub fn density(args: &DensityArgs) -> Result<DensitySummary> {
    if args.grid_intervals == 0 {
        bail!("--grid-intervals must be at least 1");
    }
    let n = args.grid_intervals;
    let f_r = DensityCurve::tabulate(n, |r| r_density(r).expect("grid inside [0, 1]"));
    let ball = DensityCurve::tabulate(n, uniform_ball_density);
    let pearle = DensityCurve::tabulate(n, pearle_combined_density);

    let mut w = create(&args.out)?;
    let body = (|| -> std::io::Result<()> {
        writeln!(w, "{DENSITY_HEADER}")?;
        for i in 0..f_r.len() {
            writeln!(
                w,
                "{},{},{},{}",
                num(f_r.grid[i]),
                num(f_r.values[i]),
                num(ball.values[i]),
                num(pearle.values[i])
            )?;
        }
        Ok(())
    })();
    body.with_context(|| format!("failed writing {}", args.out.display()))?;
    finish(w, &args.out)?;

    Ok(DensitySummary {
        bounds: riemann_bounds(n)?,
        pearle_integral: simpson(pearle_combined_density, 0.0, 1.0, n),
    })
}

pub fn density_summary(s: &DensitySummary) -> String {
    format!(
        "riemann lower bound: {}\nriemann upper bound: {}\npearle combined integral: {}\n",
        num(s.bounds.lower),
        num(s.bounds.upper),
        num(s.pearle_integral)
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MuArg {
    Constant,
    GConstant,
}

#[derive(Debug, Clone, Args)]
pub struct AppendixArgs {
    #[arg(long, value_enum)]
    pub mu: MuArg,
    /// Number of grid points.
    #[arg(long, default_value_t = Grid::DEFAULT_POINTS)]
    pub grid: usize,
    /// Points dropped at the right endpoint; defaults to grid/100.
    #[arg(long)]
    pub trim: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixSummary {
    pub rows: usize,
    pub positivity: Positivity,
    /// Sup distance to the normalized `(1+s)⁻³` over `s ≤ 0.95`, constant μ only.
    pub reference_distance: Option<f64>,
}

/// Upper end of the range on which the constant-μ curve is compared with
/// the closed form.
pub const REFERENCE_WINDOW: f64 = 0.95;

pub fn appendix(args: &AppendixArgs) -> Result<AppendixSummary> {
    let grid = Grid::with_points(args.grid).context("--grid must be at least 3")?;
    let trim = args.trim.unwrap_or_else(|| grid.default_trim());
    if args.grid < trim + 3 {
        bail!(
            "--trim {trim} leaves fewer than 3 points on a grid of {}",
            args.grid
        );
    }
    let spec = match args.mu {
        MuArg::Constant => MuSpec::Constant,
        MuArg::GConstant => MuSpec::GConstant,
    };
    let h = candidate_density(&spec, &grid, trim)?;
    let reference = match args.mu {
        MuArg::Constant => Some(normalized_reference(h.grid())?),
        MuArg::GConstant => None,
    };

    let mut w = create(&args.out)?;
    let body = (|| -> std::io::Result<()> {
        match &reference {
            Some(r) => {
                writeln!(w, "s,h_normalized,reference")?;
                for ((s, v), rv) in h.iter().zip(r.values()) {
                    writeln!(w, "{},{},{}", num(s), num(v), num(*rv))?;
                }
            }
            None => {
                writeln!(w, "s,h_normalized")?;
                for (s, v) in h.iter() {
                    writeln!(w, "{},{}", num(s), num(v))?;
                }
            }
        }
        Ok(())
    })();
    body.with_context(|| format!("failed writing {}", args.out.display()))?;
    finish(w, &args.out)?;

    Ok(AppendixSummary {
        rows: h.len(),
        positivity: assess_positivity(&h),
        reference_distance: reference.map(|r| sup_distance(&h, &r, 0.0, REFERENCE_WINDOW)),
    })
}

pub fn appendix_summary(s: &AppendixSummary) -> String {
    let p = &s.positivity;
    let mut out = format!(
        "min: {}\nmax: {}\nhas_negative: {}\nnegative_fraction: {}\n",
        num(p.min),
        num(p.max),
        p.has_negative,
        num(p.negative_fraction)
    );
    if let Some(d) = s.reference_distance {
        out.push_str(&format!(
            "sup distance to reference (s <= 0.95): {}\n",
            num(d)
        ));
    }
    out
}

#[derive(Debug, Clone, Args)]
pub struct CaricatureArgs {
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub const CARICATURE_HEADER: &str = "kind,series,x,y,class";
const BOUNDARY_RESOLUTION: usize = 1000;

pub fn caricature(args: &CaricatureArgs) -> Result<usize> {
    let boundary = caricature::boundary(BOUNDARY_RESOLUTION);
    let points = caricature::sample_points(args.points, args.seed);
    let mut w = create(&args.out)?;
    let body = (|| -> std::io::Result<()> {
        writeln!(w, "{CARICATURE_HEADER}")?;
        for b in &boundary {
            writeln!(
                w,
                "boundary,{},{},{},{}",
                b.series,
                num(b.x),
                num(b.y),
                b.class.name()
            )?;
        }
        for p in &points {
            writeln!(
                w,
                "point,sample,{},{},{}",
                num(p.x),
                num(p.y),
                p.class.name()
            )?;
        }
        Ok(())
    })();
    body.with_context(|| format!("failed writing {}", args.out.display()))?;
    finish(w, &args.out)?;
    Ok(points
        .iter()
        .filter(|p| p.class == Class::Undetected)
        .count())
}
