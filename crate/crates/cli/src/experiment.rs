use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use cutpaste_core::optics::{
    find_peaks, sweep_with, ElementPreset, OmegaAverage, OpticalSetup, SweepAngle, DEFAULT_ETA,
};
use cutpaste_core::{Error, TOL};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{fmt_num, Run, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapChoice {
    Mprime,
    M1,
    M2,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Ideal,
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vary {
    Theta,
    Phi,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "mprime")]
    pub map: MapChoice,

    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Angle to sweep; defaults to φ for m2 and θ otherwise.
    #[arg(long, value_enum)]
    pub vary: Option<Vary>,

    /// Sweep interval "lo,hi"; defaults to [−π/2, π/2].
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: Option<(f64, f64)>,

    #[arg(long, default_value_t = 181)]
    pub steps: usize,

    /// Werner weight of the source.
    #[arg(long)]
    pub w: Option<f64>,

    /// Damping η₁ = η₂ realized by the interferometers.
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,

    /// Fixed θ when sweeping φ.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// Fixed φ when sweeping θ.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,

    /// Average ω over this many random phases instead of exactly.
    #[arg(long)]
    pub omega_samples: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Setup document (JSON); replaces --map, --eta and the fixed angles.
    #[arg(long)]
    pub setup: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"lo,hi\", got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn base_setup(args: &ExperimentArgs, to_rad: impl Fn(f64) -> f64) -> Result<OpticalSetup> {
    if let Some(path) = &args.setup {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        return Ok(OpticalSetup::from_json(&text)?);
    }
    let theta = args.theta.map(&to_rad).unwrap_or(FRAC_PI_4);
    let phi = args.phi.map(&to_rad).unwrap_or(FRAC_PI_4);
    Ok(match args.map {
        MapChoice::Mprime => OpticalSetup::m_prime(args.eta, args.eta, theta, phi)?,
        MapChoice::M1 => OpticalSetup::m1(args.eta, theta)?,
        MapChoice::M2 => OpticalSetup::m2(args.eta, phi)?,
        MapChoice::Identity => OpticalSetup::identity(),
    })
}

/// Maximal runs of grid points with zero concurrence.
fn zero_intervals(angles: &[f64], c: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &v) in c.iter().enumerate() {
        match (v <= TOL.eb, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((angles[s], angles[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((angles[s], angles[c.len() - 1]));
    }
    out
}

pub fn run(args: &ExperimentArgs, degrees: bool, run: &mut Run) -> Result<Value> {
    let to_rad = |a: f64| if degrees { a.to_radians() } else { a };
    let from_rad = |a: f64| if degrees { a.to_degrees() } else { a };
    let mut setup = base_setup(args, to_rad)?;
    if let Some(p) = args.preset {
        setup.elements = match p {
            Preset::Ideal => ElementPreset::Ideal,
            Preset::Measured => ElementPreset::Measured,
        };
    }
    if let Some(w) = args.w {
        setup.werner = w;
    }
    setup.validate()?;

    let vary = match args.vary {
        Some(Vary::Theta) => SweepAngle::Theta,
        Some(Vary::Phi) => SweepAngle::Phi,
        None if args.setup.is_none() && args.map == MapChoice::M2 => SweepAngle::Phi,
        None => SweepAngle::Theta,
    };
    let (lo, hi) = match &args.range {
        Some((a, b)) => (to_rad(*a), to_rad(*b)),
        None => (-FRAC_PI_2, FRAC_PI_2),
    };
    let average = match args.omega_samples {
        Some(samples) => OmegaAverage::MonteCarlo { samples, seed: args.seed },
        None => OmegaAverage::Exact,
    };
    let points = sweep_with(&setup, vary, lo, hi, args.steps, average)?;

    let preset = setup.elements.name();
    let mut table = Table::new(&["angle", "concurrence", "success_prob", "preset", "map_label"]);
    for p in &points {
        table.push(vec![
            fmt_num(from_rad(p.angle)),
            fmt_num(p.result.concurrence),
            fmt_num(p.result.success_prob),
            preset.to_string(),
            setup.label.clone(),
        ]);
    }
    let vary_name = match vary {
        SweepAngle::Theta => "theta",
        SweepAngle::Phi => "phi",
    };
    let stem = setup.label.to_lowercase().replace('\'', "prime");
    let path = run.table(&format!("experiment_{stem}_{preset}_{vary_name}.csv"), &table)?;
    run.json(&format!("experiment_{stem}_{preset}_{vary_name}.setup.json"), &setup)?;

    let unit = if degrees { "deg" } else { "rad" };
    let peaks = find_peaks(&points);
    for p in &peaks {
        println!("peak  {vary_name} = {:+.6} {unit}  concurrence = {:.9}", from_rad(p.angle), p.result.concurrence);
    }
    let angles: Vec<f64> = points.iter().map(|p| p.angle).collect();
    let c: Vec<f64> = points.iter().map(|p| p.result.concurrence).collect();
    let zeros = zero_intervals(&angles, &c);
    for (a, b) in &zeros {
        println!("zero  {vary_name} in [{:+.6}, {:+.6}] {unit}", from_rad(*a), from_rad(*b));
    }
    if peaks.is_empty() && zeros.is_empty() {
        let max = c.iter().copied().fold(f64::MIN, f64::max);
        println!("no interior peak; max concurrence {max:.9}");
    }
    println!("wrote {}", path.display());

    if points.iter().any(|p| !p.result.concurrence.is_finite()) {
        return Err(Error::InvalidState("non-finite concurrence in sweep".into()).into());
    }
    Ok(json!({
        "setup": setup,
        "vary": vary_name,
        "range_rad": [lo, hi],
        "steps": args.steps,
        "degrees": degrees,
        "omega_samples": args.omega_samples,
        "seed": args.seed,
        "peaks": peaks.iter().map(|p| json!({"angle_rad": p.angle, "concurrence": p.result.concurrence})).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_runs() {
        let a = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let c = [0.0, 0.0, 0.5, 0.0, 0.2, 0.0];
        assert_eq!(zero_intervals(&a, &c), vec![(0.0, 1.0), (3.0, 3.0), (5.0, 5.0)]);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-90, 90").unwrap(), (-90.0, 90.0));
        assert!(parse_range("1").is_err());
        assert!(parse_range("a,1").is_err());
    }
}
