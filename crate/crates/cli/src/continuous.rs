use anyhow::Result;
use clap::{Args, ValueEnum};
use cutpaste_core::continuous::{
    concurrence_profile, eb_length, rotating_ad_liouvillian, rotating_pd_liouvillian_with_sign, Branch,
    DephasingSign, Liouvillian, Propagator, SwitchedLine,
};
use cutpaste_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{fmt_num, Run, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ad,
    Pd,
}

#[derive(Debug, Args)]
pub struct ContinuousArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    /// Rotation rate Ω.
    #[arg(long, default_value_t = 1.5)]
    pub omega: f64,

    /// Dissipation rate ε.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,

    /// Slice counts; each line switches every slice_base/n.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    pub n: Vec<usize>,

    /// Length divided into n slices. Defaults to the EB length of the
    /// unswitched channel.
    #[arg(long)]
    pub slice_base: Option<f64>,

    #[arg(long, default_value_t = 8.0)]
    pub x_max: f64,

    /// Points per profile.
    #[arg(long, default_value_t = 161)]
    pub steps: usize,

    /// Search limit for EB lengths.
    #[arg(long, default_value_t = 50.0)]
    pub x_hi: f64,

    /// Use +(ε/2)[σz,[σz,ρ]] for the dephasing term.
    #[arg(long)]
    pub paper_literal_sign: bool,
}

fn generator(args: &ContinuousArgs, branch: Branch) -> Result<Liouvillian, Error> {
    match args.family {
        Family::Ad => rotating_ad_liouvillian(branch, args.omega, args.eps),
        Family::Pd => {
            let sign = if args.paper_literal_sign { DephasingSign::Growing } else { DephasingSign::Decaying };
            rotating_pd_liouvillian_with_sign(branch, args.omega, args.eps, sign)
        }
    }
}

/// `None` when no crossing exists before `x_hi`.
fn length(prop: &dyn Propagator, x_hi: f64) -> Result<Option<f64>, Error> {
    match eb_length(prop, x_hi) {
        Ok(x) => Ok(Some(x)),
        Err(Error::NoBracket { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn describe(l: Option<f64>, x_hi: f64) -> String {
    match l {
        Some(x) => format!("{x:.5}"),
        None => format!("Unbounded (no crossing before x = {x_hi})"),
    }
}

pub fn run(args: &ContinuousArgs, run: &mut Run) -> Result<Value> {
    if args.n.is_empty() || args.n.contains(&0) {
        return Err(Error::OutOfRange { name: "n", value: 0.0, lo: 1.0, hi: f64::INFINITY }.into());
    }
    let family = match args.family {
        Family::Ad => "ad",
        Family::Pd => "pd",
    };
    let first = generator(args, Branch::First)?;
    let second = generator(args, Branch::Second)?;
    let average = Liouvillian::average(&first, &second)?;

    let single_len = length(&first, args.x_hi)?;
    let base = match (args.slice_base, single_len) {
        (Some(b), _) => Some(b),
        (None, l) => l,
    };

    let mut curves: Vec<(String, Box<dyn Propagator>)> = vec![("single".into(), Box::new(first.clone()))];
    match base {
        Some(base) => {
            for &n in &args.n {
                let line = SwitchedLine::new(first.clone(), second.clone(), base / n as f64, format!("n{n}"))?;
                curves.push((format!("n{n}"), Box::new(line)));
            }
        }
        None => println!("no slice base: the single channel never becomes EB and --slice-base was not given"),
    }
    curves.push(("limit".into(), Box::new(average)));

    let mut lengths = serde_json::Map::new();
    for (label, prop) in &curves {
        let profile = concurrence_profile(prop.as_ref(), args.x_max, args.steps)?;
        let mut table = Table::new(&["x", "concurrence", "pre_clamp", "label"]);
        for p in &profile {
            table.push(vec![fmt_num(p.x), fmt_num(p.concurrence), fmt_num(p.pre_clamp), label.clone()]);
        }
        let path = run.table(&format!("continuous_{family}_{label}.csv"), &table)?;
        let l = if label == "single" { single_len } else { length(prop.as_ref(), args.x_hi)? };
        println!("{label:<8} eb_length = {:<40} {}", describe(l, args.x_hi), path.display());
        lengths.insert(label.clone(), json!(l));
    }
    Ok(json!({
        "family": args.family,
        "omega": args.omega,
        "eps": args.eps,
        "n": args.n,
        "slice_base": base,
        "x_max": args.x_max,
        "steps": args.steps,
        "x_hi": args.x_hi,
        "paper_literal_sign": args.paper_literal_sign,
        "eb_lengths": lengths,
    }))
}
