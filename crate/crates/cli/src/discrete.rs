use anyhow::Result;
use clap::{Args, ValueEnum};
use cutpaste_core::qmath::pauli;
use cutpaste_core::{
    ad_channel, c64, choi_state, compose_all, concurrence, cut_and_paste_pair, eb_order, is_eb, pd_channel,
    ComplexMatrix, Error, QuantumChannel, TOL,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::Run;

#[derive(Debug, Args)]
pub struct DiscreteArgs {
    /// Amplitude-damping transmission η.
    #[arg(long, group = "damping", required = true)]
    pub eta: Option<f64>,

    /// Phase-damping coherence factor p.
    #[arg(long, group = "damping")]
    pub pd: Option<f64>,

    /// x, z, zx-diag, or a 2x2 JSON matrix with real or [re, im] entries.
    #[arg(long, default_value = "x")]
    pub unitary: String,

    /// Word over {P, Q} (P = Φ, Q = Ψ), leftmost letter acts first.
    #[arg(long)]
    pub sequence: Option<String>,

    /// Print the EB order of Φ (P) or Ψ (Q).
    #[arg(long, value_enum)]
    pub order_of: Option<Letter>,

    #[arg(long, default_value_t = 20)]
    pub max_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Letter {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
}

pub fn parse_unitary(spec: &str) -> Result<ComplexMatrix, Error> {
    match spec.trim() {
        "x" => return Ok(pauli::x()),
        "z" => return Ok(pauli::z()),
        "zx-diag" => return Ok((pauli::z() - pauli::x()).scale(std::f64::consts::FRAC_1_SQRT_2)),
        _ => {}
    }
    let bad = || Error::Parse(format!("unitary must be x, z, zx-diag or a 2x2 JSON matrix, got {spec:?}"));
    let value: Value = serde_json::from_str(spec).map_err(|_| bad())?;
    let rows = value.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        for z in row {
            let entry = match z {
                Value::Number(n) => c64(n.as_f64().ok_or_else(bad)?, 0.0),
                Value::Array(pair) if pair.len() == 2 => {
                    c64(pair[0].as_f64().ok_or_else(bad)?, pair[1].as_f64().ok_or_else(bad)?)
                }
                _ => return Err(bad()),
            };
            entries.push(entry);
        }
    }
    let u = ComplexMatrix::from_row_major(2, 2, &entries)?;
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    Ok(u)
}

pub fn parse_sequence(word: &str) -> Result<Vec<Letter>, Error> {
    if word.is_empty() {
        return Err(Error::Parse("empty sequence".into()));
    }
    word.chars()
        .map(|ch| match ch {
            'P' | 'p' => Ok(Letter::P),
            'Q' | 'q' => Ok(Letter::Q),
            other => Err(Error::Parse(format!("sequence letter {other:?} is not P or Q"))),
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct MapReport {
    name: String,
    is_eb: bool,
    margin: f64,
    choi_concurrence: f64,
    eb_order: String,
    /// Signed Choi concurrence of the power at which the order was found.
    order_margin: Option<f64>,
}

fn report(name: &str, c: &QuantumChannel, max_order: usize) -> Result<MapReport> {
    let verdict = is_eb(c)?;
    let order = eb_order(c, max_order)?;
    let order_margin = order.finite().map(|n| c.power(n).and_then(|p| is_eb(&p))).transpose()?.map(|v| v.margin);
    Ok(MapReport {
        name: name.into(),
        is_eb: verdict.is_eb,
        margin: verdict.margin,
        choi_concurrence: concurrence(&choi_state(c)?)?.value,
        eb_order: order.to_string(),
        order_margin,
    })
}

fn print(r: &MapReport) {
    print!("{:<10} is_eb={:<5} choi_concurrence={:.10} eb_order={}", r.name, r.is_eb, r.choi_concurrence, r.eb_order);
    match r.order_margin {
        // separable only up to the EB tolerance, not by a clear margin
        Some(m) if m > 0.0 => println!(" (signed concurrence {m:.2e} at that order is within tolerance {:e})", TOL.eb),
        _ => println!(),
    }
}

pub fn run(args: &DiscreteArgs, run: &mut Run) -> Result<Value> {
    let damping = match (args.eta, args.pd) {
        (Some(eta), None) => ad_channel(eta)?,
        (None, Some(p)) => pd_channel(p)?,
        _ => unreachable!("clap enforces exactly one damping parameter"),
    };
    let u = parse_unitary(&args.unitary)?;
    let sequence = args.sequence.as_deref().map(parse_sequence).transpose()?;
    let (phi, psi) = cut_and_paste_pair(&damping, &u)?;

    let mut maps = vec![report("P", &phi, args.max_order)?, report("Q", &psi, args.max_order)?];
    if let (Some(word), Some(letters)) = (&args.sequence, &sequence) {
        let chain: Vec<&QuantumChannel> = letters.iter().map(|l| if *l == Letter::P { &phi } else { &psi }).collect();
        maps.push(report(word, &compose_all(chain)?, args.max_order)?);
    }
    for m in &maps {
        print(m);
    }
    if let Some(letter) = args.order_of {
        let c = if letter == Letter::P { &phi } else { &psi };
        println!("order({letter:?}) = {}", eb_order(c, args.max_order)?);
    }
    let params = json!({
        "eta": args.eta,
        "pd": args.pd,
        "unitary": args.unitary,
        "sequence": args.sequence,
        "order_of": args.order_of,
        "max_order": args.max_order,
    });
    let path = run.json("discrete.json", &json!({ "parameters": params, "maps": maps }))?;
    println!("wrote {}", path.display());
    Ok(params)
}
