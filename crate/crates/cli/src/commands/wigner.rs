use rydpol_core::angular::{SignedSqrtRational, SixJ, ThreeJ};
use rydpol_core::HalfInt;
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::args::{SymbolKind, WignerArgs};
use crate::error::{CliError, Result};
use crate::output::Outputs;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerJob {
    pub symbol: SymbolKind,
    /// Arguments as twice their values.
    pub twice: [i32; 6],
}

pub fn resolve(a: &WignerArgs) -> Result<WignerJob> {
    let mut twice = [0; 6];
    let mut bad = Vec::new();
    for (k, s) in a.values.iter().enumerate() {
        match s.parse::<HalfInt>() {
            Ok(h) => twice[k] = h.twice(),
            Err(e) => bad.push(e.to_string()),
        }
    }
    if !bad.is_empty() {
        return Err(CliError::Usage(bad.join("; ")));
    }
    Ok(WignerJob { symbol: a.symbol, twice })
}

#[derive(Serialize)]
struct WignerFile {
    symbol: SymbolKind,
    arguments: Vec<String>,
    /// -1, 0, or 1.
    sign: i8,
    /// The exact square of the value, as `p/q`.
    square: String,
    value: f64,
}

pub fn run(job: &WignerJob, _ctx: &Ctx) -> Result<Outputs> {
    let h = job.twice.map(HalfInt::from_twice);
    let exact: SignedSqrtRational = match job.symbol {
        SymbolKind::ThreeJ => ThreeJ::new(h[0], h[1], h[2], h[3], h[4], h[5]).exact(),
        SymbolKind::SixJ => SixJ::new(h[0], h[1], h[2], h[3], h[4], h[5]).exact(),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let args: Vec<String> = h.iter().map(|x| x.to_string()).collect();
    let file = WignerFile {
        symbol: job.symbol,
        arguments: args.clone(),
        sign: exact.sign(),
        square: exact.square().to_string(),
        value: exact.to_f64(),
    };
    let mut out = Outputs::default();
    let shape = match job.symbol {
        SymbolKind::ThreeJ => format!("({} {} {}; {} {} {})", args[0], args[1], args[2], args[3], args[4], args[5]),
        SymbolKind::SixJ => format!("{{{} {} {}; {} {} {}}}", args[0], args[1], args[2], args[3], args[4], args[5]),
    };
    out.summary.push(format!("{shape} = {exact:?} = {}", rydpol_core::io::fmt_sig(file.value)));
    out.json("wigner.json", &file)?;
    Ok(out)
}
