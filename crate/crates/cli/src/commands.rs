use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use moneygraph::ledger::{CommodityId, CurrencyId, Unit};
use moneygraph::measures::export_dot;
use moneygraph::pegsim::{self, DemandProcess, PegConfig};
use moneygraph::rational::{big_to_f64, format_big};
use moneygraph::{scenario, Error, Rational};

#[derive(Debug, Default, Clone)]
pub struct RunFlags {
    pub trace: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub dot: Option<PathBuf>,
}

fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)
}

/// `moneygraph run`. Returns the exit code.
pub fn run(path: &Path, flags: &RunFlags, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let shown = path.display();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            let _ = writeln!(err, "error: no such file: {shown}");
            return 1;
        }
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {shown}: {e}");
            return 1;
        }
    };
    let s = match scenario::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{shown}: {e}");
            return 1;
        }
    };
    let trace = scenario::run(&s);

    let base = path.parent().unwrap_or(Path::new(""));
    let mut outputs: Vec<(PathBuf, String)> = trace
        .artifacts
        .iter()
        .map(|a| (base.join(&a.path), a.contents.clone()))
        .collect();
    if let Some(p) = &flags.trace {
        outputs.push((p.clone(), trace.trace_jsonl()));
    }
    if let Some(p) = &flags.csv {
        outputs.push((p.clone(), trace.csv()));
    }
    if let Some(p) = &flags.dot {
        let g = moneygraph::ledger::BalanceGraph::load(&trace.snapshot).expect("own snapshot");
        outputs.push((p.clone(), export_dot(&g)));
    }
    for (p, contents) in outputs {
        if let Err(e) = write_file(&p, &contents) {
            let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
            return 1;
        }
    }

    match &trace.failure {
        Some(e) => {
            let _ = writeln!(err, "{shown}: {e}");
            1
        }
        None => {
            let _ = writeln!(
                out,
                "{shown}: ok ({} statements, {} operations)",
                trace.lines.len(),
                trace.log.len()
            );
            0
        }
    }
}

#[derive(Debug, Clone)]
pub struct PegFlags {
    pub reserves: u64,
    pub rate: String,
    pub reserve_asset: String,
    pub deltas: String,
    pub horizon: u32,
    pub trials: u64,
    pub seed: u64,
    pub oracle: bool,
    pub steps_csv: Option<PathBuf>,
}

fn peg_inputs(f: &PegFlags) -> Result<(PegConfig, DemandProcess), Error> {
    let rate: Rational = f.rate.parse()?;
    let peg = PegConfig {
        currency: CurrencyId::new("DOM")?,
        reserve_asset: Unit::Commodity(CommodityId::new(f.reserve_asset.as_str())?),
        rate,
        initial_reserves: f.reserves,
    };
    peg.validate()?;
    let demand = DemandProcess {
        steps: pegsim::parse_demand(&f.deltas)?,
        horizon: f.horizon,
        trials: f.trials,
        seed: f.seed,
    };
    demand.validate()?;
    Ok((peg, demand))
}

/// The JSON document `moneygraph pegsim` prints.
pub fn pegsim_report(f: &PegFlags) -> Result<(Value, String), Error> {
    let (peg, demand) = peg_inputs(f)?;
    let outcome = pegsim::simulate(&peg, &demand)?;
    let mut doc = match serde_json::to_value(outcome.report()).expect("report serializes") {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    if f.oracle {
        let exact = pegsim::exact_depletion(&peg, &demand.steps, demand.horizon)?;
        let p = big_to_f64(&exact);
        let freq = outcome.depleted() as f64 / outcome.trials() as f64;
        let sigma = (p * (1.0 - p) / outcome.trials() as f64).sqrt();
        doc.insert("exact".into(), json!(format_big(&exact)));
        doc.insert("exact_decimal".into(), json!(p));
        doc.insert("frequency_decimal".into(), json!(freq));
        doc.insert("deviation".into(), json!((freq - p).abs()));
        doc.insert("three_sigma".into(), json!(3.0 * sigma));
    }
    Ok((Value::Object(doc), outcome.steps_csv()))
}

/// `moneygraph pegsim`. Invalid input exits 2.
pub fn pegsim(f: &PegFlags, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match pegsim_report(f) {
        Ok((doc, csv)) => {
            if let Some(p) = &f.steps_csv {
                if let Err(e) = write_file(p, &csv) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                    return 1;
                }
            }
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.code());
            2
        }
    }
}
