//! CSV and JSON emission with fixed column schemas.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so the
//! same numbers always produce the same bytes.

use std::borrow::Borrow;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::SumSeries;
use crate::factorsieve::{MultiplicativeSum, ValueFactorization};
use crate::galois::ClassFrequencies;
use crate::polyarith::RhoTable;
use crate::sieves::BoundReport;

/// Version tag carried by every JSON report.
pub const SPEC_VERSION: &str = "1.0";

/// `x,value`
pub fn write_series_csv(mut w: impl Write, series: &SumSeries) -> io::Result<()> {
    writeln!(w, "x,value")?;
    for &(x, v) in &series.checkpoints {
        writeln!(w, "{x},{v}")?;
    }
    Ok(())
}

/// `x,sum,sum_over_x`
pub fn write_eval_csv(mut w: impl Write, sum: &MultiplicativeSum) -> io::Result<()> {
    writeln!(w, "x,sum,sum_over_x")?;
    for &(x, v) in &sum.series.checkpoints {
        writeln!(w, "{x},{v},{}", v / x as f64)?;
    }
    Ok(())
}

/// `p,rho`; degenerate primes are omitted.
pub fn write_rho_csv(mut w: impl Write, table: &RhoTable) -> io::Result<()> {
    writeln!(w, "p,rho")?;
    for &(p, r) in table.entries() {
        writeln!(w, "{p},{r}")?;
    }
    Ok(())
}

/// `x,kind,exponent_sum,bound`
pub fn write_bounds_csv(mut w: impl Write, bounds: &[BoundReport]) -> io::Result<()> {
    writeln!(w, "x,kind,exponent_sum,bound")?;
    for b in bounds {
        writeln!(w, "{},{},{},{}", b.x, b.kind, b.exponent_sum, b.bound)?;
    }
    Ok(())
}

/// `pattern,frequency,count`
pub fn write_class_csv(mut w: impl Write, freq: &ClassFrequencies) -> io::Result<()> {
    writeln!(w, "pattern,frequency,count")?;
    for (k, f, c) in freq.rows() {
        writeln!(w, "{k},{f},{c}")?;
    }
    Ok(())
}

/// `n,value,factors,cofactor` with factors as `p:e;p:e`.
pub fn write_factor_dump(
    mut w: impl Write,
    values: impl IntoIterator<Item = impl Borrow<ValueFactorization>>,
) -> io::Result<()> {
    writeln!(w, "n,value,factors,cofactor")?;
    for v in values {
        writeln!(w, "{}", v.borrow().dump_line())?;
    }
    Ok(())
}

/// `payload` as a JSON object tagged with `report` and `spec_version`.
/// Non-object payloads go under `data`.
pub fn json_report(report: &str, payload: &impl Serialize) -> serde_json::Result<Value> {
    let body = serde_json::to_value(payload)?;
    let mut out = Map::new();
    out.insert("spec_version".into(), json!(SPEC_VERSION));
    out.insert("report".into(), json!(report));
    match body {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("data".into(), other);
        }
    }
    Ok(Value::Object(out))
}

pub fn write_json(mut w: impl Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{fit_loglog, FitMode};
    use crate::polyarith::{rho_table, Poly};
    use crate::sieves::classical_product_bound;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_schemas() {
        let s = SumSeries {
            label: "t".into(),
            checkpoints: vec![(10, 1.5), (20, 0.25)],
        };
        assert_eq!(text(|w| write_series_csv(w, &s)), "x,value\n10,1.5\n20,0.25\n");
        let rho = rho_table(&"x^3 - 2".parse::<Poly>().unwrap(), 10).unwrap();
        assert_eq!(text(|w| write_rho_csv(w, &rho)), "p,rho\n2,1\n3,1\n5,1\n7,0\n");
        let b = classical_product_bound(|_| 1.0, 100).unwrap();
        assert_eq!(text(|w| write_bounds_csv(w, &[b])), "x,kind,exponent_sum,bound\n100,classical_upper,0,100\n");
    }

    #[test]
    fn json_tags() {
        // x log x has slope 1 against log log x
        let s = SumSeries {
            label: "t".into(),
            checkpoints: (1..=6).map(|k| (10u64.pow(k), 10f64.powi(k as i32) * (k as f64 * 10f64.ln()))).collect(),
        };
        let fit = fit_loglog(&s, (10, 1_000_000), FitMode::FullSum).unwrap();
        let v = json_report("fit", &fit).unwrap();
        assert_eq!(v["spec_version"], SPEC_VERSION);
        assert_eq!(v["window"], json!([10, 1_000_000]));
        assert!((v["slope"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let v = json_report("value", &3).unwrap();
        assert_eq!(v["data"], 3);
    }
}
