use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qsiege::ExtendedValue;
use serde::Serialize;

use crate::error::CliError;

/// `%.17g`: enough digits to round-trip any f64.
pub fn float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn extended(v: ExtendedValue) -> String {
    match v {
        ExtendedValue::Finite(x) => float(x),
        ExtendedValue::PositiveInfinite => "inf".into(),
        ExtendedValue::NegativeInfinite => "-inf".into(),
    }
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file =
        File::create(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    serde_json::to_writer_pretty(&mut lock, value)
        .map_err(|e| CliError::io("writing JSON", e.into()))?;
    writeln!(lock).map_err(|e| CliError::io("writing JSON", e))
}
