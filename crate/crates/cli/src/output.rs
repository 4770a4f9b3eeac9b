use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};

const SIGNIFICANT: usize = 12;

/// `x` to twelve significant digits, positional unless the exponent is
/// extreme, without trailing zeros.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..16).contains(&exp) {
        return format!("{}e{exp}", trim(mantissa));
    }
    let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
