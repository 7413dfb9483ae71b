//! Deterministic text assembly shared by every subcommand.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// 17 significant digits with a C-style signed two-digit exponent, so a
/// fixed command line produces byte-identical output everywhere.
pub fn fmt_e17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let printed = format!("{x:.16e}");
    let (mantissa, exponent) = printed
        .split_once('e')
        .expect("finite floats always print an exponent");
    let e: i32 = exponent.parse().expect("exponent is a small integer");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", e.abs())
}

/// One CSV page: `#` metadata lines, a single header, preformatted rows.
pub struct Page {
    lines: Vec<String>,
}

impl Page {
    pub fn new(subcommand: &str) -> Self {
        Self {
            lines: vec![format!(
                "# weakmeas {} {subcommand}",
                env!("CARGO_PKG_VERSION")
            )],
        }
    }

    pub fn meta(&mut self, line: impl AsRef<str>) {
        self.lines.push(format!("# {}", line.as_ref()));
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.lines.push(columns.join(","));
    }

    pub fn row(&mut self, cells: &[String]) {
        self.lines.push(cells.join(","));
    }

    pub fn finish(self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }
}

/// Writes a finished page to the chosen destination.
pub fn emit(text: String, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(CliError::Io),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(CliError::Io),
    }
}
