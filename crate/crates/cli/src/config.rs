//! Optional `key = value` run configuration; command-line flags win.
//!
//! ```text
//! prec = 80
//! format = json
//! discs = -3, -4, -7
//! primes = 2, 3
//! v_d = 0, 1
//! radius = 9
//! ```

use std::path::Path;

use clap::ValueEnum;

use crate::report::Format;

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub prec: Option<u32>,
    pub format: Option<Format>,
    pub discs: Option<Vec<i64>>,
    pub primes: Option<Vec<u64>>,
    pub v_d: Option<Vec<u32>>,
    pub radius: Option<String>,
}

fn list<T: std::str::FromStr>(v: &str, line: usize) -> Result<Vec<T>, String> {
    v.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("line {line}: bad list entry '{}'", t.trim())))
        .collect()
}

pub fn parse(text: &str) -> Result<FileConfig, String> {
    let mut c = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(format!("line {ln}: expected 'key = value'"))?;
        let v = v.trim();
        match k.trim() {
            "prec" => {
                let p: u32 = v.parse().map_err(|_| format!("line {ln}: bad precision '{v}'"))?;
                if p < 24 {
                    return Err(format!("line {ln}: precision must be at least 24 digits"));
                }
                c.prec = Some(p);
            }
            "format" => c.format = Some(Format::from_str(v, true).map_err(|e| format!("line {ln}: {e}"))?),
            "discs" => c.discs = Some(list(v, ln)?),
            "primes" => c.primes = Some(list(v, ln)?),
            "v_d" => c.v_d = Some(list(v, ln)?),
            "radius" => c.radius = Some(v.to_string()),
            other => return Err(format!("line {ln}: unknown key '{other}'")),
        }
    }
    Ok(c)
}

pub fn load(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}
