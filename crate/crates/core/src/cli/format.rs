//! Line-oriented system files.
//!
//! ```text
//! # comment; blank lines are ignored
//! [shift]
//! 1 1
//! 1 0
//! [potential phi memory=2]
//! 11 0.5
//! 12 log(0.25)
//! * 0            # fills every admissible word not listed
//! [options]
//! tol_beta = 1e-10
//! ```
//!
//! Words are written 1-based, as digits (`12`) or dotted (`1.10.2`).

use std::fmt::{self, Write as _};

use crate::induced::DEFAULT_PSI_FLOOR;
use crate::potential::LocallyConstantPotential;
use crate::sft::{EnumerationCap, Sft, Word, DEFAULT_ENUMERATION_CAP};

/// Parse or validation failure tied to a 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Tunables carried by a system file. Every key has a default, and
/// [`emit_system`] writes all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub tol_beta: f64,
    pub tol_inner: f64,
    pub max_iters: usize,
    pub cap: u64,
    pub seed: Option<u64>,
    pub psi_floor: f64,
    pub samples: usize,
    pub refine_steps: usize,
    pub gibbs_depth: usize,
    pub t_step: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol_beta: 1e-10,
            tol_inner: 1e-12,
            max_iters: 100_000,
            cap: DEFAULT_ENUMERATION_CAP,
            seed: None,
            psi_floor: DEFAULT_PSI_FLOOR,
            samples: 2000,
            refine_steps: 2000,
            gibbs_depth: 8,
            t_step: None,
        }
    }
}

impl Options {
    pub fn enumeration_cap(&self) -> EnumerationCap {
        EnumerationCap(self.cap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPotential {
    pub name: String,
    pub potential: LocallyConstantPotential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub sft: Sft,
    /// In file order; names are unique.
    pub potentials: Vec<NamedPotential>,
    pub options: Options,
}

impl SystemFile {
    pub fn potential(&self, name: &str) -> Option<&LocallyConstantPotential> {
        self.potentials.iter().find(|p| p.name == name).map(|p| &p.potential)
    }
}

enum Section {
    None,
    Shift,
    Potential(usize),
    Options,
}

struct PendingPotential {
    name: String,
    memory: usize,
    line: usize,
    entries: Vec<(usize, Vec<usize>, f64)>,
    fill: Option<f64>,
}

/// A number, or `log(x)` for positive `x`.
fn parse_value(token: &str, line: usize) -> Result<f64, ParseError> {
    let v = if let Some(inner) = token.strip_prefix("log(").and_then(|t| t.strip_suffix(')')) {
        let x: f64 = inner.trim().parse().map_err(|_| ParseError {
            line,
            message: format!("invalid number in {token:?}"),
        })?;
        if !(x > 0.0) {
            return err(line, format!("log argument must be positive in {token:?}"));
        }
        x.ln()
    } else {
        token.parse().map_err(|_| ParseError {
            line,
            message: format!("invalid number {token:?}"),
        })?
    };
    if !v.is_finite() {
        return err(line, format!("value {token:?} is not finite"));
    }
    Ok(v)
}

fn parse_header(body: &str, line: usize) -> Result<Section, ParseError> {
    let mut parts = body.split_whitespace();
    match parts.next() {
        Some("shift") if parts.next().is_none() => Ok(Section::Shift),
        Some("options") if parts.next().is_none() => Ok(Section::Options),
        Some("potential") => Ok(Section::Potential(line)),
        Some(other) => err(line, format!("unknown section [{other}]")),
        None => err(line, "empty section header"),
    }
}

fn parse_potential_header(body: &str, line: usize) -> Result<(String, usize), ParseError> {
    let parts: Vec<&str> = body.split_whitespace().collect();
    let (name, memory) = match parts.as_slice() {
        ["potential", name, mem] => (*name, *mem),
        _ => return err(line, "expected [potential NAME memory=M]"),
    };
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return err(line, format!("invalid potential name {name:?}"));
    }
    let memory = memory
        .strip_prefix("memory=")
        .and_then(|m| m.parse::<usize>().ok())
        .filter(|&m| m >= 1)
        .ok_or_else(|| ParseError {
            line,
            message: format!("invalid memory {memory:?}"),
        })?;
    Ok((name.to_string(), memory))
}

fn set_option(opts: &mut Options, key: &str, value: &str, line: usize) -> Result<(), ParseError> {
    fn num<T: std::str::FromStr>(value: &str, key: &str, line: usize) -> Result<T, ParseError> {
        value.parse().map_err(|_| ParseError {
            line,
            message: format!("invalid value {value:?} for {key}"),
        })
    }
    fn positive(v: f64, key: &str, line: usize) -> Result<f64, ParseError> {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            err(line, format!("{key} must be positive"))
        }
    }
    match key {
        "tol_beta" => opts.tol_beta = positive(num(value, key, line)?, key, line)?,
        "tol_inner" => opts.tol_inner = positive(num(value, key, line)?, key, line)?,
        "max_iters" => opts.max_iters = num(value, key, line)?,
        "cap" => opts.cap = num(value, key, line)?,
        "seed" => opts.seed = Some(num(value, key, line)?),
        "psi_floor" => opts.psi_floor = num(value, key, line)?,
        "samples" => opts.samples = num(value, key, line)?,
        "refine_steps" => opts.refine_steps = num(value, key, line)?,
        "gibbs_depth" => opts.gibbs_depth = num(value, key, line)?,
        "t_step" => opts.t_step = Some(positive(num(value, key, line)?, key, line)?),
        _ => return err(line, format!("unknown option {key:?}")),
    }
    Ok(())
}

/// Parses and fully validates a system file.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut section = Section::None;
    let mut shift_line = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut pending: Vec<PendingPotential> = Vec::new();
    let mut options = Options::default();
    let mut seen_options = false;
    let mut seen_keys: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('[') {
            let Some(body) = body.strip_suffix(']') else {
                return err(line, "unterminated section header");
            };
            section = parse_header(body, line)?;
            match section {
                Section::Shift => {
                    if shift_line.is_some() {
                        return err(line, "duplicate [shift] section");
                    }
                    shift_line = Some(line);
                }
                Section::Options => {
                    if seen_options {
                        return err(line, "duplicate [options] section");
                    }
                    seen_options = true;
                }
                Section::Potential(_) => {
                    let (name, memory) = parse_potential_header(body, line)?;
                    if pending.iter().any(|p| p.name == name) {
                        return err(line, format!("duplicate potential {name:?}"));
                    }
                    pending.push(PendingPotential {
                        name,
                        memory,
                        line,
                        entries: Vec::new(),
                        fill: None,
                    });
                    section = Section::Potential(pending.len() - 1);
                }
                Section::None => unreachable!(),
            }
            continue;
        }
        match section {
            Section::None => return err(line, "content before any section header"),
            Section::Shift => {
                let row = content
                    .split_whitespace()
                    .map(|t| match t {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        _ => err(line, format!("transition entry {t:?} is not 0 or 1")),
                    })
                    .collect::<Result<Vec<u8>, _>>()?;
                if let Some(first) = rows.first() {
                    if row.len() != first.len() {
                        return err(
                            line,
                            format!("transition row has {} entries, expected {}", row.len(), first.len()),
                        );
                    }
                }
                rows.push(row);
            }
            Section::Potential(i) => {
                let p = &mut pending[i];
                let mut parts = content.split_whitespace();
                let (Some(word), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                    return err(line, "expected WORD VALUE");
                };
                let value = parse_value(value, line)?;
                if word == "*" {
                    if p.fill.is_some() {
                        return err(line, "duplicate fill entry");
                    }
                    p.fill = Some(value);
                } else {
                    let w = Word::parse(word).map_err(|e| ParseError {
                        line,
                        message: e.to_string(),
                    })?;
                    p.entries.push((line, w.into_symbols(), value));
                }
            }
            Section::Options => {
                let Some((key, value)) = content.split_once('=') else {
                    return err(line, "expected key = value");
                };
                let key = key.trim();
                if seen_keys.iter().any(|k| k == key) {
                    return err(line, format!("duplicate option {key:?}"));
                }
                seen_keys.push(key.to_string());
                set_option(&mut options, key, value.trim(), line)?;
            }
        }
    }

    let Some(shift_line) = shift_line else {
        return err(text.lines().count().max(1), "missing [shift] section");
    };
    if rows.is_empty() {
        return err(shift_line, "[shift] section has no rows");
    }
    if rows.len() != rows[0].len() {
        return err(
            shift_line,
            format!(
                "transition matrix has {} rows and {} columns",
                rows.len(),
                rows[0].len()
            ),
        );
    }
    let sft = Sft::new(&rows).map_err(|e| ParseError {
        line: shift_line,
        message: e.to_string(),
    })?;
    let k = sft.alphabet_size();

    let mut potentials = Vec::with_capacity(pending.len());
    for p in pending {
        let mut table: Vec<(Word, f64)> = Vec::new();
        let mut listed = std::collections::HashSet::new();
        for (line, symbols, value) in &p.entries {
            if symbols.len() != p.memory {
                return err(
                    *line,
                    format!(
                        "word has length {}, potential {:?} has memory {}",
                        symbols.len(),
                        p.name,
                        p.memory
                    ),
                );
            }
            if symbols.iter().any(|&s| s >= k) {
                return err(*line, format!("word uses a symbol outside 1..={k}"));
            }
            if !sft.is_admissible(symbols) {
                return err(
                    *line,
                    format!("word {} is not admissible", Word::from_symbols(symbols.clone())),
                );
            }
            if !listed.insert(symbols.clone()) {
                return err(
                    *line,
                    format!("duplicate entry for {}", Word::from_symbols(symbols.clone())),
                );
            }
            table.push((Word::from_symbols(symbols.clone()), *value));
        }
        if let Some(fill) = p.fill {
            let cap = options.enumeration_cap();
            let words = sft.enumerate_words(p.memory, cap).map_err(|e| ParseError {
                line: p.line,
                message: e.to_string(),
            })?;
            for w in words {
                if !listed.contains(w.symbols()) {
                    table.push((w, fill));
                }
            }
        }
        let potential = LocallyConstantPotential::from_table(&sft, p.memory, table).map_err(|e| ParseError {
            line: p.line,
            message: format!("potential {:?}: {e}", p.name),
        })?;
        potentials.push(NamedPotential {
            name: p.name,
            potential,
        });
    }

    Ok(SystemFile {
        sft,
        potentials,
        options,
    })
}

/// Canonical text form; [`parse_system`] maps it back to an equal value.
pub fn emit_system(system: &SystemFile) -> String {
    let mut out = String::from("[shift]\n");
    for row in system.sft.rows() {
        let cells: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    for p in &system.potentials {
        let _ = writeln!(out, "\n[potential {} memory={}]", p.name, p.potential.memory());
        for (word, value) in p.potential.entries() {
            let _ = writeln!(out, "{word} {value:?}");
        }
    }
    let o = &system.options;
    out.push_str("\n[options]\n");
    let _ = writeln!(out, "tol_beta = {:?}", o.tol_beta);
    let _ = writeln!(out, "tol_inner = {:?}", o.tol_inner);
    let _ = writeln!(out, "max_iters = {}", o.max_iters);
    let _ = writeln!(out, "cap = {}", o.cap);
    if let Some(seed) = o.seed {
        let _ = writeln!(out, "seed = {seed}");
    }
    let _ = writeln!(out, "psi_floor = {:?}", o.psi_floor);
    let _ = writeln!(out, "samples = {}", o.samples);
    let _ = writeln!(out, "refine_steps = {}", o.refine_steps);
    let _ = writeln!(out, "gibbs_depth = {}", o.gibbs_depth);
    if let Some(t) = o.t_step {
        let _ = writeln!(out, "t_step = {t:?}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "\
# golden mean
[shift]
1 1
1 0

[potential zero memory=1]
* 0

[potential psi memory=2]
11 1
12 log(2)
21 0.5
";

    #[test]
    fn parses_minimal_file() {
        let sys = parse_system("[shift]\n1 1\n1 1\n[potential c memory=1]\n* 2.5\n").unwrap();
        assert_eq!(sys.sft.alphabet_size(), 2);
        let c = sys.potential("c").unwrap();
        assert_eq!(c.value(&[0]), 2.5);
        assert_eq!(c.value(&[1]), 2.5);
        assert_eq!(sys.options, Options::default());
    }

    #[test]
    fn parses_log_sugar_and_fill() {
        let sys = parse_system(GOLDEN).unwrap();
        let psi = sys.potential("psi").unwrap();
        assert_eq!(psi.value(&[0, 1]), 2f64.ln());
        assert_eq!(psi.value(&[1, 0]), 0.5);
        assert!(sys.potential("missing").is_none());
    }

    #[test]
    fn rejects_wrong_arity_row() {
        let e = parse_system("[shift]\n1 1\n1 1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("expected 2"));
    }

    #[test]
    fn rejects_inadmissible_word() {
        let e = parse_system("[shift]\n1 1\n1 0\n[potential p memory=2]\n11 1\n12 1\n21 1\n22 1\n").unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("not admissible"));
    }

    #[test]
    fn reports_offending_lines() {
        let cases = [
            ("[shift]\n1 0\n0 0\n", 1),
            ("[shift]\n1 2\n1 1\n", 2),
            ("1 1\n", 1),
            ("[shift]\n1 1\n1 1\n[potential p memory=1]\n1 1\n", 4),
            ("[shift]\n1 1\n1 1\n[potential p memory=1]\n1 1\n1 2\n", 6),
            ("[shift]\n1 1\n1 1\n[potential p memory=1]\n12 1\n2 1\n", 5),
            ("[shift]\n1 1\n1 1\n[potential p memory=1]\n3 1\n", 5),
            ("[shift]\n1 1\n1 1\n[potential p memory=1]\n1 log(-1)\n2 1\n", 5),
            ("[shift]\n1 1\n1 1\n[potential p memory=0]\n", 4),
            ("[shift]\n1 1\n1 1\n[options]\nfoo = 1\n", 5),
            ("[shift]\n1 1\n1 1\n[options]\ncap = 5\ncap = 6\n", 6),
            ("[shift]\n1 1\n1 1\n[options]\ntol_beta = -1\n", 5),
            ("[shift]\n1 1\n1 1\n[bogus]\n", 4),
            ("[shift]\n1 1\n[shift]\n", 3),
            (
                "[shift]\n1 1\n1 1\n[potential p memory=1]\n* 1\n[potential p memory=1]\n* 1\n",
                6,
            ),
        ];
        for (text, line) in cases {
            let e = parse_system(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
        assert!(parse_system("").is_err());
    }

    #[test]
    fn options_round_trip() {
        let text = "[shift]\n1\n[options]\ntol_beta = 1e-8\nseed = 9\nt_step = 0.25\nsamples = 12\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.options.seed, Some(9));
        assert_eq!(sys.options.samples, 12);
        let again = parse_system(&emit_system(&sys)).unwrap();
        assert_eq!(again, sys);
    }

    #[test]
    fn canonical_emission_round_trips() {
        let sys = parse_system(GOLDEN).unwrap();
        let text = emit_system(&sys);
        let again = parse_system(&text).unwrap();
        assert_eq!(again, sys);
        assert_eq!(emit_system(&again), text);
    }
}
