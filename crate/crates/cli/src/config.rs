//! Line-oriented system description.
//!
//! ```text
//! # comments run to end of line
//! [sft]
//! matrix:
//! 1 1
//! 1 0
//!
//! [potentials]
//! potential phi depth=1:
//! 0 0
//! 1 1
//!
//! [run]
//! grid = 11
//! ```
//!
//! An `[interval-map]` section (lines `branch <left> <right> <slope>`)
//! replaces `[sft]` for dimension runs; its symbolic system is the full
//! shift on the branches. Words are written as digit strings on alphabets
//! of at most 10 symbols and as comma-separated symbols otherwise.

use std::fmt::Write as _;

use thermo_core::dimension::Branch;
use thermo_core::{Error as CoreError, IntervalMapModel, Potential, SftSystem};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration ({invariant}): {message}")]
pub struct ValidationError {
    /// Name of the violated invariant, e.g. `expansion` or `primitivity`.
    pub invariant: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Sft(SftSystem),
    IntervalMap(IntervalMapModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPotential {
    pub name: String,
    pub potential: Potential,
}

/// Values from the `[run]` section; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunParams {
    pub grid: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub tolerance: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub system: System,
    /// Potentials in file order.
    pub potentials: Vec<NamedPotential>,
    pub run: RunParams,
}

impl SystemConfig {
    /// The symbolic system: the SFT itself, or the full shift coding an
    /// interval map.
    pub fn sft(&self) -> SftSystem {
        match &self.system {
            System::Sft(s) => s.clone(),
            System::IntervalMap(m) => SftSystem::full_shift(m.branches().len()).expect("nonempty map"),
        }
    }

    pub fn potential(&self, name: &str) -> Option<&Potential> {
        self.potentials.iter().find(|p| p.name == name).map(|p| &p.potential)
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn invalid(invariant: &str, message: impl Into<String>) -> ValidationError {
    ValidationError { invariant: invariant.into(), message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(i, t)| (line[..i].chars().count() + 1, t)).collect()
}

fn parse_f64(line: usize, column: usize, text: &str) -> Result<f64, ParseError> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_error(line, column, format!("expected a finite number, found `{text}`"))),
    }
}

fn parse_usize(line: usize, column: usize, text: &str) -> Result<usize, ParseError> {
    text.parse::<usize>()
        .map_err(|_| parse_error(line, column, format!("expected a nonnegative integer, found `{text}`")))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Sft,
    IntervalMap,
    Potentials,
    Run,
}

struct RawEntry {
    line: usize,
    column: usize,
    word: String,
    value: f64,
}

struct RawPotential {
    line: usize,
    name: String,
    depth: usize,
    entries: Vec<RawEntry>,
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let mut section = Section::None;
    let mut seen_sft: Option<usize> = None;
    let mut seen_map: Option<usize> = None;
    let mut in_matrix = false;
    let mut matrix: Vec<Vec<u8>> = Vec::new();
    let mut matrix_line = 0;
    let mut branches: Vec<Branch> = Vec::new();
    let mut potentials: Vec<RawPotential> = Vec::new();
    let mut run = RunParams::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, first)) = toks.first() else {
            continue;
        };

        if first.starts_with('[') {
            if toks.len() != 1 || !first.ends_with(']') {
                return Err(parse_error(line_no, col, "malformed section header").into());
            }
            section = match &first[1..first.len() - 1] {
                "sft" => {
                    if seen_sft.replace(line_no).is_some() {
                        return Err(parse_error(line_no, col, "duplicate [sft] section").into());
                    }
                    Section::Sft
                }
                "interval-map" => {
                    if seen_map.replace(line_no).is_some() {
                        return Err(parse_error(line_no, col, "duplicate [interval-map] section").into());
                    }
                    Section::IntervalMap
                }
                "potentials" => Section::Potentials,
                "run" => Section::Run,
                other => {
                    return Err(parse_error(line_no, col, format!("unknown section [{other}]")).into())
                }
            };
            in_matrix = false;
            continue;
        }

        match section {
            Section::None => {
                return Err(parse_error(line_no, col, "content before the first section header").into())
            }
            Section::Sft => {
                if first == "matrix:" && toks.len() == 1 {
                    if in_matrix || !matrix.is_empty() {
                        return Err(parse_error(line_no, col, "duplicate matrix").into());
                    }
                    in_matrix = true;
                    matrix_line = line_no;
                    continue;
                }
                if !in_matrix {
                    return Err(parse_error(line_no, col, "expected `matrix:`").into());
                }
                let mut row = Vec::with_capacity(toks.len());
                for &(c, t) in &toks {
                    match t {
                        "0" => row.push(0),
                        "1" => row.push(1),
                        _ => {
                            return Err(parse_error(line_no, c, format!("matrix entry `{t}` is not 0 or 1")).into())
                        }
                    }
                }
                if let Some(width) = matrix.first().map(Vec::len) {
                    if row.len() != width {
                        let column = toks.get(width).map_or(line.chars().count() + 1, |t| t.0);
                        return Err(parse_error(
                            line_no,
                            column,
                            format!("row has {} entries, expected {width}", row.len()),
                        )
                        .into());
                    }
                }
                if matrix.len() == row.len() {
                    return Err(parse_error(line_no, col, format!("more than {} rows", row.len())).into());
                }
                matrix.push(row);
                matrix_line = line_no;
            }
            Section::IntervalMap => {
                if first != "branch" || toks.len() != 4 {
                    return Err(parse_error(line_no, col, "expected `branch <left> <right> <slope>`").into());
                }
                let left = parse_f64(line_no, toks[1].0, toks[1].1)?;
                let right = parse_f64(line_no, toks[2].0, toks[2].1)?;
                let slope = parse_f64(line_no, toks[3].0, toks[3].1)?;
                branches.push(Branch { left, right, slope });
            }
            Section::Potentials => {
                if first == "potential" {
                    if toks.len() != 3 {
                        return Err(parse_error(line_no, col, "expected `potential <name> depth=<k>:`").into());
                    }
                    let (name_col, name) = toks[1];
                    if potentials.iter().any(|p| p.name == name) {
                        return Err(parse_error(line_no, name_col, format!("duplicate potential `{name}`")).into());
                    }
                    let (dcol, spec) = toks[2];
                    let depth = spec
                        .strip_prefix("depth=")
                        .and_then(|s| s.strip_suffix(':'))
                        .ok_or_else(|| parse_error(line_no, dcol, "expected `depth=<k>:`"))?;
                    let depth = parse_usize(line_no, dcol + 6, depth)?;
                    if depth == 0 {
                        return Err(parse_error(line_no, dcol + 6, "depth must be at least 1").into());
                    }
                    potentials.push(RawPotential { line: line_no, name: name.into(), depth, entries: Vec::new() });
                    continue;
                }
                let Some(current) = potentials.last_mut() else {
                    return Err(parse_error(line_no, col, "entry before any `potential` header").into());
                };
                if toks.len() != 2 {
                    return Err(parse_error(line_no, col, "expected `<word> <value>`").into());
                }
                let value = parse_f64(line_no, toks[1].0, toks[1].1)?;
                current.entries.push(RawEntry { line: line_no, column: col, word: first.into(), value });
            }
            Section::Run => {
                let (key, value, vcol) = match toks.as_slice() {
                    [(_, k), (_, "="), (vc, v)] => (*k, *v, *vc),
                    _ => match line.split_once('=') {
                        Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => {
                            let vc = line[..line.find('=').unwrap() + 1].chars().count()
                                + 1
                                + (v.len() - v.trim_start().len());
                            (k.trim(), v.trim(), vc)
                        }
                        _ => return Err(parse_error(line_no, col, "expected `key = value`").into()),
                    },
                };
                match key {
                    "grid" => run.grid = Some(parse_usize(line_no, vcol, value)?),
                    "n" => run.n = Some(parse_usize(line_no, vcol, value)?),
                    "resolution" => run.resolution = Some(parse_usize(line_no, vcol, value)?),
                    "alpha" => run.alpha = Some(parse_f64(line_no, vcol, value)?),
                    "delta" => run.delta = Some(parse_f64(line_no, vcol, value)?),
                    "gamma" => run.gamma = Some(parse_f64(line_no, vcol, value)?),
                    "tolerance" => run.tolerance = Some(parse_f64(line_no, vcol, value)?),
                    other => return Err(parse_error(line_no, col, format!("unknown run key `{other}`")).into()),
                }
            }
        }
    }

    let system = match (seen_sft, seen_map) {
        (Some(_), Some(_)) => {
            return Err(invalid("system", "give either [sft] or [interval-map], not both").into())
        }
        (None, None) => return Err(invalid("system", "no [sft] or [interval-map] section").into()),
        (Some(line), None) => {
            if matrix.is_empty() {
                return Err(parse_error(line, 1, "[sft] section has no matrix rows").into());
            }
            if matrix.len() != matrix[0].len() {
                return Err(parse_error(
                    matrix_line,
                    1,
                    format!("matrix has {} rows but {} columns", matrix.len(), matrix[0].len()),
                )
                .into());
            }
            System::Sft(SftSystem::new(&matrix).map_err(|e| match e {
                CoreError::NonPrimitive { .. } => invalid("primitivity", e.to_string()),
                CoreError::EmptyRowOrColumn { .. } => invalid("essential", e.to_string()),
                other => invalid("matrix", other.to_string()),
            })?)
        }
        (None, Some(line)) => {
            if branches.is_empty() {
                return Err(parse_error(line, 1, "[interval-map] section has no branches").into());
            }
            System::IntervalMap(IntervalMapModel::new(branches).map_err(|e| match e {
                CoreError::InvalidModel { invariant, message } => invalid(invariant, message),
                other => invalid("interval-map", other.to_string()),
            })?)
        }
    };

    let mut config = SystemConfig { system, potentials: Vec::new(), run };
    let sft = config.sft();
    for raw in potentials {
        let mut entries = Vec::with_capacity(raw.entries.len());
        for e in &raw.entries {
            let word = parse_word(&e.word, sft.alphabet_size())
                .map_err(|m| parse_error(e.line, e.column, m))?;
            if word.len() != raw.depth {
                return Err(parse_error(
                    e.line,
                    e.column,
                    format!("word `{}` has length {}, expected depth {}", e.word, word.len(), raw.depth),
                )
                .into());
            }
            if !sft.is_admissible(&word) {
                return Err(parse_error(e.line, e.column, format!("word `{}` is not admissible", e.word)).into());
            }
            entries.push((word, e.value));
        }
        let potential = Potential::from_table(&sft, raw.depth, entries).map_err(|e| {
            invalid(
                "potential-table",
                format!("potential `{}` (line {}): {e}", raw.name, raw.line),
            )
        })?;
        config.potentials.push(NamedPotential { name: raw.name, potential });
    }
    validate_run(&config.run)?;
    Ok(config)
}

fn parse_word(text: &str, alphabet: usize) -> Result<Vec<usize>, String> {
    let symbols: Result<Vec<usize>, String> = if alphabet > 10 || text.contains(',') {
        text.split(',')
            .map(|s| s.parse::<usize>().map_err(|_| format!("bad symbol `{s}` in word `{text}`")))
            .collect()
    } else {
        text.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| format!("bad symbol `{c}` in word `{text}`")))
            .collect()
    };
    let symbols = symbols?;
    if let Some(s) = symbols.iter().find(|&&s| s >= alphabet) {
        return Err(format!("symbol {s} outside the alphabet of size {alphabet}"));
    }
    Ok(symbols)
}

fn render_word(word: &[usize], alphabet: usize) -> String {
    let parts: Vec<String> = word.iter().map(|s| s.to_string()).collect();
    if alphabet > 10 {
        parts.join(",")
    } else {
        parts.concat()
    }
}

/// Checks the documented ranges of run parameters.
pub fn validate_run(run: &RunParams) -> Result<(), ValidationError> {
    if let Some(g) = run.grid {
        if g < 2 {
            return Err(invalid("range", format!("grid = {g}, need >= 2")));
        }
    }
    if let Some(n) = run.n {
        if n < 1 {
            return Err(invalid("range", "n must be at least 1"));
        }
    }
    if let Some(r) = run.resolution {
        if r < 1 {
            return Err(invalid("range", "resolution must be at least 1"));
        }
    }
    if let Some(d) = run.delta {
        if d < 0.0 {
            return Err(invalid("range", format!("delta = {d}, need >= 0")));
        }
    }
    if let Some(g) = run.gamma {
        if !(g > 0.0 && g < 1.0) {
            return Err(invalid("range", format!("gamma = {g}, need 0 < gamma < 1")));
        }
    }
    if let Some(t) = run.tolerance {
        if !(t > 0.0) {
            return Err(invalid("range", format!("tolerance = {t}, need > 0")));
        }
    }
    Ok(())
}

/// Canonical text of a configuration; `parse_config` inverts it exactly.
pub fn render(config: &SystemConfig) -> String {
    let mut out = String::new();
    match &config.system {
        System::Sft(sft) => {
            out.push_str("[sft]\nmatrix:\n");
            for row in sft.matrix() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        System::IntervalMap(map) => {
            out.push_str("[interval-map]\n");
            for b in map.branches() {
                let _ = writeln!(out, "branch {:?} {:?} {:?}", b.left, b.right, b.slope);
            }
        }
    }
    if !config.potentials.is_empty() {
        out.push_str("\n[potentials]\n");
        let alphabet = config.sft().alphabet_size();
        for p in &config.potentials {
            let _ = writeln!(out, "potential {} depth={}:", p.name, p.potential.depth());
            for (word, value) in p.potential.entries() {
                let _ = writeln!(out, "{} {:?}", render_word(&word, alphabet), value);
            }
        }
    }
    let r = &config.run;
    let mut run = String::new();
    let mut put = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            let _ = writeln!(run, "{key} = {v}");
        }
    };
    put("grid", r.grid.map(|v| v.to_string()));
    put("n", r.n.map(|v| v.to_string()));
    put("resolution", r.resolution.map(|v| v.to_string()));
    put("alpha", r.alpha.map(|v| format!("{v:?}")));
    put("delta", r.delta.map(|v| format!("{v:?}")));
    put("gamma", r.gamma.map(|v| format!("{v:?}")));
    put("tolerance", r.tolerance.map(|v| format!("{v:?}")));
    if !run.is_empty() {
        out.push_str("\n[run]\n");
        out.push_str(&run);
    }
    out
}
