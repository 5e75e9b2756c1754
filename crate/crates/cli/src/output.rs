//! CSV tables with fixed, locale-independent number formatting.

use std::io::Write;

/// Significant digits of every numeric field.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// A quantity in nats, rescaled by `--bits`.
    Nats(f64),
    /// A unitless quantity.
    Num(f64),
    Int(u128),
    Bool(bool),
    Text(String),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: impl Write, bits: bool) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| render_cell(c, bits)))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn render_cell(cell: &Cell, bits: bool) -> String {
    match cell {
        Cell::Nats(x) if bits => format_number(x / std::f64::consts::LN_2),
        Cell::Nats(x) | Cell::Num(x) => format_number(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

/// `x` to 12 significant digits in `%g` style: positional for exponents in
/// `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };

    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        };
        format!("{sign}{}", trim_fraction(&body))
    } else {
        let body = format!("{}.{}", &digits[..1], &digits[1..]);
        format!("{sign}{}e{exp}", trim_fraction(&body))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
