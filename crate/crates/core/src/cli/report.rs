//! Tables rendered either aligned (7 significant digits) or as CSV (shortest
//! round-trip representation).

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u128),
    Num(f64),
}

impl Cell {
    fn table(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => significant(*x, 7),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => format!("{x:?}"),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u128)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(u128::from(n))
    }
}

impl From<u128> for Cell {
    fn from(n: u128) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

/// `x` with `digits` significant digits, trailing zeros trimmed, switching to
/// exponent form outside `[1e-5, 1e7)`.
pub fn significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..7).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Two-column `quantity, value` table.
    pub fn summary(pairs: Vec<(&str, Cell)>) -> Self {
        let mut t = Table::new(&["quantity", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.into(), v]);
        }
        t
    }

    fn render(&self, out: &mut String) {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::table).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].len())
                    .chain([self.columns[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |out: &mut String, row: &[String]| {
            let parts: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(out, &self.columns);
        for r in &cells {
            line(out, r);
        }
    }

    fn render_csv(&self, out: &mut Vec<u8>) {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).expect("write to memory");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).expect("write to memory");
        }
        w.flush().expect("flush to memory");
    }
}

/// Titled tables, in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub sections: Vec<(String, Table)>,
}

impl Report {
    pub fn add(&mut self, title: &str, table: Table) {
        self.sections.push((title.to_string(), table));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (title, table)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "== {title} ==");
            table.render(&mut out);
        }
        out
    }

    /// Sections separated by a blank line, each with its header row; a single
    /// section is plain CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, (_, table)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut buf = Vec::new();
            table.render_csv(&mut buf);
            out.push_str(&String::from_utf8(buf).expect("utf-8 cells"));
        }
        out
    }
}
