//! Text renderings of convergence tables.

use crate::table::{ConvergenceRow, TableKind};
use std::fmt::Write as _;

/// Column names of the CSV and TSV renderings.
pub const HEADER: [&str; 7] = [
    "n", "value_n", "value_bs", "scaled1", "coeff1", "scaled2", "coeff2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
    Pretty,
}

/// Decimal places of printed numbers; `Full` prints the shortest text that
/// parses back to the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Digits {
    Fixed(usize),
    Full,
}

impl std::str::FromStr for Digits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Digits::Full);
        }
        s.parse()
            .map(Digits::Fixed)
            .map_err(|_| format!("expected a number of decimals or `full`, got `{s}`"))
    }
}

pub fn format_number(value: f64, digits: Digits) -> String {
    match digits {
        Digits::Fixed(d) => format!("{value:.d$}"),
        Digits::Full => format!("{value}"),
    }
}

fn cells(row: &ConvergenceRow, digits: Digits) -> [String; 7] {
    let opt = |v: Option<f64>| v.map(|x| format_number(x, digits)).unwrap_or_default();
    [
        row.n.to_string(),
        format_number(row.value_n, digits),
        format_number(row.value_bs, digits),
        format_number(row.scaled1, digits),
        format_number(row.coeff1, digits),
        opt(row.scaled2),
        opt(row.coeff2),
    ]
}

fn delimited(rows: &[ConvergenceRow], digits: Digits, delimiter: u8) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    // writing to a Vec cannot fail
    writer.write_record(HEADER).expect("in-memory write");
    for row in rows {
        writer
            .write_record(cells(row, digits))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn to_csv(rows: &[ConvergenceRow], digits: Digits) -> String {
    delimited(rows, digits, b',')
}

pub fn to_tsv(rows: &[ConvergenceRow], digits: Digits) -> String {
    delimited(rows, digits, b'\t')
}

/// Parses the CSV rendering back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<ConvergenceRow>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(HEADER) {
        return Err(format!("unexpected header: {header:?}"));
    }
    let number = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let optional = |s: &str| {
        if s.is_empty() {
            Ok(None)
        } else {
            number(s).map(Some)
        }
    };
    reader
        .records()
        .map(|record| {
            let r = record.map_err(|e| e.to_string())?;
            Ok(ConvergenceRow {
                n: r[0].parse().map_err(|e| format!("`{}`: {e}", &r[0]))?,
                value_n: number(&r[1])?,
                value_bs: number(&r[2])?,
                scaled1: number(&r[3])?,
                coeff1: number(&r[4])?,
                scaled2: optional(&r[5])?,
                coeff2: optional(&r[6])?,
            })
        })
        .collect()
}

fn labels(kind: TableKind) -> [String; 6] {
    let x = match kind {
        TableKind::Call | TableKind::CallR0 => "C",
        TableKind::Put => "P",
        TableKind::Delta => "Delta",
    };
    [
        format!("{x}_n"),
        format!("{x}_BS"),
        format!("({x}_n - {x}_BS) sqrt(n)"),
        format!("{x}_1"),
        format!("({x}_n - {x}_BS - {x}_1/sqrt(n)) n"),
        format!("{x}_2"),
    ]
}

/// Transposed table with one labelled line per quantity and one column per `n`.
pub fn to_pretty(kind: TableKind, rows: &[ConvergenceRow], digits: Digits) -> String {
    let labels = labels(kind);
    let mut lines: Vec<(String, Vec<String>)> = vec![(
        "Number of periods n".into(),
        rows.iter().map(|r| r.n.to_string()).collect(),
    )];
    let series: [Vec<Option<f64>>; 6] = [
        rows.iter().map(|r| Some(r.value_n)).collect(),
        rows.iter().map(|r| Some(r.value_bs)).collect(),
        rows.iter().map(|r| Some(r.scaled1)).collect(),
        rows.iter().map(|r| Some(r.coeff1)).collect(),
        rows.iter().map(|r| r.scaled2).collect(),
        rows.iter().map(|r| r.coeff2).collect(),
    ];
    for (label, values) in labels.into_iter().zip(series) {
        if values.iter().all(Option::is_none) {
            continue;
        }
        let text = values
            .iter()
            .map(|v| v.map(|x| format_number(x, digits)).unwrap_or_default())
            .collect();
        lines.push((label, text));
    }
    let label_width = lines.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let cell_width = lines
        .iter()
        .flat_map(|(_, cells)| cells.iter().map(String::len))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (label, cells) in lines {
        let _ = write!(out, "{label:<label_width$}");
        for cell in cells {
            let _ = write!(out, "  {cell:>cell_width$}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(scaled2: Option<f64>) -> ConvergenceRow {
        ConvergenceRow {
            n: 1000,
            value_n: 14.71834,
            value_bs: 14.922,
            scaled1: -6.44022,
            coeff1: -6.5078,
            scaled2,
            coeff2: scaled2.map(|_| 2.1308),
        }
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&[row(None), row(Some(2.13716))], Digits::Fixed(4));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,value_n,value_bs,scaled1,coeff1,scaled2,coeff2");
        assert_eq!(lines[1], "1000,14.7183,14.9220,-6.4402,-6.5078,,");
        assert_eq!(
            lines[2],
            "1000,14.7183,14.9220,-6.4402,-6.5078,2.1372,2.1308"
        );
    }

    #[test]
    fn tsv_uses_tabs() {
        let text = to_tsv(&[row(None)], Digits::Fixed(2));
        assert!(text.starts_with("n\tvalue_n\t"));
    }

    #[test]
    fn pretty_skips_absent_lines() {
        let text = to_pretty(TableKind::CallR0, &[row(None)], Digits::Fixed(4));
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("(C_n - C_BS) sqrt(n)"));
        let text = to_pretty(TableKind::Put, &[row(Some(1.0))], Digits::Fixed(4));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn digits_parse() {
        assert_eq!("full".parse::<Digits>().unwrap(), Digits::Full);
        assert_eq!("6".parse::<Digits>().unwrap(), Digits::Fixed(6));
        assert!("x".parse::<Digits>().is_err());
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }
}
