//! Built-in data sets: `trivial`, `fibonacci`, `ising` and `su2-1` through
//! `su2-8`.
//!
//! Every entry is stored as `mtc-data v1` text, so [`DataSet::export`]
//! reproduces the shipped file exactly.
//!
//! ```
//! let ising = modular_data::catalog::get_entry("ising").unwrap();
//! assert_eq!(ising.data.m(), 3);
//! assert!(ising.fr.is_some() && ising.chars.is_some());
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::characters::{character_series as series, QCharacter};
use crate::data::{Label, SMatrix};
use crate::error::{Error, Result};
use crate::format::load_data_str;
pub use crate::format::DataSet;

pub type CatalogEntry = DataSet;

pub const TRIVIAL: &str = include_str!("../data/trivial.mtc");
pub const FIBONACCI: &str = include_str!("../data/fibonacci.mtc");
pub const ISING: &str = include_str!("../data/ising.mtc");

pub const MAX_SU2_LEVEL: u32 = 8;

pub fn names() -> Vec<String> {
    let mut out = vec!["trivial".to_string(), "fibonacci".into(), "ising".into()];
    out.extend((1..=MAX_SU2_LEVEL).map(|k| format!("su2-{k}")));
    out
}

fn su2_level(name: &str) -> Option<u32> {
    let k: u32 = name.strip_prefix("su2-")?.parse().ok()?;
    (1..=MAX_SU2_LEVEL).contains(&k).then_some(k)
}

/// The file text of a catalog entry.
pub fn entry_text(name: &str) -> Result<String> {
    match name {
        "trivial" => Ok(TRIVIAL.to_string()),
        "fibonacci" => Ok(FIBONACCI.to_string()),
        "ising" => Ok(ISING.to_string()),
        _ => su2_level(name).map(su2_text).ok_or_else(|| Error::UnknownEntry(name.to_string())),
    }
}

pub fn get_entry(name: &str) -> Result<DataSet> {
    load_data_str(&entry_text(name)?)
}

/// Character series of label `a` of a catalog entry.
pub fn character_series(name: &str, a: Label, order: usize) -> Result<QCharacter> {
    let entry = get_entry(name)?;
    match entry.chars {
        Some(g) => series(&g, a, order),
        None => Err(Error::Unsupported(format!("`{name}` ships without character data"))),
    }
}

fn spin(a: u32) -> String {
    if a.is_multiple_of(2) {
        (a / 2).to_string()
    } else {
        format!("{a}/2")
    }
}

/// `mtc-data v1` text for SU(2) at level `k`, labels `j = 0, 1/2, …, k/2`.
fn su2_text(k: u32) -> String {
    let n = k + 2;
    let labels: Vec<String> = (0..=k).map(spin).collect();
    let mut out = String::from("mtc-data v1\n");
    let _ = writeln!(out, "name su2-{k}");
    let _ = writeln!(out, "notes SU(2) at level {k}: truncated Clebsch-Gordan fusion, Kac-Peterson S.");
    let _ = writeln!(out, "notes Ships without F/R symbols.");
    let _ = writeln!(out, "\nlabels {}", labels.join(" "));
    let _ = writeln!(out, "unit 0");
    for a in 0..=k {
        let h = Rational64::new(i64::from(a * (a + 2)), i64::from(4 * n));
        let _ = writeln!(out, "h {} {h}", labels[a as usize]);
    }
    let _ = writeln!(out, "c {}", Rational64::new(i64::from(3 * k), i64::from(n)));
    out.push('\n');
    for a in 1..=k {
        for b in 0..=k {
            for c in 0..=k {
                if su2_fusion(k, a, b, c) {
                    let _ = writeln!(out, "N {} {} {} 1", labels[a as usize], labels[b as usize], labels[c as usize]);
                }
            }
        }
    }
    out.push('\n');
    for a in 0..=k {
        let cells: Vec<String> = (0..=k)
            .map(|b| {
                let r = (a + 1) * (b + 1);
                format!("sqrt(2/{n})*(e({r}/{0}) - e(-{r}/{0}))/(2*e(1/4))", 2 * n)
            })
            .collect();
        let _ = writeln!(out, "S {} : {}", labels[a as usize], cells.join(", "));
    }
    let _ = write!(out, "\nchars su2 {k}\n");
    out
}

/// Truncated Clebsch–Gordan rule in doubled-spin labels.
pub fn su2_fusion(k: u32, a: u32, b: u32, c: u32) -> bool {
    a.abs_diff(b) <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c).is_multiple_of(2)
}

/// `√(2/(k+2)) sin(π(a+1)(b+1)/(k+2))`, evaluated directly in floating point.
pub fn su2k_smatrix(k: u32) -> Result<SMatrix> {
    if !(1..=MAX_SU2_LEVEL).contains(&k) {
        return Err(Error::Unsupported(format!("SU(2) level {k} is outside 1..={MAX_SU2_LEVEL}")));
    }
    let n = f64::from(k + 2);
    let rows: Vec<Vec<Complex64>> = (0..=k)
        .map(|a| {
            (0..=k)
                .map(|b| {
                    let x = (2.0 / n).sqrt() * (PI * f64::from((a + 1) * (b + 1)) / n).sin();
                    Complex64::new(x, 0.0)
                })
                .collect()
        })
        .collect();
    SMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_data_file, write_data_file};

    #[test]
    fn shipped_files_are_canonical() {
        for name in names() {
            let text = entry_text(&name).unwrap();
            let file = parse_data_file(&text).unwrap();
            assert_eq!(write_data_file(&file), text, "{name}");
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["su2-0", "su2-9", "su2-x", "lee-yang", ""] {
            assert!(matches!(get_entry(bad), Err(Error::UnknownEntry(_))), "{bad}");
        }
    }

    #[test]
    fn fibonacci_has_no_characters() {
        assert!(matches!(character_series("fibonacci", Label::new(0), 5), Err(Error::Unsupported(_))));
        assert!(character_series("ising", Label::new(0), 5).is_ok());
    }

    #[test]
    fn su2_level_one_closed_form() {
        let s = su2k_smatrix(1).unwrap();
        let q = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b, want) in [(0, 0, q), (0, 1, q), (1, 0, q), (1, 1, -q)] {
            assert!((s.get(Label::new(a), Label::new(b)).re - want).abs() < 1e-15);
        }
        assert!(su2k_smatrix(0).is_err() && su2k_smatrix(9).is_err());
    }

    #[test]
    fn su2_level_two_middle_row() {
        let s = su2k_smatrix(2).unwrap();
        let h = std::f64::consts::SQRT_2 / 2.0;
        let row: Vec<f64> = (0..3).map(|b| s.get(Label::new(1), Label::new(b)).re).collect();
        assert!((row[0] - h).abs() < 1e-15 && row[1].abs() < 1e-15 && (row[2] + h).abs() < 1e-15);
        assert!((0..3).all(|b| s.get(Label::new(0), Label::new(b)).re > 0.0));
    }

    #[test]
    fn spins() {
        assert_eq!((0..4).map(spin).collect::<Vec<_>>(), ["0", "1/2", "1", "3/2"]);
    }
}
