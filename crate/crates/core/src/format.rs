//! The line-oriented `mtc-data v1` text format.
//!
//! ```text
//! mtc-data v1
//! name fibonacci
//! labels 1 tau
//! unit 1
//! h 1 0
//! h tau 2/5
//! c 14/5
//! N tau tau 1 1
//! N tau tau tau 1
//! N tau 1 tau 1
//! S 1 : 1/sqrt(2 + (1 + sqrt(5))/2), ((1 + sqrt(5))/2)/sqrt(2 + (1 + sqrt(5))/2)
//! S tau : ((1 + sqrt(5))/2)/sqrt(2 + (1 + sqrt(5))/2), -1/sqrt(2 + (1 + sqrt(5))/2)
//! ```
//!
//! `#` starts a comment. Labels without a `dual` line are self-dual.
//! Omitted `N` entries are 0, except the unit row `N e a a = 1`, which is
//! implied and may not be contradicted. `F` lines take six labels and `R`
//! lines three, each followed by `= expr`. `chars ising` or `chars su2 K`
//! attaches a character family.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::characters::CharacterGenerator;
use crate::data::{validate, FusionData, FusionTensor, Label, SMatrix};
use crate::error::{Error, ParseError, Result};
use crate::expr::{parse_number_expr, NumberExpr};
use crate::fr::{f_admissible, FRSymbols};
use crate::report::VerificationReport;

pub const HEADER: &str = "mtc-data v1";

/// Parsed contents of a data file, with numbers kept as exact expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub name: Option<String>,
    pub notes: Vec<String>,
    pub labels: Vec<String>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub h: Vec<Rational64>,
    pub c: Rational64,
    pub n: FusionTensor,
    /// Rows by label index; a missing row is `None`.
    pub s: Vec<Option<Vec<NumberExpr>>>,
    pub f: BTreeMap<[usize; 6], NumberExpr>,
    pub r: BTreeMap<[usize; 3], NumberExpr>,
    pub chars: Option<CharacterGenerator>,
}

/// A fully validated data set.
#[derive(Debug, Clone)]
pub struct DataSet {
    pub name: String,
    pub notes: Vec<String>,
    pub data: FusionData,
    pub s: SMatrix,
    pub fr: Option<FRSymbols>,
    pub chars: Option<CharacterGenerator>,
    pub file: DataFile,
}

impl DataSet {
    /// Canonical file text.
    pub fn export(&self) -> String {
        write_data_file(&self.file)
    }
}

fn perr(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

struct Labels<'a> {
    names: &'a [String],
}

impl Labels<'_> {
    fn get(&self, name: &str, line: usize) -> Result<usize, ParseError> {
        self.names.iter().position(|x| x == name).ok_or_else(|| perr(line, format!("undeclared label `{name}`")))
    }
}

fn parse_rational(text: &str, line: usize) -> Result<Rational64, ParseError> {
    let bad = || perr(line, format!("`{text}` is not a rational number p/q"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p = i64::from_str(p.trim()).map_err(|_| bad())?;
    let q = i64::from_str(q.trim()).map_err(|_| bad())?;
    if q == 0 {
        return Err(perr(line, format!("`{text}` has a zero denominator")));
    }
    Ok(Rational64::new(p, q))
}

fn parse_expr(text: &str, line: usize) -> Result<NumberExpr, ParseError> {
    let text = text.trim();
    parse_number_expr(text).map_err(|e| perr(line, format!("in `{text}`: {e}")))?;
    NumberExpr::parse(text).map_err(|e| perr(line, format!("in `{text}`: {e}")))
}

/// Parses file text. Structural problems (syntax, undeclared labels,
/// negative multiplicities, entries on non-admissible indices) are errors
/// here; algebraic validation happens in [`DataFile::build`].
pub fn parse_data_file(text: &str) -> Result<DataFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((ln, other)) => return Err(perr(ln, format!("expected header `{HEADER}`, found `{other}`"))),
        None => return Err(perr(0, format!("empty file; expected header `{HEADER}`"))),
    }

    let mut name = None;
    let mut notes = Vec::new();
    let mut labels: Option<Vec<String>> = None;
    let mut unit = None;
    let mut dual_pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut h: BTreeMap<usize, Rational64> = BTreeMap::new();
    let mut c = None;
    let mut n_entries: BTreeMap<[usize; 3], (u32, usize)> = BTreeMap::new();
    let mut s_rows: BTreeMap<usize, Vec<NumberExpr>> = BTreeMap::new();
    let mut f: BTreeMap<[usize; 6], (NumberExpr, usize)> = BTreeMap::new();
    let mut r: BTreeMap<[usize; 3], (NumberExpr, usize)> = BTreeMap::new();
    let mut chars = None;

    for (ln, line) in lines {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if kw == "name" {
            name = Some(rest.to_string());
            continue;
        }
        if kw == "notes" {
            notes.push(rest.to_string());
            continue;
        }
        if kw == "labels" {
            if labels.is_some() {
                return Err(perr(ln, "labels declared twice"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(perr(ln, "labels line is empty"));
            }
            for (i, x) in names.iter().enumerate() {
                if x.contains([':', '=', ',']) {
                    return Err(perr(ln, format!("label `{x}` contains a reserved character")));
                }
                if names[..i].contains(x) {
                    return Err(perr(ln, format!("label `{x}` declared twice")));
                }
            }
            labels = Some(names);
            continue;
        }
        let names = labels.as_ref().ok_or_else(|| perr(ln, format!("`{kw}` before the labels line")))?;
        let lab = Labels { names };
        let words: Vec<&str> = rest.split_whitespace().collect();
        match kw {
            "unit" => {
                if words.len() != 1 {
                    return Err(perr(ln, "expected `unit LABEL`"));
                }
                unit = Some(lab.get(words[0], ln)?);
            }
            "dual" => {
                if words.len() != 2 {
                    return Err(perr(ln, "expected `dual LABEL LABEL`"));
                }
                dual_pairs.push((lab.get(words[0], ln)?, lab.get(words[1], ln)?, ln));
            }
            "h" => {
                if words.len() != 2 {
                    return Err(perr(ln, "expected `h LABEL RATIONAL`"));
                }
                let a = lab.get(words[0], ln)?;
                if h.insert(a, parse_rational(words[1], ln)?).is_some() {
                    return Err(perr(ln, format!("h of `{}` given twice", words[0])));
                }
            }
            "c" => {
                if words.len() != 1 {
                    return Err(perr(ln, "expected `c RATIONAL`"));
                }
                if c.replace(parse_rational(words[0], ln)?).is_some() {
                    return Err(perr(ln, "c given twice"));
                }
            }
            "N" => {
                if words.len() != 4 {
                    return Err(perr(ln, "expected `N LABEL LABEL LABEL COUNT`"));
                }
                let key = [lab.get(words[0], ln)?, lab.get(words[1], ln)?, lab.get(words[2], ln)?];
                let count = u32::from_str(words[3])
                    .map_err(|_| perr(ln, format!("N entries must be nonnegative integers, found `{}`", words[3])))?;
                if n_entries.insert(key, (count, ln)).is_some() {
                    return Err(perr(ln, "N entry given twice"));
                }
            }
            "S" => {
                let (row, values) =
                    rest.split_once(':').ok_or_else(|| perr(ln, "expected `S LABEL : expr, expr, ...`"))?;
                let a = lab.get(row.trim(), ln)?;
                let exprs = values.split(',').map(|t| parse_expr(t, ln)).collect::<Result<Vec<_>, _>>()?;
                if s_rows.insert(a, exprs).is_some() {
                    return Err(perr(ln, format!("S row `{}` given twice", row.trim())));
                }
            }
            "F" | "R" => {
                let (idx, value) =
                    rest.split_once('=').ok_or_else(|| perr(ln, format!("expected `{kw} LABELS = expr`")))?;
                let idx: Vec<usize> = idx.split_whitespace().map(|x| lab.get(x, ln)).collect::<Result<_, _>>()?;
                let value = parse_expr(value, ln)?;
                let dup = if kw == "F" {
                    let key: [usize; 6] = idx.try_into().map_err(|_| perr(ln, "F takes exactly six labels"))?;
                    f.insert(key, (value, ln)).is_some()
                } else {
                    let key: [usize; 3] = idx.try_into().map_err(|_| perr(ln, "R takes exactly three labels"))?;
                    r.insert(key, (value, ln)).is_some()
                };
                if dup {
                    return Err(perr(ln, format!("{kw} entry given twice")));
                }
            }
            "chars" => {
                chars = Some(match words.as_slice() {
                    ["ising"] => CharacterGenerator::Ising,
                    ["su2", k] => CharacterGenerator::Su2 {
                        k: u32::from_str(k)
                            .ok()
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| perr(ln, format!("bad level `{k}`")))?,
                    },
                    _ => return Err(perr(ln, "expected `chars ising` or `chars su2 K`")),
                });
            }
            other => return Err(perr(ln, format!("unknown record `{other}`"))),
        }
    }

    let labels = labels.ok_or_else(|| perr(0, "missing labels line"))?;
    let m = labels.len();
    let unit = unit.ok_or_else(|| perr(0, "missing unit line"))?;
    let c = c.ok_or_else(|| perr(0, "missing c line"))?;
    let mut h_vec = Vec::with_capacity(m);
    for (i, x) in labels.iter().enumerate() {
        h_vec.push(*h.get(&i).ok_or_else(|| perr(0, format!("missing h for label `{x}`")))?);
    }

    let mut dual: Vec<usize> = (0..m).collect();
    let mut dual_set = vec![false; m];
    for (a, b, ln) in dual_pairs {
        for (x, y) in [(a, b), (b, a)] {
            if dual_set[x] && dual[x] != y {
                return Err(perr(ln, format!("conflicting dual for `{}`", labels[x])));
            }
            dual[x] = y;
            dual_set[x] = true;
        }
    }

    let mut n = FusionTensor::zeros(m);
    for a in 0..m {
        n.set(unit, a, a, 1);
    }
    for ([a, b, x], (count, ln)) in &n_entries {
        if *a == unit && u32::from(b == x) != *count {
            return Err(perr(*ln, "entry contradicts the implied unit row N e a a = 1"));
        }
        n.set(*a, *b, *x, *count);
    }

    if (!f.is_empty() || !r.is_empty()) && n.max_entry() > 1 {
        return Err(perr(0, "F/R data requires multiplicities of at most 1"));
    }
    for (key, (_, ln)) in &f {
        if !f_admissible(&n, *key) {
            return Err(perr(*ln, "F entry on a non-admissible index"));
        }
    }
    for ([a, b, x], (_, ln)) in &r {
        if n.get(*a, *b, *x) == 0 {
            return Err(perr(*ln, "R entry on a non-admissible index"));
        }
    }
    if let Some(g) = &chars {
        if g.label_count() != m {
            return Err(perr(0, format!("character family has {} labels, file has {m}", g.label_count())));
        }
    }

    Ok(DataFile {
        name,
        notes,
        labels,
        unit,
        dual,
        h: h_vec,
        c,
        n,
        s: (0..m).map(|i| s_rows.remove(&i)).collect(),
        f: f.into_iter().map(|(k, (v, _))| (k, v)).collect(),
        r: r.into_iter().map(|(k, (v, _))| (k, v)).collect(),
        chars,
    })
}

fn eval(e: &NumberExpr) -> Result<Complex64> {
    Ok(e.eval()?)
}

impl DataFile {
    /// Evaluates the expressions and runs structural validation.
    pub fn build(&self) -> Result<DataSet> {
        let m = self.labels.len();
        let data = FusionData::new(
            self.labels.clone(),
            Label::new(self.unit),
            self.dual.iter().map(|&i| Label::new(i)).collect(),
            self.h.clone(),
            self.c,
            self.n.clone(),
        )?;
        let report = validate(&data);
        if !report.all_passed() {
            return Err(Error::Validation(report));
        }

        let missing: Vec<&str> =
            self.s.iter().enumerate().filter(|(_, row)| row.is_none()).map(|(i, _)| self.labels[i].as_str()).collect();
        let short: Vec<&str> = self
            .s
            .iter()
            .enumerate()
            .filter(|(_, row)| row.as_ref().is_some_and(|r| r.len() != m))
            .map(|(i, _)| self.labels[i].as_str())
            .collect();
        if !missing.is_empty() || !short.is_empty() {
            let mut report = VerificationReport::new();
            let mut detail = format!("S must be {m}x{m}");
            if !missing.is_empty() {
                let _ = write!(detail, "; missing rows: {}", missing.join(", "));
            }
            if !short.is_empty() {
                let _ = write!(detail, "; rows without {m} entries: {}", short.join(", "));
            }
            report.record_bool("S dimensions", false, detail);
            return Err(Error::Validation(report));
        }
        let rows: Vec<Vec<Complex64>> = self
            .s
            .iter()
            .map(|row| row.as_ref().expect("checked").iter().map(eval).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let s = SMatrix::from_rows(&rows)?;

        let fr = if self.f.is_empty() && self.r.is_empty() {
            None
        } else {
            let f = self.f.iter().map(|(k, v)| Ok((*k, eval(v)?))).collect::<Result<_>>()?;
            let r = self.r.iter().map(|(k, v)| Ok((*k, eval(v)?))).collect::<Result<_>>()?;
            Some(FRSymbols::new(&data, f, r)?)
        };

        Ok(DataSet {
            name: self.name.clone().unwrap_or_default(),
            notes: self.notes.clone(),
            data,
            s,
            fr,
            chars: self.chars,
            file: self.clone(),
        })
    }
}

/// Canonical text of a data file.
pub fn write_data_file(file: &DataFile) -> String {
    let l = |i: usize| file.labels[i].as_str();
    let m = file.labels.len();
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    if let Some(name) = &file.name {
        let _ = writeln!(out, "name {name}");
    }
    for note in &file.notes {
        let _ = writeln!(out, "notes {note}");
    }
    let _ = writeln!(out, "\nlabels {}", file.labels.join(" "));
    let _ = writeln!(out, "unit {}", l(file.unit));
    for a in 0..m {
        if file.dual[a] > a {
            let _ = writeln!(out, "dual {} {}", l(a), l(file.dual[a]));
        }
    }
    for a in 0..m {
        let _ = writeln!(out, "h {} {}", l(a), file.h[a]);
    }
    let _ = writeln!(out, "c {}", file.c);

    out.push('\n');
    for a in 0..m {
        for b in 0..m {
            for x in 0..m {
                let k = file.n.get(a, b, x);
                if k > 0 && a != file.unit {
                    let _ = writeln!(out, "N {} {} {} {k}", l(a), l(b), l(x));
                }
            }
        }
    }

    out.push('\n');
    for (a, row) in file.s.iter().enumerate() {
        if let Some(row) = row {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "S {} : {}", l(a), cells.join(", "));
        }
    }

    if !file.f.is_empty() {
        out.push('\n');
        for (k, v) in &file.f {
            let names: Vec<&str> = k.iter().map(|&i| l(i)).collect();
            let _ = writeln!(out, "F {} = {v}", names.join(" "));
        }
    }
    if !file.r.is_empty() {
        out.push('\n');
        for (k, v) in &file.r {
            let names: Vec<&str> = k.iter().map(|&i| l(i)).collect();
            let _ = writeln!(out, "R {} = {v}", names.join(" "));
        }
    }
    match file.chars {
        Some(CharacterGenerator::Ising) => out.push_str("\nchars ising\n"),
        Some(CharacterGenerator::Su2 { k }) => {
            let _ = write!(out, "\nchars su2 {k}\n");
        }
        None => {}
    }
    out
}

/// Parses and builds file text. Parse errors are [`Error::Parse`];
/// validation failures are [`Error::Validation`].
pub fn load_data_str(text: &str) -> Result<DataSet> {
    parse_data_file(text)?.build()
}

pub fn load_data_file(path: impl AsRef<Path>) -> Result<DataSet> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    load_data_str(&text)
}
