//! The immutable data model: labels, fusion data, the S-matrix and
//! tolerance settings.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Index of a simple object (an equivalence class of irreducible modules).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(usize);

impl Label {
    pub const fn new(index: usize) -> Self {
        Label(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Dense `m × m × m` tensor of fusion multiplicities `N_{ab}^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTensor {
    m: usize,
    entries: Vec<u32>,
}

impl FusionTensor {
    pub fn zeros(m: usize) -> Self {
        FusionTensor { m, entries: vec![0; m * m * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    fn offset(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.m + b) * self.m + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u32 {
        self.entries[self.offset(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, n: u32) {
        let i = self.offset(a, b, c);
        self.entries[i] = n;
    }

    /// Sets `N_{ab}^c` and `N_{ba}^c` together.
    pub fn set_symmetric(&mut self, a: usize, b: usize, c: usize, n: u32) {
        self.set(a, b, c, n);
        self.set(b, a, c, n);
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }
}

/// Label set with unit, duality, conformal weights, central charge and
/// fusion multiplicities.
///
/// Construction checks only shapes and index ranges. The algebraic
/// invariants (unit fusion, dual involution, ...) are checked by
/// [`validate`], which reports rather than rejects.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionData {
    names: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    h: Vec<Rational64>,
    c: Rational64,
    n: FusionTensor,
}

impl FusionData {
    pub fn new(
        names: Vec<String>,
        unit: Label,
        dual: Vec<Label>,
        h: Vec<Rational64>,
        c: Rational64,
        n: FusionTensor,
    ) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::Shape("label set is empty".into()));
        }
        if dual.len() != m {
            return Err(Error::Shape(format!("dual has {} entries, expected {m}", dual.len())));
        }
        if h.len() != m {
            return Err(Error::Shape(format!("h has {} entries, expected {m}", h.len())));
        }
        if n.m() != m {
            return Err(Error::Shape(format!("N is {0}x{0}x{0}, expected {m}", n.m())));
        }
        for l in std::iter::once(&unit).chain(dual.iter()) {
            if l.index() >= m {
                return Err(Error::LabelOutOfRange { index: l.index(), m });
            }
        }
        Ok(FusionData { names, unit, dual, h, c, n })
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        (0..self.m()).map(Label)
    }

    pub fn label(&self, index: usize) -> Result<Label> {
        if index < self.m() {
            Ok(Label(index))
        } else {
            Err(Error::LabelOutOfRange { index, m: self.m() })
        }
    }

    pub fn label_by_name(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name).map(Label)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Label) -> &str {
        &self.names[a.0]
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a.0]
    }

    pub fn duals(&self) -> &[Label] {
        &self.dual
    }

    pub fn h(&self, a: Label) -> Rational64 {
        self.h[a.0]
    }

    pub fn h_f64(&self, a: Label) -> f64 {
        ratio_to_f64(self.h[a.0])
    }

    pub fn c(&self) -> Rational64 {
        self.c
    }

    pub fn n(&self, a: Label, b: Label, c: Label) -> u32 {
        self.n.get(a.0, b.0, c.0)
    }

    pub fn fusion_tensor(&self) -> &FusionTensor {
        &self.n
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.max_entry() <= 1
    }

    /// Fusion channels `c` with `N_{ab}^c > 0`.
    pub fn channels(&self, a: Label, b: Label) -> impl Iterator<Item = Label> + '_ {
        self.labels().filter(move |&c| self.n(a, b, c) > 0)
    }
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Reports one entry per structural invariant of [`FusionData`].
pub fn validate(data: &FusionData) -> VerificationReport {
    let mut report = VerificationReport::new();
    let e = data.unit();

    let bad_inv: Vec<_> =
        data.labels().filter(|&a| data.dual(data.dual(a)) != a).map(|a| data.name(a).to_string()).collect();
    report.record_bool(
        "dual-involution",
        bad_inv.is_empty(),
        if bad_inv.is_empty() { "a'' = a for all labels".to_string() } else { format!("fails at {bad_inv:?}") },
    );

    report.record_bool("dual-unit", data.dual(e) == e, format!("dual of unit is {}", data.name(data.dual(e))));

    let mut unit_row_bad = Vec::new();
    for a in data.labels() {
        for b in data.labels() {
            let expected = u32::from(a == b);
            if data.n(e, a, b) != expected {
                unit_row_bad.push((data.name(a).to_string(), data.name(b).to_string()));
            }
        }
    }
    report.record_bool(
        "unit-fusion",
        unit_row_bad.is_empty(),
        if unit_row_bad.is_empty() {
            "N_{e a}^b = delta_ab".to_string()
        } else {
            format!("N_(e a)^b wrong at {unit_row_bad:?}")
        },
    );

    let pairing_bad: Vec<_> =
        data.labels().filter(|&a| data.n(a, data.dual(a), e) != 1).map(|a| data.name(a).to_string()).collect();
    report.record_bool(
        "dual-pairing",
        pairing_bad.is_empty(),
        if pairing_bad.is_empty() {
            "N_{a a'}^e = 1".to_string()
        } else {
            format!("N_(a a')^e != 1 at {pairing_bad:?}")
        },
    );

    // u32 storage makes entries finite and nonnegative by construction
    report.record_bool("nonnegative-integers", true, "N stored as unsigned integers");

    report.record_bool("unit-weight", data.h(e).is_zero(), format!("h_e = {}", data.h(e)));

    report
}

/// The modular S-matrix `S_{a1}^{a2}`, rows indexed by `a1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    entries: DMatrix<Complex64>,
}

impl SMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::Shape(format!(
                "S dimensions: matrix is {}x{}, expected square and nonempty",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("S has non-finite entries".into()));
        }
        Ok(SMatrix { entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("S dimensions: rows have unequal length".into()));
        }
        SMatrix::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    }

    /// Real matrix convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        SMatrix::from_rows(&rows)
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, a1: Label, a2: Label) -> Complex64 {
        self.entries[(a1.index(), a2.index())]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries.clone().determinant()
    }

    /// Inverse, refusing matrices with `|det| <= eps_det`.
    pub fn inverse(&self, eps_det: f64) -> Result<DMatrix<Complex64>> {
        let det = self.determinant();
        if det.norm() <= eps_det {
            return Err(Error::Singular(format!("|det S| = {:.3e}", det.norm())));
        }
        self.entries.clone().try_inverse().ok_or_else(|| Error::Singular("LU inversion failed".into()))
    }
}

/// Absolute tolerances for complex comparisons (`eps`) and for
/// determinant-based invertibility tests (`eps_det`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub eps: f64,
    pub eps_det: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { eps: 1e-9, eps_det: 1e-8 }
    }
}

impl ToleranceConfig {
    pub fn new(eps: f64, eps_det: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Tolerance(format!("eps must lie in (0, 1), got {eps}")));
        }
        if !(eps_det > 0.0 && eps_det.is_finite()) {
            return Err(Error::Tolerance(format!("eps_det must be positive, got {eps_det}")));
        }
        Ok(ToleranceConfig { eps, eps_det })
    }

    pub fn with_eps(eps: f64) -> Result<Self> {
        ToleranceConfig::new(eps, ToleranceConfig::default().eps_det)
    }
}
