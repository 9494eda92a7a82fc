//! Identities tying the fusion tensor to the modular data: the Verlinde
//! formula, diagonalization of fusion matrices, symmetry and unit row of S,
//! quantum dimensions, twists, balancing and nondegeneracy.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;

use crate::data::{FusionData, FusionTensor, Label, SMatrix, ToleranceConfig};
use crate::error::{Error, Result};
use crate::phase::phase;
use crate::report::VerificationReport;

/// An entry of the Verlinde tensor is integral when it lies within this
/// distance of an integer.
pub const VERLINDE_INTEGRALITY_TOL: f64 = 1e-6;

/// Diagonal of the modular T-matrix, `T_a = e^{2πi(h_a - c/24)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TMatrix {
    pub diagonal: Vec<Complex64>,
}

/// Ribbon twists `θ_a = e^{2πi h_a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Twist {
    pub theta: Vec<Complex64>,
}

pub fn t_matrix(data: &FusionData) -> TMatrix {
    let shift = data.c() / Rational64::from_integer(24);
    TMatrix { diagonal: data.labels().map(|a| phase(data.h(a) - shift)).collect() }
}

pub fn twist(data: &FusionData) -> Twist {
    Twist { theta: data.labels().map(|a| phase(data.h(a))).collect() }
}

/// The matrix `N(a)` with `(a1, a2)` entry `N_{a a1}^{a2}`.
pub fn fusion_matrix(data: &FusionData, a: Label) -> Result<DMatrix<u32>> {
    let a = data.label(a.index())?;
    let m = data.m();
    Ok(DMatrix::from_fn(m, m, |i, j| data.n(a, Label::new(i), Label::new(j))))
}

/// Commutativity, associativity and the duality rule of the fusion ring.
pub fn verify_fusion_axioms(data: &FusionData) -> VerificationReport {
    let mut report = VerificationReport::new();
    let labels: Vec<Label> = data.labels().collect();

    let mut noncommuting = 0usize;
    let mut first = None;
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                if data.n(a, b, c) != data.n(b, a, c) {
                    noncommuting += 1;
                    first.get_or_insert((a, b, c));
                }
            }
        }
    }
    report.record_bool(
        "commutativity",
        noncommuting == 0,
        describe_violations(data, noncommuting, first, "N_ab^c != N_ba^c"),
    );

    let mut nonassoc = 0usize;
    let mut first = None;
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    let left: u64 =
                        labels.iter().map(|&x| u64::from(data.n(a, b, x)) * u64::from(data.n(x, c, d))).sum();
                    let right: u64 =
                        labels.iter().map(|&y| u64::from(data.n(b, c, y)) * u64::from(data.n(a, y, d))).sum();
                    if left != right {
                        nonassoc += 1;
                        first.get_or_insert((a, b, c));
                    }
                }
            }
        }
    }
    report.record_bool("associativity", nonassoc == 0, describe_violations(data, nonassoc, first, "(ab)c != a(bc)"));

    let e = data.unit();
    let mut bad = 0usize;
    let mut first = None;
    for &a in &labels {
        for &b in &labels {
            let want = u32::from(b == data.dual(a));
            if data.n(a, b, e) != want {
                bad += 1;
                first.get_or_insert((a, b, e));
            }
        }
    }
    report.record_bool("duality", bad == 0, describe_violations(data, bad, first, "N_ab^e != delta_(b,a')"));
    report
}

fn describe_violations(data: &FusionData, count: usize, first: Option<(Label, Label, Label)>, what: &str) -> String {
    match first {
        None => "holds".to_string(),
        Some((a, b, c)) => {
            format!("{count} violations of {what}, first at ({}, {}, {})", data.name(a), data.name(b), data.name(c))
        }
    }
}

/// Complex `m × m × m` tensor produced by the Verlinde formula.
#[derive(Debug, Clone, PartialEq)]
pub struct VerlindeTensor {
    m: usize,
    entries: Vec<Complex64>,
}

impl VerlindeTensor {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a1: Label, a2: Label, a3: Label) -> Complex64 {
        self.entries[(a1.index() * self.m + a2.index()) * self.m + a3.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Label, Label, Label), Complex64)> + '_ {
        let m = self.m;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, &z)| ((Label::new(i / (m * m)), Label::new((i / m) % m), Label::new(i % m)), z))
    }

    /// Largest distance of any entry from the nearest integer (imaginary
    /// parts count fully).
    pub fn integrality_defect(&self) -> f64 {
        self.entries.iter().map(|z| (z.re - z.re.round()).abs().max(z.im.abs())).fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.entries.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// Rounds to a fusion tensor when every entry is within `tol` of a
    /// nonnegative integer.
    pub fn rounded(&self, tol: f64) -> Option<FusionTensor> {
        if self.integrality_defect() > tol || self.min_real() < -tol {
            return None;
        }
        let mut n = FusionTensor::zeros(self.m);
        for ((a, b, c), z) in self.iter() {
            n.set(a.index(), b.index(), c.index(), z.re.round() as u32);
        }
        Some(n)
    }
}

/// Evaluates `Σ_{a4} S_{a1}^{a4} S_{a2}^{a4} S_{a4}^{a3'} / S_e^{a4}` for all
/// triples.
pub fn verlinde_fusion(s: &SMatrix, dual: &[Label], unit: Label, tol: &ToleranceConfig) -> Result<VerlindeTensor> {
    verlinde_with(s, unit, tol, |a4, a3| s.get(a4, dual[a3.index()]), dual.len())
}

/// Same sum with `conj(S_{a3}^{a4})` in place of `S_{a4}^{a3'}`.
fn verlinde_conjugate(s: &SMatrix, unit: Label, tol: &ToleranceConfig) -> Result<VerlindeTensor> {
    verlinde_with(s, unit, tol, |a4, a3| s.get(a3, a4).conj(), s.m())
}

fn verlinde_with(
    s: &SMatrix,
    unit: Label,
    tol: &ToleranceConfig,
    third: impl Fn(Label, Label) -> Complex64,
    m: usize,
) -> Result<VerlindeTensor> {
    if m != s.m() {
        return Err(Error::Shape(format!("dual has {m} labels, S is {0}x{0}", s.m())));
    }
    if unit.index() >= m {
        return Err(Error::LabelOutOfRange { index: unit.index(), m });
    }
    let labels: Vec<Label> = (0..m).map(Label::new).collect();
    let mut inv_unit_row = Vec::with_capacity(m);
    for &x in &labels {
        let d = s.get(unit, x);
        if d.norm() < tol.eps {
            return Err(Error::NearZero(format!("|S_e^{}| = {:.3e}", x.index(), d.norm())));
        }
        inv_unit_row.push(d.inv());
    }
    let mut entries = Vec::with_capacity(m * m * m);
    for &a1 in &labels {
        for &a2 in &labels {
            for &a3 in &labels {
                let sum: Complex64 = labels
                    .iter()
                    .map(|&a4| s.get(a1, a4) * s.get(a2, a4) * third(a4, a3) * inv_unit_row[a4.index()])
                    .sum();
                entries.push(sum);
            }
        }
    }
    Ok(VerlindeTensor { m, entries })
}

/// Compares the Verlinde tensor of `s` against the stored fusion rules.
pub fn verify_verlinde(data: &FusionData, s: &SMatrix, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    let v = match verlinde_fusion(s, data.duals(), data.unit(), tol) {
        Ok(v) => v,
        Err(err) => {
            report.record("verlinde", f64::INFINITY, VERLINDE_INTEGRALITY_TOL, err.to_string());
            return report;
        }
    };
    report.record(
        "integrality",
        v.integrality_defect(),
        VERLINDE_INTEGRALITY_TOL,
        "max distance of Verlinde entries to an integer",
    );
    report.record(
        "nonnegativity",
        (-v.min_real()).max(0.0),
        VERLINDE_INTEGRALITY_TOL,
        format!("min real part {:.3e}", v.min_real()),
    );
    let max_err =
        v.iter().map(|((a, b, c), z)| (z - Complex64::new(data.n(a, b, c) as f64, 0.0)).norm()).fold(0.0, f64::max);
    let exact = v.rounded(VERLINDE_INTEGRALITY_TOL).as_ref() == Some(data.fusion_tensor());
    let convention_gap = verlinde_conjugate(s, data.unit(), tol)
        .map(|w| v.iter().map(|(idx, z)| (z - w.get(idx.0, idx.1, idx.2)).norm()).fold(0.0, f64::max))
        .unwrap_or(f64::NAN);
    report.record(
        "matches-N",
        if exact { max_err } else { max_err.max(1.0) },
        VERLINDE_INTEGRALITY_TOL,
        format!(
            "max |V - N| = {max_err:.3e}; rounded tensor {} N; dual-row vs conjugate convention differ by {convention_gap:.1e}",
            if exact { "equals" } else { "differs from" }
        ),
    );
    report
}

/// Checks `S^{-1} N(a) S = diag(S_a^x / S_e^x)` for every label `a`.
pub fn verify_diagonalization(data: &FusionData, s: &SMatrix, tol: &ToleranceConfig) -> Result<VerificationReport> {
    let s_inv = s.inverse(tol.eps_det)?;
    let e = data.unit();
    let m = data.m();
    let mut worst_off = (0.0, e);
    let mut worst_diag = (0.0, e);
    for a in data.labels() {
        let n_a = fusion_matrix(data, a)?.map(|x| Complex64::new(x as f64, 0.0));
        let d = &s_inv * n_a * s.matrix();
        for i in 0..m {
            for j in 0..m {
                if i != j && d[(i, j)].norm() > worst_off.0 {
                    worst_off = (d[(i, j)].norm(), a);
                }
            }
            let x = Label::new(i);
            let denom = s.get(e, x);
            let dev = if denom.norm() < tol.eps { f64::INFINITY } else { (d[(i, i)] - s.get(a, x) / denom).norm() };
            if dev > worst_diag.0 || dev.is_nan() {
                worst_diag = (dev, a);
            }
        }
    }
    let mut report = VerificationReport::new();
    report.record(
        "off-diagonal",
        worst_off.0,
        tol.eps,
        format!("max off-diagonal of S^-1 N(a) S, worst a = {}", data.name(worst_off.1)),
    );
    report.record(
        "eigenvalues",
        worst_diag.0,
        tol.eps,
        format!("max |diag - S_a^x/S_e^x|, worst a = {}", data.name(worst_diag.1)),
    );
    Ok(report)
}

/// Symmetry, nonvanishing unit row and invertibility of S.
pub fn verify_s_properties(s: &SMatrix, unit: Label, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mt = s.matrix();
    let asym = (mt - mt.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    report.record("symmetry", asym, tol.eps, "max |S - S^T|");

    let min_unit = (0..s.m()).map(|x| s.get(unit, Label::new(x)).norm()).fold(f64::INFINITY, f64::min);
    report.record_lower_bound("unit-row", min_unit, tol.eps, format!("min_a |S_e^a| = {min_unit:.6e}"));

    let det = s.determinant().norm();
    report.record_lower_bound("invertible", det, tol.eps_det, format!("|det S| = {det:.6e}"));
    report
}

/// `d_a = S_e^a / S_e^e`.
pub fn quantum_dimension(s: &SMatrix, unit: Label, a: Label, tol: &ToleranceConfig) -> Result<Complex64> {
    if a.index() >= s.m() {
        return Err(Error::LabelOutOfRange { index: a.index(), m: s.m() });
    }
    let see = s.get(unit, unit);
    if see.norm() <= tol.eps {
        return Err(Error::NearZero(format!("|S_e^e| = {:.3e}", see.norm())));
    }
    Ok(s.get(unit, a) / see)
}

/// Trace of the double braiding via the twist sum
/// `Σ_c N_{a1 a2}^c θ_c/(θ_{a1} θ_{a2}) d_c`.
pub fn double_braiding_trace(
    data: &FusionData,
    s: &SMatrix,
    a1: Label,
    a2: Label,
    tol: &ToleranceConfig,
) -> Result<Complex64> {
    let theta = twist(data).theta;
    let mut sum = Complex64::new(0.0, 0.0);
    for c in data.channels(a1, a2) {
        let d_c = quantum_dimension(s, data.unit(), c, tol)?;
        sum += data.n(a1, a2, c) as f64 * theta[c.index()] / (theta[a1.index()] * theta[a2.index()]) * d_c;
    }
    Ok(sum)
}

/// Compares the twist-sum trace of the double braiding with `S_{a1}^{a2}/S_e^e`.
pub fn verify_balancing(data: &FusionData, s: &SMatrix, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    if s.m() != data.m() {
        report.record("balancing", f64::INFINITY, tol.eps, "S dimensions do not match labels");
        return report;
    }
    let e = data.unit();
    let see = s.get(e, e);
    let mut worst = 0.0f64;
    let mut at = (e, e);
    for a1 in data.labels() {
        for a2 in data.labels() {
            let dev = match double_braiding_trace(data, s, a1, a2, tol) {
                Ok(t) if see.norm() > tol.eps => (t - s.get(a1, a2) / see).norm(),
                _ => f64::INFINITY,
            };
            if dev > worst || dev.is_nan() {
                worst = dev;
                at = (a1, a2);
            }
        }
    }
    report.record(
        "balancing",
        worst,
        tol.eps,
        format!("max |twist-sum - S_a1^a2/S_e^e|, worst pair ({}, {})", data.name(at.0), data.name(at.1)),
    );
    report
}

/// Invertibility of the matrix of double-braiding traces `S_{a1}^{a2}/S_e^e`.
pub fn verify_nondegeneracy(data: &FusionData, s: &SMatrix, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    let e = data.unit();
    if s.m() != data.m() || e.index() >= s.m() {
        report.record("nondegeneracy", f64::INFINITY, 0.0, "S dimensions do not match labels");
        return report;
    }
    let see = s.get(e, e);
    if see.norm() <= tol.eps {
        report.record_lower_bound("nondegeneracy", 0.0, tol.eps_det, "S_e^e vanishes");
        return report;
    }
    let traces = s.matrix().map(|z| z / see);
    let det = traces.determinant().norm();
    report.record_lower_bound("nondegeneracy", det, tol.eps_det, format!("|det(S/S_e^e)| = {det:.6e}"));
    report
}
