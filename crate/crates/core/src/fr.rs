//! Fusing (F) and braiding (R) symbols for multiplicity-free data, the
//! polynomial equations they satisfy, and the rigidity, monodromy and
//! S-reconstruction identities built from them.
//!
//! `F(a1, a2, a3, a4, a5, a6)` is the matrix element taking the product
//! basis `Y_{a1 a5}^{a4} ⊗ Y_{a2 a3}^{a5}` to the iterate basis
//! `Y_{a6 a3}^{a4} ⊗ Y_{a1 a2}^{a6}`. In the more common notation this is
//! `[F^{a1 a2 a3}_{a4}]_{a6, a5}`.
//!
//! `R(a, b, c)` is the exchange phase on the channel `c` of `a ⊗ b`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::data::{FusionData, FusionTensor, Label, SMatrix, ToleranceConfig};
use crate::error::{Error, Result};
use crate::phase::{half_phase, phase};
use crate::report::VerificationReport;

/// F and R tables over a multiplicity-free fusion tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct FRSymbols {
    n: FusionTensor,
    f: BTreeMap<[usize; 6], Complex64>,
    r: BTreeMap<[usize; 3], Complex64>,
}

/// Whether `F(idx)` connects two nonzero fusion spaces.
pub fn f_admissible(n: &FusionTensor, idx: [usize; 6]) -> bool {
    let [a1, a2, a3, a4, a5, a6] = idx;
    n.get(a1, a5, a4) > 0 && n.get(a2, a3, a5) > 0 && n.get(a6, a3, a4) > 0 && n.get(a1, a2, a6) > 0
}

/// All admissible F indices in lexicographic order.
pub fn admissible_f_indices(n: &FusionTensor) -> Vec<[usize; 6]> {
    let m = n.m();
    let mut out = Vec::new();
    for a1 in 0..m {
        for a2 in 0..m {
            for a6 in (0..m).filter(|&x| n.get(a1, a2, x) > 0) {
                for a3 in 0..m {
                    for a4 in (0..m).filter(|&x| n.get(a6, a3, x) > 0) {
                        for a5 in 0..m {
                            if n.get(a1, a5, a4) > 0 && n.get(a2, a3, a5) > 0 {
                                out.push([a1, a2, a3, a4, a5, a6]);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

impl FRSymbols {
    /// Builds the tables. Data with any multiplicity above 1 is rejected, as
    /// is any entry on an index tuple that is not admissible.
    pub fn new(
        data: &FusionData,
        f: BTreeMap<[usize; 6], Complex64>,
        r: BTreeMap<[usize; 3], Complex64>,
    ) -> Result<Self> {
        let n = data.fusion_tensor().clone();
        let m = n.m();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if n.get(a, b, c) > 1 {
                        return Err(Error::NotMultiplicityFree([a, b, c], n.get(a, b, c)));
                    }
                }
            }
        }
        for idx in f.keys() {
            if let Some(&bad) = idx.iter().find(|&&x| x >= m) {
                return Err(Error::LabelOutOfRange { index: bad, m });
            }
            if !f_admissible(&n, *idx) {
                return Err(Error::NotAdmissible("F", idx.to_vec()));
            }
        }
        for &[a, b, c] in r.keys() {
            if let Some(&bad) = [a, b, c].iter().find(|&&x| x >= m) {
                return Err(Error::LabelOutOfRange { index: bad, m });
            }
            if n.get(a, b, c) == 0 {
                return Err(Error::NotAdmissible("R", vec![a, b, c]));
            }
        }
        Ok(FRSymbols { n, f, r })
    }

    /// Stored F entry; admissible tuples without an entry are an error.
    pub fn f(&self, idx: [usize; 6]) -> Result<Complex64> {
        if !f_admissible(&self.n, idx) {
            return Err(Error::NotAdmissible("F", idx.to_vec()));
        }
        self.f.get(&idx).copied().ok_or(Error::MissingF(idx))
    }

    /// Like [`FRSymbols::f`], but non-admissible tuples read as 0.
    fn f_or_zero(&self, idx: [usize; 6]) -> Result<Complex64> {
        if idx.iter().any(|&x| x >= self.n.m()) || !f_admissible(&self.n, idx) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.f.get(&idx).copied().ok_or(Error::MissingF(idx))
    }

    /// `[F^{abc}_d]_{e,f}` in the usual convention (`e` the channel of `ab`,
    /// `f` the channel of `bc`).
    fn std(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<Complex64> {
        self.f_or_zero([a, b, c, d, f, e])
    }

    pub fn r(&self, a: Label, b: Label, c: Label) -> Result<Complex64> {
        let key = [a.index(), b.index(), c.index()];
        if key.iter().any(|&x| x >= self.n.m()) || self.n.get(key[0], key[1], key[2]) == 0 {
            return Err(Error::NotAdmissible("R", key.to_vec()));
        }
        self.r.get(&key).copied().ok_or(Error::MissingR(key))
    }

    fn r_or_zero(&self, a: usize, b: usize, c: usize) -> Result<Complex64> {
        if self.n.get(a, b, c) == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.r.get(&[a, b, c]).copied().ok_or(Error::MissingR([a, b, c]))
    }

    pub fn f_entries(&self) -> impl Iterator<Item = ([usize; 6], Complex64)> + '_ {
        self.f.iter().map(|(k, v)| (*k, *v))
    }

    pub fn r_entries(&self) -> impl Iterator<Item = ([usize; 3], Complex64)> + '_ {
        self.r.iter().map(|(k, v)| (*k, *v))
    }

    /// Copy with every F entry passed through `g`.
    pub fn map_f(&self, g: impl Fn([usize; 6], Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (k, v) in out.f.iter_mut() {
            *v = g(*k, *v);
        }
        out
    }

    /// Copy with every R entry passed through `g`.
    pub fn map_r(&self, g: impl Fn([usize; 3], Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (k, v) in out.r.iter_mut() {
            *v = g(*k, *v);
        }
        out
    }

    /// Admissible F indices that have no stored entry.
    pub fn missing_f(&self) -> Vec<[usize; 6]> {
        admissible_f_indices(&self.n).into_iter().filter(|k| !self.f.contains_key(k)).collect()
    }

    /// Admissible R indices that have no stored entry.
    pub fn missing_r(&self) -> Vec<[usize; 3]> {
        let m = self.n.m();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if self.n.get(a, b, c) > 0 && !self.r.contains_key(&[a, b, c]) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

fn fmt_f(data: &FusionData, idx: [usize; 6]) -> String {
    let names: Vec<&str> = idx.iter().map(|&i| data.name(Label::new(i))).collect();
    format!("F({})", names.join(", "))
}

fn fmt_r(data: &FusionData, idx: [usize; 3]) -> String {
    let names: Vec<&str> = idx.iter().map(|&i| data.name(Label::new(i))).collect();
    format!("R({})", names.join(", "))
}

fn describe(data: &FusionData, err: &Error) -> String {
    match err {
        Error::MissingF(idx) => format!("incomplete data: missing {}", fmt_f(data, *idx)),
        Error::MissingR(idx) => format!("incomplete data: missing {}", fmt_r(data, *idx)),
        other => other.to_string(),
    }
}

/// Pentagon equation over every admissible fusion tree of four objects,
/// plus the unit gauge (F with a unit among its first three labels is 1).
pub fn pentagon_check(data: &FusionData, fr: &FRSymbols, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    match pentagon_residual(data, fr) {
        Ok((res, count, worst)) => {
            let detail = match worst {
                Some(w) if res > 0.0 => format!(
                    "{count} instances, worst at (a,b,c,d,e) = ({})",
                    w.iter().map(|&i| data.name(Label::new(i))).collect::<Vec<_>>().join(", ")
                ),
                _ => format!("{count} instances"),
            };
            report.record("pentagon", res, tol.eps, detail);
        }
        Err(err) => report.record("pentagon", f64::INFINITY, tol.eps, describe(data, &err)),
    }

    let e = data.unit().index();
    let mut gauge = 0.0f64;
    let mut at = None;
    for (k, v) in fr.f_entries() {
        if k[..3].contains(&e) {
            let dev = (v - 1.0).norm();
            if dev > gauge {
                gauge = dev;
                at = Some(k);
            }
        }
    }
    report.record(
        "unit-gauge",
        gauge,
        tol.eps,
        match at {
            Some(k) => format!("max |F - 1| on unit entries, at {}", fmt_f(data, k)),
            None => "F entries with a unit label are 1".into(),
        },
    );
    report
}

fn pentagon_residual(data: &FusionData, fr: &FRSymbols) -> Result<(f64, usize, Option<[usize; 5]>)> {
    let m = data.m();
    let n = data.fusion_tensor();
    let mut worst = 0.0f64;
    let mut at = None;
    let mut count = 0usize;
    for a in 0..m {
        for b in 0..m {
            for f in (0..m).filter(|&x| n.get(a, b, x) > 0) {
                for c in 0..m {
                    for g in (0..m).filter(|&x| n.get(f, c, x) > 0) {
                        for d in 0..m {
                            for e in (0..m).filter(|&x| n.get(g, d, x) > 0) {
                                for l in (0..m).filter(|&x| n.get(c, d, x) > 0) {
                                    for k in (0..m).filter(|&x| n.get(b, l, x) > 0 && n.get(a, x, e) > 0) {
                                        let lhs = fr.std(f, c, d, e, g, l)? * fr.std(a, b, l, e, f, k)?;
                                        let mut rhs = Complex64::new(0.0, 0.0);
                                        for h in 0..m {
                                            rhs += fr.std(a, b, c, g, f, h)?
                                                * fr.std(a, h, d, e, g, k)?
                                                * fr.std(b, c, d, k, h, l)?;
                                        }
                                        count += 1;
                                        let dev = (lhs - rhs).norm();
                                        if dev > worst || dev.is_nan() {
                                            worst = dev;
                                            at = Some([a, b, c, d, e]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((worst, count, at))
}

/// Both hexagon equations, the ribbon relation
/// `R(a,b,c) R(b,a,c) = e^{2πi(h_c - h_a - h_b)}` and `|R| = 1`.
pub fn hexagon_check(data: &FusionData, fr: &FRSymbols, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    for (name, inverse) in [("hexagon", false), ("hexagon-inverse", true)] {
        match hexagon_residual(data, fr, inverse) {
            Ok((res, count)) => report.record(name, res, tol.eps, format!("{count} instances")),
            Err(err) => report.record(name, f64::INFINITY, tol.eps, describe(data, &err)),
        }
    }

    let mut ribbon = 0.0f64;
    let mut ribbon_at = None;
    let mut unitary = 0.0f64;
    let mut missing = None;
    for a in data.labels() {
        for b in data.labels() {
            for c in data.channels(a, b) {
                match (fr.r(a, b, c), fr.r(b, a, c)) {
                    (Ok(x), Ok(y)) => {
                        let want = phase(data.h(c) - data.h(a) - data.h(b));
                        let dev = (x * y - want).norm();
                        if dev > ribbon {
                            ribbon = dev;
                            ribbon_at = Some([a.index(), b.index(), c.index()]);
                        }
                        unitary = unitary.max((x.norm() - 1.0).abs());
                    }
                    (Err(err), _) | (_, Err(err)) => {
                        missing.get_or_insert(describe(data, &err));
                    }
                }
            }
        }
    }
    if let Some(msg) = missing {
        report.record("ribbon", f64::INFINITY, tol.eps, msg.clone());
        report.record("r-unitary", f64::INFINITY, tol.eps, msg);
    } else {
        report.record(
            "ribbon",
            ribbon,
            tol.eps,
            match ribbon_at {
                Some(k) if ribbon > 0.0 => format!("worst at {}", fmt_r(data, k)),
                _ => "R(a,b,c) R(b,a,c) matches the twists".into(),
            },
        );
        report.record("r-unitary", unitary, tol.eps, "max ||R| - 1|");
    }
    report
}

fn hexagon_residual(data: &FusionData, fr: &FRSymbols, inverse: bool) -> Result<(f64, usize)> {
    let m = data.m();
    let n = data.fusion_tensor();
    // the reverse braiding on V_{ab}^c has component 1/R(b, a, c)
    let r = |a: usize, b: usize, c: usize| -> Result<Complex64> {
        if !inverse {
            return fr.r_or_zero(a, b, c);
        }
        let v = fr.r_or_zero(b, a, c)?;
        Ok(if v.norm() > 0.0 { v.inv() } else { v })
    };
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for a in 0..m {
        for c in 0..m {
            for e in (0..m).filter(|&x| n.get(c, a, x) > 0) {
                for b in 0..m {
                    for d in (0..m).filter(|&x| n.get(e, b, x) > 0) {
                        for g in (0..m).filter(|&x| n.get(c, b, x) > 0 && n.get(a, x, d) > 0) {
                            let lhs = r(c, a, e)? * fr.std(a, c, b, d, e, g)? * r(c, b, g)?;
                            let mut rhs = Complex64::new(0.0, 0.0);
                            for f in 0..m {
                                rhs += fr.std(c, a, b, d, e, f)? * r(c, f, d)? * fr.std(a, b, c, d, f, g)?;
                            }
                            count += 1;
                            let dev = (lhs - rhs).norm();
                            if dev > worst || dev.is_nan() {
                                worst = dev;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((worst, count))
}

/// `F(a, a', a, a, e, e)`, the scalar by which the zig-zag composite of
/// `a` acts.
pub fn rigidity_scalar(data: &FusionData, fr: &FRSymbols, a: Label) -> Result<Complex64> {
    let a = data.label(a.index())?;
    let e = data.unit().index();
    fr.f([a.index(), data.dual(a).index(), a.index(), a.index(), e, e])
}

/// Reports the smallest rigidity scalar, which must exceed `eps`.
pub fn verify_rigidity(data: &FusionData, fr: &FRSymbols, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mut min = f64::INFINITY;
    let mut at = data.unit();
    for a in data.labels() {
        match rigidity_scalar(data, fr, a) {
            Ok(v) if v.norm() < min => {
                min = v.norm();
                at = a;
            }
            Ok(_) => {}
            Err(err) => {
                report.record_lower_bound("rigidity", f64::NAN, tol.eps, describe(data, &err));
                return report;
            }
        }
    }
    report.record_lower_bound(
        "rigidity",
        min,
        tol.eps,
        format!("min |F(a,a',a,a,e,e)| = {min:.6e} at {}", data.name(at)),
    );
    report
}

/// Diagonal element of the squared braiding `(B^{(-1)})^2` on
/// `Y_{a e}^{a} ⊗ Y_{b' b}^{e}`: the block `P = F(a, b', b, a, ·, ·)` is
/// conjugated by the channel phases `e^{-2πi(h_c - h_a - h_{b'})}`.
pub fn monodromy_element(data: &FusionData, fr: &FRSymbols, a: Label, b: Label) -> Result<Complex64> {
    let a = data.label(a.index())?;
    let b = data.label(b.index())?;
    let e = data.unit();
    let bp = data.dual(b);
    let n = data.fusion_tensor();
    let (ai, bi, bpi) = (a.index(), b.index(), bp.index());
    let m = data.m();
    let sources: Vec<usize> = (0..m).filter(|&x| n.get(ai, x, ai) > 0 && n.get(bpi, bi, x) > 0).collect();
    let targets: Vec<usize> = (0..m).filter(|&x| n.get(x, bi, ai) > 0 && n.get(ai, bpi, x) > 0).collect();
    if sources.len() != targets.len() {
        return Err(Error::Shape(format!(
            "F block ({}, {}, {}, {}) is {}x{}",
            data.name(a),
            data.name(bp),
            data.name(b),
            data.name(a),
            sources.len(),
            targets.len()
        )));
    }
    let k = sources.len();
    let mut p = DMatrix::<Complex64>::zeros(k, k);
    for (i, &s) in sources.iter().enumerate() {
        for (j, &t) in targets.iter().enumerate() {
            p[(i, j)] = fr.f([ai, bpi, bi, ai, s, t])?;
        }
    }
    let p_inv = p.clone().try_inverse().ok_or_else(|| {
        Error::Singular(format!("F block ({}, {}, {}, {})", data.name(a), data.name(bp), data.name(b), data.name(a)))
    })?;
    let ie =
        sources.iter().position(|&x| x == e.index()).ok_or_else(|| Error::NotAdmissible("monodromy", vec![ai, bi]))?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, &c) in targets.iter().enumerate() {
        let ph = phase(-(data.h(Label::new(c)) - data.h(a) - data.h(bp)));
        sum += p[(ie, j)] * ph * p_inv[(j, ie)];
    }
    Ok(sum)
}

/// Elements of the symmetric group acting on fusion spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SigmaPerm {
    Identity,
    S12,
    S23,
    S13,
    S123,
    S132,
}

impl SigmaPerm {
    pub const ALL: [SigmaPerm; 6] =
        [SigmaPerm::Identity, SigmaPerm::S12, SigmaPerm::S23, SigmaPerm::S13, SigmaPerm::S123, SigmaPerm::S132];

    // generator steps, applied left to right; σ123 = σ12∘σ23
    fn steps(self) -> &'static [Gen] {
        use Gen::*;
        match self {
            SigmaPerm::Identity => &[],
            SigmaPerm::S12 => &[Swap],
            SigmaPerm::S123 => &[Cycle],
            SigmaPerm::S23 => &[Cycle, Swap],
            SigmaPerm::S132 => &[Cycle, Cycle],
            SigmaPerm::S13 => &[Swap, Cycle],
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Gen {
    Swap,
    Cycle,
}

/// The space `V_{a1 a2}^{a3}` written as the triple `(a1, a2, a3')`, on
/// which the generators act by plain permutation.
type Line = [Label; 3];

fn apply_gen(data: &FusionData, fr: &FRSymbols, g: Gen, line: Line) -> Result<(Complex64, Line)> {
    let [x1, x2, x3] = line;
    match g {
        Gen::Swap => {
            let c = data.dual(x3);
            let delta = data.h(c) - data.h(x1) - data.h(x2);
            let v = half_phase(delta) / fr.r(x1, x2, c)?;
            Ok((v, [x2, x1, x3]))
        }
        Gen::Cycle => Ok((Complex64::new(1.0, 0.0), [x3, x1, x2])),
    }
}

fn to_line(data: &FusionData, a1: Label, a2: Label, a3: Label) -> Line {
    [a1, a2, data.dual(a3)]
}

fn from_line(data: &FusionData, l: Line) -> (Label, Label, Label) {
    (l[0], l[1], data.dual(l[2]))
}

fn run_word(data: &FusionData, fr: &FRSymbols, perms: &[SigmaPerm], mut line: Line) -> Result<(Complex64, Line)> {
    let mut acc = Complex64::new(1.0, 0.0);
    for p in perms {
        for &g in p.steps() {
            let (v, next) = apply_gen(data, fr, g, line)?;
            acc *= v;
            line = next;
        }
    }
    Ok((acc, line))
}

/// Space reached from `V_{a1 a2}^{a3}` under `perm`.
pub fn sigma_image(data: &FusionData, perm: SigmaPerm, a1: Label, a2: Label, a3: Label) -> (Label, Label, Label) {
    let mut line = to_line(data, a1, a2, a3);
    for &g in perm.steps() {
        let [x1, x2, x3] = line;
        line = match g {
            Gen::Swap => [x2, x1, x3],
            Gen::Cycle => [x3, x1, x2],
        };
    }
    from_line(data, line)
}

/// Scalar by which the chosen basis of `V_{a1 a2}^{a3}` maps to the chosen
/// basis of its image under `perm`.
///
/// σ12 contributes `e^{πiΔ}/R(a1, a2, a3)` with `Δ = h_{a3} - h_{a1} - h_{a2}`;
/// the bases are adapted so that σ12∘σ23 acts with phase 1.
pub fn sigma_phase(
    data: &FusionData,
    fr: &FRSymbols,
    perm: SigmaPerm,
    a1: Label,
    a2: Label,
    a3: Label,
) -> Result<Complex64> {
    for l in [a1, a2, a3] {
        data.label(l.index())?;
    }
    match data.n(a1, a2, a3) {
        0 => return Err(Error::NotAdmissible("sigma", vec![a1.index(), a2.index(), a3.index()])),
        1 => {}
        k => return Err(Error::NotMultiplicityFree([a1.index(), a2.index(), a3.index()], k)),
    }
    Ok(run_word(data, fr, &[perm], to_line(data, a1, a2, a3))?.0)
}

/// Which Moore–Seiberg identity [`ms_identity_check`] evaluates.
///
/// Both read σ123 as a unit phase, which holds in σ-adapted bases: vertex
/// gauges must give `V_{ab}^c` the same phase as its rotations
/// `V_{bc'}^{a'}` and `V_{c'a}^{b'}`. Pentagon, hexagon and the S
/// reconstruction are invariant under arbitrary vertex gauges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsIdentity {
    /// `F · σ123 · F = N · F(a2, a2', a2, a2, e, e)`.
    SigmaRigidity,
    /// `Σ_{a4} S_{a1}^{a4} M(a4, a2) (S^{-1})_{a4}^{a3}` equals the left side
    /// of [`MsIdentity::SigmaRigidity`].
    MonodromyConjugation,
}

/// Left side of the σ123 identity for `(a1, a2, a3)`.
fn sigma_rigidity_lhs(data: &FusionData, fr: &FRSymbols, a1: Label, a2: Label, a3: Label) -> Result<Complex64> {
    let e = data.unit();
    let a1p = data.dual(a1);
    let a3p = data.dual(a3);
    if data.n(a1, a2, a3) == 0 || data.n(a1p, a3, a2) == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let f1 = fr.f([a2.index(), a3p.index(), a3.index(), a2.index(), e.index(), a1p.index()])?;
    let sigma = sigma_phase(data, fr, SigmaPerm::S123, a2, a3p, a1p)?;
    let f2 = fr.f([a1p.index(), a1.index(), a2.index(), a2.index(), a3.index(), e.index()])?;
    Ok(f1 * sigma * f2)
}

pub fn ms_identity_check(
    data: &FusionData,
    fr: &FRSymbols,
    s: &SMatrix,
    which: MsIdentity,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if !data.is_multiplicity_free() {
        return Err(Error::Unsupported("identities need multiplicity-free data".into()));
    }
    let labels: Vec<Label> = data.labels().collect();
    let rig: Vec<Complex64> = labels.iter().map(|&a| rigidity_scalar(data, fr, a)).collect::<Result<_>>()?;
    let mut report = VerificationReport::new();
    match which {
        MsIdentity::SigmaRigidity => {
            let mut worst = 0.0f64;
            let mut rounding = 0.0f64;
            for &a1 in &labels {
                for &a2 in &labels {
                    for &a3 in &labels {
                        let lhs = sigma_rigidity_lhs(data, fr, a1, a2, a3)?;
                        let n = data.n(a1, a2, a3) as f64;
                        worst = worst.max((lhs - n * rig[a2.index()]).norm());
                        let ratio = lhs / rig[a2.index()];
                        rounding = rounding.max((ratio - ratio.re.round()).norm() + (ratio.re.round() - n).abs());
                    }
                }
            }
            report.record("ms1", worst, tol.eps, "max |F sigma123 F - N F(a2,a2',a2,a2,e,e)|");
            report.record("rounds-to-N", rounding, tol.eps, "left side over the rigidity scalar rounds to N");
            report.extend(sigma_relations(data, fr, tol)?);
        }
        MsIdentity::MonodromyConjugation => {
            let s_inv = s.inverse(tol.eps_det)?;
            let mono: Vec<Vec<Complex64>> = labels
                .iter()
                .map(|&x| labels.iter().map(|&y| monodromy_element(data, fr, x, y)).collect())
                .collect::<Result<_>>()?;
            let e = data.unit();
            let mut worst = 0.0f64;
            let mut eig = 0.0f64;
            for &a2 in &labels {
                for &a4 in &labels {
                    let se = s.get(e, a4);
                    let dev = if se.norm() <= tol.eps {
                        f64::INFINITY
                    } else {
                        (mono[a4.index()][a2.index()] / rig[a2.index()] - s.get(a2, a4) / se).norm()
                    };
                    eig = eig.max(dev);
                }
                for &a1 in &labels {
                    for &a3 in &labels {
                        let lhs: Complex64 = labels
                            .iter()
                            .map(|&a4| s.get(a1, a4) * mono[a4.index()][a2.index()] * s_inv[(a4.index(), a3.index())])
                            .sum();
                        let rhs = sigma_rigidity_lhs(data, fr, a1, a2, a3)?;
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
            report.record("ms2", worst, tol.eps, "max |S M S^-1 - F sigma123 F|");
            report.record("monodromy-eigenvalues", eig, tol.eps, "max |M(x,a)/F(a,a',a,a,e,e) - S_a^x/S_e^x|");
        }
    }
    Ok(report)
}

/// Group relations and basis normalizations of the σ action.
pub fn sigma_relations(data: &FusionData, fr: &FRSymbols, tol: &ToleranceConfig) -> Result<VerificationReport> {
    use SigmaPerm::*;
    let words: [(&str, Vec<SigmaPerm>); 3] = [
        ("s3-s23-squared", vec![S23, S23]),
        ("s3-s12-squared", vec![S12, S12]),
        ("s3-braid", vec![S23, S12, S23, S12, S23, S12]),
    ];
    let mut report = VerificationReport::new();
    for (name, word) in words {
        let mut worst = 0.0f64;
        for a1 in data.labels() {
            for a2 in data.labels() {
                for a3 in data.channels(a1, a2) {
                    let start = to_line(data, a1, a2, a3);
                    let (v, end) = run_word(data, fr, &word, start)?;
                    let dev = if end == start { (v - 1.0).norm() } else { f64::INFINITY };
                    worst = worst.max(dev);
                }
            }
        }
        report.record(name, worst, tol.eps, "phase around the relation on every line");
    }
    let e = data.unit();
    let mut worst = 0.0f64;
    for a in data.labels() {
        let ap = data.dual(a);
        for (perm, x) in [(S12, (e, a, a)), (S23, (a, e, a)), (S12, (a, ap, e))] {
            worst = worst.max((sigma_phase(data, fr, perm, x.0, x.1, x.2)? - 1.0).norm());
        }
    }
    report.record("sigma-basis", worst, tol.eps, "distinguished unit bases are sigma-adapted");
    Ok(report)
}

/// `S_{a1}^{a2} = S_e^e · M(a2, a1) / (F_{a1} F_{a2})` with `F_a` the
/// rigidity scalar.
pub fn s_from_fr(data: &FusionData, fr: &FRSymbols, s_ee: Complex64, tol: &ToleranceConfig) -> Result<SMatrix> {
    let labels: Vec<Label> = data.labels().collect();
    let mut rig = Vec::with_capacity(labels.len());
    for &a in &labels {
        let v = rigidity_scalar(data, fr, a)?;
        if v.norm() <= tol.eps {
            return Err(Error::NearZero(format!("rigidity scalar of {} is {:.3e}", data.name(a), v.norm())));
        }
        rig.push(v);
    }
    let m = labels.len();
    let mut out = DMatrix::<Complex64>::zeros(m, m);
    for &a1 in &labels {
        for &a2 in &labels {
            out[(a1.index(), a2.index())] =
                s_ee * monodromy_element(data, fr, a2, a1)? / (rig[a1.index()] * rig[a2.index()]);
        }
    }
    SMatrix::new(out)
}

/// Compares [`s_from_fr`] (with `S_e^e` taken from `s`) against `s`.
pub fn verify_s_from_fr(data: &FusionData, fr: &FRSymbols, s: &SMatrix, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new();
    let e = data.unit();
    match s_from_fr(data, fr, s.get(e, e), tol) {
        Ok(rec) if rec.m() == s.m() => {
            let dev = (rec.matrix() - s.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            report.record("s-from-fr", dev, tol.eps, "max entrywise |S(F,R) - S|");
        }
        Ok(_) => report.record("s-from-fr", f64::INFINITY, tol.eps, "S dimensions do not match labels"),
        Err(err) => report.record("s-from-fr", f64::INFINITY, tol.eps, describe(data, &err)),
    }
    report
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    /// Every admissible F set to 1 and every admissible R set to 1.
    fn ones(data: &FusionData) -> (BTreeMap<[usize; 6], Complex64>, BTreeMap<[usize; 3], Complex64>) {
        let f = admissible_f_indices(data.fusion_tensor()).into_iter().map(|k| (k, c(1.0))).collect();
        let mut rr = BTreeMap::new();
        for a in data.labels() {
            for b in data.labels() {
                for x in data.channels(a, b) {
                    rr.insert([a.index(), b.index(), x.index()], c(1.0));
                }
            }
        }
        (f, rr)
    }

    pub(crate) fn trivial() -> (FusionData, FRSymbols, SMatrix) {
        let mut n = FusionTensor::zeros(1);
        n.set(0, 0, 0, 1);
        let data =
            FusionData::new(vec!["1".into()], Label::new(0), vec![Label::new(0)], vec![r(0, 1)], r(0, 1), n).unwrap();
        let (f, rr) = ones(&data);
        let fr = FRSymbols::new(&data, f, rr).unwrap();
        (data, fr, SMatrix::from_real_rows(&[vec![1.0]]).unwrap())
    }

    pub(crate) fn fibonacci() -> (FusionData, FRSymbols, SMatrix) {
        let mut n = FusionTensor::zeros(2);
        n.set(0, 0, 0, 1);
        n.set_symmetric(0, 1, 1, 1);
        n.set(1, 1, 0, 1);
        n.set(1, 1, 1, 1);
        let data = FusionData::new(
            vec!["1".into(), "tau".into()],
            Label::new(0),
            vec![Label::new(0), Label::new(1)],
            vec![r(0, 1), r(2, 5)],
            r(14, 5),
            n,
        )
        .unwrap();
        let (mut f, mut rr) = ones(&data);
        let p = phi();
        // stored indices: (a5, a6) = (bc channel, ab channel)
        f.insert([1, 1, 1, 1, 0, 0], c(1.0 / p));
        f.insert([1, 1, 1, 1, 0, 1], c(1.0 / p.sqrt()));
        f.insert([1, 1, 1, 1, 1, 0], c(1.0 / p.sqrt()));
        f.insert([1, 1, 1, 1, 1, 1], c(-1.0 / p));
        rr.insert([1, 1, 0], phase(r(-2, 5)));
        rr.insert([1, 1, 1], phase(r(3, 10)));
        let fr = FRSymbols::new(&data, f, rr).unwrap();
        let s0 = 1.0 / (2.0 + p).sqrt();
        let s = SMatrix::from_real_rows(&[vec![s0, p * s0], vec![p * s0, -s0]]).unwrap();
        (data, fr, s)
    }

    pub(crate) fn ising() -> (FusionData, FRSymbols, SMatrix) {
        let mut n = FusionTensor::zeros(3);
        for a in 0..3 {
            n.set_symmetric(0, a, a, 1);
        }
        n.set(1, 1, 0, 1);
        n.set(1, 1, 2, 1);
        n.set_symmetric(1, 2, 1, 1);
        n.set(2, 2, 0, 1);
        let data = FusionData::new(
            vec!["1".into(), "sigma".into(), "psi".into()],
            Label::new(0),
            (0..3).map(Label::new).collect(),
            vec![r(0, 1), r(1, 16), r(1, 2)],
            r(1, 2),
            n,
        )
        .unwrap();
        let (mut f, mut rr) = ones(&data);
        let q = std::f64::consts::FRAC_1_SQRT_2;
        for x in [0, 2] {
            for y in [0, 2] {
                f.insert([1, 1, 1, 1, x, y], c(if x == 2 && y == 2 { -q } else { q }));
            }
        }
        f.insert([1, 2, 1, 2, 1, 1], c(-1.0));
        f.insert([2, 1, 2, 1, 1, 1], c(-1.0));
        rr.insert([1, 1, 0], phase(r(-1, 16)));
        rr.insert([1, 1, 2], phase(r(3, 16)));
        rr.insert([1, 2, 1], phase(r(-1, 4)));
        rr.insert([2, 1, 1], phase(r(-1, 4)));
        rr.insert([2, 2, 0], c(-1.0));
        let fr = FRSymbols::new(&data, f, rr).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        let s = SMatrix::from_real_rows(&[
            vec![0.5, s2 / 2.0, 0.5],
            vec![s2 / 2.0, 0.0, -s2 / 2.0],
            vec![0.5, -s2 / 2.0, 0.5],
        ])
        .unwrap();
        (data, fr, s)
    }

    fn all() -> [(FusionData, FRSymbols, SMatrix); 3] {
        [trivial(), fibonacci(), ising()]
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        let (data, fr, _) = fibonacci();
        let mut f: BTreeMap<_, _> = fr.f_entries().collect();
        f.insert([0, 0, 0, 1, 0, 0], c(1.0));
        let rr: BTreeMap<_, _> = fr.r_entries().collect();
        assert!(matches!(FRSymbols::new(&data, f, rr.clone()), Err(Error::NotAdmissible("F", _))));

        let mut rr2 = rr.clone();
        rr2.insert([0, 0, 1], c(1.0));
        let f: BTreeMap<_, _> = fr.f_entries().collect();
        assert!(matches!(FRSymbols::new(&data, f.clone(), rr2), Err(Error::NotAdmissible("R", _))));

        let mut n = data.fusion_tensor().clone();
        n.set(1, 1, 1, 2);
        let doubled = FusionData::new(
            data.names().to_vec(),
            data.unit(),
            data.duals().to_vec(),
            vec![r(0, 1), r(2, 5)],
            r(14, 5),
            n,
        )
        .unwrap();
        assert!(matches!(
            FRSymbols::new(&doubled, BTreeMap::new(), BTreeMap::new()),
            Err(Error::NotMultiplicityFree([1, 1, 1], 2))
        ));
    }

    #[test]
    fn missing_entries_error_on_access() {
        let (data, _, _) = fibonacci();
        let fr = FRSymbols::new(&data, BTreeMap::new(), BTreeMap::new()).unwrap();
        assert!(matches!(fr.f([1, 1, 1, 1, 0, 0]), Err(Error::MissingF(_))));
        assert!(matches!(fr.r(Label::new(1), Label::new(1), Label::new(0)), Err(Error::MissingR(_))));
        assert_eq!(fr.missing_f().len(), admissible_f_indices(data.fusion_tensor()).len());
        let report = pentagon_check(&data, &fr, &tol());
        assert!(report.get("pentagon").unwrap().detail.contains("incomplete data"));
        assert!(!report.all_passed());
    }

    #[test]
    fn admissible_counts() {
        let (data, fr, _) = fibonacci();
        assert_eq!(admissible_f_indices(data.fusion_tensor()).len(), 15);
        assert!(fr.missing_f().is_empty() && fr.missing_r().is_empty());
        let (data, fr, _) = ising();
        assert!(fr.missing_f().is_empty() && fr.missing_r().is_empty());
        assert_eq!(admissible_f_indices(data.fusion_tensor()).len(), 36);
    }

    #[test]
    fn pentagon_on_examples() {
        for (data, fr, _) in all() {
            let report = pentagon_check(&data, &fr, &tol());
            assert!(report.all_passed(), "{report}");
            assert!(report.get("pentagon").unwrap().residual < 1e-12);
        }
        let (data, fr, _) = trivial();
        assert_eq!(pentagon_check(&data, &fr, &tol()).get("pentagon").unwrap().residual, 0.0);
    }

    #[test]
    fn negated_fibonacci_block_breaks_pentagon() {
        let (data, fr, _) = fibonacci();
        let bad = fr.map_f(|k, v| if k[..4] == [1, 1, 1, 1] { -v } else { v });
        assert!(!pentagon_check(&data, &bad, &tol()).get("pentagon").unwrap().passed);
    }

    #[test]
    fn negated_ising_block_is_caught_by_hexagon() {
        let (data, fr, s) = ising();
        let bad = fr.map_f(|k, v| if k[..4] == [1, 1, 1, 1] { -v } else { v });
        assert!(pentagon_check(&data, &bad, &tol()).get("pentagon").unwrap().passed);
        assert!(!hexagon_check(&data, &bad, &tol()).get("hexagon").unwrap().passed);
        let ms2 = ms_identity_check(&data, &bad, &s, MsIdentity::MonodromyConjugation, &tol()).unwrap();
        assert!(!ms2.get("ms2").unwrap().passed);
        assert!(!verify_s_from_fr(&data, &bad, &s, &tol()).all_passed());
    }

    #[test]
    fn hexagon_on_examples() {
        for (data, fr, _) in all() {
            let report = hexagon_check(&data, &fr, &tol());
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn conjugated_r_fails_ribbon() {
        let (data, fr, _) = fibonacci();
        let bad = fr.map_r(|_, v| v.conj());
        let report = hexagon_check(&data, &bad, &tol());
        assert!(!report.get("ribbon").unwrap().passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn rigidity_values() {
        let (data, fr, _) = trivial();
        assert_eq!(rigidity_scalar(&data, &fr, Label::new(0)).unwrap(), c(1.0));
        let (data, fr, _) = fibonacci();
        assert!((rigidity_scalar(&data, &fr, Label::new(1)).unwrap() - 1.0 / phi()).norm() < 1e-15);
        let (data, fr, _) = ising();
        let v = rigidity_scalar(&data, &fr, Label::new(1)).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).norm() < 1e-15);
        for (data, fr, _) in all() {
            assert!(verify_rigidity(&data, &fr, &tol()).all_passed());
        }
    }

    #[test]
    fn monodromy_values() {
        for (data, fr, _) in all() {
            for a in data.labels() {
                let x = monodromy_element(&data, &fr, a, data.unit()).unwrap();
                let y = monodromy_element(&data, &fr, data.unit(), a).unwrap();
                assert!((x - 1.0).norm() < 1e-14 && (y - 1.0).norm() < 1e-14);
            }
        }
        let (data, fr, _) = fibonacci();
        let t = Label::new(1);
        let v = monodromy_element(&data, &fr, t, t).unwrap();
        assert!((v + 1.0 / (phi() * phi())).norm() < 1e-14);
        assert!((v.re + 0.381_97).abs() < 1e-5);
        let (data, fr, _) = ising();
        let sigma = Label::new(1);
        assert!(monodromy_element(&data, &fr, sigma, sigma).unwrap().norm() < 1e-15);
    }

    #[test]
    fn sigma_phase_basics() {
        let (data, fr, _) = fibonacci();
        let (one, t) = (Label::new(0), Label::new(1));
        for perm in SigmaPerm::ALL {
            assert!(sigma_phase(&data, &fr, perm, t, t, t).unwrap().norm() > 0.0);
        }
        assert_eq!(sigma_phase(&data, &fr, SigmaPerm::Identity, t, t, one).unwrap(), c(1.0));
        // σ12 on (τ, τ, 1): the Δ prefactor e^{-4πi/5} divided by R(τ,τ,1) = e^{-4πi/5}
        let v = sigma_phase(&data, &fr, SigmaPerm::S12, t, t, one).unwrap();
        assert!((half_phase(r(-4, 5)) - phase(r(-2, 5))).norm() < 1e-15);
        assert!((v - 1.0).norm() < 1e-15);
        assert!(matches!(sigma_phase(&data, &fr, SigmaPerm::S12, one, t, one), Err(Error::NotAdmissible(..))));
        assert_eq!(sigma_image(&data, SigmaPerm::S12, one, t, t), (t, one, t));
        assert_eq!(sigma_image(&data, SigmaPerm::S23, t, one, t), (t, t, one));
    }

    #[test]
    fn sigma_relations_hold() {
        for (data, fr, _) in all() {
            let report = sigma_relations(&data, &fr, &tol()).unwrap();
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn sigma_rigidity_identity() {
        for (data, fr, s) in all() {
            let report = ms_identity_check(&data, &fr, &s, MsIdentity::SigmaRigidity, &tol()).unwrap();
            assert!(report.all_passed(), "{report}");
        }
        let (data, fr, _) = fibonacci();
        let t = Label::new(1);
        let lhs = sigma_rigidity_lhs(&data, &fr, t, t, t).unwrap();
        assert!((lhs - 1.0 / phi()).norm() < 1e-12);
    }

    #[test]
    fn monodromy_conjugation_identity() {
        for (data, fr, s) in all() {
            let report = ms_identity_check(&data, &fr, &s, MsIdentity::MonodromyConjugation, &tol()).unwrap();
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn s_reconstruction() {
        let (data, fr, s) = trivial();
        let rec = s_from_fr(&data, &fr, c(1.0), &tol()).unwrap();
        assert_eq!(rec.get(Label::new(0), Label::new(0)), c(1.0));

        let (data, fr, s_fib) = fibonacci();
        let s0 = 1.0 / (2.0 + phi()).sqrt();
        let rec = s_from_fr(&data, &fr, c(s0), &tol()).unwrap();
        let t = Label::new(1);
        assert!((rec.get(t, t) + s0).norm() < 1e-12);

        for (data, fr, s) in [(data, fr, s_fib), ising()] {
            let report = verify_s_from_fr(&data, &fr, &s, &tol());
            assert!(report.all_passed(), "{report}");
        }
        let _ = s;
    }

    #[test]
    fn zero_rigidity_is_an_error() {
        let (data, fr, _) = ising();
        let bad = fr.map_f(|k, v| if k == [2, 2, 2, 2, 0, 0] { c(0.0) } else { v });
        assert!(matches!(s_from_fr(&data, &bad, c(0.5), &tol()), Err(Error::NearZero(_))));
    }
}
