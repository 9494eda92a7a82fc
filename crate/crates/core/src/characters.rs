//! Truncated q-series of vacuum characters and their behaviour under
//! `τ ↦ -1/τ` and `τ ↦ τ + 1`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::data::{FusionData, Label, SMatrix};
use crate::error::{Error, Result};
use crate::fusion::t_matrix;
use crate::report::VerificationReport;

/// Residual bound for `χ(-1/τ) = S χ(τ)`.
pub const MODULAR_S_TOL: f64 = 1e-8;
/// Residual bound for `χ(τ + 1) = T χ(τ)`.
pub const T_CONSISTENCY_TOL: f64 = 1e-10;
/// Both `τ` and `-1/τ` must have at least this imaginary part.
pub const MIN_IM_TAU: f64 = 0.5;
pub const DEFAULT_ORDER: usize = 400;
pub const DEFAULT_TAU: Complex64 = Complex64::new(0.0, 2.0);

/// `q^alpha Σ_n coeffs[n] q^n`, truncated after `coeffs.len()` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCharacter {
    pub alpha: Rational64,
    pub coeffs: Vec<BigInt>,
}

impl QCharacter {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// Closed-form character families shipped with catalog entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterGenerator {
    /// Labels ordered `(1, σ, ψ)`.
    Ising,
    /// Labels `a = 2j = 0, …, k`.
    Su2 { k: u32 },
}

impl CharacterGenerator {
    pub fn label_count(&self) -> usize {
        match self {
            CharacterGenerator::Ising => 3,
            CharacterGenerator::Su2 { k } => *k as usize + 1,
        }
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Coefficients of `∏_{n≥1} (1 + x^{step·n - shift})` up to `x^{len-1}`.
fn plus_product(len: usize, step: usize, shift: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); len];
    if len > 0 {
        a[0] = BigInt::one();
    }
    let mut n = 1;
    while step * n - shift < len {
        let p = step * n - shift;
        for i in (p..len).rev() {
            let (lo, hi) = a.split_at_mut(i);
            hi[0] += &lo[i - p];
        }
        n += 1;
    }
    a
}

/// Coefficients of `∏_{m≥1} (1 - q^m)^{-3}`.
fn inverse_eta_cubed(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    if len > 0 {
        p[0] = BigInt::one();
    }
    for _ in 0..3 {
        for n in 1..len {
            for i in n..len {
                let (lo, hi) = p.split_at_mut(i);
                hi[0] += &lo[i - n];
            }
        }
    }
    p
}

/// The order-`order` truncation of the character of label `a`.
pub fn character_series(gen: &CharacterGenerator, a: Label, order: usize) -> Result<QCharacter> {
    if order == 0 {
        return Err(Error::Shape("truncation order must be positive".into()));
    }
    if a.index() >= gen.label_count() {
        return Err(Error::LabelOutOfRange { index: a.index(), m: gen.label_count() });
    }
    match *gen {
        CharacterGenerator::Ising => {
            let half = plus_product(2 * order, 2, 1);
            let (alpha, coeffs) = match a.index() {
                0 => (Rational64::new(-1, 48), (0..order).map(|i| half[2 * i].clone()).collect()),
                1 => (Rational64::new(1, 24), plus_product(order, 1, 0)),
                _ => (Rational64::new(23, 48), (0..order).map(|i| half[2 * i + 1].clone()).collect()),
            };
            Ok(QCharacter { alpha, coeffs })
        }
        CharacterGenerator::Su2 { k } => {
            let k = k as i64;
            let lam = a.index() as i64 + 1;
            let mut num = vec![0i64; order];
            let bound = order as i64;
            for n in -bound..=bound {
                let e = n * lam + n * n * (k + 2);
                if (0..bound).contains(&e) {
                    num[e as usize] += lam + 2 * n * (k + 2);
                }
            }
            let num = ints(&num);
            let p = inverse_eta_cubed(order);
            let coeffs = (0..order)
                .map(|i| (0..=i).filter(|&j| !num[j].is_zero()).map(|j| &num[j] * &p[i - j]).sum::<BigInt>())
                .collect();
            let alpha = Rational64::new(lam * lam, 4 * (k + 2)) - Rational64::new(1, 8);
            Ok(QCharacter { alpha, coeffs })
        }
    }
}

/// `Σ_n coeffs[n] e^{2πiτ(alpha + n)}`.
pub fn eval_character(chi: &QCharacter, tau: Complex64) -> Result<Complex64> {
    if tau.im.is_nan() || tau.im <= 0.0 {
        return Err(Error::Tau(format!("Im tau = {} is not positive", tau.im)));
    }
    let alpha = *chi.alpha.numer() as f64 / *chi.alpha.denom() as f64;
    let two_pi_i_tau = Complex64::new(0.0, std::f64::consts::TAU) * tau;
    Ok(chi
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| c.to_f64().unwrap_or(f64::INFINITY) * (two_pi_i_tau * (alpha + n as f64)).exp())
        .sum())
}

fn all_series(gen: &CharacterGenerator, order: usize) -> Result<Vec<QCharacter>> {
    (0..gen.label_count()).map(|a| character_series(gen, Label::new(a), order)).collect()
}

/// Rejects `τ` unless both `τ` and `-1/τ` have imaginary part at least
/// [`MIN_IM_TAU`]; returns `-1/τ`.
pub fn check_tau(tau: Complex64) -> Result<Complex64> {
    let dual = -tau.inv();
    if !(tau.im >= MIN_IM_TAU && dual.im >= MIN_IM_TAU) {
        return Err(Error::Tau(format!(
            "need Im tau >= {MIN_IM_TAU} and Im(-1/tau) >= {MIN_IM_TAU}, got {:.4} and {:.4}",
            tau.im, dual.im
        )));
    }
    Ok(dual)
}

/// Reports `max_a |χ_a(-1/τ) - Σ_b S_a^b χ_b(τ)|` and the integrality of the
/// coefficients.
pub fn verify_modular_s(
    gen: &CharacterGenerator,
    s: &SMatrix,
    tau: Complex64,
    order: usize,
) -> Result<VerificationReport> {
    let dual = check_tau(tau)?;
    if s.m() != gen.label_count() {
        return Err(Error::Shape(format!("S is {0}x{0}, characters have {1} labels", s.m(), gen.label_count())));
    }
    let chars = all_series(gen, order)?;
    let at_tau: Vec<Complex64> = chars.iter().map(|c| eval_character(c, tau)).collect::<Result<_>>()?;
    let at_dual: Vec<Complex64> = chars.iter().map(|c| eval_character(c, dual)).collect::<Result<_>>()?;
    let m = s.m();
    let mut worst = 0.0f64;
    for (a, lhs) in at_dual.iter().enumerate() {
        let rhs: Complex64 = (0..m).map(|b| s.get(Label::new(a), Label::new(b)) * at_tau[b]).sum();
        worst = worst.max((lhs - rhs).norm());
    }
    let mut report = VerificationReport::new();
    report.record("modular-s", worst, MODULAR_S_TOL, format!("tau = {}{:+}i, order {order}", tau.re, tau.im));
    let sane = chars.iter().all(|c| c.coeffs[0] >= BigInt::one() && c.coeffs.iter().all(|x| !x.is_negative()));
    report.record_bool("coefficients", sane, "leading coefficient >= 1, all nonnegative");
    Ok(report)
}

/// Checks that every leading exponent is `h_a - c/24` and that
/// `χ_a(τ + 1) = T_a χ_a(τ)`.
pub fn verify_t_consistency(
    gen: &CharacterGenerator,
    data: &FusionData,
    tau: Complex64,
    order: usize,
) -> Result<VerificationReport> {
    if tau.im.is_nan() || tau.im <= 0.0 {
        return Err(Error::Tau(format!("Im tau = {} is not positive", tau.im)));
    }
    if data.m() != gen.label_count() {
        return Err(Error::Shape(format!("{} labels, characters have {}", data.m(), gen.label_count())));
    }
    let chars = all_series(gen, order)?;
    let t = t_matrix(data);
    let shift = data.c() / Rational64::from_integer(24);
    let mut worst = 0.0f64;
    let mut exponents_ok = true;
    for (a, chi) in chars.iter().enumerate() {
        exponents_ok &= chi.alpha == data.h(Label::new(a)) - shift;
        let moved = eval_character(chi, tau + 1.0)?;
        let here = eval_character(chi, tau)?;
        worst = worst.max((moved - t.diagonal[a] * here).norm());
    }
    let mut report = VerificationReport::new();
    report.record_bool("leading-exponent", exponents_ok, "alpha_a = h_a - c/24 exactly");
    report.record("t-consistency", worst, T_CONSISTENCY_TOL, "max |chi(tau+1) - T chi(tau)|");
    Ok(report)
}
