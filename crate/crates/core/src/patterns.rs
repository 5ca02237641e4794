//! Interleaved quasilinear solutions of the three-term recurrence.
//!
//! Each [`TemplateId`] describes a family of initial conditions whose
//! continuation, for a while (or forever), splits into residue classes that
//! are constant, arithmetic, or doubling. A [`LemmaInstance`] binds the
//! template's parameters and answers term queries at arbitrary-precision
//! indices without generating the sequence.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrence::{InitialConditions, Run};

/// Largest doubling exponent we are willing to materialize.
pub const MAX_EXPONENT: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TemplateId {
    #[serde(rename = "7cyc")]
    SevenCyc,
    #[serde(rename = "2cyc")]
    TwoCyc,
    #[serde(rename = "5cyc")]
    FiveCyc,
    #[serde(rename = "16cyc1")]
    SixteenCyc1,
    #[serde(rename = "16cyc2")]
    SixteenCyc2,
}

impl TemplateId {
    pub const ALL: [TemplateId; 5] = [
        TemplateId::SevenCyc,
        TemplateId::TwoCyc,
        TemplateId::FiveCyc,
        TemplateId::SixteenCyc1,
        TemplateId::SixteenCyc2,
    ];

    /// Order in which `match_suffix` tries the templates.
    pub const PRIORITY: [TemplateId; 5] = [
        TemplateId::TwoCyc,
        TemplateId::SixteenCyc2,
        TemplateId::SixteenCyc1,
        TemplateId::FiveCyc,
        TemplateId::SevenCyc,
    ];

    pub fn period(self) -> u32 {
        match self {
            TemplateId::SevenCyc => 7,
            TemplateId::TwoCyc => 2,
            TemplateId::FiveCyc => 5,
            TemplateId::SixteenCyc1 | TemplateId::SixteenCyc2 => 16,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::SevenCyc => "7cyc",
            TemplateId::TwoCyc => "2cyc",
            TemplateId::FiveCyc => "5cyc",
            TemplateId::SixteenCyc1 => "16cyc1",
            TemplateId::SixteenCyc2 => "16cyc2",
        }
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            TemplateId::SevenCyc => &["K", "c", "gamma", "lambda", "mu"],
            TemplateId::TwoCyc => &["K", "M"],
            TemplateId::FiveCyc => &["K", "mu"],
            TemplateId::SixteenCyc1 => &["K", "lambda", "mu1", "mu2", "gamma"],
            TemplateId::SixteenCyc2 => {
                &["K", "lambda", "mu1", "mu2", "gamma1", "gamma2", "gamma3"]
            }
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown lemma template `{s}`")))
    }
}

/// Closed form of one residue class as a function of the block counter `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternEntry {
    Const(BigInt),
    /// `p·k + q`
    AffineK(BigInt, BigInt),
    /// `m·2^k + shift`
    Geometric(BigInt, BigInt),
    /// `m·2^(k−1) + shift`
    GeometricHalf(BigInt, BigInt),
}

impl PatternEntry {
    pub fn eval(&self, k: &BigInt) -> Result<BigInt> {
        match self {
            PatternEntry::Const(c) => Ok(c.clone()),
            PatternEntry::AffineK(p, q) => Ok(p * k + q),
            PatternEntry::Geometric(m, s) => Ok((m << exponent(k)?) + s),
            PatternEntry::GeometricHalf(m, s) => {
                let e: BigInt = k - 1;
                if e.is_negative() {
                    // only reachable for k = 0, which no template's range uses
                    let (q, r) = m.div_rem(&BigInt::from(2));
                    if !r.is_zero() {
                        return Err(Error::Invalid("half of an odd coefficient".into()));
                    }
                    return Ok(q + s);
                }
                Ok((m << exponent(&e)?) + s)
            }
        }
    }

    /// Like [`eval`](Self::eval), but doubling entries whose exponent is too
    /// large to expand are returned symbolically.
    pub fn eval_lazy(&self, k: &BigInt) -> LazyValue {
        let (m, s, e) = match self {
            PatternEntry::Geometric(m, s) => (m, s, k.clone()),
            PatternEntry::GeometricHalf(m, s) => (m, s, k - 1),
            _ => return LazyValue::Exact(self.eval(k).expect("non-doubling entries always evaluate")),
        };
        match exponent(&e) {
            Ok(x) if !e.is_negative() => LazyValue::Exact((m << x) + s),
            _ if e.is_negative() => match self.eval(k) {
                Ok(v) => LazyValue::Exact(v),
                Err(_) => LazyValue::Doubling { m: m.clone(), exponent: e, shift: s.clone() },
            },
            _ => LazyValue::Doubling { m: m.clone(), exponent: e, shift: s.clone() },
        }
    }

    fn konst(c: impl Into<BigInt>) -> Self {
        PatternEntry::Const(c.into())
    }
}

/// A term value that is either expanded or kept as `m·2^exponent + shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LazyValue {
    Exact(BigInt),
    Doubling { m: BigInt, exponent: BigInt, shift: BigInt },
}

impl LazyValue {
    pub fn exact(self) -> Result<BigInt> {
        match self {
            LazyValue::Exact(v) => Ok(v),
            LazyValue::Doubling { exponent, .. } => Err(Error::Invalid(format!(
                "doubling exponent {} bits long is too large to materialize",
                exponent.bits()
            ))),
        }
    }

    /// Exact sum. Two doubling values combine when their exponents differ
    /// by at most [`MAX_EXPONENT`]; anything else is refused.
    pub fn add(&self, other: &LazyValue) -> Result<LazyValue> {
        use LazyValue::*;
        Ok(match (self, other) {
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(a), Doubling { m, exponent, shift }) | (Doubling { m, exponent, shift }, Exact(a)) => {
                Doubling { m: m.clone(), exponent: exponent.clone(), shift: shift + a }
            }
            (
                Doubling { m: m1, exponent: e1, shift: s1 },
                Doubling { m: m2, exponent: e2, shift: s2 },
            ) => {
                let (lo, hi) = if e1 <= e2 { ((m1, e1), (m2, e2)) } else { ((m2, e2), (m1, e1)) };
                let gap = exponent(&(hi.1 - lo.1))?;
                let m = lo.0 + (hi.0 << gap);
                if m.is_zero() {
                    Exact(s1 + s2)
                } else {
                    Doubling { m, exponent: lo.1.clone(), shift: s1 + s2 }
                }
            }
        })
    }

    /// Compares with an exact integer when the answer is forced by
    /// magnitudes alone; `None` if it would need the expanded value.
    pub fn cmp_exact(&self, other: &BigInt) -> Option<Ordering> {
        match self {
            LazyValue::Exact(v) => Some(v.cmp(other)),
            LazyValue::Doubling { m, exponent, shift } => {
                if m.is_zero() {
                    return Some(shift.cmp(other));
                }
                // |m·2^e| ≥ 2^e > |shift| + |other| once e exceeds both bit lengths + 1
                let need = BigInt::from(shift.bits().max(other.bits()) + 1);
                if *exponent > need {
                    Some(if m.is_positive() { Ordering::Greater } else { Ordering::Less })
                } else {
                    None
                }
            }
        }
    }
}

fn exponent(k: &BigInt) -> Result<usize> {
    match k.to_u64() {
        Some(e) if e <= MAX_EXPONENT => Ok(e as usize),
        _ => Err(Error::Invalid(format!("doubling exponent {k} is too large to materialize"))),
    }
}

/// Bound parameters of one template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaParams {
    SevenCyc { k: BigInt, c: BigInt, gamma: u8, lambda: BigInt, mu: BigInt },
    TwoCyc { k: BigInt, m: BigInt },
    FiveCyc { k: BigInt, mu: BigInt },
    SixteenCyc1 { k: BigInt, lambda: BigInt, mu1: BigInt, mu2: BigInt, gamma: BigInt },
    SixteenCyc2 {
        k: BigInt,
        lambda: BigInt,
        mu1: BigInt,
        mu2: BigInt,
        gamma1: BigInt,
        gamma2: BigInt,
        gamma3: BigInt,
    },
}

/// `ν(γ)` for the period-7 template.
pub const SEVEN_CYC_NU: [i64; 7] = [-2, -2, 2, 1, 0, -1, -2];
pub const SEVEN_CYC_LAMBDA_MIN: [i64; 7] = [2, 1, 4, 3, 2, 1, 0];
pub const SEVEN_CYC_MU_MIN: [i64; 7] = [0, 0, 3, 2, 1, 0, -1];

/// Violated hypothesis, rendered as the inequality that fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl LemmaParams {
    pub fn template(&self) -> TemplateId {
        match self {
            LemmaParams::SevenCyc { .. } => TemplateId::SevenCyc,
            LemmaParams::TwoCyc { .. } => TemplateId::TwoCyc,
            LemmaParams::FiveCyc { .. } => TemplateId::FiveCyc,
            LemmaParams::SixteenCyc1 { .. } => TemplateId::SixteenCyc1,
            LemmaParams::SixteenCyc2 { .. } => TemplateId::SixteenCyc2,
        }
    }

    /// The `K` parameter every template has.
    pub fn k(&self) -> &BigInt {
        match self {
            LemmaParams::SevenCyc { k, .. }
            | LemmaParams::TwoCyc { k, .. }
            | LemmaParams::FiveCyc { k, .. }
            | LemmaParams::SixteenCyc1 { k, .. }
            | LemmaParams::SixteenCyc2 { k, .. } => k,
        }
    }

    /// Builds parameters from named values; every name in
    /// [`TemplateId::parameter_names`] must be present.
    pub fn from_map(template: TemplateId, values: &BTreeMap<String, BigInt>) -> Result<Self> {
        let get = |name: &'static str| -> Result<BigInt> {
            values.get(name).cloned().ok_or(Error::MissingParameter(name))
        };
        Ok(match template {
            TemplateId::SevenCyc => {
                let gamma = get("gamma")?;
                let gamma = gamma
                    .to_u8()
                    .filter(|g| *g <= 6)
                    .ok_or_else(|| Error::Invalid(format!("gamma = {gamma} is not in 0..=6")))?;
                LemmaParams::SevenCyc {
                    k: get("K")?,
                    c: get("c")?,
                    gamma,
                    lambda: get("lambda")?,
                    mu: get("mu")?,
                }
            }
            TemplateId::TwoCyc => LemmaParams::TwoCyc { k: get("K")?, m: get("M")? },
            TemplateId::FiveCyc => LemmaParams::FiveCyc { k: get("K")?, mu: get("mu")? },
            TemplateId::SixteenCyc1 => LemmaParams::SixteenCyc1 {
                k: get("K")?,
                lambda: get("lambda")?,
                mu1: get("mu1")?,
                mu2: get("mu2")?,
                gamma: get("gamma")?,
            },
            TemplateId::SixteenCyc2 => LemmaParams::SixteenCyc2 {
                k: get("K")?,
                lambda: get("lambda")?,
                mu1: get("mu1")?,
                mu2: get("mu2")?,
                gamma1: get("gamma1")?,
                gamma2: get("gamma2")?,
                gamma3: get("gamma3")?,
            },
        })
    }

    pub fn to_map(&self) -> BTreeMap<String, BigInt> {
        let pairs: Vec<(&str, BigInt)> = match self {
            LemmaParams::SevenCyc { k, c, gamma, lambda, mu } => vec![
                ("K", k.clone()),
                ("c", c.clone()),
                ("gamma", BigInt::from(*gamma)),
                ("lambda", lambda.clone()),
                ("mu", mu.clone()),
            ],
            LemmaParams::TwoCyc { k, m } => vec![("K", k.clone()), ("M", m.clone())],
            LemmaParams::FiveCyc { k, mu } => vec![("K", k.clone()), ("mu", mu.clone())],
            LemmaParams::SixteenCyc1 { k, lambda, mu1, mu2, gamma } => vec![
                ("K", k.clone()),
                ("lambda", lambda.clone()),
                ("mu1", mu1.clone()),
                ("mu2", mu2.clone()),
                ("gamma", gamma.clone()),
            ],
            LemmaParams::SixteenCyc2 { k, lambda, mu1, mu2, gamma1, gamma2, gamma3 } => vec![
                ("K", k.clone()),
                ("lambda", lambda.clone()),
                ("mu1", mu1.clone()),
                ("mu2", mu2.clone()),
                ("gamma1", gamma1.clone()),
                ("gamma2", gamma2.clone()),
                ("gamma3", gamma3.clone()),
            ],
        };
        pairs.into_iter().map(|(n, v)| (n.to_string(), v)).collect()
    }
}

/// Checks every inequality in the template's hypotheses and returns the
/// ones that fail.
pub fn hypotheses_ok(params: &LemmaParams) -> std::result::Result<(), Vec<Violation>> {
    let mut bad = Vec::new();
    let mut need = |ok: bool, text: String| {
        if !ok {
            bad.push(Violation(text));
        }
    };
    match params {
        LemmaParams::SevenCyc { k, c, gamma, lambda, mu } => {
            need(*k >= BigInt::from(7), "K ≥ 7".into());
            need(*c >= BigInt::one(), "c ≥ 1".into());
            need(*gamma <= 6, "0 ≤ γ ≤ 6".into());
            let g = (*gamma).min(6) as usize;
            let lmin = -2 * c + SEVEN_CYC_LAMBDA_MIN[g];
            need(*lambda >= lmin, format!("λ ≥ −2c+{} (= {lmin})", SEVEN_CYC_LAMBDA_MIN[g]));
            let mmin = -c + SEVEN_CYC_MU_MIN[g];
            need(*mu >= mmin, format!("μ ≥ −c{:+} (= {mmin})", SEVEN_CYC_MU_MIN[g]));
        }
        LemmaParams::TwoCyc { k, m } => {
            need(*k >= BigInt::one(), "K ≥ 1".into());
            need(*m >= k + 5, "M ≥ K+5".into());
        }
        LemmaParams::FiveCyc { k, mu } => {
            need(*k >= BigInt::from(3), "K ≥ 3".into());
            need(*mu >= BigInt::one(), "μ ≥ 1".into());
        }
        LemmaParams::SixteenCyc1 { k, lambda, mu1, mu2, gamma } => {
            for (name, v) in [("K", k), ("λ", lambda), ("μ₁", mu1), ("μ₂", mu2), ("γ", gamma)] {
                need(v.is_positive(), format!("{name} > 0"));
            }
            need(*lambda > k + 31, "λ > 31+K".into());
            need(mu1 > lambda, "μ₁ > λ".into());
            need(mu2 > lambda, "μ₂ > λ".into());
            need(gamma > lambda, "γ > λ".into());
        }
        LemmaParams::SixteenCyc2 { k, lambda, mu1, mu2, gamma1, gamma2, gamma3 } => {
            for (name, v) in [
                ("K", k),
                ("λ", lambda),
                ("μ₁", mu1),
                ("μ₂", mu2),
                ("γ₁", gamma1),
                ("γ₂", gamma2),
                ("γ₃", gamma3),
            ] {
                need(v.is_positive(), format!("{name} > 0"));
            }
            need(*lambda > k + 31, "λ > 31+K".into());
            need(mu1 > lambda, "μ₁ > λ".into());
            need(mu2 > lambda, "μ₂ > λ".into());
            need(gamma1 > lambda, "γ₁ > λ".into());
            need(gamma2 > lambda, "γ₂ > λ".into());
            need(gamma3 > lambda, "γ₃ > λ".into());
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// A template with bound parameters.
///
/// Index `anchor + period·k + r` holds residue `r`'s entry evaluated at `k`.
/// The instance covers `start..=extent` (`extent = None` means forever).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaInstance {
    params: LemmaParams,
    anchor: BigInt,
    start: BigInt,
    extent: Option<BigInt>,
    entries: Vec<PatternEntry>,
}

impl LemmaInstance {
    pub fn new(params: LemmaParams) -> Result<Self> {
        use PatternEntry::*;
        let two = || BigInt::from(2);
        let (anchor, start, extent, entries) = match &params {
            LemmaParams::SevenCyc { k, c, gamma, lambda, mu } => {
                let g = *gamma as usize;
                if g > 6 {
                    return Err(Error::Invalid(format!("gamma = {gamma} is not in 0..=6")));
                }
                let l: BigInt = k - 7 * c - BigInt::from(*gamma);
                if l.is_negative() {
                    return Err(Error::Invalid(format!("L = K−7c−γ = {l} is negative")));
                }
                let m = k + &l + 5;
                let entries = vec![
                    AffineK(7.into(), &l + 7),
                    AffineK(7.into(), &m + 2),
                    AffineK(7.into(), &m + 4),
                    PatternEntry::konst(7),
                    AffineK(2.into(), 2 * k + lambda),
                    AffineK(1.into(), 2 * k + mu),
                    Const(k - 2),
                ];
                let extent = 2 * k + SEVEN_CYC_NU[g];
                let start = &m - 3;
                (m, start, Some(extent), entries)
            }
            LemmaParams::TwoCyc { k, m } => {
                let entries = vec![GeometricHalf(m.clone(), BigInt::zero()), PatternEntry::konst(2)];
                (k.clone(), k + 1, None, entries)
            }
            LemmaParams::FiveCyc { k, mu } => {
                let entries = vec![
                    PatternEntry::konst(5),
                    AffineK(3.into(), k + mu),
                    PatternEntry::konst(3),
                    AffineK(5.into(), k + 3),
                    AffineK(3.into(), k + mu + 1),
                ];
                let span: BigInt = 5 * mu - 15;
                let extent = k + span.div_floor(&two());
                (k.clone(), k + 1, Some(extent), entries)
            }
            LemmaParams::SixteenCyc1 { k, lambda, mu1, mu2, gamma } => {
                let g2 = || Geometric(mu2.clone(), BigInt::zero());
                let entries = vec![
                    GeometricHalf(mu1.clone(), gamma - mu1),
                    Const(lambda.clone()),
                    PatternEntry::konst(7),
                    g2(),
                    PatternEntry::konst(16),
                    g2(),
                    PatternEntry::konst(16),
                    Geometric(mu1.clone(), BigInt::zero()),
                    Const(lambda.clone()),
                    PatternEntry::konst(7),
                    g2(),
                    PatternEntry::konst(16),
                    // μ₂·2^(k+1): the initial conditions carry 2μ₂ here
                    Geometric(2 * mu2, BigInt::zero()),
                    PatternEntry::konst(16),
                    g2(),
                    PatternEntry::konst(25),
                ];
                (k.clone(), k + 1, Some(lambda.clone()), entries)
            }
            LemmaParams::SixteenCyc2 { k, lambda, mu1, mu2, gamma1, gamma2, gamma3 } => {
                let entries = vec![
                    Geometric(mu1.clone(), gamma1 - 2 * mu1),
                    PatternEntry::konst(16),
                    Geometric(mu2.clone(), BigInt::zero()),
                    PatternEntry::konst(7),
                    AffineK(7.into(), gamma2.clone()),
                    Const(lambda.clone()),
                    PatternEntry::konst(16),
                    Const(lambda.clone()),
                    PatternEntry::konst(16),
                    Geometric(mu1.clone(), BigInt::zero()),
                    PatternEntry::konst(10),
                    AffineK(16.into(), gamma3.clone()),
                    Geometric(mu2.clone(), BigInt::zero()),
                    PatternEntry::konst(7),
                    Const(lambda.clone()),
                    PatternEntry::konst(16),
                ];
                (k.clone(), k + 1, Some(lambda.clone()), entries)
            }
        };
        Ok(Self { params, anchor, start, extent, entries })
    }

    pub fn template(&self) -> TemplateId {
        self.params.template()
    }

    pub fn params(&self) -> &LemmaParams {
        &self.params
    }

    pub fn anchor(&self) -> &BigInt {
        &self.anchor
    }

    /// First index the pattern describes.
    pub fn start(&self) -> &BigInt {
        &self.start
    }

    /// Last index the pattern describes, `None` when it lasts forever.
    pub fn extent(&self) -> Option<&BigInt> {
        self.extent.as_ref()
    }

    pub fn entries(&self) -> &[PatternEntry] {
        &self.entries
    }

    pub fn hypotheses_ok(&self) -> std::result::Result<(), Vec<Violation>> {
        hypotheses_ok(&self.params)
    }

    pub fn covers(&self, index: &BigInt) -> bool {
        index >= &self.start && self.extent.as_ref().is_none_or(|e| index <= e)
    }

    /// `(k, residue)` of an index relative to the anchor.
    pub fn locate(&self, index: &BigInt) -> (BigInt, usize) {
        let period = BigInt::from(self.template().period());
        let (k, r) = (index - &self.anchor).div_mod_floor(&period);
        (k, r.to_usize().expect("residue below period"))
    }

    /// Closed-form value at `index`.
    pub fn expected_term(&self, index: &BigInt) -> Result<BigInt> {
        if !self.covers(index) {
            return Err(Error::OutsidePattern {
                index: index.to_string(),
                start: self.start.to_string(),
                end: self.extent.as_ref().map_or("∞".into(), ToString::to_string),
            });
        }
        let (k, r) = self.locate(index);
        self.entries[r].eval(&k)
    }

    /// [`expected_term`](Self::expected_term) without expanding huge doublings.
    pub fn lazy_term(&self, index: &BigInt) -> Result<LazyValue> {
        if !self.covers(index) {
            return self.expected_term(index).map(LazyValue::Exact);
        }
        let (k, r) = self.locate(index);
        Ok(self.entries[r].eval_lazy(&k))
    }

    /// Number of filler values `aᵢ` the template's initial conditions take.
    pub fn filler_len(&self) -> Result<usize> {
        let n = match &self.params {
            LemmaParams::SevenCyc { k, c, gamma, .. } => k - 7 * c - BigInt::from(*gamma),
            LemmaParams::FiveCyc { k, .. } => k - 3,
            other => other.k().clone(),
        };
        small(&n)
    }

    /// The template's initial conditions with `filler(i)` for `aᵢ`
    /// (1-based; for the period-5 template `i` runs from 4).
    pub fn initial_conditions(&self, mut filler: impl FnMut(usize) -> BigInt) -> Result<InitialConditions> {
        let mut v: Vec<BigInt> = Vec::new();
        match &self.params {
            LemmaParams::SevenCyc { k, lambda, mu, .. } => {
                let kk = small(k)?;
                v.extend((1..=kk).map(BigInt::from));
                v.push(6.into());
                v.extend((1..=self.filler_len()?).map(&mut filler));
                v.push(2 * k + lambda - 2);
                v.push(2 * k + mu - 1);
                v.push(k - 2);
            }
            LemmaParams::TwoCyc { m, .. } => {
                v.extend((1..=self.filler_len()?).map(&mut filler));
                v.extend([2.into(), m.clone(), 2.into()]);
            }
            LemmaParams::FiveCyc { k, mu } => {
                let kk = small(k)?;
                v.extend([1, 2, 3].map(BigInt::from));
                v.extend((4..=kk).map(&mut filler));
                v.extend([k + mu, 3.into(), k + 3, k + mu + 1, 5.into()]);
            }
            LemmaParams::SixteenCyc1 { lambda, mu1, mu2, gamma, .. } => {
                v.extend((1..=self.filler_len()?).map(&mut filler));
                let l = lambda.clone();
                v.extend([
                    l.clone(),
                    7.into(),
                    mu2.clone(),
                    16.into(),
                    mu2.clone(),
                    16.into(),
                    mu1.clone(),
                    l.clone(),
                    7.into(),
                    mu2.clone(),
                    16.into(),
                    2 * mu2,
                    16.into(),
                    mu2.clone(),
                    25.into(),
                    gamma.clone(),
                    l,
                    7.into(),
                ]);
            }
            LemmaParams::SixteenCyc2 { lambda, mu1, mu2, gamma1, gamma2, gamma3, .. } => {
                v.extend((1..=self.filler_len()?).map(&mut filler));
                let l = lambda.clone();
                v.extend([
                    16.into(),
                    mu2.clone(),
                    7.into(),
                    gamma2.clone(),
                    l.clone(),
                    16.into(),
                    l.clone(),
                    16.into(),
                    mu1.clone(),
                    10.into(),
                    gamma3.clone(),
                    mu2.clone(),
                    7.into(),
                    l,
                    16.into(),
                    gamma1.clone(),
                ]);
            }
        }
        Ok(InitialConditions::new(v, true))
    }

    pub fn to_record(&self) -> InstanceRecord {
        InstanceRecord {
            template: self.template(),
            parameters: self.params.to_map().into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            anchor: self.anchor.to_string(),
            start: self.start.to_string(),
            extent: self.extent.as_ref().map(ToString::to_string),
        }
    }

    pub fn from_record(record: &InstanceRecord) -> Result<Self> {
        let values = record
            .parameters
            .iter()
            .map(|(k, v)| {
                v.parse::<BigInt>()
                    .map(|v| (k.clone(), v))
                    .map_err(|_| Error::Invalid(format!("parameter {k} = {v:?} is not an integer")))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new(LemmaParams::from_map(record.template, &values)?)
    }
}

fn small(v: &BigInt) -> Result<usize> {
    v.to_usize()
        .filter(|&n| n <= 1 << 28)
        .ok_or_else(|| Error::Invalid(format!("{v} is too large to materialize")))
}

/// JSON form of a [`LemmaInstance`]; big integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub template: TemplateId,
    pub parameters: BTreeMap<String, String>,
    pub anchor: String,
    pub start: String,
    pub extent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: BigInt,
    pub expected: BigInt,
    pub observed: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternReport {
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    /// The run stopped (or was cut) before the pattern's extent.
    pub partial: bool,
}

impl PatternReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares every covered index of `run` against the closed forms.
pub fn verify_pattern(instance: &LemmaInstance, run: &Run) -> Result<PatternReport> {
    let len = BigInt::from(run.len());
    let last = match instance.extent() {
        Some(e) if *e <= len => e.clone(),
        _ => len.clone(),
    };
    let partial = instance.extent().is_none_or(|e| *e > len);
    let mut report = PatternReport { checked: 0, mismatches: Vec::new(), partial };
    let first = instance.start().max(&BigInt::one()).clone();
    let (Some(first), Some(last)) = (first.to_i64(), last.to_i64()) else {
        return Err(Error::Invalid("pattern range does not fit a materialized run".into()));
    };
    for i in first..=last {
        let idx = BigInt::from(i);
        let expected = instance.expected_term(&idx)?;
        let observed = run.term_at(i).ok();
        if observed.as_ref() != Some(&expected) {
            report.mismatches.push(Mismatch { index: idx, expected, observed });
        }
        report.checked += 1;
    }
    Ok(report)
}

/// Read access to a sequence that may be too long to materialize.
pub trait TermSource {
    /// Number of defined terms.
    fn length(&self) -> BigInt;
    fn term(&self, index: &BigInt) -> Result<BigInt>;
}

impl TermSource for Run {
    fn length(&self) -> BigInt {
        BigInt::from(self.len())
    }

    fn term(&self, index: &BigInt) -> Result<BigInt> {
        match index.to_i64() {
            Some(i) => self.term_at(i),
            None => Err(Error::Lookup { index: index.to_string(), length: self.len().to_string() }),
        }
    }
}

/// Last `n` terms, oldest first, or `None` if fewer exist.
fn trailing<S: TermSource + ?Sized>(src: &S, n: usize) -> Option<(BigInt, Vec<BigInt>)> {
    let len = src.length();
    if len < BigInt::from(n) {
        return None;
    }
    let base = &len - n;
    let vals = (1..=n).map(|i| src.term(&(&base + i))).collect::<Result<Vec<_>>>().ok()?;
    Some((base, vals))
}

fn accept(params: LemmaParams) -> Option<LemmaInstance> {
    hypotheses_ok(&params).ok()?;
    LemmaInstance::new(params).ok()
}

/// Tries to read the trailing terms of `src` as the initial conditions of
/// `template`. `K` is bound so that the template's fixed tail ends at the
/// last defined index.
pub fn match_template<S: TermSource + ?Sized>(src: &S, template: TemplateId) -> Option<LemmaInstance> {
    match template {
        TemplateId::TwoCyc => {
            let (k, w) = trailing(src, 3)?;
            (w[0] == BigInt::from(2) && w[2] == BigInt::from(2))
                .then(|| accept(LemmaParams::TwoCyc { k, m: w[1].clone() }))?
        }
        TemplateId::FiveCyc => {
            let (k, w) = trailing(src, 5)?;
            if k < BigInt::from(3) {
                return None;
            }
            for i in 1..=3 {
                if src.term(&BigInt::from(i)).ok()? != BigInt::from(i) {
                    return None;
                }
            }
            let mu = &w[0] - &k;
            let ok = w[1] == BigInt::from(3)
                && w[2] == &k + 3
                && w[3] == &w[0] + 1
                && w[4] == BigInt::from(5);
            ok.then(|| accept(LemmaParams::FiveCyc { k, mu }))?
        }
        TemplateId::SixteenCyc1 => {
            let (k, w) = trailing(src, 18)?;
            let (lambda, mu2, mu1, gamma) = (&w[0], &w[2], &w[6], &w[15]);
            let s = |v: i64| BigInt::from(v);
            let expect = [
                lambda.clone(),
                s(7),
                mu2.clone(),
                s(16),
                mu2.clone(),
                s(16),
                mu1.clone(),
                lambda.clone(),
                s(7),
                mu2.clone(),
                s(16),
                2 * mu2,
                s(16),
                mu2.clone(),
                s(25),
                gamma.clone(),
                lambda.clone(),
                s(7),
            ];
            (w[..] == expect[..]).then(|| {
                accept(LemmaParams::SixteenCyc1 {
                    k,
                    lambda: lambda.clone(),
                    mu1: mu1.clone(),
                    mu2: mu2.clone(),
                    gamma: gamma.clone(),
                })
            })?
        }
        TemplateId::SixteenCyc2 => {
            let (k, w) = trailing(src, 16)?;
            let (mu2, gamma2, lambda, mu1, gamma3, gamma1) = (&w[1], &w[3], &w[4], &w[8], &w[10], &w[15]);
            let s = |v: i64| BigInt::from(v);
            let expect = [
                s(16),
                mu2.clone(),
                s(7),
                gamma2.clone(),
                lambda.clone(),
                s(16),
                lambda.clone(),
                s(16),
                mu1.clone(),
                s(10),
                gamma3.clone(),
                mu2.clone(),
                s(7),
                lambda.clone(),
                s(16),
                gamma1.clone(),
            ];
            (w[..] == expect[..]).then(|| {
                accept(LemmaParams::SixteenCyc2 {
                    k,
                    lambda: lambda.clone(),
                    mu1: mu1.clone(),
                    mu2: mu2.clone(),
                    gamma1: gamma1.clone(),
                    gamma2: gamma2.clone(),
                    gamma3: gamma3.clone(),
                })
            })?
        }
        TemplateId::SevenCyc => {
            let len = src.length();
            let (_, w) = trailing(src, 3)?;
            let k: BigInt = &w[2] + 2;
            // 1..K, 6, a₁..a_L, then three trailing values: length K+L+4
            let l: BigInt = &len - &k - 4;
            if k < BigInt::from(7) || l.is_negative() {
                return None;
            }
            if src.term(&(&k + 1)).ok()? != BigInt::from(6) {
                return None;
            }
            let kk = k.to_u64()?;
            // cheap probes first, then the whole prefix
            for i in [1, kk / 2, kk].into_iter().chain(1..=kk) {
                if i >= 1 && src.term(&BigInt::from(i)).ok()? != BigInt::from(i) {
                    return None;
                }
            }
            let (c, gamma) = (&k - &l).div_mod_floor(&BigInt::from(7));
            let gamma = gamma.to_u8()?;
            let lambda = &w[0] - 2 * &k + 2;
            let mu = &w[1] - 2 * &k + 1;
            accept(LemmaParams::SevenCyc { k, c, gamma, lambda, mu })
        }
    }
}

/// First template (in [`TemplateId::PRIORITY`] order) whose initial
/// conditions match the trailing terms of `src` and whose hypotheses hold.
pub fn match_suffix<S: TermSource + ?Sized>(src: &S) -> Option<LemmaInstance> {
    match_suffix_among(src, &TemplateId::PRIORITY)
}

/// Like [`match_suffix`] but restricted to `templates`, tried in
/// priority order regardless of slice order.
pub fn match_suffix_among<S: TermSource + ?Sized>(
    src: &S,
    templates: &[TemplateId],
) -> Option<LemmaInstance> {
    TemplateId::PRIORITY
        .into_iter()
        .filter(|t| templates.contains(t))
        .find_map(|t| match_template(src, t))
}

/// Cheap pre-filter on a concrete run: `false` means `match_suffix` cannot
/// succeed at the current length.
pub fn suffix_candidate(run: &Run) -> bool {
    let n = run.len();
    if n < 3 {
        return false;
    }
    let at = |back: usize| if back < n { run.small_term(n - back) } else { None };
    let last = at(0);
    (last == Some(2) && at(2) == Some(2))
        || (last == Some(5) && at(3) == Some(3))
        || (last == Some(7) && at(3) == Some(25))
        || (at(1) == Some(16) && at(3) == Some(7) && at(6) == Some(10))
        || last.is_some_and(|v| {
            // period-7 shape: K = last + 2, then t(K) = K and t(K+1) = 6
            let k = v + 2;
            k >= 7 && (k as usize) < n && run.small_term(k as usize) == Some(k)
                && run.small_term(k as usize + 1) == Some(6)
        })
}
