//! The cohomological equation `(∂_x + α∂_y) f = g` on the 2-torus, solved
//! frequency by frequency, with continued-fraction diagnostics for `α`.
//!
//! On `e^{2πi(mx+ny)}` the operator acts by `2πi(m + αn)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::parse_rational;

/// A slope `α`, kept exact so that continued fractions and resonances are
/// decided without rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeSpec {
    Rational { value: BigRational, decimal: bool },
    /// `(a + b√d) / c` with `d > 1` not a perfect square,
    /// `b ≠ 0`, `c ≠ 0`.
    Surd { a: BigInt, b: BigInt, d: BigInt, c: BigInt },
    /// `Σ_{k=1}^{terms} 10^{-k!}`.
    Liouville { terms: u32 },
}

fn is_square(d: &BigInt) -> bool {
    let r = d.sqrt();
    &r * &r == *d
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .replace('−', "-")
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

impl SlopeSpec {
    pub fn golden() -> Self {
        SlopeSpec::Surd {
            a: 1.into(),
            b: 1.into(),
            d: 5.into(),
            c: 2.into(),
        }
    }

    pub fn surd(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        let s = SlopeSpec::Surd {
            a: a.into(),
            b: b.into(),
            d: d.into(),
            c: c.into(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn liouville(terms: u32) -> Result<Self> {
        if !(1..=6).contains(&terms) {
            return Err(Error::Domain("Liouville truncation needs 1..=6 terms".into()));
        }
        Ok(SlopeSpec::Liouville { terms })
    }

    fn validate(&self) -> Result<()> {
        if let SlopeSpec::Surd { b, d, c, .. } = self {
            if d <= &BigInt::one() || is_square(d) {
                return Err(Error::Domain(format!("{d} is not a positive non-square")));
            }
            if b.is_zero() || c.is_zero() {
                return Err(Error::Domain("surd needs b ≠ 0 and c ≠ 0".into()));
            }
        }
        Ok(())
    }

    /// Accepts `golden`, `liouville:K`, `p/q`, decimals, `sqrt(d)` and
    /// `(a+b*sqrt(d))/c` (also `(a-sqrt(d))/c` and the like).
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('−', "-");
        if t == "golden" || t == "phi" {
            return Ok(Self::golden());
        }
        if let Some(k) = t.strip_prefix("liouville:") {
            let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad term count in {text:?}")))?;
            return Self::liouville(k);
        }
        if t.contains("sqrt") {
            return Self::parse_surd(&t).ok_or_else(|| Error::Parse(format!("cannot parse surd {text:?}")))?;
        }
        let value = parse_rational(&t)?;
        Ok(SlopeSpec::Rational {
            value,
            decimal: t.contains('.'),
        })
    }

    fn parse_surd(t: &str) -> Option<Result<Self>> {
        let (body, c) = match t.rsplit_once(")/") {
            Some((body, c)) if body.starts_with('(') => (&body[1..], c),
            _ => (t, "1"),
        };
        let idx = body.find("sqrt(")?;
        let (head, rest) = body.split_at(idx);
        let d = rest.strip_prefix("sqrt(")?.strip_suffix(')')?;
        let head = head.strip_suffix('*').unwrap_or(head);
        // head is "", "a+", "a-", "a+b", "a-b", "b", "-b", "-"
        let (a, b) = match head.rfind(['+', '-']) {
            Some(pos) if pos > 0 => {
                let a = &head[..pos];
                let sign = &head[pos..pos + 1];
                let mag = &head[pos + 1..];
                (a.to_string(), format!("{sign}{}", if mag.is_empty() { "1" } else { mag }))
            }
            Some(_) => ("0".to_string(), if head == "-" { "-1".into() } else { head.to_string() }),
            None => ("0".to_string(), if head.is_empty() { "1".into() } else { head.to_string() }),
        };
        let build = || -> Result<Self> {
            let s = SlopeSpec::Surd {
                a: parse_int(&a)?,
                b: parse_int(&b)?,
                d: parse_int(d)?,
                c: parse_int(c)?,
            };
            s.validate()?;
            Ok(s)
        };
        Some(build())
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self, SlopeSpec::Surd { .. })
    }

    /// Exact value for the rational kinds.
    pub fn rational_value(&self) -> Option<BigRational> {
        match self {
            SlopeSpec::Rational { value, .. } => Some(value.clone()),
            SlopeSpec::Liouville { terms } => {
                let mut sum = BigRational::zero();
                let mut fact = 1u32;
                for k in 1..=*terms {
                    fact *= k;
                    sum += BigRational::new(BigInt::one(), BigInt::from(10).pow(fact));
                }
                Some(sum)
            }
            SlopeSpec::Surd { .. } => None,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            SlopeSpec::Surd { a, b, d, c } => {
                let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
                (f(a) + f(b) * f(d).sqrt()) / f(c)
            }
            _ => self.rational_value().and_then(|q| q.to_f64()).unwrap_or(f64::NAN),
        }
    }

    /// `m + αn`, with exact detection of zero and cancellation-free
    /// evaluation for surds.
    pub fn denominator(&self, m: i64, n: i64) -> f64 {
        match self {
            SlopeSpec::Surd { a, b, d, c } => {
                // m + αn = (X + Y√d)/c with X = cm + an, Y = bn
                let x = c * m + a * n;
                let y = b * n;
                let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
                let cf = f(c);
                let sd = f(d).sqrt();
                if x.sign() == y.sign() || x.is_zero() || y.is_zero() {
                    (f(&x) + f(&y) * sd) / cf
                } else {
                    let num = &x * &x - &y * &y * d;
                    f(&num) / (cf * (f(&x) - f(&y) * sd))
                }
            }
            _ => {
                let q = self.rational_value().expect("rational kind");
                let v = BigRational::from_integer(m.into()) + q * BigRational::from_integer(n.into());
                v.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    pub fn is_resonant(&self, m: i64, n: i64) -> bool {
        if (m, n) == (0, 0) {
            return false;
        }
        match self.rational_value() {
            Some(q) => (BigRational::from_integer(m.into()) + q * BigRational::from_integer(n.into())).is_zero(),
            None => false,
        }
    }
}

impl fmt::Display for SlopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeSpec::Rational { value, .. } => write!(f, "{value}"),
            SlopeSpec::Surd { a, b, d, c } => write!(f, "({a} + {b}√{d})/{c}"),
            SlopeSpec::Liouville { terms } => write!(f, "Σ_(k≤{terms}) 10^(-k!)"),
        }
    }
}

/// Complete quotients `α_k`, either rational or `(P + √D)/Q`.
enum Tail {
    Rational(BigRational),
    Surd { p: BigInt, q: BigInt, d: BigInt },
    Done,
}

impl Tail {
    fn of(alpha: &SlopeSpec) -> Tail {
        match alpha {
            SlopeSpec::Surd { a, b, d, c } => {
                // (a + b√d)/c = (P + √D)/Q with D = b²d, normalized so Q | D − P².
                let sign = if b.is_negative() { -BigInt::one() } else { BigInt::one() };
                let (mut p, mut q, mut dd) = (a * &sign, c * &sign, b * b * d);
                if !(&dd - &p * &p).is_multiple_of(&q) {
                    let qa = q.abs();
                    p *= &qa;
                    dd *= &q * &q;
                    q *= qa;
                }
                Tail::Surd { p, q, d: dd }
            }
            _ => Tail::Rational(alpha.rational_value().expect("rational kind")),
        }
    }

    fn approx(&self) -> f64 {
        match self {
            Tail::Rational(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Tail::Surd { p, q, d } => {
                let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
                (f(p) + f(d).sqrt()) / f(q)
            }
            Tail::Done => f64::INFINITY,
        }
    }

    /// Integer part, advancing to the next complete quotient.
    fn step(&mut self) -> Option<BigInt> {
        match self {
            Tail::Done => None,
            Tail::Rational(r) => {
                let a = r.floor().to_integer();
                let frac = &*r - BigRational::from_integer(a.clone());
                *self = if frac.is_zero() { Tail::Done } else { Tail::Rational(frac.recip()) };
                Some(a)
            }
            Tail::Surd { p, q, d } => {
                let s = d.sqrt();
                // √D is irrational, so floor((P+√D)/Q) = floor((P+s)/Q) for Q > 0
                // and floor((P+s+1)/Q) for Q < 0.
                let a = if q.is_positive() {
                    (&*p + &s).div_floor(q)
                } else {
                    (&*p + &s + BigInt::one()).div_floor(q)
                };
                let p2 = &a * &*q - &*p;
                let q2 = (&*d - &p2 * &p2) / &*q;
                *p = p2;
                *q = q2;
                Some(a)
            }
        }
    }
}

/// Natural log of a positive big integer.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    BigRational::new(a.clone(), b.clone()).to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Convergent {
    pub p: String,
    pub q: String,
    /// `q²|α − p/q|`.
    pub quality: f64,
    /// `|qα − p|`.
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiophantineProfile {
    pub alpha: String,
    pub value: f64,
    pub rational: bool,
    /// The expansion ended before the requested depth.
    pub finite: bool,
    pub coefficients: Vec<String>,
    pub convergents: Vec<Convergent>,
    /// `2 + max ln(a_{k+1}) / ln(q_k)` over the computed convergents.
    pub irrationality_measure: f64,
}

struct ConvergentData {
    a: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    /// `|q_k α − p_k|`.
    dist: Vec<f64>,
    /// Complete quotient `α_{k+1}`, infinite once the expansion ends.
    next: Vec<f64>,
    finite: bool,
}

/// Convergents until `depth` coefficients are produced or `q` exceeds
/// `q_limit`.
fn convergents(alpha: &SlopeSpec, depth: usize, q_limit: Option<&BigInt>) -> ConvergentData {
    let mut tail = Tail::of(alpha);
    let mut out = ConvergentData {
        a: Vec::new(),
        p: Vec::new(),
        q: Vec::new(),
        dist: Vec::new(),
        next: Vec::new(),
        finite: false,
    };
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
    while out.a.len() < depth {
        let Some(a) = tail.step() else {
            out.finite = true;
            break;
        };
        let p = &a * &p_prev + &p_prev2;
        let q = &a * &q_prev + &q_prev2;
        // |q_k α − p_k| = 1/(α_{k+1} q_k + q_{k−1})
        let next = tail.approx();
        let dist = if next.is_infinite() {
            0.0
        } else {
            1.0 / (next * q.to_f64().unwrap_or(f64::INFINITY) + q_prev.to_f64().unwrap_or(f64::INFINITY))
        };
        let beyond = q_limit.is_some_and(|lim| &q > lim);
        out.a.push(a);
        out.p.push(p.clone());
        out.q.push(q.clone());
        out.dist.push(dist);
        out.next.push(next);
        if beyond {
            break;
        }
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    if matches!(tail, Tail::Done) {
        out.finite = true;
    }
    out
}

pub fn diophantine_profile(alpha: &SlopeSpec, depth: usize) -> Result<DiophantineProfile> {
    if depth < 1 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let data = convergents(alpha, depth, None);
    let k = data.a.len();
    let mut conv = Vec::with_capacity(k);
    for i in 0..k {
        // q·|qα − p| = 1/(α_{k+1} + q_{k−1}/q_k)
        let q_prev = if i == 0 { BigInt::zero() } else { data.q[i - 1].clone() };
        let quality = 1.0 / (data.next[i] + ratio_f64(&q_prev, &data.q[i]));
        conv.push(Convergent {
            p: data.p[i].to_string(),
            q: data.q[i].to_string(),
            quality,
            distance: data.dist[i],
        });
    }
    let mut measure: f64 = 2.0;
    for i in 0..k.saturating_sub(1) {
        if data.q[i] > BigInt::one() {
            measure = measure.max(2.0 + ln_big(&data.a[i + 1]) / ln_big(&data.q[i]));
        }
    }
    Ok(DiophantineProfile {
        alpha: alpha.to_string(),
        value: alpha.value(),
        rational: alpha.is_rational(),
        finite: data.finite,
        coefficients: data.a.iter().map(BigInt::to_string).collect(),
        convergents: conv,
        irrationality_measure: measure,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinDenominator {
    pub support: u64,
    /// `min |m + αn|` over `0 < max(|m|,|n|) ≤ support`.
    pub value: f64,
    pub m: i64,
    pub n: i64,
    /// `min_k q_k |q_k α − p_k|` over convergents inside the support: the
    /// constant `c` in `|m + αn| ≥ c/|n|`.
    pub law_constant: f64,
}

/// Smallest small denominator over the box `[−N, N]²` via best
/// approximations (convergents). Resonant rationals give `0`.
pub fn min_denominator(alpha: &SlopeSpec, support: u64) -> MinDenominator {
    let limit = BigInt::from(support);
    let data = convergents(alpha, 10_000, Some(&limit));
    let mut best = MinDenominator {
        support,
        value: 1.0,
        m: 1,
        n: 0,
        law_constant: f64::INFINITY,
    };
    for i in 0..data.a.len() {
        let (p, q) = (&data.p[i], &data.q[i]);
        if q.is_zero() || q > &limit || p.abs() > limit {
            continue;
        }
        let (pi, qi) = (p.to_i64().expect("bounded"), q.to_i64().expect("bounded"));
        let v = alpha.denominator(-pi, qi).abs();
        best.law_constant = best.law_constant.min(v * qi as f64);
        if v < best.value {
            best.value = v;
            best.m = -pi;
            best.n = qi;
        }
    }
    best
}

// Series and the solver.

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub m: i64,
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierSeries {
    pub terms: BTreeMap<(i64, i64), Complex64>,
}

impl FourierSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: &[SeriesRecord]) -> Result<Self> {
        let mut s = Self::new();
        for r in records {
            if s.terms.insert((r.m, r.n), Complex64::new(r.re, r.im)).is_some() {
                return Err(Error::Parse(format!("frequency ({}, {}) listed twice", r.m, r.n)));
            }
        }
        Ok(s)
    }

    pub fn records(&self) -> Vec<SeriesRecord> {
        self.terms
            .iter()
            .map(|(&(m, n), c)| SeriesRecord { m, n, re: c.re, im: c.im })
            .collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let records: Vec<SeriesRecord> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(&records)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("plain records")
    }

    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    /// Coefficient at `(−m,−n)` is the conjugate of the one at `(m,n)`.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(&(m, n), c)| self.get(-m, -n) == c.conj())
    }

    pub fn support_radius(&self) -> i64 {
        self.terms.keys().map(|&(m, n)| m.abs().max(n.abs())).max().unwrap_or(0)
    }
}

/// The mean, i.e. the `(0,0)` coefficient.
pub fn obstruction(g: &FourierSeries) -> Complex64 {
    g.get(0, 0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub min_denominator: f64,
    pub min_frequency: Option<(i64, i64)>,
    pub max_amplification: f64,
    pub obstruction_re: f64,
    pub obstruction_im: f64,
    pub mean_subtracted: bool,
    pub residual: f64,
    pub real_input: bool,
    pub real_output: bool,
}

/// `f_{m,n} = g_{m,n} / (2πi(m + αn))` away from `(0,0)`.
pub fn solve_cohomological(
    alpha: &SlopeSpec,
    g: &FourierSeries,
    subtract_mean: bool,
) -> Result<(FourierSeries, SolveDiagnostics)> {
    let mean = obstruction(g);
    if mean != Complex64::new(0.0, 0.0) && !subtract_mean {
        return Err(Error::Obstruction {
            re: mean.re,
            im: mean.im,
        });
    }
    let mut f = FourierSeries::new();
    let mut min_den = f64::INFINITY;
    let mut min_freq = None;
    let mut max_amp: f64 = 0.0;
    for (&(m, n), &c) in &g.terms {
        if (m, n) == (0, 0) {
            continue;
        }
        if alpha.is_resonant(m, n) {
            return Err(Error::Resonance { m, n });
        }
        let den = alpha.denominator(m, n);
        if den.abs() < min_den {
            min_den = den.abs();
            min_freq = Some((m, n));
        }
        let inv = 1.0 / (2.0 * PI * den);
        if c != Complex64::new(0.0, 0.0) {
            max_amp = max_amp.max(inv.abs());
        }
        f.terms.insert((m, n), Complex64::new(c.im * inv, -c.re * inv));
    }
    let mut g_eff = g.clone();
    g_eff.terms.remove(&(0, 0));
    let diag = SolveDiagnostics {
        min_denominator: if min_den.is_finite() { min_den } else { 0.0 },
        min_frequency: min_freq,
        max_amplification: max_amp,
        obstruction_re: mean.re,
        obstruction_im: mean.im,
        mean_subtracted: subtract_mean && mean != Complex64::new(0.0, 0.0),
        residual: residual(alpha, &f, &g_eff),
        real_input: g.is_real(),
        real_output: f.is_real(),
    };
    Ok((f, diag))
}

/// `max |2πi(m + αn) f_{m,n} − g_{m,n}|` over the union of supports.
pub fn residual(alpha: &SlopeSpec, f: &FourierSeries, g: &FourierSeries) -> f64 {
    let keys: std::collections::BTreeSet<_> = f.terms.keys().chain(g.terms.keys()).copied().collect();
    keys.into_iter()
        .map(|(m, n)| {
            let lhs = Complex64::new(0.0, 2.0 * PI * alpha.denominator(m, n)) * f.get(m, n);
            (lhs - g.get(m, n)).norm()
        })
        .fold(0.0, f64::max)
}

/// Random real-valued zero-mean series with `terms` frequency pairs in
/// `[−radius, radius]²`, capped at the number of pairs the box holds.
pub fn random_real_series(rng: &mut impl rand::Rng, radius: i64, terms: usize) -> FourierSeries {
    let side = 2 * radius.max(0) as usize + 1;
    let terms = terms.min((side * side - 1) / 2);
    let mut s = FourierSeries::new();
    while s.terms.len() < 2 * terms {
        let (m, n) = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
        if (m, n) == (0, 0) || s.terms.contains_key(&(m, n)) {
            continue;
        }
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        s.terms.insert((m, n), c);
        s.terms.insert((-m, -n), c.conj());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn parses_slopes() {
        assert_eq!(SlopeSpec::parse("(1+sqrt(5))/2").unwrap(), SlopeSpec::golden());
        assert_eq!(SlopeSpec::parse("sqrt(2)").unwrap(), SlopeSpec::surd(0, 1, 2, 1).unwrap());
        assert_eq!(SlopeSpec::parse("(3-2*sqrt(7))/5").unwrap(), SlopeSpec::surd(3, -2, 7, 5).unwrap());
        assert!(matches!(SlopeSpec::parse("0.25").unwrap(), SlopeSpec::Rational { decimal: true, .. }));
        assert!(SlopeSpec::parse("sqrt(4)").is_err());
        assert!((SlopeSpec::parse("liouville:3").unwrap().value() - 0.110001).abs() < 1e-15);
    }

    #[test]
    fn golden_expansion() {
        let p = diophantine_profile(&SlopeSpec::golden(), 25).unwrap();
        assert!(p.coefficients.iter().all(|a| a == "1"));
        let last = p.convergents.last().unwrap();
        assert!((last.quality - 1.0 / 5f64.sqrt()).abs() < 1e-6);
        assert!(!p.finite);
    }

    #[test]
    fn sqrt2_expansion() {
        let p = diophantine_profile(&SlopeSpec::surd(0, 1, 2, 1).unwrap(), 6).unwrap();
        assert_eq!(p.coefficients, ["1", "2", "2", "2", "2", "2"]);
        let p = diophantine_profile(&SlopeSpec::surd(0, -1, 3, 1).unwrap(), 5).unwrap();
        // −√3 = [−2; 3, 1, 2, 1, ...]
        assert_eq!(p.coefficients, ["-2", "3", "1", "2", "1"]);
    }

    #[test]
    fn rational_expansion_is_finite() {
        let p = diophantine_profile(&SlopeSpec::parse("1/3").unwrap(), 10).unwrap();
        assert!(p.rational && p.finite);
        assert_eq!(p.coefficients, ["0", "3"]);
    }

    #[test]
    fn min_denominator_matches_brute_force() {
        for alpha in [SlopeSpec::golden(), SlopeSpec::surd(0, 1, 2, 1).unwrap(), SlopeSpec::liouville(3).unwrap()] {
            let n = 150i64;
            let mut brute = f64::INFINITY;
            for m in -n..=n {
                for k in -n..=n {
                    if (m, k) != (0, 0) {
                        brute = brute.min((m as f64 + alpha.value() * k as f64).abs());
                    }
                }
            }
            let fast = min_denominator(&alpha, n as u64);
            assert!((fast.value - brute).abs() < 1e-12, "{alpha}: {} vs {brute}", fast.value);
        }
    }

    #[test]
    fn surd_denominator_avoids_cancellation() {
        let phi = SlopeSpec::golden();
        // F_{k+1} − φ F_k for Fibonacci numbers has magnitude φ^{−k}.
        let (mut a, mut b) = (1i64, 1i64);
        for _ in 0..40 {
            (a, b) = (b, a + b);
        }
        let d = phi.denominator(b, -a).abs();
        let expected = ((1.0 + 5f64.sqrt()) / 2.0).powi(-(41));
        assert!((d / expected - 1.0).abs() < 1e-9, "{d} vs {expected}");
    }

    #[test]
    fn single_frequency_solution() {
        let mut g = FourierSeries::new();
        g.terms.insert((1, -1), Complex64::new(1.0, 0.0));
        let (f, d) = solve_cohomological(&SlopeSpec::golden(), &g, false).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((f.get(1, -1).norm() - 1.0 / (2.0 * PI * (phi - 1.0))).abs() < 1e-14);
        assert!(d.residual < 1e-15);
    }

    #[test]
    fn resonance_and_obstruction() {
        let mut g = FourierSeries::new();
        g.terms.insert((1, -2), Complex64::new(1.0, 0.0));
        assert!(matches!(
            solve_cohomological(&SlopeSpec::parse("1/2").unwrap(), &g, false),
            Err(Error::Resonance { m: 1, n: -2 })
        ));
        g.terms.insert((0, 0), Complex64::new(3.0, 0.0));
        assert!(matches!(solve_cohomological(&SlopeSpec::golden(), &g, false), Err(Error::Obstruction { .. })));
        let (_, d) = solve_cohomological(&SlopeSpec::golden(), &g, true).unwrap();
        assert!(d.mean_subtracted);
        assert_eq!(obstruction(&g), Complex64::new(3.0, 0.0));
        let (f, d) = solve_cohomological(&SlopeSpec::golden(), &FourierSeries::new(), false).unwrap();
        assert!(f.terms.is_empty());
        assert_eq!(d.max_amplification, 0.0);
    }

    #[test]
    fn real_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = random_real_series(&mut rng, 64, 40);
        let (f, d) = solve_cohomological(&SlopeSpec::golden(), &g, false).unwrap();
        assert!(d.residual < 1e-12);
        assert!(d.real_input && d.real_output);
        let mut perturbed = f.clone();
        let (&(m, n), c) = perturbed.terms.iter_mut().next().unwrap();
        *c += 1e-3;
        let expected = 2.0 * PI * SlopeSpec::golden().denominator(m, n).abs() * 1e-3;
        let r = residual(&SlopeSpec::golden(), &perturbed, &g);
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
    }
}
