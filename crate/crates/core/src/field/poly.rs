//! Sparse multivariate polynomials over the rationals.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so the
//! derived lexicographic order on `Vec<u32>` is exactly the lex monomial
//! order with variable 0 most significant. The leading term is the last
//! entry of the term map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Exponent = Vec<u32>;

fn trim(mut e: Exponent) -> Exponent {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_mul(a: &[u32], b: &[u32]) -> Exponent {
    let n = a.len().max(b.len());
    let e = (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(e)
}

fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, &x)| x <= b.get(i).copied().unwrap_or(0))
}

fn exp_div(b: &[u32], a: &[u32]) -> Exponent {
    let e = b
        .iter()
        .enumerate()
        .map(|(i, &x)| x - a.get(i).copied().unwrap_or(0))
        .collect();
    trim(e)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The polynomial `x_i`.
    pub fn var(i: usize) -> Self {
        Self::monomial(i, 1)
    }

    fn monomial(i: usize, power: u32) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = power;
        let mut terms = BTreeMap::new();
        terms.insert(trim(e), BigRational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.get(&Vec::new()).cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Highest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|e| e.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.get(v).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(exp_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn mul_term(&self, e: &[u32], c: &BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(ex, x)| (exp_mul(ex, e), x * c))
                .collect(),
        }
    }

    /// Scale so that the lex-leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, cd) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lr, cr)) = rem.leading() {
            if !exp_divides(ld, lr) {
                return None;
            }
            let e = exp_div(lr, ld);
            let c = cr / cd;
            rem = rem.sub(&d.mul_term(&e, &c));
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `x_v`,
    /// indexed by power.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let p = e.get(v).copied().unwrap_or(0) as usize;
            let mut rest = e.clone();
            if v < rest.len() {
                rest[v] = 0;
            }
            out[p].add_term(trim(rest), c.clone());
        }
        out
    }

    fn lead_coeff_in(&self, v: usize) -> Poly {
        self.coeffs_in(v).pop().unwrap_or_default()
    }

    /// Evaluate with floating-point values for the variables.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| values[i].powi(p as i32))
                    .product();
                c.to_f64().unwrap_or(f64::NAN) * m
            })
            .sum()
    }

    /// Substitute rational values for all variables.
    pub fn eval_rational(&self, values: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    m *= &values[i];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

/// Pseudo-remainder of `a` by `b` as univariate polynomials in `x_v`.
/// The result is `c * a mod b` for some nonzero `c` free of `x_v`.
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let shift = Poly::monomial(v, dr - db);
        r = lb.mul(&r).sub(&lr.mul(&shift).mul(b));
    }
    r
}

fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive_part(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides polynomial")
}

/// Monic greatest common divisor, computed by recursive primitive
/// pseudo-remainder sequences. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant");
    if a.degree_in(v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
    c.mul(&primitive_part(&p, v)).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = x(0).add(&x(1)).mul(&x(0).sub(&Poly::from_int(2)));
        let b = x(0).add(&x(1));
        assert_eq!(a.div_exact(&b), Some(x(0).sub(&Poly::from_int(2))));
        assert_eq!(x(0).div_exact(&x(1)), None);
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let common = x(0).mul(&x(1)).add(&x(2)).add(&Poly::from_int(1));
        let a = common.mul(&x(0).sub(&x(2)));
        let b = common.mul(&x(1).add(&Poly::from_int(3))).mul(&x(1));
        assert_eq!(gcd(&a, &b), common.monic());
        assert_eq!(gcd(&x(0), &x(1)), Poly::one());
    }

    #[test]
    fn gcd_with_univariate_powers() {
        let a = x(0).mul(&x(0)).sub(&Poly::from_int(1));
        let b = x(0).sub(&Poly::from_int(1)).mul(&x(0).sub(&Poly::from_int(1)));
        assert_eq!(gcd(&a, &b), x(0).sub(&Poly::from_int(1)));
    }

    #[test]
    fn formatting() {
        let names = vec!["a".to_string(), "b".to_string()];
        let p = x(0).mul(&x(0)).sub(&x(1).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(p.fmt_with(&names), "a^2 - 1/2*b");
    }
}
