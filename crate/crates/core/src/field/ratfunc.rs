use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Element of `Q(s_1, ..., s_r)` in lowest terms with a monic denominator.
///
/// Two values are equal iff their normal forms are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    num: Poly,
    den: Poly,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Coeff {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Poly::from_int(c))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn from_poly(p: Poly) -> Self {
        Coeff {
            num: p,
            den: Poly::one(),
        }
    }

    /// The indeterminate with index `i` in the ambient symbol list.
    pub fn symbol(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    /// Builds `num / den`, reducing to lowest terms.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            return Coeff {
                num: num.scale(&inv),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().recip();
        Coeff {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == Poly::one()
    }

    /// Rational value when the element has no symbolic dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Rough size used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.is_constant() {
            return n;
        }
        let d = self.den.fmt_with(names);
        let wrap = |s: String, p: &Poly| {
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }

    /// Parses `"-1/2"`, `"alpha"`, `"-3/2*alpha"` against a symbol list.
    /// Accepts the Unicode minus sign.
    pub fn parse(text: &str, symbols: &[String]) -> Result<Self> {
        let cleaned = text.trim().replace('\u{2212}', "-");
        let (neg, body) = match cleaned.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, cleaned.trim_start_matches('+').trim()),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty coefficient in {text:?}")));
        }
        let (factor, sym) = match body.split_once('*') {
            Some((f, s)) => (Some(f.trim()), Some(s.trim())),
            None if symbols.iter().any(|s| s == body) => (None, Some(body)),
            None => (Some(body), None),
        };
        let mut value = match factor {
            Some(f) => Self::from_rational(parse_rational(f)?),
            None => Self::one(),
        };
        if let Some(s) = sym {
            let idx = symbols
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::Parse(format!("unknown symbol {s:?} in {text:?}")))?;
            value = &value * &Self::symbol(idx);
        }
        Ok(if neg { -&value } else { value })
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let neg = int.trim().starts_with('-');
        let digits = format!("{}{}", int.trim().trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = text.trim().parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl Default for Coeff {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Coeff::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Coeff::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return Coeff {
                num: self.num.mul(&rhs.num),
                den: Poly::one(),
            };
        }
        Coeff::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &Coeff {
    type Output = Result<Coeff>;
    fn div(self, rhs: &Coeff) -> Result<Coeff> {
        Ok(self * &rhs.inv()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff::zero()
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
}

impl One for Coeff {
    fn one() -> Self {
        Coeff::one()
    }
}

/// Rational function field `Q(symbols)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CoefficientField {
    pub symbols: Vec<String>,
}

impl CoefficientField {
    pub fn rationals() -> Self {
        Self::default()
    }

    pub fn with_symbols<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Self {
        CoefficientField {
            symbols: symbols.into_iter().map(Into::into).collect(),
        }
    }

    pub fn symbol(&self, name: &str) -> Option<Coeff> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(Coeff::symbol)
    }

    pub fn parse(&self, text: &str) -> Result<Coeff> {
        Coeff::parse(text, &self.symbols)
    }

    pub fn format(&self, c: &Coeff) -> String {
        c.fmt_with(&self.symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Coeff {
        Coeff::symbol(0)
    }
    fn b() -> Coeff {
        Coeff::symbol(1)
    }

    #[test]
    fn fractions_cancel_to_normal_form() {
        let x = (&(&a() * &b()) / &a()).unwrap();
        assert_eq!(x, b());
        let y = (&Coeff::one() / &a()).unwrap();
        let z = &(&y * &a()) - &Coeff::one();
        assert!(z.is_zero());
    }

    #[test]
    fn sum_of_fractions() {
        // 1/a + 1/b = (a + b)/(a b)
        let s = &(&Coeff::one() / &a()).unwrap() + &(&Coeff::one() / &b()).unwrap();
        let expect = (&(&a() + &b()) / &(&a() * &b())).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(Coeff::zero().inv(), Err(Error::ZeroDenominator)));
        assert!(Coeff::fraction(Poly::one(), Poly::zero()).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn parsing() {
        let syms = vec!["alpha".to_string()];
        assert_eq!(
            Coeff::parse("\u{2212}1/2", &syms).unwrap(),
            Coeff::from_rational(BigRational::new((-1).into(), 2.into()))
        );
        assert_eq!(Coeff::parse("alpha", &syms).unwrap(), a());
        assert_eq!(
            Coeff::parse("-3/2*alpha", &syms).unwrap(),
            &Coeff::from_rational(BigRational::new((-3).into(), 2.into())) * &a()
        );
        assert_eq!(
            Coeff::parse("0.25", &syms).unwrap(),
            Coeff::from_rational(BigRational::new(1.into(), 4.into()))
        );
        assert!(Coeff::parse("beta", &syms).is_err());
    }

    #[test]
    fn display() {
        let names = vec!["a".to_string(), "b".to_string()];
        let x = (&a() / &(&a() + &b())).unwrap();
        assert_eq!(x.fmt_with(&names), "a/(a + b)");
    }
}
