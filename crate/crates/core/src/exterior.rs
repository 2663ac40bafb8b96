//! Exterior algebra on degree-one generators with exact coefficients, and the
//! three Cartan operators `d`, `i_X`, and the Lie derivative `d i_X + i_X d`
//! extended from their values on generators.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, CoefficientField};
use crate::linalg::{Matrix, Span, Vector};

pub const MAX_GENERATORS: usize = 64;

/// Wedge of distinct generators, stored as a bit set. Indices are read in
/// increasing order, which is the canonical sign convention.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    pub fn generator(i: usize) -> Self {
        assert!(i < MAX_GENERATORS, "generator index {i} too large");
        Monomial(1 << i)
    }

    /// Normalizes a product of generators given in arbitrary order.
    /// Returns `None` when an index repeats (the product vanishes), otherwise
    /// the sorted monomial and the permutation sign.
    pub fn from_indices(indices: &[usize]) -> Option<(Monomial, i8)> {
        let mut acc = Monomial::UNIT;
        let mut sign = 1i8;
        for &i in indices {
            let (m, s) = acc.wedge(Monomial::generator(i))?;
            acc = m;
            sign *= s;
        }
        Some((acc, sign))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_GENERATORS).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// `self ∧ other` in canonical order with its sign, or `None` if a
    /// generator repeats.
    pub fn wedge(self, other: Monomial) -> Option<(Monomial, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each generator j of `other` moves left past the generators of
        // `self` with larger index.
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            rest &= rest - 1;
        }
        Some((Monomial(self.0 | other.0), if swaps % 2 == 0 { 1 } else { -1 }))
    }

    fn split_first(self) -> Option<(usize, Monomial)> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        Some((i, Monomial(self.0 & (self.0 - 1))))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// Element of the exterior algebra: nonzero coefficients on canonical
/// monomials, possibly of mixed degree.
#[derive(Clone)]
pub struct FormElement {
    field: Arc<CoefficientField>,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for FormElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FormElement {}

impl fmt::Debug for FormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_GENERATORS).map(|i| format!("e{i}")).collect();
        f.write_str(&self.format(&names))
    }
}

impl FormElement {
    pub fn zero(field: &Arc<CoefficientField>) -> Self {
        FormElement {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(field: &Arc<CoefficientField>, c: Coeff) -> Self {
        Self::term(field, Monomial::UNIT, c)
    }

    pub fn generator(field: &Arc<CoefficientField>, i: usize) -> Self {
        Self::term(field, Monomial::generator(i), Coeff::one())
    }

    pub fn term(field: &Arc<CoefficientField>, m: Monomial, c: Coeff) -> Self {
        let mut e = Self::zero(field);
        e.add_term(m, c);
        e
    }

    /// Product of generators in the given order; repeated indices give zero.
    pub fn wedge_of(field: &Arc<CoefficientField>, indices: &[usize]) -> Self {
        match Monomial::from_indices(indices) {
            None => Self::zero(field),
            Some((m, s)) => Self::term(field, m, Coeff::from_int(s as i64)),
        }
    }

    pub fn field(&self) -> &Arc<CoefficientField> {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> Coeff {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous; `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_part(&self, k: usize) -> FormElement {
        FormElement {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_field(&self, other: &FormElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.symbols.clone(),
                right: other.field.symbols.clone(),
            })
        }
    }

    pub fn add(&self, other: &FormElement) -> Result<FormElement> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FormElement) -> Result<FormElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormElement {
        self.scale(&Coeff::from_int(-1))
    }

    pub fn scale(&self, s: &Coeff) -> FormElement {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn wedge(&self, other: &FormElement) -> Result<FormElement> {
        self.check_field(other)?;
        let mut out = Self::zero(&self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = ma.wedge(*mb) {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn format(&self, generator_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<&str> = m
                    .indices()
                    .into_iter()
                    .map(|i| generator_names.get(i).map_or("?", String::as_str))
                    .collect();
                let coef = self.field.format(c);
                if mono.is_empty() {
                    coef
                } else if c.is_one() {
                    mono.join("∧")
                } else if coef == "-1" {
                    format!("-{}", mono.join("∧"))
                } else if c.numerator().num_terms() > 1 || !c.denominator().is_constant() {
                    format!("({coef})·{}", mono.join("∧"))
                } else {
                    format!("{coef}·{}", mono.join("∧"))
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Enumerated monomial bases of every degree, in canonical order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    by_degree: Vec<Vec<Monomial>>,
    position: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize) -> Self {
        let mut by_degree = vec![Vec::new(); n + 1];
        for bits in 0u64..(1u64 << n) {
            let m = Monomial(bits);
            by_degree[m.degree()].push(m);
        }
        let mut position = HashMap::new();
        for list in &mut by_degree {
            list.sort();
            for (i, m) in list.iter().enumerate() {
                position.insert(*m, i);
            }
        }
        MonomialBasis {
            by_degree,
            position,
        }
    }

    /// Basis of degree `k`; empty outside `0..=n`.
    pub fn degree(&self, k: i64) -> &[Monomial] {
        if k < 0 {
            return &[];
        }
        self.by_degree.get(k as usize).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, k: i64) -> usize {
        self.degree(k).len()
    }

    pub fn position(&self, m: Monomial) -> usize {
        self.position[&m]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    D,
    Contract,
    Lie,
}

impl OperatorKind {
    pub fn degree_shift(self) -> i64 {
        match self {
            OperatorKind::D => 1,
            OperatorKind::Contract => -1,
            OperatorKind::Lie => 0,
        }
    }
}

/// Matrix of a degree-homogeneous operator in the monomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub source_degree: i64,
    pub target_degree: i64,
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel(&self) -> Span {
        Span::kernel_of(&self.matrix)
    }

    pub fn image(&self) -> Span {
        Span::image_of(&self.matrix)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `(dim kernel, dim cokernel, index)`.
    pub fn fredholm(&self) -> (usize, usize, i64) {
        let r = self.rank();
        let k = self.source_dim() - r;
        let c = self.target_dim() - r;
        (k, c, k as i64 - c as i64)
    }

    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap {
            source_degree: first.source_degree,
            target_degree: self.target_degree,
            matrix: self.matrix.mul(&first.matrix)?,
        })
    }
}

/// Generator data: `d` of each generator (a 2-form) and `i_X` of each
/// generator (a scalar).
#[derive(Clone, Debug)]
pub struct GeneratorCalculus {
    field: Arc<CoefficientField>,
    d_values: Vec<FormElement>,
    ix_values: Vec<Coeff>,
    basis: Arc<MonomialBasis>,
}

impl GeneratorCalculus {
    /// Checks shapes and `d∘d = 0` on generators. On failure returns the
    /// index of the offending generator with a reason.
    pub fn new(
        field: Arc<CoefficientField>,
        d_values: Vec<FormElement>,
        ix_values: Vec<Coeff>,
    ) -> std::result::Result<Self, (usize, String)> {
        let n = d_values.len();
        if n > MAX_GENERATORS {
            return Err((0, format!("at most {MAX_GENERATORS} generators supported")));
        }
        if ix_values.len() != n {
            return Err((0, format!("{} contraction values for {n} generators", ix_values.len())));
        }
        for (i, dv) in d_values.iter().enumerate() {
            if !dv.is_zero() && dv.degree() != Some(2) {
                return Err((i, "d-value is not a 2-form".into()));
            }
            if dv.terms.keys().any(|m| m.bits() >> n != 0) {
                return Err((i, "d-value uses an undeclared generator".into()));
            }
            if dv.check_field(&FormElement::zero(&field)).is_err() {
                return Err((i, "d-value over a different coefficient field".into()));
            }
        }
        let calc = GeneratorCalculus {
            basis: Arc::new(MonomialBasis::new(n)),
            field,
            d_values,
            ix_values,
        };
        for i in 0..n {
            let g = FormElement::generator(&calc.field, i);
            let dd = calc.apply_d(&calc.apply_d(&g).expect("same field")).expect("same field");
            if !dd.is_zero() {
                return Err((i, format!("d(d(generator)) = {dd:?} is nonzero")));
            }
        }
        Ok(calc)
    }

    pub fn field(&self) -> &Arc<CoefficientField> {
        &self.field
    }

    pub fn generator_count(&self) -> usize {
        self.d_values.len()
    }

    pub fn d_values(&self) -> &[FormElement] {
        &self.d_values
    }

    pub fn ix_values(&self) -> &[Coeff] {
        &self.ix_values
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    fn d_monomial(&self, m: Monomial) -> FormElement {
        match m.split_first() {
            None => FormElement::zero(&self.field),
            Some((g, rest)) => {
                // d(g ∧ r) = dg ∧ r − g ∧ dr
                let rest_form = FormElement::term(&self.field, rest, Coeff::one());
                let a = self.d_values[g].wedge(&rest_form).expect("same field");
                let gen = FormElement::generator(&self.field, g);
                let b = gen.wedge(&self.d_monomial(rest)).expect("same field");
                a.sub(&b).expect("same field")
            }
        }
    }

    fn contract_monomial(&self, m: Monomial) -> FormElement {
        match m.split_first() {
            None => FormElement::zero(&self.field),
            Some((g, rest)) => {
                // i(g ∧ r) = i(g) r − g ∧ i(r)
                let a = FormElement::term(&self.field, rest, self.ix_values[g].clone());
                let gen = FormElement::generator(&self.field, g);
                let b = gen.wedge(&self.contract_monomial(rest)).expect("same field");
                a.sub(&b).expect("same field")
            }
        }
    }

    fn linear_extension(
        &self,
        a: &FormElement,
        f: impl Fn(Monomial) -> FormElement,
    ) -> Result<FormElement> {
        a.check_field(&FormElement::zero(&self.field))?;
        let mut out = FormElement::zero(&self.field);
        for (m, c) in &a.terms {
            for (mm, cc) in f(*m).terms {
                out.add_term(mm, &cc * c);
            }
        }
        Ok(out)
    }

    pub fn apply_d(&self, a: &FormElement) -> Result<FormElement> {
        self.linear_extension(a, |m| self.d_monomial(m))
    }

    pub fn contract(&self, a: &FormElement) -> Result<FormElement> {
        self.linear_extension(a, |m| self.contract_monomial(m))
    }

    pub fn lie(&self, a: &FormElement) -> Result<FormElement> {
        let di = self.apply_d(&self.contract(a)?)?;
        let id = self.contract(&self.apply_d(a)?)?;
        di.add(&id)
    }

    pub fn apply(&self, kind: OperatorKind, a: &FormElement) -> Result<FormElement> {
        match kind {
            OperatorKind::D => self.apply_d(a),
            OperatorKind::Contract => self.contract(a),
            OperatorKind::Lie => self.lie(a),
        }
    }

    fn check_degree(&self, k: i64) -> Result<()> {
        let n = self.generator_count();
        if k < 0 || k > n as i64 {
            return Err(Error::Degree { degree: k, max: n });
        }
        Ok(())
    }

    /// Coordinates of a homogeneous degree-`k` element.
    pub fn to_vector(&self, a: &FormElement, k: i64) -> Result<Vector> {
        let mut v = vec![Coeff::zero(); self.basis.dim(k)];
        for (m, c) in &a.terms {
            if m.degree() as i64 != k {
                return Err(Error::Shape(format!("element has a term of degree {}", m.degree())));
            }
            v[self.basis.position(*m)] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Coeff], k: i64) -> FormElement {
        let mut out = FormElement::zero(&self.field);
        for (m, c) in self.basis.degree(k).iter().zip(v) {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Matrix of `kind` on degree `k`, mapping into degree `k + shift`.
    /// Targets outside `0..=n` are zero-dimensional.
    pub fn operator_matrix(&self, kind: OperatorKind, k: i64) -> Result<LinearMap> {
        self.check_degree(k)?;
        Ok(self.operator_matrix_unchecked(kind, k))
    }

    /// Like [`operator_matrix`](Self::operator_matrix) but any integer
    /// degree is accepted; out-of-range spaces are zero.
    pub fn operator_matrix_unchecked(&self, kind: OperatorKind, k: i64) -> LinearMap {
        let target = k + kind.degree_shift();
        let src = self.basis.degree(k);
        let mut matrix = Matrix::zeros(self.basis.dim(target), src.len());
        for (j, m) in src.iter().enumerate() {
            let unit = FormElement::term(&self.field, *m, Coeff::one());
            let img = self.apply(kind, &unit).expect("same field");
            for (mm, c) in img.terms {
                matrix.set(self.basis.position(mm), j, c);
            }
        }
        LinearMap {
            source_degree: k,
            target_degree: target,
            matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_field() -> Arc<CoefficientField> {
        Arc::new(CoefficientField::rationals())
    }

    /// Generators (ω₀, ω₊, ω₋) = (0, 1, 2).
    fn sl2(ix: [i64; 3]) -> GeneratorCalculus {
        let f = sl2_field();
        let d = vec![
            FormElement::wedge_of(&f, &[1, 2]),
            FormElement::wedge_of(&f, &[0, 1]),
            FormElement::wedge_of(&f, &[0, 2]).neg(),
        ];
        GeneratorCalculus::new(f, d, ix.iter().map(|&x| Coeff::from_int(x)).collect()).unwrap()
    }

    #[test]
    fn wedge_signs() {
        let f = sl2_field();
        let w0 = FormElement::generator(&f, 0);
        let wp = FormElement::generator(&f, 1);
        let wm = FormElement::generator(&f, 2);
        assert!(w0.wedge(&w0).unwrap().is_zero());
        let pm = wp.wedge(&wm).unwrap();
        assert_eq!(pm, FormElement::wedge_of(&f, &[1, 2]));
        assert_eq!(wm.wedge(&wp).unwrap(), pm.neg());
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = FormElement::generator(&sl2_field(), 0);
        let b = FormElement::generator(&Arc::new(CoefficientField::with_symbols(["t"])), 0);
        assert!(matches!(a.wedge(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn geodesic_generator_values() {
        let c = sl2([1, 0, 0]);
        let f = c.field().clone();
        let w = |i| FormElement::generator(&f, i);
        assert_eq!(c.apply_d(&w(0)).unwrap(), FormElement::wedge_of(&f, &[1, 2]));
        assert!(c.apply_d(&FormElement::wedge_of(&f, &[1, 2])).unwrap().is_zero());
        assert!(c.apply_d(&FormElement::scalar(&f, Coeff::from_int(5))).unwrap().is_zero());
        assert_eq!(c.contract(&w(0)).unwrap(), FormElement::scalar(&f, Coeff::one()));
        assert_eq!(
            c.contract(&FormElement::wedge_of(&f, &[0, 1, 2])).unwrap(),
            FormElement::wedge_of(&f, &[1, 2])
        );
        assert!(c.contract(&FormElement::scalar(&f, Coeff::from_int(3))).unwrap().is_zero());
        assert_eq!(c.lie(&w(1)).unwrap(), w(1));
        assert_eq!(c.lie(&w(2)).unwrap(), w(2).neg());
        assert!(c.lie(&w(0)).unwrap().is_zero());
    }

    #[test]
    fn horocycle_plus_lie() {
        let c = sl2([0, 0, 1]);
        let f = c.field().clone();
        assert!(c.lie(&FormElement::generator(&f, 1)).unwrap().is_zero());
        let m = c.operator_matrix(OperatorKind::Lie, 1).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.matrix.power(3).unwrap().is_zero());
    }

    #[test]
    fn top_degree_d_is_zero_map_and_range_is_checked() {
        let c = sl2([1, 0, 0]);
        let m = c.operator_matrix(OperatorKind::D, 3).unwrap();
        assert_eq!(m.target_dim(), 0);
        assert!(matches!(c.operator_matrix(OperatorKind::D, 4), Err(Error::Degree { .. })));
        assert!(c.operator_matrix(OperatorKind::Lie, -1).is_err());
    }

    #[test]
    fn d_squared_violation_rejected() {
        // dω₀ = ω₁∧ω₂ with dω₁ = ω₀∧ω₁ and dω₂ = 0 gives d²ω₀ = ω₀∧ω₁∧ω₂.
        let f = sl2_field();
        let d = vec![
            FormElement::wedge_of(&f, &[1, 2]),
            FormElement::wedge_of(&f, &[0, 1]),
            FormElement::zero(&f),
        ];
        let err = GeneratorCalculus::new(f, d, vec![Coeff::zero(); 3]).unwrap_err();
        assert_eq!(err.0, 0);
    }
}
