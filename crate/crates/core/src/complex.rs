//! Subspaces and cohomology groups of a flow, computed inside the finite
//! model span.
//!
//! Every group here is model-internal: it is the answer for the span of the
//! given generators, which for the built-in models is identified with the
//! smooth answer by ergodicity arguments that live outside this crate.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{FormElement, GeneratorCalculus, LinearMap, OperatorKind};
use crate::field::{Coeff, CoefficientField};
use crate::linalg::{add_scaled, Matrix, Quotient, Span, Vector};

/// Finite presentation of a flow.
#[derive(Clone, Debug)]
pub struct FormModel {
    pub name: String,
    pub generator_names: Vec<String>,
    calc: GeneratorCalculus,
    /// Betti numbers `b_0..b_n` of the underlying manifold, when the model
    /// span does not compute them itself.
    pub betti: Option<Vec<u64>>,
    /// True when the model complex is the full de Rham complex up to
    /// quasi-isomorphism (constant forms on a torus).
    pub computes_de_rham: bool,
    pub genus: Option<u32>,
}

impl FormModel {
    pub fn new(
        name: impl Into<String>,
        generator_names: Vec<String>,
        field: Arc<CoefficientField>,
        d_values: Vec<FormElement>,
        ix_values: Vec<Coeff>,
    ) -> Result<Self> {
        if generator_names.len() != d_values.len() {
            return Err(Error::Shape(format!(
                "{} generator names for {} d-values",
                generator_names.len(),
                d_values.len()
            )));
        }
        let calc = GeneratorCalculus::new(field, d_values, ix_values).map_err(|(i, reason)| {
            Error::InvalidModel {
                generator: generator_names.get(i).cloned().unwrap_or_default(),
                reason,
            }
        })?;
        Ok(FormModel {
            name: name.into(),
            generator_names,
            calc,
            betti: None,
            computes_de_rham: false,
            genus: None,
        })
    }

    pub fn with_betti(mut self, betti: Vec<u64>) -> Result<Self> {
        if betti.len() != self.n() + 1 {
            return Err(Error::InvalidModel {
                generator: String::new(),
                reason: format!("betti list has {} entries, expected {}", betti.len(), self.n() + 1),
            });
        }
        self.betti = Some(betti);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.calc.generator_count()
    }

    pub fn field(&self) -> &Arc<CoefficientField> {
        self.calc.field()
    }

    pub fn calculus(&self) -> &GeneratorCalculus {
        &self.calc
    }

    pub fn generator(&self, i: usize) -> FormElement {
        FormElement::generator(self.field(), i)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|g| g == name)
    }

    /// Generator by name; panics on unknown names, for use with built-ins.
    pub fn gen(&self, name: &str) -> FormElement {
        let i = self
            .generator_index(name)
            .unwrap_or_else(|| panic!("no generator {name:?} in {}", self.name));
        self.generator(i)
    }

    pub fn wedge_names(&self, names: &[&str]) -> FormElement {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.generator_index(n).expect("known generator"))
            .collect();
        FormElement::wedge_of(self.field(), &idx)
    }

    pub fn format(&self, a: &FormElement) -> String {
        a.format(&self.generator_names)
    }

    pub fn dim(&self, k: i64) -> usize {
        self.calc.basis().dim(k)
    }

    pub fn op(&self, kind: OperatorKind, k: i64) -> LinearMap {
        self.calc.operator_matrix_unchecked(kind, k)
    }

    fn check_degree(&self, k: i64) -> Result<()> {
        if k < 0 || k > self.n() as i64 {
            return Err(Error::Degree {
                degree: k,
                max: self.n(),
            });
        }
        Ok(())
    }

    fn subspace(&self, k: i64, span: Span) -> Subspace {
        let forms = span
            .basis()
            .iter()
            .map(|v| self.calc.from_vector(v, k))
            .collect();
        Subspace {
            degree: k,
            span,
            forms,
        }
    }

    fn subquotient(&self, k: i64, num: Span, den: Span, what: &str) -> Result<SubquotientSpace> {
        let quotient = Quotient::new(num.clone(), den.clone()).map_err(|_| {
            Error::ModelInconsistency(format!("{what} in degree {k}: denominator not contained in numerator"))
        })?;
        Ok(SubquotientSpace {
            degree: k,
            numerator: self.subspace(k, num),
            denominator: self.subspace(k, den),
            quotient,
        })
    }

    // Spans in any integer degree; zero outside 0..=n.

    pub(crate) fn closed_span(&self, k: i64) -> Span {
        self.op(OperatorKind::D, k).kernel()
    }

    pub(crate) fn lambda_x_span(&self, k: i64) -> Span {
        self.op(OperatorKind::Contract, k).kernel()
    }

    pub(crate) fn invariant_span(&self, k: i64) -> Span {
        self.op(OperatorKind::Lie, k).kernel()
    }

    pub(crate) fn basic_span(&self, k: i64) -> Span {
        let lie = self.op(OperatorKind::Lie, k).matrix;
        let con = self.op(OperatorKind::Contract, k).matrix;
        Span::kernel_of(&Matrix::vstack(&[&lie, &con]).expect("same source"))
    }

    /// `Im(i_X) ⊂ Λ^k`, the contraction image of degree `k + 1`.
    pub(crate) fn contract_image_span(&self, k: i64) -> Span {
        let m = self.op(OperatorKind::Contract, k + 1);
        if m.source_dim() == 0 {
            return Span::zero(self.dim(k));
        }
        m.image()
    }

    pub(crate) fn d_of(&self, span: &Span, k: i64) -> Span {
        span.map(&self.op(OperatorKind::D, k).matrix)
    }

    pub(crate) fn lie_of(&self, span: &Span, k: i64) -> Span {
        span.map(&self.op(OperatorKind::Lie, k).matrix)
    }

    /// `C^k_X = Im(i_X) / ∇(Λ^k_X)` as spans.
    pub(crate) fn cokernel_spans(&self, k: i64) -> (Span, Span) {
        let lx = self.lambda_x_span(k);
        let num = self.contract_image_span(k).intersect(&lx);
        let den = self.lie_of(&lx, k);
        (num, den)
    }

    pub(crate) fn cokernel_quotient(&self, k: i64) -> Result<Quotient> {
        let (num, den) = self.cokernel_spans(k);
        Quotient::new(num, den).map_err(|_| {
            Error::ModelInconsistency(format!(
                "degree {k}: image of the restricted Lie derivative is not inside Im(i_X)"
            ))
        })
    }

    /// `H^k_X = Z^k / d(Λ^{k-1}_X)`.
    pub(crate) fn relative_quotient(&self, k: i64) -> Result<Quotient> {
        let den = self.d_of(&self.lambda_x_span(k - 1), k - 1);
        Quotient::new(self.closed_span(k), den)
            .map_err(|_| Error::ModelInconsistency(format!("d(Λ_X) not closed in degree {k}")))
    }

    pub(crate) fn subcomplex_quotient(&self, which: Subcomplex, k: i64) -> Result<Quotient> {
        let s = |j| self.subcomplex_span(which, j);
        let num = s(k).intersect(&self.closed_span(k));
        let den = self.d_of(&s(k - 1), k - 1);
        Quotient::new(num, den).map_err(|_| {
            Error::ModelInconsistency(format!("{which:?} subcomplex is not d-closed in degree {k}"))
        })
    }

    pub(crate) fn subcomplex_span(&self, which: Subcomplex, k: i64) -> Span {
        match which {
            Subcomplex::Full => Span::full(self.dim(k)),
            Subcomplex::Invariant => self.invariant_span(k),
            Subcomplex::Basic => self.basic_span(k),
        }
    }

    // Public operations.

    /// `Λ^k_X`, forms annihilated by the contraction.
    pub fn lambda_x(&self, k: i64) -> Result<Subspace> {
        self.check_degree(k)?;
        Ok(self.subspace(k, self.lambda_x_span(k)))
    }

    pub fn invariant(&self, k: i64) -> Result<Subspace> {
        self.check_degree(k)?;
        Ok(self.subspace(k, self.invariant_span(k)))
    }

    /// `Λ^k(M/X) = Λ^k_inv ∩ Λ^k_X`.
    pub fn basic(&self, k: i64) -> Result<Subspace> {
        self.check_degree(k)?;
        Ok(self.subspace(k, self.basic_span(k)))
    }

    pub fn cokernel_c(&self, k: i64) -> Result<SubquotientSpace> {
        self.check_degree(k)?;
        let (num, den) = self.cokernel_spans(k);
        self.subquotient(k, num, den, "C_X")
    }

    pub fn relative_h_x(&self, k: i64) -> Result<SubquotientSpace> {
        self.check_degree(k)?;
        let den = self.d_of(&self.lambda_x_span(k - 1), k - 1);
        self.subquotient(k, self.closed_span(k), den, "H_X")
    }

    fn subcomplex_cohomology(&self, which: Subcomplex, k: i64) -> Result<SubquotientSpace> {
        self.check_degree(k)?;
        let s = |j| self.subcomplex_span(which, j);
        let num = s(k).intersect(&self.closed_span(k));
        let den = self.d_of(&s(k - 1), k - 1);
        self.subquotient(k, num, den, &format!("{which:?} cohomology"))
    }

    pub fn basic_cohomology(&self, k: i64) -> Result<SubquotientSpace> {
        self.subcomplex_cohomology(Subcomplex::Basic, k)
    }

    pub fn invariant_cohomology(&self, k: i64) -> Result<SubquotientSpace> {
        self.subcomplex_cohomology(Subcomplex::Invariant, k)
    }

    /// Cohomology of the full model complex. Equals the manifold's de Rham
    /// cohomology only when `computes_de_rham` holds.
    pub fn de_rham_cohomology(&self, k: i64) -> Result<SubquotientSpace> {
        self.subcomplex_cohomology(Subcomplex::Full, k)
    }

    /// `Ker(i_X) / Im(i_X)` in degree `k`.
    pub fn contraction_homology(&self, k: i64) -> Result<SubquotientSpace> {
        self.check_degree(k)?;
        self.subquotient(
            k,
            self.lambda_x_span(k),
            self.contract_image_span(k),
            "Ker(i_X)/Im(i_X)",
        )
    }

    pub fn dims(&self, which: Subcomplex) -> Result<Vec<usize>> {
        (0..=self.n() as i64)
            .map(|k| Ok(self.subcomplex_quotient(which, k)?.dim()))
            .collect()
    }

    pub fn cokernel_complex(&self) -> Result<CokernelComplex> {
        let n = self.n() as i64;
        let spaces: Vec<Quotient> = (0..n).map(|k| self.cokernel_quotient(k)).collect::<Result<_>>()?;
        let mut differentials = Vec::new();
        for k in 0..n {
            let target = if k + 1 < n {
                spaces[(k + 1) as usize].clone()
            } else {
                self.cokernel_quotient(k + 1)?
            };
            let contract_src = self.op(OperatorKind::Contract, k + 1).matrix;
            let d = self.op(OperatorKind::D, k + 1).matrix;
            let contract_dst = self.op(OperatorKind::Contract, k + 2).matrix;
            let what = format!("d_C in degree {k}");
            let f = |v: &[Coeff]| -> Result<Vec<Vector>> {
                let lifts = lift_choices(&contract_src, v, &what)?;
                Ok(lifts.iter().map(|u| contract_dst.apply(&d.apply(u))).collect())
            };
            let m = induced_map(&spaces[k as usize], &target, &f, &what)?;
            differentials.push(m);
        }
        let mut square_zero = true;
        for w in differentials.windows(2) {
            if !w[1].mul(&w[0])?.is_zero() {
                square_zero = false;
            }
        }
        let ranks: Vec<usize> = differentials.iter().map(Matrix::rank).collect();
        let cohomology_dims = (0..n as usize)
            .map(|k| {
                let incoming = if k == 0 { 0 } else { ranks[k - 1] };
                spaces[k].dim() - ranks[k] - incoming
            })
            .collect();
        Ok(CokernelComplex {
            dims: spaces.iter().map(Quotient::dim).collect(),
            spaces,
            differentials,
            square_zero,
            cohomology_dims,
        })
    }

    pub fn proposition1(&self) -> Result<Proposition1Report> {
        let n = self.n() as i64;
        let h = self.relative_quotient(n)?.dim();
        let c = self.cokernel_quotient(n - 1)?.dim();
        Ok(Proposition1Report {
            model: self.name.clone(),
            dim_h_n_x: h,
            dim_c_n_minus_1: c,
            holds: h == c,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcomplex {
    Full,
    Invariant,
    Basic,
}

/// Subspace of `Λ^k` with an independent basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub degree: i64,
    pub span: Span,
    pub forms: Vec<FormElement>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }
}

#[derive(Clone, Debug)]
pub struct SubquotientSpace {
    pub degree: i64,
    pub numerator: Subspace,
    pub denominator: Subspace,
    pub quotient: Quotient,
}

impl SubquotientSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

#[derive(Clone, Debug)]
pub struct CokernelComplex {
    /// `C^0 .. C^{n-1}`.
    pub spaces: Vec<Quotient>,
    pub dims: Vec<usize>,
    /// `d_C: C^k → C^{k+1}` in representative coordinates; the last one maps
    /// into the zero space `C^n`.
    pub differentials: Vec<Matrix>,
    pub square_zero: bool,
    pub cohomology_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition1Report {
    pub model: String,
    pub dim_h_n_x: usize,
    pub dim_c_n_minus_1: usize,
    pub holds: bool,
}

/// Preimages of `v` under `m`: the canonical solution and a second one
/// shifted by a fixed combination of kernel vectors.
pub(crate) fn lift_choices(m: &Matrix, v: &[Coeff], what: &str) -> Result<Vec<Vector>> {
    let u = m
        .solve(v)
        .ok_or_else(|| Error::ModelInconsistency(format!("{what}: no preimage")))?;
    let kernel = m.kernel();
    if kernel.is_empty() {
        return Ok(vec![u]);
    }
    let mut w = u.clone();
    for (j, kv) in kernel.iter().enumerate() {
        add_scaled(&mut w, kv, &Coeff::from_int(j as i64 + 1));
    }
    Ok(vec![u, w])
}

/// Matrix of a map between quotients given on representatives by `f`.
///
/// `f` returns the image for each admissible choice made while evaluating
/// it (preimages, correction terms); all of them must agree modulo the
/// target denominator. Also checks that images lie in the target numerator
/// and that the source denominator maps to zero classes.
pub(crate) fn induced_map(
    source: &Quotient,
    target: &Quotient,
    f: &dyn Fn(&[Coeff]) -> Result<Vec<Vector>>,
    what: &str,
) -> Result<Matrix> {
    let mut columns = Vec::with_capacity(source.dim());
    for rep in source.representatives() {
        let images = f(rep)?;
        let class = target
            .class_of(&images[0])
            .ok_or_else(|| Error::ModelInconsistency(format!("{what}: image outside target")))?;
        for other in &images[1..] {
            let diff: Vector = images[0].iter().zip(other).map(|(a, b)| a - b).collect();
            if !target.is_zero_class(&diff) {
                return Err(Error::ModelInconsistency(format!("{what}: depends on choices")));
            }
        }
        columns.push(class);
    }
    for den in source.denominator().basis() {
        for img in f(den)? {
            if !target.is_zero_class(&img) {
                return Err(Error::ModelInconsistency(format!("{what}: not well defined on classes")));
            }
        }
    }
    Ok(Matrix::from_columns(target.dim(), &columns))
}

/// Matrix of the map on quotients induced by an ambient linear map.
pub(crate) fn induced_by_matrix(source: &Quotient, target: &Quotient, ambient: &Matrix, what: &str) -> Result<Matrix> {
    induced_map(source, target, &|v| Ok(vec![ambient.apply(v)]), what)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{instantiate, torus, ModelSpec};

    fn sl2(name: &str) -> FormModel {
        instantiate(&ModelSpec::parse(name, None).unwrap()).unwrap()
    }

    fn dims(m: &FormModel, f: impl Fn(i64) -> Result<SubquotientSpace>) -> Vec<usize> {
        (0..=m.n() as i64).map(|k| f(k).unwrap().dim()).collect()
    }

    #[test]
    fn geodesic_groups() {
        let m = sl2("sl2-geodesic");
        assert_eq!(m.lambda_x(1).unwrap().dim(), 2);
        assert_eq!(m.invariant(1).unwrap().dim(), 1);
        assert_eq!(m.basic(1).unwrap().dim(), 0);
        assert_eq!(dims(&m, |k| m.basic_cohomology(k)), [1, 0, 1, 0]);
        assert_eq!(dims(&m, |k| m.invariant_cohomology(k)), [1, 0, 0, 1]);
        assert_eq!(m.cokernel_c(2).unwrap().dim(), 1);
        assert_eq!(m.relative_h_x(3).unwrap().dim(), 1);
        assert_eq!(m.contraction_homology(1).unwrap().dim(), 0);
        let cc = m.cokernel_complex().unwrap();
        assert!(cc.square_zero);
        assert_eq!(cc.cohomology_dims[2], 1);
        assert!(m.proposition1().unwrap().holds);
    }

    #[test]
    fn horocycle_groups() {
        let m = sl2("sl2-horocycle-plus");
        let basic = m.basic(1).unwrap();
        assert_eq!(basic.dim(), 1);
        assert_eq!(m.format(&basic.forms[0]), "ω+");
        assert_eq!(dims(&m, |k| m.basic_cohomology(k))[..3], [1, 0, 0]);
        let cc = m.cokernel_complex().unwrap();
        assert_eq!(cc.dims, [1, 1, 1]);
        assert_eq!(cc.cohomology_dims, [0, 0, 1]);
        assert!(m.proposition1().unwrap().holds);
    }

    #[test]
    fn torus_groups() {
        let m = torus(2).unwrap();
        assert_eq!(m.lambda_x(1).unwrap().dim(), 1);
        assert_eq!(m.lambda_x(0).unwrap().dim(), 1);
        assert_eq!(m.cokernel_c(0).unwrap().dim(), 1);
        assert_eq!(m.cokernel_c(2).unwrap().dim(), 0);
        assert_eq!(m.relative_h_x(1).unwrap().dim(), 2);
        assert_eq!(m.relative_h_x(2).unwrap().dim(), 1);
        let cc = m.cokernel_complex().unwrap();
        assert!(cc.differentials.iter().all(Matrix::is_zero));
        assert_eq!(cc.cohomology_dims, cc.dims);
        let p = m.proposition1().unwrap();
        assert_eq!((p.dim_h_n_x, p.dim_c_n_minus_1), (1, 1));
        assert!(matches!(m.basic(3), Err(Error::Degree { .. })));
    }

    #[test]
    fn zero_contraction_homology() {
        let field = Arc::new(CoefficientField::rationals());
        let z = FormElement::zero(&field);
        let m = FormModel::new("flat", vec!["a".into(), "b".into()], field, vec![z.clone(), z], vec![Coeff::zero(); 2])
            .unwrap();
        assert_eq!(m.contraction_homology(0).unwrap().dim(), 1);
    }
}
