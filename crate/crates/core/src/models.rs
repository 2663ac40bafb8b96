//! Built-in models, their operator tables, and model-specific checks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::FormModel;
use crate::error::{Error, Result};
use crate::exterior::{FormElement, Monomial, OperatorKind};
use crate::field::{Coeff, CoefficientField};
use crate::linalg::{Matrix, Quotient, Span};

pub const SL2_GENERATORS: [&str; 3] = ["ω0", "ω+", "ω-"];
pub const DEFAULT_GENUS: u32 = 2;
pub const MAX_TORUS_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ModelKind {
    Torus { n: usize },
    Sl2Geodesic,
    Sl2HorocyclePlus,
    Sl2HorocycleMinus,
    FlatSymplecticTorus { dim: usize },
    CustomFromFile { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub genus: u32,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            genus: DEFAULT_GENUS,
        }
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    /// Parses a built-in model name. `n` sizes the torus models and defaults
    /// to 2 for `torus` and 4 for `flat-symplectic-torus`.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self> {
        let kind = match name {
            "torus" => ModelKind::Torus { n: n.unwrap_or(2) },
            "sl2-geodesic" => ModelKind::Sl2Geodesic,
            "sl2-horocycle-plus" => ModelKind::Sl2HorocyclePlus,
            "sl2-horocycle-minus" => ModelKind::Sl2HorocycleMinus,
            "flat-symplectic-torus" => ModelKind::FlatSymplecticTorus { dim: n.unwrap_or(4) },
            other => return Err(Error::UnknownModel(other.to_string())),
        };
        Ok(ModelSpec::new(kind))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ModelKind::Torus { n } => format!("torus-{n}"),
            ModelKind::Sl2Geodesic => "sl2-geodesic".into(),
            ModelKind::Sl2HorocyclePlus => "sl2-horocycle-plus".into(),
            ModelKind::Sl2HorocycleMinus => "sl2-horocycle-minus".into(),
            ModelKind::FlatSymplecticTorus { dim } => format!("flat-symplectic-torus-{dim}"),
            ModelKind::CustomFromFile { path } => path.clone(),
        }
    }
}

/// One line per built-in family for listings.
pub fn builtin_models() -> Vec<(&'static str, &'static str)> {
    vec![
        ("torus", "linear flow on T^n with symbolic slope (alpha1..alphan), n >= 2"),
        ("sl2-geodesic", "geodesic flow on the unit tangent bundle of a hyperbolic surface"),
        ("sl2-horocycle-plus", "stable horocycle flow, i(ω-) = 1"),
        ("sl2-horocycle-minus", "unstable horocycle flow, i(ω+) = 1"),
        ("flat-symplectic-torus", "Hamiltonian flow of H = c on a flat symplectic torus of even dimension"),
    ]
}

pub fn instantiate(spec: &ModelSpec) -> Result<FormModel> {
    match &spec.kind {
        ModelKind::Torus { n } => torus(*n),
        ModelKind::Sl2Geodesic => sl2(spec, [1, 0, 0]),
        ModelKind::Sl2HorocyclePlus => sl2(spec, [0, 0, 1]),
        ModelKind::Sl2HorocycleMinus => sl2(spec, [0, 1, 0]),
        ModelKind::FlatSymplecticTorus { dim } => flat_symplectic_torus(*dim).map(|(m, _)| m),
        ModelKind::CustomFromFile { path } => load_model_file(Path::new(path)),
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn torus_betti(n: usize) -> Vec<u64> {
    (0..=n).map(|k| binomial(n, k)).collect()
}

pub fn torus(n: usize) -> Result<FormModel> {
    if !(2..=MAX_TORUS_DIM).contains(&n) {
        return Err(Error::Domain(format!("torus dimension must be in 2..={MAX_TORUS_DIM}, got {n}")));
    }
    let field = Arc::new(CoefficientField::with_symbols((1..=n).map(|i| format!("alpha{i}"))));
    let names = (1..=n).map(|i| format!("dx{i}")).collect();
    let d = vec![FormElement::zero(&field); n];
    let ix = (0..n).map(Coeff::symbol).collect();
    let mut m = FormModel::new(format!("torus-{n}"), names, field, d, ix)?.with_betti(torus_betti(n))?;
    m.computes_de_rham = true;
    Ok(m)
}

fn sl2(spec: &ModelSpec, ix: [i64; 3]) -> Result<FormModel> {
    if spec.genus < 1 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let field = Arc::new(CoefficientField::rationals());
    let g = |i| FormElement::generator(&field, i);
    let w = |a: usize, b: usize| g(a).wedge(&g(b)).expect("same field");
    // dω0 = ω+∧ω-, dω+ = ω0∧ω+, dω- = -ω0∧ω-
    let d = vec![w(1, 2), w(0, 1), w(0, 2).neg()];
    let names = SL2_GENERATORS.iter().map(|s| s.to_string()).collect();
    let ix = ix.iter().map(|&c| Coeff::from_int(c)).collect();
    let g2 = 2 * spec.genus as u64;
    let mut m = FormModel::new(spec.name(), names, field, d, ix)?.with_betti(vec![1, g2, g2, 1])?;
    m.genus = Some(spec.genus);
    Ok(m)
}

/// Forms attached to the flat symplectic torus: `Ω`, the Hamiltonian
/// differential `dc`, and `dt`.
#[derive(Clone, Debug)]
pub struct SymplecticData {
    pub omega: FormElement,
    pub dc: FormElement,
    pub dt: FormElement,
}

/// Coordinates `x^i, p^i (i < m), c, t` with `Ω = Σ dx^i∧dp^i + dc∧dt`.
/// The field `X` solves `i_X Ω = -dc`.
pub fn flat_symplectic_torus(dim: usize) -> Result<(FormModel, SymplecticData)> {
    if dim < 2 || dim % 2 != 0 || dim > MAX_TORUS_DIM {
        return Err(Error::Domain(format!(
            "flat symplectic torus needs an even dimension in 2..={MAX_TORUS_DIM}, got {dim}"
        )));
    }
    let half = dim / 2;
    let mut names = Vec::with_capacity(dim);
    for i in 1..half {
        names.push(format!("dx{i}"));
        names.push(format!("dp{i}"));
    }
    names.push("dc".to_string());
    names.push("dt".to_string());
    let field = Arc::new(CoefficientField::rationals());

    // Ω_ab with Ω = Σ_{a<b} Ω_ab e_a∧e_b, paired consecutively.
    let mut omega_m = Matrix::zeros(dim, dim);
    for p in 0..half {
        omega_m.set(2 * p, 2 * p + 1, Coeff::one());
        omega_m.set(2 * p + 1, 2 * p, Coeff::from_int(-1));
    }
    // i_X Ω = Σ_b (Σ_a Ω_ab ξ_a) e_b, so ξ solves Ωᵀ ξ = -dc.
    let mut rhs = vec![Coeff::zero(); dim];
    rhs[dim - 2] = Coeff::from_int(-1);
    let xi = omega_m
        .transpose()
        .solve(&rhs)
        .ok_or_else(|| Error::ModelInconsistency("symplectic form is degenerate".into()))?;

    let d = vec![FormElement::zero(&field); dim];
    let mut model = FormModel::new(format!("flat-symplectic-torus-{dim}"), names, field.clone(), d, xi)?
        .with_betti(torus_betti(dim))?;
    model.computes_de_rham = true;

    let mut omega = FormElement::zero(&field);
    for p in 0..half {
        omega = omega.add(&FormElement::wedge_of(&field, &[2 * p, 2 * p + 1]))?;
    }
    let data = SymplecticData {
        omega,
        dc: model.generator(dim - 2),
        dt: model.generator(dim - 1),
    };
    Ok((model, data))
}

// Operator tables.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffStatus {
    Match,
    MatchUpToPm,
    SignFlip,
    Mismatch,
}

impl fmt::Display for DiffStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffStatus::Match => "match",
            DiffStatus::MatchUpToPm => "match-up-to-±",
            DiffStatus::SignFlip => "sign-flip",
            DiffStatus::Mismatch => "mismatch",
        })
    }
}

/// How the printed value fixes its sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrintedSign {
    Definite,
    /// Printed with `±`; the expected value is the upper reading.
    PlusMinus,
    /// Printed without `±` but obtained from entries that carry one.
    FromPlusMinus,
}

impl PrintedSign {
    pub fn is_ambiguous(self) -> bool {
        self != PrintedSign::Definite
    }
}

struct Expected {
    op: OperatorKind,
    input: &'static [&'static str],
    output: &'static [(i64, &'static [&'static str])],
    sign: PrintedSign,
}

const fn e(
    op: OperatorKind,
    input: &'static [&'static str],
    output: &'static [(i64, &'static [&'static str])],
    sign: PrintedSign,
) -> Expected {
    Expected {
        op,
        input,
        output,
        sign,
    }
}

use OperatorKind::{Contract as I, Lie as L};
use PrintedSign::{Definite as Def, FromPlusMinus as From, PlusMinus as Pm};

const GEODESIC_TABLE: &[Expected] = &[
    e(L, &["ω+"], &[(1, &["ω+"])], Def),
    e(L, &["ω-"], &[(-1, &["ω-"])], Def),
    e(L, &["ω0"], &[], Def),
    e(L, &["ω0", "ω+", "ω-"], &[], Def),
    e(I, &["ω0"], &[(1, &[])], Def),
    e(I, &["ω+"], &[], Def),
    e(I, &["ω-"], &[], Def),
    e(I, &["ω0", "ω+", "ω-"], &[(1, &["ω+", "ω-"])], Def),
    e(I, &["ω0", "ω+"], &[(1, &["ω+"])], Pm),
    e(I, &["ω0", "ω-"], &[(-1, &["ω-"])], Pm),
    e(I, &["ω+", "ω-"], &[], Def),
    e(L, &["ω+", "ω-"], &[], Def),
];

const HOROCYCLE_PLUS_TABLE: &[Expected] = &[
    e(I, &["ω0"], &[], Def),
    e(I, &["ω+"], &[], Def),
    e(I, &["ω-"], &[(1, &[])], Def),
    e(I, &["ω0", "ω+"], &[], Def),
    e(I, &["ω0", "ω-"], &[(1, &["ω0"])], Pm),
    e(I, &["ω+", "ω-"], &[(1, &["ω+"])], Pm),
    e(L, &["ω0"], &[(1, &["ω+"])], From),
    e(L, &["ω-"], &[(1, &["ω0"])], Pm),
    e(L, &["ω+"], &[], Def),
    e(L, &["ω0", "ω+"], &[], Def),
];

fn expected_table(model: &FormModel) -> &'static [Expected] {
    if model.generator_names != SL2_GENERATORS {
        return &[];
    }
    match model.calculus().ix_values().iter().map(Coeff::as_rational).collect::<Vec<_>>()[..] {
        [Some(ref a), Some(ref b), Some(ref c)] => {
            let v = |q: &num_rational::BigRational| q.to_integer().try_into().unwrap_or(i64::MAX);
            match (v(a), v(b), v(c)) {
                (1, 0, 0) => GEODESIC_TABLE,
                (0, 0, 1) => HOROCYCLE_PLUS_TABLE,
                _ => &[],
            }
        }
        _ => &[],
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub operator: OperatorKind,
    pub input: String,
    pub output: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDiff {
    pub operator: OperatorKind,
    pub input: String,
    pub derived: String,
    pub printed: String,
    pub printed_sign: PrintedSign,
    pub status: DiffStatus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorTable {
    pub model: String,
    pub rows: Vec<TableRow>,
    pub diffs: Vec<TableDiff>,
}

impl OperatorTable {
    /// No mismatches, and sign flips only where the printed sign is
    /// ambiguous.
    pub fn consistent(&self) -> bool {
        self.diffs.iter().all(|d| match d.status {
            DiffStatus::Mismatch => false,
            DiffStatus::SignFlip => d.printed_sign.is_ambiguous(),
            _ => true,
        })
    }

    pub fn count(&self, status: DiffStatus) -> usize {
        self.diffs.iter().filter(|d| d.status == status).count()
    }
}

fn monomial_label(model: &FormModel, m: Monomial) -> String {
    if m == Monomial::UNIT {
        return "1".into();
    }
    m.indices()
        .iter()
        .map(|&i| model.generator_names[i].as_str())
        .collect::<Vec<_>>()
        .join("∧")
}

fn build_expected(model: &FormModel, terms: &[(i64, &[&str])]) -> FormElement {
    let mut out = FormElement::zero(model.field());
    for (c, names) in terms {
        let w = model.wedge_names(names).scale(&Coeff::from_int(*c));
        out = out.add(&w).expect("same field");
    }
    out
}

pub fn derive_operator_tables(model: &FormModel) -> OperatorTable {
    tables_with_fault(model, None)
}

/// Same as [`derive_operator_tables`] with the printed value of expected
/// entry `entry` scaled by 2, as a negative control.
#[doc(hidden)]
pub fn derive_operator_tables_corrupted(model: &FormModel, entry: usize) -> OperatorTable {
    tables_with_fault(model, Some(entry))
}

fn tables_with_fault(model: &FormModel, fault: Option<usize>) -> OperatorTable {
    let calc = model.calculus();
    let mut rows = Vec::new();
    for k in 0..=model.n() as i64 {
        for &m in calc.basis().degree(k) {
            let unit = FormElement::term(model.field(), m, Coeff::one());
            for op in [OperatorKind::D, OperatorKind::Contract, OperatorKind::Lie] {
                let out = calc.apply(op, &unit).expect("same field");
                rows.push(TableRow {
                    operator: op,
                    input: monomial_label(model, m),
                    output: model.format(&out),
                });
            }
        }
    }
    let diffs = expected_table(model)
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let input = model.wedge_names(x.input);
            let derived = calc.apply(x.op, &input).expect("same field");
            let mut printed = build_expected(model, x.output);
            if fault == Some(j) {
                printed = printed.scale(&Coeff::from_int(2));
            }
            let status = if derived == printed {
                if x.sign == PrintedSign::PlusMinus {
                    DiffStatus::MatchUpToPm
                } else {
                    DiffStatus::Match
                }
            } else if derived == printed.neg() {
                DiffStatus::SignFlip
            } else {
                DiffStatus::Mismatch
            };
            TableDiff {
                operator: x.op,
                input: model.format(&input),
                derived: model.format(&derived),
                printed: model.format(&printed),
                printed_sign: x.sign,
                status,
            }
        })
        .collect();
    OperatorTable {
        model: model.name.clone(),
        rows,
        diffs,
    }
}

/// Lie derivative of the leaf 2-form `ω0∧ω-` under the stable horocycle
/// flow, compared with the printed value `ω0∧ω+` modulo the ideal `(ω+)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeafFormCheck {
    pub derived: String,
    pub printed: String,
    pub equal: bool,
    pub equal_on_leaves: bool,
}

pub fn horocycle_leaf_form_check(model: &FormModel) -> Result<LeafFormCheck> {
    let omega_prime = model.wedge_names(&["ω0", "ω-"]);
    let derived = model.calculus().lie(&omega_prime)?;
    let printed = model.wedge_names(&["ω0", "ω+"]);
    let ideal = [model.gen("ω+")];
    let diff = derived.sub(&printed)?;
    Ok(LeafFormCheck {
        derived: model.format(&derived),
        printed: model.format(&printed),
        equal: diff.is_zero(),
        equal_on_leaves: in_ideal(model, &ideal, &diff)?,
    })
}

// Basic forms from a contact-type pair.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma2Row {
    pub j: usize,
    pub form: String,
    pub contraction_zero: bool,
    pub lie_zero: bool,
}

impl Lemma2Row {
    pub fn passes(&self) -> bool {
        self.contraction_zero && self.lie_zero
    }
}

/// Checks `i_X μ_j = 0` and `∇_X μ_j = 0` for `μ_j = ω∧Ω^j` in every degree
/// that fits.
pub fn lemma2_check(model: &FormModel, omega: &FormElement, symplectic: &FormElement) -> Result<Vec<Lemma2Row>> {
    let calc = model.calculus();
    let mut rows = Vec::new();
    let mut mu = omega.clone();
    let mut j = 0;
    loop {
        if mu.is_zero() {
            break;
        }
        rows.push(Lemma2Row {
            j,
            form: model.format(&mu),
            contraction_zero: calc.contract(&mu)?.is_zero(),
            lie_zero: calc.lie(&mu)?.is_zero(),
        });
        mu = mu.wedge(symplectic)?;
        j += 1;
    }
    Ok(rows)
}

// Foliations.

/// The degree-`k` part of the ideal generated by `ideal`.
pub fn ideal_span(model: &FormModel, ideal: &[FormElement], k: i64) -> Result<Span> {
    let calc = model.calculus();
    let mut vectors = Vec::new();
    for theta in ideal {
        let deg = theta.degree().unwrap_or(0) as i64;
        if deg > k {
            continue;
        }
        for &m in calc.basis().degree(k - deg) {
            let w = theta.wedge(&FormElement::term(model.field(), m, Coeff::one()))?;
            vectors.push(calc.to_vector(&w, k)?);
        }
    }
    Ok(Span::new(model.dim(k), vectors))
}

/// Membership of a homogeneous form in the ideal. Zero is always a member.
pub fn in_ideal(model: &FormModel, ideal: &[FormElement], form: &FormElement) -> Result<bool> {
    let Some(k) = form.degree() else {
        return Ok(true);
    };
    let v = model.calculus().to_vector(form, k as i64)?;
    Ok(ideal_span(model, ideal, k as i64)?.contains(&v))
}

/// `dθ ∈ I` for every generator `θ` of the ideal.
pub fn foliation_ideal_check(model: &FormModel, ideal: &[FormElement]) -> Result<bool> {
    for theta in ideal {
        if theta.degree().is_some_and(|d| d != 1) {
            return Err(Error::Shape("ideal generators must be 1-forms".into()));
        }
        if !in_ideal(model, ideal, &model.calculus().apply_d(theta)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `form` restricts to a closed form on the leaves `ideal = 0`.
pub fn closed_on_leaves(model: &FormModel, ideal: &[FormElement], form: &FormElement) -> Result<bool> {
    in_ideal(model, ideal, &model.calculus().apply_d(form)?)
}

/// `dim Λ^k / (I ∩ Λ^k)`: the number of independent `k`-forms on the leaves.
pub fn leaf_form_dim(model: &FormModel, ideal: &[FormElement], k: i64) -> Result<usize> {
    let q = Quotient::new(Span::full(model.dim(k)), ideal_span(model, ideal, k)?)?;
    Ok(q.dim())
}

/// Vector-field brackets dual to the structure equations:
/// `dω^c(E_a, E_b) = -ω^c([E_a, E_b])`. Entry `[a][b][c]` is the `E_c`
/// component of `[E_a, E_b]`.
pub fn vector_field_brackets(model: &FormModel) -> Vec<Vec<Vec<Coeff>>> {
    let n = model.n();
    let mut out = vec![vec![vec![Coeff::zero(); n]; n]; n];
    for (c, dv) in model.calculus().d_values().iter().enumerate() {
        for (m, coeff) in dv.terms() {
            let idx = m.indices();
            let (a, b) = (idx[0], idx[1]);
            out[a][b][c] = -coeff.clone();
            out[b][a][c] = coeff.clone();
        }
    }
    out
}

// Model files.

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub name: Option<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub symbols: Vec<String>,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<(String, Vec<String>)>>,
    #[serde(default, rename = "iX")]
    pub ix: BTreeMap<String, String>,
    #[serde(default)]
    pub betti: Option<Vec<u64>>,
    #[serde(default)]
    pub genus: Option<u32>,
    #[serde(default)]
    pub computes_de_rham: bool,
}

impl ModelFile {
    pub fn from_model(model: &FormModel) -> Self {
        let field = model.field();
        let names = &model.generator_names;
        let calc = model.calculus();
        let d = names
            .iter()
            .zip(calc.d_values())
            .filter(|(_, dv)| !dv.is_zero())
            .map(|(g, dv)| {
                let terms = dv
                    .terms()
                    .iter()
                    .map(|(m, c)| (field.format(c), m.indices().iter().map(|&i| names[i].clone()).collect()))
                    .collect();
                (g.clone(), terms)
            })
            .collect();
        let ix = names
            .iter()
            .zip(calc.ix_values())
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (g.clone(), field.format(c)))
            .collect();
        ModelFile {
            name: Some(model.name.clone()),
            generators: names.clone(),
            symbols: field.symbols.clone(),
            d,
            ix,
            betti: model.betti.clone(),
            genus: model.genus,
            computes_de_rham: model.computes_de_rham,
        }
    }

    pub fn into_model(self, default_name: &str) -> Result<FormModel> {
        let invalid = |generator: &str, reason: String| Error::InvalidModel {
            generator: generator.to_string(),
            reason,
        };
        let field = Arc::new(CoefficientField::with_symbols(self.symbols.clone()));
        let n = self.generators.len();
        let index: BTreeMap<&str, usize> = self.generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        if index.len() != n {
            return Err(invalid("", "duplicate generator names".into()));
        }
        for g in self.d.keys().chain(self.ix.keys()) {
            if !index.contains_key(g.as_str()) {
                return Err(invalid(g, "not a declared generator".into()));
            }
        }
        let mut d_values = vec![FormElement::zero(&field); n];
        for (g, terms) in &self.d {
            let mut acc = FormElement::zero(&field);
            for (coeff, factors) in terms {
                let c = field.parse(coeff).map_err(|e| invalid(g, e.to_string()))?;
                let idx = factors
                    .iter()
                    .map(|f| {
                        index
                            .get(f.as_str())
                            .copied()
                            .ok_or_else(|| invalid(g, format!("term uses undeclared generator {f:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() != 2 {
                    return Err(invalid(g, format!("d-term has {} factors, expected 2", idx.len())));
                }
                acc = acc.add(&FormElement::wedge_of(&field, &idx).scale(&c))?;
            }
            d_values[index[g.as_str()]] = acc;
        }
        let mut ix_values = vec![Coeff::zero(); n];
        for (g, c) in &self.ix {
            ix_values[index[g.as_str()]] = field.parse(c).map_err(|e| invalid(g, e.to_string()))?;
        }
        let name = self.name.unwrap_or_else(|| default_name.to_string());
        let mut model = FormModel::new(name, self.generators, field, d_values, ix_values)?;
        if let Some(b) = self.betti {
            model = model.with_betti(b)?;
        } else if let Some(g) = self.genus {
            if n == 3 {
                let g2 = 2 * g as u64;
                model = model.with_betti(vec![1, g2, g2, 1])?;
            }
        }
        model.genus = self.genus;
        model.computes_de_rham = self.computes_de_rham;
        Ok(model)
    }
}

pub fn parse_model_json(text: &str, default_name: &str) -> Result<FormModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_model(default_name)
}

pub fn load_model_file(path: &Path) -> Result<FormModel> {
    let text = std::fs::read_to_string(path)?;
    parse_model_json(&text, &path.display().to_string())
}
