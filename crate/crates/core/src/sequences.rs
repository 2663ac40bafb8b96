//! Exact sequences relating the flow's cohomology groups, and the index
//! arithmetic they support.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{induced_by_matrix, induced_map, lift_choices, FormModel, Subcomplex};
use crate::error::{Error, Result};
use crate::exterior::OperatorKind;
use crate::field::Coeff;
use crate::linalg::{Matrix, Quotient, Span, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Dim {
    Known(u64),
    /// Finite but not determined; carries the variable name used in
    /// constraints.
    Unknown(String),
    Infinite,
}

impl Dim {
    pub fn known(&self) -> Option<u64> {
        match self {
            Dim::Known(d) => Some(*d),
            _ => None,
        }
    }

    fn as_expr(&self) -> Option<LinExpr> {
        match self {
            Dim::Known(d) => Some(LinExpr::constant(*d as i64)),
            Dim::Unknown(name) => Some(LinExpr::var(name)),
            Dim::Infinite => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Known(d) => write!(f, "{d}"),
            Dim::Unknown(name) => f.write_str(name),
            Dim::Infinite => f.write_str("∞"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ModelComputed,
    ExternalBetti,
    DerivedByExactness,
    Unknown,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ModelComputed => "model-computed",
            Provenance::ExternalBetti => "external-betti",
            Provenance::DerivedByExactness => "derived-by-exactness",
            Provenance::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTerm {
    pub label: String,
    pub dim: Dim,
    pub provenance: Provenance,
}

/// `Σ terms[v]·v + constant`, read as the equation `… = 0` in constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinExpr {
    pub terms: BTreeMap<String, i64>,
    pub constant: i64,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(name: &str) -> Self {
        LinExpr {
            terms: BTreeMap::from([(name.to_string(), 1)]),
            constant: 0,
        }
    }

    pub fn add_scaled(&mut self, other: &LinExpr, s: i64) {
        for (v, c) in &other.terms {
            *self.terms.entry(v.clone()).or_insert(0) += s * c;
        }
        self.terms.retain(|_, c| *c != 0);
        self.constant += s * other.constant;
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn render_terms(&self) -> String {
        let mut out = String::new();
        for (i, (v, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
            }
            if c.abs() != 1 {
                out.push_str(&format!("{}·", c.abs()));
            }
            out.push_str(v);
        }
        out
    }

    /// Renders the expression, constant last.
    pub fn expression(&self) -> String {
        let t = self.render_terms();
        match (t.is_empty(), self.constant) {
            (true, c) => c.to_string(),
            (false, 0) => t,
            (false, c) if c < 0 => format!("{t} - {}", -c),
            (false, c) => format!("{t} + {c}"),
        }
    }

    /// Renders `self = 0` with the constant moved to the right.
    pub fn equation(&self) -> String {
        let t = self.render_terms();
        let lhs = if t.is_empty() { "0".to_string() } else { t };
        format!("{lhs} = {}", -self.constant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FredholmData {
    pub kernel: i64,
    pub cokernel: i64,
    pub index: i64,
}

impl FredholmData {
    pub fn new(kernel: i64, cokernel: i64) -> Self {
        FredholmData {
            kernel,
            cokernel,
            index: kernel - cokernel,
        }
    }

    pub fn of_matrix(m: &Matrix) -> Self {
        let r = m.rank() as i64;
        Self::new(m.cols() as i64 - r, m.rows() as i64 - r)
    }
}

/// Kernel, cokernel and index from endpoint dimensions and the rank.
/// Returns `None` (unknown, possibly infinite) unless both endpoints are
/// known.
pub fn fredholm_data(source: &Dim, target: &Dim, rank: u64) -> Option<FredholmData> {
    let (s, t) = (source.known()?, target.known()?);
    Some(FredholmData::new(s as i64 - rank as i64, t as i64 - rank as i64))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceMap {
    pub label: String,
    pub rank: Option<usize>,
    #[serde(skip)]
    pub matrix: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeVerdict {
    pub term: String,
    /// `None` where the adjacent maps are not available.
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexEntry {
    pub map: String,
    pub data: Option<FredholmData>,
}

/// A sequence `0 → T_0 → T_1 → … → T_last → 0`; `maps[i]` goes from
/// `terms[i]` to `terms[i + 1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceReport {
    pub title: String,
    pub terms: Vec<SequenceTerm>,
    pub maps: Vec<SequenceMap>,
    pub nodes: Vec<NodeVerdict>,
    pub alternating_sum: Option<i64>,
    /// Equations between unknown dimensions forced by exactness.
    pub constraints: Vec<String>,
    pub consistent: bool,
    pub index: Vec<IndexEntry>,
    pub notes: Vec<String>,
    pub exact: bool,
}

impl SequenceReport {
    fn new(title: impl Into<String>, terms: Vec<SequenceTerm>, maps: Vec<SequenceMap>) -> Self {
        let mut r = SequenceReport {
            title: title.into(),
            nodes: Vec::new(),
            alternating_sum: None,
            constraints: Vec::new(),
            consistent: true,
            index: Vec::new(),
            notes: Vec::new(),
            exact: false,
            terms,
            maps,
        };
        r.refresh();
        r
    }

    /// Recomputes node verdicts, the alternating sum and the overall flag.
    pub fn refresh(&mut self) {
        self.nodes = verify_exactness(self)
            .into_iter()
            .zip(&self.terms)
            .map(|(exact, t)| NodeVerdict {
                term: t.label.clone(),
                exact,
            })
            .collect();
        self.alternating_sum = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| t.dim.known().map(|d| if i % 2 == 0 { d as i64 } else { -(d as i64) }))
            .sum();
        self.exact = self.consistent
            && self.nodes.iter().all(|n| n.exact != Some(false))
            && self.alternating_sum.is_none_or(|s| s == 0);
    }

    pub fn dims(&self) -> Vec<Dim> {
        self.terms.iter().map(|t| t.dim.clone()).collect()
    }

    pub fn term(&self, label: &str) -> Option<&SequenceTerm> {
        self.terms.iter().find(|t| t.label == label)
    }

    pub fn all_nodes_checked(&self) -> bool {
        self.nodes.iter().all(|n| n.exact.is_some())
    }

    pub fn render(&self) -> String {
        let mut s = String::from("0");
        for t in &self.terms {
            s.push_str(&format!(" → {}[{}]", t.label, t.dim));
        }
        s.push_str(" → 0");
        s
    }
}

/// Per-node exactness from the stored matrices: `g∘f = 0` and
/// `rank f + rank g = dim` at each term, with zero maps at both ends.
pub fn verify_exactness(r: &SequenceReport) -> Vec<Option<bool>> {
    let len = r.terms.len();
    (0..len)
        .map(|i| {
            let dim = r.terms[i].dim.known()? as usize;
            let incoming = if i == 0 {
                None
            } else {
                Some(r.maps.get(i - 1)?.matrix.as_ref()?)
            };
            let outgoing = if i + 1 == len {
                None
            } else {
                Some(r.maps.get(i)?.matrix.as_ref()?)
            };
            let rf = incoming.map_or(0, Matrix::rank);
            let rg = outgoing.map_or(0, Matrix::rank);
            let composite_zero = match (incoming, outgoing) {
                (Some(f), Some(g)) => g.mul(f).map(|m| m.is_zero()).unwrap_or(false),
                _ => true,
            };
            Some(composite_zero && rf + rg == dim)
        })
        .collect()
}

fn zero_quotient(span: Span) -> Quotient {
    let amb = span.ambient();
    Quotient::new(span, Span::zero(amb)).expect("zero is contained")
}

fn model_term(label: String, q: &Quotient) -> SequenceTerm {
    SequenceTerm {
        label,
        dim: Dim::Known(q.dim() as u64),
        provenance: Provenance::ModelComputed,
    }
}

fn sup(k: i64) -> String {
    k.to_string()
}

/// Quotients and maps shared by the long and condensed forms.
struct RelativeParts {
    z_basic: Quotient,
    basic: Quotient,
    z_basic_next: Quotient,
    h_basic_next: Quotient,
    h_x_next: Quotient,
    c: Quotient,
    h_x_next2: Quotient,
    h_next2: Quotient,
}

fn relative_parts(m: &FormModel, k: i64) -> Result<RelativeParts> {
    let zb = |j| m.basic_span(j).intersect(&m.closed_span(j));
    Ok(RelativeParts {
        z_basic: zero_quotient(zb(k)),
        basic: zero_quotient(m.basic_span(k)),
        z_basic_next: zero_quotient(zb(k + 1)),
        h_basic_next: m.subcomplex_quotient(Subcomplex::Basic, k + 1)?,
        h_x_next: m.relative_quotient(k + 1)?,
        c: m.cokernel_quotient(k)?,
        h_x_next2: m.relative_quotient(k + 2)?,
        h_next2: m.subcomplex_quotient(Subcomplex::Full, k + 2)?,
    })
}

fn j_star(m: &FormModel, k: i64, p: &RelativeParts) -> Result<Matrix> {
    let contract = m.op(OperatorKind::Contract, k + 1).matrix;
    induced_by_matrix(&p.h_x_next, &p.c, &contract, "j_*")
}

fn h_star(m: &FormModel, k: i64, p: &RelativeParts) -> Result<Matrix> {
    let contract = m.op(OperatorKind::Contract, k + 1).matrix;
    let d = m.op(OperatorKind::D, k + 1).matrix;
    let f = |v: &[Coeff]| -> Result<Vec<Vector>> {
        Ok(lift_choices(&contract, v, "h_*")?.iter().map(|u| d.apply(u)).collect())
    };
    induced_map(&p.c, &p.h_x_next2, &f, "h_*")
}

fn g_star(m: &FormModel, k: i64, p: &RelativeParts) -> Result<Matrix> {
    induced_by_matrix(&p.h_x_next2, &p.h_next2, &Matrix::identity(m.dim(k + 2)), "g_*")
}

fn seq_map(label: &str, matrix: Matrix) -> SequenceMap {
    SequenceMap {
        label: label.to_string(),
        rank: Some(matrix.rank()),
        matrix: Some(matrix),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub degree: i64,
    pub long: SequenceReport,
    pub condensed: SequenceReport,
    /// `dim H^{k+1}(M/X) = dim Z^{k+1}(M/X) − rank d_*`.
    pub forms_agree: bool,
}

impl Theorem1Report {
    pub fn passes(&self) -> bool {
        self.long.exact && self.condensed.exact && self.forms_agree
    }
}

pub fn build_theorem1(m: &FormModel, k: i64) -> Result<Theorem1Report> {
    let n = m.n() as i64;
    if k < -1 || k > n - 1 {
        return Err(Error::Degree {
            degree: k,
            max: m.n().saturating_sub(1),
        });
    }
    let p = relative_parts(m, k)?;
    let m_star = induced_by_matrix(&p.z_basic, &p.basic, &Matrix::identity(m.dim(k)), "m_*")?;
    let d_star = induced_by_matrix(&p.basic, &p.z_basic_next, &m.op(OperatorKind::D, k).matrix, "d_*")?;
    let i_star = induced_by_matrix(&p.z_basic_next, &p.h_x_next, &Matrix::identity(m.dim(k + 1)), "i_*")?;
    let j = j_star(m, k, &p)?;
    let h = h_star(m, k, &p)?;
    let g = g_star(m, k, &p)?;
    let (k0, k1, k2) = (sup(k), sup(k + 1), sup(k + 2));
    let terms = vec![
        model_term(format!("Z^{k0}(M/X)"), &p.z_basic),
        model_term(format!("Ker ∇^{k0},*"), &p.basic),
        model_term(format!("Z^{k1}(M/X)"), &p.z_basic_next),
        model_term(format!("H^{k1}_X"), &p.h_x_next),
        model_term(format!("C^{k0}_X"), &p.c),
        model_term(format!("H^{k2}_X"), &p.h_x_next2),
        model_term(format!("H^{k2}(M)"), &p.h_next2),
    ];
    let d_rank = d_star.rank();
    let h_data = FredholmData::of_matrix(&h);
    let mut long = SequenceReport::new(
        format!("relative sequence, k = {k}"),
        terms,
        vec![
            seq_map("m_*", m_star),
            seq_map("d_*", d_star),
            seq_map("i_*", i_star),
            seq_map("j_*", j.clone()),
            seq_map("h_*", h.clone()),
            seq_map("g_*", g.clone()),
        ],
    );
    long.index.push(IndexEntry {
        map: "h_*".into(),
        data: Some(h_data.clone()),
    });
    if !m.computes_de_rham {
        long.notes.push(format!("H^{k2}(M) is the cohomology of the model complex"));
    }

    let incl = induced_by_matrix(&p.h_basic_next, &p.h_x_next, &Matrix::identity(m.dim(k + 1)), "inclusion")?;
    let mut condensed = SequenceReport::new(
        format!("condensed relative sequence, k = {k}"),
        vec![
            model_term(format!("H^{k1}(M/X)"), &p.h_basic_next),
            model_term(format!("H^{k1}_X"), &p.h_x_next),
            model_term(format!("C^{k0}_X"), &p.c),
            model_term(format!("H^{k2}_X"), &p.h_x_next2),
            model_term(format!("H^{k2}(M)"), &p.h_next2),
        ],
        vec![
            seq_map("incl", incl),
            seq_map("j_*", j),
            seq_map("h_*", h),
            seq_map("g_*", g),
        ],
    );
    condensed.index.push(IndexEntry {
        map: "h_*".into(),
        data: Some(h_data),
    });
    let forms_agree = p.h_basic_next.dim() + d_rank == p.z_basic_next.dim();
    Ok(Theorem1Report {
        degree: k,
        long,
        condensed,
        forms_agree,
    })
}

// Cokernel ladder.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexIdentity {
    pub lhs: String,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem2Report {
    /// The ladder with every group and map computed in the model.
    pub model_internal: SequenceReport,
    pub model_identity: IndexIdentity,
    /// The ladder with `H(M)` taken from external Betti numbers, when the
    /// model complex does not compute it.
    pub betti: Option<SequenceReport>,
    pub betti_identity: Option<IndexIdentity>,
    /// `H^k_C` for `k = 0..n-1`, from the Betti ladder when present.
    pub h_c: Vec<SequenceTerm>,
}

impl Theorem2Report {
    pub fn passes(&self) -> bool {
        self.model_internal.exact
            && self.model_identity.holds
            && self.betti.as_ref().is_none_or(|b| b.exact)
            && self.betti_identity.as_ref().is_none_or(|i| i.holds)
    }
}

fn h_c_label(k: i64) -> String {
    format!("H^{k}_C")
}

fn h_c_var(k: i64) -> String {
    format!("dim H^{k}_C")
}

pub fn build_theorem2(m: &FormModel) -> Result<Theorem2Report> {
    let n = m.n() as i64;
    let cc = m.cokernel_complex()?;
    // C^k and H^k_C for k = -1..=n-1, stored at index k + 1.
    let mut c_spaces = vec![m.cokernel_quotient(-1)?];
    c_spaces.extend(cc.spaces.iter().cloned());
    let mut h_c = vec![zero_quotient(Span::zero(0))];
    for k in 0..n as usize {
        let num = Span::kernel_of(&cc.differentials[k]);
        let den = if k == 0 {
            Span::zero(cc.dims[0])
        } else {
            Span::image_of(&cc.differentials[k - 1])
        };
        h_c.push(Quotient::new(num, den).map_err(|_| Error::ModelInconsistency("d_C does not square to zero".into()))?);
    }
    let a: Vec<Quotient> = (0..=n + 1)
        .map(|j| m.subcomplex_quotient(Subcomplex::Basic, j))
        .collect::<Result<_>>()?;
    let b: Vec<Quotient> = (0..=n)
        .map(|j| m.subcomplex_quotient(Subcomplex::Full, j))
        .collect::<Result<_>>()?;

    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut h_maps = Vec::new();
    for j in 0..=n {
        let ju = j as usize;
        terms.push(model_term(format!("H^{j}(M/X)"), &a[ju]));
        terms.push(model_term(format!("H^{j}(M)"), &b[ju]));
        terms.push(model_term(h_c_label(j - 1), &h_c[ju]));
        maps.push(seq_map(
            "incl",
            induced_by_matrix(&a[ju], &b[ju], &Matrix::identity(m.dim(j)), "H(M/X) → H(M)")?,
        ));
        // B^j → H^{j-1}_C, u ↦ [i_X u]
        let contract = m.op(OperatorKind::Contract, j).matrix;
        let c_prev = &c_spaces[ju];
        let to_c = |u: &[Coeff]| -> Result<Vec<Vector>> {
            let v = contract.apply(u);
            let coords = c_prev
                .class_of(&v)
                .ok_or_else(|| Error::ModelInconsistency("i_X u outside C".into()))?;
            Ok(vec![coords])
        };
        maps.push(seq_map("i", induced_map(&b[ju], &h_c[ju], &to_c, "H(M) → H_C")?));
        // H^{j-1}_C → A^{j+1}
        let h = connecting_map(m, j - 1, &c_spaces[ju], &h_c[ju], &a[ju + 1])?;
        h_maps.push(h.clone());
        if j < n {
            maps.push(seq_map("h", h));
        }
    }
    let mut model_internal = SequenceReport::new("cokernel ladder (model-internal)", terms, maps);
    // Index(h_k) for k = 0..n-1; h_maps[0] is h_{-1}.
    let mut lhs = 0i64;
    for k in 0..n {
        let data = FredholmData::of_matrix(&h_maps[(k + 1) as usize]);
        if k % 2 == 0 {
            lhs += data.index;
        } else {
            lhs -= data.index;
        }
        model_internal.index.push(IndexEntry {
            map: format!("h_{k}"),
            data: Some(data),
        });
    }
    let chi: i64 = b.iter().enumerate().map(|(j, q)| if j % 2 == 0 { q.dim() as i64 } else { -(q.dim() as i64) }).sum();
    let rhs = 1 - a[1].dim() as i64 - chi;
    let model_identity = IndexIdentity {
        lhs: lhs.to_string(),
        rhs,
        holds: lhs == rhs,
    };

    let (betti, betti_identity) = match (&m.betti, m.computes_de_rham) {
        (Some(bs), false) => {
            let (r, id) = betti_ladder(m, &a, bs)?;
            (Some(r), Some(id))
        }
        _ => (None, None),
    };
    let h_c_terms = match &betti {
        Some(r) => (0..n).map(|k| r.terms[(3 * (k + 1) + 2) as usize].clone()).collect(),
        None => (0..n).map(|k| model_internal.terms[(3 * (k + 1) + 2) as usize].clone()).collect(),
    };
    Ok(Theorem2Report {
        model_internal,
        model_identity,
        betti,
        betti_identity,
        h_c: h_c_terms,
    })
}

/// `H^k_C → H^{k+2}(M/X)`: for a cocycle `v = i_X u` pick `w ∈ Λ^{k+1}_X`
/// with `i_X du = ∇ w` and send `v` to `[d(u − w)]`.
fn connecting_map(m: &FormModel, k: i64, c: &Quotient, h_c: &Quotient, target: &Quotient) -> Result<Matrix> {
    let contract = m.op(OperatorKind::Contract, k + 1).matrix;
    let d = m.op(OperatorKind::D, k + 1).matrix;
    let contract_next = m.op(OperatorKind::Contract, k + 2).matrix;
    let lie = m.op(OperatorKind::Lie, k + 1).matrix;
    let lx = m.lambda_x_span(k + 1).matrix();
    let lie_on_lx = lie.mul(&lx)?;
    let reps = c.representatives();
    let f = |coords: &[Coeff]| -> Result<Vec<Vector>> {
        let mut v = vec![Coeff::zero(); m.dim(k)];
        for (r, x) in reps.iter().zip(coords) {
            crate::linalg::add_scaled(&mut v, r, x);
        }
        let mut out = Vec::new();
        for u in lift_choices(&contract, &v, "connecting map")? {
            let idu = contract_next.apply(&d.apply(&u));
            for y in lift_choices(&lie_on_lx, &idu, "connecting map correction")? {
                let w = lx.apply(&y);
                let diff: Vector = u.iter().zip(&w).map(|(p, q)| p - q).collect();
                out.push(d.apply(&diff));
            }
        }
        Ok(out)
    };
    induced_map(h_c, target, &f, &format!("H^{k}_C → H^{}(M/X)", k + 2))
}

fn betti_ladder(m: &FormModel, a: &[Quotient], betti: &[u64]) -> Result<(SequenceReport, IndexIdentity)> {
    let n = m.n() as i64;
    let mut terms = Vec::new();
    for j in 0..=n {
        terms.push(model_term(format!("H^{j}(M/X)"), &a[j as usize]));
        terms.push(SequenceTerm {
            label: format!("H^{j}(M)"),
            dim: Dim::Known(betti[j as usize]),
            provenance: Provenance::ExternalBetti,
        });
        terms.push(if j == 0 {
            SequenceTerm {
                label: h_c_label(-1),
                dim: Dim::Known(0),
                provenance: Provenance::ModelComputed,
            }
        } else {
            SequenceTerm {
                label: h_c_label(j - 1),
                dim: Dim::Unknown(h_c_var(j - 1)),
                provenance: Provenance::Unknown,
            }
        });
    }
    let maps = (0..terms.len() - 1)
        .map(|_| SequenceMap {
            label: String::new(),
            rank: None,
            matrix: None,
        })
        .collect();
    let mut report = SequenceReport::new("cokernel ladder (external Betti numbers)", terms, maps);
    let constraints = segment_constraints(&report.terms);
    let solution = solve_constraints(&constraints);
    report.consistent = solution.consistent;
    for t in &mut report.terms {
        if let Dim::Unknown(name) = &t.dim {
            if let Some(&v) = solution.values.get(name) {
                if v < 0 {
                    report.consistent = false;
                } else {
                    t.dim = Dim::Known(v as u64);
                    t.provenance = Provenance::DerivedByExactness;
                }
            }
        }
    }
    report.constraints = solution.remaining.iter().map(LinExpr::equation).collect();
    report.refresh();

    // Σ_k (−1)^k (dim H^k_C − dim H^{k+2}(M/X)) against 1 − b_1(M/X) − χ(M).
    let mut lhs = LinExpr::default();
    for k in 0..n {
        let c = report.terms[(3 * (k + 1) + 2) as usize].dim.as_expr().expect("finite");
        let s = if k % 2 == 0 { 1 } else { -1 };
        lhs.add_scaled(&c, s);
        let a_next = a.get((k + 2) as usize).map_or(0, Quotient::dim) as i64;
        lhs.add_scaled(&LinExpr::constant(a_next), -s);
        report.index.push(IndexEntry {
            map: format!("h_{k}"),
            data: None,
        });
    }
    let chi: i64 = betti.iter().enumerate().map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    let rhs = 1 - a[1].dim() as i64 - chi;
    let mut diff = lhs.clone();
    diff.add_scaled(&LinExpr::constant(rhs), -1);
    let holds = in_affine_span(&diff, &solution.remaining, &solution.values);
    Ok((
        report,
        IndexIdentity {
            lhs: lhs.expression(),
            rhs,
            holds,
        },
    ))
}

/// Alternating sums over the runs between known-zero terms.
fn segment_constraints(terms: &[SequenceTerm]) -> Vec<LinExpr> {
    let mut out = Vec::new();
    let mut current = LinExpr::default();
    let mut nonempty = false;
    for (i, t) in terms.iter().enumerate() {
        if t.dim == Dim::Known(0) {
            if nonempty {
                out.push(std::mem::take(&mut current));
            }
            nonempty = false;
            continue;
        }
        let Some(e) = t.dim.as_expr() else {
            // An infinite term breaks the chain of finite equations.
            current = LinExpr::default();
            nonempty = false;
            continue;
        };
        current.add_scaled(&e, if i % 2 == 0 { 1 } else { -1 });
        nonempty = true;
    }
    if nonempty {
        out.push(current);
    }
    out.retain(|e| !(e.is_constant() && e.constant == 0));
    out
}

struct Solution {
    values: BTreeMap<String, i64>,
    remaining: Vec<LinExpr>,
    consistent: bool,
}

fn constraint_matrix(constraints: &[LinExpr], vars: &[String]) -> Matrix {
    let rows: Vec<Vector> = constraints
        .iter()
        .map(|e| {
            let mut row: Vector = vars
                .iter()
                .map(|v| Coeff::from_int(*e.terms.get(v).unwrap_or(&0)))
                .collect();
            row.push(Coeff::from_int(e.constant));
            row
        })
        .collect();
    Matrix::from_rows(vars.len() + 1, &rows)
}

fn variables(constraints: &[LinExpr]) -> Vec<String> {
    let mut vars: Vec<String> = constraints.iter().flat_map(|e| e.terms.keys().cloned()).collect();
    vars.sort();
    vars.dedup();
    vars
}

fn integer_row(row: &[Coeff]) -> Vec<i64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let qs: Vec<_> = row.iter().map(|c| c.as_rational().expect("rational constraint")).collect();
    let lcm = qs.iter().fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    qs.iter()
        .map(|q| (q * num_rational::BigRational::from_integer(lcm.clone())).to_integer().to_i64().expect("small"))
        .collect()
}

fn solve_constraints(constraints: &[LinExpr]) -> Solution {
    let vars = variables(constraints);
    let mut sol = Solution {
        values: BTreeMap::new(),
        remaining: Vec::new(),
        consistent: true,
    };
    if constraints.is_empty() {
        return sol;
    }
    let (r, _) = constraint_matrix(constraints, &vars).rref();
    for i in 0..r.rows() {
        let row = integer_row(&r.row(i));
        let (coeffs, constant) = row.split_at(vars.len());
        let nz: Vec<usize> = (0..vars.len()).filter(|&j| coeffs[j] != 0).collect();
        match nz.len() {
            0 if constant[0] != 0 => sol.consistent = false,
            0 => {}
            1 => {
                let c = coeffs[nz[0]];
                if constant[0] % c != 0 {
                    sol.consistent = false;
                } else {
                    sol.values.insert(vars[nz[0]].clone(), -constant[0] / c);
                }
            }
            _ => {
                let mut e = LinExpr::constant(constant[0]);
                for &j in &nz {
                    e.terms.insert(vars[j].clone(), coeffs[j]);
                }
                // Leading coefficient positive for display.
                if coeffs[nz[0]] < 0 {
                    let mut neg = LinExpr::default();
                    neg.add_scaled(&e, -1);
                    e = neg;
                }
                sol.remaining.push(e);
            }
        }
    }
    sol
}

/// Whether `e = 0` follows from the solved values and remaining equations.
fn in_affine_span(e: &LinExpr, remaining: &[LinExpr], values: &BTreeMap<String, i64>) -> bool {
    let mut reduced = LinExpr::constant(e.constant);
    for (v, c) in &e.terms {
        match values.get(v) {
            Some(x) => reduced.constant += c * x,
            None => {
                reduced.terms.insert(v.clone(), *c);
            }
        }
    }
    if reduced.is_constant() {
        return reduced.constant == 0;
    }
    let mut all = remaining.to_vec();
    let vars = variables(&[all.clone(), vec![reduced.clone()]].concat());
    let base = constraint_matrix(&all, &vars).rank();
    all.push(reduced);
    constraint_matrix(&all, &vars).rank() == base
}

// Corollaries.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Corollary1Report {
    pub genus: u32,
    pub sequence: SequenceReport,
    /// Kernel and cokernel of `h_*: C^0_X → W` as stated, and the index.
    pub h_star: FredholmData,
    /// Kernel and cokernel of `h_*` read off the sequence.
    pub h_star_from_sequence: FredholmData,
    pub minus_index: i64,
    /// Exactness forces `dim C^0_X − dim W = 2g − 2` if both are finite.
    pub constraint: String,
    /// Fires when that constraint contradicts `dim C^0_X ≤ dim W`.
    pub cokernel_infinite: bool,
    /// `dim C^0_X` forced by exactness once `dim W = 1`, for `g = 1`.
    pub c0_when_w_is_one: Option<i64>,
}

pub fn corollary1_profile(g: u32) -> Result<Corollary1Report> {
    if g < 1 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let g2 = 2 * g as u64;
    let ext = |label: &str, d: u64| SequenceTerm {
        label: label.to_string(),
        dim: Dim::Known(d),
        provenance: Provenance::ExternalBetti,
    };
    let unknown = |label: &str| SequenceTerm {
        label: label.to_string(),
        dim: Dim::Unknown(format!("dim {label}")),
        provenance: Provenance::Unknown,
    };
    let terms = vec![
        ext("H^1(M/X)", 1),
        ext("H^1(M)", g2),
        unknown("C^0_X"),
        unknown("W"),
        ext("H^2(M)", 1),
    ];
    let maps = ["incl", "j_*", "h_*", "g_*"]
        .iter()
        .map(|l| SequenceMap {
            label: l.to_string(),
            rank: None,
            matrix: None,
        })
        .collect();
    let mut sequence = SequenceReport::new(format!("surface index sequence, g = {g}"), terms, maps);
    let constraints = segment_constraints(&sequence.terms);
    let sol = solve_constraints(&constraints);
    sequence.constraints = sol.remaining.iter().map(LinExpr::equation).collect();
    sequence.consistent = sol.consistent;
    sequence.refresh();

    // ker h_* = image of H^1_X = 2g − 1 (H^1(M/X) injects);
    // coker h_* = image of W in H^2(M) = 1 (g_* is onto).
    let h_star_from_sequence = FredholmData::new(g2 as i64 - 1, 1);
    let h_star = FredholmData::new(2 * g as i64 - 1, 1);
    sequence.index.push(IndexEntry {
        map: "h_*".into(),
        data: Some(h_star.clone()),
    });
    let cokernel_infinite = h_star.index > 0;
    if cokernel_infinite {
        sequence.notes.push("finite dimensions would give dim C^0_X > dim W, but dim C^0_X ≤ dim W: dim Coker ∇^0_X = ∞".into());
    }
    let c0_when_w_is_one = (g == 1).then(|| {
        let mut e = sol.remaining.first().cloned().unwrap_or_default();
        let w = e.terms.remove("dim W").unwrap_or(0);
        let c = e.terms.remove("dim C^0_X").unwrap_or(1);
        -(e.constant + w) / c
    });
    Ok(Corollary1Report {
        genus: g,
        constraint: sequence.constraints.first().cloned().unwrap_or_default(),
        minus_index: -h_star.index,
        h_star,
        h_star_from_sequence,
        sequence,
        cokernel_infinite,
        c0_when_w_is_one,
    })
}

/// `b_1 − |H^1(M/X)| − b_2` with the model's `H^1(M/X)` and with the
/// surface value `H^1(M/X) = R`, side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary2Report {
    pub b1: u64,
    pub b2: u64,
    pub h1_basic_model: u64,
    pub index_model: i64,
    pub h1_basic_surface: u64,
    pub index_surface: i64,
}

pub fn corollary2(m: &FormModel) -> Result<Option<Corollary2Report>> {
    let Some(betti) = &m.betti else {
        return Ok(None);
    };
    if betti.len() < 3 {
        return Ok(None);
    }
    let (b1, b2) = (betti[1], betti[2]);
    let h1 = m.subcomplex_quotient(Subcomplex::Basic, 1)?.dim() as u64;
    let index = |h: u64| b1 as i64 - h as i64 - b2 as i64;
    Ok(Some(Corollary2Report {
        b1,
        b2,
        h1_basic_model: h1,
        index_model: index(h1),
        h1_basic_surface: 1,
        index_surface: index(1),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{instantiate, torus, ModelSpec};

    fn sl2(name: &str) -> FormModel {
        instantiate(&ModelSpec::parse(name, None).unwrap()).unwrap()
    }

    fn known(r: &SequenceReport) -> Vec<u64> {
        r.terms.iter().map(|t| t.dim.known().unwrap()).collect()
    }

    #[test]
    fn torus2_relative_sequence_k0() {
        let r = build_theorem1(&torus(2).unwrap(), 0).unwrap();
        assert_eq!(known(&r.long), [1, 1, 1, 2, 1, 1, 1]);
        assert!(r.passes());
        assert!(r.long.all_nodes_checked());
        assert_eq!(r.long.alternating_sum, Some(0));
    }

    #[test]
    fn relative_sequences_all_degrees_sl2() {
        for name in ["sl2-geodesic", "sl2-horocycle-plus", "sl2-horocycle-minus"] {
            let m = sl2(name);
            for k in -1..=2 {
                let r = build_theorem1(&m, k).unwrap();
                assert!(r.passes(), "{name} k={k}: {:?}", r.long.nodes);
            }
        }
        assert!(build_theorem1(&torus(2).unwrap(), 2).is_err());
    }

    #[test]
    fn corrupted_map_fails_node() {
        let mut r = build_theorem1(&torus(2).unwrap(), 0).unwrap().long;
        let m = r.maps[3].matrix.as_mut().unwrap();
        m.set(0, 0, Coeff::from_int(7));
        m.set(0, 1, Coeff::from_int(3));
        r.refresh();
        assert!(!r.exact);
        assert!(r.nodes.iter().any(|n| n.exact == Some(false)));
    }

    #[test]
    fn geodesic_cokernel_ladder() {
        let r = build_theorem2(&sl2("sl2-geodesic")).unwrap();
        assert!(r.passes(), "{:?}", r.model_internal.nodes);
        let b = r.betti.as_ref().unwrap();
        assert_eq!(b.constraints, ["dim H^0_C - dim H^1_C = 1"]);
        assert_eq!(r.h_c[2].dim, Dim::Known(1));
        assert_eq!(r.h_c[2].provenance, Provenance::DerivedByExactness);
        assert!(r.betti_identity.unwrap().holds);
    }

    #[test]
    fn horocycle_cokernel_ladder() {
        let r = build_theorem2(&sl2("sl2-horocycle-plus")).unwrap();
        assert!(r.passes());
        let dims: Vec<_> = r.h_c.iter().map(|t| t.dim.clone()).collect();
        assert_eq!(dims, [Dim::Known(4), Dim::Known(4), Dim::Known(1)]);
    }

    #[test]
    fn torus_ladder_index_identity() {
        for n in 2..=4 {
            let r = build_theorem2(&torus(n).unwrap()).unwrap();
            assert!(r.passes(), "n={n}");
            assert!(r.betti.is_none());
        }
    }

    #[test]
    fn surface_index_profile() {
        let r = corollary1_profile(2).unwrap();
        assert_eq!((r.h_star.kernel, r.h_star.cokernel, r.h_star.index), (3, 1, 2));
        assert!(r.cokernel_infinite);
        assert_eq!(r.constraint, "dim C^0_X - dim W = 2");
        let r1 = corollary1_profile(1).unwrap();
        assert!(!r1.cokernel_infinite);
        assert_eq!(r1.constraint, "dim C^0_X - dim W = 0");
        assert_eq!(r1.c0_when_w_is_one, Some(1));
        assert!(corollary1_profile(0).is_err());
    }

    #[test]
    fn corollary2_side_by_side() {
        let c = corollary2(&sl2("sl2-geodesic")).unwrap().unwrap();
        assert_eq!((c.index_model, c.index_surface), (0, -1));
    }

    #[test]
    fn fredholm_of_zero_map() {
        let f = FredholmData::of_matrix(&Matrix::zeros(2, 3));
        assert_eq!((f.kernel, f.cokernel, f.index), (3, 2, 1));
        assert!(fredholm_data(&Dim::Infinite, &Dim::Known(1), 0).is_none());
    }
}
