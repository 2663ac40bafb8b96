//! Verification reports: per-model aggregates and the full suite behind
//! `verify-all`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{FormModel, Subcomplex};
use crate::error::{Error, Result};
use crate::exterior::OperatorKind;
use crate::fourier::{self, FourierSeries, SlopeSpec};
use crate::identities::{algebraic_identities, IdentityCheck, IDENTITY_NAMES};
use crate::models::{
    self, derive_operator_tables, derive_operator_tables_corrupted, flat_symplectic_torus, foliation_ideal_check,
    horocycle_leaf_form_check, instantiate, lemma2_check, DiffStatus, ModelKind, ModelSpec, OperatorTable,
    SymplecticData,
};
use crate::sequences::{build_theorem1, build_theorem2, corollary1_profile, corollary2, Corollary1Report, SequenceReport};
use crate::sl2::{self, FlowKind, GroupPoint, NumericParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub pass: bool,
    /// Human-readable lines; the text format prints exactly these.
    pub lines: Vec<String>,
    pub data: serde_json::Value,
}

impl Section {
    fn new<T: Serialize>(name: &str, pass: bool, lines: Vec<String>, data: &T) -> Self {
        Section {
            name: name.to_string(),
            pass,
            lines,
            data: serde_json::to_value(data).expect("report data serializes"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub subject: String,
    pub parameters: BTreeMap<String, String>,
    pub sections: Vec<Section>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            subject: subject.into(),
            parameters: BTreeMap::new(),
            sections: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, s: Section) {
        self.pass &= s.pass;
        self.sections.push(s);
    }

    pub fn failed_sections(&self) -> Vec<&str> {
        self.sections.iter().filter(|s| !s.pass).map(|s| s.name.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "dynforms {} (report schema {})\nsubject: {}\n",
            self.artifact_version, self.schema_version, self.subject
        );
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for s in &self.sections {
            out.push_str(&format!("[{}] {}\n", verdict(s.pass), s.name));
            for l in &s.lines {
                out.push_str(&format!("    {l}\n"));
            }
        }
        if !self.notes.is_empty() {
            out.push_str("notes:\n");
            for n in &self.notes {
                out.push_str(&format!("  - {n}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", verdict(self.pass)));
        out
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))
}

fn sequence_lines(r: &SequenceReport) -> Vec<String> {
    let mut lines = vec![format!("{}: {}", r.title, verdict(r.exact)), format!("  {}", r.render())];
    let provenance: Vec<String> = r.terms.iter().map(|t| format!("{}:{}", t.label, t.provenance)).collect();
    lines.push(format!("  provenance {}", provenance.join(", ")));
    if let Some(s) = r.alternating_sum {
        lines.push(format!("  alternating sum {s}"));
    }
    for c in &r.constraints {
        lines.push(format!("  constraint {c}"));
    }
    for n in &r.notes {
        lines.push(format!("  note: {n}"));
    }
    lines
}

// Per-model report.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyData {
    pub de_rham: Vec<usize>,
    pub invariant: Vec<usize>,
    pub basic: Vec<usize>,
    pub lambda_x: Vec<usize>,
    pub basic_forms: Vec<usize>,
    pub relative_h_x: Vec<usize>,
    pub cokernel_c: Vec<usize>,
    pub cokernel_cohomology: Vec<usize>,
    pub contraction_homology: Vec<usize>,
    pub d_c_square_zero: bool,
    /// Ranks of `∇^j` on `Λ^1` for `j = 1..=n`.
    pub lie_power_ranks_degree1: Vec<usize>,
}

pub fn cohomology_data(m: &FormModel) -> Result<CohomologyData> {
    let n = m.n() as i64;
    let range = |f: &dyn Fn(i64) -> Result<usize>| (0..=n).map(f).collect::<Result<Vec<_>>>();
    let cc = m.cokernel_complex()?;
    let lie = m.op(OperatorKind::Lie, 1);
    let mut power = lie.clone();
    let mut ranks = vec![power.rank()];
    for _ in 1..n {
        power = lie.compose(&power)?;
        ranks.push(power.rank());
    }
    Ok(CohomologyData {
        de_rham: m.dims(Subcomplex::Full)?,
        invariant: m.dims(Subcomplex::Invariant)?,
        basic: m.dims(Subcomplex::Basic)?,
        lambda_x: range(&|k| Ok(m.lambda_x(k)?.dim()))?,
        basic_forms: range(&|k| Ok(m.basic(k)?.dim()))?,
        relative_h_x: range(&|k| Ok(m.relative_h_x(k)?.dim()))?,
        cokernel_c: cc.dims.clone(),
        cokernel_cohomology: cc.cohomology_dims.clone(),
        contraction_homology: range(&|k| Ok(m.contraction_homology(k)?.dim()))?,
        d_c_square_zero: cc.square_zero,
        lie_power_ranks_degree1: ranks,
    })
}

fn cohomology_section(m: &FormModel) -> Result<Section> {
    let c = cohomology_data(m)?;
    let lines = vec![
        format!("H^k(M) {}", tuple(&c.de_rham)),
        format!("H^k_inv {}", tuple(&c.invariant)),
        format!("H^k(M/X) {}", tuple(&c.basic)),
        format!("Λ^k_X = Ker i_X {}", tuple(&c.lambda_x)),
        format!("Λ^k(M/X) {}", tuple(&c.basic_forms)),
        format!("H^k_X {}", tuple(&c.relative_h_x)),
        format!("C^k_X {}", tuple(&c.cokernel_c)),
        format!("H^k_C (cokernel complex) {}", tuple(&c.cokernel_cohomology)),
        format!("Ker i_X / Im i_X {}", tuple(&c.contraction_homology)),
        format!("d_C∘d_C = 0: {}", c.d_c_square_zero),
        format!("rank ∇^j on Λ^1, j = 1..n: {}", tuple(&c.lie_power_ranks_degree1)),
    ];
    Ok(Section::new("cohomology", c.d_c_square_zero, lines, &c))
}

fn table_lines(t: &OperatorTable) -> Vec<String> {
    let mut lines: Vec<String> = t
        .diffs
        .iter()
        .map(|d| {
            format!(
                "{} {}: derived {}, printed {} [{:?}] -> {}",
                op_symbol(d.operator),
                d.input,
                d.derived,
                d.printed,
                d.printed_sign,
                d.status
            )
        })
        .collect();
    lines.push(format!(
        "{} match, {} match-up-to-±, {} sign-flip, {} mismatch",
        t.count(DiffStatus::Match),
        t.count(DiffStatus::MatchUpToPm),
        t.count(DiffStatus::SignFlip),
        t.count(DiffStatus::Mismatch)
    ));
    lines
}

fn op_symbol(op: OperatorKind) -> &'static str {
    match op {
        OperatorKind::D => "d",
        OperatorKind::Contract => "i",
        OperatorKind::Lie => "∇",
    }
}

fn is_horocycle(m: &FormModel) -> bool {
    m.name.starts_with("sl2-horocycle")
}

/// Full report for one model. `symplectic` adds the contact-type checks of
/// the flat symplectic torus.
pub fn model_report(m: &FormModel, symplectic: Option<&SymplecticData>) -> Result<Report> {
    let n = m.n() as i64;
    let mut report = Report::new(m.name.clone());
    report.parameters.insert("generators".into(), m.generator_names.join(","));
    if let Some(g) = m.genus {
        report.parameters.insert("genus".into(), g.to_string());
    }
    if let Some(b) = &m.betti {
        report.parameters.insert("betti".into(), format!("{b:?}"));
    }
    report.push(cohomology_section(m)?);

    let p1 = m.proposition1()?;
    report.push(Section::new(
        "top-degree relative cohomology",
        p1.holds,
        vec![format!("dim H^{n}_X = {}, dim C^{}_X = {}", p1.dim_h_n_x, n - 1, p1.dim_c_n_minus_1)],
        &p1,
    ));

    let t1: Vec<_> = (-1..n).map(|k| build_theorem1(m, k)).collect::<Result<_>>()?;
    let mut lines = Vec::new();
    for r in &t1 {
        lines.extend(sequence_lines(&r.long));
        lines.extend(sequence_lines(&r.condensed));
    }
    report.push(Section::new("relative sequences", t1.iter().all(|r| r.passes()), lines, &t1));

    let t2 = build_theorem2(m)?;
    let mut lines = sequence_lines(&t2.model_internal);
    lines.push(format!(
        "index identity (model-internal): {} = {} holds: {}",
        t2.model_identity.lhs, t2.model_identity.rhs, t2.model_identity.holds
    ));
    if let (Some(b), Some(id)) = (&t2.betti, &t2.betti_identity) {
        lines.extend(sequence_lines(b));
        lines.push(format!("index identity (external Betti): {} = {} holds: {}", id.lhs, id.rhs, id.holds));
    }
    for t in &t2.h_c {
        lines.push(format!("{} = {} ({})", t.label, t.dim, t.provenance));
    }
    report.push(Section::new("cokernel ladder", t2.passes(), lines, &t2));

    if let (Some(g), Some(c2)) = (m.genus, corollary2(m)?) {
        let c1 = corollary1_profile(g)?;
        let (ok, mut lines) = surface_index_lines(&c1);
        lines.push(format!(
            "b1 − dim H^1(M/X) − b2: model {} (H^1(M/X) = {}), surface {} (H^1(M/X) = {})",
            c2.index_model, c2.h1_basic_model, c2.index_surface, c2.h1_basic_surface
        ));
        report.push(Section::new(
            "surface index",
            ok,
            lines,
            &serde_json::json!({ "sequence": c1, "side_by_side": c2 }),
        ));
    }

    let table = derive_operator_tables(m);
    if !table.diffs.is_empty() {
        let mut pass = table.consistent();
        let mut lines = table_lines(&table);
        let mut leaf = None;
        if m.calculus().ix_values()[2].is_one() {
            let check = horocycle_leaf_form_check(m)?;
            let integrable = foliation_ideal_check(m, &[m.gen("ω+")])?;
            lines.push(format!(
                "∇(ω0∧ω-): derived {}, printed {}; equal {}, equal on leaves ω+ = 0 {}; (ω+) integrable {}",
                check.derived, check.printed, check.equal, check.equal_on_leaves, integrable
            ));
            pass &= check.equal_on_leaves && integrable;
            leaf = Some(check);
        }
        report.push(Section::new(
            "operator tables",
            pass,
            lines,
            &serde_json::json!({ "table": table, "leaf_check": leaf }),
        ));
    }

    if let Some(s) = symplectic {
        let rows = lemma2_check(m, &s.dc, &s.omega)?;
        let lines = rows
            .iter()
            .map(|r| format!("j = {}: {} i_X = 0 {}, ∇ = 0 {}", r.j, r.form, r.contraction_zero, r.lie_zero))
            .collect();
        report.push(Section::new("basic forms dc∧Ω^j", rows.iter().all(|r| r.passes()), lines, &rows));
    }

    report
        .notes
        .push("all groups are computed inside the finite model span (model-internal)".into());
    if m.betti.is_some() && !m.computes_de_rham {
        report
            .notes
            .push("H(M) in the external-Betti ladder is taken from the Betti numbers, not from the model".into());
    }
    if is_horocycle(m) {
        report.notes.push(
            "that every flow-invariant form is right-invariant is an imported analytic fact (ergodicity of the horocycle flow), not checked here"
                .into(),
        );
    }
    Ok(report)
}

fn surface_index_lines(c1: &Corollary1Report) -> (bool, Vec<String>) {
    let g = c1.genus as i64;
    let ok = c1.sequence.consistent
        && c1.minus_index == 2 - 2 * g
        && c1.h_star == c1.h_star_from_sequence
        && c1.cokernel_infinite == (g >= 2)
        && (g != 1 || c1.c0_when_w_is_one == Some(1));
    let mut lines = sequence_lines(&c1.sequence);
    lines.push(format!(
        "h_*: kernel {}, cokernel {}, −index {}; from the sequence: kernel {}, cokernel {}",
        c1.h_star.kernel, c1.h_star.cokernel, c1.minus_index, c1.h_star_from_sequence.kernel, c1.h_star_from_sequence.cokernel
    ));
    lines.push(format!("Coker ∇^0_X infinite-dimensional: {}", c1.cokernel_infinite));
    if let Some(c0) = c1.c0_when_w_is_one {
        lines.push(format!("dim C^0_X = {c0} when dim W = 1"));
    }
    (ok, lines)
}

/// Instantiates `spec` and reports on it.
pub fn spec_report(spec: &ModelSpec) -> Result<Report> {
    match spec.kind {
        ModelKind::FlatSymplecticTorus { dim } => {
            let (m, s) = flat_symplectic_torus(dim)?;
            model_report(&m, Some(&s))
        }
        _ => model_report(&instantiate(spec)?, None),
    }
}

// Full suite.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Doubles one printed entry of the geodesic table.
    CorruptTable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub numeric: NumericParams,
    pub identity_pairs: usize,
    pub fourier_series: usize,
    pub genus: u32,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            numeric: NumericParams::default(),
            identity_pairs: 100,
            fourier_series: 200,
            genus: models::DEFAULT_GENUS,
            fault: None,
        }
    }
}

/// Models exercised by `verify-all`, sorted by name.
pub fn suite_specs(genus: u32) -> Vec<ModelSpec> {
    let mut specs: Vec<ModelSpec> = (2..=5).map(|n| ModelSpec::new(ModelKind::Torus { n })).collect();
    for kind in [ModelKind::Sl2Geodesic, ModelKind::Sl2HorocyclePlus, ModelKind::Sl2HorocycleMinus] {
        specs.push(ModelSpec::new(kind).with_genus(genus));
    }
    specs.push(ModelSpec::new(ModelKind::FlatSymplecticTorus { dim: 4 }));
    specs.sort_by_key(ModelSpec::name);
    specs
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn torus_dimension_section() -> Result<Section> {
    let mut lines = Vec::new();
    let mut pass = true;
    let mut data = Vec::new();
    for n in 2..=6 {
        let m = models::torus(n)?;
        let basic = m.dims(Subcomplex::Basic)?;
        let invariant = m.dims(Subcomplex::Invariant)?;
        let want_basic: Vec<usize> = (0..=n).map(|k| if k < n { binomial(n - 1, k) } else { 0 }).collect();
        let want_inv: Vec<usize> = (0..=n).map(|k| binomial(n, k)).collect();
        let ok = basic == want_basic && invariant == want_inv;
        pass &= ok;
        lines.push(format!(
            "n = {n}: H^k(T^n/X) {} expected {}; H^k_inv {} expected {}",
            tuple(&basic),
            tuple(&want_basic),
            tuple(&invariant),
            tuple(&want_inv)
        ));
        data.push(serde_json::json!({ "n": n, "basic": basic, "invariant": invariant, "pass": ok }));
    }
    Ok(Section::new("torus dimensions", pass, lines, &data))
}

pub fn operator_table_section(fault: Option<Fault>) -> Result<Section> {
    let geo = instantiate(&ModelSpec::new(ModelKind::Sl2Geodesic))?;
    let horo = instantiate(&ModelSpec::new(ModelKind::Sl2HorocyclePlus))?;
    let tables = [
        match fault {
            Some(Fault::CorruptTable) => derive_operator_tables_corrupted(&geo, 0),
            None => derive_operator_tables(&geo),
        },
        derive_operator_tables(&horo),
    ];
    let mut lines = Vec::new();
    for t in &tables {
        lines.push(format!("{}:", t.model));
        lines.extend(table_lines(t).into_iter().map(|l| format!("  {l}")));
    }
    let pass = tables.iter().all(OperatorTable::consistent);
    Ok(Section::new("operator tables", pass, lines, &tables))
}

pub fn surface_index_profile_section() -> Result<Section> {
    let mut pass = true;
    let mut lines = Vec::new();
    let mut data = Vec::new();
    for g in 1..=10 {
        let c1 = corollary1_profile(g)?;
        let (ok, _) = surface_index_lines(&c1);
        pass &= ok;
        lines.push(format!(
            "g = {g}: −index(h_*) = {}, kernel {}, cokernel {}, infinite {}, constraint {}{}",
            c1.minus_index,
            c1.h_star.kernel,
            c1.h_star.cokernel,
            c1.cokernel_infinite,
            c1.constraint,
            c1.c0_when_w_is_one.map(|c| format!(", dim C^0_X = {c} when dim W = 1")).unwrap_or_default()
        ));
        data.push(c1);
    }
    Ok(Section::new("surface index profile", pass, lines, &data))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericData {
    pub bracket: sl2::BracketCheck,
    pub scalar: Vec<sl2::ScalarCheck>,
    pub lie: Vec<sl2::LieCheck>,
    pub periods: Vec<sl2::PeriodReport>,
}

pub fn sl2_numeric_section(p: &NumericParams) -> Result<Section> {
    let bracket = sl2::bracket_check(&sl2::AlgebraBasis::default());
    let scalar = vec![
        sl2::duality_check(p.seed, 100),
        sl2::group_law_check(p.seed, 100),
        sl2::maurer_cartan_check(p.seed, p.samples),
    ];
    let mut lie = Vec::new();
    for kind in FlowKind::ALL {
        for k in 0..=3 {
            lie.push(sl2::numeric_lie_check(p, kind, k));
        }
    }
    let mut periods = Vec::new();
    for t in [1.0f64, 2.0, 4.0] {
        let h = GroupPoint([[(t / 2.0).exp(), 0.0], [0.0, (-t / 2.0).exp()]]);
        periods.push(sl2::closed_geodesic_period(&h)?);
    }
    let geodesic_ratio = lie
        .iter()
        .find(|c| c.flow == FlowKind::Geodesic && c.degree == 1)
        .and_then(|c| c.error_ratio);
    let mut lines = vec![format!("bracket relations: max error {:.3e}", bracket.max_error)];
    for s in &scalar {
        lines.push(format!("{}: max deviation {:.3e} (tolerance {:.0e})", s.name, s.max_deviation, s.tolerance));
    }
    for c in &lie {
        lines.push(format!(
            "∇ along {} flow, degree {}: max deviation {:.3e}{}",
            c.flow.name(),
            c.degree,
            c.max_deviation,
            c.error_ratio
                .map(|r| format!(", error ratio h/(h/2) {r:.3} (order {:.3})", r.log2()))
                .unwrap_or_default()
        ));
    }
    for r in &periods {
        lines.push(format!(
            "closed geodesic trace {:.6}: length {:.12}, ∮ω0 {:.12}, deviation {:.3e}",
            r.trace, r.length, r.integral, r.deviation
        ));
    }
    let pass = bracket.pass
        && scalar.iter().all(|s| s.pass)
        && lie.iter().all(|c| c.pass)
        && geodesic_ratio.is_some_and(|r| (3.5..=4.5).contains(&r))
        && periods.iter().all(|r| r.deviation < 1e-9);
    Ok(Section::new(
        "sl2 numerics",
        pass,
        lines,
        &NumericData {
            bracket,
            scalar,
            lie,
            periods,
        },
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierData {
    pub series: usize,
    pub max_residual: f64,
    pub all_real: bool,
    pub resonance_detected: bool,
    pub obstruction_detected: bool,
    pub golden: fourier::MinDenominator,
    pub liouville: fourier::MinDenominator,
    pub ratio: f64,
}

/// Liouville truncation used in the small-denominator comparison.
pub const LIOUVILLE_TERMS: u32 = 4;
pub const COMPARISON_SUPPORT: u64 = 1_000_000;

pub fn fourier_section(seed: u64, count: usize) -> Result<Section> {
    let golden = SlopeSpec::golden();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_residual, mut all_real) = (0.0f64, true);
    for _ in 0..count {
        let radius = rng.gen_range(1..=64);
        let terms = rng.gen_range(1..=12);
        let g = fourier::random_real_series(&mut rng, radius, terms);
        let (f, diag) = fourier::solve_cohomological(&golden, &g, false)?;
        max_residual = max_residual.max(diag.residual);
        all_real &= f.is_real();
    }
    let half = SlopeSpec::parse("1/2")?;
    let mut resonant = FourierSeries::new();
    resonant.terms.insert((1, -2), num_complex::Complex64::new(1.0, 0.0));
    let resonance_detected = matches!(
        fourier::solve_cohomological(&half, &resonant, false),
        Err(Error::Resonance { m: 1, n: -2 })
    );
    let mut constant = FourierSeries::new();
    constant.terms.insert((0, 0), num_complex::Complex64::new(1.0, 0.0));
    let obstruction_detected =
        matches!(fourier::solve_cohomological(&golden, &constant, false), Err(Error::Obstruction { .. }));
    let g_min = fourier::min_denominator(&golden, COMPARISON_SUPPORT);
    let l_min = fourier::min_denominator(&SlopeSpec::liouville(LIOUVILLE_TERMS)?, COMPARISON_SUPPORT);
    let ratio = g_min.value / l_min.value;
    let lines = vec![
        format!("{count} random real zero-mean series, golden slope: max residual {max_residual:.3e}, real solutions {all_real}"),
        format!("resonance at (1,-2) for slope 1/2 detected: {resonance_detected}"),
        format!("constant input obstructed: {obstruction_detected}"),
        format!(
            "min |m + αn| over support {COMPARISON_SUPPORT}: golden {:.3e} at ({}, {}), Liouville({LIOUVILLE_TERMS}) {:.3e} at ({}, {}), ratio {:.3e}",
            g_min.value, g_min.m, g_min.n, l_min.value, l_min.m, l_min.n, ratio
        ),
    ];
    let pass = max_residual < 1e-12 && all_real && resonance_detected && obstruction_detected && ratio >= 1e3;
    Ok(Section::new(
        "torus solver",
        pass,
        lines,
        &FourierData {
            series: count,
            max_residual,
            all_real,
            resonance_detected,
            obstruction_detected,
            golden: g_min,
            liouville: l_min,
            ratio,
        },
    ))
}

pub fn identity_section(specs: &[ModelSpec], seed: u64, pairs: usize) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<IdentityCheck> = Vec::new();
    for spec in specs {
        checks.push(algebraic_identities(&instantiate(spec)?, &mut rng, pairs)?);
    }
    let lines = checks
        .iter()
        .map(|c| {
            let failed: Vec<String> = c
                .failures
                .iter()
                .zip(IDENTITY_NAMES)
                .filter(|(f, _)| **f > 0)
                .map(|(f, name)| format!("{name} ×{f}"))
                .collect();
            format!(
                "{}: {} pairs, {}",
                c.model,
                c.pairs,
                if failed.is_empty() { "no failures".to_string() } else { failed.join(", ") }
            )
        })
        .collect();
    Ok(Section::new("algebraic identities", checks.iter().all(|c| c.pass), lines, &checks))
}

pub fn verify_all(opts: &VerifyOptions) -> Result<Report> {
    let specs = suite_specs(opts.genus);
    let mut report = Report::new("verify-all");
    report.parameters.insert("seed".into(), opts.numeric.seed.to_string());
    report.parameters.insert("samples".into(), opts.numeric.samples.to_string());
    report.parameters.insert("step".into(), format!("{:e}", opts.numeric.step));
    report.parameters.insert("tolerance".into(), format!("{:e}", opts.numeric.tolerance));
    report.parameters.insert("genus".into(), opts.genus.to_string());

    report.push(identity_section(&specs, opts.numeric.seed, opts.identity_pairs)?);

    let mut lines = Vec::new();
    let mut summaries = Vec::new();
    for spec in &specs {
        let r = spec_report(spec)?;
        let failed = r.failed_sections();
        lines.push(format!(
            "{}: {}{}",
            r.subject,
            verdict(r.pass),
            if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) }
        ));
        summaries.push(serde_json::json!({ "model": r.subject, "pass": r.pass, "failed_sections": failed }));
    }
    let all = summaries.iter().all(|s| s["pass"] == true);
    report.push(Section::new("model reports", all, lines, &summaries));

    report.push(torus_dimension_section()?);
    report.push(operator_table_section(opts.fault)?);
    report.push(surface_index_profile_section()?);
    report.push(sl2_numeric_section(&opts.numeric)?);
    report.push(fourier_section(opts.numeric.seed, opts.fourier_series)?);
    report
        .notes
        .push("sl2 flows act by left multiplication; forms use the right trivialization".into());
    Ok(report)
}
