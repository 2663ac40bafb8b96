//! Matrix realization of the geodesic and horocycle flows on SL(2,R).
//!
//! Flows act by left multiplication, `φ_t(g) = exp(tE)·g`, so they are the
//! flows of the right-invariant fields `X_E(g) = E·g`. Forms are read
//! through the right trivialization: `ω_a(v)` is the `E_a` coefficient of
//! `v·g⁻¹`. With this pairing the vector-field brackets are
//! `[X_A, X_B] = −X_{[A,B]}`, which is what makes the matrix brackets
//! `[E+, E-] = E0`, `[E0, E±] = ±E±` dual to `dω0 = ω+∧ω-`,
//! `dω± = ±ω0∧ω±`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::FormModel;
use crate::error::{Error, Result};
use crate::exterior::FormElement;
use crate::models::{instantiate, ModelKind, ModelSpec};

pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub fn sub(a: &Mat2, b: &Mat2) -> Mat2 {
    add(a, &scale(b, -1.0))
}

pub fn scale(a: &Mat2, s: f64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn trace(a: &Mat2) -> f64 {
    a[0][0] + a[1][1]
}

pub fn inverse(a: &Mat2) -> Mat2 {
    let d = det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    sub(&mul(a, b), &mul(b, a))
}

fn max_abs(a: &Mat2) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// A point of SL(2,R).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint(pub Mat2);

impl GroupPoint {
    pub fn new(m: Mat2) -> Result<Self> {
        if (det(&m) - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("determinant {} is not 1", det(&m))));
        }
        Ok(GroupPoint(m))
    }

    /// Rescales to determinant exactly 1 up to rounding.
    pub fn renormalized(&self) -> Self {
        GroupPoint(scale(&self.0, 1.0 / det(&self.0).sqrt()))
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let a = rng.gen_range(0.5..2.0);
        let b = rng.gen_range(-1.0..1.0);
        let c = rng.gen_range(-1.0..1.0);
        GroupPoint([[a, b], [c, (1.0 + b * c) / a]])
    }
}

/// Matrices `E0, E+, E-`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraBasis {
    pub e: [Mat2; 3],
}

impl Default for AlgebraBasis {
    /// `E0 = diag(1/2, −1/2)`, `E+ = a·[[0,1],[0,0]]`, `E- = b·[[0,0],[1,0]]`
    /// with `[E+, E-] = ab·diag(1, −1)`, so `2ab = 1`; `a = 1, b = 1/2`.
    fn default() -> Self {
        AlgebraBasis {
            e: [[[0.5, 0.0], [0.0, -0.5]], [[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
        }
    }
}

impl AlgebraBasis {
    /// Coordinates of a traceless matrix; the trace part is discarded.
    pub fn coordinates(&self, xi: &Mat2) -> [f64; 3] {
        // Solve Σ x_a E_a = ξ on the entries (11, 12, 21).
        let col = |m: &Mat2| [m[0][0], m[0][1], m[1][0]];
        let t = (xi[0][0] - xi[1][1]) / 2.0;
        let rhs = [t, xi[0][1], xi[1][0]];
        let cols = [col(&self.e[0]), col(&self.e[1]), col(&self.e[2])];
        let det3 = |c: [[f64; 3]; 3]| {
            c[0][0] * (c[1][1] * c[2][2] - c[2][1] * c[1][2]) - c[1][0] * (c[0][1] * c[2][2] - c[2][1] * c[0][2])
                + c[2][0] * (c[0][1] * c[1][2] - c[1][1] * c[0][2])
        };
        let d = det3(cols);
        let mut x = [0.0; 3];
        for (a, xa) in x.iter_mut().enumerate() {
            let mut c = cols;
            c[a] = rhs;
            *xa = det3(c) / d;
        }
        x
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketCheck {
    pub max_error: f64,
    pub pass: bool,
}

/// `[E+, E-] = E0`, `[E0, E+] = E+`, `[E0, E-] = −E-` entrywise.
pub fn bracket_check(b: &AlgebraBasis) -> BracketCheck {
    let [e0, ep, em] = &b.e;
    let errors = [
        max_abs(&sub(&commutator(ep, em), e0)),
        max_abs(&sub(&commutator(e0, ep), ep)),
        max_abs(&add(&commutator(e0, em), em)),
    ];
    let degenerate = b.e.iter().any(|m| max_abs(m) == 0.0);
    let max_error = errors.iter().fold(0.0f64, |m, &e| m.max(e));
    BracketCheck {
        max_error,
        pass: max_error < 1e-14 && !degenerate,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    Geodesic,
    HorocyclePlus,
    HorocycleMinus,
}

impl FlowKind {
    pub const ALL: [FlowKind; 3] = [FlowKind::Geodesic, FlowKind::HorocyclePlus, FlowKind::HorocycleMinus];

    pub fn name(self) -> &'static str {
        match self {
            FlowKind::Geodesic => "geodesic",
            FlowKind::HorocyclePlus => "horocycle-plus",
            FlowKind::HorocycleMinus => "horocycle-minus",
        }
    }

    /// Index of the generating matrix in the basis `(E0, E+, E-)`.
    pub fn generator(self) -> usize {
        match self {
            FlowKind::Geodesic => 0,
            FlowKind::HorocyclePlus => 2,
            FlowKind::HorocycleMinus => 1,
        }
    }

    pub fn model(self) -> FormModel {
        let kind = match self {
            FlowKind::Geodesic => ModelKind::Sl2Geodesic,
            FlowKind::HorocyclePlus => ModelKind::Sl2HorocyclePlus,
            FlowKind::HorocycleMinus => ModelKind::Sl2HorocycleMinus,
        };
        instantiate(&ModelSpec::new(kind)).expect("built-in model")
    }

    /// `exp(tE)` in closed form.
    pub fn exp(self, t: f64) -> Mat2 {
        match self {
            FlowKind::Geodesic => [[(t / 2.0).exp(), 0.0], [0.0, (-t / 2.0).exp()]],
            FlowKind::HorocyclePlus => [[1.0, 0.0], [t / 2.0, 1.0]],
            FlowKind::HorocycleMinus => [[1.0, t], [0.0, 1.0]],
        }
    }
}

pub fn flow(g: &GroupPoint, kind: FlowKind, t: f64) -> GroupPoint {
    GroupPoint(mul(&kind.exp(t), &g.0))
}

/// Differential of the flow on a tangent vector at any point.
pub fn flow_tangent(v: &Mat2, kind: FlowKind, t: f64) -> Mat2 {
    mul(&kind.exp(t), v)
}

pub fn eval_invariant_form(basis: &AlgebraBasis, which: usize, g: &GroupPoint, v: &Mat2) -> f64 {
    basis.coordinates(&mul(v, &inverse(&g.0)))[which]
}

/// Value of a symbolic form on tangent vectors at `g`.
pub fn eval_form(basis: &AlgebraBasis, form: &FormElement, g: &GroupPoint, vs: &[Mat2]) -> f64 {
    let coords: Vec<[f64; 3]> = vs.iter().map(|v| basis.coordinates(&mul(v, &inverse(&g.0)))).collect();
    let mut total = 0.0;
    for (m, c) in form.terms() {
        let idx = m.indices();
        if idx.len() != vs.len() {
            continue;
        }
        total += c.eval_f64(&[]) * small_det(&idx, &coords);
    }
    total
}

fn small_det(idx: &[usize], coords: &[[f64; 3]]) -> f64 {
    let e = |r: usize, s: usize| coords[s][idx[r]];
    match idx.len() {
        0 => 1.0,
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        3 => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => unreachable!("sl2 forms have degree at most 3"),
    }
}

fn random_tangent(rng: &mut impl Rng, g: &GroupPoint) -> Mat2 {
    let a = rng.gen_range(-1.0..1.0);
    let xi = [[a, rng.gen_range(-1.0..1.0)], [rng.gen_range(-1.0..1.0), -a]];
    mul(&xi, &g.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericParams {
    pub seed: u64,
    pub samples: usize,
    /// Finite-difference step for the reported deviation.
    pub step: f64,
    pub tolerance: f64,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            seed: 1,
            samples: 12,
            step: 1e-4,
            tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieCheck {
    pub flow: FlowKind,
    pub degree: usize,
    pub samples: usize,
    pub step: f64,
    pub max_deviation: f64,
    /// `log2` of the Richardson error ratio between steps `h0` and `h0/2`;
    /// absent when the errors are at rounding level (polynomial flows).
    pub observed_order: Option<f64>,
    /// The same ratio before taking `log2`; second order gives about 4.
    pub error_ratio: Option<f64>,
    pub pass: bool,
}

/// Richardson-extrapolated forward difference `2D(h/2) − D(h)` of the
/// pullback of `u` along the flow.
fn extrapolated_lie(basis: &AlgebraBasis, u: &FormElement, kind: FlowKind, g: &GroupPoint, vs: &[Mat2], h: f64) -> f64 {
    let base = eval_form(basis, u, g, vs);
    let diff = |t: f64| {
        let moved: Vec<Mat2> = vs.iter().map(|v| flow_tangent(v, kind, t)).collect();
        (eval_form(basis, u, &flow(g, kind, t), &moved) - base) / t
    };
    2.0 * diff(h / 2.0) - diff(h)
}

pub fn numeric_lie_check(params: &NumericParams, kind: FlowKind, degree: usize) -> LieCheck {
    let basis = AlgebraBasis::default();
    let model = kind.model();
    let calc = model.calculus();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ (degree as u64) << 8 ^ kind.generator() as u64);
    let h0 = 0.05;
    let (mut max_dev, mut err_coarse, mut err_fine) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..params.samples {
        let g = GroupPoint::random(&mut rng);
        let vs: Vec<Mat2> = (0..degree).map(|_| random_tangent(&mut rng, &g)).collect();
        for &m in calc.basis().degree(degree as i64) {
            let u = FormElement::term(model.field(), m, crate::field::Coeff::one());
            let exact = eval_form(&basis, &calc.lie(&u).expect("same field"), &g, &vs);
            max_dev = max_dev.max((extrapolated_lie(&basis, &u, kind, &g, &vs, params.step) - exact).abs());
            err_coarse += (extrapolated_lie(&basis, &u, kind, &g, &vs, h0) - exact).abs();
            err_fine += (extrapolated_lie(&basis, &u, kind, &g, &vs, h0 / 2.0) - exact).abs();
        }
    }
    let error_ratio = (err_fine > 1e-11).then(|| err_coarse / err_fine);
    let observed_order = error_ratio.map(f64::log2);
    LieCheck {
        flow: kind,
        degree,
        samples: params.samples,
        step: params.step,
        max_deviation: max_dev,
        observed_order,
        error_ratio,
        pass: max_dev < params.tolerance && error_ratio.is_none_or(|r| (3.5..=4.5).contains(&r)),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalarCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ScalarCheck {
    fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        ScalarCheck {
            name: name.to_string(),
            max_deviation,
            tolerance,
            pass: max_deviation < tolerance,
        }
    }
}

/// `ω_a(E_b·g) = δ_ab` at random points.
pub fn duality_check(seed: u64, samples: usize) -> ScalarCheck {
    let basis = AlgebraBasis::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev = 0.0f64;
    for _ in 0..samples {
        let g = GroupPoint::random(&mut rng);
        for a in 0..3 {
            for b in 0..3 {
                let v = eval_invariant_form(&basis, a, &g, &mul(&basis.e[b], &g.0));
                dev = dev.max((v - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    ScalarCheck::new("duality", dev, 1e-12)
}

/// `φ_t ∘ φ_s = φ_{s+t}` for `|s|, |t| ≤ 5`.
pub fn group_law_check(seed: u64, samples: usize) -> ScalarCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev = 0.0f64;
    for _ in 0..samples {
        let g = GroupPoint::random(&mut rng);
        let (s, t) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        for kind in FlowKind::ALL {
            let a = flow(&flow(&g, kind, s), kind, t).0;
            let b = flow(&g, kind, s + t).0;
            let rel = max_abs(&sub(&a, &b)) / max_abs(&b).max(1.0);
            dev = dev.max(rel);
        }
    }
    ScalarCheck::new("one-parameter group law", dev, 1e-12)
}

/// Bracket of the right-invariant fields `X_a, X_b` at `g`, from the flow
/// commutator `φ^b_{−s} φ^a_{−s} φ^b_s φ^a_s (g) = g + s²[X_a, X_b] + …`,
/// symmetrized in `s` and Richardson-extrapolated.
fn field_bracket(basis: &AlgebraBasis, a: usize, b: usize, g: &GroupPoint, s: f64) -> Mat2 {
    let exp = |i: usize, t: f64| -> Mat2 {
        // exp(tE) for the basis element by its nilpotent/diagonal form.
        let e = &basis.e[i];
        if e[0][1] == 0.0 && e[1][0] == 0.0 {
            [[(t * e[0][0]).exp(), 0.0], [0.0, (t * e[1][1]).exp()]]
        } else {
            add(&IDENTITY, &scale(e, t))
        }
    };
    let sym = |s: f64| {
        let comm = |s: f64| {
            let m = mul(&exp(b, -s), &mul(&exp(a, -s), &mul(&exp(b, s), &exp(a, s))));
            sub(&mul(&m, &g.0), &g.0)
        };
        scale(&add(&comm(s), &comm(-s)), 1.0 / (2.0 * s * s))
    };
    scale(&sub(&scale(&sym(s / 2.0), 4.0), &sym(s)), 1.0 / 3.0)
}

/// `dω_c(X_a, X_b) = −ω_c([X_a, X_b])` numerically, against the symbolic
/// `d`-values.
pub fn maurer_cartan_check(seed: u64, samples: usize) -> ScalarCheck {
    let basis = AlgebraBasis::default();
    let model = FlowKind::Geodesic.model();
    let calc = model.calculus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev = 0.0f64;
    for _ in 0..samples {
        let g = GroupPoint::random(&mut rng);
        for a in 0..3 {
            for b in 0..3 {
                let bracket = field_bracket(&basis, a, b, &g, 5e-3);
                let xa = mul(&basis.e[a], &g.0);
                let xb = mul(&basis.e[b], &g.0);
                for c in 0..3 {
                    let numeric = -eval_invariant_form(&basis, c, &g, &bracket);
                    let symbolic = eval_form(&basis, &calc.d_values()[c], &g, &[xa, xb]);
                    dev = dev.max((numeric - symbolic).abs());
                }
            }
        }
    }
    ScalarCheck::new("Maurer-Cartan", dev, 1e-8)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodReport {
    pub trace: f64,
    pub length: f64,
    pub integral: f64,
    pub deviation: f64,
}

/// Length of the closed geodesic of a hyperbolic element and the integral
/// of `ω0` along the orbit from a point on its axis.
pub fn closed_geodesic_period(h: &GroupPoint) -> Result<PeriodReport> {
    let tr = trace(&h.0);
    if tr.abs() <= 2.0 {
        return Err(Error::NotHyperbolic { trace: tr.abs() });
    }
    // ±h define the same element of PSL(2,R).
    let m = if tr < 0.0 { scale(&h.0, -1.0) } else { h.0 };
    let t = trace(&m);
    let lambda = (t + (t * t - 4.0).sqrt()) / 2.0;
    let length = 2.0 * (t / 2.0).acosh();
    // Eigenvectors as columns of P with det P = 1, so h = P·D·P⁻¹.
    let eigvec = |mu: f64| -> [f64; 2] {
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        if b.abs() > c.abs() {
            [b, mu - a]
        } else if c.abs() > 0.0 {
            [mu - d, c]
        } else {
            // Diagonal: pick the matching coordinate axis.
            if (a - mu).abs() < (d - mu).abs() { [1.0, 0.0] } else { [0.0, 1.0] }
        }
    };
    let (v1, mut v2) = (eigvec(lambda), eigvec(1.0 / lambda));
    let mut p = [[v1[0], v2[0]], [v1[1], v2[1]]];
    if det(&p) < 0.0 {
        v2 = [-v2[0], -v2[1]];
        p = [[v1[0], v2[0]], [v1[1], v2[1]]];
    }
    let p = scale(&p, 1.0 / det(&p).sqrt());
    // exp(ℓE0)·g0 = g0·h for g0 = P⁻¹.
    let g0 = GroupPoint(inverse(&p));
    let basis = AlgebraBasis::default();
    let integrand = |t: f64| {
        let velocity = |delta: f64| {
            let fwd = flow(&g0, FlowKind::Geodesic, t + delta).0;
            let back = flow(&g0, FlowKind::Geodesic, t - delta).0;
            scale(&sub(&fwd, &back), 1.0 / (2.0 * delta))
        };
        let v = scale(&sub(&scale(&velocity(5e-4), 4.0), &velocity(1e-3)), 1.0 / 3.0);
        eval_invariant_form(&basis, 0, &flow(&g0, FlowKind::Geodesic, t), &v)
    };
    // Composite Simpson.
    let intervals = 2000;
    let dt = length / intervals as f64;
    let mut sum = integrand(0.0) + integrand(length);
    for i in 1..intervals {
        sum += integrand(i as f64 * dt) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let integral = sum * dt / 3.0;
    Ok(PeriodReport {
        trace: tr,
        length,
        integral,
        deviation: (integral - length).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_basis_brackets() {
        assert!(bracket_check(&AlgebraBasis::default()).pass);
        let mut doubled = AlgebraBasis::default();
        doubled.e[2] = scale(&doubled.e[2], 2.0);
        assert!(!bracket_check(&doubled).pass);
        assert!(!bracket_check(&AlgebraBasis { e: [[[0.0; 2]; 2]; 3] }).pass);
    }

    #[test]
    fn closed_form_flows() {
        let id = GroupPoint(IDENTITY);
        assert_eq!(flow(&id, FlowKind::Geodesic, 0.0).0, IDENTITY);
        let g = flow(&id, FlowKind::Geodesic, 2.0).0;
        assert!((g[0][0] - 1f64.exp()).abs() < 1e-15 && (g[1][1] - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(flow(&id, FlowKind::HorocyclePlus, 3.0).0, [[1.0, 0.0], [1.5, 1.0]]);
        assert!(group_law_check(3, 50).pass);
    }

    #[test]
    fn velocities_pair_with_forms() {
        let basis = AlgebraBasis::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupPoint::random(&mut rng);
        let vel = |k: FlowKind| mul(&basis.e[k.generator()], &g.0);
        assert!((eval_invariant_form(&basis, 0, &g, &vel(FlowKind::Geodesic)) - 1.0).abs() < 1e-12);
        assert!(eval_invariant_form(&basis, 1, &g, &vel(FlowKind::Geodesic)).abs() < 1e-12);
        assert!((eval_invariant_form(&basis, 2, &g, &vel(FlowKind::HorocyclePlus)) - 1.0).abs() < 1e-12);
        assert!(duality_check(9, 100).pass);
    }

    #[test]
    fn lie_derivatives_match_tables() {
        let p = NumericParams::default();
        for kind in FlowKind::ALL {
            for k in 0..=3 {
                let c = numeric_lie_check(&p, kind, k);
                assert!(c.pass, "{kind:?} k={k}: {c:?}");
            }
        }
        let geo = numeric_lie_check(&p, FlowKind::Geodesic, 1);
        let ratio = geo.error_ratio.unwrap();
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn maurer_cartan() {
        let c = maurer_cartan_check(11, 10);
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn periods() {
        for t in [1.0f64, 2.0, 4.0] {
            let h = GroupPoint([[(t / 2.0).exp(), 0.0], [0.0, (-t / 2.0).exp()]]);
            let r = closed_geodesic_period(&h).unwrap();
            assert!((r.length - t).abs() < 1e-12);
            assert!(r.deviation < 1e-9, "{r:?}");
        }
        let skew = GroupPoint([[2.0, 1.0], [3.0, 2.0]]);
        let r = closed_geodesic_period(&skew).unwrap();
        assert!(r.deviation < 1e-9);
        let rot = GroupPoint([[0.6, -0.8], [0.8, 0.6]]);
        assert!(matches!(closed_geodesic_period(&rot), Err(Error::NotHyperbolic { .. })));
    }
}
