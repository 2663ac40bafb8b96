//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use dynforms::complex::{FormModel, Subcomplex};
use dynforms::exterior::OperatorKind;
use dynforms::fourier::{self, FourierSeries, SlopeSpec};
use dynforms::identities::{algebraic_identities, IDENTITY_NAMES};
use dynforms::models::{derive_operator_tables, instantiate, DiffStatus, ModelKind, ModelSpec};
use dynforms::sequences::{build_theorem1, build_theorem2, corollary1_profile, FredholmData};
use dynforms::sl2::{self, AlgebraBasis, FlowKind, GroupPoint, NumericParams};
use dynforms::Error;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn model(kind: ModelKind) -> FormModel {
    instantiate(&ModelSpec::new(kind)).expect("built-in model")
}

fn builtins() -> Vec<FormModel> {
    let mut out: Vec<_> = (2..=6).map(|n| model(ModelKind::Torus { n })).collect();
    out.extend([ModelKind::Sl2Geodesic, ModelKind::Sl2HorocyclePlus, ModelKind::Sl2HorocycleMinus].map(model));
    out.extend([2, 4, 6].map(|dim| model(ModelKind::FlatSymplecticTorus { dim })));
    out
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("took {:.2?}, limit {:?}", t, limit))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_torus_dimensions() -> Outcome {
    let start = Instant::now();
    for n in 2..=6 {
        let m = model(ModelKind::Torus { n });
        let basic = m.dims(Subcomplex::Basic).map_err(|e| e.to_string())?;
        let inv = m.dims(Subcomplex::Invariant).map_err(|e| e.to_string())?;
        let want_basic: Vec<_> = (0..=n).map(|k| binomial(n - 1, k)).collect();
        let want_inv: Vec<_> = (0..=n).map(|k| binomial(n, k)).collect();
        ensure(basic == want_basic, || format!("n = {n}: H(M/X) {basic:?}, expected {want_basic:?}"))?;
        ensure(inv == want_inv, || format!("n = {n}: H_inv {inv:?}, expected {want_inv:?}"))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("n = 2..6 match binomials in {:.2?}", start.elapsed()))
}

fn c2_relative_sequences() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=5 {
        let m = model(ModelKind::Torus { n });
        for k in -1..n as i64 {
            let r = build_theorem1(&m, k).map_err(|e| e.to_string())?;
            ensure(r.passes(), || format!("torus-{n}, k = {k} not exact"))?;
            ensure(r.long.alternating_sum == Some(0), || {
                format!("torus-{n}, k = {k}: alternating sum {:?}", r.long.alternating_sum)
            })?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{count} sequences exact, alternating sums 0, {:.2?}", start.elapsed()))
}

fn c3_top_degree() -> Outcome {
    let models = builtins();
    for m in &models {
        let p = m.proposition1().map_err(|e| e.to_string())?;
        ensure(p.holds, || format!("{}: H^n_X = {}, C^(n-1) = {}", m.name, p.dim_h_n_x, p.dim_c_n_minus_1))?;
    }
    Ok(format!("{} built-in models", models.len()))
}

fn c4_geodesic() -> Outcome {
    let start = Instant::now();
    let m = model(ModelKind::Sl2Geodesic);
    let err = |e: Error| e.to_string();
    let inv = m.dims(Subcomplex::Invariant).map_err(err)?;
    let basic = m.dims(Subcomplex::Basic).map_err(err)?;
    let basic1 = m.basic(1).map_err(err)?.dim();
    let c = m.cokernel_complex().map_err(err)?;
    ensure(inv == [1, 0, 0, 1], || format!("H_inv {inv:?}"))?;
    ensure(basic == [1, 0, 1, 0], || format!("H(M/X) {basic:?}"))?;
    ensure(basic1 == 0, || format!("basic 1-forms {basic1}"))?;
    ensure(c.cohomology_dims.get(2) == Some(&1), || format!("H_C {:?}", c.cohomology_dims))?;
    ensure(c.square_zero, || "d_C^2 != 0".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("H_inv (1,0,0,1), H(M/X) (1,0,1,0), H^2_C = 1, d_C^2 = 0 in {:.2?}", start.elapsed()))
}

fn lie_power_ranks(m: &FormModel) -> Result<Vec<usize>, String> {
    let lie = m.op(OperatorKind::Lie, 1);
    let mut power = lie.clone();
    let mut ranks = vec![power.rank()];
    for _ in 1..3 {
        power = lie.compose(&power).map_err(|e| e.to_string())?;
        ranks.push(power.rank());
    }
    Ok(ranks)
}

fn c5_horocycles() -> Outcome {
    for kind in [ModelKind::Sl2HorocyclePlus, ModelKind::Sl2HorocycleMinus] {
        let m = model(kind.clone());
        let basic = m.dims(Subcomplex::Basic).map_err(|e| e.to_string())?;
        ensure(basic[..3] == [1, 0, 0], || format!("{}: H(M/X) {basic:?}", m.name))?;
        let ranks = lie_power_ranks(&m)?;
        ensure(ranks == [2, 1, 0], || format!("{}: ranks {ranks:?}", m.name))?;
        for g in 1..=5u32 {
            let mg = instantiate(&ModelSpec::new(kind.clone()).with_genus(g)).map_err(|e| e.to_string())?;
            let t2 = build_theorem2(&mg).map_err(|e| e.to_string())?;
            let h_c: Vec<_> = t2.h_c.iter().map(|t| t.dim.known()).collect();
            let want = [Some(2 * g as u64), Some(2 * g as u64), Some(1)];
            ensure(h_c == want, || format!("{}, g = {g}: H_C {h_c:?}", m.name))?;
        }
    }
    Ok("both flows: H(M/X) (1,0,0), ranks of ∇, ∇², ∇³ = (2,1,0), H_C = (2g,2g,1) for g = 1..5".into())
}

fn c6_surface_index() -> Outcome {
    for g in 1..=10u32 {
        let r = corollary1_profile(g).map_err(|e| e.to_string())?;
        let gi = g as i64;
        let stated = FredholmData::new(2 * gi - 1, 1);
        ensure(r.minus_index == 2 - 2 * gi, || format!("g = {g}: -index {}", r.minus_index))?;
        ensure(r.h_star == stated && r.h_star_from_sequence == stated, || {
            format!("g = {g}: h_* {:?} / {:?}", r.h_star, r.h_star_from_sequence)
        })?;
        ensure(r.cokernel_infinite == (g >= 2), || format!("g = {g}: infinite verdict {}", r.cokernel_infinite))?;
        if g == 1 {
            ensure(r.c0_when_w_is_one == Some(1), || format!("g = 1: dim C^0 {:?}", r.c0_when_w_is_one))?;
        }
    }
    Ok("g = 1..10: -index = 2-2g, ker 2g-1, coker 1; infinite for g >= 2; dim C^0 = 1 at g = 1".into())
}

fn c7_index_identity() -> Outcome {
    for n in 2..=5 {
        let m = model(ModelKind::Torus { n });
        let t2 = build_theorem2(&m).map_err(|e| e.to_string())?;
        let id = &t2.model_identity;
        // b1(M/X) = n - 1 and the Euler characteristic of the torus is 0.
        let expected = 2 - n as i64;
        ensure(t2.model_internal.exact, || format!("torus-{n}: ladder not exact"))?;
        ensure(id.holds && id.rhs == expected && id.lhs == expected.to_string(), || {
            format!("torus-{n}: {} vs {} (expected {expected})", id.lhs, id.rhs)
        })?;
    }
    Ok("torus-2..5: Σ(-1)^k Index(h_k) = 2 - n".into())
}

fn c8_operator_tables() -> Outcome {
    let mut totals = (0, 0, 0);
    for kind in [ModelKind::Sl2Geodesic, ModelKind::Sl2HorocyclePlus, ModelKind::Sl2HorocycleMinus] {
        let m = model(kind);
        let t = derive_operator_tables(&m);
        ensure(t.count(DiffStatus::Mismatch) == 0, || format!("{}: mismatches", m.name))?;
        ensure(t.consistent(), || format!("{}: sign flip on an unambiguous entry", m.name))?;
        totals.0 += t.count(DiffStatus::Match);
        totals.1 += t.count(DiffStatus::SignFlip);
        totals.2 += t.diffs.len();
    }
    Ok(format!("{} entries: {} match, {} sign flips on ± entries, 0 mismatch", totals.2, totals.0, totals.1))
}

fn c9_fourier() -> Outcome {
    let start = Instant::now();
    let golden = SlopeSpec::golden();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let g = fourier::random_real_series(&mut rng, 64, 24);
        ensure(g.support_radius() <= 64 && g.get(0, 0) == Complex64::new(0.0, 0.0) && g.is_real(), || {
            "generated series out of contract".into()
        })?;
        let (f, _) = fourier::solve_cohomological(&golden, &g, false).map_err(|e| e.to_string())?;
        let r = fourier::residual(&golden, &f, &g);
        ensure(r < 1e-12, || format!("residual {r:e}"))?;
        worst = worst.max(r);
    }
    for (alpha, m, n) in [("1/2", 1, -2), ("3/7", -3, 7), ("-5/3", 5, 3)] {
        let mut g = FourierSeries::new();
        g.terms.insert((m, n), Complex64::new(1.0, 0.0));
        let slope = SlopeSpec::parse(alpha).map_err(|e| e.to_string())?;
        let res = fourier::solve_cohomological(&slope, &g, false);
        ensure(matches!(res, Err(Error::Resonance { .. })), || format!("α = {alpha}: no resonance at ({m}, {n})"))?;
    }
    let support = 1_000_000;
    let liouville = SlopeSpec::liouville(4).map_err(|e| e.to_string())?;
    let l = fourier::min_denominator(&liouville, support);
    let gold = fourier::min_denominator(&golden, support);
    let ratio = gold.value / l.value;
    ensure(ratio >= 1e3, || format!("golden/Liouville ratio {ratio:e}"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "200 series, max residual {worst:.1e}; resonance caught; min denominator golden {:.2e} vs Liouville {:.2e} (×{ratio:.1e}) at N = 1e6; {:.2?}",
        gold.value,
        l.value,
        start.elapsed()
    ))
}

fn c10_numerics() -> Outcome {
    let params = NumericParams::default();
    let mut worst = 0.0f64;
    let mut ratio = None;
    for kind in FlowKind::ALL {
        for degree in 1..=3 {
            let c = sl2::numeric_lie_check(&params, kind, degree);
            ensure(c.max_deviation < 1e-6, || {
                format!("{} degree {degree}: deviation {:e}", kind.name(), c.max_deviation)
            })?;
            if let Some(r) = c.error_ratio {
                // Second order halves to a quarter: ratio 4, log2 = 2.
                ensure((3.5..=4.5).contains(&r), || format!("{} degree {degree}: error ratio {r}", kind.name()))?;
                ratio = Some((r, c.observed_order.unwrap_or(f64::NAN)));
            }
            worst = worst.max(c.max_deviation);
        }
    }
    let (r, order) = ratio.ok_or("no convergence ratio measured")?;
    for t in [1.0f64, 2.0, 4.0] {
        let h = GroupPoint::new([[(t / 2.0).exp(), 0.0], [0.0, (-t / 2.0).exp()]]).map_err(|e| e.to_string())?;
        let p = sl2::closed_geodesic_period(&h).map_err(|e| e.to_string())?;
        ensure(p.deviation < 1e-9 && (p.length - t).abs() < 1e-9, || {
            format!("t = {t}: length {} integral {} deviation {:e}", p.length, p.integral, p.deviation)
        })?;
    }
    let bracket = sl2::bracket_check(&AlgebraBasis::default());
    ensure(bracket.max_error < 1e-8, || format!("bracket error {:e}", bracket.max_error))?;
    let mc = sl2::maurer_cartan_check(params.seed, params.samples);
    ensure(mc.max_deviation < 1e-8, || format!("Maurer-Cartan deviation {:e}", mc.max_deviation))?;
    Ok(format!(
        "Lie deviation {worst:.1e}, error ratio {r:.3} (order {order:.3}); periods t = 1,2,4 < 1e-9; bracket {:.1e}, Maurer-Cartan {:.1e}",
        bracket.max_error, mc.max_deviation
    ))
}

fn c11_identities() -> Outcome {
    let models = builtins();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in &models {
        let c = algebraic_identities(m, &mut rng, 100).map_err(|e| e.to_string())?;
        ensure(c.pass && c.pairs >= 100, || {
            let failed: Vec<_> = c.failures.iter().zip(IDENTITY_NAMES).filter(|(f, _)| **f > 0).collect();
            format!("{}: {failed:?}", m.name)
        })?;
    }
    Ok(format!("{} identities × 100 pairs on {} models, 0 failures", IDENTITY_NAMES.len(), models.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("torus dimensions", c1_torus_dimensions),
        ("relative sequences exact", c2_relative_sequences),
        ("top-degree relative cohomology", c3_top_degree),
        ("sl2 geodesic", c4_geodesic),
        ("sl2 horocycles", c5_horocycles),
        ("surface index calculus", c6_surface_index),
        ("ladder index identity", c7_index_identity),
        ("operator tables", c8_operator_tables),
        ("Fourier inversion", c9_fourier),
        ("sl2 numeric cross-check", c10_numerics),
        ("algebraic identities", c11_identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
