use std::sync::Arc;

use dynforms::complex::FormModel;
use dynforms::exterior::FormElement;
use dynforms::field::{Coeff, CoefficientField};
use dynforms::fourier::{self, SlopeSpec};
use dynforms::identities::{check_pair, IDENTITY_NAMES};
use dynforms::models::{instantiate, ModelKind, ModelSpec};
use dynforms::sequences::{build_theorem1, build_theorem2};
use dynforms::sl2::{self, FlowKind, GroupPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Terms = Vec<(usize, i64, Option<usize>)>;

fn form(model: &FormModel, degree: usize, terms: &Terms) -> FormElement {
    let field = model.field();
    let basis = model.calculus().basis().degree(degree as i64);
    let mut out = FormElement::zero(field);
    for &(j, c, sym) in terms {
        let mut coeff = Coeff::from_int(c);
        if let Some(s) = sym.filter(|_| !field.symbols.is_empty()) {
            coeff = &coeff * &Coeff::symbol(s % field.symbols.len());
        }
        out = out.add(&FormElement::term(field, basis[j % basis.len()], coeff)).unwrap();
    }
    out
}

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((0usize..64, -3i64..=3, prop::option::weighted(0.3, 0usize..8)), 1..5)
}

fn identity_suite(spec: ModelSpec) -> impl Fn(usize, Terms, usize, Terms) -> Result<(), TestCaseError> {
    let model = instantiate(&spec).unwrap();
    move |p, ta, q, tb| {
        let n = model.n();
        let (p, q) = (p % (n + 1), q % (n + 1));
        let (a, b) = (form(&model, p, &ta), form(&model, q, &tb));
        let failed = check_pair(&model, &a, p, &b).unwrap();
        let names: Vec<_> = failed.iter().map(|&j| IDENTITY_NAMES[j]).collect();
        prop_assert!(failed.is_empty(), "{}: {:?} on {} and {}", model.name, names, model.format(&a), model.format(&b));
        Ok(())
    }
}

macro_rules! identity_test {
    ($name:ident, $spec:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]
            #[test]
            fn $name(p in 0usize..9, ta in terms(), q in 0usize..9, tb in terms()) {
                identity_suite($spec)(p, ta, q, tb)?;
            }
        }
    };
}

identity_test!(identities_torus2, ModelSpec::new(ModelKind::Torus { n: 2 }));
identity_test!(identities_torus3, ModelSpec::new(ModelKind::Torus { n: 3 }));
identity_test!(identities_torus4, ModelSpec::new(ModelKind::Torus { n: 4 }));
identity_test!(identities_sl2_geodesic, ModelSpec::new(ModelKind::Sl2Geodesic));
identity_test!(identities_sl2_horocycle_plus, ModelSpec::new(ModelKind::Sl2HorocyclePlus));
identity_test!(identities_sl2_horocycle_minus, ModelSpec::new(ModelKind::Sl2HorocycleMinus));
identity_test!(identities_flat_symplectic4, ModelSpec::new(ModelKind::FlatSymplecticTorus { dim: 4 }));

/// The sl2 structure equations with an arbitrary constant field
/// `X = a·e0 + b·e+ + c·e-`.
fn sl2_flow(a: i64, b: i64, c: i64) -> FormModel {
    let field = Arc::new(CoefficientField::rationals());
    let names: Vec<String> = ["ω0", "ω+", "ω-"].iter().map(|s| s.to_string()).collect();
    let w = |i: &[usize]| FormElement::wedge_of(&field, i);
    let d = vec![w(&[1, 2]), w(&[0, 1]), w(&[0, 2]).neg()];
    let ix = vec![Coeff::from_int(a), Coeff::from_int(b), Coeff::from_int(c)];
    FormModel::new("sl2-random", names, field.clone(), d, ix).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sequences_exact_for_any_sl2_flow(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2) {
        prop_assume!((a, b, c) != (0, 0, 0));
        let m = sl2_flow(a, b, c);
        for k in -1..3 {
            let r = build_theorem1(&m, k).unwrap();
            prop_assert!(r.passes(), "k = {}: {}", k, r.long.render());
            prop_assert_eq!(r.long.alternating_sum, Some(0));
        }
        let t2 = build_theorem2(&m).unwrap();
        prop_assert!(t2.model_internal.exact && t2.model_identity.holds);
        prop_assert!(m.cokernel_complex().unwrap().square_zero);
        let p1 = m.proposition1().unwrap();
        prop_assert!(p1.holds);
    }

    #[test]
    fn sequences_exact_for_rational_torus_flows(ix in prop::collection::vec(-3i64..=3, 2..=4)) {
        prop_assume!(ix.iter().any(|&x| x != 0));
        let n = ix.len();
        let field = Arc::new(CoefficientField::rationals());
        let names = (1..=n).map(|i| format!("dx{i}")).collect();
        let d = vec![FormElement::zero(&field); n];
        let m = FormModel::new("torus-rational", names, field, d, ix.iter().map(|&x| Coeff::from_int(x)).collect()).unwrap();
        for k in -1..n as i64 {
            prop_assert!(build_theorem1(&m, k).unwrap().passes());
        }
    }

    #[test]
    fn fourier_round_trip(seed in any::<u64>(), radius in 1i64..=64, count in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = fourier::random_real_series(&mut rng, radius, count);
        let alpha = SlopeSpec::golden();
        let (f, diag) = fourier::solve_cohomological(&alpha, &g, false).unwrap();
        prop_assert!(diag.residual < 1e-12);
        prop_assert!(f.is_real());
        prop_assert!(fourier::residual(&alpha, &f, &g) < 1e-12);
    }

    #[test]
    fn rational_slopes_resonate(p in -20i64..=20, q in 1i64..=20, k in 1i64..=3) {
        let alpha = SlopeSpec::parse(&format!("{p}/{q}")).unwrap();
        // m + (p/q)·n = 0 at n = k·q, m = −k·p.
        prop_assert!(alpha.is_resonant(-k * p, k * q));
        let mut g = fourier::FourierSeries::new();
        g.terms.insert((-k * p, k * q), num_complex::Complex64::new(1.0, 0.0));
        let solved = fourier::solve_cohomological(&alpha, &g, false);
        let resonant = matches!(solved, Err(dynforms::Error::Resonance { .. }));
        prop_assert!(resonant);
    }

    #[test]
    fn min_denominator_matches_brute_force(a in -5i64..=5, b in 1i64..=3, d in 2i64..=30, c in 1i64..=4, support in 1u64..=60) {
        let Ok(alpha) = SlopeSpec::surd(a, b, d, c) else { return Ok(()) };
        // Convergents are best approximations in the box only when |p| ≤ q.
        prop_assume!(alpha.value().abs() < 1.0 && !alpha.is_rational());
        let mut best = f64::INFINITY;
        let s = support as i64;
        for m in -s..=s {
            for n in -s..=s {
                if (m, n) != (0, 0) {
                    best = best.min(alpha.denominator(m, n).abs());
                }
            }
        }
        let got = fourier::min_denominator(&alpha, support);
        prop_assert!((got.value - best).abs() <= 1e-9 * best.max(1e-3), "{} vs {}", got.value, best);
    }

    #[test]
    fn flows_are_one_parameter_groups(seed in any::<u64>(), s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let g = GroupPoint::random(&mut ChaCha8Rng::seed_from_u64(seed));
        for kind in FlowKind::ALL {
            let a = sl2::flow(&sl2::flow(&g, kind, s), kind, t).0;
            let b = sl2::flow(&g, kind, s + t).0;
            let scale = b.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((a[i][j] - b[i][j]).abs() <= 1e-12 * scale);
                }
            }
            prop_assert!((sl2::det(&b) - 1.0).abs() < 1e-9);
        }
    }
}
