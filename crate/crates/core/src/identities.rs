//! Randomized checks of the Cartan calculus identities on a model.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::FormModel;
use crate::error::Result;
use crate::exterior::FormElement;
use crate::field::Coeff;

pub const IDENTITY_NAMES: [&str; 8] = [
    "d∘d = 0",
    "i∘i = 0",
    "∇ = d∘i + i∘d",
    "d Leibniz",
    "i Leibniz",
    "∇ derivation",
    "∇∘d = d∘∇",
    "∇∘i = i∘∇",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub model: String,
    pub pairs: usize,
    /// Failure counts in the order of [`IDENTITY_NAMES`].
    pub failures: Vec<usize>,
    pub pass: bool,
}

/// Homogeneous form of random degree with up to four terms; coefficients
/// are small integers, optionally times one field symbol.
pub fn random_form(model: &FormModel, rng: &mut impl Rng) -> (usize, FormElement) {
    let field = model.field();
    let calc = model.calculus();
    let k = rng.gen_range(0..=model.n());
    let mut out = FormElement::zero(field);
    let monomials = calc.basis().degree(k as i64);
    for _ in 0..rng.gen_range(1..=4) {
        let &m = monomials.choose(rng).expect("nonempty degree");
        let mut c = Coeff::from_int(rng.gen_range(-3..=3));
        if !field.symbols.is_empty() && rng.gen_bool(0.3) {
            c = &c * &Coeff::symbol(rng.gen_range(0..field.symbols.len()));
        }
        out = out.add(&FormElement::term(field, m, c)).expect("same field");
    }
    (k, out)
}

fn sign(p: usize) -> Coeff {
    Coeff::from_int(if p % 2 == 0 { 1 } else { -1 })
}

/// Checks every identity on one pair; returns the indices that fail.
pub fn check_pair(model: &FormModel, a: &FormElement, p: usize, b: &FormElement) -> Result<Vec<usize>> {
    let c = model.calculus();
    let (d, i, l) = (|x: &FormElement| c.apply_d(x), |x: &FormElement| c.contract(x), |x: &FormElement| c.lie(x));
    let ab = a.wedge(b)?;
    let results = [
        d(&d(a)?)?.is_zero(),
        i(&i(a)?)?.is_zero(),
        l(a)? == d(&i(a)?)?.add(&i(&d(a)?)?)?,
        d(&ab)? == d(a)?.wedge(b)?.add(&a.wedge(&d(b)?)?.scale(&sign(p)))?,
        i(&ab)? == i(a)?.wedge(b)?.add(&a.wedge(&i(b)?)?.scale(&sign(p)))?,
        l(&ab)? == l(a)?.wedge(b)?.add(&a.wedge(&l(b)?)?)?,
        l(&d(a)?)? == d(&l(a)?)?,
        l(&i(a)?)? == i(&l(a)?)?,
    ];
    Ok(results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(j, _)| j).collect())
}

pub fn algebraic_identities(model: &FormModel, rng: &mut impl Rng, pairs: usize) -> Result<IdentityCheck> {
    let mut failures = vec![0; IDENTITY_NAMES.len()];
    for _ in 0..pairs {
        let (p, a) = random_form(model, rng);
        let (_, b) = random_form(model, rng);
        for j in check_pair(model, &a, p, &b)? {
            failures[j] += 1;
        }
    }
    Ok(IdentityCheck {
        model: model.name.clone(),
        pairs,
        pass: failures.iter().all(|&f| f == 0),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{instantiate, ModelKind, ModelSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identities_hold_on_sl2() {
        let m = instantiate(&ModelSpec::new(ModelKind::Sl2HorocyclePlus)).unwrap();
        let r = algebraic_identities(&m, &mut ChaCha8Rng::seed_from_u64(2), 50).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn wrong_sign_is_caught() {
        // Leibniz with the sign dropped must fail for some odd-degree pair.
        let m = instantiate(&ModelSpec::new(ModelKind::Sl2Geodesic)).unwrap();
        let a = m.gen("ω+");
        let b = m.gen("ω-");
        let c = m.calculus();
        let wrong = c.apply_d(&a).unwrap().wedge(&b).unwrap().add(&a.wedge(&c.apply_d(&b).unwrap()).unwrap()).unwrap();
        assert_ne!(c.apply_d(&a.wedge(&b).unwrap()).unwrap(), wrong);
        assert!(check_pair(&m, &a, 1, &b).unwrap().is_empty());
    }
}
