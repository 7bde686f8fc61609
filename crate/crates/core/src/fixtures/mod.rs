//! Named, fully certified example bundles.
//!
//! Every bundle re-verifies from scratch through [`FixtureBundle::verify`]; the
//! expected dimension tables and obstruction pairs are computed from closed forms,
//! not by the code under test.

use std::collections::BTreeMap;

use crate::endo::{endo_g_algebra, BigradedModule, Summand};
use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, Matrix, Window};
use crate::g_algebra::{
    associated_g_algebra, check_g_algebra_iso, principal_dimension_obstruction, validate_g_algebra,
    verify_principal_map, GAlgebra, GAlgebraMorphism, PrincipalMap,
};
use crate::graded_algebra::builders::{direct_sum, laurent_ring, matrix_example, monomial_scaling, polynomial_ring};
use crate::graded_algebra::{check_graded_iso, validate_algebra, GradedAlgebra, GradedLinearMap};
use crate::twisting::{gamma, twist_equivalence_from_iso, verify_twisting_system, zhang_twist, TwistingSystem};
use crate::verdict::Verdict;

pub const FIXTURE_NAMES: [&str; 4] = ["not-principal", "eg2", "zhang-matrix-pair", "q-plane"];

/// Something living on a named object of the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct On<T> {
    pub on: String,
    pub value: T,
}

/// A map between two named objects of the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Between<T> {
    pub source: String,
    pub target: String,
    pub value: T,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    /// Component dimensions required of a named G-algebra.
    pub dims: BTreeMap<String, BTreeMap<(Elem, Elem), usize>>,
    /// Pairs a named G-algebra's obstruction report must contain; an empty list
    /// means the report must be empty.
    pub obstructions: BTreeMap<String, Vec<((Elem, Elem), (Elem, Elem))>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureBundle {
    pub name: String,
    pub field: FieldSpec,
    pub window: Window,
    pub algebras: BTreeMap<String, GradedAlgebra>,
    pub g_algebras: BTreeMap<String, GAlgebra>,
    pub modules: BTreeMap<String, BigradedModule>,
    pub twists: BTreeMap<String, On<TwistingSystem>>,
    pub principal_maps: BTreeMap<String, On<PrincipalMap>>,
    pub graded_maps: BTreeMap<String, Between<GradedLinearMap>>,
    pub morphisms: BTreeMap<String, Between<GAlgebraMorphism>>,
    pub expected: Expectations,
}

fn failed(bundle: &str, what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Inconsistent(format!("fixture {bundle}: {what}: {detail}"))
}

impl FixtureBundle {
    fn empty(name: &str, field: FieldSpec, window: Window) -> Self {
        FixtureBundle {
            name: name.into(),
            field,
            window,
            algebras: BTreeMap::new(),
            g_algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            twists: BTreeMap::new(),
            principal_maps: BTreeMap::new(),
            graded_maps: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            expected: Expectations::default(),
        }
    }

    pub fn algebra(&self, name: &str) -> Result<&GradedAlgebra> {
        self.algebras
            .get(name)
            .ok_or_else(|| Error::MissingComponent(format!("algebra {name} in fixture {}", self.name)))
    }

    pub fn g_algebra(&self, name: &str) -> Result<&GAlgebra> {
        self.g_algebras
            .get(name)
            .ok_or_else(|| Error::MissingComponent(format!("g-algebra {name} in fixture {}", self.name)))
    }

    /// Re-checks every contained object and every expectation.
    pub fn verify(&self) -> Result<()> {
        let n = &self.name;
        for (k, a) in &self.algebras {
            let r = validate_algebra(a);
            if !r.is_valid() {
                return Err(failed(n, k, format!("{} violations", r.violations.len())));
            }
        }
        for (k, r) in &self.g_algebras {
            let v = validate_g_algebra(r);
            if !v.is_valid() {
                return Err(failed(n, k, format!("{} violations", v.violations.len())));
            }
        }
        for (k, t) in &self.twists {
            if let Verdict::Fails(w) = verify_twisting_system(self.algebra(&t.on)?, &t.value)? {
                return Err(failed(n, k, w));
            }
        }
        for (k, t) in &self.principal_maps {
            if let Verdict::Fails(w) = verify_principal_map(self.g_algebra(&t.on)?, &t.value) {
                return Err(failed(n, k, w));
            }
        }
        for (k, m) in &self.graded_maps {
            if let Verdict::Fails(w) = check_graded_iso(self.algebra(&m.source)?, self.algebra(&m.target)?, &m.value) {
                return Err(failed(n, k, w));
            }
        }
        for (k, m) in &self.morphisms {
            let v = check_g_algebra_iso(self.g_algebra(&m.source)?, self.g_algebra(&m.target)?, &m.value)?;
            if let Verdict::Fails(w) = v {
                return Err(failed(n, k, w));
            }
        }
        for (k, dims) in &self.expected.dims {
            let r = self.g_algebra(k)?;
            for (&(f, g), &d) in dims {
                if r.dim(f, g) != Some(d) {
                    return Err(failed(n, k, format!("dim at ({f},{g}) is {:?}, expected {d}", r.dim(f, g))));
                }
            }
        }
        for (k, pairs) in &self.expected.obstructions {
            let report = principal_dimension_obstruction(self.g_algebra(k)?);
            if pairs.is_empty() && !report.is_empty() {
                return Err(failed(n, k, "obstruction report is not empty"));
            }
            for (s, t) in pairs {
                if !report.contains(*s, *t) {
                    return Err(failed(n, k, format!("obstruction misses (({},{}),({},{}))", s.0, s.1, t.0, t.1)));
                }
            }
        }
        Ok(())
    }
}

fn bounds(window: Window) -> Result<(i64, i64)> {
    match window {
        Window::Interval { lo, hi } => Ok((lo, hi)),
        Window::Whole => Err(Error::InvalidWindow("fixtures need a finite index window".into())),
    }
}

/// Radius of a symmetric degree window holding every difference of indices in `w`.
fn reach(w: Window) -> Result<i64> {
    let (lo, hi) = bounds(w)?;
    Ok(2 * lo.abs().max(hi.abs()))
}

pub fn fixture(name: &str, field: FieldSpec, window: Window) -> Result<FixtureBundle> {
    let b = match name {
        "not-principal" => not_principal(field, window),
        "eg2" => eg2(field, window),
        "zhang-matrix-pair" => zhang_matrix_pair(field, window),
        "q-plane" => q_plane(field, window),
        _ => return Err(Error::UnknownFixture(name.into())),
    }?;
    b.verify()?;
    Ok(b)
}

fn not_principal_shift(n: Elem) -> Elem {
    if n.0 % 2 == 0 {
        n
    } else {
        Elem(-n.0)
    }
}

/// `P_{n*} = k[x]⟨n⟩` for even `n` and `k[x]⟨−n⟩` for odd `n`.
fn not_principal(field: FieldSpec, window: Window) -> Result<FixtureBundle> {
    let (lo, hi) = bounds(window)?;
    let base = polynomial_ring(field, &[("x", 1)], Window::symmetric(reach(window)?))?;
    let p = BigradedModule::from_shifts(base.clone(), window, |n| vec![not_principal_shift(n)])?;
    let h = endo_g_algebra(&p, window)?;
    let mut out = FixtureBundle::empty("not-principal", field, window);
    let mut dims = BTreeMap::new();
    for f in lo..=hi {
        for g in lo..=hi {
            let d = not_principal_shift(Elem(g)).0 - not_principal_shift(Elem(f)).0;
            dims.insert((Elem(f), Elem(g)), usize::from(d >= 0));
        }
    }
    out.expected.dims.insert("H".into(), dims);
    if lo <= 0 && hi >= 3 {
        out.expected
            .obstructions
            .insert("H".into(), vec![((Elem(0), Elem(2)), (Elem(1), Elem(3)))]);
    }
    out.algebras.insert("B".into(), base);
    out.modules.insert("P".into(), p);
    out.g_algebras.insert("H".into(), h);
    Ok(out)
}

/// `P_{n*} = k[x]⟨n⟩ ⊕ k[y]⟨−n⟩` over `k[x] ⊕ k[y]`, with `H ≅ B̄` for
/// `B = k[x] ⊕ k[y]`, `deg x = 1`, `deg y = −1`.
fn eg2(field: FieldSpec, window: Window) -> Result<FixtureBundle> {
    let (lo, hi) = bounds(window)?;
    let r = Window::symmetric(reach(window)?);
    let a = direct_sum(&polynomial_ring(field, &[("x", 1)], r)?, &polynomial_ring(field, &[("y", 1)], r)?)?;
    let ex = vec![field.one(), field.zero()];
    let ey = vec![field.zero(), field.one()];
    let rows = (lo..=hi)
        .map(|n| (Elem(n), vec![Summand::cut(Elem(n), ex.clone()), Summand::cut(Elem(-n), ey.clone())]))
        .collect();
    let p = BigradedModule::new(a.clone(), rows)?;
    let h = endo_g_algebra(&p, window)?;
    let d = window.difference_window();
    let b = direct_sum(&polynomial_ring(field, &[("x", 1)], d)?, &polynomial_ring(field, &[("y", -1)], d)?)?;
    let bbar = associated_g_algebra(&b, window)?;
    let phi = by_labels(&h, &bbar, |l| l.split_once(':').map_or(l, |(_, b)| b))?;

    let mut out = FixtureBundle::empty("eg2", field, window);
    let dims = h
        .components()
        .keys()
        .map(|&(m, n)| ((m, n), if m == n { 2 } else { 1 }))
        .collect();
    out.expected.dims.insert("H".into(), dims);
    out.expected.obstructions.insert("H".into(), Vec::new());
    out.algebras.insert("A".into(), a);
    out.algebras.insert("B".into(), b);
    out.modules.insert("P".into(), p);
    out.g_algebras.insert("H".into(), h);
    out.g_algebras.insert("Bbar".into(), bbar);
    out.morphisms.insert("phi".into(), Between { source: "H".into(), target: "Bbar".into(), value: phi });
    Ok(out)
}

/// The morphism sending each basis vector of `r` to the basis vector of `s` with
/// the matching (translated) label.
fn by_labels(r: &GAlgebra, s: &GAlgebra, translate: impl Fn(&str) -> &str) -> Result<GAlgebraMorphism> {
    by_labels_with(r, s, |(f, g), j| translate(&r.label(f, g, j)).to_string())
}

/// The matrix ring `A` and `B = k[x,x⁻¹] ⊕ k[x,x⁻¹]` with the matrix-unit
/// isomorphism `B̄ → Ā`, and the twist of `B` it induces.
fn zhang_matrix_pair(field: FieldSpec, window: Window) -> Result<FixtureBundle> {
    let a = matrix_example(field, window)?;
    let l = laurent_ring(field, "x", 1, window)?;
    let b = direct_sum(&l, &l)?;
    let abar = associated_g_algebra(&a, window)?;
    let bbar = associated_g_algebra(&b, window)?;
    let beta = matrix_unit_iso(&bbar, &abar)?;
    let alpha = beta
        .inverse()
        .ok_or_else(|| Error::SingularBlock("matrix-unit map is singular".into()))?;
    let eq = twist_equivalence_from_iso(&abar, &bbar, &alpha)?;

    let mut out = FixtureBundle::empty("zhang-matrix-pair", field, window);
    out.algebras.insert("A".into(), a);
    out.algebras.insert("B".into(), b);
    out.algebras.insert("Btau".into(), eq.twisted);
    out.g_algebras.insert("Abar".into(), abar);
    out.g_algebras.insert("Bbar".into(), bbar);
    out.morphisms.insert("beta".into(), Between { source: "Bbar".into(), target: "Abar".into(), value: beta });
    out.morphisms.insert("alpha".into(), Between { source: "Abar".into(), target: "Bbar".into(), value: alpha });
    out.principal_maps.insert("T".into(), On { on: "Bbar".into(), value: eq.principal });
    out.twists.insert("tau".into(), On { on: "B".into(), value: eq.tau });
    out.graded_maps.insert("iso".into(), Between { source: "A".into(), target: "Btau".into(), value: eq.iso });
    Ok(out)
}

/// `(xⁿ,0) ↦ E_{σ(i)σ(j)}xⁿ` and `(0,xⁿ) ↦ E_{σ'(i)σ'(j)}xⁿ` on `B̄_{i,j}`, `n = j − i`,
/// where `σ(i)` is 1 for even `i` and 2 for odd `i` and `σ'` swaps the two.
fn matrix_unit_iso(bbar: &GAlgebra, abar: &GAlgebra) -> Result<GAlgebraMorphism> {
    let sigma = |i: i64| if i.rem_euclid(2) == 0 { 1 } else { 2 };
    let power = |n: i64| match n {
        0 => String::new(),
        1 => "*x".to_string(),
        _ => format!("*x^{n}"),
    };
    by_labels_with(bbar, abar, |(i, j), k| {
        let (a, b) = if k == 0 { (sigma(i.0), sigma(j.0)) } else { (3 - sigma(i.0), 3 - sigma(j.0)) };
        format!("E{a}{b}{}", power(j.0 - i.0))
    })
}

fn by_labels_with(
    r: &GAlgebra,
    s: &GAlgebra,
    target_label: impl Fn((Elem, Elem), usize) -> String,
) -> Result<GAlgebraMorphism> {
    let f = r.field();
    let mut blocks = BTreeMap::new();
    for (&k, src) in r.components() {
        let tgt = s
            .labels(k.0, k.1)
            .ok_or_else(|| Error::MissingComponent(format!("target component ({},{})", k.0, k.1)))?;
        let mut m = Matrix::zeros(f, tgt.len(), src.len());
        for j in 0..src.len() {
            let t = target_label(k, j);
            let i = tgt
                .iter()
                .position(|x| *x == t)
                .ok_or_else(|| Error::MissingComponent(format!("no basis vector {t} at ({},{})", k.0, k.1)))?;
            m.set(i, j, f.one());
        }
        blocks.insert(k, m);
    }
    Ok(GAlgebraMorphism::new(*f, blocks))
}

/// The scalar used for the q-plane over `field`: 2, or 1 in characteristic 2.
pub fn q_plane_scalar(field: &FieldSpec) -> i64 {
    if *field == FieldSpec::Prime(2) {
        1
    } else {
        2
    }
}

/// `k[x,y]` with `σ(x) = x`, `σ(y) = qy`, the system `τ_n = σⁿ`, its principal map
/// on `Ā` and the twist `A^τ`.
fn q_plane(field: FieldSpec, window: Window) -> Result<FixtureBundle> {
    let a = polynomial_ring(field, &[("x", 1), ("y", 1)], window)?;
    let sigma = monomial_scaling(&a, &[field.one(), field.from_i64(q_plane_scalar(&field))])?;
    let abar = associated_g_algebra(&a, window)?;
    let tau = TwistingSystem::sigma_powers(&a, &sigma, window.difference_window())?;
    let t = gamma(&abar, &tau)?;
    let at = zhang_twist(&a, &tau)?;

    let mut out = FixtureBundle::empty("q-plane", field, window);
    out.graded_maps.insert("sigma".into(), Between { source: "A".into(), target: "A".into(), value: sigma });
    out.algebras.insert("A".into(), a);
    out.algebras.insert("Atau".into(), at);
    out.g_algebras.insert("Abar".into(), abar);
    out.twists.insert("tau".into(), On { on: "A".into(), value: tau });
    out.principal_maps.insert("T".into(), On { on: "Abar".into(), value: t });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: i64, hi: i64) -> Window {
        Window::interval(lo, hi).unwrap()
    }

    #[test]
    fn all_fixtures_build_and_verify() {
        for f in [FieldSpec::Rationals, FieldSpec::Prime(5)] {
            fixture("not-principal", f, w(-3, 3)).unwrap();
            fixture("eg2", f, w(-2, 2)).unwrap();
            fixture("zhang-matrix-pair", f, w(-3, 3)).unwrap();
            fixture("q-plane", f, w(0, 6)).unwrap();
        }
        fixture("q-plane", FieldSpec::Prime(2), w(0, 3)).unwrap();
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(fixture("nope", FieldSpec::Rationals, w(0, 1)), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn not_principal_expectations() {
        let b = fixture("not-principal", FieldSpec::Rationals, w(-3, 3)).unwrap();
        assert_eq!(b.expected.obstructions["H"], vec![((Elem(0), Elem(2)), (Elem(1), Elem(3)))]);
        assert_eq!(b.expected.dims["H"][&(Elem(1), Elem(3))], 0);
    }

    #[test]
    fn verify_catches_a_broken_expectation() {
        let mut b = fixture("eg2", FieldSpec::Prime(5), w(-2, 2)).unwrap();
        b.expected.dims.get_mut("H").unwrap().insert((Elem(0), Elem(0)), 1);
        assert!(matches!(b.verify(), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn zhang_pair_beta_is_not_the_label_identity() {
        let b = fixture("zhang-matrix-pair", FieldSpec::Rationals, w(-3, 3)).unwrap();
        let beta = &b.morphisms["beta"].value;
        // on B̄_{1,1} the first summand goes to E22
        let m = beta.block(Elem(1), Elem(1)).unwrap();
        assert!(b.field.is_one(m.get(1, 0)));
    }
}
