//! Twisting systems, Zhang twists and the correspondence with principal maps of `Ā`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::foundations::{Elem, GradingGroup, Matrix, Tensor, Window};
use crate::g_algebra::{
    canonical_principal_map, check_g_algebra_iso, compress, verify_principal_map, GAlgebra, GAlgebraMorphism,
    PrincipalMap, Side,
};
use crate::graded_algebra::{check_graded_iso, GradedAlgebra, GradedLinearMap};
use crate::verdict::{Tally, Verdict};

/// A family `g ↦ τ_g` of degree-preserving linear maps of a graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingSystem {
    family: Window,
    maps: BTreeMap<Elem, GradedLinearMap>,
}

impl TwistingSystem {
    pub fn new(family: Window, maps: BTreeMap<Elem, GradedLinearMap>) -> Self {
        TwistingSystem { family, maps }
    }

    pub fn identity(a: &GradedAlgebra, family: Window) -> Self {
        let id = GradedLinearMap::identity(a);
        TwistingSystem::new(family, family.elements(a.group()).into_iter().map(|g| (g, id.clone())).collect())
    }

    /// `τ_n = σⁿ` for an integer-graded algebra and `n` in `family`.
    pub fn sigma_powers(a: &GradedAlgebra, sigma: &GradedLinearMap, family: Window) -> Result<Self> {
        if a.group().is_finite() {
            return Err(Error::InvalidBuilder("sigma powers need the integer grading".into()));
        }
        if sigma.shift() != a.group().identity() {
            return Err(Error::ShapeMismatch("sigma must be degree-preserving".into()));
        }
        let mut maps = BTreeMap::new();
        for g in family.elements(a.group()) {
            let p = sigma
                .power(g.0)
                .ok_or_else(|| Error::SingularBlock(format!("sigma is not invertible, needed for power {g}")))?;
            maps.insert(g, p);
        }
        Ok(TwistingSystem::new(family, maps))
    }

    pub fn family(&self) -> Window {
        self.family
    }

    pub fn maps(&self) -> &BTreeMap<Elem, GradedLinearMap> {
        &self.maps
    }

    pub fn map(&self, g: Elem) -> Option<&GradedLinearMap> {
        self.maps.get(&g)
    }

    pub fn block(&self, g: Elem, d: Elem) -> Option<&Matrix> {
        self.maps.get(&g)?.block(d)
    }

    /// A copy with the block of `τ_g` at degree `d` replaced.
    pub fn with_block(&self, g: Elem, d: Elem, m: Matrix) -> Result<Self> {
        let t = self.maps.get(&g).ok_or_else(|| Error::MissingComponent(format!("tau_{g}")))?;
        let mut blocks = t.blocks().clone();
        blocks.insert(d, m);
        let mut maps = self.maps.clone();
        maps.insert(g, GradedLinearMap::new(*t.field(), t.group().clone(), t.shift(), blocks));
        Ok(TwistingSystem::new(self.family, maps))
    }

    /// Whether every block of `self` is also a block of `other`, with the same family.
    /// Systems read off a window only carry the blocks the window can see.
    pub fn agrees_with(&self, other: &TwistingSystem) -> bool {
        self.family == other.family
            && self.maps.iter().all(|(g, t)| {
                t.blocks().iter().all(|(d, m)| other.block(*g, *d) == Some(m))
            })
    }

    /// Number of stored blocks over all members.
    pub fn block_count(&self) -> usize {
        self.maps.values().map(|t| t.blocks().len()).sum()
    }

    /// Whether `τ_e` is the identity on every degree where it has a block.
    pub fn is_normalized(&self, group: &GradingGroup) -> bool {
        self.maps
            .get(&group.identity())
            .is_some_and(|t| t.blocks().values().all(|m| m.is_identity(t.field())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistWitness {
    Singular { g: Elem, degree: Elem },
    /// `τ_g(y τ_h(z)) ≠ τ_g(y) τ_{gh}(z)`.
    Equation { g: Elem, y: (Elem, usize), z: (Elem, usize), labels: (String, String) },
    /// `τ_h⁻¹(ab) ≠ τ_h⁻¹(a) τ_m τ_{hm}⁻¹(b)` for `a` of degree `m`.
    InverseRelation { h: Elem, a: (Elem, usize), b: (Elem, usize), labels: (String, String) },
}

impl fmt::Display for TwistWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistWitness::Singular { g, degree } => write!(f, "tau_{g} is singular in degree {degree}"),
            TwistWitness::Equation { g, labels, .. } => write!(f, "({g}, {}, {})", labels.0, labels.1),
            TwistWitness::InverseRelation { h, labels, .. } => write!(f, "({h}, {}, {})", labels.0, labels.1),
        }
    }
}

fn check_shapes(a: &GradedAlgebra, tau: &TwistingSystem) -> Result<()> {
    for g in tau.family().elements(a.group()) {
        let t = tau.map(g).ok_or_else(|| Error::MissingComponent(format!("tau_{}", a.group().label(g))))?;
        if t.shift() != a.group().identity() {
            return Err(Error::ShapeMismatch(format!("tau_{g} is not degree-preserving")));
        }
        for (d, m) in t.blocks() {
            let n = a
                .dim(*d)
                .ok_or_else(|| Error::OutOfWindow(format!("tau_{g} has a block at degree {d}")))?;
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!("tau_{g} at degree {d} is {}x{}", m.rows(), m.cols())));
            }
        }
    }
    if let Some(g) = tau.maps().keys().find(|g| !tau.family().contains(**g)) {
        return Err(Error::OutOfWindow(format!("tau_{g} lies outside the family")));
    }
    Ok(())
}

fn singular_witness(a: &GradedAlgebra, tau: &TwistingSystem) -> Option<TwistWitness> {
    let f = a.field();
    tau.maps().iter().find_map(|(g, t)| {
        t.blocks()
            .iter()
            .find(|(_, m)| m.inverse(f).is_none())
            .map(|(d, _)| TwistWitness::Singular { g: *g, degree: *d })
    })
}

/// Checks `τ_g(y τ_h(z)) = τ_g(y) τ_{gh}(z)` for basis vectors `y ∈ A_h`, `z ∈ A_l`,
/// for every `g` in the family. Instances needing a `τ` outside the family, a
/// missing block or a degree outside the window are skipped.
pub fn verify_twisting_system(a: &GradedAlgebra, tau: &TwistingSystem) -> Result<Verdict<TwistWitness>> {
    check_shapes(a, tau)?;
    if let Some(w) = singular_witness(a, tau) {
        return Ok(Verdict::Fails(w));
    }
    let f = *a.field();
    let grp = a.group();
    let degrees = a.degrees();
    let mut tally = Tally::default();
    for (&g, tg) in tau.maps() {
        for &h in &degrees {
            for &l in &degrees {
                let hl = grp.op(h, l);
                let gh = grp.op(g, h);
                let parts = (
                    tau.block(h, l),
                    tau.block(gh, l),
                    tg.block(h),
                    tg.block(hl),
                    a.structure(h, l),
                );
                let (Some(th), Some(tgh), Some(tg_h), Some(tg_hl), Some(t)) = parts else {
                    tally.skipped += 1;
                    continue;
                };
                tally.checked += 1;
                let [nh, nl, _] = t.dims();
                for j in 0..nl {
                    let th_z = th.column(j);
                    let tgh_z = tgh.column(j);
                    for i in 0..nh {
                        let mut y = vec![f.zero(); nh];
                        y[i] = f.one();
                        let lhs = tg_hl.apply(&f, &t.contract(&f, &y, &th_z));
                        let rhs = t.contract(&f, &tg_h.column(i), &tgh_z);
                        if lhs != rhs {
                            return Ok(Verdict::Fails(TwistWitness::Equation {
                                g,
                                y: (h, i),
                                z: (l, j),
                                labels: (a.label(h, i), a.label(l, j)),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Evaluates the twisting identity on one instance; `None` when it is off-window.
pub fn twist_identity_holds(
    a: &GradedAlgebra,
    tau: &TwistingSystem,
    g: Elem,
    (h, i): (Elem, usize),
    (l, j): (Elem, usize),
) -> Option<bool> {
    let y = a.basis_element(h, i);
    let z = a.basis_element(l, j);
    let gh = a.group().op(g, h);
    let tg = tau.map(g)?;
    let lhs = tg.apply(&a.multiply(&y, &tau.map(h)?.apply(&z).ok()?).ok()?).ok()?;
    let rhs = a.multiply(&tg.apply(&y).ok()?, &tau.map(gh)?.apply(&z).ok()?).ok()?;
    Some(lhs == rhs)
}

fn require_verified(a: &GradedAlgebra, tau: &TwistingSystem) -> Result<()> {
    match verify_twisting_system(a, tau) {
        Ok(Verdict::Holds { .. }) => Ok(()),
        Ok(Verdict::Fails(w)) => Err(Error::UnverifiedTwistingSystem(w.to_string())),
        Err(e) => Err(Error::UnverifiedTwistingSystem(e.to_string())),
    }
}

/// The Zhang twist `A^τ`: same graded space, product `x ⋆ y = x τ_g(y)` for `x ∈ A_g`.
/// Its unit is `τ_e⁻¹(1)`, which is `1` for a normalized system.
pub fn zhang_twist(a: &GradedAlgebra, tau: &TwistingSystem) -> Result<GradedAlgebra> {
    require_verified(a, tau)?;
    let f = *a.field();
    let mut structure = BTreeMap::new();
    for (&(g, h), t) in a.structure_tensors() {
        let tg = tau
            .block(g, h)
            .ok_or_else(|| Error::OutOfWindow(format!("tau_{} has no block at degree {}", a.group().label(g), a.group().label(h))))?;
        let [n1, n2, n3] = t.dims();
        let mut out = Tensor::zeros(&f, n1, n2, n3);
        for j in 0..n2 {
            let y = tg.column(j);
            for i in 0..n1 {
                let mut x = vec![f.zero(); n1];
                x[i] = f.one();
                out.set_fiber(i, j, &t.contract(&f, &x, &y));
            }
        }
        structure.insert((g, h), out);
    }
    let e = a.group().identity();
    let te = tau
        .block(e, e)
        .ok_or_else(|| Error::OutOfWindow("tau_e has no block in degree e".into()))?;
    let unit = te
        .solve(&f, a.unit())
        .ok_or_else(|| Error::SingularBlock("tau_e in degree e".into()))?;
    GradedAlgebra::new(f, a.group().clone(), a.window(), a.all_labels().clone(), structure, unit)
}

fn base_of(rbar: &GAlgebra) -> Result<&GradedAlgebra> {
    match rbar.origin() {
        Some(o) if o.side == Side::Right => Ok(&o.base),
        _ => Err(Error::NotAssociated),
    }
}

/// `Δ(𝒯)_g = 𝒮_g⁻¹ 𝒯_g` read off on the `e` row: the block of `τ_g` at degree
/// `d` is the block of `𝒯_g` at `(e, d)`.
pub fn delta(rbar: &GAlgebra, t: &PrincipalMap) -> Result<TwistingSystem> {
    let a = base_of(rbar)?;
    if let Verdict::Fails(w) = verify_principal_map(rbar, t) {
        return Err(Error::UnverifiedPrincipalMap(w.to_string()));
    }
    let grp = a.group();
    let e = grp.identity();
    let mut maps = BTreeMap::new();
    for g in t.family().elements(grp) {
        let blocks: BTreeMap<Elem, Matrix> = a
            .degrees()
            .into_iter()
            .filter_map(|d| t.block(g, e, d).map(|m| (d, m.clone())))
            .collect();
        maps.insert(g, GradedLinearMap::new(*a.field(), grp.clone(), e, blocks));
    }
    Ok(TwistingSystem::new(t.family(), maps))
}

/// `Γ(τ)_g` on `Ā_{h,l}` acts by `𝒮_{gh} τ_{gh} τ_h⁻¹ 𝒮_h⁻¹`, that is by the block
/// `τ_{gh} τ_h⁻¹` in degree `h⁻¹l`. Requires a normalized, verified system.
pub fn gamma(rbar: &GAlgebra, tau: &TwistingSystem) -> Result<PrincipalMap> {
    let a = base_of(rbar)?;
    require_verified(a, tau)?;
    let grp = a.group();
    if !tau.is_normalized(grp) {
        return Err(Error::UnnormalizedTwistingSystem("tau_e is not the identity".into()));
    }
    let f = *a.field();
    let mut inverses: BTreeMap<(Elem, Elem), Matrix> = BTreeMap::new();
    for (&h, th) in tau.maps() {
        for (&d, m) in th.blocks() {
            let inv = m
                .inverse(&f)
                .ok_or_else(|| Error::SingularBlock(format!("tau_{h} in degree {d}")))?;
            inverses.insert((h, d), inv);
        }
    }
    let mut maps = BTreeMap::new();
    for g in tau.family().elements(grp) {
        let mut blocks = BTreeMap::new();
        for &(h, l) in rbar.components().keys() {
            let (gh, gl) = (grp.op(g, h), grp.op(g, l));
            if !rbar.is_present(gh, gl) {
                continue;
            }
            let d = grp.left_quotient(h, l);
            if let (Some(tgh), Some(thi)) = (tau.block(gh, d), inverses.get(&(h, d))) {
                blocks.insert((h, l), tgh.mul(&f, thi));
            }
        }
        maps.insert(g, blocks);
    }
    Ok(PrincipalMap::new(f, grp.clone(), tau.family(), maps))
}

/// Checks `τ_h⁻¹(ab) = τ_h⁻¹(a) τ_m τ_{hm}⁻¹(b)` for basis `a ∈ A_m`, `b ∈ A_l`.
pub fn check_inverse_twist_relation(a: &GradedAlgebra, tau: &TwistingSystem) -> Result<Verdict<TwistWitness>> {
    check_shapes(a, tau)?;
    let f = *a.field();
    let grp = a.group();
    let mut inverses: BTreeMap<(Elem, Elem), Matrix> = BTreeMap::new();
    for (&h, th) in tau.maps() {
        for (&d, m) in th.blocks() {
            let inv = m
                .inverse(&f)
                .ok_or_else(|| Error::SingularBlock(format!("tau_{h} in degree {d}")))?;
            inverses.insert((h, d), inv);
        }
    }
    let degrees = a.degrees();
    let mut tally = Tally::default();
    for &h in tau.maps().keys() {
        for &m in &degrees {
            let hm = grp.op(h, m);
            for &l in &degrees {
                let ml = grp.op(m, l);
                let parts = (
                    inverses.get(&(h, ml)),
                    inverses.get(&(h, m)),
                    inverses.get(&(hm, l)),
                    tau.block(m, l),
                    a.structure(m, l),
                );
                let (Some(hinv_ml), Some(hinv_m), Some(hminv_l), Some(tm_l), Some(t)) = parts else {
                    tally.skipped += 1;
                    continue;
                };
                tally.checked += 1;
                let mixed = tm_l.mul(&f, hminv_l);
                let [nm, nl, _] = t.dims();
                for j in 0..nl {
                    let b_img = mixed.column(j);
                    for i in 0..nm {
                        let lhs = hinv_ml.apply(&f, t.fiber(i, j));
                        let rhs = t.contract(&f, &hinv_m.column(i), &b_img);
                        if lhs != rhs {
                            return Ok(Verdict::Fails(TwistWitness::InverseRelation {
                                h,
                                a: (m, i),
                                b: (l, j),
                                labels: (a.label(m, i), a.label(l, j)),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Output of [`twist_equivalence_from_iso`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistEquivalence {
    /// `α 𝒮 α⁻¹`, a principal map of `B̄`.
    pub principal: PrincipalMap,
    /// `Δ(α 𝒮 α⁻¹)`, a twisting system on `B`.
    pub tau: TwistingSystem,
    /// `B^τ` on the degrees where the construction is defined.
    pub twisted: GradedAlgebra,
    /// The degree-preserving isomorphism `A → B^τ`, given by `α` on the `e` row.
    pub iso: GradedLinearMap,
}

/// From a certified isomorphism `α: Ā → B̄`, builds the principal map `α𝒮α⁻¹`
/// of `B̄`, the twisting system `τ` it induces on `B`, the twist `B^τ` and the
/// isomorphism `A → B^τ`, re-certifying the last one exhaustively on-window.
pub fn twist_equivalence_from_iso(abar: &GAlgebra, bbar: &GAlgebra, alpha: &GAlgebraMorphism) -> Result<TwistEquivalence> {
    let a = base_of(abar)?;
    let b = base_of(bbar)?;
    match check_g_algebra_iso(abar, bbar, alpha) {
        Ok(Verdict::Holds { .. }) => {}
        Ok(Verdict::Fails(w)) => return Err(Error::UncertifiedIso(w.to_string())),
        Err(e) => return Err(Error::UncertifiedIso(e.to_string())),
    }
    let principal = canonical_principal_map(abar)?.conjugate(alpha)?;
    if let Verdict::Fails(w) = verify_principal_map(bbar, &principal) {
        return Err(Error::Inconsistent(format!("transported map is not principal: {w}")));
    }
    let tau = delta(bbar, &principal)?;
    let compressed = compress(bbar, &principal)?;
    let window = compressed.window();
    let b_w = b.restrict(window)?;
    let tau_w = TwistingSystem::new(
        tau.family(),
        tau.maps().iter().map(|(g, t)| (*g, t.restrict(window))).collect(),
    );
    let twisted = zhang_twist(&b_w, &tau_w)?;
    if twisted.structure_tensors() != compressed.structure_tensors() {
        return Err(Error::Inconsistent("twist and compression disagree".into()));
    }
    let e = a.group().identity();
    let a_w = a.restrict(window)?;
    let blocks = window
        .elements(a.group())
        .into_iter()
        .map(|g| {
            alpha
                .block(e, g)
                .cloned()
                .map(|m| (g, m))
                .ok_or_else(|| Error::MissingComponent(format!("alpha at (e,{g})")))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let iso = GradedLinearMap::new(*a.field(), a.group().clone(), e, blocks);
    if let Verdict::Fails(w) = check_graded_iso(&a_w, &twisted, &iso) {
        return Err(Error::UncertifiedIso(format!("A -> B^tau fails at {w}")));
    }
    Ok(TwistEquivalence { principal, tau: tau_w, twisted, iso })
}

/// Blocks of `σ^h` on `Ā(A^τ)_{(h,l)}`, giving the isomorphism `Ā(A^τ) → Ā(A)` for `τ_n = σⁿ`.
pub fn sigma_twist_iso(twisted_bar: &GAlgebra, sigma: &GradedLinearMap) -> Result<GAlgebraMorphism> {
    let grp = twisted_bar.group();
    let mut blocks = BTreeMap::new();
    for &(h, l) in twisted_bar.components().keys() {
        let p = sigma
            .power(h.0)
            .ok_or_else(|| Error::SingularBlock("sigma is not invertible".into()))?;
        let d = grp.left_quotient(h, l);
        let m = p
            .block(d)
            .ok_or_else(|| Error::MissingComponent(format!("sigma at degree {d}")))?;
        blocks.insert((h, l), m.clone());
    }
    Ok(GAlgebraMorphism::new(*sigma.field(), blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::FieldSpec;
    use crate::g_algebra::associated_g_algebra;
    use crate::graded_algebra::builders::*;
    use crate::graded_algebra::validate_algebra;

    fn w(lo: i64, hi: i64) -> Window {
        Window::interval(lo, hi).unwrap()
    }

    fn plane(f: FieldSpec, q: i64, hi: i64) -> (GradedAlgebra, GradedLinearMap) {
        let a = polynomial_ring(f, &[("x", 1), ("y", 1)], w(0, hi)).unwrap();
        let s = monomial_scaling(&a, &[f.one(), f.from_i64(q)]).unwrap();
        (a, s)
    }

    #[test]
    fn identity_system_verifies() {
        let a = polynomial_ring(FieldSpec::Rationals, &[("x", 1)], w(0, 4)).unwrap();
        let tau = TwistingSystem::identity(&a, w(-4, 4));
        assert!(verify_twisting_system(&a, &tau).unwrap().holds());
        assert!(check_inverse_twist_relation(&a, &tau).unwrap().holds());
        assert_eq!(zhang_twist(&a, &tau).unwrap(), a);
    }

    #[test]
    fn sigma_powers_verify_and_twist_skews() {
        let f = FieldSpec::Prime(7);
        let (a, s) = plane(f, 3, 4);
        let tau = TwistingSystem::sigma_powers(&a, &s, w(-4, 4)).unwrap();
        assert!(verify_twisting_system(&a, &tau).unwrap().holds());
        assert!(check_inverse_twist_relation(&a, &tau).unwrap().holds());
        let t = zhang_twist(&a, &tau).unwrap();
        assert!(validate_algebra(&t).is_valid());
        let x = t.basis_element(Elem(1), t.basis_index(Elem(1), "x").unwrap());
        let y = t.basis_element(Elem(1), t.basis_index(Elem(1), "y").unwrap());
        // x ⋆ y = x τ_1(y) = 3xy while y ⋆ x = yx
        let xy = t.multiply(&x, &y).unwrap();
        let yx = t.multiply(&y, &x).unwrap();
        let scaled: Vec<_> = yx.coords.iter().map(|c| f.mul(&f.from_i64(3), c)).collect();
        assert_eq!(xy.coords, scaled);
    }

    #[test]
    fn constant_scaling_family_fails() {
        let f = FieldSpec::Rationals;
        let a = polynomial_ring(f, &[("x", 1)], w(0, 4)).unwrap();
        let tau1 = GradedLinearMap::diagonal(&a, |g, _| if g == Elem(1) { f.from_i64(2) } else { f.one() });
        let family = w(-4, 4);
        let tau = TwistingSystem::new(family, family.elements(a.group()).into_iter().map(|g| (g, tau1.clone())).collect());
        assert!(!verify_twisting_system(&a, &tau).unwrap().holds());
        // τ_1(x τ_1(x)) = 2x² but τ_1(x) τ_2(x) = 4x²
        assert_eq!(twist_identity_holds(&a, &tau, Elem(1), (Elem(1), 0), (Elem(1), 0)), Some(false));
        assert!(!check_inverse_twist_relation(&a, &tau).unwrap().holds());
    }

    #[test]
    fn missing_member_is_an_error() {
        let a = polynomial_ring(FieldSpec::Rationals, &[("x", 1)], w(0, 2)).unwrap();
        let mut tau = TwistingSystem::identity(&a, w(-2, 2));
        tau.maps.remove(&Elem(1));
        assert!(matches!(verify_twisting_system(&a, &tau), Err(Error::MissingComponent(_))));
    }

    #[test]
    fn delta_gamma_roundtrip_for_sigma_powers() {
        for f in [FieldSpec::Rationals, FieldSpec::Prime(5)] {
            let (a, s) = plane(f, 2, 4);
            let rbar = associated_g_algebra(&a, w(0, 4)).unwrap();
            let family = rbar.index().difference_window();
            let tau = TwistingSystem::sigma_powers(&a, &s, family).unwrap();
            let t = gamma(&rbar, &tau).unwrap();
            assert!(verify_principal_map(&rbar, &t).holds());
            let back = delta(&rbar, &t).unwrap();
            assert!(back.agrees_with(&tau));
            // τ_g in degree d is visible whenever g and g + d are indices
            assert_eq!(back.block_count(), 15);
            assert_eq!(gamma(&rbar, &delta(&rbar, &t).unwrap()).unwrap(), t);
            assert_eq!(compress(&rbar, &t).unwrap(), zhang_twist(&a, &tau).unwrap());
        }
    }

    #[test]
    fn delta_of_canonical_is_identity() {
        let a = polynomial_ring(FieldSpec::Rationals, &[("x", 1)], w(0, 3)).unwrap();
        let rbar = associated_g_algebra(&a, w(0, 3)).unwrap();
        let s = canonical_principal_map(&rbar).unwrap();
        let tau = delta(&rbar, &s).unwrap();
        assert!(tau.agrees_with(&TwistingSystem::identity(&a, s.family())));
        assert_eq!(gamma(&rbar, &tau).unwrap(), s);
    }

    #[test]
    fn gamma_rejects_unnormalized_systems() {
        let f = FieldSpec::Rationals;
        let a = polynomial_ring(f, &[("x", 1)], w(0, 3)).unwrap();
        let rbar = associated_g_algebra(&a, w(0, 3)).unwrap();
        let two = GradedLinearMap::diagonal(&a, |_, _| f.from_i64(2));
        let family = w(-3, 3);
        // τ_g = 2·id satisfies the twisting identity only up to normalization
        let tau = TwistingSystem::new(family, family.elements(a.group()).into_iter().map(|g| (g, two.clone())).collect());
        let v = verify_twisting_system(&a, &tau).unwrap();
        if v.holds() {
            assert!(matches!(gamma(&rbar, &tau), Err(Error::UnnormalizedTwistingSystem(_))));
        }
    }

    #[test]
    fn conjugated_q_scaling_recovers_sigma_powers() {
        let f = FieldSpec::Prime(5);
        let (a, s) = plane(f, 2, 4);
        let family = w(-4, 4);
        let tau = TwistingSystem::sigma_powers(&a, &s, family).unwrap();
        let at = zhang_twist(&a, &tau).unwrap();
        let atbar = associated_g_algebra(&at, w(0, 4)).unwrap();
        let abar = associated_g_algebra(&a, w(0, 4)).unwrap();
        let alpha = sigma_twist_iso(&atbar, &s).unwrap();
        assert!(check_g_algebra_iso(&atbar, &abar, &alpha).unwrap().holds());
        let out = twist_equivalence_from_iso(&atbar, &abar, &alpha).unwrap();
        assert!(out.tau.agrees_with(&tau));
        assert_eq!(out.twisted, at);
    }

    #[test]
    fn identity_iso_gives_identity_twist() {
        let f = FieldSpec::Rationals;
        let a = laurent_ring(f, "x", 1, w(-3, 3)).unwrap();
        let abar = associated_g_algebra(&a, w(-3, 3)).unwrap();
        let out = twist_equivalence_from_iso(&abar, &abar, &GAlgebraMorphism::identity(&abar)).unwrap();
        assert!(out.tau.agrees_with(&TwistingSystem::identity(&a, w(-6, 6))));
        assert_eq!(out.iso, GradedLinearMap::identity(&a));
        assert_eq!(out.twisted, a);
    }
}
