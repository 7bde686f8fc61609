use std::collections::BTreeMap;
use std::fmt;

use super::{GAlgebra, GAlgebraMorphism, Side};
use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, GradingGroup, Matrix, Window};
use crate::graded_algebra::GradedAlgebra;
use crate::verdict::{Tally, Verdict};

/// Blocks of a single `𝒯_g`, keyed by source component `(h, l)`; the block maps
/// `R_{h,l}` to `R_{gh,gl}`.
pub type PrincipalBlocks = BTreeMap<(Elem, Elem), Matrix>;

/// A family `g ↦ 𝒯_g` of degree-`g` maps on a G-algebra, for `g` in `family`.
/// Blocks whose source or target component is absent are simply not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalMap {
    field: FieldSpec,
    group: GradingGroup,
    family: Window,
    maps: BTreeMap<Elem, PrincipalBlocks>,
}

impl PrincipalMap {
    pub fn new(field: FieldSpec, group: GradingGroup, family: Window, maps: BTreeMap<Elem, PrincipalBlocks>) -> Self {
        PrincipalMap { field, group, family, maps }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn family(&self) -> Window {
        self.family
    }

    pub fn maps(&self) -> &BTreeMap<Elem, PrincipalBlocks> {
        &self.maps
    }

    pub fn map(&self, g: Elem) -> Option<&PrincipalBlocks> {
        self.maps.get(&g)
    }

    pub fn block(&self, g: Elem, h: Elem, l: Elem) -> Option<&Matrix> {
        self.maps.get(&g)?.get(&(h, l))
    }

    /// Materializes `𝒯_n = 𝒯_1ⁿ` for every `n` in `family` from the blocks of `𝒯_1`.
    /// A power is stored at `(h, l)` only when every factor of the chain is available.
    pub fn from_generator(r: &GAlgebra, generator: &PrincipalBlocks, family: Window) -> Result<PrincipalMap> {
        if r.group().is_finite() {
            return Err(Error::InvalidBuilder("a generator needs the integer grading".into()));
        }
        let (lo, hi) = match family {
            Window::Interval { lo, hi } => (lo, hi),
            Window::Whole => return Err(Error::InvalidWindow("a generator family must be bounded".into())),
        };
        let f = *r.field();
        for (&(h, l), m) in generator {
            let src = r.dim(h, l);
            let tgt = r.dim(Elem(h.0 + 1), Elem(l.0 + 1));
            if src.is_none() || tgt.is_none() || m.shape() != (tgt.unwrap(), src.unwrap()) {
                return Err(Error::ShapeMismatch(format!("generator block at ({h},{l})")));
            }
        }
        let mut inverse = PrincipalBlocks::new();
        if lo < 0 {
            for (&(h, l), m) in generator {
                let inv = m.inverse(&f).ok_or_else(|| Error::SingularBlock(format!("generator block at ({h},{l})")))?;
                inverse.insert((Elem(h.0 + 1), Elem(l.0 + 1)), inv);
            }
        }
        let mut maps = BTreeMap::new();
        for n in lo..=hi {
            let (step, shift) = if n >= 0 { (generator, 1) } else { (&inverse, -1) };
            let mut blocks = PrincipalBlocks::new();
            for (&(h, l), labels) in r.components() {
                let mut acc = Some(Matrix::identity(&f, labels.len()));
                for k in 0..n.abs() {
                    let at = (Elem(h.0 + shift * k), Elem(l.0 + shift * k));
                    acc = acc.and_then(|a| step.get(&at).map(|m| m.mul(&f, &a)));
                }
                if let Some(a) = acc {
                    if r.is_present(Elem(h.0 + n), Elem(l.0 + n)) {
                        blocks.insert((h, l), a);
                    }
                }
            }
            maps.insert(Elem(n), blocks);
        }
        Ok(PrincipalMap::new(f, GradingGroup::Integers, family, maps))
    }

    /// Transports the family along an isomorphism `α: R → S`: `α 𝒯_g α⁻¹`.
    pub fn conjugate(&self, alpha: &GAlgebraMorphism) -> Result<PrincipalMap> {
        let f = self.field;
        let mut inverses = BTreeMap::new();
        for (&(h, l), m) in alpha.blocks() {
            let inv = m.inverse(&f).ok_or_else(|| Error::SingularBlock(format!("morphism block at ({h},{l})")))?;
            inverses.insert((h, l), inv);
        }
        let mut maps = BTreeMap::new();
        for (&g, blocks) in &self.maps {
            let mut out = PrincipalBlocks::new();
            for (&(h, l), t) in blocks {
                let target = (self.group.op(g, h), self.group.op(g, l));
                if let (Some(a), Some(ai)) = (alpha.block(target.0, target.1), inverses.get(&(h, l))) {
                    out.insert((h, l), a.mul(&f, &t.mul(&f, ai)));
                }
            }
            maps.insert(g, out);
        }
        Ok(PrincipalMap::new(f, self.group.clone(), self.family, maps))
    }
}

/// The canonical family `𝒮` of `Ā`: identity blocks under `Ā_{h,l} = A_{h⁻¹l} = Ā_{gh,gl}`.
pub fn canonical_principal_map(r: &GAlgebra) -> Result<PrincipalMap> {
    match r.origin() {
        Some(a) if a.side == Side::Right => {}
        _ => return Err(Error::NotAssociated),
    }
    let family = r.index().difference_window();
    let f = *r.field();
    let grp = r.group();
    let mut maps = BTreeMap::new();
    for g in family.elements(grp) {
        let mut blocks = PrincipalBlocks::new();
        for (&(h, l), labels) in r.components() {
            if r.is_present(grp.op(g, h), grp.op(g, l)) {
                blocks.insert((h, l), Matrix::identity(&f, labels.len()));
            }
        }
        maps.insert(g, blocks);
    }
    Ok(PrincipalMap::new(f, grp.clone(), family, maps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalWitness {
    Shape { g: Elem, block: (Elem, Elem), detail: String },
    Singular { g: Elem, block: (Elem, Elem) },
    Unit { g: Elem, h: Elem },
    Multiplicativity { g: Elem, indices: (Elem, Elem, Elem), basis: (usize, usize), labels: (String, String) },
    Composition { g: Elem, h: Elem, block: (Elem, Elem) },
}

impl fmt::Display for PrincipalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrincipalWitness::Shape { g, block: (h, l), detail } => write!(f, "T_{g} at ({h},{l}): {detail}"),
            PrincipalWitness::Singular { g, block: (h, l) } => write!(f, "T_{g} is not invertible at ({h},{l})"),
            PrincipalWitness::Unit { g, h } => write!(f, "T_{g} does not send 1_{h} to a local unit"),
            PrincipalWitness::Multiplicativity { g, indices: (h, l, m), labels, .. } => write!(
                f,
                "T_{g} is not multiplicative on ({},{}) in ({h},{l}) x ({l},{m})",
                labels.0, labels.1
            ),
            PrincipalWitness::Composition { g, h, block: (l, m) } => {
                write!(f, "T_{g} T_{h} differs from T_({g}*{h}) at ({l},{m})")
            }
        }
    }
}

/// Checks, on every instance where all blocks exist: shapes, invertibility,
/// `𝒯_g(1_h) = 1_{gh}`, multiplicativity and `𝒯_g 𝒯_h = 𝒯_{gh}`.
pub fn verify_principal_map(r: &GAlgebra, t: &PrincipalMap) -> Verdict<PrincipalWitness> {
    let f = *r.field();
    let grp = r.group();
    let mut tally = Tally::default();
    for (&g, blocks) in t.maps() {
        for (&(h, l), m) in blocks {
            let target = (grp.op(g, h), grp.op(g, l));
            let detail = if !t.family().contains(g) {
                Some("degree outside the family".to_string())
            } else {
                match (r.dim(h, l), r.dim(target.0, target.1)) {
                    (Some(n), Some(k)) if m.shape() == (k, n) => None,
                    (Some(n), Some(k)) => Some(format!("block is {}x{}, expected {k}x{n}", m.rows(), m.cols())),
                    _ => Some("absent component".to_string()),
                }
            };
            if let Some(detail) = detail {
                return Verdict::Fails(PrincipalWitness::Shape { g, block: (h, l), detail });
            }
        }
    }
    for (&g, blocks) in t.maps() {
        for (&(h, l), m) in blocks {
            if m.inverse(&f).is_none() {
                return Verdict::Fails(PrincipalWitness::Singular { g, block: (h, l) });
            }
        }
    }
    for (&g, blocks) in t.maps() {
        for (&(h, l), m) in blocks {
            if h != l {
                continue;
            }
            let gh = grp.op(g, h);
            let (Some(u), Some(v)) = (r.local_unit(h), r.local_unit(gh)) else { continue };
            tally.checked += 1;
            if m.apply(&f, u) != v {
                return Verdict::Fails(PrincipalWitness::Unit { g, h });
            }
        }
    }
    let idx = r.indices();
    for (&g, blocks) in t.maps() {
        for &h in &idx {
            for &l in &idx {
                for &m in &idx {
                    let (gh, gl, gm) = (grp.op(g, h), grp.op(g, l), grp.op(g, m));
                    let parts = (
                        r.structure(h, l, m),
                        r.structure(gh, gl, gm),
                        blocks.get(&(h, l)),
                        blocks.get(&(l, m)),
                        blocks.get(&(h, m)),
                    );
                    let (Some(src), Some(tgt), Some(a), Some(b), Some(c)) = parts else {
                        if r.structure(h, l, m).is_some() {
                            tally.skipped += 1;
                        }
                        continue;
                    };
                    tally.checked += 1;
                    let [n1, n2, _] = src.dims();
                    let images: Vec<_> = (0..n2).map(|j| b.column(j)).collect();
                    for i in 0..n1 {
                        let x = a.column(i);
                        for (j, y) in images.iter().enumerate() {
                            if c.apply(&f, src.fiber(i, j)) != tgt.contract(&f, &x, y) {
                                return Verdict::Fails(PrincipalWitness::Multiplicativity {
                                    g,
                                    indices: (h, l, m),
                                    basis: (i, j),
                                    labels: (r.label(h, l, i), r.label(l, m, j)),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    for (&g, tg) in t.maps() {
        for (&h, th) in t.maps() {
            let gh = grp.op(g, h);
            let tgh = t.map(gh);
            for (&(l, m), b) in th {
                let mid = (grp.op(h, l), grp.op(h, m));
                match (tg.get(&mid), tgh.and_then(|x| x.get(&(l, m)))) {
                    (Some(a), Some(c)) => {
                        tally.checked += 1;
                        if &a.mul(&f, b) != c {
                            return Verdict::Fails(PrincipalWitness::Composition { g, h, block: (l, m) });
                        }
                    }
                    _ => tally.skipped += 1,
                }
            }
        }
    }
    tally.finish()
}

/// The largest interval of `g` around `e` (or the whole finite group) with every
/// `R_{e,g}` present.
fn compression_window(r: &GAlgebra) -> Result<Window> {
    let e = r.group().identity();
    if !r.is_present(e, e) {
        return Err(Error::OutOfWindow("component R_{e,e} is absent".into()));
    }
    match r.index() {
        Window::Whole => {
            if r.indices().iter().all(|g| r.is_present(e, *g)) {
                Ok(Window::Whole)
            } else {
                Err(Error::OutOfWindow("the e-row is incomplete".into()))
            }
        }
        Window::Interval { .. } => {
            let (mut lo, mut hi) = (0, 0);
            while r.is_present(e, Elem(lo - 1)) {
                lo -= 1;
            }
            while r.is_present(e, Elem(hi + 1)) {
                hi += 1;
            }
            Window::degrees(lo, hi)
        }
    }
}

/// `R^𝒯`: degree-`g` part `R_{e,g}` and product `x ∘ y = x · 𝒯_g(y)` for `x ∈ R_{e,g}`.
pub fn compress(r: &GAlgebra, t: &PrincipalMap) -> Result<GradedAlgebra> {
    if let Verdict::Fails(w) = verify_principal_map(r, t) {
        return Err(Error::UnverifiedPrincipalMap(w.to_string()));
    }
    let window = compression_window(r)?;
    let grp = r.group();
    let e = grp.identity();
    let f = *r.field();
    let degrees = window.elements(grp);
    let labels: BTreeMap<Elem, Vec<String>> =
        degrees.iter().map(|g| (*g, r.labels(e, *g).expect("e-row present").to_vec())).collect();
    let mut structure = BTreeMap::new();
    for &g in &degrees {
        for &h in &degrees {
            let gh = grp.op(g, h);
            if !window.contains(gh) {
                continue;
            }
            let tg = t.block(g, e, h).ok_or_else(|| {
                Error::OutOfWindow(format!("T_{} has no block at ({},{})", grp.label(g), grp.label(e), grp.label(h)))
            })?;
            let prod = r
                .structure(e, g, gh)
                .ok_or_else(|| Error::OutOfWindow(format!("product into R_(e,{})", grp.label(gh))))?;
            let [a, _, c] = prod.dims();
            let b = tg.cols();
            let mut out = crate::foundations::Tensor::zeros(&f, a, b, c);
            for j in 0..b {
                let y = tg.column(j);
                for i in 0..a {
                    let mut x = vec![f.zero(); a];
                    x[i] = f.one();
                    out.set_fiber(i, j, &prod.contract(&f, &x, &y));
                }
            }
            structure.insert((g, h), out);
        }
    }
    let unit = r.local_unit(e).expect("R_{e,e} present").to_vec();
    GradedAlgebra::new(f, grp.clone(), window, labels, structure, unit)
}

#[cfg(test)]
mod tests {
    use super::super::associated_g_algebra;
    use super::*;
    use crate::graded_algebra::builders::*;
    use crate::graded_algebra::validate_algebra;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn w(lo: i64, hi: i64) -> Window {
        Window::interval(lo, hi).unwrap()
    }

    fn kx_bar() -> GAlgebra {
        let a = polynomial_ring(q(), &[("x", 1)], w(-4, 4)).unwrap();
        associated_g_algebra(&a, w(0, 4)).unwrap()
    }

    #[test]
    fn canonical_map_is_principal() {
        let r = kx_bar();
        let s = canonical_principal_map(&r).unwrap();
        // S_1 carries x^(j-i) at (i,j) to x^(j-i) at (i+1,j+1)
        assert!(s.block(Elem(1), Elem(0), Elem(2)).unwrap().is_identity(&q()));
        assert!(s.block(Elem(1), Elem(0), Elem(4)).is_none());
        assert!(verify_principal_map(&r, &s).holds());
    }

    #[test]
    fn canonical_needs_right_association() {
        let a = polynomial_ring(q(), &[("x", 1)], w(-2, 2)).unwrap();
        let l = super::super::associated_left_g_algebra(&a, w(0, 2)).unwrap();
        assert_eq!(canonical_principal_map(&l), Err(Error::NotAssociated));
    }

    #[test]
    fn scaled_generator_fails_multiplicativity() {
        let r = kx_bar();
        let s = canonical_principal_map(&r).unwrap();
        let mut gen = s.map(Elem(1)).unwrap().clone();
        gen.insert((Elem(0), Elem(1)), Matrix::diagonal(&q(), &[q().from_i64(2)]));
        let t = PrincipalMap::from_generator(&r, &gen, w(0, 4)).unwrap();
        match verify_principal_map(&r, &t) {
            Verdict::Fails(PrincipalWitness::Multiplicativity { g, .. }) => assert_eq!(g, Elem(1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generator_powers_match_canonical() {
        let r = kx_bar();
        let s = canonical_principal_map(&r).unwrap();
        let t = PrincipalMap::from_generator(&r, s.map(Elem(1)).unwrap(), s.family()).unwrap();
        assert_eq!(t, s);
    }

    #[test]
    fn compress_canonical_recovers_algebra() {
        let a = polynomial_ring(q(), &[("x", 1)], w(0, 4)).unwrap();
        let r = associated_g_algebra(&a, w(0, 4)).unwrap();
        let s = canonical_principal_map(&r).unwrap();
        let c = compress(&r, &s).unwrap();
        assert_eq!(c, a);
        let x = polynomial_ring(q(), &[("x", 1)], w(0, 3)).unwrap();
        let y = polynomial_ring(q(), &[("y", 1)], w(0, 3)).unwrap();
        let d = direct_sum(&x, &y).unwrap();
        let rd = associated_g_algebra(&d, w(0, 3)).unwrap();
        assert_eq!(compress(&rd, &canonical_principal_map(&rd).unwrap()).unwrap(), d);
    }

    #[test]
    fn compress_rejects_unverified_maps() {
        let r = kx_bar();
        let s = canonical_principal_map(&r).unwrap();
        let mut gen = s.map(Elem(1)).unwrap().clone();
        gen.insert((Elem(0), Elem(1)), Matrix::diagonal(&q(), &[q().from_i64(2)]));
        let t = PrincipalMap::from_generator(&r, &gen, w(-4, 4)).unwrap();
        assert!(matches!(compress(&r, &t), Err(Error::UnverifiedPrincipalMap(_))));
    }

    #[test]
    fn q_scaling_family_compresses_to_skew_plane() {
        let f = FieldSpec::Prime(7);
        let a = polynomial_ring(f, &[("x", 1), ("y", 1)], w(0, 4)).unwrap();
        let r = associated_g_algebra(&a, w(0, 4)).unwrap();
        let sigma = monomial_scaling(&a, &[f.one(), f.from_i64(3)]).unwrap();
        // T_g acts on every component by σ^g
        let s = canonical_principal_map(&r).unwrap();
        let mut maps = BTreeMap::new();
        for (&g, blocks) in s.maps() {
            let pow = sigma.power(g.0).unwrap();
            let b = blocks.keys().map(|&(h, l)| ((h, l), pow.block(Elem(l.0 - h.0)).unwrap().clone())).collect();
            maps.insert(g, b);
        }
        let t = PrincipalMap::new(f, GradingGroup::Integers, s.family(), maps);
        assert!(verify_principal_map(&r, &t).holds());
        let c = compress(&r, &t).unwrap();
        assert!(validate_algebra(&c).is_valid());
        // x ∘ y = x σ(y) = 3xy and y ∘ x = yx
        let x = c.basis_element(Elem(1), c.basis_index(Elem(1), "x").unwrap());
        let y = c.basis_element(Elem(1), c.basis_index(Elem(1), "y").unwrap());
        let xy = c.multiply(&x, &y).unwrap();
        let yx = c.multiply(&y, &x).unwrap();
        let three_yx: Vec<_> = yx.coords.iter().map(|v| f.mul(&f.from_i64(3), v)).collect();
        assert_eq!(xy.coords, three_yx);
    }
}
