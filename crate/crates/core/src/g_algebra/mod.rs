//! G-algebras on finite index windows.
//!
//! A component `R_{f,g}` is either present (with a basis, possibly empty) or
//! absent because the data needed to describe it lies outside the window.

pub mod morphism;
pub mod principal;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, GradingGroup, Scalar, Tensor, Window};
use crate::graded_algebra::{GradedAlgebra, ValidationReport};

pub use morphism::{
    check_g_algebra_iso, principal_dimension_obstruction, GAlgebraMorphism, IsoWitness, ObstructionEntry,
    ObstructionReport,
};
pub use principal::{canonical_principal_map, compress, verify_principal_map, PrincipalMap, PrincipalWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `R_{f,g} = A_{f⁻¹g}`.
    Right,
    /// `R_{f,g} = A_{fg⁻¹}`.
    Left,
}

/// Records that a G-algebra was built from a graded algebra, with the identification of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Association {
    pub side: Side,
    pub base: GradedAlgebra,
}

impl Association {
    /// The degree of the base algebra identified with `R_{f,g}`.
    pub fn degree(&self, f: Elem, g: Elem) -> Elem {
        let grp = self.base.group();
        match self.side {
            Side::Right => grp.left_quotient(f, g),
            Side::Left => grp.right_quotient(f, g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAlgebra {
    field: FieldSpec,
    group: GradingGroup,
    index: Window,
    components: BTreeMap<(Elem, Elem), Vec<String>>,
    structure: BTreeMap<(Elem, Elem, Elem), Tensor>,
    local_units: BTreeMap<Elem, Vec<Scalar>>,
    origin: Option<Association>,
}

impl GAlgebra {
    /// Assembles a G-algebra. Missing tensors between present components are zero;
    /// every present diagonal component needs a local unit.
    pub fn new(
        field: FieldSpec,
        group: GradingGroup,
        index: Window,
        components: BTreeMap<(Elem, Elem), Vec<String>>,
        mut structure: BTreeMap<(Elem, Elem, Elem), Tensor>,
        local_units: BTreeMap<Elem, Vec<Scalar>>,
    ) -> Result<Self> {
        if !index.fits(&group) {
            return Err(Error::InvalidWindow(format!("index window {index} does not fit the group")));
        }
        let elems = index.elements(&group);
        if elems.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if let Some((f, g)) = components.keys().find(|(f, g)| !index.contains(*f) || !index.contains(*g)) {
            return Err(Error::OutOfWindow(format!("component ({},{})", group.label(*f), group.label(*g))));
        }
        if let Some(&(f, g, h)) = structure.keys().find(|(f, g, h)| {
            !(components.contains_key(&(*f, *g)) && components.contains_key(&(*g, *h)) && components.contains_key(&(*f, *h)))
        }) {
            return Err(Error::OutOfWindow(format!(
                "product block ({},{},{}) touches an absent component",
                group.label(f),
                group.label(g),
                group.label(h)
            )));
        }
        for &f in &elems {
            for &g in &elems {
                let Some(a) = components.get(&(f, g)) else { continue };
                for &h in &elems {
                    let (Some(b), Some(c)) = (components.get(&(g, h)), components.get(&(f, h))) else { continue };
                    let want = [a.len(), b.len(), c.len()];
                    match structure.get(&(f, g, h)) {
                        Some(t) if t.dims() != want => {
                            return Err(Error::ShapeMismatch(format!(
                                "product block ({},{},{}) has shape {:?}, expected {:?}",
                                group.label(f),
                                group.label(g),
                                group.label(h),
                                t.dims(),
                                want
                            )))
                        }
                        Some(_) => {}
                        None => {
                            structure.insert((f, g, h), Tensor::zeros(&field, want[0], want[1], want[2]));
                        }
                    }
                }
            }
        }
        for (&(f, g), labels) in &components {
            if f != g {
                continue;
            }
            let u = local_units
                .get(&f)
                .ok_or_else(|| Error::MissingComponent(format!("local unit 1_{}", group.label(f))))?;
            if u.len() != labels.len() {
                return Err(Error::DimensionMismatch { expected: labels.len(), found: u.len() });
            }
        }
        if let Some(f) = local_units.keys().find(|f| !components.contains_key(&(**f, **f))) {
            return Err(Error::OutOfWindow(format!("local unit 1_{} without a component", group.label(*f))));
        }
        Ok(GAlgebra { field, group, index, components, structure, local_units, origin: None })
    }

    pub fn with_origin(mut self, origin: Association) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn index(&self) -> Window {
        self.index
    }

    pub fn indices(&self) -> Vec<Elem> {
        self.index.elements(&self.group)
    }

    pub fn origin(&self) -> Option<&Association> {
        self.origin.as_ref()
    }

    pub fn is_present(&self, f: Elem, g: Elem) -> bool {
        self.components.contains_key(&(f, g))
    }

    /// `None` when the component is absent.
    pub fn dim(&self, f: Elem, g: Elem) -> Option<usize> {
        self.components.get(&(f, g)).map(Vec::len)
    }

    pub fn labels(&self, f: Elem, g: Elem) -> Option<&[String]> {
        self.components.get(&(f, g)).map(Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<(Elem, Elem), Vec<String>> {
        &self.components
    }

    pub fn structure(&self, f: Elem, g: Elem, h: Elem) -> Option<&Tensor> {
        self.structure.get(&(f, g, h))
    }

    pub fn structure_tensors(&self) -> &BTreeMap<(Elem, Elem, Elem), Tensor> {
        &self.structure
    }

    pub fn local_unit(&self, f: Elem) -> Option<&[Scalar]> {
        self.local_units.get(&f).map(Vec::as_slice)
    }

    pub fn local_units(&self) -> &BTreeMap<Elem, Vec<Scalar>> {
        &self.local_units
    }

    pub fn label(&self, f: Elem, g: Elem, i: usize) -> String {
        self.labels(f, g)
            .and_then(|l| l.get(i))
            .cloned()
            .unwrap_or_else(|| format!("#{i}"))
    }

    /// Product of `x ∈ R_{f,g}` and `y ∈ R_{g,h}`.
    pub fn multiply(&self, (f, g, h): (Elem, Elem, Elem), x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let t = self.structure(f, g, h).ok_or_else(|| {
            Error::OutOfWindow(format!(
                "product R_{{{},{}}} R_{{{},{}}}",
                self.group.label(f),
                self.group.label(g),
                self.group.label(g),
                self.group.label(h)
            ))
        })?;
        let [a, b, _] = t.dims();
        if x.len() != a {
            return Err(Error::DimensionMismatch { expected: a, found: x.len() });
        }
        if y.len() != b {
            return Err(Error::DimensionMismatch { expected: b, found: y.len() });
        }
        Ok(t.contract(&self.field, x, y))
    }

    /// Column indices `g` with `R_{f,g}` present.
    pub fn row(&self, f: Elem) -> Vec<Elem> {
        self.indices().into_iter().filter(|g| self.is_present(f, *g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GViolation {
    Associativity { indices: [Elem; 4], basis: [usize; 3] },
    LeftUnit { component: (Elem, Elem), index: usize },
    RightUnit { component: (Elem, Elem), index: usize },
}

impl fmt::Display for GViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GViolation::Associativity { indices: [a, b, c, d], basis } => write!(
                f,
                "associativity fails on R_({a},{b}) x R_({b},{c}) x R_({c},{d}) at basis {basis:?}"
            ),
            GViolation::LeftUnit { component: (a, b), index } => {
                write!(f, "1_{a} is not a left identity on basis {index} of R_({a},{b})")
            }
            GViolation::RightUnit { component: (a, b), index } => {
                write!(f, "1_{b} is not a right identity on basis {index} of R_({a},{b})")
            }
        }
    }
}

/// Associativity on every present composable quadruple and the local unit laws.
pub fn validate_g_algebra(r: &GAlgebra) -> ValidationReport<GViolation> {
    let fs = *r.field();
    let idx = r.indices();
    let mut violations = Vec::new();
    let (mut checked, mut skipped) = (0, 0);
    let basis = |n: usize, i: usize| -> Vec<Scalar> {
        let mut v = vec![fs.zero(); n];
        v[i] = fs.one();
        v
    };
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                for &d in &idx {
                    let keys = [(a, b, c), (a, c, d), (b, c, d), (a, b, d)];
                    let ts: Vec<_> = keys.iter().map(|(x, y, z)| r.structure(*x, *y, *z)).collect();
                    let (Some(t_abc), Some(t_acd), Some(t_bcd), Some(t_abd)) = (ts[0], ts[1], ts[2], ts[3]) else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    let [n1, n2, _] = t_abc.dims();
                    let n3 = t_bcd.dims()[1];
                    for i in 0..n1 {
                        let x = basis(n1, i);
                        for j in 0..n2 {
                            for k in 0..n3 {
                                let z = basis(n3, k);
                                let lhs = t_acd.contract(&fs, t_abc.fiber(i, j), &z);
                                let rhs = t_abd.contract(&fs, &x, t_bcd.fiber(j, k));
                                if lhs != rhs {
                                    violations.push(GViolation::Associativity { indices: [a, b, c, d], basis: [i, j, k] });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for (&(f, g), labels) in r.components() {
        let n = labels.len();
        let left = r.structure(f, f, g).zip(r.local_unit(f));
        let right = r.structure(f, g, g).zip(r.local_unit(g));
        for i in 0..n {
            let x = basis(n, i);
            if let Some((t, u)) = left {
                if t.contract(&fs, u, &x) != x {
                    violations.push(GViolation::LeftUnit { component: (f, g), index: i });
                }
            }
            if let Some((t, u)) = right {
                if t.contract(&fs, &x, u) != x {
                    violations.push(GViolation::RightUnit { component: (f, g), index: i });
                }
            }
        }
    }
    ValidationReport { violations, checked, skipped }
}

fn associated(a: &GradedAlgebra, index: Window, side: Side) -> Result<GAlgebra> {
    let group = a.group().clone();
    if !index.fits(&group) {
        return Err(Error::InvalidWindow(format!("index window {index} does not fit the group")));
    }
    let elems = index.elements(&group);
    if elems.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let assoc = Association { side, base: a.clone() };
    let mut components = BTreeMap::new();
    for &f in &elems {
        for &g in &elems {
            let d = assoc.degree(f, g);
            if let Some(l) = a.labels(d) {
                components.insert((f, g), l.to_vec());
            }
        }
    }
    let mut structure = BTreeMap::new();
    for &f in &elems {
        for &g in &elems {
            if !components.contains_key(&(f, g)) {
                continue;
            }
            for &h in &elems {
                if components.contains_key(&(g, h)) && components.contains_key(&(f, h)) {
                    let t = a
                        .structure(assoc.degree(f, g), assoc.degree(g, h))
                        .ok_or_else(|| Error::Inconsistent("product of present components missing".into()))?;
                    structure.insert((f, g, h), t.clone());
                }
            }
        }
    }
    let local_units = elems.iter().map(|f| (*f, a.unit().to_vec())).collect();
    Ok(GAlgebra::new(*a.field(), group, index, components, structure, local_units)?.with_origin(assoc))
}

/// `Ā` with `Ā_{f,g} = A_{f⁻¹g}` on the index window; components whose degree
/// leaves the degree window of `A` are absent.
pub fn associated_g_algebra(a: &GradedAlgebra, index: Window) -> Result<GAlgebra> {
    associated(a, index, Side::Right)
}

/// `Â` with `Â_{f,g} = A_{fg⁻¹}`.
pub fn associated_left_g_algebra(a: &GradedAlgebra, index: Window) -> Result<GAlgebra> {
    associated(a, index, Side::Left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::FiniteGroup;
    use crate::graded_algebra::builders::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn w(lo: i64, hi: i64) -> Window {
        Window::interval(lo, hi).unwrap()
    }

    #[test]
    fn polynomial_ring_dims() {
        let a = polynomial_ring(q(), &[("x", 1)], w(-3, 3)).unwrap();
        let r = associated_g_algebra(&a, w(0, 3)).unwrap();
        let l = associated_left_g_algebra(&a, w(0, 3)).unwrap();
        for i in 0..=3 {
            for j in 0..=3 {
                assert_eq!(r.dim(Elem(i), Elem(j)), Some(usize::from(j >= i)));
                assert_eq!(l.dim(Elem(i), Elem(j)), Some(usize::from(i >= j)));
            }
        }
        assert!(validate_g_algebra(&r).is_valid());
        assert!(validate_g_algebra(&l).is_valid());
    }

    #[test]
    fn narrow_degree_window_marks_components_absent() {
        let a = polynomial_ring(q(), &[("x", 1)], w(0, 3)).unwrap();
        let r = associated_g_algebra(&a, w(0, 3)).unwrap();
        assert_eq!(r.dim(Elem(2), Elem(1)), None);
        assert_eq!(r.dim(Elem(0), Elem(3)), Some(1));
        let far = associated_g_algebra(&a, w(0, 5)).unwrap();
        assert!(!far.is_present(Elem(0), Elem(5)));
    }

    #[test]
    fn direct_sum_dims() {
        let x = polynomial_ring(q(), &[("x", 1)], w(0, 2)).unwrap();
        let y = polynomial_ring(q(), &[("y", 1)], w(0, 2)).unwrap();
        let a = direct_sum(&x, &y).unwrap();
        let r = associated_g_algebra(&a, w(0, 2)).unwrap();
        for i in 0..=2 {
            for j in i..=2 {
                assert_eq!(r.dim(Elem(i), Elem(j)), Some(2));
            }
        }
        assert!(validate_g_algebra(&r).is_valid());
    }

    #[test]
    fn matrix_example_dims() {
        let a = matrix_example(q(), w(-2, 2)).unwrap();
        let r = associated_g_algebra(&a, w(-1, 1)).unwrap();
        assert!(r.components().values().all(|l| l.len() == 2));
        assert_eq!(r.components().len(), 9);
    }

    #[test]
    fn left_and_right_agree_for_abelian_groups() {
        let a = polynomial_ring(q(), &[("x", 1), ("y", 2)], w(-4, 4)).unwrap();
        let r = associated_g_algebra(&a, w(-2, 2)).unwrap();
        let l = associated_left_g_algebra(&a, w(-2, 2)).unwrap();
        for (&(f, g), _) in r.components() {
            assert_eq!(l.dim(g, f), r.dim(f, g));
        }
    }

    #[test]
    fn group_algebra_over_c2() {
        let a = group_algebra(q(), FiniteGroup::cyclic(2)).unwrap();
        let r = associated_g_algebra(&a, Window::Whole).unwrap();
        let l = associated_left_g_algebra(&a, Window::Whole).unwrap();
        assert_eq!(r.components().len(), 4);
        assert!(r.components().values().chain(l.components().values()).all(|c| c.len() == 1));
        assert!(validate_g_algebra(&r).is_valid());
    }

    #[test]
    fn left_associated_over_nonabelian_group_is_valid() {
        let a = group_algebra(q(), FiniteGroup::symmetric3()).unwrap();
        assert!(validate_g_algebra(&associated_left_g_algebra(&a, Window::Whole).unwrap()).is_valid());
        assert!(validate_g_algebra(&associated_g_algebra(&a, Window::Whole).unwrap()).is_valid());
    }

    #[test]
    fn broken_local_unit_is_reported() {
        let a = polynomial_ring(q(), &[("x", 1)], w(0, 2)).unwrap();
        let r = associated_g_algebra(&a, w(0, 1)).unwrap();
        let mut units = r.local_units().clone();
        units.insert(Elem(1), vec![q().from_i64(2)]);
        let bad = GAlgebra::new(
            q(),
            GradingGroup::Integers,
            r.index(),
            r.components().clone(),
            r.structure_tensors().clone(),
            units,
        )
        .unwrap();
        let report = validate_g_algebra(&bad);
        assert!(report.violations.iter().any(|v| matches!(v, GViolation::LeftUnit { component: (Elem(1), _), .. })));
    }

    #[test]
    fn multiply_checks_presence() {
        let a = polynomial_ring(q(), &[("x", 1)], w(0, 2)).unwrap();
        let r = associated_g_algebra(&a, w(0, 2)).unwrap();
        let one = [q().one()];
        let p = r.multiply((Elem(0), Elem(1), Elem(2)), &one, &one).unwrap();
        assert_eq!(p, vec![q().one()]);
        assert!(matches!(r.multiply((Elem(2), Elem(1), Elem(0)), &one, &one), Err(Error::OutOfWindow(_))));
    }
}
