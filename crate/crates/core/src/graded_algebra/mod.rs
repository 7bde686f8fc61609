//! Group-graded algebras presented by per-degree bases and structure constants.

pub mod builders;
pub mod linear_map;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, GradingGroup, Matrix, Scalar, Tensor, Window};

pub use linear_map::{check_algebra_automorphism, check_graded_iso, GradedLinearMap, MapWitness};

/// A `G`-graded `k`-algebra truncated to a degree window.
///
/// Every degree in the window has an entry in `labels` (possibly empty), and
/// `structure` holds a tensor for every pair `(g, h)` with `g`, `h` and `gh`
/// in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: FieldSpec,
    group: GradingGroup,
    window: Window,
    labels: BTreeMap<Elem, Vec<String>>,
    structure: BTreeMap<(Elem, Elem), Tensor>,
    unit: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousElement {
    pub degree: Elem,
    pub coords: Vec<Scalar>,
}

impl HomogeneousElement {
    pub fn new(degree: Elem, coords: Vec<Scalar>) -> Self {
        HomogeneousElement { degree, coords }
    }
}

impl GradedAlgebra {
    /// Assembles an algebra from its data. Missing structure tensors are zero.
    /// Shapes are checked here; the algebra axioms are checked by [`validate_algebra`].
    pub fn new(
        field: FieldSpec,
        group: GradingGroup,
        window: Window,
        labels: BTreeMap<Elem, Vec<String>>,
        mut structure: BTreeMap<(Elem, Elem), Tensor>,
        unit: Vec<Scalar>,
    ) -> Result<Self> {
        if !window.fits(&group) {
            return Err(Error::InvalidWindow(format!("window {window} does not fit the group")));
        }
        let e = group.identity();
        if !window.contains(e) {
            return Err(Error::InvalidWindow(format!("degree window {window} must contain 0")));
        }
        let degrees = window.elements(&group);
        for g in &degrees {
            if !labels.contains_key(g) {
                return Err(Error::MissingComponent(format!("degree {}", group.label(*g))));
            }
        }
        if let Some(g) = labels.keys().find(|g| !window.contains(**g)) {
            return Err(Error::OutOfWindow(format!("degree {} has a basis", group.label(*g))));
        }
        if let Some(&(g, h)) = structure.keys().find(|(g, h)| {
            !(window.contains(*g) && window.contains(*h) && window.contains(group.op(*g, *h)))
        }) {
            return Err(Error::OutOfWindow(format!(
                "product block ({},{})",
                group.label(g),
                group.label(h)
            )));
        }
        for &g in &degrees {
            for &h in &degrees {
                let gh = group.op(g, h);
                if !window.contains(gh) {
                    continue;
                }
                let want = [labels[&g].len(), labels[&h].len(), labels[&gh].len()];
                match structure.get(&(g, h)) {
                    Some(t) if t.dims() != want => {
                        return Err(Error::ShapeMismatch(format!(
                            "product block ({},{}) has shape {:?}, expected {:?}",
                            group.label(g),
                            group.label(h),
                            t.dims(),
                            want
                        )))
                    }
                    Some(_) => {}
                    None => {
                        structure.insert((g, h), Tensor::zeros(&field, want[0], want[1], want[2]));
                    }
                }
            }
        }
        if unit.len() != labels[&e].len() {
            return Err(Error::DimensionMismatch { expected: labels[&e].len(), found: unit.len() });
        }
        if let Some(bad) = unit.iter().chain(structure.values().flat_map(|t| {
            t.nonzero_entries(&field).map(|(_, _, _, v)| v).collect::<Vec<_>>()
        }).collect::<Vec<_>>()).find(|v| !field.belongs(v)) {
            return Err(Error::InvalidScalar(format!("{bad:?} is not in {field}")));
        }
        Ok(GradedAlgebra { field, group, window, labels, structure, unit })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn degrees(&self) -> Vec<Elem> {
        self.window.elements(&self.group)
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.window.contains(g)
    }

    pub fn dim(&self, g: Elem) -> Option<usize> {
        self.labels.get(&g).map(Vec::len)
    }

    pub fn dims(&self) -> BTreeMap<Elem, usize> {
        self.labels.iter().map(|(g, l)| (*g, l.len())).collect()
    }

    pub fn labels(&self, g: Elem) -> Option<&[String]> {
        self.labels.get(&g).map(Vec::as_slice)
    }

    pub fn all_labels(&self) -> &BTreeMap<Elem, Vec<String>> {
        &self.labels
    }

    pub fn structure(&self, g: Elem, h: Elem) -> Option<&Tensor> {
        self.structure.get(&(g, h))
    }

    pub fn structure_tensors(&self) -> &BTreeMap<(Elem, Elem), Tensor> {
        &self.structure
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn unit_element(&self) -> HomogeneousElement {
        HomogeneousElement::new(self.group.identity(), self.unit.clone())
    }

    /// The `i`-th basis vector of degree `g`.
    pub fn basis_element(&self, g: Elem, i: usize) -> HomogeneousElement {
        let n = self.dim(g).expect("degree in window");
        let mut coords = vec![self.field.zero(); n];
        coords[i] = self.field.one();
        HomogeneousElement::new(g, coords)
    }

    /// Basis vector index of a label in degree `g`.
    pub fn basis_index(&self, g: Elem, label: &str) -> Option<usize> {
        self.labels.get(&g)?.iter().position(|l| l == label)
    }

    pub fn label(&self, g: Elem, i: usize) -> String {
        self.labels
            .get(&g)
            .and_then(|l| l.get(i))
            .cloned()
            .unwrap_or_else(|| format!("#{i}"))
    }

    fn check_element(&self, x: &HomogeneousElement) -> Result<()> {
        let n = self.dim(x.degree).ok_or_else(|| {
            Error::OutOfWindow(format!("degree {}", self.group.label(x.degree)))
        })?;
        if x.coords.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.coords.len() });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &HomogeneousElement, y: &HomogeneousElement) -> Result<HomogeneousElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let d = self.group.op(x.degree, y.degree);
        let t = self.structure(x.degree, y.degree).ok_or_else(|| {
            Error::OutOfWindow(format!(
                "product degree {} of {} and {}",
                self.group.label(d),
                self.group.label(x.degree),
                self.group.label(y.degree)
            ))
        })?;
        Ok(HomogeneousElement::new(d, t.contract(&self.field, &x.coords, &y.coords)))
    }

    /// Left multiplication by `x`, as a matrix `A_h -> A_{gh}`.
    pub fn left_multiplication(&self, x: &HomogeneousElement, h: Elem) -> Result<Matrix> {
        self.check_element(x)?;
        let t = self.structure(x.degree, h).ok_or_else(|| {
            Error::OutOfWindow(format!("product with degree {}", self.group.label(h)))
        })?;
        let cols = t.left_products(&self.field, &x.coords);
        Ok(Matrix::from_columns(&self.field, t.dims()[2], &cols))
    }

    /// Right multiplication by `y`, as a matrix `A_g -> A_{g deg(y)}`.
    pub fn right_multiplication(&self, y: &HomogeneousElement, g: Elem) -> Result<Matrix> {
        self.check_element(y)?;
        let t = self.structure(g, y.degree).ok_or_else(|| {
            Error::OutOfWindow(format!("product with degree {}", self.group.label(g)))
        })?;
        let [a, _, c] = t.dims();
        let f = &self.field;
        let cols: Vec<Vec<Scalar>> = (0..a)
            .map(|i| {
                let mut e = vec![f.zero(); a];
                e[i] = f.one();
                t.contract(f, &e, &y.coords)
            })
            .collect();
        Ok(Matrix::from_columns(f, c, &cols))
    }

    /// The same algebra on a smaller degree window.
    pub fn restrict(&self, window: Window) -> Result<GradedAlgebra> {
        if self.window.intersect(&window) != Some(window) {
            return Err(Error::OutOfWindow(format!(
                "window {window} is not inside {}",
                self.window
            )));
        }
        let labels = self
            .labels
            .iter()
            .filter(|(g, _)| window.contains(**g))
            .map(|(g, l)| (*g, l.clone()))
            .collect();
        let structure = self
            .structure
            .iter()
            .filter(|((g, h), _)| {
                window.contains(*g) && window.contains(*h) && window.contains(self.group.op(*g, *h))
            })
            .map(|(k, t)| (*k, t.clone()))
            .collect();
        GradedAlgebra::new(self.field, self.group.clone(), window, labels, structure, self.unit.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    Associativity { degrees: [Elem; 3], basis: [usize; 3], labels: [String; 3] },
    LeftUnit { degree: Elem, index: usize, label: String },
    RightUnit { degree: Elem, index: usize, label: String },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Associativity { degrees, labels, .. } => write!(
                f,
                "associativity fails on ({},{},{}) in degrees ({},{},{})",
                labels[0], labels[1], labels[2], degrees[0], degrees[1], degrees[2]
            ),
            AlgebraViolation::LeftUnit { degree, label, .. } => {
                write!(f, "unit is not a left identity on {label} (degree {degree})")
            }
            AlgebraViolation::RightUnit { degree, label, .. } => {
                write!(f, "unit is not a right identity on {label} (degree {degree})")
            }
        }
    }
}

/// Every failed axiom instance, in canonical order, plus counts of checked and
/// skipped degree triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<V> {
    pub violations: Vec<V>,
    pub checked: usize,
    pub skipped: usize,
}

impl<V> ValidationReport<V> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks associativity on every degree triple whose partial and full products
/// stay in the window, and the two-sided unit law on every basis vector.
pub fn validate_algebra(a: &GradedAlgebra) -> ValidationReport<AlgebraViolation> {
    let f = a.field();
    let grp = a.group();
    let degrees = a.degrees();
    let mut violations = Vec::new();
    let (mut checked, mut skipped) = (0, 0);
    for &g in &degrees {
        for &h in &degrees {
            for &l in &degrees {
                let gh = grp.op(g, h);
                let hl = grp.op(h, l);
                let ghl = grp.op(gh, l);
                if !(a.contains(gh) && a.contains(hl) && a.contains(ghl)) {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let t_gh = a.structure(g, h).expect("in window");
                let t_ghl = a.structure(gh, l).expect("in window");
                let t_hl = a.structure(h, l).expect("in window");
                let t_ghl2 = a.structure(g, hl).expect("in window");
                let [dg, dh, _] = t_gh.dims();
                let dl = t_hl.dims()[1];
                for i in 0..dg {
                    for j in 0..dh {
                        let xy = t_gh.fiber(i, j);
                        for k in 0..dl {
                            let mut z = vec![f.zero(); dl];
                            z[k] = f.one();
                            let lhs = t_ghl.contract(f, xy, &z);
                            let mut x = vec![f.zero(); dg];
                            x[i] = f.one();
                            let rhs = t_ghl2.contract(f, &x, t_hl.fiber(j, k));
                            if lhs != rhs {
                                violations.push(AlgebraViolation::Associativity {
                                    degrees: [g, h, l],
                                    basis: [i, j, k],
                                    labels: [a.label(g, i), a.label(h, j), a.label(l, k)],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let e = grp.identity();
    let unit = a.unit();
    for &g in &degrees {
        let n = a.dim(g).unwrap_or(0);
        let left = a.structure(e, g).expect("in window");
        let right = a.structure(g, e).expect("in window");
        for i in 0..n {
            let mut x = vec![f.zero(); n];
            x[i] = f.one();
            if left.contract(f, unit, &x) != x {
                violations.push(AlgebraViolation::LeftUnit { degree: g, index: i, label: a.label(g, i) });
            }
            if right.contract(f, &x, unit) != x {
                violations.push(AlgebraViolation::RightUnit { degree: g, index: i, label: a.label(g, i) });
            }
        }
    }
    ValidationReport { violations, checked, skipped }
}
