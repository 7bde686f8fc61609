use std::collections::BTreeMap;
use std::fmt;

use super::GAlgebra;
use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, Matrix, Scalar, Window};
use crate::verdict::{Tally, Verdict};

/// A degree-preserving map of G-algebras, one block per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAlgebraMorphism {
    field: FieldSpec,
    blocks: BTreeMap<(Elem, Elem), Matrix>,
}

impl GAlgebraMorphism {
    pub fn new(field: FieldSpec, blocks: BTreeMap<(Elem, Elem), Matrix>) -> Self {
        GAlgebraMorphism { field, blocks }
    }

    pub fn identity(r: &GAlgebra) -> Self {
        let blocks = r
            .components()
            .iter()
            .map(|(k, l)| (*k, Matrix::identity(r.field(), l.len())))
            .collect();
        GAlgebraMorphism::new(*r.field(), blocks)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn block(&self, f: Elem, g: Elem) -> Option<&Matrix> {
        self.blocks.get(&(f, g))
    }

    pub fn blocks(&self) -> &BTreeMap<(Elem, Elem), Matrix> {
        &self.blocks
    }

    pub fn apply(&self, (f, g): (Elem, Elem), x: &[Scalar]) -> Result<Vec<Scalar>> {
        let m = self
            .block(f, g)
            .ok_or_else(|| Error::OutOfWindow(format!("no morphism block at ({f},{g})")))?;
        if m.cols() != x.len() {
            return Err(Error::DimensionMismatch { expected: m.cols(), found: x.len() });
        }
        Ok(m.apply(&self.field, x))
    }

    pub fn inverse(&self) -> Option<GAlgebraMorphism> {
        let mut blocks = BTreeMap::new();
        for (k, m) in &self.blocks {
            blocks.insert(*k, m.inverse(&self.field)?);
        }
        Some(GAlgebraMorphism::new(self.field, blocks))
    }

    /// `self ∘ other` on the components where both are defined.
    pub fn compose(&self, other: &GAlgebraMorphism) -> Result<GAlgebraMorphism> {
        let mut blocks = BTreeMap::new();
        for (k, b) in &other.blocks {
            if let Some(a) = self.blocks.get(k) {
                if a.cols() != b.rows() {
                    return Err(Error::ShapeMismatch(format!("cannot compose at ({},{})", k.0, k.1)));
                }
                blocks.insert(*k, a.mul(&self.field, b));
            }
        }
        Ok(GAlgebraMorphism::new(self.field, blocks))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoWitness {
    Singular { block: (Elem, Elem) },
    Unit { f: Elem },
    Multiplicativity { left: (Elem, Elem), right: (Elem, Elem), basis: (usize, usize), labels: (String, String) },
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoWitness::Singular { block: (a, b) } => write!(f, "singular block at ({a},{b})"),
            IsoWitness::Unit { f: u } => write!(f, "1_{u} is not preserved"),
            IsoWitness::Multiplicativity { left: (a, b), right: (c, d), .. } => write!(f, "(({a},{b}),({c},{d}))"),
        }
    }
}

fn shape_check(r: &GAlgebra, s: &GAlgebra, phi: &GAlgebraMorphism) -> Result<()> {
    if r.field() != s.field() || r.group() != s.group() || r.index() != s.index() {
        return Err(Error::ShapeMismatch("G-algebras differ in field, group or index window".into()));
    }
    for (&(f, g), labels) in r.components() {
        let target = s
            .dim(f, g)
            .ok_or_else(|| Error::ShapeMismatch(format!("component ({f},{g}) is absent in the target")))?;
        let m = phi
            .block(f, g)
            .ok_or_else(|| Error::ShapeMismatch(format!("no morphism block at ({f},{g})")))?;
        if m.shape() != (target, labels.len()) {
            return Err(Error::ShapeMismatch(format!(
                "block at ({f},{g}) is {}x{}, expected {target}x{}",
                m.rows(),
                m.cols(),
                labels.len()
            )));
        }
    }
    if let Some((f, g)) = s.components().keys().find(|k| !r.components().contains_key(k)) {
        return Err(Error::ShapeMismatch(format!("component ({f},{g}) is absent in the source")));
    }
    Ok(())
}

/// Certifies `φ: R → S` as an isomorphism of G-algebras on the window: every
/// block invertible, local units preserved and multiplicativity on every
/// composable pair of present components.
pub fn check_g_algebra_iso(r: &GAlgebra, s: &GAlgebra, phi: &GAlgebraMorphism) -> Result<Verdict<IsoWitness>> {
    shape_check(r, s, phi)?;
    let fs = *r.field();
    for (&k, m) in phi.blocks() {
        if r.components().contains_key(&k) && m.inverse(&fs).is_none() {
            return Ok(Verdict::Fails(IsoWitness::Singular { block: k }));
        }
    }
    let mut tally = Tally::default();
    for (&f, u) in r.local_units() {
        tally.checked += 1;
        let img = phi.apply((f, f), u)?;
        if Some(img.as_slice()) != s.local_unit(f) {
            return Ok(Verdict::Fails(IsoWitness::Unit { f }));
        }
    }
    for (&(f, g, h), t) in r.structure_tensors() {
        let tt = s.structure(f, g, h).expect("same components");
        let (a, b, c) = (
            phi.block(f, g).expect("shape checked"),
            phi.block(g, h).expect("shape checked"),
            phi.block(f, h).expect("shape checked"),
        );
        tally.checked += 1;
        let [n1, n2, _] = t.dims();
        let images: Vec<_> = (0..n2).map(|j| b.column(j)).collect();
        for i in 0..n1 {
            let x = a.column(i);
            for (j, y) in images.iter().enumerate() {
                if c.apply(&fs, t.fiber(i, j)) != tt.contract(&fs, &x, y) {
                    return Ok(Verdict::Fails(IsoWitness::Multiplicativity {
                        left: (f, g),
                        right: (g, h),
                        basis: (i, j),
                        labels: (r.label(f, g, i), r.label(g, h, j)),
                    }));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// A pair of components that any degree-`g` automorphism would have to identify
/// but whose dimensions differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionEntry {
    pub g: Elem,
    pub source: (Elem, Elem),
    pub target: (Elem, Elem),
    pub dims: (usize, usize),
}

impl fmt::Display for ObstructionEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((a, b), (c, d)) = (self.source, self.target);
        write!(f, "g={} (({a},{b}),({c},{d})) dims {} vs {}", self.g, self.dims.0, self.dims.1)
    }
}

/// Every on-window dimension mismatch `dim R_{h,l} ≠ dim R_{gh,gl}`. The report
/// only speaks about the window: a nonempty report rules out principal maps whose
/// `𝒯_g` would need to be defined on the witnessed components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObstructionReport {
    pub entries: Vec<ObstructionEntry>,
}

impl ObstructionReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, source: (Elem, Elem), target: (Elem, Elem)) -> bool {
        self.entries.iter().any(|e| e.source == source && e.target == target)
    }

    pub fn for_element(&self, g: Elem) -> impl Iterator<Item = &ObstructionEntry> {
        self.entries.iter().filter(move |e| e.g == g)
    }
}

/// Group elements other than `e` that relate two indices of the window, ordered
/// by size with positive integers first.
fn shift_elements(r: &GAlgebra) -> Vec<Elem> {
    let grp = r.group();
    match r.index() {
        Window::Interval { lo, hi } => (1..=hi - lo).flat_map(|d| [Elem(d), Elem(-d)]).collect(),
        Window::Whole => r.indices().into_iter().filter(|g| *g != grp.identity()).collect(),
    }
}

pub fn principal_dimension_obstruction(r: &GAlgebra) -> ObstructionReport {
    let grp = r.group();
    let mut entries = Vec::new();
    for g in shift_elements(r) {
        for (&(h, l), labels) in r.components() {
            let target = (grp.op(g, h), grp.op(g, l));
            if let Some(d) = r.dim(target.0, target.1) {
                if d != labels.len() {
                    entries.push(ObstructionEntry { g, source: (h, l), target, dims: (labels.len(), d) });
                }
            }
        }
    }
    ObstructionReport { entries }
}
