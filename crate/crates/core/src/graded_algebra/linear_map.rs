use std::collections::BTreeMap;
use std::fmt;

use super::{GradedAlgebra, HomogeneousElement};
use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, GradingGroup, Matrix, Scalar, Window};
use crate::verdict::{Tally, Verdict};

/// A graded `k`-linear map of left degree `shift`: the block at `g` sends the
/// source component of degree `g` to the target component of degree `shift * g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    field: FieldSpec,
    group: GradingGroup,
    shift: Elem,
    blocks: BTreeMap<Elem, Matrix>,
}

impl GradedLinearMap {
    pub fn new(field: FieldSpec, group: GradingGroup, shift: Elem, blocks: BTreeMap<Elem, Matrix>) -> Self {
        GradedLinearMap { field, group, shift, blocks }
    }

    pub fn identity(a: &GradedAlgebra) -> Self {
        let blocks = a
            .dims()
            .into_iter()
            .map(|(g, n)| (g, Matrix::identity(a.field(), n)))
            .collect();
        GradedLinearMap::new(*a.field(), a.group().clone(), a.group().identity(), blocks)
    }

    /// A degree-preserving map given by a diagonal scaling of every basis vector.
    pub fn diagonal(a: &GradedAlgebra, mut scale: impl FnMut(Elem, usize) -> Scalar) -> Self {
        let blocks = a
            .dims()
            .into_iter()
            .map(|(g, n)| {
                let d: Vec<Scalar> = (0..n).map(|i| scale(g, i)).collect();
                (g, Matrix::diagonal(a.field(), &d))
            })
            .collect();
        GradedLinearMap::new(*a.field(), a.group().clone(), a.group().identity(), blocks)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn shift(&self) -> Elem {
        self.shift
    }

    pub fn block(&self, g: Elem) -> Option<&Matrix> {
        self.blocks.get(&g)
    }

    pub fn blocks(&self) -> &BTreeMap<Elem, Matrix> {
        &self.blocks
    }

    pub fn apply(&self, x: &HomogeneousElement) -> Result<HomogeneousElement> {
        let m = self.blocks.get(&x.degree).ok_or_else(|| {
            Error::OutOfWindow(format!("no block at degree {}", self.group.label(x.degree)))
        })?;
        if m.cols() != x.coords.len() {
            return Err(Error::DimensionMismatch { expected: m.cols(), found: x.coords.len() });
        }
        Ok(HomogeneousElement::new(self.group.op(self.shift, x.degree), m.apply(&self.field, &x.coords)))
    }

    /// `self ∘ other`, defined on the degrees where both blocks exist.
    pub fn compose(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        let mut blocks = BTreeMap::new();
        for (g, b) in &other.blocks {
            let mid = self.group.op(other.shift, *g);
            if let Some(a) = self.blocks.get(&mid) {
                if a.cols() != b.rows() {
                    return Err(Error::ShapeMismatch(format!(
                        "cannot compose at degree {}",
                        self.group.label(*g)
                    )));
                }
                blocks.insert(*g, a.mul(&self.field, b));
            }
        }
        Ok(GradedLinearMap::new(self.field, self.group.clone(), self.group.op(self.shift, other.shift), blocks))
    }

    /// The blockwise inverse, of left degree `shift⁻¹`. `None` if some block is singular.
    pub fn inverse(&self) -> Option<GradedLinearMap> {
        let mut blocks = BTreeMap::new();
        for (g, m) in &self.blocks {
            blocks.insert(self.group.op(self.shift, *g), m.inverse(&self.field)?);
        }
        Some(GradedLinearMap::new(self.field, self.group.clone(), self.group.inv(self.shift), blocks))
    }

    /// First source degree whose block is not invertible.
    pub fn singular_degree(&self) -> Option<Elem> {
        self.blocks
            .iter()
            .find(|(_, m)| m.inverse(&self.field).is_none())
            .map(|(g, _)| *g)
    }

    /// Keeps the blocks whose source and target degrees are in `window`.
    pub fn restrict(&self, window: Window) -> GradedLinearMap {
        let blocks = self
            .blocks
            .iter()
            .filter(|(g, _)| window.contains(**g) && window.contains(self.group.op(self.shift, **g)))
            .map(|(g, m)| (*g, m.clone()))
            .collect();
        GradedLinearMap::new(self.field, self.group.clone(), self.shift, blocks)
    }

    /// `self^n` for a degree-preserving map; negative powers use the inverse.
    pub fn power(&self, n: i64) -> Option<GradedLinearMap> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = GradedLinearMap::new(
            self.field,
            self.group.clone(),
            self.group.identity(),
            base.blocks
                .iter()
                .map(|(g, m)| (*g, Matrix::identity(&self.field, m.cols())))
                .collect(),
        );
        for _ in 0..n.unsigned_abs() {
            acc = base.compose(&acc).ok()?;
        }
        Some(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapWitness {
    Shape { degree: Elem, detail: String },
    Unit,
    Multiplicativity { degrees: (Elem, Elem), basis: (usize, usize), labels: (String, String) },
    Singular { degree: Elem },
}

impl fmt::Display for MapWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapWitness::Shape { degree, detail } => write!(f, "shape at degree {degree}: {detail}"),
            MapWitness::Unit => write!(f, "unit is not preserved"),
            MapWitness::Multiplicativity { labels, .. } => write!(f, "({},{})", labels.0, labels.1),
            MapWitness::Singular { degree } => write!(f, "singular block at degree {degree}"),
        }
    }
}

fn shape_witness(src: &GradedAlgebra, tgt: &GradedAlgebra, phi: &GradedLinearMap) -> Option<MapWitness> {
    let e = src.group().identity();
    if phi.shift() != e {
        return Some(MapWitness::Shape { degree: phi.shift(), detail: "map is not degree-preserving".into() });
    }
    for g in src.degrees() {
        let (Some(n), Some(m)) = (src.dim(g), tgt.dim(g)) else {
            return Some(MapWitness::Shape { degree: g, detail: "degree missing from target".into() });
        };
        match phi.block(g) {
            None => return Some(MapWitness::Shape { degree: g, detail: "missing block".into() }),
            Some(b) if b.shape() != (m, n) => {
                return Some(MapWitness::Shape {
                    degree: g,
                    detail: format!("block is {}x{}, expected {m}x{n}", b.rows(), b.cols()),
                })
            }
            Some(_) => {}
        }
    }
    None
}

/// Whether `φ(xy) = φ(x)φ(y)` for the basis vectors `x = e^g_i`, `y = e^h_j`.
pub fn multiplicative_on(
    src: &GradedAlgebra,
    tgt: &GradedAlgebra,
    phi: &GradedLinearMap,
    (g, i): (Elem, usize),
    (h, j): (Elem, usize),
) -> Result<bool> {
    let x = src.basis_element(g, i);
    let y = src.basis_element(h, j);
    let lhs = phi.apply(&src.multiply(&x, &y)?)?;
    let rhs = tgt.multiply(&phi.apply(&x)?, &phi.apply(&y)?)?;
    Ok(lhs == rhs)
}

/// Checks that `φ: src → tgt` is a degree-preserving algebra isomorphism on the
/// window: block shapes, unit, multiplicativity on every on-window basis pair,
/// then invertibility of every block. The first failure is the witness.
pub fn check_graded_iso(src: &GradedAlgebra, tgt: &GradedAlgebra, phi: &GradedLinearMap) -> Verdict<MapWitness> {
    if let Some(w) = shape_witness(src, tgt, phi) {
        return Verdict::Fails(w);
    }
    let f = src.field();
    match phi.apply(&src.unit_element()) {
        Ok(u) if u.coords == tgt.unit() => {}
        _ => return Verdict::Fails(MapWitness::Unit),
    }
    let mut tally = Tally::default();
    let degrees = src.degrees();
    for &g in &degrees {
        for &h in &degrees {
            let gh = src.group().op(g, h);
            if !src.contains(gh) || !tgt.contains(gh) {
                tally.skipped += 1;
                continue;
            }
            tally.checked += 1;
            let (ng, nh) = (src.dim(g).unwrap_or(0), src.dim(h).unwrap_or(0));
            // images of basis products and products of images, compared column by column
            let pg = phi.block(g).expect("shape checked");
            let ph = phi.block(h).expect("shape checked");
            let pgh = phi.block(gh).expect("shape checked");
            let ts = src.structure(g, h).expect("in window");
            let tt = tgt.structure(g, h).expect("in window");
            let images_h: Vec<Vec<Scalar>> = (0..nh).map(|j| ph.column(j)).collect();
            for i in 0..ng {
                let xi = pg.column(i);
                for (j, yj) in images_h.iter().enumerate() {
                    let lhs = pgh.apply(f, ts.fiber(i, j));
                    let rhs = tt.contract(f, &xi, yj);
                    if lhs != rhs {
                        return Verdict::Fails(MapWitness::Multiplicativity {
                            degrees: (g, h),
                            basis: (i, j),
                            labels: (src.label(g, i), src.label(h, j)),
                        });
                    }
                }
            }
        }
    }
    if let Some(g) = phi.singular_degree() {
        return Verdict::Fails(MapWitness::Singular { degree: g });
    }
    tally.finish()
}

/// [`check_graded_iso`] from an algebra to itself.
pub fn check_algebra_automorphism(a: &GradedAlgebra, phi: &GradedLinearMap) -> Verdict<MapWitness> {
    check_graded_iso(a, a, phi)
}
