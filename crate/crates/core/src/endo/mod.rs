//! Bigraded modules built from shifts of a base algebra and their endomorphism G-algebras.
//!
//! A summand `e·B⟨s⟩` is a shift of the base algebra, optionally cut down by a
//! degree-`e` idempotent `e`. Maps `e_j B⟨b⟩ → e_i B⟨a⟩` are left multiplications by
//! elements of `e_i B_{a⁻¹b} e_j`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, Matrix, Scalar, Tensor, Window};
use crate::g_algebra::GAlgebra;
use crate::graded_algebra::{GradedAlgebra, HomogeneousElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub shift: Elem,
    /// Coordinates in `B_e` of an idempotent cutting the summand down; `None` is `1`.
    pub idempotent: Option<Vec<Scalar>>,
}

impl Summand {
    pub fn shift(shift: Elem) -> Self {
        Summand { shift, idempotent: None }
    }

    pub fn cut(shift: Elem, idempotent: Vec<Scalar>) -> Self {
        Summand { shift, idempotent: Some(idempotent) }
    }
}

/// Rows `P_{g*} = ⊕_j e_j B⟨s_g(j)⟩` for `g` in an index window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedModule {
    base: GradedAlgebra,
    rows: BTreeMap<Elem, Vec<Summand>>,
}

impl BigradedModule {
    pub fn new(base: GradedAlgebra, rows: BTreeMap<Elem, Vec<Summand>>) -> Result<Self> {
        let f = *base.field();
        let e = base.group().identity();
        let n = base.dim(e).unwrap_or(0);
        for (g, row) in &rows {
            for s in row {
                if !base.group().is_element(s.shift) {
                    return Err(Error::InvalidModule(format!("shift {} in row {g} is not a group element", s.shift)));
                }
                if let Some(idem) = &s.idempotent {
                    if idem.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, found: idem.len() });
                    }
                    let x = HomogeneousElement::new(e, idem.clone());
                    if base.multiply(&x, &x)?.coords != *idem || idem.iter().all(|c| f.is_zero(c)) {
                        return Err(Error::InvalidModule(format!("summand of row {g} is cut by a non-idempotent")));
                    }
                }
            }
        }
        Ok(BigradedModule { base, rows })
    }

    /// Every row a single unrestricted shift `B⟨s(g)⟩`.
    pub fn from_shifts(base: GradedAlgebra, index: Window, mut shift: impl FnMut(Elem) -> Vec<Elem>) -> Result<Self> {
        let rows = index
            .elements(base.group())
            .into_iter()
            .map(|g| (g, shift(g).into_iter().map(Summand::shift).collect()))
            .collect();
        BigradedModule::new(base, rows)
    }

    pub fn base(&self) -> &GradedAlgebra {
        &self.base
    }

    pub fn rows(&self) -> &BTreeMap<Elem, Vec<Summand>> {
        &self.rows
    }

    pub fn row(&self, g: Elem) -> Option<&[Summand]> {
        self.rows.get(&g).map(Vec::as_slice)
    }
}

/// `hom_B(B⟨a⟩, B⟨b⟩) ≅ B_d` with `d = b⁻¹a`; `dim` is `None` when `d` leaves the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomShift {
    pub degree: Elem,
    pub dim: Option<usize>,
}

pub fn hom_shift_component(b: &GradedAlgebra, from: Elem, to: Elem) -> HomShift {
    let degree = b.group().left_quotient(to, from);
    HomShift { degree, dim: b.dim(degree) }
}

/// One cell `e_i B_d e_j` of a hom component, with a basis in `B_d` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub degree: Elem,
    pub basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element of the cell; it must lie in the cell.
    fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|p| v[*p].clone()).collect()
    }

    fn element(&self, field: &FieldSpec, c: &[Scalar], n: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); n];
        for (k, b) in c.iter().zip(&self.basis) {
            for (o, v) in out.iter_mut().zip(b) {
                *o = field.mul_add(o, k, v);
            }
        }
        out
    }
}

/// `hom_B(P_{g*}, P_{f*})` as a matrix of cells indexed by (target summand, source summand).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomComponent {
    pub cells: Vec<Vec<Cell>>,
}

impl HomComponent {
    pub fn dim(&self) -> usize {
        self.cells.iter().flatten().map(Cell::dim).sum()
    }

    /// Splits H-coordinates into the matrix of cell entries over `B`.
    pub fn to_matrix(&self, b: &GradedAlgebra, coords: &[Scalar]) -> Vec<Vec<HomogeneousElement>> {
        let f = b.field();
        let mut offset = 0;
        self.cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        let n = b.dim(cell.degree).unwrap_or(0);
                        let c = &coords[offset..offset + cell.dim()];
                        offset += cell.dim();
                        HomogeneousElement::new(cell.degree, cell.element(f, c, n))
                    })
                    .collect()
            })
            .collect()
    }

    /// Inverse of [`HomComponent::to_matrix`] for entries lying in their cells.
    pub fn from_matrix(&self, entries: &[Vec<HomogeneousElement>]) -> Vec<Scalar> {
        self.cells
            .iter()
            .zip(entries)
            .flat_map(|(row, es)| row.iter().zip(es).flat_map(|(cell, x)| cell.coordinates(&x.coords)))
            .collect()
    }
}

fn idempotent_or_unit(b: &GradedAlgebra, s: &Summand) -> HomogeneousElement {
    HomogeneousElement::new(
        b.group().identity(),
        s.idempotent.clone().unwrap_or_else(|| b.unit().to_vec()),
    )
}

fn cell(b: &GradedAlgebra, target: &Summand, source: &Summand) -> Result<Cell> {
    let f = b.field();
    let hs = hom_shift_component(b, source.shift, target.shift);
    let n = hs.dim.ok_or_else(|| {
        Error::OutOfWindow(format!(
            "hom(B<{}>, B<{}>) needs degree {} of the base",
            b.group().label(source.shift),
            b.group().label(target.shift),
            b.group().label(hs.degree)
        ))
    })?;
    let ei = idempotent_or_unit(b, target);
    let ej = idempotent_or_unit(b, source);
    let left = b.left_multiplication(&ei, hs.degree)?;
    let right = b.right_multiplication(&ej, hs.degree)?;
    let proj = left.mul(f, &right);
    debug_assert_eq!(proj.shape(), (n, n));
    let (r, pivots) = proj.transpose().rref(f);
    let basis = (0..pivots.len()).map(|k| r.row(k).to_vec()).collect();
    Ok(Cell { degree: hs.degree, basis, pivots })
}

pub fn hom_component(p: &BigradedModule, f: Elem, g: Elem) -> Result<HomComponent> {
    let b = p.base();
    let target = p.row(f).ok_or_else(|| Error::MissingComponent(format!("row {f}")))?;
    let source = p.row(g).ok_or_else(|| Error::MissingComponent(format!("row {g}")))?;
    let cells = target
        .iter()
        .map(|t| source.iter().map(|s| cell(b, t, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(HomComponent { cells })
}

fn combination_label(b: &GradedAlgebra, d: Elem, v: &[Scalar]) -> String {
    let f = b.field();
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(k, c)| {
            let l = b.label(d, k);
            if f.is_one(c) {
                l
            } else {
                format!("{}*{l}", f.format(c))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// The endomorphism G-algebra `H_{f,g} = hom_B(P_{g*}, P_{f*})` on the index window,
/// with composition as multiplication. Basis vectors are cell basis vectors in
/// row-major cell order, labelled `i,j:b`.
pub fn endo_g_algebra(p: &BigradedModule, index: Window) -> Result<GAlgebra> {
    let b = p.base();
    let grp = b.group();
    let fs = *b.field();
    let idx = index.elements(grp);
    let mut homs = BTreeMap::new();
    for &f in &idx {
        for &g in &idx {
            homs.insert((f, g), hom_component(p, f, g)?);
        }
    }
    let mut components = BTreeMap::new();
    for (&k, h) in &homs {
        let mut labels = Vec::new();
        for (i, row) in h.cells.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                for v in &c.basis {
                    labels.push(format!("{},{}:{}", i + 1, j + 1, combination_label(b, c.degree, v)));
                }
            }
        }
        components.insert(k, labels);
    }
    let mut structure = BTreeMap::new();
    for &f in &idx {
        for &g in &idx {
            let hfg = &homs[&(f, g)];
            for &h in &idx {
                let hgh = &homs[&(g, h)];
                let hfh = &homs[&(f, h)];
                let mut t = Tensor::zeros(&fs, hfg.dim(), hgh.dim(), hfh.dim());
                let offsets = |hc: &HomComponent| -> Vec<Vec<usize>> {
                    let mut o = 0;
                    hc.cells
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| {
                                    let s = o;
                                    o += c.dim();
                                    s
                                })
                                .collect()
                        })
                        .collect()
                };
                let (ofg, ogh, ofh) = (offsets(hfg), offsets(hgh), offsets(hfh));
                for (i, row) in hfg.cells.iter().enumerate() {
                    for (j, c1) in row.iter().enumerate() {
                        for (k, c2) in hgh.cells[j].iter().enumerate() {
                            let target = &hfh.cells[i][k];
                            for (a, v) in c1.basis.iter().enumerate() {
                                let x = HomogeneousElement::new(c1.degree, v.clone());
                                for (bi, w) in c2.basis.iter().enumerate() {
                                    let y = HomogeneousElement::new(c2.degree, w.clone());
                                    let prod = b.multiply(&x, &y)?;
                                    let coords = target.coordinates(&prod.coords);
                                    for (m, s) in coords.into_iter().enumerate() {
                                        if !fs.is_zero(&s) {
                                            t.set(ofg[i][j] + a, ogh[j][k] + bi, ofh[i][k] + m, s);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                structure.insert((f, g, h), t);
            }
        }
    }
    let mut local_units = BTreeMap::new();
    for &f in &idx {
        let hff = &homs[&(f, f)];
        let row = p.row(f).expect("row present");
        let entries: Vec<Vec<HomogeneousElement>> = (0..row.len())
            .map(|i| {
                (0..row.len())
                    .map(|j| {
                        let d = hff.cells[i][j].degree;
                        let n = b.dim(d).unwrap_or(0);
                        if i == j {
                            idempotent_or_unit(b, &row[i])
                        } else {
                            HomogeneousElement::new(d, vec![fs.zero(); n])
                        }
                    })
                    .collect()
            })
            .collect();
        local_units.insert(f, hff.from_matrix(&entries));
    }
    GAlgebra::new(fs, grp.clone(), index, components, structure, local_units)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorReport {
    Sufficient,
    Inconclusive { missing: Vec<Elem> },
}

impl fmt::Display for GeneratorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorReport::Sufficient => write!(f, "SUFFICIENT"),
            GeneratorReport::Inconclusive { missing } => {
                let m: Vec<String> = missing.iter().map(|g| g.to_string()).collect();
                write!(f, "INCONCLUSIVE missing {}", m.join(","))
            }
        }
    }
}

/// A sufficient check that the rows generate: every index occurs as a shift of
/// some row. It never concludes that `P` fails to generate.
pub fn generator_heuristic(p: &BigradedModule, index: Window) -> GeneratorReport {
    let shifts: Vec<Elem> = p.rows().values().flatten().map(|s| s.shift).collect();
    let missing: Vec<Elem> = index
        .elements(p.base().group())
        .into_iter()
        .filter(|g| !shifts.contains(g))
        .collect();
    if missing.is_empty() {
        GeneratorReport::Sufficient
    } else {
        GeneratorReport::Inconclusive { missing }
    }
}

/// Homogeneous elements with a two-sided inverse inside the window, per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvertiblesReport {
    pub by_degree: BTreeMap<Elem, Vec<String>>,
}

impl InvertiblesReport {
    pub fn degrees(&self) -> Vec<Elem> {
        self.by_degree.iter().filter(|(_, v)| !v.is_empty()).map(|(g, _)| *g).collect()
    }
}

/// Largest component for which all 0/1 combinations of basis vectors are tried.
const MAX_SEARCH_DIM: usize = 10;

/// Searches each degree for invertible elements among the basis vectors and their
/// 0/1 combinations, solving `uv = 1 = vu` in the inverse degree.
pub fn eg2_semisimple_quotient_witness(b: &GradedAlgebra) -> InvertiblesReport {
    let f = *b.field();
    let grp = b.group();
    let mut by_degree = BTreeMap::new();
    for d in b.degrees() {
        let n = b.dim(d).unwrap_or(0);
        let inv = grp.inv(d);
        let mut found = Vec::new();
        if b.contains(inv) && n <= MAX_SEARCH_DIM {
            for mask in 1u32..(1u32 << n) {
                let coords: Vec<Scalar> = (0..n).map(|k| if mask & (1 << k) != 0 { f.one() } else { f.zero() }).collect();
                let u = HomogeneousElement::new(d, coords.clone());
                let (Ok(l), Ok(r)) = (b.left_multiplication(&u, inv), b.right_multiplication(&u, inv)) else {
                    continue;
                };
                let stacked = Matrix::from_fn(l.rows() + r.rows(), l.cols(), |i, j| {
                    if i < l.rows() {
                        l.get(i, j).clone()
                    } else {
                        r.get(i - l.rows(), j).clone()
                    }
                });
                let rhs: Vec<Scalar> = b.unit().iter().chain(b.unit()).cloned().collect();
                if stacked.solve(&f, &rhs).is_some() {
                    found.push(combination_label(b, d, &coords));
                }
            }
        }
        by_degree.insert(d, found);
    }
    InvertiblesReport { by_degree }
}
