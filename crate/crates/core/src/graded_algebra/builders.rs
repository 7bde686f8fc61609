//! Builders for the standard example algebras, with monomial basis labels.
//!
//! Labels are `1`, `x`, `x^2*y`, `x^-1` for monomials, `E12*x^3` for matrix
//! units times monomials and `(L,0)`, `(0,R)` for the two summands of a direct sum.

use std::collections::{BTreeMap, HashMap};

use super::{GradedAlgebra, GradedLinearMap};
use crate::error::{Error, Result};
use crate::foundations::{Elem, FieldSpec, FiniteGroup, GradingGroup, Matrix, Scalar, Tensor, Window};

fn integer_window(window: Window) -> Result<(i64, i64)> {
    match window {
        Window::Interval { lo, hi } if lo <= 0 && 0 <= hi => Ok((lo, hi)),
        Window::Interval { .. } => Err(Error::OutOfWindow(format!("degree window {window} must contain 0"))),
        Window::Whole => Err(Error::OutOfWindow("a Z-graded algebra needs a bounded window".into())),
    }
}

fn check_names<'a>(names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = Vec::new();
    for n in names {
        if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphabetic()) || n == "E" {
            return Err(Error::InvalidBuilder(format!("bad generator name `{n}`")));
        }
        if seen.contains(&n) {
            return Err(Error::InvalidBuilder(format!("generator `{n}` repeated")));
        }
        seen.push(n);
    }
    Ok(())
}

/// Renders a monomial from its exponents; exponents may be negative.
pub fn monomial_label(names: &[&str], exps: &[i64]) -> String {
    let factors: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, e)| **e != 0)
        .map(|(n, e)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// Reads the exponents back from a monomial label.
pub fn parse_monomial(names: &[&str], label: &str) -> Option<Vec<i64>> {
    let mut exps = vec![0; names.len()];
    if label == "1" {
        return Some(exps);
    }
    for factor in label.split('*') {
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().ok()?),
            None => (factor, 1),
        };
        let k = names.iter().position(|n| *n == name)?;
        exps[k] += e;
    }
    Some(exps)
}

/// Exponent vectors with `Σ e_k deg_k = d`, in descending lexicographic order.
fn monomials_of_degree(degrees: &[i64], d: i64) -> Vec<Vec<i64>> {
    fn go(degrees: &[i64], rest: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let Some((&first, tail)) = degrees.split_first() else {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        if rest % first == 0 && tail.is_empty() {
            let e = rest / first;
            if e >= 0 {
                prefix.push(e);
                go(tail, 0, prefix, out);
                prefix.pop();
            }
            return;
        }
        let max = if (rest >= 0) == (first > 0) { rest / first } else { 0 };
        for e in (0..=max).rev() {
            prefix.push(e);
            go(tail, rest - e * first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, d, &mut Vec::new(), &mut out);
    out
}

/// Assembles a commutative monomial algebra: each degree has a list of
/// exponent vectors and products add exponents.
fn monomial_algebra(
    field: FieldSpec,
    window: Window,
    names: &[&str],
    basis: BTreeMap<Elem, Vec<Vec<i64>>>,
) -> Result<GradedAlgebra> {
    let group = GradingGroup::Integers;
    let index: HashMap<&Vec<i64>, (Elem, usize)> = basis
        .iter()
        .flat_map(|(g, ms)| ms.iter().enumerate().map(move |(i, m)| (m, (*g, i))))
        .collect();
    let mut structure = BTreeMap::new();
    for (g, mg) in &basis {
        for (h, mh) in &basis {
            let gh = Elem(g.0 + h.0);
            let Some(mgh) = basis.get(&gh) else { continue };
            let mut t = Tensor::zeros(&field, mg.len(), mh.len(), mgh.len());
            for (i, a) in mg.iter().enumerate() {
                for (j, b) in mh.iter().enumerate() {
                    let p: Vec<i64> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                    if let Some(&(_, m)) = index.get(&p) {
                        t.set(i, j, m, field.one());
                    }
                }
            }
            structure.insert((*g, *h), t);
        }
    }
    let labels = basis
        .iter()
        .map(|(g, ms)| (*g, ms.iter().map(|m| monomial_label(names, m)).collect()))
        .collect();
    let unit = vec![field.one()];
    GradedAlgebra::new(field, group, window, labels, structure, unit)
}

/// The commutative polynomial ring on the named generators, truncated to `window`.
/// Generator degrees must be nonzero and share a sign so that components are finite.
pub fn polynomial_ring(field: FieldSpec, generators: &[(&str, i64)], window: Window) -> Result<GradedAlgebra> {
    let (lo, hi) = integer_window(window)?;
    check_names(generators.iter().map(|(n, _)| *n))?;
    let degrees: Vec<i64> = generators.iter().map(|(_, d)| *d).collect();
    if degrees.iter().any(|d| *d == 0) {
        return Err(Error::InvalidBuilder("generators of degree 0 give infinite components".into()));
    }
    if degrees.iter().any(|d| *d > 0) && degrees.iter().any(|d| *d < 0) {
        return Err(Error::InvalidBuilder("generator degrees must share a sign".into()));
    }
    let names: Vec<&str> = generators.iter().map(|(n, _)| *n).collect();
    let basis = (lo..=hi).map(|d| (Elem(d), monomials_of_degree(&degrees, d))).collect();
    monomial_algebra(field, window, &names, basis)
}

/// `k[x, x⁻¹]` with `deg x = degree`.
pub fn laurent_ring(field: FieldSpec, name: &str, degree: i64, window: Window) -> Result<GradedAlgebra> {
    let (lo, hi) = integer_window(window)?;
    check_names(std::iter::once(name))?;
    if degree == 0 {
        return Err(Error::InvalidBuilder("generator of degree 0 gives an infinite component".into()));
    }
    let basis = (lo..=hi)
        .map(|d| {
            let ms = if d % degree == 0 { vec![vec![d / degree]] } else { Vec::new() };
            (Elem(d), ms)
        })
        .collect();
    monomial_algebra(field, window, &[name], basis)
}

/// `A ⊕ B` with componentwise product. Both factors must share field, group and window.
pub fn direct_sum(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra> {
    if a.field() != b.field() || a.group() != b.group() || a.window() != b.window() {
        return Err(Error::InvalidBuilder("summands need the same field, group and window".into()));
    }
    let f = *a.field();
    let mut labels = BTreeMap::new();
    for g in a.degrees() {
        let mut l: Vec<String> = a.labels(g).unwrap_or(&[]).iter().map(|s| format!("({s},0)")).collect();
        l.extend(b.labels(g).unwrap_or(&[]).iter().map(|s| format!("(0,{s})")));
        labels.insert(g, l);
    }
    let mut structure = BTreeMap::new();
    for (&(g, h), ta) in a.structure_tensors() {
        let tb = b.structure(g, h).expect("same window");
        let [a1, a2, a3] = ta.dims();
        let [b1, b2, b3] = tb.dims();
        let mut t = Tensor::zeros(&f, a1 + b1, a2 + b2, a3 + b3);
        for (i, j, m, v) in ta.nonzero_entries(&f) {
            t.set(i, j, m, v.clone());
        }
        for (i, j, m, v) in tb.nonzero_entries(&f) {
            t.set(a1 + i, a2 + j, a3 + m, v.clone());
        }
        structure.insert((g, h), t);
    }
    let unit = a.unit().iter().chain(b.unit()).cloned().collect();
    GradedAlgebra::new(f, a.group().clone(), a.window(), labels, structure, unit)
}

/// The ring of 2×2 matrices `[[R, xR], [xR, R]]` over `R = k[x², x⁻²]`: degree
/// `n` is spanned by `E11·xⁿ, E22·xⁿ` for even `n` and `E12·xⁿ, E21·xⁿ` for odd `n`.
pub fn matrix_example(field: FieldSpec, window: Window) -> Result<GradedAlgebra> {
    let (lo, hi) = integer_window(window)?;
    let units = |n: i64| if n % 2 == 0 { [(1, 1), (2, 2)] } else { [(1, 2), (2, 1)] };
    let label = |(a, b): (u8, u8), n: i64| match n {
        0 => format!("E{a}{b}"),
        1 => format!("E{a}{b}*x"),
        _ => format!("E{a}{b}*x^{n}"),
    };
    let mut labels = BTreeMap::new();
    for n in lo..=hi {
        labels.insert(Elem(n), units(n).iter().map(|u| label(*u, n)).collect());
    }
    let mut structure = BTreeMap::new();
    for g in lo..=hi {
        for h in lo..=hi {
            let gh = g + h;
            if gh < lo || gh > hi {
                continue;
            }
            let mut t = Tensor::zeros(&field, 2, 2, 2);
            for (i, (a, b)) in units(g).iter().enumerate() {
                for (j, (c, d)) in units(h).iter().enumerate() {
                    if b == c {
                        let m = units(gh).iter().position(|u| *u == (*a, *d)).expect("matrix unit");
                        t.set(i, j, m, field.one());
                    }
                }
            }
            structure.insert((Elem(g), Elem(h)), t);
        }
    }
    GradedAlgebra::new(field, GradingGroup::Integers, window, labels, structure, vec![field.one(), field.one()])
}

/// The group algebra `k[G]` graded by `G`, one basis vector per element.
pub fn group_algebra(field: FieldSpec, group: FiniteGroup) -> Result<GradedAlgebra> {
    let labels: BTreeMap<Elem, Vec<String>> = group
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (Elem(i as i64), vec![l.clone()]))
        .collect();
    let grading = GradingGroup::Finite(group);
    let mut structure = BTreeMap::new();
    for g in labels.keys() {
        for h in labels.keys() {
            let mut t = Tensor::zeros(&field, 1, 1, 1);
            t.set(0, 0, 0, field.one());
            structure.insert((*g, *h), t);
        }
    }
    GradedAlgebra::new(field, grading, Window::Whole, labels, structure, vec![field.one()])
}

/// The degree-preserving map `x_k ↦ c_k x_k` on a polynomial or Laurent ring,
/// where `names[k]` is the generator scaled by `scalars[k]`.
pub fn generator_scaling(a: &GradedAlgebra, names: &[&str], scalars: &[Scalar]) -> Result<GradedLinearMap> {
    if names.len() != scalars.len() {
        return Err(Error::DimensionMismatch { expected: names.len(), found: scalars.len() });
    }
    let f = *a.field();
    let mut inverses = Vec::new();
    for c in scalars {
        inverses.push(f.inv(c).ok_or_else(|| Error::InvalidBuilder("scaling by zero".into()))?);
    }
    let mut blocks = BTreeMap::new();
    for (g, ls) in a.all_labels() {
        let mut d = Vec::with_capacity(ls.len());
        for l in ls {
            let exps = parse_monomial(names, l)
                .ok_or_else(|| Error::InvalidBuilder(format!("`{l}` is not a monomial")))?;
            let mut s = f.one();
            for (k, e) in exps.iter().enumerate() {
                let base = if *e < 0 { &inverses[k] } else { &scalars[k] };
                for _ in 0..e.unsigned_abs() {
                    s = f.mul(&s, base);
                }
            }
            d.push(s);
        }
        blocks.insert(*g, Matrix::diagonal(&f, &d));
    }
    Ok(GradedLinearMap::new(f, a.group().clone(), a.group().identity(), blocks))
}

/// [`generator_scaling`] with the generators in the order of [`generator_names`].
pub fn monomial_scaling(a: &GradedAlgebra, scalars: &[Scalar]) -> Result<GradedLinearMap> {
    let names = generator_names(a);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    generator_scaling(a, &names, scalars)
}

/// Generator names in the monomial labels of `a`, ordered by the degree
/// closest to 0 in which each first occurs.
pub fn generator_names(a: &GradedAlgebra) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut degrees = a.degrees();
    degrees.sort_by_key(|g| (g.0.abs(), -g.0));
    for g in degrees {
        for l in a.labels(g).unwrap_or(&[]) {
            for factor in l.split('*') {
                let n = factor.split('^').next().unwrap_or("");
                if n != "1" && !n.is_empty() && !names.iter().any(|m| m == n) {
                    names.push(n.to_string());
                }
            }
        }
    }
    names
}

/// `φ ⊕ ψ` on `A ⊕ B`, as block-diagonal matrices.
pub fn direct_sum_map(phi: &GradedLinearMap, psi: &GradedLinearMap) -> Result<GradedLinearMap> {
    if phi.shift() != psi.shift() {
        return Err(Error::ShapeMismatch("summand maps have different degrees".into()));
    }
    let f = *phi.field();
    let mut blocks = BTreeMap::new();
    for (g, a) in phi.blocks() {
        let b = psi
            .block(*g)
            .ok_or_else(|| Error::MissingComponent(format!("second summand at degree {g}")))?;
        let m = Matrix::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |r, c| {
            if r < a.rows() && c < a.cols() {
                a.get(r, c).clone()
            } else if r >= a.rows() && c >= a.cols() {
                b.get(r - a.rows(), c - a.cols()).clone()
            } else {
                f.zero()
            }
        });
        blocks.insert(*g, m);
    }
    Ok(GradedLinearMap::new(f, phi.group().clone(), phi.shift(), blocks))
}
