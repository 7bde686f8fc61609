//! Grading groups: the integers, or a finite group given by its Cayley table.

use std::fmt;

use crate::error::Error;

/// A group element. For the integers this is the integer itself; for a finite
/// group it is the row index into the Cayley table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub i64);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingGroup {
    Integers,
    Finite(FiniteGroup),
}

/// Every violated group axiom of a Cayley table; empty iff the table is a group.
pub fn validate_group(labels: &[String], table: &[Vec<usize>]) -> Vec<String> {
    let n = labels.len();
    let mut report = Vec::new();
    if n == 0 {
        report.push("group has no elements".to_string());
        return report;
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            report.push(format!("duplicate label {l}"));
        }
    }
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        report.push(format!("Cayley table is not {n}x{n}"));
        return report;
    }
    for (a, row) in table.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if c >= n {
                report.push(format!("{}*{} is not an element", labels[a], labels[b]));
            }
        }
    }
    if !report.is_empty() {
        return report;
    }
    let identity = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a));
    let Some(e) = identity else {
        report.push("no identity element".to_string());
        return report;
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    report.push(format!(
                        "not associative at ({},{},{})",
                        labels[a], labels[b], labels[c]
                    ));
                }
            }
        }
    }
    for a in 0..n {
        if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
            report.push(format!("no inverse for {}", labels[a]));
        }
    }
    report
}

impl FiniteGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let report = validate_group(&labels, &table);
        if !report.is_empty() {
            return Err(Error::InvalidGroup(report));
        }
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .expect("validated");
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).expect("validated"))
            .collect();
        Ok(FiniteGroup { labels, table, identity, inverses })
    }

    /// The cyclic group of order `n` with labels `e, a, a^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::new(labels, table).expect("cyclic group table")
    }

    /// The symmetric group on three letters, elements as permutations of `[0,1,2]`.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let labels = ["e", "s", "t", "u", "r", "r^2"].map(String::from).to_vec();
        // (p*q)(i) = p(q(i))
        let compose =
            |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] { [p[q[0]], p[q[1]], p[q[2]]] };
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq = compose(p, q);
                        perms.iter().position(|x| *x == pq).expect("closed")
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(labels, table).expect("S3 table")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

impl GradingGroup {
    pub fn identity(&self) -> Elem {
        match self {
            GradingGroup::Integers => Elem(0),
            GradingGroup::Finite(g) => Elem(g.identity as i64),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GradingGroup::Finite(_))
    }

    pub fn is_element(&self, g: Elem) -> bool {
        match self {
            GradingGroup::Integers => true,
            GradingGroup::Finite(fg) => g.0 >= 0 && (g.0 as usize) < fg.order(),
        }
    }

    fn check(&self, g: Elem) -> Result<(), Error> {
        if self.is_element(g) {
            Ok(())
        } else {
            Err(Error::UnknownElement(g.to_string()))
        }
    }

    /// Group product; panics on elements outside the group (see [`Self::checked_op`]).
    pub fn op(&self, f: Elem, g: Elem) -> Elem {
        self.checked_op(f, g).expect("group element")
    }

    pub fn inv(&self, f: Elem) -> Elem {
        self.checked_inv(f).expect("group element")
    }

    pub fn checked_op(&self, f: Elem, g: Elem) -> Result<Elem, Error> {
        self.check(f)?;
        self.check(g)?;
        Ok(match self {
            GradingGroup::Integers => Elem(f.0 + g.0),
            GradingGroup::Finite(fg) => Elem(fg.table[f.0 as usize][g.0 as usize] as i64),
        })
    }

    pub fn checked_inv(&self, f: Elem) -> Result<Elem, Error> {
        self.check(f)?;
        Ok(match self {
            GradingGroup::Integers => Elem(-f.0),
            GradingGroup::Finite(fg) => Elem(fg.inverses[f.0 as usize] as i64),
        })
    }

    /// `f⁻¹ g`.
    pub fn left_quotient(&self, f: Elem, g: Elem) -> Elem {
        self.op(self.inv(f), g)
    }

    /// `f g⁻¹`.
    pub fn right_quotient(&self, f: Elem, g: Elem) -> Elem {
        self.op(f, self.inv(g))
    }

    pub fn label(&self, g: Elem) -> String {
        match self {
            GradingGroup::Integers => g.0.to_string(),
            GradingGroup::Finite(fg) => fg
                .labels
                .get(g.0 as usize)
                .cloned()
                .unwrap_or_else(|| format!("?{}", g.0)),
        }
    }

    pub fn parse_elem(&self, label: &str) -> Result<Elem, Error> {
        match self {
            GradingGroup::Integers => label
                .parse::<i64>()
                .map(Elem)
                .map_err(|_| Error::UnknownElement(label.to_string())),
            GradingGroup::Finite(fg) => fg
                .labels
                .iter()
                .position(|l| l == label)
                .map(|i| Elem(i as i64))
                .ok_or_else(|| Error::UnknownElement(label.to_string())),
        }
    }

    /// All elements of a finite group; `None` for the integers.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            GradingGroup::Integers => None,
            GradingGroup::Finite(fg) => Some((0..fg.order() as i64).map(Elem).collect()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GradingGroup::Integers => true,
            GradingGroup::Finite(fg) => {
                let n = fg.order();
                (0..n).all(|a| (0..n).all(|b| fg.table[a][b] == fg.table[b][a]))
            }
        }
    }
}
