use super::scalar::{FieldSpec, Scalar};

/// Structure constants of one bilinear product block: entry `(i, j, m)` is the
/// coefficient of the `m`-th target basis vector in `e_i * e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    dims: [usize; 3],
    data: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(field: &FieldSpec, left: usize, right: usize, out: usize) -> Self {
        Tensor { dims: [left, right, out], data: vec![field.zero(); left * right * out] }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2]
    }

    pub fn get(&self, i: usize, j: usize, m: usize) -> &Scalar {
        &self.data[self.offset(i, j) + m]
    }

    pub fn set(&mut self, i: usize, j: usize, m: usize, v: Scalar) {
        let o = self.offset(i, j);
        self.data[o + m] = v;
    }

    /// Coordinates of `e_i * e_j`.
    pub fn fiber(&self, i: usize, j: usize) -> &[Scalar] {
        let o = self.offset(i, j);
        &self.data[o..o + self.dims[2]]
    }

    pub fn set_fiber(&mut self, i: usize, j: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.dims[2]);
        let o = self.offset(i, j);
        self.data[o..o + v.len()].clone_from_slice(v);
    }

    /// The bilinear product of coordinate vectors `x` and `y`.
    pub fn contract(&self, field: &FieldSpec, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dims[0], "left factor has wrong length");
        assert_eq!(y.len(), self.dims[1], "right factor has wrong length");
        let mut out = vec![field.zero(); self.dims[2]];
        for (i, a) in x.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if field.is_zero(b) {
                    continue;
                }
                let ab = field.mul(a, b);
                for (m, o) in out.iter_mut().enumerate() {
                    *o = field.mul_add(o, &ab, self.get(i, j, m));
                }
            }
        }
        out
    }

    /// `x * e_j` for every right basis index `j`.
    pub fn left_products(&self, field: &FieldSpec, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        (0..self.dims[1])
            .map(|j| {
                let mut out = vec![field.zero(); self.dims[2]];
                for (i, a) in x.iter().enumerate() {
                    if field.is_zero(a) {
                        continue;
                    }
                    for (m, o) in out.iter_mut().enumerate() {
                        *o = field.mul_add(o, a, self.get(i, j, m));
                    }
                }
                out
            })
            .collect()
    }

    /// Nonzero entries in `(i, j, m)` order.
    pub fn nonzero_entries<'a>(
        &'a self,
        field: &'a FieldSpec,
    ) -> impl Iterator<Item = (usize, usize, usize, &'a Scalar)> + 'a {
        let [a, b, c] = self.dims;
        (0..a).flat_map(move |i| {
            (0..b).flat_map(move |j| {
                (0..c).filter_map(move |m| {
                    let v = self.get(i, j, m);
                    (!field.is_zero(v)).then_some((i, j, m, v))
                })
            })
        })
    }
}
