//! Exact sparse linear algebra over a cyclotomic field.
//!
//! Structure-constant tables are sparse in every case this crate handles
//! (group-algebra products touch one basis element, comultiplications a
//! handful), so vectors are kept as ordered index -> scalar maps. Spans are
//! maintained in reduced row-echelon form with exact eliminations, which
//! gives three primitives everything downstream leans on:
//!
//! * membership: a vector lies in a span iff its reduction is zero;
//! * complements: the non-pivot standard coordinates descend to a basis of
//!   the quotient by the span, and reduction computes the projection;
//! * kernels: feeding (image, preimage) pairs through [`KernelSolver`]
//!   harvests an exact kernel basis of any linear map.
//!
//! All eliminations use field inverses from [`crate::cyclotomic`], so there
//! is no growth of error — only of numerators and denominators.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{CycScalar, FieldContext};

/// A sparse vector: ordered map from coordinate index to nonzero scalar.
///
/// The empty map is the zero vector. Insertions that cancel to zero remove
/// the entry, so `iter` only ever yields nonzero coefficients and equality
/// of maps is equality of vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: BTreeMap<usize, CycScalar>,
}

impl SparseVec {
    /// The zero vector.
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    /// A standard basis vector scaled by `c`.
    pub fn unit(index: usize, c: CycScalar) -> Self {
        let mut v = SparseVec::new();
        v.add_to(index, &c);
        v
    }

    /// True when the vector is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coordinates.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// The nonzero coordinates in ascending order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Coefficient at `index`, if nonzero.
    pub fn get(&self, index: usize) -> Option<&CycScalar> {
        self.entries.get(&index)
    }

    /// Iterates over `(index, coefficient)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &CycScalar)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// The smallest nonzero coordinate and its coefficient.
    pub fn leading(&self) -> Option<(usize, &CycScalar)> {
        self.entries.iter().next().map(|(k, v)| (*k, v))
    }

    /// Adds `c` to the coefficient at `index`, dropping exact zeros.
    pub fn add_to(&mut self, index: usize, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.entries.remove(&index);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.entries.insert(index, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for (i, v) in other.iter() {
            self.add_to(i, &(v * c));
        }
    }

    /// `c * self` as a new vector.
    pub fn scaled(&self, c: &CycScalar) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_scaled(self, c);
        out
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.add_to(i, v);
        }
        out
    }

    /// Pointwise difference.
    pub fn minus(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.add_to(i, &(-v));
        }
        out
    }

    /// Relabels every coordinate through `f`, summing collisions.
    pub fn map_support(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, v) in self.iter() {
            out.add_to(f(i), v);
        }
        out
    }
}

/// Flat index of `(i, j)` inside a tensor square with right factor
/// dimension `dim_right`: row-major, left factor slowest.
pub fn tensor_index(i: usize, j: usize, dim_right: usize) -> usize {
    i * dim_right + j
}

/// Inverse of [`tensor_index`].
pub fn untensor_index(k: usize, dim_right: usize) -> (usize, usize) {
    (k / dim_right, k % dim_right)
}

/// Kronecker product of sparse vectors: `(a (x) b)[i * dim_right + j] =
/// a[i] * b[j]`.
pub fn sparse_tensor(a: &SparseVec, b: &SparseVec, dim_right: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            out.add_to(tensor_index(i, j, dim_right), &(x * y));
        }
    }
    out
}

/// Applies the linear map whose matrix columns are `columns[i] = f(e_i)`.
pub fn apply_linear(columns: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in v.iter() {
        out.add_scaled(&columns[i], c);
    }
    out
}

/// A subspace held in reduced row-echelon form.
///
/// Rows are stored with pivot coefficient 1 and with every pivot column
/// cleared from all other rows, so `reduce` is simultaneously a membership
/// test (zero result) and the projection onto the complement spanned by the
/// non-pivot standard coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    ctx: Arc<FieldContext>,
    dim: usize,
    /// Rows in pivot order; `pivots[k]` is the pivot column of `rows[k]`.
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// An empty span inside an ambient space of dimension `dim`.
    pub fn new(ctx: &Arc<FieldContext>, dim: usize) -> Self {
        Echelon {
            ctx: Arc::clone(ctx),
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Current rank of the span.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in insertion-sorted order.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// RREF basis rows of the span.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Standard coordinates that are not pivots; their classes form a basis
    /// of the quotient by this span.
    pub fn complement_columns(&self) -> Vec<usize> {
        let pivot_set: std::collections::BTreeSet<usize> = self.pivots.iter().copied().collect();
        (0..self.dim).filter(|c| !pivot_set.contains(c)).collect()
    }

    /// Subtracts the unique span element matching `v` on all pivot columns.
    /// The result has no support on pivot columns and is congruent to `v`
    /// modulo the span; it is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = w.get(p) {
                let neg = -c;
                w.add_scaled(&self.rows[k], &neg);
            }
        }
        w
    }

    /// Inserts `v` into the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        let Some((pivot, lead)) = w.leading() else {
            return false;
        };
        assert!(pivot < self.dim, "coordinate beyond ambient dimension");
        let norm = w.scaled(&lead.inv().expect("leading coefficient is nonzero"));
        // Clear the new pivot column from existing rows to keep RREF.
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(pivot) {
                let c = c.clone();
                row.add_scaled(&norm, &(-&c));
            }
        }
        // Insert keeping pivot order.
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, norm);
        true
    }

    /// Membership test.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// True if this span contains every row of `other`.
    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// True if the two spans are equal as subspaces.
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.rank() == other.rank() && self.contains_all(other)
    }

    /// Field context used for eliminations.
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
}

/// Builds the span of an iterator of vectors.
pub fn span_of<'a>(
    ctx: &Arc<FieldContext>,
    dim: usize,
    vecs: impl IntoIterator<Item = &'a SparseVec>,
) -> Echelon {
    let mut e = Echelon::new(ctx, dim);
    for v in vecs {
        e.insert(v);
    }
    e
}

/// Incremental exact kernel computation.
///
/// Feed pairs `(image, preimage)`; whenever an image is linearly dependent
/// on the ones already seen, the tracked preimage combination is a kernel
/// vector of the underlying map and is collected. Feeding `(f(e_i), e_i)`
/// for all `i` therefore yields a full kernel basis.
pub struct KernelSolver {
    img_rows: Vec<SparseVec>,
    pre_rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    kernel: Vec<SparseVec>,
}

impl KernelSolver {
    /// A solver with empty state.
    pub fn new() -> Self {
        KernelSolver {
            img_rows: Vec::new(),
            pre_rows: Vec::new(),
            pivots: Vec::new(),
            kernel: Vec::new(),
        }
    }

    /// Processes one `(image, preimage)` pair.
    pub fn feed(&mut self, image: SparseVec, preimage: SparseVec) {
        let mut img = image;
        let mut pre = preimage;
        loop {
            let Some((pivot, lead)) = img.leading() else {
                if !pre.is_zero() {
                    self.kernel.push(pre);
                }
                return;
            };
            match self.pivots.binary_search(&pivot) {
                Ok(k) => {
                    let c = -lead;
                    img.add_scaled(&self.img_rows[k], &c);
                    pre.add_scaled(&self.pre_rows[k], &c);
                }
                Err(at) => {
                    let inv = lead.inv().expect("leading coefficient is nonzero");
                    let img = img.scaled(&inv);
                    let pre = pre.scaled(&inv);
                    self.pivots.insert(at, pivot);
                    self.img_rows.insert(at, img);
                    self.pre_rows.insert(at, pre);
                    return;
                }
            }
        }
    }

    /// Rank of the image span seen so far.
    pub fn image_rank(&self) -> usize {
        self.img_rows.len()
    }

    /// Consumes the solver and returns the collected kernel vectors.
    pub fn into_kernel(self) -> Vec<SparseVec> {
        self.kernel
    }
}

impl Default for KernelSolver {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldContext;

    fn q() -> Arc<FieldContext> {
        FieldContext::new(1).unwrap()
    }

    fn vec_of(ctx: &Arc<FieldContext>, entries: &[(usize, i64)]) -> SparseVec {
        let mut v = SparseVec::new();
        for &(i, c) in entries {
            v.add_to(i, &ctx.integer(c));
        }
        v
    }

    #[test]
    fn sparse_vector_cancellation_drops_entries() {
        let ctx = q();
        let mut v = vec_of(&ctx, &[(3, 5)]);
        v.add_to(3, &ctx.integer(-5));
        assert!(v.is_zero());
        assert_eq!(v.support_len(), 0);
    }

    #[test]
    fn echelon_membership_and_rank() {
        let ctx = q();
        let mut e = Echelon::new(&ctx, 3);
        assert!(e.insert(&vec_of(&ctx, &[(0, 1), (1, 1)])));
        assert!(e.insert(&vec_of(&ctx, &[(1, 1), (2, 1)])));
        assert_eq!(e.rank(), 2);
        // (1, 0, -1) = row1 - row2 lies in the span.
        assert!(e.contains(&vec_of(&ctx, &[(0, 1), (2, -1)])));
        assert!(!e.contains(&vec_of(&ctx, &[(0, 1)])));
        // Re-inserting a dependent vector does not grow the rank.
        assert!(!e.insert(&vec_of(&ctx, &[(0, 2), (2, -2)])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn echelon_complement_projects_modulo_span() {
        let ctx = q();
        let mut e = Echelon::new(&ctx, 3);
        e.insert(&vec_of(&ctx, &[(0, 1), (2, 1)]));
        assert_eq!(e.pivot_columns(), &[0]);
        assert_eq!(e.complement_columns(), vec![1, 2]);
        // e_0 reduces to -e_2 modulo the span of e_0 + e_2.
        let r = e.reduce(&vec_of(&ctx, &[(0, 1)]));
        assert_eq!(r, vec_of(&ctx, &[(2, -1)]));
        // The reduction has no pivot support and differs from the input by
        // a span element.
        assert!(e.contains(&vec_of(&ctx, &[(0, 1)]).minus(&r)));
    }

    #[test]
    fn echelon_rref_rows_have_unique_pivots() {
        let ctx = q();
        let mut e = Echelon::new(&ctx, 4);
        e.insert(&vec_of(&ctx, &[(1, 2), (2, 4), (3, 2)]));
        e.insert(&vec_of(&ctx, &[(0, 1), (1, 1), (2, 1)]));
        e.insert(&vec_of(&ctx, &[(0, 1), (2, -1), (3, -1)]));
        // Every pivot column must appear in exactly one row with coeff 1.
        for (k, &p) in e.pivot_columns().iter().enumerate() {
            for (r, row) in e.rows().iter().enumerate() {
                if r == k {
                    assert!(row.get(p).unwrap().is_one());
                } else {
                    assert!(row.get(p).is_none());
                }
            }
        }
    }

    #[test]
    fn kernel_solver_finds_difference_kernel() {
        let ctx = q();
        // f(e_0) = f(e_1) = (1, 1); kernel is spanned by e_0 - e_1.
        let mut ks = KernelSolver::new();
        ks.feed(vec_of(&ctx, &[(0, 1), (1, 1)]), vec_of(&ctx, &[(0, 1)]));
        ks.feed(vec_of(&ctx, &[(0, 1), (1, 1)]), vec_of(&ctx, &[(1, 1)]));
        assert_eq!(ks.image_rank(), 1);
        let kernel = ks.into_kernel();
        assert_eq!(kernel.len(), 1);
        let k = &kernel[0];
        let span = span_of(&ctx, 2, [&vec_of(&ctx, &[(0, 1), (1, -1)])]);
        assert!(span.contains(k));
        assert!(!k.is_zero());
    }

    #[test]
    fn kernel_of_full_rank_map_is_trivial() {
        let ctx = q();
        let mut ks = KernelSolver::new();
        ks.feed(vec_of(&ctx, &[(0, 1), (1, 1)]), vec_of(&ctx, &[(0, 1)]));
        ks.feed(vec_of(&ctx, &[(1, 1)]), vec_of(&ctx, &[(1, 1)]));
        assert_eq!(ks.image_rank(), 2);
        assert!(ks.into_kernel().is_empty());
    }

    #[test]
    fn tensor_indexing_round_trips() {
        for i in 0..5 {
            for j in 0..7 {
                let k = tensor_index(i, j, 7);
                assert_eq!(untensor_index(k, 7), (i, j));
            }
        }
        let ctx = q();
        let a = vec_of(&ctx, &[(0, 2), (1, 3)]);
        let b = vec_of(&ctx, &[(1, 5)]);
        let t = sparse_tensor(&a, &b, 2);
        assert_eq!(t, vec_of(&ctx, &[(1, 10), (3, 15)]));
    }

    #[test]
    fn apply_linear_combines_columns() {
        let ctx = q();
        let cols = vec![vec_of(&ctx, &[(0, 1), (1, 1)]), vec_of(&ctx, &[(1, -1)])];
        let v = vec_of(&ctx, &[(0, 2), (1, 3)]);
        assert_eq!(apply_linear(&cols, &v), vec_of(&ctx, &[(0, 2), (1, -1)]));
    }
}
