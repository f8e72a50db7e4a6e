use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::matrix::{dot, Matrix, SparseMatrix};
use crate::math::{exp, ln};
use crate::{Error, Result};

/// Probabilities are clamped to `[BCE_EPS, 1 - BCE_EPS]` inside the loss.
pub const BCE_EPS: f64 = 1e-7;

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    MatMul(Var, Var),
    Add(Var, Var),
    AddRow(Var, Var),
    Mul(Var, Var),
    Scale(Var, f64),
    ConcatCols(Vec<Var>),
    Relu(Var),
    Elu(Var),
    LeakyRelu(Var, f64),
    Sigmoid(Var),
    Dropout(Var, Matrix),
    SegmentSoftmax(Var, Arc<[usize]>),
    RowSum(Var),
    MeanRows(Var),
    Sum(Var),
    SpMM(Arc<SparseMatrix>, Var),
    GatherRows(Var, Arc<[usize]>),
    ScatterAddRows(Var, Arc<[usize]>),
    MulCol(Var, Var),
    Bce(Var, Arc<[f64]>),
}

#[derive(Debug, Clone)]
struct Node {
    value: Matrix,
    op: Op,
    requires_grad: bool,
}

/// Append-only record of a forward computation. Nodes are stored in
/// creation order, which is a topological order of the graph.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

/// Gradients of a scalar loss with respect to every leaf that requires them.
#[derive(Debug, Clone)]
pub struct Gradients {
    grads: Vec<Option<Matrix>>,
}

impl Gradients {
    pub fn get(&self, v: Var) -> Option<&Matrix> {
        self.grads.get(v.0).and_then(Option::as_ref)
    }

    /// Gradient of `v`, or zeros of `shape` if the loss does not depend on it.
    pub fn get_or_zeros(&self, v: Var, shape: (usize, usize)) -> Matrix {
        self.get(v).cloned().unwrap_or_else(|| Matrix::zeros(shape.0, shape.1))
    }
}

fn same_shape(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Matrix {
        &self.nodes[v.0].value
    }

    fn push(&mut self, value: Matrix, op: Op, requires_grad: bool) -> Var {
        debug_assert!(value.is_finite(), "non-finite value produced by {op:?}");
        self.nodes.push(Node {
            value,
            op,
            requires_grad,
        });
        Var(self.nodes.len() - 1)
    }

    fn rg(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    /// A trainable leaf.
    pub fn param(&mut self, value: Matrix) -> Var {
        self.push(value, Op::Leaf, true)
    }

    /// A leaf that never receives a gradient.
    pub fn constant(&mut self, value: Matrix) -> Var {
        self.push(value, Op::Leaf, false)
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (va, vb) = (self.value(a), self.value(b));
        if va.cols() != vb.rows() {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: va.shape(),
                right: vb.shape(),
            });
        }
        let out = va.matmul(vb);
        let rg = self.rg(a) || self.rg(b);
        Ok(self.push(out, Op::MatMul(a, b), rg))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        same_shape("add", self.value(a), self.value(b))?;
        let out = self.value(a).zip_map(self.value(b), |x, y| x + y);
        let rg = self.rg(a) || self.rg(b);
        Ok(self.push(out, Op::Add(a, b), rg))
    }

    /// Adds the `1 x c` row `bias` to every row of `a`.
    pub fn add_row(&mut self, a: Var, bias: Var) -> Result<Var> {
        let (va, vb) = (self.value(a), self.value(bias));
        if vb.rows() != 1 || vb.cols() != va.cols() {
            return Err(Error::ShapeMismatch {
                op: "add_row",
                left: va.shape(),
                right: vb.shape(),
            });
        }
        let mut out = va.clone();
        let b = vb.row(0);
        for i in 0..out.rows() {
            for (o, &x) in out.row_mut(i).iter_mut().zip(b) {
                *o += x;
            }
        }
        let rg = self.rg(a) || self.rg(bias);
        Ok(self.push(out, Op::AddRow(a, bias), rg))
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        same_shape("mul", self.value(a), self.value(b))?;
        let out = self.value(a).zip_map(self.value(b), |x, y| x * y);
        let rg = self.rg(a) || self.rg(b);
        Ok(self.push(out, Op::Mul(a, b), rg))
    }

    pub fn scale(&mut self, a: Var, s: f64) -> Var {
        let out = self.value(a).map(|x| s * x);
        let rg = self.rg(a);
        self.push(out, Op::Scale(a, s), rg)
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("concat_cols of nothing".into()))?;
        let rows = self.value(*first).rows();
        let mut cols = 0;
        for &p in parts {
            let v = self.value(p);
            if v.rows() != rows {
                return Err(Error::ShapeMismatch {
                    op: "concat_cols",
                    left: self.value(*first).shape(),
                    right: v.shape(),
                });
            }
            cols += v.cols();
        }
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let mut offset = 0;
            for &p in parts {
                let src = self.value(p).row(i);
                out.row_mut(i)[offset..offset + src.len()].copy_from_slice(src);
                offset += src.len();
            }
        }
        let rg = parts.iter().any(|&p| self.rg(p));
        Ok(self.push(out, Op::ConcatCols(parts.to_vec()), rg))
    }

    pub fn relu(&mut self, a: Var) -> Var {
        let out = self.value(a).map(|x| if x > 0.0 { x } else { 0.0 });
        let rg = self.rg(a);
        self.push(out, Op::Relu(a), rg)
    }

    pub fn elu(&mut self, a: Var) -> Var {
        let out = self.value(a).map(|x| if x > 0.0 { x } else { exp(x) - 1.0 });
        let rg = self.rg(a);
        self.push(out, Op::Elu(a), rg)
    }

    pub fn leaky_relu(&mut self, a: Var, slope: f64) -> Var {
        let out = self.value(a).map(|x| if x > 0.0 { x } else { slope * x });
        let rg = self.rg(a);
        self.push(out, Op::LeakyRelu(a, slope), rg)
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let out = self.value(a).map(sigmoid_scalar);
        let rg = self.rg(a);
        self.push(out, Op::Sigmoid(a), rg)
    }

    /// Inverted dropout: survivors are scaled by `1 / (1 - rate)`. With
    /// `train == false` (or a zero rate) the input is returned unchanged.
    pub fn dropout<R: Rng>(&mut self, a: Var, rate: f64, train: bool, rng: &mut R) -> Result<Var> {
        if !(0.0..1.0).contains(&rate) {
            return Err(Error::InvalidParameter(alloc::format!(
                "dropout rate {rate} outside [0, 1)"
            )));
        }
        if !train || rate == 0.0 {
            return Ok(a);
        }
        let keep = 1.0 / (1.0 - rate);
        let v = self.value(a);
        let mut mask = Matrix::zeros(v.rows(), v.cols());
        for m in mask.data_mut() {
            if rng.random::<f64>() >= rate {
                *m = keep;
            }
        }
        let out = v.zip_map(&mask, |x, m| x * m);
        let rg = self.rg(a);
        Ok(self.push(out, Op::Dropout(a, mask), rg))
    }

    /// Softmax over the rows sharing a segment id, independently per column.
    pub fn segment_softmax(&mut self, a: Var, segments: Arc<[usize]>, n_segments: usize) -> Result<Var> {
        let v = self.value(a);
        if segments.len() != v.rows() {
            return Err(Error::LengthMismatch {
                expected: v.rows(),
                found: segments.len(),
            });
        }
        if let Some(&bad) = segments.iter().find(|&&s| s >= n_segments) {
            return Err(Error::NodeOutOfRange {
                index: bad,
                n: n_segments,
            });
        }
        let cols = v.cols();
        let mut max = Matrix::filled(n_segments, cols, f64::NEG_INFINITY);
        for (r, &s) in segments.iter().enumerate() {
            for c in 0..cols {
                max[(s, c)] = max[(s, c)].max(v[(r, c)]);
            }
        }
        let mut out = Matrix::zeros(v.rows(), cols);
        let mut denom = Matrix::zeros(n_segments, cols);
        for (r, &s) in segments.iter().enumerate() {
            for c in 0..cols {
                let e = exp(v[(r, c)] - max[(s, c)]);
                out[(r, c)] = e;
                denom[(s, c)] += e;
            }
        }
        for (r, &s) in segments.iter().enumerate() {
            for c in 0..cols {
                out[(r, c)] /= denom[(s, c)];
            }
        }
        let rg = self.rg(a);
        Ok(self.push(out, Op::SegmentSoftmax(a, segments), rg))
    }

    /// `n x 1` column of row sums.
    pub fn rowsum(&mut self, a: Var) -> Var {
        let v = self.value(a);
        let out = Matrix::from_fn(v.rows(), 1, |i, _| v.row(i).iter().sum());
        let rg = self.rg(a);
        self.push(out, Op::RowSum(a), rg)
    }

    /// `1 x c` row of column means.
    pub fn mean_rows(&mut self, a: Var) -> Var {
        let v = self.value(a);
        let n = v.rows().max(1) as f64;
        let mut out = Matrix::zeros(1, v.cols());
        for i in 0..v.rows() {
            for (o, &x) in out.row_mut(0).iter_mut().zip(v.row(i)) {
                *o += x;
            }
        }
        for o in out.data_mut() {
            *o /= n;
        }
        let rg = self.rg(a);
        self.push(out, Op::MeanRows(a), rg)
    }

    /// Sum of all entries as a `1 x 1` value.
    pub fn sum(&mut self, a: Var) -> Var {
        let out = Matrix::scalar(self.value(a).sum());
        let rg = self.rg(a);
        self.push(out, Op::Sum(a), rg)
    }

    /// `s * a` for a constant sparse `s`.
    pub fn spmm(&mut self, s: &Arc<SparseMatrix>, a: Var) -> Result<Var> {
        let v = self.value(a);
        if s.cols() != v.rows() {
            return Err(Error::ShapeMismatch {
                op: "spmm",
                left: s.shape(),
                right: v.shape(),
            });
        }
        let out = s.spmm(v);
        let rg = self.rg(a);
        Ok(self.push(out, Op::SpMM(Arc::clone(s), a), rg))
    }

    /// Row `k` of the output is row `index[k]` of `a`.
    pub fn gather_rows(&mut self, a: Var, index: Arc<[usize]>) -> Result<Var> {
        let v = self.value(a);
        if let Some(&bad) = index.iter().find(|&&i| i >= v.rows()) {
            return Err(Error::NodeOutOfRange {
                index: bad,
                n: v.rows(),
            });
        }
        let mut out = Matrix::zeros(index.len(), v.cols());
        for (k, &i) in index.iter().enumerate() {
            out.row_mut(k).copy_from_slice(v.row(i));
        }
        let rg = self.rg(a);
        Ok(self.push(out, Op::GatherRows(a, index), rg))
    }

    /// Row `index[k]` of the `n_out`-row output accumulates row `k` of `a`.
    pub fn scatter_add_rows(&mut self, a: Var, index: Arc<[usize]>, n_out: usize) -> Result<Var> {
        let v = self.value(a);
        if index.len() != v.rows() {
            return Err(Error::LengthMismatch {
                expected: v.rows(),
                found: index.len(),
            });
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= n_out) {
            return Err(Error::NodeOutOfRange { index: bad, n: n_out });
        }
        let mut out = Matrix::zeros(n_out, v.cols());
        for (k, &i) in index.iter().enumerate() {
            for (o, &x) in out.row_mut(i).iter_mut().zip(v.row(k)) {
                *o += x;
            }
        }
        let rg = self.rg(a);
        Ok(self.push(out, Op::ScatterAddRows(a, index), rg))
    }

    /// Scales row `k` of `a` by `w[k]`, where `w` is a column vector.
    pub fn mul_col(&mut self, a: Var, w: Var) -> Result<Var> {
        let (va, vw) = (self.value(a), self.value(w));
        if vw.cols() != 1 || vw.rows() != va.rows() {
            return Err(Error::ShapeMismatch {
                op: "mul_col",
                left: va.shape(),
                right: vw.shape(),
            });
        }
        let mut out = va.clone();
        for i in 0..out.rows() {
            let s = vw[(i, 0)];
            for o in out.row_mut(i) {
                *o *= s;
            }
        }
        let rg = self.rg(a) || self.rg(w);
        Ok(self.push(out, Op::MulCol(a, w), rg))
    }

    /// Mean binary cross-entropy of probabilities `p` (a column) against
    /// `targets`, with `p` clamped to `[BCE_EPS, 1 - BCE_EPS]`.
    pub fn bce(&mut self, p: Var, targets: Arc<[f64]>) -> Result<Var> {
        let v = self.value(p);
        if v.cols() != 1 || v.rows() != targets.len() {
            return Err(Error::LengthMismatch {
                expected: v.rows() * v.cols(),
                found: targets.len(),
            });
        }
        if targets.is_empty() {
            return Err(Error::InvalidParameter("loss over zero samples".into()));
        }
        let mut total = 0.0;
        for (&pi, &y) in v.data().iter().zip(targets.iter()) {
            let pc = pi.clamp(BCE_EPS, 1.0 - BCE_EPS);
            total -= y * ln(pc) + (1.0 - y) * ln(1.0 - pc);
        }
        let out = Matrix::scalar(total / targets.len() as f64);
        let rg = self.rg(p);
        Ok(self.push(out, Op::Bce(p, targets), rg))
    }

    /// Reverse sweep from the scalar `loss`. Only leaf gradients are kept.
    pub fn backward(&self, loss: Var) -> Result<Gradients> {
        let shape = self.value(loss).shape();
        if shape != (1, 1) {
            return Err(Error::NonScalarRoot(shape));
        }
        let mut grads: Vec<Option<Matrix>> = vec![None; loss.0 + 1];
        grads[loss.0] = Some(Matrix::scalar(1.0));
        for i in (0..=loss.0).rev() {
            let node = &self.nodes[i];
            if !node.requires_grad {
                grads[i] = None;
                continue;
            }
            let Some(g) = grads[i].take() else { continue };
            if matches!(node.op, Op::Leaf) {
                grads[i] = Some(g);
                continue;
            }
            self.propagate(node, &g, &mut grads);
        }
        Ok(Gradients { grads })
    }

    fn accumulate(&self, grads: &mut [Option<Matrix>], v: Var, delta: Matrix) {
        if !self.rg(v) {
            return;
        }
        match &mut grads[v.0] {
            Some(existing) => existing.add_assign(&delta),
            slot @ None => *slot = Some(delta),
        }
    }

    fn propagate(&self, node: &Node, g: &Matrix, grads: &mut [Option<Matrix>]) {
        let y = &node.value;
        match &node.op {
            Op::Leaf => {}
            Op::MatMul(a, b) => {
                if self.rg(*a) {
                    self.accumulate(grads, *a, g.matmul_nt(self.value(*b)));
                }
                if self.rg(*b) {
                    self.accumulate(grads, *b, self.value(*a).matmul_tn(g));
                }
            }
            Op::Add(a, b) => {
                self.accumulate(grads, *a, g.clone());
                self.accumulate(grads, *b, g.clone());
            }
            Op::AddRow(a, b) => {
                self.accumulate(grads, *a, g.clone());
                if self.rg(*b) {
                    let mut gb = Matrix::zeros(1, g.cols());
                    for i in 0..g.rows() {
                        for (o, &x) in gb.row_mut(0).iter_mut().zip(g.row(i)) {
                            *o += x;
                        }
                    }
                    self.accumulate(grads, *b, gb);
                }
            }
            Op::Mul(a, b) => {
                if self.rg(*a) {
                    self.accumulate(grads, *a, g.zip_map(self.value(*b), |x, y| x * y));
                }
                if self.rg(*b) {
                    self.accumulate(grads, *b, g.zip_map(self.value(*a), |x, y| x * y));
                }
            }
            Op::Scale(a, s) => self.accumulate(grads, *a, g.map(|x| s * x)),
            Op::ConcatCols(parts) => {
                let mut offset = 0;
                for &p in parts {
                    let cols = self.value(p).cols();
                    if self.rg(p) {
                        let part = Matrix::from_fn(g.rows(), cols, |i, j| g[(i, offset + j)]);
                        self.accumulate(grads, p, part);
                    }
                    offset += cols;
                }
            }
            Op::Relu(a) => {
                let x = self.value(*a);
                self.accumulate(grads, *a, g.zip_map(x, |g, x| if x > 0.0 { g } else { 0.0 }));
            }
            Op::Elu(a) => {
                let x = self.value(*a);
                let mut d = g.zip_map(x, |g, x| if x > 0.0 { g } else { 0.0 });
                for ((o, &gv), &yv) in d.data_mut().iter_mut().zip(g.data()).zip(y.data()) {
                    if yv <= 0.0 {
                        *o = gv * (yv + 1.0);
                    }
                }
                self.accumulate(grads, *a, d);
            }
            Op::LeakyRelu(a, slope) => {
                let x = self.value(*a);
                self.accumulate(grads, *a, g.zip_map(x, |g, x| if x > 0.0 { g } else { slope * g }));
            }
            Op::Sigmoid(a) => self.accumulate(grads, *a, g.zip_map(y, |g, s| g * s * (1.0 - s))),
            Op::Dropout(a, mask) => self.accumulate(grads, *a, g.zip_map(mask, |g, m| g * m)),
            Op::SegmentSoftmax(a, segments) => {
                let n_segments = segments.iter().copied().max().map_or(0, |m| m + 1);
                let cols = y.cols();
                let mut weighted = Matrix::zeros(n_segments, cols);
                for (r, &s) in segments.iter().enumerate() {
                    for c in 0..cols {
                        weighted[(s, c)] += y[(r, c)] * g[(r, c)];
                    }
                }
                let d = Matrix::from_fn(y.rows(), cols, |r, c| {
                    y[(r, c)] * (g[(r, c)] - weighted[(segments[r], c)])
                });
                self.accumulate(grads, *a, d);
            }
            Op::RowSum(a) => {
                let x = self.value(*a);
                let d = Matrix::from_fn(x.rows(), x.cols(), |i, _| g[(i, 0)]);
                self.accumulate(grads, *a, d);
            }
            Op::MeanRows(a) => {
                let x = self.value(*a);
                let n = x.rows().max(1) as f64;
                let d = Matrix::from_fn(x.rows(), x.cols(), |_, j| g[(0, j)] / n);
                self.accumulate(grads, *a, d);
            }
            Op::Sum(a) => {
                let x = self.value(*a);
                self.accumulate(grads, *a, Matrix::filled(x.rows(), x.cols(), g[(0, 0)]));
            }
            Op::SpMM(s, a) => self.accumulate(grads, *a, s.spmm_t(g)),
            Op::GatherRows(a, index) => {
                if self.rg(*a) {
                    let x = self.value(*a);
                    let mut d = Matrix::zeros(x.rows(), x.cols());
                    for (k, &i) in index.iter().enumerate() {
                        for (o, &v) in d.row_mut(i).iter_mut().zip(g.row(k)) {
                            *o += v;
                        }
                    }
                    self.accumulate(grads, *a, d);
                }
            }
            Op::ScatterAddRows(a, index) => {
                if self.rg(*a) {
                    let x = self.value(*a);
                    let mut d = Matrix::zeros(x.rows(), x.cols());
                    for (k, &i) in index.iter().enumerate() {
                        d.row_mut(k).copy_from_slice(g.row(i));
                    }
                    self.accumulate(grads, *a, d);
                }
            }
            Op::MulCol(a, w) => {
                let (xa, xw) = (self.value(*a), self.value(*w));
                if self.rg(*a) {
                    let mut d = g.clone();
                    for i in 0..d.rows() {
                        let s = xw[(i, 0)];
                        for o in d.row_mut(i) {
                            *o *= s;
                        }
                    }
                    self.accumulate(grads, *a, d);
                }
                if self.rg(*w) {
                    let d = Matrix::from_fn(xa.rows(), 1, |i, _| dot(g.row(i), xa.row(i)));
                    self.accumulate(grads, *w, d);
                }
            }
            Op::Bce(p, targets) => {
                let x = self.value(*p);
                let n = targets.len() as f64;
                let scale = g[(0, 0)] / n;
                let d = Matrix::from_fn(x.rows(), 1, |i, _| {
                    let pi = x[(i, 0)];
                    if !(BCE_EPS..=1.0 - BCE_EPS).contains(&pi) {
                        return 0.0;
                    }
                    let t = targets[i];
                    scale * (-t / pi + (1.0 - t) / (1.0 - pi))
                });
                self.accumulate(grads, *p, d);
            }
        }
    }
}
