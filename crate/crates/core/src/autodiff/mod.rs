//! Reverse-mode automatic differentiation over dense matrices.
//!
//! A [`Tape`] records every forward operation; [`Tape::backward`] walks it
//! in reverse and returns gradients for the trainable leaves. The only sparse
//! operation is a constant sparse matrix times a dense value, which is all
//! graph propagation needs.

mod adam;
mod matrix;
mod tape;

pub use adam::AdamState;
pub use matrix::{dot, Matrix, SparseMatrix};
pub use tape::{Gradients, Tape, Var, BCE_EPS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::sync::Arc;
    use alloc::vec;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn activation_values() {
        let mut t = Tape::new();
        let x = t.constant(m(&[&[0.0, -1.0, 2.0]]));
        let s = t.sigmoid(x);
        assert_eq!(t.value(s)[(0, 0)], 0.5);
        let e = t.elu(x);
        assert!((t.value(e)[(0, 1)] - (-0.632_120_558_828_557_7)).abs() < 1e-12);
        assert!((t.value(e)[(0, 1)] + 0.632121).abs() < 1e-6);
        let r = t.relu(x);
        assert_eq!(t.value(r).row(0), &[0.0, 0.0, 2.0]);
        let l = t.leaky_relu(x, 0.2);
        assert_eq!(t.value(l).row(0), &[0.0, -0.2, 2.0]);
    }

    #[test]
    fn segment_softmax_uniform() {
        let mut t = Tape::new();
        let x = t.constant(Matrix::column(&[0.7, 0.7, 0.7]));
        let y = t.segment_softmax(x, Arc::from(vec![0, 0, 0]), 1).unwrap();
        for i in 0..3 {
            assert!((t.value(y)[(i, 0)] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bce_values() {
        let mut t = Tape::new();
        let p = t.constant(Matrix::column(&[0.5]));
        let l = t.bce(p, Arc::from(vec![1.0])).unwrap();
        assert!((t.value(l)[(0, 0)] - core::f64::consts::LN_2).abs() < 1e-15);
        let p = t.constant(Matrix::column(&[1.0, 0.0]));
        let l = t.bce(p, Arc::from(vec![1.0, 0.0])).unwrap();
        assert!(t.value(l)[(0, 0)] < 1e-6);
        let p = t.constant(Matrix::column(&[0.5, 0.5]));
        let l = t.bce(p, Arc::from(vec![1.0, 0.0])).unwrap();
        assert!((t.value(l)[(0, 0)] - core::f64::consts::LN_2).abs() < 1e-12);
        assert!(t.bce(p, Arc::from(vec![1.0])).is_err());
    }

    #[test]
    fn matmul_sum_gradient_by_hand() {
        // loss = sum(W x); d loss / d W_ij = x_j
        let mut t = Tape::new();
        let w = t.param(m(&[&[1.0, 2.0], &[3.0, 4.0]]));
        let x = t.constant(Matrix::column(&[5.0, -7.0]));
        let wx = t.matmul(w, x).unwrap();
        let loss = t.sum(wx);
        let g = t.backward(loss).unwrap();
        assert_eq!(g.get(w).unwrap(), &m(&[&[5.0, -7.0], &[5.0, -7.0]]));
        assert!(g.get(x).is_none());
    }

    #[test]
    fn constant_loss_has_zero_gradient() {
        let mut t = Tape::new();
        let w = t.param(m(&[&[1.0, 2.0]]));
        let zero = t.scale(w, 0.0);
        let loss = t.sum(zero);
        let g = t.backward(loss).unwrap();
        assert!(g.get(w).unwrap().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn backward_needs_scalar() {
        let mut t = Tape::new();
        let w = t.param(m(&[&[1.0, 2.0]]));
        assert!(matches!(t.backward(w), Err(crate::Error::NonScalarRoot((1, 2)))));
    }

    #[test]
    fn shape_errors() {
        let mut t = Tape::new();
        let a = t.param(Matrix::zeros(2, 3));
        let b = t.param(Matrix::zeros(2, 3));
        assert!(t.matmul(a, b).is_err());
        let c = t.param(Matrix::zeros(3, 2));
        assert!(t.add(a, c).is_err());
        let mut rng = seeded(0, 0);
        assert!(t.dropout(a, 1.0, true, &mut rng).is_err());
        assert!(t.dropout(a, -0.1, true, &mut rng).is_err());
    }

    #[test]
    fn dropout_eval_is_identity() {
        let mut t = Tape::new();
        let a = t.param(Matrix::filled(2, 2, 3.0));
        let mut rng = seeded(0, 0);
        assert_eq!(t.dropout(a, 0.6, false, &mut rng).unwrap(), a);
    }

    #[test]
    fn dropout_preserves_expectation() {
        let mut t = Tape::new();
        let x = t.constant(Matrix::filled(1, 100_000, 2.0));
        let mut rng = seeded(1, 0);
        let y = t.dropout(x, 0.6, true, &mut rng).unwrap();
        let mean = t.value(y).sum() / 100_000.0;
        assert!((mean - 2.0).abs() / 2.0 < 0.02, "mean {mean}");
    }

    #[test]
    fn forward_ops_do_not_mutate_inputs() {
        let mut t = Tape::new();
        let base = m(&[&[1.0, -2.0], &[0.5, 3.0]]);
        let a = t.param(base.clone());
        let r = t.relu(a);
        let s = t.sigmoid(r);
        let _ = t.mul(s, a).unwrap();
        assert_eq!(t.value(a), &base);
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let mut params = vec![m(&[&[1.0, -1.0, 0.0]])];
        let grads = vec![m(&[&[0.3, -2.0, 0.0]])];
        let mut state = AdamState::new(&params);
        state.step(&mut params, &grads, 0.01).unwrap();
        assert!((params[0][(0, 0)] - 0.99).abs() < 1e-9);
        assert!((params[0][(0, 1)] + 0.99).abs() < 1e-9);
        assert_eq!(params[0][(0, 2)], 0.0);
        assert_eq!(state.steps(), 1);
        assert!(state.step(&mut params, &[Matrix::zeros(1, 2)], 0.01).is_err());
    }

    #[test]
    fn adam_is_deterministic() {
        let run = || {
            let mut params = vec![m(&[&[1.0, 2.0]])];
            let mut state = AdamState::new(&params);
            for k in 0..10 {
                let g = params[0].map(|x| x * (k as f64 + 1.0));
                state.step(&mut params, &[g], 0.05).unwrap();
            }
            params
        };
        assert_eq!(run(), run());
    }
}
