//! Operator-level kernels for circuit simulation.
//!
//! Operators live on `C^pre ⊗ (C^2)^{⊗n} ⊗ C^post`; qubit 0 is the most
//! significant system bit. `pre` and `post` carry untouched spectator
//! spaces such as a reference system.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{partial_trace, ComplexMatrix, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub pre: usize,
    pub qubits: usize,
    pub post: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.pre * (1usize << self.qubits) * self.post
    }

    fn qubit_stride(&self, q: usize) -> usize {
        self.post << (self.qubits - 1 - q)
    }
}

/// Row indices whose target bits are all zero, plus the offset of each
/// target-bit pattern (first target most significant).
fn groups(layout: Layout, targets: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = targets.len();
    let strides: Vec<usize> = targets.iter().map(|&t| layout.qubit_stride(t)).collect();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|g| {
            (0..k)
                .filter(|&m| (g >> (k - 1 - m)) & 1 == 1)
                .map(|m| strides[m])
                .sum()
        })
        .collect();
    let bases = (0..layout.dim())
        .filter(|&r| strides.iter().all(|&s| (r / s) % 2 == 0))
        .collect();
    (bases, offsets)
}

/// `(I ⊗ op_targets ⊗ I) · x`, for a square `op` on the target qubits.
pub(crate) fn left_apply(
    x: &ComplexMatrix,
    layout: Layout,
    targets: &[usize],
    op: &ComplexMatrix,
) -> ComplexMatrix {
    debug_assert_eq!(x.rows(), layout.dim());
    debug_assert_eq!(op.rows(), 1 << targets.len());
    let (bases, offsets) = groups(layout, targets);
    let cols = x.cols();
    let g = offsets.len();
    let src = x.as_slice();
    let mut out = ComplexMatrix::zeros(x.rows(), cols);
    let dst = out.as_mut_slice();
    let mut buf = vec![ZERO; g];
    for &base in &bases {
        for c in 0..cols {
            for (b, &off) in buf.iter_mut().zip(&offsets) {
                *b = src[(base + off) * cols + c];
            }
            for (a, &off) in offsets.iter().enumerate() {
                let row = op.row(a);
                let mut acc = ZERO;
                for (&o, &b) in row.iter().zip(&buf) {
                    acc += o * b;
                }
                dst[(base + off) * cols + c] = acc;
            }
        }
    }
    out
}

/// `op · x · op†` on the target qubits.
pub(crate) fn conjugate(
    x: &ComplexMatrix,
    layout: Layout,
    targets: &[usize],
    op: &ComplexMatrix,
) -> ComplexMatrix {
    let y = left_apply(x, layout, targets, op);
    left_apply(&y.adjoint(), layout, targets, op).adjoint()
}

/// `Σ_a A_a x A_a†` on the target qubits.
pub(crate) fn kraus_apply(
    x: &ComplexMatrix,
    layout: Layout,
    targets: &[usize],
    ops: &[ComplexMatrix],
) -> ComplexMatrix {
    let mut acc: Option<ComplexMatrix> = None;
    for a in ops {
        let term = conjugate(x, layout, targets, a);
        acc = Some(match acc {
            None => term,
            Some(s) => &s + &term,
        });
    }
    acc.unwrap_or_else(|| ComplexMatrix::zeros(x.rows(), x.cols()))
}

/// Completely depolarizing channel on `targets`: `x ↦ tr_T(x) ⊗ I_T/d`.
/// With `controlled`, `targets[0]` is the control: blocks with the control
/// at `|0⟩` on both sides are kept, blocks at `|1⟩` are depolarized on the
/// remaining targets and the off-diagonal control blocks vanish. Same map
/// as the Kraus sets, in `O(dim²)`.
pub(crate) fn depolarize(
    x: &ComplexMatrix,
    layout: Layout,
    targets: &[usize],
    controlled: bool,
) -> ComplexMatrix {
    let (bases, offsets) = groups(layout, targets);
    let g = offsets.len();
    let (keep, noisy): (Vec<usize>, Vec<usize>) = if controlled {
        ((0..g / 2).collect(), (g / 2..g).collect())
    } else {
        (Vec::new(), (0..g).collect())
    };
    let d = noisy.len() as f64;
    let n = x.rows();
    let src = x.as_slice();
    let mut out = ComplexMatrix::zeros(n, n);
    let dst = out.as_mut_slice();
    for &br in &bases {
        for &bc in &bases {
            for &a in &keep {
                for &b in &keep {
                    let (r, c) = (br + offsets[a], bc + offsets[b]);
                    dst[r * n + c] = src[r * n + c];
                }
            }
            let mut tr = ZERO;
            for &a in &noisy {
                tr += src[(br + offsets[a]) * n + bc + offsets[a]];
            }
            let v = tr / d;
            for &a in &noisy {
                dst[(br + offsets[a]) * n + bc + offsets[a]] = v;
            }
        }
    }
    out
}

/// `x ↦ x ⊗ |0⟩⟨0|` with the new qubit appended after the last system qubit.
pub(crate) fn add_ancilla(x: &ComplexMatrix, layout: Layout) -> ComplexMatrix {
    let new = Layout {
        qubits: layout.qubits + 1,
        ..layout
    };
    let map = |r: usize| {
        let q = r % layout.post;
        let hi = r / layout.post;
        (hi * 2) * layout.post + q
    };
    let n = new.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    let old = x.rows();
    let src = x.as_slice();
    let dst = out.as_mut_slice();
    let rows: Vec<usize> = (0..old).map(map).collect();
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &rj) in rows.iter().enumerate() {
            dst[ri * n + rj] = src[i * old + j];
        }
    }
    out
}

/// Partial trace over system qubit `q`.
pub(crate) fn trace_out(x: &ComplexMatrix, layout: Layout, q: usize) -> ComplexMatrix {
    let mut dims = Vec::with_capacity(layout.qubits + 2);
    dims.push(layout.pre);
    dims.extend(core::iter::repeat_n(2, layout.qubits));
    dims.push(layout.post);
    let keep: Vec<usize> = (0..dims.len()).filter(|&f| f != q + 1).collect();
    partial_trace(x, &dims, &keep).expect("layout matches operator dimension")
}

/// `x ↦ (I ⊗ |0⟩) x` on the row space only (state vectors as columns).
pub(crate) fn add_ancilla_rows(x: &ComplexMatrix, layout: Layout) -> ComplexMatrix {
    let cols = x.cols();
    let mut out = ComplexMatrix::zeros(x.rows() * 2, cols);
    let src = x.as_slice();
    let dst = out.as_mut_slice();
    for r in 0..x.rows() {
        let q = r % layout.post;
        let nr = (r / layout.post) * 2 * layout.post + q;
        dst[nr * cols..(nr + 1) * cols].copy_from_slice(&src[r * cols..(r + 1) * cols]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{controlled_depolarize_kraus, depolarizing_kraus};
    use num_complex::Complex64;

    fn operator(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(libm::sin((3 * i + 7 * j) as f64), libm::cos((i * j + 1) as f64))
        })
    }

    #[test]
    fn depolarize_matches_kraus_sets() {
        let layout = Layout {
            pre: 2,
            qubits: 3,
            post: 3,
        };
        let x = operator(layout.dim());
        let plain = depolarize(&x, layout, &[2, 0], false);
        let reference = kraus_apply(&x, layout, &[2, 0], depolarizing_kraus(4).operators());
        assert!(plain.max_abs_diff(&reference) < 1e-12);
        let controlled = depolarize(&x, layout, &[1, 2, 0], true);
        let reference = kraus_apply(&x, layout, &[1, 2, 0], controlled_depolarize_kraus(4).operators());
        assert!(controlled.max_abs_diff(&reference) < 1e-12);
    }
}
