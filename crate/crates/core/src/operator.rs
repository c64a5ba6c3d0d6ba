//! Symmetric tridiagonal (Jacobi) operators exposed as pure index → value
//! maps, so truncation order is always a caller decision.

use std::sync::Arc;

type Seq = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A semi-infinite symmetric tridiagonal operator: diagonal a_n and
/// off-diagonal b_n (a single b_n serves row n and row n+1, so the matrix is
/// symmetric by construction).
#[derive(Clone)]
pub struct TridiagonalOperator {
    diag: Seq,
    offdiag: Seq,
}

impl TridiagonalOperator {
    pub fn from_fns<D, O>(diag: D, offdiag: O) -> Self
    where
        D: Fn(usize) -> f64 + Send + Sync + 'static,
        O: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            diag: Arc::new(diag),
            offdiag: Arc::new(offdiag),
        }
    }

    /// Diagonal element a_n.
    pub fn diag(&self, n: usize) -> f64 {
        (self.diag)(n)
    }

    /// Off-diagonal element b_n, coupling basis states n and n+1.
    pub fn offdiag(&self, n: usize) -> f64 {
        (self.offdiag)(n)
    }

    /// Leading n×n truncation as dense diagonal/off-diagonal arrays.
    pub fn truncation(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let diag = (0..n).map(|i| self.diag(i)).collect();
        let offdiag = (0..n.saturating_sub(1)).map(|i| self.offdiag(i)).collect();
        (diag, offdiag)
    }

    /// A copy with one off-diagonal element replaced. Used by the negative
    /// verification path to confirm that a corrupted operator is caught.
    pub fn with_offdiag_override(&self, index: usize, value: f64) -> Self {
        let inner = self.offdiag.clone();
        Self {
            diag: self.diag.clone(),
            offdiag: Arc::new(move |n| if n == index { value } else { inner(n) }),
        }
    }

    /// Apply the truncated operator to a coefficient vector:
    /// (Hv)_n = b_{n−1} v_{n−1} + a_n v_n + b_n v_{n+1}, entries beyond the
    /// vector treated as zero. The last entry of the result is contaminated
    /// by the truncation tail, which is the caller's concern.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag(i) * v[i];
                if i > 0 {
                    acc += self.offdiag(i - 1) * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag(i) * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

impl std::fmt::Debug for TridiagonalOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (d, e) = self.truncation(4);
        f.debug_struct("TridiagonalOperator")
            .field("diag[0..4]", &d)
            .field("offdiag[0..3]", &e)
            .finish()
    }
}
