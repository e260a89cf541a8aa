use super::linalg::{null_space, unvectorize, RANK_TOL};
use super::CMatrix;
use num_complex::Complex64;

/// vec(XM − MX) = (Mᵀ ⊗ I − I ⊗ M) vec(X), column-major.
fn commutator_system(m: &CMatrix, n: usize) -> CMatrix {
    let nn = n * n;
    let mut system = CMatrix::zeros(nn, nn);
    for a in 0..n {
        for b in 0..n {
            let col = b * n + a; // X[a,b]
            for i in 0..n {
                // (XM)[a,i] gets X[a,b]·M[b,i]
                let v = m[(b, i)];
                if v != Complex64::new(0.0, 0.0) {
                    system[(i * n + a, col)] += v;
                }
                // (MX)[i,b] gets M[i,a]·X[a,b]
                let w = m[(i, a)];
                if w != Complex64::new(0.0, 0.0) {
                    system[(b * n + i, col)] -= w;
                }
            }
        }
    }
    system
}

/// Orthonormal (Frobenius) basis of {X : XM = MX for all M in `mats`}. The
/// solution space is cut down one matrix at a time, so each SVD is only as wide
/// as the space that survived the previous constraints.
pub fn commutant(mats: &[CMatrix], n: usize) -> Vec<CMatrix> {
    let mut basis = CMatrix::identity(n * n, n * n);
    for m in mats {
        if basis.ncols() == 0 {
            break;
        }
        let restricted = commutator_system(m, n) * &basis;
        basis = &basis * null_space(&restricted, RANK_TOL);
    }
    (0..basis.ncols()).map(|c| unvectorize(basis.column(c).as_slice(), n, n)).collect()
}

/// The double commutant of the span of `mats`.
pub fn double_commutant(mats: &[CMatrix], n: usize) -> Vec<CMatrix> {
    commutant(&commutant(mats, n), n)
}
