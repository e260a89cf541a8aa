use super::CMatrix;
use nalgebra::DVector;
use num_complex::Complex64;

/// Relative rank threshold for null spaces and spans.
pub const RANK_TOL: f64 = 1e-9;

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if rows == 0 {
        return CMatrix::identity(cols, cols);
    }
    // nalgebra returns a thin V when rows < cols; pad to get all of it
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.max();
    let cut = tol * smax.max(1.0);
    let keep: Vec<usize> = (0..cols).filter(|&i| svd.singular_values[i] <= cut).collect();
    let mut out = CMatrix::zeros(cols, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for j in 0..cols {
            out[(j, c)] = v_t[(i, j)].conj();
        }
    }
    out
}

/// Orthonormal basis (as columns) of the column span of `a`.
pub fn column_span(a: &CMatrix, tol: f64) -> CMatrix {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > tol * smax.max(1.0)).collect();
    CMatrix::from_fn(rows, keep.len(), |i, c| u[(i, keep[c])])
}

pub fn rank(a: &CMatrix, tol: f64) -> usize {
    column_span(a, tol).ncols()
}

/// Column-major vectorisation.
pub fn vectorize(m: &CMatrix) -> DVector<Complex64> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v)
}

/// Stacks vectorised matrices as columns.
pub fn stack_vectorized(ms: &[CMatrix]) -> CMatrix {
    let (r, c) = ms.first().map(|m| m.shape()).unwrap_or((0, 0));
    let mut out = CMatrix::zeros(r * c, ms.len());
    for (k, m) in ms.iter().enumerate() {
        out.column_mut(k).copy_from(&vectorize(m));
    }
    out
}

/// Orthonormal basis of the complex span of matrices of equal shape.
pub fn span_basis(ms: &[CMatrix]) -> Vec<CMatrix> {
    let Some(first) = ms.first() else { return Vec::new() };
    let (r, c) = first.shape();
    let span = column_span(&stack_vectorized(ms), RANK_TOL);
    (0..span.ncols()).map(|k| unvectorize(span.column(k).as_slice(), r, c)).collect()
}

/// A maximal linearly independent subfamily, keeping the original elements in order.
pub fn independent_subset(ms: &[CMatrix]) -> Vec<CMatrix> {
    let mut ortho: Vec<CMatrix> = Vec::new();
    let mut kept = Vec::new();
    for m in ms {
        let mut rest = m.clone();
        for b in &ortho {
            let coef = b.dotc(&rest);
            rest -= b * coef;
        }
        let nr = rest.norm();
        if nr > RANK_TOL * m.norm().max(1.0) {
            ortho.push(rest / Complex64::new(nr, 0.0));
            kept.push(m.clone());
        }
    }
    kept
}

/// Does `m` lie in the span of the orthonormal basis `basis`?
pub fn in_span(m: &CMatrix, basis: &[CMatrix], tol: f64) -> bool {
    let mut rest = m.clone();
    for b in basis {
        let coef = b.dotc(&rest);
        rest -= b * coef;
    }
    rest.norm() <= tol * m.norm().max(1.0)
}
