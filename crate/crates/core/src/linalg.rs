//! Small dense helpers for the block-reduced quadratic problems.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Orthonormal basis (as columns) of `{ g : c · g = 0 for every row c }`.
pub fn null_space(rows: &[Vec<f64>], dim: usize) -> DMatrix<f64> {
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for r in rows {
        let mut v = DVector::from_column_slice(r);
        for q in &ortho {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
        let n = v.norm();
        if n > 1e-12 * (1.0 + DVector::from_column_slice(r).norm()) {
            ortho.push(v / n);
        }
    }
    let fixed = ortho.len();
    for i in 0..dim {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        for _ in 0..2 {
            for q in &ortho {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            ortho.push(v / n);
        }
        if ortho.len() == dim {
            break;
        }
    }
    let cols: Vec<DVector<f64>> = ortho.into_iter().skip(fixed).collect();
    if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Eigenpairs of `a z = λ d z` for symmetric `a` and positive definite `d`,
/// eigenvalues ascending, eigenvectors `d`-orthonormal columns.
pub fn generalized_eigen(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let m = a.nrows();
    if m == 0 {
        return None;
    }
    let chol = d.clone().cholesky()?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse()?;
    let mut s = &l_inv * a * l_inv.transpose();
    s = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    let vecs = l_inv.transpose() * eig.eigenvectors;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<DVector<f64>> = order.iter().map(|&i| vecs.column(i).into_owned()).collect();
    Some((values, DMatrix::from_columns(&cols)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_ones() {
        let n = null_space(&[vec![1.0, 1.0, 1.0]], 3);
        assert_eq!(n.ncols(), 2);
        for c in 0..2 {
            assert!(n.column(c).sum().abs() < 1e-12);
            assert!((n.column(c).norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(null_space(&[], 2).ncols(), 2);
        assert_eq!(null_space(&[vec![1.0, 0.0], vec![0.0, 1.0]], 2).ncols(), 0);
    }

    #[test]
    fn generalized_pairs() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let (vals, vecs) = generalized_eigen(&a, &d).unwrap();
        assert!((vals[0] - 1.5).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
        let z = vecs.column(0);
        assert!(((a * z) - (d * z) * 1.5).norm() < 1e-12);
    }
}
