//! Thin wrappers over nalgebra's dense decompositions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::spaces::C64;

/// Right singular vectors whose singular value is within `tol_gap`
/// (relative) of the largest one.
#[derive(Debug, Clone)]
pub struct TopSingular {
    pub sigma_max: f64,
    pub basis: Vec<Vec<C64>>,
}

pub fn top_singular(mat: &DMatrix<C64>, tol_gap: f64) -> TopSingular {
    let svd = mat.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma = svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let basis = order
        .into_iter()
        .filter(|&i| sigma[i] >= sigma_max * (1.0 - tol_gap))
        .map(|i| v_t.row(i).iter().map(|z| z.conj()).collect())
        .collect();
    TopSingular { sigma_max, basis }
}

pub fn spectral_norm(mat: &DMatrix<C64>) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    mat.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &DMatrix<C64>) -> (Vec<f64>, Vec<Vec<C64>>) {
    let n = h.nrows();
    if n == 1 {
        return (vec![h[(0, 0)].re], vec![vec![C64::new(1.0, 0.0)]]);
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().cloned().collect())
        .collect();
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
pub fn lambda_max(h: &DMatrix<C64>) -> (f64, Vec<C64>) {
    let (mut vals, mut vecs) = hermitian_eigen(h);
    (vals.pop().unwrap_or(0.0), vecs.pop().unwrap_or_default())
}

/// `(e^{-i theta} B + e^{i theta} B*) / 2`.
pub fn rotated_hermitian_part(b: &DMatrix<C64>, theta: f64) -> DMatrix<C64> {
    let rot = C64::from_polar(1.0, -theta);
    let m = b * rot;
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// `x* B x`.
pub fn quadratic_form(b: &DMatrix<C64>, x: &[C64]) -> C64 {
    let v = DVector::from_column_slice(x);
    (v.adjoint() * b * &v)[(0, 0)]
}

/// `V* M V` with the vectors of `basis` as the columns of `V`.
pub fn compress(m: &DMatrix<C64>, basis: &[Vec<C64>]) -> DMatrix<C64> {
    let v = basis_matrix(basis);
    v.adjoint() * m * v
}

pub fn basis_matrix(basis: &[Vec<C64>]) -> DMatrix<C64> {
    let n = basis.first().map_or(0, |b| b.len());
    DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i])
}

/// `V z` for `V` given by its columns.
pub fn lift(basis: &[Vec<C64>], z: &[C64]) -> Vec<C64> {
    let n = basis.first().map_or(0, |b| b.len());
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (col, &c) in basis.iter().zip(z) {
        for (o, &v) in out.iter_mut().zip(col) {
            *o += v * c;
        }
    }
    out
}

/// Rotates a vector that is real up to a global phase back onto the reals.
pub fn realify(v: &mut [C64]) {
    if let Some(&lead) = v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if lead.norm() > 0.0 {
            let phase = lead.conj() / lead.norm();
            for z in v.iter_mut() {
                *z = C64::new((*z * phase).re, 0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real(rows: usize, cols: usize, v: &[f64]) -> DMatrix<C64> {
        DMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn top_singular_detects_ties() {
        let top = top_singular(&real(3, 3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]), 1e-8);
        assert_abs_diff_eq!(top.sigma_max, 2.0, epsilon = 1e-14);
        assert_eq!(top.basis.len(), 2);
        let top = top_singular(&real(2, 2, &[2.0, 0.0, 0.0, 1.0]), 1e-8);
        assert_eq!(top.basis.len(), 1);
        assert_abs_diff_eq!(top.basis[0][0].norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rotated_part_of_diag_i() {
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.0, 1.0), C64::new(0.0, -1.0)]));
        let theta = 0.7f64;
        let (l, _) = lambda_max(&rotated_hermitian_part(&b, theta));
        assert_abs_diff_eq!(l, theta.sin().abs(), epsilon = 1e-14);
    }
}
