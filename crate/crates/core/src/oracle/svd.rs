use crate::sparse::{vecops, DenseMatrix};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order, by one-sided Jacobi on the columns.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let mut a = if m.nrows() >= m.ncols() { m.clone() } else { m.adjoint() };
    let k = a.ncols();
    let tol = f64::EPSILON * (a.nrows() as f64).sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = vecops::dot(a.col(p), a.col(p)).re;
                let beta = vecops::dot(a.col(q), a.col(q)).re;
                let gamma = vecops::dot(a.col(p), a.col(q));
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..a.nrows() {
                    let x = a[(i, p)];
                    let y = a[(i, q)] * phase.conj();
                    a[(i, p)] = x * cs - y * sn;
                    a[(i, q)] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = (0..k).map(|j| vecops::norm2(a.col(j))).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// `sigma_max / sigma_min`; infinite for a singular matrix.
pub fn kappa2(m: &DenseMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}
