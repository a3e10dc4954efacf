use crate::sparse::SparseMatrix;
use crate::C64;

/// Bilinear interpolation from an `nc x nc` grid to `(2 nc + 1) x (2 nc + 1)`.
pub fn prolongation_matrix(nc: usize) -> SparseMatrix {
    let nf = 2 * nc + 1;
    let mut t = Vec::with_capacity(9 * nc * nc);
    for jc in 0..nc {
        for ic in 0..nc {
            // coarse point (ic, jc) sits on fine interior index (2 ic + 1, 2 jc + 1)
            let (fi, fj) = (2 * ic + 1, 2 * jc + 1);
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    let w = (1.0 - 0.5 * di.abs() as f64) * (1.0 - 0.5 * dj.abs() as f64);
                    let (i, j) = ((fi as isize + di) as usize, (fj as isize + dj) as usize);
                    t.push((j * nf + i, jc * nc + ic, C64::new(w, 0.0)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(nf * nf, nc * nc, &t).expect("indices in range")
}

/// Full weighting, `P^T / 4`.
pub fn restriction_matrix(nc: usize) -> SparseMatrix {
    prolongation_matrix(nc).transpose().scaled(C64::new(0.25, 0.0))
}

pub fn prolongate(p: &SparseMatrix, coarse: &[C64]) -> Vec<C64> {
    p.matvec(coarse).expect("transfer dimensions fixed at setup")
}

pub fn restrict(r: &SparseMatrix, fine: &[C64]) -> Vec<C64> {
    r.matvec(fine).expect("transfer dimensions fixed at setup")
}
