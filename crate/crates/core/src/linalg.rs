//! Fixed-size dense linear algebra: symmetric eigenproblems by cyclic Jacobi
//! rotations and singular values by one-sided Jacobi.

use libm::{fabs, hypot, sqrt};

pub type Mat3 = [[f64; 3]; 3];

const MAX_SWEEPS: usize = 64;

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn frobenius<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> f64 {
    sqrt(m.iter().flatten().map(|x| x * x).sum())
}

/// Eigenvalues (ascending) and matching unit eigenvectors, stored as columns.
#[allow(clippy::needless_range_loop)] // Jacobi rotations read best with explicit indices
pub fn sym_eigen<const N: usize>(mut a: [[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..N).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (fabs(theta) + hypot(theta, 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / hypot(t, 1.0);
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order = [0usize; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut vals = [0.0; N];
    let mut vecs = [[0.0; N]; N];
    for (col, &src) in order.iter().enumerate() {
        vals[col] = a[src][src];
        for r in 0..N {
            vecs[r][col] = v[r][src];
        }
    }
    (vals, vecs)
}

/// Singular values (descending) of an `R x C` matrix with `R >= C`.
pub fn singular_values<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> [f64; C] {
    debug_assert!(R >= C);
    let mut a = *m;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..C {
            for q in p + 1..C {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in a.iter() {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma == 0.0 || fabs(gamma) <= 1e-15 * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (fabs(zeta) + hypot(zeta, 1.0));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / hypot(t, 1.0);
                let s = c * t;
                for row in a.iter_mut() {
                    let x = row[p];
                    let y = row[q];
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = [0.0; C];
    for (j, s) in sv.iter_mut().enumerate() {
        *s = sqrt(a.iter().map(|row| row[j] * row[j]).sum());
    }
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank: singular values above `rel_tol * largest`.
pub fn rank<const R: usize, const C: usize>(m: &[[f64; C]; R], rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let cutoff = rel_tol * sv[0];
    if sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// `(positive, negative, zero)` eigenvalue counts, zero meaning `abs(lambda) <= rel_tol * max abs(lambda)`.
pub fn signature<const N: usize>(eigenvalues: &[f64; N], rel_tol: f64) -> (usize, usize, usize) {
    let scale = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(fabs(x)));
    let cutoff = rel_tol * scale;
    eigenvalues.iter().fold((0, 0, 0), |(p, n, z), &x| {
        if scale == 0.0 || fabs(x) <= cutoff {
            (p, n, z + 1)
        } else if x > 0.0 {
            (p + 1, n, z)
        } else {
            (p, n + 1, z)
        }
    })
}

/// `J^T H J` for a change of variables `x = J x'`.
pub fn congruence<const N: usize>(h: &[[f64; N]; N], j: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut hj = [[0.0; N]; N];
    for r in 0..N {
        for c in 0..N {
            hj[r][c] = (0..N).map(|k| h[r][k] * j[k][c]).sum();
        }
    }
    let mut out = [[0.0; N]; N];
    for r in 0..N {
        for c in 0..N {
            out[r][c] = (0..N).map(|k| j[k][r] * hj[k][c]).sum();
        }
    }
    out
}
