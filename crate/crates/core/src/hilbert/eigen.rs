//! Jacobi-rotation solvers: two-sided for Hermitian eigenproblems, one-sided
//! (Hestenes) for singular value decompositions.

use alloc::vec::Vec;

use super::matrix::{inner, norm, CMatrix, C64, ONE, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

fn off_diagonal_sq(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalizes the Hermitian part of `m` by cyclic complex Jacobi rotations.
///
/// Eigenvectors inside a cluster of eigenvalues closer than `degeneracy_tol`
/// are replaced by the Gram-Schmidt image of the standard basis projected into
/// that eigenspace, and every eigenvector is phased so that its first
/// non-negligible amplitude is real and positive.
pub fn hermitian_eigen(m: &CMatrix, degeneracy_tol: f64) -> HermitianEigen {
    assert!(m.is_square(), "eigenproblem needs a square matrix");
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().powi(2);

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_sq(&a);
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let magnitude = apq.norm();
                if magnitude == 0.0 {
                    continue;
                }
                let phase = apq / magnitude;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * magnitude);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p, q).
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                rotate(&mut a, &mut v, p, q, [jpp, jpq, jqp, jqq]);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n).map(|i| (a[(i, i)].re, v.column(i))).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (values, vectors): (Vec<f64>, Vec<Vec<C64>>) = pairs.into_iter().unzip();
    let vectors = canonicalize(&values, vectors, degeneracy_tol);
    HermitianEigen { values, vectors }
}

/// `A <- J† A J`, `V <- V J` for a rotation confined to indices `p`, `q`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, j: [C64; 4]) {
    let [jpp, jpq, jqp, jqq] = j;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

fn canonicalize(values: &[f64], mut vectors: Vec<Vec<C64>>, tol: f64) -> Vec<Vec<C64>> {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end - 1] - values[end]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 {
            let cluster = &vectors[start..end];
            let projected: Vec<Vec<C64>> = (0..n)
                .map(|i| {
                    cluster.iter().fold(alloc::vec![ZERO; n], |mut acc, u| {
                        let c = u[i].conj();
                        for (a, x) in acc.iter_mut().zip(u) {
                            *a += c * x;
                        }
                        acc
                    })
                })
                .collect();
            let basis = super::matrix::orthonormalize(&projected, 1e-6);
            if basis.len() == end - start {
                for (slot, b) in vectors[start..end].iter_mut().zip(basis) {
                    *slot = b;
                }
            }
        }
        start = end;
    }
    for v in &mut vectors {
        fix_phase(v);
    }
    vectors
}

/// Rotates `v` so its first amplitude with modulus above 1e-9 is real positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-9) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Thin singular value decomposition `A = Σ_k σ_k u_k v_k†`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending; length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// Left vectors for the leading singular values; entries for vanishing
    /// singular values are zero vectors.
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

/// One-sided Jacobi SVD. Singular values are accurate to roughly machine
/// precision in absolute terms, which keeps rank decisions near zero reliable.
pub fn svd(m: &CMatrix) -> Svd {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha = inner(&a[i], &a[i]).re;
                let beta = inner(&a[j], &a[j]).re;
                let gamma = inner(&a[i], &a[j]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for cols_of in [&mut a, &mut v] {
                    let (left, right) = cols_of.split_at_mut(j);
                    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                        let yb = *y * phase;
                        let xi = *x;
                        *x = xi * c - yb * s;
                        *y = xi * s + yb * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut triples: Vec<(f64, Vec<C64>, Vec<C64>)> = a
        .into_iter()
        .zip(v)
        .map(|(col, right)| {
            let sigma = norm(&col);
            let left = if sigma > 0.0 {
                col.iter().map(|z| z / sigma).collect()
            } else {
                alloc::vec![ZERO; rows]
            };
            (sigma, left, right)
        })
        .collect();
    triples.sort_by(|x, y| y.0.total_cmp(&x.0));
    triples.truncate(rows.min(cols));
    let mut out = Svd {
        singular_values: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for (s, l, r) in triples {
        out.singular_values.push(s);
        out.left.push(l);
        out.right.push(r);
    }
    out
}
