//! Fixed-size vector and matrix helpers, a Jacobi symmetric eigensolver and
//! the 3×3 singular value decomposition built on it.

use crate::scalar::Real;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

/// Sweep cap for the cyclic Jacobi method.
pub const MAX_JACOBI_SWEEPS: usize = 50;

#[inline]
pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn scale_vec<T: Real>(k: T, a: &Vec3<T>) -> Vec3<T> {
    [k * a[0], k * a[1], k * a[2]]
}

#[inline]
pub fn add_vec<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub_vec<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn zeros<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn identity<T: Real>() -> Mat3<T> {
    diag([T::one(); 3])
}

pub fn diag<T: Real>(d: Vec3<T>) -> Mat3<T> {
    let mut m = zeros();
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

pub fn outer<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Mat3<T> {
    let mut m = zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

pub fn transpose<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let mut t = zeros();
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut c = zeros();
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn mat_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn scale_mat<T: Real>(k: T, m: &Mat3<T>) -> Mat3<T> {
    let mut r = *m;
    r.iter_mut().flatten().for_each(|x| *x = *x * k);
    r
}

pub fn add_mat<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut r = *a;
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = r[i][j] + b[i][j];
        }
    }
    r
}

pub fn frobenius_sq<T: Real>(m: &Mat3<T>) -> T {
    m.iter().flatten().fold(T::zero(), |acc, &x| acc + x * x)
}

pub fn max_abs_diff<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// Eigen-decomposition of a real symmetric `N×N` matrix by cyclic Jacobi
/// rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of the second component.
pub fn symmetric_eigen<T: Real, const N: usize>(mut a: [[T; N]; N]) -> ([T; N], [[T; N]; N]) {
    let mut v = [[T::zero(); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &x| acc + x * x)
        .sqrt();
    let two = T::lit(2.0);

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = T::zero();
        for p in 0..N {
            for q in 0..N {
                if p != q {
                    off = off + a[p][q] * a[p][q];
                }
            }
        }
        if off.sqrt() <= T::jacobi_tol() * scale || scale == T::zero() {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
                let c = T::one() / t.hypot(T::one());
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: [usize; N] = [0; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| {
        a[j][j]
            .partial_cmp(&a[i][i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = [T::zero(); N];
    let mut vectors = [[T::zero(); N]; N];
    for (col, &src) in order.iter().enumerate() {
        values[col] = a[src][src];
        for row in 0..N {
            vectors[row][col] = v[row][src];
        }
    }
    (values, vectors)
}

/// Singular values of a 3×3 matrix in descending order.
///
/// Computed as square roots of the eigenvalues of `MᵀM`.
pub fn svd3<T: Real>(m: &Mat3<T>) -> Vec3<T> {
    let gram = mat_mul(&transpose(m), m);
    let (ev, _) = symmetric_eigen(gram);
    ev.map(|x| x.max(T::zero()).sqrt())
}

/// Full decomposition `M = U·diag(s)·Vᵀ` with orthogonal `U`, `V` and
/// descending `s`.
pub fn svd3_full<T: Real>(m: &Mat3<T>) -> (Mat3<T>, Vec3<T>, Mat3<T>) {
    let gram = mat_mul(&transpose(m), m);
    let (ev, v) = symmetric_eigen(gram);
    let s = ev.map(|x| x.max(T::zero()).sqrt());
    let cols_v: [Vec3<T>; 3] = [0, 1, 2].map(|j| [v[0][j], v[1][j], v[2][j]]);
    let cutoff = T::interface_tol() * s[0].max(T::one());

    let mut cols_u: Vec<Vec3<T>> = Vec::with_capacity(3);
    for j in 0..3 {
        if s[j] > cutoff {
            let u = mat_vec(m, &cols_v[j]);
            let n = norm(&u);
            cols_u.push(scale_vec(T::one() / n, &u));
        }
    }
    complete_basis(&mut cols_u);

    let mut u = zeros();
    for j in 0..3 {
        for i in 0..3 {
            u[i][j] = cols_u[j][i];
        }
    }
    (u, s, v)
}

/// Extends up to three orthonormal vectors to a right-handed orthonormal
/// basis of R³.
fn complete_basis<T: Real>(cols: &mut Vec<Vec3<T>>) {
    let axes: [Vec3<T>; 3] = [
        [T::one(), T::zero(), T::zero()],
        [T::zero(), T::one(), T::zero()],
        [T::zero(), T::zero(), T::one()],
    ];
    if cols.is_empty() {
        cols.push(axes[0]);
    }
    if cols.len() == 1 {
        let u = cols[0];
        // Gram-Schmidt against the axis least aligned with u.
        let pick = (0..3)
            .min_by(|&i, &j| {
                u[i].abs()
                    .partial_cmp(&u[j].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let e = axes[pick];
        let w = sub_vec(&e, &scale_vec(dot(&e, &u), &u));
        cols.push(scale_vec(T::one() / norm(&w), &w));
    }
    if cols.len() == 2 {
        let w = cross(&cols[0], &cols[1]);
        cols.push(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn identity_singular_values() {
        assert_eq!(svd3(&identity::<f64>()), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_singular_values_sorted_by_magnitude() {
        let s = svd3(&diag([3.0, -2.0, 1.0]));
        assert!(approx(s[0], 3.0, 1e-14));
        assert!(approx(s[1], 2.0, 1e-14));
        assert!(approx(s[2], 1.0, 1e-14));
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(svd3(&zeros::<f64>()), [0.0; 3]);
        let (u, s, v) = svd3_full(&zeros::<f64>());
        assert_eq!(s, [0.0; 3]);
        assert!(max_abs_diff(&mat_mul(&transpose(&u), &u), &identity()) < 1e-14);
        assert!(max_abs_diff(&mat_mul(&transpose(&v), &v), &identity()) < 1e-14);
    }

    #[test]
    fn full_svd_reconstructs_rank_deficient() {
        let m = [[0.0, 0.5, 0.0], [-0.25, 0.0, 0.0], [0.0, 0.0, 0.0]];
        let (u, s, v) = svd3_full(&m);
        let rebuilt = mat_mul(&mat_mul(&u, &diag(s)), &transpose(&v));
        assert!(max_abs_diff(&rebuilt, &m) < 1e-12);
        assert!(max_abs_diff(&mat_mul(&transpose(&u), &u), &identity()) < 1e-12);
    }

    #[test]
    fn eigen_of_known_symmetric() {
        let a = [[2.0, 1.0], [1.0, 2.0]];
        let (ev, vecs) = symmetric_eigen(a);
        assert!(approx(ev[0], 3.0, 1e-14) && approx(ev[1], 1.0, 1e-14));
        let c0 = [vecs[0][0], vecs[1][0]];
        assert!(approx(c0[0].abs(), c0[1].abs(), 1e-14));
    }

    #[test]
    fn f32_singular_values() {
        let s = svd3(&diag([0.9_f32, -0.3, 0.1]));
        assert!((s[0] - 0.9).abs() < 1e-6 && (s[1] - 0.3).abs() < 1e-6);
    }
}
