//! Dense matrix functions used by the geometry kernels.
//!
//! `expm` is the degree-13 Padé approximant with scaling and squaring; `logm`
//! uses inverse scaling and squaring (Denman–Beavers square roots followed by a
//! Mercator series). Symmetric arguments go through the eigendecomposition
//! instead. The 3×3 Rodrigues pair is a fast path for rotations.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};

use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn skew(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a - a.transpose()) * 0.5
}

/// Matrix exponential of a general square matrix.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let nrm = norm1(a);
    if nrm == 0.0 {
        return DMatrix::identity(n, n);
    }
    let s = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * 2f64.powi(-s);
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Principal square root by the product form of the Denman–Beavers iteration.
pub fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut m = a.clone();
    let mut y = a.clone();
    for _ in 0..100 {
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular iterate in matrix square root".into()))?;
        let y_next = &y * (&id + &m_inv) * 0.5;
        let m_next = (&id * 2.0 + &m + &m_inv) * 0.25;
        let delta = norm1(&(&y_next - &y)) / norm1(&y_next).max(f64::MIN_POSITIVE);
        y = y_next;
        m = m_next;
        if delta < 1e-15 && norm1(&(&m - &id)) < 1e-14 {
            return Ok(y);
        }
    }
    if norm1(&(&m - &id)) < 1e-10 {
        Ok(y)
    } else {
        Err(Error::Numerical("matrix square root did not converge".into()))
    }
}

/// Principal matrix logarithm of a general matrix with no eigenvalues on the
/// closed negative real axis.
pub fn logm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut x = a.clone();
    let mut k = 0;
    while norm1(&(&x - &id)) > 0.25 {
        if k > 60 {
            return Err(Error::Numerical("matrix logarithm: too many square roots".into()));
        }
        x = sqrtm(&x)?;
        k += 1;
    }
    // log(I + E) = E - E^2/2 + E^3/3 - ...
    let e = &x - &id;
    let mut term = e.clone();
    let mut sum = e.clone();
    for j in 2..200 {
        term = &term * &e;
        let t = &term * (if j % 2 == 0 { -1.0 } else { 1.0 } / j as f64);
        let tn = norm1(&t);
        sum += t;
        if tn < 1e-18 * norm1(&sum).max(1e-300) || tn == 0.0 {
            break;
        }
    }
    Ok(sum * 2f64.powi(k))
}

/// Applies a scalar function to a symmetric matrix through its eigendecomposition.
pub fn sym_apply(s: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(sym(s));
    let vals = eig.eigenvalues.map(f);
    let v = &eig.eigenvectors;
    let out = v * DMatrix::from_diagonal(&vals) * v.transpose();
    sym(&out)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(s: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(sym(s)).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

fn to_m3(a: &DMatrix<f64>) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| a[(i, j)])
}

fn from_m3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
}

/// Rodrigues formula for the exponential of a 3×3 skew-symmetric matrix.
pub fn rodrigues_exp(omega: &DMatrix<f64>) -> DMatrix<f64> {
    let k = to_m3(&skew(omega));
    let w = vee(&k);
    let theta = w.norm();
    let (a, b) = if theta < 1e-4 {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    };
    let r = Matrix3::identity() + k * a + k * k * b;
    from_m3(&r)
}

/// Principal logarithm of a 3×3 rotation, returned as a skew-symmetric matrix.
pub fn rodrigues_log(rot: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let r = to_m3(rot);
    let w = vee(&((r - r.transpose()) * 0.5));
    let s = w.norm();
    let c = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = s.atan2(c);
    if theta < 1e-4 {
        let t2 = theta * theta;
        // theta / sin(theta)
        let f = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
        return Ok(from_m3(&hat(&(w * f))));
    }
    if std::f64::consts::PI - theta > 1e-4 {
        return Ok(from_m3(&hat(&(w * (theta / s)))));
    }
    // Near a half turn the skew part carries no direction; read the axis from
    // the symmetric part (R + R^T)/2 - cI = (1 - c) u u^T.
    if s < 1e-14 {
        return Err(Error::LogUndefined("rotation by pi has no unique logarithm".into()));
    }
    let b = (r + r.transpose()) * 0.5 - Matrix3::identity() * c;
    let (mut best, mut col) = (0usize, f64::NEG_INFINITY);
    for i in 0..3 {
        if b[(i, i)] > col {
            col = b[(i, i)];
            best = i;
        }
    }
    let mut u: Vector3<f64> = b.column(best).into_owned();
    u /= u.norm();
    if u.dot(&w) < 0.0 {
        u = -u;
    }
    Ok(from_m3(&hat(&(u * theta))))
}

/// Orthonormalizes the columns of `a` with a sign convention that makes the
/// diagonal of the triangular factor positive.
pub fn orthonormalize_columns(a: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = a.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols().min(r.nrows()) {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn taylor_expm(a: &DMatrix<f64>) -> DMatrix<f64> {
        let n = a.nrows();
        let mut term = DMatrix::<f64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * a / k as f64;
            sum += &term;
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_series() {
        let a = DMatrix::from_row_slice(3, 3, &[0.1, -0.7, 0.3, 0.5, 0.2, -0.4, -0.2, 0.6, -0.3]);
        let e = expm(&a);
        let t = taylor_expm(&a);
        assert!((&e - &t).norm() < 1e-13);
    }

    #[test]
    fn expm_of_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, -2.0, 7.5]));
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)], 1f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(e[(2, 2)], (-2f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(e[(3, 3)], 7.5f64.exp(), max_relative = 1e-13);
    }

    #[test]
    fn logm_inverts_expm() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, -1.1, 0.4, 1.1, 0.0, -0.9, -0.4, 0.9, 0.0]);
        let l = logm(&expm(&a)).unwrap();
        assert!((&l - &a).norm() < 1e-12, "{}", (&l - &a).norm());
    }

    #[test]
    fn rodrigues_agrees_with_general_path() {
        for &scale in &[1e-9, 1e-5, 0.3, 1.7, 3.0] {
            let w = DMatrix::from_row_slice(3, 3, &[0.0, -0.48, 0.6, 0.48, 0.0, -0.64, -0.6, 0.64, 0.0])
                * scale;
            let r1 = rodrigues_exp(&w);
            let r2 = expm(&w);
            assert!((&r1 - &r2).norm() < 1e-12);
            let l1 = rodrigues_log(&r1).unwrap();
            let l2 = logm(&r2).unwrap();
            assert!((&l1 - &l2).norm() < 1e-10, "scale {scale}: {}", (&l1 - &l2).norm());
            assert!((&l1 - &w).norm() < 1e-10);
        }
    }

    #[test]
    fn rodrigues_log_near_half_turn() {
        let theta = std::f64::consts::PI - 1e-6;
        let w = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]) * theta;
        let l = rodrigues_log(&rodrigues_exp(&w)).unwrap();
        assert!((&l - &w).norm() < 1e-8);
    }

    #[test]
    fn rodrigues_log_rejects_half_turn() {
        let r = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0]));
        assert!(matches!(rodrigues_log(&r), Err(Error::LogUndefined(_))));
    }

    #[test]
    fn sym_apply_exp_log_roundtrip() {
        let s = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let l = sym_apply(&s, f64::ln);
        let back = sym_apply(&l, f64::exp);
        assert!((&back - &s).norm() < 1e-13);
    }
}
