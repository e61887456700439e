//! Dense complex linear algebra with a single notion of approximate equality.
//!
//! All rank decisions go through singular values; nothing else in the crate
//! compares floating-point matrices directly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Scalar = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

pub const ONE: Scalar = Complex64::new(1.0, 0.0);
pub const ZERO: Scalar = Complex64::new(0.0, 0.0);

/// Thresholds for entrywise equality and for rank decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps_eq: f64,
    pub eps_rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_eq: 1e-8,
            eps_rank: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eps_eq: f64, eps_rank: f64) -> Result<Self> {
        let ok = |e: f64| e > 0.0 && e < 1.0;
        if !ok(eps_eq) || !ok(eps_rank) {
            return Err(Error::InvariantViolation(format!(
                "tolerances must lie in (0, 1): eps_eq = {eps_eq}, eps_rank = {eps_rank}"
            )));
        }
        Ok(Tolerance { eps_eq, eps_rank })
    }

    pub fn scalar_eq(&self, a: Scalar, b: Scalar) -> bool {
        (a - b).norm() <= self.eps_eq
    }
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Maximum entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            context: "approx_equal",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

pub fn approx_equal(a: &CMat, b: &CMat, tol: &Tolerance) -> Result<bool> {
    Ok(max_abs_diff(a, b)? <= tol.eps_eq)
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn operator_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Rank (singular values above `eps_rank`) and an orthonormal nullspace basis.
pub fn rank_and_nullspace(a: &CMat, tol: &Tolerance) -> Result<(usize, Vec<CVec>)> {
    if !is_finite(a) {
        return Err(Error::NonFinite("rank_and_nullspace"));
    }
    let (m, n) = a.shape();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    // Pad with zero rows so the SVD yields a full n x n right factor.
    let rows = m.max(n);
    let mut padded = CMat::zeros(rows, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut rank = 0;
    let mut null = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > tol.eps_rank {
            rank += 1;
        } else {
            null.push(v_t.row(i).adjoint());
        }
    }
    Ok((rank, null))
}

pub fn rank(a: &CMat, tol: &Tolerance) -> usize {
    singular_values(a)
        .iter()
        .filter(|s| **s > tol.eps_rank)
        .count()
}

/// Orthonormal basis of the column space of `a`, via the left singular vectors.
pub fn column_space(a: &CMat, tol: &Tolerance) -> Result<Vec<CVec>> {
    if !is_finite(a) {
        return Err(Error::NonFinite("column_space"));
    }
    if a.ncols() == 0 || a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested left singular vectors");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    Ok(idx
        .into_iter()
        .filter(|&i| svd.singular_values[i] > tol.eps_rank)
        .map(|i| u.column(i).into_owned())
        .collect())
}

/// Modified Gram-Schmidt; vectors whose residual norm falls below `eps_eq`
/// are dropped.
pub fn orthonormalize(vs: &[CVec], tol: &Tolerance) -> Result<Vec<CVec>> {
    let Some(first) = vs.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let mut out: Vec<CVec> = Vec::new();
    for v in vs {
        if v.len() != n {
            return Err(Error::ShapeMismatch {
                context: "orthonormalize",
                left: (n, 1),
                right: (v.len(), 1),
            });
        }
        let mut w = v.clone();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for q in &out {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let norm = w.norm();
        if norm > tol.eps_eq {
            out.push(w / Complex64::new(norm, 0.0));
        }
    }
    Ok(out)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `Some(c)` when `a` is within `eps_eq` of `c * I`.
pub fn scalar_multiple_of_identity(a: &CMat, tol: &Tolerance) -> Option<Scalar> {
    if a.nrows() != a.ncols() {
        return None;
    }
    let n = a.nrows();
    if n == 0 {
        return None;
    }
    let c = a.trace() / Complex64::new(n as f64, 0.0);
    let target = identity(n) * c;
    match max_abs_diff(a, &target) {
        Ok(d) if d <= tol.eps_eq => Some(c),
        _ => None,
    }
}

/// `Some(c)` when `a ≈ c * b` and `b` is not negligible.
pub fn proportionality(a: &CMat, b: &CMat, tol: &Tolerance) -> Option<Scalar> {
    if a.shape() != b.shape() {
        return None;
    }
    let (idx, pivot) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    if pivot.norm() <= tol.eps_eq {
        return None;
    }
    let c = a.iter().nth(idx).copied()? / pivot;
    let scaled = b * c;
    match max_abs_diff(a, &scaled) {
        Ok(d) if d <= tol.eps_eq => Some(c),
        _ => None,
    }
}

pub fn to_pairs(a: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}

pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Schema("ragged matrix rows".into()));
    }
    let m = CMat::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
    if !is_finite(&m) {
        return Err(Error::NonFinite("matrix literal"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[i] = ONE;
        v
    }

    #[test]
    fn approx_equal_examples() {
        let tol = Tolerance::new(1e-9, 1e-9).unwrap();
        let i2 = identity(2);
        assert!(approx_equal(&i2, &i2, &tol).unwrap());
        assert!(!approx_equal(&i2, &CMat::zeros(2, 2), &tol).unwrap());
        let mut bumped = i2.clone();
        bumped[(0, 0)] += Complex64::new(1e-12, 0.0);
        assert!(approx_equal(&i2, &bumped, &tol).unwrap());
        assert!(matches!(
            approx_equal(&i2, &identity(3), &tol),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rank_nullspace_examples() {
        let tol = Tolerance::default();
        let (r, null) = rank_and_nullspace(&CMat::zeros(3, 3), &tol).unwrap();
        assert_eq!(r, 0);
        assert_eq!(null.len(), 3);
        let (r, null) = rank_and_nullspace(&identity(3), &tol).unwrap();
        assert_eq!((r, null.len()), (3, 0));

        let mut d = CMat::zeros(2, 2);
        d[(0, 0)] = ONE;
        d[(1, 1)] = Complex64::new(1e-15, 0.0);
        let (r, null) = rank_and_nullspace(&d, &tol).unwrap();
        assert_eq!(r, 1);
        assert_eq!(null.len(), 1);
        assert!((null[0][1].norm() - 1.0).abs() < 1e-12);
        assert!(null[0][0].norm() < 1e-12);

        let mut bad = identity(2);
        bad[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(rank_and_nullspace(&bad, &tol), Err(Error::NonFinite(_))));
    }

    #[test]
    fn wide_matrix_nullspace() {
        let tol = Tolerance::default();
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let (r, null) = rank_and_nullspace(&a, &tol).unwrap();
        assert_eq!((r, null.len()), (1, 2));
        for v in null {
            assert!((&a * v).norm() < 1e-12);
        }
    }

    #[test]
    fn orthonormalize_examples() {
        let tol = Tolerance::default();
        assert_eq!(orthonormalize(&[e(2, 0), e(2, 0)], &tol).unwrap().len(), 1);
        let b = orthonormalize(&[e(2, 0), e(2, 1)], &tol).unwrap();
        assert_eq!(b, vec![e(2, 0), e(2, 1)]);
        let b = orthonormalize(&[e(2, 0) + e(2, 1), e(2, 0) - e(2, 1)], &tol).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].dotc(&b[1]).norm() < 1e-12);
        assert!((b[0].norm() - 1.0).abs() < 1e-12);
    }

    fn arb_matrix() -> impl Strategy<Value = CMat> {
        (1usize..6, 1usize..6, 0usize..4).prop_flat_map(|(m, n, r)| {
            let r = r.min(m).min(n);
            (
                proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m * r),
                proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), r * n),
            )
                .prop_map(move |(a, b)| {
                    let a = CMat::from_iterator(m, r, a.into_iter().map(|(x, y)| Complex64::new(x, y)));
                    let b = CMat::from_iterator(r, n, b.into_iter().map(|(x, y)| Complex64::new(x, y)));
                    a * b
                })
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity_is_column_count(a in arb_matrix()) {
            let tol = Tolerance::default();
            let (r, null) = rank_and_nullspace(&a, &tol).unwrap();
            prop_assert_eq!(r + null.len(), a.ncols());
            for v in &null {
                prop_assert!((&a * v).norm() < 1e-8);
            }
        }

        #[test]
        fn approx_equal_reflexive_symmetric(a in arb_matrix(), b in arb_matrix()) {
            let tol = Tolerance::default();
            prop_assert!(approx_equal(&a, &a, &tol).unwrap());
            if a.shape() == b.shape() {
                prop_assert_eq!(approx_equal(&a, &b, &tol).unwrap(), approx_equal(&b, &a, &tol).unwrap());
            }
        }

        #[test]
        fn orthonormalize_gram_is_identity(a in arb_matrix()) {
            let tol = Tolerance::default();
            let cols: Vec<CVec> = a.column_iter().map(|c| c.into_owned()).collect();
            let q = orthonormalize(&cols, &tol).unwrap();
            for (i, x) in q.iter().enumerate() {
                for (j, y) in q.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((x.dotc(y) - Complex64::new(want, 0.0)).norm() < tol.eps_eq);
                }
            }
        }
    }
}
