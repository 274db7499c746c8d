//! R-matrix bundles with their construction-time identity suite.

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank};
use crate::matrix::{leg_embed, multi_index, QMatrix};
use crate::rtable::RTable;
use crate::scalar::Scalar;
use crate::series::SeriesSpec;

#[derive(Clone, Debug)]
pub struct RMatrixBundle {
    pub spec: SeriesSpec,
    /// `R[(i,n),(j,m)] = R^{in}_{jm}`.
    pub r: QMatrix,
    pub rhat: QMatrix,
    pub r_inv: QMatrix,
    pub rhat_inv: QMatrix,
    /// `I - lambda^{-1}(Rhat - Rhat^{-1})`, O/Sp only.
    pub ehat: Option<QMatrix>,
    /// `ehat^2 = x ehat`.
    pub ehat_x: Option<Scalar>,
    /// `ehat = v w^T`, reshaped as N x N matrices `V[a][b] = v[(a,b)]`.
    pub metric_v: Option<QMatrix>,
    pub metric_w: Option<QMatrix>,
    /// Eigenvalues of Rhat, in the order they appear in the minimal polynomial.
    pub eigenvalues: Vec<Scalar>,
}

fn first_nonzero(m: &QMatrix) -> Option<String> {
    m.entries().next().map(|(i, j, v)| {
        format!(
            "{:?},{:?} = {}",
            multi_index(m.row_shape(), i),
            multi_index(m.col_shape(), j),
            v
        )
    })
}

/// Fails with the first nonzero entry of `m` as witness.
pub fn expect_zero(identity: &str, m: &QMatrix) -> Result<()> {
    match first_nonzero(m) {
        None => Ok(()),
        Some(witness) => Err(Error::Consistency {
            identity: identity.into(),
            witness,
        }),
    }
}

/// `M12 M23 M12 - M23 M12 M23` on the three-leg space.
pub fn braid_defect_of(m: &QMatrix, n: usize) -> Result<QMatrix> {
    let a = leg_embed(m, (1, 2), 3, n)?;
    let b = leg_embed(m, (2, 3), 3, n)?;
    Ok(a.mul(&b).mul(&a).sub(&b.mul(&a).mul(&b)))
}

/// `R12 R13 R23 - R23 R13 R12`.
pub fn ybe_defect_of(r: &QMatrix, n: usize) -> Result<QMatrix> {
    let r12 = leg_embed(r, (1, 2), 3, n)?;
    let r23 = leg_embed(r, (2, 3), 3, n)?;
    let p23 = leg_embed(&QMatrix::flip(n), (2, 3), 3, n)?;
    let r13 = p23.mul(&r12).mul(&p23);
    Ok(r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12)))
}

/// `prod_k (m - c_k I)`.
pub fn poly_in(m: &QMatrix, roots: &[Scalar]) -> QMatrix {
    let id = QMatrix::identity(m.row_shape().to_vec());
    roots
        .iter()
        .fold(id.clone(), |acc, c| acc.mul(&m.sub(&id.scale(c))))
}

/// Rank-one factorization `m = v w^T`; `None` unless rank is exactly one.
pub fn rank_one_factors(m: &QMatrix) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    if rank(m) != 1 {
        return None;
    }
    let (r0, c0, pivot) = m.entries().next().map(|(i, j, v)| (i, j, v.clone()))?;
    let v: Vec<Scalar> = (0..m.nrows()).map(|i| m.get(i, c0)).collect();
    let inv = pivot.inv().ok()?;
    let w: Vec<Scalar> = (0..m.ncols()).map(|j| &m.get(r0, j) * &inv).collect();
    Some((v, w))
}

fn reshape(vec: &[Scalar], n: usize) -> QMatrix {
    let mut out = QMatrix::square_zeros(vec![n]);
    for (k, x) in vec.iter().enumerate() {
        out.set(k / n, k % n, x.clone());
    }
    out
}

pub fn build_rmatrix(spec: &SeriesSpec) -> Result<RMatrixBundle> {
    build_rmatrix_from(spec, &RTable::shipped())
}

pub fn build_rmatrix_from(spec: &SeriesSpec, table: &RTable) -> Result<RMatrixBundle> {
    let n = spec.n;
    let r = table.build(spec);
    let p = QMatrix::flip(n);
    let rhat = p.mul(&r);
    let r_inv = inverse(&r).map_err(|e| Error::Consistency {
        identity: "R invertible".into(),
        witness: e.to_string(),
    })?;
    let rhat_inv = r_inv.mul(&p);
    let id = QMatrix::identity(vec![n, n]);
    expect_zero("R R^-1 = I", &r.mul(&r_inv).sub(&id))?;
    expect_zero("Rhat Rhat^-1 = I", &rhat.mul(&rhat_inv).sub(&id))?;
    expect_zero("Yang-Baxter equation", &ybe_defect_of(&r, n)?)?;
    expect_zero("braid relation", &braid_defect_of(&rhat, n)?)?;

    let q = spec.q.clone();
    let mq_inv = -spec.q_inv();
    let mut bundle = RMatrixBundle {
        spec: spec.clone(),
        r,
        rhat,
        r_inv,
        rhat_inv,
        ehat: None,
        ehat_x: None,
        metric_v: None,
        metric_w: None,
        eigenvalues: vec![q.clone(), mq_inv.clone()],
    };
    if spec.series.is_a() {
        expect_zero(
            "Hecke relation",
            &poly_in(&bundle.rhat, &bundle.eigenvalues),
        )?;
        return Ok(bundle);
    }

    let mu = spec.mu.clone().expect("mu for O/Sp");
    let mu_inv = mu.inv()?;
    bundle.eigenvalues.push(mu_inv.clone());
    expect_zero(
        "cubic minimal polynomial",
        &poly_in(&bundle.rhat, &bundle.eigenvalues),
    )?;

    let lam_inv = spec.lambda.inv()?;
    let ehat = id.sub(&bundle.rhat.sub(&bundle.rhat_inv).scale(&lam_inv));
    let (v, w) = rank_one_factors(&ehat).ok_or_else(|| Error::Consistency {
        identity: "ehat has rank one".into(),
        witness: format!("rank {}", rank(&ehat)),
    })?;
    // ehat^2 = (w . v) ehat
    let x: Scalar = w.iter().zip(&v).map(|(a, b)| a * b).sum();
    expect_zero("ehat^2 = x ehat", &ehat.mul(&ehat).sub(&ehat.scale(&x)))?;
    expect_zero(
        "Rhat ehat = mu^-1 ehat",
        &bundle.rhat.mul(&ehat).sub(&ehat.scale(&mu_inv)),
    )?;
    let want_x = Scalar::one() - (&mu_inv - &mu) * lam_inv;
    if x != want_x {
        return Err(Error::Consistency {
            identity: "ehat trace".into(),
            witness: format!("x = {x}"),
        });
    }
    bundle.metric_v = Some(reshape(&v, n));
    bundle.metric_w = Some(reshape(&w, n));
    bundle.ehat = Some(ehat);
    bundle.ehat_x = Some(x);
    Ok(bundle)
}

impl RMatrixBundle {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Rank of `{Rhat, Rhat^-1, I}` as flattened vectors.
    pub fn eigen_direction_rank(&self) -> usize {
        let id = QMatrix::identity(vec![self.n(), self.n()]);
        crate::linalg::rank_of(&[self.rhat.flatten(), self.rhat_inv.flatten(), id.flatten()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_series, Series};

    #[test]
    fn gl2_is_hecke() {
        let b = build_rmatrix(&build_series(Series::GL, 2).unwrap()).unwrap();
        let q = b.spec.q.clone();
        // minimal: neither linear factor alone annihilates Rhat
        assert!(!poly_in(&b.rhat, &[q]).is_zero());
        assert!(!poly_in(&b.rhat, &[-b.spec.q_inv()]).is_zero());
        assert_eq!(b.eigen_direction_rank(), 2);
    }

    #[test]
    fn o3_and_sp4_bundles() {
        for (s, n) in [
            (Series::O, 3),
            (Series::Sp, 4),
            (Series::O, 4),
            (Series::Sp, 2),
        ] {
            let b = build_rmatrix(&build_series(s, n).unwrap()).unwrap();
            assert!(b.ehat.is_some());
        }
    }

    #[test]
    fn braid_defect_detects_perturbation() {
        let b = build_rmatrix(&build_series(Series::GL, 2).unwrap()).unwrap();
        let id = QMatrix::identity(vec![2, 2]);
        assert!(braid_defect_of(&id, 2).unwrap().is_zero());
        assert!(!braid_defect_of(&b.rhat.add(&id), 2).unwrap().is_zero());
    }
}
