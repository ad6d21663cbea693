//! Operator algebras on bipartite sector spaces and numerical commutants.
//!
//! A party's local algebra acts on its own flavor spaces, sector by sector,
//! and as the identity on everything else. The commutant is computed as the
//! null space of the commutation constraints [X, B_i] = 0, vectorized
//! column-major, with a singular-value threshold for rank decisions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{cr, hs_inner, identity, kron, null_space, zeros, CMat};
use crate::sector::space::{ConservationTag, JointSpace, SectorOperator};

/// Which algebra of a joint space to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// All operators of the form (local on party i's flavors) (x) identity.
    PartyLocal(usize),
    /// The full operator algebra of the joint space.
    FullJoint,
}

/// Commutant computations solve a dim^2-sized linear system; joint spaces
/// beyond this size are rejected.
pub const COMMUTANT_DIM_CAP: usize = 64;

/// Hilbert-Schmidt-orthonormal basis of the requested algebra, as dense
/// operators on the joint space.
pub fn algebra_basis(space: &Arc<JointSpace>, kind: AlgebraKind) -> Result<Vec<SectorOperator>> {
    let d = space.dim;
    let mut out = Vec::new();
    match kind {
        AlgebraKind::FullJoint => {
            for r in 0..d {
                for cc in 0..d {
                    let mut m = zeros(d, d);
                    m[(r, cc)] = cr(1.0);
                    out.push(SectorOperator::new(
                        space.clone(),
                        m,
                        ConservationTag::FullyInvariant,
                    )?);
                }
            }
        }
        AlgebraKind::PartyLocal(party) => {
            if party >= space.arity() {
                return Err(Error::InvalidArgument(format!(
                    "party index {party} out of range"
                )));
            }
            for q in 0..space.system.n_charges() {
                let dq = space.shapes[party].dim(q);
                if dq == 0 {
                    continue;
                }
                // Embedding weight: total dimension of the complementary
                // factors over all blocks carrying charge q at this party.
                let weight: usize = space
                    .blocks
                    .iter()
                    .filter(|b| b.charges[party] == q)
                    .map(|b| b.len / b.dims[party])
                    .sum();
                if weight == 0 {
                    continue;
                }
                let norm = cr(1.0 / (weight as f64).sqrt());
                for r in 0..dq {
                    for s in 0..dq {
                        let mut m = zeros(d, d);
                        for b in space.blocks.iter().filter(|b| b.charges[party] == q) {
                            let inner: usize = b.dims[party + 1..].iter().product();
                            let outer: usize = b.dims[..party].iter().product();
                            for o in 0..outer {
                                for i in 0..inner {
                                    let row = b.offset + (o * dq + r) * inner + i;
                                    let col = b.offset + (o * dq + s) * inner + i;
                                    m[(row, col)] = norm;
                                }
                            }
                        }
                        out.push(SectorOperator::new(
                            space.clone(),
                            m,
                            ConservationTag::PreservesPartyCharge(party),
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Commutant of a set of dense operators: an HS-orthonormal basis of all X
/// with [X, B_i] = 0 for every i.
pub fn commutant_dense(ops: &[CMat], sv_tol: f64) -> Result<Vec<CMat>> {
    let d = match ops.first() {
        Some(m) => m.nrows(),
        None => return Err(Error::InvalidArgument("empty generating set".into())),
    };
    if d > COMMUTANT_DIM_CAP {
        return Err(Error::ResourceLimit(format!(
            "commutant dimension {d} exceeds cap {COMMUTANT_DIM_CAP}"
        )));
    }
    let d2 = d * d;
    let id = identity(d);
    let mut constraints = zeros(ops.len() * d2, d2);
    for (i, b) in ops.iter().enumerate() {
        if b.nrows() != d || b.ncols() != d {
            return Err(Error::DimensionMismatch("generators differ in size".into()));
        }
        // vec(XB - BX) = (B^T (x) I - I (x) B) vec(X), column-major vec.
        let ci = kron(&b.transpose(), &id) - kron(&id, b);
        constraints.view_mut((i * d2, 0), (d2, d2)).copy_from(&ci);
    }
    let ns = null_space(&constraints, sv_tol);
    Ok(ns
        .into_iter()
        .map(|v| CMat::from_column_slice(d, d, v.as_slice()))
        .collect())
}

/// Commutant of a set of sector operators on their joint space.
pub fn commutant(
    space: &Arc<JointSpace>,
    ops: &[SectorOperator],
    sv_tol: f64,
) -> Result<Vec<SectorOperator>> {
    let mats: Vec<CMat> = ops.iter().map(|o| o.mat.clone()).collect();
    let basis = commutant_dense(&mats, sv_tol)?;
    basis
        .into_iter()
        .map(|m| SectorOperator::new(space.clone(), m, ConservationTag::FullyInvariant))
        .collect()
}

/// Worst relative residual of projecting each element of `a` onto the span
/// of `b` (0 means a's span is contained in b's).
pub fn span_containment(a: &[CMat], b: &[CMat]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    // Orthonormalize b under the HS inner product.
    let mut basis: Vec<CMat> = Vec::new();
    for m in b {
        let mut v = m.clone();
        for _ in 0..2 {
            for e in &basis {
                let ov = hs_inner(e, &v);
                v -= e * ov;
            }
        }
        let n = v.norm();
        if n > 1e-12 {
            basis.push(v / cr(n));
        }
    }
    let mut worst = 0.0f64;
    for m in a {
        let mut v = m.clone();
        for e in &basis {
            let ov = hs_inner(e, &v);
            v -= e * ov;
        }
        worst = worst.max(v.norm() / m.norm().max(1e-300));
    }
    worst
}

/// HS-linear dimension of a span.
pub fn span_dim(ops: &[CMat]) -> usize {
    let mut basis: Vec<CMat> = Vec::new();
    for m in ops {
        let mut v = m.clone();
        for _ in 0..2 {
            for e in &basis {
                let ov = hs_inner(e, &v);
                v -= e * ov;
            }
        }
        let n = v.norm();
        if n > 1e-9 {
            basis.push(v / cr(n));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::{from_group, octet_like, su2_truncated, SectorShape};
    use crate::group::{cyclic, irreps_of, s3};
    use crate::linalg::Rng64;

    fn mats(ops: &[SectorOperator]) -> Vec<CMat> {
        ops.iter().map(|o| o.mat.clone()).collect()
    }

    #[test]
    fn trivial_charge_commutant_is_other_party() {
        // For trivially charged bipartite systems, commutant(A) spans B.
        let systems = vec![
            from_group(&irreps_of(&cyclic(2).unwrap()).unwrap()).unwrap(),
            from_group(&irreps_of(&s3()).unwrap()).unwrap(),
        ];
        for sys in systems {
            let k = sys.n_charges();
            let dims: Vec<usize> = (0..k).map(|q| 1 + (q % 2)).collect();
            let shape_a = SectorShape::new(dims.clone()).unwrap();
            let shape_b = SectorShape::new((0..k).map(|q| dims[sys.dual(q)]).collect()).unwrap();
            let space =
                JointSpace::new(sys.clone(), vec![shape_a, shape_b], sys.trivial()).unwrap();
            let a = algebra_basis(&space, AlgebraKind::PartyLocal(0)).unwrap();
            let b = algebra_basis(&space, AlgebraKind::PartyLocal(1)).unwrap();
            let ap = commutant(&space, &a, 1e-8).unwrap();
            assert_eq!(ap.len(), b.len(), "{}", sys.name);
            assert!(span_containment(&mats(&ap), &mats(&b)) < 1e-8);
            assert!(span_containment(&mats(&b), &mats(&ap)) < 1e-8);
        }
    }

    #[test]
    fn su2_and_octet_dimensions() {
        let sys = su2_truncated(2).unwrap();
        let half = sys.charge_by_label("1/2").unwrap();
        let space = JointSpace::new(
            sys.clone(),
            vec![
                SectorShape::new(vec![0, 1, 0]).unwrap(),
                SectorShape::new(vec![1, 0, 1]).unwrap(),
            ],
            half,
        )
        .unwrap();
        let a = algebra_basis(&space, AlgebraKind::PartyLocal(0)).unwrap();
        let b = algebra_basis(&space, AlgebraKind::PartyLocal(1)).unwrap();
        assert_eq!(span_dim(&mats(&a)), 1);
        assert_eq!(span_dim(&mats(&b)), 2);
        let ap = commutant(&space, &a, 1e-8).unwrap();
        assert_eq!(ap.len(), 4);

        let oct = octet_like();
        let eight = oct.charge_by_label("8").unwrap();
        let ospace = JointSpace::new(
            oct.clone(),
            vec![
                SectorShape::new(vec![0, 1]).unwrap(),
                SectorShape::new(vec![0, 1]).unwrap(),
            ],
            eight,
        )
        .unwrap();
        assert_eq!(ospace.dim, 2);
        let oa = algebra_basis(&ospace, AlgebraKind::PartyLocal(0)).unwrap();
        let ob = algebra_basis(&ospace, AlgebraKind::PartyLocal(1)).unwrap();
        assert_eq!(span_dim(&mats(&oa)), 1);
        assert_eq!(span_dim(&mats(&ob)), 1);
        let oap = commutant(&ospace, &oa, 1e-8).unwrap();
        assert_eq!(oap.len(), 4);
    }

    #[test]
    fn double_commutant_recovers_subalgebra() {
        let mut rng = Rng64::new(2024);
        // Random *-subalgebras U (sum_i L(d_i) (x) I_{m_i}) U^dag.
        let patterns: Vec<Vec<(usize, usize)>> = vec![
            vec![(1, 2), (2, 1)],          // D = 4, algebra dim 5
            vec![(2, 2)],                  // D = 4, algebra dim 4
            vec![(1, 1), (1, 1), (2, 1)],  // D = 4, algebra dim 6
            vec![(3, 1), (1, 2)],          // D = 5, algebra dim 10
        ];
        for pat in patterns {
            let d: usize = pat.iter().map(|&(di, mi)| di * mi).sum();
            let u = rng.unitary(d);
            let mut gens: Vec<CMat> = Vec::new();
            let mut off = 0;
            for &(di, mi) in &pat {
                for r in 0..di {
                    for s in 0..di {
                        let mut m = zeros(d, d);
                        for rep in 0..mi {
                            m[(off + r * mi + rep, off + s * mi + rep)] = cr(1.0);
                        }
                        gens.push(&u * m * u.adjoint());
                    }
                }
                off += di * mi;
            }
            let c1 = commutant_dense(&gens, 1e-8).unwrap();
            let c2 = commutant_dense(&c1, 1e-8).unwrap();
            let expected_dim: usize = pat.iter().map(|&(di, _)| di * di).sum();
            assert_eq!(c2.len(), expected_dim);
            assert!(span_containment(&c2, &gens) < 1e-7);
            assert!(span_containment(&gens, &c2) < 1e-7);
        }
    }

    #[test]
    fn dimension_cap() {
        let big = vec![identity(COMMUTANT_DIM_CAP + 1)];
        assert!(matches!(
            commutant_dense(&big, 1e-8),
            Err(Error::ResourceLimit(_))
        ));
    }
}
