//! Flavor-only sector spaces for one to three charged subsystems.
//!
//! A `JointSpace` enumerates the blocks (charge tuple, fusion-multiplicity
//! index mu) compatible with a fixed total charge; states are stored as one
//! amplitude vector over that enumeration. Fusion-space bases are abstract
//! orthonormal labels and the first two parties fuse first; no recoupling
//! data is carried.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::charge::{ChargeSystem, SectorShape};
use crate::error::{Error, Result};
use crate::linalg::{cr, CMat, CVec};

/// One populated-able sector block of a joint space.
#[derive(Debug, Clone)]
pub struct BlockInfo {
    pub charges: Vec<usize>,
    pub mu: usize,
    pub dims: Vec<usize>,
    pub offset: usize,
    pub len: usize,
}

impl BlockInfo {
    /// Row-major amplitude index for the given per-party flavor indices.
    pub fn amp_index(&self, flavors: &[usize]) -> usize {
        debug_assert_eq!(flavors.len(), self.dims.len());
        let mut idx = 0;
        for (f, d) in flavors.iter().zip(&self.dims) {
            debug_assert!(*f < *d);
            idx = idx * d + f;
        }
        self.offset + idx
    }
}

/// The joint Hilbert space of 1..=3 charged subsystems with definite total
/// charge, decomposed into sector blocks.
#[derive(Debug)]
pub struct JointSpace {
    pub system: Arc<ChargeSystem>,
    pub shapes: Vec<SectorShape>,
    pub total: usize,
    pub blocks: Vec<BlockInfo>,
    pub dim: usize,
    index: BTreeMap<(Vec<usize>, usize), usize>,
}

impl JointSpace {
    pub fn new(
        system: Arc<ChargeSystem>,
        shapes: Vec<SectorShape>,
        total: usize,
    ) -> Result<Arc<JointSpace>> {
        let arity = shapes.len();
        if !(1..=3).contains(&arity) {
            return Err(Error::InvalidArgument(
                "joint spaces support 1 to 3 parties".into(),
            ));
        }
        if total >= system.n_charges() {
            return Err(Error::InvalidArgument("total charge out of range".into()));
        }
        let k = system.n_charges();
        let mut blocks = Vec::new();
        let mut index = BTreeMap::new();
        let mut offset = 0usize;
        let mut tuple = vec![0usize; arity];
        loop {
            let dims: Vec<usize> = tuple
                .iter()
                .zip(&shapes)
                .map(|(&q, s)| s.dim(q))
                .collect();
            if dims.iter().all(|&d| d > 0) {
                let mult = system.joint_multiplicity(&tuple, total) as usize;
                for mu in 0..mult {
                    let len: usize = dims.iter().product();
                    index.insert((tuple.clone(), mu), blocks.len());
                    blocks.push(BlockInfo {
                        charges: tuple.clone(),
                        mu,
                        dims: dims.clone(),
                        offset,
                        len,
                    });
                    offset += len;
                }
            }
            // Lexicographic advance.
            let mut pos = arity;
            while pos > 0 {
                tuple[pos - 1] += 1;
                if tuple[pos - 1] < k {
                    break;
                }
                tuple[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
        Ok(Arc::new(JointSpace {
            system,
            shapes,
            total,
            blocks,
            dim: offset,
            index,
        }))
    }

    pub fn arity(&self) -> usize {
        self.shapes.len()
    }

    pub fn block(&self, charges: &[usize], mu: usize) -> Option<&BlockInfo> {
        self.index
            .get(&(charges.to_vec(), mu))
            .map(|&i| &self.blocks[i])
    }

    pub fn same_structure(&self, other: &JointSpace) -> bool {
        self.total == other.total
            && self.shapes == other.shapes
            && Arc::ptr_eq(&self.system, &other.system)
    }
}

/// A pure, possibly subnormalized state over a joint space. The squared norm
/// is the probability that the protocol carrying the state has not aborted.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub space: Arc<JointSpace>,
    pub amps: CVec,
}

impl SectorState {
    pub fn zero(space: Arc<JointSpace>) -> Self {
        let dim = space.dim;
        SectorState {
            space,
            amps: CVec::zeros(dim),
        }
    }

    /// Bipartite state from per-block matrices (rows: party-0 flavor,
    /// columns: party-1 flavor).
    pub fn from_blocks2(
        space: Arc<JointSpace>,
        blocks: &[(Vec<usize>, usize, CMat)],
    ) -> Result<Self> {
        if space.arity() != 2 {
            return Err(Error::InvalidArgument("from_blocks2 needs 2 parties".into()));
        }
        let mut st = SectorState::zero(space);
        for (charges, mu, m) in blocks {
            let b = st
                .space
                .block(charges, *mu)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "block {charges:?} mu={mu} not allowed by fusion"
                    ))
                })?
                .clone();
            if m.nrows() != b.dims[0] || m.ncols() != b.dims[1] {
                return Err(Error::DimensionMismatch(format!(
                    "block {charges:?}: expected {}x{}, got {}x{}",
                    b.dims[0],
                    b.dims[1],
                    m.nrows(),
                    m.ncols()
                )));
            }
            for r in 0..b.dims[0] {
                for cc in 0..b.dims[1] {
                    st.amps[b.amp_index(&[r, cc])] = m[(r, cc)];
                }
            }
        }
        Ok(st)
    }

    pub fn block_matrix(&self, b: &BlockInfo) -> CMat {
        assert_eq!(b.dims.len(), 2);
        CMat::from_fn(b.dims[0], b.dims[1], |r, cc| {
            self.amps[b.amp_index(&[r, cc])]
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn inner(&self, other: &SectorState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}

/// Conservation structure respected by a joint-space operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConservationTag {
    /// Preserves only the total charge (any block mixing allowed).
    FullyInvariant,
    /// Additionally preserves the charge of the given party.
    PreservesPartyCharge(usize),
    /// No structure promised (used for unrestricted-world data).
    Unrestricted,
}

/// A linear map on a joint sector space, stored dense over the block
/// enumeration together with its conservation tag.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub space: Arc<JointSpace>,
    pub mat: CMat,
    pub tag: ConservationTag,
}

impl SectorOperator {
    pub fn new(space: Arc<JointSpace>, mat: CMat, tag: ConservationTag) -> Result<Self> {
        if mat.nrows() != space.dim || mat.ncols() != space.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, space dimension {}",
                mat.nrows(),
                mat.ncols(),
                space.dim
            )));
        }
        let op = SectorOperator { space, mat, tag };
        let res = op.tag_residual();
        if res > 1e-10 {
            return Err(Error::NotInvariant(format!(
                "operator violates its conservation tag (residual {res:.2e})"
            )));
        }
        Ok(op)
    }

    /// Largest matrix element outside the block pattern allowed by the tag.
    pub fn tag_residual(&self) -> f64 {
        let party = match self.tag {
            ConservationTag::PreservesPartyCharge(i) => i,
            _ => return 0.0,
        };
        let mut worst = 0.0f64;
        for bo in &self.space.blocks {
            for bi in &self.space.blocks {
                if bo.charges[party] == bi.charges[party] {
                    continue;
                }
                for r in bo.offset..bo.offset + bo.len {
                    for cc in bi.offset..bi.offset + bi.len {
                        worst = worst.max(self.mat[(r, cc)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Checks W^dag W <= I up to `tol` (game-move contraction condition).
    pub fn is_contracting(&self, tol: f64) -> bool {
        crate::linalg::op_norm_sq(&self.mat) <= 1.0 + tol
    }

    pub fn apply(&self, st: &SectorState) -> Result<SectorState> {
        if !self.space.same_structure(&st.space) {
            return Err(Error::DimensionMismatch(
                "operator and state live on different spaces".into(),
            ));
        }
        Ok(SectorState {
            space: st.space.clone(),
            amps: &self.mat * &st.amps,
        })
    }
}

/// A charge-invariant density operator on a single party: one Hermitian PSD
/// block per charge (blocks may be subnormalized; the total trace is the
/// state weight).
#[derive(Debug, Clone)]
pub struct InvariantDensity {
    pub system: Arc<ChargeSystem>,
    pub shape: SectorShape,
    pub blocks: Vec<CMat>,
}

impl InvariantDensity {
    pub fn new(system: Arc<ChargeSystem>, shape: SectorShape, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != system.n_charges() {
            return Err(Error::DimensionMismatch(
                "need one block per charge (possibly 0x0)".into(),
            ));
        }
        for (q, b) in blocks.iter().enumerate() {
            if b.nrows() != shape.dim(q) || b.ncols() != shape.dim(q) {
                return Err(Error::DimensionMismatch(format!(
                    "block for charge {} has wrong shape",
                    system.label(q)
                )));
            }
            if !crate::linalg::is_hermitian(b, 1e-10) {
                return Err(Error::InvalidArgument(format!(
                    "density block for charge {} is not Hermitian",
                    system.label(q)
                )));
            }
        }
        Ok(InvariantDensity {
            system,
            shape,
            blocks,
        })
    }

    /// Splits a dense matrix over the single-party charge enumeration into
    /// per-charge blocks, rejecting off-diagonal (non-invariant) weight.
    pub fn from_dense(
        system: Arc<ChargeSystem>,
        shape: SectorShape,
        dense: &CMat,
        tol: f64,
    ) -> Result<Self> {
        let mut offsets = Vec::new();
        let mut dim = 0usize;
        for q in 0..system.n_charges() {
            offsets.push(dim);
            dim += shape.dim(q);
        }
        if dense.nrows() != dim || dense.ncols() != dim {
            return Err(Error::DimensionMismatch("dense density has wrong size".into()));
        }
        let mut blocks = Vec::new();
        for q in 0..system.n_charges() {
            let d = shape.dim(q);
            blocks.push(CMat::from_fn(d, d, |r, cc| {
                dense[(offsets[q] + r, offsets[q] + cc)]
            }));
        }
        // Anything connecting different charges is non-invariant.
        for q1 in 0..system.n_charges() {
            for q2 in 0..system.n_charges() {
                if q1 == q2 {
                    continue;
                }
                for r in 0..shape.dim(q1) {
                    for cc in 0..shape.dim(q2) {
                        let v = dense[(offsets[q1] + r, offsets[q2] + cc)].norm();
                        if v > tol {
                            return Err(Error::NotInvariant(format!(
                                "coherence between charges {} and {} (|entry| = {v:.2e})",
                                system.label(q1),
                                system.label(q2)
                            )));
                        }
                    }
                }
            }
        }
        InvariantDensity::new(system, shape, blocks)
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.diagonal().iter().map(|z| z.re).sum::<f64>())
            .sum()
    }

    /// Probability of finding charge q.
    pub fn charge_weight(&self, q: usize) -> f64 {
        self.blocks[q].diagonal().iter().map(|z| z.re).sum()
    }

    pub fn max_block_diff(&self, other: &InvariantDensity) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                if a.nrows() == b.nrows() {
                    crate::linalg::max_abs_diff(a, b)
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Reduced density matrix of `keep`, tracing out every other party. The
/// result is the invariant-accessible reduced state: one block per kept
/// charge (coherences between different kept charges are carried by
/// orthogonal environment sectors and vanish identically).
pub fn partial_trace(st: &SectorState, keep: usize) -> Result<InvariantDensity> {
    let space = &st.space;
    if space.arity() < 2 {
        return Err(Error::InvalidArgument("partial trace needs >= 2 parties".into()));
    }
    if keep >= space.arity() {
        return Err(Error::InvalidArgument(format!(
            "party index {keep} out of range"
        )));
    }
    let shape = space.shapes[keep].clone();
    let mut blocks: Vec<CMat> = (0..space.system.n_charges())
        .map(|q| CMat::zeros(shape.dim(q), shape.dim(q)))
        .collect();
    for b in &space.blocks {
        let q = b.charges[keep];
        let dk = b.dims[keep];
        // Stride arithmetic over the row-major block layout.
        let inner: usize = b.dims[keep + 1..].iter().product();
        let outer: usize = b.dims[..keep].iter().product();
        for o in 0..outer {
            for i in 0..inner {
                for r in 0..dk {
                    let zr = st.amps[b.offset + (o * dk + r) * inner + i];
                    if zr.norm_sqr() == 0.0 {
                        continue;
                    }
                    for cc in 0..dk {
                        let zc = st.amps[b.offset + (o * dk + cc) * inner + i];
                        blocks[q][(r, cc)] += zr * zc.conj();
                    }
                }
            }
        }
    }
    InvariantDensity::new(space.system.clone(), shape, blocks)
}

/// Purifies an invariant density with a conjugate-charge reference party.
/// Party 0 of the result is the purifier (charge dual(q), mirrored flavor
/// dimension), party 1 carries `rho`; the total charge is trivial and
/// tracing out party 0 reproduces `rho`.
pub fn purify_with_conjugate(rho: &InvariantDensity) -> Result<SectorState> {
    let system = rho.system.clone();
    let k = system.n_charges();
    let mut pur_dims = vec![0usize; k];
    for q in 0..k {
        pur_dims[q] = rho.shape.dim(system.dual(q));
    }
    let space = JointSpace::new(
        system.clone(),
        vec![SectorShape { dims: pur_dims }, rho.shape.clone()],
        system.trivial(),
    )?;
    let mut st = SectorState::zero(space);
    for q in 0..k {
        let d = rho.shape.dim(q);
        if d == 0 {
            continue;
        }
        let (w, v) = crate::linalg::hermitian_eig(&rho.blocks[q]);
        if let Some(min) = w.first() {
            if *min < -1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "density block for charge {} is not PSD (min eigenvalue {min:.2e})",
                    system.label(q)
                )));
            }
        }
        let qb = system.dual(q);
        let b = st
            .space
            .block(&[qb, q], 0)
            .ok_or_else(|| {
                Error::Truncated(format!(
                    "purifier sector ({}, {}) not available",
                    system.label(qb),
                    system.label(q)
                ))
            })?
            .clone();
        // T[a, j] = sqrt(lambda_a) V[j, a] makes tr_0 |T><T| = rho_q.
        for a in 0..d {
            let lam = w[a].max(0.0).sqrt();
            if lam == 0.0 {
                continue;
            }
            for j in 0..d {
                st.amps[b.amp_index(&[a, j])] = cr(lam) * v[(j, a)];
            }
        }
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::{from_group, octet_like, su2_truncated, u1_truncated};
    use crate::group::{cyclic, irreps_of};
    use crate::linalg::{max_abs_diff, Rng64};

    fn z2_system() -> Arc<ChargeSystem> {
        from_group(&irreps_of(&cyclic(2).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn block_enumeration() {
        // SU(2) example: H_{1/2} = H_{A,1/2} (x) (H_{B,0} + H_{B,1}).
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
        assert_eq!(space.blocks.len(), 2);
        assert_eq!(space.dim, 2);

        // Octet at total charge 8 with unit flavor dims: two fusion channels.
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
        assert_eq!(ospace.blocks[0].mu, 0);
        assert_eq!(ospace.blocks[1].mu, 1);
    }

    #[test]
    fn trace_of_product_state_is_pure() {
        let sys = z2_system();
        let space = JointSpace::new(
            sys.clone(),
            vec![
                SectorShape::new(vec![2, 0]).unwrap(),
                SectorShape::new(vec![2, 0]).unwrap(),
            ],
            sys.trivial(),
        )
        .unwrap();
        let m = CMat::from_row_slice(2, 2, &[cr(0.6), cr(0.0), cr(0.8), cr(0.0)]);
        // Product state |a> (x) |b> with a = (0.6, 0.8), b = (1, 0).
        let st = SectorState::from_blocks2(space, &[(vec![0, 0], 0, m)]).unwrap();
        let rho = partial_trace(&st, 1).unwrap();
        let (w, _) = crate::linalg::hermitian_eig(&rho.blocks[0]);
        assert!((w[1] - 1.0).abs() < 1e-12 && w[0].abs() < 1e-12);
        assert!((rho.trace() - st.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn schmidt_blocks_and_maximally_entangled() {
        // |psi0> = sum_q sqrt(p_q) sum_b sqrt(lambda_qb) |qbar,b>|q,b>.
        let sys = u1_truncated(1).unwrap();
        let zero = sys.trivial();
        let one = sys.charge_by_label("1").unwrap();
        let mone = sys.charge_by_label("-1").unwrap();
        let shape_a = SectorShape::new(vec![2, 2, 2]).unwrap();
        let shape_b = shape_a.clone();
        let space = JointSpace::new(sys.clone(), vec![shape_a, shape_b], zero).unwrap();
        let p = [0.3, 0.7];
        let lam = [[0.25, 0.75], [0.5, 0.5]];
        let mk = |pq: f64, l: [f64; 2]| {
            CMat::from_fn(2, 2, |r, cc| {
                if r == cc {
                    cr((pq * l[r]).sqrt())
                } else {
                    cr(0.0)
                }
            })
        };
        let st = SectorState::from_blocks2(
            space,
            &[
                (vec![mone, one], 0, mk(p[0], lam[0])),
                (vec![zero, zero], 0, mk(p[1], lam[1])),
            ],
        )
        .unwrap();
        let rho = partial_trace(&st, 1).unwrap();
        for (r, l) in [(one, lam[0]), (zero, lam[1])] {
            let pq = if r == one { p[0] } else { p[1] };
            for i in 0..2 {
                assert!((rho.blocks[r][(i, i)].re - pq * l[i]).abs() < 1e-12);
            }
        }
        // Maximally entangled 2-dim sector reduces to I/2.
        let space2 = JointSpace::new(
            sys.clone(),
            vec![
                SectorShape::new(vec![2, 0, 0]).unwrap(),
                SectorShape::new(vec![0, 0, 2]).unwrap(),
            ],
            zero,
        )
        .unwrap();
        let bell = CMat::from_fn(2, 2, |r, cc| if r == cc { cr(1.0 / 2f64.sqrt()) } else { cr(0.0) });
        let st2 = SectorState::from_blocks2(space2, &[(vec![mone, one], 0, bell)]).unwrap();
        let rho2 = partial_trace(&st2, 0).unwrap();
        assert!(max_abs_diff(&rho2.blocks[mone], &(CMat::identity(2, 2) * cr(0.5))) < 1e-12);
    }

    #[test]
    fn purification_round_trip() {
        let rng = Rng64::new(77);
        let sys = u1_truncated(2).unwrap();
        for trial in 0..20u64 {
            let mut rng_t = Rng64::derive(77 + trial, trial);
            let dims = vec![1usize, 2, 1, 2, 1];
            let shape = SectorShape::new(dims.clone()).unwrap();
            let mut weights: Vec<f64> = (0..5).map(|_| rng_t.uniform()).collect();
            let tot: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= tot);
            let blocks: Vec<CMat> = dims
                .iter()
                .zip(&weights)
                .map(|(&d, &w)| rng_t.density(d) * cr(w))
                .collect();
            let rho = InvariantDensity::new(sys.clone(), shape, blocks).unwrap();
            let psi = purify_with_conjugate(&rho).unwrap();
            assert_eq!(psi.space.total, sys.trivial());
            let back = partial_trace(&psi, 1).unwrap();
            assert!(rho.max_block_diff(&back) < 1e-12, "trial {trial}");
        }
        // rho = |q=0><q=0| purifies to |0>|0>.
        let shape = SectorShape::new(vec![0, 0, 1, 0, 0]).unwrap();
        let mut blocks: Vec<CMat> = (0..5).map(|_| CMat::zeros(0, 0)).collect();
        blocks[2] = CMat::from_element(1, 1, cr(1.0));
        let pure0 = InvariantDensity::new(sys.clone(), shape, blocks).unwrap();
        let psi = purify_with_conjugate(&pure0).unwrap();
        assert_eq!(psi.space.dim, 1);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let _ = rng;
    }

    #[test]
    fn dense_density_rejects_coherence() {
        let sys = z2_system();
        let shape = SectorShape::new(vec![1, 1]).unwrap();
        let mut dense = CMat::zeros(2, 2);
        dense[(0, 0)] = cr(0.5);
        dense[(1, 1)] = cr(0.5);
        dense[(0, 1)] = cr(0.5);
        dense[(1, 0)] = cr(0.5);
        let err = InvariantDensity::from_dense(sys.clone(), shape.clone(), &dense, 1e-10);
        assert!(matches!(err, Err(Error::NotInvariant(_))));
        dense[(0, 1)] = cr(0.0);
        dense[(1, 0)] = cr(0.0);
        assert!(InvariantDensity::from_dense(sys, shape, &dense, 1e-10).is_ok());
    }

    #[test]
    fn operator_tags() {
        let sys = z2_system();
        let space = JointSpace::new(
            sys.clone(),
            vec![
                SectorShape::new(vec![1, 1]).unwrap(),
                SectorShape::new(vec![1, 1]).unwrap(),
            ],
            sys.trivial(),
        )
        .unwrap();
        assert_eq!(space.dim, 2);
        // Swapping the two blocks changes both parties' charges.
        let swap = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        assert!(SectorOperator::new(
            space.clone(),
            swap.clone(),
            ConservationTag::FullyInvariant
        )
        .is_ok());
        assert!(SectorOperator::new(
            space.clone(),
            swap,
            ConservationTag::PreservesPartyCharge(1)
        )
        .is_err());
        let diag = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
        let op =
            SectorOperator::new(space, diag, ConservationTag::PreservesPartyCharge(1)).unwrap();
        assert!(op.is_contracting(1e-10));
    }
}
