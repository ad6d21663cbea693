//! Group-representation spaces with explicit color indices.
//!
//! Basis convention inside a charge-q sector of flavor dimension d:
//! `|q, i, a>` with color i = 0..n_q (gauge-rotated) and flavor a = 0..d
//! (acted on by physical operations), laid out color-major: index = i*d + a.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{GroupTable, IrrepSet};
use crate::linalg::{cr, identity, kron, zeros, CMat};

/// A finite-dimensional unitary representation of a finite group, given as a
/// list of (charge, flavor multiplicity) sectors.
#[derive(Debug, Clone)]
pub struct GroupRepSpace {
    pub irreps: Arc<IrrepSet>,
    pub sectors: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    dim: usize,
}

impl GroupRepSpace {
    pub fn new(irreps: Arc<IrrepSet>, sectors: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(sectors.len());
        let mut dim = 0;
        for &(q, d) in &sectors {
            offsets.push(dim);
            dim += irreps.dim(q) * d;
        }
        GroupRepSpace {
            irreps,
            sectors,
            offsets,
            dim,
        }
    }

    /// The left regular representation: every charge q with flavor
    /// multiplicity n_q.
    pub fn regular(irreps: Arc<IrrepSet>) -> Self {
        let sectors = (0..irreps.n_charges())
            .map(|q| (q, irreps.dim(q)))
            .collect();
        GroupRepSpace::new(irreps, sectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &GroupTable {
        &self.irreps.group
    }

    pub fn sector_offset(&self, s: usize) -> usize {
        self.offsets[s]
    }

    pub fn index(&self, sector: usize, color: usize, flavor: usize) -> usize {
        let (_, d) = self.sectors[sector];
        self.offsets[sector] + color * d + flavor
    }

    /// Gauge action U(g) = direct sum over sectors of D^q(g) (x) I_flavor.
    pub fn gauge_matrix(&self, g: usize) -> CMat {
        let mut m = zeros(self.dim, self.dim);
        for (s, &(q, d)) in self.sectors.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let block = kron(self.irreps.irreps[q].mat(g), &identity(d));
            let off = self.offsets[s];
            let n = block.nrows();
            m.view_mut((off, off), (n, n)).copy_from(&block);
        }
        m
    }

    /// Group average (1/n_G) sum_g U(g) m U(g)^dag. Kills coherences between
    /// distinct charges and averages away the color dependence.
    pub fn twirl(&self, m: &CMat) -> CMat {
        let n_g = self.group().order();
        let mut acc = zeros(self.dim, self.dim);
        for g in 0..n_g {
            let u = self.gauge_matrix(g);
            acc += &u * m * u.adjoint();
        }
        acc / cr(n_g as f64)
    }

    /// Max-norm residual of [m, U(g)] over the group.
    pub fn invariance_residual(&self, m: &CMat) -> f64 {
        self.group()
            .elements()
            .map(|g| {
                let u = self.gauge_matrix(g);
                crate::linalg::max_abs(&(&u * m - m * &u))
            })
            .fold(0.0, f64::max)
    }
}

/// The regular representation with its two distinguished bases: the group
/// element basis {|phi>} and the charge basis {|q,i,a>}, related by the
/// Fourier transform F[(q,i,a), phi] = sqrt(n_q/n_G) D^q_{ia}(phi).
#[derive(Debug, Clone)]
pub struct RegularRepSpace {
    pub space: GroupRepSpace,
    pub fourier: CMat,
}

/// Builds the Fourier transform of the regular representation and checks its
/// unitarity against the grand orthogonality relations.
pub fn fourier_regular(irreps: Arc<IrrepSet>) -> Result<RegularRepSpace> {
    let n_g = irreps.group.order();
    let space = GroupRepSpace::regular(irreps.clone());
    if space.dim() != n_g {
        return Err(Error::InconsistentIrreps(format!(
            "regular representation dimension {} != group order {n_g}",
            space.dim()
        )));
    }
    let mut f = zeros(n_g, n_g);
    for (s, &(q, _)) in space.sectors.iter().enumerate() {
        let n_q = irreps.dim(q);
        let w = cr((n_q as f64 / n_g as f64).sqrt());
        for i in 0..n_q {
            for a in 0..n_q {
                let row = space.index(s, i, a);
                for phi in 0..n_g {
                    f[(row, phi)] = w * irreps.irreps[q].mat(phi)[(i, a)];
                }
            }
        }
    }
    let residual = crate::linalg::max_abs_diff(&(&f * f.adjoint()), &identity(n_g));
    if residual > 1e-12 {
        return Err(Error::InconsistentIrreps(format!(
            "Fourier transform not unitary (residual {residual:.2e})"
        )));
    }
    Ok(RegularRepSpace { space, fourier: f })
}

impl RegularRepSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn group(&self) -> &GroupTable {
        self.space.group()
    }

    /// U(g)|phi> = |g phi> in the group-element basis.
    pub fn left_action_group_basis(&self, g: usize) -> CMat {
        let n = self.dim();
        let mut m = zeros(n, n);
        for phi in 0..n {
            m[(self.group().mul(g, phi), phi)] = cr(1.0);
        }
        m
    }

    /// V(h)|phi> = |phi h^{-1}> in the group-element basis.
    pub fn right_action_group_basis(&self, h: usize) -> CMat {
        let n = self.dim();
        let hinv = self.group().inv(h);
        let mut m = zeros(n, n);
        for phi in 0..n {
            m[(self.group().mul(phi, hinv), phi)] = cr(1.0);
        }
        m
    }

    /// Gauge action in the charge basis: acts on color indices by D^q(g).
    pub fn gauge_action(&self, g: usize) -> CMat {
        self.space.gauge_matrix(g)
    }

    /// Global action in the charge basis: acts on flavor indices by D^q(h)*.
    pub fn global_action(&self, h: usize) -> CMat {
        let mut m = zeros(self.dim(), self.dim());
        for (s, &(q, d)) in self.space.sectors.iter().enumerate() {
            let dq = self.space.irreps.irreps[q].mat(h).map(|z| z.conj());
            let block = kron(&identity(self.space.irreps.dim(q)), &dq);
            let off = self.space.sector_offset(s);
            m.view_mut((off, off), (d * d, d * d)).copy_from(&block);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::irreps_of;
    use crate::linalg::{c, max_abs, max_abs_diff, Rng64};

    fn set(gname: &str) -> Arc<IrrepSet> {
        let g = crate::group::build_group(crate::group::GroupSpec::Named(gname.into())).unwrap();
        Arc::new(irreps_of(&g).unwrap())
    }

    #[test]
    fn fourier_small_groups() {
        // Z2: Hadamard-proportional.
        let f2 = fourier_regular(set("z2")).unwrap();
        let h = CMat::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(1.0), cr(-1.0)])
            / cr(2f64.sqrt());
        assert!(max_abs_diff(&f2.fourier, &h) < 1e-14);
        // Trivial group: 1x1 identity.
        let f1 = fourier_regular(set("z1")).unwrap();
        assert!(max_abs_diff(&f1.fourier, &identity(1)) < 1e-15);
        // S3: 6x6 unitary.
        let f6 = fourier_regular(set("s3")).unwrap();
        let res = max_abs_diff(&(&f6.fourier * f6.fourier.adjoint()), &identity(6));
        assert!(res <= 1e-12);
    }

    #[test]
    fn fourier_intertwines_left_action() {
        for name in ["z2", "z3", "z4", "s3", "d4", "q8"] {
            let r = fourier_regular(set(name)).unwrap();
            for g in r.group().elements() {
                let lhs = &r.fourier * r.left_action_group_basis(g) * r.fourier.adjoint();
                let rhs = r.gauge_action(g);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "{name} g={g}");
                let lhsv = &r.fourier * r.right_action_group_basis(g) * r.fourier.adjoint();
                let rhsv = r.global_action(g);
                assert!(max_abs_diff(&lhsv, &rhsv) < 1e-12, "{name} V g={g}");
            }
        }
    }

    #[test]
    fn gauge_and_global_commute() {
        let r = fourier_regular(set("s3")).unwrap();
        assert!(max_abs_diff(&r.gauge_action(r.group().identity()), &identity(6)) < 1e-14);
        for g in r.group().elements() {
            for h in r.group().elements() {
                let u = r.gauge_action(g);
                let v = r.global_action(h);
                assert!(max_abs(&(&u * &v - &v * &u)) <= 1e-12, "g={g} h={h}");
            }
        }
    }

    #[test]
    fn z3_gauge_phases() {
        let r = fourier_regular(set("z3")).unwrap();
        let om = c(-0.5, 3f64.sqrt() / 2.0);
        let u = r.gauge_action(1);
        for q in 0..3usize {
            let expect = om.powu(q as u32);
            assert!((u[(q, q)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn flavor_operators_are_gauge_invariant() {
        let mut rng = Rng64::new(42);
        for name in ["z3", "s3", "d4"] {
            let irreps = set(name);
            let space = GroupRepSpace::regular(irreps.clone());
            // Random flavor-only operator: direct sum over q of I_color (x) M_q.
            let mut m = zeros(space.dim(), space.dim());
            for (s, &(q, d)) in space.sectors.iter().enumerate() {
                let blk = kron(&identity(irreps.dim(q)), &rng.cmat_gaussian(d, d));
                let off = space.sector_offset(s);
                m.view_mut((off, off), (blk.nrows(), blk.nrows())).copy_from(&blk);
            }
            assert!(space.invariance_residual(&m) <= 1e-12, "{name}");
        }
    }

    #[test]
    fn twirl_behaviour() {
        // Z2 on charge basis {|0>, |1>}: |+><+| twirls to I/2.
        let irreps = set("z2");
        let space = GroupRepSpace::new(irreps.clone(), vec![(0, 1), (1, 1)]);
        let plus = CMat::from_row_slice(2, 2, &[cr(0.5); 4]);
        let t = space.twirl(&plus);
        assert!(max_abs_diff(&t, &(identity(2) * cr(0.5))) < 1e-14);
        // Fixed point on invariant input and idempotence on random input.
        let mut rng = Rng64::new(9);
        let s3sp = GroupRepSpace::regular(set("s3"));
        let rho = rng.density(s3sp.dim());
        let t1 = s3sp.twirl(&rho);
        let t2 = s3sp.twirl(&t1);
        assert!(max_abs_diff(&t1, &t2) <= 1e-12);
        assert!(s3sp.invariance_residual(&t1) <= 1e-12);
    }
}
