//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Eigen- and
//! singular-value decompositions are computed with Jacobi iterations, which
//! give high relative accuracy for the small (dim <= a few hundred) Hermitian
//! problems that arise in sector bookkeeping, commutant computation and the
//! fidelity oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, cols: usize) -> CMat {
    CMat::zeros(r, cols)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn vec_diff_norm(a: &CVec, b: &CVec) -> f64 {
    (a - b).norm()
}

/// Hilbert-Schmidt inner product tr(a^dag b).
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    max_abs_diff(m, &m.adjoint()) <= tol
}

fn rotation_params(app: f64, aqq: f64, beta: Complex64) -> (f64, f64, Complex64) {
    // Diagonalizes the Hermitian 2x2 [[app, beta], [conj(beta), aqq]].
    // Returns (c, s, u) for the unitary with columns
    //   J e_p = c e_p - s conj(u) e_q,   J e_q = s u e_p + c e_q.
    let babs = beta.norm();
    let u = beta / babs;
    let tau = (app - aqq) / (2.0 * babs);
    let t = if tau == 0.0 {
        1.0
    } else {
        -tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt())
    };
    let cc = 1.0 / (1.0 + t * t).sqrt();
    (cc, t * cc, u)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order and the matrix of eigenvectors
/// (column k belongs to eigenvalue k), so `m = V diag(w) V^dag`.
pub fn hermitian_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eig needs a square matrix");
    let mut a = m.clone();
    let mut v = identity(n);
    if n <= 1 {
        return (a.iter().map(|z| z.re).collect(), v);
    }
    let norm = a.norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * norm;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                if beta.norm() <= tol * 1e-2 {
                    continue;
                }
                let (cc, s, u) = rotation_params(a[(p, p)].re, a[(q, q)].re, beta);
                let (cs, ss) = (cr(cc), cr(s));
                // A <- J^dag A J, V <- V J (column operations then row operations).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cs * akp - ss * u.conj() * akq;
                    a[(k, q)] = ss * u * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk - ss * u * aqk;
                    a[(q, k)] = ss * u.conj() * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - ss * u.conj() * vkq;
                    v[(k, q)] = ss * u * vkp + cs * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let w: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
    let wv: Vec<f64> = order.iter().map(|&i| w[i]).collect();
    let mut vs = zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vs.set_column(new, &v.column(old).into_owned());
    }
    (wv, vs)
}

/// Singular value decomposition `m = U diag(s) V^dag` via one-sided Jacobi.
/// `u` is m x m unitary (completed on the kernel), `v` is n x n unitary,
/// singular values are sorted descending and matched to columns of `u`/`v`.
pub fn svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = identity(n);
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let ci = a.column(i);
                let cj = a.column(j);
                let g: Complex64 = ci.iter().zip(cj.iter()).map(|(x, y)| x.conj() * y).sum();
                let ni = ci.norm_squared();
                let nj = cj.norm_squared();
                if g.norm() <= 1e-15 * (ni * nj).sqrt().max(1e-30 * scale * scale) {
                    continue;
                }
                rotated = true;
                let (cc, s, u) = rotation_params(ni, nj, g);
                let (cs, ss) = (cr(cc), cr(s));
                for k in 0..rows {
                    let aki = a[(k, i)];
                    let akj = a[(k, j)];
                    a[(k, i)] = cs * aki - ss * u.conj() * akj;
                    a[(k, j)] = ss * u * aki + cs * akj;
                }
                for k in 0..n {
                    let vki = v[(k, i)];
                    let vkj = v[(k, j)];
                    v[(k, i)] = cs * vki - ss * u.conj() * vkj;
                    v[(k, j)] = ss * u * vki + cs * vkj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Sort columns by descending singular value so the range of `m` occupies
    // the leading columns of U.
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut a_sorted = zeros(rows, n);
    let mut v_sorted = zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        a_sorted.set_column(new, &a.column(old).into_owned());
        v_sorted.set_column(new, &v.column(old).into_owned());
    }
    let (a, v) = (a_sorted, v_sorted);
    let mut u_mat = zeros(rows, rows);
    let sv_tol = 1e-14 * scale * (rows.max(n) as f64);
    let mut filled = Vec::new();
    for j in 0..n.min(rows) {
        let nj = sigma[j];
        if nj > sv_tol {
            let col = a.column(j).map(|z| z / cr(nj));
            u_mat.set_column(j, &col);
            filled.push(j);
        }
    }
    // Complete U to a unitary on the orthogonal complement.
    let mut next = 0usize;
    for j in 0..rows {
        if filled.contains(&j) {
            continue;
        }
        loop {
            assert!(next < rows + n + 1, "failed to complete unitary");
            let mut cand = CVec::zeros(rows);
            cand[next % rows] = ONE;
            next += 1;
            for &fj in &filled {
                let overlap: Complex64 = u_mat
                    .column(fj)
                    .iter()
                    .zip(cand.iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let col = u_mat.column(fj).into_owned();
                cand -= col * overlap;
            }
            let nrm = cand.norm();
            if nrm > 1e-6 {
                u_mat.set_column(j, &(cand / cr(nrm)));
                filled.push(j);
                break;
            }
        }
    }
    (u_mat, sigma, v)
}

/// Orthonormal basis of the right null space of `m`: columns v with
/// `m v ~ 0`, using singular value threshold `tol * max(1, sigma_max)`.
pub fn null_space(m: &CMat, tol: f64) -> Vec<CVec> {
    let (_, sigma, v) = svd(m);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let thresh = tol * smax.max(1.0);
    let mut out = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if s <= thresh {
            out.push(v.column(j).into_owned());
        }
    }
    out
}

/// Unitary polar factor of a square matrix: `m = P H` with `H` PSD; returns `P`.
pub fn polar_unitary(m: &CMat) -> CMat {
    let (u, _s, v) = svd(m);
    u * v.adjoint()
}

/// Sum of singular values.
pub fn nuclear_norm(m: &CMat) -> f64 {
    let (_, sigma, _) = svd(m);
    sigma.iter().sum()
}

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    let (w, _) = hermitian_eig(m);
    w.iter().map(|x| x.abs()).sum()
}

/// PSD square root (eigenvalues clamped at zero).
pub fn sqrtm_psd(m: &CMat) -> CMat {
    let (w, v) = hermitian_eig(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        w.len(),
        w.iter().map(|&x| cr(x.max(0.0).sqrt())),
    ));
    &v * d * v.adjoint()
}

/// exp(i H) for Hermitian H.
pub fn exp_i_hermitian(h: &CMat) -> CMat {
    let (w, v) = hermitian_eig(h);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        w.len(),
        w.iter().map(|&x| c(x.cos(), x.sin())),
    ));
    &v * d * v.adjoint()
}

/// Largest eigenvalue of m^dag m, i.e. squared operator norm.
pub fn op_norm_sq(m: &CMat) -> f64 {
    let (w, _) = hermitian_eig(&(m.adjoint() * m));
    w.last().copied().unwrap_or(0.0)
}

/// Modified Gram-Schmidt with a second pass; drops dependent vectors.
pub fn orthonormalize(vecs: &[CVec], tol: f64) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    for vin in vecs {
        let mut v = vin.clone();
        for _ in 0..2 {
            for b in &basis {
                let ov: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                v -= b * ov;
            }
        }
        let n = v.norm();
        if n > tol {
            basis.push(v / cr(n));
        }
    }
    basis
}

/// Deterministic random source; every experiment derives its draws from an
/// explicit 64-bit seed (per-trial streams use `derive`).
pub struct Rng64 {
    inner: ChaCha12Rng,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Stream for trial `idx`: seed XOR trial index.
    pub fn derive(seed: u64, idx: u64) -> Self {
        Rng64::new(seed ^ idx)
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.inner.gen_range(lo..=hi_inclusive)
    }

    pub fn normal(&mut self) -> f64 {
        let u1: f64 = self.inner.gen::<f64>().max(1e-300);
        let u2: f64 = self.inner.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        c(self.normal(), self.normal())
    }

    pub fn cmat_gaussian(&mut self, r: usize, cols: usize) -> CMat {
        CMat::from_fn(r, cols, |_, _| self.complex_gaussian())
    }

    pub fn cvec_unit(&mut self, n: usize) -> CVec {
        loop {
            let v = CVec::from_fn(n, |_, _| self.complex_gaussian());
            let nrm = v.norm();
            if nrm > 1e-8 {
                return v / cr(nrm);
            }
        }
    }

    /// Haar-ish random unitary: orthonormalized Gaussian columns.
    pub fn unitary(&mut self, n: usize) -> CMat {
        loop {
            let g = self.cmat_gaussian(n, n);
            let cols: Vec<CVec> = (0..n).map(|j| g.column(j).into_owned()).collect();
            let basis = orthonormalize(&cols, 1e-8);
            if basis.len() == n {
                let mut u = zeros(n, n);
                for (j, b) in basis.iter().enumerate() {
                    u.set_column(j, b);
                }
                return u;
            }
        }
    }

    /// Random density matrix (unit trace, PSD).
    pub fn density(&mut self, n: usize) -> CMat {
        let g = self.cmat_gaussian(n, n);
        let m = &g * g.adjoint();
        let tr: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
        m / tr
    }

    /// Random contracting map: Gaussian rescaled so its operator norm is
    /// `target` (drawn from (0.3, 1.0] when not supplied).
    pub fn contracting(&mut self, rows: usize, cols: usize, target: Option<f64>) -> CMat {
        let g = self.cmat_gaussian(rows, cols);
        let nrm = op_norm_sq(&g).sqrt().max(f64::MIN_POSITIVE);
        let t = target.unwrap_or_else(|| 0.3 + 0.7 * self.uniform());
        g * cr(t / nrm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(rng: &mut Rng64, n: usize) -> CMat {
        let g = rng.cmat_gaussian(n, n);
        (&g + g.adjoint()) * cr(0.5)
    }

    #[test]
    fn eig_reconstructs() {
        let mut rng = Rng64::new(11);
        for n in [1usize, 2, 3, 5, 8, 13] {
            let h = random_hermitian(&mut rng, n);
            let (w, v) = hermitian_eig(&h);
            let d = CMat::from_diagonal(&CVec::from_iterator(n, w.iter().map(|&x| cr(x))));
            let rec = &v * d * v.adjoint();
            assert!(max_abs_diff(&rec, &h) < 1e-12, "n={n}");
            assert!(max_abs_diff(&(v.adjoint() * &v), &identity(n)) < 1e-12);
            for i in 1..n {
                assert!(w[i] >= w[i - 1]);
            }
        }
    }

    #[test]
    fn svd_reconstructs_and_nullspace() {
        let mut rng = Rng64::new(7);
        for (r, cc) in [(4usize, 4usize), (6, 3), (3, 6), (5, 5)] {
            let m = rng.cmat_gaussian(r, cc);
            let (u, s, v) = svd(&m);
            let mut d = zeros(r, cc);
            for (j, &sj) in s.iter().enumerate() {
                if j < r {
                    d[(j, j)] = cr(sj);
                }
            }
            let rec = &u * d * v.adjoint();
            assert!(max_abs_diff(&rec, &m) < 1e-11, "{r}x{cc}");
            assert!(max_abs_diff(&(u.adjoint() * &u), &identity(r)) < 1e-11);
            assert!(max_abs_diff(&(v.adjoint() * &v), &identity(cc)) < 1e-11);
        }
        // Rank-1 4x4: null space must have dimension 3.
        let a = rng.cvec_unit(4);
        let b = rng.cvec_unit(4);
        let m = CMat::from_fn(4, 4, |i, j| a[i] * b[j].conj());
        let ns = null_space(&m, 1e-8);
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!((&m * v).norm() < 1e-10);
        }
    }

    #[test]
    fn polar_factor_is_unitary_and_optimal() {
        let mut rng = Rng64::new(3);
        for n in [2usize, 3, 5] {
            let m = rng.cmat_gaussian(n, n);
            let p = polar_unitary(&m);
            assert!(max_abs_diff(&(p.adjoint() * &p), &identity(n)) < 1e-11);
            // tr(P^dag m) should equal the nuclear norm.
            let tr: Complex64 = (p.adjoint() * &m).diagonal().iter().sum();
            assert!((tr.re - nuclear_norm(&m)).abs() < 1e-9);
            assert!(tr.im.abs() < 1e-9);
        }
    }

    #[test]
    fn matrix_functions() {
        let mut rng = Rng64::new(5);
        let h = random_hermitian(&mut rng, 4);
        let u = exp_i_hermitian(&h);
        assert!(max_abs_diff(&(u.adjoint() * &u), &identity(4)) < 1e-12);
        let g = rng.cmat_gaussian(4, 4);
        let psd = &g * g.adjoint();
        let r = sqrtm_psd(&psd);
        assert!(max_abs_diff(&(&r * &r), &psd) < 1e-10);
    }
}
