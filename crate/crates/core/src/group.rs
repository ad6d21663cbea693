//! Finite-group arithmetic and representation data: Cayley tables, unitary
//! irreducible representations, characters and fusion multiplicities.
//!
//! Built-in groups (`z<n>`, `s3`, `d4`, `q8`) ship with explicit unitary
//! irrep matrices; arbitrary user Cayley tables are validated but carry no
//! representation data.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, cr, identity, max_abs_diff, CMat};

/// Which construction a group table came from. Irreps are stored only for
/// built-in constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    S3,
    D4,
    Q8,
    Custom,
}

/// A finite group as a Cayley table over element indices `0..order`.
///
/// Element ordering is fixed per built-in group so that serialized operators
/// are reproducible:
/// - `z<n>`: residues `0..n`, composition is addition mod n.
/// - `s3`: permutations of three symbols in lexicographic one-line order.
/// - `d4`: `r^a` for `a = 0..4`, then `s r^a`; `r` is the quarter rotation.
/// - `q8`: `1, -1, i, -i, j, -j, k, -k`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub kind: GroupKind,
    pub name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Validates and wraps an explicit row-major multiplication table.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &mul {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!(
                        "closure violated: entry {x} outside 0..{n}"
                    )));
                }
                flat.push(x);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b];
        // Identity: an element e with e*a = a*e = a for all a.
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == identity && at(b, a) == identity) {
                Some(b) => inv[a] = b,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "no two-sided inverse for element {a}"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    if at(at(a, b), cc) != at(a, at(b, cc)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{cc})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable {
            kind: GroupKind::Custom,
            name: format!("custom{n}"),
            order: n,
            mul: flat,
            inv,
            identity,
        })
    }

    fn from_op(kind: GroupKind, name: &str, n: usize, op: impl Fn(usize, usize) -> usize) -> Self {
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(op(a, b));
            }
        }
        let mut g = GroupTable {
            kind,
            name: name.to_string(),
            order: n,
            mul,
            inv: vec![0; n],
            identity: 0,
        };
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| g.mul(e, a) == a && g.mul(a, e) == a))
            .expect("built-in group has identity");
        g.identity = identity;
        for a in 0..n {
            g.inv[a] = (0..n)
                .find(|&b| g.mul(a, b) == identity)
                .expect("built-in group has inverses");
        }
        g
    }
}

/// Cayley table for Z_n (residues mod n).
pub fn cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group order must be >= 1".into()));
    }
    Ok(GroupTable::from_op(
        GroupKind::Cyclic(n),
        &format!("z{n}"),
        n,
        |a, b| (a + b) % n,
    ))
}

// S3 elements as one-line permutation notation, lexicographic.
const S3_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Symmetric group on three symbols, derived by composing permutations.
pub fn s3() -> GroupTable {
    let index_of = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).unwrap();
    GroupTable::from_op(GroupKind::S3, "s3", 6, |a, b| {
        // (a b)(x) = a(b(x)).
        let pa = S3_PERMS[a];
        let pb = S3_PERMS[b];
        index_of([pa[pb[0]], pa[pb[1]], pa[pb[2]]])
    })
}

// D4 element encoding: index = 4*b + a for s^b r^a.
fn d4_op(x: usize, y: usize) -> usize {
    let (b1, a1) = (x / 4, x % 4);
    let (b2, a2) = (y / 4, y % 4);
    // (s^b1 r^a1)(s^b2 r^a2) = s^(b1+b2) r^(a2 + (-1)^b2 a1).
    let a = if b2 == 0 { (a1 + a2) % 4 } else { (a2 + 4 - a1 % 4) % 4 };
    ((b1 + b2) % 2) * 4 + a
}

/// Dihedral group of the square.
pub fn d4() -> GroupTable {
    GroupTable::from_op(GroupKind::D4, "d4", 8, d4_op)
}

// Q8 elements 1,-1,i,-i,j,-j,k,-k encoded as (unit in 0..4, sign in 0..2),
// index = 2*unit + sign.
fn q8_op(x: usize, y: usize) -> usize {
    let (u1, s1) = (x / 2, x % 2);
    let (u2, s2) = (y / 2, y % 2);
    // Unit products: table[u1][u2] = (unit, extra sign).
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let (u, extra) = T[u1][u2];
    2 * u + (s1 + s2 + extra) % 2
}

/// Quaternion group.
pub fn q8() -> GroupTable {
    GroupTable::from_op(GroupKind::Q8, "q8", 8, q8_op)
}

/// Group specification accepted by the CLI and file schemas.
pub enum GroupSpec {
    Named(String),
    Table(Vec<Vec<usize>>),
}

/// Builds a group from a name (`z<n>|s3|d4|q8`) or an explicit Cayley table.
pub fn build_group(spec: GroupSpec) -> Result<GroupTable> {
    match spec {
        GroupSpec::Named(name) => {
            let lower = name.to_ascii_lowercase();
            if let Some(rest) = lower.strip_prefix('z') {
                if let Ok(n) = rest.parse::<usize>() {
                    return cyclic(n);
                }
            }
            match lower.as_str() {
                "s3" => Ok(s3()),
                "d4" => Ok(d4()),
                "q8" => Ok(q8()),
                _ => Err(Error::UnsupportedGroup(name)),
            }
        }
        GroupSpec::Table(t) => GroupTable::from_table(t),
    }
}

/// One unitary irreducible representation: a matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub mats: Vec<CMat>,
}

impl Irrep {
    pub fn mat(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    pub fn character(&self, g: usize) -> Complex64 {
        self.mats[g].diagonal().iter().sum()
    }
}

/// The complete set of irreps of a built-in group, with the trivial charge
/// index and the conjugation map q -> qbar.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    pub group: GroupTable,
    pub irreps: Vec<Irrep>,
    pub trivial: usize,
    pub conjugate: Vec<usize>,
}

impl IrrepSet {
    pub fn n_charges(&self) -> usize {
        self.irreps.len()
    }

    pub fn dim(&self, q: usize) -> usize {
        self.irreps[q].dim
    }

    pub fn character(&self, q: usize, g: usize) -> Complex64 {
        self.irreps[q].character(g)
    }
}

fn zn_irreps(g: &GroupTable, n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|k| {
            let mats = (0..n)
                .map(|j| {
                    let th = 2.0 * std::f64::consts::PI * ((k * j) % n) as f64 / n as f64;
                    CMat::from_element(1, 1, c(th.cos(), th.sin()))
                })
                .collect();
            Irrep {
                label: if n <= 10 {
                    format!("{k}")
                } else {
                    format!("q{k}")
                },
                dim: 1,
                mats,
            }
        })
        .map(|ir| {
            debug_assert_eq!(ir.mats.len(), g.order());
            ir
        })
        .collect()
}

fn s3_irreps(g: &GroupTable) -> Vec<Irrep> {
    let sgn = |p: &[usize; 3]| -> f64 {
        let mut inversions = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let trivial = Irrep {
        label: "triv".into(),
        dim: 1,
        mats: (0..6).map(|_| CMat::from_element(1, 1, cr(1.0))).collect(),
    };
    let sign = Irrep {
        label: "sgn".into(),
        dim: 1,
        mats: S3_PERMS
            .iter()
            .map(|p| CMat::from_element(1, 1, cr(sgn(p))))
            .collect(),
    };
    // Standard 2-dim irrep: permutation action restricted to the plane
    // x + y + z = 0, in the orthonormal basis u1, u2.
    let u1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let u2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let basis = [u1, u2];
    let std2 = Irrep {
        label: "std".into(),
        dim: 2,
        mats: S3_PERMS
            .iter()
            .map(|p| {
                // P_sigma e_i = e_{sigma(i)}; D_ab = <u_a | P u_b>.
                CMat::from_fn(2, 2, |a, b| {
                    let mut acc = 0.0;
                    for i in 0..3 {
                        acc += basis[a][p[i]] * basis[b][i];
                    }
                    cr(acc)
                })
            })
            .collect(),
    };
    debug_assert_eq!(g.order(), 6);
    vec![trivial, sign, std2]
}

fn d4_irreps(g: &GroupTable) -> Vec<Irrep> {
    let one_dim = |eps: f64, del: f64, label: &str| Irrep {
        label: label.into(),
        dim: 1,
        mats: (0..8)
            .map(|x| {
                let (b, a) = (x / 4, x % 4);
                CMat::from_element(1, 1, cr(eps.powi(a as i32) * del.powi(b as i32)))
            })
            .collect(),
    };
    let r = CMat::from_row_slice(2, 2, &[cr(0.0), cr(-1.0), cr(1.0), cr(0.0)]);
    let s = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
    let two = Irrep {
        label: "e".into(),
        dim: 2,
        mats: (0..8)
            .map(|x| {
                let (b, a) = (x / 4, x % 4);
                let mut m = identity(2);
                for _ in 0..a {
                    m = &r * m;
                }
                if b == 1 {
                    m = &s * m;
                }
                m
            })
            .collect(),
    };
    debug_assert_eq!(g.order(), 8);
    vec![
        one_dim(1.0, 1.0, "triv"),
        one_dim(1.0, -1.0, "b1"),
        one_dim(-1.0, 1.0, "b2"),
        one_dim(-1.0, -1.0, "b3"),
        two,
    ]
}

fn q8_irreps(g: &GroupTable) -> Vec<Irrep> {
    // 1-dim irreps factor through Q8 / {+-1} = Z2 x Z2.
    let one_dim = |chi_i: f64, chi_j: f64, label: &str| Irrep {
        label: label.into(),
        dim: 1,
        mats: (0..8)
            .map(|x| {
                let u = x / 2;
                let v = match u {
                    0 => 1.0,
                    1 => chi_i,
                    2 => chi_j,
                    _ => chi_i * chi_j,
                };
                CMat::from_element(1, 1, cr(v))
            })
            .collect(),
    };
    // 2-dim irrep: 1 -> I, i -> i sigma_z, j -> i sigma_y, k -> i sigma_x.
    let ii = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), cr(0.0), cr(0.0), c(0.0, -1.0)]);
    let jj = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(-1.0), cr(0.0)]);
    let kk = CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, 1.0), c(0.0, 1.0), cr(0.0)]);
    let two = Irrep {
        label: "e".into(),
        dim: 2,
        mats: (0..8)
            .map(|x| {
                let (u, s) = (x / 2, x % 2);
                let base = match u {
                    0 => identity(2),
                    1 => ii.clone(),
                    2 => jj.clone(),
                    _ => kk.clone(),
                };
                if s == 0 {
                    base
                } else {
                    base * cr(-1.0)
                }
            })
            .collect(),
    };
    debug_assert_eq!(g.order(), 8);
    vec![
        one_dim(1.0, 1.0, "triv"),
        one_dim(1.0, -1.0, "b1"),
        one_dim(-1.0, 1.0, "b2"),
        one_dim(-1.0, -1.0, "b3"),
        two,
    ]
}

/// Complete irrep set for a built-in group. Arbitrary Cayley tables are
/// rejected: no general irrep synthesis is attempted.
pub fn irreps_of(g: &GroupTable) -> Result<IrrepSet> {
    let irreps = match g.kind {
        GroupKind::Cyclic(n) => zn_irreps(g, n),
        GroupKind::S3 => s3_irreps(g),
        GroupKind::D4 => d4_irreps(g),
        GroupKind::Q8 => q8_irreps(g),
        GroupKind::Custom => return Err(Error::UnsupportedGroup(g.name.clone())),
    };
    let n_g = g.order();
    let sum_sq: usize = irreps.iter().map(|ir| ir.dim * ir.dim).sum();
    if sum_sq != n_g {
        return Err(Error::InconsistentIrreps(format!(
            "sum of squared dims {sum_sq} != group order {n_g}"
        )));
    }
    let trivial = irreps
        .iter()
        .position(|ir| ir.dim == 1 && (0..n_g).all(|x| (ir.character(x) - cr(1.0)).norm() < 1e-12))
        .ok_or_else(|| Error::InconsistentIrreps("no trivial irrep".into()))?;
    // qbar is the unique charge whose character is the conjugate of q's.
    let mut conjugate = vec![usize::MAX; irreps.len()];
    for (qi, ir) in irreps.iter().enumerate() {
        let mut found = None;
        for (qj, jr) in irreps.iter().enumerate() {
            if jr.dim != ir.dim {
                continue;
            }
            let m: Complex64 = (0..n_g)
                .map(|x| ir.character(x) * jr.character(x))
                .sum::<Complex64>()
                / cr(n_g as f64);
            if (m - cr(1.0)).norm() < 1e-8 {
                found = Some(qj);
                break;
            }
        }
        conjugate[qi] =
            found.ok_or_else(|| Error::InconsistentIrreps(format!("no conjugate for {qi}")))?;
    }
    let set = IrrepSet {
        group: g.clone(),
        irreps,
        trivial,
        conjugate,
    };
    verify_irreps(&set)?;
    Ok(set)
}

/// Homomorphism, unitarity and irreducibility residuals for a stored set.
fn verify_irreps(set: &IrrepSet) -> Result<()> {
    let g = &set.group;
    let n_g = g.order();
    for ir in &set.irreps {
        for x in g.elements() {
            let m = ir.mat(x);
            let uni = max_abs_diff(&(m.adjoint() * m), &identity(ir.dim));
            if uni > 1e-12 {
                return Err(Error::InconsistentIrreps(format!(
                    "irrep {} not unitary at element {x} (residual {uni:.2e})",
                    ir.label
                )));
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                let lhs = ir.mat(x) * ir.mat(y);
                let rhs = ir.mat(g.mul(x, y));
                if max_abs_diff(&lhs, rhs) > 1e-12 {
                    return Err(Error::InconsistentIrreps(format!(
                        "irrep {} is not a homomorphism at ({x},{y})",
                        ir.label
                    )));
                }
            }
        }
        let chi_norm: f64 = (0..n_g)
            .map(|x| ir.character(x).norm_sqr())
            .sum::<f64>()
            / n_g as f64;
        if (chi_norm - 1.0).abs() > 1e-10 {
            return Err(Error::InconsistentIrreps(format!(
                "irrep {} is reducible (|chi|^2 average {chi_norm})",
                ir.label
            )));
        }
    }
    Ok(())
}

/// Fusion multiplicity tensor, indexed `[a][b][c]` = N^c_{ab}.
#[derive(Debug, Clone)]
pub struct FusionTensor {
    pub n: usize,
    data: Vec<u32>,
}

impl FusionTensor {
    pub fn new(n: usize) -> Self {
        FusionTensor {
            n,
            data: vec![0; n * n * n],
        }
    }

    pub fn get(&self, a: usize, b: usize, cc: usize) -> u32 {
        self.data[(a * self.n + b) * self.n + cc]
    }

    pub fn set(&mut self, a: usize, b: usize, cc: usize, v: u32) {
        self.data[(a * self.n + b) * self.n + cc] = v;
    }
}

/// N^c_{ab} from the character formula
/// (1/n_G) sum_g chi_a(g) chi_b(g) chi_c(g)*, rounded to integers.
pub fn fusion_multiplicities(set: &IrrepSet) -> Result<FusionTensor> {
    let n_g = set.group.order() as f64;
    let k = set.n_charges();
    let mut t = FusionTensor::new(k);
    for a in 0..k {
        for b in 0..k {
            for cc in 0..k {
                let val: Complex64 = set
                    .group
                    .elements()
                    .map(|x| set.character(a, x) * set.character(b, x) * set.character(cc, x).conj())
                    .sum::<Complex64>()
                    / cr(n_g);
                let rounded = val.re.round();
                let residual = (val - cr(rounded)).norm();
                if residual >= 1e-8 || rounded < -0.5 {
                    return Err(Error::InconsistentIrreps(format!(
                        "fusion N^{cc}_{{{a},{b}}} = {val} does not round to a nonnegative integer"
                    )));
                }
                t.set(a, b, cc, rounded as u32);
            }
        }
    }
    Ok(t)
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_builtins() -> Vec<GroupTable> {
        vec![
            cyclic(2).unwrap(),
            cyclic(3).unwrap(),
            cyclic(4).unwrap(),
            s3(),
            d4(),
            q8(),
        ]
    }

    #[test]
    fn builds_and_validates() {
        let z2 = build_group(GroupSpec::Named("z2".into())).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.identity(), 0);
        let s = s3();
        assert_eq!(s.order(), 6);
        // Three conjugacy classes: identity, transpositions, 3-cycles.
        let mut class_sizes = std::collections::BTreeMap::new();
        for a in s.elements() {
            let mut class: Vec<usize> = s
                .elements()
                .map(|g| s.mul(s.mul(g, a), s.inv(g)))
                .collect();
            class.sort_unstable();
            class.dedup();
            class_sizes.insert(class, ());
        }
        assert_eq!(class_sizes.len(), 3);
    }

    #[test]
    fn rejects_non_group() {
        // a*a = b, b*b = b: no identity.
        let err = build_group(GroupSpec::Table(vec![vec![1, 1], vec![1, 1]])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("identity"), "{msg}");
        // Broken associativity on a 3-element magma with an identity.
        let err2 = GroupTable::from_table(vec![
            vec![0, 1, 2],
            vec![1, 2, 2],
            vec![2, 2, 1],
        ])
        .unwrap_err();
        assert!(err2.to_string().contains("associativity") || err2.to_string().contains("inverse"));
    }

    #[test]
    fn irrep_dimensions() {
        let z3 = irreps_of(&cyclic(3).unwrap()).unwrap();
        assert_eq!(z3.n_charges(), 3);
        let om = c(-0.5, 3f64.sqrt() / 2.0);
        assert!((z3.character(1, 1) - om).norm() < 1e-12);
        assert!((z3.character(2, 1) - om * om).norm() < 1e-12);

        let s3i = irreps_of(&s3()).unwrap();
        let mut dims: Vec<usize> = s3i.irreps.iter().map(|i| i.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2]);

        let q8i = irreps_of(&q8()).unwrap();
        let mut dims: Vec<usize> = q8i.irreps.iter().map(|i| i.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);

        assert!(irreps_of(&GroupTable::from_table(vec![vec![0]]).unwrap()).is_err());
    }

    #[test]
    fn grand_orthogonality() {
        for g in all_builtins() {
            let set = irreps_of(&g).unwrap();
            let n_g = g.order() as f64;
            for (q1, ir1) in set.irreps.iter().enumerate() {
                for (q2, ir2) in set.irreps.iter().enumerate() {
                    for i in 0..ir1.dim {
                        for a in 0..ir1.dim {
                            for j in 0..ir2.dim {
                                for b in 0..ir2.dim {
                                    let s: Complex64 = g
                                        .elements()
                                        .map(|x| {
                                            ir1.mat(x)[(i, a)] * ir2.mat(x)[(j, b)].conj()
                                        })
                                        .sum::<Complex64>()
                                        * cr(ir1.dim as f64 / n_g);
                                    let expect = if q1 == q2 && i == j && a == b {
                                        cr(1.0)
                                    } else {
                                        cr(0.0)
                                    };
                                    assert!(
                                        (s - expect).norm() < 1e-10,
                                        "{} q{q1} q{q2}",
                                        g.name
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fusion_tensor_properties() {
        for g in all_builtins() {
            let set = irreps_of(&g).unwrap();
            let t = fusion_multiplicities(&set).unwrap();
            let k = set.n_charges();
            for a in 0..k {
                for b in 0..k {
                    // Symmetry and unique-conjugate law.
                    for cc in 0..k {
                        assert_eq!(t.get(a, b, cc), t.get(b, a, cc), "{}", g.name);
                    }
                    let expect = u32::from(b == set.conjugate[a]);
                    assert_eq!(t.get(a, b, set.trivial), expect, "{}", g.name);
                }
            }
        }
        // S3: 2 (x) 2 = triv + sgn + 2.
        let set = irreps_of(&s3()).unwrap();
        let t = fusion_multiplicities(&set).unwrap();
        let std_idx = set.irreps.iter().position(|i| i.dim == 2).unwrap();
        for cc in 0..3 {
            assert_eq!(t.get(std_idx, std_idx, cc), 1);
        }
        // Z2 parity addition.
        let z2 = irreps_of(&cyclic(2).unwrap()).unwrap();
        let tz = fusion_multiplicities(&z2).unwrap();
        assert_eq!(tz.get(1, 1, 0), 1);
        assert_eq!(tz.get(1, 1, 1), 0);
    }
}
