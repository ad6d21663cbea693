//! Abstract superselection data: charge labels, duals, fusion multiplicities
//! and per-party flavor dimensions.
//!
//! Charge systems come from finite groups (`from_group`), from the built-in
//! truncated U(1) / SU(2) ladders, from the abstract octet system, or from a
//! user-supplied schema. Fusion associativity is not verified; the tensors
//! are used purely as sector bookkeeping.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{fusion_multiplicities, FusionTensor, IrrepSet};

/// Superselection charges with dual map and fusion tensor. Truncated systems
/// record which fusion pairs had channels clipped away.
#[derive(Debug, Clone)]
pub struct ChargeSystem {
    pub name: String,
    labels: Vec<String>,
    trivial: usize,
    dual: Vec<usize>,
    fusion: FusionTensor,
    clipped: BTreeSet<(usize, usize)>,
}

/// Outcome of fusing two charges: open channels plus a truncation marker.
#[derive(Debug, Clone)]
pub struct FusionChannels {
    pub channels: Vec<(usize, u32)>,
    pub clipped: bool,
}

impl ChargeSystem {
    fn validate(&self) -> Result<()> {
        let k = self.labels.len();
        if k == 0 {
            return Err(Error::InvalidChargeSystem("no charges".into()));
        }
        if self.trivial >= k || self.dual.len() != k {
            return Err(Error::InvalidChargeSystem("bad trivial/dual data".into()));
        }
        for a in 0..k {
            if self.dual[self.dual[a]] != a {
                return Err(Error::InvalidChargeSystem(format!(
                    "dual map is not an involution at {}",
                    self.labels[a]
                )));
            }
            for cc in 0..k {
                let expect = u32::from(cc == a);
                if self.fusion.get(a, self.trivial, cc) != expect
                    || self.fusion.get(self.trivial, a, cc) != expect
                {
                    return Err(Error::InvalidChargeSystem(format!(
                        "trivial charge is not a fusion identity at {}",
                        self.labels[a]
                    )));
                }
            }
            for b in 0..k {
                let expect = u32::from(b == self.dual[a]);
                if self.fusion.get(a, b, self.trivial) != expect {
                    return Err(Error::InvalidChargeSystem(format!(
                        "unique-conjugate law fails at ({}, {})",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_charges(&self) -> usize {
        self.labels.len()
    }

    pub fn trivial(&self) -> usize {
        self.trivial
    }

    pub fn dual(&self, q: usize) -> usize {
        self.dual[q]
    }

    pub fn label(&self, q: usize) -> &str {
        &self.labels[q]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn charge_by_label(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown charge label '{label}'")))
    }

    /// N^c_{ab}.
    pub fn n_abc(&self, a: usize, b: usize, cc: usize) -> u32 {
        self.fusion.get(a, b, cc)
    }

    pub fn fuse(&self, a: usize, b: usize) -> FusionChannels {
        let channels = (0..self.n_charges())
            .filter_map(|cc| {
                let n = self.fusion.get(a, b, cc);
                (n > 0).then_some((cc, n))
            })
            .collect();
        FusionChannels {
            channels,
            clipped: self.clipped.contains(&(a, b)),
        }
    }

    pub fn is_clipped(&self, a: usize, b: usize) -> bool {
        self.clipped.contains(&(a, b))
    }

    pub fn is_truncated(&self) -> bool {
        !self.clipped.is_empty()
    }

    /// Dimension of the fusion-tag space V_1^{q1,q2,q3} for a tripartite
    /// decomposition at trivial total charge, with the convention that the
    /// first two slots fuse first. Equals N^{dual(q3)}_{q1,q2}.
    pub fn tag_dim(&self, q1: usize, q2: usize, q3: usize) -> u32 {
        self.fusion.get(q1, q2, self.dual(q3))
    }

    /// Multiplicity of `total` inside the ordered fusion of `charges`
    /// (left fold; abstract basis labels, no recoupling data).
    pub fn joint_multiplicity(&self, charges: &[usize], total: usize) -> u32 {
        match charges {
            [] => u32::from(total == self.trivial),
            [q] => u32::from(total == *q),
            [q1, rest @ ..] => {
                // Accumulate multiplicities over intermediate charges.
                let mut acc = vec![0u32; self.n_charges()];
                acc[*q1] = 1;
                for q in rest {
                    let mut next = vec![0u32; self.n_charges()];
                    for (x, &m) in acc.iter().enumerate() {
                        if m == 0 {
                            continue;
                        }
                        for cc in 0..self.n_charges() {
                            next[cc] += m * self.fusion.get(x, *q, cc);
                        }
                    }
                    acc = next;
                }
                acc[total]
            }
        }
    }
}

/// Charge system generated by the irreps of a finite group.
pub fn from_group(set: &IrrepSet) -> Result<Arc<ChargeSystem>> {
    let fusion = fusion_multiplicities(set)?;
    let sys = ChargeSystem {
        name: set.group.name.clone(),
        labels: set.irreps.iter().map(|i| i.label.clone()).collect(),
        trivial: set.trivial,
        dual: set.conjugate.clone(),
        fusion,
        clipped: BTreeSet::new(),
    };
    sys.validate()?;
    Ok(Arc::new(sys))
}

/// U(1) charges clamped to `-q_max ..= q_max`; fusion is integer addition,
/// clipped (and flagged) when the sum leaves the window.
pub fn u1_truncated(q_max: i64) -> Result<Arc<ChargeSystem>> {
    if q_max < 1 {
        return Err(Error::InvalidArgument("u1_truncated needs q_max >= 1".into()));
    }
    let qs: Vec<i64> = (-q_max..=q_max).collect();
    let k = qs.len();
    let idx = |q: i64| (q + q_max) as usize;
    let mut fusion = FusionTensor::new(k);
    let mut clipped = BTreeSet::new();
    for (ia, &a) in qs.iter().enumerate() {
        for (ib, &b) in qs.iter().enumerate() {
            if (a + b).abs() <= q_max {
                fusion.set(ia, ib, idx(a + b), 1);
            } else {
                clipped.insert((ia, ib));
            }
        }
    }
    let sys = ChargeSystem {
        name: format!("u1({q_max})"),
        labels: qs.iter().map(|q| q.to_string()).collect(),
        trivial: idx(0),
        dual: qs.iter().map(|&q| idx(-q)).collect(),
        fusion,
        clipped,
    };
    sys.validate()?;
    Ok(Arc::new(sys))
}

fn half_label(twice_j: usize) -> String {
    if twice_j % 2 == 0 {
        format!("{}", twice_j / 2)
    } else {
        format!("{twice_j}/2")
    }
}

/// SU(2) spins 0, 1/2, ..., j_max (j_max given as twice the spin, in 1..=4).
/// Clebsch-Gordan selection rule, clipped above j_max; all charges self-dual.
pub fn su2_truncated(twice_j_max: usize) -> Result<Arc<ChargeSystem>> {
    if !(1..=4).contains(&twice_j_max) {
        return Err(Error::InvalidArgument(
            "su2_truncated supports j_max in {1/2, 1, 3/2, 2}".into(),
        ));
    }
    let k = twice_j_max + 1;
    let mut fusion = FusionTensor::new(k);
    let mut clipped = BTreeSet::new();
    for a in 0..k {
        for b in 0..k {
            for cc in (a.abs_diff(b)..=(a + b)).step_by(2) {
                if cc < k {
                    fusion.set(a, b, cc, 1);
                } else {
                    clipped.insert((a, b));
                }
            }
        }
    }
    let sys = ChargeSystem {
        name: format!("su2({})", half_label(twice_j_max)),
        labels: (0..k).map(half_label).collect(),
        trivial: 0,
        dual: (0..k).collect(),
        fusion,
        clipped,
    };
    sys.validate()?;
    Ok(Arc::new(sys))
}

/// Abstract stand-in for the SU(3) octet sector: charges {1, 8} with
/// 8 x 8 = 1 + 2*8 (+ clipped remainder), 8 self-dual.
pub fn octet_like() -> Arc<ChargeSystem> {
    let mut fusion = FusionTensor::new(2);
    fusion.set(0, 0, 0, 1);
    fusion.set(0, 1, 1, 1);
    fusion.set(1, 0, 1, 1);
    fusion.set(1, 1, 0, 1);
    fusion.set(1, 1, 1, 2);
    let mut clipped = BTreeSet::new();
    // 8 x 8 also contains 10, 10bar, 27 in SU(3); those sectors are cut.
    clipped.insert((1, 1));
    let sys = ChargeSystem {
        name: "octet".into(),
        labels: vec!["1".into(), "8".into()],
        trivial: 0,
        dual: vec![0, 1],
        fusion,
        clipped,
    };
    sys.validate().expect("octet system is well formed");
    Arc::new(sys)
}

/// Per-charge flavor dimensions of one party (multiplicity spaces only;
/// color is suppressed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorShape {
    pub dims: Vec<usize>,
}

impl SectorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.iter().all(|&d| d == 0) {
            return Err(Error::InvalidArgument(
                "sector shape needs at least one nonzero dimension".into(),
            ));
        }
        Ok(SectorShape { dims })
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// User-defined charge system schema (structured text).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChargeSystemSchema {
    pub labels: Vec<String>,
    pub trivial: String,
    /// Pairs (q, qbar); self-dual charges may be omitted.
    #[serde(default)]
    pub duals: Vec<(String, String)>,
    /// Triples (a, b, c, N^c_{ab}).
    pub fusion: Vec<(String, String, String, u32)>,
    /// Pairs whose fusion closure was clipped by truncation.
    #[serde(default)]
    pub clipped: Vec<(String, String)>,
}

pub fn from_schema(schema: &ChargeSystemSchema) -> Result<Arc<ChargeSystem>> {
    let k = schema.labels.len();
    let find = |l: &str| -> Result<usize> {
        schema
            .labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::Schema(format!("unknown charge label '{l}'")))
    };
    let trivial = find(&schema.trivial)?;
    let mut dual: Vec<usize> = (0..k).collect();
    for (a, b) in &schema.duals {
        let (ia, ib) = (find(a)?, find(b)?);
        dual[ia] = ib;
        dual[ib] = ia;
    }
    let mut fusion = FusionTensor::new(k);
    for (a, b, cc, n) in &schema.fusion {
        fusion.set(find(a)?, find(b)?, find(cc)?, *n);
    }
    let mut clipped = BTreeSet::new();
    for (a, b) in &schema.clipped {
        clipped.insert((find(a)?, find(b)?));
    }
    let sys = ChargeSystem {
        name: "user".into(),
        labels: schema.labels.clone(),
        trivial,
        dual,
        fusion,
        clipped,
    };
    sys.validate()?;
    Ok(Arc::new(sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, irreps_of, s3};

    #[test]
    fn group_backed_systems() {
        let z2 = from_group(&irreps_of(&cyclic(2).unwrap()).unwrap()).unwrap();
        assert_eq!(z2.n_charges(), 2);
        assert_eq!(z2.dual(1), 1);

        let s3s = from_group(&irreps_of(&s3()).unwrap()).unwrap();
        assert_eq!(s3s.n_charges(), 3);
        // All S3 characters are real: every charge self-dual.
        for q in 0..3 {
            assert_eq!(s3s.dual(q), q);
        }

        let z3 = from_group(&irreps_of(&cyclic(3).unwrap()).unwrap()).unwrap();
        assert_eq!(z3.dual(1), 2);
        assert_eq!(z3.dual(2), 1);

        // Z_n fusion is modular addition.
        for n in [2usize, 3, 4, 5] {
            let sys = from_group(&irreps_of(&cyclic(n).unwrap()).unwrap()).unwrap();
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        let expect = u32::from((a + b) % n == cc);
                        assert_eq!(sys.n_abc(a, b, cc), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn u1_windows() {
        assert!(u1_truncated(0).is_err());
        let sys = u1_truncated(1).unwrap();
        let zero = sys.trivial();
        let plus = sys.charge_by_label("1").unwrap();
        let minus = sys.charge_by_label("-1").unwrap();
        let f = sys.fuse(plus, minus);
        assert_eq!(f.channels, vec![(zero, 1)]);
        assert!(!f.clipped);
        for q in 0..sys.n_charges() {
            assert_eq!(sys.dual(sys.dual(q)), q);
        }

        let sys2 = u1_truncated(2).unwrap();
        let two = sys2.charge_by_label("2").unwrap();
        let one = sys2.charge_by_label("1").unwrap();
        let f = sys2.fuse(two, one);
        assert!(f.channels.is_empty());
        assert!(f.clipped);
    }

    #[test]
    fn su2_selection_rules() {
        assert!(su2_truncated(0).is_err());
        assert!(su2_truncated(5).is_err());
        let sys = su2_truncated(2).unwrap();
        let half = sys.charge_by_label("1/2").unwrap();
        let zero = sys.trivial();
        let one = sys.charge_by_label("1").unwrap();
        let f = sys.fuse(half, half);
        assert_eq!(f.channels, vec![(zero, 1), (one, 1)]);
        assert_eq!(sys.fuse(half, zero).channels, vec![(half, 1)]);
        // 1 x 1 with j_max = 1 keeps {0, 1} and flags the clipped spin 2.
        let f11 = sys.fuse(one, one);
        assert_eq!(f11.channels, vec![(zero, 1), (one, 1)]);
        assert!(f11.clipped);
        // Fusion symmetry.
        for a in 0..sys.n_charges() {
            for b in 0..sys.n_charges() {
                for cc in 0..sys.n_charges() {
                    assert_eq!(sys.n_abc(a, b, cc), sys.n_abc(b, a, cc));
                }
            }
        }
    }

    #[test]
    fn octet_multiplicities() {
        let sys = octet_like();
        let eight = sys.charge_by_label("8").unwrap();
        let f = sys.fuse(eight, eight);
        assert_eq!(f.channels, vec![(sys.trivial(), 1), (eight, 2)]);
        assert_eq!(sys.dual(eight), eight);
        assert_eq!(sys.tag_dim(eight, eight, eight), 2);
    }

    #[test]
    fn schema_roundtrip() {
        let schema = ChargeSystemSchema {
            labels: vec!["0".into(), "1".into()],
            trivial: "0".into(),
            duals: vec![],
            fusion: vec![
                ("0".into(), "0".into(), "0".into(), 1),
                ("0".into(), "1".into(), "1".into(), 1),
                ("1".into(), "0".into(), "1".into(), 1),
                ("1".into(), "1".into(), "0".into(), 1),
            ],
            clipped: vec![],
        };
        let sys = from_schema(&schema).unwrap();
        assert_eq!(sys.n_charges(), 2);
        // Violating the unique-conjugate law must fail validation.
        let mut bad = schema.clone();
        bad.fusion.pop();
        assert!(from_schema(&bad).is_err());
    }

    #[test]
    fn joint_multiplicities() {
        let sys = octet_like();
        let e = sys.charge_by_label("8").unwrap();
        // 8 (x) 8 (x) 8 fused to trivial: two paths through the two 8-channels.
        assert_eq!(sys.joint_multiplicity(&[e, e, e], sys.trivial()), 2);
        let u1 = u1_truncated(2).unwrap();
        let p1 = u1.charge_by_label("1").unwrap();
        let m2 = u1.charge_by_label("-2").unwrap();
        assert_eq!(u1.joint_multiplicity(&[p1, p1, m2], u1.trivial()), 1);
        assert_eq!(u1.joint_multiplicity(&[p1, p1, p1], u1.trivial()), 0);
    }
}
