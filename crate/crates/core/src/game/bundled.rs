//! Bundled example protocols: a one-exchange coin flip, the charge-basis
//! shadow of the U(1) coherence protocol, and the commit phase of the SU(2)
//! bit commitment with the compensating charge already on Alice's side.

use std::collections::BTreeMap;

use crate::charge::{from_group, su2_truncated, u1_truncated, SectorShape};
use crate::error::{Error, Result};
use crate::game::{IWorldMove, IWorldStrategy, InvariantMeasurement, Party, Protocol};
use crate::group::{cyclic, irreps_of};
use crate::linalg::{cr, identity, CMat, CVec};

fn rotation(c: f64, s: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[cr(c), cr(-s), cr(s), cr(c)])
}

fn unit_init(dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[0] = cr(1.0);
    v
}

/// Two-round coin flip over Z2: Alice prepares
/// (|0_A 0_M> + |1_A 1_M>)/sqrt(2), Bob absorbs the message charge, both
/// measure their charge. Demonstration only; trivially insecure.
pub fn toy_coinflip() -> Result<Protocol> {
    let sys = from_group(&irreps_of(&cyclic(2)?)?)?;
    let shape = SectorShape::new(vec![1, 1])?;
    let shape_m = shape.clone();
    let r = 0.5f64.sqrt();

    // Alice at q_B = 0: side blocks ((q_A,q_M)) = (0,0), (1,1).
    let mut mv_a = BTreeMap::new();
    mv_a.insert(0usize, rotation(r, r));
    mv_a.insert(1usize, identity(2));
    // Bob at q_A = 0: blocks (q_B,q_M) = (0,0), (1,1): untouched.
    // At q_A = 1: blocks (0,1), (1,0): swap (absorb the message charge).
    let mut mv_b = BTreeMap::new();
    mv_b.insert(0usize, identity(2));
    mv_b.insert(
        1usize,
        CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
    );

    let honest_a = IWorldStrategy {
        party: Party::Alice,
        shape: shape.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_a,
        }],
    };
    let honest_b = IWorldStrategy {
        party: Party::Bob,
        shape: shape.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_b,
        }],
    };
    let p = Protocol {
        name: "toy-coinflip".into(),
        system: sys.clone(),
        rounds: 2,
        shape_m,
        init_m: unit_init(1),
        total: sys.trivial(),
        init_charge_a: sys.trivial(),
        init_charge_b: sys.trivial(),
        meas_a: InvariantMeasurement::charge_measurement(&sys, &shape),
        meas_b: InvariantMeasurement::charge_measurement(&sys, &shape),
        honest_a,
        honest_b,
    };
    p.validate()?;
    Ok(p)
}

/// Charge-basis shadow of the coherence-verification exchange over
/// truncated U(1): Alice prepares (|0_A 0_M> + |-1_A 1_M>)/sqrt(2) and sends
/// the message; Bob absorbs the charge. (The full interference experiment
/// with a shared reference lives in the reference module.)
pub fn u1_coherence_game() -> Result<Protocol> {
    let sys = u1_truncated(1)?;
    // Labels are ["-1", "0", "1"].
    let m1 = sys.charge_by_label("-1")?;
    let zero = sys.trivial();
    let one = sys.charge_by_label("1")?;
    let shape_a = SectorShape::new(vec![1, 1, 0])?;
    let shape_b = SectorShape::new(vec![0, 1, 1])?;
    let shape_m = SectorShape::new(vec![0, 1, 1])?;
    let r = 0.5f64.sqrt();

    // Alice at q_B = 0: side blocks (q_A,q_M) = (-1,1), (0,0) (block order
    // is lexicographic in the charge tuple).
    let mut mv_a = BTreeMap::new();
    mv_a.insert(zero, {
        // |0,0> -> (|0,0> + |-1,1>)/sqrt(2); second column completes the rotation.
        CMat::from_row_slice(2, 2, &[cr(r), cr(-r), cr(r), cr(r)])
    });
    // q_B = 1: blocks (q_A,q_M) with q_A + q_M = -1: only (-1, 0).
    mv_a.insert(one, identity(1));
    // q_B = -1 (reachable only against a cheating Bob): block (0, 1).
    mv_a.insert(m1, identity(1));

    let mut mv_b = BTreeMap::new();
    // q_A = 0: blocks (q_B,q_M) with sum 0 on support: (0,0) and (1,-1 absent): dim 1.
    mv_b.insert(zero, identity(1));
    // q_A = -1: blocks (q_B,q_M) with sum 1: (0,1), (1,0): swap to absorb.
    mv_b.insert(
        m1,
        CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
    );

    let honest_a = IWorldStrategy {
        party: Party::Alice,
        shape: shape_a.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_a,
        }],
    };
    let honest_b = IWorldStrategy {
        party: Party::Bob,
        shape: shape_b.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_b,
        }],
    };
    let p = Protocol {
        name: "u1-coherence".into(),
        system: sys.clone(),
        rounds: 2,
        shape_m,
        init_m: unit_init(1),
        total: sys.trivial(),
        init_charge_a: sys.trivial(),
        init_charge_b: sys.trivial(),
        meas_a: InvariantMeasurement::charge_measurement(&sys, &shape_a),
        meas_b: InvariantMeasurement::charge_measurement(&sys, &shape_b),
        honest_a,
        honest_b,
    };
    p.validate()?;
    Ok(p)
}

/// Commit phase of the SU(2) bit-commitment example with the compensating
/// charge merged into Alice's side: she prepares
/// (|q_A=0, q_M=0> + |q_A=1, q_M=1>)/sqrt(2) and ships the message to Bob.
pub fn bitcommit_su2() -> Result<Protocol> {
    let sys = su2_truncated(2)?;
    let zero = sys.trivial();
    let one = sys.charge_by_label("1")?;
    let shape = SectorShape::new(vec![1, 0, 1])?;
    let shape_m = shape.clone();
    let r = 0.5f64.sqrt();

    let mut mv_a = BTreeMap::new();
    // q_B = 0: side blocks (q_A,q_M) = (0,0), (1,1).
    mv_a.insert(zero, rotation(r, r));
    // q_B = 1: side blocks (0,1), (1,0), (1,1).
    mv_a.insert(one, identity(3));

    let mut mv_b = BTreeMap::new();
    // q_A = 0: blocks (q_B,q_M) = (0,0), (1,1).
    mv_b.insert(zero, identity(2));
    // q_A = 1: blocks (0,1), (1,0), (1,1): swap the first two (absorb).
    mv_b.insert(one, {
        let mut m = CMat::zeros(3, 3);
        m[(0, 1)] = cr(1.0);
        m[(1, 0)] = cr(1.0);
        m[(2, 2)] = cr(1.0);
        m
    });

    let honest_a = IWorldStrategy {
        party: Party::Alice,
        shape: shape.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_a,
        }],
    };
    let honest_b = IWorldStrategy {
        party: Party::Bob,
        shape: shape.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_b,
        }],
    };
    let p = Protocol {
        name: "bitcommit-su2".into(),
        system: sys.clone(),
        rounds: 2,
        shape_m,
        init_m: unit_init(1),
        total: sys.trivial(),
        init_charge_a: sys.trivial(),
        init_charge_b: sys.trivial(),
        meas_a: InvariantMeasurement::charge_measurement(&sys, &shape),
        meas_b: InvariantMeasurement::charge_measurement(&sys, &shape),
        honest_a,
        honest_b,
    };
    p.validate()?;
    Ok(p)
}

/// Bundled protocol registry used by the CLI and the acceptance suite.
pub fn bundled_protocol(name: &str) -> Result<Protocol> {
    match name {
        "toy-coinflip" => toy_coinflip(),
        "u1-coherence" => u1_coherence_game(),
        "bitcommit-su2" => bitcommit_su2(),
        _ => Err(Error::InvalidArgument(format!(
            "unknown bundled protocol '{name}' (expected toy-coinflip|u1-coherence|bitcommit-su2)"
        ))),
    }
}

pub fn bundled_names() -> &'static [&'static str] {
    &["toy-coinflip", "u1-coherence", "bitcommit-su2"]
}

/// The unreduced SU(2) commitment game (total charge 1/2, Alice starts
/// charged); honest play only, used to exercise the must-reduce-first path.
pub fn bitcommit_su2_unreduced() -> Result<Protocol> {
    let sys = su2_truncated(2)?;
    let half = sys.charge_by_label("1/2")?;
    let zero = sys.trivial();
    let one = sys.charge_by_label("1")?;
    let shape_a = SectorShape::new(vec![0, 1, 0])?;
    let shape_b = SectorShape::new(vec![1, 0, 1])?;
    let shape_m = SectorShape::new(vec![1, 0, 1])?;
    let r = 0.5f64.sqrt();

    let mut mv_a = BTreeMap::new();
    // q_B = 0: side blocks (q_A,q_M) = (1/2,0), (1/2,1).
    mv_a.insert(zero, rotation(r, r));
    // q_B = 1: side blocks (1/2,0), (1/2,1).
    mv_a.insert(one, identity(2));
    let mut mv_b = BTreeMap::new();
    // q_A = 1/2: blocks (q_B,q_M) = (0,0),(0,1),(1,0),(1,1): absorb swaps
    // message charge into Bob's sector.
    mv_b.insert(half, {
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = cr(1.0); // (0,0) stays
        m[(2, 1)] = cr(1.0); // (0,1) -> (1,0)
        m[(1, 2)] = cr(1.0); // (1,0) -> (0,1)
        m[(3, 3)] = cr(1.0); // (1,1) stays
        m
    });

    let honest_a = IWorldStrategy {
        party: Party::Alice,
        shape: shape_a,
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_a,
        }],
    };
    let honest_b = IWorldStrategy {
        party: Party::Bob,
        shape: shape_b.clone(),
        init: unit_init(1),
        moves: vec![IWorldMove {
            by_opponent_charge: mv_b,
        }],
    };
    let p = Protocol {
        name: "bitcommit-su2-unreduced".into(),
        system: sys.clone(),
        rounds: 2,
        shape_m,
        init_m: unit_init(1),
        total: half,
        init_charge_a: half,
        init_charge_b: sys.trivial(),
        meas_a: InvariantMeasurement::charge_measurement(&sys, &SectorShape::new(vec![0, 1, 0])?),
        meas_b: InvariantMeasurement::charge_measurement(&sys, &shape_b),
        honest_a,
        honest_b,
    };
    p.validate()?;
    Ok(p)
}
