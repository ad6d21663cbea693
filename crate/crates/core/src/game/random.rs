//! Seeded random games and strategies for property and acceptance runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::charge::{ChargeSystem, SectorShape};
use crate::error::Result;
use crate::game::uworld::MsgLayout;
use crate::game::{
    IWorldMove, IWorldStrategy, InvariantMeasurement, Party, Protocol, UWorldStrategy,
    GAME_DIM_CAP,
};
use crate::linalg::{cr, CMat, Rng64};

fn random_shape(sys: &ChargeSystem, rng: &mut Rng64, max_dim: usize) -> SectorShape {
    let k = sys.n_charges();
    let mut dims = vec![0usize; k];
    dims[sys.trivial()] = rng.range(1, max_dim);
    // Populate a couple more sectors to keep joint dimensions moderate.
    let extra = rng.range(1, 2.min(k - 1));
    for _ in 0..extra {
        let q = rng.below(k);
        if dims[q] == 0 {
            dims[q] = rng.range(1, max_dim);
        }
    }
    SectorShape { dims }
}

/// Random invariant projective measurement: per charge, a random projector
/// and its complement (falls back to the charge measurement half the time).
fn random_measurement(
    sys: &ChargeSystem,
    shape: &SectorShape,
    rng: &mut Rng64,
) -> InvariantMeasurement {
    if rng.uniform() < 0.5 {
        return InvariantMeasurement::charge_measurement(sys, shape);
    }
    let k = sys.n_charges();
    let mut p_blocks = Vec::with_capacity(k);
    let mut q_blocks = Vec::with_capacity(k);
    for q in 0..k {
        let d = shape.dim(q);
        if d == 0 {
            p_blocks.push(CMat::zeros(0, 0));
            q_blocks.push(CMat::zeros(0, 0));
            continue;
        }
        let rank = rng.below(d + 1);
        let u = rng.unitary(d);
        let mut proj = CMat::zeros(d, d);
        for j in 0..rank {
            let col = u.column(j);
            for r in 0..d {
                for s in 0..d {
                    proj[(r, s)] += col[r] * col[s].conj();
                }
            }
        }
        q_blocks.push(CMat::identity(d, d) - &proj);
        p_blocks.push(proj);
    }
    InvariantMeasurement {
        outcomes: vec![p_blocks, q_blocks],
    }
}

/// Random invariant-world protocol: unitary honest moves (so honest play
/// never aborts), random invariant measurements, joint dimension within the
/// engine cap in both worlds.
pub fn random_protocol(
    sys: Arc<ChargeSystem>,
    rng: &mut Rng64,
    max_rounds: usize,
) -> Result<Protocol> {
    loop {
        let rounds = rng.range(1, max_rounds);
        let shape_a = random_shape(&sys, rng, 2);
        let shape_b = random_shape(&sys, rng, 2);
        let shape_m = random_shape(&sys, rng, 2);
        // Keep both the sector game and its compiled dense form runnable.
        let msg = MsgLayout::build(&sys, &shape_m);
        let dense_dim = shape_a.total_dim() * shape_b.total_dim() * msg.dim;
        if dense_dim == 0 || dense_dim > GAME_DIM_CAP {
            continue;
        }
        let trivial = sys.trivial();
        let mut proto = Protocol {
            name: "random".into(),
            system: sys.clone(),
            rounds,
            shape_m: shape_m.clone(),
            init_m: rng.cvec_unit(shape_m.dim(trivial)),
            total: trivial,
            init_charge_a: trivial,
            init_charge_b: trivial,
            honest_a: IWorldStrategy {
                party: Party::Alice,
                shape: shape_a.clone(),
                init: rng.cvec_unit(shape_a.dim(trivial)),
                moves: Vec::new(),
            },
            honest_b: IWorldStrategy {
                party: Party::Bob,
                shape: shape_b.clone(),
                init: rng.cvec_unit(shape_b.dim(trivial)),
                moves: Vec::new(),
            },
            meas_a: random_measurement(&sys, &shape_a, rng),
            meas_b: random_measurement(&sys, &shape_b, rng),
        };
        for k in 0..rounds {
            let party = if k % 2 == 0 { Party::Alice } else { Party::Bob };
            let shape_self = if party == Party::Alice {
                &shape_a
            } else {
                &shape_b
            };
            let mut blocks = BTreeMap::new();
            for q in 0..sys.n_charges() {
                let side = proto.side_dim(party, shape_self, q);
                if side == 0 {
                    continue;
                }
                blocks.insert(q, rng.unitary(side));
            }
            let mv = IWorldMove {
                by_opponent_charge: blocks,
            };
            match party {
                Party::Alice => proto.honest_a.moves.push(mv),
                Party::Bob => proto.honest_b.moves.push(mv),
            }
        }
        proto.validate()?;
        return Ok(proto);
    }
}

/// Random invariant-world cheating strategy: possibly different private
/// shape, contracting (sometimes strictly norm-reducing) blocks.
pub fn random_iworld_cheat(
    p: &Protocol,
    party: Party,
    rng: &mut Rng64,
) -> Result<IWorldStrategy> {
    let sys = &p.system;
    let k = sys.n_charges();
    let trivial = sys.trivial();
    let mut dims = vec![0usize; k];
    dims[trivial] = rng.range(1, 2);
    for _ in 0..rng.range(1, 2) {
        let q = rng.below(k);
        if dims[q] == 0 {
            dims[q] = rng.range(1, 2);
        }
    }
    let shape = SectorShape { dims };
    let n_moves = p.rounds / 2 + usize::from(party == Party::Alice && p.rounds % 2 == 1);
    let mut moves = Vec::new();
    for _ in 0..n_moves {
        let mut blocks = BTreeMap::new();
        for q in 0..k {
            let side = p.side_dim(party, &shape, q);
            if side == 0 {
                continue;
            }
            let w = if rng.uniform() < 0.5 {
                rng.unitary(side)
            } else {
                rng.contracting(side, side, None)
            };
            blocks.insert(q, w);
        }
        moves.push(IWorldMove {
            by_opponent_charge: blocks,
        });
    }
    Ok(IWorldStrategy {
        party,
        shape: shape.clone(),
        init: rng.cvec_unit(shape.dim(trivial)),
        moves,
    })
}

/// Random unrestricted-world cheat against a compiled game's message space:
/// dense contracting maps that freely violate the tag structure.
pub fn random_uworld_cheat(
    msg: &MsgLayout,
    party: Party,
    n_moves: usize,
    rng: &mut Rng64,
) -> UWorldStrategy {
    let dim_private = rng.range(1, 3);
    let side = dim_private * msg.dim;
    let moves = (0..n_moves)
        .map(|_| {
            if rng.uniform() < 0.4 {
                rng.unitary(side)
            } else {
                let target = 0.8 + 0.2 * rng.uniform();
                rng.contracting(side, side, Some(target))
            }
        })
        .collect();
    UWorldStrategy {
        party,
        dim_private,
        init: rng.cvec_unit(dim_private),
        moves,
    }
}

/// A cheat that always flips the opponent-charge tag when possible; with an
/// honest recipient every message is rejected.
pub fn tag_flipping_cheat(msg: &MsgLayout, party: Party, n_moves: usize) -> UWorldStrategy {
    let dim = msg.dim;
    let mut w = CMat::zeros(dim, dim);
    for (i, e) in msg.entries.iter().enumerate() {
        // Send this component to a component with a different opponent tag.
        let target = msg.entries.iter().enumerate().find(|(_, t)| match party {
            Party::Alice => t.q_b != e.q_b && t.dim_m == e.dim_m,
            Party::Bob => t.q_a != e.q_a && t.dim_m == e.dim_m,
        });
        let _ = i;
        if let Some((_, t)) = target {
            for d in 0..e.dim_m {
                w[(t.offset + d, e.offset + d)] = cr(1.0);
            }
        }
    }
    UWorldStrategy {
        party,
        dim_private: 1,
        init: crate::linalg::CVec::from_vec(vec![cr(1.0)]),
        moves: (0..n_moves).map(|_| w.clone()).collect(),
    }
}
