//! Two-party alternating-message quantum games with abort semantics.
//!
//! Invariant-world games evolve a subnormalized pure state over a three-party
//! sector space (Alice, Bob, message). A move by one party acts on that
//! party's flavors and the message, block by block in the opponent's charge;
//! the squared norm of the state is the probability that the game has not
//! been aborted. Unrestricted-world games (see [`uworld`]) evolve dense
//! vectors over explicit product spaces.

pub mod bundled;
pub mod random;
pub mod schema;
pub mod uworld;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::charge::{ChargeSystem, SectorShape};
use crate::error::{Error, Result};
use crate::linalg::{cr, op_norm_sq, CMat, CVec};
use crate::sector::space::JointSpace;

pub use uworld::{run_uworld, UPlayerSpec, UWorldProtocol, UWorldStrategy};

/// Maximum joint Hilbert-space dimension evolved by the engine.
pub const GAME_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn index(self) -> usize {
        match self {
            Party::Alice => 0,
            Party::Bob => 1,
        }
    }

    pub fn opponent(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        }
    }
}

/// An invariant projective measurement on one party: for each outcome, one
/// projector block per charge, summing to the identity charge by charge.
#[derive(Debug, Clone)]
pub struct InvariantMeasurement {
    pub outcomes: Vec<Vec<CMat>>,
}

impl InvariantMeasurement {
    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    /// Measure the party's charge: one outcome per charge with nonzero
    /// dimension, in charge order.
    pub fn charge_measurement(system: &ChargeSystem, shape: &SectorShape) -> Self {
        let k = system.n_charges();
        let mut outcomes = Vec::new();
        for q in 0..k {
            if shape.dim(q) == 0 {
                continue;
            }
            let mut blocks: Vec<CMat> = (0..k)
                .map(|p| CMat::zeros(shape.dim(p), shape.dim(p)))
                .collect();
            blocks[q] = CMat::identity(shape.dim(q), shape.dim(q));
            outcomes.push(blocks);
        }
        InvariantMeasurement { outcomes }
    }

    pub fn validate(&self, system: &ChargeSystem, shape: &SectorShape, tol: f64) -> Result<()> {
        let k = system.n_charges();
        for q in 0..k {
            let d = shape.dim(q);
            let mut sum = CMat::zeros(d, d);
            for o in &self.outcomes {
                if o.len() != k {
                    return Err(Error::DimensionMismatch(
                        "measurement outcome missing charge blocks".into(),
                    ));
                }
                let p = &o[q];
                if p.nrows() != d || p.ncols() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "projector block for charge {} has wrong shape",
                        system.label(q)
                    )));
                }
                if crate::linalg::max_abs_diff(&(p * p), p) > tol
                    || crate::linalg::max_abs_diff(&p.adjoint(), p) > tol
                {
                    return Err(Error::InvalidArgument(format!(
                        "outcome block for charge {} is not an orthogonal projector",
                        system.label(q)
                    )));
                }
                sum += p;
            }
            if crate::linalg::max_abs_diff(&sum, &CMat::identity(d, d)) > tol {
                return Err(Error::InvalidArgument(format!(
                    "measurement is not complete on charge {}",
                    system.label(q)
                )));
            }
        }
        Ok(())
    }
}

/// One round's contracting map for a party, block by opponent charge. Each
/// matrix acts on the side space of (own flavors x message) at that fixed
/// opponent charge.
#[derive(Debug, Clone)]
pub struct IWorldMove {
    pub by_opponent_charge: BTreeMap<usize, CMat>,
}

/// A party's strategy: private sector shape, initial trivial-charge state,
/// and one move per own round. Honest strategies reuse the protocol shapes;
/// a cheater may declare different private spaces.
#[derive(Debug, Clone)]
pub struct IWorldStrategy {
    pub party: Party,
    pub shape: SectorShape,
    pub init: CVec,
    pub moves: Vec<IWorldMove>,
}

/// An invariant-world protocol. The honest initial state is
/// `xi_A (x) xi_B (x) m0` with every factor in its trivial sector unless the
/// initial charges say otherwise (nontrivial starts are honest-play only).
#[derive(Debug, Clone)]
pub struct Protocol {
    pub name: String,
    pub system: Arc<ChargeSystem>,
    pub rounds: usize,
    pub shape_m: SectorShape,
    pub init_m: CVec,
    pub total: usize,
    pub init_charge_a: usize,
    pub init_charge_b: usize,
    pub honest_a: IWorldStrategy,
    pub honest_b: IWorldStrategy,
    pub meas_a: InvariantMeasurement,
    pub meas_b: InvariantMeasurement,
}

/// Per-outcome probabilities plus the abort probability (1 - sum).
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
    pub abort: f64,
}

impl OutcomeDistribution {
    fn from_probs(labels: Vec<String>, probs: Vec<f64>) -> Self {
        let total: f64 = probs.iter().sum();
        OutcomeDistribution {
            labels,
            probs,
            abort: (1.0 - total).max(0.0),
        }
    }

    /// Max absolute deviation across outcome probabilities and abort.
    pub fn max_deviation(&self, other: &OutcomeDistribution) -> f64 {
        let mut d = (self.abort - other.abort).abs();
        if self.probs.len() != other.probs.len() {
            return f64::INFINITY;
        }
        for (a, b) in self.probs.iter().zip(&other.probs) {
            d = d.max((a - b).abs());
        }
        d
    }

    pub fn total_probability(&self) -> f64 {
        self.probs.iter().sum()
    }
}

#[derive(Clone, Copy)]
pub enum PlayerSpec<'a> {
    Honest,
    Cheat(&'a IWorldStrategy),
}

/// Index data for the space a mover touches at one fixed opponent charge:
/// every (own charge, message charge, fusion tag) consistent with the total
/// charge, flattened over (own flavor, message flavor). The enumeration does
/// not depend on the opponent's flavor dimensions, so an honest strategy
/// remains applicable whatever private spaces the opponent uses.
pub struct SideSpace {
    pub entries: Vec<SideEntry>,
    pub dim: usize,
}

pub struct SideEntry {
    pub q_self: usize,
    pub q_msg: usize,
    pub mu: usize,
    pub side_offset: usize,
    pub d_self: usize,
    pub d_msg: usize,
}

/// Side space of `mover` (0 = Alice, 1 = Bob) at fixed opponent charge,
/// ordered lexicographically in (own charge, message charge, tag) to match
/// the joint-space block order.
pub fn side_layout(
    system: &ChargeSystem,
    shape_self: &SectorShape,
    shape_m: &SectorShape,
    mover: usize,
    q_opp: usize,
    total: usize,
) -> SideSpace {
    let k = system.n_charges();
    let mut entries = Vec::new();
    let mut dim = 0usize;
    for q_self in 0..k {
        let d_self = shape_self.dim(q_self);
        if d_self == 0 {
            continue;
        }
        for q_msg in 0..k {
            let d_msg = shape_m.dim(q_msg);
            if d_msg == 0 {
                continue;
            }
            let charges = if mover == 0 {
                [q_self, q_opp, q_msg]
            } else {
                [q_opp, q_self, q_msg]
            };
            let mult = system.joint_multiplicity(&charges, total) as usize;
            for mu in 0..mult {
                entries.push(SideEntry {
                    q_self,
                    q_msg,
                    mu,
                    side_offset: dim,
                    d_self,
                    d_msg,
                });
                dim += d_self * d_msg;
            }
        }
    }
    SideSpace { entries, dim }
}

/// Applies a mover's round map in place. `mover` is 0 (Alice) or 1 (Bob).
fn apply_iworld_move(
    space: &JointSpace,
    amps: &mut CVec,
    mover: usize,
    mv: &IWorldMove,
) -> Result<()> {
    let opp = 1 - mover;
    let opp_shape = &space.shapes[opp];
    for q_opp in 0..space.system.n_charges() {
        let d_opp = opp_shape.dim(q_opp);
        if d_opp == 0 {
            continue;
        }
        let side = side_layout(
            &space.system,
            &space.shapes[mover],
            &space.shapes[2],
            mover,
            q_opp,
            space.total,
        );
        if side.dim == 0 {
            continue;
        }
        let w = mv.by_opponent_charge.get(&q_opp).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "move has no block for opponent charge {}",
                space.system.label(q_opp)
            ))
        })?;
        if w.nrows() != side.dim || w.ncols() != side.dim {
            return Err(Error::DimensionMismatch(format!(
                "move block for opponent charge {} is {}x{}, side dimension {}",
                space.system.label(q_opp),
                w.nrows(),
                w.ncols(),
                side.dim
            )));
        }
        let mut x = CVec::zeros(side.dim);
        for io in 0..d_opp {
            // Gather the side vector at this opponent flavor index.
            for e in &side.entries {
                let charges = if mover == 0 {
                    [e.q_self, q_opp, e.q_msg]
                } else {
                    [q_opp, e.q_self, e.q_msg]
                };
                let b = space.block(&charges, e.mu).expect("side entry maps to a block");
                for is in 0..e.d_self {
                    for im in 0..e.d_msg {
                        let flavors = if mover == 0 {
                            [is, io, im]
                        } else {
                            [io, is, im]
                        };
                        x[e.side_offset + is * e.d_msg + im] = amps[b.amp_index(&flavors)];
                    }
                }
            }
            let y = w * &x;
            for e in &side.entries {
                let charges = if mover == 0 {
                    [e.q_self, q_opp, e.q_msg]
                } else {
                    [q_opp, e.q_self, e.q_msg]
                };
                let b = space.block(&charges, e.mu).expect("side entry maps to a block");
                for is in 0..e.d_self {
                    for im in 0..e.d_msg {
                        let flavors = if mover == 0 {
                            [is, io, im]
                        } else {
                            [io, is, im]
                        };
                        amps[b.amp_index(&flavors)] = y[e.side_offset + is * e.d_msg + im];
                    }
                }
            }
        }
    }
    Ok(())
}

/// Applies a per-charge projector block to one party's flavor index.
fn apply_party_blocks(space: &JointSpace, amps: &CVec, party: usize, blocks: &[CMat]) -> CVec {
    let mut out = CVec::zeros(amps.len());
    for b in &space.blocks {
        let q = b.charges[party];
        let p = &blocks[q];
        let dp = b.dims[party];
        let inner: usize = b.dims[party + 1..].iter().product();
        let outer: usize = b.dims[..party].iter().product();
        for o in 0..outer {
            for i in 0..inner {
                for r in 0..dp {
                    let mut acc = crate::linalg::ZERO;
                    for s in 0..dp {
                        acc += p[(r, s)] * amps[b.offset + (o * dp + s) * inner + i];
                    }
                    out[b.offset + (o * dp + r) * inner + i] = acc;
                }
            }
        }
    }
    out
}

struct GameSetup {
    space: Arc<JointSpace>,
    amps: CVec,
}

fn setup_game(p: &Protocol, alice: &IWorldStrategy, bob: &IWorldStrategy) -> Result<GameSetup> {
    let space = JointSpace::new(
        p.system.clone(),
        vec![alice.shape.clone(), bob.shape.clone(), p.shape_m.clone()],
        p.total,
    )?;
    if space.dim > GAME_DIM_CAP {
        return Err(Error::ResourceLimit(format!(
            "joint dimension {} exceeds cap {GAME_DIM_CAP}",
            space.dim
        )));
    }
    let trivial = p.system.trivial();
    let (qa, qb) = (p.init_charge_a, p.init_charge_b);
    let block = space
        .block(&[qa, qb, trivial], 0)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "initial sector ({}, {}, {}) is not allowed by fusion",
                p.system.label(qa),
                p.system.label(qb),
                p.system.label(trivial)
            ))
        })?
        .clone();
    let (da, db, dm) = (block.dims[0], block.dims[1], block.dims[2]);
    if alice.init.len() != da || bob.init.len() != db || p.init_m.len() != dm {
        return Err(Error::DimensionMismatch(
            "initial state vectors do not match the initial sector dims".into(),
        ));
    }
    let mut amps = CVec::zeros(space.dim);
    for ia in 0..da {
        for ib in 0..db {
            for im in 0..dm {
                amps[block.amp_index(&[ia, ib, im])] =
                    alice.init[ia] * bob.init[ib] * p.init_m[im];
            }
        }
    }
    Ok(GameSetup { space, amps })
}

/// Runs an invariant-world game. With both players honest the joint outcome
/// distribution is returned; with one cheater, only the honest party's
/// measurement is reported. Both-cheater runs are not supported.
pub fn run_game(
    p: &Protocol,
    alice: PlayerSpec<'_>,
    bob: PlayerSpec<'_>,
) -> Result<OutcomeDistribution> {
    let trivial = p.system.trivial();
    let someone_cheats =
        matches!(alice, PlayerSpec::Cheat(_)) || matches!(bob, PlayerSpec::Cheat(_));
    if someone_cheats && (p.total != trivial || p.init_charge_a != trivial || p.init_charge_b != trivial)
    {
        return Err(Error::Unsupported(
            "cheating runs need trivial total charge; apply the compensating-charge reduction"
                .into(),
        ));
    }
    let a_strat = match alice {
        PlayerSpec::Honest => &p.honest_a,
        PlayerSpec::Cheat(s) => {
            if s.party != Party::Alice {
                return Err(Error::InvalidArgument("strategy is not Alice's".into()));
            }
            s
        }
    };
    let b_strat = match bob {
        PlayerSpec::Honest => &p.honest_b,
        PlayerSpec::Cheat(s) => {
            if s.party != Party::Bob {
                return Err(Error::InvalidArgument("strategy is not Bob's".into()));
            }
            s
        }
    };
    if matches!(alice, PlayerSpec::Cheat(_)) && matches!(bob, PlayerSpec::Cheat(_)) {
        return Err(Error::Unsupported("both players cheating is not modelled".into()));
    }
    let mut setup = setup_game(p, a_strat, b_strat)?;
    for k in 0..p.rounds {
        let (mover, strat) = if k % 2 == 0 {
            (0usize, a_strat)
        } else {
            (1usize, b_strat)
        };
        let idx = k / 2;
        let mv = strat.moves.get(idx).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{} has no move for round {}",
                strat.party.name(),
                k + 1
            ))
        })?;
        apply_iworld_move(&setup.space, &mut setup.amps, mover, mv)?;
    }
    let space = &setup.space;
    let amps = &setup.amps;
    match (alice, bob) {
        (PlayerSpec::Honest, PlayerSpec::Honest) => {
            let mut labels = Vec::new();
            let mut probs = Vec::new();
            for oa in 0..p.meas_a.n_outcomes() {
                let after_a = apply_party_blocks(space, amps, 0, &p.meas_a.outcomes[oa]);
                for ob in 0..p.meas_b.n_outcomes() {
                    let after_b = apply_party_blocks(space, &after_a, 1, &p.meas_b.outcomes[ob]);
                    labels.push(format!("a{oa}|b{ob}"));
                    probs.push(after_b.norm_squared());
                }
            }
            Ok(OutcomeDistribution::from_probs(labels, probs))
        }
        (PlayerSpec::Cheat(_), _) => Ok(measure_single(space, amps, 1, &p.meas_b, "b")),
        (_, PlayerSpec::Cheat(_)) => Ok(measure_single(space, amps, 0, &p.meas_a, "a")),
    }
}

fn measure_single(
    space: &JointSpace,
    amps: &CVec,
    party: usize,
    meas: &InvariantMeasurement,
    prefix: &str,
) -> OutcomeDistribution {
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    for o in 0..meas.n_outcomes() {
        let after = apply_party_blocks(space, amps, party, &meas.outcomes[o]);
        labels.push(format!("{prefix}{o}"));
        probs.push(after.norm_squared());
    }
    OutcomeDistribution::from_probs(labels, probs)
}

impl Protocol {
    /// Validates measurements, honest contraction, and that honest play
    /// never aborts.
    pub fn validate(&self) -> Result<()> {
        self.meas_a
            .validate(&self.system, &self.honest_a.shape, 1e-10)?;
        self.meas_b
            .validate(&self.system, &self.honest_b.shape, 1e-10)?;
        for (strat, who) in [(&self.honest_a, "alice"), (&self.honest_b, "bob")] {
            let report = validate_strategy(self, strat)?;
            if !report.clean() {
                return Err(Error::NotContracting(format!(
                    "honest {who} strategy: {report:?}"
                )));
            }
        }
        let dist = run_game(self, PlayerSpec::Honest, PlayerSpec::Honest)?;
        if dist.abort > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "honest play aborts with probability {:.3e}",
                dist.abort
            )));
        }
        Ok(())
    }

    /// Side dimension of the given mover at a fixed opponent charge;
    /// useful when building strategies.
    pub fn side_dim(&self, mover: Party, shape_self: &SectorShape, q_opp: usize) -> usize {
        side_layout(
            &self.system,
            shape_self,
            &self.shape_m,
            mover.index(),
            q_opp,
            self.total,
        )
        .dim
    }
}

/// Contraction and structure report for a strategy against a protocol.
#[derive(Debug, Clone)]
pub struct StrategyReport {
    /// (round, opponent charge label, squared operator norm) of violations.
    pub contraction_violations: Vec<(usize, String, f64)>,
    /// Rounds whose move is missing an opponent-charge block.
    pub missing_blocks: Vec<(usize, String)>,
}

impl StrategyReport {
    pub fn clean(&self) -> bool {
        self.contraction_violations.is_empty() && self.missing_blocks.is_empty()
    }
}

/// Checks W^dag W <= I for every move block and that every opponent charge
/// with a nonzero side space is covered. (I-world strategies conserve the
/// opponent's charge by construction of their block form.)
pub fn validate_strategy(p: &Protocol, s: &IWorldStrategy) -> Result<StrategyReport> {
    let mut report = StrategyReport {
        contraction_violations: Vec::new(),
        missing_blocks: Vec::new(),
    };
    for (k, mv) in s.moves.iter().enumerate() {
        for q in 0..p.system.n_charges() {
            let side = p.side_dim(s.party, &s.shape, q);
            if side == 0 {
                continue;
            }
            match mv.by_opponent_charge.get(&q) {
                None => report
                    .missing_blocks
                    .push((k, p.system.label(q).to_string())),
                Some(w) => {
                    let norm2 = op_norm_sq(w);
                    if norm2 > 1.0 + 1e-10 {
                        report.contraction_violations.push((
                            k,
                            p.system.label(q).to_string(),
                            norm2,
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Runs two (protocol, cheating strategy) pairs against the honest opponent
/// and compares the honest party's distribution, abort included.
pub fn strategies_equivalent(
    p1: &Protocol,
    s1: &IWorldStrategy,
    p2: &Protocol,
    s2: &IWorldStrategy,
    tol: f64,
) -> Result<(bool, f64)> {
    let run = |p: &Protocol, s: &IWorldStrategy| -> Result<OutcomeDistribution> {
        match s.party {
            Party::Alice => run_game(p, PlayerSpec::Cheat(s), PlayerSpec::Honest),
            Party::Bob => run_game(p, PlayerSpec::Honest, PlayerSpec::Cheat(s)),
        }
    };
    let d1 = run(p1, s1)?;
    let d2 = run(p2, s2)?;
    let dev = d1.max_deviation(&d2);
    Ok((dev <= tol, dev))
}

/// Materializes a move as a dense operator on the full joint space
/// (test and verification helper).
pub fn move_as_joint_operator(
    space: &Arc<JointSpace>,
    mover: usize,
    mv: &IWorldMove,
) -> Result<CMat> {
    let mut m = CMat::zeros(space.dim, space.dim);
    for j in 0..space.dim {
        let mut e = CVec::zeros(space.dim);
        e[j] = cr(1.0);
        apply_iworld_move(space, &mut e, mover, mv)?;
        m.set_column(j, &e);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::from_group;
    use crate::group::{cyclic, irreps_of};
    use crate::linalg::{identity, Rng64};

    fn z2() -> Arc<ChargeSystem> {
        from_group(&irreps_of(&cyclic(2).unwrap()).unwrap()).unwrap()
    }

    /// One-round game: Alice applies the identity, measurement on |0> gives
    /// outcome 0 with certainty.
    #[test]
    fn one_round_trivial_game() {
        let sys = z2();
        let shape = SectorShape::new(vec![2, 0]).unwrap();
        let shape_m = SectorShape::new(vec![1, 0]).unwrap();
        let mut mv = BTreeMap::new();
        mv.insert(0usize, identity(2));
        let honest_a = IWorldStrategy {
            party: Party::Alice,
            shape: shape.clone(),
            init: CVec::from_vec(vec![cr(1.0), cr(0.0)]),
            moves: vec![IWorldMove {
                by_opponent_charge: mv,
            }],
        };
        let honest_b = IWorldStrategy {
            party: Party::Bob,
            shape: SectorShape::new(vec![1, 0]).unwrap(),
            init: CVec::from_vec(vec![cr(1.0)]),
            moves: vec![],
        };
        // Measurement {|0><0|, |1><1|} on Alice's 2-dim trivial sector.
        let mut p0 = CMat::zeros(2, 2);
        p0[(0, 0)] = cr(1.0);
        let mut p1 = CMat::zeros(2, 2);
        p1[(1, 1)] = cr(1.0);
        let z = CMat::zeros(0, 0);
        let meas_a = InvariantMeasurement {
            outcomes: vec![vec![p0, z.clone()], vec![p1, z.clone()]],
        };
        let meas_b = InvariantMeasurement {
            outcomes: vec![vec![identity(1), z.clone()]],
        };
        let p = Protocol {
            name: "trivial".into(),
            system: sys.clone(),
            rounds: 1,
            shape_m,
            init_m: CVec::from_vec(vec![cr(1.0)]),
            total: sys.trivial(),
            init_charge_a: sys.trivial(),
            init_charge_b: sys.trivial(),
            honest_a,
            honest_b,
            meas_a,
            meas_b,
        };
        p.validate().unwrap();
        let d = run_game(&p, PlayerSpec::Honest, PlayerSpec::Honest).unwrap();
        assert!((d.probs[0] - 1.0).abs() < 1e-12);
        assert!(d.abort <= 1e-12);
    }

    #[test]
    fn scaled_identity_cheat_aborts() {
        // Alice scales her two moves by 1/2 each: abort = 1 - 1/16.
        let p = bundled::toy_coinflip().unwrap();
        // 3-round variant so Alice moves twice: rounds A,B,A with a final
        // identity move for Alice.
        let mut p3 = p.clone();
        p3.rounds = 3;
        let mut extra = p3.honest_a.moves[0].clone();
        for (_, w) in extra.by_opponent_charge.iter_mut() {
            *w = identity(w.nrows());
        }
        p3.honest_a.moves.push(extra);
        p3.validate().unwrap();
        let mut cheat = p3.honest_a.clone();
        for mv in cheat.moves.iter_mut() {
            for (_, w) in mv.by_opponent_charge.iter_mut() {
                *w *= cr(0.5);
            }
        }
        let d = run_game(&p3, PlayerSpec::Cheat(&cheat), PlayerSpec::Honest).unwrap();
        assert!((d.abort - (1.0 - 1.0 / 16.0)).abs() < 1e-12, "{d:?}");
        // Scaling also multiplies every honest outcome probability by 1/16.
        let honest = run_game(&p3, PlayerSpec::Honest, PlayerSpec::Honest).unwrap();
        let honest_b_marginal: f64 = honest.probs.iter().sum::<f64>();
        assert!((d.total_probability() - honest_b_marginal / 16.0).abs() < 1e-12);
    }

    #[test]
    fn contraction_validation_flags_violations() {
        let p = bundled::toy_coinflip().unwrap();
        let mut bad = p.honest_a.clone();
        for mv in bad.moves.iter_mut() {
            for (_, w) in mv.by_opponent_charge.iter_mut() {
                *w *= cr(1.5);
            }
        }
        let rep = validate_strategy(&p, &bad).unwrap();
        assert!(!rep.clean());
        assert!(rep.contraction_violations[0].2 > 2.0);
        let good = validate_strategy(&p, &p.honest_a).unwrap();
        assert!(good.clean());
    }

    #[test]
    fn perturbed_strategy_detected() {
        let p = bundled::toy_coinflip().unwrap();
        let mut tweaked = p.honest_a.clone();
        let eps = 1e-3f64;
        let rot = CMat::from_row_slice(
            2,
            2,
            &[
                cr(eps.cos()),
                cr(-eps.sin()),
                cr(eps.sin()),
                cr(eps.cos()),
            ],
        );
        let w0 = tweaked.moves[0].by_opponent_charge.get_mut(&0).unwrap();
        *w0 = rot * w0.clone();
        let (same, dev) = strategies_equivalent(&p, &p.honest_a, &p, &tweaked, 1e-6).unwrap();
        assert!(!same);
        assert!(dev > 1e-6);
        let (ident, dev0) = strategies_equivalent(&p, &p.honest_a, &p, &p.honest_a, 1e-12).unwrap();
        assert!(ident);
        assert!(dev0 == 0.0);
    }

    #[test]
    fn single_shot_equals_composed() {
        // Composing per-round maps then measuring equals evaluating
        // V^dag E_b V on the initial state.
        let p = bundled::toy_coinflip().unwrap();
        let space = JointSpace::new(
            p.system.clone(),
            vec![
                p.honest_a.shape.clone(),
                p.honest_b.shape.clone(),
                p.shape_m.clone(),
            ],
            p.total,
        )
        .unwrap();
        let wa = move_as_joint_operator(&space, 0, &p.honest_a.moves[0]).unwrap();
        let wb = move_as_joint_operator(&space, 1, &p.honest_b.moves[0]).unwrap();
        let v = &wb * &wa;
        let setup = setup_game(&p, &p.honest_a, &p.honest_b).unwrap();
        let honest = run_game(&p, PlayerSpec::Honest, PlayerSpec::Honest).unwrap();
        // Bob's marginal for outcome ob via F = V^dag E_b V.
        for ob in 0..p.meas_b.n_outcomes() {
            let eb = {
                let mut m = CMat::zeros(space.dim, space.dim);
                for j in 0..space.dim {
                    let mut e = CVec::zeros(space.dim);
                    e[j] = cr(1.0);
                    let out = apply_party_blocks(&space, &e, 1, &p.meas_b.outcomes[ob]);
                    m.set_column(j, &out);
                }
                m
            };
            let f = v.adjoint() * &eb * &v;
            let expect = (setup.amps.adjoint() * &f * &setup.amps)[(0, 0)].re;
            let marginal: f64 = (0..p.meas_a.n_outcomes())
                .map(|oa| honest.probs[oa * p.meas_b.n_outcomes() + ob])
                .sum();
            assert!((expect - marginal).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_contracting_strategies_stay_subnormalized() {
        let sys = z2();
        for trial in 0..25u64 {
            let mut rng = Rng64::derive(31, trial);
            let p = random::random_protocol(sys.clone(), &mut rng, 3).unwrap();
            let cheat = random::random_iworld_cheat(&p, Party::Alice, &mut rng).unwrap();
            let d = run_game(&p, PlayerSpec::Cheat(&cheat), PlayerSpec::Honest).unwrap();
            assert!(d.total_probability() <= 1.0 + 1e-10, "trial {trial}: {d:?}");
            assert!(d.probs.iter().all(|&x| x >= -1e-12));
        }
    }
}
