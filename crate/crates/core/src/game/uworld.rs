//! Unrestricted-world games: dense product spaces with an explicit
//! format-tag message space.
//!
//! The message Hilbert space is the direct sum over charge triples
//! (q_A, q_B, q_M) and fusion-tag index mu of the per-charge message spaces;
//! the tag is an explicit part of the message. Recipients verify coherently
//! that their own charge matches the tag slot and abort otherwise.

use std::sync::Arc;

use crate::charge::{ChargeSystem, SectorShape};
use crate::error::{Error, Result};
use crate::game::{OutcomeDistribution, Party, GAME_DIM_CAP};
use crate::linalg::{op_norm_sq, CMat, CVec, ZERO};

/// Direct-sum layout of a party's space: consecutive per-charge segments.
#[derive(Debug, Clone)]
pub struct ChargeLayout {
    pub segments: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    pub dim: usize,
}

impl ChargeLayout {
    pub fn from_shape(system: &ChargeSystem, shape: &SectorShape) -> Self {
        let mut segments = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for q in 0..system.n_charges() {
            let d = shape.dim(q);
            if d == 0 {
                continue;
            }
            segments.push((q, d));
            offsets.push(dim);
            dim += d;
        }
        ChargeLayout {
            segments,
            offsets,
            dim,
        }
    }

    pub fn offset_of(&self, q: usize) -> Option<usize> {
        self.segments
            .iter()
            .position(|&(qq, _)| qq == q)
            .map(|i| self.offsets[i])
    }

    /// Charge of the dense basis index.
    pub fn charge_at(&self, idx: usize) -> usize {
        for (i, &(q, d)) in self.segments.iter().enumerate() {
            if idx < self.offsets[i] + d {
                return q;
            }
        }
        unreachable!("index out of layout range")
    }
}

/// One component of the tagged message space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagEntry {
    pub q_a: usize,
    pub q_b: usize,
    pub q_m: usize,
    pub mu: usize,
    pub dim_m: usize,
    pub offset: usize,
}

/// The tagged message space of a compiled game.
#[derive(Debug, Clone)]
pub struct MsgLayout {
    pub entries: Vec<TagEntry>,
    pub dim: usize,
}

impl MsgLayout {
    /// Enumerates message components for every charge triple with a nonzero
    /// tag space V_1^{q_A,q_B,q_M} and a nonzero per-charge message space.
    /// The tag slots range over all theory charges: the tag is part of the
    /// message, and a sender is free to claim any charge (verification
    /// against the recipient's actual charge happens on receipt).
    pub fn build(system: &ChargeSystem, shape_m: &SectorShape) -> Self {
        let k = system.n_charges();
        let mut entries = Vec::new();
        let mut dim = 0;
        for q_a in 0..k {
            for q_b in 0..k {
                for q_m in 0..k {
                    let dm = shape_m.dim(q_m);
                    if dm == 0 {
                        continue;
                    }
                    let tags = system.joint_multiplicity(&[q_a, q_b, q_m], system.trivial());
                    for mu in 0..tags as usize {
                        entries.push(TagEntry {
                            q_a,
                            q_b,
                            q_m,
                            mu,
                            dim_m: dm,
                            offset: dim,
                        });
                        dim += dm;
                    }
                }
            }
        }
        MsgLayout { entries, dim }
    }

    pub fn entry_at(&self, idx: usize) -> &TagEntry {
        let pos = self
            .entries
            .partition_point(|e| e.offset <= idx)
            .saturating_sub(1);
        &self.entries[pos]
    }

    pub fn find(&self, q_a: usize, q_b: usize, q_m: usize, mu: usize) -> Option<&TagEntry> {
        self.entries
            .iter()
            .find(|e| e.q_a == q_a && e.q_b == q_b && e.q_m == q_m && e.mu == mu)
    }
}

/// An unrestricted-world protocol over dense spaces; the honest data is
/// produced by the protocol compiler.
#[derive(Debug, Clone)]
pub struct UWorldProtocol {
    pub name: String,
    pub system: Arc<ChargeSystem>,
    pub rounds: usize,
    pub alice: ChargeLayout,
    pub bob: ChargeLayout,
    pub msg: MsgLayout,
    pub init_a: CVec,
    pub init_b: CVec,
    pub init_m: CVec,
    pub honest_a: Vec<CMat>,
    pub honest_b: Vec<CMat>,
    pub meas_a: Vec<CMat>,
    pub meas_b: Vec<CMat>,
}

/// A cheater's data: an arbitrary private space, initial state, and dense
/// contracting maps on (private (x) message).
#[derive(Debug, Clone)]
pub struct UWorldStrategy {
    pub party: Party,
    pub dim_private: usize,
    pub init: CVec,
    pub moves: Vec<CMat>,
}

impl UWorldStrategy {
    pub fn contraction_violations(&self) -> Vec<(usize, f64)> {
        self.moves
            .iter()
            .enumerate()
            .filter_map(|(k, w)| {
                let n2 = op_norm_sq(w);
                (n2 > 1.0 + 1e-10).then_some((k, n2))
            })
            .collect()
    }

    /// Mass of matrix elements that connect different q_B tags (Alice) or
    /// q_A tags (Bob): the charge-conservation violation of the strategy
    /// when judged by invariant-world rules.
    pub fn conservation_violation(&self, msg: &MsgLayout) -> f64 {
        let dm = msg.dim;
        let mut worst = 0.0f64;
        for w in &self.moves {
            let dp = w.nrows() / dm;
            for r in 0..w.nrows() {
                for cc in 0..w.ncols() {
                    let er = msg.entry_at(r % dm);
                    let ec = msg.entry_at(cc % dm);
                    let _ = dp;
                    let (tr, tc) = match self.party {
                        Party::Alice => (er.q_b, ec.q_b),
                        Party::Bob => (er.q_a, ec.q_a),
                    };
                    if tr != tc {
                        worst = worst.max(w[(r, cc)].norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy)]
pub enum UPlayerSpec<'a> {
    Honest,
    Cheat(&'a UWorldStrategy),
}

struct UGame {
    da: usize,
    db: usize,
    dm: usize,
    amps: CVec,
}

impl UGame {
    fn idx(&self, ia: usize, ib: usize, im: usize) -> usize {
        (ia * self.db + ib) * self.dm + im
    }

    fn apply_alice(&mut self, w: &CMat) {
        let side = self.da * self.dm;
        assert_eq!(w.nrows(), side);
        let mut x = CVec::zeros(side);
        for ib in 0..self.db {
            for ia in 0..self.da {
                for im in 0..self.dm {
                    x[ia * self.dm + im] = self.amps[self.idx(ia, ib, im)];
                }
            }
            let y = w * &x;
            for ia in 0..self.da {
                for im in 0..self.dm {
                    let idx = self.idx(ia, ib, im);
                    self.amps[idx] = y[ia * self.dm + im];
                }
            }
        }
    }

    fn apply_bob(&mut self, w: &CMat) {
        let side = self.db * self.dm;
        assert_eq!(w.nrows(), side);
        let mut x = CVec::zeros(side);
        for ia in 0..self.da {
            for ib in 0..self.db {
                for im in 0..self.dm {
                    x[ib * self.dm + im] = self.amps[self.idx(ia, ib, im)];
                }
            }
            let y = w * &x;
            for ib in 0..self.db {
                for im in 0..self.dm {
                    let idx = self.idx(ia, ib, im);
                    self.amps[idx] = y[ib * self.dm + im];
                }
            }
        }
    }
}

/// Runs an unrestricted-world game. Honest recipients verify the message
/// format inside their moves; after the final round the honest recipient of
/// the last message applies one more format verification before measuring.
pub fn run_uworld(
    p: &UWorldProtocol,
    alice: UPlayerSpec<'_>,
    bob: UPlayerSpec<'_>,
) -> Result<OutcomeDistribution> {
    if matches!(alice, UPlayerSpec::Cheat(_)) && matches!(bob, UPlayerSpec::Cheat(_)) {
        return Err(Error::Unsupported("both players cheating is not modelled".into()));
    }
    let da = match alice {
        UPlayerSpec::Honest => p.alice.dim,
        UPlayerSpec::Cheat(s) => {
            if s.party != Party::Alice {
                return Err(Error::InvalidArgument("strategy is not Alice's".into()));
            }
            s.dim_private
        }
    };
    let db = match bob {
        UPlayerSpec::Honest => p.bob.dim,
        UPlayerSpec::Cheat(s) => {
            if s.party != Party::Bob {
                return Err(Error::InvalidArgument("strategy is not Bob's".into()));
            }
            s.dim_private
        }
    };
    let dm = p.msg.dim;
    let dim = da * db * dm;
    if dim > GAME_DIM_CAP {
        return Err(Error::ResourceLimit(format!(
            "joint dimension {dim} exceeds cap {GAME_DIM_CAP}"
        )));
    }
    let init_a = match alice {
        UPlayerSpec::Honest => &p.init_a,
        UPlayerSpec::Cheat(s) => &s.init,
    };
    let init_b = match bob {
        UPlayerSpec::Honest => &p.init_b,
        UPlayerSpec::Cheat(s) => &s.init,
    };
    if init_a.len() != da || init_b.len() != db || p.init_m.len() != dm {
        return Err(Error::DimensionMismatch("initial vectors do not match".into()));
    }
    let mut game = UGame {
        da,
        db,
        dm,
        amps: CVec::zeros(dim),
    };
    for ia in 0..da {
        for ib in 0..db {
            for im in 0..dm {
                let v = init_a[ia] * init_b[ib] * p.init_m[im];
                if v != ZERO {
                    let idx = game.idx(ia, ib, im);
                    game.amps[idx] = v;
                }
            }
        }
    }
    for k in 0..p.rounds {
        if k % 2 == 0 {
            let w = match alice {
                UPlayerSpec::Honest => p.honest_a.get(k / 2),
                UPlayerSpec::Cheat(s) => s.moves.get(k / 2),
            }
            .ok_or_else(|| Error::InvalidArgument(format!("alice has no move {}", k / 2)))?;
            game.apply_alice(w);
        } else {
            let w = match bob {
                UPlayerSpec::Honest => p.honest_b.get(k / 2),
                UPlayerSpec::Cheat(s) => s.moves.get(k / 2),
            }
            .ok_or_else(|| Error::InvalidArgument(format!("bob has no move {}", k / 2)))?;
            game.apply_bob(w);
        }
    }
    // Final format verification by the honest recipient of the last message.
    if p.rounds > 0 {
        if p.rounds % 2 == 1 {
            if matches!(bob, UPlayerSpec::Honest) {
                apply_format_mask(p, &mut game, Party::Bob);
            }
        } else if matches!(alice, UPlayerSpec::Honest) {
            apply_format_mask(p, &mut game, Party::Alice);
        }
    }
    match (alice, bob) {
        (UPlayerSpec::Honest, UPlayerSpec::Honest) => {
            let mut labels = Vec::new();
            let mut probs = Vec::new();
            for (oa, pa) in p.meas_a.iter().enumerate() {
                let after_a = apply_meas(&game, pa, Party::Alice);
                for (ob, pb) in p.meas_b.iter().enumerate() {
                    let g2 = UGame {
                        amps: after_a.clone(),
                        ..game
                    };
                    let after_b = apply_meas(&g2, pb, Party::Bob);
                    labels.push(format!("a{oa}|b{ob}"));
                    probs.push(after_b.norm_squared());
                }
            }
            Ok(OutcomeDistribution::from_uworld(labels, probs))
        }
        (UPlayerSpec::Cheat(_), _) => {
            let mut labels = Vec::new();
            let mut probs = Vec::new();
            for (ob, pb) in p.meas_b.iter().enumerate() {
                let after = apply_meas(&game, pb, Party::Bob);
                labels.push(format!("b{ob}"));
                probs.push(after.norm_squared());
            }
            Ok(OutcomeDistribution::from_uworld(labels, probs))
        }
        (_, UPlayerSpec::Cheat(_)) => {
            let mut labels = Vec::new();
            let mut probs = Vec::new();
            for (oa, pa) in p.meas_a.iter().enumerate() {
                let after = apply_meas(&game, pa, Party::Alice);
                labels.push(format!("a{oa}"));
                probs.push(after.norm_squared());
            }
            Ok(OutcomeDistribution::from_uworld(labels, probs))
        }
    }
}

impl OutcomeDistribution {
    fn from_uworld(labels: Vec<String>, probs: Vec<f64>) -> Self {
        let total: f64 = probs.iter().sum();
        OutcomeDistribution {
            labels,
            probs,
            abort: (1.0 - total).max(0.0),
        }
    }
}

/// Zeroes every amplitude whose party charge disagrees with the matching
/// tag slot of the message.
fn apply_format_mask(p: &UWorldProtocol, game: &mut UGame, party: Party) {
    for im in 0..game.dm {
        let e = p.msg.entry_at(im);
        match party {
            Party::Bob => {
                for ib in 0..game.db {
                    if p.bob.charge_at(ib) != e.q_b {
                        for ia in 0..game.da {
                            let idx = game.idx(ia, ib, im);
                            game.amps[idx] = ZERO;
                        }
                    }
                }
            }
            Party::Alice => {
                for ia in 0..game.da {
                    if p.alice.charge_at(ia) != e.q_a {
                        for ib in 0..game.db {
                            let idx = game.idx(ia, ib, im);
                            game.amps[idx] = ZERO;
                        }
                    }
                }
            }
        }
    }
}

fn apply_meas(game: &UGame, proj: &CMat, party: Party) -> CVec {
    let mut out = CVec::zeros(game.amps.len());
    match party {
        Party::Alice => {
            for ib in 0..game.db {
                for im in 0..game.dm {
                    for r in 0..game.da {
                        let mut acc = ZERO;
                        for s in 0..game.da {
                            acc += proj[(r, s)] * game.amps[game.idx(s, ib, im)];
                        }
                        out[game.idx(r, ib, im)] = acc;
                    }
                }
            }
        }
        Party::Bob => {
            for ia in 0..game.da {
                for im in 0..game.dm {
                    for r in 0..game.db {
                        let mut acc = ZERO;
                        for s in 0..game.db {
                            acc += proj[(r, s)] * game.amps[game.idx(ia, s, im)];
                        }
                        out[game.idx(ia, r, im)] = acc;
                    }
                }
            }
        }
    }
    out
}
