//! Structured-text (JSON) schemas for charge systems, protocols, strategies
//! and sector states. Complex amplitudes are `[re, im]` pairs; matrices are
//! row-major nested arrays. All files carry `schema_version: 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charge::{
    from_group, from_schema, octet_like, su2_truncated, u1_truncated, ChargeSystem,
    ChargeSystemSchema, SectorShape,
};
use crate::error::{Error, Result};
use crate::game::{IWorldMove, IWorldStrategy, InvariantMeasurement, Party, Protocol};
use crate::group::{build_group, irreps_of, GroupSpec};
use crate::linalg::{c, CMat, CVec};
use crate::sector::space::SectorState;

pub const SCHEMA_VERSION: u32 = 1;

pub type CxPair = [f64; 2];
pub type MatrixSchema = Vec<Vec<CxPair>>;
pub type VectorSchema = Vec<CxPair>;

pub fn matrix_to_schema(m: &CMat) -> MatrixSchema {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|cc| [m[(r, cc)].re, m[(r, cc)].im]).collect())
        .collect()
}

pub fn matrix_from_schema(s: &MatrixSchema) -> Result<CMat> {
    let rows = s.len();
    let cols = s.first().map_or(0, |r| r.len());
    for r in s {
        if r.len() != cols {
            return Err(Error::Schema("ragged matrix rows".into()));
        }
    }
    Ok(CMat::from_fn(rows, cols, |r, cc| {
        c(s[r][cc][0], s[r][cc][1])
    }))
}

pub fn vector_to_schema(v: &CVec) -> VectorSchema {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_schema(s: &VectorSchema) -> CVec {
    CVec::from_iterator(s.len(), s.iter().map(|p| c(p[0], p[1])))
}

/// Charge-system reference: a built-in name or an inline user schema.
/// Built-ins: group names (`z<n>|s3|d4|q8`), `u1(<q_max>)`,
/// `su2(<j_max>)` with j_max in {1/2, 1, 3/2, 2}, and `octet`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSpec {
    Builtin(String),
    Custom(ChargeSystemSchema),
}

pub fn parse_system(spec: &SystemSpec) -> Result<Arc<ChargeSystem>> {
    match spec {
        SystemSpec::Custom(s) => from_schema(s),
        SystemSpec::Builtin(name) => build_system(name),
    }
}

/// Builds a charge system from a builtin name string.
pub fn build_system(name: &str) -> Result<Arc<ChargeSystem>> {
    let lower = name.trim().to_ascii_lowercase();
    if lower == "octet" {
        return Ok(octet_like());
    }
    if let Some(arg) = lower.strip_prefix("u1(").and_then(|s| s.strip_suffix(')')) {
        let q: i64 = arg
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad u1 window '{arg}'")))?;
        return u1_truncated(q);
    }
    if let Some(arg) = lower.strip_prefix("su2(").and_then(|s| s.strip_suffix(')')) {
        let twice = match arg {
            "1/2" => 1,
            "1" => 2,
            "3/2" => 3,
            "2" => 4,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "su2 supports j_max in {{1/2,1,3/2,2}}, got '{arg}'"
                )))
            }
        };
        return su2_truncated(twice);
    }
    let g = build_group(GroupSpec::Named(lower))?;
    from_group(&irreps_of(&g)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementSchema {
    /// outcomes[o] maps charge label -> projector block.
    pub outcomes: Vec<BTreeMap<String, MatrixSchema>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveSchema {
    /// Opponent charge label -> side-space matrix.
    pub by_opponent_charge: BTreeMap<String, MatrixSchema>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategySchema {
    pub party: String,
    pub shape: Vec<usize>,
    pub init: VectorSchema,
    pub moves: Vec<MoveSchema>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolSchema {
    pub schema_version: u32,
    pub name: String,
    pub system: SystemSpec,
    pub rounds: usize,
    pub total: String,
    pub init_charges: [String; 2],
    pub shape_message: Vec<usize>,
    pub init_message: VectorSchema,
    pub honest_alice: StrategySchema,
    pub honest_bob: StrategySchema,
    pub measurement_alice: MeasurementSchema,
    pub measurement_bob: MeasurementSchema,
}

/// Cheating-strategy file: either world. U-world moves are dense matrices on
/// (private (x) tagged message); I-world moves follow the block schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheatSchema {
    pub schema_version: u32,
    pub world: String,
    pub party: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_private: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    pub init: VectorSchema,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_moves: Option<Vec<MatrixSchema>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_moves: Option<Vec<MoveSchema>>,
}

fn parse_party(s: &str) -> Result<Party> {
    match s.to_ascii_lowercase().as_str() {
        "alice" => Ok(Party::Alice),
        "bob" => Ok(Party::Bob),
        other => Err(Error::Schema(format!("unknown party '{other}'"))),
    }
}

fn move_from_schema(sys: &ChargeSystem, m: &MoveSchema) -> Result<IWorldMove> {
    let mut by_opponent_charge = BTreeMap::new();
    for (label, mat) in &m.by_opponent_charge {
        by_opponent_charge.insert(sys.charge_by_label(label)?, matrix_from_schema(mat)?);
    }
    Ok(IWorldMove { by_opponent_charge })
}

fn move_to_schema(sys: &ChargeSystem, m: &IWorldMove) -> MoveSchema {
    MoveSchema {
        by_opponent_charge: m
            .by_opponent_charge
            .iter()
            .map(|(q, w)| (sys.label(*q).to_string(), matrix_to_schema(w)))
            .collect(),
    }
}

fn strategy_from_schema(sys: &ChargeSystem, s: &StrategySchema) -> Result<IWorldStrategy> {
    Ok(IWorldStrategy {
        party: parse_party(&s.party)?,
        shape: SectorShape::new(s.shape.clone())?,
        init: vector_from_schema(&s.init),
        moves: s
            .moves
            .iter()
            .map(|m| move_from_schema(sys, m))
            .collect::<Result<_>>()?,
    })
}

fn strategy_to_schema(sys: &ChargeSystem, s: &IWorldStrategy) -> StrategySchema {
    StrategySchema {
        party: s.party.name().into(),
        shape: s.shape.dims.clone(),
        init: vector_to_schema(&s.init),
        moves: s.moves.iter().map(|m| move_to_schema(sys, m)).collect(),
    }
}

fn measurement_from_schema(
    sys: &ChargeSystem,
    m: &MeasurementSchema,
) -> Result<InvariantMeasurement> {
    let k = sys.n_charges();
    let mut outcomes = Vec::new();
    for o in &m.outcomes {
        let mut blocks: Vec<CMat> = (0..k).map(|_| CMat::zeros(0, 0)).collect();
        for (label, mat) in o {
            blocks[sys.charge_by_label(label)?] = matrix_from_schema(mat)?;
        }
        outcomes.push(blocks);
    }
    Ok(InvariantMeasurement { outcomes })
}

fn measurement_to_schema(sys: &ChargeSystem, m: &InvariantMeasurement) -> MeasurementSchema {
    MeasurementSchema {
        outcomes: m
            .outcomes
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.nrows() > 0)
                    .map(|(q, b)| (sys.label(q).to_string(), matrix_to_schema(b)))
                    .collect()
            })
            .collect(),
    }
}

pub fn protocol_to_schema(p: &Protocol) -> ProtocolSchema {
    let sys = &p.system;
    ProtocolSchema {
        schema_version: SCHEMA_VERSION,
        name: p.name.clone(),
        system: SystemSpec::Builtin(sys.name.clone()),
        rounds: p.rounds,
        total: sys.label(p.total).to_string(),
        init_charges: [
            sys.label(p.init_charge_a).to_string(),
            sys.label(p.init_charge_b).to_string(),
        ],
        shape_message: p.shape_m.dims.clone(),
        init_message: vector_to_schema(&p.init_m),
        honest_alice: strategy_to_schema(sys, &p.honest_a),
        honest_bob: strategy_to_schema(sys, &p.honest_b),
        measurement_alice: measurement_to_schema(sys, &p.meas_a),
        measurement_bob: measurement_to_schema(sys, &p.meas_b),
    }
}

pub fn protocol_from_schema(s: &ProtocolSchema) -> Result<Protocol> {
    if s.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            s.schema_version
        )));
    }
    let sys = parse_system(&s.system)?;
    let p = Protocol {
        name: s.name.clone(),
        system: sys.clone(),
        rounds: s.rounds,
        shape_m: SectorShape::new(s.shape_message.clone())?,
        init_m: vector_from_schema(&s.init_message),
        total: sys.charge_by_label(&s.total)?,
        init_charge_a: sys.charge_by_label(&s.init_charges[0])?,
        init_charge_b: sys.charge_by_label(&s.init_charges[1])?,
        honest_a: strategy_from_schema(&sys, &s.honest_alice)?,
        honest_b: strategy_from_schema(&sys, &s.honest_bob)?,
        meas_a: measurement_from_schema(&sys, &s.measurement_alice)?,
        meas_b: measurement_from_schema(&sys, &s.measurement_bob)?,
    };
    p.validate()?;
    Ok(p)
}

pub fn cheat_to_schema_uworld(s: &crate::game::UWorldStrategy) -> CheatSchema {
    CheatSchema {
        schema_version: SCHEMA_VERSION,
        world: "u".into(),
        party: s.party.name().into(),
        dim_private: Some(s.dim_private),
        shape: None,
        init: vector_to_schema(&s.init),
        dense_moves: Some(s.moves.iter().map(matrix_to_schema).collect()),
        block_moves: None,
    }
}

pub enum ParsedCheat {
    UWorld(crate::game::UWorldStrategy),
    IWorld(IWorldStrategy),
}

pub fn cheat_from_schema(sys: &ChargeSystem, s: &CheatSchema) -> Result<ParsedCheat> {
    if s.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema("unsupported schema version".into()));
    }
    let party = parse_party(&s.party)?;
    match s.world.as_str() {
        "u" => {
            let moves = s
                .dense_moves
                .as_ref()
                .ok_or_else(|| Error::Schema("u-world cheat needs dense_moves".into()))?
                .iter()
                .map(matrix_from_schema)
                .collect::<Result<Vec<_>>>()?;
            Ok(ParsedCheat::UWorld(crate::game::UWorldStrategy {
                party,
                dim_private: s
                    .dim_private
                    .ok_or_else(|| Error::Schema("u-world cheat needs dim_private".into()))?,
                init: vector_from_schema(&s.init),
                moves,
            }))
        }
        "i" => {
            let shape = SectorShape::new(
                s.shape
                    .clone()
                    .ok_or_else(|| Error::Schema("i-world cheat needs shape".into()))?,
            )?;
            let moves = s
                .block_moves
                .as_ref()
                .ok_or_else(|| Error::Schema("i-world cheat needs block_moves".into()))?
                .iter()
                .map(|m| move_from_schema(sys, m))
                .collect::<Result<Vec<_>>>()?;
            Ok(ParsedCheat::IWorld(IWorldStrategy {
                party,
                shape,
                init: vector_from_schema(&s.init),
                moves,
            }))
        }
        other => Err(Error::Schema(format!("unknown world '{other}'"))),
    }
}

/// Sector-state serialization: sector tuple plus flattened row-major
/// amplitudes as [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectorStateSchema {
    pub schema_version: u32,
    pub system: SystemSpec,
    pub shapes: Vec<Vec<usize>>,
    pub total: String,
    pub blocks: Vec<SectorBlockSchema>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectorBlockSchema {
    pub charges: Vec<String>,
    pub mu: usize,
    pub amplitudes: VectorSchema,
}

pub fn state_to_schema(st: &SectorState) -> SectorStateSchema {
    let space = &st.space;
    let sys = &space.system;
    let blocks = space
        .blocks
        .iter()
        .filter_map(|b| {
            let amps: VectorSchema = (0..b.len)
                .map(|i| {
                    let z = st.amps[b.offset + i];
                    [z.re, z.im]
                })
                .collect();
            if amps.iter().all(|p| p[0] == 0.0 && p[1] == 0.0) {
                None
            } else {
                Some(SectorBlockSchema {
                    charges: b.charges.iter().map(|&q| sys.label(q).to_string()).collect(),
                    mu: b.mu,
                    amplitudes: amps,
                })
            }
        })
        .collect();
    SectorStateSchema {
        schema_version: SCHEMA_VERSION,
        system: SystemSpec::Builtin(sys.name.clone()),
        shapes: space.shapes.iter().map(|s| s.dims.clone()).collect(),
        total: sys.label(space.total).to_string(),
        blocks,
    }
}

pub fn state_from_schema(s: &SectorStateSchema) -> Result<SectorState> {
    let sys = parse_system(&s.system)?;
    let shapes = s
        .shapes
        .iter()
        .map(|d| SectorShape::new(d.clone()))
        .collect::<Result<Vec<_>>>()?;
    let space = crate::sector::space::JointSpace::new(
        sys.clone(),
        shapes,
        sys.charge_by_label(&s.total)?,
    )?;
    let mut st = SectorState::zero(space);
    for b in &s.blocks {
        let charges = b
            .charges
            .iter()
            .map(|l| sys.charge_by_label(l))
            .collect::<Result<Vec<_>>>()?;
        let info = st
            .space
            .block(&charges, b.mu)
            .ok_or_else(|| Error::Schema(format!("block {:?} mu={} not allowed", b.charges, b.mu)))?
            .clone();
        if b.amplitudes.len() != info.len {
            return Err(Error::Schema(format!(
                "block {:?} has {} amplitudes, expected {}",
                b.charges,
                b.amplitudes.len(),
                info.len
            )));
        }
        for (i, p) in b.amplitudes.iter().enumerate() {
            st.amps[info.offset + i] = c(p[0], p[1]);
        }
    }
    Ok(st)
}
