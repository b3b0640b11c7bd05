//! JSON payloads shared by the HTTP service and the CLI.

use imperative::grammar::{Lexicon, ParseError};
use imperative::regions::{Degree, RegionMap};
use imperative::resolver::Resolution;
use imperative::world::{AgentState, WorldDoc, WorldState};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionCell {
    pub x: i32,
    pub z: i32,
    pub degree: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionView {
    pub kind: &'static str,
    pub instance: String,
    pub cells: Vec<RegionCell>,
}

/// `GET /regions/{loc}`: every region instance with its cells labelled by
/// degree, Strict first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionsView {
    pub location: String,
    pub g_width: u32,
    pub g_length: u32,
    pub regions: Vec<RegionView>,
}

impl RegionsView {
    pub fn new(map: &RegionMap) -> Self {
        let regions = map
            .entries
            .iter()
            .map(|((kind, instance), bands)| RegionView {
                kind: kind.noun(),
                instance: instance.to_string(),
                cells: Degree::ALL
                    .into_iter()
                    .flat_map(|d| {
                        bands.get(d).iter().map(move |c| RegionCell {
                            x: c.x,
                            z: c.z,
                            degree: d.word(),
                        })
                    })
                    .collect(),
            })
            .collect();
        Self {
            location: map.location_id.clone(),
            g_width: map.g_width,
            g_length: map.g_length,
            regions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObjectState {
    pub id: String,
    pub carried_by: Option<String>,
    pub consumed: bool,
}

/// `GET /world`: the world document as it stands now, plus the state a
/// world file does not hold.
#[derive(Debug, Clone, Serialize)]
pub struct WorldView {
    pub tick: u64,
    pub world: WorldDoc,
    pub objects: Vec<ObjectState>,
    pub agents: Vec<AgentState>,
}

impl WorldView {
    pub fn new(world: &WorldState, tick: u64) -> Self {
        Self {
            tick,
            world: world.to_doc(),
            objects: world
                .objects
                .values()
                .map(|o| ObjectState {
                    id: o.id.clone(),
                    carried_by: o.carried_by.clone(),
                    consumed: o.consumed,
                })
                .collect(),
            agents: world.agents.clone(),
        }
    }
}

/// Successful `POST /agents/{id}/instruction`.
#[derive(Debug, Clone, Serialize)]
pub struct Accepted {
    pub plan: u64,
    pub agent: String,
    pub resolution: Resolution,
}

/// Error body for every non-2xx response.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    /// `parse`, `resolution`, `unknownAgent`, `unknownLocation` or `unavailable`.
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Resolution>,
}

impl ErrorBody {
    pub fn new(error: &'static str, message: impl Into<String>) -> Self {
        Self {
            error,
            message: message.into(),
            index: None,
            token: None,
            resolution: None,
        }
    }

    pub fn parse(lex: &Lexicon, text: &str, e: &ParseError) -> Self {
        Self {
            index: Some(e.index),
            token: lex.tokenize(text).get(e.index).map(|t| t.text.clone()),
            ..Self::new("parse", e.to_string())
        }
    }
}
