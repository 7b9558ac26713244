//! Combined report putting a graph next to its kissing group and, when one
//! is known, its critically fixed anti-rational map.

use serde::Serialize;

use kissing_core::antirational::{platonic_map, verify_dictionary_seeded, DictionaryReport, PLATONIC_NAMES};
use kissing_core::graph::{is_isomorphic_up_to_reflection, platonic::platonic_graph};
use kissing_core::group::{KissingGroup, DEFAULT_DISK_CAP};
use kissing_core::mating::{shared_matings_capped, Dedup};
use kissing_core::packing::{solve_packing, verify_contact};
use kissing_core::{AntiRationalMap, Error, GraphError, GroupError, PlaneGraph};

/// Deepest level whose disk tangency graph is examined.
pub const EVIDENCE_LEVEL: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub simple: bool,
    pub k_connectivity: usize,
    pub two_connected: bool,
    pub three_connected: bool,
    pub outerplanar: bool,
    pub hamiltonian: Option<bool>,
    pub hamiltonian_count: Option<usize>,
}

impl Classification {
    pub fn of(g: &PlaneGraph, cap: usize) -> Self {
        let k = g.connectivity();
        let cycles = g.hamiltonian_cycles_capped(cap).ok().map(|c| c.len());
        Self {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            faces: g.face_count(),
            simple: g.is_simple(),
            k_connectivity: k,
            two_connected: k >= 2,
            three_connected: k >= 3,
            outerplanar: g.outerplanar_face().is_some(),
            hamiltonian: cycles.map(|c| c > 0),
            hamiltonian_count: cycles,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Predictions {
    pub connected_limit_set: bool,
    pub gasket_limit_set: bool,
    pub gasket_julia_set: bool,
    pub function_group: bool,
    pub anti_polynomial: bool,
    pub mating: Option<bool>,
    pub shared_matings: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PackingSummary {
    pub max_residual: f64,
    pub contact_pass: bool,
    pub spurious: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelEvidence {
    pub level: usize,
    pub disks: usize,
    pub components: usize,
    pub connected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Dictionary {
    pub classification: Classification,
    pub predictions: Predictions,
    pub packing: PackingSummary,
    pub levels: Vec<LevelEvidence>,
    /// Levels beyond the disk cap are left out.
    pub levels_truncated: bool,
    /// The level evidence agrees with the connectivity prediction.
    pub levels_consistent: bool,
    pub map: Option<DictionaryReport>,
    pub pass: bool,
}

/// A built-in map whose dual graph is `g`, if any.
pub fn matching_platonic_map(g: &PlaneGraph) -> Option<AntiRationalMap> {
    PLATONIC_NAMES
        .iter()
        .find(|name| platonic_graph(name).is_some_and(|p| is_isomorphic_up_to_reflection(&p, g)))
        .map(|name| platonic_map(name).expect("built-in map"))
}

pub fn dictionary(
    g: &PlaneGraph,
    map: Option<&AntiRationalMap>,
    tol: f64,
    seed: u64,
    ham_cap: usize,
    disk_cap: Option<usize>,
) -> Result<Dictionary, Error> {
    if !g.is_simple() {
        return Err(GraphError::NotSimple.into());
    }
    let classification = Classification::of(g, ham_cap);
    let shared = if classification.hamiltonian == Some(true) && classification.two_connected {
        Some(shared_matings_capped(g, Dedup::Labeled, ham_cap)?.len())
    } else {
        classification.hamiltonian.map(|_| 0)
    };
    let predictions = Predictions {
        connected_limit_set: classification.two_connected,
        gasket_limit_set: classification.three_connected,
        gasket_julia_set: classification.three_connected,
        function_group: classification.two_connected && classification.outerplanar,
        anti_polynomial: classification.two_connected && classification.outerplanar,
        mating: classification.hamiltonian.map(|h| h && classification.two_connected),
        shared_matings: shared,
    };
    let packing = solve_packing(g, tol)?;
    let contact = verify_contact(&packing);
    let group = KissingGroup::new(&packing)?;
    let cap = disk_cap.unwrap_or(DEFAULT_DISK_CAP);
    let mut levels = Vec::new();
    let mut truncated = false;
    for level in 0..=EVIDENCE_LEVEL {
        match group.level_components(level, cap) {
            Ok(c) => levels.push(LevelEvidence {
                level,
                disks: group.generators() * (group.generators() - 1).pow(level as u32),
                components: c,
                connected: c == 1,
            }),
            Err(GroupError::ExplosionGuard { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    // without 2-connectivity the first level already splits
    let levels_consistent = if classification.two_connected || g.vertex_count() < 3 {
        levels.iter().all(|l| l.connected)
    } else {
        levels.iter().skip(1).all(|l| !l.connected)
    };
    let auto = if map.is_none() { matching_platonic_map(g) } else { None };
    let map = map.or(auto.as_ref()).map(|m| verify_dictionary_seeded(g, m, seed));
    let pass = contact.pass && levels_consistent && map.as_ref().is_none_or(|m| m.pass);
    Ok(Dictionary {
        classification,
        predictions,
        packing: PackingSummary {
            max_residual: contact.max_residual,
            contact_pass: contact.pass,
            spurious: contact.spurious.len(),
        },
        levels,
        levels_truncated: truncated,
        levels_consistent,
        map,
        pass,
    })
}
