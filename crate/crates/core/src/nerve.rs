//! Homology nerves, descriptive nerves, Leader covers and the diagnostic
//! reports built on them.
//!
//! A homology nerve over a family of 1-cycles is the abstract simplicial
//! complex of subfamilies with a common vertex (a shared edge implies shared
//! endpoints, so vertices suffice). Subfamilies are bitmasks over the ground
//! set, which is why every operation here caps the ground set at
//! [`MAX_GROUND_SET`] cycles.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Complex, ComplexError, Edge, Triangle, Vertex, VertexId};
use crate::geometry::{shape_boundaries, GeometryError};
use crate::homology::{betti0, h1_basis, Cycle, HomologyResult};
use crate::par::{self, Execution};
use crate::proximity::{describe_cycle, dnear, spatial_intersection, ProximityConfig};

pub const MAX_GROUND_SET: usize = 16;
pub const LEADER_CLOSURE_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NerveError {
    #[error("ground set has {size} cycles; nerve enumeration is capped at {max}")]
    GroundSetTooLarge { size: usize, max: usize },
    #[error("nucleus {nucleus} is not among the {size} ground cycles")]
    UnknownNucleus { nucleus: usize, size: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn check_ground(n: usize) -> Result<(), NerveError> {
    if n > MAX_GROUND_SET {
        Err(NerveError::GroundSetTooLarge {
            size: n,
            max: MAX_GROUND_SET,
        })
    } else {
        Ok(())
    }
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn face_order(a: &u32, b: &u32) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| members(*a).cmp(&members(*b)))
}

/// Abstract simplicial complex on ground-set indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveComplex {
    ground_size: usize,
    faces: Vec<Vec<usize>>,
    maximal_faces: Vec<Vec<usize>>,
}

impl NerveComplex {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Every face, ordered by size and then lexicographically.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn maximal_faces(&self) -> &[Vec<usize>] {
        &self.maximal_faces
    }

    /// `face` must be sorted ascending.
    pub fn is_face(&self, face: &[usize]) -> bool {
        self.faces.iter().any(|f| f == face)
    }

    pub fn max_face_size(&self) -> usize {
        self.maximal_faces.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().filter(move |f| f.len() == k)
    }
}

/// The homology nerve of `cycles`: all subfamilies sharing a vertex or edge.
pub fn homology_nerve(cycles: &[Cycle]) -> Result<NerveComplex, NerveError> {
    homology_nerve_with(cycles, Execution::default())
}

pub fn homology_nerve_with(cycles: &[Cycle], exec: Execution) -> Result<NerveComplex, NerveError> {
    let n = cycles.len();
    check_ground(n)?;
    // for every vertex, the family of cycles through it
    let mut by_vertex: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &v in c.vertex_ids() {
            *by_vertex.entry(v).or_default() |= 1 << i;
        }
    }
    let mut carriers: Vec<u32> = by_vertex.into_values().collect();
    carriers.sort_unstable();
    carriers.dedup();
    let mut maximal: Vec<u32> = carriers
        .iter()
        .copied()
        .filter(|&m| !carriers.iter().any(|&o| o != m && m & !o == 0))
        .collect();
    maximal.sort_by(face_order);
    let mut faces = par::filter_range(exec, 1u32 << n, |s| carriers.iter().any(|&m| s & !m == 0));
    faces.sort_by(face_order);
    Ok(NerveComplex {
        ground_size: n,
        faces: faces.into_iter().map(members).collect(),
        maximal_faces: maximal.into_iter().map(members).collect(),
    })
}

/// A cluster of cycles descriptively near a chosen nucleus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptiveNerve {
    pub nucleus: usize,
    pub members: Vec<usize>,
}

/// Pairwise descriptive nearness of ground cycles, one bitmask row per cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearnessTable {
    rows: Vec<u32>,
}

impl NearnessTable {
    pub fn build(
        complex: &Complex,
        cycles: &[Cycle],
        config: &ProximityConfig,
        exec: Execution,
    ) -> Result<Self, NerveError> {
        check_ground(cycles.len())?;
        let described = par::map(exec, cycles, |c| describe_cycle(complex, c, &config.phi))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let rows = par::map_range(exec, cycles.len(), |i| {
            (0..cycles.len())
                .filter(|&j| i == j || dnear(&described[i], &described[j], config.epsilon))
                .fold(0u32, |m, j| m | 1 << j)
        });
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn near(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    fn row(&self, i: usize) -> u32 {
        self.rows[i]
    }

    fn all(&self) -> u32 {
        if self.rows.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.rows.len()) - 1
        }
    }

    /// Members of `a ∪ b` near something in `a` and something in `b`.
    fn intersection(&self, a: u32, b: u32) -> u32 {
        members(a | b)
            .into_iter()
            .filter(|&x| self.row(x) & a != 0 && self.row(x) & b != 0)
            .fold(0, |m, x| m | 1 << x)
    }

    /// The descriptive intersection plus every cycle near something in `a` or
    /// in `b`.
    fn union(&self, a: u32, b: u32) -> u32 {
        let reach = members(self.all())
            .into_iter()
            .filter(|&x| self.row(x) & (a | b) != 0)
            .fold(0, |m, x| m | 1 << x);
        reach | self.intersection(a, b)
    }
}

/// The cluster of cycles descriptively near `cycles[nucleus]`.
pub fn descriptive_nerve(
    nucleus: usize,
    cycles: &[Cycle],
    complex: &Complex,
    config: &ProximityConfig,
) -> Result<DescriptiveNerve, NerveError> {
    check_ground(cycles.len())?;
    if nucleus >= cycles.len() {
        return Err(NerveError::UnknownNucleus {
            nucleus,
            size: cycles.len(),
        });
    }
    let own = describe_cycle(complex, &cycles[nucleus], &config.phi)?;
    let mut members = Vec::new();
    for (j, c) in cycles.iter().enumerate() {
        if j == nucleus || dnear(&own, &describe_cycle(complex, c, &config.phi)?, config.epsilon) {
            members.push(j);
        }
    }
    Ok(DescriptiveNerve { nucleus, members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetOrigin {
    Cluster,
    Intersection,
    Union,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedSet {
    pub members: Vec<usize>,
    pub origin: SetOrigin,
}

/// One descriptive cluster per nucleus, and the family generated from the
/// clusters by descriptive intersection and descriptive union.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeaderCover {
    pub clusters: Vec<DescriptiveNerve>,
    /// Distinct generated sets in discovery order, the clusters first.
    pub closure: Vec<GeneratedSet>,
    pub cap: usize,
    /// True when generation stopped at `cap` sets.
    pub truncated: bool,
}

impl LeaderCover {
    /// True iff the clusters together contain exactly the indices `0..n`.
    pub fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for c in &self.clusters {
            for &m in &c.members {
                if m >= n {
                    return false;
                }
                seen[m] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn distinct_clusters(&self) -> usize {
        self.clusters
            .iter()
            .map(|c| c.members.clone())
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn largest_cluster(&self) -> usize {
        self.clusters.iter().map(|c| c.members.len()).max().unwrap_or(0)
    }
}

pub fn leader_cover(
    cycles: &[Cycle],
    complex: &Complex,
    config: &ProximityConfig,
) -> Result<LeaderCover, NerveError> {
    leader_cover_with(cycles, complex, config, Execution::default())
}

pub fn leader_cover_with(
    cycles: &[Cycle],
    complex: &Complex,
    config: &ProximityConfig,
    exec: Execution,
) -> Result<LeaderCover, NerveError> {
    let table = NearnessTable::build(complex, cycles, config, exec)?;
    Ok(leader_cover_from_table(&table))
}

/// Leader cover for a precomputed nearness table.
pub fn leader_cover_from_table(table: &NearnessTable) -> LeaderCover {
    let n = table.len();
    let clusters: Vec<DescriptiveNerve> = (0..n)
        .map(|i| DescriptiveNerve {
            nucleus: i,
            members: members(table.row(i)),
        })
        .collect();
    let mut sets: Vec<(u32, SetOrigin)> = Vec::new();
    let mut seen = HashSet::new();
    let mut truncated = false;
    for i in 0..n {
        if seen.insert(table.row(i)) {
            sets.push((table.row(i), SetOrigin::Cluster));
        }
    }
    // pairs (i, j) with i < j, visited in order of the later index so newly
    // generated sets get combined with everything before them
    let mut j = 1;
    'grow: while j < sets.len() {
        for i in 0..j {
            let (a, b) = (sets[i].0, sets[j].0);
            for (m, origin) in [
                (table.intersection(a, b), SetOrigin::Intersection),
                (table.union(a, b), SetOrigin::Union),
            ] {
                if seen.contains(&m) {
                    continue;
                }
                if sets.len() >= LEADER_CLOSURE_CAP {
                    truncated = true;
                    break 'grow;
                }
                seen.insert(m);
                sets.push((m, origin));
            }
        }
        j += 1;
    }
    LeaderCover {
        clusters,
        closure: sets
            .into_iter()
            .map(|(m, origin)| GeneratedSet {
                members: members(m),
                origin,
            })
            .collect(),
        cap: LEADER_CLOSURE_CAP,
        truncated,
    }
}

/// Betti numbers of a nerve next to those of the union of its cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveUnionReport {
    pub nerve_betti: [usize; 2],
    pub union_betti: [usize; 2],
    pub betti0_agree: bool,
    pub agree: bool,
}

/// Compares `(β0, β1)` of the nerve, taken as an abstract complex, with
/// `(β0, β1)` of the graph formed by the cycles' vertices and edges.
///
/// Disagreement is a finding, not an error: a single cycle has a point for a
/// nerve and a circle for a union.
pub fn nerve_union_betti_report(
    complex: &Complex,
    cycles: &[Cycle],
    nerve: &NerveComplex,
) -> Result<NerveUnionReport, NerveError> {
    let n = nerve.ground_size() as u32;
    let nerve_betti = if n == 0 {
        [0, 0]
    } else {
        let vs = (0..n).map(|i| Vertex::new(i, f64::from(i), 0.0)).collect();
        let es = nerve
            .faces_of_size(2)
            .enumerate()
            .map(|(k, f)| Edge::new(k as u32, f[0] as u32, f[1] as u32))
            .collect();
        let ts = nerve
            .faces_of_size(3)
            .enumerate()
            .map(|(k, f)| Triangle::new(k as u32, f[0] as u32, f[1] as u32, f[2] as u32))
            .collect();
        let k = Complex::new(vs, es, ts)?;
        let h = h1_basis(&k);
        [h.betti0, h.rank_h1]
    };

    let mut vertex_ids: Vec<VertexId> = cycles.iter().flat_map(|c| c.vertex_ids().to_vec()).collect();
    vertex_ids.sort_unstable();
    vertex_ids.dedup();
    let mut edge_pos: Vec<usize> = cycles.iter().flat_map(|c| c.edges().support()).collect();
    edge_pos.sort_unstable();
    edge_pos.dedup();
    let union_betti = if vertex_ids.is_empty() {
        [0, 0]
    } else {
        let vs = vertex_ids
            .iter()
            .map(|&id| complex.vertices()[complex.vertex_index(id).expect("cycle vertex")])
            .collect();
        let es = edge_pos.iter().map(|&e| complex.edges()[e]).collect();
        let k = Complex::new(vs, es, vec![])?;
        let b0 = betti0(&k);
        [b0, k.num_edges() + b0 - k.num_vertices()]
    };
    Ok(NerveUnionReport {
        nerve_betti,
        union_betti,
        betti0_agree: nerve_betti[0] == union_betti[0],
        agree: nerve_betti == union_betti,
    })
}

/// Where a ground cycle came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleRole {
    Contour,
    Hole,
    Representative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundCycle {
    pub cycle: Cycle,
    pub role: CycleRole,
}

/// Contours, then hole boundaries, then `H₁` representatives; a cycle that
/// appears under two roles keeps the first.
pub fn ground_set(complex: &Complex, homology: &HomologyResult) -> Vec<GroundCycle> {
    let boundaries = shape_boundaries(complex);
    let tagged = boundaries
        .contours
        .into_iter()
        .map(|c| (c, CycleRole::Contour))
        .chain(boundaries.holes.into_iter().map(|c| (c, CycleRole::Hole)))
        .chain(
            homology
                .h1_representatives
                .iter()
                .cloned()
                .map(|c| (c, CycleRole::Representative)),
        );
    let mut seen = HashSet::new();
    tagged
        .filter(|(c, _)| seen.insert(c.edges().clone()))
        .map(|(cycle, role)| GroundCycle { cycle, role })
        .collect()
}

/// A family of ground cycles that settles one conjecture for this complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub members: Vec<usize>,
    /// Ground index of the hole boundary met, when the claim is about meeting one.
    pub hole: Option<usize>,
    pub shared_vertices: Vec<VertexId>,
    /// Edge ids (as declared) shared with the hole boundary.
    pub shared_edges: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub rank_h1: usize,
    pub hole_faces: usize,
    /// True when the complex has no holes and every conjecture is vacuous.
    pub vacuous: bool,
    pub ground_roles: Vec<CycleRole>,
    /// A homology nerve meeting a hole boundary.
    pub nerve_meets_hole: Option<Witness>,
    /// A homology nerve meeting no hole boundary.
    pub nerve_avoids_holes: Option<Witness>,
    /// A descriptive nerve meeting a hole boundary.
    pub descriptive_meets_hole: Option<Witness>,
    /// A descriptive nerve meeting no hole boundary.
    pub descriptive_avoids_holes: Option<Witness>,
}

fn meets_hole(
    complex: &Complex,
    ground: &[GroundCycle],
    family: &[usize],
) -> Option<Witness> {
    let holes: Vec<usize> = (0..ground.len()).filter(|&h| ground[h].role == CycleRole::Hole).collect();
    let mut best: Option<(bool, Witness)> = None;
    for &c in family {
        for &h in &holes {
            let s = if c == h {
                spatial_intersection(&ground[h].cycle, &ground[h].cycle)
            } else {
                spatial_intersection(&ground[c].cycle, &ground[h].cycle)
            };
            if s.is_empty() {
                continue;
            }
            // prefer evidence from a cycle other than the hole itself
            let rank = c != h;
            if best.as_ref().is_none_or(|(r, _)| !r && rank) {
                best = Some((
                    rank,
                    Witness {
                        members: family.to_vec(),
                        hole: Some(h),
                        shared_vertices: s.vertices,
                        shared_edges: s.edges.iter().map(|&e| complex.edges()[e].id).collect(),
                    },
                ));
            }
        }
    }
    best.map(|(_, w)| w)
}

fn avoids_holes(ground: &[GroundCycle], family: &[usize]) -> Option<Witness> {
    let clear = family.iter().all(|&c| {
        ground
            .iter()
            .filter(|g| g.role == CycleRole::Hole)
            .all(|h| spatial_intersection(&ground[c].cycle, &h.cycle).is_empty())
    });
    clear.then(|| Witness {
        members: family.to_vec(),
        hole: None,
        shared_vertices: vec![],
        shared_edges: vec![],
    })
}

/// Searches this complex for witnesses of the four nerve/hole conjectures.
///
/// Only families with at least two cycles count as nerves. Maximal faces of
/// the homology nerve are searched before smaller faces.
pub fn conjecture_report(complex: &Complex, config: &ProximityConfig) -> Result<ConjectureReport, NerveError> {
    let homology = h1_basis(complex);
    let boundaries = shape_boundaries(complex);
    let ground = ground_set(complex, &homology);
    let mut report = ConjectureReport {
        rank_h1: homology.rank_h1,
        hole_faces: boundaries.hole_faces,
        vacuous: homology.rank_h1 == 0,
        ground_roles: ground.iter().map(|g| g.role).collect(),
        nerve_meets_hole: None,
        nerve_avoids_holes: None,
        descriptive_meets_hole: None,
        descriptive_avoids_holes: None,
    };
    if report.vacuous {
        return Ok(report);
    }
    let cycles: Vec<Cycle> = ground.iter().map(|g| g.cycle.clone()).collect();
    let nerve = homology_nerve(&cycles)?;
    let faces: Vec<&Vec<usize>> = nerve
        .maximal_faces()
        .iter()
        .chain(nerve.faces().iter().rev())
        .filter(|f| f.len() >= 2)
        .collect();
    report.nerve_meets_hole = faces.iter().find_map(|f| meets_hole(complex, &ground, f));
    report.nerve_avoids_holes = faces.iter().find_map(|f| avoids_holes(&ground, f));

    let cover = leader_cover(&cycles, complex, config)?;
    let clusters: Vec<&Vec<usize>> = cover
        .clusters
        .iter()
        .map(|c| &c.members)
        .filter(|m| m.len() >= 2)
        .collect();
    report.descriptive_meets_hole = clusters.iter().find_map(|m| meets_hole(complex, &ground, m));
    report.descriptive_avoids_holes = clusters.iter().find_map(|m| avoids_holes(&ground, m));
    Ok(report)
}
