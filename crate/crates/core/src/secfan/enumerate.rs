//! Breadth-first closure of the flip graph restricted to regular
//! triangulations, deduplicated by canonical form under a group action,
//! with resumable checkpointing; and the collection of coarsest-subdivision
//! orbits from the secondary cones of the triangulation representatives.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::{QVector, Rational};
use crate::hypersimplex::PointConfiguration;
use crate::subdivide::{regular_subdivision, HeightFunction, Subdivision};
use crate::symmetry::{
    canonical_cells, canonical_vector, orbit_size_subdivision, LabelGroup,
};

use super::flips::{circuits, flips};
use super::{is_regular_triangulation, lineality_basis, secondary_rays};

type CellList = Vec<Vec<usize>>;

/// Orbit catalog of regular triangulations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationCatalog {
    /// Canonical representatives, sorted.
    pub reps: Vec<CellList>,
    pub orbit_sizes: Vec<u64>,
    pub total: u64,
    /// Orbits of nonregular flip neighbors encountered (recorded, not
    /// expanded).
    pub nonregular_orbits: u64,
}

impl TriangulationCatalog {
    pub fn orbits(&self) -> usize {
        self.reps.len()
    }

    pub fn spread_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for r in &self.reps {
            *h.entry(r.len()).or_insert(0) += 1;
        }
        h
    }
}

/// Orbit catalog of coarsest subdivisions (rays of the secondary fan).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarsestCatalog {
    /// Canonical primitive ray vectors modulo lineality, aligned with
    /// `subdivision_reps`.
    #[serde(with = "crate::jsonio::qvector_list")]
    pub ray_reps: Vec<QVector>,
    pub subdivision_reps: Vec<CellList>,
    pub orbit_sizes: Vec<u64>,
    pub spreads: Vec<usize>,
}

impl CoarsestCatalog {
    pub fn orbits(&self) -> usize {
        self.subdivision_reps.len()
    }

    pub fn spread_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &s in &self.spreads {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    }
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub checkpoint_path: Option<PathBuf>,
    /// Nodes processed between checkpoint writes.
    pub checkpoint_interval: usize,
    /// Stop (with a checkpoint) after expanding this many nodes.
    pub max_nodes: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            checkpoint_path: None,
            checkpoint_interval: 512,
            max_nodes: None,
        }
    }
}

#[derive(Debug)]
pub enum EnumerationOutcome {
    Complete(TriangulationCatalog),
    /// Stopped at the node budget; state saved to the checkpoint file.
    Paused { nodes_processed: u64 },
}

/// A deterministic seed: the thrackle triangulation for second
/// hypersimplices, otherwise the subdivision of a fixed pseudo-random
/// integer lifting, retried until all cells are simplices.
pub fn seed_triangulation(config: &PointConfiguration) -> Result<Subdivision> {
    if let Some(spec) = config.hypersimplex_spec() {
        if spec.k == 2 {
            let t = crate::hypersimplex::thrackle(spec.n)?;
            let s = regular_subdivision(config, &t.lifting())?;
            debug_assert!(s.is_triangulation(config));
            return Ok(s);
        }
    }
    let n = config.n_points();
    let mut state = 0x5ecfa5eed_u64;
    for _ in 0..64 {
        let heights: QVector = (0..n)
            .map(|_| {
                state = splitmix64(state);
                Rational::from_integer(((state >> 20) as i64).into())
            })
            .collect();
        let s = regular_subdivision(config, &HeightFunction::from_values(heights))?;
        if s.is_triangulation(config) {
            return Ok(s);
        }
    }
    Err(Error::Degenerate(
        "no random lifting produced a triangulation".into(),
    ))
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    n_points: usize,
    group_order: usize,
    nodes_processed: u64,
}

#[derive(Serialize, Deserialize)]
struct CheckpointRecord {
    kind: String,
    cells: CellList,
}

struct SearchState {
    /// canonical form -> regular?
    visited: BTreeMap<CellList, bool>,
    /// regular forms not yet expanded
    frontier: BTreeSet<CellList>,
    nodes_processed: u64,
}

impl SearchState {
    fn write_checkpoint(&self, path: &Path, config: &PointConfiguration, group: &LabelGroup) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
            let header = CheckpointHeader {
                n_points: config.n_points(),
                group_order: group.order(),
                nodes_processed: self.nodes_processed,
            };
            writeln!(f, "{}", serde_json::to_string(&header)?)?;
            for (cells, regular) in &self.visited {
                let kind = if *regular { "regular" } else { "nonregular" };
                let rec = CheckpointRecord {
                    kind: kind.into(),
                    cells: cells.clone(),
                };
                writeln!(f, "{}", serde_json::to_string(&rec)?)?;
            }
            for cells in &self.frontier {
                let rec = CheckpointRecord {
                    kind: "frontier".into(),
                    cells: cells.clone(),
                };
                writeln!(f, "{}", serde_json::to_string(&rec)?)?;
            }
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    fn read_checkpoint(path: &Path, config: &PointConfiguration, group: &LabelGroup) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = f.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Checkpoint("empty checkpoint file".into()))??;
        let header: CheckpointHeader = serde_json::from_str(&header_line)
            .map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
        if header.n_points != config.n_points() || header.group_order != group.order() {
            return Err(Error::Checkpoint(
                "checkpoint does not match the configuration or group".into(),
            ));
        }
        let mut state = SearchState {
            visited: BTreeMap::new(),
            frontier: BTreeSet::new(),
            nodes_processed: header.nodes_processed,
        };
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CheckpointRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Checkpoint(format!("bad record: {e}")))?;
            match rec.kind.as_str() {
                "regular" => {
                    state.visited.insert(rec.cells, true);
                }
                "nonregular" => {
                    state.visited.insert(rec.cells, false);
                }
                "frontier" => {
                    if !state.visited.contains_key(&rec.cells) {
                        return Err(Error::Checkpoint(
                            "frontier entry missing from visited set".into(),
                        ));
                    }
                    state.frontier.insert(rec.cells);
                }
                other => {
                    return Err(Error::Checkpoint(format!("unknown record kind {other:?}")));
                }
            }
        }
        Ok(state)
    }
}

/// Enumerate all regular triangulations reachable by bistellar flips from
/// the seed, up to the group action. Nonregular flip neighbors are recorded
/// but not expanded. Resumes from the checkpoint file when one exists.
pub fn enumerate_regular_triangulations(
    config: &PointConfiguration,
    group: &LabelGroup,
    opts: &EnumerateOptions,
) -> Result<EnumerationOutcome> {
    let all_circuits = circuits(config)?;
    let mut state = match &opts.checkpoint_path {
        Some(p) if p.exists() => SearchState::read_checkpoint(p, config, group)?,
        _ => {
            let seed = seed_triangulation(config)?;
            if !is_regular_triangulation(config, &seed)? {
                return Err(Error::NotRegular);
            }
            let canon = canonical_cells(&seed.cells, group);
            let mut visited = BTreeMap::new();
            visited.insert(canon.clone(), true);
            let mut frontier = BTreeSet::new();
            frontier.insert(canon);
            SearchState {
                visited,
                frontier,
                nodes_processed: 0,
            }
        }
    };

    let mut since_checkpoint = 0usize;
    let mut processed_this_run = 0usize;
    while !state.frontier.is_empty() {
        if let Some(max) = opts.max_nodes {
            if processed_this_run >= max {
                if let Some(p) = &opts.checkpoint_path {
                    state.write_checkpoint(p, config, group)?;
                }
                return Ok(EnumerationOutcome::Paused {
                    nodes_processed: state.nodes_processed,
                });
            }
        }
        let budget = opts
            .max_nodes
            .map(|m| m - processed_this_run)
            .unwrap_or(usize::MAX)
            .min(state.frontier.len())
            .min(1024);
        let batch: Vec<CellList> = state.frontier.iter().take(budget).cloned().collect();
        for b in &batch {
            state.frontier.remove(b);
        }
        let neighbor_sets: Vec<Vec<CellList>> = batch
            .par_iter()
            .map(|cells| {
                let t = Subdivision {
                    cells: cells.clone(),
                };
                let nbs = flips(config, &t, &all_circuits)?;
                Ok(nbs
                    .iter()
                    .map(|nb| canonical_cells(&nb.cells, group))
                    .collect())
            })
            .collect::<Result<_>>()?;
        state.nodes_processed += batch.len() as u64;
        processed_this_run += batch.len();
        since_checkpoint += batch.len();

        let mut fresh: BTreeSet<CellList> = BTreeSet::new();
        for nbs in neighbor_sets {
            for nb in nbs {
                if !state.visited.contains_key(&nb) {
                    fresh.insert(nb);
                }
            }
        }
        let fresh: Vec<CellList> = fresh.into_iter().collect();
        let regular_flags: Vec<bool> = fresh
            .par_iter()
            .map(|cells| {
                is_regular_triangulation(
                    config,
                    &Subdivision {
                        cells: cells.clone(),
                    },
                )
            })
            .collect::<Result<_>>()?;
        for (cells, regular) in fresh.into_iter().zip(regular_flags) {
            if regular {
                state.frontier.insert(cells.clone());
            }
            state.visited.insert(cells, regular);
        }

        if let Some(p) = &opts.checkpoint_path {
            if since_checkpoint >= opts.checkpoint_interval {
                state.write_checkpoint(p, config, group)?;
                since_checkpoint = 0;
            }
        }
    }

    if let Some(p) = &opts.checkpoint_path {
        state.write_checkpoint(p, config, group)?;
    }
    let regular_reps: Vec<CellList> = state
        .visited
        .iter()
        .filter(|(_, &reg)| reg)
        .map(|(c, _)| c.clone())
        .collect();
    let orbit_sizes: Vec<u64> = regular_reps
        .par_iter()
        .map(|cells| {
            orbit_size_subdivision(
                &Subdivision {
                    cells: cells.clone(),
                },
                group,
            )
        })
        .collect();
    let total = orbit_sizes.iter().sum();
    let nonregular_orbits = state.visited.values().filter(|&&r| !r).count() as u64;
    Ok(EnumerationOutcome::Complete(TriangulationCatalog {
        reps: regular_reps,
        orbit_sizes,
        total,
        nonregular_orbits,
    }))
}

/// Union of the secondary-cone rays over the triangulation orbit
/// representatives, deduplicated by canonical form; rays and induced
/// subdivisions are matched both by reduced coordinates and by subdivision
/// equality, and the two identifications must agree.
pub fn collect_coarsest_orbits(
    config: &PointConfiguration,
    catalog: &TriangulationCatalog,
    group: &LabelGroup,
) -> Result<CoarsestCatalog> {
    let lineality = lineality_basis(config);
    let per_rep: Vec<Vec<(QVector, Subdivision)>> = catalog
        .reps
        .par_iter()
        .map(|cells| {
            secondary_rays(
                config,
                &Subdivision {
                    cells: cells.clone(),
                },
            )
        })
        .collect::<Result<_>>()?;

    type RayKey = Vec<crate::exactgeom::Int>;
    let mut by_ray: BTreeMap<RayKey, (QVector, CellList, u64, usize)> = BTreeMap::new();
    let mut by_subdivision: BTreeMap<CellList, RayKey> = BTreeMap::new();
    for rays in per_rep {
        for (ray, sub) in rays {
            let canon_ray = canonical_vector(&ray, group, Some(&lineality));
            let key = crate::exactgeom::to_primitive(&canon_ray);
            let canon_sub = canonical_cells(&sub.cells, group);
            match by_subdivision.get(&canon_sub) {
                Some(existing) if existing != &key => {
                    return Err(Error::Invariant(
                        "ray and subdivision canonical forms disagree".into(),
                    ));
                }
                _ => {}
            }
            by_subdivision.insert(canon_sub.clone(), key.clone());
            by_ray.entry(key).or_insert_with(|| {
                let size = orbit_size_subdivision(
                    &Subdivision {
                        cells: canon_sub.clone(),
                    },
                    group,
                );
                let spread = canon_sub.len();
                (canon_ray, canon_sub, size, spread)
            });
        }
    }
    if by_ray.len() != by_subdivision.len() {
        return Err(Error::Invariant(
            "distinct rays induced the same coarsest subdivision".into(),
        ));
    }
    let mut ray_reps = Vec::with_capacity(by_ray.len());
    let mut subdivision_reps = Vec::with_capacity(by_ray.len());
    let mut orbit_sizes = Vec::with_capacity(by_ray.len());
    let mut spreads = Vec::with_capacity(by_ray.len());
    for (_, (ray, sub, size, spread)) in by_ray {
        ray_reps.push(ray);
        subdivision_reps.push(sub);
        orbit_sizes.push(size);
        spreads.push(spread);
    }
    Ok(CoarsestCatalog {
        ray_reps,
        subdivision_reps,
        orbit_sizes,
        spreads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersimplex::{vertices, HypersimplexSpec};
    use crate::symmetry::GroupSpec;

    fn delta(k: usize, n: usize) -> PointConfiguration {
        vertices(HypersimplexSpec::new(k, n).unwrap())
    }

    fn run(config: &PointConfiguration, group: &LabelGroup) -> TriangulationCatalog {
        match enumerate_regular_triangulations(config, group, &EnumerateOptions::default())
            .unwrap()
        {
            EnumerationOutcome::Complete(c) => c,
            EnumerationOutcome::Paused { .. } => panic!("no budget was set"),
        }
    }

    #[test]
    fn delta24_three_triangulations() {
        let c = delta(2, 4);
        let trivial = LabelGroup::trivial(6);
        let catalog = run(&c, &trivial);
        assert_eq!(catalog.orbits(), 3);
        assert_eq!(catalog.total, 3);
        assert_eq!(catalog.nonregular_orbits, 0);

        let sym = LabelGroup::for_hypersimplex(
            HypersimplexSpec::new(2, 4).unwrap(),
            &GroupSpec::Sym,
        )
        .unwrap();
        let catalog_sym = run(&c, &sym);
        assert_eq!(catalog_sym.orbits(), 1);
        assert_eq!(catalog_sym.total, 3);
    }

    #[test]
    fn delta24_coarsest_is_one_split_orbit() {
        let c = delta(2, 4);
        let sym = LabelGroup::for_hypersimplex(
            HypersimplexSpec::new(2, 4).unwrap(),
            &GroupSpec::Sym,
        )
        .unwrap();
        let catalog = run(&c, &sym);
        let coarsest = collect_coarsest_orbits(&c, &catalog, &sym).unwrap();
        assert_eq!(coarsest.orbits(), 1);
        assert_eq!(coarsest.orbit_sizes, vec![3]);
        assert_eq!(coarsest.spreads, vec![2]);
    }

    #[test]
    fn delta25_sigma_rays() {
        let spec = HypersimplexSpec::new(2, 5).unwrap();
        let c = delta(2, 5);
        let sym = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
        let catalog = run(&c, &sym);
        // every triangulation of the second hypersimplex on five points is
        // regular
        assert_eq!(catalog.nonregular_orbits, 0);
        let coarsest = collect_coarsest_orbits(&c, &catalog, &sym).unwrap();
        assert_eq!(coarsest.orbits(), 2);
        let mut sizes = coarsest.orbit_sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![10, 10]);
        let mut spreads = coarsest.spreads.clone();
        spreads.sort_unstable();
        assert_eq!(spreads, vec![2, 5]);
    }

    #[test]
    fn checkpoint_resume_identical() {
        let c = delta(2, 4);
        let trivial = LabelGroup::trivial(6);
        let dir = std::env::temp_dir().join(format!("secfan-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d24.ckpt");
        let _ = std::fs::remove_file(&path);
        let opts = EnumerateOptions {
            checkpoint_path: Some(path.clone()),
            checkpoint_interval: 1,
            max_nodes: Some(1),
        };
        let mut segments = 0;
        let catalog = loop {
            segments += 1;
            match enumerate_regular_triangulations(&c, &trivial, &opts).unwrap() {
                EnumerationOutcome::Complete(cat) => break cat,
                EnumerationOutcome::Paused { .. } => continue,
            }
        };
        assert!(segments >= 3);
        let direct = run(&c, &trivial);
        assert_eq!(catalog, direct);
        let _ = std::fs::remove_file(&path);
    }
}
