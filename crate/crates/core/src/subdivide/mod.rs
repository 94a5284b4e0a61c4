//! Regular subdivisions from height functions, their dual graphs, and the
//! per-subdivision predicates (split, complete dual graph, matroidal cells,
//! multi-splits, uniform tropical Pluecker vectors, common refinements).

pub mod envelope;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{
    affine_dim_of, lattice_volume, lower_facets, polytope_edges, QVector, Rational,
};
use crate::hypersimplex::PointConfiguration;

pub use envelope::{envelope, tight_span, Envelope, TightSpan};

/// Heights indexed by the configuration points. The lower-hull convention
/// is used throughout: cells are projections of faces visible from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFunction {
    pub values: QVector,
}

impl HeightFunction {
    pub fn from_values(values: QVector) -> Self {
        HeightFunction { values }
    }

    pub fn zero(len: usize) -> Self {
        HeightFunction {
            values: crate::exactgeom::zero_vec(len),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn negated(&self) -> Self {
        HeightFunction {
            values: self.values.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn add(&self, other: &HeightFunction) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(
                "height functions of different lengths".into(),
            ));
        }
        Ok(HeightFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &HeightFunction) -> Result<Self> {
        self.add(&other.negated())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        HeightFunction {
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }
}

/// A polyhedral subdivision given by its maximal cells, each a sorted list
/// of point labels; the cell list itself is sorted lexicographically.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Subdivision {
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn new(mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort();
        Subdivision { cells }
    }

    /// The number of maximal cells.
    pub fn spread(&self) -> usize {
        self.cells.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1
    }

    /// All cells are simplices of the configuration dimension.
    pub fn is_triangulation(&self, config: &PointConfiguration) -> bool {
        self.cells.iter().all(|c| c.len() == config.dim() + 1)
    }
}

/// The regular subdivision induced by lifting the points to the given
/// heights and projecting the lower facets.
pub fn regular_subdivision(
    config: &PointConfiguration,
    heights: &HeightFunction,
) -> Result<Subdivision> {
    let lifted = config.lift(heights)?;
    Ok(Subdivision::new(lower_facets(&lifted)?))
}

/// Dual graph: one node per maximal cell, one edge per shared
/// codimension-one face, the face recorded as its point set.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize, Vec<usize>)>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        if self.n_nodes == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n_nodes];
        for (a, b, _) in &self.edges {
            adj[*a].push(*b);
            adj[*b].push(*a);
        }
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n_nodes * (self.n_nodes - 1) / 2
    }
}

/// Dual graph of a subdivision; cells share an edge exactly when their
/// common point set spans an affine space of dimension d-1.
pub fn dual_graph(config: &PointConfiguration, s: &Subdivision) -> Result<DualGraph> {
    if s.cells.is_empty() {
        return Err(Error::Degenerate("subdivision without cells".into()));
    }
    let d = config.dim();
    let mut edges = Vec::new();
    for i in 0..s.cells.len() {
        for j in (i + 1)..s.cells.len() {
            let common: Vec<usize> = intersect_sorted(&s.cells[i], &s.cells[j]);
            if common.len() >= d && affine_dim_of(config.proj(), &common) == d - 1 {
                edges.push((i, j, common));
            }
        }
    }
    Ok(DualGraph {
        n_nodes: s.cells.len(),
        edges,
    })
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// A split is a subdivision with exactly two maximal cells.
pub fn is_split(s: &Subdivision) -> bool {
    s.spread() == 2
}

/// A proper subdivision with a complete dual graph is coarsest. The
/// condition is sufficient, not necessary; the definitive test goes through
/// the secondary cone.
pub fn is_coarsest_by_complete_dual(
    config: &PointConfiguration,
    s: &Subdivision,
) -> Result<bool> {
    if s.is_trivial() {
        return Ok(false);
    }
    Ok(dual_graph(config, s)?.is_complete())
}

/// Checks that the cell-collapse map from `fine` to `coarse` contracts the
/// dual graph of `fine` onto the dual graph of `coarse`: fibers are
/// connected and the projected edges are exactly the coarse edges.
pub fn coarsening_is_contraction(
    config: &PointConfiguration,
    fine: &Subdivision,
    coarse: &Subdivision,
) -> Result<bool> {
    let mut assign = Vec::with_capacity(fine.cells.len());
    for cell in &fine.cells {
        let mut hosts = coarse
            .cells
            .iter()
            .enumerate()
            .filter(|(_, big)| is_subset_sorted(cell, big))
            .map(|(j, _)| j);
        let Some(host) = hosts.next() else {
            return Err(Error::InvalidParameter(
                "subdivisions are not nested: a fine cell lies in no coarse cell".into(),
            ));
        };
        if hosts.next().is_some() {
            return Err(Error::InvalidParameter(
                "subdivisions are not nested: ambiguous coarse cell".into(),
            ));
        }
        assign.push(host);
    }
    let fine_graph = dual_graph(config, fine)?;
    let coarse_graph = dual_graph(config, coarse)?;

    // fibers must be connected in the fine dual graph
    for j in 0..coarse.cells.len() {
        let fiber: Vec<usize> = (0..fine.cells.len()).filter(|&i| assign[i] == j).collect();
        if fiber.is_empty() {
            return Err(Error::InvalidParameter(
                "coarse cell not covered by any fine cell".into(),
            ));
        }
        if !connected_within(&fine_graph, &fiber) {
            return Ok(false);
        }
    }
    let mut projected: Vec<(usize, usize)> = fine_graph
        .edges
        .iter()
        .filter_map(|(a, b, _)| {
            let (x, y) = (assign[*a], assign[*b]);
            match x.cmp(&y) {
                std::cmp::Ordering::Less => Some((x, y)),
                std::cmp::Ordering::Greater => Some((y, x)),
                std::cmp::Ordering::Equal => None,
            }
        })
        .collect();
    projected.sort_unstable();
    projected.dedup();
    let mut coarse_edges: Vec<(usize, usize)> = coarse_graph
        .edges
        .iter()
        .map(|(a, b, _)| (*a, *b))
        .collect();
    coarse_edges.sort_unstable();
    Ok(projected == coarse_edges)
}

fn is_subset_sorted(small: &[usize], big: &[usize]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn connected_within(g: &DualGraph, nodes: &[usize]) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    let set: std::collections::BTreeSet<usize> = nodes.iter().copied().collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, b, _) in &g.edges {
        if set.contains(a) && set.contains(b) {
            adj.entry(*a).or_default().push(*b);
            adj.entry(*b).or_default().push(*a);
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![nodes[0]];
    seen.insert(nodes[0]);
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == nodes.len()
}

/// True when every edge of the hull of the given 0/1 points has direction
/// e_i - e_j (up to sign).
pub fn is_matroidal_cell(config: &PointConfiguration, cell: &[usize]) -> Result<bool> {
    let sub = config.points().select_rows(cell);
    for (a, b) in polytope_edges(&sub)? {
        let mut pos = 0usize;
        let mut neg = 0usize;
        let mut other = false;
        for c in 0..sub.ncols() {
            let diff = sub.get(a, c) - sub.get(b, c);
            if diff.is_zero() {
                continue;
            }
            if diff.abs() == Rational::from_integer(1.into()) {
                if diff.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
            } else {
                other = true;
            }
        }
        if other || pos != 1 || neg != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uniform tropical Pluecker criterion: the vertex-edge graph of the
/// induced subdivision coincides with the vertex-edge graph of the
/// hypersimplex. Evaluated through both equivalent routes (graph equality
/// and all-cells-matroidal); the two must agree.
pub fn is_tropical_pluecker(
    config: &PointConfiguration,
    heights: &HeightFunction,
) -> Result<bool> {
    if config.hypersimplex_spec().is_none() {
        return Err(Error::InvalidParameter(
            "tropical Pluecker test requires a hypersimplex configuration".into(),
        ));
    }
    let s = regular_subdivision(config, heights)?;
    let by_cells = all_cells_matroidal(config, &s)?;
    let by_graph = subdivision_graph_equals_hull_graph(config, &s)?;
    if by_cells != by_graph {
        return Err(Error::Invariant(
            "matroidal-cell and vertex-edge-graph criteria disagree".into(),
        ));
    }
    Ok(by_graph)
}

pub fn all_cells_matroidal(config: &PointConfiguration, s: &Subdivision) -> Result<bool> {
    for cell in &s.cells {
        if !is_matroidal_cell(config, cell)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subdivision_graph_equals_hull_graph(
    config: &PointConfiguration,
    s: &Subdivision,
) -> Result<bool> {
    let hull_edges: std::collections::BTreeSet<(usize, usize)> =
        polytope_edges(config.points())?.into_iter().collect();
    let mut sub_edges = std::collections::BTreeSet::new();
    for cell in &s.cells {
        let sub = config.points().select_rows(cell);
        for (a, b) in polytope_edges(&sub)? {
            sub_edges.insert((cell[a].min(cell[b]), cell[a].max(cell[b])));
        }
    }
    // The subdivision graph always contains the hull graph; equality means
    // no extra edges appear.
    debug_assert!(hull_edges.iter().all(|e| sub_edges.contains(e)));
    Ok(sub_edges.iter().all(|e| hull_edges.contains(e)))
}

/// Multi-split test: spread = l, and every j of the maximal cells
/// (2 <= j <= l) intersect in a common face of codimension j-1.
pub fn is_multisplit(config: &PointConfiguration, s: &Subdivision) -> Result<(bool, usize)> {
    let l = s.spread();
    if l < 2 {
        return Ok((false, l));
    }
    let d = config.dim();
    for size in 2..=l {
        for subset in subsets_of_size(l, size) {
            let mut common = s.cells[subset[0]].clone();
            for &idx in &subset[1..] {
                common = intersect_sorted(&common, &s.cells[idx]);
            }
            if common.is_empty() {
                return Ok((false, l));
            }
            let want = d + 1 - size;
            if affine_dim_of(config.proj(), &common) != want {
                return Ok((false, l));
            }
        }
    }
    Ok((true, l))
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        if cur[i] == i + n - k {
            return out;
        }
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Common refinement: all full-dimensional pairwise intersections of cells.
pub fn common_refinement(
    config: &PointConfiguration,
    s1: &Subdivision,
    s2: &Subdivision,
) -> Result<Subdivision> {
    let d = config.dim();
    let mut cells = Vec::new();
    for a in &s1.cells {
        for b in &s2.cells {
            let common = intersect_sorted(a, b);
            if common.len() > d && affine_dim_of(config.proj(), &common) == d {
                cells.push(common);
            }
        }
    }
    cells.sort();
    cells.dedup();
    Ok(Subdivision { cells })
}

/// A decomposition alpha + beta = omega is coherent when the subdivision of
/// omega is the common refinement of the two summand subdivisions.
pub fn is_coherent_decomposition(
    config: &PointConfiguration,
    omega: &HeightFunction,
    alpha: &HeightFunction,
    beta: &HeightFunction,
) -> Result<bool> {
    let sum = alpha.add(beta)?;
    if &sum != omega {
        return Err(Error::InvalidParameter(
            "decomposition does not sum to the given heights".into(),
        ));
    }
    let s = regular_subdivision(config, omega)?;
    let sa = regular_subdivision(config, alpha)?;
    let sb = regular_subdivision(config, beta)?;
    Ok(s == common_refinement(config, &sa, &sb)?)
}

/// Structural checks on a computed subdivision: cells cover the
/// configuration by volume, no cell contains another, dual graph simple and
/// connected.
pub fn verify_subdivision(config: &PointConfiguration, s: &Subdivision) -> Result<()> {
    let total = lattice_volume(config.proj(), &(0..config.n_points()).collect::<Vec<_>>())?;
    let mut sum = Rational::zero();
    for cell in &s.cells {
        sum += lattice_volume(config.proj(), cell)?;
    }
    if sum != total {
        return Err(Error::Invariant(format!(
            "cell volumes sum to {sum}, configuration has volume {total}"
        )));
    }
    for (i, a) in s.cells.iter().enumerate() {
        for (j, b) in s.cells.iter().enumerate() {
            if i != j && is_subset_sorted(a, b) {
                return Err(Error::Invariant(format!(
                    "cell {i} is contained in cell {j}"
                )));
            }
        }
    }
    if s.spread() > 1 && !dual_graph(config, s)?.is_connected() {
        return Err(Error::Invariant("dual graph is disconnected".into()));
    }
    Ok(())
}
