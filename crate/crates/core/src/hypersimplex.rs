//! Hypersimplices with a fixed vertex ordering, their named lifting
//! functions, Eulerian numbers and spread bounds.
//!
//! The vertices of the hypersimplex are the 0/1 vectors of length `n` with
//! exactly `k` ones, listed in descending lexicographic order. All labels
//! throughout the crate refer to positions in this list.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{
    affine_dim, facet_description, dot, rat_int, Int, QMatrix, QVector, Rational,
};
use crate::metrics::DissimilarityMap;
use crate::subdivide::HeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypersimplexSpec {
    pub k: usize,
    pub n: usize,
}

impl HypersimplexSpec {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 1 || k + 1 > n {
            return Err(Error::InvalidParameter(format!(
                "hypersimplex requires 1 <= k <= n-1, got k={k}, n={n}"
            )));
        }
        Ok(HypersimplexSpec { k, n })
    }

    /// The lifting constructions additionally need 2 <= k <= n-2.
    pub fn require_proper(&self) -> Result<()> {
        if self.k < 2 || self.k + 2 > self.n {
            return Err(Error::InvalidParameter(format!(
                "construction requires 2 <= k <= n-2, got k={}, n={}",
                self.k, self.n
            )));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        binomial(self.n, self.k)
            .try_into()
            .expect("vertex count fits in usize")
    }
}

/// A point configuration in convex position, kept both in its original
/// coordinates and in a full-dimensional coordinate projection (columns
/// dropped from the end while the affine dimension is preserved). Cells and
/// faces are always reported in the original labels.
#[derive(Debug, Clone)]
pub struct PointConfiguration {
    points: QMatrix,
    proj: QMatrix,
    dropped_cols: Vec<usize>,
    dim: usize,
    hyper: Option<HypersimplexSpec>,
}

impl PointConfiguration {
    /// Validating constructor: rows pairwise distinct and in convex
    /// position.
    pub fn from_points(points: QMatrix) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(Error::Degenerate("empty point configuration".into()));
        }
        for i in 0..points.nrows() {
            for j in (i + 1)..points.nrows() {
                if points.row(i) == points.row(j) {
                    return Err(Error::Degenerate(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        let fd = facet_description(&points)?;
        let n = points.nrows();
        let nf = fd.inequalities.len();
        let inc: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..nf)
                    .map(|f| fd.eval_inequality(f, points.row(i)).is_zero())
                    .collect()
            })
            .collect();
        for i in 0..n {
            let members = (0..n)
                .filter(|&p| (0..nf).all(|f| !inc[i][f] || inc[p][f]))
                .count();
            if members > 1 {
                return Err(Error::Degenerate(format!(
                    "point {i} is not a vertex of the hull"
                )));
            }
        }
        Ok(Self::trusted(points, None))
    }

    /// Constructor for inputs already known to be in convex position.
    fn trusted(points: QMatrix, hyper: Option<HypersimplexSpec>) -> Self {
        let dim = affine_dim(&points);
        let (proj, dropped_cols) = project_full_dim(&points, dim);
        PointConfiguration {
            points,
            proj,
            dropped_cols,
            dim,
            hyper,
        }
    }

    pub fn hypersimplex(spec: HypersimplexSpec) -> Self {
        let rows: Vec<QVector> = vertex_subsets(spec)
            .iter()
            .map(|s| subset_to_row(s, spec.n))
            .collect();
        let points = QMatrix::from_rows(rows).expect("uniform row length");
        Self::trusted(points, Some(spec))
    }

    pub fn n_points(&self) -> usize {
        self.points.nrows()
    }

    /// Affine dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &QMatrix {
        &self.points
    }

    /// Full-dimensional coordinates (d columns).
    pub fn proj(&self) -> &QMatrix {
        &self.proj
    }

    pub fn dropped_cols(&self) -> &[usize] {
        &self.dropped_cols
    }

    pub fn hypersimplex_spec(&self) -> Option<HypersimplexSpec> {
        self.hyper
    }

    /// Lifted full-dimensional coordinates: proj rows with the height
    /// appended.
    pub fn lift(&self, heights: &HeightFunction) -> Result<QMatrix> {
        if heights.values.len() != self.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "{} heights for {} points",
                heights.values.len(),
                self.n_points()
            )));
        }
        let rows: Vec<QVector> = (0..self.n_points())
            .map(|i| {
                let mut r = self.proj.row(i).to_vec();
                r.push(heights.values[i].clone());
                r
            })
            .collect();
        QMatrix::from_rows(rows)
    }
}

fn project_full_dim(points: &QMatrix, dim: usize) -> (QMatrix, Vec<usize>) {
    let mut keep: Vec<usize> = (0..points.ncols()).collect();
    let mut dropped = Vec::new();
    while keep.len() > dim {
        let mut removed = false;
        for pos in (0..keep.len()).rev() {
            let mut candidate = keep.clone();
            let col = candidate.remove(pos);
            let m = select_cols(points, &candidate);
            if affine_dim(&m) == dim {
                dropped.push(col);
                keep = candidate;
                removed = true;
                break;
            }
        }
        assert!(removed, "full-dimensional projection exists");
    }
    dropped.sort_unstable();
    (select_cols(points, &keep), dropped)
}

fn select_cols(m: &QMatrix, cols: &[usize]) -> QMatrix {
    let mut out = QMatrix::new(m.nrows(), cols.len());
    for i in 0..m.nrows() {
        for (jj, &j) in cols.iter().enumerate() {
            out.set(i, jj, m.get(i, j).clone());
        }
    }
    out
}

fn subset_to_row(subset: &[usize], n: usize) -> QVector {
    let mut row = vec![Rational::zero(); n];
    for &i in subset {
        row[i] = Rational::one();
    }
    row
}

/// The k-subsets of {0,..,n-1} as sorted tuples in lexicographic order.
/// This matches the descending lexicographic order of the 0/1 vertex
/// vectors: 1100, 1010, 1001, 0110, 0101, 0011 for (k,n) = (2,4).
pub fn vertex_subsets(spec: HypersimplexSpec) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(spec.num_vertices());
    let mut cur: Vec<usize> = (0..spec.k).collect();
    loop {
        out.push(cur.clone());
        // next combination in lexicographic order
        let mut i = spec.k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + spec.n - spec.k {
                break;
            }
        }
        if cur[i] == i + spec.n - spec.k {
            return out;
        }
        cur[i] += 1;
        for j in (i + 1)..spec.k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The hypersimplex as a point configuration, vertices in descending
/// lexicographic order.
pub fn vertices(spec: HypersimplexSpec) -> PointConfiguration {
    PointConfiguration::hypersimplex(spec)
}

/// Height 1 on the first n-k vertices, 0 elsewhere.
pub fn lambda_lift(spec: HypersimplexSpec) -> Result<HeightFunction> {
    spec.require_proper()?;
    let m = spec.num_vertices();
    let ones = spec.n - spec.k;
    Ok(HeightFunction::from_values(
        (0..m)
            .map(|i| if i < ones { rat_int(1) } else { rat_int(0) })
            .collect(),
    ))
}

/// Height 1 on all vertices with a leading one except the last of them,
/// 0 elsewhere.
pub fn kappa_lift(spec: HypersimplexSpec) -> Result<HeightFunction> {
    spec.require_proper()?;
    let m = spec.num_vertices();
    let ones = usize::try_from(binomial(spec.n - 1, spec.k - 1)).unwrap() - 1;
    Ok(HeightFunction::from_values(
        (0..m)
            .map(|i| if i < ones { rat_int(1) } else { rat_int(0) })
            .collect(),
    ))
}

/// The center vertex: a leading one, n-k zeros, and k-1 trailing ones.
pub fn center_vertex(spec: HypersimplexSpec) -> Result<QVector> {
    spec.require_proper()?;
    let mut subset = vec![0];
    subset.extend((spec.n - spec.k + 1)..spec.n);
    Ok(subset_to_row(&subset, spec.n))
}

/// 0-based label of the center vertex in the descending lexicographic
/// ordering.
pub fn center_label(spec: HypersimplexSpec) -> Result<usize> {
    spec.require_proper()?;
    Ok(usize::try_from(binomial(spec.n - 1, spec.k - 1)).unwrap() - 1)
}

/// The split pseudo-metric of the bipartition {A, B} of {0,..,n-1}: zero on
/// pairs within a part, one across.
pub fn split_pseudometric(n: usize, part: &[usize]) -> Result<DissimilarityMap> {
    let aset: std::collections::BTreeSet<usize> = part.iter().copied().collect();
    if aset.is_empty() || aset.len() == n || part.iter().any(|&i| i >= n) {
        return Err(Error::InvalidParameter(format!(
            "split part must be a proper nonempty subset of 0..{n}"
        )));
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let same = aset.contains(&i) == aset.contains(&j);
            values.push(if same { rat_int(0) } else { rat_int(1) });
        }
    }
    DissimilarityMap::new(n, values)
}

/// The thrackle metric T(i,j) = (j-i)(n-j+i) for i < j (1-based).
pub fn thrackle(n: usize) -> Result<DissimilarityMap> {
    if n < 3 {
        return Err(Error::InvalidParameter("thrackle requires n >= 3".into()));
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let v = ((j - i) * (n - j + i)) as i64;
            values.push(rat_int(v));
        }
    }
    DissimilarityMap::new(n, values)
}

/// Eulerian number A(n,k) by the recursion
/// A(n,k) = k A(n-1,k) + (n-k+1) A(n-1,k-1), A(1,1) = 1; zero outside
/// 1 <= k <= n.
pub fn eulerian(n: usize, k: usize) -> Int {
    if n == 0 || k == 0 || k > n {
        return Int::zero();
    }
    let mut row: Vec<Int> = vec![Int::zero(); n + 1];
    row[1] = Int::one();
    for m in 2..=n {
        let mut next = vec![Int::zero(); n + 1];
        for (j, entry) in next.iter_mut().enumerate().take(m + 1).skip(1) {
            *entry = Int::from(j) * &row[j] + Int::from(m - j + 1) * &row[j - 1];
        }
        row = next;
    }
    row[k].clone()
}

pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut num = Int::one();
    for i in 0..k.min(n - k) {
        num = num * Int::from(n - i) / Int::from(i + 1);
    }
    num
}

/// Upper bound on the spread of a matroidal subdivision of the
/// hypersimplex: C(n-2, k-1).
pub fn speyer_bound(k: usize, n: usize) -> Result<Int> {
    HypersimplexSpec::new(k, n)?.require_proper()?;
    Ok(binomial(n - 2, k - 1))
}

/// Spread bound for subdivisions induced by extreme tropicalized linear
/// spaces: C(n-2, k-1) - (k-1)(n-k-1) + 1.
pub fn gr_ray_bound(k: usize, n: usize) -> Result<Int> {
    let b = speyer_bound(k, n)?;
    Ok(b - Int::from((k - 1) * (n - k - 1)) + Int::one())
}

/// Evaluate a linear functional on all configuration points.
pub fn evaluate_on_points(config: &PointConfiguration, functional: &[Rational]) -> QVector {
    config
        .points()
        .rows_iter()
        .map(|p| dot(functional, p))
        .collect()
}
