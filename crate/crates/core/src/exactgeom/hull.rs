//! Convex hulls of point configurations: facets, lower facets, edges,
//! pulling triangulations and normalized lattice volumes.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::dd::{dd_rays, HCone};
use super::linalg::{dot, lex_cmp, QMatrix, QVector, Rational};
use crate::error::{Error, Result};

pub use super::linalg::{affine_dim, affine_dim_of};

/// Irredundant affine H-description of a polytope given by its points.
/// `a·x + a0 >= 0` for inequalities, `a·x + a0 = 0` for equations.
#[derive(Debug, Clone)]
pub struct FacetDescription {
    pub inequalities: Vec<(QVector, Rational)>,
    pub equations: Vec<(QVector, Rational)>,
    pub ambient_dim: usize,
}

impl FacetDescription {
    pub fn eval_inequality(&self, which: usize, point: &[Rational]) -> Rational {
        let (a, a0) = &self.inequalities[which];
        dot(a, point) + a0
    }
}

/// Facets and affine hull of `conv(points)` via the cone over the
/// homogenized points, dualized by double description.
pub fn facet_description(points: &QMatrix) -> Result<FacetDescription> {
    if points.nrows() == 0 {
        return Err(Error::Degenerate("no points".into()));
    }
    let d = points.ncols();
    let rows: Vec<QVector> = points
        .rows_iter()
        .map(|p| {
            let mut r = p.to_vec();
            r.push(Rational::from_integer(1.into()));
            r
        })
        .collect();
    let dual = HCone {
        inequalities: rows,
        equations: vec![],
        ambient_dim: d + 1,
    };
    let polar = dd_rays(&dual)?;
    let split = |v: &QVector| -> (QVector, Rational) {
        let (a, a0) = v.split_at(d);
        (a.to_vec(), a0[0].clone())
    };
    Ok(FacetDescription {
        inequalities: polar.rays.iter().map(&split).collect(),
        equations: polar.lineality_basis.iter().map(&split).collect(),
        ambient_dim: d,
    })
}

/// Vertex sets of the lower facets of the lifted configuration, i.e. the
/// facets admitting a downward pointing outer normal. The last coordinate of
/// `lifted` is the height. If the heights are an affine function of the
/// points, there is no proper lower facet and the single cell of all points
/// is returned.
pub fn lower_facets(lifted: &QMatrix) -> Result<Vec<Vec<usize>>> {
    let n = lifted.nrows();
    let dd = lifted.ncols(); // d + 1
    if n == 0 || dd == 0 {
        return Err(Error::Degenerate("empty lifted configuration".into()));
    }
    if (1..n).all(|i| lifted.row(i) == lifted.row(0)) {
        return Err(Error::Degenerate("all lifted points coincide".into()));
    }
    if affine_dim(lifted) < dd {
        // Heights affine over the base: the trivial subdivision, provided
        // the base itself spans.
        let base_cols: Vec<usize> = (0..dd - 1).collect();
        let base = select_cols(lifted, &base_cols);
        if affine_dim(&base) == dd - 1 {
            return Ok(vec![(0..n).collect()]);
        }
        return Err(Error::Degenerate(
            "configuration does not affinely span its ambient space".into(),
        ));
    }
    let fd = facet_description(lifted)?;
    let mut cells = Vec::new();
    for (a, a0) in &fd.inequalities {
        // Inner normal with positive last coordinate = outer normal pointing
        // down.
        if a[dd - 1].is_positive() {
            let cell: Vec<usize> = (0..n)
                .filter(|&i| (dot(a, lifted.row(i)) + a0).is_zero())
                .collect();
            cells.push(cell);
        }
    }
    cells.sort();
    Ok(cells)
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

/// The 1-faces of `conv(points)` as index pairs, for points in convex
/// position. A pair spans an edge exactly when the smallest face containing
/// both points contains nothing else.
pub fn polytope_edges(points: &QMatrix) -> Result<Vec<(usize, usize)>> {
    let n = points.nrows();
    if n < 2 {
        return Ok(Vec::new());
    }
    let fd = facet_description(points)?;
    let nf = fd.inequalities.len();
    let incidence: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..nf)
                .map(|f| fd.eval_inequality(f, points.row(i)).is_zero())
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let common: Vec<usize> = (0..nf)
                .filter(|&f| incidence[i][f] && incidence[j][f])
                .collect();
            let face_members = (0..n)
                .filter(|&p| common.iter().all(|&f| incidence[p][f]))
                .collect::<Vec<_>>();
            if face_members == [i, j] {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}

/// Pulling triangulation of the subconfiguration indexed by `subset`:
/// recursively cone the lexicographically smallest point over the
/// triangulated facets avoiding it. Deterministic; handles arbitrary
/// (degenerate) configurations in convex position.
pub fn pulling_triangulation(points: &QMatrix, subset: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut memo: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    pull_rec(points, &sorted, &mut memo)
}

fn pull_rec(
    points: &QMatrix,
    subset: &[usize],
    memo: &mut BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Result<Vec<Vec<usize>>> {
    if let Some(t) = memo.get(subset) {
        return Ok(t.clone());
    }
    let rank = affine_dim_of(points, subset);
    if subset.len() == rank + 1 {
        let t = vec![subset.to_vec()];
        memo.insert(subset.to_vec(), t.clone());
        return Ok(t);
    }
    // lexicographically smallest point of the face
    let apex = *subset
        .iter()
        .min_by(|&&a, &&b| lex_cmp(points.row(a), points.row(b)))
        .expect("nonempty face");
    let sub = points.select_rows(subset);
    let fd = facet_description(&sub)?;
    let mut cells = Vec::new();
    for f in 0..fd.inequalities.len() {
        let members: Vec<usize> = subset
            .iter()
            .enumerate()
            .filter(|&(local, _)| fd.eval_inequality(f, sub.row(local)).is_zero())
            .map(|(_, &global)| global)
            .collect();
        if members.contains(&apex) {
            continue;
        }
        for mut simplex in pull_rec(points, &members, memo)? {
            simplex.push(apex);
            simplex.sort_unstable();
            cells.push(simplex);
        }
    }
    cells.sort();
    cells.dedup();
    memo.insert(subset.to_vec(), cells.clone());
    Ok(cells)
}

/// Normalized volume of a full-dimensional simplex w.r.t. the lattice of the
/// ambient coordinates (absolute determinant of the edge matrix at the first
/// vertex).
pub fn simplex_volume(points: &QMatrix, simplex: &[usize]) -> Rational {
    let d = points.ncols();
    debug_assert_eq!(simplex.len(), d + 1);
    let mut m = QMatrix::new(d, d);
    for (r, &i) in simplex[1..].iter().enumerate() {
        for c in 0..d {
            m.set(r, c, points.get(i, c) - points.get(simplex[0], c));
        }
    }
    m.det().abs()
}

/// Normalized lattice volume of `conv(points[subset])`, computed by a
/// pulling triangulation. The points must be given in full-dimensional
/// coordinates whose integer lattice is the reference lattice (a unimodular
/// simplex has volume 1). Lower-dimensional input yields 0.
pub fn lattice_volume(points: &QMatrix, subset: &[usize]) -> Result<Rational> {
    let d = points.ncols();
    if affine_dim_of(points, subset) < d {
        return Ok(Rational::zero());
    }
    let tri = pulling_triangulation(points, subset)?;
    let mut vol = Rational::zero();
    for cell in &tri {
        vol += simplex_volume(points, cell);
    }
    Ok(vol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::linalg::rat_int;
    use num_traits::One;

    #[test]
    fn simplex_facets() {
        // 3 unit vectors in R^3: one equation (sum = 1), three facets.
        let pts = QMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let fd = facet_description(&pts).unwrap();
        assert_eq!(fd.equations.len(), 1);
        assert_eq!(fd.inequalities.len(), 3);
        let (e, e0) = &fd.equations[0];
        for p in pts.rows_iter() {
            assert!((dot(e, p) + e0).is_zero());
        }
    }

    #[test]
    fn single_point_fixed_by_equations() {
        let pts = QMatrix::from_int_rows(&[vec![3, -1]]);
        let fd = facet_description(&pts).unwrap();
        assert_eq!(fd.equations.len(), 2);
        for (e, e0) in &fd.equations {
            assert!((dot(e, pts.row(0)) + e0).is_zero());
        }
    }

    #[test]
    fn folded_square_has_two_cells() {
        // unit square lifted by heights (0,0,0,1): fold along a diagonal
        let lifted = QMatrix::from_int_rows(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 1],
        ]);
        let cells = lower_facets(&lifted).unwrap();
        assert_eq!(cells, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn flat_square_is_trivial() {
        let lifted = QMatrix::from_int_rows(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
        ]);
        let cells = lower_facets(&lifted).unwrap();
        assert_eq!(cells, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn coincident_points_rejected() {
        let lifted = QMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(lower_facets(&lifted).is_err());
    }

    #[test]
    fn triangle_and_segment_edges() {
        let tri = QMatrix::from_int_rows(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(polytope_edges(&tri).unwrap().len(), 3);
        let seg = QMatrix::from_int_rows(&[vec![0], vec![2]]);
        assert_eq!(polytope_edges(&seg).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn volumes() {
        let simplex = QMatrix::from_int_rows(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert!(lattice_volume(&simplex, &[0, 1, 2]).unwrap().is_one());
        let square = QMatrix::from_int_rows(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(lattice_volume(&square, &[0, 1, 2, 3]).unwrap(), rat_int(2));
        // lower-dimensional input
        assert!(lattice_volume(&square, &[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn pulling_covers_square() {
        let square = QMatrix::from_int_rows(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let tri = pulling_triangulation(&square, &[0, 1, 2, 3]).unwrap();
        assert_eq!(tri.len(), 2);
        let total: Rational = tri.iter().map(|c| simplex_volume(&square, c)).sum();
        assert_eq!(total, rat_int(2));
    }
}
