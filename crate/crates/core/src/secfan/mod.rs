//! Secondary cones of subdivisions, the definitive coarsest test, ray
//! enumeration, regularity of triangulations, and GKZ vectors.

pub mod enumerate;
pub mod flips;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactgeom::{
    cone_dim, dd_rays, lattice_volume, strict_interior_point, to_primitive, zero_vec, HCone,
    QMatrix, QVector, Rational, VCone,
};
use crate::hypersimplex::PointConfiguration;
use crate::subdivide::{regular_subdivision, HeightFunction, Subdivision};

pub use enumerate::{
    collect_coarsest_orbits, enumerate_regular_triangulations, seed_triangulation,
    CoarsestCatalog, EnumerateOptions, EnumerationOutcome, TriangulationCatalog,
};
pub use flips::{circuits, flips, Circuit};

/// The closed secondary cone of a subdivision in height space.
#[derive(Debug, Clone)]
pub struct SecondaryCone {
    pub hcone: HCone,
}

/// H-description of the secondary cone of `s`: per maximal cell, the affine
/// interpolation through an affine basis of the cell must agree with the
/// heights on the cell's remaining vertices (equations) and stay below the
/// heights everywhere else (inequalities). Duplicate rows are removed.
pub fn secondary_cone(config: &PointConfiguration, s: &Subdivision) -> Result<SecondaryCone> {
    let n = config.n_points();
    let d = config.dim();
    let proj = config.proj();
    let mut ineqs: Vec<Vec<crate::exactgeom::Int>> = Vec::new();
    let mut eqs: Vec<Vec<crate::exactgeom::Int>> = Vec::new();
    for cell in &s.cells {
        let basis = affine_basis(proj, cell, d)?;
        // interpolation matrix: columns are homogenized basis points
        let mut m = QMatrix::new(d + 1, d + 1);
        for (c, &b) in basis.iter().enumerate() {
            for r in 0..d {
                m.set(r, c, proj.get(b, r).clone());
            }
            m.set(d, c, Rational::one());
        }
        let in_cell: std::collections::BTreeSet<usize> = cell.iter().copied().collect();
        for p in 0..n {
            if basis.contains(&p) {
                continue;
            }
            let mut rhs: QVector = proj.row(p).to_vec();
            rhs.push(Rational::one());
            let gamma = m.solve(&rhs).ok_or_else(|| {
                Error::Invariant("affine basis of a cell does not interpolate".into())
            })?;
            let mut row = zero_vec(n);
            row[p] = Rational::one();
            for (&b, g) in basis.iter().zip(&gamma) {
                row[b] -= g;
            }
            let row = to_primitive(&row);
            if in_cell.contains(&p) {
                eqs.push(row);
            } else {
                ineqs.push(row);
            }
        }
    }
    ineqs.sort();
    ineqs.dedup();
    eqs.sort();
    eqs.dedup();
    let to_q = |rows: Vec<Vec<crate::exactgeom::Int>>| -> Vec<QVector> {
        rows.iter()
            .map(|r| crate::exactgeom::int_vec_to_rational(r))
            .collect()
    };
    Ok(SecondaryCone {
        hcone: HCone {
            inequalities: to_q(ineqs),
            equations: to_q(eqs),
            ambient_dim: n,
        },
    })
}

fn affine_basis(proj: &QMatrix, cell: &[usize], d: usize) -> Result<Vec<usize>> {
    let mut basis: Vec<usize> = Vec::with_capacity(d + 1);
    for &p in cell {
        if basis.len() == d + 1 {
            break;
        }
        let mut candidate = basis.clone();
        candidate.push(p);
        if crate::exactgeom::affine_dim_of(proj, &candidate) == candidate.len() - 1 {
            basis = candidate;
        }
    }
    if basis.len() != d + 1 {
        return Err(Error::InvalidParameter(
            "cell is not full-dimensional".into(),
        ));
    }
    Ok(basis)
}

/// Canonical basis of the lineality space of the secondary fan: the heights
/// that are affine functions of the points.
pub fn lineality_basis(config: &PointConfiguration) -> Vec<QVector> {
    let n = config.n_points();
    let d = config.dim();
    let mut rows: Vec<QVector> = Vec::with_capacity(d + 1);
    for c in 0..d {
        rows.push((0..n).map(|p| config.proj().get(p, c).clone()).collect());
    }
    rows.push(vec![Rational::one(); n]);
    let (r, _) = QMatrix::from_rows(rows)
        .expect("uniform row length")
        .rref();
    (0..r.nrows())
        .map(|i| crate::exactgeom::int_vec_to_rational(&to_primitive(r.row(i))))
        .collect()
}

/// V-description of the secondary cone.
pub fn secondary_cone_rays(config: &PointConfiguration, s: &Subdivision) -> Result<VCone> {
    dd_rays(&secondary_cone(config, s)?.hcone)
}

/// Definitive coarsest test: the secondary cone is one-dimensional modulo
/// its lineality space. The trivial subdivision is flagged distinctly.
pub fn is_coarsest(config: &PointConfiguration, heights: &HeightFunction) -> Result<bool> {
    let s = regular_subdivision(config, heights)?;
    if s.is_trivial() {
        return Err(Error::TrivialSubdivision);
    }
    let dim = cone_dim(&secondary_cone(config, &s)?.hcone)?;
    Ok(dim == config.dim() + 2)
}

/// Rays of the secondary cone modulo lineality, each with the subdivision
/// it induces. For a regular triangulation these are exactly the coarsest
/// subdivisions it refines.
pub fn secondary_rays(
    config: &PointConfiguration,
    s: &Subdivision,
) -> Result<Vec<(QVector, Subdivision)>> {
    let v = secondary_cone_rays(config, s)?;
    v.rays
        .iter()
        .map(|r| {
            let sub = regular_subdivision(config, &HeightFunction::from_values(r.clone()))?;
            Ok((r.clone(), sub))
        })
        .collect()
}

/// A triangulation is regular when its secondary cone has a point making
/// every fold inequality strict.
pub fn is_regular_triangulation(
    config: &PointConfiguration,
    t: &Subdivision,
) -> Result<bool> {
    if !t.is_triangulation(config) {
        return Err(Error::InvalidParameter(
            "subdivision is not a triangulation".into(),
        ));
    }
    let mut cone = secondary_cone(config, t)?.hcone;
    cone.equations.clear();
    Ok(strict_interior_point(&cone)?.is_some())
}

/// GKZ vector: per point, the total volume of the maximal cells containing
/// it.
pub fn gkz_vector(config: &PointConfiguration, t: &Subdivision) -> Result<QVector> {
    let n = config.n_points();
    let mut out = zero_vec(n);
    for cell in &t.cells {
        let vol = lattice_volume(config.proj(), cell)?;
        for &p in cell {
            out[p] += &vol;
        }
    }
    Ok(out)
}

/// Total normalized volume of the configuration.
pub fn total_volume(config: &PointConfiguration) -> Result<Rational> {
    lattice_volume(
        config.proj(),
        &(0..config.n_points()).collect::<Vec<usize>>(),
    )
}
