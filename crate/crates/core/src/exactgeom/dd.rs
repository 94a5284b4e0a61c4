//! Double description method for polyhedral cones over exact rationals.
//!
//! A cone is handed over in H-description (inequalities `v·x >= 0` and
//! equations `v·x = 0`) and converted into its minimal V-description: a
//! lineality basis plus one primitive representative per extreme ray.
//! Inequalities are inserted one at a time; new rays arise as combinations
//! of adjacent positive/negative ray pairs, with adjacency decided by the
//! combinatorial criterion on zero sets. Everything is exact; there are no
//! tolerances anywhere.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::bits::Bits;
use super::linalg::{
    self, dot, dot_int, int_vec_to_rational, lex_cmp_int, make_primitive, to_primitive, Int,
    QMatrix, QVector, Rational,
};
use crate::error::{Error, Result};

/// Cone in H-description. Every row `v` of `inequalities` means `v·x >= 0`,
/// every row of `equations` means `v·x = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCone {
    pub inequalities: Vec<QVector>,
    pub equations: Vec<QVector>,
    pub ambient_dim: usize,
}

impl HCone {
    pub fn new(ambient_dim: usize) -> Self {
        HCone {
            inequalities: Vec::new(),
            equations: Vec::new(),
            ambient_dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.inequalities.iter().chain(&self.equations) {
            if v.len() != self.ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "cone row has length {}, ambient dimension is {}",
                    v.len(),
                    self.ambient_dim
                )));
            }
        }
        Ok(())
    }

    /// Rows of `other` appended; dimensions must agree.
    pub fn intersection(&self, other: &HCone) -> Result<HCone> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                "cone intersection in different ambient dimensions".into(),
            ));
        }
        let mut c = self.clone();
        c.inequalities.extend(other.inequalities.iter().cloned());
        c.equations.extend(other.equations.iter().cloned());
        Ok(c)
    }
}

/// Cone in V-description. Rays are primitive integer vectors reduced modulo
/// the lineality space; the lineality basis is in reduced row echelon form
/// with positive pivots. Both lists are sorted, so equal cones compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VCone {
    pub rays: Vec<QVector>,
    pub lineality_basis: Vec<QVector>,
    pub ambient_dim: usize,
}

impl VCone {
    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        let gens: Vec<QVector> = self
            .rays
            .iter()
            .chain(&self.lineality_basis)
            .cloned()
            .collect();
        if gens.is_empty() {
            return 0;
        }
        QMatrix::from_rows(gens).expect("generators share ambient dim").rank()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_basis.len()
    }

    /// A cone is simplicial if its ray count equals its dimension modulo
    /// lineality.
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim() - self.lineality_dim()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_basis.is_empty()
    }
}

struct Ray {
    v: Vec<Int>,
    zero: Bits,
}

/// Extreme rays and lineality of `cone` via double description.
///
/// Output is deterministic: rays are reduced modulo the lineality space,
/// scaled primitive, and sorted lexicographically.
pub fn dd_rays(cone: &HCone) -> Result<VCone> {
    cone.validate()?;
    let m = cone.ambient_dim;

    // Factor out the equations: work in coordinates of the kernel subspace.
    let (rows, kernel): (Vec<Vec<Int>>, Option<QMatrix>) = if cone.equations.is_empty() {
        let rows = cone
            .inequalities
            .iter()
            .map(|v| to_primitive(v))
            .collect::<Vec<_>>();
        (rows, None)
    } else {
        let eq = QMatrix::from_rows(cone.equations.clone())?;
        let kb = eq.kernel_basis();
        if kb.is_empty() {
            return Ok(VCone {
                rays: Vec::new(),
                lineality_basis: Vec::new(),
                ambient_dim: m,
            });
        }
        let kmat = QMatrix::from_rows(kb)?;
        let rows = cone
            .inequalities
            .iter()
            .map(|a| {
                let transformed: QVector =
                    (0..kmat.nrows()).map(|i| dot(a, kmat.row(i))).collect();
                to_primitive(&transformed)
            })
            .collect::<Vec<_>>();
        (rows, Some(kmat))
    };
    let q = kernel.as_ref().map_or(m, QMatrix::nrows);

    let mut seen = std::collections::BTreeSet::new();
    let rows: Vec<Vec<Int>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()) && seen.insert(r.clone()))
        .collect();

    let (rays, lineality) = dd_core(&rows, q);

    // Map back into the original coordinates.
    let back = |v: &[Int]| -> QVector {
        match &kernel {
            None => int_vec_to_rational(v),
            Some(kmat) => {
                let mut out = linalg::zero_vec(m);
                for (c, row) in v.iter().zip(kmat.rows_iter()) {
                    if !c.is_zero() {
                        let cr = Rational::from_integer(c.clone());
                        for (o, x) in out.iter_mut().zip(row) {
                            *o += &cr * x;
                        }
                    }
                }
                out
            }
        }
    };

    let lineality_q: Vec<QVector> = lineality.iter().map(|l| back(l)).collect();
    let lin_canon = canonical_lineality(lineality_q, m)?;
    let rays_q: Vec<QVector> = rays.iter().map(|r| back(r)).collect();
    let mut rays_int: Vec<Vec<Int>> = rays_q
        .iter()
        .map(|r| reduce_mod_lineality(r, &lin_canon))
        .collect();
    rays_int.sort_by(|a, b| lex_cmp_int(a, b));
    Ok(VCone {
        rays: rays_int.iter().map(|r| int_vec_to_rational(r)).collect(),
        lineality_basis: lin_canon,
        ambient_dim: m,
    })
}

/// Primitive integer representative of `v` reduced modulo the lineality
/// space, by elimination against the RREF lineality basis.
pub fn reduce_mod_lineality(v: &[Rational], lineality: &[QVector]) -> Vec<Int> {
    let mut w = v.to_vec();
    for l in lineality {
        let pivot = l
            .iter()
            .position(|x| !x.is_zero())
            .expect("lineality basis vector is nonzero");
        if !w[pivot].is_zero() {
            let f = &w[pivot] / &l[pivot];
            for (wi, li) in w.iter_mut().zip(l) {
                *wi -= &f * li;
            }
        }
    }
    to_primitive(&w)
}

/// RREF with positive pivots: the canonical basis of a linear subspace.
fn canonical_lineality(vectors: Vec<QVector>, ambient: usize) -> Result<Vec<QVector>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let (r, _) = QMatrix::from_rows(vectors)?.rref();
    let _ = ambient;
    Ok((0..r.nrows())
        .map(|i| int_vec_to_rational(&to_primitive(r.row(i))))
        .collect())
}

/// The double description loop over a system of primitive integer
/// inequality rows in dimension `dim` (no equations).
fn dd_core(rows: &[Vec<Int>], dim: usize) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let nrows = rows.len();
    let mut lineality: Vec<Vec<Int>> = (0..dim)
        .map(|i| {
            let mut e = vec![Int::zero(); dim];
            e[i] = Int::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut remaining: Vec<usize> = (0..nrows).collect();
    let mut processed: Vec<usize> = Vec::new();

    while !remaining.is_empty() {
        // Insertion order heuristic: the row with the most zero evaluations
        // on the current rays, ties broken by fewer negatives, then by index.
        let evals: Vec<(usize, Vec<Int>)> = remaining
            .iter()
            .map(|&ri| (ri, rays.iter().map(|r| dot_int(&rows[ri], &r.v)).collect()))
            .collect();
        let pick = evals
            .iter()
            .enumerate()
            .min_by_key(|(_, (ri, ev))| {
                let zeros = ev.iter().filter(|x| x.is_zero()).count();
                let negs = ev.iter().filter(|x| x.is_negative()).count();
                (std::cmp::Reverse(zeros), negs, *ri)
            })
            .map(|(pos, _)| pos)
            .expect("remaining nonempty");
        let (row_idx, ray_evals) = evals[pick].clone();
        remaining.remove(pick);
        let h = &rows[row_idx];

        let lin_evals: Vec<Int> = lineality.iter().map(|l| dot_int(h, l)).collect();
        if let Some(pivot) = lin_evals.iter().position(|e| !e.is_zero()) {
            // The halfspace cuts the lineality space: one basis vector
            // becomes a ray, the rest are reduced to lie on the hyperplane.
            let mut l0 = lineality.remove(pivot);
            let mut e0 = lin_evals[pivot].clone();
            if e0.is_negative() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                e0 = -e0;
            }
            for (l, e) in lineality.iter_mut().zip(
                lin_evals
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pivot)
                    .map(|(_, e)| e),
            ) {
                if !e.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x = &*x * &e0 - e * y;
                    }
                    make_primitive(l);
                }
            }
            for (r, e) in rays.iter_mut().zip(&ray_evals) {
                if !e.is_zero() {
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x = &*x * &e0 - e * y;
                    }
                    make_primitive(&mut r.v);
                }
                r.zero.set(row_idx);
            }
            let mut zero = Bits::new(nrows);
            for &p in &processed {
                zero.set(p);
            }
            make_primitive(&mut l0);
            rays.push(Ray { v: l0, zero });
            processed.push(row_idx);
            continue;
        }

        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, e) in ray_evals.iter().enumerate() {
            if e.is_positive() {
                pos.push(i);
            } else if e.is_negative() {
                neg.push(i);
            } else {
                rays[i].zero.set(row_idx);
            }
        }
        if !neg.is_empty() {
            let pairs: Vec<(usize, usize)> = pos
                .iter()
                .flat_map(|&p| neg.iter().map(move |&n| (p, n)))
                .collect();
            let make_ray = |&(p, n): &(usize, usize)| -> Option<Ray> {
                let w = rays[p].zero.intersection(&rays[n].zero);
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && w.subset_of(&r.zero));
                if blocked {
                    return None;
                }
                let ep = &ray_evals[p];
                let en = &ray_evals[n];
                let mut v: Vec<Int> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(nv, pv)| ep * nv - en * pv)
                    .collect();
                make_primitive(&mut v);
                let mut zero = w;
                zero.set(row_idx);
                Some(Ray { v, zero })
            };
            let mut new_rays: Vec<Ray> = if pairs.len() > 256 {
                pairs.par_iter().filter_map(make_ray).collect()
            } else {
                pairs.iter().filter_map(make_ray).collect()
            };
            let mut kept: Vec<Ray> = Vec::with_capacity(pos.len() + rays.len() + new_rays.len());
            let mut dropped = 0;
            for (i, r) in rays.drain(..).enumerate() {
                if ray_evals[i].is_negative() {
                    dropped += 1;
                } else {
                    kept.push(r);
                }
            }
            debug_assert_eq!(dropped, neg.len());
            kept.append(&mut new_rays);
            rays = kept;
        }
        processed.push(row_idx);
    }

    (rays.into_iter().map(|r| r.v).collect(), lineality)
}

/// Facets of the cone spanned by the given V-description: the dual cone of
/// the ray/lineality span, computed with the same double description kernel.
pub fn v_to_h(vcone: &VCone) -> Result<HCone> {
    let dual = HCone {
        inequalities: vcone.rays.clone(),
        equations: vcone.lineality_basis.clone(),
        ambient_dim: vcone.ambient_dim,
    };
    let polar = dd_rays(&dual)?;
    Ok(HCone {
        inequalities: polar.rays,
        equations: polar.lineality_basis,
        ambient_dim: vcone.ambient_dim,
    })
}

/// Number of irredundant facet inequalities of an H-cone (after round trip
/// through the V-description).
pub fn facet_count(cone: &HCone) -> Result<usize> {
    Ok(v_to_h(&dd_rays(cone)?)?.inequalities.len())
}

/// Linear dimension of the cone `{x : Ax >= 0, Bx = 0}`.
pub fn cone_dim(cone: &HCone) -> Result<usize> {
    Ok(dd_rays(cone)?.dim())
}

/// A point with all inequalities strict and all equations exact, or `None`
/// if no such point exists. The sum of the extreme rays of the cone is such
/// a point exactly when the cone has no implicit equation among its
/// inequality rows, which is detected on the double description output.
pub fn strict_interior_point(cone: &HCone) -> Result<Option<QVector>> {
    let v = dd_rays(cone)?;
    let mut candidate = linalg::zero_vec(cone.ambient_dim);
    for r in &v.rays {
        for (c, x) in candidate.iter_mut().zip(r) {
            *c += x;
        }
    }
    for a in &cone.inequalities {
        if !dot(a, &candidate).is_positive() {
            return Ok(None);
        }
    }
    for b in &cone.equations {
        if !dot(b, &candidate).is_zero() {
            return Err(Error::Invariant(
                "ray sum violates a cone equation".into(),
            ));
        }
    }
    Ok(Some(candidate))
}
