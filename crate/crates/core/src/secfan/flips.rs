//! Circuits of a point configuration and bistellar flips of its
//! triangulations.
//!
//! A circuit is a minimal affinely dependent subset, split into the
//! positive and negative part of its unique dependence. A triangulation
//! supports a flip on a circuit when the simplices obtained by dropping one
//! positive element are all faces with a common link; the flip
//! retriangulates their joined star using the negative side.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exactgeom::{bits::Bits, to_primitive, QMatrix, Rational};
use crate::hypersimplex::PointConfiguration;
use crate::subdivide::Subdivision;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl Circuit {
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.pos.iter().chain(&self.neg).copied().collect();
        s.sort_unstable();
        s
    }
}

/// All circuits of the configuration: subsets of size up to d+2 whose
/// homogenized points have a one-dimensional kernel with full support. The
/// sign of the dependence is normalized so that the smallest support
/// element is positive.
pub fn circuits(config: &PointConfiguration) -> Result<Vec<Circuit>> {
    let n = config.n_points();
    let d = config.dim();
    let proj = config.proj();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate_subsets(n, d + 2, 0, &mut subset, &mut |s| {
        if s.len() < 3 {
            return;
        }
        // kernel of the transposed homogenized matrix
        let mut m = QMatrix::new(d + 1, s.len());
        for (c, &p) in s.iter().enumerate() {
            for r in 0..d {
                m.set(r, c, proj.get(p, r).clone());
            }
            m.set(d, c, Rational::from_integer(1.into()));
        }
        let kernel = m.kernel_basis();
        if kernel.len() != 1 {
            return;
        }
        let dep = to_primitive(&kernel[0]);
        if dep.iter().any(Zero::is_zero) {
            return;
        }
        let flip_sign = dep[0].is_negative();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (&p, c) in s.iter().zip(&dep) {
            if c.is_positive() != flip_sign {
                pos.push(p);
            } else {
                neg.push(p);
            }
        }
        out.push(Circuit { pos, neg });
    });
    Ok(out)
}

fn enumerate_subsets(
    n: usize,
    max_size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    visit(cur);
    if cur.len() == max_size {
        return;
    }
    for i in start..n {
        cur.push(i);
        enumerate_subsets(n, max_size, i + 1, cur, visit);
        cur.pop();
    }
}

/// All bistellar neighbors of the triangulation, one per flippable circuit.
pub fn flips(
    config: &PointConfiguration,
    t: &Subdivision,
    all_circuits: &[Circuit],
) -> Result<Vec<Subdivision>> {
    let n = config.n_points();
    let ncells = t.cells.len();
    let mut point_cells: Vec<Bits> = vec![Bits::new(ncells); n];
    for (ci, cell) in t.cells.iter().enumerate() {
        for &p in cell {
            point_cells[p].set(ci);
        }
    }
    let mut neighbors = Vec::new();
    for circuit in all_circuits {
        for (a, b) in [(&circuit.pos, &circuit.neg), (&circuit.neg, &circuit.pos)] {
            if let Some(t2) = try_flip(t, &point_cells, a, b, ncells) {
                neighbors.push(t2);
            }
        }
    }
    neighbors.sort();
    neighbors.dedup();
    Ok(neighbors)
}

fn try_flip(
    t: &Subdivision,
    point_cells: &[Bits],
    removed_side: &[usize],
    added_side: &[usize],
    ncells: usize,
) -> Option<Subdivision> {
    let support: Vec<usize> = {
        let mut s: Vec<usize> = removed_side.iter().chain(added_side).copied().collect();
        s.sort_unstable();
        s
    };
    let mut link: Option<Vec<Vec<usize>>> = None;
    let mut removed = Bits::new(ncells);
    for &z in removed_side {
        // cells containing the simplex support \ {z}
        let mut mask: Option<Bits> = None;
        for &p in &support {
            if p == z {
                continue;
            }
            mask = Some(match mask {
                None => point_cells[p].clone(),
                Some(m) => m.intersection(&point_cells[p]),
            });
        }
        let mask = mask.expect("circuit support has at least two elements");
        if mask.count() == 0 {
            return None;
        }
        // a cell containing S_z cannot contain z as well (it would contain
        // the whole dependent support), so the link is the cell minus the
        // support
        let mut this_link: Vec<Vec<usize>> = mask
            .iter_ones()
            .map(|ci| {
                t.cells[ci]
                    .iter()
                    .copied()
                    .filter(|p| !support.contains(p))
                    .collect()
            })
            .collect();
        this_link.sort();
        match &link {
            None => link = Some(this_link),
            Some(l) => {
                if *l != this_link {
                    return None;
                }
            }
        }
        for ci in mask.iter_ones() {
            removed.set(ci);
        }
    }
    let link = link?;
    let mut cells: Vec<Vec<usize>> = t
        .cells
        .iter()
        .enumerate()
        .filter(|(ci, _)| !removed.get(*ci))
        .map(|(_, c)| c.clone())
        .collect();
    for &w in added_side {
        for k in &link {
            let mut cell: Vec<usize> = support.iter().copied().filter(|&p| p != w).collect();
            cell.extend(k.iter().copied());
            cell.sort_unstable();
            cells.push(cell);
        }
    }
    Some(Subdivision::new(cells))
}
