//! Permutation actions on hypersimplex vertex labels, heights and
//! pair-indexed vectors; canonical representatives and orbit sizes.
//!
//! Groups are handled by exhaustive element lists. At the sizes this crate
//! targets the full symmetric group has at most 40320 elements, so nothing
//! cleverer than brute force is warranted.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactgeom::{int_vec_to_rational, reduce_mod_lineality, QVector};
use crate::hypersimplex::{vertex_subsets, HypersimplexSpec};
use crate::subdivide::Subdivision;

/// A permutation of the ground set {0,..,n-1}, stored by images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::InvalidParameter(
                    "permutation images must be a bijection".into(),
                ));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    /// Parse disjoint cycles in 1-based notation, e.g. "(1 2)(3 4 5)".
    pub fn from_cycles(n: usize, text: &str) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        for cycle in text.split(')') {
            let cycle = cycle.trim().trim_start_matches('(').trim();
            if cycle.is_empty() {
                continue;
            }
            let elems: Vec<usize> = cycle
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad cycle element {t:?}")))
                })
                .collect::<Result<_>>()?;
            if elems.iter().any(|&e| e == 0 || e > n) {
                return Err(Error::InvalidParameter(format!(
                    "cycle element out of range 1..={n}"
                )));
            }
            for w in 0..elems.len() {
                image[elems[w] - 1] = elems[(w + 1) % elems.len()] - 1;
            }
        }
        Permutation::from_images(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn compose(&self, then: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&i| then.image[i]).collect(),
        }
    }
}

/// Which group acts on the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    /// The full symmetric group on the ground set.
    Sym,
    /// Sym(n) extended by the coordinatewise 0/1 swap; requires n = 2k.
    SymX2,
    /// Closure of explicit generators.
    Generators(Vec<Permutation>),
}

impl GroupSpec {
    /// Parse "trivial", "sym", "sym_x2", or generator cycles separated by
    /// semicolons.
    pub fn parse(n: usize, text: &str) -> Result<GroupSpec> {
        match text {
            "trivial" => Ok(GroupSpec::Trivial),
            "sym" => Ok(GroupSpec::Sym),
            "sym_x2" => Ok(GroupSpec::SymX2),
            other => {
                let gens = other
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| Permutation::from_cycles(n, t))
                    .collect::<Result<Vec<_>>>()?;
                if gens.is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "unrecognized group spec {other:?}"
                    )));
                }
                Ok(GroupSpec::Generators(gens))
            }
        }
    }
}

/// The group realized as permutations of the configuration labels.
#[derive(Debug, Clone)]
pub struct LabelGroup {
    /// Each element maps label l to perms[g][l]. The identity is first.
    perms: Vec<Vec<u32>>,
}

impl LabelGroup {
    pub fn elements(&self) -> &[Vec<u32>] {
        &self.perms
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn trivial(n_labels: usize) -> Self {
        LabelGroup {
            perms: vec![(0..n_labels as u32).collect()],
        }
    }

    /// Build the label action of the requested group on the vertices of the
    /// hypersimplex (labels in descending lexicographic order).
    pub fn for_hypersimplex(spec: HypersimplexSpec, group: &GroupSpec) -> Result<Self> {
        let n = spec.n;
        let subsets = vertex_subsets(spec);
        let label_of: BTreeMap<Vec<usize>, u32> = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        let ground: Vec<Permutation> = match group {
            GroupSpec::Trivial => vec![Permutation::identity(n)],
            GroupSpec::Sym | GroupSpec::SymX2 => all_permutations(n)?,
            GroupSpec::Generators(gens) => close_generators(n, gens)?,
        };
        let flips: Vec<bool> = match group {
            GroupSpec::SymX2 => {
                if 2 * spec.k != n {
                    return Err(Error::InvalidParameter(
                        "the 0/1 swap is an automorphism only for n = 2k".into(),
                    ));
                }
                vec![false, true]
            }
            _ => vec![false],
        };
        let mut perms = Vec::with_capacity(ground.len() * flips.len());
        for flip in &flips {
            for g in &ground {
                let mut lp = vec![0u32; subsets.len()];
                for (label, subset) in subsets.iter().enumerate() {
                    let mut img: Vec<usize> = subset.iter().map(|&i| g.apply(i)).collect();
                    if *flip {
                        let set: BTreeSet<usize> = img.into_iter().collect();
                        img = (0..n).filter(|i| !set.contains(i)).collect();
                    }
                    img.sort_unstable();
                    lp[label] = label_of[&img];
                }
                perms.push(lp);
            }
        }
        // identity first for readability of reports
        perms.sort();
        perms.dedup();
        Ok(LabelGroup { perms })
    }
}

fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n > 8 {
        return Err(Error::ResourceLimit(format!(
            "exhaustive Sym({n}) exceeds the supported range (n <= 8)"
        )));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute_rec(&mut cur, 0, &mut out);
    out.sort();
    Ok(out)
}

fn permute_rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
    if k == cur.len() {
        out.push(Permutation { image: cur.clone() });
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute_rec(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn close_generators(n: usize, gens: &[Permutation]) -> Result<Vec<Permutation>> {
    for g in gens {
        if g.degree() != n {
            return Err(Error::DimensionMismatch(
                "generator degree differs from ground set".into(),
            ));
        }
    }
    let mut elements: BTreeSet<Permutation> = BTreeSet::new();
    let mut queue = vec![Permutation::identity(n)];
    while let Some(p) = queue.pop() {
        if !elements.insert(p.clone()) {
            continue;
        }
        if elements.len() > 100_000 {
            return Err(Error::ResourceLimit(
                "generated group exceeds 100000 elements".into(),
            ));
        }
        for g in gens {
            queue.push(p.compose(g));
        }
    }
    Ok(elements.into_iter().collect())
}

/// Image of a sorted cell list under a label permutation, renormalized.
pub fn apply_to_cells(perm: &[u32], cells: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = cells
        .iter()
        .map(|cell| {
            let mut c: Vec<usize> = cell.iter().map(|&p| perm[p] as usize).collect();
            c.sort_unstable();
            c
        })
        .collect();
    out.sort();
    out
}

/// Heights transform by relabeling: (g . v)[g(l)] = v[l].
pub fn apply_to_vector(perm: &[u32], v: &[crate::exactgeom::Rational]) -> QVector {
    let mut out = crate::exactgeom::zero_vec(v.len());
    for (l, x) in v.iter().enumerate() {
        out[perm[l] as usize] = x.clone();
    }
    out
}

/// Lexicographically minimal image of the subdivision over the group.
/// Idempotent and constant on orbits.
pub fn canonical_subdivision(s: &Subdivision, group: &LabelGroup) -> Subdivision {
    Subdivision {
        cells: canonical_cells(&s.cells, group),
    }
}

pub fn canonical_cells(cells: &[Vec<usize>], group: &LabelGroup) -> Vec<Vec<usize>> {
    group
        .elements()
        .iter()
        .map(|perm| apply_to_cells(perm, cells))
        .min()
        .expect("group has at least the identity")
}

/// Lexicographically minimal primitive image of the vector over the group,
/// optionally reduced modulo a lineality space first (the basis must be in
/// reduced row echelon form, as produced by the double description kernel).
pub fn canonical_vector(
    v: &[crate::exactgeom::Rational],
    group: &LabelGroup,
    lineality: Option<&[QVector]>,
) -> QVector {
    group
        .elements()
        .iter()
        .map(|perm| {
            let img = apply_to_vector(perm, v);
            match lineality {
                Some(basis) => reduce_mod_lineality(&img, basis),
                None => crate::exactgeom::to_primitive(&img),
            }
        })
        .min_by(|a, b| crate::exactgeom::linalg::lex_cmp_int(a, b))
        .map(|ints| int_vec_to_rational(&ints))
        .expect("group has at least the identity")
}

/// Orbit size of a subdivision under the group.
pub fn orbit_size_subdivision(s: &Subdivision, group: &LabelGroup) -> u64 {
    let images: BTreeSet<Vec<Vec<usize>>> = group
        .elements()
        .iter()
        .map(|perm| apply_to_cells(perm, &s.cells))
        .collect();
    images.len() as u64
}

/// Orbit size of a vector modulo lineality and scaling.
pub fn orbit_size_vector(
    v: &[crate::exactgeom::Rational],
    group: &LabelGroup,
    lineality: Option<&[QVector]>,
) -> u64 {
    let images: BTreeSet<Vec<crate::exactgeom::Int>> = group
        .elements()
        .iter()
        .map(|perm| {
            let img = apply_to_vector(perm, v);
            match lineality {
                Some(basis) => reduce_mod_lineality(&img, basis),
                None => crate::exactgeom::to_primitive(&img),
            }
        })
        .collect();
    images.len() as u64
}
