//! Finite metric layer: dissimilarity maps, the metric cone, coherency
//! indices, split decomposition and ray type classification.
//!
//! Vectors on pairs use the same descending lexicographic order as the
//! vertices of the second hypersimplex: the pairs (1,2), (1,3), ..., (1,n),
//! (2,3), ... read row-wise from the upper triangle of a distance matrix.

pub mod parse;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{rat_int, zero_vec, QVector, Rational};
use crate::subdivide::HeightFunction;

pub use parse::parse_decimal_metric;

/// Index of the pair {i,j} (0-based, i < j) in the row-major upper
/// triangle order on n points.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    (0..i).map(|a| n - 1 - a).sum::<usize>() + (j - i - 1)
}

/// All pairs in index order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// A symmetric nonnegative map on pairs of n points with zero diagonal,
/// stored as a vector of length C(n,2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissimilarityMap {
    n: usize,
    values: QVector,
}

impl DissimilarityMap {
    pub fn new(n: usize, values: QVector) -> Result<Self> {
        if values.len() != n * (n - 1) / 2 {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} pairs",
                values.len(),
                n * (n - 1) / 2
            )));
        }
        if values.iter().any(Signed::is_negative) {
            return Err(Error::InvalidParameter(
                "dissimilarity values must be nonnegative".into(),
            ));
        }
        Ok(DissimilarityMap { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &QVector {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        debug_assert!(i != j);
        &self.values[pair_index(self.n, i.min(j), i.max(j))]
    }

    /// The height function -D: the single sign flip at the metric-to-height
    /// boundary.
    pub fn lifting(&self) -> HeightFunction {
        HeightFunction::from_values(self.values.iter().map(|x| -x.clone()).collect())
    }

    /// All ordered triangle inequalities D(i,k) <= D(i,j) + D(j,k) hold.
    pub fn is_pseudometric(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for k in (i + 1)..n {
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    if self.value(i, k) > &(self.value(i, j) + self.value(j, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A metric is a pseudometric with strictly positive off-diagonal
    /// values.
    pub fn is_metric(&self) -> bool {
        self.is_pseudometric() && self.values.iter().all(Signed::is_positive)
    }
}

/// The metric cone MC(n): triangle inequalities together with the
/// (implied) nonnegativity rows, in the pair coordinates.
pub fn metric_cone(n: usize) -> crate::exactgeom::HCone {
    let dim = n * (n - 1) / 2;
    let mut inequalities = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let mut row = zero_vec(dim);
                row[pair_index(n, i.min(j), i.max(j))] += rat_int(1);
                row[pair_index(n, j.min(k), j.max(k))] += rat_int(1);
                row[pair_index(n, i, k)] -= rat_int(1);
                inequalities.push(row);
            }
        }
    }
    for p in 0..dim {
        let mut row = zero_vec(dim);
        row[p] = Rational::one();
        inequalities.push(row);
    }
    crate::exactgeom::HCone {
        inequalities,
        equations: vec![],
        ambient_dim: dim,
    }
}

/// Exact coherency index of `omega` with respect to `omega_prime`: the
/// min-max-min of envelope-vertex ratios, which is the largest lambda such
/// that subtracting lambda copies of `omega_prime` stays coherent. Errors
/// when `omega_prime` induces the trivial subdivision (the index would be
/// unbounded).
pub fn coherency_index(
    config: &crate::hypersimplex::PointConfiguration,
    omega: &HeightFunction,
    omega_prime: &HeightFunction,
) -> Result<Rational> {
    let env_w = crate::subdivide::envelope(config, omega)?;
    let env_p = crate::subdivide::envelope(config, omega_prime)?;
    let d = config.dim();
    let n = config.n_points();
    let row_value = |x: &QVector, heights: &HeightFunction, p: usize| -> Rational {
        crate::exactgeom::dot(config.proj().row(p), &x[..d]) + &x[d] + &heights.values[p]
    };
    let mut outer: Option<Rational> = None;
    for x in &env_w.vertices {
        let mut middle: Option<Rational> = None;
        for xp in &env_p.vertices {
            let mut inner: Option<Rational> = None;
            for v in 0..n {
                let den = row_value(xp, omega_prime, v);
                if den.is_zero() {
                    continue; // v lies in the dual cell of xp
                }
                let num = row_value(x, omega, v);
                let ratio = num / den;
                inner = Some(match inner {
                    None => ratio,
                    Some(cur) => cur.min(ratio),
                });
            }
            let inner = inner.ok_or(Error::TrivialSubdivision)?;
            middle = Some(match middle {
                None => inner,
                Some(cur) => cur.max(inner),
            });
        }
        let middle = middle.ok_or_else(|| {
            Error::Invariant("envelope has no vertices".into())
        })?;
        outer = Some(match outer {
            None => middle,
            Some(cur) => cur.min(middle),
        });
    }
    outer.ok_or_else(|| Error::Invariant("envelope has no vertices".into()))
}

/// Classification of a pair-indexed vector, viewed as a pseudo-metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RayClass {
    /// A positive multiple of a split pseudo-metric modulo lineality; the
    /// part sizes are sorted.
    Split { small: usize, large: usize },
    /// A lineality element that is not a single split pseudo-metric.
    Lineality,
    /// Not a split; records the spread of the induced subdivision.
    NonSplit { spread: usize },
}

impl std::fmt::Display for RayClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RayClass::Split { small, large } => write!(f, "D_{{{small},{large}}}"),
            RayClass::Lineality => write!(f, "lineality"),
            RayClass::NonSplit { spread } => write!(f, "non-split (spread {spread})"),
        }
    }
}

/// All bipartitions of {0,..,n-1}, represented by the part containing 0.
pub fn all_splits(n: usize, min_part: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut part = vec![0usize];
        for i in 1..n {
            if mask >> (i - 1) & 1 == 1 {
                part.push(i);
            }
        }
        let a = part.len();
        let b = n - a;
        if a >= min_part && b >= min_part {
            out.push(part);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Classify a pair-indexed vector as a split type, a lineality element, or
/// a non-split ray with its spread.
pub fn classify_ray(n: usize, v: &QVector) -> Result<RayClass> {
    let config = crate::hypersimplex::vertices(crate::hypersimplex::HypersimplexSpec::new(
        2, n,
    )?);
    let lineality = crate::secfan::lineality_basis(&config);
    let reduced = crate::exactgeom::reduce_mod_lineality(v, &lineality);
    if reduced.iter().all(num_traits::Zero::is_zero) {
        // inside the lineality: a split only if it is a star metric itself
        for i in 0..n {
            let star = crate::hypersimplex::split_pseudometric(n, &[i])?;
            if same_positive_multiple(v, star.values()) {
                return Ok(RayClass::Split {
                    small: 1,
                    large: n - 1,
                });
            }
        }
        return Ok(RayClass::Lineality);
    }
    for part in all_splits(n, 2) {
        let split = crate::hypersimplex::split_pseudometric(n, &part)?;
        let split_reduced =
            crate::exactgeom::reduce_mod_lineality(split.values(), &lineality);
        if reduced == split_reduced {
            let a = part.len().min(n - part.len());
            return Ok(RayClass::Split {
                small: a,
                large: n - a,
            });
        }
    }
    let s = crate::subdivide::regular_subdivision(
        &config,
        &HeightFunction::from_values(v.iter().map(|x| -x.clone()).collect()),
    )?;
    Ok(RayClass::NonSplit { spread: s.spread() })
}

fn same_positive_multiple(a: &QVector, b: &QVector) -> bool {
    let pa = crate::exactgeom::to_primitive(a);
    let pb = crate::exactgeom::to_primitive(b);
    pa == pb && pa.iter().any(|x| !x.is_zero())
}

/// The secondary metric cone of a pair map: the pseudo-metrics whose
/// induced subdivision (via the negated lifting) coarsens or equals that of
/// `delta`. In height coordinates this is the negated secondary cone of
/// the subdivision, intersected with the metric cone; it always contains
/// `delta` itself.
pub fn secondary_metric_cone(n: usize, delta: &QVector) -> Result<crate::exactgeom::HCone> {
    let config =
        crate::hypersimplex::vertices(crate::hypersimplex::HypersimplexSpec::new(2, n)?);
    if delta.len() != config.n_points() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} pairs",
            delta.len(),
            config.n_points()
        )));
    }
    let heights = HeightFunction::from_values(delta.iter().map(|x| -x.clone()).collect());
    let s = crate::subdivide::regular_subdivision(&config, &heights)?;
    let seccone = crate::secfan::secondary_cone(&config, &s)?;
    let negated = crate::exactgeom::HCone {
        inequalities: seccone
            .hcone
            .inequalities
            .iter()
            .map(|row| row.iter().map(|x| -x.clone()).collect())
            .collect(),
        equations: seccone.hcone.equations.clone(),
        ambient_dim: seccone.hcone.ambient_dim,
    };
    negated.intersection(&metric_cone(n))
}

/// One orbit of metric cone or metric fan rays.
#[derive(Debug, Clone)]
pub struct RayOrbit {
    /// Canonical primitive representative.
    pub rep: QVector,
    pub orbit_size: u64,
    pub class: RayClass,
}

/// Extreme rays of the metric cone with their orbit decomposition. The
/// default resource limit admits n <= 6; pass `allow_large` beyond that.
pub fn metric_cone_rays(
    n: usize,
    allow_large: bool,
) -> Result<(crate::exactgeom::VCone, Vec<RayOrbit>)> {
    if n > 6 && !allow_large {
        return Err(Error::ResourceLimit(format!(
            "metric cone ray enumeration for n = {n} requires the large-instance flag"
        )));
    }
    let v = crate::exactgeom::dd_rays(&metric_cone(n))?;
    let spec = crate::hypersimplex::HypersimplexSpec::new(2, n)?;
    let group = crate::symmetry::LabelGroup::for_hypersimplex(
        spec,
        &crate::symmetry::GroupSpec::Sym,
    )?;
    let mut orbits: std::collections::BTreeMap<Vec<crate::exactgeom::Int>, u64> =
        std::collections::BTreeMap::new();
    for ray in &v.rays {
        let canon = crate::symmetry::canonical_vector(ray, &group, None);
        *orbits.entry(crate::exactgeom::to_primitive(&canon)).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    for (rep, count) in orbits {
        let rep_q = crate::exactgeom::int_vec_to_rational(&rep);
        let class = classify_ray(n, &rep_q)?;
        out.push(RayOrbit {
            rep: rep_q,
            orbit_size: count,
            class,
        });
    }
    Ok((v, out))
}

/// The canonical nonnegative representative of a secondary-fan ray as a
/// metric-fan ray: the unique extreme ray of its secondary metric cone that
/// is not a star pseudo-metric.
pub fn metric_fan_representative(n: usize, ray_heights: &QVector) -> Result<QVector> {
    let delta: QVector = ray_heights.iter().map(|x| -x.clone()).collect();
    let cone = secondary_metric_cone(n, &delta)?;
    let v = crate::exactgeom::dd_rays(&cone)?;
    if !v.is_pointed() {
        return Err(Error::Invariant("secondary metric cone is not pointed".into()));
    }
    let stars: Vec<Vec<crate::exactgeom::Int>> = (0..n)
        .map(|i| {
            Ok(crate::exactgeom::to_primitive(
                crate::hypersimplex::split_pseudometric(n, &[i])?.values(),
            ))
        })
        .collect::<Result<_>>()?;
    let mut non_star = Vec::new();
    for r in &v.rays {
        let p = crate::exactgeom::to_primitive(r);
        if !stars.contains(&p) {
            non_star.push(crate::exactgeom::int_vec_to_rational(&p));
        }
    }
    if non_star.len() != 1 {
        return Err(Error::Invariant(format!(
            "expected exactly one non-star extreme ray, found {}",
            non_star.len()
        )));
    }
    Ok(non_star.pop().unwrap())
}

/// Metric fan ray orbits: the metric-fan representatives of the coarsest
/// subdivision orbits plus the one orbit of star pseudo-metrics.
pub fn metric_fan_rays(
    n: usize,
    coarsest: &crate::secfan::CoarsestCatalog,
) -> Result<Vec<RayOrbit>> {
    let spec = crate::hypersimplex::HypersimplexSpec::new(2, n)?;
    let group = crate::symmetry::LabelGroup::for_hypersimplex(
        spec,
        &crate::symmetry::GroupSpec::Sym,
    )?;
    let mut out = Vec::new();
    for ray in &coarsest.ray_reps {
        let rep = metric_fan_representative(n, ray)?;
        let class = classify_ray(n, &rep)?;
        let canon = crate::symmetry::canonical_vector(&rep, &group, None);
        let orbit_size = crate::symmetry::orbit_size_vector(&rep, &group, None);
        out.push(RayOrbit {
            rep: canon,
            orbit_size,
            class,
        });
    }
    // the star orbit
    let star = crate::hypersimplex::split_pseudometric(n, &[0])?;
    out.push(RayOrbit {
        rep: crate::symmetry::canonical_vector(star.values(), &group, None),
        orbit_size: crate::symmetry::orbit_size_vector(star.values(), &group, None),
        class: RayClass::Split {
            small: 1,
            large: n - 1,
        },
    });
    out.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(out)
}

/// One split contribution of a decomposition.
#[derive(Debug, Clone)]
pub struct SplitContribution {
    /// The part of the bipartition containing the smallest element.
    pub part: Vec<usize>,
    pub coefficient: Rational,
    /// The chosen representative heights of the split.
    pub heights: HeightFunction,
}

/// Per-ray report attached to a decomposition.
#[derive(Debug, Clone)]
pub struct RayReport {
    /// Nonnegative metric-fan representative of the ray.
    pub metric_rep: QVector,
    pub class: RayClass,
    pub spread: usize,
    pub coherency: Rational,
}

/// The split decomposition of a lifting: coefficients on the split rays of
/// its secondary cone, and the split-prime remainder.
#[derive(Debug, Clone)]
pub struct SplitDecomposition {
    pub splits: Vec<SplitContribution>,
    pub prime_part: HeightFunction,
    pub rays: Vec<RayReport>,
}

impl SplitDecomposition {
    /// The sum of the split parts: omega - prime.
    pub fn split_sum(&self) -> HeightFunction {
        let mut acc = HeightFunction::zero(self.prime_part.len());
        for c in &self.splits {
            acc = acc
                .add(&c.heights.scaled(&c.coefficient))
                .expect("uniform lengths");
        }
        acc
    }
}

/// Split decomposition of the heights on a second hypersimplex: the
/// coefficient of each split ray of the secondary cone is its coherency
/// index, the remainder is the split-prime part. The decomposition is
/// verified coherent and the remainder verified split prime.
pub fn split_decompose(
    config: &crate::hypersimplex::PointConfiguration,
    omega: &HeightFunction,
) -> Result<SplitDecomposition> {
    let n = match config.hypersimplex_spec() {
        Some(spec) if spec.k == 2 => spec.n,
        _ => {
            return Err(Error::InvalidParameter(
                "split decomposition is wired for second hypersimplices".into(),
            ))
        }
    };
    let s = crate::subdivide::regular_subdivision(config, omega)?;
    if s.is_trivial() {
        // nothing to decompose: omega is a lineality element
        return Ok(SplitDecomposition {
            splits: Vec::new(),
            prime_part: omega.clone(),
            rays: Vec::new(),
        });
    }
    let rays = crate::secfan::secondary_rays(config, &s)?;
    let mut splits = Vec::new();
    let mut reports = Vec::new();
    for (ray, sub) in &rays {
        let class = classify_ray(n, &ray.iter().map(|x| -x.clone()).collect::<QVector>())?;
        let metric_rep = metric_fan_representative(n, ray)?;
        let rep_heights =
            HeightFunction::from_values(metric_rep.iter().map(|x| -x.clone()).collect());
        let coherency = coherency_index(config, omega, &rep_heights)?;
        if let RayClass::Split { .. } = class {
            let part = split_part_of(config, sub)?;
            let d = crate::hypersimplex::split_pseudometric(n, &part)?;
            let heights = d.lifting();
            let coefficient = coherency_index(config, omega, &heights)?;
            splits.push(SplitContribution {
                part,
                coefficient,
                heights,
            });
        }
        reports.push(RayReport {
            metric_rep,
            class,
            spread: sub.spread(),
            coherency,
        });
    }
    let mut prime = omega.clone();
    for c in &splits {
        prime = prime.sub(&c.heights.scaled(&c.coefficient))?;
    }
    verify_decomposition(config, omega, &splits, &prime)?;
    Ok(SplitDecomposition {
        splits,
        prime_part: prime,
        rays: reports,
    })
}

/// Recover the bipartition from a split subdivision of the second
/// hypersimplex: each part is the union of the pairs private to one cell.
fn split_part_of(
    config: &crate::hypersimplex::PointConfiguration,
    sub: &crate::subdivide::Subdivision,
) -> Result<Vec<usize>> {
    if sub.spread() != 2 {
        return Err(Error::InvalidParameter("not a split subdivision".into()));
    }
    let n = config
        .hypersimplex_spec()
        .expect("validated hypersimplex")
        .n;
    let prs = pairs(n);
    let mut part: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    for &label in &sub.cells[0] {
        if !sub.cells[1].contains(&label) {
            part.insert(prs[label].0);
            part.insert(prs[label].1);
        }
    }
    let part: Vec<usize> = part.into_iter().collect();
    let other: Vec<usize> = (0..n).filter(|i| !part.contains(i)).collect();
    Ok(if part.contains(&0) { part } else { other })
}

fn verify_decomposition(
    config: &crate::hypersimplex::PointConfiguration,
    omega: &HeightFunction,
    splits: &[SplitContribution],
    prime: &HeightFunction,
) -> Result<()> {
    // exact reconstruction
    let mut acc = prime.clone();
    for c in splits {
        acc = acc.add(&c.heights.scaled(&c.coefficient))?;
    }
    if &acc != omega {
        return Err(Error::Invariant(
            "split decomposition does not reconstruct the heights".into(),
        ));
    }
    // coherence: the subdivision of omega is the common refinement of all
    // parts
    let target = crate::subdivide::regular_subdivision(config, omega)?;
    let mut refined = crate::subdivide::regular_subdivision(config, prime)?;
    for c in splits {
        if c.coefficient.is_zero() {
            continue;
        }
        let part_sub = crate::subdivide::regular_subdivision(config, &c.heights)?;
        refined = crate::subdivide::common_refinement(config, &refined, &part_sub)?;
    }
    if refined != target {
        return Err(Error::Invariant(
            "split decomposition is not coherent".into(),
        ));
    }
    // the remainder is split prime
    let prime_sub = crate::subdivide::regular_subdivision(config, prime)?;
    if !prime_sub.is_trivial() {
        for (ray, _) in crate::secfan::secondary_rays(config, &prime_sub)? {
            let metric_side: QVector = ray.iter().map(|x| -x.clone()).collect();
            if let RayClass::Split { .. } =
                classify_ray(config.hypersimplex_spec().unwrap().n, &metric_side)?
            {
                return Err(Error::Invariant(
                    "split-prime remainder still has a split ray".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Render an exact rational as a fixed-point decimal string with the given
/// number of fractional digits (round half away from zero), for reports.
pub fn decimal_string(x: &Rational, digits: u32) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let abs = x.abs();
    let scale = crate::exactgeom::Int::from(10u32).pow(digits);
    let scaled = abs.numer() * &scale;
    let (q, r) = num_integer::Integer::div_rem(&scaled, abs.denom());
    let rounded = if &(r * 2u32) >= abs.denom() {
        q + 1u32
    } else {
        q
    };
    let s = rounded.to_string();
    let digits = digits as usize;
    if s.len() <= digits {
        format!("{sign}0.{:0>width$}", s, width = digits)
    } else {
        let (int_part, frac) = s.split_at(s.len() - digits);
        format!("{sign}{int_part}.{frac}")
    }
}

/// |a - b| <= tol, exactly.
pub fn within_abs(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    (a - b).abs() <= *tol
}

/// a within a factor of ten of b (both positive): order-of-magnitude
/// agreement for values printed at one significant figure.
pub fn same_order_of_magnitude(a: &Rational, b: &Rational) -> bool {
    if !a.is_positive() || !b.is_positive() {
        return false;
    }
    let ratio = a / b;
    ratio >= crate::exactgeom::rat(1, 10) && ratio <= rat_int(10)
}
