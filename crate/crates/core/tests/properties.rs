//! Randomized property suites: structural laws that must hold on every
//! instance, exercised over seeded random liftings of small hypersimplices.

use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use secfan_core::exactgeom::{
    dd_rays, dot, lattice_volume, rat_int, v_to_h, HCone, QVector, Rational,
};
use secfan_core::hypersimplex::{eulerian, vertices, HypersimplexSpec, PointConfiguration};
use secfan_core::metrics::{self, DissimilarityMap};
use secfan_core::secfan::{
    self, collect_coarsest_orbits, enumerate_regular_triangulations, gkz_vector,
    EnumerateOptions, EnumerationOutcome,
};
use secfan_core::subdivide::{self, HeightFunction};
use secfan_core::symmetry::{self, GroupSpec, LabelGroup};

fn delta(k: usize, n: usize) -> PointConfiguration {
    vertices(HypersimplexSpec::new(k, n).unwrap())
}

fn random_heights(rng: &mut StdRng, len: usize, bound: i64) -> HeightFunction {
    HeightFunction::from_values(
        (0..len)
            .map(|_| rat_int(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

/// A metric with values in [b, 2b] satisfies every triangle inequality.
fn random_metric(rng: &mut StdRng, n: usize, b: i64) -> DissimilarityMap {
    DissimilarityMap::new(
        n,
        (0..n * (n - 1) / 2)
            .map(|_| rat_int(rng.gen_range(b..=2 * b)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn dual_graphs_simple_connected_and_volumes_cover() {
    // Lemma-level facts on random liftings: the dual graph of a subdivision
    // is connected, and cell volumes sum to the Eulerian number.
    for (k, n, runs) in [(2usize, 5usize, 500usize), (2, 6, 500)] {
        let config = delta(k, n);
        let total = Rational::from_integer(eulerian(n - 1, k));
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(seed as u64);
            let h = random_heights(&mut rng, config.n_points(), 30);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            let mut vol = Rational::from_integer(0.into());
            for cell in &s.cells {
                vol += lattice_volume(config.proj(), cell).unwrap();
            }
            assert_eq!(vol, total, "volumes must cover, seed {seed}");
            if s.spread() > 1 {
                let g = subdivide::dual_graph(&config, &s).unwrap();
                assert!(g.is_connected(), "dual graph disconnected, seed {seed}");
            }
        });
    }
}

#[test]
fn lineality_invariance_of_subdivisions() {
    // c*omega + affine induces the same subdivision for c > 0.
    for (k, n, runs) in [(2usize, 5usize, 500usize), (2, 6, 500)] {
        let config = delta(k, n);
        let lineality = secfan::lineality_basis(&config);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(1000 + seed as u64);
            let h = random_heights(&mut rng, config.n_points(), 20);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            let c = rat_int(rng.gen_range(1..=5));
            let mut shifted = h.scaled(&c);
            for l in &lineality {
                let coeff = rat_int(rng.gen_range(-10..=10));
                shifted = shifted
                    .add(&HeightFunction::from_values(
                        l.iter().map(|x| x * &coeff).collect(),
                    ))
                    .unwrap();
            }
            let s2 = subdivide::regular_subdivision(&config, &shifted).unwrap();
            assert_eq!(s, s2, "lineality invariance failed, seed {seed}");
        });
    }
}

#[test]
fn envelope_subdivision_duality() {
    // The envelope has one vertex per maximal cell and the dual cells are
    // exactly the maximal cells.
    for (k, n, runs) in [(2usize, 5usize, 500usize), (2, 6, 500)] {
        let config = delta(k, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(2000 + seed as u64);
            let h = random_heights(&mut rng, config.n_points(), 25);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            let env = subdivide::envelope(&config, &h).unwrap();
            assert_eq!(env.vertices.len(), s.spread(), "seed {seed}");
            let mut dual: Vec<Vec<usize>> = (0..env.vertices.len())
                .map(|v| env.dual_cell(v).to_vec())
                .collect();
            dual.sort();
            assert_eq!(dual, s.cells, "dual cells mismatch, seed {seed}");
        });
    }
}

#[test]
fn coherency_self_index_is_one_randomized() {
    for (k, n, runs) in [(2usize, 5usize, 500usize), (2, 6, 500)] {
        let config = delta(k, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(3000 + seed as u64);
            let h = random_heights(&mut rng, config.n_points(), 25);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            if s.is_trivial() {
                return;
            }
            let alpha = metrics::coherency_index(&config, &h, &h).unwrap();
            assert_eq!(alpha, rat_int(1), "self index, seed {seed}");
        });
    }
}

#[test]
fn split_decomposition_reconstruction_randomized() {
    // prime + sum(lambda_S * omega_S) = omega exactly, and the remainder is
    // split prime (checked inside split_decompose).
    for (n, runs) in [(5usize, 50usize), (6, 50)] {
        let config = delta(2, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(4000 + seed as u64);
            let d = random_metric(&mut rng, n, 60);
            let omega = d.lifting();
            let dec = metrics::split_decompose(&config, &omega).unwrap();
            let back = dec.split_sum().add(&dec.prime_part).unwrap();
            assert_eq!(back, omega, "reconstruction, seed {seed}");
        });
    }
}

#[test]
fn coarsening_is_contraction_randomized() {
    // Every coarsest subdivision obtained from a secondary-cone ray is
    // coarsened by the original subdivision with a graph contraction.
    for (n, runs) in [(5usize, 80usize), (6, 40)] {
        let config = delta(2, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(5000 + seed as u64);
            let h = random_heights(&mut rng, config.n_points(), 25);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            if s.is_trivial() {
                return;
            }
            for (_, coarse) in secfan::secondary_rays(&config, &s).unwrap() {
                assert!(
                    subdivide::coarsening_is_contraction(&config, &s, &coarse).unwrap(),
                    "contraction failed, seed {seed}"
                );
            }
        });
    }
}

#[test]
fn dd_round_trip_on_random_cones() {
    // Rays satisfy all inequalities; re-deriving the H-description from the
    // V-description and running the double description again is stable.
    (0..200usize).into_par_iter().for_each(|seed| {
        let mut rng = StdRng::seed_from_u64(6000 + seed as u64);
        let dim = rng.gen_range(2..=5);
        let rows = rng.gen_range(1..=8);
        let cone = HCone {
            inequalities: (0..rows)
                .map(|_| (0..dim).map(|_| rat_int(rng.gen_range(-3..=3))).collect())
                .collect(),
            equations: vec![],
            ambient_dim: dim,
        };
        let v = dd_rays(&cone).unwrap();
        for r in &v.rays {
            for a in &cone.inequalities {
                assert!(!dot(a, r).is_negative(), "ray violates input, seed {seed}");
            }
        }
        let h2 = v_to_h(&v).unwrap();
        let v2 = dd_rays(&h2).unwrap();
        assert_eq!(v.rays, v2.rays, "round trip rays, seed {seed}");
        assert_eq!(
            v.lineality_basis, v2.lineality_basis,
            "round trip lineality, seed {seed}"
        );
    });
}

#[test]
fn dd_deterministic_across_thread_counts() {
    let cone = metrics::metric_cone(5);
    let reference = dd_rays(&cone).unwrap();
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let v = pool.install(|| dd_rays(&cone).unwrap());
        assert_eq!(v.rays, reference.rays);
        assert_eq!(v.lineality_basis, reference.lineality_basis);
    }
}

#[test]
fn enumeration_deterministic_across_thread_counts() {
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let mut catalogs = Vec::new();
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let catalog = pool.install(|| {
            match enumerate_regular_triangulations(&config, &group, &EnumerateOptions::default())
                .unwrap()
            {
                EnumerationOutcome::Complete(c) => c,
                EnumerationOutcome::Paused { .. } => panic!("no budget set"),
            }
        });
        catalogs.push(catalog);
    }
    assert_eq!(catalogs[0], catalogs[1]);
    assert_eq!(catalogs[0], catalogs[2]);
}

#[test]
fn volume_invariant_under_coordinate_permutations() {
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let all: Vec<usize> = (0..config.n_points()).collect();
    let reference = lattice_volume(config.proj(), &all).unwrap();
    let mut rng = StdRng::seed_from_u64(7000);
    for _ in 0..20 {
        let perm = &group.elements()[rng.gen_range(0..group.order())];
        // permuting labels of a subset of points leaves volumes unchanged
        let subset: Vec<usize> = all
            .iter()
            .map(|&p| perm[p] as usize)
            .collect();
        assert_eq!(lattice_volume(config.proj(), &subset).unwrap(), reference);
    }
    // a cell and its permuted image have the same volume
    let h = secfan_core::hypersimplex::lambda_lift(spec).unwrap();
    let s = subdivide::regular_subdivision(&config, &h).unwrap();
    for perm in group.elements().iter().step_by(17) {
        for cell in &s.cells {
            let image: Vec<usize> = cell.iter().map(|&p| perm[p] as usize).collect();
            assert_eq!(
                lattice_volume(config.proj(), cell).unwrap(),
                lattice_volume(config.proj(), &image).unwrap()
            );
        }
    }
}

#[test]
fn pluecker_criteria_agree_on_random_liftings() {
    // is_tropical_pluecker cross-checks the vertex-edge-graph criterion
    // against all-cells-matroidal internally and errors on disagreement.
    for (k, n, runs) in [(2usize, 5usize, 100usize), (3, 6, 100)] {
        let config = delta(k, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(8000 + seed as u64);
            // small ranges make matroidal subdivisions reachable
            let h = HeightFunction::from_values(
                (0..config.n_points())
                    .map(|_| rat_int(rng.gen_range(0..=2)))
                    .collect(),
            );
            let _ = subdivide::is_tropical_pluecker(&config, &h).unwrap();
        });
    }
}

#[test]
fn matroidal_subdivisions_respect_spread_bound() {
    let config = delta(2, 6);
    let bound = secfan_core::hypersimplex::speyer_bound(2, 6).unwrap();
    let mut found_nontrivial = 0usize;
    for seed in 0..400u64 {
        let mut rng = StdRng::seed_from_u64(9000 + seed);
        let h = HeightFunction::from_values(
            (0..config.n_points())
                .map(|_| rat_int(rng.gen_range(0..=1)))
                .collect(),
        );
        let s = subdivide::regular_subdivision(&config, &h).unwrap();
        if subdivide::all_cells_matroidal(&config, &s).unwrap() {
            assert!(
                secfan_core::exactgeom::Int::from(s.spread()) <= bound,
                "matroidal subdivision exceeds the spread bound"
            );
            if s.spread() > 1 {
                found_nontrivial += 1;
            }
        }
    }
    assert!(found_nontrivial > 0, "sampling never hit a matroidal subdivision");
}

#[test]
fn symmetry_action_commutes_with_subdivision() {
    for (k, n) in [(2usize, 5usize), (3, 6)] {
        let spec = HypersimplexSpec::new(k, n).unwrap();
        let config = delta(k, n);
        let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
        let mut rng = StdRng::seed_from_u64(10_000);
        for _ in 0..25 {
            let h = random_heights(&mut rng, config.n_points(), 10);
            let g = &group.elements()[rng.gen_range(0..group.order())];
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            let moved = HeightFunction::from_values(symmetry::apply_to_vector(g, &h.values));
            let s_moved = subdivide::regular_subdivision(&config, &moved).unwrap();
            assert_eq!(s_moved.cells, symmetry::apply_to_cells(g, &s.cells));
        }
    }
}

#[test]
fn canonicalization_constant_on_orbits_and_idempotent() {
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let lineality = secfan::lineality_basis(&config);
    let mut rng = StdRng::seed_from_u64(11_000);
    for _ in 0..500 {
        let v: QVector = (0..10).map(|_| rat_int(rng.gen_range(-6..=6))).collect();
        let g = &group.elements()[rng.gen_range(0..group.order())];
        let moved = symmetry::apply_to_vector(g, &v);
        for lin in [None, Some(&lineality[..])] {
            let c1 = symmetry::canonical_vector(&v, &group, lin);
            let c2 = symmetry::canonical_vector(&moved, &group, lin);
            assert_eq!(c1, c2, "canonical form differs across the orbit");
            assert_eq!(
                symmetry::canonical_vector(&c1, &group, lin),
                c1,
                "canonicalization is not idempotent"
            );
        }
    }
}

#[test]
fn regular_triangulation_round_trip() {
    // For every enumerated orbit representative: a strict interior point of
    // its secondary cone induces the triangulation back.
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let catalog = match enumerate_regular_triangulations(
        &config,
        &group,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    for cells in &catalog.reps {
        let t = subdivide::Subdivision {
            cells: cells.clone(),
        };
        let mut cone = secfan::secondary_cone(&config, &t).unwrap().hcone;
        cone.equations.clear();
        let w = secfan_core::exactgeom::strict_interior_point(&cone)
            .unwrap()
            .expect("regular triangulations have interior heights");
        let s = subdivide::regular_subdivision(&config, &HeightFunction::from_values(w)).unwrap();
        assert_eq!(&s.cells, cells);
    }
}

#[test]
fn gkz_vectors_separate_triangulations() {
    for (k, n) in [(2usize, 4usize), (2, 5)] {
        let config = delta(k, n);
        let trivial = LabelGroup::trivial(config.n_points());
        let catalog = match enumerate_regular_triangulations(
            &config,
            &trivial,
            &EnumerateOptions::default(),
        )
        .unwrap()
        {
            EnumerationOutcome::Complete(c) => c,
            EnumerationOutcome::Paused { .. } => panic!("no budget set"),
        };
        let mut seen = std::collections::BTreeSet::new();
        for cells in &catalog.reps {
            let t = subdivide::Subdivision {
                cells: cells.clone(),
            };
            let g = gkz_vector(&config, &t).unwrap();
            let key: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            assert!(seen.insert(key), "GKZ vectors must separate triangulations");
            // total weight = (d+1) * volume
            let sum: Rational = g.iter().cloned().sum();
            let expect = Rational::from_integer(eulerian(n - 1, k) * (config.dim() + 1));
            assert_eq!(sum, expect);
        }
    }
}

#[test]
fn complete_dual_graphs_are_coarsest_on_enumerated_rays() {
    // Sufficiency of the complete-dual-graph test against the definitive
    // secondary-cone test, over all coarsest orbit representatives.
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let catalog = match enumerate_regular_triangulations(
        &config,
        &group,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    let coarsest = collect_coarsest_orbits(&config, &catalog, &group).unwrap();
    for (ray, sub_cells) in coarsest.ray_reps.iter().zip(&coarsest.subdivision_reps) {
        let s = subdivide::Subdivision {
            cells: sub_cells.clone(),
        };
        let h = HeightFunction::from_values(ray.clone());
        assert!(secfan::is_coarsest(&config, &h).unwrap());
        if subdivide::is_coarsest_by_complete_dual(&config, &s).unwrap() {
            // complete dual graph implies coarsest: already verified above
            continue;
        }
    }
}

#[test]
fn split_prime_residuals_have_no_split_rays() {
    // verified inside split_decompose; exercised over random metrics
    for (n, runs) in [(5usize, 50usize), (6, 50)] {
        let config = delta(2, n);
        (0..runs).into_par_iter().for_each(|seed| {
            let mut rng = StdRng::seed_from_u64(12_000 + seed as u64);
            let d = random_metric(&mut rng, n, 40);
            let _ = metrics::split_decompose(&config, &d.lifting()).unwrap();
        });
    }
}

#[test]
fn coherency_scaling_law_randomized() {
    let config = delta(2, 5);
    let mut rng = StdRng::seed_from_u64(13_000);
    for _ in 0..40 {
        let omega = random_heights(&mut rng, 10, 30);
        let wp = random_heights(&mut rng, 10, 30);
        let s = subdivide::regular_subdivision(&config, &wp).unwrap();
        if s.is_trivial() {
            continue;
        }
        let c = rat_int(rng.gen_range(2..=7));
        let a1 = metrics::coherency_index(&config, &omega, &wp).unwrap();
        let ac = metrics::coherency_index(&config, &omega, &wp.scaled(&c)).unwrap();
        assert_eq!(a1, ac * c);
    }
}

#[test]
fn metric_fan_orbits_cover_metric_cone_orbits() {
    // Every extreme-ray orbit of the metric cone appears among the metric
    // fan ray orbits; for n <= 5 the two orbit sets coincide.
    for n in [4usize, 5] {
        let spec = HypersimplexSpec::new(2, n).unwrap();
        let config = delta(2, n);
        let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
        let catalog = match enumerate_regular_triangulations(
            &config,
            &group,
            &EnumerateOptions::default(),
        )
        .unwrap()
        {
            EnumerationOutcome::Complete(c) => c,
            EnumerationOutcome::Paused { .. } => panic!("no budget set"),
        };
        let coarsest = collect_coarsest_orbits(&config, &catalog, &group).unwrap();
        let mf = metrics::metric_fan_rays(n, &coarsest).unwrap();
        let (_, mc) = metrics::metric_cone_rays(n, false).unwrap();
        let mf_reps: std::collections::BTreeSet<Vec<String>> = mf
            .iter()
            .map(|o| o.rep.iter().map(|x| x.to_string()).collect())
            .collect();
        let mc_reps: std::collections::BTreeSet<Vec<String>> = mc
            .iter()
            .map(|o| o.rep.iter().map(|x| x.to_string()).collect())
            .collect();
        assert_eq!(mf_reps, mc_reps, "orbit sets must coincide for n = {n}");
    }
}

#[test]
fn orbit_sizes_sum_to_totals() {
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let catalog = match enumerate_regular_triangulations(
        &config,
        &group,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    let sum: u64 = catalog.orbit_sizes.iter().sum();
    assert_eq!(sum, catalog.total);
    // cross-check against the trivial-group enumeration
    let trivial = LabelGroup::trivial(config.n_points());
    let full = match enumerate_regular_triangulations(
        &config,
        &trivial,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    assert_eq!(full.total, catalog.total);
    assert_eq!(full.orbits() as u64, full.total);
}

#[test]
fn sampled_triangulations_agree_with_enumeration() {
    // Independent oracle for the flip-graph closure: random liftings hit
    // every triangulation orbit of the (2,5) hypersimplex, and never
    // anything outside the enumerated catalog.
    let spec = HypersimplexSpec::new(2, 5).unwrap();
    let config = delta(2, 5);
    let group = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym).unwrap();
    let catalog = match enumerate_regular_triangulations(
        &config,
        &group,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    let enumerated: std::collections::BTreeSet<Vec<Vec<usize>>> =
        catalog.reps.iter().cloned().collect();
    let sampled: std::collections::BTreeSet<Vec<Vec<usize>>> = (0..3000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut rng = StdRng::seed_from_u64(14_000 + seed);
            let h = random_heights(&mut rng, config.n_points(), 1000);
            let s = subdivide::regular_subdivision(&config, &h).unwrap();
            if s.is_triangulation(&config) {
                Some(symmetry::canonical_cells(&s.cells, &group))
            } else {
                None
            }
        })
        .collect();
    assert_eq!(
        sampled, enumerated,
        "random sampling and flip closure must find the same orbits"
    );
}

// ---------------------------------------------------------------------------
// Independent lower-hull oracle: enumerate affine interpolations through
// point subsets and keep the dominated ones. Self-contained elimination so
// that it shares no code path with the double description kernel.

mod oracle {
    use secfan_core::exactgeom::{QMatrix, QVector, Rational};
    use num_traits::Zero;

    /// Solve the square system by plain Gauss elimination; None if singular.
    fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = b.len();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[col][col];
                    for c in col..n {
                        let v = &a[r][c] - &f * &a[col][c];
                        a[r][c] = v;
                    }
                    let v = &b[r] - &f * &b[col];
                    b[r] = v;
                }
            }
        }
        Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
    }

    /// All maximal lower cells: for every (d+1)-subset spanning an affine
    /// interpolation of the heights, keep its tight set when no point lies
    /// below the interpolation.
    pub fn lower_cells(points: &QMatrix, heights: &QVector) -> Vec<Vec<usize>> {
        let n = points.nrows();
        let d = points.ncols();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut subset: Vec<usize> = Vec::new();
        fn rec(
            start: usize,
            subset: &mut Vec<usize>,
            n: usize,
            d: usize,
            points: &QMatrix,
            heights: &QVector,
            cells: &mut Vec<Vec<usize>>,
        ) {
            if subset.len() == d + 1 {
                // affine function x -> c.x + c0 through the subset
                let a: Vec<Vec<Rational>> = subset
                    .iter()
                    .map(|&p| {
                        let mut row = points.row(p).to_vec();
                        row.push(Rational::from_integer(1.into()));
                        row
                    })
                    .collect();
                let b: Vec<Rational> = subset.iter().map(|&p| heights[p].clone()).collect();
                if let Some(coeffs) = solve_square(a, b) {
                    let value = |p: usize| -> Rational {
                        let mut acc = coeffs[d].clone();
                        for (c, x) in coeffs[..d].iter().zip(points.row(p)) {
                            acc += c * x;
                        }
                        acc
                    };
                    let mut tight = Vec::new();
                    let mut dominated = true;
                    for p in 0..n {
                        let v = value(p);
                        match v.cmp(&heights[p]) {
                            std::cmp::Ordering::Greater => {
                                dominated = false;
                                break;
                            }
                            std::cmp::Ordering::Equal => tight.push(p),
                            std::cmp::Ordering::Less => {}
                        }
                    }
                    if dominated {
                        cells.push(tight);
                    }
                }
                return;
            }
            for p in start..n {
                subset.push(p);
                rec(p + 1, subset, n, d, points, heights, cells);
                subset.pop();
            }
        }
        rec(0, &mut subset, n, d, points, heights, &mut cells);
        cells.sort();
        cells.dedup();
        // keep the inclusion-maximal tight sets
        let maximal: Vec<Vec<usize>> = cells
            .iter()
            .filter(|c| {
                !cells
                    .iter()
                    .any(|other| other.len() > c.len() && c.iter().all(|p| other.contains(p)))
            })
            .cloned()
            .collect();
        maximal
    }
}

#[test]
fn lower_hull_oracle_agrees_with_subdivisions() {
    // named instances whose cells the oracle must produce
    let c24 = delta(2, 4);
    let lambda = secfan_core::hypersimplex::lambda_lift(HypersimplexSpec::new(2, 4).unwrap())
        .unwrap();
    let s = subdivide::regular_subdivision(&c24, &lambda).unwrap();
    let expect = oracle::lower_cells(c24.proj(), &lambda.values);
    assert_eq!(s.cells, expect);
    assert_eq!(s.spread(), 4, "lambda on (2,4) has four cells");
    assert!(expect.contains(&vec![2, 3, 4, 5]), "the zero-height cell");

    let d = secfan_core::hypersimplex::split_pseudometric(4, &[0, 1]).unwrap();
    let split = subdivide::regular_subdivision(&c24, &d.lifting()).unwrap();
    assert_eq!(split.cells, oracle::lower_cells(c24.proj(), &d.lifting().values));

    // Egyptian pyramid pair from the negated split
    assert_eq!(
        split.cells,
        vec![vec![0, 1, 2, 3, 4], vec![1, 2, 3, 4, 5]]
    );

    // randomized agreement on the (2,5) hypersimplex
    let c25 = delta(2, 5);
    (0..100u64).into_par_iter().for_each(|seed| {
        let mut rng = StdRng::seed_from_u64(20_000 + seed);
        let h = random_heights(&mut rng, 10, 8);
        let s = subdivide::regular_subdivision(&c25, &h).unwrap();
        let expect = oracle::lower_cells(c25.proj(), &h.values);
        assert_eq!(s.cells, expect, "oracle disagreement at seed {seed}");
    });
}

#[test]
fn facet_description_of_delta24_octahedron() {
    let config = delta(2, 4);
    let fd = secfan_core::exactgeom::facet_description(config.points()).unwrap();
    assert_eq!(fd.equations.len(), 1, "one affine-hull equation");
    let (e, e0) = &fd.equations[0];
    // the equation is a multiple of sum(x) = 2
    assert!(e.iter().all(|c| c == &e[0]));
    assert_eq!(&(-rat_int(2) * &e[0]), e0);
    assert_eq!(fd.inequalities.len(), 8, "octahedron has eight facets");
    for f in 0..8 {
        let tight = (0..6)
            .filter(|&p| num_traits::Zero::is_zero(&fd.eval_inequality(f, config.points().row(p))))
            .count();
        assert_eq!(tight, 3, "octahedron facets are triangles");
    }
    assert_eq!(
        secfan_core::exactgeom::polytope_edges(config.points())
            .unwrap()
            .len(),
        12
    );
}

#[test]
fn flip_search_discovers_nonregular_triangulations_of_delta26() {
    // (2,6) is the smallest second hypersimplex with nonregular
    // triangulations; a short breadth-first walk from the thrackle must hit
    // one, and it must fail the regularity test while still being a valid
    // triangulation.
    let config = delta(2, 6);
    let group = sym_group_26();
    let circuits = secfan::circuits(&config).unwrap();
    let seed = secfan::seed_triangulation(&config).unwrap();
    let mut visited = std::collections::BTreeSet::new();
    let mut frontier = vec![symmetry::canonical_cells(&seed.cells, &group)];
    visited.insert(frontier[0].clone());
    let mut nonregular: Option<Subdivision> = None;
    'search: while !frontier.is_empty() {
        let mut next = Vec::new();
        for cells in &frontier {
            let t = Subdivision {
                cells: cells.clone(),
            };
            for nb in secfan::flips(&config, &t, &circuits).unwrap() {
                let canon = symmetry::canonical_cells(&nb.cells, &group);
                if visited.insert(canon.clone()) {
                    if !secfan::is_regular_triangulation(&config, &nb).unwrap() {
                        nonregular = Some(nb);
                        break 'search;
                    }
                    next.push(canon);
                }
            }
        }
        frontier = next;
    }
    let t = nonregular.expect("the flip graph of (2,6) contains nonregular triangulations");
    assert!(t.is_triangulation(&config));
    subdivide::verify_subdivision(&config, &t).unwrap();
    let mut cone = secfan::secondary_cone(&config, &t).unwrap().hcone;
    cone.equations.clear();
    assert!(secfan_core::exactgeom::strict_interior_point(&cone)
        .unwrap()
        .is_none());
}

fn sym_group_26() -> LabelGroup {
    LabelGroup::for_hypersimplex(HypersimplexSpec::new(2, 6).unwrap(), &GroupSpec::Sym).unwrap()
}

use secfan_core::subdivide::Subdivision;

#[test]
fn delta24_triangulations_have_two_split_rays() {
    let config = delta(2, 4);
    let trivial = LabelGroup::trivial(6);
    let catalog = match enumerate_regular_triangulations(
        &config,
        &trivial,
        &EnumerateOptions::default(),
    )
    .unwrap()
    {
        EnumerationOutcome::Complete(c) => c,
        EnumerationOutcome::Paused { .. } => panic!("no budget set"),
    };
    assert_eq!(catalog.orbits(), 3);
    for cells in &catalog.reps {
        let t = Subdivision {
            cells: cells.clone(),
        };
        let rays = secfan::secondary_rays(&config, &t).unwrap();
        assert_eq!(rays.len(), 2, "each maximal cone has two rays");
        for (_, sub) in rays {
            assert_eq!(sub.spread(), 2, "every ray of the (2,4) fan is a split");
        }
    }
}

#[test]
fn multisplit_test_matches_tight_span_shape() {
    // a split is a 2-split
    let c25 = delta(2, 5);
    let d = secfan_core::hypersimplex::split_pseudometric(5, &[0, 1]).unwrap();
    let split_sub = subdivide::regular_subdivision(&c25, &d.lifting()).unwrap();
    assert_eq!(subdivide::is_multisplit(&c25, &split_sub).unwrap(), (true, 2));
    let ts = subdivide::tight_span(&c25, &d.lifting(), 3).unwrap();
    assert!(ts.is_simplex());

    // the kappa subdivision has a complete dual graph but is not a
    // multi-split, and its tight span has one vertex per cell without
    // being a simplex
    let spec36 = HypersimplexSpec::new(3, 6).unwrap();
    let c36 = delta(3, 6);
    let kappa = secfan_core::hypersimplex::kappa_lift(spec36).unwrap();
    let s = subdivide::regular_subdivision(&c36, &kappa).unwrap();
    let (is_multi, _) = subdivide::is_multisplit(&c36, &s).unwrap();
    let ts = subdivide::tight_span(&c36, &kappa, s.spread()).unwrap();
    assert_eq!(ts.n_vertices(), s.spread());
    assert_eq!(is_multi, ts.is_simplex());
    assert!(!is_multi);

    // the lambda subdivision of (2,6) is not a multi-split either
    let spec26 = HypersimplexSpec::new(2, 6).unwrap();
    let c26 = delta(2, 6);
    let lambda = secfan_core::hypersimplex::lambda_lift(spec26).unwrap();
    let sl = subdivide::regular_subdivision(&c26, &lambda).unwrap();
    let (is_multi_l, _) = subdivide::is_multisplit(&c26, &sl).unwrap();
    let tsl = subdivide::tight_span(&c26, &lambda, sl.spread()).unwrap();
    assert!(!is_multi_l);
    assert!(!tsl.is_simplex());
    assert_eq!(tsl.n_vertices(), sl.spread());
}

#[test]
fn secondary_metric_cone_preserves_dimension() {
    // dim MC(delta) = dim seccone(delta) on random pair maps
    let config = delta(2, 5);
    for seed in 0..20u64 {
        let mut rng = StdRng::seed_from_u64(30_000 + seed);
        let d = random_metric(&mut rng, 5, 40);
        let s = subdivide::regular_subdivision(&config, &d.lifting()).unwrap();
        let seccone_dim =
            secfan_core::exactgeom::cone_dim(&secfan::secondary_cone(&config, &s).unwrap().hcone)
                .unwrap();
        let mc_dim = secfan_core::exactgeom::cone_dim(
            &metrics::secondary_metric_cone(5, d.values()).unwrap(),
        )
        .unwrap();
        assert_eq!(seccone_dim, mc_dim, "dimension preserved, seed {seed}");
    }
}
