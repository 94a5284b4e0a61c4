//! Envelopes of lifted configurations and their tight spans.
//!
//! The envelope of a configuration with heights is the polyhedron of affine
//! functions dominated by the heights, written over the homogenized points.
//! Its bounded faces form the tight span, the dual complex of the regular
//! subdivision: envelope vertices correspond to the maximal cells.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{dd_rays, dot, lex_cmp, HCone, QMatrix, QVector, Rational};
use crate::hypersimplex::PointConfiguration;
use crate::subdivide::HeightFunction;

/// The envelope polyhedron `{x : A'x >= -heights}` in dimension d+1, where
/// A' is the homogenization of the full-dimensional configuration
/// coordinates.
#[derive(Debug, Clone)]
pub struct Envelope {
    /// Vertices, sorted lexicographically.
    pub vertices: Vec<QVector>,
    /// Rays of the recession cone.
    pub recession_rays: Vec<QVector>,
    /// Per vertex: the labels of the points whose inequality is tight.
    pub tight: Vec<Vec<usize>>,
    /// Per recession ray: labels of the points with tight inequality.
    pub ray_tight: Vec<Vec<usize>>,
    n_points: usize,
}

impl Envelope {
    /// The dual cell of an envelope vertex: the configuration points whose
    /// lifted inequality is tight there.
    pub fn dual_cell(&self, vertex: usize) -> &[usize] {
        &self.tight[vertex]
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }
}

/// Compute the envelope of the configuration under the given heights by
/// enumerating the rays of its homogenization cone.
pub fn envelope(config: &PointConfiguration, heights: &HeightFunction) -> Result<Envelope> {
    let n = config.n_points();
    if heights.values.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} heights for {n} points",
            heights.values.len()
        )));
    }
    let d = config.dim();
    // rows (p, 1, omega_p) acting on (x, t); plus t >= 0
    let mut rows: Vec<QVector> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut r = config.proj().row(i).to_vec();
        r.push(Rational::one());
        r.push(heights.values[i].clone());
        rows.push(r);
    }
    let mut t_row = crate::exactgeom::zero_vec(d + 2);
    t_row[d + 1] = Rational::one();
    rows.push(t_row);
    let cone = HCone {
        inequalities: rows,
        equations: vec![],
        ambient_dim: d + 2,
    };
    let v = dd_rays(&cone)?;
    if !v.lineality_basis.is_empty() {
        return Err(Error::Invariant(
            "envelope of a spanning configuration has no lineality".into(),
        ));
    }
    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    for ray in &v.rays {
        let t = &ray[d + 1];
        if t.is_positive() {
            let x: QVector = ray[..d + 1].iter().map(|c| c / t).collect();
            vertices.push(x);
        } else {
            recession.push(ray[..d + 1].to_vec());
        }
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));
    recession.sort_by(|a, b| lex_cmp(a, b));
    let tight_rows = |x: &QVector, homogeneous: bool| -> Vec<usize> {
        (0..n)
            .filter(|&i| {
                let mut val = dot(config.proj().row(i), &x[..d]) + &x[d];
                if !homogeneous {
                    val += &heights.values[i];
                }
                val.is_zero()
            })
            .collect()
    };
    let tight = vertices.iter().map(|x| tight_rows(x, false)).collect();
    let ray_tight = recession.iter().map(|x| tight_rows(x, true)).collect();
    Ok(Envelope {
        vertices,
        recession_rays: recession,
        tight,
        ray_tight,
        n_points: n,
    })
}

/// A face of the tight span, recorded by the envelope vertices it contains.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TightSpanFace {
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// The polyhedral complex of the bounded faces of the envelope, computed up
/// to the requested dimension (3 by default covers all reporting needs; the
/// full lattice is available on demand via `max_dim = usize::MAX`).
#[derive(Debug, Clone)]
pub struct TightSpan {
    pub envelope: Envelope,
    pub faces: Vec<TightSpanFace>,
    pub max_dim_computed: usize,
}

impl TightSpan {
    pub fn n_vertices(&self) -> usize {
        self.envelope.vertices.len()
    }

    /// Bounded edges as vertex index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.faces
            .iter()
            .filter(|f| f.dim == 1)
            .map(|f| (f.vertices[0], f.vertices[1]))
            .collect()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.max_dim_computed.min(usize::MAX - 1) + 1];
        for f in &self.faces {
            if f.dim < counts.len() {
                counts[f.dim] += 1;
            }
        }
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        counts
    }

    /// True when the tight span is the face complex of a single simplex on
    /// its vertices.
    pub fn is_simplex(&self) -> bool {
        let k = self.n_vertices();
        if k == 0 {
            return false;
        }
        self.faces
            .iter()
            .any(|f| f.vertices.len() == k && f.dim == k - 1)
    }

    /// Graphviz rendering of the 1-skeleton; vertices annotated with their
    /// coordinates and dual cell sizes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tightspan {\n  node [shape=circle];\n");
        for (i, v) in self.envelope.vertices.iter().enumerate() {
            let coords: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!(
                "  v{i} [label=\"v{i}\\n({})\\ncell size {}\"];\n",
                coords.join(","),
                self.envelope.tight[i].len()
            ));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Compute the tight span: closure-join enumeration of the bounded faces of
/// the envelope from its vertex/facet incidences.
pub fn tight_span(
    config: &PointConfiguration,
    heights: &HeightFunction,
    max_dim: usize,
) -> Result<TightSpan> {
    let env = envelope(config, heights)?;
    let nv = env.vertices.len();
    let d = config.dim();

    // A face is identified by its set of tight rows; a set of envelope
    // vertices spans a bounded face exactly when no recession ray is tight
    // on all its rows.
    let closure = |verts: &[usize]| -> (Vec<usize>, Vec<usize>, bool) {
        let mut rows: Vec<usize> = env.tight[verts[0]].clone();
        for &v in &verts[1..] {
            rows = intersect(&rows, &env.tight[v]);
        }
        let members: Vec<usize> = (0..nv)
            .filter(|&v| is_subset(&rows, &env.tight[v]))
            .collect();
        let unbounded = env
            .ray_tight
            .iter()
            .any(|rt| is_subset(&rows, rt));
        (members, rows, unbounded)
    };

    let mut faces: Vec<TightSpanFace> = (0..nv)
        .map(|v| TightSpanFace {
            vertices: vec![v],
            dim: 0,
        })
        .collect();
    let mut known: std::collections::BTreeSet<Vec<usize>> =
        faces.iter().map(|f| f.vertices.clone()).collect();
    let mut frontier: Vec<Vec<usize>> = known.iter().cloned().collect();
    let mut current_dim = 0usize;
    while !frontier.is_empty() && current_dim < max_dim && current_dim < d + 1 {
        let mut next: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        for face in &frontier {
            for v in 0..nv {
                if face.contains(&v) {
                    continue;
                }
                let mut seed = face.clone();
                seed.push(v);
                seed.sort_unstable();
                let (members, _rows, unbounded) = closure(&seed);
                if unbounded || known.contains(&members) || members.len() == face.len() {
                    continue;
                }
                next.insert(members);
            }
        }
        let mut new_faces = Vec::new();
        for members in next {
            if known.contains(&members) {
                continue;
            }
            let dim = face_dim(&env, &members);
            known.insert(members.clone());
            new_faces.push(TightSpanFace {
                vertices: members,
                dim,
            });
        }
        frontier = new_faces
            .iter()
            .map(|f| f.vertices.clone())
            .collect();
        faces.extend(new_faces);
        current_dim += 1;
    }
    faces.sort();
    faces.dedup();
    Ok(TightSpan {
        envelope: env,
        faces,
        max_dim_computed: max_dim.min(d + 1),
    })
}

fn face_dim(env: &Envelope, members: &[usize]) -> usize {
    let rows: Vec<QVector> = members
        .iter()
        .map(|&v| env.vertices[v].clone())
        .collect();
    let m = QMatrix::from_rows(rows).expect("envelope vertices share dimension");
    crate::exactgeom::affine_dim(&m)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.contains(x))
}
