//! Delzant polytopes in dimension n ≤ 2 with exact rational facet data, and
//! the affine conformal weights u = ⟨a, z⟩ + a₀ (so f = −ln(u)/n).
//!
//! Polytope file format (rationals may be JSON numbers or strings like "1/2"):
//! ```json
//! { "n": 1,
//!   "facets": [{"u": [1], "lambda": 0}, {"u": [-1], "lambda": 1}],
//!   "vertices": [[0], [1]] }
//! ```
//! Weight file: `{ "a": [0.25], "a_const": 1.0 }`.

use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::rational::{parse_rational, rat_from_f64, rat_int, to_f64, Rat};

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("cannot parse: {0}")]
    Parse(String),
    #[error("only n = 1 and n = 2 polytopes are supported, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("polytope fails the Delzant conditions: {0}")]
    NotDelzant(String),
    #[error("weight u must be positive on the polytope (u({0:?}) = {1})")]
    WeightNotPositive(Vec<f64>, f64),
    #[error("point lies on or outside the boundary")]
    BoundaryPoint,
}

#[derive(Debug, Clone)]
pub struct Facet {
    /// Primitive integer inward normal.
    pub normal: Vec<i64>,
    pub lambda: Rat,
}

impl Facet {
    /// ℓ(z) = ⟨u, z⟩ + λ, exact.
    pub fn support(&self, z: &[Rat]) -> Rat {
        let mut s = self.lambda.clone();
        for (u, zi) in self.normal.iter().zip(z) {
            s += zi * rat_int(*u);
        }
        s
    }

    pub fn support_f64(&self, z: &[f64]) -> f64 {
        let mut s = to_f64(&self.lambda);
        for (u, zi) in self.normal.iter().zip(z) {
            s += *u as f64 * zi;
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.normal
            .iter()
            .map(|u| (*u as f64).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    pub n: usize,
    pub facets: Vec<Facet>,
    pub vertices: Vec<Vec<Rat>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RatSpec {
    Num(f64),
    Str(String),
}

impl RatSpec {
    fn to_rat(&self) -> Result<Rat, ToricError> {
        match self {
            RatSpec::Num(x) => Ok(rat_from_f64(*x)),
            RatSpec::Str(s) => parse_rational(s).map_err(ToricError::Parse),
        }
    }
}

#[derive(Debug, Deserialize)]
struct FacetFile {
    u: Vec<i64>,
    lambda: RatSpec,
}

#[derive(Debug, Deserialize)]
struct PolytopeFile {
    n: usize,
    facets: Vec<FacetFile>,
    vertices: Vec<Vec<RatSpec>>,
}

impl Polytope {
    pub fn from_json(text: &str) -> Result<Self, ToricError> {
        let file: PolytopeFile =
            serde_json::from_str(text).map_err(|e| ToricError::Parse(e.to_string()))?;
        let facets = file
            .facets
            .into_iter()
            .map(|f| {
                Ok(Facet {
                    normal: f.u,
                    lambda: f.lambda.to_rat()?,
                })
            })
            .collect::<Result<Vec<_>, ToricError>>()?;
        let vertices = file
            .vertices
            .into_iter()
            .map(|v| v.iter().map(|x| x.to_rat()).collect())
            .collect::<Result<Vec<_>, ToricError>>()?;
        let poly = Polytope {
            n: file.n,
            facets,
            vertices,
        };
        poly.validate()?;
        Ok(poly)
    }

    /// Delzant checks for n ≤ 2: non-negative support at the vertices, each
    /// vertex on exactly n facets with primitive normals forming a lattice
    /// basis, and each facet carrying exactly n vertices.
    pub fn validate(&self) -> Result<(), ToricError> {
        if self.n == 0 || self.n > 2 {
            return Err(ToricError::UnsupportedDimension(self.n));
        }
        if self.vertices.is_empty() || self.facets.len() < self.n + 1 {
            return Err(ToricError::NotDelzant(
                "need at least n+1 facets and one vertex".into(),
            ));
        }
        for f in &self.facets {
            if f.normal.len() != self.n {
                return Err(ToricError::NotDelzant("normal dimension mismatch".into()));
            }
            let g = f.normal.iter().fold(0i64, |acc, u| gcd(acc, u.abs()));
            if g != 1 {
                return Err(ToricError::NotDelzant(format!(
                    "normal {:?} is not primitive",
                    f.normal
                )));
            }
        }
        let mut facet_counts = vec![0usize; self.facets.len()];
        for v in &self.vertices {
            if v.len() != self.n {
                return Err(ToricError::NotDelzant("vertex dimension mismatch".into()));
            }
            let mut active: Vec<usize> = Vec::new();
            for (j, f) in self.facets.iter().enumerate() {
                let s = f.support(v);
                if s.is_negative() {
                    return Err(ToricError::NotDelzant(format!(
                        "vertex {v:?} violates facet {:?}",
                        f.normal
                    )));
                }
                if s.is_zero() {
                    active.push(j);
                    facet_counts[j] += 1;
                }
            }
            if active.len() != self.n {
                return Err(ToricError::NotDelzant(format!(
                    "vertex {v:?} lies on {} facets, expected {}",
                    active.len(),
                    self.n
                )));
            }
            let det = match self.n {
                1 => self.facets[active[0]].normal[0].abs(),
                2 => {
                    let a = &self.facets[active[0]].normal;
                    let b = &self.facets[active[1]].normal;
                    (a[0] * b[1] - a[1] * b[0]).abs()
                }
                _ => unreachable!(),
            };
            if det != 1 {
                return Err(ToricError::NotDelzant(format!(
                    "normals at vertex {v:?} have determinant {det}, not a lattice basis"
                )));
            }
        }
        for (j, count) in facet_counts.iter().enumerate() {
            if *count != self.n {
                return Err(ToricError::NotDelzant(format!(
                    "facet {j} carries {count} vertices, expected {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Vertices lying on facet j (exact incidence).
    pub fn facet_vertices(&self, j: usize) -> Vec<&Vec<Rat>> {
        self.vertices
            .iter()
            .filter(|v| self.facets[j].support(v).is_zero())
            .collect()
    }

    /// Strict interior test in floating point.
    pub fn is_interior(&self, z: &[f64]) -> bool {
        self.facets.iter().all(|f| f.support_f64(z) > 1e-12)
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.n];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += to_f64(vi);
            }
        }
        for ci in c.iter_mut() {
            *ci /= self.vertices.len() as f64;
        }
        c
    }

    /// Vertices sorted counterclockwise around the centroid (n = 2).
    pub fn vertices_ccw(&self) -> Vec<Vec<f64>> {
        let mut pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(to_f64).collect())
            .collect();
        if self.n == 2 {
            let c = self.centroid();
            pts.sort_by(|a, b| {
                let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
                let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
                ta.partial_cmp(&tb).unwrap()
            });
        } else {
            pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        }
        pts
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Affine Hamiltonian Killing potential u(z) = Σ a_i z_i + a₀ defining the
/// conformal weight f = −ln(u)/n.
#[derive(Debug, Clone, Deserialize)]
pub struct AffineWeight {
    pub a: Vec<f64>,
    pub a_const: f64,
}

impl AffineWeight {
    pub fn flat(n: usize) -> Self {
        AffineWeight {
            a: vec![0.0; n],
            a_const: 1.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ToricError> {
        serde_json::from_str(text).map_err(|e| ToricError::Parse(e.to_string()))
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.a_const + self.a.iter().zip(z).map(|(a, zi)| a * zi).sum::<f64>()
    }

    pub fn eval_rat(&self, z: &[Rat]) -> Rat {
        let mut s = rat_from_f64(self.a_const);
        for (a, zi) in self.a.iter().zip(z) {
            s += rat_from_f64(*a) * zi;
        }
        s
    }

    /// Positivity on the polytope, checked at the vertices (sufficient by
    /// affineness).
    pub fn check_positive(&self, poly: &Polytope) -> Result<(), ToricError> {
        if self.a.len() != poly.n {
            return Err(ToricError::Parse(format!(
                "weight has {} coefficients for an n = {} polytope",
                self.a.len(),
                poly.n
            )));
        }
        for v in &poly.vertices {
            let vf: Vec<f64> = v.iter().map(to_f64).collect();
            let u = self.eval(&vf);
            if u <= 0.0 {
                return Err(ToricError::WeightNotPositive(vf, u));
            }
        }
        Ok(())
    }
}

pub fn builtin_polytope(name: &str) -> Option<&'static str> {
    match name {
        "interval" => Some(include_str!("../../data/interval.json")),
        "square" => Some(include_str!("../../data/square.json")),
        "simplex" => Some(include_str!("../../data/simplex.json")),
        _ => None,
    }
}

pub fn builtin_polytope_names() -> &'static [&'static str] {
    &["interval", "square", "simplex"]
}
