//! Reciprocal diagrams and liftings of piecewise-linear cell complexes.
//!
//! A [`CellComplexRealization`] lists vertices with exact rational
//! coordinates, top-dimensional cells, the interior facets between pairs of
//! cells and the ridges where facets meet. Facets and ridges are given
//! explicitly and validated rather than derived from the geometry.
//!
//! The pipeline:
//!
//! 1. [`dual_graph`]: cells become vertices, facets become edges, and each
//!    facet gets an exact normal pointing from its first cell to its second.
//! 2. [`facet_gain_graph`]: around a simple ridge the three facet normals
//!    satisfy a unique linear dependency; ratios of its coefficients are
//!    multiplicative gains on the facet graph.
//! 3. [`reciprocal`]: a nonzero satisfied state on the facet graph scales the
//!    normals into vector gains on the dual graph; a satisfied state for
//!    those, under translation, places one point per cell.
//! 4. [`lifting_space`] and [`maxwell_lifting`]: affine functions per cell
//!    agreeing on shared facets.
//!
//! Normals are exact and unnormalised. Rescaling them only switches the
//! facet gain graph, so nothing downstream depends on the scale.

use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gain::GainGraph;
use crate::gf2::{BitVector, Gf2Basis};
use crate::graph::{subgraph_cycle_vectors, Multigraph};
use crate::group::{rational_from_json, GainGroup, NonzeroRationals, RationalVectors};
use crate::rational::{
    dot, format_rational, is_zero_vec, primitive_direction, rat, sign, vec_scale, vec_sub, QMatrix,
    Rational,
};
use crate::states::{propagate_state, ScalarOnLine, StateError, TranslationOnVectors};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDim(usize),
    #[error("vertex {vertex:?} has {got} coordinates, expected {expected}")]
    CoordinateLength {
        vertex: String,
        expected: usize,
        got: usize,
    },
    #[error("bad coordinate on vertex {vertex:?}: {reason}")]
    BadCoordinate { vertex: String, reason: String },
    #[error("{entity:?} refers to unknown vertex {vertex:?}")]
    UnknownVertex { entity: String, vertex: String },
    #[error("{entity:?} refers to unknown cell {cell:?}")]
    UnknownCell { entity: String, cell: String },
    #[error("ridge {ridge:?} refers to unknown facet {facet:?}")]
    UnknownFacet { ridge: String, facet: String },
    #[error("facet {0:?} must name exactly two distinct cells")]
    FacetCells(String),
    #[error("facet {facet:?} spans a flat of dimension {rank}, expected {expected}")]
    DegenerateFacet {
        facet: String,
        rank: usize,
        expected: usize,
    },
    #[error("vertex {vertex:?} of facet {facet:?} is not a vertex of cell {cell:?}")]
    FacetNotInCell {
        facet: String,
        cell: String,
        vertex: String,
    },
    #[error("cells of facet {0:?} do not lie strictly on opposite sides of it")]
    FacetSeparation(String),
    #[error("facet {facet:?} of ridge {ridge:?} joins cells outside the ridge")]
    RidgeFacetCells { ridge: String, facet: String },
    #[error("facets {a:?} and {b:?} at ridge {ridge:?} share a cell and are coplanar")]
    CoplanarFacets { ridge: String, a: String, b: String },
    #[error(
        "interior ridge {ridge:?} has {cells} cells; only simple ridges (3 cells) are supported"
    )]
    NonSimpleRidge { ridge: String, cells: usize },
    #[error("ridge {ridge:?} is degenerate: {reason}")]
    DegenerateRidge { ridge: String, reason: String },
    #[error("the dual graph is disconnected")]
    DisconnectedDualGraph,
    #[error("the facet graph is disconnected")]
    DisconnectedFacetGraph,
    #[error("facet gains are unbalanced: {0}")]
    UnbalancedFacetGains(String),
    #[error("generation gate failed (dual rank {dual_rank}/{dual_cycle_rank}, facet rank {facet_rank}/{facet_cycle_rank})")]
    GenerationGateFailed {
        dual_rank: usize,
        dual_cycle_rank: usize,
        facet_rank: usize,
        facet_cycle_rank: usize,
    },
    #[error("vector gains do not balance at ridge {ridge:?}; residual {residual:?}")]
    RidgeBalanceViolation {
        ridge: String,
        residual: Vec<String>,
    },
    #[error("vector gains on the dual graph are unbalanced: {0}")]
    UnbalancedDualGains(String),
    #[error("no sharp lifting: folds vanish identically on facets {0:?}")]
    NoSharpLifting(Vec<String>),
    #[error("no sharp lifting found with coefficients up to {0}")]
    SharpSearchExhausted(i64),
    #[error("seed must be nonzero")]
    ZeroSeed,
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("OBJ export needs a 2-dimensional complex, got dimension {0}")]
    ObjDimension(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub label: String,
    /// `(C_i, C_j)`; the facet normal points from `C_i` to `C_j`.
    pub cells: (usize, usize),
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ridge {
    pub label: String,
    pub facets: Vec<usize>,
    pub cells: Vec<usize>,
}

impl Ridge {
    /// Interior ridges are surrounded by a closed ring of cells and facets.
    pub fn is_interior(&self) -> bool {
        self.cells.len() >= 3 && self.facets.len() == self.cells.len()
    }
}

/// A validated PL-realized cell complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplexRealization {
    dim: usize,
    vertex_labels: Vec<String>,
    coords: Vec<Vec<Rational>>,
    cell_labels: Vec<String>,
    cells: Vec<Vec<usize>>,
    facets: Vec<Facet>,
    ridges: Vec<Ridge>,
    normals: Vec<Vec<Rational>>,
}

impl CellComplexRealization {
    /// Validates and builds a complex. Facets and ridges refer to cells and
    /// vertices by index.
    pub fn new(
        dim: usize,
        vertices: Vec<(String, Vec<Rational>)>,
        cells: Vec<(String, Vec<usize>)>,
        facets: Vec<Facet>,
        ridges: Vec<Ridge>,
    ) -> Result<Self, PlError> {
        if dim < 2 {
            return Err(PlError::InvalidDim(dim));
        }
        for (label, c) in &vertices {
            if c.len() != dim {
                return Err(PlError::CoordinateLength {
                    vertex: label.clone(),
                    expected: dim,
                    got: c.len(),
                });
            }
        }
        let (vertex_labels, coords): (Vec<_>, Vec<_>) = vertices.into_iter().unzip();
        let (cell_labels, cells): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
        let mut m = CellComplexRealization {
            dim,
            vertex_labels,
            coords,
            cell_labels,
            cells,
            facets,
            ridges,
            normals: Vec::new(),
        };
        m.normals = m
            .facets
            .iter()
            .map(|f| m.facet_normal(f))
            .collect::<Result<_, _>>()?;
        m.validate_ridges()?;
        Ok(m)
    }

    fn facet_normal(&self, f: &Facet) -> Result<Vec<Rational>, PlError> {
        let (ci, cj) = f.cells;
        if ci == cj {
            return Err(PlError::FacetCells(f.label.clone()));
        }
        for &c in &[ci, cj] {
            if let Some(&v) = f.vertices.iter().find(|v| !self.cells[c].contains(v)) {
                return Err(PlError::FacetNotInCell {
                    facet: f.label.clone(),
                    cell: self.cell_labels[c].clone(),
                    vertex: self.vertex_labels[v].clone(),
                });
            }
        }
        let base = &self.coords[f.vertices[0]];
        let dirs = QMatrix::from_rows(
            self.dim,
            f.vertices[1..]
                .iter()
                .map(|&v| vec_sub(&self.coords[v], base))
                .collect(),
        );
        let rank = dirs.rank();
        if rank != self.dim - 1 {
            return Err(PlError::DegenerateFacet {
                facet: f.label.clone(),
                rank,
                expected: self.dim - 1,
            });
        }
        let mut n = primitive_direction(&dirs.nullspace().remove(0));
        let side = |c: usize| dot(&n, &vec_sub(&self.centroid(c), base));
        let (si, sj) = (side(ci), side(cj));
        if sj.is_negative() {
            n = vec_scale(&rat(-1), &n);
        }
        if si.is_zero() || sj.is_zero() || sign(&si) == sign(&sj) {
            return Err(PlError::FacetSeparation(f.label.clone()));
        }
        Ok(n)
    }

    fn validate_ridges(&self) -> Result<(), PlError> {
        for r in &self.ridges {
            for &f in &r.facets {
                let (a, b) = self.facets[f].cells;
                if !r.cells.contains(&a) || !r.cells.contains(&b) {
                    return Err(PlError::RidgeFacetCells {
                        ridge: r.label.clone(),
                        facet: self.facets[f].label.clone(),
                    });
                }
            }
            // Two facets of one cell meeting at a ridge must not be coplanar.
            for (x, &fa) in r.facets.iter().enumerate() {
                for &fb in &r.facets[x + 1..] {
                    let (a, b) = (&self.facets[fa], &self.facets[fb]);
                    let shared = [a.cells.0, a.cells.1]
                        .iter()
                        .any(|c| *c == b.cells.0 || *c == b.cells.1);
                    let parallel = QMatrix::from_rows(
                        self.dim,
                        vec![self.normals[fa].clone(), self.normals[fb].clone()],
                    )
                    .rank()
                        < 2;
                    if shared && parallel {
                        return Err(PlError::CoplanarFacets {
                            ridge: r.label.clone(),
                            a: a.label.clone(),
                            b: b.label.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, v: usize) -> &[Rational] {
        &self.coords[v]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_label(&self, c: usize) -> &str {
        &self.cell_labels[c]
    }

    pub fn cell_vertices(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn ridges(&self) -> &[Ridge] {
        &self.ridges
    }

    pub fn interior_ridges(&self) -> impl Iterator<Item = (usize, &Ridge)> {
        self.ridges
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_interior())
    }

    /// Normal of facet `f`, pointing from its first cell to its second.
    pub fn normal(&self, f: usize) -> &[Rational] {
        &self.normals[f]
    }

    /// Average of a cell's vertices (an interior point for convex cells).
    pub fn centroid(&self, c: usize) -> Vec<Rational> {
        let k = Rational::from_integer(self.cells[c].len().into());
        let mut sum = vec![Rational::zero(); self.dim];
        for &v in &self.cells[c] {
            for (s, x) in sum.iter_mut().zip(&self.coords[v]) {
                *s += x;
            }
        }
        sum.into_iter().map(|s| s / &k).collect()
    }

    /// Basis of the direction space of facet `f`.
    pub fn facet_tangents(&self, f: usize) -> Vec<Vec<Rational>> {
        let vs = &self.facets[f].vertices;
        let base = &self.coords[vs[0]];
        let dirs = QMatrix::from_rows(
            self.dim,
            vs[1..]
                .iter()
                .map(|&v| vec_sub(&self.coords[v], base))
                .collect(),
        );
        let (r, pivots) = dirs.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    /// The complex with facet `f`'s normal multiplied by `scales[f]`.
    pub fn with_rescaled_normals(&self, scales: &[Rational]) -> Result<Self, PlError> {
        if scales.len() != self.facets.len() {
            return Err(PlError::LengthMismatch {
                expected: self.facets.len(),
                got: scales.len(),
            });
        }
        let mut out = self.clone();
        for (n, k) in out.normals.iter_mut().zip(scales) {
            if k.is_zero() {
                return Err(PlError::ZeroSeed);
            }
            *n = vec_scale(k, n);
        }
        Ok(out)
    }

    /// The same combinatorics with every vertex moved by `f`. Affine
    /// bijections keep a valid complex valid.
    pub fn mapped(&self, f: impl Fn(&[Rational]) -> Vec<Rational>) -> Result<Self, PlError> {
        let vertices = self
            .vertex_labels
            .iter()
            .cloned()
            .zip(self.coords.iter().map(|c| f(c)))
            .collect();
        let cells = self
            .cell_labels
            .iter()
            .cloned()
            .zip(self.cells.iter().cloned())
            .collect();
        CellComplexRealization::new(
            self.dim,
            vertices,
            cells,
            self.facets.clone(),
            self.ridges.clone(),
        )
    }

    /// The complex without cell `c` (facets and ridges touching it are
    /// dropped or shrunk accordingly).
    pub fn without_cell(&self, c: usize) -> Result<Self, PlError> {
        let remap = |x: usize| if x > c { x - 1 } else { x };
        let mut facet_map = HashMap::new();
        let mut facets = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.cells.0 != c && f.cells.1 != c {
                facet_map.insert(i, facets.len());
                facets.push(Facet {
                    label: f.label.clone(),
                    cells: (remap(f.cells.0), remap(f.cells.1)),
                    vertices: f.vertices.clone(),
                });
            }
        }
        let ridges = self
            .ridges
            .iter()
            .map(|r| Ridge {
                label: r.label.clone(),
                facets: r
                    .facets
                    .iter()
                    .filter_map(|f| facet_map.get(f).copied())
                    .collect(),
                cells: r
                    .cells
                    .iter()
                    .filter(|&&x| x != c)
                    .map(|&x| remap(x))
                    .collect(),
            })
            .filter(|r| !r.facets.is_empty())
            .collect();
        let cells = (0..self.cells.len())
            .filter(|&x| x != c)
            .map(|x| (self.cell_labels[x].clone(), self.cells[x].clone()))
            .collect();
        let vertices = self
            .vertex_labels
            .iter()
            .cloned()
            .zip(self.coords.iter().cloned())
            .collect();
        CellComplexRealization::new(self.dim, vertices, cells, facets, ridges)
    }

    pub fn to_json(&self) -> ComplexJson {
        let fmt = |c: &[Rational]| {
            c.iter()
                .map(|x| Value::String(format_rational(x)))
                .collect()
        };
        ComplexJson {
            dim: self.dim,
            vertices: self
                .vertex_labels
                .iter()
                .zip(&self.coords)
                .map(|(l, c)| (l.clone(), fmt(c)))
                .collect(),
            cells: self
                .cell_labels
                .iter()
                .zip(&self.cells)
                .map(|(l, vs)| {
                    (
                        l.clone(),
                        vs.iter().map(|&v| self.vertex_labels[v].clone()).collect(),
                    )
                })
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| {
                    (
                        f.label.clone(),
                        FacetJson {
                            cells: vec![
                                self.cell_labels[f.cells.0].clone(),
                                self.cell_labels[f.cells.1].clone(),
                            ],
                            vertices: f
                                .vertices
                                .iter()
                                .map(|&v| self.vertex_labels[v].clone())
                                .collect(),
                        },
                    )
                })
                .collect(),
            ridges: self
                .ridges
                .iter()
                .map(|r| {
                    (
                        r.label.clone(),
                        RidgeJson {
                            facets: r
                                .facets
                                .iter()
                                .map(|&f| self.facets[f].label.clone())
                                .collect(),
                            cells: r
                                .cells
                                .iter()
                                .map(|&c| self.cell_labels[c].clone())
                                .collect(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, PlError> {
        let vertex_index: HashMap<&str, usize> = json
            .vertices
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let cell_index: HashMap<&str, usize> = json
            .cells
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let facet_index: HashMap<&str, usize> = json
            .facets
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let vertex = |entity: &str, v: &str| {
            vertex_index
                .get(v)
                .copied()
                .ok_or_else(|| PlError::UnknownVertex {
                    entity: entity.to_string(),
                    vertex: v.to_string(),
                })
        };
        let cell = |entity: &str, c: &str| {
            cell_index
                .get(c)
                .copied()
                .ok_or_else(|| PlError::UnknownCell {
                    entity: entity.to_string(),
                    cell: c.to_string(),
                })
        };
        let vertices = json
            .vertices
            .iter()
            .map(|(label, coords)| {
                let c = coords
                    .iter()
                    .map(|x| {
                        rational_from_json(x).map_err(|reason| PlError::BadCoordinate {
                            vertex: label.clone(),
                            reason,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((label.clone(), c))
            })
            .collect::<Result<Vec<_>, PlError>>()?;
        let cells = json
            .cells
            .iter()
            .map(|(label, vs)| {
                let vs = vs
                    .iter()
                    .map(|v| vertex(label, v))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((label.clone(), vs))
            })
            .collect::<Result<Vec<_>, PlError>>()?;
        let facets = json
            .facets
            .iter()
            .map(|(label, f)| {
                if f.cells.len() != 2 {
                    return Err(PlError::FacetCells(label.clone()));
                }
                Ok(Facet {
                    label: label.clone(),
                    cells: (cell(label, &f.cells[0])?, cell(label, &f.cells[1])?),
                    vertices: f
                        .vertices
                        .iter()
                        .map(|v| vertex(label, v))
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, PlError>>()?;
        let ridges = json
            .ridges
            .iter()
            .map(|(label, r)| {
                Ok(Ridge {
                    label: label.clone(),
                    facets: r
                        .facets
                        .iter()
                        .map(|f| {
                            facet_index.get(f.as_str()).copied().ok_or_else(|| {
                                PlError::UnknownFacet {
                                    ridge: label.clone(),
                                    facet: f.clone(),
                                }
                            })
                        })
                        .collect::<Result<_, _>>()?,
                    cells: r
                        .cells
                        .iter()
                        .map(|c| cell(label, c))
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, PlError>>()?;
        CellComplexRealization::new(json.dim, vertices, cells, facets, ridges)
    }
}

/// Serialized complex; maps keep file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dim: usize,
    pub vertices: IndexMap<String, Vec<Value>>,
    pub cells: IndexMap<String, Vec<String>>,
    pub facets: IndexMap<String, FacetJson>,
    #[serde(default)]
    pub ridges: IndexMap<String, RidgeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetJson {
    pub cells: Vec<String>,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeJson {
    pub facets: Vec<String>,
    pub cells: Vec<String>,
}

/// The dual graph: one vertex per cell, one edge per facet, oriented like
/// the facet normal.
pub fn dual_graph(m: &CellComplexRealization) -> Multigraph {
    Multigraph::new(
        m.cell_labels.iter().cloned(),
        m.facets
            .iter()
            .map(|f| {
                (
                    f.label.clone(),
                    m.cell_labels[f.cells.0].clone(),
                    m.cell_labels[f.cells.1].clone(),
                )
            })
            .collect::<Vec<_>>(),
    )
    .expect("labels come from a validated complex")
}

/// A simple interior ridge with its cells in cyclic order `C1, C2, C3` and
/// the facets `F12, F23, F31`, each with the sign that orients its stored
/// normal from the earlier to the later cell of the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RidgeCycle {
    pub ridge: usize,
    pub cells: [usize; 3],
    pub facets: [usize; 3],
    pub signs: [i8; 3],
}

fn ridge_cycle(m: &CellComplexRealization, ridge: usize) -> Result<RidgeCycle, PlError> {
    let r = &m.ridges[ridge];
    if r.cells.len() != 3 {
        return Err(PlError::NonSimpleRidge {
            ridge: r.label.clone(),
            cells: r.cells.len(),
        });
    }
    let cells = [r.cells[0], r.cells[1], r.cells[2]];
    let mut facets = [0; 3];
    let mut signs = [0; 3];
    for k in 0..3 {
        let (a, b) = (cells[k], cells[(k + 1) % 3]);
        let found = r.facets.iter().find_map(|&f| match m.facets[f].cells {
            (x, y) if (x, y) == (a, b) => Some((f, 1)),
            (x, y) if (x, y) == (b, a) => Some((f, -1)),
            _ => None,
        });
        let Some((f, s)) = found else {
            return Err(PlError::DegenerateRidge {
                ridge: r.label.clone(),
                reason: format!(
                    "no facet between {:?} and {:?}",
                    m.cell_labels[a], m.cell_labels[b]
                ),
            });
        };
        facets[k] = f;
        signs[k] = s;
    }
    Ok(RidgeCycle {
        ridge,
        cells,
        facets,
        signs,
    })
}

/// All interior ridges as cycles; errors on non-simple interior ridges.
pub fn ridge_cycles(m: &CellComplexRealization) -> Result<Vec<RidgeCycle>, PlError> {
    m.interior_ridges()
        .map(|(i, _)| ridge_cycle(m, i))
        .collect()
}

/// The facet gain graph together with bookkeeping for each of its edges.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetGainGraph {
    pub gains: GainGraph<NonzeroRationals>,
    /// For each edge: the ridge it comes from and the cell shared by its
    /// two facets.
    pub edge_ridge: Vec<usize>,
    pub edge_cell: Vec<usize>,
    /// Coefficients `(α12, α23, α31)` of the dependency at each ridge cycle.
    pub cycles: Vec<(RidgeCycle, [Rational; 3])>,
}

/// Coefficients `α` with `Σ α_k n_k = 0`, where `n_k` are the cyclically
/// oriented normals around the ridge.
fn ridge_dependency(m: &CellComplexRealization, rc: &RidgeCycle) -> Result<[Rational; 3], PlError> {
    let label = &m.ridges[rc.ridge].label;
    let oriented: Vec<Vec<Rational>> = (0..3)
        .map(|k| vec_scale(&rat(rc.signs[k] as i64), m.normal(rc.facets[k])))
        .collect();
    // Columns are the three normals.
    let a = QMatrix::from_rows(
        3,
        (0..m.dim)
            .map(|i| (0..3).map(|k| oriented[k][i].clone()).collect())
            .collect(),
    );
    let kernel = a.nullspace();
    if kernel.len() != 1 {
        return Err(PlError::DegenerateRidge {
            ridge: label.clone(),
            reason: format!("normal dependency has dimension {}", kernel.len()),
        });
    }
    let alpha = primitive_direction(&kernel[0]);
    if alpha.iter().any(Zero::is_zero) {
        return Err(PlError::DegenerateRidge {
            ridge: label.clone(),
            reason: "a dependency coefficient vanishes".to_string(),
        });
    }
    Ok([alpha[0].clone(), alpha[1].clone(), alpha[2].clone()])
}

/// Builds the multiplicative facet gain graph: for each simple ridge with
/// dependency `α12·n12 + α23·n23 + α31·n31 = 0` the edges
/// `F12→F23`, `F23→F31`, `F31→F12` get gains `α23/α12`, `α31/α23`, `α12/α31`.
pub fn facet_gain_graph(m: &CellComplexRealization) -> Result<FacetGainGraph, PlError> {
    let mut edges = Vec::new();
    let mut gains = Vec::new();
    let mut edge_ridge = Vec::new();
    let mut edge_cell = Vec::new();
    let mut cycles = Vec::new();
    for rc in ridge_cycles(m)? {
        let alpha = ridge_dependency(m, &rc)?;
        for k in 0..3 {
            let next = (k + 1) % 3;
            let (fa, fb) = (rc.facets[k], rc.facets[next]);
            edges.push((
                format!("{}:{}", m.ridges[rc.ridge].label, k),
                m.facets[fa].label.clone(),
                m.facets[fb].label.clone(),
            ));
            gains.push(&alpha[next] / &alpha[k]);
            edge_ridge.push(rc.ridge);
            edge_cell.push(rc.cells[next]);
        }
        cycles.push((rc, alpha));
    }
    let graph = Multigraph::new(m.facets.iter().map(|f| f.label.clone()), edges)
        .expect("labels come from a validated complex");
    if !graph.is_connected() {
        return Err(PlError::DisconnectedFacetGraph);
    }
    let gains = GainGraph::new(graph, NonzeroRationals, gains).expect("gains are nonzero");
    Ok(FacetGainGraph {
        gains,
        edge_ridge,
        edge_cell,
        cycles,
    })
}

/// Ranks behind the generation gate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    /// Rank of the ridge circles in the binary cycle space of the dual graph.
    pub dual_rank: usize,
    pub dual_cycle_rank: usize,
    /// Ridge circles span the binary cycle space of the dual graph.
    pub dual_passes: bool,
    /// Rank of ridge triangles plus per-cell cycles in the facet graph.
    pub facet_rank: usize,
    pub facet_cycle_rank: usize,
    pub facet_passes: bool,
}

impl GenerationReport {
    pub fn passes(&self) -> bool {
        self.dual_passes && self.facet_passes
    }
}

/// Checks over GF(2) that (a) ridge circles span the cycle space of the
/// dual graph and (b) ridge triangles together with cycles inside single
/// cells span the cycle space of the facet graph.
pub fn generation_gate(m: &CellComplexRealization) -> Result<GenerationReport, PlError> {
    let gamma = dual_graph(m);
    if !gamma.is_connected() {
        return Err(PlError::DisconnectedDualGraph);
    }
    let cycles = ridge_cycles(m)?;
    let mut dual = Gf2Basis::new();
    for rc in &cycles {
        let mut v = BitVector::zeros(gamma.edge_count());
        for &f in &rc.facets {
            v.flip(f);
        }
        dual.insert(&v);
    }

    let facet_count = m.facets.len();
    let phi_edges = 3 * cycles.len();
    let mut phi_components = crate::graph::UnionFind::new(facet_count);
    let mut components = facet_count;
    let mut facet = Gf2Basis::new();
    let mut per_cell: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); m.cell_count()];
    for (i, rc) in cycles.iter().enumerate() {
        let mut tri = BitVector::zeros(phi_edges);
        for k in 0..3 {
            let e = 3 * i + k;
            let (fa, fb) = (rc.facets[k], rc.facets[(k + 1) % 3]);
            tri.flip(e);
            per_cell[rc.cells[(k + 1) % 3]].push((e, fa, fb));
            if phi_components.union(fa, fb) {
                components -= 1;
            }
        }
        facet.insert(&tri);
    }
    for edges in &per_cell {
        for v in subgraph_cycle_vectors(facet_count, phi_edges, edges) {
            facet.insert(&v);
        }
    }
    let facet_cycle_rank = phi_edges + components - facet_count;
    let dual_cycle_rank = gamma.cycle_rank();
    Ok(GenerationReport {
        dual_rank: dual.rank(),
        dual_cycle_rank,
        dual_passes: dual.rank() == dual_cycle_rank,
        facet_rank: facet.rank(),
        facet_cycle_rank,
        facet_passes: facet.rank() == facet_cycle_rank,
    })
}

/// A reciprocal diagram: one point per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Reciprocal {
    pub points: Vec<Vec<Rational>>,
    /// The satisfied state on facets used to scale the normals.
    pub facet_scalars: Vec<Rational>,
}

impl Reciprocal {
    /// `r(C_j) - r(C_i)` for facet `f = (C_i, C_j)`.
    pub fn edge_vector(&self, m: &CellComplexRealization, f: usize) -> Vec<Rational> {
        let (i, j) = m.facets[f].cells;
        vec_sub(&self.points[j], &self.points[i])
    }

    /// No edge of the reciprocal collapses to a point.
    pub fn is_non_degenerate(&self, m: &CellComplexRealization) -> bool {
        (0..m.facets.len()).all(|f| !is_zero_vec(&self.edge_vector(m, f)))
    }

    /// Every edge vector is orthogonal to its facet (exact).
    pub fn is_orthogonal(&self, m: &CellComplexRealization) -> bool {
        (0..m.facets.len()).all(|f| {
            let e = self.edge_vector(m, f);
            m.facet_tangents(f).iter().all(|t| dot(&e, t).is_zero())
        })
    }

    /// Concatenated coordinates, in the unknown order of [`rec_system`].
    pub fn flatten(&self) -> Vec<Rational> {
        self.points.iter().flatten().cloned().collect()
    }

    pub fn to_json(&self, m: &CellComplexRealization) -> Value {
        json!({
            "points": m.cell_labels.iter().zip(&self.points)
                .map(|(l, p)| (l.clone(), Value::from(p.iter().map(format_rational).collect::<Vec<_>>())))
                .collect::<serde_json::Map<_, _>>(),
            "facet_scalars": m.facets.iter().zip(&self.facet_scalars)
                .map(|(f, s)| (f.label.clone(), Value::String(format_rational(s))))
                .collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Options for [`reciprocal_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalOptions {
    pub seed: Rational,
    /// Root facet of the state propagation.
    pub root_facet: usize,
    /// Proceed even when the generation gate fails.
    pub override_gate: bool,
}

impl Default for ReciprocalOptions {
    fn default() -> Self {
        ReciprocalOptions {
            seed: Rational::one(),
            root_facet: 0,
            override_gate: false,
        }
    }
}

pub fn reciprocal(m: &CellComplexRealization, seed: Rational) -> Result<Reciprocal, PlError> {
    reciprocal_with(
        m,
        &ReciprocalOptions {
            seed,
            ..ReciprocalOptions::default()
        },
    )
}

/// Computes a reciprocal by propagating a scalar state on the facet graph
/// and then a translation state on the dual graph.
pub fn reciprocal_with(
    m: &CellComplexRealization,
    opts: &ReciprocalOptions,
) -> Result<Reciprocal, PlError> {
    if opts.seed.is_zero() {
        return Err(PlError::ZeroSeed);
    }
    let gate = generation_gate(m)?;
    if !gate.passes() && !opts.override_gate {
        return Err(PlError::GenerationGateFailed {
            dual_rank: gate.dual_rank,
            dual_cycle_rank: gate.dual_cycle_rank,
            facet_rank: gate.facet_rank,
            facet_cycle_rank: gate.facet_cycle_rank,
        });
    }
    let phi = facet_gain_graph(m)?;
    let s = propagate_state(
        &phi.gains,
        &ScalarOnLine,
        opts.root_facet,
        opts.seed.clone(),
    )
    .map_err(|e| match e {
        StateError::UnbalancedInput { start, gain, .. } => PlError::UnbalancedFacetGains(format!(
            "closed walk from facet {start:?} has gain {gain}"
        )),
        other => PlError::UnbalancedFacetGains(other.to_string()),
    })?;

    let h: Vec<Vec<Rational>> = (0..m.facets.len())
        .map(|f| vec_scale(&s[f], m.normal(f)))
        .collect();
    for (rc, _) in &phi.cycles {
        let mut residual = vec![Rational::zero(); m.dim];
        for k in 0..3 {
            let term = vec_scale(&rat(rc.signs[k] as i64), &h[rc.facets[k]]);
            residual = residual.iter().zip(&term).map(|(a, b)| a + b).collect();
        }
        if !is_zero_vec(&residual) {
            return Err(PlError::RidgeBalanceViolation {
                ridge: m.ridges[rc.ridge].label.clone(),
                residual: residual.iter().map(format_rational).collect(),
            });
        }
    }
    let group = RationalVectors { dim: m.dim };
    let gamma =
        GainGraph::new(dual_graph(m), group, h).map_err(|_| PlError::DisconnectedDualGraph)?;
    let points = propagate_state(
        &gamma,
        &TranslationOnVectors { dim: m.dim },
        0,
        group.identity(),
    )
    .map_err(|e| match e {
        StateError::UnbalancedInput { start, gain, .. } => {
            PlError::UnbalancedDualGains(format!("closed walk from cell {start:?} has gain {gain}"))
        }
        other => PlError::UnbalancedDualGains(other.to_string()),
    })?;
    let r = Reciprocal {
        points,
        facet_scalars: s,
    };
    debug_assert!(r.is_orthogonal(m));
    Ok(r)
}

/// Linear system for reciprocals: unknowns `r(C) ∈ Q^d` per cell,
/// constraints `(r(C_j) - r(C_i)) · t = 0` for each facet tangent `t`.
pub fn rec_system(m: &CellComplexRealization) -> QMatrix {
    let d = m.dim;
    let mut a = QMatrix::zeros(0, d * m.cell_count());
    for (f, facet) in m.facets.iter().enumerate() {
        let (i, j) = facet.cells;
        for t in m.facet_tangents(f) {
            let mut row = vec![Rational::zero(); d * m.cell_count()];
            for k in 0..d {
                row[d * j + k] += &t[k];
                row[d * i + k] -= &t[k];
            }
            a.push_row(row);
        }
    }
    a
}

/// Dimension of the reciprocal space modulo translations.
pub fn rec_dimension(m: &CellComplexRealization) -> usize {
    let a = rec_system(m);
    a.cols() - a.rank() - m.dim
}

/// An affine function `x ↦ a·x + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl Affine {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.linear, x) + &self.constant
    }

    fn sub(&self, other: &Affine) -> Affine {
        Affine {
            linear: vec_sub(&self.linear, &other.linear),
            constant: &self.constant - &other.constant,
        }
    }

    fn is_zero(&self) -> bool {
        is_zero_vec(&self.linear) && self.constant.is_zero()
    }
}

/// One affine function per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub functions: Vec<Affine>,
}

impl Lifting {
    fn from_flat(m: &CellComplexRealization, x: &[Rational]) -> Lifting {
        let w = m.dim + 1;
        Lifting {
            functions: (0..m.cell_count())
                .map(|c| Affine {
                    linear: x[w * c..w * c + m.dim].to_vec(),
                    constant: x[w * c + m.dim].clone(),
                })
                .collect(),
        }
    }

    /// Concatenated coefficients `(a_1 … a_d, b)` per cell.
    pub fn flatten(&self) -> Vec<Rational> {
        self.functions
            .iter()
            .flat_map(|f| {
                f.linear
                    .iter()
                    .cloned()
                    .chain(std::iter::once(f.constant.clone()))
            })
            .collect()
    }

    /// The same affine function on every cell.
    pub fn trivial(m: &CellComplexRealization, f: Affine) -> Lifting {
        Lifting {
            functions: vec![f; m.cell_count()],
        }
    }

    pub fn negated(&self) -> Lifting {
        Lifting {
            functions: self
                .functions
                .iter()
                .map(|f| Affine {
                    linear: f.linear.iter().map(|x| -x).collect(),
                    constant: -&f.constant,
                })
                .collect(),
        }
    }

    /// Affine functions of adjacent cells agree on every facet vertex.
    pub fn is_valid(&self, m: &CellComplexRealization) -> bool {
        m.facets.iter().all(|f| {
            let (i, j) = f.cells;
            f.vertices.iter().all(|&v| {
                self.functions[i].eval(m.coords(v)) == self.functions[j].eval(m.coords(v))
            })
        })
    }

    /// Adjacent cells never share an affine function.
    pub fn is_sharp(&self, m: &CellComplexRealization) -> bool {
        m.facets.iter().all(|f| {
            !self.functions[f.cells.1]
                .sub(&self.functions[f.cells.0])
                .is_zero()
        })
    }

    pub fn to_json(&self, m: &CellComplexRealization) -> Value {
        Value::Object(
            m.cell_labels
                .iter()
                .zip(&self.functions)
                .map(|(l, f)| {
                    (
                        l.clone(),
                        json!({
                            "linear": f.linear.iter().map(format_rational).collect::<Vec<_>>(),
                            "constant": format_rational(&f.constant),
                        }),
                    )
                })
                .collect(),
        )
    }
}

/// Linear system for liftings: `d + 1` unknowns per cell, one equation
/// `f_i(v) = f_j(v)` per facet and facet vertex.
pub fn lifting_system(m: &CellComplexRealization) -> QMatrix {
    let w = m.dim + 1;
    let mut a = QMatrix::zeros(0, w * m.cell_count());
    for f in &m.facets {
        let (i, j) = f.cells;
        for &v in &f.vertices {
            let mut row = vec![Rational::zero(); w * m.cell_count()];
            for (k, x) in m.coords(v).iter().enumerate() {
                row[w * i + k] = x.clone();
                row[w * j + k] = -x;
            }
            row[w * i + m.dim] = Rational::one();
            row[w * j + m.dim] = rat(-1);
            a.push_row(row);
        }
    }
    a
}

/// Dimension and a rational basis of the space of liftings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingSpace {
    pub dimension: usize,
    pub basis: Vec<Lifting>,
}

pub fn lifting_space(m: &CellComplexRealization) -> LiftingSpace {
    let basis: Vec<Lifting> = lifting_system(m)
        .nullspace()
        .iter()
        .map(|x| Lifting::from_flat(m, x))
        .collect();
    LiftingSpace {
        dimension: basis.len(),
        basis,
    }
}

/// Largest coefficient bound tried by [`sharp_lifting`].
pub const SHARP_SEARCH_LIMIT: i64 = 6;

/// Finds a sharp lifting as a small-integer combination of the basis.
///
/// Coefficient vectors in `[-N, N]^k` are enumerated in a fixed order for
/// `N = 1, 2, …`. Facets whose fold vanishes on every basis element are
/// reported instead.
pub fn sharp_lifting(m: &CellComplexRealization) -> Result<Lifting, PlError> {
    let space = lifting_space(m);
    let flats: Vec<Vec<Rational>> = space.basis.iter().map(Lifting::flatten).collect();
    let dead: Vec<String> = m
        .facets
        .iter()
        .filter(|f| {
            space
                .basis
                .iter()
                .all(|b| b.functions[f.cells.1] == b.functions[f.cells.0])
        })
        .map(|f| f.label.clone())
        .collect();
    if !dead.is_empty() {
        return Err(PlError::NoSharpLifting(dead));
    }
    let k = flats.len();
    for n in 1..=SHARP_SEARCH_LIMIT {
        let width = (2 * n + 1) as usize;
        let total = width.checked_pow(k as u32).unwrap_or(usize::MAX);
        for index in 0..total {
            let mut rest = index;
            let coeffs: Vec<i64> = (0..k)
                .map(|_| {
                    let c = (rest % width) as i64 - n;
                    rest /= width;
                    c
                })
                .collect();
            // Only points on the boundary of the box are new at this N.
            if n > 1 && coeffs.iter().all(|c| c.abs() < n) {
                continue;
            }
            let mut x = vec![Rational::zero(); flats.first().map_or(0, Vec::len)];
            for (c, b) in coeffs.iter().zip(&flats) {
                if *c != 0 {
                    let c = rat(*c);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += &c * bi;
                    }
                }
            }
            let l = Lifting::from_flat(m, &x);
            if l.is_sharp(m) {
                return Ok(l);
            }
        }
    }
    Err(PlError::SharpSearchExhausted(SHARP_SEARCH_LIMIT))
}

/// Lifting whose gradients are the reciprocal's points: across facet `F`
/// the function changes by `e_F · (x - c_F)`, with `e_F` the reciprocal
/// edge vector and `c_F` a vertex of `F`.
pub fn maxwell_lifting(m: &CellComplexRealization, r: &Reciprocal) -> Result<Lifting, PlError> {
    let gains: Vec<Vec<Rational>> = (0..m.facets.len())
        .map(|f| {
            let c = m.coords(m.facets[f].vertices[0]);
            vec![-dot(&r.edge_vector(m, f), c)]
        })
        .collect();
    let group = RationalVectors { dim: 1 };
    let gg =
        GainGraph::new(dual_graph(m), group, gains).map_err(|_| PlError::DisconnectedDualGraph)?;
    let b = propagate_state(&gg, &TranslationOnVectors { dim: 1 }, 0, group.identity())
        .map_err(|e| PlError::UnbalancedDualGains(e.to_string()))?;
    Ok(Lifting {
        functions: r
            .points
            .iter()
            .zip(b)
            .map(|(p, b)| Affine {
                linear: p.clone(),
                constant: b[0].clone(),
            })
            .collect(),
    })
}

/// True iff across every facet the lifted surface bends upward (weakly):
/// `f_{C_j} - f_{C_i} ≥ 0` at the centroid of `C_j`.
pub fn is_locally_convex(m: &CellComplexRealization, l: &Lifting) -> bool {
    m.facets.iter().all(|f| {
        let (i, j) = f.cells;
        let c = m.centroid(j);
        !(l.functions[j].eval(&c) - l.functions[i].eval(&c)).is_negative()
    })
}

/// A locally convex sharp lifting built from a reciprocal with seed `±1`.
pub fn convex_lifting(m: &CellComplexRealization) -> Result<Lifting, PlError> {
    for seed in [rat(1), rat(-1)] {
        let r = reciprocal(m, seed)?;
        let l = maxwell_lifting(m, &r)?;
        if is_locally_convex(m, &l) && l.is_sharp(m) {
            return Ok(l);
        }
    }
    Err(PlError::NoSharpLifting(
        m.facets.iter().map(|f| f.label.clone()).collect(),
    ))
}

/// Wavefront OBJ of a lifted 2-dimensional complex: each cell becomes a
/// polygon at height `f_C`.
pub fn lifting_to_obj(m: &CellComplexRealization, l: &Lifting) -> Result<String, PlError> {
    if m.dim != 2 {
        return Err(PlError::ObjDimension(m.dim));
    }
    let mut out = String::from("# lifted complex\n");
    let mut index = 1;
    for (c, f) in l.functions.iter().enumerate() {
        let _ = writeln!(out, "o {}", m.cell_labels[c]);
        let start = index;
        for &v in &m.cells[c] {
            let p = m.coords(v);
            let z = f.eval(p);
            let _ = writeln!(out, "v {} {} {}", to_f64(&p[0]), to_f64(&p[1]), to_f64(&z));
            index += 1;
        }
        let face: Vec<String> = (start..index).map(|i| i.to_string()).collect();
        let _ = writeln!(out, "f {}", face.join(" "));
    }
    Ok(out)
}

/// Wavefront OBJ of a 2-dimensional reciprocal as a line drawing.
pub fn reciprocal_to_obj(m: &CellComplexRealization, r: &Reciprocal) -> Result<String, PlError> {
    if m.dim != 2 {
        return Err(PlError::ObjDimension(m.dim));
    }
    let mut out = String::from("# reciprocal diagram\n");
    for p in &r.points {
        let _ = writeln!(out, "v {} {} 0", to_f64(&p[0]), to_f64(&p[1]));
    }
    for f in &m.facets {
        let _ = writeln!(out, "l {} {}", f.cells.0 + 1, f.cells.1 + 1);
    }
    Ok(out)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Builds a 2-dimensional complex from convex polygons given by their
/// vertex coordinates in counterclockwise order. Vertices are merged by
/// coordinates; edges shared by two polygons become facets and vertices
/// surrounded by a closed ring of polygons become ridges.
pub fn polygon_complex(
    polygons: &[(String, Vec<[Rational; 2]>)],
) -> Result<CellComplexRealization, PlError> {
    let mut vertex_ids: HashMap<[Rational; 2], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut cells = Vec::new();
    for (label, poly) in polygons {
        let ids: Vec<usize> = poly
            .iter()
            .map(|p| {
                *vertex_ids.entry(p.clone()).or_insert_with(|| {
                    vertices.push((format!("v{}", vertices.len()), p.to_vec()));
                    vertices.len() - 1
                })
            })
            .collect();
        cells.push((label.clone(), ids));
    }
    // Edge (min, max) -> cells using it.
    let mut edge_cells: IndexMap<(usize, usize), Vec<usize>> = IndexMap::new();
    for (c, (_, ids)) in cells.iter().enumerate() {
        for k in 0..ids.len() {
            let (a, b) = (ids[k], ids[(k + 1) % ids.len()]);
            edge_cells.entry((a.min(b), a.max(b))).or_default().push(c);
        }
    }
    let mut facets = Vec::new();
    for (&(a, b), cs) in &edge_cells {
        if cs.len() == 2 {
            facets.push(Facet {
                label: format!("f{}", facets.len()),
                cells: (cs[0], cs[1]),
                vertices: vec![a, b],
            });
        }
    }
    let mut ridges = Vec::new();
    for v in 0..vertices.len() {
        let vcells: Vec<usize> = (0..cells.len())
            .filter(|&c| cells[c].1.contains(&v))
            .collect();
        let vfacets: Vec<usize> = (0..facets.len())
            .filter(|&f| facets[f].vertices.contains(&v))
            .collect();
        if vcells.len() >= 3 && vfacets.len() == vcells.len() {
            ridges.push(Ridge {
                label: format!("r{}", ridges.len()),
                facets: vfacets,
                cells: vcells,
            });
        }
    }
    CellComplexRealization::new(2, vertices, cells, facets, ridges)
}

/// Hexagon vertex offsets; an affine image of the regular hexagon whose
/// translates by `3·Z^2` tile the plane with three tiles at every vertex.
const HEX_OFFSETS: [(i64, i64); 6] = [(1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1)];

fn hex_centers(rings: usize) -> Vec<(i64, i64)> {
    let r = rings as i64;
    let mut out = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            if i.abs().max(j.abs()).max((i + j).abs()) <= r {
                out.push((i, j));
            }
        }
    }
    out
}

/// Patch of a hexagonal tiling: all hexagons within `rings` steps of the
/// central one (7 cells for one ring, 19 for two).
pub fn hex_patch(rings: usize) -> CellComplexRealization {
    let polygons: Vec<(String, Vec<[Rational; 2]>)> = hex_centers(rings)
        .into_iter()
        .map(|(i, j)| {
            (
                format!("c{i}_{j}"),
                HEX_OFFSETS
                    .iter()
                    .map(|&(dx, dy)| [rat(3 * i + dx), rat(3 * j + dy)])
                    .collect(),
            )
        })
        .collect();
    polygon_complex(&polygons).expect("hexagonal patches are valid")
}

/// [`hex_patch`] with the central hexagon removed.
pub fn hex_patch_with_hole(rings: usize) -> CellComplexRealization {
    let m = hex_patch(rings);
    let center = (0..m.cell_count())
        .find(|&c| m.cell_label(c) == "c0_0")
        .expect("central cell");
    m.without_cell(center)
        .expect("removing a cell keeps the patch valid")
}

/// Three quadrilaterals around the origin whose separating rays
/// `(1,0)`, `(0,1)`, `(-1,-1)` sum to zero, so all facet gains are 1.
pub fn ridge_star_2d() -> CellComplexRealization {
    let p = |x: i64, y: i64| [rat(x), rat(y)];
    polygon_complex(&[
        ("a".to_string(), vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]),
        ("b".to_string(), vec![p(0, 0), p(0, 1), p(-1, 1), p(-1, -1)]),
        ("c".to_string(), vec![p(0, 0), p(-1, -1), p(1, -1), p(1, 0)]),
    ])
    .expect("star is valid")
}

/// Prism over a 2-dimensional complex: each polygon times `[0, 1]`.
/// Interior facets become rectangles and interior ridges become vertical
/// edges.
pub fn extrude(m: &CellComplexRealization) -> CellComplexRealization {
    assert_eq!(m.dim, 2, "extrusion is implemented for planar complexes");
    let n = m.vertex_count();
    let lift = |v: usize, z: i64| v + n * z as usize;
    let vertices = (0..2)
        .flat_map(|z| {
            (0..n).map(move |v| {
                (
                    format!("{}_{}", m.vertex_labels[v], z),
                    vec![m.coords[v][0].clone(), m.coords[v][1].clone(), rat(z)],
                )
            })
        })
        .collect();
    let cells = (0..m.cell_count())
        .map(|c| {
            let vs = m.cells[c]
                .iter()
                .map(|&v| lift(v, 0))
                .chain(m.cells[c].iter().map(|&v| lift(v, 1)))
                .collect();
            (m.cell_labels[c].clone(), vs)
        })
        .collect();
    let facets = m
        .facets
        .iter()
        .map(|f| {
            let (a, b) = (f.vertices[0], f.vertices[1]);
            Facet {
                label: f.label.clone(),
                cells: f.cells,
                vertices: vec![lift(a, 0), lift(b, 0), lift(b, 1), lift(a, 1)],
            }
        })
        .collect();
    CellComplexRealization::new(3, vertices, cells, facets, m.ridges.clone())
        .expect("prisms are valid")
}

/// Three prisms sharing a vertical edge (a simple ridge in dimension 3).
pub fn ridge_star_3d() -> CellComplexRealization {
    extrude(&ridge_star_2d())
}

/// Boxes `[0,1]^d` and `[1,2] × [0,1]^(d-1)` sharing the facet `x_0 = 1`.
pub fn two_cell_patch(d: usize) -> CellComplexRealization {
    assert!(d >= 2, "dimension must be at least 2");
    let corners = 1usize << (d - 1);
    let mut vertices = Vec::new();
    for x0 in 0..3 {
        for mask in 0..corners {
            let mut c = vec![rat(x0)];
            c.extend((0..d - 1).map(|k| rat(((mask >> k) & 1) as i64)));
            vertices.push((format!("p{x0}_{mask}"), c));
        }
    }
    let slab = |x0: usize| (0..corners).map(move |m| x0 * corners + m);
    let cells = vec![
        ("left".to_string(), slab(0).chain(slab(1)).collect()),
        ("right".to_string(), slab(1).chain(slab(2)).collect()),
    ];
    let facets = vec![Facet {
        label: "mid".to_string(),
        cells: (0, 1),
        vertices: slab(1).collect(),
    }];
    CellComplexRealization::new(d, vertices, cells, facets, Vec::new()).expect("boxes are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_squares() {
        let m = two_cell_patch(2);
        let g = dual_graph(&m);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(m.normal(0), &[rat(1), rat(0)]);
        let gate = generation_gate(&m).unwrap();
        assert!(gate.passes());
        assert_eq!((gate.dual_rank, gate.facet_rank), (0, 0));
        assert_eq!(rec_dimension(&m), 1);
        assert_eq!(lifting_space(&m).dimension, 4);
        assert_eq!(lifting_space(&two_cell_patch(3)).dimension, 5);
    }

    #[test]
    fn hex_patch_counts() {
        let m = hex_patch(1);
        let g = dual_graph(&m);
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 12));
        assert_eq!(m.interior_ridges().count(), 6);
        let m2 = hex_patch(2);
        assert_eq!(dual_graph(&m2).vertex_count(), 19);
    }

    #[test]
    fn star_gains_are_one() {
        let m = ridge_star_2d();
        let phi = facet_gain_graph(&m).unwrap();
        assert_eq!(phi.gains.graph().edge_count(), 3);
        assert!(phi.gains.gains().iter().all(|g| *g == rat(1)));
    }

    #[test]
    fn ridge_products_are_one_on_hex2() {
        let m = hex_patch(2);
        let phi = facet_gain_graph(&m).unwrap();
        for chunk in phi.gains.gains().chunks(3) {
            assert_eq!(&chunk[0] * &chunk[1] * &chunk[2], rat(1));
        }
        for (e, g) in phi.gains.gains().iter().enumerate() {
            let w = crate::graph::Walk::new(
                phi.gains.graph(),
                phi.gains.graph().edge(e).head,
                vec![crate::graph::Step::backward(e)],
            )
            .unwrap();
            assert_eq!(phi.gains.walk_gain(&w).unwrap(), g.recip());
        }
    }

    #[test]
    fn hex_reciprocal_and_liftings() {
        for rings in 1..=2 {
            let m = hex_patch(rings);
            assert!(generation_gate(&m).unwrap().passes());
            let r = reciprocal(&m, rat(1)).unwrap();
            assert!(r.is_non_degenerate(&m));
            assert!(r.is_orthogonal(&m));
            assert!(is_zero_vec(&rec_system(&m).mul_vec(&r.flatten())));
            assert_eq!(rec_dimension(&m), 1);
            assert_eq!(lifting_space(&m).dimension, 4);
            let l = maxwell_lifting(&m, &r).unwrap();
            assert!(l.is_valid(&m));
            assert!(is_zero_vec(&lifting_system(&m).mul_vec(&l.flatten())));
        }
    }

    #[test]
    fn seed_scales_reciprocal_linearly() {
        let m = hex_patch(1);
        let r1 = reciprocal(&m, rat(1)).unwrap();
        let r2 = reciprocal(&m, rat(2)).unwrap();
        for f in 0..m.facets().len() {
            assert_eq!(
                r2.edge_vector(&m, f),
                vec_scale(&rat(2), &r1.edge_vector(&m, f))
            );
        }
    }

    #[test]
    fn star_reciprocal_is_a_triangle_up_to_inversion() {
        let m = ridge_star_2d();
        let r = reciprocal(&m, rat(1)).unwrap();
        let s = reciprocal(&m, rat(-1)).unwrap();
        assert_eq!(r.points.len(), 3);
        assert_eq!(
            crate::rational::rank_of(&[
                vec_sub(&r.points[1], &r.points[0]),
                vec_sub(&r.points[2], &r.points[0])
            ]),
            2
        );
        for (p, q) in r.points.iter().zip(&s.points) {
            assert_eq!(q, &vec_scale(&rat(-1), p));
        }
    }

    #[test]
    fn trivial_lifting_is_valid_but_not_sharp() {
        let m = hex_patch(1);
        let t = Lifting::trivial(
            &m,
            Affine {
                linear: vec![rat(2), ratio(-1, 3)],
                constant: rat(5),
            },
        );
        assert!(t.is_valid(&m) && !t.is_sharp(&m));
        assert!(is_locally_convex(&m, &t));
    }

    #[test]
    fn sharp_and_convex_liftings() {
        let m = hex_patch(1);
        let l = sharp_lifting(&m).unwrap();
        assert!(l.is_valid(&m) && l.is_sharp(&m));
        let c = convex_lifting(&m).unwrap();
        assert!(is_locally_convex(&m, &c));
        assert!(!is_locally_convex(&m, &c.negated()));

        let star = ridge_star_3d();
        assert_eq!(lifting_space(&star).dimension, 5);
        assert!(sharp_lifting(&star).unwrap().is_sharp(&star));
    }

    #[test]
    fn hole_fails_the_gate() {
        let m = hex_patch_with_hole(2);
        let gate = generation_gate(&m).unwrap();
        assert!(!gate.dual_passes);
        assert!(matches!(
            reciprocal(&m, rat(1)),
            Err(PlError::GenerationGateFailed { .. })
        ));
    }

    #[test]
    fn gauge_invariance() {
        let m = hex_patch(1);
        let r = reciprocal(&m, rat(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let scales: Vec<Rational> = (0..m.facets().len())
            .map(|_| {
                let n = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                ratio(n, rng.gen_range(1..=9))
            })
            .collect();
        let scaled = m.with_rescaled_normals(&scales).unwrap();
        let opts = ReciprocalOptions {
            seed: scales[0].recip(),
            ..ReciprocalOptions::default()
        };
        let r2 = reciprocal_with(&scaled, &opts).unwrap();
        for f in 0..m.facets().len() {
            assert_eq!(r.edge_vector(&m, f), r2.edge_vector(&scaled, f));
        }
    }

    fn affine_image(
        m: &CellComplexRealization,
        a: [[i64; 2]; 2],
        t: [i64; 2],
        q: i64,
    ) -> Option<CellComplexRealization> {
        if a[0][0] * a[1][1] == a[0][1] * a[1][0] {
            return None;
        }
        let map = move |p: &[Rational]| -> Vec<Rational> {
            (0..2)
                .map(|i| (&p[0] * rat(a[i][0]) + &p[1] * rat(a[i][1]) + rat(t[i])) / rat(q))
                .collect()
        };
        Some(m.mapped(map).expect("affine images stay valid"))
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn invariants_on_affine_images(
            a in proptest::array::uniform2(proptest::array::uniform2(-4i64..=4)),
            t in proptest::array::uniform2(-9i64..=9),
            q in 1i64..=5,
            seed in (1i64..=7, 1i64..=7),
            rings in 1usize..=2,
        ) {
            let Some(m) = affine_image(&hex_patch(rings), a, t, q) else { return Ok(()); };
            proptest::prop_assert!(generation_gate(&m).unwrap().passes());
            proptest::prop_assert_eq!(lifting_space(&m).dimension, 4);
            proptest::prop_assert_eq!(rec_dimension(&m), 1);

            let r = reciprocal(&m, ratio(seed.0, seed.1)).unwrap();
            proptest::prop_assert!(r.is_orthogonal(&m) && r.is_non_degenerate(&m));
            for (rc, _) in &facet_gain_graph(&m).unwrap().cycles {
                let mut sum = vec![Rational::zero(); 2];
                for k in 0..3 {
                    let e = vec_scale(&rat(rc.signs[k] as i64), &r.edge_vector(&m, rc.facets[k]));
                    sum = sum.iter().zip(&e).map(|(x, y)| x + y).collect();
                }
                proptest::prop_assert!(is_zero_vec(&sum));
            }
            let l = maxwell_lifting(&m, &r).unwrap();
            proptest::prop_assert!(is_zero_vec(&lifting_system(&m).mul_vec(&l.flatten())));

            // Trivial liftings lie in the kernel and span a (d+1)-space inside it.
            let sys = lifting_system(&m);
            let mut trivial = Vec::new();
            for k in 0..3 {
                let mut coeffs = vec![Rational::zero(); 3];
                coeffs[k] = rat(1);
                let f = Affine { linear: coeffs[..2].to_vec(), constant: coeffs[2].clone() };
                let flat = Lifting::trivial(&m, f).flatten();
                proptest::prop_assert!(is_zero_vec(&sys.mul_vec(&flat)));
                trivial.push(flat);
            }
            proptest::prop_assert_eq!(crate::rational::rank_of(&trivial), 3);
        }

        #[test]
        fn rescaling_normals_switches_the_facet_graph(
            scales in proptest::collection::vec((1i64..=9, 1i64..=9, proptest::bool::ANY), 12),
        ) {
            let m = hex_patch(1);
            let scales: Vec<Rational> = scales
                .iter()
                .map(|&(p, q, neg)| ratio(if neg { -p } else { p }, q))
                .collect();
            let scaled = m.with_rescaled_normals(&scales).unwrap();
            let (phi, psi) = (facet_gain_graph(&m).unwrap(), facet_gain_graph(&scaled).unwrap());
            // Scaling normals by c divides the dependency coefficients by c,
            // which is switching by c⁻¹.
            let inv: Vec<Rational> = scales.iter().map(|c| c.recip()).collect();
            let switched = phi.gains.switch(&inv).unwrap();
            proptest::prop_assert_eq!(switched.gains(), psi.gains.gains());
            let r = reciprocal(&m, rat(1)).unwrap();
            let r2 = reciprocal(&scaled, rat(1)).unwrap();
            for f in 0..m.facets().len() {
                let (e, e2) = (r.edge_vector(&m, f), r2.edge_vector(&scaled, f));
                proptest::prop_assert_eq!(crate::rational::rank_of(&[e, e2]), 1);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let m = hex_patch(1);
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CellComplexRealization::from_json(&back).unwrap(), m);
    }

    #[test]
    fn validation_names_the_offender() {
        let mut json = two_cell_patch(2).to_json();
        json.facets.get_mut("mid").unwrap().vertices.truncate(1);
        let err = CellComplexRealization::from_json(&json).unwrap_err();
        assert!(err.to_string().contains("\"mid\""), "{err}");

        let mut json = two_cell_patch(2).to_json();
        json.cells.get_mut("left").unwrap().push("nowhere".into());
        let err = CellComplexRealization::from_json(&json).unwrap_err();
        assert!(err.to_string().contains("nowhere"), "{err}");
    }

    #[test]
    fn obj_export() {
        let m = hex_patch(1);
        let l = convex_lifting(&m).unwrap();
        let obj = lifting_to_obj(&m, &l).unwrap();
        assert_eq!(obj.matches("\nf ").count(), 7);
        assert!(
            lifting_to_obj(&ridge_star_3d(), &sharp_lifting(&ridge_star_3d()).unwrap()).is_err()
        );
    }
}
