//! Gain graphs: walk gains, balance with certificates, switching, and the
//! essential gain group.
//!
//! Gains are stored for the fixed orientation of each edge; traversing an
//! edge backwards contributes the inverse.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{GroupElement, GroupSpec};
use crate::graph::{
    deserialize_id, fundamental_circle, spanning_tree, Direction, GraphError, Multigraph,
    SpanningTree, Step, Walk,
};
use crate::group::{GainGroup, NonzeroRationals, RationalVectors};
use crate::lattice::{left_kernel, quotient_structure, IntMatrix, QuotientStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GainError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("expected {expected} gains, got {got}")]
    GainCount { expected: usize, got: usize },
    #[error("gain on edge {edge:?} is not an element of {group}: {reason}")]
    BadGain {
        edge: String,
        group: String,
        reason: String,
    },
    #[error("potential on vertex {vertex:?} is not an element of {group}")]
    BadPotential { vertex: String, group: String },
    #[error("expected {expected} vertex potentials, got {got}")]
    PotentialCount { expected: usize, got: usize },
    #[error("cannot parse group {0:?}")]
    UnknownGroup(String),
}

/// A connected multigraph with one group element per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct GainGraph<G: GainGroup = GroupSpec> {
    graph: Multigraph,
    group: G,
    gains: Vec<G::Elem>,
}

impl<G: GainGroup> GainGraph<G> {
    pub fn new(graph: Multigraph, group: G, gains: Vec<G::Elem>) -> Result<Self, GainError> {
        if gains.len() != graph.edge_count() {
            return Err(GainError::GainCount {
                expected: graph.edge_count(),
                got: gains.len(),
            });
        }
        if let Some(e) = (0..gains.len()).find(|&e| !group.conforms(&gains[e])) {
            return Err(GainError::BadGain {
                edge: graph.edge(e).label.clone(),
                group: group.describe(),
                reason: format!("{:?}", gains[e]),
            });
        }
        graph.ensure_connected()?;
        Ok(GainGraph {
            graph,
            group,
            gains,
        })
    }

    /// The gain graph `g(e) = θ(tail)⁻¹ · θ(head)`, balanced by construction.
    pub fn coboundary(graph: Multigraph, group: G, theta: &[G::Elem]) -> Result<Self, GainError> {
        let gains = graph
            .edges()
            .iter()
            .map(|e| group.between(&theta[e.tail], &theta[e.head]))
            .collect();
        GainGraph::new(graph, group, gains)
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn gains(&self) -> &[G::Elem] {
        &self.gains
    }

    pub fn gain(&self, e: usize) -> &G::Elem {
        &self.gains[e]
    }

    pub fn step_gain(&self, s: Step) -> G::Elem {
        match s.dir {
            Direction::Forward => self.gains[s.edge].clone(),
            Direction::Backward => self.group.inverse(&self.gains[s.edge]),
        }
    }

    /// Product of step gains along `w`.
    pub fn walk_gain(&self, w: &Walk) -> Result<G::Elem, GainError> {
        // Re-validate: the walk may have been built against another graph.
        Walk::new(&self.graph, w.start(), w.steps().to_vec())?;
        Ok(self.walk_gain_unchecked(w))
    }

    pub(crate) fn walk_gain_unchecked(&self, w: &Walk) -> G::Elem {
        w.steps().iter().fold(self.group.identity(), |acc, &s| {
            self.group.op(&acc, &self.step_gain(s))
        })
    }

    /// Decides balance using the default spanning tree.
    pub fn is_balanced(&self) -> BalanceReport<G::Elem> {
        let tree = spanning_tree(&self.graph).expect("gain graphs are connected");
        self.is_balanced_with_tree(&tree)
    }

    /// Propagates potentials along `tree` from its root and checks every
    /// non-tree edge. The witness is the first failing fundamental circle.
    pub fn is_balanced_with_tree(&self, tree: &SpanningTree) -> BalanceReport<G::Elem> {
        let theta = self.tree_potentials(tree);
        let violation = tree.non_tree_edges().into_iter().find(|&e| {
            let edge = self.graph.edge(e);
            self.group.op(&theta[edge.tail], &self.gains[e]) != theta[edge.head]
        });
        match violation {
            None => BalanceReport {
                balanced: true,
                witness: None,
                witness_gain: None,
                potentials: Some(theta),
            },
            Some(e) => {
                let w = fundamental_circle(&self.graph, tree, e);
                let g = self.walk_gain_unchecked(&w);
                BalanceReport {
                    balanced: false,
                    witness: Some(w),
                    witness_gain: Some(g),
                    potentials: None,
                }
            }
        }
    }

    /// Potentials with `θ(root) = 1` and `θ(child) = θ(parent) · g(parent step)`.
    pub fn tree_potentials(&self, tree: &SpanningTree) -> Vec<G::Elem> {
        let mut theta = vec![self.group.identity(); self.graph.vertex_count()];
        for &v in &tree.bfs_order()[1..] {
            let p = tree.parent(v).expect("non-root vertex");
            let s = tree.parent_step(v).expect("non-root vertex");
            theta[v] = self.group.op(&theta[p], &self.step_gain(s));
        }
        theta
    }

    /// Switching by vertex potentials: `g'(e) = σ(tail)⁻¹ · g(e) · σ(head)`.
    pub fn switch(&self, sigma: &[G::Elem]) -> Result<Self, GainError> {
        if sigma.len() != self.graph.vertex_count() {
            return Err(GainError::PotentialCount {
                expected: self.graph.vertex_count(),
                got: sigma.len(),
            });
        }
        if let Some(v) = (0..sigma.len()).find(|&v| !self.group.conforms(&sigma[v])) {
            return Err(GainError::BadPotential {
                vertex: self.graph.vertex_label(v).to_string(),
                group: self.group.describe(),
            });
        }
        let gains = self
            .graph
            .edges()
            .iter()
            .zip(&self.gains)
            .map(|(e, g)| {
                let left = self.group.op(&self.group.inverse(&sigma[e.tail]), g);
                self.group.op(&left, &sigma[e.head])
            })
            .collect();
        Ok(GainGraph {
            graph: self.graph.clone(),
            group: self.group.clone(),
            gains,
        })
    }

    pub fn to_json(&self) -> GainGraphJson {
        let graph = self.graph.to_json();
        GainGraphJson {
            group: self.group.describe(),
            vertices: graph.vertices,
            edges: graph
                .edges
                .into_iter()
                .zip(&self.gains)
                .map(|(e, g)| GainEdgeJson {
                    id: e.id,
                    tail: e.tail,
                    head: e.head,
                    gain: self.group.elem_to_json(g),
                })
                .collect(),
        }
    }

    /// Parses the edges of `json` as gains in `group` (the `group` string in
    /// the file is ignored; see [`AnyGainGraph::from_json`]).
    pub fn from_json_in(json: &GainGraphJson, group: G) -> Result<Self, GainError> {
        let graph = Multigraph::new(
            json.vertices.iter().cloned(),
            json.edges
                .iter()
                .map(|e| (e.id.clone(), e.tail.clone(), e.head.clone())),
        )?;
        let gains = json
            .edges
            .iter()
            .map(|e| {
                group
                    .elem_from_json(&e.gain)
                    .map_err(|reason| GainError::BadGain {
                        edge: e.id.clone(),
                        group: group.describe(),
                        reason,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GainGraph::new(graph, group, gains)
    }

    /// Graphviz rendering with gains on the edges.
    pub fn to_dot(&self, name: &str) -> String {
        self.graph.to_dot(name, |e| {
            Some(self.group.elem_to_json(&self.gains[e]).to_string())
        })
    }
}

/// Result of the direct balance check.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport<E> {
    pub balanced: bool,
    /// A fundamental circle with nonidentity gain, when unbalanced.
    pub witness: Option<Walk>,
    pub witness_gain: Option<E>,
    /// Vertex potentials with `g(e) = θ(tail)⁻¹ · θ(head)`, when balanced.
    pub potentials: Option<Vec<E>>,
}

impl<E> BalanceReport<E> {
    pub fn to_json<G: GainGroup<Elem = E>>(&self, gg: &GainGraph<G>) -> Value {
        let g = gg.graph();
        json!({
            "balanced": self.balanced,
            "witness": self.witness.as_ref().map(|w| serde_json::to_value(w.to_json(g)).expect("serializable")),
            "witness_gain": self.witness_gain.as_ref().map(|x| gg.group().elem_to_json(x)),
            "potentials": self.potentials.as_ref().map(|p| {
                g.vertex_labels()
                    .iter()
                    .zip(p)
                    .map(|(v, x)| (v.clone(), gg.group().elem_to_json(x)))
                    .collect::<serde_json::Map<_, _>>()
            }),
        })
    }
}

/// Structure of the subgroup generated by the fundamental-circle gains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EssentialGainGroup {
    /// `Z^free_rank ⊕ Z_{t1} ⊕ …` in invariant-factor form.
    Structure(QuotientStructure),
    /// For groups with dyadic summands only generators are returned.
    Generators(Vec<GroupElement>),
}

impl EssentialGainGroup {
    pub fn is_trivial(&self) -> bool {
        match self {
            EssentialGainGroup::Structure(s) => s.is_trivial(),
            EssentialGainGroup::Generators(g) => g.iter().all(GroupElement::is_identity),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EssentialGainGroup::Structure(s) => json!({
                "free_rank": s.free_rank,
                "torsion_orders": s.torsion_orders.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "trivial": s.is_trivial(),
            }),
            EssentialGainGroup::Generators(g) => json!({
                "generators": g.iter().map(GroupElement::to_json).collect::<Vec<_>>(),
                "trivial": self.is_trivial(),
            }),
        }
    }
}

impl GainGraph<GroupSpec> {
    /// Fundamental-circle gains, one per non-tree edge of the default tree.
    pub fn circle_gains(&self) -> Vec<GroupElement> {
        let tree = spanning_tree(&self.graph).expect("gain graphs are connected");
        tree.non_tree_edges()
            .into_iter()
            .map(|e| self.walk_gain_unchecked(&fundamental_circle(&self.graph, &tree, e)))
            .collect()
    }

    /// The subgroup of the gain group generated by all closed-walk gains.
    ///
    /// Without dyadic summands the group is `Z^m / R` with `R` spanned by the
    /// torsion relations. If `h_1 … h_k` are lifts of the circle gains, the
    /// generated subgroup is `Z^k / K` where `K` is the set of coefficient
    /// vectors `c` with `Σ c_j h_j ∈ R`; `K` is read off the left kernel of
    /// the stacked matrix `[h; R]`.
    pub fn essential_gain_group(&self) -> EssentialGainGroup {
        let spec = &self.group;
        let gens = self.circle_gains();
        if spec.dyadic_rank() > 0 {
            return EssentialGainGroup::Generators(gens);
        }
        let k = gens.len();
        let r = spec.free_rank();
        let m = spec.width();
        let mut rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.free_part
                    .iter()
                    .cloned()
                    .chain(g.torsion_part.iter().map(|&t| BigInt::from(t)))
                    .collect()
            })
            .collect();
        for (i, &n) in spec.torsion_orders().iter().enumerate() {
            let mut row = vec![BigInt::from(0); m];
            row[r + i] = BigInt::from(n);
            rows.push(row);
        }
        let kernel = left_kernel(&IntMatrix::from_rows(m, rows));
        let projected = IntMatrix::from_rows(
            k,
            (0..kernel.rows())
                .map(|i| kernel.row(i)[..k].to_vec())
                .collect(),
        );
        EssentialGainGroup::Structure(quotient_structure(k, &projected))
    }
}

/// Serialized gain graph: graph JSON plus a group string and per-edge gains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainGraphJson {
    pub group: String,
    #[serde(deserialize_with = "deserialize_vertex_ids")]
    pub vertices: Vec<String>,
    pub edges: Vec<GainEdgeJson>,
}

fn deserialize_vertex_ids<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    struct Id(#[serde(deserialize_with = "deserialize_id")] String);
    Ok(Vec::<Id>::deserialize(d)?
        .into_iter()
        .map(|i| i.0)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainEdgeJson {
    #[serde(deserialize_with = "deserialize_id")]
    pub id: String,
    #[serde(deserialize_with = "deserialize_id")]
    pub tail: String,
    #[serde(deserialize_with = "deserialize_id")]
    pub head: String,
    pub gain: Value,
}

/// A gain graph whose group is chosen by the `group` string of its file:
/// a spec such as `Z^2 * Z_4`, `Q^d` for rational vectors, or `Q*`.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyGainGraph {
    Spec(GainGraph<GroupSpec>),
    Vectors(GainGraph<RationalVectors>),
    Scalars(GainGraph<NonzeroRationals>),
}

impl AnyGainGraph {
    pub fn from_json(json: &GainGraphJson) -> Result<Self, GainError> {
        let group = json.group.trim();
        if group == "Q*" {
            return Ok(AnyGainGraph::Scalars(GainGraph::from_json_in(
                json,
                NonzeroRationals,
            )?));
        }
        if let Some(d) = group.strip_prefix("Q^") {
            let dim = d
                .trim()
                .parse()
                .map_err(|_| GainError::UnknownGroup(group.to_string()))?;
            return Ok(AnyGainGraph::Vectors(GainGraph::from_json_in(
                json,
                RationalVectors { dim },
            )?));
        }
        if group == "Q" {
            return Ok(AnyGainGraph::Vectors(GainGraph::from_json_in(
                json,
                RationalVectors { dim: 1 },
            )?));
        }
        let spec: GroupSpec = group
            .parse()
            .map_err(|_| GainError::UnknownGroup(group.to_string()))?;
        Ok(AnyGainGraph::Spec(GainGraph::from_json_in(json, spec)?))
    }

    pub fn graph(&self) -> &Multigraph {
        match self {
            AnyGainGraph::Spec(g) => g.graph(),
            AnyGainGraph::Vectors(g) => g.graph(),
            AnyGainGraph::Scalars(g) => g.graph(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{spanning_tree_with_order, wheel};
    use proptest::prelude::*;

    fn z5_wheel(n: usize) -> GainGraph {
        let g = wheel(n);
        let spec = GroupSpec::cyclic(n as u64 - 1);
        let gains = (0..2 * n)
            .map(|e| {
                spec.element_from_i64(&[], &[i64::from(e < n)], &[])
                    .unwrap()
            })
            .collect();
        GainGraph::new(g, spec, gains).unwrap()
    }

    fn hamiltonian(gg: &GainGraph, n: usize, i: usize) -> Walk {
        let mut steps = vec![Step::forward(n + (i + 1) % n)];
        steps.extend((1..n).map(|j| Step::forward((i + j) % n)));
        steps.push(Step::backward(n + i));
        Walk::new(gg.graph(), 0, steps).unwrap()
    }

    #[test]
    fn walk_gain_examples() {
        let gg = z5_wheel(6);
        let spec = gg.group().clone();
        for i in 0..6 {
            assert!(gg.walk_gain(&hamiltonian(&gg, 6, i)).unwrap().is_identity());
        }
        let rim = Walk::new(gg.graph(), 1, (0..6).map(Step::forward).collect()).unwrap();
        assert_eq!(
            gg.walk_gain(&rim).unwrap(),
            spec.element_from_i64(&[], &[1], &[]).unwrap()
        );

        let trivial = GainGraph::new(
            wheel(4),
            GroupSpec::integers(2),
            vec![GroupSpec::integers(2).identity(); 8],
        )
        .unwrap();
        assert!(trivial
            .walk_gain(&rim_walk(4, trivial.graph()))
            .unwrap()
            .is_identity());
    }

    fn rim_walk(n: usize, g: &Multigraph) -> Walk {
        Walk::new(g, 1, (0..n).map(Step::forward).collect()).unwrap()
    }

    #[test]
    fn wheel_is_unbalanced_with_rim_witness() {
        let gg = z5_wheel(6);
        let report = gg.is_balanced();
        assert!(!report.balanced);
        let w = report.witness.unwrap();
        let mut edges: Vec<usize> = w.steps().iter().map(|s| s.edge).collect();
        edges.sort();
        assert_eq!(edges, (0..6).collect::<Vec<_>>());
        assert!(w.steps().iter().all(|s| s.dir == Direction::Forward));
    }

    #[test]
    fn essential_group_examples() {
        // Brute-force closure of the circle gains inside Z_5.
        let gg = z5_wheel(6);
        let gens = gg.circle_gains();
        let spec = gg.group().clone();
        let mut closure = vec![spec.identity()];
        let mut i = 0;
        while i < closure.len() {
            for g in &gens {
                let x = spec.add(&closure[i], g).unwrap();
                if !closure.contains(&x) {
                    closure.push(x);
                }
            }
            i += 1;
        }
        assert_eq!(closure.len(), 5);
        assert_eq!(
            gg.essential_gain_group(),
            EssentialGainGroup::Structure(QuotientStructure {
                free_rank: 0,
                torsion_orders: vec![BigInt::from(5)]
            })
        );

        let z2 = GroupSpec::integers(2);
        let looped = Multigraph::from_indices(1, &[(0, 0)]).unwrap();
        let gg = GainGraph::new(
            looped,
            z2.clone(),
            vec![z2.element_from_i64(&[1, 0], &[], &[]).unwrap()],
        )
        .unwrap();
        assert_eq!(
            gg.essential_gain_group(),
            EssentialGainGroup::Structure(QuotientStructure {
                free_rank: 1,
                torsion_orders: vec![]
            })
        );

        let tree = Multigraph::from_indices(2, &[(0, 1)]).unwrap();
        let gg = GainGraph::new(tree, z2.clone(), vec![z2.generator(0)]).unwrap();
        assert!(gg.essential_gain_group().is_trivial());
    }

    #[test]
    fn essential_group_mixes_torsion() {
        // Circle gains 2 and 3 in Z_4 ⊕ Z: generated subgroup ⟨(2,0),(0,3)⟩ ≅ Z_2 ⊕ Z.
        let spec: GroupSpec = "Z * Z_4".parse().unwrap();
        let g = Multigraph::from_indices(1, &[(0, 0), (0, 0)]).unwrap();
        let gains = vec![
            spec.element_from_i64(&[0], &[2], &[]).unwrap(),
            spec.element_from_i64(&[3], &[0], &[]).unwrap(),
        ];
        let gg = GainGraph::new(g, spec, gains).unwrap();
        assert_eq!(
            gg.essential_gain_group(),
            EssentialGainGroup::Structure(QuotientStructure {
                free_rank: 1,
                torsion_orders: vec![BigInt::from(2)]
            })
        );
    }

    #[test]
    fn dyadic_essential_group_returns_generators() {
        let d = GroupSpec::dyadic(1);
        let g = Multigraph::from_indices(1, &[(0, 0)]).unwrap();
        let gg = GainGraph::new(
            g,
            d.clone(),
            vec![d.element_from_i64(&[], &[], &[(1, 2)]).unwrap()],
        )
        .unwrap();
        assert!(
            matches!(gg.essential_gain_group(), EssentialGainGroup::Generators(v) if v.len() == 1)
        );
    }

    #[test]
    fn json_round_trip() {
        let gg = z5_wheel(4);
        let json = gg.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back: GainGraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(
            AnyGainGraph::from_json(&back).unwrap(),
            AnyGainGraph::Spec(gg)
        );
    }

    #[test]
    fn bad_gain_names_edge() {
        let json: GainGraphJson = serde_json::from_value(json!({
            "group": "Z_3",
            "vertices": ["a", "b"],
            "edges": [{"id": "ab", "tail": "a", "head": "b", "gain": [1, 2]}]
        }))
        .unwrap();
        let err = AnyGainGraph::from_json(&json).unwrap_err();
        assert!(err.to_string().contains("\"ab\""), "{err}");
    }

    fn random_instance() -> impl Strategy<Value = (GainGraph, Vec<GroupElement>)> {
        (
            2usize..8,
            prop::collection::vec(0usize..100, 7),
            prop::collection::vec((0usize..100, 0usize..100), 0..8),
        )
            .prop_flat_map(|(n, parents, extra)| {
                let g = crate::graph::tests::random_connected(n, &extra, &parents);
                let m = g.edge_count();
                (
                    Just(g),
                    prop::collection::vec((-3i64..4, 0i64..4), m),
                    prop::collection::vec((-3i64..4, 0i64..4), n),
                )
            })
            .prop_map(|(g, gains, sigma)| {
                let spec: GroupSpec = "Z * Z_4".parse().unwrap();
                let el = |&(a, b): &(i64, i64)| spec.element_from_i64(&[a], &[b], &[]).unwrap();
                let gains = gains.iter().map(el).collect();
                let sigma = sigma.iter().map(el).collect();
                (GainGraph::new(g, spec.clone(), gains).unwrap(), sigma)
            })
    }

    proptest! {
        #[test]
        fn switching_preserves_closed_walk_gains((gg, sigma) in random_instance()) {
            let switched = gg.switch(&sigma).unwrap();
            let tree = spanning_tree(gg.graph()).unwrap();
            for c in crate::graph::fundamental_circles(gg.graph(), &tree) {
                prop_assert_eq!(gg.walk_gain(&c).unwrap(), switched.walk_gain(&c).unwrap());
                let rev = c.reversed();
                prop_assert_eq!(gg.walk_gain(&rev).unwrap(), gg.group().negate(&gg.walk_gain(&c).unwrap()));
            }
            prop_assert_eq!(gg.is_balanced().balanced, switched.is_balanced().balanced);
        }

        #[test]
        fn balance_equivalences((gg, sigma) in random_instance()) {
            let report = gg.is_balanced();
            let all_circles_trivial = gg.circle_gains().iter().all(GroupElement::is_identity);
            prop_assert_eq!(report.balanced, all_circles_trivial);
            prop_assert_eq!(report.balanced, gg.essential_gain_group().is_trivial());

            // Reverse edge order and a different root give the same answer.
            let order: Vec<usize> = (0..gg.graph().edge_count()).rev().collect();
            let root = gg.graph().vertex_count() - 1;
            let other = spanning_tree_with_order(gg.graph(), &order, root).unwrap();
            prop_assert_eq!(gg.is_balanced_with_tree(&other).balanced, report.balanced);

            if let Some(theta) = &report.potentials {
                for (e, edge) in gg.graph().edges().iter().enumerate() {
                    prop_assert_eq!(gg.group().sub(&theta[edge.head], &theta[edge.tail]).unwrap(), gg.gain(e).clone());
                }
            } else {
                prop_assert!(!report.witness_gain.unwrap().is_identity());
            }

            let cob = GainGraph::coboundary(gg.graph().clone(), gg.group().clone(), &sigma).unwrap();
            prop_assert!(cob.is_balanced().balanced);
            prop_assert!(cob.essential_gain_group().is_trivial());
        }
    }
}
