//! The binary cycle test.
//!
//! Given a gain graph and closed walks whose binary images form a basis of
//! the binary cycle space, the test concludes balance when every walk has
//! identity gain. The conclusion is only valid for suitable gain groups: a
//! finite graph whose group has no odd torsion, or (for arbitrary graphs)
//! a group with no odd torsion and no nonzero infinitely 2-divisible
//! element. Outside these gates the test can be fooled; [`wheel_counterexample`]
//! builds the standard family of examples.
//!
//! The test never answers "unbalanced". Failed preconditions are reported as
//! diagnostic outcomes and [`GainGraph::is_balanced`] remains the ground truth.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{GroupElement, GroupSpec};
use crate::gain::{GainError, GainGraph};
use crate::graph::{
    fundamental_circles, is_binary_cycle_basis, spanning_tree, wheel, CycleBasisCandidate,
    GraphError, Multigraph, Step, Walk,
};
use crate::lattice::{membership, mod2_rank, smith_normal_form, IntMatrix};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BctError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gain(#[from] GainError),
    #[error("the wheel family needs k >= 2, got {0}")]
    WheelTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BctOutcome {
    /// Every walk has identity gain, the images form a basis and a validity
    /// gate passes: the graph is balanced.
    BalancedByTheorem,
    /// The binary images are not a basis of the binary cycle space.
    NotABasis,
    /// Some candidate walk has nonidentity gain.
    UnbalancedWalk,
    /// The group has odd torsion, so the test is not valid.
    GateFailedOddTorsion,
    /// No odd torsion, but the graph is treated as infinite and the group
    /// has nonzero infinitely 2-divisible elements.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BctVerdict {
    pub outcome: BctOutcome,
    /// Index into the candidate and the offending walk, for `UnbalancedWalk`.
    pub witness: Option<(usize, Walk)>,
    pub witness_gain: Option<GroupElement>,
    pub details: BctDetails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BctDetails {
    pub walk_count: usize,
    pub binary_rank: usize,
    pub cycle_rank: usize,
    pub gates: GateReport,
    /// Which gate justified a positive answer, if any.
    pub justified_by: Option<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// Finite graph and no odd torsion.
    FiniteNoOddTorsion,
    /// No odd torsion and no nonzero infinitely 2-divisible elements.
    NoTwoDivisible,
}

impl BctVerdict {
    pub fn to_json(&self, gg: &GainGraph) -> Value {
        json!({
            "outcome": self.outcome,
            "witness_index": self.witness.as_ref().map(|(i, _)| i),
            "witness": self.witness.as_ref().map(|(_, w)| serde_json::to_value(w.to_json(gg.graph())).expect("serializable")),
            "witness_gain": self.witness_gain.as_ref().map(GroupElement::to_json),
            "details": self.details,
        })
    }
}

/// Options for [`binary_cycle_test_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BctOptions {
    /// Only accept the gate that also covers infinite graphs.
    pub assume_infinite: bool,
}

pub fn binary_cycle_test(
    gg: &GainGraph,
    cand: &CycleBasisCandidate,
) -> Result<BctVerdict, BctError> {
    binary_cycle_test_with(gg, cand, BctOptions::default())
}

pub fn binary_cycle_test_with(
    gg: &GainGraph,
    cand: &CycleBasisCandidate,
    options: BctOptions,
) -> Result<BctVerdict, BctError> {
    let graph_finite = !options.assume_infinite;
    let gates = gate_report(gg.group(), graph_finite);
    let basis = is_binary_cycle_basis(gg.graph(), cand)?;
    let mut verdict = BctVerdict {
        outcome: BctOutcome::BalancedByTheorem,
        witness: None,
        witness_gain: None,
        details: BctDetails {
            walk_count: cand.len(),
            binary_rank: basis.rank,
            cycle_rank: basis.cycle_rank,
            gates,
            justified_by: None,
        },
    };
    for (i, w) in cand.walks().iter().enumerate() {
        let g = gg.walk_gain(w)?;
        if !g.is_identity() {
            verdict.outcome = BctOutcome::UnbalancedWalk;
            verdict.witness = Some((i, w.clone()));
            verdict.witness_gain = Some(g);
            return Ok(verdict);
        }
    }
    if !basis.is_basis {
        verdict.outcome = BctOutcome::NotABasis;
        return Ok(verdict);
    }
    if gates.odd_torsion {
        verdict.outcome = BctOutcome::GateFailedOddTorsion;
        return Ok(verdict);
    }
    // A finite graph only needs the torsion gate; the divisibility gate is
    // consulted for infinite graphs.
    verdict.details.justified_by = if gates.finite_graph_gate {
        Some(Gate::FiniteNoOddTorsion)
    } else if gates.no_two_divisible_gate {
        Some(Gate::NoTwoDivisible)
    } else {
        verdict.outcome = BctOutcome::Inconclusive;
        return Ok(verdict);
    };
    debug_assert!(
        gg.is_balanced().balanced,
        "binary cycle test accepted an unbalanced gain graph"
    );
    Ok(verdict)
}

/// Which validity gates hold for a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub graph_finite: bool,
    pub odd_torsion: bool,
    pub nontrivial_inf_2_divisible: bool,
    /// Finite graph and no odd torsion.
    pub finite_graph_gate: bool,
    /// No odd torsion and no nonzero infinitely 2-divisible element; valid
    /// for infinite graphs too.
    pub no_two_divisible_gate: bool,
}

impl GateReport {
    pub fn valid(&self) -> bool {
        self.finite_graph_gate || self.no_two_divisible_gate
    }
}

pub fn gate_report(spec: &GroupSpec, graph_finite: bool) -> GateReport {
    let odd_torsion = spec.has_odd_torsion();
    let inf2 = spec.has_nontrivial_inf_2_divisible();
    GateReport {
        graph_finite,
        odd_torsion,
        nontrivial_inf_2_divisible: inf2,
        finite_graph_gate: graph_finite && !odd_torsion,
        no_two_divisible_gate: !odd_torsion && !inf2,
    }
}

/// The wheel `W_{2k}` over `Z_{2k-1}`: rim edges have gain 1, spokes gain 0.
///
/// The candidate consists of the `2k` Hamiltonian circles. Each uses
/// `2k - 1` rim edges, so its gain vanishes, while the rim itself has gain
/// `2k = 1`. Circle `i` leaves the hub along spoke `i + 1`, runs around the
/// rim skipping edge `i`, and returns along spoke `i`.
pub fn wheel_counterexample(k: usize) -> Result<(GainGraph, CycleBasisCandidate), BctError> {
    if k < 2 {
        return Err(BctError::WheelTooSmall(k));
    }
    let n = 2 * k;
    let g = wheel(n);
    let spec = GroupSpec::cyclic(n as u64 - 1);
    let one = spec.generator(0);
    let gains = (0..2 * n)
        .map(|e| if e < n { one.clone() } else { spec.identity() })
        .collect();
    let gg = GainGraph::new(g, spec, gains)?;
    let walks = (0..n)
        .map(|i| {
            let mut steps = vec![Step::forward(n + (i + 1) % n)];
            steps.extend((1..n).map(|j| Step::forward((i + j) % n)));
            steps.push(Step::backward(n + i));
            Walk::new(gg.graph(), 0, steps)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((gg, CycleBasisCandidate::new(walks)?))
}

/// The rim of a wheel from [`wheel_counterexample`], starting at `r0`.
pub fn wheel_rim(gg: &GainGraph) -> Walk {
    let n = gg.graph().vertex_count() - 1;
    Walk::new(gg.graph(), 1, (0..n).map(Step::forward).collect()).expect("rim is a walk")
}

/// One randomized instance of the free-abelian lemma behind the test.
///
/// `A = Z^r`, `L ⊆ A` with `L + 2A = A`, `h: A → G` with `h(L) = 0` where
/// `G = Z^s ⊕ Z_{2^t}` has no odd torsion, and `K` generated by vectors
/// some multiple of which lies in `L`. The lemma predicts `h(K) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaTrial {
    pub seed: u64,
    pub rank: usize,
    pub l_generators: Vec<Vec<String>>,
    pub target: String,
    /// For each generator `y` of `K`, the least `ℓ ≥ 1` with `ℓ·y ∈ L`.
    pub k_multipliers: Vec<String>,
    pub h_vanishes_on_l: bool,
    pub h_vanishes_on_k: bool,
}

impl LemmaTrial {
    pub fn holds(&self) -> bool {
        self.h_vanishes_on_l && self.h_vanishes_on_k
    }
}

/// Runs one seeded trial: ranks at most 4, entries of `L` in `[-3, 3]`, `L`
/// resampled until its rank modulo 2 is full.
pub fn lemma_free_abelian_oracle(seed: u64) -> LemmaTrial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.gen_range(1..=4usize);
    let l = loop {
        let rows = rng.gen_range(r..=r + 2);
        let m = IntMatrix::from_rows(
            r,
            (0..rows)
                .map(|_| {
                    (0..r)
                        .map(|_| BigInt::from(rng.gen_range(-3..=3)))
                        .collect()
                })
                .collect(),
        );
        if mod2_rank(&m) == r {
            break m;
        }
    };
    let target = GroupSpec::new(rng.gen_range(0..=2), vec![1 << rng.gen_range(1..=3)], 0)
        .expect("valid target");
    let k: Vec<Vec<BigInt>> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (0..r)
                .map(|_| BigInt::from(rng.gen_range(-4..=4)))
                .collect()
        })
        .collect();
    lemma_trial(seed, &l, &target, &k, &mut rng)
}

/// Evaluates the lemma on given data; `h` is drawn at random among the
/// homomorphisms killing `L`.
pub fn lemma_trial(
    seed: u64,
    l: &IntMatrix,
    target: &GroupSpec,
    k: &[Vec<BigInt>],
    rng: &mut impl Rng,
) -> LemmaTrial {
    let r = l.cols();
    // Writing U·L·V = D, an integer vector x lies in L iff the coordinates
    // y = x·V satisfy d_i | y_i (and y_i = 0 past the rank). So h kills L
    // iff h(x) = Σ y_i c_i with d_i·c_i = 0 in the target.
    let snf = smith_normal_form(l);
    let factors = snf.invariant_factors();
    let c: Vec<GroupElement> = (0..r)
        .map(|i| match factors.get(i) {
            Some(d) => random_killed_by(target, d, rng),
            None => random_element(target, rng),
        })
        .collect();
    let h = |x: &[BigInt]| -> GroupElement {
        let y = snf.v.left_mul_vec(x);
        y.iter().zip(&c).fold(target.identity(), |acc, (yi, ci)| {
            target.add_unchecked(&acc, &target.scale(yi, ci))
        })
    };
    let h_vanishes_on_l = (0..l.rows()).all(|i| h(l.row(i)).is_identity());
    let h_vanishes_on_k = k.iter().all(|y| h(y).is_identity());
    let k_multipliers = k
        .iter()
        .map(|y| match least_multiple_in(l, y) {
            Some(m) => m.to_string(),
            None => "none".to_string(),
        })
        .collect();
    LemmaTrial {
        seed,
        rank: r,
        l_generators: (0..l.rows())
            .map(|i| l.row(i).iter().map(ToString::to_string).collect())
            .collect(),
        target: target.to_string(),
        k_multipliers,
        h_vanishes_on_l,
        h_vanishes_on_k,
    }
}

/// Least `ℓ ≥ 1` with `ℓ·y` in the row span of `l`, searched up to the
/// lattice index when `l` has full rank.
fn least_multiple_in(l: &IntMatrix, y: &[BigInt]) -> Option<BigInt> {
    let factors = smith_normal_form(l).invariant_factors();
    if factors.len() < l.cols() {
        return None;
    }
    let index: BigInt = factors.iter().product();
    let mut m = BigInt::one();
    while m <= index {
        let scaled: Vec<BigInt> = y.iter().map(|x| x * &m).collect();
        if membership(l, &scaled).is_some() {
            return Some(m);
        }
        m += 1;
    }
    None
}

/// A random element `c` of a torsion-only-in-`Z_{2^t}` target with `d·c = 0`.
fn random_killed_by(target: &GroupSpec, d: &BigInt, rng: &mut impl Rng) -> GroupElement {
    let torsion = target
        .torsion_orders()
        .iter()
        .map(|&n| {
            // Elements of Z_n killed by d are the multiples of n / gcd(n, d).
            let n = BigInt::from(n);
            let step = &n / n.gcd(d);
            step * BigInt::from(rng.gen_range(0..64))
        })
        .collect();
    let free = vec![BigInt::zero(); target.free_rank()];
    target
        .element(free, torsion, vec![Rational::zero(); target.dyadic_rank()])
        .expect("well formed")
}

fn random_element(target: &GroupSpec, rng: &mut impl Rng) -> GroupElement {
    target
        .element(
            (0..target.free_rank())
                .map(|_| BigInt::from(rng.gen_range(-3..=3)))
                .collect(),
            target
                .torsion_orders()
                .iter()
                .map(|_| BigInt::from(rng.gen_range(0..64)))
                .collect(),
            vec![Rational::zero(); target.dyadic_rank()],
        )
        .expect("well formed")
}

/// A seeded soundness instance: balanced gains over a group without odd
/// torsion and a randomly disguised cycle basis.
#[derive(Debug, Clone)]
pub struct FuzzInstance {
    pub seed: u64,
    pub gain_graph: GainGraph,
    pub candidate: CycleBasisCandidate,
}

/// Builds the instance for `seed`.
///
/// The graph has at most 10 vertices and 20 edges, loops and parallel edges
/// allowed. Gains are the coboundary of random potentials. The candidate
/// starts as the fundamental circles and is then mixed by replacing `W_i`
/// with `W_i · P · W_j · P⁻¹` (`P` a tree path, traversed twice), padded with
/// back-and-forth detours, reversed, rotated and shuffled.
pub fn fuzz_instance(seed: u64) -> FuzzInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=10usize);
    let extra = rng.gen_range(0..=20 - (n - 1));
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    edges.extend((0..extra).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
    edges.shuffle(&mut rng);
    for e in edges.iter_mut() {
        if rng.gen_bool(0.5) {
            *e = (e.1, e.0);
        }
    }
    let graph = Multigraph::from_indices(n, &edges).expect("valid graph");

    let spec = random_spec(&mut rng);
    let theta: Vec<GroupElement> = (0..n).map(|_| random_potential(&spec, &mut rng)).collect();
    let gg = GainGraph::coboundary(graph, spec, &theta).expect("connected by construction");

    let g = gg.graph();
    let tree = spanning_tree(g).expect("connected");
    let mut walks = fundamental_circles(g, &tree);
    if walks.len() >= 2 {
        for _ in 0..rng.gen_range(0..=2 * walks.len()) {
            let i = rng.gen_range(0..walks.len());
            let j = (i + rng.gen_range(1..walks.len())) % walks.len();
            let path = tree.path_walk(g, walks[i].start(), walks[j].start());
            walks[i] = walks[i]
                .concat(&path)
                .and_then(|w| w.concat(&walks[j]))
                .and_then(|w| w.concat(&path.reversed()))
                .expect("endpoints match");
        }
    }
    for w in walks.iter_mut() {
        if rng.gen_bool(0.3) {
            *w = pad_with_detour(g, w, &mut rng);
        }
        if rng.gen_bool(0.5) {
            *w = w.reversed();
        }
        if !w.is_empty() {
            let k = rng.gen_range(0..w.len());
            *w = w.rotated(g, k).expect("closed");
        }
    }
    walks.shuffle(&mut rng);
    FuzzInstance {
        seed,
        gain_graph: gg,
        candidate: CycleBasisCandidate::new(walks).expect("closed walks"),
    }
}

fn random_spec(rng: &mut impl Rng) -> GroupSpec {
    match rng.gen_range(0..3) {
        0 => GroupSpec::integers(rng.gen_range(1..=3)),
        1 => GroupSpec::cyclic(1 << rng.gen_range(1..=3)),
        _ => {
            let torsion = (0..rng.gen_range(1..=2))
                .map(|_| 1u64 << rng.gen_range(1..=3))
                .collect();
            GroupSpec::new(rng.gen_range(0..=2), torsion, rng.gen_range(0..=1)).expect("valid")
        }
    }
}

fn random_potential(spec: &GroupSpec, rng: &mut impl Rng) -> GroupElement {
    spec.element(
        (0..spec.free_rank())
            .map(|_| BigInt::from(rng.gen_range(-5..=5)))
            .collect(),
        spec.torsion_orders()
            .iter()
            .map(|_| BigInt::from(rng.gen_range(0..8)))
            .collect(),
        (0..spec.dyadic_rank())
            .map(|_| {
                Rational::new(
                    rng.gen_range(-9..=9).into(),
                    BigInt::from(1) << rng.gen_range(0..4),
                )
            })
            .collect(),
    )
    .expect("valid potential")
}

/// Inserts a step along an edge at some vertex of `w` and immediately
/// steps back, so that edge appears twice more.
fn pad_with_detour(g: &Multigraph, w: &Walk, rng: &mut impl Rng) -> Walk {
    let vertices = w.vertices(g);
    let pos = rng.gen_range(0..vertices.len());
    let v = vertices[pos];
    let incident: Vec<Step> = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, edge)| {
            let mut out = Vec::new();
            if edge.tail == v {
                out.push(Step::forward(e));
            }
            if edge.head == v {
                out.push(Step::backward(e));
            }
            out
        })
        .collect();
    let Some(&s) = incident.choose(rng) else {
        return w.clone();
    };
    let mut steps = w.steps()[..pos].to_vec();
    steps.push(s);
    steps.push(Step {
        edge: s.edge,
        dir: s.dir.flip(),
    });
    steps.extend_from_slice(&w.steps()[pos..]);
    Walk::new(g, w.start(), steps).expect("detour keeps the walk connected")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_examples() {
        let z3 = gate_report(&GroupSpec::integers(3), true);
        assert!(z3.finite_graph_gate && z3.valid());

        let d = gate_report(&GroupSpec::dyadic(1), true);
        assert!(d.finite_graph_gate && !d.no_two_divisible_gate);

        let c3 = gate_report(&GroupSpec::cyclic(3), true);
        assert!(!c3.finite_graph_gate && !c3.no_two_divisible_gate && !c3.valid());
    }

    #[test]
    fn wheel_family() {
        for k in 2..=5 {
            let (gg, cand) = wheel_counterexample(k).unwrap();
            for w in cand.walks() {
                assert!(gg.walk_gain(w).unwrap().is_identity());
            }
            let basis = is_binary_cycle_basis(gg.graph(), &cand).unwrap();
            assert!(basis.is_basis);
            assert_eq!(basis.rank, 2 * k);
            assert_eq!(
                gg.walk_gain(&wheel_rim(&gg)).unwrap(),
                gg.group().generator(0)
            );
            assert!(!gg.is_balanced().balanced);
            let v = binary_cycle_test(&gg, &cand).unwrap();
            assert_eq!(v.outcome, BctOutcome::GateFailedOddTorsion);
        }
        assert_eq!(
            wheel_counterexample(1).unwrap_err(),
            BctError::WheelTooSmall(1)
        );
    }

    #[test]
    fn coboundary_over_z2_is_accepted() {
        let g = wheel(4);
        let z2 = GroupSpec::integers(2);
        let theta: Vec<_> = (0..5)
            .map(|i| z2.element_from_i64(&[i, -2 * i], &[], &[]).unwrap())
            .collect();
        let gg = GainGraph::coboundary(g, z2, &theta).unwrap();
        let tree = spanning_tree(gg.graph()).unwrap();
        let cand = CycleBasisCandidate::new(fundamental_circles(gg.graph(), &tree)).unwrap();
        let v = binary_cycle_test(&gg, &cand).unwrap();
        assert_eq!(v.outcome, BctOutcome::BalancedByTheorem);
        assert_eq!(v.details.justified_by, Some(Gate::FiniteNoOddTorsion));
    }

    #[test]
    fn unbalanced_walk_over_z4() {
        let z4 = GroupSpec::cyclic(4);
        let g = Multigraph::from_indices(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let gains = vec![z4.generator(0), z4.identity(), z4.identity()];
        let gg = GainGraph::new(g, z4, gains).unwrap();
        let tree = spanning_tree(gg.graph()).unwrap();
        let cand = CycleBasisCandidate::new(fundamental_circles(gg.graph(), &tree)).unwrap();
        let v = binary_cycle_test(&gg, &cand).unwrap();
        assert_eq!(v.outcome, BctOutcome::UnbalancedWalk);
        assert_eq!(v.witness.unwrap().0, 0);
    }

    #[test]
    fn dependent_candidate_is_not_a_basis() {
        let z = GroupSpec::integers(1);
        let g = Multigraph::from_indices(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let gg = GainGraph::new(g, z.clone(), vec![z.identity(); 3]).unwrap();
        let c = Walk::new(gg.graph(), 0, vec![Step::forward(0), Step::backward(1)]).unwrap();
        let cand = CycleBasisCandidate::new(vec![c.clone(), c]).unwrap();
        assert_eq!(
            binary_cycle_test(&gg, &cand).unwrap().outcome,
            BctOutcome::NotABasis
        );
    }

    #[test]
    fn dyadic_gains_under_infinite_mode_are_inconclusive() {
        let d = GroupSpec::dyadic(1);
        let g = Multigraph::from_indices(1, &[(0, 0)]).unwrap();
        let gg = GainGraph::new(g, d.clone(), vec![d.identity()]).unwrap();
        let cand = CycleBasisCandidate::new(vec![
            Walk::new(gg.graph(), 0, vec![Step::forward(0)]).unwrap()
        ])
        .unwrap();
        assert_eq!(
            binary_cycle_test(&gg, &cand).unwrap().outcome,
            BctOutcome::BalancedByTheorem
        );
        let z = GroupSpec::integers(1);
        let gz = GainGraph::new(gg.graph().clone(), z.clone(), vec![z.identity()]).unwrap();
        let vz = binary_cycle_test_with(
            &gz,
            &cand,
            BctOptions {
                assume_infinite: true,
            },
        )
        .unwrap();
        assert_eq!(vz.details.justified_by, Some(Gate::NoTwoDivisible));
        let v = binary_cycle_test_with(
            &gg,
            &cand,
            BctOptions {
                assume_infinite: true,
            },
        )
        .unwrap();
        assert_eq!(v.outcome, BctOutcome::Inconclusive);
    }

    #[test]
    fn lemma_trials_hold() {
        for seed in 0..20 {
            let t = lemma_free_abelian_oracle(seed);
            assert!(t.holds(), "{t:?}");
            assert!(t.k_multipliers.iter().all(|m| m != "none"));
        }
    }

    #[test]
    fn lemma_with_l_equal_to_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = IntMatrix::identity(3);
        let target = GroupSpec::new(1, vec![4], 0).unwrap();
        let k = vec![vec![BigInt::from(5), BigInt::from(-1), BigInt::from(2)]];
        let t = lemma_trial(0, &l, &target, &k, &mut rng);
        assert!(t.holds());
        assert_eq!(t.k_multipliers, vec!["1"]);
    }

    #[test]
    fn lemma_needs_full_rank_mod_two() {
        // L = 2A violates the hypothesis; some h killing L is nonzero on A.
        let l = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let target = GroupSpec::cyclic(2);
        let k = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
        ];
        let found = (0..32).any(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let t = lemma_trial(s, &l, &target, &k, &mut rng);
            t.h_vanishes_on_l && !t.h_vanishes_on_k
        });
        assert!(found);
    }

    #[test]
    fn fuzz_instances_are_accepted() {
        for seed in 0..40 {
            let inst = fuzz_instance(seed);
            assert!(inst.gain_graph.is_balanced().balanced);
            let v = binary_cycle_test(&inst.gain_graph, &inst.candidate).unwrap();
            assert_eq!(
                v.outcome,
                BctOutcome::BalancedByTheorem,
                "seed {seed}: {:?}",
                v.details
            );
        }
    }
}
