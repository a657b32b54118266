use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gainforge::bct::{
    binary_cycle_test_with, fuzz_instance, gate_report, wheel_counterexample, BctOptions,
    BctOutcome,
};
use gainforge::gain::{AnyGainGraph, GainGraph, GainGraphJson};
use gainforge::graph::{CandidateJson, CycleBasisCandidate};
use gainforge::group::{GainGroup, RationalVectors};
use gainforge::plgeom::{
    convex_lifting, dual_graph, facet_gain_graph, generation_gate, hex_patch, hex_patch_with_hole,
    lifting_space, lifting_to_obj, maxwell_lifting, rec_dimension, reciprocal_to_obj,
    reciprocal_with, ridge_star_2d, ridge_star_3d, sharp_lifting, two_cell_patch,
    CellComplexRealization, ComplexJson, PlError, ReciprocalOptions,
};
use gainforge::rational::{parse_rational, Rational};
use gainforge::states::{
    propagate_state, state_to_json, Action, RightRegular, ScalarOnLine, StateError,
    TranslationOnVectors,
};
use gainforge::GroupSpec;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "gainforge",
    version,
    about = "Exact balance testing for gain graphs and PL reciprocal diagrams"
)]
struct Cli {
    /// Render the report as an aligned key/value table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Leave timings out of the report so runs are byte-identical.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check balance directly via a spanning tree.
    Balance {
        gain_graph: PathBuf,
        /// Exit with status 1 if the graph is unbalanced.
        #[arg(long)]
        assert_balanced: bool,
    },
    /// Run the binary cycle test on a candidate family of closed walks.
    CycleTest {
        gain_graph: PathBuf,
        walks: PathBuf,
        /// Only accept the gate that is valid for infinite graphs.
        #[arg(long)]
        infinite: bool,
        /// Exit with status 1 unless the verdict is balanced.
        #[arg(long)]
        assert_balanced: bool,
    },
    /// Structure of the subgroup generated by circle gains.
    EssentialGroup { gain_graph: PathBuf },
    /// Propagate a satisfied state from a root vertex.
    States {
        gain_graph: PathBuf,
        #[arg(long, value_enum, default_value = "right-regular")]
        action: ActionArg,
        /// Root vertex id (defaults to the first vertex).
        #[arg(long)]
        root: Option<String>,
        /// Comma-separated value at the root (defaults to the identity, or 1).
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        /// Exit with status 1 if no satisfied state exists.
        #[arg(long)]
        assert_balanced: bool,
    },
    /// Compute a reciprocal diagram of a cell complex.
    Reciprocal {
        complex: PathBuf,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        seed: String,
        /// Write the reciprocal as OBJ line geometry (planar complexes only).
        #[arg(long)]
        obj: Option<PathBuf>,
        /// Write dual.dot and facets.dot into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Proceed even if the generation gate fails.
        #[arg(long)]
        override_gate: bool,
    },
    /// Compute the lifting space and sample liftings of a cell complex.
    Lift {
        complex: PathBuf,
        /// Write the convex (or else sharp) lifting as OBJ (planar complexes only).
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Built-in examples; with --out-dir the input files are written too.
    Demo {
        #[command(subcommand)]
        which: Demo,
        #[arg(long, global = true)]
        out_dir: Option<PathBuf>,
    },
    /// Report which validity gates a group satisfies.
    Gates {
        #[arg(long)]
        group: String,
        #[arg(long)]
        infinite: bool,
    },
    /// Seeded soundness fuzz of the binary cycle test (seed from GAINFORGE_SEED).
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Wheel with 2k rim vertices over Z_(2k-1).
    Wheel {
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Hexagonal patch with the given number of rings.
    Hex {
        #[arg(long, default_value_t = 1)]
        rings: usize,
        /// Remove the central cell.
        #[arg(long)]
        hole: bool,
    },
    /// Three cells around one ridge.
    RidgeStar {
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Two boxes sharing one facet.
    TwoCell {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    RightRegular,
    Translation,
    Scalar,
}

/// What a subcommand produced.
struct Outcome {
    result: Value,
    artifacts: Vec<PathBuf>,
    /// Verdict-level failure: exit status 1.
    failed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            artifacts: Vec::new(),
            failed: false,
        }
    }
}

struct Inputs(Vec<(PathBuf, String)>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, String> {
        let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.0
            .push((path.to_path_buf(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| format!("{}: not UTF-8", path.display()))
    }

    fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, String> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| format!("{}: malformed JSON: {e}", path.display()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let name = command_name(&cli.command);
    let outcome = match run(&cli.command, &mut inputs) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("gainforge {name}: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(name));
    report.insert(
        "inputs".into(),
        Value::Array(
            inputs
                .0
                .iter()
                .map(|(p, d)| json!({"path": p.display().to_string(), "sha256": d}))
                .collect(),
        ),
    );
    report.insert("result".into(), outcome.result);
    report.insert(
        "artifacts".into(),
        Value::Array(
            outcome
                .artifacts
                .iter()
                .map(|p| json!(p.display().to_string()))
                .collect(),
        ),
    );
    if !cli.no_timings {
        report.insert(
            "timings".into(),
            json!({"total_ms": start.elapsed().as_secs_f64() * 1000.0}),
        );
    }
    let report = Value::Object(report);
    if cli.pretty {
        print!("{}", render_table(&report));
    } else {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Balance { .. } => "balance".into(),
        Command::CycleTest { .. } => "cycle-test".into(),
        Command::EssentialGroup { .. } => "essential-group".into(),
        Command::States { .. } => "states".into(),
        Command::Reciprocal { .. } => "reciprocal".into(),
        Command::Lift { .. } => "lift".into(),
        Command::Demo { which, .. } => match which {
            Demo::Wheel { .. } => "demo wheel".into(),
            Demo::Hex { .. } => "demo hex".into(),
            Demo::RidgeStar { .. } => "demo ridge-star".into(),
            Demo::TwoCell { .. } => "demo two-cell".into(),
        },
        Command::Gates { .. } => "gates".into(),
        Command::Fuzz { .. } => "fuzz".into(),
    }
}

fn run(c: &Command, inputs: &mut Inputs) -> Result<Outcome, String> {
    match c {
        Command::Balance {
            gain_graph,
            assert_balanced,
        } => {
            let gg = load_gain_graph(inputs, gain_graph)?;
            let result = balance_json(&gg);
            let balanced = result["balanced"] == json!(true);
            Ok(Outcome {
                failed: *assert_balanced && !balanced,
                ..Outcome::ok(result)
            })
        }
        Command::CycleTest {
            gain_graph,
            walks,
            infinite,
            assert_balanced,
        } => {
            let gg = match load_gain_graph(inputs, gain_graph)? {
                AnyGainGraph::Spec(gg) => gg,
                _ => return Err("the cycle test needs a group given by a spec string".into()),
            };
            let cj: CandidateJson = inputs.json(walks)?;
            let cand = CycleBasisCandidate::from_json(gg.graph(), &cj)
                .map_err(|e| format!("{}: {e}", walks.display()))?;
            let result = cycle_test_json(&gg, &cand, *infinite)?;
            let balanced = result["outcome"] == json!(BctOutcome::BalancedByTheorem);
            Ok(Outcome {
                failed: *assert_balanced && !balanced,
                ..Outcome::ok(result)
            })
        }
        Command::EssentialGroup { gain_graph } => match load_gain_graph(inputs, gain_graph)? {
            AnyGainGraph::Spec(gg) => Ok(Outcome::ok(json!({
                "group": gg.group().to_string(),
                "essential_gain_group": gg.essential_gain_group().to_json(),
                "circle_gains": gg.circle_gains().iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            }))),
            _ => Err("essential-group needs a group given by a spec string".into()),
        },
        Command::States {
            gain_graph,
            action,
            root,
            seed,
            assert_balanced,
        } => {
            let gg = load_gain_graph(inputs, gain_graph)?;
            let root = match root {
                None => 0,
                Some(r) => gg.graph().vertex(r).map_err(|e| e.to_string())?,
            };
            let result = states_json(&gg, *action, root, seed.as_deref())?;
            let exists = result["exists"] == json!(true);
            Ok(Outcome {
                failed: *assert_balanced && !exists,
                ..Outcome::ok(result)
            })
        }
        Command::Reciprocal {
            complex,
            seed,
            obj,
            dot,
            override_gate,
        } => {
            let m = load_complex(inputs, complex)?;
            let seed = parse_rational(seed).map_err(|e| format!("bad seed {seed:?}: {e}"))?;
            let mut out = reciprocal_outcome(&m, seed, *override_gate, obj.as_deref())?;
            if let Some(dir) = dot {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                let dual = dir.join("dual.dot");
                write(&dual, &dual_graph(&m).to_dot("dual", |_| None))?;
                out.artifacts.push(dual);
                if let Ok(phi) = facet_gain_graph(&m) {
                    let facets = dir.join("facets.dot");
                    write(&facets, &phi.gains.to_dot("facets"))?;
                    out.artifacts.push(facets);
                }
            }
            Ok(out)
        }
        Command::Lift { complex, obj } => {
            let m = load_complex(inputs, complex)?;
            lift_outcome(&m, obj.as_deref())
        }
        Command::Demo { which, out_dir } => demo(which, out_dir.as_deref()),
        Command::Gates { group, infinite } => {
            let spec: GroupSpec = group
                .parse()
                .map_err(|e| format!("bad group spec {group:?}: {e}"))?;
            Ok(Outcome::ok(json!({
                "group": spec.to_string(),
                "gates": gate_report(&spec, !infinite),
                "valid": gate_report(&spec, !infinite).valid(),
            })))
        }
        Command::Fuzz { trials } => {
            let seed = match std::env::var("GAINFORGE_SEED") {
                Ok(s) => s
                    .parse::<u64>()
                    .map_err(|_| format!("GAINFORGE_SEED must be an integer, got {s:?}"))?,
                Err(_) => 0,
            };
            let mut agree = 0;
            let mut failures = Vec::new();
            for t in 0..*trials {
                let inst = fuzz_instance(seed.wrapping_add(t));
                let verdict = binary_cycle_test_with(
                    &inst.gain_graph,
                    &inst.candidate,
                    BctOptions::default(),
                )
                .map_err(|e| e.to_string())?;
                let ok = verdict.outcome == BctOutcome::BalancedByTheorem
                    && inst.gain_graph.is_balanced().balanced;
                if ok {
                    agree += 1;
                } else {
                    failures.push(inst.seed);
                }
            }
            Ok(Outcome {
                failed: !failures.is_empty(),
                ..Outcome::ok(json!({
                    "seed": seed,
                    "trials": trials,
                    "balanced_by_theorem": agree,
                    "failing_seeds": failures,
                }))
            })
        }
    }
}

fn load_gain_graph(inputs: &mut Inputs, path: &Path) -> Result<AnyGainGraph, String> {
    let json: GainGraphJson = inputs.json(path)?;
    AnyGainGraph::from_json(&json).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_complex(inputs: &mut Inputs, path: &Path) -> Result<CellComplexRealization, String> {
    let json: ComplexJson = inputs.json(path)?;
    CellComplexRealization::from_json(&json).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn balance_json(gg: &AnyGainGraph) -> Value {
    let mut v = match gg {
        AnyGainGraph::Spec(g) => g.is_balanced().to_json(g),
        AnyGainGraph::Vectors(g) => g.is_balanced().to_json(g),
        AnyGainGraph::Scalars(g) => g.is_balanced().to_json(g),
    };
    let group = match gg {
        AnyGainGraph::Spec(g) => g.group().describe(),
        AnyGainGraph::Vectors(g) => g.group().describe(),
        AnyGainGraph::Scalars(g) => g.group().describe(),
    };
    v["group"] = json!(group);
    v
}

fn cycle_test_json(
    gg: &GainGraph,
    cand: &CycleBasisCandidate,
    infinite: bool,
) -> Result<Value, String> {
    let verdict = binary_cycle_test_with(
        gg,
        cand,
        BctOptions {
            assume_infinite: infinite,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(verdict.to_json(gg))
}

/// Splits `"a,b,c"` into JSON scalars: integers stay numbers, anything
/// else is kept as a string (for dyadic entries like `"1/2"`).
fn seed_values(seed: &str) -> Value {
    Value::Array(
        seed.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i64>()
                    .map(Value::from)
                    .unwrap_or_else(|_| json!(s))
            })
            .collect(),
    )
}

fn parse_rationals(seed: &str) -> Result<Vec<Rational>, String> {
    seed.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| format!("bad seed entry {s:?}: {e}")))
        .collect()
}

fn states_json(
    gg: &AnyGainGraph,
    action: ActionArg,
    root: usize,
    seed: Option<&str>,
) -> Result<Value, String> {
    match (action, gg) {
        (ActionArg::RightRegular, AnyGainGraph::Spec(g)) => {
            let seed = match seed {
                None => g.group().identity(),
                Some(s) => g
                    .group()
                    .elem_from_json(&seed_values(s))
                    .map_err(|e| format!("bad seed: {e}"))?,
            };
            state_result(g, &RightRegular, root, seed)
        }
        (ActionArg::RightRegular, AnyGainGraph::Vectors(g)) => {
            let seed = match seed {
                None => g.group().identity(),
                Some(s) => parse_rationals(s)?,
            };
            state_result(g, &RightRegular, root, seed)
        }
        (ActionArg::RightRegular, AnyGainGraph::Scalars(g)) => {
            let seed = single_rational(seed)?;
            state_result(g, &RightRegular, root, seed)
        }
        (ActionArg::Translation, AnyGainGraph::Vectors(g)) => translation(g, root, seed),
        (ActionArg::Translation, AnyGainGraph::Spec(g)) => {
            let g = g
                .to_rational_vectors()
                .ok_or("translation needs a torsion-free group")?;
            translation(&g, root, seed)
        }
        (ActionArg::Scalar, AnyGainGraph::Scalars(g)) => {
            let seed = single_rational(seed)?;
            state_result(g, &ScalarOnLine, root, seed)
        }
        _ => Err("the chosen action does not apply to this group".into()),
    }
}

fn single_rational(seed: Option<&str>) -> Result<Rational, String> {
    match seed {
        None => Ok(Rational::from_integer(1.into())),
        Some(s) => parse_rational(s.trim()).map_err(|e| format!("bad seed {s:?}: {e}")),
    }
}

fn translation(
    g: &GainGraph<RationalVectors>,
    root: usize,
    seed: Option<&str>,
) -> Result<Value, String> {
    let act = TranslationOnVectors { dim: g.group().dim };
    let seed = match seed {
        None => g.group().identity(),
        Some(s) => parse_rationals(s)?,
    };
    state_result(g, &act, root, seed)
}

fn state_result<G: GainGroup, A: Action<G>>(
    g: &GainGraph<G>,
    act: &A,
    root: usize,
    seed: A::Quality,
) -> Result<Value, String> {
    let base = json!({
        "action": act.spec(),
        "root": g.graph().vertex_label(root),
    });
    let mut base = base.as_object().cloned().expect("object");
    match propagate_state(g, act, root, seed) {
        Ok(s) => {
            base.insert("exists".into(), json!(true));
            base.insert("state".into(), state_to_json(g, act, &s));
        }
        Err(StateError::UnbalancedInput { witness, gain, .. }) => {
            base.insert("exists".into(), json!(false));
            base.insert(
                "witness".into(),
                serde_json::to_value(witness.to_json(g.graph())).expect("serializable"),
            );
            base.insert("witness_gain".into(), json!(gain));
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(Value::Object(base))
}

/// Geometric errors that describe the input's geometry rather than a broken
/// file: the pipeline reports them and exits with status 1.
fn verdict_level(e: &PlError) -> bool {
    matches!(
        e,
        PlError::GenerationGateFailed { .. }
            | PlError::UnbalancedFacetGains(_)
            | PlError::RidgeBalanceViolation { .. }
            | PlError::UnbalancedDualGains(_)
            | PlError::NoSharpLifting(_)
            | PlError::SharpSearchExhausted(_)
            | PlError::DisconnectedFacetGraph
    )
}

fn pl_failure(e: PlError) -> Result<Value, String> {
    if verdict_level(&e) {
        Ok(json!({"status": "failed", "error": e.to_string()}))
    } else {
        Err(e.to_string())
    }
}

fn reciprocal_outcome(
    m: &CellComplexRealization,
    seed: Rational,
    override_gate: bool,
    obj: Option<&Path>,
) -> Result<Outcome, String> {
    let gate = generation_gate(m).map_err(|e| e.to_string())?;
    let mut result = json!({
        "dim": m.dim(),
        "cells": m.cell_count(),
        "facets": m.facets().len(),
        "generation_gate": gate,
        "rec_dimension": rec_dimension(m),
    });
    let opts = ReciprocalOptions {
        seed,
        override_gate,
        ..ReciprocalOptions::default()
    };
    let mut artifacts = Vec::new();
    let failed = match reciprocal_with(m, &opts) {
        Ok(r) => {
            result["status"] = json!("ok");
            result["non_degenerate"] = json!(r.is_non_degenerate(m));
            result["orthogonal"] = json!(r.is_orthogonal(m));
            result["reciprocal"] = r.to_json(m);
            if let Some(path) = obj {
                write(path, &reciprocal_to_obj(m, &r).map_err(|e| e.to_string())?)?;
                artifacts.push(path.to_path_buf());
            }
            false
        }
        Err(e) => {
            let v = pl_failure(e)?;
            result["status"] = v["status"].clone();
            result["error"] = v["error"].clone();
            true
        }
    };
    Ok(Outcome {
        result,
        artifacts,
        failed,
    })
}

fn lift_outcome(m: &CellComplexRealization, obj: Option<&Path>) -> Result<Outcome, String> {
    let space = lifting_space(m);
    let mut result = json!({
        "dim": m.dim(),
        "dimension": space.dimension,
        "rec_dimension": rec_dimension(m),
        "basis": space.basis.iter().map(|l| l.to_json(m)).collect::<Vec<_>>(),
    });
    let sharp = sharp_lifting(m);
    let convex = convex_lifting(m);
    let maxwell =
        reciprocal_with(m, &ReciprocalOptions::default()).and_then(|r| maxwell_lifting(m, &r));
    result["maxwell_lifting"] = match &maxwell {
        Ok(l) => json!({"valid": l.is_valid(m), "lifting": l.to_json(m)}),
        Err(e) => pl_failure(e.clone())?,
    };
    result["sharp_lifting"] = match &sharp {
        Ok(l) => l.to_json(m),
        Err(e) => pl_failure(e.clone())?,
    };
    result["convex_lifting"] = match &convex {
        Ok(l) => l.to_json(m),
        Err(e) => pl_failure(e.clone())?,
    };
    let mut artifacts = Vec::new();
    if let Some(path) = obj {
        let l = convex
            .as_ref()
            .or(sharp.as_ref())
            .map_err(|_| "no lifting to export".to_string())?;
        write(path, &lifting_to_obj(m, l).map_err(|e| e.to_string())?)?;
        artifacts.push(path.to_path_buf());
    }
    Ok(Outcome {
        result,
        artifacts,
        failed: sharp.is_err(),
    })
}

fn demo(which: &Demo, out_dir: Option<&Path>) -> Result<Outcome, String> {
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let mut artifacts = Vec::new();
    let mut emit = |name: String, value: &Value| -> Result<(), String> {
        if let Some(dir) = out_dir {
            let path = dir.join(name);
            write(
                &path,
                &serde_json::to_string_pretty(value).expect("serializable"),
            )?;
            artifacts.push(path);
        }
        Ok(())
    };
    let result = match which {
        Demo::Wheel { k } => {
            let (gg, cand) = wheel_counterexample(*k).map_err(|e| e.to_string())?;
            let gg_json = serde_json::to_value(gg.to_json()).expect("serializable");
            let cand_json = serde_json::to_value(cand.to_json(gg.graph())).expect("serializable");
            emit(format!("wheel_k{k}.json"), &gg_json)?;
            emit(format!("wheel_k{k}_walks.json"), &cand_json)?;
            json!({
                "gain_graph": gg_json,
                "candidate": cand_json,
                "cycle_test": cycle_test_json(&gg, &cand, false)?,
                "balance": balance_json(&AnyGainGraph::Spec(gg)),
            })
        }
        Demo::Hex { rings, hole } => {
            let m = if *hole {
                hex_patch_with_hole(*rings)
            } else {
                hex_patch(*rings)
            };
            let name = if *hole {
                format!("hex_r{rings}_hole.json")
            } else {
                format!("hex_r{rings}.json")
            };
            complex_demo(&m, name, &mut emit)?
        }
        Demo::RidgeStar { dim } => {
            let m = match dim {
                2 => ridge_star_2d(),
                3 => ridge_star_3d(),
                _ => {
                    return Err(format!(
                        "ridge star is available in dimension 2 or 3, not {dim}"
                    ))
                }
            };
            complex_demo(&m, format!("ridge_star_{dim}d.json"), &mut emit)?
        }
        Demo::TwoCell { dim } => {
            if *dim < 2 {
                return Err(format!("dimension must be at least 2, got {dim}"));
            }
            complex_demo(
                &two_cell_patch(*dim),
                format!("two_cell_{dim}d.json"),
                &mut emit,
            )?
        }
    };
    Ok(Outcome {
        result,
        artifacts,
        failed: false,
    })
}

fn complex_demo(
    m: &CellComplexRealization,
    name: String,
    emit: &mut impl FnMut(String, &Value) -> Result<(), String>,
) -> Result<Value, String> {
    let complex = serde_json::to_value(m.to_json()).expect("serializable");
    emit(name, &complex)?;
    Ok(json!({
        "complex": complex,
        "reciprocal": reciprocal_outcome(m, Rational::from_integer(1.into()), false, None)?.result,
        "lift": lift_outcome(m, None)?.result,
    }))
}

/// Flattens a JSON value into `path  value` lines.
fn render_table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, x, rows);
                }
            }
            Value::Array(items)
                if !items.is_empty() && items.iter().any(|x| x.is_object() || x.is_array()) =>
            {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, rows);
                }
            }
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, x)| format!("{k:<width$}  {x}\n"))
        .collect()
}
