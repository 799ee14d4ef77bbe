//! `hda`: load higher-dimensional automata from JSON and run the analyses.
//!
//! Every invocation prints one JSON report whose `result` field decides the
//! exit status: `true` → 0, `false`/`"undefined"` → 1, `"error"` → 2,
//! `"inconclusive"`/`"cap-exceeded"` → 3.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use hda::bisim::{
    hp_bisimilar, hp_oracle, labeled_hp_bisimilar, open_map_check, Decision, LABELED_JUSTIFICATION,
    UNLABELED_JUSTIFICATION,
};
use hda::cubes::{torus, EventSet, Hda, LabeledHda, Morphism};
use hda::model::{self, Model, ModelFile};
use hda::paths::{
    adjacency, are_homotopic, enumerate_pointed_paths, fan_bound_doubled, fan_shape, is_fan_shaped,
    is_path_object, t_measure, CubePath, HomotopyVerdict, DEFAULT_CAP,
};
use hda::random::{random_hda, rng, RandomConfig};
use hda::unfold::{is_tree, torus_unfolding, unfold};
use hda::HdaError;

const DEFAULT_DEPTH: usize = 8;

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Parser)]
#[command(
    name = "hda",
    version,
    about = "Analyses of higher-dimensional automata: paths, homotopy, unfoldings, bisimilarity",
    after_help = "Environment:\n  HDA_CAP    default for --cap (homotopy closure size bound, default 100000)\n  \
                  HDA_DEPTH  default for --depth (unfolding bound; acyclic inputs default to their full depth, \
                  others to 8)\n\nExit status: 0 holds, 1 fails, 2 input error, 3 bound reached."
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Maximum number of paths in one homotopy closure.
    #[arg(long, global = true, env = "HDA_CAP", default_value_t = DEFAULT_CAP, value_parser = positive)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against the precubical identities and labeling rules.
    Validate { file: PathBuf },
    /// List the cubes reachable from the initial vertex, with witness paths.
    Reachable { file: PathBuf },
    /// Enumerate pointed cube paths.
    Paths {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        max_len: usize,
    },
    /// Decide whether two cube paths are homotopic.
    Homotopic {
        file: PathBuf,
        /// Comma-separated cube ids; give exactly two.
        #[arg(long = "path", required = true, num_args = 1)]
        paths: Vec<String>,
    },
    /// Rewrite a cube path into a homotopic fan-shaped one.
    Fan {
        file: PathBuf,
        #[arg(long)]
        path: String,
    },
    /// Decide whether the model is a precubical path object.
    PathObject {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Build the unfolding up to a depth.
    Unfold {
        file: PathBuf,
        #[arg(long, env = "HDA_DEPTH", value_parser = positive)]
        depth: Option<usize>,
        /// Write the tree as a model file; a `.sidecar.json` next to it maps
        /// node ids to base ids.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every cube is reached by a single homotopy class.
    IsTree {
        file: PathBuf,
        #[arg(long, env = "HDA_DEPTH", value_parser = positive)]
        depth: Option<usize>,
    },
    /// Check that a map between two models is an open morphism.
    OpenMap {
        source: PathBuf,
        target: PathBuf,
        /// JSON object from source ids to target ids.
        #[arg(long)]
        map: PathBuf,
    },
    /// Decide bisimilarity by the greatest-fixpoint procedure.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        labeled: bool,
    },
    /// History-preserving bisimilarity (same procedure, with its justification).
    HpBisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        labeled: bool,
    },
    /// Compare the unfoldings directly (bounded, for cross-checking).
    Oracle {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, env = "HDA_DEPTH", value_parser = positive)]
        depth: Option<usize>,
        #[arg(long)]
        labeled: bool,
    },
    /// Emit the labeling torus over some events, or its closed-form unfolding.
    Torus {
        /// Comma-separated event names (may be empty).
        #[arg(long, default_value = "")]
        events: String,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        #[arg(long, value_parser = positive)]
        unfold_depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random model.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        max_cubes: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        merges: usize,
        #[arg(long)]
        acyclic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Model, HdaError> {
    model::load(path)
}

fn parse_path(h: &Hda, list: &str) -> Result<CubePath, HdaError> {
    CubePath::parse(h.space(), list)
}

/// Full depth for acyclic inputs, otherwise the default.
fn depth_for(explicit: Option<usize>, models: &[&Hda]) -> usize {
    explicit.unwrap_or_else(|| {
        models
            .iter()
            .map(|h| h.longest_pointed_path())
            .try_fold(1, |acc, d| d.map(|d| acc.max(d)))
            .unwrap_or(DEFAULT_DEPTH)
    })
}

fn emit_model(file: ModelFile, out: Option<&Path>, mut report: Map<String, Value>) -> Result<Value, HdaError> {
    match out {
        Some(p) => {
            std::fs::write(p, file.to_json())?;
            report.insert("written".into(), json!(p));
        }
        None => {
            report.insert("model".into(), serde_json::to_value(&file)?);
        }
    }
    report.insert("result".into(), json!(true));
    Ok(Value::Object(report))
}

fn labeled_pair(l: &Model, r: &Model) -> Result<(LabeledHda, LabeledHda), HdaError> {
    Ok((l.labeled()?, r.labeled()?))
}

fn run(cli: &Cli) -> Result<Value, HdaError> {
    let cap = cli.cap;
    Ok(match &cli.command {
        Command::Validate { file } => {
            let parsed = ModelFile::read(file)?;
            match parsed.build() {
                Ok(m) => json!({
                    "result": true,
                    "cubes": m.hda.space().len(),
                    "by_dimension": m.hda.space().count_by_dim(),
                    "initial": m.hda.space().name(m.hda.initial()),
                    "labeled": m.labeling.is_some(),
                }),
                Err(report) => json!({ "result": false, "violations": report.violations }),
            }
        }
        Command::Reachable { file } => {
            let m = load(file)?;
            let s = m.hda.space();
            let r = m.hda.reachable();
            let witnesses: BTreeMap<&str, String> = r
                .iter()
                .map(|c| {
                    let w = r.witness(c).expect("reachable");
                    let names: Vec<&str> = w.iter().map(|&x| s.name(x)).collect();
                    (s.name(c), format!("({})", names.join(",")))
                })
                .collect();
            let unreachable: Vec<&str> = s.cubes().filter(|&c| !r.contains(c)).map(|c| s.name(c)).collect();
            json!({
                "result": true,
                "count": r.count(),
                "reachable": witnesses.keys().collect::<Vec<_>>(),
                "unreachable": unreachable,
                "witnesses": witnesses,
            })
        }
        Command::Paths { file, max_len } => {
            let m = load(file)?;
            let paths: Vec<String> = enumerate_pointed_paths(&m.hda, *max_len)
                .iter()
                .map(|p| p.render(m.hda.space()))
                .collect();
            json!({ "result": true, "count": paths.len(), "paths": paths })
        }
        Command::Homotopic { file, paths } => {
            if paths.len() != 2 {
                return Err(usage(&format!("expected exactly two --path options, got {}", paths.len())));
            }
            let m = load(file)?;
            let s = m.hda.space();
            let (a, b) = (parse_path(&m.hda, &paths[0])?, parse_path(&m.hda, &paths[1])?);
            let verdict = are_homotopic(s, &a, &b, cap);
            let result = match verdict {
                HomotopyVerdict::Homotopic => json!(true),
                HomotopyVerdict::NotHomotopic => json!(false),
                HomotopyVerdict::Exhausted { .. } => json!("cap-exceeded"),
            };
            json!({
                "result": result,
                "verdict": verdict,
                "adjacency": adjacency(s, &a, &b),
                "cap": cap,
            })
        }
        Command::Fan { file, path } => {
            let m = load(file)?;
            let s = m.hda.space();
            let p = parse_path(&m.hda, path)?;
            let f = fan_shape(s, &p)?;
            json!({
                "result": true,
                "input": p.render(s),
                "input_fan_shaped": is_fan_shaped(s, &p),
                "input_t": t_measure(s, &p),
                "least_t": fan_bound_doubled(s, &p) / 2,
                "fan_shaped": f.result.render(s),
                "t": t_measure(s, &f.result),
                "lowering_steps": f.iterations(),
                "trace": f.trace.iter().map(|r| json!({
                    "kind": r.kind,
                    "position": r.position,
                    "path": r.path.render(s),
                })).collect::<Vec<_>>(),
            })
        }
        Command::PathObject { file, limit } => {
            let m = load(file)?;
            match is_path_object(m.hda.space(), *limit) {
                Ok(rep) => json!({ "result": true, "representation": rep.rep.render(m.hda.space()) }),
                Err(reason) => json!({ "result": false, "rejection": reason }),
            }
        }
        Command::Unfold { file, depth, out } => {
            let m = load(file)?;
            let depth = depth_for(*depth, &[&m.hda]);
            let u = unfold(&m.hda, depth, cap)?;
            let ts = u.tree.space();
            let mut report = json!({
                "result": true,
                "depth": depth,
                "nodes": ts.len(),
                "by_dimension": ts.count_by_dim(),
                "complete": u.is_complete(),
                "frontier": u.frontier().map(|t| ts.name(t)).collect::<Vec<_>>(),
            });
            let labels = m.labeling.as_ref().map(|l| u.pull_back(l));
            let tree_file = ModelFile::from_hda(&u.tree, labels.as_ref());
            match out {
                Some(p) => {
                    let sidecar = sidecar_path(p);
                    std::fs::write(p, tree_file.to_json())?;
                    std::fs::write(&sidecar, serde_json::to_string_pretty(&u.sidecar())?)?;
                    report["written"] = json!(p);
                    report["sidecar"] = json!(sidecar);
                }
                None => {
                    report["model"] = serde_json::to_value(&tree_file)?;
                    report["projection"] = serde_json::to_value(u.sidecar())?;
                }
            }
            report
        }
        Command::IsTree { file, depth } => {
            let m = load(file)?;
            let depth = depth_for(*depth, &[&m.hda]);
            let t = is_tree(&m.hda, depth, cap)?;
            let mut v = serde_json::to_value(&t)?;
            v["result"] = json!(t.is_tree);
            v
        }
        Command::OpenMap { source, target, map } => {
            let (x, y) = (load(source)?, load(target)?);
            let names: BTreeMap<String, String> = serde_json::from_str(&std::fs::read_to_string(map)?)?;
            let f = Morphism::from_names(&x.hda, &y.hda, &names, true)?;
            let r = open_map_check(&f);
            let mut v = serde_json::to_value(&r)?;
            v["result"] = json!(r.open);
            v
        }
        Command::Bisim { left, right, labeled } | Command::HpBisim { left, right, labeled } => {
            let (l, r) = (load(left)?, load(right)?);
            let decision = if *labeled {
                let (lx, ly) = labeled_pair(&l, &r)?;
                let (f, just) = labeled_hp_bisimilar(&lx, &ly)?;
                Decision::from_fixpoint(&l.hda, &r.hda, &f, just)
            } else {
                let (f, just) = hp_bisimilar(&l.hda, &r.hda);
                Decision::from_fixpoint(&l.hda, &r.hda, &f, just)
            };
            let mut v = serde_json::to_value(&decision)?;
            if matches!(cli.command, Command::Bisim { .. }) {
                // plain bisimilarity: just the fixpoint itself
                v["justification"] = json!(if *labeled {
                    "greatest face-closed zig-zag relation on cubes with equal label tuples"
                } else {
                    "greatest face-closed zig-zag relation on cubes"
                });
            } else {
                v["justification"] = json!(if *labeled { LABELED_JUSTIFICATION } else { UNLABELED_JUSTIFICATION });
            }
            v
        }
        Command::Oracle {
            left,
            right,
            depth,
            labeled,
        } => {
            let (l, r) = (load(left)?, load(right)?);
            let depth = depth_for(*depth, &[&l.hda, &r.hda]);
            let outcome = if *labeled {
                let (lx, ly) = labeled_pair(&l, &r)?;
                hp_oracle(&l.hda, &r.hda, depth, Some((&lx.labeling, &ly.labeling)), cap)?
            } else {
                hp_oracle(&l.hda, &r.hda, depth, None, cap)?
            };
            let mut v = serde_json::to_value(&outcome)?;
            v["result"] = serde_json::to_value(outcome.verdict())?;
            v
        }
        Command::Torus {
            events,
            maxdim,
            unfold_depth,
            out,
        } => {
            let names: Vec<&str> = events.split(',').map(str::trim).filter(|e| !e.is_empty()).collect();
            let set = EventSet::new(names).map_err(HdaError::Invalid)?;
            let (labeled, kind) = match unfold_depth {
                Some(d) => (torus_unfolding(&set, *d), "closed-form unfolding"),
                None => (torus(&set, *maxdim), "torus"),
            };
            let mut report = Map::new();
            report.insert("kind".into(), json!(kind));
            report.insert("by_dimension".into(), json!(labeled.hda.space().count_by_dim()));
            emit_model(Model::from(labeled).to_file(), out.as_deref(), report)?
        }
        Command::Random {
            seed,
            max_cubes,
            max_dim,
            merges,
            acyclic,
            out,
        } => {
            let cfg = RandomConfig {
                max_cubes: (*max_cubes).max(1),
                max_dim: *max_dim,
                merges: *merges,
                acyclic: *acyclic,
                fill: false,
            };
            let h = random_hda(&mut rng(*seed), &cfg);
            let mut report = Map::new();
            report.insert("seed".into(), json!(seed));
            report.insert("by_dimension".into(), json!(h.space().count_by_dim()));
            emit_model(ModelFile::from_hda(&h, None), out.as_deref(), report)?
        }
    })
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.sidecar.json"))
}

fn usage(message: &str) -> HdaError {
    HdaError::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, message.to_string()))
}

/// Turns a failure into a report.
fn failure(e: &HdaError) -> Value {
    let (result, kind) = match e {
        HdaError::CapExceeded { .. } | HdaError::DepthExceeded { .. } => ("cap-exceeded", "cap-exceeded"),
        HdaError::AmbiguousLowerFace { .. } => ("undefined", "ambiguous-lower-face"),
        HdaError::Invalid(_) => ("error", "invalid-model"),
        HdaError::Json(_) => ("error", "malformed-json"),
        HdaError::Io(io) if io.kind() == std::io::ErrorKind::InvalidInput => ("error", "usage"),
        HdaError::Io(_) => ("error", "io"),
        _ => ("error", "input"),
    };
    let mut err = json!({ "kind": kind, "message": e.to_string() });
    if let HdaError::Invalid(report) = e {
        err["violations"] = json!(report.violations);
    }
    json!({ "result": result, "error": err })
}

fn exit_code(report: &Value) -> u8 {
    match &report["result"] {
        Value::Bool(true) => 0,
        Value::Bool(false) => 1,
        Value::String(s) if s == "undefined" => 1,
        Value::String(s) if s == "inconclusive" || s == "cap-exceeded" => 3,
        _ => 2,
    }
}

fn render_pretty(report: &Value) -> String {
    let Value::Object(map) = report else {
        return report.to_string();
    };
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort_by_key(|k| (k.as_str() != "result", k.as_str()));
    let mut out = String::new();
    for k in keys {
        let v = &map[k];
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => items
                .iter()
                .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_owned))
                .collect::<Vec<_>>()
                .join(", "),
            Value::Object(_) | Value::Array(_) => serde_json::to_string_pretty(v).unwrap_or_default(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k}: {text}\n"));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli).unwrap_or_else(|e| failure(&e));
    if cli.pretty {
        print!("{}", render_pretty(&report));
    } else {
        println!("{report}");
    }
    ExitCode::from(exit_code(&report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_result() {
        let code = |v: Value| exit_code(&json!({ "result": v }));
        assert_eq!(code(json!(true)), 0);
        assert_eq!(code(json!(false)), 1);
        assert_eq!(code(json!("undefined")), 1);
        assert_eq!(code(json!("error")), 2);
        assert_eq!(code(json!("inconclusive")), 3);
        assert_eq!(code(json!("cap-exceeded")), 3);
    }

    #[test]
    fn sidecar_sits_next_to_output() {
        assert_eq!(sidecar_path(Path::new("/x/tree.json")), PathBuf::from("/x/tree.sidecar.json"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
