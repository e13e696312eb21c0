mod exit;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boundary::{compute_boundary, DecoratedBoundary};
use clap::{Parser, Subcommand, ValueEnum};
use coupling::{
    canonical_h, couple, first_return_oracle, present_free_by_cyclic, CouplingConfig,
    FreeByCyclicPresentation, Gluing, ThetaComplex, DEFAULT_DEPTH,
};
use ep_model::{unroll, validate, EdgeKind, EndPeriodic, Presentation, Sign};
use folding::{certify_homotopy_equivalence, fold_decompose_end_periodic, FoldSequence};
use graph_core::{to_dot, DotEdgeStyle, FiniteGraph, GraphMap, Id, SignedEdge};
use homotopy::{boundary_collapse, build_end_invariant_tree, homotopy_inverse};
use serde::Deserialize;
use serde_json::json;

use exit::{Exit, Stage, INCOMPATIBLE, NOT_HE, ORACLE_MISMATCH, VALIDATION};

/// End-periodic graph maps, their homotopy inverses and couplings, and the
/// free-by-cyclic groups they produce.
#[derive(Parser)]
#[command(name = "epcouple", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation and print its ends, orbits and period.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List blocks −N..N of the unrolled graph.
    Unroll {
        file: PathBuf,
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The decorated boundary graph on one side.
    Boundary {
        file: PathBuf,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Fold the map and certify it is a homotopy equivalence.
    Fold {
        #[arg(required_unless_present = "finite")]
        file: Option<PathBuf>,
        /// Fold a finite graph map instead.
        #[arg(long, value_name = "MAPFILE")]
        finite: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write a homotopy inverse.
    Invert {
        file: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Write a boundary-collapsed representative.
    Collapse {
        file: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Glue two maps along their boundaries and write Θ with its first
    /// return map.
    Couple {
        a: PathBuf,
        b: PathBuf,
        /// Boundary identification as JSON.
        #[arg(long, conflicts_with = "canonical")]
        h: Option<PathBuf>,
        /// Use the canonical identification; B must be the inverse of A.
        #[arg(long)]
        canonical: bool,
        #[arg(short = 'm')]
        cutoff: Option<u32>,
        #[arg(short = 'o')]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the free-by-cyclic presentation of a coupling.
    Present {
        theta: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the first return map by following the flow.
    OracleCheck {
        theta: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Collapse, invert, couple and present in one go.
    Embed {
        file: PathBuf,
        #[arg(short = 'm')]
        cutoff: Option<u32>,
        /// Directory for the intermediate files and certificates.
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Render a derived object.
    Inspect {
        file: PathBuf,
        what: Inspect,
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+")]
        sign: Sign,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Inspect {
    Blocks,
    Boundary,
    Tree,
    Folds,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "attracting" => Ok(Sign::Attracting),
        "-" | "repelling" => Ok(Sign::Repelling),
        _ => Err(format!("expected + or -, got `{s}`")),
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::new("read", VALIDATION, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).stage("write")
}

fn load(path: &Path) -> Result<EndPeriodic, Exit> {
    EndPeriodic::from_json(&read(path)?).stage("validate")
}

fn load_theta(path: &Path) -> Result<ThetaComplex, Exit> {
    ThetaComplex::from_json(&read(path)?).stage("read")
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Attracting => "attracting",
        Sign::Repelling => "repelling",
    }
}

fn words(ids: &[Id]) -> String {
    if ids.is_empty() {
        "-".into()
    } else {
        ids.join(" ")
    }
}

fn cmd_validate(file: &Path, as_json: bool) -> Result<String, Exit> {
    let p = Presentation::from_json(&read(file)?).stage("validate")?;
    let report = validate(&p);
    if !report.valid {
        let mut e = Exit::new("validate", VALIDATION, "invalid presentation");
        e.diagnostics = report.diagnostics;
        return Err(e);
    }
    if as_json {
        return Ok(serde_json::to_string_pretty(&report).stage("validate")? + "\n");
    }
    let mut out = format!(
        "valid: period {}, {} ends\n",
        report.period.unwrap_or(1),
        report.ends
    );
    for o in &report.orbits {
        out += &format!(
            "orbit {} ({}, period {}): {}\n",
            o.leader,
            sign_name(o.sign),
            o.period(),
            o.members.join(" ")
        );
    }
    let periods: Vec<String> = report.periods(&p).iter().map(u64::to_string).collect();
    out += &format!("periods: {}\n", periods.join(" "));
    let leaders: Vec<Id> = report.orbits.iter().map(|o| o.leader.clone()).collect();
    out += &format!("leaders: {}\n", leaders.join(" "));
    Ok(out)
}

fn block_listing(p: &EndPeriodic, n: usize) -> Result<(String, FiniteGraph), Exit> {
    let t = unroll(p, n).stage("unroll")?;
    let mut out = String::new();
    let n = n as i64;
    for k in -n..=n {
        let (vs, es) = t.block_names(k);
        let label = if k == 0 { "core".to_string() } else { format!("B{k}") };
        out += &format!("{label}: vertices {}; edges {}\n", words(&vs), words(&es));
    }
    Ok((out, t.graph().clone()))
}

fn cmd_unroll(file: &Path, n: usize, dot: Option<&Path>) -> Result<String, Exit> {
    let p = load(file)?;
    let (mut out, g) = block_listing(&p, n)?;
    out += &format!(
        "truncation {n}: {} vertices, {} edges\n",
        g.vertex_count(),
        g.edge_count()
    );
    if let Some(path) = dot {
        write(path, &to_dot(&g, &format!("unroll{n}"), &BTreeMap::new()))?;
    }
    Ok(out)
}

fn boundary_text(b: &DecoratedBoundary) -> String {
    let mut out = b.summary() + "\n";
    for c in &b.components {
        out += &format!(
            "component {}: {} vertices, {} edges\n",
            c.leader,
            c.graph.vertex_count(),
            c.graph.edge_count()
        );
        for (e, ends) in c.graph.edges() {
            let class = match c.edge_class.get(e) {
                Some(EdgeKind::Joining) => "joining",
                _ => "subgraph",
            };
            let extra = c
                .subdivision
                .get(e)
                .map(|q| format!(" subdivision {q}"))
                .unwrap_or_default();
            out += &format!("  {e}: {} -> {} {class}{extra}\n", ends.tail, ends.head);
        }
    }
    out
}

fn cmd_boundary(file: &Path, sign: Sign, dot: Option<&Path>, as_json: bool) -> Result<String, Exit> {
    let p = load(file)?;
    let b = compute_boundary(&p, sign).stage("boundary")?;
    if let Some(path) = dot {
        write(path, &b.to_dot(&format!("boundary{}", sign.symbol())))?;
    }
    if as_json {
        return Ok(serde_json::to_string_pretty(&b).stage("boundary")? + "\n");
    }
    Ok(boundary_text(&b))
}

fn verdict(v: bool) -> &'static str {
    if v {
        "HE"
    } else {
        "NOT-HE"
    }
}

fn fold_json(seq: &FoldSequence, verdict: bool, level: Option<usize>) -> String {
    let folds: Vec<_> = seq
        .steps
        .iter()
        .map(|s| json!({ "kept": s.kept, "second": s.second, "kind": s.kind }))
        .collect();
    let mut v = json!({
        "folds": folds,
        "terminal": seq.terminal_kind,
        "verdict": verdict,
    });
    if let Some(level) = level {
        v["level"] = json!(level);
    }
    serde_json::to_string_pretty(&v).expect("fold report serializes") + "\n"
}

/// A finite graph map: `codomain` defaults to `domain`.
#[derive(Deserialize)]
struct MapFile {
    domain: FiniteGraph,
    codomain: Option<FiniteGraph>,
    vertices: BTreeMap<Id, Id>,
    edges: BTreeMap<Id, Vec<SignedEdge>>,
}

fn cmd_fold(file: Option<&Path>, finite: Option<&Path>, as_json: bool) -> Result<(String, bool), Exit> {
    let (seq, v, level) = match (finite, file) {
        (Some(path), _) => {
            let m: MapFile = serde_json::from_str(&read(path)?).stage("read")?;
            let codomain = m.codomain.unwrap_or_else(|| m.domain.clone());
            let map = GraphMap::from_steps(m.domain, codomain, m.vertices, m.edges).stage("read")?;
            let c = certify_homotopy_equivalence(&map).stage("fold")?;
            (c.witness, c.verdict, None)
        }
        (None, Some(path)) => {
            let r = fold_decompose_end_periodic(&load(path)?).stage("fold")?;
            (r.certificate.witness, r.certificate.verdict, Some(r.level))
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let text = if as_json {
        fold_json(&seq, v, level)
    } else {
        format!("{}verdict: {}\n", seq.log(), verdict(v))
    };
    Ok((text, v))
}

fn cmd_invert(file: &Path, out: &Path) -> Result<String, Exit> {
    let r = homotopy_inverse(&load(file)?).stage("invert")?;
    write(out, &r.inverse.presentation().to_json())?;
    Ok(format!("inverse written to {}\n", out.display()))
}

fn cmd_collapse(file: &Path, out: &Path) -> Result<String, Exit> {
    let r = boundary_collapse(&load(file)?).stage("collapse")?;
    write(out, &r.collapsed.presentation().to_json())?;
    Ok(format!(
        "collapsed representative written to {} ({} valence-one removals)\n",
        out.display(),
        r.removed.len()
    ))
}

fn config(cutoff: Option<u32>) -> CouplingConfig {
    match cutoff {
        Some(m) => CouplingConfig::with_cutoff(m),
        None => CouplingConfig::default(),
    }
}

fn theta_summary(t: &ThetaComplex) -> String {
    format!(
        "theta: {} vertices, {} edges, euler characteristic {}, cutoff {}\n",
        t.graph.vertex_count(),
        t.graph.edge_count(),
        t.euler_characteristic(),
        t.cutoff
    )
}

fn cmd_couple(
    a: &Path,
    b: &Path,
    h: Option<&Path>,
    cutoff: Option<u32>,
    out: &Path,
    dot: Option<&Path>,
) -> Result<String, Exit> {
    let left = load(a)?;
    let right = load(b)?;
    let gluing: Gluing = match h {
        Some(path) => serde_json::from_str(&read(path)?).stage("read")?,
        None => {
            let inv = homotopy_inverse(&left).stage("invert")?;
            if inv.inverse.presentation().to_json() != right.presentation().to_json() {
                return Err(Exit::new(
                    "couple",
                    INCOMPATIBLE,
                    "the canonical identification needs B to be the inverse written by `invert A`",
                ));
            }
            canonical_h(&left, &inv).stage("couple")?
        }
    };
    let t = couple(&left, &right, &gluing, &config(cutoff)).stage("couple")?;
    write(out, &t.to_json())?;
    if let Some(path) = dot {
        write(path, &t.to_dot("theta"))?;
    }
    Ok(theta_summary(&t))
}

/// Exit code for a presentation whose certificates do not all pass.
fn certificate_exit(p: &FreeByCyclicPresentation) -> Option<Exit> {
    let c = &p.certificates;
    if !c.oracle.all_agree() {
        let mut e = Exit::new("oracle", ORACLE_MISMATCH, "first return map disagrees with the flow");
        e.diagnostics = c
            .oracle
            .flagged()
            .into_iter()
            .map(|x| ep_model::Diagnostic::new("oracle-mismatch", Some(x), "edge image differs"))
            .collect();
        return Some(e);
    }
    if !c.constituents || !c.f {
        return Some(Exit::new("certify", NOT_HE, "a map is not a homotopy equivalence"));
    }
    if !c.boundary_ok() {
        return Some(Exit::new("certify", 1, "boundary injectivity is not certified"));
    }
    None
}

fn cmd_present(theta: &Path, as_json: bool) -> Result<(String, Option<Exit>), Exit> {
    let t = load_theta(theta)?;
    let p = present_free_by_cyclic(&t).stage("present")?;
    let text = if as_json {
        serde_json::to_string_pretty(&p).stage("present")? + "\n"
    } else {
        p.text()
    };
    Ok((text, certificate_exit(&p)))
}

fn cmd_oracle(theta: &Path, depth: usize) -> Result<(String, bool), Exit> {
    let t = load_theta(theta)?;
    let r = first_return_oracle(&t, depth).stage("oracle")?;
    let mut text = r.table();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    if !r.vertex_mismatches.is_empty() {
        text += &format!("vertex mismatches: {}\n", r.vertex_mismatches.join(" "));
    }
    Ok((text, r.all_agree() && r.vertex_mismatches.is_empty()))
}

fn cmd_embed(file: &Path, cutoff: Option<u32>, out: Option<&Path>) -> Result<(String, Option<Exit>), Exit> {
    let p = load(file)?;
    let collapsed = boundary_collapse(&p).stage("collapse")?.collapsed;
    let inv = homotopy_inverse(&collapsed).stage("invert")?;
    let h = canonical_h(&collapsed, &inv).stage("couple")?;
    let t = couple(&collapsed, &inv.inverse, &h, &config(cutoff)).stage("couple")?;
    let cert = coupling::certify_f(&t).stage("certify")?;
    if !cert.verdict {
        return Err(Exit::new("certify", NOT_HE, "the first return map is not a homotopy equivalence"));
    }
    let pres = present_free_by_cyclic(&t).stage("present")?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).stage("write")?;
        write(&dir.join("collapsed.json"), &collapsed.presentation().to_json())?;
        write(&dir.join("inverse.json"), &inv.inverse.presentation().to_json())?;
        write(&dir.join("gluing.json"), &(serde_json::to_string_pretty(&h).stage("write")? + "\n"))?;
        write(&dir.join("theta.json"), &t.to_json())?;
        write(&dir.join("presentation.txt"), &pres.text())?;
        write(
            &dir.join("certificates.json"),
            &(serde_json::to_string_pretty(&pres).stage("write")? + "\n"),
        )?;
    }
    Ok((pres.text(), certificate_exit(&pres)))
}

fn cmd_inspect(file: &Path, what: Inspect, n: usize, sign: Sign, dot: Option<&Path>) -> Result<(String, bool), Exit> {
    let p = load(file)?;
    match what {
        Inspect::Blocks => {
            let (text, g) = block_listing(&p, n)?;
            if let Some(path) = dot {
                write(path, &to_dot(&g, &format!("blocks{n}"), &BTreeMap::new()))?;
            }
            Ok((text, true))
        }
        Inspect::Boundary => {
            let b = compute_boundary(&p, sign).stage("boundary")?;
            if let Some(path) = dot {
                write(path, &b.to_dot(&format!("boundary{}", sign.symbol())))?;
            }
            Ok((b.summary() + "\n", true))
        }
        Inspect::Tree => {
            let t = build_end_invariant_tree(&p).stage("tree")?;
            let ids = |s: &std::collections::BTreeSet<Id>| words(&s.iter().cloned().collect::<Vec<_>>());
            let critical = |m: &BTreeMap<Id, Id>| {
                let v: Vec<Id> = m.iter().map(|(k, e)| format!("{k}:{e}")).collect();
                words(&v)
            };
            let text = format!(
                "root: {}\nenlarged core: {}\ncore edges: {}\nforest +: {}\nforest -: {}\ncritical +: {}\ncritical -: {}\ninvariant: {}\n",
                t.root,
                t.enlarged,
                ids(&t.core_edges),
                ids(&t.forest_pos),
                ids(&t.forest_neg),
                critical(&t.critical_pos),
                critical(&t.critical_neg),
                t.invariant
            );
            if let Some(path) = dot {
                let styles = t
                    .core_edges
                    .iter()
                    .map(|e| {
                        let style = DotEdgeStyle {
                            color: Some("red".into()),
                            ..DotEdgeStyle::default()
                        };
                        (e.clone(), style)
                    })
                    .collect();
                write(path, &to_dot(unroll(&p, 0).stage("tree")?.graph(), "tree", &styles))?;
            }
            Ok((text, true))
        }
        Inspect::Folds => {
            let r = fold_decompose_end_periodic(&p).stage("fold")?;
            let v = r.certificate.verdict;
            Ok((format!("{}verdict: {}\n", r.certificate.witness.log(), verdict(v)), v))
        }
    }
}

fn run(cli: Cli) -> Result<(String, Option<Exit>), Exit> {
    let fail_if = |ok: bool, stage: &'static str, code: u8, msg: &str| {
        (!ok).then(|| Exit::new(stage, code, msg))
    };
    Ok(match cli.command {
        Command::Validate { file, json } => (cmd_validate(&file, json)?, None),
        Command::Unroll { file, n, dot } => (cmd_unroll(&file, n, dot.as_deref())?, None),
        Command::Boundary { file, sign, dot, json } => {
            (cmd_boundary(&file, sign, dot.as_deref(), json)?, None)
        }
        Command::Fold { file, finite, json } => {
            let (text, v) = cmd_fold(file.as_deref(), finite.as_deref(), json)?;
            (text, fail_if(v, "fold", NOT_HE, "not a homotopy equivalence"))
        }
        Command::Invert { file, out } => (cmd_invert(&file, &out)?, None),
        Command::Collapse { file, out } => (cmd_collapse(&file, &out)?, None),
        Command::Couple {
            a,
            b,
            h,
            canonical: _,
            cutoff,
            out,
            dot,
        } => (cmd_couple(&a, &b, h.as_deref(), cutoff, &out, dot.as_deref())?, None),
        Command::Present { theta, json } => cmd_present(&theta, json)?,
        Command::OracleCheck { theta, depth } => {
            let (text, ok) = cmd_oracle(&theta, depth)?;
            (text, fail_if(ok, "oracle", ORACLE_MISMATCH, "first return map disagrees with the flow"))
        }
        Command::Embed { file, cutoff, out } => cmd_embed(&file, cutoff, out.as_deref())?,
        Command::Inspect {
            file,
            what,
            n,
            sign,
            dot,
        } => {
            let (text, ok) = cmd_inspect(&file, what, n, sign, dot.as_deref())?;
            (text, fail_if(ok, "fold", NOT_HE, "not a homotopy equivalence"))
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, failure)) => {
            print!("{text}");
            match failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("{}", e.json());
                    ExitCode::from(e.exit)
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.json());
            ExitCode::from(e.exit)
        }
    }
}
