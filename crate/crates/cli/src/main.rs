//! Command-line front door for the block-network toolkit: build family
//! networks, emit their codes, verify codes against networks, run the
//! bounded searches, and reproduce the pinned tables, part lists and
//! solvability grids.
//!
//! Exit codes: 0 success / solution / found; 1 counterexample / exhausted /
//! reproduction mismatch; 2 usage, parse or precondition errors; 3 capped.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncnet_core::algebra::factor::{min_pow_at_least, partner_modulus, radical_quotient};
use ncnet_core::algebra::Alphabet;
use ncnet_core::build::counts::{node_count, node_count_breakdown};
use ncnet_core::build::families::{build_n0, build_n1, build_n2, build_n3};
use ncnet_core::build::n4::{build_n4, n4_components};
use ncnet_core::codes::fractional::{n1_fractional, n3_fractional};
use ncnet_core::codes::linear::{
    n0_scalar_linear, n1_scalar_linear, n2_scalar_linear, n3_scalar_linear,
};
use ncnet_core::codes::n4::n4_solution;
use ncnet_core::codes::nonlinear::{n2_nonlinear, n3_nonlinear};
use ncnet_core::codes::perm_family::PermutationFamily;
use ncnet_core::net::code::{code_from_json, code_to_json, Code};
use ncnet_core::net::dot::dot_export;
use ncnet_core::net::network::{network_from_json, network_to_json, NetworkSpec};
use ncnet_core::net::verify::{
    verify_exhaustive, verify_linear_basis, verify_random, Verdict, VerifyOptions, DEFAULT_CAP,
};
use ncnet_core::search::{
    enumerate_all_codes, search_p_structured, search_scalar_linear, EnumerationOutcome,
    SearchOptions, SearchOutcome,
};

#[derive(Parser)]
#[command(
    name = "ncnet",
    version,
    about = "Build, verify and search block network codes",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct FamilyParams {
    /// Size parameter of n0/n1/n4, or the per-gadget size of n2.
    #[arg(long)]
    m: Option<u64>,
    /// Gadget count of n2.
    #[arg(long)]
    w: Option<u64>,
    /// First gadget size of n3.
    #[arg(long)]
    m1: Option<u64>,
    /// Second gadget size of n3.
    #[arg(long)]
    m2: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    N0,
    N1,
    N2,
    N3,
    N4,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeName {
    /// Scalar linear all-ones code for n0 (needs --m, --ring).
    N0Linear,
    /// Scalar linear code for n1 (needs --m, --ring).
    N1Linear,
    /// Scalar linear code for n2 (needs --m, --w, --ring).
    N2Linear,
    /// Scalar linear code for n3 (needs --m1, --m2, --ring).
    N3Linear,
    /// Carry/decode-table code for n2 over Z_{m*w} (needs --m, --w).
    N2Nonlinear,
    /// Two-gadget permutation-family code for n3 (needs --m1, --m2).
    N3Nonlinear,
    /// Fractional matrix code for n1 over GF(p) (needs --m, --p).
    N1Fractional,
    /// Fractional matrix code for n3 over GF(p) (needs --m1, --m2, --p).
    N3Fractional,
    /// Combined code for the composite union (needs --m).
    N4,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Basis,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    /// Scalar linear codes over Z_n (needs --ring).
    Linear,
    /// Group-translate structured codes (needs --size).
    PStructured,
    /// Every function assignment on a tiny network (needs --size).
    AllCodes,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproItem {
    /// The stratified-shift permutation table (12 rows x 6 columns).
    ShiftTable,
    /// The digit-rotation permutation table (8 rows x 4 columns).
    DigitTable,
    /// Composite part lists for target sizes 6, 27 and 100.
    PartLists,
    /// Composite node totals and per-part splits for 6, 27 and 100.
    NodeTotals,
    /// Scalar linear solvability grid of the tap-receiver family.
    GridN1,
    /// Scalar linear solvability grid of the shared-input family.
    GridN2,
    /// Scalar linear solvability grid of the two-gadget family.
    GridN3,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family network and write it as JSON or DOT.
    Build {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        params: FamilyParams,
        /// Output path; defaults to <family>_<params>.<format> here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: BuildFormat,
    },
    /// Emit one of the named code constructions as JSON.
    Code {
        #[arg(value_enum)]
        name: CodeName,
        #[command(flatten)]
        params: FamilyParams,
        /// Field prime for the fractional codes.
        #[arg(long)]
        p: Option<u64>,
        /// Ring modulus for the scalar linear codes.
        #[arg(long)]
        ring: Option<u64>,
        /// Output path; defaults to <name>_<params>.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a code file against a network file.
    Verify {
        /// Network JSON path.
        #[arg(long)]
        net: PathBuf,
        /// Code JSON path.
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: VerifyMode,
        /// Sample count for random mode.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Seed for random mode.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Assignment cap; NCNET_CAP overrides the default.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Search for a code on a network file.
    Search {
        #[arg(value_enum)]
        kind: SearchKind,
        /// Network JSON path.
        #[arg(long)]
        net: PathBuf,
        /// Ring modulus for the linear search.
        #[arg(long)]
        ring: Option<u64>,
        /// Alphabet size for the structured and all-codes searches.
        #[arg(long)]
        size: Option<u64>,
        /// Candidate cap; NCNET_CAP overrides the default.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Where to write found codes; defaults next to the network file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a pinned artifact and diff it against the embedded golden.
    Reproduce {
        #[arg(value_enum)]
        item: ReproItem,
        /// Also write the regenerated artifact here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the node count of a family (and the per-part split for n4).
    Nodes {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        params: FamilyParams,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Build { family, params, out, format } => cmd_build(family, params, out, format),
        Command::Code { name, params, p, ring, out } => cmd_code(name, params, p, ring, out),
        Command::Verify { net, code, mode, samples, seed, cap, workers } => {
            cmd_verify(&net, &code, mode, samples, seed, cap, workers)
        }
        Command::Search { kind, net, ring, size, cap, workers, out } => {
            cmd_search(kind, &net, ring, size, cap, workers, out)
        }
        Command::Reproduce { item, out } => cmd_reproduce(item, out),
        Command::Nodes { family, params } => cmd_nodes(family, params),
    }
}

fn need(value: Option<u64>, flag: &str, what: &str) -> Result<u64> {
    value.ok_or_else(|| anyhow!("{what} requires --{flag}"))
}

fn ring_alphabet(modulus: u64) -> Result<Alphabet> {
    if modulus < 2 {
        bail!("--ring must be at least 2");
    }
    Ok(Alphabet::ring(modulus))
}

/// Resolve the effective cap: an explicit flag wins, then NCNET_CAP, then
/// the library default.
fn resolve_cap(flag: Option<u64>) -> Result<u64> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("NCNET_CAP") {
        Ok(raw) => raw
            .parse::<u64>()
            .with_context(|| format!("NCNET_CAP is set to `{raw}`, which is not a number")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn json_u128(v: u128) -> Value {
    if v <= u64::MAX as u128 {
        json!(v as u64)
    } else {
        json!(v.to_string())
    }
}

/// Print the one-line summary and the machine-readable report block.
fn emit(summary: &str, report: &Value) {
    println!("{summary}");
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
}

fn describe_alphabet(a: &Alphabet) -> String {
    match a {
        Alphabet::Set { size } => format!("a plain {size}-symbol alphabet"),
        Alphabet::Ring { modulus } => format!("Z_{modulus}"),
        Alphabet::Field { prime } => format!("GF({prime})"),
        Alphabet::Group { factors } => {
            let parts: Vec<String> = factors.iter().map(|f| format!("Z_{f}")).collect();
            parts.join(" x ")
        }
        Alphabet::Product { parts } => {
            let inner: Vec<String> = parts.iter().map(describe_alphabet).collect();
            format!("({})", inner.join(") x ("))
        }
    }
}

/// Build a family network plus a stem for default file names and the
/// parameter vector used by the closed-form node counts.
fn family_net(family: Family, p: FamilyParams) -> Result<(NetworkSpec, String, Vec<u64>)> {
    match family {
        Family::N0 => {
            let m = need(p.m, "m", "n0")?;
            Ok((build_n0(m)?, format!("n0_{m}"), vec![m]))
        }
        Family::N1 => {
            let m = need(p.m, "m", "n1")?;
            Ok((build_n1(m)?, format!("n1_{m}"), vec![m]))
        }
        Family::N2 => {
            let m = need(p.m, "m", "n2")?;
            let w = need(p.w, "w", "n2")?;
            Ok((build_n2(m, w)?, format!("n2_{m}_{w}"), vec![m, w]))
        }
        Family::N3 => {
            let m1 = need(p.m1, "m1", "n3")?;
            let m2 = need(p.m2, "m2", "n3")?;
            Ok((build_n3(m1, m2)?, format!("n3_{m1}_{m2}"), vec![m1, m2]))
        }
        Family::N4 => {
            let m = need(p.m, "m", "n4")?;
            Ok((build_n4(m)?, format!("n4_{m}"), vec![m]))
        }
    }
}

fn family_str(family: Family) -> &'static str {
    match family {
        Family::N0 => "n0",
        Family::N1 => "n1",
        Family::N2 => "n2",
        Family::N3 => "n3",
        Family::N4 => "n4",
    }
}

fn cmd_build(
    family: Family,
    params: FamilyParams,
    out: Option<PathBuf>,
    format: BuildFormat,
) -> Result<i32> {
    let (net, stem, _) = family_net(family, params)?;
    let (path, payload) = match format {
        BuildFormat::Json => {
            (out.unwrap_or_else(|| PathBuf::from(format!("{stem}.json"))), network_to_json(&net)?)
        }
        BuildFormat::Dot => {
            (out.unwrap_or_else(|| PathBuf::from(format!("{stem}.dot"))), dot_export(&net))
        }
    };
    std::fs::write(&path, payload).with_context(|| format!("writing {}", path.display()))?;
    emit(
        &format!(
            "wrote {} ({} nodes, {} edges, {} messages)",
            path.display(),
            net.nodes.len(),
            net.edges.len(),
            net.messages.len()
        ),
        &json!({
            "command": "build",
            "family": family_str(family),
            "nodes": net.nodes.len(),
            "edges": net.edges.len(),
            "messages": net.messages.len(),
            "demands": net.demands.len(),
            "out": path.display().to_string(),
        }),
    );
    Ok(0)
}

fn cmd_code(
    name: CodeName,
    p: FamilyParams,
    prime: Option<u64>,
    ring: Option<u64>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let (code, stem): (Code, String) = match name {
        CodeName::N0Linear => {
            let m = need(p.m, "m", "n0-linear")?;
            let r = need(ring, "ring", "n0-linear")?;
            (n0_scalar_linear(m, ring_alphabet(r)?)?, format!("n0_linear_{m}_z{r}"))
        }
        CodeName::N1Linear => {
            let m = need(p.m, "m", "n1-linear")?;
            let r = need(ring, "ring", "n1-linear")?;
            (n1_scalar_linear(m, ring_alphabet(r)?)?, format!("n1_linear_{m}_z{r}"))
        }
        CodeName::N2Linear => {
            let m = need(p.m, "m", "n2-linear")?;
            let w = need(p.w, "w", "n2-linear")?;
            let r = need(ring, "ring", "n2-linear")?;
            (n2_scalar_linear(m, w, ring_alphabet(r)?)?, format!("n2_linear_{m}_{w}_z{r}"))
        }
        CodeName::N3Linear => {
            let m1 = need(p.m1, "m1", "n3-linear")?;
            let m2 = need(p.m2, "m2", "n3-linear")?;
            let r = need(ring, "ring", "n3-linear")?;
            (n3_scalar_linear(m1, m2, ring_alphabet(r)?)?, format!("n3_linear_{m1}_{m2}_z{r}"))
        }
        CodeName::N2Nonlinear => {
            let m = need(p.m, "m", "n2-nonlinear")?;
            let w = need(p.w, "w", "n2-nonlinear")?;
            (n2_nonlinear(m, w)?, format!("n2_nonlinear_{m}_{w}"))
        }
        CodeName::N3Nonlinear => {
            let m1 = need(p.m1, "m1", "n3-nonlinear")?;
            let m2 = need(p.m2, "m2", "n3-nonlinear")?;
            (n3_nonlinear(m1, m2)?, format!("n3_nonlinear_{m1}_{m2}"))
        }
        CodeName::N1Fractional => {
            let m = need(p.m, "m", "n1-fractional")?;
            let pr = need(prime, "p", "n1-fractional")?;
            (n1_fractional(m, pr)?, format!("n1_fractional_{m}_gf{pr}"))
        }
        CodeName::N3Fractional => {
            let m1 = need(p.m1, "m1", "n3-fractional")?;
            let m2 = need(p.m2, "m2", "n3-fractional")?;
            let pr = need(prime, "p", "n3-fractional")?;
            (n3_fractional(m1, m2, pr)?, format!("n3_fractional_{m1}_{m2}_gf{pr}"))
        }
        CodeName::N4 => {
            let m = need(p.m, "m", "n4")?;
            (n4_solution(m)?, format!("n4_solution_{m}"))
        }
    };
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{stem}.json")));
    std::fs::write(&path, code_to_json(&code)?)
        .with_context(|| format!("writing {}", path.display()))?;
    let carrier = describe_alphabet(&code.params.alphabet);
    emit(
        &format!(
            "wrote a ({},{}) code over {carrier} with {} decoders to {}",
            code.params.k,
            code.params.n,
            code.decoders.len(),
            path.display()
        ),
        &json!({
            "command": "code",
            "k": code.params.k,
            "n": code.params.n,
            "alphabet_size": code.params.alphabet.size(),
            "decoders": code.decoders.len(),
            "edge_functions": code.edge_functions.len(),
            "out": path.display().to_string(),
        }),
    );
    Ok(0)
}

fn read_net(path: &Path) -> Result<NetworkSpec> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    network_from_json(&raw).with_context(|| format!("parsing network {}", path.display()))
}

fn read_code(path: &Path) -> Result<Code> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    code_from_json(&raw).with_context(|| format!("parsing code {}", path.display()))
}

fn verdict_report(command: &str, mode: &str, verdict: &Verdict) -> (i32, String, Value) {
    match verdict {
        Verdict::Solution { assignments_checked } => (
            0,
            format!("solution: all {assignments_checked} assignments decode"),
            json!({
                "command": command, "mode": mode, "outcome": "solution",
                "assignments_checked": assignments_checked,
            }),
        ),
        Verdict::NoCounterexampleFound { assignments_checked } => (
            0,
            format!(
                "no counterexample in {assignments_checked} sampled assignments \
                 (not a certificate)"
            ),
            json!({
                "command": command, "mode": mode, "outcome": "no_counterexample_found",
                "assignments_checked": assignments_checked,
            }),
        ),
        Verdict::CounterExample { witness, assignments_checked } => (
            1,
            format!(
                "counterexample after {assignments_checked} assignments: receiver {} decodes \
                 {:?} for message {} but expected {:?}",
                witness.receiver, witness.decoded, witness.message, witness.expected
            ),
            json!({
                "command": command, "mode": mode, "outcome": "counterexample",
                "assignments_checked": assignments_checked,
                "witness": serde_json::to_value(witness.as_ref()).expect("witness serializes"),
            }),
        ),
        Verdict::Capped { space, cap } => (
            3,
            format!("assignment space {space} exceeds the cap {cap}; nothing was checked"),
            json!({
                "command": command, "mode": mode, "outcome": "capped",
                "space": json_u128(*space), "cap": cap,
            }),
        ),
    }
}

fn cmd_verify(
    net_path: &Path,
    code_path: &Path,
    mode: VerifyMode,
    samples: u64,
    seed: u64,
    cap: Option<u64>,
    workers: usize,
) -> Result<i32> {
    let net = read_net(net_path)?;
    let code = read_code(code_path)?;
    let opts = VerifyOptions { cap: resolve_cap(cap)?, workers };
    let (mode_name, verdict) = match mode {
        VerifyMode::Exhaustive => ("exhaustive", verify_exhaustive(&net, &code, &opts)?),
        VerifyMode::Basis => ("basis", verify_linear_basis(&net, &code)?),
        VerifyMode::Random => ("random", verify_random(&net, &code, samples, seed, &opts)?),
    };
    let (exit, summary, report) = verdict_report("verify", mode_name, &verdict);
    emit(&summary, &report);
    Ok(exit)
}

/// Default artifact path for search results: next to the network file.
fn sibling(net_path: &Path, suffix: &str) -> PathBuf {
    let stem = net_path.file_stem().and_then(|s| s.to_str()).unwrap_or("search");
    net_path.with_file_name(format!("{stem}.{suffix}"))
}

fn search_report(
    kind: &str,
    outcome: &SearchOutcome<Code>,
    net_path: &Path,
    out: Option<PathBuf>,
) -> Result<(i32, String, Value)> {
    Ok(match outcome {
        SearchOutcome::Found { value, tested, space } => {
            let path = out.unwrap_or_else(|| sibling(net_path, "found.json"));
            std::fs::write(&path, code_to_json(value)?)
                .with_context(|| format!("writing {}", path.display()))?;
            (
                0,
                format!(
                    "found a code after {tested} candidate checks (space {space}); wrote {}",
                    path.display()
                ),
                json!({
                    "command": "search", "kind": kind, "outcome": "found",
                    "tested": tested, "space": json_u128(*space),
                    "out": path.display().to_string(),
                }),
            )
        }
        SearchOutcome::Exhausted { space } => (
            1,
            format!("exhausted all {space} candidates: no such code exists"),
            json!({
                "command": "search", "kind": kind, "outcome": "exhausted",
                "space": json_u128(*space),
            }),
        ),
        SearchOutcome::Capped { space, cap } => (
            3,
            format!("candidate space {space} exceeds the cap {cap}; nothing was searched"),
            json!({
                "command": "search", "kind": kind, "outcome": "capped",
                "space": json_u128(*space), "cap": cap,
            }),
        ),
    })
}

fn cmd_search(
    kind: SearchKind,
    net_path: &Path,
    ring: Option<u64>,
    size: Option<u64>,
    cap: Option<u64>,
    workers: usize,
    out: Option<PathBuf>,
) -> Result<i32> {
    let net = read_net(net_path)?;
    let opts = SearchOptions { cap: resolve_cap(cap)?, workers };
    let (exit, summary, report) = match kind {
        SearchKind::Linear => {
            let r = need(ring, "ring", "the linear search")?;
            let outcome = search_scalar_linear(&net, &ring_alphabet(r)?, &opts)?;
            search_report("linear", &outcome, net_path, out)?
        }
        SearchKind::PStructured => {
            let s = need(size, "size", "the structured search")?;
            let outcome = search_p_structured(&net, s, &opts)?;
            search_report("p-structured", &outcome, net_path, out)?
        }
        SearchKind::AllCodes => {
            let s = need(size, "size", "the all-codes search")?;
            match enumerate_all_codes(&net, s, &opts)? {
                EnumerationOutcome::Complete { codes, space } => {
                    let path = out.unwrap_or_else(|| sibling(net_path, "codes.json"));
                    let mut payload =
                        serde_json::to_string_pretty(&codes).context("serializing codes")?;
                    payload.push('\n');
                    std::fs::write(&path, payload)
                        .with_context(|| format!("writing {}", path.display()))?;
                    let exit = if codes.is_empty() { 1 } else { 0 };
                    (
                        exit,
                        format!(
                            "{} solutions among {space} candidates; wrote {}",
                            codes.len(),
                            path.display()
                        ),
                        json!({
                            "command": "search", "kind": "all-codes", "outcome": "complete",
                            "solutions": codes.len(), "space": json_u128(space),
                            "out": path.display().to_string(),
                        }),
                    )
                }
                EnumerationOutcome::Capped { space, cap } => (
                    3,
                    format!("candidate space {space} exceeds the cap {cap}; nothing was searched"),
                    json!({
                        "command": "search", "kind": "all-codes", "outcome": "capped",
                        "space": json_u128(space), "cap": cap,
                    }),
                ),
            }
        }
    };
    emit(&summary, &report);
    Ok(exit)
}

fn cmd_nodes(family: Family, params: FamilyParams) -> Result<i32> {
    let name = family_str(family);
    let list: Vec<u64> = match family {
        Family::N0 | Family::N1 | Family::N4 => vec![need(params.m, "m", name)?],
        Family::N2 => vec![need(params.m, "m", name)?, need(params.w, "w", name)?],
        Family::N3 => vec![need(params.m1, "m1", name)?, need(params.m2, "m2", name)?],
    };
    let total = node_count(name, &list)?;
    let mut report = json!({
        "command": "nodes", "family": name, "params": list, "nodes": total,
    });
    let mut summary = format!("{name}{list:?}: {total} nodes");
    if matches!(family, Family::N4) {
        let breakdown = node_count_breakdown(list[0])?;
        let parts: Vec<Value> =
            breakdown.iter().map(|(part, n)| json!({"part": part.to_string(), "nodes": n})).collect();
        let split: Vec<String> =
            breakdown.iter().map(|(part, n)| format!("{part}: {n}")).collect();
        summary = format!("{summary} ({})", split.join(", "));
        report["breakdown"] = Value::Array(parts);
    }
    emit(&summary, &report);
    Ok(0)
}

// ---------------------------------------------------------------------------
// Reproduction goldens. These are embedded copies, independent of the test
// fixtures, so a regression in the constructors cannot hide behind a shared
// constant.

const GOLD_SHIFT_TABLE: &str = "\
a,pi_2(a),pi_1(a),3pi_3(a),3pi_2(a),3pi_1(a)
0,0,0,0,0,0
1,1,1,3,3,3
2,2,2,6,6,6
3,3,3,9,9,9
4,4,5,0,0,3
5,5,6,3,3,6
6,6,7,6,6,9
7,7,4,9,9,0
8,9,8,0,3,0
9,10,9,3,6,3
10,11,10,6,9,6
11,8,11,9,0,9
";

const GOLD_DIGIT_TABLE: &str = "\
a,pi_1(a),12pi_2(a),2pi_1(a)
0,0,0,0
1,4,4,0
2,1,0,2
3,5,4,2
4,2,0,4
5,6,4,4
6,3,0,6
7,7,4,6
";

const GOLD_PART_LISTS: [(u64, &[&str]); 3] = [
    (6, &["n2(2,3)", "n2(3,2)"]),
    (27, &["n1(2)", "n1(5)", "n1(7)", "n2(27,1)", "n3(3,9)"]),
    (100, &["n1(3)", "n1(7)", "n2(4,25)", "n2(25,4)", "n3(2,50)", "n3(5,80)"]),
];

const GOLD_NODE_TOTALS: [(u64, u64, &[u64]); 3] = [
    (6, 97, &[53, 44]),
    (27, 256, &[15, 27, 35, 119, 60]),
    (100, 1691, &[19, 35, 627, 438, 220, 352]),
];

/// Expected found/exhausted pattern of the n1 grid: rows m in {2,3,4},
/// columns n in 2..=5.
const GOLD_GRID_N1: [(u64, [bool; 4]); 3] = [
    (2, [false, true, false, true]),
    (3, [true, false, true, true]),
    (4, [false, true, false, true]),
];

/// Expected pattern of the n2 grid: rows (m,w), columns n in 2..=4.
const GOLD_GRID_N2: [(u64, u64, [bool; 3]); 4] = [
    (2, 1, [true, false, false]),
    (2, 2, [true, false, false]),
    (3, 1, [false, true, false]),
    (3, 2, [false, true, false]),
];

/// Expected pattern of the n3 grid: rows (m1,m2), columns n in 2..=5.
const GOLD_GRID_N3: [(u64, u64, [bool; 4]); 4] = [
    (2, 2, [false, true, false, true]),
    (2, 3, [true, true, true, true]),
    (3, 2, [true, true, true, true]),
    (3, 3, [true, false, true, true]),
];

/// Compare two multi-line strings; on mismatch, report differing lines.
fn diff_lines(got: &str, want: &str, mismatches: &mut Vec<String>) {
    let got_lines: Vec<&str> = got.lines().collect();
    let want_lines: Vec<&str> = want.lines().collect();
    for (i, (g, w)) in got_lines.iter().zip(&want_lines).enumerate() {
        if g != w {
            mismatches.push(format!("line {}: got `{g}`, want `{w}`", i + 1));
        }
    }
    if got_lines.len() != want_lines.len() {
        mismatches.push(format!("line count: got {}, want {}", got_lines.len(), want_lines.len()));
    }
}

fn run_grid<F>(cells: Vec<(String, bool)>, run: F, mismatches: &mut Vec<String>) -> Vec<Value>
where
    F: Fn(&str) -> Result<bool>,
{
    let mut rows = Vec::new();
    for (label, expected) in cells {
        match run(&label) {
            Ok(found) => {
                if found != expected {
                    mismatches.push(format!(
                        "{label}: got {}, want {}",
                        if found { "found" } else { "exhausted" },
                        if expected { "found" } else { "exhausted" },
                    ));
                }
                rows.push(json!({
                    "cell": label,
                    "found": found,
                    "expected": expected,
                }));
            }
            Err(e) => mismatches.push(format!("{label}: {e}")),
        }
    }
    rows
}

fn cmd_reproduce(item: ReproItem, out: Option<PathBuf>) -> Result<i32> {
    let mut mismatches: Vec<String> = Vec::new();
    let mut artifact: Option<String> = None;
    let (item_name, detail): (&str, Value) = match item {
        ReproItem::ShiftTable => {
            let got = PermutationFamily::shift_family(4, 3)?.to_csv();
            diff_lines(&got, GOLD_SHIFT_TABLE, &mut mismatches);
            artifact = Some(got);
            ("shift-table", json!({"rows": 12, "columns": 6}))
        }
        ReproItem::DigitTable => {
            let got = PermutationFamily::digit_family(2, 12)?.to_csv();
            diff_lines(&got, GOLD_DIGIT_TABLE, &mut mismatches);
            artifact = Some(got);
            ("digit-table", json!({"rows": 8, "columns": 4}))
        }
        ReproItem::PartLists => {
            let mut lists = serde_json::Map::new();
            for (m, want) in GOLD_PART_LISTS {
                let got: Vec<String> =
                    n4_components(m)?.iter().map(|c| c.to_string()).collect();
                if got != want {
                    mismatches.push(format!("m={m}: got {got:?}, want {want:?}"));
                }
                lists.insert(m.to_string(), json!(got));
            }
            for (what, got, want) in [
                ("radical_quotient(100)", radical_quotient(100)? as u64, 10),
                ("min_pow_at_least(2,10)", u64::from(min_pow_at_least(2, 10)), 4),
                ("min_pow_at_least(5,10)", u64::from(min_pow_at_least(5, 10)), 2),
                ("partner_modulus(100,0)", partner_modulus(100, 0)?, 50),
                ("partner_modulus(100,1)", partner_modulus(100, 1)?, 80),
            ] {
                if got != want {
                    mismatches.push(format!("{what}: got {got}, want {want}"));
                }
            }
            artifact = Some(serde_json::to_string_pretty(&lists)? + "\n");
            ("part-lists", Value::Object(lists))
        }
        ReproItem::NodeTotals => {
            let mut totals = serde_json::Map::new();
            for (m, want_total, want_split) in GOLD_NODE_TOTALS {
                let total = node_count("n4", &[m])?;
                let split: Vec<u64> =
                    node_count_breakdown(m)?.iter().map(|(_, n)| *n).collect();
                if total != want_total {
                    mismatches.push(format!("m={m}: got {total} nodes, want {want_total}"));
                }
                if split != want_split {
                    mismatches.push(format!("m={m}: got split {split:?}, want {want_split:?}"));
                }
                totals.insert(m.to_string(), json!({"nodes": total, "split": split}));
            }
            artifact = Some(serde_json::to_string_pretty(&totals)? + "\n");
            ("node-totals", Value::Object(totals))
        }
        ReproItem::GridN1 => {
            let opts = SearchOptions::default();
            let mut cells = Vec::new();
            for (m, expected) in GOLD_GRID_N1 {
                for (i, n) in (2..=5u64).enumerate() {
                    cells.push((format!("n1({m})/Z_{n}"), expected[i]));
                }
            }
            let rows = run_grid(
                cells,
                |label| {
                    let (m, n) = parse_grid_label(label)?;
                    let net = build_n1(m[0])?;
                    let out = search_scalar_linear(&net, &Alphabet::ring(n), &opts)?;
                    Ok(out.is_found())
                },
                &mut mismatches,
            );
            ("grid-n1", json!(rows))
        }
        ReproItem::GridN2 => {
            let opts = SearchOptions::default();
            let mut cells = Vec::new();
            for (m, w, expected) in GOLD_GRID_N2 {
                for (i, n) in (2..=4u64).enumerate() {
                    cells.push((format!("n2({m},{w})/Z_{n}"), expected[i]));
                }
            }
            let rows = run_grid(
                cells,
                |label| {
                    let (ps, n) = parse_grid_label(label)?;
                    let net = build_n2(ps[0], ps[1])?;
                    let out = search_scalar_linear(&net, &Alphabet::ring(n), &opts)?;
                    Ok(out.is_found())
                },
                &mut mismatches,
            );
            ("grid-n2", json!(rows))
        }
        ReproItem::GridN3 => {
            let opts = SearchOptions::default();
            let mut cells = Vec::new();
            for (m1, m2, expected) in GOLD_GRID_N3 {
                for (i, n) in (2..=5u64).enumerate() {
                    cells.push((format!("n3({m1},{m2})/Z_{n}"), expected[i]));
                }
            }
            let rows = run_grid(
                cells,
                |label| {
                    let (ps, n) = parse_grid_label(label)?;
                    let net = build_n3(ps[0], ps[1])?;
                    let out = search_scalar_linear(&net, &Alphabet::ring(n), &opts)?;
                    Ok(out.is_found())
                },
                &mut mismatches,
            );
            ("grid-n3", json!(rows))
        }
    };

    if let (Some(path), Some(text)) = (out.as_ref(), artifact.as_ref()) {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let exit = if mismatches.is_empty() { 0 } else { 1 };
    let summary = if mismatches.is_empty() {
        format!("{item_name}: regenerated output matches the golden copy")
    } else {
        format!("{item_name}: {} mismatch(es)\n{}", mismatches.len(), mismatches.join("\n"))
    };
    emit(
        &summary,
        &json!({
            "command": "reproduce",
            "item": item_name,
            "matches": mismatches.is_empty(),
            "mismatches": mismatches,
            "detail": detail,
        }),
    );
    Ok(exit)
}

/// Parse a grid cell label like `n3(2,3)/Z_5` into its parameters and the
/// ring modulus.
fn parse_grid_label(label: &str) -> Result<(Vec<u64>, u64)> {
    let (head, ring) =
        label.split_once("/Z_").ok_or_else(|| anyhow!("bad grid label `{label}`"))?;
    let open = head.find('(').ok_or_else(|| anyhow!("bad grid label `{label}`"))?;
    let inner = head[open + 1..head.len() - 1].trim();
    let params: Vec<u64> =
        inner.split(',').map(|s| s.trim().parse::<u64>()).collect::<Result<_, _>>()?;
    Ok((params, ring.parse()?))
}
