//! `coexact` command-line pipeline.
//!
//! Exit codes: 0 success, 1 usage, 2 data validation, 3 certification
//! refusal, 4 oracle or numerical failure.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coexact::bounds::{certify_exclusion, lambda_one_bound, lspace_verdict, refine_exclusion, scan};
use coexact::numfmt::format_sig;
use coexact::reps::{
    a5_in_s5, identity_fusion, min_dim_without_subgroup_invariants, restriction_multiplicity,
    FiniteGroupCharacterTable,
};
use coexact::tetra::{
    centralizer_covolumes, emit_orbifold_dataset, orthoscheme_volume,
    orthoscheme_volume_lobachevsky, vertex, VERTEX_LABELS,
};
use coexact::verify::{run_oracles, OracleConfig};
use coexact::{
    granularity_for, load_dataset, merge_datasets, Certificate, CoxeterSymbol,
    CoxeterTetrahedron, Error, GranularityMode, InputFormat, SnappyImport, SpectrumDataset,
};
use serde_json::json;

use manifest::RunManifest;

/// Printed reference value for the volume of the Seifert-Weber space,
/// compared against `120 · vol([5,3,5])` in the `tetra` report.
const REFERENCE_SW_VOLUME: f64 = 11.119;

#[derive(Parser)]
#[command(name = "coexact", version, about = "Trace-formula bounds for coexact 1-forms on hyperbolic 3-orbifolds")]
struct Cli {
    /// Worker threads for curve sampling. `--threads 1` is the reference mode.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry of a Coxeter orthoscheme and its orbifold class data.
    Tetra(TetraArgs),
    /// Sample t ↦ J_{R,t} and write CSV, JSON and a gnuplot script.
    Bound(BoundArgs),
    /// Certify an eigenvalue exclusion and the derived λ₁* bound.
    Certify(CertifyArgs),
    /// Character-theoretic granularity for a group and subgroup.
    Rep(RepArgs),
    /// Run the built-in oracle suite.
    Verify(VerifyArgs),
    /// Convert a text length-spectrum listing to the native JSON format.
    Import(ImportArgs),
    /// Merge two datasets of the same orbifold.
    Merge(MergeArgs),
}

#[derive(Args)]
struct TetraArgs {
    /// Coxeter symbol `p,q,r`.
    #[arg(long)]
    coxeter: CoxeterSymbol,
    /// Write the elliptic and bad-hyperbolic classes as a dataset.
    #[arg(long)]
    emit_orbifold_data: Option<PathBuf>,
    #[arg(long, default_value_t = 8.0)]
    cutoff: f64,
    /// Orbifold volume for the emitted dataset; defaults to twice the
    /// orthoscheme volume.
    #[arg(long)]
    volume: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundArgs {
    /// Dataset in native JSON format.
    #[arg(long)]
    spectrum: PathBuf,
    /// Support radius R of the test function.
    #[arg(short = 'R', long = "radius")]
    radius: f64,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Granularity mode recorded with the curve.
    #[arg(long, default_value = "manifold")]
    mode: GranularityMode,
    /// Output prefix; writes `<out>.csv`, `<out>.json` and `<out>.gp`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(short = 'R', long = "radius")]
    radius: f64,
    /// manifold, orientation-reversing-orbifold or S5-quotient.
    #[arg(long)]
    mode: GranularityMode,
    /// Largest t to examine; the grid starts at 0.
    #[arg(long)]
    t_limit: f64,
    #[arg(long, default_value_t = 0.001)]
    step: f64,
    /// Exclusion certificate of the A5 quotient, required in S5-quotient mode.
    #[arg(long)]
    prereq: Option<PathBuf>,
    /// Bisect the first crossing down to this bracket width.
    #[arg(long)]
    refine: Option<f64>,
    /// Certificate JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RepArgs {
    #[arg(long, default_value = "S5")]
    big: String,
    #[arg(long, default_value = "A5")]
    small: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Skip the volume integration check.
    #[arg(long)]
    quick: bool,
}

#[derive(Args)]
struct ImportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    volume: Option<f64>,
    #[arg(long)]
    betti1: Option<u32>,
    #[arg(long)]
    cutoff: Option<f64>,
    /// Self-inverse flag for lines without a fourth column.
    #[arg(long)]
    assume_self_inverse: Option<bool>,
}

#[derive(Args)]
struct MergeArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(Error),
    Oracle(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 1,
        Error::Refused(_) => 3,
        Error::Numerical(_) | Error::Characters(_) => 4,
        Error::Io { .. }
        | Error::Parse(_)
        | Error::MissingMetadata(_)
        | Error::Validation(_)
        | Error::SupportExceedsCutoff { .. }
        | Error::MetadataMismatch(_)
        | Error::UnsupportedSymbol { .. } => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(4);
        }
    }
    let result = match cli.command {
        Command::Tetra(a) => cmd_tetra(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Rep(a) => cmd_rep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Import(a) => cmd_import(a),
        Command::Merge(a) => cmd_merge(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Oracle(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn sig(x: f64) -> String {
    format_sig(x, 12)
}

fn load_native(path: &Path) -> Result<SpectrumDataset, Error> {
    load_dataset(path, InputFormat::NativeJson, &SnappyImport::default())
}

fn cmd_tetra(args: TetraArgs) -> CmdResult {
    if !(args.cutoff > 0.0) || !args.cutoff.is_finite() {
        return Err(Failure::Usage(format!("cutoff must be positive, got {}", args.cutoff)));
    }
    let tet = CoxeterTetrahedron::new(args.coxeter)?;
    let sym = tet.symbol();
    let vol = orthoscheme_volume(&tet)?;
    let vol_closed = orthoscheme_volume_lobachevsky(&tet)?;

    let mut edges = serde_json::Map::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let l = tet.edge_length(i, j);
            edges.insert(
                format!("{}{}", VERTEX_LABELS[i], VERTEX_LABELS[j]),
                json!({ "length": l, "cosh": l.cosh(), "dihedral_angle": tet.dihedral_angle(i, j) }),
            );
        }
    }
    let mut links = serde_json::Map::new();
    for v in 0..4 {
        let mut orders: Vec<u32> = tet
            .link_angles(v)
            .iter()
            .map(|a| (std::f64::consts::PI / a).round() as u32)
            .collect();
        orders.sort_unstable();
        links.insert(VERTEX_LABELS[v].to_string(), json!(orders));
    }
    let (o, e, f) = (vertex("O").unwrap(), vertex("E").unwrap(), vertex("F").unwrap());
    let eof_link = tet.face_angle_from_link(o, e, f)?;
    let eof_gram = tet.face_angle_from_gram(o, e, f);

    let classes = centralizer_covolumes(&tet).ok();
    let sw_check = (sym == CoxeterSymbol::new(5, 3, 5)).then(|| {
        let ours = 120.0 * vol;
        json!({
            "computed_120_vol": ours,
            "reference": REFERENCE_SW_VOLUME,
            "difference": ours - REFERENCE_SW_VOLUME,
            "relative_difference": (ours - REFERENCE_SW_VOLUME) / REFERENCE_SW_VOLUME,
            "agrees_to_1e-3": (ours - REFERENCE_SW_VOLUME).abs() <= 1e-3,
        })
    });

    let mut report = json!({
        "symbol": sym.to_string(),
        "edges": edges,
        "link_orders": links,
        "angle_EOF": { "from_link": eof_link, "from_gram": eof_gram },
        "volume": { "integration": vol, "closed_form": vol_closed },
        "orbifold_volume_default": 2.0 * vol,
        "class_data": classes,
    });
    if let Some(c) = &sw_check {
        report["seifert_weber_volume_check"] = c.clone();
    }

    if let Some(path) = &args.emit_orbifold_data {
        let volume = args.volume.unwrap_or(2.0 * vol);
        let ds = emit_orbifold_dataset(&tet, args.cutoff, volume)?;
        let mut manifest = RunManifest::new(json!({
            "command": "tetra",
            "coxeter": sym.to_string(),
            "cutoff": args.cutoff,
            "volume": volume,
        }));
        manifest.write_output(path, &ds.to_json_string())?;
        manifest.save_beside(path)?;
        report["emitted"] = json!({ "path": path.display().to_string(), "volume": volume });
        if let Some(v) = args.volume {
            let rel = (v - 2.0 * vol) / (2.0 * vol);
            if rel.abs() > 1e-6 {
                eprintln!(
                    "warning: supplied orbifold volume {} differs from 2·vol{} = {} by {:.3e} (relative)",
                    sig(v),
                    sym,
                    sig(2.0 * vol),
                    rel
                );
            }
        }
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return Ok(());
    }

    println!("Coxeter orthoscheme {sym}");
    println!("edges (length, cosh length, dihedral angle π/n):");
    for i in 0..4 {
        for j in (i + 1)..4 {
            let l = tet.edge_length(i, j);
            println!(
                "  |{}{}| = {}  cosh = {}  n = {}",
                VERTEX_LABELS[i],
                VERTEX_LABELS[j],
                sig(l),
                sig(l.cosh()),
                (std::f64::consts::PI / tet.dihedral_angle(i, j)).round()
            );
        }
    }
    println!("vertex links (orders of the three edges):");
    for (label, orders) in &links {
        println!("  {label}: {orders}");
    }
    println!("angle EOF = {} (link) / {} (Gram)", sig(eof_link), sig(eof_gram));
    println!("volume = {} (integration), {} (closed form)", sig(vol), sig(vol_closed));
    match &classes {
        Some(c) => {
            if !c.verified {
                println!("class data (derived, unverified):");
            } else {
                println!("class data:");
            }
            for e in &c.elliptic_classes {
                println!(
                    "  elliptic order {} holonomy {} covolume {} torsion {} count {} axis {}",
                    e.order,
                    sig(e.holonomy),
                    sig(e.covolume),
                    e.torsion,
                    e.count,
                    e.axis
                );
            }
            for a in &c.bad_axes {
                println!(
                    "  axis {} order {} primitive length {} covolume/class {}",
                    a.axis,
                    a.order,
                    sig(a.primitive_length),
                    sig(a.covolume_per_class)
                );
            }
        }
        None => println!("class data: not available for {sym}"),
    }
    if let Some(c) = sw_check {
        let ours = c["computed_120_vol"].as_f64().unwrap();
        let diff = ours - REFERENCE_SW_VOLUME;
        let verdict = if diff.abs() <= 1e-3 { "agrees" } else { "DISCREPANCY" };
        println!(
            "120·vol = {} vs reference vol(SW) ≈ {}: difference {} ({:.3}%) {verdict}",
            sig(ours),
            REFERENCE_SW_VOLUME,
            format_sig(diff, 6),
            100.0 * diff / REFERENCE_SW_VOLUME
        );
    }
    if let Some(e) = report.get("emitted") {
        println!("wrote {}", e["path"].as_str().unwrap_or_default());
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_bound(args: BoundArgs) -> CmdResult {
    if !(args.step > 0.0) {
        return Err(Failure::Usage(format!("step must be positive, got {}", args.step)));
    }
    let ds = load_native(&args.spectrum)?;
    let m = granularity_for(ds.name(), args.mode);
    let curve = scan(&ds, args.radius, args.t_min, args.t_max, args.step)?.with_granularity(m.value);

    let csv = with_suffix(&args.out, "csv");
    let json_path = with_suffix(&args.out, "json");
    let gp = with_suffix(&args.out, "gp");
    let csv_name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();

    let mut manifest = RunManifest::new(json!({
        "command": "bound",
        "R": args.radius,
        "t_min": args.t_min,
        "t_max": args.t_max,
        "step": args.step,
        "mode": args.mode.as_str(),
        "granularity": m.value,
    }));
    manifest.add_input(&args.spectrum)?;
    manifest.write_output(&csv, &curve.to_csv())?;
    manifest.write_output(&json_path, &curve.to_json_string())?;
    manifest.write_output(&gp, &curve.plot_script(&csv_name))?;
    manifest.save_beside(&args.out)?;

    let (lo, hi) = curve
        .grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.j), hi.max(s.j)));
    println!(
        "{} samples of J_{{{},t}} on [{}, {}]: min {}, max {}",
        curve.grid.len(),
        sig(args.radius),
        sig(args.t_min),
        sig(args.t_max),
        sig(lo),
        sig(hi)
    );
    let negative = curve.negative_samples().count();
    if negative > 0 {
        eprintln!("warning: {negative} samples have J < 0; the dataset is inconsistent");
    }
    Ok(())
}

fn check_prereq(cert: &Certificate, ds: &SpectrumDataset, t_limit: f64) -> Result<String, Error> {
    let s = &cert.statement;
    if s.dataset_fingerprint == ds.fingerprint() {
        return Err(Error::Refused(
            "the prerequisite certificate is for the same dataset; it must exclude eigenvalues of the A5 quotient".into(),
        ));
    }
    if s.grid_start != 0.0 {
        return Err(Error::Refused(format!(
            "prerequisite exclusion starts at t = {}, not 0",
            s.grid_start
        )));
    }
    if s.t_star < t_limit {
        return Err(Error::Refused(format!(
            "prerequisite excludes eigenvalues only up to t = {}, below the requested t-limit {}",
            sig(s.t_star),
            sig(t_limit)
        )));
    }
    Ok(format!(
        "granularity 4 relies on the exclusion certificate for `{}` (sha256 {}) up to t = {}",
        s.dataset_name,
        s.dataset_fingerprint,
        sig(s.t_star)
    ))
}

fn cmd_certify(args: CertifyArgs) -> CmdResult {
    if !(args.step > 0.0) {
        return Err(Failure::Usage(format!("step must be positive, got {}", args.step)));
    }
    if !(args.t_limit > 0.0) {
        return Err(Failure::Usage(format!("t-limit must be positive, got {}", args.t_limit)));
    }
    let ds = load_native(&args.spectrum)?;
    let mut manifest = RunManifest::new(json!({
        "command": "certify",
        "R": args.radius,
        "mode": args.mode.as_str(),
        "t_limit": args.t_limit,
        "step": args.step,
        "refine": args.refine,
    }));
    manifest.add_input(&args.spectrum)?;

    let prereq_note = match (args.mode, &args.prereq) {
        (GranularityMode::S5Quotient, None) => {
            return Err(Error::Refused(
                "S5-quotient mode needs --prereq: an exclusion certificate showing the A5 quotient \
                 has no eigenvalues in the examined range, without which eigenspaces may contain \
                 A5-invariant vectors and granularity 4 does not follow"
                    .into(),
            )
            .into())
        }
        (GranularityMode::S5Quotient, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io {
                path: p.clone(),
                source: e,
            })?;
            manifest.add_input(p)?;
            Some(check_prereq(&Certificate::from_json_str(&text)?, &ds, args.t_limit)?)
        }
        (_, Some(_)) => {
            return Err(Failure::Usage("--prereq is only used in S5-quotient mode".into()))
        }
        (_, None) => None,
    };

    let g = granularity_for(ds.name(), args.mode);
    let curve = scan(&ds, args.radius, 0.0, args.t_limit, args.step)?.with_granularity(g.value);
    let mut cert = certify_exclusion(&curve, g.value, args.t_limit)?;
    if let Some(tol) = args.refine {
        cert = refine_exclusion(&ds, &cert, tol)?;
    }
    cert = cert.with_note(g.note);
    if let Some(note) = prereq_note {
        cert = cert.with_note(note);
    }
    if matches!(args.mode, GranularityMode::Manifold | GranularityMode::S5Quotient) {
        cert = lspace_verdict(&lambda_one_bound(&cert)?)?;
    }

    manifest.write_output(&args.out, &cert.to_json_string())?;
    manifest.save_beside(&args.out)?;

    let s = &cert.statement;
    println!(
        "{:?}: J_{{{},t}} < {} for sampled t in [0, {}]",
        cert.kind,
        sig(s.support_radius),
        s.threshold,
        sig(s.t_star)
    );
    if let Some(b) = s.lambda_lower_bound {
        println!("λ₁* > {}", sig(b));
    }
    if let (Some(ok), Some(margin)) = (s.lspace_criterion_satisfied, s.margin) {
        println!("L-space criterion λ₁* > 2: {ok} (margin {})", sig(margin));
    }
    println!("({})", s.sampling);
    Ok(())
}

fn table(name: &str) -> Result<FiniteGroupCharacterTable, Failure> {
    match name.to_ascii_uppercase().as_str() {
        "S5" => Ok(FiniteGroupCharacterTable::s5()),
        "A5" => Ok(FiniteGroupCharacterTable::a5()),
        _ => Err(Failure::Usage(format!("unknown group `{name}` (expected S5 or A5)"))),
    }
}

fn cmd_rep(args: RepArgs) -> CmdResult {
    let big = table(&args.big)?;
    let small = table(&args.small)?;
    let fusion = match (big.group_name.as_str(), small.group_name.as_str()) {
        ("S5", "A5") => a5_in_s5(),
        (b, s) if b == s => identity_fusion(&big),
        (b, s) => return Err(Failure::Usage(format!("{s} is not a subgroup of {b}"))),
    };
    let mut validation = serde_json::Map::new();
    for t in [&big, &small] {
        let status = match t.validate() {
            Ok(()) => "ok".to_string(),
            Err(e) => return Err(Failure::Oracle(e.to_string())),
        };
        validation.insert(t.group_name.clone(), json!(status));
    }
    let mut restriction = serde_json::Map::new();
    for (i, r) in big.irreps.iter().enumerate() {
        let row = (0..small.irreps.len())
            .map(|j| restriction_multiplicity(&big, &small, &fusion, i, j))
            .collect::<Result<Vec<u32>, Error>>()?;
        restriction.insert(r.name.clone(), json!(row));
    }
    let min = min_dim_without_subgroup_invariants(&big, &small, &fusion)?;
    let report = json!({
        "big": big.group_name,
        "small": small.group_name,
        "small_irreps": small.irreps.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
        "validation": validation,
        "restriction_multiplicities": restriction,
        "min_dimension_without_invariants": min,
        "granularity_gain": min.is_some(),
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let cfg = OracleConfig {
        include_volume: !args.quick,
        ..Default::default()
    };
    let report = run_oracles(&cfg);
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = report.failures().count();
    if failed > 0 {
        return Err(Failure::Oracle(format!("{failed} oracle check(s) failed")));
    }
    Ok(())
}

fn cmd_import(args: ImportArgs) -> CmdResult {
    let import = SnappyImport {
        name: args.name.clone(),
        volume: args.volume,
        betti1: args.betti1,
        cutoff: args.cutoff,
        assume_self_inverse: args.assume_self_inverse,
    };
    let ds = load_dataset(&args.input, InputFormat::SnappyText, &import)?;
    let mut manifest = RunManifest::new(json!({
        "command": "import",
        "name": args.name,
        "volume": args.volume,
        "betti1": args.betti1,
        "cutoff": args.cutoff,
        "assume_self_inverse": args.assume_self_inverse,
    }));
    manifest.add_input(&args.input)?;
    manifest.write_output(&args.out, &ds.to_json_string())?;
    manifest.save_beside(&args.out)?;
    println!("imported {} class records into {}", ds.classes().len(), args.out.display());
    Ok(())
}

fn cmd_merge(args: MergeArgs) -> CmdResult {
    let a = load_native(&args.a)?;
    let b = load_native(&args.b)?;
    let merged = merge_datasets(&a, &b)?;
    let mut manifest = RunManifest::new(json!({ "command": "merge" }));
    manifest.add_input(&args.a)?;
    manifest.add_input(&args.b)?;
    manifest.write_output(&args.out, &merged.to_json_string())?;
    manifest.save_beside(&args.out)?;
    println!(
        "merged {} + {} records into {} (cutoff {})",
        a.classes().len(),
        b.classes().len(),
        merged.classes().len(),
        sig(merged.cutoff())
    );
    Ok(())
}
