use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bundled::arrangement::planarize_components;
use bundled::bipartite::{bipartite_pipeline, require_bipartite};
use bundled::generate::{generate, GeneratorSpec};
use bundled::harness::{run_harness, HarnessConfig, Suite};
use bundled::net::check_pseudosegments;
use bundled::oracle::verify::{verify_inequalities, RunSummary, VerifyReport};
use bundled::oracle::{brute_force_min_rectangulation, OptStats, DEFAULT_CAP};
use bundled::rectangulation::{BundlingOutput, Rectangulation};
use bundled::render::{render_instance, render_net};
use bundled::{
    extract_rectangulation, greedy_rectangulate, net_of, to_bundling, Arrangement, CutSet, DualNet,
    VertexOrder,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "bundle",
    version,
    about = "Bundle crossings of pseudosegment drawings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, Default, PartialEq, Eq)]
enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Order {
    #[default]
    Id,
    Random,
}

#[derive(Args)]
struct Run {
    /// Instance file, or `-` for stdin.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    order: Order,
    /// Seed for `--order random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write an SVG drawing here.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long, env = "BUNDLE_ORACLE_CAP", default_value_t = DEFAULT_CAP)]
    oracle_cap: usize,
}

impl Run {
    fn order(&self) -> VertexOrder {
        match self.order {
            Order::Id => VertexOrder::ById,
            Order::Random => VertexOrder::Random(self.seed),
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Drawing {
    #[default]
    Instance,
    Greedy,
    Bipartite,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance, e.g. `--family circular:8` or `--family grid:4x4`.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Validate an instance and summarize its net.
    BuildNet(Run),
    /// Greedy rectangulation and its bundling.
    Greedy(Run),
    /// Gain-seeded greedy for two-colored instances.
    Bipartite(Run),
    /// Exhaustive minimum rectangulation.
    Exact(Run),
    /// Check every bound against the oracle; exits nonzero on a violation.
    Verify(Run),
    /// Draw an instance or one of its bundlings as SVG.
    Render {
        #[command(flatten)]
        run: Run,
        #[arg(long, value_enum, default_value_t)]
        what: Drawing,
    },
    /// Batch run over generated instances; exits nonzero on any failure.
    Harness {
        /// JSON config with `suites`, `oracle_cap`, `bipartite`, `random_order`.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Single family instead of a config; default is 1000 circular instances.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "BUNDLE_ORACLE_CAP", default_value_t = DEFAULT_CAP)]
        oracle_cap: usize,
        #[arg(long, value_enum, default_value_t)]
        order: Order,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn read_instance(path: &Path) -> Result<Arrangement> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(Arrangement::parse(&text)?)
}

/// One net per connected component, after pseudosegment validation.
fn nets(arr: &Arrangement) -> Result<Vec<DualNet>> {
    let mut out = Vec::new();
    for p in planarize_components(arr)? {
        let report = check_pseudosegments(&p);
        if !report.is_empty() {
            bail!("not a pseudosegment arrangement: {:?}", report.violations);
        }
        out.push(net_of(&p)?);
    }
    info!("{} component(s)", out.len());
    Ok(out)
}

fn write_svg(path: &Option<PathBuf>, svg: impl FnOnce() -> String) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, svg()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// Bundling output merged over components.
fn merged(parts: &[(&DualNet, &Rectangulation)]) -> Result<BundlingOutput> {
    let mut out = BundlingOutput {
        bundles: Vec::new(),
        r: 0,
        s: 0,
        h: 0,
        t: 0,
    };
    for (net, rect) in parts {
        out.bundles.extend(to_bundling(net, rect)?.bundles);
        out.r += rect.r;
        out.s += rect.s;
        out.h += rect.h;
        out.t += net.toothed_count();
    }
    Ok(out)
}

fn emit_bundling(b: &BundlingOutput, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(b).expect("serializable")),
        Format::Tsv => {
            println!("R\tS\tH\tt\tbundles");
            println!("{}\t{}\t{}\t{}\t{}", b.r, b.s, b.h, b.t, b.bundles.len());
        }
    }
}

fn opt_json(o: &OptStats) -> serde_json::Value {
    json!({
        "R_opt": o.r_opt, "S_opt": o.s_opt, "delta": o.delta, "H": o.h, "H_odd": o.h_odd,
        "H_2": o.h2, "t": o.t, "optimal_count": o.optimal_count, "complete": o.complete,
        "holes_meet_two": o.holes_meet_two, "S_flipped": o.s_flipped, "tie_vertices": o.tie_vertices,
    })
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` signals a failed check.
fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen { family, seed, out } => {
            let spec = GeneratorSpec {
                family: family.parse()?,
                seed,
            };
            let text = serde_json::to_string_pretty(&generate(&spec)?.to_file())?;
            match out {
                Some(p) => fs::write(&p, text + "\n")
                    .with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
        }
        Cmd::BuildNet(run) => {
            let arr = read_instance(&run.input)?;
            let nets = nets(&arr)?;
            match run.format {
                Format::Json => {
                    let comps: Vec<_> = nets
                        .iter()
                        .map(|n| {
                            json!({
                                "vertices": n.num_vertices(), "edges": n.num_edges(), "squares": n.num_squares(),
                                "H": n.hole_count(), "H_odd": n.odd_hole_count(), "t": n.toothed_count(),
                                "exp": n.total_exponent(), "bipartite": require_bipartite(n).is_ok(),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({ "components": comps }))?
                    );
                }
                Format::Tsv => {
                    for n in &nets {
                        print!("{}", n.dump());
                    }
                }
            }
            write_svg(&run.svg, || render_net(&nets[0], None, None))?;
        }
        Cmd::Greedy(run) => {
            let nets = nets(&read_instance(&run.input)?)?;
            let rects = nets
                .iter()
                .map(|n| {
                    Ok(extract_rectangulation(
                        n,
                        &greedy_rectangulate(n, &CutSet::default(), run.order()),
                    )?)
                })
                .collect::<Result<Vec<_>>>()?;
            let pairs: Vec<_> = nets.iter().zip(&rects).collect();
            emit_bundling(&merged(&pairs)?, run.format);
            write_svg(&run.svg, || {
                render_net(
                    &nets[0],
                    Some(&rects[0]),
                    to_bundling(&nets[0], &rects[0]).ok().as_ref(),
                )
            })?;
        }
        Cmd::Bipartite(run) => {
            let nets = nets(&read_instance(&run.input)?)?;
            let mut rows = Vec::new();
            for n in &nets {
                let b = bipartite_pipeline(n, run.order())?;
                let bounds = if n.num_squares() <= run.oracle_cap {
                    let o = brute_force_min_rectangulation(n, run.oracle_cap)?;
                    let r = b.rectangulation.r as i64;
                    Some((
                        2 * b.rectangulation.s as i64 <= 3 * o.s_opt as i64 + 1,
                        2 * r <= 9 * o.r_opt as i64 + o.t as i64,
                    ))
                } else {
                    None
                };
                rows.push((b, bounds));
            }
            match run.format {
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(b, bounds)| {
                            json!({
                                "color": b.color, "gain": b.gain, "A": b.seed_size,
                                "S": b.rectangulation.s, "R": b.rectangulation.r, "H": b.rectangulation.h,
                                "s_bound": bounds.map(|x| x.0), "r_bound": bounds.map(|x| x.1),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({ "components": v }))?
                    );
                }
                Format::Tsv => {
                    println!("color\tgain\tA\tS\tR\tH\ts_bound\tr_bound");
                    let fmt = |x: Option<bool>| x.map_or("-".into(), |b| b.to_string());
                    for (b, bounds) in &rows {
                        println!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            b.color,
                            b.gain,
                            b.seed_size,
                            b.rectangulation.s,
                            b.rectangulation.r,
                            b.rectangulation.h,
                            fmt(bounds.map(|x| x.0)),
                            fmt(bounds.map(|x| x.1))
                        );
                    }
                }
            }
            let first = &rows[0].0.rectangulation;
            write_svg(&run.svg, || {
                render_net(
                    &nets[0],
                    Some(first),
                    to_bundling(&nets[0], first).ok().as_ref(),
                )
            })?;
        }
        Cmd::Exact(run) => {
            let nets = nets(&read_instance(&run.input)?)?;
            let opts = nets
                .iter()
                .map(|n| Ok(brute_force_min_rectangulation(n, run.oracle_cap)?))
                .collect::<Result<Vec<_>>>()?;
            match run.format {
                Format::Json => {
                    let v: Vec<_> = opts.iter().map(opt_json).collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({ "components": v }))?
                    );
                }
                Format::Tsv => {
                    println!("R_opt\tS_opt\tdelta\tH\tH_odd\tH_2\tt\toptimal\tcomplete");
                    for o in &opts {
                        println!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            o.r_opt,
                            o.s_opt,
                            o.delta,
                            o.h,
                            o.h_odd,
                            o.h2,
                            o.t,
                            o.optimal_count,
                            o.complete
                        );
                    }
                }
            }
            let w = &opts[0].witness;
            write_svg(&run.svg, || {
                render_net(&nets[0], Some(w), to_bundling(&nets[0], w).ok().as_ref())
            })?;
        }
        Cmd::Verify(run) => {
            let nets = nets(&read_instance(&run.input)?)?;
            let mut ok = true;
            for (i, n) in nets.iter().enumerate() {
                let rect = extract_rectangulation(
                    n,
                    &greedy_rectangulate(n, &CutSet::default(), run.order()),
                )?;
                let bip = if require_bipartite(n).is_ok() {
                    let b = bipartite_pipeline(n, run.order())?;
                    Some(RunSummary {
                        r: b.rectangulation.r,
                        s: b.rectangulation.s,
                    })
                } else {
                    None
                };
                let opt = brute_force_min_rectangulation(n, run.oracle_cap)?;
                let report: VerifyReport = verify_inequalities(
                    &opt,
                    n.total_exponent(),
                    RunSummary {
                        r: rect.r,
                        s: rect.s,
                    },
                    bip,
                );
                if nets.len() > 1 {
                    println!("# component {i}");
                }
                match run.format {
                    Format::Tsv => print!("{}", report.to_tsv()),
                    Format::Json => {
                        let checks: Vec<_> = report
                            .checks
                            .iter()
                            .map(|c| json!({ "name": c.name, "applies": c.applies, "lhs": c.lhs as f64 / c.scale as f64, "rhs": c.rhs as f64 / c.scale as f64, "holds": c.holds() }))
                            .collect();
                        println!("{}", serde_json::to_string_pretty(&checks)?);
                    }
                }
                let failed = report.failures();
                eprintln!(
                    "component {i}: {} checks, {} failed (R_greedy {} R_opt {} S_greedy {} S_opt {})",
                    report.checks.len(),
                    failed.len(),
                    rect.r,
                    opt.r_opt,
                    rect.s,
                    opt.s_opt
                );
                ok &= failed.is_empty();
            }
            return Ok(ok);
        }
        Cmd::Render { run, what } => {
            let arr = read_instance(&run.input)?;
            let svg = match what {
                Drawing::Instance => {
                    let parts = planarize_components(&arr)?;
                    render_instance(&parts[0])
                }
                Drawing::Greedy => {
                    let n = &nets(&arr)?[0];
                    let rect = extract_rectangulation(
                        n,
                        &greedy_rectangulate(n, &CutSet::default(), run.order()),
                    )?;
                    render_net(n, Some(&rect), Some(&to_bundling(n, &rect)?))
                }
                Drawing::Bipartite => {
                    let n = &nets(&arr)?[0];
                    let rect = bipartite_pipeline(n, run.order())?.rectangulation;
                    render_net(n, Some(&rect), Some(&to_bundling(n, &rect)?))
                }
            };
            match run.svg {
                Some(p) => {
                    fs::write(&p, svg).with_context(|| format!("writing {}", p.display()))?
                }
                None => print!("{svg}"),
            }
        }
        Cmd::Harness {
            config,
            family,
            count,
            seed,
            oracle_cap,
            order,
            format,
        } => {
            let mut cfg = match (config, family) {
                (Some(path), _) => serde_json::from_str::<HarnessConfig>(
                    &fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?,
                )?,
                (None, Some(f)) => HarnessConfig {
                    suites: vec![Suite {
                        family: f,
                        count,
                        seed,
                    }],
                    oracle_cap,
                    bipartite: true,
                    random_order: false,
                },
                (None, None) => HarnessConfig::circular_default(),
            };
            if matches!(order, Order::Random) {
                cfg.random_order = true;
            }
            let report = run_harness(&cfg)?;
            if format == Format::Tsv {
                print!("{}", report.to_tsv());
                eprint!("{}", report.summary());
            } else {
                print!("{}", report.summary());
            }
            return Ok(report.failures().is_empty());
        }
    }
    Ok(true)
}
