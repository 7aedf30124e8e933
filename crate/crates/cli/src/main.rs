use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use prelie_core::canon::{canonical_form, pairing};
use prelie_core::enumerate::{self, counts_report, primitive_classes, write_cache};
use prelie_core::format::{load_poset, load_topology, to_dot, StructureFile};
use prelie_core::nap::{
    ck_coproduct, nap_coproduct, nap_coproduct_down, nap_product, nap_product_up, prelie, prelie_up,
    searrow_coproduct,
};
use prelie_core::topology::top_nap_coproduct;
use prelie_core::trees::freeness_check;
use prelie_core::verify::{self, Law};
use prelie_core::{Error, FormalSum, Poset, Structure, TensorSum, Topology};

#[derive(Parser)]
#[command(name = "prelie", version, about = "Pre-Lie and NAP structures on finite posets and topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count (and optionally list) isomorphism classes on n points.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        topologies: bool,
        /// Only list connected classes.
        #[arg(long)]
        connected: bool,
        /// List every class, not only the counts.
        #[arg(long)]
        classes: bool,
        /// Write the class table to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Product of two structures.
    Product {
        #[arg(long, value_enum)]
        law: ProductLaw,
        left: String,
        right: String,
        #[arg(long)]
        topologies: bool,
        #[arg(long)]
        json: bool,
    },
    /// Coproduct of one structure.
    Coproduct {
        #[arg(long, value_enum)]
        law: CoproductLaw,
        input: String,
        #[arg(long)]
        topologies: bool,
        #[arg(long)]
        json: bool,
    },
    /// Number of isomorphisms between two structures.
    Pair {
        left: String,
        right: String,
        #[arg(long)]
        topologies: bool,
    },
    /// Sweep an identity over every class tuple in range.
    Verify {
        #[arg(long)]
        law: String,
        #[arg(long)]
        max_total: usize,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        topologies: bool,
        #[arg(long)]
        json: bool,
    },
    /// Basis of the primitive elements on n points.
    Primitives {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare decorated-tree counts with connected class counts.
    FreenessCheck {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print a structure as DOT or normalized JSON with its class key.
    Export {
        input: String,
        #[arg(long)]
        topologies: bool,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductLaw {
    Prelie,
    Nap,
    PrelieUp,
    NapUp,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoproductLaw {
    Nap,
    NapDown,
    Ck,
    Searrow,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

enum Failure {
    /// An identity did not hold.
    Law,
    /// Bad arguments or input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn load<S: Loadable>(arg: &str) -> Result<(Vec<String>, S), Failure> {
    let text = read_input(arg)?;
    S::load(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

trait Loadable: Structure {
    fn load(text: &str) -> prelie_core::Result<(Vec<String>, Self)>;
}

impl Loadable for Poset {
    fn load(text: &str) -> prelie_core::Result<(Vec<String>, Self)> {
        load_poset(text).map(|n| (n.names, n.structure))
    }
}

impl Loadable for Topology {
    fn load(text: &str) -> prelie_core::Result<(Vec<String>, Self)> {
        load_topology(text).map(|n| (n.names, n.structure))
    }
}

fn print_sum(s: &FormalSum, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&s.to_json_terms()).expect("serializable"));
    } else {
        println!("{}", s.display());
    }
}

fn print_tensor(t: &TensorSum, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&t.to_json_terms()).expect("serializable"));
    } else {
        println!("{}", t.display());
    }
}

fn product<S: Loadable>(law: ProductLaw, left: &str, right: &str) -> Result<FormalSum, Failure> {
    let (_, p) = load::<S>(left)?;
    let (_, q) = load::<S>(right)?;
    Ok(match law {
        ProductLaw::Prelie => prelie(&p, &q)?,
        ProductLaw::Nap => nap_product(&p, &q)?,
        ProductLaw::PrelieUp => prelie_up(&p, &q)?,
        ProductLaw::NapUp => nap_product_up(&p, &q)?,
    })
}

fn require_connected<S: Structure>(s: &S) -> CliResult {
    if s.relation().is_connected() {
        Ok(())
    } else {
        Err(Error::NotConnected.into())
    }
}

fn coproduct(law: CoproductLaw, input: &str, topologies: bool) -> Result<TensorSum, Failure> {
    if topologies {
        let (_, t) = load::<Topology>(input)?;
        return match law {
            CoproductLaw::Nap => {
                require_connected(&t)?;
                Ok(top_nap_coproduct(&t))
            }
            CoproductLaw::Ck => Ok(ck_coproduct(&t)),
            CoproductLaw::Searrow => Ok(searrow_coproduct(&t)),
            CoproductLaw::NapDown => Err(Failure::Usage("nap-down is defined for posets only".into())),
        };
    }
    let (_, p) = load::<Poset>(input)?;
    Ok(match law {
        CoproductLaw::Nap => {
            require_connected(&p)?;
            nap_coproduct(&p)
        }
        CoproductLaw::NapDown => {
            require_connected(&p)?;
            nap_coproduct_down(&p)
        }
        CoproductLaw::Ck => ck_coproduct(&p),
        CoproductLaw::Searrow => searrow_coproduct(&p),
    })
}

fn pair<S: Loadable>(left: &str, right: &str) -> Result<u64, Failure> {
    let (_, q) = load::<S>(left)?;
    let (_, r) = load::<S>(right)?;
    Ok(pairing(&q, &r))
}

fn export<S: Loadable>(input: &str, format: ExportFormat) -> CliResult {
    let (names, s) = load::<S>(input)?;
    match format {
        ExportFormat::Dot => print!("{}", to_dot(&s, Some(&names))),
        ExportFormat::Json => {
            let (key, _) = canonical_form(&s);
            let file = StructureFile::from_relation(s.relation(), Some(&names));
            let out = json!({
                "elements": file.elements,
                "relations": file.relations,
                "class_key": key,
                "class": key.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Enumerate {
            n,
            topologies,
            connected,
            classes,
            out,
            json: as_json,
        } => {
            let table = if topologies {
                enumerate::enumerate_topologies(n)?
            } else {
                enumerate::enumerate_posets(n)?
            };
            if let Some(dir) = out {
                let path = write_cache(&dir, &table)?;
                eprintln!("wrote {}", path.display());
            }
            let rows: Vec<_> = table.rows.iter().filter(|r| r.connected || !connected).collect();
            if as_json {
                let out = json!({
                    "kind": table.kind.name(),
                    "n": n,
                    "classes": table.class_count(),
                    "connected": table.connected_count(),
                    "labeled": table.labeled_count(),
                    "rows": if classes { json!(rows) } else { json!(null) },
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            } else {
                println!(
                    "{} n={}: {} classes, {} connected, {} labeled",
                    table.kind.name(),
                    n,
                    table.class_count(),
                    table.connected_count(),
                    table.labeled_count()
                );
                if classes {
                    for r in rows {
                        println!("{}  sigma={}  {}", r.key.to_hex(), r.sigma, r.key);
                    }
                }
            }
            Ok(())
        }
        Command::Product {
            law,
            left,
            right,
            topologies,
            json: as_json,
        } => {
            let s = if topologies {
                product::<Topology>(law, &left, &right)?
            } else {
                product::<Poset>(law, &left, &right)?
            };
            print_sum(&s, as_json);
            Ok(())
        }
        Command::Coproduct {
            law,
            input,
            topologies,
            json: as_json,
        } => {
            print_tensor(&coproduct(law, &input, topologies)?, as_json);
            Ok(())
        }
        Command::Pair {
            left,
            right,
            topologies,
        } => {
            let v = if topologies {
                pair::<Topology>(&left, &right)?
            } else {
                pair::<Poset>(&left, &right)?
            };
            println!("{v}");
            Ok(())
        }
        Command::Verify {
            law,
            max_total,
            parallel,
            topologies,
            json: as_json,
        } => {
            let law: Law = law.parse()?;
            let start = Instant::now();
            let report = verify::run(law, topologies, max_total, parallel)?;
            eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
            if as_json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                println!(
                    "{} [{}] {}: {} instances, {} failures",
                    report.law,
                    report.kind.name(),
                    report.range,
                    report.instances,
                    report.failures.len()
                );
                for f in &report.failures {
                    println!("  FAIL {}: {}", f.inputs.join(", "), f.residual);
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Law)
            }
        }
        Command::Primitives { n, json: as_json } => {
            let basis = primitive_classes(n)?;
            if as_json {
                let terms: Vec<_> = basis.iter().map(FormalSum::to_json_terms).collect();
                println!("{}", serde_json::to_string_pretty(&terms).expect("serializable"));
                return Ok(());
            }
            println!("{} primitive(s) on {} points", basis.len(), n);
            for (i, v) in basis.iter().enumerate() {
                println!("#{}: {}", i + 1, v.display().replace('\n', " + "));
                for key in v.keys() {
                    print!("{}", to_dot(&key.poset()?, None));
                }
            }
            Ok(())
        }
        Command::FreenessCheck { max_n, json: as_json } => {
            let rows = freeness_check(max_n)?;
            let counts = counts_report(max_n)?;
            if as_json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"rows": rows, "counts": counts})).expect("serializable")
                );
            } else {
                println!(" n  primitives  trees  connected  residual  solved g_n");
                for r in &rows {
                    println!(
                        "{:>2}  {:>10}  {:>5}  {:>9}  {:>8}  {:>10}",
                        r.n, r.generators, r.tree_count, r.class_count, r.residual, r.solved_generator
                    );
                }
            }
            if rows.iter().all(|r| r.residual == 0 && r.solved_generator >= 0) {
                Ok(())
            } else {
                Err(Failure::Law)
            }
        }
        Command::Export {
            input,
            topologies,
            format,
        } => {
            if topologies {
                export::<Topology>(&input, format)
            } else {
                export::<Poset>(&input, format)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Law) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
