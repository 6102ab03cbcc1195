use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fcaerr::bmf::{bmf_factorize, boolean_product, default_rank, BmfParams};
use fcaerr::conceptual::{attribute_split, consistent_part_measure, error_join_complement};
use fcaerr::cxt::{read_cxt_file, write_cxt, write_cxt_file};
use fcaerr::lattice::{export_dot, ConceptLattice, Labeling};
use fcaerr::measure::canonical_scale;
use fcaerr::report::error_report;
use fcaerr::scaling::{parse_spec, scale_csv, ScalingSpec, Table};
use fcaerr::{sigma_context, Error, FormalContext, ObjectMap, ObjectSet, DEFAULT_CAP};

#[derive(Parser)]
#[command(name = "fcaerr", version, about = "Conceptual scaling errors of binary data scalings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scale a CSV table into a formal context.
    Scale {
        #[arg(long = "in")]
        input: PathBuf,
        /// JSON object mapping column names to {"kind": ..., "breaks": [...]}.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Output .cxt (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factorize a context into a scale S and loadings H.
    Factorize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output directory for S.cxt, H.cxt and factorization.json.
        #[arg(long)]
        out: PathBuf,
        /// Rank; defaults to round(sqrt(|M|)).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.1)]
        lambda_w: f64,
        #[arg(long, default_value_t = 1.1)]
        lambda_h: f64,
    },
    /// Report size, lattice size, AE and CE of a context, an approximation and a scale.
    Evaluate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Scale context S.
        #[arg(long)]
        scale: Option<PathBuf>,
        /// Loadings H; the approximation is S·H.
        #[arg(long, requires = "scale", conflicts_with = "approx")]
        h: Option<PathBuf>,
        /// Approximated context, given directly.
        #[arg(long)]
        approx: Option<PathBuf>,
        /// JSON object mapping context object names to scale object names.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Row label (defaults to the input file stem).
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        report: Format,
        #[arg(long)]
        ae_only: bool,
        #[command(flatten)]
        cap: Cap,
    },
    /// Export the concept lattice as Graphviz DOT.
    Lattice {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output .dot (stdout if omitted).
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Base context: extents whose preimage is not closed in it are drawn red.
        #[arg(long, value_name = "BASE")]
        highlight_errors: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Draw a part of the scaling instead of the whole scale.
        #[arg(long, value_enum, requires = "highlight_errors")]
        split: Option<Split>,
        #[arg(long, default_value = "reduced")]
        labels: Labeling,
        #[command(flatten)]
        cap: Cap,
    },
}

#[derive(Args)]
struct Cap {
    /// Maximum number of concepts enumerated.
    #[arg(long, env = "FCAERR_CAP", default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    cap: usize,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("cap must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    /// The consistent part of the reflected extents.
    Valid,
    /// The join-complement of the consistent part.
    Complement,
    /// The scale restricted to its inconsistent attributes.
    Attributes,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e @ Error::Intractable { .. })) => {
            eprintln!("error: {e} (raise --cap or FCAERR_CAP, or use --ae-only)");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Scale { input, spec, out } => {
            let spec = match spec {
                Some(p) => parse_spec(&std::fs::read_to_string(p)?)?,
                None => ScalingSpec::new(),
            };
            let ctx = scale_csv(&Table::from_path(&input)?, &spec)?;
            emit(&write_cxt(&ctx), out.as_deref())
        }
        Command::Factorize {
            input,
            out,
            k,
            max_iter,
            restarts,
            seed,
            lambda_w,
            lambda_h,
        } => {
            let ctx = read_cxt_file(&input)?;
            let params = BmfParams {
                rank: k.unwrap_or_else(|| default_rank(ctx.num_attributes())),
                max_iter,
                restarts,
                lambda_w,
                lambda_h,
                seed,
                ..BmfParams::new(1)
            };
            let f = bmf_factorize(&ctx, &params)?;
            std::fs::create_dir_all(&out)?;
            write_cxt_file(out.join("S.cxt"), &f.scale)?;
            write_cxt_file(out.join("H.cxt"), &f.loadings)?;
            let sidecar = serde_json::to_string_pretty(&f.sidecar()?).map_err(Error::from)?;
            std::fs::write(out.join("factorization.json"), sidecar + "\n")?;
            println!(
                "k={} best_restart={} frobenius={:.2} -> {}",
                params.rank,
                f.best_restart,
                f.fit_error,
                out.display()
            );
            Ok(())
        }
        Command::Evaluate {
            input,
            scale,
            h,
            approx,
            map,
            name,
            report,
            ae_only,
            cap,
        } => {
            let k = read_cxt_file(&input)?;
            let scale = scale.map(read_cxt_file).transpose()?;
            let map = match &scale {
                Some(s) => Some(load_map(&k, s, map.as_deref())?),
                None if map.is_some() => return Err(Failure::Usage("--map needs --scale".into())),
                None => None,
            };
            let approx = match (approx, h) {
                (Some(p), _) => Some(align_attributes(&k, &align_objects(&k, &read_cxt_file(p)?)?)?),
                (None, Some(p)) => {
                    let s = scale.as_ref().expect("clap enforces --scale");
                    let product = boolean_product(s, &read_cxt_file(p)?)?;
                    let pulled = sigma_context(&k, &product, map.as_ref().expect("map resolved with scale"))?;
                    Some(align_attributes(&k, &pulled)?)
                }
                (None, None) => None,
            };
            let name = name.unwrap_or_else(|| stem(&input));
            let r = error_report(&name, &k, scale.as_ref().zip(map.as_ref()), approx.as_ref(), cap.cap, ae_only)?;
            match report {
                Format::Json => println!("{}", r.to_json()),
                Format::Table => print!("{}", r.to_table()),
            }
            Ok(())
        }
        Command::Lattice {
            input,
            dot,
            highlight_errors,
            map,
            split,
            labels,
            cap,
        } => {
            let ctx = read_cxt_file(&input)?;
            let name = stem(&input);
            let text = match highlight_errors {
                None => {
                    if map.is_some() {
                        return Err(Failure::Usage("--map needs --highlight-errors".into()));
                    }
                    export_dot(&ConceptLattice::of(&ctx, cap.cap)?, &name, &[], labels)?
                }
                Some(base_path) => {
                    let base = read_cxt_file(&base_path)?;
                    let map = load_map(&base, &ctx, map.as_deref())?;
                    let id = ObjectMap::identity(base.num_objects());
                    match split {
                        None => highlighted(&ctx, &base, &map, &name, labels, cap.cap)?,
                        Some(Split::Valid) => {
                            let part = consistent_part_measure(&base, &ctx, &map, cap.cap)?;
                            highlighted(part.scale(), &base, &id, &format!("{name}_valid"), labels, cap.cap)?
                        }
                        Some(Split::Complement) => {
                            let family = error_join_complement(&base, &ctx, &map, cap.cap)?;
                            let s = canonical_scale(&base, &family)?;
                            highlighted(&s, &base, &id, &format!("{name}_complement"), labels, cap.cap)?
                        }
                        Some(Split::Attributes) => {
                            let split = attribute_split(&base, &ctx, &map)?;
                            highlighted(&split.inconsistent, &base, &map, &format!("{name}_inconsistent"), labels, cap.cap)?
                        }
                    }
                }
            };
            emit(&text, dot.as_deref())
        }
    }
}

/// DOT of `scale`'s lattice with the extents whose preimage is not closed in
/// `base` drawn red.
fn highlighted(scale: &FormalContext, base: &FormalContext, map: &ObjectMap, name: &str, labels: Labeling, cap: usize) -> CliResult<String> {
    let lat = ConceptLattice::of(scale, cap)?;
    let mut red: Vec<ObjectSet> = Vec::new();
    for c in lat.concepts() {
        if !base.is_extent(&map.preimage(&c.extent))? {
            red.push(c.extent.clone());
        }
    }
    log::info!("{} of {} extents are errors", red.len(), lat.len());
    Ok(export_dot(&lat, name, &red, labels)?)
}

fn load_map(base: &FormalContext, scale: &FormalContext, path: Option<&Path>) -> CliResult<ObjectMap> {
    match path {
        None => Ok(ObjectMap::by_name(base, scale)?),
        Some(p) => {
            let pairs: BTreeMap<String, String> = serde_json::from_str(&std::fs::read_to_string(p)?).map_err(Error::from)?;
            Ok(ObjectMap::from_names(base, scale, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))?)
        }
    }
}

/// `other` with its objects in the order of `k`.
fn align_objects(k: &FormalContext, other: &FormalContext) -> CliResult<FormalContext> {
    Ok(sigma_context(k, other, &ObjectMap::by_name(k, other)?)?)
}

/// `other` with its attributes in the order of `k`.
fn align_attributes(k: &FormalContext, other: &FormalContext) -> CliResult<FormalContext> {
    if other.attributes() == k.attributes() {
        return Ok(other.clone());
    }
    if other.num_attributes() != k.num_attributes() {
        return Err(Error::DimensionMismatch {
            expected: k.num_attributes(),
            found: other.num_attributes(),
        }
        .into());
    }
    let order = k
        .attributes()
        .iter()
        .map(|m| {
            other
                .attribute_index(m)
                .ok_or_else(|| Error::InvalidContext(format!("attribute '{m}' missing from the approximation")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table: Vec<Vec<bool>> = (0..other.num_objects())
        .map(|g| order.iter().map(|&m| other.incident(g, m)).collect())
        .collect();
    Ok(FormalContext::from_table(other.objects().to_vec(), k.attributes().to_vec(), &table)?)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "context".into(), |s| s.to_string_lossy().into_owned())
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
