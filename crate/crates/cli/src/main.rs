mod config;
mod input;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcplx::bounds::{
    formula_bounds, incompressible_fraction, min_over_candidates, noncomplex_fraction,
    toy_machine_census, CandidateGenerator, CandidateOutcome, ComplexityEstimate,
    EmptyCircuit, Formula, GenericPreparation, GraphPreparation, ProductPreparation,
};
use qcplx::circuit::Circuit;
use qcplx::encode::{embed_classical, pack_bits, parse_bits, Code};
use qcplx::sources::{
    density_operator, entropy_rate_experiment, quantum_message_estimate, sample_sentence,
    shannon_entropy, von_neumann_entropy, EntropyRateTable, SourceKind, WordSource, DEFAULT_TRIALS,
};
use qcplx::synth::{compile_state, compile_to_basis, graph_state_circuit, weighted_graph_state_circuit};
use qcplx::{Error, Result};

use config::{read, write, Overrides, RunConfig};
use input::{load, Input};

#[derive(Parser)]
#[command(name = "qcplx", version, about = "Description-length estimates for quantum states")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Gate basis id (standard, standard+CZ, classical).
    #[arg(long, global = true)]
    basis: Option<String>,
    /// Code id (A, B, INL).
    #[arg(long, global = true)]
    code: Option<String>,
    /// Precision: fidelity must reach 1 − ε [default: 0.01]
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Seed for random families and source sampling [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Compressor id (cm, deflate).
    #[arg(long, global = true)]
    compressor: Option<String>,
    /// Longest word in the SK base net
    #[arg(long = "sk-l0", global = true)]
    sk_l0: Option<usize>,
    /// Deepest SK recursion tried per rotation
    #[arg(long = "sk-depth", global = true)]
    sk_depth: Option<usize>,
    /// Print the prepared statevector.
    #[arg(long = "dump-state", global = true)]
    dump_state: bool,
    /// Flat key=value file; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// State file: `qubits N` then `index re im` lines.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Graph file: `vertices N` then `edge a b [phase]` lines.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Classical bit string, embedded as a basis state.
    #[arg(long)]
    bits: Option<String>,
    /// Named family: zero:N, plus:N, ghz:N, w:N, bell, random:N.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a basis circuit for a state and write it out.
    Compile {
        #[command(flatten)]
        input: InputArgs,
        /// Expand composite CZ gates over the standard basis.
        #[arg(long = "exact-cz")]
        exact_cz: bool,
    },
    /// Minimum compressed description over candidate circuits.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated: empty, generic, product, graph.
        #[arg(long, default_value = "empty,generic,product,graph")]
        generators: String,
    },
    /// Evaluate a closed-form bound or counting statement.
    Bounds {
        /// A formula kind, or incompressible, noncomplex, census
        kind: String,
        /// Numeric parameters; separable takes ε then the part sizes
        params: Vec<String>,
    },
    /// Entropy-rate experiment on a source file.
    SourceExp {
        /// Source file: `bernoulli p`, or `kind letters|words|states` blocks
        source: PathBuf,
        /// Increasing sentence lengths.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        m: Vec<usize>,
        /// Sentences sampled per length
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Write a bit string as a circuit of I/N gates and its {I,N,L} string.
    Embed {
        /// String of 0s and 1s
        bits: String,
    },
    /// Summarize the CSV files in the output directory.
    Report,
}

fn main() -> ExitCode {
    // die quietly when piped into `head` instead of panicking in println!
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error kind={} msg={msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let flags = Overrides {
        basis: g.basis,
        code: g.code,
        epsilon: g.epsilon,
        seed: g.seed,
        out: g.out,
        compressor: g.compressor,
        sk_l0: g.sk_l0,
        sk_depth: g.sk_depth,
    };
    let cfg = RunConfig::resolve(flags, g.config.as_deref())?;
    match cli.command {
        Command::Compile { input, exact_cz } => cmd_compile(&cfg, &input, exact_cz, g.dump_state),
        Command::Estimate { input, generators } => cmd_estimate(&cfg, &input, &generators, g.dump_state),
        Command::Bounds { kind, params } => cmd_bounds(&kind, &params),
        Command::SourceExp { source, m, trials } => cmd_source_exp(&cfg, &source, &m, trials),
        Command::Embed { bits } => cmd_embed(&cfg, &bits, g.dump_state),
        Command::Report => cmd_report(&cfg),
    }
}

fn load_input(cfg: &RunConfig, a: &InputArgs) -> Result<(Input, String)> {
    load(
        a.state.as_deref(),
        a.graph.as_deref(),
        a.bits.as_deref(),
        a.family.as_deref(),
        cfg.seed,
    )
}

fn write_circuit(cfg: &RunConfig, name: &str, c: &Circuit) -> Result<PathBuf> {
    let path = cfg.out_path(&format!("{name}.circuit"))?;
    write(&path, &c.to_text())?;
    Ok(path)
}

fn dump(c: &Circuit) -> Result<()> {
    print!("{}", c.run()?.dump());
    Ok(())
}

fn cmd_compile(cfg: &RunConfig, args: &InputArgs, exact_cz: bool, dump_state: bool) -> Result<()> {
    let (input, name) = load_input(cfg, args)?;
    let target = input.state()?;
    let mut line = format!("compiled name={name} qubits={}", target.num_qubits());
    let circuit = match &input {
        Input::Bits(x) => {
            let (c, s) = embed_classical(x)?;
            let _ = write!(line, " gates={} string=\"{}\"", c.len(), s.to_ascii(&Code::classical()));
            c
        }
        Input::Graph(g) if !g.is_weighted() => {
            let coarse = graph_state_circuit(g, false)?;
            let _ = write!(line, " gates={}", coarse.len());
            if exact_cz {
                let fine = graph_state_circuit(g, true)?;
                let _ = write!(line, " expanded_gates={}", fine.len());
                fine
            } else {
                coarse
            }
        }
        _ => {
            let compiler = cfg.compiler()?;
            let out = match &input {
                Input::Graph(g) => compile_to_basis(&weighted_graph_state_circuit(g)?, &compiler, cfg.epsilon)?,
                _ => compile_state(&target, &compiler, cfg.epsilon)?,
            };
            let _ = write!(
                line,
                " gates={} continuous_gates={} per_gate_budget={:e} max_depth={}",
                out.circuit.len(),
                out.continuous_gates,
                out.per_gate_budget,
                out.max_depth_used
            );
            out.circuit
        }
    };
    let fidelity = circuit.run()?.fidelity(&target)?;
    let path = write_circuit(cfg, &name, &circuit)?;
    let _ = write!(
        line,
        " fidelity={fidelity:.12} basis={} out={}",
        circuit.basis().id(),
        path.display()
    );
    println!("{line}");
    if dump_state {
        dump(&circuit)?;
    }
    Ok(())
}

fn cmd_estimate(cfg: &RunConfig, args: &InputArgs, generators: &str, dump_state: bool) -> Result<()> {
    let (input, name) = load_input(cfg, args)?;
    let phi = input.state()?;
    let compiler = cfg.compiler()?;
    let (empty, generic, product, graph) = (
        EmptyCircuit,
        GenericPreparation(compiler.clone()),
        ProductPreparation(compiler),
        GraphPreparation::default(),
    );
    let mut gens: Vec<&dyn CandidateGenerator> = Vec::new();
    for id in generators.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        gens.push(match id {
            "empty" => &empty,
            "generic" => &generic,
            "product" => &product,
            "graph" => &graph,
            _ => return Err(Error::Domain(format!("unknown generator `{id}`"))),
        });
    }
    if gens.is_empty() {
        return Err(Error::NoCandidate { epsilon: cfg.epsilon });
    }
    let report = min_over_candidates(&phi, cfg.epsilon, &gens, &cfg.code, cfg.compressor.as_ref())?;
    let n = phi.num_qubits();
    let csv = cfg.out_path("estimates.csv")?;
    let mut text = if csv.exists() {
        read(&csv)?
    } else {
        format!("{}\n", ComplexityEstimate::CSV_HEADER)
    };
    text.push_str(&report.estimate.csv_row(&name, n));
    text.push('\n');
    write(&csv, &text)?;
    write(
        &cfg.out_path(&format!("{name}.omega"))?,
        &(report.characterizing.to_ascii(&Code::by_id(&cfg.code, report.circuit.basis().id())?) + "\n"),
    )?;
    let general = formula_bounds(&Formula::General { n, epsilon: cfg.epsilon })?.bits;
    println!(
        "estimate name={name} bits={} method={} winner={} candidates={} header_bits={} general_bound={general:.4} below_general={}",
        report.estimate.bits,
        report.estimate.method,
        report.winner_id,
        report.estimate.candidate_count,
        report.estimate.header_bits,
        report.estimate.bits <= general + report.estimate.header_bits as f64,
    );
    for (id, outcome) in &report.outcomes {
        match outcome {
            CandidateOutcome::Accepted { bits } => println!("candidate {id} bits={bits}"),
            CandidateOutcome::Imprecise { fidelity } => println!("candidate {id} rejected fidelity={fidelity:.6}"),
            CandidateOutcome::Failed(e) => println!("candidate {id} rejected kind={}", e.kind()),
        }
    }
    if dump_state {
        dump(&report.circuit)?;
    }
    Ok(())
}

fn numbers(params: &[String]) -> Result<Vec<f64>> {
    params
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| Error::Domain(format!("`{p}` is not a number"))))
        .collect()
}

fn cmd_bounds(kind: &str, params: &[String]) -> Result<()> {
    let nums = numbers(params)?;
    let joined = params.join(" ");
    println!("kind,params,term,value");
    let row = |term: &str, v: String| println!("{kind},{joined},{term},{v}");
    match kind {
        "incompressible" => {
            let [n, c] = nums[..] else {
                return Err(Error::Domain("usage: incompressible <n> <c>".into()));
            };
            row("fraction", incompressible_fraction(n as usize, c)?.to_string());
        }
        "noncomplex" => {
            let [n, eps, c] = nums[..] else {
                return Err(Error::Domain("usage: noncomplex <N> <epsilon> <c>".into()));
            };
            let f = noncomplex_fraction(n as usize, eps, c)?;
            row("exponent", f.exponent.to_string());
            row("fraction", f.fraction.to_string());
            row("clamped", f.clamped.to_string());
        }
        "census" => {
            let [c] = nums[..] else {
                return Err(Error::Domain("usage: census <c>".into()));
            };
            let r = toy_machine_census(c as usize)?;
            row("valid_descriptions", r.valid.to_string());
            row("distinct_outputs", r.distinct_outputs.to_string());
            row("bound", r.bound.to_string());
            row("holds", r.holds.to_string());
        }
        _ => {
            let e = formula_bounds(&Formula::parse(kind, &nums)?)?;
            for (name, v) in &e.terms {
                row(name, v.to_string());
            }
            row("total", e.bits.to_string());
        }
    }
    Ok(())
}

fn cmd_source_exp(cfg: &RunConfig, source: &Path, ms: &[usize], trials: usize) -> Result<()> {
    let mut src = WordSource::parse(&read(source)?)?;
    if let Some(stem) = source.file_stem() {
        src.id = stem.to_string_lossy().into_owned();
    }
    let table = entropy_rate_experiment(&src, ms, trials, cfg.seed, cfg.compressor.as_ref())?;
    let path = cfg.out_path(&format!("{}.source_exp.csv", src.id))?;
    write(&path, &table.to_csv())?;
    for (m, mean) in table.means() {
        println!(
            "source={} m={m} mean_bits_per_emission={mean:.6} H={:.6} compressor={}",
            src.id, table.entropy, table.compressor_id
        );
    }
    if src.kind() == SourceKind::QuantumStates {
        let m = *ms.last().unwrap();
        let indices = sample_sentence(&src, m, cfg.seed)?;
        let compiler = cfg.compiler()?;
        let (empty, generic, product, graph) = (
            EmptyCircuit,
            GenericPreparation(compiler.clone()),
            ProductPreparation(compiler),
            GraphPreparation::default(),
        );
        let gens: [&dyn CandidateGenerator; 4] = [&empty, &graph, &product, &generic];
        let q = quantum_message_estimate(&src, &indices, cfg.epsilon, &gens, &cfg.code, cfg.compressor.as_ref())?;
        let s = von_neumann_entropy(&density_operator(&src)?);
        println!(
            "stateword m={m} index_bits={} dictionary_bits={} total={} cap={:.4} H={:.6} S={s:.6}",
            q.index_bits,
            q.dictionary_bits,
            q.total(),
            q.cap,
            shannon_entropy(src.probs())?,
        );
        for (j, r) in q.states.iter().enumerate() {
            println!("state {j} bits={} winner={}", r.estimate.bits, r.winner_id);
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_embed(cfg: &RunConfig, bits: &str, dump_state: bool) -> Result<()> {
    let x = parse_bits(bits)?;
    let (c, s) = embed_classical(&x)?;
    let name = format!("embed{}", x.len());
    let path = write_circuit(cfg, &name, &c)?;
    let comp = cfg.compressor.as_ref();
    let string_bytes = comp.compress(&s.to_bytes()).len();
    let x_bytes = comp.compress(&pack_bits(&x)).len();
    let exact = {
        let target = Input::Bits(x.clone()).state()?;
        c.run()?.fidelity(&target)? == 1.0
    };
    println!(
        "embed n={} symbols={} raw_bits={} compressed_string_bytes={string_bytes} compressed_x_bytes={x_bytes} diff_bytes={} exact={exact} out={}",
        x.len(),
        s.len(),
        s.raw_bits(),
        string_bytes.abs_diff(x_bytes),
        path.display()
    );
    println!("string {}", s.to_ascii(&Code::classical()));
    if dump_state {
        dump(&c)?;
    }
    Ok(())
}

fn cmd_report(cfg: &RunConfig) -> Result<()> {
    println!(
        "report out={} compressor={} header_bits={} code={} epsilon={}",
        cfg.out.display(),
        cfg.compressor.id(),
        qcplx::bounds::header_constant(cfg.compressor.as_ref()),
        cfg.code,
        cfg.epsilon
    );
    let mut found = false;
    let est = cfg.out.join("estimates.csv");
    if est.exists() {
        found = true;
        let text = read(&est)?;
        let mut by_method: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let bits = cols.get(4).and_then(|b| b.parse::<f64>().ok()).ok_or(Error::Parse {
                line: i + 1,
                message: "malformed estimate row".into(),
            })?;
            by_method.entry(cols[3].to_string()).or_default().push(bits);
        }
        for (method, v) in by_method {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            println!("estimates method={method} rows={} min={min} mean={mean:.3} max={max}", v.len());
        }
    }
    let mut exps: Vec<PathBuf> = std::fs::read_dir(&cfg.out)
        .map_err(|e| config::io_error(&cfg.out, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".source_exp.csv"))
        .collect();
    exps.sort();
    for p in exps {
        found = true;
        let text = read(&p)?;
        let mut rows: BTreeMap<usize, (f64, usize, String)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let perr = || Error::Parse {
                line: i + 1,
                message: format!("malformed row in {}", p.display()),
            };
            if cols.len() != EntropyRateTable::CSV_HEADER.split(',').count() {
                return Err(perr());
            }
            let m: usize = cols[0].parse().map_err(|_| perr())?;
            let bpe: f64 = cols[3].parse().map_err(|_| perr())?;
            let e = rows.entry(m).or_insert((0.0, 0, cols[4].to_string()));
            e.0 += bpe;
            e.1 += 1;
        }
        for (m, (sum, k, h)) in rows {
            println!(
                "source_exp file={} m={m} trials={k} mean_bits_per_emission={:.6} H={h}",
                p.file_name().unwrap().to_string_lossy(),
                sum / k as f64
            );
        }
    }
    if !found {
        println!("nothing to report");
    }
    Ok(())
}
