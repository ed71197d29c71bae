use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use tightph::birth_cycles::BirthCycleConfig;
use tightph::cover::{max_persistence_estimate, members_in, ContractionEvent};
use tightph::geometry::euclidean;
use tightph::io::{self, CoverRecord, CycleKind, CycleRecord, TransCounts};
use tightph::pipeline::{cycle_stages, localize, CycleStages, LocalizeConfig};
use tightph::refine::shorten::ShortenConfig;
use tightph::stats::{features_of, graphical_sample, neg_log10, spatial_sample, SampleBank, VoidFeatures};
use tightph::stochastic::{Boundary, RefineConfig, DEFAULT_SIMPLEX_BUDGET};
use tightph::{
    Chain, Embedding, Error, Filtration, Persistence, PersistenceConfig, SignificanceParams, Simplex, SparseMetricSpace,
};

#[derive(Parser)]
#[command(
    name = "tightph",
    version,
    about = "Persistent homology with tight, localized cycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persistence diagram up to tau = tau_u + epsilon.
    Pd(Common),
    /// Birth, shortened and smoothed cycles.
    Cycles(CyclesArgs),
    /// Covers, contraction and stochastic refinement (needs coordinates).
    Localize(LocalizeArgs),
    /// Void features, sample banks and pseudo p-values (needs coordinates).
    Stats(StatsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// x,y[,z] rows
    Points,
    /// "u v d" rows
    Edges,
    /// "i j m" contact triples
    Contact,
    /// "cz b l [class]" rows
    Redshift,
}

#[derive(Args)]
struct Common {
    /// Input file (.gz is decompressed)
    input: PathBuf,
    #[arg(long, value_enum, default_value = "points")]
    format: Format,
    #[arg(long)]
    tau_u: f64,
    #[arg(long)]
    epsilon: f64,
    /// Homology dimensions: 1, 2 or 1,2
    #[arg(long, value_delimiter = ',', default_value = "1")]
    dims: Vec<u8>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (RAYON_NUM_THREADS sets the default)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = PersistenceConfig::default().batch_size)]
    batch_size: usize,
    /// Hubble constant for redshift catalogs, km/s/Mpc
    #[arg(long, default_value_t = io::H0_DEFAULT)]
    h0: f64,
    /// Column expansions allowed per birth cycle
    #[arg(long, default_value_t = BirthCycleConfig::default().recursion_budget)]
    recursion_budget: usize,
}

#[derive(Args)]
struct CyclesArgs {
    #[command(flatten)]
    common: Common,
    /// Bin to chromosome map; adds cis/trans tables
    #[arg(long)]
    bins: Option<PathBuf>,
}

#[derive(Args)]
struct LocalizeArgs {
    #[command(flatten)]
    common: Common,
    /// Cycle file to localize instead of computing smoothed cycles
    #[arg(long)]
    cycles: Option<PathBuf>,
    #[arg(long, default_value_t = RefineConfig::default().n_pert)]
    n_pert: usize,
    #[arg(long, default_value_t = RefineConfig::default().n_perm)]
    n_perm: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = RefineConfig::default().m_max)]
    m_max: u32,
    /// Largest complete complex reduced at a cover's full diameter
    #[arg(long, default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    simplex_budget: u128,
    #[arg(long)]
    skip_refinement: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: Common,
    /// Cover table written by `localize` (contracted_h<d>.tsv)
    #[arg(long)]
    covers: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    n_samples: usize,
    /// Draws allowed per bank; defaults to 100 x n_samples
    #[arg(long)]
    max_attempts: Option<usize>,
    /// Subgraph sizes for graphical sampling, LO,HI; defaults to the cover sizes
    #[arg(long, value_parser = parse_range)]
    size_range: Option<(usize, usize)>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((num(lo)?, num(hi)?))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io { .. } => 2,
        Error::BudgetExceeded { .. }
        | Error::RecursionBudget { .. }
        | Error::CapacityOverflow { .. }
        | Error::CalibrationFailed { .. }
        | Error::AcceptanceCollapse { .. }
        | Error::EmptyBank => 3,
        Error::InvalidInput(_)
        | Error::VertexOutOfRange { .. }
        | Error::DuplicateEdge(..)
        | Error::UnmappedVertex(_) => 1,
        _ => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Pd(c) => setup(c).and_then(|_| cmd_pd(c)),
        Command::Cycles(a) => setup(&a.common).and_then(|_| cmd_cycles(a)),
        Command::Localize(a) => setup(&a.common).and_then(|_| cmd_localize(a)),
        Command::Stats(a) => setup(&a.common).and_then(|_| cmd_stats(a)),
    };
    match result {
        Ok(()) => {
            eprintln!("wall time\t{:.3} s", started.elapsed().as_secs_f64());
            match peak_rss_kib() {
                Some(kib) => eprintln!("peak memory (estimate)\t{:.1} MiB", kib as f64 / 1024.0),
                None => eprintln!("peak memory (estimate)\tunavailable"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// High-water resident set size from /proc, in KiB.
fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn setup(c: &Common) -> tightph::Result<()> {
    SignificanceParams::new(c.tau_u, c.epsilon)?;
    if c.dims.is_empty() || c.dims.iter().any(|d| !(1..=2).contains(d)) {
        return Err(Error::InvalidInput(format!(
            "--dims must be 1, 2 or 1,2, got {:?}",
            c.dims
        )));
    }
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    std::fs::create_dir_all(&c.out).map_err(|e| Error::Io {
        path: c.out.clone(),
        source: e,
    })
}

struct Loaded {
    params: SignificanceParams,
    embedding: Option<Embedding>,
    filtration: Filtration,
    persistence: Persistence,
    dims: Vec<u8>,
}

fn max_dim(c: &Common) -> usize {
    c.dims.iter().copied().max().unwrap_or(1) as usize
}

fn load(c: &Common) -> tightph::Result<Loaded> {
    let params = SignificanceParams::new(c.tau_u, c.epsilon)?;
    let tau = params.tau();
    let reader = io::open_input(&c.input)?;
    let (space, embedding) = match c.format {
        Format::Points => {
            let e = io::read_points(reader)?;
            (SparseMetricSpace::from_embedding(&e, tau)?, Some(e))
        }
        Format::Redshift => {
            let cat = io::read_redshift(reader)?;
            eprintln!("redshift rows\t{} kept\t{} rejected", cat.rows.len(), cat.rejected);
            let e = io::embed_redshift(&cat.rows, c.h0)?;
            (SparseMetricSpace::from_embedding(&e, tau)?, Some(e))
        }
        Format::Edges => {
            let s = io::read_edge_list(reader)?;
            if s.threshold() < tau {
                warn!("edge list threshold {} is below tau {tau}", s.threshold());
            }
            (s.with_threshold(tau), None)
        }
        Format::Contact => {
            let load = io::read_contacts(reader, tau, None)?;
            eprintln!(
                "contact entries\t{}\tvalid {}\tabsent {}\tbeyond tau {}\tdiagonal {}\tduplicates {}",
                load.entries,
                load.valid_edges(),
                load.absent,
                load.beyond_tau,
                load.diagonal,
                load.duplicates
            );
            let mut w = io::create_output(c.out.join("bin_distance.tsv"))?;
            writeln!(w, "bin_distance\tedges").map_err(|e| write_err(&c.out, e))?;
            for (d, n) in &load.bin_distance {
                writeln!(w, "{d}\t{n}").map_err(|e| write_err(&c.out, e))?;
            }
            w.flush().map_err(|e| write_err(&c.out, e))?;
            (load.space, None)
        }
    };
    let top = max_dim(c);
    let t = Instant::now();
    let filtration = Filtration::build(&space, top + 1)?;
    let persistence = Persistence::compute(
        &filtration,
        &PersistenceConfig {
            max_dim: top,
            batch_size: c.batch_size,
            boundary: true,
        },
    )?;
    info!("persistence in {:.3} s", t.elapsed().as_secs_f64());
    eprintln!("vertices\t{}\tedges (n_e)\t{}", space.n_vertices(), space.edges().len());
    let pd = persistence.diagram();
    for &d in &c.dims {
        eprintln!(
            "H{d}\t{} pairs\t{} significant",
            pd.in_dim(d).count(),
            pd.significant(d, &params).len()
        );
    }
    Ok(Loaded {
        params,
        embedding,
        filtration,
        persistence,
        dims: c.dims.clone(),
    })
}

fn write_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

fn birth_config(c: &Common) -> BirthCycleConfig {
    BirthCycleConfig {
        recursion_budget: c.recursion_budget,
        ..Default::default()
    }
}

fn record(chain: &Chain, birth: f64, f: &Filtration) -> CycleRecord {
    CycleRecord {
        dim: chain.dim,
        birth,
        simplices: chain.vertex_tuples(f).iter().map(|s| s.to_vec()).collect(),
    }
}

fn write_records(path: &Path, records: &[CycleRecord]) -> tightph::Result<()> {
    io::write_cycles(records, io::create_output(path)?)
}

fn cmd_pd(c: &Common) -> tightph::Result<()> {
    let l = load(c)?;
    io::write_diagram(&l.persistence.diagram(), io::create_output(c.out.join("pd.tsv"))?)
}

fn stages(l: &Loaded, c: &Common, dim: u8) -> tightph::Result<CycleStages> {
    cycle_stages(
        &l.filtration,
        &l.persistence,
        dim,
        l.params.tau_u,
        birth_config(c),
        &ShortenConfig::for_dim(dim),
    )
}

fn cmd_cycles(a: &CyclesArgs) -> tightph::Result<()> {
    let c = &a.common;
    let l = load(c)?;
    let f = &l.filtration;
    let chrom = match &a.bins {
        Some(p) => Some(io::read_bin_map(io::open_input(p)?)?),
        None => None,
    };
    io::write_diagram(&l.persistence.diagram(), io::create_output(c.out.join("pd.tsv"))?)?;
    for &dim in &l.dims {
        let st = stages(&l, c, dim)?;
        let birth: Vec<CycleRecord> = st.birth.iter().map(|b| record(&b.chain, b.birth, f)).collect();
        let by_diam = |chains: &[Chain]| -> Vec<CycleRecord> {
            chains.iter().map(|ch| record(ch, ch.max_diameter(f), f)).collect()
        };
        write_records(&c.out.join(format!("birth_h{dim}.txt")), &birth)?;
        write_records(&c.out.join(format!("shortened_h{dim}.txt")), &by_diam(&st.shortened))?;
        write_records(&c.out.join(format!("smoothed_h{dim}.txt")), &by_diam(&st.smoothed))?;
        write_records(&c.out.join(format!("degenerate_h{dim}.txt")), &by_diam(&st.degenerate))?;

        let path = c.out.join(format!("filter_h{dim}.tsv"));
        let mut w = io::create_output(&path)?;
        writeln!(w, "cycle\tlength\tmax_persistence_estimate\tsignificant").map_err(|e| write_err(&path, e))?;
        for (i, ch) in st.smoothed.iter().enumerate() {
            let est = max_persistence_estimate(ch, f, f);
            let sig = est >= l.params.epsilon;
            writeln!(w, "{i}\t{}\t{est}\t{}", ch.len(), sig as u8).map_err(|e| write_err(&path, e))?;
        }
        w.flush().map_err(|e| write_err(&path, e))?;
        eprintln!(
            "H{dim} cycles\t{} birth\t{} smoothed\t{} degenerate\t{} shortening rounds",
            st.birth.len(),
            st.smoothed.len(),
            st.degenerate.len(),
            st.shorten_report.rounds
        );

        if let Some(chrom) = &chrom {
            write_cis_trans(&c.out, dim, &st.smoothed, f, chrom)?;
        }
    }
    Ok(())
}

fn write_cis_trans(out: &Path, dim: u8, cycles: &[Chain], f: &Filtration, chrom: &io::BinMap) -> tightph::Result<()> {
    let mut counts = TransCounts::new();
    let path = out.join(format!("cis_trans_h{dim}.tsv"));
    let mut w = io::create_output(&path)?;
    writeln!(w, "cycle\tkind\tchromosomes").map_err(|e| write_err(&path, e))?;
    for (i, ch) in cycles.iter().enumerate() {
        let (kind, names) = match io::classify_cis_trans(&ch.vertex_set(f), chrom, &mut counts)? {
            CycleKind::Cis(c) => ("cis", c),
            CycleKind::Trans(cs) => ("trans", cs.join(",")),
        };
        writeln!(w, "{i}\t{kind}\t{names}").map_err(|e| write_err(&path, e))?;
    }
    w.flush().map_err(|e| write_err(&path, e))?;

    let path = out.join(format!("trans_pairs_h{dim}.tsv"));
    let mut w = io::create_output(&path)?;
    writeln!(w, "chrom_a\tchrom_b\ttrans_cycles").map_err(|e| write_err(&path, e))?;
    for ((a, b), n) in &counts {
        writeln!(w, "{a}\t{b}\t{n}").map_err(|e| write_err(&path, e))?;
    }
    w.flush().map_err(|e| write_err(&path, e))
}

fn need_embedding(l: &Loaded) -> tightph::Result<&Embedding> {
    l.embedding
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this command needs coordinates (--format points or redshift)".into()))
}

fn chains_from_file(path: &Path, dim: u8, f: &Filtration) -> tightph::Result<Vec<Chain>> {
    let records = io::read_cycles(io::open_input(path)?)?;
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.dim == dim) {
        let keys = r
            .simplices
            .iter()
            .map(|s| f.encode(s).map(|x: Simplex| x.key))
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| {
                Error::InvalidInput(format!("{}: cycle simplex outside the complex at tau", path.display()))
            })?;
        out.push(Chain::new(dim, keys));
    }
    Ok(out)
}

fn boundary_record(b: &Boundary, e: &Embedding) -> CycleRecord {
    let diam = b
        .simplices
        .iter()
        .flat_map(|s| {
            s.iter()
                .flat_map(move |&u| s.iter().map(move |&v| euclidean(&e.point(u), &e.point(v))))
        })
        .fold(0.0, f64::max);
    CycleRecord {
        dim: b.dim,
        birth: diam,
        simplices: b.simplices.clone(),
    }
}

fn cmd_localize(a: &LocalizeArgs) -> tightph::Result<()> {
    let c = &a.common;
    let l = load(c)?;
    let e = need_embedding(&l)?;
    let f = &l.filtration;
    for &dim in &l.dims {
        let cycles = match &a.cycles {
            Some(p) => chains_from_file(p, dim, f)?,
            None => stages(&l, c, dim)?.smoothed,
        };
        let cfg = LocalizeConfig {
            dim,
            params: l.params,
            refine: RefineConfig {
                n_pert: a.n_pert,
                n_perm: a.n_perm,
                seed: a.seed,
                m_max: a.m_max,
                simplex_budget: a.simplex_budget,
            },
            skip_refinement: a.skip_refinement,
        };
        let loc = localize(&cycles, f, e, &cfg)?;
        let records =
            |covers: &[tightph::cover::Cover]| -> Vec<CoverRecord> { covers.iter().map(CoverRecord::from).collect() };
        io::write_covers(
            &records(&loc.covers),
            io::create_output(c.out.join(format!("covers_h{dim}.tsv")))?,
        )?;
        io::write_covers(
            &records(&loc.contracted),
            io::create_output(c.out.join(format!("contracted_h{dim}.tsv")))?,
        )?;

        let path = c.out.join(format!("contraction_h{dim}.log"));
        let mut w = io::create_output(&path)?;
        let mut put = |s: String| writeln!(w, "{s}").map_err(|e| write_err(&path, e));
        put(format!("filtered\t{}", loc.filtered))?;
        put(format!("evaluations\t{}", loc.contraction.evaluations))?;
        for ev in &loc.contraction.events {
            put(match ev {
                ContractionEvent::Subset { removed, kept } => format!("subset\tremoved {removed}\tkept {kept}"),
                ContractionEvent::Intersection { removed, added } => {
                    let r: Vec<String> = removed.iter().map(|x| x.to_string()).collect();
                    format!("intersection\tremoved {}\tadded {added}", r.join(","))
                }
            })?;
        }
        w.flush().map_err(|e| write_err(&path, e))?;

        let path = c.out.join(format!("graph_h{dim}.tsv"));
        let mut w = io::create_output(&path)?;
        writeln!(w, "a\tb").map_err(|e| write_err(&path, e))?;
        for (x, y) in &loc.graph {
            let (x, y) = (loc.contracted[*x].id, loc.contracted[*y].id);
            writeln!(w, "{x}\t{y}").map_err(|e| write_err(&path, e))?;
        }
        w.flush().map_err(|e| write_err(&path, e))?;

        let mut minimal = Vec::new();
        let path = c.out.join(format!("refinement_h{dim}.tsv"));
        let mut w = io::create_output(&path)?;
        writeln!(
            w,
            "cover\tdelta\tm\ttrials\tfailed\tfallback\tminimal_trials\tboundaries\tsimplices"
        )
        .map_err(|e| write_err(&path, e))?;
        for r in &loc.refinements {
            let (delta, m) = match r.calibration {
                Some((d, m)) => (d.to_string(), m.to_string()),
                None => ("NA".into(), "NA".into()),
            };
            let fallback = r.trials.iter().filter(|t| t.fallback).count();
            let (tied, nb, ns) = match &r.minimal {
                Some(ms) => {
                    minimal.extend(ms.boundaries.iter().map(|b| boundary_record(b, e)));
                    (
                        ms.trials.len(),
                        ms.boundaries.len(),
                        ms.boundaries.iter().map(|b| b.len()).sum(),
                    )
                }
                None => (0, 0, 0),
            };
            writeln!(
                w,
                "{}\t{delta}\t{m}\t{}\t{}\t{fallback}\t{tied}\t{nb}\t{ns}",
                r.cover_id,
                r.trials.len(),
                r.failed_trials
            )
            .map_err(|e| write_err(&path, e))?;
        }
        w.flush().map_err(|e| write_err(&path, e))?;
        write_records(&c.out.join(format!("minimal_h{dim}.txt")), &minimal)?;

        let n_sig: usize = loc.contracted.iter().map(|c| c.n_sig).sum();
        eprintln!(
            "H{dim} localize\t{} cycles\t{} filtered\t{} covers\t{} contracted\t{n_sig} significant",
            cycles.len(),
            loc.filtered,
            loc.covers.len(),
            loc.contracted.len()
        );
    }
    Ok(())
}

const FEATURE_HEADER: &str = "cover_size\tspherical_uniformity\tradius\teccentricity";

fn features_row(v: &VoidFeatures) -> String {
    let a = v.as_array();
    format!("{}\t{}\t{}\t{}", a[0], a[1], a[2], a[3])
}

fn write_bank(path: &Path, bank: &SampleBank) -> tightph::Result<()> {
    let mut w = io::create_output(path)?;
    writeln!(w, "{FEATURE_HEADER}\tpc1\tpc2\tpc3\tpc4").map_err(|e| write_err(path, e))?;
    for (s, h) in bank.samples.iter().zip(&bank.projected) {
        writeln!(w, "{}\t{}\t{}\t{}\t{}", features_row(s), h[0], h[1], h[2], h[3]).map_err(|e| write_err(path, e))?;
    }
    w.flush().map_err(|e| write_err(path, e))
}

fn fmt_nlog(p: f64) -> String {
    let x = neg_log10(p);
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

fn cmd_stats(a: &StatsArgs) -> tightph::Result<()> {
    let c = &a.common;
    let params = SignificanceParams::new(c.tau_u, c.epsilon)?;
    let e = match c.format {
        Format::Points => io::read_points(io::open_input(&c.input)?)?,
        Format::Redshift => io::embed_redshift(&io::read_redshift(io::open_input(&c.input)?)?.rows, c.h0)?,
        _ => {
            return Err(Error::InvalidInput(
                "stats needs coordinates (--format points or redshift)".into(),
            ))
        }
    };
    let covers = io::read_covers(io::open_input(&a.covers)?)?;
    let voids: Vec<(CoverRecord, Vec<u32>, VoidFeatures)> = covers
        .into_iter()
        .map(|r| {
            let members = members_in(&r.bbox, &e);
            let feat = features_of(&r.bbox, &members, &e);
            (r, members, feat)
        })
        .collect();
    let max_attempts = a.max_attempts.unwrap_or(a.n_samples.saturating_mul(100));

    let boxes: Vec<_> = voids.iter().map(|(r, m, _)| (r.bbox, m.len())).collect();
    let spatial = spatial_sample(&e, &boxes, a.n_samples, max_attempts, a.seed)?;
    write_bank(&c.out.join("spatial_bank.tsv"), &spatial)?;

    let range = match a.size_range {
        Some(r) => r,
        None => {
            let lo = voids.iter().map(|v| v.1.len()).min().unwrap_or(4).max(4);
            let hi = voids.iter().map(|v| v.1.len()).max().unwrap_or(lo).max(lo);
            (lo, hi)
        }
    };
    let graphical = match graphical_sample(&e, params.tau_u, range, a.n_samples, max_attempts, a.seed) {
        Ok(b) => {
            write_bank(&c.out.join("graphical_bank.tsv"), &b)?;
            Some(b)
        }
        Err(err @ (Error::AcceptanceCollapse { .. } | Error::EmptyBank)) => {
            warn!("graphical sampling skipped: {err}");
            None
        }
        Err(err) => return Err(err),
    };

    let path = c.out.join("features.tsv");
    let mut w = io::create_output(&path)?;
    writeln!(w, "cover\tmembers\t{FEATURE_HEADER}").map_err(|e| write_err(&path, e))?;
    for (r, m, v) in &voids {
        writeln!(w, "{}\t{}\t{}", r.id, m.len(), features_row(v)).map_err(|e| write_err(&path, e))?;
    }
    w.flush().map_err(|e| write_err(&path, e))?;

    let path = c.out.join("pvalues.tsv");
    let mut w = io::create_output(&path)?;
    writeln!(
        w,
        "cover\tp_spatial\tneg_log10_spatial\tp_graphical\tneg_log10_graphical"
    )
    .map_err(|e| write_err(&path, e))?;
    for (r, _, v) in &voids {
        let ps = spatial.pseudo_p_value(v);
        let (pg, ng) = match &graphical {
            Some(b) => {
                let p = b.pseudo_p_value(v);
                (p.to_string(), fmt_nlog(p))
            }
            None => ("NA".into(), "NA".into()),
        };
        writeln!(w, "{}\t{ps}\t{}\t{pg}\t{ng}", r.id, fmt_nlog(ps)).map_err(|e| write_err(&path, e))?;
    }
    w.flush().map_err(|e| write_err(&path, e))?;

    let path = c.out.join("pca.tsv");
    let mut w = io::create_output(&path)?;
    writeln!(w, "bank\tsamples\tattempts\tpc1\tpc2\tpc3\tpc4").map_err(|e| write_err(&path, e))?;
    for (name, bank) in [("spatial", Some(&spatial)), ("graphical", graphical.as_ref())] {
        if let Some(b) = bank {
            let r = b.variance_ratios;
            writeln!(
                w,
                "{name}\t{}\t{}\t{}\t{}\t{}\t{}",
                b.len(),
                b.attempts,
                r[0],
                r[1],
                r[2],
                r[3]
            )
            .map_err(|e| write_err(&path, e))?;
        }
    }
    w.flush().map_err(|e| write_err(&path, e))?;
    eprintln!(
        "stats\t{} voids\tspatial bank {}\tgraphical bank {}",
        voids.len(),
        spatial.len(),
        graphical.as_ref().map_or(0, |b| b.len())
    );
    Ok(())
}
