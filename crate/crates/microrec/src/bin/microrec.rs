//! Thin command line over the microrec library: one subcommand per
//! pipeline capability. Exit codes: 0 success, 1 usage, 2 data error,
//! 3 internal.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use microrec::config::PipelineConfig;
use microrec::dataset::{load_dataset, Dataset, DatasetPaths, LoadMode, UserId};
use microrec::interest::{build_profiles, InterestIndex, ProfileSet};
use microrec::mining::mine_keyword_classes;
use microrec::pipeline::{
    evaluate_records, format_eval_report, format_mining_report, format_params,
    format_recommendations, format_taxonomy, run_pipeline, split_by_time, write_artifacts,
};
use microrec::scoring::{
    build_popularity, AcceptanceHistory, PopularityIndex, Recommender,
};
use microrec::taxonomy::{classify_all, Taxonomy};
use microrec::training::{aggregate_params, train_all, TrainerDeps};
use microrec::Error;

#[derive(Parser)]
#[command(
    name = "microrec",
    version,
    about = "Batch hybrid follow recommender over KDD-Cup-2012-Track-1-style TSV datasets"
)]
struct Cli {
    /// Directory holding user_profile.tsv, user_key_word.tsv, item.tsv,
    /// user_sns.tsv, user_action.tsv and rec_log.tsv
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    /// key=value configuration file (defaults apply otherwise)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for the stochastic parameter initialization
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for output artifacts (in addition to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Skip malformed input lines instead of failing
    #[arg(long, global = true)]
    lenient: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine synonym keyword classes; prints class-id, keywords, support
    Mine(MineArgs),
    /// Classify users; prints user-id, class, activeness
    Classify,
    /// Print a user's merged interest profile as class-id, weight
    Profile(ProfileArgs),
    /// Train grading parameters on the earlier records; prints the
    /// per-class parameter table
    Train(TrainArgs),
    /// Recommend the top-k items for one user or for everyone
    Recommend(RecommendArgs),
    /// Evaluate AP@k / MAP@k on the later records using configured
    /// parameters
    Evaluate,
    /// Run mine, classify, profile, train, recommend and evaluate end to
    /// end; writes all artifacts when --out is given
    Pipeline,
}

#[derive(Args)]
struct MineArgs {
    /// Number of logical mining sites
    #[arg(long)]
    sites: Option<usize>,
    /// Local and global support threshold
    #[arg(long)]
    supp: Option<f64>,
    /// Local and global confidence threshold
    #[arg(long)]
    conf: Option<f64>,
    /// Largest itemset size to mine
    #[arg(long, value_name = "M")]
    max_size: Option<usize>,
}

#[derive(Args)]
struct ProfileArgs {
    /// User to profile
    #[arg(long)]
    user: u64,
}

#[derive(Args)]
struct TrainArgs {
    /// Momentum factor
    #[arg(long)]
    beta: Option<f64>,
    /// Absolute-error threshold that stops a user's pass
    #[arg(long)]
    performance: Option<f64>,
    /// Also train omega1/omega2
    #[arg(long)]
    train_omegas: bool,
    /// Train against the revised (time-decayed) grade
    #[arg(long)]
    time_decay: bool,
}

#[derive(Args)]
struct RecommendArgs {
    /// Recommend for this user
    #[arg(long, conflicts_with = "all")]
    user: Option<u64>,
    /// Recommend for every user
    #[arg(long)]
    all: bool,
    /// List length
    #[arg(long)]
    k: Option<usize>,
    /// Grade with the revised (time-decayed) function
    #[arg(long)]
    time_decay: bool,
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::Config(_) => ExitCode::from(1),
        Error::Parse { .. } | Error::Io { .. } | Error::UnknownUser(_) | Error::InvalidInput(_) => {
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(3)
        }
    }
}

/// Everything the read-only subcommands share: the corpus plus the mined,
/// classified and profiled indexes.
struct Prepared {
    dataset: Dataset,
    config: PipelineConfig,
    classes: microrec::mining::KeywordClassSet,
    taxonomy: Taxonomy,
    index: InterestIndex,
    popularity: PopularityIndex,
    profiles: ProfileSet,
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn load_corpus(cli: &Cli, config: &PipelineConfig) -> Result<Dataset, Error> {
    config.validate()?;
    let data = cli
        .data
        .as_deref()
        .ok_or_else(|| Error::Config("--data DIR is required".into()))?;
    let mode = if cli.lenient {
        LoadMode::Lenient
    } else {
        LoadMode::Strict
    };
    let (dataset, report) = load_dataset(&DatasetPaths::in_dir(data), mode)?;
    if report.total_skipped() > 0 {
        eprintln!("skipped {} malformed lines", report.total_skipped());
        for (file, count) in &report.skipped {
            eprintln!("  {file}: {count}");
        }
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(dataset)
}

fn prepare(cli: &Cli, config: PipelineConfig) -> Result<Prepared, Error> {
    let dataset = load_corpus(cli, &config)?;
    let classes = mine_keyword_classes(&dataset, &config.mining());
    let taxonomy = classify_all(&dataset, &config.taxonomy());
    let index = InterestIndex::build(&dataset, &classes);
    let popularity = build_popularity(&dataset);
    let profiles = build_profiles(
        &dataset,
        &classes,
        &taxonomy,
        &config.familiarity_weights()?,
        &config.depth_policy()?,
    );
    Ok(Prepared {
        dataset,
        config,
        classes,
        taxonomy,
        index,
        popularity,
        profiles,
    })
}

fn emit(cli: &Cli, file_name: &str, contents: &str) -> Result<(), Error> {
    print!("{contents}");
    if let Some(out) = &cli.out {
        std::fs::create_dir_all(out).map_err(|e| Error::Io {
            path: out.display().to_string(),
            source: e,
        })?;
        let path = out.join(file_name);
        std::fs::write(&path, contents).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut config = load_config(&cli)?;
    match &cli.command {
        Command::Mine(args) => {
            if let Some(sites) = args.sites {
                config.n_sites = sites;
                config.n_polling_sites = sites;
            }
            if let Some(supp) = args.supp {
                config.supp_local = supp;
                config.supp_global = supp;
            }
            if let Some(conf) = args.conf {
                config.conf_local = conf;
                config.conf_global = conf;
            }
            if let Some(max_size) = args.max_size {
                config.max_itemset_size = max_size;
            }
            let dataset = load_corpus(&cli, &config)?;
            let classes = mine_keyword_classes(&dataset, &config.mining());
            emit(&cli, "keyword_classes.tsv", &format_mining_report(&classes))
        }
        Command::Classify => {
            let dataset = load_corpus(&cli, &config)?;
            let taxonomy = classify_all(&dataset, &config.taxonomy());
            emit(&cli, "taxonomy.tsv", &format_taxonomy(&taxonomy))
        }
        Command::Profile(args) => {
            let prepared = prepare(&cli, config)?;
            let user = UserId(args.user);
            let profile = prepared
                .profiles
                .get(user)
                .ok_or(Error::UnknownUser(user))?;
            let mut out = String::new();
            for (class, weight) in profile.merged.iter() {
                out.push_str(&format!("{}\t{weight:.6}\n", class.0));
            }
            emit(&cli, "profile.tsv", &out)
        }
        Command::Train(args) => {
            if let Some(beta) = args.beta {
                config.beta = beta;
            }
            if let Some(performance) = args.performance {
                config.performance = performance;
            }
            config.train_omegas |= args.train_omegas;
            config.use_time_decay |= args.time_decay;
            let prepared = prepare(&cli, config)?;
            let config = &prepared.config;
            let (train_records, _) =
                split_by_time(prepared.dataset.rec_log(), config.train_split);
            let deps = TrainerDeps {
                dataset: &prepared.dataset,
                classes: &prepared.classes,
                profiles: &prepared.profiles,
                index: &prepared.index,
                popularity: &prepared.popularity,
                familiarity: config.familiarity_weights()?,
                depths: config.depth_policy()?,
                lambda: config.lambda,
            };
            let states = train_all(train_records, &prepared.taxonomy, &deps, &config.training())?;
            let trained =
                aggregate_params(&states, &prepared.taxonomy, &config.default_trained_params());
            emit(&cli, "params.tsv", &format_params(&trained))
        }
        Command::Recommend(args) => {
            if !args.all && args.user.is_none() {
                return Err(Error::Config(
                    "recommend needs --user ID or --all".into(),
                ));
            }
            if let Some(k) = args.k {
                config.k = k;
            }
            config.use_time_decay |= args.time_decay;
            let prepared = prepare(&cli, config)?;
            let config = &prepared.config;
            let params = config.class_params()?;
            // Standalone recommendation treats the whole log as history.
            let history = config
                .use_time_decay
                .then(|| AcceptanceHistory::build(prepared.dataset.rec_log(), &prepared.dataset));
            let recommender = Recommender {
                dataset: &prepared.dataset,
                profiles: &prepared.profiles,
                index: &prepared.index,
                popularity: &prepared.popularity,
                params: &params,
                history: history.as_ref(),
                k: config.k,
            };
            let recommendations = match args.user {
                Some(user) => vec![recommender.recommend(UserId(user))?],
                None => recommender.recommend_all()?,
            };
            emit(
                &cli,
                "recommendations.tsv",
                &format_recommendations(&recommendations),
            )
        }
        Command::Evaluate => {
            let prepared = prepare(&cli, config)?;
            let config = &prepared.config;
            let params = config.class_params()?;
            let (train_records, test_records) =
                split_by_time(prepared.dataset.rec_log(), config.train_split);
            let history = config
                .use_time_decay
                .then(|| AcceptanceHistory::build(train_records, &prepared.dataset));
            let recommender = Recommender {
                dataset: &prepared.dataset,
                profiles: &prepared.profiles,
                index: &prepared.index,
                popularity: &prepared.popularity,
                params: &params,
                history: history.as_ref(),
                k: config.k,
            };
            let report = evaluate_records(&recommender, test_records)?;
            emit(&cli, "evaluation.tsv", &format_eval_report(&report))?;
            eprint!("{}", report.summary());
            Ok(())
        }
        Command::Pipeline => {
            let dataset = load_corpus(&cli, &config)?;
            let artifacts = run_pipeline(&dataset, &config)?;
            if let Some(out) = &cli.out {
                write_artifacts(&artifacts, out)?;
            }
            print!("{}", artifacts.report.summary());
            Ok(())
        }
    }
}
