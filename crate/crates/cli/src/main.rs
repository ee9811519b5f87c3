use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use baba::pipeline::{graph_stats, ClassifyOptions, DocFormat, MineConfig, WindowMode};
use baba::solver::encode;
use baba::verification::{append_checkpoint, CheckpointEntry, DepthConfig, FeedbackConfig};
use baba::{from_graph, Semantics};
use baba_cli::clients::{ClientSettings, CLASSIFIER_URL_ENV, EXTRACTOR_URL_ENV};
use baba_cli::error::{CliError, EXIT_OK, EXIT_USAGE};
use baba_cli::files::{atomic_write, read_input, timestamp};
use baba_cli::fixtures::{write_fixtures, FixtureSet};
use baba_cli::ops::{self, LoadedGraph};
use baba_cli::service::{self, AppState, ServiceConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "baba",
    version,
    about = "Mine, solve and check bipolar argument graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine a document into an argument graph.
    Mine {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Treat the input as markdown or plain text (default: by extension).
        #[arg(long)]
        format: Option<Format>,
        #[command(flatten)]
        mine: MineArgs,
        #[command(flatten)]
        clients: ClientArgs,
    },
    /// Find the k largest extensions of a graph.
    Solve {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = Semantics::Admissible)]
        semantics: Semantics,
        /// Seconds.
        #[arg(long, default_value_t = 30.0)]
        timeout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here instead of printing a listing.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the base CNF encoding in DIMACS format.
        #[arg(long)]
        dimacs: Option<PathBuf>,
    },
    /// Add facts to a graph and report which literals they contradict.
    Factcheck {
        graph: PathBuf,
        facts: PathBuf,
        /// Where to write the extended graph (default: overwrite GRAPH).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        mine: MineArgs,
        #[command(flatten)]
        clients: ClientArgs,
    },
    /// Render refinement feedback for a graph.
    Feedback {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        chain_depth: usize,
        #[arg(long, default_value_t = 5)]
        top_j: usize,
        /// Write the message with its metadata header here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a JSON-lines checkpoint entry here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Fixed timestamp for the header (default: SOURCE_DATE_EPOCH, else now).
        #[arg(long)]
        timestamp: Option<String>,
        /// Print the structured report as JSON instead of the message.
        #[arg(long)]
        json: bool,
    },
    /// Print node and edge counts and the attack:support ratio.
    Stats {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Serve a graph over HTTP for the explorer.
    Serve {
        graph: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Concurrent solver jobs.
        #[arg(long, default_value_t = 2)]
        workers: usize,
        /// Upper bound on a solve request, in seconds.
        #[arg(long, default_value_t = 30.0)]
        solve_timeout: f64,
        #[command(flatten)]
        mine: MineArgs,
        #[command(flatten)]
        clients: ClientArgs,
    },
    /// Write bundled corpora and reference graphs.
    Fixture {
        /// risk, debate, g1, g2, g3, depth or all.
        name: FixtureSet,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Markdown,
    Text,
}

#[derive(Args)]
struct MineArgs {
    /// within, window:N or all.
    #[arg(long, default_value = "window:1")]
    window: WindowMode,
    #[arg(long, default_value_t = 1200)]
    max_chars: usize,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Pairs per classifier request.
    #[arg(long, default_value_t = 32)]
    batch: usize,
    /// Classifier requests in flight.
    #[arg(long, default_value_t = 4)]
    parallelism: usize,
}

impl MineArgs {
    fn config(&self) -> MineConfig {
        MineConfig {
            max_chars: self.max_chars,
            window: self.window,
            threshold: self.threshold,
            classify: ClassifyOptions {
                batch: self.batch,
                parallelism: self.parallelism,
            },
        }
    }
}

#[derive(Args)]
struct ClientArgs {
    /// Use the keyword mocks instead of model endpoints.
    #[arg(long)]
    mock: bool,
    /// Planted relations for the mock classifier (JSON).
    #[arg(long)]
    relations: Option<PathBuf>,
    #[arg(long, env = EXTRACTOR_URL_ENV)]
    extractor_url: Option<String>,
    #[arg(long, env = CLASSIFIER_URL_ENV)]
    classifier_url: Option<String>,
    /// Per-request timeout for model endpoints, in seconds.
    #[arg(long, default_value_t = 60.0)]
    client_timeout: f64,
}

impl ClientArgs {
    fn settings(&self) -> Result<ClientSettings, CliError> {
        Ok(ClientSettings {
            mock: self.mock,
            relations: self.relations.clone(),
            extractor_url: self.extractor_url.clone(),
            classifier_url: self.classifier_url.clone(),
            timeout: seconds("client_timeout", self.client_timeout)?,
        })
    }
}

fn seconds(field: &str, secs: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(secs)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| {
            CliError::usage(format!(
                "invalid {field}: must be a positive number of seconds"
            ))
        })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Mine {
            input,
            out,
            format,
            mine,
            clients,
        } => {
            let config = mine.config();
            config.validate()?;
            let clients = clients.settings()?.build()?;
            let text = read_input(&input)?;
            let format = match format {
                Some(Format::Markdown) => DocFormat::Markdown,
                Some(Format::Text) => DocFormat::PlainText,
                None => DocFormat::from_path(&input),
            };
            let (loaded, report) = ops::mine(text, format, &clients, &config)?;
            atomic_write(&out, &loaded.json)?;
            log::info!(
                "{} sections, {} literals, {} pairs, {} requests",
                report.sections,
                report.literals,
                report.pairs,
                report.requests
            );
            println!("{}", graph_stats(&loaded.graph));
            println!("graph_sha256: {}", loaded.sha256);
            Ok(())
        }
        Command::Solve {
            graph,
            k,
            semantics,
            timeout,
            seed,
            out,
            dimacs,
        } => {
            let timeout = seconds("timeout", timeout)?;
            let loaded = LoadedGraph::read(&graph)?;
            if let Some(path) = &dimacs {
                let translation = from_graph(&loaded.graph)?;
                let enc = encode(&translation.framework, semantics)?;
                atomic_write(path, &enc.to_dimacs())?;
            }
            let report = ops::solve(&loaded, k, semantics, timeout, seed)?;
            let dest = match &out {
                Some(path) => {
                    atomic_write(path, &report.to_json())?;
                    path.display().to_string()
                }
                None => {
                    print!("{}", report.listing());
                    "stdout".to_string()
                }
            };
            if report.complete {
                Ok(())
            } else {
                Err(CliError::Timeout(dest))
            }
        }
        Command::Factcheck {
            graph,
            facts,
            out,
            report,
            mine,
            clients,
        } => {
            let config = mine.config();
            config.validate()?;
            let clients = clients.settings()?.build()?;
            let loaded = LoadedGraph::read(&graph)?;
            let facts_text = read_input(&facts)?;
            let result = ops::factcheck(&loaded.graph, facts_text, &clients, &config)?;
            atomic_write(out.as_deref().unwrap_or(&graph), &result.graph.json)?;
            let mut json = serde_json::to_string_pretty(&result).expect("report serializes");
            json.push('\n');
            match &report {
                Some(path) => atomic_write(path, &json)?,
                None => print!("{json}"),
            }
            Ok(())
        }
        Command::Feedback {
            graph,
            m,
            chain_depth,
            top_j,
            out,
            checkpoint,
            timestamp: ts,
            json,
        } => {
            let loaded = LoadedGraph::read(&graph)?;
            let config = FeedbackConfig {
                depth: DepthConfig { m, chain_depth },
                top_j,
            };
            let ts = timestamp(ts.as_deref())?;
            let result = ops::feedback(&loaded, config, ts.clone())?;
            if let Some(path) = &out {
                atomic_write(path, &result.file)?;
            }
            if let Some(path) = &checkpoint {
                append_checkpoint(
                    path,
                    &CheckpointEntry {
                        timestamp: ts,
                        graph_sha256: loaded.sha256.clone(),
                        message: result.message.clone(),
                    },
                )
                .with_context(|| format!("cannot append to {}", path.display()))?;
            }
            if json {
                let mut s =
                    serde_json::to_string_pretty(&result.report).expect("report serializes");
                s.push('\n');
                print!("{s}");
            } else {
                print!("{}", result.message);
            }
            Ok(())
        }
        Command::Stats { graph, json } => {
            let loaded = LoadedGraph::read(&graph)?;
            let stats = graph_stats(&loaded.graph);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&stats).expect("stats serialize")
                );
            } else {
                println!("{stats}");
            }
            Ok(())
        }
        Command::Serve {
            graph,
            host,
            port,
            workers,
            solve_timeout,
            mine,
            clients,
        } => {
            let config = mine.config();
            config.validate()?;
            if workers == 0 {
                return Err(CliError::usage("invalid workers: must be at least 1"));
            }
            let config = ServiceConfig {
                clients: clients.settings()?.build()?,
                mine: config,
                solve_timeout: seconds("solve_timeout", solve_timeout)?,
                solver_workers: workers,
                timestamp: None,
            };
            let loaded = LoadedGraph::read(&graph)?;
            serve(&host, port, AppState::new(loaded, config))
        }
        Command::Fixture { name, out } => {
            for file in write_fixtures(&out, name)? {
                println!("{}", Path::new(&out).join(file).display());
            }
            Ok(())
        }
    }
}

fn serve(host: &str, port: u16, state: std::sync::Arc<AppState>) -> Result<(), CliError> {
    let runtime = tokio::runtime::Runtime::new().context("cannot start the async runtime")?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| CliError::usage(format!("cannot bind {host}:{port}: {e}")))?;
        let addr = listener.local_addr().context("listener has no address")?;
        // Tests and scripts read this line to find an ephemeral port.
        println!("listening on http://{addr}");
        service::serve(listener, state)
            .await
            .context("server failed")?;
        Ok(())
    })
}
