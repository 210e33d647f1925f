use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ontotopic::client::TableStyle;
use ontotopic::snapshot::{AnalysisParams, AnalysisSnapshot};
use ontotopic_cli::api::{router, AppState};
use ontotopic_cli::commands::{cmd_analyze, cmd_query};

#[derive(Parser)]
#[command(
    name = "ontotopic",
    version,
    about = "Topic hierarchies and SPARQL templates from RDF schemas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Aligned,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the schema, cluster predicates, rank topics and generate queries.
    Analyze {
        /// N-Triples instance data (.nt) or a schema table (.tsv).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.2)]
        beta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a leaf topic's questions and SPARQL, optionally running the first.
    Query {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        topic: String,
        #[arg(long, env = "ONTOTOPIC_ENDPOINT")]
        endpoint: Option<String>,
        /// Request timeout in seconds.
        #[arg(long, default_value_t = 30)]
        timeout: u64,
        #[arg(long, value_enum, default_value_t = Format::Aligned)]
        format: Format,
    },
    /// Serve the HTTP API and explorer assets for a snapshot.
    Serve {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory with the built explorer UI.
        #[arg(long, env = "ONTOTOPIC_ASSETS")]
        assets: Option<PathBuf>,
        /// Endpoint used when an execute request names none.
        #[arg(long, env = "ONTOTOPIC_ENDPOINT")]
        endpoint: Option<String>,
        #[arg(long, default_value_t = 30)]
        timeout: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // output piped into `head` and the like
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn run(cli: Cli) -> Result<()> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Analyze {
            input,
            alpha,
            beta,
            seed,
            out,
        } => {
            let params = AnalysisParams { alpha, beta, seed };
            let epoch = std::env::var("SOURCE_DATE_EPOCH").ok();
            cmd_analyze(&input, params, &out, epoch.as_deref(), &mut stdout)?;
        }
        Command::Query {
            snapshot,
            topic,
            endpoint,
            timeout,
            format,
        } => {
            let style = match format {
                Format::Tsv => TableStyle::Tsv,
                Format::Aligned => TableStyle::Aligned,
            };
            cmd_query(
                &snapshot,
                &topic,
                endpoint.as_deref(),
                Duration::from_secs(timeout),
                style,
                &mut stdout,
            )?;
        }
        Command::Serve {
            snapshot,
            port,
            host,
            assets,
            endpoint,
            timeout,
        } => {
            let state = AppState {
                snapshot: AnalysisSnapshot::load(&snapshot)?,
                default_endpoint: endpoint,
                timeout: Duration::from_secs(timeout),
            };
            let app = router(Arc::new(state), assets);
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .with_context(|| format!("binding {addr}"))?;
                println!("serving on http://{}", listener.local_addr()?);
                axum::serve(listener, app).await?;
                Ok::<_, anyhow::Error>(())
            })?;
        }
    }
    Ok(())
}
