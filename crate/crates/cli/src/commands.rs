use std::io::{self, BufRead, IsTerminal, Write};
use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use imperative::executor::{describe_targets, format_trace, parse_script, run_script, EventKind, Simulation, DEFAULT_SEED};
use imperative::regions::Degree;

use crate::setup::{read, Setup};
use crate::views::RegionsView;

/// Exit status for load, parse and runtime failures.
pub const EXIT_FAILURE: u8 = 1;
/// Exit status when a trace differs from the `--expect` file.
pub const EXIT_MISMATCH: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "imperative", version, about = "Run structured-English instructions for agents in a grid world")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scripts to completion and print the trace.
    Run(RunArgs),
    /// Read instructions from stdin one line at a time.
    Repl(ReplArgs),
    /// Print the region bands of one location.
    Regions(RegionsArgs),
    /// Serve the simulation over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct WorldArgs {
    /// World file.
    pub world: PathBuf,
    /// Action registry overriding the built-in verbs.
    #[arg(long)]
    pub actions: Option<PathBuf>,
    /// Quantifier bound overrides.
    #[arg(long)]
    pub quantifiers: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl WorldArgs {
    fn setup(&self) -> Setup {
        Setup {
            world: self.world.clone(),
            actions: self.actions.clone(),
            quantifiers: self.quantifiers.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    /// `agent=file`, or just `file` for the first agent. Repeatable.
    #[arg(long = "script", required = true)]
    pub scripts: Vec<String>,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Compare the trace with this file.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub max_ticks: u64,
}

#[derive(Debug, Args)]
pub struct ReplArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    /// Agent receiving instructions; defaults to the first one.
    #[arg(long)]
    pub agent: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_ticks: u64,
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    pub world: PathBuf,
    pub location: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Milliseconds per simulation tick.
    #[arg(long, default_value_t = 250)]
    pub tick_ms: u64,
}

pub fn dispatch(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Repl(a) => repl(a),
        Command::Regions(a) => regions(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode, String> {
    let mut sim = args.world.setup().load()?;
    let mut scripts = Vec::new();
    for spec in &args.scripts {
        let (agent, path) = match spec.split_once('=') {
            Some((a, p)) => (a.to_owned(), PathBuf::from(p)),
            None => {
                let first = sim.world().agents.first().ok_or("the world has no agents")?;
                (first.id.clone(), PathBuf::from(spec))
            }
        };
        scripts.push((agent, parse_script(&read(&path)?)));
    }
    let events = run_script(&mut sim, &scripts, args.max_ticks).map_err(|e| e.to_string())?;
    let text = format_trace(&events);
    match &args.trace {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    if let Some(golden) = &args.expect {
        let want = read(golden)?;
        if let Some((n, got, want)) = first_difference(&text, &want) {
            eprintln!("trace differs from {} at line {n}", golden.display());
            eprintln!("  expected: {want}");
            eprintln!("  actual:   {got}");
            return Ok(ExitCode::from(EXIT_MISMATCH));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn first_difference<'a>(got: &'a str, want: &'a str) -> Option<(usize, &'a str, &'a str)> {
    let mut g = got.lines();
    let mut w = want.lines();
    for n in 1.. {
        match (g.next(), w.next()) {
            (None, None) => return None,
            (a, b) if a == b => continue,
            (a, b) => return Some((n, a.unwrap_or("<end>"), b.unwrap_or("<end>"))),
        }
    }
    None
}

fn repl(args: ReplArgs) -> Result<ExitCode, String> {
    let mut sim = args.world.setup().load()?;
    let mut agent = match args.agent {
        Some(a) if sim.world().agent(&a).is_some() => a,
        Some(a) => return Err(format!("unknown agent `{a}`")),
        None => sim.world().agents.first().ok_or("the world has no agents")?.id.clone(),
    };
    let interactive = io::stdin().is_terminal();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            write!(out, "{agent}> ").and_then(|_| out.flush()).map_err(|e| e.to_string())?;
        }
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == ":quit" {
            break;
        }
        if let Some(id) = line.strip_prefix(":agent") {
            let id = id.trim();
            if sim.world().agent(id).is_some() {
                agent = id.to_owned();
                writeln!(out, "agent: {agent}").map_err(|e| e.to_string())?;
            } else {
                writeln!(out, "error: unknown agent `{id}`").map_err(|e| e.to_string())?;
            }
            continue;
        }
        let report = interpret(&mut sim, &agent, line, args.max_ticks);
        write!(out, "{report}").map_err(|e| e.to_string())?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Grounds and runs one REPL line, returning what to print.
fn interpret(sim: &mut Simulation, agent: &str, line: &str, max_ticks: u64) -> String {
    let instruction = match sim.parse(line) {
        Ok(i) => i,
        Err(e) => return format!("parse error: {e}\n"),
    };
    let resolution = sim.resolve(agent, &instruction);
    let mut text = format!("selected: {}", describe_targets(&resolution.targets));
    if let Some(d) = &resolution.destination {
        text += &format!(" -> {d}");
    }
    text.push('\n');
    if resolution.warnings.is_empty() {
        text += "no warnings\n";
    }
    for w in &resolution.warnings {
        text += &format!("{w}\n");
    }
    if resolution.is_error() {
        return text;
    }
    let first = sim.events().len();
    if let Err(e) = sim.submit_resolved(agent, instruction, resolution) {
        return text + &format!("error: {e}\n");
    }
    let outcome = sim.run_until_idle(max_ticks);
    for e in &sim.events()[first..] {
        if matches!(e.kind, EventKind::Act { .. } | EventKind::Done { .. } | EventKind::Failed { .. }) {
            text += &format!("{e}\n");
        }
    }
    if let Err(e) = outcome {
        text += &format!("error: {e}\n");
    }
    text
}

fn regions(args: RegionsArgs) -> Result<ExitCode, String> {
    let sim = Setup::new(&args.world).load()?;
    let map = sim
        .world()
        .region_map(&args.location)
        .ok_or_else(|| format!("unknown location `{}`", args.location))?;
    let view = RegionsView::new(map);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&view).map_err(|e| e.to_string())?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("{} (grid {}x{})", view.location, view.g_width, view.g_length);
    for r in &view.regions {
        println!("{} {}", r.kind, r.instance);
        for degree in Degree::ALL.map(Degree::word) {
            let cells: Vec<String> = r
                .cells
                .iter()
                .filter(|c| c.degree == degree)
                .map(|c| format!("({},{})", c.x, c.z))
                .collect();
            if !cells.is_empty() {
                println!("  {degree}: {}", cells.join(" "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(args: ServeArgs) -> Result<ExitCode, String> {
    let sim = args.world.setup().load()?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async move {
        let (app, _loop) = crate::server::start(sim, Duration::from_millis(args.tick_ms.max(1)));
        let listener = tokio::net::TcpListener::bind((args.bind, args.port))
            .await
            .map_err(|e| format!("{}:{}: {e}", args.bind, args.port))?;
        tracing::info!("listening on {}", listener.local_addr().map_err(|e| e.to_string())?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| e.to_string())
    })?;
    Ok(ExitCode::SUCCESS)
}
