use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use twindragon::buchi::BuchiAutomaton;
use twindragon::cns::Rational;
use twindragon::dimension::{check_not_s_minus_1, hausdorff_dimension};
use twindragon::geometry::{extract_interval_union, IntervalResult};
use twindragon::line::{boundary_line_automaton, build_line_automaton, normalize_line, LineParams};
use twindragon::render::{render, Viewport};
use twindragon::{Error, Result};

/// Exact automatic structure of the twin dragon fractal and its
/// rational line sections: automata, Hausdorff dimensions, interval
/// decompositions, figures.
///
/// Rational arguments use `num/den` or plain integer syntax; decimal
/// notation is rejected. The root-finding tolerance (default 1e-12)
/// can be overridden with the TWINDRAGON_TOL environment variable.
#[derive(Parser)]
#[command(name = "twindragon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build and print the automaton of a line section.
    Automaton {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
        /// Restrict to the boundary of the dragon.
        #[arg(long)]
        boundary: bool,
        /// Skip trimming of dead states.
        #[arg(long)]
        untrimmed: bool,
        #[arg(long, value_enum, default_value = "graph")]
        format: Format,
    },
    /// Hausdorff dimension report of a line section.
    Dim {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
        /// Restrict to the boundary of the dragon.
        #[arg(long)]
        boundary: bool,
    },
    /// Render the dragon (and line sections) to a plain PPM image.
    Render {
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// A line as three comma-separated rationals p,q,r; repeatable.
        #[arg(long = "line", allow_hyphen_values = true)]
        lines: Vec<String>,
        #[arg(long, default_value = "dragon.ppm")]
        out: String,
        /// Image size as WIDTHxHEIGHT.
        #[arg(long, default_value = "512x512")]
        size: String,
        /// Viewport as xmin,xmax,ymin,ymax (rationals).
        #[arg(long)]
        viewport: Option<String>,
    },
    /// Exact interval decomposition of a vertical line section.
    Intervals {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
    },
    /// Run the full self-verification suite.
    Verify,
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('.') {
        return Err(Error::InvalidArgument(format!(
            "`{s}`: decimal notation is not accepted, use num/den"
        )));
    }
    let parse_int = |t: &str| -> Result<i128> {
        t.trim()
            .parse::<i128>()
            .map_err(|_| Error::InvalidArgument(format!("`{t}` is not an integer")))
    };
    match s.split_once('/') {
        Some((n, d)) => Rational::new(parse_int(n)?, parse_int(d)?),
        None => Rational::new(parse_int(s)?, 1),
    }
}

fn parse_line_triple(p: &str, q: &str, r: &str) -> Result<LineParams> {
    normalize_line(parse_rational(p)?, parse_rational(q)?, parse_rational(r)?)
}

fn parse_line_csv(s: &str) -> Result<LineParams> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "`{s}`: expected three comma-separated rationals p,q,r"
        )));
    }
    parse_line_triple(parts[0], parts[1], parts[2])
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::DegenerateLine => 3,
        Error::Io(_) => 5,
        _ => 2,
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn build(l: &LineParams, boundary: bool) -> Result<BuchiAutomaton> {
    if boundary {
        boundary_line_automaton(l)
    } else {
        build_line_automaton(l)
    }
}

fn cmd_automaton(
    p: &str,
    q: &str,
    r: &str,
    boundary: bool,
    untrimmed: bool,
    format: Format,
) -> Result<u8> {
    let l = parse_line_triple(p, q, r)?;
    eprintln!("line: {l}");
    let aut = if untrimmed && !boundary {
        twindragon::line::build_line_automaton_untrimmed(&l)?
    } else {
        build(&l, boundary)?
    };
    match format {
        Format::Graph => print!("{}", aut.export_graph()),
        Format::Json => println!("{}", aut.export_json()),
    }
    Ok(0)
}

fn cmd_dim(p: &str, q: &str, r: &str, boundary: bool) -> Result<u8> {
    let l = parse_line_triple(p, q, r)?;
    eprintln!("line: {l}");
    let aut = build(&l, boundary)?;
    let mut report = hausdorff_dimension(&aut)?;
    report.annotate_line(&l, boundary);
    let mut doc = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    for key in ["beta", "dimension"] {
        if let Some(v) = doc.get(key).and_then(|v| v.as_f64()) {
            doc[key] = round12(v).into();
        }
    }
    if boundary && !report.empty {
        let cert = check_not_s_minus_1(&report)?;
        let mut cv = serde_json::to_value(&cert).map_err(|e| Error::Io(e.to_string()))?;
        for key in ["beta", "lambda4_over_4", "gap"] {
            if let Some(v) = cv.get(key).and_then(|v| v.as_f64()) {
                cv[key] = round12(v).into();
            }
        }
        doc["not_s_minus_1_certificate"] = cv;
    }
    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?);
    Ok(if report.empty { 4 } else { 0 })
}

fn cmd_render(
    depth: usize,
    lines: &[String],
    out: &str,
    size: &str,
    viewport: Option<&str>,
) -> Result<u8> {
    let (w, h) = size
        .split_once('x')
        .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
        .ok_or_else(|| Error::InvalidArgument(format!("`{size}`: expected WIDTHxHEIGHT")))?;
    let vp = match viewport {
        None => Viewport::default_view(),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::InvalidArgument(
                    "viewport needs four rationals xmin,xmax,ymin,ymax".into(),
                ));
            }
            Viewport::new(
                parse_rational(parts[0])?,
                parse_rational(parts[1])?,
                parse_rational(parts[2])?,
                parse_rational(parts[3])?,
            )?
        }
    };
    let parsed: Vec<LineParams> = lines.iter().map(|s| parse_line_csv(s)).collect::<Result<_>>()?;
    for l in &parsed {
        eprintln!("line: {l}");
    }
    let raster = render(depth, &parsed, vp, w, h)?;
    std::fs::write(out, raster.to_ppm()).map_err(|e| Error::Io(format!("{out}: {e}")))?;
    eprintln!("wrote {out} ({w}x{h}, depth {depth})");
    Ok(0)
}

fn cmd_intervals(p: &str, q: &str, r: &str) -> Result<u8> {
    let l = parse_line_triple(p, q, r)?;
    eprintln!("line: {l}");
    if l.q != 0 {
        return Err(Error::InvalidArgument(
            "interval decomposition is only defined for vertical lines (q = 0)".into(),
        ));
    }
    let aut = build_line_automaton(&l)?;
    if aut.state_count() == 0 {
        println!("empty intersection");
        return Ok(4);
    }
    match extract_interval_union(&aut)? {
        IntervalResult::Union(u) => {
            println!(
                "x = {}",
                Rational::from_int(-l.r).checked_div(Rational::from_int(l.p))?
            );
            println!("y in {u}");
            for (lo, hi) in u.intervals() {
                println!("  [{:.12}, {:.12}]", lo.to_f64(), hi.to_f64());
            }
        }
        IntervalResult::NotAnIntervalUnion => {
            println!("not a finite union of intervals");
        }
    }
    Ok(0)
}

fn cmd_verify() -> u8 {
    let results = twindragon::verify::run_all();
    let mut failures = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {} — {}", r.name, r.details);
        if !r.passed {
            failures += 1;
        }
    }
    println!(
        "{} of {} checks passed",
        results.len() - failures,
        results.len()
    );
    if failures == 0 {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Automaton {
            p,
            q,
            r,
            boundary,
            untrimmed,
            format,
        } => cmd_automaton(p, q, r, *boundary, *untrimmed, *format),
        Command::Dim { p, q, r, boundary } => cmd_dim(p, q, r, *boundary),
        Command::Render {
            depth,
            lines,
            out,
            size,
            viewport,
        } => cmd_render(*depth, lines, out, size, viewport.as_deref()),
        Command::Intervals { p, q, r } => cmd_intervals(p, q, r),
        Command::Verify => Ok(cmd_verify()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
