use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rowmotion::ideal::{enumerate_ideals, rowmotion_direct, OrderIdeal};
use rowmotion::io::{parse_poset, PosetJson};
use rowmotion::orbit::{all_orbits, homomesy_check, map_order, OrbitBoard};
use rowmotion::poset::Poset;
use rowmotion::render::{board_header, render_board};
use rowmotion::stat::{ratio_string, Statistic};
use rowmotion::verify::{run_claim, ClaimParams, Verdict, CLAIMS};
use rowmotion::whirl::PPartition;
use rowmotion::whorm::{
    check_tail_sums, decompose_whorms, decompose_whorms_experimental, whorm_metrics, Decomposition,
};
use rowmotion::{Error, Limits};

const CAP_ENV: &str = "ROWMOTION_CAP";

const EXIT_REFUTED: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "rowmotion", version, about = "Rowmotion, whirling and whorms on finite posets")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CliConfig {
    /// Enumeration cap (states and elements); overrides ROWMOTION_CAP.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_enum, default_value_t = ColorChoice::Auto)]
    color: ColorChoice,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorChoice {
    Auto,
    Always,
    Never,
}

#[derive(Subcommand)]
enum Command {
    /// Count or list the order ideals of a poset.
    Ideals {
        poset: String,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Rowmotion orbits, a single orbit, or the order of the map.
    Rowmotion {
        poset: String,
        #[arg(long)]
        order: bool,
        /// Comma-separated generators of the starting ideal.
        #[arg(long, conflicts_with = "order")]
        ideal: Option<String>,
    },
    /// Orbit board of a P-partition under whirling.
    Whirl {
        poset: String,
        #[arg(long)]
        k: u32,
        /// Labels in element order, e.g. "(1,3,3)".
        #[arg(long)]
        f: String,
        /// Mark each cell with its whorm.
        #[arg(long)]
        whorms: bool,
    },
    /// Whorm decomposition, metrics and tail-sum identities of an orbit.
    Whorms {
        poset: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        f: String,
        /// Decompose on non-claw posets (no metrics).
        #[arg(long)]
        experimental: bool,
    },
    /// Orbit averages of a statistic on rowmotion orbits of J(P).
    Homomesy {
        poset: String,
        #[arg(long)]
        stat: String,
    },
    /// Check a published identity over its parameter grid.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CLAIMS))]
        claim: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// `inj`, `sur`, or a predicate such as "f(1) != f(2)".
        #[arg(long)]
        family: Option<String>,
    },
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn limits(config: &CliConfig) -> Result<Limits, String> {
    let cap = match config.cap {
        Some(c) => c as usize,
        None => match std::env::var(CAP_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(c) if c >= 1 => c,
                _ => return Err(format!("{CAP_ENV} must be a positive integer, got {v:?}")),
            },
            Err(_) => Limits::DEFAULT_CAP,
        },
    };
    Ok(Limits::with_cap(cap))
}

fn use_color(config: &CliConfig) -> bool {
    match config.color {
        ColorChoice::Always => true,
        ColorChoice::Never => false,
        ColorChoice::Auto => std::io::stdout().is_terminal(),
    }
}

fn ideal_json(p: &Poset, i: &OrderIdeal) -> Value {
    json!(i.member_names(p))
}

fn ideal_text(p: &Poset, i: &OrderIdeal) -> String {
    format!("{} {{{}}}", i.to_bit_string(), i.member_names(p).join(","))
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let limits = limits(&cli.config).map_err(Error::Precondition)?;
    match &cli.command {
        Command::Ideals { poset, count, list } => {
            let p = parse_poset(poset, limits)?;
            let ideals = enumerate_ideals(&p, limits)?;
            let mut text = ideals.len().to_string();
            let mut js = json!({"poset": PosetJson::from(&p), "count": ideals.len()});
            if *list && !*count {
                text = ideals.iter().map(|i| ideal_text(&p, i)).collect::<Vec<_>>().join("\n");
                js["ideals"] = ideals.iter().map(|i| ideal_json(&p, i)).collect();
            }
            Ok(Output::ok(text, js))
        }
        Command::Rowmotion { poset, order, ideal } => {
            let p = parse_poset(poset, limits)?;
            let step = |i: &OrderIdeal| rowmotion_direct(&p, i);
            if let Some(gens) = ideal {
                let gens = gens
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| p.index_of(s).ok_or_else(|| Error::UnknownAtom(s.to_string())))
                    .collect::<Result<Vec<usize>, Error>>()?;
                let start = OrderIdeal::generated_by(&p, gens);
                let orbit = rowmotion::orbit::cycle_from(step, &start, limits)?;
                let text = format!(
                    "length {}\n{}",
                    orbit.len(),
                    orbit.iter().map(|i| ideal_text(&p, i)).collect::<Vec<_>>().join("\n")
                );
                let js = json!({
                    "length": orbit.len(),
                    "states": orbit.iter().map(|i| ideal_json(&p, i)).collect::<Vec<_>>(),
                });
                return Ok(Output::ok(text, js));
            }
            let orbits = all_orbits(step, &enumerate_ideals(&p, limits)?, limits)?;
            let ord = map_order(&orbits);
            if *order {
                return Ok(Output::ok(ord.to_string(), json!({"order": ord.to_string()})));
            }
            let mut lines = vec![format!("order {ord}, {} orbits", orbits.len())];
            lines.extend(
                orbits
                    .iter()
                    .map(|o| format!("{:>4}  {}", o.len(), ideal_text(&p, o.representative()))),
            );
            let js = json!({
                "order": ord.to_string(),
                "orbits": orbits.iter().map(|o| json!({
                    "length": o.len(),
                    "representative": ideal_json(&p, o.representative()),
                })).collect::<Vec<_>>(),
            });
            Ok(Output::ok(lines.join("\n"), js))
        }
        Command::Whirl { poset, k, f, whorms } => {
            let p = parse_poset(poset, limits)?;
            let seed = PPartition::parse(&p, f, *k)?;
            let board = OrbitBoard::from_seed(&p, &seed, limits)?;
            let dec = if *whorms { Some(decompose_whorms(&p, &board)?) } else { None };
            let text = format!(
                "{}\n{}",
                board_header(&p, &board, dec.as_ref()),
                render_board(&board, dec.as_ref(), use_color(&cli.config)).trim_end()
            );
            let js = json!({
                "length": board.len(),
                "columns": p.names(),
                "rows": board.rows().iter().map(|r| r.labels()).collect::<Vec<_>>(),
            });
            Ok(Output::ok(text, js))
        }
        Command::Whorms { poset, k, f, experimental } => {
            let p = parse_poset(poset, limits)?;
            let seed = PPartition::parse(&p, f, *k)?;
            let board = OrbitBoard::from_seed(&p, &seed, limits)?;
            if *experimental && p.claw_shape().is_none() {
                let dec = decompose_whorms_experimental(&p, &board);
                return Ok(whorm_output(&p, &board, &dec, None, &cli.config));
            }
            let dec = decompose_whorms(&p, &board)?;
            Ok(whorm_output(&p, &board, &dec, Some(*k), &cli.config))
        }
        Command::Homomesy { poset, stat } => {
            let p = parse_poset(poset, limits)?;
            let s = Statistic::for_ideals(stat, &p)?;
            let orbits = all_orbits(|i| rowmotion_direct(&p, i), &enumerate_ideals(&p, limits)?, limits)?;
            let report = homomesy_check(&s, &orbits, |i| i.to_bit_string());
            let mut lines: Vec<String> = report
                .orbits
                .iter()
                .map(|o| format!("{:>4}  {}  {}", o.length, o.representative, ratio_string(&o.average)))
                .collect();
            lines.push(match report.value() {
                Some(v) => format!("homomesic, {v}"),
                None => "not homomesic".to_string(),
            });
            let js = serde_json::to_value(&report).expect("report serializes");
            Ok(Output::ok(lines.join("\n"), js))
        }
        Command::Verify { claim, k, n, m, family } => {
            let params = ClaimParams {
                k: *k,
                n: *n,
                m: *m,
                family: family.clone(),
            };
            let reports = run_claim(claim, &params, limits)?;
            let code = if reports.iter().any(|r| r.verdict == Verdict::Refuted) {
                EXIT_REFUTED
            } else if reports.iter().any(|r| r.verdict == Verdict::Skipped) {
                EXIT_RESOURCE
            } else {
                0
            };
            let mut lines = Vec::new();
            for r in &reports {
                let params: Vec<String> = r.params.iter().map(|(a, b)| format!("{a}={b}")).collect();
                lines.push(format!("{:?} {} {}", r.verdict, r.claim, params.join(" ")).to_lowercase());
                for c in &r.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    let tag = if c.negative_control { " (negative control)" } else { "" };
                    lines.push(format!("  {mark} {}{tag}: expected {}, observed {}", c.name, c.expected, c.observed));
                }
                for (key, v) in &r.values {
                    lines.push(format!("  {key} = {v}"));
                }
                for w in &r.witnesses {
                    lines.push(format!("  witness: {w}"));
                }
                if let Some(note) = &r.note {
                    lines.push(format!("  skipped: {note}"));
                }
            }
            Ok(Output {
                text: lines.join("\n"),
                json: serde_json::to_value(&reports).expect("reports serialize"),
                code,
            })
        }
    }
}

fn whorm_output(p: &Poset, board: &OrbitBoard, dec: &Decomposition, k: Option<u32>, config: &CliConfig) -> Output {
    let mut lines = vec![
        board_header(p, board, Some(dec)),
        render_board(board, Some(dec), use_color(config)).trim_end().to_string(),
    ];
    let mut whorms = Vec::new();
    let mut code = 0;
    for w in dec.whorms() {
        let glyph = rowmotion::render::whorm_glyph(w.id);
        let metrics = k.map(|k| whorm_metrics(p, w, k));
        let cells: Vec<[u64; 3]> = w.cells.iter().map(|c| [c.row as u64, c.element as u64, c.value as u64]).collect();
        let mut js = json!({"id": w.id, "cells": cells});
        match metrics {
            Some(Ok(m)) => {
                let tails: Vec<&str> = m.tail_columns.iter().map(|&x| p.name(x)).collect();
                lines.push(format!("{glyph}: t={} h={} tails={} size={}", m.t, m.h, tails.join(","), m.size));
                js["t"] = json!(m.t);
                js["h"] = json!(m.h);
                js["tail_columns"] = json!(m.tail_columns);
            }
            Some(Err(e)) => lines.push(format!("{glyph}: {e}")),
            None => lines.push(format!("{glyph}: {} cells", w.len())),
        }
        whorms.push(js);
    }
    let mut out = json!({"length": board.len(), "whorms": whorms});
    if k.is_some() {
        match check_tail_sums(p, board) {
            Ok(r) => {
                let cycle: Vec<String> = r.cycle_t.iter().map(u32::to_string).collect();
                lines.push(format!("super board: alpha={} rows={} whorms={}", r.alpha, r.board_len, r.whorm_count));
                lines.push(format!("t in front-of order: {}", cycle.join(" ")));
                if r.passed() {
                    lines.push("tail sums: ok".into());
                } else {
                    code = EXIT_REFUTED;
                    lines.extend(r.failures.iter().map(|f| format!("tail sums FAIL: {f}")));
                }
                out["tail_sums"] = serde_json::to_value(&r).expect("report serializes");
            }
            Err(e) => lines.push(format!("tail sums: {e}")),
        }
    }
    Output {
        text: lines.join("\n"),
        json: out,
        code,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = if cli.config.json {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else {
                out.text
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { EXIT_RESOURCE } else { EXIT_USAGE })
        }
    }
}
