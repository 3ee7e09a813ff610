use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thompson_core::laws::{self, LawCandidate, LawVerdict};
use thompson_core::marked::{self, Marking};
use thompson_core::oscillation::CellStatus;
use thompson_core::words::Letter;
use thompson_core::{dsl, solver, Dyadic, DyadicInterval, Error, NormalForm, PLMap, Word};

use crate::json::{classification_to_json, map_from_json, map_to_json, set_to_json, system_to_json, witness_to_json, word_to_json};
use crate::svg;

#[derive(Parser, Debug)]
#[command(name = "thompson", version, about = "Exact computation in Thompson's group F")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generator x_n, or x_{[a,b],n} with --interval.
    Gen {
        n: u32,
        #[arg(long)]
        interval: Option<String>,
    },
    /// Evaluate an element at a dyadic point.
    Eval { element: String, point: String },
    /// Product of elements in word order (the last one acts first).
    Compose {
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Normal form in the infinite generators.
    Nf { element: String },
    /// Support and dividing points.
    Support { element: String },
    /// Defragmentation into components.
    Defrag { element: String },
    /// Oscillation classification of a word with constants.
    Classify { word: String },
    /// The set O_w.
    Oscset { word: String },
    /// Solve w != 1.
    Solve {
        word: String,
        /// Dyadic interval to solve in; chosen automatically if absent.
        #[arg(long)]
        region: Option<String>,
    },
    /// Solve w_1 != 1, ..., w_k != 1 simultaneously.
    SolveSystem {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Laws with constants.
    Law {
        #[command(subcommand)]
        command: LawCommand,
    },
    /// Relations of a marking up to a radius, one word per line.
    Relations {
        #[arg(required = true)]
        markers: Vec<String>,
        #[arg(long, default_value_t = 6)]
        r: usize,
    },
    /// Bound on the marked-group distance between two markings.
    Dist {
        #[arg(long, required = true, num_args = 1..)]
        left: Vec<String>,
        #[arg(long, required = true, num_args = 1..)]
        right: Vec<String>,
        #[arg(long, default_value_t = 6)]
        rmax: usize,
    },
    /// Stabilization of relation sets along the HNN sequence (g_n, x0, x1).
    Probe {
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Terms of the sequence converging to the HNN extension over H1.
    HnnDemo {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Rectangle diagram of an element.
    Render {
        input: String,
        /// Draw one rectangle per letter, in order of action.
        #[arg(long)]
        word: bool,
        /// Emit SVG; otherwise list the chords.
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Subcommand, Debug)]
enum LawCommand {
    /// Build a law from the two- or four-interval construction.
    Gen(LawGen),
    /// Test a candidate on generator words and random substitutions.
    Check {
        word: String,
        #[arg(long, default_value_t = 8)]
        len: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Reduce a law in several variables to one variable.
    Reduce {
        word: String,
        #[arg(long, num_args = 1..)]
        pool: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct LawGen {
    /// `lwc2` or `lwc4`.
    kind: String,
    /// The intervals, left to right.
    #[arg(required = true)]
    intervals: Vec<String>,
    /// Constants, one per interval; defaults to x_{I,0}.
    #[arg(long, num_args = 1..)]
    constants: Vec<String>,
}

struct Output {
    json: bool,
    text: String,
    value: Value,
}

impl Output {
    fn new(json: bool) -> Self {
        Output { json, text: String::new(), value: Value::Null }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn render(self) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(&self.value).expect("serializable");
            s.push('\n');
            s
        } else {
            self.text
        }
    }
}

fn read_input(s: &str) -> Result<String, Error> {
    if s != "-" {
        return Ok(s.to_string());
    }
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::Precondition(format!("reading stdin: {e}")))?;
    Ok(buf.trim().to_string())
}

/// A JSON breakpoint array or a constant DSL word.
pub fn parse_map(s: &str) -> Result<PLMap, Error> {
    let s = read_input(s)?;
    if s.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })?;
        return map_from_json(&v);
    }
    dsl::parse_element(&s)
}

fn parse_word(s: &str) -> Result<Word, Error> {
    dsl::parse(&read_input(s)?)
}

fn describe(f: &PLMap) -> String {
    if f.is_identity() {
        "1".to_string()
    } else {
        NormalForm::of(f).to_string()
    }
}

fn show_map(out: &mut Output, f: &PLMap) {
    out.line(f.to_string());
    out.value = map_to_json(f);
}

fn default_constant(i: &DyadicInterval) -> Result<PLMap, Error> {
    PLMap::subgroup_generator(&DyadicInterval::closed(i.lo.clone(), i.hi.clone())?, 0)
}

fn candidate_json(c: &LawCandidate) -> Value {
    json!({
        "word": word_to_json(&c.word),
        "provenance": format!("{:?}", c.provenance),
        "intervals": c.intervals.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "constants": c.constants.iter().map(map_to_json).collect::<Vec<_>>(),
    })
}

/// Pools for the HNN sequence: `z_i = x_{[0,1-2^-i],0}` in H1 and
/// `w_j = [y, x_{j-1}]` with constants outside H1.
pub fn hnn_pools(n: usize) -> (Vec<PLMap>, Vec<Word>) {
    let zs = (1..=n as i64)
        .map(|i| {
            let iv = DyadicInterval::closed(Dyadic::zero(), Dyadic::one() - Dyadic::pow2(-i)).expect("non-degenerate");
            PLMap::subgroup_generator(&iv, 0).expect("inside [0,1]")
        })
        .collect();
    let ws = (0..n).map(|j| dsl::parse(&format!("comm(y1, x{j})")).expect("valid word")).collect();
    (zs, ws)
}

pub fn in_h1(f: &PLMap) -> bool {
    f.trivial_near_one()
}

fn hnn_term(n: usize) -> Result<solver::HnnTerm, Error> {
    let (zs, ws) = hnn_pools(n);
    solver::hnn_sequence(n, &in_h1, &zs, &ws)
}

fn run(cli: Cli) -> Result<String, Error> {
    let mut out = Output::new(cli.json);
    match cli.command {
        Command::Gen { n, interval } => {
            let f = match interval {
                Some(i) => PLMap::subgroup_generator(&i.parse()?, n)?,
                None => PLMap::generator(n),
            };
            show_map(&mut out, &f);
        }
        Command::Eval { element, point } => {
            let f = parse_map(&element)?;
            let t: Dyadic = point.parse()?;
            let v = f.eval(&t)?;
            out.line(v.to_string());
            out.value = json!(v.to_string());
        }
        Command::Compose { elements } => {
            let mut f = PLMap::identity();
            for e in &elements {
                f = f.compose(&parse_map(e)?);
            }
            show_map(&mut out, &f);
        }
        Command::Nf { element } => {
            let f = parse_map(&element)?;
            let nf = NormalForm::of(&f);
            out.line(nf.to_string());
            out.value = json!({
                "normal_form": nf.to_string(),
                "letters": nf.letters().iter().map(|(i, e)| json!([i, e])).collect::<Vec<_>>(),
            });
        }
        Command::Support { element } => {
            let f = parse_map(&element)?;
            let s = f.support();
            let dp: Vec<String> = f.dividing_points().iter().map(ToString::to_string).collect();
            out.line(format!("support: {s}"));
            out.line(format!("dividing points: {}", dp.join(", ")));
            out.value = json!({"support": set_to_json(&s), "dividing_points": dp});
        }
        Command::Defrag { element } => {
            let f = parse_map(&element)?;
            let parts = f.defragment();
            for p in &parts {
                out.line(format!("{}  on {}", describe(p), p.support()));
            }
            out.value = Value::Array(parts.iter().map(map_to_json).collect());
        }
        Command::Classify { word } => {
            let w = parse_word(&word)?;
            let c = thompson_core::classify(&w)?;
            out.line(format!("verdict: {:?}", c.verdict));
            out.line(format!("O: {}", c.oscillation_set));
            out.line(format!("depth: {}", c.depth));
            out.line(format!("constants product: {}", describe(&c.constants_product)));
            out.line(format!("V: {}", c.product_support));
            for cell in c.cells.iter().filter(|c| c.status != CellStatus::Trivial) {
                out.line(format!("  depth {} {} {:?}: {}", cell.depth, cell.region, cell.status, dsl::format(&cell.word)));
            }
            out.value = classification_to_json(&c);
        }
        Command::Oscset { word } => {
            let w = parse_word(&word)?;
            let o = thompson_core::oscillation_set(&w)?;
            out.line(o.to_string());
            out.value = set_to_json(&o);
        }
        Command::Solve { word, region } => {
            let w = parse_word(&word)?;
            match region {
                Some(r) => {
                    let wit = solver::solve_single(&w, &r.parse()?)?;
                    for (i, g) in wit.tuple.iter().enumerate() {
                        out.line(format!("y{} = {}", i + 1, describe(g)));
                    }
                    out.value = witness_to_json(&wit);
                }
                None => {
                    let sys = solver::solve_system(std::slice::from_ref(&w), None)?;
                    for (i, g) in sys.tuple.iter().enumerate() {
                        out.line(format!("y{} = {}", i + 1, describe(g)));
                    }
                    out.value = system_to_json(&sys);
                }
            }
        }
        Command::SolveSystem { words } => {
            let ws: Vec<Word> = words.iter().map(|w| parse_word(w)).collect::<Result<_, _>>()?;
            let sys = solver::solve_system(&ws, None)?;
            for (i, g) in sys.tuple.iter().enumerate() {
                out.line(format!("y{} = {}", i + 1, describe(g)));
            }
            for (w, b) in ws.iter().zip(&sys.balls) {
                out.line(format!("  {w}: ball {}, footprint {}", b.interval, b.footprint));
            }
            out.value = system_to_json(&sys);
        }
        Command::Law { command } => law(command, cli.seed, &mut out)?,
        Command::Relations { markers, r } => {
            let maps: Vec<PLMap> = markers.iter().map(|m| parse_map(m)).collect::<Result<_, _>>()?;
            let rel = marked::relations_up_to(&Marking::new(maps)?, r)?;
            out.text = rel.to_text();
            let words: Vec<String> = rel.to_text().lines().map(str::to_string).collect();
            out.value = json!({"radius": r, "relations": words});
        }
        Command::Dist { left, right, rmax } => {
            let a: Vec<PLMap> = left.iter().map(|m| parse_map(m)).collect::<Result<_, _>>()?;
            let b: Vec<PLMap> = right.iter().map(|m| parse_map(m)).collect::<Result<_, _>>()?;
            let d = marked::distance_bound(&Marking::new(a)?, &Marking::new(b)?, rmax)?;
            let kind = if d.exact { "exact" } else { "truncated" };
            out.line(format!("R = {} ({kind}); distance <= e^-{}", d.radius, d.radius));
            out.value = json!({"radius": d.radius, "exact": d.exact});
        }
        Command::Probe { r, window, terms } => {
            let mut seq = Vec::with_capacity(terms);
            for n in 1..=terms {
                let g = hnn_term(n)?.g;
                seq.push(Marking::new(vec![g, PLMap::generator(0), PLMap::generator(1)])?);
            }
            let report = marked::convergence_probe(&seq, r, window)?;
            for (i, s) in report.stabilization.iter().enumerate() {
                match s {
                    Some(k) => out.line(format!("R = {}: stable from term {}", i + 1, k + 1)),
                    None => out.line(format!("R = {}: not stable within {} terms", i + 1, report.terms)),
                }
            }
            out.value = json!({"terms": report.terms, "stabilization": report.stabilization});
        }
        Command::HnnDemo { n } => {
            let (zs, ws) = hnn_pools(n);
            let term = hnn_term(n)?;
            out.line(format!("g_{n} = {}", describe(&term.g)));
            out.line(format!("support {} inside (1-2^-{}, 1)", term.g.support(), term.exponent));
            let commutes: Vec<bool> = zs.iter().map(|z| PLMap::commutator(&term.g, z).is_identity()).collect();
            let solves: Vec<bool> = ws
                .iter()
                .map(|w| w.substitute(std::slice::from_ref(&term.g)).map(|v| !v.is_identity()))
                .collect::<Result<_, _>>()?;
            out.line(format!("[g, z_i] = 1: {commutes:?}"));
            out.line(format!("w_j(g) != 1: {solves:?}"));
            out.value = json!({
                "g": map_to_json(&term.g),
                "exponent": term.exponent,
                "commutes": commutes,
                "solves": solves,
            });
        }
        Command::Render { input, word, svg } => {
            let maps: Vec<(PLMap, String)> = if word {
                let (letters, _) = dsl::parse_letters(&read_input(&input)?)?;
                let mut maps = Vec::new();
                for l in letters.iter().rev() {
                    match l {
                        Letter::Const(c) => maps.push((c.map().clone(), c.text())),
                        Letter::Var { .. } => {
                            return Err(Error::Precondition("render needs a word without variables".into()))
                        }
                    }
                }
                maps
            } else {
                vec![(parse_map(&input)?, String::new())]
            };
            if svg {
                out.text = svg::render(&maps);
                out.json = false;
            } else {
                let mut diagrams = Vec::new();
                for (f, label) in &maps {
                    if !label.is_empty() {
                        out.line(label);
                    }
                    let chords: Vec<Value> = f.breakpoints()[1..f.breakpoints().len() - 1]
                        .iter()
                        .map(|(x, y)| json!([x.to_string(), y.to_string()]))
                        .collect();
                    for (x, y) in &f.breakpoints()[1..f.breakpoints().len() - 1] {
                        out.line(format!("  {x} -> {y}"));
                    }
                    diagrams.push(json!({"label": label, "chords": chords}));
                }
                out.value = Value::Array(diagrams);
            }
        }
    }
    Ok(out.render())
}

fn law(command: LawCommand, seed: u64, out: &mut Output) -> Result<(), Error> {
    match command {
        LawCommand::Gen(g) => {
            let intervals: Vec<DyadicInterval> = g.intervals.iter().map(|i| i.parse()).collect::<Result<_, _>>()?;
            let constants: Vec<PLMap> = if g.constants.is_empty() {
                intervals.iter().map(default_constant).collect::<Result<_, _>>()?
            } else {
                g.constants.iter().map(|c| parse_map(c)).collect::<Result<_, _>>()?
            };
            if constants.len() != intervals.len() {
                return Err(Error::Precondition("one constant per interval".into()));
            }
            let candidate = match (g.kind.as_str(), intervals.len()) {
                ("lwc2", 2) => laws::law_lwc2(&intervals[0], &intervals[1], &constants[0], &constants[1])?,
                ("lwc4", 4) => {
                    let iv: [DyadicInterval; 4] = intervals.try_into().expect("four");
                    let hs: [PLMap; 4] = constants.try_into().expect("four");
                    laws::law_lwc4(&iv, &hs)?
                }
                ("lwc2", k) | ("lwc4", k) => {
                    return Err(Error::Precondition(format!("{} takes {} intervals, got {k}", g.kind, if g.kind == "lwc2" { 2 } else { 4 })))
                }
                (other, _) => return Err(Error::Precondition(format!("unknown construction {other:?}; use lwc2 or lwc4"))),
            };
            out.line(dsl::format(&candidate.word));
            out.value = candidate_json(&candidate);
        }
        LawCommand::Check { word, len, samples } => {
            let w = parse_word(&word)?;
            match laws::check_law(&w, len, samples, seed)? {
                LawVerdict::Pass { tested } => {
                    out.line(format!("PASS ({tested} substitutions)"));
                    out.value = json!({"verdict": "pass", "tested": tested});
                }
                LawVerdict::Fail { counterexample, values } => {
                    let words: Vec<String> = counterexample.iter().map(dsl::format).collect();
                    out.line("FAIL");
                    for (i, c) in words.iter().enumerate() {
                        out.line(format!("  y{} = {c}", i + 1));
                    }
                    out.value = json!({
                        "verdict": "fail",
                        "counterexample": words,
                        "values": values.iter().map(map_to_json).collect::<Vec<_>>(),
                    });
                }
            }
        }
        LawCommand::Reduce { word, pool } => {
            let w = parse_word(&word)?;
            let pool: Vec<PLMap> = if pool.is_empty() {
                (0..4).map(PLMap::generator).collect()
            } else {
                pool.iter().map(|p| parse_map(p)).collect::<Result<_, _>>()?
            };
            let c = laws::one_variable_reduction(&w, &pool)?;
            out.line(dsl::format(&c.word));
            out.value = candidate_json(&c);
        }
    }
    Ok(())
}

/// Runs the command line; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let target = cli.out.clone();
    match run(cli) {
        Ok(text) => {
            if let Some(path) = target {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: writing {path}: {e}");
                    return 1;
                }
            } else {
                print!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
