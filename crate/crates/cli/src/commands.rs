use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use sha2::{Digest, Sha256};
use swaplab::automata::{
    language_upto, parse_machine, Dfa, EnumerationLimits, Machine, Npda, DEFAULT_PATH_LIMIT,
};
use swaplab::fixtures::{
    dup_params, dup_params_strict, equal6_samples, equal_samples, fixture_grammar_text, gt_samples,
    pal_samples, pal_sharp_samples, AdviceFunction, DupParams, GRAMMAR_NAMES,
};
use swaplab::grammar::{
    bound_stack_growth, cfg_to_npda, generate_upto, to_greibach, Cfg, GnfGrammar,
};
use swaplab::swap_cfl::{delta_size, find_cfl_swap, stack_transition, CflSearchOptions};
use swaplab::swap_regular::{
    find_swap, find_swap_all_cuts, find_swap_multi, swapping_constant, RegularSwapWitness,
    SwapOutcome,
};
use swaplab::{Alphabet, SampleSet, Word};

use crate::report::{Report, Value};
use crate::{Cli, Command, ProfileFormat, SwapCflArgs, SwapRegArgs};

pub enum Output {
    Raw(String),
    Report(Report),
}

type Outcome = Result<(Output, u8)>;

struct Input {
    label: String,
    text: String,
    sha256: String,
}

fn read(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Input {
        label: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
        text,
    })
}

fn file_entry(input: &Input) -> Report {
    Report::new()
        .with("path", input.label.as_str())
        .with("sha256", input.sha256.as_str())
}

fn parse_grammar(input: &Input) -> Result<Cfg> {
    Cfg::parse(&input.text).with_context(|| format!("parsing grammar {}", input.label))
}

fn parse_machine_file(input: &Input) -> Result<Machine> {
    parse_machine(&input.text).with_context(|| format!("parsing machine {}", input.label))
}

fn parse_npda(input: &Input) -> Result<Npda> {
    match parse_machine_file(input)? {
        Machine::Npda(m) => Ok(m),
        Machine::Dfa(_) => bail!(
            "{} holds a finite automaton, not a pushdown machine",
            input.label
        ),
    }
}

fn parse_dfa(input: &Input) -> Result<Dfa> {
    match parse_machine_file(input)? {
        Machine::Dfa(d) => Ok(d),
        Machine::Npda(_) => bail!(
            "{} holds a pushdown machine, not a finite automaton",
            input.label
        ),
    }
}

fn parse_samples(input: &Input) -> Result<SampleSet> {
    SampleSet::from_text(&input.text).with_context(|| format!("parsing samples {}", input.label))
}

fn limits(cli: &Cli) -> EnumerationLimits {
    let mut l = EnumerationLimits::default();
    if let Some(b) = cli.budget {
        l.node_budget = b;
    }
    l
}

fn gnf_of(g: &Cfg) -> Result<GnfGrammar> {
    Ok(match GnfGrammar::new(g.clone()) {
        Ok(gnf) => gnf,
        Err(_) => to_greibach(g)?,
    })
}

pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gnf { grammar } => gnf(cli, &read(grammar)?),
        Command::BuildPda { grammar, bound } => build_pda(cli, &read(grammar)?, *bound),
        Command::Run {
            machine,
            input,
            show_stack,
        } => run(cli, &read(machine)?, input, *show_stack),
        Command::Profile { pda, input, format } => profile(&read(pda)?, input, *format),
        Command::SwapReg(args) => swap_reg(args),
        Command::SwapCfl(args) => swap_cfl(cli, args),
        Command::Fixtures { name, n } => fixtures(cli, name, *n),
        Command::Advice { name, n } => advice(cli, name, *n),
        Command::Verify {
            grammar,
            machine,
            maxlen,
        } => verify(cli, &read(grammar)?, &read(machine)?, *maxlen),
    }
}

fn gnf(cli: &Cli, input: &Input) -> Outcome {
    let g = to_greibach(&parse_grammar(input)?)?;
    let text = g.to_text();
    if cli.json {
        let report = Report::new()
            .with("command", "gnf")
            .with("subject", file_entry(input))
            .with("productions", g.production_count())
            .with("grammar", text);
        return Ok((Output::Report(report), 0));
    }
    Ok((Output::Raw(text), 0))
}

fn build_pda(cli: &Cli, input: &Input, bound: bool) -> Outcome {
    let g = gnf_of(&parse_grammar(input)?)?;
    let mut m = cfg_to_npda(&g)?;
    if bound {
        m = bound_stack_growth(&m)?;
    }
    let text = Machine::Npda(m.clone()).to_text();
    if cli.json {
        let report = Report::new()
            .with("command", "build-pda")
            .with("subject", file_entry(input))
            .with("bounded", m.is_bounded())
            .with("machine", text);
        return Ok((Output::Report(report), 0));
    }
    Ok((Output::Raw(text), 0))
}

fn stack_text(w: &Word) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        w.to_string()
    }
}

fn run(cli: &Cli, input: &Input, text: &str, show_stack: bool) -> Outcome {
    let machine = parse_machine_file(input)?;
    let x = machine.input_alphabet().parse_word(text)?;
    let mut report = Report::new()
        .with("command", "run")
        .with("subject", file_entry(input))
        .with("input", machine.input_alphabet().format_word(&x));
    let accepted = match &machine {
        Machine::Dfa(d) => {
            let r = d.run(&x)?;
            report.push("kind", "dfa");
            report.push("accepted", r.accepted);
            if show_stack {
                let trace: Vec<String> = r
                    .trace
                    .iter()
                    .map(|&q| d.state_name(q).to_string())
                    .collect();
                report.push("trace", trace);
            }
            r.accepted
        }
        Machine::Npda(m) => {
            let limit = cli.budget.unwrap_or(DEFAULT_PATH_LIMIT);
            let paths = m.enumerate_accepting_paths(&x, limit);
            report.push("kind", "npda");
            report.push("accepted", !paths.is_empty());
            report.push("accepting_paths", paths.len());
            report.push("path_limit_reached", paths.len() >= limit);
            if let Some(p) = paths.first() {
                let moves: Vec<String> = p
                    .transitions
                    .iter()
                    .map(|&t| m.transition_line(t))
                    .collect();
                report.push("moves", moves);
                if show_stack {
                    let configs: Vec<String> = p
                        .configs
                        .iter()
                        .map(|c| {
                            format!(
                                "{} {} {}",
                                c.boundary,
                                m.state_name(c.state),
                                stack_text(&c.stack)
                            )
                        })
                        .collect();
                    report.push("configurations", configs);
                }
            }
            !paths.is_empty()
        }
    };
    report.push("verdict", if accepted { "accept" } else { "reject" });
    Ok((Output::Report(report), 0))
}

fn profile(input: &Input, text: &str, format: ProfileFormat) -> Outcome {
    let m = parse_npda(input)?;
    let x = m.input_alphabet().parse_word(text)?;
    let path = m
        .accepts(&x)
        .ok_or_else(|| anyhow!("`{}` is not accepted", m.input_alphabet().format_word(&x)))?;
    let t = stack_transition(&m, &x, &path)?;
    match format {
        ProfileFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["boundary", "height", "stack"])?;
            for b in t.boundaries() {
                w.write_record([
                    b.to_string(),
                    t.height(b).to_string(),
                    stack_text(t.stack(b)),
                ])?;
            }
            Ok((Output::Raw(String::from_utf8(w.into_inner()?)?), 0))
        }
        ProfileFormat::Text => {
            let p = t.profile();
            let features: Vec<String> = p
                .features(&p.full())?
                .iter()
                .map(|f| format!("{} [{},{}] height {}", f.kind, f.lo, f.hi, f.height))
                .collect();
            let report = Report::new()
                .with("command", "profile")
                .with("subject", file_entry(input))
                .with("input", m.input_alphabet().format_word(&x))
                .with(
                    "heights",
                    p.heights()
                        .iter()
                        .map(|h| h.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                )
                .with("features", features);
            Ok((Output::Report(report), 0))
        }
    }
}

fn regular_witness(s: &SampleSet, d: &Dfa, w: &RegularSwapWitness) -> Report {
    let fmt = |x: &Word| s.alphabet().format_word(x);
    Report::new()
        .with("cut", w.cut)
        .with("x", fmt(&w.x))
        .with("y", fmt(&w.y))
        .with(
            "collision_state",
            w.collision_state.map(|q| d.state_name(q).to_string()),
        )
        .with("swapped_xy", fmt(&w.swapped_xy))
        .with("swapped_yx", fmt(&w.swapped_yx))
        .with("verified", w.verified)
}

fn no_collision(sample_size: usize, classes: usize) -> Report {
    Report::new()
        .with("status", "no_collision")
        .with("sample_size", sample_size)
        .with("classes", classes)
}

fn swap_reg(args: &SwapRegArgs) -> Outcome {
    let (dfa_in, samples_in) = (read(&args.dfa)?, read(&args.samples)?);
    let d = parse_dfa(&dfa_in)?;
    let s = parse_samples(&samples_in)?;
    let mut report = Report::new().with("command", "swap-reg").with(
        "subject",
        Report::new()
            .with("dfa", file_entry(&dfa_in))
            .with("samples", file_entry(&samples_in)),
    );
    let mut params = Report::new()
        .with("n", s.n())
        .with("sample_size", s.len())
        .with("states", d.state_count());
    let single = |out: SwapOutcome<RegularSwapWitness>| match out {
        SwapOutcome::Witness(w) => (regular_witness(&s, &d, &w).with("status", "witness"), true),
        SwapOutcome::NoCollision(nc) => (no_collision(nc.sample_size, nc.classes), false),
    };
    let found = if let Some(cut) = args.cut {
        params.push("cut", cut);
        params.push("pigeonhole_bound", swapping_constant(&d, 1)?);
        let (r, found) = single(find_swap(&d, &s, cut)?);
        report.push("parameters", params);
        report.push("result", r);
        found
    } else if let Some(blocks) = &args.blocks {
        params.push("blocks", blocks.clone());
        params.push("pigeonhole_bound", swapping_constant(&d, blocks.len())?);
        report.push("parameters", params);
        match find_swap_multi(&d, &s, blocks)? {
            SwapOutcome::Witness(w) => {
                let fmt = |x: &Word| s.alphabet().format_word(x);
                let swaps: Vec<Value> = w
                    .swapped
                    .iter()
                    .enumerate()
                    .map(|(j, (a, b))| {
                        Report::new()
                            .with("block", j + 1)
                            .with("x_with_y_block", fmt(a))
                            .with("y_with_x_block", fmt(b))
                            .into()
                    })
                    .collect();
                let states: Vec<String> = w
                    .state_tuple
                    .iter()
                    .map(|&q| d.state_name(q).to_string())
                    .collect();
                report.push(
                    "result",
                    Report::new()
                        .with("status", "witness")
                        .with("x", fmt(&w.x))
                        .with("y", fmt(&w.y))
                        .with("state_tuple", states)
                        .with("swaps", Value::List(swaps))
                        .with("verified", w.verified),
                );
                true
            }
            SwapOutcome::NoCollision(nc) => {
                report.push("result", no_collision(nc.sample_size, nc.classes));
                false
            }
        }
    } else {
        params.push("cuts", "all");
        report.push("parameters", params);
        let all = find_swap_all_cuts(&d, &s)?;
        let mut any_missing = false;
        let rows: Vec<Value> = all
            .into_iter()
            .enumerate()
            .map(|(cut, out)| {
                let (r, found) = single(out);
                any_missing |= !found;
                r.with("cut", cut).into()
            })
            .collect();
        report.push("result", Value::List(rows));
        !any_missing
    };
    Ok((Output::Report(report), if found { 0 } else { 1 }))
}

fn swap_cfl(cli: &Cli, args: &SwapCflArgs) -> Outcome {
    let (pda_in, samples_in) = (read(&args.pda)?, read(&args.samples)?);
    let mut m = parse_npda(&pda_in)?;
    if args.bound {
        m = bound_stack_growth(&m)?;
    }
    let s = parse_samples(&samples_in)?;
    let path_budget = args
        .path_budget
        .or(cli.budget)
        .unwrap_or(DEFAULT_PATH_LIMIT);
    if args.parallel == 0 {
        bail!("--parallel needs at least one worker");
    }
    let opts = CflSearchOptions {
        path_budget,
        parallel: args.parallel > 1,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallel)
        .build()?;
    let search = pool.install(|| find_cfl_swap(&m, &s, args.j0, args.k, opts))?;
    let sizes = delta_size(&m, s.n(), args.j0, args.k)?;
    let fmt = |x: &Word| s.alphabet().format_word(x);
    let mut report = Report::new()
        .with("command", "swap-cfl")
        .with(
            "subject",
            Report::new()
                .with("pda", file_entry(&pda_in))
                .with("samples", file_entry(&samples_in)),
        )
        .with(
            "parameters",
            Report::new()
                .with("n", s.n())
                .with("sample_size", s.len())
                .with("j0", args.j0)
                .with("k", args.k)
                .with("path_budget", path_budget)
                .with("stack_alphabet", m.stack_alphabet().len())
                .with("bounded", m.is_bounded()),
        )
        .with(
            "index_set",
            Report::new()
                .with("exact_size", sizes.exact)
                .with("bound", sizes.bound)
                .with("buckets", search.buckets)
                .with("largest_bucket", search.largest_bucket)
                .with("assigned", search.assignments.iter().flatten().count())
                .with("truncated", search.truncated),
        );
    let unassigned: Vec<Value> = search
        .unassigned
        .iter()
        .map(|u| {
            Report::new()
                .with("member", fmt(&u.member))
                .with("reason", u.error.to_string())
                .into()
        })
        .collect();
    report.push("unassigned", Value::List(unassigned));
    let code = match &search.outcome {
        SwapOutcome::Witness(w) => {
            report.push(
                "result",
                Report::new()
                    .with("status", "witness")
                    .with("x", fmt(&w.x))
                    .with("y", fmt(&w.y))
                    .with(
                        "index",
                        Report::new()
                            .with("i", w.index.i)
                            .with("j", w.index.j)
                            .with("v", w.index.v.to_string())
                            .with("w", w.index.w.to_string()),
                    )
                    .with("x_middle", fmt(&w.x_middle))
                    .with("y_middle", fmt(&w.y_middle))
                    .with("middles_are_anagrams", w.middles_are_anagrams)
                    .with("swapped_x", fmt(&w.swapped_x))
                    .with("swapped_y", fmt(&w.swapped_y)),
            );
            report.push(
                "verification",
                Report::new()
                    .with(
                        "swapped_x_accepted",
                        m.check_path(&w.swapped_x, &w.swapped_x_path).is_ok(),
                    )
                    .with(
                        "swapped_y_accepted",
                        m.check_path(&w.swapped_y, &w.swapped_y_path).is_ok(),
                    ),
            );
            0
        }
        SwapOutcome::NoCollision(nc) => {
            report.push("result", no_collision(nc.sample_size, nc.classes));
            1
        }
    };
    Ok((Output::Report(report), code))
}

const SAMPLE_NAMES: [&str; 5] = ["equal", "gt", "equal6", "pal", "pal-sharp"];

fn fixtures(cli: &Cli, name: &str, n: Option<usize>) -> Outcome {
    // `pal-sharp` is both a grammar and a sample family; `--n` picks the samples
    if n.is_none() && GRAMMAR_NAMES.contains(&name) {
        return Ok((Output::Raw(fixture_grammar_text(name)?.to_string()), 0));
    }
    let need = || n.ok_or_else(|| anyhow!("fixture `{name}` needs --n"));
    if name == "dup" {
        let m = need()? as u64;
        let params = |p: DupParams| {
            Report::new()
                .with("n", p.n)
                .with("j0", p.j0)
                .with("k", p.k)
                .with("sample_size", p.sample_size)
                .with("max_bucket", p.max_bucket)
                .with("width_condition", p.width_condition)
                .with("kmn_threshold", p.kmn_threshold)
                .with("index_threshold", p.index_threshold)
        };
        // the smallest n, and the smallest n that also has 2*j0 <= k
        let report = Report::new()
            .with("command", "fixtures")
            .with("name", "dup")
            .with("m", m)
            .with("minimal", params(dup_params(m)?))
            .with("strict", params(dup_params_strict(m)?));
        return Ok((Output::Report(report), 0));
    }
    let s = match name {
        "equal" => equal_samples(need()?)?,
        "gt" => gt_samples(need()?)?,
        "equal6" => equal6_samples(need()?)?,
        "pal" => pal_samples(need()?)?,
        "pal-sharp" => pal_sharp_samples(need()?)?,
        other => bail!(
            "unknown fixture `{other}`; expected one of {}, {}, dup",
            SAMPLE_NAMES.join(", "),
            GRAMMAR_NAMES.join(", ")
        ),
    };
    if cli.json {
        let lines: Vec<String> = s.iter().map(|w| s.alphabet().format_word(w)).collect();
        let report = Report::new()
            .with("command", "fixtures")
            .with("name", name)
            .with("n", s.n())
            .with("alphabet", s.alphabet().header())
            .with("members", lines);
        return Ok((Output::Report(report), 0));
    }
    Ok((Output::Raw(s.to_text()), 0))
}

fn advice(cli: &Cli, name: &str, n: usize) -> Outcome {
    let f: AdviceFunction = name.parse()?;
    let w = f.generate(n);
    let text = f.alphabet().format_word(&w);
    if cli.json {
        let report = Report::new()
            .with("command", "advice")
            .with("name", f.name())
            .with("n", n)
            .with("advice", text);
        return Ok((Output::Report(report), 0));
    }
    Ok((Output::Raw(format!("{text}\n")), 0))
}

/// Shortest, then alphabetically first, member of the symmetric difference.
fn first_difference(
    alphabet: &Alphabet,
    a: &BTreeSet<Word>,
    b: &BTreeSet<Word>,
) -> Option<(Word, bool)> {
    a.symmetric_difference(b)
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| alphabet.compare(x, y)))
        .map(|w| (w.clone(), a.contains(w)))
}

fn verify(cli: &Cli, grammar_in: &Input, machine_in: &Input, maxlen: usize) -> Outcome {
    let g = parse_grammar(grammar_in)?;
    let machine = parse_machine_file(machine_in)?;
    let l = limits(cli);
    let from_grammar = generate_upto(&g, maxlen, l)?;
    let from_machine = language_upto(&machine, maxlen, l)?;
    let mut report = Report::new().with("command", "verify").with(
        "subject",
        Report::new()
            .with("grammar", file_entry(grammar_in))
            .with("machine", file_entry(machine_in)),
    );
    report.push("maxlen", maxlen);
    report.push("grammar_strings", from_grammar.len());
    report.push("machine_strings", from_machine.len());
    let alphabet = machine.input_alphabet();
    match first_difference(alphabet, &from_grammar, &from_machine) {
        None => {
            report.push("result", format!("equal up to {maxlen}"));
            Ok((Output::Report(report), 0))
        }
        Some((w, in_grammar)) => {
            report.push("result", "mismatch");
            report.push("counterexample", alphabet.format_word(&w));
            report.push("only_in", if in_grammar { "grammar" } else { "machine" });
            Ok((Output::Report(report), 1))
        }
    }
}
