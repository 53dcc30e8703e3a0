use std::fmt::{self, Write as _};
use std::path::Path;

use pba_core::analysis::{
    acceptance_probability, count_two_accepting_runs, is_empty_nba, member_nondet, monte_carlo,
    myhill_nerode_supports, non_universal_witness_almost_sure, pfa_acceptance,
};
use pba_core::patterns::{self, pattern_automaton, Pattern};
use pba_core::translate::{self, gadgets, AlmostSureMode};
use pba_core::{
    degeneralize, format_rational, parse_rational, read_automaton, serialize_automaton, trim_nondet, Acceptance,
    Automaton, Error, NondetAutomaton, ProbAutomaton, ProbKind, Rational, UltimatelyPeriodicWord,
};

use crate::{AsMode, CheckKind, GadgetKind, TranslateMode};

pub const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_INPUT,
            CliError::Core(Error::Internal(_)) => EXIT_INTERNAL,
            CliError::Core(e) if e.is_input_error() => EXIT_INPUT,
            CliError::Core(_) => EXIT_SEMANTIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Output = Result<String, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::Precondition(msg.into()))
}

fn internal(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::Internal(msg.into()))
}

fn lambda_arg(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| usage(format!("--lambda expects an exact rational n/d, got `{text}`")))
}

fn word_arg(prefix: &str, period: Option<&str>) -> Result<UltimatelyPeriodicWord, CliError> {
    let period = period.ok_or_else(|| usage("--period is required"))?;
    UltimatelyPeriodicWord::parse(prefix, period).map_err(|e| usage(e.to_string()))
}

fn prob_input(aut: Automaton) -> Result<ProbAutomaton, CliError> {
    match aut {
        Automaton::Prob(p) => Ok(p),
        Automaton::Nondet(_) => Err(precondition("expected a probabilistic automaton")),
    }
}

fn nondet_input(aut: Automaton) -> Result<NondetAutomaton, CliError> {
    match aut {
        Automaton::Nondet(n) => Ok(n),
        Automaton::Prob(_) => Err(precondition("expected a nondeterministic automaton")),
    }
}

fn write_output(path: &Path, aut: &Automaton) -> Result<(), CliError> {
    std::fs::write(path, serialize_automaton(aut))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn states_summary(aut: &Automaton) -> String {
    let n = match aut {
        Automaton::Nondet(a) => a.num_states(),
        Automaton::Prob(a) => a.num_states(),
    };
    format!("{n} states")
}

pub fn classify(input: &Path) -> Output {
    let aut = read_automaton(input)?;
    let class = patterns::classify(&aut);
    // witnesses refer to the trimmed (underlying) automaton
    let replay = match &aut {
        Automaton::Nondet(a) => trim_nondet(a).unwrap_or_else(|_| a.clone()),
        Automaton::Prob(p) => pattern_automaton(p),
    };
    let mut out = String::new();
    let _ = writeln!(out, "automaton: {}", aut.name());
    for pattern in [Pattern::Ida, Pattern::IdaF, Pattern::Eda, Pattern::EdaF] {
        match class.witness(pattern) {
            Some(w) => {
                if !w.verify(&replay) {
                    return Err(internal(format!("{pattern} witness failed replay: {w}")));
                }
                let q = w.q.as_ref().map(|q| format!(" q={q}")).unwrap_or_default();
                let _ = writeln!(out, "{pattern}: yes (p={}{q} word={})", w.p, w.word.join(","));
            }
            None => {
                let _ = writeln!(out, "{pattern}: no");
            }
        }
    }
    let _ = writeln!(out, "class: {}", class.degree);
    let _ = writeln!(out, "flat: {}", yes_no(class.flat));
    let _ = writeln!(out, "weak: {}", yes_no(class.weak));
    if let Some(h) = class.hpba {
        let _ = writeln!(out, "hpba: {}", yes_no(h));
    }
    if let Some(s) = class.spba {
        let _ = writeln!(out, "spba: {}", yes_no(s));
    }
    match &class.ambiguity_witness {
        None => {
            let _ = writeln!(out, "unambiguous: yes");
        }
        Some(w) => {
            if !count_two_accepting_runs(&replay, w)? {
                return Err(internal(format!("ambiguity witness failed replay: {w}")));
            }
            let _ = writeln!(out, "unambiguous: no ({w})");
        }
    }
    Ok(out)
}

pub fn translate(
    mode: TranslateMode,
    lambda: Option<&str>,
    k: Option<usize>,
    force: bool,
    input: &Path,
    output: &Path,
) -> Output {
    let lambda = lambda.map(lambda_arg).transpose()?;
    let need_lambda = || lambda.clone().ok_or_else(|| usage("this mode requires --lambda"));
    match mode {
        TranslateMode::Th2gnba | TranslateMode::Pos2th => {
            need_lambda()?;
        }
        _ => {}
    }
    if mode == TranslateMode::Th2gnba && k.is_none() {
        return Err(usage("th2gnba requires --k"));
    }
    let aut = read_automaton(input)?;
    let result: Automaton = match mode {
        TranslateMode::Pos2nba => translate::positive_to_nba(&prob_input(aut)?)?.into(),
        TranslateMode::As2dbaAll => translate::almost_sure_to_dba(&prob_input(aut)?, AlmostSureMode::AllRuns)?.into(),
        TranslateMode::As2dbaFlat => translate::almost_sure_to_dba(&prob_input(aut)?, AlmostSureMode::Flat)?.into(),
        TranslateMode::Th2gnba => {
            let (p, l, k) = (prob_input(aut)?, need_lambda()?, k.expect("checked above"));
            if force {
                translate::threshold_to_gnba_unchecked(&p, &l, k)?.into()
            } else {
                translate::threshold_to_gnba(&p, &l, k)?.into()
            }
        }
        TranslateMode::Degen => {
            let g = nondet_input(aut)?;
            if !matches!(g.acceptance(), Acceptance::Buchi(_) | Acceptance::GeneralizedBuchi(_)) {
                return Err(precondition("degen expects a generalized Büchi automaton"));
            }
            degeneralize(&g)?.into()
        }
        TranslateMode::Pca2pwa => translate::pca_to_pwa(&prob_input(aut)?)?.into(),
        TranslateMode::Parity2ldba => translate::parity_to_unambiguous_ldba(&nondet_input(aut)?)?.into(),
        TranslateMode::Ldba2pba => translate::ldba_to_pba(&nondet_input(aut)?)?.into(),
        TranslateMode::Dba2pba => translate::dba_to_pba(&nondet_input(aut)?)?.into(),
        TranslateMode::Pos2th => translate::positive_to_threshold(&prob_input(aut)?, &need_lambda()?)?.into(),
        TranslateMode::ComplementPwa => translate::complement_pwa(&prob_input(aut)?)?.into(),
        TranslateMode::Pfa2pwaValue1 => translate::pfa_to_pwa_value1(&prob_input(aut)?)?.into(),
    };
    write_output(output, &result)?;
    Ok(format!("wrote {} to {}\n", states_summary(&result), output.display()))
}

pub fn prob(input: &Path, prefix: &str, period: Option<&str>) -> Output {
    let aut = prob_input(read_automaton(input)?)?;
    let value = if aut.kind() == ProbKind::FiniteWord {
        if period.is_some() {
            return Err(usage("finite-word automata take only --prefix"));
        }
        let word: Vec<String> =
            prefix.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
        pfa_acceptance(&aut, &word)?
    } else {
        acceptance_probability(&aut, &word_arg(prefix, period)?)?
    };
    Ok(format!("{}\n", format_rational(&value)))
}

pub fn member(input: &Path, prefix: &str, period: Option<&str>) -> Output {
    let word = word_arg(prefix, period)?;
    let aut = nondet_input(read_automaton(input)?)?;
    Ok(format!("{}\n", member_nondet(&aut, &word)?))
}

pub fn check(kind: CheckKind, input: &Path, mode: Option<AsMode>) -> Output {
    match kind {
        CheckKind::Empty => {
            if mode.is_some() {
                return Err(usage("--mode only applies to nonuniversal-as"));
            }
            let aut = nondet_input(read_automaton(input)?)?;
            Ok(match is_empty_nba(&aut)? {
                None => "empty\n".to_string(),
                Some(w) => format!("nonempty\nwitness: {w}\n"),
            })
        }
        CheckKind::NonuniversalAs => {
            let mode = match mode.ok_or_else(|| usage("nonuniversal-as requires --mode all-runs|flat"))? {
                AsMode::AllRuns => AlmostSureMode::AllRuns,
                AsMode::Flat => AlmostSureMode::Flat,
            };
            let aut = prob_input(read_automaton(input)?)?;
            Ok(match non_universal_witness_almost_sure(&aut, mode)? {
                None => "universal\n".to_string(),
                Some(w) => {
                    let value = acceptance_probability(&aut, &w)?;
                    format!("not universal\nwitness: {w}\nvalue: {}\n", format_rational(&value))
                }
            })
        }
    }
}

pub fn supports(input: &Path) -> Output {
    let aut = prob_input(read_automaton(input)?)?;
    let set = myhill_nerode_supports(&aut);
    let mut out = String::new();
    for (support, word) in set.iter() {
        let _ = writeln!(out, "{{{}}} via [{}]", set.names(support).join(","), word.join(","));
    }
    let n = set.automaton().num_states();
    let bound = if n < 128 { (1u128 << n).to_string() } else { format!("2^{n}") };
    let _ = writeln!(out, "size: {} (bound {bound})", set.len());
    Ok(out)
}

fn join_rationals(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

pub fn epsilon(input: &Path, lambda: &str, k: usize) -> Output {
    let lambda = lambda_arg(lambda)?;
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let aut = prob_input(read_automaton(input)?)?;
    let ladder = translate::compute_epsilon(&aut, &lambda, k)?;
    let mut out = String::new();
    let _ = writeln!(out, "lambda: {}", format_rational(&lambda));
    let base: Vec<Rational> = ladder.base.iter().cloned().collect();
    let _ = writeln!(out, "base: {{{}}}", join_rationals(&base));
    let _ = writeln!(
        out,
        "V>=lambda: {{{}}}",
        join_rationals(&translate::compute_value_set(&ladder.base, &lambda))
    );
    for (j, eps) in ladder.eps.iter().enumerate() {
        let _ = writeln!(out, "eps_{}: {}", j + 1, format_rational(eps));
        let _ = writeln!(
            out,
            "V>=eps_{}: {{{}}}",
            j + 1,
            join_rationals(&translate::compute_value_set(&ladder.base, eps))
        );
    }
    Ok(out)
}

/// Decimal with 6 significant digits.
fn significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.5}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn sample(input: &Path, prefix: &str, period: Option<&str>, runs: usize, horizon: usize, seed: u64) -> Output {
    let word = word_arg(prefix, period)?;
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    if horizon < word.len() {
        return Err(usage(format!("--horizon must be at least {}", word.len())));
    }
    let aut = prob_input(read_automaton(input)?)?;
    let est = monte_carlo(&aut, &word, runs, horizon, seed)?;
    Ok(format!(
        "estimate: {} (approx)\nstderr: {} (approx)\nfork_tail_stat: {} (approx)\n",
        significant(est.estimate),
        significant(est.stderr),
        significant(est.fork_tail_stat)
    ))
}

pub fn gadget(kind: GadgetKind, lambda: Option<&str>, output: &Path) -> Output {
    let lambda = lambda.map(lambda_arg).transpose()?;
    let aut = match kind {
        GadgetKind::FigA => {
            if lambda.is_some() {
                return Err(usage("fig-a takes no --lambda"));
            }
            gadgets::fig_a()
        }
        GadgetKind::PLambda => gadgets::p_lambda(&lambda.ok_or_else(|| usage("p-lambda requires --lambda"))?)?,
        GadgetKind::PTildeLambda => {
            gadgets::p_tilde_lambda(&lambda.ok_or_else(|| usage("p-tilde-lambda requires --lambda"))?)?
        }
    };
    let aut = Automaton::from(aut);
    write_output(output, &aut)?;
    Ok(format!("wrote {} to {}\n", states_summary(&aut), output.display()))
}
