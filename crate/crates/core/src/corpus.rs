//! The 72 published expansions for `p` in {2, 3, 5, 7, 11, 13}, kept as
//! expected output, and the check that rebuilds every one of them.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{evaluate, EvalConfig};
use crate::expansion::{build, Theorem};
use crate::pell::{amplify_power, fundamental_solution, PellInstance, PellSolution};
use crate::wire::{parse_int, RationalWire, WireError};

/// Checked-in transcription, one object per displayed expansion.
pub const GOLDEN_JSON: &str = include_str!("../data/golden.json");

pub const GOLDEN_LEN: usize = 72;

/// Digits at which each entry is evaluated against the oracle.
pub const REPRODUCE_DIGITS: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenEntry {
    pub p: String,
    pub theorem: Theorem,
    pub s: String,
    pub n: String,
    pub m: String,
    pub prefactor: RationalWire,
    pub argument: RationalWire,
    pub locator: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn parse_corpus(json: &str) -> Result<Vec<GoldenEntry>, CorpusError> {
    Ok(serde_json::from_str(json)?)
}

pub fn golden() -> Vec<GoldenEntry> {
    parse_corpus(GOLDEN_JSON).expect("embedded corpus parses")
}

impl GoldenEntry {
    pub fn label(&self) -> String {
        format!("p={} s={} theorem {}", self.p, self.s, self.theorem)
    }

    fn nat(&self, field: &'static str, v: &str) -> Result<BigUint, WireError> {
        parse_int(field, v)?.to_biguint().ok_or_else(|| WireError::BadInteger { field, value: v.to_owned() })
    }

    pub fn solution(&self) -> Result<PellSolution, String> {
        let p = self.nat("p", &self.p).map_err(|e| e.to_string())?;
        let n = self.nat("n", &self.n).map_err(|e| e.to_string())?;
        let m = self.nat("m", &self.m).map_err(|e| e.to_string())?;
        PellSolution::new(p, n, m).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryOutcome {
    /// 1-based position in the corpus.
    pub index: usize,
    pub label: String,
    pub locator: String,
    /// Empty on success.
    pub problems: Vec<String>,
}

impl EntryOutcome {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn check_entry(e: &GoldenEntry, config: &EvalConfig) -> Vec<String> {
    let mut problems = Vec::new();
    let p = match e.nat("p", &e.p) {
        Ok(p) => p,
        Err(err) => return vec![err.to_string()],
    };
    let s = match e.s.parse::<u32>() {
        Ok(s) if s >= 1 => s,
        _ => return vec![format!("solution power {:?} is not a positive integer", e.s)],
    };
    let inst = match PellInstance::new(p) {
        Ok(i) => i,
        Err(err) => return vec![err.to_string()],
    };
    let sol = amplify_power(&fundamental_solution(&inst), s).expect("s >= 1");

    if let Err(err) = e.solution() {
        problems.push(format!("transcribed (n, m): {err}"));
    }
    if e.n != sol.x().to_string() || e.m != sol.y().to_string() {
        problems.push(format!("(n, m) = ({}, {}) but power {} gives ({}, {})", e.n, e.m, s, sol.x(), sol.y()));
    }

    let spec = match build(e.theorem, &sol) {
        Ok(spec) => spec,
        Err(err) => {
            problems.push(err.to_string());
            return problems;
        }
    };
    for (field, wire, value) in
        [("prefactor", &e.prefactor, spec.prefactor()), ("argument", &e.argument, spec.argument())]
    {
        match wire.parts(field) {
            Ok((num, den)) if &num == value.numer() && &den == value.denom() => {}
            Ok((num, den)) => problems.push(format!("{field} {num}/{den} != rebuilt {value}")),
            Err(err) => problems.push(err.to_string()),
        }
    }

    match evaluate(&spec, REPRODUCE_DIGITS, config) {
        Ok(r) if r.oracle_agrees => {}
        Ok(r) => problems.push(format!("evaluation {} disagrees with the oracle", r.decimal)),
        Err(err) => problems.push(err.to_string()),
    }
    problems
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproduceReport {
    pub outcomes: Vec<EntryOutcome>,
}

impl ReproduceReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.outcomes.len()
    }

    /// One line per entry in corpus order, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let tag = if o.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "[{tag}] #{:02} {} ({})", o.index, o.label, o.locator);
            if !o.passed() {
                let _ = write!(out, ": {}", o.problems.join("; "));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}/{} expansions reproduced", self.passed(), self.outcomes.len());
        out
    }
}

/// Rebuilds every entry (optionally only those with the given `p`) from
/// `(p, s, theorem)` and compares exactly; entries are checked in parallel
/// and reported in corpus order.
pub fn reproduce(entries: &[GoldenEntry], only_p: Option<&str>, config: &EvalConfig) -> ReproduceReport {
    let outcomes = entries
        .par_iter()
        .enumerate()
        .filter(|(_, e)| only_p.map_or(true, |p| e.p == p))
        .map(|(i, e)| EntryOutcome {
            index: i + 1,
            label: e.label(),
            locator: e.locator.clone(),
            problems: check_entry(e, config),
        })
        .collect();
    ReproduceReport { outcomes }
}
