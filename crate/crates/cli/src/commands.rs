use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use qalign::qsim::marked_probability_closed_form;
use qalign::rng::{derive_seed, rng_from_seed};
use qalign::{
    align_optimal, bbht_search, enumerate_optimal, optimal_k, AlignParams, AlignStatus, Alphabet,
    Backend, BbhtParams, ClassState, GroverPrediction, LevelTrace, MarkPredicate, SearchState,
};

use crate::args::{AlignArgs, EncodeArgs, ExactArgs, Format, SearchArgs, StatsArgs, StatsKind, TraceArgs};
use crate::instance::Instance;

/// Process exit status: 0 verified success, 1 search failure, 2 usage or I/O error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
}

pub struct Rendered {
    pub status: Status,
    pub body: String,
}

fn bbht_params(search: &SearchArgs) -> BbhtParams {
    BbhtParams {
        lambda: search.lambda,
        timeout_factor: search.timeout_factor,
        seed: search.seed,
        backend: search.backend.into(),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub instance: String,
    pub n_prime: usize,
    pub sequence_qubits: usize,
    pub position_qubits: u32,
    pub targets: usize,
    pub k: u64,
    /// Single-target closed form `cos^2(k theta - alpha)`.
    pub predicted_success: Option<f64>,
    pub simulated_success: f64,
    pub position: usize,
    pub distance: u32,
    pub verified: bool,
    pub seed: u64,
}

pub fn cmd_exact(args: &ExactArgs) -> Result<ExactReport> {
    let inst = Instance::load(&args.instance)?;
    let table = &inst.table;
    let n_prime = table.n_prime();
    let mark = MarkPredicate::with_excluded(0, inst.excluded.clone());
    let prediction = GroverPrediction::new(n_prime).ok();
    let k = args.k.unwrap_or(if n_prime >= 2 { optimal_k(n_prime)? } else { 0 });
    let mut rng = rng_from_seed(args.search.seed);

    let (position, simulated_success) = match args.search.backend.into() {
        Backend::Dense => {
            let mut state = SearchState::init_uniform(table)?;
            state.evolve(&mark, k);
            let p = state.marked_probability(&mark);
            (state.measure(&mut rng), p)
        }
        Backend::Classes => {
            let mut state = ClassState::init_uniform(table, &mark)?;
            state.evolve(k);
            (state.measure(&mut rng), state.marked_probability())
        }
    };
    let distance = table.get(position).context("measured position outside the table")?;
    let verified = mark.is_marked(table, position);
    if verified {
        inst.verify(position, 0)?;
    }

    Ok(ExactReport {
        instance: inst.description.clone(),
        n_prime,
        sequence_qubits: table.sequence_qubits(),
        position_qubits: table.position_qubits(),
        targets: mark.count(table),
        k,
        predicted_success: prediction.map(|p| p.probability(k)),
        simulated_success,
        position,
        distance,
        verified,
        seed: args.search.seed,
    })
}

pub fn render_exact(r: &ExactReport, format: Format) -> Result<Rendered> {
    let status = if r.verified { Status::Success } else { Status::Failure };
    let body = match format {
        Format::Json => to_json(r)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "instance: {}", r.instance)?;
            writeln!(s, "windows n': {}  qubits: {} + {}", r.n_prime, r.sequence_qubits, r.position_qubits)?;
            writeln!(s, "iterations k: {}", r.k)?;
            match r.predicted_success {
                Some(p) => writeln!(s, "predicted single-target success: {p:.6}")?,
                None => writeln!(s, "predicted single-target success: n/a")?,
            }
            writeln!(s, "simulated success: {:.6} ({} target(s))", r.simulated_success, r.targets)?;
            if r.verified {
                writeln!(s, "result: exact match at position {} (verified)", r.position)?;
            } else {
                writeln!(
                    s,
                    "result: no match; measured position {} has distance {}",
                    r.position, r.distance
                )?;
            }
            s
        }
    };
    Ok(Rendered { status, body })
}

#[derive(Debug, Clone, Serialize)]
pub struct AlignReport {
    pub instance: String,
    pub n_prime: usize,
    pub status: AlignStatus,
    pub position: Option<usize>,
    pub distance: Option<u32>,
    pub oracle_calls_total: u64,
    pub budget_per_run: u64,
    pub r: u32,
    pub n_max: u32,
    pub levels: Vec<LevelTrace>,
    pub all_positions: Option<Vec<usize>>,
    pub seed: u64,
}

pub fn cmd_align(args: &AlignArgs) -> Result<AlignReport> {
    let inst = Instance::load(&args.instance)?;
    let table = &inst.table;
    let mut params = AlignParams::for_table(table);
    params.r = args.r;
    if let Some(n_max) = args.n_max {
        params.n_max = n_max;
    }
    params.bbht = bbht_params(&args.search);
    params.master_seed = args.search.seed;
    params.excluded = inst.excluded.clone();

    let result = align_optimal(table, &params)?;
    let mut all_positions = None;
    if let (Some(pos), Some(dist)) = (result.position, result.distance) {
        inst.verify(pos, dist)?;
        if args.all {
            let set = enumerate_optimal(table, dist, &params, &BTreeSet::from([pos]))?;
            for &p in &set {
                inst.verify(p, dist)?;
            }
            all_positions = Some(set.into_iter().collect());
        }
    }

    Ok(AlignReport {
        instance: inst.description.clone(),
        n_prime: table.n_prime(),
        status: result.status,
        position: result.position,
        distance: result.distance,
        oracle_calls_total: result.oracle_calls_total,
        budget_per_run: params.bbht.budget(table.n_prime()),
        r: params.r,
        n_max: params.n_max,
        levels: result.per_level_trace,
        all_positions,
        seed: args.search.seed,
    })
}

pub fn render_align(r: &AlignReport, format: Format) -> Result<Rendered> {
    let status = match r.status {
        AlignStatus::Found => Status::Success,
        AlignStatus::ExhaustedNMax => Status::Failure,
    };
    let body = match format {
        Format::Json => to_json(r)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "instance: {}", r.instance)?;
            writeln!(s, "windows n': {}  r: {}  n_max: {}  budget/run: {}", r.n_prime, r.r, r.n_max, r.budget_per_run)?;
            writeln!(s, "level  repeats  oracle_calls  found")?;
            for l in &r.levels {
                writeln!(s, "{:>5}  {:>7}  {:>12}  {}", l.n, l.repeats_used, l.oracle_calls, l.found)?;
            }
            match (r.position, r.distance) {
                (Some(p), Some(d)) => writeln!(s, "result: distance {d} at position {p} (verified)")?,
                _ => writeln!(s, "result: nothing found up to distance {}", r.n_max)?,
            }
            if let Some(all) = &r.all_positions {
                let list: Vec<String> = all.iter().map(|p| p.to_string()).collect();
                writeln!(s, "all positions at this distance: {}", list.join(","))?;
            }
            writeln!(s, "total oracle calls: {}", r.oracle_calls_total)?;
            s
        }
    };
    Ok(Rendered { status, body })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub k: u64,
    pub simulated: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub instance: String,
    pub n_prime: usize,
    pub level: u32,
    pub targets: usize,
    pub rows: Vec<TraceRow>,
}

pub fn cmd_trace(args: &TraceArgs) -> Result<TraceReport> {
    let inst = Instance::load(&args.instance)?;
    let table = &inst.table;
    let n_prime = table.n_prime();
    let mark = MarkPredicate::with_excluded(args.level, inst.excluded.clone());
    let targets = mark.count(table);
    let k_max = args
        .k_max
        .unwrap_or_else(|| (3.0 * (n_prime as f64).sqrt()).ceil() as u64);
    let single = if targets == 1 { GroverPrediction::new(n_prime).ok() } else { None };

    let mut state = SearchState::init_uniform(table)?;
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let predicted = match single {
            Some(p) => p.probability(k),
            None => marked_probability_closed_form(n_prime, targets, k),
        };
        rows.push(TraceRow {
            k,
            simulated: state.marked_probability(&mark),
            predicted,
        });
        state.grover_step(&mark);
    }
    Ok(TraceReport {
        instance: inst.description.clone(),
        n_prime,
        level: args.level,
        targets,
        rows,
    })
}

pub fn render_trace(r: &TraceReport, format: Format) -> Result<Rendered> {
    let body = match format {
        Format::Json => to_json(r)?,
        Format::Text => {
            let mut s = String::from("k,simulated,predicted\n");
            for row in &r.rows {
                writeln!(s, "{},{},{}", row.k, row.simulated, row.predicted)?;
            }
            s
        }
    };
    Ok(Rendered {
        status: Status::Success,
        body,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    /// `sin(pi/8) sqrt(n'/N_t)`: fewest iterations giving probability 1/2.
    pub lower_bound: Option<f64>,
    /// `sqrt(n'/N_t)`.
    pub sqrt_ratio: Option<f64>,
    /// Oracle budget of one run, `ceil(timeout_factor sqrt(n'))`.
    pub budget_per_run: u64,
    /// For `align`: `r (k + 1) budget` with `k` the optimal distance.
    pub cost_bound: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub instance: String,
    pub kind: &'static str,
    pub trials: u32,
    pub n_prime: usize,
    pub level: u32,
    pub targets: usize,
    pub successes: u32,
    pub success_rate: f64,
    pub mean_oracle_calls: f64,
    pub median_oracle_calls: u64,
    pub p95_oracle_calls: u64,
    pub max_oracle_calls: u64,
    pub reference: Reference,
    pub seed: u64,
}

/// Stream tag for per-trial seeds.
const STATS_TAG: u64 = 0x7374_6174;

pub fn cmd_stats(args: &StatsArgs) -> Result<StatsReport> {
    let inst = Instance::load(&args.instance)?;
    let table = &inst.table;
    let n_prime = table.n_prime();
    let base = bbht_params(&args.search);
    base.validate()?;
    let budget = base.budget(n_prime);
    let seed = args.search.seed;

    let (kind, level, targets, cost_bound, samples): (_, _, _, _, Vec<(bool, u64)>) = match args.kind {
        StatsKind::Bbht => {
            let mark = MarkPredicate::with_excluded(args.level, inst.excluded.clone());
            let samples = (0..args.trials)
                .into_par_iter()
                .map(|t| {
                    let params = BbhtParams {
                        seed: derive_seed(seed, &[STATS_TAG, t as u64]),
                        ..base
                    };
                    bbht_search(table, &mark, &params).map(|o| (o.found.is_some(), o.oracle_calls))
                })
                .collect::<qalign::Result<_>>()?;
            ("bbht", args.level, mark.count(table), None, samples)
        }
        StatsKind::Align => {
            let mut params = AlignParams::for_table(table);
            params.r = args.r;
            if let Some(n_max) = args.n_max {
                params.n_max = n_max;
            }
            params.bbht = base;
            params.excluded = inst.excluded.clone();
            params.validate(table)?;
            let best = inst.eligible_min();
            let samples = (0..args.trials)
                .into_par_iter()
                .map(|t| {
                    let p = AlignParams {
                        master_seed: derive_seed(seed, &[STATS_TAG, t as u64]),
                        ..params.clone()
                    };
                    align_optimal(table, &p).map(|r| (r.distance.is_some() && r.distance == best, r.oracle_calls_total))
                })
                .collect::<qalign::Result<_>>()?;
            let level = best.unwrap_or(0);
            let targets = best.map_or(0, |b| inst.eligible_at(b).len());
            let bound = best.map(|b| u64::from(params.r) * (u64::from(b) + 1) * budget);
            ("align", level, targets, bound, samples)
        }
    };

    let trials = samples.len().max(1);
    let successes = samples.iter().filter(|(ok, _)| *ok).count() as u32;
    let mut calls: Vec<u64> = samples.iter().map(|&(_, c)| c).collect();
    calls.sort_unstable();
    let mean = calls.iter().sum::<u64>() as f64 / trials as f64;
    let ratio = (targets > 0).then(|| (n_prime as f64 / targets as f64).sqrt());

    Ok(StatsReport {
        instance: inst.description.clone(),
        kind,
        trials: args.trials,
        n_prime,
        level,
        targets,
        successes,
        success_rate: successes as f64 / trials as f64,
        mean_oracle_calls: mean,
        median_oracle_calls: percentile(&calls, 0.5),
        p95_oracle_calls: percentile(&calls, 0.95),
        max_oracle_calls: calls.last().copied().unwrap_or(0),
        reference: Reference {
            lower_bound: ratio.map(|r| (std::f64::consts::PI / 8.0).sin() * r),
            sqrt_ratio: ratio,
            budget_per_run: budget,
            cost_bound,
        },
        seed,
    })
}

/// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[u64], p: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (p * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

pub fn render_stats(r: &StatsReport, format: Format) -> Result<Rendered> {
    let body = match format {
        Format::Json => to_json(r)?,
        Format::Text => {
            let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3}"));
            let mut s = String::new();
            writeln!(s, "instance: {}", r.instance)?;
            writeln!(s, "kind: {}  trials: {}  seed: {}", r.kind, r.trials, r.seed)?;
            writeln!(s, "windows n': {}  level: {}  targets: {}", r.n_prime, r.level, r.targets)?;
            writeln!(s, "success rate: {:.4} ({}/{})", r.success_rate, r.successes, r.trials)?;
            writeln!(
                s,
                "oracle calls: mean {:.3}  median {}  p95 {}  max {}",
                r.mean_oracle_calls, r.median_oracle_calls, r.p95_oracle_calls, r.max_oracle_calls
            )?;
            writeln!(s, "reference sin(pi/8)*sqrt(n'/N_t): {}", opt(r.reference.lower_bound))?;
            writeln!(s, "reference sqrt(n'/N_t): {}", opt(r.reference.sqrt_ratio))?;
            writeln!(s, "budget per run: {}", r.reference.budget_per_run)?;
            if let Some(b) = r.reference.cost_bound {
                writeln!(s, "cost bound r*(k+1)*budget: {b}")?;
            }
            s
        }
    };
    Ok(Rendered {
        status: Status::Success,
        body,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EncodedResidue {
    pub letter: char,
    pub code: u8,
    pub bits: String,
}

pub fn cmd_encode(args: &EncodeArgs) -> Result<Vec<EncodedResidue>> {
    let alphabet: Alphabet = args.alphabet.into();
    let codes = alphabet.encode_str(&args.sequence)?;
    Ok(codes
        .into_iter()
        .map(|code| EncodedResidue {
            letter: alphabet.decode(code).unwrap_or('?'),
            code,
            bits: alphabet.bit_string(code),
        })
        .collect())
}

pub fn render_encode(residues: &[EncodedResidue], format: Format) -> Result<Rendered> {
    let body = match format {
        Format::Json => to_json(&residues)?,
        Format::Text => {
            let mut s = String::new();
            for r in residues {
                writeln!(s, "{}\t{}\t{}", r.letter, r.code, r.bits)?;
            }
            s
        }
    };
    Ok(Rendered {
        status: Status::Success,
        body,
    })
}
