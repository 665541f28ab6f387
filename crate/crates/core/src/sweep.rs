//! Seeded parallel verification sweeps.
//!
//! Each (identity, q, sample index) cell derives its own seed from the
//! sweep seed, so results do not depend on scheduling. Skipped samples are
//! redrawn with a fresh seed, up to [`MAX_REDRAWS`] times. So are samples
//! that pass only through the 0=0 branch: a random point where both sides
//! vanish to roundoff says nothing about the identity.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::context::QContext;
use crate::error::QError;
use crate::identities::{check_case, find, registry, sample_case, IdentityCase, Mode, ParamMap};
use crate::report::{Verdict, VerificationReport};
use crate::Result;

pub const MAX_REDRAWS: usize = 20;
pub const DEFAULT_QS: [f64; 3] = [0.3, 0.5, 0.8];

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Identity ids; empty means the whole registry.
    pub ids: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    /// Overrides each case's default sampling mode when set.
    pub mode: Option<Mode>,
    pub qs: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { ids: vec![], samples: 50, seed: 0, mode: None, qs: DEFAULT_QS.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub id: String,
    pub pass: usize,
    pub fail: usize,
    /// Skipped or vacuous draws, including those that were redrawn.
    pub skipped: usize,
    pub max_rel_residual: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary: Vec<SummaryRow>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.summary.iter().map(|r| r.fail).sum()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one draw, a mix of the sweep seed, the id and the cell indices.
pub fn cell_seed(seed: u64, id: &str, q_index: usize, sample: usize, redraw: usize) -> u64 {
    let id_hash = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    [id_hash, q_index as u64, sample as u64, redraw as u64].into_iter().fold(splitmix64(seed), |h, v| splitmix64(h ^ v))
}

/// A pass earned by the absolute 0=0 branch rather than the relative test.
fn vacuous(r: &VerificationReport, ctx: &QContext) -> bool {
    r.verdict.is_pass() && r.rel_residual.is_some_and(|rel| rel >= ctx.identity_tol())
}

struct Cell {
    case: &'static IdentityCase,
    q_index: usize,
    sample: usize,
}

fn run_cell(cell: &Cell, cfg: &SweepConfig, ctx: &QContext) -> (VerificationReport, usize) {
    let case = cell.case;
    let mode = cfg.mode.unwrap_or(case.default_mode());
    let mut redrawn = 0;
    loop {
        let seed = cell_seed(cfg.seed, case.id, cell.q_index, cell.sample, redrawn);
        let report = match sample_case(case, seed, mode, &ParamMap::new(), ctx).and_then(|p| check_case(case, &p, ctx, seed)) {
            Ok(r) => r,
            Err(e) => {
                let mut r = VerificationReport::new(case.id, seed, ctx.q(), ParamMap::new());
                r.verdict = Verdict::Fail(e.to_string());
                r
            }
        };
        if (report.verdict.is_skipped() || vacuous(&report, ctx)) && redrawn + 1 < MAX_REDRAWS {
            redrawn += 1;
            continue;
        }
        return (report, redrawn);
    }
}

pub fn run_sweep(cfg: &SweepConfig, base: &QContext) -> Result<SweepOutcome> {
    if cfg.samples == 0 {
        return Err(QError::InvalidSpec("samples must be at least 1".into()));
    }
    let mut cases: Vec<&'static IdentityCase> = if cfg.ids.is_empty() {
        registry().iter().collect()
    } else {
        cfg.ids.iter().map(|id| find(id)).collect::<Result<_>>()?
    };
    cases.sort_by_key(|c| c.id);
    cases.dedup_by_key(|c| c.id);
    let ctxs: Vec<QContext> = cfg.qs.iter().map(|&q| base.clone().with_q(q.into())).collect::<Result<_>>()?;

    // order: id, then sample index, then q
    let mut cells = Vec::new();
    for &case in &cases {
        for sample in 0..cfg.samples {
            for q_index in 0..ctxs.len() {
                cells.push(Cell { case, q_index, sample });
            }
        }
    }
    let results: Vec<(VerificationReport, usize)> =
        cells.par_iter().map(|c| run_cell(c, cfg, &ctxs[c.q_index])).collect();

    let summary = cases
        .iter()
        .map(|case| {
            let mut row = SummaryRow { id: case.id.to_string(), pass: 0, fail: 0, skipped: 0, max_rel_residual: 0.0 };
            for (r, redrawn) in results.iter().filter(|(r, _)| r.id == case.id) {
                row.skipped += redrawn;
                match r.verdict {
                    Verdict::Pass => row.pass += 1,
                    Verdict::Fail(_) => row.fail += 1,
                    Verdict::Skipped(_) => row.skipped += 1,
                }
                if !r.verdict.is_skipped() {
                    if let Some(rel) = r.rel_residual {
                        row.max_rel_residual = row.max_rel_residual.max(rel);
                    }
                }
            }
            row
        })
        .collect();
    Ok(SweepOutcome { reports: results.into_iter().map(|(r, _)| r).collect(), summary })
}

pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<24} {:>6} {:>6} {:>6} {:>14}", "identity", "pass", "skip", "fail", "max rel resid");
    for r in rows {
        let _ = writeln!(s, "{:<24} {:>6} {:>6} {:>6} {:>14.3e}", r.id, r.pass, r.skipped, r.fail, r.max_rel_residual);
    }
    s
}
