//! Information-set construction.
//!
//! - [`ga_construct`]: the `K` synthetic channels with the smallest GA noise
//!   variance.
//! - [`weight_init`]: rows of largest Hamming weight first, GA reliability as
//!   the tie-break. This stands in for a published minimum-weight-distribution
//!   sequence; [`init_from_sequence`] loads such a sequence when available.
//! - [`bit_swap_construct`]: greedy exchanges inside row-weight classes that
//!   keep a swap only when it lowers the SCL lower bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    assemble_lower_bound, lb_scl, pck_window, q_func, union_bound, BoundParams, BoundReport,
};
use crate::channel::snr_to_sigma2;
use crate::error::{Error, Result};
use crate::polar::{row_weight, CodeConfig};
use crate::reliability::{ga_evolve, ReliabilityProfile};
use crate::wdist::WeightEnumerator;

fn check_sizes(len: usize, k: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "N = {len} is not a power of two"
        )));
    }
    if k == 0 || k > len {
        return Err(Error::InvalidArgument(format!(
            "K = {k} must lie in 1..={len}"
        )));
    }
    Ok(len.trailing_zeros())
}

/// The `K` most reliable channels under GA at `es_n0_db`; ties go to the
/// smaller index.
pub fn ga_construct(len: usize, k: usize, es_n0_db: f64) -> Result<CodeConfig> {
    let n = check_sizes(len, k)?;
    let s2 = ga_evolve(n, snr_to_sigma2(es_n0_db))?;
    let mut idx: Vec<usize> = (1..=len).collect();
    idx.sort_by(|&a, &b| s2[a - 1].total_cmp(&s2[b - 1]).then(a.cmp(&b)));
    CodeConfig::new(len, &idx[..k])
}

/// Descending row weight, then ascending GA variance, then larger index.
pub fn weight_init(len: usize, k: usize, es_n0_db: f64) -> Result<CodeConfig> {
    let n = check_sizes(len, k)?;
    let s2 = ga_evolve(n, snr_to_sigma2(es_n0_db))?;
    let mut idx: Vec<usize> = (1..=len).collect();
    idx.sort_by(|&a, &b| {
        let (wa, wb) = ((a - 1).count_ones(), (b - 1).count_ones());
        wb.cmp(&wa)
            .then(s2[a - 1].total_cmp(&s2[b - 1]))
            .then(b.cmp(&a))
    });
    CodeConfig::new(len, &idx[..k])
}

/// Takes the first `K` entries of an externally supplied preference order
/// (1-based indices, most preferred first).
pub fn init_from_sequence(len: usize, k: usize, sequence: &[usize]) -> Result<CodeConfig> {
    check_sizes(len, k)?;
    let mut seen = vec![false; len];
    for &i in sequence {
        if i == 0 || i > len || std::mem::replace(&mut seen[i - 1], true) {
            return Err(Error::InvalidArgument(format!(
                "sequence entry {i} is out of range or repeated"
            )));
        }
    }
    if sequence.len() < k {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: sequence.len(),
        });
    }
    CodeConfig::new(len, &sequence[..k])
}

/// `B_r = {i : w(g_i) = 2^{n-r}}` for `r = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightPartition {
    pub subsets: Vec<Vec<usize>>,
}

pub fn partition_by_weight(n: u32) -> WeightPartition {
    let len = 1usize << n;
    let mut subsets = vec![Vec::new(); n as usize + 1];
    for i in 1..=len {
        let r = n as usize - (i - 1).count_ones() as usize;
        subsets[r].push(i);
    }
    WeightPartition { subsets }
}

/// One attempted exchange of the bit-swapping search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapRecord {
    /// Weight-class range `[a, b]` searched.
    pub a: usize,
    pub b: usize,
    /// Information index moved to the frozen set.
    pub removed: usize,
    /// Frozen index moved to the information set.
    pub added: usize,
    pub sigma2_max: f64,
    pub sigma2_min: f64,
    /// Bound of the trial set.
    pub bound: f64,
    /// Best bound before this attempt.
    pub incumbent: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitSwapResult {
    pub config: CodeConfig,
    pub initial_bound: f64,
    pub report: BoundReport,
    pub swap_log: Vec<SwapRecord>,
}

impl BitSwapResult {
    /// The swap log as JSON lines.
    pub fn swap_log_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.swap_log {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

/// Lower-bound evaluation with per-window memoisation. Windows are keyed by
/// their channel indices, so after an exchange only windows straddling the
/// changed positions are integrated again.
struct LbEvaluator {
    len: usize,
    es_n0_db: f64,
    sigma2: Vec<f64>,
    params: BoundParams,
    windows: HashMap<Vec<usize>, f64>,
    weights: HashMap<Vec<usize>, WeightEnumerator>,
}

impl LbEvaluator {
    fn new(len: usize, es_n0_db: f64, params: BoundParams) -> Result<Self> {
        let sigma2 = ga_evolve(len.trailing_zeros(), snr_to_sigma2(es_n0_db))?;
        Ok(Self {
            len,
            es_n0_db,
            sigma2,
            params,
            windows: HashMap::new(),
            weights: HashMap::new(),
        })
    }

    fn gaussian(&self, i: usize) -> (f64, f64) {
        let mu = 2.0 / self.sigma2[i - 1];
        (mu, (2.0 * mu).sqrt())
    }

    fn weight_enumerator(&mut self, info: &[usize]) -> Result<WeightEnumerator> {
        if let Some(wd) = self.weights.get(info) {
            return Ok(wd.clone());
        }
        let wd = WeightEnumerator::for_code(&CodeConfig::new(self.len, info)?)?;
        self.weights.insert(info.to_vec(), wd.clone());
        Ok(wd)
    }

    fn evaluate(&mut self, info: &[usize]) -> Result<f64> {
        let m = self.params.m();
        let mut complements = Vec::with_capacity(info.len().saturating_sub(m));
        for k in m + 1..=info.len() {
            let key = &info[k - 1 - m..k];
            let c = match self.windows.get(key) {
                Some(&c) => c,
                None => {
                    let (mu, sd): (Vec<f64>, Vec<f64>) =
                        key.iter().map(|&i| self.gaussian(i)).unzip();
                    let c = pck_window(&mu, &sd, &self.params)?.complement;
                    self.windows.insert(key.to_vec(), c);
                    c
                }
            };
            complements.push(c);
        }
        let bit_err: Vec<f64> = info
            .iter()
            .map(|&i| {
                let (mu, sd) = self.gaussian(i);
                q_func(mu / sd)
            })
            .collect();
        let wd = self.weight_enumerator(info)?;
        let p_ml = union_bound(wd.dmin, wd.a_dmin, self.es_n0_db);
        Ok(assemble_lower_bound(&complements, &bit_err, p_ml).1)
    }
}

/// Bit-swapping construction from the row-weight initializer.
pub fn bit_swap_construct(
    len: usize,
    k: usize,
    list_size: usize,
    es_n0_db: f64,
) -> Result<BitSwapResult> {
    let init = weight_init(len, k, es_n0_db)?;
    bit_swap_from(&init, BoundParams::new(list_size)?, es_n0_db)
}

/// Bit-swapping construction from an arbitrary initial information set.
pub fn bit_swap_from(
    init: &CodeConfig,
    params: BoundParams,
    es_n0_db: f64,
) -> Result<BitSwapResult> {
    let len = init.len();
    let n = init.n() as usize;
    let mut eval = LbEvaluator::new(len, es_n0_db, params)?;
    let sigma2 = eval.sigma2.clone();
    let classes = partition_by_weight(init.n());
    let class_of: Vec<usize> = (1..=len)
        .map(|i| n - (i - 1).count_ones() as usize)
        .collect();

    let mut info: Vec<usize> = init.info_set().to_vec();
    let mut best = eval.evaluate(&info)?;
    let initial_bound = best;
    let mut log = Vec::new();

    let c = (0..=n)
        .rev()
        .find(|&r| {
            classes.subsets[r]
                .iter()
                .any(|i| init.info_set().binary_search(i).is_ok())
        })
        .unwrap_or(0);
    let (mut a, mut b) = (c.saturating_sub(1), c);
    loop {
        let mut trial = info.clone();
        let (mut s_max, mut s_min) = (f64::INFINITY, 0.0);
        while s_max > s_min {
            let in_range = |i: usize| (a..=b).contains(&class_of[i - 1]);
            // argmax σ² over A' (ties: smaller index); argmin over F' (ties: larger index).
            let i_max = trial.iter().copied().filter(|&i| in_range(i)).fold(
                None,
                |acc: Option<usize>, i| match acc {
                    Some(j) if sigma2[j - 1] >= sigma2[i - 1] => Some(j),
                    _ => Some(i),
                },
            );
            let i_min = (1..=len)
                .filter(|&i| in_range(i) && trial.binary_search(&i).is_err())
                .fold(None, |acc: Option<usize>, i| match acc {
                    Some(j) if sigma2[j - 1] < sigma2[i - 1] => Some(j),
                    _ => Some(i),
                });
            let (Some(i_max), Some(i_min)) = (i_max, i_min) else {
                break;
            };
            s_max = sigma2[i_max - 1];
            s_min = sigma2[i_min - 1];
            let pos = trial.binary_search(&i_max).expect("member");
            trial.remove(pos);
            let ins = trial.binary_search(&i_min).unwrap_err();
            trial.insert(ins, i_min);
            let bound = eval.evaluate(&trial)?;
            let accepted = bound < best;
            log.push(SwapRecord {
                a,
                b,
                removed: i_max,
                added: i_min,
                sigma2_max: s_max,
                sigma2_min: s_min,
                bound,
                incumbent: best,
                accepted,
            });
            if accepted {
                info = trial.clone();
                best = bound;
            }
        }
        if a == 0 && b == n {
            break;
        }
        a = a.saturating_sub(1);
        b = (b + 1).min(n);
    }
    let config = CodeConfig::new(len, &info)?;
    let profile = ReliabilityProfile::from_ga(&config, es_n0_db)?;
    let wd = eval.weight_enumerator(&info)?;
    let report = lb_scl(&profile, &eval.params, &wd, es_n0_db)?;
    Ok(BitSwapResult {
        config,
        initial_bound,
        report,
        swap_log: log,
    })
}

/// Row weight of every information index, for reporting.
pub fn info_row_weights(cfg: &CodeConfig) -> Vec<usize> {
    cfg.info_set()
        .iter()
        .map(|&a| row_weight(a, cfg.n()).unwrap_or(0))
        .collect()
}
