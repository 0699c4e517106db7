//! Monte Carlo block-error simulation with path-loss / path-selection
//! bookkeeping for list decoders.
//!
//! Trial `t` draws its message and noise from stream `t` of the run seed, so
//! every per-trial outcome is fixed by `(seed, t)` alone. Trials run in
//! parallel batches and are tallied in trial order; early stopping cuts the
//! run at the exact trial that reaches the error target, which makes the
//! report independent of the thread count and of the batch size.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{transmit_into, trial_rng, ChannelParams, LlrBlock};
use crate::decoders::{sc_decode_into, CrcSpec, MlDecoder, PathList, PathTrace, SclDecoder};
use crate::error::{Error, Result};
use crate::polar::{transform_in_place, BitBlock, CodeConfig};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecoderKind {
    #[serde(rename = "SC")]
    Sc,
    #[serde(rename = "SCL")]
    Scl,
    #[serde(rename = "CASCL")]
    CaScl,
    #[serde(rename = "ML")]
    Ml,
}

impl DecoderKind {
    /// SCL and CA-SCL, whose errors are split into PL and PS events.
    pub fn is_list(self) -> bool {
        matches!(self, DecoderKind::Scl | DecoderKind::CaScl)
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(DecoderKind::Sc),
            "scl" => Ok(DecoderKind::Scl),
            "cascl" | "ca-scl" => Ok(DecoderKind::CaScl),
            "ml" => Ok(DecoderKind::Ml),
            other => Err(Error::InvalidArgument(format!("unknown decoder `{other}`"))),
        }
    }
}

/// How a list-decoding block error happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorClass {
    /// The transmitted path left the list at `step` (1-based bit index).
    PathLoss { step: usize },
    /// The transmitted path reached the final list but was not selected.
    PathSelection,
}

/// Classifies a list-decoding error.
///
/// Calling this on a trial that decoded correctly is a contract violation, as
/// is a trace that disagrees with the final list.
pub fn classify_error(
    trace: &PathTrace,
    final_list: &PathList,
    transmitted_u: &BitBlock,
    selected: &BitBlock,
) -> Result<ErrorClass> {
    if selected == transmitted_u {
        return Err(Error::Contract(
            "classify_error called on a correctly decoded block".into(),
        ));
    }
    let in_list = final_list.contains(transmitted_u);
    match (trace.first_loss, in_list) {
        (None, true) => Ok(ErrorClass::PathSelection),
        (Some(step), false) => Ok(ErrorClass::PathLoss { step }),
        (loss, _) => Err(Error::Contract(format!(
            "trace (first loss {loss:?}) disagrees with final-list membership ({in_list})"
        ))),
    }
}

/// Everything except the channel that defines a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub decoder: DecoderKind,
    pub list_size: usize,
    /// Appended to every message when present; required by CA-SCL. Other
    /// decoders treat the CRC bits as ordinary information bits.
    pub crc: Option<CrcSpec>,
    pub trials: u64,
    pub stop_at_errors: u64,
    /// Send the all-zero message instead of uniform random ones.
    pub all_zero: bool,
    /// Keep one [`ErrorRecord`] per error trial in the report.
    pub keep_error_log: bool,
}

impl SimSettings {
    pub fn new(decoder: DecoderKind, list_size: usize, trials: u64) -> Self {
        Self {
            decoder,
            list_size,
            crc: None,
            trials,
            stop_at_errors: 100,
            all_zero: false,
            keep_error_log: false,
        }
    }

    pub fn with_crc(mut self, crc: CrcSpec) -> Self {
        self.crc = Some(crc);
        self
    }

    pub fn stop_at(mut self, errors: u64) -> Self {
        self.stop_at_errors = errors;
        self
    }

    pub fn all_zero(mut self, yes: bool) -> Self {
        self.all_zero = yes;
        self
    }

    pub fn keep_errors(mut self, yes: bool) -> Self {
        self.keep_error_log = yes;
        self
    }
}

/// One error trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub trial: u64,
    /// `None` for decoders outside the SCL family.
    pub class: Option<ErrorClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub block_errors: u64,
    /// Zero for SC and ML, which are not classified.
    pub pl_errors: u64,
    pub ps_errors: u64,
    pub bler: f64,
    pub pl_rate: f64,
    pub ps_rate: f64,
    pub wilson_ci95: (f64, f64),
    pub seed: u64,
    pub decoder_kind: DecoderKind,
    pub list_size: usize,
    pub es_n0_db: f64,
    pub elapsed_seconds: f64,
    /// First-loss step (1-based bit index) to PL error count.
    pub first_loss_histogram: BTreeMap<usize, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub error_log: Vec<ErrorRecord>,
}

impl SimReport {
    /// Binomial standard error of `bler`.
    pub fn std_err(&self) -> f64 {
        (self.bler * (1.0 - self.bler) / self.trials as f64).sqrt()
    }

    /// `std_err / bler`, infinite without errors.
    pub fn relative_error(&self) -> f64 {
        if self.block_errors == 0 {
            f64::INFINITY
        } else {
            self.std_err() / self.bler
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        v["format"] = crate::FORMAT_VERSION.into();
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// Wilson score interval at normal quantile `z`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Message bits (information positions in order) for trial `t`.
fn draw_message(
    rng: &mut impl RngCore,
    k: usize,
    crc: Option<&CrcSpec>,
    all_zero: bool,
    out: &mut Vec<u8>,
) {
    out.clear();
    let payload = k - crc.map_or(0, |c| c.len());
    if all_zero {
        out.resize(k, 0);
        return;
    }
    let mut word = 0u64;
    for j in 0..payload {
        if j % 64 == 0 {
            word = rng.next_u64();
        }
        out.push((word >> (j % 64)) as u8 & 1);
    }
    if let Some(c) = crc {
        let rem = c.remainder(out);
        out.extend_from_slice(&rem);
    }
}

/// Regenerates the transmitted `u` and the channel LLRs of trial `trial`.
///
/// Runs that share `params`, `crc` and `all_zero` see the same inputs at the
/// same trial index whatever their decoder, which enables paired comparisons.
pub fn trial_input(
    cfg: &CodeConfig,
    params: &ChannelParams,
    crc: Option<&CrcSpec>,
    all_zero: bool,
    trial: u64,
) -> Result<(BitBlock, LlrBlock)> {
    check_crc(cfg, crc)?;
    let mut scratch = Scratch::new(cfg.len());
    scratch.fill(cfg, params, crc, all_zero, trial);
    Ok((
        BitBlock::from_vec_unchecked(scratch.u.clone()),
        LlrBlock::new(scratch.llr.clone())?,
    ))
}

/// `ln P(y | x(u))` up to a constant shared by every codeword:
/// `½ Σ (1 - 2 x_i) l_i`.
pub fn log_likelihood(llr: &LlrBlock, u: &BitBlock) -> Result<f64> {
    if llr.len() != u.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            actual: llr.len(),
        });
    }
    let mut x = u.as_slice().to_vec();
    transform_in_place(&mut x);
    Ok(0.5
        * x.iter()
            .zip(llr.as_slice())
            .map(|(&b, &l)| if b == 0 { l } else { -l })
            .sum::<f64>())
}

fn check_crc(cfg: &CodeConfig, crc: Option<&CrcSpec>) -> Result<()> {
    match crc {
        Some(c) if c.len() >= cfg.k() => Err(Error::InvalidArgument(format!(
            "K = {} must exceed the CRC length {}",
            cfg.k(),
            c.len()
        ))),
        _ => Ok(()),
    }
}

struct Scratch {
    msg: Vec<u8>,
    u: Vec<u8>,
    x: Vec<u8>,
    llr: Vec<f64>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Self {
            msg: Vec::new(),
            u: vec![0; len],
            x: vec![0; len],
            llr: Vec::with_capacity(len),
        }
    }

    fn fill(
        &mut self,
        cfg: &CodeConfig,
        params: &ChannelParams,
        crc: Option<&CrcSpec>,
        all_zero: bool,
        t: u64,
    ) {
        let mut rng = trial_rng(params.seed, t);
        draw_message(&mut rng, cfg.k(), crc, all_zero, &mut self.msg);
        self.u.fill(0);
        for (&a, &b) in cfg.info_set().iter().zip(&self.msg) {
            self.u[a - 1] = b;
        }
        self.x.copy_from_slice(&self.u);
        transform_in_place(&mut self.x);
        transmit_into(&self.x, params, &mut rng, &mut self.llr);
    }
}

enum Engine {
    Sc(Vec<bool>),
    List(Box<SclDecoder>),
    Ml(Box<MlDecoder>),
}

struct Worker<'a> {
    cfg: &'a CodeConfig,
    settings: &'a SimSettings,
    params: &'a ChannelParams,
    engine: Engine,
    scratch: Scratch,
    decided: Vec<u8>,
}

/// Outcome of one trial: `None` when decoded correctly.
type Outcome = Option<Option<ErrorClass>>;

impl<'a> Worker<'a> {
    fn new(
        cfg: &'a CodeConfig,
        settings: &'a SimSettings,
        params: &'a ChannelParams,
    ) -> Result<Self> {
        let engine = match settings.decoder {
            DecoderKind::Sc => Engine::Sc(cfg.frozen_mask().to_vec()),
            DecoderKind::Scl | DecoderKind::CaScl => {
                Engine::List(Box::new(SclDecoder::new(cfg, settings.list_size)?))
            }
            DecoderKind::Ml => Engine::Ml(Box::new(MlDecoder::new(cfg)?)),
        };
        Ok(Self {
            cfg,
            settings,
            params,
            engine,
            scratch: Scratch::new(cfg.len()),
            decided: vec![0; cfg.len()],
        })
    }

    fn run(&mut self, t: u64) -> Result<Outcome> {
        let s = self.settings;
        self.scratch
            .fill(self.cfg, self.params, s.crc.as_ref(), s.all_zero, t);
        let u = &self.scratch.u;
        match &mut self.engine {
            Engine::Sc(frozen) => {
                sc_decode_into(&self.scratch.llr, frozen, &mut self.decided);
                Ok((self.decided != *u).then_some(None))
            }
            Engine::Ml(dec) => {
                let got = dec.decode_slice(&self.scratch.llr)?;
                Ok((got.as_slice() != u.as_slice()).then_some(None))
            }
            Engine::List(dec) => {
                let out = match (s.decoder, s.crc.as_ref()) {
                    (DecoderKind::CaScl, Some(crc)) => {
                        dec.decode_crc_slice(&self.scratch.llr, crc, Some(u))?
                    }
                    _ => dec.decode_slice(&self.scratch.llr, Some(u))?,
                };
                if out.selected.as_slice() == u.as_slice() {
                    return Ok(None);
                }
                let truth = BitBlock::from_vec_unchecked(u.clone());
                let trace = out
                    .trace
                    .as_ref()
                    .ok_or_else(|| Error::Contract("missing path trace".into()))?;
                let class = classify_error(trace, &out.final_list, &truth, &out.selected)?;
                Ok(Some(Some(class)))
            }
        }
    }
}

/// Simulates block errors of `cfg` over the channel `params` (whose `seed`
/// is the run seed).
pub fn run_bler(
    cfg: &CodeConfig,
    settings: &SimSettings,
    params: &ChannelParams,
) -> Result<SimReport> {
    if settings.trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    if settings.decoder == DecoderKind::CaScl && settings.crc.is_none() {
        return Err(Error::InvalidArgument("CA-SCL needs a CRC".into()));
    }
    check_crc(cfg, settings.crc.as_ref())?;
    // Validates the decoder parameters (list size, ML capacity) up front.
    Worker::new(cfg, settings, params)?;

    let start = Instant::now();
    let batch = 256 * rayon::current_num_threads() as u64;
    let mut report = SimReport {
        trials: 0,
        block_errors: 0,
        pl_errors: 0,
        ps_errors: 0,
        bler: 0.0,
        pl_rate: 0.0,
        ps_rate: 0.0,
        wilson_ci95: (0.0, 1.0),
        seed: params.seed,
        decoder_kind: settings.decoder,
        list_size: settings.list_size,
        es_n0_db: params.es_n0_db,
        elapsed_seconds: 0.0,
        first_loss_histogram: BTreeMap::new(),
        error_log: Vec::new(),
    };
    let mut next = 0u64;
    'outer: while next < settings.trials {
        let end = (next + batch).min(settings.trials);
        let outcomes: Vec<Outcome> = (next..end)
            .into_par_iter()
            .map_init(
                || Worker::new(cfg, settings, params),
                |w, t| match w {
                    Ok(w) => w.run(t),
                    Err(e) => Err(e.clone()),
                },
            )
            .collect::<Result<_>>()?;
        for (t, outcome) in (next..end).zip(outcomes) {
            report.trials = t + 1;
            let Some(class) = outcome else { continue };
            report.block_errors += 1;
            match class {
                Some(ErrorClass::PathLoss { step }) => {
                    report.pl_errors += 1;
                    *report.first_loss_histogram.entry(step).or_insert(0) += 1;
                }
                Some(ErrorClass::PathSelection) => report.ps_errors += 1,
                None => {}
            }
            if settings.keep_error_log {
                report.error_log.push(ErrorRecord { trial: t, class });
            }
            if report.block_errors >= settings.stop_at_errors {
                break 'outer;
            }
        }
        next = end;
    }
    let n = report.trials as f64;
    report.bler = report.block_errors as f64 / n;
    report.pl_rate = report.pl_errors as f64 / n;
    report.ps_rate = report.ps_errors as f64 / n;
    report.wilson_ci95 = wilson_interval(report.block_errors, report.trials, Z95);
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Brute-force ML block error rate on the same per-trial inputs as
/// [`run_bler`] with an equal seed.
pub fn estimate_ml_bler(
    cfg: &CodeConfig,
    params: &ChannelParams,
    trials: u64,
    stop_at_errors: u64,
) -> Result<SimReport> {
    run_bler(
        cfg,
        &SimSettings::new(DecoderKind::Ml, 1, trials).stop_at(stop_at_errors),
        params,
    )
}

/// Runs the same settings at each SNR, reusing `seed` at every point.
pub fn sweep(
    cfg: &CodeConfig,
    settings: &SimSettings,
    snrs_db: &[f64],
    seed: u64,
) -> Result<Vec<SimReport>> {
    snrs_db
        .iter()
        .map(|&snr| run_bler(cfg, settings, &ChannelParams::new(snr, seed)?))
        .collect()
}

/// Header of [`sweep_csv`].
pub const SWEEP_CSV_HEADER: &str = "es_n0_db,bler,pl_rate,ps_rate,ci_lo,ci_hi,trials";

/// Sweep table with LF line endings and a header row.
pub fn sweep_csv(reports: &[SimReport]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{:e},{:e},{:e},{:e},{:e},{}",
            r.es_n0_db, r.bler, r.pl_rate, r.ps_rate, r.wilson_ci95.0, r.wilson_ci95.1, r.trials
        );
    }
    out
}
