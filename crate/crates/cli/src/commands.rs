//! The four subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use polar_scl::bounds::{lb_scl, Alpha, BoundParams};
use polar_scl::construct::{bit_swap_construct, ga_construct, init_from_sequence, weight_init};
use polar_scl::decoders::CrcSpec;
use polar_scl::reliability::ReliabilityProfile;
use polar_scl::sim::{sweep, sweep_csv, DecoderKind, SimSettings};
use polar_scl::wdist::{
    dmin_lower_via_rows, enumerate_weights, from_rows, WeightEnumerator, ENUM_MAX_K,
};
use polar_scl::{CodeConfig, Error};
use serde_json::{json, Map, Value};

use crate::output::{csv_preamble, emit, envelope, pretty, read, snr_points};
use crate::{BoundArgs, CliError, ConstructArgs, Format, Method, MwdArgs, SimulateArgs};

fn load_code(path: &Path) -> Result<CodeConfig, CliError> {
    Ok(CodeConfig::from_json(&read(path)?)?)
}

fn code_fields(cfg: &CodeConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("N".into(), cfg.len().into());
    m.insert("K".into(), cfg.k().into());
    m.insert("A".into(), cfg.info_set().into());
    m
}

fn parse_sequence(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Core(Error::Format(format!("bad sequence entry `{t}`"))))
        })
        .collect()
}

fn swap_log_path(a: &ConstructArgs) -> Option<PathBuf> {
    a.swap_log
        .clone()
        .or_else(|| a.out.as_ref().map(|o| o.with_extension("swaps.jsonl")))
}

pub fn construct(a: &ConstructArgs, spec: &Value) -> Result<(), CliError> {
    if a.method == Method::Bs && a.list.is_none() {
        return Err(CliError::Usage("--method bs requires --list".into()));
    }
    if a.method == Method::Sequence && a.sequence.is_none() {
        return Err(CliError::Usage(
            "--method sequence requires --sequence".into(),
        ));
    }
    let mut extra = Map::new();
    let cfg = match a.method {
        Method::Ga => ga_construct(a.len, a.k, a.snr_db)?,
        Method::Weight => weight_init(a.len, a.k, a.snr_db)?,
        Method::Sequence => {
            let seq = parse_sequence(&read(a.sequence.as_deref().expect("checked above"))?)?;
            init_from_sequence(a.len, a.k, &seq)?
        }
        Method::Bs => {
            let res = bit_swap_construct(a.len, a.k, a.list.expect("checked above"), a.snr_db)?;
            extra.insert("initial_bound".into(), res.initial_bound.into());
            extra.insert("final_bound".into(), res.report.p_lb_scl.into());
            extra.insert(
                "accepted_swaps".into(),
                res.swap_log.iter().filter(|r| r.accepted).count().into(),
            );
            if let Some(path) = swap_log_path(a) {
                emit(Some(&path), &res.swap_log_jsonl()?)?;
            }
            res.config
        }
    };
    let mut fields = code_fields(&cfg);
    fields.extend(extra);
    emit(a.out.as_deref(), &pretty(&envelope(spec, fields)))
}

/// Weight data for the bound: exact up to the enumeration limit, otherwise
/// the row-based `d_min` with the user's `A_dmin`.
fn bound_weights(cfg: &CodeConfig, a_dmin: Option<u64>) -> Result<WeightEnumerator, CliError> {
    if cfg.k() <= ENUM_MAX_K {
        let wd = enumerate_weights(cfg)?;
        return Ok(match a_dmin {
            Some(a) => WeightEnumerator::given(wd.dmin, a)?,
            None => wd,
        });
    }
    match a_dmin {
        Some(a) => Ok(WeightEnumerator::given(dmin_lower_via_rows(cfg)?, a)?),
        None => Err(CliError::Guard(format!(
            "K = {} exceeds the exact enumeration limit {ENUM_MAX_K}: A_dmin is not computed for such codes, pass --a-dmin",
            cfg.k()
        ))),
    }
}

pub fn bound(a: &BoundArgs, spec: &Value) -> Result<(), CliError> {
    let cfg = load_code(&a.code)?;
    let snrs = snr_points(&a.snr)?;
    let params = BoundParams::new(a.list)?.with_alpha(match a.alpha {
        Some(x) => Alpha::Value(x),
        None => Alpha::Discard,
    })?;
    let wd = bound_weights(&cfg, a.a_dmin)?;
    let reports = snrs
        .iter()
        .map(|&snr| lb_scl(&ReliabilityProfile::from_ga(&cfg, snr)?, &params, &wd, snr))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match a.format {
        Format::Json => pretty(&envelope(
            spec,
            [(
                "rows".to_string(),
                serde_json::to_value(&reports).map_err(Error::from)?,
            )]
            .into_iter()
            .collect(),
        )),
        Format::Csv => {
            let mut s = csv_preamble(spec);
            s.push_str("es_n0_db,list_size,p_lb_scl,p_ml,p_sc_modified,p_sc_classic,dmin,a_dmin,a_dmin_approximate,max_integration_error\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{:e},{:e},{:e},{:e},{},{},{},{:e}",
                    r.es_n0_db,
                    r.list_size,
                    r.p_lb_scl,
                    r.p_ml,
                    r.p_sc_modified,
                    r.p_sc_classic,
                    r.dmin,
                    r.a_dmin,
                    r.a_dmin_approximate,
                    r.max_integration_error
                );
            }
            s
        }
    };
    emit(a.out.as_deref(), &text)
}

pub fn simulate(a: &SimulateArgs, spec: &Value) -> Result<(), CliError> {
    let cfg = load_code(&a.code)?;
    let snrs = snr_points(&a.snr)?;
    let kind: DecoderKind = a
        .decoder
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let crc = match (&a.crc_poly, a.crc_len) {
        (Some(poly), Some(len)) => Some(CrcSpec::from_hex(poly, len)?),
        _ => None,
    };
    if kind == DecoderKind::CaScl && crc.is_none() {
        return Err(CliError::Usage(
            "--decoder cascl requires --crc-poly and --crc-len".into(),
        ));
    }
    let list = if kind.is_list() { a.list } else { 1 };
    let mut settings = SimSettings::new(kind, list, a.trials)
        .stop_at(a.stop_errors)
        .all_zero(a.all_zero);
    if let Some(c) = crc {
        settings = settings.with_crc(c);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {:?} threads: {e}", a.threads)))?;
    let reports = pool.install(|| sweep(&cfg, &settings, &snrs, a.seed))?;
    let text = match a.format {
        Format::Json => pretty(&envelope(
            spec,
            [(
                "reports".to_string(),
                serde_json::to_value(&reports).map_err(Error::from)?,
            )]
            .into_iter()
            .collect(),
        )),
        Format::Csv => csv_preamble(spec) + &sweep_csv(&reports),
    };
    emit(a.out.as_deref(), &text)
}

pub fn mwd(a: &MwdArgs, spec: &Value) -> Result<(), CliError> {
    let cfg = load_code(&a.code)?;
    let fields = if cfg.k() <= ENUM_MAX_K {
        let wd = enumerate_weights(&cfg)?;
        json!({"dmin": wd.dmin, "a_dmin": wd.a_dmin, "approximate": false, "spectrum": wd.spectrum_json()})
    } else {
        eprintln!(
            "warning: K = {} exceeds the enumeration limit {ENUM_MAX_K}; reporting d_min from the generator rows only",
            cfg.k()
        );
        let wd = from_rows(&cfg)?;
        json!({"dmin": wd.dmin, "approximate": true, "spectrum": Value::Null})
    };
    let Value::Object(fields) = fields else {
        unreachable!()
    };
    emit(a.out.as_deref(), &pretty(&envelope(spec, fields)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_accepts_commas_and_whitespace() {
        assert_eq!(parse_sequence("8, 7\n6 4\n").unwrap(), vec![8, 7, 6, 4]);
        assert!(parse_sequence("8 x").is_err());
    }

    #[test]
    fn large_k_bound_needs_a_dmin() {
        let cfg = ga_construct(64, 32, 1.0).unwrap();
        assert!(matches!(bound_weights(&cfg, None), Err(CliError::Guard(_))));
        let wd = bound_weights(&cfg, Some(5)).unwrap();
        assert_eq!(
            (wd.dmin, wd.a_dmin),
            (dmin_lower_via_rows(&cfg).unwrap(), 5)
        );
    }

    #[test]
    fn small_k_bound_enumerates() {
        let cfg = CodeConfig::new(8, &[4, 6, 7, 8]).unwrap();
        let wd = bound_weights(&cfg, None).unwrap();
        assert_eq!((wd.dmin, wd.a_dmin), (4, 14));
    }
}
