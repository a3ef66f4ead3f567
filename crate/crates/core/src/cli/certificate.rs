//! Plain-text certificate format, `hamming-witness-cert v1`.
//!
//! One `key=value` per line in a fixed order, UTF-8, LF line endings, a
//! trailing newline after the last line. Integers are base 10; coordinates
//! in `blocks=` are 1-based.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::construction::WitnessSpec;
use crate::counting::ResidueCounts;
use crate::error::{Error, Result};
use crate::hamming::HammingParams;
use crate::partition::BalancedPartition;
use crate::verifier::{CheckStatus, Checks, Mode, WitnessCertificate};

pub const HEADER: &str = "hamming-witness-cert v1";

const KEYS: [&str; 15] = [
    "n",
    "k",
    "q",
    "blocks",
    "i1",
    "i2",
    "x_counts",
    "y_counts",
    "size",
    "alpha",
    "delta_bound",
    "delta_observed",
    "mode",
    "checks",
    "seed",
];

const CHECK_NAMES: [&str; 4] = ["size_gt_alpha", "degree_le_bound", "bipartite", "congruence"];

pub fn format_certificate(cert: &WitnessCertificate) -> String {
    let p = cert.spec.params();
    let part = cert.spec.partition();
    let c = &cert.checks;
    let mut out = String::new();
    let mut line = |key: &str, value: &dyn std::fmt::Display| {
        writeln!(out, "{key}={value}").expect("writing to a String");
    };
    line("n", &p.n());
    line("k", &p.k());
    line("q", &part.q());
    line("blocks", &part.blocks_string());
    line("i1", &cert.spec.i1());
    line("i2", &cert.spec.i2());
    line("x_counts", &cert.x_counts);
    line("y_counts", &cert.y_counts);
    line("size", &cert.size);
    line("alpha", &cert.alpha);
    line("delta_bound", &cert.delta_bound);
    match cert.delta_observed {
        Some(d) => line("delta_observed", &d),
        None => line("delta_observed", &"none"),
    }
    line("mode", &cert.mode);
    line(
        "checks",
        &format!(
            "size_gt_alpha:{},degree_le_bound:{},bipartite:{},congruence:{}",
            c.size_gt_alpha, c.degree_le_bound, c.bipartite, c.congruence
        ),
    );
    line("seed", &cert.seed);
    format!("{HEADER}\n{out}")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    // reject signs, whitespace and leading zeros so parsing stays bijective
    let canonical = value == "0" || (!value.is_empty()
        && !value.starts_with('0')
        && value.bytes().all(|b| b.is_ascii_digit()));
    if !canonical {
        return Err(bad(format!("{key}: not a canonical base-10 integer: {value:?}")));
    }
    value
        .parse()
        .map_err(|_| bad(format!("{key}: integer out of range: {value:?}")))
}

fn counts(key: &str, value: &str, k: u32) -> Result<ResidueCounts> {
    let parsed = value
        .split(',')
        .map(|v| number::<BigUint>(key, v))
        .collect::<Result<Vec<_>>>()?;
    if parsed.len() != k as usize {
        return Err(bad(format!("{key}: expected {k} entries, got {}", parsed.len())));
    }
    Ok(ResidueCounts::new(parsed))
}

fn checks(value: &str) -> Result<Checks> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != CHECK_NAMES.len() {
        return Err(bad(format!("checks: expected 4 entries in {value:?}")));
    }
    let mut status = [CheckStatus::Skipped; 4];
    for ((part, name), slot) in parts.iter().zip(CHECK_NAMES).zip(status.iter_mut()) {
        let (key, st) = part
            .split_once(':')
            .ok_or_else(|| bad(format!("checks: malformed entry {part:?}")))?;
        if key != name {
            return Err(bad(format!("checks: expected {name}, found {key}")));
        }
        *slot = st.parse()?;
    }
    Ok(Checks {
        size_gt_alpha: status[0],
        degree_le_bound: status[1],
        bipartite: status[2],
        congruence: status[3],
    })
}

pub fn parse_certificate(text: &str) -> Result<WitnessCertificate> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| bad("missing trailing newline"))?;
    if body.contains('\r') {
        return Err(bad("CR characters are not allowed"));
    }
    let mut lines = body.split('\n');
    if lines.next() != Some(HEADER) {
        return Err(bad(format!("first line must be {HEADER:?}")));
    }
    let mut values = Vec::with_capacity(KEYS.len());
    for key in KEYS {
        let line = lines.next().ok_or_else(|| bad(format!("missing {key}")))?;
        let (found, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("malformed line {line:?}")))?;
        if found != key {
            return Err(bad(format!("expected key {key}, found {found}")));
        }
        values.push(value);
    }
    if let Some(extra) = lines.next() {
        return Err(bad(format!("unexpected trailing line {extra:?}")));
    }
    let [n, k, q, blocks, i1, i2, xc, yc, size, alpha, delta_bound, delta_observed, mode, chk, seed] =
        values[..]
    else {
        unreachable!("one value per key");
    };

    let params = HammingParams::new(number("n", n)?, number("k", k)?)?;
    let q: usize = number("q", q)?;
    let partition = BalancedPartition::parse_blocks(params.n(), blocks)?;
    if partition.q() != q {
        return Err(bad(format!("q={q} but blocks has {} entries", partition.q())));
    }
    let spec = WitnessSpec::new(params, partition, number("i1", i1)?, number("i2", i2)?)?;
    let x_counts = counts("x_counts", xc, params.k())?;
    let y_counts = counts("y_counts", yc, params.k())?;
    let size: BigUint = number("size", size)?;
    if size != x_counts.get(spec.i1()) + y_counts.get(spec.i2()) {
        return Err(bad("size differs from x_counts[i1] + y_counts[i2]"));
    }
    let delta_observed = match delta_observed {
        "none" => None,
        v => Some(number("delta_observed", v)?),
    };
    Ok(WitnessCertificate {
        spec,
        x_counts,
        y_counts,
        size,
        alpha: number("alpha", alpha)?,
        delta_bound: number("delta_bound", delta_bound)?,
        delta_observed,
        mode: mode.parse::<Mode>()?,
        checks: checks(chk)?,
        seed: number("seed", seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::make_partition;
    use crate::verifier::{certify, CertifyOptions};

    fn cert(n: usize, k: u32, mode: Mode) -> WitnessCertificate {
        let opts = CertifyOptions {
            mode,
            sample_size: 100,
            seed: 5,
            ..Default::default()
        };
        certify(&HammingParams::new(n, k).unwrap(), &make_partition(n).unwrap(), &opts).unwrap()
    }

    #[test]
    fn h22_text_is_bit_exact() {
        let text = format_certificate(&cert(2, 2, Mode::Exhaustive));
        let expected = "hamming-witness-cert v1\n\
n=2\n\
k=2\n\
q=1\n\
blocks=1,2\n\
i1=0\n\
i2=1\n\
x_counts=1,0\n\
y_counts=1,2\n\
size=3\n\
alpha=2\n\
delta_bound=2\n\
delta_observed=2\n\
mode=exhaustive\n\
checks=size_gt_alpha:pass,degree_le_bound:pass,bipartite:pass,congruence:pass\n\
seed=5\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn round_trips() {
        for (n, k, mode) in [
            (2, 2, Mode::Exhaustive),
            (7, 3, Mode::Sampled),
            (50, 11, Mode::CountsOnly),
        ] {
            let c = cert(n, k, mode);
            let text = format_certificate(&c);
            assert_eq!(parse_certificate(&text).unwrap(), c);
        }
    }

    #[test]
    fn counts_only_prints_none_and_skipped() {
        let text = format_certificate(&cert(30, 5, Mode::CountsOnly));
        assert!(text.contains("\ndelta_observed=none\n"));
        assert!(text.contains("degree_le_bound:skipped,bipartite:skipped"));
    }

    #[test]
    fn rejects_malformed() {
        let good = format_certificate(&cert(4, 3, Mode::Exhaustive));
        assert!(parse_certificate(good.trim_end()).is_err());
        assert!(parse_certificate(&good.replace('\n', "\r\n")).is_err());
        assert!(parse_certificate(&good.replace("i1=", "i0=")).is_err());
        assert!(parse_certificate(&good.replace("seed=5", "seed=05")).is_err());
        assert!(parse_certificate(&good.replace("mode=exhaustive", "mode=fast")).is_err());
        assert!(parse_certificate(&format!("{good}extra=1\n")).is_err());
        let wrong_size = good.replace("size=", "size=1");
        assert!(parse_certificate(&wrong_size).is_err());
    }
}
