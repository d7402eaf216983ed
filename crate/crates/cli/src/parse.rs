use std::ops::RangeInclusive;

use anyhow::{anyhow, bail, Context, Result};
use num_rational::BigRational;
use zernike::gaussian::{is_decimal_literal, parse_rational};
use zernike::GaussianRational;

/// Exact Gaussian-rational γ values. Decimals are refused so that nothing
/// is rounded on the way in.
pub fn exact_gammas(raw: &[String], order: u32) -> Result<Vec<GaussianRational>> {
    if raw.len() != order as usize {
        bail!("--gammas has {} values but --N is {order}", raw.len());
    }
    raw.iter()
        .enumerate()
        .map(|(idx, s)| {
            if is_decimal_literal(s) {
                bail!("g{} = `{s}` is a decimal; exact modules take integers or fractions such as 3/50i", idx + 1);
            }
            s.parse::<GaussianRational>().with_context(|| format!("g{}", idx + 1))
        })
        .collect()
}

/// `a`, `a..b` or `a..=b`, both ends inclusive.
pub fn range(s: &str) -> Result<RangeInclusive<u64>> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| anyhow!("bad range bound `{t}` in `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range `{s}`");
    }
    Ok(lo..=hi)
}

/// A physical parameter: exact when written as an integer or fraction,
/// floating when written as a decimal.
#[derive(Clone, Debug)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn parse(s: &str) -> Result<Self> {
        if is_decimal_literal(s) {
            s.parse::<f64>().map(Number::Float).map_err(|_| anyhow!("bad number `{s}`"))
        } else {
            parse_rational(s).map(Number::Exact).ok_or_else(|| anyhow!("bad number `{s}`"))
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn exact(&self) -> BigRational {
        match self {
            Number::Exact(r) => r.clone(),
            Number::Float(_) => unreachable!("checked by caller"),
        }
    }

    pub fn float(&self) -> f64 {
        match self {
            Number::Exact(r) => zernike::Real::to_f64(r),
            Number::Float(f) => *f,
        }
    }
}
