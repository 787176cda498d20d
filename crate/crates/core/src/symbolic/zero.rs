//! Zero testing of sums of rational functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::TowerScalar;

use super::rational::RationalFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ZeroMode {
    #[default]
    Exact,
    Probabilistic,
}

impl ZeroMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroMode::Exact => "exact",
            ZeroMode::Probabilistic => "probabilistic",
        }
    }
}

impl std::str::FromStr for ZeroMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(ZeroMode::Exact),
            "probabilistic" => Ok(ZeroMode::Probabilistic),
            other => Err(format!("unknown zero-test mode '{other}'")),
        }
    }
}

/// Evidence attached to a probabilistic verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub trials: u32,
    /// Coordinates were drawn uniformly from `-range..=range`.
    pub range: u64,
    pub degree_bound: u32,
    /// Upper bound on the chance that a nonzero sum passed all trials.
    pub error_bound: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub zero: bool,
    pub mode: ZeroMode,
    /// The exact sum (exact mode, or on failure when it is cheap to produce).
    pub residual: Option<RationalFn>,
    /// Nonzero sample value found in probabilistic mode.
    pub witness: Option<(Vec<TowerScalar>, TowerScalar)>,
    pub certificate: Option<Certificate>,
}

impl ZeroTest {
    pub fn residual_text(&self, names: &[String]) -> String {
        if self.zero {
            return "0".into();
        }
        match (&self.residual, &self.witness) {
            (Some(r), _) => r.fmt_with(names),
            (None, Some((pt, v))) => {
                let pt: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
                format!("nonzero: value {v} at ({})", pt.join(", "))
            }
            _ => "nonzero".into(),
        }
    }
}

/// Balanced pairwise sum, which keeps intermediate denominators small.
pub fn sum_all(terms: &[RationalFn], nvars: usize) -> RationalFn {
    match terms.len() {
        0 => RationalFn::zero(nvars),
        1 => terms[0].clone(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            sum_all(a, nvars).add(&sum_all(b, nvars))
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x10c5_5eed;

/// Decides whether `Σ terms ≡ 0`.
pub fn is_zero_sum(terms: &[RationalFn], nvars: usize, mode: ZeroMode, seed: u64) -> ZeroTest {
    match mode {
        ZeroMode::Exact => {
            let s = sum_all(terms, nvars);
            ZeroTest {
                zero: s.is_zero(),
                mode,
                residual: Some(s),
                witness: None,
                certificate: None,
            }
        }
        ZeroMode::Probabilistic => probabilistic(terms, nvars, seed),
    }
}

pub fn is_zero(f: &RationalFn, mode: ZeroMode, seed: u64) -> ZeroTest {
    is_zero_sum(std::slice::from_ref(f), f.nvars(), mode, seed)
}

fn probabilistic(terms: &[RationalFn], nvars: usize, seed: u64) -> ZeroTest {
    let trials = 3u32;
    let degree_bound = terms
        .iter()
        .map(|t| {
            t.numerator().total_degree() + t.denominator().iter().map(|(_, p)| *p).sum::<u32>()
        })
        .sum::<u32>()
        .max(1);
    let range = (1000u64).max(64 * (degree_bound as u64 + 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        assert!(attempts < 1000, "could not find a regular sample point");
        let point: Vec<TowerScalar> = (0..nvars)
            .map(|_| TowerScalar::from_int(rng.gen_range(-(range as i64)..=range as i64)))
            .collect();
        let mut total = TowerScalar::zero();
        let mut singular = false;
        for t in terms {
            match t.evaluate(&point) {
                Ok(v) => total = total.add(&v),
                Err(_) => {
                    singular = true;
                    break;
                }
            }
        }
        if singular {
            continue;
        }
        if !total.is_zero() {
            return ZeroTest {
                zero: false,
                mode: ZeroMode::Probabilistic,
                residual: None,
                witness: Some((point, total)),
                certificate: None,
            };
        }
        done += 1;
    }
    // the cleared numerator has degree at most the summed bound
    let p = degree_bound as f64 / (2 * range + 1) as f64;
    ZeroTest {
        zero: true,
        mode: ZeroMode::Probabilistic,
        residual: None,
        witness: None,
        certificate: Some(Certificate {
            trials,
            range,
            degree_bound,
            error_bound: p.powi(trials as i32),
            seed,
        }),
    }
}
