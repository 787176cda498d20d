use serde::{Deserialize, Serialize};

use crate::scalar::{parse_scalar, FieldTower, GAUSSIAN};

use super::{ConfigError, Configuration, Hyperplane};

/// On-disk form of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub dimension: usize,
    pub tower: Vec<i64>,
    pub hyperplanes: Vec<HyperplaneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclotomic_order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneDoc {
    pub normal: Vec<String>,
    #[serde(default = "zero_literal")]
    pub offset: String,
    pub multiplicity: u32,
}

fn zero_literal() -> String {
    "0".into()
}

impl ConfigDoc {
    pub fn from_config(c: &Configuration) -> Self {
        let order = c.tower().order();
        ConfigDoc {
            dimension: c.dimension(),
            tower: c.tower().radicands().iter().map(|&d| d as i64).collect(),
            hyperplanes: c
                .hyperplanes()
                .iter()
                .map(|h| HyperplaneDoc {
                    normal: h.normal.iter().map(|s| s.to_string()).collect(),
                    offset: h.offset.to_string(),
                    multiplicity: h.multiplicity,
                })
                .collect(),
            cyclotomic_order: (order != GAUSSIAN).then_some(order),
        }
    }

    /// Builds the configuration; `source` is the raw text used to locate literal errors.
    pub fn to_config(&self, source: Option<&str>) -> Result<Configuration, ConfigError> {
        let tower = FieldTower::new(self.cyclotomic_order.unwrap_or(GAUSSIAN), &self.tower)?;
        let parse = |lit: &str| {
            parse_scalar(lit, &tower).map_err(|e| {
                let (line, column) = source
                    .and_then(|src| locate(src, lit))
                    .map(|(l, c)| (l, c + e.column))
                    .unwrap_or((0, e.column));
                ConfigError::Parse {
                    line,
                    column,
                    message: format!("in scalar \"{lit}\": {}", e.message),
                }
            })
        };
        let mut hs = Vec::with_capacity(self.hyperplanes.len());
        for h in &self.hyperplanes {
            let normal = h
                .normal
                .iter()
                .map(|s| parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            hs.push(Hyperplane::affine(
                normal,
                parse(&h.offset)?,
                h.multiplicity,
            ));
        }
        Configuration::with_tower(self.dimension, tower, hs)
    }
}

/// 1-based line and column of the opening quote of the first occurrence of `"lit"`.
fn locate(src: &str, lit: &str) -> Option<(usize, usize)> {
    let needle = format!("\"{lit}\"");
    let at = src.find(&needle)?;
    let before = &src[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(at, |p| at - p - 1) + 1;
    Some((line, column))
}

impl Configuration {
    pub fn from_json(src: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDoc = serde_json::from_str(src).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.to_config(Some(src))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&ConfigDoc::from_config(self)).expect("serializable");
        s.push('\n');
        s
    }
}
