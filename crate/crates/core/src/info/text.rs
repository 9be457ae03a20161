//! TOML text form of pmfs and channels.
//!
//! A joint pmf lists its axes in order and a flat row-major `mass` array
//! (last axis fastest):
//!
//! ```toml
//! mass = [0.25, 0.25, 0.25, 0.25]
//!
//! [[axis]]
//! name = "A"
//! symbols = ["0", "1"]
//!
//! [[axis]]
//! name = "E"
//! symbols = ["0", "1"]
//! ```
//!
//! A channel lists its input and output labels and a flat input-major
//! `mass` array, one row per input symbol:
//!
//! ```toml
//! input = ["0", "1"]
//! output = ["0", "e", "1"]
//! mass = [0.7, 0.3, 0.0, 0.0, 0.3, 0.7]
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{Alphabet, ConditionalPmf, JointPmf};
use crate::scalar::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDoc {
    pub name: String,
    pub symbols: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointPmfDoc {
    pub mass: Vec<f64>,
    pub axis: Vec<AxisDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub mass: Vec<f64>,
}

pub(crate) fn to_scalars<T: Real>(xs: &[f64]) -> Result<Vec<T>> {
    xs.iter()
        .map(|&x| {
            T::from_f64(x).filter(|v| v.is_finite()).ok_or_else(|| Error::InvalidPmf {
                row: "mass".into(),
                reason: format!("{x} is not representable"),
            })
        })
        .collect()
}

impl JointPmfDoc {
    pub fn build<T: Real>(&self) -> Result<JointPmf<T>> {
        let axes = self
            .axis
            .iter()
            .map(|a| Ok((a.name.clone(), Alphabet::new(a.symbols.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        JointPmf::new(axes, to_scalars(&self.mass)?)
    }

    pub fn of<T: Real>(pmf: &JointPmf<T>) -> Self {
        Self {
            mass: pmf.mass().iter().map(|m| m.as_f64()).collect(),
            axis: pmf
                .axes()
                .iter()
                .map(|a| AxisDoc { name: a.name.clone(), symbols: a.alphabet.symbols().to_vec() })
                .collect(),
        }
    }
}

impl ChannelDoc {
    pub fn build<T: Real>(&self) -> Result<ConditionalPmf<T>> {
        ConditionalPmf::new(
            Alphabet::new(self.input.clone())?,
            Alphabet::new(self.output.clone())?,
            to_scalars(&self.mass)?,
        )
    }

    pub fn of<T: Real>(channel: &ConditionalPmf<T>) -> Self {
        Self {
            input: channel.input().symbols().to_vec(),
            output: channel.output().symbols().to_vec(),
            mass: channel.rows().iter().map(|m| m.as_f64()).collect(),
        }
    }
}

pub(crate) fn parse_toml<D: for<'de> Deserialize<'de>>(text: &str) -> Result<D> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn write_toml<S: Serialize>(doc: &S) -> String {
    toml::to_string(doc).expect("documents serialize")
}

impl<T: Real> JointPmf<T> {
    pub fn from_toml(text: &str) -> Result<Self> {
        parse_toml::<JointPmfDoc>(text)?.build()
    }

    pub fn to_toml(&self) -> String {
        write_toml(&JointPmfDoc::of(self))
    }
}

impl<T: Real> ConditionalPmf<T> {
    pub fn from_toml(text: &str) -> Result<Self> {
        parse_toml::<ChannelDoc>(text)?.build()
    }

    pub fn to_toml(&self) -> String {
        write_toml(&ChannelDoc::of(self))
    }
}
