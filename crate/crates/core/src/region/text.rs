//! TOML documents for sources and schemes.
//!
//! Source:
//!
//! ```toml
//! d_max = 1.0                              # optional, defaults to the largest entry
//! distortion = [[0.0, 1.0], [1.0, 0.0]]    # optional, defaults to Hamming
//!
//! [joint]                                  # axes must be named A, B, E
//! mass = [...]
//! [[joint.axis]]
//! name = "A"
//! symbols = ["0", "1"]
//! ...
//! ```
//!
//! Scheme:
//!
//! ```toml
//! [v_channel]          # A -> V
//! input = ["0", "1"]
//! output = ["0", "1"]
//! mass = [0.969, 0.031, 0.031, 0.969]
//!
//! [u_channel]          # V -> U
//! ...
//!
//! [reconstruction]     # one row per V symbol, one A label per B symbol
//! table = [["0", "0", "1"], ["0", "1", "1"]]
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::info::text::{parse_toml, to_scalars, write_toml, ChannelDoc, JointPmfDoc};
use crate::region::{AuxScheme, Reconstruction, SecureSource};
use crate::scalar::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Vec<Vec<f64>>>,
    pub joint: JointPmfDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionDoc {
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeDoc {
    pub v_channel: ChannelDoc,
    pub u_channel: ChannelDoc,
    pub reconstruction: ReconstructionDoc,
}

impl SourceDoc {
    pub fn build<T: Real>(&self) -> Result<SecureSource<T>> {
        let joint = self.joint.build::<T>()?;
        let d_max = self.d_max.map(|d| to_scalars::<T>(&[d]).map(|v| v[0])).transpose()?;
        match &self.distortion {
            None if d_max.is_none() => SecureSource::with_hamming(joint),
            None => {
                let k = joint.alphabet("A")?.len();
                let rows: Vec<Vec<T>> = (0..k)
                    .map(|a| (0..k).map(|b| if a == b { T::zero() } else { T::one() }).collect())
                    .collect();
                SecureSource::new(joint, &rows, d_max)
            }
            Some(rows) => {
                let rows = rows.iter().map(|r| to_scalars(r)).collect::<Result<Vec<_>>>()?;
                SecureSource::new(joint, &rows, d_max)
            }
        }
    }

    pub fn of<T: Real>(source: &SecureSource<T>) -> Self {
        Self {
            d_max: Some(source.d_max().as_f64()),
            distortion: Some(
                source
                    .distortion_rows()
                    .iter()
                    .map(|r| r.iter().map(|d| d.as_f64()).collect())
                    .collect(),
            ),
            joint: JointPmfDoc::of(source.joint()),
        }
    }
}

impl SchemeDoc {
    pub fn build<T: Real>(&self) -> Result<AuxScheme<T>> {
        let v = self.v_channel.build::<T>()?;
        let u = self.u_channel.build::<T>()?;
        let a = v.input();
        let rows = &self.reconstruction.table;
        let b_size = rows.first().map_or(0, Vec::len);
        if rows.len() != v.output().len() || rows.iter().any(|r| r.len() != b_size) || b_size == 0 {
            return Err(invalid(format!(
                "reconstruction table must have {} rows of equal nonzero length",
                v.output().len()
            )));
        }
        let mut table = Vec::with_capacity(rows.len() * b_size);
        for (vi, row) in rows.iter().enumerate() {
            for label in row {
                let idx = a.index_of(label).ok_or_else(|| {
                    invalid(format!(
                        "reconstruction row {}: {label:?} is not a source symbol",
                        v.output().symbol(vi)
                    ))
                })?;
                table.push(idx);
            }
        }
        let r = Reconstruction::new(v.output().len(), b_size, a.len(), table)?;
        AuxScheme::new(v, u, r)
    }

    pub fn of<T: Real>(scheme: &AuxScheme<T>) -> Self {
        let a = scheme.v_channel().input();
        let r = scheme.reconstruction();
        let table = (0..r.v_size())
            .map(|v| (0..r.b_size()).map(|b| a.symbol(r.get(v, b)).to_string()).collect())
            .collect();
        Self {
            v_channel: ChannelDoc::of(scheme.v_channel()),
            u_channel: ChannelDoc::of(scheme.u_channel()),
            reconstruction: ReconstructionDoc { table },
        }
    }
}

impl<T: Real> SecureSource<T> {
    pub fn from_toml(text: &str) -> Result<Self> {
        parse_toml::<SourceDoc>(text)?.build()
    }

    pub fn to_toml(&self) -> String {
        write_toml(&SourceDoc::of(self))
    }
}

impl<T: Real> AuxScheme<T> {
    pub fn from_toml(text: &str) -> Result<Self> {
        parse_toml::<SchemeDoc>(text)?.build()
    }

    pub fn to_toml(&self) -> String {
        write_toml(&SchemeDoc::of(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{build_source, fig4_scheme, BecBscParams, BinaryScheme};
    use crate::error::Error;

    #[test]
    fn source_and_scheme_round_trip() {
        let src = build_source(&BecBscParams::new(0.1, 0.469).unwrap());
        assert_eq!(SecureSource::<f64>::from_toml(&src.to_toml()).unwrap(), src);
        let scheme = fig4_scheme(&BinaryScheme::new(0.031, 0.05).unwrap());
        assert_eq!(AuxScheme::<f64>::from_toml(&scheme.to_toml()).unwrap(), scheme);
    }

    #[test]
    fn hamming_is_the_default() {
        let src = build_source(&BecBscParams::new(0.1, 0.469).unwrap());
        let mut doc = SourceDoc::of(&src);
        doc.distortion = None;
        doc.d_max = None;
        let back: SecureSource<f64> = SourceDoc::build(&doc).unwrap();
        assert_eq!(back, src);
    }

    #[test]
    fn oversized_scheme_hits_the_cap() {
        let mut doc = SchemeDoc::of(&fig4_scheme::<f64>(&BinaryScheme::new(0.1, 0.1).unwrap()));
        doc.u_channel.output = (0..5).map(|i| i.to_string()).collect();
        doc.u_channel.mass = vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(doc.build::<f64>(), Err(Error::Cardinality { what: "U", .. })));
    }
}
