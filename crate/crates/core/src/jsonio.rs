//! JSON representations: rationals as "p" or "p/q" strings, point
//! configurations, height files.

use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactgeom::{QMatrix, QVector, Rational};
use crate::hypersimplex::{HypersimplexSpec, PointConfiguration};

pub fn rational_to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    crate::metrics::parse::parse_rational_token(s)
}

/// Serde adapter: a rational as a string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        rational_from_str(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter: a rational vector as a vector of strings.
pub mod qvector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &QVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(rational_to_string).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<QVector, D::Error> {
        let strings: Vec<String> = Vec::deserialize(d)?;
        strings
            .iter()
            .map(|s| rational_from_str(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Serde adapter: a list of rational vectors.
pub mod qvector_list {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[QVector],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<QVector>, D::Error> {
        let strings: Vec<Vec<String>> = Vec::deserialize(d)?;
        strings
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| rational_from_str(s).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// A point configuration on the wire: optional hypersimplex parameters and
/// the integer point rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub points: Vec<Vec<i64>>,
}

impl ConfigJson {
    pub fn from_config(config: &PointConfiguration) -> Result<Self> {
        let points = config
            .points()
            .rows_iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        if !x.denom().is_one() {
                            return Err(Error::InvalidParameter(
                                "only lattice configurations serialize to JSON".into(),
                            ));
                        }
                        i64::try_from(x.numer().clone()).map_err(|_| {
                            Error::InvalidParameter("coordinate exceeds i64".into())
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let spec = config.hypersimplex_spec();
        Ok(ConfigJson {
            k: spec.map(|s| s.k),
            n: spec.map(|s| s.n),
            points,
        })
    }

    pub fn into_config(self) -> Result<PointConfiguration> {
        if let (Some(k), Some(n)) = (self.k, self.n) {
            let spec = HypersimplexSpec::new(k, n)?;
            let config = crate::hypersimplex::vertices(spec);
            let expect = ConfigJson::from_config(&config)?;
            if !self.points.is_empty() && self.points != expect.points {
                return Err(Error::InvalidParameter(
                    "points do not match the hypersimplex parameters".into(),
                ));
            }
            return Ok(config);
        }
        let rows: Vec<QVector> = self
            .points
            .iter()
            .map(|r| r.iter().map(|&x| crate::exactgeom::rat_int(x)).collect())
            .collect();
        PointConfiguration::from_points(QMatrix::from_rows(rows)?)
    }
}

/// Heights file: a JSON array whose entries are numbers or strings
/// ("p/q", decimals).
pub fn parse_heights_json(text: &str) -> Result<QVector> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    raw.iter()
        .map(|v| match v {
            serde_json::Value::Number(x) => {
                if let Some(i) = x.as_i64() {
                    Ok(crate::exactgeom::rat_int(i))
                } else {
                    Err(Error::Parse(format!(
                        "height {x} is not an integer; use a string for exact rationals"
                    )))
                }
            }
            serde_json::Value::String(s) => rational_from_str(s),
            other => Err(Error::Parse(format!("bad height entry {other}"))),
        })
        .collect()
}

/// Round-trip helper for catalog-like values.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
