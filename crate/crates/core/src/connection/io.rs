use serde::{Deserialize, Serialize};

use super::data::{DarbouxPoint, Instance, Kind, SingularPoint, SingularityData, Theta};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, Poly, Pos, RatFunc, Rational};

/// Per-sign or ramified spectral values as rational strings.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct ThetaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointFile {
    pub pos: String,
    pub order: usize,
    pub kind: String,
    pub theta: ThetaFile,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DarbouxFile {
    pub q: String,
    pub p: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Options {
    /// Extra local orders beyond the default reduction depth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Minimum distance between apparent points and poles during flows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margins: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
}

/// On-disk instance, schema version 1.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub points: Vec<PointFile>,
    #[serde(default)]
    pub darboux: Vec<DarbouxFile>,
    #[serde(default)]
    pub options: Options,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn fmt_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl InstanceFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_instance(&self) -> Result<Instance<Rational>> {
        if self.schema_version != 1 {
            return Err(Error::Parse(format!("unsupported schema_version {}", self.schema_version)));
        }
        let mut points = Vec::new();
        for p in &self.points {
            let pos = if p.pos == "inf" { Pos::Inf } else { Pos::Finite(parse_rational(&p.pos)?) };
            let kind = Kind::from_tag(&p.kind)?;
            let theta = match kind {
                Kind::Regular | Kind::Unramified => {
                    let plus = p.theta.plus.as_ref().ok_or_else(|| Error::Parse("theta.plus missing".into()))?;
                    let minus = p.theta.minus.as_ref().ok_or_else(|| Error::Parse("theta.minus missing".into()))?;
                    Theta::Pair { plus: parse_all(plus)?, minus: parse_all(minus)? }
                }
                Kind::Ramified => {
                    let seq = p.theta.seq.as_ref().ok_or_else(|| Error::Parse("theta.seq missing".into()))?;
                    Theta::Ramified(parse_all(seq)?)
                }
            };
            points.push(SingularPoint { pos, order: p.order, kind, theta });
        }
        let darboux = self
            .darboux
            .iter()
            .map(|d| Ok(DarbouxPoint { q: parse_rational(&d.q)?, p: parse_rational(&d.p)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { sing: SingularityData { points }, darboux })
    }

    pub fn from_instance(inst: &Instance<Rational>, options: Options) -> Self {
        let points = inst
            .sing
            .points
            .iter()
            .map(|p| PointFile {
                pos: match &p.pos {
                    Pos::Finite(t) => format_rational(t),
                    Pos::Inf => "inf".into(),
                },
                order: p.order,
                kind: p.kind.tag().into(),
                theta: match &p.theta {
                    Theta::Pair { plus, minus } => {
                        ThetaFile { plus: Some(fmt_all(plus)), minus: Some(fmt_all(minus)), seq: None }
                    }
                    Theta::Ramified(v) => ThetaFile { plus: None, minus: None, seq: Some(fmt_all(v)) },
                },
            })
            .collect();
        let darboux = inst
            .darboux
            .iter()
            .map(|d| DarbouxFile { q: format_rational(&d.q), p: format_rational(&d.p) })
            .collect();
        InstanceFile { schema_version: 1, points, darboux, options }
    }
}

/// `{"num":[..],"den":[..]}` form of a rational function.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RatFuncJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

pub fn poly_json(p: &Poly<Rational>) -> Vec<String> {
    fmt_all(p.coeffs())
}

pub fn ratfunc_json(f: &RatFunc<Rational>) -> RatFuncJson {
    let r = f.reduced();
    RatFuncJson { num: poly_json(r.num()), den: poly_json(r.den()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_rational_is_a_parse_error() {
        let s = r#"{"schema_version":1,"points":[{"pos":"1/x","order":1,"kind":"reg","theta":{"plus":["1/3"],"minus":["0"]}}]}"#;
        let f = InstanceFile::from_json(s).unwrap();
        assert!(matches!(f.to_instance(), Err(Error::Parse(_))));
    }
}
