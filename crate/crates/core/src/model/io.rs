//! JSON instance files and a read-only TSPLIB importer.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::generators::grid_metric;
use super::instance::Instance;
use crate::error::{Error, Result};
use crate::num::{format_rational, parse_decimal, int, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Float(f64),
}

impl Number {
    fn to_rational(&self) -> Result<Rational> {
        let text = match self {
            Number::Text(s) => s.clone(),
            Number::Float(f) if f.is_finite() => format!("{f}"),
            Number::Float(f) => return Err(Error::InvalidInstance(format!("non-finite number {f}"))),
        };
        parse_decimal(&text).ok_or_else(|| Error::InvalidInstance(format!("bad number {text:?}")))
    }

    fn to_f64(&self) -> Result<f64> {
        match self {
            Number::Float(f) => Ok(*f),
            Number::Text(s) => s.trim().parse().map_err(|_| Error::InvalidInstance(format!("bad number {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MetricFile {
    Explicit { matrix: Vec<Vec<Number>> },
    Euclidean { points: Vec<[Number; 2]> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub name: String,
    pub nodes: Vec<String>,
    pub root: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<String>,
    pub metric: MetricFile,
    #[serde(default)]
    pub rewards: BTreeMap<String, Number>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let pos = |id: &str| {
            self.nodes
                .iter()
                .position(|n| n == id)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown node id {id}")))
        };
        let root = pos(&self.root)?;
        let end = self.end.as_deref().map(pos).transpose()?;
        let cost = match &self.metric {
            MetricFile::Explicit { matrix } => matrix
                .iter()
                .map(|row| row.iter().map(Number::to_rational).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
            MetricFile::Euclidean { points } => {
                let pts = points
                    .iter()
                    .map(|[x, y]| Ok((x.to_f64()?, y.to_f64()?)))
                    .collect::<Result<Vec<_>>>()?;
                grid_metric(&pts)
            }
        };
        let mut reward = vec![int(0); self.nodes.len()];
        for (id, val) in &self.rewards {
            reward[pos(id)?] = val.to_rational()?;
        }
        Instance::new(self.name.clone(), self.nodes.clone(), root, end, cost, reward)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let text = |r: &Rational| Number::Text(format_rational(r));
        InstanceFile {
            name: inst.name().to_string(),
            nodes: inst.labels().to_vec(),
            root: inst.label(inst.root()).to_string(),
            end: inst.end().map(|t| inst.label(t).to_string()),
            metric: MetricFile::Explicit {
                matrix: inst.matrix().iter().map(|row| row.iter().map(text).collect()).collect(),
            },
            rewards: inst
                .nodes()
                .filter(|&v| v != inst.root() && Some(v) != inst.end())
                .map(|v| (inst.label(v).to_string(), text(inst.reward(v))))
                .collect(),
        }
    }
}

pub fn parse_instance(json: &str) -> Result<Instance> {
    serde_json::from_str::<InstanceFile>(json)?.into_instance()
}

pub fn instance_to_json(inst: &Instance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceFile::from_instance(inst))?)
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsp")) {
        return parse_tsplib(&text);
    }
    parse_instance(&text)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<()> {
    Ok(std::fs::write(path, instance_to_json(inst)?)?)
}

/// Reads `EUC_2D` coordinates or an `EXPLICIT` `FULL_MATRIX`. The first node
/// becomes the root and every other node gets reward 1. Coordinates use the
/// 1e-6 grid metric rather than TSPLIB's integer rounding, which is not a
/// metric in general.
pub fn parse_tsplib(text: &str) -> Result<Instance> {
    let bad = |m: &str| Error::InvalidInstance(format!("tsplib: {m}"));
    let mut name = "tsplib".to_string();
    let mut dim = 0usize;
    let mut kind = String::new();
    let mut format = String::new();
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut weights: Vec<Rational> = Vec::new();
    while let Some(line) = lines.next() {
        if let Some((key, val)) = line.split_once(':') {
            let val = val.trim().to_string();
            match key.trim() {
                "NAME" => name = val,
                "DIMENSION" => dim = val.parse().map_err(|_| bad("bad DIMENSION"))?,
                "EDGE_WEIGHT_TYPE" => kind = val,
                "EDGE_WEIGHT_FORMAT" => format = val,
                _ => {}
            }
            continue;
        }
        match line {
            "NODE_COORD_SECTION" => {
                for _ in 0..dim {
                    let l = lines.next().ok_or_else(|| bad("truncated coordinates"))?;
                    let f: Vec<f64> = l.split_whitespace().skip(1).filter_map(|x| x.parse().ok()).collect();
                    if f.len() < 2 {
                        return Err(bad("bad coordinate line"));
                    }
                    coords.push((f[0], f[1]));
                }
            }
            "EDGE_WEIGHT_SECTION" => {
                while weights.len() < dim * dim {
                    let l = lines.next().ok_or_else(|| bad("truncated weights"))?;
                    for w in l.split_whitespace() {
                        weights.push(parse_decimal(w).ok_or_else(|| bad("bad weight"))?);
                    }
                }
            }
            "EOF" => break,
            _ => {}
        }
    }
    if dim == 0 {
        return Err(bad("missing DIMENSION"));
    }
    let cost = match kind.as_str() {
        "EUC_2D" if coords.len() == dim => grid_metric(&coords),
        "EXPLICIT" if format == "FULL_MATRIX" && weights.len() == dim * dim => {
            weights.chunks(dim).map(|c| c.to_vec()).collect()
        }
        _ => return Err(bad("only EUC_2D and EXPLICIT FULL_MATRIX are supported")),
    };
    let labels = (1..=dim).map(|i| i.to_string()).collect();
    let mut reward = vec![int(1); dim];
    reward[0] = int(0);
    Instance::new(name, labels, 0, None, cost, reward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{euclidean, gk, star3};

    #[test]
    fn json_round_trip_is_exact() {
        for inst in [star3(), gk(3).unwrap(), euclidean(6, 3, 50.0).unwrap()] {
            let back = parse_instance(&instance_to_json(&inst).unwrap()).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn euclidean_kind_and_float_rewards() {
        let json = r#"{"name":"e","nodes":["r","a"],"root":"r",
            "metric":{"kind":"euclidean","points":[[0,0],[3,4]]},"rewards":{"a":2.5}}"#;
        let inst = parse_instance(json).unwrap();
        assert_eq!(inst.cost(0, 1), &int(5));
        assert_eq!(inst.reward(1), &parse_decimal("2.5").unwrap());
    }

    #[test]
    fn tsplib_coordinates() {
        let text = "NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 4\nEOF\n";
        let inst = parse_tsplib(text).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.cost(0, 1), &int(5));
        assert_eq!(inst.cost(1, 2), &int(3));
    }
}
