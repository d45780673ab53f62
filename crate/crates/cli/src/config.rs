use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::ToPrimitive;
use oscillabound::cayleylab::{AxisBox, BoxSet, MultiPoly};
use oscillabound::BigRational;
use oscillabound::padic::PadicWindow;
use oscillabound::polycore::{parse_rational, rational_from_f64, CurveFamily};
use oscillabound::realosc::Window;
use serde::{Deserialize, Serialize};

/// A number written either as a TOML float/integer or as a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        Ok(match self {
            Num::Int(i) => BigRational::from_integer((*i).into()),
            Num::Float(x) => rational_from_f64(*x)?,
            Num::Text(s) => parse_rational(s)?,
        })
    }

    pub fn float(&self) -> Result<f64> {
        match self {
            Num::Int(i) => Ok(*i as f64),
            Num::Float(x) => Ok(*x),
            Num::Text(s) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| anyhow!("`{s}` does not fit in a float")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    #[default]
    Real,
    Padic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub a: Num,
    pub t: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSetConfig {
    pub dim: usize,
    #[serde(default)]
    pub boxes: Vec<BoxConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueConfig {
    /// Explicit sample points; otherwise `sample_count` points on the curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default = "default_s_range")]
    pub s_range: [f64; 2],
    #[serde(default = "default_max_size")]
    pub max_size: usize,
    /// Implicit plane curve `g(x, y) = 0` instead of the family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implicit: Option<Vec<TermConfig>>,
    /// Degrees for the Bézout threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u64>>,
}

fn default_sample_count() -> usize {
    50
}

fn default_s_range() -> [f64; 2] {
    [-10.0, 10.0]
}

fn default_max_size() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coef: Num,
    pub exp: Vec<u32>,
}

/// `f(t) = constant + Σ_k cos[k] cos(2πkt) + sin[k] sin(2πkt)`, `k = 1, 2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringConfig {
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default = "default_edges")]
    pub edges: usize,
}

fn default_edges() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceConfig {
    pub nvars: usize,
    pub polys: Vec<Vec<TermConfig>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_per_decade: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_exponent: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_exponent: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells_per_round: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

/// Everything a command may read; fields irrelevant to the command are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub field: FieldKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<Num>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Num>>,
    /// Several frequencies, for profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<Vec<Num>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_set: Option<BoxSetConfig>,
    /// Path of a TOML file holding a `box_set` table, relative to the config.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_set_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique: Option<CliqueConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<ColoringConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduce: Option<ReduceConfig>,
}

#[derive(Deserialize)]
struct BoxSetFile {
    box_set: BoxSetConfig,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cfg.box_set.is_none() {
            if let Some(rel) = &cfg.box_set_path {
                let full = path.parent().unwrap_or(std::path::Path::new(".")).join(rel);
                let text = std::fs::read_to_string(&full).with_context(|| format!("reading {}", full.display()))?;
                let file: BoxSetFile = toml::from_str(&text).with_context(|| format!("parsing {}", full.display()))?;
                cfg.box_set = Some(file.box_set);
            }
        }
        Ok(cfg)
    }

    pub fn family(&self) -> Result<CurveFamily> {
        let lists = self.family.as_ref().ok_or_else(|| anyhow!("config needs `family`"))?;
        let polys = lists
            .iter()
            .map(|l| {
                let coeffs = l.iter().map(Num::rational).collect::<Result<Vec<_>>>()?;
                Ok(oscillabound::polycore::RationalPoly::new(coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveFamily::new(polys)?)
    }

    fn window_config(&self) -> Result<&WindowConfig> {
        self.window.as_ref().ok_or_else(|| anyhow!("config needs `window` with `a` and `t`"))
    }

    pub fn real_window(&self) -> Result<Window> {
        let w = self.window_config()?;
        Ok(Window::new(w.a.float()?, w.t.float()?)?)
    }

    pub fn prime(&self) -> Result<u64> {
        self.p.ok_or_else(|| anyhow!("p-adic commands need `p`"))
    }

    pub fn padic_window(&self) -> Result<PadicWindow> {
        let w = self.window_config()?;
        let int = |n: &Num| -> Result<i64> {
            let q = n.rational()?;
            if !q.is_integer() {
                bail!("p-adic window radii must be integers, got {q}");
            }
            q.to_integer().to_i64().ok_or_else(|| anyhow!("radius {q} out of range"))
        };
        Ok(PadicWindow::new(self.prime()?, int(&w.a)?, int(&w.t)?)?)
    }

    /// `lambdas` if present, else the single `lambda`.
    pub fn frequency_list(&self) -> Result<Vec<Vec<Num>>> {
        match (&self.lambdas, &self.lambda) {
            (Some(l), _) => Ok(l.clone()),
            (None, Some(l)) => Ok(vec![l.clone()]),
            (None, None) => bail!("config needs `lambda` or `lambdas`"),
        }
    }

    pub fn box_set(&self) -> Result<BoxSet> {
        let b = self.box_set.as_ref().ok_or_else(|| anyhow!("config needs `box_set` or `box_set_path`"))?;
        let boxes = b
            .boxes
            .iter()
            .map(|x| AxisBox {
                lo: x.lo.clone(),
                hi: x.hi.clone(),
            })
            .collect();
        Ok(BoxSet::new(b.dim, boxes, b.period.clone())?)
    }
}

pub fn multi_poly(nvars: usize, terms: &[TermConfig]) -> Result<MultiPoly> {
    let terms = terms
        .iter()
        .map(|t| Ok((t.exp.clone(), t.coef.rational()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiPoly::new(nvars, terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_numbers() {
        let cfg: RunConfig = toml::from_str(
            r#"
            family = [[0, 1], ["0", "0", "1/2"]]
            lambda = [3, 0.5]
            [window]
            a = 1
            t = "5/2"
            "#,
        )
        .unwrap();
        let f = cfg.family().unwrap();
        assert_eq!(f.degrees(), vec![1, 2]);
        let w = cfg.real_window().unwrap();
        assert_eq!((w.a, w.t), (1.0, 2.5));
        assert!(cfg.padic_window().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("famly = [[0, 1]]").is_err());
    }
}
