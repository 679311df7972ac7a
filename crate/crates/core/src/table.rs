//! Gridded results and their CSV / JSON serialisation.
//!
//! CSV layout:
//!
//! ```text
//! # robin-dce v0.1.0
//! # product: ratio
//! # key: value          (any number of metadata lines)
//! beta,ratio
//! 1.00000000000e-2,9.72291738912e-1
//! ```
//!
//! Data rows carry 12 significant digits. The generation timestamp lives only
//! in the metadata header, so two runs differ only in that line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureConfig, Rule};

pub const TOOL_NAME: &str = "robin-dce";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits written to CSV.
pub const CSV_DIGITS: usize = 12;

/// Which quantity a table holds; fixes the CSV column header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    /// Total rate relative to Dirichlet, against `beta`.
    Ratio,
    /// Angle-integrated spectrum `F(alpha, beta)`, against `alpha`.
    Frequency,
    /// Angular spectrum `w0^4 F~`, against `theta`.
    Angular,
    /// Total rate `w0^5 F(beta)`, against `w0`.
    Total,
    /// General-motion spectrum per unit area and solid angle, against `theta`.
    General,
}

impl Product {
    pub fn columns(self) -> &'static str {
        match self {
            Product::Ratio => "beta,ratio",
            Product::Frequency => "alpha,F",
            Product::Angular => "theta_rad,N_tilde",
            Product::Total => "omega0,N_total",
            Product::General => "theta_rad,dN_dw_dOmega_per_area",
        }
    }

    fn name(self) -> &'static str {
        match self {
            Product::Ratio => "ratio",
            Product::Frequency => "frequency",
            Product::Angular => "angular",
            Product::Total => "total",
            Product::General => "general",
        }
    }
}

impl FromStr for Product {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Product::Ratio,
            Product::Frequency,
            Product::Angular,
            Product::Total,
            Product::General,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown product {s:?}")))
    }
}

/// A grid point whose evaluation failed. Its value slot holds the best
/// available estimate, or NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedPoint {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub tool: String,
    pub version: String,
    pub product: Product,
    pub omega0: f64,
    /// Boundary condition descriptor, e.g. `dirichlet`, `gamma=2`, `neumann`.
    pub bc: String,
    pub quadrature: QuadratureConfig,
    pub generated_unix: u64,
    /// Named scalars attached to the table, e.g. `neumann_ratio`.
    #[serde(default)]
    pub extra: BTreeMap<String, f64>,
    #[serde(default)]
    pub failed: Vec<FailedPoint>,
}

impl TableMeta {
    pub fn new(product: Product, omega0: f64, bc: impl Into<String>, quadrature: QuadratureConfig) -> Self {
        let generated_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: TOOL_NAME.to_string(),
            version: VERSION.to_string(),
            product,
            omega0,
            bc: bc.into(),
            quadrature,
            generated_unix,
            extra: BTreeMap::new(),
            failed: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: TableMeta,
}

// JSON cannot carry NaN, so failed values travel as null.
#[derive(Serialize, Deserialize)]
struct JsonTable {
    meta: TableMeta,
    abscissae: Vec<f64>,
    values: Vec<Option<f64>>,
}

/// Rounds to the precision written in CSV.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", CSV_DIGITS - 1, x).parse().unwrap_or(x)
}

impl SpectrumTable {
    /// Checks lengths, strictly increasing finite abscissae and, for every
    /// non-failed point, a non-negative value.
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>, meta: TableMeta) -> Result<Self> {
        let t = Self {
            abscissae,
            values,
            meta,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.abscissae.len() != self.values.len() {
            return Err(Error::Validation(format!(
                "{} abscissae but {} values",
                self.abscissae.len(),
                self.values.len()
            )));
        }
        if self.abscissae.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("abscissae must be finite".into()));
        }
        if self.abscissae.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("abscissae must be strictly increasing".into()));
        }
        for (i, v) in self.values.iter().enumerate() {
            let failed = self.meta.failed.iter().any(|f| f.index == i);
            if !failed && !(*v >= 0.0) {
                return Err(Error::Validation(format!("value {i} is negative or NaN: {v}")));
            }
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.meta.failed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Abscissa of the largest value.
    pub fn argmax(&self) -> Option<f64> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((i, v)),
            })
            .map(|(i, _)| self.abscissae[i])
    }

    pub fn to_csv(&self) -> String {
        let m = &self.meta;
        let q = &m.quadrature;
        let mut out = String::new();
        let _ = writeln!(out, "# {} v{}", m.tool, m.version);
        let _ = writeln!(out, "# product: {}", m.product.name());
        let _ = writeln!(out, "# omega0: {}", m.omega0);
        let _ = writeln!(out, "# bc: {}", m.bc);
        let _ = writeln!(
            out,
            "# quadrature: rel_tol={:e} abs_tol={:e} max_subdivisions={} rule={}",
            q.rel_tol,
            q.abs_tol,
            q.max_subdivisions,
            q.rule.order()
        );
        for (k, v) in &m.extra {
            let _ = writeln!(out, "# {k}: {:.*e}", CSV_DIGITS - 1, v);
        }
        for f in &m.failed {
            let _ = writeln!(out, "# failed: {} {}", f.index, f.message.replace('\n', " "));
        }
        let _ = writeln!(out, "# generated_unix: {}", m.generated_unix);
        let _ = writeln!(out, "{}", m.product.columns());
        for (x, y) in self.abscissae.iter().zip(&self.values) {
            let _ = writeln!(out, "{:.*e},{:.*e}", CSV_DIGITS - 1, x, CSV_DIGITS - 1, y);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let (tool, version) = first
            .strip_prefix("# ")
            .and_then(|s| s.split_once(" v"))
            .ok_or_else(|| Error::Parse(format!("bad banner line {first:?}")))?;

        let mut fields: BTreeMap<String, String> = BTreeMap::new();
        let mut extra = BTreeMap::new();
        let mut failed = Vec::new();
        let mut abscissae = Vec::new();
        let mut values = Vec::new();
        let mut header_seen = false;

        for (lineno, line) in lines.enumerate() {
            let lineno = lineno + 2;
            if let Some(body) = line.strip_prefix("# ") {
                let (k, v) = body
                    .split_once(": ")
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: bad metadata {line:?}")))?;
                match k {
                    "product" | "omega0" | "bc" | "quadrature" | "generated_unix" => {
                        fields.insert(k.to_string(), v.to_string());
                    }
                    "failed" => {
                        let (idx, msg) = v.split_once(' ').unwrap_or((v, ""));
                        failed.push(FailedPoint {
                            index: parse_num(idx, lineno)?,
                            message: msg.to_string(),
                        });
                    }
                    _ => {
                        extra.insert(k.to_string(), parse_num(v, lineno)?);
                    }
                }
            } else if !header_seen {
                header_seen = true;
                let product: Product = fields
                    .get("product")
                    .ok_or_else(|| Error::Parse("missing product".into()))?
                    .parse()?;
                if line != product.columns() {
                    return Err(Error::Parse(format!(
                        "line {lineno}: expected header {:?}, got {line:?}",
                        product.columns()
                    )));
                }
            } else if !line.is_empty() {
                let (x, y) = line
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: expected two columns")))?;
                abscissae.push(parse_num(x, lineno)?);
                values.push(parse_num(y, lineno)?);
            }
        }

        let get = |k: &str| {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("missing metadata {k:?}")))
        };
        let meta = TableMeta {
            tool: tool.to_string(),
            version: version.to_string(),
            product: get("product")?.parse()?,
            omega0: parse_num(&get("omega0")?, 0)?,
            bc: get("bc")?,
            quadrature: parse_quadrature(&get("quadrature")?)?,
            generated_unix: parse_num(&get("generated_unix")?, 0)?,
            extra,
            failed,
        };
        Self::new(abscissae, values, meta)
    }

    pub fn to_json(&self) -> Result<String> {
        let t = JsonTable {
            meta: self.meta.clone(),
            abscissae: self.abscissae.clone(),
            values: self
                .values
                .iter()
                .map(|v| v.is_finite().then_some(*v))
                .collect(),
        };
        serde_json::to_string_pretty(&t).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: JsonTable = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            t.abscissae,
            t.values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
            t.meta,
        )
    }
}

fn parse_num<T: FromStr>(s: &str, lineno: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("line {lineno}: {s:?}: {e}")))
}

fn parse_quadrature(s: &str) -> Result<QuadratureConfig> {
    let mut cfg = QuadratureConfig::default();
    for kv in s.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad quadrature field {kv:?}")))?;
        match k {
            "rel_tol" => cfg.rel_tol = parse_num(v, 0)?,
            "abs_tol" => cfg.abs_tol = parse_num(v, 0)?,
            "max_subdivisions" => cfg.max_subdivisions = parse_num(v, 0)?,
            "rule" => cfg.rule = Rule::from_order(parse_num(v, 0)?)?,
            _ => return Err(Error::Parse(format!("unknown quadrature field {k:?}"))),
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SpectrumTable {
        let mut meta = TableMeta::new(Product::Ratio, 1.0, "sweep", QuadratureConfig::default());
        meta.extra.insert("neumann_ratio".into(), 11.0);
        SpectrumTable::new(vec![0.0, 0.5, 2.0], vec![1.0, 0.123456789012345, 0.0187], meta).unwrap()
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), format!("# robin-dce v{VERSION}"));
        assert!(csv.contains("\nbeta,ratio\n"));
        assert!(csv.contains("5.00000000000e-1,1.23456789012e-1"));
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let back = SpectrumTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back.meta, t.meta);
        for (a, b) in t.values.iter().zip(&back.values) {
            assert_eq!(round_sig(*a), *b);
        }
    }

    #[test]
    fn json_round_trip_with_failure() {
        let mut t = sample();
        t.values[1] = f64::NAN;
        t.meta.failed.push(FailedPoint {
            index: 1,
            message: "no convergence".into(),
        });
        t.validate().unwrap();
        let back = SpectrumTable::from_json(&t.to_json().unwrap()).unwrap();
        assert!(back.values[1].is_nan());
        assert_eq!(back.meta, t.meta);
        assert!(!back.is_complete());
    }

    #[test]
    fn invariants_enforced() {
        let meta = TableMeta::new(Product::Frequency, 1.0, "dirichlet", QuadratureConfig::default());
        assert!(SpectrumTable::new(vec![0.0, 0.0], vec![1.0, 1.0], meta.clone()).is_err());
        assert!(SpectrumTable::new(vec![0.0, 1.0], vec![1.0, -1.0], meta.clone()).is_err());
        assert!(SpectrumTable::new(vec![0.0], vec![1.0, 2.0], meta).is_err());
    }

    #[test]
    fn header_mismatch_rejected() {
        let csv = sample().to_csv().replace("beta,ratio", "alpha,F");
        assert!(SpectrumTable::from_csv(&csv).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_at_twelve_digits(values in proptest::collection::vec(0.0..1e6f64, 1..40)) {
            let xs: Vec<f64> = (0..values.len()).map(|i| i as f64 * 0.37 + 1e-3).collect();
            let meta = TableMeta::new(Product::Angular, 2.0, "gamma=2", QuadratureConfig::default());
            let t = SpectrumTable::new(xs, values, meta).unwrap();
            let csv = SpectrumTable::from_csv(&t.to_csv()).unwrap();
            let json = SpectrumTable::from_json(&t.to_json().unwrap()).unwrap();
            for i in 0..t.len() {
                prop_assert_eq!(csv.values[i], round_sig(t.values[i]));
                prop_assert_eq!(csv.abscissae[i], round_sig(t.abscissae[i]));
                prop_assert_eq!(json.values[i], t.values[i]);
            }
        }
    }
}
