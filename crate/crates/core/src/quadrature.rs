//! One-dimensional adaptive quadrature.
//!
//! A nested Gauss-Kronrod pair is applied on panels that are bisected one at
//! a time, always the panel with the largest error estimate (leftmost on
//! ties). The procedure is deterministic: the same integrand, interval and
//! configuration always produce bit-identical results.
//!
//! Endpoint singularities of the form `g(x)/sqrt(|x - c|)` are removed by
//! substitution ([`integrate_sqrt_endpoint`]) rather than by refining into
//! them, and `[a, inf)` is mapped onto `[0, 1)` by [`integrate_semi_infinite`].
//! [`riemann_oracle`] is a plain midpoint sum kept deliberately separate from
//! the adaptive path so tests can use it as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Gauss-Kronrod abscissae and weights (QUADPACK qk15 / qk21). Index 0 is the
// outermost node; the last entry is the centre.
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Fixed-order nested rule applied on every panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// 7-point Gauss embedded in a 15-point Kronrod rule.
    Gk15,
    /// 10-point Gauss embedded in a 21-point Kronrod rule.
    Gk21,
}

impl Rule {
    pub fn from_order(order: usize) -> Result<Self> {
        match order {
            15 => Ok(Rule::Gk15),
            21 => Ok(Rule::Gk21),
            n => Err(Error::Validation(format!(
                "unsupported rule order {n} (expected 15 or 21)"
            ))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            Rule::Gk15 => 15,
            Rule::Gk21 => 21,
        }
    }

    fn tables(self) -> (&'static [f64], &'static [f64], &'static [f64]) {
        match self {
            Rule::Gk15 => (&XGK15, &WG7, &WGK15),
            Rule::Gk21 => (&XGK21, &WG10, &WGK21),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub rule: Rule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            rule: Rule::Gk15,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize, rule: Rule) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            rule,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Validation(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Validation(format!(
                "abs_tol must be non-negative, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Validation("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    /// Configuration for the inner integral of a nested pair: one tenth of
    /// the outer tolerances.
    pub fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            ..*self
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl IntegrationResult {
    pub(crate) fn exact_zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
            converged: true,
        }
    }

    /// Returns the value, or a [`Error::NonConvergence`] carrying the best
    /// estimate when the tolerance was not reached.
    pub fn converged_value(&self, context: impl Into<String>) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                context: context.into(),
                value: self.value,
                error_estimate: self.error_estimate,
            })
        }
    }
}

/// Which end of the interval carries the `1/sqrt` singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NaNEncountered { x })
    }
}

fn apply_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: Rule) -> Result<Panel> {
    let (xgk, wg, wgk) = rule.tables();
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [0.0_f64; 10];
    let mut fv2 = [0.0_f64; 10];

    let f_center = eval(f, center)?;
    // Only an odd-order Gauss rule (G7) has a centre node.
    let mut res_gauss = if n % 2 == 0 {
        f_center * wg[n / 2 - 1]
    } else {
        0.0
    };
    let mut res_kronrod = f_center * wgk[n - 1];
    let mut res_abs = res_kronrod.abs();

    for j in 0..(n - 1) {
        let dx = half * xgk[j];
        let y1 = eval(f, center - dx)?;
        let y2 = eval(f, center + dx)?;
        fv1[j] = y1;
        fv2[j] = y2;
        let sum = y1 + y2;
        res_kronrod += wgk[j] * sum;
        res_abs += wgk[j] * (y1.abs() + y2.abs());
        // Gauss nodes sit at the odd Kronrod positions.
        if j % 2 == 1 {
            res_gauss += wg[j / 2] * sum;
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = wgk[n - 1] * (f_center - mean).abs();
    for j in 0..(n - 1) {
        res_asc += wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let scale = half.abs();
    Ok(Panel {
        a,
        b,
        value: res_kronrod * half,
        error: rescale_error(err, res_abs * scale, res_asc * scale),
    })
}

/// Adaptive integration of `f` over `[a, b]`.
///
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// tolerated (slowly); prefer [`integrate_sqrt_endpoint`] when the form is known.
/// Running out of subdivisions is not an error: the best estimate is returned
/// with `converged = false`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    integrate_breakpoints(f, &[a, b], cfg)
}

/// Like [`integrate_finite`] over `[points[0], points[last]]`, starting from
/// one panel per consecutive pair of `points`. Interior points are never
/// evaluated, which keeps kinks and interior singularities off the nodes.
pub fn integrate_breakpoints<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Validation("need at least two integration limits".into()));
    }
    if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Validation(format!(
            "integration limits must be finite and non-decreasing, got {points:?}"
        )));
    }

    // Panels are kept ordered by position so ties resolve to the leftmost.
    let mut panels = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        if w[1] > w[0] {
            panels.push(apply_rule(&f, w[0], w[1], cfg.rule)?);
        }
    }
    if panels.is_empty() {
        return Ok(IntegrationResult::exact_zero());
    }
    let mut subdivisions = 0;

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= cfg.target(value) {
            return Ok(IntegrationResult {
                value,
                error_estimate: error,
                subdivisions,
                converged: true,
            });
        }

        let (idx, worst) = panels
            .iter()
            .enumerate()
            .fold((0, panels[0]), |(bi, bp), (i, p)| {
                if p.error > bp.error {
                    (i, *p)
                } else {
                    (bi, bp)
                }
            });
        let mid = 0.5 * (worst.a + worst.b);
        let splittable = mid > worst.a && mid < worst.b;

        if subdivisions >= cfg.max_subdivisions || !splittable {
            return Ok(IntegrationResult {
                value,
                error_estimate: error,
                subdivisions,
                converged: false,
            });
        }

        let left = apply_rule(&f, worst.a, mid, cfg.rule)?;
        let right = apply_rule(&f, mid, worst.b, cfg.rule)?;
        panels[idx] = left;
        panels.insert(idx + 1, right);
        subdivisions += 1;
    }
}

/// Integrates `f_regular(x) / sqrt(|x - c|)` over `[a, b]`, where `c` is the
/// endpoint named by `which`.
///
/// Substituting `|x - c| = u^2` gives `2 * int_0^sqrt(b-a) f_regular(c -+ u^2) du`,
/// whose integrand is as smooth as `f_regular`.
pub fn integrate_sqrt_endpoint<F>(
    f_regular: F,
    a: f64,
    b: f64,
    which: Endpoint,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Validation(format!(
            "integration limits must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    let span = (b - a).sqrt();
    let mapped = |u: f64| {
        let x = match which {
            Endpoint::Lower => (a + u * u).min(b),
            Endpoint::Upper => (b - u * u).max(a),
        };
        2.0 * f_regular(x)
    };
    integrate_finite(mapped, 0.0, span, cfg)
}

/// Integrates `f` over `[a, inf)` via `x = a + t / (1 - t)`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    if !a.is_finite() {
        return Err(Error::Validation(format!("lower limit must be finite, got {a}")));
    }
    let mapped = |t: f64| {
        let s = 1.0 - t;
        let y = f(a + t / s);
        if y == 0.0 {
            0.0
        } else {
            y / (s * s)
        }
    };
    integrate_finite(mapped, 0.0, 1.0, cfg)
}

/// Midpoint rule with `n` uniform panels.
pub fn riemann_oracle<F>(f: F, a: f64, b: f64, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    assert!(n >= 1, "riemann_oracle needs at least one panel");
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        sum += f(a + (i as f64 + 0.5) * h);
    }
    sum * (b - a) / n as f64
}
