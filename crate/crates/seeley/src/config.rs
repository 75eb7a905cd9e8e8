//! Run configuration. A TOML or JSON file supplies defaults; flags on the
//! command line take precedence over it.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use seeley_core::testfns::{TestFunction, TrigExpTerm};
use seeley_core::OperatorConfig;

use crate::args::{CommonArgs, OperatorArgs, RadialArgs};
use crate::error::{CliError, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Halfline,
    Quadrant,
    Ball,
    DiskPolar,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorSpec {
    /// Omitted means `-inf`.
    pub a: Option<f64>,
    pub tau: Option<f64>,
    pub b: Option<f64>,
    pub upsilon: Option<f64>,
    pub kappa: Option<f64>,
    pub kappa_prime: Option<f64>,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub a: Option<f64>,
    pub tau: f64,
    pub b: f64,
    pub upsilon: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadrantSpec {
    pub n: Option<usize>,
    pub axes: Option<Vec<AxisSpec>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallSpec {
    pub dim: Option<usize>,
    pub tau_hat: Option<f64>,
    pub upsilon_hat: Option<f64>,
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coef: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionSpec {
    Constant { value: f64 },
    /// `t^power`.
    Monomial { power: u32 },
    /// `e^t`.
    Exp,
    /// `e^t cos(x)`, two coordinates.
    ExpCos,
    /// `x^2 + y`, two coordinates.
    DiskSample,
    /// `x^2 + y^2`, two coordinates.
    RadialSquare,
    Polynomial { terms: Vec<PolyTerm> },
    TrigExp { terms: Vec<TrigExpTerm> },
}

impl FunctionSpec {
    /// The test function on `dim` coordinates.
    pub fn build(&self, dim: usize) -> std::result::Result<TestFunction, String> {
        let need = |n: usize, name: &str| {
            if dim == n {
                Ok(())
            } else {
                Err(format!("{name} needs {n} coordinates, the domain has {dim}"))
            }
        };
        Ok(match self {
            FunctionSpec::Constant { value } => TestFunction::constant(dim, *value),
            FunctionSpec::Monomial { power } => TestFunction::monomial(dim, *power),
            FunctionSpec::Exp => TestFunction::Exp { dim },
            FunctionSpec::ExpCos => {
                need(2, "exp-cos")?;
                TestFunction::ExpCos
            }
            FunctionSpec::DiskSample => {
                need(2, "disk-sample")?;
                TestFunction::disk_sample()
            }
            FunctionSpec::RadialSquare => {
                need(2, "radial-square")?;
                TestFunction::radial_square()
            }
            FunctionSpec::Polynomial { terms } => {
                if let Some(t) = terms.iter().find(|t| t.exponents.len() != dim) {
                    return Err(format!(
                        "polynomial term has {} exponents, the domain has {dim} coordinates",
                        t.exponents.len()
                    ));
                }
                TestFunction::Polynomial {
                    dim,
                    terms: terms.iter().map(|t| (t.coef, t.exponents.clone())).collect(),
                }
            }
            FunctionSpec::TrigExp { terms } => {
                if let Some(t) = terms.iter().find(|t| t.freq.len() + 1 != dim) {
                    return Err(format!(
                        "trig-exp term has {} frequencies, the domain has {} space coordinates",
                        t.freq.len(),
                        dim.saturating_sub(1)
                    ));
                }
                TestFunction::TrigExp {
                    dim,
                    terms: terms.clone(),
                }
            }
        })
    }

    /// Product of the first `n` coordinates.
    pub fn corner_product(n: usize, dim: usize) -> Self {
        let exponents = (0..dim).map(|i| u32::from(i < n)).collect();
        FunctionSpec::Polynomial {
            terms: vec![PolyTerm { coef: 1.0, exponents }],
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| format!("function: {e}"));
        }
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |what: &str| -> std::result::Result<f64, String> {
            arg.ok_or_else(|| format!("{name} needs a {what}, as in `{name}:<{what}>`"))?
                .parse::<f64>()
                .map_err(|_| format!("bad {what} in `{s}`"))
        };
        match name {
            "exp" => Ok(FunctionSpec::Exp),
            "exp-cos" => Ok(FunctionSpec::ExpCos),
            "disk-sample" => Ok(FunctionSpec::DiskSample),
            "radial-square" => Ok(FunctionSpec::RadialSquare),
            "constant" => Ok(FunctionSpec::Constant { value: num("value")? }),
            "monomial" => {
                let p = num("power")?;
                if p < 0.0 || p.fract() != 0.0 || p > u32::MAX as f64 {
                    return Err(format!("power in `{s}` must be a nonnegative integer"));
                }
                Ok(FunctionSpec::Monomial { power: p as u32 })
            }
            _ => Err(format!("unknown function `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub domain: Option<DomainKind>,
    pub operator: OperatorSpec,
    pub function: Option<FunctionSpec>,
    pub grid: Option<String>,
    pub x: Option<Vec<f64>>,
    pub ell: Option<usize>,
    pub direction: Option<Vec<f64>>,
    pub quadrant: QuadrantSpec,
    pub ball: BallSpec,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// A [`RunConfig`] together with where each value came from, so that
/// validation errors can point at the offending flag or file line.
#[derive(Debug, Clone, Default)]
pub struct Loaded {
    pub config: RunConfig,
    file: Option<(PathBuf, String)>,
    flags: BTreeSet<&'static str>,
}

impl Loaded {
    pub fn read(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let config: RunConfig = if json {
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        Ok(Self {
            config,
            file: Some((path.to_path_buf(), text)),
            flags: BTreeSet::new(),
        })
    }

    fn set<T>(&mut self, key: &'static str, slot: impl FnOnce(&mut RunConfig) -> &mut Option<T>, v: Option<T>) {
        if let Some(v) = v {
            *slot(&mut self.config) = Some(v);
            self.flags.insert(key);
        }
    }

    pub fn apply_common(&mut self, c: &CommonArgs) {
        self.set("grid", |r| &mut r.grid, c.grid.clone());
        self.set("ell", |r| &mut r.ell, c.ell);
        self.set("direction", |r| &mut r.direction, c.direction.clone());
        self.set("function", |r| &mut r.function, c.function.clone());
        self.set("output", |r| &mut r.output, c.output.clone());
        self.set("seed", |r| &mut r.seed, c.seed);
    }

    pub fn apply_operator(&mut self, o: &OperatorArgs) {
        self.set("operator.a", |r| &mut r.operator.a, o.a);
        self.set("operator.tau", |r| &mut r.operator.tau, o.tau);
        self.set("operator.b", |r| &mut r.operator.b, o.b);
        self.set("operator.upsilon", |r| &mut r.operator.upsilon, o.upsilon);
        self.set("operator.kappa", |r| &mut r.operator.kappa, o.kappa);
        self.set("operator.kappa_prime", |r| &mut r.operator.kappa_prime, o.kappa_prime);
        self.set("operator.k", |r| &mut r.operator.k, o.k);
    }

    pub fn apply_radial(&mut self, o: &RadialArgs) {
        self.set("operator.k", |r| &mut r.operator.k, o.k);
        self.set("ball.tau_hat", |r| &mut r.ball.tau_hat, o.tau_hat);
        self.set("ball.upsilon_hat", |r| &mut r.ball.upsilon_hat, o.upsilon_hat);
    }

    pub fn apply_x(&mut self, x: Option<Vec<f64>>) {
        self.set("x", |r| &mut r.x, x);
    }

    pub fn apply_quadrant_n(&mut self, n: Option<usize>) {
        self.set("quadrant.n", |r| &mut r.quadrant.n, n);
    }

    pub fn apply_dim(&mut self, dim: Option<usize>) {
        self.set("ball.dim", |r| &mut r.ball.dim, dim);
    }

    pub fn apply_r0(&mut self, r0: Option<f64>) {
        self.set("ball.r0", |r| &mut r.ball.r0, r0);
    }

    /// A validation error for `key`, located at its flag or file line.
    pub fn invalid(&self, key: &str, msg: impl Display) -> CliError {
        let last = key.rsplit('.').next().unwrap_or(key);
        if self.flags.contains(key) {
            return CliError::Config(format!("--{}: {msg}", last.replace('_', "-")));
        }
        if let Some((path, text)) = &self.file {
            if let Some(line) = find_key_line(text, last) {
                return CliError::Config(format!("{}:{line}: {key}: {msg}", path.display()));
            }
            return CliError::Config(format!("{}: {key}: {msg}", path.display()));
        }
        CliError::Config(format!("{key}: {msg}"))
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let g = self
            .config
            .grid
            .as_deref()
            .ok_or_else(|| CliError::Config("a grid is required (--grid start:end:n)".into()))?;
        g.parse().map_err(|e| self.invalid("grid", e))
    }

    pub fn ell(&self, k: usize) -> Result<usize> {
        let ell = self.config.ell.unwrap_or(0);
        if ell > k {
            return Err(self.invalid("ell", format!("jet order {ell} exceeds the smoothness k = {k}")));
        }
        Ok(ell)
    }

    /// The jet direction, by default the unit vector along coordinate `0`.
    pub fn direction(&self, dim: usize) -> Result<Vec<f64>> {
        match &self.config.direction {
            None => Ok((0..dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect()),
            Some(d) if d.len() != dim => Err(self.invalid(
                "direction",
                format!("has {} components, the domain has {dim} coordinates", d.len()),
            )),
            Some(d) if d.iter().any(|v| !v.is_finite()) => Err(self.invalid("direction", "must be finite")),
            Some(d) => Ok(d.clone()),
        }
    }

    pub fn function(&self, default: FunctionSpec, dim: usize) -> Result<TestFunction> {
        self.config
            .function
            .clone()
            .unwrap_or(default)
            .build(dim)
            .map_err(|e| self.invalid("function", e))
    }

    pub fn k(&self) -> usize {
        self.config.operator.k.unwrap_or(3)
    }

    /// Operator on `(a, b]` with defaults `b = 0`, `tau = b - 1`, `a = -inf`,
    /// `k = 3`.
    pub fn operator(&self) -> Result<OperatorConfig> {
        let o = &self.config.operator;
        let b = o.b.unwrap_or(0.0);
        let tau = o.tau.unwrap_or(b - 1.0);
        let a = o.a.unwrap_or(f64::NEG_INFINITY);
        let k = self.k();
        self.axis_operator(a, tau, b, o.upsilon, k, "operator")
            .and_then(|c| self.kappas(c))
    }

    pub fn axis_operator(
        &self,
        a: f64,
        tau: f64,
        b: f64,
        upsilon: Option<f64>,
        k: usize,
        table: &str,
    ) -> Result<OperatorConfig> {
        let key = |f: &str| format!("{table}.{f}");
        if !b.is_finite() {
            return Err(self.invalid(&key("b"), "must be finite"));
        }
        if !(tau.is_finite() && tau < b) {
            return Err(self.invalid(&key("tau"), format!("need tau < b, got tau = {tau}, b = {b}")));
        }
        if a.is_nan() || !(a < tau) {
            return Err(self.invalid(&key("a"), format!("need a < tau, got a = {a}, tau = {tau}")));
        }
        let mut c = OperatorConfig::new(a, tau, b, k).map_err(|e| self.invalid(table, e))?;
        if let Some(u) = upsilon {
            if !(tau < u && u < b) {
                return Err(self.invalid(&key("upsilon"), format!("need tau < upsilon < b, got upsilon = {u}")));
            }
            c = c.with_upsilon(u).map_err(|e| self.invalid(&key("upsilon"), e))?;
        }
        Ok(c)
    }

    fn kappas(&self, c: OperatorConfig) -> Result<OperatorConfig> {
        let o = &self.config.operator;
        if o.kappa.is_none() && o.kappa_prime.is_none() {
            return Ok(c);
        }
        if !c.a.is_finite() {
            let key = if o.kappa.is_some() { "operator.kappa" } else { "operator.kappa_prime" };
            return Err(self.invalid(key, "only meaningful for a finite a"));
        }
        let kappa = o.kappa.unwrap_or(c.kappa);
        let kappa_prime = o.kappa_prime.unwrap_or(c.kappa_prime);
        if !(c.a < kappa && kappa < kappa_prime) {
            return Err(self.invalid(
                "operator.kappa",
                format!("need a < kappa < kappa_prime, got a = {}, kappa = {kappa}, kappa_prime = {kappa_prime}", c.a),
            ));
        }
        if !(kappa_prime < c.tau) {
            return Err(self.invalid(
                "operator.kappa_prime",
                format!("need kappa_prime < tau, got kappa_prime = {kappa_prime}, tau = {}", c.tau),
            ));
        }
        c.with_kappas(kappa, kappa_prime).map_err(|e| self.invalid("operator.kappa", e))
    }
}

/// 1-based line of the first `key = ...` or `"key": ...`.
fn find_key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|line| {
        let l = line.trim_start();
        let l = l.strip_prefix('"').unwrap_or(l);
        l.strip_prefix(key).is_some_and(|rest| {
            let rest = rest.strip_prefix('"').unwrap_or(rest).trim_start();
            rest.starts_with('=') || rest.starts_with(':')
        })
    })
    .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_shorthands() {
        assert_eq!("exp".parse::<FunctionSpec>(), Ok(FunctionSpec::Exp));
        assert_eq!("constant:1.5".parse::<FunctionSpec>(), Ok(FunctionSpec::Constant { value: 1.5 }));
        assert_eq!("monomial:3".parse::<FunctionSpec>(), Ok(FunctionSpec::Monomial { power: 3 }));
        assert!("monomial:1.5".parse::<FunctionSpec>().is_err());
        assert!("constant".parse::<FunctionSpec>().is_err());
        assert!("sinc".parse::<FunctionSpec>().is_err());
        let inline: FunctionSpec = r#"{"kind": "polynomial", "terms": [{"coef": 2, "exponents": [1, 2]}]}"#
            .parse()
            .unwrap();
        assert!(inline.build(2).is_ok());
        assert!(inline.build(3).is_err());
        assert!(FunctionSpec::ExpCos.build(1).is_err());
    }

    #[test]
    fn toml_schema() {
        let text = "grid = \"0:1:3\"\n[operator]\ntau = -0.5\nk = 2\n[function]\nkind = \"monomial\"\npower = 2\n";
        let c: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(c.operator.tau, Some(-0.5));
        assert_eq!(c.function, Some(FunctionSpec::Monomial { power: 2 }));
        assert!(toml::from_str::<RunConfig>("[operator]\nalpha = 1\n").is_err());
    }

    #[test]
    fn errors_point_at_lines_and_flags() {
        let text = "[operator]\nb = 0\ntau = 0.5\n";
        let loaded = Loaded {
            config: toml::from_str(text).unwrap(),
            file: Some((PathBuf::from("run.toml"), text.into())),
            flags: BTreeSet::new(),
        };
        let msg = loaded.operator().unwrap_err().to_string();
        assert!(msg.starts_with("run.toml:3: operator.tau"), "{msg}");
        let mut flagged = loaded.clone();
        flagged.apply_operator(&OperatorArgs {
            tau: Some(0.25),
            ..Default::default()
        });
        let msg = flagged.operator().unwrap_err().to_string();
        assert!(msg.starts_with("--tau"), "{msg}");
    }

    #[test]
    fn defaults_and_kappas() {
        let c = Loaded::default().operator().unwrap();
        assert_eq!((c.a, c.tau, c.b, c.upsilon, c.k), (f64::NEG_INFINITY, -1.0, 0.0, -0.5, 3));
        let mut l = Loaded::default();
        l.apply_operator(&OperatorArgs {
            kappa: Some(-1.5),
            ..Default::default()
        });
        assert!(l.operator().is_err());
        l.apply_operator(&OperatorArgs {
            a: Some(-2.0),
            kappa_prime: Some(-1.2),
            ..Default::default()
        });
        let c = l.operator().unwrap();
        assert_eq!((c.kappa, c.kappa_prime), (-1.5, -1.2));
    }
}
