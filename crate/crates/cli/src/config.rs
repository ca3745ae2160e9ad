//! Run configuration: a TOML file merged with command-line flags, flags winning.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use toeplitz_moment::spectra::Case;
use toeplitz_moment::{Method, MultiIndex, QuadratureSpec, SymbolSpec};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Quadrature overrides; unset fields keep the file value or the default.
#[derive(Debug, Clone, Default, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct QuadratureArgs {
    /// Gauss nodes per axis and panel.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Equal-width panels per axis.
    #[arg(long)]
    pub subdivisions: Option<usize>,
    /// Relative error target for node doubling.
    #[arg(long)]
    pub tol: Option<f64>,
    /// tensor-gauss, duffy-simplex or monte-carlo.
    #[arg(long)]
    pub method: Option<String>,
    /// Monte Carlo sample count.
    #[arg(long = "mc-samples", id = "mc_samples")]
    pub samples: Option<usize>,
    /// Seed for Monte Carlo and for random verification points.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl QuadratureArgs {
    fn or(self, base: QuadratureArgs) -> QuadratureArgs {
        QuadratureArgs {
            nodes: self.nodes.or(base.nodes),
            subdivisions: self.subdivisions.or(base.subdivisions),
            tol: self.tol.or(base.tol),
            method: self.method.or(base.method),
            samples: self.samples.or(base.samples),
            seed: self.seed.or(base.seed),
        }
    }

    pub fn to_spec(&self) -> Result<QuadratureSpec, Failure> {
        let mut spec = QuadratureSpec::default();
        if let Some(m) = self.nodes {
            spec.nodes_per_axis = m;
        }
        if let Some(s) = self.subdivisions {
            spec.subdivisions = s;
        }
        if let Some(t) = self.tol {
            spec.target_rel_tol = t;
        }
        if let Some(m) = &self.method {
            spec.method = Method::from_str(m).map_err(Failure::config)?;
        }
        if let Some(s) = self.samples {
            spec.samples = s;
        }
        if let Some(s) = self.seed {
            spec.rng_seed = s;
        }
        spec.validate().map_err(Failure::config)?;
        Ok(spec)
    }
}

/// The `gamma` options as they may appear in a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub case: Option<String>,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub symbol: Option<String>,
    pub pmax: Option<u32>,
    pub xi: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub symbols: BTreeMap<String, String>,
    #[serde(default)]
    pub quadrature: QuadratureArgs,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
    }
}

/// A fully resolved `gamma` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: Case,
    pub n: usize,
    pub lambda: f64,
    pub symbol: SymbolSpec,
    pub ps: Vec<MultiIndex>,
    pub xis: Vec<f64>,
    pub spec: QuadratureSpec,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Parses `min:max:count` into `count` equally spaced points.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::config(format!("xi grid `{s}` is not min:max:count"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || (count == 1 && lo != hi) || hi < lo {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k + 1 == count { hi } else { lo + step * k as f64 })
        .collect())
}

/// Looks the symbol up by name, otherwise parses it as an expression.
pub fn resolve_symbol(text: &str, names: &BTreeMap<String, String>) -> Result<SymbolSpec, Failure> {
    let source = names.get(text).map(String::as_str).unwrap_or(text);
    SymbolSpec::parse(source).map_err(Failure::config)
}

pub struct GammaFlags {
    pub case: Option<String>,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub symbol: Option<String>,
    pub pmax: Option<u32>,
    pub xi: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub quadrature: QuadratureArgs,
}

impl RunConfig {
    pub fn resolve(flags: GammaFlags, file: FileConfig) -> Result<Self, Failure> {
        let case_text = flags
            .case
            .or(file.case)
            .ok_or_else(|| Failure::config("no case given (use --case or `case` in the config)"))?;
        let case = Case::from_str(&case_text).map_err(Failure::config)?;
        let n = match (flags.n.or(file.n), case) {
            (Some(n), Case::Hyp) if n != 1 => return Err(Failure::config(format!("the hyp case has n = 1, got {n}"))),
            (Some(n), _) => n,
            (None, Case::Hyp) => 1,
            (None, _) => return Err(Failure::config("no dimension given (use --n)")),
        };
        if n == 0 || (case == Case::QhH0 && n < 2) {
            return Err(Failure::config(format!("n = {n} is too small for case {case}")));
        }
        let lambda = flags.lambda.or(file.lambda).unwrap_or(0.0);
        if lambda.is_nan() || lambda <= -1.0 {
            return Err(Failure::config(format!("lambda = {lambda} must exceed -1")));
        }
        let text = flags
            .symbol
            .or(file.symbol)
            .ok_or_else(|| Failure::config("no symbol given (use --symbol)"))?;
        let symbol = resolve_symbol(&text, &file.symbols)?;
        let k = case.index_dim(n);
        symbol.check_arity(k, case.uses_xi()).map_err(Failure::config)?;
        let pmax = flags.pmax.or(file.pmax).unwrap_or(0);
        let xis = match (case.uses_xi(), flags.xi.or(file.xi)) {
            (true, Some(g)) => parse_grid(&g)?,
            (true, None) => return Err(Failure::config(format!("case {case} needs --xi min:max:count"))),
            (false, _) => Vec::new(),
        };
        Ok(Self {
            case,
            n,
            lambda,
            symbol,
            ps: MultiIndex::all_up_to(k, pmax),
            xis,
            spec: flags.quadrature.or(file.quadrature).to_spec()?,
            output: flags.output.or(file.output),
            format: flags.format.or(file.format).unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> GammaFlags {
        GammaFlags {
            case: None,
            n: None,
            lambda: None,
            symbol: None,
            pmax: None,
            xi: None,
            output: None,
            format: None,
            quadrature: QuadratureArgs::default(),
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        let g = parse_grid("-20:20:81").unwrap();
        assert_eq!((g.len(), g[0], g[80]), (81, -20.0, 20.0));
        for bad in ["1:2", "a:1:2", "1:0:3", "0:1:0", "0:1:1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            r#"
            case = "qe"
            n = 2
            lambda = 0.5
            symbol = "ratio"
            pmax = 3
            [symbols]
            ratio = "h1/(1+h1+h2)"
            [quadrature]
            nodes = 16
            "#,
        )
        .unwrap();
        let mut f = flags();
        f.lambda = Some(1.0);
        f.quadrature.nodes = Some(32);
        let run = RunConfig::resolve(f, file).unwrap();
        assert_eq!((run.n, run.lambda, run.spec.nodes_per_axis), (2, 1.0, 32));
        assert_eq!(run.symbol.source(), "h1/(1+h1+h2)");
        assert_eq!(run.ps.len(), 10);
    }

    #[test]
    fn rejects_inconsistent_runs() {
        let mut f = flags();
        f.case = Some("qe".into());
        f.n = Some(1);
        f.symbol = Some("h1 + u".into());
        assert_eq!(RunConfig::resolve(f, FileConfig::default()).unwrap_err().code, 2);

        let mut f = flags();
        f.case = Some("hyp".into());
        f.symbol = Some("ind(u>0)".into());
        assert!(RunConfig::resolve(f, FileConfig::default()).is_err());

        let mut f = flags();
        f.case = Some("qe".into());
        f.n = Some(1);
        f.lambda = Some(-1.0);
        f.symbol = Some("1".into());
        assert!(RunConfig::resolve(f, FileConfig::default()).is_err());

        assert!(toml::from_str::<FileConfig>("colour = 3").is_err());
    }
}
