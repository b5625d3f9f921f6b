//! Flat `key = value` experiment configuration with dotted keys.
//!
//! Lines are `key = value`; `#` starts a comment. List values are comma
//! separated. Command-line flags override file values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use focklab::fock::{FamilySpec, SpaceParams, SymbolSpec, TaylorSymbol};

use crate::error::CliError;

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    /// Directory of the config file; relative paths inside it resolve here.
    base: Option<PathBuf>,
}

/// Keys every command accepts.
pub const COMMON_KEYS: &[&str] = &["output.path", "output.format", "seed", "jobs"];

/// Keys describing the space.
pub const SPACE_KEYS: &[&str] = &["space.d", "space.m", "space.alpha"];

/// Keys describing the symbol.
pub const SYMBOL_KEYS: &[&str] = &[
    "symbol.family",
    "symbol.c",
    "symbol.nu",
    "symbol.n",
    "symbol.decay",
    "symbol.max_degree",
    "symbol.file",
];

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    i + 1
                )));
            };
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_') {
                return Err(CliError::Config(format!("line {}: invalid key `{key}`", i + 1)));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("key `{key}` is set twice")));
            }
        }
        Ok(Self { values, base: None })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    /// Rejects keys outside `allowed` and [`COMMON_KEYS`].
    pub fn check_known(&self, allowed: &[&[&str]]) -> Result<(), CliError> {
        for key in self.values.keys() {
            let known = COMMON_KEYS.contains(&key.as_str()) || allowed.iter().any(|set| set.contains(&key.as_str()));
            if !known {
                return Err(CliError::Config(format!("unknown key `{key}`")));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T, CliError> {
        s.trim()
            .parse()
            .map_err(|_| CliError::Config(format!("key `{key}`: cannot parse `{}`", s.trim())))
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => Self::parse_one(key, s),
        }
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key).map(|s| Self::parse_one(key, s)).transpose()
    }

    pub fn get_list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => {
                let items: Vec<T> = s
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| Self::parse_one(key, p))
                    .collect::<Result<_, _>>()?;
                if items.is_empty() {
                    return Err(CliError::Config(format!("key `{key}`: empty list")));
                }
                Ok(items)
            }
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(|s| match &self.base {
            Some(base) if Path::new(s).is_relative() => base.join(s),
            _ => PathBuf::from(s),
        })
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.get("seed", 0u64)
    }

    /// `(d, m, α)` for every `m` in `space.m` (a list is a sweep).
    pub fn spaces(&self, default_d: usize, default_m: &[f64]) -> Result<Vec<SpaceParams>, CliError> {
        let d = self.get("space.d", default_d)?;
        let alpha = self.get("space.alpha", 1.0)?;
        self.get_list("space.m", default_m)?
            .into_iter()
            .map(|m| SpaceParams::new(d, m, alpha).map_err(|e| CliError::Config(format!("space: {e}"))))
            .collect()
    }

    /// Symbols described by the `symbol.*` keys. A list in `symbol.c` yields
    /// one member per value, labelled by `c`.
    pub fn symbols(
        &self,
        params: &SpaceParams,
        default: &FamilySpec,
        default_degree: u32,
    ) -> Result<Vec<Symbol>, CliError> {
        let sym_err = |e: focklab::LabError| CliError::Config(format!("symbol: {e}"));
        if let Some(path) = self.path("symbol.file") {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("key `symbol.file`: cannot read {}: {e}", path.display())))?;
            let spec = SymbolSpec::from_json(&text).map_err(|e| CliError::Config(format!("key `symbol.file`: {e}")))?;
            let n = self.get("symbol.n", 1usize)?;
            let b = match &spec {
                SymbolSpec::Family(f) => f.build(params.d, n, default_degree).map_err(sym_err)?,
                SymbolSpec::Explicit(file) => {
                    if file.d != params.d || file.m != params.m || file.alpha != params.alpha {
                        return Err(CliError::Config(format!(
                            "key `symbol.file`: symbol is for (d, m, α) = ({}, {}, {}) but the space is ({}, {}, {})",
                            file.d, file.m, file.alpha, params.d, params.m, params.alpha
                        )));
                    }
                    file.to_symbol().map_err(sym_err)?
                }
            };
            return Ok(vec![Symbol { label: None, b }]);
        }
        let n = self.get("symbol.n", 1usize)?;
        if n == 0 {
            return Err(CliError::Config("key `symbol.n`: must be at least 1".into()));
        }
        let family = self.raw("symbol.family").map(str::to_string);
        let family = family.as_deref().unwrap_or(match default {
            FamilySpec::ExpQuadratic { .. } => "exp_quadratic",
            FamilySpec::Monomial { .. } => "monomial",
            FamilySpec::RandomDecay { .. } => "random_decay",
        });
        let max_degree = self.get_opt::<u32>("symbol.max_degree")?;
        match family {
            "exp_quadratic" => {
                let default_c = match default {
                    FamilySpec::ExpQuadratic { c, .. } => *c,
                    _ => 0.1,
                };
                self.get_list("symbol.c", &[default_c])?
                    .into_iter()
                    .map(|c| {
                        let spec = FamilySpec::ExpQuadratic { c, max_degree };
                        Ok(Symbol {
                            label: Some(c),
                            b: spec.build(params.d, n, default_degree).map_err(sym_err)?,
                        })
                    })
                    .collect()
            }
            "monomial" => {
                let default_nu = match default {
                    FamilySpec::Monomial { nu } => nu.clone(),
                    _ => {
                        let mut nu = vec![0; params.d];
                        nu[0] = 1;
                        nu
                    }
                };
                let nu = self.get_list("symbol.nu", &default_nu)?;
                let spec = FamilySpec::Monomial { nu };
                Ok(vec![Symbol {
                    label: None,
                    b: spec.build(params.d, n, default_degree).map_err(sym_err)?,
                }])
            }
            "random_decay" => {
                let spec = FamilySpec::RandomDecay {
                    seed: self.seed()?,
                    decay: self.get("symbol.decay", 0.5)?,
                    max_degree: max_degree.unwrap_or(default_degree),
                };
                Ok(vec![Symbol {
                    label: None,
                    b: spec.build(params.d, n, default_degree).map_err(sym_err)?,
                }])
            }
            other => Err(CliError::Config(format!(
                "key `symbol.family`: unknown family `{other}` (expected exp_quadratic, monomial or random_decay)"
            ))),
        }
    }
}

/// A symbol with its sweep label (`c` for `exp_quadratic`).
#[derive(Debug, Clone)]
pub struct Symbol {
    pub label: Option<f64>,
    pub b: TaylorSymbol,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_comments() {
        let cfg = Config::parse("# header\nspace.m = 1, 1.5 ,2\nseed=7 # trailing\n\n").unwrap();
        assert_eq!(cfg.get_list::<f64>("space.m", &[]).unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(cfg.seed().unwrap(), 7);
        assert_eq!(cfg.get("space.d", 3usize).unwrap(), 3);
    }

    #[test]
    fn diagnostics_name_the_key() {
        let cfg = Config::parse("space.d = two").unwrap();
        let err = cfg.get("space.d", 1usize).unwrap_err().to_string();
        assert!(err.contains("space.d"), "{err}");
        let err = Config::parse("space.d 2").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let cfg = Config::parse("space.q = 1").unwrap();
        let err = cfg.check_known(&[SPACE_KEYS]).unwrap_err().to_string();
        assert!(err.contains("space.q"), "{err}");
        assert!(Config::parse("seed = 1\nseed = 2").is_err());
    }

    #[test]
    fn exp_quadratic_sweep() {
        let cfg = Config::parse("symbol.c = 0.05, 0.1").unwrap();
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let s = cfg
            .symbols(
                &p,
                &FamilySpec::ExpQuadratic {
                    c: 0.2,
                    max_degree: None,
                },
                10,
            )
            .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].label, Some(0.1));
        let bad = Config::parse("symbol.family = gaussian").unwrap();
        let err = bad
            .symbols(&p, &FamilySpec::Monomial { nu: vec![1] }, 4)
            .unwrap_err()
            .to_string();
        assert!(err.contains("symbol.family"));
    }
}
