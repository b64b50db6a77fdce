//! Scenario descriptions: a flat `key = value` format for solve runs.
//!
//! A scenario pins a lattice geometry, a seed pattern, one or more
//! nonlinearity values, and the solver/classifier knobs. Files are
//! line-based: blank lines and lines starting with `#` are skipped, every
//! other line must read `key = value`. Unknown and duplicate keys are
//! rejected with the offending line, so typos fail loudly instead of
//! silently running defaults. Eight figure scenarios ship embedded in the
//! binary; see [`builtin`].

use crate::classify::{ClassifyConfig, ClusterTol, PortraitClass};
use crate::error::{ConfigError, Error, RunError};
use crate::lattice::{Bc, SeedPattern};
use crate::newton::SolveConfig;
use std::collections::HashSet;
use std::path::{Path, PathBuf};

/// How the seed pattern is described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    /// Occupied site indices (`seed_sites`), optionally signed
    /// (`seed_signs`).
    Sites {
        sites: Vec<usize>,
        signs: Option<Vec<i8>>,
    },
    /// Explicit `+ 0 -` layout (`seed_layout`).
    Layout(Vec<i8>),
    /// Single occupied sites separated by a repeating list of empty-run
    /// lengths (`seed_gaps`).
    Gaps(Vec<usize>),
}

/// Where the solve energy comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum E0Spec {
    /// The pattern's limit energy `(2m + 4l - c) / n`.
    Formula,
    Explicit(f64),
}

/// A class expectation declared in the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassExpectation {
    Exact(PortraitClass),
    /// `periodic` with any revisit count.
    AnyPeriodic,
}

impl ClassExpectation {
    pub fn matches(&self, class: PortraitClass) -> bool {
        match self {
            ClassExpectation::Exact(c) => *c == class,
            ClassExpectation::AnyPeriodic => matches!(class, PortraitClass::Periodic(_)),
        }
    }
}

/// A fully described solve scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub n_sites: usize,
    pub bc: Bc,
    pub seed: Option<SeedSpec>,
    /// Nonlinearity values to run (one sequential/parallel solve each).
    pub c_values: Vec<f64>,
    pub e0: E0Spec,
    pub solve: SolveConfig,
    pub classify: ClassifyConfig,
    /// Replay the converged state through the planar map and record the
    /// reproduction error.
    pub map_check: bool,
    pub out_dir: Option<PathBuf>,
    pub note: Option<String>,
    pub expect_clusters: Option<usize>,
    pub expect_class: Option<ClassExpectation>,
}

impl Scenario {
    fn empty() -> Self {
        Self {
            name: "scenario".into(),
            n_sites: 0,
            bc: Bc::Periodic,
            seed: None,
            c_values: Vec::new(),
            e0: E0Spec::Formula,
            solve: SolveConfig::default(),
            classify: ClassifyConfig::default(),
            map_check: true,
            out_dir: None,
            note: None,
            expect_clusters: None,
            expect_class: None,
        }
    }

    /// Parse a scenario text. Every key at most once; `n_sites`, a seed
    /// key, and `c` are required.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut scenario = Self::empty();
        let mut seen: HashSet<String> = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: trimmed.to_string(),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !seen.insert(key.clone()) {
                return Err(ConfigError::DuplicateKey { line, key });
            }
            scenario
                .set(&key, &value)
                .map_err(|e| match e {
                    ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line, key },
                    other => other,
                })?;
        }
        if seen.contains("cluster_tol") && seen.contains("cluster_tol_abs") {
            return Err(ConfigError::Invalid {
                key: "cluster_tol_abs".into(),
                message: "conflicts with cluster_tol; set one of the two".into(),
            });
        }
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.n_sites == 0 {
            return Err(ConfigError::Missing("n_sites"));
        }
        if self.seed.is_none() {
            return Err(ConfigError::SeedSpec);
        }
        if self.c_values.is_empty() {
            return Err(ConfigError::Missing("c"));
        }
        Ok(())
    }

    /// Set one key. Used by the parser and by command-line overrides
    /// (`--set key=value`), which deliberately skip duplicate screening.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let invalid = |message: String| ConfigError::Invalid {
            key: key.to_string(),
            message,
        };
        match key {
            "name" => self.name = value.to_string(),
            "n_sites" => {
                self.n_sites = parse_num::<usize>(key, value)?;
                if self.n_sites == 0 {
                    return Err(invalid("needs at least one site".into()));
                }
            }
            "bc" => {
                self.bc = match value {
                    "pbc" | "periodic" => Bc::Periodic,
                    "obc" | "open" => Bc::Open,
                    other => return Err(invalid(format!("unknown boundary `{other}`"))),
                }
            }
            "seed_sites" => {
                let sites = parse_list::<usize>(key, value)?;
                let signs = match self.seed.take() {
                    Some(SeedSpec::Sites { signs, .. }) => signs,
                    _ => None,
                };
                self.seed = Some(SeedSpec::Sites { sites, signs });
            }
            "seed_signs" => {
                let signs = parse_signs(key, value)?;
                match self.seed.take() {
                    Some(SeedSpec::Sites { sites, .. }) => {
                        self.seed = Some(SeedSpec::Sites {
                            sites,
                            signs: Some(signs),
                        });
                    }
                    None => {
                        self.seed = Some(SeedSpec::Sites {
                            sites: Vec::new(),
                            signs: Some(signs),
                        });
                    }
                    Some(other) => {
                        self.seed = Some(other);
                        return Err(invalid(
                            "seed_signs goes with seed_sites, not layout/gaps".into(),
                        ));
                    }
                }
            }
            "seed_layout" => {
                let mut layout = Vec::new();
                for ch in value.chars() {
                    match ch {
                        '+' => layout.push(1),
                        '-' => layout.push(-1),
                        '0' => layout.push(0),
                        ' ' | ',' | '\t' => {}
                        other => {
                            return Err(invalid(format!(
                                "layout uses only `+ - 0`, got `{other}`"
                            )))
                        }
                    }
                }
                self.seed = Some(SeedSpec::Layout(layout));
            }
            "seed_gaps" => {
                self.seed = Some(SeedSpec::Gaps(parse_list::<usize>(key, value)?));
            }
            "c" => {
                let values = parse_list::<f64>(key, value)?;
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("c values must be finite".into()));
                }
                self.c_values = values;
            }
            "e0" => {
                self.e0 = if value == "formula" {
                    E0Spec::Formula
                } else {
                    E0Spec::Explicit(parse_num::<f64>(key, value)?)
                };
            }
            "tol" => {
                self.solve.tol = parse_positive(key, value)?;
            }
            "max_iter" => {
                self.solve.max_iter = parse_num::<usize>(key, value)?;
                if self.solve.max_iter == 0 {
                    return Err(invalid("needs at least one iteration".into()));
                }
            }
            "e_jump" => {
                self.solve.e_jump = parse_positive(key, value)?;
            }
            "bound" => {
                self.solve.bound = parse_positive(key, value)?;
            }
            "damping" => {
                self.solve.damping = parse_bool(key, value)?;
            }
            "cluster_tol" => {
                self.classify.cluster_tol = ClusterTol::Relative(parse_positive(key, value)?);
            }
            "cluster_tol_abs" => {
                self.classify.cluster_tol = ClusterTol::Absolute(parse_positive(key, value)?);
            }
            "loop_gap_ratio" => {
                self.classify.loop_gap_ratio = parse_positive(key, value)?;
            }
            "min_points" => {
                self.classify.min_points = parse_num::<usize>(key, value)?;
            }
            "map_check" => {
                self.map_check = parse_bool(key, value)?;
            }
            "out_dir" => {
                self.out_dir = Some(PathBuf::from(value));
            }
            "note" => {
                self.note = Some(value.to_string());
            }
            "expect_clusters" => {
                self.expect_clusters = Some(parse_num::<usize>(key, value)?);
            }
            "expect_class" => {
                self.expect_class = Some(parse_class(key, value)?);
            }
            other => {
                return Err(ConfigError::UnknownKey {
                    line: 0,
                    key: other.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Build the seed pattern this scenario describes.
    pub fn pattern(&self) -> Result<SeedPattern, Error> {
        match self.seed.as_ref().expect("validated scenario has a seed") {
            SeedSpec::Sites { sites, signs } => {
                SeedPattern::from_sites(self.n_sites, sites, signs.as_deref(), self.bc)
            }
            SeedSpec::Layout(layout) => {
                if layout.len() != self.n_sites {
                    return Err(Error::LengthMismatch(layout.len(), self.n_sites));
                }
                SeedPattern::from_layout(layout.clone(), self.bc)
            }
            SeedSpec::Gaps(gaps) => SeedPattern::from_gaps(self.n_sites, gaps, self.bc),
        }
    }

    /// The energy a run at nonlinearity `c` uses.
    pub fn e0_for(&self, pattern: &SeedPattern, c: f64) -> f64 {
        match self.e0 {
            E0Spec::Formula => pattern.limit_energy(c),
            E0Spec::Explicit(v) => v,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Invalid {
        key: key.to_string(),
        message: format!("cannot parse `{value}`"),
    })
}

fn parse_positive(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = parse_num::<f64>(key, value)?;
    if !v.is_finite() || v <= 0.0 {
        return Err(ConfigError::Invalid {
            key: key.to_string(),
            message: format!("must be a positive finite number, got `{value}`"),
        });
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ConfigError::Invalid {
            key: key.to_string(),
            message: format!("expected true or false, got `{other}`"),
        }),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    let items: Result<Vec<T>, _> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    let items = items.map_err(|_| ConfigError::Invalid {
        key: key.to_string(),
        message: format!("cannot parse list `{value}`"),
    })?;
    if items.is_empty() {
        return Err(ConfigError::Invalid {
            key: key.to_string(),
            message: "list is empty".into(),
        });
    }
    Ok(items)
}

fn parse_signs(key: &str, value: &str) -> Result<Vec<i8>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|tok| match tok {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(ConfigError::Invalid {
                key: key.to_string(),
                message: format!("signs are `+` or `-`, got `{other}`"),
            }),
        })
        .collect()
}

fn parse_class(key: &str, value: &str) -> Result<ClassExpectation, ConfigError> {
    let invalid = || ConfigError::Invalid {
        key: key.to_string(),
        message: format!("unknown class `{value}`"),
    };
    Ok(match value {
        "periodic" => ClassExpectation::AnyPeriodic,
        "quasiperiodic" => ClassExpectation::Exact(PortraitClass::Quasiperiodic),
        "chaotic" => ClassExpectation::Exact(PortraitClass::Chaotic),
        "divergent" => ClassExpectation::Exact(PortraitClass::Divergent),
        "bloch-like" => ClassExpectation::Exact(PortraitClass::BlochLike),
        "unclassifiable" => ClassExpectation::Exact(PortraitClass::Unclassifiable),
        other => {
            let inner = other
                .strip_prefix("periodic(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(invalid)?;
            let k: usize = inner.parse().map_err(|_| invalid())?;
            ClassExpectation::Exact(PortraitClass::Periodic(k))
        }
    })
}

/// Names of the embedded figure scenarios, in order.
pub const BUILTIN_NAMES: [&str; 8] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
];

/// Fetch an embedded figure scenario by name.
pub fn builtin(name: &str) -> Result<Scenario, ConfigError> {
    let text = match name {
        "fig1" => include_str!("../scenarios/fig1.scn"),
        "fig2" => include_str!("../scenarios/fig2.scn"),
        "fig3" => include_str!("../scenarios/fig3.scn"),
        "fig4" => include_str!("../scenarios/fig4.scn"),
        "fig5" => include_str!("../scenarios/fig5.scn"),
        "fig6" => include_str!("../scenarios/fig6.scn"),
        "fig7" => include_str!("../scenarios/fig7.scn"),
        "fig8" => include_str!("../scenarios/fig8.scn"),
        other => return Err(ConfigError::NoSuchBuiltin(other.to_string())),
    };
    Scenario::parse(text)
}
