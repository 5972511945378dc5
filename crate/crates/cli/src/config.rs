//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sl2amen::amen::{format_ratio, parse_ratio, Mode, Rational};
use sl2amen::fields::FieldTower;

/// Every knob a run can depend on. Resolved from defaults, then the config
/// file, then command-line flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub tower: Vec<u32>,
    pub enum_budget: u64,
    pub search_budget: u64,
    pub eval_budget: u64,
    pub formula_nodes: u64,
    pub epsilon: Rational,
    pub seed: u64,
    pub out: PathBuf,
    /// `None` means the mode decides: on for conjugation, off for translation.
    pub exclude_identity: Option<bool>,
    pub cache: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tower: FieldTower::default().levels().to_vec(),
            enum_budget: sl2amen::groups::DEFAULT_ENUM_BUDGET,
            search_budget: sl2amen::amen::DEFAULT_SEARCH_BUDGET,
            eval_budget: sl2amen::folog::DEFAULT_EVAL_BUDGET,
            formula_nodes: sl2amen::folog::MAX_FORMULA_NODES,
            epsilon: Rational::new(1, 2),
            seed: 0,
            out: PathBuf::from("sl2amen-out"),
            exclude_identity: None,
            cache: true,
        }
    }
}

const KEYS: &[&str] = &[
    "cache",
    "enum_budget",
    "epsilon",
    "eval_budget",
    "exclude_identity",
    "formula_nodes",
    "out",
    "search_budget",
    "seed",
    "tower",
];

fn parse_bool(text: &str) -> Result<bool> {
    match text.trim() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        other => bail!("expected a boolean, found {other:?}"),
    }
}

fn parse_count(text: &str) -> Result<u64> {
    let t: String = text.trim().chars().filter(|&c| c != '_').collect();
    if let Some((m, e)) = t.split_once('e') {
        let m: u64 = m.parse()?;
        let e: u32 = e.parse()?;
        return m.checked_mul(10u64.checked_pow(e).context("exponent too large")?).context("value too large");
    }
    Ok(t.parse()?)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "tower" => {
                let levels = v
                    .split(',')
                    .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad tower level {x:?}")))
                    .collect::<Result<Vec<_>>>()?;
                FieldTower::new(&levels)?;
                self.tower = levels;
            }
            "enum_budget" => self.enum_budget = parse_count(v)?,
            "search_budget" => self.search_budget = parse_count(v)?,
            "eval_budget" => self.eval_budget = parse_count(v)?,
            "formula_nodes" => self.formula_nodes = parse_count(v)?,
            "epsilon" => {
                let e = parse_ratio(v)?;
                if *e.numer() == 0 {
                    bail!("epsilon must be positive");
                }
                self.epsilon = e;
            }
            "seed" => self.seed = parse_count(v)?,
            "out" => self.out = PathBuf::from(v),
            "exclude_identity" => {
                self.exclude_identity = if v == "auto" { None } else { Some(parse_bool(v)?) };
            }
            "cache" => self.cache = parse_bool(v)?,
            _ => bail!("unknown config key {key:?}; known keys: {}", KEYS.join(", ")),
        }
        Ok(())
    }

    /// Applies a config file. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .with_context(|| format!("{origin}:{}: expected key = value", i + 1))?;
            self.set(k.trim(), v).with_context(|| format!("{origin}:{}", i + 1))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text, &path.display().to_string())?;
        Ok(cfg)
    }

    pub fn field_tower(&self) -> FieldTower {
        FieldTower::new(&self.tower).expect("validated when set")
    }

    pub fn exclude_identity_for(&self, mode: Mode) -> bool {
        self.exclude_identity.unwrap_or(mode == Mode::Conjugation)
    }

    /// Every key with its resolved value, except `out` and `cache`: where
    /// and whether results are stored does not change them.
    pub fn entries(&self) -> BTreeMap<String, String> {
        let tower: Vec<String> = self.tower.iter().map(|k| k.to_string()).collect();
        let excl = match self.exclude_identity {
            None => "auto".to_string(),
            Some(b) => b.to_string(),
        };
        [
            ("enum_budget", self.enum_budget.to_string()),
            ("epsilon", format_ratio(&self.epsilon)),
            ("eval_budget", self.eval_budget.to_string()),
            ("exclude_identity", excl),
            ("formula_nodes", self.formula_nodes.to_string()),
            ("search_budget", self.search_budget.to_string()),
            ("seed", self.seed.to_string()),
            ("tower", tower.join(",")),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    /// Sorted `key=value` lines; the input to the config hash.
    pub fn canonical_text(&self) -> String {
        self.entries().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}
