//! Experiment configuration: presets, the line-oriented config file, and
//! flag merging.

use std::fmt;
use std::path::Path;

use cncc::{GeneratorMatrix, StopRule};

/// Fully resolved experiment description.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub label: String,
    pub generator: GeneratorMatrix,
    pub antennas: u32,
    pub nakagami_m: u32,
    pub packet_len: usize,
    pub eta: f64,
    pub beta: f64,
    pub depth: usize,
    /// Packets per source; reporting only, rounds are i.i.d.
    pub packets_per_source: usize,
    pub seed: u64,
    pub horizon: u32,
    pub snr_db: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub beta_sweep_gamma_rd_db: f64,
    pub stop: StopRule,
    /// Refuse simulate runs whose estimated total rounds exceed this.
    pub budget_rounds: u64,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<cncc::Error> for ConfigError {
    fn from(e: cncc::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// Network presets: (antennas, parity streams, generator).
pub fn preset(index: u8) -> Result<(u32, GeneratorMatrix, String), ConfigError> {
    let (antennas, generator) = match index {
        1 => (1, GeneratorMatrix::systematic_3_2_3()),
        2 => (2, GeneratorMatrix::systematic_3_2_3()),
        3 => (2, GeneratorMatrix::systematic_4_2_3()),
        4 => (3, GeneratorMatrix::systematic_4_2_3()),
        other => return Err(ConfigError(format!("preset {other} (expected 1..=4)"))),
    };
    let label = format!(
        "preset {index} (N={}, M={antennas}, M'={})",
        generator.sources(),
        generator.parity_streams()
    );
    Ok((antennas, generator, label))
}

impl Default for Experiment {
    fn default() -> Self {
        let (antennas, generator, label) = preset(1).unwrap();
        Experiment {
            label,
            generator,
            antennas,
            nakagami_m: 1,
            packet_len: 10,
            eta: 2.0,
            beta: 5.0,
            depth: 100,
            packets_per_source: 100,
            seed: 1,
            horizon: 12,
            snr_db: vec![0.0, 4.0, 8.0, 12.0, 16.0, 20.0],
            beta_grid: vec![1.5, 2.0, 3.0, 5.0, 8.0, 12.0],
            beta_sweep_gamma_rd_db: 8.0,
            stop: StopRule::default(),
            budget_rounds: 200_000_000,
        }
    }
}

/// Raw `key = value` sections of a config file.
#[derive(Default, Debug)]
pub struct ConfigFile {
    entries: Vec<(String, String, String)>, // (section, key, value)
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
        let mut section = String::from("network");
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    ConfigError(format!("line {}: unterminated section header", lineno + 1))
                })?;
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "line {}: expected `key = value`, found {line:?}",
                    lineno + 1
                )));
            };
            entries.push((
                section.clone(),
                key.trim().to_string(),
                value.trim().to_string(),
            ));
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(s, k, _)| s == section && k == key)
            .map(|(_, _, v)| v.as_str())
    }

    /// Applies the file onto `exp` for the given subcommand section.
    pub fn apply(&self, exp: &mut Experiment, subcommand: &str) -> Result<(), ConfigError> {
        for (section, key, _) in &self.entries {
            let known_section = matches!(
                section.as_str(),
                "network" | "enumerate" | "analyze" | "simulate" | "sweep-beta"
            );
            if !known_section {
                return Err(ConfigError(format!("unknown section [{section}]")));
            }
            let known_key = match section.as_str() {
                "network" => matches!(
                    key.as_str(),
                    "preset" | "antennas" | "memory" | "m" | "n" | "eta" | "beta" | "depth" | "l"
                ) || key.starts_with("row"),
                "enumerate" => key == "horizon",
                _ => matches!(
                    key.as_str(),
                    "snr_db"
                        | "seed"
                        | "stop_errors"
                        | "max_rounds"
                        | "min_rounds"
                        | "budget_rounds"
                        | "beta_grid"
                        | "gamma_rd_db"
                        | "horizon"
                ),
            };
            if !known_key {
                return Err(ConfigError(format!("unknown key `{key}` in section [{section}]")));
            }
        }

        if let Some(v) = self.get("network", "preset") {
            let idx: u8 = parse_num(v, "preset")?;
            let (antennas, generator, label) = preset(idx)?;
            exp.antennas = antennas;
            exp.generator = generator;
            exp.label = label;
        }
        let rows: Vec<String> = (1..)
            .map_while(|i| self.get("network", &format!("row{i}")).map(str::to_string))
            .collect();
        if !rows.is_empty() {
            let memory: usize = match self.get("network", "memory") {
                Some(v) => parse_num(v, "memory")?,
                None => return Err(ConfigError("explicit generator rows need `memory`".into())),
            };
            let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
            exp.generator = GeneratorMatrix::parse_rows(&refs, memory)?;
            exp.label = format!(
                "custom (N={}, M'={})",
                exp.generator.sources(),
                exp.generator.parity_streams()
            );
        }
        if let Some(v) = self.get("network", "antennas") {
            exp.antennas = parse_num(v, "antennas")?;
        }
        if let Some(v) = self.get("network", "m") {
            exp.nakagami_m = parse_num(v, "m")?;
        }
        if let Some(v) = self.get("network", "n") {
            exp.packet_len = parse_num(v, "n")?;
        }
        if let Some(v) = self.get("network", "eta") {
            exp.eta = parse_num(v, "eta")?;
        }
        if let Some(v) = self.get("network", "beta") {
            exp.beta = parse_num(v, "beta")?;
        }
        if let Some(v) = self.get("network", "depth") {
            exp.depth = parse_num(v, "depth")?;
        }
        if let Some(v) = self.get("network", "l") {
            exp.packets_per_source = parse_num(v, "l")?;
        }

        if let Some(v) = self.get("enumerate", "horizon").or(self.get(subcommand, "horizon")) {
            exp.horizon = parse_num(v, "horizon")?;
        }
        if let Some(v) = self.get(subcommand, "snr_db") {
            exp.snr_db = parse_list(v, "snr_db")?;
        }
        if let Some(v) = self.get(subcommand, "seed") {
            exp.seed = parse_num(v, "seed")?;
        }
        if let Some(v) = self.get(subcommand, "stop_errors") {
            exp.stop.target_errors = parse_num(v, "stop_errors")?;
        }
        if let Some(v) = self.get(subcommand, "max_rounds") {
            exp.stop.max_rounds = parse_num(v, "max_rounds")?;
        }
        if let Some(v) = self.get(subcommand, "min_rounds") {
            exp.stop.min_rounds = parse_num(v, "min_rounds")?;
        }
        if let Some(v) = self.get(subcommand, "budget_rounds") {
            exp.budget_rounds = parse_num(v, "budget_rounds")?;
        }
        if let Some(v) = self.get(subcommand, "beta_grid") {
            exp.beta_grid = parse_list(v, "beta_grid")?;
        }
        if let Some(v) = self.get(subcommand, "gamma_rd_db") {
            exp.beta_sweep_gamma_rd_db = parse_num(v, "gamma_rd_db")?;
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("bad value {value:?} for `{key}`")))
}

fn parse_list(value: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Result<Vec<f64>, _> = value.split(',').map(|s| s.trim().parse()).collect();
    let items = items.map_err(|_| ConfigError(format!("bad list {value:?} for `{key}`")))?;
    if items.is_empty() {
        return Err(ConfigError(format!("empty list for `{key}`")));
    }
    Ok(items)
}
