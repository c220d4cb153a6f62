//! Optional solver config file with a `[minimoea]` section:
//!
//! ```text
//! [minimoea] variant=moead-de, population=10, generations=20, rho=1, seed=7
//! ```
//!
//! Explicit command-line flags take precedence over file values.

use std::path::Path;

use anyhow::{bail, Context};

use paretobb::minimoea::MiniMoeaVariant;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub variant: Option<MiniMoeaVariant>,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
}

pub fn load(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut config = FileConfig::default();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut rest = raw.trim();
        if rest.is_empty() || rest.starts_with('#') {
            continue;
        }
        if let Some(after) = rest.strip_prefix('[') {
            let Some(close) = after.find(']') else {
                bail!("line {line_no}: unterminated section header");
            };
            section = after[..close].trim().to_string();
            rest = after[close + 1..].trim();
            if rest.is_empty() {
                continue;
            }
        }
        if section != "minimoea" {
            bail!("line {line_no}: unknown section `{section}` (expected [minimoea])");
        }
        for pair in rest.split(',') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let Some((key, value)) = pair.split_once('=') else {
                bail!("line {line_no}: expected key=value, got `{pair}`");
            };
            let (key, value) = (key.trim(), value.trim());
            let parse_err = || format!("line {line_no}: invalid value `{value}` for {key}");
            match key {
                "variant" => {
                    config.variant = Some(match value {
                        "nsga2" => MiniMoeaVariant::Nsga2,
                        "moead-de" | "moead" => MiniMoeaVariant::MoeadDe,
                        other => bail!("line {line_no}: unknown variant `{other}`"),
                    })
                }
                "population" => {
                    config.population = Some(value.parse().with_context(parse_err)?)
                }
                "generations" => {
                    config.generations = Some(value.parse().with_context(parse_err)?)
                }
                "rho" => config.rho = Some(value.parse().with_context(parse_err)?),
                "seed" => config.seed = Some(value.parse().with_context(parse_err)?),
                other => bail!("line {line_no}: unknown key `{other}` in [minimoea]"),
            }
        }
    }
    Ok(config)
}
