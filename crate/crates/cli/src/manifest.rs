//! The run manifest: a JSON snapshot of everything that determines a run.
//! Replaying a manifest reproduces byte-identical CSV/JSON payloads;
//! timestamps live in their own field and are excluded from that guarantee.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use paretobb::minimoea::MiniMoeaVariant;
use paretobb::problems::{builtin, load_problem_str, ProblemDefinition};

/// Algorithm selector exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgoSpec {
    #[serde(rename = "basic-bb")]
    BasicBb,
    #[serde(rename = "pbb-nsga2")]
    PbbNsga2,
    #[serde(rename = "pbb-moead")]
    PbbMoead,
    #[serde(rename = "nsga2-full")]
    Nsga2Full,
    #[serde(rename = "moead-full")]
    MoeadFull,
}

impl AlgoSpec {
    pub fn is_full_moea(self) -> bool {
        matches!(self, AlgoSpec::Nsga2Full | AlgoSpec::MoeadFull)
    }

    pub fn variant(self) -> Option<MiniMoeaVariant> {
        match self {
            AlgoSpec::PbbNsga2 | AlgoSpec::Nsga2Full => Some(MiniMoeaVariant::Nsga2),
            AlgoSpec::PbbMoead | AlgoSpec::MoeadFull => Some(MiniMoeaVariant::MoeadDe),
            AlgoSpec::BasicBb => None,
        }
    }
}

impl fmt::Display for AlgoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgoSpec::BasicBb => "basic-bb",
            AlgoSpec::PbbNsga2 => "pbb-nsga2",
            AlgoSpec::PbbMoead => "pbb-moead",
            AlgoSpec::Nsga2Full => "nsga2-full",
            AlgoSpec::MoeadFull => "moead-full",
        };
        f.write_str(s)
    }
}

impl FromStr for AlgoSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic-bb" => Ok(AlgoSpec::BasicBb),
            "pbb-nsga2" => Ok(AlgoSpec::PbbNsga2),
            "pbb-moead" => Ok(AlgoSpec::PbbMoead),
            "nsga2-full" => Ok(AlgoSpec::Nsga2Full),
            "moead-full" => Ok(AlgoSpec::MoeadFull),
            other => bail!(
                "unknown algorithm `{other}`; valid: basic-bb, pbb-nsga2, pbb-moead, nsga2-full, moead-full"
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemManifest {
    pub name: String,
    pub n: usize,
    pub m: usize,
    /// sha256 of the canonical problem text.
    pub hash: String,
    /// Canonical problem text; replay parses this, so the manifest alone
    /// determines the run.
    pub text: String,
}

/// Everything that determines a run. Field `created_unix_ms` is the only
/// wall-clock datum and is ignored on replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub problem: ProblemManifest,
    pub algo: AlgoSpec,
    pub seed: u64,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub repair_period: usize,
    pub max_boxes: usize,
    pub threads: usize,
    pub rho: f64,
    pub population: usize,
    pub generations: usize,
    pub created_unix_ms: u64,
}

pub fn problem_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl RunManifest {
    pub fn problem_manifest(problem: &ProblemDefinition) -> ProblemManifest {
        let text = problem.to_problem_text();
        ProblemManifest {
            name: problem.name.clone(),
            n: problem.n,
            m: problem.m,
            hash: problem_hash(&text),
            text,
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<RunManifest> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let manifest: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;
        Ok(manifest)
    }

    /// Reconstructs the problem from the embedded text, restoring the
    /// analytic front descriptor for built-in names.
    pub fn build_problem(&self) -> anyhow::Result<ProblemDefinition> {
        let parsed = load_problem_str(&self.problem.text).context("parsing manifest problem")?;
        if let Ok(known) = builtin(&self.problem.name, Some(parsed.n)) {
            if known.objectives == parsed.objectives && known.constraints == parsed.constraints {
                return Ok(known);
            }
        }
        Ok(parsed)
    }
}
