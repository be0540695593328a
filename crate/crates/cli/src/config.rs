//! Run configuration: `key = value` files overlaid by command-line flags.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use oseen_vem::lps::StabilizationParams;
use oseen_vem::system::ConvectiveVariant;

pub const COMMANDS: [&str; 4] = ["mesh", "solve", "convergence", "verify"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub problem: String,
    pub mu: f64,
    pub gamma: f64,
    pub r1: f64,
    pub r2: f64,
    pub family: String,
    pub n: usize,
    pub levels: Vec<usize>,
    pub k: usize,
    pub variant: ConvectiveVariant,
    pub stab: StabilizationParams,
    /// Energy-norm weight; the diagnostic is skipped when unset.
    pub alpha: Option<f64>,
    pub amplitude: f64,
    pub lloyd: usize,
    /// Explicit Voronoi seed count for `mesh`; `n * n` otherwise.
    pub seeds: Option<usize>,
    /// Mesh file read by `solve` instead of generating one.
    pub mesh: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            problem: "example1".into(),
            mu: 1.0,
            gamma: 1.0,
            r1: 0.1,
            r2: 0.1,
            family: "squares".into(),
            n: 8,
            levels: vec![5, 10, 20, 40],
            k: 1,
            variant: ConvectiveVariant::Skew,
            stab: StabilizationParams::default(),
            alpha: None,
            amplitude: 0.25,
            lloyd: 20,
            seeds: None,
            mesh: None,
            out: PathBuf::from("."),
            seed: 2024,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value `{value}` for key `{key}`"))
}

pub fn parse_levels(value: &str) -> Result<Vec<usize>, String> {
    let levels = value
        .split(',')
        .map(|s| parse::<usize>("levels", s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if levels.is_empty() {
        return Err(format!("invalid levels `{value}`"));
    }
    Ok(levels)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "command" => {
                if !COMMANDS.contains(&value) {
                    return Err(format!("unknown command `{value}`"));
                }
                self.command = Some(value.to_string());
            }
            "problem" => self.problem = value.to_string(),
            "mu" => self.mu = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "r1" => self.r1 = parse(key, value)?,
            "r2" => self.r2 = parse(key, value)?,
            "family" => self.family = value.to_string(),
            "n" => self.n = parse(key, value)?,
            "levels" => self.levels = parse_levels(value)?,
            "k" => self.k = parse(key, value)?,
            "variant" => self.variant = value.parse().map_err(|e| format!("{e}"))?,
            "stab.c1" => self.stab.c1 = parse(key, value)?,
            "stab.c2" => self.stab.c2 = parse(key, value)?,
            "stab.c3" => self.stab.c3 = parse(key, value)?,
            "alpha" => self.alpha = Some(parse(key, value)?),
            "amplitude" => self.amplitude = parse(key, value)?,
            "lloyd" => self.lloyd = parse(key, value)?,
            "seeds" => self.seeds = Some(parse(key, value)?),
            "mesh" => self.mesh = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = parse(key, value)?,
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        if let Some(c) = &self.command {
            let _ = writeln!(s, "command = {c}");
        }
        let _ = writeln!(s, "problem = {}", self.problem);
        let _ = writeln!(s, "mu = {:?}", self.mu);
        let _ = writeln!(s, "gamma = {:?}", self.gamma);
        let _ = writeln!(s, "r1 = {:?}", self.r1);
        let _ = writeln!(s, "r2 = {:?}", self.r2);
        let _ = writeln!(s, "family = {}", self.family);
        let _ = writeln!(s, "n = {}", self.n);
        let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "levels = {}", levels.join(","));
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "variant = {}", self.variant.name());
        let _ = writeln!(s, "stab.c1 = {:?}", self.stab.c1);
        let _ = writeln!(s, "stab.c2 = {:?}", self.stab.c2);
        let _ = writeln!(s, "stab.c3 = {:?}", self.stab.c3);
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "alpha = {a:?}");
        }
        let _ = writeln!(s, "amplitude = {:?}", self.amplitude);
        let _ = writeln!(s, "lloyd = {}", self.lloyd);
        if let Some(seeds) = self.seeds {
            let _ = writeln!(s, "seeds = {seeds}");
        }
        if let Some(m) = &self.mesh {
            let _ = writeln!(s, "mesh = {}", m.display());
        }
        let _ = writeln!(s, "out = {}", self.out.display());
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let mut c = RunConfig::default();
        c.command = Some("convergence".into());
        c.mu = 1e-8;
        c.r1 = 1.1;
        c.stab.c3 = 0.1 + 0.2;
        c.levels = vec![5, 10, 20];
        c.variant = ConvectiveVariant::Hat;
        c.alpha = Some(0.5);
        c.seeds = Some(64);
        let mut back = RunConfig::default();
        back.apply_file(&c.dump()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.dump(), c.dump());
    }

    #[test]
    fn unknown_key_rejected() {
        let mut c = RunConfig::default();
        let err = c.apply_file("mu = 1\nstab.c4 = 2\n").unwrap_err();
        assert!(err.contains("line 2") && err.contains("stab.c4"), "{err}");
    }

    #[test]
    fn comments_and_bad_values() {
        let mut c = RunConfig::default();
        c.apply_file("# sweep\nmu = 0.01 # small\n\n").unwrap();
        assert_eq!(c.mu, 0.01);
        assert!(c.apply_file("k = two").is_err());
        assert!(c.apply_file("levels = 5,,10").is_err());
        assert!(c.apply_file("variant = upwind").is_err());
    }
}
