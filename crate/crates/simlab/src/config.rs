//! Flat `key = value` experiment files.
//!
//! ```text
//! # uncoded user-count detection at three frame lengths
//! kind = auer
//! generator = 1 1i 2 2i
//! rows = 20, 60, 102
//! ebn0_db = 0:8:2
//! max_trials = 200000
//! ```
//!
//! Blank lines and `#` comments are ignored. Lists are comma separated;
//! `a:b:step` expands to an inclusive range.

use crate::error::{Result, SimError};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use udas_core::coding::LdpcCode;
use udas_core::phy::ModSpec;
use udas_core::udas::{build_block_cyclic, build_cyclic, build_qc, parse_amp, Mode, UdasSet};
use udas_core::Amp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Auer,
    Ber,
    ShannonTable,
    TheoryAuer,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetSource {
    /// Structured construction from generator sequences; blocks are
    /// separated by `|` and quasi-cyclic block rows by `;`.
    Generator { mode: Mode, grid: Vec<Vec<Vec<Amp>>> },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeChoice {
    None,
    Builtin,
    Alist(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    Uniform,
    Explicit(Vec<f64>),
}

impl Prior {
    pub fn probabilities(&self, t: usize) -> Vec<f64> {
        match self {
            Prior::Uniform => vec![1.0 / t as f64; t],
            Prior::Explicit(p) => p.clone(),
        }
    }

    /// CSV label: `uniform` or the probabilities joined by `;`.
    pub fn label(&self) -> String {
        match self {
            Prior::Uniform => "uniform".into(),
            Prior::Explicit(p) => p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Option<Kind>,
    pub set: SetSource,
    pub t: Option<usize>,
    pub l: Option<usize>,
    /// Number of complex dimensions per symbol.
    pub m1: usize,
    /// Frame rows; several values only for `auer`.
    pub rows: Vec<usize>,
    pub nc: Option<usize>,
    pub code: CodeChoice,
    pub ebn0_db: Vec<f64>,
    pub tau: Vec<usize>,
    pub mu: Option<usize>,
    pub tau_prior: Prior,
    pub max_trials: u64,
    pub target_errors: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub known_activity: bool,
    pub max_iterations: usize,
    pub rates: Vec<f64>,
    pub users: usize,
    pub combination: usize,
    pub capacity_tolerance: f64,
    pub no_noise: bool,
    lines: HashMap<&'static str, usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: None,
            set: SetSource::Generator {
                mode: Mode::Cyclic,
                grid: vec![vec![vec![Amp::new(1, 0), Amp::new(0, 1), Amp::new(2, 0), Amp::new(0, 2)]]],
            },
            t: None,
            l: None,
            m1: 1,
            rows: vec![20],
            nc: None,
            code: CodeChoice::Builtin,
            ebn0_db: Vec::new(),
            tau: vec![1],
            mu: None,
            tau_prior: Prior::Uniform,
            max_trials: 10_000,
            target_errors: 100,
            seed: 1,
            out: None,
            known_activity: true,
            max_iterations: udas_core::receiver::DEFAULT_MAX_ITERATIONS,
            rates: Vec::new(),
            users: 2,
            combination: 1,
            capacity_tolerance: 1e-3,
            no_noise: false,
            lines: HashMap::new(),
        }
    }
}

const KEYS: &[&str] = &[
    "kind",
    "mode",
    "generator",
    "set_file",
    "t",
    "l",
    "m1",
    "rows",
    "nc",
    "code",
    "ebn0_db",
    "tau",
    "mu",
    "tau_prior",
    "max_trials",
    "target_errors",
    "seed",
    "out",
    "known_activity",
    "max_iterations",
    "rates",
    "users",
    "combination",
    "capacity_tolerance",
];

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = ExperimentConfig::parse(&text)?;
        // relative paths inside the file are relative to it
        let base = path.parent().unwrap_or(Path::new("."));
        if let SetSource::File(p) = &mut cfg.set {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let CodeChoice::Alist(p) = &mut cfg.code {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        let mut mode = Mode::Cyclic;
        let mut generator: Option<(usize, String)> = None;
        let mut code_seen = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| SimError::at(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let key: &'static str = KEYS
                .iter()
                .find(|&&k| k == key)
                .ok_or_else(|| SimError::at(line, format!("unknown key `{key}`")))?;
            if cfg.lines.insert(key, line).is_some() {
                return Err(SimError::at(line, format!("`{key}` given twice")));
            }
            match key {
                "kind" => {
                    cfg.kind = Some(match value {
                        "auer" => Kind::Auer,
                        "ber" => Kind::Ber,
                        "shannon_table" => Kind::ShannonTable,
                        "theory_auer" => Kind::TheoryAuer,
                        other => return Err(SimError::at(line, format!("unknown kind `{other}`"))),
                    })
                }
                "mode" => mode = value.parse().map_err(|e: udas_core::Error| SimError::at(line, e.to_string()))?,
                "generator" => generator = Some((line, value.to_string())),
                "set_file" => cfg.set = SetSource::File(PathBuf::from(value)),
                "t" => cfg.t = Some(number(line, value)?),
                "l" => cfg.l = Some(number(line, value)?),
                "m1" => cfg.m1 = number(line, value)?,
                "rows" => cfg.rows = list(line, value, number)?,
                "nc" => cfg.nc = Some(number(line, value)?),
                "code" => {
                    code_seen = true;
                    cfg.code = match value {
                        "none" => CodeChoice::None,
                        "builtin" => CodeChoice::Builtin,
                        path => CodeChoice::Alist(PathBuf::from(path)),
                    }
                }
                "ebn0_db" => cfg.ebn0_db = grid(line, value)?,
                "tau" => cfg.tau = list(line, value, number)?,
                "mu" => cfg.mu = Some(number(line, value)?),
                "tau_prior" => {
                    cfg.tau_prior = if value == "uniform" {
                        Prior::Uniform
                    } else {
                        Prior::Explicit(list(line, value, real)?)
                    }
                }
                "max_trials" => cfg.max_trials = number(line, value)?,
                "target_errors" => cfg.target_errors = number(line, value)?,
                "seed" => cfg.seed = number(line, value)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "known_activity" => {
                    cfg.known_activity = value
                        .parse()
                        .map_err(|_| SimError::at(line, format!("`{value}` is not true or false")))?
                }
                "max_iterations" => cfg.max_iterations = number(line, value)?,
                "rates" => cfg.rates = if value.is_empty() { Vec::new() } else { list(line, value, real)? },
                "users" => cfg.users = number(line, value)?,
                "combination" => cfg.combination = number(line, value)?,
                "capacity_tolerance" => cfg.capacity_tolerance = real(line, value)?,
                _ => unreachable!(),
            }
        }
        if let Some((line, g)) = generator {
            if cfg.lines.contains_key("set_file") {
                return Err(SimError::at(line, "`generator` and `set_file` are exclusive"));
            }
            cfg.set = SetSource::Generator {
                mode,
                grid: parse_generator(line, &g)?,
            };
        } else if let SetSource::Generator { mode: m, .. } = &mut cfg.set {
            *m = mode;
            if mode != Mode::Cyclic {
                return Err(SimError::at(cfg.line("mode"), "a non-cyclic mode needs a `generator`"));
            }
        }
        if !code_seen && cfg.kind != Some(Kind::Ber) {
            cfg.code = CodeChoice::None;
        }
        Ok(cfg)
    }

    /// Line that set `key`, or 0 when it was defaulted.
    pub fn line(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(0)
    }

    fn err(&self, key: &str, msg: impl Into<String>) -> SimError {
        match self.line(key) {
            0 => SimError::Invalid(format!("{key}: {}", msg.into())),
            line => SimError::at(line, msg),
        }
    }

    pub fn build_set(&self) -> Result<UdasSet> {
        let set = match &self.set {
            SetSource::File(path) => UdasSet::from_text(&std::fs::read_to_string(path)?)?,
            SetSource::Generator { mode, grid } => {
                let built = match mode {
                    Mode::Cyclic | Mode::Adhoc if grid.len() == 1 && grid[0].len() == 1 => build_cyclic(&grid[0][0]),
                    Mode::BlockCyclic if grid.len() == 1 => build_block_cyclic(&grid[0]),
                    Mode::Qc => build_qc(grid),
                    _ => return Err(self.err("generator", format!("generator shape does not fit mode `{mode}`"))),
                };
                built.map_err(|e| self.err("generator", e.to_string()))?
            }
        };
        if self.t.is_some_and(|t| t != set.t()) {
            return Err(self.err("t", format!("set has {} sequences", set.t())));
        }
        if self.l.is_some_and(|l| l != set.l()) {
            return Err(self.err("l", format!("set has length {}", set.l())));
        }
        Ok(set)
    }

    pub fn spec(&self) -> Result<ModSpec> {
        ModSpec::from_dims(self.m1).map_err(|e| self.err("m1", e.to_string()))
    }

    pub fn load_code(&self) -> Result<Option<LdpcCode>> {
        Ok(match &self.code {
            CodeChoice::None => None,
            CodeChoice::Builtin => Some(LdpcCode::builtin()),
            CodeChoice::Alist(path) => Some(LdpcCode::from_alist(&std::fs::read_to_string(path)?)?),
        })
    }

    /// Coded bits per frame row, `N − 1` with `N = L·log2 𝓜`.
    pub fn coded_bits_per_row(&self, set: &UdasSet) -> Result<usize> {
        let n = set.l() * self.spec()?.bits_per_symbol();
        if let Some(nc) = self.nc {
            if nc + 1 != n {
                return Err(self.err("nc", format!("N = L·log2 𝓜 = {n} needs nc = {}", n - 1)));
            }
        }
        Ok(n - 1)
    }

    /// Checks the parts of the file that `kind` relies on.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind.ok_or_else(|| SimError::Invalid("missing `kind`".into()))?;
        let set = self.build_set()?;
        self.spec()?;
        if self.rows.is_empty() || self.rows.contains(&0) {
            return Err(self.err("rows", "frame rows must be positive"));
        }
        if matches!(kind, Kind::Auer | Kind::Ber | Kind::TheoryAuer) && self.ebn0_db.is_empty() {
            return Err(self.err("ebn0_db", "Eb/N0 grid is empty"));
        }
        if matches!(kind, Kind::Ber | Kind::TheoryAuer) && self.rows.len() != 1 {
            return Err(self.err("rows", "this experiment takes a single frame length"));
        }
        if let Prior::Explicit(p) = &self.tau_prior {
            let sum: f64 = p.iter().sum();
            if p.len() != set.t() || p.iter().any(|&x| x < 0.0) || (sum - 1.0).abs() > 1e-9 {
                return Err(self.err("tau_prior", format!("needs {} non-negative values summing to 1", set.t())));
            }
        }
        match kind {
            Kind::Ber => {
                if self.tau.is_empty() || self.tau.iter().any(|&t| t == 0 || t > set.t()) {
                    return Err(self.err("tau", format!("user counts must lie in [1, {}]", set.t())));
                }
                if let Some(mu) = self.mu {
                    if self.tau.len() != 1 || mu == 0 || mu as u64 > udas_core::binomial(set.t(), self.tau[0]) {
                        return Err(self.err("mu", "fixed combination needs a single valid tau"));
                    }
                }
                let nc = self.coded_bits_per_row(&set)?;
                match self.load_code()? {
                    None => return Err(self.err("code", "ber needs a code")),
                    Some(code) if code.n() > self.rows[0] * nc => {
                        return Err(self.err(
                            "rows",
                            format!("{} rows of {nc} bits cannot hold a {}-bit codeword", self.rows[0], code.n()),
                        ))
                    }
                    _ => {}
                }
                if self.max_iterations == 0 {
                    return Err(self.err("max_iterations", "must be positive"));
                }
            }
            Kind::ShannonTable => {
                if self.users == 0 || self.users > set.t() {
                    return Err(self.err("users", format!("must lie in [1, {}]", set.t())));
                }
                if self.rates.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
                    return Err(self.err("rates", "code rates lie in (0, 1]"));
                }
            }
            Kind::Auer | Kind::TheoryAuer => {}
        }
        if self.max_trials == 0 && matches!(kind, Kind::Auer | Kind::Ber) {
            return Err(self.err("max_trials", "must be positive"));
        }
        Ok(())
    }
}

fn number<T: std::str::FromStr>(line: usize, value: &str) -> Result<T> {
    value
        .trim()
        .replace('_', "")
        .parse()
        .map_err(|_| SimError::at(line, format!("`{value}` is not a valid number")))
}

fn real(line: usize, value: &str) -> Result<f64> {
    let x: f64 = number(line, value)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(SimError::at(line, format!("`{value}` is not finite")))
    }
}

fn list<T>(line: usize, value: &str, item: fn(usize, &str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(|v| item(line, v.trim())).collect()
}

/// Comma list whose items may be inclusive `start:stop:step` ranges.
fn grid(line: usize, value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(real(line, x)?),
            [a, b, s] => {
                let (a, b, s) = (real(line, a)?, real(line, b)?, real(line, s)?);
                if !(s > 0.0) || b < a {
                    return Err(SimError::at(line, format!("bad range `{item}`")));
                }
                let steps = ((b - a) / s + 1e-9).floor() as usize;
                out.extend((0..=steps).map(|k| a + k as f64 * s));
            }
            _ => return Err(SimError::at(line, format!("bad grid item `{item}`"))),
        }
    }
    Ok(out)
}

/// Element tokens: `a+bi` / `a-bi`, a real integer `k`, or an imaginary `ki`.
fn parse_element(line: usize, tok: &str) -> Result<Amp> {
    if let Some(a) = parse_amp(tok) {
        return Ok(a);
    }
    let bad = || SimError::at(line, format!("bad element `{tok}`"));
    match tok.strip_suffix('i') {
        Some("") => Ok(Amp::new(0, 1)),
        Some("-") => Ok(Amp::new(0, -1)),
        Some(k) => Ok(Amp::new(0, k.parse().map_err(|_| bad())?)),
        None => Ok(Amp::new(tok.parse().map_err(|_| bad())?, 0)),
    }
}

fn parse_generator(line: usize, value: &str) -> Result<Vec<Vec<Vec<Amp>>>> {
    value
        .split(';')
        .map(|block_row| {
            block_row
                .split('|')
                .map(|block| {
                    let seq = block
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| parse_element(line, t))
                        .collect::<Result<Vec<_>>>()?;
                    if seq.is_empty() {
                        return Err(SimError::at(line, "empty generator block"));
                    }
                    Ok(seq)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let text = "\
# comment
kind = ber
generator = 1, 1i, 2, 2i   # trailing comment
m1 = 2
rows = 146
ebn0_db = 4:6:0.5, 8
tau = 1, 2
tau_prior = 0.1, 0.2, 0.3, 0.4
max_trials = 1_000
known_activity = false
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.kind, Some(Kind::Ber));
        assert_eq!(cfg.ebn0_db, vec![4.0, 4.5, 5.0, 5.5, 6.0, 8.0]);
        assert_eq!(cfg.tau, vec![1, 2]);
        assert_eq!(cfg.max_trials, 1000);
        assert!(!cfg.known_activity);
        assert_eq!(cfg.code, CodeChoice::Builtin);
        cfg.validate().unwrap();
        let set = cfg.build_set().unwrap();
        assert_eq!(set.p_avg(), 2.5);
        assert_eq!(cfg.coded_bits_per_row(&set).unwrap(), 7);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("kind = auer\nbogus = 1\n", 2),
            ("kind = auer\n\nrows = x\n", 3),
            ("kind = auer\nrows = 2\nrows = 3\n", 3),
            ("kind = wat\n", 1),
            ("kind = auer\njust text\n", 2),
            ("generator = 1 q\n", 1),
            ("kind = ber\nebn0_db = 3:1:1\n", 2),
            ("kind = auer\nmode = qc\n", 2),
        ];
        for (text, want) in cases {
            match ExperimentConfig::parse(text) {
                Err(SimError::Config { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn validation_points_at_the_offending_key() {
        let check = |text: &str, want: usize| {
            let err = ExperimentConfig::parse(text).unwrap().validate().unwrap_err();
            match err {
                SimError::Config { line, .. } => assert_eq!(line, want, "{text:?}: {err}"),
                other => panic!("{text:?}: {other}"),
            }
            assert_eq!(err.exit_code(), 2);
        };
        check("kind = ber\nebn0_db = 1\nrows = 100\n", 3);
        check("kind = ber\nebn0_db = 1\nrows = 339\ntau = 5\n", 4);
        check("kind = ber\nm1 = 3\nebn0_db = 1\n", 2);
        check("kind = auer\nebn0_db = 1\ntau_prior = 0.5, 0.5\n", 3);
        check("kind = ber\nebn0_db = 1\nrows = 339\nnc = 4\n", 4);
        check("kind = auer\nt = 6\nebn0_db = 0\n", 2);
        check("kind = shannon_table\nusers = 5\n", 2);
        assert!(matches!(ExperimentConfig::parse("rows = 3\n").unwrap().validate(), Err(SimError::Invalid(_))));
    }

    #[test]
    fn generator_shapes() {
        let block = ExperimentConfig::parse("mode = block_cyclic\ngenerator = 1 1i | 2 2i | 4 4i\n").unwrap();
        let set = block.build_set().unwrap();
        assert_eq!((set.t(), set.l(), set.p_avg()), (6, 6, 7.0));
        let qc = ExperimentConfig::parse("mode = qc\ngenerator = 1 1i | 2 2i ; 2i 2 | 1i 1\n").unwrap();
        assert!(matches!(qc.set, SetSource::Generator { ref grid, .. } if grid.len() == 2 && grid[0].len() == 2));
        assert_eq!(parse_element(1, "-3i").unwrap(), Amp::new(0, -3));
        assert_eq!(parse_element(1, "i").unwrap(), Amp::new(0, 1));
        assert_eq!(parse_element(1, "1-2i").unwrap(), Amp::new(1, -2));
    }
}
