//! Experiment drivers. Each returns a [`Table`] whose estimates are exactly
//! the listed error counters over their denominators.

use crate::config::{ExperimentConfig, Kind};
use crate::error::{Result, SimError};
use crate::output::{rate, Table};
use crate::runner::{run_trials, Tally};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::ops::AddAssign;
use udas_core::analysis::{auer_theory, shannon_limit, CapacitySettings};
use udas_core::coding::{encode_frame, CodedFrame, LdpcCode};
use udas_core::phy::{adder_channel_with_rng, ebn0_to_n0, modulate, FrameGeometry, ModSpec};
use udas_core::receiver::{compute_aud_statistics, receive_coded, Activity, JointTannerGraph, SofAud};
use udas_core::udas::UdasSet;
use udas_core::{binomial, combination_rows, Error};

/// Dispatches on `cfg.kind`.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    match cfg.kind.expect("validated") {
        Kind::Auer => run_auer_experiment(cfg),
        Kind::Ber => run_ber_experiment(cfg),
        Kind::TheoryAuer => run_theory_auer(cfg),
        Kind::ShannonTable => run_shannon_table(cfg),
    }
}

fn noise_level(cfg: &ExperimentConfig, ebn0_db: f64, rc: f64, spec: &ModSpec, set: &UdasSet) -> Result<f64> {
    if cfg.no_noise {
        Ok(0.0)
    } else {
        Ok(ebn0_to_n0(ebn0_db, rc, spec, set.p_avg())?)
    }
}

fn draw_tau(rng: &mut ChaCha8Rng, cumulative: &[f64]) -> usize {
    let u: f64 = rng.random();
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1) + 1
}

fn draw_mu(rng: &mut ChaCha8Rng, t: usize, tau: usize) -> usize {
    rng.random_range(1..=binomial(t, tau) as usize)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct AudTally {
    /// Trials with a wrong user count.
    pub count_errors: u64,
    /// Trials with the right count but the wrong combination.
    pub set_errors: u64,
}

impl AddAssign for AudTally {
    fn add_assign(&mut self, o: AudTally) {
        self.count_errors += o.count_errors;
        self.set_errors += o.set_errors;
    }
}

impl Tally for AudTally {
    fn events(&self) -> u64 {
        self.count_errors
    }
}

/// Uncoded activity-detection trials: every active user sends random bits,
/// `τ` is drawn from the prior and `μ` uniformly.
pub fn run_auer_experiment(cfg: &ExperimentConfig) -> Result<Table> {
    let set = cfg.build_set()?;
    let spec = cfg.spec()?;
    let priors = cfg.tau_prior.probabilities(set.t());
    let cumulative: Vec<f64> = priors
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let aud = SofAud::new(&set, spec.dims())?;
    let n = set.l() * spec.bits_per_symbol();
    let mut table = Table::new(&[
        "ebn0_db",
        "M",
        "tau_prior",
        "trials",
        "aud_errors",
        "auer_sim",
        "auer_theory",
        "set_errors",
    ]);
    let mut point = 0;
    for &rows in &cfg.rows {
        let geometry = FrameGeometry {
            rows,
            symbols: set.l(),
            dims: spec.dims(),
        };
        for &ebn0 in &cfg.ebn0_db {
            let n0 = noise_level(cfg, ebn0, 1.0, &spec, &set)?;
            let trial = |rng: &mut ChaCha8Rng| -> Result<AudTally> {
                let tau = draw_tau(rng, &cumulative);
                let mu = draw_mu(rng, set.t(), tau);
                let frames = combination_rows(set.t(), tau, mu)?
                    .into_iter()
                    .map(|r| {
                        let bits = (0..rows).map(|_| (0..n).map(|_| rng.random_range(0..2)).collect()).collect();
                        let f = CodedFrame::from_bits(r, bits, spec.bits_per_symbol())?;
                        modulate(&f, set.row(r), &spec)
                    })
                    .collect::<udas_core::Result<Vec<_>>>()?;
                let y = adder_channel_with_rng(&frames, geometry, n0, rng)?;
                let (tau_hat, mu_hat) = aud.detect(&compute_aud_statistics(&y), n0);
                Ok(AudTally {
                    count_errors: u64::from(tau_hat != tau),
                    set_errors: u64::from(tau_hat == tau && mu_hat != mu),
                })
            };
            let totals = run_trials(cfg.seed, point, cfg.max_trials, cfg.target_errors, trial)?;
            let theory = auer_theory(&set, rows, n0, &priors, spec)?;
            table.push(vec![
                ebn0.to_string(),
                rows.to_string(),
                cfg.tau_prior.label(),
                totals.trials.to_string(),
                totals.tally.count_errors.to_string(),
                rate(totals.tally.count_errors, totals.trials).to_string(),
                theory.total.to_string(),
                totals.tally.set_errors.to_string(),
            ]);
            point += 1;
        }
    }
    Ok(table)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct BerTally {
    pub bit_errors: u64,
    /// User codewords with at least one wrong information bit.
    pub frame_errors: u64,
    /// Trials whose detected `(τ, μ)` differs from the truth.
    pub aud_errors: u64,
}

impl AddAssign for BerTally {
    fn add_assign(&mut self, o: BerTally) {
        self.bit_errors += o.bit_errors;
        self.frame_errors += o.frame_errors;
        self.aud_errors += o.aud_errors;
    }
}

impl Tally for BerTally {
    fn events(&self) -> u64 {
        self.frame_errors
    }
}

/// Code, frame layout and receiver state shared by the trials of a BER run.
pub struct CodedLink {
    pub set: UdasSet,
    pub spec: ModSpec,
    pub code: LdpcCode,
    pub graph: JointTannerGraph,
    pub aud: SofAud,
    pub rows: usize,
    pub max_iterations: usize,
}

impl CodedLink {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<CodedLink> {
        let set = cfg.build_set()?;
        let spec = cfg.spec()?;
        let code = cfg
            .load_code()?
            .ok_or_else(|| SimError::Invalid("ber needs a code".into()))?;
        let n = set.l() * spec.bits_per_symbol();
        let graph = JointTannerGraph::new(&code, cfg.rows[0], n, spec.bits_per_symbol())?;
        let aud = SofAud::new(&set, spec.dims())?;
        Ok(CodedLink {
            set,
            spec,
            code,
            graph,
            aud,
            rows: cfg.rows[0],
            max_iterations: cfg.max_iterations,
        })
    }

    /// Coded bits per row.
    pub fn nc(&self) -> usize {
        self.set.l() * self.spec.bits_per_symbol() - 1
    }

    /// Information bits per transmitted bit position, `Rc = K/N1 · Nc/N`.
    pub fn rate(&self) -> f64 {
        self.code.rate() * self.nc() as f64 / (self.nc() + 1) as f64
    }

    /// One frame from the users of `(τ, μ)`. A user the receiver did not
    /// detect is scored as if its decision were all zeros.
    pub fn trial(&self, rng: &mut ChaCha8Rng, tau: usize, mu: usize, n0: f64, known: bool) -> Result<BerTally> {
        let users = combination_rows(self.set.t(), tau, mu)?;
        let mut messages = Vec::with_capacity(tau);
        let mut frames = Vec::with_capacity(tau);
        for &r in &users {
            let u: Vec<u8> = (0..self.code.k()).map(|_| rng.random_range(0..2)).collect();
            let f = encode_frame(&self.code, &u, self.rows, self.nc(), self.spec.bits_per_symbol(), r)?;
            frames.push(modulate(&f, self.set.row(r), &self.spec)?);
            messages.push(u);
        }
        let geometry = FrameGeometry {
            rows: self.rows,
            symbols: self.set.l(),
            dims: self.spec.dims(),
        };
        let y = adder_channel_with_rng(&frames, geometry, n0, rng)?;
        let activity = if known {
            Activity::Known { tau, mu }
        } else {
            Activity::Detect(&self.aud)
        };
        let out = receive_coded(&y, &self.set, self.spec, &self.code, &self.graph, activity, self.max_iterations)?;
        let mut tally = BerTally {
            aud_errors: u64::from((out.tau_hat, out.mu_hat) != (tau, mu)),
            ..BerTally::default()
        };
        for (r, u) in users.iter().zip(&messages) {
            let wrong = match out.active_rows.iter().position(|a| a == r) {
                Some(i) => out.users[i].info.iter().zip(u).filter(|(a, b)| a != b).count(),
                None => u.iter().filter(|&&b| b == 1).count(),
            } as u64;
            tally.bit_errors += wrong;
            tally.frame_errors += u64::from(wrong > 0);
        }
        Ok(tally)
    }
}

/// Full coded chain per trial at each `(τ, Eb/N0)`.
pub fn run_ber_experiment(cfg: &ExperimentConfig) -> Result<Table> {
    let link = CodedLink::from_config(cfg)?;
    let t = link.set.t();
    let mut table = Table::new(&[
        "ebn0_db",
        "tau",
        "L",
        "m1",
        "trials",
        "bit_errors",
        "ber",
        "fer",
        "frame_errors",
        "aud_errors",
    ]);
    let mut point = 0;
    for &tau in &cfg.tau {
        for &ebn0 in &cfg.ebn0_db {
            let n0 = noise_level(cfg, ebn0, link.rate(), &link.spec, &link.set)?;
            let trial = |rng: &mut ChaCha8Rng| {
                let mu = match cfg.mu {
                    Some(mu) => mu,
                    None => draw_mu(rng, t, tau),
                };
                link.trial(rng, tau, mu, n0, cfg.known_activity)
            };
            let totals = run_trials(cfg.seed, point, cfg.max_trials, cfg.target_errors, trial)?;
            let user_frames = totals.trials * tau as u64;
            table.push(vec![
                ebn0.to_string(),
                tau.to_string(),
                link.set.l().to_string(),
                link.spec.dims().to_string(),
                totals.trials.to_string(),
                totals.tally.bit_errors.to_string(),
                rate(totals.tally.bit_errors, user_frames * link.code.k() as u64).to_string(),
                rate(totals.tally.frame_errors, user_frames).to_string(),
                totals.tally.frame_errors.to_string(),
                totals.tally.aud_errors.to_string(),
            ]);
            point += 1;
        }
    }
    Ok(table)
}

/// Analytic AUER per user count and averaged over the prior.
pub fn run_theory_auer(cfg: &ExperimentConfig) -> Result<Table> {
    let set = cfg.build_set()?;
    let spec = cfg.spec()?;
    let priors = cfg.tau_prior.probabilities(set.t());
    let mut table = Table::new(&["ebn0_db", "tau", "auer_theory"]);
    for &ebn0 in &cfg.ebn0_db {
        let n0 = noise_level(cfg, ebn0, 1.0, &spec, &set)?;
        let theory = auer_theory(&set, cfg.rows[0], n0, &priors, spec)?;
        for (tau, p) in theory.per_tau.iter().enumerate() {
            table.push(vec![ebn0.to_string(), (tau + 1).to_string(), p.to_string()]);
        }
        table.push(vec![ebn0.to_string(), "all".into(), theory.total.to_string()]);
    }
    Ok(table)
}

/// Minimum `Eb/N0` per code rate; unreachable rates are flagged and the run
/// goes on.
pub fn run_shannon_table(cfg: &ExperimentConfig) -> Result<Table> {
    let set = cfg.build_set()?;
    let spec = cfg.spec()?;
    let settings = CapacitySettings {
        seed: cfg.seed,
        tolerance: cfg.capacity_tolerance,
        ..CapacitySettings::default()
    };
    let mut table = Table::new(&["rc", "ebn0_min_db"]);
    for &rc in &cfg.rates {
        let cell = match shannon_limit(rc, &set, cfg.users, cfg.combination, spec, &settings) {
            Ok(db) => format!("{db:.4}"),
            Err(Error::Unreachable(_)) => "unreachable".into(),
            Err(e) => return Err(e.into()),
        };
        table.push(vec![rc.to_string(), cell]);
    }
    Ok(table)
}
