//! Seeded trial engine.
//!
//! Trial `i` of grid point `p` draws from its own ChaCha stream derived from
//! `(seed, p, i)`, so a trial's outcome never depends on which worker ran it.
//! Batches are evaluated in parallel and merged in trial order; the run stops
//! at the first trial whose cumulative event count reaches the target, which
//! makes the totals independent of batch scheduling and thread count.

use crate::error::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::ops::AddAssign;

/// Trials evaluated between stop checks. Fixed so that the amount of work
/// done (not only the result) is independent of the thread count.
pub const BATCH: u64 = 64;

/// RNG of trial `trial` at grid point `point`.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ point.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(trial);
    rng
}

/// Per-trial counters that add up across trials.
pub trait Tally: Default + AddAssign + Send {
    /// Error events counted towards the stopping target.
    fn events(&self) -> u64;
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Totals<T> {
    pub trials: u64,
    pub tally: T,
}

/// Runs trials until `max_trials` or until `target_events` error events.
pub fn run_trials<T, F>(seed: u64, point: u64, max_trials: u64, target_events: u64, trial: F) -> Result<Totals<T>>
where
    T: Tally,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let mut totals = Totals {
        trials: 0,
        tally: T::default(),
    };
    let mut events = 0;
    while totals.trials < max_trials && events < target_events {
        let start = totals.trials;
        let end = (start + BATCH).min(max_trials);
        let batch: Vec<T> = (start..end)
            .into_par_iter()
            .map(|i| trial(&mut trial_rng(seed, point, i)))
            .collect::<Result<_>>()?;
        for t in batch {
            events += t.events();
            totals.trials += 1;
            totals.tally += t;
            if events >= target_events {
                break;
            }
        }
    }
    Ok(totals)
}
