//! Active user detection, multiuser detection and joint decoding.

mod aud;
mod catalog;
mod llr;
mod map;
mod mpa;
mod mud;
mod pipeline;

pub use aud::{compute_aud_statistics, sof_aud, AudStatistics, SofAud};
pub use catalog::{SumPatternCatalog, MAX_CANDIDATES};
pub use llr::{llr_init, FrameLlrs, LLR_CLAMP};
pub use map::{map_oracle, MapDecision, MAX_ORACLE_WORK};
pub use mpa::{joint_mpa_decode, JointTannerGraph, MpaOutput, DEFAULT_MAX_ITERATIONS};
pub use mud::{mud_hard, DetectionResult};
pub use pipeline::{receive_coded, Activity, ReceiverOutput};
