use super::{
    compute_aud_statistics, joint_mpa_decode, llr_init, mud_hard, JointTannerGraph, MpaOutput,
    SofAud, SumPatternCatalog, LLR_CLAMP,
};
use crate::coding::LdpcCode;
use crate::phy::{ModSpec, ReceivedFrame};
use crate::udas::UdasSet;
use crate::Result;

/// Where the receiver takes the active set from.
#[derive(Debug, Clone, Copy)]
pub enum Activity<'a> {
    Known { tau: usize, mu: usize },
    Detect(&'a SofAud),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOutput {
    pub tau_hat: usize,
    pub mu_hat: usize,
    pub active_rows: Vec<usize>,
    /// One decoder result per detected user, in `active_rows` order.
    pub users: Vec<MpaOutput>,
}

/// Activity detection, soft demapping and joint decoding of every detected user.
///
/// A noiseless frame (`N0 = 0`) has no soft information; its bits are taken
/// from hard detection as saturated LLRs.
pub fn receive_coded(
    y: &ReceivedFrame,
    set: &UdasSet,
    spec: ModSpec,
    code: &LdpcCode,
    graph: &JointTannerGraph,
    activity: Activity<'_>,
    max_iterations: usize,
) -> Result<ReceiverOutput> {
    let (tau, mu) = match activity {
        Activity::Known { tau, mu } => (tau, mu),
        Activity::Detect(aud) => aud.detect(&compute_aud_statistics(y), y.n0),
    };
    let catalog = SumPatternCatalog::new(set, tau, mu, spec)?;
    let per_user = if y.n0 > 0.0 {
        llr_init(y, &catalog, y.n0)?.per_user
    } else {
        mud_hard(y, &catalog)?
            .per_user_bits
            .iter()
            .map(|rows| {
                rows.iter()
                    .flatten()
                    .map(|&b| if b == 0 { LLR_CLAMP } else { -LLR_CLAMP })
                    .collect()
            })
            .collect()
    };
    let users = per_user
        .iter()
        .map(|l| joint_mpa_decode(l, graph, code, max_iterations))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReceiverOutput {
        tau_hat: tau,
        mu_hat: mu,
        active_rows: catalog.active_rows,
        users,
    })
}
