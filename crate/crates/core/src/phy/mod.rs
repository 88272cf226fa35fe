//! Position/sign modulation and the noisy adder channel.

mod channel;
mod modulation;

pub use channel::{adder_channel, adder_channel_with_rng, ReceivedFrame};
pub use modulation::{ebn0_to_n0, modulate, FrameGeometry, ModSpec, ModulatedFrame};
