//! Outer LDPC code, column-major interleaver and per-row parity extension.

mod alist;
mod frame;
mod ldpc;

pub use frame::{deinterleave, encode_frame, interleave, sign_slot, spc_extend, CodedFrame};
pub use ldpc::{builtin_base_matrix, ldpc_encode, LdpcCode, BUILTIN_CIRCULANT};
