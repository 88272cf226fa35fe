use super::modulation::{format_samples, FrameGeometry, ModulatedFrame};
use crate::{Cplx, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Channel output `y[m][l][i]` and the noise level it was generated with.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    geometry: FrameGeometry,
    samples: Vec<Cplx>,
    pub n0: f64,
}

impl ReceivedFrame {
    pub fn new(geometry: FrameGeometry, samples: Vec<Cplx>, n0: f64) -> Result<ReceivedFrame> {
        if samples.len() != geometry.len() {
            return Err(Error::Size(format!(
                "{} samples for a frame of {}",
                samples.len(),
                geometry.len()
            )));
        }
        Ok(ReceivedFrame {
            geometry,
            samples,
            n0,
        })
    }

    pub fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    pub fn rows(&self) -> usize {
        self.geometry.rows
    }

    pub fn symbols(&self) -> usize {
        self.geometry.symbols
    }

    pub fn dims(&self) -> usize {
        self.geometry.dims
    }

    pub fn symbol(&self, m: usize, l: usize) -> &[Cplx] {
        let o = self.geometry.offset(m, l);
        &self.samples[o..o + self.geometry.dims]
    }

    pub fn samples(&self) -> &[Cplx] {
        &self.samples
    }

    pub fn to_text(&self) -> String {
        format_samples(self.geometry, &self.samples)
    }
}

/// Coherent sum of all frames plus circular complex Gaussian noise with
/// variance `n0 / 2` per real dimension.
pub fn adder_channel(
    frames: &[ModulatedFrame],
    geometry: FrameGeometry,
    n0: f64,
    seed: u64,
) -> Result<ReceivedFrame> {
    adder_channel_with_rng(frames, geometry, n0, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn adder_channel_with_rng<R: Rng + ?Sized>(
    frames: &[ModulatedFrame],
    geometry: FrameGeometry,
    n0: f64,
    rng: &mut R,
) -> Result<ReceivedFrame> {
    if !(n0 >= 0.0) || !n0.is_finite() {
        return Err(Error::Parameter(format!("noise level {n0} must be finite and >= 0")));
    }
    let mut samples = vec![Cplx::new(0.0, 0.0); geometry.len()];
    for frame in frames {
        if frame.geometry() != geometry {
            return Err(Error::Size(format!(
                "user {} frame is {:?}, channel expects {:?}",
                frame.user_id,
                frame.geometry(),
                geometry
            )));
        }
        samples
            .iter_mut()
            .zip(frame.samples())
            .for_each(|(y, x)| *y += x);
    }
    if n0 > 0.0 {
        let normal = Normal::new(0.0, (n0 / 2.0).sqrt()).expect("finite positive deviation");
        for y in samples.iter_mut() {
            *y += Cplx::new(normal.sample(rng), normal.sample(rng));
        }
    }
    ReceivedFrame::new(geometry, samples, n0)
}
