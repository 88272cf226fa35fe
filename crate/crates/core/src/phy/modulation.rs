use crate::coding::CodedFrame;
use crate::{Amp, Cplx, Error, Result};
use std::fmt::Write as _;

/// Position/sign modulation with `dims = mod_order / 2` coordinates per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModSpec {
    mod_order: usize,
}

impl ModSpec {
    pub fn new(mod_order: usize) -> Result<ModSpec> {
        if mod_order < 2 || !mod_order.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "modulation order {mod_order} is not a power of two >= 2"
            )));
        }
        Ok(ModSpec { mod_order })
    }

    pub fn from_dims(dims: usize) -> Result<ModSpec> {
        ModSpec::new(dims * 2)
    }

    pub fn mod_order(&self) -> usize {
        self.mod_order
    }

    pub fn dims(&self) -> usize {
        self.mod_order / 2
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.mod_order.trailing_zeros() as usize
    }

    pub fn location_bits(&self) -> usize {
        self.bits_per_symbol() - 1
    }

    /// 0-based location from the leading bits, most significant first.
    pub fn location(&self, bits: &[u8]) -> usize {
        bits[..self.location_bits()]
            .iter()
            .fold(0, |acc, &b| acc << 1 | usize::from(b & 1))
    }

    /// Bit label of (location, sign bit): location bits then the sign bit.
    pub fn label(&self, location: usize, sign: u8) -> Vec<u8> {
        let lb = self.location_bits();
        let mut bits: Vec<u8> = (0..lb).map(|k| (location >> (lb - 1 - k) & 1) as u8).collect();
        bits.push(sign & 1);
        bits
    }

    /// Symbol index `location·2 + sign`, i.e. the label read as a binary number.
    pub fn symbol_index(&self, bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| acc << 1 | usize::from(b & 1))
    }

    /// Writes the coordinate vector of one symbol into `out`.
    pub fn map_symbol(&self, bits: &[u8], e: Amp, out: &mut [Cplx]) {
        out.fill(Cplx::new(0.0, 0.0));
        let sign = if bits[self.bits_per_symbol() - 1] & 1 == 1 { 1.0 } else { -1.0 };
        out[self.location(bits)] = Cplx::new(e.re as f64, e.im as f64) * sign;
    }

    /// Recovers the label from a noiseless single-user symbol.
    pub fn demap_symbol(&self, symbol: &[Cplx], e: Amp) -> Option<Vec<u8>> {
        let ef = Cplx::new(e.re as f64, e.im as f64);
        let nonzero: Vec<usize> = (0..symbol.len()).filter(|&i| symbol[i].norm_sqr() > 0.0).collect();
        let &[loc] = nonzero.as_slice() else {
            return None;
        };
        let sign = if (symbol[loc] - ef).norm_sqr() < 1e-9 {
            1
        } else if (symbol[loc] + ef).norm_sqr() < 1e-9 {
            0
        } else {
            return None;
        };
        Some(self.label(loc, sign))
    }
}

/// Frame dimensions: rows `M`, symbols per row `L`, coordinates per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameGeometry {
    pub rows: usize,
    pub symbols: usize,
    pub dims: usize,
}

impl FrameGeometry {
    pub fn len(&self) -> usize {
        self.rows * self.symbols * self.dims
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn offset(&self, m: usize, l: usize) -> usize {
        (m * self.symbols + l) * self.dims
    }
}

/// Samples laid out row-major as `[m][l][i]`.
pub(crate) fn format_samples(geometry: FrameGeometry, samples: &[Cplx]) -> String {
    let mut out = String::new();
    for m in 0..geometry.rows {
        let symbols: Vec<String> = (0..geometry.symbols)
            .map(|l| {
                let o = geometry.offset(m, l);
                let coords: Vec<String> = samples[o..o + geometry.dims]
                    .iter()
                    .map(|z| format!("{}{:+}i", z.re, z.im))
                    .collect();
                format!("({})", coords.join(", "))
            })
            .collect();
        writeln!(out, "{}", symbols.join(" ")).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulatedFrame {
    pub user_id: usize,
    geometry: FrameGeometry,
    symbols: Vec<Cplx>,
    source: Vec<Amp>,
}

impl ModulatedFrame {
    pub fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    pub fn symbol(&self, m: usize, l: usize) -> &[Cplx] {
        let o = self.geometry.offset(m, l);
        &self.symbols[o..o + self.geometry.dims]
    }

    pub fn samples(&self) -> &[Cplx] {
        &self.symbols
    }

    pub fn source(&self) -> &[Amp] {
        &self.source
    }

    pub fn to_text(&self) -> String {
        format_samples(self.geometry, &self.symbols)
    }
}

/// Maps each `bits_per_symbol` group of the frame onto `±e_l` at its location.
pub fn modulate(frame: &CodedFrame, e: &[Amp], spec: &ModSpec) -> Result<ModulatedFrame> {
    if frame.mod_bits() != spec.bits_per_symbol() || frame.l() != e.len() {
        return Err(Error::Size(format!(
            "frame has {} symbols of {} bits, sequence length {} with {} bits per symbol",
            frame.l(),
            frame.mod_bits(),
            e.len(),
            spec.bits_per_symbol()
        )));
    }
    let geometry = FrameGeometry {
        rows: frame.m(),
        symbols: frame.l(),
        dims: spec.dims(),
    };
    let mut symbols = vec![Cplx::new(0.0, 0.0); geometry.len()];
    for m in 0..geometry.rows {
        for (l, &el) in e.iter().enumerate() {
            let o = geometry.offset(m, l);
            spec.map_symbol(frame.symbol_bits(m, l), el, &mut symbols[o..o + geometry.dims]);
        }
    }
    Ok(ModulatedFrame {
        user_id: frame.user_id,
        geometry,
        symbols,
        source: e.to_vec(),
    })
}

/// `N0` for a given `Eb/N0` in dB with unit symbol duration:
/// `Eb = P_avg / (Rc · log2 𝓜)`.
pub fn ebn0_to_n0(ebn0_db: f64, rc: f64, spec: &ModSpec, p_avg: f64) -> Result<f64> {
    if !(rc > 0.0 && rc <= 1.0) || !(p_avg > 0.0) || ebn0_db.is_nan() {
        return Err(Error::Parameter(format!(
            "need 0 < Rc <= 1 and P_avg > 0 (Rc = {rc}, P_avg = {p_avg})"
        )));
    }
    let eb = p_avg / (rc * spec.bits_per_symbol() as f64);
    Ok(eb / 10f64.powf(ebn0_db / 10.0))
}
