use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udas_core::coding::{encode_frame, LdpcCode};
use udas_core::phy::{adder_channel, ebn0_to_n0, modulate, FrameGeometry, ModSpec};
use udas_core::receiver::{receive_coded, Activity, JointTannerGraph, SofAud, DEFAULT_MAX_ITERATIONS};
use udas_core::udas::{build_cyclic, UdasSet};
use udas_core::{binomial, combination_rows, Amp};

fn cyclic4() -> UdasSet {
    build_cyclic(&[Amp::new(1, 0), Amp::new(0, 1), Amp::new(2, 0), Amp::new(0, 2)]).unwrap()
}

/// Frame rows for the built-in code: enough rows of `N − 1` coded bits.
fn rows_for(code: &LdpcCode, spec: ModSpec, symbols: usize) -> usize {
    let nc = symbols * spec.bits_per_symbol() - 1;
    code.n().div_ceil(nc)
}

struct Link {
    set: UdasSet,
    spec: ModSpec,
    code: LdpcCode,
    graph: JointTannerGraph,
    rows: usize,
}

impl Link {
    fn new(order: usize) -> Link {
        let set = cyclic4();
        let spec = ModSpec::new(order).unwrap();
        let code = LdpcCode::builtin();
        let rows = rows_for(&code, spec, set.l());
        let n = set.l() * spec.bits_per_symbol();
        let graph = JointTannerGraph::new(&code, rows, n, spec.bits_per_symbol()).unwrap();
        Link {
            set,
            spec,
            code,
            graph,
            rows,
        }
    }

    fn geometry(&self) -> FrameGeometry {
        FrameGeometry {
            rows: self.rows,
            symbols: self.set.l(),
            dims: self.spec.dims(),
        }
    }

    /// Sends random messages from the users of `(τ, μ)`; returns the
    /// messages and whether each was decoded exactly.
    fn run(&self, tau: usize, mu: usize, n0: f64, detect: bool, seed: u64) -> (usize, usize, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = combination_rows(self.set.t(), tau, mu).unwrap();
        let nc = self.set.l() * self.spec.bits_per_symbol() - 1;
        let mut messages = Vec::new();
        let mut frames = Vec::new();
        for &r in &rows {
            let u: Vec<u8> = (0..self.code.k()).map(|_| rng.random_range(0..2)).collect();
            let f = encode_frame(&self.code, &u, self.rows, nc, self.spec.bits_per_symbol(), r).unwrap();
            frames.push(modulate(&f, self.set.row(r), &self.spec).unwrap());
            messages.push(u);
        }
        let y = adder_channel(&frames, self.geometry(), n0, rng.random()).unwrap();
        let aud = SofAud::new(&self.set, self.spec.dims()).unwrap();
        let activity = if detect {
            Activity::Detect(&aud)
        } else {
            Activity::Known { tau, mu }
        };
        let out = receive_coded(&y, &self.set, self.spec, &self.code, &self.graph, activity, DEFAULT_MAX_ITERATIONS)
            .unwrap();
        let ok = if (out.tau_hat, out.mu_hat) == (tau, mu) {
            out.users.iter().zip(&messages).map(|(d, u)| d.converged && &d.info == u).collect()
        } else {
            vec![false; tau]
        };
        (out.tau_hat, out.mu_hat, ok)
    }
}

#[test]
fn noiseless_link_recovers_every_user() {
    for order in [2, 4, 8] {
        let link = Link::new(order);
        for tau in 1..=4 {
            for mu in 1..=binomial(4, tau) as usize {
                for detect in [false, true] {
                    let (t, m, ok) = link.run(tau, mu, 0.0, detect, (order * 100 + tau * 10 + mu) as u64);
                    assert_eq!((t, m), (tau, mu), "𝓜={order}");
                    assert!(ok.iter().all(|&b| b), "𝓜={order} τ={tau} μ={mu} detect={detect}");
                }
            }
        }
    }
}

#[test]
fn clean_channel_decodes_at_high_snr() {
    let link = Link::new(4);
    let rc = link.code.rate() * (link.set.l() * 2 - 1) as f64 / (link.set.l() * 2) as f64;
    let n0 = ebn0_to_n0(10.0, rc, &link.spec, link.set.p_avg()).unwrap();
    for (tau, mu) in [(1, 3), (2, 1), (3, 4), (4, 1)] {
        let (_, _, ok) = link.run(tau, mu, n0, false, 7 + tau as u64);
        assert!(ok.iter().all(|&b| b), "τ={tau}");
    }
}
