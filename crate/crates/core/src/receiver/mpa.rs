use super::llr::LLR_CLAMP;
use crate::coding::{sign_slot, LdpcCode};
use crate::{Error, Result};

/// Default iteration cap of the joint decoder.
pub const DEFAULT_MAX_ITERATIONS: usize = 10;

/// LDPC checks and per-row parity checks over one user's `M × N` frame bits.
///
/// Variable `m·N + n` is frame bit `(m, n)`. The first `ldpc_checks` checks
/// are LDPC rows attached through the column-major interleaver; the rest are
/// one parity check per frame row over its `L` sign slots. Frame bits past
/// the codeword (interleaver padding) are known zeros.
#[derive(Debug, Clone)]
pub struct JointTannerGraph {
    rows: usize,
    n: usize,
    ldpc_checks: usize,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edges of each variable, as indices into `edge_var`.
    var_edges: Vec<Vec<usize>>,
    /// Frame variable holding codeword bit `k`.
    codeword_vars: Vec<usize>,
    padded: Vec<bool>,
}

impl JointTannerGraph {
    pub fn new(code: &LdpcCode, rows: usize, n: usize, mod_bits: usize) -> Result<JointTannerGraph> {
        if rows == 0 || mod_bits == 0 || n % mod_bits != 0 || code.n() > rows * (n - 1) {
            return Err(Error::Size(format!(
                "a {}-bit codeword does not fit {rows} rows of {n} bits",
                code.n()
            )));
        }
        let symbols = n / mod_bits;
        let codeword_vars: Vec<usize> = (0..code.n()).map(|k| (k % rows) * n + k / rows).collect();
        let mut padded = vec![false; rows * n];
        for m in 0..rows {
            for c in 0..n - 1 {
                padded[m * n + c] = c * rows + m >= code.n();
            }
        }
        let mut check_start = vec![0];
        let mut edge_var = Vec::new();
        for row in code.checks() {
            edge_var.extend(row.iter().map(|&k| codeword_vars[k]));
            check_start.push(edge_var.len());
        }
        for m in 0..rows {
            edge_var.extend((0..symbols).map(|l| m * n + sign_slot(l, mod_bits)));
            check_start.push(edge_var.len());
        }
        let mut var_edges = vec![Vec::new(); rows * n];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[v].push(e);
        }
        Ok(JointTannerGraph {
            rows,
            n,
            ldpc_checks: code.checks().len(),
            check_start,
            edge_var,
            var_edges,
            codeword_vars,
            padded,
        })
    }

    pub fn variables(&self) -> usize {
        self.rows * self.n
    }

    pub fn checks(&self) -> usize {
        self.check_start.len() - 1
    }

    pub fn ldpc_checks(&self) -> usize {
        self.ldpc_checks
    }

    /// Variables of check `c`.
    pub fn check_vars(&self, c: usize) -> &[usize] {
        &self.edge_var[self.check_start[c]..self.check_start[c + 1]]
    }

    pub fn is_padded(&self, v: usize) -> bool {
        self.padded[v]
    }

    pub fn codeword_vars(&self) -> &[usize] {
        &self.codeword_vars
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpaOutput {
    pub info: Vec<u8>,
    pub codeword: Vec<u8>,
    /// The hard decision satisfies every LDPC check.
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoding on the joint graph.
///
/// Each iteration updates all checks (tanh rule), then every variable's
/// posterior `channel + Σ incoming`, then the extrinsic variable-to-check
/// messages. A bit is decided as 1 when its posterior is negative, matching
/// `LLR = log P(0)/P(1)`. Decoding stops once the LDPC syndrome is zero.
pub fn joint_mpa_decode(
    llrs: &[f64],
    graph: &JointTannerGraph,
    code: &LdpcCode,
    max_iterations: usize,
) -> Result<MpaOutput> {
    if llrs.len() != graph.variables() {
        return Err(Error::Size(format!(
            "{} LLRs for {} variables",
            llrs.len(),
            graph.variables()
        )));
    }
    if llrs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("channel LLRs must be finite".into()));
    }
    let channel: Vec<f64> = llrs
        .iter()
        .enumerate()
        .map(|(v, &x)| {
            if graph.padded[v] {
                LLR_CLAMP
            } else {
                x.clamp(-LLR_CLAMP, LLR_CLAMP)
            }
        })
        .collect();
    let edges = graph.edge_var.len();
    let mut to_check: Vec<f64> = graph.edge_var.iter().map(|&v| channel[v]).collect();
    let mut to_var = vec![0.0f64; edges];
    let mut posterior = channel.clone();
    let mut tanh_buf = Vec::new();
    let mut codeword = hard(&posterior, graph);
    let mut iterations = 0;
    let mut converged = code.is_codeword(&codeword);
    while !converged && iterations < max_iterations.max(1) {
        iterations += 1;
        for c in 0..graph.checks() {
            let (start, end) = (graph.check_start[c], graph.check_start[c + 1]);
            check_update(&to_check[start..end], &mut to_var[start..end], &mut tanh_buf);
        }
        for (v, edges) in graph.var_edges.iter().enumerate() {
            let total = channel[v] + edges.iter().map(|&e| to_var[e]).sum::<f64>();
            posterior[v] = total;
            for &e in edges {
                to_check[e] = (total - to_var[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
        codeword = hard(&posterior, graph);
        converged = code.is_codeword(&codeword);
    }
    Ok(MpaOutput {
        info: code.extract_info(&codeword),
        codeword,
        converged,
        iterations,
    })
}

fn hard(posterior: &[f64], graph: &JointTannerGraph) -> Vec<u8> {
    graph
        .codeword_vars
        .iter()
        .map(|&v| u8::from(posterior[v] < 0.0))
        .collect()
}

/// `out[e] = 2 atanh(Π_{e' ≠ e} tanh(in[e'] / 2))` via prefix/suffix products.
fn check_update(incoming: &[f64], out: &mut [f64], buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend(incoming.iter().map(|&x| (x / 2.0).tanh()));
    let limit = (LLR_CLAMP / 2.0).tanh();
    let mut prefix = 1.0;
    for (o, &t) in out.iter_mut().zip(buf.iter()) {
        *o = prefix;
        prefix *= t;
    }
    let mut suffix = 1.0;
    for (o, &t) in out.iter_mut().zip(buf.iter()).rev() {
        *o = 2.0 * (*o * suffix).clamp(-limit, limit).atanh();
        suffix *= t;
    }
}
