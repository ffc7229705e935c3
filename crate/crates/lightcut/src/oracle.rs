//! Exact and heuristic MaxCut references.

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Parallelism};
use crate::graph::UndirectedGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest instance accepted by exhaustive enumeration.
pub const DEFAULT_SIZE_CAP: usize = 28;

/// A two-colouring of the nodes together with its cut value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutAssignment {
    pub bits: Vec<u8>,
    pub value: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_optimal: Option<bool>,
}

/// Number of edges with endpoints on different sides.
pub fn cut_value(g: &UndirectedGraph, bits: &[u8]) -> u64 {
    debug_assert_eq!(bits.len(), g.n());
    g.edges()
        .iter()
        .filter(|&&(i, j)| bits[i] != bits[j])
        .count() as u64
}

fn bits_from_mask(n: usize, mask: u64) -> Vec<u8> {
    (0..n).map(|v| ((mask >> v) & 1) as u8).collect()
}

/// Bit-reversed mask within n bits, so that numeric order on the result is
/// lexicographic order on the bit sequence (b_0, b_1, …, b_{n−1}).
fn lex_key(mask: u64, n: usize) -> u64 {
    mask.reverse_bits() >> (64 - n)
}

/// Exhaustive maximum cut. Node 0 is pinned to side 0 (the cut is invariant
/// under a global flip), so 2^{N−1} assignments are scanned. Ties are broken
/// toward the lexicographically smallest bit sequence, which makes the
/// result independent of chunking and thread count.
pub fn brute_force_maxcut(g: &UndirectedGraph, par: Parallelism) -> Result<CutAssignment> {
    let n = g.n();
    if n > DEFAULT_SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            n,
            cap: DEFAULT_SIZE_CAP,
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    // Adjacency bit masks let each assignment be scored in O(N) popcounts:
    // cut(S) = Σ_{v∈S} |adj(v) \ S|.
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    let total = 1u64 << (n - 1);
    let chunks = 256u64.min(total);
    let chunk_len = total.div_ceil(chunks);
    let best_per_chunk = map_indexed(par, chunks as usize, |c| {
        let lo = c as u64 * chunk_len;
        let hi = (lo + chunk_len).min(total);
        let mut best = (0u64, u64::MAX);
        for half in lo..hi {
            let mask = half << 1; // node 0 stays on side 0
            let mut cut = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                cut += (adj[v] & !mask).count_ones() as u64;
                rest &= rest - 1;
            }
            if cut > best.0 || (cut == best.0 && lex_key(mask, n) < lex_key(best.1, n)) {
                best = (cut, mask);
            }
        }
        best
    });
    let (value, mask) = best_per_chunk
        .into_iter()
        .fold((0u64, u64::MAX), |acc, b| {
            if b.0 > acc.0 || (b.0 == acc.0 && lex_key(b.1, n) < lex_key(acc.1, n)) {
                b
            } else {
                acc
            }
        });
    Ok(CutAssignment {
        bits: bits_from_mask(n, mask),
        value,
        is_optimal: Some(true),
    })
}

/// Greedy bit-flip post-processing: sweep the nodes in a seed-shuffled
/// order, flipping any bit whose move strictly increases the cut, until a
/// full sweep changes nothing. The output is locally optimal under single
/// flips and never worse than the input.
pub fn greedy_flip(g: &UndirectedGraph, bits: &[u8], seed: u64) -> Result<CutAssignment> {
    if bits.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: bits.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = bits.to_vec();
    let mut order: Vec<usize> = (0..g.n()).collect();
    loop {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            let mut gain: i64 = 0;
            for &u in g.neighbors(v) {
                if bits[u] == bits[v] {
                    gain += 1;
                } else {
                    gain -= 1;
                }
            }
            if gain > 0 {
                bits[v] ^= 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let value = cut_value(g, &bits);
    Ok(CutAssignment {
        bits,
        value,
        is_optimal: None,
    })
}

pub fn approximation_ratio(achieved: f64, c_max: u64) -> Result<f64> {
    if c_max == 0 {
        return Err(Error::InvalidArgument("nonpositive maximum cut".into()));
    }
    Ok(achieved / c_max as f64)
}
