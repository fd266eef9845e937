//! k-noncrossing matchings counted as lattice walks.
//!
//! `f_k(2m, 0)`, the number of k-noncrossing perfect matchings on `[2m]`, is
//! the number of walks of length `2m` in `Z^{k-1}` with unit steps `±e_i`
//! that start and end at the origin and never leave the chamber
//! `x_1 >= x_2 >= ... >= x_{k-1} >= 0`. Partial matchings reduce to perfect
//! ones via `f_k(n, ℓ) = C(n, ℓ) f_k(n - ℓ, 0)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;
use parking_lot::{Mutex, RwLock};

use crate::combinat::binomial;
use crate::Count;

type Coords = Vec<u16>;

/// Memoized `f_k(2m, 0)` for one crossing bound `k`.
///
/// A forward pass over `2M` steps yields every `f_k(2m, 0)` with `m <= M` at
/// once, so the cache stores a prefix and is recomputed at a larger horizon
/// when a query goes past it.
#[derive(Debug)]
pub struct WalkCounter {
    k: usize,
    cap: Option<usize>,
    perfect: RwLock<Vec<Count>>,
}

impl WalkCounter {
    pub fn new(k: usize) -> Self {
        assert!(k >= 2, "crossing bound must be at least 2");
        Self {
            k,
            cap: None,
            perfect: RwLock::new(vec![BigUint::from(1u8)]),
        }
    }

    /// A counter that never retains values past `max_m`; larger queries are
    /// recomputed on every call.
    pub fn with_cap(k: usize, max_m: usize) -> Self {
        Self {
            cap: Some(max_m),
            ..Self::new(k)
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `f_k(2m, 0)`.
    pub fn perfect(&self, m: usize) -> Count {
        if let Some(v) = self.perfect.read().get(m) {
            return v.clone();
        }
        let mut cache = self.perfect.write();
        if let Some(v) = cache.get(m) {
            return v.clone();
        }
        let horizon = m.max(2 * cache.len());
        let table = chamber_returns(self.k, horizon);
        let value = table[m].clone();
        let keep = self.cap.map_or(table.len(), |c| (c + 1).min(table.len()));
        if keep > cache.len() {
            *cache = table[..keep].to_vec();
        }
        value
    }

    /// `f_k(2m, 0)` for `m = 0..=max_m`.
    pub fn perfect_upto(&self, max_m: usize) -> Vec<Count> {
        self.perfect(max_m);
        let cache = self.perfect.read();
        if cache.len() > max_m {
            cache[..=max_m].to_vec()
        } else {
            drop(cache);
            chamber_returns(self.k, max_m)
        }
    }

    /// `f_k(n, ℓ)`; zero unless `0 <= ℓ <= n` and `n - ℓ` is even.
    pub fn partial(&self, n: i64, ell: i64) -> Count {
        if n < 0 || ell < 0 || ell > n || (n - ell) % 2 != 0 {
            return BigUint::zero();
        }
        binomial(n, ell) * self.perfect(((n - ell) / 2) as usize)
    }

    /// `M_k(n)`, all k-noncrossing partial matchings on `[n]`.
    pub fn all_partial(&self, n: usize) -> Count {
        let n = n as i64;
        (0..=n).map(|ell| self.partial(n, ell)).sum()
    }
}

/// Number of chamber walks returning to the origin after `2m` steps, for
/// `m = 0..=max_m`.
fn chamber_returns(k: usize, max_m: usize) -> Vec<Count> {
    let dim = k - 1;
    let total = 2 * max_m;
    let origin: Coords = vec![0; dim];
    let mut layer: HashMap<Coords, Count> = HashMap::from([(origin.clone(), BigUint::from(1u8))]);
    let mut returns = vec![BigUint::from(1u8)];
    for step in 1..=total {
        let remaining = total - step;
        let mut next: HashMap<Coords, Count> = HashMap::with_capacity(layer.len() * 2);
        for (state, count) in &layer {
            for i in 0..dim {
                // +e_i keeps the order iff the left neighbour is strictly larger
                if i == 0 || state[i - 1] > state[i] {
                    let mut s = state.clone();
                    s[i] += 1;
                    push(&mut next, s, count, remaining);
                }
                // -e_i keeps the order iff the right neighbour is strictly
                // smaller (or the last coordinate stays >= 0)
                let floor = if i + 1 < dim { state[i + 1] } else { 0 };
                if state[i] > floor {
                    let mut s = state.clone();
                    s[i] -= 1;
                    push(&mut next, s, count, remaining);
                }
            }
        }
        layer = next;
        if step % 2 == 0 {
            returns.push(layer.get(&origin).cloned().unwrap_or_default());
        }
    }
    returns
}

fn push(next: &mut HashMap<Coords, Count>, state: Coords, count: &Count, remaining: usize) {
    debug_assert!(
        state.windows(2).all(|w| w[0] >= w[1]),
        "left the chamber: {state:?}"
    );
    // every unit of coordinate sum costs one step to undo
    if state.iter().map(|&x| x as usize).sum::<usize>() > remaining {
        return;
    }
    *next.entry(state).or_default() += count;
}

fn registry() -> &'static Mutex<HashMap<usize, Arc<WalkCounter>>> {
    static REGISTRY: OnceLock<Mutex<HashMap<usize, Arc<WalkCounter>>>> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

/// Process-wide shared counter for crossing bound `k`.
pub fn counter(k: usize) -> Arc<WalkCounter> {
    registry()
        .lock()
        .entry(k)
        .or_insert_with(|| Arc::new(WalkCounter::new(k)))
        .clone()
}

/// `f_k(2m, 0)`: k-noncrossing perfect matchings on `[2m]`.
pub fn f_perfect(k: usize, m: usize) -> Count {
    counter(k).perfect(m)
}

/// `f_k(n, ℓ)`: k-noncrossing partial matchings on `[n]` with `ℓ` isolated
/// vertices. Zero for negative, out-of-range or parity-violating arguments.
pub fn f_partial(k: usize, n: i64, ell: i64) -> Count {
    counter(k).partial(n, ell)
}

/// `M_k(n) = Σ_ℓ f_k(n, ℓ)`.
pub fn all_partial_matchings(k: usize, n: usize) -> Count {
    counter(k).all_partial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::catalan;

    fn c(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn single_arc_for_every_k() {
        for k in 2..8 {
            assert_eq!(f_perfect(k, 0), c(1));
            assert_eq!(f_perfect(k, 1), c(1));
        }
    }

    #[test]
    fn two_noncrossing_is_catalan() {
        for m in 0..15 {
            assert_eq!(f_perfect(2, m), catalan(m as u64));
        }
        assert_eq!(f_perfect(2, 3), c(5));
    }

    #[test]
    fn three_noncrossing_small_values() {
        assert_eq!(f_perfect(3, 3), c(14));
        // Catalan products C_m C_{m+2} - C_{m+1}^2
        for m in 0..12u64 {
            let want = catalan(m) * catalan(m + 2) - catalan(m + 1) * catalan(m + 1);
            assert_eq!(f_perfect(3, m as usize), want, "m = {m}");
        }
    }

    #[test]
    fn large_k_counts_all_matchings() {
        // (2m-1)!! when k exceeds m
        assert_eq!(f_perfect(6, 4), c(105));
        assert_eq!(f_perfect(9, 5), c(945));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(f_partial(3, 4, 4), c(1));
        assert_eq!(f_partial(3, 4, 0), c(3));
        assert_eq!(f_partial(3, 5, 2), c(0));
        assert_eq!(f_partial(3, 5, 1), c(15));
    }

    #[test]
    fn partial_zero_extension() {
        for (n, ell) in [(-1, 0), (3, -1), (3, 4), (4, 1), (-2, -2), (0, 1)] {
            assert_eq!(f_partial(3, n, ell), c(0), "f(3, {n}, {ell})");
        }
        assert_eq!(f_partial(3, 0, 0), c(1));
    }

    #[test]
    fn all_partial_examples() {
        for k in 2..6 {
            assert_eq!(all_partial_matchings(k, 0), c(1));
            assert_eq!(all_partial_matchings(k, 1), c(1));
        }
        assert_eq!(all_partial_matchings(2, 3), c(4));
        assert_eq!(all_partial_matchings(3, 4), c(10));
        // Motzkin numbers
        let motzkin = [1u64, 1, 2, 4, 9, 21, 51, 127, 323, 835];
        for (n, &want) in motzkin.iter().enumerate() {
            assert_eq!(all_partial_matchings(2, n), c(want));
        }
    }

    #[test]
    fn cache_growth_matches_fresh_computation() {
        let counter = WalkCounter::new(4);
        let small = counter.perfect(3);
        let large = counter.perfect(20);
        let fresh = chamber_returns(4, 20);
        assert_eq!(small, fresh[3]);
        assert_eq!(large, fresh[20]);
        assert_eq!(counter.perfect_upto(20), fresh);
    }

    #[test]
    fn capped_counter_recomputes() {
        let counter = WalkCounter::with_cap(3, 4);
        assert_eq!(counter.perfect(10), f_perfect(3, 10));
        assert!(counter.perfect.read().len() <= 5);
        assert_eq!(counter.perfect_upto(8), chamber_returns(3, 8));
    }
}
