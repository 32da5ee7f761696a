//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_traits::ToPrimitive;
use plumbing::Lattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Taylor coefficients of `H_{σ,u}` for every `σ`, read off as the
/// coefficient of `h_σ` in `Π_w (1 - [E*_w] t^{a_wu})^{δ_w - 2}` expanded in
/// `Z[H][[t]]`. No characters and no cyclotomic numbers are involved.
/// Returns `out[h_index][j]`.
pub fn group_ring_series(lat: &Arc<Lattice>, u: usize, len: usize) -> Vec<Vec<i64>> {
    let group = lat.group();
    let order = group.order() as usize;
    let elements: Vec<_> = group.elements().collect();
    let mut f = vec![vec![0i64; order]; len];
    f[0][0] = 1;
    for w in 0..lat.len() {
        let e = lat.degree(w) as i64 - 2;
        if e == 0 {
            continue;
        }
        let a = lat.a(u, w).to_usize().unwrap();
        let g = group.class_of_e_star(w);
        // index of h - g for each h
        let minus: Vec<usize> = elements
            .iter()
            .map(|h| group.index_of(&group.add(h, &group.neg(&g))) as usize)
            .collect();
        for _ in 0..e.abs() {
            if e > 0 {
                for j in (a..len).rev() {
                    for h in 0..order {
                        f[j][h] -= f[j - a][minus[h]];
                    }
                }
            } else {
                for j in a..len {
                    for h in 0..order {
                        f[j][h] += f[j - a][minus[h]];
                    }
                }
            }
        }
    }
    (0..order).map(|h| f.iter().map(|row| row[h]).collect()).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random denominator `Π (1 - t^a)^k` and integer numerator.
pub fn random_binomial_data(rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<(usize, u32)>) {
    let nf = rng.gen_range(1..=3);
    let factors: Vec<(usize, u32)> = (0..nf).map(|_| (rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
    loop {
        let len = rng.gen_range(1..=20);
        let numer: Vec<i64> = (0..len).map(|_| rng.gen_range(-5..=5)).collect();
        if numer.iter().any(|&c| c != 0) {
            return (numer, factors);
        }
    }
}

pub fn binomial_poly(factors: &[(usize, u32)]) -> Vec<i64> {
    let mut d = vec![1i64];
    for &(a, k) in factors {
        for _ in 0..k {
            let mut next = vec![0i64; d.len() + a];
            for (i, &c) in d.iter().enumerate() {
                next[i] += c;
                next[i + a] -= c;
            }
            d = next;
        }
    }
    d
}
