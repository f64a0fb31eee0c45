#![allow(dead_code)]

use desir_core::rational::{int, ratio};
use desir_core::symmetry::permute_gamble;
use desir_core::{Domain, Gamble, Permutation, Rational};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_gamble(domain: impl Into<Domain>, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Gamble {
    let domain = domain.into();
    let values = (0..domain.size()).map(|_| int(rng.gen_range(lo..=hi))).collect();
    Gamble::new(domain, values).unwrap()
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// A random point of the simplex with small rational coordinates.
pub fn simplex_point(rng: &mut ChaCha8Rng, parts: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..parts).map(|_| rng.gen_range(0..=6)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        let mut v = vec![Rational::zero(); parts];
        v[0] = int(1);
        return v;
    }
    weights.iter().map(|&w| ratio(w, total)).collect()
}

/// All permutations of `0..n`.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::new(prefix.clone()).unwrap());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `ex^N` as the literal average over all `N!` permuted gambles.
pub fn brute_force_projection(f: &Gamble) -> Gamble {
    let Domain::Sequences(space) = f.domain() else {
        panic!("sequence gamble expected")
    };
    let perms = all_permutations(space.length());
    let mut acc = Gamble::zero(space.clone());
    for p in &perms {
        acc = acc.try_add(&permute_gamble(p, f).unwrap()).unwrap();
    }
    acc.scale(&ratio(1, perms.len() as i64))
}
