//! Shared helpers for the integration tests.

#![allow(dead_code)]

use polar_scl::polar::CodeConfig;
use polar_scl::wdist::dmin_lower_via_rows;

/// Exact number of minimum-weight codewords by enumerating affine flats.
///
/// Every codeword of a polar code lies in `RM(r, n)` with `r` the largest
/// monomial degree among its rows, and the minimum distance equals that of
/// `RM(r, n)`. The minimum-weight codewords of `RM(r, n)` are exactly the
/// indicators of `(n - r)`-dimensional affine subspaces of `F_2^n`, so it
/// suffices to test each flat for membership in the code.
pub fn a_dmin_by_flats(cfg: &CodeConfig) -> (usize, u64) {
    min_weight_flats(cfg, |_| true)
}

/// Counts the minimum-weight codewords of the polar code `cfg` whose `u`
/// also satisfies `accept` (e.g. a CRC over the information bits). The
/// weight is that of the polar code itself.
pub fn min_weight_flats(cfg: &CodeConfig, accept: impl Fn(&[u8]) -> bool) -> (usize, u64) {
    let dmin = dmin_lower_via_rows(cfg).unwrap();
    let d = dmin.trailing_zeros() as usize;
    let member = Membership::new(cfg);
    let mut count = 0u64;
    for_each_flat(cfg.n() as usize, d, |points| {
        let x = points.iter().fold(0u128, |acc, &p| acc | 1 << p);
        count += member.test(x, &accept) as u64;
    });
    (dmin, count)
}

/// Counts codewords of weight `1.5 d_min` (with `d_min = 2^t`, `t >= 2`)
/// whose `u` satisfies `accept`.
///
/// Such codewords of `RM(r, n)` are affine images of
/// `x_1...x_{r-2}(x_{r-1}x_r + x_{r+1}x_{r+2})`: the product of the indicator
/// of a `(t + 2)`-dimensional flat and a quadratic function on that flat of
/// weight `1.5 d_min`. The support spans the flat, so each codeword arises
/// from exactly one (flat, quadratic) pair.
pub fn three_halves_weight_words(cfg: &CodeConfig, accept: impl Fn(&[u8]) -> bool) -> (usize, u64) {
    let dmin = dmin_lower_via_rows(cfg).unwrap();
    let t = dmin.trailing_zeros() as usize;
    assert!(t >= 2, "needs d_min >= 4");
    let dim = t + 2;
    let weight = 3 * dmin / 2;
    let quads = quadratics_of_weight(dim, weight);
    let member = Membership::new(cfg);
    let mut count = 0u64;
    if dim <= cfg.n() as usize {
        for_each_flat(cfg.n() as usize, dim, |points| {
            for &q in &quads {
                let x = points
                    .iter()
                    .enumerate()
                    .filter(|(y, _)| (q >> y) & 1 == 1)
                    .fold(0u128, |acc, (_, &p)| acc | 1 << p);
                count += member.test(x, &accept) as u64;
            }
        });
    }
    (weight, count)
}

/// Truth tables (bit `y` = value at `y`) of every function of degree at most
/// 2 on `F_2^dim` with the given weight.
fn quadratics_of_weight(dim: usize, weight: usize) -> Vec<u64> {
    assert!(dim <= 6);
    let size = 1usize << dim;
    let monomial = |mask: usize| {
        (0..size)
            .filter(|&y| y & mask == mask)
            .fold(0u64, |acc, y| acc | 1 << y)
    };
    let mut monomials = vec![monomial(0)];
    for i in 0..dim {
        monomials.push(monomial(1 << i));
        for j in i + 1..dim {
            monomials.push(monomial(1 << i | 1 << j));
        }
    }
    (0u64..1 << monomials.len())
        .map(|sel| {
            monomials
                .iter()
                .enumerate()
                .filter(|(j, _)| (sel >> j) & 1 == 1)
                .fold(0u64, |acc, (_, &m)| acc ^ m)
        })
        .filter(|f| f.count_ones() as usize == weight)
        .collect()
}

/// Code membership test on 128-bit words, bit `i` being position `i + 1`.
struct Membership {
    n: u32,
    len: usize,
    frozen: u128,
}

impl Membership {
    fn new(cfg: &CodeConfig) -> Self {
        assert!(cfg.len() <= 128);
        let frozen = cfg
            .frozen_mask()
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        Self {
            n: cfg.n(),
            len: cfg.len(),
            frozen,
        }
    }

    fn test(&self, x: u128, accept: impl Fn(&[u8]) -> bool) -> bool {
        let u = transform(x, self.n);
        u & self.frozen == 0
            && accept(
                &(0..self.len)
                    .map(|i| (u >> i & 1) as u8)
                    .collect::<Vec<_>>(),
            )
    }
}

/// `x F^{⊗n}` on a packed word; the transform is its own inverse.
pub fn transform(mut x: u128, n: u32) -> u128 {
    // Positions whose index has bit `s` clear.
    const LOW: [u128; 7] = [
        0x5555_5555_5555_5555_5555_5555_5555_5555,
        0x3333_3333_3333_3333_3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f_0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff_00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff_0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff_0000_0000_ffff_ffff,
        0x0000_0000_0000_0000_ffff_ffff_ffff_ffff,
    ];
    for s in 0..n as usize {
        x ^= (x >> (1 << s)) & LOW[s];
    }
    x
}

/// Calls `f` with the points of every `dim`-dimensional affine flat of
/// `F_2^n`, listed so that `points[y] = offset + sum_j y_j b_j`.
fn for_each_flat(n: usize, dim: usize, mut f: impl FnMut(&[usize])) {
    let mut points = vec![0usize; 1 << dim];
    for pivots in subsets(n, dim) {
        // Free coordinates of each reduced echelon basis row: non-pivot
        // positions above its pivot.
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..n).filter(|q| !pivots.contains(q)).collect())
            .collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        let reps: Vec<usize> = (0..n).filter(|q| !pivots.contains(q)).collect();
        for assign in 0u64..(1u64 << total_free) {
            let mut bit = 0;
            let basis: Vec<usize> = pivots
                .iter()
                .zip(&free)
                .map(|(&p, fr)| {
                    let mut v = 1usize << p;
                    for &q in fr {
                        if (assign >> bit) & 1 == 1 {
                            v |= 1 << q;
                        }
                        bit += 1;
                    }
                    v
                })
                .collect();
            let span: Vec<usize> = (0..1usize << dim)
                .map(|mask| {
                    basis
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| (mask >> j) & 1 == 1)
                        .fold(0, |acc, (_, &b)| acc ^ b)
                })
                .collect();
            for rmask in 0..1usize << reps.len() {
                let shift = reps
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (rmask >> j) & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | 1 << q);
                for (p, &s) in points.iter_mut().zip(&span) {
                    *p = s ^ shift;
                }
                f(&points);
            }
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
