#![allow(dead_code)]

use jumploci::abelian::{monomial_assignment, AbelianizationMap, UserImages};
use jumploci::fox::{alexander_matrix, AlexanderMatrix};
use jumploci::presentation::{Presentation, Syllable, Word};
use jumploci::{FiniteCharacter, Laurent, Monomial, VarContext};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// Sum of divisors by trial division.
pub fn divisor_sum(n: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d;
            if d * d != n {
                s += n / d;
            }
        }
        d += 1;
    }
    s
}

pub fn trefoil() -> (Presentation, AbelianizationMap, AlexanderMatrix) {
    let p = Presentation::parse("gens: a b\nrel: a^2 b^-3").unwrap();
    let ctx = VarContext::free(&["t"]);
    let images = vec![Monomial::from_free(vec![3]), Monomial::from_free(vec![2])];
    let phi = monomial_assignment(&p, Some(UserImages { ctx, images })).unwrap();
    let a = alexander_matrix(&p, &phi);
    (p, phi, a)
}

pub fn random_word(rng: &mut impl Rng, generators: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_syllables((0..len).map(|_| {
        let g = rng.gen_range(0..generators);
        let mut e = rng.gen_range(-5..=5i64);
        while e == 0 {
            e = rng.gen_range(-5..=5i64);
        }
        Syllable::new(g, e)
    }))
}

/// Dense rational polynomial gcd by plain Euclid, low degree first,
/// normalized monic.
pub fn rational_gcd(a: &[i64], b: &[i64]) -> Vec<Ratio<i128>> {
    fn trim(v: &mut Vec<Ratio<i128>>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    let mut x: Vec<Ratio<i128>> = a.iter().map(|&c| Ratio::from_integer(c as i128)).collect();
    let mut y: Vec<Ratio<i128>> = b.iter().map(|&c| Ratio::from_integer(c as i128)).collect();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let mut r = x.clone();
        while r.len() >= y.len() && !r.is_empty() {
            let k = r.len() - y.len();
            let q = *r.last().unwrap() / *y.last().unwrap();
            for (j, c) in y.iter().enumerate() {
                r[k + j] -= q * c;
            }
            trim(&mut r);
        }
        x = std::mem::replace(&mut y, r);
    }
    let lead = *x.last().unwrap();
    x.iter().map(|c| c / lead).collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime `p = 1 mod m` above 10^6 and an element of exact order `m` in
/// `F_p`.
pub fn prime_with_root(m: u64) -> (u64, u64) {
    let mut p = (1_000_000 / m + 1) * m + 1;
    while !is_prime(p) {
        p += m;
    }
    let qs = prime_factors(m);
    for g in 2..p {
        let w = pow_mod(g, (p - 1) / m, p);
        if qs.iter().all(|q| pow_mod(w, m / q, p) != 1) {
            return (p, w);
        }
    }
    unreachable!()
}

/// Rank of `A` reduced modulo a prime above `p`, with `zeta_m -> w`. Never
/// exceeds the rank over `Q(zeta_m)`.
pub fn rank_mod_p(a: &AlexanderMatrix, chi: &FiniteCharacter) -> usize {
    let chi = chi.normalized();
    let m = chi.modulus();
    let (p, w) = prime_with_root(m);
    let eval = |poly: &Laurent| -> u64 {
        let mut acc = 0u64;
        for (mono, c) in poly.terms() {
            let k = chi.exponent_of(mono) as u64;
            let c = c.mod_floor(&num_bigint::BigInt::from(p)).to_u64().unwrap();
            acc = (acc + c * pow_mod(w, k, p) % p) % p;
        }
        acc
    };
    let mut rows: Vec<Vec<u64>> = (0..a.rows()).map(|i| (0..a.cols()).map(|j| eval(a.entry(i, j))).collect()).collect();
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `sum_i (alpha(g_i) - 1) A_ij`, one polynomial per column; all zero for a
/// genuine Alexander matrix.
pub fn fundamental_row_products(a: &AlexanderMatrix) -> Vec<Laurent> {
    let ctx = a.context();
    (0..a.cols())
        .map(|j| {
            (0..a.rows()).fold(Laurent::zero(ctx), |acc, i| {
                let unit = Laurent::monomial(ctx, a.map().image(i).clone(), 1.into());
                let factor = &unit - &Laurent::one(ctx);
                &acc + &(&factor * a.entry(i, j))
            })
        })
        .collect()
}
