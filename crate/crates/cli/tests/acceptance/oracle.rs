//! Reference computations that share no code with the library.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `∫_0^{e^{-x}} (1 - t^2)^{n-1} dt` by brute-force Simpson.
pub fn phi_simpson(n: u64, x: f64) -> f64 {
    let z = (-x).exp();
    let k = (n - 1) as f64;
    let f = |t: f64| {
        if n == 1 {
            1.0
        } else {
            (k * (-t * t).ln_1p()).exp()
        }
    };
    simpson(f, 0.0, z, 400_000)
}

/// Monte-Carlo estimate of `P(h1_b > x, h2_b > y)` where `b` maximizes
/// `min(h1_j, h2_j)` over `n` i.i.d. unit-exponential pairs. Returns
/// (estimate, standard error).
pub fn joint_tail_mc(n: usize, x: f64, y: f64, draws: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut exp1 = move || -> f64 { -(1.0 - rng.random::<f64>()).ln() };
    let mut hits = 0u64;
    for _ in 0..draws {
        let (mut best, mut b1, mut b2) = (f64::NEG_INFINITY, 0.0, 0.0);
        for _ in 0..n {
            let (a, c) = (exp1(), exp1());
            if a.min(c) > best {
                best = a.min(c);
                b1 = a;
                b2 = c;
            }
        }
        hits += (b1 > x && b2 > y) as u64;
    }
    let p = hits as f64 / draws as f64;
    (p, (p * (1.0 - p) / draws as f64).sqrt())
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// `e^{-tau}` to well beyond double precision, rounded to a multiple of
/// `2^-240` to keep later powers small.
fn exp_neg(tau: &BigRational) -> BigRational {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 1..=80u32 {
        sum += &term;
        term = -(term * tau) / BigRational::from_integer(BigInt::from(k));
        if term.abs() < BigRational::new(BigInt::one(), BigInt::one() << 300usize) {
            break;
        }
    }
    let scale: BigInt = BigInt::one() << 240usize;
    let scaled = (sum * BigRational::from_integer(scale.clone())).round();
    BigRational::new(scaled.to_integer(), scale)
}

/// Secrecy survivor probability via the binomial alternating sum over
/// eavesdropper subsets (including the empty one), evaluated in exact
/// rational arithmetic.
pub fn survivor_alternating(m: u64, n: u64, tau: f64, gamma_e: f64) -> f64 {
    let e = exp_neg(&rational(tau));
    let one = BigRational::one();
    let c = &one / (&one + rational(gamma_e));
    let q = &one - &e;
    let mut g = BigRational::zero();
    let mut binom = BigInt::one();
    let mut ck = BigRational::one();
    for k in 0..=m {
        let base = &q * &ck + &e;
        let mut term =
            num_traits::pow(base, (n - 1) as usize) * BigRational::from_integer(binom.clone());
        if k % 2 == 1 {
            term = -term;
        }
        g += term;
        binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
        ck *= &c;
    }
    g.to_f64().unwrap()
}
