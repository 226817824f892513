//! Integer factorization for invariant factors.
//!
//! Trial division by every prime below 10^6, then Brent's variant of Pollard
//! rho on what remains. Primality uses Miller-Rabin with the first twelve
//! prime bases, which is deterministic below 2^64 (and a strong probable-prime
//! test above). Rho runs against a wall-clock budget; cofactors it cannot split
//! in time are reported back unfactored rather than guessed at.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::modp::{mul_mod, pow_mod};

const TRIAL_LIMIT: u32 = 1_000_000;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Default wall-clock allowance for Pollard rho.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(2);

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=limit).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n > 1");
    let d = &nm1 >> s;
    'witness: for &a in &MR_BASES {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `|n|`, possibly partial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Primes in ascending order with their exponents.
    pub primes: Vec<(BigInt, u32)>,
    /// Composite cofactors that resisted splitting, with multiplicity.
    pub unfactored: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.primes.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

/// Factors `|n|` for `n != 0`. Units factor as the empty product.
pub fn factorize(n: &BigInt, budget: Duration) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let deadline = Instant::now() + budget;
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut unfactored: BTreeMap<BigUint, u32> = BTreeMap::new();

    let mut rest = n.magnitude().clone();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *primes.entry(pb.clone()).or_default() += 1;
        }
    }

    let bound = BigUint::from(TRIAL_LIMIT);
    let mut stack = vec![(rest, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m < &bound * &bound || is_probable_prime(&m) {
            // every prime below the trial limit is gone, so m below its square is prime
            *primes.entry(m).or_default() += mult;
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            stack.push((r, mult * 2));
            continue;
        }
        match split(&m, deadline) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => *unfactored.entry(m).or_default() += mult,
        }
    }

    let to_signed = |m: BTreeMap<BigUint, u32>| {
        m.into_iter()
            .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e))
            .collect()
    };
    Factorization { primes: to_signed(primes), unfactored: to_signed(unfactored) }
}

/// Finds a nontrivial divisor of the odd composite `n` with Brent's cycle finding.
fn split(n: &BigUint, deadline: Instant) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32.. {
        if Instant::now() > deadline {
            return None;
        }
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x;
        let mut ys;
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r: u64 = 1;
        let batch = 128;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += batch;
                if !g.is_one() && &g == n {
                    // overshot: step back one at a time from ys
                    loop {
                        ys = f(&ys);
                        let diff = if x > ys { &x - &ys } else { &ys - &x };
                        g = diff.gcd(n);
                        if !g.is_one() {
                            break;
                        }
                    }
                }
            }
            if !g.is_one() {
                break;
            }
            r *= 2;
            if Instant::now() > deadline {
                return None;
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!()
}
