//! Integer plumbing: deterministic Miller–Rabin, Pollard rho, divisor counts
//! τ_z, the smooth-number count ψ(x, y), primitive prime divisors of 2ⁿ−1 and
//! prime range iteration.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumthError {
    #[error("range too large: {0}")]
    RangeTooLarge(String),
}

/// ψ sieve guard: O(x) bits of memory.
pub const PSI_MAX_X: u64 = 100_000_000;
/// 2ⁿ−1 must stay factorable inside the u64 guard.
pub const PPD_MAX_N: u32 = 40;
/// primes_in_range guard.
pub const PRIME_RANGE_MAX: u64 = 1_000_000_000;

/// Complete factorization of a positive 64-bit integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent) with primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Recomposes the integer; used as a self-check.
    pub fn recompose(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pe = 1u64;
                for _ in 0..=e {
                    next.push(d * pe);
                    pe = pe.saturating_mul(p);
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for u64 (fixed base set covers all 64-bit integers).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho (Brent's variant) with a deterministic parameter schedule.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n % 2 == 1 && !is_prime(n) && n > 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factorizes `1 ≤ n ≤ 2^64 − 1` via trial division then Pollard rho.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut primes: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { n, factors }
}

/// τ_z(n): the number of divisors d | n with d ≤ z.
pub fn tau_z(n: u64, z: f64) -> u64 {
    factorize(n)
        .divisors()
        .into_iter()
        .filter(|&d| (d as f64) <= z)
        .count() as u64
}

/// ψ(x, y): the number of y-smooth integers in [1, x], by sieve.
pub fn psi(x: u64, y: u64) -> Result<u64, NumthError> {
    assert!(x >= 1 && y >= 2);
    if x > PSI_MAX_X {
        return Err(NumthError::RangeTooLarge(format!("psi x = {x} exceeds {PSI_MAX_X}")));
    }
    if y >= x {
        return Ok(x);
    }
    // rough[i] set when i has a prime factor > y
    let mut rough = BitVec::new(x as usize + 1);
    let mut seg = SieveIter::new(y + 1, x);
    while let Some(q) = seg.next_prime() {
        let mut m = q;
        while m <= x {
            rough.set(m as usize);
            m += q;
        }
    }
    let mut count = 0u64;
    for i in 1..=x {
        if !rough.get(i as usize) {
            count += 1;
        }
    }
    Ok(count)
}

/// One row of the ψ bound audit table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PsiAuditRow {
    pub x: u64,
    pub y: u64,
    pub u: f64,
    pub psi: u64,
    /// ψ(x,y) / (e^{−u/2}·x): the empirical constant for this cell.
    pub ratio: f64,
}

/// Tabulates ψ(x,y) against the shape `c₀·e^{−u/2}·x`; the max ratio is the
/// empirical c₀ over the grid.
pub fn bound_audit_psi(x_grid: &[u64], y_grid: &[u64]) -> Result<Vec<PsiAuditRow>, NumthError> {
    let mut rows = Vec::new();
    for &x in x_grid {
        for &y in y_grid {
            let u = (x as f64).ln() / (y as f64).ln();
            let count = psi(x, y)?;
            let ratio = count as f64 / ((-u / 2.0).exp() * x as f64);
            rows.push(PsiAuditRow { x, y, u, psi: count, ratio });
        }
    }
    Ok(rows)
}

/// Primes q | 2ⁿ−1 whose multiplicative order of 2 is exactly n
/// (equivalently: q divides no 2ᵈ−1 with d < n). Ascending.
pub fn primitive_prime_divisors(n: u32) -> Result<Vec<u64>, NumthError> {
    if n < 1 || n > PPD_MAX_N {
        return Err(NumthError::RangeTooLarge(format!("2^{n}-1 outside guard n <= {PPD_MAX_N}")));
    }
    let m = (1u64 << n) - 1;
    if m == 1 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for (q, _) in factorize(m).factors {
        if q == 1 {
            continue;
        }
        // order of 2 mod q
        let fq = factorize(q - 1);
        let two = crate::ff::FieldElement::new(2 % q, q);
        let ord = crate::ff::mult_order(&two, (q - 1) as u128, &fq.factors).unwrap();
        if ord == n as u128 {
            out.push(q);
        }
    }
    Ok(out)
}

/// Ascending primes in [lo, hi], streamed by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<SieveIter, NumthError> {
    if hi > PRIME_RANGE_MAX {
        return Err(NumthError::RangeTooLarge(format!("hi = {hi} exceeds {PRIME_RANGE_MAX}")));
    }
    Ok(SieveIter::new(lo, hi))
}

const SEGMENT: u64 = 1 << 16;

/// Segmented sieve iterator over primes in a fixed range.
pub struct SieveIter {
    base_primes: Vec<u64>,
    next: u64,
    hi: u64,
    seg_start: u64,
    seg: Vec<bool>,
}

impl SieveIter {
    fn new(lo: u64, hi: u64) -> Self {
        let lo = lo.max(2);
        let root = (hi as f64).sqrt() as u64 + 2;
        let mut sieve = vec![true; root as usize + 1];
        let mut base_primes = Vec::new();
        for i in 2..=root as usize {
            if sieve[i] {
                base_primes.push(i as u64);
                let mut m = i * i;
                while m <= root as usize {
                    sieve[m] = false;
                    m += i;
                }
            }
        }
        let mut it = SieveIter { base_primes, next: lo, hi, seg_start: 0, seg: Vec::new() };
        if lo <= hi {
            it.load_segment(lo);
        }
        it
    }

    fn load_segment(&mut self, start: u64) {
        let end = (start + SEGMENT - 1).min(self.hi);
        let len = (end - start + 1) as usize;
        self.seg_start = start;
        self.seg = vec![true; len];
        for &p in &self.base_primes {
            if p * p > end {
                break;
            }
            let mut m = (start.div_ceil(p) * p).max(p * p);
            while m <= end {
                self.seg[(m - start) as usize] = false;
                m += p;
            }
        }
    }

    fn next_prime(&mut self) -> Option<u64> {
        loop {
            if self.next > self.hi {
                return None;
            }
            let seg_end = self.seg_start + self.seg.len() as u64 - 1;
            if self.next > seg_end {
                self.load_segment(seg_end + 1);
                continue;
            }
            let idx = (self.next - self.seg_start) as usize;
            let n = self.next;
            self.next += 1;
            if self.seg[idx] {
                return Some(n);
            }
        }
    }
}

impl Iterator for SieveIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.next_prime()
    }
}

struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    fn new(len: usize) -> Self {
        BitVec { words: vec![0; len / 64 + 1] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
}
