//! The Markoff surface x² + y² + z² = 3xyz over F_p and its move graph.
//!
//! Points are all solutions except (0,0,0). Edges are the three Vieta
//! involutions together with coordinate permutations. Enumeration is O(p²)
//! via a square-root table, so everything here is gated at `MARKOFF_MAX_P`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numth;

/// Enumeration is O(p²) in time and memory; scans above this are refused.
pub const MARKOFF_MAX_P: u64 = 5000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkoffError {
    #[error("p = {0} exceeds the O(p^2) enumeration gate {MARKOFF_MAX_P}")]
    TooLarge(u64),
    #[error("p = {0} is not an odd prime")]
    BadModulus(u64),
    #[error("({0}, {1}, {2}) is not on the surface mod {3}")]
    NotOnSurface(u64, u64, u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MarkoffTriple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub p: u64,
}

/// The eight nontrivial moves: three Vieta involutions and the five
/// nonidentity coordinate permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    R1,
    R2,
    R3,
    SwapXY,
    SwapXZ,
    SwapYZ,
    CycleLeft,
    CycleRight,
}

pub const ALL_MOVES: [Move; 8] = [
    Move::R1,
    Move::R2,
    Move::R3,
    Move::SwapXY,
    Move::SwapXZ,
    Move::SwapYZ,
    Move::CycleLeft,
    Move::CycleRight,
];

impl MarkoffTriple {
    pub fn new(x: u64, y: u64, z: u64, p: u64) -> Result<Self, MarkoffError> {
        let t = MarkoffTriple { x: x % p, y: y % p, z: z % p, p };
        if !t.on_surface() {
            return Err(MarkoffError::NotOnSurface(x, y, z, p));
        }
        Ok(t)
    }

    pub fn on_surface(&self) -> bool {
        let p = self.p as u128;
        let (x, y, z) = (self.x as u128, self.y as u128, self.z as u128);
        (x * x + y * y + z * z) % p == 3 * x % p * y % p * z % p
    }

    pub fn apply(&self, mv: Move) -> Self {
        let p = self.p;
        let m = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
        let (x, y, z) = (self.x, self.y, self.z);
        let (x, y, z) = match mv {
            Move::R1 => ((m(3, m(y, z)) + p - x) % p, y, z),
            Move::R2 => (x, (m(3, m(x, z)) + p - y) % p, z),
            Move::R3 => (x, y, (m(3, m(x, y)) + p - z) % p),
            Move::SwapXY => (y, x, z),
            Move::SwapXZ => (z, y, x),
            Move::SwapYZ => (x, z, y),
            Move::CycleLeft => (y, z, x),
            Move::CycleRight => (z, x, y),
        };
        MarkoffTriple { x, y, z, p }
    }
}

/// All surface points for a fixed p, in sorted code order.
///
/// A point (x,y,z) is stored as the code (x·p + y)·p + z, so point ids are
/// positions in the sorted code vector.
#[derive(Debug)]
pub struct SurfaceIndex {
    p: u64,
    codes: Vec<u64>,
    zero_coord: bool,
}

impl SurfaceIndex {
    /// Enumerates the nonzero solutions in O(p²) using a root table for
    /// z = (3xy ± √(9x²y² − 4(x²+y²)))/2.
    pub fn enumerate(p: u64) -> Result<SurfaceIndex, MarkoffError> {
        if p > MARKOFF_MAX_P {
            return Err(MarkoffError::TooLarge(p));
        }
        if p < 3 || !numth::is_prime(p) {
            return Err(MarkoffError::BadModulus(p));
        }
        const NONE: u32 = u32::MAX;
        let mut root = vec![NONE; p as usize];
        for r in 0..p {
            let s = (r as u128 * r as u128 % p as u128) as usize;
            if root[s] == NONE {
                root[s] = r as u32;
            }
        }
        let inv2 = numth::powmod(2, p - 2, p);
        let m = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
        let mut codes = Vec::new();
        let mut zero_coord = false;
        for x in 0..p {
            let x2 = m(x, x);
            for y in 0..p {
                let b = m(3, m(x, y));
                let c = (x2 + m(y, y)) % p;
                // z² − bz + c = 0
                let disc = (m(b, b) + p - m(4, c) % p) % p;
                let r = root[disc as usize];
                if r == NONE {
                    continue;
                }
                let r = r as u64;
                let z1 = m((b + r) % p, inv2);
                let z2 = m((b + p - r) % p, inv2);
                for &z in &[z1, z2] {
                    if x == 0 && y == 0 && z == 0 {
                        continue;
                    }
                    codes.push((x * p + y) * p + z);
                    if x == 0 || y == 0 || z == 0 {
                        zero_coord = true;
                    }
                    if z1 == z2 {
                        break;
                    }
                }
            }
        }
        codes.sort_unstable();
        codes.dedup();
        Ok(SurfaceIndex { p, codes, zero_coord })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn has_zero_coord_point(&self) -> bool {
        self.zero_coord
    }

    pub fn id_of(&self, t: &MarkoffTriple) -> Option<usize> {
        debug_assert_eq!(t.p, self.p);
        let code = (t.x * self.p + t.y) * self.p + t.z;
        self.codes.binary_search(&code).ok()
    }

    pub fn triple_of(&self, id: usize) -> MarkoffTriple {
        let code = self.codes[id];
        let z = code % self.p;
        let y = code / self.p % self.p;
        let x = code / self.p / self.p;
        MarkoffTriple { x, y, z, p: self.p }
    }

    pub fn iter(&self) -> impl Iterator<Item = MarkoffTriple> + '_ {
        (0..self.len()).map(move |i| self.triple_of(i))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub p: u64,
    pub n_points: usize,
    pub n_components: usize,
    /// Component sizes, descending.
    pub sizes: Vec<usize>,
    pub largest: usize,
    /// Size of the component containing (1,1,1).
    pub cp_size: usize,
    /// Points outside the component of (1,1,1).
    pub exceptional: usize,
    pub zero_coord_flag: bool,
    /// False would be a structural surprise worth flagging upstream.
    pub cp_is_largest: bool,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let gp = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = gp;
            i = gp;
        }
        i
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Connected components of the move graph on `idx`.
pub fn components(idx: &SurfaceIndex) -> ComponentReport {
    let n = idx.len();
    let mut uf = UnionFind::new(n);
    for id in 0..n {
        let t = idx.triple_of(id);
        for mv in ALL_MOVES {
            let u = t.apply(mv);
            debug_assert!(u.on_surface());
            let j = idx
                .id_of(&u)
                .unwrap_or_else(|| panic!("move image {u:?} missing from index"));
            uf.union(id as u32, j as u32);
        }
    }
    let mut count = std::collections::HashMap::new();
    for id in 0..n {
        *count.entry(uf.find(id as u32)).or_insert(0usize) += 1;
    }
    let mut sizes: Vec<usize> = count.values().copied().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let base = MarkoffTriple { x: 1, y: 1, z: 1, p: idx.p() };
    let base_id = idx.id_of(&base).expect("(1,1,1) is always on the surface");
    let cp_root = uf.find(base_id as u32);
    let cp_size = count[&cp_root];
    let largest = sizes.first().copied().unwrap_or(0);
    ComponentReport {
        p: idx.p(),
        n_points: n,
        n_components: sizes.len(),
        largest,
        cp_size,
        exceptional: n - cp_size,
        zero_coord_flag: idx.has_zero_coord_point(),
        cp_is_largest: cp_size == largest,
        sizes,
    }
}

/// The full component of `start`, as triples in index order.
pub fn orbit_of(idx: &SurfaceIndex, start: &MarkoffTriple) -> Result<Vec<MarkoffTriple>, MarkoffError> {
    let start_id = idx
        .id_of(start)
        .ok_or(MarkoffError::NotOnSurface(start.x, start.y, start.z, start.p))?;
    let mut seen = vec![false; idx.len()];
    let mut stack = vec![start_id];
    seen[start_id] = true;
    while let Some(id) = stack.pop() {
        let t = idx.triple_of(id);
        for mv in ALL_MOVES {
            let j = idx.id_of(&t.apply(mv)).unwrap();
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    Ok((0..idx.len())
        .filter(|&i| seen[i])
        .map(|i| idx.triple_of(i))
        .collect())
}

/// Component reports for every odd prime in [lo, hi], in increasing p.
pub fn exceptional_scan(lo: u64, hi: u64) -> Result<Vec<ComponentReport>, MarkoffError> {
    if hi > MARKOFF_MAX_P {
        return Err(MarkoffError::TooLarge(hi));
    }
    let primes: Vec<u64> = numth::primes_in_range(lo.max(3), hi)
        .expect("range below the sieve gate")
        .collect();
    primes
        .par_iter()
        .map(|&p| Ok(components(&SurfaceIndex::enumerate(p)?)))
        .collect()
}
