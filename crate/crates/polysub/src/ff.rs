//! Exact arithmetic in `F_p` and in the quadratic extension `F_{p²} = F_p[ω]/(ω²−d)`.
//!
//! All products go through `u128` intermediates, so any odd prime modulus below
//! `2^62` is safe. Elements are immutable values; binary operations panic on a
//! modulus mismatch (the CLI validates moduli before mixing user inputs).

use std::fmt;

use thiserror::Error;

/// Moduli must stay below this bound so that double-width products cannot overflow.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FfError {
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("multiplicative order of zero")]
    ZeroElement,
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// Common interface of `F_p` and `F_{p²}` elements.
///
/// Every element carries its own field descriptor, so `zero()`/`one()`/`from_int()`
/// are instance methods: they produce elements of the same field as `self`.
pub trait Field:
    Copy + Eq + std::hash::Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Result<Self, FfError>;
    fn pow(&self, e: u128) -> Self;
    /// Embeds a small signed integer into the field of `self`.
    fn from_int(&self, n: i64) -> Self;
    fn same_field(&self, rhs: &Self) -> bool;
    /// A total order on elements of one field, for deterministic listings.
    fn sort_key(&self) -> (u64, u64);
}

/// A residue modulo an odd prime `p < 2^62`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 3 && modulus % 2 == 1, "modulus must be an odd prime >= 3");
        assert!(modulus < MAX_MODULUS, "modulus must be < 2^62");
        FieldElement { value: value % modulus, modulus }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = ((value as i128 % m) + m) % m;
        Self::new(v as u64, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(
            self.modulus, rhs.modulus,
            "field elements with different moduli: {} vs {}",
            self.modulus, rhs.modulus
        );
    }
}

impl Field for FieldElement {
    fn characteristic(&self) -> u64 {
        self.modulus
    }

    fn zero(&self) -> Self {
        FieldElement { value: 0, modulus: self.modulus }
    }

    fn one(&self) -> Self {
        FieldElement { value: 1, modulus: self.modulus }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut v = self.value + rhs.value;
        if v >= self.modulus {
            v -= self.modulus;
        }
        FieldElement { value: v, modulus: self.modulus }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        FieldElement { value: v, modulus: self.modulus }
    }

    fn neg(&self) -> Self {
        let v = if self.value == 0 { 0 } else { self.modulus - self.value };
        FieldElement { value: v, modulus: self.modulus }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = (self.value as u128 * rhs.value as u128 % self.modulus as u128) as u64;
        FieldElement { value: v, modulus: self.modulus }
    }

    fn inv(&self) -> Result<Self, FfError> {
        if self.value == 0 {
            return Err(FfError::InverseOfZero);
        }
        // Fermat: p is prime.
        Ok(self.pow(self.modulus as u128 - 2))
    }

    fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn from_int(&self, n: i64) -> Self {
        FieldElement::from_i64(n, self.modulus)
    }

    fn same_field(&self, rhs: &Self) -> bool {
        self.modulus == rhs.modulus
    }

    fn sort_key(&self) -> (u64, u64) {
        (self.value, 0)
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

/// Legendre symbol of `a` modulo its (odd prime) modulus, in {-1, 0, +1}.
pub fn legendre(a: &FieldElement) -> i32 {
    if a.is_zero() {
        return 0;
    }
    let r = a.pow((a.modulus() as u128 - 1) / 2);
    if r.value() == 1 {
        1
    } else {
        -1
    }
}

/// Square roots of `a` mod p: `[]` for a non-residue, `[0]` for zero,
/// `[r, p-r]` with `r < p-r` otherwise. Tonelli–Shanks.
pub fn sqrt_mod(a: &FieldElement) -> Vec<FieldElement> {
    let p = a.modulus();
    if a.is_zero() {
        return vec![*a];
    }
    if legendre(a) != 1 {
        return vec![];
    }
    let r = if p % 4 == 3 {
        a.pow((p as u128 + 1) / 4)
    } else {
        tonelli_shanks(a)
    };
    let r2 = r.neg();
    let (lo, hi) = if r.value() < r2.value() { (r, r2) } else { (r2, r) };
    vec![lo, hi]
}

fn tonelli_shanks(a: &FieldElement) -> FieldElement {
    let p = a.modulus();
    // p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let nr = FieldElement::new(smallest_nonresidue(p), p);
    let mut m = s;
    let mut c = nr.pow(q as u128);
    let mut t = a.pow(q as u128);
    let mut r = a.pow((q as u128 + 1) / 2);
    loop {
        if t.value() == 1 {
            return r;
        }
        let mut i = 0u32;
        let mut t2 = t;
        while t2.value() != 1 {
            t2 = t2.mul(&t2);
            i += 1;
            assert!(i < m, "sqrt requested for a non-residue");
        }
        let b = c.pow(1u128 << (m - i - 1));
        m = i;
        c = b.mul(&b);
        t = t.mul(&c);
        r = r.mul(&b);
    }
}

/// Smallest positive quadratic non-residue mod p.
pub fn smallest_nonresidue(p: u64) -> u64 {
    for v in 2..p {
        if legendre(&FieldElement::new(v, p)) == -1 {
            return v;
        }
    }
    unreachable!("no non-residue found; modulus is not an odd prime")
}

/// An element `a + b·ω` of `F_{p²}` with `ω² = d`, `d` a fixed non-residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    a: FieldElement,
    b: FieldElement,
    d: FieldElement,
}

impl fmt::Debug for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}w (w^2 = {}, mod {})",
            self.a.value(),
            self.b.value(),
            self.d.value(),
            self.a.modulus()
        )
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a.value())
        } else {
            write!(f, "{}+{}w", self.a.value(), self.b.value())
        }
    }
}

impl QuadExtElement {
    pub fn new(a: FieldElement, b: FieldElement, d: FieldElement) -> Self {
        assert!(a.same_field(&b) && a.same_field(&d));
        debug_assert!(legendre(&d) == -1, "d must be a quadratic non-residue");
        QuadExtElement { a, b, d }
    }

    /// Embeds a base-field element (ω-part zero). `d` defaults to the smallest
    /// non-residue so embeddings from different call sites agree.
    pub fn from_base(a: FieldElement) -> Self {
        let p = a.modulus();
        let d = FieldElement::new(smallest_nonresidue(p), p);
        QuadExtElement { a, b: a.zero(), d }
    }

    pub fn base_part(&self) -> FieldElement {
        self.a
    }

    pub fn ext_part(&self) -> FieldElement {
        self.b
    }

    pub fn d(&self) -> FieldElement {
        self.d
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b·ω`.
    pub fn conj(&self) -> Self {
        QuadExtElement { a: self.a, b: self.b.neg(), d: self.d }
    }

    /// Field norm `N(a + bω) = a² − d·b²`, an element of `F_p`.
    pub fn norm(&self) -> FieldElement {
        self.a.mul(&self.a).sub(&self.d.mul(&self.b).mul(&self.b))
    }

    fn check(&self, rhs: &Self) {
        self.a.check(&rhs.a);
        assert_eq!(self.d.value(), rhs.d.value(), "extension fields built over different d");
    }
}

impl Field for QuadExtElement {
    fn characteristic(&self) -> u64 {
        self.a.modulus()
    }

    fn zero(&self) -> Self {
        QuadExtElement { a: self.a.zero(), b: self.a.zero(), d: self.d }
    }

    fn one(&self) -> Self {
        QuadExtElement { a: self.a.one(), b: self.a.zero(), d: self.d }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        QuadExtElement { a: self.a.add(&rhs.a), b: self.b.add(&rhs.b), d: self.d }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs);
        QuadExtElement { a: self.a.sub(&rhs.a), b: self.b.sub(&rhs.b), d: self.d }
    }

    fn neg(&self) -> Self {
        QuadExtElement { a: self.a.neg(), b: self.b.neg(), d: self.d }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        // (a + bω)(a' + b'ω) = (aa' + d·bb') + (ab' + a'b)ω
        let a = self.a.mul(&rhs.a).add(&self.d.mul(&self.b).mul(&rhs.b));
        let b = self.a.mul(&rhs.b).add(&rhs.a.mul(&self.b));
        QuadExtElement { a, b, d: self.d }
    }

    fn inv(&self) -> Result<Self, FfError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(FfError::InverseOfZero);
        }
        let ninv = n.inv()?;
        Ok(QuadExtElement { a: self.a.mul(&ninv), b: self.b.neg().mul(&ninv), d: self.d })
    }

    fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn from_int(&self, n: i64) -> Self {
        QuadExtElement {
            a: FieldElement::from_i64(n, self.a.modulus()),
            b: self.a.zero(),
            d: self.d,
        }
    }

    fn same_field(&self, rhs: &Self) -> bool {
        self.a.same_field(&rhs.a) && self.d.value() == rhs.d.value()
    }

    fn sort_key(&self) -> (u64, u64) {
        (self.a.value(), self.b.value())
    }
}

impl serde::Serialize for QuadExtElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.a.value(), self.b.value()).serialize(s)
    }
}

/// Multiplicative order of `x`, given the factorization of the ambient group order.
///
/// The caller owns the factorization (`p−1` for `F_p^*`, `p²−1` for `F_{p²}^*`);
/// the order is found by dividing out prime factors.
pub fn mult_order<F: Field>(
    x: &F,
    group_order: u128,
    factors: &[(u64, u32)],
) -> Result<u128, FfError> {
    if x.is_zero() {
        return Err(FfError::ZeroElement);
    }
    debug_assert!(x.pow(group_order).eq(&x.one()), "group order does not annihilate x");
    let mut ord = group_order;
    for &(q, e) in factors {
        for _ in 0..e {
            if ord % q as u128 == 0 && x.pow(ord / q as u128).eq(&x.one()) {
                ord /= q as u128;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// The roots ξ, ξ⁻¹ of `Z² − sZ + 1` for `s = 3x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRoots {
    /// Discriminant zero: ξ = ±1 (s = ±2), a double root.
    Degenerate { xi: FieldElement },
    /// Discriminant is a QR: ξ lies in the base field (smaller representative).
    Split { xi: FieldElement },
    /// Discriminant is a non-residue: ξ lives in F_{p²} (canonical ω-sign).
    NonSplit { xi: QuadExtElement },
}

impl QuadRoots {
    /// The chosen root, embedded into F_{p²} with the default non-residue d.
    pub fn lift(&self) -> QuadExtElement {
        match self {
            QuadRoots::Degenerate { xi } | QuadRoots::Split { xi } => QuadExtElement::from_base(*xi),
            QuadRoots::NonSplit { xi } => *xi,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, QuadRoots::Degenerate { .. })
    }
}

/// Solves `Z² − sZ + 1 = 0`. The degenerate case `s = ±2` gives ξ = ±1.
pub fn quad_roots(s: &FieldElement) -> QuadRoots {
    let p = s.modulus();
    let four = s.from_int(4);
    let disc = s.mul(s).sub(&four);
    let half = s.from_int(2).inv().expect("2 is invertible mod an odd prime");
    if disc.is_zero() {
        return QuadRoots::Degenerate { xi: s.mul(&half) };
    }
    match legendre(&disc) {
        1 => {
            let roots = sqrt_mod(&disc);
            let r1 = s.add(&roots[0]).mul(&half);
            let r2 = s.add(&roots[1]).mul(&half);
            QuadRoots::Split { xi: if r1.value() <= r2.value() { r1 } else { r2 } }
        }
        _ => {
            // disc = d·(b')² with b' = sqrt(disc/d); ξ = s/2 + (b'/2)·ω
            let d = FieldElement::new(smallest_nonresidue(p), p);
            let ratio = disc.mul(&d.inv().unwrap());
            let roots = sqrt_mod(&ratio);
            assert!(!roots.is_empty(), "disc/d must be a residue");
            let b = roots[0].mul(&half);
            QuadRoots::NonSplit { xi: QuadExtElement::new(s.mul(&half), b, d) }
        }
    }
}
