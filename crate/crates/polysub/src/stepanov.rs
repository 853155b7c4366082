//! Auxiliary-polynomial certificates for subgroup solution counts.
//!
//! Given a curve `P(X,Y) = 0` and a subgroup `G` of order `t`, we build a
//! nonzero `Φ(Z,U,V)` of bounded degree such that `Ψ(X,Y) = Y^t·Φ(X/Y, X^t, Y^t)`
//! vanishes to order `D` at every solution of `P = 0` on `G×G` away from the
//! exceptional locus. Counting zeros of `Ψ` on the curve then bounds the number
//! of solutions by `(m+n)(B+C−1)t/D` plus the size of the exceptional locus.
//!
//! Everything here works over the base field `F_p`; the heavy inner loops run
//! on flat `u64` arrays rather than the sparse polynomials from [`crate::poly`].

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ff::{Field, FieldElement, FfError};
use crate::numth::{self, mulmod};
use crate::poly::{BivariatePoly, Irreducibility, PolyError, heuristic_irreducible, singular_locus};
use crate::subgrp::{SubgroupSpec, SubgrpError, count_poly_solutions};

#[derive(Debug, Error)]
pub enum StepanovError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("system has full column rank; no nonzero coefficient vector exists")]
    FullRank,
    #[error("all coefficients are zero")]
    ZeroPsi,
    #[error("certificate verification failed at stage `{stage}`: {detail}")]
    VerificationFailure { stage: &'static str, detail: String },
    #[error(transparent)]
    Subgrp(#[from] SubgrpError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ff(#[from] FfError),
}

/// Degree budgets for the auxiliary polynomial:
/// `Φ` ranges over `Z^a U^b V^c` with `a < A`, `b < B`, `c < C`, the vanishing
/// order is `D`, and `l` is the linear-system row budget.
#[derive(Debug, Clone, Serialize)]
pub struct StepanovParams {
    pub p: u64,
    pub t: u64,
    pub h: u64,
    pub m: u64,
    pub n: u64,
    pub g: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub l: u64,
}

/// Largest `x ≥ 0` with `x³·mult ≤ bound`.
fn max_cube(bound: u128, mult: u128) -> u64 {
    if mult == 0 {
        return 0;
    }
    let mut lo = 0u64;
    let mut hi = 2_000_000u64; // t ≤ 10^6, so x ≤ t^{2/3} ≤ 10^4 ≪ this
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        let cube = (mid as u128).pow(3);
        if cube.checked_mul(mult).map(|v| v <= bound).unwrap_or(false) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Chooses `A = ⌊t^{2/3}/(g·h^{1/3})⌋`, `B = C = ⌊(h·t)^{1/3}⌋`,
/// `D = ⌊t^{2/3}/(4·g·m·n·h^{1/3})⌋` and validates the coupled constraints
/// `g·A·B ≤ t`, `(B+C−1)·t < p`, `D ≥ 1` and `L < A·B·C` where
/// `L = h·m·n·Σ_{k<D} (4k(m+n)+2A+1)`.
pub fn derive_params(
    p: u64,
    t: u64,
    h: u64,
    m: u64,
    n: u64,
    g: u64,
) -> Result<StepanovParams, StepanovError> {
    let mut bad: Vec<String> = Vec::new();
    if !numth::is_prime(p) {
        bad.push(format!("p = {p} is not prime"));
    }
    if t == 0 || p <= 1 || (p - 1) % t.max(1) != 0 {
        bad.push(format!("t = {t} does not divide p-1 = {}", p.wrapping_sub(1)));
    }
    if h == 0 || m == 0 || n == 0 || g == 0 {
        bad.push("h, m, n, g must all be positive".into());
    }
    if !bad.is_empty() {
        return Err(StepanovError::InfeasibleParams(bad.join("; ")));
    }
    let t2 = (t as u128) * (t as u128);
    let a = max_cube(t2, (g as u128).pow(3) * h as u128);
    let b = max_cube((h as u128) * (t as u128), 1);
    let c = b;
    let d = max_cube(t2, ((4 * g * m * n) as u128).pow(3) * h as u128);
    // L = h·m·n · [ D(2A+1) + 2(m+n)·D(D−1) ]
    let l = h * m * n * (d * (2 * a + 1) + 2 * (m + n) * d * d.saturating_sub(1));
    if a == 0 {
        bad.push("A = 0".into());
    }
    if b == 0 {
        bad.push("B = 0".into());
    }
    if d == 0 {
        bad.push("D = 0 (t too small for this degree/cosets budget)".into());
    }
    if g * a * b > t {
        bad.push(format!("g·A·B = {} exceeds t = {t}", g * a * b));
    }
    if (b + c - 1).saturating_mul(t) >= p {
        bad.push(format!("(B+C-1)·t = {} is not below p = {p}", (b + c - 1) * t));
    }
    if l >= a * b * c {
        bad.push(format!("row budget L = {l} is not below A·B·C = {}", a * b * c));
    }
    if !bad.is_empty() {
        return Err(StepanovError::InfeasibleParams(bad.join("; ")));
    }
    Ok(StepanovParams { p, t, h, m, n, g, a, b, c, d, l })
}

// ---------------------------------------------------------------------------
// dense bivariate arithmetic on u64 coefficient grids

#[derive(Clone, Debug)]
struct Dense {
    p: u64,
    nx: usize,
    ny: usize,
    c: Vec<u64>, // c[ix*ny + jy]
}

impl Dense {
    fn zero(p: u64, nx: usize, ny: usize) -> Self {
        Dense { p, nx, ny, c: vec![0; nx * ny] }
    }

    fn monomial(p: u64, ix: usize, jy: usize, v: u64) -> Self {
        let mut d = Dense::zero(p, ix + 1, jy + 1);
        d.c[ix * d.ny + jy] = v % p;
        d
    }

    fn from_poly(q: &BivariatePoly<FieldElement>) -> Self {
        let p = q.ctx().characteristic();
        if q.is_zero() {
            return Dense::zero(p, 1, 1);
        }
        let mut d = Dense::zero(p, q.deg_x() as usize + 1, q.deg_y() as usize + 1);
        for (&(i, j), c) in q.terms() {
            d.c[i as usize * d.ny + j as usize] = c.value();
        }
        d
    }

    fn to_poly(&self) -> BivariatePoly<FieldElement> {
        let ctx = FieldElement::new(0, self.p);
        BivariatePoly::from_terms(
            &ctx,
            self.c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(idx, &v)| {
                (((idx / self.ny) as u32, (idx % self.ny) as u32), FieldElement::new(v, self.p))
            }),
        )
    }

    fn get(&self, ix: usize, jy: usize) -> u64 {
        if ix < self.nx && jy < self.ny { self.c[ix * self.ny + jy] } else { 0 }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    fn deg_x(&self) -> usize {
        for ix in (0..self.nx).rev() {
            if self.c[ix * self.ny..(ix + 1) * self.ny].iter().any(|&v| v != 0) {
                return ix;
            }
        }
        0
    }

    fn deg_y(&self) -> usize {
        for jy in (0..self.ny).rev() {
            if (0..self.nx).any(|ix| self.c[ix * self.ny + jy] != 0) {
                return jy;
            }
        }
        0
    }

    fn mul(&self, rhs: &Dense) -> Dense {
        let p = self.p;
        let mut out = Dense::zero(p, self.nx + rhs.nx - 1, self.ny + rhs.ny - 1);
        for ix in 0..rhs.nx {
            for jy in 0..rhs.ny {
                let w = rhs.c[ix * rhs.ny + jy];
                if w == 0 {
                    continue;
                }
                for sx in 0..self.nx {
                    let row = sx * self.ny;
                    let orow = (sx + ix) * out.ny + jy;
                    for sy in 0..self.ny {
                        let v = self.c[row + sy];
                        if v != 0 {
                            let cell = &mut out.c[orow + sy];
                            *cell = (*cell + mulmod(v, w, p)) % p;
                        }
                    }
                }
            }
        }
        out
    }

    fn dx(&self) -> Dense {
        let mut out = Dense::zero(self.p, self.nx.max(2) - 1, self.ny);
        for ix in 1..self.nx {
            for jy in 0..self.ny {
                let v = self.c[ix * self.ny + jy];
                if v != 0 {
                    out.c[(ix - 1) * out.ny + jy] = mulmod(v, ix as u64 % self.p, self.p);
                }
            }
        }
        out
    }

    fn dy(&self) -> Dense {
        let mut out = Dense::zero(self.p, self.nx, self.ny.max(2) - 1);
        for ix in 0..self.nx {
            for jy in 1..self.ny {
                let v = self.c[ix * self.ny + jy];
                if v != 0 {
                    out.c[ix * out.ny + jy - 1] = mulmod(v, jy as u64 % self.p, self.p);
                }
            }
        }
        out
    }

    fn shifted(&self, di: usize, dj: usize) -> Dense {
        let mut out = Dense::zero(self.p, self.nx + di, self.ny + dj);
        for ix in 0..self.nx {
            for jy in 0..self.ny {
                out.c[(ix + di) * out.ny + jy + dj] = self.c[ix * self.ny + jy];
            }
        }
        out
    }

    fn eval(&self, x: u64, y: u64) -> u64 {
        let mut acc = 0u64;
        for ix in (0..self.nx).rev() {
            let mut row = 0u64;
            for jy in (0..self.ny).rev() {
                row = (mulmod(row, y, self.p) + self.c[ix * self.ny + jy]) % self.p;
            }
            acc = (mulmod(acc, x, self.p) + row) % self.p;
        }
        acc
    }
}

/// `acc + s·rhs`, growing to the common dimensions.
fn add_scaled(acc: &Dense, rhs: &Dense, s: u64) -> Dense {
    let p = acc.p;
    let mut out = Dense::zero(p, acc.nx.max(rhs.nx), acc.ny.max(rhs.ny));
    for ix in 0..out.nx {
        for jy in 0..out.ny {
            out.c[ix * out.ny + jy] = (acc.get(ix, jy) + mulmod(s, rhs.get(ix, jy), p)) % p;
        }
    }
    out
}

fn neg_mod(v: u64, p: u64) -> u64 {
    (p - v % p) % p
}

// ---------------------------------------------------------------------------
// the R-polynomial recursion

/// Fixed multiplier polynomials of the restriction recursion, built once per curve:
/// with `q₁ = −∂P/∂X` and `r₁ = ∂P/∂Y`,
/// `R_{k+1} = XY·r₁²·∂_X R_k + (e−k)·Y·r₁²·R_k − (2k−1)·XY·r₁·(∂_X r₁)·R_k
///          + XY·q₁·r₁·∂_Y R_k + (f−k)·X·q₁·r₁·R_k − (2k−1)·XY·q₁·(∂_Y r₁)·R_k`,
/// seeded by `R_1 = e·Y·r₁ + f·X·q₁`, where `e = a+bt` and `f = (c+1)t−a` are the
/// X- and Y-exponents of the monomial being differentiated.
struct RecursionCtx {
    p: u64,
    m: usize,
    n: usize,
    q1: Dense,
    r1: Dense,
    m1: Dense,
    m2: Dense,
    m3: Dense,
    m4: Dense,
    m5: Dense,
    m6: Dense,
}

fn recursion_ctx(p_poly: &BivariatePoly<FieldElement>) -> RecursionCtx {
    let p = p_poly.ctx().characteristic();
    let q1 = Dense::from_poly(&p_poly.partial_x().neg());
    let r1 = Dense::from_poly(&p_poly.partial_y());
    let x = Dense::monomial(p, 1, 0, 1);
    let y = Dense::monomial(p, 0, 1, 1);
    let xy = Dense::monomial(p, 1, 1, 1);
    let r1r1 = r1.mul(&r1);
    let q1r1 = q1.mul(&r1);
    RecursionCtx {
        p,
        m: p_poly.deg_x() as usize,
        n: p_poly.deg_y() as usize,
        m1: xy.mul(&r1r1),
        m2: y.mul(&r1r1),
        m3: xy.mul(&r1.mul(&r1.dx())),
        m4: xy.mul(&q1r1),
        m5: x.mul(&q1r1),
        m6: xy.mul(&q1.mul(&r1.dy())),
        q1,
        r1,
    }
}

fn check_r_degrees(cx: &RecursionCtx, r: &Dense, k: u64) {
    if !r.is_zero() {
        assert!(r.deg_x() as u64 <= 4 * k * cx.m as u64, "deg_X R_k bound violated");
        assert!(r.deg_y() as u64 <= 4 * k * cx.n as u64, "deg_Y R_k bound violated");
    }
}

fn r_first(cx: &RecursionCtx, e: u64, f: u64) -> Dense {
    let y = Dense::monomial(cx.p, 0, 1, 1);
    let x = Dense::monomial(cx.p, 1, 0, 1);
    let zero = Dense::zero(cx.p, 1, 1);
    let r = add_scaled(&add_scaled(&zero, &y.mul(&cx.r1), e), &x.mul(&cx.q1), f);
    check_r_degrees(cx, &r, 1);
    r
}

/// Advances `R_k → R_{k+1}` for `k ≥ 1`.
fn r_step(cx: &RecursionCtx, r: &Dense, k: u64, e: u64, f: u64) -> Dense {
    let p = cx.p;
    let w = neg_mod(2 * k - 1, p);
    let mut out = cx.m1.mul(&r.dx());
    out = add_scaled(&out, &cx.m2.mul(r), (e + p - k % p) % p);
    out = add_scaled(&out, &cx.m3.mul(r), w);
    out = add_scaled(&out, &cx.m4.mul(&r.dy()), 1);
    out = add_scaled(&out, &cx.m5.mul(r), (f + p - k % p) % p);
    out = add_scaled(&out, &cx.m6.mul(r), w);
    check_r_degrees(cx, &out, k + 1);
    out
}

fn column_abc(params: &StepanovParams, col: usize) -> (u64, u64, u64) {
    let c = (col as u64) % params.c;
    let b = (col as u64) / params.c % params.b;
    let a = (col as u64) / (params.b * params.c);
    (a, b, c)
}

fn column_ef(params: &StepanovParams, a: u64, b: u64, c: u64) -> (u64, u64) {
    let p = params.p;
    let e = (a as u128 + b as u128 * params.t as u128) % p as u128;
    let f = ((c as u128 + 1) * params.t as u128 - a as u128) % p as u128;
    (e as u64, f as u64)
}

// ---------------------------------------------------------------------------
// canonical remainders modulo P

/// Remainder machinery for one divisor `P`. `canonical_rem` returns a remainder
/// of Y-degree below `deg_Y P` together with a weight `w` such that the result
/// equals `lc^w·C mod P` where `lc` is the leading Y-coefficient of `P`; callers
/// rescale to a uniform weight so that remainders stay linear in `C`.
struct Reducer {
    p: u64,
    n: u32,
    lc: Vec<u64>,
    neg_c0: Vec<u64>,
    poly: BivariatePoly<FieldElement>,
}

fn univ_row(d: &Dense, jy: usize) -> Vec<u64> {
    (0..d.nx).map(|ix| d.get(ix, jy)).collect()
}

fn umul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
    }
    out
}

fn uadd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = (out[i] + y) % p;
    }
    out
}

impl Reducer {
    fn new(p_poly: &BivariatePoly<FieldElement>) -> Self {
        let p = p_poly.ctx().characteristic();
        let n = p_poly.deg_y();
        assert!(n >= 1, "divisor must depend on Y");
        let lc_poly = p_poly.leading_y_coeff();
        let lc = Dense::from_poly(&lc_poly);
        let mut c0 = vec![0u64; 1];
        if n == 1 {
            let mut c0d = Dense::zero(p, p_poly.deg_x() as usize + 1, 1);
            for (&(i, j), cf) in p_poly.terms() {
                if j == 0 {
                    c0d.c[i as usize] = cf.value();
                }
            }
            c0 = c0d.c.iter().map(|&v| neg_mod(v, p)).collect();
        }
        Reducer { p, n, lc: univ_row(&lc, 0), neg_c0: c0, poly: p_poly.clone() }
    }

    fn canonical_rem(&self, c: &Dense) -> (Dense, u32) {
        if c.is_zero() {
            return (Dense::zero(self.p, 1, 1), 0);
        }
        if self.n == 1 {
            // Horner substitution Y → −c₀/lc, multiplier lc^{deg_Y C}
            let jmax = c.deg_y();
            let mut r = univ_row(c, jmax);
            let mut lcpow = vec![1u64];
            for j in (0..jmax).rev() {
                lcpow = umul(&lcpow, &self.lc, self.p);
                r = uadd(&umul(&r, &self.neg_c0, self.p), &umul(&univ_row(c, j), &lcpow, self.p), self.p);
            }
            let mut out = Dense::zero(self.p, r.len().max(1), 1);
            for (i, &v) in r.iter().enumerate() {
                out.c[i] = v;
            }
            (out, jmax as u32)
        } else {
            let (_, rem, delta) = c.to_poly().pseudo_divide_y(&self.poly).expect("divisor fixed");
            (Dense::from_poly(&rem), delta)
        }
    }

    /// `lc^w` as a dense factor, for rescaling remainders to a uniform weight.
    fn lc_power(&self, w: u32) -> Dense {
        let mut acc = vec![1u64];
        for _ in 0..w {
            acc = umul(&acc, &self.lc, self.p);
        }
        let mut out = Dense::zero(self.p, acc.len(), 1);
        out.c.copy_from_slice(&acc);
        out
    }
}

// ---------------------------------------------------------------------------
// system assembly

#[derive(Debug, Clone)]
pub struct SystemMatrix {
    pub p: u64,
    pub cols: usize,
    pub rows: Vec<Vec<u64>>,
}

/// Per-coset constants `λ_i^{−bt}·μ_i^{−(c+1)t}` multiplying column `(a,b,c)`
/// in the block of coset `i`.
fn coset_constants(
    params: &StepanovParams,
    scalings: &[(FieldElement, FieldElement)],
) -> Result<Vec<Vec<u64>>, StepanovError> {
    let ncols = (params.a * params.b * params.c) as usize;
    let mut out = Vec::with_capacity(scalings.len());
    for &(lam, mu) in scalings {
        let lt = lam.pow(params.t as u128).inv()?;
        let mt = mu.pow(params.t as u128).inv()?;
        let mut consts = vec![0u64; ncols];
        for (col, slot) in consts.iter_mut().enumerate() {
            let (_, b, c) = column_abc(params, col);
            *slot = lt.pow(b as u128).mul(&mt.pow(c as u128 + 1)).value();
        }
        out.push(consts);
    }
    Ok(out)
}

fn default_scalings(p: u64, h: u64) -> Vec<(FieldElement, FieldElement)> {
    assert_eq!(h, 1, "explicit scalings required when h > 1");
    vec![(FieldElement::new(1, p), FieldElement::new(1, p))]
}

/// All canonical remainders for one column: entry `k` is the remainder of
/// `R_{k,a,b,c}·X^a·Y^{A−1−a}` modulo `P`, with its weight.
fn column_rems(
    cx: &RecursionCtx,
    red: &Reducer,
    params: &StepanovParams,
    col: usize,
) -> Vec<(Dense, u32)> {
    let (a, b, c) = column_abc(params, col);
    let (e, f) = column_ef(params, a, b, c);
    let di = a as usize;
    let dj = (params.a - 1 - a) as usize;
    let d = params.d;
    let mut out = Vec::with_capacity(d as usize);
    out.push(red.canonical_rem(&Dense::monomial(cx.p, di, dj, 1)));
    if d >= 2 {
        let mut r = r_first(cx, e, f);
        out.push(red.canonical_rem(&r.shifted(di, dj)));
        for k in 1..=(d - 2) {
            r = r_step(cx, &r, k, e, f);
            out.push(red.canonical_rem(&r.shifted(di, dj)));
        }
    }
    out
}

/// Builds the linear system over the `Φ` coefficients: one row per monomial of
/// the uniformized remainders `R̃_{k,i} mod P`, for every coset block `i` and
/// every derivative order `k < D`. A coefficient vector in the nullspace makes
/// `P` divide every `R̃_{k,i}`, i.e. `Ψ` vanishes to order `D` on each coset curve.
pub fn build_system(
    p_poly: &BivariatePoly<FieldElement>,
    scalings: &[(FieldElement, FieldElement)],
    params: &StepanovParams,
) -> Result<SystemMatrix, StepanovError> {
    let p = p_poly.ctx().characteristic();
    assert_eq!(p, params.p, "modulus mismatch");
    assert_eq!(p_poly.deg_x() as u64, params.m, "deg_X mismatch with parameters");
    assert_eq!(p_poly.deg_y() as u64, params.n, "deg_Y mismatch with parameters");
    let scalings_owned;
    let scalings = if scalings.is_empty() {
        scalings_owned = default_scalings(p, params.h);
        &scalings_owned
    } else {
        scalings
    };
    assert_eq!(scalings.len() as u64, params.h, "scaling count must equal h");
    let consts = coset_constants(params, scalings)?;

    let cx = recursion_ctx(p_poly);
    let red = Reducer::new(p_poly);
    let ncols = (params.a * params.b * params.c) as usize;
    let per_col: Vec<Vec<(Dense, u32)>> =
        (0..ncols).into_par_iter().map(|col| column_rems(&cx, &red, params, col)).collect();

    let uniform_one = consts.len() == 1 && consts[0].iter().all(|&v| v == 1);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for k in 0..params.d as usize {
        let wmax = per_col.iter().map(|c| c[k].1).max().unwrap_or(0);
        let urems: Vec<Dense> = per_col
            .par_iter()
            .map(|c| {
                let (rem, w) = &c[k];
                if *w == wmax { rem.clone() } else { rem.mul(&red.lc_power(wmax - w)) }
            })
            .collect();
        let mut monos: BTreeSet<(usize, usize)> = BTreeSet::new();
        for rem in &urems {
            for ix in 0..rem.nx {
                for jy in 0..rem.ny {
                    if rem.get(ix, jy) != 0 {
                        monos.insert((ix, jy));
                    }
                }
            }
        }
        for block in &consts {
            for &(ix, jy) in &monos {
                let row: Vec<u64> = (0..ncols)
                    .map(|col| {
                        let v = urems[col].get(ix, jy);
                        if uniform_one { v } else { mulmod(v, block[col], p) }
                    })
                    .collect();
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    assert!(rows.len() as u64 <= params.l, "system rows {} exceed budget L = {}", rows.len(), params.l);
    Ok(SystemMatrix { p, cols: ncols, rows })
}

/// Reference implementation of one basis column: the restriction polynomial
/// `R_{k,a,b,c}·X^a·Y^{A−1−a}·λ^{−bt}·μ^{−(c+1)t}` built with the sparse
/// polynomial type, before reduction modulo `P`. Slow; exists as an oracle for
/// the dense fast path.
pub fn basis_restriction(
    p_poly: &BivariatePoly<FieldElement>,
    params: &StepanovParams,
    scaling: (FieldElement, FieldElement),
    a: u64,
    b: u64,
    c: u64,
    k: u64,
) -> Result<BivariatePoly<FieldElement>, StepanovError> {
    assert!(a < params.a && b < params.b && c < params.c && k < params.d);
    let ctx = p_poly.ctx();
    let one = ctx.one();
    let (e, f) = column_ef(params, a, b, c);
    let ef = ctx.from_int(e as i64);
    let ff = ctx.from_int(f as i64);
    let q1 = p_poly.partial_x().neg();
    let r1 = p_poly.partial_y();
    let x = BivariatePoly::monomial(1, 0, &one);
    let y = BivariatePoly::monomial(0, 1, &one);
    let xy = BivariatePoly::monomial(1, 1, &one);
    let mut r = BivariatePoly::constant(&one);
    if k >= 1 {
        r = y.mul(&r1).scale(&ef).add(&x.mul(&q1).scale(&ff));
        let r1r1 = r1.mul(&r1);
        let q1r1 = q1.mul(&r1);
        for kk in 1..k {
            let w = ctx.from_int(2 * kk as i64 - 1);
            let se = ef.sub(&ctx.from_int(kk as i64));
            let sf = ff.sub(&ctx.from_int(kk as i64));
            r = xy
                .mul(&r1r1)
                .mul(&r.partial_x())
                .add(&y.mul(&r1r1).mul(&r).scale(&se))
                .sub(&xy.mul(&r1).mul(&r1.partial_x()).mul(&r).scale(&w))
                .add(&xy.mul(&q1r1).mul(&r.partial_y()))
                .add(&x.mul(&q1r1).mul(&r).scale(&sf))
                .sub(&xy.mul(&q1).mul(&r1.partial_y()).mul(&r).scale(&w));
        }
    }
    let out = r.shift(a as u32, (params.a - 1 - a) as u32);
    let (lam, mu) = scaling;
    let cst = lam.pow(params.t as u128).inv()?.pow(b as u128).mul(&mu.pow(params.t as u128).inv()?.pow(c as u128 + 1));
    let out = out.scale(&cst);
    if !out.is_zero() {
        assert!(out.deg_x() as u64 <= params.a + 4 * k * params.m, "basis deg_X bound violated");
        assert!(out.deg_y() as u64 <= params.a + 4 * k * params.n, "basis deg_Y bound violated");
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// nullspace

#[derive(Debug, Clone, Serialize)]
pub struct NullspaceSolution {
    pub phi: Vec<u64>,
    pub rank: usize,
    pub nullity: usize,
}

/// Deterministic Gauss–Jordan elimination over `F_p`. Picks the first free
/// column, sets it to 1 and all other free columns to 0, and back-substitutes
/// the pivot variables. Errors with [`StepanovError::FullRank`] when every
/// column is a pivot.
pub fn solve_nullspace(m: &SystemMatrix) -> Result<NullspaceSolution, StepanovError> {
    let p = m.p;
    let mut a = m.rows.clone();
    let nrows = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    for col in 0..m.cols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, r);
        let inv = FieldElement::new(a[rank][col], p).inv().expect("pivot nonzero").value();
        for v in a[rank].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        for rr in 0..nrows {
            if rr != rank && a[rr][col] != 0 {
                let s = a[rr][col];
                let (head, tail) = a.split_at_mut(rank.max(rr));
                let (pivot_row, target) = if rank < rr {
                    (&head[rank], &mut tail[0])
                } else {
                    (&tail[0], &mut head[rr])
                };
                // borrow order differs depending on which row is lower
                let pivot_row: &Vec<u64> = pivot_row;
                for (tv, &pv) in target.iter_mut().zip(pivot_row.iter()) {
                    *tv = (*tv + p - mulmod(s, pv, p)) % p;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let Some(free) = (0..m.cols).find(|c| !pivot_cols.contains(c)) else {
        return Err(StepanovError::FullRank);
    };
    let mut phi = vec![0u64; m.cols];
    phi[free] = 1;
    for &(r, pc) in &pivots {
        phi[pc] = neg_mod(a[r][free], p);
    }
    debug_assert!(m.rows.iter().all(|row| {
        row.iter().zip(&phi).fold(0u64, |acc, (&rv, &pv)| (acc + mulmod(rv, pv, p)) % p) == 0
    }));
    Ok(NullspaceSolution { phi, rank, nullity: m.cols - rank })
}

/// `Ψ(X,Y) = Y^t·Φ(X/Y, X^t, Y^t)`: the coefficient of `Z^a U^b V^c` in `Φ`
/// lands on the monomial `X^{a+bt}·Y^{(c+1)t−a}`. The exponent map is injective
/// for `a < A ≤ t`, so `Ψ ≠ 0` exactly when `Φ ≠ 0`.
pub fn assemble_psi(
    phi: &[u64],
    params: &StepanovParams,
) -> Result<BivariatePoly<FieldElement>, StepanovError> {
    assert_eq!(phi.len() as u64, params.a * params.b * params.c);
    assert!(params.a <= params.t);
    assert!((params.b + params.c) * params.t < u32::MAX as u64, "exponents exceed u32");
    if phi.iter().all(|&v| v == 0) {
        return Err(StepanovError::ZeroPsi);
    }
    let ctx = FieldElement::new(0, params.p);
    let psi = BivariatePoly::from_terms(
        &ctx,
        phi.iter().enumerate().filter(|(_, &v)| v != 0).map(|(col, &v)| {
            let (a, b, c) = column_abc(params, col);
            (((a + b * params.t) as u32, ((c + 1) * params.t - a) as u32), FieldElement::new(v, params.p))
        }),
    );
    assert_eq!(psi.num_terms(), phi.iter().filter(|&&v| v != 0).count());
    assert!(psi.total_deg() as u64 <= (params.b + params.c - 1) * params.t + params.t);
    Ok(psi)
}

// ---------------------------------------------------------------------------
// verification

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub psi_terms: usize,
    pub n_sing: usize,
    pub solution_points: usize,
    pub vanishing_checks: u64,
    pub brute_count: u64,
    pub bezout_bound: u64,
}

/// Checks a coefficient vector independently of how it was produced:
/// (`coprime`) `P` does not divide `Ψ`, via a canonical remainder;
/// (`vanishing`) at every subgroup solution off the exceptional locus, `Ψ` and
/// its curve derivatives up to order `D−1` vanish, evaluated through the
/// restriction polynomials rather than the linear system;
/// (`bezout`) the brute-force solution count does not exceed
/// `(m+n)(B+C−1)t/D` plus the exceptional-locus size.
pub fn verify_certificate(
    p_poly: &BivariatePoly<FieldElement>,
    scalings: &[(FieldElement, FieldElement)],
    g: &SubgroupSpec<FieldElement>,
    phi: &[u64],
    params: &StepanovParams,
) -> Result<VerifyReport, StepanovError> {
    let p = p_poly.ctx().characteristic();
    assert_eq!(p, params.p, "modulus mismatch");
    assert_eq!(g.order(), params.t, "subgroup order must equal t");
    assert!(heuristic_irreducible(p_poly) != Irreducibility::No, "reducible divisor");
    let scalings_owned;
    let scalings = if scalings.is_empty() {
        scalings_owned = default_scalings(p, params.h);
        &scalings_owned
    } else {
        scalings
    };
    assert_eq!(scalings.len() as u64, params.h);

    let psi = assemble_psi(phi, params)?;
    let rem = if p_poly.deg_y() == 1 {
        psi.rem_mod_linear_y(p_poly)?
    } else {
        psi.pseudo_divide_y(p_poly)?.1
    };
    if rem.is_zero() {
        return Err(StepanovError::VerificationFailure {
            stage: "coprime",
            detail: "P divides Ψ, so Ψ carries no information about the curve".into(),
        });
    }

    let locus = singular_locus(p_poly);
    let sing: std::collections::HashSet<(u64, u64)> =
        locus.points.iter().map(|&(x, y)| (x.value(), y.value())).collect();

    // solution points per coset, with the exceptional locus removed
    let mut pts: Vec<Vec<(u64, u64)>> = Vec::with_capacity(scalings.len());
    let mut brute_count = 0u64;
    for &(lam, mu) in scalings {
        let li = lam.inv()?;
        let mi = mu.inv()?;
        let mut here = Vec::new();
        for u in g.elements() {
            let x = li.mul(u);
            for v in g.elements() {
                let y = mi.mul(v);
                if p_poly.eval(&x, &y).is_zero() {
                    brute_count += 1;
                    if !sing.contains(&(x.value(), y.value())) {
                        here.push((x.value(), y.value()));
                    }
                }
            }
        }
        pts.push(here);
    }
    debug_assert_eq!(brute_count, {
        let mut n = 0;
        for &(lam, mu) in scalings {
            n += count_poly_solutions(p_poly, g, g, Some((lam.inv()?, mu.inv()?)))?;
        }
        n
    });

    // combined restriction polynomials Σ_abc φ·const·R_{k,a,b,c}·X^a·Y^{A−1−a}
    let consts = coset_constants(params, scalings)?;
    let cx = recursion_ctx(p_poly);
    let d = params.d as usize;
    let h = scalings.len();
    let mut comb: Vec<Vec<Dense>> = (0..d).map(|_| (0..h).map(|_| Dense::zero(p, 1, 1)).collect()).collect();
    for (col, &w) in phi.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let (a, b, c) = column_abc(params, col);
        let (e, f) = column_ef(params, a, b, c);
        let di = a as usize;
        let dj = (params.a - 1 - a) as usize;
        let mut r = Dense::monomial(p, 0, 0, 1);
        for k in 0..d {
            if k == 1 {
                r = r_first(&cx, e, f);
            } else if k >= 2 {
                r = r_step(&cx, &r, k as u64 - 1, e, f);
            }
            let term = r.shifted(di, dj);
            for i in 0..h {
                comb[k][i] = add_scaled(&comb[k][i], &term, mulmod(w, consts[i][col], p));
            }
        }
    }

    let mut checks = 0u64;
    for i in 0..h {
        for &(x, y) in &pts[i] {
            let xe = FieldElement::new(x, p);
            let ye = FieldElement::new(y, p);
            if !psi.eval(&xe, &ye).is_zero() {
                return Err(StepanovError::VerificationFailure {
                    stage: "vanishing",
                    detail: format!("Ψ({x},{y}) ≠ 0 on coset {i}"),
                });
            }
            checks += 1;
            for (k, row) in comb.iter().enumerate() {
                if row[i].eval(x, y) != 0 {
                    return Err(StepanovError::VerificationFailure {
                        stage: "vanishing",
                        detail: format!("derivative order {k} of Ψ does not vanish at ({x},{y}) on coset {i}"),
                    });
                }
                checks += 1;
            }
        }
    }

    let bezout_bound = (params.m + params.n) * (params.b + params.c - 1) * params.t / params.d
        + sing.len() as u64;
    if brute_count > bezout_bound {
        return Err(StepanovError::VerificationFailure {
            stage: "bezout",
            detail: format!("brute count {brute_count} exceeds bound {bezout_bound}"),
        });
    }

    Ok(VerifyReport {
        psi_terms: psi.num_terms(),
        n_sing: sing.len(),
        solution_points: pts.iter().map(Vec::len).sum(),
        vanishing_checks: checks,
        brute_count,
        bezout_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub params: StepanovParams,
    pub system_rows: usize,
    pub system_cols: usize,
    pub rank: usize,
    pub nullity: usize,
    pub phi: Vec<u64>,
    pub verify: VerifyReport,
    pub build_ms: u128,
    pub solve_ms: u128,
    pub verify_ms: u128,
}

/// End-to-end certificate: build the system, solve for a nonzero `Φ`, assemble
/// `Ψ`, and verify all three stages.
pub fn certificate(
    p_poly: &BivariatePoly<FieldElement>,
    scalings: &[(FieldElement, FieldElement)],
    g: &SubgroupSpec<FieldElement>,
    params: &StepanovParams,
) -> Result<CertificateReport, StepanovError> {
    let t0 = Instant::now();
    let system = build_system(p_poly, scalings, params)?;
    let build_ms = t0.elapsed().as_millis();
    let t1 = Instant::now();
    let sol = solve_nullspace(&system)?;
    let solve_ms = t1.elapsed().as_millis();
    let t2 = Instant::now();
    let verify = verify_certificate(p_poly, scalings, g, &sol.phi, params)?;
    let verify_ms = t2.elapsed().as_millis();
    Ok(CertificateReport {
        params: params.clone(),
        system_rows: system.rows.len(),
        system_cols: system.cols,
        rank: sol.rank,
        nullity: sol.nullity,
        phi: sol.phi,
        verify,
        build_ms,
        solve_ms,
        verify_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgrp::build_subgroup_base;

    fn fe(v: i64, p: u64) -> FieldElement {
        FieldElement::from_i64(v, p)
    }

    fn xy_x_y(p: u64) -> BivariatePoly<FieldElement> {
        let one = fe(1, p);
        BivariatePoly::from_terms(&one, [((1, 1), one), ((1, 0), one), ((0, 1), one)])
    }

    #[test]
    fn params_toy_and_medium() {
        let q = derive_params(97, 16, 1, 1, 1, 1).unwrap();
        assert_eq!((q.a, q.b, q.c, q.d, q.l), (6, 2, 2, 1, 13));
        let q = derive_params(2377, 216, 1, 1, 1, 1).unwrap();
        assert_eq!((q.a, q.b, q.c, q.d, q.l), (36, 6, 6, 9, 945));
    }

    #[test]
    fn params_infeasible() {
        // t = 48, quartic with g = 2: the derivative budget D collapses to zero
        let err = derive_params(97, 48, 1, 2, 2, 2).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("D = 0"), "{msg}");
        assert!(derive_params(96, 16, 1, 1, 1, 1).is_err()); // p not prime
        assert!(derive_params(97, 17, 1, 1, 1, 1).is_err()); // t ∤ p−1
    }

    /// Oracle for the restriction recursion: differentiate `F = X^E·Y^F` along
    /// the curve with the numerator recursion
    /// `N_{j+1} = r₁²·∂_X N_j + q₁r₁·∂_Y N_j − (2j−1)(r₁·∂_X r₁ + q₁·∂_Y r₁)·N_j`
    /// (so `d^j F/dX^j = N_j / r₁^{2j−1}`), and compare `X^k·Y^k·N_k` with
    /// `R_k·X^E·Y^F`. The two routes share only the definition of the
    /// derivation `∂_X + (q₁/r₁)·∂_Y`, so an algebra slip in either recursion
    /// breaks the equality.
    #[test]
    fn restriction_matches_direct_differentiation() {
        let p = 97;
        let pp = xy_x_y(p);
        let one = fe(1, p);
        let q1 = pp.partial_x().neg();
        let r1 = pp.partial_y();
        let (ee, ff) = (3u32, 5u32);
        let fmono = BivariatePoly::monomial(ee, ff, &one);
        let cx = recursion_ctx(&pp);
        let mut n_j = r1
            .mul(&fmono.partial_x())
            .add(&q1.mul(&fmono.partial_y()));
        let drift = r1.mul(&r1.partial_x()).add(&q1.mul(&r1.partial_y()));
        let mut r_dense = r_first(&cx, ee as u64, ff as u64);
        for k in 1u32..4 {
            let lhs = n_j.shift(k, k);
            let rhs = r_dense.to_poly().mul(&fmono);
            assert!(lhs.sub(&rhs).is_zero(), "k = {k}");
            let w = one.from_int(2 * k as i64 - 1);
            n_j = r1
                .mul(&r1)
                .mul(&n_j.partial_x())
                .add(&q1.mul(&r1).mul(&n_j.partial_y()))
                .sub(&drift.mul(&n_j).scale(&w));
            r_dense = r_step(&cx, &r_dense, k as u64, ee as u64, ff as u64);
        }
    }

    #[test]
    fn basis_restriction_matches_dense_path() {
        let p = 2377;
        let pp = xy_x_y(p);
        let params = derive_params(p, 216, 1, 1, 1, 1).unwrap();
        let cx = recursion_ctx(&pp);
        let scaling = (fe(1, p), fe(1, p));
        for (a, b, c, k) in [(0, 0, 0, 0), (3, 1, 2, 1), (7, 2, 4, 3), (35, 5, 5, 8)] {
            let slow = basis_restriction(&pp, &params, scaling, a, b, c, k).unwrap();
            let (e, f) = column_ef(&params, a, b, c);
            let mut r = Dense::monomial(p, 0, 0, 1);
            for kk in 1..=k {
                if kk == 1 {
                    r = r_first(&cx, e, f);
                } else {
                    r = r_step(&cx, &r, kk - 1, e, f);
                }
            }
            let fast = r.shifted(a as usize, (params.a - 1 - a) as usize).to_poly();
            assert!(slow.sub(&fast).is_zero(), "({a},{b},{c},{k})");
        }
    }

    #[test]
    fn canonical_remainder_is_linear() {
        let p = 97;
        let pp = xy_x_y(p);
        let red = Reducer::new(&pp);
        let c1 = Dense::monomial(p, 2, 5, 3);
        let c2 = Dense::monomial(p, 4, 5, 11);
        let sum = add_scaled(&c1, &c2, 1);
        let (r1, w1) = red.canonical_rem(&c1);
        let (r2, w2) = red.canonical_rem(&c2);
        let (rs, ws) = red.canonical_rem(&sum);
        assert_eq!(w1, w2);
        assert_eq!(w1, ws);
        assert!(add_scaled(&r1, &r2, 1).to_poly().sub(&rs.to_poly()).is_zero());
        // remainder really is lc^w·C mod P: check divisibility of the difference
        let lcw = red.lc_power(w1);
        let diff = add_scaled(&c1.mul(&lcw), &r1, p - 1).to_poly();
        let (_, rem, _) = diff.pseudo_divide_y(&pp).unwrap();
        assert!(rem.is_zero());
    }

    #[test]
    fn nullspace_shape_and_full_rank() {
        let m = SystemMatrix {
            p: 7,
            cols: 3,
            rows: vec![vec![1, 2, 3], vec![0, 1, 4]],
        };
        let sol = solve_nullspace(&m).unwrap();
        assert_eq!(sol.rank, 2);
        assert_eq!(sol.nullity, 1);
        // first free column is the last one; it gets value 1
        assert_eq!(sol.phi[2], 1);
        let full = SystemMatrix { p: 7, cols: 2, rows: vec![vec![1, 0], vec![0, 1]] };
        assert!(matches!(solve_nullspace(&full), Err(StepanovError::FullRank)));
    }

    #[test]
    fn psi_assembly() {
        let params = derive_params(97, 16, 1, 1, 1, 1).unwrap();
        let ncols = (params.a * params.b * params.c) as usize;
        assert!(matches!(assemble_psi(&vec![0; ncols], &params), Err(StepanovError::ZeroPsi)));
        let mut phi = vec![0u64; ncols];
        phi[0] = 1; // Φ = 1 ⇒ Ψ = Y^t
        let psi = assemble_psi(&phi, &params).unwrap();
        assert_eq!(psi.num_terms(), 1);
        assert_eq!(psi.coeff(0, 16).value(), 1);
        // distinct columns land on distinct monomials
        let all: Vec<u64> = (1..=ncols as u64).collect();
        let psi = assemble_psi(&all, &params).unwrap();
        assert_eq!(psi.num_terms(), ncols);
    }

    #[test]
    fn toy_certificate() {
        let p = 97;
        let pp = xy_x_y(p);
        let g = build_subgroup_base(p, 16).unwrap();
        let params = derive_params(p, 16, 1, 1, 1, 1).unwrap();
        let rep = certificate(&pp, &[], &g, &params).unwrap();
        assert_eq!(rep.system_cols, 24);
        assert!(rep.system_rows <= 13, "rows = {}", rep.system_rows);
        assert!(rep.nullity >= 11, "nullity = {}", rep.nullity);
        assert_eq!(rep.verify.n_sing, 1);
        assert_eq!(rep.verify.bezout_bound, 97);
        assert!(rep.verify.brute_count <= 16);
    }

    #[test]
    fn negative_control_fails_vanishing() {
        // p chosen so the curve actually has subgroup solutions to test against
        let p = 257;
        let pp = xy_x_y(p);
        let g = build_subgroup_base(p, 16).unwrap();
        let params = derive_params(p, 16, 1, 1, 1, 1).unwrap();
        let ncols = (params.a * params.b * params.c) as usize;
        let mut phi = vec![0u64; ncols];
        phi[0] = 1; // Ψ = Y^16, which is 1 on every subgroup point
        match verify_certificate(&pp, &[], &g, &phi, &params) {
            Err(StepanovError::VerificationFailure { stage, .. }) => assert_eq!(stage, "vanishing"),
            other => panic!("expected vanishing failure, got {other:?}"),
        }
    }

    #[test]
    fn medium_certificate() {
        let p = 2377;
        let pp = xy_x_y(p);
        let g = build_subgroup_base(p, 216).unwrap();
        let params = derive_params(p, 216, 1, 1, 1, 1).unwrap();
        let rep = certificate(&pp, &[], &g, &params).unwrap();
        assert_eq!(rep.system_cols, 1296);
        assert!(rep.system_rows <= 945, "rows = {}", rep.system_rows);
        assert_eq!(rep.verify.bezout_bound, 529);
        assert!(rep.verify.brute_count <= 216);
    }
}
