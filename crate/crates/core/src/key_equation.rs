//! Gröbner bases of the solution module `M = {(f, g) : f·u ≡ g mod x^m}`
//! over `S[x; σ]`, by successive approximation in the style of Byrne and
//! Fitzpatrick.
//!
//! Terms are ordered `(1, 0) ≺ (0, 1) ≺ (x, 0) ≺ (0, x) ≺ ...`. Every pair
//! of the basis keeps a leading monomial of the exact form `(p^i x^λ, 0)` or
//! `(0, p^i x^μ)`.

use std::fmt;

use crate::galois_ring::RingElement;
use crate::skew_poly::{SkewPoly, SkewRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A basis element `(f, g)` with leading monomial `p^class x^exponent` on `side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionPair {
    pub f: SkewPoly,
    pub g: SkewPoly,
    pub side: Side,
    pub class: u32,
    pub exponent: usize,
}

impl SolutionPair {
    /// Position of the leading term in the term order.
    pub fn term_rank(&self) -> usize {
        match self.side {
            Side::Left => 2 * self.exponent,
            Side::Right => 2 * self.exponent + 1,
        }
    }
}

/// `2r` pairs: left pairs for classes `0..r`, then right pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    pub pairs: Vec<SolutionPair>,
    pub depth: usize,
}

impl SolutionBasis {
    /// Minimal exponents `λ_0, ..., λ_{r-1}` of the left pairs.
    pub fn lambda(&self) -> Vec<usize> {
        self.exponents(Side::Left)
    }

    /// Minimal exponents `μ_0, ..., μ_{r-1}` of the right pairs.
    pub fn mu(&self) -> Vec<usize> {
        self.exponents(Side::Right)
    }

    fn exponents(&self, side: Side) -> Vec<usize> {
        let mut pairs: Vec<&SolutionPair> = self.pairs.iter().filter(|p| p.side == side).collect();
        pairs.sort_by_key(|p| p.class);
        pairs.iter().map(|p| p.exponent).collect()
    }
}

/// Minimal exponents after one step of the approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub lambda: Vec<usize>,
    pub mu: Vec<usize>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} lambda={:?} mu={:?}", self.step, self.lambda, self.mu)
    }
}

/// `σ^j(u_l)` for `j + l < m`, so discrepancies need no automorphism calls.
struct TwistTable {
    rows: Vec<Vec<RingElement>>,
}

impl TwistTable {
    fn new(ring: &SkewRing, u: &SkewPoly, m: usize) -> TwistTable {
        let s = ring.ext();
        let mut base: Vec<RingElement> = (0..m).map(|l| u.coeff(l).cloned().unwrap_or_else(|| s.zero())).collect();
        let mut rows = Vec::with_capacity(m);
        for j in 0..m {
            if j > 0 {
                base.pop();
                base = base.iter().map(|c| if c.is_zero() { c.clone() } else { ring.tower().apply(1, c) }).collect();
            }
            rows.push(base.clone());
        }
        TwistTable { rows }
    }

    /// `σ^j(u_l)`
    fn get(&self, j: usize, l: usize) -> &RingElement {
        &self.rows[j][l]
    }
}

fn discrepancy_from_table(ring: &SkewRing, pair: &SolutionPair, table: &TwistTable, k: usize) -> RingElement {
    let s = ring.ext();
    let mut acc = match pair.g.coeff(k) {
        Some(c) => s.neg(c),
        None => s.zero(),
    };
    for (j, fj) in pair.f.coeffs().iter().enumerate().take(k + 1) {
        if fj.is_zero() {
            continue;
        }
        let t = table.get(j, k - j);
        if !t.is_zero() {
            s.add_assign(&mut acc, &s.mul(fj, t));
        }
    }
    acc
}

/// `ζ = (f·u - g)_k = Σ_j f_j σ^j(u_{k-j}) - g_k`
pub fn discrepancy(ring: &SkewRing, f: &SkewPoly, g: &SkewPoly, u: &SkewPoly, k: usize) -> RingElement {
    let s = ring.ext();
    let mut acc = match g.coeff(k) {
        Some(c) => s.neg(c),
        None => s.zero(),
    };
    for (j, fj) in f.coeffs().iter().enumerate().take(k + 1) {
        if let Some(ul) = u.coeff(k - j) {
            s.add_assign(&mut acc, &s.mul(fj, &ring.tower().apply(j, ul)));
        }
    }
    acc
}

/// Whether `f·u ≡ g mod x^m`.
pub fn is_member(ring: &SkewRing, f: &SkewPoly, g: &SkewPoly, u: &SkewPoly, m: usize) -> bool {
    ring.sub(&ring.mul(f, u), g).truncated(m).is_zero()
}

fn initial_basis(ring: &SkewRing) -> Vec<SolutionPair> {
    let s = ring.ext();
    let r = ring.tower().r();
    let mut pairs = Vec::with_capacity(2 * r as usize);
    for side in [Side::Left, Side::Right] {
        for class in 0..r {
            let c = SkewPoly::constant(s.p_power(class));
            let (f, g) = match side {
                Side::Left => (c, SkewPoly::zero()),
                Side::Right => (SkewPoly::zero(), c),
            };
            pairs.push(SolutionPair { f, g, side, class, exponent: 0 });
        }
    }
    pairs
}

fn step(ring: &SkewRing, pairs: &[SolutionPair], table: &TwistTable, k: usize) -> Vec<SolutionPair> {
    let s = ring.ext();
    let zetas: Vec<RingElement> = pairs.iter().map(|p| discrepancy_from_table(ring, p, table, k)).collect();
    let vals: Vec<u32> = zetas.iter().map(|z| s.valuation(z)).collect();
    pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            if zetas[i].is_zero() {
                return pair.clone();
            }
            let reducer = (0..pairs.len())
                .filter(|&j| pairs[j].term_rank() < pair.term_rank() && vals[j] <= vals[i])
                .min_by_key(|&j| (pairs[j].term_rank(), pairs[j].class));
            match reducer {
                Some(j) => {
                    let (vi, ui) = s.unit_part(&zetas[i]);
                    let (vj, uj) = s.unit_part(&zetas[j]);
                    let uj_inv = s.inverse(&uj).expect("unit part is a unit");
                    let q = s.scalar_mul(s.p().pow(vi - vj), &s.mul(&ui, &uj_inv));
                    SolutionPair {
                        f: ring.sub(&pair.f, &ring.scale_left(&q, &pairs[j].f)),
                        g: ring.sub(&pair.g, &ring.scale_left(&q, &pairs[j].g)),
                        ..pair.clone()
                    }
                }
                None => SolutionPair {
                    f: ring.mul_x(&pair.f),
                    g: ring.mul_x(&pair.g),
                    exponent: pair.exponent + 1,
                    ..pair.clone()
                },
            }
        })
        .collect()
}

/// A left Gröbner basis of `{(f, g) : f·u ≡ g mod x^m}` with `2r` elements.
pub fn skew_byrne_fitzpatrick(ring: &SkewRing, u: &SkewPoly, m: usize) -> SolutionBasis {
    skew_byrne_fitzpatrick_traced(ring, u, m, |_| {})
}

/// As [`skew_byrne_fitzpatrick`], reporting the minimal exponents after each step.
pub fn skew_byrne_fitzpatrick_traced(
    ring: &SkewRing,
    u: &SkewPoly,
    m: usize,
    mut trace: impl FnMut(&TraceStep),
) -> SolutionBasis {
    let table = TwistTable::new(ring, u, m);
    let mut basis = SolutionBasis { pairs: initial_basis(ring), depth: 0 };
    for k in 0..m {
        basis = SolutionBasis { pairs: step(ring, &basis.pairs, &table, k), depth: k + 1 };
        trace(&TraceStep { step: k, lambda: basis.lambda(), mu: basis.mu() });
    }
    basis
}
