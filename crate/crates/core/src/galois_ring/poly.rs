//! Dense commutative polynomials over one level of a tower.
//!
//! Used to build and validate moduli (irreducibility, Hensel lifting) and
//! for inversion in residue fields. Polynomials are coefficient vectors,
//! least-degree first; results are trimmed of trailing zeros.

use super::{GaloisRing, RingElement};
use crate::error::{Error, Result};

pub type Poly = Vec<RingElement>;

pub fn trimmed(ring: &GaloisRing, mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| ring.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree(a: &[RingElement]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn x(ring: &GaloisRing) -> Poly {
    vec![ring.zero(), ring.one()]
}

pub fn add(ring: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Poly {
    let n = a.len().max(b.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trimmed(ring, out)
}

pub fn sub(ring: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Poly {
    let n = a.len().max(b.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trimmed(ring, out)
}

pub fn scale(ring: &GaloisRing, c: &RingElement, a: &[RingElement]) -> Poly {
    trimmed(ring, a.iter().map(|x| ring.mul_uncounted(c, x)).collect())
}

pub fn mul(ring: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = ring.mul_uncounted(ai, bj);
            ring.add_assign(&mut out[i + j], &t);
        }
    }
    trimmed(ring, out)
}

/// Division with remainder by `b`, whose leading coefficient must be a unit.
pub fn divrem(ring: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Result<(Poly, Poly)> {
    let b = trimmed(ring, b.to_vec());
    let db = degree(&b).ok_or(Error::ZeroPolynomial)?;
    let lc_inv = ring.inverse(&b[db])?;
    let mut rem = trimmed(ring, a.to_vec());
    if rem.len() <= db {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![ring.zero(); rem.len() - db];
    while let Some(dr) = degree(&rem).filter(|&d| d >= db) {
        let c = ring.mul_uncounted(&rem[dr], &lc_inv);
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate() {
            let t = ring.mul_uncounted(&c, bi);
            ring.sub_assign(&mut rem[i + shift], &t);
        }
        quot[shift] = c;
        rem.truncate(dr);
        rem = trimmed(ring, rem);
    }
    Ok((trimmed(ring, quot), rem))
}

pub fn rem(ring: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Result<Poly> {
    divrem(ring, a, b).map(|(_, r)| r)
}

fn mulmod(ring: &GaloisRing, a: &[RingElement], b: &[RingElement], f: &[RingElement]) -> Poly {
    rem(ring, &mul(ring, a, b), f).expect("modulus has unit leading coefficient")
}

/// `a^e mod f` for `f` with unit leading coefficient.
pub fn powmod(ring: &GaloisRing, a: &[RingElement], mut e: u64, f: &[RingElement]) -> Poly {
    let mut result = rem(ring, &[ring.one()], f).expect("modulus has unit leading coefficient");
    let mut base = rem(ring, a, f).expect("modulus has unit leading coefficient");
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(ring, &result, &base, f);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(ring, &base, &base, f);
        }
    }
    result
}

/// `x^(Q^count) mod f`, where `Q` is the size of the residue field of `ring`.
pub fn frobenius_power_of_x(ring: &GaloisRing, f: &[RingElement], count: usize) -> Poly {
    let mut y = rem(ring, &x(ring), f).expect("modulus has unit leading coefficient");
    for _ in 0..count * ring.width() {
        y = powmod(ring, &y, ring.p(), f);
    }
    y
}

pub fn derivative(ring: &GaloisRing, a: &[RingElement]) -> Poly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.scalar_mul(i as u64, c))
        .collect();
    trimmed(ring, out)
}

/// Extended Euclid over a field level: returns `(g, s, t)` with `s a + t b = g`.
pub fn ext_gcd(field: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> (Poly, Poly, Poly) {
    debug_assert_eq!(field.r(), 1);
    let (mut r0, mut r1) = (trimmed(field, a.to_vec()), trimmed(field, b.to_vec()));
    let (mut s0, mut s1) = (vec![field.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![field.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(field, &r0, &r1).expect("nonzero divisor over a field");
        let s2 = sub(field, &s0, &mul(field, &q, &s1));
        let t2 = sub(field, &t0, &mul(field, &q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    (r0, s0, t0)
}

/// Monic greatest common divisor over a field level.
pub fn gcd(field: &GaloisRing, a: &[RingElement], b: &[RingElement]) -> Poly {
    let (g, _, _) = ext_gcd(field, a, b);
    match degree(&g) {
        None => g,
        Some(d) => {
            let inv = field.inverse(&g[d]).expect("nonzero over a field");
            scale(field, &inv, &g)
        }
    }
}

/// Ben-Or's irreducibility test for a monic polynomial over a field level:
/// `f` of degree `d` is irreducible iff `gcd(x^(Q^i) - x, f) = 1` for all
/// `i ≤ d/2`. Reducible inputs usually exit after a few steps.
pub fn is_irreducible(field: &GaloisRing, f: &[RingElement]) -> bool {
    debug_assert_eq!(field.r(), 1);
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    let xp = x(field);
    let mut y = rem(field, &xp, f).expect("monic");
    for _ in 0..d / 2 {
        for _ in 0..field.width() {
            y = powmod(field, &y, field.p(), f);
        }
        let h = sub(field, &y, &xp);
        if degree(&gcd(field, &h, f)) != Some(0) {
            return false;
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `d` over a field level.
///
/// Candidates are ordered by the integer whose base-`|F|` digits are the
/// coefficients `c_0, ..., c_{d-1}` with `c_{d-1}` most significant, so sparse
/// low-order polynomials such as `x^4 + x + 1` come first.
pub fn smallest_irreducible(field: &GaloisRing, d: usize) -> Poly {
    debug_assert_eq!(field.r(), 1);
    let size = field.element_count().expect("residue field too large to enumerate");
    let mut digits = vec![0u64; d];
    loop {
        let mut f: Poly = digits.iter().map(|&i| field.element_from_index(i)).collect();
        f.push(field.one());
        if is_irreducible(field, &f) {
            return f;
        }
        let mut i = 0;
        loop {
            assert!(i < d, "no irreducible polynomial of degree {d}");
            digits[i] += 1;
            if digits[i] < size {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
