//! Exact arithmetic in Galois rings and in the tower
//! `Z/p^r ⊆ R = GR(p^r, s) ⊆ S = GR(p^r, sm)`.
//!
//! Every level is a quotient `C[x]/(f)` of a polynomial ring over the level
//! below it, with `f` monic. Elements are stored as flat vectors of residues
//! modulo `p^r`: an element of a level of degree `d` over a coefficient ring of
//! width `w` occupies `d * w` machine words, least-degree coefficient first.
//! Addition and negation are therefore coordinatewise at every level, while
//! multiplication recurses through the coefficient rings.

pub mod poly;
mod tower;

use std::sync::Arc;

use rand::Rng;

use crate::counter;
use crate::error::{Error, Result};

pub use tower::{hensel_lift, Automorphism, Level, Tower, TowerParams};

/// An element of one level of a tower, as a flat vector of base residues.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct RingElement {
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn from_flat(coeffs: Vec<u64>) -> Self {
        RingElement { coeffs }
    }

    /// Base residues, least significant first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[inline]
fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    a * b % q
}

/// p-adic valuation of a residue modulo `p^r`, with `v(0) = r`.
#[inline]
fn int_valuation(mut c: u64, p: u64, r: u32) -> u32 {
    if c == 0 {
        return r;
    }
    let mut v = 0;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

/// Inverse of `a` modulo `n` when `gcd(a, n) = 1`.
/// Inverse of `a` modulo an irreducible `modulus` over `Z/p`, by the
/// extended Euclidean algorithm on flat coefficient vectors.
fn prime_field_poly_inverse(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    while r1.len() > 1 {
        let lead_inv = int_inverse(r1[r1.len() - 1], p).expect("nonzero leading coefficient");
        while r0.len() >= r1.len() {
            let shift = r0.len() - r1.len();
            let c = mul_mod(r0[r0.len() - 1], lead_inv, p);
            for (j, &y) in r1.iter().enumerate() {
                r0[shift + j] = sub_mod(r0[shift + j], mul_mod(c, y, p), p);
            }
            if s0.len() < s1.len() + shift {
                s0.resize(s1.len() + shift, 0);
            }
            for (j, &y) in s1.iter().enumerate() {
                s0[shift + j] = sub_mod(s0[shift + j], mul_mod(c, y, p), p);
            }
            trim(&mut r0);
        }
        trim(&mut s0);
        std::mem::swap(&mut r0, &mut r1);
        std::mem::swap(&mut s0, &mut s1);
    }
    let c = int_inverse(*r1.first().expect("element shares a factor with the modulus"), p).expect("unit");
    s1.iter().map(|&y| mul_mod(y, c, p)).collect()
}

fn int_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// One level `C[x]/(f)` of a Galois ring tower.
///
/// The prime level `Z/p^r` has no coefficient ring and degree one.
#[derive(Debug)]
pub struct GaloisRing {
    p: u64,
    r: u32,
    char_modulus: u64,
    coeff: Option<Arc<GaloisRing>>,
    /// Monic modulus, `degree + 1` coefficient-ring elements.
    modulus: Vec<RingElement>,
    /// Nonzero negated low coefficients of the modulus as `(index, value)`,
    /// only used when coefficients are scalars.
    neg_tail: Vec<(usize, u64)>,
    degree: usize,
    cw: usize,
    width: usize,
    counted: bool,
    /// Products and reductions may be accumulated without intermediate `% p^r`.
    lazy_mul: bool,
    residue: Option<Arc<GaloisRing>>,
}

impl GaloisRing {
    /// The ring of integers modulo `p^r`.
    pub fn integers(p: u64, r: u32) -> Result<Arc<GaloisRing>> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q < (1u64 << 32))
            .ok_or_else(|| Error::InvalidParams(format!("p^r = {p}^{r} must be below 2^32")))?;
        let residue = if r > 1 {
            Some(GaloisRing::integers(p, 1)?)
        } else {
            None
        };
        Ok(Arc::new(GaloisRing {
            p,
            r,
            char_modulus: q,
            coeff: None,
            modulus: vec![RingElement::from_flat(vec![0]), RingElement::from_flat(vec![1])],
            neg_tail: Vec::new(),
            degree: 1,
            cw: 1,
            width: 1,
            counted: false,
            lazy_mul: true,
            residue,
        }))
    }

    /// The quotient `coeff[x]/(modulus)` for a monic `modulus` of degree at least one.
    ///
    /// Irreducibility of the residue modulus is not checked here; [`Tower`]
    /// validates it for the rings it builds.
    pub(crate) fn extension(
        coeff: Arc<GaloisRing>,
        modulus: Vec<RingElement>,
        counted: bool,
    ) -> Result<Arc<GaloisRing>> {
        let degree = modulus
            .len()
            .checked_sub(1)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidParams("modulus must have degree at least 1".into()))?;
        if modulus.iter().any(|c| c.coeffs.len() != coeff.width) {
            return Err(Error::InvalidParams("modulus coefficient has wrong width".into()));
        }
        if modulus[degree] != coeff.one() {
            return Err(Error::InvalidParams("modulus must be monic".into()));
        }
        let q = coeff.char_modulus;
        if modulus.iter().flat_map(|c| &c.coeffs).any(|&c| c >= q) {
            return Err(Error::InvalidParams("modulus coefficients must be reduced".into()));
        }
        let cw = coeff.width;
        let neg_tail = if cw == 1 {
            modulus[..degree]
                .iter()
                .enumerate()
                .map(|(j, c)| (j, (q - c.coeffs[0]) % q))
                .filter(|&(_, c)| c != 0)
                .collect()
        } else {
            Vec::new()
        };
        let bound = (2 * degree as u128) * ((q - 1) as u128) * ((q - 1) as u128);
        let lazy_mul = bound < (1u128 << 64);
        let residue = if coeff.r > 1 {
            let res_coeff = coeff.residue_field_arc();
            let res_mod = modulus.iter().map(|c| coeff.reduce_mod_p(c)).collect();
            Some(GaloisRing::extension(res_coeff, res_mod, false)?)
        } else {
            None
        };
        Ok(Arc::new(GaloisRing {
            p: coeff.p,
            r: coeff.r,
            char_modulus: q,
            coeff: Some(coeff),
            modulus,
            neg_tail,
            degree,
            cw,
            width: degree * cw,
            counted,
            lazy_mul,
            residue,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The characteristic `p^r`.
    pub fn characteristic(&self) -> u64 {
        self.char_modulus
    }

    /// Degree over the coefficient ring.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of base residues per element.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn coefficient_ring(&self) -> Option<&Arc<GaloisRing>> {
        self.coeff.as_ref()
    }

    pub fn modulus(&self) -> &[RingElement] {
        &self.modulus
    }

    /// Size of the residue field, `p^width`, if it fits in a `u64`.
    pub fn residue_field_size(&self) -> Option<u64> {
        self.p.checked_pow(self.width as u32)
    }

    /// Number of elements, `p^(r * width)`, if it fits in a `u64`.
    pub fn element_count(&self) -> Option<u64> {
        self.char_modulus.checked_pow(self.width as u32)
    }

    /// The element with flat base-`p^r` digits of `index`.
    pub fn element_from_index(&self, mut index: u64) -> RingElement {
        let q = self.char_modulus;
        let coeffs = (0..self.width)
            .map(|_| {
                let c = index % q;
                index /= q;
                c
            })
            .collect();
        RingElement { coeffs }
    }

    /// Iterates over all elements; only sensible for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        let count = self.element_count().expect("ring too large to enumerate");
        (0..count).map(move |i| self.element_from_index(i))
    }

    /// The same presentation reduced modulo `p`; `self` when `r = 1`.
    pub fn residue_field(&self) -> &GaloisRing {
        self.residue.as_deref().unwrap_or(self)
    }

    fn residue_field_arc(self: &Arc<Self>) -> Arc<GaloisRing> {
        self.residue.clone().unwrap_or_else(|| Arc::clone(self))
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coeffs: vec![0; self.width] }
    }

    pub fn one(&self) -> RingElement {
        let mut coeffs = vec![0; self.width];
        coeffs[0] = 1 % self.char_modulus;
        RingElement { coeffs }
    }

    pub fn from_int(&self, c: i64) -> RingElement {
        let mut coeffs = vec![0; self.width];
        coeffs[0] = c.rem_euclid(self.char_modulus as i64) as u64;
        RingElement { coeffs }
    }

    /// `p^v`, zero once `v >= r`.
    pub fn p_power(&self, v: u32) -> RingElement {
        if v >= self.r {
            return self.zero();
        }
        let mut coeffs = vec![0; self.width];
        coeffs[0] = self.p.pow(v);
        RingElement { coeffs }
    }

    /// The class of `x`, i.e. a root of the modulus.
    pub fn generator(&self) -> RingElement {
        match &self.coeff {
            None => self.zero(),
            Some(c) if self.degree == 1 => self.embed(&c.neg(&self.modulus[0])),
            Some(c) => {
                let mut coeffs = vec![0; self.width];
                coeffs[self.cw..2 * self.cw].copy_from_slice(&c.one().coeffs);
                RingElement { coeffs }
            }
        }
    }

    /// Embeds an element of the coefficient ring as a constant.
    pub fn embed(&self, c: &RingElement) -> RingElement {
        debug_assert_eq!(c.coeffs.len(), self.cw);
        let mut coeffs = vec![0; self.width];
        coeffs[..self.cw].copy_from_slice(&c.coeffs);
        RingElement { coeffs }
    }

    /// The `i`-th coefficient over the coefficient ring.
    pub fn coefficient(&self, x: &RingElement, i: usize) -> RingElement {
        RingElement::from_flat(x.coeffs[i * self.cw..(i + 1) * self.cw].to_vec())
    }

    pub fn coefficients(&self, x: &RingElement) -> Vec<RingElement> {
        (0..self.degree).map(|i| self.coefficient(x, i)).collect()
    }

    pub fn from_coefficients(&self, cs: &[RingElement]) -> RingElement {
        debug_assert_eq!(cs.len(), self.degree);
        let coeffs = cs.iter().flat_map(|c| c.coeffs.iter().copied()).collect();
        RingElement { coeffs }
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        x.is_zero()
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.char_modulus;
        RingElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| add_mod(x, y, q)).collect(),
        }
    }

    pub fn add_assign(&self, a: &mut RingElement, b: &RingElement) {
        let q = self.char_modulus;
        for (x, &y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = add_mod(*x, y, q);
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.char_modulus;
        RingElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| sub_mod(x, y, q)).collect(),
        }
    }

    pub fn sub_assign(&self, a: &mut RingElement, b: &RingElement) {
        let q = self.char_modulus;
        for (x, &y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = sub_mod(*x, y, q);
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let q = self.char_modulus;
        RingElement { coeffs: a.coeffs.iter().map(|&x| (q - x) % q).collect() }
    }

    /// Multiplication by an integer.
    pub fn scalar_mul(&self, c: u64, a: &RingElement) -> RingElement {
        let q = self.char_modulus;
        let c = c % q;
        RingElement { coeffs: a.coeffs.iter().map(|&x| mul_mod(x, c, q)).collect() }
    }

    /// Multiplication by an element of the coefficient ring.
    pub fn coeff_mul(&self, c: &RingElement, a: &RingElement) -> RingElement {
        match &self.coeff {
            Some(cr) if self.cw > 1 => {
                let coeffs = a
                    .coeffs
                    .chunks(self.cw)
                    .flat_map(|chunk| cr.mul_slices(&c.coeffs, chunk))
                    .collect();
                RingElement { coeffs }
            }
            _ => self.scalar_mul(c.coeffs[0], a),
        }
    }

    /// Product, counted when this ring is the instrumented top of a tower.
    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        if self.counted {
            counter::record_mul();
        }
        RingElement { coeffs: self.mul_slices(&a.coeffs, &b.coeffs) }
    }

    /// Product that is never counted; for precomputation.
    pub(crate) fn mul_uncounted(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { coeffs: self.mul_slices(&a.coeffs, &b.coeffs) }
    }

    fn mul_slices(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.width);
        debug_assert_eq!(b.len(), self.width);
        if self.cw == 1 {
            self.mul_scalar_coeffs(a, b)
        } else {
            self.mul_generic(a, b)
        }
    }

    fn mul_scalar_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree;
        let q = self.char_modulus;
        if d == 1 {
            return vec![mul_mod(a[0], b[0], q)];
        }
        let mut prod = vec![0u64; 2 * d - 1];
        if self.lazy_mul {
            let b32: Vec<u32> = b.iter().map(|&x| x as u32).collect();
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let ai = ai as u32 as u64;
                for (acc, &bj) in prod[i..i + d].iter_mut().zip(&b32) {
                    *acc += ai * u64::from(bj);
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = prod[i] % q;
                if c == 0 {
                    continue;
                }
                for &(j, nm) in &self.neg_tail {
                    prod[i - d + j] += c * nm;
                }
            }
        } else {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (acc, &bj) in prod[i..i + d].iter_mut().zip(b) {
                    *acc = add_mod(*acc, mul_mod(ai, bj, q), q);
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = prod[i];
                if c == 0 {
                    continue;
                }
                for &(j, nm) in &self.neg_tail {
                    prod[i - d + j] = add_mod(prod[i - d + j], mul_mod(c, nm, q), q);
                }
            }
        }
        prod.truncate(d);
        for x in &mut prod {
            *x %= q;
        }
        prod
    }

    fn mul_generic(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let cr = self.coeff.as_ref().expect("generic product needs a coefficient ring");
        let (d, cw) = (self.degree, self.cw);
        let q = self.char_modulus;
        let mut prod = vec![0u64; (2 * d - 1) * cw];
        for i in 0..d {
            let ai = &a[i * cw..(i + 1) * cw];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * cw..(j + 1) * cw];
                let t = cr.mul_slices(ai, bj);
                for (acc, x) in prod[(i + j) * cw..(i + j + 1) * cw].iter_mut().zip(t) {
                    *acc = add_mod(*acc, x, q);
                }
            }
        }
        for i in (d..2 * d - 1).rev() {
            let c = prod[i * cw..(i + 1) * cw].to_vec();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let t = cr.mul_slices(&c, &self.modulus[j].coeffs);
                for (acc, x) in prod[(i - d + j) * cw..(i - d + j + 1) * cw].iter_mut().zip(t) {
                    *acc = sub_mod(*acc, x, q);
                }
            }
        }
        prod.truncate(d * cw);
        prod
    }

    pub fn square(&self, a: &RingElement) -> RingElement {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply, uncounted.
    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_uncounted(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_uncounted(&base, &base);
            }
        }
        result
    }

    /// The valuation `v(x)`: the largest `v` with `x ∈ (p^v)`, and `v(0) = r`.
    pub fn valuation(&self, x: &RingElement) -> u32 {
        x.coeffs
            .iter()
            .map(|&c| int_valuation(c, self.p, self.r))
            .min()
            .unwrap_or(self.r)
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        x.coeffs.iter().any(|&c| c % self.p != 0)
    }

    /// Divides every residue by `p^v`; the caller guarantees `v <= v(x)`.
    ///
    /// The quotient is the representative with base residues in `[0, p^(r-v))`;
    /// every other quotient differs from it by an element of `(p^(r-v))`.
    pub fn divide_by_p_power(&self, x: &RingElement, v: u32) -> RingElement {
        if v == 0 {
            return x.clone();
        }
        let pv = self.p.pow(v.min(self.r));
        RingElement {
            coeffs: x
                .coeffs
                .iter()
                .map(|&c| {
                    debug_assert_eq!(c % pv, 0, "residue not divisible by p^v");
                    c / pv
                })
                .collect(),
        }
    }

    /// Splits a nonzero `x` as `p^v * u` with `u` a unit.
    pub fn unit_part(&self, x: &RingElement) -> (u32, RingElement) {
        let v = self.valuation(x);
        (v, self.divide_by_p_power(x, v))
    }

    /// Image in the residue field (residues taken modulo `p`).
    pub fn reduce_mod_p(&self, x: &RingElement) -> RingElement {
        RingElement { coeffs: x.coeffs.iter().map(|&c| c % self.p).collect() }
    }

    pub fn inverse(&self, x: &RingElement) -> Result<RingElement> {
        if !self.is_unit(x) {
            return Err(Error::NotUnit);
        }
        if self.counted {
            counter::record_inv();
        }
        let approx = self.residue_field().field_inverse(&self.reduce_mod_p(x));
        if self.r == 1 {
            return Ok(approx);
        }
        // Newton iteration y <- y (2 - x y) doubles the p-adic precision.
        let two = self.from_int(2);
        let mut y = approx;
        let mut precision = 1;
        while precision < self.r {
            let xy = self.mul_uncounted(x, &y);
            y = self.mul_uncounted(&y, &self.sub(&two, &xy));
            precision *= 2;
        }
        debug_assert_eq!(self.mul_uncounted(x, &y), self.one());
        Ok(y)
    }

    /// Inverse in a field level (`r = 1`) of a nonzero element.
    fn field_inverse(&self, x: &RingElement) -> RingElement {
        debug_assert_eq!(self.r, 1);
        match &self.coeff {
            None => RingElement::from_flat(vec![
                int_inverse(x.coeffs[0], self.p).expect("zero has no inverse")
            ]),
            Some(_) if self.cw == 1 => {
                let modulus: Vec<u64> = self.modulus.iter().map(|c| c.coeffs[0]).collect();
                let mut inv = prime_field_poly_inverse(&x.coeffs, &modulus, self.p);
                inv.resize(self.degree, 0);
                RingElement { coeffs: inv }
            }
            Some(cr) => {
                let a = poly::trimmed(cr, self.coefficients(x));
                let (g, s, _) = poly::ext_gcd(cr, &a, &self.modulus);
                debug_assert_eq!(g.len(), 1, "element shares a factor with the modulus");
                let c = cr.field_inverse(&g[0]);
                let s = poly::scale(cr, &c, &s);
                let s = poly::rem(cr, &s, &self.modulus).expect("monic modulus");
                let mut cs = s;
                cs.resize(self.degree, cr.zero());
                self.from_coefficients(&cs)
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let q = self.char_modulus;
        RingElement { coeffs: (0..self.width).map(|_| rng.gen_range(0..q)).collect() }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        loop {
            let x = self.random(rng);
            if self.is_unit(&x) {
                return x;
            }
        }
    }

    /// Checks that `x` has the right width and reduced residues.
    pub fn validate(&self, x: &RingElement) -> Result<()> {
        if x.coeffs.len() != self.width {
            return Err(Error::LengthMismatch { expected: self.width, found: x.coeffs.len() });
        }
        if x.coeffs.iter().any(|&c| c >= self.char_modulus) {
            return Err(Error::Format(format!("residue out of range [0, {})", self.char_modulus)));
        }
        Ok(())
    }
}
