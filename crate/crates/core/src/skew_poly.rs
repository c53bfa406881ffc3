//! The skew polynomial ring `S[x; σ]` with `x·c = σ(c)·x`.
//!
//! A [`SkewPoly`] is a plain coefficient vector; the ring context
//! [`SkewRing`] carries the tower and performs all arithmetic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois_ring::{GaloisRing, RingElement, Tower};
use crate::ring_linalg::{smith_normal_form, RingMatrix};

/// Coefficients least-degree first, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    coeffs: Vec<RingElement>,
}

impl SkewPoly {
    pub fn zero() -> SkewPoly {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<RingElement>) -> SkewPoly {
        while coeffs.last().is_some_and(RingElement::is_zero) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn constant(c: RingElement) -> SkewPoly {
        SkewPoly::from_coeffs(vec![c])
    }

    /// `c·x^i`
    pub fn monomial(ring: &GaloisRing, c: RingElement, i: usize) -> SkewPoly {
        let mut coeffs = vec![ring.zero(); i];
        coeffs.push(c);
        SkewPoly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<RingElement> {
        self.coeffs
    }

    /// `None` for the zero polynomial, which sorts below every degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`, if stored.
    pub fn coeff(&self, i: usize) -> Option<&RingElement> {
        self.coeffs.get(i)
    }

    pub fn leading_coeff(&self) -> Option<&RingElement> {
        self.coeffs.last()
    }

    /// Keeps the terms of degree below `len`, i.e. reduces modulo `x^len`.
    pub fn truncated(&self, len: usize) -> SkewPoly {
        SkewPoly::from_coeffs(self.coeffs.iter().take(len).cloned().collect())
    }
}

/// Arithmetic context for `S[x; σ]`.
#[derive(Clone, Debug)]
pub struct SkewRing {
    tower: Arc<Tower>,
}

impl SkewRing {
    pub fn new(tower: Arc<Tower>) -> SkewRing {
        SkewRing { tower }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// The coefficient ring `S`.
    pub fn ext(&self) -> &GaloisRing {
        self.tower.ext()
    }

    fn sigma(&self, i: usize, c: &RingElement) -> RingElement {
        self.tower.apply(i, c)
    }

    fn sigma_inv(&self, i: usize, c: &RingElement) -> RingElement {
        self.tower.apply_inverse(i, c)
    }

    pub fn one(&self) -> SkewPoly {
        SkewPoly::constant(self.ext().one())
    }

    /// `x^i`
    pub fn x_power(&self, i: usize) -> SkewPoly {
        SkewPoly::monomial(self.ext(), self.ext().one(), i)
    }

    pub fn add(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let s = self.ext();
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            s.add_assign(o, c);
        }
        SkewPoly::from_coeffs(out)
    }

    pub fn sub(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &SkewPoly) -> SkewPoly {
        SkewPoly { coeffs: a.coeffs.iter().map(|c| self.ext().neg(c)).collect() }
    }

    /// `c·a`
    pub fn scale_left(&self, c: &RingElement, a: &SkewPoly) -> SkewPoly {
        let s = self.ext();
        SkewPoly::from_coeffs(a.coeffs.iter().map(|x| s.mul(c, x)).collect())
    }

    /// `a·c = Σ a_i σ^i(c) x^i`
    pub fn scale_right(&self, a: &SkewPoly, c: &RingElement) -> SkewPoly {
        let s = self.ext();
        let mut out = Vec::with_capacity(a.coeffs.len());
        let mut twisted = c.clone();
        for (i, x) in a.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = self.sigma(1, &twisted);
            }
            out.push(s.mul(x, &twisted));
        }
        SkewPoly::from_coeffs(out)
    }

    /// `x·a`, shifting coefficients through `σ`.
    pub fn mul_x(&self, a: &SkewPoly) -> SkewPoly {
        if a.is_zero() {
            return SkewPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(a.coeffs.len() + 1);
        coeffs.push(self.ext().zero());
        coeffs.extend(a.coeffs.iter().map(|c| self.sigma(1, c)));
        SkewPoly::from_coeffs(coeffs)
    }

    /// `(a·b)_k = Σ_j a_j σ^j(b_{k-j})`
    pub fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        if a.is_zero() || b.is_zero() {
            return SkewPoly::zero();
        }
        let s = self.ext();
        let mut out = vec![s.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        let mut twisted = b.coeffs.clone();
        for (j, aj) in a.coeffs.iter().enumerate() {
            if j > 0 {
                for t in &mut twisted {
                    *t = self.sigma(1, t);
                }
            }
            if aj.is_zero() {
                continue;
            }
            for (i, bi) in twisted.iter().enumerate() {
                if !bi.is_zero() {
                    s.add_assign(&mut out[i + j], &s.mul(aj, bi));
                }
            }
        }
        SkewPoly::from_coeffs(out)
    }

    /// Some coefficient is a unit.
    pub fn is_primitive(&self, f: &SkewPoly) -> bool {
        f.coeffs.iter().any(|c| self.ext().is_unit(c))
    }

    /// Degree of the reduction modulo `p`.
    pub fn residue_degree(&self, f: &SkewPoly) -> Option<usize> {
        f.coeffs.iter().rposition(|c| self.ext().is_unit(c))
    }

    /// `f = q·g + rem` for `g` with a unit leading coefficient.
    fn right_divrem_unit(&self, f: &SkewPoly, g: &SkewPoly) -> (SkewPoly, SkewPoly) {
        let s = self.ext();
        let d = g.degree().expect("nonzero divisor");
        let lc_inv = s.inverse(&g.coeffs[d]).expect("unit leading coefficient");
        let Some(e) = f.degree().filter(|&e| e >= d) else {
            return (SkewPoly::zero(), f.clone());
        };
        let mut rem = f.coeffs.clone();
        let mut quot = vec![s.zero(); e - d + 1];
        for k in (d..=e).rev() {
            if rem[k].is_zero() {
                continue;
            }
            // (c x^shift)·g has top coefficient c σ^shift(g_d)
            let shift = k - d;
            let c = s.mul(&rem[k], &self.sigma(shift, &lc_inv));
            for (i, gi) in g.coeffs.iter().enumerate() {
                if !gi.is_zero() {
                    let t = s.mul(&c, &self.sigma(shift, gi));
                    s.sub_assign(&mut rem[i + shift], &t);
                }
            }
            quot[shift] = c;
        }
        rem.truncate(d);
        (SkewPoly::from_coeffs(quot), SkewPoly::from_coeffs(rem))
    }

    /// `f = g·q + rem` for `g` with a unit leading coefficient.
    fn left_divrem_unit(&self, f: &SkewPoly, g: &SkewPoly) -> (SkewPoly, SkewPoly) {
        let s = self.ext();
        let d = g.degree().expect("nonzero divisor");
        let lc_inv = s.inverse(&g.coeffs[d]).expect("unit leading coefficient");
        let Some(e) = f.degree().filter(|&e| e >= d) else {
            return (SkewPoly::zero(), f.clone());
        };
        let mut rem = f.coeffs.clone();
        let mut quot = vec![s.zero(); e - d + 1];
        for k in (d..=e).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let shift = k - d;
            // (g_i x^i)(c x^shift) = g_i σ^i(c) x^(i + shift)
            let c = self.sigma_inv(d, &s.mul(&lc_inv, &rem[k]));
            let mut twisted = c.clone();
            for (i, gi) in g.coeffs.iter().enumerate() {
                if i > 0 {
                    twisted = self.sigma(1, &twisted);
                }
                if !gi.is_zero() {
                    let t = s.mul(gi, &twisted);
                    s.sub_assign(&mut rem[i + shift], &t);
                }
            }
            quot[shift] = c;
        }
        rem.truncate(d);
        (SkewPoly::from_coeffs(quot), SkewPoly::from_coeffs(rem))
    }

    fn split_at(&self, g: &SkewPoly, d: usize) -> (SkewPoly, SkewPoly) {
        let low = SkewPoly::from_coeffs(g.coeffs[..=d].to_vec());
        let mut high = g.coeffs.clone();
        for c in &mut high[..=d] {
            *c = self.ext().zero();
        }
        (low, SkewPoly::from_coeffs(high))
    }

    fn check_primitive(&self, g: &SkewPoly) -> Result<usize> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.residue_degree(g).ok_or(Error::NotPrimitive)
    }

    /// A unit `u` with `h = u·g` monic of degree `deg(g mod p)`.
    ///
    /// Each pass writes `g = low + high` at the residue degree `d`, divides
    /// the nilpotent `high` by `low` on the right and replaces `g` by
    /// `(1 - q)·g`. The part above `d` then lies in a strictly higher power
    /// of `p`, so at most `r` passes are needed.
    pub fn monicize(&self, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let d = self.check_primitive(g)?;
        let mut u = self.one();
        let mut h = g.clone();
        let mut passes = 0;
        while h.degree() != Some(d) {
            assert!(passes < self.tower.r(), "monicization did not converge");
            let (low, high) = self.split_at(&h, d);
            let (q, _) = self.right_divrem_unit(&high, &low);
            let step = self.sub(&self.one(), &q);
            h = self.mul(&step, &h);
            u = self.mul(&step, &u);
            passes += 1;
        }
        let w = self.ext().inverse(&h.coeffs[d])?;
        Ok((self.scale_left(&w, &u), self.scale_left(&w, &h)))
    }

    /// A unit `u` with `h = g·u` monic of degree `deg(g mod p)`.
    pub fn right_monicize(&self, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let d = self.check_primitive(g)?;
        let mut u = self.one();
        let mut h = g.clone();
        let mut passes = 0;
        while h.degree() != Some(d) {
            assert!(passes < self.tower.r(), "monicization did not converge");
            let (low, high) = self.split_at(&h, d);
            let (q, _) = self.left_divrem_unit(&high, &low);
            let step = self.sub(&self.one(), &q);
            h = self.mul(&h, &step);
            u = self.mul(&u, &step);
            passes += 1;
        }
        // (h·w)_d = h_d σ^d(w)
        let w = self.sigma_inv(d, &self.ext().inverse(&h.coeffs[d])?);
        Ok((self.scale_right(&u, &w), self.scale_right(&h, &w)))
    }

    /// `f = q·g + rem` with `deg rem < deg g`, for primitive `g`.
    pub fn right_divide(&self, f: &SkewPoly, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let d = self.check_primitive(g)?;
        if g.degree() == Some(d) {
            return Ok(self.right_divrem_unit(f, g));
        }
        let (u, h) = self.monicize(g)?;
        let (q, rem) = self.right_divrem_unit(f, &h);
        Ok((self.mul(&q, &u), rem))
    }

    /// `f = g·q + rem` with `deg rem < deg g`, for primitive `g`.
    pub fn left_divide(&self, f: &SkewPoly, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let d = self.check_primitive(g)?;
        if g.degree() == Some(d) {
            return Ok(self.left_divrem_unit(f, g));
        }
        let (u, h) = self.right_monicize(g)?;
        let (q, rem) = self.left_divrem_unit(f, &h);
        Ok((self.mul(&u, &q), rem))
    }

    /// Right remainder of `f` by `g`.
    pub fn right_rem(&self, f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly> {
        self.right_divide(f, g).map(|(_, r)| r)
    }

    /// `f(s) = Σ f_i σ^i(s)`
    pub fn evaluate(&self, f: &SkewPoly, point: &RingElement) -> RingElement {
        let s = self.ext();
        let mut acc = s.zero();
        let mut twisted = point.clone();
        for (i, c) in f.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = self.sigma(1, &twisted);
            }
            if !c.is_zero() {
                s.add_assign(&mut acc, &s.mul(c, &twisted));
            }
        }
        acc
    }

    /// `f(s)` given `powers[i] = σ^i(s)` for `i ≤ deg f`.
    pub fn evaluate_with_powers(&self, f: &SkewPoly, powers: &[RingElement]) -> RingElement {
        let s = self.ext();
        let mut acc = s.zero();
        for (c, t) in f.coeffs.iter().zip(powers) {
            if !c.is_zero() {
                s.add_assign(&mut acc, &s.mul(c, t));
            }
        }
        acc
    }

    pub fn multipoint_evaluate(&self, f: &SkewPoly, points: &[RingElement]) -> Vec<RingElement> {
        points.iter().map(|x| self.evaluate(f, x)).collect()
    }

    /// The monic annihilator of degree `n` of `n` points that are linearly
    /// independent over `R`.
    pub fn annihilator_free(&self, points: &[RingElement]) -> Result<SkewPoly> {
        Ok(NewtonBasis::new(self, points)?.annihilator().clone())
    }

    /// A primitive annihilator of minimal degree for arbitrary points.
    ///
    /// Solves the Moore system `Σ_j λ_j σ^j(x_i) = 0` for increasing degree
    /// bounds via Smith normal form over `S`; cubic cost, intended as a
    /// reference.
    pub fn annihilator_general(&self, points: &[RingElement]) -> SkewPoly {
        let s = self.ext();
        let powers: Vec<Vec<RingElement>> = points
            .iter()
            .map(|x| {
                let mut row = vec![x.clone()];
                for _ in 0..points.len() {
                    let next = self.sigma(1, row.last().unwrap());
                    row.push(next);
                }
                row
            })
            .collect();
        for d in 0..=points.len() {
            let moore = RingMatrix::from_fn(points.len(), d + 1, |i, j| powers[i][j].clone());
            let snf = smith_normal_form(s, &moore);
            let free = (0..=d).find(|&j| snf.diag.get(j).is_none_or(RingElement::is_zero));
            if let Some(j) = free {
                return SkewPoly::from_coeffs(snf.right.column(j));
            }
        }
        unreachable!("x^n-type annihilators exist in degree n")
    }

    /// The unique `R` with `deg R < n` and `R(points_i) = values_i`, for points
    /// linearly independent over `R`.
    pub fn interpolate(&self, points: &[RingElement], values: &[RingElement]) -> Result<SkewPoly> {
        NewtonBasis::new(self, points)?.interpolate(self, values)
    }

    /// Reduction of the coefficients modulo `p`, as representatives in `S`.
    pub fn reduce_mod_p(&self, f: &SkewPoly) -> SkewPoly {
        SkewPoly::from_coeffs(f.coeffs.iter().map(|c| self.ext().reduce_mod_p(c)).collect())
    }
}

/// Newton data for a fixed list of points `x_0, ..., x_{n-1}` that are
/// linearly independent over `R`.
///
/// `Λ_0 = 1` and `Λ_{l+1} = (x - a_l)·Λ_l` with `a_l = σ(β_l) β_l^-1`, where
/// `β_l = Λ_l(x_l)` is a unit. The table `N[l][i] = Λ_l(x_i)` for `l ≤ i`
/// follows from `Λ_{l+1}(s) = σ(Λ_l(s)) - a_l Λ_l(s)` without evaluating
/// any polynomial, so construction costs `O(n²)` operations.
#[derive(Clone, Debug)]
pub struct NewtonBasis {
    /// `table[l][i - l] = Λ_l(x_i)`
    table: Vec<Vec<RingElement>>,
    beta_inv: Vec<RingElement>,
    /// `Λ_0, ..., Λ_n`
    lambdas: Vec<SkewPoly>,
}

impl NewtonBasis {
    pub fn new(ring: &SkewRing, points: &[RingElement]) -> Result<NewtonBasis> {
        let s = ring.ext();
        let n = points.len();
        let mut table = Vec::with_capacity(n);
        let mut beta_inv = Vec::with_capacity(n);
        let mut lambdas = Vec::with_capacity(n + 1);
        let mut lambda = ring.one();
        let mut row = points.to_vec();
        for _ in 0..n {
            let beta = &row[0];
            let inv = s.inverse(beta).map_err(|_| Error::DependentPoints)?;
            let a = s.mul(&ring.sigma(1, beta), &inv);
            let next_row: Vec<RingElement> = row[1..]
                .iter()
                .map(|v| s.sub(&ring.sigma(1, v), &s.mul(&a, v)))
                .collect();
            let next = ring.sub(&ring.mul_x(&lambda), &ring.scale_left(&a, &lambda));
            lambdas.push(std::mem::replace(&mut lambda, next));
            table.push(std::mem::replace(&mut row, next_row));
            beta_inv.push(inv);
        }
        lambdas.push(lambda);
        Ok(NewtonBasis { table, beta_inv, lambdas })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// The monic annihilator `Λ_n` of all points.
    pub fn annihilator(&self) -> &SkewPoly {
        self.lambdas.last().expect("Λ_0 is always present")
    }

    /// `Λ_l`, the monic annihilator of the first `l` points.
    pub fn partial_annihilator(&self, l: usize) -> &SkewPoly {
        &self.lambdas[l]
    }

    /// Interpolation in Newton form `R = Σ c_l Λ_l`, where
    /// `c_l = (values_l - Σ_{j<l} c_j Λ_j(x_l)) β_l^-1`.
    pub fn interpolate(&self, ring: &SkewRing, values: &[RingElement]) -> Result<SkewPoly> {
        let n = self.len();
        if values.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: values.len() });
        }
        let s = ring.ext();
        let mut acc: Vec<RingElement> = values.to_vec();
        let mut coeffs = vec![s.zero(); n];
        for l in 0..n {
            let c = s.mul(&acc[l], &self.beta_inv[l]);
            if c.is_zero() {
                continue;
            }
            for (i, v) in self.table[l].iter().enumerate().skip(1) {
                if !v.is_zero() {
                    s.sub_assign(&mut acc[l + i], &s.mul(&c, v));
                }
            }
            for (out, lc) in coeffs.iter_mut().zip(self.lambdas[l].coeffs()) {
                if !lc.is_zero() {
                    s.add_assign(out, &s.mul(&c, lc));
                }
            }
        }
        Ok(SkewPoly::from_coeffs(coeffs))
    }

    /// The vector `y` with `Σ_i y_i σ^t(x_i) = 0` for `t < n - 1` and
    /// `Σ_i y_i σ^(n-1)(x_i) = 1`.
    ///
    /// The map from values to the top coefficient of their interpolation
    /// polynomial is `v ↦ Σ y_i v_i`; since that coefficient is `c_{n-1}`,
    /// `y` solves the transposed Newton system by back substitution.
    pub fn dual_vector(&self, ring: &SkewRing) -> Vec<RingElement> {
        let s = ring.ext();
        let n = self.len();
        let mut y = vec![s.zero(); n];
        for l in (0..n).rev() {
            let mut acc = if l + 1 == n { s.one() } else { s.zero() };
            for (i, v) in self.table[l].iter().enumerate().skip(1) {
                if !v.is_zero() {
                    s.sub_assign(&mut acc, &s.mul(v, &y[l + i]));
                }
            }
            y[l] = s.mul(&acc, &self.beta_inv[l]);
        }
        y
    }
}
