//! Gabidulin codes `{ (f(g_0), ..., f(g_{n-1})) : deg f < k }` over `S`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::galois_ring::{RingElement, Tower};
use crate::ring_linalg::{rank_profile, vector_rank, RankProfile, RingMatrix};
use crate::skew_poly::{NewtonBasis, SkewPoly, SkewRing};

/// A Gabidulin code with its support-dependent precomputations.
#[derive(Clone, Debug)]
pub struct GabidulinCode {
    ring: SkewRing,
    g: Vec<RingElement>,
    h: Vec<RingElement>,
    k: usize,
    /// `g_powers[i][j] = σ^j(g_i)` for `j < k`
    g_powers: Vec<Vec<RingElement>>,
    /// `h_powers[i][j] = σ^i(h_j)` for `i < n - k`
    h_powers: Vec<Vec<RingElement>>,
    newton: NewtonBasis,
}

/// `[1, α, ..., α^(n-1)]`
pub fn power_basis(tower: &Tower, n: usize) -> Vec<RingElement> {
    let ext = tower.ext();
    let alpha = ext.generator();
    let mut out = Vec::with_capacity(n);
    let mut acc = ext.one();
    for _ in 0..n {
        let next = ext.mul_uncounted(&acc, &alpha);
        out.push(std::mem::replace(&mut acc, next));
    }
    out
}

/// The `rows × n` Moore matrix `[σ^i(x_j)]`.
pub fn moore_matrix(tower: &Tower, x: &[RingElement], rows: usize) -> RingMatrix {
    let mut cols: Vec<Vec<RingElement>> = Vec::with_capacity(x.len());
    for v in x {
        let mut col = Vec::with_capacity(rows);
        let mut cur = v.clone();
        for i in 0..rows {
            if i > 0 {
                cur = tower.apply(1, &cur);
            }
            col.push(cur.clone());
        }
        cols.push(col);
    }
    RingMatrix::from_fn(rows, x.len(), |i, j| cols[j][i].clone())
}

fn check_support(tower: &Tower, g: &[RingElement], k: usize) -> Result<()> {
    let n = g.len();
    if k == 0 || k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    for x in g {
        tower.ext().validate(x)?;
    }
    if n > tower.m() || vector_rank(tower, g).free_rank() != n {
        return Err(Error::DependentSupport);
    }
    Ok(())
}

/// A parity support `h`: the `(n-k) × n` Moore matrix of `h` annihilates the
/// `k × n` Moore matrix of `g`.
///
/// `y` spans the kernel of the `(n-1) × n` Moore matrix of `g`, scaled so
/// that its first unit coordinate is `1`, and `h_j = σ^-(n-k-1)(y_j)`.
pub fn parity_support(ring: &SkewRing, g: &[RingElement], k: usize) -> Result<Vec<RingElement>> {
    check_support(ring.tower(), g, k)?;
    let newton = NewtonBasis::new(ring, g)?;
    parity_from_newton(ring, &newton, g.len(), k)
}

fn parity_from_newton(ring: &SkewRing, newton: &NewtonBasis, n: usize, k: usize) -> Result<Vec<RingElement>> {
    let s = ring.ext();
    let y = newton.dual_vector(ring);
    let pivot = y.iter().find(|c| s.is_unit(c)).expect("kernel generator has a unit coordinate");
    let scale = s.inverse(pivot)?;
    let shift = (n - k).saturating_sub(1);
    Ok(y.iter()
        .map(|c| ring.tower().apply_inverse(shift, &s.mul(&scale, c)))
        .collect())
}

impl GabidulinCode {
    /// Validates the support and precomputes `h`, the Newton data of `g` and
    /// the `σ`-powers used by encoding and syndrome computation.
    pub fn new(tower: Arc<Tower>, g: Vec<RingElement>, k: usize) -> Result<GabidulinCode> {
        check_support(&tower, &g, k)?;
        let ring = SkewRing::new(tower);
        let n = g.len();
        let newton = NewtonBasis::new(&ring, &g).map_err(|_| Error::DependentSupport)?;
        let h = parity_from_newton(&ring, &newton, n, k)?;
        let tower = ring.tower();
        let g_powers = g
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(k);
                let mut cur = x.clone();
                for j in 0..k {
                    if j > 0 {
                        cur = tower.apply(1, &cur);
                    }
                    row.push(cur.clone());
                }
                row
            })
            .collect();
        let mut h_powers = Vec::with_capacity(n - k);
        let mut row = h.clone();
        for i in 0..n - k {
            if i > 0 {
                row = row.iter().map(|x| tower.apply(1, x)).collect();
            }
            h_powers.push(row.clone());
        }
        Ok(GabidulinCode { ring, g, h, k, g_powers, h_powers, newton })
    }

    /// The code with support `[1, α, ..., α^(n-1)]`.
    pub fn with_power_basis(tower: Arc<Tower>, n: usize, k: usize) -> Result<GabidulinCode> {
        let g = power_basis(&tower, n);
        GabidulinCode::new(tower, g, k)
    }

    pub fn ring(&self) -> &SkewRing {
        &self.ring
    }

    pub fn tower(&self) -> &Arc<Tower> {
        self.ring.tower()
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `⌊(n - k) / 2⌋`
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn support(&self) -> &[RingElement] {
        &self.g
    }

    pub fn parity_support(&self) -> &[RingElement] {
        &self.h
    }

    /// The monic annihilator `G` of the support.
    pub fn support_annihilator(&self) -> &SkewPoly {
        self.newton.annihilator()
    }

    pub fn newton(&self) -> &NewtonBasis {
        &self.newton
    }

    /// `k × n` generator matrix `[σ^i(g_j)]`.
    pub fn generator_matrix(&self) -> RingMatrix {
        RingMatrix::from_fn(self.k, self.n(), |i, j| self.g_powers[j][i].clone())
    }

    /// `(n - k) × n` parity-check matrix `[σ^i(h_j)]`.
    pub fn parity_check_matrix(&self) -> RingMatrix {
        RingMatrix::from_fn(self.n() - self.k, self.n(), |i, j| self.h_powers[i][j].clone())
    }

    /// `(f(g_0), ..., f(g_{n-1}))` for `deg f < k`.
    pub fn encode(&self, f: &SkewPoly) -> Result<Vec<RingElement>> {
        if let Some(d) = f.degree().filter(|&d| d >= self.k) {
            return Err(Error::DegreeTooLarge { degree: d, bound: self.k - 1 });
        }
        Ok(self
            .g_powers
            .iter()
            .map(|powers| self.ring.evaluate_with_powers(f, powers))
            .collect())
    }

    /// Encodes the message with coefficients `f_0, ..., f_{k-1}`.
    pub fn encode_message(&self, message: &[RingElement]) -> Result<Vec<RingElement>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, found: message.len() });
        }
        self.encode(&SkewPoly::from_coeffs(message.to_vec()))
    }

    /// `Σ_{i < n-k} (Σ_j σ^i(h_j) r_j) x^i`
    pub fn syndrome_poly(&self, r: &[RingElement]) -> Result<SkewPoly> {
        if r.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: r.len() });
        }
        let s = self.ring.ext();
        let coeffs = self
            .h_powers
            .iter()
            .map(|row| {
                let mut acc = s.zero();
                for (hj, rj) in row.iter().zip(r) {
                    if !rj.is_zero() {
                        s.add_assign(&mut acc, &s.mul(hj, rj));
                    }
                }
                acc
            })
            .collect();
        Ok(SkewPoly::from_coeffs(coeffs))
    }

    /// A uniformly random message polynomial of degree below `k`.
    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> SkewPoly {
        let s = self.ring.ext();
        SkewPoly::from_coeffs((0..self.k).map(|_| s.random(rng)).collect())
    }
}

/// Rank of `x - y` over `R`.
pub fn rank_distance(tower: &Tower, x: &[RingElement], y: &[RingElement]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), found: y.len() });
    }
    let ext = tower.ext();
    let diff: Vec<RingElement> = x.iter().zip(y).map(|(a, b)| ext.sub(a, b)).collect();
    Ok(vector_rank(tower, &diff).rank())
}

/// An error `e = a·B` with `a_j = p^(v_j) u_j`.
#[derive(Clone, Debug)]
pub struct SampledError {
    pub error: Vec<RingElement>,
    /// `a`, a minimal generating set of the module spanned by the entries of `e`.
    pub generators: Vec<RingElement>,
    /// `u`, linearly independent over `R`.
    pub units: Vec<RingElement>,
    /// `B`, a `t × n` matrix over `R` of free rank `t`.
    pub coefficients: RingMatrix,
    pub profile: RankProfile,
}

const SAMPLE_ATTEMPTS: usize = 64;

fn retry<T>(mut f: impl FnMut() -> Option<T>) -> Result<T> {
    (0..SAMPLE_ATTEMPTS)
        .find_map(|_| f())
        .ok_or(Error::SamplingExhausted(SAMPLE_ATTEMPTS))
}

/// Samples a length-`n` error whose rank profile is exactly `profile`.
pub fn sample_error<R: Rng + ?Sized>(
    tower: &Tower,
    n: usize,
    profile: &RankProfile,
    rng: &mut R,
) -> Result<SampledError> {
    let profile = profile.with_length(tower.r())?;
    let t = profile.rank();
    if t > n.min(tower.m()) {
        return Err(Error::UnrealizableProfile(format!(
            "{profile} has rank {t} > min(n, m) = {}",
            n.min(tower.m())
        )));
    }
    let ext = tower.ext();
    let sub = tower.sub();
    let vals = profile.valuations();
    for _ in 0..SAMPLE_ATTEMPTS {
        let units = retry(|| {
            let units: Vec<RingElement> = (0..t).map(|_| ext.random(rng)).collect();
            (vector_rank(tower, &units).free_rank() == t).then_some(units)
        })?;
        let coefficients = retry(|| {
            let b = RingMatrix::from_fn(t, n, |_, _| sub.random(rng));
            (rank_profile(sub, &b).free_rank() == t).then_some(b)
        })?;
        let generators: Vec<RingElement> = units
            .iter()
            .zip(&vals)
            .map(|(u, &v)| ext.scalar_mul(tower.p().pow(v), u))
            .collect();
        let error: Vec<RingElement> = (0..n)
            .map(|i| {
                let mut acc = ext.zero();
                for (j, a) in generators.iter().enumerate() {
                    ext.add_assign(&mut acc, &ext.coeff_mul(coefficients.get(j, i), a));
                }
                acc
            })
            .collect();
        if vector_rank(tower, &error) == profile {
            return Ok(SampledError { error, generators, units, coefficients, profile });
        }
    }
    Err(Error::SamplingExhausted(SAMPLE_ATTEMPTS))
}
