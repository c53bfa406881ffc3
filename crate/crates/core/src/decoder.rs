//! Decoding Gabidulin codes over Galois rings.
//!
//! [`decode`] solves the syndrome key equation with
//! [`skew_byrne_fitzpatrick`] and recovers the message from the received
//! word's interpolation polynomial, using `O(r n²)` operations in `S`.
//! [`wb_decode`] solves a Welch–Berlekamp style linear system instead and
//! serves as a cubic-cost reference.

use crate::error::{Error, Result};
use crate::gabidulin::{rank_distance, GabidulinCode};
use crate::galois_ring::RingElement;
use crate::key_equation::{skew_byrne_fitzpatrick, Side, SolutionBasis, SolutionPair};
use crate::ring_linalg::{smith_normal_form, RingMatrix};
use crate::skew_poly::{SkewPoly, SkewRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Message(SkewPoly),
    Failure,
}

/// Intermediate quantities of a decoding attempt.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// The error span polynomial `λ` that was used, if one was found.
    pub lambda: Option<SkewPoly>,
    pub omega: Option<SkewPoly>,
    /// Rank distance between the received word and the re-encoded candidate.
    pub error_rank: Option<usize>,
    /// Whether the final division left no remainder.
    pub remainder_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: DecodeOutcome,
    pub diagnostics: Diagnostics,
}

impl DecodeResult {
    pub fn message(&self) -> Option<&SkewPoly> {
        match &self.outcome {
            DecodeOutcome::Message(f) => Some(f),
            DecodeOutcome::Failure => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.message().is_some()
    }

    fn failure(diagnostics: Diagnostics) -> DecodeResult {
        DecodeResult { outcome: DecodeOutcome::Failure, diagnostics }
    }
}

fn check_word(code: &GabidulinCode, r: &[RingElement]) -> Result<()> {
    if r.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), found: r.len() });
    }
    r.iter().try_for_each(|x| code.tower().ext().validate(x))
}

/// Accepts `f` if `deg f < k` and its codeword is within the decoding radius of `r`.
fn accept(code: &GabidulinCode, r: &[RingElement], f: SkewPoly, mut diagnostics: Diagnostics) -> Result<DecodeResult> {
    if f.degree().is_some_and(|d| d >= code.k()) {
        return Ok(DecodeResult::failure(diagnostics));
    }
    let c = code.encode(&f)?;
    let dist = rank_distance(code.tower(), r, &c)?;
    diagnostics.error_rank = Some(dist);
    if dist > code.radius() {
        return Ok(DecodeResult::failure(diagnostics));
    }
    Ok(DecodeResult { outcome: DecodeOutcome::Message(f), diagnostics })
}

/// Among pairs `(u, v)` with `u` primitive and `deg u > deg v`, one of
/// minimal `deg u`; ties prefer the lower valuation class, then the left side.
pub fn select_key_pair<'a>(ring: &SkewRing, basis: &'a SolutionBasis) -> Option<&'a SolutionPair> {
    basis
        .pairs
        .iter()
        .filter(|p| ring.is_primitive(&p.f) && p.f.degree() > p.g.degree())
        .min_by_key(|p| (p.f.degree(), p.class, p.side != Side::Left))
}

/// Decodes `r` up to rank distance `⌊(n - k)/2⌋`.
pub fn decode(code: &GabidulinCode, r: &[RingElement]) -> Result<DecodeResult> {
    check_word(code, r)?;
    let ring = code.ring();
    let syndrome = code.syndrome_poly(r)?;
    let basis = skew_byrne_fitzpatrick(ring, &syndrome, code.n() - code.k());
    let Some(pair) = select_key_pair(ring, &basis) else {
        return Ok(DecodeResult::failure(Diagnostics::default()));
    };
    let lambda = &pair.f;
    let mut diagnostics = Diagnostics {
        lambda: Some(lambda.clone()),
        omega: Some(pair.g.clone()),
        ..Diagnostics::default()
    };
    let interp = code.newton().interpolate(ring, r)?;
    let psi = ring.right_rem(&ring.mul(lambda, &interp), code.support_annihilator())?;
    let (f, rho) = ring.left_divide(&psi, lambda)?;
    diagnostics.remainder_zero = rho.is_zero();
    if !rho.is_zero() {
        return Ok(DecodeResult::failure(diagnostics));
    }
    accept(code, r, f, diagnostics)
}

/// Welch–Berlekamp style decoding: a nonzero `(V, N)` with `deg V ≤ τ`,
/// `deg N < k + τ` and `V(r_i) = N(g_i)` for all `i`, where `τ = ⌊(n - k)/2⌋`,
/// found as a free direction of the kernel via Smith normal form over `S`;
/// then `f` is the left quotient of `N` by `V`.
///
/// Within the radius `N - V·f` evaluates to `V(e)` on the support, a
/// codeword of the dimension-`(k + τ)` code of rank at most `τ`, hence zero.
pub fn wb_decode(code: &GabidulinCode, r: &[RingElement]) -> Result<DecodeResult> {
    check_word(code, r)?;
    let ring = code.ring();
    let tower = code.tower();
    let s = tower.ext();
    let (n, k, tau) = (code.n(), code.k(), code.radius());
    let v_len = tau + 1;
    let n_len = k + tau;

    let mut rows = Vec::with_capacity(n);
    for (ri, gi) in r.iter().zip(code.support()) {
        let mut row = Vec::with_capacity(v_len + n_len);
        let mut cur = ri.clone();
        for j in 0..v_len {
            if j > 0 {
                cur = tower.apply(1, &cur);
            }
            row.push(cur.clone());
        }
        let mut cur = gi.clone();
        for j in 0..n_len {
            if j > 0 {
                cur = tower.apply(1, &cur);
            }
            row.push(s.neg(&cur));
        }
        rows.push(row);
    }
    let a = RingMatrix::from_rows(rows);
    let snf = smith_normal_form(s, &a);
    let free = (0..v_len + n_len).find(|&j| snf.diag.get(j).is_none_or(RingElement::is_zero));
    let Some(j) = free else {
        return Ok(DecodeResult::failure(Diagnostics::default()));
    };
    let sol = snf.right.column(j);
    let v = SkewPoly::from_coeffs(sol[..v_len].to_vec());
    let num = SkewPoly::from_coeffs(sol[v_len..].to_vec());
    let mut diagnostics = Diagnostics { lambda: Some(v.clone()), omega: None, ..Diagnostics::default() };
    if !ring.is_primitive(&v) {
        return Ok(DecodeResult::failure(diagnostics));
    }
    let (f, rho) = ring.left_divide(&num, &v)?;
    diagnostics.remainder_zero = rho.is_zero();
    if !rho.is_zero() {
        return Ok(DecodeResult::failure(diagnostics));
    }
    accept(code, r, f, diagnostics)
}
