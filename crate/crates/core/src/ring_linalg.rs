//! Linear algebra over a finite chain ring: Smith normal form, rank profiles,
//! kernels and linear systems.
//!
//! All routines take the ring explicitly; matrices only store elements.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois_ring::{GaloisRing, RingElement, Tower};

/// A dense row-major matrix of ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zeros(ring: &GaloisRing, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &GaloisRing, n: usize) -> RingMatrix {
        RingMatrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElement) -> RingMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RingMatrix { rows, cols, entries }
    }

    /// Builds a matrix from equal-length rows. An empty list gives a `0 × 0` matrix.
    pub fn from_rows(rows: Vec<Vec<RingElement>>) -> RingMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RingMatrix { rows: rows.len(), cols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElement) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RingMatrix {
        RingMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, ring: &GaloisRing, other: &RingMatrix) -> RingMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RingMatrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ring.mul(a, other.get(l, j));
                    ring.add_assign(&mut out.entries[i * other.cols + j], &t);
                }
            }
        }
        out
    }

    /// `A · v` for a column vector `v`.
    pub fn mul_vec(&self, ring: &GaloisRing, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        ring.add_assign(&mut acc, &ring.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, ring: &GaloisRing, i: usize, c: &RingElement) {
        for x in &mut self.entries[i * self.cols..(i + 1) * self.cols] {
            if !x.is_zero() {
                *x = ring.mul(c, x);
            }
        }
    }

    /// `row[dst] -= c · row[src]`
    fn sub_row(&mut self, ring: &GaloisRing, dst: usize, src: usize, c: &RingElement) {
        let cols = self.cols;
        for j in 0..cols {
            let s = &self.entries[src * cols + j];
            if s.is_zero() {
                continue;
            }
            let t = ring.mul(c, s);
            ring.sub_assign(&mut self.entries[dst * cols + j], &t);
        }
    }

    /// `col[dst] -= c · col[src]`
    fn sub_col(&mut self, ring: &GaloisRing, dst: usize, src: usize, c: &RingElement) {
        let cols = self.cols;
        for i in 0..self.rows {
            let s = &self.entries[i * cols + src];
            if s.is_zero() {
                continue;
            }
            let t = ring.mul(c, s);
            ring.sub_assign(&mut self.entries[i * cols + dst], &t);
        }
    }
}

/// `left · A · right = diag`, with `diag[i] = p^(v_i)` and `v_0 ≤ v_1 ≤ ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub left: RingMatrix,
    pub diag: Vec<RingElement>,
    pub right: RingMatrix,
}

impl SnfResult {
    /// The diagonal embedded in a matrix of the original shape.
    pub fn diagonal_matrix(&self, ring: &GaloisRing) -> RingMatrix {
        let mut d = RingMatrix::zeros(ring, self.left.rows(), self.right.rows());
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

fn eliminate(
    ring: &GaloisRing,
    a: &mut RingMatrix,
    mut left: Option<&mut RingMatrix>,
    mut right: Option<&mut RingMatrix>,
) -> Vec<RingElement> {
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..a.rows {
            for j in k..a.cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let v = ring.valuation(x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            diag.resize(n, ring.zero());
            break;
        };
        a.swap_rows(k, pi);
        if let Some(l) = left.as_deref_mut() {
            l.swap_rows(k, pi);
        }
        a.swap_cols(k, pj);
        if let Some(t) = right.as_deref_mut() {
            t.swap_cols(k, pj);
        }

        let (_, unit) = ring.unit_part(a.get(k, k));
        let unit_inv = ring.inverse(&unit).expect("unit part is a unit");
        a.scale_row(ring, k, &unit_inv);
        if let Some(l) = left.as_deref_mut() {
            l.scale_row(ring, k, &unit_inv);
        }
        for i in k + 1..a.rows {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            let c = ring.divide_by_p_power(x, v);
            a.sub_row(ring, i, k, &c);
            if let Some(l) = left.as_deref_mut() {
                l.sub_row(ring, i, k, &c);
            }
        }
        for j in k + 1..a.cols {
            let x = a.get(k, j);
            if x.is_zero() {
                continue;
            }
            let c = ring.divide_by_p_power(x, v);
            a.sub_col(ring, j, k, &c);
            if let Some(t) = right.as_deref_mut() {
                t.sub_col(ring, j, k, &c);
            }
        }
        diag.push(a.get(k, k).clone());
    }
    diag
}

/// Smith normal form with both transforms.
///
/// Pivots are chosen by smallest valuation, ties broken row-major, and
/// scaled to pure powers of `p`.
pub fn smith_normal_form(ring: &GaloisRing, a: &RingMatrix) -> SnfResult {
    let mut work = a.clone();
    let mut left = RingMatrix::identity(ring, a.rows);
    let mut right = RingMatrix::identity(ring, a.cols);
    let diag = eliminate(ring, &mut work, Some(&mut left), Some(&mut right));
    SnfResult { left, diag, right }
}

/// The Smith diagonal only.
pub fn snf_diagonal(ring: &GaloisRing, a: &RingMatrix) -> Vec<RingElement> {
    let mut work = a.clone();
    eliminate(ring, &mut work, None, None)
}

/// Counts `φ_i` of Smith diagonal entries of valuation `i`, for `i < r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankProfile {
    counts: Vec<usize>,
}

impl RankProfile {
    pub fn new(counts: Vec<usize>) -> RankProfile {
        RankProfile { counts }
    }

    pub fn zero(r: u32) -> RankProfile {
        RankProfile { counts: vec![0; r as usize] }
    }

    pub fn from_diagonal(ring: &GaloisRing, diag: &[RingElement]) -> RankProfile {
        let mut counts = vec![0; ring.r() as usize];
        for d in diag.iter().filter(|d| !d.is_zero()) {
            counts[ring.valuation(d) as usize] += 1;
        }
        RankProfile { counts }
    }

    /// `φ_0, ..., φ_{r-1}`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn rank(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn free_rank(&self) -> usize {
        self.counts.first().copied().unwrap_or(0)
    }

    /// Valuations of a generating set realising this profile, nondecreasing.
    pub fn valuations(&self) -> Vec<u32> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n(v as u32, c))
            .collect()
    }

    /// Every profile of total rank `t` over a chain ring of length `r`.
    pub fn all_with_rank(t: usize, r: u32) -> Vec<RankProfile> {
        fn go(t: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<RankProfile>) {
            if slots == 1 {
                prefix.push(t);
                out.push(RankProfile { counts: prefix.clone() });
                prefix.pop();
                return;
            }
            for c in (0..=t).rev() {
                prefix.push(c);
                go(t - c, slots - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(t, r.max(1) as usize, &mut Vec::new(), &mut out);
        out
    }

    /// Pads or checks the profile against a chain ring of length `r`.
    pub fn with_length(&self, r: u32) -> Result<RankProfile> {
        let r = r as usize;
        if self.counts.iter().skip(r).any(|&c| c != 0) {
            return Err(Error::UnrealizableProfile(format!(
                "{self} has terms of valuation ≥ {r}"
            )));
        }
        let mut counts = self.counts.clone();
        counts.resize(r, 0);
        Ok(RankProfile { counts })
    }
}

/// Renders the profile polynomial `Σ φ_i x^i`, e.g. `1+x` or `2+x^2`.
impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Parses the polynomial form (`1+x`, `2x^2+1`, `0`) or a comma-separated
/// coefficient list (`1,1`).
impl FromStr for RankProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<RankProfile> {
        let bad = || Error::Format(format!("cannot parse rank profile {s:?}"));
        let s = s.trim();
        let mut counts: Vec<usize> = Vec::new();
        let mut add = |i: usize, c: usize| {
            if counts.len() <= i {
                counts.resize(i + 1, 0);
            }
            counts[i] += c;
        };
        if s.contains(',') {
            for (i, part) in s.split(',').enumerate() {
                add(i, part.trim().parse().map_err(|_| bad())?);
            }
        } else {
            for term in s.split('+') {
                let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
                if term.is_empty() {
                    return Err(bad());
                }
                match term.find('x') {
                    None => add(0, term.parse().map_err(|_| bad())?),
                    Some(pos) => {
                        let coeff = term[..pos].trim_end_matches('*');
                        let c = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| bad())? };
                        let rest = &term[pos + 1..];
                        let i = if rest.is_empty() {
                            1
                        } else {
                            rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                        };
                        add(i, c);
                    }
                }
            }
        }
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        Ok(RankProfile { counts })
    }
}

pub fn rank_profile(ring: &GaloisRing, a: &RingMatrix) -> RankProfile {
    RankProfile::from_diagonal(ring, &snf_diagonal(ring, a))
}

pub fn rank(ring: &GaloisRing, a: &RingMatrix) -> usize {
    rank_profile(ring, a).rank()
}

pub fn free_rank(ring: &GaloisRing, a: &RingMatrix) -> usize {
    rank_profile(ring, a).free_rank()
}

/// Rank profile over `R` of the coordinate expansion of an `S`-vector.
pub fn vector_rank(tower: &Tower, v: &[RingElement]) -> RankProfile {
    rank_profile(tower.sub(), &tower.expand(v))
}

/// Generators of `{x : A x = 0}` as the rows of the result.
///
/// Directions with `0 < v(d_i) < r` contribute `p^(r - v(d_i))` times the
/// corresponding column of the right transform, so torsion is included.
pub fn kernel_basis(ring: &GaloisRing, a: &RingMatrix) -> RingMatrix {
    let snf = smith_normal_form(ring, a);
    let r = ring.r();
    let mut gens = Vec::new();
    for i in 0..a.cols {
        let col = snf.right.column(i);
        match snf.diag.get(i) {
            Some(d) if !d.is_zero() => {
                let v = ring.valuation(d);
                if v > 0 {
                    let scale = ring.p_power(r - v);
                    gens.push(col.iter().map(|c| ring.mul(&scale, c)).collect());
                }
            }
            _ => gens.push(col),
        }
    }
    RingMatrix { rows: gens.len(), cols: a.cols, entries: gens.into_iter().flatten().collect() }
}

/// A particular solution of `A x = b`, or [`Error::NoSolution`].
pub fn solve(ring: &GaloisRing, a: &RingMatrix, b: &[RingElement]) -> Result<Vec<RingElement>> {
    if b.len() != a.rows {
        return Err(Error::LengthMismatch { expected: a.rows, found: b.len() });
    }
    let snf = smith_normal_form(ring, a);
    let c = snf.left.mul_vec(ring, b);
    let mut y = vec![ring.zero(); a.cols];
    for (i, ci) in c.iter().enumerate() {
        match snf.diag.get(i) {
            Some(d) if !d.is_zero() => {
                let v = ring.valuation(d);
                if ring.valuation(ci) < v {
                    return Err(Error::NoSolution);
                }
                y[i] = ring.divide_by_p_power(ci, v);
            }
            _ => {
                if !ci.is_zero() {
                    return Err(Error::NoSolution);
                }
            }
        }
    }
    Ok(snf.right.mul_vec(ring, &y))
}
