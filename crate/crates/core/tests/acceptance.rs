//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any of them fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use gabring::counter;
use gabring::gabidulin::{power_basis, sample_error, SampledError};
use gabring::key_equation::{is_member, skew_byrne_fitzpatrick, Side, SolutionBasis};
use gabring::ring_linalg::vector_rank;
use gabring::{decode, wb_decode, GabidulinCode, RankProfile, RingElement, SkewPoly, SkewRing, Tower};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUND_TRIP_SETS: [(u64, u32, usize, usize, usize, usize); 4] =
    [(2, 2, 1, 8, 8, 4), (2, 2, 1, 16, 16, 8), (3, 2, 1, 6, 6, 2), (2, 3, 1, 8, 8, 4)];
const ROUND_TRIP_TRIALS_PER_RANK: usize = 500;
const WB_AGREEMENT_TRIALS: usize = 1000;
const EXHAUSTIVE_WORDS: usize = 200;
const GROBNER_INPUTS: usize = 100;
const GROBNER_DEGREE: usize = 4;
const ANNIHILATOR_VECTORS: usize = 1000;
const SKEW_CASES_PER_TOWER: usize = 1000;
const SLOPE_GRID: [usize; 4] = [16, 32, 64, 128];
const SKEW_SLOPE_GRID: [usize; 4] = [32, 64, 128, 256];
const MAX_DECODE_SLOPE: f64 = 2.4;
const MIN_WB_SLOPE_MARGIN: f64 = 0.4;
const MAX_SKEW_SLOPE: f64 = 2.4;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn violations(count: usize, checked: usize, what: &str) -> Outcome {
        Outcome { passed: count == 0, detail: format!("{checked} {what}, {count} violations") }
    }
}

// Rank oracle: Gaussian elimination by minimal valuation on raw residues mod p^r.

fn valuation(x: u64, p: u64, r: u32) -> u32 {
    if x == 0 {
        return r;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: u64, q: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (q as i128, a as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {q}");
    t.rem_euclid(q as i128) as u64
}

/// Number of nonzero invariant factors of a `rows × cols` matrix over `Z/p^r`.
fn oracle_matrix_rank(m: &mut [u64], rows: usize, cols: usize, p: u64, r: u32) -> usize {
    let q = p.pow(r);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = valuation(m[i * cols + j], p, r);
                if v < r && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        for j in 0..cols {
            m.swap(k * cols + j, pi * cols + j);
        }
        for i in 0..rows {
            m.swap(i * cols + k, i * cols + pj);
        }
        let pv = p.pow(v);
        let unit_inv = inverse_mod(m[k * cols + k] / pv, q);
        for i in k + 1..rows {
            let b = m[i * cols + k];
            if b == 0 {
                continue;
            }
            let factor = (b / pv) * unit_inv % q;
            for j in k..cols {
                let sub = factor * m[k * cols + j] % q;
                m[i * cols + j] = (m[i * cols + j] + q - sub) % q;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the `R`-module spanned by `v`, from its `Z/p^r`-rank divided by `s`.
fn oracle_vector_rank(tower: &Tower, v: &[RingElement]) -> usize {
    let s = tower.s();
    let ext = tower.ext();
    let basis: Vec<RingElement> = (0..s)
        .map(|j| {
            let mut e = vec![0; s];
            e[j] = 1;
            tower.embed(&RingElement::from_flat(e))
        })
        .collect();
    let columns: Vec<RingElement> = v.iter().flat_map(|x| basis.iter().map(|b| ext.mul(x, b))).collect();
    let rows = ext.width();
    let cols = columns.len();
    let mut m = vec![0; rows * cols];
    for (j, c) in columns.iter().enumerate() {
        for (i, &x) in c.coeffs().iter().enumerate() {
            m[i * cols + j] = x;
        }
    }
    let z_rank = oracle_matrix_rank(&mut m, rows, cols, tower.p(), tower.r());
    assert_eq!(z_rank % s, 0);
    z_rank / s
}

fn add_words(tower: &Tower, a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
    a.iter().zip(b).map(|(x, y)| tower.ext().add(x, y)).collect()
}

fn random_profile(rng: &mut ChaCha8Rng, t: usize, r: u32) -> RankProfile {
    let all = RankProfile::all_with_rank(t, r);
    all[rng.gen_range(0..all.len())].clone()
}

fn power_basis_code(set: (u64, u32, usize, usize, usize, usize)) -> GabidulinCode {
    let (p, r, s, m, n, k) = set;
    GabidulinCode::with_power_basis(Tower::auto(p, r, s, m).unwrap(), n, k).unwrap()
}

fn received_word(code: &GabidulinCode, f: &SkewPoly, e: &SampledError) -> Vec<RingElement> {
    add_words(code.tower(), &code.encode(f).unwrap(), &e.error)
}

/// The key equation for the true error span polynomial of an injected error.
fn key_equation_holds(code: &GabidulinCode, e: &SampledError) -> bool {
    let ring = code.ring();
    let lambda = ring.annihilator_general(&e.generators);
    if lambda.degree() != Some(e.profile.rank()) || !ring.is_primitive(&lambda) {
        return false;
    }
    let syndrome = code.syndrome_poly(&e.error).unwrap();
    let omega = ring.mul(&lambda, &syndrome).truncated(code.n() - code.k());
    omega.degree() < lambda.degree()
}

/// Criteria 1 and 5 share the injected errors.
fn round_trip_and_key_equation() -> (Outcome, Outcome) {
    let mut trials = 0;
    let mut failures = 0;
    let mut key_violations = 0;
    let mut profiles_seen = 0;
    for (idx, &set) in ROUND_TRIP_SETS.iter().enumerate() {
        let code = power_basis_code(set);
        let tower = Arc::clone(code.tower());
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + idx as u64);
        for t in 0..=code.radius() {
            let profiles = RankProfile::all_with_rank(t, tower.r());
            profiles_seen += profiles.len();
            for trial in 0..ROUND_TRIP_TRIALS_PER_RANK {
                let profile = &profiles[trial % profiles.len()];
                let f = code.random_message(&mut rng);
                let e = sample_error(&tower, code.n(), profile, &mut rng).unwrap();
                let r = received_word(&code, &f, &e);
                trials += 1;
                if decode(&code, &r).unwrap().message() != Some(&f) {
                    failures += 1;
                }
                if !key_equation_holds(&code, &e) {
                    key_violations += 1;
                }
            }
        }
    }
    let c1 = Outcome {
        passed: failures == 0,
        detail: format!("{trials} trials over {profiles_seen} rank profiles, {failures} wrong messages"),
    };
    (c1, Outcome::violations(key_violations, trials, "injected errors"))
}

fn exhaustive_and_wb_agreement() -> Outcome {
    let code = power_basis_code((2, 2, 1, 4, 4, 2));
    let tower = Arc::clone(code.tower());
    let ext = tower.ext();
    let (p, r) = (tower.p(), tower.r());
    let elements: Vec<RingElement> = ext.elements().collect();
    let mut codewords = Vec::with_capacity(elements.len() * elements.len());
    for a in &elements {
        for b in &elements {
            let c = code.encode(&SkewPoly::from_coeffs(vec![a.clone(), b.clone()])).unwrap();
            codewords.push(c.iter().flat_map(|x| x.coeffs().to_vec()).collect::<Vec<u64>>());
        }
    }
    let q = tower.base().characteristic();
    let (m, n) = (tower.m(), code.n());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut nearest_mismatches = 0;
    let mut buf = vec![0u64; m * n];
    for _ in 0..EXHAUSTIVE_WORDS {
        let t = rng.gen_range(0..=code.radius());
        let profile = random_profile(&mut rng, t, r);
        let f = code.random_message(&mut rng);
        let e = sample_error(&tower, n, &profile, &mut rng).unwrap();
        let word = received_word(&code, &f, &e);
        let flat: Vec<u64> = word.iter().flat_map(|x| x.coeffs().to_vec()).collect();
        let mut best = usize::MAX;
        let mut nearest = Vec::new();
        for (idx, c) in codewords.iter().enumerate() {
            for j in 0..n {
                for i in 0..m {
                    buf[i * n + j] = (flat[j * m + i] + q - c[j * m + i]) % q;
                }
            }
            let d = oracle_matrix_rank(&mut buf, m, n, p, r);
            if d < best {
                best = d;
                nearest.clear();
            }
            if d == best {
                nearest.push(idx);
            }
        }
        let decoded = decode(&code, &word).unwrap();
        let agrees = match (decoded.message(), nearest.as_slice()) {
            (Some(g), &[idx]) => {
                let c: Vec<u64> = code.encode(g).unwrap().iter().flat_map(|x| x.coeffs().to_vec()).collect();
                c == codewords[idx]
            }
            _ => false,
        };
        if !agrees {
            nearest_mismatches += 1;
        }
    }

    let mut wb_mismatches = 0;
    for (idx, &set) in ROUND_TRIP_SETS.iter().enumerate() {
        let code = power_basis_code(set);
        let tower = Arc::clone(code.tower());
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + idx as u64);
        for _ in 0..WB_AGREEMENT_TRIALS {
            let t = rng.gen_range(0..=code.radius());
            let profile = random_profile(&mut rng, t, tower.r());
            let f = code.random_message(&mut rng);
            let e = sample_error(&tower, code.n(), &profile, &mut rng).unwrap();
            let word = received_word(&code, &f, &e);
            let fast = decode(&code, &word).unwrap();
            let wb = wb_decode(&code, &word).unwrap();
            if fast.message() != wb.message() || fast.message() != Some(&f) {
                wb_mismatches += 1;
            }
        }
    }
    Outcome {
        passed: nearest_mismatches == 0 && wb_mismatches == 0,
        detail: format!(
            "{EXHAUSTIVE_WORDS} words against {} codewords: {nearest_mismatches} mismatches; \
             {} reference-decoder trials: {wb_mismatches} mismatches",
            codewords.len(),
            WB_AGREEMENT_TRIALS * ROUND_TRIP_SETS.len()
        ),
    }
}

/// Leading term `(side, exponent, coefficient)` of a pair under `(1,0) ≺ (0,1) ≺ (x,0) ≺ ...`.
fn leading_term(f: &SkewPoly, g: &SkewPoly) -> Option<(Side, usize, RingElement)> {
    let lf = f.degree().map(|d| 2 * d);
    let lg = g.degree().map(|d| 2 * d + 1);
    match (lf, lg) {
        (None, None) => None,
        (Some(a), b) if b.is_none_or(|b| a > b) => Some((Side::Left, a / 2, f.leading_coeff().unwrap().clone())),
        _ => Some((Side::Right, lg.unwrap() / 2, g.leading_coeff().unwrap().clone())),
    }
}

fn basis_shape_ok(ring: &SkewRing, basis: &SolutionBasis, u: &SkewPoly, m: usize) -> bool {
    let ext = ring.ext();
    let r = ring.tower().r();
    if basis.pairs.len() != 2 * r as usize {
        return false;
    }
    let shaped = basis.pairs.iter().all(|pair| {
        leading_term(&pair.f, &pair.g).is_some_and(|(side, e, c)| {
            side == pair.side && e == pair.exponent && c == ext.p_power(pair.class)
        }) && is_member(ring, &pair.f, &pair.g, u, m)
    });
    let nonincreasing = |xs: Vec<usize>| xs.windows(2).all(|w| w[0] >= w[1]);
    shaped && nonincreasing(basis.lambda()) && nonincreasing(basis.mu())
}

/// Every nonzero `(f, g)` over `Z/4` with degrees at most 4 and
/// `f·u ≡ g mod x^m` has a leading term divisible by a basis leading term.
fn brute_force_reducible(basis: &SolutionBasis, u: &[u64], m: usize) -> bool {
    const Q: u64 = 4;
    let len = GROBNER_DEGREE + 1;
    let lms: Vec<(Side, usize, u32)> = basis.pairs.iter().map(|p| (p.side, p.exponent, p.class)).collect();
    let reducible = |side: Side, e: usize, c: u64| {
        let v = valuation(c, 2, 2);
        lms.iter().any(|&(s, x, class)| s == side && x <= e && class <= v)
    };
    let digits = |mut idx: usize, count: usize| {
        (0..count)
            .map(|_| {
                let d = idx as u64 % Q;
                idx /= Q as usize;
                d
            })
            .collect::<Vec<u64>>()
    };
    let free = len - m;
    for fi in 0..(Q as usize).pow(len as u32) {
        let f = digits(fi, len);
        let mut low = vec![0u64; m];
        for (i, &fc) in f.iter().enumerate() {
            for (j, &uc) in u.iter().enumerate() {
                if i + j < m {
                    low[i + j] = (low[i + j] + fc * uc) % Q;
                }
            }
        }
        for gi in 0..(Q as usize).pow(free as u32) {
            let mut g = low.clone();
            g.extend(digits(gi, free));
            let top = (0..2 * len).rev().find(|&t| if t % 2 == 0 { f[t / 2] != 0 } else { g[t / 2] != 0 });
            let Some(t) = top else { continue };
            let (side, coeff) = if t % 2 == 0 { (Side::Left, f[t / 2]) } else { (Side::Right, g[t / 2]) };
            if !reducible(side, t / 2, coeff) {
                return false;
            }
        }
    }
    true
}

fn grobner_suite() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    let z4 = SkewRing::new(Tower::auto(2, 2, 1, 1).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..GROBNER_INPUTS {
        let m = rng.gen_range(1..=4);
        let u: Vec<u64> = (0..m).map(|_| rng.gen_range(0..4)).collect();
        let poly = SkewPoly::from_coeffs(u.iter().map(|&c| RingElement::from_flat(vec![c])).collect());
        let basis = skew_byrne_fitzpatrick(&z4, &poly, m);
        checked += 1;
        if !basis_shape_ok(&z4, &basis, &poly, m) || !brute_force_reducible(&basis, &u, m) {
            violations += 1;
        }
    }
    for (p, r, s, mm) in [(2, 2, 1, 3), (2, 3, 1, 2), (3, 2, 1, 2), (2, 2, 2, 2)] {
        let ring = SkewRing::new(Tower::auto(p, r, s, mm).unwrap());
        for _ in 0..GROBNER_INPUTS {
            let m = rng.gen_range(1..=8);
            let u = SkewPoly::from_coeffs((0..m).map(|_| ring.ext().random(&mut rng)).collect());
            let basis = skew_byrne_fitzpatrick(&ring, &u, m);
            checked += 1;
            if !basis_shape_ok(&ring, &basis, &u, m) {
                violations += 1;
            }
        }
    }
    Outcome::violations(violations, checked, "inputs (brute force over Z/4 with degree <= 4)")
}

fn annihilator_degree_law() -> Outcome {
    let towers = [(2, 2, 1, 4), (3, 2, 1, 4), (2, 3, 1, 4), (2, 2, 2, 3)];
    let mut violations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let per_tower = ANNIHILATOR_VECTORS.div_ceil(towers.len());
    for (p, r, s, m) in towers {
        let tower = Tower::auto(p, r, s, m).unwrap();
        let ring = SkewRing::new(Arc::clone(&tower));
        for i in 0..per_tower {
            let n = rng.gen_range(1..=m + 1);
            let e = if i % 2 == 0 {
                let t = rng.gen_range(0..=n.min(m));
                let profile = random_profile(&mut rng, t, r);
                sample_error(&tower, n, &profile, &mut rng).unwrap().error
            } else {
                (0..n)
                    .map(|_| {
                        let v = rng.gen_range(0..=r);
                        tower.ext().scalar_mul(p.pow(v), &tower.ext().random(&mut rng))
                    })
                    .collect()
            };
            let lambda = ring.annihilator_general(&e);
            let rank = oracle_vector_rank(&tower, &e);
            let vanishes = e.iter().all(|x| ring.evaluate(&lambda, x).is_zero());
            if lambda.degree() != Some(rank) || !vanishes || !ring.is_primitive(&lambda) {
                violations += 1;
            }
        }
    }
    Outcome::violations(violations, per_tower * towers.len(), "vectors")
}

fn slope(xs: &[usize], ys: &[u64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| (y as f64).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn decoder_slopes() -> Outcome {
    let mut fast = Vec::new();
    let mut wb = Vec::new();
    let mut mismatches = 0;
    for &n in &SLOPE_GRID {
        let code = power_basis_code((2, 2, 1, n, n, n / 2));
        let tower = Arc::clone(code.tower());
        let mut rng = ChaCha8Rng::seed_from_u64(6 + n as u64);
        let f = code.random_message(&mut rng);
        let e = sample_error(&tower, n, &RankProfile::new(vec![code.radius()]), &mut rng).unwrap();
        let word = received_word(&code, &f, &e);
        let (a, ops_fast) = counter::measure(|| decode(&code, &word).unwrap());
        let (b, ops_wb) = counter::measure(|| wb_decode(&code, &word).unwrap());
        if a.message() != Some(&f) || b.message() != Some(&f) {
            mismatches += 1;
        }
        fast.push(ops_fast.mul);
        wb.push(ops_wb.mul);
    }
    let sf = slope(&SLOPE_GRID, &fast);
    let sw = slope(&SLOPE_GRID, &wb);
    Outcome {
        passed: mismatches == 0 && sf <= MAX_DECODE_SLOPE && sw >= sf + MIN_WB_SLOPE_MARGIN,
        detail: format!(
            "decode slope {sf:.3} (limit {MAX_DECODE_SLOPE}), reference slope {sw:.3} \
             (needs >= {:.3}); S-mul counts {fast:?} vs {wb:?}; {mismatches} wrong messages",
            sf + MIN_WB_SLOPE_MARGIN
        ),
    }
}

fn random_poly(ring: &SkewRing, rng: &mut ChaCha8Rng, len: usize) -> SkewPoly {
    SkewPoly::from_coeffs((0..len).map(|_| ring.ext().random(rng)).collect())
}

fn random_primitive(ring: &SkewRing, rng: &mut ChaCha8Rng, len: usize) -> SkewPoly {
    loop {
        let g = random_poly(ring, rng, len);
        if ring.is_primitive(&g) {
            return g;
        }
    }
}

fn free_points(tower: &Tower, rng: &mut ChaCha8Rng, n: usize) -> Vec<RingElement> {
    loop {
        let pts: Vec<RingElement> = (0..n).map(|_| tower.ext().random(rng)).collect();
        if vector_rank(tower, &pts).free_rank() == n {
            return pts;
        }
    }
}

/// One random instance of every skew-arithmetic identity; returns the number that fail.
fn skew_identities(ring: &SkewRing, rng: &mut ChaCha8Rng) -> usize {
    let tower = Arc::clone(ring.tower());
    let ext = ring.ext();
    let mut bad = 0;
    let mut check = |ok: bool| bad += usize::from(!ok);

    let f = {
        let len = rng.gen_range(0..10);
        random_poly(ring, rng, len)
    };
    let g = {
        let len = rng.gen_range(1..6);
        random_primitive(ring, rng, len)
    };
    let d = ring.residue_degree(&g).unwrap();
    let remainder_ok = |rem: &SkewPoly| rem.degree().is_none_or(|e| e < d);
    let (q, rem) = ring.right_divide(&f, &g).unwrap();
    check(ring.add(&ring.mul(&q, &g), &rem) == f && remainder_ok(&rem));
    let (q, rem) = ring.left_divide(&f, &g).unwrap();
    check(ring.add(&ring.mul(&g, &q), &rem) == f && remainder_ok(&rem));
    let a = {
        let len = rng.gen_range(0..6);
        random_poly(ring, rng, len)
    };
    check(ring.right_divide(&ring.mul(&a, &g), &g).unwrap() == (a.clone(), SkewPoly::zero()));
    check(ring.left_divide(&ring.mul(&g, &a), &g).unwrap() == (a.clone(), SkewPoly::zero()));

    let x = ext.random(rng);
    check(ring.evaluate(&ring.mul(&f, &a), &x) == ring.evaluate(&f, &ring.evaluate(&a, &x)));

    let n = rng.gen_range(1..=tower.m());
    let pts = free_points(&tower, rng, n);
    let vals: Vec<RingElement> = (0..n).map(|_| ext.random(rng)).collect();
    let interp = ring.interpolate(&pts, &vals).unwrap();
    check(interp.degree().is_none_or(|d| d < n) && ring.multipoint_evaluate(&interp, &pts) == vals);

    let (u, h) = ring.monicize(&g).unwrap();
    check(ring.mul(&u, &g) == h && h.degree() == Some(d) && h.leading_coeff() == Some(&ext.one()));
    let (u, h) = ring.right_monicize(&g).unwrap();
    check(ring.mul(&g, &u) == h && h.degree() == Some(d) && h.leading_coeff() == Some(&ext.one()));
    bad
}

fn skew_suite() -> Outcome {
    let towers = [(2, 2, 1, 4), (3, 2, 1, 3), (2, 3, 1, 4), (2, 2, 2, 3)];
    let mut violations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, r, s, m) in towers {
        let ring = SkewRing::new(Tower::auto(p, r, s, m).unwrap());
        for _ in 0..SKEW_CASES_PER_TOWER {
            violations += skew_identities(&ring, &mut rng);
        }
    }

    let small = SkewRing::new(Tower::auto(2, 2, 1, 8).unwrap());
    let big_tower = Tower::auto(2, 2, 1, *SKEW_SLOPE_GRID.last().unwrap()).unwrap();
    let big = SkewRing::new(Arc::clone(&big_tower));
    let (mut mul_ops, mut div_ops, mut interp_ops) = (Vec::new(), Vec::new(), Vec::new());
    for &d in &SKEW_SLOPE_GRID {
        let a = random_poly(&small, &mut rng, d + 1);
        let mut b = random_poly(&small, &mut rng, d);
        b = small.add(&b, &small.x_power(d));
        let (prod, ops) = counter::measure(|| small.mul(&a, &b));
        mul_ops.push(ops.mul);
        let (res, ops) = counter::measure(|| small.right_divide(&prod, &b).unwrap());
        violations += usize::from(res != (a, SkewPoly::zero()));
        div_ops.push(ops.mul);
        let pts = power_basis(&big_tower, d);
        let vals: Vec<RingElement> = (0..d).map(|_| big.ext().random(&mut rng)).collect();
        let (interp, ops) = counter::measure(|| big.interpolate(&pts, &vals).unwrap());
        violations += usize::from(big.multipoint_evaluate(&interp, &pts) != vals);
        interp_ops.push(ops.mul);
    }
    let slopes = [
        ("mul", slope(&SKEW_SLOPE_GRID, &mul_ops)),
        ("divide", slope(&SKEW_SLOPE_GRID, &div_ops)),
        ("interpolate", slope(&SKEW_SLOPE_GRID, &interp_ops)),
    ];
    let steep = slopes.iter().filter(|(_, s)| *s > MAX_SKEW_SLOPE).count();
    let shown: Vec<String> = slopes.iter().map(|(name, s)| format!("{name} {s:.3}")).collect();
    Outcome {
        passed: violations == 0 && steep == 0,
        detail: format!(
            "{} cases over {} towers, {violations} violations; slopes {} (limit {MAX_SKEW_SLOPE})",
            SKEW_CASES_PER_TOWER * towers.len(),
            towers.len(),
            shown.join(", ")
        ),
    }
}

fn mrd_check() -> Outcome {
    let tower = Tower::auto(2, 2, 1, 3).unwrap();
    let ext = tower.ext();
    let elements: Vec<RingElement> = ext.elements().collect();
    let mut found = Vec::new();
    let mut passed = true;
    for k in [1usize, 2] {
        let code = GabidulinCode::with_power_basis(Arc::clone(&tower), 3, k).unwrap();
        let mut min_weight = usize::MAX;
        let total = elements.len().pow(k as u32);
        for idx in 1..total {
            let mut rest = idx;
            let coeffs = (0..k)
                .map(|_| {
                    let c = elements[rest % elements.len()].clone();
                    rest /= elements.len();
                    c
                })
                .collect();
            let c = code.encode(&SkewPoly::from_coeffs(coeffs)).unwrap();
            min_weight = min_weight.min(oracle_vector_rank(&tower, &c));
        }
        passed &= min_weight == 3 - k + 1;
        found.push(format!("k={k}: min rank weight {min_weight} (expected {})", 3 - k + 1));
    }
    Outcome { passed, detail: found.join(", ") }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let (c1, c5) = round_trip_and_key_equation();
    results.push(("1 round-trip decoding", c1));
    results.push(("2 oracle equivalence", exhaustive_and_wb_agreement()));
    results.push(("3 Groebner basis suite", grobner_suite()));
    results.push(("4 annihilator degree law", annihilator_degree_law()));
    results.push(("5 syndrome key equation", c5));
    results.push(("6 decoder complexity slopes", decoder_slopes()));
    results.push(("7 skew arithmetic suite", skew_suite()));
    results.push(("8 MRD minimum rank weight", mrd_check()));
    let mut all = true;
    for (name, outcome) in &results {
        all &= outcome.passed;
        println!("{} criterion {name}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("acceptance finished in {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
