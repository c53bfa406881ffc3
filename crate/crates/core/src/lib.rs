//! Gabidulin rank-metric codes over Galois rings.
//!
//! The crate is organised bottom-up:
//!
//! - [`galois_ring`]: the tower `Z/p^r ⊆ R = GR(p^r, s) ⊆ S = GR(p^r, sm)` and
//!   the Frobenius generator `σ` of `Gal_R(S)`.
//! - [`ring_linalg`]: matrices over a chain ring, Smith normal form, rank profiles.
//! - [`skew_poly`]: the skew polynomial ring `S[x; σ]`.
//! - [`gabidulin`]: code construction, encoding, syndromes and error sampling.
//! - [`key_equation`]: a Byrne–Fitzpatrick style solver for `f·u ≡ g mod x^m`.
//! - [`decoder`]: the quadratic-time decoder and a Welch–Berlekamp baseline.
//!
//! Operations in `S` are counted per thread (see [`counter`]) so that the
//! asymptotic cost of the algorithms can be checked empirically.
//!
//! ```
//! use gabring::gabidulin::sample_error;
//! use gabring::{decode, GabidulinCode, RankProfile, Tower};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! # fn main() -> gabring::Result<()> {
//! let tower = Tower::auto(2, 2, 1, 8)?;
//! let code = GabidulinCode::with_power_basis(tower.clone(), 8, 4)?;
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//!
//! let f = code.random_message(&mut rng);
//! let e = sample_error(&tower, 8, &"1+x".parse::<RankProfile>()?, &mut rng)?;
//! let r: Vec<_> = code.encode(&f)?.iter().zip(&e.error).map(|(c, x)| tower.ext().add(c, x)).collect();
//!
//! let result = decode(&code, &r)?;
//! assert_eq!(result.message(), Some(&f));
//! assert_eq!(result.diagnostics.error_rank, Some(2));
//! # Ok(())
//! # }
//! ```

pub mod counter;
pub mod decoder;
pub mod error;
pub mod format;
pub mod gabidulin;
pub mod galois_ring;
pub mod key_equation;
pub mod ring_linalg;
pub mod skew_poly;

pub use decoder::{decode, wb_decode, DecodeOutcome, DecodeResult};
pub use error::{Error, Result};
pub use gabidulin::GabidulinCode;
pub use galois_ring::{GaloisRing, Level, RingElement, Tower, TowerParams};
pub use ring_linalg::{RankProfile, RingMatrix};
pub use skew_poly::{SkewPoly, SkewRing};
