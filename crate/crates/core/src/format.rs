//! JSON encodings of elements, vectors and code configurations, and a byte
//! packing for raw payloads.
//!
//! An element of `Z/p^r` is a JSON integer; an element of an extension level
//! is the array of its coefficient encodings, least-degree first. So an
//! element of `S` is an array of `m` arrays of `s` integers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gabidulin::{power_basis, GabidulinCode};
use crate::galois_ring::{GaloisRing, RingElement, Tower, TowerParams};

pub fn element_to_json(ring: &GaloisRing, x: &RingElement) -> Value {
    match ring.coefficient_ring() {
        None => Value::from(x.coeffs()[0]),
        Some(c) => Value::Array(ring.coefficients(x).iter().map(|y| element_to_json(c, y)).collect()),
    }
}

pub fn element_from_json(ring: &GaloisRing, v: &Value) -> Result<RingElement> {
    match ring.coefficient_ring() {
        None => {
            let c = v.as_u64().ok_or_else(|| Error::Format(format!("expected an integer, found {v}")))?;
            if c >= ring.characteristic() {
                return Err(Error::Format(format!("{c} is not reduced mod {}", ring.characteristic())));
            }
            Ok(RingElement::from_flat(vec![c]))
        }
        Some(c) => {
            let items = v.as_array().ok_or_else(|| Error::Format(format!("expected an array, found {v}")))?;
            if items.len() != ring.degree() {
                return Err(Error::Format(format!(
                    "expected {} coefficients, found {}",
                    ring.degree(),
                    items.len()
                )));
            }
            let coeffs = items.iter().map(|y| element_from_json(c, y)).collect::<Result<Vec<_>>>()?;
            Ok(ring.from_coefficients(&coeffs))
        }
    }
}

pub fn vector_to_json(ring: &GaloisRing, xs: &[RingElement]) -> Value {
    Value::Array(xs.iter().map(|x| element_to_json(ring, x)).collect())
}

pub fn vector_from_json(ring: &GaloisRing, v: &Value) -> Result<Vec<RingElement>> {
    v.as_array()
        .ok_or_else(|| Error::Format("expected an array of elements".into()))?
        .iter()
        .map(|x| element_from_json(ring, x))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoTag {
    #[serde(rename = "auto")]
    Auto,
}

/// The support of a code: `"auto"` for `[1, α, ..., α^(n-1)]` or explicit elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SupportSpec {
    Auto(AutoTag),
    Explicit(Vec<Value>),
}

/// `{"params": {...}, "g": [...] | "auto", "k": ..., "n": ...}`; `n` defaults
/// to `m` for an automatic support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub params: TowerParams,
    pub g: SupportSpec,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl CodeConfig {
    /// A configuration with automatic moduli and an explicit power-basis support.
    pub fn power_basis(p: u64, r: u32, s: usize, m: usize, n: usize, k: usize) -> Result<CodeConfig> {
        if n > m {
            return Err(Error::InvalidParams(format!(
                "n = {n} exceeds m = {m}; a support of length n cannot be independent"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidDimension { k, n });
        }
        let tower = Tower::auto(p, r, s, m)?;
        let g = power_basis(&tower, n);
        let g = g.iter().map(|x| element_to_json(tower.ext(), x)).collect();
        Ok(CodeConfig { params: tower.params().clone(), g: SupportSpec::Explicit(g), k, n: Some(n) })
    }

    pub fn from_json(text: &str) -> Result<CodeConfig> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serialises")
    }

    pub fn build(&self) -> Result<GabidulinCode> {
        let tower = Tower::new(self.params.clone())?;
        let g = match &self.g {
            SupportSpec::Auto(_) => power_basis(&tower, self.n.unwrap_or(tower.m())),
            SupportSpec::Explicit(items) => {
                let g = items
                    .iter()
                    .map(|v| element_from_json(tower.ext(), v))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(n) = self.n.filter(|&n| n != g.len()) {
                    return Err(Error::LengthMismatch { expected: n, found: g.len() });
                }
                g
            }
        };
        GabidulinCode::new(Arc::clone(&tower), g, self.k)
    }
}

/// Bits stored per base residue.
fn bits_per_residue(ring: &GaloisRing) -> usize {
    (u64::BITS - 1 - ring.characteristic().leading_zeros()) as usize
}

/// Packs a byte payload into `count` elements of `ring`: the payload length
/// as an unsigned LEB128 varint followed by the payload, read as a
/// little-endian bit stream and cut into `⌊log2 p^r⌋`-bit residues,
/// zero-padded.
pub fn pack_bytes(ring: &GaloisRing, payload: &[u8], count: usize) -> Result<Vec<RingElement>> {
    let bits = bits_per_residue(ring);
    if bits == 0 {
        return Err(Error::InvalidParams("p^r = 1 cannot carry data".into()));
    }
    let width = ring.width();
    let capacity = count * width * bits / 8;
    let mut data = Vec::with_capacity(payload.len() + 10);
    leb128::write::unsigned(&mut data, payload.len() as u64).expect("writing to a vector");
    let header = data.len();
    data.extend_from_slice(payload);
    if data.len() > capacity {
        return Err(Error::Format(format!(
            "payload of {} bytes and {header}-byte length header exceed the message capacity of {capacity} bytes",
            payload.len(),
        )));
    }
    let bit = |i: usize| data.get(i / 8).map_or(0, |b| u64::from((b >> (i % 8)) & 1));
    let mut pos = 0;
    Ok((0..count)
        .map(|_| {
            let coeffs = (0..width)
                .map(|_| {
                    let v = (0..bits).fold(0, |acc, j| acc | (bit(pos + j) << j));
                    pos += bits;
                    v
                })
                .collect();
            RingElement::from_flat(coeffs)
        })
        .collect())
}

/// Inverse of [`pack_bytes`].
pub fn unpack_bytes(ring: &GaloisRing, elements: &[RingElement]) -> Result<Vec<u8>> {
    let bits = bits_per_residue(ring);
    let mut stream: Vec<u8> = Vec::new();
    let mut acc = 0u32;
    let mut filled = 0;
    for &c in elements.iter().flat_map(|e| e.coeffs()) {
        if c >> bits != 0 {
            return Err(Error::Format("residue does not encode packed data".into()));
        }
        for j in 0..bits {
            acc |= (((c >> j) & 1) as u32) << filled;
            filled += 1;
            if filled == 8 {
                stream.push(acc as u8);
                acc = 0;
                filled = 0;
            }
        }
    }
    let mut reader = stream.as_slice();
    let len = leb128::read::unsigned(&mut reader)
        .map_err(|e| Error::Format(format!("bad length header: {e}")))?;
    let header = stream.len() - reader.len();
    let len = usize::try_from(len).map_err(|_| Error::Format("length header exceeds message".into()))?;
    stream
        .get(header..header.saturating_add(len))
        .map(<[u8]>::to_vec)
        .ok_or_else(|| Error::Format("length header exceeds message".into()))
}
