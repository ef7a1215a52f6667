//! Finite commutative Frobenius rings and their elements.
//!
//! Three families are supported:
//!
//! * `Chain`: the Galois rings `GR(p^s, m) = Z_{p^s}[w] / (h)` for a basic
//!   primitive modulus `h` of degree `m`.  `m = 1` gives `Z_{p^s}`, `s = 1`
//!   gives the field `F_{p^m}`, and `s = m = 1` gives `F_p`.
//! * `LocalAlgebra`: `R_m = F2[u_1, ..., u_m] / (u_1^2, ..., u_m^2)`, a local
//!   Frobenius ring that is not a chain ring for `m > 1`.
//! * `Composite`: a CRT product of local rings with pairwise coprime
//!   characteristics, e.g. `Z15 = Z3 x Z5`.
//!
//! Elements are canonical coordinate vectors: `m` coefficients in
//! `0..p^s` for chain rings, `2^m` bits indexed by subsets of `{1..m}` for
//! `R_m`, and the concatenation of component coordinates for composites.
//! Two elements are equal exactly when their coordinates are equal, which
//! keeps hashing and golden files stable.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::util::{factorize, gcd, inv_mod, is_prime, mul_mod, pow_u64};
use crate::{Error, Result};

mod fppoly;

/// Maximum supported characteristic; keeps `u64` coordinate products exact.
const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Structural description of a supported ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `GR(p^s, m)`; `modulus` is monic of degree `m` over `Z_{p^s}`,
    /// ascending coefficients.  For `m = 1` the modulus is `X` itself.
    Chain {
        p: u64,
        s: u32,
        m: u32,
        modulus: Vec<u64>,
    },
    /// `R_m = F2[u_1..u_m]/(u_i^2)`.
    LocalAlgebra { m: u32 },
    /// CRT product of local rings, sorted by characteristic.
    Composite { parts: Vec<Ring> },
}

#[derive(Debug)]
struct RingRepr {
    kind: RingKind,
    coords: usize,
    /// Per-coordinate modulus; addition and negation are coordinatewise
    /// for every supported kind.
    coord_mods: Vec<u64>,
    cardinality: BigUint,
    characteristic: u64,
    /// Coordinate offsets of composite components (empty otherwise).
    part_offsets: Vec<usize>,
}

/// A cheaply clonable handle to a ring description.
#[derive(Clone)]
pub struct Ring(Arc<RingRepr>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for Ring {}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.spec_string())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// An element of a [`Ring`], stored as its canonical coordinate vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    coords: Vec<u64>,
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_coords(&self.coords)
    }

    pub fn inverse(&self) -> Option<RingElement> {
        self.ring
            .inverse_coords(&self.coords)
            .map(|c| self.ring.elem(c))
    }

    /// Image under the residue projection `pi : R -> F_q` of a local ring.
    pub fn residue(&self) -> Result<RingElement> {
        let field = self.ring.residue_field()?;
        Ok(field.elem(self.ring.residue_coords(&self.coords)))
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::serial::element_to_text(self))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $ring_method:ident) => {
        impl std::ops::$trait for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.ring.$ring_method(self, rhs)
            }
        }
        impl std::ops::$trait for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.ring.$ring_method(&self, &rhs)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.ring.neg(self)
    }
}

impl Ring {
    fn build(kind: RingKind) -> Ring {
        let (coords, coord_mods, cardinality, characteristic, part_offsets) = match &kind {
            RingKind::Chain { p, s, m, .. } => {
                let ps = pow_u64(*p, *s);
                let card = BigUint::from(ps).pow(*m);
                (*m as usize, vec![ps; *m as usize], card, ps, Vec::new())
            }
            RingKind::LocalAlgebra { m } => {
                let coords = 1usize << m;
                let card = BigUint::from(2u32).pow(coords as u32);
                (coords, vec![2u64; coords], card, 2, Vec::new())
            }
            RingKind::Composite { parts } => {
                let mut mods = Vec::new();
                let mut offsets = Vec::new();
                let mut card = BigUint::from(1u32);
                let mut characteristic = 1u64;
                for part in parts {
                    offsets.push(mods.len());
                    mods.extend_from_slice(&part.0.coord_mods);
                    card *= part.cardinality();
                    characteristic = characteristic
                        .checked_mul(part.characteristic())
                        .expect("composite characteristic overflow");
                }
                (mods.len(), mods, card, characteristic, offsets)
            }
        };
        Ring(Arc::new(RingRepr {
            kind,
            coords,
            coord_mods,
            cardinality,
            characteristic,
            part_offsets,
        }))
    }

    /// `Z_k` for any `k >= 2`: a chain ring when `k` is a prime power,
    /// otherwise the CRT composite of its prime-power parts.
    pub fn zk(k: u64) -> Result<Ring> {
        if k < 2 {
            return Err(Error::Domain(format!("Z{k} is not a ring with 1 != 0")));
        }
        if k > MAX_CHARACTERISTIC {
            return Err(Error::Domain(format!("modulus {k} too large")));
        }
        let facs = factorize(k);
        if facs.len() == 1 {
            let (p, s) = facs[0];
            return Ring::chain(p, s, 1);
        }
        let parts = facs
            .iter()
            .map(|&(p, s)| Ring::chain(p, s, 1))
            .collect::<Result<Vec<_>>>()?;
        Ring::composite(parts)
    }

    /// `GR(p^s, m)` with a generated basic primitive modulus.
    pub fn chain(p: u64, s: u32, m: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || m == 0 {
            return Err(Error::Domain("require s >= 1 and m >= 1".into()));
        }
        if pow_u64(p, s) > MAX_CHARACTERISTIC {
            return Err(Error::Domain(format!("p^s = {}^{} too large", p, s)));
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            fppoly::default_modulus(p, s, m)
        };
        Ok(Ring::build(RingKind::Chain { p, s, m, modulus }))
    }

    /// `GR(p^s, m)` with a caller-supplied modulus (ascending coefficients
    /// over `Z_{p^s}`, monic, degree `m`, residue irreducible over `F_p`).
    pub fn chain_with_modulus(p: u64, s: u32, m: u32, modulus: Vec<u64>) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || m < 2 {
            return Err(Error::Domain("explicit modulus requires m >= 2".into()));
        }
        let ps = pow_u64(p, s);
        if ps > MAX_CHARACTERISTIC {
            return Err(Error::Domain(format!("p^s = {}^{} too large", p, s)));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % ps).collect();
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::ReducibleModulus(
                "modulus must be monic of degree m".into(),
            ));
        }
        let residue: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !fppoly::is_irreducible(&residue, p) {
            return Err(Error::ReducibleModulus(format!(
                "residue of modulus is reducible over F_{p}"
            )));
        }
        Ok(Ring::build(RingKind::Chain { p, s, m, modulus }))
    }

    /// The Galois ring `GR(q, m)` where `q = p^s`.
    pub fn galois(q: u64, m: u32) -> Result<Ring> {
        let facs = factorize(q);
        if facs.len() != 1 {
            return Err(Error::Domain(format!("{q} is not a prime power")));
        }
        Ring::chain(facs[0].0, facs[0].1, m)
    }

    /// The finite field `F_{p^m}` as the chain ring with `s = 1`.
    pub fn finite_field(p: u64, m: u32) -> Result<Ring> {
        Ring::chain(p, 1, m)
    }

    /// `R_m = F2[u_1..u_m]/(u_i^2)`; supported for `m <= 4`.
    pub fn local_algebra(m: u32) -> Result<Ring> {
        if m == 0 || m > 4 {
            return Err(Error::Domain("R_m supported for 1 <= m <= 4".into()));
        }
        Ok(Ring::build(RingKind::LocalAlgebra { m }))
    }

    /// CRT composite of local rings with pairwise coprime characteristics,
    /// normalised to ascending characteristic.
    pub fn composite(mut parts: Vec<Ring>) -> Result<Ring> {
        if parts.len() < 2 {
            return Err(Error::Domain("composite needs at least two parts".into()));
        }
        let mut flat = Vec::new();
        for part in parts.drain(..) {
            match &part.0.kind {
                RingKind::Composite { parts } => flat.extend(parts.iter().cloned()),
                _ => flat.push(part),
            }
        }
        flat.sort_by_key(|r| r.characteristic());
        for w in flat.windows(2) {
            if gcd(w[0].characteristic(), w[1].characteristic()) != 1 {
                return Err(Error::NonCoprime);
            }
        }
        let mut characteristic = 1u64;
        for part in &flat {
            characteristic = characteristic
                .checked_mul(part.characteristic())
                .ok_or(Error::Domain("composite characteristic overflow".into()))?;
            if characteristic > MAX_CHARACTERISTIC {
                return Err(Error::Domain("composite characteristic too large".into()));
            }
        }
        Ok(Ring::build(RingKind::Composite { parts: flat }))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.0.cardinality
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn coords_per_element(&self) -> usize {
        self.0.coords
    }

    pub fn coord_mods(&self) -> &[u64] {
        &self.0.coord_mods
    }

    pub fn is_local(&self) -> bool {
        !matches!(self.0.kind, RingKind::Composite { .. })
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.0.kind, RingKind::Chain { .. })
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.kind, RingKind::Chain { s: 1, .. })
    }

    /// Nilpotency index of the maximal ideal (chain rings only).
    pub fn nilpotency(&self) -> Option<u32> {
        match self.0.kind {
            RingKind::Chain { s, .. } => Some(s),
            _ => None,
        }
    }

    /// `Some(M)` when the ring is canonically `Z_M`: a chain ring with
    /// `m = 1`, or a composite of such.  Lee weight is defined on these.
    pub fn integer_modulus(&self) -> Option<u64> {
        match &self.0.kind {
            RingKind::Chain { p, s, m: 1, .. } => Some(pow_u64(*p, *s)),
            RingKind::Composite { parts } => {
                let mut acc = 1u64;
                for part in parts {
                    acc = acc.checked_mul(part.integer_modulus()?)?;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// Residue field `F_q` of a local ring.
    pub fn residue_field(&self) -> Result<Ring> {
        match &self.0.kind {
            RingKind::Chain { p, m, modulus, .. } => {
                if *m == 1 {
                    Ring::chain(*p, 1, 1)
                } else {
                    let residue: Vec<u64> = modulus.iter().map(|c| c % p).collect();
                    Ok(Ring::build(RingKind::Chain {
                        p: *p,
                        s: 1,
                        m: *m,
                        modulus: residue,
                    }))
                }
            }
            RingKind::LocalAlgebra { .. } => Ring::chain(2, 1, 1),
            RingKind::Composite { .. } => Err(Error::UnsupportedRing(
                "residue field of a composite ring; project to a component first".into(),
            )),
        }
    }

    /// Size of the residue field of a local ring.
    pub fn residue_q(&self) -> Result<u64> {
        match &self.0.kind {
            RingKind::Chain { p, m, .. } => Ok(pow_u64(*p, *m)),
            RingKind::LocalAlgebra { .. } => Ok(2),
            RingKind::Composite { .. } => Err(Error::UnsupportedRing(
                "residue field of a composite ring".into(),
            )),
        }
    }

    pub fn component_rings(&self) -> &[Ring] {
        match &self.0.kind {
            RingKind::Composite { parts } => parts,
            _ => panic!("component_rings on a non-composite ring"),
        }
    }

    /// Canonical spec string accepted back by [`Ring::parse`].
    pub fn spec_string(&self) -> String {
        match &self.0.kind {
            RingKind::Chain { p, s, m, modulus } => {
                if *m == 1 {
                    format!("Z{}", pow_u64(*p, *s))
                } else {
                    let text = fppoly::poly_text(modulus);
                    if *s == 1 {
                        format!("Fq({p},{m});modulus={text}")
                    } else {
                        format!("GR({},{});modulus={}", pow_u64(*p, *s), m, text)
                    }
                }
            }
            RingKind::LocalAlgebra { m } => format!("Rm({m})"),
            RingKind::Composite { parts } => {
                if let Some(k) = self.integer_modulus() {
                    format!("Z{k}")
                } else {
                    let inner: Vec<String> = parts.iter().map(|p| p.spec_string()).collect();
                    format!("CRT({})", inner.join(";"))
                }
            }
        }
    }

    /// Parse a ring spec string: `Zk`, `GR(p^s,m)[;modulus=<poly>]`,
    /// `Fq(p,m)[;modulus=<poly>]`, `Rm(m)`, or `CRT(spec;...;spec)`.
    pub fn parse(spec: &str) -> Result<Ring> {
        let spec = spec.trim();
        let (head, modulus) = match spec.split_once(";modulus=") {
            Some((h, m)) => (h.trim(), Some(m.trim())),
            None => (spec, None),
        };
        let parse_two = |inner: &str| -> Result<(u64, u32)> {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected two arguments in `{inner}`")))?;
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{a}`")))?;
            let b: u32 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{b}`")))?;
            Ok((a, b))
        };
        if let Some(rest) = head.strip_prefix("GR(").and_then(|r| r.strip_suffix(')')) {
            let (q, m) = parse_two(rest)?;
            let facs = factorize(q);
            if facs.len() != 1 {
                return Err(Error::Parse(format!("{q} is not a prime power")));
            }
            let (p, s) = facs[0];
            return match modulus {
                Some(text) => {
                    let coeffs = fppoly::parse_poly_text(text, pow_u64(p, s))?;
                    Ring::chain_with_modulus(p, s, m, coeffs)
                }
                None => Ring::chain(p, s, m),
            };
        }
        if let Some(rest) = head.strip_prefix("Fq(").and_then(|r| r.strip_suffix(')')) {
            let (p, m) = parse_two(rest)?;
            return match modulus {
                Some(text) => {
                    let coeffs = fppoly::parse_poly_text(text, p)?;
                    Ring::chain_with_modulus(p, 1, m, coeffs)
                }
                None => Ring::chain(p, 1, m),
            };
        }
        if let Some(rest) = head.strip_prefix("Rm(").and_then(|r| r.strip_suffix(')')) {
            let m: u32 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{rest}`")))?;
            return Ring::local_algebra(m);
        }
        if let Some(rest) = head.strip_prefix("CRT(").and_then(|r| r.strip_suffix(')')) {
            let parts = rest
                .split(';')
                .map(Ring::parse)
                .collect::<Result<Vec<_>>>()?;
            return Ring::composite(parts);
        }
        if let Some(rest) = head.strip_prefix('Z') {
            let k: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad ring spec `{spec}`")))?;
            return Ring::zk(k);
        }
        Err(Error::Parse(format!("unrecognised ring spec `{spec}`")))
    }

    // ----- element constructors -----

    pub(crate) fn elem(&self, coords: Vec<u64>) -> RingElement {
        debug_assert_eq!(coords.len(), self.0.coords);
        RingElement {
            ring: self.clone(),
            coords,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.elem(vec![0; self.0.coords])
    }

    pub fn one(&self) -> RingElement {
        let mut coords = vec![0; self.0.coords];
        match &self.0.kind {
            RingKind::Chain { .. } | RingKind::LocalAlgebra { .. } => coords[0] = 1,
            RingKind::Composite { parts } => {
                for (part, &off) in parts.iter().zip(&self.0.part_offsets) {
                    let one = part.one();
                    coords[off..off + part.0.coords].copy_from_slice(one.coords());
                }
            }
        }
        self.elem(coords)
    }

    /// The image of the integer `v` under `Z -> R`.
    pub fn from_integer(&self, v: i64) -> RingElement {
        let mut coords = vec![0; self.0.coords];
        self.from_integer_into(v, &mut coords);
        self.elem(coords)
    }

    fn from_integer_into(&self, v: i64, coords: &mut [u64]) {
        match &self.0.kind {
            RingKind::Chain { .. } | RingKind::LocalAlgebra { .. } => {
                let m = self.0.coord_mods[0] as i64;
                coords[0] = v.rem_euclid(m) as u64;
                for c in coords[1..].iter_mut() {
                    *c = 0;
                }
            }
            RingKind::Composite { parts } => {
                for (part, &off) in parts.iter().zip(&self.0.part_offsets) {
                    part.from_integer_into(v, &mut coords[off..off + part.0.coords]);
                }
            }
        }
    }

    pub fn element_from_coords(&self, coords: Vec<u64>) -> Result<RingElement> {
        if coords.len() != self.0.coords {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.0.coords,
                coords.len()
            )));
        }
        let reduced = coords
            .iter()
            .zip(&self.0.coord_mods)
            .map(|(&c, &m)| c % m)
            .collect();
        Ok(self.elem(reduced))
    }

    /// Iterate over all ring elements in canonical coordinate order.
    /// Intended for exhaustive checks; refuses rings with more than
    /// `2^24` elements.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        assert!(
            self.cardinality() <= &BigUint::from(1u64 << 24),
            "element enumeration capped at 2^24"
        );
        let mods = self.0.coord_mods.clone();
        let mut counter = vec![0u64; mods.len()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = self.elem(counter.clone());
            let mut i = 0;
            loop {
                if i == counter.len() {
                    done = true;
                    break;
                }
                counter[i] += 1;
                if counter[i] < mods[i] {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            Some(out)
        })
    }

    // ----- arithmetic -----

    fn check_same(&self, a: &RingElement, b: &RingElement) {
        assert!(
            a.ring == *self && b.ring == *self,
            "ring mismatch: {} vs {} in {}",
            a.ring,
            b.ring,
            self
        );
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.check_same(a, b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.0.coord_mods)
            .map(|((&x, &y), &m)| {
                let s = x + y;
                if s >= m {
                    s - m
                } else {
                    s
                }
            })
            .collect();
        self.elem(coords)
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.check_same(a, b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.0.coord_mods)
            .map(|((&x, &y), &m)| if x >= y { x - y } else { x + m - y })
            .collect();
        self.elem(coords)
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        assert!(a.ring == *self, "ring mismatch");
        let coords = a
            .coords
            .iter()
            .zip(&self.0.coord_mods)
            .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
            .collect();
        self.elem(coords)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.check_same(a, b);
        let mut out = vec![0u64; self.0.coords];
        self.mul_coords_into(&a.coords, &b.coords, &mut out);
        self.elem(out)
    }

    pub(crate) fn mul_coords_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        match &self.0.kind {
            RingKind::Chain { m: 1, .. } => {
                out[0] = mul_mod(a[0], b[0], self.0.coord_mods[0]);
            }
            RingKind::Chain { m, modulus, .. } => {
                let m = *m as usize;
                let ps = self.0.coord_mods[0];
                let mut tmp = vec![0u64; 2 * m - 1];
                for i in 0..m {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..m {
                        tmp[i + j] = (tmp[i + j] + mul_mod(a[i], b[j], ps)) % ps;
                    }
                }
                // reduce by the monic modulus
                for i in (m..2 * m - 1).rev() {
                    let c = tmp[i];
                    if c == 0 {
                        continue;
                    }
                    tmp[i] = 0;
                    for j in 0..m {
                        let sub = mul_mod(c, modulus[j], ps);
                        let idx = i - m + j;
                        tmp[idx] = (tmp[idx] + ps - sub) % ps;
                    }
                }
                out.copy_from_slice(&tmp[..m]);
            }
            RingKind::LocalAlgebra { .. } => {
                let n = self.0.coords;
                for o in out.iter_mut() {
                    *o = 0;
                }
                for i in 0..n {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        if b[j] != 0 && i & j == 0 {
                            out[i | j] ^= 1;
                        }
                    }
                }
            }
            RingKind::Composite { parts } => {
                for (part, &off) in parts.iter().zip(&self.0.part_offsets) {
                    let w = part.0.coords;
                    part.mul_coords_into(&a[off..off + w], &b[off..off + w], &mut out[off..off + w]);
                }
            }
        }
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        assert!(a.ring == *self, "ring mismatch");
        self.is_unit_coords(&a.coords)
    }

    fn is_unit_coords(&self, coords: &[u64]) -> bool {
        match &self.0.kind {
            RingKind::Chain { p, .. } => coords.iter().any(|&c| c % p != 0),
            RingKind::LocalAlgebra { .. } => coords[0] == 1,
            RingKind::Composite { parts } => parts
                .iter()
                .zip(&self.0.part_offsets)
                .all(|(part, &off)| part.is_unit_coords(&coords[off..off + part.0.coords])),
        }
    }

    pub fn inverse(&self, a: &RingElement) -> Option<RingElement> {
        assert!(a.ring == *self, "ring mismatch");
        self.inverse_coords(&a.coords).map(|c| self.elem(c))
    }

    fn inverse_coords(&self, coords: &[u64]) -> Option<Vec<u64>> {
        if !self.is_unit_coords(coords) {
            return None;
        }
        match &self.0.kind {
            RingKind::Chain { p, s, m: 1, .. } => {
                let ps = pow_u64(*p, *s);
                Some(vec![inv_mod(coords[0], ps)?])
            }
            RingKind::Chain { p, s, m, modulus } => {
                // residue-field inverse, then Newton lifting to Z_{p^s}
                let residue: Vec<u64> = coords.iter().map(|c| c % p).collect();
                let mod_p: Vec<u64> = modulus.iter().map(|c| c % p).collect();
                let inv0 = fppoly::invert_mod(&residue, &mod_p, *p)?;
                let mut b = vec![0u64; *m as usize];
                b[..inv0.len()].copy_from_slice(&inv0);
                let two = {
                    let mut t = vec![0u64; *m as usize];
                    t[0] = 2 % self.0.coord_mods[0];
                    t
                };
                for _ in 0..=*s {
                    // b <- b * (2 - a*b)
                    let mut ab = vec![0u64; *m as usize];
                    self.mul_coords_into(coords, &b, &mut ab);
                    let diff: Vec<u64> = two
                        .iter()
                        .zip(&ab)
                        .zip(&self.0.coord_mods)
                        .map(|((&t, &x), &md)| (t + md - x) % md)
                        .collect();
                    let mut nb = vec![0u64; *m as usize];
                    self.mul_coords_into(&b, &diff, &mut nb);
                    b = nb;
                }
                let mut check = vec![0u64; *m as usize];
                self.mul_coords_into(coords, &b, &mut check);
                debug_assert!(check[0] == 1 && check[1..].iter().all(|&c| c == 0));
                Some(b)
            }
            RingKind::LocalAlgebra { m } => {
                // a = 1 + eta with eta nilpotent: inverse = sum eta^t (char 2)
                let n = self.0.coords;
                let mut eta = coords.to_vec();
                eta[0] = 0;
                let mut acc = vec![0u64; n];
                acc[0] = 1;
                let mut pw = vec![0u64; n];
                pw[0] = 1;
                for _ in 0..*m {
                    let mut next = vec![0u64; n];
                    self.mul_coords_into(&pw, &eta, &mut next);
                    pw = next;
                    for (i, &c) in pw.iter().enumerate() {
                        acc[i] ^= c;
                    }
                }
                Some(acc)
            }
            RingKind::Composite { parts } => {
                let mut out = vec![0u64; self.0.coords];
                for (part, &off) in parts.iter().zip(&self.0.part_offsets) {
                    let w = part.0.coords;
                    let inv = part.inverse_coords(&coords[off..off + w])?;
                    out[off..off + w].copy_from_slice(&inv);
                }
                Some(out)
            }
        }
    }

    // ----- residue projection -----

    pub(crate) fn residue_coords(&self, coords: &[u64]) -> Vec<u64> {
        match &self.0.kind {
            RingKind::Chain { p, .. } => coords.iter().map(|c| c % p).collect(),
            RingKind::LocalAlgebra { .. } => vec![coords[0]],
            RingKind::Composite { .. } => panic!("residue of composite ring"),
        }
    }

    /// Residue projection of a local ring element onto its residue field.
    pub fn residue_project(&self, a: &RingElement) -> Result<RingElement> {
        assert!(a.ring == *self, "ring mismatch");
        a.residue()
    }

    // ----- CRT -----

    /// Assemble a composite element from one element per component.
    pub fn crt_compose_elements(&self, parts: &[RingElement]) -> Result<RingElement> {
        let rings = match &self.0.kind {
            RingKind::Composite { parts } => parts,
            _ => return Err(Error::UnsupportedRing("not a composite ring".into())),
        };
        if parts.len() != rings.len() {
            return Err(Error::Domain(format!(
                "expected {} components, got {}",
                rings.len(),
                parts.len()
            )));
        }
        let mut coords = vec![0u64; self.0.coords];
        for ((part, ring), &off) in parts.iter().zip(rings).zip(&self.0.part_offsets) {
            if part.ring() != ring {
                return Err(Error::Domain(format!(
                    "component ring mismatch: {} vs {}",
                    part.ring(),
                    ring
                )));
            }
            coords[off..off + ring.0.coords].copy_from_slice(part.coords());
        }
        Ok(self.elem(coords))
    }

    /// Split a composite element into its component elements.
    pub fn crt_split_element(&self, a: &RingElement) -> Result<Vec<RingElement>> {
        assert!(a.ring == *self, "ring mismatch");
        let rings = match &self.0.kind {
            RingKind::Composite { parts } => parts,
            _ => return Err(Error::UnsupportedRing("not a composite ring".into())),
        };
        Ok(rings
            .iter()
            .zip(&self.0.part_offsets)
            .map(|(ring, &off)| ring.elem(a.coords[off..off + ring.0.coords].to_vec()))
            .collect())
    }

    /// Integer face of an element of a `Z_M`-style ring (see
    /// [`Ring::integer_modulus`]), computed by the Chinese remainder theorem
    /// for composites.
    pub fn to_integer(&self, a: &RingElement) -> Option<u64> {
        assert!(a.ring == *self, "ring mismatch");
        match &self.0.kind {
            RingKind::Chain { m: 1, .. } => Some(a.coords[0]),
            RingKind::Composite { parts } => {
                let modulus = self.integer_modulus()?;
                let mut acc = 0u64;
                for (part, &off) in parts.iter().zip(&self.0.part_offsets) {
                    let pm = part.integer_modulus()?;
                    let rest = modulus / pm;
                    let inv = inv_mod(rest % pm, pm)?;
                    let term = mul_mod(mul_mod(a.coords[off], inv, modulus), rest, modulus);
                    acc = (acc + term) % modulus;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    // ----- chain-ring valuation helpers -----

    /// theta-adic valuation: largest `v <= s` with `a` in `theta^v R`,
    /// where `theta = p`.  The zero element has valuation `s`.
    pub(crate) fn theta_val(&self, coords: &[u64]) -> u32 {
        let (p, s) = match self.0.kind {
            RingKind::Chain { p, s, .. } => (p, s),
            _ => panic!("theta_val on a non-chain ring"),
        };
        let mut v = s;
        for &c in coords {
            if c == 0 {
                continue;
            }
            let mut cv = 0;
            let mut x = c;
            while x % p == 0 {
                cv += 1;
                x /= p;
            }
            v = v.min(cv);
            if v == 0 {
                return 0;
            }
        }
        v
    }

    pub(crate) fn theta_pow(&self, v: u32) -> RingElement {
        let p = match self.0.kind {
            RingKind::Chain { p, .. } => p,
            _ => panic!("theta_pow on a non-chain ring"),
        };
        self.from_integer(pow_u64(p, v) as i64)
    }

    /// Exact division by `theta^v`; `None` when some coordinate is not
    /// divisible by `p^v`.
    pub(crate) fn div_theta_exact(&self, coords: &[u64], v: u32) -> Option<Vec<u64>> {
        let p = match self.0.kind {
            RingKind::Chain { p, .. } => p,
            _ => panic!("div_theta_exact on a non-chain ring"),
        };
        let pv = pow_u64(p, v);
        let mut out = Vec::with_capacity(coords.len());
        for &c in coords {
            if c % pv != 0 {
                return None;
            }
            out.push(c / pv);
        }
        Some(out)
    }

    /// Coordinatewise floor division by `theta^v`: returns `t` with
    /// `a = theta^v t + r` and every coordinate of `r` below `p^v`.
    pub(crate) fn div_theta_floor(&self, coords: &[u64], v: u32) -> Vec<u64> {
        let p = match self.0.kind {
            RingKind::Chain { p, .. } => p,
            _ => panic!("div_theta_floor on a non-chain ring"),
        };
        let pv = pow_u64(p, v);
        coords.iter().map(|&c| c / pv).collect()
    }

    /// Unit part of a nonzero chain-ring element: `a / theta^val(a)`.
    pub(crate) fn unit_part(&self, coords: &[u64]) -> Vec<u64> {
        let v = self.theta_val(coords);
        self.div_theta_exact(coords, v).unwrap()
    }

    pub(crate) fn part_offsets(&self) -> &[usize] {
        &self.0.part_offsets
    }
}

/// Ring epimorphisms used by the projection and lifting theory: the residue
/// projection, nilpotency reduction between Galois rings, the `R_m -> F2`
/// coefficient map, and CRT component projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epimorphism {
    source: Ring,
    target: Ring,
    rule: EpimorphismRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpimorphismRule {
    /// `pi : R -> F_q` for a local ring.
    ResidueProjection,
    /// `GR(p^s, m) -> GR(p^t, m)` for `t <= s` (same modulus mod `p^t`).
    NilpotencyReduction { t: u32 },
    /// `pi_m : R_m -> F2`, keeping the empty-subset coefficient.
    AlgebraProjection,
    /// `Phi_j` onto one CRT component.
    ComponentProjection { index: usize },
}

impl Epimorphism {
    pub fn residue(source: &Ring) -> Result<Epimorphism> {
        let target = source.residue_field()?;
        Ok(Epimorphism {
            source: source.clone(),
            target,
            rule: EpimorphismRule::ResidueProjection,
        })
    }

    pub fn nilpotency_reduction(source: &Ring, t: u32) -> Result<Epimorphism> {
        match source.kind() {
            RingKind::Chain { p, s, m, modulus } => {
                if t == 0 || t > *s {
                    return Err(Error::Domain(format!("need 1 <= t <= s, got t = {t}")));
                }
                let pt = pow_u64(*p, t);
                let target = if *m == 1 {
                    Ring::chain(*p, t, 1)?
                } else {
                    Ring::build(RingKind::Chain {
                        p: *p,
                        s: t,
                        m: *m,
                        modulus: modulus.iter().map(|c| c % pt).collect(),
                    })
                };
                Ok(Epimorphism {
                    source: source.clone(),
                    target,
                    rule: EpimorphismRule::NilpotencyReduction { t },
                })
            }
            _ => Err(Error::UnsupportedRing(
                "nilpotency reduction needs a chain ring".into(),
            )),
        }
    }

    pub fn algebra_projection(source: &Ring) -> Result<Epimorphism> {
        match source.kind() {
            RingKind::LocalAlgebra { .. } => Ok(Epimorphism {
                source: source.clone(),
                target: Ring::chain(2, 1, 1)?,
                rule: EpimorphismRule::AlgebraProjection,
            }),
            _ => Err(Error::UnsupportedRing("pi_m needs an R_m ring".into())),
        }
    }

    pub fn component(source: &Ring, index: usize) -> Result<Epimorphism> {
        match source.kind() {
            RingKind::Composite { parts } => {
                let target = parts
                    .get(index)
                    .ok_or_else(|| Error::Domain(format!("no component {index}")))?
                    .clone();
                Ok(Epimorphism {
                    source: source.clone(),
                    target,
                    rule: EpimorphismRule::ComponentProjection { index },
                })
            }
            _ => Err(Error::UnsupportedRing(
                "component projection needs a composite ring".into(),
            )),
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn rule(&self) -> &EpimorphismRule {
        &self.rule
    }

    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        if a.ring() != &self.source {
            return Err(Error::Domain(format!(
                "element of {} fed to an epimorphism from {}",
                a.ring(),
                self.source
            )));
        }
        let coords = match &self.rule {
            EpimorphismRule::ResidueProjection => self.source.residue_coords(a.coords()),
            EpimorphismRule::NilpotencyReduction { t } => {
                let p = match self.source.kind() {
                    RingKind::Chain { p, .. } => *p,
                    _ => unreachable!(),
                };
                let pt = pow_u64(p, *t);
                a.coords().iter().map(|c| c % pt).collect()
            }
            EpimorphismRule::AlgebraProjection => vec![a.coords()[0]],
            EpimorphismRule::ComponentProjection { index } => {
                let off = self.source.part_offsets()[*index];
                let w = self.target.coords_per_element();
                a.coords()[off..off + w].to_vec()
            }
        };
        Ok(self.target.elem(coords))
    }

    /// The coordinatewise-minimal preimage of a target element; used to lift
    /// generator matrices.
    pub fn preimage(&self, b: &RingElement) -> Result<RingElement> {
        if b.ring() != &self.target {
            return Err(Error::Domain(format!(
                "element of {} is not in the target {}",
                b.ring(),
                self.target
            )));
        }
        let mut coords = vec![0u64; self.source.coords_per_element()];
        match &self.rule {
            EpimorphismRule::ResidueProjection | EpimorphismRule::NilpotencyReduction { .. } => {
                coords[..b.coords().len()].copy_from_slice(b.coords());
            }
            EpimorphismRule::AlgebraProjection => {
                coords[0] = b.coords()[0];
            }
            EpimorphismRule::ComponentProjection { index } => {
                let off = self.source.part_offsets()[*index];
                coords[off..off + b.coords().len()].copy_from_slice(b.coords());
            }
        }
        Ok(self.source.elem(coords))
    }
}
