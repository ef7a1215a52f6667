//! Polynomials over the supported rings, factorisation of `X^n - gamma`
//! over residue fields, Hensel lifting to chain rings, and the divisor
//! bookkeeping (reciprocals, complements, Hensel-lcm) behind constacyclic
//! codes.
//!
//! Divisors of `X^n - gamma` are represented as subsets of a [`FactorSet`]:
//! the unique monic basic-irreducible factorisation makes lcm, gcd,
//! complement and reciprocal exact subset operations.

use std::fmt::Write as _;

use crate::ring::{Ring, RingElement};
use crate::util::{gcd, SplitMix64};
use crate::{Error, Result};

/// Seed of the equal-degree splitter; fixed so factor lists, and therefore
/// every table built from them, are identical across runs.
const EDF_SEED: u64 = 0x1cd_c0de;

/// Polynomial over a [`Ring`], ascending coefficients, trailing zeros
/// trimmed; the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPoly {
    ring: Ring,
    coeffs: Vec<RingElement>,
}

impl std::fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::serial::poly_to_text(self))
    }
}

impl RingPoly {
    pub fn from_coeffs(ring: &Ring, mut coeffs: Vec<RingElement>) -> RingPoly {
        for c in &coeffs {
            assert!(c.ring() == ring, "ring mismatch in coefficients");
        }
        while coeffs.last().is_some_and(RingElement::is_zero) {
            coeffs.pop();
        }
        RingPoly {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn from_integer_coeffs(ring: &Ring, coeffs: &[i64]) -> RingPoly {
        RingPoly::from_coeffs(
            ring,
            coeffs.iter().map(|&c| ring.from_integer(c)).collect(),
        )
    }

    pub fn zero(ring: &Ring) -> RingPoly {
        RingPoly::from_coeffs(ring, Vec::new())
    }

    pub fn one(ring: &Ring) -> RingPoly {
        RingPoly::from_coeffs(ring, vec![ring.one()])
    }

    pub fn x(ring: &Ring) -> RingPoly {
        RingPoly::from_coeffs(ring, vec![ring.zero(), ring.one()])
    }

    /// `X^n - gamma`.
    pub fn x_pow_minus(ring: &Ring, n: usize, gamma: &RingElement) -> RingPoly {
        let mut coeffs = vec![ring.zero(); n + 1];
        coeffs[0] = ring.neg(gamma);
        coeffs[n] = ring.one();
        RingPoly::from_coeffs(ring, coeffs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RingElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.ring.one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&self.ring.one())
    }

    pub fn leading(&self) -> Option<&RingElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RingPoly) -> RingPoly {
        assert!(self.ring == other.ring);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| &self.coeff(i) + &other.coeff(i))
            .collect();
        RingPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn sub(&self, other: &RingPoly) -> RingPoly {
        assert!(self.ring == other.ring);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| &self.coeff(i) - &other.coeff(i))
            .collect();
        RingPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn neg(&self) -> RingPoly {
        RingPoly::from_coeffs(&self.ring, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &RingPoly) -> RingPoly {
        assert!(self.ring == other.ring);
        if self.is_zero() || other.is_zero() {
            return RingPoly::zero(&self.ring);
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        RingPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn scale(&self, c: &RingElement) -> RingPoly {
        RingPoly::from_coeffs(&self.ring, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit.
    pub fn div_rem(&self, divisor: &RingPoly) -> Result<(RingPoly, RingPoly)> {
        assert!(self.ring == divisor.ring);
        let Some(dd) = divisor.degree() else {
            return Err(Error::Domain("division by the zero polynomial".into()));
        };
        let lead = divisor.leading().unwrap();
        let lead_inv = lead.inverse().ok_or_else(|| {
            Error::NonUnit(format!("leading coefficient {lead} of the divisor"))
        })?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![
            self.ring.zero();
            self.coeffs.len().saturating_sub(dd).max(1)
        ];
        while rem.len() > dd && rem.last().is_some_and(|c| !c.is_zero() || rem.len() > dd) {
            while rem.last().is_some_and(RingElement::is_zero) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
            let shift = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lead_inv;
            quo[shift] = &quo[shift] + &c;
            for j in 0..=dd {
                let sub = &c * &divisor.coeffs[j];
                rem[shift + j] = &rem[shift + j] - &sub;
            }
        }
        Ok((
            RingPoly::from_coeffs(&self.ring, quo),
            RingPoly::from_coeffs(&self.ring, rem),
        ))
    }

    pub fn divides(&self, other: &RingPoly) -> bool {
        match other.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn eval(&self, at: &RingElement) -> RingElement {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Coefficientwise residue projection onto `F_q[X]`.
    pub fn residue(&self) -> Result<RingPoly> {
        let field = self.ring.residue_field()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.residue())
            .collect::<Result<Vec<_>>>()?;
        Ok(RingPoly::from_coeffs(&field, coeffs))
    }

    /// Monic normalisation: scale by the inverse of the leading coefficient.
    pub fn monic(&self) -> Result<RingPoly> {
        let lead = self
            .leading()
            .ok_or_else(|| Error::Domain("zero polynomial has no monic form".into()))?;
        let inv = lead
            .inverse()
            .ok_or_else(|| Error::NonUnit(format!("leading coefficient {lead}")))?;
        Ok(self.scale(&inv))
    }

    /// Deterministic sort key: degree, then coefficients compared from the
    /// leading term down (so `X^3+X+1` sorts before `X^3+X^2+1`).
    pub(crate) fn sort_key(&self) -> (usize, Vec<Vec<u64>>) {
        (
            self.coeffs.len(),
            self.coeffs
                .iter()
                .rev()
                .map(|c| c.coords().to_vec())
                .collect(),
        )
    }
}

/// Monic reciprocal `X^deg(g) g(1/X)`, scaled so the result is monic.
/// Requires `g(0)` to be a unit (true for every divisor of `X^n - gamma`).
pub fn reciprocal(g: &RingPoly) -> Result<RingPoly> {
    let Some(_) = g.degree() else {
        return Err(Error::Domain("reciprocal of the zero polynomial".into()));
    };
    if !g.coeff(0).is_unit() {
        return Err(Error::NonUnit(format!("constant term {} of {g:?}", g.coeff(0))));
    }
    let reversed: Vec<RingElement> = g.coeffs().iter().rev().cloned().collect();
    RingPoly::from_coeffs(g.ring(), reversed).monic()
}

pub fn is_self_reciprocal(g: &RingPoly) -> Result<bool> {
    Ok(reciprocal(g)? == *g)
}

/// Monic normalisation of `g(gamma X)`.  Maps divisors of `X^n - 1` to
/// divisors of `X^n - gamma^{-n}`.
pub fn substitute_unit(g: &RingPoly, gamma: &RingElement) -> Result<RingPoly> {
    let ring = g.ring().clone();
    if !gamma.is_unit() {
        return Err(Error::NonUnit(format!("{gamma}")));
    }
    let mut pw = ring.one();
    let coeffs: Vec<RingElement> = g
        .coeffs()
        .iter()
        .map(|c| {
            let out = c * &pw;
            pw = &pw * gamma;
            out
        })
        .collect();
    RingPoly::from_coeffs(&ring, coeffs).monic()
}

// ---------------------------------------------------------------------------
// factorisation over residue fields
// ---------------------------------------------------------------------------

/// Arithmetic helpers modulo a monic polynomial over a field ring.
struct ModPoly<'a> {
    field: &'a Ring,
    modulus: &'a RingPoly,
}

impl ModPoly<'_> {
    fn reduce(&self, f: &RingPoly) -> RingPoly {
        f.div_rem(self.modulus).unwrap().1
    }

    fn mul(&self, a: &RingPoly, b: &RingPoly) -> RingPoly {
        self.reduce(&a.mul(b))
    }

    fn pow(&self, base: &RingPoly, mut e: u64) -> RingPoly {
        let mut base = self.reduce(base);
        let mut acc = RingPoly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Monic gcd over a field ring.
fn poly_gcd(a: &RingPoly, b: &RingPoly) -> RingPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.div_rem(&b.monic().unwrap()).unwrap().1;
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.monic().unwrap()
    }
}

/// Complete factorisation of `X^n - alpha` over the field `F_q` into
/// distinct monic irreducibles, sorted by (degree, coefficients).
///
/// Requires `gcd(n, q) = 1`, which makes the polynomial square-free, and a
/// nonzero `alpha`.
pub fn factor_xn_minus_alpha(field: &Ring, n: usize, alpha: &RingElement) -> Result<Vec<RingPoly>> {
    if !field.is_field() {
        return Err(Error::UnsupportedRing(format!(
            "{field} is not a residue field"
        )));
    }
    let q = field.residue_q()?;
    if n == 0 || gcd(n as u64, q) != 1 {
        return Err(Error::RepeatedRoot { n, q });
    }
    if alpha.is_zero() {
        return Err(Error::Domain("alpha must be a nonzero field element".into()));
    }
    let target = RingPoly::x_pow_minus(field, n, alpha);
    let mut irreducibles: Vec<RingPoly> = Vec::new();
    let mut rng = SplitMix64::new(EDF_SEED);

    // distinct-degree decomposition: X^{q^d} - X accumulates all roots in
    // F_{q^d}; the input is square-free by the gcd(n, q) = 1 precondition
    let mut remaining = target.clone();
    let mut d = 0u32;
    let mut xq = RingPoly::x(field);
    while remaining.degree().is_some_and(|deg| deg > 0) {
        d += 1;
        if (remaining.degree().unwrap() as u32) < 2 * d {
            irreducibles.push(remaining.monic().unwrap());
            break;
        }
        let ctx = ModPoly {
            field,
            modulus: &remaining,
        };
        xq = ctx.pow(&ctx.reduce(&xq), q);
        let diff = xq.sub(&RingPoly::x(field));
        let gd = poly_gcd(&diff, &remaining);
        if gd.degree().is_some_and(|deg| deg > 0) {
            equal_degree_split(field, &gd, d as usize, q, &mut rng, &mut irreducibles);
            remaining = remaining.div_rem(&gd).unwrap().0;
        }
    }
    // sanity: the product reconstitutes X^n - alpha
    let mut product = RingPoly::one(field);
    for f in &irreducibles {
        product = product.mul(f);
    }
    debug_assert_eq!(product, target);
    irreducibles.sort_by_key(|f| f.sort_key());
    Ok(irreducibles)
}

/// Cantor–Zassenhaus equal-degree splitting of a square-free product of
/// degree-`d` irreducibles.  Odd characteristic uses the power map
/// `(q^d - 1)/2`; characteristic 2 uses the trace over `F_2`.
fn equal_degree_split(
    field: &Ring,
    f: &RingPoly,
    d: usize,
    q: u64,
    rng: &mut SplitMix64,
    out: &mut Vec<RingPoly>,
) {
    let deg = f.degree().unwrap();
    if deg == d {
        out.push(f.monic().unwrap());
        return;
    }
    let ctx = ModPoly { field, modulus: f };
    loop {
        let h = random_poly(field, deg, rng);
        let g = if q % 2 == 1 {
            // h^((q^d - 1)/2) - 1
            let mut e: u128 = 1;
            for _ in 0..d {
                e *= q as u128;
            }
            let e = (e - 1) / 2;
            let mut acc = RingPoly::one(field);
            let mut base = ctx.reduce(&h);
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = ctx.mul(&acc, &base);
                }
                base = ctx.mul(&base, &base);
                e >>= 1;
            }
            acc.sub(&RingPoly::one(field))
        } else {
            // trace map sum h^{2^i}, i < d * log2(q)
            let bits = d as u32 * q.trailing_zeros();
            let mut acc = ctx.reduce(&h);
            let mut pw = acc.clone();
            for _ in 1..bits {
                pw = ctx.mul(&pw, &pw);
                acc = acc.add(&pw);
            }
            acc
        };
        let g = poly_gcd(&g, f);
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < deg {
                equal_degree_split(field, &g, d, q, rng, out);
                let rest = f.div_rem(&g).unwrap().0;
                equal_degree_split(field, &rest, d, q, rng, out);
                return;
            }
        }
    }
}

fn random_poly(field: &Ring, below_degree: usize, rng: &mut SplitMix64) -> RingPoly {
    let cw = field.coords_per_element();
    let mods = field.coord_mods().to_vec();
    let coeffs: Vec<RingElement> = (0..below_degree)
        .map(|_| {
            let coords: Vec<u64> = mods.iter().map(|&m| rng.below(m)).collect();
            field.element_from_coords(coords).unwrap()
        })
        .collect();
    debug_assert_eq!(cw, mods.len());
    RingPoly::from_coeffs(field, coeffs)
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

/// Lift a coefficientwise-minimal preimage of a residue-field polynomial.
fn minimal_lift(ring: &Ring, f: &RingPoly) -> RingPoly {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| ring.element_from_coords(c.coords().to_vec()).unwrap())
        .collect();
    RingPoly::from_coeffs(ring, coeffs)
}

/// Hensel lift of the coprime monic pair `(fbar, gbar)` with
/// `fbar * gbar = pi(target)` to monic `(f, g)` with `f * g = target` over
/// the chain ring; linear steps in the nilpotency exponent.
fn hensel_pair(
    ring: &Ring,
    target: &RingPoly,
    fbar: &RingPoly,
    gbar: &RingPoly,
) -> Result<(RingPoly, RingPoly)> {
    let s = ring
        .nilpotency()
        .ok_or_else(|| Error::UnsupportedRing(format!("{ring} is not a chain ring")))?;
    let field = ring.residue_field()?;
    // Bezout over the residue field: sigma fbar + tau gbar = 1
    let (g0, sigma, tau) = poly_ext_gcd(fbar, gbar);
    if !g0.is_one() {
        return Err(Error::Domain(format!(
            "factors {fbar:?} and {gbar:?} are not coprime over {field}"
        )));
    }
    let mut f = minimal_lift(ring, fbar);
    let mut g = minimal_lift(ring, gbar);
    for t in 1..s {
        let diff = target.sub(&f.mul(&g));
        // e = diff / theta^t projected to the residue field
        let e_coeffs = diff
            .coeffs()
            .iter()
            .map(|c| {
                let divided = ring
                    .div_theta_exact(c.coords(), t)
                    .expect("Hensel discrepancy divisible by theta^t");
                let lifted = ring.element_from_coords(divided).unwrap();
                lifted.residue().unwrap()
            })
            .collect::<Vec<_>>();
        let e = RingPoly::from_coeffs(&field, e_coeffs);
        if e.is_zero() {
            continue;
        }
        // u gbar + w fbar = e with deg u < deg fbar
        let te = tau.mul(&e);
        let (quo, u) = te.div_rem(fbar).unwrap();
        let w = sigma.mul(&e).add(&gbar.mul(&quo));
        let theta_t = ring.theta_pow(t);
        f = f.add(&minimal_lift(ring, &u).scale(&theta_t));
        g = g.add(&minimal_lift(ring, &w).scale(&theta_t));
    }
    debug_assert_eq!(f.mul(&g), *target);
    Ok((f, g))
}

/// Extended Euclid over a field ring: `(gcd, s, t)` with `s a + t b = gcd`.
fn poly_ext_gcd(a: &RingPoly, b: &RingPoly) -> (RingPoly, RingPoly, RingPoly) {
    let ring = a.ring();
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = RingPoly::one(ring);
    let mut s1 = RingPoly::zero(ring);
    let mut t0 = RingPoly::zero(ring);
    let mut t1 = RingPoly::one(ring);
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).unwrap();
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if let Some(lead) = r0.leading() {
        let inv = lead.inverse().unwrap();
        return (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv));
    }
    (r0, s0, t0)
}

/// The complete factorisation of `X^n - gamma` over a chain ring into monic
/// basic irreducibles, with the reciprocal pairing when `gamma^2 = 1`.
#[derive(Clone, Debug)]
pub struct FactorSet {
    ring: Ring,
    n: usize,
    gamma: RingElement,
    factors: Vec<RingPoly>,
    /// `pairing[i] = j` iff the monic reciprocal of factor `i` is factor `j`;
    /// defined when `gamma^2 = 1`.
    pairing: Option<Vec<usize>>,
}

impl FactorSet {
    /// Factor `X^n - pi(gamma)` over the residue field and Hensel-lift the
    /// factors to exact divisors of `X^n - gamma`.
    pub fn build(ring: &Ring, n: usize, gamma: &RingElement) -> Result<FactorSet> {
        if !ring.is_chain() {
            return Err(Error::UnsupportedRing(format!(
                "constacyclic factorisation needs a chain ring, got {ring}"
            )));
        }
        if !gamma.is_unit() {
            return Err(Error::NonUnit(format!("gamma = {gamma}")));
        }
        let field = ring.residue_field()?;
        let alpha = gamma.residue()?;
        let field_factors = factor_xn_minus_alpha(&field, n, &alpha)?;
        FactorSet::lift(&field_factors, ring, n, gamma)
    }

    /// Hensel-lift a given residue-field factorisation of `X^n - pi(gamma)`.
    pub fn lift(
        field_factors: &[RingPoly],
        ring: &Ring,
        n: usize,
        gamma: &RingElement,
    ) -> Result<FactorSet> {
        if !gamma.is_unit() {
            return Err(Error::NonUnit(format!("gamma = {gamma}")));
        }
        let field = ring.residue_field()?;
        let target = RingPoly::x_pow_minus(ring, n, gamma);
        let mut product = RingPoly::one(&field);
        for f in field_factors {
            if !f.is_monic() {
                return Err(Error::Domain(format!("field factor {f:?} is not monic")));
            }
            product = product.mul(f);
        }
        if product != target.residue()? {
            return Err(Error::Domain(
                "field factors do not multiply to X^n - pi(gamma)".into(),
            ));
        }
        let mut remaining = target.clone();
        let mut remaining_bar = product;
        let mut factors: Vec<RingPoly> = Vec::new();
        let mut sorted = field_factors.to_vec();
        sorted.sort_by_key(|f| f.sort_key());
        for (i, fbar) in sorted.iter().enumerate() {
            if i + 1 == sorted.len() {
                factors.push(remaining.clone());
                break;
            }
            let gbar = remaining_bar.div_rem(fbar)?.0;
            let (f, g) = hensel_pair(ring, &remaining, fbar, &gbar)?;
            factors.push(f);
            remaining = g;
            remaining_bar = gbar;
        }
        factors.sort_by_key(|f| f.sort_key());

        // reciprocal pairing exists exactly when gamma^2 = 1
        let gamma2 = gamma * gamma;
        let pairing = if gamma2 == ring.one() {
            let mut pairing = vec![usize::MAX; factors.len()];
            for (i, f) in factors.iter().enumerate() {
                let rec = reciprocal(f)?;
                let j = factors
                    .iter()
                    .position(|g| *g == rec)
                    .expect("reciprocal of a factor is a factor when gamma^2 = 1");
                pairing[i] = j;
            }
            Some(pairing)
        } else {
            None
        };
        Ok(FactorSet {
            ring: ring.clone(),
            n,
            gamma: gamma.clone(),
            factors,
            pairing,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &RingElement {
        &self.gamma
    }

    pub fn factors(&self) -> &[RingPoly] {
        &self.factors
    }

    pub fn pairing(&self) -> Option<&[usize]> {
        self.pairing.as_deref()
    }

    pub fn modulus_poly(&self) -> RingPoly {
        RingPoly::x_pow_minus(&self.ring, self.n, &self.gamma)
    }

    /// Product of the factors selected by `mask`.
    pub fn divisor(&self, mask: u32) -> RingPoly {
        let mut acc = RingPoly::one(&self.ring);
        for (i, f) in self.factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.mul(f);
            }
        }
        acc
    }

    pub fn full_mask(&self) -> u32 {
        if self.factors.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.factors.len()) - 1
        }
    }

    /// Which subset of factors multiplies to `g`; `None` when `g` is not a
    /// monic subset-product divisor of `X^n - gamma`.
    pub fn subset_of(&self, g: &RingPoly) -> Option<u32> {
        if g.is_zero() || !g.is_monic() {
            return None;
        }
        let mut mask = 0u32;
        for (i, f) in self.factors.iter().enumerate() {
            if f.divides(g) {
                mask |= 1 << i;
            }
        }
        if &self.divisor(mask) == g {
            Some(mask)
        } else {
            None
        }
    }

    /// The complementary divisor: `g * complement(g) = X^n - gamma`.
    pub fn complement(&self, g: &RingPoly) -> Result<RingPoly> {
        let mask = self.subset_of(g).ok_or_else(|| {
            Error::NotDivisor(format!("{g:?}"), format!("X^{} - {}", self.n, self.gamma))
        })?;
        Ok(self.divisor(self.full_mask() & !mask))
    }

    /// The Hensel lift of `lcm(pi(g1), pi(g2))`: the subset union.
    pub fn hensel_lcm(&self, g1: &RingPoly, g2: &RingPoly) -> Result<RingPoly> {
        let m1 = self.subset_of(g1).ok_or_else(|| {
            Error::NotDivisor(format!("{g1:?}"), format!("X^{} - {}", self.n, self.gamma))
        })?;
        let m2 = self.subset_of(g2).ok_or_else(|| {
            Error::NotDivisor(format!("{g2:?}"), format!("X^{} - {}", self.n, self.gamma))
        })?;
        Ok(self.divisor(m1 | m2))
    }

    /// Masks of all divisors fixed by the reciprocal involution, the
    /// nontrivial ones only (excluding `1` and `X^n - gamma`).
    pub fn self_reciprocal_masks(&self) -> Result<Vec<u32>> {
        let pairing = self.pairing.as_ref().ok_or_else(|| {
            Error::Domain("reciprocal pairing needs gamma^2 = 1".into())
        })?;
        let full = self.full_mask();
        let mut out = Vec::new();
        for mask in 1..full {
            let closed = (0..self.factors.len())
                .all(|i| mask >> i & 1 == 0 || mask >> pairing[i] & 1 == 1);
            if closed {
                out.push(mask);
            }
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "X^{} - {} =", self.n, self.gamma);
        for f in &self.factors {
            let _ = write!(s, " ({f:?})");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u64) -> Ring {
        Ring::zk(k).unwrap()
    }

    fn poly(ring: &Ring, text: &str) -> RingPoly {
        crate::serial::poly_from_text(ring, text).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let z4 = z(4);
        let f = poly(&z4, "X^3+2*X^2+X+3");
        assert_eq!(f.mul(&RingPoly::one(&z4)), f);

        // (X-1)(X^3+2X^2+X+3)(X^3+3X^2+2X+3) = X^7 - 1 over Z4
        let a = poly(&z4, "X-1");
        let b = poly(&z4, "X^3+2*X^2+X+3");
        let c = poly(&z4, "X^3+3*X^2+2*X+3");
        let prod = a.mul(&b).mul(&c);
        assert_eq!(prod, RingPoly::x_pow_minus(&z4, 7, &z4.one()));

        // synthetic division: (X^7-1) / (X-1) has degree 6, remainder 0
        let (q, r) = RingPoly::x_pow_minus(&z4, 7, &z4.one())
            .div_rem(&a)
            .unwrap();
        assert_eq!(q.degree(), Some(6));
        assert!(r.is_zero());
        assert_eq!(q, b.mul(&c));

        // divisor with non-unit leading coefficient is rejected
        let bad = poly(&z4, "2*X+1");
        assert!(f.div_rem(&bad).is_err());
    }

    #[test]
    fn factor_x7_minus_1_over_f2() {
        let f2 = Ring::finite_field(2, 1).unwrap();
        let factors = factor_xn_minus_alpha(&f2, 7, &f2.one()).unwrap();
        let texts: Vec<String> = factors.iter().map(|f| format!("{f:?}")).collect();
        assert_eq!(texts, vec!["X+1", "X^3+X+1", "X^3+X^2+1"]);
    }

    #[test]
    fn factor_x2_minus_1_over_f3() {
        let f3 = Ring::finite_field(3, 1).unwrap();
        let factors = factor_xn_minus_alpha(&f3, 2, &f3.one()).unwrap();
        let texts: Vec<String> = factors.iter().map(|f| format!("{f:?}")).collect();
        assert_eq!(texts, vec!["X+1", "X+2"]);
    }

    #[test]
    fn factor_x15_minus_1_over_f2_degree_profile() {
        let f2 = Ring::finite_field(2, 1).unwrap();
        let factors = factor_xn_minus_alpha(&f2, 15, &f2.one()).unwrap();
        let degrees: Vec<usize> = factors.iter().map(|f| f.degree().unwrap()).collect();
        assert_eq!(degrees, vec![1, 2, 4, 4, 4]);
    }

    #[test]
    fn repeated_root_parameters_are_rejected() {
        let f2 = Ring::finite_field(2, 1).unwrap();
        assert!(matches!(
            factor_xn_minus_alpha(&f2, 6, &f2.one()),
            Err(Error::RepeatedRoot { .. })
        ));
        assert!(factor_xn_minus_alpha(&f2, 7, &f2.zero()).is_err());
    }

    #[test]
    fn hensel_lift_x7_minus_1_to_z4() {
        let z4 = z(4);
        let fs = FactorSet::build(&z4, 7, &z4.one()).unwrap();
        let texts: Vec<String> = fs.factors().iter().map(|f| format!("{f:?}")).collect();
        assert_eq!(texts, vec!["X+3", "X^3+2*X^2+X+3", "X^3+3*X^2+2*X+3"]);
        // lifts reduce to the field factors
        let f2 = Ring::finite_field(2, 1).unwrap();
        let residues: Vec<RingPoly> = fs
            .factors()
            .iter()
            .map(|f| f.residue().unwrap())
            .collect();
        assert_eq!(residues, factor_xn_minus_alpha(&f2, 7, &f2.one()).unwrap());
    }

    #[test]
    fn hensel_lift_x15_minus_1_to_z8() {
        let z8 = z(8);
        let fs = FactorSet::build(&z8, 15, &z8.one()).unwrap();
        let texts: Vec<String> = fs.factors().iter().map(|f| format!("{f:?}")).collect();
        assert_eq!(
            texts,
            vec![
                "X+7",
                "X^2+X+1",
                "X^4+X^3+X^2+X+1",
                "X^4+3*X^3+6*X^2+4*X+1",
                "X^4+4*X^3+6*X^2+3*X+1",
            ]
        );
        // X^2+X+1 is already exact over Z8
        assert!(fs.factors()[1].divides(&fs.modulus_poly()));
    }

    #[test]
    fn reciprocal_examples() {
        let z4 = z(4);
        // X - 1 is self-reciprocal after monic normalisation
        let xm1 = poly(&z4, "X-1");
        assert_eq!(reciprocal(&xm1).unwrap(), xm1);
        assert!(is_self_reciprocal(&xm1).unwrap());

        let f = poly(&z4, "X^3+2*X^2+X+3");
        let g = poly(&z4, "X^3+3*X^2+2*X+3");
        assert_eq!(reciprocal(&f).unwrap(), g);
        assert!(!is_self_reciprocal(&f).unwrap());

        let pal = poly(&z4, "X^4+X^3+X^2+X+1");
        assert!(is_self_reciprocal(&pal).unwrap());

        // involution
        assert_eq!(reciprocal(&reciprocal(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn x9_minus_1_z8_factors_all_self_reciprocal() {
        let z8 = z(8);
        let fs = FactorSet::build(&z8, 9, &z8.one()).unwrap();
        assert_eq!(fs.factors().len(), 3);
        for f in fs.factors() {
            assert!(is_self_reciprocal(f).unwrap(), "{f:?}");
        }
        assert_eq!(fs.pairing(), Some(&[0usize, 1, 2][..]));
    }

    #[test]
    fn complement_and_lcm() {
        let z4 = z(4);
        let fs = FactorSet::build(&z4, 7, &z4.one()).unwrap();
        let one = RingPoly::one(&z4);
        let full = fs.modulus_poly();
        assert_eq!(fs.complement(&one).unwrap(), full);
        assert_eq!(fs.complement(&full).unwrap(), one);
        let xm1 = poly(&z4, "X-1");
        let comp = fs.complement(&xm1).unwrap();
        assert_eq!(
            comp,
            poly(&z4, "X^3+2*X^2+X+3").mul(&poly(&z4, "X^3+3*X^2+2*X+3"))
        );
        assert_eq!(xm1.mul(&comp), full);

        // lcm: idempotent, and coprime union gives the full product
        assert_eq!(fs.hensel_lcm(&xm1, &xm1).unwrap(), xm1);
        assert_eq!(fs.hensel_lcm(&xm1, &comp).unwrap(), full);

        // non-divisors are rejected
        let bad = poly(&z4, "X^2+1");
        assert!(fs.subset_of(&bad).is_none());
        assert!(fs.complement(&bad).is_err());
    }

    #[test]
    fn hensel_lcm_is_the_product_on_coprime_divisors() {
        let z4 = z(4);
        let fs = FactorSet::build(&z4, 15, &z4.one()).unwrap();
        let g2 = poly(&z4, "X^2+X+1");
        let g4 = poly(&z4, "X^4+X^3+X^2+X+1");
        let g6 = fs.hensel_lcm(&g2, &g4).unwrap();
        assert_eq!(g6, g2.mul(&g4));
    }

    #[test]
    fn substitute_unit_examples() {
        let z8 = z(8);
        let xm1 = poly(&z8, "X-1");
        assert_eq!(substitute_unit(&xm1, &z8.one()).unwrap(), xm1);
        // over Z8, gamma = 3: monic form of 3X - 1 is X + 5, dividing X^15 - 3
        let sub = substitute_unit(&xm1, &z8.from_integer(3)).unwrap();
        assert_eq!(sub, poly(&z8, "X+5"));
        let target = RingPoly::x_pow_minus(&z8, 15, &z8.from_integer(3));
        assert!(sub.divides(&target));
    }

    #[test]
    fn self_reciprocal_mask_count_z8_n15() {
        // t1 = 3 self-paired factors, t2 = 1 swapped pair:
        // 2^(3+1) - 2 = 14 nontrivial self-reciprocal divisors.
        let z8 = z(8);
        let fs = FactorSet::build(&z8, 15, &z8.one()).unwrap();
        assert_eq!(fs.self_reciprocal_masks().unwrap().len(), 14);
    }

    #[test]
    fn reciprocal_multiplicative_on_divisor_subsets() {
        let z4 = z(4);
        let fs = FactorSet::build(&z4, 15, &z4.one()).unwrap();
        for m1 in 0..fs.full_mask() {
            let g1 = fs.divisor(m1);
            for m2 in [1u32, 2, 5] {
                if m1 & m2 != 0 {
                    continue;
                }
                let g2 = fs.divisor(m2);
                let lhs = reciprocal(&g1.mul(&g2)).unwrap();
                let rhs = reciprocal(&g1).unwrap().mul(&reciprocal(&g2).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn galois_ring_factorisation_x5_minus_1() {
        let gr = Ring::galois(4, 2).unwrap();
        let fs = FactorSet::build(&gr, 5, &gr.one()).unwrap();
        assert_eq!(fs.factors().len(), 3);
        let degrees: Vec<usize> = fs.factors().iter().map(|f| f.degree().unwrap()).collect();
        assert_eq!(degrees, vec![1, 2, 2]);
        // X^2 + (3w+2)X + 1 is one of the factors
        let g = crate::serial::poly_from_text(&gr, "X^2+(3*w+2)*X+1").unwrap();
        assert!(fs.factors().contains(&g), "{}", fs.describe());
        // all three factors are self-reciprocal (palindromic)
        for f in fs.factors() {
            assert!(is_self_reciprocal(f).unwrap());
        }
    }
}
