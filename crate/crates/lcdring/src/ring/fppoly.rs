//! Scalar polynomial arithmetic over `Z_{p^t}` used only for building and
//! validating Galois-ring moduli.  Coefficients are ascending `u64` vectors.
//!
//! The default modulus of `GR(p^s, m)` is the Hensel lift, as a divisor of
//! `X^{p^m - 1} - 1` over `Z_{p^s}`, of the lexicographically smallest
//! primitive polynomial of degree `m` over `F_p`.  This fixes `w` to have
//! multiplicative order `p^m - 1`, and is recorded in the ring's spec string
//! so results stay reproducible.

use crate::util::{factorize, inv_mod, mul_mod, pow_u64};
use crate::{Error, Result};

pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn add(f: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + b) % q;
    }
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + q - b) % q;
    }
    trim(out)
}

pub fn mul(f: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, q)) % q;
        }
    }
    trim(out)
}

/// Division with remainder by a divisor whose leading coefficient is a unit.
pub fn divmod(f: &[u64], g: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let gd = deg(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[gd], q).expect("divisor leading coefficient not a unit");
    let mut rem: Vec<u64> = f.to_vec();
    let mut quo = vec![0u64; f.len().saturating_sub(gd)];
    while let Some(rd) = deg(&rem) {
        if rd < gd {
            break;
        }
        let c = mul_mod(rem[rd], lead_inv, q);
        quo[rd - gd] = c;
        for j in 0..=gd {
            let s = mul_mod(c, g[j], q);
            rem[rd - gd + j] = (rem[rd - gd + j] + q - s) % q;
        }
    }
    (trim(quo), trim(rem))
}

/// Monic gcd over the prime field `F_p`.
pub fn gcd_fp(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = deg(&a) {
        let inv = inv_mod(a[d], p).unwrap();
        a = a.iter().map(|&c| mul_mod(c, inv, p)).collect();
    }
    a
}

/// Extended gcd over `F_p`: returns `(gcd, s, t)` with `s f + t g = gcd`.
pub fn ext_gcd_fp(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = trim(f.to_vec());
    let mut r1 = trim(g.to_vec());
    let mut s0 = vec![1u64];
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = vec![1u64];
    while !r1.is_empty() {
        let (q, r) = divmod(&r0, &r1, p);
        let ns = sub(&s0, &mul(&q, &s1, p), p);
        let nt = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if let Some(d) = deg(&r0) {
        let inv = inv_mod(r0[d], p).unwrap();
        r0 = r0.iter().map(|&c| mul_mod(c, inv, p)).collect();
        s0 = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
        t0 = t0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    }
    (r0, s0, t0)
}

/// Inverse of `a` modulo `f` over `F_p`, when `gcd(a, f) = 1`.
pub fn invert_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let (g, s, _) = ext_gcd_fp(a, f, p);
    if g == vec![1u64] {
        let (_, r) = divmod(&s, f, p);
        Some(r)
    } else {
        None
    }
}

/// `x^e mod f` over `F_p`.
fn pow_x_mod(f: &[u64], e: u64, p: u64) -> Vec<u64> {
    let mut base = vec![0u64, 1];
    let (_, b) = divmod(&base, f, p);
    base = b;
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            let (_, r) = divmod(&mul(&acc, &base, p), f, p);
            acc = r;
        }
        let (_, r) = divmod(&mul(&base, &base, p), f, p);
        base = r;
        e >>= 1;
    }
    acc
}

/// Irreducibility over `F_p` by the standard gcd criterion.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let m = match deg(&f) {
        Some(0) | None => return false,
        Some(1) => return true,
        Some(m) => m,
    };
    // x^{p^m} = x mod f
    let mut xq = pow_x_mod(&f, p, p);
    let mut powers = vec![vec![0u64, 1], xq.clone()];
    for _ in 1..m {
        xq = compose_mod(&xq, &powers[1], &f, p);
        powers.push(xq.clone());
    }
    if sub(&powers[m], &[0, 1], p) != Vec::<u64>::new() {
        return false;
    }
    for (ell, _) in factorize(m as u64) {
        let k = m / ell as usize;
        let diff = sub(&powers[k], &[0, 1], p);
        if gcd_fp(&diff, &f, p) != vec![1u64] {
            return false;
        }
    }
    true
}

/// `g(h) mod f` over `F_p`, by Horner.
fn compose_mod(g: &[u64], h: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for &c in g.iter().rev() {
        acc = mul(&acc, h, p);
        if c != 0 {
            acc = add(&acc, &[c], p);
        }
        let (_, r) = divmod(&acc, f, p);
        acc = r;
    }
    acc
}

/// Multiplicative order of `x` modulo an irreducible `f` equals `p^m - 1`?
fn is_primitive(f: &[u64], p: u64) -> bool {
    let m = deg(f).unwrap();
    let order = pow_u64(p, m as u32) - 1;
    if pow_x_mod(f, order, p) != vec![1u64] {
        return false;
    }
    for (ell, _) in factorize(order) {
        if pow_x_mod(f, order / ell, p) == vec![1u64] {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic primitive polynomial of degree `m`
/// over `F_p` (coefficients compared from the constant term up).
fn smallest_primitive(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    let mut counter = vec![0u64; m];
    loop {
        let mut f: Vec<u64> = counter.clone();
        f.push(1);
        if is_irreducible(&f, p) && is_primitive(&f, p) {
            return f;
        }
        let mut i = 0;
        loop {
            assert!(i < m, "no primitive polynomial found (impossible)");
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Default basic primitive modulus for `GR(p^s, m)`: the Hensel lift of the
/// smallest primitive polynomial to a divisor of `X^{p^m - 1} - 1`.
pub fn default_modulus(p: u64, s: u32, m: u32) -> Vec<u64> {
    let fbar = smallest_primitive(p, m);
    if s == 1 {
        return fbar;
    }
    let order = pow_u64(p, m) - 1;
    // X^order - 1 over F_p
    let mut target_fp = vec![0u64; order as usize + 1];
    target_fp[0] = p - 1;
    target_fp[order as usize] = 1;
    let (gbar, rem) = divmod(&target_fp, &fbar, p);
    debug_assert!(rem.is_empty());
    let (one, sigma, tau) = ext_gcd_fp(&fbar, &gbar, p);
    debug_assert_eq!(one, vec![1u64]);

    let ps = pow_u64(p, s);
    let mut target = vec![0u64; order as usize + 1];
    target[0] = ps - 1;
    target[order as usize] = 1;

    let mut f: Vec<u64> = fbar.clone();
    let mut g: Vec<u64> = gbar.clone();
    let mut modulus = p;
    while modulus < ps {
        // e = (target - f g) / modulus, reduced mod p
        let prod = mul(&f, &g, ps);
        let diff = sub(&target, &prod, ps);
        let e: Vec<u64> = diff.iter().map(|&c| (c / modulus) % p).collect();
        let e = trim(e);
        // u g + w f = e over F_p with deg u < deg f
        let te = mul(&tau, &e, p);
        let (quo, u) = divmod(&te, &fbar, p);
        let w = add(&mul(&sigma, &e, p), &mul(&gbar, &quo, p), p);
        for (i, &c) in u.iter().enumerate() {
            f[i] = (f[i] + c * modulus) % ps;
        }
        if g.len() < w.len() {
            g.resize(w.len(), 0);
        }
        for (i, &c) in w.iter().enumerate() {
            g[i] = (g[i] + c * modulus) % ps;
        }
        modulus *= p;
    }
    debug_assert_eq!(mul(&f, &g, ps), trim(target));
    f
}

/// Text form of a scalar polynomial, descending powers: `X^2+X+1`.
pub fn poly_text(f: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "X".to_string(),
            (1, c) => format!("{c}*X"),
            (i, 1) => format!("X^{i}"),
            (i, c) => format!("{c}*X^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parse the scalar polynomial text form modulo `q`.
pub fn parse_poly_text(text: &str, q: u64) -> Result<Vec<u64>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    // split on +/- keeping signs
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i != 0 {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && i == 0 {
            neg = true;
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("bad polynomial `{text}`")));
        }
        let (coeff_str, pow) = match term.split_once('X') {
            None => (term.as_str(), 0usize),
            Some((c, rest)) => {
                let pow = if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{term}`")))?
                } else if rest.is_empty() {
                    1
                } else {
                    return Err(Error::Parse(format!("bad term `{term}`")));
                };
                (c.trim_end_matches('*'), pow)
            }
        };
        let c: u64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{coeff_str}`")))?
        };
        let c = if neg { (q - c % q) % q } else { c % q };
        if coeffs.len() <= pow {
            coeffs.resize(pow + 1, 0);
        }
        coeffs[pow] = (coeffs[pow] + c) % q;
    }
    Ok(coeffs)
}
