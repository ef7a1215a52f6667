//! Weight functions (Hamming, Lee), the Gray map, and exact minimum
//! distance computation.
//!
//! Two strategies:
//!
//! * `FullEnumeration` walks every codeword once when `|C|` fits the
//!   enumeration budget.  Codewords are visited by a reflected mixed-radix
//!   Gray odometer over the standard-form generators, so each step adds or
//!   subtracts a single precomputed row and updates the weight only on that
//!   row's support.
//! * `BoundedWeightSearch` enumerates ambient vectors of weight 1, 2, ...
//!   and tests membership against the dual generators.  The first hit at
//!   weight `w`, after exhausting all lighter levels, is exact.  When the
//!   candidate count for the next level would blow the pattern budget the
//!   search stops and reports honest bounds instead.
//!
//! The index space of both searches is split into fixed chunks, so results
//! (including the reported witness) do not depend on `LCDRING_THREADS`.

use num_bigint::BigUint;

use crate::code::LinearCode;
use crate::ring::{Ring, RingElement, RingKind};
use crate::util::SplitMix64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Hamming,
    Lee,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    FullEnumeration,
    BoundedWeightSearch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceStatus {
    Exact(u64),
    Bounds { lower: u64, upper: u64 },
}

/// Outcome of a minimum-distance computation.  The witness, when present,
/// re-verifies: it passes membership and its weight equals the value.
#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub metric: WeightKind,
    pub status: DistanceStatus,
    pub witness: Option<Vec<RingElement>>,
    pub strategy: SearchStrategy,
    pub examined: u128,
}

/// Search configuration.  `enumeration_budget` caps `|C|` for full
/// enumeration; `pattern_budget` caps the cumulative number of ambient
/// candidates the bounded-weight search may test.
#[derive(Clone, Debug)]
pub struct DistanceOptions {
    pub enumeration_budget: u64,
    pub pattern_budget: u64,
    pub target: Option<u64>,
    pub threads: Option<usize>,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            enumeration_budget: 1 << 26,
            pattern_budget: 1 << 31,
            target: None,
            threads: None,
        }
    }
}

/// Per-coordinate Lee weight `min(x, M - x)` on `Z_M`.
pub fn lee_weight_scalar(x: u64, modulus: u64) -> u64 {
    x.min(modulus - x)
}

/// Weight of a single element under the given metric.
pub fn element_weight(kind: WeightKind, e: &RingElement) -> Result<u64> {
    match kind {
        WeightKind::Hamming => Ok(u64::from(!e.is_zero())),
        WeightKind::Lee => {
            let ring = e.ring();
            let m = ring.integer_modulus().ok_or_else(|| {
                Error::UnsupportedRing(format!("Lee weight needs a Z_M ring, got {ring}"))
            })?;
            let x = ring.to_integer(e).expect("Z_M rings have integer faces");
            Ok(lee_weight_scalar(x, m))
        }
    }
}

/// Weight of a vector: the sum of per-coordinate weights.
pub fn weight(kind: WeightKind, v: &[RingElement]) -> Result<u64> {
    let mut acc = 0u64;
    for e in v {
        acc += element_weight(kind, e)?;
    }
    Ok(acc)
}

/// The Gray map `Z4 -> F2^2`: `0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10`,
/// applied per symbol.  An isometry from Lee weight to Hamming weight.
pub fn gray_map(v: &[RingElement]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(v.len() * 2);
    for e in v {
        if e.ring().integer_modulus() != Some(4) {
            return Err(Error::UnsupportedRing(format!(
                "Gray map is defined on Z4, got {}",
                e.ring()
            )));
        }
        let bits: [u8; 2] = match e.coords()[0] {
            0 => [0, 0],
            1 => [0, 1],
            2 => [1, 1],
            3 => [1, 0],
            _ => unreachable!(),
        };
        out.extend_from_slice(&bits);
    }
    Ok(out)
}

/// The Gray image of a whole Z4 code as a set of binary vectors.
pub fn gray_image(code: &LinearCode) -> Result<Vec<Vec<u8>>> {
    if code.ring().integer_modulus() != Some(4) {
        return Err(Error::UnsupportedRing(format!(
            "Gray image is defined for Z4 codes, got {}",
            code.ring()
        )));
    }
    code.codewords().iter().map(|w| gray_map(w)).collect()
}

/// Is a set of equal-length binary vectors linear (contains 0, closed
/// under coordinatewise addition)?
pub fn is_image_linear(set: &[Vec<u8>]) -> bool {
    use std::collections::HashSet;
    let table: HashSet<&[u8]> = set.iter().map(Vec::as_slice).collect();
    let Some(len) = set.first().map(Vec::len) else {
        return true;
    };
    if !table.contains(vec![0u8; len].as_slice()) {
        return false;
    }
    for a in set {
        for b in set {
            let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x ^ y).collect();
            if !table.contains(sum.as_slice()) {
                return false;
            }
        }
    }
    true
}

/// Minimum pairwise Hamming distance of a (possibly nonlinear) set.
pub fn min_pairwise_hamming(set: &[Vec<u8>]) -> Option<u64> {
    let mut best: Option<u64> = None;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            let d = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    best
}

/// Exact minimum weight of the nonzero codewords, or honest bounds when
/// the search space exceeds the budgets.
pub fn min_distance(
    code: &LinearCode,
    kind: WeightKind,
    opts: &DistanceOptions,
) -> Result<DistanceReport> {
    if kind == WeightKind::Lee && code.ring().integer_modulus().is_none() {
        return Err(Error::UnsupportedRing(format!(
            "Lee distance needs a Z_M ring, got {}",
            code.ring()
        )));
    }
    if code.is_zero() {
        return Err(Error::Domain(
            "the zero code has no nonzero codewords".into(),
        ));
    }
    let fits_budget = code.cardinality() <= &BigUint::from(opts.enumeration_budget);
    // a target hint can make the bounded search cheaper than enumerating
    // the whole code; it never changes the answer, only the route
    if fits_budget {
        if let Some(t) = opts.target {
            let candidates = bounded_candidates_through(code, kind, t)?;
            if BigUint::from(candidates.saturating_mul(4)) < *code.cardinality()
                && candidates <= opts.pattern_budget as u128
            {
                let report = bounded_weight_search(code, kind, opts)?;
                if matches!(report.status, DistanceStatus::Exact(_)) {
                    return Ok(report);
                }
                // budget died before certainty: enumerate instead
                return full_enumeration(code, kind, opts);
            }
        }
        full_enumeration(code, kind, opts)
    } else {
        bounded_weight_search(code, kind, opts)
    }
}

/// Candidate count of the bounded search through level `t + 1`.
fn bounded_candidates_through(code: &LinearCode, kind: WeightKind, t: u64) -> Result<u128> {
    let ring = code.ring();
    let n = code.length();
    let max_elem_weight = match kind {
        WeightKind::Hamming => 1,
        WeightKind::Lee => ring.integer_modulus().unwrap_or(2) / 2,
    };
    let mut values_by_weight: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_elem_weight as usize + 1];
    for e in ring.elements() {
        if e.is_zero() {
            continue;
        }
        let w = element_weight(kind, &e)? as usize;
        values_by_weight[w].push(e.coords().to_vec());
    }
    let mut total = 0u128;
    for level in 1..=(t + 1).min(n as u64 * max_elem_weight) {
        total = total.saturating_add(count_level(n, level, max_elem_weight, &values_by_weight));
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// flattened coordinate kernels
// ---------------------------------------------------------------------------

/// Codeword buffer layout: `n * cw` u64 coordinates with per-coordinate
/// moduli; element `i` occupies `coords[i*cw .. (i+1)*cw]`.
struct FlatContext {
    ring: Ring,
    n: usize,
    cw: usize,
    mods: Vec<u64>,
    metric: WeightKind,
    /// Lee only: integer modulus and CRT weights per element.
    lee_modulus: u64,
    lee_crt: Vec<u64>,
}

impl FlatContext {
    fn new(ring: &Ring, n: usize, metric: WeightKind) -> FlatContext {
        let cw = ring.coords_per_element();
        let mods: Vec<u64> = (0..n)
            .flat_map(|_| ring.coord_mods().iter().copied())
            .collect();
        let (lee_modulus, lee_crt) = match (metric, ring.integer_modulus()) {
            (WeightKind::Lee, Some(m)) => {
                // to_integer(e) = sum coords[j] * crt[j] mod m
                let mut crt = vec![0u64; cw];
                for j in 0..cw {
                    let mut coords = vec![0u64; cw];
                    coords[j] = 1;
                    let e = ring.element_from_coords(coords).unwrap();
                    crt[j] = ring.to_integer(&e).unwrap();
                }
                (m, crt)
            }
            _ => (0, Vec::new()),
        };
        FlatContext {
            ring: ring.clone(),
            n,
            cw,
            mods,
            metric,
            lee_modulus,
            lee_crt,
        }
    }

    fn flatten(&self, v: &[RingElement]) -> Vec<u64> {
        v.iter().flat_map(|e| e.coords().iter().copied()).collect()
    }

    fn unflatten(&self, flat: &[u64]) -> Vec<RingElement> {
        (0..self.n)
            .map(|i| {
                self.ring
                    .element_from_coords(flat[i * self.cw..(i + 1) * self.cw].to_vec())
                    .unwrap()
            })
            .collect()
    }

    fn element_weight(&self, flat: &[u64], i: usize) -> u64 {
        let coords = &flat[i * self.cw..(i + 1) * self.cw];
        match self.metric {
            WeightKind::Hamming => u64::from(coords.iter().any(|&c| c != 0)),
            WeightKind::Lee => {
                if self.cw == 1 {
                    lee_weight_scalar(coords[0], self.lee_modulus)
                } else {
                    let mut x = 0u128;
                    for (c, w) in coords.iter().zip(&self.lee_crt) {
                        x += *c as u128 * *w as u128;
                    }
                    lee_weight_scalar((x % self.lee_modulus as u128) as u64, self.lee_modulus)
                }
            }
        }
    }

    fn vector_weight(&self, flat: &[u64]) -> u64 {
        (0..self.n).map(|i| self.element_weight(flat, i)).sum()
    }
}

/// One odometer digit: stepping it adds or subtracts `addend` (support is
/// the list of touched element positions).
struct Digit {
    radix: u64,
    addend: Vec<u64>,
    support: Vec<usize>,
}

fn enumeration_digits(code: &LinearCode, ctx: &FlatContext) -> Vec<Digit> {
    let ring = code.ring();
    let sf = code.standard_form();
    let mut digits = Vec::new();
    match ring.kind() {
        RingKind::Chain { p, s, m, .. } => {
            // coefficient transversal per row: m base-p^{s-v} digits on the
            // w^j multiples of the row
            for (i, piv) in sf.pivots.iter().enumerate() {
                let radix = crate::util::pow_u64(*p, s - piv.val);
                if radix == 1 {
                    continue;
                }
                for j in 0..*m as usize {
                    let mut coords = vec![0u64; *m as usize];
                    coords[j] = 1;
                    let wj = ring.element_from_coords(coords).unwrap();
                    let row: Vec<RingElement> = sf
                        .reduced
                        .row(i)
                        .iter()
                        .map(|e| &wj * e)
                        .collect();
                    push_digit(ctx, &mut digits, radix, &row);
                }
            }
        }
        RingKind::LocalAlgebra { .. } => {
            // an F2 basis of the code: radix-2 digits
            let gens: Vec<Vec<RingElement>> =
                sf.reduced.rows_iter().map(|r| r.to_vec()).collect();
            for b in f2_basis(ring, &gens) {
                push_digit(ctx, &mut digits, 2, &b);
            }
        }
        RingKind::Composite { .. } => {
            let parts = code.crt_split().expect("composite splits");
            for (j, part) in parts.iter().enumerate() {
                let part_ctx = FlatContext::new(part.ring(), part.length(), WeightKind::Hamming);
                for d in enumeration_digits(part, &part_ctx) {
                    // embed the component addend through CRT
                    let part_ring = part.ring();
                    let vec = part_ctx.unflatten(&d.addend);
                    let embedded: Vec<RingElement> = vec
                        .iter()
                        .map(|e| {
                            let comps: Vec<RingElement> = ring
                                .component_rings()
                                .iter()
                                .enumerate()
                                .map(|(idx, pr)| {
                                    if idx == j {
                                        pr.elem_from(e.clone())
                                    } else {
                                        pr.zero()
                                    }
                                })
                                .collect();
                            ring.crt_compose_elements(&comps).unwrap()
                        })
                        .collect();
                    debug_assert!(part_ring.is_local());
                    push_digit(ctx, &mut digits, d.radix, &embedded);
                }
            }
        }
    }
    digits
}

fn push_digit(ctx: &FlatContext, digits: &mut Vec<Digit>, radix: u64, row: &[RingElement]) {
    let addend = ctx.flatten(row);
    let support: Vec<usize> = (0..ctx.n)
        .filter(|&i| addend[i * ctx.cw..(i + 1) * ctx.cw].iter().any(|&c| c != 0))
        .collect();
    if support.is_empty() {
        return;
    }
    digits.push(Digit {
        radix,
        addend,
        support,
    });
}

/// F2 basis of the span of an `R_m` code, as ring vectors.
fn f2_basis(ring: &Ring, gens: &[Vec<RingElement>]) -> Vec<Vec<RingElement>> {
    use crate::linalg::f2::F2Mat;
    let n = gens.first().map_or(0, |g| g.len());
    let cw = ring.coords_per_element();
    let mut mat = F2Mat::new(n * cw);
    for g in gens {
        for b in 0..cw {
            let mut coords = vec![0u64; cw];
            coords[b] = 1;
            let mono = ring.element_from_coords(coords).unwrap();
            let scaled: Vec<RingElement> = g.iter().map(|e| &mono * e).collect();
            let bits: Vec<bool> = scaled
                .iter()
                .flat_map(|e| e.coords().iter().map(|&c| c == 1))
                .collect();
            mat.push_row(bits.into_iter());
        }
    }
    let pivots = mat.rref(None);
    let mut out = Vec::new();
    for (r, _) in pivots.iter().enumerate() {
        let vec: Vec<RingElement> = (0..n)
            .map(|i| {
                let coords: Vec<u64> = (0..cw).map(|j| mat.get(r, i * cw + j) as u64).collect();
                ring.element_from_coords(coords).unwrap()
            })
            .collect();
        out.push(vec);
    }
    out
}

struct ChunkResult {
    best: Option<(u64, Vec<u64>)>,
    examined: u128,
}

fn full_enumeration(
    code: &LinearCode,
    kind: WeightKind,
    opts: &DistanceOptions,
) -> Result<DistanceReport> {
    let ctx = FlatContext::new(code.ring(), code.length(), kind);
    let digits = enumeration_digits(code, &ctx);
    debug_assert_eq!(
        digits
            .iter()
            .map(|d| BigUint::from(d.radix))
            .product::<BigUint>(),
        *code.cardinality()
    );

    // fixed chunk granularity: peel leading digits until >= 256 chunks,
    // independent of the thread count so output is reproducible
    let mut prefix = 0usize;
    let mut chunk_count = 1u64;
    while prefix < digits.len() && chunk_count < 256 {
        chunk_count = chunk_count.saturating_mul(digits[prefix].radix);
        prefix += 1;
    }
    let chunk_ids: Vec<u64> = (0..chunk_count).collect();

    let threads = effective_threads(opts);
    let results: Vec<ChunkResult> = if threads <= 1 || chunk_ids.len() <= 1 {
        chunk_ids
            .iter()
            .map(|&id| enumerate_chunk(&ctx, &digits, prefix, id))
            .collect()
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for _ in 0..threads {
                handles.push(scope.spawn(|| {
                    let mut out: Vec<(usize, ChunkResult)> = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= chunk_ids.len() {
                            break;
                        }
                        out.push((i, enumerate_chunk(&ctx, &digits, prefix, chunk_ids[i])));
                    }
                    out
                }));
            }
            let mut indexed: Vec<(usize, ChunkResult)> = Vec::new();
            for h in handles {
                indexed.extend(h.join().expect("enumeration worker panicked"));
            }
            indexed.sort_by_key(|(i, _)| *i);
            indexed.into_iter().map(|(_, r)| r).collect()
        })
    };

    let mut examined = 0u128;
    let mut best: Option<(u64, Vec<u64>)> = None;
    for r in results {
        examined += r.examined;
        if let Some((w, flat)) = r.best {
            if best.as_ref().map_or(true, |(bw, _)| w < *bw) {
                best = Some((w, flat));
            }
        }
    }
    let (value, flat) = best.expect("nonzero code has a nonzero codeword");
    let witness = ctx.unflatten(&flat);
    debug_assert!(code.contains(&witness));
    Ok(DistanceReport {
        metric: kind,
        status: DistanceStatus::Exact(value),
        witness: Some(witness),
        strategy: SearchStrategy::FullEnumeration,
        examined,
    })
}

/// Enumerate the codewords whose leading `prefix` digits encode `chunk_id`,
/// Gray-stepping the remaining digits.
fn enumerate_chunk(
    ctx: &FlatContext,
    digits: &[Digit],
    prefix: usize,
    chunk_id: u64,
) -> ChunkResult {
    let mut flat = vec![0u64; ctx.n * ctx.cw];
    let mut id = chunk_id;
    for d in &digits[..prefix] {
        let v = id % d.radix;
        id /= d.radix;
        if v != 0 {
            for &i in &d.support {
                for j in 0..ctx.cw {
                    let idx = i * ctx.cw + j;
                    let add = (d.addend[idx] as u128 * v as u128 % ctx.mods[idx] as u128) as u64;
                    flat[idx] = (flat[idx] + add) % ctx.mods[idx];
                }
            }
        }
    }
    let rest = &digits[prefix..];
    let mut weight = ctx.vector_weight(&flat);
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut examined = 1u128;
    if weight > 0 {
        best = Some((weight, flat.clone()));
    }

    // reflected mixed-radix Gray: one +-1 digit step per codeword
    let k = rest.len();
    let mut counters = vec![0u64; k];
    let mut dirs = vec![1i64; k];
    let mut focus: Vec<usize> = (0..=k).collect();
    loop {
        let j = focus[0];
        focus[0] = 0;
        if j >= k {
            break;
        }
        let d = &rest[j];
        let go_up = dirs[j] == 1;
        for &i in &d.support {
            let before = ctx.element_weight(&flat, i);
            for c in 0..ctx.cw {
                let idx = i * ctx.cw + c;
                let m = ctx.mods[idx];
                let a = d.addend[idx];
                if a == 0 {
                    continue;
                }
                flat[idx] = if go_up {
                    let s = flat[idx] + a;
                    if s >= m {
                        s - m
                    } else {
                        s
                    }
                } else if flat[idx] >= a {
                    flat[idx] - a
                } else {
                    flat[idx] + m - a
                };
            }
            let after = ctx.element_weight(&flat, i);
            weight = weight - before + after;
        }
        counters[j] = if go_up { counters[j] + 1 } else { counters[j] - 1 };
        if (go_up && counters[j] == d.radix - 1) || (!go_up && counters[j] == 0) {
            dirs[j] = -dirs[j];
            focus[j] = focus[j + 1];
            focus[j + 1] = j + 1;
        }
        examined += 1;
        if weight > 0 && best.as_ref().map_or(true, |(bw, _)| weight < *bw) {
            best = Some((weight, flat.clone()));
        }
    }
    ChunkResult { best, examined }
}

fn effective_threads(opts: &DistanceOptions) -> usize {
    if let Some(t) = opts.threads {
        return t.max(1);
    }
    if let Ok(v) = std::env::var("LCDRING_THREADS") {
        if let Ok(t) = v.parse::<usize>() {
            return t.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

// ---------------------------------------------------------------------------
// bounded-weight search
// ---------------------------------------------------------------------------

fn bounded_weight_search(
    code: &LinearCode,
    kind: WeightKind,
    opts: &DistanceOptions,
) -> Result<DistanceReport> {
    let ring = code.ring().clone();
    let n = code.length();
    let ctx = FlatContext::new(&ring, n, kind);
    let dual = code.dual();
    let checks: Vec<Vec<u64>> = dual
        .minimal_generators()
        .rows_iter()
        .map(|r| ctx.flatten(r))
        .collect();

    // nonzero values per coordinate, grouped by their weight
    let max_elem_weight = match kind {
        WeightKind::Hamming => 1,
        WeightKind::Lee => ctx.lee_modulus / 2,
    };
    let mut values_by_weight: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_elem_weight as usize + 1];
    for e in ring.elements() {
        if e.is_zero() {
            continue;
        }
        let w = element_weight(kind, &e)? as usize;
        values_by_weight[w].push(e.coords().to_vec());
    }

    let max_weight = n as u64 * max_elem_weight;
    let mut examined = 0u128;
    let budget = opts.pattern_budget as u128;
    let mut level = 1u64;
    while level <= max_weight {
        let level_count = count_level(n, level, max_elem_weight, &values_by_weight);
        if examined + level_count > budget {
            // honest degradation: all levels below are exhausted
            let upper = sample_upper_bound(code, kind)?;
            return Ok(DistanceReport {
                metric: kind,
                status: DistanceStatus::Bounds {
                    lower: level,
                    upper,
                },
                witness: None,
                strategy: SearchStrategy::BoundedWeightSearch,
                examined,
            });
        }
        let mut state = LevelSearch {
            ctx: &ctx,
            checks: &checks,
            values_by_weight: &values_by_weight,
            max_elem_weight,
            found: None,
            examined: 0,
        };
        state.search(&mut vec![0u64; n * ctx.cw], 0, level);
        examined += state.examined;
        if let Some(flat) = state.found {
            let witness = ctx.unflatten(&flat);
            debug_assert!(code.contains(&witness));
            debug_assert_eq!(weight(kind, &witness)?, level);
            return Ok(DistanceReport {
                metric: kind,
                status: DistanceStatus::Exact(level),
                witness: Some(witness),
                strategy: SearchStrategy::BoundedWeightSearch,
                examined,
            });
        }
        level += 1;
    }
    Err(Error::Domain(
        "no nonzero codeword found below the maximum weight (zero code?)".into(),
    ))
}

/// Number of ambient vectors of exactly this weight.
fn count_level(
    n: usize,
    level: u64,
    max_elem_weight: u64,
    values_by_weight: &[Vec<Vec<u64>>],
) -> u128 {
    // dp over positions: ways[w] = number of suffix fillings of weight w
    // with all-position support freedom; bounded by u128 saturation
    let mut ways = vec![0u128; level as usize + 1];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; level as usize + 1];
        for w in 0..=level as usize {
            if ways[w] == 0 {
                continue;
            }
            next[w] = next[w].saturating_add(ways[w]); // zero at this position
            for t in 1..=max_elem_weight.min((level as usize - w) as u64) as usize {
                let c = values_by_weight[t].len() as u128;
                if c > 0 {
                    next[w + t] = next[w + t].saturating_add(ways[w].saturating_mul(c));
                }
            }
        }
        ways = next;
    }
    ways[level as usize]
}

struct LevelSearch<'a> {
    ctx: &'a FlatContext,
    checks: &'a [Vec<u64>],
    values_by_weight: &'a [Vec<Vec<u64>>],
    max_elem_weight: u64,
    found: Option<Vec<u64>>,
    examined: u128,
}

impl LevelSearch<'_> {
    /// Fill positions `pos..` with exactly `remaining` weight.
    fn search(&mut self, flat: &mut Vec<u64>, pos: usize, remaining: u64) {
        if self.found.is_some() {
            return;
        }
        if remaining == 0 {
            self.examined += 1;
            if self.is_member(flat) {
                self.found = Some(flat.clone());
            }
            return;
        }
        if pos >= self.ctx.n {
            return;
        }
        // prune: remaining weight must fit in the remaining positions
        let capacity = (self.ctx.n - pos) as u64 * self.max_elem_weight;
        if capacity < remaining {
            return;
        }
        // zero at this position
        self.search(flat, pos + 1, remaining);
        // nonzero values grouped by element weight
        for t in 1..=self.max_elem_weight.min(remaining) {
            for coords in &self.values_by_weight[t as usize] {
                for (j, &c) in coords.iter().enumerate() {
                    flat[pos * self.ctx.cw + j] = c;
                }
                self.search(flat, pos + 1, remaining - t);
                if self.found.is_some() {
                    return;
                }
            }
            for j in 0..self.ctx.cw {
                flat[pos * self.ctx.cw + j] = 0;
            }
        }
    }

    fn is_member(&self, flat: &[u64]) -> bool {
        // v in C iff v is orthogonal to every dual generator (C = C^⊥⊥
        // over Frobenius rings)
        let ring = &self.ctx.ring;
        let cw = self.ctx.cw;
        for h in self.checks {
            if cw == 1 {
                // fast path: single-coordinate rings
                let m = self.ctx.mods[0];
                let mut acc = 0u128;
                for i in 0..self.ctx.n {
                    if flat[i] != 0 && h[i] != 0 {
                        acc += flat[i] as u128 * h[i] as u128;
                    }
                }
                if acc % m as u128 != 0 {
                    return false;
                }
            } else {
                let mut acc = vec![0u64; cw];
                let mut tmp = vec![0u64; cw];
                for i in 0..self.ctx.n {
                    let a = &flat[i * cw..(i + 1) * cw];
                    if a.iter().all(|&c| c == 0) {
                        continue;
                    }
                    ring.mul_coords_into(a, &h[i * cw..(i + 1) * cw], &mut tmp);
                    for j in 0..cw {
                        let m = self.ctx.mods[j];
                        acc[j] = (acc[j] + tmp[j]) % m;
                    }
                }
                if acc.iter().any(|&c| c != 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Cheap upper bound: lightest nonzero weight among the generators and a
/// deterministic sample of random codewords.
fn sample_upper_bound(code: &LinearCode, kind: WeightKind) -> Result<u64> {
    let ring = code.ring().clone();
    let gens = code.minimal_generators();
    let mut best = u64::MAX;
    for row in gens.rows_iter() {
        let w = weight(kind, row)?;
        if w > 0 {
            best = best.min(w);
        }
    }
    let mut rng = SplitMix64::new(0xd15_7a9ce);
    let coeffs: Vec<RingElement> = ring.elements().take(1 << 12).collect();
    let mut word: Vec<RingElement> = vec![ring.zero(); code.length()];
    for _ in 0..2000 {
        let r = rng.below(gens.rows() as u64) as usize;
        let c = &coeffs[rng.below(coeffs.len() as u64) as usize];
        for (w, g) in word.iter_mut().zip(gens.row(r)) {
            *w = &*w + &(c * g);
        }
        let w = weight(kind, &word)?;
        if w > 0 {
            best = best.min(w);
        }
    }
    Ok(best)
}
