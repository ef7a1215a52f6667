//! Linear codes over Frobenius rings: duals, rank and freeness, the LCD
//! decision with hull witnesses, CRT composition, and projection/lifting
//! along ring epimorphisms.
//!
//! Over a local ring a code is LCD iff it is free and `G G^T` is
//! nonsingular for a (standard-form) generator matrix; non-free codes are
//! never LCD.  Over a composite ring the decision is made per CRT
//! component.  The hull witness is built independently of that decision
//! path, from a kernel vector of `G G^T`: the two routes cross-check each
//! other in the test suites.

use num_bigint::BigUint;

use crate::linalg::{RingMatrix, Solver, StandardForm};
use crate::ring::{Epimorphism, Ring, RingElement, RingKind};
use crate::{Error, Result};

/// A linear code `C <= R^n`, with its standard form, rank, cardinality and
/// freeness cached at construction.  Codes are immutable; all queries are
/// pure and safe to call concurrently.
pub struct LinearCode {
    ring: Ring,
    n: usize,
    generators: RingMatrix,
    solver: Solver,
    cardinality: BigUint,
    free: bool,
}

impl LinearCode {
    pub fn from_generators(ring: &Ring, n: usize, generators: RingMatrix) -> Result<LinearCode> {
        if generators.cols() != n {
            return Err(Error::Domain(format!(
                "generator width {} does not match the code length {n}",
                generators.cols()
            )));
        }
        if generators.ring() != ring {
            return Err(Error::Domain(format!(
                "generators over {} fed to a code over {ring}",
                generators.ring()
            )));
        }
        let solver = Solver::new(&generators);
        let sf = solver.standard_form();
        let cardinality = sf.span_cardinality();
        let free = sf.is_free();
        Ok(LinearCode {
            ring: ring.clone(),
            n,
            generators,
            solver,
            cardinality,
            free,
        })
    }

    pub fn zero_code(ring: &Ring, n: usize) -> LinearCode {
        LinearCode::from_generators(ring, n, RingMatrix::empty(ring, n)).unwrap()
    }

    pub fn full_code(ring: &Ring, n: usize) -> LinearCode {
        LinearCode::from_generators(ring, n, RingMatrix::identity(ring, n)).unwrap()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// The generator matrix the code was built from.
    pub fn generators(&self) -> &RingMatrix {
        &self.generators
    }

    pub fn standard_form(&self) -> &StandardForm {
        self.solver.standard_form()
    }

    /// A minimal generating set (the standard-form rows).
    pub fn minimal_generators(&self) -> &RingMatrix {
        &self.solver.standard_form().reduced
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.solver.standard_form().rank()
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn contains(&self, v: &[RingElement]) -> bool {
        assert_eq!(v.len(), self.n, "length mismatch in membership test");
        self.solver.contains(v)
    }

    /// Coefficients `x` with `x G = v`, relative to [`Self::generators`].
    pub fn express(&self, v: &[RingElement]) -> Option<Vec<RingElement>> {
        self.solver.solve_row(v)
    }

    /// The dual code `{u : [u, c] = 0 for all c in C}`, computed as the
    /// kernel of the generator matrix (CRT-componentwise for composites).
    pub fn dual(&self) -> LinearCode {
        let kernel = self.generators.kernel();
        LinearCode::from_generators(&self.ring, self.n, kernel).unwrap()
    }

    /// Equal as codeword sets: mutual row membership plus cardinality.
    pub fn equals(&self, other: &LinearCode) -> bool {
        if self.ring != other.ring || self.n != other.n {
            return false;
        }
        if self.cardinality != other.cardinality {
            return false;
        }
        other
            .minimal_generators()
            .rows_iter()
            .all(|row| self.contains(row))
    }

    /// LCD decision: over a local ring, free with nonsingular `G0 G0^T`
    /// for the standard-form generator `G0`; over a composite, LCD in
    /// every CRT component.
    pub fn is_lcd(&self) -> bool {
        match self.ring.kind() {
            RingKind::Composite { .. } => self
                .crt_split()
                .expect("composite splits")
                .iter()
                .all(LinearCode::is_lcd),
            _ => {
                if !self.free {
                    return false;
                }
                let g0 = self.minimal_generators();
                g0.mul(&g0.transpose()).is_nonsingular()
            }
        }
    }

    /// A nonzero vector of the hull `C ∩ C^⊥`, or `None` when the hull is
    /// trivial.  Constructed from a kernel generator of `G0 G0^T`, so it is
    /// a certificate independent of the [`Self::is_lcd`] decision path.
    pub fn hull_witness(&self) -> Option<Vec<RingElement>> {
        let g0 = self.minimal_generators();
        let gram = g0.mul(&g0.transpose());
        let kernel = gram.kernel();
        for a in kernel.rows_iter() {
            let w = g0.act_row(a);
            if w.iter().any(|e| !e.is_zero()) {
                return Some(w);
            }
        }
        None
    }

    /// The LCD projector `Pi = G^T (G G^T)^{-1} G` onto `C` along `C^⊥`.
    pub fn lcd_projector(&self) -> Result<RingMatrix> {
        if !self.is_lcd() {
            return Err(Error::NotLcd);
        }
        let g0 = self.minimal_generators();
        if g0.rows() == 0 {
            return Ok(RingMatrix::zero(&self.ring, self.n, self.n));
        }
        let gram = g0.mul(&g0.transpose());
        let inv = gram.right_inverse().expect("Gram matrix of an LCD code");
        Ok(g0.transpose().mul(&inv).mul(g0))
    }

    /// Chinese product of codes over the components of a composite ring.
    pub fn crt_compose(parts: &[LinearCode]) -> Result<LinearCode> {
        if parts.len() < 2 {
            return Err(Error::Domain("CRT composition needs >= 2 codes".into()));
        }
        let n = parts[0].n;
        if parts.iter().any(|c| c.n != n) {
            return Err(Error::Domain("CRT composition needs equal lengths".into()));
        }
        let mut indexed: Vec<&LinearCode> = parts.iter().collect();
        indexed.sort_by_key(|c| c.ring.characteristic());
        let ring = Ring::composite(indexed.iter().map(|c| c.ring.clone()).collect())?;
        let rows = indexed.iter().map(|c| c.rank()).max().unwrap_or(0);
        let comps = ring.component_rings();
        let generators = RingMatrix::from_fn(&ring, rows, n, |r, c| {
            let entries: Vec<RingElement> = indexed
                .iter()
                .zip(comps)
                .map(|(code, pr)| {
                    if r < code.rank() {
                        code.minimal_generators().get(r, c).clone()
                    } else {
                        pr.zero()
                    }
                })
                .collect();
            ring.crt_compose_elements(&entries).unwrap()
        });
        LinearCode::from_generators(&ring, n, generators)
    }

    /// Split a code over a composite ring into its CRT components.
    pub fn crt_split(&self) -> Result<Vec<LinearCode>> {
        let comps = match self.ring.kind() {
            RingKind::Composite { parts } => parts.clone(),
            _ => {
                return Err(Error::UnsupportedRing(
                    "crt_split needs a composite ring".into(),
                ))
            }
        };
        comps
            .iter()
            .enumerate()
            .map(|(j, part)| {
                let f = Epimorphism::component(&self.ring, j)?;
                let gens = RingMatrix::from_fn(part, self.generators.rows(), self.n, |r, c| {
                    f.apply(self.generators.get(r, c)).unwrap()
                });
                LinearCode::from_generators(part, self.n, gens)
            })
            .collect()
    }

    /// Image of the code under a ring epimorphism, generator by generator.
    pub fn project(&self, f: &Epimorphism) -> Result<LinearCode> {
        if f.source() != &self.ring {
            return Err(Error::Domain(format!(
                "epimorphism from {} applied to a code over {}",
                f.source(),
                self.ring
            )));
        }
        let gens = self.minimal_generators();
        let rows = gens
            .rows_iter()
            .map(|row| row.iter().map(|e| f.apply(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let target = f.target().clone();
        let matrix = if rows.is_empty() {
            RingMatrix::empty(&target, self.n)
        } else {
            RingMatrix::from_rows(&target, rows)
        };
        LinearCode::from_generators(&target, self.n, matrix)
    }

    /// The free code over `f`'s source whose generator matrix is the
    /// coefficientwise-minimal preimage of this (free) code's standard
    /// generator.  Requires a free code.
    pub fn lift(code: &LinearCode, f: &Epimorphism) -> Result<LinearCode> {
        if f.target() != &code.ring {
            return Err(Error::Domain(format!(
                "cannot lift a code over {} along an epimorphism onto {}",
                code.ring,
                f.target()
            )));
        }
        if !code.is_free() {
            return Err(Error::NotFree);
        }
        let gens = code.minimal_generators();
        let rows = gens
            .rows_iter()
            .map(|row| {
                row.iter()
                    .map(|e| f.preimage(e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let source = f.source().clone();
        let matrix = if rows.is_empty() {
            RingMatrix::empty(&source, code.n)
        } else {
            RingMatrix::from_rows(&source, rows)
        };
        LinearCode::from_generators(&source, code.n, matrix)
    }

    /// All codewords, in a deterministic order; refuses codes with more
    /// than `2^22` words.  Intended for small-instance oracles and the
    /// Gray-map pipeline; the distance kernels have their own enumeration.
    pub fn codewords(&self) -> Vec<Vec<RingElement>> {
        assert!(
            self.cardinality <= BigUint::from(1u64 << 22),
            "codeword enumeration capped at 2^22 words"
        );
        let coeffs: Vec<RingElement> = self.ring.elements().collect();
        let mut words: Vec<Vec<RingElement>> = vec![vec![self.ring.zero(); self.n]];
        for row in self.minimal_generators().rows_iter() {
            let mut next: Vec<Vec<RingElement>> = Vec::new();
            let mut seen: std::collections::HashSet<Vec<Vec<u64>>> =
                std::collections::HashSet::new();
            for w in &words {
                for c in &coeffs {
                    let shifted: Vec<RingElement> =
                        w.iter().zip(row).map(|(x, r)| x + &(c * r)).collect();
                    if seen.insert(word_key(&shifted)) {
                        next.push(shifted);
                    }
                }
            }
            words = next;
        }
        words
    }
}

fn word_key(w: &[RingElement]) -> Vec<Vec<u64>> {
    w.iter().map(|e| e.coords().to_vec()).collect()
}

/// Standard inner product `[v, w] = sum v_j w_j`.
pub fn inner_product(v: &[RingElement], w: &[RingElement]) -> RingElement {
    assert_eq!(v.len(), w.len(), "length mismatch in inner product");
    assert!(!v.is_empty(), "inner product of empty vectors");
    let ring = v[0].ring().clone();
    let mut acc = ring.zero();
    for (a, b) in v.iter().zip(w) {
        acc = &acc + &(a * b);
    }
    acc
}
