//! Dense matrix algebra over the supported rings: products, determinants,
//! nonsingularity, right inverses, kernels and standard generator forms.
//!
//! Chain rings get a native theta-adic reduction that pivots on the entry of
//! minimum valuation; the pivot of row `i` is normalised to exactly
//! `theta^{v_i}` and its column is cleared exactly below and reduced modulo
//! `theta^{v_i}` above.  The resulting rows are independent in the strong
//! sense that `sum a_i row_i = 0` forces every `a_i row_i = 0`, which is what
//! the code enumeration and cardinality formulas rely on.
//!
//! `R_m` is not a chain ring; its systems are linearised over `F2`
//! coordinatewise and solved by bit-matrix elimination, with module
//! generators recovered by a Nakayama-style peel.  Composite rings split
//! into their CRT components.

use num_bigint::BigUint;

use crate::ring::{Ring, RingElement, RingKind};
use crate::util::pow_u64;

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl std::fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RingMatrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| format!("{e:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RingMatrix {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElement>>) -> RingMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        RingMatrix::from_rows_with_width(ring, rows, ncols)
    }

    /// Like [`RingMatrix::from_rows`] but keeps the width when `rows` is
    /// empty.
    pub fn from_rows_with_width(
        ring: &Ring,
        rows: Vec<Vec<RingElement>>,
        ncols: usize,
    ) -> RingMatrix {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            for e in row {
                assert!(e.ring() == ring, "ring mismatch in matrix entry");
                entries.push(e);
            }
        }
        RingMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    /// Build from integer entries (handy for `Z_k` and tests).
    pub fn from_integers(ring: &Ring, rows: &[&[i64]]) -> RingMatrix {
        RingMatrix::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> RingMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &Ring, k: usize) -> RingMatrix {
        RingMatrix::from_fn(
            ring,
            k,
            k,
            |r, c| if r == c { ring.one() } else { ring.zero() },
        )
    }

    /// An empty (0-row) matrix of the given width; generator of the zero code.
    pub fn empty(ring: &Ring, cols: usize) -> RingMatrix {
        RingMatrix::zero(ring, 0, cols)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement) {
        assert!(v.ring() == &self.ring);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RingElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<RingElement> {
        self.row(r).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[RingElement]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> RingMatrix {
        RingMatrix::from_fn(&self.ring, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        assert!(self.ring == other.ring, "ring mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        RingMatrix::from_fn(&self.ring, self.rows, other.cols, |r, c| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(r, k) * other.get(k, c));
            }
            acc
        })
    }

    pub fn add(&self, other: &RingMatrix) -> RingMatrix {
        assert!(self.ring == other.ring && self.rows == other.rows && self.cols == other.cols);
        RingMatrix::from_fn(&self.ring, self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    pub fn sub(&self, other: &RingMatrix) -> RingMatrix {
        assert!(self.ring == other.ring && self.rows == other.rows && self.cols == other.cols);
        RingMatrix::from_fn(&self.ring, self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Row `v` times this matrix: `v * self`.
    pub fn act_row(&self, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|c| {
                let mut acc = self.ring.zero();
                for (r, x) in v.iter().enumerate() {
                    acc = &acc + &(x * self.get(r, c));
                }
                acc
            })
            .collect()
    }

    /// Stack two matrices with the same width.
    pub fn vstack(&self, other: &RingMatrix) -> RingMatrix {
        assert!(self.ring == other.ring && self.cols == other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }
}

/// One pivot of a standard form: row and column in the reduced matrix plus
/// the theta-adic valuation of the pivot entry (always 0 outside chain rings).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub val: u32,
}

/// Reduced generator data of a row module.
///
/// `reduced` spans the same row module as the input; `transform` maps it back:
/// `reduced = transform * input`.  For chain rings the pivot valuations are
/// nondecreasing along rows and `type_profile[v]` counts pivots of valuation
/// `v`.  `permutation` lists the pivot columns first, then the rest, which is
/// the column order exhibiting a free code as `[I_k | M]`.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub reduced: RingMatrix,
    pub pivots: Vec<Pivot>,
    pub permutation: Vec<usize>,
    pub type_profile: Vec<usize>,
    pub(crate) transform: RingMatrix,
    pub(crate) detail: FormDetail,
}

#[derive(Clone, Debug)]
pub(crate) enum FormDetail {
    Chain,
    Linearized,
    Composite(Vec<StandardForm>),
}

impl StandardForm {
    pub fn rank(&self) -> usize {
        self.reduced.rows()
    }

    /// Number of codewords in the row span.
    pub fn span_cardinality(&self) -> BigUint {
        let ring = self.reduced.ring();
        match ring.kind() {
            RingKind::Chain { p, s, m, .. } => {
                let q = BigUint::from(pow_u64(*p, *m));
                let mut card = BigUint::from(1u32);
                for piv in &self.pivots {
                    card *= q.pow(s - piv.val);
                }
                card
            }
            RingKind::LocalAlgebra { .. } => {
                let gens: Vec<Vec<RingElement>> =
                    self.reduced.rows_iter().map(|r| r.to_vec()).collect();
                let dim = f2::span_dimension(ring, &gens);
                BigUint::from(2u32).pow(dim as u32)
            }
            RingKind::Composite { .. } => match &self.detail {
                FormDetail::Composite(parts) => {
                    parts.iter().map(|sf| sf.span_cardinality()).product()
                }
                _ => unreachable!(),
            },
        }
    }

    /// A free row module has full-valuation-zero pivots; for composites all
    /// components must be free of equal rank.
    pub fn is_free(&self) -> bool {
        match &self.detail {
            FormDetail::Composite(parts) => {
                parts.iter().all(|sf| sf.is_free())
                    && parts.windows(2).all(|w| w[0].rank() == w[1].rank())
            }
            _ => {
                let ring = self.reduced.ring();
                let full = BigUint::from(
                    ring.cardinality().clone()).pow(self.rank() as u32);
                self.pivots.iter().all(|p| p.val == 0) && self.span_cardinality() == full
            }
        }
    }
}

impl RingMatrix {
    /// Standard form of the row module, dispatching on the ring kind.
    pub fn standard_form(&self) -> StandardForm {
        match self.ring.kind() {
            RingKind::Chain { .. } => chain::standard_form(self),
            RingKind::LocalAlgebra { .. } => f2::standard_form(self),
            RingKind::Composite { .. } => composite::standard_form(self),
        }
    }

    /// Generators of the right kernel `{x : A x^T = 0}` as matrix rows;
    /// the result has zero rows exactly when the kernel is trivial.
    pub fn kernel(&self) -> RingMatrix {
        match self.ring.kind() {
            RingKind::Chain { .. } => chain::kernel(self),
            RingKind::LocalAlgebra { .. } => f2::kernel(self),
            RingKind::Composite { .. } => composite::kernel(self),
        }
    }

    /// Cofactor-free exact determinant.
    pub fn det(&self) -> RingElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match self.ring.kind() {
            RingKind::Chain { .. } => chain::det(self),
            RingKind::LocalAlgebra { .. } => det_cofactor(self),
            RingKind::Composite { .. } => {
                let parts = composite::split(self);
                let dets: Vec<RingElement> = parts.iter().map(|m| m.det()).collect();
                self.ring.crt_compose_elements(&dets).unwrap()
            }
        }
    }

    /// `det(A)` is a unit; for local rings decided on the residue field.
    pub fn is_nonsingular(&self) -> bool {
        assert!(self.is_square(), "nonsingularity of a non-square matrix");
        match self.ring.kind() {
            RingKind::Composite { .. } => {
                composite::split(self).iter().all(|m| m.is_nonsingular())
            }
            _ => {
                if self.rows == 0 {
                    return true;
                }
                let field = self.ring.residue_field().unwrap();
                let residue = RingMatrix::from_fn(&field, self.rows, self.cols, |r, c| {
                    field.elem_from(self.get(r, c).residue().unwrap())
                });
                !chain::det(&residue).is_zero()
            }
        }
    }

    /// A right inverse `B` with `A B = I`, when `A` is full-row-rank.
    pub fn right_inverse(&self) -> Option<RingMatrix> {
        let solver = Solver::new(&self.transpose());
        let mut cols: Vec<Vec<RingElement>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let e: Vec<RingElement> = (0..self.rows)
                .map(|j| {
                    if i == j {
                        self.ring.one()
                    } else {
                        self.ring.zero()
                    }
                })
                .collect();
            cols.push(solver.solve_row(&e)?);
        }
        Some(RingMatrix::from_fn(&self.ring, self.cols, self.rows, |r, c| {
            cols[c][r].clone()
        }))
    }
}

impl Ring {
    /// Re-home an element produced by an equal ring handle (used internally
    /// when residue fields are rebuilt).
    pub(crate) fn elem_from(&self, e: RingElement) -> RingElement {
        debug_assert!(e.ring() == self);
        self.elem(e.coords().to_vec())
    }
}

/// Row-span solver: answers `x G = v` queries with coefficients relative to
/// the original generator rows.
pub(crate) struct Solver {
    ring: Ring,
    sf: StandardForm,
}

impl Solver {
    pub fn new(generators: &RingMatrix) -> Solver {
        Solver {
            ring: generators.ring().clone(),
            sf: generators.standard_form(),
        }
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.sf
    }

    pub fn contains(&self, v: &[RingElement]) -> bool {
        self.solve_reduced(v).is_some()
    }

    /// Coefficients `x` (length = original rows) with `x G = v`.
    pub fn solve_row(&self, v: &[RingElement]) -> Option<Vec<RingElement>> {
        let coeffs = self.solve_reduced(v)?;
        Some(self.sf.transform.act_row(&coeffs))
    }

    /// Coefficients relative to the reduced rows.
    fn solve_reduced(&self, v: &[RingElement]) -> Option<Vec<RingElement>> {
        assert_eq!(v.len(), self.sf.reduced.cols());
        match &self.sf.detail {
            FormDetail::Chain => chain::solve_reduced(&self.ring, &self.sf, v),
            FormDetail::Linearized => f2::solve_reduced(&self.ring, &self.sf, v),
            FormDetail::Composite(_) => composite::solve_reduced(&self.ring, &self.sf, v),
        }
    }
}

fn det_cofactor(a: &RingMatrix) -> RingElement {
    let ring = a.ring();
    let k = a.rows();
    if k == 0 {
        return ring.one();
    }
    if k == 1 {
        return a.get(0, 0).clone();
    }
    let mut acc = ring.zero();
    for c in 0..k {
        if a.get(0, c).is_zero() {
            continue;
        }
        let minor = RingMatrix::from_fn(ring, k - 1, k - 1, |i, j| {
            a.get(i + 1, if j < c { j } else { j + 1 }).clone()
        });
        let term = a.get(0, c) * &det_cofactor(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

// ---------------------------------------------------------------------------
// chain rings
// ---------------------------------------------------------------------------

mod chain {
    use super::*;

    /// theta-adic standard form: repeatedly pivot on the entry of minimum
    /// valuation among the unpivoted rows.
    pub fn standard_form(input: &RingMatrix) -> StandardForm {
        let ring = input.ring().clone();
        let s = ring.nilpotency().unwrap();
        let nrows = input.rows();
        let ncols = input.cols();
        let mut rows: Vec<Vec<RingElement>> = input.rows_iter().map(|r| r.to_vec()).collect();
        let mut transform: Vec<Vec<RingElement>> = (0..nrows)
            .map(|i| {
                (0..nrows)
                    .map(|j| if i == j { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect();
        let mut pivoted = vec![false; nrows];
        let mut pivot_seq: Vec<(usize, usize, u32)> = Vec::new();

        loop {
            let mut best: Option<(u32, usize, usize)> = None;
            for (r, row) in rows.iter().enumerate() {
                if pivoted[r] {
                    continue;
                }
                for (c, e) in row.iter().enumerate() {
                    let v = ring.theta_val(e.coords());
                    if v < s && best.map_or(true, |b| (v, c, r) < b) {
                        best = Some((v, c, r));
                    }
                }
            }
            let Some((v, c, r)) = best else { break };
            // normalise pivot to exactly theta^v
            let unit = ring.elem_from_coords_unchecked(ring.unit_part(rows[r][c].coords()));
            let uinv = ring.inverse(&unit).expect("unit part inverts");
            for e in rows[r].iter_mut() {
                *e = ring.mul(e, &uinv);
            }
            for e in transform[r].iter_mut() {
                *e = ring.mul(e, &uinv);
            }
            // clear column c everywhere else
            for i in 0..nrows {
                if i == r {
                    continue;
                }
                let t = ring.div_theta_floor(rows[i][c].coords(), v);
                let t = ring.elem_from_coords_unchecked(t);
                if t.is_zero() {
                    continue;
                }
                for j in 0..ncols {
                    let sub = ring.mul(&t, &rows[r][j]);
                    rows[i][j] = ring.sub(&rows[i][j], &sub);
                }
                for j in 0..nrows {
                    let sub = ring.mul(&t, &transform[r][j]);
                    transform[i][j] = ring.sub(&transform[i][j], &sub);
                }
            }
            pivoted[r] = true;
            pivot_seq.push((r, c, v));
        }

        // reduced rows in pivot processing order, which is (valuation, column)
        let reduced_rows: Vec<Vec<RingElement>> =
            pivot_seq.iter().map(|&(r, _, _)| rows[r].clone()).collect();
        let transform_rows: Vec<Vec<RingElement>> = pivot_seq
            .iter()
            .map(|&(r, _, _)| transform[r].clone())
            .collect();
        let pivots: Vec<Pivot> = pivot_seq
            .iter()
            .enumerate()
            .map(|(i, &(_, c, v))| Pivot {
                row: i,
                col: c,
                val: v,
            })
            .collect();
        let mut type_profile = vec![0usize; s as usize];
        for p in &pivots {
            type_profile[p.val as usize] += 1;
        }
        let mut permutation: Vec<usize> = pivots.iter().map(|p| p.col).collect();
        for c in 0..ncols {
            if !permutation.contains(&c) {
                permutation.push(c);
            }
        }
        StandardForm {
            reduced: RingMatrix::from_rows_with_width(&ring, reduced_rows, ncols),
            pivots,
            permutation,
            type_profile,
            transform: RingMatrix::from_rows_with_width(&ring, transform_rows, nrows),
            detail: FormDetail::Chain,
        }
    }

    /// Reduce `v` against the standard form; coefficients per reduced row.
    pub fn solve_reduced(
        ring: &Ring,
        sf: &StandardForm,
        v: &[RingElement],
    ) -> Option<Vec<RingElement>> {
        let mut residual: Vec<RingElement> = v.to_vec();
        let mut coeffs = vec![ring.zero(); sf.pivots.len()];
        for (i, piv) in sf.pivots.iter().enumerate() {
            let e = &residual[piv.col];
            if e.is_zero() {
                continue;
            }
            let t = ring.div_theta_exact(e.coords(), piv.val)?;
            let t = ring.elem_from_coords_unchecked(t);
            for (j, r) in sf.reduced.row(i).iter().enumerate() {
                let sub = ring.mul(&t, r);
                residual[j] = ring.sub(&residual[j], &sub);
            }
            coeffs[i] = t;
        }
        if residual.iter().all(|e| e.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Kernel by successive constraints: start from the ambient module and
    /// intersect with each row's orthogonality condition.  For a single
    /// constraint `sum a_j d_j = 0` over a chain ring the solution module is
    /// generated by `e_j - (d_j / theta^v) u^{-1} e_{j*}` and
    /// `theta^{s-v} e_{j*}`, pivoting on the coefficient of least valuation.
    pub fn kernel(a: &RingMatrix) -> RingMatrix {
        let ring = a.ring().clone();
        let s = ring.nilpotency().unwrap();
        let n = a.cols();
        let mut gens: Vec<Vec<RingElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect();
        for row in a.rows_iter() {
            if gens.is_empty() {
                break;
            }
            let dots: Vec<RingElement> = gens
                .iter()
                .map(|g| {
                    let mut acc = ring.zero();
                    for (x, y) in g.iter().zip(row) {
                        acc = ring.add(&acc, &ring.mul(x, y));
                    }
                    acc
                })
                .collect();
            let mut best: Option<(u32, usize)> = None;
            for (j, d) in dots.iter().enumerate() {
                let v = ring.theta_val(d.coords());
                if v < s && best.map_or(true, |b| (v, j) < b) {
                    best = Some((v, j));
                }
            }
            let Some((v, jstar)) = best else { continue };
            let unit = ring.elem_from_coords_unchecked(ring.unit_part(dots[jstar].coords()));
            let uinv = ring.inverse(&unit).unwrap();
            let pivot_gen = gens[jstar].clone();
            let mut next: Vec<Vec<RingElement>> = Vec::with_capacity(gens.len());
            for (j, g) in gens.iter().enumerate() {
                if j == jstar {
                    continue;
                }
                let dj = ring
                    .div_theta_exact(dots[j].coords(), v)
                    .expect("minimal valuation divides");
                let t = ring.mul(&ring.elem_from_coords_unchecked(dj), &uinv);
                let combo: Vec<RingElement> = g
                    .iter()
                    .zip(&pivot_gen)
                    .map(|(x, y)| ring.sub(x, &ring.mul(&t, y)))
                    .collect();
                next.push(combo);
            }
            if v > 0 {
                let torsion = ring.theta_pow(s - v);
                let tg: Vec<RingElement> =
                    pivot_gen.iter().map(|x| ring.mul(&torsion, x)).collect();
                if tg.iter().any(|e| !e.is_zero()) {
                    next.push(tg);
                }
            }
            gens = next;
        }
        gens.retain(|g| g.iter().any(|e| !e.is_zero()));
        if gens.is_empty() {
            return RingMatrix::empty(&ring, n);
        }
        // canonicalise to a minimal generating set
        let raw = RingMatrix::from_rows(&ring, gens);
        raw.standard_form().reduced
    }

    /// Exact determinant by theta-adic triangularisation.
    pub fn det(a: &RingMatrix) -> RingElement {
        let ring = a.ring().clone();
        let s = ring.nilpotency().unwrap();
        let k = a.rows();
        if k == 0 {
            return ring.one();
        }
        let mut rows: Vec<Vec<RingElement>> = a.rows_iter().map(|r| r.to_vec()).collect();
        let mut negate = false;
        for c in 0..k {
            let mut best: Option<(u32, usize)> = None;
            for (r, row) in rows.iter().enumerate().skip(c) {
                let v = ring.theta_val(row[c].coords());
                if v < s && best.map_or(true, |b| (v, r) < b) {
                    best = Some((v, r));
                }
            }
            let Some((v, r)) = best else {
                return ring.zero();
            };
            if r != c {
                rows.swap(r, c);
                negate = !negate;
            }
            let pivot = rows[c][c].clone();
            let pivot_unit = ring.elem_from_coords_unchecked(ring.unit_part(pivot.coords()));
            let uinv = ring.inverse(&pivot_unit).unwrap();
            for i in c + 1..k {
                let e = rows[i][c].clone();
                if e.is_zero() {
                    continue;
                }
                let q = ring
                    .div_theta_exact(e.coords(), v)
                    .expect("column minimum divides");
                let t = ring.mul(&ring.elem_from_coords_unchecked(q), &uinv);
                for j in c..k {
                    let sub = ring.mul(&t, &rows[c][j]);
                    rows[i][j] = ring.sub(&rows[i][j], &sub);
                }
            }
        }
        let mut det = ring.one();
        for (c, row) in rows.iter().enumerate() {
            det = ring.mul(&det, &row[c]);
        }
        if negate {
            det = ring.neg(&det);
        }
        det
    }
}

// ---------------------------------------------------------------------------
// R_m via F2 linearisation
// ---------------------------------------------------------------------------

pub(crate) mod f2 {
    use super::*;

    /// Bit matrix with u64 limbs; rows are bit vectors of width `ncols`.
    #[derive(Clone, Debug)]
    pub struct F2Mat {
        pub rows: Vec<Vec<u64>>,
        pub ncols: usize,
    }

    impl F2Mat {
        pub fn new(ncols: usize) -> F2Mat {
            F2Mat {
                rows: Vec::new(),
                ncols,
            }
        }

        fn limbs(ncols: usize) -> usize {
            ncols.div_ceil(64)
        }

        pub fn push_row(&mut self, bits: impl Iterator<Item = bool>) {
            let mut row = vec![0u64; Self::limbs(self.ncols)];
            for (i, b) in bits.enumerate() {
                if b {
                    row[i / 64] |= 1 << (i % 64);
                }
            }
            self.rows.push(row);
        }

        pub fn get(&self, r: usize, c: usize) -> bool {
            self.rows[r][c / 64] >> (c % 64) & 1 == 1
        }

        fn xor_rows(&mut self, dst: usize, src: usize) {
            let (a, b) = if dst < src {
                let (x, y) = self.rows.split_at_mut(src);
                (&mut x[dst], &y[0])
            } else {
                let (x, y) = self.rows.split_at_mut(dst);
                (&mut y[0], &x[src])
            };
            for (d, s) in a.iter_mut().zip(b.iter()) {
                *d ^= s;
            }
        }

        /// Row reduce in place; returns pivot columns per surviving row.
        /// `transform`, when given, receives the same row operations.
        pub fn rref(&mut self, mut transform: Option<&mut F2Mat>) -> Vec<usize> {
            let mut pivots = Vec::new();
            let mut row = 0;
            for col in 0..self.ncols {
                let Some(r) = (row..self.rows.len()).find(|&r| self.get(r, col)) else {
                    continue;
                };
                self.rows.swap(row, r);
                if let Some(t) = transform.as_deref_mut() {
                    t.rows.swap(row, r);
                }
                for i in 0..self.rows.len() {
                    if i != row && self.get(i, col) {
                        self.xor_rows(i, row);
                        if let Some(t) = transform.as_deref_mut() {
                            t.xor_rows(i, row);
                        }
                    }
                }
                pivots.push(col);
                row += 1;
                if row == self.rows.len() {
                    break;
                }
            }
            pivots
        }

        /// Basis of `{x : self * x = 0}` (right kernel), one bit row per
        /// basis vector of length `ncols`.
        pub fn right_kernel(&self) -> F2Mat {
            let mut work = self.clone();
            let pivots = work.rref(None);
            let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
            let mut basis = F2Mat::new(self.ncols);
            for free in 0..self.ncols {
                if pivot_set.contains(&free) {
                    continue;
                }
                let mut vec = vec![false; self.ncols];
                vec[free] = true;
                for (r, &pc) in pivots.iter().enumerate() {
                    if work.get(r, free) {
                        vec[pc] = true;
                    }
                }
                basis.push_row(vec.into_iter());
            }
            basis
        }

        pub fn rank(&self) -> usize {
            self.clone().rref(None).len()
        }
    }

    /// Flatten a ring vector to its F2 coordinates.
    fn flatten(v: &[RingElement]) -> Vec<bool> {
        v.iter()
            .flat_map(|e| e.coords().iter().map(|&c| c == 1))
            .collect()
    }

    fn unflatten(ring: &Ring, n: usize, bits: &F2Mat, row: usize) -> Vec<RingElement> {
        let cw = ring.coords_per_element();
        (0..n)
            .map(|i| {
                let coords: Vec<u64> = (0..cw)
                    .map(|j| bits.get(row, i * cw + j) as u64)
                    .collect();
                ring.elem_from_coords_unchecked(coords)
            })
            .collect()
    }

    /// Basis monomials `u^B` of `R_m` as ring elements.
    fn monomials(ring: &Ring) -> Vec<RingElement> {
        let cw = ring.coords_per_element();
        (0..cw)
            .map(|b| {
                let mut coords = vec![0u64; cw];
                coords[b] = 1;
                ring.elem_from_coords_unchecked(coords)
            })
            .collect()
    }

    /// F2 dimension of the R-span of the given vectors.
    pub fn span_dimension(ring: &Ring, gens: &[Vec<RingElement>]) -> usize {
        let n = gens.first().map_or(0, |g| g.len());
        let cw = ring.coords_per_element();
        let mut mat = F2Mat::new(n * cw);
        for g in gens {
            for mono in monomials(ring) {
                let scaled: Vec<RingElement> = g.iter().map(|e| ring.mul(&mono, e)).collect();
                mat.push_row(flatten(&scaled).into_iter());
            }
        }
        mat.rank()
    }

    /// Standard form for `R_m`: unit-pivot Gauss-Jordan first, then a
    /// Nakayama peel of the remaining torsion rows against `mC`.
    pub fn standard_form(input: &RingMatrix) -> StandardForm {
        let ring = input.ring().clone();
        let nrows = input.rows();
        let ncols = input.cols();
        let mut rows: Vec<Vec<RingElement>> = input.rows_iter().map(|r| r.to_vec()).collect();
        let mut transform: Vec<Vec<RingElement>> = (0..nrows)
            .map(|i| {
                (0..nrows)
                    .map(|j| if i == j { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect();
        let mut pivots: Vec<Pivot> = Vec::new();
        let mut r = 0usize;
        for c in 0..ncols {
            let Some(i) = (r..nrows).find(|&i| rows[i][c].is_unit()) else {
                continue;
            };
            rows.swap(r, i);
            transform.swap(r, i);
            let inv = ring.inverse(&rows[r][c]).unwrap();
            for e in rows[r].iter_mut() {
                *e = ring.mul(e, &inv);
            }
            for e in transform[r].iter_mut() {
                *e = ring.mul(e, &inv);
            }
            for i in 0..nrows {
                if i == r || rows[i][c].is_zero() {
                    continue;
                }
                let t = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = ring.mul(&t, &rows[r][j]);
                    rows[i][j] = ring.sub(&rows[i][j], &sub);
                }
                for j in 0..nrows {
                    let sub = ring.mul(&t, &transform[r][j]);
                    transform[i][j] = ring.sub(&transform[i][j], &sub);
                }
            }
            pivots.push(Pivot { row: r, col: c, val: 0 });
            r += 1;
            if r == nrows {
                break;
            }
        }

        let mut reduced_rows: Vec<Vec<RingElement>> = rows[..r].to_vec();
        let mut transform_rows: Vec<Vec<RingElement>> = transform[..r].to_vec();

        // torsion part: pick residual rows whose class is outside mC + picked
        let residual: Vec<usize> = (r..nrows)
            .filter(|&i| rows[i].iter().any(|e| !e.is_zero()))
            .collect();
        if !residual.is_empty() {
            let cw = ring.coords_per_element();
            let mut acc = F2Mat::new(ncols * cw);
            // mC from all generators
            for row in &rows {
                for mono in monomials(&ring).into_iter().skip(1) {
                    let scaled: Vec<RingElement> =
                        row.iter().map(|e| ring.mul(&mono, e)).collect();
                    acc.push_row(flatten(&scaled).into_iter());
                }
            }
            for row in &reduced_rows {
                acc.push_row(flatten(row).into_iter());
            }
            let mut rank = acc.rank();
            for &i in &residual {
                let mut candidate = acc.clone();
                candidate.push_row(flatten(&rows[i]).into_iter());
                let new_rank = candidate.rank();
                if new_rank > rank {
                    rank = new_rank;
                    acc = candidate;
                    let col = rows[i].iter().position(|e| !e.is_zero()).unwrap();
                    pivots.push(Pivot {
                        row: reduced_rows.len(),
                        col,
                        val: 0,
                    });
                    reduced_rows.push(rows[i].clone());
                    transform_rows.push(transform[i].clone());
                }
            }
        }

        let mut permutation: Vec<usize> = pivots.iter().map(|p| p.col).collect();
        for c in 0..ncols {
            if !permutation.contains(&c) {
                permutation.push(c);
            }
        }
        StandardForm {
            reduced: RingMatrix::from_rows_with_width(&ring, reduced_rows, ncols),
            pivots,
            permutation,
            type_profile: Vec::new(),
            transform: RingMatrix::from_rows_with_width(&ring, transform_rows, nrows),
            detail: FormDetail::Linearized,
        }
    }

    /// Solve `x * reduced = v` by F2 linearisation of the coefficients.
    pub fn solve_reduced(
        ring: &Ring,
        sf: &StandardForm,
        v: &[RingElement],
    ) -> Option<Vec<RingElement>> {
        let k = sf.reduced.rows();
        let n = sf.reduced.cols();
        let cw = ring.coords_per_element();
        if k == 0 {
            return if v.iter().all(|e| e.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        // unknown rows: u^B * row_i, flattened; augmented with target v
        let monos = monomials(ring);
        let mut mat = F2Mat::new(n * cw + 1);
        let target = flatten(v);
        for i in 0..k {
            for mono in &monos {
                let scaled: Vec<RingElement> = sf
                    .reduced
                    .row(i)
                    .iter()
                    .map(|e| ring.mul(mono, e))
                    .collect();
                let mut bits = flatten(&scaled);
                bits.push(false);
                mat.push_row(bits.into_iter());
            }
        }
        let mut aug = vec![false; n * cw + 1];
        aug[..n * cw].copy_from_slice(&target);
        aug[n * cw] = true;
        mat.push_row(aug.into_iter());

        // x * M = target has a solution iff the augmented row is dependent;
        // recover coefficients by eliminating with transform tracking.
        let rows_total = mat.rows.len();
        let mut tr = F2Mat::new(rows_total);
        for i in 0..rows_total {
            let mut bits = vec![false; rows_total];
            bits[i] = true;
            tr.push_row(bits.into_iter());
        }
        mat.rref(Some(&mut tr));
        // find a reduced row equal to exactly the augmentation bit
        for (i, _row) in mat.rows.iter().enumerate() {
            let only_aug = (0..n * cw).all(|c| !mat.get(i, c)) && mat.get(i, n * cw);
            if !only_aug {
                continue;
            }
            if !tr.get(i, rows_total - 1) {
                continue; // combination does not involve the target row
            }
            // target = sum of the involved unknown rows
            let mut coeffs = vec![ring.zero(); k];
            for gi in 0..k {
                for (bi, mono) in monos.iter().enumerate() {
                    if tr.get(i, gi * cw + bi) {
                        coeffs[gi] = ring.add(&coeffs[gi], mono);
                    }
                }
            }
            return Some(coeffs);
        }
        None
    }

    /// Kernel over `R_m` by F2 linearisation; returns R-module generators.
    pub fn kernel(a: &RingMatrix) -> RingMatrix {
        let ring = a.ring().clone();
        let n = a.cols();
        let k = a.rows();
        let cw = ring.coords_per_element();
        if n == 0 {
            return RingMatrix::empty(&ring, 0);
        }
        // unknowns: x_c = sum t_{c,B} u^B; equations: per a-row, per coordinate
        let monos = monomials(&ring);
        let mut mat = F2Mat::new(k * cw);
        for c in 0..n {
            for mono in &monos {
                // row of the big system for unknown t_{c,B}
                let bits: Vec<bool> = (0..k)
                    .flat_map(|r| {
                        let prod = ring.mul(mono, a.get(r, c));
                        prod.coords().iter().map(|&x| x == 1).collect::<Vec<_>>()
                    })
                    .collect();
                mat.push_row(bits.into_iter());
            }
        }
        // solutions: left kernel of mat = right kernel of its transpose
        let mut transposed = F2Mat::new(mat.rows.len());
        for c in 0..k * cw {
            transposed.push_row((0..mat.rows.len()).map(|r| mat.get(r, c)));
        }
        let basis = transposed.right_kernel();
        let mut gens: Vec<Vec<RingElement>> = Vec::new();
        for bi in 0..basis.rows.len() {
            let vec = unflatten(&ring, n, &basis, bi);
            if vec.iter().any(|e| !e.is_zero()) {
                gens.push(vec);
            }
        }
        if gens.is_empty() {
            return RingMatrix::empty(&ring, n);
        }
        RingMatrix::from_rows(&ring, gens).standard_form().reduced
    }
}

// ---------------------------------------------------------------------------
// composites via CRT
// ---------------------------------------------------------------------------

mod composite {
    use super::*;

    pub fn split(a: &RingMatrix) -> Vec<RingMatrix> {
        let ring = a.ring();
        let parts = ring.component_rings().to_vec();
        parts
            .iter()
            .enumerate()
            .map(|(j, part)| {
                let f = crate::ring::Epimorphism::component(ring, j).unwrap();
                RingMatrix::from_fn(part, a.rows(), a.cols(), |r, c| {
                    f.apply(a.get(r, c)).unwrap()
                })
            })
            .collect()
    }

    /// Recombine per-component matrices, padding shorter ones with zero rows.
    pub fn compose(ring: &Ring, parts: &[RingMatrix]) -> RingMatrix {
        let cols = parts.iter().map(|m| m.cols()).max().unwrap_or(0);
        let rows = parts.iter().map(|m| m.rows()).max().unwrap_or(0);
        RingMatrix::from_fn(ring, rows, cols, |r, c| {
            let comps: Vec<RingElement> = parts
                .iter()
                .zip(ring.component_rings())
                .map(|(m, pr)| {
                    if r < m.rows() {
                        m.get(r, c).clone()
                    } else {
                        pr.zero()
                    }
                })
                .collect();
            ring.crt_compose_elements(&comps).unwrap()
        })
    }

    pub fn standard_form(input: &RingMatrix) -> StandardForm {
        let ring = input.ring().clone();
        let parts = split(input);
        let forms: Vec<StandardForm> = parts.iter().map(|m| m.standard_form()).collect();
        let reduced_parts: Vec<RingMatrix> = forms.iter().map(|f| f.reduced.clone()).collect();
        let reduced = compose(&ring, &reduced_parts);
        let transform_parts: Vec<RingMatrix> = forms
            .iter()
            .map(|f| {
                // pad transform to (max rank) x nrows
                let max_rank = forms.iter().map(|g| g.rank()).max().unwrap_or(0);
                let mut t = f.transform.clone();
                if t.rows() < max_rank {
                    let pad = RingMatrix::zero(t.ring(), max_rank - t.rows(), input.rows());
                    t = t.vstack(&pad);
                }
                t
            })
            .collect();
        let transform = compose(&ring, &transform_parts);
        StandardForm {
            reduced,
            pivots: Vec::new(),
            permutation: (0..input.cols()).collect(),
            type_profile: Vec::new(),
            transform,
            detail: FormDetail::Composite(forms),
        }
    }

    pub fn solve_reduced(
        ring: &Ring,
        sf: &StandardForm,
        v: &[RingElement],
    ) -> Option<Vec<RingElement>> {
        let FormDetail::Composite(forms) = &sf.detail else {
            unreachable!()
        };
        let k = sf.reduced.rows();
        let mut part_coeffs: Vec<Vec<RingElement>> = Vec::new();
        for (j, form) in forms.iter().enumerate() {
            let f = crate::ring::Epimorphism::component(ring, j).unwrap();
            let vj: Vec<RingElement> = v.iter().map(|e| f.apply(e).unwrap()).collect();
            let solver_result = match &form.detail {
                FormDetail::Chain => chain::solve_reduced(f.target(), form, &vj),
                FormDetail::Linearized => f2::solve_reduced(f.target(), form, &vj),
                FormDetail::Composite(_) => unreachable!("composites are flattened"),
            }?;
            let mut padded = solver_result;
            padded.resize(k, f.target().zero());
            part_coeffs.push(padded);
        }
        let coeffs: Vec<RingElement> = (0..k)
            .map(|i| {
                let comps: Vec<RingElement> =
                    part_coeffs.iter().map(|pc| pc[i].clone()).collect();
                ring.crt_compose_elements(&comps).unwrap()
            })
            .collect();
        Some(coeffs)
    }

    /// Kernel generators: component kernels embedded through CRT.
    pub fn kernel(a: &RingMatrix) -> RingMatrix {
        let ring = a.ring().clone();
        let parts = split(a);
        let mut gens: Vec<Vec<RingElement>> = Vec::new();
        for (j, part) in parts.iter().enumerate() {
            let ker = part.kernel();
            for row in ker.rows_iter() {
                let composite_row: Vec<RingElement> = row
                    .iter()
                    .map(|e| {
                        let comps: Vec<RingElement> = ring
                            .component_rings()
                            .iter()
                            .enumerate()
                            .map(|(i, pr)| if i == j { e.clone() } else { pr.zero() })
                            .collect();
                        ring.crt_compose_elements(&comps).unwrap()
                    })
                    .collect();
                gens.push(composite_row);
            }
        }
        if gens.is_empty() {
            return RingMatrix::empty(&ring, a.cols());
        }
        RingMatrix::from_rows(&ring, gens)
    }
}

impl Ring {
    pub(crate) fn elem_from_coords_unchecked(&self, coords: Vec<u64>) -> RingElement {
        self.elem(coords)
    }
}
