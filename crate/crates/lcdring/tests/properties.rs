//! Supplementary invariant suites: brute-force anchors that are independent
//! of the library's own machinery, plus proptest coverage of the algebraic
//! identities.

mod common;

use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::{poly, random_element, z, DetRng};
use lcdring::code::{inner_product, LinearCode};
use lcdring::consta::ConstacyclicCode;
use lcdring::distance::{min_distance, DistanceOptions, DistanceStatus, WeightKind};
use lcdring::linalg::RingMatrix;
use lcdring::poly::{FactorSet, RingPoly};
use lcdring::ring::{Ring, RingElement};

/// Brute-force orthogonal complement: every ambient vector tested against
/// every generator.  The anchor for `dual()` on small instances.
fn brute_force_dual(code: &LinearCode) -> Vec<Vec<RingElement>> {
    let ring = code.ring();
    let n = code.length();
    let mut out = Vec::new();
    let mods: Vec<u64> = (0..n)
        .flat_map(|_| ring.coord_mods().iter().copied())
        .collect();
    let cw = ring.coords_per_element();
    let mut counter = vec![0u64; mods.len()];
    loop {
        let v: Vec<RingElement> = (0..n)
            .map(|i| {
                ring.element_from_coords(counter[i * cw..(i + 1) * cw].to_vec())
                    .unwrap()
            })
            .collect();
        if code
            .minimal_generators()
            .rows_iter()
            .all(|row| inner_product(&v, row).is_zero())
        {
            out.push(v);
        }
        let mut i = 0;
        loop {
            if i == counter.len() {
                return out;
            }
            counter[i] += 1;
            if counter[i] < mods[i] {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn dual_matches_brute_force_orthogonal_complement() {
    let cases: Vec<(Ring, usize, Vec<Vec<i64>>)> = vec![
        (z(4), 3, vec![vec![1, 2, 3]]),
        (z(4), 3, vec![vec![2, 0, 2], vec![0, 1, 1]]),
        (z(8), 2, vec![vec![2, 4]]),
        (z(15), 3, vec![vec![1, 0, 6], vec![0, 10, 5]]),
        (z(9), 3, vec![vec![3, 1, 0]]),
    ];
    for (ring, n, rows) in cases {
        let rows: Vec<Vec<RingElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.from_integer(x)).collect())
            .collect();
        let c =
            LinearCode::from_generators(&ring, n, RingMatrix::from_rows(&ring, rows)).unwrap();
        let dual = c.dual();
        let brute = brute_force_dual(&c);
        assert_eq!(BigUint::from(brute.len()), *dual.cardinality(), "{ring}");
        for v in &brute {
            assert!(dual.contains(v), "{ring}");
        }
    }
    // an R_m case
    let rm = Ring::local_algebra(1).unwrap();
    let u = rm.element_from_coords(vec![0, 1]).unwrap();
    let c = LinearCode::from_generators(
        &rm,
        2,
        RingMatrix::from_rows(&rm, vec![vec![u.clone(), rm.one()]]),
    )
    .unwrap();
    let dual = c.dual();
    let brute = brute_force_dual(&c);
    assert_eq!(BigUint::from(brute.len()), *dual.cardinality());
    for v in &brute {
        assert!(dual.contains(v));
    }
}

#[test]
fn field_level_lcd_iff_self_reciprocal_brute_force() {
    // over F2 (n in {7, 9, 15}) and F3 (n = 7, alpha in {1, 2}):
    // LCD <=> self-reciprocal generator <=> reversible, with the hull
    // computed by brute force over the codewords
    let mut checked = 0usize;
    let f2 = Ring::finite_field(2, 1).unwrap();
    let f3 = Ring::finite_field(3, 1).unwrap();
    let mut cases: Vec<(Ring, usize, RingElement)> = vec![
        (f2.clone(), 7, f2.one()),
        (f2.clone(), 9, f2.one()),
        (f2.clone(), 15, f2.one()),
        (f3.clone(), 7, f3.one()),
        (f3.clone(), 7, f3.from_integer(2)),
    ];
    for (field, n, alpha) in cases.drain(..) {
        let fs = Arc::new(FactorSet::build(&field, n, &alpha).unwrap());
        for mask in 1..fs.full_mask() {
            let gen = fs.divisor(mask);
            let c = ConstacyclicCode::with_factor_set(fs.clone(), gen.clone()).unwrap();
            let self_rec = lcdring::poly::is_self_reciprocal(&gen).unwrap();
            // brute-force hull: codewords orthogonal to all generators
            let words = c.linear_code().codewords();
            let hull_trivial = words
                .iter()
                .filter(|w| w.iter().any(|e| !e.is_zero()))
                .all(|w| {
                    !c.linear_code()
                        .minimal_generators()
                        .rows_iter()
                        .all(|row| inner_product(w, row).is_zero())
                });
            assert_eq!(hull_trivial, self_rec, "{field}, n = {n}, mask {mask:#b}");
            assert_eq!(c.is_lcd().unwrap(), self_rec);
            assert_eq!(c.is_reversible().unwrap(), self_rec);
            checked += 1;
        }
    }
    assert!(checked >= 40, "checked {checked} field-level divisors");
}

#[test]
fn residue_lcd_equivalence() {
    let z4 = z(4);
    let fs = Arc::new(FactorSet::build(&z4, 15, &z4.one()).unwrap());
    for mask in 1..fs.full_mask() {
        let c = ConstacyclicCode::with_factor_set(fs.clone(), fs.divisor(mask)).unwrap();
        let res = c.residue_code().unwrap();
        assert_eq!(c.is_lcd().unwrap(), res.is_lcd().unwrap(), "mask {mask:#b}");
        assert_eq!(
            res.generator(),
            &c.generator().residue().unwrap(),
            "mask {mask:#b}"
        );
    }
}

#[test]
fn full_row_rank_rows_are_linearly_independent() {
    // brute force over all coefficient vectors for |R|^rows <= 2^20
    let mut rng = DetRng::new(0xf00);
    for ring in [z(4), z(8), Ring::galois(4, 2).unwrap()] {
        for _ in 0..20 {
            let n = 3 + rng.below(2) as usize;
            let rows = 2usize;
            let gens =
                RingMatrix::from_fn(&ring, rows, n, |_, _| random_element(&ring, &mut rng));
            if gens.right_inverse().is_none() {
                continue; // not full-row-rank
            }
            let els: Vec<RingElement> = ring.elements().collect();
            for a in &els {
                for b in &els {
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    let combo: Vec<RingElement> = (0..n)
                        .map(|c| &(a * gens.get(0, c)) + &(b * gens.get(1, c)))
                        .collect();
                    assert!(
                        combo.iter().any(|e| !e.is_zero()),
                        "nonzero coefficients annihilated full-row-rank rows"
                    );
                }
            }
        }
    }
}

#[test]
fn reversed_codes_have_identical_distance() {
    let z4 = z(4);
    let fs = Arc::new(FactorSet::build(&z4, 7, &z4.one()).unwrap());
    for mask in 1..fs.full_mask() {
        let c = ConstacyclicCode::with_factor_set(fs.clone(), fs.divisor(mask)).unwrap();
        let rev = c.reverse().unwrap();
        let d1 = min_distance(c.linear_code(), WeightKind::Lee, &DistanceOptions::default())
            .unwrap();
        let d2 = min_distance(rev.linear_code(), WeightKind::Lee, &DistanceOptions::default())
            .unwrap();
        assert_eq!(d1.status, d2.status, "mask {mask:#b}");
    }
}

#[test]
fn distance_witnesses_reverify() {
    let mut rng = DetRng::new(0x8badf00d);
    for ring in [z(4), z(8), z(15)] {
        for _ in 0..25 {
            let n = 3 + rng.below(4) as usize;
            let rows = 1 + rng.below(3) as usize;
            let gens =
                RingMatrix::from_fn(&ring, rows, n, |_, _| random_element(&ring, &mut rng));
            let c = LinearCode::from_generators(&ring, n, gens).unwrap();
            if c.is_zero() {
                continue;
            }
            let report =
                min_distance(&c, WeightKind::Lee, &DistanceOptions::default()).unwrap();
            let DistanceStatus::Exact(d) = report.status else {
                panic!("small codes enumerate exactly")
            };
            let w = report.witness.expect("exact results carry a witness");
            assert!(c.contains(&w));
            assert_eq!(
                lcdring::distance::weight(WeightKind::Lee, &w).unwrap(),
                d
            );
        }
    }
}

#[test]
fn standard_form_spans_the_same_row_module() {
    let mut rng = DetRng::new(0x57d);
    for ring in [z(4), z(8), z(15), Ring::local_algebra(2).unwrap(), Ring::galois(4, 2).unwrap()]
    {
        for _ in 0..40 {
            let n = 2 + rng.below(4) as usize;
            let rows = 1 + rng.below(3) as usize;
            let gens =
                RingMatrix::from_fn(&ring, rows, n, |_, _| random_element(&ring, &mut rng));
            let c = LinearCode::from_generators(&ring, n, gens.clone()).unwrap();
            let reduced = c.minimal_generators().clone();
            let c2 = LinearCode::from_generators(&ring, n, reduced).unwrap();
            assert!(c.equals(&c2), "{ring}");
            // mutual membership row by row
            for row in gens.rows_iter() {
                assert!(c2.contains(row));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// proptest invariants
// ---------------------------------------------------------------------------

fn arb_z4_poly_with_unit_constant() -> impl Strategy<Value = RingPoly> {
    (proptest::collection::vec(0u64..4, 0..6), 0u64..2).prop_map(|(mid, lead_extra)| {
        let z4 = z(4);
        let mut coeffs = vec![1 + 2 * lead_extra]; // unit constant: 1 or 3
        coeffs.extend(mid);
        coeffs.push(1); // monic
        RingPoly::from_coeffs(
            &z4,
            coeffs.iter().map(|&c| z4.from_integer(c as i64)).collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reciprocal_is_an_involution(f in arb_z4_poly_with_unit_constant()) {
        let rec = lcdring::poly::reciprocal(&f).unwrap();
        let back = lcdring::poly::reciprocal(&rec).unwrap();
        // involution up to monic normalisation; monic inputs return exactly
        prop_assert_eq!(back, f.monic().unwrap());
    }

    #[test]
    fn poly_division_reconstructs(a in proptest::collection::vec(0u64..4, 1..9),
                                  b in proptest::collection::vec(0u64..4, 1..5)) {
        let z4 = z(4);
        let f = RingPoly::from_coeffs(&z4, a.iter().map(|&c| z4.from_integer(c as i64)).collect());
        let mut bc: Vec<RingElement> = b.iter().map(|&c| z4.from_integer(c as i64)).collect();
        bc.push(z4.one()); // monic divisor
        let g = RingPoly::from_coeffs(&z4, bc);
        let (q, r) = f.div_rem(&g).unwrap();
        prop_assert_eq!(q.mul(&g).add(&r), f);
        prop_assert!(r.degree().map_or(true, |d| d < g.degree().unwrap()));
    }

    #[test]
    fn cardinality_identity_z4(rows in proptest::collection::vec(
        proptest::collection::vec(0i64..4, 4), 1..4)) {
        let z4 = z(4);
        let m = RingMatrix::from_rows(
            &z4,
            rows.iter()
                .map(|r| r.iter().map(|&v| z4.from_integer(v)).collect())
                .collect(),
        );
        let c = LinearCode::from_generators(&z4, 4, m).unwrap();
        let dual = c.dual();
        prop_assert_eq!(
            c.cardinality() * dual.cardinality(),
            BigUint::from(4u32).pow(4)
        );
        // double dual
        prop_assert!(c.equals(&dual.dual()));
    }

    #[test]
    fn lee_weight_symmetry_and_triangle(v in proptest::collection::vec(0u64..8, 1..6),
                                        w in proptest::collection::vec(0u64..8, 1..6)) {
        let z8 = z(8);
        let n = v.len().min(w.len());
        let a: Vec<RingElement> = v[..n].iter().map(|&x| z8.from_integer(x as i64)).collect();
        let b: Vec<RingElement> = w[..n].iter().map(|&x| z8.from_integer(x as i64)).collect();
        let wa = lcdring::distance::weight(WeightKind::Lee, &a).unwrap();
        let neg: Vec<RingElement> = a.iter().map(|e| -e).collect();
        prop_assert_eq!(wa, lcdring::distance::weight(WeightKind::Lee, &neg).unwrap());
        let sum: Vec<RingElement> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let wb = lcdring::distance::weight(WeightKind::Lee, &b).unwrap();
        let ws = lcdring::distance::weight(WeightKind::Lee, &sum).unwrap();
        prop_assert!(ws <= wa + wb);
    }
}

#[test]
fn consta_table_poly_route_vs_matrix_route_z4_n7() {
    // the enumeration's polynomial-level decisions agree with hull
    // witnesses on every divisor of X^7 - 1 (dual-route check)
    let z4 = z(4);
    let fs = Arc::new(FactorSet::build(&z4, 7, &z4.one()).unwrap());
    for mask in 0..=fs.full_mask() {
        let c = ConstacyclicCode::with_factor_set(fs.clone(), fs.divisor(mask)).unwrap();
        let poly_route = c.is_lcd().unwrap();
        let witness_route = c.linear_code().hull_witness().is_none();
        assert_eq!(poly_route, witness_route, "mask {mask:#b}");
    }
}

#[test]
fn dual_generator_of_p_z4_7_xm1_is_degree_6() {
    // derived from the brute-force dual: generator degree 6, |dual| = 4
    let z4 = z(4);
    let c = ConstacyclicCode::new(&z4, 7, &z4.one(), poly(&z4, "X-1")).unwrap();
    let dg = c.dual_generator().unwrap();
    assert_eq!(dg.degree(), Some(6));
    let dual = c.linear_code().dual();
    assert_eq!(dual.cardinality(), &BigUint::from(4u32));
    // the polynomial route produces the same set
    let via_poly = c.dual().unwrap();
    assert!(dual.equals(via_poly.linear_code()));
}

#[test]
fn reciprocal_pairing_is_an_involution() {
    for (k, n) in [(4u64, 7usize), (4, 15), (8, 15), (4, 63)] {
        let ring = z(k);
        let fs = FactorSet::build(&ring, n, &ring.one()).unwrap();
        let pairing = fs.pairing().expect("gamma = 1 has a pairing");
        for (i, &j) in pairing.iter().enumerate() {
            assert_eq!(pairing[j], i, "Z{k}, n = {n}");
            let rec = lcdring::poly::reciprocal(&fs.factors()[i]).unwrap();
            assert_eq!(rec, fs.factors()[j], "Z{k}, n = {n}");
        }
    }
}

#[test]
fn lee_distance_equals_gray_image_distance_on_length_7_cyclic_codes() {
    let z4 = z(4);
    let fs = Arc::new(FactorSet::build(&z4, 7, &z4.one()).unwrap());
    for mask in 1..=fs.full_mask() {
        let c = ConstacyclicCode::with_factor_set(fs.clone(), fs.divisor(mask)).unwrap();
        if c.linear_code().is_zero() {
            continue;
        }
        let report = min_distance(c.linear_code(), WeightKind::Lee, &DistanceOptions::default())
            .unwrap();
        let DistanceStatus::Exact(lee) = report.status else {
            panic!()
        };
        let image = lcdring::distance::gray_image(c.linear_code()).unwrap();
        assert_eq!(
            lcdring::distance::min_pairwise_hamming(&image),
            Some(lee),
            "mask {mask:#b}"
        );
    }
}
