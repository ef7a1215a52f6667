//! Shared helpers for the integration suites.
#![allow(dead_code)]

use lcdring::poly::RingPoly;
use lcdring::ring::{Ring, RingElement};
use lcdring::serial;

/// Deterministic generator for randomized batteries.
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

pub fn z(k: u64) -> Ring {
    Ring::zk(k).unwrap()
}

pub fn poly(ring: &Ring, text: &str) -> RingPoly {
    serial::poly_from_text(ring, text).unwrap()
}

pub fn product(polys: &[RingPoly]) -> RingPoly {
    let ring = polys[0].ring().clone();
    polys
        .iter()
        .fold(RingPoly::one(&ring), |acc, f| acc.mul(f))
}

pub fn random_element(ring: &Ring, rng: &mut DetRng) -> RingElement {
    let coords: Vec<u64> = ring
        .coord_mods()
        .iter()
        .map(|&m| rng.below(m))
        .collect();
    ring.element_from_coords(coords).unwrap()
}
