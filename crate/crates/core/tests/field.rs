//! Finite fields against a naive polynomial oracle written here from scratch.

use diamond_lab::ffield::{Embedding, FElem, Field};
use proptest::prelude::*;

/// Coefficients low degree first, trimmed.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic `m`.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (k, &c) in m.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p * p - lead * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn monic_of_degree(p: u32, d: usize, k: u32) -> Vec<u32> {
    let mut c: Vec<u32> = (0..d).map(|i| (k / p.pow(i as u32)) % p).collect();
    c.push(1);
    c
}

fn irreducible_by_trial_division(p: u32, m: &[u32]) -> bool {
    let n = m.len() - 1;
    (1..=n / 2).all(|d| (0..p.pow(d as u32)).all(|k| !poly_rem(p, m, &monic_of_degree(p, d, k)).is_empty()))
}

fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    (0..p.pow(n as u32))
        .map(|k| monic_of_degree(p, n, k))
        .find(|m| irreducible_by_trial_division(p, m))
        .unwrap()
}

fn oracle_mul(f: &Field, a: FElem, b: FElem) -> Vec<u32> {
    let prod = poly_mul(f.p(), &trim(f.coords(a)), &trim(f.coords(b)));
    let mut r = poly_rem(f.p(), &prod, f.modulus());
    r.resize(f.degree(), 0);
    r
}

#[test]
fn moduli_match_trial_division() {
    for (p, n) in [(5, 1), (5, 2), (5, 4), (7, 2), (7, 4), (11, 2)] {
        let f = Field::new(p, n).unwrap();
        assert_eq!(f.modulus(), smallest_irreducible(p, n).as_slice(), "F_{p}^{n}");
    }
    assert_eq!(Field::new(5, 4).unwrap().modulus(), &[2, 0, 0, 0, 1]);
}

#[test]
fn f25_multiplication_exhaustive() {
    let f = Field::new(5, 2).unwrap();
    for a in f.elements() {
        for b in f.elements() {
            assert_eq!(f.coords(f.mul(a, b)), oracle_mul(&f, a, b));
            assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
        }
    }
}

#[test]
fn f25_inverse_and_frobenius_exhaustive() {
    let f = Field::new(5, 2).unwrap();
    assert!(f.inv(f.zero()).is_err());
    for a in f.elements().filter(|a| !a.is_zero()) {
        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
    }
    for a in f.elements() {
        let mut power = vec![1u32, 0];
        for _ in 0..5 {
            power = oracle_mul(&f, f.from_coords(&power).unwrap(), a);
        }
        assert_eq!(f.coords(f.frobenius(a)), power);
        assert_eq!(f.frobenius_pow(a, 2), a);
        for b in f.elements() {
            assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        }
    }
}

#[test]
fn generator_has_full_order() {
    for (p, n) in [(5, 1), (5, 2), (5, 4), (7, 2)] {
        let f = Field::new(p, n).unwrap();
        let q = f.order() as u64 - 1;
        let g = f.mult_generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = f.one();
        for _ in 0..q {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(seen.len() as u64, q);
        assert_eq!(x, f.one());
    }
}

#[test]
fn embedding_is_a_homomorphism_on_all_pairs() {
    let small = Field::new(5, 2).unwrap();
    let big = Field::new(5, 4).unwrap();
    let e = Embedding::new(&small, &big).unwrap();
    let root = e.root();
    let m = small.modulus();
    let value = m.iter().rev().fold(big.zero(), |acc, &c| big.add(big.mul(acc, root), big.from_int(c as i64)));
    assert!(value.is_zero());
    let mut pairs = 0;
    for a in small.elements() {
        for b in small.elements() {
            let (ea, eb) = (e.apply(&big, a), e.apply(&big, b));
            assert_eq!(e.apply(&big, small.add(a, b)), big.add(ea, eb));
            assert_eq!(e.apply(&big, small.mul(a, b)), big.mul(ea, eb));
            pairs += 1;
        }
        let ea = e.apply(&big, a);
        assert_eq!(e.apply(&big, small.frobenius(a)), big.frobenius(ea));
        assert_eq!(big.frobenius_pow(ea, 2), ea);
    }
    assert_eq!(pairs, 625);
}

proptest! {
    #[test]
    fn f625_table_mul_matches_oracle(a in 0u32..625, b in 0u32..625) {
        let f = Field::new(5, 4).unwrap();
        let (a, b) = (f.from_packed(a).unwrap(), f.from_packed(b).unwrap());
        prop_assert_eq!(f.coords(f.mul(a, b)), oracle_mul(&f, a, b));
        prop_assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
    }

    #[test]
    fn f2401_ring_axioms(a in 0u32..2401, b in 0u32..2401, c in 0u32..2401) {
        let f = Field::new(7, 4).unwrap();
        let [a, b, c] = [a, b, c].map(|x| f.from_packed(x).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }
}
