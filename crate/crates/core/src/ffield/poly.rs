//! Dense polynomials over the prime field, used only to pick and validate
//! field moduli. Coefficients are stored low degree first and kept reduced
//! mod p; the zero polynomial is the empty vector.

pub(crate) type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    pow_mod(x, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut b = (base % p) as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo `m` (m nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] as u64 * lead_inv % p64;
        if c != 0 {
            for (t, &mt) in m.iter().enumerate() {
                let idx = k - dm + t;
                r[idx] = ((r[idx] as u64 + p64 - c * mt as u64 % p64) % p64) as u32;
            }
        }
        r = trim(r);
    }
    r
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

/// `x^(p^k) mod m`, by k successive p-th powerings.
fn x_pow_p_pow(k: u32, m: &[u32], p: u32) -> Poly {
    let mut acc = rem(&[0, 1], m, p);
    for _ in 0..k {
        acc = pow_poly_mod(&acc, p as u64, m, p);
    }
    acc
}

fn pow_poly_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn distinct_prime_factors(n: u64) -> Vec<u64> {
    prime_factors(n)
}

/// Rabin's test: a monic `f` of degree n is irreducible over F_p iff
/// `x^(p^n) = x mod f` and `gcd(x^(p^(n/q)) - x, f) = 1` for every prime q | n.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    if sub(&x_pow_p_pow(n, &f, p), &rem(&x, &f, p), p) != Vec::<u32>::new() {
        return false;
    }
    for q in prime_factors(n as u64) {
        let h = sub(&x_pow_p_pow(n / q as u32, &f, p), &x, p);
        if gcd(&h, &f, p).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rem_and_gcd_small_cases() {
        // (x^2 + 1) = (x + 2)(x + 3) over F_5
        assert_eq!(mul(&[2, 1], &[3, 1], 5), vec![1, 0, 1]);
        assert!(rem(&[1, 0, 1], &[2, 1], 5).is_empty());
        assert_eq!(gcd(&[1, 0, 1], &[3, 1], 5), vec![3, 1]);
    }

    #[test]
    fn rabin_matches_known_quadratics_over_f5() {
        assert!(!is_irreducible(&[0, 0, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 1], 5));
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(24), vec![2, 3]);
        assert_eq!(prime_factors(624), vec![2, 3, 13]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }
}
