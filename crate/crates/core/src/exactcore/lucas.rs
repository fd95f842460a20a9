//! Binomial coefficients modulo a prime via base-p digits.

/// `C(n, k) mod p` as the product of `C(n_i, k_i)` over base-`p` digits.
pub fn lucas_binomial(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p64, k % p64);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binomial(ni, ki, p64) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

/// `C(n, k) mod p` for `0 <= k <= n < p`.
fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Base-`p` digits, least significant first.
pub fn base_digits(mut n: u64, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(lucas_binomial(3, 1, 3), 0);
        assert_eq!(lucas_binomial(3, 3, 3), 1);
        assert_eq!(lucas_binomial(7, 2, 3), 0);
        assert_eq!(lucas_binomial(0, 0, 5), 1);
        assert_eq!(lucas_binomial(2, 5, 5), 0);
    }

    #[test]
    fn agrees_with_pascal_triangle() {
        for p in [2u32, 3, 5, 7] {
            let mut row = vec![1u64];
            for n in 0..=200u64 {
                for (k, &c) in row.iter().enumerate() {
                    assert_eq!(lucas_binomial(n, k as u64, p) as u64, c, "C({n},{k}) mod {p}");
                }
                let mut next = vec![1u64; row.len() + 1];
                for k in 1..row.len() {
                    next[k] = (row[k - 1] + row[k]) % p as u64;
                }
                row = next;
            }
        }
    }
}
