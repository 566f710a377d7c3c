//! Small integer helpers shared by the field builder and the bound calculus.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Returns `(p, e)` with `n = p^e`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = prime_factors(n);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut m = n;
    while m > 1 {
        m /= p;
        e += 1;
    }
    Some((p, e))
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let s = isqrt(n);
    (s * s == n).then_some(s)
}

pub fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// `ceil(log2(k) + 1)` for `k >= 1`, computed exactly.
pub fn ceil_log2_plus_one(k: u64) -> u64 {
    assert!(k >= 1);
    // ceil(log2 k) + 1, since adding an integer commutes with ceil.
    let floor = 63 - k.leading_zeros() as u64;
    let ceil = if k.is_power_of_two() { floor } else { floor + 1 };
    ceil + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(2) && is_prime(29) && !is_prime(1) && !is_prime(9));
        assert_eq!(prime_factors(840), vec![2, 3, 5, 7]);
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(exact_sqrt(25), Some(5));
        assert_eq!(exact_sqrt(26), None);
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(ceil_log2_plus_one(1), 1);
        assert_eq!(ceil_log2_plus_one(2), 2);
        assert_eq!(ceil_log2_plus_one(3), 3);
        assert_eq!(ceil_log2_plus_one(4), 3);
        assert_eq!(ceil_log2_plus_one(25), 6);
    }
}
