//! Prime-power recognition.

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n);
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

pub fn is_prime_power(n: i64) -> bool {
    n > 0 && prime_power(n as u64).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let pp: Vec<u64> = (0..30).filter(|&n| prime_power(n).is_some()).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
        assert_eq!(prime_power(81), Some((3, 4)));
        assert!(!is_prime_power(6));
        assert!(!is_prime_power(-4));
    }
}
