//! Bijective base-k numerals: digits run over `1..=k`, so every natural
//! number has exactly one representation and zero is the empty word.

use super::CodingError;

/// Digits of `n` in bijective base `k`, most significant first.
pub fn kadic_encode(mut n: u64, k: u32) -> Result<Vec<u32>, CodingError> {
    if k < 2 {
        return Err(CodingError::InvalidRadix(k));
    }
    let k = u64::from(k);
    let mut digits = Vec::new();
    while n > 0 {
        let d = (n - 1) % k + 1;
        digits.push(d as u32);
        n = (n - d) / k;
    }
    digits.reverse();
    Ok(digits)
}

pub fn kadic_decode(digits: &[u32], k: u32) -> Result<u64, CodingError> {
    if k < 2 {
        return Err(CodingError::InvalidRadix(k));
    }
    let mut n: u64 = 0;
    for (pos, &d) in digits.iter().enumerate() {
        if d == 0 || d > k {
            return Err(CodingError::MalformedNumeral { digit: d, pos, radix: k });
        }
        n = n
            .checked_mul(u64::from(k))
            .and_then(|v| v.checked_add(u64::from(d)))
            .ok_or(CodingError::NumeralOverflow)?;
    }
    Ok(n)
}

/// Textual form for radices up to 9 (one character per digit).
pub fn digits_to_string(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| char::from_digit(d, 36).unwrap_or('?'))
        .collect()
}

pub fn parse_digits(text: &str) -> Result<Vec<u32>, CodingError> {
    text.chars()
        .enumerate()
        .map(|(pos, c)| {
            c.to_digit(36).ok_or(CodingError::MalformedNumeral {
                digit: u32::MAX,
                pos,
                radix: 0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(n: u64, k: u32) -> String {
        digits_to_string(&kadic_encode(n, k).unwrap())
    }

    #[test]
    fn small_dyadic_numerals() {
        let words: Vec<String> = (0..=7).map(|n| enc(n, 2)).collect();
        assert_eq!(words, ["", "1", "2", "11", "12", "21", "22", "111"]);
    }

    #[test]
    fn spot_values() {
        assert_eq!(enc(5, 3), "12");
        assert_eq!(kadic_decode(&parse_digits("12").unwrap(), 3).unwrap(), 5);
        assert_eq!(kadic_decode(&[], 2).unwrap(), 0);
        assert_eq!(kadic_decode(&parse_digits("111").unwrap(), 2).unwrap(), 7);
    }

    #[test]
    fn bad_radix_and_digits() {
        assert_eq!(kadic_encode(3, 1), Err(CodingError::InvalidRadix(1)));
        assert!(matches!(
            kadic_decode(&[1, 3], 2),
            Err(CodingError::MalformedNumeral { digit: 3, pos: 1, .. })
        ));
        assert!(kadic_decode(&[0], 2).is_err());
    }

    // length L is the largest with (k^L - 1)/(k - 1) <= n; for k = 2 this
    // is floor(log2(n+1)), and for larger k floor(log(n+1)/log k) is off by
    // at most one from below
    #[test]
    fn length_formula() {
        for k in [2u32, 3, 10] {
            for n in 0..5000u64 {
                let len = kadic_encode(n, k).unwrap().len() as u32;
                let k = u64::from(k);
                let below = |l: u32| (k.pow(l) - 1) / (k - 1);
                assert!(below(len) <= n && n < below(len + 1), "n={n} k={k}");
                let mut naive = 0;
                while k.pow(naive + 1) <= n + 1 {
                    naive += 1;
                }
                if k == 2 {
                    assert_eq!(len, naive);
                } else {
                    assert!(naive <= len && len <= naive + 1);
                }
            }
        }
    }

    #[test]
    fn inverse_and_order_preserving() {
        for k in [2u32, 3, 10] {
            let mut prev: Option<Vec<u32>> = None;
            for n in 0..1u64 << 16 {
                let d = kadic_encode(n, k).unwrap();
                assert_eq!(kadic_decode(&d, k).unwrap(), n);
                if let Some(p) = &prev {
                    // shorter first, then lexicographic
                    assert!((p.len(), p) < (d.len(), &d));
                }
                prev = Some(d);
            }
        }
    }
}
