//! Combinatorics of factorization patterns: words over the prime
//! factors of `|G|`, palindromes, reversal classes and ordered
//! factorizations.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("n must be at least 2, got {0}")]
    TooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("discarding by prime index {0} needs a multifold-factorizable subgroup of that index")]
    Unlicensed(u64),
    #[error("k = {k} is outside 1..={omega}")]
    BadLength { k: usize, omega: usize },
}

/// Prime signature of `n` by trial division: `(p, multiplicity)` ascending.
pub fn prime_signature(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_signature(n) == [(n, 1)]
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn omega(n: u64) -> usize {
    prime_signature(n).iter().map(|&(_, k)| k as usize).sum()
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn check(n: u64) -> Result<(), PatternError> {
    if n < 2 {
        Err(PatternError::TooSmall(n))
    } else {
        Ok(())
    }
}

/// Number of distinct words using each prime of `n` as often as it divides
/// `n`: the multinomial `Ω(n)! / ∏ kᵢ!`.
pub fn word_count(n: u64) -> Result<u128, PatternError> {
    check(n)?;
    let sig = prime_signature(n);
    let len: u32 = sig.iter().map(|&(_, k)| k).sum();
    Ok(factorial(len) / sig.iter().map(|&(_, k)| factorial(k)).product::<u128>())
}

/// Number of those words that read the same backwards.
pub fn palindrome_count(n: u64) -> Result<u128, PatternError> {
    check(n)?;
    let sig = prime_signature(n);
    let odd = sig.iter().filter(|&&(_, k)| k % 2 == 1).count();
    if odd > 1 {
        return Ok(0);
    }
    // With one odd multiplicity its extra letter sits in the middle.
    let half: u32 = sig.iter().map(|&(_, k)| k / 2).sum();
    Ok(factorial(half) / sig.iter().map(|&(_, k)| factorial(k / 2)).product::<u128>())
}

/// Number of classes `{w, reverse(w)}`.
pub fn reversal_class_count(n: u64) -> Result<u128, PatternError> {
    Ok((word_count(n)? + palindrome_count(n)?) / 2)
}

/// A word of primes whose product is `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeWord(pub Vec<u64>);

impl PrimeWord {
    pub fn letters(&self) -> &[u64] {
        &self.0
    }

    pub fn product(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn reversed(&self) -> PrimeWord {
        PrimeWord(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        *self == self.reversed()
    }

    /// The lexicographically smaller of the word and its reverse.
    pub fn class_representative(&self) -> PrimeWord {
        let r = self.reversed();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    pub fn as_sizes(&self) -> Vec<usize> {
        self.0.iter().map(|&p| p as usize).collect()
    }
}

impl std::fmt::Display for PrimeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn next_permutation(v: &mut [u64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct prime words of `n`, in lexicographic order.
pub fn enumerate_words(n: u64) -> Result<Vec<PrimeWord>, PatternError> {
    check(n)?;
    let mut letters: Vec<u64> = prime_signature(n)
        .into_iter()
        .flat_map(|(p, k)| std::iter::repeat_n(p, k as usize))
        .collect();
    let mut out = vec![PrimeWord(letters.clone())];
    while next_permutation(&mut letters) {
        out.push(PrimeWord(letters.clone()));
    }
    Ok(out)
}

/// One representative (the lexicographic minimum) per reversal class.
pub fn enumerate_reversal_classes(n: u64) -> Result<Vec<PrimeWord>, PatternError> {
    Ok(enumerate_words(n)?
        .into_iter()
        .filter(|w| *w <= w.reversed())
        .collect())
}

/// `Ω(n)`: establishing every prime word of this length establishes every
/// pattern, because adjacent factors of a certificate can be merged.
pub fn omega_reduction(n: u64) -> Result<usize, PatternError> {
    check(n)?;
    Ok(omega(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discarded {
    pub word: PrimeWord,
    pub reason: String,
}

/// Which reversal classes of `n` still need a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternPlan {
    pub n: u64,
    pub omega: usize,
    pub classes: Vec<PrimeWord>,
    pub discarded: Vec<Discarded>,
}

impl PatternPlan {
    pub fn new(n: u64) -> Result<Self, PatternError> {
        Ok(PatternPlan {
            n,
            omega: omega_reduction(n)?,
            classes: enumerate_reversal_classes(n)?,
            discarded: Vec::new(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// Drops every class whose words start or end with `p`: those follow by a
/// transversal lift from a multifold-factorizable subgroup of index `p`.
/// The caller vouches for that subgroup through `licensed`.
pub fn prime_index_discard(plan: &PatternPlan, p: u64, licensed: bool) -> Result<PatternPlan, PatternError> {
    if !is_prime(p) {
        return Err(PatternError::NotPrime(p));
    }
    if !licensed {
        return Err(PatternError::Unlicensed(p));
    }
    let mut out = plan.clone();
    out.classes.clear();
    for w in &plan.classes {
        let l = w.letters();
        if l.first() == Some(&p) || l.last() == Some(&p) {
            out.discarded.push(Discarded {
                word: w.clone(),
                reason: format!("prime-index lift (index {p})"),
            });
        } else {
            out.classes.push(w.clone());
        }
    }
    Ok(out)
}

/// All ordered `k`-tuples of integers greater than 1 with product `n`,
/// in lexicographic order.
pub fn enumerate_ordered_factorizations(n: u64, k: usize) -> Result<Vec<Vec<u64>>, PatternError> {
    check(n)?;
    let om = omega(n);
    if k == 0 || k > om {
        return Err(PatternError::BadLength { k, omega: om });
    }
    fn rec(n: u64, k: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in 2..=n {
            if n.is_multiple_of(d) && omega(n / d) >= k - 1 {
                prefix.push(d);
                rec(n / d, k - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Independent oracle: every arrangement of the letters, deduplicated.
    fn brute_words(n: u64) -> BTreeSet<Vec<u64>> {
        let letters: Vec<u64> = prime_signature(n)
            .into_iter()
            .flat_map(|(p, k)| std::iter::repeat_n(p, k as usize))
            .collect();
        fn perms(rest: &mut Vec<u64>, cur: &mut Vec<u64>, out: &mut BTreeSet<Vec<u64>>) {
            if rest.is_empty() {
                out.insert(cur.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                perms(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut out = BTreeSet::new();
        perms(&mut letters.clone(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn word_counts() {
        assert_eq!(word_count(168).unwrap(), 20);
        assert_eq!(word_count(360).unwrap(), 60);
        assert_eq!(word_count(7).unwrap(), 1);
        assert_eq!(brute_words(168).len(), 20);
        assert_eq!(brute_words(360).len(), 60);
    }

    #[test]
    fn palindrome_counts() {
        assert_eq!(palindrome_count(360).unwrap(), 0);
        assert_eq!(palindrome_count(36).unwrap(), 2);
        assert_eq!(palindrome_count(8).unwrap(), 1);
        let pals = brute_words(36).into_iter().filter(|w| w.iter().eq(w.iter().rev())).count();
        assert_eq!(pals, 2);
    }

    #[test]
    fn class_counts() {
        assert_eq!(reversal_class_count(168).unwrap(), 10);
        assert_eq!(reversal_class_count(360).unwrap(), 30);
        assert_eq!(reversal_class_count(4).unwrap(), 1);
    }

    #[test]
    fn classes_enumerate() {
        assert_eq!(enumerate_reversal_classes(168).unwrap().len(), 10);
        assert_eq!(
            enumerate_reversal_classes(60).unwrap().len() as u128,
            reversal_class_count(60).unwrap()
        );
        assert_eq!(enumerate_reversal_classes(8).unwrap(), vec![PrimeWord(vec![2, 2, 2])]);
    }

    #[test]
    fn omegas() {
        assert_eq!(omega_reduction(168).unwrap(), 5);
        assert_eq!(omega_reduction(360).unwrap(), 6);
        assert_eq!(omega_reduction(13).unwrap(), 1);
        assert!(omega_reduction(1).is_err());
    }

    #[test]
    fn discard_for_168() {
        let plan = prime_index_discard(&PatternPlan::new(168).unwrap(), 7, true).unwrap();
        assert_eq!(plan.classes.len(), 6);
        assert_eq!(plan.discarded.len(), 4);
        let expected: BTreeSet<PrimeWord> = [
            vec![2, 2, 2, 7, 3],
            vec![2, 2, 3, 7, 2],
            vec![2, 3, 2, 7, 2],
            vec![3, 2, 2, 7, 2],
            vec![2, 3, 7, 2, 2],
            vec![3, 2, 7, 2, 2],
        ]
        .into_iter()
        .map(|w| PrimeWord(w).class_representative())
        .collect();
        let got: BTreeSet<PrimeWord> = plan.classes.iter().map(PrimeWord::class_representative).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn discard_edge_cases() {
        let plan = PatternPlan::new(360).unwrap();
        assert_eq!(prime_index_discard(&plan, 7, true).unwrap(), plan);
        assert_eq!(prime_index_discard(&plan, 5, false).unwrap_err(), PatternError::Unlicensed(5));
        assert_eq!(prime_index_discard(&plan, 6, true).unwrap_err(), PatternError::NotPrime(6));
    }

    #[test]
    fn ordered_factorizations() {
        assert_eq!(
            enumerate_ordered_factorizations(12, 2).unwrap(),
            vec![vec![2, 6], vec![3, 4], vec![4, 3], vec![6, 2]]
        );
        assert_eq!(enumerate_ordered_factorizations(8, 3).unwrap(), vec![vec![2, 2, 2]]);
        assert!(enumerate_ordered_factorizations(60, 3).unwrap().contains(&vec![2, 15, 2]));
        assert!(enumerate_ordered_factorizations(8, 4).is_err());
    }

    #[test]
    fn plan_json_shape() {
        let plan = prime_index_discard(&PatternPlan::new(168).unwrap(), 7, true).unwrap();
        let v: serde_json::Value = serde_json::from_str(&plan.to_json()).unwrap();
        assert_eq!(v["n"], 168);
        assert_eq!(v["omega"], 5);
        assert_eq!(v["classes"].as_array().unwrap().len(), 6);
        assert_eq!(v["discarded"][0]["word"], serde_json::json!([2, 2, 2, 3, 7]));
        assert!(v["discarded"][0]["reason"].is_string());
    }
}
