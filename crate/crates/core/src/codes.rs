//! Integrals of the 3D map for odd n written as sums over admissible codes.
//!
//! A code is a word in the digits 1..4 whose digits sum to n; it expands
//! into a word of n characters via `1 -> a`, `2 -> *b`, `3 -> **c`,
//! `4 -> ****`. Placing the characters on the vertices and multiplying the
//! variables found there gives a monomial with sign `(-1)^{#4}`; summing
//! over distinct cyclic relabellings and over all codes of a given weight
//! (number of digits 1 and 3) gives `I^_w`.

use std::collections::BTreeSet;
use std::fmt;

use crate::coords::Abc3;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodeMonomial {
    pub negative: bool,
    /// Sorted `(letter, vertex)` factors.
    pub factors: Vec<(Letter, usize)>,
}

impl fmt::Display for CodeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { "-" } else { "+" })?;
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(l, i)| {
                let c = match l {
                    Letter::A => 'a',
                    Letter::B => 'b',
                    Letter::C => 'c',
                };
                format!("{c}_{i}")
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn is_min_rotation(code: &[u8]) -> bool {
    (1..code.len()).all(|r| {
        let rot: Vec<u8> = code[r..].iter().chain(&code[..r]).copied().collect();
        code <= rot.as_slice()
    })
}

fn compositions(rest: usize, odd_left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if rest == 0 {
        if odd_left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for digit in 1..=4u8 {
        let odd = digit % 2 == 1;
        if digit as usize > rest || (odd && odd_left == 0) {
            continue;
        }
        cur.push(digit);
        compositions(rest - digit as usize, odd_left - odd as usize, cur, out);
        cur.pop();
    }
}

/// Admissible codes of the given weight for n-gons, one per class of
/// cyclic rotations (the lexicographically smallest rotation).
pub fn admissible_codes(n: usize, weight: usize) -> Vec<Vec<u8>> {
    let mut all = Vec::new();
    compositions(n, weight, &mut Vec::new(), &mut all);
    all.retain(|c| is_min_rotation(c));
    all
}

pub fn code_string(code: &[u8]) -> String {
    code.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Monomial of a code with its word starting at vertex `start`.
fn monomial(code: &[u8], n: usize, start: usize) -> CodeMonomial {
    let mut pos = start;
    let mut factors = Vec::new();
    let mut negative = false;
    for &digit in code {
        match digit {
            1 => factors.push((Letter::A, pos % n)),
            2 => factors.push((Letter::B, (pos + 1) % n)),
            3 => factors.push((Letter::C, (pos + 2) % n)),
            _ => negative = !negative,
        }
        pos += digit as usize;
    }
    factors.sort();
    CodeMonomial { negative, factors }
}

/// Distinct monomials of `I^_weight`.
pub fn code_monomials(n: usize, weight: usize) -> Vec<CodeMonomial> {
    let mut out = Vec::new();
    for code in admissible_codes(n, weight) {
        let orbit: BTreeSet<CodeMonomial> = (0..n).map(|s| monomial(&code, n, s)).collect();
        out.extend(orbit);
    }
    out
}

fn eval_monomial<S: Scalar>(m: &CodeMonomial, abc: &Abc3<S>, dual: bool) -> S {
    let n = abc.n();
    let v = m.factors.iter().fold(S::one(), |acc, &(l, i)| {
        let f = match (l, dual) {
            (Letter::A, false) => abc.a[i].clone(),
            (Letter::B, _) => abc.b[i].clone(),
            (Letter::C, false) => abc.c[i].clone(),
            (Letter::A, true) => abc.c[(i + 1) % n].clone(),
            (Letter::C, true) => abc.a[(i + n - 1) % n].clone(),
        };
        acc * f
    });
    if m.negative {
        -v
    } else {
        v
    }
}

/// `(I^_weight, G^_weight)`, where `G^` substitutes `a_i -> c_{i+1}`,
/// `c_i -> a_{i-1}` in `I^`. Odd n only.
pub fn code_integrals<S: Scalar>(abc: &Abc3<S>, weight: usize) -> Result<(S, S)> {
    let n = abc.n();
    if n.is_multiple_of(2) {
        return Err(Error::InvalidInput("code integrals need odd n".into()));
    }
    let monos = code_monomials(n, weight);
    let sum = |dual: bool| monos.iter().fold(S::zero(), |acc, m| acc + eval_monomial(m, abc, dual));
    Ok((sum(false), sum(true)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_coeffs, seeded};
    use crate::scalar::Rational;

    #[test]
    fn weight_one_codes_for_heptagons() {
        let codes: BTreeSet<String> = admissible_codes(7, 1).iter().map(|c| code_string(c)).collect();
        let expect: BTreeSet<String> = ["142", "124", "1222", "34", "223"].iter().map(|s| s.to_string()).collect();
        assert_eq!(codes, expect);
    }

    #[test]
    fn product_codes() {
        let monos = code_monomials(9, 9);
        assert_eq!(monos.len(), 1);
        assert_eq!(monos[0].factors.len(), 9);
        // "333" appears once per distinct placement, not three times.
        let c = code_monomials(9, 3);
        let triple: Vec<_> = c.iter().filter(|m| m.factors.iter().all(|f| f.0 == Letter::C)).collect();
        assert_eq!(triple.len(), 3);
    }

    #[test]
    fn weight_one_sum_matches_displayed_formula() {
        let mut rng = seeded(9);
        let abc = Abc3::from_coeffs(&random_coeffs::<Rational>(3, 7, &mut rng)).unwrap();
        let (a, b, c) = (&abc.a, &abc.b, &abc.c);
        let mut expect = Rational::from_i64(0);
        for s in 0..7 {
            let i = |k: usize| (k + s) % 7;
            expect = expect - a[i(1)].clone() * b[i(0)].clone() - a[i(5)].clone() * b[i(0)].clone()
                + a[i(5)].clone() * b[i(0)].clone() * b[i(2)].clone() * b[i(4)].clone()
                - c[i(0)].clone()
                + c[i(0)].clone() * b[i(2)].clone() * b[i(4)].clone();
        }
        assert_eq!(code_integrals(&abc, 1).unwrap().0, expect);
    }
}
