//! Permutations on `{0, .., degree - 1}` acting on the right.
//!
//! `a * b` applies `a` first and then `b`, so `i^(ab) = (i^a)^b`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint cycle notation such as `(0 1)(2 3)` or `(0,1,2)` on `degree` points.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let bad = || Error::InvalidPermutation(format!("cannot parse cycles {text:?}"));
        let mut rest = text.trim();
        let mut seen = vec![false; degree];
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            for (k, &p) in points.iter().enumerate() {
                let p_us = p as usize;
                if p_us >= degree || seen[p_us] {
                    return Err(bad());
                }
                seen[p_us] = true;
                images[p_us] = points[(k + 1) % points.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self^other = other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Self {
        let mut out = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            out[other.images[i] as usize] = other.images[j as usize];
        }
        Permutation { images: out }
    }

    pub fn commutator(&self, other: &Permutation) -> Self {
        &(&self.inverse() * &other.inverse()) * &(self * other)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut lens = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| num::integer::lcm(acc, l as u64))
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if self.degree() != degree {
            return Err(Error::DegreeMismatch { expected: degree, found: self.degree() });
        }
        Ok(())
    }
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &'a Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation {
            images: self.images.iter().map(|&i| rhs.images[i as usize]).collect(),
        }
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Disjoint cycle notation; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "({start}")?;
            seen[start] = true;
            let mut i = self.images[start] as usize;
            while i != start {
                write!(f, " {i}")?;
                seen[i] = true;
                i = self.images[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip_through_display() {
        let p = Permutation::from_cycles(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(p.order(), 6);
        assert_eq!(Permutation::from_cycles(3, "").unwrap(), Permutation::identity(3));
    }

    #[test]
    fn right_action_composition() {
        let a = Permutation::from_cycles(3, "(0 1)").unwrap();
        let b = Permutation::from_cycles(3, "(1 2)").unwrap();
        // 0 -> 1 under a, then 1 -> 2 under b
        assert_eq!((&a * &b).apply(0), 2);
        assert!((&a * &a.inverse()).is_identity());
        let c = a.conjugate_by(&b);
        assert_eq!(c, &(&b.inverse() * &a) * &b);
        assert_eq!(c, Permutation::from_cycles(3, "(0 2)").unwrap());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_cycles(3, "(0 1)(1 2)").is_err());
    }
}
