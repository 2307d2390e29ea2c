//! Words in quotient generators `q1, q2, ...` and radical generators `g1, g2, ...`.
//!
//! Text form is a `*`-separated product of letters with optional integer
//! exponents, e.g. `q2^-1*g3^2*g5`; the empty word is `1`. Indices are 1-based
//! in text and 0-based in memory.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Quotient(usize),
    Radical(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<(Gen, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((g, e));
    }

    /// Concatenation with free cancellation at the seam.
    pub fn append(&mut self, other: &Word) {
        for &(g, e) in &other.0 {
            self.push(g, e);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Word in quotient generators for a list of strong generator indices.
    pub fn from_quotient_letters(letters: &[usize]) -> Word {
        let mut w = Word::identity();
        for &s in letters {
            w.push(Gen::Quotient(s), 1);
        }
        w
    }

    /// Collected radical word `g_1^e_1 ... g_m^e_m`.
    pub fn from_exponents(e: &[u32]) -> Word {
        let mut w = Word::identity();
        for (i, &x) in e.iter().enumerate() {
            w.push(Gen::Radical(i), x as i64);
        }
        w
    }

    /// Exponent vector of a word in radical generators written in collected order.
    pub fn to_exponents(&self, orders: &[u32]) -> Result<Vec<u32>> {
        let mut out = vec![0u32; orders.len()];
        let mut last: Option<usize> = None;
        for &(g, e) in &self.0 {
            let Gen::Radical(i) = g else {
                return Err(Error::Presentation(format!("{self} is not a radical word")));
            };
            if i >= orders.len() || last.is_some_and(|l| l >= i) || e <= 0 || e >= orders[i] as i64 {
                return Err(Error::Presentation(format!("{self} is not a collected radical word")));
            }
            out[i] = e as u32;
            last = Some(i);
        }
        Ok(out)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Quotient(i) => write!(f, "q{}", i + 1),
            Gen::Radical(i) => write!(f, "g{}", i + 1),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Presentation(format!("bad generator {s:?}"));
        let (kind, idx) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match kind {
            "q" => Ok(Gen::Quotient(idx - 1)),
            "g" => Ok(Gen::Radical(idx - 1)),
            _ => Err(bad()),
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut w = Word::identity();
        if s == "1" {
            return Ok(w);
        }
        for part in s.split('*') {
            let (g, e) = match part.split_once('^') {
                Some((g, e)) => {
                    let e: i64 = e.trim().parse().map_err(|_| Error::Presentation(format!("bad exponent in {part:?}")))?;
                    (g, e)
                }
                None => (part, 1),
            };
            w.0.push((g.trim().parse()?, e));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["1", "g3^2*g5", "q1*q2^-1*q1^3", "q2*g1"] {
            let w: Word = s.parse().unwrap();
            assert_eq!(w.to_string(), s);
        }
        assert!("h1".parse::<Word>().is_err());
        assert!("g0".parse::<Word>().is_err());
    }

    #[test]
    fn free_cancellation() {
        let mut w: Word = "q1*q2".parse().unwrap();
        w.append(&w.inverse());
        assert!(w.is_identity());
    }

    #[test]
    fn exponents() {
        let w: Word = "g2*g3^2".parse().unwrap();
        assert_eq!(w.to_exponents(&[2, 2, 3]).unwrap(), vec![0, 1, 2]);
        assert_eq!(Word::from_exponents(&[0, 1, 2]), w);
        assert!("g3*g2".parse::<Word>().unwrap().to_exponents(&[2, 2, 3]).is_err());
    }
}
