//! The presentation record and its verification against concrete generators.
//!
//! A record lists PC relators for the radical, the automorphism each quotient
//! generator induces on it, the quotient relators, and for each quotient
//! relator the radical element (tail) it evaluates to. If some elements satisfy
//! all of these relations and generate a group of the right order, they
//! generate a group isomorphic to the presented one.

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::word::{Gen, Word};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcRelator {
    /// `g3^2` for a power relation, `g5^g3` for a conjugate relation.
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRecord {
    pub degree: usize,
    pub base: Vec<usize>,
    pub strong_generators: Vec<Permutation>,
}

/// Permutations the presentation generators stand for in the source group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub degree: usize,
    pub quotient: Vec<Permutation>,
    pub radical: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRecord {
    pub order: u64,
    pub relative_orders: Vec<u32>,
    pub pc_relators: Vec<PcRelator>,
    pub quotient: QuotientRecord,
    pub quotient_relators: Vec<String>,
    pub tails: Vec<String>,
    /// `action[s][j]` is `q_s^-1 g_j q_s` as a collected radical word.
    pub action: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<ImageRecord>,
}

impl PresentationRecord {
    pub fn num_quotient_generators(&self) -> usize {
        self.quotient.strong_generators.len()
    }

    pub fn num_radical_generators(&self) -> usize {
        self.relative_orders.len()
    }

    /// Canonical JSON text: fixed field order, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Every relator as a word that should evaluate to the identity, tagged with its family.
    pub fn relators(&self) -> Result<Vec<(&'static str, Word)>> {
        let mut out = Vec::new();
        for r in &self.pc_relators {
            let mut w = parse_pc_lhs(&r.lhs)?;
            w.append(&r.rhs.parse::<Word>()?.inverse());
            out.push(("pc", w));
        }
        for (s, images) in self.action.iter().enumerate() {
            for (j, rhs) in images.iter().enumerate() {
                let mut w = Word::identity();
                w.push(Gen::Quotient(s), -1);
                w.push(Gen::Radical(j), 1);
                w.push(Gen::Quotient(s), 1);
                w.append(&rhs.parse::<Word>()?.inverse());
                out.push(("action", w));
            }
        }
        if self.tails.len() != self.quotient_relators.len() {
            return Err(Error::Presentation("one tail per quotient relator is required".into()));
        }
        for (rel, tail) in self.quotient_relators.iter().zip(&self.tails) {
            let mut w: Word = rel.parse()?;
            w.append(&tail.parse::<Word>()?.inverse());
            out.push(("quotient", w));
        }
        Ok(out)
    }
}

/// `g3^2` or `g5^g3` as a word.
fn parse_pc_lhs(lhs: &str) -> Result<Word> {
    let bad = || Error::Presentation(format!("bad PC relator head {lhs:?}"));
    let (base, exp) = lhs.split_once('^').ok_or_else(bad)?;
    let base: Gen = base.parse()?;
    let mut w = Word::identity();
    if let Ok(by) = exp.parse::<Gen>() {
        w.push(by, -1);
        w.push(base, 1);
        w.push(by, 1);
    } else {
        w.push(base, exp.parse::<i64>().map_err(|_| bad())?);
    }
    Ok(w)
}

/// A group in which presentation generators can be evaluated.
pub trait GroupOracle {
    type Elem: Clone + Eq + Hash;
    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// Order of the subgroup generated by `gens`.
    fn generated_order(&self, gens: &[Self::Elem]) -> u64;
}

/// Permutations of a fixed degree.
pub struct PermOracle {
    pub degree: usize,
}

impl GroupOracle for PermOracle {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a * b
    }

    fn inverse(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn generated_order(&self, gens: &[Permutation]) -> u64 {
        PermGroup::new(self.degree, gens.to_vec()).map(|g| g.order()).unwrap_or(0)
    }
}

/// Order of a generated subgroup by breadth-first closure; for oracles without a better method.
pub fn closure_order<O: GroupOracle>(oracle: &O, gens: &[O::Elem]) -> u64 {
    let id = oracle.identity();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = oracle.multiply(&x, g);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.len() as u64
}

/// Evaluates `word` with quotient generators first in `images`, then radical generators.
pub fn evaluate<O: GroupOracle>(oracle: &O, word: &Word, images: &[O::Elem], num_quotient: usize) -> Result<O::Elem> {
    let mut acc = oracle.identity();
    for &(g, e) in &word.0 {
        let idx = match g {
            Gen::Quotient(i) if i < num_quotient => i,
            Gen::Radical(i) if num_quotient + i < images.len() => num_quotient + i,
            _ => return Err(Error::Presentation(format!("generator {g} has no image"))),
        };
        let x = if e < 0 { oracle.inverse(&images[idx]) } else { images[idx].clone() };
        for _ in 0..e.unsigned_abs() {
            acc = oracle.multiply(&acc, &x);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// All relators hold and the images generate a group of the target order.
    pub holds: bool,
    /// First relator that failed: family and index within the family.
    pub failed_relator: Option<(&'static str, usize)>,
    /// Order generated by the images; computed only when every relator holds.
    pub generated_order: Option<u64>,
}

impl Verdict {
    pub fn failure(&self) -> Option<Error> {
        self.failed_relator.map(|(family, index)| Error::RelatorFailed { index, family })
    }
}

/// Evaluates every relator on `images` (quotient generators first) and compares
/// the generated order with `target_order`.
pub fn verify_presentation<O: GroupOracle>(
    pres: &PresentationRecord,
    oracle: &O,
    images: &[O::Elem],
    target_order: u64,
) -> Result<Verdict> {
    let nq = pres.num_quotient_generators();
    if images.len() != nq + pres.num_radical_generators() {
        return Err(Error::Presentation(format!(
            "expected {} images, got {}",
            nq + pres.num_radical_generators(),
            images.len()
        )));
    }
    let id = oracle.identity();
    let mut counts = std::collections::HashMap::new();
    for (family, word) in pres.relators()? {
        let index = counts.entry(family).or_insert(0usize);
        if evaluate(oracle, &word, images, nq)? != id {
            return Ok(Verdict { holds: false, failed_relator: Some((family, *index)), generated_order: None });
        }
        *index += 1;
    }
    let order = oracle.generated_order(images);
    Ok(Verdict { holds: order == target_order, failed_relator: None, generated_order: Some(order) })
}
