//! Hybrid representations: a polycyclic presentation of the solvable radical
//! `R` of a group, extended by a permutation group for `G/R`.
//!
//! An element is stored as `nu(q) * r`, where `q` is a quotient element in
//! base-image normal form, `nu(q)` the product of lifted transversal words, and
//! `r` a collected radical word. Products are rewritten with one relation per
//! (level, orbit point, strong generator) of the quotient chain,
//!
//! ```text
//! t_b * s = nu(h) * t_(b^s) * tau,        h in the next stabilizer, tau in R,
//! ```
//!
//! together with the action of each quotient generator on `R` and PC collection.

mod build;
pub mod pc;
pub mod presentation;
pub mod word;

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use build::{build_from_perm_group, build_with_orbit, default_seed, HybridReport};
pub use pc::{Exponents, PcPresentation};
pub use presentation::{
    closure_order, evaluate, verify_presentation, GroupOracle, ImageRecord, PcRelator, PermOracle,
    PresentationRecord, QuotientRecord, Verdict,
};
pub use word::{Gen, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HybridElement {
    /// Orbit position used at each level of the quotient chain.
    pub quotient: Vec<usize>,
    /// Exponents of the collected radical part.
    pub radical: Exponents,
}

/// How `t_b * s` is rewritten at one level.
#[derive(Clone, Debug)]
struct Rewrite {
    target: usize,
    /// Normal-form word of `h` in strong generator indices.
    h_word: Vec<usize>,
    tau: Exponents,
}

/// One quotient relation `t_b * s = h * t_(b^s)` of the chain.
#[derive(Clone, Debug)]
struct SchreierRelation {
    level: usize,
    pos: usize,
    gen: usize,
    target: usize,
    h_word: Vec<usize>,
    /// `W(t_b) s W(t_(b^s))^-1 W(h)^-1` freely reduced, `None` when it cancels completely.
    relator: Option<Word>,
}

/// The quotient relations of a complete chain in canonical order.
fn schreier_relations(chain: &StabChain) -> Result<Vec<SchreierRelation>> {
    let mut out = Vec::new();
    for (i, level) in chain.levels.iter().enumerate() {
        for (k, &pt) in level.orbit.iter().enumerate() {
            for &s in &level.gens {
                let target = level.position(chain.strong[s].apply(pt)).expect("orbit is closed");
                let h = &(level.transversal(k).0 * &chain.strong[s]) * &level.transversal(target).0.inverse();
                let sift = chain.sift(&h, &chain.label_identity());
                if sift.level != chain.levels.len() || !sift.residue.is_identity() {
                    return Err(Error::Presentation("quotient generators do not form a base and strong generating set".into()));
                }
                let h_word = normal_word(chain, &sift.positions);
                let mut w = Word::from_quotient_letters(&level.word(k));
                w.push(Gen::Quotient(s), 1);
                w.append(&Word::from_quotient_letters(&level.word(target)).inverse());
                w.append(&Word::from_quotient_letters(&h_word).inverse());
                let relator = (!w.is_identity()).then_some(w);
                out.push(SchreierRelation { level: i, pos: k, gen: s, target, h_word, relator });
            }
        }
    }
    Ok(out)
}

/// `W(q)`: transversal words from the deepest level to the first.
fn normal_word(chain: &StabChain, positions: &[usize]) -> Vec<usize> {
    let mut w = Vec::new();
    for (level, &pos) in chain.levels.iter().zip(positions).rev() {
        w.extend(level.word(pos));
    }
    w
}

/// A group given by a hybrid presentation. Immutable; elements are plain values.
#[derive(Clone, Debug)]
pub struct HybridGroup {
    pc: PcPresentation,
    chain: StabChain,
    /// `rewrites[level][pos * strong + s]`, present for `s` among the level's generators.
    rewrites: Vec<Vec<Option<Rewrite>>>,
    /// Tail of each quotient relator that does not cancel freely.
    relator_tails: Vec<Exponents>,
    relators: Vec<Word>,
    /// `action[s][j]` is `q_s^-1 g_j q_s`.
    action: Vec<Vec<Exponents>>,
    images: Option<ImageRecord>,
}

impl HybridGroup {
    /// Loads a presentation record, checking it against the quotient chain it describes.
    pub fn from_presentation(rec: &PresentationRecord) -> Result<Self> {
        let bad = |msg: String| Err(Error::Presentation(msg));
        let orders = rec.relative_orders.clone();
        let m = orders.len();
        let mut power = vec![vec![0; m]; m];
        let mut conjugate = vec![vec![vec![0; m]; m]; m];
        let mut seen_power = vec![false; m];
        let mut seen_conj = vec![vec![false; m]; m];
        for r in &rec.pc_relators {
            let rhs = r.rhs.parse::<Word>()?.to_exponents(&orders)?;
            let (base, exp) = r.lhs.split_once('^').ok_or_else(|| Error::Presentation(r.lhs.clone()))?;
            let Gen::Radical(j) = base.parse()? else { return bad(format!("bad PC relator {}", r.lhs)) };
            if j >= m {
                return bad(format!("bad PC relator {}", r.lhs));
            }
            match exp.parse::<Gen>() {
                Ok(Gen::Radical(i)) if i < j => {
                    conjugate[i][j] = rhs;
                    seen_conj[i][j] = true;
                }
                Ok(_) => return bad(format!("bad PC relator {}", r.lhs)),
                Err(_) => {
                    if exp != orders[j].to_string() {
                        return bad(format!("power relator {} does not match the relative order", r.lhs));
                    }
                    power[j] = rhs;
                    seen_power[j] = true;
                }
            }
        }
        if seen_power.iter().any(|s| !s) || (0..m).any(|i| (i + 1..m).any(|j| !seen_conj[i][j])) {
            return bad("missing PC relators".into());
        }
        let pc = PcPresentation::new(orders, power, conjugate)?;

        let q = &rec.quotient;
        for s in &q.strong_generators {
            s.check_degree(q.degree)?;
        }
        if q.base.iter().any(|&b| b >= q.degree.max(1)) {
            return bad("base point out of range".into());
        }
        let chain = StabChain::from_bsgs(q.degree, &q.base, q.strong_generators.clone());
        let nq = chain.strong.len();
        if rec.action.len() != nq || rec.action.iter().any(|a| a.len() != m) {
            return bad("action needs one image per radical generator for each quotient generator".into());
        }
        let action = rec
            .action
            .iter()
            .map(|imgs| imgs.iter().map(|w| w.parse::<Word>()?.to_exponents(&pc.relative_orders)).collect())
            .collect::<Result<Vec<Vec<Exponents>>>>()?;
        for imgs in &action {
            if !pc.respects_relations(imgs) {
                return bad("an action map does not preserve the PC relations".into());
            }
        }

        let relations = schreier_relations(&chain)?;
        let relators: Vec<Word> = relations.iter().filter_map(|r| r.relator.clone()).collect();
        let texts: Vec<String> = relators.iter().map(Word::to_string).collect();
        if texts != rec.quotient_relators {
            return bad("quotient relators do not match the quotient chain".into());
        }
        let relator_tails = rec
            .tails
            .iter()
            .map(|w| w.parse::<Word>()?.to_exponents(&pc.relative_orders))
            .collect::<Result<Vec<_>>>()?;
        if relator_tails.len() != relators.len() {
            return bad("one tail per quotient relator is required".into());
        }

        let mut group = HybridGroup {
            rewrites: chain.levels.iter().map(|l| vec![None; l.orbit.len() * nq]).collect(),
            pc,
            chain,
            relator_tails,
            relators,
            action,
            images: rec.images.clone(),
        };
        let mut tails = group.relator_tails.iter();
        for r in relations {
            // t_b s = nu(h) t_(b^s) tau with tau = rho^(nu(h) t_(b^s))
            let tau = match r.relator {
                Some(_) => {
                    let mut t = tails.next().expect("counted above").clone();
                    for &s in r.h_word.iter().chain(&group.chain.levels[r.level].word(r.target)) {
                        t = group.act(s, &t);
                    }
                    t
                }
                None => group.pc.identity(),
            };
            group.rewrites[r.level][r.pos * nq + r.gen] = Some(Rewrite { target: r.target, h_word: r.h_word, tau });
        }
        if group.order() != rec.order {
            return bad(format!("record states order {} but describes {}", rec.order, group.order()));
        }
        Ok(group)
    }

    /// The presentation record; `to_json` of it is canonical.
    pub fn export_presentation(&self) -> PresentationRecord {
        let m = self.pc.len();
        let word = |e: &Exponents| Word::from_exponents(e).to_string();
        let mut pc_relators = Vec::new();
        for i in 0..m {
            let gi = Gen::Radical(i);
            pc_relators.push(PcRelator { lhs: format!("{gi}^{}", self.pc.relative_orders[i]), rhs: word(&self.pc.power[i]) });
            for j in i + 1..m {
                pc_relators.push(PcRelator { lhs: format!("{}^{gi}", Gen::Radical(j)), rhs: word(&self.pc.conjugate[i][j]) });
            }
        }
        PresentationRecord {
            order: self.order(),
            relative_orders: self.pc.relative_orders.clone(),
            pc_relators,
            quotient: QuotientRecord {
                degree: self.chain.degree,
                base: self.chain.levels.iter().map(|l| l.base_point).collect(),
                strong_generators: self.chain.strong.clone(),
            },
            quotient_relators: self.relators.iter().map(Word::to_string).collect(),
            tails: self.relator_tails.iter().map(word).collect(),
            action: self.action.iter().map(|imgs| imgs.iter().map(word).collect()).collect(),
            images: self.images.clone(),
        }
    }

    pub fn radical(&self) -> &PcPresentation {
        &self.pc
    }

    pub fn quotient_order(&self) -> u64 {
        self.chain.order()
    }

    pub fn quotient_degree(&self) -> usize {
        self.chain.degree
    }

    pub fn order(&self) -> u64 {
        self.quotient_order() * self.pc.order()
    }

    pub fn num_quotient_generators(&self) -> usize {
        self.chain.strong.len()
    }

    /// Permutations of the source group standing for the generators, if built from one.
    pub fn images(&self) -> Option<&ImageRecord> {
        self.images.as_ref()
    }

    pub fn identity(&self) -> HybridElement {
        HybridElement { quotient: vec![0; self.chain.levels.len()], radical: self.pc.identity() }
    }

    /// The presentation generators as elements: quotient generators, then radical generators.
    pub fn generators(&self) -> Vec<HybridElement> {
        let mut out = Vec::new();
        for s in 0..self.num_quotient_generators() {
            let mut x = self.identity();
            x.radical = self.mul_gen(&mut x.quotient, 0, s);
            out.push(x);
        }
        for i in 0..self.pc.len() {
            out.push(HybridElement { quotient: vec![0; self.chain.levels.len()], radical: self.pc.generator(i) });
        }
        out
    }

    /// `r^(q_s)`.
    fn act(&self, s: usize, r: &[u32]) -> Exponents {
        self.pc.apply_map(&self.action[s], r)
    }

    /// Replaces `q` by the normal form of `nu(q) s` and returns the radical correction `c`
    /// with `nu(q) s = nu(q') c`. Only levels from `level` on are touched, and `s` must fix
    /// the earlier base points.
    fn mul_gen(&self, q: &mut [usize], level: usize, s: usize) -> Exponents {
        let nq = self.num_quotient_generators();
        let rw = self.rewrites[level][q[level] * nq + s].as_ref().expect("generator belongs to the level");
        let mut acc = self.pc.identity();
        for &t in &rw.h_word {
            let r = self.mul_gen(q, level + 1, t);
            acc = self.pc.multiply(&r, &self.act(t, &acc));
        }
        q[level] = rw.target;
        for t in self.chain.levels[level].word(rw.target) {
            acc = self.act(t, &acc);
        }
        self.pc.multiply(&acc, &rw.tau)
    }

    fn quotient_word(&self, q: &[usize]) -> Vec<usize> {
        normal_word(&self.chain, q)
    }

    /// Quotient part as a permutation.
    pub fn quotient_permutation(&self, q: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.chain.degree);
        for (level, &pos) in self.chain.levels.iter().zip(q).rev() {
            g = &g * level.transversal(pos).0;
        }
        g
    }

    pub fn multiply(&self, a: &HybridElement, b: &HybridElement) -> HybridElement {
        let mut q = a.quotient.clone();
        let mut acc = a.radical.clone();
        for s in self.quotient_word(&b.quotient) {
            let r = self.mul_gen(&mut q, 0, s);
            acc = self.pc.multiply(&r, &self.act(s, &acc));
        }
        HybridElement { quotient: q, radical: self.pc.multiply(&acc, &b.radical) }
    }

    pub fn inverse(&self, a: &HybridElement) -> HybridElement {
        let qinv = self.quotient_permutation(&a.quotient).inverse();
        let positions = self.chain.sift(&qinv, &self.chain.label_identity()).positions;
        let y = HybridElement { quotient: positions, radical: self.pc.identity() };
        let bare = HybridElement { quotient: a.quotient.clone(), radical: self.pc.identity() };
        // nu(q^-1) nu(q) = c, so a^-1 = r^-1 c^-1 nu(q^-1)
        let c = self.multiply(&y, &bare).radical;
        let r = self.pc.multiply(&self.pc.inverse(&a.radical), &self.pc.inverse(&c));
        self.multiply(&HybridElement { quotient: self.identity().quotient, radical: r }, &y)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> HybridElement {
        HybridElement {
            quotient: self.chain.levels.iter().map(|l| rng.gen_range(0..l.orbit.len())).collect(),
            radical: self.pc.relative_orders.iter().map(|&p| rng.gen_range(0..p)).collect(),
        }
    }

    /// Every element, by running over all normal forms.
    pub fn elements(&self) -> Vec<HybridElement> {
        let mut quotients = vec![Vec::new()];
        for level in &self.chain.levels {
            quotients = quotients
                .into_iter()
                .flat_map(|q: Vec<usize>| {
                    (0..level.orbit.len()).map(move |k| {
                        let mut q = q.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        let mut radicals = vec![Vec::new()];
        for &p in &self.pc.relative_orders {
            radicals = radicals
                .into_iter()
                .flat_map(|r: Vec<u32>| {
                    (0..p).map(move |e| {
                        let mut r = r.clone();
                        r.push(e);
                        r
                    })
                })
                .collect();
        }
        let mut out = Vec::with_capacity(quotients.len() * radicals.len());
        for q in &quotients {
            for r in &radicals {
                out.push(HybridElement { quotient: q.clone(), radical: r.clone() });
            }
        }
        out
    }

    /// Number of conjugacy classes, by orbits of conjugation on all elements.
    pub fn class_count(&self) -> usize {
        let gens = self.generators();
        let invs: Vec<_> = gens.iter().map(|g| self.inverse(g)).collect();
        let mut seen = HashSet::new();
        let mut count = 0;
        for x in self.elements() {
            if !seen.insert(x.clone()) {
                continue;
            }
            count += 1;
            let mut queue = vec![x];
            while let Some(y) = queue.pop() {
                for (g, gi) in gens.iter().zip(&invs) {
                    let z = self.multiply(&self.multiply(gi, &y), g);
                    if seen.insert(z.clone()) {
                        queue.push(z);
                    }
                }
            }
        }
        count
    }

    /// Image in the source group, through the generator images recorded at construction.
    pub fn to_permutation(&self, x: &HybridElement) -> Option<Permutation> {
        let images = self.images.as_ref()?;
        let mut g = Permutation::identity(images.degree);
        for s in self.quotient_word(&x.quotient) {
            g = &g * &images.quotient[s];
        }
        for (i, &e) in x.radical.iter().enumerate() {
            g = &g * &images.radical[i].pow(e as u64);
        }
        Some(g)
    }
}

impl GroupOracle for HybridGroup {
    type Elem = HybridElement;

    fn identity(&self) -> HybridElement {
        HybridGroup::identity(self)
    }

    fn multiply(&self, a: &HybridElement, b: &HybridElement) -> HybridElement {
        HybridGroup::multiply(self, a, b)
    }

    fn inverse(&self, a: &HybridElement) -> HybridElement {
        HybridGroup::inverse(self, a)
    }

    fn generated_order(&self, gens: &[HybridElement]) -> u64 {
        closure_order(self, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::rng;
    use crate::group::PermGroup;
    use crate::groups;

    fn s4() -> HybridGroup {
        let g = groups::symmetric(4);
        build_from_perm_group(&g, &Permutation::from_cycles(4, "(0 1)(2 3)").unwrap()).unwrap().0
    }

    fn affine() -> HybridGroup {
        let g = groups::affine_2_4_a5();
        let seed = g.generators()[2].clone();
        build_from_perm_group(&g, &seed).unwrap().0
    }

    /// The same group, with each complement generator multiplied by a translation so
    /// that lifted quotient generators leave nontrivial tails.
    fn affine_twisted() -> HybridGroup {
        let g = groups::affine_2_4_a5();
        let gens = g.generators();
        let twisted = vec![&gens[0] * &gens[2], &gens[1] * &gens[3], gens[4].clone(), gens[5].clone()];
        let g = PermGroup::new(16, twisted).unwrap();
        assert_eq!(g.order(), 960);
        build_from_perm_group(&g, &gens[2]).unwrap().0
    }

    fn check_homomorphism(h: &HybridGroup, trials: usize) {
        let mut rng = rng();
        for _ in 0..trials {
            let a = h.random_element(&mut rng);
            let b = h.random_element(&mut rng);
            let ab = h.multiply(&a, &b);
            let lhs = h.to_permutation(&ab).unwrap();
            let rhs = &h.to_permutation(&a).unwrap() * &h.to_permutation(&b).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn multiplication_matches_permutations() {
        check_homomorphism(&s4(), 1000);
        check_homomorphism(&affine(), 1000);
        check_homomorphism(&affine_twisted(), 1000);
    }

    #[test]
    fn identity_inverse_and_associativity() {
        for h in [s4(), affine(), affine_twisted()] {
            let mut rng = rng();
            let id = h.identity();
            for _ in 0..300 {
                let a = h.random_element(&mut rng);
                let b = h.random_element(&mut rng);
                let c = h.random_element(&mut rng);
                assert_eq!(h.multiply(&a, &id), a);
                assert_eq!(h.multiply(&id, &a), a);
                assert_eq!(h.multiply(&a, &h.inverse(&a)), id);
                assert_eq!(h.multiply(&h.multiply(&a, &b), &c), h.multiply(&a, &h.multiply(&b, &c)));
            }
        }
    }

    #[test]
    fn normal_forms_are_distinct_elements() {
        let h = affine();
        let perms: HashSet<Permutation> = h.elements().iter().map(|x| h.to_permutation(x).unwrap()).collect();
        assert_eq!(perms.len(), 960);
    }

    #[test]
    fn export_round_trip_is_byte_identical() {
        for h in [s4(), affine(), affine_twisted()] {
            let text = h.export_presentation().to_json();
            let rebuilt = HybridGroup::from_presentation(&PresentationRecord::from_json(&text).unwrap()).unwrap();
            assert_eq!(rebuilt.order(), h.order());
            assert_eq!(rebuilt.export_presentation().to_json(), text);
        }
    }

    #[test]
    fn affine_record_has_all_sections() {
        for h in [affine(), affine_twisted()] {
            let rec = h.export_presentation();
            assert!(!rec.pc_relators.is_empty());
            assert!(!rec.quotient_relators.is_empty());
            assert!(!rec.action.is_empty());
            assert_eq!(rec.tails.len(), rec.quotient_relators.len());
        }
        // a split extension lifted into the complement has trivial tails; the twisted one does not
        assert!(affine().export_presentation().tails.iter().all(|t| t == "1"));
        assert!(affine_twisted().export_presentation().tails.iter().any(|t| t != "1"));
    }

    #[test]
    fn verification() {
        for h in [s4(), affine(), affine_twisted()] {
            let rec = h.export_presentation();
            let own = h.generators();
            assert!(verify_presentation(&rec, &h, &own, h.order()).unwrap().holds);

            let images = rec.images.clone().unwrap();
            let perms: Vec<Permutation> = images.quotient.iter().chain(&images.radical).cloned().collect();
            let oracle = PermOracle { degree: images.degree };
            assert!(verify_presentation(&rec, &oracle, &perms, h.order()).unwrap().holds);

            let mut broken = perms.clone();
            let last = broken.len() - 1;
            broken[last] = Permutation::identity(images.degree);
            assert!(!verify_presentation(&rec, &oracle, &broken, h.order()).unwrap().holds);
        }
    }

    #[test]
    fn tampered_tail_is_reported() {
        let h = affine_twisted();
        let mut rec = h.export_presentation();
        let i = rec.tails.iter().position(|t| t != "1").unwrap();
        rec.tails[i] = "1".into();
        let images = rec.images.clone().unwrap();
        let perms: Vec<Permutation> = images.quotient.iter().chain(&images.radical).cloned().collect();
        let v = verify_presentation(&rec, &PermOracle { degree: images.degree }, &perms, 960).unwrap();
        assert_eq!(v.failed_relator, Some(("quotient", i)));
    }

    #[test]
    fn class_counts_match_permutation_groups() {
        for (name, g) in groups::corpus() {
            let seed = default_seed(&g).unwrap();
            let (h, _) = build_from_perm_group(&g, &seed).unwrap();
            let expected = crate::class_data::conjugacy_classes(&g).unwrap().header.num_classes();
            assert_eq!(h.class_count(), expected, "{name}");
        }
    }
}
