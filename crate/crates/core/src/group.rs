//! Permutation groups: order, membership, centralizers, normal closures,
//! normalizers and Sylow subgroups.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{orbit_with_transversal, StabChain};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Seed used for all internal randomized searches, so results are reproducible.
pub(crate) const RNG_SEED: u64 = 0x5eed_c7b1;

pub(crate) fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(RNG_SEED)
}

/// A permutation group with a verified stabilizer chain. Immutable after construction.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: StabChain::trivial(degree, 0) }
    }

    /// Runs Schreier-Sims on `generators`. All generators must share `degree`.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            g.check_degree(degree)?;
        }
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let labelled: Vec<_> = generators.iter().map(|g| (g.clone(), Permutation::identity(0))).collect();
        let chain = StabChain::build(degree, 0, &labelled);
        Ok(PermGroup { degree, generators, chain })
    }

    /// Schreier-Sims on a non-empty generator list, taking the degree from the first generator.
    pub fn from_generators(generators: Vec<Permutation>) -> Result<Self> {
        let degree = generators.first().map(|g| g.degree()).unwrap_or(0);
        Self::new(degree, generators)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.chain.strong
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u64 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.levels.is_empty()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Membership test; errors on a degree mismatch.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        p.check_degree(self.degree)?;
        Ok(self.contains_unchecked(p))
    }

    pub(crate) fn contains_unchecked(&self, p: &Permutation) -> bool {
        let s = self.chain.sift(p, &Permutation::identity(0));
        s.level == self.chain.levels.len() && s.residue.is_identity()
    }

    /// Word in [`strong_generators`](Self::strong_generators) for a member of the group.
    pub fn strong_word(&self, p: &Permutation) -> Result<Vec<usize>> {
        p.check_degree(self.degree)?;
        self.chain.word(p).ok_or(Error::NotInGroup)
    }

    pub fn elements(&self) -> Vec<Permutation> {
        self.chain.elements()
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain.random_element(rng).0
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().enumerate().all(|(i, a)| g[i + 1..].iter().all(|b| a * b == b * a))
    }

    pub fn exponent(&self) -> u64 {
        self.elements().iter().fold(1u64, |acc, g| num::integer::lcm(acc, g.order()))
    }

    /// Subgroup generated by `gens`, which must have this group's degree.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        PermGroup::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains_unchecked(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other)
            && other
                .generators
                .iter()
                .all(|s| self.generators.iter().all(|h| self.contains_unchecked(&h.conjugate_by(s))))
    }

    /// Extends the group by one generator, returning the enlarged group.
    pub fn with_generator(&self, g: Permutation) -> PermGroup {
        let mut out = self.clone();
        if !out.contains_unchecked(&g) {
            out.chain.extend(g.clone(), Permutation::identity(0));
            out.generators.push(g);
        }
        out
    }

    /// Stabilizer of `start` under an action, by orbit-stabilizer with random Schreier
    /// generators until the stabilizer reaches the order `|G| / |orbit|`.
    fn stabilizer<K, F>(&self, start: K, act: F) -> (usize, PermGroup)
    where
        K: Clone + Eq + std::hash::Hash,
        F: Fn(&K, &Permutation) -> K,
    {
        let (orbit, trans) = orbit_with_transversal(start.clone(), &self.generators, self.degree, &act);
        let target = self.order() / orbit.len() as u64;
        let mut stab = PermGroup::trivial(self.degree);
        let mut rng = rng();
        let mut attempts = 0u64;
        while stab.order() < target {
            let g = self.random_element(&mut rng);
            let img = act(&start, &g);
            let s = &g * &trans[&img].inverse();
            stab = stab.with_generator(s);
            attempts += 1;
            if attempts > 50_000 {
                // exhaustive fallback over Schreier generators
                for (k, t) in &trans {
                    for g in &self.generators {
                        let img = act(k, g);
                        let s = &(t * g) * &trans[&img].inverse();
                        stab = stab.with_generator(s);
                    }
                }
                break;
            }
        }
        debug_assert_eq!(stab.order(), target);
        (orbit.len(), stab)
    }

    /// `C_G(x)`; `x` must lie in the group.
    pub fn centralizer(&self, x: &Permutation) -> Result<PermGroup> {
        if !self.contains(x)? {
            return Err(Error::NotInGroup);
        }
        if x.is_identity() {
            return Ok(self.clone());
        }
        Ok(self.stabilizer(x.clone(), |y, g| y.conjugate_by(g)).1)
    }

    /// Conjugacy class of `x` as a list of elements, `x` first.
    pub fn conjugacy_class(&self, x: &Permutation) -> Vec<Permutation> {
        let mut seen = HashSet::from([x.clone()]);
        let mut out = vec![x.clone()];
        let mut k = 0;
        while k < out.len() {
            let y = out[k].clone();
            for g in &self.generators {
                let z = y.conjugate_by(g);
                if seen.insert(z.clone()) {
                    out.push(z);
                }
            }
            k += 1;
        }
        out
    }

    /// Smallest normal subgroup containing `g`.
    pub fn normal_closure(&self, g: &Permutation) -> Result<PermGroup> {
        if !self.contains(g)? {
            return Err(Error::NotInGroup);
        }
        self.normal_closure_of(&[g.clone()])
    }

    pub(crate) fn normal_closure_of(&self, gens: &[Permutation]) -> Result<PermGroup> {
        let mut closure = PermGroup::new(self.degree, gens.to_vec())?;
        let mut k = 0;
        while k < closure.generators.len() {
            let h = closure.generators[k].clone();
            for s in &self.generators {
                let c = h.conjugate_by(s);
                if !closure.contains_unchecked(&c) {
                    closure = closure.with_generator(c);
                }
            }
            k += 1;
        }
        Ok(closure)
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_of(&comms).expect("commutators share the degree")
    }

    pub fn is_solvable(&self) -> bool {
        let mut g = self.clone();
        loop {
            if g.is_trivial() {
                return true;
            }
            let d = g.derived_subgroup();
            if d.order() == g.order() {
                return false;
            }
            g = d;
        }
    }

    /// `N_G(H)` for a subgroup `H`, by orbit-stabilizer on the conjugates of `H`.
    pub fn normalizer(&self, sub: &PermGroup) -> PermGroup {
        if sub.is_trivial() {
            return self.clone();
        }
        let mut key: Vec<Permutation> = sub.elements();
        key.sort();
        self.stabilizer(key, |k, g| {
            let mut v: Vec<Permutation> = k.iter().map(|h| h.conjugate_by(g)).collect();
            v.sort();
            v
        })
        .1
    }

    /// A Sylow `p`-subgroup, built by extending a `p`-subgroup with `p`-elements of its
    /// normalizer. Returns the trivial group when `p` does not divide the order.
    pub fn sylow_subgroup(&self, p: u64) -> PermGroup {
        let order = self.order();
        let mut target = 1u64;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            target *= p;
        }
        let mut sylow = PermGroup::trivial(self.degree);
        let mut rng = rng();
        while sylow.order() < target {
            let norm = self.normalizer(&sylow);
            let mut found = None;
            for _ in 0..2_000 {
                let g = norm.random_element(&mut rng);
                if let Some(h) = p_part(&g, p) {
                    if !sylow.contains_unchecked(&h) {
                        found = Some(h);
                        break;
                    }
                }
            }
            if found.is_none() {
                found = norm
                    .elements()
                    .into_iter()
                    .filter_map(|g| p_part(&g, p))
                    .find(|h| !sylow.contains_unchecked(h));
            }
            let h = found.expect("normalizer of a non-Sylow p-subgroup has p-elements outside it");
            sylow = sylow.with_generator(h);
        }
        sylow
    }

    /// Whether the group is cyclic (some element has order `|G|`).
    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        n == 1 || self.elements().iter().any(|g| g.order() == n)
    }
}

/// The `p`-part `g^(o / o_p)` of an element, or `None` if it is trivial.
pub(crate) fn p_part(g: &Permutation, p: u64) -> Option<Permutation> {
    let o = g.order();
    let mut op = 1;
    while o % (op * p) == 0 {
        op *= p;
    }
    if op == 1 {
        None
    } else {
        Some(g.pow(o / op))
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::from_cycles(n, s).unwrap()
    }

    /// Closure under multiplication, independent of the stabilizer chain.
    fn brute_closure(gens: &[Permutation], degree: usize) -> HashSet<Permutation> {
        let mut set = HashSet::from([Permutation::identity(degree)]);
        let mut frontier = vec![Permutation::identity(degree)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = &x * g;
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn schreier_sims_orders() {
        let s4 = PermGroup::new(4, vec![cyc(4, "(0 1)"), cyc(4, "(0 1 2 3)")]).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(PermGroup::new(3, vec![Permutation::identity(3)]).unwrap().order(), 1);
        assert_eq!(PermGroup::new(3, vec![]).unwrap().order(), 1);
        let gens = vec![cyc(5, "(0 1 2)"), cyc(5, "(2 3 4)")];
        let a5 = PermGroup::new(5, gens.clone()).unwrap();
        assert_eq!(brute_closure(&gens, 5).len(), 60);
        assert_eq!(a5.order(), 60);
        let prod: u64 = a5.basic_orbit_lengths().iter().map(|&l| l as u64).product();
        assert_eq!(prod, 60);
    }

    #[test]
    fn membership() {
        let a5 = groups::alternating(5);
        assert!(!a5.contains(&cyc(5, "(0 1)")).unwrap());
        assert!(a5.contains(&a5.identity()).unwrap());
        let s4 = groups::symmetric(4);
        assert!(s4.contains(&cyc(4, "(0 2)(1 3)")).unwrap());
        assert!(matches!(s4.contains(&cyc(5, "(0 1)")), Err(Error::DegreeMismatch { .. })));
        let w = s4.strong_word(&cyc(4, "(0 2)(1 3)")).unwrap();
        let rebuilt = w
            .iter()
            .fold(s4.identity(), |acc, &i| &acc * &s4.strong_generators()[i]);
        assert_eq!(rebuilt, cyc(4, "(0 2)(1 3)"));
    }

    #[test]
    fn elements_match_brute_force() {
        for g in [groups::symmetric(4), groups::alternating(5), groups::quaternion8()] {
            let set: HashSet<_> = g.elements().into_iter().collect();
            assert_eq!(set.len() as u64, g.order());
            assert_eq!(set, brute_closure(g.generators(), g.degree()));
        }
    }

    #[test]
    fn centralizers() {
        let s3 = groups::symmetric(3);
        assert_eq!(s3.centralizer(&cyc(3, "(0 1 2)")).unwrap().order(), 3);
        let s4 = groups::symmetric(4);
        assert_eq!(s4.centralizer(&s4.identity()).unwrap().order(), 24);
        assert_eq!(s4.centralizer(&cyc(4, "(0 1)")).unwrap().order(), 4);
        let a5 = groups::alternating(5);
        assert!(matches!(a5.centralizer(&cyc(5, "(0 1)")), Err(Error::NotInGroup)));
    }

    #[test]
    fn normal_closures() {
        let s4 = groups::symmetric(4);
        assert_eq!(s4.normal_closure(&cyc(4, "(0 1)(2 3)")).unwrap().order(), 4);
        assert_eq!(s4.normal_closure(&cyc(4, "(0 1 2)")).unwrap().order(), 12);
        let a5 = groups::alternating(5);
        assert_eq!(a5.normal_closure(&cyc(5, "(0 1)(2 3)")).unwrap().order(), 60);
    }

    #[test]
    fn sylow_subgroups() {
        let s4 = groups::symmetric(4);
        let p2 = s4.sylow_subgroup(2);
        assert_eq!(p2.order(), 8);
        assert!(!p2.is_abelian());
        assert_eq!(s4.sylow_subgroup(3).order(), 3);
        assert_eq!(s4.sylow_subgroup(5).order(), 1);
        assert_eq!(groups::alternating(5).sylow_subgroup(5).order(), 5);
        assert_eq!(groups::affine_2_4_a5().sylow_subgroup(2).order(), 64);
    }

    #[test]
    fn solvability() {
        assert!(groups::symmetric(4).is_solvable());
        assert!(!groups::alternating(5).is_solvable());
        assert_eq!(groups::alternating(4).derived_subgroup().order(), 4);
    }
}
