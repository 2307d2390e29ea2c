//! Irreducible characters of `p`-groups through `(C, K)` pairs.
//!
//! Phase one walks a chief series `1 = M_0 < M_1 < ... < M_m = P` with Clifford
//! theory. A state `(T, A, lambda)` has `A = T ∩ M_k` and a `T`-invariant linear
//! character `lambda` of `A`. Adding the next layer `B = T ∩ M_(k+1) = <A, b>`,
//! `lambda` has `p` extensions to `B`. Either `T` fixes all of them and each
//! is followed, or `T` permutes them transitively and the stabilizer `T_0` of
//! one extension takes over, the final character being induced from `T_0`. At
//! the top `T = A` and the pair `(T, ker lambda)` is recorded.
//!
//! Phase two turns a pair into characters: the faithful linear characters of
//! the cyclic group `C/K`, induced to `P`. Value relations for characters with
//! kernel exactly `K` (constancy on `N`-cosets and `chi(xg) = lambda(g) chi(x)`
//! for a normal `N <= K` with `gN` central) let most classes be filled without
//! induction.

use std::collections::{HashMap, HashSet, VecDeque};

use num::integer::gcd;
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::character::{sort_canonical, ClassFunction};
use crate::class_data::{Classes, TableHeader};
use crate::cyclotomic::{Cyclotomic, DenseAccumulator};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{prime_factors, PermGroup};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ConlonPair {
    pub c: PermGroup,
    pub k: PermGroup,
    /// `C = <K, g>`.
    pub g: Permutation,
    /// Index into the chief series of the normal subgroup used for value shortcuts.
    pub n_level: Option<usize>,
    pub cyclic_index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shortcuts {
    On,
    Off,
}

/// A `p`-group with the data shared by both phases.
#[derive(Clone, Debug)]
pub struct PGroup {
    pub group: PermGroup,
    pub p: u64,
    pub exponent: u64,
    pub classes: Classes,
    class_elements: Vec<Vec<Permutation>>,
    /// Ascending chief series; `series[k]` has order `p^k`.
    series: Vec<PermGroup>,
    series_elements: Vec<Vec<Permutation>>,
}

/// Linear character as exponents of `E(exponent)` on the elements of its domain.
type Linear = HashMap<Permutation, u64>;

impl PGroup {
    pub fn new(group: PermGroup) -> Result<Self> {
        let classes = Classes::compute(&group)?;
        Self::with_classes(group, classes)
    }

    pub fn with_classes(group: PermGroup, classes: Classes) -> Result<Self> {
        let order = group.order();
        let primes = prime_factors(order);
        if primes.len() > 1 {
            return Err(Error::NotPGroup(order));
        }
        let p = primes.first().copied().unwrap_or(2);
        let exponent = classes.header.exponent();
        let class_elements = classes.class_elements();
        let (series, series_elements) = chief_series(&group, p);
        Ok(PGroup { group, p, exponent, classes, class_elements, series, series_elements })
    }

    pub fn header(&self) -> &TableHeader {
        &self.classes.header
    }

    pub fn chief_series(&self) -> &[PermGroup] {
        &self.series
    }

    /// Phase one: the deduplicated list of pairs.
    pub fn build_pairs(&self) -> Vec<ConlonPair> {
        let mut leaves = Vec::new();
        let mut trivial = Linear::new();
        trivial.insert(self.group.identity(), 0);
        self.descend(self.group.clone(), 0, trivial, &mut leaves);
        let mut pairs: Vec<ConlonPair> = Vec::new();
        for (c, lambda) in leaves {
            let images: Vec<u64> = c.generators().iter().map(|t| lambda[t]).collect();
            let (k, s, index) = cyclic_hom_kernel(&c, &images, self.exponent, self.p);
            let g = s.map(|i| c.generators()[i].clone()).unwrap_or_else(|| c.identity());
            if pairs.iter().any(|q| q.c.same_group(&c) && q.k.same_group(&k)) {
                continue;
            }
            let n_level = self.shortcut_level(&k, &g);
            pairs.push(ConlonPair { c, k, g, n_level, cyclic_index: index });
        }
        pairs
    }

    fn descend(&self, t: PermGroup, level: usize, lambda: Linear, out: &mut Vec<(PermGroup, Linear)>) {
        let top = self.series.len() - 1;
        if level == top {
            out.push((t, lambda));
            return;
        }
        let b = self.series_elements[level + 1]
            .iter()
            .find(|y| !lambda.contains_key(*y) && t.contains_unchecked(y))
            .cloned();
        let Some(b) = b else {
            return self.descend(t, level + 1, lambda, out);
        };
        let (p, e) = (self.p, self.exponent);
        let v = lambda[&b.pow(p)];
        debug_assert_eq!(v % p, 0);
        let extend = |j: u64| -> Linear {
            let beta = (v / p + j * (e / p)) % e;
            let mut mu = Linear::with_capacity(lambda.len() * p as usize);
            for (a, &la) in &lambda {
                let mut y = a.clone();
                for s in 0..p {
                    mu.insert(y.clone(), (la + s * beta) % e);
                    y = &y * &b;
                }
            }
            mu
        };
        let mu0 = extend(0);
        // T acts on the extensions through a homomorphism to Z/p
        let shifts: Vec<u64> = t
            .generators()
            .iter()
            .map(|s| {
                let conj = b.conjugate_by(s);
                ((mu0[&conj] + e - mu0[&b]) % e) / (e / p)
            })
            .collect();
        if shifts.iter().all(|&a| a == 0) {
            self.descend(t.clone(), level + 1, mu0, out);
            for j in 1..p {
                self.descend(t.clone(), level + 1, extend(j), out);
            }
        } else {
            let (t0, _, _) = cyclic_hom_kernel(&t, &shifts, p, p);
            self.descend(t0, level + 1, mu0, out);
        }
    }

    /// Largest series member inside `K` modulo which `g` is central.
    fn shortcut_level(&self, k: &PermGroup, g: &Permutation) -> Option<usize> {
        (0..self.series.len()).rev().find(|&i| {
            let n = &self.series[i];
            n.generators().iter().all(|x| k.contains_unchecked(x))
                && self.group.generators().iter().all(|t| n.contains_unchecked(&g.commutator(t)))
        })
    }

    /// Relations between class values shared by all characters of a pair.
    pub fn shortcut_plan(&self, pair: &ConlonPair) -> Option<ShortcutPlan> {
        let level = pair.n_level?;
        let c = pair.cyclic_index;
        let k = self.header().num_classes();
        let class = |x: &Permutation| self.classes.class_of_member(x).expect("element of P");
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); k];
        let mut edge = |u: usize, v: usize, w: u64| {
            adj[u].push((v, w % c));
            adj[v].push((u, (c - w % c) % c));
        };
        for (i, rec) in self.header().classes.iter().enumerate() {
            let x = &rec.representative;
            for n in &self.series_elements[level] {
                edge(i, class(&(x * n)), 0);
            }
            edge(i, class(&(x * &pair.g)), 1);
        }
        let mut component = vec![usize::MAX; k];
        let mut potential = vec![0u64; k];
        let mut roots = Vec::new();
        let mut zero = Vec::new();
        for start in 0..k {
            if component[start] != usize::MAX {
                continue;
            }
            let id = roots.len();
            roots.push(start);
            zero.push(false);
            component[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, w) in &adj[u] {
                    let pv = (potential[u] + w) % c;
                    if component[v] == usize::MAX {
                        component[v] = id;
                        potential[v] = pv;
                        queue.push_back(v);
                    } else if potential[v] != pv {
                        // chi(v) = omega^d chi(v) with omega^d != 1
                        zero[id] = true;
                    }
                }
            }
        }
        Some(ShortcutPlan { cyclic_index: c, component, potential, zero })
    }

    /// Phase two: irreducible characters induced from faithful characters of `C/K`.
    pub fn characters_from_pair(&self, pair: &ConlonPair, shortcuts: Shortcuts) -> Vec<ClassFunction> {
        let c = pair.cyclic_index;
        // r(y) with y in g^r K
        let mut coset: HashMap<Permutation, u64> = HashMap::new();
        let k_elements = pair.k.elements();
        let mut gr = self.group.identity();
        for r in 0..c {
            for y in &k_elements {
                coset.insert(&gr * y, r);
            }
            gr = &gr * &pair.g;
        }
        let plan = match shortcuts {
            Shortcuts::On => self.shortcut_plan(pair),
            Shortcuts::Off => None,
        };
        let c_order = pair.c.order();
        let mut out = Vec::new();
        for a in (0..c.max(1)).filter(|&a| gcd(a, c) == 1 || c == 1) {
            let mut known: Vec<Option<Cyclotomic>> = vec![None; self.header().num_classes()];
            for i in 0..known.len() {
                if let Some(plan) = &plan {
                    if let Some(v) = thummel_shortcut(plan, i, &known, a) {
                        known[i] = Some(v);
                        continue;
                    }
                }
                known[i] = Some(self.induce_at(i, &coset, c, a, c_order));
            }
            let values = known.into_iter().map(|v| v.expect("all classes filled")).collect();
            out.push(ClassFunction::new(values, self.header()).expect("one value per class"));
        }
        sort_canonical(&mut out);
        out
    }

    /// `|C_P(x)|/|C| * sum over y in x^P ∩ C of E(c)^(a r(y))`.
    fn induce_at(&self, class: usize, coset: &HashMap<Permutation, u64>, c: u64, a: u64, c_order: u64) -> Cyclotomic {
        let mut acc = DenseAccumulator::new(c as u32);
        let one = BigRational::from_integer(BigInt::from(1));
        let mut hit = false;
        for y in &self.class_elements[class] {
            if let Some(&r) = coset.get(y) {
                acc.add_term(a * r % c, &one);
                hit = true;
            }
        }
        if !hit {
            return Cyclotomic::zero();
        }
        let cent = self.header().classes[class].centralizer_order;
        acc.finish().scale(&BigRational::new(BigInt::from(cent), BigInt::from(c_order)))
    }

    /// All irreducible characters, canonically sorted.
    pub fn irreducibles(&self, exec: Exec, shortcuts: Shortcuts) -> Vec<ClassFunction> {
        let pairs = self.build_pairs();
        let mut all: Vec<ClassFunction> =
            exec.map(&pairs, |pair| self.characters_from_pair(pair, shortcuts)).into_iter().flatten().collect();
        sort_canonical(&mut all);
        all
    }
}

/// Kernel of the homomorphism `T -> Z/m` given by generator images, for `m` a power of `p`.
///
/// Returns the kernel, the index of a generator whose image generates the image, and
/// the image order.
fn cyclic_hom_kernel(t: &PermGroup, images: &[u64], m: u64, p: u64) -> (PermGroup, Option<usize>, u64) {
    let valuation = |mut x: u64| {
        let mut v = 1;
        while x % p == 0 && v < m {
            x /= p;
            v *= p;
        }
        v
    };
    let Some((s, _)) = images
        .iter()
        .enumerate()
        .filter(|(_, &x)| x % m != 0)
        .min_by_key(|(i, &x)| (valuation(x), *i))
    else {
        return (t.clone(), None, 1);
    };
    let pv = valuation(images[s]);
    let c = m / pv;
    let unit = (images[s] / pv) % c;
    let inv = (1..c).find(|&u| u * unit % c == 1).unwrap_or(1);
    let phi: Vec<u64> = images.iter().map(|&x| (x / pv) * inv % c).collect();
    // Schreier generators for the transversal s^0, ..., s^(c-1)
    let gens = t.generators();
    let s_perm = &gens[s];
    let powers: Vec<Permutation> = (0..c).map(|i| s_perm.pow(i)).collect();
    let mut kernel = Vec::new();
    for i in 0..c as usize {
        for (gi, g) in gens.iter().enumerate() {
            let j = (i as u64 + phi[gi]) % c;
            let h = &(&powers[i] * g) * &powers[j as usize].inverse();
            if !h.is_identity() {
                kernel.push(h);
            }
        }
    }
    let k = PermGroup::new(t.degree(), kernel).expect("same degree");
    (k, Some(s), c)
}

/// Ascending chief series, each step adding an element central modulo the previous term.
fn chief_series(p_group: &PermGroup, p: u64) -> (Vec<PermGroup>, Vec<Vec<Permutation>>) {
    let mut elements = p_group.elements();
    elements.sort();
    let mut members = vec![PermGroup::trivial(p_group.degree())];
    let mut member_elements = vec![vec![p_group.identity()]];
    let target = p_group.order();
    while members.last().unwrap().order() < target {
        let m = members.last().unwrap();
        let inside: HashSet<&Permutation> = member_elements.last().unwrap().iter().collect();
        let z = elements
            .iter()
            .find(|z| {
                !inside.contains(z)
                    && inside.contains(&z.pow(p))
                    && p_group.generators().iter().all(|t| inside.contains(&z.commutator(t)))
            })
            .expect("a p-group has nontrivial center modulo any proper normal subgroup")
            .clone();
        let mut next = Vec::with_capacity(inside.len() * p as usize);
        let mut zs = p_group.identity();
        for _ in 0..p {
            for y in member_elements.last().unwrap() {
                next.push(&zs * y);
            }
            zs = &zs * &z;
        }
        next.sort();
        let grown = m.with_generator(z);
        members.push(grown);
        member_elements.push(next);
    }
    (members, member_elements)
}

/// Value relations for the characters of one pair.
#[derive(Clone, Debug)]
pub struct ShortcutPlan {
    pub cyclic_index: u64,
    /// Component of each class in the relation graph.
    pub component: Vec<usize>,
    /// `chi(class) = omega^potential * chi(root of its component)`.
    pub potential: Vec<u64>,
    /// Components forced to vanish by an inconsistent cycle of relations.
    pub zero: Vec<bool>,
}

/// Value at `class` derived from `known` values without induction, for the character
/// with `omega = E(c)^a`; `None` when no relation applies.
pub fn thummel_shortcut(plan: &ShortcutPlan, class: usize, known: &[Option<Cyclotomic>], a: u64) -> Option<Cyclotomic> {
    let comp = plan.component[class];
    if plan.zero[comp] {
        return Some(Cyclotomic::zero());
    }
    let c = plan.cyclic_index;
    let (src, value) = known
        .iter()
        .enumerate()
        .find_map(|(j, v)| v.as_ref().filter(|_| plan.component[j] == comp).map(|v| (j, v)))?;
    let d = (plan.potential[class] + c - plan.potential[src]) % c;
    let omega = Cyclotomic::root_of_unity(c as u32, (a * d % c) as i64).expect("positive conductor");
    Some(&omega * value)
}

/// Round-robin split of pair indices over workers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkerAssignment {
    pub pairs: usize,
    pub workers: Vec<Vec<usize>>,
}

impl WorkerAssignment {
    pub fn round_robin(pairs: usize, workers: usize) -> Self {
        let workers = workers.max(1);
        let mut out = vec![Vec::new(); workers];
        for i in 0..pairs {
            out[i % workers].push(i);
        }
        WorkerAssignment { pairs, workers: out }
    }
}
