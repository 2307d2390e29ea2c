//! Construction of a hybrid group from a permutation group and a seed element
//! whose normal closure `N` is elementary abelian.
//!
//! `N` is identified with `F_p^k`, `G` acts on it by conjugation matrices, and an
//! orbit of the matrix group on vectors gives a permutation image of `G/N`
//! (faithful exactly when its order is `|G|/|N|`). The solvable radical of that
//! image pulls back to the radical `R` of `G`; `R` gets a PC presentation and
//! `G/R` a stabilizer chain whose strong generators carry preimages in `G`.
//! Action maps and tails are then read off by conjugating and evaluating in `G`.

use std::collections::{HashMap, HashSet, VecDeque};

use super::pc::Exponents;
use super::presentation::{evaluate, ImageRecord, PcRelator, PermOracle, PresentationRecord, QuotientRecord};
use super::word::{Gen, Word};
use super::{schreier_relations, HybridGroup};
use crate::chain::StabChain;
use crate::class_data::conjugacy_classes;
use crate::error::{Error, Result};
use crate::group::{p_part, prime_factors, PermGroup};
use crate::perm::Permutation;

/// What the construction found along the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybridReport {
    pub prime: u64,
    /// `k` with `|N| = p^k`.
    pub dimension: usize,
    /// Size of the vector orbit used for `G/N`, or `None` if the coset action was used.
    pub orbit_size: Option<usize>,
    /// Order of the permutation image of `G/N`.
    pub quotient_by_n_order: u64,
    pub radical_order: u64,
}

/// Builds the hybrid group, trying vector orbits in increasing size and falling
/// back to the action on cosets of `N` when none is faithful.
pub fn build_from_perm_group(g: &PermGroup, seed: &Permutation) -> Result<(HybridGroup, HybridReport)> {
    build(g, seed, None)
}

/// As [`build_from_perm_group`], but with an explicit orbit (index into the orbits
/// sorted by size); an unfaithful choice is an error.
pub fn build_with_orbit(g: &PermGroup, seed: &Permutation, orbit: usize) -> Result<(HybridGroup, HybridReport)> {
    build(g, seed, Some(orbit))
}

fn build(g: &PermGroup, seed: &Permutation, orbit_choice: Option<usize>) -> Result<(HybridGroup, HybridReport)> {
    let n = g.normal_closure(seed)?;
    let space = VectorSpace::new(&n)?;
    let target = g.order() / n.order();

    // G/N as a permutation group: images of G's generators
    let matrices: Vec<Vec<Vec<u32>>> = g.generators().iter().map(|s| space.matrix(s)).collect();
    let orbits = space.orbits(&matrices);
    let mut chosen: Option<(usize, Vec<Permutation>)> = None;
    let candidates: Vec<usize> = match orbit_choice {
        Some(i) if i >= orbits.len() => {
            return Err(Error::Presentation(format!("orbit {i} requested, only {} exist", orbits.len())))
        }
        Some(i) => vec![i],
        None => (0..orbits.len()).collect(),
    };
    for i in candidates {
        let perms = space.orbit_action(&orbits[i], &matrices);
        let order = PermGroup::new(orbits[i].len(), perms.clone())?.order();
        if order == target {
            chosen = Some((orbits[i].len(), perms));
            break;
        }
        if orbit_choice.is_some() {
            return Err(Error::UnfaithfulOrbit { expected: target, found: order });
        }
    }
    let (orbit_size, q_gens) = match chosen {
        Some((size, perms)) => (Some(size), perms),
        // with N trivial, G itself is the faithful image
        None if n.is_trivial() => (None, g.generators().to_vec()),
        None => (None, coset_action(g, &n)),
    };
    let q_degree = q_gens.first().map_or(1, |p| p.degree());
    let q = PermGroup::new(q_degree, q_gens.clone())?;

    // radical of G/N and its preimage
    let q_radical = solvable_radical(&q)?;
    let (radical, bar_gens) = if q_radical.is_trivial() {
        (n.clone(), q_gens)
    } else if q_radical.order() == q.order() {
        (g.clone(), vec![Permutation::identity(1); g.generators().len()])
    } else {
        let pairs: Vec<_> = q_gens.iter().cloned().zip(g.generators().iter().cloned()).collect();
        let lifter = StabChain::build(q_degree, g.degree(), &pairs);
        let mut gens = n.generators().to_vec();
        for x in q_radical.generators() {
            let sift = lifter.sift(x, &lifter.label_identity());
            gens.push(sift.residue_label.inverse());
        }
        let radical = g.subgroup(gens)?;
        let bar = coset_action(g, &radical);
        (radical, bar)
    };

    // G/R with preimages as labels
    let bar_degree = bar_gens.first().map_or(1, |p| p.degree());
    let pairs: Vec<_> = bar_gens.into_iter().zip(g.generators().iter().cloned()).collect();
    let labelled = StabChain::build(bar_degree, g.degree(), &pairs);
    let base: Vec<usize> = labelled.levels.iter().map(|l| l.base_point).collect();
    let chain = StabChain::from_bsgs(bar_degree, &base, labelled.strong.clone());
    let lifts = labelled.labels.clone();

    let pcgs = Pcgs::new(&radical, &n, &space)?;
    let m = pcgs.gens.len();
    let word = |e: &Exponents| Word::from_exponents(e).to_string();
    let mut pc_relators = Vec::new();
    for i in 0..m {
        let gi = Gen::Radical(i);
        let p = pcgs.orders[i];
        pc_relators.push(PcRelator { lhs: format!("{gi}^{p}"), rhs: word(&pcgs.exponents(&pcgs.gens[i].pow(p as u64))) });
        for j in i + 1..m {
            let c = pcgs.gens[j].conjugate_by(&pcgs.gens[i]);
            pc_relators.push(PcRelator { lhs: format!("{}^{gi}", Gen::Radical(j)), rhs: word(&pcgs.exponents(&c)) });
        }
    }
    let action: Vec<Vec<String>> = lifts
        .iter()
        .map(|l| pcgs.gens.iter().map(|x| word(&pcgs.exponents(&x.conjugate_by(l)))).collect())
        .collect();

    let oracle = PermOracle { degree: g.degree() };
    let mut quotient_relators = Vec::new();
    let mut tails = Vec::new();
    for rel in schreier_relations(&chain)? {
        if let Some(w) = rel.relator {
            let value = evaluate(&oracle, &w, &lifts, lifts.len())?;
            tails.push(word(&pcgs.exponents(&value)));
            quotient_relators.push(w.to_string());
        }
    }

    let record = PresentationRecord {
        order: g.order(),
        relative_orders: pcgs.orders.clone(),
        pc_relators,
        quotient: QuotientRecord { degree: bar_degree, base, strong_generators: chain.strong.clone() },
        quotient_relators,
        tails,
        action,
        images: Some(ImageRecord { degree: g.degree(), quotient: lifts, radical: pcgs.gens.clone() }),
    };
    let hybrid = HybridGroup::from_presentation(&record)?;
    let report = HybridReport {
        prime: space.p as u64,
        dimension: space.basis.len(),
        orbit_size,
        quotient_by_n_order: q.order(),
        radical_order: radical.order(),
    };
    Ok((hybrid, report))
}

/// The first class representative (in class order) whose normal closure is a
/// nontrivial elementary abelian group, or the identity if there is none.
pub fn default_seed(g: &PermGroup) -> Result<Permutation> {
    let classes = conjugacy_classes(g)?;
    for c in &classes.header.classes {
        let x = &c.representative;
        if x.is_identity() || !crate::group::is_prime(x.order()) {
            continue;
        }
        let n = g.normal_closure(x)?;
        if VectorSpace::new(&n).is_ok() {
            return Ok(x.clone());
        }
    }
    Ok(g.identity())
}

/// An elementary abelian permutation group identified with `F_p^k`.
struct VectorSpace {
    p: u32,
    basis: Vec<Permutation>,
    coords: HashMap<Permutation, Vec<u32>>,
}

impl VectorSpace {
    fn new(n: &PermGroup) -> Result<Self> {
        if !n.is_abelian() {
            return Err(Error::NotElementaryAbelian);
        }
        let p = n.generators().first().map_or(2, |x| x.order());
        if prime_factors(p) != vec![p] || n.generators().iter().any(|x| x.order() != p) {
            return Err(Error::NotElementaryAbelian);
        }
        // greedy basis from the generators, spanning as we go
        let mut basis: Vec<Permutation> = Vec::new();
        let mut span: HashMap<Permutation, Vec<u32>> = HashMap::from([(n.identity(), Vec::new())]);
        for x in n.generators() {
            if span.contains_key(x) {
                continue;
            }
            let mut next = HashMap::with_capacity(span.len() * p as usize);
            for (y, c) in &span {
                let mut z = y.clone();
                for t in 0..p as u32 {
                    let mut cz = c.clone();
                    cz.push(t);
                    next.insert(z.clone(), cz);
                    z = &z * x;
                }
            }
            span = next;
            basis.push(x.clone());
        }
        let k = basis.len();
        let coords = span
            .into_iter()
            .map(|(x, mut c)| {
                c.resize(k, 0);
                (x, c)
            })
            .collect();
        Ok(VectorSpace { p: p as u32, basis, coords })
    }

    /// Rows are the coordinates of the conjugated basis vectors, so `v -> v A` is `x -> s^-1 x s`.
    fn matrix(&self, s: &Permutation) -> Vec<Vec<u32>> {
        self.basis.iter().map(|b| self.coords[&b.conjugate_by(s)].clone()).collect()
    }

    fn apply(&self, v: &[u32], a: &[Vec<u32>]) -> Vec<u32> {
        let k = self.basis.len();
        let mut out = vec![0u32; k];
        for (vi, row) in v.iter().zip(a) {
            for j in 0..k {
                out[j] = (out[j] + vi * row[j]) % self.p;
            }
        }
        out
    }

    /// Orbits on nonzero vectors, sorted by size and then by smallest vector.
    fn orbits(&self, mats: &[Vec<Vec<u32>>]) -> Vec<Vec<Vec<u32>>> {
        let k = self.basis.len();
        let total = (self.p as u64).pow(k as u32);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for idx in 1..total {
            let mut v = vec![0u32; k];
            let mut r = idx;
            for c in v.iter_mut().rev() {
                *c = (r % self.p as u64) as u32;
                r /= self.p as u64;
            }
            if seen.contains(&v) {
                continue;
            }
            seen.insert(v.clone());
            let mut orbit = vec![v];
            let mut i = 0;
            while i < orbit.len() {
                for a in mats {
                    let w = self.apply(&orbit[i], a);
                    if seen.insert(w.clone()) {
                        orbit.push(w);
                    }
                }
                i += 1;
            }
            out.push(orbit);
        }
        out.sort_by_key(|o| o.len());
        out
    }

    fn orbit_action(&self, orbit: &[Vec<u32>], mats: &[Vec<Vec<u32>>]) -> Vec<Permutation> {
        let index: HashMap<&Vec<u32>, usize> = orbit.iter().enumerate().map(|(i, v)| (v, i)).collect();
        mats.iter()
            .map(|a| {
                let images = orbit.iter().map(|v| index[&self.apply(v, a)] as u32).collect();
                Permutation::from_images(images).expect("matrices permute the orbit")
            })
            .collect()
    }
}

/// Action of `G`'s generators on the right cosets of a normal subgroup.
fn coset_action(g: &PermGroup, sub: &PermGroup) -> Vec<Permutation> {
    let elements = sub.elements();
    let canon = |x: &Permutation| elements.iter().map(|h| h * x).min().expect("subgroup is nonempty");
    let mut reps = vec![g.identity()];
    let mut index = HashMap::from([(canon(&g.identity()), 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for s in g.generators() {
            let c = canon(&(&reps[i] * s));
            if !index.contains_key(&c) {
                index.insert(c.clone(), reps.len());
                queue.push_back(reps.len());
                reps.push(c);
            }
        }
    }
    g.generators()
        .iter()
        .map(|s| {
            let images = reps.iter().map(|r| index[&canon(&(r * s))] as u32).collect();
            Permutation::from_images(images).expect("cosets are permuted")
        })
        .collect()
}

/// Largest solvable normal subgroup, generated by the classes whose normal closure is solvable.
fn solvable_radical(q: &PermGroup) -> Result<PermGroup> {
    if q.is_solvable() {
        return Ok(q.clone());
    }
    let classes = conjugacy_classes(q)?;
    let mut gens = Vec::new();
    for c in &classes.header.classes {
        if c.representative.is_identity() {
            continue;
        }
        if q.normal_closure(&c.representative)?.is_solvable() {
            gens.push(c.representative.clone());
        }
    }
    q.normal_closure_of(&gens)
}

/// A polycyclic generating sequence of `R` refining `R = D_0 N >= D_1 N >= ... >= N`
/// (derived series times `N`), then a basis flag of `N`.
struct Pcgs {
    gens: Vec<Permutation>,
    orders: Vec<u32>,
    /// `series[i] = <g_i, ..., g_m>`.
    series: Vec<PermGroup>,
}

impl Pcgs {
    fn new(radical: &PermGroup, n: &PermGroup, space: &VectorSpace) -> Result<Self> {
        let mut top_down: Vec<(Permutation, u32)> = Vec::new();
        let mut derived = radical.clone();
        let mut top = radical.clone();
        while top.order() != n.order() {
            derived = derived.derived_subgroup();
            let mut gens = derived.generators().to_vec();
            gens.extend(n.generators().iter().cloned());
            let below = radical.subgroup(gens)?;
            if below.order() == top.order() {
                return Err(Error::Presentation("radical is not solvable".into()));
            }
            top_down.extend(refine_layer(&top, &below));
            top = below;
        }
        top_down.extend(space.basis.iter().map(|b| (b.clone(), space.p)));

        let (gens, orders): (Vec<_>, Vec<_>) = top_down.into_iter().unzip();
        let mut series = vec![PermGroup::trivial(radical.degree())];
        for x in gens.iter().rev() {
            let next = series.last().expect("nonempty").with_generator(x.clone());
            series.push(next);
        }
        series.reverse();
        debug_assert_eq!(series[0].order(), radical.order());
        Ok(Pcgs { gens, orders, series })
    }

    /// Exponents of a member of `R`, by peeling off one generator power per step.
    fn exponents(&self, x: &Permutation) -> Exponents {
        let mut x = x.clone();
        let mut out = Vec::with_capacity(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let ginv = g.inverse();
            let mut e = 0;
            while !self.series[i + 1].contains_unchecked(&x) {
                x = &ginv * &x;
                e += 1;
                assert!(e < self.orders[i], "element lies in the radical");
            }
            out.push(e);
        }
        out
    }
}

/// Generators `a_1, ..., a_r` (top first) with `<below, a_j, ..., a_r>` of prime index in
/// the next, for an abelian section `top / below`. Smaller primes end up on top.
fn refine_layer(top: &PermGroup, below: &PermGroup) -> Vec<(Permutation, u32)> {
    let mut h = below.clone();
    let mut added = Vec::new();
    let mut primes = prime_factors(top.order() / below.order());
    primes.reverse();
    for q in primes {
        for x in top.generators() {
            let Some(y) = p_part(x, q) else { continue };
            while !h.contains_unchecked(&y) {
                // y^(q^(b-1)) for the least b with y^(q^b) in h has order q modulo h
                let mut a = y.clone();
                loop {
                    let next = a.pow(q);
                    if h.contains_unchecked(&next) {
                        break;
                    }
                    a = next;
                }
                h = h.with_generator(a.clone());
                added.push((a, q as u32));
            }
        }
    }
    added.reverse();
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn s4_pipeline() {
        let g = groups::symmetric(4);
        let seed = Permutation::from_cycles(4, "(0 1)(2 3)").unwrap();
        let (h, report) = build_from_perm_group(&g, &seed).unwrap();
        assert_eq!((report.prime, report.dimension), (2, 2));
        assert_eq!(report.orbit_size, Some(3));
        assert_eq!(report.quotient_by_n_order, 6);
        // S4 is solvable, so the radical is everything
        assert_eq!(report.radical_order, 24);
        assert_eq!(h.order(), 24);
        assert_eq!(h.radical().relative_orders, vec![2, 3, 2, 2]);
    }

    #[test]
    fn affine_pipeline() {
        let g = groups::affine_2_4_a5();
        let seed = g.generators()[2].clone();
        let (h, report) = build_from_perm_group(&g, &seed).unwrap();
        assert_eq!((report.prime, report.dimension), (2, 4));
        assert_eq!(report.orbit_size, Some(5));
        assert_eq!(report.radical_order, 16);
        assert_eq!(h.order(), 960);
        assert_eq!(h.quotient_order(), 60);
    }

    #[test]
    fn unfaithful_orbit_is_rejected() {
        // the Klein group acts trivially on the vectors of a normal subgroup of order 2
        let g = groups::c2_x_c4();
        let seed = g.elements().into_iter().find(|x| x.order() == 2).unwrap();
        let (h, _) = build_from_perm_group(&g, &seed).unwrap();
        assert_eq!(h.order(), 8);
        let err = build_with_orbit(&g, &seed, 0);
        assert!(matches!(err, Err(Error::UnfaithfulOrbit { .. })));
    }

    #[test]
    fn elementary_abelian_group_is_pure_pc() {
        let g = groups::dihedral(2);
        let seed = g.generators()[0].clone();
        let (h, _) = build_from_perm_group(&g, &seed).unwrap();
        assert_eq!(h.quotient_order(), 1);
        let rec = h.export_presentation();
        assert!(rec.quotient_relators.is_empty() && rec.action.is_empty() && rec.tails.is_empty());
        assert!(!rec.pc_relators.is_empty());
    }

    #[test]
    fn default_seeds() {
        let seed = default_seed(&groups::symmetric(4)).unwrap();
        assert_eq!(seed.cycle_lengths().iter().filter(|&&l| l == 2).count(), 2);
        assert!(default_seed(&groups::alternating(5)).unwrap().is_identity());
        let (h, _) = build_from_perm_group(&groups::alternating(5), &Permutation::identity(5)).unwrap();
        assert_eq!((h.quotient_order(), h.radical().order()), (60, 1));
    }

    #[test]
    fn non_abelian_closure_is_rejected() {
        let g = groups::symmetric(4);
        let seed = Permutation::from_cycles(4, "(0 1)").unwrap();
        assert!(matches!(build_from_perm_group(&g, &seed), Err(Error::NotElementaryAbelian)));
    }
}
