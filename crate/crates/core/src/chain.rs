//! Stabilizer chains (base and strong generating sets).
//!
//! Every strong generator carries a *label*: a second permutation that is
//! multiplied alongside it. Plain groups use empty (degree 0) labels; the
//! hybrid construction labels quotient permutations with preimages in the
//! original group so that sifting an image also produces a preimage.

use std::collections::VecDeque;

use rand::Rng;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base_point: usize,
    /// Indices into the chain's strong generators that fix all earlier base points.
    pub gens: Vec<usize>,
    /// Orbit points in breadth-first order.
    pub orbit: Vec<usize>,
    /// `slot[point]` is the position of `point` in `orbit`.
    slot: Vec<Option<usize>>,
    /// Transversal element mapping the base point to `orbit[k]`.
    trans: Vec<Permutation>,
    trans_labels: Vec<Permutation>,
    /// Schreier tree: `(parent orbit position, strong generator index)`; root has `None`.
    tree: Vec<Option<(usize, usize)>>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        Level {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            slot: vec![None; degree],
            trans: Vec::new(),
            trans_labels: Vec::new(),
            tree: Vec::new(),
        }
    }

    pub fn position(&self, point: usize) -> Option<usize> {
        self.slot[point]
    }

    pub fn transversal(&self, pos: usize) -> (&Permutation, &Permutation) {
        (&self.trans[pos], &self.trans_labels[pos])
    }

    /// Word (strong generator indices, applied left to right) for the transversal element at `pos`.
    pub fn word(&self, mut pos: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((parent, g)) = self.tree[pos] {
            w.push(g);
            pos = parent;
        }
        w.reverse();
        w
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub strong: Vec<Permutation>,
    pub labels: Vec<Permutation>,
    pub levels: Vec<Level>,
    label_degree: usize,
}

/// Result of sifting an element through the chain.
pub(crate) struct Sift {
    pub residue: Permutation,
    pub residue_label: Permutation,
    /// Level at which sifting stopped; equals the number of levels on success.
    pub level: usize,
    /// Orbit positions used at each completed level.
    pub positions: Vec<usize>,
}

impl StabChain {
    pub fn trivial(degree: usize, label_degree: usize) -> Self {
        StabChain { degree, strong: Vec::new(), labels: Vec::new(), levels: Vec::new(), label_degree }
    }

    /// Deterministic Schreier-Sims. `gens` pairs each generator with its label.
    pub fn build(degree: usize, label_degree: usize, gens: &[(Permutation, Permutation)]) -> Self {
        let mut chain = StabChain::trivial(degree, label_degree);
        for (g, l) in gens {
            if !g.is_identity() {
                chain.strong.push(g.clone());
                chain.labels.push(l.clone());
            }
        }
        chain.complete();
        chain
    }

    /// Chain for a known base and strong generating set, without Schreier-Sims.
    /// Reproduces the levels of the chain the pair was taken from.
    pub fn from_bsgs(degree: usize, base: &[usize], strong: Vec<Permutation>) -> Self {
        let labels = vec![Permutation::identity(0); strong.len()];
        let levels = base.iter().map(|&b| Level::new(b, degree)).collect();
        let mut chain = StabChain { degree, strong, labels, levels, label_degree: 0 };
        for i in 0..chain.levels.len() {
            chain.rebuild_level(i);
        }
        chain
    }

    /// Adds a generator and re-establishes the BSGS property.
    pub fn extend(&mut self, g: Permutation, label: Permutation) {
        if g.is_identity() {
            return;
        }
        let sift = self.sift(&g, &label);
        if sift.residue.is_identity() && sift.level == self.levels.len() {
            return;
        }
        self.strong.push(g);
        self.labels.push(label);
        self.complete();
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    pub fn label_identity(&self) -> Permutation {
        Permutation::identity(self.label_degree)
    }

    fn moved_point(g: &Permutation) -> Option<usize> {
        (0..g.degree()).find(|&i| g.apply(i) != i)
    }

    fn fixes_base_prefix(&self, g: &Permutation, upto: usize) -> bool {
        self.levels[..upto].iter().all(|l| g.apply(l.base_point) == l.base_point)
    }

    fn rebuild_level(&mut self, i: usize) {
        let base_point = self.levels[i].base_point;
        let mut level = Level::new(base_point, self.degree);
        level.gens = (0..self.strong.len())
            .filter(|&s| self.fixes_base_prefix(&self.strong[s], i))
            .collect();
        level.slot[base_point] = Some(0);
        level.orbit.push(base_point);
        level.trans.push(Permutation::identity(self.degree));
        level.trans_labels.push(self.label_identity());
        level.tree.push(None);
        let mut k = 0;
        while k < level.orbit.len() {
            let pt = level.orbit[k];
            for gi in 0..level.gens.len() {
                let s = level.gens[gi];
                let img = self.strong[s].apply(pt);
                if level.slot[img].is_none() {
                    level.slot[img] = Some(level.orbit.len());
                    level.orbit.push(img);
                    let t = &level.trans[k] * &self.strong[s];
                    let tl = &level.trans_labels[k] * &self.labels[s];
                    level.trans.push(t);
                    level.trans_labels.push(tl);
                    level.tree.push(Some((k, s)));
                }
            }
            k += 1;
        }
        self.levels[i] = level;
    }

    /// Sifts `g` starting from level `start`.
    fn sift_from(&self, g: &Permutation, label: &Permutation, start: usize) -> Sift {
        let mut h = g.clone();
        let mut hl = label.clone();
        let mut positions = Vec::new();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.base_point);
            match level.slot[b] {
                None => return Sift { residue: h, residue_label: hl, level: i, positions },
                Some(pos) => {
                    positions.push(pos);
                    h = &h * &level.trans[pos].inverse();
                    hl = &hl * &level.trans_labels[pos].inverse();
                }
            }
        }
        Sift { residue: h, residue_label: hl, level: self.levels.len(), positions }
    }

    pub fn sift(&self, g: &Permutation, label: &Permutation) -> Sift {
        self.sift_from(g, label, 0)
    }

    /// Brings the chain to a complete BSGS, verifying every Schreier generator.
    fn complete(&mut self) {
        // make sure every strong generator moves some base point
        for s in 0..self.strong.len() {
            if self.fixes_base_prefix(&self.strong[s], self.levels.len()) {
                let pt = Self::moved_point(&self.strong[s]).expect("non-identity generator");
                self.levels.push(Level::new(pt, self.degree));
            }
        }
        for i in 0..self.levels.len() {
            self.rebuild_level(i);
        }
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let nlev = self.levels.len();
            let orbit_len = self.levels[iu].orbit.len();
            for k in 0..orbit_len {
                let ngens = self.levels[iu].gens.len();
                for gi in 0..ngens {
                    let s = self.levels[iu].gens[gi];
                    let level = &self.levels[iu];
                    let img = self.strong[s].apply(level.orbit[k]);
                    let pos = level.slot[img].expect("orbit closed");
                    let h = &(&level.trans[k] * &self.strong[s]) * &level.trans[pos].inverse();
                    if h.is_identity() {
                        continue;
                    }
                    let hl = &(&level.trans_labels[k] * &self.labels[s])
                        * &level.trans_labels[pos].inverse();
                    let sift = self.sift_from(&h, &hl, iu + 1);
                    if sift.level == nlev && sift.residue.is_identity() {
                        continue;
                    }
                    let mut j = sift.level;
                    if j == nlev {
                        let pt = Self::moved_point(&sift.residue).expect("non-identity residue");
                        self.levels.push(Level::new(pt, self.degree));
                    }
                    self.strong.push(sift.residue);
                    self.labels.push(sift.residue_label);
                    let top = j.min(self.levels.len() - 1);
                    for l in iu + 1..=top {
                        self.rebuild_level(l);
                    }
                    if j >= self.levels.len() {
                        j = self.levels.len() - 1;
                    }
                    i = j as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
        // levels with trivial orbits carry no information
        self.levels.retain(|l| l.orbit.len() > 1);
        for i in 0..self.levels.len() {
            self.rebuild_level(i);
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> (Permutation, Permutation) {
        let mut g = Permutation::identity(self.degree);
        let mut l = self.label_identity();
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.orbit.len());
            g = &g * &level.trans[k];
            l = &l * &level.trans_labels[k];
        }
        (g, l)
    }

    /// All elements, each as `u_deepest * ... * u_first`.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for t in &level.trans {
                    next.push(g * t);
                }
            }
            out = next;
        }
        out
    }

    /// Word in strong generator indices for a member, following the transversal trees.
    pub fn word(&self, g: &Permutation) -> Option<Vec<usize>> {
        let sift = self.sift(g, &self.label_identity());
        if sift.level != self.levels.len() || !sift.residue.is_identity() {
            return None;
        }
        // g = u_last * ... * u_0
        let mut w = Vec::new();
        for (level, &pos) in self.levels.iter().zip(&sift.positions).rev() {
            w.extend(level.word(pos));
        }
        Some(w)
    }
}

/// Breadth-first orbit of `start` under `gens` with transversal elements.
pub(crate) fn orbit_with_transversal<K, F>(
    start: K,
    gens: &[Permutation],
    degree: usize,
    act: F,
) -> (Vec<K>, std::collections::HashMap<K, Permutation>)
where
    K: Clone + Eq + std::hash::Hash,
    F: Fn(&K, &Permutation) -> K,
{
    let mut trans = std::collections::HashMap::new();
    trans.insert(start.clone(), Permutation::identity(degree));
    let mut orbit = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(k) = queue.pop_front() {
        let t = trans[&k].clone();
        for g in gens {
            let img = act(&k, g);
            if !trans.contains_key(&img) {
                trans.insert(img.clone(), &t * g);
                orbit.push(img.clone());
                queue.push_back(img);
            }
        }
    }
    (orbit, trans)
}
