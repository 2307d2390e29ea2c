//! Character-table headers: conjugacy classes, representative orders,
//! centralizer orders and prime power maps.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{is_prime, rng, PermGroup};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub representative: Permutation,
    pub size: u64,
    pub rep_order: u64,
    pub centralizer_order: u64,
}

/// The character-independent half of a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub group_order: u64,
    pub classes: Vec<ClassRecord>,
    /// Prime `p` to the class map `c -> class of rep(c)^p`. Only primes are stored.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
}

/// Header JSON emitted by the CLI.
#[derive(Serialize, Deserialize)]
struct HeaderJson {
    group_order: u64,
    classes: Vec<ClassJson>,
    powermap: BTreeMap<String, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    order: u64,
    size: u64,
    centralizer_order: u64,
}

impl TableHeader {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1, |acc, c| num::integer::lcm(acc, c.rep_order))
    }

    /// Class of `rep(c)^k`, composed from the stored prime maps via `(x^i)^j = x^(ij)`.
    pub fn power_class(&self, c: usize, k: u64) -> usize {
        let mut k = k % self.classes[c].rep_order;
        if k == 0 {
            return 0;
        }
        let mut c = c;
        let mut p = 2;
        while k > 1 {
            while k % p == 0 {
                c = self.power_maps[&p][c];
                k /= p;
            }
            p += 1;
        }
        c
    }

    /// The JSON record `{group_order, classes: [{order, size, centralizer_order}], powermap}`.
    pub fn to_json(&self) -> serde_json::Value {
        let h = HeaderJson {
            group_order: self.group_order,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    order: c.rep_order,
                    size: c.size,
                    centralizer_order: c.centralizer_order,
                })
                .collect(),
            powermap: self.power_maps.iter().map(|(p, m)| (p.to_string(), m.clone())).collect(),
        };
        serde_json::to_value(h).expect("header serializes")
    }

    /// SHA-256 of the header JSON; identifies the group for stores and class functions.
    pub fn fingerprint(&self) -> [u8; 32] {
        let text = serde_json::to_string(&self.to_json()).expect("header serializes");
        Sha256::digest(text.as_bytes()).into()
    }

    /// SHA-256 of the ordered class representatives.
    pub fn ordering_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for c in &self.classes {
            for &i in c.representative.images() {
                h.update(i.to_le_bytes());
            }
            h.update([0xff]);
        }
        h.finalize().into()
    }

    pub fn owner_tag(&self) -> u64 {
        let f = self.fingerprint();
        u64::from_le_bytes(f[..8].try_into().unwrap())
    }
}

/// Conjugacy classes of a group together with a fusion map for [`Classes::class_of`].
#[derive(Clone, Debug)]
pub struct Classes {
    pub header: TableHeader,
    lookup: HashMap<Permutation, usize>,
    /// `(order, cycle type)` to candidate classes.
    invariants: HashMap<(u64, Vec<usize>), Vec<usize>>,
}

const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Computes conjugacy classes. Classes found from random elements are closed under
/// conjugation and the run stops once their sizes sum to `|G|`; any remainder is filled
/// by enumerating elements.
pub fn conjugacy_classes(g: &PermGroup) -> Result<Classes> {
    let order = g.order();
    if order > 10 * ENUMERATION_LIMIT {
        return Err(Error::TooLarge(order));
    }
    let mut lookup: HashMap<Permutation, usize> = HashMap::new();
    let mut found: Vec<Vec<Permutation>> = Vec::new();
    let mut covered = 0u64;
    let add_class = |x: &Permutation, lookup: &mut HashMap<Permutation, usize>, found: &mut Vec<Vec<Permutation>>| {
        if lookup.contains_key(x) {
            return 0;
        }
        let class = g.conjugacy_class(x);
        let idx = found.len();
        for y in &class {
            lookup.insert(y.clone(), idx);
        }
        let n = class.len() as u64;
        found.push(class);
        n
    };
    covered += add_class(&g.identity(), &mut lookup, &mut found);
    let mut rng = rng();
    let mut misses = 0;
    while covered < order && misses < 200 {
        let x = g.random_element(&mut rng);
        let n = add_class(&x, &mut lookup, &mut found);
        if n == 0 {
            misses += 1;
        } else {
            misses = 0;
            covered += n;
        }
    }
    if covered < order {
        if order > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(order));
        }
        for x in g.elements() {
            covered += add_class(&x, &mut lookup, &mut found);
            if covered == order {
                break;
            }
        }
    }
    debug_assert_eq!(covered, order);

    let mut records: Vec<(ClassRecord, Vec<Permutation>)> = found
        .into_iter()
        .map(|class| {
            let rep = class.iter().min().expect("nonempty class").clone();
            let size = class.len() as u64;
            let rec = ClassRecord {
                rep_order: rep.order(),
                representative: rep,
                size,
                centralizer_order: order / size,
            };
            (rec, class)
        })
        .collect();
    records.sort_by(|(a, _), (b, _)| {
        (!a.representative.is_identity(), a.rep_order, a.size, &a.representative).cmp(&(
            !b.representative.is_identity(),
            b.rep_order,
            b.size,
            &b.representative,
        ))
    });
    let mut lookup = HashMap::with_capacity(order as usize);
    let mut invariants: HashMap<(u64, Vec<usize>), Vec<usize>> = HashMap::new();
    let mut classes = Vec::with_capacity(records.len());
    for (idx, (rec, members)) in records.into_iter().enumerate() {
        for y in members {
            lookup.insert(y, idx);
        }
        invariants
            .entry((rec.rep_order, rec.representative.cycle_lengths()))
            .or_default()
            .push(idx);
        classes.push(rec);
    }
    Ok(Classes {
        header: TableHeader { group_order: order, classes, power_maps: BTreeMap::new() },
        lookup,
        invariants,
    })
}

impl Classes {
    /// Classes with all prime power maps filled in.
    pub fn compute(g: &PermGroup) -> Result<Classes> {
        let mut c = conjugacy_classes(g)?;
        c.derive_power_maps(g);
        Ok(c)
    }

    pub fn num_classes(&self) -> usize {
        self.header.classes.len()
    }

    /// Class index of a group element; errors if `x` is not in the group.
    pub fn class_of(&self, g: &PermGroup, x: &Permutation) -> Result<usize> {
        if !g.contains(x)? {
            return Err(Error::NotInGroup);
        }
        self.class_of_member(x).ok_or(Error::NotInGroup)
    }

    /// Class index of an element already known to lie in the group.
    pub fn class_of_member(&self, x: &Permutation) -> Option<usize> {
        if x.is_identity() {
            return Some(0);
        }
        let key = (x.order(), x.cycle_lengths());
        match self.invariants.get(&key).map(Vec::as_slice) {
            Some([only]) => Some(*only),
            Some(_) => self.lookup.get(x).copied(),
            None => None,
        }
    }

    /// Elements of every class, in class order.
    pub fn class_elements(&self) -> Vec<Vec<Permutation>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (x, &c) in &self.lookup {
            out[c].push(x.clone());
        }
        for v in &mut out {
            v.sort();
        }
        out
    }

    /// Fills the prime power maps for every prime up to the group exponent.
    ///
    /// A class of order `o` under the prime `p` only depends on `p mod o`; whenever that
    /// residue factors into smaller primes the map is composed from the stored maps,
    /// and only the remaining entries are computed by powering representatives.
    pub fn derive_power_maps(&mut self, _g: &PermGroup) {
        let exponent = self.header.exponent();
        let mut maps: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for p in (2..=exponent.max(2)).filter(|&p| is_prime(p)) {
            let mut map = Vec::with_capacity(self.num_classes());
            for (c, rec) in self.header.classes.iter().enumerate() {
                let r = p % rec.rep_order;
                let image = if r == 0 {
                    0
                } else if r == 1 {
                    c
                } else if r < p {
                    compose(&maps, c, r)
                } else {
                    self.class_of_member(&rec.representative.pow(p)).expect("power lies in the group")
                };
                map.push(image);
            }
            maps.insert(p, map);
        }
        self.header.power_maps = maps;
    }
}

fn compose(maps: &BTreeMap<u64, Vec<usize>>, mut c: usize, mut k: u64) -> usize {
    let mut p = 2;
    while k > 1 {
        while k % p == 0 {
            c = maps[&p][c];
            k /= p;
        }
        p += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    fn sizes(c: &Classes) -> Vec<u64> {
        c.header.classes.iter().map(|r| r.size).collect()
    }

    #[test]
    fn class_sizes() {
        let s3 = Classes::compute(&groups::symmetric(3)).unwrap();
        assert_eq!(sizes(&s3), vec![1, 3, 2]);
        let s4 = Classes::compute(&groups::symmetric(4)).unwrap();
        let mut s = sizes(&s4);
        assert_eq!(s.iter().sum::<u64>(), 24);
        s.sort();
        assert_eq!(s, vec![1, 3, 6, 6, 8]);
        let q8 = Classes::compute(&groups::quaternion8()).unwrap();
        let mut s = sizes(&q8);
        s.sort();
        assert_eq!(s, vec![1, 1, 2, 2, 2]);
        let mut cent: Vec<u64> = s4.header.classes.iter().map(|r| r.centralizer_order).collect();
        cent.sort();
        assert_eq!(cent, vec![3, 4, 4, 8, 24]);
    }

    #[test]
    fn class_of_basics() {
        let g = groups::symmetric(4);
        let c = Classes::compute(&g).unwrap();
        assert_eq!(c.class_of(&g, &g.identity()).unwrap(), 0);
        let x = Permutation::from_cycles(4, "(0 1)(2 3)").unwrap();
        let idx = c.class_of(&g, &x).unwrap();
        assert_eq!(c.header.classes[idx].size, 3);
        let a5 = groups::alternating(5);
        let ca5 = Classes::compute(&a5).unwrap();
        let odd = Permutation::from_cycles(5, "(0 1)").unwrap();
        assert!(matches!(ca5.class_of(&a5, &odd), Err(Error::NotInGroup)));
    }

    #[test]
    fn class_of_is_conjugation_invariant() {
        let mut r = rng();
        for (_, g) in groups::corpus() {
            let c = Classes::compute(&g).unwrap();
            for (i, rec) in c.header.classes.iter().enumerate() {
                for _ in 0..100 {
                    let h = g.random_element(&mut r);
                    assert_eq!(c.class_of(&g, &rec.representative.conjugate_by(&h)).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn ordering_is_identity_then_order_size() {
        let c = Classes::compute(&groups::symmetric(4)).unwrap();
        let keys: Vec<(u64, u64)> = c.header.classes.iter().map(|r| (r.rep_order, r.size)).collect();
        assert_eq!(keys, vec![(1, 1), (2, 3), (2, 6), (3, 8), (4, 6)]);
    }

    #[test]
    fn power_maps_of_a5() {
        let c = Classes::compute(&groups::alternating(5)).unwrap();
        let h = &c.header;
        let fives: Vec<usize> = (0..h.num_classes()).filter(|&i| h.classes[i].rep_order == 5).collect();
        assert_eq!(fives.len(), 2);
        // x -> x^2 exchanges the two classes of 5-elements, x -> x^4 = x^-1 fixes them
        assert_eq!(h.power_maps[&2][fives[0]], fives[1]);
        assert_eq!(h.power_maps[&2][fives[1]], fives[0]);
        assert_eq!(h.power_class(fives[0], 4), fives[0]);
        assert_eq!(h.power_maps[&5][fives[0]], 0);
    }

    #[test]
    fn power_map_of_order_six_element() {
        let g = groups::cyclic(6);
        let c = Classes::compute(&g).unwrap();
        let h = &c.header;
        let six = (0..h.num_classes()).find(|&i| h.classes[i].rep_order == 6).unwrap();
        let sq = h.power_maps[&2][six];
        assert_eq!(h.classes[sq].rep_order, 3);
        let direct = c.class_of(&g, &h.classes[six].representative.pow(2)).unwrap();
        assert_eq!(sq, direct);
    }

    #[test]
    fn rational_group_power_maps_fix_classes() {
        // S4 has a rational table: coprime power maps fix every class
        let c = Classes::compute(&groups::symmetric(4)).unwrap();
        for (&p, map) in &c.header.power_maps {
            for (i, rec) in c.header.classes.iter().enumerate() {
                if rec.rep_order % p != 0 {
                    assert_eq!(map[i], i);
                }
            }
        }
    }

    #[test]
    fn power_maps_agree_with_direct_powers() {
        for (name, g) in groups::corpus() {
            let c = Classes::compute(&g).unwrap();
            let h = &c.header;
            let e = h.exponent();
            for (i, rec) in h.classes.iter().enumerate() {
                for k in 1..=e {
                    let direct = c.class_of_member(&rec.representative.pow(k)).unwrap();
                    assert_eq!(h.power_class(i, k), direct, "{name} class {i} power {k}");
                }
                for (&p, map) in &h.power_maps {
                    let o = rec.rep_order;
                    assert_eq!(h.classes[map[i]].rep_order, o / num::integer::gcd(o, p));
                    for (&q, map_q) in &h.power_maps {
                        assert_eq!(map_q[map[i]], map[map_q[i]]);
                        let _ = q;
                    }
                }
            }
        }
    }
}
