//! Polycyclic presentations and collection.
//!
//! Elements are exponent vectors `e` standing for `g_1^e_1 ... g_m^e_m` with
//! `0 <= e_i < p_i`. Products are brought to this form by collection from the
//! left, using only the power and conjugate relations.

use crate::error::{Error, Result};

/// Exponent vector of a collected word.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub relative_orders: Vec<u32>,
    /// `power[i]` is `g_i^p_i`, a collected word in the later generators.
    pub power: Vec<Exponents>,
    /// `conjugate[i][j]` (for `j > i`) is `g_i^-1 g_j g_i`; entries with `j <= i` are unused.
    pub conjugate: Vec<Vec<Exponents>>,
}

impl PcPresentation {
    /// Validates shapes and that every right-hand side only involves later generators.
    pub fn new(relative_orders: Vec<u32>, power: Vec<Exponents>, conjugate: Vec<Vec<Exponents>>) -> Result<Self> {
        let m = relative_orders.len();
        let bad = |msg: &str| Err(Error::Presentation(msg.to_string()));
        if power.len() != m || conjugate.len() != m {
            return bad("relation tables do not match the number of generators");
        }
        if relative_orders.iter().any(|&p| p < 2) {
            return bad("relative orders must be at least 2");
        }
        for i in 0..m {
            if !later_only(&power[i], i, &relative_orders) {
                return bad("power relation uses an earlier generator");
            }
            if conjugate[i].len() != m {
                return bad("conjugate table is not square");
            }
            for j in i + 1..m {
                if !later_only(&conjugate[i][j], i, &relative_orders) {
                    return bad("conjugate relation uses an earlier generator");
                }
            }
        }
        Ok(PcPresentation { relative_orders, power, conjugate })
    }

    pub fn len(&self) -> usize {
        self.relative_orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relative_orders.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.relative_orders.iter().map(|&p| p as u64).product()
    }

    pub fn identity(&self) -> Exponents {
        vec![0; self.len()]
    }

    pub fn generator(&self, i: usize) -> Exponents {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    /// Multiplies `u` on the right by the word `letters` (generator index, positive exponent).
    pub fn collect(&self, u: &mut Exponents, letters: &[(usize, u32)]) {
        let m = self.len();
        let mut stack: Vec<(usize, u32)> = letters.iter().rev().copied().collect();
        while let Some((j, e)) = stack.pop() {
            if e == 0 {
                continue;
            }
            if e > 1 {
                stack.push((j, e - 1));
            }
            // u * g_j = g_1^u_1 ... g_j^(u_j + 1) * prod_(k > j) (g_k^g_j)^u_k
            let tail: Vec<(usize, u32)> = (j + 1..m).filter(|&k| u[k] > 0).map(|k| (k, u[k])).collect();
            for k in j + 1..m {
                u[k] = 0;
            }
            u[j] += 1;
            let overflow = u[j] == self.relative_orders[j];
            if overflow {
                u[j] = 0;
            }
            for &(k, count) in tail.iter().rev() {
                let w = letters_of(&self.conjugate[j][k]);
                for _ in 0..count {
                    stack.extend(w.iter().rev());
                }
            }
            if overflow {
                stack.extend(letters_of(&self.power[j]).iter().rev());
            }
        }
    }

    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Exponents {
        let mut u = a.to_vec();
        self.collect(&mut u, &letters_of(b));
        u
    }

    pub fn inverse(&self, a: &[u32]) -> Exponents {
        // right-multiply by g_i^(p_i - w_i) to clear position i, recording the letters
        let mut w = a.to_vec();
        let mut letters = Vec::new();
        for i in 0..self.len() {
            if w[i] != 0 {
                let e = self.relative_orders[i] - w[i];
                self.collect(&mut w, &[(i, e)]);
                letters.push((i, e));
            }
        }
        let mut out = self.identity();
        self.collect(&mut out, &letters);
        out
    }

    pub fn pow(&self, a: &[u32], e: u64) -> Exponents {
        let mut out = self.identity();
        for _ in 0..e {
            out = self.multiply(&out, a);
        }
        out
    }

    /// Image of `a` under the endomorphism sending `g_i` to `images[i]`.
    pub fn apply_map(&self, images: &[Exponents], a: &[u32]) -> Exponents {
        let mut out = self.identity();
        for (i, &e) in a.iter().enumerate() {
            for _ in 0..e {
                self.collect(&mut out, &letters_of(&images[i]));
            }
        }
        out
    }

    /// Whether `images` defines an endomorphism, i.e. satisfies every relation.
    pub fn respects_relations(&self, images: &[Exponents]) -> bool {
        let m = self.len();
        for i in 0..m {
            let lhs = self.pow(&images[i], self.relative_orders[i] as u64);
            if lhs != self.apply_map(images, &self.power[i]) {
                return false;
            }
            for j in i + 1..m {
                let gi = &images[i];
                let lhs = self.multiply(&self.multiply(&self.inverse(gi), &images[j]), gi);
                if lhs != self.apply_map(images, &self.conjugate[i][j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks that the presentation is consistent by comparing both bracketings of
    /// the standard overlap words.
    pub fn is_consistent(&self) -> bool {
        let m = self.len();
        let g = |i: usize| self.generator(i);
        for k in 0..m {
            for j in 0..k {
                for i in 0..j {
                    let left = self.multiply(&self.multiply(&g(k), &g(j)), &g(i));
                    let right = self.multiply(&g(k), &self.multiply(&g(j), &g(i)));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        for j in 0..m {
            let pj = self.relative_orders[j] as u64;
            let power = self.pow(&g(j), pj);
            if self.multiply(&g(j), &power) != self.multiply(&power, &g(j)) {
                return false;
            }
            for i in 0..j {
                let pi = self.relative_orders[i] as u64;
                let left = self.multiply(&power, &g(i));
                let right = self.multiply(&self.pow(&g(j), pj - 1), &self.multiply(&g(j), &g(i)));
                if left != right {
                    return false;
                }
                let left = self.multiply(&g(j), &self.pow(&g(i), pi));
                let right = self.multiply(&self.multiply(&g(j), &g(i)), &self.pow(&g(i), pi - 1));
                if left != right {
                    return false;
                }
            }
        }
        true
    }
}

/// Letters `(i, e_i)` of a collected word, skipping zero exponents.
pub fn letters_of(e: &[u32]) -> Vec<(usize, u32)> {
    e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect()
}

fn later_only(e: &[u32], i: usize, orders: &[u32]) -> bool {
    e.len() == orders.len() && e[..=i].iter().all(|&x| x == 0) && e.iter().zip(orders).all(|(&x, &p)| x < p)
}
