//! Named permutation groups and the JSON group file format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::PermGroup;
use crate::perm::Permutation;

/// `{"degree": int, "generators": [[images...], ...]}` with 0-based points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupFile {
    pub fn from_group(g: &PermGroup) -> Self {
        GroupFile { degree: g.degree(), generators: g.generators().to_vec() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        PermGroup::new(self.degree, self.generators.clone())
    }
}

fn perm(degree: usize, cycles: &str) -> Permutation {
    Permutation::from_cycles(degree, cycles).expect("valid cycle literal")
}

fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images((0..degree).map(|i| f(i) as u32).collect()).expect("bijection")
}

fn build(degree: usize, gens: Vec<Permutation>) -> PermGroup {
    PermGroup::new(degree, gens).expect("generators share the degree")
}

pub fn symmetric(n: usize) -> PermGroup {
    if n < 2 {
        return PermGroup::trivial(n.max(1));
    }
    build(n, vec![perm(n, "(0 1)"), from_fn(n, |i| (i + 1) % n)])
}

pub fn alternating(n: usize) -> PermGroup {
    if n < 3 {
        return PermGroup::trivial(n.max(1));
    }
    let gens = (2..n).map(|k| perm(n, &format!("(0 1 {k})"))).collect();
    build(n, gens)
}

pub fn cyclic(n: usize) -> PermGroup {
    build(n, vec![from_fn(n, |i| (i + 1) % n)])
}

/// Dihedral group of order `2n` on `n` points.
pub fn dihedral(n: usize) -> PermGroup {
    build(n, vec![from_fn(n, |i| (i + 1) % n), from_fn(n, |i| (n - i) % n)])
}

/// `C2 x C4` on 6 points.
pub fn c2_x_c4() -> PermGroup {
    build(6, vec![perm(6, "(0 1)"), perm(6, "(2 3 4 5)")])
}

/// Quaternion group in its right regular action on 8 points.
///
/// Point `4s + u` is the unit `(-1)^s * [1, i, j, k][u]`.
pub fn quaternion8() -> PermGroup {
    // unit products as (sign, unit) for u, v in {1, i, j, k}
    const TABLE: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let right_mul = |g: usize| {
        from_fn(8, move |x| {
            let (s1, u1) = (x / 4, x % 4);
            let (s2, u2) = (g / 4, g % 4);
            let (s3, u3) = TABLE[u1][u2];
            4 * ((s1 + s2 + s3) % 2) + u3
        })
    };
    build(8, vec![right_mul(1), right_mul(2)])
}

/// `SL(2,3)` acting on the 8 nonzero row vectors of `F_3^2`.
pub fn sl_2_3() -> PermGroup {
    let vectors: Vec<(usize, usize)> =
        (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&v| v != (0, 0)).collect();
    let index = |v: (usize, usize)| vectors.iter().position(|&w| w == v).unwrap();
    let act = |m: [[usize; 2]; 2]| {
        from_fn(8, |i| {
            let (a, b) = vectors[i];
            index(((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3))
        })
    };
    build(8, vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])])
}

/// The affine group `2^4:A5` on the 16 even-weight vectors of `F_2^5`, with `A5`
/// permuting coordinates and `2^4` acting by translation.
pub fn affine_2_4_a5() -> PermGroup {
    let points: Vec<u32> = (0u32..32).filter(|v| v.count_ones() % 2 == 0).collect();
    let index = |v: u32| points.iter().position(|&w| w == v).unwrap();
    let coord_perm = |sigma: [u32; 5]| {
        from_fn(16, |i| {
            let v = points[i];
            let w = (0..5).filter(|&c| v >> c & 1 == 1).fold(0u32, |acc, c| acc | 1 << sigma[c]);
            index(w)
        })
    };
    let translate = |t: u32| from_fn(16, |i| index(points[i] ^ t));
    build(
        16,
        vec![
            coord_perm([1, 2, 0, 3, 4]),
            coord_perm([0, 1, 3, 4, 2]),
            translate(0b00011),
            translate(0b00110),
            translate(0b01100),
            translate(0b11000),
        ],
    )
}

/// Sylow 2-subgroup of `S8`, the iterated wreath product `C2 wr C2 wr C2` of order 128.
pub fn sylow2_s8() -> PermGroup {
    build(8, vec![perm(8, "(0 1)"), perm(8, "(0 2)(1 3)"), perm(8, "(0 4)(1 5)(2 6)(3 7)")])
}

/// The named test corpus.
pub fn corpus() -> Vec<(&'static str, PermGroup)> {
    vec![
        ("S3", symmetric(3)),
        ("S4", symmetric(4)),
        ("A4", alternating(4)),
        ("A5", alternating(5)),
        ("S5", symmetric(5)),
        ("D8", dihedral(4)),
        ("Q8", quaternion8()),
        ("SL(2,3)", sl_2_3()),
        ("C6", cyclic(6)),
        ("C2xC4", c2_x_c4()),
        ("2^4:A5", affine_2_4_a5()),
        ("Syl2(S8)", sylow2_s8()),
    ]
}
