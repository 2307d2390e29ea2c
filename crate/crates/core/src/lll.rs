//! Irreducible characters from a lattice of virtual characters.
//!
//! Norm-1 virtual characters are exactly the irreducibles up to sign. The
//! lattice spanned by the input is brought to an independent basis by integer
//! echelon reduction, reduced with integral LLL (`delta = 3/4`) on its exact
//! Gram matrix, and scanned for norm-1 vectors. Found irreducibles are
//! projected out and the process repeats until a pass finds nothing new.

use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::character::{inner_product_rational, sort_canonical, ClassFunction};
use crate::class_data::TableHeader;
use crate::cyclotomic::{phi, Cyclotomic};
use crate::error::{Error, Result};

pub use crate::character::{inner_product, norm};

/// Independent virtual characters with their Gram matrix.
#[derive(Clone, Debug)]
pub struct CharLattice {
    pub basis: Vec<ClassFunction>,
    pub gram: Vec<Vec<BigInt>>,
}

impl CharLattice {
    /// Lattice with the given vectors as basis; they must be linearly independent.
    pub fn new(basis: Vec<ClassFunction>, header: &TableHeader) -> Result<Self> {
        let gram = gram_matrix(&basis, header)?;
        Ok(CharLattice { basis, gram })
    }

    /// Lattice spanned by arbitrary, possibly dependent, virtual characters.
    pub fn spanned_by(vectors: &[ClassFunction], header: &TableHeader) -> Result<Self> {
        Self::new(echelon_basis(vectors, header)?, header)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

fn gram_matrix(basis: &[ClassFunction], header: &TableHeader) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let ip = inner_product_rational(&basis[i], &basis[j], header)?;
            if !ip.is_integer() {
                return Err(Error::NotVirtualCharacter);
            }
            gram[i][j] = ip.to_integer();
            gram[j][i] = gram[i][j].clone();
        }
    }
    Ok(gram)
}

/// Integer coordinates of class functions over the Zumbroich basis at conductor `m`.
fn integer_rows(vectors: &[ClassFunction], m: u32) -> Result<Vec<Vec<BigInt>>> {
    vectors
        .iter()
        .map(|v| {
            let mut row = Vec::with_capacity(v.len() * phi(m) as usize);
            for value in v.values() {
                for c in value.basis_coordinates(m) {
                    if !c.is_integer() {
                        return Err(Error::NotVirtualCharacter);
                    }
                    row.push(c.to_integer());
                }
            }
            Ok(row)
        })
        .collect()
}

fn from_integer_row(row: &[BigInt], m: u32, like: &ClassFunction) -> ClassFunction {
    let width = phi(m) as usize;
    let values = row
        .chunks(width)
        .map(|chunk| {
            let coords: Vec<BigRational> = chunk.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            Cyclotomic::from_basis_coordinates(m, &coords)
        })
        .collect();
    ClassFunction::with_owner(values, like.len(), like.owner()).expect("same class count")
}

/// A basis of the integral span of `vectors`, by row echelon reduction over the integers.
pub fn echelon_basis(vectors: &[ClassFunction], header: &TableHeader) -> Result<Vec<ClassFunction>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    for v in vectors {
        if v.len() != header.num_classes() || v.owner() != first.owner() {
            return Err(Error::OwnerMismatch);
        }
    }
    let m = vectors.iter().fold(1, |acc, v| num::integer::lcm(acc, v.conductor()));
    // rows sorted by pivot column
    let mut echelon: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for mut v in integer_rows(vectors, m)? {
        let mut idx = 0;
        loop {
            let Some(col) = v.iter().position(|x| !x.is_zero()) else { break };
            while idx < echelon.len() && echelon[idx].0 < col {
                idx += 1;
            }
            if idx == echelon.len() || echelon[idx].0 != col {
                echelon.insert(idx, (col, v));
                break;
            }
            let row = &mut echelon[idx].1;
            let (a, b) = (row[col].clone(), v[col].clone());
            let e = a.extended_gcd(&b);
            let (ra, rb) = (&a / &e.gcd, &b / &e.gcd);
            let new_row: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &e.x * r + &e.y * x).collect();
            let rest: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &ra * x - &rb * r).collect();
            *row = new_row;
            v = rest;
        }
    }
    Ok(echelon.into_iter().map(|(_, row)| from_integer_row(&row, m, first)).collect())
}

/// Result of LLL reduction: the reduced lattice and the unimodular transform
/// (row `i` holds the coefficients of reduced vector `i` in the input basis).
#[derive(Clone, Debug)]
pub struct Reduced {
    pub lattice: CharLattice,
    pub transform: Vec<Vec<BigInt>>,
}

/// Integral LLL with `delta = 3/4` on the Gram matrix.
pub fn lll_reduce(lattice: &CharLattice) -> Reduced {
    let n = lattice.rank();
    let g0 = &lattice.gram;
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n <= 1 {
        return Reduced { lattice: lattice.clone(), transform: h };
    }
    let dot = |h: &[Vec<BigInt>], a: usize, b: usize| -> BigInt {
        let mut s = BigInt::zero();
        for (i, hi) in h[a].iter().enumerate() {
            if hi.is_zero() {
                continue;
            }
            let mut t = BigInt::zero();
            for (j, hj) in h[b].iter().enumerate() {
                if !hj.is_zero() {
                    t += &g0[i][j] * hj;
                }
            }
            s += hi * t;
        }
        s
    };
    // d[0] = 1, d[i + 1] is the Gram determinant of the first i + 1 vectors
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&h, 0, 0);
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&h, k, j);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k + 1] = u;
                }
            }
        }
        loop {
            reduce(&mut h, &mut lam, &d, k, k - 1);
            let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
            let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swap(&mut h, &mut lam, &mut d, k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    reduce(&mut h, &mut lam, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    let basis: Vec<ClassFunction> = h.iter().map(|row| combine(&lattice.basis, row)).collect();
    let gram: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| dot(&h, i, j)).collect()).collect();
    Reduced { lattice: CharLattice { basis, gram }, transform: h }
}

/// Size reduction of `b_k` against `b_l`.
fn reduce(h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if (BigInt::from(2) * &lam[k][l]).abs() <= *dl {
        return;
    }
    // nearest integer to lam / dl
    let q = (BigInt::from(2) * &lam[k][l] + dl).div_floor(&(BigInt::from(2) * dl));
    let hl = h[l].clone();
    for (x, y) in h[k].iter_mut().zip(&hl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    h.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = b;
}

fn combine(basis: &[ClassFunction], coeffs: &[BigInt]) -> ClassFunction {
    let mut acc: Option<ClassFunction> = None;
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let term = b.scale(&BigRational::from_integer(c.clone()));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).expect("same group"),
        });
    }
    acc.unwrap_or_else(|| basis[0].scale(&BigRational::zero()))
}

/// Irreducibles found so far and the lattice that remains.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub irreducibles: Vec<ClassFunction>,
    pub remainder: CharLattice,
}

impl Extraction {
    pub fn is_complete(&self, header: &TableHeader) -> bool {
        self.irreducibles.len() == header.num_classes()
    }
}

/// Repeats (project out found irreducibles, reduce, collect norm-1 vectors) until a
/// pass finds nothing new. The result may be incomplete.
pub fn extract_irreducibles(vectors: &[ClassFunction], header: &TableHeader) -> Result<Extraction> {
    let mut found: Vec<ClassFunction> = Vec::new();
    let mut current: Vec<ClassFunction> = vectors.to_vec();
    loop {
        let mut next = Vec::with_capacity(current.len());
        for v in &current {
            let p = project_out(v, &found, header)?;
            if !p.is_zero() {
                next.push(p);
            }
        }
        sort_canonical(&mut next);
        let mut new: Vec<ClassFunction> = Vec::new();
        for v in &next {
            if norm(v, header)?.is_one() {
                push_new(&mut new, &found, normalize_sign(v));
            }
        }
        let lattice = CharLattice::spanned_by(&next, header)?;
        let reduced = lll_reduce(&lattice).lattice;
        for (i, v) in reduced.basis.iter().enumerate() {
            if reduced.gram[i][i].is_one() {
                push_new(&mut new, &found, normalize_sign(v));
            }
        }
        if new.is_empty() || found.len() + new.len() > header.num_classes() {
            let remainder = CharLattice::new(
                reduced.basis.into_iter().filter(|v| !norm(v, header).map(|n| n.is_one()).unwrap_or(false)).collect(),
                header,
            )?;
            sort_canonical(&mut found);
            return Ok(Extraction { irreducibles: found, remainder });
        }
        // a norm-1 vector may appear twice in one pass, with different signs
        sort_canonical(&mut new);
        found.extend(new);
        current = reduced.basis;
    }
}

fn push_new(new: &mut Vec<ClassFunction>, found: &[ClassFunction], v: ClassFunction) {
    if !found.contains(&v) && !new.contains(&v) {
        new.push(v);
    }
}

fn normalize_sign(v: &ClassFunction) -> ClassFunction {
    match v.degree().try_rational() {
        Some(d) if d.is_negative() => v.neg(),
        _ => v.clone(),
    }
}

/// `v - sum <v, chi> chi` over orthonormal `chis`.
fn project_out(v: &ClassFunction, chis: &[ClassFunction], header: &TableHeader) -> Result<ClassFunction> {
    let mut out = v.clone();
    for chi in chis {
        let c = inner_product_rational(v, chi, header)?;
        if !c.is_zero() {
            out = out.sub(&chi.scale(&c))?;
        }
    }
    Ok(out)
}

/// Exact determinant by fraction-free elimination; used to certify unimodularity.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_data::Classes;
    use crate::groups;

    fn s3() -> TableHeader {
        Classes::compute(&groups::symmetric(3)).unwrap().header
    }

    fn cf(h: &TableHeader, v: &[i64]) -> ClassFunction {
        ClassFunction::new(v.iter().map(|&x| Cyclotomic::from_int(x)).collect(), h).unwrap()
    }

    fn int_gram(rows: &[[i64; 2]; 2]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn identity_gram_is_unchanged() {
        let h = s3();
        let l = CharLattice::new(vec![cf(&h, &[1, 1, 1]), cf(&h, &[1, -1, 1])], &h).unwrap();
        let r = lll_reduce(&l);
        assert_eq!(r.lattice.gram, int_gram(&[[1, 0], [0, 1]]));
        assert_eq!(determinant(&r.transform).abs(), BigInt::one());
    }

    #[test]
    fn size_reduction_splits_sum() {
        let h = s3();
        let chi = cf(&h, &[1, 1, 1]);
        let psi = cf(&h, &[2, 0, -1]);
        let l = CharLattice::new(vec![chi.clone(), chi.add(&psi).unwrap()], &h).unwrap();
        let r = lll_reduce(&l);
        assert_eq!(r.lattice.basis, vec![chi, psi]);
    }

    #[test]
    fn already_reduced_gram_stays() {
        // chi1 + chi2 and chi1 + chi3 have Gram [[2, 1], [1, 2]]
        let h = s3();
        let a = cf(&h, &[2, 0, 2]);
        let b = cf(&h, &[3, 1, 0]);
        let l = CharLattice::new(vec![a, b], &h).unwrap();
        assert_eq!(l.gram, int_gram(&[[2, 1], [1, 2]]));
        let r = lll_reduce(&l);
        assert_eq!(r.lattice.gram, int_gram(&[[2, 1], [1, 2]]));
    }

    #[test]
    fn norm_four_yields_nothing() {
        let h = s3();
        let e = extract_irreducibles(&[cf(&h, &[4, 0, -2])], &h).unwrap();
        assert!(e.irreducibles.is_empty());
        assert_eq!(e.remainder.rank(), 1);
    }

    #[test]
    fn trivial_character_is_emitted() {
        let h = s3();
        let e = extract_irreducibles(&[cf(&h, &[1, 1, 1]), cf(&h, &[3, 1, 0])], &h).unwrap();
        assert!(e.irreducibles.contains(&cf(&h, &[1, 1, 1])));
    }

    #[test]
    fn regular_character_of_s3() {
        let h = s3();
        // permutation characters on cosets of subgroups of orders 1, 2, 3 and 6
        let inputs = [cf(&h, &[6, 0, 0]), cf(&h, &[3, 1, 0]), cf(&h, &[2, 0, 2]), cf(&h, &[1, 1, 1])];
        let e = extract_irreducibles(&inputs, &h).unwrap();
        assert_eq!(e.irreducibles, vec![cf(&h, &[1, -1, 1]), cf(&h, &[1, 1, 1]), cf(&h, &[2, 0, -1])]);
        assert!(e.is_complete(&h));
    }

    #[test]
    fn echelon_basis_drops_dependencies() {
        let h = s3();
        let a = cf(&h, &[1, 1, 1]);
        let b = cf(&h, &[2, 0, -1]);
        let c = a.add(&b).unwrap();
        let basis = echelon_basis(&[a, b, c.clone(), c], &h).unwrap();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn determinant_small() {
        let m = int_gram(&[[2, 1], [1, 1]]);
        assert_eq!(determinant(&m), BigInt::one());
    }
}
