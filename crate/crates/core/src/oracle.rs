//! Reference character tables by the Dixon-Schneider method.
//!
//! The class sums span a commutative algebra whose common eigenvectors are the
//! central characters `omega_chi(C) = |C| chi(g_C) / chi(1)`. Working modulo a
//! prime `p = 1 mod exp(G)` with `p > 2 sqrt|G|`, eigenvectors of a random
//! combination of class matrices give `omega_chi` mod `p`, the degree follows
//! from the first orthogonality relation, and each value is lifted to a
//! cyclotomic integer from its eigenvalue multiplicities.

use rand::Rng;

use crate::character::{sort_canonical, ClassFunction};
use crate::class_data::Classes;
use crate::cyclotomic::DenseAccumulator;
use crate::error::{Error, Result};
use crate::group::{is_prime, prime_factors, rng};

pub const ORACLE_LIMIT: u64 = 100_000;

/// Irreducible characters, canonically sorted; `|G|` must not exceed [`ORACLE_LIMIT`].
pub fn dixon_schneider(classes: &Classes) -> Result<Vec<ClassFunction>> {
    let header = &classes.header;
    let order = header.group_order;
    if order > ORACLE_LIMIT {
        return Err(Error::TooLarge(order));
    }
    let k = header.num_classes();
    let e = header.exponent();
    let p = choose_prime(order, e);
    let elements = classes.class_elements();
    let inverse_class: Vec<usize> = header
        .classes
        .iter()
        .map(|r| classes.class_of_member(&r.representative.inverse()).expect("inverse in group"))
        .collect();

    // (M_r)[s][t] = #{x in C_r : x^-1 z_t in C_s}
    let mut mats = vec![vec![vec![0u64; k]; k]; k];
    for (r, class_r) in elements.iter().enumerate() {
        for t in 0..k {
            let z = &header.classes[t].representative;
            for x in class_r {
                let s = classes.class_of_member(&(&x.inverse() * z)).expect("product in group");
                mats[r][s][t] += 1;
            }
        }
    }
    for m in &mut mats {
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v %= p;
            }
        }
    }

    let vectors = common_eigenvectors(&mats, p)?;
    let z = primitive_root(p);
    let zeta_e = pow_mod(z, (p - 1) / e, p);
    let sqrt_order = (order as f64).sqrt() as u64 + 1;
    let mut out = Vec::with_capacity(k);
    for v in vectors {
        let scale = inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|x| mul_mod(*x, scale, p)).collect();
        let mut s = 0;
        for t in 0..k {
            let term = mul_mod(mul_mod(omega[t], omega[inverse_class[t]], p), inv_mod(header.classes[t].size % p, p), p);
            s = (s + term) % p;
        }
        let d_sq = mul_mod(order % p, inv_mod(s, p), p);
        let d = (1..=sqrt_order)
            .find(|d| d * d % p == d_sq)
            .ok_or_else(|| Error::Oracle("degree is not a square root".into()))?;
        let chi_mod: Vec<u64> = (0..k)
            .map(|t| mul_mod(mul_mod(omega[t], d, p), inv_mod(header.classes[t].size % p, p), p))
            .collect();
        let mut values = Vec::with_capacity(k);
        for t in 0..k {
            let o = header.classes[t].rep_order;
            let zeta_o = pow_mod(zeta_e, e / o, p);
            let inv_o = inv_mod(o % p, p);
            let mut acc = DenseAccumulator::new(o as u32);
            for j in 0..o {
                let mut m = 0;
                for kk in 0..o {
                    let c = chi_mod[header.power_class(t, kk)];
                    let w = pow_mod(zeta_o, (o - (j * kk) % o) % o, p);
                    m = (m + mul_mod(c, w, p)) % p;
                }
                let m = mul_mod(m, inv_o, p);
                if m > d {
                    return Err(Error::Oracle(format!("multiplicity {m} exceeds degree {d}")));
                }
                if m > 0 {
                    acc.add_term(j, &num::BigRational::from_integer(m.into()));
                }
            }
            values.push(acc.finish());
        }
        out.push(ClassFunction::new(values, header)?);
    }
    sort_canonical(&mut out);
    if out.len() != k {
        return Err(Error::Oracle("duplicate characters".into()));
    }
    Ok(out)
}

fn choose_prime(order: u64, e: u64) -> u64 {
    let bound = 2 * ((order as f64).sqrt() as u64 + 1);
    let mut p = e + 1;
    while p <= bound || !is_prime(p) {
        p += e;
    }
    p
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

/// Eigenvectors of a random combination of the matrices, retried until its
/// eigenvalues are distinct.
fn common_eigenvectors(mats: &[Vec<Vec<u64>>], p: u64) -> Result<Vec<Vec<u64>>> {
    let k = mats.len();
    if k == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut rng = rng();
    for _ in 0..64 {
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let mut m = vec![vec![0u64; k]; k];
        for (a, mat) in coeffs.iter().zip(mats) {
            for i in 0..k {
                for j in 0..k {
                    m[i][j] = (m[i][j] + mul_mod(*a, mat[i][j], p)) % p;
                }
            }
        }
        let poly = char_poly(&m, p);
        let roots: Vec<u64> = (0..p).filter(|&x| eval(&poly, x, p) == 0).collect();
        if roots.len() != k {
            continue;
        }
        return Ok(roots
            .into_iter()
            .map(|lambda| {
                let mut a = m.clone();
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] = (row[i] + p - lambda) % p;
                }
                kernel_vector(a, p)
            })
            .collect());
    }
    Err(Error::Oracle("class matrix eigenvalues did not separate".into()))
}

fn eval(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Characteristic polynomial (coefficients from the constant term up) via Hessenberg form.
fn char_poly(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h[i][col] != 0) else { continue };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = inv_mod(h[col + 1][col], p);
        for i in col + 2..n {
            let u = mul_mod(h[i][col], inv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = mul_mod(u, h[col + 1][j], p);
                h[i][j] = (h[i][j] + p - t) % p;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[i], p);
                row[col + 1] = (row[col + 1] + t) % p;
            }
        }
    }
    // p_m = (x - h_mm) p_(m-1) - sum_i h_im (prod_(j=i+1..m) h_(j,j-1)) p_(i-1), 1-based
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m1 in 1..=n {
        let prev = &polys[m1 - 1];
        let mut next = vec![0u64; m1 + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - mul_mod(h[m1 - 1][m1 - 1], c, p)) % p;
        }
        let mut t = 1u64;
        for i in (1..m1).rev() {
            t = mul_mod(t, h[i][i - 1], p);
            let coef = mul_mod(h[i - 1][m1 - 1], t, p);
            for (j, &c) in polys[i - 1].iter().enumerate() {
                next[j] = (next[j] + p - mul_mod(coef, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

/// A nonzero vector in the kernel of a singular matrix.
fn kernel_vector(mut a: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..n).find(|&i| a[i][col] != 0) else { continue };
        a.swap(piv, row);
        let inv = inv_mod(a[row][col], p);
        for v in a[row].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..n {
            if i != row && a[i][col] != 0 {
                let u = a[i][col];
                for j in 0..n {
                    let t = mul_mod(u, a[row][j], p);
                    a[i][j] = (a[i][j] + p - t) % p;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let free = (0..n).find(|c| !pivots.iter().any(|&(_, pc)| pc == *c)).expect("singular matrix");
    let mut v = vec![0u64; n];
    v[free] = 1;
    for &(r, c) in &pivots {
        v[c] = (p - a[r][free]) % p;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::check_orthogonality;
    use crate::cyclotomic::Cyclotomic;
    use crate::groups;

    #[test]
    fn char_poly_of_small_matrix() {
        // [[2, 1], [1, 2]] has characteristic polynomial x^2 - 4x + 3
        let p = 101;
        assert_eq!(char_poly(&[vec![2, 1], vec![1, 2]], p), vec![3, p - 4, 1]);
    }

    #[test]
    fn s3_and_a5_tables() {
        let c = Classes::compute(&groups::symmetric(3)).unwrap();
        let t = dixon_schneider(&c).unwrap();
        let degrees: Vec<String> = t.iter().map(|x| x.degree().to_string()).collect();
        assert_eq!(degrees, vec!["1", "1", "2"]);
        assert!(check_orthogonality(&t, &c.header).unwrap());

        let c = Classes::compute(&groups::alternating(5)).unwrap();
        let t = dixon_schneider(&c).unwrap();
        let degrees: Vec<String> = t.iter().map(|x| x.degree().to_string()).collect();
        assert_eq!(degrees, vec!["1", "3", "3", "4", "5"]);
        assert!(check_orthogonality(&t, &c.header).unwrap());
        // 3-dimensional characters take the values (1 ± sqrt 5)/2 on 5-elements
        let five = c.header.classes.iter().position(|r| r.rep_order == 5).unwrap();
        let v = &t[1].values()[five];
        let golden = &Cyclotomic::root_of_unity(5, 1).unwrap() + &Cyclotomic::root_of_unity(5, 4).unwrap();
        assert!(v == &(-&golden) || v == &(&Cyclotomic::one() + &golden));
    }

    #[test]
    fn corpus_tables_are_orthogonal() {
        for (name, g) in groups::corpus() {
            let c = Classes::compute(&g).unwrap();
            let t = dixon_schneider(&c).unwrap();
            assert!(check_orthogonality(&t, &c.header).unwrap(), "{name}");
        }
    }
}
