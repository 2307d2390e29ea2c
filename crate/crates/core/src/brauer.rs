//! Elementary subgroups `P x <x>` and characters induced from them.
//!
//! For each class representative `x` the source set holds `<x>` itself and
//! `P x <x>` for each non-cyclic Sylow `p`-subgroup `P` of `C(x)` with `p`
//! coprime to `|x|`. Induced values are computed from class fusion data of
//! `P x <x>` alone, without touching the elements of the ambient group.

use num::integer::{gcd, lcm};
use num::{BigInt, BigRational};

use crate::character::ClassFunction;
use crate::class_data::{Classes, TableHeader};
use crate::cyclotomic::{Cyclotomic, DenseAccumulator};
use crate::error::{Error, Result};
use crate::group::{prime_factors, PermGroup};
use crate::perm::Permutation;

/// A class of `P` and where `(xy)^M(i)` lands in the ambient group.
#[derive(Clone, Debug)]
pub struct PClass {
    pub y: Permutation,
    pub centralizer_order: u64,
    /// Ambient class of `(xy)^M(i)` for `i = 0..n`.
    pub fused: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BrauerSubgroup {
    pub x: Permutation,
    pub x_class: usize,
    pub n: u64,
    pub p: PermGroup,
    pub e: u64,
    /// Conjugacy classes of `P`, in the order used by characters of `P`.
    pub p_classes: Classes,
    pub p_class_data: Vec<PClass>,
    pub m_table: Vec<u64>,
}

impl BrauerSubgroup {
    pub fn new(g: &Classes, x_class: usize, p: PermGroup) -> Result<Self> {
        let x = g.header.classes[x_class].representative.clone();
        let n = g.header.classes[x_class].rep_order;
        let p_classes = Classes::compute(&p)?;
        let e = p_classes.header.exponent();
        let m_table = crt_exponent(n, e)?;
        let p_class_data = p_classes
            .header
            .classes
            .iter()
            .map(|rec| {
                let xy = &x * &rec.representative;
                let c = g.class_of_member(&xy).ok_or(Error::NotInGroup)?;
                Ok(PClass {
                    y: rec.representative.clone(),
                    centralizer_order: rec.centralizer_order,
                    fused: m_table.iter().map(|&m| g.header.power_class(c, m)).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BrauerSubgroup { x, x_class, n, p, e, p_classes, p_class_data, m_table })
    }

    /// `|P x <x>|`.
    pub fn order(&self) -> u64 {
        self.n * self.p.order()
    }

    pub fn p_header(&self) -> &TableHeader {
        &self.p_classes.header
    }
}

/// `M(i)` for `i = 0..n`: the residue in `[0, n e)` with `M(i) = i mod n` and `M(i) = 1 mod e`.
pub fn crt_exponent(n: u64, e: u64) -> Result<Vec<u64>> {
    if n == 0 || e == 0 || gcd(n, e) != 1 {
        return Err(Error::NotCoprime(n, e));
    }
    let modulus = n * e;
    // n * (n^-1 mod e) is 1 mod e and 0 mod n; e * (e^-1 mod n) the other way round
    let a = (n as u128 * inv_mod(n % e, e) as u128) % modulus as u128;
    let b = (e as u128 * inv_mod(e % n, n) as u128) % modulus as u128;
    Ok((0..n)
        .map(|i| ((a + b * i as u128) % modulus as u128) as u64)
        .collect())
}

fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (a as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

/// The source set: `<h>` for every class representative `h`, plus `P x <h>` for every
/// non-cyclic Sylow `p`-subgroup `P` of `C(h)` with `p` not dividing `|h|`.
///
/// All Sylow `p`-subgroups of a centralizer are conjugate in it, so one per prime suffices.
pub fn build_brauer_subgroups(g: &PermGroup, classes: &Classes) -> Result<Vec<BrauerSubgroup>> {
    let mut out = Vec::new();
    for (i, rec) in classes.header.classes.iter().enumerate() {
        out.push(BrauerSubgroup::new(classes, i, PermGroup::trivial(g.degree()))?);
        let centralizer = g.centralizer(&rec.representative)?;
        for p in prime_factors(rec.centralizer_order) {
            if rec.rep_order % p == 0 {
                continue;
            }
            let sylow = centralizer.sylow_subgroup(p);
            if !sylow.is_cyclic() {
                out.push(BrauerSubgroup::new(classes, i, sylow)?);
            }
        }
    }
    Ok(out)
}

/// Character of the ambient group induced from `chi x lambda_j`, where `chi` is a class
/// function of `P` and `lambda_j(x^i) = E(n)^(ij)`.
pub fn induce_from_product(
    b: &BrauerSubgroup,
    chi: &ClassFunction,
    u_exponent: u64,
    header: &TableHeader,
) -> Result<ClassFunction> {
    if chi.owner() != b.p_header().owner_tag() {
        return Err(Error::OwnerMismatch);
    }
    if chi.len() != b.p_class_data.len() {
        return Err(Error::ClassCountMismatch { expected: b.p_class_data.len(), found: chi.len() });
    }
    let n = b.n;
    let conductor = lcm(n as u32, chi.conductor());
    let step = (conductor as u64) / n;
    let mut acc: Vec<Option<DenseAccumulator>> = (0..header.num_classes()).map(|_| None).collect();
    for (pc, value) in b.p_class_data.iter().zip(chi.values()) {
        if value.is_zero() {
            continue;
        }
        let weight = BigRational::new(BigInt::from(1), BigInt::from(pc.centralizer_order));
        for (i, &target) in pc.fused.iter().enumerate() {
            let shift = (i as u64 * u_exponent % n) * step;
            acc[target]
                .get_or_insert_with(|| DenseAccumulator::new(conductor))
                .add_scaled(value, &weight, shift);
        }
    }
    let values = acc
        .into_iter()
        .zip(&header.classes)
        .map(|(a, rec)| match a {
            None => Cyclotomic::zero(),
            Some(a) => a
                .finish()
                .scale(&BigRational::new(BigInt::from(rec.centralizer_order), BigInt::from(n))),
        })
        .collect();
    ClassFunction::new(values, header)
}
