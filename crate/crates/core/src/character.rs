//! Class functions and the character inner product.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Zero};

use crate::class_data::TableHeader;
use crate::cyclotomic::{Cyclotomic, DenseAccumulator};
use crate::error::{Error, Result};

/// Values on the conjugacy classes of one group, in the header's class order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    values: Vec<Cyclotomic>,
    owner: u64,
}

impl ClassFunction {
    pub fn new(values: Vec<Cyclotomic>, header: &TableHeader) -> Result<Self> {
        Self::with_owner(values, header.num_classes(), header.owner_tag())
    }

    pub(crate) fn with_owner(values: Vec<Cyclotomic>, classes: usize, owner: u64) -> Result<Self> {
        if values.len() != classes {
            return Err(Error::ClassCountMismatch { expected: classes, found: values.len() });
        }
        Ok(ClassFunction { values, owner })
    }

    pub fn trivial(header: &TableHeader) -> Self {
        ClassFunction { values: vec![Cyclotomic::one(); header.num_classes()], owner: header.owner_tag() }
    }

    /// The regular character: `|G|` at the identity, zero elsewhere.
    pub fn regular(header: &TableHeader) -> Self {
        let mut values = vec![Cyclotomic::zero(); header.num_classes()];
        values[0] = Cyclotomic::from_int(header.group_order as i64);
        ClassFunction { values, owner: header.owner_tag() }
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the identity class.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn conductor(&self) -> u32 {
        self.values.iter().fold(1, |acc, v| num::integer::lcm(acc, v.conductor()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_zero)
    }

    pub fn canonical_values(&self) -> Vec<String> {
        self.values.iter().map(Cyclotomic::canonical).collect()
    }

    pub fn galois(&self, a: i64) -> Self {
        ClassFunction { values: self.values.iter().map(|v| v.galois(a)).collect(), owner: self.owner }
    }

    pub fn neg(&self) -> Self {
        ClassFunction { values: self.values.iter().map(|v| -v).collect(), owner: self.owner }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ClassFunction { values: self.values.iter().map(|v| v.scale(r)).collect(), owner: self.owner }
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.check_same(other)?;
        Ok(ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            owner: self.owner,
        })
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.check_same(other)?;
        Ok(ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            owner: self.owner,
        })
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if self.owner != other.owner {
            return Err(Error::OwnerMismatch);
        }
        if self.values.len() != other.values.len() {
            return Err(Error::ClassCountMismatch { expected: self.values.len(), found: other.values.len() });
        }
        Ok(())
    }

    /// Ordering by degree, then lexicographically by canonical value strings.
    pub fn canonical_cmp(&self, other: &ClassFunction) -> Ordering {
        let da = self.degree().try_rational();
        let db = other.degree().try_rational();
        da.cmp(&db).then_with(|| self.canonical_values().cmp(&other.canonical_values()))
    }
}

/// Sorts by degree then values and removes duplicates.
pub fn sort_canonical(chars: &mut Vec<ClassFunction>) {
    let mut keyed: Vec<(Option<BigRational>, Vec<String>, ClassFunction)> = chars
        .drain(..)
        .map(|c| (c.degree().try_rational(), c.canonical_values(), c))
        .collect();
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    chars.extend(keyed.into_iter().map(|(_, _, c)| c));
}

/// `<chi, psi> = |G|^-1 sum_c |c| chi(c) conj(psi(c))`.
pub fn inner_product(chi: &ClassFunction, psi: &ClassFunction, header: &TableHeader) -> Result<Cyclotomic> {
    chi.check_same(psi)?;
    if chi.len() != header.num_classes() {
        return Err(Error::ClassCountMismatch { expected: header.num_classes(), found: chi.len() });
    }
    let n = num::integer::lcm(chi.conductor(), psi.conductor());
    let mut acc = DenseAccumulator::new(n);
    for ((a, b), rec) in chi.values.iter().zip(&psi.values).zip(&header.classes) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let prod = a * &b.conjugate();
        acc.add_scaled(&prod, &BigRational::from_integer(BigInt::from(rec.size)), 0);
    }
    acc.finish().div_rational(&BigRational::from_integer(BigInt::from(header.group_order)))
}

/// Inner product that must be rational, as it is for characters.
pub fn inner_product_rational(chi: &ClassFunction, psi: &ClassFunction, header: &TableHeader) -> Result<BigRational> {
    inner_product(chi, psi, header)?.try_rational().ok_or(Error::NotRational)
}

pub fn norm(chi: &ClassFunction, header: &TableHeader) -> Result<BigRational> {
    inner_product_rational(chi, chi, header)
}

/// Checks both orthogonality relations and `sum chi(1)^2 = |G|` for a full table.
pub fn check_orthogonality(table: &[ClassFunction], header: &TableHeader) -> Result<bool> {
    let k = header.num_classes();
    if table.len() != k {
        return Ok(false);
    }
    for (i, a) in table.iter().enumerate() {
        for (j, b) in table.iter().enumerate().skip(i) {
            let ip = inner_product(a, b, header)?;
            let expect = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            if ip != expect {
                return Ok(false);
            }
        }
    }
    let mut degree_sq = BigRational::zero();
    for chi in table {
        let d = chi.degree().try_rational().ok_or(Error::NotRational)?;
        degree_sq += &d * &d;
    }
    if degree_sq != BigRational::from_integer(BigInt::from(header.group_order)) {
        return Ok(false);
    }
    // column relations: sum_chi chi(g) conj(chi(h)) = delta_{gh} |C(g)|
    for g in 0..k {
        for h in g..k {
            let mut s = Cyclotomic::zero();
            for chi in table {
                s = &s + &(&chi.values[g] * &chi.values[h].conjugate());
            }
            let expect = if g == h {
                Cyclotomic::from_int(header.classes[g].centralizer_order as i64)
            } else {
                Cyclotomic::zero()
            };
            if s != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
