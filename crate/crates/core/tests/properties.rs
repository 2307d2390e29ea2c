//! Randomized checks of the invariants each module promises.

use std::sync::OnceLock;

use num::{BigInt, BigRational, One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctbl::brauer::{build_brauer_subgroups, induce_from_product};
use ctbl::character::{inner_product_rational, norm, ClassFunction};
use ctbl::charstore::{self, decode, encode, Dictionary, StoreHeader};
use ctbl::class_data::Classes;
use ctbl::cyclotomic::Cyclotomic;
use ctbl::groups;
use ctbl::hybrid::{self, HybridGroup};
use ctbl::lll::{determinant, extract_irreducibles, lll_reduce, CharLattice};
use ctbl::table::{self, Options};
use ctbl::{PermGroup, Permutation};

struct Entry {
    name: &'static str,
    group: PermGroup,
    classes: Classes,
}

fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        groups::corpus()
            .into_iter()
            .map(|(name, group)| {
                let classes = Classes::compute(&group).unwrap();
                Entry { name, group, classes }
            })
            .collect()
    })
}

fn affine_hybrid() -> &'static HybridGroup {
    static H: OnceLock<HybridGroup> = OnceLock::new();
    H.get_or_init(|| {
        let g = groups::affine_2_4_a5();
        let seed = hybrid::default_seed(&g).unwrap();
        hybrid::build_from_perm_group(&g, &seed).unwrap().0
    })
}

fn primes_dividing(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|d| p % d != 0)).collect()
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn class_function(header: &ctbl::class_data::TableHeader, terms: &[Vec<(u32, u32, i64, i64)>]) -> ClassFunction {
    let values = (0..header.num_classes())
        .map(|c| {
            let mut z = Cyclotomic::zero();
            for &(n, k, a, b) in &terms[c % terms.len()] {
                z = &z + &Cyclotomic::root_of_unity(n, (k % n) as i64).unwrap().scale(&rational(a, b));
            }
            z
        })
        .collect();
    ClassFunction::new(values, header).unwrap()
}

#[test]
fn orbit_stabilizer_and_sylow_orders() {
    for e in corpus() {
        let order = e.group.order();
        for rec in &e.classes.header.classes {
            assert_eq!(rec.size * rec.centralizer_order, order, "{}", e.name);
            assert_eq!(e.group.centralizer(&rec.representative).unwrap().order(), rec.centralizer_order);
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let mut part = 1;
            while order % (part * p) == 0 {
                part *= p;
            }
            assert_eq!(e.group.sylow_subgroup(p).order(), part, "{} p = {p}", e.name);
        }
    }
}

#[test]
fn power_maps_commute_and_divide_orders() {
    for e in corpus() {
        let h = &e.classes.header;
        let primes = primes_dividing(h.group_order);
        for c in 0..h.num_classes() {
            let ord = h.classes[c].rep_order;
            for &p in &primes {
                let pc = h.power_class(c, p);
                assert_eq!(h.classes[pc].rep_order, ord / num::integer::gcd(ord, p), "{}", e.name);
                for &q in &primes {
                    let a = h.power_class(h.power_class(c, p), q);
                    assert_eq!(a, h.power_class(h.power_class(c, q), p));
                    assert_eq!(a, h.power_class(c, p * q));
                }
            }
        }
    }
}

#[test]
fn induced_characters_have_expected_degree_and_integral_norm() {
    for e in corpus().iter().filter(|e| e.group.order() <= 2000) {
        let h = &e.classes.header;
        let subs = build_brauer_subgroups(&e.group, &e.classes).unwrap();
        let p_chars = table::p_characters(&subs, Options::default()).unwrap();
        for (b, chars) in subs.iter().zip(&p_chars) {
            for chi in chars {
                for j in 0..b.n {
                    let ind = induce_from_product(b, chi, j, h).unwrap();
                    let index = BigRational::new(h.group_order.into(), (b.p.order() * b.n).into());
                    assert_eq!(ind.degree(), &chi.degree().scale(&index), "{}", e.name);
                    let n = norm(&ind, h).unwrap();
                    assert!(n.is_integer() && n.is_positive(), "{}: norm {n}", e.name);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_words_are_members(idx in 0..12usize, word in prop::collection::vec(0..8usize, 0..40)) {
        let g = &corpus()[idx].group;
        let gens = g.generators();
        let mut x = g.identity();
        for i in word {
            if !gens.is_empty() {
                x = &x * &gens[i % gens.len()];
            }
        }
        prop_assert!(g.contains(&x).unwrap());
    }

    #[test]
    fn normal_closure_is_conjugation_invariant(idx in 0..12usize, seed: u64) {
        let e = &corpus()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = e.group.random_element(&mut rng);
        let h = e.group.random_element(&mut rng);
        let a = e.group.normal_closure(&x).unwrap();
        let b = e.group.normal_closure(&x.conjugate_by(&h)).unwrap();
        prop_assert!(a.same_group(&b));
    }

    #[test]
    fn class_of_is_constant_on_conjugates(idx in 0..12usize, seed: u64) {
        let e = &corpus()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (c, rec) in e.classes.header.classes.iter().enumerate() {
            let h = e.group.random_element(&mut rng);
            prop_assert_eq!(e.classes.class_of(&e.group, &rec.representative.conjugate_by(&h)).unwrap(), c);
        }
    }

    #[test]
    fn hybrid_collection_is_confluent(seed: u64) {
        let h = affine_hybrid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..25 {
            let a = h.random_element(&mut rng);
            let b = h.random_element(&mut rng);
            let c = h.random_element(&mut rng);
            prop_assert_eq!(h.multiply(&h.multiply(&a, &b), &c), h.multiply(&a, &h.multiply(&b, &c)));
            let pc = h.radical();
            let (x, y, z) = (&a.radical, &b.radical, &c.radical);
            prop_assert_eq!(pc.multiply(&pc.multiply(x, y), z), pc.multiply(x, &pc.multiply(y, z)));
        }
    }

    #[test]
    fn rle_round_trip(
        idx in 0..12usize,
        terms in prop::collection::vec(
            prop::collection::vec((1..=24u32, 0..24u32, -6..=6i64, 1..=4i64), 0..3),
            1..6,
        ),
    ) {
        let h = &corpus()[idx].classes.header;
        let chi = class_function(h, &terms);
        let mut dict = Dictionary::default();
        let rec = encode(&chi, &mut dict);
        prop_assert_eq!(decode(&rec, &dict, &StoreHeader::of(h)).unwrap(), chi);
    }

    #[test]
    fn merge_ignores_segment_order(cuts in prop::collection::vec(0..40usize, 1..5), rotate in 0..5usize) {
        let e = corpus().iter().find(|e| e.name == "S4").unwrap();
        let h = &e.classes.header;
        let pool: Vec<ClassFunction> = (0..40)
            .map(|i| class_function(h, &[vec![(8, i as u32, (i % 7) as i64 - 3, 1)], vec![(3, 1, 1, 1 + (i % 2) as i64)]]))
            .collect();
        let header = StoreHeader::of(h);
        let dir = tempfile::tempdir().unwrap();
        let mut segments = Vec::new();
        for (k, &cut) in cuts.iter().enumerate() {
            let path = dir.path().join(format!("{k}.ctbl"));
            charstore::write_store(&path, &header, &pool[cut / 2..cut]).unwrap();
            segments.push(path);
        }
        let forward = dir.path().join("forward.ctbl");
        charstore::merge(&segments, &forward).unwrap();
        let len = segments.len();
        segments.rotate_left(rotate % len);
        segments.reverse();
        let shuffled = dir.path().join("shuffled.ctbl");
        charstore::merge(&segments, &shuffled).unwrap();
        prop_assert_eq!(std::fs::read(&forward).unwrap(), std::fs::read(&shuffled).unwrap());
    }

    #[test]
    fn lll_is_unimodular_and_emits_irreducibles(entries in prop::collection::vec(-3..=3i64, 25)) {
        let e = corpus().iter().find(|e| e.name == "S4").unwrap();
        let h = &e.classes.header;
        let irr = table::oracle_table(&e.classes).unwrap().irreducibles;
        let m: Vec<Vec<BigInt>> = entries.chunks(5).map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        prop_assume!(determinant(&m) != BigInt::from(0));
        let basis: Vec<ClassFunction> = m
            .iter()
            .map(|row| {
                row.iter().zip(&irr).fold(ClassFunction::new(vec![Cyclotomic::zero(); h.num_classes()], h).unwrap(), |acc, (k, chi)| {
                    acc.add(&chi.scale(&BigRational::from_integer(k.clone()))).unwrap()
                })
            })
            .collect();
        let reduced = lll_reduce(&CharLattice::new(basis.clone(), h).unwrap());
        prop_assert!(determinant(&reduced.transform).abs().is_one());

        let found = extract_irreducibles(&basis, h).unwrap().irreducibles;
        prop_assert!(found.len() <= h.num_classes());
        for (i, chi) in found.iter().enumerate() {
            prop_assert!(chi.degree().to_string().parse::<u64>().is_ok_and(|d| d > 0));
            for (j, psi) in found.iter().enumerate() {
                let want = if i == j { BigRational::one() } else { rational(0, 1) };
                prop_assert_eq!(inner_product_rational(chi, psi, h).unwrap(), want);
            }
        }
    }
}

#[test]
fn hybrid_elements_map_into_the_group() {
    let g = groups::affine_2_4_a5();
    let h = affine_hybrid();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let a = h.random_element(&mut rng);
        let p: Permutation = h.to_permutation(&a).unwrap();
        assert!(g.contains(&p).unwrap());
    }
}
