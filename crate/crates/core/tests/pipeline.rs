use ctbl::class_data::Classes;
use ctbl::character::check_orthogonality;
use ctbl::groups;
use ctbl::table::{brauer_table, oracle_table, Options};

#[test]
fn brauer_matches_oracle_on_corpus() {
    for (name, g) in groups::corpus() {
        let t0 = std::time::Instant::now();
        let c = Classes::compute(&g).unwrap();
        let brauer = brauer_table(&g, &c, Options::default()).unwrap();
        let oracle = oracle_table(&c).unwrap();
        eprintln!("{name}: {} of {} in {:?}", brauer.irreducibles.len(), c.num_classes(), t0.elapsed());
        assert!(brauer.is_complete(), "{name} incomplete");
        assert_eq!(brauer.irreducibles, oracle.irreducibles, "{name}");
        assert!(check_orthogonality(&brauer.irreducibles, &c.header).unwrap());
    }
}
