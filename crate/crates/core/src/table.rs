//! Character tables from Brauer induction or from the reference oracle.

use serde_json::json;

use crate::brauer::{build_brauer_subgroups, induce_from_product, BrauerSubgroup};
use crate::character::{sort_canonical, ClassFunction};
use crate::class_data::{Classes, TableHeader};
use crate::error::Result;
use crate::exec::Exec;
use crate::group::PermGroup;
use crate::lll::extract_irreducibles;
use crate::oracle::dixon_schneider;
use crate::pgroup::{PGroup, Shortcuts};

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub exec: Exec,
    pub shortcuts: Shortcuts,
}

impl Default for Options {
    fn default() -> Self {
        Options { exec: Exec::Parallel, shortcuts: Shortcuts::On }
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub header: TableHeader,
    /// Sorted by degree, then by canonical value strings.
    pub irreducibles: Vec<ClassFunction>,
}

impl CharacterTable {
    pub fn is_complete(&self) -> bool {
        self.irreducibles.len() == self.header.num_classes()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self.irreducibles.iter().map(ClassFunction::canonical_values).collect();
        json!({
            "header": self.header.to_json(),
            "irreducibles": rows,
            "found": self.irreducibles.len(),
            "expected": self.header.num_classes(),
        })
    }
}

/// Irreducible characters of each subgroup's `P`.
pub fn p_characters(subs: &[BrauerSubgroup], opts: Options) -> Result<Vec<Vec<ClassFunction>>> {
    subs.iter()
        .map(|b| {
            if b.p.is_trivial() {
                return Ok(vec![ClassFunction::trivial(b.p_header())]);
            }
            let pg = PGroup::with_classes(b.p.clone(), b.p_classes.clone())?;
            Ok(pg.irreducibles(opts.exec, opts.shortcuts))
        })
        .collect()
}

/// All characters induced from the source set, deduplicated and canonically sorted.
pub fn induced_characters(g: &PermGroup, classes: &Classes, opts: Options) -> Result<Vec<ClassFunction>> {
    let subs = build_brauer_subgroups(g, classes)?;
    let p_chars = p_characters(&subs, opts)?;
    let mut jobs = Vec::new();
    for (s, b) in subs.iter().enumerate() {
        for c in 0..p_chars[s].len() {
            for j in 0..b.n {
                jobs.push((s, c, j));
            }
        }
    }
    let header = &classes.header;
    let results = opts.exec.map(&jobs, |&(s, c, j)| induce_from_product(&subs[s], &p_chars[s][c], j, header));
    let mut out = results.into_iter().collect::<Result<Vec<_>>>()?;
    sort_canonical(&mut out);
    Ok(out)
}

/// Induction from the source set followed by lattice reduction. The result may be incomplete.
pub fn brauer_table(g: &PermGroup, classes: &Classes, opts: Options) -> Result<CharacterTable> {
    let induced = induced_characters(g, classes, opts)?;
    table_from_induced(&induced, &classes.header)
}

pub fn table_from_induced(induced: &[ClassFunction], header: &TableHeader) -> Result<CharacterTable> {
    let extraction = extract_irreducibles(induced, header)?;
    Ok(CharacterTable { header: header.clone(), irreducibles: extraction.irreducibles })
}

pub fn oracle_table(classes: &Classes) -> Result<CharacterTable> {
    Ok(CharacterTable { header: classes.header.clone(), irreducibles: dixon_schneider(classes)? })
}
