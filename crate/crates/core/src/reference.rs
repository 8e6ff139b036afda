//! Reference tables shipped with the crate.
//!
//! `h_family` lists the eighteen L+R-form predicates (`h1`…`h18`) that are
//! supermodular on `0<1<2<3`; `h_prime_family` lists the twenty-seven Case 1 predicates
//! (`h'1`…`h'27`).

use std::sync::OnceLock;

use serde::Deserialize;

use crate::Predicate;

#[derive(Deserialize)]
struct TableFile {
    format: u32,
    domain_size: usize,
    predicates: Vec<NamedRows>,
}

#[derive(Deserialize)]
struct NamedRows {
    name: String,
    rows: String,
}

fn load(text: &str) -> Vec<(String, Predicate)> {
    let file: TableFile = serde_json::from_str(text).expect("embedded reference data is valid JSON");
    assert_eq!(file.format, 1);
    file.predicates
        .into_iter()
        .map(|e| {
            let p = Predicate::from_rows(&e.rows).expect("embedded table");
            assert_eq!(p.domain_size(), file.domain_size);
            (e.name, p)
        })
        .collect()
}

pub fn h_family() -> &'static [(String, Predicate)] {
    static CELL: OnceLock<Vec<(String, Predicate)>> = OnceLock::new();
    CELL.get_or_init(|| load(include_str!("../data/h-family.json")))
}

pub fn h_prime_family() -> &'static [(String, Predicate)] {
    static CELL: OnceLock<Vec<(String, Predicate)>> = OnceLock::new();
    CELL.get_or_init(|| load(include_str!("../data/h-prime-family.json")))
}

/// `h_i` for `i` in `1..=18`.
pub fn h(i: usize) -> &'static Predicate {
    &h_family()[i - 1].1
}

/// `h'_i` for `i` in `1..=27`.
pub fn h_prime(i: usize) -> &'static Predicate {
    &h_prime_family()[i - 1].1
}

/// Looks up a reference predicate by name (`h5`, `h'12`).
pub fn by_name(name: &str) -> Option<&'static Predicate> {
    h_family()
        .iter()
        .chain(h_prime_family().iter())
        .find(|(n, _)| n == name)
        .map(|(_, p)| p)
}
