//! Canonical machine-readable forms of maps and jets.

use polydyn_core::linearize::TruncatedMap;
use polydyn_core::{Coefficient, PolyMap, Polynomial, Rational};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

/// Name, dimension and per-component terms in ascending graded-lex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapRecord {
    pub name: String,
    pub dimension: usize,
    pub components: Vec<Vec<Term>>,
}

pub fn terms<C: Coefficient>(p: &Polynomial<C>) -> Vec<Term> {
    p.terms().map(|(m, c)| Term { exponents: m.exponents().to_vec(), coefficient: c.render() }).collect()
}

pub fn map_record<C: Coefficient>(f: &PolyMap<C>) -> MapRecord {
    MapRecord {
        name: f.name().unwrap_or("map").to_string(),
        dimension: f.dim(),
        components: f.components().iter().map(terms).collect(),
    }
}

pub fn map_json(f: &PolyMap<Rational>) -> String {
    serde_json::to_string_pretty(&map_record(f)).expect("map record serializes")
}

/// `(component, exponents, re, im)` rows of a jet, graded-lex within each component.
pub fn jet_rows(jet: &TruncatedMap) -> Vec<(usize, Vec<u32>, f64, f64)> {
    jet.components()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.terms().map(move |(m, c)| (i + 1, m.exponents().to_vec(), c.re, c.im)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydyn_core::{make_gamma3, rat, RangeCheck};

    #[test]
    fn gamma_record() {
        let g = make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap();
        let r = map_record(&g);
        assert_eq!(r.dimension, 3);
        assert_eq!(r.name, "gamma3");
        assert_eq!(r.components[0].len(), 2);
        assert_eq!(r.components[0][0], Term { exponents: vec![0, 1, 0], coefficient: "1/3".into() });
        assert_eq!(r.components[0][1], Term { exponents: vec![1, 0, 1], coefficient: "1/3".into() });
    }
}
