//! Finite groups with validated multiplication tables, and the two measure
//! conventions used for integrating over the group.

use crate::error::EngineError;
use crate::scalar::{one, q, Scalar};

/// A finite group presented by its full multiplication table.
///
/// Validation checks associativity on all triples, the existence of a
/// two-sided identity, and invertibility of every element; inverses and
/// conjugacy classes are precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate a multiplication table (`table[s][t]` = index of `s·t`).
    pub fn validate(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, EngineError> {
        let n = table.len();
        assert!(n > 0, "empty group table");
        assert_eq!(labels.len(), n, "label count");
        for row in &table {
            assert_eq!(row.len(), n, "table must be square");
            assert!(row.iter().all(|&x| x < n), "table entries out of range");
        }
        // Identity.
        let identity = (0..n)
            .find(|&e| (0..n).all(|s| table[e][s] == s && table[s][e] == s))
            .ok_or(EngineError::NoIdentity)?;
        // Inverses.
        let mut inverse = vec![usize::MAX; n];
        for s in 0..n {
            inverse[s] = (0..n)
                .find(|&t| table[s][t] == identity && table[t][s] == identity)
                .ok_or(EngineError::NoInverse(s))?;
        }
        // Associativity.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(EngineError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        // Conjugacy classes (partition, ordered by least representative).
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|t| table[table[t][s]][inverse[t]])
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverse,
            classes,
        })
    }

    /// Group from a table with default labels `g0..`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, EngineError> {
        let labels = (0..table.len()).map(|i| format!("g{i}")).collect();
        Self::validate(labels, table)
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::validate(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| format!("r{k}")).collect();
        Self::validate(labels, table).unwrap()
    }

    /// The Klein four-group.
    pub fn klein4() -> Self {
        // Elements e, a, b, ab with componentwise Z/2 structure.
        let table = (0..4usize)
            .map(|a| (0..4usize).map(|b| a ^ b).collect())
            .collect();
        Self::validate(
            vec!["e".into(), "a".into(), "b".into(), "ab".into()],
            table,
        )
        .unwrap()
    }

    /// The symmetric group on three letters.
    pub fn symmetric3() -> Self {
        // Permutations of {0,1,2} in one-line notation, lexicographic.
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a∘b)(x) = a(b(x)).
                        let c = [a[b[0]], a[b[1]], a[b[2]]];
                        index(&c)
                    })
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| format!("p{}{}{}", p[0], p[1], p[2])).collect();
        Self::validate(labels, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Product `s·t`.
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, s: usize) -> usize {
        self.inverse[s]
    }

    /// Conjugate `t s t⁻¹`.
    pub fn conjugate(&self, t: usize, s: usize) -> usize {
        self.mul(self.mul(t, s), self.inverse(t))
    }

    /// Conjugacy classes as a partition of element indices.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
}

/// The weighting used to turn integrals over the group into finite sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureConvention {
    /// Every element has weight 1 (discrete-group convention).
    Counting,
    /// Every element has weight `1/|G|`, total mass 1 (compact-group
    /// convention).
    Normalized,
}

impl MeasureConvention {
    /// The weight `w(s)` of a single element.
    pub fn weight(&self, group: &FiniteGroup) -> Scalar {
        match self {
            MeasureConvention::Counting => one(),
            MeasureConvention::Normalized => q(1, group.order() as i64),
        }
    }
}
