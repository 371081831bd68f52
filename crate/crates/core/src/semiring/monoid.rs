//! Finite commutative monoids (and semigroups) given by explicit operation tables.
//!
//! These are the small test carriers for the cancellation and injectivity
//! machinery. Tables are validated for commutativity and associativity at
//! construction, so everything downstream may assume both.

use alloc::{format, string::String, string::ToString, vec, vec::Vec};

use crate::error::{Error, Result};

/// A finite commutative operation table. Elements are the indices
/// `0 .. size`; `table[i][j]` is the index of `i ∘ j`. A neutral element is
/// detected automatically when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    name: String,
    table: Vec<Vec<usize>>,
    neutral: Option<usize>,
}

/// Validation is cubic in the carrier size, so tables are kept small.
const MAX_TABLE_SIZE: usize = 64;

impl FiniteMonoid {
    /// Validates and wraps an operation table.
    pub fn new(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidMonoidTable("empty table".to_string()));
        }
        if n > MAX_TABLE_SIZE {
            return Err(Error::InvalidMonoidTable(format!(
                "table size {n} exceeds maximum {MAX_TABLE_SIZE}"
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMonoidTable(format!(
                    "row {i} has length {} in a table of size {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidMonoidTable(format!(
                        "entry ({i}, {j}) = {v} is out of range"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if table[i][j] != table[j][i] {
                    return Err(Error::InvalidMonoidTable(format!(
                        "not commutative at ({i}, {j})"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::InvalidMonoidTable(format!(
                            "not associative at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        let neutral = (0..n).find(|&e| (0..n).all(|i| table[e][i] == i));
        Ok(FiniteMonoid {
            name: name.to_string(),
            table,
            neutral,
        })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn neutral(&self) -> Option<usize> {
        self.neutral
    }

    /// The same monoid with elements renamed by a permutation: the new
    /// element `perm[i]` plays the role the old element `i` did. Used to
    /// generate many presentations of one isomorphism class.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.size();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidMonoidTable(format!(
                "relabeling is not a permutation of 0..{n}"
            )));
        }
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[perm[i]][perm[j]] = perm[self.table[i][j]];
            }
        }
        FiniteMonoid::new(&format!("{}*", self.name), table)
    }

    /// The two-element monoid ({0, 1}, ∨) with neutral 0. Its non-neutral
    /// element is idempotent, the standard source of cancellation failure.
    pub fn bool_or() -> Self {
        FiniteMonoid::new("bool-or", vec![vec![0, 1], vec![1, 1]])
            .expect("boolean table is valid")
    }

    /// The min-monoid on {0, 1, .., levels-1, ∞}: `i ∘ j = min(i, j)`, with
    /// the top index playing ∞ (the neutral element). Size is `levels + 1`.
    pub fn min_chain(levels: usize) -> Result<Self> {
        let n = levels + 1;
        let table = (0..n)
            .map(|i| (0..n).map(|j| i.min(j)).collect())
            .collect();
        FiniteMonoid::new(&format!("min-chain({n})"), table)
    }

    /// Addition truncated at a ceiling: `i ∘ j = min(i + j, size - 1)`.
    pub fn cap_add(size: usize) -> Result<Self> {
        let table = (0..size)
            .map(|i| (0..size).map(|j| (i + j).min(size - 1)).collect())
            .collect();
        FiniteMonoid::new(&format!("cap-add({size})"), table)
    }

    /// (Z/n, +).
    pub fn zmod_add(n: usize) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteMonoid::new(&format!("zmod-add({n})"), table)
    }

    /// (Z/n, ·).
    pub fn zmod_mul(n: usize) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| (i * j) % n).collect()).collect();
        FiniteMonoid::new(&format!("zmod-mul({n})"), table)
    }
}
