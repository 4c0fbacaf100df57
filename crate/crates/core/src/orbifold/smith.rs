//! Smith normal form over ℤ, enough for abelianizing small presentations.

use std::fmt;

use serde::Serialize;

/// ℤ^rank ⊕ ⊕ ℤ/t_i with t_1 | t_2 | … and every t_i > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianInvariants {
    /// Abelian group on `generators` generators modulo the row relations.
    pub fn from_relation_matrix(generators: usize, rows: &[Vec<i64>]) -> Self {
        let diag = smith_diagonal(rows, generators);
        let nonzero = diag.iter().filter(|&&d| d != 0).count();
        Self {
            rank: generators - nonzero,
            torsion: diag.into_iter().filter(|&d| d > 1).collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Nonzero-or-zero diagonal of the Smith form of a `rows × cols` matrix,
/// of length min(rows, cols), entries nonnegative.
pub fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    let n_rows = a.len();
    let mut diag = Vec::new();
    for t in 0..n_rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        loop {
            let pivot = (t..n_rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                diag.resize(n_rows.min(cols), 0);
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n_rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold in any entry the pivot does not divide.
            let bad = (t + 1..n_rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}
