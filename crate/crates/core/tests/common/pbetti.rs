//! Persistent-Betti-number oracle: for every pair of filtration values,
//! compute the rank of the map induced in homology by dense GF(2) Gaussian
//! elimination on boundary matrices, then recover pair multiplicities by
//! inclusion-exclusion. Independent of the reduction algorithm under test.

use std::collections::HashMap;

use tda_core::Filtration;

/// Expected diagram content on the filtration's own value scale.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDiagram {
    /// (dimension, birth, death) with birth < death, one entry per class.
    pub finite: Vec<(usize, f64, f64)>,
    /// (dimension, birth) of classes alive at the end.
    pub essential: Vec<(usize, f64)>,
}

impl OracleDiagram {
    /// Comparable against [`super::canonical`] given the cap used for
    /// essential classes.
    pub fn canonical(&self, cap: f64) -> Vec<(usize, f64, f64, bool)> {
        let mut v: Vec<(usize, f64, f64, bool)> = self
            .finite
            .iter()
            .map(|&(d, b, dd)| (d, b, dd, false))
            .chain(self.essential.iter().map(|&(d, b)| (d, b, cap, true)))
            .collect();
        v.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
                .then(a.3.cmp(&b.3))
        });
        v
    }
}

/// Incremental GF(2) rank over bitset columns.
struct Gf2Rank {
    /// Reduced basis columns, each with a distinct highest set bit.
    basis: Vec<Vec<u64>>,
}

impl Gf2Rank {
    fn new() -> Self {
        Gf2Rank { basis: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn highest_bit(col: &[u64]) -> Option<usize> {
        for (w, &word) in col.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    fn add(&mut self, mut col: Vec<u64>) {
        loop {
            let Some(high) = Self::highest_bit(&col) else {
                return;
            };
            match self
                .basis
                .iter()
                .find(|b| Self::highest_bit(b) == Some(high))
            {
                None => {
                    self.basis.push(col);
                    return;
                }
                Some(b) => {
                    for (c, w) in col.iter_mut().zip(b) {
                        *c ^= w;
                    }
                }
            }
        }
    }
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn set_bit(col: &mut [u64], bit: usize) {
    col[bit / 64] |= 1u64 << (bit % 64);
}

/// Computes the oracle diagram of a filtration, keeping classes of dimension
/// at most `max_dim` when given.
pub fn persistent_betti_diagram(filtration: &Filtration, max_dim: Option<usize>) -> OracleDiagram {
    let m = filtration.len();
    // Distinct values ascending; simplex -> value index.
    let mut values: Vec<f64> = filtration.values().to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let r = values.len();
    let value_idx = |i: usize| -> usize {
        values
            .binary_search_by(|v| v.total_cmp(&filtration.value(i)))
            .unwrap()
    };

    let complex_dim = filtration.max_dimension();
    let report_dim = max_dim.unwrap_or(complex_dim).min(complex_dim);

    // Local indexing per dimension, ordered by (value index, filtration
    // index) so columns can be added in sweep order.
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); complex_dim + 1];
    for i in 0..m {
        by_dim[filtration.simplex(i).dimension()].push(i);
    }
    for list in &mut by_dim {
        list.sort_by_key(|&i| (value_idx(i), i));
    }
    let local: HashMap<usize, usize> = by_dim
        .iter()
        .flat_map(|list| list.iter().enumerate().map(|(loc, &i)| (i, loc)))
        .collect();
    let index_of = filtration.index_map();

    // Boundary columns of dimension k as bitsets over local (k-1)-simplices.
    let boundary_cols = |k: usize| -> Vec<Vec<u64>> {
        let rows = if k == 0 { 0 } else { by_dim[k - 1].len() };
        by_dim[k]
            .iter()
            .map(|&i| {
                let mut col = vec![0u64; words(rows.max(1))];
                if k > 0 {
                    for facet in filtration.simplex(i).facets() {
                        let fi = index_of[facet.vertices()];
                        set_bit(&mut col, local[&fi]);
                    }
                }
                col
            })
            .collect()
    };

    let mut finite = Vec::new();
    let mut essential = Vec::new();

    for k in 0..=report_dim {
        // z[s] = dim Z_k(K_s): k-simplex count minus boundary rank at s.
        let cols_k = boundary_cols(k);
        let mut z = vec![0usize; r];
        {
            let mut rank = Gf2Rank::new();
            let mut count = 0;
            let mut ci = 0;
            for (s, slot) in z.iter_mut().enumerate() {
                while ci < by_dim[k].len() && value_idx(by_dim[k][ci]) <= s {
                    if k > 0 {
                        rank.add(cols_k[ci].clone());
                    }
                    count += 1;
                    ci += 1;
                }
                *slot = count - rank.rank();
            }
        }

        // b[s][t] = dim (B_k(K_t) ∩ C_k(K_s))
        //         = rank ∂_{k+1}(<= t) - rank ∂_{k+1}(<= t) on rows outside K_s.
        // s = -1 (empty subcomplex) is row index 0 in the padded table.
        let has_cofaces = k < complex_dim;
        let cols_k1: Vec<Vec<u64>> = if has_cofaces {
            boundary_cols(k + 1)
        } else {
            Vec::new()
        };
        let k1_value_idx: Vec<usize> = if has_cofaces {
            by_dim[k + 1].iter().map(|&i| value_idx(i)).collect()
        } else {
            Vec::new()
        };
        let row_value_idx: Vec<usize> = by_dim[k].iter().map(|&i| value_idx(i)).collect();
        let nwords = words(by_dim[k].len().max(1));

        let mut full_rank = vec![0usize; r];
        {
            let mut rank = Gf2Rank::new();
            let mut ci = 0;
            for (t, slot) in full_rank.iter_mut().enumerate() {
                while ci < cols_k1.len() && k1_value_idx[ci] <= t {
                    rank.add(cols_k1[ci].clone());
                    ci += 1;
                }
                *slot = rank.rank();
            }
        }

        // masked[s + 1][t]: rows restricted to k-simplices with value > v_s;
        // masked[0][t] uses all rows (s = -1).
        let mut masked = vec![vec![0usize; r]; r + 1];
        for (s_pad, masked_row) in masked.iter_mut().enumerate() {
            let mut mask = vec![0u64; nwords];
            for (loc, &vi) in row_value_idx.iter().enumerate() {
                let outside = s_pad == 0 || vi > s_pad - 1;
                if outside {
                    set_bit(&mut mask, loc);
                }
            }
            let mut rank = Gf2Rank::new();
            let mut ci = 0;
            for (t, cell) in masked_row.iter_mut().enumerate() {
                while ci < cols_k1.len() && k1_value_idx[ci] <= t {
                    let col: Vec<u64> = cols_k1[ci].iter().zip(&mask).map(|(c, m)| c & m).collect();
                    rank.add(col);
                    ci += 1;
                }
                *cell = rank.rank();
            }
        }

        // beta(s, t) with s = -1 padded at index 0; z(-1) = 0.
        let beta = |s_pad: usize, t: usize| -> isize {
            let zs = if s_pad == 0 { 0 } else { z[s_pad - 1] } as isize;
            let b = (full_rank[t] - masked[s_pad][t]) as isize;
            zs - b
        };

        for i in 0..r {
            for j in (i + 1)..r {
                let mu = beta(i + 1, j - 1) - beta(i + 1, j) - beta(i, j - 1) + beta(i, j);
                for _ in 0..mu {
                    finite.push((k, values[i], values[j]));
                }
            }
            let mu_ess = beta(i + 1, r - 1) - beta(i, r - 1);
            for _ in 0..mu_ess {
                essential.push((k, values[i]));
            }
        }
    }

    OracleDiagram { finite, essential }
}
