// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham 2005). The order is the lowest of 3, 5, 7, 9, 13
//! whose θ bound covers ‖A‖₁; larger norms are scaled into the order-13
//! range and squared back.

use num_complex::Complex64 as C64;

use crate::statespace::ComplexMatrix;

const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn lin_comb(terms: &[(f64, &ComplexMatrix)], dim: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim);
    for &(c, m) in terms {
        if c != 0.0 {
            out.axpy(C64::new(c, 0.0), m);
        }
    }
    out
}

/// Padé approximant of order `m` from the even powers A², A⁴, ….
fn pade(a: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    let (u_inner, v) = match m {
        3 | 5 | 7 | 9 => {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let mut powers = vec![id.clone(), a2.clone()];
            while powers.len() * 2 - 1 < m {
                let next = powers.last().unwrap().matmul(&a2);
                powers.push(next);
            }
            let u_terms: Vec<(f64, &ComplexMatrix)> =
                powers.iter().enumerate().map(|(k, p)| (b[2 * k + 1], p)).collect();
            let v_terms: Vec<(f64, &ComplexMatrix)> = powers.iter().enumerate().map(|(k, p)| (b[2 * k], p)).collect();
            (lin_comb(&u_terms, n), lin_comb(&v_terms, n))
        }
        _ => {
            let a4 = a2.matmul(&a2);
            let a6 = a4.matmul(&a2);
            let b = &B13;
            let u_hi = a6.matmul(&lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n));
            let u_inner = &u_hi + &lin_comb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)], n);
            let v_hi = a6.matmul(&lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n));
            let v = &v_hi + &lin_comb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)], n);
            (u_inner, v)
        }
    };
    let u = a.matmul(&u_inner);
    // r = (V − U)⁻¹ (V + U)
    (&v - &u)
        .solve(&(&v + &u))
        .expect("Padé denominator is nonsingular inside the θ bound")
}

/// exp(A) for a dense square matrix.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    if n == 0 {
        return a.clone();
    }
    let norm = a.norm_one();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }
    if let Some(&(m, _)) = THETA.iter().find(|&&(_, theta)| norm <= theta) {
        return pade(a, m);
    }
    let theta13 = THETA[4].1;
    let s = (norm / theta13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale_real(0.5f64.powi(s));
    let mut r = pade(&scaled, 13);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    r
}

/// Partition of the indices into connected components of the sparsity
/// graph (edge `i–j` when `A[i,j]` or `A[j,i]` is nonzero). Each component
/// is sorted; components are ordered by their smallest index.
pub fn connected_blocks(a: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] != C64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// exp(A) stored as independent diagonal blocks over index sets.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPropagator {
    dim: usize,
    blocks: Vec<(Vec<usize>, ComplexMatrix)>,
}

impl BlockPropagator {
    /// Exponentiates `a` restricted to each index block. The blocks must
    /// be a partition that `a` does not couple across.
    pub fn from_blocks(a: &ComplexMatrix, blocks: &[Vec<usize>]) -> Self {
        let blocks = blocks
            .iter()
            .map(|idx| {
                let sub = ComplexMatrix::from_fn(idx.len(), |i, j| a[(idx[i], idx[j])]);
                (idx.clone(), expm(&sub))
            })
            .collect();
        Self { dim: a.dim(), blocks }
    }

    /// Exponentiates already restricted blocks `(indices, submatrix)`.
    pub(crate) fn from_submatrices(dim: usize, blocks: impl IntoIterator<Item = (Vec<usize>, ComplexMatrix)>) -> Self {
        let blocks = blocks.into_iter().map(|(idx, sub)| (idx, expm(&sub))).collect();
        Self { dim, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (idx, e) in &self.blocks {
            for (r, &i) in idx.iter().enumerate() {
                out[i] = e.row(r).iter().zip(idx).map(|(x, &j)| x * v[j]).sum();
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim);
        for (idx, e) in &self.blocks {
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate() {
                    m[(i, j)] = e[(r, c)];
                }
            }
        }
        m
    }
}

/// exp(A) computed independently on each connected block of `A`.
pub fn expm_blockwise(a: &ComplexMatrix) -> BlockPropagator {
    BlockPropagator::from_blocks(a, &connected_blocks(a))
}
