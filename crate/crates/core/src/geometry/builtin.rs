//! Generators for the homogeneous skeletons used throughout: subgroups of
//! `SO(N)` built from coordinate blocks, plus the abelian torus.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::spec::{Block, Bracket, GeometrySpec, SummandSpec};
use crate::error::{Error, Result};

/// A basis element `E_ij = e_i e_jᵀ - e_j e_iᵀ` of `so(N)`, 1-based, `i < j`.
pub type Pair = (usize, usize);

fn pairs_with(i_range: impl Iterator<Item = usize> + Clone, j: usize) -> Vec<Pair> {
    i_range.map(|i| (i, j)).collect()
}

fn so_pairs(indices: &[usize]) -> Vec<Pair> {
    let mut out = Vec::new();
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            out.push((i, j));
        }
    }
    out
}

/// Skeleton of `SO(N)/K` with `𝔨` spanned by `k_pairs` and `𝔭` split into
/// the given summands. The `E_ij` are orthonormal for `-½ tr`, which makes
/// the unit round sphere come out of [`sphere`].
///
/// Every pair `i < j ≤ N` must appear exactly once. Declared summand
/// dimensions are replaced by the number of pairs.
pub fn so_geometry(
    n: usize,
    k_pairs: &[Pair],
    summands: Vec<(SummandSpec, Vec<Pair>)>,
) -> Result<GeometrySpec> {
    let mut basis: Vec<Pair> = k_pairs.to_vec();
    let mut summand_of: Vec<Option<usize>> = vec![None; k_pairs.len()];
    let mut specs = Vec::with_capacity(summands.len());
    for (s, (mut spec, pairs)) in summands.into_iter().enumerate() {
        spec.dim = pairs.len();
        specs.push(spec);
        basis.extend_from_slice(&pairs);
        summand_of.extend(core::iter::repeat_n(Some(s), pairs.len()));
    }
    let mut index = vec![usize::MAX; (n + 1) * (n + 1)];
    for (b, &(i, j)) in basis.iter().enumerate() {
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Structure(format!(
                "pair ({i}, {j}) is not a basis element of so({n})"
            )));
        }
        if index[i * (n + 1) + j] != usize::MAX {
            return Err(Error::Structure(format!("pair ({i}, {j}) listed twice")));
        }
        index[i * (n + 1) + j] = b;
    }
    if basis.len() != n * (n - 1) / 2 {
        return Err(Error::Structure(format!(
            "{} pairs listed, so({n}) has dimension {}",
            basis.len(),
            n * (n - 1) / 2
        )));
    }

    // [E_ij, E_kl] = δ_jk E_il - δ_ik E_jl - δ_jl E_ik + δ_il E_jk, with E_ji = -E_ij.
    let signed = |p: usize, q: usize| -> Option<(usize, f64)> {
        match p.cmp(&q) {
            core::cmp::Ordering::Less => Some((index[p * (n + 1) + q], 1.0)),
            core::cmp::Ordering::Greater => Some((index[q * (n + 1) + p], -1.0)),
            core::cmp::Ordering::Equal => None,
        }
    };
    let mut brackets = Vec::new();
    for (a, &(i, j)) in basis.iter().enumerate() {
        for (b, &(k, l)) in basis.iter().enumerate() {
            let terms = [
                (j == k, i, l, 1.0),
                (i == k, j, l, -1.0),
                (j == l, i, k, -1.0),
                (i == l, j, k, 1.0),
            ];
            for (hit, p, q, sign) in terms {
                if hit {
                    if let Some((c, s)) = signed(p, q) {
                        brackets.push(Bracket {
                            a,
                            b,
                            c,
                            value: sign * s,
                        });
                    }
                }
            }
        }
    }
    let k: usize = specs
        .iter()
        .filter(|s| s.block == Block::Plus)
        .map(|s| s.dim)
        .sum();
    GeometrySpec::new(k, specs, summand_of, brackets)
}

/// `Sⁿ = SO(n+1)/SO(n)` with the whole isotropy as one Plus summand: the
/// skeleton of the rotationally symmetric metrics on `ℝⁿ⁺¹` around a point.
pub fn sphere(n: usize) -> Result<GeometrySpec> {
    if n == 0 {
        return Err(Error::Structure(
            "sphere dimension must be at least 1".into(),
        ));
    }
    let k_pairs = so_pairs(&(1..=n).collect::<Vec<_>>());
    so_geometry(
        n + 1,
        &k_pairs,
        vec![(
            SummandSpec::new("sphere", n, Block::Plus),
            pairs_with(1..=n, n + 1),
        )],
    )
}

/// `S¹ = SO(2)`: the cigar skeleton.
pub fn circle() -> Result<GeometrySpec> {
    sphere(1)
}

/// `SO(n+2)/SO(n)` with `H = SO(n+1)`, so `k = n` and the singular orbit is
/// `Sⁿ⁺¹`. Summands: `𝔭₊ = span E_{i,n+1}`, and `𝔭₋` split into
/// `span E_{i,n+2}` (dim `n`) and `E_{n+1,n+2}` (dim 1).
pub fn stiefel(n: usize) -> Result<GeometrySpec> {
    if n < 2 {
        return Err(Error::Structure("stiefel skeleton needs n >= 2".into()));
    }
    let k_pairs = so_pairs(&(1..=n).collect::<Vec<_>>());
    so_geometry(
        n + 2,
        &k_pairs,
        vec![
            (
                SummandSpec::new("p1", n, Block::Plus),
                pairs_with(1..=n, n + 1),
            ),
            (
                SummandSpec::new("p2", n, Block::Minus),
                pairs_with(1..=n, n + 2),
            ),
            (
                SummandSpec::new("p3", 1, Block::Minus),
                vec![(n + 1, n + 2)],
            ),
        ],
    )
}

/// `SO(n+2)/SO(n)` with `H = SO(2) × SO(n)`, so `k = 1` and the singular
/// orbit is the Grassmannian of oriented 2-planes. `𝔭₋` splits into the two
/// copies `span E_{1,j}` and `span E_{2,j}` of the standard `SO(n)` module.
pub fn stiefel_codim2(n: usize) -> Result<GeometrySpec> {
    if n < 2 {
        return Err(Error::Structure(
            "codimension-2 skeleton needs n >= 2".into(),
        ));
    }
    let k_pairs = so_pairs(&(3..=n + 2).collect::<Vec<_>>());
    so_geometry(
        n + 2,
        &k_pairs,
        vec![
            (SummandSpec::new("p_plus", 1, Block::Plus), vec![(1, 2)]),
            (
                SummandSpec::new("p_a", n, Block::Minus),
                (3..=n + 2).map(|j| (1, j)).collect(),
            ),
            (
                SummandSpec::new("p_b", n, Block::Minus),
                (3..=n + 2).map(|j| (2, j)).collect(),
            ),
        ],
    )
}

/// `SO(p+n)/(SO(p) × SO(n-1))` with `H = SO(p) × SO(n)`, so `k = n-1` and
/// the singular orbit is the real Grassmannian `G_p(ℝ^{p+n})`.
pub fn grassmann_product(p: usize, n: usize) -> Result<GeometrySpec> {
    if p == 0 || n < 2 {
        return Err(Error::Structure(
            "grassmann skeleton needs p >= 1 and n >= 2".into(),
        ));
    }
    let mut k_pairs = so_pairs(&(1..=p).collect::<Vec<_>>());
    k_pairs.extend(so_pairs(&(p + 1..p + n).collect::<Vec<_>>()));
    let mut pa = Vec::new();
    for a in 1..=p {
        for j in 1..n {
            pa.push((a, p + j));
        }
    }
    so_geometry(
        p + n,
        &k_pairs,
        vec![
            (
                SummandSpec::new("p_plus", n - 1, Block::Plus),
                pairs_with(p + 1..p + n, p + n),
            ),
            (SummandSpec::new("p_a", p * (n - 1), Block::Minus), pa),
            (
                SummandSpec::new("p_b", p, Block::Minus),
                pairs_with(1..=p, p + n),
            ),
        ],
    )
}

/// Abelian skeleton: the first entry of `dims` is the single Plus summand,
/// the rest are Minus. All brackets vanish.
pub fn torus(dims: &[usize]) -> Result<GeometrySpec> {
    let Some(&k) = dims.first() else {
        return Err(Error::Structure("torus needs at least one summand".into()));
    };
    let summands = dims
        .iter()
        .enumerate()
        .map(|(s, &d)| {
            let block = if s == 0 { Block::Plus } else { Block::Minus };
            SummandSpec::new(format!("t{s}"), d, block)
        })
        .collect();
    let summand_of = dims
        .iter()
        .enumerate()
        .flat_map(|(s, &d)| core::iter::repeat_n(Some(s), d))
        .collect();
    GeometrySpec::new(k, summands, summand_of, Vec::new())
}
