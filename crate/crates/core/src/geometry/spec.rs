use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Which part of `𝔭 = 𝔭₊ ⊕ 𝔭₋` a summand belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    /// Tangent to the collapsing sphere `H/K`; scaled by `t²` in the metric.
    Plus,
    /// Tangent to the singular orbit `G/H`.
    Minus,
}

/// One `K`-irreducible summand of `𝔭`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummandSpec {
    pub label: String,
    pub dim: usize,
    pub block: Block,
    /// Eigenvalue of the Casimir operator on this summand's diagonal direction.
    /// Only used for `Minus` summands; when every `Minus` summand carries one,
    /// the recursion operators are built from these values instead of the
    /// bracket tensor.
    pub casimir_eigenvalue: Option<f64>,
}

impl SummandSpec {
    pub fn new(label: impl Into<String>, dim: usize, block: Block) -> Self {
        Self {
            label: label.into(),
            dim,
            block,
            casimir_eigenvalue: None,
        }
    }

    pub fn with_casimir(mut self, value: f64) -> Self {
        self.casimir_eigenvalue = Some(value);
        self
    }
}

/// A structure constant: `[X_a, X_b]` has `value` along `X_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: f64,
}

/// Numeric skeleton of `(G, H, K)` on an adapted basis of `𝔤 = 𝔨 ⊕ 𝔭₊ ⊕ 𝔭₋`.
///
/// The `𝔭` part of the basis is orthonormal for the background metric, so a
/// diagonal invariant metric is one positive scalar per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec {
    k: usize,
    summands: Vec<SummandSpec>,
    summand_of: Vec<Option<usize>>,
    brackets: Vec<Bracket>,
    structure: Vec<f64>,
}

impl GeometrySpec {
    /// `summand_of[i]` is the summand of basis vector `i`, or `None` for `𝔨`.
    pub fn new(
        k: usize,
        summands: Vec<SummandSpec>,
        summand_of: Vec<Option<usize>>,
        brackets: Vec<Bracket>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Structure("k must be at least 1".into()));
        }
        let n = summand_of.len();
        let mut counts = vec![0usize; summands.len()];
        for (i, s) in summand_of.iter().enumerate() {
            if let Some(s) = *s {
                if s >= summands.len() {
                    return Err(Error::Structure(format!(
                        "basis vector {i} refers to summand {s}, only {} declared",
                        summands.len()
                    )));
                }
                counts[s] += 1;
            }
        }
        for (s, (spec, &count)) in summands.iter().zip(&counts).enumerate() {
            if spec.dim == 0 {
                return Err(Error::Structure(format!(
                    "summand {s} ({}) has dimension 0",
                    spec.label
                )));
            }
            if spec.dim != count {
                return Err(Error::Structure(format!(
                    "summand {s} ({}) declares dim {} but owns {count} basis vectors",
                    spec.label, spec.dim
                )));
            }
        }
        let plus: usize = summands
            .iter()
            .filter(|s| s.block == Block::Plus)
            .map(|s| s.dim)
            .sum();
        if plus != k {
            return Err(Error::Structure(format!(
                "Plus summands have total dimension {plus}, expected k = {k}"
            )));
        }
        let mut structure = vec![0.0; n * n * n];
        for br in &brackets {
            if br.a >= n || br.b >= n || br.c >= n {
                return Err(Error::Structure(format!(
                    "bracket ({}, {}, {}) out of range for basis of size {n}",
                    br.a, br.b, br.c
                )));
            }
            structure[(br.a * n + br.b) * n + br.c] += br.value;
        }
        Ok(Self {
            k,
            summands,
            summand_of,
            brackets,
            structure,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn summands(&self) -> &[SummandSpec] {
        &self.summands
    }

    pub fn summand(&self, s: usize) -> &SummandSpec {
        &self.summands[s]
    }

    pub fn n_summands(&self) -> usize {
        self.summands.len()
    }

    pub fn basis_dim(&self) -> usize {
        self.summand_of.len()
    }

    /// Dimension of the principal orbit, `dim 𝔭`.
    pub fn orbit_dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim).sum()
    }

    pub fn summand_of(&self, basis: usize) -> Option<usize> {
        self.summand_of[basis]
    }

    pub fn brackets(&self) -> &[Bracket] {
        &self.brackets
    }

    /// Coefficient of `X_c` in `[X_a, X_b]`.
    #[inline]
    pub fn c(&self, a: usize, b: usize, c: usize) -> f64 {
        let n = self.basis_dim();
        self.structure[(a * n + b) * n + c]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.dim).collect()
    }

    pub fn is_plus(&self, s: usize) -> bool {
        self.summands[s].block == Block::Plus
    }

    pub fn plus_summands(&self) -> Vec<usize> {
        (0..self.n_summands())
            .filter(|&s| self.is_plus(s))
            .collect()
    }

    pub fn minus_summands(&self) -> Vec<usize> {
        (0..self.n_summands())
            .filter(|&s| !self.is_plus(s))
            .collect()
    }

    /// Basis indices spanning `𝔭`.
    pub fn p_basis(&self) -> Vec<usize> {
        (0..self.basis_dim())
            .filter(|&i| self.summand_of[i].is_some())
            .collect()
    }

    pub fn basis_in_block(&self, block: Block) -> Vec<usize> {
        (0..self.basis_dim())
            .filter(|&i| self.summand_of[i].is_some_and(|s| self.summands[s].block == block))
            .collect()
    }

    pub fn summand_index(&self, label: &str) -> Option<usize> {
        self.summands.iter().position(|s| s.label == label)
    }

    /// Same geometry with the summands listed in the order `perm`
    /// (`perm[new] = old`). Basis vectors keep their indices.
    pub fn permute_summands(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_summands() {
            return Err(Error::Structure("permutation has wrong length".into()));
        }
        let mut inverse = vec![usize::MAX; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let summands = perm.iter().map(|&old| self.summands[old].clone()).collect();
        let summand_of = self
            .summand_of
            .iter()
            .map(|s| s.map(|old| inverse[old]))
            .collect();
        Self::new(self.k, summands, summand_of, self.brackets.clone())
    }
}
