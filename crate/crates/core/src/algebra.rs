//! Finite-dimensional associative algebras over ℚ[d] given by basis and
//! structure constants, carrying an anti-involution as a basis permutation.
//!
//! The diagram algebra on `n` strands is the built-in instance: its basis is
//! the enumerated planar diagrams and every structure constant is a power of
//! the loop parameter times a single basis diagram. The type nevertheless
//! accepts arbitrary structure-constant tables through [`FiniteAlgebra::from_table`],
//! so algebras that do not come from diagrams go through the same interface.
//!
//! Construction always validates the axioms: associativity on basis triples
//! and the anti-homomorphism law on basis pairs, exhaustively up to dimension
//! [`EXHAUSTIVE_VALIDATION_LIMIT`] and on 1000 seeded random samples above
//! it; the unit and involutive laws are always checked in full.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeff::{DeltaPoly, DeltaRational, Matrix, Rational, Span};
use crate::diagram::{enumerate_diagrams, DiagramError, TLDiagram};
use crate::exec;
use crate::rng::{SplitMix64, DEFAULT_SEED};

/// Largest strand count for the built-in diagram algebra (dimension 1430).
pub const MAX_TL_STRANDS: usize = 8;

/// Dimension bound for exhaustive construction-time validation; larger
/// algebras are validated on seeded random samples.
pub const EXHAUSTIVE_VALIDATION_LIMIT: usize = 42;

const VALIDATION_SAMPLES: usize = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("strand count {0} out of range 1..={1}")]
    StrandCountOutOfRange(usize, usize),
    #[error("multiplication table has wrong shape")]
    BadTable,
    #[error("involution is not an involutive permutation")]
    BadInvolution,
    #[error("unit fails the two-sided unit law at basis index {0}")]
    UnitLaw(usize),
    #[error("involution fails the anti-homomorphism law on basis pair ({0}, {1})")]
    AntiHomomorphism(usize, usize),
    #[error("multiplication fails associativity on basis triple ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("empty generator word")]
    EmptyWord,
}

/// Sparse element: basis index to nonzero polynomial coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    coeffs: BTreeMap<usize, DeltaPoly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(index: usize) -> Self {
        AlgebraElement::term(index, DeltaPoly::one())
    }

    pub fn term(index: usize, coeff: DeltaPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(index, coeff);
        }
        AlgebraElement { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, DeltaPoly)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (i, c) in terms {
            out.add_term(i, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> DeltaPoly {
        self.coeffs
            .get(&index)
            .cloned()
            .unwrap_or_else(DeltaPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &DeltaPoly)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    fn add_term(&mut self, index: usize, coeff: DeltaPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&index) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.coeffs.remove(&index);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.coeffs.insert(index, coeff);
            }
        }
    }

    pub fn add(&self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(*i, -c);
        }
        out
    }

    pub fn scale(&self, c: &DeltaPoly) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> AlgebraElement {
        self.scale(&DeltaPoly::constant(c.clone()))
    }

    /// Dense coordinate vector over ℚ[d].
    pub fn to_dense(&self, dim: usize) -> Vec<DeltaPoly> {
        let mut v = vec![DeltaPoly::zero(); dim];
        for (i, c) in &self.coeffs {
            v[*i] = c.clone();
        }
        v
    }

    /// Dense coordinate vector over the fraction field ℚ(d).
    pub fn to_dense_fractions(&self, dim: usize) -> Vec<DeltaRational> {
        self.to_dense(dim).iter().map(DeltaRational::from).collect()
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, c)| format!("({c})*b{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Basis labels: honest diagrams for the built-in instance, plain names
/// otherwise.
#[derive(Clone, Debug)]
pub enum BasisLabels {
    Diagrams(Vec<TLDiagram>),
    Named(Vec<String>),
}

impl BasisLabels {
    pub fn len(&self) -> usize {
        match self {
            BasisLabels::Diagrams(v) => v.len(),
            BasisLabels::Named(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Structure constants. Diagram algebras always multiply a basis element
/// into a loop power times a single basis element, which the `Monomial`
/// variant stores in a flat pair of arrays; the `General` variant holds
/// arbitrary elements.
#[derive(Clone)]
pub(crate) enum MultTable {
    Monomial { loops: Vec<u8>, target: Vec<u32> },
    General(Vec<AlgebraElement>),
}

impl MultTable {
    pub(crate) fn entry(&self, dim: usize, i: usize, j: usize) -> AlgebraElement {
        match self {
            MultTable::Monomial { loops, target } => {
                let idx = i * dim + j;
                AlgebraElement::term(
                    target[idx] as usize,
                    DeltaPoly::delta_pow(loops[idx] as u32),
                )
            }
            MultTable::General(flat) => flat[i * dim + j].clone(),
        }
    }

    /// Bilinear extension of the table to sparse elements.
    pub(crate) fn bilinear(
        &self,
        dim: usize,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, ci) in &x.coeffs {
            for (j, cj) in &y.coeffs {
                let c = ci * cj;
                match self {
                    MultTable::Monomial { loops, target } => {
                        let idx = i * dim + j;
                        out.add_term(target[idx] as usize, c.mul_delta_pow(loops[idx] as u32));
                    }
                    MultTable::General(flat) => {
                        for (k, ck) in &flat[i * dim + j].coeffs {
                            out.add_term(*k, &c * ck);
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies a basis permutation to every table value (coefficients are
    /// untouched); monomial tables stay monomial.
    pub(crate) fn relabel_values(&self, perm: &[usize]) -> MultTable {
        match self {
            MultTable::Monomial { loops, target } => MultTable::Monomial {
                loops: loops.clone(),
                target: target.iter().map(|&t| perm[t as usize] as u32).collect(),
            },
            MultTable::General(flat) => MultTable::General(
                flat.iter()
                    .map(|e| AlgebraElement {
                        coeffs: e
                            .coeffs
                            .iter()
                            .map(|(i, c)| (perm[*i], c.clone()))
                            .collect(),
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Clone)]
pub struct FiniteAlgebra {
    dim: usize,
    labels: BasisLabels,
    table: MultTable,
    unit: AlgebraElement,
    involution: Vec<usize>,
}

impl FiniteAlgebra {
    /// The diagram algebra on `n` strands with loop parameter `d`.
    pub fn temperley_lieb(n: usize) -> Result<Self, AlgebraError> {
        Self::temperley_lieb_inner(n, false)
    }

    pub(crate) fn temperley_lieb_inner(n: usize, force_seq: bool) -> Result<Self, AlgebraError> {
        if n == 0 || n > MAX_TL_STRANDS {
            return Err(AlgebraError::StrandCountOutOfRange(n, MAX_TL_STRANDS));
        }
        let basis = enumerate_diagrams(n)?;
        let dim = basis.len();
        let lookup = |d: &TLDiagram| -> usize {
            basis
                .binary_search(d)
                .expect("composite of basis diagrams is a basis diagram")
        };
        let entry = |ij: usize| -> (u8, u32) {
            let (i, j) = (ij / dim, ij % dim);
            let (composite, loops) = basis[i].compose(&basis[j]).expect("equal strand counts");
            (loops as u8, lookup(&composite) as u32)
        };
        let entries = if force_seq {
            exec::map_indexed_seq(dim * dim, entry)
        } else {
            exec::map_indexed(dim * dim, entry)
        };
        let (loops, target) = entries.into_iter().unzip();
        let unit_index = lookup(&TLDiagram::identity(n)?);
        let involution = basis.iter().map(|d| lookup(&d.involute())).collect();
        FiniteAlgebra::validated(
            BasisLabels::Diagrams(basis),
            MultTable::Monomial { loops, target },
            AlgebraElement::basis(unit_index),
            involution,
        )
    }

    /// A general algebra from an explicit structure-constant table;
    /// `table[i][j]` is the product of basis elements `i` and `j`.
    pub fn from_table(
        labels: BasisLabels,
        table: Vec<Vec<AlgebraElement>>,
        unit: AlgebraElement,
        involution: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if table.len() != dim || table.iter().any(|row| row.len() != dim) {
            return Err(AlgebraError::BadTable);
        }
        let flat: Vec<AlgebraElement> = table.into_iter().flatten().collect();
        if flat.iter().any(|e| e.support().any(|i| i >= dim)) {
            return Err(AlgebraError::BadTable);
        }
        FiniteAlgebra::validated(labels, MultTable::General(flat), unit, involution)
    }

    fn validated(
        labels: BasisLabels,
        table: MultTable,
        unit: AlgebraElement,
        involution: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        let algebra = FiniteAlgebra {
            dim,
            labels,
            table,
            unit,
            involution,
        };

        if algebra.involution.len() != dim {
            return Err(AlgebraError::BadInvolution);
        }
        for i in 0..dim {
            let j = algebra.involution[i];
            if j >= dim || algebra.involution[j] != i {
                return Err(AlgebraError::BadInvolution);
            }
        }

        // two-sided unit law, always in full
        for i in 0..dim {
            let b = AlgebraElement::basis(i);
            if algebra.multiply(&algebra.unit, &b) != b || algebra.multiply(&b, &algebra.unit) != b
            {
                return Err(AlgebraError::UnitLaw(i));
            }
        }

        // anti-homomorphism of the involution on basis pairs
        let anti_ok = |i: usize, j: usize| {
            let lhs = algebra.apply_involution(&algebra.structure_constant(i, j));
            let rhs = algebra.multiply(
                &AlgebraElement::basis(algebra.involution[j]),
                &AlgebraElement::basis(algebra.involution[i]),
            );
            lhs == rhs
        };
        // associativity on basis triples
        let assoc_ok = |i: usize, j: usize, k: usize| {
            let ij = algebra.structure_constant(i, j);
            let jk = algebra.structure_constant(j, k);
            algebra.multiply(&ij, &AlgebraElement::basis(k))
                == algebra.multiply(&AlgebraElement::basis(i), &jk)
        };

        if dim <= EXHAUSTIVE_VALIDATION_LIMIT {
            if let Some((_, (i, j))) = exec::find_first(dim * dim, |ij| {
                let (i, j) = (ij / dim, ij % dim);
                (!anti_ok(i, j)).then_some((i, j))
            }) {
                return Err(AlgebraError::AntiHomomorphism(i, j));
            }
            if let Some((_, (i, j, k))) = exec::find_first(dim * dim * dim, |t| {
                let (i, jk) = (t / (dim * dim), t % (dim * dim));
                let (j, k) = (jk / dim, jk % dim);
                (!assoc_ok(i, j, k)).then_some((i, j, k))
            }) {
                return Err(AlgebraError::Associativity(i, j, k));
            }
        } else {
            let mut rng = SplitMix64::new(DEFAULT_SEED);
            for _ in 0..VALIDATION_SAMPLES {
                let (i, j, k) = (rng.below(dim), rng.below(dim), rng.below(dim));
                if !anti_ok(i, j) {
                    return Err(AlgebraError::AntiHomomorphism(i, j));
                }
                if !assoc_ok(i, j, k) {
                    return Err(AlgebraError::Associativity(i, j, k));
                }
            }
        }

        Ok(algebra)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &BasisLabels {
        &self.labels
    }

    pub fn diagrams(&self) -> Option<&[TLDiagram]> {
        match &self.labels {
            BasisLabels::Diagrams(v) => Some(v),
            BasisLabels::Named(_) => None,
        }
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn involution_perm(&self) -> &[usize] {
        &self.involution
    }

    /// Index of a basis diagram, when the basis is made of diagrams.
    pub fn index_of_diagram(&self, d: &TLDiagram) -> Option<usize> {
        self.diagrams()?.binary_search(d).ok()
    }

    /// Index of the cup-cap generator `e_i` in the diagram basis.
    pub fn generator_index(&self, i: usize) -> Option<usize> {
        let n = self.diagrams()?.first()?.n();
        let g = TLDiagram::generator(n, i).ok()?;
        self.index_of_diagram(&g)
    }

    pub(crate) fn table(&self) -> &MultTable {
        &self.table
    }

    /// The product of two basis elements.
    pub fn structure_constant(&self, i: usize, j: usize) -> AlgebraElement {
        self.table.entry(self.dim, i, j)
    }

    /// Bilinear extension of the structure constants; zero coefficients are
    /// pruned as they appear.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.table.bilinear(self.dim, x, y)
    }

    /// Coefficientwise relabeling along the involution permutation.
    pub fn apply_involution(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: x
                .coeffs
                .iter()
                .map(|(i, c)| (self.involution[*i], c.clone()))
                .collect(),
        }
    }

    /// `(x + i(x))/2`.
    pub fn symmetric_part(&self, x: &AlgebraElement) -> AlgebraElement {
        self.apply_involution(x)
            .add(x)
            .scale_rational(&Rational::one_half())
    }

    /// `(x - i(x))/2`.
    pub fn skew_part(&self, x: &AlgebraElement) -> AlgebraElement {
        x.sub(&self.apply_involution(x))
            .scale_rational(&Rational::one_half())
    }

    /// Anti-commutator `xy + yx`.
    pub fn jordan_product(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.multiply(x, y).add(&self.multiply(y, x))
    }

    /// Commutator `xy - yx`.
    pub fn lie_bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.multiply(x, y).sub(&self.multiply(y, x))
    }

    /// True when the span is closed under left and right multiplication by
    /// every basis element and under the involution. Membership is exact
    /// rank comparison over the fraction field.
    pub fn is_iota_ideal(&self, span: &[AlgebraElement]) -> bool {
        let subspace = self.span_of(span);
        span.iter().all(|v| {
            if !subspace.contains(&v.to_dense_fractions(self.dim)) {
                return false;
            }
            if !subspace.contains(&self.apply_involution(v).to_dense_fractions(self.dim)) {
                return false;
            }
            (0..self.dim).all(|g| {
                let b = AlgebraElement::basis(g);
                subspace.contains(&self.multiply(&b, v).to_dense_fractions(self.dim))
                    && subspace.contains(&self.multiply(v, &b).to_dense_fractions(self.dim))
            })
        })
    }

    /// Row-reduced span of a family of elements over ℚ(d).
    pub fn span_of(&self, elements: &[AlgebraElement]) -> Span<DeltaRational> {
        let vectors: Vec<Vec<DeltaRational>> = elements
            .iter()
            .map(|e| e.to_dense_fractions(self.dim))
            .collect();
        Span::from_vectors(self.dim, &vectors)
    }

    /// Parses a generator word: `id` or `e1*e2*e3` (1-based indices, `*`
    /// composes in reading order), returning its element.
    pub fn element_from_word(&self, word: &str) -> Result<AlgebraElement, AlgebraError> {
        let word = word.trim();
        if word.is_empty() {
            return Err(AlgebraError::EmptyWord);
        }
        let mut acc = self.unit.clone();
        for factor in word.split('*') {
            let factor = factor.trim();
            if factor == "id" {
                continue;
            }
            let idx = factor
                .strip_prefix('e')
                .and_then(|s| s.parse::<usize>().ok())
                .and_then(|i| self.generator_index(i))
                .ok_or_else(|| AlgebraError::UnknownGenerator(factor.to_string()))?;
            acc = self.multiply(&acc, &AlgebraElement::basis(idx));
        }
        Ok(acc)
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra(dim={})", self.dim)
    }
}

/// Sparse coordinate vector: (index, nonzero coefficient) pairs sorted by
/// index.
pub type SparseVec = Vec<(usize, DeltaPoly)>;

/// Adds `coeff * v` into a dense accumulator.
pub(crate) fn add_scaled_sparse(acc: &mut [DeltaPoly], v: &SparseVec, coeff: &DeltaPoly) {
    if coeff.is_zero() {
        return;
    }
    for (i, c) in v {
        acc[*i] = &acc[*i] + &(c * coeff);
    }
}

/// A finite-dimensional left module of a [`FiniteAlgebra`], stored as the
/// sparse action of every algebra basis element on every module basis
/// vector. Construction checks the module laws: the unit acts as the
/// identity (always in full) and the action respects products on basis
/// triples, exhaustively while `dim_A^2 * dim_V` stays small and on seeded
/// samples above that.
#[derive(Clone)]
pub struct LeftModule {
    algebra: std::sync::Arc<FiniteAlgebra>,
    dim: usize,
    action: Vec<Vec<SparseVec>>,
}

/// Exhaustive bound for module-law validation.
const MODULE_VALIDATION_LIMIT: usize = 100_000;

impl LeftModule {
    pub fn new(
        algebra: std::sync::Arc<FiniteAlgebra>,
        dim: usize,
        action: Vec<Vec<SparseVec>>,
    ) -> Result<Self, AlgebraError> {
        let module = LeftModule {
            algebra,
            dim,
            action,
        };
        module.validate()?;
        Ok(module)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let a_dim = self.algebra.dim();
        if self.action.len() != a_dim || self.action.iter().any(|row| row.len() != self.dim) {
            return Err(AlgebraError::BadTable);
        }
        if self
            .action
            .iter()
            .flatten()
            .any(|v| v.iter().any(|(i, c)| *i >= self.dim || c.is_zero()))
        {
            return Err(AlgebraError::BadTable);
        }
        // unit acts as the identity
        for v in 0..self.dim {
            let mut unit_vec = vec![DeltaPoly::zero(); self.dim];
            unit_vec[v] = DeltaPoly::one();
            if self.act(self.algebra.unit(), &unit_vec) != unit_vec {
                return Err(AlgebraError::UnitLaw(v));
            }
        }
        // action respects products: a.(b.v) = (ab).v
        let check = |a: usize, b: usize, v: usize| {
            let mut base = vec![DeltaPoly::zero(); self.dim];
            base[v] = DeltaPoly::one();
            let bv = self.act(&AlgebraElement::basis(b), &base);
            let lhs = self.act(&AlgebraElement::basis(a), &bv);
            let rhs = self.act(&self.algebra.structure_constant(a, b), &base);
            lhs == rhs
        };
        let total = a_dim * a_dim * self.dim;
        if total <= MODULE_VALIDATION_LIMIT {
            if let Some((_, (a, b, v))) = exec::find_first(total, |t| {
                let (a, rest) = (t / (a_dim * self.dim), t % (a_dim * self.dim));
                let (b, v) = (rest / self.dim, rest % self.dim);
                (!check(a, b, v)).then_some((a, b, v))
            }) {
                let _ = v;
                return Err(AlgebraError::Associativity(a, b, 0));
            }
        } else {
            let mut rng = SplitMix64::new(DEFAULT_SEED);
            for _ in 0..VALIDATION_SAMPLES {
                let (a, b, v) = (rng.below(a_dim), rng.below(a_dim), rng.below(self.dim));
                if !check(a, b, v) {
                    return Err(AlgebraError::Associativity(a, b, 0));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &std::sync::Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Action of algebra basis element `a` on module basis vector `v`.
    pub fn act_basis(&self, a: usize, v: usize) -> &SparseVec {
        &self.action[a][v]
    }

    /// Action of an algebra element on a dense module vector.
    pub fn act(&self, x: &AlgebraElement, v: &[DeltaPoly]) -> Vec<DeltaPoly> {
        let mut out = vec![DeltaPoly::zero(); self.dim];
        for (a, ca) in x.terms() {
            for (col, cv) in v.iter().enumerate() {
                if cv.is_zero() {
                    continue;
                }
                add_scaled_sparse(&mut out, &self.action[a][col], &(ca * cv));
            }
        }
        out
    }

    /// Matrix of the action of basis element `a` (columns = images).
    pub fn action_matrix(&self, a: usize) -> Matrix<DeltaPoly> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            for (row, c) in &self.action[a][col] {
                m[(*row, col)] = c.clone();
            }
        }
        m
    }
}

impl fmt::Debug for LeftModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeftModule(dim={})", self.dim)
    }
}

/// A linear map between basis-indexed spaces, stored column-wise: column `i`
/// is the image of basis vector `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    matrix: Matrix<DeltaPoly>,
}

impl LinearMap {
    pub fn from_matrix(matrix: Matrix<DeltaPoly>) -> Self {
        LinearMap { matrix }
    }

    /// The map sending basis vector `i` of the source to basis vector
    /// `images[i]` of the target.
    pub fn from_basis_map(target_dim: usize, images: &[usize]) -> Self {
        let mut matrix = Matrix::zeros(target_dim, images.len());
        for (i, &img) in images.iter().enumerate() {
            matrix[(img, i)] = DeltaPoly::one();
        }
        LinearMap { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<DeltaPoly> {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, c) in x.terms() {
            for r in 0..self.matrix.rows() {
                let entry = &self.matrix[(r, i)];
                if !entry.is_zero() {
                    out.add_term(r, entry * c);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pair_halves;
    use crate::diagram::HalfDiagram;

    fn tl(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::temperley_lieb(n).unwrap()
    }

    fn gen_elem(a: &FiniteAlgebra, i: usize) -> AlgebraElement {
        AlgebraElement::basis(a.generator_index(i).unwrap())
    }

    fn delta() -> DeltaPoly {
        DeltaPoly::delta()
    }

    /// Seeded random element with small integer coefficients.
    fn random_element(a: &FiniteAlgebra, rng: &mut SplitMix64) -> AlgebraElement {
        AlgebraElement::from_terms((0..a.dim()).filter_map(|i| {
            let c = rng.small_int(3);
            (c != 0).then(|| (i, DeltaPoly::from_int(c)))
        }))
    }

    #[test]
    fn tl_dimensions() {
        assert_eq!(tl(1).dim(), 1);
        assert_eq!(tl(3).dim(), 5);
        assert_eq!(tl(4).dim(), 14);
        assert!(FiniteAlgebra::temperley_lieb(0).is_err());
        assert!(FiniteAlgebra::temperley_lieb(9).is_err());
    }

    #[test]
    fn generator_squares_to_delta_times_itself() {
        let a = tl(4);
        let e1 = gen_elem(&a, 1);
        assert_eq!(a.multiply(&e1, &e1), e1.scale(&delta()));
    }

    #[test]
    fn defining_relations_hold_in_the_diagram_model() {
        for n in 2..=6 {
            let a = tl(n);
            let id = a.unit().clone();
            let e: Vec<AlgebraElement> = (1..n).map(|i| gen_elem(&a, i)).collect();
            for (i, ei) in e.iter().enumerate() {
                assert_eq!(a.multiply(&id, ei), *ei);
                assert_eq!(a.multiply(ei, &id), *ei);
                assert_eq!(a.multiply(ei, ei), ei.scale(&delta()));
                for (j, ej) in e.iter().enumerate() {
                    if i.abs_diff(j) > 1 {
                        assert_eq!(a.multiply(ei, ej), a.multiply(ej, ei));
                    }
                }
                if i + 1 < e.len() {
                    let up = a.multiply(&a.multiply(ei, &e[i + 1]), ei);
                    assert_eq!(up, *ei, "n={n} i={}", i + 1);
                }
                if i > 0 {
                    let down = a.multiply(&a.multiply(ei, &e[i - 1]), ei);
                    assert_eq!(down, *ei, "n={n} i={}", i + 1);
                }
            }
        }
    }

    #[test]
    fn multiply_words_lands_on_basis_words() {
        let a = tl(4);
        let e1e2 = a.element_from_word("e1*e2").unwrap();
        let e3 = a.element_from_word("e3").unwrap();
        let expected = a.element_from_word("e1*e2*e3").unwrap();
        assert_eq!(a.multiply(&e1e2, &e3), expected);
        // e1*e2*e3 is a plain basis element (coefficient 1)
        assert_eq!(expected.terms().count(), 1);
        let (idx, c) = expected.terms().next().unwrap();
        assert!(c.is_one());
        // and it is the pairing of the (0,1)-arc and (2,3)-arc halves
        let s = HalfDiagram::new(4, vec![(0, 1)]).unwrap();
        let t = HalfDiagram::new(4, vec![(2, 3)]).unwrap();
        assert_eq!(a.diagrams().unwrap()[idx], pair_halves(&s, &t).unwrap());
    }

    #[test]
    fn associativity_exhaustive_n3() {
        let a = tl(3);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                for k in 0..a.dim() {
                    let (bi, bj, bk) = (
                        AlgebraElement::basis(i),
                        AlgebraElement::basis(j),
                        AlgebraElement::basis(k),
                    );
                    assert_eq!(
                        a.multiply(&a.multiply(&bi, &bj), &bk),
                        a.multiply(&bi, &a.multiply(&bj, &bk))
                    );
                }
            }
        }
    }

    #[test]
    fn involution_examples() {
        let a = tl(4);
        let e1e2e3 = a.element_from_word("e1*e2*e3").unwrap();
        let e3e2e1 = a.element_from_word("e3*e2*e1").unwrap();
        // mirror oracle: reflect the composed diagram
        assert_eq!(a.apply_involution(&e1e2e3), e3e2e1);

        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let x = random_element(&a, &mut rng);
            assert_eq!(a.apply_involution(&a.apply_involution(&x)), x);
        }

        // anti-homomorphism on all basis pairs, n=3
        let a3 = tl(3);
        for i in 0..a3.dim() {
            for j in 0..a3.dim() {
                let (bi, bj) = (AlgebraElement::basis(i), AlgebraElement::basis(j));
                assert_eq!(
                    a3.apply_involution(&a3.multiply(&bi, &bj)),
                    a3.multiply(&a3.apply_involution(&bj), &a3.apply_involution(&bi))
                );
            }
        }
    }

    #[test]
    fn symmetric_and_skew_parts() {
        let a = tl(4);
        let e1 = gen_elem(&a, 1);
        assert_eq!(a.symmetric_part(&e1), e1);
        assert!(a.skew_part(&e1).is_zero());

        let e1e2 = a.element_from_word("e1*e2").unwrap();
        let e2e1 = a.element_from_word("e2*e1").unwrap();
        let expected = e1e2.sub(&e2e1).scale_rational(&Rational::one_half());
        assert_eq!(a.skew_part(&e1e2), expected);

        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let x = random_element(&a, &mut rng);
            assert_eq!(a.symmetric_part(&x).add(&a.skew_part(&x)), x);
        }
    }

    #[test]
    fn jordan_and_lie_products() {
        let a = tl(3);
        let mut rng = SplitMix64::new(17);
        for _ in 0..20 {
            let x = random_element(&a, &mut rng);
            let y = random_element(&a, &mut rng);
            assert_eq!(a.jordan_product(&x, &y), a.jordan_product(&y, &x));
            assert!(a.lie_bracket(&x, &x).is_zero());
        }
        // Jordan identity (x o y) o (x o x) = x o (y o (x o x)) on random
        // symmetric elements, expanded brute-force through the table
        for _ in 0..10 {
            let x = a.symmetric_part(&random_element(&a, &mut rng));
            let y = a.symmetric_part(&random_element(&a, &mut rng));
            let xx = a.jordan_product(&x, &x);
            let lhs = a.jordan_product(&a.jordan_product(&x, &y), &xx);
            let rhs = a.jordan_product(&x, &a.jordan_product(&y, &xx));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn jacobi_identity_on_skew_elements_n3() {
        let a = tl(3);
        let mut rng = SplitMix64::new(23);
        for _ in 0..10 {
            let x = a.skew_part(&random_element(&a, &mut rng));
            let y = a.skew_part(&random_element(&a, &mut rng));
            let z = a.skew_part(&random_element(&a, &mut rng));
            let j = a
                .lie_bracket(&x, &a.lie_bracket(&y, &z))
                .add(&a.lie_bracket(&y, &a.lie_bracket(&z, &x)))
                .add(&a.lie_bracket(&z, &a.lie_bracket(&x, &y)));
            assert!(j.is_zero());
        }
    }

    #[test]
    fn symmetric_part_closed_under_jordan_skew_under_lie() {
        for n in [3usize, 4] {
            let a = tl(n);
            let sym: Vec<AlgebraElement> = (0..a.dim())
                .map(|i| a.symmetric_part(&AlgebraElement::basis(i)))
                .collect();
            let skew: Vec<AlgebraElement> = (0..a.dim())
                .map(|i| a.skew_part(&AlgebraElement::basis(i)))
                .collect();
            let sym_span = a.span_of(&sym);
            let skew_span = a.span_of(&skew);
            assert_eq!(sym_span.dim() + skew_span.dim(), a.dim());
            for x in &sym {
                for y in &sym {
                    let p = a.jordan_product(x, y);
                    assert!(sym_span.contains(&p.to_dense_fractions(a.dim())));
                }
            }
            for x in &skew {
                for y in &skew {
                    let p = a.lie_bracket(x, y);
                    assert!(skew_span.contains(&p.to_dense_fractions(a.dim())));
                }
            }
        }
    }

    #[test]
    fn iota_ideal_examples() {
        let a = tl(4);
        // the whole algebra
        let whole: Vec<AlgebraElement> = (0..a.dim()).map(AlgebraElement::basis).collect();
        assert!(a.is_iota_ideal(&whole));
        // the zero span
        assert!(a.is_iota_ideal(&[]));
        // all diagrams with at least one arc
        let arcs: Vec<AlgebraElement> = a
            .diagrams()
            .unwrap()
            .iter()
            .enumerate()
            .filter(|(_, d)| d.arc_count() >= 1)
            .map(|(i, _)| AlgebraElement::basis(i))
            .collect();
        assert_eq!(arcs.len(), 13);
        assert!(a.is_iota_ideal(&arcs));
        // the span of the unit alone is not an ideal
        assert!(!a.is_iota_ideal(&[a.unit().clone()]));
    }

    #[test]
    fn rejects_broken_tables() {
        // a 2-dim "algebra" with a non-associative table
        let labels = BasisLabels::Named(vec!["u".into(), "v".into()]);
        let u = AlgebraElement::basis(0);
        let v = AlgebraElement::basis(1);
        let table = vec![vec![u.clone(), v.clone()], vec![v.clone(), v.clone()]];
        // u is the unit; v*v = v makes this associative and commutative
        assert!(FiniteAlgebra::from_table(labels, table, u.clone(), vec![0, 1]).is_ok());

        let labels = BasisLabels::Named(vec!["u".into(), "v".into()]);
        let bad = vec![
            vec![u.clone(), v.clone()],
            vec![v.clone(), u.clone()], // v*v = u breaks nothing... pick involution wrong instead
        ];
        // swapping the involution on a commutative algebra is fine; break
        // involutivity instead
        assert_eq!(
            FiniteAlgebra::from_table(labels, bad, u.clone(), vec![1, 1]).unwrap_err(),
            AlgebraError::BadInvolution
        );

        // wrong unit
        let labels = BasisLabels::Named(vec!["u".into(), "v".into()]);
        let table = vec![vec![u.clone(), v.clone()], vec![v.clone(), v.clone()]];
        assert_eq!(
            FiniteAlgebra::from_table(labels, table, v.clone(), vec![0, 1]).unwrap_err(),
            AlgebraError::UnitLaw(0)
        );
    }

    #[test]
    fn word_parsing_errors() {
        let a = tl(3);
        assert!(a.element_from_word("").is_err());
        assert!(a.element_from_word("e7").is_err());
        assert!(a.element_from_word("x1").is_err());
        assert_eq!(a.element_from_word("id").unwrap(), *a.unit());
    }
}
