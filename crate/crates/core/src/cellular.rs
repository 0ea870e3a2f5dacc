//! Cell structure of the diagram algebra: the stratifying datum (arc counts,
//! half-diagram index sets, the pairing map), cell modules with their
//! concatenation action, the invariant bilinear form and its Gram matrices,
//! radical dimensions at exact specializations, semisimplicity, the Cartan
//! assembly from a decomposition matrix, and the two-sided ideal chain.
//!
//! The partial order on arc counts is increasing: the span of all diagrams
//! with more than `d` arcs is the higher stratum that expansions are reduced
//! against.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, FiniteAlgebra, LeftModule, SparseVec};
use crate::coeff::{DeltaPoly, ExactDomain, Matrix, MatrixError, Rational, Specialization};
use crate::diagram::{catalan, cell_coords, enumerate_half, DiagramError, HalfDiagram, TLDiagram};
use crate::exec;

#[derive(Debug, Error, PartialEq)]
pub enum CellError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("cell datum validation failed: {0}")]
    Validation(String),
    #[error("decomposition matrix must have at least as many rows as columns")]
    DecompositionShape,
    #[error("algebra is not semisimple at this specialization")]
    NotSemisimple,
}

/// The stratifying datum: arc counts `0..=n/2`, the half-diagram sets, the
/// bijection between coordinate triples `(d, s, t)` and basis diagrams, and
/// the involution permutation.
pub struct CellDatum {
    n: usize,
    lambda: Vec<usize>,
    m_sets: Vec<Vec<HalfDiagram>>,
    /// basis index -> (d, s, t) with s, t indices into `m_sets[d]`
    coords: Vec<(usize, usize, usize)>,
    /// (d, s, t) -> basis index
    index: BTreeMap<(usize, usize, usize), usize>,
    involution: Vec<usize>,
}

impl CellDatum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    pub fn m_set(&self, d: usize) -> &[HalfDiagram] {
        &self.m_sets[d]
    }

    pub fn m_sizes(&self) -> Vec<usize> {
        self.m_sets.iter().map(Vec::len).collect()
    }

    pub fn coords_of(&self, basis_index: usize) -> (usize, usize, usize) {
        self.coords[basis_index]
    }

    pub fn basis_index(&self, d: usize, s: usize, t: usize) -> usize {
        self.index[&(d, s, t)]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }
}

/// Builds and validates the datum over the diagram basis: the coordinate map
/// is a bijection onto the basis and the involution swaps coordinates. A
/// failure here would be an implementation bug and is surfaced as an error,
/// never swallowed.
pub fn cell_datum(algebra: &FiniteAlgebra) -> Result<CellDatum, CellError> {
    let diagrams = algebra
        .diagrams()
        .ok_or_else(|| CellError::Validation("algebra basis is not made of diagrams".into()))?;
    let n = diagrams.first().map(TLDiagram::n).unwrap_or(0);
    let lambda: Vec<usize> = (0..=n / 2).collect();
    let mut m_sets = Vec::with_capacity(lambda.len());
    for &d in &lambda {
        m_sets.push(enumerate_half(n, d)?);
    }

    let mut coords = Vec::with_capacity(diagrams.len());
    let mut index = BTreeMap::new();
    for (b, diagram) in diagrams.iter().enumerate() {
        let (d, s, t) = cell_coords(diagram);
        let si = m_sets[d]
            .binary_search(&s)
            .map_err(|_| CellError::Validation(format!("half {s:?} missing from M({d})")))?;
        let ti = m_sets[d]
            .binary_search(&t)
            .map_err(|_| CellError::Validation(format!("half {t:?} missing from M({d})")))?;
        if index.insert((d, si, ti), b).is_some() {
            return Err(CellError::Validation(format!(
                "coordinate clash at ({d},{si},{ti})"
            )));
        }
        coords.push((d, si, ti));
    }
    let expected: usize = m_sets.iter().map(|m| m.len() * m.len()).sum();
    if index.len() != diagrams.len() || expected != diagrams.len() {
        return Err(CellError::Validation(
            "coordinate map is not a bijection".into(),
        ));
    }

    let involution = algebra.involution_perm().to_vec();
    for (b, &(d, s, t)) in coords.iter().enumerate() {
        if coords[involution[b]] != (d, t, s) {
            return Err(CellError::Validation(format!(
                "involution does not swap coordinates at basis index {b}"
            )));
        }
    }

    Ok(CellDatum {
        n,
        lambda,
        m_sets,
        coords,
        index,
        involution,
    })
}

/// Outcome of the stratification axioms on one algebra.
pub struct CellularityReport {
    pub n: usize,
    /// the involution swaps coordinates on every basis diagram
    pub involution_axiom: bool,
    /// left multiplication by a generator expands within the stratum
    pub expansion_axiom: bool,
    /// expansion coefficients carry no dependence on the spectator coordinate
    pub t_independence: bool,
    /// the mirrored law for right multiplication by the involuted generator
    pub star_axiom: bool,
    pub failures: Vec<String>,
    /// extracted coefficient tables keyed by (generator number, d); entry
    /// (s', s) is the coefficient of C(s',t) in e_g * C(s,t)
    pub r_tables: BTreeMap<(usize, usize), Matrix<DeltaPoly>>,
}

impl CellularityReport {
    pub fn pass(&self) -> bool {
        self.involution_axiom && self.expansion_axiom && self.t_independence && self.star_axiom
    }
}

/// Expands `g * C(s, t)` and extracts the within-stratum column of
/// coefficients; terms must stay in stratum `d` with right coordinate `t`
/// or land strictly higher.
fn expansion_column(
    algebra: &FiniteAlgebra,
    datum: &CellDatum,
    g: usize,
    d: usize,
    s: usize,
    t: usize,
) -> Result<Vec<DeltaPoly>, String> {
    let m = datum.m_sets[d].len();
    let product = algebra.multiply(
        &AlgebraElement::basis(g),
        &AlgebraElement::basis(datum.basis_index(d, s, t)),
    );
    let mut column = vec![DeltaPoly::zero(); m];
    for (k, coeff) in product.terms() {
        let (dk, sk, tk) = datum.coords_of(k);
        if dk > d {
            continue;
        }
        if dk < d {
            return Err(format!(
                "product of b{g} with C({d},{s},{t}) drops to stratum {dk}"
            ));
        }
        if tk != t {
            return Err(format!(
                "product of b{g} with C({d},{s},{t}) moves the right coordinate to {tk}"
            ));
        }
        column[sk] = &column[sk] + coeff;
    }
    Ok(column)
}

/// Verifies the stratification axioms for every generator over every
/// coordinate triple, extracting the coefficient tables, checking their
/// independence from the spectator coordinate, and checking the mirrored law
/// under the involution.
pub fn verify_cellularity(datum: &CellDatum, algebra: &FiniteAlgebra) -> CellularityReport {
    let n = datum.n;
    let mut report = CellularityReport {
        n,
        involution_axiom: true,
        expansion_axiom: true,
        t_independence: true,
        star_axiom: true,
        failures: Vec::new(),
        r_tables: BTreeMap::new(),
    };

    for (b, &(d, s, t)) in datum.coords.iter().enumerate() {
        if datum.coords_of(datum.involution[b]) != (d, t, s) {
            report.involution_axiom = false;
            report
                .failures
                .push(format!("involution axiom fails at ({d},{s},{t})"));
        }
    }

    let generators: Vec<(usize, usize)> = (1..n)
        .filter_map(|i| algebra.generator_index(i).map(|g| (i, g)))
        .collect();

    for &(gnum, g) in &generators {
        for &d in &datum.lambda {
            let m = datum.m_sets[d].len();
            let mut table = Matrix::<DeltaPoly>::zeros(m, m);
            for s in 0..m {
                match expansion_column(algebra, datum, g, d, s, 0) {
                    Ok(column) => {
                        for (sp, c) in column.into_iter().enumerate() {
                            table[(sp, s)] = c;
                        }
                    }
                    Err(msg) => {
                        report.expansion_axiom = false;
                        report.failures.push(msg);
                    }
                }
            }
            // spectator independence: every other t yields the same column
            for t in 1..m {
                for s in 0..m {
                    match expansion_column(algebra, datum, g, d, s, t) {
                        Ok(column) => {
                            for (sp, c) in column.into_iter().enumerate() {
                                if table[(sp, s)] != c {
                                    report.t_independence = false;
                                    report.failures.push(format!(
                                        "coefficient ({sp},{s}) depends on spectator {t} for e{gnum}, d={d}"
                                    ));
                                }
                            }
                        }
                        Err(msg) => {
                            report.expansion_axiom = false;
                            report.failures.push(msg);
                        }
                    }
                }
            }
            // mirrored law: C(t,s) * i(g) expands with the same coefficients
            // over the right coordinate
            let g_star = algebra.apply_involution(&AlgebraElement::basis(g));
            for t in 0..m {
                for s in 0..m {
                    let product = algebra
                        .multiply(&AlgebraElement::basis(datum.basis_index(d, t, s)), &g_star);
                    let mut column = vec![DeltaPoly::zero(); m];
                    let mut ok = true;
                    for (k, coeff) in product.terms() {
                        let (dk, tk, sk) = datum.coords_of(k);
                        if dk > d {
                            continue;
                        }
                        if dk < d || tk != t {
                            ok = false;
                            break;
                        }
                        column[sk] = &column[sk] + coeff;
                    }
                    if !ok || (0..m).any(|sp| column[sp] != table[(sp, s)]) {
                        report.star_axiom = false;
                        report.failures.push(format!(
                            "mirrored expansion fails for e{gnum} at ({d},{s},{t})"
                        ));
                    }
                }
            }
            report.r_tables.insert((gnum, d), table);
        }
    }
    report
}

/// A cell module: half-diagrams with `d` arcs, the algebra acting by
/// concatenation on the closed side, with the rule that any composite
/// raising the arc count acts as zero.
pub struct CellModule {
    n: usize,
    d: usize,
    basis: Vec<HalfDiagram>,
    module: LeftModule,
}

impl CellModule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[HalfDiagram] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn module(&self) -> &LeftModule {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.module.algebra()
    }

    /// Action of a single basis diagram on a single basis half-diagram.
    pub fn act_basis(&self, a: usize, v: usize) -> &SparseVec {
        self.module.act_basis(a, v)
    }

    /// Action of an algebra element on a dense vector of coefficients.
    pub fn act(&self, x: &AlgebraElement, v: &[DeltaPoly]) -> Vec<DeltaPoly> {
        self.module.act(x, v)
    }
}

/// Traces the concatenation of a full diagram onto a half-diagram. Returns
/// the surviving half with the number of closed loops, or `None` when the
/// composite has more arcs than it started with.
pub fn act_diagram_on_half(a: &TLDiagram, v: &HalfDiagram) -> Option<(usize, HalfDiagram)> {
    let n = a.n();
    debug_assert_eq!(n, v.n());
    let right_of = |h: usize| 2 * n - 1 - h;
    let height_of = |p: usize| 2 * n - 1 - p;

    let mut visited = vec![false; n]; // points of v
    let mut arcs = Vec::new();
    let mut done = vec![false; n]; // left points of a

    // paths from the new closed side (a's left boundary)
    for start in 0..n {
        if done[start] {
            continue;
        }
        done[start] = true;
        let mut q = a.partner(start);
        loop {
            if q < n {
                // closed arc on the result
                done[q] = true;
                arcs.push((start.min(q), start.max(q)));
                break;
            }
            let h = height_of(q);
            visited[h] = true;
            match v.arc_partner(h) {
                Some(h2) => {
                    visited[h2] = true;
                    q = a.partner(right_of(h2));
                }
                None => break, // reaches an exit: a through strand survives
            }
        }
    }

    // paths between exits: each caps two through strands and kills the
    // element
    let mut capped = false;
    for &start in v.through() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut q = a.partner(right_of(start));
        loop {
            debug_assert!(q >= n, "exit path re-entered the closed side");
            let h = height_of(q);
            visited[h] = true;
            match v.arc_partner(h) {
                Some(h2) => {
                    visited[h2] = true;
                    q = a.partner(right_of(h2));
                }
                None => {
                    capped = true;
                    break;
                }
            }
        }
    }

    // everything still unvisited lies on closed loops
    let mut loops = 0;
    for h0 in 0..n {
        if visited[h0] {
            continue;
        }
        loops += 1;
        let mut h = h0;
        loop {
            visited[h] = true;
            let h2 = v.arc_partner(h).expect("loop strand must follow an arc");
            visited[h2] = true;
            let q = a.partner(right_of(h2));
            debug_assert!(q >= n, "loop strand escaped the middle");
            h = height_of(q);
            if h == h0 {
                break;
            }
        }
    }

    if capped {
        return None;
    }
    let half = HalfDiagram::new(n, arcs).expect("traced arcs are planar");
    debug_assert!(half.d() >= v.d(), "arcs are never destroyed");
    if half.d() > v.d() {
        return None;
    }
    Some((loops, half))
}

/// The cell module with `d` arcs over an existing diagram algebra.
pub fn cell_module_over(algebra: &Arc<FiniteAlgebra>, d: usize) -> Result<CellModule, CellError> {
    let diagrams = algebra
        .diagrams()
        .ok_or_else(|| CellError::Validation("algebra basis is not made of diagrams".into()))?;
    let n = diagrams.first().map(TLDiagram::n).unwrap_or(0);
    let basis = enumerate_half(n, d)?;
    let action: Vec<Vec<SparseVec>> = exec::map_indexed(diagrams.len(), |a| {
        basis
            .iter()
            .map(|v| match act_diagram_on_half(&diagrams[a], v) {
                None => Vec::new(),
                Some((loops, half)) => {
                    let target = basis
                        .binary_search(&half)
                        .expect("image half is in the enumerated set");
                    vec![(target, DeltaPoly::delta_pow(loops as u32))]
                }
            })
            .collect()
    });
    let module = LeftModule::new(Arc::clone(algebra), basis.len(), action)?;
    Ok(CellModule {
        n,
        d,
        basis,
        module,
    })
}

/// Convenience constructor building the algebra in place.
pub fn cell_module(n: usize, d: usize) -> Result<CellModule, CellError> {
    let algebra = Arc::new(FiniteAlgebra::temperley_lieb(n)?);
    cell_module_over(&algebra, d)
}

/// The Gram matrix of the invariant form on a cell module, with its exact
/// determinant.
pub struct GramData {
    pub n: usize,
    pub d: usize,
    pub matrix: Matrix<DeltaPoly>,
    pub det: DeltaPoly,
}

/// Builds the Gram matrix by pairing half-diagrams.
pub fn gram_matrix(n: usize, d: usize) -> Result<GramData, CellError> {
    gram_matrix_inner(n, d, false)
}

pub(crate) fn gram_matrix_inner(
    n: usize,
    d: usize,
    force_seq: bool,
) -> Result<GramData, CellError> {
    let halves = enumerate_half(n, d)?;
    let m = halves.len();
    let entry = |ij: usize| gram_entry(&halves[ij / m], &halves[ij % m]);
    let entries = if force_seq {
        exec::map_indexed_seq(m * m, entry)
    } else {
        exec::map_indexed(m * m, entry)
    };
    let mut matrix = Matrix::zeros(m, m);
    for (ij, e) in entries.into_iter().enumerate() {
        matrix[(ij / m, ij % m)] = e;
    }
    let det = matrix.det()?;
    Ok(GramData { n, d, matrix, det })
}

/// The pairing of two half-diagrams: lay one against the other and walk the
/// union of the two arc systems. Closed cycles contribute loop factors; a
/// path that starts and ends on the same side (its through strands close
/// onto an arc) kills the entry.
pub fn gram_entry(s: &HalfDiagram, t: &HalfDiagram) -> DeltaPoly {
    let n = s.n();
    debug_assert_eq!(n, t.n());
    let mut visited = vec![false; n];
    let mut loops: u32 = 0;

    // paths start at points free on at least one side
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let s_free = s.arc_partner(start).is_none();
        let t_free = t.arc_partner(start).is_none();
        if !s_free && !t_free {
            continue;
        }
        visited[start] = true;
        if s_free && t_free {
            continue; // isolated through strand: propagates
        }
        // walk away from the free side, alternating arc systems
        let mut follow_t = s_free;
        let mut p = start;
        loop {
            let next = if follow_t {
                t.arc_partner(p)
            } else {
                s.arc_partner(p)
            };
            match next {
                Some(q) => {
                    visited[q] = true;
                    p = q;
                    follow_t = !follow_t;
                }
                None => {
                    // the end is missing the side we tried to follow; the
                    // path propagates only if it is the opposite side from
                    // the start
                    let end_missing_t = follow_t;
                    let start_missing_t = !s_free;
                    if end_missing_t == start_missing_t {
                        return DeltaPoly::zero();
                    }
                    break;
                }
            }
        }
    }

    // remaining components are closed alternating cycles
    for start in 0..n {
        if visited[start] {
            continue;
        }
        loops += 1;
        let mut p = start;
        loop {
            visited[p] = true;
            let q = s
                .arc_partner(p)
                .expect("cycle point is covered on both sides");
            visited[q] = true;
            p = t
                .arc_partner(q)
                .expect("cycle point is covered on both sides");
            if p == start {
                break;
            }
        }
    }

    DeltaPoly::delta_pow(loops)
}

/// Nullspace dimension of the Gram matrix, generically over ℚ(d) or at an
/// exact rational specialization.
pub fn radical_dim(n: usize, d: usize, spec: &Specialization) -> Result<usize, CellError> {
    let gram = gram_matrix(n, d)?;
    let m = gram.matrix.rows();
    let rank = match spec {
        Specialization::Generic => gram.matrix.rank(),
        Specialization::At(x) => gram.matrix.eval(x).rank(),
    };
    Ok(m - rank)
}

/// A basis of the radical of the form, as polynomial coordinate vectors
/// (denominators cleared in the generic case).
pub fn radical_basis(
    n: usize,
    d: usize,
    spec: &Specialization,
) -> Result<Vec<Vec<DeltaPoly>>, CellError> {
    let gram = gram_matrix(n, d)?;
    match spec {
        Specialization::Generic => {
            let null = gram.matrix.to_fractions().nullspace();
            Ok(null
                .into_iter()
                .map(|v| {
                    let mut lcm = DeltaPoly::one();
                    for x in &v {
                        let den = x.denominator();
                        let g = lcm.gcd(den);
                        lcm = &lcm * &den.exact_div(&g);
                    }
                    v.iter()
                        .map(|x| x.numerator() * &lcm.exact_div(x.denominator()))
                        .collect()
                })
                .collect())
        }
        Specialization::At(x) => {
            let null = gram.matrix.eval(x).nullspace();
            Ok(null
                .into_iter()
                .map(|v| v.into_iter().map(DeltaPoly::constant).collect())
                .collect())
        }
    }
}

/// The arc counts whose Gram matrix is not identically zero at the
/// specialization; these index the simple quotients.
pub fn lambda_zero(n: usize, spec: &Specialization) -> Result<BTreeSet<usize>, CellError> {
    let mut out = BTreeSet::new();
    for d in 0..=n / 2 {
        let gram = gram_matrix(n, d)?;
        let nonzero = match spec {
            Specialization::Generic => !gram.matrix.is_identically_zero(),
            Specialization::At(x) => {
                let ev = gram.matrix.eval(x);
                (0..ev.rows()).any(|i| (0..ev.cols()).any(|j| !ev[(i, j)].is_zero()))
            }
        };
        if nonzero {
            out.insert(d);
        }
    }
    Ok(out)
}

/// Dimensions of the simple quotients, `|M(d)| - radical_dim(d)` for the arc
/// counts in [`lambda_zero`].
pub fn simple_dims(n: usize, spec: &Specialization) -> Result<BTreeMap<usize, usize>, CellError> {
    let mut out = BTreeMap::new();
    for d in lambda_zero(n, spec)? {
        let m = enumerate_half(n, d)?.len();
        out.insert(d, m - radical_dim(n, d, spec)?);
    }
    Ok(out)
}

/// True exactly when every cell module has trivial radical at the
/// specialization.
pub fn is_semisimple(n: usize, spec: &Specialization) -> Result<bool, CellError> {
    for d in 0..=n / 2 {
        if radical_dim(n, d, spec)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// In the semisimple regime the regular module decomposes with each cell
/// module appearing `dim` times, so the squared index-set sizes must sum to
/// the algebra dimension. Calling this outside that regime is a contract
/// violation.
pub fn wedderburn_check(n: usize, spec: &Specialization) -> Result<bool, CellError> {
    if !is_semisimple(n, spec)? {
        return Err(CellError::NotSemisimple);
    }
    let mut total: u64 = 0;
    for d in 0..=n / 2 {
        let m = enumerate_half(n, d)?.len() as u64;
        total += m * m;
    }
    Ok(total == catalan(n))
}

/// Cartan matrix from a decomposition matrix: `C = D^t D`.
pub fn cartan_from_decomposition(d: &Matrix<Rational>) -> Result<Matrix<Rational>, CellError> {
    if d.rows() < d.cols() {
        return Err(CellError::DecompositionShape);
    }
    Ok(d.transpose().matmul(d)?)
}

/// Report of the two-sided ideal chain, where the stratum at `d` is spanned
/// by all diagrams with at least `d` arcs.
pub struct ChainReport {
    pub n: usize,
    /// dimensions of the successive quotients, lowest arc count first
    pub layer_dims: Vec<usize>,
    /// per `d >= 1`: is the span a two-sided ideal stable under the
    /// involution?
    pub ideal_checks: Vec<(usize, bool)>,
    /// coordinates swap under the involution on every layer
    pub equivariance: bool,
    pub pass: bool,
}

/// Largest strand count for the exhaustive chain verification.
pub const MAX_CHAIN: usize = 6;

/// Builds the chain of spans of diagrams with at least `d` arcs and checks:
/// each is a two-sided ideal fixed by the involution, the layer dimensions
/// are the squared index-set sizes, and the involution acts on each layer by
/// swapping the two half-diagram coordinates.
pub fn verify_cell_chain(n: usize) -> Result<ChainReport, CellError> {
    if n == 0 || n > MAX_CHAIN {
        return Err(CellError::Validation(format!(
            "chain verification is capped at n <= {MAX_CHAIN}"
        )));
    }
    let algebra = FiniteAlgebra::temperley_lieb(n)?;
    let datum = cell_datum(&algebra)?;
    let diagrams = algebra.diagrams().expect("diagram basis");

    let mut layer_dims = Vec::new();
    let mut ideal_checks = Vec::new();
    let mut pass = true;

    for d in 0..=n / 2 {
        let span_ge: Vec<AlgebraElement> = diagrams
            .iter()
            .enumerate()
            .filter(|(_, dia)| dia.arc_count() >= d)
            .map(|(i, _)| AlgebraElement::basis(i))
            .collect();
        let exactly_d = diagrams.iter().filter(|dia| dia.arc_count() == d).count();
        let expected = datum.m_sets[d].len() * datum.m_sets[d].len();
        if exactly_d != expected {
            pass = false;
        }
        layer_dims.push(exactly_d);
        if d >= 1 {
            let ok = algebra.is_iota_ideal(&span_ge);
            if !ok {
                pass = false;
            }
            ideal_checks.push((d, ok));
        }
    }

    let equivariance = (0..algebra.dim()).all(|b| {
        let (d, s, t) = datum.coords_of(b);
        datum.coords_of(algebra.involution_perm()[b]) == (d, t, s)
    });
    if !equivariance {
        pass = false;
    }

    Ok(ChainReport {
        n,
        layer_dims,
        ideal_checks,
        equivariance,
        pass,
    })
}

/// Extends the Gram pairing bilinearly to coordinate vectors.
pub fn gram_pair(gram: &Matrix<DeltaPoly>, x: &[DeltaPoly], y: &[DeltaPoly]) -> DeltaPoly {
    let mut acc = DeltaPoly::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            acc = &acc + &(&(xi * yj) * &gram[(i, j)]);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pair_halves;

    fn tl(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::temperley_lieb(n).unwrap()
    }

    fn half(n: usize, arcs: &[(usize, usize)]) -> HalfDiagram {
        HalfDiagram::new(n, arcs.to_vec()).unwrap()
    }

    fn poly(s: &str) -> DeltaPoly {
        s.parse().unwrap()
    }

    #[test]
    fn datum_shapes() {
        let a4 = tl(4);
        let datum = cell_datum(&a4).unwrap();
        assert_eq!(datum.lambda(), &[0, 1, 2]);
        assert_eq!(datum.m_sizes(), vec![1, 3, 2]);
        let square_sum: usize = datum.m_sizes().iter().map(|m| m * m).sum();
        assert_eq!(square_sum, 14);

        let a3 = tl(3);
        let datum3 = cell_datum(&a3).unwrap();
        assert_eq!(datum3.lambda(), &[0, 1]);
        assert_eq!(datum3.m_sizes(), vec![1, 2]);
    }

    #[test]
    fn cellularity_verification_passes_small_sizes() {
        for n in 1..=5 {
            let a = tl(n);
            let datum = cell_datum(&a).unwrap();
            let report = verify_cellularity(&datum, &a);
            assert!(report.pass(), "n={n}: {:?}", report.failures);
        }
    }

    #[test]
    fn extracted_tables_have_no_spectator_dependence() {
        let a = tl(4);
        let datum = cell_datum(&a).unwrap();
        for g in 1..4 {
            let gidx = a.generator_index(g).unwrap();
            let m = datum.m_set(1).len();
            let mut tables = Vec::new();
            for t in 0..m {
                let mut table = Matrix::<DeltaPoly>::zeros(m, m);
                for s in 0..m {
                    let col = expansion_column(&a, &datum, gidx, 1, s, t).unwrap();
                    for (sp, c) in col.into_iter().enumerate() {
                        table[(sp, s)] = c;
                    }
                }
                tables.push(table);
            }
            for t in 1..m {
                assert_eq!(tables[0], tables[t], "generator {g}, spectator {t}");
            }
        }
    }

    #[test]
    fn action_examples_from_worked_diagrams() {
        let algebra = Arc::new(tl(4));
        let c1 = cell_module_over(&algebra, 1).unwrap();
        let a = &algebra;

        let arc01 = half(4, &[(0, 1)]);
        let arc23 = half(4, &[(2, 3)]);
        let via_word = |w: &str| {
            let e = a.element_from_word(w).unwrap();
            let (idx, c) = e.terms().next().unwrap();
            assert!(c.is_one());
            idx
        };
        let idx_of = |h: &HalfDiagram| c1.basis().binary_search(h).unwrap();

        // the stratum-1 diagram pairing (arc 2,3 | arc 0,1) — the composed
        // word e3 e2 e1 — caps the arc(2,3) half: it acts as zero there
        let e3e2e1 = via_word("e3*e2*e1");
        assert!(c1.act_basis(e3e2e1, idx_of(&arc23)).is_empty());
        // mirrored rendition: e1 e2 e3 kills the arc(0,1) half
        let e1e2e3 = via_word("e1*e2*e3");
        assert!(c1.act_basis(e1e2e3, idx_of(&arc01)).is_empty());

        // against the opposite halves they close one loop
        assert_eq!(
            c1.act_basis(e3e2e1, idx_of(&arc01)),
            &vec![(idx_of(&arc23), poly("d"))]
        );
        assert_eq!(
            c1.act_basis(e1e2e3, idx_of(&arc23)),
            &vec![(idx_of(&arc01), poly("d"))]
        );

        // e1 closes a loop on the arc(0,1) half and returns it unchanged
        let e1 = a.generator_index(1).unwrap();
        assert_eq!(
            c1.act_basis(e1, idx_of(&arc01)),
            &vec![(idx_of(&arc01), poly("d"))]
        );

        // the unit acts as the identity on every half
        let unit_idx = a
            .index_of_diagram(&TLDiagram::identity(4).unwrap())
            .unwrap();
        for v in 0..c1.dim() {
            assert_eq!(c1.act_basis(unit_idx, v), &vec![(v, DeltaPoly::one())]);
        }
    }

    #[test]
    fn gram_matrices_match_worked_values() {
        let g = gram_matrix(3, 1).unwrap();
        let expected =
            Matrix::from_rows(vec![vec![poly("d"), poly("1")], vec![poly("1"), poly("d")]])
                .unwrap();
        assert_eq!(g.matrix, expected);
        assert_eq!(g.det, poly("d^2 - 1"));

        let g = gram_matrix(4, 1).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![poly("d"), poly("1"), poly("0")],
            vec![poly("1"), poly("d"), poly("1")],
            vec![poly("0"), poly("1"), poly("d")],
        ])
        .unwrap();
        assert_eq!(g.matrix, expected);
        assert_eq!(g.det, poly("d^3 - 2*d"));

        let g = gram_matrix(4, 2).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![poly("d^2"), poly("d")],
            vec![poly("d"), poly("d^2")],
        ])
        .unwrap();
        assert_eq!(g.matrix, expected);
        assert_eq!(g.det, poly("d^4 - d^2"));

        for n in 1..=6 {
            let g = gram_matrix(n, 0).unwrap();
            assert_eq!(g.matrix, Matrix::from_rows(vec![vec![poly("1")]]).unwrap());
        }
    }

    /// Independent oracle: the Gram entry read off by composing the full
    /// diagrams C(s,s) * C(t,t) and splitting the composite.
    fn gram_entry_by_composition(s: &HalfDiagram, t: &HalfDiagram) -> DeltaPoly {
        let left = pair_halves(s, s).unwrap();
        let right = pair_halves(t, t).unwrap();
        let (composite, loops) = left.compose(&right).unwrap();
        let (d2, s2, t2) = cell_coords(&composite);
        if d2 > s.d() {
            return DeltaPoly::zero();
        }
        assert_eq!(
            (&s2, &t2),
            (s, t),
            "surviving composite keeps its coordinates"
        );
        DeltaPoly::delta_pow(loops as u32)
    }

    #[test]
    fn gram_agrees_with_composition_oracle() {
        for n in 1..=6 {
            for d in 0..=n / 2 {
                let halves = enumerate_half(n, d).unwrap();
                let g = gram_matrix(n, d).unwrap();
                for (i, s) in halves.iter().enumerate() {
                    for (j, t) in halves.iter().enumerate() {
                        assert_eq!(
                            g.matrix[(i, j)],
                            gram_entry_by_composition(s, t),
                            "n={n} d={d} ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gram_matrices_are_symmetric_up_to_n6() {
        for n in 1..=6 {
            for d in 0..=n / 2 {
                assert!(gram_matrix(n, d).unwrap().matrix.is_symmetric());
            }
        }
    }

    #[test]
    fn form_is_invariant_under_the_action() {
        // pairing(i(a).x, y) = pairing(x, a.y) for all generators a
        for n in 2..=5 {
            let algebra = Arc::new(tl(n));
            for d in 0..=n / 2 {
                let module = cell_module_over(&algebra, d).unwrap();
                let gram = gram_matrix(n, d).unwrap();
                let m = module.dim();
                for g in 1..n {
                    let ge = AlgebraElement::basis(algebra.generator_index(g).unwrap());
                    let gi = algebra.apply_involution(&ge);
                    for x in 0..m {
                        let mut xv = vec![DeltaPoly::zero(); m];
                        xv[x] = DeltaPoly::one();
                        for y in 0..m {
                            let mut yv = vec![DeltaPoly::zero(); m];
                            yv[y] = DeltaPoly::one();
                            let lhs = gram_pair(&gram.matrix, &module.act(&gi, &xv), &yv);
                            let rhs = gram_pair(&gram.matrix, &xv, &module.act(&ge, &yv));
                            assert_eq!(lhs, rhs, "n={n} d={d} g={g} ({x},{y})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn radical_dimensions() {
        let generic = Specialization::Generic;
        assert_eq!(radical_dim(4, 2, &generic).unwrap(), 0);
        let at1 = Specialization::at(1, 1);
        assert_eq!(radical_dim(4, 2, &at1).unwrap(), 1);
        assert_eq!(radical_dim(3, 1, &at1).unwrap(), 1);
        for n in 1..=6 {
            for d in 0..=n / 2 {
                assert_eq!(radical_dim(n, d, &generic).unwrap(), 0, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn radical_basis_spans_the_nullspace() {
        let at1 = Specialization::at(1, 1);
        let basis = radical_basis(4, 2, &at1).unwrap();
        assert_eq!(basis.len(), 1);
        // the vector is proportional to (1, -1)
        let v = &basis[0];
        assert_eq!(&v[0] + &v[1], DeltaPoly::zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn simple_dimensions_and_lambda_zero() {
        let at2 = Specialization::at(2, 1);
        let dims = simple_dims(4, &at2).unwrap();
        assert_eq!(dims, BTreeMap::from([(0, 1), (1, 3), (2, 2)]));
        assert_eq!(lambda_zero(4, &at2).unwrap(), BTreeSet::from([0, 1, 2]));

        let at1 = Specialization::at(1, 1);
        let dims = simple_dims(4, &at1).unwrap();
        assert_eq!(dims.get(&2), Some(&1));
    }

    #[test]
    fn semisimplicity_dichotomy() {
        assert!(is_semisimple(4, &Specialization::at(2, 1)).unwrap());
        assert!(!is_semisimple(4, &Specialization::at(1, 1)).unwrap());
        assert!(is_semisimple(4, &Specialization::Generic).unwrap());
    }

    #[test]
    fn wedderburn_counts() {
        let generic = Specialization::Generic;
        assert!(wedderburn_check(3, &generic).unwrap()); // 1 + 4 = 5
        assert!(wedderburn_check(4, &generic).unwrap()); // 1 + 9 + 4 = 14
        assert!(wedderburn_check(5, &generic).unwrap()); // 1 + 16 + 25 = 42
        assert_eq!(
            wedderburn_check(4, &Specialization::at(1, 1)).unwrap_err(),
            CellError::NotSemisimple
        );
    }

    #[test]
    fn cartan_assembly() {
        let rat = |x: i64| Rational::from_int(x);
        let id = Matrix::<Rational>::identity(3);
        assert_eq!(cartan_from_decomposition(&id).unwrap(), id);

        let d = Matrix::from_rows(vec![vec![rat(1)], vec![rat(1)]]).unwrap();
        assert_eq!(
            cartan_from_decomposition(&d).unwrap(),
            Matrix::from_rows(vec![vec![rat(2)]]).unwrap()
        );

        let d = Matrix::from_rows(vec![
            vec![rat(1), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(0), rat(1)],
        ])
        .unwrap();
        let expected = Matrix::from_rows(vec![vec![rat(2), rat(1)], vec![rat(1), rat(2)]]).unwrap();
        assert_eq!(cartan_from_decomposition(&d).unwrap(), expected);

        let bad = Matrix::from_rows(vec![vec![rat(1), rat(0), rat(1)]]).unwrap();
        assert_eq!(
            cartan_from_decomposition(&bad).unwrap_err(),
            CellError::DecompositionShape
        );
    }

    #[test]
    fn chain_reports() {
        let report = verify_cell_chain(4).unwrap();
        assert!(report.pass);
        assert_eq!(report.layer_dims, vec![1, 9, 4]);
        assert!(report.ideal_checks.iter().all(|&(_, ok)| ok));
        assert!(report.equivariance);

        let report3 = verify_cell_chain(3).unwrap();
        assert!(report3.pass);
        assert_eq!(report3.layer_dims, vec![1, 4]);

        assert!(verify_cell_chain(7).is_err());
    }

    #[test]
    fn action_factors_through_products_exhaustively_n3() {
        let algebra = Arc::new(tl(3));
        let c1 = cell_module_over(&algebra, 1).unwrap();
        for a in 0..algebra.dim() {
            for b in 0..algebra.dim() {
                let ab = algebra.structure_constant(a, b);
                for v in 0..c1.dim() {
                    let mut base = vec![DeltaPoly::zero(); c1.dim()];
                    base[v] = DeltaPoly::one();
                    let lhs = c1.act(
                        &AlgebraElement::basis(a),
                        &c1.act(&AlgebraElement::basis(b), &base),
                    );
                    let rhs = c1.act(&ab, &base);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
