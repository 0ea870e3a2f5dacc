//! Subspaces of F^n held as row-reduced spanning sets. Membership,
//! intersection, sum and equality are all exact rank computations; the
//! reduced basis makes equality structural.

use super::{Field, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Span<F> {
    ambient: usize,
    /// Rows of the reduced row echelon form, zero rows dropped.
    basis: Vec<Vec<F>>,
}

impl<F: Field> Span<F> {
    pub fn zero(ambient: usize) -> Self {
        Span {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let vecs = (0..ambient)
            .map(|i| {
                let mut v = vec![F::zero(); ambient];
                v[i] = F::one();
                v
            })
            .collect();
        Span {
            ambient,
            basis: vecs,
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<F>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        if vectors.is_empty() {
            return Span::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec()).expect("rectangular");
        let (rref, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| rref.row(i).to_vec()).collect();
        Span { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Exact membership: the vector joins the span without raising its rank,
    /// computed by reducing against the stored echelon basis.
    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for row in &self.basis {
            let pivot = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("no zero rows in basis");
            if w[pivot].is_zero() {
                continue;
            }
            let factor = w[pivot].clone();
            for (slot, entry) in w.iter_mut().zip(row) {
                if !entry.is_zero() {
                    *slot = slot.sub_ref(&factor.mul_ref(entry));
                }
            }
        }
        w.iter().all(F::is_zero)
    }

    pub fn contains_span(&self, other: &Span<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Span<F>) -> Span<F> {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Span::from_vectors(self.ambient, &rows)
    }

    /// Exact intersection via the left nullspace of the stacked bases.
    pub fn intersect(&self, other: &Span<F>) -> Span<F> {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Span::zero(self.ambient);
        }
        // Rows a_1..a_k, b_1..b_m; solutions of sum(x_i a_i) = sum(y_j b_j)
        // are the nullspace of the transpose of [A; -B].
        let mut rows = self.basis.clone();
        rows.extend(
            other
                .basis
                .iter()
                .map(|b| b.iter().map(F::neg_ref).collect()),
        );
        let stacked = Matrix::from_rows(rows).expect("rectangular");
        let null = stacked.transpose().nullspace();
        let k = self.dim();
        let vectors: Vec<Vec<F>> = null
            .iter()
            .map(|coeffs| {
                let mut v = vec![F::zero(); self.ambient];
                for (i, basis_vec) in self.basis.iter().enumerate() {
                    if coeffs[i].is_zero() {
                        continue;
                    }
                    for (slot, entry) in v.iter_mut().zip(basis_vec) {
                        *slot = slot.add_ref(&coeffs[i].mul_ref(entry));
                    }
                }
                let _ = k;
                v
            })
            .collect();
        Span::from_vectors(self.ambient, &vectors)
    }
}
