//! Concrete evaluation of terms on algebra elements: the multiplication box
//! becomes a product, the twist box the (anti-)involution, the swap permutes
//! arguments and the unit box inserts the distinguished element. Used to
//! spot-check that rewrite rules denote true identities on an actual
//! algebra.

use crate::algebra::{AlgebraElement, FiniteAlgebra};
use crate::twist::HomAlgebra;

use super::term::{Gen, Term, TermError};

/// What the generator boxes mean: either the plain product with the
/// involution, or the deformed product with the twisting map (where the old
/// unit is only a weak unit).
pub enum EvalModel<'a> {
    Plain(&'a FiniteAlgebra),
    Twisted(&'a HomAlgebra),
}

impl EvalModel<'_> {
    fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        match self {
            EvalModel::Plain(a) => a.multiply(x, y),
            EvalModel::Twisted(h) => h.product(x, y),
        }
    }

    fn alpha(&self, x: &AlgebraElement) -> AlgebraElement {
        match self {
            EvalModel::Plain(a) => a.apply_involution(x),
            EvalModel::Twisted(h) => h.twist(x),
        }
    }

    fn unit(&self) -> AlgebraElement {
        match self {
            EvalModel::Plain(a) => a.unit().clone(),
            EvalModel::Twisted(h) => h.weak_unit().clone(),
        }
    }
}

/// Runs a term bottom-to-top on a tuple of elements.
pub fn evaluate(
    term: &Term,
    inputs: &[AlgebraElement],
    model: &EvalModel,
) -> Result<Vec<AlgebraElement>, TermError> {
    if inputs.len() != term.inputs() {
        return Err(TermError::Arity {
            expected: term.inputs(),
            got: inputs.len(),
        });
    }
    let mut live: Vec<AlgebraElement> = inputs.to_vec();
    for layer in term.layers() {
        let mut next = Vec::new();
        let mut cursor = 0usize;
        for &g in layer {
            match g {
                Gen::Id => {
                    next.push(live[cursor].clone());
                    cursor += 1;
                }
                Gen::Mu => {
                    next.push(model.mul(&live[cursor], &live[cursor + 1]));
                    cursor += 2;
                }
                Gen::Alpha => {
                    next.push(model.alpha(&live[cursor]));
                    cursor += 1;
                }
                Gen::Sigma => {
                    next.push(live[cursor + 1].clone());
                    next.push(live[cursor].clone());
                    cursor += 2;
                }
                Gen::Eta => next.push(model.unit()),
            }
        }
        live = next;
    }
    Ok(live)
}
