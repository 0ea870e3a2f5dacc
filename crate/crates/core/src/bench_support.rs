//! Entry points for the benchmark suite: the same operations routed through
//! the parallel scheduler and through the always-compiled sequential
//! fallback, so one criterion run can compare both. Not part of the public
//! API.

use crate::algebra::FiniteAlgebra;
use crate::cellular::{gram_matrix_inner, GramData};
use crate::twist::{check_hom_assoc_inner, CheckMode, CheckOutcome, HomAlgebra, HomKind};

pub fn tl_algebra_parallel(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::temperley_lieb_inner(n, false).expect("valid strand count")
}

pub fn tl_algebra_sequential(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::temperley_lieb_inner(n, true).expect("valid strand count")
}

pub fn hom_check_parallel(h: &HomAlgebra) -> CheckOutcome {
    check_hom_assoc_inner(h, HomKind::TypeII, CheckMode::Exhaustive, false)
}

pub fn hom_check_sequential(h: &HomAlgebra) -> CheckOutcome {
    check_hom_assoc_inner(h, HomKind::TypeII, CheckMode::Exhaustive, true)
}

pub fn gram_parallel(n: usize, d: usize) -> GramData {
    gram_matrix_inner(n, d, false).expect("valid arc count")
}

pub fn gram_sequential(n: usize, d: usize) -> GramData {
    gram_matrix_inner(n, d, true).expect("valid arc count")
}
