//! Planar diagram combinatorics on `n` strands.
//!
//! Boundary convention: the `2n` boundary points of a diagram are numbered
//! `0..n-1` up the left side (bottom to top) and `n..2n-1` down the right
//! side (top to bottom), so the numbering runs around the rectangle and
//! planarity is exactly non-crossing of chords in this circular order. The
//! right-side point at height `h` is `2n-1-h`.
//!
//! A half-diagram records the left side only: `d` disjoint non-crossing arcs
//! on the points `0..n-1` (nesting allowed) plus `n-2d` through points, which
//! may not sit under an arc.

use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("strand count {0} out of range {1}..={2}")]
    StrandCountOutOfRange(usize, usize, usize),
    #[error("generator index {index} out of range 1..={max}")]
    GeneratorIndex { index: usize, max: usize },
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("arc count mismatch: {0} vs {1}")]
    ArcCountMismatch(usize, usize),
    #[error("not a fixed-point-free involution on 0..{0}")]
    BadMatching(usize),
    #[error("matching has crossing chords")]
    NotPlanar,
    #[error("arcs overlap or cross")]
    BadArcs,
    #[error("through point {0} lies under an arc")]
    CoveredThrough(usize),
    #[error("arc count {d} too large for {n} strands")]
    TooManyArcs { n: usize, d: usize },
}

/// Largest strand count accepted by the exhaustive enumerators.
pub const MAX_ENUMERATION: usize = 10;

/// A planar perfect matching of the `2n` boundary points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    n: usize,
    matching: Vec<usize>,
}

impl TLDiagram {
    /// Validates that `matching` is a fixed-point-free involution on
    /// `0..2n` and that its chords are non-crossing.
    pub fn new(n: usize, matching: Vec<usize>) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::StrandCountOutOfRange(0, 1, usize::MAX));
        }
        if matching.len() != 2 * n {
            return Err(DiagramError::BadMatching(2 * n));
        }
        for (i, &j) in matching.iter().enumerate() {
            if j >= 2 * n || j == i || matching[j] != i {
                return Err(DiagramError::BadMatching(2 * n));
            }
        }
        let diagram = TLDiagram { n, matching };
        if !diagram.is_planar() {
            return Err(DiagramError::NotPlanar);
        }
        Ok(diagram)
    }

    /// Horizontal strands: left height `i` to right height `i`.
    pub fn identity(n: usize) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::StrandCountOutOfRange(0, 1, usize::MAX));
        }
        let matching = (0..2 * n).map(|i| 2 * n - 1 - i).collect();
        Ok(TLDiagram { n, matching })
    }

    /// The cup-cap generator at heights `i-1`, `i` (1-based `i`).
    pub fn generator(n: usize, i: usize) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::StrandCountOutOfRange(0, 1, usize::MAX));
        }
        if i < 1 || i > n - 1 {
            return Err(DiagramError::GeneratorIndex {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        let mut matching: Vec<usize> = (0..2 * n).map(|p| 2 * n - 1 - p).collect();
        // left pair (i-1, i); right pair at the mirrored heights
        matching[i - 1] = i;
        matching[i] = i - 1;
        matching[2 * n - 1 - i] = 2 * n - i;
        matching[2 * n - i] = 2 * n - 1 - i;
        Ok(TLDiagram { n, matching })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, p: usize) -> usize {
        self.matching[p]
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// Right-side boundary point at height `h`.
    pub fn right_point(n: usize, h: usize) -> usize {
        2 * n - 1 - h
    }

    /// Chord pairs `(min, max)` sorted by left endpoint.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut ps: Vec<(usize, usize)> = (0..2 * self.n)
            .filter(|&i| i < self.matching[i])
            .map(|i| (i, self.matching[i]))
            .collect();
        ps.sort_unstable();
        ps
    }

    fn is_planar(&self) -> bool {
        // chords cross iff their endpoints interleave in the boundary order
        let pairs = self.pairs();
        for (idx, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[idx + 1..] {
                let c_inside = a < c && c < b;
                let d_inside = a < d && d < b;
                if c_inside != d_inside {
                    return false;
                }
            }
        }
        true
    }

    /// Glues `self`'s right boundary to `other`'s left boundary
    /// (height-aligned), traces the composite strands and returns the
    /// resulting diagram together with the number of closed loops removed.
    pub fn compose(&self, other: &TLDiagram) -> Result<(TLDiagram, usize), DiagramError> {
        if self.n != other.n {
            return Err(DiagramError::StrandMismatch(self.n, other.n));
        }
        let n = self.n;
        // Middle interface height h joins self's right point 2n-1-h to
        // other's left point h.
        let mut result = vec![usize::MAX; 2 * n];
        let mut visited_mid = vec![false; n];

        // Composite boundary: 0..n-1 = self's left, n..2n-1 = other's right.
        for start in 0..2 * n {
            if result[start] != usize::MAX {
                continue;
            }
            let (mut in_first, mut point) = (start < n, start);
            let end;
            loop {
                if in_first {
                    let q = self.matching[point];
                    if q < n {
                        end = q; // exits on the composite left
                        break;
                    }
                    let h = 2 * n - 1 - q;
                    visited_mid[h] = true;
                    in_first = false;
                    point = h; // other's left point at the same height
                } else {
                    let q = other.matching[point];
                    if q >= n {
                        end = q; // exits on the composite right
                        break;
                    }
                    visited_mid[q] = true;
                    in_first = true;
                    point = 2 * n - 1 - q; // self's right point at height q
                }
            }
            result[start] = end;
            result[end] = start;
        }

        // Untouched middle heights lie on closed loops; walk and count them.
        let mut loops = 0;
        for h0 in 0..n {
            if visited_mid[h0] {
                continue;
            }
            loops += 1;
            let mut h = h0;
            loop {
                visited_mid[h] = true;
                // across `other`: left point h to another left point
                let h2 = other.matching[h];
                debug_assert!(h2 < n, "loop strand escaped the middle");
                visited_mid[h2] = true;
                // across `self`: right point at height h2 back to the middle
                let q = self.matching[2 * n - 1 - h2];
                debug_assert!(q >= n, "loop strand escaped the middle");
                h = 2 * n - 1 - q;
                if h == h0 {
                    break;
                }
            }
        }

        let diagram = TLDiagram {
            n,
            matching: result,
        };
        debug_assert!(diagram.is_planar());
        Ok((diagram, loops))
    }

    /// Left-right mirror preserving heights: boundary point `p` maps to
    /// `2n-1-p`.
    pub fn involute(&self) -> TLDiagram {
        let n = self.n;
        let mirror = |p: usize| 2 * n - 1 - p;
        let matching = (0..2 * n)
            .map(|p| mirror(self.matching[mirror(p)]))
            .collect();
        TLDiagram { n, matching }
    }

    /// Number of arcs on the left side (= number on the right side).
    pub fn arc_count(&self) -> usize {
        (0..self.n)
            .filter(|&i| i < self.matching[i] && self.matching[i] < self.n)
            .count()
    }
}

impl fmt::Debug for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TLDiagram(n={}, pairs={:?})", self.n, self.pairs())
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for TLDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DiagramJson {
            n: self.n,
            pairs: self.pairs(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TLDiagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(deserializer)?;
        if raw.n == 0 {
            return Err(D::Error::custom("strand count must be positive"));
        }
        let mut matching = vec![usize::MAX; 2 * raw.n];
        for (a, b) in raw.pairs {
            if a >= 2 * raw.n || b >= 2 * raw.n {
                return Err(D::Error::custom("pair out of range"));
            }
            matching[a] = b;
            matching[b] = a;
        }
        if matching.contains(&usize::MAX) {
            return Err(D::Error::custom("incomplete matching"));
        }
        TLDiagram::new(raw.n, matching).map_err(D::Error::custom)
    }
}

/// A left half-diagram: `d` arcs on the points `0..n-1` plus the unmatched
/// through points in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfDiagram {
    n: usize,
    arcs: Vec<(usize, usize)>,
    through: Vec<usize>,
}

impl HalfDiagram {
    pub fn new(n: usize, mut arcs: Vec<(usize, usize)>) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::StrandCountOutOfRange(0, 1, usize::MAX));
        }
        if 2 * arcs.len() > n {
            return Err(DiagramError::TooManyArcs { n, d: arcs.len() });
        }
        for arc in arcs.iter_mut() {
            if arc.0 > arc.1 {
                *arc = (arc.1, arc.0);
            }
        }
        arcs.sort_unstable();
        let mut used = vec![false; n];
        for &(a, b) in &arcs {
            if b >= n || a == b || used[a] || used[b] {
                return Err(DiagramError::BadArcs);
            }
            used[a] = true;
            used[b] = true;
        }
        // non-crossing among arcs
        for (i, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[i + 1..] {
                let c_in = a < c && c < b;
                let d_in = a < d && d < b;
                if c_in != d_in {
                    return Err(DiagramError::BadArcs);
                }
            }
        }
        let through: Vec<usize> = (0..n).filter(|&p| !used[p]).collect();
        // through points may not be trapped under an arc
        for &t in &through {
            if arcs.iter().any(|&(a, b)| a < t && t < b) {
                return Err(DiagramError::CoveredThrough(t));
            }
        }
        Ok(HalfDiagram { n, arcs, through })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arcs.
    pub fn d(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn through(&self) -> &[usize] {
        &self.through
    }

    /// Partner of `p` under the arcs, if any.
    pub fn arc_partner(&self, p: usize) -> Option<usize> {
        self.arcs.iter().find_map(|&(a, b)| {
            if a == p {
                Some(b)
            } else if b == p {
                Some(a)
            } else {
                None
            }
        })
    }
}

impl fmt::Debug for HalfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HalfDiagram(n={}, arcs={:?}, through={:?})",
            self.n, self.arcs, self.through
        )
    }
}

#[derive(Serialize, Deserialize)]
struct HalfJson {
    n: usize,
    arcs: Vec<(usize, usize)>,
    through: Vec<usize>,
}

impl Serialize for HalfDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HalfJson {
            n: self.n,
            arcs: self.arcs.clone(),
            through: self.through.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HalfDiagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = HalfJson::deserialize(deserializer)?;
        let half = HalfDiagram::new(raw.n, raw.arcs).map_err(D::Error::custom)?;
        if half.through != raw.through {
            return Err(D::Error::custom("through list inconsistent with arcs"));
        }
        Ok(half)
    }
}

/// Catalan number C_n (exact, panics past u64 range).
pub fn catalan(n: usize) -> u64 {
    let mut binom: u128 = 1;
    for k in 0..n {
        binom = binom * (2 * n - k) as u128 / (k + 1) as u128;
    }
    u64::try_from(binom / (n as u128 + 1)).expect("catalan overflow")
}

/// All planar perfect matchings on the `2n` boundary points, sorted
/// lexicographically on the matching array.
pub fn enumerate_diagrams(n: usize) -> Result<Vec<TLDiagram>, DiagramError> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(DiagramError::StrandCountOutOfRange(n, 1, MAX_ENUMERATION));
    }
    let points: Vec<usize> = (0..2 * n).collect();
    let mut out: Vec<TLDiagram> = noncrossing_matchings(&points)
        .into_iter()
        .map(|pairs| {
            let mut matching = vec![0; 2 * n];
            for (a, b) in pairs {
                matching[a] = b;
                matching[b] = a;
            }
            TLDiagram { n, matching }
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Non-crossing perfect matchings of an ordered point list: the first point
/// pairs with a point at odd offset, splitting the rest into an inside and
/// an outside block that are matched independently.
fn noncrossing_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut result = Vec::new();
    let first = points[0];
    for k in (1..points.len()).step_by(2) {
        let partner = points[k];
        for inside in noncrossing_matchings(&points[1..k]) {
            for outside in noncrossing_matchings(&points[k + 1..]) {
                let mut m = Vec::with_capacity(points.len() / 2);
                m.push((first, partner));
                m.extend_from_slice(&inside);
                m.extend_from_slice(&outside);
                result.push(m);
            }
        }
    }
    result
}

/// All half-diagrams on `n` points with exactly `d` arcs, sorted
/// lexicographically on the arc list.
pub fn enumerate_half(n: usize, d: usize) -> Result<Vec<HalfDiagram>, DiagramError> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(DiagramError::StrandCountOutOfRange(n, 1, MAX_ENUMERATION));
    }
    if 2 * d > n {
        return Err(DiagramError::TooManyArcs { n, d });
    }
    let mut out = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    fill_halves(n, d, 0, &mut open, &mut arcs, &mut out);
    out.sort_unstable_by(|a, b| a.arcs.cmp(&b.arcs));
    Ok(out)
}

fn fill_halves(
    n: usize,
    d: usize,
    point: usize,
    open: &mut Vec<usize>,
    arcs: &mut Vec<(usize, usize)>,
    out: &mut Vec<HalfDiagram>,
) {
    if point == n {
        if open.is_empty() && arcs.len() == d {
            out.push(HalfDiagram::new(n, arcs.clone()).expect("construction is valid"));
        }
        return;
    }
    // close the innermost open arc
    if let Some(&start) = open.last() {
        open.pop();
        arcs.push((start, point));
        fill_halves(n, d, point + 1, open, arcs, out);
        arcs.pop();
        open.push(start);
    }
    // open a new arc
    if arcs.len() + open.len() < d {
        open.push(point);
        fill_halves(n, d, point + 1, open, arcs, out);
        open.pop();
    }
    // leave as a through point: only valid outside every arc
    if open.is_empty() {
        fill_halves(n, d, point + 1, open, arcs, out);
    }
}

/// The unique planar diagram whose left half is `s` and whose right half is
/// the mirror of `t`, through strands joined in height order.
pub fn pair_halves(s: &HalfDiagram, t: &HalfDiagram) -> Result<TLDiagram, DiagramError> {
    if s.n != t.n {
        return Err(DiagramError::StrandMismatch(s.n, t.n));
    }
    if s.d() != t.d() {
        return Err(DiagramError::ArcCountMismatch(s.d(), t.d()));
    }
    let n = s.n;
    let mirror = |p: usize| 2 * n - 1 - p;
    let mut matching = vec![usize::MAX; 2 * n];
    for &(a, b) in &s.arcs {
        matching[a] = b;
        matching[b] = a;
    }
    for &(a, b) in &t.arcs {
        matching[mirror(a)] = mirror(b);
        matching[mirror(b)] = mirror(a);
    }
    for (&ls, &rt) in s.through.iter().zip(&t.through) {
        matching[ls] = mirror(rt);
        matching[mirror(rt)] = ls;
    }
    TLDiagram::new(n, matching)
}

/// Inverse of [`pair_halves`]: splits a diagram into its arc count and the
/// two half-diagrams.
pub fn cell_coords(a: &TLDiagram) -> (usize, HalfDiagram, HalfDiagram) {
    let n = a.n;
    let mirror = |p: usize| 2 * n - 1 - p;
    let mut left_arcs = Vec::new();
    let mut right_arcs = Vec::new();
    for (p, q) in a.pairs() {
        if q < n {
            left_arcs.push((p, q));
        } else if p >= n {
            right_arcs.push((mirror(q), mirror(p)));
        }
    }
    let s = HalfDiagram::new(n, left_arcs).expect("left half of a planar diagram");
    let t = HalfDiagram::new(n, right_arcs).expect("right half of a planar diagram");
    let d = s.d();
    debug_assert_eq!(d, t.d());
    debug_assert_eq!(pair_halves(&s, &t).as_ref(), Ok(a));
    (d, s, t)
}
