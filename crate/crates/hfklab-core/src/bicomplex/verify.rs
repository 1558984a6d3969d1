//! Independent certificate checking for decompositions. Nothing here
//! depends on how `decompose` works: the basis change is conjugated into
//! the complex and the arrow structure is compared, arrow by arrow,
//! against what the listed squares and staircases claim.

use std::collections::{BTreeMap, BTreeSet};

use crate::f2lin::F2Matrix;

use super::{Bicomplex, Decomposition, Pos};

type Gen = (Pos, usize);
/// (source generator, target generator, is_horizontal)
type Arrow = (Gen, Gen, bool);

/// True iff `d` is a valid certified decomposition of `b`.
pub fn verify_decomposition(b: &Bicomplex, d: &Decomposition) -> bool {
    verify_decomposition_detailed(b, d).is_ok()
}

/// Like `verify_decomposition` but reports the first violation.
pub fn verify_decomposition_detailed(b: &Bicomplex, d: &Decomposition) -> Result<(), String> {
    // Basis changes: one invertible square matrix per occupied bigrading.
    for (&pos, &dim) in b.dims() {
        let Some(m) = d.basis_change.get(&pos) else {
            return Err(format!("missing basis change at {pos:?}"));
        };
        if m.rows() != dim || m.cols() != dim {
            return Err(format!("basis change at {pos:?} has the wrong shape"));
        }
        if !m.is_invertible() {
            return Err(format!("basis change at {pos:?} is singular"));
        }
    }
    for &pos in d.basis_change.keys() {
        if b.dim(pos) == 0 {
            return Err(format!("basis change at empty bigrading {pos:?}"));
        }
    }

    // Conjugated differentials must be partial permutations; collect
    // their unit entries as arrows.
    let inv: BTreeMap<Pos, F2Matrix> = d
        .basis_change
        .iter()
        .map(|(&pos, m)| (pos, m.inverse().expect("checked invertible")))
        .collect();
    let conjugate = |source: Pos, target: Pos, m: &F2Matrix| -> F2Matrix {
        let left = inv
            .get(&target)
            .cloned()
            .unwrap_or_else(|| F2Matrix::identity(b.dim(target)));
        let right = d
            .basis_change
            .get(&source)
            .cloned()
            .unwrap_or_else(|| F2Matrix::identity(b.dim(source)));
        left.mul(m).expect("shapes").mul(&right).expect("shapes")
    };

    let mut actual: BTreeSet<Arrow> = BTreeSet::new();
    for &pos in b.dims().keys() {
        for (m, target, horizontal) in [
            (b.dh(pos), (pos.0 - 1, pos.1), true),
            (b.dv(pos), (pos.0, pos.1 - 1), false),
        ] {
            let c = conjugate(pos, target, &m);
            if !c.is_partial_permutation() {
                return Err(format!(
                    "conjugated {} differential at {pos:?} is not a partial permutation",
                    if horizontal { "horizontal" } else { "vertical" }
                ));
            }
            for i in 0..c.rows() {
                for j in 0..c.cols() {
                    if c.get(i, j) {
                        actual.insert(((pos, j), (target, i), horizontal));
                    }
                }
            }
        }
    }

    // Partition: every generator in exactly one summand.
    let mut owned: BTreeMap<Pos, Vec<bool>> = b
        .dims()
        .iter()
        .map(|(&pos, &dim)| (pos, vec![false; dim]))
        .collect();
    let mut claim = |g: Gen| -> Result<(), String> {
        let slot = owned
            .get_mut(&g.0)
            .and_then(|v| v.get_mut(g.1))
            .ok_or_else(|| format!("generator {g:?} out of range"))?;
        if *slot {
            return Err(format!("generator {g:?} claimed twice"));
        }
        *slot = true;
        Ok(())
    };

    let mut expected: BTreeSet<Arrow> = BTreeSet::new();
    for sq in &d.squares {
        let (p, q) = sq.corner;
        let b_gen = (sq.corner, sq.b);
        let a_gen = ((p - 1, q), sq.a);
        let d_gen = ((p, q - 1), sq.d);
        let c_gen = ((p - 1, q - 1), sq.c);
        for g in [b_gen, a_gen, d_gen, c_gen] {
            claim(g)?;
        }
        expected.insert((b_gen, a_gen, true));
        expected.insert((b_gen, d_gen, false));
        expected.insert((a_gen, c_gen, false));
        expected.insert((d_gen, c_gen, true));
    }

    for (si, st) in d.staircases.iter().enumerate() {
        if st.cells.is_empty() {
            return Err(format!("staircase {si} has no cells"));
        }
        for cell in &st.cells {
            claim((cell.pos, cell.index))?;
        }
        if st.cells.len() == 1 {
            if !(st.open_top && st.open_bottom) {
                return Err(format!("single-generator staircase {si} must be open at both ends"));
            }
            continue;
        }
        for w in st.cells.windows(2) {
            let (above, below) = (w[0], w[1]);
            let (p0, q0) = above.pos;
            if below.pos == (p0 + 1, q0) {
                // `below` is the next source; its horizontal arrow points
                // back up-left onto `above`.
                expected.insert(((below.pos, below.index), (above.pos, above.index), true));
            } else if below.pos == (p0, q0 - 1) {
                expected.insert(((above.pos, above.index), (below.pos, below.index), false));
            } else {
                return Err(format!("staircase {si} takes an illegal step {:?} -> {:?}", above.pos, below.pos));
            }
        }
        let first_arrow_vertical = st.cells[1].pos == (st.cells[0].pos.0, st.cells[0].pos.1 - 1);
        if st.open_top != first_arrow_vertical {
            return Err(format!("staircase {si} open_top flag contradicts its first arrow"));
        }
        let n = st.cells.len();
        let last_arrow_vertical = st.cells[n - 1].pos == (st.cells[n - 2].pos.0, st.cells[n - 2].pos.1 - 1);
        if st.open_bottom != last_arrow_vertical {
            return Err(format!("staircase {si} open_bottom flag contradicts its last arrow"));
        }
    }

    for (pos, slots) in &owned {
        if let Some(i) = slots.iter().position(|&s| !s) {
            return Err(format!("generator ({pos:?}, {i}) belongs to no summand"));
        }
    }

    if let Some(extra) = actual.difference(&expected).next() {
        return Err(format!("complex carries an arrow not in any summand: {extra:?}"));
    }
    if let Some(missing) = expected.difference(&actual).next() {
        return Err(format!("summand claims an arrow absent from the complex: {missing:?}"));
    }
    Ok(())
}
