//! Deterministic pseudorandom instances for tests and batch verifiers.
//!
//! Bicomplexes are built by planting explicit square and staircase
//! summands on a grid and conjugating by random invertible basis changes
//! per bigrading, so the true summand multiset is known and exact: by
//! uniqueness of the splitting it is the oracle any decomposition must
//! reproduce. Equivariant complexes are built grade by grade with
//! boundaries drawn from the kernel of the boundary below, fixed-cell
//! boundaries drawn from the fixed part of that kernel, and free cells
//! added in swapped pairs.

use std::collections::{BTreeMap, BTreeSet};

use crate::f2lin::F2Matrix;
use crate::rng::SplitMix64;

use super::{Bicomplex, EquivariantComplex, Pos};

/// Known multiset of planted summands.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlantedSummary {
    pub squares: usize,
    /// (open_top, open_bottom, length) -> count
    pub staircases: BTreeMap<(bool, bool, usize), usize>,
}

/// A random invertible matrix: unit lower triangle times unit upper
/// triangle times a permutation.
pub fn random_invertible(rng: &mut SplitMix64, n: usize) -> F2Matrix {
    let mut lower = F2Matrix::identity(n);
    let mut upper = F2Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            if rng.next_bool() {
                lower.set(i, j, true);
            }
            if rng.next_bool() {
                upper.set(j, i, true);
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut p = F2Matrix::zeros(n, n);
    for (i, &pi) in perm.iter().enumerate() {
        p.set(pi, i, true);
    }
    lower.mul(&upper).expect("shapes").mul(&p).expect("shapes")
}

/// Plants random squares and staircases on a `grid_cols x grid_rows`
/// grid with per-bigrading dimension at most `max_dim`, then hides the
/// summands behind random basis changes. Returns the complex and the
/// planted multiset.
pub fn random_planted_bicomplex(
    rng: &mut SplitMix64,
    grid_cols: i64,
    grid_rows: i64,
    max_dim: usize,
    attempts: usize,
) -> (Bicomplex, PlantedSummary) {
    let mut dims: BTreeMap<Pos, usize> = BTreeMap::new();
    let mut arrows: Vec<(Pos, usize, Pos, usize, bool)> = Vec::new();
    let mut summary = PlantedSummary::default();

    let take = |dims: &mut BTreeMap<Pos, usize>, cells: &[Pos]| -> Option<Vec<usize>> {
        for pos in cells {
            if dims.get(pos).copied().unwrap_or(0) >= max_dim {
                return None;
            }
        }
        Some(
            cells
                .iter()
                .map(|pos| {
                    let d = dims.entry(*pos).or_insert(0);
                    *d += 1;
                    *d - 1
                })
                .collect(),
        )
    };

    for _ in 0..attempts {
        if rng.next_below(4) == 0 {
            // A square: corner needs room one step left and down.
            if grid_cols < 2 || grid_rows < 2 {
                continue;
            }
            let p = 1 + rng.next_below(grid_cols as u64 - 1) as i64;
            let q = 1 + rng.next_below(grid_rows as u64 - 1) as i64;
            let cells = [(p, q), (p - 1, q), (p, q - 1), (p - 1, q - 1)];
            let Some(idx) = take(&mut dims, &cells) else { continue };
            arrows.push((cells[0], idx[0], cells[1], idx[1], true));
            arrows.push((cells[0], idx[0], cells[2], idx[2], false));
            arrows.push((cells[1], idx[1], cells[3], idx[3], false));
            arrows.push((cells[2], idx[2], cells[3], idx[3], true));
            summary.squares += 1;
        } else {
            // A staircase: alternate source cells (arrows out) and target
            // cells, descending to the right.
            let n_cells = 1 + rng.next_below(6) as usize;
            let start_is_source = if n_cells == 1 { false } else { rng.next_bool() };
            let p0 = rng.next_below(grid_cols as u64) as i64;
            let q0 = rng.next_below(grid_rows as u64) as i64;
            let mut cells: Vec<(Pos, bool)> = Vec::with_capacity(n_cells);
            let mut pos = (p0, q0);
            let mut is_source = start_is_source;
            let mut ok = true;
            for i in 0..n_cells {
                if pos.0 >= grid_cols || pos.1 < 0 {
                    ok = false;
                    break;
                }
                cells.push((pos, is_source));
                if i + 1 < n_cells {
                    // From a target the staircase steps right to the next
                    // source; from a source it steps down to its image.
                    pos = if is_source { (pos.0, pos.1 - 1) } else { (pos.0 + 1, pos.1) };
                    is_source = !is_source;
                }
            }
            if !ok {
                continue;
            }
            let positions: Vec<Pos> = cells.iter().map(|&(p, _)| p).collect();
            let Some(idx) = take(&mut dims, &positions) else { continue };
            for w in 0..n_cells.saturating_sub(1) {
                let (pa, sa) = cells[w];
                let (pb, _) = cells[w + 1];
                if sa {
                    // source above, vertical arrow down
                    arrows.push((pa, idx[w], pb, idx[w + 1], false));
                } else {
                    // source below-right, horizontal arrow back
                    arrows.push((pb, idx[w + 1], pa, idx[w], true));
                }
            }
            let (open_top, open_bottom) = if n_cells == 1 {
                (true, true)
            } else {
                (cells[0].1, !cells[n_cells - 1].1)
            };
            *summary
                .staircases
                .entry((open_top, open_bottom, n_cells - 1))
                .or_insert(0) += 1;
        }
    }

    let mut b = Bicomplex::new();
    for (&pos, &d) in &dims {
        b.set_dim(pos, d);
    }
    let mut dh: BTreeMap<Pos, F2Matrix> = BTreeMap::new();
    let mut dv: BTreeMap<Pos, F2Matrix> = BTreeMap::new();
    for (src, si, dst, di, horizontal) in arrows {
        let store = if horizontal { &mut dh } else { &mut dv };
        let m = store
            .entry(src)
            .or_insert_with(|| F2Matrix::zeros(dims[&dst], dims[&src]));
        m.set(di, si, true);
    }
    for (pos, m) in dh {
        b.set_dh(pos, m);
    }
    for (pos, m) in dv {
        b.set_dv(pos, m);
    }
    debug_assert!(b.validate().is_ok());

    // Hide the summands behind random bases: M -> P_target^-1 M P_source.
    let changes: BTreeMap<Pos, F2Matrix> = dims
        .keys()
        .map(|&pos| (pos, random_invertible(rng, dims[&pos])))
        .collect();
    let invs: BTreeMap<Pos, F2Matrix> = changes
        .iter()
        .map(|(&pos, m)| (pos, m.inverse().expect("invertible")))
        .collect();
    let mut out = Bicomplex::new();
    for (&pos, &d) in &dims {
        out.set_dim(pos, d);
    }
    for &pos in dims.keys() {
        let ht = (pos.0 - 1, pos.1);
        let vt = (pos.0, pos.1 - 1);
        let h = b.dh(pos).mul(&changes[&pos]).expect("shapes");
        let h = invs.get(&ht).map_or(h.clone(), |i| i.mul(&h).expect("shapes"));
        out.set_dh(pos, h);
        let v = b.dv(pos).mul(&changes[&pos]).expect("shapes");
        let v = invs.get(&vt).map_or(v.clone(), |i| i.mul(&v).expect("shapes"));
        out.set_dv(pos, v);
    }
    debug_assert!(out.validate().is_ok());
    (out, summary)
}

/// A random valid equivariant complex: per grading up to `max_fixed`
/// fixed cells and `max_pairs` swapped pairs, boundaries drawn from the
/// kernel one grading below (fixed cells from the fixed part of it).
pub fn random_equivariant(
    rng: &mut SplitMix64,
    max_grading: i64,
    max_fixed: u64,
    max_pairs: u64,
) -> EquivariantComplex {
    let mut e = EquivariantComplex::new();
    let mut layout: BTreeMap<i64, (usize, usize)> = BTreeMap::new(); // (fixed, pairs)
    for i in 0..=max_grading {
        let nf = rng.next_below(max_fixed + 1) as usize;
        let np = rng.next_below(max_pairs + 1) as usize;
        let dim = nf + 2 * np;
        if dim == 0 {
            continue;
        }
        let mut tau = F2Matrix::zeros(dim, dim);
        let mut fixed = BTreeSet::new();
        for c in 0..nf {
            tau.set(c, c, true);
            fixed.insert(c);
        }
        for p in 0..np {
            let (x, y) = (nf + 2 * p, nf + 2 * p + 1);
            tau.set(x, y, true);
            tau.set(y, x, true);
        }
        layout.insert(i, (nf, np));
        e.set_grading(i, dim, tau, fixed);
    }

    let gradings: Vec<i64> = layout.keys().copied().collect();
    for &i in &gradings {
        let below = i - 1;
        let target_dim = e.dim(below);
        if target_dim == 0 {
            continue;
        }
        // Cycles in the grading below; fixed-cell boundaries must also
        // stay inside the fixed span.
        let lower_boundary = e.chain_complex().boundary(below);
        let kernel = lower_boundary.kernel_basis();
        let fixed_below = e.fixed_cells(below);
        let nonfixed_rows = F2Matrix::from_fn(target_dim, target_dim, |r, c| {
            r == c && !fixed_below.contains(&r)
        });
        let fixed_kernel = lower_boundary.vstack(&nonfixed_rows.clone()).kernel_basis();

        let (nf, np) = layout[&i];
        let dim = e.dim(i);
        let mut m = F2Matrix::zeros(target_dim, dim);
        let random_combo = |basis: &F2Matrix, rng: &mut SplitMix64| -> Vec<usize> {
            let mut v = vec![false; target_dim];
            for j in 0..basis.cols() {
                if rng.next_bool() {
                    for r in basis.col(j).ones() {
                        v[r] ^= true;
                    }
                }
            }
            v.iter().enumerate().filter(|(_, &b)| b).map(|(r, _)| r).collect()
        };
        for c in 0..nf {
            for r in random_combo(&fixed_kernel, rng) {
                m.set(r, c, true);
            }
        }
        let tau_below = e.tau(below);
        for p in 0..np {
            let (x, y) = (nf + 2 * p, nf + 2 * p + 1);
            let rows = random_combo(&kernel, rng);
            let mut xv = crate::f2lin::F2Vec::zeros(target_dim);
            for r in rows {
                xv.set(r, true);
            }
            let yv = tau_below.mul_vec(&xv).expect("shapes");
            for r in xv.ones() {
                m.set(r, x, true);
            }
            for r in yv.ones() {
                m.set(r, y, true);
            }
        }
        e.set_boundary(i, m);
    }
    debug_assert!(e.validate().is_ok());
    e
}

/// The reflection model of the 2-sphere: two fixed cells in gradings 0
/// and 1 forming the equator circle, two swapped 2-cells, each 2-cell
/// bounding both 1-cells and each 1-cell bounding both 0-cells.
pub fn s2_reflection() -> EquivariantComplex {
    let mut e = EquivariantComplex::new();
    let all = F2Matrix::from_fn(2, 2, |_, _| true);
    let swap = F2Matrix::from_fn(2, 2, |i, j| i != j);
    e.set_grading(0, 2, F2Matrix::identity(2), BTreeSet::from([0, 1]));
    e.set_grading(1, 2, F2Matrix::identity(2), BTreeSet::from([0, 1]));
    e.set_grading(2, 2, swap, BTreeSet::new());
    e.set_boundary(1, all.clone());
    e.set_boundary(2, all);
    debug_assert!(e.validate().is_ok());
    e
}
