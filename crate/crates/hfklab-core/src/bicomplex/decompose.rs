//! Splitting a validated bicomplex into squares and staircases.
//!
//! Stage 1 peels off square summands: at each corner the rank of the
//! composite `d_v o d_h` counts the squares rooted there, and a basis
//! adapted to the composite (image vectors, their preimages, dual
//! functionals, and the kernels of the induced functionals at the four
//! neighbors) splits them all off at once. Afterwards both composites
//! vanish identically.
//!
//! Stage 2 exploits that in the square-free complex the images of both
//! differentials land in the doubly-closed subspace `Z = ker d_h n ker d_v`
//! of each bigrading, so the complex separates into independent
//! interfaces between adjacent antidiagonals. Each interface is a zigzag
//! of source spaces (complements of Z, two arrows out) and target spaces
//! (the Z's, arrows in only), which a single left-to-right sweep reduces
//! to unit arrows. When a repair needs to rewrite an already-reduced
//! basis vector, the rewrite is applied to a whole staircase at a time,
//! which keeps every earlier arrow a unit arrow; the receiving staircase
//! is chosen by an endpoint rule that makes the rewrite always legal.

use std::collections::BTreeMap;

use crate::f2lin::{F2Matrix, F2Vec};

use super::{Bicomplex, BicomplexError, Decomposition, Pos, Square, StairCell, Staircase};

type Result<T> = std::result::Result<T, BicomplexError>;

fn internal(msg: impl Into<String>) -> BicomplexError {
    BicomplexError::InternalError(msg.into())
}

/// Decomposes a valid bicomplex into squares and staircases; the output
/// satisfies `verify_decomposition`.
pub fn decompose(b: &Bicomplex) -> Result<Decomposition> {
    b.validate()?;
    let mut ws = Workspace::new(b);
    ws.split_squares()?;
    ws.sweep_staircases()?;
    ws.assemble()
}

struct Workspace {
    dims: BTreeMap<Pos, usize>,
    /// Columns are the current basis vectors in original coordinates.
    basis: BTreeMap<Pos, F2Matrix>,
    /// Differentials in current coordinates, keyed by source.
    dh: BTreeMap<Pos, F2Matrix>,
    dv: BTreeMap<Pos, F2Matrix>,
    /// Per bigrading, how many leading basis vectors belong to squares.
    locked: BTreeMap<Pos, usize>,
    squares: Vec<Square>,
    /// Staircase cells in original coordinates, top to bottom.
    staircases: Vec<RawStaircase>,
}

struct RawStaircase {
    cells: Vec<(Pos, F2Vec)>,
    open_top: bool,
    open_bottom: bool,
}

impl Workspace {
    fn new(b: &Bicomplex) -> Self {
        let dims: BTreeMap<Pos, usize> = b.dims().clone();
        let mut basis = BTreeMap::new();
        let mut dh = BTreeMap::new();
        let mut dv = BTreeMap::new();
        for &pos in dims.keys() {
            basis.insert(pos, F2Matrix::identity(dims[&pos]));
            dh.insert(pos, b.dh(pos));
            dv.insert(pos, b.dv(pos));
        }
        Self {
            dims,
            basis,
            dh,
            dv,
            locked: BTreeMap::new(),
            squares: Vec::new(),
            staircases: Vec::new(),
        }
    }

    fn dim(&self, pos: Pos) -> usize {
        self.dims.get(&pos).copied().unwrap_or(0)
    }

    fn locked(&self, pos: Pos) -> usize {
        self.locked.get(&pos).copied().unwrap_or(0)
    }

    fn dh_at(&self, source: Pos) -> F2Matrix {
        let target = (source.0 - 1, source.1);
        self.dh
            .get(&source)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim(target), self.dim(source)))
    }

    fn dv_at(&self, source: Pos) -> F2Matrix {
        let target = (source.0, source.1 - 1);
        self.dv
            .get(&source)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim(target), self.dim(source)))
    }

    /// Applies a basis change at `pos`: the columns of `p` are the new
    /// basis vectors in current coordinates.
    fn apply_change(&mut self, pos: Pos, p: F2Matrix) -> Result<()> {
        let n = self.dim(pos);
        if p.rows() != n || p.cols() != n {
            return Err(internal("basis change has wrong shape"));
        }
        let pinv = p.inverse().map_err(|_| internal("basis change not invertible"))?;
        let b = self.basis.get_mut(&pos).expect("position exists");
        *b = b.mul(&p).expect("shapes");
        if let Some(m) = self.dh.get_mut(&pos) {
            *m = m.mul(&p).expect("shapes");
        }
        if let Some(m) = self.dv.get_mut(&pos) {
            *m = m.mul(&p).expect("shapes");
        }
        let h_in = (pos.0 + 1, pos.1);
        if let Some(m) = self.dh.get_mut(&h_in) {
            *m = pinv.mul(m).expect("shapes");
        }
        let v_in = (pos.0, pos.1 + 1);
        if let Some(m) = self.dv.get_mut(&v_in) {
            *m = pinv.mul(m).expect("shapes");
        }
        Ok(())
    }

    /// Identity on the locked prefix, `p_act` on the active block.
    fn embed_locked(&self, pos: Pos, p_act: &F2Matrix) -> F2Matrix {
        let l = self.locked(pos);
        let n = self.dim(pos);
        F2Matrix::from_fn(n, n, |i, j| {
            if i < l || j < l {
                i == j
            } else {
                p_act.get(i - l, j - l)
            }
        })
    }

    // -----------------------------------------------------------------
    // Stage 1: squares
    // -----------------------------------------------------------------

    fn split_squares(&mut self) -> Result<()> {
        let corners: Vec<Pos> = self.dims.keys().copied().collect();
        for corner in corners {
            self.split_squares_at(corner)?;
        }
        // Both composites must now vanish on the active part.
        for &pos in self.dims.keys() {
            let k = self.composite_active(pos)?;
            if !k.is_zero() {
                return Err(internal(format!(
                    "square splitting left a nonzero composite at {pos:?}"
                )));
            }
        }
        Ok(())
    }

    /// Active block of `d_v o d_h` out of `corner`.
    fn composite_active(&self, corner: Pos) -> Result<F2Matrix> {
        let (p, q) = corner;
        let ta = (p - 1, q);
        let tc = (p - 1, q - 1);
        let full = self.dv_at(ta).mul(&self.dh_at(corner)).expect("shapes");
        let (lb, lc) = (self.locked(corner), self.locked(tc));
        // Locked rows and columns must already be clear of the active
        // part.
        for i in 0..full.rows() {
            for j in 0..full.cols() {
                if full.get(i, j) && (i < lc) != (j < lb) {
                    return Err(internal("composite mixes locked and active blocks"));
                }
            }
        }
        Ok(full.submatrix(lc, full.rows(), lb, full.cols()))
    }

    fn split_squares_at(&mut self, corner: Pos) -> Result<()> {
        let (p, q) = corner;
        let (ta, td, tc) = ((p - 1, q), (p, q - 1), (p - 1, q - 1));
        if self.dim(corner) == 0 || self.dim(ta) == 0 || self.dim(td) == 0 || self.dim(tc) == 0 {
            return Ok(());
        }
        let k_act = self.composite_active(corner)?;
        let r = k_act.rank();
        if r == 0 {
            return Ok(());
        }
        let (lb, la, ld, lc) = (
            self.locked(corner),
            self.locked(ta),
            self.locked(td),
            self.locked(tc),
        );
        let (ab, aa, ad, ac) = (
            self.dim(corner) - lb,
            self.dim(ta) - la,
            self.dim(td) - ld,
            self.dim(tc) - lc,
        );

        let image = k_act.image_basis();
        let preimages = k_act
            .solve(&image)
            .ok_or_else(|| internal("composite image has no preimage"))?;
        // Dual functionals: f * image = identity.
        let completed = image.complete_basis();
        let f = completed
            .inverse()
            .map_err(|_| internal("completed image basis not invertible"))?
            .submatrix(0, r, 0, ac);

        let mh = self.dh_at(corner).submatrix(la, la + aa, lb, lb + ab);
        let mv_corner = self.dv_at(corner).submatrix(ld, ld + ad, lb, lb + ab);
        let mva = self.dv_at(ta).submatrix(lc, lc + ac, la, la + aa);
        let mhd = self.dh_at(td).submatrix(lc, lc + ac, ld, ld + ad);

        let pb = preimages.hstack(&f.mul(&k_act).expect("shapes").kernel_basis());
        let pa = mh
            .mul(&preimages)
            .expect("shapes")
            .hstack(&f.mul(&mva).expect("shapes").kernel_basis());
        let pd = mv_corner
            .mul(&preimages)
            .expect("shapes")
            .hstack(&f.mul(&mhd).expect("shapes").kernel_basis());
        let pc = image.hstack(&f.kernel_basis());

        for (m, n) in [(&pb, ab), (&pa, aa), (&pd, ad), (&pc, ac)] {
            if m.cols() != n || !m.is_invertible() {
                return Err(internal("square-splitting basis is not invertible"));
            }
        }
        self.apply_change(corner, self.embed_locked(corner, &pb))?;
        self.apply_change(ta, self.embed_locked(ta, &pa))?;
        self.apply_change(td, self.embed_locked(td, &pd))?;
        self.apply_change(tc, self.embed_locked(tc, &pc))?;

        for j in 0..r {
            self.squares.push(Square {
                corner,
                b: lb + j,
                a: la + j,
                d: ld + j,
                c: lc + j,
            });
        }
        *self.locked.entry(corner).or_insert(0) += r;
        *self.locked.entry(ta).or_insert(0) += r;
        *self.locked.entry(td).or_insert(0) += r;
        *self.locked.entry(tc).or_insert(0) += r;
        Ok(())
    }

    // -----------------------------------------------------------------
    // Stage 2: staircases
    // -----------------------------------------------------------------

    fn sweep_staircases(&mut self) -> Result<()> {
        // Complement data per bigrading: embedding into original
        // coordinates, active differentials, the doubly-closed subspace
        // and a lift of the quotient by it.
        let mut comp: BTreeMap<Pos, CompData> = BTreeMap::new();
        for (&pos, &dim) in &self.dims {
            let l = self.locked(pos);
            let cdim = dim - l;
            if cdim == 0 {
                continue;
            }
            let embed = self.basis[&pos].submatrix(0, dim, l, dim);
            let h_full = self.dh_at(pos);
            let v_full = self.dv_at(pos);
            let h_target = (pos.0 - 1, pos.1);
            let v_target = (pos.0, pos.1 - 1);
            let (lh, lv) = (self.locked(h_target), self.locked(v_target));
            for (m, lt) in [(&h_full, lh), (&v_full, lv)] {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        if m.get(i, j) && (i < lt) != (j < l) {
                            return Err(internal("differential mixes locked and active blocks"));
                        }
                    }
                }
            }
            let ch = h_full.submatrix(lh, h_full.rows(), l, dim);
            let cv = v_full.submatrix(lv, v_full.rows(), l, dim);
            let z_basis = ch.vstack(&cv).kernel_basis();
            let z = z_basis.cols();
            let full = z_basis.complete_basis();
            let lift = full.submatrix(0, cdim, z, cdim);
            comp.insert(pos, CompData { embed, ch, cv, z_basis, lift });
        }

        // Interfaces: sources on antidiagonal d, targets on d - 1.
        let mut interfaces: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        for (&pos, data) in &comp {
            let d = pos.0 + pos.1;
            if data.lift.cols() > 0 {
                interfaces.insert(d);
            }
            if data.z_basis.cols() > 0 {
                interfaces.insert(d + 1);
            }
        }
        for d in interfaces {
            self.sweep_interface(d, &comp)?;
        }
        Ok(())
    }

    fn sweep_interface(&mut self, diag: i64, comp: &BTreeMap<Pos, CompData>) -> Result<()> {
        let s_pos = |x: i64| (x, diag - x);
        let t_pos = |x: i64| (x, diag - 1 - x);
        let mut xs: Vec<i64> = Vec::new();
        for (&pos, data) in comp {
            if pos.0 + pos.1 == diag && data.lift.cols() > 0 {
                xs.push(pos.0);
            }
            if pos.0 + pos.1 == diag - 1 && data.z_basis.cols() > 0 {
                xs.push(pos.0 + 1);
            }
        }
        let Some((&x_lo, &x_hi)) = xs.iter().min().zip(xs.iter().max()) else {
            return Ok(());
        };

        // Node n = 2k is the target space left of source k, node 2k+1 the
        // source at x = x_lo + k.
        let steps = (x_hi - x_lo) as usize + 1;
        let node_pos = |n: usize| -> Pos {
            let k = (n / 2) as i64;
            if n % 2 == 0 {
                t_pos(x_lo + k - 1)
            } else {
                s_pos(x_lo + k)
            }
        };
        let z_dim = |pos: Pos| comp.get(&pos).map_or(0, |d| d.z_basis.cols());
        let s_dim = |pos: Pos| comp.get(&pos).map_or(0, |d| d.lift.cols());

        let mut lane = Lane { intervals: Vec::new() };

        for k in 0..steps {
            let m = 2 * k + 1;
            let (lt, rt) = (m - 1, m + 1);
            let spos = node_pos(m);
            let (lt_pos, rt_pos) = (node_pos(lt), node_pos(rt));
            let s = s_dim(spos);
            let (z_lt, z_rt) = (z_dim(lt_pos), z_dim(rt_pos));

            // Images of the source lift in target Z coordinates.
            let (f, g) = if s == 0 {
                (F2Matrix::zeros(z_lt, 0), F2Matrix::zeros(z_rt, 0))
            } else {
                let data = &comp[&spos];
                let fi = solve_into_z(comp.get(&lt_pos), data.ch.mul(&data.lift).expect("shapes"))?;
                let gi = solve_into_z(comp.get(&rt_pos), data.cv.mul(&data.lift).expect("shapes"))?;
                (fi, gi)
            };

            let w_live: Vec<usize> = lane.live_at(lt);

            // Column echelon of f relative to the frontier span W, pivots
            // preferring the complement of W: classifies source basis
            // vectors into fresh targets (v), W-targets (u) and
            // horizontal kernel (k).
            let w_count = w_live.len();
            let f_in_q = if z_lt == 0 {
                F2Matrix::zeros(0, s)
            } else {
                let w_mat = lane.frontier_matrix(&w_live, lt, z_lt);
                let q_full = w_mat.complete_basis();
                let qinv = q_full.inverse().map_err(|_| internal("frontier basis singular"))?;
                qinv.mul(&f).expect("shapes")
            };
            let (t_s, pivots) = column_echelon(&f_in_q, w_count);
            let f_t = f.mul(&t_s).expect("shapes");

            let mut v_cols = Vec::new();
            let mut u_cols = Vec::new();
            let mut k_cols = Vec::new();
            for j in 0..s {
                match pivots[j] {
                    Some(row) if row >= w_count => v_cols.push(j),
                    Some(_) => u_cols.push(j),
                    None => k_cols.push(j),
                }
            }

            // Fresh intervals born with a horizontal arrow onto a new
            // target vector.
            let mut v_ids = Vec::new();
            for &j in &v_cols {
                let id = lane.new_interval();
                lane.intervals[id].cells.insert(lt, f_t.col(j));
                lane.intervals[id].cells.insert(m, t_s.col(j));
                v_ids.push(id);
            }

            // Sources mapping into W extend existing staircases; the
            // receiving staircase absorbs the others in its target's
            // support, whole staircase at a time.
            let mut priors: Vec<(usize, F2Vec)> = Vec::new();
            for &j in &u_cols {
                let mut x = f_t.col(j);
                let mut svec = t_s.col(j);
                let w_mat = lane.frontier_matrix(&w_live, lt, z_lt);
                let sol = w_mat
                    .solve_vec(&x)
                    .ok_or_else(|| internal("W-bound image not in frontier span"))?;
                let mut support: Vec<usize> = sol.ones().iter().map(|&i| w_live[i]).collect();
                // Reduce out earlier receivers so supports stay disjoint
                // from already-assigned targets.
                for (prior_id, prior_svec) in &priors {
                    if support.contains(prior_id) {
                        x.xor_assign(&lane.intervals[*prior_id].cells[&lt]);
                        svec.xor_assign(prior_svec);
                    }
                }
                let sol = lane
                    .frontier_matrix(&w_live, lt, z_lt)
                    .solve_vec(&x)
                    .ok_or_else(|| internal("reduced image not in frontier span"))?;
                support = sol.ones().iter().map(|&i| w_live[i]).collect();
                if support.iter().any(|id| priors.iter().any(|(p, _)| p == id)) {
                    return Err(internal("prior receiver survived reduction"));
                }
                if support.is_empty() {
                    return Err(internal("independent image reduced to zero"));
                }
                let receiver = lane.choose_receiver(&support);
                for &id in &support {
                    if id != receiver {
                        lane.absorb(receiver, id)?;
                    }
                }
                if lane.intervals[receiver].cells[&lt] != x {
                    return Err(internal("receiver does not carry the expected target"));
                }
                priors.push((receiver, svec));
            }
            for (id, svec) in priors {
                lane.intervals[id].cells.insert(m, svec);
            }

            // Horizontal-kernel sources start new staircases here.
            let mut k_ids = Vec::new();
            for &j in &k_cols {
                let id = lane.new_interval();
                lane.intervals[id].cells.insert(m, t_s.col(j));
                k_ids.push(id);
            }

            // Anything still ending at the target space is finished, and
            // the unhit remainder of the target space becomes single
            // generators.
            if z_lt > 0 {
                let mut assigned: Vec<F2Vec> = w_live
                    .iter()
                    .map(|&id| lane.intervals[id].cells[&lt].clone())
                    .collect();
                for &id in &v_ids {
                    assigned.push(lane.intervals[id].cells[&lt].clone());
                }
                let assigned_mat = F2Matrix::from_cols(z_lt, &assigned);
                let completed = assigned_mat.complete_basis();
                for j in assigned.len()..z_lt {
                    let id = lane.new_interval();
                    lane.intervals[id].cells.insert(lt, completed.col(j));
                    lane.intervals[id].alive = false;
                }
            }
            for id in 0..lane.intervals.len() {
                let iv = &lane.intervals[id];
                if iv.alive && iv.last_node() == lt {
                    lane.intervals[id].alive = false;
                }
            }

            // Vertical images: absorb dependencies (killing one staircase
            // per relation), then extend survivors into the next target.
            let mut candidates: Vec<usize> = lane
                .intervals
                .iter()
                .enumerate()
                .filter(|(_, iv)| iv.alive && iv.cells.contains_key(&m))
                .map(|(id, _)| id)
                .collect();
            loop {
                let nonzero: Vec<usize> = candidates
                    .iter()
                    .copied()
                    .filter(|&id| !g.mul_vec(&lane.intervals[id].cells[&m]).expect("shapes").is_zero())
                    .collect();
                if nonzero.is_empty() {
                    break;
                }
                let images: Vec<F2Vec> = nonzero
                    .iter()
                    .map(|&id| g.mul_vec(&lane.intervals[id].cells[&m]).expect("shapes"))
                    .collect();
                let kern = F2Matrix::from_cols(z_rt, &images).kernel_basis();
                if kern.cols() == 0 {
                    break;
                }
                let dep: Vec<usize> = kern.col(0).ones().iter().map(|&i| nonzero[i]).collect();
                if dep.len() < 2 {
                    return Err(internal("singleton dependency among vertical images"));
                }
                let receiver = lane.choose_receiver(&dep);
                for &id in &dep {
                    if id != receiver {
                        lane.absorb(receiver, id)?;
                    }
                }
            }
            for id in candidates.drain(..) {
                let img = g.mul_vec(&lane.intervals[id].cells[&m]).expect("shapes");
                if img.is_zero() {
                    if lane.intervals[id].cells.len() == 1 {
                        // A source vector killed by both differentials
                        // would live in the doubly-closed subspace.
                        return Err(internal("source lift vector with no arrows"));
                    }
                    lane.intervals[id].alive = false;
                } else {
                    lane.intervals[id].cells.insert(rt, img);
                }
            }
        }

        if lane.intervals.iter().any(|iv| iv.alive) {
            return Err(internal("intervals left alive after the sweep"));
        }

        // Convert to staircases in original coordinates.
        for iv in &lane.intervals {
            let mut cells = Vec::new();
            for (&n, local) in &iv.cells {
                let pos = node_pos(n);
                let data = &comp[&pos];
                let in_comp = if n % 2 == 0 {
                    data.z_basis.mul_vec(local).expect("shapes")
                } else {
                    data.lift.mul_vec(local).expect("shapes")
                };
                cells.push((pos, data.embed.mul_vec(&in_comp).expect("shapes")));
            }
            let (open_top, open_bottom) = if cells.len() == 1 {
                (true, true)
            } else {
                (iv.first_node() % 2 == 1, iv.last_node() % 2 == 0)
            };
            self.staircases.push(RawStaircase { cells, open_top, open_bottom });
        }
        Ok(())
    }

    // -----------------------------------------------------------------
    // Assembly
    // -----------------------------------------------------------------

    fn assemble(&mut self) -> Result<Decomposition> {
        let mut order: Vec<usize> = (0..self.staircases.len()).collect();
        order.sort_by_key(|&i| {
            let s = &self.staircases[i];
            (s.cells[0].0, s.cells.len(), i)
        });

        let mut columns: BTreeMap<Pos, Vec<F2Vec>> = BTreeMap::new();
        for (&pos, &dim) in &self.dims {
            let l = self.locked(pos);
            let mut cols = Vec::with_capacity(dim);
            for j in 0..l {
                cols.push(self.basis[&pos].col(j));
            }
            columns.insert(pos, cols);
        }

        let mut staircases = Vec::with_capacity(order.len());
        for &i in &order {
            let raw = &self.staircases[i];
            let mut cells = Vec::with_capacity(raw.cells.len());
            for (pos, vec) in &raw.cells {
                let cols = columns
                    .get_mut(pos)
                    .ok_or_else(|| internal("staircase cell at an empty bigrading"))?;
                cells.push(StairCell { pos: *pos, index: cols.len() });
                cols.push(vec.clone());
            }
            staircases.push(Staircase {
                cells,
                open_top: raw.open_top,
                open_bottom: raw.open_bottom,
            });
        }

        let mut basis_change = BTreeMap::new();
        for (&pos, &dim) in &self.dims {
            let cols = &columns[&pos];
            if cols.len() != dim {
                return Err(internal(format!(
                    "basis at {pos:?} has {} vectors, expected {dim}",
                    cols.len()
                )));
            }
            let m = F2Matrix::from_cols(dim, cols);
            if !m.is_invertible() {
                return Err(internal(format!("assembled basis at {pos:?} is singular")));
            }
            basis_change.insert(pos, m);
        }
        Ok(Decomposition {
            basis_change,
            squares: std::mem::take(&mut self.squares),
            staircases,
        })
    }
}

struct CompData {
    /// Complement coordinates -> original coordinates.
    embed: F2Matrix,
    /// Active differentials out of this bigrading, complement coords.
    ch: F2Matrix,
    cv: F2Matrix,
    /// Columns span `ker d_h n ker d_v`.
    z_basis: F2Matrix,
    /// Columns complete `z_basis` to a full basis.
    lift: F2Matrix,
}

/// Expresses image columns in the Z-coordinates of the target space.
fn solve_into_z(target: Option<&CompData>, images: F2Matrix) -> Result<F2Matrix> {
    match target {
        None => {
            if !images.is_zero() {
                return Err(internal("image lands in an empty bigrading"));
            }
            Ok(F2Matrix::zeros(0, images.cols()))
        }
        Some(data) => data
            .z_basis
            .solve(&images)
            .ok_or_else(|| internal("image leaves the doubly-closed subspace")),
    }
}

/// Column echelon with pivots chosen first among rows `w.. ` (complement
/// of the frontier span) and then among rows `..w`. Returns the column
/// transform and, per transformed column, its pivot row.
fn column_echelon(m: &F2Matrix, w: usize) -> (F2Matrix, Vec<Option<usize>>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut work = m.clone();
    let mut t = F2Matrix::identity(cols);
    let mut pivots: Vec<Option<usize>> = vec![None; cols];
    let mut used = vec![false; cols];
    let row_order: Vec<usize> = (w..rows).chain(0..w).collect();
    for row in row_order {
        let Some(pivot) = (0..cols).find(|&j| !used[j] && work.get(row, j)) else {
            continue;
        };
        used[pivot] = true;
        pivots[pivot] = Some(row);
        for j in 0..cols {
            if j != pivot && !used[j] && work.get(row, j) {
                for i in 0..rows {
                    let v = work.get(i, j) ^ work.get(i, pivot);
                    work.set(i, j, v);
                }
                for i in 0..cols {
                    let v = t.get(i, j) ^ t.get(i, pivot);
                    t.set(i, j, v);
                }
            }
        }
    }
    (t, pivots)
}

struct Lane {
    intervals: Vec<Interval>,
}

struct Interval {
    /// Node index -> vector in that node's local coordinates.
    cells: BTreeMap<usize, F2Vec>,
    alive: bool,
}

impl Interval {
    fn first_node(&self) -> usize {
        *self.cells.keys().next().expect("interval has cells")
    }

    fn last_node(&self) -> usize {
        *self.cells.keys().next_back().expect("interval has cells")
    }
}

impl Lane {
    fn new_interval(&mut self) -> usize {
        self.intervals.push(Interval { cells: BTreeMap::new(), alive: true });
        self.intervals.len() - 1
    }

    fn live_at(&self, node: usize) -> Vec<usize> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.alive && !iv.cells.is_empty() && iv.last_node() == node)
            .map(|(id, _)| id)
            .collect()
    }

    fn frontier_matrix(&self, ids: &[usize], node: usize, dim: usize) -> F2Matrix {
        let cols: Vec<F2Vec> = ids.iter().map(|&id| self.intervals[id].cells[&node].clone()).collect();
        F2Matrix::from_cols(dim, &cols)
    }

    /// The staircase that may legally absorb every other member of a
    /// dependency: among those whose top is a target vector, the one
    /// starting furthest right; otherwise the one starting furthest left.
    /// All members share their right end, so only tops constrain.
    fn choose_receiver(&self, ids: &[usize]) -> usize {
        let t_topped: Vec<usize> = ids
            .iter()
            .copied()
            .filter(|&id| self.intervals[id].first_node() % 2 == 0)
            .collect();
        if !t_topped.is_empty() {
            t_topped
                .into_iter()
                .max_by_key(|&id| (self.intervals[id].first_node(), id))
                .expect("nonempty")
        } else {
            ids.iter()
                .copied()
                .min_by_key(|&id| (self.intervals[id].first_node(), id))
                .expect("nonempty")
        }
    }

    /// Adds `source`'s vectors into `target` at every shared node.
    fn absorb(&mut self, target: usize, source: usize) -> Result<()> {
        if target == source {
            return Err(internal("staircase cannot absorb itself"));
        }
        let lo = self.intervals[target]
            .first_node()
            .max(self.intervals[source].first_node());
        let hi = self.intervals[target]
            .last_node()
            .min(self.intervals[source].last_node());
        for n in lo..=hi {
            let add = self.intervals[source]
                .cells
                .get(&n)
                .ok_or_else(|| internal("interval support not contiguous"))?
                .clone();
            self.intervals[target]
                .cells
                .get_mut(&n)
                .ok_or_else(|| internal("interval support not contiguous"))?
                .xor_assign(&add);
        }
        Ok(())
    }
}
