use std::fmt;

use super::{Context, RingElem};
use crate::error::Result;

/// An F_p-subspace of R_p held as a reduced row-echelon basis.
///
/// Columns follow the flat coefficient order (index i·p + j), so the pivot of a
/// row is its lexicographically least monomial. Two subspaces are equal exactly
/// when their bases are equal.
#[derive(Clone)]
pub struct IdealBasis {
    ctx: Context,
    rows: Vec<RingElem>,
    pivots: Vec<usize>,
    is_ideal: bool,
}

impl PartialEq for IdealBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.rows == other.rows
    }
}

impl Eq for IdealBasis {}

impl fmt::Debug for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdealBasis")
            .field("p", &self.ctx.p())
            .field("dim", &self.dim())
            .field("is_ideal", &self.is_ideal)
            .field("rows", &self.rows.iter().map(|r| r.to_digits()).collect::<Vec<_>>())
            .finish()
    }
}

/// In-place reduced row echelon form over the first `width` columns of each row.
/// Rows may be longer than `width`; the tail is carried along (used for tracking
/// combinations). Returns the pivot columns; rows `pivots.len()..` are zero on
/// the first `width` columns afterwards.
pub(crate) fn rref(ctx: Context, rows: &mut [Vec<u8>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = ctx.inv(rows[rank][col]);
        if inv != 1 {
            for v in rows[rank].iter_mut() {
                *v = ctx.mul(*v, inv);
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                if pv != 0 {
                    *v = ctx.sub(*v, ctx.mul(factor, pv));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

type Tracked = (Vec<(Vec<u8>, Vec<u8>, usize)>, Vec<Vec<u8>>);

/// Row reduction of `images` that also tracks which combinations of the inputs
/// produce each echelon row. Returns (image rows with their combinations and
/// pivots, kernel combinations).
fn tracked_reduction(ctx: Context, images: &[RingElem]) -> Tracked {
    let width = ctx.len();
    let m = images.len();
    let mut aug: Vec<Vec<u8>> = images
        .iter()
        .enumerate()
        .map(|(r, img)| {
            let mut row = img.coeffs().to_vec();
            row.extend((0..m).map(|c| u8::from(c == r)));
            row
        })
        .collect();
    let pivots = rref(ctx, &mut aug, width);
    let rank = pivots.len();
    let mut image_rows = Vec::with_capacity(rank);
    let mut kernel = Vec::with_capacity(m - rank);
    for (r, row) in aug.into_iter().enumerate() {
        let (img, combo) = row.split_at(width);
        if r < rank {
            image_rows.push((img.to_vec(), combo.to_vec(), pivots[r]));
        } else {
            kernel.push(combo.to_vec());
        }
    }
    (image_rows, kernel)
}

impl IdealBasis {
    /// The zero subspace.
    pub fn zero(ctx: Context) -> Self {
        IdealBasis {
            ctx,
            rows: Vec::new(),
            pivots: Vec::new(),
            is_ideal: true,
        }
    }

    /// The whole ring.
    pub fn full(ctx: Context) -> Self {
        let gens: Vec<RingElem> = (0..ctx.len())
            .map(|k| RingElem::monomial(ctx, k / ctx.n(), k % ctx.n(), 1))
            .collect();
        let mut s = Self::span(ctx, &gens);
        s.is_ideal = true;
        s
    }

    /// Linear span of `gens`; not flagged as an ideal.
    pub fn span(ctx: Context, gens: &[RingElem]) -> Self {
        let mut rows: Vec<Vec<u8>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.ctx(), ctx, "generator from a different ring");
                g.coeffs().to_vec()
            })
            .collect();
        let pivots = rref(ctx, &mut rows, ctx.len());
        rows.truncate(pivots.len());
        IdealBasis {
            ctx,
            rows: rows.into_iter().map(|r| RingElem::from_raw(ctx, r)).collect(),
            pivots,
            is_ideal: false,
        }
    }

    /// Span of `gens`; with `close_under_xy` the smallest ideal containing them.
    pub fn span_close(ctx: Context, gens: &[RingElem], close_under_xy: bool) -> Self {
        let mut s = Self::span(ctx, gens);
        if !close_under_xy {
            return s;
        }
        loop {
            let mut extra = Vec::new();
            for row in &s.rows {
                for img in [row.shift(1, 0), row.shift(0, 1)] {
                    if !s.contains(&img) {
                        extra.push(img);
                    }
                }
            }
            if extra.is_empty() {
                break;
            }
            extra.extend(s.rows.iter().cloned());
            s = Self::span(ctx, &extra);
        }
        s.is_ideal = true;
        s
    }

    /// I_k = span{a^i b^j : i + j >= k}. Zero for k > 2(p - 1).
    pub fn ideal_ik(ctx: Context, k: u32) -> Self {
        let n = ctx.p();
        let a = RingElem::a(ctx);
        let b = RingElem::b(ctx);
        let a_pows: Vec<RingElem> = (0..n).map(|i| a.pow(i)).collect();
        let b_pows: Vec<RingElem> = (0..n).map(|j| b.pow(j)).collect();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i + j >= k {
                    gens.push(&a_pows[i as usize] * &b_pows[j as usize]);
                }
            }
        }
        let mut s = Self::span(ctx, &gens);
        s.is_ideal = true;
        s
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[RingElem] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_ideal(&self) -> bool {
        self.is_ideal
    }

    /// Checks closure under multiplication by x and y directly.
    pub fn is_closed_under_xy(&self) -> bool {
        self.rows
            .iter()
            .all(|r| self.contains(&r.shift(1, 0)) && self.contains(&r.shift(0, 1)))
    }

    /// Remainder of `v` after reduction against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &RingElem) -> RingElem {
        let ctx = self.ctx;
        let mut rem = v.coeffs().to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = rem[piv];
            if c == 0 {
                continue;
            }
            for (r, &b) in rem.iter_mut().zip(row.coeffs()) {
                if b != 0 {
                    *r = ctx.sub(*r, ctx.mul(c, b));
                }
            }
        }
        RingElem::from_raw(ctx, rem)
    }

    pub fn contains(&self, v: &RingElem) -> bool {
        self.reduce(v).is_zero()
    }

    /// Checked form of [`contains`](Self::contains).
    pub fn membership(&self, v: &RingElem) -> Result<bool> {
        self.ctx.check_same(v.ctx())?;
        Ok(self.contains(v))
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &RingElem) -> Option<Vec<u8>> {
        let coords: Vec<u8> = self.pivots.iter().map(|&piv| v.coeffs()[piv]).collect();
        (self.from_coordinates(&coords) == *v).then_some(coords)
    }

    pub fn from_coordinates(&self, coords: &[u8]) -> RingElem {
        assert_eq!(coords.len(), self.dim());
        let ctx = self.ctx;
        let mut acc = vec![0u8; ctx.len()];
        for (row, &c) in self.rows.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (a, &b) in acc.iter_mut().zip(row.coeffs()) {
                *a = ctx.add(*a, ctx.mul(c, b));
            }
        }
        RingElem::from_raw(ctx, acc)
    }

    fn combine(&self, combo: &[u8]) -> RingElem {
        self.from_coordinates(combo)
    }

    /// {factor · v : v in self}.
    pub fn mult_image(&self, factor: &RingElem) -> IdealBasis {
        let images: Vec<RingElem> = self.rows.iter().map(|r| factor * r).collect();
        let mut s = Self::span(self.ctx, &images);
        s.is_ideal = self.is_ideal;
        s
    }

    /// {v in self : factor · v = 0}.
    pub fn mult_kernel(&self, factor: &RingElem) -> IdealBasis {
        let images: Vec<RingElem> = self.rows.iter().map(|r| factor * r).collect();
        let (_, kernel) = tracked_reduction(self.ctx, &images);
        let gens: Vec<RingElem> = kernel.iter().map(|c| self.combine(c)).collect();
        let mut s = Self::span(self.ctx, &gens);
        s.is_ideal = self.is_ideal;
        s
    }

    /// Some v in self with factor · v = target, or None.
    ///
    /// The answer is the unique solution that is fully reduced against the
    /// echelon basis of the kernel, so it does not depend on how it was found.
    pub fn solve_mult(&self, factor: &RingElem, target: &RingElem) -> Option<RingElem> {
        let ctx = self.ctx;
        let images: Vec<RingElem> = self.rows.iter().map(|r| factor * r).collect();
        let (image_rows, kernel) = tracked_reduction(ctx, &images);
        let mut residual = target.coeffs().to_vec();
        let mut combo = vec![0u8; self.dim()];
        for (img, c, piv) in &image_rows {
            let t = residual[*piv];
            if t == 0 {
                continue;
            }
            for (r, &v) in residual.iter_mut().zip(img) {
                *r = ctx.sub(*r, ctx.mul(t, v));
            }
            for (acc, &v) in combo.iter_mut().zip(c) {
                *acc = ctx.add(*acc, ctx.mul(t, v));
            }
        }
        if residual.iter().any(|&r| r != 0) {
            return None;
        }
        let particular = self.combine(&combo);
        let kernel_gens: Vec<RingElem> = kernel.iter().map(|c| self.combine(c)).collect();
        Some(Self::span(ctx, &kernel_gens).reduce(&particular))
    }
}
