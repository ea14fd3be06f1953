//! Labeled matrices over partial fields and the matroids they represent.

use serde::{Deserialize, Serialize};

use crate::bits::{self, bit, bits, full, size};
use crate::error::{Error, Result};
use crate::matroid::{Matroid, MAX_ELEMENTS};
use crate::pfield::{GaloisField, PartialField, RingValue};
use crate::Label;

/// Largest `|X|+|Y|` for exhaustive subdeterminant checks.
pub const P_MATRIX_LIMIT: usize = 20;

/// Largest ground set for representation enumeration.
pub const ENUMERATION_LIMIT: usize = 12;

/// An `X × Y` matrix with labeled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMatrix {
    field: PartialField,
    rows: Vec<Label>,
    cols: Vec<Label>,
    entries: Vec<Vec<RingValue>>,
}

impl PMatrix {
    pub fn new(field: PartialField, rows: Vec<Label>, cols: Vec<Label>, entries: Vec<Vec<RingValue>>) -> Result<Self> {
        let mut all: Vec<Label> = rows.iter().chain(&cols).copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::LabelClash(w[0].to_string()));
        }
        if entries.len() != rows.len() {
            return Err(Error::Shape(format!("{} rows labeled, {} given", rows.len(), entries.len())));
        }
        for row in &entries {
            if row.len() != cols.len() {
                return Err(Error::Shape(format!("{} columns labeled, row has {}", cols.len(), row.len())));
            }
            for v in row {
                field.validate(v)?;
            }
        }
        Ok(PMatrix { field, rows, cols, entries })
    }

    /// Builds a matrix from string-encoded ring values.
    pub fn parse<S: AsRef<str>>(field: PartialField, rows: Vec<Label>, cols: Vec<Label>, entries: &[Vec<S>]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|r| r.iter().map(|s| field.parse_value(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PMatrix::new(field, rows, cols, parsed)
    }

    /// Builds a matrix from integers mapped into the ring.
    pub fn from_ints(field: PartialField, rows: Vec<Label>, cols: Vec<Label>, entries: &[Vec<i64>]) -> Result<Self> {
        let vals = entries.iter().map(|r| r.iter().map(|&n| field.from_int(n)).collect()).collect();
        PMatrix::new(field, rows, cols, vals)
    }

    pub fn field(&self) -> &PartialField {
        &self.field
    }

    pub fn rows(&self) -> &[Label] {
        &self.rows
    }

    pub fn cols(&self) -> &[Label] {
        &self.cols
    }

    pub fn entries(&self) -> &[Vec<RingValue>] {
        &self.entries
    }

    /// All labels, sorted.
    pub fn labels(&self) -> Vec<Label> {
        let mut all: Vec<Label> = self.rows.iter().chain(&self.cols).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn row_index(&self, x: Label) -> Option<usize> {
        self.rows.iter().position(|&r| r == x)
    }

    pub fn col_index(&self, y: Label) -> Option<usize> {
        self.cols.iter().position(|&c| c == y)
    }

    pub fn entry(&self, x: Label, y: Label) -> Result<&RingValue> {
        let i = self.row_index(x).ok_or(Error::UnknownLabel(x))?;
        let j = self.col_index(y).ok_or(Error::UnknownLabel(y))?;
        Ok(&self.entries[i][j])
    }

    pub fn is_zero_at(&self, x: Label, y: Label) -> Result<bool> {
        Ok(self.field.is_zero(self.entry(x, y)?))
    }

    /// `A[Z]`: rows `X ∩ Z` and columns `Y ∩ Z`, in their original order.
    pub fn submatrix(&self, z: &[Label]) -> PMatrix {
        let ri: Vec<usize> = (0..self.rows.len()).filter(|&i| z.contains(&self.rows[i])).collect();
        let ci: Vec<usize> = (0..self.cols.len()).filter(|&j| z.contains(&self.cols[j])).collect();
        self.select(&ri, &ci)
    }

    /// `A - Z`: rows `X - Z` and columns `Y - Z`.
    pub fn remove(&self, z: &[Label]) -> PMatrix {
        let ri: Vec<usize> = (0..self.rows.len()).filter(|&i| !z.contains(&self.rows[i])).collect();
        let ci: Vec<usize> = (0..self.cols.len()).filter(|&j| !z.contains(&self.cols[j])).collect();
        self.select(&ri, &ci)
    }

    /// `A[X', Y']`.
    pub fn restrict(&self, rows: &[Label], cols: &[Label]) -> Result<PMatrix> {
        let ri = rows.iter().map(|&x| self.row_index(x).ok_or(Error::UnknownLabel(x))).collect::<Result<Vec<_>>>()?;
        let ci = cols.iter().map(|&y| self.col_index(y).ok_or(Error::UnknownLabel(y))).collect::<Result<Vec<_>>>()?;
        Ok(self.select(&ri, &ci))
    }

    fn select(&self, ri: &[usize], ci: &[usize]) -> PMatrix {
        PMatrix {
            field: self.field.clone(),
            rows: ri.iter().map(|&i| self.rows[i]).collect(),
            cols: ci.iter().map(|&j| self.cols[j]).collect(),
            entries: ri.iter().map(|&i| ci.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    fn det_masks(&self, rmask: u32, cmask: u32) -> RingValue {
        let m: Vec<Vec<RingValue>> =
            bits(rmask).map(|i| bits(cmask).map(|j| self.entries[i][j].clone()).collect()).collect();
        self.field.det_unchecked(m)
    }

    /// Row and column index masks of `A[Z]`.
    fn masks_of(&self, z: &[Label]) -> Result<(u32, u32)> {
        let mut r = 0u32;
        let mut c = 0u32;
        for &l in z {
            if let Some(i) = self.row_index(l) {
                r |= bit(i);
            } else if let Some(j) = self.col_index(l) {
                c |= bit(j);
            } else {
                return Err(Error::UnknownLabel(l));
            }
        }
        Ok((r, c))
    }

    fn labels_of_masks(&self, rmask: u32, cmask: u32) -> Vec<Label> {
        let mut z: Vec<Label> = bits(rmask).map(|i| self.rows[i]).chain(bits(cmask).map(|j| self.cols[j])).collect();
        z.sort_unstable();
        z
    }

    /// `det A[Z]`; `A[Z]` must be square.
    pub fn det_of(&self, z: &[Label]) -> Result<RingValue> {
        let (r, c) = self.masks_of(z)?;
        if size(r) != size(c) {
            return Err(Error::NotSquare { rows: size(r), cols: size(c) });
        }
        Ok(self.det_masks(r, c))
    }

    /// Square index-mask pairs `(R, C)` ordered by size, then by the sorted
    /// label list of `R ∪ C`.
    fn square_subsets(&self) -> Vec<(u32, u32)> {
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let mut out = Vec::new();
        for k in 0..=nr.min(nc) {
            let mut level: Vec<(Vec<Label>, u32, u32)> = Vec::new();
            for r in bits::combinations(full(nr), k) {
                for c in bits::combinations(full(nc), k) {
                    level.push((self.labels_of_masks(r, c), r, c));
                }
            }
            level.sort();
            out.extend(level.into_iter().map(|(_, r, c)| (r, c)));
        }
        out
    }

    /// The first square `Z` (by size, then labels) whose determinant is not
    /// in the partial field, or `None` when `A` is a P-matrix.
    pub fn p_matrix_violation(&self) -> Result<Option<Vec<Label>>> {
        let total = self.rows.len() + self.cols.len();
        if total > P_MATRIX_LIMIT {
            return Err(Error::SizeLimit { size: total, limit: P_MATRIX_LIMIT });
        }
        if matches!(self.field, PartialField::Gf(_)) {
            return Ok(None);
        }
        for (r, c) in self.square_subsets() {
            if !self.field.contains(&self.det_masks(r, c))? {
                return Ok(Some(self.labels_of_masks(r, c)));
            }
        }
        Ok(None)
    }

    pub fn is_p_matrix(&self) -> Result<bool> {
        Ok(self.p_matrix_violation()?.is_none())
    }

    /// `M[I|A]`: bases `X △ Z` over square `Z` with `det A[Z] ≠ 0`.
    pub fn matroid(&self) -> Result<Matroid> {
        if let Some(z) = self.p_matrix_violation()? {
            return Err(Error::NotPMatrix(z));
        }
        self.matroid_unchecked_family().and_then(|(ground, masks)| Matroid::from_masks(ground, masks))
    }

    fn matroid_unchecked_family(&self) -> Result<(Vec<Label>, Vec<u32>)> {
        let ground = self.labels();
        if ground.len() > MAX_ELEMENTS {
            return Err(Error::GroundTooLarge(ground.len()));
        }
        let pos = |l: Label| bit(ground.binary_search(&l).expect("label present"));
        let row_bits: Vec<u32> = self.rows.iter().map(|&l| pos(l)).collect();
        let col_bits: Vec<u32> = self.cols.iter().map(|&l| pos(l)).collect();
        let x_mask = row_bits.iter().fold(0, |a, b| a | b);
        let mut masks = Vec::new();
        let (nr, nc) = (self.rows.len(), self.cols.len());
        for k in 0..=nr.min(nc) {
            for r in bits::combinations(full(nr), k) {
                for c in bits::combinations(full(nc), k) {
                    if !self.field.is_zero(&self.det_masks(r, c)) {
                        let out = bits(r).fold(0, |a, i| a | row_bits[i]);
                        let inn = bits(c).fold(0, |a, j| a | col_bits[j]);
                        masks.push((x_mask & !out) | inn);
                    }
                }
            }
        }
        Ok((ground, masks))
    }

    /// `A^{xy}`. Row `x` becomes row `y` and column `y` becomes column `x`,
    /// keeping their positions.
    pub fn pivot(&self, x: Label, y: Label) -> Result<PMatrix> {
        let xi = self.row_index(x).ok_or(Error::UnknownLabel(x))?;
        let yj = self.col_index(y).ok_or(Error::UnknownLabel(y))?;
        let f = &self.field;
        let axy = &self.entries[xi][yj];
        if f.is_zero(axy) {
            return Err(Error::ZeroPivot { x, y });
        }
        let inv = f.inverse(axy).ok_or(Error::NonUnitPivot { x, y })?;
        let mut entries = self.entries.clone();
        for (u, row) in entries.iter_mut().enumerate() {
            for (v, slot) in row.iter_mut().enumerate() {
                *slot = match (u == xi, v == yj) {
                    (true, true) => inv.clone(),
                    (true, false) => f.mul(&inv, &self.entries[xi][v]),
                    (false, true) => f.neg(&f.mul(&inv, &self.entries[u][yj])),
                    (false, false) => {
                        let t = f.mul(&f.mul(&inv, &self.entries[u][yj]), &self.entries[xi][v]);
                        f.sub(&self.entries[u][v], &t)
                    }
                };
            }
        }
        let mut rows = self.rows.clone();
        let mut cols = self.cols.clone();
        rows[xi] = y;
        cols[yj] = x;
        Ok(PMatrix { field: self.field.clone(), rows, cols, entries })
    }

    pub fn scale_row(&mut self, x: Label, s: &RingValue) -> Result<()> {
        let i = self.row_index(x).ok_or(Error::UnknownLabel(x))?;
        let f = self.field.clone();
        for v in &mut self.entries[i] {
            *v = f.mul(v, s);
        }
        Ok(())
    }

    pub fn scale_col(&mut self, y: Label, s: &RingValue) -> Result<()> {
        let j = self.col_index(y).ok_or(Error::UnknownLabel(y))?;
        let f = self.field.clone();
        for row in &mut self.entries {
            row[j] = f.mul(&row[j], s);
        }
        Ok(())
    }

    /// Whether row and column scalings by nonzero elements of the partial
    /// field carry `self` to `other`. Rows and columns are matched by label.
    ///
    /// In each connected component of the support graph one row scale can
    /// be fixed to 1; every other scale is then forced along a spanning tree
    /// and the remaining entries are checked.
    pub fn scaling_equivalent(&self, other: &PMatrix) -> Result<bool> {
        let same_set = |a: &[Label], b: &[Label]| {
            let mut a = a.to_vec();
            let mut b = b.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        };
        if self.field != other.field || !same_set(&self.rows, &other.rows) || !same_set(&self.cols, &other.cols) {
            return Err(Error::LabelMismatch);
        }
        let other = other.restrict(&self.rows, &self.cols)?;
        let f = &self.field;
        let (nr, nc) = (self.rows.len(), self.cols.len());
        for i in 0..nr {
            for j in 0..nc {
                if f.is_zero(&self.entries[i][j]) != f.is_zero(&other.entries[i][j]) {
                    return Ok(false);
                }
            }
        }
        let unit = |v: &RingValue| !f.is_zero(v) && f.contains(v).unwrap_or(false);
        let mut rs: Vec<Option<RingValue>> = vec![None; nr];
        let mut cs: Vec<Option<RingValue>> = vec![None; nc];
        for start in 0..nr {
            if rs[start].is_some() {
                continue;
            }
            rs[start] = Some(f.one());
            let mut stack = vec![(true, start)];
            while let Some((is_row, k)) = stack.pop() {
                if is_row {
                    let s = rs[k].clone().unwrap();
                    for j in 0..nc {
                        if cs[j].is_some() || f.is_zero(&self.entries[k][j]) {
                            continue;
                        }
                        let Some(t) = f.div_exact(&other.entries[k][j], &f.mul(&s, &self.entries[k][j])) else {
                            return Ok(false);
                        };
                        if !unit(&t) {
                            return Ok(false);
                        }
                        cs[j] = Some(t);
                        stack.push((false, j));
                    }
                } else {
                    let t = cs[k].clone().unwrap();
                    for i in 0..nr {
                        if rs[i].is_some() || f.is_zero(&self.entries[i][k]) {
                            continue;
                        }
                        let Some(s) = f.div_exact(&other.entries[i][k], &f.mul(&t, &self.entries[i][k])) else {
                            return Ok(false);
                        };
                        if !unit(&s) {
                            return Ok(false);
                        }
                        rs[i] = Some(s);
                        stack.push((true, i));
                    }
                }
            }
        }
        for i in 0..nr {
            for j in 0..nc {
                if f.is_zero(&self.entries[i][j]) {
                    continue;
                }
                let (Some(s), Some(t)) = (&rs[i], &cs[j]) else {
                    return Ok(false);
                };
                if f.mul(&f.mul(s, &self.entries[i][j]), t) != other.entries[i][j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> PMatrixJson {
        PMatrixJson {
            field: self.field.name(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(|v| self.field.format_value(v)).collect()).collect(),
        }
    }

    pub fn from_json(j: &PMatrixJson) -> Result<Self> {
        let field = PartialField::parse(&j.field)?;
        PMatrix::parse(field, j.rows.clone(), j.cols.clone(), &j.entries)
    }
}

/// Serialized form of a [`PMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMatrixJson {
    pub field: String,
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
    pub entries: Vec<Vec<String>>,
}

pub fn matroid_from(a: &PMatrix) -> Result<Matroid> {
    a.matroid()
}

pub fn pivot(a: &PMatrix, x: Label, y: Label) -> Result<PMatrix> {
    a.pivot(x, y)
}

pub fn scaling_equivalent(a1: &PMatrix, a2: &PMatrix) -> Result<bool> {
    a1.scaling_equivalent(a2)
}

fn ground_matches(m: &Matroid, a: &PMatrix) -> bool {
    m.ground() == a.labels().as_slice()
}

/// `A - a` and `A - b` are P-matrices representing `M\a` and `M\b`.
pub fn companion_check(m: &Matroid, a: &PMatrix, ea: Label, eb: Label) -> Result<bool> {
    for e in [ea, eb] {
        if a.col_index(e).is_none() {
            return Err(Error::Precondition(format!("{e} is not a column label")));
        }
    }
    if ea == eb {
        return Err(Error::Precondition("a and b must differ".into()));
    }
    if !ground_matches(m, a) {
        return Err(Error::LabelMismatch);
    }
    for e in [ea, eb] {
        let sub = a.remove(&[e]);
        if !sub.is_p_matrix()? {
            return Ok(false);
        }
        if sub.matroid()? != m.delete_labels(&[e])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which incrimination condition a set satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Condition {
    DetNotInP,
    DetZeroButBasis,
    DetNonzeroButDependent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncriminationWitness {
    pub z: Vec<Label>,
    pub condition: Condition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IncriminationStatus {
    Represents,
    Incriminated(IncriminationWitness),
}

/// Maps matrix rows and columns to ground-set bits of `m`.
struct Placement {
    row_bits: Vec<u32>,
    col_bits: Vec<u32>,
    x_mask: u32,
}

impl Placement {
    fn new(m: &Matroid, a: &PMatrix) -> Result<Self> {
        if !ground_matches(m, a) {
            return Err(Error::LabelMismatch);
        }
        let row_bits = a.rows.iter().map(|&l| m.index_of(l).map(bit)).collect::<Result<Vec<_>>>()?;
        let col_bits = a.cols.iter().map(|&l| m.index_of(l).map(bit)).collect::<Result<Vec<_>>>()?;
        let x_mask = row_bits.iter().fold(0, |acc, b| acc | b);
        Ok(Placement { row_bits, col_bits, x_mask })
    }

    fn sym_diff(&self, r: u32, c: u32) -> u32 {
        let z = bits(r).fold(0, |acc, i| acc | self.row_bits[i]) | bits(c).fold(0, |acc, j| acc | self.col_bits[j]);
        self.x_mask ^ z
    }
}

fn condition_at(m: &Matroid, a: &PMatrix, place: &Placement, r: u32, c: u32) -> Option<Condition> {
    let d = a.det_masks(r, c);
    let f = &a.field;
    if !f.contains(&d).unwrap_or(false) {
        return Some(Condition::DetNotInP);
    }
    let basis = m.is_basis(place.sym_diff(r, c));
    match (f.is_zero(&d), basis) {
        (true, true) => Some(Condition::DetZeroButBasis),
        (false, false) => Some(Condition::DetNonzeroButDependent),
        _ => None,
    }
}

fn incriminates_unchecked(m: &Matroid, a: &PMatrix, z: &[Label]) -> Result<Option<IncriminationWitness>> {
    let place = Placement::new(m, a)?;
    let (r, c) = a.masks_of(z)?;
    if size(r) != size(c) {
        return Err(Error::NotSquare { rows: size(r), cols: size(c) });
    }
    let mut zs = z.to_vec();
    zs.sort_unstable();
    zs.dedup();
    Ok(condition_at(m, a, &place, r, c).map(|condition| IncriminationWitness { z: zs, condition }))
}

/// The incrimination condition `Z` satisfies for `(M, A)`, if any. The row
/// labels of `A` must form a basis of `M`.
pub fn incriminates(m: &Matroid, a: &PMatrix, z: &[Label]) -> Result<Option<IncriminationWitness>> {
    let place = Placement::new(m, a)?;
    if !m.is_basis(place.x_mask) {
        return Err(Error::NotABasis(format!("{:?}", a.rows)));
    }
    incriminates_unchecked(m, a, z)
}

/// Either `A` is a P-matrix with `M = M[I|A]`, or the least incriminating
/// set (by size, then labels). `|X|` must equal `r(M)`.
pub fn incrimination_status(m: &Matroid, a: &PMatrix) -> Result<IncriminationStatus> {
    let place = Placement::new(m, a)?;
    if a.rows.len() != m.rank() {
        return Err(Error::Shape(format!("{} rows but r(M) = {}", a.rows.len(), m.rank())));
    }
    for (r, c) in a.square_subsets() {
        if let Some(condition) = condition_at(m, a, &place, r, c) {
            return Ok(IncriminationStatus::Incriminated(IncriminationWitness { z: a.labels_of_masks(r, c), condition }));
        }
    }
    Ok(IncriminationStatus::Represents)
}

/// An incriminating set `{x, y, a, b}` with `x, y` rows and `a, b` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quad {
    pub x: Label,
    pub y: Label,
    pub a: Label,
    pub b: Label,
}

impl Quad {
    pub fn labels(&self) -> [Label; 4] {
        [self.x, self.y, self.a, self.b]
    }
}

/// Whether pivoting on `pq` keeps an incriminating set: the quad itself if
/// `{p, q}` misses it, otherwise the quad with `{p, q}` toggled.
pub fn allowable_pivot(m: &Matroid, a: &PMatrix, quad: &Quad, p: Label, q: Label) -> Result<bool> {
    if a.row_index(quad.x).is_none() || a.row_index(quad.y).is_none() || quad.x == quad.y {
        return Err(Error::Precondition("x and y must be distinct row labels".into()));
    }
    if a.col_index(quad.a).is_none() || a.col_index(quad.b).is_none() || quad.a == quad.b {
        return Err(Error::Precondition("a and b must be distinct column labels".into()));
    }
    if incriminates_unchecked(m, a, &quad.labels())?.is_none() {
        return Err(Error::NotIncriminating(quad.labels().to_vec()));
    }
    let pivoted = a.pivot(p, q)?;
    let mut z: Vec<Label> = quad.labels().to_vec();
    for e in [p, q] {
        if let Some(k) = z.iter().position(|&l| l == e) {
            z.remove(k);
        } else if quad.labels().contains(&p) || quad.labels().contains(&q) {
            z.push(e);
        }
    }
    match incriminates_unchecked(m, &pivoted, &z) {
        Ok(w) => Ok(w.is_some()),
        Err(Error::NotSquare { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn gf_det(f: &GaloisField, a: &mut [Vec<u8>]) -> u8 {
    let n = a.len();
    let mut det = 1u8;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = f.neg(det);
        }
        det = f.mul(det, a[k][k]);
        let inv = f.inv(a[k][k]).unwrap();
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let factor = f.mul(a[i][k], inv);
            for j in k..n {
                a[i][j] = f.add(a[i][j], f.neg(f.mul(factor, a[k][j])));
            }
        }
    }
    det
}

/// Square submatrix constraint completed at one cell.
struct Check {
    rows: u32,
    cols: u32,
    nonzero: bool,
}

struct Enumerator<'a> {
    f: &'a GaloisField,
    nr: usize,
    nc: usize,
    /// per cell, row-major: `None` if free, else the fixed value
    fixed: Vec<Option<u8>>,
    checks: Vec<Vec<Check>>,
    cur: Vec<Vec<u8>>,
    found: Vec<Vec<Vec<u8>>>,
    limit: usize,
    nodes: u64,
    budget: u64,
}

impl Enumerator<'_> {
    fn run(&mut self, cell: usize) -> Result<()> {
        if self.found.len() >= self.limit {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(self.budget));
        }
        if cell == self.nr * self.nc {
            self.found.push(self.cur.clone());
            return Ok(());
        }
        let (i, j) = (cell / self.nc, cell % self.nc);
        let values: Vec<u8> = match self.fixed[cell] {
            Some(v) => vec![v],
            None => (1..self.f.order()).collect(),
        };
        for v in values {
            self.cur[i][j] = v;
            if self.consistent(cell) {
                self.run(cell + 1)?;
            }
        }
        self.cur[i][j] = 0;
        Ok(())
    }

    fn consistent(&self, cell: usize) -> bool {
        self.checks[cell].iter().all(|ch| {
            let mut sub: Vec<Vec<u8>> = bits(ch.rows).map(|i| bits(ch.cols).map(|j| self.cur[i][j]).collect()).collect();
            (gf_det(self.f, &mut sub) != 0) == ch.nonzero
        })
    }
}

/// Default node budget for representation searches.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Representations of `M` over a finite field with rows indexed by the
/// basis `basis`, one per scaling class, stopping after `limit` classes.
///
/// Each class has a unique member whose entries on a row-major spanning
/// forest of the support graph are 1, so only those are generated.
pub fn representations_on_basis(m: &Matroid, field: &PartialField, basis: u32, limit: usize, budget: u64) -> Result<Vec<PMatrix>> {
    let Some(f) = field.finite_field() else {
        return Err(Error::Precondition(format!("representation search needs a finite field, got {field}")));
    };
    if m.len() > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit { size: m.len(), limit: ENUMERATION_LIMIT });
    }
    if !m.is_basis(basis) {
        return Err(Error::NotABasis(format!("{:?}", m.labels_of(basis))));
    }
    let row_idx: Vec<usize> = bits(basis).collect();
    let col_idx: Vec<usize> = bits(m.full_mask() & !basis).collect();
    let (nr, nc) = (row_idx.len(), col_idx.len());
    let swap = |r: u32, c: u32| {
        let out = bits(r).fold(0, |acc, i| acc | bit(row_idx[i]));
        let inn = bits(c).fold(0, |acc, j| acc | bit(col_idx[j]));
        (basis & !out) | inn
    };
    let mut parent: Vec<usize> = (0..nr + nc).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut fixed = vec![None; nr * nc];
    for i in 0..nr {
        for j in 0..nc {
            let cell = i * nc + j;
            if !m.is_basis(swap(bit(i), bit(j))) {
                fixed[cell] = Some(0);
                continue;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, nr + j));
            if a != b {
                parent[a] = b;
                fixed[cell] = Some(1);
            }
        }
    }
    let mut checks: Vec<Vec<Check>> = Vec::with_capacity(nr * nc);
    for i in 0..nr {
        for j in 0..nc {
            let mut here = Vec::new();
            for k in 2..=(i + 1).min(j + 1) {
                for r in bits::combinations(full(i), k - 1) {
                    for c in bits::combinations(full(j), k - 1) {
                        let (r, c) = (r | bit(i), c | bit(j));
                        here.push(Check { rows: r, cols: c, nonzero: m.is_basis(swap(r, c)) });
                    }
                }
            }
            checks.push(here);
        }
    }
    let mut e = Enumerator {
        f,
        nr,
        nc,
        fixed,
        checks,
        cur: vec![vec![0u8; nc]; nr],
        found: Vec::new(),
        limit,
        nodes: 0,
        budget,
    };
    e.run(0)?;
    let rows: Vec<Label> = row_idx.iter().map(|&i| m.label(i)).collect();
    let cols: Vec<Label> = col_idx.iter().map(|&j| m.label(j)).collect();
    let mut out: Vec<PMatrix> = Vec::new();
    for raw in e.found {
        let entries = raw.into_iter().map(|r| r.into_iter().map(RingValue::Gf).collect()).collect();
        let a = PMatrix::new(field.clone(), rows.clone(), cols.clone(), entries)?;
        let mut dup = false;
        for b in &out {
            if a.scaling_equivalent(b)? {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(a);
        }
    }
    Ok(out)
}

/// The lexicographically least basis: greedy over the sorted ground set.
pub fn least_basis(m: &Matroid) -> u32 {
    let mut b = 0u32;
    for e in 0..m.len() {
        if m.is_independent(b | bit(e)) {
            b |= bit(e);
        }
    }
    b
}

/// All representations of `M` over a finite field up to scaling, with rows
/// indexed by the lexicographically least basis. Empty iff `M` is not
/// representable over the field.
pub fn enumerate_representations(m: &Matroid, field: &PartialField) -> Result<Vec<PMatrix>> {
    representations_on_basis(m, field, least_basis(m), usize::MAX, DEFAULT_BUDGET)
}

pub fn find_representation(m: &Matroid, field: &PartialField) -> Result<Option<PMatrix>> {
    Ok(representations_on_basis(m, field, least_basis(m), 1, DEFAULT_BUDGET)?.pop())
}

pub fn is_representable(m: &Matroid, field: &PartialField) -> Result<bool> {
    Ok(find_representation(m, field)?.is_some())
}

/// Not representable, while every single-element deletion and contraction
/// is.
pub fn is_excluded_minor(m: &Matroid, field: &PartialField) -> Result<bool> {
    if is_representable(m, field)? {
        return Ok(false);
    }
    for e in 0..m.len() {
        if !is_representable(&m.delete(bit(e)), field)? || !is_representable(&m.contract(bit(e)), field)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `M` is stabilized by the minor `N` over a finite field.
/// `embedding` maps each element of `N` to the element of `M` it occupies.
///
/// Every basis `X` of `M` with `M / (X - S) \ (Y - S) = N` (`S` the image of
/// `E(N)`) is tried; representation classes over `X` whose restrictions to
/// `S` are scaling equivalent must coincide.
pub fn is_stabilized_by(m: &Matroid, n: &Matroid, field: &PartialField, embedding: &[(Label, Label)]) -> Result<bool> {
    if embedding.len() != n.len() {
        return Err(Error::Precondition("embedding must cover E(N)".into()));
    }
    let image = n.relabel_pairs(embedding)?;
    let s = m.mask_of(image.ground())?;
    let rest = m.full_mask() & !s;
    let mut placed = false;
    for &x in m.basis_masks() {
        let (con, del) = (x & rest, rest & !x);
        if !m.is_independent(con) || m.minor(con, del) != image {
            continue;
        }
        placed = true;
        let reps = representations_on_basis(m, field, x, usize::MAX, DEFAULT_BUDGET)?;
        let xs = m.labels_of(x & s);
        let ys = m.labels_of(s & !x);
        for (i, a1) in reps.iter().enumerate() {
            for a2 in &reps[i + 1..] {
                if a1.restrict(&xs, &ys)?.scaling_equivalent(&a2.restrict(&xs, &ys)?)? {
                    return Ok(false);
                }
            }
        }
    }
    if !placed {
        return Err(Error::Precondition("N is not a minor of M in the given position".into()));
    }
    Ok(true)
}
