//! Linear encoders over prime fields. Decodability of a message for a
//! receiver reduces to row-space membership of a unit vector in the columns
//! outside its side information, which makes linear decodability a
//! per-receiver all-or-nothing property; the minimal-length search then
//! only has to range over row-space representatives (reduced echelon
//! forms).

use crate::codebook::{assemble_codebook, VPCodebook};
use crate::decodability::FiberRule;
use crate::error::{Error, Result};
use crate::model::{Alphabet, ProblemInstance, ReceiverSet, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || (2..q).take_while(|d| d * d <= q).any(|d| q % d == 0) {
            return Err(Error::Input(format!("field size {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn inv(&self, a: u32) -> u32 {
        debug_assert_ne!(a % self.q, 0);
        // Fermat: a^(q-2)
        let mut base = a as u64 % self.q as u64;
        let mut exp = self.q as u64 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.q as u64;
            }
            base = base * base % self.q as u64;
            exp >>= 1;
        }
        acc as u32
    }
}

/// T x m encoding matrix, row-major, entries in `[0:q-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEncoder {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl LinearEncoder {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>, field: PrimeField) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > cols {
            return Err(Error::Input(format!(
                "encoder must be T x m with 1 <= T <= m, got {rows} x {cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Input(format!(
                "expected {} entries for a {rows} x {cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e >= field.q()) {
            return Err(Error::Input(format!(
                "matrix entry outside [0:{}]",
                field.q() - 1
            )));
        }
        Ok(LinearEncoder { rows, cols, entries })
    }

    /// Rows separated by ';', entries by ',': "1,1,0;0,1,1".
    pub fn parse(text: &str, field: PrimeField) -> Result<Self> {
        let mut rows = Vec::new();
        for row_text in text.split(';') {
            let row: Vec<u32> = row_text
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Input(format!("matrix entry '{}' is not a number", e.trim())))
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("matrix rows have unequal lengths".into()));
        }
        let t = rows.len();
        LinearEncoder::new(t, cols, rows.concat(), field)
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub fn linear_encode(enc: &LinearEncoder, x: &[u32], field: PrimeField) -> Result<Vec<u32>> {
    if x.len() != enc.m() {
        return Err(Error::Input(format!(
            "realisation has length {}, encoder expects {}",
            x.len(),
            enc.m()
        )));
    }
    if x.iter().any(|&v| v >= field.q()) {
        return Err(Error::Input(format!(
            "realisation entry outside the field [0:{}]",
            field.q() - 1
        )));
    }
    Ok((0..enc.t())
        .map(|i| {
            enc.row(i)
                .iter()
                .zip(x)
                .fold(0, |acc, (&a, &v)| field.add(acc, field.mul(a, v)))
        })
        .collect())
}

/// In-place Gaussian elimination to reduced echelon form; returns the
/// nonzero rows.
fn rref(mut rows: Vec<Vec<u32>>, field: PrimeField) -> Vec<Vec<u32>> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        for e in rows[rank].iter_mut() {
            *e = field.mul(*e, inv);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..width {
                    let delta = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Reduces `v` by the echelon rows; membership in the row space is a zero
/// remainder.
fn in_row_space(basis: &[Vec<u32>], v: &[u32], field: PrimeField) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let lead = row.iter().position(|&e| e != 0).unwrap();
        if v[lead] != 0 {
            let factor = v[lead];
            for (e, &b) in v.iter_mut().zip(row) {
                *e = field.sub(*e, field.mul(factor, b));
            }
        }
    }
    v.iter().all(|&e| e == 0)
}

/// 0-based message indices outside `h` whose value is always recoverable
/// from the codeword plus side information: the unit vector on that column
/// lies in the row space of the columns outside `h`.
pub fn decodable_indices(enc: &LinearEncoder, h: ReceiverSet, field: PrimeField) -> Vec<usize> {
    let outside = h.complement(enc.m());
    let restricted: Vec<Vec<u32>> = (0..enc.t())
        .map(|i| outside.iter().map(|&c| enc.row(i)[c]).collect())
        .collect();
    let basis = rref(restricted, field);
    outside
        .iter()
        .enumerate()
        .filter(|&(pos, _)| {
            let mut unit = vec![0u32; outside.len()];
            unit[pos] = 1;
            in_row_space(&basis, &unit, field)
        })
        .map(|(_, &j)| j)
        .collect()
}

/// True iff every receiver can decode some index; the map picks the
/// smallest decodable index per receiver, which is the choice function of
/// the equivalent pliable code.
pub fn is_vp_linear(
    enc: &LinearEncoder,
    inst: &ProblemInstance,
    field: PrimeField,
) -> (bool, Vec<Option<usize>>) {
    let map: Vec<Option<usize>> = inst
        .receivers()
        .iter()
        .map(|h| decodable_indices(enc, *h, field).first().copied())
        .collect();
    (map.iter().all(|c| c.is_some()), map)
}

/// Lexicographically increasing combinations of `t` columns out of `m`.
fn combinations(m: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        out.push(combo.clone());
        let mut i = t;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + m - t {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..t {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Enumerates all reduced-echelon T x m matrices with the given pivot
/// columns, free entries counting up as a base-q odometer; calls `visit`
/// until it returns true, propagating the hit.
fn each_echelon_matrix(
    t: usize,
    m: usize,
    pivots: &[usize],
    field: PrimeField,
    visit: &mut dyn FnMut(&LinearEncoder) -> bool,
) -> Option<LinearEncoder> {
    // free positions: non-pivot columns to the right of each row's pivot
    let mut free = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..m {
            if !pivots.contains(&c) {
                free.push((i, c));
            }
        }
    }
    let mut values = vec![0u32; free.len()];
    loop {
        let mut entries = vec![0u32; t * m];
        for (i, &p) in pivots.iter().enumerate() {
            entries[i * m + p] = 1;
        }
        for (&(i, c), &v) in free.iter().zip(&values) {
            entries[i * m + c] = v;
        }
        let enc = LinearEncoder::new(t, m, entries, field).unwrap();
        if visit(&enc) {
            return Some(enc);
        }
        // odometer, last position fastest
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < field.q() {
                break;
            }
            values[pos] = 0;
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinLengthResult {
    pub t: usize,
    pub witness: LinearEncoder,
}

/// Smallest codeword length admitting a fully decodable linear encoder, by
/// exhaustive search over echelon representatives for T = 1, 2, ...
/// Returns None when nothing up to `t_max` works.
pub fn linear_min_t(
    inst: &ProblemInstance,
    field: PrimeField,
    t_max: usize,
) -> Option<MinLengthResult> {
    let m = inst.m();
    for t in 1..=t_max.min(m) {
        for pivots in combinations(m, t) {
            let hit = each_echelon_matrix(t, m, &pivots, field, &mut |enc| {
                is_vp_linear(enc, inst, field).0
            });
            if let Some(witness) = hit {
                return Some(MinLengthResult { t, witness });
            }
        }
    }
    None
}

/// Bridges a decodable linear encoder into the common codebook form:
/// fibers are the solution sets of E x = c, codewords renumbered over the
/// occurring syndromes in ascending order.
pub fn linear_to_codebook(
    enc: &LinearEncoder,
    inst: &ProblemInstance,
    field: PrimeField,
) -> Result<VPCodebook> {
    if enc.m() != inst.m() {
        return Err(Error::Input(format!(
            "encoder has {} columns, instance has m={}",
            enc.m(),
            inst.m()
        )));
    }
    let (vp, _) = is_vp_linear(enc, inst, field);
    if !vp {
        return Err(Error::Input(
            "encoder is not decodable for every receiver".into(),
        ));
    }
    let alphabet = Alphabet::new(field.q())?;
    let uni = Universe::new(inst.m(), alphabet)?;
    let n = uni.size() as usize;
    let mut packed = Vec::with_capacity(n);
    let mut x = vec![0u32; inst.m()];
    for v in 0..n as u32 {
        uni.write_realisation(v, &mut x);
        let c = linear_encode(enc, &x, field)?;
        let code = c
            .iter()
            .fold(0u64, |acc, &s| acc * field.q() as u64 + s as u64);
        packed.push(code);
    }
    let mut occurring: Vec<u64> = packed.clone();
    occurring.sort_unstable();
    occurring.dedup();
    let assignment: Vec<u64> = packed
        .into_iter()
        .map(|code| occurring.binary_search(&code).unwrap() as u64)
        .collect();
    assemble_codebook(
        assignment,
        occurring.len() as u64,
        inst,
        &uni,
        &FiberRule::vp(inst),
    )
}
