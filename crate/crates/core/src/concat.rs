//! Larger-alphabet codes by layering. A codebook for alphabet `k` extends
//! to one for alphabet `k*f` by splitting each message into a k-ary part
//! and an f-ary part: the k-ary parts go through the given codebook, the
//! f-ary parts through an MDS layer whose output, together with any `p`
//! known coordinates, pins down the whole f-ary vector. On every slice the
//! f-ary layer is then constant outright, so whichever index the k-ary
//! decoder recovers, its f-ary part comes along for free. That coupling is
//! what plain componentwise concatenation of two codebooks lacks, and
//! without it the result can fail validity.
//!
//! Raising a codebook whose decoded index is fixed per receiver to a
//! digit-wise power has no such subtlety: every layer decodes the same
//! index, so the composite does too.

use crate::codebook::{assemble_codebook, VPCodebook, CODEBOOK_SIZE_GUARD};
use crate::decodability::{verify_codebook, FiberRule};
use crate::error::{Error, Result};
use crate::linear::PrimeField;
use crate::model::{Alphabet, ProblemInstance, Universe};

/// Ceiling for the automatic MDS field search; `m <= 64` keeps the needed
/// primes far below it.
pub const MDS_FIELD_CAP: u32 = 257;

/// Adjacent-pair parities: the binary (m, m-1) layer in which any one
/// known bit resolves all m.
pub fn xor_chain_encode(bits: &[u32]) -> Vec<u32> {
    bits.windows(2).map(|w| (w[0] + w[1]) % 2).collect()
}

/// An (m, m-p) layer over a prime field: `encode` maps m symbols to m-p,
/// and any p known input coordinates plus the output determine the input.
#[derive(Debug, Clone)]
pub struct MdsSpec {
    pub m: usize,
    pub p: usize,
    pub field: PrimeField,
    matrix: Vec<Vec<u32>>,
}

impl MdsSpec {
    /// Smallest admissible prime field, or the override if it qualifies.
    /// Admissible means f >= max(2, m-1), and additionally f >= m unless
    /// the layer is a difference chain (p=1) or a single checksum (p=m-1),
    /// whose kernels stay MDS at any field size.
    pub fn new(m: usize, p: usize, field_override: Option<u32>) -> Result<Self> {
        if m < 2 || p == 0 || p >= m {
            return Err(Error::Input(format!(
                "MDS layer needs 1 <= p <= m-1, got p={p}, m={m}"
            )));
        }
        let floor = 2.max(m as u32 - 1);
        let admissible = |f: u32| f >= floor && (p == 1 || p == m - 1 || f as usize >= m);
        let q = match field_override {
            Some(f) => {
                let prime = PrimeField::new(f).is_ok();
                if !prime || !admissible(f) {
                    return Err(Error::Input(format!(
                        "field size {f} does not admit an ({m}, {}) MDS layer for p={p}",
                        m - p
                    )));
                }
                f
            }
            None => (floor..=MDS_FIELD_CAP)
                .find(|&f| PrimeField::new(f).is_ok() && admissible(f))
                .ok_or_else(|| {
                    Error::Capacity(format!(
                        "no admissible prime field at or below {MDS_FIELD_CAP}"
                    ))
                })?,
        };
        Ok(MdsSpec::with_field(m, p, PrimeField::new(q).unwrap()))
    }

    /// The binary difference chain for any m, used by the doubling
    /// construction; skips the f >= m-1 floor the general path imposes.
    pub(crate) fn binary_chain(m: usize) -> MdsSpec {
        MdsSpec::with_field(m, 1, PrimeField::new(2).unwrap())
    }

    fn with_field(m: usize, p: usize, field: PrimeField) -> MdsSpec {
        let q = field.q();
        let matrix: Vec<Vec<u32>> = if p == 1 {
            // rows y_i - y_{i+1}; kernel is the repetition code
            (0..m - 1)
                .map(|i| {
                    let mut row = vec![0u32; m];
                    row[i] = 1;
                    row[i + 1] = q - 1;
                    row
                })
                .collect()
        } else if p == m - 1 {
            vec![vec![1u32; m]]
        } else {
            // rows j^i at distinct points j; any m-p columns are a square
            // Vandermonde matrix, hence invertible (needs f >= m)
            (0..m - p)
                .map(|i| {
                    (0..m as u32)
                        .map(|j| {
                            (0..i).fold(1u32, |acc, _| field.mul(acc, j))
                        })
                        .collect()
                })
                .collect()
        };
        MdsSpec { m, p, field, matrix }
    }

    pub fn output_len(&self) -> usize {
        self.m - self.p
    }

    pub fn encode(&self, y: &[u32]) -> Vec<u32> {
        debug_assert_eq!(y.len(), self.m);
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(y)
                    .fold(0, |acc, (&a, &v)| self.field.add(acc, self.field.mul(a, v)))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ConcatOutcome {
    pub codebook: VPCodebook,
    /// Codeword count before dead-codeword pruning: input t times
    /// f^(m-p). Every combination occurs, so pruning never bites; both
    /// are reported for the record.
    pub t_raw: u64,
    pub field: u32,
    pub p: usize,
}

fn check_side_info_floor(inst: &ProblemInstance, p: usize) -> Result<()> {
    for r in inst.receivers() {
        if r.len() < p {
            return Err(Error::Input(format!(
                "construction needs every receiver to know at least {p} message(s); receiver {:?} knows {}",
                r.members_one_based(),
                r.len()
            )));
        }
    }
    Ok(())
}

fn verified_input(cb: &VPCodebook, inst: &ProblemInstance) -> Result<(Alphabet, Universe)> {
    let alphabet = Alphabet::new(cb.k)?;
    let report = verify_codebook(cb, inst, alphabet)?;
    if !report.ok {
        return Err(Error::Input(
            "input codebook fails verification on this instance".into(),
        ));
    }
    Ok((alphabet, Universe::new(cb.m, alphabet)?))
}

fn concat_with_mds(
    cb: &VPCodebook,
    inst: &ProblemInstance,
    mds: MdsSpec,
) -> Result<ConcatOutcome> {
    check_side_info_floor(inst, mds.p)?;
    let (_, in_uni) = verified_input(cb, inst)?;
    let f = mds.field.q();
    let new_k = cb
        .k
        .checked_mul(f)
        .ok_or_else(|| Error::Capacity("composite alphabet exceeds u32".into()))?;
    let new_uni = Universe::new(inst.m(), Alphabet::new(new_k)?)?;
    let n = new_uni.size();
    if n > CODEBOOK_SIZE_GUARD {
        return Err(Error::Capacity(format!(
            "composite alphabet yields {n} realisations, above {CODEBOOK_SIZE_GUARD}"
        )));
    }

    let syn_card = (f as u64)
        .checked_pow(mds.output_len() as u32)
        .filter(|&c| cb.t.checked_mul(c).is_some())
        .ok_or_else(|| Error::Capacity("codeword count exceeds u64".into()))?;
    let t_raw = cb.t * syn_card;

    let m = inst.m();
    let mut z = vec![0u32; m];
    let mut a = vec![0u32; m];
    let mut b = vec![0u32; m];
    let mut assignment = Vec::with_capacity(n as usize);
    for v in 0..n as u32 {
        new_uni.write_realisation(v, &mut z);
        for i in 0..m {
            // message value = f * (k-ary part) + (f-ary part)
            a[i] = z[i] / f;
            b[i] = z[i] % f;
        }
        let id_a = cb.assignment[in_uni.index_of(&a)? as usize];
        let packed = mds
            .encode(&b)
            .iter()
            .fold(0u64, |acc, &s| acc * f as u64 + s as u64);
        assignment.push(id_a * syn_card + packed);
    }
    debug_assert!({
        let mut seen = vec![false; t_raw as usize];
        for &c in &assignment {
            seen[c as usize] = true;
        }
        seen.iter().all(|&s| s)
    });

    let codebook = assemble_codebook(assignment, t_raw, inst, &new_uni, &FiberRule::vp(inst))?;
    Ok(ConcatOutcome {
        codebook,
        t_raw,
        field: f,
        p: mds.p,
    })
}

/// Alphabet doubling: k-ary layer through `cb`, binary layer through the
/// XOR chain. Needs every receiver to know at least one message.
pub fn concat_double(cb: &VPCodebook, inst: &ProblemInstance) -> Result<ConcatOutcome> {
    concat_with_mds(cb, inst, MdsSpec::binary_chain(inst.m()))
}

/// General composition at side-information floor `p`: k-ary layer through
/// `cb`, f-ary layer through an (m, m-p) MDS code over the chosen prime
/// field. The automatic field is an upper-bound choice, not the provable
/// minimum.
pub fn concat_general(
    cb: &VPCodebook,
    inst: &ProblemInstance,
    p: usize,
    field_override: Option<u32>,
) -> Result<ConcatOutcome> {
    concat_with_mds(cb, inst, MdsSpec::new(inst.m(), p, field_override)?)
}

/// Digit-wise power of a codebook whose decoded index is fixed per
/// receiver: each base-k digit layer goes through the input code, and the
/// shared index makes the composite decode all digits of one message.
pub fn pliable_power(cb: &VPCodebook, inst: &ProblemInstance, ell: u32) -> Result<VPCodebook> {
    if ell == 0 {
        return Err(Error::Input("power exponent must be at least 1".into()));
    }
    let (_, in_uni) = verified_input(cb, inst)?;
    let mut choice = Vec::with_capacity(cb.decoders.len());
    for table in &cb.decoders {
        let first = table.entries.first().ok_or_else(|| {
            Error::Structure(format!(
                "receiver {:?} has no decoder entries",
                table.receiver.members_one_based()
            ))
        })?;
        if table.entries.iter().any(|e| e.index != first.index) {
            return Err(Error::Input(format!(
                "decoded index varies within receiver {:?}; the input is not pliable",
                table.receiver.members_one_based()
            )));
        }
        choice.push(first.index);
    }

    let new_k = cb
        .k
        .checked_pow(ell)
        .ok_or_else(|| Error::Capacity("powered alphabet exceeds u32".into()))?;
    let new_uni = Universe::new(inst.m(), Alphabet::new(new_k)?)?;
    let n = new_uni.size();
    if n > CODEBOOK_SIZE_GUARD {
        return Err(Error::Capacity(format!(
            "powered alphabet yields {n} realisations, above {CODEBOOK_SIZE_GUARD}"
        )));
    }
    let t_out = cb
        .t
        .checked_pow(ell)
        .ok_or_else(|| Error::Capacity("codeword count exceeds u64".into()))?;

    let m = inst.m();
    let k = cb.k as u64;
    let mut z = vec![0u32; m];
    let mut layer = vec![0u32; m];
    let mut assignment = Vec::with_capacity(n as usize);
    for v in 0..n as u32 {
        new_uni.write_realisation(v, &mut z);
        let mut id = 0u64;
        // digit j of every message, most significant first
        for j in 0..ell {
            let shift = k.pow(ell - 1 - j);
            for i in 0..m {
                layer[i] = ((z[i] as u64 / shift) % k) as u32;
            }
            id = id * cb.t + cb.assignment[in_uni.index_of(&layer)? as usize];
        }
        assignment.push(id);
    }

    let rule = FiberRule::pliable(inst, &choice)?;
    assemble_codebook(assignment, t_out, inst, &new_uni, &rule)
}
