//! Codebook representation and its JSON wire format. A codebook is a total
//! assignment of realisations to codeword ids plus, per receiver, a decoder
//! table keyed by (codeword, side-information value).

use crate::decodability::{slice_witnesses_under, FiberRule};
use crate::error::{Error, Result};
use crate::model::{Alphabet, ProblemInstance, ReceiverSet, Universe};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Codebooks are materialised densely; JSON files beyond this realisation
/// count are rejected rather than allocated.
pub const CODEBOOK_SIZE_GUARD: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPCodebook {
    pub m: usize,
    pub k: u32,
    /// Codeword count; every id in `[0:t-1]` has a nonempty fiber.
    pub t: u64,
    /// Canonical realisation index -> codeword id, total over `k^m`.
    pub assignment: Vec<u64>,
    /// One table per receiver, in canonical receiver order.
    pub decoders: Vec<DecoderTable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderTable {
    pub receiver: ReceiverSet,
    /// Sorted by (codeword, side_info); exactly one entry per nonempty
    /// slice of that codeword's fiber.
    pub entries: Vec<DecoderEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderEntry {
    pub codeword: u64,
    /// Values of the receiver's side-information messages, in increasing
    /// index order.
    pub side_info: Vec<u32>,
    /// 0-based decoded message index, outside the receiver's set.
    pub index: usize,
    pub value: u32,
}

impl VPCodebook {
    pub fn universe(&self) -> Result<Universe> {
        Universe::new(self.m, Alphabet::new(self.k)?)
    }

    /// Fibers grouped by codeword id; members in canonical index order.
    pub fn fibers(&self) -> Vec<Vec<u32>> {
        let mut fibers = vec![Vec::new(); self.t as usize];
        for (idx, &c) in self.assignment.iter().enumerate() {
            fibers[c as usize].push(idx as u32);
        }
        fibers
    }
}

/// Builds the codebook for a total assignment (codeword ids `0..t-1`, every
/// id used), deriving each decoder table from the canonical slice witnesses
/// of the fibers under `rule`.
pub fn assemble_codebook(
    assignment: Vec<u64>,
    t: u64,
    inst: &ProblemInstance,
    uni: &Universe,
    rule: &FiberRule,
) -> Result<VPCodebook> {
    debug_assert_eq!(assignment.len() as u64, uni.size());
    let cb_skeleton = VPCodebook {
        m: uni.m(),
        k: uni.k(),
        t,
        assignment,
        decoders: Vec::new(),
    };
    let receiver_pos: HashMap<ReceiverSet, usize> = inst
        .receivers()
        .iter()
        .enumerate()
        .map(|(i, r)| (*r, i))
        .collect();
    let mut decoders: Vec<DecoderTable> = inst
        .receivers()
        .iter()
        .map(|r| DecoderTable {
            receiver: *r,
            entries: Vec::new(),
        })
        .collect();
    for (c, fiber) in cb_skeleton.fibers().iter().enumerate() {
        if fiber.is_empty() {
            return Err(Error::Structure(format!("codeword {c} has an empty fiber")));
        }
        for w in slice_witnesses_under(rule, fiber, inst, uni)? {
            decoders[receiver_pos[&w.receiver]].entries.push(DecoderEntry {
                codeword: c as u64,
                side_info: w.side_info,
                index: w.index,
                value: w.value,
            });
        }
    }
    Ok(VPCodebook {
        decoders,
        ..cb_skeleton
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodebookDoc {
    pub m: usize,
    pub k: u32,
    pub t: u64,
    pub codewords: Vec<CodewordDoc>,
    pub decoders: Vec<DecoderTableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodewordDoc {
    pub id: u64,
    pub realisations: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecoderTableDoc {
    pub receiver: Vec<usize>,
    pub entries: Vec<DecoderEntryDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecoderEntryDoc {
    pub codeword: u64,
    pub side_info: Vec<u32>,
    /// 1-based message index.
    pub index: usize,
    pub value: u32,
}

pub fn codebook_to_doc(cb: &VPCodebook) -> Result<CodebookDoc> {
    let uni = cb.universe()?;
    let codewords = cb
        .fibers()
        .into_iter()
        .enumerate()
        .map(|(id, members)| CodewordDoc {
            id: id as u64,
            realisations: members.iter().map(|&v| uni.realisation(v)).collect(),
        })
        .collect();
    let decoders = cb
        .decoders
        .iter()
        .map(|table| DecoderTableDoc {
            receiver: table.receiver.members_one_based(),
            entries: table
                .entries
                .iter()
                .map(|e| DecoderEntryDoc {
                    codeword: e.codeword,
                    side_info: e.side_info.clone(),
                    index: e.index + 1,
                    value: e.value,
                })
                .collect(),
        })
        .collect();
    Ok(CodebookDoc {
        m: cb.m,
        k: cb.k,
        t: cb.t,
        codewords,
        decoders,
    })
}

pub fn codebook_to_json(cb: &VPCodebook) -> Result<String> {
    let doc = codebook_to_doc(cb)?;
    let mut text = serde_json::to_string(&doc)
        .map_err(|e| Error::Structure(format!("codebook serialisation: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Rebuilds a codebook from its document form, enforcing every structural
/// requirement: totality of the assignment, nonempty fibers numbered
/// `0..t-1` in order, sorted realisation lists, in-range values, and
/// well-formed decoder tables matching the instance's receivers.
pub fn codebook_from_doc(doc: &CodebookDoc, inst: &ProblemInstance, alphabet: Alphabet) -> Result<VPCodebook> {
    if doc.m != inst.m() || doc.k != alphabet.k() {
        return Err(Error::Structure(format!(
            "codebook is for m={} k={}, instance has m={} k={}",
            doc.m,
            doc.k,
            inst.m(),
            alphabet.k()
        )));
    }
    let size = inst
        .realisation_count(alphabet)
        .filter(|&n| n <= CODEBOOK_SIZE_GUARD)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "k^m exceeds {CODEBOOK_SIZE_GUARD} realisations; cannot materialise codebook"
            ))
        })?;
    let uni = Universe::new(doc.m, alphabet)?;
    if doc.t == 0 || doc.t > size {
        return Err(Error::Structure(format!(
            "codeword count t={} out of range [1:{size}]",
            doc.t
        )));
    }
    if doc.codewords.len() as u64 != doc.t {
        return Err(Error::Structure(format!(
            "expected {} codeword blocks, found {}",
            doc.t,
            doc.codewords.len()
        )));
    }

    let mut assignment = vec![u64::MAX; size as usize];
    for (pos, cw) in doc.codewords.iter().enumerate() {
        if cw.id != pos as u64 {
            return Err(Error::Structure(format!(
                "codeword ids must run 0..t-1 in order; found id {} at position {pos}",
                cw.id
            )));
        }
        if cw.realisations.is_empty() {
            return Err(Error::Structure(format!("codeword {} has an empty fiber", cw.id)));
        }
        let mut last: Option<u32> = None;
        for r in &cw.realisations {
            let idx = uni.index_of(r).map_err(|e| Error::Structure(e.to_string()))?;
            if let Some(prev) = last {
                if idx <= prev {
                    return Err(Error::Structure(format!(
                        "codeword {}: realisations not in strictly increasing canonical order",
                        cw.id
                    )));
                }
            }
            last = Some(idx);
            if assignment[idx as usize] != u64::MAX {
                return Err(Error::Structure(format!(
                    "realisation {r:?} assigned to more than one codeword"
                )));
            }
            assignment[idx as usize] = cw.id;
        }
    }
    if let Some(missing) = assignment.iter().position(|&c| c == u64::MAX) {
        return Err(Error::Structure(format!(
            "assignment is not total: realisation {:?} has no codeword",
            uni.realisation(missing as u32)
        )));
    }

    if doc.decoders.len() != inst.receiver_count() {
        return Err(Error::Structure(format!(
            "expected {} decoder tables, found {}",
            inst.receiver_count(),
            doc.decoders.len()
        )));
    }
    let mut decoders = Vec::with_capacity(doc.decoders.len());
    for (table, expect) in doc.decoders.iter().zip(inst.receivers()) {
        if table.receiver != expect.members_one_based() {
            return Err(Error::Structure(format!(
                "decoder tables must follow canonical receiver order; expected {:?}, found {:?}",
                expect.members_one_based(),
                table.receiver
            )));
        }
        let mut entries = Vec::with_capacity(table.entries.len());
        let mut last_key: Option<(u64, Vec<u32>)> = None;
        for e in &table.entries {
            if e.codeword >= doc.t {
                return Err(Error::Structure(format!(
                    "decoder entry references codeword {} out of range",
                    e.codeword
                )));
            }
            if e.side_info.len() != expect.len() {
                return Err(Error::Structure(format!(
                    "decoder entry side_info {:?} has wrong length for receiver {:?}",
                    e.side_info,
                    table.receiver
                )));
            }
            if e.side_info.iter().any(|&v| v >= alphabet.k()) {
                return Err(Error::Structure(format!(
                    "decoder entry side_info {:?} has a value outside [0:{}]",
                    e.side_info,
                    alphabet.k() - 1
                )));
            }
            if e.index == 0 || e.index > doc.m {
                return Err(Error::Structure(format!(
                    "decoder entry index {} out of range [1:{}]",
                    e.index, doc.m
                )));
            }
            if e.value >= alphabet.k() {
                return Err(Error::Structure(format!(
                    "decoder entry value {} outside [0:{}]",
                    e.value,
                    alphabet.k() - 1
                )));
            }
            let key = (e.codeword, e.side_info.clone());
            if let Some(prev) = &last_key {
                if *prev >= key {
                    return Err(Error::Structure(format!(
                        "decoder entries for receiver {:?} not sorted by (codeword, side_info)",
                        table.receiver
                    )));
                }
            }
            last_key = Some(key);
            entries.push(DecoderEntry {
                codeword: e.codeword,
                side_info: e.side_info.clone(),
                index: e.index - 1,
                value: e.value,
            });
        }
        decoders.push(DecoderTable {
            receiver: *expect,
            entries,
        });
    }

    Ok(VPCodebook {
        m: doc.m,
        k: doc.k,
        t: doc.t,
        assignment,
        decoders,
    })
}

pub fn codebook_from_json(text: &str, inst: &ProblemInstance, alphabet: Alphabet) -> Result<VPCodebook> {
    let doc: CodebookDoc = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("codebook JSON: {e}")))?;
    codebook_from_doc(&doc, inst, alphabet)
}
