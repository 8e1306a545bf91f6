//! The decodability oracle: can a set of realisations share one codeword?
//! A fiber is valid when every receiver, for every side-information value
//! occurring in it, finds some message outside its side information that is
//! constant on the matching slice. The same machinery serves the pliable
//! restriction by shrinking each receiver's allowed witness indices to a
//! single fixed choice.

use crate::codebook::VPCodebook;
use crate::error::{Error, Result};
use crate::model::{Alphabet, ProblemInstance, ReceiverSet, Universe};
use serde::Serialize;
use std::collections::HashMap;

/// Per-receiver bitmask of message indices allowed as decoding witnesses.
/// Receivers follow the instance's canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberRule {
    allowed: Vec<u64>,
}

impl FiberRule {
    /// Any new message may serve as witness: allowed = complement of H.
    pub fn vp(inst: &ProblemInstance) -> FiberRule {
        FiberRule {
            allowed: inst
                .receivers()
                .iter()
                .map(|r| r.complement_mask(inst.m()))
                .collect(),
        }
    }

    /// Pliable restriction: witness index fixed per receiver. `choice[r]`
    /// is the 0-based decoded index for the r-th canonical receiver.
    pub fn pliable(inst: &ProblemInstance, choice: &[usize]) -> Result<FiberRule> {
        if choice.len() != inst.receiver_count() {
            return Err(Error::Input(format!(
                "choice assignment covers {} receivers, instance has {}",
                choice.len(),
                inst.receiver_count()
            )));
        }
        let mut allowed = Vec::with_capacity(choice.len());
        for (r, &i) in inst.receivers().iter().zip(choice) {
            if i >= inst.m() || r.contains(i) {
                return Err(Error::Input(format!(
                    "receiver {:?} cannot decode index {}",
                    r.members_one_based(),
                    i + 1
                )));
            }
            allowed.push(1u64 << i);
        }
        Ok(FiberRule { allowed })
    }

    #[inline]
    pub fn allowed(&self, receiver_pos: usize) -> u64 {
        self.allowed[receiver_pos]
    }
}

#[derive(Debug, Clone, Copy)]
struct SliceState {
    /// First member seen; all constancy is measured against it.
    rep: u32,
    /// Allowed witness indices still constant across the slice.
    alive: u64,
}

/// Incremental oracle over a growing fiber: per receiver, per occurring
/// side-information value, the surviving witness mask. Adding a member
/// only shrinks masks, which is what makes validity downward-closed.
#[derive(Debug, Clone)]
pub struct SliceTracker<'a> {
    uni: &'a Universe,
    receivers: &'a [ReceiverSet],
    rule: &'a FiberRule,
    slices: Vec<HashMap<u64, SliceState>>,
}

impl<'a> SliceTracker<'a> {
    pub fn new(uni: &'a Universe, inst: &'a ProblemInstance, rule: &'a FiberRule) -> Self {
        SliceTracker {
            uni,
            receivers: inst.receivers(),
            rule,
            slices: vec![HashMap::new(); inst.receiver_count()],
        }
    }

    /// Would the fiber stay valid with `v` added?
    pub fn can_add(&self, v: u32) -> bool {
        self.receivers.iter().enumerate().all(|(r, h)| {
            match self.slices[r].get(&self.uni.project(v, *h)) {
                Some(s) => s.alive & self.uni.agreement_mask(s.rep, v) != 0,
                None => true,
            }
        })
    }

    pub fn add(&mut self, v: u32) {
        for (r, h) in self.receivers.iter().enumerate() {
            let p = self.uni.project(v, *h);
            let state = self.slices[r].entry(p).or_insert(SliceState {
                rep: v,
                alive: self.rule.allowed(r),
            });
            state.alive &= self.uni.agreement_mask(state.rep, v);
            debug_assert_ne!(state.alive, 0, "add() on a vertex that breaks the fiber");
        }
    }
}

/// One decoding witness per (receiver, side-information value) slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceWitness {
    pub receiver: ReceiverSet,
    /// Values of the receiver's side-information messages, increasing index order.
    pub side_info: Vec<u32>,
    /// 0-based decoded message index, outside the receiver's set.
    pub index: usize,
    pub value: u32,
}

/// Violation report in the fixed diagnostic JSON shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// 1-based side-information set of the violated receiver.
    pub receiver: Vec<usize>,
    pub side_info: Vec<u32>,
    pub reason: String,
}

pub(crate) fn unpack_side_info(packed: u64, len: usize, k: u32) -> Vec<u32> {
    let mut out = vec![0u32; len];
    let mut rest = packed;
    for slot in out.iter_mut().rev() {
        *slot = (rest % k as u64) as u32;
        rest /= k as u64;
    }
    debug_assert_eq!(rest, 0);
    out
}

/// Per-receiver slice decomposition of a fiber: (packed side-info value,
/// representative, surviving witness mask), slices in ascending value order.
fn fiber_slices(
    members: &[u32],
    inst: &ProblemInstance,
    uni: &Universe,
    rule: &FiberRule,
) -> Vec<Vec<(u64, SliceState)>> {
    inst.receivers()
        .iter()
        .enumerate()
        .map(|(r, h)| {
            let mut map: HashMap<u64, SliceState> = HashMap::new();
            for &v in members {
                let state = map.entry(uni.project(v, *h)).or_insert(SliceState {
                    rep: v,
                    alive: rule.allowed(r),
                });
                state.alive &= uni.agreement_mask(state.rep, v);
            }
            let mut slices: Vec<(u64, SliceState)> = map.into_iter().collect();
            slices.sort_unstable_by_key(|(p, _)| *p);
            slices
        })
        .collect()
}

pub fn is_valid_fiber_under(
    rule: &FiberRule,
    members: &[u32],
    inst: &ProblemInstance,
    uni: &Universe,
) -> bool {
    let mut tracker = SliceTracker::new(uni, inst, rule);
    members.iter().all(|&v| {
        if tracker.can_add(v) {
            tracker.add(v);
            true
        } else {
            false
        }
    })
}

pub fn is_valid_fiber(members: &[u32], inst: &ProblemInstance, uni: &Universe) -> bool {
    is_valid_fiber_under(&FiberRule::vp(inst), members, inst, uni)
}

/// Canonical witnesses for every slice, or the first violated slice as an
/// error. Witness choice: smallest surviving index, then its forced value.
pub fn slice_witnesses_under(
    rule: &FiberRule,
    members: &[u32],
    inst: &ProblemInstance,
    uni: &Universe,
) -> Result<Vec<SliceWitness>> {
    let mut out = Vec::new();
    for (h, slices) in inst.receivers().iter().zip(fiber_slices(members, inst, uni, rule)) {
        for (packed, state) in slices {
            let side_info = unpack_side_info(packed, h.len(), uni.k());
            if state.alive == 0 {
                return Err(Error::InvalidFiber {
                    receiver: h.members_one_based(),
                    side_info,
                });
            }
            let index = state.alive.trailing_zeros() as usize;
            let value = uni.realisation(state.rep)[index];
            out.push(SliceWitness {
                receiver: *h,
                side_info,
                index,
                value,
            });
        }
    }
    Ok(out)
}

pub fn slice_witnesses(
    members: &[u32],
    inst: &ProblemInstance,
    uni: &Universe,
) -> Result<Vec<SliceWitness>> {
    slice_witnesses_under(&FiberRule::vp(inst), members, inst, uni)
}

/// True iff `members` is valid and no outside realisation can join it.
pub fn is_maximal_fiber(members: &[u32], inst: &ProblemInstance, uni: &Universe) -> Result<bool> {
    let rule = FiberRule::vp(inst);
    let mut tracker = SliceTracker::new(uni, inst, &rule);
    for &v in members {
        if !tracker.can_add(v) {
            return Err(Error::Input("is_maximal_fiber requires a valid fiber".into()));
        }
        tracker.add(v);
    }
    let inside: std::collections::HashSet<u32> = members.iter().copied().collect();
    for v in 0..uni.size() as u32 {
        if !inside.contains(&v) && tracker.can_add(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub t: u64,
    /// Codeword owning the first violated slice, when not ok.
    pub codeword: Option<u64>,
    pub diagnostic: Option<Diagnostic>,
}

fn structural(msg: String) -> Error {
    Error::Structure(msg)
}

/// Full codebook check: every fiber valid, and every decoder table carrying
/// exactly one correct entry per nonempty slice. Structural defects are
/// errors; semantic failures come back as `ok=false` with the first
/// violated slice.
pub fn verify_codebook(
    cb: &VPCodebook,
    inst: &ProblemInstance,
    alphabet: Alphabet,
) -> Result<VerifyReport> {
    if cb.m != inst.m() || cb.k != alphabet.k() {
        return Err(structural(format!(
            "codebook is for m={} k={}, instance has m={} k={}",
            cb.m,
            cb.k,
            inst.m(),
            alphabet.k()
        )));
    }
    let uni = Universe::new(cb.m, alphabet)?;
    if cb.assignment.len() as u64 != uni.size() {
        return Err(structural(format!(
            "assignment covers {} realisations, expected {}",
            cb.assignment.len(),
            uni.size()
        )));
    }
    if cb.t == 0 || cb.assignment.iter().any(|&c| c >= cb.t) {
        return Err(structural("assignment references a codeword id out of range".into()));
    }
    if cb.decoders.len() != inst.receiver_count()
        || cb
            .decoders
            .iter()
            .zip(inst.receivers())
            .any(|(table, h)| table.receiver != *h)
    {
        return Err(structural(
            "decoder tables must list the instance's receivers in canonical order".into(),
        ));
    }

    let fibers = cb.fibers();
    if let Some(empty) = fibers.iter().position(|f| f.is_empty()) {
        return Err(structural(format!("codeword {empty} has an empty fiber")));
    }

    let rule = FiberRule::vp(inst);
    // Decoder entries are sorted per table; entries for codeword c form a
    // contiguous run, consumed by a moving cursor.
    let mut cursors = vec![0usize; cb.decoders.len()];
    for (c, members) in fibers.iter().enumerate() {
        let slices = fiber_slices(members, inst, &uni, &rule);
        for (h, slices) in inst.receivers().iter().zip(&slices) {
            for (packed, state) in slices {
                if state.alive == 0 {
                    return Ok(VerifyReport {
                        ok: false,
                        t: cb.t,
                        codeword: Some(c as u64),
                        diagnostic: Some(Diagnostic {
                            receiver: h.members_one_based(),
                            side_info: unpack_side_info(*packed, h.len(), uni.k()),
                            reason: "no constant coordinate".into(),
                        }),
                    });
                }
            }
        }
        for ((r, h), slices) in inst.receivers().iter().enumerate().zip(&slices) {
            let entries = &cb.decoders[r].entries;
            for (packed, state) in slices {
                let side_info = unpack_side_info(*packed, h.len(), uni.k());
                let fail = |reason: &str| {
                    Ok(VerifyReport {
                        ok: false,
                        t: cb.t,
                        codeword: Some(c as u64),
                        diagnostic: Some(Diagnostic {
                            receiver: h.members_one_based(),
                            side_info: side_info.clone(),
                            reason: reason.into(),
                        }),
                    })
                };
                let cur = cursors[r];
                if cur >= entries.len()
                    || entries[cur].codeword != c as u64
                    || entries[cur].side_info != side_info
                {
                    return fail("missing decoder entry");
                }
                let entry = &entries[cur];
                cursors[r] += 1;
                if entry.index >= cb.m {
                    return Err(structural(format!(
                        "decoder entry index {} out of range",
                        entry.index + 1
                    )));
                }
                // Valid entry: index outside H, constant on the slice, with
                // the slice's value. Constancy at an index outside H is
                // exactly an alive bit under the unconstrained rule.
                if !(state.alive >> entry.index & 1 == 1
                    && uni.realisation(state.rep)[entry.index] == entry.value)
                {
                    return fail("decoder entry mismatch");
                }
            }
        }
    }
    // Leftover entries reference slices that do not occur.
    for (r, h) in inst.receivers().iter().enumerate() {
        if cursors[r] != cb.decoders[r].entries.len() {
            let entry = &cb.decoders[r].entries[cursors[r]];
            return Ok(VerifyReport {
                ok: false,
                t: cb.t,
                codeword: Some(entry.codeword),
                diagnostic: Some(Diagnostic {
                    receiver: h.members_one_based(),
                    side_info: entry.side_info.clone(),
                    reason: "decoder entry for empty slice".into(),
                }),
            });
        }
    }

    Ok(VerifyReport {
        ok: true,
        t: cb.t,
        codeword: None,
        diagnostic: None,
    })
}
