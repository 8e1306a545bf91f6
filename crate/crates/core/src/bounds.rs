//! Counting-argument lower bounds on the codeword count, each stated as a
//! cap on fiber sizes together with the rational bound on t it implies.
//! Arithmetic stays in u128 with explicit overflow errors, so the bounds
//! remain available for instances far beyond exact solving.

use crate::error::{Error, Result};
use crate::hypergraph::CodingHypergraph;
use crate::model::{Alphabet, ProblemInstance, ReceiverSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound_name: &'static str,
    /// Whether the instance matches the bound's hypothesis. When false the
    /// remaining fields carry the vacuous bound (cap k^m, t >= 1).
    pub applicable: bool,
    /// No valid fiber may exceed this size.
    pub fiber_cap: u128,
    /// Lower bound on t as an exact rational.
    pub t_lower_num: u128,
    pub t_lower_den: u128,
    /// ceil(t_lower), the integer form of the bound.
    pub t_lower_ceil: u128,
}

fn pow_checked(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Capacity("bound arithmetic overflows u128".into()))
}

fn report(
    name: &'static str,
    applicable: bool,
    fiber_cap: u128,
    num: u128,
    den: u128,
) -> BoundReport {
    BoundReport {
        bound_name: name,
        applicable,
        fiber_cap,
        t_lower_num: num,
        t_lower_den: den,
        t_lower_ceil: num.div_ceil(den),
    }
}

fn vacuous(name: &'static str, inst: &ProblemInstance, alphabet: Alphabet) -> Result<BoundReport> {
    let cap = pow_checked(alphabet.k() as u128, inst.m() as u32)?;
    Ok(report(name, false, cap, 1, 1))
}

/// Every slice of a receiver pins one coordinate, so a fiber has at most
/// k^{m-1} members and t >= k. Applies to every instance.
pub fn generic_bound(inst: &ProblemInstance, alphabet: Alphabet) -> Result<BoundReport> {
    let k = alphabet.k() as u128;
    let cap = pow_checked(k, inst.m() as u32 - 1)?;
    Ok(report("generic", true, cap, k, 1))
}

/// For the all-singletons family with m >= 3: fibers hold at most
/// (m+1) k^{m-2} realisations, giving t >= k^2/(m+1).
pub fn singleton_bound(inst: &ProblemInstance, alphabet: Alphabet) -> Result<BoundReport> {
    let m = inst.m();
    let singles: Vec<ReceiverSet> = (0..m).map(|i| ReceiverSet::from_members(&[i])).collect();
    let applicable = m >= 3
        && inst.receiver_count() == m
        && inst.receivers().iter().zip(&singles).all(|(a, b)| a == b);
    if !applicable {
        return vacuous("singleton", inst, alphabet);
    }
    let k = alphabet.k() as u128;
    let cap = (m as u128 + 1)
        .checked_mul(pow_checked(k, m as u32 - 2)?)
        .ok_or_else(|| Error::Capacity("bound arithmetic overflows u128".into()))?;
    Ok(report("singleton", true, cap, k * k, m as u128 + 1))
}

/// Chain pattern for m = 3: some index j with {j} and both {j,i} present.
/// Receivers then pin every coordinate once two members share x_j, so a
/// fiber has at most k members and t >= k^{m-1}.
pub fn chained_decoding_bound(
    inst: &ProblemInstance,
    alphabet: Alphabet,
) -> Result<BoundReport> {
    let m = inst.m();
    let has = |members: &[usize]| {
        let set = ReceiverSet::from_members(members);
        inst.receivers().contains(&set)
    };
    let applicable = m == 3
        && (0..m).any(|j| {
            has(&[j]) && (0..m).filter(|&i| i != j).all(|i| has(&[j, i]))
        });
    if !applicable {
        return vacuous("chained-decoding", inst, alphabet);
    }
    let k = alphabet.k() as u128;
    Ok(report(
        "chained-decoding",
        true,
        k,
        pow_checked(k, m as u32 - 1)?,
        1,
    ))
}

pub fn all_bounds(inst: &ProblemInstance, alphabet: Alphabet) -> Result<Vec<BoundReport>> {
    Ok(vec![
        generic_bound(inst, alphabet)?,
        singleton_bound(inst, alphabet)?,
        chained_decoding_bound(inst, alphabet)?,
    ])
}

/// Finite-alphabet verification of a counting argument: no enumerated
/// maximal edge may exceed the cap.
pub fn check_fibers_against_bound(hg: &CodingHypergraph, report: &BoundReport) -> bool {
    hg.edges.iter().all(|e| e.len() as u128 <= report.fiber_cap)
}
