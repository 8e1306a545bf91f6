//! Pliable baseline: each receiver decodes one fixed message index chosen
//! up front, instead of whichever index happens to be recoverable. The
//! optimum is the best exact cover over all choice assignments, which this
//! module enumerates in lexicographic order so the reported witness does
//! not depend on scheduling.

use crate::cover::{solve_under, CoverBudget, SolveOutcome};
use crate::decodability::FiberRule;
use crate::error::{Error, Result};
use crate::model::{Alphabet, ProblemInstance};

/// Ceiling on enumerated choice assignments before demanding an explicit
/// one.
pub const CHOICE_CAP: u64 = 10_000;

/// Fixed decoded index per canonical receiver, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceAssignment {
    choice: Vec<usize>,
}

impl ChoiceAssignment {
    pub fn new(choice: Vec<usize>, inst: &ProblemInstance) -> Result<Self> {
        FiberRule::pliable(inst, &choice)?;
        Ok(ChoiceAssignment { choice })
    }

    /// Comma-separated `pos:index` pairs, both 1-based; `pos` addresses the
    /// canonical receiver order. "1:2,2:1,3:1" assigns index 2 to the first
    /// receiver and index 1 to the other two.
    pub fn parse(text: &str, inst: &ProblemInstance) -> Result<Self> {
        let mut choice = vec![None; inst.receiver_count()];
        for pair in text.split(',') {
            let Some((pos_text, index_text)) = pair.split_once(':') else {
                return Err(Error::Input(format!(
                    "choice entry '{pair}' is not of the form pos:index"
                )));
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Input(format!("choice entry '{pair}' is not numeric")))
            };
            let (pos, index) = (parse(pos_text)?, parse(index_text)?);
            if pos == 0 || pos > choice.len() {
                return Err(Error::Input(format!(
                    "choice position {pos} outside [1:{}]",
                    choice.len()
                )));
            }
            if choice[pos - 1].replace(index).is_some() {
                return Err(Error::Input(format!("choice position {pos} given twice")));
            }
        }
        let Some(choice) = choice.into_iter().collect::<Option<Vec<_>>>() else {
            return Err(Error::Input(format!(
                "choice must cover all {} receivers",
                inst.receiver_count()
            )));
        };
        if choice.iter().any(|&i| i == 0) {
            return Err(Error::Input("choice indices are 1-based".into()));
        }
        ChoiceAssignment::new(choice.iter().map(|&i| i - 1).collect(), inst)
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.choice
    }

    pub fn render(&self) -> String {
        self.choice
            .iter()
            .enumerate()
            .map(|(pos, &i)| format!("{}:{}", pos + 1, i + 1))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Exact cover under one fixed choice assignment.
pub fn pliable_solve_with_choice(
    inst: &ProblemInstance,
    alphabet: Alphabet,
    choice: &ChoiceAssignment,
    budget: &CoverBudget,
    edge_cap: usize,
) -> Result<SolveOutcome> {
    let rule = FiberRule::pliable(inst, choice.indices())?;
    solve_under(&rule, inst, alphabet, budget, edge_cap)
}

#[derive(Debug, Clone)]
pub struct PliableOutcome {
    pub outcome: SolveOutcome,
    /// Winning assignment; earliest in lexicographic order among the best.
    pub choice: ChoiceAssignment,
    /// True when the reported length is proved minimal over every choice
    /// assignment, not just the best incumbent seen under the budget.
    pub optimal: bool,
    pub assignments: u64,
}

/// Minimum pliable codeword count: enumerates choice assignments in
/// lexicographic order (allowed indices ascending per receiver, last
/// receiver fastest) and keeps the first best exact cover. Stops early once
/// some assignment reaches `k`, the universal lower bound.
pub fn pliable_min_t(
    inst: &ProblemInstance,
    alphabet: Alphabet,
    budget: &CoverBudget,
    edge_cap: usize,
) -> Result<PliableOutcome> {
    let allowed: Vec<Vec<usize>> = inst
        .receivers()
        .iter()
        .map(|r| r.complement(inst.m()))
        .collect();
    let total = allowed
        .iter()
        .try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64))
        .filter(|&total| total <= CHOICE_CAP)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "choice assignments exceed {CHOICE_CAP}; solve a single assignment by passing one explicitly"
            ))
        })?;

    let mut cursor: Vec<usize> = vec![0; allowed.len()];
    let mut best: Option<PliableOutcome> = None;
    let mut all_certified = true;
    let mut tried = 0u64;
    loop {
        let choice: Vec<usize> = cursor.iter().zip(&allowed).map(|(&c, a)| a[c]).collect();
        let rule = FiberRule::pliable(inst, &choice)?;
        let outcome = solve_under(&rule, inst, alphabet, budget, edge_cap)?;
        tried += 1;
        all_certified &= outcome.optimal;
        let improves = best.as_ref().is_none_or(|b| outcome.t < b.outcome.t);
        if improves {
            let floor_hit = outcome.t == alphabet.k() as u64;
            best = Some(PliableOutcome {
                outcome,
                choice: ChoiceAssignment { choice },
                optimal: floor_hit,
                assignments: total,
            });
            if floor_hit {
                break;
            }
        }

        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                // full enumeration: the best is the optimum iff every
                // sub-solve was certified
                let out = best.as_mut().unwrap();
                out.optimal |= all_certified;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < allowed[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        // the odometer wraps to all zeros after a full pass
        if cursor.iter().all(|&c| c == 0) {
            break;
        }
    }
    let mut out = best.unwrap();
    out.assignments = tried;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::solve;
    use crate::decodability::verify_codebook;
    use crate::hypergraph::DEFAULT_EDGE_CAP;
    use crate::model::parse_instance;

    fn min_t(text: &str) -> (crate::model::ProblemInstance, Alphabet, PliableOutcome) {
        let (inst, alphabet) = parse_instance(text).unwrap();
        let out =
            pliable_min_t(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP).unwrap();
        (inst, alphabet, out)
    }

    #[test]
    fn singletons_match_vp_at_binary_alphabet() {
        let (inst, alphabet, out) = min_t(r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#);
        assert_eq!(out.outcome.t, 4);
        assert!(out.optimal);
        assert_eq!(out.assignments, 8);
        // first assignment in lexicographic order already reaches 4
        assert_eq!(out.choice.indices(), &[1, 0, 0]);
        assert_eq!(out.choice.render(), "1:2,2:1,3:1");
        let report = verify_codebook(&out.outcome.codebook, &inst, alphabet).unwrap();
        assert!(report.ok);
    }

    #[test]
    fn singletons_fall_behind_vp_at_ternary_alphabet() {
        let (_, _, out) = min_t(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#);
        assert_eq!(out.outcome.t, 9);
        assert!(out.optimal);
        assert_eq!(out.outcome.rate.value(), 2.0);

        let (inst, alphabet) =
            parse_instance(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#).unwrap();
        let vp = solve(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP).unwrap();
        assert!(vp.t < out.outcome.t);
    }

    #[test]
    fn chained_instance_matches_vp() {
        let (_, _, out) = min_t(r#"{"m":3,"k":2,"receivers":[[],[1],[1,2],[1,3]]}"#);
        assert_eq!(out.outcome.t, 4);
        assert!(out.optimal);
        assert_eq!(out.assignments, 6);
    }

    #[test]
    fn decoded_index_is_fixed_per_receiver() {
        let (_, _, out) = min_t(r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#);
        for (table, &chosen) in out
            .outcome
            .codebook
            .decoders
            .iter()
            .zip(out.choice.indices())
        {
            assert!(!table.entries.is_empty());
            assert!(table.entries.iter().all(|e| e.index == chosen));
        }
    }

    #[test]
    fn single_receiver_hits_the_alphabet_floor() {
        let (_, _, out) = min_t(r#"{"m":2,"k":2,"receivers":[[1]]}"#);
        assert_eq!(out.outcome.t, 2);
        assert!(out.optimal);
        assert_eq!(out.assignments, 1);
        assert_eq!(out.choice.indices(), &[1]);
    }

    #[test]
    fn explicit_choice_solves_one_assignment() {
        let (inst, alphabet) =
            parse_instance(r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#).unwrap();
        let choice = ChoiceAssignment::parse("1:2,2:1,3:1", &inst).unwrap();
        let out = pliable_solve_with_choice(
            &inst,
            alphabet,
            &choice,
            &CoverBudget::default(),
            DEFAULT_EDGE_CAP,
        )
        .unwrap();
        assert_eq!(out.t, 4);
        assert!(out.optimal);
        assert!(verify_codebook(&out.codebook, &inst, alphabet).unwrap().ok);
    }

    #[test]
    fn choice_parsing_rejects_bad_input() {
        let (inst, _) = parse_instance(r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#).unwrap();
        assert!(ChoiceAssignment::parse("1:2,2:1,3:1", &inst).is_ok());
        // out-of-order positions are fine
        assert!(ChoiceAssignment::parse("3:1,1:2,2:3", &inst).is_ok());
        // receiver 1 must not decode its own side information
        assert!(ChoiceAssignment::parse("1:1,2:1,3:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("1:2,2:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("1:2,1:3,2:1,3:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("0:2,2:1,3:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("1:4,2:1,3:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("1:0,2:1,3:1", &inst).is_err());
        assert!(ChoiceAssignment::parse("1-2,2:1,3:1", &inst).is_err());
    }

    #[test]
    fn assignment_blowup_is_reported() {
        let receivers: Vec<Vec<u32>> = (0..=3)
            .map(|j| if j == 0 { vec![] } else { vec![j] })
            .collect();
        let doc = serde_json::json!({"m": 15, "k": 2, "receivers": receivers});
        let (inst, alphabet) = parse_instance(&doc.to_string()).unwrap();
        let err = pliable_min_t(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP)
            .unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }
}
