//! Shortlex automatic structures: candidate word acceptor and multipliers
//! built from word differences, elementary checks, axiom checking and the
//! driver that alternates these with completion.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::fsa::{boolean_op, BoolOp, Dfa, Nfa, StateId, DEFAULT_STATE_CAP, FAIL};
use crate::pairfsa::{
    compose_relations, decode_symbol, encode_pair, pair_alphabet_size, project_first, project_second, ComposeLimits,
    PairDfa,
};
use crate::rewrite::{KbLimits, KbOutcome, Presentation, RewriteSystem};
use crate::worddiff::{WordDifferenceMachine, DEFAULT_DIFF_CAP};
use crate::words::{Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomaticStructure {
    pub presentation: Presentation,
    pub word_acceptor: Dfa,
    /// `M_ε` first, then `M_y` for each symbol `y` in alphabet order.
    pub multipliers: Vec<PairDfa>,
    pub diff: WordDifferenceMachine,
    pub k: usize,
    pub verified: bool,
    pub transcript: Vec<String>,
}

impl AutomaticStructure {
    /// `M_y`, or `M_ε` for `None`.
    pub fn multiplier(&self, y: Option<Symbol>) -> &PairDfa {
        &self.multipliers[y.map_or(0, |y| y + 1)]
    }

    pub fn base(&self) -> usize {
        self.presentation.alphabet.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cmp {
    Eq,
    Lt,
    Gt,
    // second word already finished, hence shorter
    Ended,
}

/// Words with no factor `u` for which some `v <slex u` fellow-travels to
/// the trivial difference, minimised.
pub fn build_candidate_word_acceptor(d: &WordDifferenceMachine, state_cap: usize) -> Result<Dfa> {
    let base = d.base();
    let mut nfa = Nfa::new(base);
    let idle = nfa.add_state(false);
    let found = nfa.add_state(true);
    nfa.add_initial(idle);
    for a in 0..base {
        nfa.add_move(idle, a, idle);
        nfa.add_move(found, a, found);
    }
    let mut index: HashMap<(StateId, Cmp), StateId> = HashMap::new();
    let mut keys: Vec<(StateId, Cmp)> = Vec::new();
    let mut intern = |nfa: &mut Nfa, key: (StateId, Cmp), keys: &mut Vec<(StateId, Cmp)>| -> StateId {
        *index.entry(key).or_insert_with(|| {
            keys.push(key);
            let s = nfa.add_state(false);
            if key.0 == d.initial() && matches!(key.1, Cmp::Lt | Cmp::Ended) {
                nfa.add_epsilon(s, found);
            }
            s
        })
    };
    let moves = |from: Option<(StateId, Cmp)>| {
        let (ds, cmp) = from.unwrap_or((d.initial(), Cmp::Eq));
        let mut out = Vec::new();
        for a in 0..base {
            let seconds: Vec<Option<Symbol>> =
                if cmp == Cmp::Ended { vec![None] } else { (0..base).map(Some).chain([None]).collect() };
            for b in seconds {
                let t = d.target(ds, crate::pairfsa::pair_symbol(base, Some(a), b));
                if t == FAIL {
                    continue;
                }
                let next = match (cmp, b) {
                    (_, None) => Cmp::Ended,
                    (Cmp::Eq, Some(b)) if b < a => Cmp::Lt,
                    (Cmp::Eq, Some(b)) if b > a => Cmp::Gt,
                    (c, _) => c,
                };
                out.push((a, (t, next)));
            }
        }
        out
    };
    for (a, key) in moves(None) {
        let s = intern(&mut nfa, key, &mut keys);
        nfa.add_move(idle, a, s);
    }
    let mut i = 0;
    while i < keys.len() {
        let key = keys[i];
        // trackers are numbered after `idle` and `found`
        let from = (i + 2) as StateId;
        for (a, next) in moves(Some(key)) {
            let s = intern(&mut nfa, next, &mut keys);
            nfa.add_move(from, a, s);
        }
        i += 1;
    }
    let factors = nfa.determinize(state_cap)?;
    boolean_op(BoolOp::Not, &factors, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    Run(StateId),
    Ended,
}

/// `{(u, v) : u, v ∈ L(wa), the difference run ends at reduce(y)}`.
/// `target` is that state; `None` gives the empty multiplier.
pub fn build_multiplier(wa: &Dfa, d: &WordDifferenceMachine, target: Option<StateId>) -> PairDfa {
    let base = d.base();
    let Some(target) = target else { return PairDfa::empty(base) };
    let k = pair_alphabet_size(base);
    let side_step = |s: Side, x: Option<Symbol>| -> Option<Side> {
        match (s, x) {
            (Side::Run(q), Some(a)) => {
                let t = wa.target(q, a);
                (t != FAIL).then_some(Side::Run(t))
            }
            (Side::Run(q), None) => wa.is_accepting(q).then_some(Side::Ended),
            (Side::Ended, None) => Some(Side::Ended),
            (Side::Ended, Some(_)) => None,
        }
    };
    let side_ok = |s: Side| match s {
        Side::Run(q) => wa.is_accepting(q),
        Side::Ended => true,
    };
    type Key = (Side, Side, StateId);
    let start: Key = (Side::Run(wa.initial()), Side::Run(wa.initial()), d.initial());
    let mut index: HashMap<Key, StateId> = HashMap::from([(start, 0)]);
    let mut keys = vec![start];
    let mut table = Vec::new();
    let mut accepting = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (su, sv, ds) = keys[i];
        accepting.push(side_ok(su) && side_ok(sv) && ds == target);
        for sym in 0..k {
            let (a, b) = decode_symbol(base, sym);
            let next = side_step(su, a).zip(side_step(sv, b)).and_then(|(nu, nv)| {
                let t = d.target(ds, sym);
                (t != FAIL).then_some((nu, nv, t))
            });
            let id = match next {
                None => FAIL,
                Some(key) => *index.entry(key).or_insert_with(|| {
                    keys.push(key);
                    (keys.len() - 1) as StateId
                }),
            };
            table.push(id);
        }
        i += 1;
    }
    let dfa = Dfa::from_parts(k, 0, accepting, table).expect("multiplier table is well formed");
    PairDfa::new(base, dfa).expect("pair alphabet size matches").minimize()
}

/// Why an assembled candidate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    /// The acceptor rejects ε or is empty.
    Acceptor,
    /// `witness` lies in the acceptor but not in the named projection of `M_y`.
    Projection { y: Option<Symbol>, first: bool, witness: Word },
    /// `u` has two partners under `M_y`.
    NotFunctional { y: Option<Symbol>, u: Word, v1: Word, v2: Word },
}

/// Assembles multipliers for `ε` and every symbol.
pub fn build_multipliers(wa: &Dfa, d: &WordDifferenceMachine, reducer: &RewriteSystem) -> Vec<PairDfa> {
    let base = d.base();
    let mut out = vec![build_multiplier(wa, d, Some(d.initial()))];
    for y in 0..base {
        let t = d.state_of(&reducer.reduce(&[y]));
        out.push(build_multiplier(wa, d, t));
    }
    out
}

pub fn elementary_checks(
    wa: &Dfa,
    multipliers: &[PairDfa],
    radius: usize,
    state_cap: usize,
) -> Result<Option<CheckFailure>> {
    if !wa.accepts(&[]) {
        return Ok(Some(CheckFailure::Acceptor));
    }
    let label = |i: usize| if i == 0 { None } else { Some(i - 1) };
    for (i, m) in multipliers.iter().enumerate() {
        for first in [true, false] {
            let proj = if first { project_first(m, state_cap)? } else { project_second(m, state_cap)? };
            if !proj.equivalent(wa) {
                let missing = boolean_op(BoolOp::Minus, wa, Some(&proj))?;
                let witness = missing
                    .shortest_accepted()
                    .or_else(|| boolean_op(BoolOp::Minus, &proj, Some(wa)).ok()?.shortest_accepted())
                    .unwrap_or_default();
                return Ok(Some(CheckFailure::Projection { y: label(i), first, witness }));
            }
        }
    }
    let words = wa.enumerate(radius);
    for (i, m) in multipliers.iter().enumerate() {
        for u in &words {
            let ps = m.partners(u);
            if ps.len() > 1 {
                return Ok(Some(CheckFailure::NotFunctional {
                    y: label(i),
                    u: u.clone(),
                    v1: ps[0].clone(),
                    v2: ps[1].clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    Relator(Word),
    Inverse(Symbol),
}

/// Checks every relator and every `M_y ∘ M_{y^-1}` against `M_ε`.
pub fn axiom_check(s: &AutomaticStructure, limits: ComposeLimits) -> Result<Option<AxiomFailure>> {
    let eps = s.multiplier(None).minimize();
    let alphabet = &s.presentation.alphabet;
    for r in &s.presentation.relators {
        let mut acc = s.multiplier(Some(r[0])).clone();
        for &y in &r[1..] {
            acc = compose_relations(&acc, s.multiplier(Some(y)), limits)?;
        }
        if acc.minimize() != eps {
            return Ok(Some(AxiomFailure::Relator(r.clone())));
        }
    }
    for y in 0..alphabet.len() {
        let c = compose_relations(s.multiplier(Some(y)), s.multiplier(Some(alphabet.inverse(y))), limits)?;
        if c.minimize() != eps {
            return Ok(Some(AxiomFailure::Inverse(y)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutLimits {
    pub kb: KbLimits,
    pub max_passes: usize,
    /// Rebuilds from witness feedback allowed within one pass.
    pub max_corrections: usize,
    /// Radius of the multiplier functionality check.
    pub radius: usize,
    pub state_cap: usize,
    pub diff_cap: usize,
    pub compose: ComposeLimits,
}

impl Default for AutLimits {
    fn default() -> Self {
        Self {
            kb: KbLimits { stability_window: Some(500), ..KbLimits::default() },
            max_passes: 5,
            max_corrections: 20,
            radius: 6,
            state_cap: DEFAULT_STATE_CAP,
            diff_cap: DEFAULT_DIFF_CAP,
            compose: ComposeLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbandonReport {
    pub reason: String,
    pub transcript: Vec<String>,
    /// Set when a state or rule cap stopped the run rather than the pass budget.
    pub resource: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Verified(Box<AutomaticStructure>),
    Abandoned(AbandonReport),
}

/// Everything assembled from one word-difference machine.
struct Candidate {
    diff: WordDifferenceMachine,
    wa: Dfa,
    multipliers: Vec<PairDfa>,
}

fn assemble(sys: &RewriteSystem, witnesses: &[(Word, Word)], limits: &AutLimits) -> Result<Candidate> {
    let base = sys.alphabet().len();
    let mut pairs: Vec<(Word, Word)> = sys.rules().iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
    pairs.extend(witnesses.iter().cloned());
    let gens: Vec<Word> = (0..base).map(|y| Word(vec![y])).collect();
    let diff = WordDifferenceMachine::accumulate(sys, &pairs, &gens, limits.diff_cap)?;
    let wa = build_candidate_word_acceptor(&diff, limits.state_cap)?;
    let multipliers = build_multipliers(&wa, &diff, sys);
    Ok(Candidate { diff, wa, multipliers })
}

fn diff_chain(sys: &RewriteSystem, u: &[Symbol], v: &[Symbol]) -> Vec<Word> {
    let a = sys.alphabet();
    let base = a.len();
    let mut d = Vec::new();
    let mut out = Vec::new();
    for s in encode_pair(base, u, v) {
        let (x, y) = decode_symbol(base, s);
        let mut w = Vec::new();
        w.extend(x.map(|x| a.inverse(x)));
        w.extend_from_slice(&d);
        w.extend(y);
        d = sys.reduce(&w).into_inner();
        out.push(Word(d.clone()));
    }
    out
}

/// Alternates bounded completion with candidate construction and checks
/// until a structure passes the axiom checks or the pass limit is reached.
pub fn derive_shortlex_structure(p: &Presentation, limits: &AutLimits) -> Result<Derivation> {
    let mut transcript = Vec::new();
    match drive(p, limits, &mut transcript) {
        Ok(Ok(mut s)) => {
            s.transcript = transcript;
            Ok(Derivation::Verified(s))
        }
        Ok(Err(reason)) => Ok(Derivation::Abandoned(AbandonReport { reason, transcript, resource: false })),
        Err(e @ Error::Resource { .. }) => {
            let reason = e.to_string();
            transcript.push(reason.clone());
            Ok(Derivation::Abandoned(AbandonReport { reason, transcript, resource: true }))
        }
        Err(e) => Err(e),
    }
}

fn drive(
    p: &Presentation,
    limits: &AutLimits,
    transcript: &mut Vec<String>,
) -> Result<std::result::Result<Box<AutomaticStructure>, String>> {
    let mut sys = RewriteSystem::from_presentation(p)?;
    let a = p.alphabet.clone();
    let mut witnesses: Vec<(Word, Word)> = Vec::new();
    let mut known: HashSet<Word> = HashSet::new();
    for r in sys.rules() {
        known.extend(diff_chain(&sys, &r.lhs, &r.rhs));
    }
    for pass in 1..=limits.max_passes {
        let mut observer = |s: &RewriteSystem, r: &crate::rewrite::RewriteRule| {
            let mut novel = false;
            for d in diff_chain(s, &r.lhs, &r.rhs) {
                novel |= known.insert(d);
            }
            novel
        };
        let outcome = sys.knuth_bendix_observed(&limits.kb, &mut observer);
        let outcome_text = match &outcome {
            KbOutcome::Complete => "complete".to_string(),
            KbOutcome::Paused => "paused".to_string(),
            KbOutcome::LimitHit(w) => format!("limit {w}"),
        };
        transcript.push(format!(
            "pass {pass}: kb {outcome_text}, rules {}, pairs {}",
            sys.rule_count(),
            sys.processed_pairs()
        ));
        for round in 0..limits.max_corrections {
            let cand = assemble(&sys, &witnesses, limits)?;
            let sizes: Vec<String> = cand.multipliers.iter().map(|m| m.dfa().state_count().to_string()).collect();
            let mut line = format!(
                "pass {pass}.{round}: diffs {}, k {}, wa {}, multipliers [{}]",
                cand.diff.state_count(),
                cand.diff.max_difference_length(),
                cand.wa.state_count(),
                sizes.join(" ")
            );
            let failure = elementary_checks(&cand.wa, &cand.multipliers, limits.radius, limits.state_cap)?;
            let Some(failure) = failure else {
                line.push_str(", elementary ok");
                transcript.push(line);
                let mut s = AutomaticStructure {
                    presentation: p.clone(),
                    k: cand.diff.max_difference_length(),
                    word_acceptor: cand.wa,
                    multipliers: cand.multipliers,
                    diff: cand.diff,
                    verified: false,
                    transcript: Vec::new(),
                };
                return Ok(match axiom_check(&s, limits.compose)? {
                    None => {
                        transcript.push("axiom checks passed".into());
                        s.verified = true;
                        Ok(Box::new(s))
                    }
                    Some(f) => {
                        let reason = match f {
                            AxiomFailure::Relator(r) => format!("axiom check failed for relator {}", a.format_word(&r)),
                            AxiomFailure::Inverse(y) => format!("axiom check failed for inverse of {}", a.name(y)),
                        };
                        transcript.push(reason.clone());
                        Err(reason)
                    }
                });
            };
            let name = |y: Option<Symbol>| y.map_or("ε".to_string(), |y| a.name(y).to_string());
            match failure {
                CheckFailure::Acceptor => {
                    line.push_str(", acceptor rejects the identity");
                    transcript.push(line);
                    break;
                }
                CheckFailure::Projection { y, first, witness } => {
                    line.push_str(&format!(
                        ", projection {} of M_{} misses {}",
                        if first { 1 } else { 2 },
                        name(y),
                        a.display_word(&witness)
                    ));
                    transcript.push(line);
                    let yw: Vec<Symbol> = y.into_iter().collect();
                    let pair = if first {
                        let v = sys.reduce(&witness.concat(&yw));
                        (witness, v)
                    } else {
                        let yi: Vec<Symbol> = y.map(|y| a.inverse(y)).into_iter().collect();
                        (sys.reduce(&witness.concat(&yi)), witness)
                    };
                    let in_wa = cand.wa.accepts(&pair.0) && cand.wa.accepts(&pair.1);
                    if witnesses.contains(&pair) {
                        break;
                    }
                    witnesses.push(pair);
                    if !in_wa {
                        // the acceptor knows of a reduction the rules lack
                        break;
                    }
                }
                CheckFailure::NotFunctional { y, u, v1, v2 } => {
                    line.push_str(&format!(
                        ", M_{} gives {} two partners {} and {}",
                        name(y),
                        a.display_word(&u),
                        a.display_word(&v1),
                        a.display_word(&v2)
                    ));
                    transcript.push(line);
                    sys.add_equation(&v1, &v2);
                    break;
                }
            }
        }
    }
    let reason = format!("no verified structure after {} passes", limits.max_passes);
    transcript.push(reason.clone());
    Ok(Err(reason))
}

/// Assembles the candidate from the given rules alone (no completion,
/// no feedback), for inspecting what a particular rule set yields.
pub fn candidate_from_system(p: &Presentation, sys: &RewriteSystem, limits: &AutLimits) -> Result<AutomaticStructure> {
    if sys.alphabet() != &p.alphabet {
        return Err(Error::usage("rewrite system and presentation use different alphabets"));
    }
    let cand = assemble(sys, &[], limits)?;
    Ok(AutomaticStructure {
        presentation: p.clone(),
        k: cand.diff.max_difference_length(),
        word_acceptor: cand.wa,
        multipliers: cand.multipliers,
        diff: cand.diff,
        verified: false,
        transcript: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{free_reduce, GeneratorAlphabet};

    fn z2() -> Presentation {
        let a = GeneratorAlphabet::free(&["a", "b"]).unwrap();
        let r = a.parse_word("abAB").unwrap();
        Presentation::new(a, vec![r]).0
    }

    fn f2() -> Presentation {
        Presentation::new(GeneratorAlphabet::free(&["a", "b"]).unwrap(), vec![]).0
    }

    fn s3() -> Presentation {
        Presentation::coxeter(&[vec![1, 3], vec![3, 1]])
    }

    fn verified(p: &Presentation) -> AutomaticStructure {
        match derive_shortlex_structure(p, &AutLimits::default()).unwrap() {
            Derivation::Verified(s) => *s,
            Derivation::Abandoned(r) => panic!("abandoned: {}\n{}", r.reason, r.transcript.join("\n")),
        }
    }

    fn names(a: &GeneratorAlphabet, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| a.format_word(w)).collect()
    }

    #[test]
    fn z2_pipeline() {
        let s = verified(&z2());
        assert!(s.verified);
        assert_eq!(s.k, 2);
        let a = &s.presentation.alphabet;
        let w = |x: &str| a.parse_word(x).unwrap();
        assert!(s.word_acceptor.accepts(&w("ab")));
        assert!(!s.word_acceptor.accepts(&w("ba")));
        // a^i b^j with coherent signs
        for u in s.word_acceptor.enumerate(6) {
            let text = a.format_word(&u);
            let a_part: String = text.chars().take_while(|c| *c == 'a' || *c == 'A').collect();
            let rest = &text[a_part.len()..];
            assert!(rest.chars().all(|c| c == 'b' || c == 'B'), "{text}");
            assert!(!(a_part.contains('a') && a_part.contains('A')));
            assert!(!(rest.contains('b') && rest.contains('B')));
        }
        assert!(s.multiplier(Some(0)).accepts(&w("ab"), &w("aab")));
        assert_eq!(*s.multiplier(None), crate::pairfsa::diagonal(&s.word_acceptor));
        assert!(s.word_acceptor.is_prefix_closed());
    }

    #[test]
    fn free_group_pipeline() {
        let s = verified(&f2());
        let a = &s.presentation.alphabet;
        // FAIL sink counted
        assert_eq!(s.word_acceptor.state_count_with_sink(), 6);
        let words = s.word_acceptor.enumerate(6);
        let oracle: Vec<Word> = (0..=6)
            .flat_map(|l| crate::words::all_words_of_length(4, l))
            .filter(|w| free_reduce(w, a) == *w)
            .collect();
        assert_eq!(names(a, &words), names(a, &oracle));
    }

    #[test]
    fn trivial_diffs_accept_all_freely_reduced_words() {
        let p = f2();
        let sys = RewriteSystem::new(p.alphabet.clone());
        let d = WordDifferenceMachine::from_rules(&sys).unwrap();
        let wa = build_candidate_word_acceptor(&d, DEFAULT_STATE_CAP).unwrap();
        // with D = {ε} nothing is ruled out
        assert_eq!(wa.enumerate(3).len(), 1 + 4 + 16 + 64);
    }

    #[test]
    fn s3_pipeline_and_premature_failure() {
        let s = verified(&s3());
        assert_eq!(s.word_acceptor.enumerate(10).len(), 6);
        // the rank-two presentation <a, b | a^2, b^3, (ab)^2> stopped before
        // completion adds a rule gives an inadequate candidate
        let a = GeneratorAlphabet::from_pairs(&[("a", None), ("b", Some("B"))]).unwrap();
        let rels = vec![a.parse_word("bbb").unwrap(), a.parse_word("abab").unwrap()];
        let p = Presentation::new(a, rels).0;
        let mut sys = RewriteSystem::from_presentation(&p).unwrap();
        let lim = KbLimits { max_rules: sys.rule_count(), ..KbLimits::default() };
        assert_eq!(sys.knuth_bendix(&lim), KbOutcome::LimitHit("maxRules".into()));
        let cand = candidate_from_system(&p, &sys, &AutLimits::default()).unwrap();
        let f = elementary_checks(&cand.word_acceptor, &cand.multipliers, 6, DEFAULT_STATE_CAP).unwrap();
        assert!(matches!(f, Some(CheckFailure::Projection { .. })), "{f:?}");
        // the full pipeline recovers
        let s = verified(&p);
        assert_eq!(s.word_acceptor.enumerate(10).len(), 6);
    }

    #[test]
    fn dihedral_candidate_for_s3_fails_axioms() {
        // without the braid rule the candidate is a valid structure for the
        // infinite dihedral group, which only the relator check exposes
        let p = s3();
        let mut sys = RewriteSystem::new(p.alphabet.clone());
        sys.add_equation(&[0, 0], &[]);
        sys.add_equation(&[1, 1], &[]);
        let mut cand = candidate_from_system(&p, &sys, &AutLimits::default()).unwrap();
        let f = elementary_checks(&cand.word_acceptor, &cand.multipliers, 6, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(f, None);
        cand.verified = false;
        let f = axiom_check(&cand, ComposeLimits::default()).unwrap();
        assert!(matches!(f, Some(AxiomFailure::Relator(_))), "{f:?}");
    }

    #[test]
    fn infinite_cyclic_and_trivial() {
        let a = GeneratorAlphabet::free(&["a"]).unwrap();
        let z = Presentation::new(a.clone(), vec![]).0;
        let s = verified(&z);
        assert_eq!(s.word_acceptor.count_by_length(4).iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["1", "2", "2", "2"]);
        let t = Presentation::new(a.clone(), vec![a.parse_word("a").unwrap()]).0;
        let s = verified(&t);
        assert_eq!(s.word_acceptor.enumerate(5), vec![Word::empty()]);
    }

    #[test]
    fn corrupted_multiplier_fails_axioms() {
        let mut s = verified(&z2());
        let m = s.multipliers[1].dfa().clone();
        let flip = (0..m.state_count() as StateId).find(|&q| !m.is_accepting(q)).unwrap_or(0);
        let mut bad = m.clone();
        bad.set_accepting(flip, !m.is_accepting(flip));
        s.multipliers[1] = PairDfa::new(s.base(), bad).unwrap();
        let f = axiom_check(&s, ComposeLimits::default()).unwrap();
        assert!(matches!(f, Some(AxiomFailure::Relator(_))), "{f:?}");
    }

    #[test]
    fn multiplier_pairs_multiply_correctly() {
        for p in [z2(), s3(), f2(), Presentation::coxeter(&[vec![1, 0], vec![0, 1]])] {
            let s = verified(&p);
            let mut sys = RewriteSystem::from_presentation(&p).unwrap();
            assert_eq!(sys.knuth_bendix(&KbLimits::default()), KbOutcome::Complete);
            let a = &p.alphabet;
            for u in s.word_acceptor.enumerate(5) {
                for y in 0..a.len() {
                    let vs = s.multiplier(Some(y)).partners(&u);
                    assert_eq!(vs.len(), 1);
                    let check = u.concat(&[y]).concat(&crate::words::invert_word(&vs[0], a));
                    assert!(sys.reduce(&check).is_empty());
                    // every prefix difference is a state of D
                    for d in diff_chain(&sys, &u, &vs[0]) {
                        assert!(s.diff.state_of(&d).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn derivation_is_deterministic() {
        let run = || match derive_shortlex_structure(&z2(), &AutLimits::default()).unwrap() {
            Derivation::Verified(s) => (s.word_acceptor.clone(), s.multipliers.clone(), s.transcript.clone()),
            Derivation::Abandoned(_) => panic!(),
        };
        assert_eq!(run(), run());
    }
}
