//! Synchronous two-tape automata over the padded pair alphabet.
//!
//! A pair of words `(u, v)` is read as a single string of symbol pairs of
//! length `max(|u|, |v|)`, the shorter word being padded at its end with `$`.
//! With a base alphabet of `n` symbols, `$` is index `n` and the pair `(a, b)`
//! has index `a * (n + 1) + b`; `($, $)` is excluded, so the pair alphabet has
//! `(n + 1)^2 - 1` symbols.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fsa::{Dfa, Nfa, StateId, FAIL};
use crate::words::{Symbol, Word};

/// One coordinate of a pair symbol: a base symbol or the padding `$`.
pub type Padded = Option<Symbol>;

pub fn pair_alphabet_size(base: usize) -> usize {
    (base + 1) * (base + 1) - 1
}

/// Index of `(a, b)`; panics on `($, $)`.
pub fn pair_symbol(base: usize, a: Padded, b: Padded) -> Symbol {
    assert!(a.is_some() || b.is_some(), "($,$) is not a pair symbol");
    a.unwrap_or(base) * (base + 1) + b.unwrap_or(base)
}

pub fn decode_symbol(base: usize, s: Symbol) -> (Padded, Padded) {
    let (a, b) = (s / (base + 1), s % (base + 1));
    let f = |x: usize| if x == base { None } else { Some(x) };
    (f(a), f(b))
}

/// Padded encoding of `(u, v)`.
pub fn encode_pair(base: usize, u: &[Symbol], v: &[Symbol]) -> Vec<Symbol> {
    (0..u.len().max(v.len()))
        .map(|i| pair_symbol(base, u.get(i).copied(), v.get(i).copied()))
        .collect()
}

/// Inverse of [`encode_pair`]; `None` if padding occurs before a real symbol.
pub fn decode_pair(base: usize, s: &[Symbol]) -> Option<(Word, Word)> {
    let (mut u, mut v) = (Vec::new(), Vec::new());
    let (mut u_done, mut v_done) = (false, false);
    for &x in s {
        if x >= pair_alphabet_size(base) {
            return None;
        }
        let (a, b) = decode_symbol(base, x);
        match a {
            Some(a) if !u_done => u.push(a),
            Some(_) => return None,
            None => u_done = true,
        }
        match b {
            Some(b) if !v_done => v.push(b),
            Some(_) => return None,
            None => v_done = true,
        }
    }
    Some((Word(u), Word(v)))
}

/// Where a run stands with respect to padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadState {
    NoPad,
    LeftPadded,
    RightPadded,
}

impl PadState {
    /// Next padding state after reading `(a, b)`, or `None` if illegal.
    pub fn step(self, a: Padded, b: Padded) -> Option<PadState> {
        match (self, a, b) {
            (PadState::NoPad, Some(_), Some(_)) => Some(PadState::NoPad),
            (PadState::NoPad | PadState::LeftPadded, None, Some(_)) => Some(PadState::LeftPadded),
            (PadState::NoPad | PadState::RightPadded, Some(_), None) => Some(PadState::RightPadded),
            _ => None,
        }
    }
}

/// Accepts exactly the well-formed padded strings.
pub fn padding_dfa(base: usize) -> Dfa {
    let k = pair_alphabet_size(base);
    let mut d = Dfa::new(k, 3, 0);
    let states = [PadState::NoPad, PadState::LeftPadded, PadState::RightPadded];
    for (i, st) in states.iter().enumerate() {
        d.set_accepting(i as StateId, true);
        for s in 0..k {
            let (a, b) = decode_symbol(base, s);
            if let Some(next) = st.step(a, b) {
                let j = states.iter().position(|x| *x == next).unwrap();
                d.set_transition(i as StateId, s, j as StateId);
            }
        }
    }
    d
}

/// A deterministic automaton over the padded pair alphabet of `base` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairDfa {
    base: usize,
    dfa: Dfa,
}

impl PairDfa {
    pub fn new(base: usize, dfa: Dfa) -> Result<Self> {
        if dfa.num_symbols() != pair_alphabet_size(base) {
            return Err(Error::usage(format!(
                "pair automaton over {base} base symbols needs {} columns, got {}",
                pair_alphabet_size(base),
                dfa.num_symbols()
            )));
        }
        Ok(Self { base, dfa })
    }

    pub fn empty(base: usize) -> Self {
        Self { base, dfa: Dfa::empty_language(pair_alphabet_size(base)) }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn into_dfa(self) -> Dfa {
        self.dfa
    }

    pub fn accepts(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        self.dfa.accepts(&encode_pair(self.base, u, v))
    }

    pub fn minimize(&self) -> PairDfa {
        PairDfa { base: self.base, dfa: self.dfa.minimize() }
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn equivalent(&self, other: &PairDfa) -> bool {
        self.base == other.base && self.dfa.equivalent(&other.dfa)
    }

    /// Whether every accepted string is a well-formed padded pair.
    pub fn respects_padding(&self) -> bool {
        let bad = crate::fsa::product(&self.dfa, &padding_dfa(self.base), |a, b| a && !b);
        bad.is_empty()
    }

    /// Padding status per state, `None` where a state is reached under more
    /// than one status (or not at all).
    pub fn pad_states(&self) -> Vec<Option<PadState>> {
        let n = self.dfa.state_count();
        let mut seen: Vec<Vec<PadState>> = vec![Vec::new(); n];
        let init = self.dfa.initial();
        seen[init as usize].push(PadState::NoPad);
        let mut queue = VecDeque::from([(init, PadState::NoPad)]);
        while let Some((s, p)) = queue.pop_front() {
            for sym in 0..self.dfa.num_symbols() {
                let t = self.dfa.target(s, sym);
                if t == FAIL {
                    continue;
                }
                let (a, b) = decode_symbol(self.base, sym);
                if let Some(np) = p.step(a, b) {
                    if !seen[t as usize].contains(&np) {
                        seen[t as usize].push(np);
                        queue.push_back((t, np));
                    }
                }
            }
        }
        seen.into_iter().map(|v| if v.len() == 1 { Some(v[0]) } else { None }).collect()
    }

    /// Every `v` with `(u, v)` accepted, in shortlex order.
    pub fn partners(&self, u: &[Symbol]) -> Vec<Word> {
        partners(self, u)
    }
}

/// Identity relation on `L(lang)`.
pub fn diagonal(lang: &Dfa) -> PairDfa {
    let base = lang.num_symbols();
    let mut d = Dfa::new(pair_alphabet_size(base), lang.state_count(), lang.initial());
    for s in 0..lang.state_count() as StateId {
        d.set_accepting(s, lang.is_accepting(s));
        for a in 0..base {
            d.set_transition(s, pair_symbol(base, Some(a), Some(a)), lang.target(s, a));
        }
    }
    PairDfa { base, dfa: d.minimize() }
}

fn project(p: &PairDfa, first: bool, state_cap: usize) -> Result<Dfa> {
    let base = p.base;
    let d = &p.dfa;
    let mut nfa = Nfa::new(base);
    for s in 0..d.state_count() as StateId {
        nfa.add_state(d.is_accepting(s));
    }
    nfa.add_initial(d.initial());
    for s in 0..d.state_count() as StateId {
        for sym in 0..d.num_symbols() {
            let t = d.target(s, sym);
            if t == FAIL {
                continue;
            }
            let (a, b) = decode_symbol(base, sym);
            match if first { a } else { b } {
                Some(x) => nfa.add_move(s, x, t),
                None => nfa.add_epsilon(s, t),
            }
        }
    }
    Ok(nfa.determinize(state_cap)?.minimize())
}

/// `{u : ∃v, (u, v) ∈ L(p)}`.
pub fn project_first(p: &PairDfa, state_cap: usize) -> Result<Dfa> {
    project(p, true, state_cap)
}

/// `{v : ∃u, (u, v) ∈ L(p)}`.
pub fn project_second(p: &PairDfa, state_cap: usize) -> Result<Dfa> {
    project(p, false, state_cap)
}

/// Limits for [`compose_relations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComposeLimits {
    /// Longest run of middle-word symbols allowed beyond both outer words.
    pub overhang_cap: usize,
    pub state_cap: usize,
}

impl Default for ComposeLimits {
    fn default() -> Self {
        Self { overhang_cap: 8, state_cap: crate::fsa::DEFAULT_STATE_CAP }
    }
}

const DONE: StateId = FAIL - 1;

/// Relational composition `{(u, w) : ∃v, (u, v) ∈ L(p), (v, w) ∈ L(q)}`.
///
/// Where the middle word outruns both outer words, its tail is consumed by
/// ε-moves at the end of the run; the length of that tail is tracked and may
/// not exceed `limits.overhang_cap` on any run that could still accept.
pub fn compose_relations(p: &PairDfa, q: &PairDfa, limits: ComposeLimits) -> Result<PairDfa> {
    if p.base != q.base {
        return Err(Error::usage("composed relations have different base alphabets"));
    }
    let base = p.base;
    let (pd, qd) = (&p.dfa, &q.dfa);
    let step = |d: &Dfa, s: StateId, a: Padded, b: Padded| -> StateId {
        match (s, a, b) {
            (DONE, None, None) => DONE,
            (DONE, _, _) => FAIL,
            (s, None, None) => {
                if d.is_accepting(s) {
                    DONE
                } else {
                    FAIL
                }
            }
            (s, a, b) => d.target(s, pair_symbol(base, a, b)),
        }
    };
    let accepting = |d: &Dfa, s: StateId| s == DONE || d.is_accepting(s);

    type Key = (StateId, StateId, usize);
    let mut nfa = Nfa::new(pair_alphabet_size(base));
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let start: Key = (pd.initial(), qd.initial(), 0);
    let mut intern = |nfa: &mut Nfa, key: Key, keys: &mut Vec<Key>| -> StateId {
        *index.entry(key).or_insert_with(|| {
            keys.push(key);
            nfa.add_state(accepting(pd, key.0) && accepting(qd, key.1))
        })
    };
    let s0 = intern(&mut nfa, start, &mut keys);
    nfa.add_initial(s0);
    let mut i = 0;
    while i < keys.len() {
        let (ps, qs, overhang) = keys[i];
        let from = i as StateId;
        i += 1;
        if overhang == 0 {
            for a in (0..=base).map(|x| (x < base).then_some(x)) {
                for c in (0..=base).map(|x| (x < base).then_some(x)) {
                    if a.is_none() && c.is_none() {
                        continue;
                    }
                    let out = pair_symbol(base, a, c);
                    for b in (0..=base).map(|x| (x < base).then_some(x)) {
                        let np = step(pd, ps, a, b);
                        if np == FAIL {
                            continue;
                        }
                        let nq = step(qd, qs, b, c);
                        if nq == FAIL {
                            continue;
                        }
                        let t = intern(&mut nfa, (np, nq, 0), &mut keys);
                        nfa.add_move(from, out, t);
                    }
                }
            }
        }
        if ps == DONE || qs == DONE {
            continue;
        }
        for b in 0..base {
            let np = pd.target(ps, pair_symbol(base, None, Some(b)));
            let nq = qd.target(qs, pair_symbol(base, Some(b), None));
            if np == FAIL || nq == FAIL {
                continue;
            }
            if overhang + 1 > limits.overhang_cap {
                return Err(Error::resource("composition middle-word overhang", limits.overhang_cap));
            }
            let t = intern(&mut nfa, (np, nq, overhang + 1), &mut keys);
            nfa.add_epsilon(from, t);
        }
        if keys.len() > limits.state_cap {
            return Err(Error::resource("composition product states", limits.state_cap));
        }
    }
    let dfa = nfa.determinize(limits.state_cap)?.minimize();
    Ok(PairDfa { base, dfa })
}

/// Every `v` with `(u, v)` accepted, in shortlex order.
fn partners(p: &PairDfa, u: &[Symbol]) -> Vec<Word> {
    let base = p.base;
    let d = &p.dfa;
    let co = d.coreachable();
    let mut out = Vec::new();
    // Depth-first over (position, state, v so far, v ended). Past the end of u
    // a run longer than the state count repeats a state, so the search is cut
    // there.
    let limit = u.len() + d.state_count() + 1;
    let mut stack: Vec<(usize, StateId, Vec<Symbol>, bool)> = vec![(0, d.initial(), Vec::new(), false)];
    while let Some((i, s, v, v_done)) = stack.pop() {
        if i >= u.len() && d.is_accepting(s) {
            out.push(Word(v.clone()));
        }
        if i >= limit {
            continue;
        }
        let a = u.get(i).copied();
        let mut choices: Vec<Padded> = Vec::new();
        if !v_done {
            choices.extend((0..base).map(Some));
        }
        if a.is_some() {
            choices.push(None);
        }
        for b in choices {
            if a.is_none() && b.is_none() {
                continue;
            }
            let t = d.target(s, pair_symbol(base, a, b));
            if t == FAIL || !co[t as usize] {
                continue;
            }
            let mut nv = v.clone();
            if let Some(b) = b {
                nv.push(b);
            }
            let done = v_done || b.is_none();
            stack.push((i + 1, t, nv, done));
        }
    }
    out.sort_by(|x, y| crate::words::shortlex_cmp(x, y));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsa::tests::{free_group_acceptor, words_up_to};
    use crate::fsa::{boolean_op, BoolOp, DEFAULT_STATE_CAP};

    fn relation_from_pairs(base: usize, pairs: &[(Word, Word)]) -> PairDfa {
        let strings: Vec<Word> = pairs.iter().map(|(u, v)| Word(encode_pair(base, u, v))).collect();
        PairDfa::new(base, Dfa::from_words(pair_alphabet_size(base), &strings).minimize()).unwrap()
    }

    #[test]
    fn encoding_examples() {
        // base {a=0, b=1}, $ = 2
        let p = |a: Padded, b: Padded| pair_symbol(2, a, b);
        assert_eq!(encode_pair(2, &[0, 1], &[0]), vec![p(Some(0), Some(0)), p(Some(1), None)]);
        assert!(encode_pair(2, &[], &[]).is_empty());
        assert_eq!(
            encode_pair(2, &[0], &[0, 1, 1]),
            vec![p(Some(0), Some(0)), p(None, Some(1)), p(None, Some(1))]
        );
        assert_eq!(pair_alphabet_size(2), 8);
        assert_eq!(decode_pair(2, &[p(None, Some(1)), p(Some(0), Some(0))]), None);
    }

    #[test]
    fn diagonal_examples() {
        let all = Dfa::all_words(2);
        let d = diagonal(&all);
        assert!(d.accepts(&[0, 1], &[0, 1]));
        assert!(!d.accepts(&[0], &[1]));
        let l = free_group_acceptor();
        let dl = diagonal(&l);
        assert!(project_first(&dl, DEFAULT_STATE_CAP).unwrap().equivalent(&l));
        assert!(project_second(&dl, DEFAULT_STATE_CAP).unwrap().equivalent(&l));
        assert!(dl.respects_padding());
    }

    #[test]
    fn projection_examples() {
        // {(a^n b, a^n)}: a = 0, b = 1
        let base = 2;
        let mut d = Dfa::new(pair_alphabet_size(base), 2, 0);
        d.set_transition(0, pair_symbol(base, Some(0), Some(0)), 0);
        d.set_transition(0, pair_symbol(base, Some(1), None), 1);
        d.set_accepting(1, true);
        let p = PairDfa::new(base, d).unwrap();
        let proj = project_first(&p, DEFAULT_STATE_CAP).unwrap();
        for w in words_up_to(2, 8) {
            let expected = !w.is_empty() && w[..w.len() - 1].iter().all(|&x| x == 0) && *w.last().unwrap() == 1;
            assert_eq!(proj.accepts(&w), expected, "{w}");
        }
        assert!(project_first(&PairDfa::empty(2), 10).unwrap().is_empty());
    }

    #[test]
    fn composition_examples() {
        let l = free_group_acceptor();
        let dl = diagonal(&l);
        let lim = ComposeLimits::default();
        assert!(compose_relations(&dl, &dl, lim).unwrap().equivalent(&dl));
        assert!(compose_relations(&dl, &PairDfa::empty(4), lim).unwrap().is_empty());
    }

    #[test]
    fn composition_with_long_middle_word() {
        // P = {(a, aab)}, Q = {(aab, b)}: middle word longer than both outer words
        let w = |v: &[usize]| Word(v.to_vec());
        let p = relation_from_pairs(2, &[(w(&[0]), w(&[0, 0, 1]))]);
        let q = relation_from_pairs(2, &[(w(&[0, 0, 1]), w(&[1]))]);
        let c = compose_relations(&p, &q, ComposeLimits::default()).unwrap();
        assert!(c.accepts(&[0], &[1]));
        assert!(!c.accepts(&[0], &[0]));
        let err = compose_relations(&p, &q, ComposeLimits { overhang_cap: 1, ..Default::default() });
        assert!(matches!(err, Err(Error::Resource { limit: 1, .. })));
    }

    /// Brute-force join over explicitly listed relations.
    fn join(p: &[(Word, Word)], q: &[(Word, Word)]) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for (u, v) in p {
            for (v2, w) in q {
                if v == v2 && !out.contains(&(u.clone(), w.clone())) {
                    out.push((u.clone(), w.clone()));
                }
            }
        }
        out
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word(max: usize) -> impl Strategy<Value = Word> {
            proptest::collection::vec(0usize..2, 0..=max).prop_map(Word)
        }

        fn arb_relation() -> impl Strategy<Value = Vec<(Word, Word)>> {
            proptest::collection::vec((arb_word(4), arb_word(4)), 0..6)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn padding_round_trip(u in arb_word(8), v in arb_word(8)) {
                let s = encode_pair(2, &u, &v);
                prop_assert_eq!(s.len(), u.len().max(v.len()));
                prop_assert_eq!(decode_pair(2, &s), Some((u.clone(), v.clone())));
                prop_assert!(padding_dfa(2).accepts(&s));
            }

            #[test]
            fn composition_matches_join(p in arb_relation(), q in arb_relation()) {
                let pr = relation_from_pairs(2, &p);
                let qr = relation_from_pairs(2, &q);
                let c = compose_relations(&pr, &qr, ComposeLimits::default()).unwrap();
                prop_assert!(c.respects_padding());
                let expected = join(&p, &q);
                let words = words_up_to(2, 5);
                for u in &words {
                    for w in &words {
                        let want = expected.contains(&(u.clone(), w.clone()));
                        prop_assert_eq!(c.accepts(u, w), want);
                    }
                }
                // projection of a composite lies inside the first projection
                let pc = project_first(&c, DEFAULT_STATE_CAP).unwrap();
                let pp = project_first(&pr, DEFAULT_STATE_CAP).unwrap();
                prop_assert!(boolean_op(BoolOp::Minus, &pc, Some(&pp)).unwrap().is_empty());
            }

            #[test]
            fn partners_are_exact(p in arb_relation(), u in arb_word(4)) {
                let pr = relation_from_pairs(2, &p);
                let mut want: Vec<Word> = p.iter().filter(|(x, _)| *x == u).map(|(_, v)| v.clone()).collect();
                want.sort_by(|x, y| crate::words::shortlex_cmp(x, y));
                want.dedup();
                prop_assert_eq!(pr.partners(&u), want);
            }
        }
    }
}
