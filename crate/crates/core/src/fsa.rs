//! Deterministic and nondeterministic finite automata over small integer
//! alphabets, with minimisation, boolean closure and language analytics.
//!
//! Transition tables are dense. A missing transition goes to the implicit
//! failure state [`FAIL`], which is non-accepting and absorbs every symbol.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_int_poly, QPoly};
use crate::words::{Symbol, Word};

pub type StateId = u32;

/// Sentinel target for the failure state.
pub const FAIL: StateId = StateId::MAX;

/// Default cap on the number of states a subset construction may create.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A deterministic automaton with a dense `states × symbols` table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    num_symbols: usize,
    initial: StateId,
    accepting: Vec<bool>,
    table: Vec<StateId>,
}

impl Dfa {
    /// An automaton with `states` states, every transition to [`FAIL`] and
    /// nothing accepting.
    pub fn new(num_symbols: usize, states: usize, initial: StateId) -> Self {
        assert!(states > 0 && (initial as usize) < states, "initial state out of range");
        Self {
            num_symbols,
            initial,
            accepting: vec![false; states],
            table: vec![FAIL; states * num_symbols],
        }
    }

    /// Builds from raw parts, validating ranges.
    pub fn from_parts(
        num_symbols: usize,
        initial: StateId,
        accepting: Vec<bool>,
        table: Vec<StateId>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 || initial as usize >= n {
            return Err(Error::usage("initial state out of range"));
        }
        if table.len() != n * num_symbols {
            return Err(Error::usage("transition table has the wrong size"));
        }
        if let Some(bad) = table.iter().find(|&&t| t != FAIL && t as usize >= n) {
            return Err(Error::usage(format!("transition target {bad} out of range")));
        }
        Ok(Self { num_symbols, initial, accepting, table })
    }

    /// The automaton accepting every word.
    pub fn all_words(num_symbols: usize) -> Self {
        let mut d = Self::new(num_symbols, 1, 0);
        d.accepting[0] = true;
        for a in 0..num_symbols {
            d.set_transition(0, a, 0);
        }
        d
    }

    /// The canonical automaton with empty language.
    pub fn empty_language(num_symbols: usize) -> Self {
        Self::new(num_symbols, 1, 0)
    }

    /// Accepts exactly the given words.
    pub fn from_words(num_symbols: usize, words: &[Word]) -> Self {
        let mut nodes: Vec<Vec<StateId>> = vec![vec![FAIL; num_symbols]];
        let mut acc = vec![false];
        for w in words {
            let mut s = 0usize;
            for &a in w.iter() {
                if nodes[s][a] == FAIL {
                    nodes.push(vec![FAIL; num_symbols]);
                    acc.push(false);
                    let id = (nodes.len() - 1) as StateId;
                    nodes[s][a] = id;
                }
                s = nodes[s][a] as usize;
            }
            acc[s] = true;
        }
        let table = nodes.into_iter().flatten().collect();
        Self { num_symbols, initial: 0, accepting: acc, table }
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    /// Number of explicit states (the failure state is not counted).
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    /// State count including the failure sink when some transition reaches it.
    pub fn state_count_with_sink(&self) -> usize {
        self.state_count() + usize::from(self.table.contains(&FAIL))
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        s != FAIL && self.accepting[s as usize]
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.state_count() as StateId).filter(|&s| self.accepting[s as usize]).collect()
    }

    pub fn set_accepting(&mut self, s: StateId, acc: bool) {
        self.accepting[s as usize] = acc;
    }

    pub fn set_transition(&mut self, s: StateId, a: Symbol, t: StateId) {
        self.table[s as usize * self.num_symbols + a] = t;
    }

    /// Appends a fresh non-accepting state and returns its id.
    pub fn add_state(&mut self) -> StateId {
        self.accepting.push(false);
        self.table.extend(std::iter::repeat_n(FAIL, self.num_symbols));
        (self.accepting.len() - 1) as StateId
    }

    #[inline]
    pub fn target(&self, s: StateId, a: Symbol) -> StateId {
        if s == FAIL {
            FAIL
        } else {
            self.table[s as usize * self.num_symbols + a]
        }
    }

    pub fn row(&self, s: StateId) -> &[StateId] {
        let k = self.num_symbols;
        &self.table[s as usize * k..(s as usize + 1) * k]
    }

    /// State reached after reading `w` from `from` ([`FAIL`] if it dies).
    pub fn run_from(&self, from: StateId, w: &[Symbol]) -> StateId {
        let mut s = from;
        for &a in w {
            s = self.target(s, a);
            if s == FAIL {
                break;
            }
        }
        s
    }

    pub fn run(&self, w: &[Symbol]) -> StateId {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.is_accepting(self.run(w))
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            for &t in self.row(s) {
                if t != FAIL && !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            for &t in self.row(s as StateId) {
                if t != FAIL {
                    rev[t as usize].push(s as StateId);
                }
            }
        }
        let mut seen = self.accepting.clone();
        let mut queue: VecDeque<StateId> =
            (0..n as StateId).filter(|&s| self.accepting[s as usize]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &rev[t as usize] {
                if !seen[s as usize] {
                    seen[s as usize] = true;
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// Reachable and co-reachable states.
    pub fn live(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coreachable();
        r.iter().zip(&c).map(|(a, b)| *a && *b).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.live()[self.initial as usize]
    }

    /// Minimal language-equivalent automaton in canonical numbering.
    pub fn minimize(&self) -> Dfa {
        minimize(self)
    }

    /// Structural equality of canonical minimal forms, i.e. language equality.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.num_symbols == other.num_symbols && self.minimize() == other.minimize()
    }

    /// Shortlex-least accepted word, if any.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let mut parent: HashMap<StateId, (StateId, Symbol)> = HashMap::new();
        let mut queue = VecDeque::from([self.initial]);
        let mut seen = vec![false; self.state_count()];
        seen[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            if self.accepting[s as usize] {
                let mut w = Vec::new();
                let mut cur = s;
                while let Some(&(p, a)) = parent.get(&cur) {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(Word(w));
            }
            for a in 0..self.num_symbols {
                let t = self.target(s, a);
                if t != FAIL && !seen[t as usize] {
                    seen[t as usize] = true;
                    parent.insert(t, (s, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Complete automaton: the failure state becomes an explicit sink.
    pub fn completed(&self) -> Dfa {
        if !self.table.contains(&FAIL) {
            return self.clone();
        }
        let mut d = self.clone();
        let sink = d.add_state();
        for t in d.table.iter_mut() {
            if *t == FAIL {
                *t = sink;
            }
        }
        d
    }

    /// Whether the accepted language is closed under taking prefixes.
    pub fn is_prefix_closed(&self) -> bool {
        // Every live state must be accepting.
        let live = self.live();
        live.iter().zip(&self.accepting).all(|(l, a)| !*l || *a)
    }

    pub fn language_is_finite(&self) -> Finiteness {
        language_is_finite(self)
    }

    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        enumerate(self, max_len)
    }

    /// Number of accepted words of each length `0..n_terms`.
    pub fn count_by_length(&self, n_terms: usize) -> Vec<BigUint> {
        let n = self.state_count();
        let mut cur = vec![BigUint::zero(); n];
        cur[self.initial as usize] = BigUint::one();
        let mut out = Vec::with_capacity(n_terms);
        for _ in 0..n_terms {
            let total = cur
                .iter()
                .enumerate()
                .filter(|(s, _)| self.accepting[*s])
                .fold(BigUint::zero(), |acc, (_, c)| acc + c);
            out.push(total);
            let mut next = vec![BigUint::zero(); n];
            for (s, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &t in self.row(s as StateId) {
                    if t != FAIL {
                        next[t as usize] += c;
                    }
                }
            }
            cur = next;
        }
        out
    }

    pub fn growth_series(&self, n_terms: usize) -> GrowthSeries {
        growth_series(self, n_terms)
    }
}

/// A nondeterministic automaton with optional ε-moves.
#[derive(Debug, Clone, Default)]
pub struct Nfa {
    num_symbols: usize,
    initials: Vec<StateId>,
    accepting: Vec<bool>,
    moves: Vec<Vec<(Symbol, StateId)>>,
    eps: Vec<Vec<StateId>>,
}

impl Nfa {
    pub fn new(num_symbols: usize) -> Self {
        Self { num_symbols, ..Default::default() }
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.moves.push(Vec::new());
        self.eps.push(Vec::new());
        (self.accepting.len() - 1) as StateId
    }

    pub fn add_initial(&mut self, s: StateId) {
        self.initials.push(s);
    }

    pub fn set_accepting(&mut self, s: StateId, acc: bool) {
        self.accepting[s as usize] = acc;
    }

    pub fn add_move(&mut self, from: StateId, a: Symbol, to: StateId) {
        self.moves[from as usize].push((a, to));
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        self.eps[from as usize].push(to);
    }

    /// Nondeterministic copy of a deterministic automaton.
    pub fn from_dfa(d: &Dfa) -> Self {
        let mut n = Nfa::new(d.num_symbols());
        for s in 0..d.state_count() {
            n.add_state(d.accepting[s]);
        }
        for s in 0..d.state_count() as StateId {
            for (a, &t) in d.row(s).iter().enumerate() {
                if t != FAIL {
                    n.add_move(s, a, t);
                }
            }
        }
        n.add_initial(d.initial());
        n
    }

    fn closure(&self, set: &mut Vec<StateId>) {
        let mut seen: BTreeSet<StateId> = set.iter().copied().collect();
        let mut stack = set.clone();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s as usize] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        *set = seen.into_iter().collect();
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut cur = self.initials.clone();
        self.closure(&mut cur);
        for &a in w {
            let mut next: Vec<StateId> = cur
                .iter()
                .flat_map(|&s| self.moves[s as usize].iter().filter(|m| m.0 == a).map(|m| m.1))
                .collect();
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s as usize])
    }

    /// Subset construction over reachable subsets, numbered in discovery order.
    pub fn determinize(&self, state_cap: usize) -> Result<Dfa> {
        determinize(self, state_cap)
    }
}

/// Subset construction; fails once more than `state_cap` subsets are created.
pub fn determinize(nfa: &Nfa, state_cap: usize) -> Result<Dfa> {
    let k = nfa.num_symbols;
    let mut start = nfa.initials.clone();
    nfa.closure(&mut start);
    if start.is_empty() {
        return Ok(Dfa::empty_language(k));
    }
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut table: Vec<StateId> = Vec::new();
    let mut accepting = Vec::new();
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut i = 0;
    let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); k];
    while i < subsets.len() {
        for b in buckets.iter_mut() {
            b.clear();
        }
        let cur = &subsets[i];
        accepting.push(cur.iter().any(|&s| nfa.accepting[s as usize]));
        for &s in cur {
            for &(a, t) in &nfa.moves[s as usize] {
                buckets[a].push(t);
            }
        }
        let mut row = vec![FAIL; k];
        for (a, bucket) in buckets.iter_mut().enumerate() {
            if bucket.is_empty() {
                continue;
            }
            bucket.sort_unstable();
            bucket.dedup();
            let mut next = bucket.clone();
            nfa.closure(&mut next);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= state_cap {
                        return Err(Error::resource("subset construction states", state_cap));
                    }
                    let id = subsets.len() as StateId;
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            row[a] = id;
        }
        table.extend(row);
        i += 1;
    }
    Dfa::from_parts(k, 0, accepting, table)
}

/// Trims, merges equivalent states, and renumbers breadth-first from the
/// initial state taking symbols in order.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.num_symbols;
    let live = d.live();
    if !live[d.initial as usize] {
        return Dfa::empty_language(k);
    }
    // Compact live states; index `m` is the sink standing in for everything dead.
    let mut compact = vec![u32::MAX; d.state_count()];
    let mut members = Vec::new();
    for (s, &l) in live.iter().enumerate() {
        if l {
            compact[s] = members.len() as u32;
            members.push(s as StateId);
        }
    }
    let m = members.len();
    let sink = m as u32;
    let succ: Vec<u32> = members
        .iter()
        .flat_map(|&s| {
            d.row(s)
                .iter()
                .map(|&t| if t == FAIL || !live[t as usize] { sink } else { compact[t as usize] })
                .collect::<Vec<_>>()
        })
        .chain(std::iter::repeat_n(sink, k))
        .collect();
    let is_acc = |i: usize| i < m && d.accepting[members[i] as usize];
    let mut class: Vec<u32> = (0..=m).map(|i| u32::from(is_acc(i))).collect();
    let mut n_classes = class.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut sig_index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next = vec![0u32; m + 1];
        for i in 0..=m {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[i]);
            sig.extend(succ[i * k..(i + 1) * k].iter().map(|&t| class[t as usize]));
            let len = sig_index.len() as u32;
            next[i] = *sig_index.entry(sig).or_insert(len);
        }
        let count = sig_index.len();
        class = next;
        if count == n_classes {
            break;
        }
        n_classes = count;
    }
    let sink_class = class[m];
    let start_class = class[compact[d.initial as usize] as usize];
    // One representative per class.
    let mut rep: HashMap<u32, usize> = HashMap::new();
    for i in 0..m {
        rep.entry(class[i]).or_insert(i);
    }
    let mut number: HashMap<u32, StateId> = HashMap::new();
    let mut order = vec![start_class];
    number.insert(start_class, 0);
    let mut qi = 0;
    while qi < order.len() {
        let c = order[qi];
        let r = rep[&c];
        for a in 0..k {
            let tc = class[succ[r * k + a] as usize];
            if tc != sink_class && !number.contains_key(&tc) {
                number.insert(tc, order.len() as StateId);
                order.push(tc);
            }
        }
        qi += 1;
    }
    let mut out = Dfa::new(k, order.len(), 0);
    for (id, &c) in order.iter().enumerate() {
        let r = rep[&c];
        out.accepting[id] = is_acc(r);
        for a in 0..k {
            let tc = class[succ[r * k + a] as usize];
            let t = if tc == sink_class { FAIL } else { number[&tc] };
            out.set_transition(id as StateId, a, t);
        }
    }
    out
}

/// Boolean operations on regular languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Not,
    Minus,
}

impl std::str::FromStr for BoolOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "and" => Ok(BoolOp::And),
            "or" => Ok(BoolOp::Or),
            "not" => Ok(BoolOp::Not),
            "minus" => Ok(BoolOp::Minus),
            _ => Err(Error::usage(format!("unknown boolean operation {s:?}"))),
        }
    }
}

/// Product or complement construction, minimised.
pub fn boolean_op(kind: BoolOp, m1: &Dfa, m2: Option<&Dfa>) -> Result<Dfa> {
    if kind == BoolOp::Not {
        if m2.is_some() {
            return Err(Error::usage("complement takes a single automaton"));
        }
        let mut c = m1.completed();
        for a in c.accepting.iter_mut() {
            *a = !*a;
        }
        return Ok(c.minimize());
    }
    let m2 = m2.ok_or_else(|| Error::usage("binary operation needs two automata"))?;
    if m1.num_symbols != m2.num_symbols {
        return Err(Error::usage(format!(
            "alphabet mismatch: {} vs {} symbols",
            m1.num_symbols, m2.num_symbols
        )));
    }
    let pred = |a: bool, b: bool| match kind {
        BoolOp::And => a && b,
        BoolOp::Or => a || b,
        BoolOp::Minus => a && !b,
        BoolOp::Not => unreachable!(),
    };
    Ok(product(m1, m2, pred).minimize())
}

/// Synchronous product over explicit (state-or-FAIL) pairs.
pub fn product(m1: &Dfa, m2: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Dfa {
    let k = m1.num_symbols;
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(m1.initial, m2.initial)];
    index.insert(pairs[0], 0);
    let mut table = Vec::new();
    let mut acc = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        acc.push(accept(m1.is_accepting(p), m2.is_accepting(q)));
        for a in 0..k {
            let t = (m1.target(p, a), m2.target(q, a));
            let id = *index.entry(t).or_insert_with(|| {
                pairs.push(t);
                (pairs.len() - 1) as StateId
            });
            table.push(id);
        }
        i += 1;
    }
    Dfa { num_symbols: k, initial: 0, accepting: acc, table }
}

/// Result of a finiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    Finite(BigUint),
    Infinite,
}

/// Infinite iff some cycle passes through live states; otherwise counts words.
pub fn language_is_finite(d: &Dfa) -> Finiteness {
    let live = d.live();
    if !live[d.initial as usize] {
        return Finiteness::Finite(BigUint::zero());
    }
    // Iterative DFS with colours over live states.
    let n = d.state_count();
    let mut colour = vec![0u8; n];
    let mut post: Vec<StateId> = Vec::new();
    let mut stack: Vec<(StateId, usize)> = vec![(d.initial, 0)];
    colour[d.initial as usize] = 1;
    while let Some(&mut (s, ref mut next)) = stack.last_mut() {
        if *next < d.num_symbols {
            let a = *next;
            *next += 1;
            let t = d.target(s, a);
            if t == FAIL || !live[t as usize] {
                continue;
            }
            match colour[t as usize] {
                0 => {
                    colour[t as usize] = 1;
                    stack.push((t, 0));
                }
                1 => return Finiteness::Infinite,
                _ => {}
            }
        } else {
            colour[s as usize] = 2;
            post.push(s);
            stack.pop();
        }
    }
    // Words accepted from each state, in reverse topological order.
    let mut count = vec![BigUint::zero(); n];
    for &s in &post {
        let mut c = if d.accepting[s as usize] { BigUint::one() } else { BigUint::zero() };
        for &t in d.row(s) {
            if t != FAIL && live[t as usize] {
                c += &count[t as usize];
            }
        }
        count[s as usize] = c;
    }
    Finiteness::Finite(count[d.initial as usize].clone())
}

/// All accepted words of length at most `max_len`, in shortlex order.
pub fn enumerate(d: &Dfa, max_len: usize) -> Vec<Word> {
    let co = d.coreachable();
    let mut out = Vec::new();
    if !co[d.initial as usize] {
        return out;
    }
    let mut layer: Vec<(Word, StateId)> = vec![(Word::empty(), d.initial)];
    for len in 0..=max_len {
        for (w, s) in &layer {
            if d.accepting[*s as usize] {
                out.push(w.clone());
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, s) in &layer {
            for a in 0..d.num_symbols {
                let t = d.target(*s, a);
                if t != FAIL && co[t as usize] {
                    next.push((w.concat(&[a]), t));
                }
            }
        }
        layer = next;
    }
    out
}

/// Rational generating function `numerator / denominator` of a language's
/// length counts, with denominator constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
    pub coefficients: Vec<BigUint>,
}

impl GrowthSeries {
    /// Power-series expansion of `numerator / denominator` to `n` terms.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        let num = |i: usize| self.numerator.get(i).cloned().unwrap_or_default();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = num(i);
            for j in 1..self.denominator.len().min(i + 1) {
                c -= &self.denominator[j] * &out[i - j];
            }
            out.push(c);
        }
        out
    }

    pub fn format_fraction(&self) -> String {
        let num = format_int_poly(&self.numerator);
        if self.denominator.len() <= 1 {
            return num;
        }
        format!("({num}) / ({})", format_int_poly(&self.denominator))
    }
}

/// Exact growth series from the transfer recurrence over live states.
///
/// The length counts obey a linear recurrence of order at most the number of
/// live states; the minimal one is recovered with Berlekamp–Massey over the
/// rationals from twice that many terms.
pub fn growth_series(d: &Dfa, n_terms: usize) -> GrowthSeries {
    let m = d.minimize();
    let n_live = if m.is_empty() { 0 } else { m.state_count() };
    let needed = n_terms.max(2 * n_live + 2);
    let counts = m.count_by_length(needed);
    let seq: Vec<BigRational> =
        counts.iter().map(|c| BigRational::from_integer(BigInt::from(c.clone()))).collect();
    let (conn, len) = berlekamp_massey(&seq);
    // numerator = S(x) C(x) mod x^L
    let s_poly = QPoly::new(seq.clone());
    let num = s_poly.mul(&conn).truncate(len);
    // Already in lowest terms for minimal L; cancel defensively anyway.
    let g = num.gcd(&conn);
    let (num, den) = if g.degree().unwrap_or(0) > 0 {
        (num.div_rem(&g).0, conn.div_rem(&g).0)
    } else {
        (num, conn)
    };
    let c0 = den.coeff(0);
    let num = num.scale(&c0.recip());
    let den = den.scale(&c0.recip());
    debug_assert!(num.is_integral() && den.is_integral());
    let to_ints = |p: &QPoly| -> Vec<BigInt> { p.coeffs().iter().map(|c| c.to_integer()).collect() };
    let series = GrowthSeries {
        numerator: to_ints(&num),
        denominator: to_ints(&den),
        coefficients: counts[..n_terms].to_vec(),
    };
    debug_assert_eq!(
        series.expand(needed),
        counts.iter().map(|c| BigInt::from(c.clone())).collect::<Vec<_>>()
    );
    series
}

/// Minimal connection polynomial `C` (with `C(0) = 1`) and its length `L`.
fn berlekamp_massey(s: &[BigRational]) -> (QPoly, usize) {
    let mut c = QPoly::one();
    let mut b = QPoly::one();
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_disc = BigRational::one();
    for n in 0..s.len() {
        let mut disc = s[n].clone();
        for i in 1..=len {
            disc += c.coeff(i) * &s[n - i];
        }
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &disc / &last_disc;
        let correction = b.mul(&QPoly::monomial(shift)).scale(&factor);
        let t = c.clone();
        c = c.sub(&correction);
        if 2 * len <= n {
            len = n + 1 - len;
            b = t;
            last_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    (c, len)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::words::{all_words_of_length, free_reduce, GeneratorAlphabet};

    /// The F2 acceptor over a < A < b < B: one state per last letter.
    pub(crate) fn free_group_acceptor() -> Dfa {
        let alpha = GeneratorAlphabet::free(&["a", "b"]).unwrap();
        let mut d = Dfa::new(4, 5, 0);
        for s in 0..5 {
            d.set_accepting(s, true);
        }
        for s in 0..5u32 {
            for x in 0..4 {
                let last = if s == 0 { None } else { Some(s as usize - 1) };
                if last != Some(alpha.inverse(x)) {
                    d.set_transition(s, x, x as u32 + 1);
                }
            }
        }
        d
    }

    /// The Z^2 acceptor: a-block (sign coherent) then b-block.
    pub(crate) fn z2_acceptor() -> Dfa {
        // states: 0 start, 1 after a, 2 after A, 3 after b, 4 after B
        let mut d = Dfa::new(4, 5, 0);
        for s in 0..5 {
            d.set_accepting(s, true);
        }
        let (a, ai, b, bi) = (0, 1, 2, 3);
        d.set_transition(0, a, 1);
        d.set_transition(0, ai, 2);
        d.set_transition(0, b, 3);
        d.set_transition(0, bi, 4);
        d.set_transition(1, a, 1);
        d.set_transition(1, b, 3);
        d.set_transition(1, bi, 4);
        d.set_transition(2, ai, 2);
        d.set_transition(2, b, 3);
        d.set_transition(2, bi, 4);
        d.set_transition(3, b, 3);
        d.set_transition(4, bi, 4);
        d
    }

    pub(crate) fn words_up_to(k: usize, max: usize) -> Vec<Word> {
        (0..=max).flat_map(|l| all_words_of_length(k, l)).collect()
    }

    fn same_language_upto(x: &Dfa, y: &Dfa, max: usize) -> bool {
        words_up_to(x.num_symbols(), max).iter().all(|w| x.accepts(w) == y.accepts(w))
    }

    #[test]
    fn acceptance_examples() {
        let alpha = GeneratorAlphabet::free(&["a", "b"]).unwrap();
        let m1 = free_group_acceptor();
        assert!(m1.accepts(&alpha.parse_word("aB").unwrap()));
        assert!(!m1.accepts(&alpha.parse_word("aA").unwrap()));
        assert!(m1.accepts(&[]));
        assert!(!Dfa::empty_language(4).accepts(&[]));
    }

    #[test]
    fn free_group_acceptor_has_six_states() {
        // Duplicate a state and check minimisation folds it back.
        let mut d = free_group_acceptor();
        let extra = d.add_state();
        d.set_accepting(extra, true);
        for x in 0..4 {
            let t = d.target(1, x);
            d.set_transition(extra, x, t);
        }
        d.set_transition(0, 0, extra);
        let m = d.minimize();
        assert_eq!(m.state_count(), 5);
        assert_eq!(m.state_count_with_sink(), 6);
        assert!(same_language_upto(&d, &m, 6));
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn determinize_examples() {
        // words containing symbol 0, over 2 symbols
        let mut n = Nfa::new(2);
        let s0 = n.add_state(false);
        let s1 = n.add_state(true);
        n.add_initial(s0);
        n.add_move(s0, 0, s0);
        n.add_move(s0, 1, s0);
        n.add_move(s0, 0, s1);
        n.add_move(s1, 0, s1);
        n.add_move(s1, 1, s1);
        let d = n.determinize(DEFAULT_STATE_CAP).unwrap();
        assert_eq!(d.minimize().state_count(), 2);
        for w in words_up_to(2, 8) {
            assert_eq!(d.accepts(&w), w.contains(&0));
            assert_eq!(n.accepts(&w), w.contains(&0));
        }
        let det = Nfa::from_dfa(&free_group_acceptor()).determinize(10).unwrap();
        assert!(det.equivalent(&free_group_acceptor()));
        let mut empty = Nfa::new(2);
        let s = empty.add_state(false);
        empty.add_initial(s);
        empty.add_move(s, 0, s);
        assert!(empty.determinize(10).unwrap().is_empty());
    }

    #[test]
    fn determinize_respects_state_cap() {
        // (0|1)* 0 (0|1)^4: 32 subsets
        let mut n = Nfa::new(2);
        let states: Vec<_> = (0..6).map(|i| n.add_state(i == 5)).collect();
        n.add_initial(states[0]);
        n.add_move(states[0], 0, states[0]);
        n.add_move(states[0], 1, states[0]);
        n.add_move(states[0], 0, states[1]);
        for i in 1..5 {
            n.add_move(states[i], 0, states[i + 1]);
            n.add_move(states[i], 1, states[i + 1]);
        }
        let err = n.determinize(8).unwrap_err();
        assert!(matches!(err, Error::Resource { limit: 8, .. }));
        assert_eq!(n.determinize(100).unwrap().minimize().state_count(), 32);
    }

    #[test]
    fn epsilon_moves() {
        let mut n = Nfa::new(2);
        let a = n.add_state(false);
        let b = n.add_state(true);
        n.add_initial(a);
        n.add_epsilon(a, b);
        n.add_move(b, 1, b);
        let d = n.determinize(10).unwrap();
        assert!(d.accepts(&[]));
        assert!(d.accepts(&[1, 1]));
        assert!(!d.accepts(&[0]));
    }

    #[test]
    fn boolean_examples() {
        let m = free_group_acceptor();
        assert!(boolean_op(BoolOp::And, &m, Some(&m)).unwrap().equivalent(&m));
        let not = boolean_op(BoolOp::Not, &m, None).unwrap();
        assert!(boolean_op(BoolOp::Not, &not, None).unwrap().equivalent(&m));
        let all = Dfa::all_words(4);
        let minus = boolean_op(BoolOp::Minus, &all, Some(&m)).unwrap();
        let alpha = GeneratorAlphabet::free(&["a", "b"]).unwrap();
        assert!(minus.accepts(&alpha.parse_word("aA").unwrap()));
        for w in words_up_to(4, 6) {
            assert_eq!(minus.accepts(&w), free_reduce(&w, &alpha) != w);
        }
        assert!(boolean_op(BoolOp::Or, &m, Some(&Dfa::all_words(3))).is_err());
    }

    #[test]
    fn finiteness_examples() {
        assert_eq!(z2_acceptor().language_is_finite(), Finiteness::Infinite);
        assert_eq!(Dfa::empty_language(2).language_is_finite(), Finiteness::Finite(0u32.into()));
        let words: Vec<Word> = vec![Word(vec![]), Word(vec![0]), Word(vec![0, 1]), Word(vec![1])];
        let d = Dfa::from_words(2, &words);
        assert_eq!(d.language_is_finite(), Finiteness::Finite(4u32.into()));
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn growth_examples() {
        let g = free_group_acceptor().growth_series(4);
        assert_eq!(g.numerator, ints(&[1, 1]));
        assert_eq!(g.denominator, ints(&[1, -3]));
        let c: Vec<u64> = g.coefficients.iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(c, vec![1, 4, 12, 36]);
        // BFS oracle: freely reduced words per length
        let alpha = GeneratorAlphabet::free(&["a", "b"]).unwrap();
        for (len, expected) in c.iter().enumerate() {
            let n = all_words_of_length(4, len).iter().filter(|w| free_reduce(w, &alpha) == **w).count();
            assert_eq!(n as u64, *expected);
        }
        let all = Dfa::all_words(2).growth_series(5);
        assert_eq!(all.numerator, ints(&[1]));
        assert_eq!(all.denominator, ints(&[1, -2]));
        let empty = Dfa::empty_language(2).growth_series(3);
        assert!(empty.numerator.is_empty());
        assert_eq!(empty.denominator, ints(&[1]));
        assert_eq!(empty.format_fraction(), "0");
        let z2 = z2_acceptor().growth_series(6);
        assert_eq!(z2.numerator, ints(&[1, 2, 1]));
        assert_eq!(z2.denominator, ints(&[1, -2, 1]));
        assert_eq!(z2.format_fraction(), "(1 + 2x + x^2) / (1 - 2x + x^2)");
        // finite language is a polynomial
        let fin = Dfa::from_words(2, &[Word(vec![]), Word(vec![0, 1]), Word(vec![1, 1])]).growth_series(4);
        assert_eq!(fin.numerator, ints(&[1, 0, 2]));
        assert_eq!(fin.denominator, ints(&[1]));
    }

    #[test]
    fn enumerate_examples() {
        let words = free_group_acceptor().enumerate(1);
        assert_eq!(words.len(), 5);
        assert_eq!(words[0], Word::empty());
        assert_eq!(words[1], Word(vec![0]));
        assert!(Dfa::empty_language(3).enumerate(5).is_empty());
        let z2 = z2_acceptor().enumerate(6);
        for pair in z2.windows(2) {
            assert_eq!(crate::words::shortlex_cmp(&pair[0], &pair[1]), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn prefix_closure() {
        assert!(free_group_acceptor().is_prefix_closed());
        let d = Dfa::from_words(2, &[Word(vec![0, 1])]);
        assert!(!d.is_prefix_closed());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Random DFA over `k` symbols with up to 6 states; `FAIL` allowed.
        pub(crate) fn arb_dfa(k: usize) -> impl Strategy<Value = Dfa> {
            (1usize..=6).prop_flat_map(move |n| {
                (
                    proptest::collection::vec(any::<bool>(), n),
                    proptest::collection::vec(0..=(n as u32), n * k),
                    0..n as u32,
                )
                    .prop_map(move |(acc, tab, init)| {
                        let table = tab.into_iter().map(|t| if t as usize == n { FAIL } else { t }).collect();
                        Dfa::from_parts(k, init, acc, table).unwrap()
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn minimize_preserves_language(d in arb_dfa(2)) {
                let m = d.minimize();
                prop_assert!(same_language_upto(&d, &m, 8));
                prop_assert_eq!(m.minimize(), m.clone());
                prop_assert!(m.state_count() <= d.state_count().max(1));
            }

            #[test]
            fn minimize_is_canonical_on_relabelled_copies(d in arb_dfa(3), perm_seed in any::<u64>()) {
                // Language-equal copy: permute state labels and add an unreachable state.
                let n = d.state_count();
                let mut perm: Vec<u32> = (0..n as u32).collect();
                let mut seed = perm_seed;
                for i in (1..n).rev() {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    perm.swap(i, (seed >> 33) as usize % (i + 1));
                }
                let mut copy = Dfa::new(3, n + 1, perm[d.initial() as usize]);
                for s in 0..n as u32 {
                    copy.set_accepting(perm[s as usize], d.is_accepting(s));
                    for a in 0..3 {
                        let t = d.target(s, a);
                        copy.set_transition(perm[s as usize], a, if t == FAIL { FAIL } else { perm[t as usize] });
                    }
                }
                copy.set_accepting(n as u32, true);
                prop_assert_eq!(d.minimize(), copy.minimize());
            }

            #[test]
            fn boolean_ops_match_set_semantics(x in arb_dfa(2), y in arb_dfa(2)) {
                let and = boolean_op(BoolOp::And, &x, Some(&y)).unwrap();
                let or = boolean_op(BoolOp::Or, &x, Some(&y)).unwrap();
                let minus = boolean_op(BoolOp::Minus, &x, Some(&y)).unwrap();
                let not = boolean_op(BoolOp::Not, &x, None).unwrap();
                for w in words_up_to(2, 8) {
                    let (a, b) = (x.accepts(&w), y.accepts(&w));
                    prop_assert_eq!(and.accepts(&w), a && b);
                    prop_assert_eq!(or.accepts(&w), a || b);
                    prop_assert_eq!(minus.accepts(&w), a && !b);
                    prop_assert_eq!(not.accepts(&w), !a);
                }
                // De Morgan on canonical forms
                let lhs = boolean_op(BoolOp::Not, &and, None).unwrap();
                let nx = boolean_op(BoolOp::Not, &x, None).unwrap();
                let ny = boolean_op(BoolOp::Not, &y, None).unwrap();
                let rhs = boolean_op(BoolOp::Or, &nx, Some(&ny)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn growth_matches_enumeration(d in arb_dfa(2)) {
                let g = d.growth_series(13);
                let words = d.enumerate(12);
                for n in 0..=12 {
                    let count = words.iter().filter(|w| w.len() == n).count();
                    prop_assert_eq!(BigUint::from(count), g.coefficients[n].clone());
                }
                let expanded = g.expand(13);
                let coeffs: Vec<BigInt> = g.coefficients.iter().map(|c| BigInt::from(c.clone())).collect();
                prop_assert_eq!(expanded, coeffs);
                prop_assert_eq!(g.denominator.first().cloned(), Some(BigInt::one()));
            }

            #[test]
            fn finiteness_matches_counting(d in arb_dfa(2)) {
                let m = d.minimize();
                match d.language_is_finite() {
                    Finiteness::Finite(c) => {
                        // no accepted word longer than the state count
                        let long = d.enumerate(m.state_count() + 2);
                        prop_assert_eq!(BigUint::from(long.len()), c);
                    }
                    Finiteness::Infinite => {
                        let n = m.state_count();
                        let long = d.enumerate(2 * n + 1);
                        prop_assert!(long.iter().any(|w| w.len() > n));
                    }
                }
            }

            #[test]
            fn determinize_agrees_with_nfa(d1 in arb_dfa(2), d2 in arb_dfa(2)) {
                // union via an NFA with two initial states
                let mut n = Nfa::new(2);
                let off1 = n.state_count() as u32;
                for s in 0..d1.state_count() { n.add_state(d1.is_accepting(s as u32)); }
                let off2 = n.state_count() as u32;
                for s in 0..d2.state_count() { n.add_state(d2.is_accepting(s as u32)); }
                for (d, off) in [(&d1, off1), (&d2, off2)] {
                    for s in 0..d.state_count() as u32 {
                        for a in 0..2 {
                            let t = d.target(s, a);
                            if t != FAIL { n.add_move(s + off, a, t + off); }
                        }
                    }
                }
                n.add_initial(d1.initial() + off1);
                n.add_initial(d2.initial() + off2);
                let det = n.determinize(DEFAULT_STATE_CAP).unwrap();
                for w in words_up_to(2, 8) {
                    prop_assert_eq!(det.accepts(&w), d1.accepts(&w) || d2.accepts(&w));
                }
            }
        }
    }
}
