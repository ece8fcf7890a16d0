//! Shortlex-compatible string rewriting and Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::words::{free_reduce, invert_word, shortlex_cmp, GeneratorAlphabet, Symbol, Word};

/// A group presentation `<X | R>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: GeneratorAlphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Freely reduces the relators and drops those that become empty,
    /// returning the warnings produced.
    pub fn new(alphabet: GeneratorAlphabet, relators: Vec<Word>) -> (Self, Vec<String>) {
        let mut warnings = Vec::new();
        let mut kept = Vec::new();
        for (i, r) in relators.into_iter().enumerate() {
            if r.iter().any(|&s| s >= alphabet.len()) {
                warnings.push(format!("relator {i} has symbols outside the alphabet; ignored"));
                continue;
            }
            let red = free_reduce(&r, &alphabet);
            if red.is_empty() {
                warnings.push(format!("relator {i} is freely trivial; ignored"));
            } else {
                kept.push(red);
            }
        }
        (Self { alphabet, relators: kept }, warnings)
    }

    /// Coxeter presentation: involutive generators and `(x_i x_j)^{m_ij}`.
    /// `m[i][j] == 0` means no relation.
    pub fn coxeter(m: &[Vec<u32>]) -> Self {
        let n = m.len();
        let alphabet = GeneratorAlphabet::involutions(n);
        let mut relators = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mij = m[i][j] as usize;
                if mij >= 2 {
                    relators.push((0..mij).flat_map(|_| [i, j]).collect());
                }
            }
        }
        Self::new(alphabet, relators).0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Word,
}

impl RewriteRule {
    /// Orients an equation so that the shortlex-larger side is the lhs;
    /// `None` if both sides are equal.
    pub fn oriented(a: Word, b: Word) -> Option<Self> {
        match shortlex_cmp(&a, &b) {
            Ordering::Greater => Some(Self { lhs: a, rhs: b }),
            Ordering::Less => Some(Self { lhs: b, rhs: a }),
            Ordering::Equal => None,
        }
    }
}

#[cfg(not(target_arch = "wasm32"))]
struct Clock(std::time::Instant);

#[cfg(not(target_arch = "wasm32"))]
impl Clock {
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }

    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(target_arch = "wasm32")]
struct Clock;

#[cfg(target_arch = "wasm32")]
impl Clock {
    fn start() -> Self {
        Clock
    }

    fn seconds(&self) -> f64 {
        0.0
    }
}

/// Limits for [`RewriteSystem::knuth_bendix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KbLimits {
    pub max_rules: usize,
    pub max_lhs_len: usize,
    pub max_rhs_len: usize,
    /// Wall-clock budget. Not enforced on wasm32, which has no clock.
    pub max_seconds: f64,
    /// Pause after this many processed critical pairs without a novel rule
    /// (as judged by the observer). `None` disables pausing.
    pub stability_window: Option<usize>,
}

impl Default for KbLimits {
    fn default() -> Self {
        Self {
            max_rules: 10_000,
            max_lhs_len: 50,
            max_rhs_len: 50,
            max_seconds: 600.0,
            stability_window: None,
        }
    }
}

/// How a completion run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KbOutcome {
    /// No unresolved critical pairs; the system is confluent.
    Complete,
    /// The stability heuristic paused the run; it may be resumed.
    Paused,
    /// A limit stopped the run; names the limit.
    LimitHit(String),
}

/// Told about every rule completion adds.
pub trait KbObserver {
    /// Returns true if the rule brought new information (resets the stability count).
    fn rule_added(&mut self, system: &RewriteSystem, rule: &RewriteRule) -> bool;
}

impl<F: FnMut(&RewriteSystem, &RewriteRule) -> bool> KbObserver for F {
    fn rule_added(&mut self, system: &RewriteSystem, rule: &RewriteRule) -> bool {
        self(system, rule)
    }
}

struct NoObserver;

impl KbObserver for NoObserver {
    fn rule_added(&mut self, _: &RewriteSystem, _: &RewriteRule) -> bool {
        true
    }
}

const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct TrieNode {
    children: Vec<u32>,
    rule: Option<u32>,
}

/// Prefix tree over the left-hand sides of the active rules.
#[derive(Debug, Clone)]
struct LhsIndex {
    k: usize,
    nodes: Vec<TrieNode>,
}

impl LhsIndex {
    fn new(k: usize) -> Self {
        Self { k, nodes: vec![TrieNode { children: vec![NO_CHILD; k], rule: None }] }
    }

    fn insert(&mut self, lhs: &[Symbol], id: u32) {
        let mut n = 0usize;
        for &a in lhs {
            let c = self.nodes[n].children[a];
            n = if c == NO_CHILD {
                self.nodes.push(TrieNode { children: vec![NO_CHILD; self.k], rule: None });
                let id = (self.nodes.len() - 1) as u32;
                self.nodes[n].children[a] = id;
                id as usize
            } else {
                c as usize
            };
        }
        let slot = &mut self.nodes[n].rule;
        *slot = Some(slot.map_or(id, |old| old.min(id)));
    }

    fn remove(&mut self, lhs: &[Symbol], id: u32) {
        let mut n = 0usize;
        for &a in lhs {
            let c = self.nodes[n].children[a];
            if c == NO_CHILD {
                return;
            }
            n = c as usize;
        }
        if self.nodes[n].rule == Some(id) {
            self.nodes[n].rule = None;
        }
    }

    /// Lowest-indexed rule whose lhs is a prefix of `w`.
    fn match_at(&self, w: &[Symbol]) -> Option<u32> {
        let mut n = 0usize;
        let mut best: Option<u32> = None;
        for &a in w {
            let c = self.nodes[n].children[a];
            if c == NO_CHILD {
                break;
            }
            n = c as usize;
            if let Some(r) = self.nodes[n].rule {
                best = Some(best.map_or(r, |b| b.min(r)));
            }
        }
        best
    }
}

/// Ordered shortlex rewriting rules with an lhs index and resumable
/// completion state.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    alphabet: GeneratorAlphabet,
    rules: Vec<RewriteRule>,
    active: Vec<bool>,
    index: LhsIndex,
    max_lhs: usize,
    confluent: bool,
    // completion state
    pending: VecDeque<(Word, Word)>,
    cursor: (usize, usize),
    discarded: Option<String>,
    processed_pairs: usize,
}

impl RewriteSystem {
    pub fn new(alphabet: GeneratorAlphabet) -> Self {
        let k = alphabet.len();
        Self {
            alphabet,
            rules: Vec::new(),
            active: Vec::new(),
            index: LhsIndex::new(k),
            max_lhs: 0,
            confluent: false,
            pending: VecDeque::new(),
            cursor: (0, 0),
            discarded: None,
            processed_pairs: 0,
        }
    }

    /// Inverse-cancellation rules plus one oriented rule per relator.
    ///
    /// A relator `r` of length `n` is split as `r = u v^-1` with
    /// `|u| = ceil(n/2)`; the pair is oriented by shortlex. When the halves
    /// coincide the rule `r -> ε` is used instead.
    pub fn from_presentation(p: &Presentation) -> Result<Self> {
        let a = &p.alphabet;
        let mut sys = Self::new(a.clone());
        for x in 0..a.len() {
            let inv = a.inverse(x);
            sys.push_rule_unchecked(RewriteRule { lhs: Word(vec![x, inv]), rhs: Word::empty() });
        }
        for r in &p.relators {
            let h = r.len().div_ceil(2);
            let u = Word::from_slice(&r[..h]);
            let v = invert_word(&r[h..], a);
            let rule = RewriteRule::oriented(u, v)
                .unwrap_or_else(|| RewriteRule { lhs: r.clone(), rhs: Word::empty() });
            sys.push_rule_unchecked(rule);
        }
        for r in &p.relators {
            if !sys.encodes_relator(r) {
                return Err(Error::Integrity(format!(
                    "relator {} is not a cyclic conjugate of any rule",
                    a.format_word(r)
                )));
            }
        }
        sys.interreduce_all();
        Ok(sys)
    }

    /// Some rule `u -> v` has `u v^-1` (freely and cyclically reduced) equal
    /// to a cyclic conjugate of `r` or `r^-1`.
    pub fn encodes_relator(&self, r: &[Symbol]) -> bool {
        let a = &self.alphabet;
        let target = crate::words::cyclic_reduce(r, a);
        let target_inv = invert_word(&target, a);
        let rotations = |w: &[Symbol]| -> Vec<Word> {
            (0..w.len().max(1)).map(|i| Word([&w[i..], &w[..i]].concat())).collect()
        };
        let rots: Vec<Word> = rotations(&target).into_iter().chain(rotations(&target_inv)).collect();
        self.rules.iter().any(|rule| {
            let prod = rule.lhs.concat(&invert_word(&rule.rhs, a));
            let c = crate::words::cyclic_reduce(&prod, a);
            rots.contains(&c)
        })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    /// The active rules in index order.
    pub fn rules(&self) -> Vec<&RewriteRule> {
        self.rules.iter().zip(&self.active).filter(|(_, a)| **a).map(|(r, _)| r).collect()
    }

    pub fn rule_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    /// Critical pairs processed by completion so far.
    pub fn processed_pairs(&self) -> usize {
        self.processed_pairs
    }

    fn push_rule_unchecked(&mut self, rule: RewriteRule) -> u32 {
        let id = self.rules.len() as u32;
        self.index.insert(&rule.lhs, id);
        self.max_lhs = self.max_lhs.max(rule.lhs.len());
        self.rules.push(rule);
        self.active.push(true);
        self.confluent = false;
        id
    }

    fn deactivate(&mut self, id: usize) {
        self.active[id] = false;
        let lhs = self.rules[id].lhs.clone();
        self.index.remove(&lhs, id as u32);
        // another active rule with an identical lhs takes over the slot
        for (j, r) in self.rules.iter().enumerate() {
            if self.active[j] && r.lhs == lhs {
                self.index.insert(&lhs, j as u32);
            }
        }
    }

    /// Leftmost match, lowest rule index among matches at that position.
    fn find_match(&self, w: &[Symbol], from: usize) -> Option<(usize, u32)> {
        (from..w.len()).find_map(|i| self.index.match_at(&w[i..]).map(|r| (i, r)))
    }

    pub fn is_reducible(&self, w: &[Symbol]) -> bool {
        self.find_match(w, 0).is_some()
    }

    /// Rewrites until irreducible, always at the leftmost match.
    pub fn reduce(&self, w: &[Symbol]) -> Word {
        let mut cur = w.to_vec();
        let mut from = 0;
        while let Some((i, rid)) = self.find_match(&cur, from) {
            let rule = &self.rules[rid as usize];
            cur.splice(i..i + rule.lhs.len(), rule.rhs.iter().copied());
            from = i.saturating_sub(self.max_lhs.saturating_sub(1));
        }
        Word(cur)
    }

    /// Removes rules whose lhs is reducible by another rule (re-queuing them
    /// as equations) and re-reduces right-hand sides.
    fn interreduce_all(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.rules.len() {
                if !self.active[i] {
                    continue;
                }
                let lhs = self.rules[i].lhs.clone();
                let reducible_by_other = (0..lhs.len()).any(|s| {
                    let mut n = 0usize;
                    for (off, &a) in lhs[s..].iter().enumerate() {
                        let c = self.index.nodes[n].children[a];
                        if c == NO_CHILD {
                            return false;
                        }
                        n = c as usize;
                        if let Some(r) = self.index.nodes[n].rule {
                            if r as usize != i || s != 0 || s + off + 1 != lhs.len() {
                                return true;
                            }
                        }
                    }
                    false
                });
                if reducible_by_other {
                    let rule = self.rules[i].clone();
                    self.deactivate(i);
                    self.pending.push_back((rule.lhs, rule.rhs));
                    changed = true;
                }
            }
            for i in 0..self.rules.len() {
                if self.active[i] {
                    let r = self.reduce(&self.rules[i].rhs);
                    self.rules[i].rhs = r;
                }
            }
            if !changed {
                break;
            }
            self.drain_pending_unbounded();
        }
    }

    fn drain_pending_unbounded(&mut self) {
        while let Some((a, b)) = self.pending.pop_front() {
            let (a, b) = (self.reduce(&a), self.reduce(&b));
            if let Some(rule) = RewriteRule::oriented(a, b) {
                self.add_rule_interreducing(rule);
            }
        }
    }

    /// Adds a rule and removes rules made redundant by it.
    fn add_rule_interreducing(&mut self, rule: RewriteRule) -> u32 {
        let new_lhs = rule.lhs.clone();
        let id = self.push_rule_unchecked(rule);
        for j in 0..self.rules.len() {
            if j == id as usize || !self.active[j] {
                continue;
            }
            if contains(&self.rules[j].lhs, &new_lhs) {
                let old = self.rules[j].clone();
                self.deactivate(j);
                self.pending.push_back((old.lhs, old.rhs));
            } else if contains(&self.rules[j].rhs, &new_lhs) {
                let r = self.reduce(&self.rules[j].rhs);
                self.rules[j].rhs = r;
            }
        }
        id
    }

    /// Adds the equation `a = b` as a new rule (after reduction), the way
    /// completion would. Returns false if it reduces to a trivial identity.
    pub fn add_equation(&mut self, a: &[Symbol], b: &[Symbol]) -> bool {
        let (a, b) = (self.reduce(a), self.reduce(b));
        match RewriteRule::oriented(a, b) {
            Some(rule) => {
                self.add_rule_interreducing(rule);
                self.drain_pending_unbounded();
                true
            }
            None => false,
        }
    }

    /// Superposition words of rules `i` and `j` as pairs of one-step reducts.
    fn overlaps(&self, i: usize, j: usize) -> Vec<(Word, Word)> {
        let (l1, r1) = (&self.rules[i].lhs, &self.rules[i].rhs);
        let (l2, r2) = (&self.rules[j].lhs, &self.rules[j].rhs);
        let mut out = Vec::new();
        // proper overlap: suffix of l1 == prefix of l2
        for k in 1..l1.len().min(l2.len()) {
            if l1[l1.len() - k..] == l2[..k] {
                let left = r1.concat(&l2[k..]);
                let right = Word::from_slice(&l1[..l1.len() - k]).concat(r2);
                out.push((left, right));
            }
        }
        // containment: l2 inside l1
        if i != j && l2.len() <= l1.len() {
            for p in 0..=(l1.len() - l2.len()) {
                if l1[p..p + l2.len()] == l2[..] {
                    let right = Word::from_slice(&l1[..p]).concat(r2).concat(&l1[p + l2.len()..]);
                    out.push((r1.clone(), right));
                }
            }
        }
        out
    }

    /// Unresolved critical pairs of the active rules (both sides reduced).
    pub fn critical_pairs(&self) -> Vec<(Word, Word)> {
        let ids: Vec<usize> = (0..self.rules.len()).filter(|&i| self.active[i]).collect();
        let mut out = Vec::new();
        for &i in &ids {
            for &j in &ids {
                for (a, b) in self.overlaps(i, j) {
                    let (a, b) = (self.reduce(&a), self.reduce(&b));
                    if a != b {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Runs completion with no observer.
    pub fn knuth_bendix(&mut self, limits: &KbLimits) -> KbOutcome {
        self.knuth_bendix_observed(limits, &mut NoObserver)
    }

    /// Processes critical pairs in FIFO order, adding unresolved ones as
    /// shortlex-oriented rules. Resumable: a later call continues where this
    /// one stopped.
    pub fn knuth_bendix_observed(&mut self, limits: &KbLimits, observer: &mut dyn KbObserver) -> KbOutcome {
        let start = Clock::start();
        let mut quiet = 0usize;
        loop {
            // Resolve queued equations first.
            while let Some((a, b)) = self.pending.pop_front() {
                self.processed_pairs += 1;
                quiet += 1;
                let (a, b) = (self.reduce(&a), self.reduce(&b));
                let Some(rule) = RewriteRule::oriented(a, b) else { continue };
                if rule.lhs.len() > limits.max_lhs_len {
                    self.discarded = Some("maxLhsLen".into());
                    continue;
                }
                if rule.rhs.len() > limits.max_rhs_len {
                    self.discarded = Some("maxRhsLen".into());
                    continue;
                }
                if self.rule_count() >= limits.max_rules {
                    self.pending.push_front((rule.lhs, rule.rhs));
                    return KbOutcome::LimitHit("maxRules".into());
                }
                let id = self.add_rule_interreducing(rule);
                let added = self.rules[id as usize].clone();
                if observer.rule_added(self, &added) {
                    quiet = 0;
                }
            }
            if start.seconds() > limits.max_seconds {
                return KbOutcome::LimitHit("maxSeconds".into());
            }
            if let Some(w) = limits.stability_window {
                if quiet >= w {
                    return KbOutcome::Paused;
                }
            }
            // Next rule pair (i, j) with j <= i.
            let (i, j) = self.cursor;
            if i >= self.rules.len() {
                return match &self.discarded {
                    Some(which) => KbOutcome::LimitHit(which.clone()),
                    None => {
                        self.confluent = true;
                        KbOutcome::Complete
                    }
                };
            }
            self.cursor = if j >= i { (i + 1, 0) } else { (i, j + 1) };
            if !self.active[i] || !self.active[j] {
                continue;
            }
            self.pending.extend(self.overlaps(i, j));
            if i != j {
                self.pending.extend(self.overlaps(j, i));
            }
        }
    }

    /// One `lhs -> rhs` line per active rule.
    pub fn dump(&self) -> String {
        let a = &self.alphabet;
        self.rules()
            .iter()
            .map(|r| format!("{} -> {}\n", a.display_word(&r.lhs), a.display_word(&r.rhs)))
            .collect()
    }

    /// Parses the [`dump`](Self::dump) format into a system (no completion state).
    pub fn parse_dump(alphabet: GeneratorAlphabet, text: &str) -> Result<Self> {
        let mut sys = Self::new(alphabet);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (l, r) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(format!("line {}", n + 1), "expected `lhs -> rhs`"))?;
            let lhs = sys.alphabet.parse_word(l).map_err(|e| Error::parse(format!("line {}", n + 1), e.to_string()))?;
            let rhs = sys.alphabet.parse_word(r).map_err(|e| Error::parse(format!("line {}", n + 1), e.to_string()))?;
            if shortlex_cmp(&rhs, &lhs) != Ordering::Less {
                return Err(Error::parse(format!("line {}", n + 1), "rule is not shortlex-decreasing"));
            }
            sys.push_rule_unchecked(RewriteRule { lhs, rhs });
        }
        sys.cursor = (0, 0);
        Ok(sys)
    }
}

fn contains(hay: &[Symbol], needle: &[Symbol]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}
