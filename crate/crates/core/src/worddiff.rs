//! Word differences and the machine that recognises fellow travelling.
//!
//! For a pair `(u, v)` read in step, the difference after `i` symbols is
//! `u(i)^-1 v(i)`, stored as a reduced word. Reading `(a, b)` from `d` leads
//! to `reduce(a^-1 d b)`, with `$` acting as the identity.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fsa::{StateId, FAIL};
use crate::pairfsa::{decode_symbol, encode_pair, pair_alphabet_size, Padded};
use crate::rewrite::RewriteSystem;
use crate::words::{invert_word, GeneratorAlphabet, Symbol, Word};

pub const DEFAULT_DIFF_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordDifferenceMachine {
    alphabet: GeneratorAlphabet,
    states: Vec<Word>,
    index: HashMap<Word, StateId>,
    // states x pair symbols
    table: Vec<StateId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FellowTravel {
    AcceptedAt(StateId),
    /// Number of pair symbols read before the run left the machine.
    Rejected(usize),
}

fn step_word(reducer: &RewriteSystem, d: &[Symbol], a: Padded, b: Padded) -> Word {
    let alpha = reducer.alphabet();
    let mut w = Vec::with_capacity(d.len() + 2);
    if let Some(a) = a {
        w.push(alpha.inverse(a));
    }
    w.extend_from_slice(d);
    if let Some(b) = b {
        w.push(b);
    }
    reducer.reduce(&w)
}

impl WordDifferenceMachine {
    /// Machine from the rules of `reducer`.
    pub fn from_rules(reducer: &RewriteSystem) -> Result<Self> {
        let pairs: Vec<(Word, Word)> = reducer.rules().iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
        Self::accumulate(reducer, &pairs, &[], DEFAULT_DIFF_CAP)
    }

    /// Collects the differences along every pair in `pairs`, adds `extra`
    /// states and closes under inversion; transitions are then all moves
    /// `d -> reduce(a^-1 d b)` that land on a state.
    pub fn accumulate(
        reducer: &RewriteSystem,
        pairs: &[(Word, Word)],
        extra: &[Word],
        cap: usize,
    ) -> Result<Self> {
        let alphabet = reducer.alphabet().clone();
        let base = alphabet.len();
        let mut m = Self { alphabet, states: Vec::new(), index: HashMap::new(), table: Vec::new() };
        m.intern(Word::empty());
        for w in extra {
            m.intern(reducer.reduce(w));
        }
        for (p, q) in pairs {
            let mut d = Word::empty();
            for s in encode_pair(base, p, q) {
                let (a, b) = decode_symbol(base, s);
                d = step_word(reducer, &d, a, b);
                m.intern(d.clone());
            }
            if m.states.len() > cap {
                return Err(Error::resource("word differences", cap));
            }
        }
        let mut i = 0;
        while i < m.states.len() {
            let inv = reducer.reduce(&invert_word(&m.states[i], &m.alphabet));
            m.intern(inv);
            if m.states.len() > cap {
                return Err(Error::resource("word differences", cap));
            }
            i += 1;
        }
        let k = pair_alphabet_size(base);
        m.table = vec![FAIL; m.states.len() * k];
        for (si, d) in m.states.iter().enumerate() {
            for s in 0..k {
                let (a, b) = decode_symbol(base, s);
                let t = step_word(reducer, d, a, b);
                if let Some(&ti) = m.index.get(&t) {
                    m.table[si * k + s] = ti;
                }
            }
        }
        Ok(m)
    }

    fn intern(&mut self, w: Word) -> StateId {
        if let Some(&s) = self.index.get(&w) {
            return s;
        }
        let s = self.states.len() as StateId;
        self.index.insert(w.clone(), s);
        self.states.push(w);
        s
    }

    /// Assembles a machine from explicit parts (used when loading a bundle).
    pub fn from_parts(alphabet: GeneratorAlphabet, states: Vec<Word>, table: Vec<StateId>) -> Result<Self> {
        let k = pair_alphabet_size(alphabet.len());
        if states.first().is_none_or(|w| !w.is_empty()) {
            return Err(Error::usage("first word difference must be the empty word"));
        }
        if table.len() != states.len() * k {
            return Err(Error::usage("word difference table has the wrong size"));
        }
        if table.iter().any(|&t| t != FAIL && t as usize >= states.len()) {
            return Err(Error::usage("word difference transition out of range"));
        }
        let mut index = HashMap::new();
        for (i, w) in states.iter().enumerate() {
            if index.insert(w.clone(), i as StateId).is_some() {
                return Err(Error::usage("duplicate word difference"));
            }
        }
        Ok(Self { alphabet, states, index, table })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn base(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn table(&self) -> &[StateId] {
        &self.table
    }

    /// The state of `ε`.
    pub fn initial(&self) -> StateId {
        0
    }

    pub fn state_of(&self, w: &[Symbol]) -> Option<StateId> {
        self.index.get(w).copied()
    }

    pub fn word(&self, s: StateId) -> &Word {
        &self.states[s as usize]
    }

    pub fn target(&self, s: StateId, pair_sym: Symbol) -> StateId {
        if s == FAIL {
            return FAIL;
        }
        self.table[s as usize * pair_alphabet_size(self.base()) + pair_sym]
    }

    pub fn fellow_travel(&self, u: &[Symbol], v: &[Symbol]) -> FellowTravel {
        let mut s = self.initial();
        for (i, sym) in encode_pair(self.base(), u, v).into_iter().enumerate() {
            s = self.target(s, sym);
            if s == FAIL {
                return FellowTravel::Rejected(i);
            }
        }
        FellowTravel::AcceptedAt(s)
    }

    /// Longest difference, the reported fellow-traveller constant.
    pub fn max_difference_length(&self) -> usize {
        self.states.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// One line per state then one `from symbol to` triple per transition.
    pub fn dump(&self) -> String {
        let a = &self.alphabet;
        let base = self.base();
        let mut out = String::new();
        for (i, w) in self.states.iter().enumerate() {
            out.push_str(&format!("{i} {}\n", a.display_word(w)));
        }
        let k = pair_alphabet_size(base);
        for s in 0..self.states.len() {
            for sym in 0..k {
                let t = self.table[s * k + sym];
                if t != FAIL {
                    let (x, y) = decode_symbol(base, sym);
                    let name = |p: Padded| p.map_or("$".to_string(), |p| a.name(p).to_string());
                    out.push_str(&format!("{s} ({},{}) {t}\n", name(x), name(y)));
                }
            }
        }
        out
    }
}
