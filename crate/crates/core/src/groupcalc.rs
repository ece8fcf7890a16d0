//! Computations in a group given by a verified automatic structure.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;

use crate::autostruct::AutomaticStructure;
use crate::error::{Error, Result};
use crate::fsa::{Dfa, Finiteness, GrowthSeries, StateId};
use crate::words::{invert_word, Symbol, Word};

/// The accepted representative of `w`, found by multiplying in one letter
/// at a time.
pub fn normal_form(s: &AutomaticStructure, w: &[Symbol]) -> Result<Word> {
    let base = s.base();
    let mut cur = Word::empty();
    for &y in w {
        if y >= base {
            return Err(Error::usage(format!("symbol {y} outside the alphabet")));
        }
        cur = multiply(s, &cur, y)?;
    }
    Ok(cur)
}

fn multiply(s: &AutomaticStructure, u: &[Symbol], y: Symbol) -> Result<Word> {
    let mut ps = s.multiplier(Some(y)).partners(u);
    if ps.len() != 1 {
        return Err(Error::Integrity(format!(
            "multiplier for {} gives {} partners for {}",
            s.presentation.alphabet.name(y),
            ps.len(),
            s.presentation.alphabet.display_word(u)
        )));
    }
    Ok(ps.pop().unwrap())
}

pub fn word_problem(s: &AutomaticStructure, u: &[Symbol], v: &[Symbol]) -> Result<bool> {
    Ok(normal_form(s, u)? == normal_form(s, v)?)
}

pub fn group_order(s: &AutomaticStructure) -> Finiteness {
    s.word_acceptor.language_is_finite()
}

/// Growth of the normal-form language by word length.
pub fn growth(s: &AutomaticStructure, n_terms: usize) -> GrowthSeries {
    s.word_acceptor.growth_series(n_terms)
}

pub fn enumerate(s: &AutomaticStructure, max_len: usize) -> Vec<Word> {
    s.word_acceptor.enumerate(max_len)
}

/// Quotient automaton of cone types seen in a finite ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTypes {
    pub automaton: Dfa,
    pub count: usize,
    /// Types were compared only up to this radius.
    pub radius: usize,
    pub depth: usize,
}

/// Ball of radius `r` around the identity: normal forms, word lengths and
/// neighbours by each generator.
struct Ball {
    dist: Vec<usize>,
    // None where the neighbour lies outside the ball
    next: Vec<Vec<Option<usize>>>,
}

fn ball(s: &AutomaticStructure, r: usize) -> Result<Ball> {
    let base = s.base();
    let mut index: HashMap<Word, usize> = HashMap::from([(Word::empty(), 0)]);
    let mut elems = vec![Word::empty()];
    let mut dist = vec![0];
    let mut next: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = vec![None; base];
        for (y, slot) in row.iter_mut().enumerate() {
            let nf = multiply(s, &elems[i].clone(), y)?;
            if let Some(&j) = index.get(&nf) {
                *slot = Some(j);
            } else if dist[i] < r {
                let j = elems.len();
                index.insert(nf.clone(), j);
                elems.push(nf);
                dist.push(dist[i] + 1);
                queue.push_back(j);
                *slot = Some(j);
            }
        }
        next.push(row);
    }
    Ok(Ball { dist, next })
}

/// Cone types approximated in the ball of radius `r`: vertices at distance
/// at most `r - r/2` are grouped by their geodesic continuations of length
/// at most `r/2`.
pub fn cone_types(s: &AutomaticStructure, r: usize) -> Result<ConeTypes> {
    if r < 4 {
        return Err(Error::usage("cone type radius must be at least 4"));
    }
    let h = r / 2;
    let b = ball(s, r)?;
    let base = s.base();
    let continuation = |v: usize| -> BTreeSet<Vec<Symbol>> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(v, Vec::new())];
        while let Some((x, w)) = stack.pop() {
            if w.len() == h {
                continue;
            }
            for y in 0..base {
                match b.next[x][y] {
                    Some(z) if b.dist[z] == b.dist[x] + 1 => {
                        let mut w2 = w.clone();
                        w2.push(y);
                        out.insert(w2.clone());
                        stack.push((z, w2));
                    }
                    _ => {}
                }
            }
        }
        out
    };
    let mut type_of: HashMap<BTreeSet<Vec<Symbol>>, usize> = HashMap::new();
    let mut vertex_type = vec![usize::MAX; b.dist.len()];
    let mut reps: Vec<usize> = Vec::new();
    for v in 0..b.dist.len() {
        if b.dist[v] > r - h {
            continue;
        }
        let c = continuation(v);
        let n = type_of.len();
        let t = *type_of.entry(c).or_insert(n);
        if t == reps.len() {
            reps.push(v);
        }
        vertex_type[v] = t;
    }
    let count = reps.len();
    let mut dfa = Dfa::new(base, count, 0);
    for (t, &v) in reps.iter().enumerate() {
        dfa.set_accepting(t as StateId, true);
        for y in 0..base {
            if let Some(z) = b.next[v][y] {
                if b.dist[z] == b.dist[v] + 1 && vertex_type[z] != usize::MAX {
                    dfa.set_transition(t as StateId, y, vertex_type[z] as StateId);
                }
            }
        }
    }
    Ok(ConeTypes { automaton: dfa, count, radius: r, depth: h })
}

/// `base^(k * total_len)`.
pub fn conjugacy_bound_raw(base: usize, k: usize, total_len: usize) -> BigUint {
    let e = (k * total_len) as u32;
    BigUint::from(base).pow(e)
}

pub fn conjugacy_bound(s: &AutomaticStructure, u: &[Symbol], v: &[Symbol]) -> BigUint {
    conjugacy_bound_raw(s.base(), s.k, u.len() + v.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugacyStatus {
    Conjugate(Word),
    /// The search covered every candidate up to the proven bound.
    NotConjugateWithin(usize),
    Unknown(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyAnswer {
    pub status: ConjugacyStatus,
    pub searched_bound: usize,
}

/// Tries every normal form `g` with `|g| <= max_len` in shortlex order for
/// `g^-1 u g = v`.
pub fn conjugacy_search(s: &AutomaticStructure, u: &[Symbol], v: &[Symbol], max_len: usize) -> Result<ConjugacyAnswer> {
    let a = &s.presentation.alphabet;
    let target = normal_form(s, v)?;
    for g in s.word_acceptor.enumerate(max_len) {
        let w = invert_word(&g, a).concat(u).concat(&g);
        if normal_form(s, &w)? == target {
            debug_assert!(word_problem(s, &w, v)?);
            return Ok(ConjugacyAnswer { status: ConjugacyStatus::Conjugate(g), searched_bound: max_len });
        }
    }
    let bound = conjugacy_bound(s, u, v);
    let complete = bound <= BigUint::from(max_len);
    let status = if complete { ConjugacyStatus::NotConjugateWithin(max_len) } else { ConjugacyStatus::Unknown(max_len) };
    Ok(ConjugacyAnswer { status, searched_bound: max_len })
}
