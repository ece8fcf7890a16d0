//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every export takes and returns JSON text, so the page needs no glue beyond
//! the generated bindings and the functions run unchanged in native tests.

use std::cell::RefCell;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use agt_core::autostruct::{derive_shortlex_structure, AutLimits, AutomaticStructure, Derivation};
use agt_core::coxeter::CoxeterContext;
use agt_core::fsa::{Dfa, Finiteness};
use agt_core::groupcalc;
use agt_core::io;
use agt_core::rewrite::KbLimits;
use agt_core::{Error, Result};

/// Browser runs get tighter caps than the command line.
const STATE_CAP: usize = 200_000;
const LIST_LIMIT: usize = 60;

thread_local! {
    static CACHE: RefCell<Option<(String, AutomaticStructure)>> = const { RefCell::new(None) };
}

fn limits() -> AutLimits {
    let mut l = AutLimits {
        kb: KbLimits { max_rules: 5000, max_seconds: 20.0, stability_window: Some(500), ..KbLimits::default() },
        state_cap: STATE_CAP,
        ..AutLimits::default()
    };
    l.compose.state_cap = STATE_CAP;
    l
}

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn finiteness(d: &Dfa) -> Value {
    match d.language_is_finite() {
        Finiteness::Finite(n) => json!(n.to_string()),
        Finiteness::Infinite => json!("infinite"),
    }
}

fn counts(d: &Dfa, terms: usize) -> Vec<String> {
    d.count_by_length(terms).iter().map(|c| c.to_string()).collect()
}

/// Shortlex and geodesic acceptors of a Coxeter group given as
/// `{"rank": n, "m": [[...]]}`, with growth data and the first normal forms.
#[wasm_bindgen]
pub fn coxeter_explore(matrix_json: &str, max_len: usize) -> String {
    respond(coxeter_explore_inner(matrix_json, max_len))
}

fn coxeter_explore_inner(matrix_json: &str, max_len: usize) -> Result<Value> {
    let m = io::parse_coxeter(matrix_json)?;
    let alphabet = m.alphabet();
    let ctx = CoxeterContext::new(m);
    let roots = ctx.small_roots(STATE_CAP)?;
    let wa = ctx.shortlex_acceptor(STATE_CAP)?;
    let geo = ctx.geodesic_acceptor(STATE_CAP)?;
    let words: Vec<String> =
        wa.enumerate(max_len).iter().take(LIST_LIMIT).map(|w| alphabet.display_word(w)).collect();
    Ok(json!({
        "rank": ctx.rank(),
        "smallRoots": roots.len(),
        "acceptorStates": wa.state_count(),
        "geodesicStates": geo.state_count(),
        "order": finiteness(&wa),
        "growth": wa.growth_series(max_len + 1).format_fraction(),
        "counts": counts(&wa, max_len + 1),
        "geodesicCounts": counts(&geo, max_len + 1),
        "normalForms": words,
    }))
}

fn with_structure<T>(presentation_json: &str, f: impl FnOnce(&AutomaticStructure) -> Result<T>) -> Result<T> {
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.as_ref().map(|(k, _)| k.as_str()) != Some(presentation_json) {
            let (p, _) = io::parse_presentation(presentation_json)?;
            match derive_shortlex_structure(&p, &limits())? {
                Derivation::Verified(s) => *c = Some((presentation_json.to_string(), *s)),
                Derivation::Abandoned(r) => return Err(Error::Integrity(r.reason)),
            }
        }
        f(&c.as_ref().unwrap().1)
    })
}

/// Derives the automatic structure for a presentation and reduces each
/// whitespace-separated word to its normal form.
#[wasm_bindgen]
pub fn normal_forms(presentation_json: &str, words: &str) -> String {
    respond(normal_forms_inner(presentation_json, words))
}

fn normal_forms_inner(presentation_json: &str, words: &str) -> Result<Value> {
    with_structure(presentation_json, |s| {
        let a = &s.presentation.alphabet;
        let mut forms = Vec::new();
        for w in words.split_whitespace() {
            let nf = groupcalc::normal_form(s, &a.parse_word(w)?)?;
            forms.push(json!({ "word": w, "normalForm": a.display_word(&nf) }));
        }
        Ok(json!({
            "acceptorStates": s.word_acceptor.state_count(),
            "k": s.k,
            "order": finiteness(&s.word_acceptor),
            "growth": groupcalc::growth(s, 12).format_fraction(),
            "forms": forms,
            "transcript": s.transcript,
        }))
    })
}

/// Whether two words name the same group element.
#[wasm_bindgen]
pub fn word_problem(presentation_json: &str, u: &str, v: &str) -> String {
    respond(with_structure(presentation_json, |s| {
        let a = &s.presentation.alphabet;
        Ok(json!({ "equal": groupcalc::word_problem(s, &a.parse_word(u)?, &a.parse_word(v)?)? }))
    }))
}
