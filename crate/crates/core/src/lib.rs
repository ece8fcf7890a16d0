//! Shortlex automatic structures for finitely presented groups, Knuth–Bendix
//! completion over strings, and Coxeter group word acceptors built from root
//! system dominance.

pub mod autostruct;
pub mod coxeter;
pub mod cyclotomic;
pub mod error;
pub mod fsa;
pub mod groupcalc;
pub mod io;
pub mod pairfsa;
pub mod poly;
pub mod rewrite;
pub mod words;
pub mod worddiff;

pub use error::{Error, Result};
