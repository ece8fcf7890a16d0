//! JSON formats for presentations, Coxeter matrices, automata, word
//! difference machines and structure bundles.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::autostruct::AutomaticStructure;
use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::fsa::{Dfa, StateId, FAIL};
use crate::pairfsa::{pair_alphabet_size, PairDfa};
use crate::rewrite::Presentation;
use crate::worddiff::WordDifferenceMachine;
use crate::words::{default_inverse_name, GeneratorAlphabet, Word};

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::parse(format!("{what} line {} column {}", e.line(), e.column()), e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationJson {
    generators: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    inverses: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    involutions: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
}

/// Parses the presentation schema. Relators may be written `lhs=rhs`.
/// Returns the presentation and any warnings (dropped relators).
pub fn parse_presentation(text: &str) -> Result<(Presentation, Vec<String>)> {
    let pj: PresentationJson = serde_json::from_str(text).map_err(|e| json_err("presentation", e))?;
    let mut pairs: Vec<(String, Option<String>)> = Vec::new();
    for g in &pj.generators {
        let inv = if pj.involutions.contains(g) {
            if pj.inverses.get(g).is_some_and(|h| h != g) {
                return Err(Error::parse("inverses", format!("{g:?} is declared an involution but has inverse {:?}", pj.inverses[g])));
            }
            None
        } else {
            Some(pj.inverses.get(g).cloned().unwrap_or_else(|| default_inverse_name(g)))
        };
        pairs.push((g.clone(), inv));
    }
    for name in pj.involutions.iter().chain(pj.inverses.keys()) {
        if !pj.generators.contains(name) {
            return Err(Error::parse("generators", format!("{name:?} is not a listed generator")));
        }
    }
    let alphabet = GeneratorAlphabet::from_pairs(&pairs).map_err(|e| Error::parse("generators", e.to_string()))?;
    let mut relators = Vec::new();
    for (i, r) in pj.relators.iter().enumerate() {
        let loc = format!("relators[{i}]");
        let word = |s: &str| alphabet.parse_word(s).map_err(|e| Error::parse(loc.clone(), e.to_string()));
        let w = match r.split_once('=') {
            Some((l, rhs)) => word(l)?.concat(&alphabet.invert(&word(rhs)?)),
            None => word(r)?,
        };
        relators.push(w);
    }
    Ok(Presentation::new(alphabet, relators))
}

pub fn presentation_to_json(p: &Presentation) -> String {
    let a = &p.alphabet;
    let mut pj = PresentationJson {
        generators: Vec::new(),
        inverses: BTreeMap::new(),
        involutions: Vec::new(),
        relators: p.relators.iter().map(|r| a.format_word(r)).collect(),
    };
    for s in 0..a.len() {
        let inv = a.inverse(s);
        if inv == s {
            pj.generators.push(a.name(s).to_string());
            pj.involutions.push(a.name(s).to_string());
        } else if s < inv {
            pj.generators.push(a.name(s).to_string());
            pj.inverses.insert(a.name(s).to_string(), a.name(inv).to_string());
        }
    }
    serde_json::to_string_pretty(&pj).expect("presentation serialises") + "\n"
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoxeterJson {
    rank: usize,
    m: Vec<Vec<u32>>,
}

pub fn parse_coxeter(text: &str) -> Result<CoxeterMatrix> {
    let cj: CoxeterJson = serde_json::from_str(text).map_err(|e| json_err("Coxeter matrix", e))?;
    if cj.m.len() != cj.rank {
        return Err(Error::parse("m", format!("rank {} but {} rows", cj.rank, cj.m.len())));
    }
    CoxeterMatrix::new(cj.m).map_err(|e| Error::parse("m", e.to_string()))
}

pub fn coxeter_to_json(m: &CoxeterMatrix) -> String {
    let rows: Vec<String> = m.entries().iter().map(|r| serde_json::to_string(r).unwrap()).collect();
    format!("{{\n  \"rank\": {},\n  \"m\": [\n    {}\n  ]\n}}\n", m.rank(), rows.join(",\n    "))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AutomatonJson {
    alphabet: Vec<String>,
    #[serde(default)]
    pair_alphabet: bool,
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<Vec<i64>>,
}

/// An automaton read from JSON with its symbol names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedAutomaton {
    pub alphabet: Vec<String>,
    pub pair: bool,
    pub dfa: Dfa,
}

fn rows_json(table: &[StateId], cols: usize) -> String {
    if cols == 0 {
        return String::new();
    }
    table
        .chunks(cols)
        .map(|row| {
            let cells: Vec<String> =
                row.iter().map(|&t| if t == FAIL { "-1".to_string() } else { t.to_string() }).collect();
            format!("[{}]", cells.join(","))
        })
        .collect::<Vec<_>>()
        .join(",\n    ")
}

fn automaton_json(names: &[String], pair: bool, d: &Dfa) -> String {
    let table: Vec<StateId> = (0..d.state_count() as StateId).flat_map(|s| d.row(s).to_vec()).collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"alphabet\": {},\n", serde_json::to_string(names).unwrap()));
    if pair {
        out.push_str("  \"pairAlphabet\": true,\n");
    }
    out.push_str(&format!("  \"states\": {},\n", d.state_count()));
    out.push_str(&format!("  \"initial\": {},\n", d.initial()));
    out.push_str(&format!("  \"accepting\": {},\n", serde_json::to_string(&d.accepting_states()).unwrap()));
    out.push_str(&format!("  \"transitions\": [\n    {}\n  ]\n}}\n", rows_json(&table, d.num_symbols())));
    out
}

pub fn dfa_to_json(d: &Dfa, alphabet: &[String]) -> String {
    automaton_json(alphabet, false, d)
}

pub fn pair_dfa_to_json(p: &PairDfa, base_alphabet: &[String]) -> String {
    automaton_json(base_alphabet, true, p.dfa())
}

pub fn parse_automaton(text: &str) -> Result<LoadedAutomaton> {
    let aj: AutomatonJson = serde_json::from_str(text).map_err(|e| json_err("automaton", e))?;
    let cols = if aj.pair_alphabet { pair_alphabet_size(aj.alphabet.len()) } else { aj.alphabet.len() };
    if aj.transitions.len() != aj.states {
        return Err(Error::parse("transitions", format!("{} rows for {} states", aj.transitions.len(), aj.states)));
    }
    let mut table = Vec::with_capacity(aj.states * cols);
    for (i, row) in aj.transitions.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::parse(format!("transitions[{i}]"), format!("{} entries, expected {cols}", row.len())));
        }
        for &t in row {
            table.push(match t {
                -1 => FAIL,
                t if t >= 0 && (t as usize) < aj.states => t as StateId,
                t => return Err(Error::parse(format!("transitions[{i}]"), format!("target {t} out of range"))),
            });
        }
    }
    let mut accepting = vec![false; aj.states];
    for &s in &aj.accepting {
        *accepting
            .get_mut(s)
            .ok_or_else(|| Error::parse("accepting", format!("state {s} out of range")))? = true;
    }
    let dfa = Dfa::from_parts(cols, aj.initial as StateId, accepting, table)
        .map_err(|e| Error::parse("automaton", e.to_string()))?;
    Ok(LoadedAutomaton { alphabet: aj.alphabet, pair: aj.pair_alphabet, dfa })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffJson {
    alphabet: Vec<String>,
    k: usize,
    verified: bool,
    states: Vec<String>,
    transitions: Vec<Vec<i64>>,
}

/// The difference machine plus the structure's `k` and verification flag.
pub fn diff_to_json(d: &WordDifferenceMachine, k: usize, verified: bool) -> String {
    let a = d.alphabet();
    let words: Vec<String> = d.states().iter().map(|w| a.format_word(w)).collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"alphabet\": {},\n", serde_json::to_string(a.names()).unwrap()));
    out.push_str(&format!("  \"k\": {k},\n  \"verified\": {verified},\n"));
    out.push_str(&format!("  \"states\": {},\n", serde_json::to_string(&words).unwrap()));
    out.push_str(&format!(
        "  \"transitions\": [\n    {}\n  ]\n}}\n",
        rows_json(d.table(), pair_alphabet_size(a.len()))
    ));
    out
}

pub fn parse_diff(text: &str, alphabet: &GeneratorAlphabet) -> Result<(WordDifferenceMachine, usize, bool)> {
    let dj: DiffJson = serde_json::from_str(text).map_err(|e| json_err("word differences", e))?;
    if dj.alphabet != alphabet.names() {
        return Err(Error::parse("alphabet", "differs from the presentation"));
    }
    let states: Vec<Word> = dj.states.iter().map(|s| alphabet.parse_word(s)).collect::<Result<_>>()?;
    let table: Vec<StateId> = dj
        .transitions
        .iter()
        .flatten()
        .map(|&t| if t < 0 { FAIL } else { t as StateId })
        .collect();
    let m = WordDifferenceMachine::from_parts(alphabet.clone(), states, table)?;
    Ok((m, dj.k, dj.verified))
}

fn multiplier_file(name: Option<&str>) -> String {
    format!("m_{}.json", name.unwrap_or("eps"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes `presentation.json`, `wa.json`, `m_eps.json`, `m_<symbol>.json`,
/// `diff.json` and `transcript.txt` into `dir`.
pub fn write_bundle(dir: &Path, s: &AutomaticStructure) -> Result<()> {
    let a = &s.presentation.alphabet;
    if let Some(bad) = a.names().iter().find(|n| n.contains(['/', '\\']) || n.as_str() == "eps") {
        return Err(Error::usage(format!("symbol name {bad:?} cannot be used in a bundle file name")));
    }
    fs::create_dir_all(dir).map_err(|e| Error::usage(format!("cannot create {}: {e}", dir.display())))?;
    let names = a.names();
    write(&dir.join("presentation.json"), &presentation_to_json(&s.presentation))?;
    write(&dir.join("wa.json"), &dfa_to_json(&s.word_acceptor, names))?;
    write(&dir.join(multiplier_file(None)), &pair_dfa_to_json(s.multiplier(None), names))?;
    for y in 0..a.len() {
        write(&dir.join(multiplier_file(Some(a.name(y)))), &pair_dfa_to_json(s.multiplier(Some(y)), names))?;
    }
    write(&dir.join("diff.json"), &diff_to_json(&s.diff, s.k, s.verified))?;
    let mut t = s.transcript.join("\n");
    t.push('\n');
    write(&dir.join("transcript.txt"), &t)?;
    Ok(())
}

pub fn read_bundle(dir: &Path) -> Result<AutomaticStructure> {
    let (presentation, _) = parse_presentation(&read(&dir.join("presentation.json"))?)?;
    let a = presentation.alphabet.clone();
    let load = |file: String, pair: bool| -> Result<Dfa> {
        let l = parse_automaton(&read(&dir.join(&file))?)?;
        if l.alphabet != a.names() || l.pair != pair {
            return Err(Error::parse(file, "alphabet differs from the presentation"));
        }
        Ok(l.dfa)
    };
    let word_acceptor = load("wa.json".into(), false)?;
    let mut multipliers = vec![PairDfa::new(a.len(), load(multiplier_file(None), true)?)?];
    for y in 0..a.len() {
        multipliers.push(PairDfa::new(a.len(), load(multiplier_file(Some(a.name(y))), true)?)?);
    }
    let (diff, k, verified) = parse_diff(&read(&dir.join("diff.json"))?, &a)?;
    let transcript = read(&dir.join("transcript.txt")).map(|t| t.lines().map(String::from).collect()).unwrap_or_default();
    Ok(AutomaticStructure { presentation, word_acceptor, multipliers, diff, k, verified, transcript })
}
