//! Coxeter groups through their reflection representation: exact roots,
//! dominance, the finite set of small roots, and the shortlex and geodesic
//! word acceptors built on subsets of it.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;

use crate::cyclotomic::{lcm, Cyc, CycloField};
use crate::error::{Error, Result};
use crate::fsa::{Dfa, StateId};
use crate::words::{GeneratorAlphabet, Symbol, Word};

/// Symmetric matrix of orders `m_ij`; off-diagonal `0` means infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::usage("Coxeter matrix must have rank at least 1"));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    if x > 1 {
                        return Err(Error::usage(format!("diagonal entry ({i},{i}) must be 1")));
                    }
                } else if x == 1 {
                    return Err(Error::usage(format!("entry ({i},{j}) is 1; off-diagonal entries are 0 or at least 2")));
                } else if m[j][i] != x {
                    return Err(Error::usage(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { m })
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    /// `m_ij`, `None` for infinity.
    pub fn order(&self, i: usize, j: usize) -> Option<u32> {
        if i == j {
            return Some(1);
        }
        match self.m[i][j] {
            0 => None,
            x => Some(x),
        }
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.m
    }

    pub fn alphabet(&self) -> GeneratorAlphabet {
        GeneratorAlphabet::involutions(self.rank())
    }

    pub fn presentation(&self) -> crate::rewrite::Presentation {
        crate::rewrite::Presentation::coxeter(&self.m)
    }
}

/// Field and bilinear form for a Coxeter matrix.
#[derive(Debug, Clone)]
pub struct CoxeterContext {
    matrix: CoxeterMatrix,
    field: CycloField,
    form: Vec<Vec<Cyc>>,
}

/// Coordinates in the basis of simple roots.
pub type Root = Vec<Cyc>;

impl CoxeterContext {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        let n = matrix.rank();
        let mut conductor = 2;
        for i in 0..n {
            for j in 0..n {
                if let Some(m) = matrix.order(i, j).filter(|_| i != j) {
                    conductor = lcm(conductor, 2 * m as usize);
                }
            }
        }
        let field = CycloField::new(conductor);
        let form = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match matrix.order(i, j) {
                        _ if i == j => field.one(),
                        None => field.int(-1),
                        // -cos(π/m) = -cos(2π (N/2m) / N)
                        Some(m) => field.neg(&field.cos_2pi((conductor / (2 * m as usize)) as i64)),
                    })
                    .collect()
            })
            .collect();
        Self { matrix, field, form }
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        (0..self.rank()).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect()
    }

    pub fn inner_product(&self, u: &Root, v: &Root) -> Result<Cyc> {
        let n = self.rank();
        if u.len() != n || v.len() != n {
            return Err(Error::usage("root has the wrong rank"));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() || self.form[i][j].is_zero() {
                    continue;
                }
                acc = f.add(&acc, &f.mul(&f.mul(&u[i], &v[j]), &self.form[i][j]));
            }
        }
        Ok(acc)
    }

    /// `⟨v, e_i⟩`.
    fn with_simple(&self, v: &Root, i: usize) -> Cyc {
        let f = &self.field;
        (0..self.rank())
            .filter(|&j| !v[j].is_zero() && !self.form[j][i].is_zero())
            .fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&v[j], &self.form[j][i])))
    }

    /// `r_i(v) = v - 2⟨v, e_i⟩ e_i`.
    pub fn reflect(&self, i: usize, v: &Root) -> Root {
        let f = &self.field;
        let c = f.scale(&self.with_simple(v, i), &BigRational::from_integer(2.into()));
        let mut out = v.clone();
        out[i] = f.sub(&out[i], &c);
        out
    }

    /// `Some(Greater)` if every coordinate is `>= 0`, `Some(Less)` if every
    /// one is `<= 0`, `None` if the signs are mixed (or the vector is zero).
    pub fn root_sign(&self, v: &Root) -> Option<Ordering> {
        let signs: Vec<Ordering> = v.iter().map(|c| self.field.sign(c)).collect();
        let pos = signs.iter().all(|s| *s != Ordering::Less);
        let neg = signs.iter().all(|s| *s != Ordering::Greater);
        match (pos, neg) {
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            _ => None,
        }
    }

    pub fn is_positive(&self, v: &Root) -> bool {
        self.root_sign(v) == Some(Ordering::Greater)
    }

    /// Length of the shortest `w` with `w(e_i) = β` plus one; `None` if
    /// `β` is not a positive root reached within `limit` steps.
    pub fn depth(&self, beta: &Root, limit: usize) -> Option<usize> {
        let mut b = beta.clone();
        let mut d = 1;
        loop {
            if !self.is_positive(&b) {
                return None;
            }
            if (0..self.rank()).any(|i| b == self.simple_root(i)) {
                return Some(d);
            }
            // a reflection pairing positively with β lowers the depth by one
            let i = (0..self.rank()).find(|&i| self.field.sign(&self.with_simple(&b, i)) == Ordering::Greater)?;
            b = self.reflect(i, &b);
            d += 1;
            if d > limit {
                return None;
            }
        }
    }

    /// Whether the positive root `alpha` dominates `beta`: `⟨α, β⟩ >= 1`
    /// with `α` the deeper of the two.
    pub fn dominates(&self, alpha: &Root, beta: &Root) -> Result<bool> {
        if !self.is_positive(alpha) || !self.is_positive(beta) {
            return Err(Error::usage("dominance is defined on positive roots"));
        }
        if alpha == beta {
            return Ok(false);
        }
        let f = &self.field;
        let ip = self.inner_product(alpha, beta)?;
        if f.cmp(&ip, &f.one()) == Ordering::Less {
            return Ok(false);
        }
        let lim = 10_000;
        Ok(self.depth(alpha, lim) > self.depth(beta, lim))
    }

    /// Positive roots dominating no other positive root, found by closing the
    /// simple roots under reflections that pass `⟨e_i, β⟩ > -1`.
    pub fn small_roots(&self, cap: usize) -> Result<Vec<Root>> {
        let f = &self.field;
        let n = self.rank();
        let mut roots: Vec<Root> = (0..n).map(|i| self.simple_root(i)).collect();
        let mut known: HashMap<Root, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut queue: VecDeque<usize> = (0..n).collect();
        let minus_one = f.int(-1);
        while let Some(bi) = queue.pop_front() {
            for i in 0..n {
                let beta = &roots[bi];
                let ip = self.with_simple(beta, i);
                if ip.is_zero() || f.cmp(&ip, &minus_one) != Ordering::Greater {
                    continue;
                }
                let gamma = self.reflect(i, beta);
                if known.contains_key(&gamma) || !self.is_positive(&gamma) {
                    continue;
                }
                let mut dominated = false;
                for r in &roots {
                    if self.dominates(&gamma, r)? {
                        dominated = true;
                        break;
                    }
                }
                if dominated {
                    continue;
                }
                if roots.len() >= cap {
                    return Err(Error::resource("small roots", cap));
                }
                known.insert(gamma.clone(), roots.len());
                queue.push_back(roots.len());
                roots.push(gamma);
            }
        }
        Ok(roots)
    }

    /// Acceptor on subsets of the small roots. With `shortlex` the extra
    /// term `{x_i(e_k) : k < i}` rules out words that are not shortlex least.
    fn subset_acceptor(&self, shortlex: bool, cap: usize) -> Result<Dfa> {
        let n = self.rank();
        let small = self.small_roots(cap)?;
        let index: HashMap<&Root, usize> = small.iter().enumerate().map(|(i, r)| (r, i)).collect();
        // action[i][j]: index of r_i(small[j]) when that is small
        let action: Vec<Vec<Option<usize>>> = (0..n)
            .map(|i| small.iter().map(|r| index.get(&self.reflect(i, r)).copied()).collect())
            .collect();
        let mut subsets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
        let mut ids: HashMap<BTreeSet<usize>, StateId> = HashMap::from([(BTreeSet::new(), 0)]);
        let mut table: Vec<StateId> = Vec::new();
        let mut s = 0;
        while s < subsets.len() {
            for i in 0..n {
                let cur = &subsets[s];
                if cur.contains(&i) {
                    table.push(crate::fsa::FAIL);
                    continue;
                }
                let mut next: BTreeSet<usize> = cur.iter().filter_map(|&j| action[i][j]).collect();
                next.insert(i);
                if shortlex {
                    next.extend((0..i).filter_map(|k| action[i][k]));
                }
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(Error::resource("acceptor subsets", cap));
                        }
                        let id = subsets.len() as StateId;
                        ids.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                table.push(id);
            }
            s += 1;
        }
        let accepting = vec![true; subsets.len()];
        Ok(Dfa::from_parts(n, 0, accepting, table)?.minimize())
    }

    /// Shortlex normal forms over the standard generators in index order.
    pub fn shortlex_acceptor(&self, cap: usize) -> Result<Dfa> {
        self.subset_acceptor(true, cap)
    }

    /// All geodesic words over the standard generators.
    pub fn geodesic_acceptor(&self, cap: usize) -> Result<Dfa> {
        self.subset_acceptor(false, cap)
    }

    /// Image of `e_i` under a word (rightmost letter applied first).
    pub fn act(&self, w: &[Symbol], v: &Root) -> Root {
        w.iter().rev().fold(v.clone(), |acc, &i| self.reflect(i, &acc))
    }

    pub fn root_to_f64(&self, v: &Root) -> Vec<f64> {
        v.iter().map(|c| self.field.to_f64(c)).collect()
    }
}

/// Group elements up to length `max_len` by breadth-first search in the
/// reflection representation: the action on `ρ = Σ e_i` and on the simple
/// roots determines an element.
pub fn elements_by_length(ctx: &CoxeterContext, max_len: usize) -> Vec<Vec<Word>> {
    let n = ctx.rank();
    let key = |w: &[Symbol]| -> Vec<Root> { (0..n).map(|i| ctx.act(w, &ctx.simple_root(i))).collect() };
    let mut seen: HashMap<Vec<Root>, ()> = HashMap::new();
    seen.insert(key(&[]), ());
    let mut layers = vec![vec![Word::empty()]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in layers.last().unwrap() {
            for i in 0..n {
                let w2 = w.concat(&[i]);
                if seen.insert(key(&w2), ()).is_none() {
                    next.push(w2);
                }
            }
        }
        layers.push(next);
    }
    layers
}
