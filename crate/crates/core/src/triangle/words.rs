//! Reduced words in the generators of Δ(p,q,r), their images, and the
//! search for elliptic images of infinite-order elements.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Order, TriangleParams, TriangleRep};
use crate::error::{Error, Result};
use crate::isometry::{classify, goldman_f, IsometryClass, SU21Element, DEFAULT_EPS};
use crate::linalg::C64;

/// A freely reduced word over {1,2,3}: no two adjacent letters are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces `letters` using `i_k^2 = 1`.
    pub fn reduce<I: IntoIterator<Item = u8>>(letters: I) -> Result<Self> {
        let mut out: Vec<u8> = Vec::new();
        for a in letters {
            if !(1..=3).contains(&a) {
                return Err(Error::InvalidWord(format!("letter {a} not in 1..=3")));
            }
            if out.last() == Some(&a) {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Ok(Self(out))
    }

    /// Parses digits such as `"1323"`; `"e"` and `""` denote the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Self::empty());
        }
        let letters: Option<Vec<u8>> = s.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
        Self::reduce(letters.ok_or_else(|| Error::InvalidWord(s.to_string()))?)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied()).expect("letters already valid")
    }

    /// Generators are involutions, so the inverse is the reversal.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn pow(&self, k: u32) -> Word {
        (0..k).fold(Word::empty(), |acc, _| acc.concat(self))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Product `I_{a1} ... I_{ak}`.
pub fn evaluate_word(rep: &TriangleRep, w: &Word) -> SU21Element {
    let form = *rep.inversions[0].form();
    w.letters().iter().fold(SU21Element::identity(form), |acc, &a| acc.mul(rep.generator(a)))
}

/// All reduced words of length `1..=maxlen` in shortlex order (by length, then
/// lexicographically).
pub fn enumerate_words(maxlen: usize) -> Words {
    Words { maxlen, current: Vec::new() }
}

pub struct Words {
    maxlen: usize,
    current: Vec<u8>,
}

fn fill_minimal(w: &mut Vec<u8>, from: usize, len: usize) {
    w.truncate(from);
    while w.len() < len {
        let prev = w.last().copied();
        w.push(if prev == Some(1) { 2 } else { 1 });
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let len = self.current.len();
        if len == 0 {
            if self.maxlen == 0 {
                return None;
            }
            fill_minimal(&mut self.current, 0, 1);
            return Some(Word(self.current.clone()));
        }
        for i in (0..len).rev() {
            let prev = if i > 0 { Some(self.current[i - 1]) } else { None };
            let next = (self.current[i] + 1..=3).find(|&b| Some(b) != prev);
            if let Some(b) = next {
                self.current[i] = b;
                fill_minimal(&mut self.current, i + 1, len);
                return Some(Word(self.current.clone()));
            }
        }
        if len >= self.maxlen {
            return None;
        }
        fill_minimal(&mut self.current, 0, len + 1);
        Some(Word(self.current.clone()))
    }
}

/// Abstract order of `i_a i_b` in Δ(p,q,r): `(i2 i3)^p = (i3 i1)^q = (i1 i2)^r = 1`.
pub fn pair_order(params: &TriangleParams, a: u8, b: u8) -> Order {
    match (a.min(b), a.max(b)) {
        (2, 3) => params.p,
        (1, 3) => params.q,
        (1, 2) => params.r,
        _ => Order::Finite(1),
    }
}

/// Strips matching first and last letters (conjugation) until none remain.
pub fn cyclic_reduction(w: &Word) -> Word {
    let mut v: VecDeque<u8> = w.letters().iter().copied().collect();
    while v.len() >= 2 && v.front() == v.back() {
        v.pop_front();
        v.pop_back();
    }
    Word(v.into_iter().collect())
}

fn cyclic_free_reduce(mut v: Vec<u8>) -> Vec<u8> {
    loop {
        let w = Word::reduce(v.iter().copied()).expect("valid letters").0;
        let reduced = cyclic_reduction(&Word(w)).0;
        if reduced.len() == v.len() {
            return reduced;
        }
        v = reduced;
    }
}

fn canonical_rotation(v: &[u8]) -> Vec<u8> {
    (0..v.len().max(1))
        .map(|i| v[i..].iter().chain(v[..i].iter()).copied().collect::<Vec<u8>>())
        .min()
        .unwrap_or_default()
}

fn distinct_letters(v: &[u8]) -> usize {
    (1..=3u8).filter(|a| v.contains(a)).count()
}

/// Decides a cyclic word that uses at most two letters.
fn small_support_finite(v: &[u8], params: &TriangleParams) -> bool {
    match distinct_letters(v) {
        0 | 1 => true,
        _ => {
            let a = v[0];
            let b = *v.iter().find(|&&x| x != a).expect("two letters");
            matches!(pair_order(params, a, b), Order::Finite(_))
        }
    }
}

const SEARCH_LIMIT: usize = 20_000;

/// Whether `w` has finite order in Δ(p,q,r). Finite-order elements are exactly
/// the conjugates of elements of the vertex groups `<i_a, i_b>` (finite `m_ab`)
/// and of the generators. After cyclic reduction, a word supported on at most
/// two letters is decided directly; otherwise the conjugacy class is explored
/// with braid moves `(ab..)_m -> (ba..)_m`, cyclic shifts and cancellation,
/// looking for a representative supported on a finite vertex group.
pub fn has_finite_order(w: &Word, params: &TriangleParams) -> bool {
    let start = cyclic_free_reduce(w.letters().to_vec());
    if distinct_letters(&start) <= 2 {
        return small_support_finite(&start, params);
    }
    let braids: Vec<(u8, u8, usize)> = [(1u8, 2u8), (2, 3), (1, 3)]
        .iter()
        .flat_map(|&(a, b)| match pair_order(params, a, b) {
            Order::Finite(m) => vec![(a, b, m as usize), (b, a, m as usize)],
            Order::Infinite => vec![],
        })
        .collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_rotation(&start));
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        let n = v.len();
        for &(a, b, m) in &braids {
            if m > n {
                continue;
            }
            for i in 0..n {
                let alternates = (0..m).all(|k| v[(i + k) % n] == if k % 2 == 0 { a } else { b });
                if !alternates {
                    continue;
                }
                let mut next: Vec<u8> = (0..n).map(|k| v[(i + k) % n]).collect();
                for (k, slot) in next.iter_mut().take(m).enumerate() {
                    *slot = if k % 2 == 0 { b } else { a };
                }
                let next = cyclic_free_reduce(next);
                if distinct_letters(&next) <= 2 && small_support_finite(&next, params) {
                    return true;
                }
                if seen.len() < SEARCH_LIMIT && seen.insert(canonical_rotation(&next)) {
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub word: Word,
    pub trace: C64,
    pub goldman_f: f64,
    pub class: IsometryClass,
}

/// Reduced words of length at most `maxlen` whose image is regular elliptic
/// although the word has infinite order in the abstract triangle group.
pub fn discreteness_falsifier(rep: &TriangleRep, maxlen: usize) -> Result<Vec<Witness>> {
    discreteness_falsifier_with_eps(rep, maxlen, DEFAULT_EPS)
}

pub fn discreteness_falsifier_with_eps(rep: &TriangleRep, maxlen: usize, eps: f64) -> Result<Vec<Witness>> {
    let params = rep.params.ok_or_else(|| Error::InvalidParams("representation has no (p,q,r) data".into()))?;
    let mut out = Vec::new();
    for w in enumerate_words(maxlen) {
        let g = evaluate_word(rep, &w);
        let class = classify(&g, eps)?;
        if class == IsometryClass::RegularElliptic && !has_finite_order(&w, &params) {
            let trace = g.trace();
            out.push(Witness { word: w, trace, goldman_f: goldman_f(trace), class });
        }
    }
    Ok(out)
}
