//! (τ, n)-words: enumeration, heights, the FIS decomposition, irreducible
//! counts, the series `F^{(j)}` and `H`, and the word-side route to `φ_τ`.
//!
//! A word is a tuple `(w_1, …, w_ℓ)` of letter sequences. Letter `0` is `s₀`;
//! letter `i ≥ 1` is `s_i`, the `i`-th edge type of τ, allowed in `w_j` only
//! for `j ∈ I_i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::rational::sign;
use crate::algebra::{binomial_u, int, series_log, MultiPoly, Rational, TruncSeries};
use crate::counting::beta_vars;
use crate::error::{domain, Error, Result};
use crate::graphs::Tau;
use crate::phi::LinearForm;

pub const DEFAULT_LETTER_BUDGET: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TauWord {
    pub words: Vec<Vec<u8>>,
}

impl TauWord {
    pub fn empty(ell: usize) -> Self {
        TauWord { words: vec![Vec::new(); ell] }
    }

    pub fn ell(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| w.is_empty())
    }

    pub fn num_letters(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.words.iter().map(|w| w.len() as u64).collect()
    }

    /// `u ∘ v = (u_1 v_1, …, u_ℓ v_ℓ)`.
    pub fn concat(&self, other: &TauWord) -> TauWord {
        assert_eq!(self.ell(), other.ell());
        TauWord {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a.iter().chain(b).copied().collect())
                .collect(),
        }
    }

    /// The prefix with the given lengths.
    pub fn prefix(&self, lens: &[usize]) -> TauWord {
        TauWord { words: self.words.iter().zip(lens).map(|(w, &k)| w[..k].to_vec()).collect() }
    }

    /// `(s₀^{k_1}, …, s₀^{k_ℓ})`.
    pub fn zeros(ks: &[u64]) -> TauWord {
        TauWord { words: ks.iter().map(|&k| vec![0; k as usize]).collect() }
    }

    /// Parses `"s1 s0 | s0"`; an empty component is written as nothing.
    pub fn parse(text: &str) -> Result<TauWord> {
        let mut words = Vec::new();
        for part in text.split('|') {
            let mut w = Vec::new();
            for tok in part.split_whitespace() {
                let i = tok
                    .strip_prefix('s')
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| Error::Domain(format!("bad letter {tok:?}")))?;
                w.push(i);
            }
            words.push(w);
        }
        Ok(TauWord { words })
    }
}

impl fmt::Display for TauWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, w) in self.words.iter().enumerate() {
            if j > 0 {
                write!(f, " |")?;
            }
            for &a in w {
                write!(f, " s{a}")?;
            }
        }
        Ok(())
    }
}

/// Which index FIS advances when several are above target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PickRule {
    Smallest,
    Largest,
}

type MemoKey = (Vec<u64>, Vec<u64>);

/// Words over a fixed τ and ℓ, with a letter budget and an enumeration memo.
pub struct WordSpace {
    tau: Tau,
    ell: usize,
    budget: usize,
    memo: RwLock<HashMap<MemoKey, Arc<Vec<TauWord>>>>,
}

impl WordSpace {
    /// Words with `ℓ = maxv(τ)`.
    pub fn new(tau: Tau) -> Self {
        let ell = tau.maxv();
        Self::with_ell(tau, ell).unwrap()
    }

    pub fn with_ell(tau: Tau, ell: u32) -> Result<Self> {
        if ell < tau.maxv() {
            return domain(format!("ℓ = {ell} is below maxv(τ) = {}", tau.maxv()));
        }
        Ok(WordSpace {
            tau,
            ell: ell as usize,
            budget: DEFAULT_LETTER_BUDGET,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn tau(&self) -> &Tau {
        &self.tau
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn allowed(&self, letter: u8, j: usize) -> bool {
        letter == 0 || self.tau.types()[letter as usize - 1].contains(j as u32 + 1)
    }

    /// Checks the letters and the support condition; returns the letter counts `n`.
    pub fn letter_counts(&self, w: &TauWord) -> Result<Vec<u64>> {
        if w.ell() != self.ell {
            return domain(format!("word has {} components, expected {}", w.ell(), self.ell));
        }
        let mut n = vec![0u64; self.tau.len()];
        for (j, wj) in w.words.iter().enumerate() {
            for &a in wj {
                if a as usize > n.len() {
                    return domain(format!("letter s{a} not in τ"));
                }
                if !self.allowed(a, j) {
                    return domain(format!("letter s{a} not allowed in w_{}", j + 1));
                }
                if a > 0 {
                    n[a as usize - 1] += 1;
                }
            }
        }
        Ok(n)
    }

    /// `λ_j(τ, n)` for `j = 1..ℓ`.
    pub fn lambda(&self, n: &[u64]) -> Vec<u64> {
        self.tau.lambda_vec(n, self.ell as u32)
    }

    /// The height `h(w)`, letter by letter.
    pub fn height(&self, w: &TauWord) -> Result<Vec<i64>> {
        self.letter_counts(w)?;
        let mut h = vec![0i64; self.ell];
        for (j, wj) in w.words.iter().enumerate() {
            for &a in wj {
                self.push_height(&mut h, a, j);
            }
        }
        Ok(h)
    }

    /// Height change from appending `a` to `u_j`.
    fn push_height(&self, h: &mut [i64], a: u8, j: usize) {
        if a == 0 {
            h[j] -= 1;
            return;
        }
        let t = &self.tau.types()[a as usize - 1];
        for &k in t.support() {
            if (k as usize) <= self.ell {
                h[k as usize - 1] += t.weight() as i64;
            }
        }
        h[j] -= 1;
    }

    /// `S_τ(n; L_1, …, L_ℓ)` in lexicographic order.
    pub fn enumerate_words(&self, n: &[u64], lengths: &[u64]) -> Result<Arc<Vec<TauWord>>> {
        if n.len() != self.tau.len() || lengths.len() != self.ell {
            return domain("letter counts or lengths have the wrong dimension");
        }
        let total: u64 = lengths.iter().sum();
        if total as usize > self.budget {
            return Err(Error::Resource(format!(
                "{total} letters exceed the word budget of {}",
                self.budget
            )));
        }
        let key = (n.to_vec(), lengths.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        let mut cur = TauWord::empty(self.ell);
        let mut left = n.to_vec();
        let mut slots: u64 = total;
        self.fill(lengths, 0, &mut left, &mut slots, &mut cur, &mut out);
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn fill(
        &self,
        lengths: &[u64],
        j: usize,
        left: &mut Vec<u64>,
        slots: &mut u64,
        cur: &mut TauWord,
        out: &mut Vec<TauWord>,
    ) {
        if left.iter().sum::<u64>() > *slots {
            return;
        }
        if j == self.ell {
            out.push(cur.clone());
            return;
        }
        if cur.words[j].len() as u64 == lengths[j] {
            self.fill(lengths, j + 1, left, slots, cur, out);
            return;
        }
        *slots -= 1;
        for a in 0..=left.len() as u8 {
            if a > 0 && (left[a as usize - 1] == 0 || !self.allowed(a, j)) {
                continue;
            }
            if a > 0 {
                left[a as usize - 1] -= 1;
            }
            cur.words[j].push(a);
            self.fill(lengths, j, left, slots, cur, out);
            cur.words[j].pop();
            if a > 0 {
                left[a as usize - 1] += 1;
            }
        }
        *slots += 1;
    }

    /// `S_τ(n, t)`: lengths `t_j + λ_j`. Every member has height `−t`.
    pub fn enumerate_s(&self, n: &[u64], t: &[u64]) -> Result<Arc<Vec<TauWord>>> {
        let lengths: Vec<u64> = self.lambda(n).iter().zip(t).map(|(l, t)| l + t).collect();
        let words = self.enumerate_words(n, &lengths)?;
        let target: Vec<i64> = t.iter().map(|&x| -(x as i64)).collect();
        for w in words.iter() {
            if self.height(w)? != target {
                return Err(Error::InternalInvariant(format!("{w} does not have height −t")));
            }
        }
        Ok(words)
    }

    /// Find-Irreducible-Subword: the unique irreducible initial subword `u`
    /// of `w` with height `h`, and the rest `v`.
    pub fn fis(&self, w: &TauWord, h: &[i64], rule: PickRule) -> Result<(TauWord, TauWord)> {
        let hw = self.height(w)?;
        if h.len() != self.ell || h.iter().any(|&x| x > 0) {
            return domain(format!("target height {h:?} is not non-positive"));
        }
        if hw.iter().zip(h).any(|(a, b)| a > b) {
            return domain(format!("h(w) = {hw:?} is not below {h:?}"));
        }
        let mut cut = vec![0usize; self.ell];
        let mut hu = vec![0i64; self.ell];
        while hu != h {
            let mut above = (0..self.ell).filter(|&j| hu[j] > h[j]);
            let j = match rule {
                PickRule::Smallest => above.next(),
                PickRule::Largest => above.next_back(),
            }
            .ok_or_else(|| Error::InternalInvariant("FIS height dropped below target".into()))?;
            let a = *w.words[j].get(cut[j]).ok_or_else(|| {
                Error::InternalInvariant(format!("FIS ran out of letters in w_{}", j + 1))
            })?;
            self.push_height(&mut hu, a, j);
            cut[j] += 1;
        }
        let u = w.prefix(&cut);
        let v = TauWord {
            words: w.words.iter().zip(&cut).map(|(x, &k)| x[k..].to_vec()).collect(),
        };
        Ok((u, v))
    }

    /// Whether `w` has no proper initial subword of its own height.
    pub fn is_irreducible(&self, w: &TauWord) -> Result<bool> {
        let h = self.height(w)?;
        if h.iter().any(|&x| x > 0) {
            return domain(format!("height {h:?} has a positive entry"));
        }
        Ok(self.fis(w, &h, PickRule::Smallest)?.0 == *w)
    }

    /// `|S^irr_τ(n, t)|`.
    pub fn count_irreducible(&self, n: &[u64], t: &[u64]) -> Result<u64> {
        let mut c = 0;
        for w in self.enumerate_s(n, t)?.iter() {
            if self.is_irreducible(w)? {
                c += 1;
            }
        }
        Ok(c)
    }

    /// `|S_τ(n, t)|`.
    pub fn count_s(&self, n: &[u64], t: &[u64]) -> Result<u64> {
        Ok(self.enumerate_s(n, t)?.len() as u64)
    }

    fn series(&self, order: &[u64], mut f: impl FnMut(&[u64]) -> Result<u64>) -> Result<TruncSeries<Rational>> {
        let bound: Vec<u32> = order.iter().map(|&c| c as u32).collect();
        let vars = MultiPoly::indexed_vars("x", order.len());
        let mut err = None;
        let s = TruncSeries::from_fn(&vars, &bound, |n| {
            let n: Vec<u64> = n.iter().map(|&c| c as u64).collect();
            match f(&n) {
                Ok(c) => int(c),
                Err(e) => {
                    err.get_or_insert(e);
                    Rational::zero()
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(s),
        }
    }

    /// `𝒮_{τ,t}(x)` up to `x^order`.
    pub fn series_s(&self, t: &[u64], order: &[u64]) -> Result<TruncSeries<Rational>> {
        self.series(order, |n| self.count_s(n, t))
    }

    /// `𝒮^irr_{τ,t}(x)` up to `x^order`.
    pub fn series_s_irr(&self, t: &[u64], order: &[u64]) -> Result<TruncSeries<Rational>> {
        self.series(order, |n| self.count_irreducible(n, t))
    }

    /// `F^{(j)}(x)`, `j` counted from 1.
    pub fn series_f(&self, j: usize, order: &[u64]) -> Result<TruncSeries<Rational>> {
        if j == 0 || j > self.ell {
            return domain(format!("j = {j} outside 1..={}", self.ell));
        }
        let mut e = vec![0; self.ell];
        e[j - 1] = 1;
        self.series_s_irr(&e, order)
    }

    /// `H(x) = 𝒮_{τ,0}(x)`.
    pub fn series_h(&self, order: &[u64]) -> Result<TruncSeries<Rational>> {
        self.series_s(&vec![0; self.ell], order)
    }

    /// `φ_τ(n, β) = (−1)^{|n|}(−Σ f^{(j)}(n) β_j + h(n) − Σ f^{(j)}(n))` with
    /// `f^{(j)}`, `h` the coefficients of `log F^{(j)}` and `log H`.
    pub fn phi_via_words(&self, n: &[u64]) -> Result<MultiPoly> {
        let vars = beta_vars(self.ell as u32);
        let idx: Vec<u32> = n.iter().map(|&c| c as u32).collect();
        if n.iter().all(|&c| c == 0) {
            return Ok(MultiPoly::zero(&vars));
        }
        let mut f = Vec::with_capacity(self.ell);
        for j in 1..=self.ell {
            f.push(series_log(&self.series_f(j, n)?)?.coeff(&idx));
        }
        let h = series_log(&self.series_h(n)?)?.coeff(&idx);
        let fsum: Rational = f.iter().sum();
        let s = sign(n.iter().sum());
        let coeffs: Vec<Rational> = f.iter().map(|fj| -fj * &s).collect();
        Ok(MultiPoly::affine(&vars, &((h - fsum) * &s), &coeffs))
    }
}

/// φ for `τ = (({1..ℓ}, r))` and `n` edges, in closed form. With `R = rℓ`:
/// `((−1)^{n+1}/n) · (C(Rn, n)/R · (Σβ_j + ℓ − 1) − Σ_{i<n} C(Rn, i)(R−1)^{n−i})`.
pub fn phi_closed_m1(r: u32, ell: u32, n: u64) -> Result<LinearForm> {
    if r == 0 || ell == 0 || n == 0 {
        return domain("r, ℓ and n must be positive");
    }
    let big_r = r as u64 * ell as u64;
    let rn = big_r * n;
    let lead = Rational::from_integer(binomial_u(rn, n).into()) / int(big_r);
    let mut tail = Rational::zero();
    let mut p = Rational::one();
    // i runs downward so that p = (R−1)^{n−i}
    for i in (0..n).rev() {
        p *= int(big_r - 1);
        tail += Rational::from_integer(binomial_u(rn, i).into()) * &p;
    }
    let scale = sign(n + 1) / int(n);
    let a0 = (&lead * int(ell as i64 - 1) - tail) * &scale;
    let a = lead * scale;
    Ok(LinearForm { a0, coeffs: vec![a; ell as usize] })
}
