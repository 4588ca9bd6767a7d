use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Free generators of the fundamental group of a fibre: `delta, g1, g2, g3`
/// for the triangle, `dl, dr, ds` (the two small ovals and the loop through
/// the saddle) for the eight-loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Delta,
    G1,
    G2,
    G3,
    Dl,
    Dr,
    Ds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Triangle,
    EightLoop,
}

impl Gen {
    pub const TRIANGLE: [Gen; 4] = [Gen::Delta, Gen::G1, Gen::G2, Gen::G3];
    pub const EIGHT_LOOP: [Gen; 3] = [Gen::Dl, Gen::Dr, Gen::Ds];

    pub fn name(self) -> &'static str {
        match self {
            Gen::Delta => "d",
            Gen::G1 => "g1",
            Gen::G2 => "g2",
            Gen::G3 => "g3",
            Gen::Dl => "dl",
            Gen::Dr => "dr",
            Gen::Ds => "ds",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "d" | "delta" | "δ" => Gen::Delta,
            "g1" | "γ1" | "γ₁" => Gen::G1,
            "g2" | "γ2" | "γ₂" => Gen::G2,
            "g3" | "γ3" | "γ₃" => Gen::G3,
            "dl" => Gen::Dl,
            "dr" => Gen::Dr,
            "ds" => Gen::Ds,
            _ => return None,
        })
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Gen::Dl | Gen::Dr | Gen::Ds => Alphabet::EightLoop,
            _ => Alphabet::Triangle,
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: Gen, inv: bool) -> Self {
        Self { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// Freely reduced word; concatenation reads left to right (first letter is
/// traversed first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LoopWord(Vec<Letter>);

impl LoopWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(ls: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in ls {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn gen(g: Gen) -> Self {
        Self(vec![Letter::new(g, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &LoopWord) -> LoopWord {
        Self::from_letters(self.0.iter().chain(&o.0).copied())
    }

    pub fn inverse(&self) -> LoopWord {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, n: i64) -> LoopWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = LoopWord::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn commutator(a: &LoopWord, b: &LoopWord) -> LoopWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.0.first().map(|l| l.gen.alphabet())
    }

    /// Strips conjugating letters: the representative of the free homotopy
    /// class used for comparisons.
    pub fn cyclic_reduction(&self) -> LoopWord {
        let mut v = self.0.as_slice();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
            v = &v[1..v.len() - 1];
        }
        Self(v.to_vec())
    }

    /// Free homotopy: cyclic reductions agree up to rotation.
    pub fn is_conjugate(&self, o: &LoopWord) -> bool {
        let (a, b) = (self.cyclic_reduction(), o.cyclic_reduction());
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|r| (0..n).all(|i| a.0[(i + r) % n] == b.0[i]))
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> BTreeMap<Gen, i64> {
        let mut m = BTreeMap::new();
        for l in &self.0 {
            *m.entry(l.gen).or_insert(0) += if l.inv { -1 } else { 1 };
        }
        m
    }

    pub fn exponent(&self, g: Gen) -> i64 {
        self.exponent_sums().get(&g).copied().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            return String::from("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.inv { format!("{}^-1", l.gen.name()) } else { l.gen.name().to_string() })
            .collect();
        parts.join(" ")
    }

    /// Words like `g1 g2 g3`, `d^-1 g1 d`, `[g1,g2]`, `g1*g2^2`, `1`.
    pub fn parse(src: &str) -> Result<LoopWord> {
        let mut p = Parser { s: src.as_bytes(), src, i: 0 };
        let w = p.product()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("unexpected input at byte {} in {src:?}", p.i)));
        }
        let mut alph = w.0.iter().map(|l| l.gen.alphabet());
        if let Some(a) = alph.next() {
            if alph.any(|b| b != a) {
                return Err(Error::Parse(format!("{src:?} mixes generators of different fibres")));
            }
        }
        Ok(w)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    src: &'a str,
    i: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] == b' ' || self.s[self.i] == b'*' || self.s[self.i] == b'\t') {
            self.i += 1;
        }
    }

    fn product(&mut self) -> Result<LoopWord> {
        let mut w = LoopWord::empty();
        loop {
            self.skip_ws();
            if self.i >= self.s.len() || self.s[self.i] == b',' || self.s[self.i] == b']' || self.s[self.i] == b')' {
                return Ok(w);
            }
            let f = self.factor()?;
            w = w.mul(&f);
        }
    }

    fn factor(&mut self) -> Result<LoopWord> {
        let c = self.s[self.i];
        let base = if c == b'[' {
            self.i += 1;
            let a = self.product()?;
            self.expect(b',')?;
            let b = self.product()?;
            self.expect(b']')?;
            LoopWord::commutator(&a, &b)
        } else if c == b'(' {
            self.i += 1;
            let a = self.product()?;
            self.expect(b')')?;
            a
        } else if c == b'1' {
            self.i += 1;
            LoopWord::empty()
        } else {
            let start = self.i;
            while self.i < self.s.len() {
                let b = self.s[self.i];
                if b.is_ascii_alphanumeric() || b >= 0x80 {
                    self.i += 1;
                } else {
                    break;
                }
            }
            let name = &self.src[start..self.i];
            let g = Gen::from_name(name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            LoopWord::gen(g)
        };
        if self.i < self.s.len() && self.s[self.i] == b'^' {
            self.i += 1;
            let start = self.i;
            if self.i < self.s.len() && (self.s[self.i] == b'-' || self.s[self.i] == b'+') {
                self.i += 1;
            }
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let n: i64 = self.src[start..self.i]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {:?}", self.src)))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.i < self.s.len() && self.s[self.i] == b {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {:?} in {:?}", b as char, self.src)))
        }
    }
}

/// Exponent sums in generator order: `(delta, g1, g2, g3)` for the triangle,
/// `(dl, dr, ds)` for the eight-loop. The empty word maps to the triangle
/// ordering.
pub fn homology_class(l: &LoopWord) -> Vec<i64> {
    let sums = l.exponent_sums();
    let gens: &[Gen] = match l.alphabet() {
        Some(Alphabet::EightLoop) => &Gen::EIGHT_LOOP,
        _ => &Gen::TRIANGLE,
    };
    gens.iter().map(|g| sums.get(g).copied().unwrap_or(0)).collect()
}
