use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::word::{Alphabet, LoopWord};
use crate::error::{Error, Result};

/// Monodromy loops in the base with a stored variation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// Triangle, loop around the centre value `t = 0`.
    D4L0,
    /// Eight-loop, loop around the saddle value `t = 0`.
    A3L0,
    /// Eight-loop, loop around the centre value `t = 1/4`.
    A3Quarter,
}

/// The eight-loop tables were read off the pictures of the twisted ovals;
/// the words (order inside `dr dl`, sign of `Var dr`) are a transcription
/// that has not been re-derived independently.
pub const A3_TABLE_PROVENANCE: &str = "transcribed from the pictorial computation of the eight-loop \
variations (Var_l0 ds = dr + dl, Var^2_l0 ds = 0, Var_l1/4 dl = ds, Var_l1/4 Var_l0 ds = 2 ds); \
word order and the image of dr are by symmetry and not independently checked";

impl Twist {
    pub const ALL: [Twist; 3] = [Twist::D4L0, Twist::A3L0, Twist::A3Quarter];

    pub fn name(self) -> &'static str {
        match self {
            Twist::D4L0 => "d4-l0",
            Twist::A3L0 => "a3-l0",
            Twist::A3Quarter => "a3-l1/4",
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Twist::D4L0 => Alphabet::Triangle,
            _ => Alphabet::EightLoop,
        }
    }

    pub fn provenance(self) -> Option<&'static str> {
        match self {
            Twist::D4L0 => None,
            _ => Some(A3_TABLE_PROVENANCE),
        }
    }

    /// `(class, Var class)` pairs; an empty image marks the kernel.
    pub fn table(self) -> Vec<(LoopWord, LoopWord)> {
        let rows: &[(&str, &str)] = match self {
            Twist::D4L0 => &[("d", "g1 g2 g3"), ("g1 g2 g3", "[g1,g2]"), ("[g1,g2]", "1")],
            Twist::A3L0 => &[("ds", "dr dl"), ("dr dl", "1"), ("dl", "1"), ("dr", "1")],
            Twist::A3Quarter => &[("dl", "ds"), ("dr", "ds"), ("dr dl", "ds^2"), ("ds", "1")],
        };
        rows.iter()
            .map(|(a, b)| (LoopWord::parse(a).expect("table word"), LoopWord::parse(b).expect("table word")))
            .collect()
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Twist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Twist::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTwist(s.to_string()))
    }
}

/// `(twist - id)` on a free homotopy class, looked up in the stored table.
pub fn var(l: &LoopWord, twist: Twist) -> Result<LoopWord> {
    if l.is_empty() {
        return Ok(LoopWord::empty());
    }
    if l.alphabet() != Some(twist.alphabet()) {
        return Err(Error::UnknownTwist(format!("{} does not act on {}", twist, l.to_text())));
    }
    twist
        .table()
        .into_iter()
        .find(|(k, _)| k.is_conjugate(l))
        .map(|(_, v)| v)
        .ok_or_else(|| Error::UnknownTwist(format!("{} has no entry for {}", twist, l.to_text())))
}

/// `Var^n`, stopping early at the empty word.
pub fn var_iter(l: &LoopWord, twist: Twist, n: usize) -> Result<Vec<LoopWord>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = l.clone();
    for _ in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = var(&cur, twist)?;
        out.push(cur.clone());
    }
    Ok(out)
}
