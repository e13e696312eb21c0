use std::fmt;

use serde::{Deserialize, Serialize};

/// A word in a free group. Letter `k > 0` is generator `x_k`, `-k` its inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    /// Freely reduced copy.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.reduced().0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| -x).collect())
    }

    /// Reduced product.
    pub fn mul(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Largest generator index used, plus one.
    pub fn rank_bound(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&x| {
                if x > 0 {
                    format!("x{x}")
                } else {
                    format!("x{}^-1", -x)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A homomorphism of free groups given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordMap {
    pub images: Vec<Word>,
}

impl WordMap {
    pub fn identity(rank: usize) -> Self {
        WordMap {
            images: (0..rank).map(Word::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Image of a word; letters beyond the rank are an error.
    pub fn apply(&self, w: &Word) -> Option<Word> {
        let mut out = Vec::new();
        for &x in &w.0 {
            let img = self.images.get(x.unsigned_abs() as usize - 1)?;
            if x > 0 {
                out.extend_from_slice(&img.0);
            } else {
                out.extend(img.0.iter().rev().map(|y| -y));
            }
        }
        Some(Word(out).reduced())
    }

    /// `self` after `first`.
    pub fn after(&self, first: &WordMap) -> Option<WordMap> {
        let images = first
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Option<Vec<_>>>()?;
        Some(WordMap { images })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.reduced() == Word::generator(i))
    }

    pub fn reduced(&self) -> WordMap {
        WordMap {
            images: self.images.iter().map(Word::reduced).collect(),
        }
    }
}

impl fmt::Display for WordMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            writeln!(f, "x{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}
