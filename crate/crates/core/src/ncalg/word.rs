use std::cmp::Ordering;

use smallvec::SmallVec;

/// A word in generator indices, ordered by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(SmallVec<[u8; 12]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(SmallVec::from_slice(&[g as u8]))
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Word(it.into_iter().map(|g| g as u8).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&g| g as usize)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&g| g as usize)
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn sub(&self, from: usize, to: usize) -> Word {
        Word(SmallVec::from_slice(&self.0[from..to]))
    }

    pub fn tail(&self) -> Word {
        self.sub(1.min(self.len()), self.len())
    }

    pub fn push(&mut self, g: usize) {
        self.0.push(g as u8);
    }

    pub fn occurs_at(&self, pos: usize, pat: &Word) -> bool {
        pos + pat.len() <= self.len() && self.0[pos..pos + pat.len()] == pat.0[..]
    }

    /// `self[..pos] ++ mid ++ self[pos+cut..]`
    pub fn splice(&self, pos: usize, cut: usize, mid: &Word) -> Word {
        let mut v: SmallVec<[u8; 12]> = SmallVec::with_capacity(self.len() - cut + mid.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(&mid.0);
        v.extend_from_slice(&self.0[pos + cut..]);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn count(&self, g: usize) -> usize {
        self.0.iter().filter(|&&x| x as usize == g).count()
    }

    /// Renders with `*` between letters and `^k` for runs; the empty word is `1`.
    pub fn render(&self, names: &[String], sep: &str) -> String {
        if self.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.len() {
            let g = self.get(i);
            let mut j = i;
            while j < self.len() && self.get(j) == g {
                j += 1;
            }
            let name = names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
            if j - i == 1 || sep == "." {
                for _ in i..j {
                    parts.push(name.clone());
                }
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join(sep)
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
