use crate::error::Error;

/// `ℤ_{n_1} ⊕ ⋯ ⊕ ℤ_{n_r}`. Elements are residue vectors; internally they are
/// packed into a mixed-radix index in `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("no invariant factors".into()));
        }
        if let Some(n) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("invariant factor {n} < 2")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= 1 << 16)
            .ok_or_else(|| Error::InvalidGroup("group order too large".into()))?;
        Ok(FiniteAbelianGroup { factors, order })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, coords: &[u64]) -> Result<usize, Error> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidElement(format!(
                "{coords:?} has {} coordinates, group has rank {}",
                coords.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0usize;
        for (&c, &n) in coords.iter().zip(&self.factors) {
            if c >= n {
                return Err(Error::InvalidElement(format!("{coords:?}: coordinate {c} not below {n}")));
            }
            idx = idx * n as usize + c as usize;
        }
        Ok(idx)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        out
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.factors)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.index_of(&sum).expect("reduced coordinates")
    }

    pub fn neg(&self, a: usize) -> usize {
        let c: Vec<u64> = self
            .coords(a)
            .iter()
            .zip(&self.factors)
            .map(|(x, n)| (n - x) % n)
            .collect();
        self.index_of(&c).expect("reduced coordinates")
    }

    /// Addition table, `table[a * order + b] = a + b`.
    pub(crate) fn addition_table(&self) -> Vec<usize> {
        let n = self.order;
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.add(a, b);
            }
        }
        t
    }
}
