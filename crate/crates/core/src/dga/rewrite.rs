//! Homogeneous word rewriting for the relations among 1-form generators.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

use super::DgaError;

pub type Word = Vec<usize>;

/// `lhs -> sum c_i rhs_i`; an empty right-hand side rewrites to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Vec<(Scalar, Word)>,
}

impl RewriteRule {
    pub fn new(lhs: Word, rhs: Vec<(Scalar, Word)>) -> Self {
        RewriteRule { lhs, rhs }
    }

    pub fn to_zero(lhs: Word) -> Self {
        RewriteRule { lhs, rhs: Vec::new() }
    }
}

/// Linear combination of words, kept sorted by word with nonzero coefficients.
pub type WordComb = Vec<(Scalar, Word)>;

fn push_term(acc: &mut WordComb, c: Scalar, w: Word) {
    if c.is_zero() {
        return;
    }
    match acc.binary_search_by(|(_, x)| x.cmp(&w)) {
        Ok(i) => {
            let s = &acc[i].0 + &c;
            if s.is_zero() {
                acc.remove(i);
            } else {
                acc[i].0 = s;
            }
        }
        Err(i) => acc.insert(i, (c, w)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    generators: Vec<String>,
    rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    /// Validates that every rule is homogeneous of length at least two and strictly
    /// decreasing in the lexicographic order, which guarantees termination.
    pub fn new(generators: Vec<String>, rules: Vec<RewriteRule>) -> Result<Self, DgaError> {
        let k = generators.len();
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 || r.lhs.iter().any(|&g| g >= k) {
                return Err(DgaError::InvalidRule(i));
            }
            for (_, w) in &r.rhs {
                if w.len() != r.lhs.len() || w.iter().any(|&g| g >= k) {
                    return Err(DgaError::InvalidRule(i));
                }
                if w >= &r.lhs {
                    return Err(DgaError::NotTerminating(i));
                }
            }
            if rules[..i].iter().any(|o| o.lhs == r.lhs) {
                return Err(DgaError::InvalidRule(i));
            }
        }
        Ok(RewriteSystem { generators, rules })
    }

    /// Exterior algebra relations: `g_j g_i -> -g_i g_j` for `i < j`, `g_i g_i -> 0`.
    pub fn exterior(generators: Vec<String>) -> Self {
        let k = generators.len();
        let mut rules = Vec::new();
        for j in 0..k {
            for i in 0..j {
                rules.push(RewriteRule::new(vec![j, i], vec![(-Scalar::one(), vec![i, j])]));
            }
            rules.push(RewriteRule::to_zero(vec![j, j]));
        }
        RewriteSystem { generators, rules }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    fn find_redex(&self, w: &[usize]) -> Option<(usize, usize)> {
        (0..w.len()).find_map(|pos| {
            self.rules
                .iter()
                .position(|r| w[pos..].starts_with(&r.lhs))
                .map(|ri| (pos, ri))
        })
    }

    pub fn is_normal(&self, w: &[usize]) -> bool {
        self.find_redex(w).is_none()
    }

    fn apply(&self, w: &[usize], pos: usize, rule: usize) -> WordComb {
        let r = &self.rules[rule];
        let mut out = Vec::new();
        for (c, rhs) in &r.rhs {
            let mut nw = w[..pos].to_vec();
            nw.extend_from_slice(rhs);
            nw.extend_from_slice(&w[pos + r.lhs.len()..]);
            push_term(&mut out, c.clone(), nw);
        }
        out
    }

    /// Normal form by repeatedly rewriting the leftmost redex.
    pub fn normalize(&self, w: &[usize]) -> WordComb {
        self.normalize_comb(&[(Scalar::one(), w.to_vec())])
    }

    pub fn normalize_comb(&self, comb: &[(Scalar, Word)]) -> WordComb {
        let mut todo: WordComb = Vec::new();
        for (c, w) in comb {
            push_term(&mut todo, c.clone(), w.clone());
        }
        let mut done: WordComb = Vec::new();
        // Rewriting only decreases words, so always expanding the largest pending
        // word processes each word at most once.
        while let Some((c, w)) = todo.pop() {
            match self.find_redex(&w) {
                None => push_term(&mut done, c, w),
                Some((pos, ri)) => {
                    for (c2, w2) in self.apply(&w, pos, ri) {
                        push_term(&mut todo, &c * &c2, w2);
                    }
                }
            }
        }
        done
    }

    /// Normal words of the given length in lexicographic order.
    pub fn normal_words(&self, degree: usize) -> Vec<Word> {
        let k = self.generators.len();
        let mut words: Vec<Word> = alloc::vec![Vec::new()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for w in &words {
                for g in 0..k {
                    let mut nw = w.clone();
                    nw.push(g);
                    // Every suffix of a normal word is normal, so checking the tail suffices.
                    if self.rules.iter().all(|r| !nw.ends_with(&r.lhs)) {
                        next.push(nw);
                    }
                }
            }
            words = next;
        }
        words
    }

    /// Checks that every single rewrite step of every word up to `max_degree`
    /// leads to the same normal form. By induction along the rewriting order this
    /// shows all application orders agree.
    pub fn check_confluence(&self, max_degree: usize) -> Result<(), DgaError> {
        let k = self.generators.len();
        let mut words: Vec<Word> = alloc::vec![Vec::new()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &words {
                for g in 0..k {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            for w in &next {
                let nf = self.normalize(w);
                for pos in 0..w.len() {
                    for (ri, r) in self.rules.iter().enumerate() {
                        if w[pos..].starts_with(&r.lhs) {
                            let reduct = self.apply(w, pos, ri);
                            if self.normalize_comb(&reduct) != nf {
                                return Err(DgaError::NotConfluent(w.clone()));
                            }
                        }
                    }
                }
            }
            words = next;
        }
        Ok(())
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let parts: Vec<&str> = w.iter().map(|&g| self.generators[g].as_str()).collect();
        parts.join("^")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// `t s -> s t`, `u s -> s u`, `u t -> t u`, `u u -> s t` over `s < t < u`.
    fn m3_rules() -> RewriteSystem {
        let one = Scalar::one;
        RewriteSystem::new(
            names(&["s", "t", "u"]),
            vec![
                RewriteRule::new(vec![1, 0], vec![(one(), vec![0, 1])]),
                RewriteRule::new(vec![2, 0], vec![(one(), vec![0, 2])]),
                RewriteRule::new(vec![2, 1], vec![(one(), vec![1, 2])]),
                RewriteRule::new(vec![2, 2], vec![(one(), vec![0, 1])]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn exterior_normal_words() {
        let r = RewriteSystem::exterior(names(&["a", "b"]));
        assert_eq!(r.normal_words(0).len(), 1);
        assert_eq!(r.normal_words(1).len(), 2);
        assert_eq!(r.normal_words(2), vec![vec![0, 1]]);
        assert!(r.normal_words(3).is_empty());
        assert_eq!(r.normalize(&[1, 0]), vec![(-Scalar::one(), vec![0, 1])]);
        assert!(r.normalize(&[0, 1, 0]).is_empty());
        r.check_confluence(3).unwrap();
    }

    #[test]
    fn m3_normal_words_count() {
        let r = m3_rules();
        for n in 0..6 {
            assert_eq!(r.normal_words(n).len(), 2 * n + 1, "degree {n}");
        }
        r.check_confluence(3).unwrap();
        // u u u -> s t u, and u s t u -> s t u u -> s t s t -> s s t t.
        assert_eq!(r.normalize(&[2, 2, 2]), vec![(Scalar::one(), vec![0, 1, 2])]);
        assert_eq!(r.normalize(&[2, 0, 1, 2]), vec![(Scalar::one(), vec![0, 0, 1, 1])]);
    }

    #[test]
    fn rejects_increasing_rule() {
        let bad = RewriteSystem::new(
            names(&["s", "t"]),
            vec![RewriteRule::new(vec![0, 1], vec![(Scalar::one(), vec![1, 0])])],
        );
        assert_eq!(bad, Err(DgaError::NotTerminating(0)));
        let inhomogeneous = RewriteSystem::new(
            names(&["s", "t"]),
            vec![RewriteRule::new(vec![1, 1], vec![(Scalar::one(), vec![0])])],
        );
        assert_eq!(inhomogeneous, Err(DgaError::InvalidRule(0)));
    }

    #[test]
    fn detects_non_confluence() {
        // t s -> 0 and t t -> s t disagree on t t t.
        let r = RewriteSystem::new(
            names(&["s", "t"]),
            vec![
                RewriteRule::to_zero(vec![1, 0]),
                RewriteRule::new(vec![1, 1], vec![(Scalar::one(), vec![0, 1])]),
            ],
        )
        .unwrap();
        // t t t: left reduct s t t -> s s t, right reduct t s t -> 0.
        assert_eq!(r.check_confluence(3), Err(DgaError::NotConfluent(vec![1, 1, 1])));
    }
}
