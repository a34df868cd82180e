//! Free-group words over a ranked alphabet `x1, ..., xn`.
//!
//! Text format: atoms `x<k>` with an optional integer exponent `^e`,
//! commutators `[u,v]` (meaning `u^-1 v^-1 u v`), parenthesised subwords
//! `(u)^e`, and `1` for the empty word. Atoms may be separated by `*` or
//! simply juxtaposed.

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement, Tuple};

/// One letter `x_gen^{±1}` with a 1-based generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, sign: i8) -> Self {
        Letter {
            generator,
            inverse: sign < 0,
        }
    }

    pub fn sign(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Builds a word from `(generator, sign)` pairs, checking the index range.
    pub fn from_pairs(rank: usize, pairs: &[(usize, i8)]) -> Result<Self> {
        let letters = pairs.iter().map(|&(g, s)| Letter::new(g, s)).collect();
        Word::from_letters(rank, letters)
    }

    pub fn from_letters(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if let Some(bad) = letters
            .iter()
            .find(|l| l.generator == 0 || l.generator > rank)
        {
            return Err(Error::GeneratorOutOfRange {
                index: bad.generator,
                rank,
            });
        }
        Ok(Word { rank, letters })
    }

    /// `x_generator` as a one-letter word.
    pub fn generator(rank: usize, generator: usize) -> Result<Self> {
        Word::from_pairs(rank, &[(generator, 1)])
    }

    pub fn alphabet_rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn pairs(&self) -> Vec<(usize, i8)> {
        self.letters
            .iter()
            .map(|l| (l.generator, l.sign()))
            .collect()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Concatenation; the result lives over the larger of the two alphabets.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            rank: self.rank.max(other.rank),
            letters,
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Exponent sum of each generator (the image in the free abelian group).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.generator - 1] += l.sign() as i64;
        }
        sums
    }
}

/// Free reduction: cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        match stack.last() {
            Some(top) if top.cancels(&l) => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    Word {
        rank: w.rank,
        letters: stack,
    }
}

/// Image of `w` under the homomorphism sending `x_i` to `assignment[i]`.
pub fn evaluate_word(w: &Word, group: &Group, assignment: &Tuple) -> Result<GroupElement> {
    evaluate_in(w, group, assignment.entries())
}

/// Like [`evaluate_word`] but takes the images as a slice.
pub fn evaluate_in(w: &Word, group: &Group, images: &[GroupElement]) -> Result<GroupElement> {
    if images.len() != w.rank {
        return Err(Error::LengthMismatch {
            expected: w.rank,
            actual: images.len(),
        });
    }
    let inverses: Vec<Option<GroupElement>> = {
        let mut inv = vec![None; images.len()];
        for l in w.letters.iter().filter(|l| l.inverse) {
            if inv[l.generator - 1].is_none() {
                inv[l.generator - 1] = Some(group.inv(&images[l.generator - 1])?);
            }
        }
        inv
    };
    let mut acc = group.identity();
    for l in &w.letters {
        let factor = if l.inverse {
            inverses[l.generator - 1]
                .as_ref()
                .expect("inverse precomputed")
        } else {
            &images[l.generator - 1]
        };
        acc = group.mul(&acc, factor)?;
    }
    Ok(acc)
}

/// Parses the word grammar described in the module docs.
pub fn parse_word(text: &str, alphabet_rank: usize) -> Result<Word> {
    if alphabet_rank == 0 {
        return Err(Error::ZeroRank);
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        rank: alphabet_rank,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(w)
}

impl std::str::FromStr for Word {
    type Err = Error;

    /// Parses with the alphabet rank inferred as the largest index used (at least 1).
    fn from_str(s: &str) -> Result<Self> {
        let max_index = s
            .split(|c: char| !c.is_ascii_digit() && c != 'x')
            .filter_map(|tok| tok.strip_prefix('x'))
            .filter_map(|d| d.parse::<usize>().ok())
            .max()
            .unwrap_or(1)
            .max(1);
        parse_word(s, max_index)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::empty(self.rank);
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'*') if !first => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.concat(&f);
                }
                Some(b'x') | Some(b'[') | Some(b'(') | Some(b'1') => {
                    let f = self.factor()?;
                    acc = acc.concat(&f);
                }
                _ if first => return Err(Error::parse(self.pos, "expected a word")),
                _ => return Ok(acc),
            }
            first = false;
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(atom.pow(e))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let start = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(Error::parse(start, "expected generator index after 'x'"));
                }
                let idx: usize = std::str::from_utf8(&self.src[digits_start..self.pos])
                    .expect("ascii digits")
                    .parse()
                    .map_err(|_| Error::parse(digits_start, "generator index too large"))?;
                Word::generator(self.rank, idx)
            }
            Some(b'1') => {
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    return Err(Error::parse(start, "only '1' denotes the empty word"));
                }
                Ok(Word::empty(self.rank))
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b')')?;
                Ok(u)
            }
            _ => Err(Error::parse(start, "expected 'x<k>', '1', '[' or '('")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, "expected integer exponent"))
    }
}

impl fmt::Display for Word {
    /// Runs of equal letters are written with exponents, e.g. `x1^2*x2^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let e = run as i64 * l.sign() as i64;
            if e == 1 {
                write!(f, "x{}", l.generator)?;
            } else {
                write!(f, "x{}^{}", l.generator, e)?;
            }
            i += run;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;
    use proptest::prelude::*;

    fn w(rank: usize, pairs: &[(usize, i8)]) -> Word {
        Word::from_pairs(rank, pairs).unwrap()
    }

    #[test]
    fn parses_basic_words() {
        assert_eq!(parse_word("x1*x2^-1", 2).unwrap(), w(2, &[(1, 1), (2, -1)]));
        assert!(parse_word("1", 2).unwrap().is_empty());
        assert_eq!(parse_word("x1 x2", 2).unwrap(), w(2, &[(1, 1), (2, 1)]));
        assert_eq!(parse_word("x2^3", 2).unwrap(), w(2, &[(2, 1); 3]));
        assert_eq!(
            parse_word("(x1x2)^-1", 2).unwrap(),
            w(2, &[(2, -1), (1, -1)])
        );
    }

    #[test]
    fn parses_akbulut_kirby_word() {
        let u = parse_word("x1*x2*x1*x2^-1*x1^-1*x2^-1", 2).unwrap();
        assert_eq!(
            u.pairs(),
            vec![(1, 1), (2, 1), (1, 1), (2, -1), (1, -1), (2, -1)]
        );
        assert!(u.is_reduced());
        assert_eq!(free_reduce(&u), u);
    }

    #[test]
    fn commutator_unfolds_left_inverse_first() {
        let c = parse_word("[x2,x1]", 2).unwrap();
        assert_eq!(c.pairs(), vec![(2, -1), (1, -1), (2, 1), (1, 1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_word("x3", 2),
            Err(Error::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
        assert!(matches!(
            parse_word("x0", 2),
            Err(Error::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(parse_word("x1*", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("[x1 x2]", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("x1^", 2), Err(Error::Parse { .. })));
        assert_eq!(parse_word("x1", 0), Err(Error::ZeroRank));
    }

    #[test]
    fn free_reduction_examples() {
        assert!(free_reduce(&w(1, &[(1, 1), (1, -1)])).is_empty());
        assert_eq!(
            free_reduce(&w(2, &[(1, 1), (2, 1), (2, -1), (1, 1)])),
            w(2, &[(1, 1), (1, 1)])
        );
    }

    #[test]
    fn display_compresses_runs() {
        assert_eq!(w(2, &[(1, 1), (1, 1)]).to_string(), "x1^2");
        assert_eq!(w(2, &[(1, 1), (2, -1)]).to_string(), "x1*x2^-1");
        assert_eq!(Word::empty(2).to_string(), "1");
        assert_eq!("x1^3".parse::<Word>().unwrap().to_string(), "x1^3");
    }

    #[test]
    fn evaluates_in_free_abelian_group() {
        let g = Group::from_spec(GroupSpec::abelian(vec![], 2)).unwrap();
        let t = Tuple::from_coords(&g, &[vec![1, 0], vec![0, 1]]).unwrap();
        let u = parse_word("x1*x2*x1*x2^-1*x1^-1*x2^-1", 2).unwrap();
        assert_eq!(
            evaluate_word(&u, &g, &t).unwrap(),
            g.element_from_coords(&[1, -1]).unwrap()
        );
        assert_eq!(
            evaluate_word(&Word::empty(2), &g, &t).unwrap(),
            g.identity()
        );
    }

    #[test]
    fn heisenberg_commutator_is_central_generator() {
        let g = Group::from_spec(GroupSpec::heisenberg(1, None)).unwrap();
        let c = parse_word("[x1,x2]", 2).unwrap();
        for (m1, m2) in [(0, 0), (3, -7), (-20, 20)] {
            let t = Tuple::from_coords(&g, &[vec![1, 0, m1], vec![0, 1, m2]]).unwrap();
            assert_eq!(
                evaluate_word(&c, &g, &t).unwrap(),
                g.element_from_coords(&[0, 0, 1]).unwrap()
            );
        }
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        let g = Group::from_spec(GroupSpec::abelian(vec![5], 0)).unwrap();
        let t = Tuple::from_coords(&g, &[vec![1]]).unwrap();
        assert!(matches!(
            evaluate_word(&parse_word("x1x2", 2).unwrap(), &g, &t),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((1..=rank, any::<bool>()), 0..max_len).prop_map(move |v| {
            let letters = v
                .into_iter()
                .map(|(g, inv)| Letter {
                    generator: g,
                    inverse: inv,
                })
                .collect();
            Word::from_letters(rank, letters).unwrap()
        })
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent(word in arb_word(3, 40)) {
            let once = free_reduce(&word);
            prop_assert!(once.is_reduced());
            prop_assert_eq!(free_reduce(&once), once);
        }

        #[test]
        fn display_parse_round_trip(word in arb_word(3, 30)) {
            prop_assert_eq!(parse_word(&word.to_string(), 3).unwrap(), word);
        }

        #[test]
        fn evaluation_ignores_free_reduction_and_is_multiplicative(
            u in arb_word(2, 25),
            v in arb_word(2, 25),
            coords in proptest::collection::vec(-4i64..=4, 6),
        ) {
            let g = Group::from_spec(GroupSpec::heisenberg(1, None)).unwrap();
            let t = Tuple::from_coords(&g, &[coords[0..3].to_vec(), coords[3..6].to_vec()]).unwrap();
            let eu = evaluate_word(&u, &g, &t).unwrap();
            prop_assert_eq!(&eu, &evaluate_word(&free_reduce(&u), &g, &t).unwrap());
            let ev = evaluate_word(&v, &g, &t).unwrap();
            prop_assert_eq!(
                evaluate_word(&u.concat(&v), &g, &t).unwrap(),
                g.mul(&eu, &ev).unwrap()
            );
        }
    }
}
