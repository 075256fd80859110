//! The four-state automaton generating `(t_n, i_n)` and the 2-uniform
//! morphisms whose codings give `i` and the Rudin–Shapiro sequence.
//!
//! States and letters are identified by index: `q0..q3` correspond to the
//! letters `A..D`. Under that identification the image of a letter is the
//! pair of states reached from it on digits 0 and 1, and the coding of a
//! letter is the `i`-component of the state output.

use crate::digits::{to_base_digits, Sign};
use crate::error::{Error, Result};

/// Deterministic finite automaton with output over the binary alphabet.
///
/// Outputs are pairs `(upper, lower)`; for the inversion automaton the upper
/// component is `t_n` and the lower one `i_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    transitions: Vec<[usize; 2]>,
    outputs: Vec<(Sign, Sign)>,
    initial: usize,
}

impl Dfao {
    pub fn new(transitions: Vec<[usize; 2]>, outputs: Vec<(Sign, Sign)>, initial: usize) -> Result<Self> {
        let states = transitions.len();
        if states == 0 || outputs.len() != states {
            return Err(Error::InvalidAutomaton(format!(
                "{states} transition rows but {} outputs",
                outputs.len()
            )));
        }
        if initial >= states {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} does not exist"
            )));
        }
        if let Some(bad) = transitions.iter().flatten().find(|&&q| q >= states) {
            return Err(Error::InvalidAutomaton(format!("transition to missing state {bad}")));
        }
        Ok(Dfao {
            transitions,
            outputs,
            initial,
        })
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transition(&self, state: usize, digit: u8) -> usize {
        self.transitions[state][usize::from(digit & 1)]
    }

    pub fn output(&self, state: usize) -> (Sign, Sign) {
        self.outputs[state]
    }

    /// Runs the automaton on a digit word, most significant digit first, and
    /// returns the halting state.
    pub fn run(&self, digits: &[u8]) -> usize {
        digits.iter().fold(self.initial, |q, &d| self.transition(q, d))
    }

    /// State reached on the canonical binary representation of `n`.
    pub fn state_for(&self, n: u64) -> usize {
        let word = to_base_digits(n, 2).expect("base 2 is valid");
        self.run(word.digits())
    }
}

/// Returns the automaton whose halting state on `binary(n)` carries
/// `((-1)^{s2(n)}, (-1)^{inv2(n)})`.
pub fn inversion_dfao() -> Dfao {
    use Sign::{Minus as M, Plus as P};
    Dfao::new(
        vec![[0, 1], [2, 0], [1, 3], [3, 2]],
        vec![(P, P), (M, P), (M, M), (P, M)],
        0,
    )
    .expect("hard-coded automaton is well formed")
}

/// `(t_n, i_n)` read off the halting state.
pub fn dfao_eval(a: &Dfao, n: u64) -> (Sign, Sign) {
    a.output(a.state_for(n))
}

/// A 2-uniform morphism with a coding to signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSystem {
    alphabet: Vec<char>,
    images: Vec<[usize; 2]>,
    coding: Vec<Sign>,
    seed: usize,
}

impl MorphismSystem {
    /// `images[j]` is the image of `alphabet[j]` and must be a two-letter word
    /// over the alphabet.
    pub fn new(alphabet: &[char], images: &[&str], coding: &[Sign], seed: char) -> Result<Self> {
        if images.len() != alphabet.len() || coding.len() != alphabet.len() {
            return Err(Error::InvalidMorphism(
                "alphabet, images and coding must have equal length".into(),
            ));
        }
        let index_of = |c: char| {
            alphabet
                .iter()
                .position(|&a| a == c)
                .ok_or_else(|| Error::InvalidMorphism(format!("letter {c:?} is not in the alphabet")))
        };
        let images = images
            .iter()
            .map(|img| {
                let letters: Vec<char> = img.chars().collect();
                match letters.as_slice() {
                    [a, b] => Ok([index_of(*a)?, index_of(*b)?]),
                    _ => Err(Error::InvalidMorphism(format!("image {img:?} does not have length 2"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let seed = index_of(seed)?;
        Ok(MorphismSystem {
            alphabet: alphabet.to_vec(),
            images,
            coding: coding.to_vec(),
            seed,
        })
    }

    pub fn seed(&self) -> char {
        self.alphabet[self.seed]
    }

    pub fn image(&self, letter: char) -> Option<String> {
        let j = self.alphabet.iter().position(|&a| a == letter)?;
        Some(self.images[j].iter().map(|&k| self.alphabet[k]).collect())
    }

    pub fn coding(&self, letter: char) -> Option<Sign> {
        let j = self.alphabet.iter().position(|&a| a == letter)?;
        Some(self.coding[j])
    }

    pub fn is_prolongable(&self) -> bool {
        self.images[self.seed][0] == self.seed
    }

    /// Iterator over the fixed point starting with the seed.
    pub fn fixed_point(&self) -> Result<FixedPoint<'_>> {
        if !self.is_prolongable() {
            return Err(Error::NotProlongable(self.seed()));
        }
        Ok(FixedPoint {
            system: self,
            word: vec![self.seed],
            expanded: 0,
            emitted: 0,
        })
    }

    /// Letter at position `n` of the fixed point, in `O(log n)`.
    ///
    /// Uses `w[2m + b] = image(w[m])[b]`, i.e. reads `binary(n)` from the
    /// most significant digit.
    pub fn letter_at(&self, n: u64) -> Result<char> {
        if !self.is_prolongable() {
            return Err(Error::NotProlongable(self.seed()));
        }
        let word = to_base_digits(n, 2).expect("base 2 is valid");
        let idx = word
            .digits()
            .iter()
            .fold(self.seed, |q, &b| self.images[q][usize::from(b)]);
        Ok(self.alphabet[idx])
    }

    pub fn coded_at(&self, n: u64) -> Result<Sign> {
        let letter = self.letter_at(n)?;
        Ok(self.coding(letter).expect("letter comes from the alphabet"))
    }
}

/// Incremental generator for the fixed point of a prolongable 2-uniform
/// morphism: letter `j` of the word is expanded once the consumer needs
/// positions `2j` and `2j+1`.
#[derive(Clone, Debug)]
pub struct FixedPoint<'a> {
    system: &'a MorphismSystem,
    word: Vec<usize>,
    expanded: usize,
    emitted: usize,
}

impl Iterator for FixedPoint<'_> {
    type Item = char;

    fn next(&mut self) -> Option<char> {
        while self.word.len() <= self.emitted {
            let letter = self.word[self.expanded];
            let [a, b] = self.system.images[letter];
            if self.expanded == 0 {
                // image of the seed starts with the seed, which is already in place
                self.word.push(b);
            } else {
                self.word.push(a);
                self.word.push(b);
            }
            self.expanded += 1;
        }
        let c = self.system.alphabet[self.word[self.emitted]];
        self.emitted += 1;
        Some(c)
    }
}

const LETTERS: [char; 4] = ['A', 'B', 'C', 'D'];

fn abcd_coding() -> [Sign; 4] {
    [Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus]
}

/// `A -> AB, B -> CA, C -> BD, D -> DC` with `A, B -> +1`, `C, D -> -1`.
pub fn morphism_g() -> MorphismSystem {
    MorphismSystem::new(&LETTERS, &["AB", "CA", "BD", "DC"], &abcd_coding(), 'A')
        .expect("hard-coded morphism is well formed")
}

/// `A -> AB, B -> AC, C -> DB, D -> DC` with the same coding; yields the
/// Rudin–Shapiro sequence.
pub fn morphism_rs() -> MorphismSystem {
    MorphismSystem::new(&LETTERS, &["AB", "AC", "DB", "DC"], &abcd_coding(), 'A')
        .expect("hard-coded morphism is well formed")
}

/// First `len` letters of the fixed point beginning with the seed.
pub fn fixed_point_prefix(m: &MorphismSystem, len: usize) -> Result<String> {
    if len == 0 {
        return Err(Error::InvalidParameter("prefix length must be positive".into()));
    }
    Ok(m.fixed_point()?.take(len).collect())
}

/// Letterwise coding of [`fixed_point_prefix`].
pub fn coded_prefix(m: &MorphismSystem, len: usize) -> Result<Vec<Sign>> {
    if len == 0 {
        return Err(Error::InvalidParameter("prefix length must be positive".into()));
    }
    Ok(m.fixed_point()?
        .take(len)
        .map(|c| m.coding(c).expect("letter comes from the alphabet"))
        .collect())
}
