//! Fixed inputs shared by the benchmarks.

use quatlat_core::{GroupElement, Lattice, Word};

pub const APARTMENT: (&str, &str) = ("a1,a2',a1,a1", "b3,b2',b3',b1");

pub fn lattice_3_5() -> Lattice {
    Lattice::from_primes(3, 5).expect("3 and 5 are distinct odd primes")
}

/// Elements of Γ_{3,5} used throughout: a generator, a glide, a period
/// element, a conjugated power and a longer mixed word.
pub fn sample_elements(lat: &Lattice) -> Vec<(&'static str, GroupElement)> {
    [
        "a1",
        "a2,b3",
        "a1,a2',a1,a1",
        "b1,a1,a1,a1,a1,a1,a1,b1'",
        "a1,b2,a2',b3',a1,b1,a2,b2'",
    ]
    .into_iter()
    .map(|w| {
        let word: Word = w.parse().expect("valid word");
        (w, lat.evaluate(&word).expect("letters exist"))
    })
    .collect()
}

/// A deterministic stream of freely reduced mixed words. The square
/// relations may still shorten them.
pub fn word_stream(lat: &Lattice, len: usize, count: usize) -> Vec<Word> {
    let letters = lat.all_letters();
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..count)
        .map(|_| {
            let mut w = Vec::with_capacity(len);
            while w.len() < len {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let g = letters[(state % letters.len() as u64) as usize];
                if w.last() != Some(&g.inverse()) {
                    w.push(g);
                }
            }
            Word(w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reduced() {
        let lat = lattice_3_5();
        for w in word_stream(&lat, 12, 50) {
            assert!(w.is_freely_reduced());
            assert!(lat.evaluate(&w).unwrap().length() <= 12);
        }
        assert_eq!(sample_elements(&lat)[3].1.length(), 6);
    }
}
