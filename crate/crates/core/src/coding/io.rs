//! Plain-text codebook container.
//!
//! ```text
//! fhjam-codebook 1
//! <K> <n> <M> <gamma>
//! <row 0 of codeword 0: n entries>
//! ...
//! <row K-1 of codeword M-1>
//! ```
//!
//! Entries use the shortest decimal form that parses back to the same `f64`,
//! so a write/read cycle reproduces the codebook exactly.

use std::io::{BufRead, Write};

use crate::coding::Codebook;
use crate::error::{Error, Result};
use crate::matrix::BlockMatrix;

const MAGIC: &str = "fhjam-codebook";
const VERSION: u32 = 1;

fn format_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("codebook line {line}: {msg}"))
}

impl Codebook {
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{MAGIC} {VERSION}")?;
        writeln!(w, "{} {} {} {}", self.bands, self.n, self.messages(), self.gamma)?;
        let mut row = vec![0.0; self.n];
        for m in 0..self.messages() {
            for band in 0..self.bands {
                row.iter_mut().for_each(|v| *v = 0.0);
                for (col, (&b, &a)) in self
                    .hopping_sequence(m)
                    .iter()
                    .zip(self.amplitudes(m))
                    .enumerate()
                {
                    if b as usize == band {
                        row[col] = a;
                    }
                }
                let line: Vec<String> = row.iter().map(f64::to_string).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(l))) => Ok((i, l)),
                Some((i, Err(e))) => Err(format_err(i, e)),
                None => Err(Error::Format(format!("codebook ended before {what}"))),
            }
        };

        let (i, magic) = next("header")?;
        let mut parts = magic.split_whitespace();
        if parts.next() != Some(MAGIC) {
            return Err(format_err(i, "not a codebook file"));
        }
        match parts.next().map(str::parse::<u32>) {
            Some(Ok(VERSION)) => {}
            other => return Err(format_err(i, format!("unsupported version {other:?}"))),
        }

        let (i, dims) = next("dimensions")?;
        let fields: Vec<&str> = dims.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(format_err(i, "expected `K n M gamma`"));
        }
        let parse_usize = |s: &str| s.parse::<usize>().map_err(|e| format_err(i, e));
        let (bands, n, messages) = (
            parse_usize(fields[0])?,
            parse_usize(fields[1])?,
            parse_usize(fields[2])?,
        );
        let gamma: f64 = fields[3].parse().map_err(|e| format_err(i, e))?;

        let mut words = Vec::with_capacity(messages);
        for m in 0..messages {
            let mut entries = Vec::with_capacity(bands * n);
            for band in 0..bands {
                let (i, line) = next(&format!("codeword {m} row {band}"))?;
                let before = entries.len();
                for tok in line.split_whitespace() {
                    entries.push(tok.parse::<f64>().map_err(|e| format_err(i, e))?);
                }
                if entries.len() - before != n {
                    return Err(format_err(i, format!("expected {n} entries")));
                }
            }
            words.push(BlockMatrix::from_row_major(bands, n, entries)?);
        }
        Codebook::from_codewords(gamma, &words)
    }
}

#[cfg(test)]
mod tests {
    use crate::coding::{Codebook, HoppingPolicy};
    use crate::rng;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn write_read_round_trip(bands in 1usize..4, n in 1usize..12, messages in 1usize..6,
                                 gamma in 0.1f64..5.0, seed in any::<u64>()) {
            let cb = Codebook::random(bands, n, messages, gamma, HoppingPolicy::MessageKeyed,
                                      &mut rng::derive(seed, &[])).unwrap();
            let mut buf = Vec::new();
            cb.write_to(&mut buf).unwrap();
            let back = Codebook::read_from(buf.as_slice()).unwrap();
            prop_assert_eq!(back, cb);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Codebook::read_from("nope 1\n".as_bytes()).is_err());
        assert!(Codebook::read_from("fhjam-codebook 2\n1 1 1 1\n0\n".as_bytes()).is_err());
        assert!(Codebook::read_from("fhjam-codebook 1\n1 2 1 1\n0.5\n".as_bytes()).is_err());
        assert!(Codebook::read_from("fhjam-codebook 1\n1 2 2 1\n0.5 0.5\n".as_bytes()).is_err());
        let ok = Codebook::read_from("fhjam-codebook 1\n2 1 1 1\n0.5\n0\n".as_bytes()).unwrap();
        assert_eq!(ok.hopping_sequence(0), &[0]);
    }
}
