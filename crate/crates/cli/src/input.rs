//! Parsing of command-line values and input files.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use chaotic_iterations::hash::HashKey;
use chaotic_iterations::{
    make_negation, parse_truth_table, StateVector, Strategy, StrategyTerm, TermKind, UpdateFunction,
};

use crate::CliError;

pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn open_input(path: &Path) -> Result<Box<dyn Read>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin().lock()));
    }
    let file = fs::File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(Box::new(io::BufReader::new(file)))
}

/// `neg:N` for vectorial negation on `N` cells, anything else is a truth-table path.
pub fn load_function(source: &str) -> Result<UpdateFunction, CliError> {
    if let Some(n) = source.strip_prefix("neg:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad arity in {source:?}")))?;
        return make_negation(n).map_err(|e| CliError::Usage(e.to_string()));
    }
    let bytes = read_input(Path::new(source))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Domain(format!("malformed truth table {source}: not UTF-8")))?;
    parse_truth_table(&text)
        .map_err(|e| CliError::Domain(format!("malformed truth table {source}: {e}")))
}

pub fn decode_hex(flag: &str, text: &str) -> Result<Vec<u8>, CliError> {
    hex::decode(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

pub fn hash_key(k1: &str, k2: &str, rounds: Option<usize>) -> Result<HashKey, CliError> {
    let key = HashKey::new(decode_hex("k1", k1)?, decode_hex("k2", k2)?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(match rounds {
        Some(r) => key.with_rounds(r),
        None => key,
    })
}

pub fn state(flag: &str, n: usize, text: &str) -> Result<StateVector, CliError> {
    StateVector::from_hex(n, text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

/// A term is `i`, `i+j+...`, or `-` for the empty subset.
pub fn term(text: &str, subset: bool) -> Result<StrategyTerm, CliError> {
    let bad = || CliError::Usage(format!("bad strategy term {text:?}"));
    let text = text.trim();
    if !subset {
        return text.parse().map(StrategyTerm::Unary).map_err(|_| bad());
    }
    if text == "-" {
        return Ok(StrategyTerm::subset([]));
    }
    let cells = text
        .split('+')
        .map(|c| c.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StrategyTerm::subset(cells))
}

pub fn strategy(n: usize, csv: &str, subset: bool) -> Result<Strategy, CliError> {
    let terms = if csv.trim().is_empty() {
        Vec::new()
    } else {
        csv.split(',')
            .map(|t| term(t, subset))
            .collect::<Result<Vec<_>, _>>()?
    };
    let kind = if subset {
        TermKind::Subset
    } else {
        TermKind::Unary
    };
    Strategy::from_terms(n, kind, terms).map_err(|e| CliError::Usage(format!("--strategy: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Framing {
    /// Consecutive frames of exactly `frame-bits / 8` bytes.
    Fixed,
    /// Each frame preceded by its byte length as a big-endian u32.
    LengthPrefixed,
}

/// Reads frames of `frame_bytes` bytes one at a time.
pub struct FrameReader<R> {
    inner: R,
    frame_bytes: usize,
    framing: Framing,
    index: usize,
}

impl<R: Read> FrameReader<R> {
    pub fn new(inner: R, frame_bytes: usize, framing: Framing) -> Self {
        FrameReader {
            inner,
            frame_bytes,
            framing,
            index: 0,
        }
    }

    fn fill(&mut self, buf: &mut [u8]) -> Result<usize, CliError> {
        let mut got = 0;
        while got < buf.len() {
            match self.inner.read(&mut buf[got..]) {
                Ok(0) => break,
                Ok(k) => got += k,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(CliError::Usage(format!("cannot read input: {e}"))),
            }
        }
        Ok(got)
    }

    pub fn next_frame(&mut self) -> Result<Option<Vec<u8>>, CliError> {
        let t = self.index;
        if self.framing == Framing::LengthPrefixed {
            let mut head = [0u8; 4];
            match self.fill(&mut head)? {
                0 => return Ok(None),
                4 => {}
                _ => {
                    return Err(CliError::Domain(format!(
                        "truncated length prefix at frame {t}"
                    )))
                }
            }
            let len = u32::from_be_bytes(head) as usize;
            if len != self.frame_bytes {
                return Err(CliError::Domain(format!(
                    "frame size mismatch: frame {t} has {len} bytes, expected {}",
                    self.frame_bytes
                )));
            }
        }
        let mut frame = vec![0u8; self.frame_bytes];
        let got = self.fill(&mut frame)?;
        if got == 0 && self.framing == Framing::Fixed {
            return Ok(None);
        }
        if got < self.frame_bytes {
            return Err(CliError::Domain(format!(
                "frame size mismatch: frame {t} has {got} bytes, expected {}",
                self.frame_bytes
            )));
        }
        self.index += 1;
        Ok(Some(frame))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        assert_eq!(term("3", false).unwrap(), StrategyTerm::Unary(3));
        assert_eq!(term("2+1", true).unwrap(), StrategyTerm::subset([1, 2]));
        assert_eq!(term("-", true).unwrap(), StrategyTerm::subset([]));
        assert!(term("x", false).is_err());
        assert!(term("1+", true).is_err());
    }

    fn all(data: &[u8], size: usize, framing: Framing) -> Result<Vec<Vec<u8>>, CliError> {
        let mut r = FrameReader::new(data, size, framing);
        let mut out = Vec::new();
        while let Some(f) = r.next_frame()? {
            out.push(f);
        }
        Ok(out)
    }

    #[test]
    fn framing() {
        let data = [1u8, 2, 3, 4];
        assert_eq!(all(&data, 2, Framing::Fixed).unwrap().len(), 2);
        assert!(all(&data, 3, Framing::Fixed).is_err());
        assert!(all(&[], 3, Framing::Fixed).unwrap().is_empty());
        let prefixed = [0, 0, 0, 2, 9, 9, 0, 0, 0, 2, 7, 7];
        let f = all(&prefixed, 2, Framing::LengthPrefixed).unwrap();
        assert_eq!(f, vec![vec![9u8, 9], vec![7, 7]]);
        assert!(all(&prefixed, 3, Framing::LengthPrefixed).is_err());
        assert!(all(&prefixed[..5], 2, Framing::LengthPrefixed).is_err());
        assert!(all(&prefixed[..2], 2, Framing::LengthPrefixed).is_err());
    }
}
