//! Text format for explicit update functions.
//!
//! ```text
//! N=2
//! 03
//! 02
//! 01
//! 00
//! ```
//!
//! The header gives the arity. Line `e` after the header is `f(state(e))`
//! rendered like any state: lowercase hex, `2 * ceil(N / 8)` digits,
//! big-endian with cell 1 in the low bit.

use crate::error::TruthTableError;
use crate::function::{UpdateFunction, MAX_TABLE_ARITY};
use crate::state::StateVector;

pub fn parse_truth_table(text: &str) -> Result<UpdateFunction, TruthTableError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(TruthTableError::MissingHeader)?.trim();
    let arity = header
        .strip_prefix("N=")
        .ok_or(TruthTableError::MissingHeader)?
        .parse::<usize>()
        .map_err(|_| TruthTableError::BadHeader(header.to_string()))?;
    if arity == 0 {
        return Err(TruthTableError::BadHeader(header.to_string()));
    }
    if arity > MAX_TABLE_ARITY {
        return Err(TruthTableError::Oversize(arity));
    }
    let expected = 1usize << arity;
    let mut body: Vec<&str> = lines.map(str::trim).collect();
    while body.last() == Some(&"") {
        body.pop();
    }
    if body.len() != expected {
        return Err(TruthTableError::LineCount {
            expected,
            found: body.len(),
        });
    }
    let digits = arity.div_ceil(8) * 2;
    let mut table = Vec::with_capacity(expected);
    for (k, line) in body.into_iter().enumerate() {
        let bad = || TruthTableError::BadHex {
            line: k + 2,
            text: line.to_string(),
        };
        if line.len() != digits || !line.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let value = u32::from_str_radix(line, 16).map_err(|_| bad())?;
        if value >> arity != 0 {
            return Err(TruthTableError::EntryOutOfRange {
                line: k + 2,
                n: arity,
            });
        }
        table.push(value);
    }
    Ok(UpdateFunction::from_table(arity, table).expect("validated entries"))
}

pub fn write_truth_table(f: &UpdateFunction) -> String {
    use crate::function::BooleanMap;
    let n = f.arity();
    let mut out = format!("N={n}\n");
    for &v in f.table() {
        let s = StateVector::from_index(n, v as u64).expect("table entry in range");
        out.push_str(&s.to_hex());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::make_negation;
    use proptest::prelude::*;

    #[test]
    fn negation_document() {
        let doc = "N=1\n01\n00\n";
        assert_eq!(parse_truth_table(doc).unwrap(), make_negation(1).unwrap());
        assert_eq!(write_truth_table(&make_negation(1).unwrap()), doc);
        assert_eq!(
            write_truth_table(&make_negation(2).unwrap()),
            "N=2\n03\n02\n01\n00\n"
        );
    }

    #[test]
    fn errors_are_distinct() {
        assert_eq!(
            parse_truth_table("N=2\n00\n01\n02\n"),
            Err(TruthTableError::LineCount {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            parse_truth_table("N=1\n00\n01\n00\n"),
            Err(TruthTableError::LineCount {
                expected: 2,
                found: 3
            })
        );
        assert_eq!(parse_truth_table(""), Err(TruthTableError::MissingHeader));
        assert_eq!(
            parse_truth_table("00\n01\n"),
            Err(TruthTableError::MissingHeader)
        );
        assert!(matches!(
            parse_truth_table("N=x\n"),
            Err(TruthTableError::BadHeader(_))
        ));
        assert!(matches!(
            parse_truth_table("N=0\n"),
            Err(TruthTableError::BadHeader(_))
        ));
        assert_eq!(
            parse_truth_table("N=25\n"),
            Err(TruthTableError::Oversize(25))
        );
        assert!(matches!(
            parse_truth_table("N=1\n0g\n00\n"),
            Err(TruthTableError::BadHex { line: 2, .. })
        ));
        assert!(matches!(
            parse_truth_table("N=1\n1\n00\n"),
            Err(TruthTableError::BadHex { line: 2, .. })
        ));
        assert_eq!(
            parse_truth_table("N=1\n00\n02\n"),
            Err(TruthTableError::EntryOutOfRange { line: 3, n: 1 })
        );
    }

    proptest! {
        #[test]
        fn roundtrip(n in 1usize..=3, seed in any::<u64>()) {
            let f = UpdateFunction::from_fn(n, |e| (seed.rotate_left(e * 7) ^ (e as u64 * 0x9e37)) as u32).unwrap();
            let doc = write_truth_table(&f);
            let back = parse_truth_table(&doc).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(write_truth_table(&back), doc);
        }
    }
}
