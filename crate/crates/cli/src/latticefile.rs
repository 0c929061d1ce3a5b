//! The on-disk lattice document: UTF-8 JSON with keys `d`, `classic`, and
//! `gram`, where every Gram entry is a triple `[p, q, den]` meaning
//! `(p + q·ω_d)/den` with `den ∈ {1, 2}`.
//!
//! Parsing yields a validated [`Lattice`] or a position-annotated error;
//! serializing a canonical lattice and parsing it back is the identity.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use uqlat::exact::FieldMatrix;
use uqlat::lattice::Lattice;
use uqlat::{FieldElem, QuadField};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeFile {
    pub d: i64,
    pub classic: bool,
    pub gram: Vec<Vec<[i64; 3]>>,
}

#[derive(Debug)]
pub struct FileError(pub String);

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FileError {}

/// `(p + q·ω_d)/den` as an exact field element.
pub fn entry_to_elem(field: QuadField, p: i64, q: i64, den: i64) -> FieldElem {
    let omega = field.omega();
    let num = &FieldElem::from_int(field, p) + &(&FieldElem::from_int(field, q) * &omega);
    &num / &FieldElem::from_int(field, den)
}

/// The canonical `[p, q, den]` triple of an element of `(1/2)·O_F`.
pub fn elem_to_entry(e: &FieldElem) -> Result<[i64; 3], FileError> {
    let s = e.omega_coord();
    let r = e.rational_coord();
    let den: BigInt = r.denom().lcm(s.denom());
    if den > BigInt::from(2) {
        return Err(FileError(format!(
            "entry {e} is not half-integral and cannot be serialized"
        )));
    }
    let p = (r.numer() * &den) / r.denom();
    let q = (s.numer() * &den) / s.denom();
    let to_i64 = |v: &BigInt| -> Result<i64, FileError> {
        i64::try_from(v).map_err(|_| FileError(format!("entry {e} exceeds the file range")))
    };
    Ok([to_i64(&p)?, to_i64(&q)?, to_i64(&den)?])
}

pub fn parse(text: &str) -> Result<(LatticeFile, Lattice), FileError> {
    let file: LatticeFile =
        serde_json::from_str(text).map_err(|e| FileError(format!("parse error: {e}")))?;
    let lattice = to_lattice(&file)?;
    Ok((file, lattice))
}

pub fn to_lattice(file: &LatticeFile) -> Result<Lattice, FileError> {
    let field = QuadField::new(file.d).map_err(|e| FileError(e.to_string()))?;
    let n = file.gram.len();
    if n == 0 {
        return Err(FileError("gram matrix is empty".into()));
    }
    for (i, row) in file.gram.iter().enumerate() {
        if row.len() != n {
            return Err(FileError(format!(
                "gram row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &[_, _, den]) in row.iter().enumerate() {
            if den != 1 && den != 2 {
                return Err(FileError(format!(
                    "gram entry ({i}, {j}) has denominator {den}; only 1 and 2 are allowed"
                )));
            }
        }
    }
    let gram = FieldMatrix::from_fn(field, n, |i, j| {
        let [p, q, den] = file.gram[i][j];
        entry_to_elem(field, p, q, den)
    });
    Lattice::new(field, gram, file.classic).map_err(|e| FileError(e.to_string()))
}

pub fn from_lattice(l: &Lattice) -> Result<LatticeFile, FileError> {
    let n = l.rank();
    let mut gram = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(elem_to_entry(l.gram().at(i, j))?);
        }
        gram.push(row);
    }
    Ok(LatticeFile {
        d: l.field().d(),
        classic: l.is_classic(),
        gram,
    })
}

/// Canonical serialization: pretty JSON with a trailing newline.
pub fn serialize(file: &LatticeFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_identity_on_canonical_documents() {
        let field = QuadField::new(5).unwrap();
        let l = Lattice::unit(field, 3);
        let file = from_lattice(&l).unwrap();
        let text = serialize(&file);
        let (file2, l2) = parse(&text).unwrap();
        assert_eq!(l, l2);
        assert_eq!(text, serialize(&file2));
    }

    #[test]
    fn omega_entries_roundtrip() {
        let field = QuadField::new(13).unwrap();
        // Gram [[3, ω], [ω̄... symmetric ω], [.., 5]] — entry (p,q,den) = (0,1,1)
        let e = entry_to_elem(field, 0, 1, 1);
        assert_eq!(e, field.omega());
        assert_eq!(elem_to_entry(&e).unwrap(), [0, 1, 1]);
        // half-integral entry ω/2 → (0, 1, 2)
        let h = entry_to_elem(field, 0, 1, 2);
        assert_eq!(elem_to_entry(&h).unwrap(), [0, 1, 2]);
        // 3 − 2ω
        let x = entry_to_elem(field, 3, -2, 1);
        assert_eq!(elem_to_entry(&x).unwrap(), [3, -2, 1]);
    }

    #[test]
    fn rejects_bad_denominator_and_shape() {
        let text = r#"{"d": 5, "classic": true, "gram": [[[1, 0, 3]]]}"#;
        let err = parse(text).unwrap_err();
        assert!(err.0.contains("denominator"), "{err}");

        let text = r#"{"d": 5, "classic": true, "gram": [[[1, 0, 1], [0, 0, 1]]]}"#;
        let err = parse(text).unwrap_err();
        assert!(err.0.contains("expected"), "{err}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse("{\"d\": 5,\n  \"classic\": tru }").unwrap_err();
        assert!(err.0.contains("line"), "{err}");
    }
}
