use serde::{Deserialize, Serialize};

use maxcsp_core::Predicate;
use maxcsp_monge::Axis;

use crate::SupermodError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripStep {
    pub axis: Axis,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stripped {
    pub predicate: Predicate,
    pub log: Vec<StripStep>,
    /// The result is all-zero.
    pub trivial: bool,
}

/// Zeroes all-ones lines (columns first, lowest index first) until none remain.
///
/// Zeroing such a line never changes the set of chains on which the
/// predicate is supermodular.
pub fn strip_all_ones(h: &Predicate) -> Result<Stripped, SupermodError> {
    if h.arity() != 2 {
        return Err(maxcsp_core::CoreError::NotBinary(h.arity()).into());
    }
    let d = h.domain_size();
    let mut t = h.table().to_vec();
    let mut log = Vec::new();
    loop {
        let col = (0..d).find(|&c| (0..d).all(|r| t[r * d + c]));
        let row = || (0..d).find(|&r| (0..d).all(|c| t[r * d + c]));
        let step = match col {
            Some(index) => StripStep { axis: Axis::Column, index },
            None => match row() {
                Some(index) => StripStep { axis: Axis::Row, index },
                None => break,
            },
        };
        for x in 0..d {
            let cell = match step.axis {
                Axis::Column => x * d + step.index,
                Axis::Row => step.index * d + x,
            };
            t[cell] = false;
        }
        log.push(step);
    }
    let predicate = Predicate::new(d, 2, t)?;
    let trivial = predicate.is_trivial();
    Ok(Stripped { predicate, log, trivial })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = strip_all_ones(&Predicate::from_rows("11/11").unwrap()).unwrap();
        assert!(s.trivial);
        assert_eq!(s.log.len(), 2);

        let s = strip_all_ones(&Predicate::from_rows("100/100/100").unwrap()).unwrap();
        assert_eq!(s.predicate.to_rows_string(), "000/000/000");
        assert_eq!(s.log, vec![StripStep { axis: Axis::Column, index: 0 }]);

        let s = strip_all_ones(&Predicate::from_rows("110/101/100").unwrap()).unwrap();
        assert_eq!(s.predicate.to_rows_string(), "010/001/000");

        let h = Predicate::from_rows("1000/0000/0000/0001").unwrap();
        let s = strip_all_ones(&h).unwrap();
        assert_eq!((s.predicate, s.log.len(), s.trivial), (h, 0, false));

        let s = strip_all_ones(&Predicate::from_rows("000/111/010").unwrap()).unwrap();
        assert_eq!(s.predicate.to_rows_string(), "000/000/010");
        assert_eq!(s.log, vec![StripStep { axis: Axis::Row, index: 1 }]);
    }
}
