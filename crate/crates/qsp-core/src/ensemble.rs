//! Recombination-event matrices and their rotation average.
//!
//! At an observation reached by `a_plus` positive and `a_minus` negative
//! paths, pairing the two transmitted qubits in all ways gives a square
//! matrix of +/-1 recombination events. The four ways of assigning qubit
//! types to the two axes are the four quarter-turn rotations of this
//! matrix. Averaging over a full rotation leaves a central square block of
//! `(a_plus - a_minus)^2` unit entries: the equiprobable events that the
//! squared-signal rule counts.

use crate::error::{Error, Result};

/// Square matrix of +/-1 recombination events at one observation, at one
/// of the four quarter-turn rotations.
///
/// At rotation 0 each axis carries the canonical sign sequence (+1 repeated
/// `a_plus` times, then -1 repeated `a_minus` times) and entry `(i, j)` is
/// the product of the axis signs, so the entry sum is
/// `(a_plus - a_minus)^2` and stays so under rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventMatrix {
    size: usize,
    rotation: u8,
    a_plus: u64,
    a_minus: u64,
    entries: Vec<i8>,
}

impl EventMatrix {
    /// Event matrix for `a_plus` positive and `a_minus` negative paths at
    /// the given quarter-turn rotation.
    pub fn build(a_plus: u64, a_minus: u64, rotation: u8) -> Result<Self> {
        if rotation > 3 {
            return Err(Error::InvalidRotation { rotation });
        }
        let total = a_plus.checked_add(a_minus).ok_or(Error::EmptyEventMatrix)?;
        if total == 0 {
            return Err(Error::EmptyEventMatrix);
        }
        let size = usize::try_from(total).map_err(|_| Error::EmptyEventMatrix)?;
        let sign_of = |idx: usize| -> i8 {
            if (idx as u64) < a_plus {
                1
            } else {
                -1
            }
        };
        let mut entries = vec![0i8; size * size];
        for i in 0..size {
            for j in 0..size {
                entries[i * size + j] = sign_of(i) * sign_of(j);
            }
        }
        let mut matrix = Self { size, rotation: 0, a_plus, a_minus, entries };
        for _ in 0..rotation {
            matrix = matrix.rotate();
        }
        Ok(matrix)
    }

    /// Quarter-turn rotation; four applications return the original.
    pub fn rotate(&self) -> Self {
        let n = self.size;
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.entries[j * n + (n - 1 - i)];
            }
        }
        Self {
            size: n,
            rotation: (self.rotation + 1) % 4,
            a_plus: self.a_plus,
            a_minus: self.a_minus,
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rotation(&self) -> u8 {
        self.rotation
    }

    pub fn a_plus(&self) -> u64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> u64 {
        self.a_minus
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.size + col]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn entry_sum(&self) -> i64 {
        self.entries.iter().map(|&e| i64::from(e)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size)
            .all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }
}

/// All four rotations of the event matrix for one observation.
pub fn four_rotations(a_plus: u64, a_minus: u64) -> Result<[EventMatrix; 4]> {
    let r0 = EventMatrix::build(a_plus, a_minus, 0)?;
    let r1 = r0.rotate();
    let r2 = r1.rotate();
    let r3 = r2.rotate();
    Ok([r0, r1, r2, r3])
}

/// Elementwise mean of the four rotations: a 0/1 matrix whose unit entries
/// form the central square block of survivors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BornEnsemble {
    size: usize,
    a_plus: u64,
    a_minus: u64,
    mean: Vec<u8>,
    born_count: u64,
}

impl BornEnsemble {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Mean entry, 0 or 1.
    pub fn mean_entry(&self, row: usize, col: usize) -> u8 {
        self.mean[row * self.size + col]
    }

    pub fn mean_entries(&self) -> &[u8] {
        &self.mean
    }

    /// Number of unit entries, `(a_plus - a_minus)^2`.
    pub fn born_count(&self) -> u64 {
        self.born_count
    }

    /// Side of the central block of unit entries, `|a_plus - a_minus|`.
    pub fn block_side(&self) -> u64 {
        self.a_plus.abs_diff(self.a_minus)
    }
}

/// Average the four rotations and validate the claimed structure.
///
/// Fails with [`Error::EnsembleFalsified`] if any mean entry is not
/// exactly 0 or 1 or the unit entries do not form the central square
/// block of side `|a_plus - a_minus|`. Such a failure would falsify the
/// counting construction, so it is an error rather than a soft result.
pub fn mean_over_rotations(a_plus: u64, a_minus: u64) -> Result<BornEnsemble> {
    let rotations = four_rotations(a_plus, a_minus)?;
    ensemble_from_rotations(a_plus, a_minus, &rotations)
}

fn ensemble_from_rotations(
    a_plus: u64,
    a_minus: u64,
    rotations: &[EventMatrix; 4],
) -> Result<BornEnsemble> {
    let size = rotations[0].size();
    let mut mean = vec![0u8; size * size];
    for i in 0..size {
        for j in 0..size {
            let sum: i32 = rotations.iter().map(|m| i32::from(m.entry(i, j))).sum();
            mean[i * size + j] = match sum {
                4 => 1,
                0 => 0,
                other => {
                    return Err(Error::EnsembleFalsified(format!(
                        "mean entry at ({i}, {j}) is {}/4, expected 0 or 1",
                        other
                    )))
                }
            };
        }
    }

    let side = usize::try_from(a_plus.abs_diff(a_minus)).expect("side <= size");
    let offset = (size - side) / 2;
    let in_block = |idx: usize| idx >= offset && idx < offset + side;
    for i in 0..size {
        for j in 0..size {
            let expected = u8::from(in_block(i) && in_block(j));
            if mean[i * size + j] != expected {
                return Err(Error::EnsembleFalsified(format!(
                    "unit entries do not form the central {side}x{side} block: \
                     mean({i}, {j}) = {}",
                    mean[i * size + j]
                )));
            }
        }
    }

    Ok(BornEnsemble {
        size,
        a_plus,
        a_minus,
        mean,
        born_count: (side * side) as u64,
    })
}

/// Partition cells by their behavior over a full rotation.
///
/// Returns `(invariant, alternating)` where invariant cells hold +1 in
/// all four rotations and alternating cells hold +1 in exactly two. Any
/// other pattern would falsify the two-type claim and is an error.
pub fn classify_cells(a_plus: u64, a_minus: u64) -> Result<(u64, u64)> {
    let rotations = four_rotations(a_plus, a_minus)?;
    let size = rotations[0].size();
    let mut invariant = 0u64;
    let mut alternating = 0u64;
    for i in 0..size {
        for j in 0..size {
            let positives = rotations.iter().filter(|m| m.entry(i, j) > 0).count();
            match positives {
                4 => invariant += 1,
                2 => alternating += 1,
                other => {
                    return Err(Error::CellTypeFalsified(format!(
                        "cell ({i}, {j}) is positive in {other} of four rotations, \
                         expected 4 or 2"
                    )))
                }
            }
        }
    }
    Ok((invariant, alternating))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(matrix: &EventMatrix) -> Vec<Vec<i8>> {
        (0..matrix.size())
            .map(|i| (0..matrix.size()).map(|j| matrix.entry(i, j)).collect())
            .collect()
    }

    #[test]
    fn one_positive_three_negative_at_rotation_zero() {
        let m = EventMatrix::build(1, 3, 0).unwrap();
        assert_eq!(
            rows(&m),
            vec![
                vec![1, -1, -1, -1],
                vec![-1, 1, 1, 1],
                vec![-1, 1, 1, 1],
                vec![-1, 1, 1, 1],
            ]
        );
        assert_eq!(m.entry_sum(), 4);
        assert!(m.is_symmetric());
    }

    #[test]
    fn all_positive_paths_give_all_ones() {
        for rotation in 0..4 {
            let m = EventMatrix::build(2, 0, rotation).unwrap();
            assert!(m.entries().iter().all(|&e| e == 1));
        }
    }

    #[test]
    fn balanced_pair_and_its_rotation() {
        let r0 = EventMatrix::build(1, 1, 0).unwrap();
        assert_eq!(rows(&r0), vec![vec![1, -1], vec![-1, 1]]);
        let r1 = EventMatrix::build(1, 1, 1).unwrap();
        assert_eq!(rows(&r1), vec![vec![-1, 1], vec![1, -1]]);
    }

    #[test]
    fn four_rotations_return_home() {
        for (a_plus, a_minus) in [(1, 3), (2, 2), (4, 1), (5, 0)] {
            let m = EventMatrix::build(a_plus, a_minus, 0).unwrap();
            let back = m.rotate().rotate().rotate().rotate();
            assert_eq!(m, back);
        }
    }

    #[test]
    fn rotate_matches_build_at_next_index() {
        let m = EventMatrix::build(1, 3, 0).unwrap();
        assert_eq!(m.rotate(), EventMatrix::build(1, 3, 1).unwrap());
    }

    #[test]
    fn entry_sum_is_rotation_invariant() {
        for rotation in 0..4 {
            let m = EventMatrix::build(1, 3, rotation).unwrap();
            assert_eq!(m.entry_sum(), 4);
        }
    }

    #[test]
    fn half_turn_is_symmetric() {
        for (a_plus, a_minus) in [(1, 3), (3, 2), (4, 4)] {
            let m = EventMatrix::build(a_plus, a_minus, 2).unwrap();
            assert!(m.is_symmetric());
        }
    }

    #[test]
    fn mean_for_one_against_three() {
        let e = mean_over_rotations(1, 3).unwrap();
        assert_eq!(e.born_count(), 4);
        assert_eq!(e.block_side(), 2);
        let expected = [
            [0, 0, 0, 0],
            [0, 1, 1, 0],
            [0, 1, 1, 0],
            [0, 0, 0, 0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(e.mean_entry(i, j), expected[i][j]);
            }
        }
    }

    #[test]
    fn balanced_counts_cancel_completely() {
        let e = mean_over_rotations(1, 1).unwrap();
        assert_eq!(e.born_count(), 0);
        assert!(e.mean_entries().iter().all(|&v| v == 0));
    }

    #[test]
    fn purely_positive_counts_survive_everywhere() {
        let e = mean_over_rotations(3, 0).unwrap();
        assert_eq!(e.born_count(), 9);
        assert!(e.mean_entries().iter().all(|&v| v == 1));
    }

    #[test]
    fn cell_classes() {
        assert_eq!(classify_cells(1, 3).unwrap(), (4, 12));
        assert_eq!(classify_cells(2, 2).unwrap(), (0, 16));
        assert_eq!(classify_cells(4, 1).unwrap(), (9, 16));
    }

    #[test]
    fn rejects_empty_and_bad_rotation() {
        assert!(matches!(EventMatrix::build(0, 0, 0), Err(Error::EmptyEventMatrix)));
        assert!(matches!(
            EventMatrix::build(1, 0, 4),
            Err(Error::InvalidRotation { rotation: 4 })
        ));
    }

    #[test]
    fn corrupted_rotations_are_reported_as_falsification() {
        let mut rotations = four_rotations(2, 1).unwrap();
        rotations[1].entries[0] = -rotations[1].entries[0];
        let err = ensemble_from_rotations(2, 1, &rotations);
        assert!(matches!(err, Err(Error::EnsembleFalsified(_))));
    }

    // The pairing construction: each axis independently lists either the
    // positive-path qubits first (canonical) or the negative-path qubits
    // first (the reversed sequence, the other type assignment). The four
    // axis choices must produce exactly the four rotations.
    #[test]
    fn axis_assignments_coincide_with_rotations() {
        for a_plus in 0..=6u64 {
            for a_minus in 0..=6u64 {
                if a_plus + a_minus == 0 || a_plus + a_minus > 12 {
                    continue;
                }
                let size = (a_plus + a_minus) as usize;
                let canonical: Vec<i8> = (0..size)
                    .map(|i| if (i as u64) < a_plus { 1 } else { -1 })
                    .collect();
                let reversed: Vec<i8> = canonical.iter().rev().copied().collect();
                let mut from_assignments: Vec<Vec<i8>> = Vec::new();
                for row_signs in [&canonical, &reversed] {
                    for col_signs in [&canonical, &reversed] {
                        let mut entries = vec![0i8; size * size];
                        for i in 0..size {
                            for j in 0..size {
                                entries[i * size + j] = row_signs[i] * col_signs[j];
                            }
                        }
                        from_assignments.push(entries);
                    }
                }
                let mut from_rotations: Vec<Vec<i8>> = four_rotations(a_plus, a_minus)
                    .unwrap()
                    .iter()
                    .map(|m| m.entries().to_vec())
                    .collect();
                from_assignments.sort();
                from_rotations.sort();
                assert_eq!(
                    from_assignments, from_rotations,
                    "axis assignments differ from rotations at ({a_plus}, {a_minus})"
                );
            }
        }
    }
}
