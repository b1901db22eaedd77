//! Checkpoint file for resumable searches.
//!
//! Layout (all integers little-endian): a fixed header
//! `magic "GFCK" | version u32 | n_max u32 | range_bits u32`, then one
//! length-prefixed record per completed work range:
//! `len u32 | n u32 | range_id u32 | max_len u32 | witness_flag u8 |
//! witness u64 | seeds u64`.
//!
//! A record is appended only after its range finished, so a killed run
//! leaves at most one torn record at the tail; the reader drops it and the
//! range is simply recomputed. Header mismatches (wrong degree or range
//! partition) are errors: merging partials across different partitions
//! would be wrong.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::Mutex;

use thiserror::Error;

const MAGIC: [u8; 4] = *b"GFCK";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;
const RECORD_LEN: usize = 29;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    UnsupportedVersion(u32),
    #[error("checkpoint was written for n_max={found_n} range_bits={found_bits}, expected n_max={expected_n} range_bits={expected_bits}")]
    Mismatch {
        expected_n: u32,
        expected_bits: u32,
        found_n: u32,
        found_bits: u32,
    },
    #[error("corrupt checkpoint record (length {0})")]
    BadRecordLength(u32),
}

/// Result of scanning one work range: the maximum trajectory length, the
/// smallest mask attaining it, and how many seeds were examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangePartial {
    pub max_len: u32,
    pub witness: Option<u64>,
    pub seeds: u64,
}

impl RangePartial {
    pub const EMPTY: RangePartial = RangePartial {
        max_len: 0,
        witness: None,
        seeds: 0,
    };

    /// Associative, commutative merge: larger length wins, ties keep the
    /// smaller mask; seed counts add.
    pub fn merge(self, other: RangePartial) -> RangePartial {
        use std::cmp::Ordering;
        let witness = match self.max_len.cmp(&other.max_len) {
            Ordering::Greater => self.witness.or(other.witness),
            Ordering::Less => other.witness.or(self.witness),
            Ordering::Equal => match (self.witness, other.witness) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        };
        RangePartial {
            max_len: self.max_len.max(other.max_len),
            witness,
            seeds: self.seeds + other.seeds,
        }
    }
}

/// Append-only checkpoint writer shared across worker threads.
pub struct CheckpointFile {
    file: Mutex<File>,
}

impl CheckpointFile {
    /// Starts a fresh checkpoint, truncating any existing file.
    pub fn create(path: &Path, n_max: u32, range_bits: u32) -> Result<Self, CheckpointError> {
        let mut file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(path)?;
        let mut header = Vec::with_capacity(HEADER_LEN);
        header.extend_from_slice(&MAGIC);
        header.extend_from_slice(&VERSION.to_le_bytes());
        header.extend_from_slice(&n_max.to_le_bytes());
        header.extend_from_slice(&range_bits.to_le_bytes());
        file.write_all(&header)?;
        file.flush()?;
        Ok(CheckpointFile {
            file: Mutex::new(file),
        })
    }

    /// Opens an existing checkpoint for resuming: validates the header,
    /// returns the completed ranges, and positions the file for appending.
    #[allow(clippy::type_complexity)]
    pub fn resume(
        path: &Path,
        n_max: u32,
        range_bits: u32,
    ) -> Result<(Self, HashMap<(u32, u32), RangePartial>), CheckpointError> {
        let mut file = OpenOptions::new().read(true).write(true).open(path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;
        if bytes.len() < HEADER_LEN || bytes[..4] != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(CheckpointError::UnsupportedVersion(version));
        }
        let found_n = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let found_bits = u32::from_le_bytes(bytes[12..16].try_into().unwrap());
        if found_n != n_max || found_bits != range_bits {
            return Err(CheckpointError::Mismatch {
                expected_n: n_max,
                expected_bits: range_bits,
                found_n,
                found_bits,
            });
        }

        let mut completed = HashMap::new();
        let mut offset = HEADER_LEN;
        let mut valid_end = offset;
        while offset + 4 <= bytes.len() {
            let len = u32::from_le_bytes(bytes[offset..offset + 4].try_into().unwrap());
            if len as usize != RECORD_LEN {
                return Err(CheckpointError::BadRecordLength(len));
            }
            let body_start = offset + 4;
            let body_end = body_start + RECORD_LEN;
            if body_end > bytes.len() {
                break; // torn tail from a killed write; recompute that range
            }
            let rec = &bytes[body_start..body_end];
            let n = u32::from_le_bytes(rec[0..4].try_into().unwrap());
            let range_id = u32::from_le_bytes(rec[4..8].try_into().unwrap());
            let max_len = u32::from_le_bytes(rec[8..12].try_into().unwrap());
            let witness = if rec[12] != 0 {
                Some(u64::from_le_bytes(rec[13..21].try_into().unwrap()))
            } else {
                None
            };
            let seeds = u64::from_le_bytes(rec[21..29].try_into().unwrap());
            completed.insert(
                (n, range_id),
                RangePartial {
                    max_len,
                    witness,
                    seeds,
                },
            );
            offset = body_end;
            valid_end = body_end;
        }
        // Drop any torn tail so new appends start at a record boundary.
        file.set_len(valid_end as u64)?;
        file.seek(SeekFrom::End(0))?;
        Ok((
            CheckpointFile {
                file: Mutex::new(file),
            },
            completed,
        ))
    }

    pub fn append(
        &self,
        n: u32,
        range_id: u32,
        partial: &RangePartial,
    ) -> Result<(), CheckpointError> {
        let mut buf = Vec::with_capacity(4 + RECORD_LEN);
        buf.extend_from_slice(&(RECORD_LEN as u32).to_le_bytes());
        buf.extend_from_slice(&n.to_le_bytes());
        buf.extend_from_slice(&range_id.to_le_bytes());
        buf.extend_from_slice(&partial.max_len.to_le_bytes());
        buf.push(u8::from(partial.witness.is_some()));
        buf.extend_from_slice(&partial.witness.unwrap_or(0).to_le_bytes());
        buf.extend_from_slice(&partial.seeds.to_le_bytes());
        let mut file = self.file.lock().expect("checkpoint lock");
        file.write_all(&buf)?;
        file.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.bin");
        let ck = CheckpointFile::create(&path, 12, 3).unwrap();
        ck.append(
            12,
            0,
            &RangePartial {
                max_len: 7,
                witness: Some(0x1015),
                seeds: 64,
            },
        )
        .unwrap();
        ck.append(11, 5, &RangePartial::EMPTY).unwrap();
        drop(ck);

        // Simulate a kill mid-append: truncate into the second record.
        let full = std::fs::read(&path).unwrap();
        std::fs::write(&path, &full[..full.len() - 7]).unwrap();

        let (_ck, completed) = CheckpointFile::resume(&path, 12, 3).unwrap();
        assert_eq!(completed.len(), 1);
        assert_eq!(
            completed[&(12, 0)],
            RangePartial {
                max_len: 7,
                witness: Some(0x1015),
                seeds: 64
            }
        );
    }

    #[test]
    fn header_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.bin");
        CheckpointFile::create(&path, 12, 3).unwrap();
        assert!(matches!(
            CheckpointFile::resume(&path, 13, 3),
            Err(CheckpointError::Mismatch { .. })
        ));
        assert!(matches!(
            CheckpointFile::resume(&path, 12, 4),
            Err(CheckpointError::Mismatch { .. })
        ));
    }

    #[test]
    fn merge_prefers_longer_then_smaller_mask() {
        let a = RangePartial {
            max_len: 5,
            witness: Some(40),
            seeds: 10,
        };
        let b = RangePartial {
            max_len: 5,
            witness: Some(30),
            seeds: 4,
        };
        let c = RangePartial {
            max_len: 6,
            witness: Some(99),
            seeds: 1,
        };
        assert_eq!(a.merge(b).witness, Some(30));
        assert_eq!(a.merge(b).seeds, 14);
        assert_eq!(a.merge(c).witness, Some(99));
        assert_eq!(b.merge(RangePartial::EMPTY), b);
    }
}
