//! Shard files: one per column, each a fixed header followed by that
//! column's lanes for every stripe.
//!
//! Header layout, little-endian:
//!
//! ```text
//! offset  size  field
//!      0     8  magic "EOFLEX01"
//!      8     2  version
//!     10     4  tau
//!     14     4  p
//!     18     4  k
//!     22     2  column_index
//!     24     4  lane_width
//!     28     8  stripe_count
//!     36     8  original_length
//!     44     4  header_crc (CRC-32 of bytes 0..44)
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::{Path, PathBuf};

use crate::array::{CodeArray, ErasurePattern};
use crate::codec::encode;
use crate::decoder::decode;
use crate::error::{Error, Result};
use crate::params::CodeParams;

pub const MAGIC: [u8; 8] = *b"EOFLEX01";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 48;
/// Lane width used when sharding files.
pub const DEFAULT_SHARD_LANE_WIDTH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardHeader {
    pub version: u16,
    pub tau: u32,
    pub p: u32,
    pub k: u32,
    pub column_index: u16,
    pub lane_width: u32,
    pub stripe_count: u64,
    pub original_length: u64,
}

impl ShardHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..8].copy_from_slice(&MAGIC);
        b[8..10].copy_from_slice(&self.version.to_le_bytes());
        b[10..14].copy_from_slice(&self.tau.to_le_bytes());
        b[14..18].copy_from_slice(&self.p.to_le_bytes());
        b[18..22].copy_from_slice(&self.k.to_le_bytes());
        b[22..24].copy_from_slice(&self.column_index.to_le_bytes());
        b[24..28].copy_from_slice(&self.lane_width.to_le_bytes());
        b[28..36].copy_from_slice(&self.stripe_count.to_le_bytes());
        b[36..44].copy_from_slice(&self.original_length.to_le_bytes());
        let crc = crc32fast::hash(&b[..44]);
        b[44..48].copy_from_slice(&crc.to_le_bytes());
        b
    }

    /// Parses a header read from the file of column `column`.
    pub fn from_bytes(b: &[u8], column: usize) -> Result<Self> {
        if b.len() < HEADER_LEN {
            return Err(Error::MalformedShard(format!("shard {column}: short header")));
        }
        let stored = u32::from_le_bytes(b[44..48].try_into().unwrap());
        if crc32fast::hash(&b[..44]) != stored {
            return Err(Error::CrcFailure(column));
        }
        if b[0..8] != MAGIC {
            return Err(Error::MalformedShard(format!("shard {column}: bad magic")));
        }
        let u16_at = |o: usize| u16::from_le_bytes(b[o..o + 2].try_into().unwrap());
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(b[o..o + 8].try_into().unwrap());
        let h = Self {
            version: u16_at(8),
            tau: u32_at(10),
            p: u32_at(14),
            k: u32_at(18),
            column_index: u16_at(22),
            lane_width: u32_at(24),
            stripe_count: u64_at(28),
            original_length: u64_at(36),
        };
        if h.version != VERSION {
            return Err(Error::MalformedShard(format!(
                "shard {column}: unsupported version {}",
                h.version
            )));
        }
        if h.column_index as usize != column {
            return Err(Error::HeaderMismatch(format!(
                "file for column {column} declares column {}",
                h.column_index
            )));
        }
        Ok(h)
    }

    pub fn params(&self) -> Result<CodeParams> {
        CodeParams::new(self.tau as i64, self.p as i64, self.k as i64)
    }

    /// Payload bytes that must follow the header.
    pub fn payload_len(&self) -> Result<u64> {
        let rows = self.params()?.rows() as u64;
        self.stripe_count
            .checked_mul(rows)
            .and_then(|v| v.checked_mul(self.lane_width as u64))
            .ok_or_else(|| Error::MalformedShard("payload size overflows".into()))
    }

    fn same_set(&self, other: &Self) -> bool {
        (self.tau, self.p, self.k, self.lane_width, self.stripe_count, self.original_length)
            == (other.tau, other.p, other.k, other.lane_width, other.stripe_count, other.original_length)
    }
}

/// `dir/shard_<col>.eof`.
pub fn shard_path(dir: &Path, column: usize) -> PathBuf {
    dir.join(format!("shard_{column}.eof"))
}

/// Reads until `buf` is full or the reader is exhausted; returns the bytes
/// read.
fn fill(reader: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut n = 0;
    while n < buf.len() {
        match reader.read(&mut buf[n..]) {
            Ok(0) => break,
            Ok(m) => n += m,
            Err(e) if e.kind() == ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(n)
}

/// Splits `input` into stripes and writes `k + 2` shard files into `dir`.
pub fn shard_file(
    input: &Path,
    params: &CodeParams,
    lane_width: usize,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    if lane_width == 0 {
        return Err(Error::ZeroLaneWidth);
    }
    let lane_width_u32 = u32::try_from(lane_width)
        .map_err(|_| Error::InvalidParams("lane width exceeds 32 bits".into()))?;
    let length = fs::metadata(input)?.len();
    let stripe_bytes = (params.info_cells() * lane_width) as u64;
    let stripe_count = length.div_ceil(stripe_bytes);
    fs::create_dir_all(dir)?;

    let paths: Vec<PathBuf> = (0..params.columns()).map(|c| shard_path(dir, c)).collect();
    let mut writers = Vec::with_capacity(paths.len());
    for (c, path) in paths.iter().enumerate() {
        let mut w = BufWriter::new(File::create(path)?);
        let header = ShardHeader {
            version: VERSION,
            tau: params.tau() as u32,
            p: params.p() as u32,
            k: params.k() as u32,
            column_index: c as u16,
            lane_width: lane_width_u32,
            stripe_count,
            original_length: length,
        };
        w.write_all(&header.to_bytes())?;
        writers.push(w);
    }

    let mut reader = BufReader::new(File::open(input)?);
    let mut buf = vec![0u8; stripe_bytes as usize];
    let mut array = CodeArray::new(*params, lane_width)?;
    for _ in 0..stripe_count {
        let n = fill(&mut reader, &mut buf)?;
        array.load_info(&buf[..n]);
        encode(&mut array);
        for (c, w) in writers.iter_mut().enumerate() {
            for i in 0..params.rows() {
                w.write_all(array.cell(i, c))?;
            }
        }
    }
    for w in writers {
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    Ok(paths)
}

/// Outcome of [`reconstruct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub params: CodeParams,
    /// Columns rebuilt from the others.
    pub missing: Vec<usize>,
    pub bytes_written: u64,
}

enum Probe {
    Usable(ShardHeader, BufReader<File>),
    Lost,
}

fn probe(path: &Path, column: usize) -> Result<Probe> {
    let mut file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(Probe::Lost),
        Err(e) => return Err(e.into()),
    };
    let mut head = [0u8; HEADER_LEN];
    if fill(&mut file, &mut head)? < HEADER_LEN {
        return Ok(Probe::Lost);
    }
    let header = match ShardHeader::from_bytes(&head, column) {
        Ok(h) => h,
        Err(Error::CrcFailure(_)) => return Ok(Probe::Lost),
        Err(e) => return Err(e),
    };
    let payload = file.metadata()?.len().saturating_sub(HEADER_LEN as u64);
    if payload != header.payload_len()? {
        return Ok(Probe::Lost);
    }
    Ok(Probe::Usable(header, BufReader::new(file)))
}

/// Highest column index among `shard_<n>.eof` files in `dir`.
fn highest_column(dir: &Path) -> Result<Option<usize>> {
    let mut best = None;
    for entry in fs::read_dir(dir)? {
        let name = entry?.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(n) = name
            .strip_prefix("shard_")
            .and_then(|s| s.strip_suffix(".eof"))
            .and_then(|s| s.parse::<usize>().ok())
        {
            best = best.max(Some(n));
        }
    }
    Ok(best)
}

/// Rebuilds the original file from the shards in `dir`. Absent, truncated
/// and checksum-failing shards count as erased.
pub fn reconstruct(dir: &Path, output: &Path) -> Result<Reconstruction> {
    let Some(top) = highest_column(dir)? else {
        return Err(Error::MalformedShard(format!("no shard files in {}", dir.display())));
    };
    let mut probes = Vec::new();
    for c in 0..=top {
        probes.push(probe(&shard_path(dir, c), c)?);
    }
    let reference = probes
        .iter()
        .find_map(|p| match p {
            Probe::Usable(h, _) => Some(*h),
            Probe::Lost => None,
        })
        .ok_or_else(|| Error::TooManyMissing(top + 1))?;
    let params = reference.params()?;
    let columns = params.columns();
    if top >= columns {
        return Err(Error::HeaderMismatch(format!(
            "shard {top} is beyond the {columns} columns of {params}"
        )));
    }
    probes.resize_with(columns, || Probe::Lost);
    for p in &probes {
        if let Probe::Usable(h, _) = p {
            if !h.same_set(&reference) {
                return Err(Error::HeaderMismatch(format!(
                    "shard {} disagrees with shard {}",
                    h.column_index, reference.column_index
                )));
            }
        }
    }
    let missing: Vec<usize> = probes
        .iter()
        .enumerate()
        .filter(|(_, p)| matches!(p, Probe::Lost))
        .map(|(c, _)| c)
        .collect();
    if missing.len() > 2 {
        return Err(Error::TooManyMissing(missing.len()));
    }
    let pattern = (!missing.is_empty())
        .then(|| ErasurePattern::new(&params, &missing))
        .transpose()?;

    let lane_width = reference.lane_width as usize;
    let mut array = CodeArray::new(params, lane_width)?;
    let mut out = BufWriter::new(File::create(output)?);
    let mut remaining = reference.original_length;
    for _ in 0..reference.stripe_count {
        for (c, p) in probes.iter_mut().enumerate() {
            match p {
                Probe::Usable(_, reader) => {
                    for i in 0..params.rows() {
                        reader.read_exact(array.cell_mut(i, c))?;
                    }
                }
                Probe::Lost => array.clear_column(c),
            }
        }
        if let Some(pattern) = &pattern {
            decode(&mut array, pattern)?;
        }
        let info = array.info_bytes();
        let take = remaining.min(info.len() as u64) as usize;
        out.write_all(&info[..take])?;
        remaining -= take as u64;
    }
    out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    Ok(Reconstruction {
        params,
        missing,
        bytes_written: reference.original_length - remaining,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngCore, SeedableRng};

    fn header() -> ShardHeader {
        ShardHeader {
            version: VERSION,
            tau: 2,
            p: 5,
            k: 3,
            column_index: 4,
            lane_width: 4096,
            stripe_count: 11,
            original_length: 1 << 20,
        }
    }

    #[test]
    fn header_round_trip() {
        let h = header();
        let b = h.to_bytes();
        assert_eq!(&b[..8], b"EOFLEX01");
        assert_eq!(ShardHeader::from_bytes(&b, 4).unwrap(), h);
        assert_eq!(h.payload_len().unwrap(), 11 * 8 * 4096);
    }

    #[test]
    fn header_checksum_detects_flips() {
        let mut b = header().to_bytes();
        b[12] ^= 1;
        assert!(matches!(ShardHeader::from_bytes(&b, 4), Err(Error::CrcFailure(4))));
        let b = header().to_bytes();
        assert!(matches!(ShardHeader::from_bytes(&b, 3), Err(Error::HeaderMismatch(_))));
    }

    fn round_trip(len: usize, lost: &[usize], lane: usize) {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.bin");
        let mut data = vec![0u8; len];
        rand_chacha::ChaCha8Rng::seed_from_u64(len as u64).fill_bytes(&mut data);
        fs::write(&input, &data).unwrap();
        let params = CodeParams::new(2, 5, 3).unwrap();
        let shards = dir.path().join("shards");
        shard_file(&input, &params, lane, &shards).unwrap();
        for &c in lost {
            fs::remove_file(shard_path(&shards, c)).unwrap();
        }
        let out = dir.path().join("out.bin");
        let r = reconstruct(&shards, &out).unwrap();
        assert_eq!(r.missing, lost);
        assert_eq!(fs::read(&out).unwrap(), data);
    }

    #[test]
    fn empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("empty");
        fs::write(&input, b"").unwrap();
        let params = CodeParams::new(2, 5, 3).unwrap();
        let paths = shard_file(&input, &params, 4, dir.path()).unwrap();
        assert_eq!(paths.len(), 5);
        for p in &paths {
            assert_eq!(fs::metadata(p).unwrap().len(), HEADER_LEN as u64);
        }
        let out = dir.path().join("out");
        reconstruct(dir.path(), &out).unwrap();
        assert!(fs::read(&out).unwrap().is_empty());
    }

    #[test]
    fn small_files_survive_losses() {
        round_trip(1000, &[], 4);
        round_trip(1000, &[3, 4], 4);
        round_trip(1000, &[1, 3], 4);
        round_trip(5000, &[0, 2], 8);
        round_trip(96, &[2], 4);
    }

    #[test]
    fn corrupt_header_counts_as_erasure() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in");
        fs::write(&input, vec![7u8; 300]).unwrap();
        let params = CodeParams::new(2, 5, 3).unwrap();
        let shards = dir.path().join("s");
        shard_file(&input, &params, 4, &shards).unwrap();
        let path = shard_path(&shards, 1);
        let mut bytes = fs::read(&path).unwrap();
        bytes[20] ^= 0xff;
        fs::write(&path, bytes).unwrap();
        fs::remove_file(shard_path(&shards, 4)).unwrap();
        let out = dir.path().join("out");
        assert_eq!(reconstruct(&shards, &out).unwrap().missing, vec![1, 4]);
        assert_eq!(fs::read(&out).unwrap(), vec![7u8; 300]);
    }

    #[test]
    fn three_losses_are_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in");
        fs::write(&input, b"abc").unwrap();
        let params = CodeParams::new(2, 5, 3).unwrap();
        shard_file(&input, &params, 4, dir.path()).unwrap();
        for c in [0, 1, 2] {
            fs::remove_file(shard_path(dir.path(), c)).unwrap();
        }
        let out = dir.path().join("out");
        assert!(matches!(reconstruct(dir.path(), &out), Err(Error::TooManyMissing(3))));
    }
}
