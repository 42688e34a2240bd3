//! Binary eigenvalue cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      8 bytes  "HECKTBL\0"
//! version    u32
//! spec_len   u32, then spec_len bytes of UTF-8 form spec text
//! n_max      u64
//! raw_width  u32      0 when no exact coefficients are stored
//! raw        n_max * raw_width u64 limbs
//! lambda     n_max f64
//! checksum   32 bytes SHA-256 of every preceding byte
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::form::FormSpec;
use super::raw::RawCoeffs;
use super::table::{build_table, EigenTable};

pub const CACHE_MAGIC: &[u8; 8] = b"HECKTBL\0";
pub const CACHE_VERSION: u32 = 1;

struct HashingWriter<W: Write> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

pub fn write_table<W: Write>(table: &EigenTable, out: W) -> Result<()> {
    let mut w = HashingWriter {
        inner: out,
        hasher: Sha256::new(),
    };
    let spec = table.spec().to_string();
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&(spec.len() as u32).to_le_bytes())?;
    w.write_all(spec.as_bytes())?;
    w.write_all(&(table.n_max() as u64).to_le_bytes())?;
    match table.raw() {
        Some(raw) => {
            w.write_all(&(raw.width() as u32).to_le_bytes())?;
            for chunk in raw.all_limbs().chunks(1 << 16) {
                let bytes: Vec<u8> = chunk.iter().flat_map(|l| l.to_le_bytes()).collect();
                w.write_all(&bytes)?;
            }
        }
        None => w.write_all(&0u32.to_le_bytes())?,
    }
    for chunk in table.lambdas().chunks(1 << 16) {
        let bytes: Vec<u8> = chunk.iter().flat_map(|l| l.to_le_bytes()).collect();
        w.write_all(&bytes)?;
    }
    let digest = w.hasher.finalize();
    w.inner.write_all(&digest)?;
    w.inner.flush()?;
    Ok(())
}

struct HashingReader<R: Read> {
    inner: R,
    hasher: Sha256,
}

impl<R: Read> HashingReader<R> {
    fn take(&mut self, n: usize) -> Result<Vec<u8>> {
        let mut buf = vec![0u8; n];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| Error::Cache("truncated file".into()))?;
        self.hasher.update(&buf);
        Ok(buf)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn read_table<R: Read>(input: R) -> Result<EigenTable> {
    let mut r = HashingReader {
        inner: input,
        hasher: Sha256::new(),
    };
    if r.take(8)? != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = r.u32()?;
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "format version {version}, expected {CACHE_VERSION}"
        )));
    }
    let spec_len = r.u32()? as usize;
    if spec_len > 256 {
        return Err(Error::Cache("implausible spec length".into()));
    }
    let spec_text = String::from_utf8(r.take(spec_len)?)
        .map_err(|_| Error::Cache("spec is not UTF-8".into()))?;
    let spec: FormSpec = spec_text
        .parse()
        .map_err(|e| Error::Cache(format!("spec `{spec_text}`: {e}")))?;
    let n_max = r.u64()? as usize;
    if n_max == 0 {
        return Err(Error::Cache("empty table".into()));
    }
    let width = r.u32()? as usize;
    if width > 16 {
        return Err(Error::Cache("implausible raw width".into()));
    }
    let raw = if width > 0 {
        let bytes = r.take(n_max * width * 8)?;
        let limbs = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Some(RawCoeffs::from_limbs(width, limbs))
    } else {
        None
    };
    let bytes = r.take(n_max * 8)?;
    let mut lambda = Vec::with_capacity(n_max + 1);
    lambda.push(0.0);
    lambda.extend(
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap())),
    );
    let expected = r.hasher.finalize();
    let mut stored = [0u8; 32];
    r.inner
        .read_exact(&mut stored)
        .map_err(|_| Error::Cache("missing checksum".into()))?;
    if stored[..] != expected[..] {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let mut trailing = [0u8; 1];
    if r.inner.read(&mut trailing)? != 0 {
        return Err(Error::Cache("trailing bytes after checksum".into()));
    }
    Ok(EigenTable::from_parts(spec, lambda, raw))
}

pub fn save_table(table: &EigenTable, path: &Path) -> Result<()> {
    write_table(table, BufWriter::new(File::create(path)?))
}

pub fn load_table(path: &Path) -> Result<EigenTable> {
    read_table(BufReader::new(File::open(path)?))
}

/// Conventional file name for a cached table.
pub fn cache_file_name(spec: &FormSpec, n_max: usize) -> String {
    format!("{}-{n_max}.heig", spec.slug())
}

/// Smallest cached table for `spec` in `dir` covering at least `n_min`.
pub fn find_cached(dir: &Path, spec: &FormSpec, n_min: usize) -> Option<PathBuf> {
    let prefix = format!("{}-", spec.slug());
    std::fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let n: usize = name.strip_prefix(&prefix)?.strip_suffix(".heig")?.parse().ok()?;
            (n >= n_min).then_some((n, e.path()))
        })
        .min()
        .map(|(_, p)| p)
}

/// Loads a covering table from `dir` when one is there and intact, otherwise
/// builds one and stores it in `dir`. A failed store is not an error.
pub fn load_or_build(spec: FormSpec, n_max: usize, dir: Option<&Path>) -> Result<EigenTable> {
    if let Some(path) = dir.and_then(|d| find_cached(d, &spec, n_max)) {
        if let Ok(t) = load_table(&path) {
            if t.spec() == &spec && t.n_max() >= n_max {
                return Ok(t);
            }
        }
    }
    let t = build_table(spec, n_max)?;
    if let Some(d) = dir {
        let _ = std::fs::create_dir_all(d).map(|_| save_table(&t, &d.join(cache_file_name(&spec, n_max))));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenvalues::{build_table, DirichletChar};

    fn encode(t: &EigenTable) -> Vec<u8> {
        let mut buf = Vec::new();
        write_table(t, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trips() {
        for spec in [
            FormSpec::Level1Holomorphic { weight: 12 },
            FormSpec::CMGaussian,
            FormSpec::Isobaric {
                psi1: DirichletChar::Trivial,
                psi2: DirichletChar::Kronecker(-4),
            },
        ] {
            let t = build_table(spec, 500).unwrap();
            let back = read_table(encode(&t).as_slice()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn rejects_corruption() {
        let t = build_table(FormSpec::CMGaussian, 50).unwrap();
        let good = encode(&t);

        let mut flipped = good.clone();
        let mid = flipped.len() / 2;
        flipped[mid] ^= 1;
        assert_eq!(
            read_table(flipped.as_slice()).unwrap_err(),
            Error::Cache("checksum mismatch".into())
        );

        let mut version = good.clone();
        version[8] = 2;
        assert!(matches!(
            read_table(version.as_slice()),
            Err(Error::Cache(m)) if m.contains("version")
        ));

        let mut magic = good.clone();
        magic[0] = b'X';
        assert!(read_table(magic.as_slice()).is_err());

        assert!(read_table(&good[..good.len() - 5]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = FormSpec::TrivialQuadratic { d: -4 };
        let t = build_table(spec, 100).unwrap();
        let path = dir.path().join(cache_file_name(&spec, 100));
        save_table(&t, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), t);
        assert_eq!(cache_file_name(&spec, 100), "trivial_quadratic__4-100.heig");
    }

    #[test]
    fn covering_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let spec = FormSpec::Level1Holomorphic { weight: 12 };
        assert!(find_cached(dir.path(), &spec, 10).is_none());
        let built = load_or_build(spec, 500, Some(dir.path())).unwrap();
        let path = find_cached(dir.path(), &spec, 300).unwrap();
        assert!(path.ends_with("level1_12-500.heig"), "{path:?}");
        assert!(find_cached(dir.path(), &spec, 501).is_none());
        assert!(find_cached(dir.path(), &FormSpec::CMGaussian, 1).is_none());
        assert_eq!(load_or_build(spec, 300, Some(dir.path())).unwrap(), built);
        std::fs::write(&path, b"junk").unwrap();
        assert_eq!(load_or_build(spec, 300, Some(dir.path())).unwrap().n_max(), 300);
    }
}
