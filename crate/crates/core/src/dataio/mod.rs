//! Dataset files: NPZ bundles, JSONL case records and the trajectory layout.

pub mod npy;
mod layout;
mod record;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Seek, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipArchive, ZipWriter};

use crate::field::Field;

pub use layout::{default_root, Layout, TrajectoryMeta, OUT_ENV};
pub use record::{append_records, read_records, write_records, CaseRecord};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("archive error: {0}")]
    Zip(#[from] zip::result::ZipError),
    #[error("NPY error: {0}")]
    Npy(String),
    #[error("bundle lacks entry {0:?}")]
    MissingEntry(String),
    #[error("bundle arrays have different shapes")]
    ShapeMismatch,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid record: {0}")]
    Invalid(String),
}

impl DataError {
    pub(crate) fn io(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
        move |source| DataError::Io { path: path.to_path_buf(), source }
    }
}

/// Stored entries with a fixed 1980-01-01 timestamp, so identical arrays
/// give identical archives.
fn entry_options() -> SimpleFileOptions {
    SimpleFileOptions::default()
        .compression_method(CompressionMethod::Stored)
        .last_modified_time(DateTime::default())
        .unix_permissions(0o644)
}

/// Writes `path` through a sibling temporary file and a rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DataError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(DataError::io(dir))?;
    }
    let tmp = path.with_extension("part");
    fs::write(&tmp, bytes).map_err(DataError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(DataError::io(path))
}

/// NPZ archive bytes with one `<name>.npy` entry per array, in order.
pub fn npz_bytes(entries: &[(&str, &Field)]) -> Result<Vec<u8>, DataError> {
    let mut zw = ZipWriter::new(std::io::Cursor::new(Vec::new()));
    for (name, field) in entries {
        zw.start_file(format!("{name}.npy"), entry_options())?;
        zw.write_all(&npy::encode(field)).map_err(DataError::io(Path::new(name)))?;
    }
    Ok(zw.finish()?.into_inner())
}

pub fn write_npz(path: &Path, entries: &[(&str, &Field)]) -> Result<(), DataError> {
    write_atomic(path, &npz_bytes(entries)?)
}

/// All arrays of an NPZ archive, in archive order, keyed without `.npy`.
pub fn read_npz_from<R: Read + Seek>(reader: R) -> Result<Vec<(String, Field)>, DataError> {
    let mut za = ZipArchive::new(reader)?;
    let mut out = Vec::with_capacity(za.len());
    for i in 0..za.len() {
        let mut f = za.by_index(i)?;
        let name = f.name().trim_end_matches(".npy").to_string();
        let mut buf = Vec::with_capacity(f.size() as usize);
        f.read_to_end(&mut buf).map_err(DataError::io(Path::new(&name)))?;
        out.push((name, npy::decode(&buf)?));
    }
    Ok(out)
}

pub fn read_npz(path: &Path) -> Result<Vec<(String, Field)>, DataError> {
    let file = File::open(path).map_err(DataError::io(path))?;
    read_npz_from(BufReader::new(file))
}

fn take(entries: &mut Vec<(String, Field)>, name: &str) -> Result<Field, DataError> {
    let i = entries
        .iter()
        .position(|(n, _)| n == name)
        .ok_or_else(|| DataError::MissingEntry(name.to_string()))?;
    Ok(entries.remove(i).1)
}

/// One estimate at one budget with its target: entries `noisy`, `clean`, `mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    pub noisy: Field,
    pub clean: Field,
    pub mask: Field,
}

impl Bundle {
    pub fn to_bytes(&self) -> Result<Vec<u8>, DataError> {
        npz_bytes(&[("noisy", &self.noisy), ("clean", &self.clean), ("mask", &self.mask)])
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        write_atomic(path, &self.to_bytes()?)
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        let mut e = read_npz(path)?;
        let b = Bundle { noisy: take(&mut e, "noisy")?, clean: take(&mut e, "clean")?, mask: take(&mut e, "mask")? };
        if b.noisy.res() != b.clean.res() || b.noisy.res() != b.mask.res() {
            return Err(DataError::ShapeMismatch);
        }
        Ok(b)
    }
}

pub fn write_bundle(path: &Path, noisy: &Field, clean: &Field, mask: &Field) -> Result<(), DataError> {
    write_atomic(path, &npz_bytes(&[("noisy", noisy), ("clean", clean), ("mask", mask)])?)
}

pub fn read_bundle(path: &Path) -> Result<Bundle, DataError> {
    Bundle::read(path)
}

/// Ground truth of a case: entries `clean`, `mask`, `forcing`. The forcing
/// is zero for Laplace.
#[derive(Clone, Debug, PartialEq)]
pub struct Truth {
    pub clean: Field,
    pub mask: Field,
    pub forcing: Field,
}

impl Truth {
    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        write_npz(path, &[("clean", &self.clean), ("mask", &self.mask), ("forcing", &self.forcing)])
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        let mut e = read_npz(path)?;
        Ok(Truth { clean: take(&mut e, "clean")?, mask: take(&mut e, "mask")?, forcing: take(&mut e, "forcing")? })
    }
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> Result<(), DataError> {
    for entry in fs::read_dir(dir).map_err(DataError::io(dir))? {
        let path = entry.map_err(DataError::io(dir))?.path();
        if path.is_dir() {
            collect_files(root, &path, out)?;
        } else if path.extension().is_none_or(|e| e != "part") {
            let rel = path.strip_prefix(root).expect("under root");
            out.push(rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"));
        }
    }
    Ok(())
}

/// Packs every file under `dir` into one stored archive with sorted entry
/// names. Returns the number of files.
pub fn pack_dir(dir: &Path, archive: &Path) -> Result<usize, DataError> {
    pack_paths(dir, &[PathBuf::new()], archive)
}

/// Packs the files and directories `include`, given relative to `root`.
pub fn pack_paths(root: &Path, include: &[PathBuf], archive: &Path) -> Result<usize, DataError> {
    let mut files = Vec::new();
    for rel in include {
        let p = root.join(rel);
        if p.is_dir() {
            collect_files(root, &p, &mut files)?;
        } else if p.is_file() {
            let rel = p.strip_prefix(root).expect("under root");
            files.push(rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"));
        } else {
            return Err(DataError::Io {
                path: p,
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "nothing to pack"),
            });
        }
    }
    files.sort();
    files.dedup();
    let tmp = archive.with_extension("part");
    if let Some(parent) = archive.parent() {
        fs::create_dir_all(parent).map_err(DataError::io(parent))?;
    }
    let out = File::create(&tmp).map_err(DataError::io(&tmp))?;
    let mut zw = ZipWriter::new(BufWriter::new(out));
    for rel in &files {
        let src = root.join(rel);
        let bytes = fs::read(&src).map_err(DataError::io(&src))?;
        zw.start_file(rel.as_str(), entry_options().large_file(bytes.len() >= u32::MAX as usize))?;
        zw.write_all(&bytes).map_err(DataError::io(&src))?;
    }
    zw.finish()?.flush().map_err(DataError::io(&tmp))?;
    fs::rename(&tmp, archive).map_err(DataError::io(archive))?;
    Ok(files.len())
}

/// Extracts an archive made by [`pack_dir`] into `dir`.
pub fn unpack_dir(archive: &Path, dir: &Path) -> Result<usize, DataError> {
    let file = File::open(archive).map_err(DataError::io(archive))?;
    let mut za = ZipArchive::new(BufReader::new(file))?;
    for i in 0..za.len() {
        let mut f = za.by_index(i)?;
        let rel = f
            .enclosed_name()
            .ok_or_else(|| DataError::Invalid(format!("unsafe entry name {:?}", f.name())))?;
        let dst = dir.join(rel);
        let mut buf = Vec::with_capacity(f.size() as usize);
        f.read_to_end(&mut buf).map_err(DataError::io(&dst))?;
        write_atomic(&dst, &buf)?;
    }
    Ok(za.len())
}
