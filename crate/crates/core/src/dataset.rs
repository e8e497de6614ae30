//! Feature sets: the raw input for both the gallery and the probes.
//!
//! Two on-disk formats are supported.
//!
//! CSV: a header line `id,camera,label,d=<D>` followed by one line per sample,
//! `sample_id,camera_id,label_id,f1,...,fD`. `camera_id` and `label_id` may
//! be `-` when absent.
//!
//! Binary (little-endian throughout):
//!
//! ```text
//! "PBCF" | u32 version = 1 | u32 N | u32 D | u8 flags
//! N × ( u16 id_len | id (UTF-8)
//!       | [i32 camera]            if flags & 1
//!       | [u16 label_len | label] if flags & 2
//!       | D × f32 )
//! ```

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FEATURE_MAGIC: &[u8; 4] = b"PBCF";
pub const FEATURE_VERSION: u32 = 1;

const FLAG_CAMERA: u8 = 1;
const FLAG_LABEL: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SampleMeta {
    pub id: String,
    pub camera: Option<i32>,
    pub label: Option<String>,
}

impl SampleMeta {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            camera: None,
            label: None,
        }
    }
}

/// `N` samples with metadata and an `N × d` row-major feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    samples: Vec<SampleMeta>,
    dim: usize,
    data: Vec<f32>,
}

impl FeatureSet {
    /// Validates and assembles a feature set. Rejects empty sets, `dim == 0`,
    /// a data length other than `N × dim`, duplicate ids and non-finite values.
    pub fn new(samples: Vec<SampleMeta>, dim: usize, data: Vec<f32>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidFeatureSet("no samples".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidFeatureSet("dimension must be at least 1".into()));
        }
        if data.len() != samples.len() * dim {
            return Err(Error::InvalidFeatureSet(format!(
                "expected {} values for {} samples of dimension {dim}, got {}",
                samples.len() * dim,
                samples.len(),
                data.len()
            )));
        }
        let mut seen = HashSet::with_capacity(samples.len());
        for s in &samples {
            if !seen.insert(s.id.as_str()) {
                return Err(Error::InvalidFeatureSet(format!("duplicate sample id `{}`", s.id)));
            }
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { samples, dim, data })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a valid feature set has at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> &[SampleMeta] {
        &self.samples
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f32]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn ids(&self) -> Vec<String> {
        self.samples.iter().map(|s| s.id.clone()).collect()
    }

    /// SHA-256 over ids, metadata, dimension and feature bits.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"features");
        h.update((self.len() as u64).to_le_bytes());
        h.update((self.dim as u64).to_le_bytes());
        for s in &self.samples {
            h.update((s.id.len() as u64).to_le_bytes());
            h.update(s.id.as_bytes());
            match s.camera {
                Some(c) => {
                    h.update([1]);
                    h.update(c.to_le_bytes());
                }
                None => h.update([0]),
            }
            match &s.label {
                Some(l) => {
                    h.update([1]);
                    h.update((l.len() as u64).to_le_bytes());
                    h.update(l.as_bytes());
                }
                None => h.update([0]),
            }
        }
        for v in &self.data {
            h.update(v.to_le_bytes());
        }
        h.finalize().into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Binary,
}

impl FileFormat {
    /// Sniffs the first bytes of a file: `PBCF` means binary, anything else CSV.
    pub fn detect(path: &Path) -> Result<Self> {
        let mut f = File::open(path).map_err(|e| Error::io_at(path, e))?;
        let mut magic = [0u8; 4];
        let mut filled = 0;
        while filled < 4 {
            match f.read(&mut magic[filled..]).map_err(|e| Error::io_at(path, e))? {
                0 => break,
                n => filled += n,
            }
        }
        Ok(if filled == 4 && &magic == FEATURE_MAGIC {
            FileFormat::Binary
        } else {
            FileFormat::Csv
        })
    }
}

impl FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FileFormat::Csv),
            "binary" | "bin" => Ok(FileFormat::Binary),
            other => Err(Error::InvalidParam(format!("unknown file format `{other}`"))),
        }
    }
}

pub fn load_features(path: &Path, format: FileFormat) -> Result<FeatureSet> {
    let f = File::open(path).map_err(|e| Error::io_at(path, e))?;
    let name = path.display().to_string();
    match format {
        FileFormat::Csv => read_csv(BufReader::new(f), &name),
        FileFormat::Binary => read_binary(BufReader::new(f), &name),
    }
}

pub fn save_features(fs: &FeatureSet, path: &Path, format: FileFormat) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io_at(path, e))?;
    let mut w = BufWriter::new(f);
    match format {
        FileFormat::Csv => write_csv(fs, &mut w)?,
        FileFormat::Binary => write_binary(fs, &mut w)?,
    }
    w.flush().map_err(|e| Error::io_at(path, e))
}

pub fn read_csv<R: BufRead>(reader: R, source_name: &str) -> Result<FeatureSet> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format(source_name, "line 1", "empty file"))?;
    let header = header?;
    let fields: Vec<&str> = header.trim_end().split(',').collect();
    let dim = match fields.as_slice() {
        ["id", "camera", "label", d] => d
            .strip_prefix("d=")
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&d| d >= 1),
        _ => None,
    }
    .ok_or_else(|| {
        Error::format(
            source_name,
            "line 1",
            format!("malformed header `{header}`, expected `id,camera,label,d=<D>`"),
        )
    })?;

    let mut samples = Vec::new();
    let mut data = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        let loc = || format!("line {lineno}");
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 + dim {
            return Err(Error::format(
                source_name,
                loc(),
                format!(
                    "expected {} feature columns, found {}",
                    dim,
                    fields.len().saturating_sub(3)
                ),
            ));
        }
        let id = fields[0].to_string();
        if id.is_empty() {
            return Err(Error::format(source_name, loc(), "empty sample id"));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::format(source_name, loc(), format!("duplicate sample id `{id}`")));
        }
        let camera = match fields[1] {
            "-" => None,
            c => Some(
                c.parse::<i32>()
                    .map_err(|_| Error::format(source_name, loc(), format!("bad camera id `{c}`")))?,
            ),
        };
        let label = match fields[2] {
            "-" => None,
            l => Some(l.to_string()),
        };
        for (col, f) in fields[3..].iter().enumerate() {
            let v: f32 = f
                .trim()
                .parse()
                .map_err(|_| Error::format(source_name, loc(), format!("bad number `{f}` in column {}", col + 4)))?;
            if !v.is_finite() {
                return Err(Error::format(source_name, loc(), "non-finite feature value"));
            }
            data.push(v);
        }
        samples.push(SampleMeta { id, camera, label });
    }
    if samples.is_empty() {
        return Err(Error::format(source_name, "end of file", "no samples"));
    }
    FeatureSet::new(samples, dim, data)
}

/// Writes the CSV form. Floats use the shortest representation that parses
/// back to the same `f32`, so a CSV round trip is exact.
pub fn write_csv<W: Write>(fs: &FeatureSet, w: &mut W) -> Result<()> {
    writeln!(w, "id,camera,label,d={}", fs.dim)?;
    for (s, row) in fs.samples.iter().zip(fs.rows()) {
        if s.id.contains([',', '\n', '\r']) || s.label.as_deref().is_some_and(|l| l.contains([',', '\n', '\r'])) {
            return Err(Error::InvalidFeatureSet(format!(
                "sample `{}` has an id or label that cannot be written as CSV",
                s.id
            )));
        }
        if s.label.as_deref() == Some("-") {
            return Err(Error::InvalidFeatureSet(format!(
                "sample `{}` has the reserved label `-`",
                s.id
            )));
        }
        write!(w, "{},", s.id)?;
        match s.camera {
            Some(c) => write!(w, "{c},")?,
            None => write!(w, "-,")?,
        }
        write!(w, "{}", s.label.as_deref().unwrap_or("-"))?;
        for v in row {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(fs: &FeatureSet, w: &mut W) -> Result<()> {
    let has_camera = fs.samples.iter().filter(|s| s.camera.is_some()).count();
    let has_label = fs.samples.iter().filter(|s| s.label.is_some()).count();
    // The flags byte applies to every record.
    if (has_camera != 0 && has_camera != fs.len()) || (has_label != 0 && has_label != fs.len()) {
        return Err(Error::InvalidFeatureSet(
            "binary format needs camera/label present on all samples or on none".into(),
        ));
    }
    let mut flags = 0u8;
    if has_camera > 0 {
        flags |= FLAG_CAMERA;
    }
    if has_label > 0 {
        flags |= FLAG_LABEL;
    }
    let n = u32::try_from(fs.len()).map_err(|_| Error::InvalidFeatureSet("too many samples".into()))?;
    let d = u32::try_from(fs.dim).map_err(|_| Error::InvalidFeatureSet("dimension too large".into()))?;
    w.write_all(FEATURE_MAGIC)?;
    w.write_all(&FEATURE_VERSION.to_le_bytes())?;
    w.write_all(&n.to_le_bytes())?;
    w.write_all(&d.to_le_bytes())?;
    w.write_all(&[flags])?;
    for (s, row) in fs.samples.iter().zip(fs.rows()) {
        write_short_str(w, &s.id)?;
        if let Some(c) = s.camera {
            w.write_all(&c.to_le_bytes())?;
        }
        if let Some(l) = &s.label {
            write_short_str(w, l)?;
        }
        for v in row {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn write_short_str<W: Write>(w: &mut W, s: &str) -> Result<()> {
    let len = u16::try_from(s.len())
        .map_err(|_| Error::InvalidFeatureSet(format!("string longer than 65535 bytes: `{s:.32}…`")))?;
    w.write_all(&len.to_le_bytes())?;
    w.write_all(s.as_bytes())?;
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R, source_name: &str) -> Result<FeatureSet> {
    let header_err = |msg: &str| Error::format(source_name, "header", msg);
    let mut magic = [0u8; 4];
    read_exact_or(&mut r, &mut magic, || header_err("truncated header"))?;
    if &magic != FEATURE_MAGIC {
        return Err(header_err("bad magic, expected `PBCF`"));
    }
    let version = read_u32(&mut r).map_err(|_| header_err("truncated header"))?;
    if version != FEATURE_VERSION {
        return Err(header_err(&format!("unsupported version {version}")));
    }
    let n = read_u32(&mut r).map_err(|_| header_err("truncated header"))? as usize;
    let d = read_u32(&mut r).map_err(|_| header_err("truncated header"))? as usize;
    let mut flags = [0u8; 1];
    read_exact_or(&mut r, &mut flags, || header_err("truncated header"))?;
    let flags = flags[0];
    if flags & !(FLAG_CAMERA | FLAG_LABEL) != 0 {
        return Err(header_err(&format!("unknown flag bits {flags:#04x}")));
    }
    if n == 0 || d == 0 {
        return Err(header_err("N and D must be positive"));
    }

    let mut samples = Vec::with_capacity(n.min(1 << 20));
    let mut data = Vec::with_capacity(n.saturating_mul(d).min(1 << 26));
    let mut seen = HashSet::new();
    let mut buf = vec![0u8; 4 * d];
    for rec in 0..n {
        let rec_err = |msg: &str| Error::format(source_name, format!("record {}", rec + 1), msg);
        let id = read_short_str(&mut r).map_err(|m| rec_err(&m))?;
        let camera = if flags & FLAG_CAMERA != 0 {
            let mut b = [0u8; 4];
            read_exact_or(&mut r, &mut b, || rec_err("truncated record"))?;
            Some(i32::from_le_bytes(b))
        } else {
            None
        };
        let label = if flags & FLAG_LABEL != 0 {
            Some(read_short_str(&mut r).map_err(|m| rec_err(&m))?)
        } else {
            None
        };
        read_exact_or(&mut r, &mut buf, || rec_err("truncated feature vector"))?;
        for (col, c) in buf.chunks_exact(4).enumerate() {
            let v = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            if !v.is_finite() {
                return Err(rec_err(&format!("non-finite value in column {}", col + 1)));
            }
            data.push(v);
        }
        if !seen.insert(id.clone()) {
            return Err(rec_err(&format!("duplicate sample id `{id}`")));
        }
        samples.push(SampleMeta { id, camera, label });
    }
    FeatureSet::new(samples, d, data)
}

fn read_exact_or<R: Read>(r: &mut R, buf: &mut [u8], err: impl FnOnce() -> Error) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => err(),
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(r: &mut R) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_short_str<R: Read>(r: &mut R) -> std::result::Result<String, String> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b).map_err(|_| "truncated record".to_string())?;
    let len = u16::from_le_bytes(b) as usize;
    let mut s = vec![0u8; len];
    r.read_exact(&mut s).map_err(|_| "truncated record".to_string())?;
    String::from_utf8(s).map_err(|_| "string is not valid UTF-8".to_string())
}

/// Parameters of the synthetic identity/camera generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub num_ids: usize,
    pub gallery_per_id: usize,
    pub probes_per_id: usize,
    pub dim: usize,
    /// Expected norm of the per-image noise vector (per-component standard
    /// deviation is `intra_id_noise / sqrt(dim)`).
    pub intra_id_noise: f64,
    /// Norm of each camera's fixed offset vector.
    pub camera_offset_scale: f64,
    pub num_cameras: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    /// The frozen acceptance configuration.
    fn default() -> Self {
        Self {
            num_ids: 100,
            gallery_per_id: 6,
            probes_per_id: 1,
            dim: 32,
            intra_id_noise: 0.9,
            camera_offset_scale: 0.5,
            num_cameras: 6,
            seed: 7,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParam(m.to_string()));
        if self.num_ids < 2 {
            return bad("num_ids must be at least 2");
        }
        if self.gallery_per_id < 1 {
            return bad("gallery_per_id must be at least 1");
        }
        if self.dim < 2 {
            return bad("dim must be at least 2");
        }
        if self.num_cameras < 2 {
            return bad("num_cameras must be at least 2");
        }
        if !(self.intra_id_noise >= 0.0 && self.intra_id_noise.is_finite()) {
            return bad("intra_id_noise must be a nonnegative finite number");
        }
        if !(self.camera_offset_scale >= 0.0 && self.camera_offset_scale.is_finite()) {
            return bad("camera_offset_scale must be a nonnegative finite number");
        }
        Ok(())
    }
}

fn unit_gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Generates a gallery and a probe set of `num_ids` identities.
///
/// Each identity gets a unit-norm centroid. An image is the centroid plus the
/// offset of the camera that took it plus isotropic noise. Gallery images of
/// one identity cycle through consecutive cameras from a random start; each
/// probe is taken by a camera that differs from at least one of its
/// identity's gallery cameras.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<(FeatureSet, FeatureSet)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = cfg.dim;
    let cams: Vec<Vec<f64>> = (0..cfg.num_cameras)
        .map(|_| {
            unit_gaussian(&mut rng, dim)
                .into_iter()
                .map(|x| x * cfg.camera_offset_scale)
                .collect()
        })
        .collect();
    let sigma = cfg.intra_id_noise / (dim as f64).sqrt();

    let image = |rng: &mut ChaCha8Rng, centroid: &[f64], cam: usize, out: &mut Vec<f32>| {
        for (c, o) in centroid.iter().zip(&cams[cam]) {
            let noise: f64 = rng.sample(StandardNormal);
            out.push((c + o + noise * sigma) as f32);
        }
    };

    let mut gallery_meta = Vec::with_capacity(cfg.num_ids * cfg.gallery_per_id);
    let mut gallery_data = Vec::with_capacity(cfg.num_ids * cfg.gallery_per_id * dim);
    let mut probe_meta = Vec::with_capacity(cfg.num_ids * cfg.probes_per_id);
    let mut probe_data = Vec::with_capacity(cfg.num_ids * cfg.probes_per_id * dim);

    for id in 0..cfg.num_ids {
        let label = format!("id{id:04}");
        let centroid = unit_gaussian(&mut rng, dim);
        let start = rng.gen_range(0..cfg.num_cameras);
        let gallery_cams: Vec<usize> = (0..cfg.gallery_per_id).map(|j| (start + j) % cfg.num_cameras).collect();
        for (j, &cam) in gallery_cams.iter().enumerate() {
            image(&mut rng, &centroid, cam, &mut gallery_data);
            gallery_meta.push(SampleMeta {
                id: format!("g{id:04}_{j}"),
                camera: Some(cam as i32),
                label: Some(label.clone()),
            });
        }
        for j in 0..cfg.probes_per_id {
            let mut cam = rng.gen_range(0..cfg.num_cameras);
            if gallery_cams.iter().all(|&g| g == cam) {
                cam = (cam + 1) % cfg.num_cameras;
            }
            image(&mut rng, &centroid, cam, &mut probe_data);
            probe_meta.push(SampleMeta {
                id: format!("p{id:04}_{j}"),
                camera: Some(cam as i32),
                label: Some(label.clone()),
            });
        }
    }

    let gallery = FeatureSet::new(gallery_meta, dim, gallery_data)?;
    if probe_meta.is_empty() {
        return Err(Error::InvalidParam("probes_per_id must be at least 1".into()));
    }
    let probes = FeatureSet::new(probe_meta, dim, probe_data)?;
    Ok((gallery, probes))
}
