//! On-disk drive logs.
//!
//! ```text
//! <dir>/index.json                 LogIndex: metadata plus one FrameRecord per frame
//! <dir>/frames/NNNNNN.depth.sdct   u8 [3,256,256], 24-bit depth code, planes R,G,B
//! <dir>/frames/NNNNNN.sem_gt.sdct  u8 [256,256] class ids
//! <dir>/frames/NNNNNN.sem_pred.sdct
//! <dir>/frames/NNNNNN.sdc.sdct     u8 [23,256,256] one-hot occupancy (optional)
//! <dir>/result.json                RouteResult (closed-loop runs)
//! <dir>/trace.json                 per-step TraceSample list (closed-loop runs)
//! ```
//!
//! Nothing in a log depends on wall-clock time, so equal runs write
//! byte-identical logs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sdc_core::episode::FrameSink;
use sdc_core::scoring::{RouteResult, TraceSample};
use sdc_core::sdc::{project_sdc, ProjectionTable, SdcTensor, SDC_CHANNELS, SDC_SIZE};
use sdc_core::sensor::{decode_depth, encode_depth, DepthMap, EncodedDepthPixel, SemanticImage};
use sdc_core::world::{DriveLogFrame, FrameRecord};

use crate::config::SCHEMA_VERSION;
use crate::tensor::{read_tensor, write_tensor, TensorData};
use crate::{DriveError, Result};

pub const INDEX_FILE: &str = "index.json";
pub const RESULT_FILE: &str = "result.json";
pub const TRACE_FILE: &str = "trace.json";
const FRAMES_DIR: &str = "frames";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogMeta {
    pub map: String,
    pub route: String,
    pub weather: String,
    pub seed: u64,
    pub driver: String,
    pub variant: String,
    pub log_period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogIndex {
    pub schema_version: u32,
    pub meta: LogMeta,
    pub width: usize,
    pub height: usize,
    pub has_sdc: bool,
    pub frames: Vec<FrameRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveLog {
    pub index: LogIndex,
    pub frames: Vec<DriveLogFrame>,
}

fn frame_path(dir: &Path, index: u64, what: &str) -> PathBuf {
    dir.join(FRAMES_DIR).join(format!("{index:06}.{what}.sdct"))
}

pub fn encode_depth_planes(depth: &DepthMap) -> Result<Vec<u8>> {
    let n = depth.width() * depth.height();
    let mut out = vec![0u8; 3 * n];
    for (i, d) in depth.as_slice().iter().enumerate() {
        let p = encode_depth(*d)?;
        out[i] = p.r;
        out[n + i] = p.g;
        out[2 * n + i] = p.b;
    }
    Ok(out)
}

pub fn decode_depth_planes(width: usize, height: usize, planes: &[u8]) -> DepthMap {
    let n = width * height;
    let data = (0..n)
        .map(|i| {
            decode_depth(EncodedDepthPixel {
                r: planes[i],
                g: planes[n + i],
                b: planes[2 * n + i],
            })
        })
        .collect();
    DepthMap::from_vec(width, height, data)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| DriveError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(DriveError::io(path))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(DriveError::io(path))?;
    serde_json::from_str(&text).map_err(|source| DriveError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Streams frames to disk. IO failures during `push` are held and returned
/// by [`DriveLogWriter::finish`]; frames after a failure are dropped.
pub struct DriveLogWriter {
    dir: PathBuf,
    index: LogIndex,
    sdc_table: Option<ProjectionTable>,
    error: Option<DriveError>,
}

impl DriveLogWriter {
    /// `sdc_table` enables writing the occupancy tensor of every frame,
    /// projected from the logged (predicted) semantics and depth.
    pub fn create(dir: &Path, meta: LogMeta, sdc_table: Option<ProjectionTable>) -> Result<Self> {
        fs::create_dir_all(dir.join(FRAMES_DIR)).map_err(DriveError::io(dir))?;
        Ok(DriveLogWriter {
            dir: dir.to_path_buf(),
            index: LogIndex {
                schema_version: SCHEMA_VERSION,
                meta,
                width: SDC_SIZE,
                height: SDC_SIZE,
                has_sdc: sdc_table.is_some(),
                frames: Vec::new(),
            },
            sdc_table,
            error: None,
        })
    }

    fn write_frame(&self, frame: &DriveLogFrame) -> Result<()> {
        let i = frame.record.index;
        let (w, h) = (frame.depth.width(), frame.depth.height());
        if (w, h) != (self.index.width, self.index.height) {
            return Err(DriveError::format(&self.dir, format!("frame {i} is {w}x{h}")));
        }
        let planes = encode_depth_planes(&frame.depth)?;
        write_tensor(&frame_path(&self.dir, i, "depth"), &[3, h, w], &TensorData::U8(planes))?;
        let sem = |img: &SemanticImage| TensorData::U8(img.as_slice().to_vec());
        write_tensor(&frame_path(&self.dir, i, "sem_gt"), &[h, w], &sem(&frame.semantic_gt))?;
        write_tensor(&frame_path(&self.dir, i, "sem_pred"), &[h, w], &sem(&frame.semantic_pred))?;
        if let Some(table) = &self.sdc_table {
            let sdc = project_sdc(&frame.semantic_pred, &frame.depth, table);
            write_tensor(
                &frame_path(&self.dir, i, "sdc"),
                &[SDC_CHANNELS, SDC_SIZE, SDC_SIZE],
                &TensorData::U8(sdc.to_one_hot()),
            )?;
        }
        Ok(())
    }

    pub fn frames_written(&self) -> usize {
        self.index.frames.len()
    }

    /// Write the index (and, when given, the route result and trace).
    pub fn finish(self, result: Option<&RouteResult>, trace: Option<&[TraceSample]>) -> Result<PathBuf> {
        if let Some(e) = self.error {
            return Err(e);
        }
        write_json(&self.dir.join(INDEX_FILE), &self.index)?;
        if let Some(r) = result {
            write_json(&self.dir.join(RESULT_FILE), r)?;
        }
        if let Some(t) = trace {
            write_json(&self.dir.join(TRACE_FILE), &t)?;
        }
        Ok(self.dir)
    }
}

impl FrameSink for DriveLogWriter {
    fn push(&mut self, frame: DriveLogFrame) {
        if self.error.is_some() {
            return;
        }
        match self.write_frame(&frame) {
            Ok(()) => self.index.frames.push(frame.record),
            Err(e) => self.error = Some(e),
        }
    }
}

pub fn read_index(dir: &Path) -> Result<LogIndex> {
    let index: LogIndex = read_json(&dir.join(INDEX_FILE))?;
    if index.schema_version != SCHEMA_VERSION {
        return Err(DriveError::format(
            dir.join(INDEX_FILE),
            format!("schema_version {} is not supported", index.schema_version),
        ));
    }
    Ok(index)
}

fn read_u8(path: &Path, shape: &[usize]) -> Result<Vec<u8>> {
    let (found, data) = read_tensor(path)?.into_u8(path)?;
    if found != shape {
        return Err(DriveError::format(path, format!("shape {found:?}, expected {shape:?}")));
    }
    Ok(data)
}

/// Read a whole log back. Depth comes back quantized to the 24-bit code.
pub fn read_log(dir: &Path) -> Result<DriveLog> {
    let index = read_index(dir)?;
    let (w, h) = (index.width, index.height);
    let frames = index
        .frames
        .iter()
        .map(|record| {
            let i = record.index;
            let planes = read_u8(&frame_path(dir, i, "depth"), &[3, h, w])?;
            let sem_gt = read_u8(&frame_path(dir, i, "sem_gt"), &[h, w])?;
            let sem_pred = read_u8(&frame_path(dir, i, "sem_pred"), &[h, w])?;
            Ok(DriveLogFrame {
                record: *record,
                depth: decode_depth_planes(w, h, &planes),
                semantic_gt: SemanticImage::from_vec(w, h, sem_gt),
                semantic_pred: SemanticImage::from_vec(w, h, sem_pred),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DriveLog { index, frames })
}

/// Stored occupancy tensor of frame `index`.
pub fn read_sdc(dir: &Path, index: u64) -> Result<SdcTensor> {
    let path = frame_path(dir, index, "sdc");
    let data = read_u8(&path, &[SDC_CHANNELS, SDC_SIZE, SDC_SIZE])?;
    Ok(SdcTensor::from_one_hot(&data)?)
}

pub fn read_result(dir: &Path) -> Result<RouteResult> {
    read_json(&dir.join(RESULT_FILE))
}

pub fn read_trace(dir: &Path) -> Result<Vec<TraceSample>> {
    read_json(&dir.join(TRACE_FILE))
}
