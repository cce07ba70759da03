//! Synthetic RGBD-camera stand-in.

mod camera;
mod depth_codec;
mod grid;
mod render;
mod weather;

pub use camera::CameraIntrinsics;
pub use depth_codec::{decode_depth, encode_depth, EncodedDepthPixel, DEPTH_RANGE, DEPTH_STEP};
pub use grid::{DepthMap, Grid, SemanticImage};
pub use render::{render_depth_semantic, render_full, render_pixel, render_roi, render_roi_rows, RenderScene, Renderer, SequentialRenderer};
pub use weather::{apply_weather, WeatherPreset, WEATHER_PRESETS};
