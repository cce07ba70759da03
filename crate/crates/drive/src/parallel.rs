//! Row-parallel region-of-interest renderer.

use rayon::prelude::*;
use sdc_core::sensor::{render_roi_rows, CameraIntrinsics, DepthMap, RenderScene, Renderer, SemanticImage};
use sdc_core::world::Pose;

/// Splits the region of interest into bands of `rows_per_task` rows and
/// traces them on the current rayon pool. Output is bit-identical to
/// [`sdc_core::sensor::SequentialRenderer`].
#[derive(Debug, Clone, Copy)]
pub struct ParallelRenderer {
    pub rows_per_task: usize,
}

impl Default for ParallelRenderer {
    fn default() -> Self {
        ParallelRenderer { rows_per_task: 16 }
    }
}

impl Renderer for ParallelRenderer {
    fn render(&self, scene: &RenderScene<'_>, cam: &CameraIntrinsics, pose: &Pose) -> (DepthMap, SemanticImage) {
        let (w, h) = (cam.width, cam.height);
        let band = self.rows_per_task.max(1);
        let mut depth = vec![0.0; w * h];
        let mut sem = vec![0u8; w * h];
        depth
            .par_chunks_mut(band * w)
            .zip(sem.par_chunks_mut(band * w))
            .enumerate()
            .for_each(|(i, (d, s))| {
                let start = i * band;
                let end = start + d.len() / w;
                render_roi_rows(scene, cam, pose, start..end, d, s);
            });
        (DepthMap::from_vec(w, h, depth), SemanticImage::from_vec(w, h, sem))
    }
}
