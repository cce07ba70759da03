//! Independent reference implementations used to cross-check the library.
//! Written for clarity, not speed; each follows the textbook definition.
#![allow(dead_code)]

/// Sky class id, never projected.
pub const SKY: u8 = 13;
pub const GRID: usize = 256;
pub const EMPTY: u8 = 255;

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// Occupancy labels (`EMPTY` for no hit) of a `GRID×GRID` grid built from a
/// 256×256 label/depth pair: every non-sky pixel at depth `d` in column `u`
/// maps to column `round(((d·(u−cx)/fx) + 32)/64·255)` and row
/// `round((1 − d/64)·255)`. When pixels collide, the one with the smallest
/// image row and then column wins; pixels are visited in reverse so the last
/// write is the winner.
pub fn brute_force_sdc(sem: &[u8], depth: &[f64], width: usize, fx: f64, cx: f64) -> Vec<u8> {
    let mut grid = vec![EMPTY; GRID * GRID];
    let height = sem.len() / width;
    for row in (0..height).rev() {
        for col in (0..width).rev() {
            let i = row * width + col;
            if sem[i] == SKY {
                continue;
            }
            let d = depth[i];
            if d > 64.0 {
                continue;
            }
            let t = (col as f64 - cx) / fx;
            let x = round_half_up((d * t + 32.0) / 64.0 * 255.0);
            let z = round_half_up((1.0 - d / 64.0) * 255.0);
            if !(0.0..=255.0).contains(&x) || !(0.0..=255.0).contains(&z) {
                continue;
            }
            grid[z as usize * GRID + x as usize] = sem[i];
        }
    }
    grid
}

fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// `Σ_j w[row][j]·x[j] + b[row]` with `w` row-major.
fn affine_row(w: &[f64], b: &[f64], x: &[f64], row: usize) -> f64 {
    let mut acc = b[row];
    for (j, xj) in x.iter().enumerate() {
        acc += w[row * x.len() + j] * xj;
    }
    acc
}

/// One GRU step with PyTorch's gate layout (rows r, z, n stacked).
pub fn scalar_gru(x: &[f64], h: &[f64], w_ih: &[f64], w_hh: &[f64], b_ih: &[f64], b_hh: &[f64]) -> Vec<f64> {
    let n = h.len();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let r = sigmoid(affine_row(w_ih, b_ih, x, k) + affine_row(w_hh, b_hh, h, k));
        let z = sigmoid(affine_row(w_ih, b_ih, x, n + k) + affine_row(w_hh, b_hh, h, n + k));
        let cand = (affine_row(w_ih, b_ih, x, 2 * n + k) + r * affine_row(w_hh, b_hh, h, 2 * n + k)).tanh();
        out[k] = (1.0 - z) * cand + z * h[k];
    }
    out
}

/// IoU of two binary masks; empty union scores 1.
pub fn naive_iou(pred: &[u8], gt: &[u8]) -> f64 {
    let inter = pred.iter().zip(gt).filter(|(p, g)| **p != 0 && **g != 0).count();
    let union = pred.iter().zip(gt).filter(|(p, g)| **p != 0 || **g != 0).count();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Per-class IoU of two label images over `classes` classes.
pub fn naive_class_iou(pred: &[u8], gt: &[u8], classes: usize) -> Vec<f64> {
    (0..classes as u8)
        .map(|c| {
            let p: Vec<u8> = pred.iter().map(|&v| (v == c) as u8).collect();
            let g: Vec<u8> = gt.iter().map(|&v| (v == c) as u8).collect();
            naive_iou(&p, &g)
        })
        .collect()
}

pub fn naive_accuracy(pred: &[f64], gt: &[bool]) -> f64 {
    let hits = pred.iter().zip(gt).filter(|(p, g)| (**p >= 0.5) == **g).count();
    hits as f64 / pred.len() as f64
}

/// Mean clipped binary cross-entropy plus soft dice.
pub fn naive_seg_loss(pred: &[f64], gt: &[f64]) -> f64 {
    let eps = 1e-7;
    let n = pred.len() as f64;
    let mut bce = 0.0;
    for (p, g) in pred.iter().zip(gt) {
        let pc = p.max(eps).min(1.0 - eps);
        bce += -(g * pc.ln() + (1.0 - g) * (1.0 - pc).ln());
    }
    let inter: f64 = pred.iter().zip(gt).map(|(p, g)| p * g).sum();
    let total: f64 = pred.iter().sum::<f64>() + gt.iter().sum::<f64>();
    let dice = if total == 0.0 { 0.0 } else { 1.0 - 2.0 * inter / total };
    bce / n + dice
}

pub fn naive_mae(pred: &[f64], gt: &[f64]) -> f64 {
    pred.iter().zip(gt).map(|(p, g)| (p - g).abs()).sum::<f64>() / pred.len() as f64
}
