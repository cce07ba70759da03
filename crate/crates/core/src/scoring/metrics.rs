use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classes::NUM_CLASSES;
use crate::control::{LossWeights, Waypoints};
use crate::math::ln;
use crate::world::DriveLogFrame;
use crate::{Error, Result};

/// Probability clip applied inside the cross-entropy logs.
pub const SEG_EPS: f64 = 1e-7;

fn same_len(name: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch {
            name: name.into(),
            expected: format!("{b} elements"),
            found: format!("{a} elements"),
        });
    }
    Ok(())
}

/// Intersection over union of two binary masks (nonzero = set). Two empty
/// masks score 1.
pub fn iou(pred: &[u8], gt: &[u8]) -> Result<f64> {
    same_len("iou", pred.len(), gt.len())?;
    let (mut inter, mut union) = (0u64, 0u64);
    for (&p, &g) in pred.iter().zip(gt) {
        let (p, g) = (p != 0, g != 0);
        inter += (p && g) as u64;
        union += (p || g) as u64;
    }
    Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
}

/// Per-class intersection and union counts between two label images.
fn class_counts(pred: &[u8], gt: &[u8], inter: &mut [u64; NUM_CLASSES], union: &mut [u64; NUM_CLASSES]) {
    for (&p, &g) in pred.iter().zip(gt) {
        let (p, g) = (p as usize, g as usize);
        if p == g {
            if p < NUM_CLASSES {
                inter[p] += 1;
                union[p] += 1;
            }
        } else {
            if p < NUM_CLASSES {
                union[p] += 1;
            }
            if g < NUM_CLASSES {
                union[g] += 1;
            }
        }
    }
}

/// IoU of every class between two label images (empty union scores 1).
pub fn class_iou(pred: &[u8], gt: &[u8]) -> Result<Vec<f64>> {
    same_len("class_iou", pred.len(), gt.len())?;
    let mut inter = [0u64; NUM_CLASSES];
    let mut union = [0u64; NUM_CLASSES];
    class_counts(pred, gt, &mut inter, &mut union);
    Ok(ratios(&inter, &union))
}

fn ratios(inter: &[u64; NUM_CLASSES], union: &[u64; NUM_CLASSES]) -> Vec<f64> {
    inter
        .iter()
        .zip(union)
        .map(|(&i, &u)| if u == 0 { 1.0 } else { i as f64 / u as f64 })
        .collect()
}

/// Fraction of predictions that match the binary ground truth after
/// thresholding at 0.5.
pub fn accuracy(preds: &[f64], gts: &[bool]) -> Result<f64> {
    same_len("accuracy", preds.len(), gts.len())?;
    if preds.is_empty() {
        return Err(Error::Empty("accuracy inputs"));
    }
    let hits = preds.iter().zip(gts).filter(|(&p, &g)| (p >= 0.5) == g).count();
    Ok(hits as f64 / preds.len() as f64)
}

/// Running sums for the segmentation loss, so large label images need not
/// be expanded to probabilities.
#[derive(Debug, Clone, Copy, Default)]
struct SegSums {
    bce: f64,
    n: u64,
    inter: f64,
    mass: f64,
}

impl SegSums {
    #[inline]
    fn add(&mut self, p: f64, g: f64) {
        let pc = p.clamp(SEG_EPS, 1.0 - SEG_EPS);
        self.bce -= g * ln(pc) + (1.0 - g) * ln(1.0 - pc);
        self.n += 1;
        self.inter += p * g;
        self.mass += p + g;
    }

    fn value(&self) -> f64 {
        let bce = self.bce / self.n as f64;
        let dice = if self.mass > 0.0 { 1.0 - 2.0 * self.inter / self.mass } else { 0.0 };
        bce + dice
    }
}

/// Mean binary cross-entropy (probabilities clipped to `[ε, 1−ε]`) plus the
/// soft dice loss `1 − 2Σŷy / (Σŷ + Σy)`, which is 0 when both are empty.
pub fn seg_loss(pred: &[f64], gt: &[f64]) -> Result<f64> {
    same_len("seg_loss", pred.len(), gt.len())?;
    if pred.is_empty() {
        return Err(Error::Empty("seg_loss inputs"));
    }
    let mut s = SegSums::default();
    pred.iter().zip(gt).for_each(|(&p, &g)| s.add(p, g));
    Ok(s.value())
}

/// Segmentation loss of a hard label prediction against labels, both taken
/// as one-hot over all classes.
fn label_seg_loss(pred: &[u8], gt: &[u8]) -> f64 {
    let mut s = SegSums::default();
    for (&p, &g) in pred.iter().zip(gt) {
        for c in 0..NUM_CLASSES as u8 {
            s.add((p == c) as u8 as f64, (g == c) as u8 as f64);
        }
    }
    s.value()
}

/// Mean absolute error.
pub fn mae(pred: &[f64], gt: &[f64]) -> Result<f64> {
    same_len("mae", pred.len(), gt.len())?;
    if pred.is_empty() {
        return Err(Error::Empty("mae inputs"));
    }
    Ok(pred.iter().zip(gt).map(|(p, g)| (p - g).abs()).sum::<f64>() / pred.len() as f64)
}

/// MAE over all coordinates of all waypoints.
pub fn waypoint_mae(pred: &[Waypoints], gt: &[Waypoints]) -> Result<f64> {
    let flat = |w: &[Waypoints]| -> Vec<f64> { w.iter().flat_map(|w| w.0.iter().flat_map(|p| [p.x, p.y])).collect() };
    mae(&flat(pred), &flat(gt))
}

/// The seven task losses, in loss-weight order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TaskLosses {
    pub seg: f64,
    pub tl: f64,
    pub ss: f64,
    pub steering: f64,
    pub throttle: f64,
    pub brake: f64,
    pub waypoints: f64,
}

impl TaskLosses {
    pub fn as_array(&self) -> [f64; 7] {
        [self.seg, self.tl, self.ss, self.steering, self.throttle, self.brake, self.waypoints]
    }
}

/// Weighted sum of the task losses.
pub fn total_loss(losses: &TaskLosses, alpha: &LossWeights) -> f64 {
    losses.as_array().iter().zip(alpha.0).map(|(l, a)| a * l).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlMae {
    pub steering: f64,
    pub throttle: f64,
    pub brake: f64,
    pub waypoints: f64,
}

/// Task-wise evaluation of a prediction log against a reference log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub frames: usize,
    pub iou_per_class: Vec<f64>,
    /// Mean over classes present in either prediction or reference.
    pub iou_mean: f64,
    pub acc_tl: f64,
    pub acc_ss: f64,
    pub mae: ControlMae,
    pub losses: TaskLosses,
    pub total_loss: f64,
}

impl MetricReport {
    /// Compare the prediction fields of `pred` (perceived labels, agent
    /// controls and waypoints, light/sign predictions) with the supervision
    /// fields of `reference`. Logs must have the same frames.
    pub fn from_frames(pred: &[DriveLogFrame], reference: &[DriveLogFrame], alpha: &LossWeights) -> Result<Self> {
        if pred.len() != reference.len() {
            return Err(Error::InvalidConfig(format!(
                "logs are not frame-aligned: {} vs {} frames",
                pred.len(),
                reference.len()
            )));
        }
        if pred.is_empty() {
            return Err(Error::Empty("drive log"));
        }
        for (p, r) in pred.iter().zip(reference) {
            if p.record.index != r.record.index || (p.record.t - r.record.t).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "logs are not frame-aligned at frame {} (t={} vs t={})",
                    r.record.index, p.record.t, r.record.t
                )));
            }
            same_len("semantic image", p.semantic_pred.as_slice().len(), r.semantic_gt.as_slice().len())?;
        }

        let mut inter = [0u64; NUM_CLASSES];
        let mut union = [0u64; NUM_CLASSES];
        let mut seg = 0.0;
        for (p, r) in pred.iter().zip(reference) {
            class_counts(p.semantic_pred.as_slice(), r.semantic_gt.as_slice(), &mut inter, &mut union);
            seg += label_seg_loss(p.semantic_pred.as_slice(), r.semantic_gt.as_slice());
        }
        let iou_per_class = ratios(&inter, &union);
        let present: Vec<f64> = iou_per_class.iter().zip(&union).filter(|(_, &u)| u > 0).map(|(v, _)| *v).collect();
        let iou_mean = if present.is_empty() { 1.0 } else { present.iter().sum::<f64>() / present.len() as f64 };

        let tl_pred: Vec<f64> = pred.iter().map(|f| f.record.tl_pred).collect();
        let ss_pred: Vec<f64> = pred.iter().map(|f| f.record.ss_pred).collect();
        let tl_gt: Vec<bool> = reference.iter().map(|f| f.record.tl_gt).collect();
        let ss_gt: Vec<bool> = reference.iter().map(|f| f.record.ss_gt).collect();
        let bits = |b: &[bool]| -> Vec<f64> { b.iter().map(|&v| v as u8 as f64).collect() };
        let field = |frames: &[DriveLogFrame], f: fn(&DriveLogFrame) -> f64| -> Vec<f64> { frames.iter().map(f).collect() };

        let mae = ControlMae {
            steering: mae(&field(pred, |f| f.record.agent_controls.steering), &field(reference, |f| f.record.expert_controls.steering))?,
            throttle: mae(&field(pred, |f| f.record.agent_controls.throttle), &field(reference, |f| f.record.expert_controls.throttle))?,
            brake: mae(&field(pred, |f| f.record.agent_controls.brake), &field(reference, |f| f.record.expert_controls.brake))?,
            waypoints: waypoint_mae(
                &pred.iter().map(|f| f.record.agent_waypoints).collect::<Vec<_>>(),
                &reference.iter().map(|f| f.record.expert_waypoints).collect::<Vec<_>>(),
            )?,
        };
        let bce = |p: &[f64], g: &[f64]| {
            let mut s = SegSums::default();
            p.iter().zip(g).for_each(|(&p, &g)| s.add(p, g));
            s.bce / s.n as f64
        };
        let losses = TaskLosses {
            seg: seg / pred.len() as f64,
            tl: bce(&tl_pred, &bits(&tl_gt)),
            ss: bce(&ss_pred, &bits(&ss_gt)),
            steering: mae.steering,
            throttle: mae.throttle,
            brake: mae.brake,
            waypoints: mae.waypoints,
        };
        Ok(MetricReport {
            frames: pred.len(),
            iou_per_class,
            iou_mean,
            acc_tl: accuracy(&tl_pred, &tl_gt)?,
            acc_ss: accuracy(&ss_pred, &ss_gt)?,
            mae,
            total_loss: total_loss(&losses, alpha),
            losses,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn iou_examples() {
        assert_eq!(iou(&[1, 0, 1], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(iou(&[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap(), 0.0);
        assert_eq!(iou(&[1, 1, 0], &[0, 1, 1]).unwrap(), 1.0 / 3.0);
        assert_eq!(iou(&[0, 0], &[0, 0]).unwrap(), 1.0);
        assert!(iou(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn accuracy_examples() {
        let mut preds = vec![1.0; 9];
        let mut gts = vec![true; 9];
        preds.extend(vec![0.0; 90]);
        gts.extend(vec![false; 90]);
        preds.push(0.9);
        gts.push(false);
        assert!((accuracy(&preds, &gts).unwrap() - 0.99).abs() < 1e-15);
        assert_eq!(accuracy(&[0.2, 0.7], &[true, false]).unwrap(), 0.0);
        assert!(accuracy(&[], &[]).is_err());
    }

    #[test]
    fn seg_loss_examples() {
        let gt: Vec<f64> = (0..1000).map(|i| (i % 2) as f64).collect();
        let half = seg_loss(&vec![0.5; 1000], &gt).unwrap();
        assert!((half - (core::f64::consts::LN_2 + 0.5)).abs() < 1e-12);
        assert!((half - 1.1931).abs() < 1e-4);
        assert!(seg_loss(&gt, &gt).unwrap() <= 2e-6);
        let inv: Vec<f64> = gt.iter().map(|g| 1.0 - g).collect();
        let worst = seg_loss(&inv, &gt).unwrap();
        assert!((worst - (1.0 - ln(SEG_EPS))).abs() < 1e-6);
        assert_eq!(seg_loss(&[0.0; 4], &[0.0; 4]).unwrap(), -ln(1.0 - SEG_EPS));
    }

    #[test]
    fn mae_and_total() {
        assert!((mae(&[0.3], &[0.1]).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(mae(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        let l = TaskLosses {
            seg: 0.1,
            tl: 0.1,
            ss: 0.1,
            steering: 0.1,
            throttle: 0.1,
            brake: 0.1,
            waypoints: 0.1,
        };
        assert!((total_loss(&l, &LossWeights::default()) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn label_loss_matches_dense() {
        let pred = [0u8, 3, 7, 7, 22];
        let gt = [0u8, 4, 7, 1, 22];
        let dense = |l: &[u8]| -> Vec<f64> { l.iter().flat_map(|&v| (0..NUM_CLASSES as u8).map(move |c| (v == c) as u8 as f64)).collect() };
        let a = label_seg_loss(&pred, &gt);
        let b = seg_loss(&dense(&pred), &dense(&gt)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
