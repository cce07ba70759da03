mod oracles;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdc_core::classes::{NUM_CLASSES, SKY};
use sdc_core::sdc::{project_sdc, SdcTensor, SDC_CHANNELS, SDC_SIZE};
use sdc_core::sensor::{CameraIntrinsics, DepthMap, SemanticImage};

fn random_pair(rng: &mut ChaCha8Rng) -> (SemanticImage, DepthMap) {
    let n = 256 * 256;
    let sem = (0..n).map(|_| rng.random_range(0..NUM_CLASSES as u8)).collect();
    // mostly inside the 64 m coverage, some beyond, some exactly on grid lines
    let depth = (0..n)
        .map(|_| match rng.random_range(0..10) {
            0 => rng.random_range(64.0..1000.0),
            1 => rng.random_range(0..=256) as f64 * 0.25,
            _ => rng.random_range(0.0..64.0),
        })
        .collect();
    (SemanticImage::from_vec(256, 256, sem), DepthMap::from_vec(256, 256, depth))
}

fn labels(sdc: &SdcTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(SDC_SIZE * SDC_SIZE);
    for r in 0..SDC_SIZE {
        for c in 0..SDC_SIZE {
            out.push(sdc.label(r, c).unwrap_or(oracles::EMPTY));
        }
    }
    out
}

#[test]
fn projection_matches_brute_force_on_random_pairs() {
    let cam = CameraIntrinsics::default();
    let table = cam.projection_table();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let (sem, depth) = random_pair(&mut rng);
        let fast = labels(&project_sdc(&sem, &depth, &table));
        let slow = oracles::brute_force_sdc(sem.as_slice(), depth.as_slice(), 256, cam.fx, cam.cx);
        assert!(fast == slow, "pair {k} differs");
    }
}

#[test]
fn all_sky_projects_nothing() {
    let sem = SemanticImage::new(256, 256, SKY);
    let depth = DepthMap::new(256, 256, 10.0);
    let sdc = project_sdc(&sem, &depth, &CameraIntrinsics::default().projection_table());
    assert!(sdc.is_empty());
}

#[test]
fn center_column_lands_on_center_grid_column() {
    // 90° field of view: column 127.5 is the optical axis; column 128 at
    // depth 32 is 32/128 m right, which rounds onto grid column 128.
    let mut sem = SemanticImage::new(256, 256, SKY);
    sem.set(200, 128, 7);
    let depth = DepthMap::new(256, 256, 32.0);
    let sdc = project_sdc(&sem, &depth, &CameraIntrinsics::default().projection_table());
    assert_eq!(sdc.occupied_cells(), 1);
    assert_eq!(sdc.label(128, 128), Some(7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_hot_has_at_most_one_channel_per_cell(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sem, depth) = random_pair(&mut rng);
        let sdc = project_sdc(&sem, &depth, &CameraIntrinsics::default().projection_table());
        let hot = sdc.to_one_hot();
        prop_assert_eq!(hot.len(), SDC_CHANNELS * SDC_SIZE * SDC_SIZE);
        let plane = SDC_SIZE * SDC_SIZE;
        for cell in 0..plane {
            let set: Vec<usize> = (0..SDC_CHANNELS).filter(|&ch| hot[ch * plane + cell] == 1).collect();
            prop_assert!(set.len() <= 1);
            let label = sdc.label(cell / SDC_SIZE, cell % SDC_SIZE);
            prop_assert_eq!(set.first().map(|&c| c as u8), label);
            prop_assert!(label != Some(SKY));
        }
        prop_assert_eq!(SdcTensor::from_one_hot(&hot).unwrap(), sdc);
    }

    #[test]
    fn cells_stay_inside_the_grid(d in 0.0f64..2000.0, col in 0usize..256) {
        let mut sem = SemanticImage::new(256, 256, SKY);
        sem.set(0, col, 1);
        let depth = DepthMap::new(256, 256, d);
        let sdc = project_sdc(&sem, &depth, &CameraIntrinsics::default().projection_table());
        prop_assert!(sdc.occupied_cells() <= 1);
        if d > 64.0 {
            prop_assert!(sdc.is_empty());
        }
    }
}
