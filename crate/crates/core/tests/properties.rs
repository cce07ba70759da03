use proptest::prelude::*;

use sdc_core::classes;
use sdc_core::control::{compute_beta, global_to_local, local_to_global, LossWeights, Pid, PidGains};
use sdc_core::geom::Vec2;
use sdc_core::scoring::{iou, infraction_penalty, InfractionKind, InfractionLedger, PenaltyTable};
use sdc_core::sensor::{decode_depth, encode_depth, RenderScene, DEPTH_RANGE, DEPTH_STEP};
use sdc_core::world::{Pose, StaticObstacle, VehicleParams, World, WorldMap};

fn pose() -> impl Strategy<Value = Pose> {
    (-1e4..1e4f64, -1e4..1e4f64, -360.0..360.0f64).prop_map(|(x, y, h)| Pose::new(x, y, h))
}

fn point() -> impl Strategy<Value = Vec2> {
    (-1e4..1e4f64, -1e4..1e4f64).prop_map(|(x, y)| Vec2::new(x, y))
}

proptest! {
    #[test]
    fn transform_is_an_isometry(ego in pose(), a in point(), b in point()) {
        let (la, lb) = (global_to_local(a, &ego), global_to_local(b, &ego));
        prop_assert!((la.dist(lb) - a.dist(b)).abs() <= 1e-9 * a.dist(b).max(1.0));
        prop_assert_eq!(global_to_local(ego.position(), &ego).x, 0.0);
        prop_assert_eq!(global_to_local(ego.position(), &ego).y, 0.0);
        let back = local_to_global(la, &ego);
        prop_assert!(back.dist(a) <= 1e-8);
    }

    #[test]
    fn depth_codec_is_monotone(a in 0.0..DEPTH_RANGE, b in 0.0..DEPTH_RANGE) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(encode_depth(lo).unwrap().code() <= encode_depth(hi).unwrap().code());
    }

    #[test]
    fn depth_round_trip_within_one_step(d in 0.0..=DEPTH_RANGE) {
        let back = decode_depth(encode_depth(d).unwrap());
        prop_assert!((back - d).abs() <= DEPTH_STEP);
    }

    #[test]
    fn beta_rows_complement_and_ignore_scale(
        alpha in prop::array::uniform7(0.01..10.0f64),
        c in prop::sample::select(vec![0.5, 2.0, 10.0]),
    ) {
        let a = LossWeights(alpha);
        let beta = compute_beta(&a).unwrap();
        let scaled = compute_beta(&a.scaled(c)).unwrap();
        for j in 0..3 {
            prop_assert!((beta.0[0][j] + beta.0[1][j] - 1.0).abs() <= 1e-12);
            prop_assert!((beta.0[0][j] - scaled.0[0][j]).abs() <= 1e-12);
            prop_assert!((beta.0[1][j] - scaled.0[1][j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn pid_reset_replays_identically(errors in prop::collection::vec(-5.0..5.0f64, 1..80)) {
        let mut pid = Pid::new(PidGains::default().lateral);
        let first: Vec<f64> = errors.iter().map(|&e| pid.update(e)).collect();
        pid.reset();
        let second: Vec<f64> = errors.iter().map(|&e| pid.update(e)).collect();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn iou_is_symmetric_and_bounded(pair in prop::collection::vec((0u8..2, 0u8..2), 0..300)) {
        let (a, b): (Vec<u8>, Vec<u8>) = pair.into_iter().unzip();
        let ab = iou(&a, &b).unwrap();
        prop_assert_eq!(ab, iou(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(iou(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn penalty_multiplies_over_concatenation(
        x in prop::array::uniform5(0u32..4),
        y in prop::array::uniform5(0u32..4),
    ) {
        let ledger = |n: [u32; 5]| {
            let counts: Vec<(InfractionKind, u32)> = InfractionKind::ALL.iter().copied().zip(n).collect();
            InfractionLedger::from_counts(&counts)
        };
        let table = PenaltyTable::default();
        let (a, b) = (ledger(x), ledger(y));
        let joint = infraction_penalty(&a.concat(&b), &table);
        let product = infraction_penalty(&a, &table) * infraction_penalty(&b, &table);
        prop_assert!((joint - product).abs() <= 1e-12 * product.max(1e-300));
    }
}

const BOX_LO: Vec2 = Vec2 { x: 10.0, y: -2.0 };
const BOX_HI: Vec2 = Vec2 { x: 14.0, y: 3.0 };
const BOX_H: f64 = 2.5;

fn boxed_world() -> World {
    let map = WorldMap {
        name: "box".into(),
        roads: vec![vec![Vec2::new(-50.0, -4.0), Vec2::new(50.0, -4.0), Vec2::new(50.0, 4.0), Vec2::new(-50.0, 4.0)]],
        lanes: vec![],
        sidewalks: vec![],
        markings: vec![],
        marking_width: 0.15,
        obstacles: vec![StaticObstacle {
            footprint: vec![BOX_LO, Vec2::new(BOX_HI.x, BOX_LO.y), BOX_HI, Vec2::new(BOX_LO.x, BOX_HI.y)],
            height: BOX_H,
            class: classes::BUILDING,
        }],
        intersections: vec![],
        traffic_lights: vec![],
        stop_signs: vec![],
        ground_class: classes::TERRAIN,
        lane_width: 3.5,
    };
    World::new(map, vec![], VehicleParams::default()).unwrap()
}

/// Euclidean distance from `p` to the solid box.
fn box_distance(p: [f64; 3]) -> f64 {
    let gap = |v: f64, lo: f64, hi: f64| (lo - v).max(0.0).max(v - hi);
    let d = [gap(p[0], BOX_LO.x, BOX_HI.x), gap(p[1], BOX_LO.y, BOX_HI.y), gap(p[2], 0.0, BOX_H)];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

fn on_box_surface(p: [f64; 3]) -> bool {
    const E: f64 = 1e-9;
    let inside = |v: f64, lo: f64, hi: f64| v >= lo - E && v <= hi + E;
    let face = |v: f64, lo: f64, hi: f64| (v - lo).abs() <= E || (v - hi).abs() <= E;
    inside(p[0], BOX_LO.x, BOX_HI.x)
        && inside(p[1], BOX_LO.y, BOX_HI.y)
        && inside(p[2], 0.0, BOX_H)
        && (face(p[0], BOX_LO.x, BOX_HI.x) || face(p[1], BOX_LO.y, BOX_HI.y) || (p[2] - BOX_H).abs() <= E)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ray_hits_land_on_the_box_beyond_its_distance(
        ox in -20.0..5.0f64, oy in -10.0..10.0f64, oz in 0.5..6.0f64,
        tx in 10.0..14.0f64, ty in -2.0..3.0f64, tz in 0.0..2.5f64,
        scale in 0.1..3.0f64,
    ) {
        let world = boxed_world();
        let state = world.initial_state(Pose::new(-40.0, 0.0, 180.0), false);
        let scene = RenderScene::new(&world, &state);
        let origin = [ox, oy, oz];
        let dir = [(tx - ox) * scale, (ty - oy) * scale, (tz - oz) * scale];
        let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        let (t, class) = scene.trace(origin, dir).expect("aimed at the box");
        let range = t * norm;
        let hit = [ox + t * dir[0], oy + t * dir[1], oz + t * dir[2]];
        if class == classes::BUILDING {
            prop_assert!(on_box_surface(hit), "{hit:?}");
            prop_assert!(range >= box_distance(origin) - 1e-9);
        } else {
            // the ground got in the way before the box
            prop_assert!(hit[2].abs() <= 1e-9);
        }
        prop_assert!(range <= 1.0 / scale * norm + 1e-9);
    }
}
