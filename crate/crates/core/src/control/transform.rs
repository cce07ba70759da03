use super::types::LocalPoint;
use crate::geom::Vec2;
use crate::math::sin_cos_deg;
use crate::world::Pose;

/// Global → ego-local transform: subtract the ego position, then apply the
/// transpose of the rotation by `90 + heading` degrees (the compass is
/// oriented to the north).
pub fn global_to_local(point: Vec2, ego: &Pose) -> LocalPoint {
    let dx = point.x - ego.x;
    let dy = point.y - ego.y;
    let (s, c) = sin_cos_deg(90.0 + ego.heading);
    // R = [[c, -s], [s, c]];  Rᵀ·d
    LocalPoint::new(c * dx + s * dy, -s * dx + c * dy)
}

/// Inverse of [`global_to_local`].
pub fn local_to_global(point: LocalPoint, ego: &Pose) -> Vec2 {
    let (s, c) = sin_cos_deg(90.0 + ego.heading);
    Vec2::new(ego.x + c * point.x - s * point.y, ego.y + s * point.x + c * point.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        let ego = Pose::new(12.5, -3.25, 37.0);
        assert_eq!(global_to_local(ego.position(), &ego), LocalPoint::new(0.0, 0.0));

        let identity = Pose::new(0.0, 0.0, -90.0);
        assert_eq!(global_to_local(Vec2::new(3.0, 4.0), &identity), LocalPoint::new(3.0, 4.0));

        let north = Pose::new(0.0, 0.0, 0.0);
        assert_eq!(global_to_local(Vec2::new(1.0, 0.0), &north), LocalPoint::new(0.0, -1.0));
    }

    #[test]
    fn forward_maps_to_plus_y() {
        for h in [-170.0, -90.0, -12.0, 0.0, 45.0, 135.0] {
            let ego = Pose::new(4.0, 5.0, h);
            let ahead = ego.position() + ego.forward() * 10.0;
            let l = global_to_local(ahead, &ego);
            assert!(libm::fabs(l.x) < 1e-9 && libm::fabs(l.y - 10.0) < 1e-9, "{h}: {l:?}");
            let right = ego.position() + ego.right() * 2.0;
            let r = global_to_local(right, &ego);
            assert!(libm::fabs(r.x - 2.0) < 1e-9 && libm::fabs(r.y) < 1e-9);
        }
    }

    #[test]
    fn round_trip() {
        let ego = Pose::new(-7.0, 2.0, 121.0);
        let p = Vec2::new(3.3, -8.1);
        let back = local_to_global(global_to_local(p, &ego), &ego);
        assert!(p.dist(back) < 1e-12);
    }
}
