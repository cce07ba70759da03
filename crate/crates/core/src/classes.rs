//! Semantic class vocabulary (23 classes, CARLA 0.9.10 palette order).

pub const NUM_CLASSES: usize = 23;

pub const UNLABELED: u8 = 0;
pub const BUILDING: u8 = 1;
pub const FENCE: u8 = 2;
pub const OTHER: u8 = 3;
pub const PEDESTRIAN: u8 = 4;
pub const POLE: u8 = 5;
pub const ROAD_LANE: u8 = 6;
pub const ROAD: u8 = 7;
pub const SIDEWALK: u8 = 8;
pub const VEGETATION: u8 = 9;
pub const OTHER_VEHICLES: u8 = 10;
pub const WALL: u8 = 11;
pub const TRAFFIC_SIGN: u8 = 12;
pub const SKY: u8 = 13;
pub const GROUND: u8 = 14;
pub const BRIDGE: u8 = 15;
pub const RAIL_TRACK: u8 = 16;
pub const GUARD_RAIL: u8 = 17;
pub const TRAFFIC_LIGHT: u8 = 18;
pub const STATIC_OBJECT: u8 = 19;
pub const DYNAMIC_OBJECT: u8 = 20;
pub const WATER: u8 = 21;
pub const TERRAIN: u8 = 22;

pub const NAMES: [&str; NUM_CLASSES] = [
    "Unlabeled",
    "Building",
    "Fence",
    "Other",
    "Pedestrian",
    "Pole",
    "Road lane",
    "Road",
    "Sidewalk",
    "Vegetation",
    "Other vehicles",
    "Wall",
    "Traffic sign",
    "Sky",
    "Ground",
    "Bridge",
    "Rail track",
    "Guard rail",
    "Traffic light",
    "Static object",
    "Dynamic object",
    "Water",
    "Terrain",
];

/// Display colors for visualization, indexed by class id.
pub const PALETTE: [[u8; 3]; NUM_CLASSES] = [
    [0, 0, 0],
    [70, 70, 70],
    [100, 40, 40],
    [55, 90, 80],
    [220, 20, 60],
    [153, 153, 153],
    [157, 234, 50],
    [128, 64, 128],
    [244, 35, 232],
    [107, 142, 35],
    [0, 0, 142],
    [102, 102, 156],
    [220, 220, 0],
    [70, 130, 180],
    [81, 0, 81],
    [150, 100, 100],
    [230, 150, 140],
    [180, 165, 180],
    [250, 170, 30],
    [110, 190, 160],
    [170, 120, 50],
    [45, 60, 150],
    [145, 170, 100],
];

#[inline]
pub fn is_valid(id: u8) -> bool {
    (id as usize) < NUM_CLASSES
}
