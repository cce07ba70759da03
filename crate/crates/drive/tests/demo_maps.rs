use std::path::PathBuf;

use sdc_drive::config::MapFile;
use sdc_drive::demo;

fn asset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets/maps").join(format!("{name}.toml"))
}

#[test]
fn committed_maps_match_builders() {
    for name in demo::NAMES {
        let committed = MapFile::load(&asset(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(committed, demo::by_name(name).unwrap(), "{name}.toml is stale; run the ignored regenerate test");
    }
}

#[test]
fn committed_maps_build_worlds() {
    for name in demo::NAMES {
        let file = MapFile::load(&asset(name)).unwrap();
        file.world().unwrap();
        assert!(!file.routes.is_empty());
    }
}

#[test]
#[ignore = "rewrites assets/maps"]
fn regenerate_assets() {
    for name in demo::NAMES {
        demo::by_name(name).unwrap().save(&asset(name)).unwrap();
    }
}
