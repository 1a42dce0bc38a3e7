#![allow(dead_code)]

use std::path::PathBuf;

use tvkit::statesum::{parse_triangulation, Triangulation};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load(name: &str) -> Triangulation {
    let path = fixtures_dir().join(format!("{name}.tri"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_triangulation(&text).unwrap()
}

pub const FIXTURES: [&str; 10] =
    ["s3_1tet", "s3_2tet", "s3_3tet", "s3_4tet", "s3_5tet", "l41_1tet", "l41_4tet", "l52_1tet", "l52_4tet", "l52_5tet"];

/// Fixture pairs related by one move.
pub const PACHNER_PAIRS: [(&str, &str, &str); 6] = [
    ("s3_2tet", "s3_3tet", "2-3"),
    ("s3_1tet", "s3_4tet", "1-4"),
    ("s3_2tet", "s3_5tet", "1-4"),
    ("l41_1tet", "l41_4tet", "1-4"),
    ("l52_1tet", "l52_4tet", "1-4"),
    ("l52_4tet", "l52_5tet", "2-3"),
];

/// Same-manifold groups; every member must give the same value.
pub const MANIFOLDS: [&[&str]; 3] = [
    &["s3_1tet", "s3_2tet", "s3_3tet", "s3_4tet", "s3_5tet"],
    &["l41_1tet", "l41_4tet"],
    &["l52_1tet", "l52_4tet", "l52_5tet"],
];

fn named(mut t: Triangulation, name: &str) -> (String, Triangulation) {
    t.set_name(name);
    (name.split(' ').next().unwrap().to_string(), t)
}

/// Builds every fixture from three one-tetrahedron seeds and a two-tetrahedron sphere.
pub fn generate() -> Vec<(String, Triangulation)> {
    let seed = |body: &str| parse_triangulation(&format!("tets 1\ntet 0: {body}\n")).unwrap();
    let s3 = seed("0/1230 0/3012 0/0132 0/0132");
    let l41 = seed("0/1230 0/3012 0/1230 0/3012");
    let l52 = seed("0/1230 0/3012 0/2031 0/1302");
    let s3_2 = parse_triangulation("tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 0/0123\n")
        .unwrap();
    let l52_4 = l52.move_1_4(0).unwrap();
    vec![
        named(s3.clone(), "s3_1tet S^3, one tetrahedron"),
        named(s3_2.clone(), "s3_2tet S^3, two tetrahedra glued by the identity on every face"),
        named(s3_2.move_2_3(0, 3).unwrap(), "s3_3tet S^3, 2-3 move on s3_2tet across face 3 of tet 0"),
        named(s3.move_1_4(0).unwrap(), "s3_4tet S^3, 1-4 move on s3_1tet"),
        named(s3_2.move_1_4(1).unwrap(), "s3_5tet S^3, 1-4 move on tet 1 of s3_2tet"),
        named(l41.clone(), "l41_1tet L(4,1), one tetrahedron"),
        named(l41.move_1_4(0).unwrap(), "l41_4tet L(4,1), 1-4 move on l41_1tet"),
        named(l52.clone(), "l52_1tet L(5,2), one tetrahedron"),
        named(l52_4.clone(), "l52_4tet L(5,2), 1-4 move on l52_1tet"),
        named(l52_4.move_2_3(0, 0).unwrap(), "l52_5tet L(5,2), 2-3 move on l52_4tet across face 0 of tet 0"),
    ]
}
