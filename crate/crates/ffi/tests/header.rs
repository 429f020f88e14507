//! The generated header declares every exported function and status code.

const HEADER: &str = include_str!("../include/khlab.h");
const SOURCE: &str = include_str!("../src/lib.rs");

#[test]
fn header_declares_every_export() {
    let exports: Vec<&str> = SOURCE.split("extern \"C\" fn ").skip(1).map(|rest| rest.split('(').next().unwrap()).collect();
    assert!(exports.len() >= 12, "{exports:?}");
    for name in exports {
        assert!(HEADER.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_has_status_codes_and_handles() {
    for item in
        ["KH_STATUS_OK = 0", "KH_STATUS_NOT_A_KNOT", "typedef struct KhDiagram KhDiagram", "typedef struct KhHomology KhHomology"]
    {
        assert!(HEADER.contains(item), "{item}");
    }
    assert!(HEADER.starts_with("#ifndef KHLAB_H"));
}
