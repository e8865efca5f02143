use std::fs;

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.csv");
    std::env::set_var(partition_cli::CACHE_ENV, &path);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = partition_cli::run(["partitions", "exact", "4"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, b"5\n");
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "0,1\n1,1\n2,2\n3,3\n4,5\n"
    );
}
