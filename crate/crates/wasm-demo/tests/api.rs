use ncprob_wasm_demo::api::*;
use serde_json::json;

#[test]
fn lattice_view_of_nc4() {
    let v = nc_lattice(4).unwrap();
    assert_eq!(v["count"], 14);
    let crossing_free = v["partitions"].as_array().unwrap();
    let row = crossing_free.iter().find(|r| r["text"] == "[[1,4],[2,3]]").unwrap();
    assert_eq!(row["kreweras"], json!([[1, 3], [2], [4]]));
    let zero = crossing_free.iter().find(|r| r["text"] == "[[1],[2],[3],[4]]").unwrap();
    assert_eq!(zero["mobius_to_one"], "-5/1");
    assert!(nc_lattice(0).is_err());
}

#[test]
fn semicircle_transfer_both_ways() {
    assert_eq!(transfer("m2c", "0, 1, 0, 2, 0").unwrap(), json!(["0/1", "1/1", "0/1", "0/1", "0/1"]));
    assert_eq!(transfer("c2m", "0 1 0 0 0").unwrap(), json!(["0/1", "1/1", "0/1", "2/1", "0/1"]));
    assert!(transfer("sideways", "1").is_err());
    assert!(transfer("m2c", "1, x").is_err());
    assert!(transfer("m2c", "1 2 3 4 5 6").is_err(), "degree cap");
}

#[test]
fn semicircles_add_to_variance_two() {
    let v = free_convolution("add", "cumulants", "0,1,0,0", "0,1,0,0").unwrap();
    assert_eq!(v["cumulants"], json!(["0/1", "2/1", "0/1", "0/1"]));
    assert_eq!(v["moments"], json!(["0/1", "2/1", "0/1", "8/1"]));
}

/// Two free Poisson elements of rate 1: Fuss-Catalan moments 1, 3, 12.
#[test]
fn free_poisson_multiplication() {
    let v = free_convolution("mul", "cumulants", "1,1,1", "1,1,1").unwrap();
    assert_eq!(v["moments"], json!(["1/1", "3/1", "12/1"]));
    assert!(free_convolution("mul", "cumulants", "1,1", "1,1,1").is_err());
}

#[test]
fn compression_scales_cumulants() {
    let v = free_compression("cumulants", "1/3, 2, -1, 5", "1/2").unwrap();
    assert_eq!(v["scaling_agrees"], true);
    assert_eq!(v["cumulants"], json!(["1/3", "1/1", "-1/4", "5/8"]));
    assert!(free_compression("moments", "1", "0").is_err());
}
